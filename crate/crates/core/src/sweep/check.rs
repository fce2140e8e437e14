//! Self-check suite: oracle equivalence and invariants of every module,
//! reported per property with the worst deviation seen.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::entropy::{
    eigen_closed_form, eigenvalues_numeric, shannon, solve_alpha_at_max, von_neumann,
    vn_indistinguishable,
};
use crate::error::Result;
use crate::kinematics::{
    boost_matrix, rotation_angle_axis, wigner_matrix_numeric, FourMomentum, Rapidity,
};
use crate::states::{
    det_distinguishable_closed_form, reduced_dm_distinguishable, reduced_dm_indistinguishable,
    to_product_basis, BellBasisDM, DensityMatrix, PairWeights,
};
use crate::wigner::{
    coeff_ab, coeff_ab_oracle, pair_coeffs, pair_coeffs_velocity, GeometryParams, WignerCoeffs,
};

pub const SEED: u64 = 0x005e_ede9_2001;
pub const RANDOM_DRAWS: usize = 100_000;
pub const ORACLE_GRID: usize = 50;
/// The 4×4 composition loses digits to cancellation beyond this rapidity.
pub const ORACLE_MAX_RAPIDITY: f64 = 3.0;
pub const MAX_DRAW_RAPIDITY: f64 = 8.0;

/// Deliberate corruption used as a negative control.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Perturbation {
    #[default]
    None,
    /// Negate the closed-form `B` before comparing it with the oracle.
    FlipBSign,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyResult {
    pub name: &'static str,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl PropertyResult {
    fn within(name: &'static str, max_deviation: f64, tolerance: f64) -> Self {
        PropertyResult {
            name,
            max_deviation,
            tolerance,
            // NaN never passes
            passed: max_deviation <= tolerance,
        }
    }

    fn from_result(name: &'static str, r: Result<f64>, tolerance: f64) -> Self {
        match r {
            Ok(dev) => PropertyResult::within(name, dev, tolerance),
            Err(_) => PropertyResult::within(name, f64::INFINITY, tolerance),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub results: Vec<PropertyResult>,
    pub elapsed_secs: f64,
}

impl CheckReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn get(&self, name: &str) -> Option<&PropertyResult> {
        self.results.iter().find(|r| r.name == name)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            writeln!(
                f,
                "{} {:<34} max_dev={:.3e} tol={:.1e}",
                if r.passed { "PASS" } else { "FAIL" },
                r.name,
                r.max_deviation,
                r.tolerance
            )?;
        }
        let failed = self.results.iter().filter(|r| !r.passed).count();
        write!(
            f,
            "{} properties, {failed} failed, {:.2} s",
            self.results.len(),
            self.elapsed_secs
        )
    }
}

struct Draw {
    phi: Rapidity,
    alpha: Rapidity,
    theta: f64,
    weights: PairWeights,
}

fn draws(rng: &mut ChaCha8Rng, n: usize, max_rapidity: f64) -> Vec<Draw> {
    (0..n)
        .map(|_| Draw {
            phi: Rapidity(rng.random_range(0.0..=max_rapidity)),
            alpha: Rapidity(rng.random_range(0.0..=max_rapidity)),
            theta: rng.random_range(0.0..=PI),
            weights: PairWeights::from_p1(rng.random_range(0.0..=1.0)).expect("p1 in [0, 1]"),
        })
        .collect()
}

fn pair_at(d: &Draw, theta: f64) -> WignerCoeffs {
    pair_coeffs(&GeometryParams::new(d.phi, d.alpha, theta).expect("theta in range"))
}

fn normalization(ds: &[Draw]) -> f64 {
    ds.iter()
        .map(|d| {
            let g = GeometryParams::new(d.phi, d.alpha, d.theta).expect("theta in range");
            let s = coeff_ab(&g);
            s.norm_defect().max(pair_coeffs(&g).norm_defect())
        })
        .fold(0.0, f64::max)
}

fn oracle_equivalence(perturb: Perturbation) -> Result<f64> {
    let n = ORACLE_GRID;
    let rap = |i: usize| ORACLE_MAX_RAPIDITY * (i + 1) as f64 / n as f64;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let theta = PI * k as f64 / (n - 1) as f64;
                let g = GeometryParams::from_rapidities(rap(i), rap(j), theta)?;
                let mut closed = coeff_ab(&g);
                if perturb == Perturbation::FlipBSign {
                    closed.b_coeff = -closed.b_coeff;
                }
                let oracle = coeff_ab_oracle(&g)?;
                worst = worst
                    .max((closed.a_coeff - oracle.a_coeff).abs())
                    .max((closed.b_coeff - oracle.b_coeff).abs());
            }
        }
    }
    Ok(worst)
}

fn exchange_symmetry(ds: &[Draw]) -> f64 {
    ds.iter()
        .map(|d| {
            let g = GeometryParams::new(d.phi, d.alpha, d.theta).expect("theta in range");
            let (x, y) = (pair_coeffs(&g), pair_coeffs(&g.swapped()));
            (x.a - y.a).abs().max((x.b - y.b).abs())
        })
        .fold(0.0, f64::max)
}

fn singlet_at_right_angle(ds: &[Draw]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for d in ds {
        let w = pair_at(d, FRAC_PI_2);
        let s = von_neumann(&BellBasisDM::projector(&w))?.value();
        worst = worst.max(w.b.abs()).max((w.a - 1.0).abs()).max(s.abs());
    }
    Ok(worst)
}

fn parity_about_right_angle(ds: &[Draw]) -> f64 {
    ds.iter()
        .map(|d| {
            let x = (d.theta - FRAC_PI_2).abs();
            let (lo, hi) = (pair_at(d, FRAC_PI_2 - x), pair_at(d, FRAC_PI_2 + x));
            (lo.a - hi.a).abs().max((lo.b + hi.b).abs())
        })
        .fold(0.0, f64::max)
}

fn eigenvalues_agree(ds: &[Draw]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for d in ds {
        let (w0, wt) = (pair_at(d, 0.0), pair_at(d, d.theta));
        let dm = reduced_dm_distinguishable(d.weights, &w0, &wt);
        let det = det_distinguishable_closed_form(d.weights, &w0, &wt, d.theta);
        let (l1, l2) = eigen_closed_form(det)?;
        let numeric = eigenvalues_numeric(&dm)?;
        let bound = d.weights.p1() * d.weights.p2();
        worst = worst
            .max((l2 - numeric[0]).abs())
            .max((l1 - numeric[1]).abs())
            .max((det - dm.det()).abs())
            .max(-det)
            .max(det - bound);
    }
    Ok(worst)
}

fn trace_and_psd(ds: &[Draw]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for d in ds {
        let (w0, wt) = (pair_at(d, 0.0), pair_at(d, d.theta));
        for dm in [
            reduced_dm_distinguishable(d.weights, &w0, &wt),
            reduced_dm_indistinguishable(d.weights, &w0, &wt),
        ] {
            let ev = eigenvalues_numeric(&dm)?;
            worst = worst
                .max((dm.trace() - 1.0).abs())
                .max(dm.asymmetry())
                .max(-ev[0]);
        }
    }
    Ok(worst)
}

fn shannon_relation(ds: &[Draw]) -> f64 {
    ds.iter()
        .map(|d| {
            let (w0, wt) = (pair_at(d, 0.0), pair_at(d, d.theta));
            let sh = shannon(d.weights, &w0, &wt).value();
            (vn_indistinguishable(d.weights, &w0, &wt).value() - (sh - 1.0)).abs()
        })
        .fold(0.0, f64::max)
}

fn indistinguishable_mirror(ds: &[Draw]) -> f64 {
    ds.iter()
        .map(|d| {
            let w0 = pair_at(d, 0.0);
            let s = vn_indistinguishable(d.weights, &w0, &pair_at(d, d.theta)).value();
            let m = vn_indistinguishable(d.weights, &w0, &pair_at(d, PI - d.theta)).value();
            (s - m).abs()
        })
        .fold(0.0, f64::max)
}

fn lorentz_group(rng: &mut ChaCha8Rng, n: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let dir = |rng: &mut ChaCha8Rng| {
            let t: f64 = rng.random_range(0.0..=PI);
            let p: f64 = rng.random_range(0.0..2.0 * PI);
            [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()]
        };
        let b1 = boost_matrix(Rapidity(rng.random_range(0.0..=ORACLE_MAX_RAPIDITY)), dir(rng))?;
        let b2 = boost_matrix(Rapidity(rng.random_range(0.0..=ORACLE_MAX_RAPIDITY)), dir(rng))?;
        let prod = b1 * b2;
        // relative to the entry scale, which grows like e^{2·rapidity}
        let scale = prod.get(0, 0).powi(2);
        worst = worst
            .max(b1.metric_defect() / b1.get(0, 0).powi(2))
            .max(prod.metric_defect() / scale)
            .max((prod.det() - 1.0).abs() / scale)
            .max((prod * prod.inverse()).max_abs_diff(&crate::kinematics::LorentzMatrix::identity()) / scale);
    }
    Ok(worst)
}

fn wigner_fixes_rest(ds: &[Draw]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for d in ds {
        let boost = boost_matrix(d.alpha, crate::wigner::BOOST_DIRECTION)?;
        let p = FourMomentum::from_speed(1.0, d.phi.velocity(), d.theta)?;
        let w = wigner_matrix_numeric(&boost, &p)?;
        let rest = w.apply([1.0, 0.0, 0.0, 0.0]);
        worst = worst
            .max((rest[0] - 1.0).abs())
            .max(rest[1].abs())
            .max(rest[2].abs())
            .max(rest[3].abs())
            .max(w.rotation_defect())
            .max(w.metric_defect());
        rotation_angle_axis(&w)?;
    }
    Ok(worst)
}

/// At the solved maximum `M(0) M(θ) = 0` and the entropy reaches the mixing
/// entropy of the weights.
fn maximum_orthogonality() -> Result<(f64, f64)> {
    let mut ortho: f64 = 0.0;
    let mut entropy_dev: f64 = 0.0;
    for &v in &[0.8, 0.9, 0.99, 0.999] {
        let phi = Rapidity::from_velocity(v)?;
        for k in 1..=10 {
            let theta = FRAC_PI_2 + (PI - FRAC_PI_2) * k as f64 / 10.0;
            let Some(sol) = solve_alpha_at_max(phi, theta) else {
                continue;
            };
            let g = GeometryParams::new(phi, sol.alpha, 0.0)?;
            let (w0, wt) = (pair_coeffs(&g), pair_coeffs(&g.with_theta(theta)?));
            let prod = BellBasisDM::projector(&w0).product(&BellBasisDM::projector(&wt));
            for row in prod {
                for x in row {
                    ortho = ortho.max(x.abs());
                }
            }
            for p1 in [0.5, 0.25, 0.75] {
                let w = PairWeights::from_p1(p1)?;
                let s = von_neumann(&reduced_dm_distinguishable(w, &w0, &wt))?.value();
                entropy_dev = entropy_dev.max((s - w.mixing_entropy()).abs());
            }
        }
    }
    Ok((ortho, entropy_dev))
}

fn velocity_form(ds: &[Draw]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for d in ds {
        let w = pair_at(d, d.theta);
        let v = pair_coeffs_velocity(d.phi.velocity(), d.alpha, d.theta)?;
        worst = worst.max((w.a - v.a).abs()).max((w.b - v.b).abs());
    }
    Ok(worst)
}

fn product_basis_spectrum(ds: &[Draw]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for d in ds {
        let dm = reduced_dm_distinguishable(d.weights, &pair_at(d, 0.0), &pair_at(d, d.theta));
        let prod = to_product_basis(&dm);
        let small = eigenvalues_numeric(&dm)?;
        let big = eigenvalues_numeric(&prod)?;
        // the embedding adds two zero eigenvalues
        worst = worst
            .max(big[0].abs())
            .max(big[1].abs())
            .max((big[2] - small[0]).abs())
            .max((big[3] - small[1]).abs())
            .max((prod.trace() - 1.0).abs());
    }
    Ok(worst)
}

/// Run every property. Deterministic for a fixed [`SEED`].
pub fn self_check(perturbation: Perturbation) -> CheckReport {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let wide = draws(&mut rng, RANDOM_DRAWS, MAX_DRAW_RAPIDITY);
    let narrow = draws(&mut rng, 10_000, ORACLE_MAX_RAPIDITY);

    let mut results = vec![
        PropertyResult::within("normalization a2+b2, A2+B2", normalization(&wide), 1e-12),
        PropertyResult::from_result("oracle equivalence (signed A, B)", oracle_equivalence(perturbation), 1e-10),
        PropertyResult::within("exchange symmetry phi <-> alpha", exchange_symmetry(&wide), 1e-12),
        PropertyResult::from_result("singlet preserved at theta=pi/2", singlet_at_right_angle(&wide), 1e-12),
        PropertyResult::within("a even, b odd about pi/2", parity_about_right_angle(&wide), 1e-12),
        PropertyResult::from_result("closed-form eigenvalues, det bounds", eigenvalues_agree(&wide), 1e-10),
        PropertyResult::from_result("trace one, symmetric, PSD", trace_and_psd(&wide), 1e-12),
        PropertyResult::within("S_vN(indist) = S_Sh - 1", shannon_relation(&wide), 1e-12),
        PropertyResult::within("indist entropy mirror symmetry", indistinguishable_mirror(&wide), 1e-9),
        PropertyResult::from_result("Lorentz metric and group closure", lorentz_group(&mut rng, 10_000), 1e-12),
        PropertyResult::from_result("Wigner element fixes rest frame", wigner_fixes_rest(&narrow), 1e-9),
        PropertyResult::from_result("velocity form = rapidity form", velocity_form(&narrow), 1e-12),
        PropertyResult::from_result("product-basis spectrum preserved", product_basis_spectrum(&wide), 1e-12),
    ];
    match maximum_orthogonality() {
        Ok((ortho, ent)) => {
            results.push(PropertyResult::within("M(0) M(theta) = 0 at the maximum", ortho, 1e-8));
            results.push(PropertyResult::within("maximum equals mixing entropy", ent, 1e-8));
        }
        Err(_) => {
            results.push(PropertyResult::within("M(0) M(theta) = 0 at the maximum", f64::INFINITY, 1e-8));
            results.push(PropertyResult::within("maximum equals mixing entropy", f64::INFINITY, 1e-8));
        }
    }
    CheckReport {
        results,
        elapsed_secs: start.elapsed().as_secs_f64(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_build_passes_and_negative_control_fails() {
        let report = self_check(Perturbation::None);
        assert!(report.all_passed(), "{report}");
        let name = "oracle equivalence (signed A, B)";
        assert!(report.get(name).unwrap().max_deviation < 1e-10);

        let bad = self_check(Perturbation::FlipBSign);
        assert!(!bad.get(name).unwrap().passed);
        assert!(!bad.all_passed());
    }
}
