//! Parameter sweeps over `(α, θ)` grids and the data behind the figures.

pub mod check;
pub mod config;
pub mod figures;
pub mod format;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::entropy::{shannon, von_neumann, vn_indistinguishable};
use crate::error::{Error, Result};
use crate::kinematics::Rapidity;
use crate::states::{reduced_dm_distinguishable, reduced_dm_indistinguishable, PairWeights};
use crate::wigner::{pair_coeffs, GeometryParams, WignerCoeffs};

/// Speed used for the super-relativistic presets.
pub const DEFAULT_V_MAX: f64 = 0.999;

/// Lower end of both `α` and `θ` in the figure grids.
pub const GRID_LOWER: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntropyKind {
    /// Von Neumann entropy of `p₁ M(0) + p₂ M(θ)`.
    VnDistinguishable,
    /// Shannon entropy of the four z-basis outcomes.
    Shannon,
    /// Von Neumann entropy of the antisymmetrised four-direction state.
    VnIndistinguishable,
}

impl FromStr for EntropyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "vn" | "vn-distinguishable" => Ok(EntropyKind::VnDistinguishable),
            "shannon" => Ok(EntropyKind::Shannon),
            "vn-indist" | "vn-indistinguishable" => Ok(EntropyKind::VnIndistinguishable),
            other => Err(Error::usage(format!(
                "unknown entropy kind '{other}' (expected vn, shannon or vn-indist)"
            ))),
        }
    }
}

impl fmt::Display for EntropyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntropyKind::VnDistinguishable => "vn",
            EntropyKind::Shannon => "shannon",
            EntropyKind::VnIndistinguishable => "vn-indist",
        })
    }
}

/// Inclusive uniform grid `lo, …, hi` with `steps` points. A single step
/// yields just `lo`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRange {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl GridRange {
    pub fn new(lo: f64, hi: f64, steps: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi || steps == 0 {
            return Err(Error::usage(format!(
                "invalid range {lo}:{hi}:{steps} (need lo <= hi and steps >= 1)"
            )));
        }
        Ok(GridRange { lo, hi, steps })
    }

    pub fn single(value: f64) -> Self {
        GridRange { lo: value, hi: value, steps: 1 }
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.steps == 1 {
            return self.lo;
        }
        if i + 1 == self.steps {
            return self.hi;
        }
        self.lo + (self.hi - self.lo) * i as f64 / (self.steps - 1) as f64
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.steps).map(move |i| self.value(i))
    }
}

impl FromStr for GridRange {
    type Err = Error;

    /// `lo:hi:steps`, where `lo` and `hi` may also be written `pi` or
    /// `atanh(v)`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, steps] = parts.as_slice() else {
            return Err(Error::usage(format!("range '{s}' is not of the form lo:hi:steps")));
        };
        let steps = steps
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::usage(format!("bad step count in '{s}'")))?;
        GridRange::new(parse_scalar(lo)?, parse_scalar(hi)?, steps)
    }
}

/// A number, `pi`, or `atanh(x)`.
pub fn parse_scalar(s: &str) -> Result<f64> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("pi") {
        return Ok(PI);
    }
    if let Some(inner) = t.strip_prefix("atanh(").and_then(|r| r.strip_suffix(')')) {
        let v = parse_scalar(inner)?;
        return Rapidity::from_velocity(v)
            .map(Rapidity::value)
            .map_err(|e| Error::usage(e.to_string()));
    }
    t.parse::<f64>()
        .map_err(|_| Error::usage(format!("cannot parse '{t}' as a number")))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub entropy_kind: EntropyKind,
    pub p1: f64,
    pub phi: Rapidity,
    pub alpha_range: GridRange,
    pub theta_range: GridRange,
    pub renormalize_shannon: bool,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p1) {
            return Err(Error::usage(format!("p1 must lie in [0, 1], got {}", self.p1)));
        }
        for r in [&self.alpha_range, &self.theta_range] {
            GridRange::new(r.lo, r.hi, r.steps)?;
        }
        if self.alpha_range.lo < 0.0 {
            return Err(Error::usage("alpha range must be non-negative"));
        }
        if self.theta_range.lo < 0.0 || self.theta_range.hi > PI + 1e-12 {
            return Err(Error::usage("theta range must lie within [0, pi]"));
        }
        Ok(())
    }

    pub fn weights(&self) -> Result<PairWeights> {
        PairWeights::from_p1(self.p1).map_err(|e| Error::usage(e.to_string()))
    }

    pub fn len(&self) -> usize {
        self.alpha_range.steps * self.theta_range.steps
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// One grid point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub theta: f64,
    pub entropy: f64,
    pub a0: f64,
    pub b0: f64,
    pub a_theta: f64,
    pub b_theta: f64,
    /// Determinant of the density matrix whose entropy is reported; for
    /// Shannon rows that is the (diagonal) indistinguishable matrix.
    pub det: f64,
}

/// Coefficients at `0` and `θ` for one `(φ, α, θ)` point.
pub fn pair_at_zero_and_theta(
    phi: Rapidity,
    alpha: Rapidity,
    theta: f64,
) -> Result<(WignerCoeffs, WignerCoeffs)> {
    let g = GeometryParams::new(phi, alpha, theta)?;
    Ok((pair_coeffs(&g.with_theta(0.0)?), pair_coeffs(&g)))
}

/// Entropy of one kind at one parameter point, plus the row bookkeeping.
pub fn evaluate_point(
    kind: EntropyKind,
    weights: PairWeights,
    phi: Rapidity,
    alpha: Rapidity,
    theta: f64,
    renormalize_shannon: bool,
) -> Result<SweepRow> {
    let (w0, wt) = pair_at_zero_and_theta(phi, alpha, theta)?;
    let (entropy, det) = match kind {
        EntropyKind::VnDistinguishable => {
            let dm = reduced_dm_distinguishable(weights, &w0, &wt);
            (von_neumann(&dm)?.value(), dm.det())
        }
        EntropyKind::Shannon => {
            let dm = reduced_dm_indistinguishable(weights, &w0, &wt);
            let s = shannon(weights, &w0, &wt).value();
            (if renormalize_shannon { s - 1.0 } else { s }, dm.det())
        }
        EntropyKind::VnIndistinguishable => {
            let dm = reduced_dm_indistinguishable(weights, &w0, &wt);
            (vn_indistinguishable(weights, &w0, &wt).value(), dm.det())
        }
    };
    Ok(SweepRow {
        alpha: alpha.value(),
        theta,
        entropy,
        a0: w0.a,
        b0: w0.b,
        a_theta: wt.a,
        b_theta: wt.b,
        det,
    })
}

/// Rows in `α`-outer, `θ`-inner order, produced lazily.
pub fn run_sweep(config: &SweepConfig) -> Result<impl Iterator<Item = Result<SweepRow>> + '_> {
    config.validate()?;
    let weights = config.weights()?;
    let ths = config.theta_range.steps;
    Ok((0..config.len()).map(move |k| {
        let alpha = Rapidity::new(config.alpha_range.value(k / ths))?;
        let theta = config.theta_range.value(k % ths).min(PI);
        evaluate_point(
            config.entropy_kind,
            weights,
            config.phi,
            alpha,
            theta,
            config.renormalize_shannon,
        )
    }))
}
