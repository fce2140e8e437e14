use std::f64::consts::PI;

use proptest::prelude::*;

use wigner_epr::entropy::{eigenvalues_numeric, shannon, von_neumann, vn_indistinguishable};
use wigner_epr::kinematics::{boost_matrix, rotation_angle_axis, RotationAngleAxis, Rapidity};
use wigner_epr::states::{
    reduced_dm_distinguishable, reduced_dm_indistinguishable, DensityMatrix, PairWeights,
};
use wigner_epr::sweep::GridRange;
use wigner_epr::wigner::{coeff_ab, pair_coeffs, GeometryParams};

fn rapidity() -> impl Strategy<Value = f64> {
    0.0..8.0f64
}

fn geometry() -> impl Strategy<Value = GeometryParams> {
    (rapidity(), rapidity(), 0.0..=PI)
        .prop_map(|(phi, alpha, theta)| GeometryParams::from_rapidities(phi, alpha, theta).unwrap())
}

fn unit_vector() -> impl Strategy<Value = [f64; 3]> {
    (0.0..=PI, 0.0..(2.0 * PI)).prop_map(|(t, p): (f64, f64)| [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()])
}

proptest! {
    #[test]
    fn coefficients_are_normalized(g in geometry()) {
        prop_assert!(coeff_ab(&g).norm_defect() <= 1e-12);
        prop_assert!(pair_coeffs(&g).norm_defect() <= 1e-12);
    }

    #[test]
    fn exchange_symmetric(g in geometry()) {
        let (x, y) = (pair_coeffs(&g), pair_coeffs(&g.swapped()));
        prop_assert!((x.a - y.a).abs() <= 1e-12 && (x.b - y.b).abs() <= 1e-12);
    }

    #[test]
    fn density_matrices_are_states(g in geometry(), p1 in 0.0..=1.0f64) {
        let w = PairWeights::from_p1(p1).unwrap();
        let (w0, wt) = (pair_coeffs(&g.with_theta(0.0).unwrap()), pair_coeffs(&g));
        let dist = reduced_dm_distinguishable(w, &w0, &wt);
        let indist = reduced_dm_indistinguishable(w, &w0, &wt);
        for dm in [dist, indist] {
            prop_assert!((dm.trace() - 1.0).abs() <= 1e-12);
            prop_assert!(eigenvalues_numeric(&dm).unwrap()[0] >= -1e-12);
        }
        prop_assert!(dist.det() >= -1e-15 && dist.det() <= p1 * (1.0 - p1) + 1e-15);
        prop_assert_eq!(indist.coherence(), 0.0);

        let s = von_neumann(&dist).unwrap().value();
        prop_assert!((-1e-12..=w.mixing_entropy() + 1e-9).contains(&s));
        let sh = shannon(w, &w0, &wt).value();
        prop_assert!((1.0 - 1e-12..=2.0 + 1e-12).contains(&sh));
        prop_assert!((vn_indistinguishable(w, &w0, &wt).value() - (sh - 1.0)).abs() <= 1e-12);
    }

    #[test]
    fn boosts_preserve_the_metric(r1 in 0.0..3.0f64, r2 in 0.0..3.0f64, n1 in unit_vector(), n2 in unit_vector()) {
        let b1 = boost_matrix(Rapidity::new(r1).unwrap(), n1).unwrap();
        let b2 = boost_matrix(Rapidity::new(r2).unwrap(), n2).unwrap();
        let prod = b1 * b2;
        let scale = prod.get(0, 0).powi(2);
        prop_assert!(prod.metric_defect() <= 1e-12 * scale);
        prop_assert!((prod.det() - 1.0).abs() <= 1e-11 * scale);
        prop_assert!(prod.get(0, 0) >= 1.0);
    }

    #[test]
    fn angle_axis_round_trip(angle in 1e-3..(PI - 1e-3), axis in unit_vector()) {
        let r = RotationAngleAxis { angle, axis };
        let back = rotation_angle_axis(&r.to_lorentz()).unwrap();
        prop_assert!((back.angle - angle).abs() <= 1e-9);
        let dot: f64 = (0..3).map(|i| back.axis[i] * axis[i]).sum();
        prop_assert!((dot - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn grid_hits_both_endpoints(lo in -5.0..5.0f64, span in 0.0..5.0f64, steps in 1usize..200) {
        let r = GridRange::new(lo, lo + span, steps).unwrap();
        let pts: Vec<f64> = r.iter().collect();
        prop_assert_eq!(pts.len(), steps);
        prop_assert_eq!(pts[0], lo);
        if steps > 1 {
            prop_assert_eq!(pts[steps - 1], lo + span);
        }
        prop_assert!(pts.windows(2).all(|w| w[0] <= w[1]));
    }
}
