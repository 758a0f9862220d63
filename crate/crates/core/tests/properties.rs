use fock_core::bargmann::{self, HermiteExpansion};
use fock_core::operators::{self, LadderOperators};
use fock_core::{CoeffVector, MultiIndex, C64};
use proptest::prelude::*;

fn coeff_vector(n: usize, top: usize) -> impl Strategy<Value = CoeffVector> {
    let len = (top + 1).pow(n as u32);
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len).prop_map(move |v| {
        let entries = fock_core::enumerate_box(n, top)
            .into_iter()
            .zip(v)
            .map(|(a, (re, im))| (a, C64::new(re, im)));
        CoeffVector::from_entries(n, entries)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn diagonal_identities(b1 in -1.5f64..1.5, b2 in -1.5f64..1.5, f in coeff_vector(2, 6)) {
        let ops = LadderOperators::new(8, b1, b2, 0.0);
        let scale = f.norm_sq().max(1.0);
        let t = operators::verify_theorem_2_with(&ops, &f).unwrap();
        prop_assert!(t.max_residual() <= 1e-12 * scale);
        let c = operators::verify_commutation_with(&ops, &f).unwrap();
        prop_assert!(c.max_residual() <= 1e-12 * scale.sqrt() * 10.0);
    }

    #[test]
    fn skew_identities(kappa in -1.2f64..1.2, f in coeff_vector(2, 6)) {
        let ops = LadderOperators::new(8, 0.0, 0.0, kappa);
        let r = operators::verify_skew_with(&ops, &f).unwrap();
        let bound = 1e-12 * f.norm().max(1.0) * 10.0;
        prop_assert!(r.first_relation <= bound && r.second_relation <= bound);
        prop_assert!(r.star_commutator <= bound);
    }

    #[test]
    fn explicit_adjoint_is_the_conjugate_transpose(b1 in -1.0f64..1.0, b2 in -1.0f64..1.0) {
        for j in [1, 2] {
            let a = operators::matrix_a(j, 5, b1, b2, 0.0);
            let s = operators::matrix_a_star(j, 5, b1, b2, 0.0).unwrap();
            prop_assert!(a.conjugate_transpose().max_deviation_on_block(&s, 0).unwrap() < 1e-15);
        }
    }

    #[test]
    fn uncertainty_slacks_are_nonnegative(
        coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 11),
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
    ) {
        let c: Vec<C64> = coeffs.into_iter().map(|(x, y)| C64::new(x, y)).collect();
        prop_assume!(c.iter().any(|z| z.norm() > 1e-3));
        let u = HermiteExpansion::from_coeffs(&c);
        let r = bargmann::verify_uncertainty(&u, a, b, 14).unwrap();
        let tol = 1e-12 * r.u_norm_sq.max(1.0);
        prop_assert!(r.shifted_product_slack >= -tol);
        prop_assert!(r.sum_of_squares_slack >= -tol);
        prop_assert!(r.am_gm_gap.abs() <= tol * 10.0);
    }
}

#[test]
fn truncation_edge_is_rejected() {
    let f = CoeffVector::unit(MultiIndex::two(8, 0));
    assert!(operators::verify_theorem_2(&f, 0.5, 0.3, 8).is_err());
    assert!(operators::verify_commutation(&CoeffVector::unit(MultiIndex::two(7, 0)), 0.5, 0.3, 8).is_err());
}
