use fock_core::basis::{self, Normalization};
use fock_core::operators;
use fock_core::quadrature::{gaussian_inner_product, SpaceIntegrator};
use fock_core::{enumerate_box, CoeffVector, MultiIndex, SpaceParams, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn identity_dev(g: &nalgebra::DMatrix<C64>, diag: f64) -> f64 {
    let mut w = 0.0f64;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let want = if i == j { diag } else { 0.0 };
            w = w.max((g[(i, j)] - want).norm());
        }
    }
    w
}

#[test]
fn gram_matrices_are_identities() {
    let cases = [
        (SpaceParams::segal_bargmann(1).unwrap(), 8),
        (SpaceParams::segal_bargmann(2).unwrap(), 4),
        (SpaceParams::h_beta(0.5).unwrap(), 6),
        (SpaceParams::h_beta(0.0).unwrap(), 6),
        (SpaceParams::h_a(0.3, 0.6, 0.0).unwrap(), 3),
        (SpaceParams::h_a(0.4, 0.2, 0.3).unwrap(), 3),
    ];
    for (space, n) in cases {
        let g = basis::gram_matrix(&space, n, 20).unwrap();
        assert!(identity_dev(&g, 1.0) < 1e-8, "{}", space.name());
    }
}

#[test]
fn kappa_l_gram_diagonal_is_one_over_kappa() {
    for (kappa, l) in [(1.0, c(-0.5, 0.0)), (2.0, c(0.5, 0.0)), (2.0, c(0.3, 0.4)), (3.0, c(0.0, 1.5))] {
        let space = SpaceParams::h_kappa_l(kappa, l).unwrap();
        let g = basis::gram_matrix(&space, 8, 24).unwrap();
        assert!(identity_dev(&g, 1.0 / kappa) < 1e-8, "kappa {kappa}, l {l}");
        assert!((basis::basis_norm_sq(&space) - 1.0 / kappa).abs() < 1e-15);
    }
}

#[test]
fn isometry_maps_segal_bargmann_basis_onto_h_a_basis() {
    let (b1, b2, k) = (0.4, 0.2, 0.3);
    let space = SpaceParams::h_a(b1, b2, k).unwrap();
    let z = [c(0.3, -0.7), c(-1.1, 0.4)];
    for alpha in enumerate_box(2, 3) {
        let e = CoeffVector::unit(alpha.clone());
        let lhs = basis::apply_isometry(&e, b1, b2, k, &z);
        let rhs = basis::eval_basis(&space, &alpha, &z);
        assert!((lhs - rhs).norm() < 1e-13 * rhs.norm().max(1.0), "{alpha:?}");
    }
}

#[test]
fn isometry_preserves_norms() {
    let (b1, b2, k) = (0.4, 0.2, 0.3);
    let space = SpaceParams::h_a(b1, b2, k).unwrap();
    let integ = SpaceIntegrator::new(&space, 20).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..3 {
        let f = CoeffVector::random_interior(&mut rng, 2, 4, 0);
        let g = |z: &[C64]| basis::apply_isometry(&f, b1, b2, k, z);
        let n = integ.inner_product(g, g).re;
        assert!((n - f.norm_sq()).abs() < 1e-9, "{n}");
    }
}

#[test]
fn analysis_inverts_synthesis() {
    let space = SpaceParams::h_beta(0.25).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let f = CoeffVector::random_interior(&mut rng, 1, 7, 0);
    let back = basis::analyze(basis::synthesize(&f, &space), &space, 7, 20).unwrap();
    assert!(back.sub(&f).norm() < 1e-10);

    let kl = SpaceParams::h_kappa_l(2.0, c(0.3, 0.4)).unwrap();
    let back = basis::analyze(basis::synthesize(&f, &kl), &kl, 7, 24).unwrap();
    assert!(back.sub(&f).norm() < 1e-10);
}

#[test]
fn unit_gram_basis_is_orthonormal() {
    let space = SpaceParams::h_kappa_l(2.0, c(0.3, 0.4)).unwrap();
    for (j, k) in [(0, 0), (3, 3), (2, 5)] {
        let psi = |n: usize| move |z: &[C64]| basis::eval_basis_with(&space, &MultiIndex::one(n), z, Normalization::UnitGram);
        let v = gaussian_inner_product(psi(j), psi(k), &space, 24).unwrap();
        let want = if j == k { 1.0 } else { 0.0 };
        assert!((v - want).norm() < 1e-10, "({j}, {k}) -> {v}");
    }
}

#[test]
fn second_ladder_operator_matches_quadrature() {
    let (b1, b2, k) = (-0.3, 0.5, 0.2);
    let g = operators::quadrature_a_matrix(2, b1, b2, k, 3, 3, 20).unwrap();
    let a2 = operators::matrix_a(2, 3, b1, b2, k);
    let bx = enumerate_box(2, 3);
    for (i, a) in bx.iter().enumerate() {
        for (j, ap) in bx.iter().enumerate() {
            let m = operators::a_matrix_element(&a2, a, ap);
            assert!((g[(i, j)] - m).norm() < 1e-8, "{a:?} {ap:?}: {} vs {m}", g[(i, j)]);
        }
    }
}

#[test]
fn pointwise_bound_on_the_plane() {
    let space = SpaceParams::h_a(0.3, 0.6, 0.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let points = vec![vec![c(0.2, 0.1), c(-0.5, 0.3)], vec![c(0.0, 0.0), c(0.6, -0.6)]];
    for _ in 0..4 {
        let f = CoeffVector::random_interior(&mut rng, 2, 3, 0);
        let r = basis::verify_pointwise_bound(&space, &f, &points, 1.0, 16).unwrap();
        assert_eq!(r.violations, 0);
        assert!(r.worst_ratio < 1.0);
    }
}
