mod common;

use common::*;
use contraction_models::linalg::{c, max_abs_diff, CMat, CVec};
use contraction_models::random;
use contraction_models::symplectic::*;
use proptest::prelude::*;
use rand::Rng;

fn cvec(rng: &mut rand_chacha::ChaCha8Rng, n: usize) -> CVec {
    random::gaussian(n, 1, rng).column(0).into_owned()
}

#[test]
fn cayley_preserves_the_form() {
    let mut rng = rng(11);
    let graph = SymplecticSpace::graph(3).unwrap();
    let std = standard(3, 3);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (u, v) = (cvec(&mut rng, 6), cvec(&mut rng, 6));
        let lhs = std.pairing(&cayley(&u).unwrap(), &cayley(&v).unwrap());
        worst = worst.max((lhs - graph.pairing(&u, &v)).norm());
    }
    assert!(worst <= 1e-12, "{worst:e}");
}

#[test]
fn cayley_maps_isotropic_to_isotropic() {
    let mut rng = rng(12);
    let graph = SymplecticSpace::graph(3).unwrap();
    for k in 1..=3 {
        // graphs of Hermitian matrices are isotropic in the graph form
        let h = random::gaussian(3, 3, &mut rng);
        let h = &h + h.adjoint();
        let frame = contraction_models::linalg::vstack(&[&id(3), &h]).columns(0, k).into_owned();
        let s = Subspace::span(&frame);
        assert_eq!(classify_subspace(&graph, &s, CLASSIFY_TOL).unwrap(), SubspaceKind::Isotropic);
        let img = cayley_subspace(&s).unwrap();
        assert_eq!(classify_subspace(&standard(3, 3), &img, CLASSIFY_TOL).unwrap(), SubspaceKind::Isotropic);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn double_complement_is_identity(seed in any::<u64>(), p in 1usize..5, q in 1usize..5, k in 0usize..8) {
        let mut rng = rng(seed);
        let space = standard(p, q);
        let k = k.min(p + q);
        let s = Subspace::span(&random::gaussian(p + q, k, &mut rng));
        let back = symp_complement(&space, &symp_complement(&space, &s).unwrap()).unwrap();
        prop_assert!(back.distance(&s) <= 1e-10);
        prop_assert_eq!(symp_complement(&space, &s).unwrap().rank(), p + q - s.rank());
    }

    #[test]
    fn quotient_signature_is_additive(seed in any::<u64>(), p in 1usize..5, q in 1usize..5, k in 0usize..5) {
        let mut rng = rng(seed);
        let k = k.min(p).min(q);
        let space = standard(p, q);
        let a = isotropic(p, q, k, &mut rng);
        prop_assert_eq!(classify_subspace(&space, &a, CLASSIFY_TOL).unwrap(), SubspaceKind::Isotropic);
        let quot = quotient(&space, &a).unwrap();
        prop_assert_eq!(quot.space().signature(), (p - k, q - k));
    }

    #[test]
    fn mobius_group_law(seed in any::<u64>(), p in 1usize..4, q in 1usize..4) {
        let mut rng = rng(seed);
        let m1 = pseudo_unitary(p, q, &mut rng);
        let m2 = pseudo_unitary(p, q, &mut rng);
        let b = random::strict_contraction(q, p, 0.9, &mut rng);
        let inner = mobius_in_coordinates(&m2, &b).unwrap();
        let two_steps = mobius_in_coordinates(&m1, &inner).unwrap();
        let one_step = mobius_in_coordinates(&(&m1 * &m2), &b).unwrap();
        prop_assert!(max_abs_diff(&two_steps, &one_step) <= 1e-9);
        prop_assert!(max_abs_diff(&mobius_in_coordinates(&id(p + q), &b).unwrap(), &b) <= 1e-15);
    }

    #[test]
    fn contraction_block_is_pseudo_unitary_and_moves_origin(seed in any::<u64>(), p in 1usize..4, q in 1usize..4) {
        let mut rng = rng(seed);
        let b = random::strict_contraction(q, p, 0.95, &mut rng);
        let m = contraction_block(&b).unwrap();
        let space = standard(p, q);
        prop_assert!(PseudoUnitary::new(&space, m.clone()).is_ok());
        let image = mobius_in_coordinates(&m, &CMat::zeros(q, p)).unwrap();
        prop_assert!(max_abs_diff(&image, &b) <= 1e-12);
        // involution
        prop_assert!(max_abs_diff(&(&m * &m), &id(p + q)) <= 1e-10);
    }

    #[test]
    fn graph_parameter_round_trip(seed in any::<u64>(), p in 1usize..4, q in 1usize..4) {
        let mut rng = rng(seed);
        let space = standard(p, q);
        let pol = Polarization::canonical(&space).unwrap();
        let b = random::strict_contraction(q, p, 0.95, &mut rng);
        let w = graph_of_param(&pol, &b).unwrap();
        prop_assert_eq!(classify_subspace(&space, &w, CLASSIFY_TOL).unwrap(), SubspaceKind::MaxPositiveDefinite);
        prop_assert!(max_abs_diff(&graph_param_of(&pol, &w).unwrap(), &b) <= 1e-10);
    }

    #[test]
    fn mobius_apply_matches_subspace_image(seed in any::<u64>(), p in 1usize..4, q in 1usize..4) {
        let mut rng = rng(seed);
        let space = standard(p, q);
        // a polarization other than the canonical one
        let twist = pseudo_unitary(p, q, &mut rng);
        let plus = Subspace::span(&(&twist * CMat::identity(p + q, p)));
        let pol = Polarization::new(&space, &plus).unwrap();
        let m = PseudoUnitary::new(&space, pseudo_unitary(p, q, &mut rng)).unwrap();
        let b = random::strict_contraction(q, p, 0.5, &mut rng);
        let w = graph_of_param(&pol, &b).unwrap();
        let moved = Subspace::span(&(m.matrix() * w.frame()));
        let direct = graph_param_of(&pol, &moved).unwrap();
        prop_assert!(max_abs_diff(&mobius_apply(&m, &pol, &b).unwrap(), &direct) <= 1e-9);
    }

    #[test]
    fn pairing_is_sesquilinear_and_skew(seed in any::<u64>(), p in 1usize..4, q in 1usize..4) {
        let mut rng = rng(seed);
        let space = standard(p, q);
        let (u, v) = (cvec(&mut rng, p + q), cvec(&mut rng, p + q));
        let a = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        prop_assert!((space.pairing(&u, &v) + space.pairing(&v, &u).conj()).norm() <= 1e-12);
        prop_assert!((space.pairing(&(&u * a), &v) - a * space.pairing(&u, &v)).norm() <= 1e-12);
    }
}
