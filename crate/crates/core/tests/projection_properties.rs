use bergman_core::fields::VectorField;
use bergman_core::filtration::{truncate, Operator};
use bergman_core::poly::{inner_product, norm_sq};
use bergman_core::projection::project;
use bergman_core::sampling::{self, rng};
use bergman_core::{Exec, GaussianRational, MixedPolynomial};
use proptest::prelude::*;

fn poly(seed: u64, n: usize, degree: u32) -> MixedPolynomial {
    sampling::polynomial(&mut rng(seed), n, degree, 5)
}

fn pair(seed: u64, n: usize) -> (MixedPolynomial, MixedPolynomial) {
    let mut r = rng(seed);
    (sampling::polynomial(&mut r, n, 6, 5), sampling::polynomial(&mut r, n, 6, 5))
}

fn scalar(seed: u64) -> GaussianRational {
    sampling::gaussian(&mut rng(seed ^ 0x9e37), 5, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn projection_is_idempotent(seed in any::<u64>(), n in 1usize..=3) {
        let pf = project(&poly(seed, n, 7)).unwrap();
        prop_assert_eq!(project(&pf).unwrap(), pf);
    }

    #[test]
    fn projection_is_self_adjoint(seed in any::<u64>(), n in 1usize..=3) {
        let (f, g) = pair(seed, n);
        let lhs = inner_product(&project(&f).unwrap(), &g).unwrap();
        let rhs = inner_product(&f, &project(&g).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn projection_output_is_holomorphic_and_contractive(seed in any::<u64>(), n in 1usize..=3) {
        let f = poly(seed, n, 7);
        let pf = project(&f).unwrap();
        prop_assert!(pf.is_holomorphic());
        prop_assert!(norm_sq(&pf) <= norm_sq(&f));
    }

    #[test]
    fn inner_product_is_conjugate_symmetric(seed in any::<u64>(), n in 1usize..=3) {
        let (f, g) = pair(seed, n);
        prop_assert_eq!(inner_product(&f, &g).unwrap(), inner_product(&g, &f).unwrap().conj());
    }

    #[test]
    fn cauchy_schwarz_holds_exactly(seed in any::<u64>(), n in 1usize..=3) {
        let (f, g) = pair(seed, n);
        let ip = inner_product(&f, &g).unwrap();
        prop_assert!(ip.norm_sq() <= norm_sq(&f) * norm_sq(&g));
    }

    #[test]
    fn inner_product_is_sesquilinear(seed in any::<u64>(), n in 1usize..=2) {
        let (f, g) = pair(seed, n);
        let h = poly(seed.wrapping_add(1), n, 6);
        let (a, b) = (scalar(seed), scalar(seed.wrapping_add(7)));
        let combo = f.scale(&a).checked_add(&g.scale(&b)).unwrap();
        let lhs = inner_product(&combo, &h).unwrap();
        let rhs = &(&a * &inner_product(&f, &h).unwrap()) + &(&b * &inner_product(&g, &h).unwrap());
        prop_assert_eq!(lhs, rhs);
        let conj_side = inner_product(&h, &combo).unwrap();
        let expected = &(&a.conj() * &inner_product(&h, &f).unwrap()) + &(&b.conj() * &inner_product(&h, &g).unwrap());
        prop_assert_eq!(conj_side, expected);
    }

    #[test]
    fn projection_is_linear(seed in any::<u64>(), n in 1usize..=3) {
        let (f, g) = pair(seed, n);
        let a = scalar(seed);
        let lhs = project(&f.scale(&a).checked_add(&g).unwrap()).unwrap();
        let rhs = project(&f).unwrap().scale(&a).checked_add(&project(&g).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn vector_fields_are_derivations(seed in any::<u64>(), n in 1usize..=2, which in 0usize..3) {
        let mut r = rng(seed);
        let x = match which {
            0 => VectorField::dz(n, 0).unwrap(),
            1 => VectorField::dzbar(n, n - 1).unwrap(),
            _ => VectorField::from_real(&sampling::general_matrix(&mut r, n)),
        };
        let f = sampling::polynomial(&mut r, n, 4, 4);
        let g = sampling::polynomial(&mut r, n, 4, 4);
        let lhs = x.apply(&f.checked_mul(&g).unwrap()).unwrap();
        let rhs = x.apply(&f).unwrap().checked_mul(&g).unwrap()
            .checked_add(&f.checked_mul(&x.apply(&g).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ad_is_linear_in_its_argument(seed in any::<u64>(), n in 1usize..=2) {
        let mut r = rng(seed);
        let x = Operator::Field(VectorField::from_real(&sampling::antisymmetric(&mut r, n)));
        let a = Operator::Projection(n);
        let b = Operator::Field(VectorField::dz(n, 0).unwrap());
        let (s, t) = (scalar(seed), scalar(seed.wrapping_add(3)));
        let combo = a.scaled(s.clone()).sum(&b.scaled(t.clone())).unwrap();
        let f = sampling::polynomial(&mut r, n, 5, 5);
        let lhs = x.commutator(&combo).unwrap().apply(&f).unwrap();
        let rhs = x.commutator(&a).unwrap().apply(&f).unwrap().scale(&s)
            .checked_add(&x.commutator(&b).unwrap().apply(&f).unwrap().scale(&t)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn truncation_respects_composition_when_span_is_preserved() {
    let mut r = rng(11);
    for n in 1..=2usize {
        let a = Operator::Field(VectorField::from_real(&sampling::antisymmetric(&mut r, n)));
        let b = Operator::Field(VectorField::from_real(&sampling::general_matrix(&mut r, n)));
        for (s, t) in [(a.clone(), b.clone()), (Operator::Projection(n), a.clone()), (b.clone(), Operator::Projection(n))] {
            let ts = truncate(&s, 4, Exec::Sequential).unwrap();
            let tt = truncate(&t, 4, Exec::Sequential).unwrap();
            let tc = truncate(&s.compose(&t).unwrap(), 4, Exec::Sequential).unwrap();
            assert!(ts.span_preserved && tt.span_preserved && tc.span_preserved);
            let gap = (&tc.matrix - &ts.matrix * &tt.matrix).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(gap < 1e-9, "n={n}: composition gap {gap}");
        }
    }
}

#[test]
fn parallel_and_sequential_truncations_agree() {
    let op = Operator::Projection(2).commutator(&Operator::Field(VectorField::dz(2, 1).unwrap())).unwrap();
    let s = truncate(&op, 5, Exec::Sequential).unwrap();
    let p = truncate(&op, 5, Exec::Parallel).unwrap();
    assert_eq!(s.matrix, p.matrix);
}
