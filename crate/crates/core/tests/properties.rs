use std::sync::OnceLock;

use divclass::cantor::{cantor_add, cantor_negate, random_mumford};
use divclass::curve::{gen_hyperelliptic, GenOptions};
use divclass::linalg::{kernel_basis, mat_mul, rank};
use divclass::{CurveBundle, CurveRep, Matrix, Poly, PrimeField, Sampler, Subspace};
use proptest::prelude::*;

const P: u64 = 1009;

fn field() -> PrimeField {
    PrimeField::new(P).unwrap()
}

fn bundle() -> &'static CurveBundle {
    static B: OnceLock<CurveBundle> = OnceLock::new();
    B.get_or_init(|| {
        let f = field();
        gen_hyperelliptic(f, 2, None, &GenOptions { with_cubic: false, h: None }, &mut Sampler::new(f, 77)).unwrap()
    })
}

fn rep() -> CurveRep {
    CurveRep::A(bundle().rep_a.clone())
}

fn vec_in(n: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0..P, n)
}

fn nonzero_vec(n: usize) -> impl Strategy<Value = Vec<u64>> {
    vec_in(n).prop_filter("nonzero", |v| v.iter().any(|&x| x != 0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in 0..P, b in 0..P, c in 0..P) {
        let f = field();
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn product_is_bilinear_and_commutative(a in 0..P, s in vec_in(11), t in vec_in(11), u in vec_in(11)) {
        let (rep, f) = (rep(), field());
        let st: Vec<u64> = s.iter().zip(&t).map(|(&x, &y)| f.add(f.mul(a, x), y)).collect();
        let lhs = rep.product(&st, &u).unwrap();
        let ps = rep.product(&s, &u).unwrap();
        let pt = rep.product(&t, &u).unwrap();
        let rhs: Vec<u64> = ps.iter().zip(&pt).map(|(&x, &y)| f.add(f.mul(a, x), y)).collect();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(rep.product(&s, &u).unwrap(), rep.product(&u, &s).unwrap());
        prop_assert_eq!(rep.mult_matrix(&s).unwrap().mul_vec(&f, &u).unwrap(), rep.product(&s, &u).unwrap());
    }

    #[test]
    fn division_inverts_simple_multiplication(s in nonzero_vec(11), gens in prop::collection::vec(vec_in(11), 1..6)) {
        let (rep, f) = (rep(), field());
        let w = Subspace::span_of(&f, 11, &gens).unwrap();
        let sw = rep.simple_mul(&s, &w).unwrap();
        prop_assert_eq!(sw.dim(), w.dim());
        prop_assert_eq!(rep.divide(&sw, std::slice::from_ref(&s)).unwrap(), w.clone());
        let sv = rep.simple_mul(&s, rep.v_space()).unwrap();
        prop_assert_eq!(rep.codim_in_v_prime(&sv), rep.big_delta());
        prop_assert_eq!(&rep.divide(&sv, std::slice::from_ref(&s)).unwrap(), rep.v_space());
        let dup = rep.sum_of_products(&[s.clone(), s.clone()], &w).unwrap();
        prop_assert_eq!(dup, sw);
    }

    #[test]
    fn canonical_form_ignores_generators(gens in prop::collection::vec(vec_in(7), 1..6), mix in vec_in(36)) {
        let f = field();
        let w = Subspace::span_of(&f, 7, &gens).unwrap();
        // add random combinations of the generators
        let mut more = gens.clone();
        for k in 0..6 {
            let mut v = vec![0u64; 7];
            for (i, g) in gens.iter().enumerate() {
                let c = mix[(k * 6 + i) % 36];
                for (x, &y) in v.iter_mut().zip(g) {
                    *x = f.mul_add(*x, c, y);
                }
            }
            more.push(v);
        }
        prop_assert_eq!(Subspace::span_of(&f, 7, &more).unwrap(), w.clone());
        let k = w.annihilator(&f);
        prop_assert_eq!(kernel_basis(&f, &k), w.clone());
        prop_assert_eq!(rank(&f, &Matrix::from_rows(7, &gens).unwrap()), w.dim());
        if w.dim() > 0 {
            prop_assert!(mat_mul(&f, &k, &w.basis()).unwrap().is_zero());
        }
    }

    #[test]
    fn poly_division(a in vec_in(9), b in nonzero_vec(4)) {
        let f = field();
        let (a, b) = (Poly::from_coeffs(a), Poly::from_coeffs(b));
        let (q, r) = a.divrem(&f, &b);
        prop_assert_eq!(q.mul(&f, &b).add(&f, &r), a);
        prop_assert!(r.is_zero() || r.deg() < b.deg());
    }

    #[test]
    fn cantor_group_laws(seed in any::<u64>()) {
        let b = bundle();
        let c = &b.curve;
        let mut s = Sampler::new(*c.field(), seed);
        let x = random_mumford(c, &mut s).unwrap();
        let y = random_mumford(c, &mut s).unwrap();
        let z = random_mumford(c, &mut s).unwrap();
        prop_assert_eq!(cantor_add(c, &x, &y), cantor_add(c, &y, &x));
        prop_assert_eq!(
            cantor_add(c, &cantor_add(c, &x, &y), &z),
            cantor_add(c, &x, &cantor_add(c, &y, &z))
        );
        prop_assert!(cantor_add(c, &x, &cantor_negate(c, &x)).is_neutral());
    }
}
