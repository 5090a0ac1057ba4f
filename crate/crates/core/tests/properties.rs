use proptest::prelude::*;

use liepair::graded::{Derivation, Dims, GradedElement};
use liepair::homotopy::{delta, kappa, sigma};
use liepair::parse::{parse_poly, print_poly};
use liepair::poly::{rat, Exponents, Poly};
use liepair::sample::{Sampler, Shape};
use liepair::Carrier;

const SHAPE: Shape = Shape {
    max_b_degree: 3,
    max_coeff_degree: 2,
    terms: 2,
};

fn dims() -> Dims {
    Dims::new(2, 2, 2)
}

fn sign(a: u32, b: u32) -> bool {
    (a * b) % 2 == 1
}

fn random_derivation(sampler: &mut Sampler, degree: i32) -> Derivation {
    Derivation::from_fn(sampler.dims(), degree, |g| {
        let want = g.degree() + degree;
        if want < 0 {
            GradedElement::zero()
        } else {
            sampler.homogeneous(want as u32, SHAPE)
        }
    })
}

fn poly_strategy() -> impl Strategy<Value = Poly> {
    let term = (-20i64..=20, 1i64..=7, prop::collection::vec(0u32..4, 0..3));
    prop::collection::vec(term, 0..5).prop_map(|terms| {
        let mut p = Poly::zero();
        for (n, d, e) in terms {
            p.add_term(Exponents::new(e), rat(n, d));
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graded_commutativity(seed in any::<u64>(), da in 0u32..4, db in 0u32..4) {
        let mut s = Sampler::new(dims(), seed);
        let a = s.homogeneous(da, SHAPE);
        let b = s.homogeneous(db, SHAPE);
        let ab = &a * &b;
        let ba = &b * &a;
        prop_assert_eq!(ab, if sign(da, db) { -&ba } else { ba });
    }

    #[test]
    fn product_is_associative(seed in any::<u64>()) {
        let mut s = Sampler::new(dims(), seed);
        let (a, b, c) = (s.element(SHAPE), s.element(SHAPE), s.element(SHAPE));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn derivations_satisfy_leibniz(seed in any::<u64>(), dd in 0i32..3, da in 0u32..3) {
        let mut s = Sampler::new(dims(), seed);
        let d = random_derivation(&mut s, dd);
        let a = s.homogeneous(da, SHAPE);
        let b = s.element(SHAPE);
        let lhs = d.apply(&(&a * &b));
        let second = &a * &d.apply(&b);
        let first = &d.apply(&a) * &b;
        let rhs = if sign(dd as u32, da) { &first - &second } else { &first + &second };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn commutator_satisfies_jacobi(seed in any::<u64>(), d1 in 0i32..2, d2 in 0i32..2, d3 in 0i32..2) {
        let mut s = Sampler::new(dims(), seed);
        let p = random_derivation(&mut s, d1);
        let q = random_derivation(&mut s, d2);
        let r = random_derivation(&mut s, d3);
        let lhs = p.commutator(&q.commutator(&r));
        let a = p.commutator(&q).commutator(&r);
        let b = q.commutator(&p.commutator(&r));
        let rhs = if sign(d1 as u32, d2 as u32) { &a - &b } else { &a + &b };
        for g in dims().generators() {
            prop_assert_eq!(lhs.value(g), rhs.value(g));
        }
    }

    #[test]
    fn commutator_agrees_with_composition(seed in any::<u64>(), d1 in 0i32..2, d2 in 0i32..2) {
        let mut s = Sampler::new(dims(), seed);
        let p = random_derivation(&mut s, d1);
        let q = random_derivation(&mut s, d2);
        let a = s.element(SHAPE);
        let pq = p.apply(&q.apply(&a));
        let qp = q.apply(&p.apply(&a));
        let want = if sign(d1 as u32, d2 as u32) { &pq + &qp } else { &pq - &qp };
        prop_assert_eq!(p.commutator(&q).apply(&a), want);
    }

    #[test]
    fn homotopy_formula(seed in any::<u64>()) {
        let mut s = Sampler::new(dims(), seed);
        let a = s.element(Shape { max_b_degree: 5, ..SHAPE });
        let lhs = delta(&kappa(&a)).plus(&kappa(&delta(&a)));
        prop_assert_eq!(lhs, a.minus(&sigma(&a)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn parser_round_trip(p in poly_strategy()) {
        let vars: Vec<String> = vec!["x1".into(), "x2".into(), "x3".into()];
        let printed = print_poly(&p, &vars);
        let parsed = parse_poly(&printed, &vars).unwrap();
        prop_assert_eq!(&parsed, &p);
        prop_assert_eq!(print_poly(&parsed, &vars), printed);
    }
}
