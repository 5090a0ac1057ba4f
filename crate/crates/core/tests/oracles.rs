//! Hand-derived fixture values and independent re-derivations of engine
//! outputs.

use std::collections::BTreeMap;
use std::path::PathBuf;

use liepair::algebroid::fixtures;
use liepair::atiyah::{atiyah_data, atiyah_dg, atiyah_lie_pair, nabla0, q_section, DConnection};
use liepair::ddg::{curvature_rm, split_dl};
use liepair::fedosov::{fedosov_x, r_dual, TruncationOrder};
use liepair::file::{gamma_binding, load_algebroid};
use liepair::homotopy::{delta_derivation, iota_star};
use liepair::poly::{int, rat};
use liepair::sample::{Sampler, Shape};
use liepair::{Carrier, ChartAlgebroid, DSection, Derivation, Gen, GradedElement, Poly};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn point(gamma: (i64, i64)) -> ChartAlgebroid {
    load_algebroid(&fixture("point_aff1.json"), &gamma_binding(Some(rat(gamma.0, gamma.1)))).unwrap()
}

fn order(n: u32) -> TruncationOrder {
    TruncationOrder::new(n).unwrap()
}

/// `P Q + Q P` on every generator, for odd `P`, `Q`.
fn anticommutator(p: &Derivation, q: &Derivation) -> Derivation {
    p.commutator(q)
}

#[test]
fn point_aff1_hand_values() {
    for gamma in [(1, 1), (-2, 3), (5, 1)] {
        let alg = point(gamma);
        let g = rat(gamma.0, gamma.1);
        let (a, b) = (1, 0);
        // R_{A,B,B}^B = -gamma
        assert_eq!(*alg.curvature().get(a, b, 0, 0), Poly::constant(-g.clone()));

        // R^v(b1) = gamma * alpha beta1 b1
        let rv = r_dual(&alg);
        let want = (&(&GradedElement::alpha(0) * &GradedElement::beta(0)) * &GradedElement::b(0)).scale(&g);
        assert_eq!(rv.value(Gen::B(0)), &want);

        // X_2 = -(gamma/2) alpha (b1)^2 d/db1
        let fd = fedosov_x(&alg, order(4)).unwrap();
        let b1 = GradedElement::b(0);
        let want = (&GradedElement::alpha(0) * &(&b1 * &b1)).scale(&(-g.clone() * rat(1, 2)));
        assert_eq!(fd.x_part(2).unwrap().component(0), &want);

        // Lie pair cocycle and the pullback of the dg cocycle: both -gamma.
        assert_eq!(*atiyah_lie_pair(&alg).get(0, 0, 0, 0), Poly::constant(-g.clone()));
        let fd = atiyah_data(&alg, order(4)).unwrap();
        let at = iota_star(&atiyah_dg(&fd, &DConnection::flat()).unwrap());
        assert_eq!(at.get(0, 0, 0), &GradedElement::alpha(0).scale(&-g.clone()));

        // i_{e_A} i_{e_B} R_m(e_B) = -gamma e_B
        let rm = curvature_rm(&alg).unwrap();
        assert_eq!(rm.contracted(a, b, 0), vec![GradedElement::constant(-g.clone())]);
    }
}

#[test]
fn point_aff1_d10_on_beta() {
    let op = split_dl(&point((1, 1))).unwrap();
    let want = -&(&GradedElement::alpha(0) * &GradedElement::beta(0));
    assert_eq!(op.d10.value(Gen::Beta(0)), &want);
}

#[test]
fn line_action_curvature_is_two_x() {
    let alg = load_algebroid(&fixture("line_action.json"), &BTreeMap::new()).unwrap();
    let two_x = Poly::var(0).scale(&int(2));
    assert_eq!(*alg.curvature().get(1, 0, 0, 0), two_x);
    assert_eq!(*atiyah_lie_pair(&alg).get(0, 0, 0, 0), two_x);
}

#[test]
fn tangent_flat_has_trivial_fedosov_data() {
    let alg = fixtures::tangent_flat();
    let fd = atiyah_data(&alg, order(4)).unwrap();
    assert!(fd.x().is_zero());
    assert!(atiyah_dg(&fd, &DConnection::flat()).unwrap().is_zero());
    for i in 0..2 {
        assert!(q_section(&fd, &DSection::basis(2, i)).unwrap().is_zero());
    }
}

/// `D^2 = nabla^2 + delta^2 + X^2 - [nabla, delta] + [nabla, X] - [delta, X]`,
/// using `nabla^2 = R^v`, `delta^2 = 0` and `[nabla, delta] = 0`, evaluated
/// term by term and compared with `D^2` on the generators.
#[test]
fn d_squared_matches_term_expansion() {
    for (name, alg) in fixtures::all_valid() {
        let n = 5;
        let fd = fedosov_x(&alg, order(n)).unwrap();
        let dims = alg.dims();
        let nabla = fd.nabla();
        let dl = delta_derivation(dims);
        let x = fd.x().to_derivation(dims, 1);
        let expansion = &(&(&r_dual(&alg) + &x.square()) + &anticommutator(nabla, &x)) - &anticommutator(&dl, &x);
        let direct = fd.d().square();
        for g in dims.generators() {
            assert_eq!(direct.value(g), expansion.value(g), "{name}: {g}");
            assert!(direct.value(g).truncate(n - 1).is_zero(), "{name}: D^2({g})");
        }
    }
}

/// `(D_A)^2` and `(D_B)^2` through the window, with `D_A`, `D_B` re-derived
/// as the bidegree projections of `D` on each generator.
#[test]
fn split_squares_from_projections() {
    for (name, alg) in fixtures::all_valid() {
        if !alg.is_matched_pair() {
            continue;
        }
        let fd = fedosov_x(&alg, order(5)).unwrap();
        let dims = alg.dims();
        let bideg = |g: Gen| match g {
            Gen::X(_) | Gen::B(_) => (0, 0),
            Gen::Alpha(_) => (1, 0),
            Gen::Beta(_) => (0, 1),
        };
        let da = fd.d().map_values(|g, v| {
            let (p, q) = bideg(g);
            v.bidegree_part(p + 1, q)
        });
        let db = fd.d().map_values(|g, v| {
            let (p, q) = bideg(g);
            v.bidegree_part(p, q + 1)
        });
        let (eda, edb) = fd.split().unwrap();
        for g in dims.generators() {
            assert_eq!(da.value(g), eda.value(g), "{name}: D_A({g})");
            assert_eq!(db.value(g), edb.value(g), "{name}: D_B({g})");
            assert!(da.square().value(g).truncate(4).is_zero(), "{name}: D_A^2({g})");
            assert!(db.square().value(g).truncate(4).is_zero(), "{name}: D_B^2({g})");
        }
    }
}

#[test]
fn q_section_is_a_module_derivation() {
    for (name, alg) in fixtures::all_valid() {
        let fd = atiyah_data(&alg, order(3)).unwrap();
        let w = 2;
        let mut sampler = Sampler::new(alg.dims(), 3);
        let shape = Shape {
            max_b_degree: 1,
            max_coeff_degree: 1,
            terms: 2,
        };
        for _ in 0..5 {
            let y = sampler.dsection(shape);
            let f = sampler.homogeneous(1, shape);
            let lhs = q_section(&fd, &y.scale_by(&f)).unwrap();
            let rhs = y.scale_by(&fd.d().apply(&f)).minus(&q_section(&fd, &y).unwrap().scale_by(&f));
            assert!(lhs.minus(&rhs).truncate(w).is_zero(), "{name}");
        }
    }
}

#[test]
fn nabla0_connection_axioms() {
    let alg = fixtures::line_action();
    let mut sampler = Sampler::new(alg.dims(), 9);
    let shape = Shape {
        max_b_degree: 2,
        max_coeff_degree: 1,
        terms: 2,
    };
    for _ in 0..10 {
        let x = sampler.even_dsection(shape);
        let y = sampler.dsection(shape);
        let f = sampler.even_function(shape);
        // f-linear in X
        assert_eq!(nabla0(&x.scale_by(&f), &y), nabla0(&x, &y).scale_by(&f));
        // Leibniz in Y for even X
        let lhs = nabla0(&x, &y.scale_by(&f));
        let rhs = y.scale_by(&x.act(&f)).plus(&nabla0(&x, &y).scale_by(&f));
        assert_eq!(lhs, rhs);
    }
}
