//! The bigraded picture before the Fedosov thickening: `d_L` on
//! `Lambda(A*) (x) Lambda(B*)` split as `d^{1,0} + d^{0,1} + d^{-1,2}`, the
//! module `m = a (x) Gamma(B)` with its two differentials, and the curvature
//! `R_m = -(d^{0,1}_m d^{1,0}_m + d^{1,0}_m d^{0,1}_m)`.
//!
//! Elements of `m` are stored as [`DSection`]s of b-degree 0: the component
//! `l` is the coefficient of the frame element `e_l` of `B`.

use thiserror::Error;

use crate::algebroid::ChartAlgebroid;
use crate::graded::{Derivation, Gen, GradedElement};
use crate::poly::Poly;
use crate::sections::{Carrier, DSection};
use crate::validation::{Residuals, ValidationReport};

#[derive(Debug, Error)]
pub enum DdgError {
    #[error("operation requires a matched pair")]
    NotMatchedPair,
    #[error("d_L has a component of bidegree ({p},{q}) on {gen}, outside (1,0), (0,1), (-1,2)")]
    UnexpectedBidegree { gen: String, p: u32, q: u32 },
}

/// `d_L = d10 + d01 + dm12`, each stored as a derivation.
#[derive(Clone, Debug)]
pub struct BigradedOperator {
    pub d10: Derivation,
    pub d01: Derivation,
    pub dm12: Derivation,
}

fn bidegree_of(g: Gen) -> (u32, u32) {
    match g {
        Gen::Alpha(_) => (1, 0),
        Gen::Beta(_) => (0, 1),
        _ => (0, 0),
    }
}

pub fn split_dl(alg: &ChartAlgebroid) -> Result<BigradedOperator, DdgError> {
    let dims = alg.dims();
    let dl = alg.d_l();
    let mut d10 = Derivation::zero(dims, 1);
    let mut d01 = Derivation::zero(dims, 1);
    let mut dm12 = Derivation::zero(dims, 1);
    for g in dims.generators() {
        if matches!(g, Gen::B(_)) {
            continue;
        }
        let (p, q) = bidegree_of(g);
        let v = dl.value(g);
        for (pp, qq) in v.bidegrees() {
            let ok = (pp == p + 1 && qq == q) || (pp == p && qq == q + 1) || (pp + 1 == p && qq == q + 2);
            if !ok {
                return Err(DdgError::UnexpectedBidegree {
                    gen: g.to_string(),
                    p: pp,
                    q: qq,
                });
            }
        }
        d10.set(g, v.bidegree_part(p + 1, q));
        d01.set(g, v.bidegree_part(p, q + 1));
        if p > 0 {
            dm12.set(g, v.bidegree_part(p - 1, q + 2));
        }
    }
    Ok(BigradedOperator { d10, d01, dm12 })
}

impl BigradedOperator {
    pub fn total(&self) -> Derivation {
        &(&self.d10 + &self.d01) + &self.dm12
    }

    /// `(d10)^2 = 0`, `d10 d01 + d01 d10 = 0` and, for matched pairs,
    /// `dm12 = 0`, checked on generators.
    pub fn check(&self, names: &[String], matched_pair: bool) -> ValidationReport {
        let dims = self.d10.dims();
        let mut report = ValidationReport::new();
        let sq = self.d10.square();
        let comm = self.d10.commutator(&self.d01);
        let mut c1 = Residuals::new("d10_squared");
        let mut c2 = Residuals::new("d10_d01_anticommute");
        let mut c3 = Residuals::new("dm12_vanishes");
        for g in dims.generators() {
            let v = sq.value(g);
            c1.record(v.is_zero(), || g.to_string(), || v.display_with(names));
            let v = comm.value(g);
            c2.record(v.is_zero(), || g.to_string(), || v.display_with(names));
            let v = self.dm12.value(g);
            c3.record(v.is_zero(), || g.to_string(), || v.display_with(names));
        }
        report.push(c1.finish());
        report.push(c2.finish());
        if matched_pair {
            report.push(c3.finish());
        }
        report
    }
}

/// The two differentials of `m` and the curvature built from them.
#[derive(Clone, Debug)]
pub struct ModuleCurvature {
    alg: ChartAlgebroid,
    op: BigradedOperator,
}

pub fn curvature_rm(alg: &ChartAlgebroid) -> Result<ModuleCurvature, DdgError> {
    if !alg.is_matched_pair() {
        return Err(DdgError::NotMatchedPair);
    }
    Ok(ModuleCurvature {
        alg: alg.clone(),
        op: split_dl(alg)?,
    })
}

impl ModuleCurvature {
    pub fn operator(&self) -> &BigradedOperator {
        &self.op
    }

    /// `d_m(m)^l = d(m^l) + sum lambda^i c_ik^l m^k` with the derivation `d`
    /// and the coefficients `c` supplied.
    fn module_differential(&self, d: &Derivation, range: std::ops::Range<usize>, coeff: impl Fn(usize, usize, usize) -> Poly, m: &DSection) -> DSection {
        let dims = self.alg.dims();
        DSection::new(
            self.alg
                .b_indices()
                .map(|l| {
                    let mut v = d.apply(m.component(l));
                    for i in range.clone() {
                        let li = GradedElement::gen(dims.lambda(i));
                        for k in self.alg.b_indices() {
                            let c = coeff(i, k, l);
                            if !c.is_zero() && !m.component(k).is_zero() {
                                v += &(&li * m.component(k)).mul_poly(&c);
                            }
                        }
                    }
                    v
                })
                .collect(),
        )
    }

    /// `d^{1,0}_m`: the `A`-module structure `nabla_a e_k = C_ak^l e_l`.
    pub fn d10_m(&self, m: &DSection) -> DSection {
        self.module_differential(&self.op.d10, self.alg.a_indices(), |i, k, l| self.alg.c(i, k, l).clone(), m)
    }

    /// `d^{0,1}_m`: the `B`-part of the connection, `nabla_b e_k = Gamma_bk^l e_l`.
    pub fn d01_m(&self, m: &DSection) -> DSection {
        self.module_differential(&self.op.d01, self.alg.b_indices(), |i, k, l| self.alg.gamma(i, k, l).clone(), m)
    }

    /// `R_m(m) = -(d01_m d10_m + d10_m d01_m)(m)`.
    pub fn apply(&self, m: &DSection) -> DSection {
        let a = self.d01_m(&self.d10_m(m));
        let b = self.d10_m(&self.d01_m(m));
        a.plus(&b).map(|c| -c)
    }

    /// `[d10_m, R_m](m) = d10_m(R_m m) - R_m(d10_m m)`.
    pub fn cocycle_defect(&self, m: &DSection) -> DSection {
        self.d10_m(&self.apply(m)).minus(&self.apply(&self.d10_m(m)))
    }

    /// `R_m(f m) - f R_m(m)`.
    pub fn linearity_defect(&self, f: &GradedElement, m: &DSection) -> DSection {
        self.apply(&m.scale_by(f)).minus(&self.apply(m).scale_by(f))
    }

    /// `i_a i_b R_m(e_k)^l` for `a` an `A`-index and `b` a `B`-index (both as
    /// `L`-indices); `i` is the left contraction.
    pub fn contracted(&self, a: usize, b: usize, k: usize) -> Vec<GradedElement> {
        let dims = self.alg.dims();
        let s = dims.s;
        let r = self.apply(&DSection::basis(s, k));
        let ia = contraction(dims, dims.lambda(a));
        let ib = contraction(dims, dims.lambda(b));
        (0..s).map(|l| ia.apply(&ib.apply(r.component(l)))).collect()
    }

    /// Compare `i_a i_b R_m(e_k)` with `R_{abk}^l` on every basis triple.
    pub fn check_against_atiyah(&self) -> ValidationReport {
        let curv = self.alg.curvature();
        let names = self.alg.variables();
        let mut check = Residuals::new("rm_contraction_equals_atiyah");
        for a in self.alg.a_indices() {
            for b in self.alg.b_indices() {
                for k in self.alg.b_indices() {
                    let got = self.contracted(a, b, k);
                    for (l, g) in got.iter().enumerate() {
                        let res = g - &GradedElement::from_poly(curv.get(a, b, k, l).clone());
                        check.record(
                            res.is_zero(),
                            || format!("a={},b={},k={},l={}", a + 1, b + 1, k + 1, l + 1),
                            || res.display_with(names),
                        );
                    }
                }
            }
        }
        let mut report = ValidationReport::new();
        report.push(check.finish());
        report
    }
}

/// Left interior product with the dual of an odd generator.
pub fn contraction(dims: crate::graded::Dims, g: Gen) -> Derivation {
    Derivation::from_fn(dims, -1, |h| if h == g { GradedElement::one() } else { GradedElement::zero() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::fixtures::*;
    use crate::poly::rat;

    #[test]
    fn matched_pairs_have_no_m12_part() {
        for (name, alg) in all_valid() {
            let op = split_dl(&alg).unwrap();
            let report = op.check(alg.variables(), alg.is_matched_pair());
            assert!(report.passed(), "{name}: {report}");
        }
        let op = split_dl(&heisenberg_line()).unwrap();
        assert!(!op.dm12.is_zero());
    }

    #[test]
    fn d10_on_beta_point_aff1() {
        let alg = point_aff1(rat(1, 1));
        let op = split_dl(&alg).unwrap();
        let want = -&(&GradedElement::alpha(0) * &GradedElement::beta(0));
        assert_eq!(op.d10.value(Gen::Beta(0)), &want);
    }

    #[test]
    fn split_sums_to_d_l() {
        let alg = heisenberg_line();
        let op = split_dl(&alg).unwrap();
        assert_eq!(op.total(), alg.d_l());
    }

    #[test]
    fn point_aff1_contraction() {
        let g = rat(5, 4);
        let rm = curvature_rm(&point_aff1(g.clone())).unwrap();
        let got = rm.contracted(1, 0, 0);
        assert_eq!(got[0], GradedElement::constant(-g));
        assert!(rm.check_against_atiyah().passed());
    }

    #[test]
    fn rm_matches_atiyah_on_fixtures() {
        for (name, alg) in all_valid() {
            if !alg.is_matched_pair() {
                continue;
            }
            let rm = curvature_rm(&alg).unwrap();
            assert!(rm.check_against_atiyah().passed(), "{name}");
            for k in alg.b_indices() {
                assert!(rm.cocycle_defect(&DSection::basis(alg.dims().s, k)).is_zero(), "{name}");
            }
        }
    }

    #[test]
    fn non_matched_is_rejected() {
        assert!(matches!(curvature_rm(&heisenberg_line()), Err(DdgError::NotMatchedPair)));
    }
}
