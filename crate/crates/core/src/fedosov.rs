//! The Fedosov vector field `X`, the homological derivation `D = nabla - delta + X`,
//! its bidegree split for matched pairs, and the lift `mu` onto `ker(D_B)`.
//!
//! `X = sum_{k>=2} X_k` is built by b-degree:
//!
//! ```text
//! X_2     = kappa(R^v)
//! X_{k+1} = kappa([nabla, X_k] + 1/2 sum_{a+b-1=k} [X_a, X_b])
//! ```
//!
//! `R^v` has b-degree 1, `[X_a, X_b]` has b-degree `a + b - 1` and `nabla`
//! preserves b-degree, so the right-hand side of the second line is pure of
//! b-degree `k`. With `X` kept through b-degree `N`, `D^2` vanishes through
//! b-degree `N - 1`.

use thiserror::Error;

use crate::algebroid::{AlgebroidError, ChartAlgebroid};
use crate::graded::{Derivation, Dims, Gen, GradedElement};
use crate::homotopy::{delta, delta_derivation, iota_star, kappa};
use crate::poly::rat;
use crate::sections::{Carrier, DSection, HomSection};
use crate::validation::ValidationReport;

#[derive(Debug, Error)]
pub enum FedosovError {
    #[error("truncation order must be at least 2, got {0}")]
    OrderTooSmall(u32),
    #[error("operation requires a matched pair")]
    NotMatchedPair,
    #[error("generator {gen}: D has a component of bidegree ({p},{q}) that belongs to neither D_A nor D_B")]
    NotSplittable { gen: String, p: u32, q: u32 },
    #[error("input is not an A-form: found a term of bidegree ({p},{q}) and b-degree {r}")]
    NotAnAForm { p: u32, q: u32, r: u32 },
    #[error("structure validation failed:\n{0}")]
    Invalid(ValidationReport),
    #[error(transparent)]
    Algebroid(#[from] AlgebroidError),
}

/// The b-degree cutoff `N`: every recursion keeps b-degrees `<= N`, and the
/// identities it feeds are exact through b-degree `N - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TruncationOrder(u32);

impl TruncationOrder {
    pub fn new(n: u32) -> Result<Self, FedosovError> {
        if n < 2 {
            return Err(FedosovError::OrderTooSmall(n));
        }
        Ok(TruncationOrder(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Highest b-degree at which identities are guaranteed exact.
    pub fn window(self) -> u32 {
        self.0 - 1
    }
}

/// Lie derivative along a derivation, on functions and on tensor sections.
pub trait LieDerivative: Carrier {
    /// The Lie derivative, truncated at b-degree `bound` when given. Products
    /// that land above the bound are never formed.
    fn lie_bounded(&self, q: &Derivation, bound: Option<u32>) -> Self;

    fn lie(&self, q: &Derivation) -> Self {
        self.lie_bounded(q, None)
    }

    /// `lie(q).truncate(n)`, computed directly.
    fn lie_upto(&self, q: &Derivation, n: u32) -> Self {
        self.lie_bounded(q, Some(n))
    }
}

impl LieDerivative for GradedElement {
    fn lie_bounded(&self, q: &Derivation, bound: Option<u32>) -> Self {
        match bound {
            Some(n) => q.apply_upto(self, n),
            None => q.apply(self),
        }
    }
}

fn mul_bounded(a: &GradedElement, b: &GradedElement, bound: Option<u32>) -> GradedElement {
    match bound {
        Some(n) => a.mul_upto(b, n),
        None => a * b,
    }
}

/// `Y(g) = Y^i d g / db^i`, truncated when a bound is given.
fn act_bounded(y: &DSection, g: &GradedElement, bound: Option<u32>) -> GradedElement {
    let mut out = GradedElement::zero();
    for i in 0..y.rank() {
        let c = y.component(i);
        if c.is_zero() {
            continue;
        }
        let dg = g.d_db(i);
        if !dg.is_zero() {
            out += &mul_bounded(c, &dg, bound);
        }
    }
    out
}

fn parity(n: i64) -> bool {
    n.rem_euclid(2) == 1
}

impl LieDerivative for DSection {
    /// `[Q, Y](b^l) = Q(Y^l) - (-1)^{|Q||Y|} Y(Q(b^l))`, split by the degree
    /// of `Y`.
    fn lie_bounded(&self, q: &Derivation, bound: Option<u32>) -> Self {
        let s = self.rank();
        let mut out = DSection::zero(s);
        for (d, y) in self.degree_parts() {
            let neg = !parity(i64::from(q.degree()) * i64::from(d));
            let part = DSection::new(
                (0..s)
                    .map(|l| {
                        let a = y.component(l).lie_bounded(q, bound);
                        let b = act_bounded(&y, q.value(Gen::B(l)), bound);
                        if neg {
                            &a - &b
                        } else {
                            &a + &b
                        }
                    })
                    .collect(),
            );
            out = out.plus(&part);
        }
        out
    }
}

/// `[Q, d/db^i] = -(d/db^i)(Q(b^k)) d/db^k`.
pub fn bracket_with_basis(q: &Derivation, i: usize) -> DSection {
    let s = q.dims().s;
    DSection::new((0..s).map(|k| -&q.value(Gen::B(k)).d_db(i)).collect())
}

impl LieDerivative for HomSection {
    /// `(Q phi)(d_i, d_j) = [Q, phi(d_i, d_j)] - (-1)^{|Q||phi|} phi([Q, d_i], d_j)
    ///  - (-1)^{|Q||phi|} phi(d_i, [Q, d_j])`, split by the degree of `phi`.
    fn lie_bounded(&self, q: &Derivation, bound: Option<u32>) -> Self {
        let s = self.rank();
        let brackets: Vec<DSection> = (0..s).map(|i| bracket_with_basis(q, i)).collect();
        let mut out = HomSection::zero(s);
        for (d, phi) in self.degree_parts() {
            let flip = parity(i64::from(q.degree()) * i64::from(d));
            let mut part = HomSection::zero(s);
            for i in 0..s {
                for j in 0..s {
                    let first = phi.on_basis(i, j).lie_bounded(q, bound);
                    for k in 0..s {
                        let mut rest = GradedElement::zero();
                        for a in 0..s {
                            let e = brackets[i].component(a);
                            if !e.is_zero() {
                                rest += &mul_bounded(phi.get(a, j, k), e, bound);
                            }
                            let e = brackets[j].component(a);
                            if !e.is_zero() {
                                rest += &mul_bounded(phi.get(i, a, k), e, bound);
                            }
                        }
                        let v = if flip {
                            first.component(k) + &rest
                        } else {
                            first.component(k) - &rest
                        };
                        part.set(i, j, k, v);
                    }
                }
            }
            out = out.plus(&part);
        }
        out
    }
}

/// `R^v = -1/2 lambda^i lambda^j R_ijk^l b^k d/db^l` as a vertical derivation.
pub fn r_dual(alg: &ChartAlgebroid) -> Derivation {
    let dims = alg.dims();
    let r = alg.curvature();
    let half = rat(-1, 2);
    let lambda = |i: usize| GradedElement::gen(dims.lambda(i));
    let mut out = Derivation::zero(dims, 2);
    for l in alg.b_indices() {
        let mut v = GradedElement::zero();
        for i in alg.l_indices() {
            for j in alg.l_indices() {
                if i == j {
                    continue;
                }
                let ll = &lambda(i) * &lambda(j);
                for k in alg.b_indices() {
                    let c = r.get(i, j, k, l);
                    if !c.is_zero() {
                        v += &(&ll * &GradedElement::b(k)).mul_poly(&c.scale(&half));
                    }
                }
            }
        }
        out.set(Gen::B(l), v);
    }
    out
}

/// `Y -> [Q, Y]` restricted to vertical derivations, kept through b-degree `n`.
fn lie_section(q: &Derivation, y: &DSection, n: u32) -> DSection {
    y.lie_upto(q, n)
}

/// `[X_a, X_b]` for degree 1 vertical fields:
/// `X_a(X_b^l) + X_b(X_a^l)`.
fn bracket_sections(xa: &DSection, xb: &DSection, n: u32) -> DSection {
    DSection::new(
        (0..xa.rank())
            .map(|l| (&xa.act(xb.component(l)) + &xb.act(xa.component(l))).truncate(n))
            .collect(),
    )
}

#[derive(Clone, Debug)]
pub struct FedosovData {
    alg: ChartAlgebroid,
    order: TruncationOrder,
    x_parts: Vec<DSection>,
    x: DSection,
    nabla: Derivation,
    r_dual: Derivation,
    d: Derivation,
    split: Option<(Derivation, Derivation)>,
}

/// Build `X` through b-degree `N`, together with `D` and, for matched pairs,
/// its split `D = D_A + D_B`.
pub fn fedosov_x(alg: &ChartAlgebroid, order: TruncationOrder) -> Result<FedosovData, FedosovError> {
    let report = alg.validate_structure();
    if !report.passed() {
        return Err(FedosovError::Invalid(report));
    }
    let dims = alg.dims();
    let n = order.get();
    let nabla = alg.nabla_derivation();
    let rv = r_dual(alg);
    let rv_section = DSection::from_derivation(&rv).expect("R^v is vertical");

    let mut parts: Vec<DSection> = vec![kappa(&rv_section)];
    for k in 2..n {
        let xk = &parts[k as usize - 2];
        let mut rhs = lie_section(&nabla, xk, n).project(|_, _, r| r == k);
        let mut quad = DSection::zero(dims.s);
        for a in 2..=k {
            let b = k + 1 - a;
            if b < 2 {
                continue;
            }
            let term = bracket_sections(&parts[a as usize - 2], &parts[b as usize - 2], n);
            quad = quad.plus(&term);
        }
        rhs = rhs.plus(&quad.map(|c| c.scale(&rat(1, 2))));
        parts.push(kappa(&rhs));
    }
    let x = parts.iter().fold(DSection::zero(dims.s), |acc, p| acc.plus(p));
    let d = build_d(&nabla, &x, dims);
    let split = if alg.is_matched_pair() {
        Some(split_derivation(&d)?)
    } else {
        None
    };
    Ok(FedosovData {
        alg: alg.clone(),
        order,
        x_parts: parts,
        x,
        nabla,
        r_dual: rv,
        d,
        split,
    })
}

fn build_d(nabla: &Derivation, x: &DSection, dims: Dims) -> Derivation {
    let delta = delta_derivation(dims);
    &(nabla - &delta) + &x.to_derivation(dims, 1)
}

/// Split a degree 1 derivation into the parts raising bidegree by `(1,0)`
/// and `(0,1)`. Fails if any generator value has another component.
fn split_derivation(d: &Derivation) -> Result<(Derivation, Derivation), FedosovError> {
    let dims = d.dims();
    let mut da = Derivation::zero(dims, 1);
    let mut db = Derivation::zero(dims, 1);
    for g in dims.generators() {
        let (p, q) = match g {
            Gen::Alpha(_) => (1, 0),
            Gen::Beta(_) => (0, 1),
            _ => (0, 0),
        };
        let v = d.value(g);
        for (pp, qq) in v.bidegrees() {
            if !((pp == p + 1 && qq == q) || (pp == p && qq == q + 1)) {
                return Err(FedosovError::NotSplittable {
                    gen: g.to_string(),
                    p: pp,
                    q: qq,
                });
            }
        }
        da.set(g, v.bidegree_part(p + 1, q));
        db.set(g, v.bidegree_part(p, q + 1));
    }
    Ok((da, db))
}

impl FedosovData {
    pub fn algebroid(&self) -> &ChartAlgebroid {
        &self.alg
    }

    pub fn dims(&self) -> Dims {
        self.alg.dims()
    }

    pub fn order(&self) -> TruncationOrder {
        self.order
    }

    /// `X_k` for `2 <= k <= N`.
    pub fn x_part(&self, k: u32) -> Option<&DSection> {
        k.checked_sub(2).and_then(|i| self.x_parts.get(i as usize))
    }

    pub fn x_parts(&self) -> impl Iterator<Item = (u32, &DSection)> {
        self.x_parts.iter().enumerate().map(|(i, x)| (i as u32 + 2, x))
    }

    pub fn x(&self) -> &DSection {
        &self.x
    }

    pub fn nabla(&self) -> &Derivation {
        &self.nabla
    }

    pub fn r_dual(&self) -> &Derivation {
        &self.r_dual
    }

    /// `D = nabla - delta + X`.
    pub fn d(&self) -> &Derivation {
        &self.d
    }

    pub fn split(&self) -> Result<(&Derivation, &Derivation), FedosovError> {
        self.split
            .as_ref()
            .map(|(a, b)| (a, b))
            .ok_or(FedosovError::NotMatchedPair)
    }

    /// `X_A` and `X_B`, the `(1,0)` and `(0,1)` parts of `X`.
    pub fn x_split(&self) -> (DSection, DSection) {
        (
            self.x.project(|p, q, _| p == 1 && q == 0),
            self.x.project(|p, q, _| p == 0 && q == 1),
        )
    }

    /// Values of `D^2` on every generator, kept through b-degree `upto`.
    pub fn d_squared(&self, upto: u32) -> Vec<(Gen, GradedElement)> {
        square_values(&self.d, upto)
    }

    /// `(D_A)^2`, `D_A D_B + D_B D_A` and `(D_B)^2` on every generator.
    pub fn split_relations(&self, upto: u32) -> Result<SplitRelations, FedosovError> {
        let (da, db) = self.split()?;
        let comm = da.commutator(db).truncate(upto);
        Ok(SplitRelations {
            da_squared: square_values(da, upto),
            anticommutator: self
                .dims()
                .generators()
                .into_iter()
                .map(|g| (g, comm.value(g).clone()))
                .collect(),
            db_squared: square_values(db, upto),
        })
    }
}

fn square_values(d: &Derivation, upto: u32) -> Vec<(Gen, GradedElement)> {
    d.dims()
        .generators()
        .into_iter()
        .map(|g| (g, d.apply_upto(d.value(g), upto)))
        .collect()
}

#[derive(Clone, Debug)]
pub struct SplitRelations {
    pub da_squared: Vec<(Gen, GradedElement)>,
    pub anticommutator: Vec<(Gen, GradedElement)>,
    pub db_squared: Vec<(Gen, GradedElement)>,
}

impl SplitRelations {
    pub fn all_zero(&self) -> bool {
        self.da_squared
            .iter()
            .chain(&self.anticommutator)
            .chain(&self.db_squared)
            .all(|(_, v)| v.is_zero())
    }
}

fn require_a_form<C: Carrier>(a: &C) -> Result<(), FedosovError> {
    for c in a.components() {
        if let Some((m, _)) = c.terms().find(|(m, _)| m.q() != 0 || m.r() != 0) {
            return Err(FedosovError::NotAnAForm {
                p: m.p(),
                q: m.q(),
                r: m.r(),
            });
        }
    }
    Ok(())
}

/// `mu(a) = a + kappa((D_B + delta)(mu(a)))`, solved by iteration through
/// b-degree `N`. Each pass fixes one more b-degree.
pub fn mu_lift<C: LieDerivative>(fd: &FedosovData, a: &C) -> Result<C, FedosovError> {
    let (_, db) = fd.split()?;
    require_a_form(a)?;
    let n = fd.order.get();
    let shifted = db + &delta_derivation(fd.dims());
    // After pass k the lift is exact through b-degree k, and pass k only
    // needs the Lie derivative through b-degree k - 1.
    let mut mu = a.clone();
    for k in 1..=n {
        mu = a.plus(&kappa(&mu.lie_upto(&shifted, k - 1)));
    }
    Ok(mu)
}

/// `eta . mu . pi*`: lift an `A`-form to a `D`-closed representative.
pub fn quasi_inverse<C: LieDerivative>(fd: &FedosovData, a: &C) -> Result<C, FedosovError> {
    let embedded = crate::homotopy::pi_star(a).map_err(|e| match e {
        crate::homotopy::HomotopyError::NotAnAForm { p, q, r } => FedosovError::NotAnAForm { p, q, r },
    })?;
    mu_lift(fd, &embedded)
}

/// Lie derivative along `D_A`, `D_B` or `D`, kept through b-degree `upto`.
pub fn lie_truncated<C: LieDerivative>(q: &Derivation, a: &C, upto: u32) -> C {
    a.lie_upto(q, upto)
}

/// The Fedosov trick as a checker: if `D(s)`, `kappa(s)` and `iota*(s)` all
/// vanish through b-degree `upto`, then so must `s`. Returns the offending
/// part of `s` when the hypotheses hold but `s` does not vanish.
pub fn fedosov_trick_violation<C: LieDerivative>(fd: &FedosovData, s: &C, upto: u32) -> Option<C> {
    let hypotheses = s.lie_upto(&fd.d, upto).is_zero()
        && kappa(s).truncate(upto).is_zero()
        && iota_star(s).is_zero();
    let s = s.truncate(upto);
    if hypotheses && !s.is_zero() {
        Some(s)
    } else {
        None
    }
}

/// `delta` applied through the Lie derivative of the `delta` derivation, for
/// comparison with the coefficient-wise definition.
pub fn delta_by_bracket<C: LieDerivative>(a: &C, dims: Dims) -> C {
    a.lie(&delta_derivation(dims))
}

/// Coefficient-wise `delta`, re-exported for symmetry with [`delta_by_bracket`].
pub fn delta_coefficientwise<C: Carrier>(a: &C) -> C {
    delta(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::fixtures::*;
    use crate::graded::Monomial;
    use crate::poly::{int, Poly};

    fn order(n: u32) -> TruncationOrder {
        TruncationOrder::new(n).unwrap()
    }

    #[test]
    fn order_below_two_is_rejected() {
        assert!(TruncationOrder::new(1).is_err());
    }

    #[test]
    fn r_dual_point_aff1() {
        let g = rat(2, 3);
        let rv = r_dual(&point_aff1(g.clone()));
        let want = (&GradedElement::alpha(0) * &(&GradedElement::beta(0) * &GradedElement::b(0))).scale(&g);
        assert_eq!(rv.value(Gen::B(0)), &want);
    }

    #[test]
    fn nabla_squared_is_r_dual() {
        for (name, alg) in all_valid() {
            let sq = alg.nabla_derivation().square();
            let rv = r_dual(&alg);
            for g in alg.dims().generators() {
                assert_eq!(sq.value(g), rv.value(g), "{name}: {g}");
            }
        }
    }

    #[test]
    fn x2_point_aff1() {
        let g = rat(2, 3);
        let fd = fedosov_x(&point_aff1(g.clone()), order(4)).unwrap();
        let (_, m) = Monomial::from_parts(&[0], &[], vec![2]).unwrap();
        let want = GradedElement::term(m, Poly::constant(-g / int(2)));
        assert_eq!(fd.x_part(2).unwrap().component(0), &want);
    }

    #[test]
    fn flat_x_vanishes() {
        let fd = fedosov_x(&tangent_flat(), order(5)).unwrap();
        assert!(fd.x().is_zero());
    }

    #[test]
    fn d_squared_vanishes_in_window() {
        for (name, alg) in all_valid() {
            let fd = fedosov_x(&alg, order(4)).unwrap();
            for (g, v) in fd.d_squared(3) {
                assert!(v.is_zero(), "{name}: D^2({g}) = {v}");
            }
        }
    }

    #[test]
    fn x_invariants() {
        for (name, alg) in all_valid() {
            let fd = fedosov_x(&alg, order(4)).unwrap();
            assert!(kappa(fd.x()).is_zero(), "{name}");
            assert!(iota_star(fd.x()).is_zero(), "{name}");
            for (k, xk) in fd.x_parts() {
                assert!(xk.project(|_, _, r| r != k).is_zero(), "{name}: X_{k}");
                assert!(xk.degree().or(1) == Some(1), "{name}: X_{k}");
            }
        }
    }

    #[test]
    fn split_relations_hold() {
        for (name, alg) in all_valid() {
            if !alg.is_matched_pair() {
                continue;
            }
            let fd = fedosov_x(&alg, order(4)).unwrap();
            assert!(fd.split_relations(3).unwrap().all_zero(), "{name}");
        }
    }

    #[test]
    fn non_matched_pair_has_no_split() {
        let fd = fedosov_x(&heisenberg_line(), order(3)).unwrap();
        assert!(matches!(fd.split(), Err(FedosovError::NotMatchedPair)));
    }

    #[test]
    fn mu_of_one_is_one() {
        let fd = fedosov_x(&line_action(), order(4)).unwrap();
        assert_eq!(mu_lift(&fd, &GradedElement::one()).unwrap(), GradedElement::one());
    }

    #[test]
    fn mu_rejects_non_a_forms() {
        let fd = fedosov_x(&line_action(), order(4)).unwrap();
        assert!(mu_lift(&fd, &GradedElement::beta(0)).is_err());
    }

    #[test]
    fn delta_definitions_agree() {
        let dims = Dims::new(1, 2, 1);
        let y = DSection::new(vec![
            &(&GradedElement::alpha(0) * &GradedElement::b(1)) * &GradedElement::b(0),
            (&GradedElement::beta(0) * &GradedElement::b(1)).mul_poly(&Poly::var(0)),
        ]);
        assert_eq!(delta_by_bracket(&y, dims), delta_coefficientwise(&y));
    }
}
