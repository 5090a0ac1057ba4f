//! Chart presentation of a Lie pair `(L, A)` with a splitting `L = B + A` and
//! an `L`-connection on `B`, together with its torsion, curvature, the
//! connection operator on the function algebra and the `A`-module
//! differentials.
//!
//! `L`-indices run over `0..s` (the `B` directions) followed by `s..s+t`
//! (the `A` directions). Structure functions `C[i][j][k]` are stored for all
//! `L`-indices; Christoffel symbols `Gamma[i][j][k]` have `i` an `L`-index and
//! `j, k` `B`-indices.

use thiserror::Error;

use crate::graded::{Derivation, Dims, Gen, GradedElement};
use crate::poly::{rat, Poly};
use crate::sections::{Carrier, DSection, HomSection};
use crate::validation::{Residuals, ValidationReport};

#[derive(Debug, Error)]
pub enum AlgebroidError {
    #[error("{what}: expected {expected} entries, found {found}")]
    Shape {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("structure functions are not antisymmetric at (i={i}, j={j}, k={k})")]
    NotAntisymmetric { i: usize, j: usize, k: usize },
    #[error("operation requires a matched pair")]
    NotMatchedPair,
    #[error("input is not an A-form: found a term with beta factors or positive b-degree")]
    NotAnAForm,
    #[error("structure validation failed:\n{0}")]
    Invalid(ValidationReport),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartAlgebroid {
    dims: Dims,
    rho: Vec<Vec<Poly>>,
    c: Vec<Poly>,
    gamma: Vec<Poly>,
    matched_pair: bool,
    variables: Vec<String>,
}

/// `R_{ij k}^l` for `i, j` `L`-indices and `k, l` `B`-indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureTensor {
    rank: usize,
    s: usize,
    r: Vec<Poly>,
}

impl CurvatureTensor {
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &Poly {
        &self.r[((i * self.rank + j) * self.s + k) * self.s + l]
    }

    pub fn is_zero(&self) -> bool {
        self.r.iter().all(Poly::is_zero)
    }
}

impl ChartAlgebroid {
    /// `rho[i][j]` is the `d/dx^j` component of the anchor of the `i`-th
    /// frame element; `c` is indexed `(i, j, k)` over `L`, `gamma` is indexed
    /// `(i, j, k)` with `j, k` `B`-indices. Rejects non-antisymmetric `c`.
    pub fn new(
        dims: Dims,
        rho: Vec<Vec<Poly>>,
        c: Vec<Poly>,
        gamma: Vec<Poly>,
        matched_pair: bool,
    ) -> Result<Self, AlgebroidError> {
        let r = dims.rank();
        let s = dims.s;
        if rho.len() != r {
            return Err(AlgebroidError::Shape {
                what: "anchor rows",
                expected: r,
                found: rho.len(),
            });
        }
        if let Some(row) = rho.iter().find(|row| row.len() != dims.n) {
            return Err(AlgebroidError::Shape {
                what: "anchor columns",
                expected: dims.n,
                found: row.len(),
            });
        }
        if c.len() != r * r * r {
            return Err(AlgebroidError::Shape {
                what: "structure functions",
                expected: r * r * r,
                found: c.len(),
            });
        }
        if gamma.len() != r * s * s {
            return Err(AlgebroidError::Shape {
                what: "Christoffel symbols",
                expected: r * s * s,
                found: gamma.len(),
            });
        }
        for i in 0..r {
            for j in i..r {
                for k in 0..r {
                    let a = &c[(i * r + j) * r + k];
                    let b = &c[(j * r + i) * r + k];
                    if !(a + b).is_zero() {
                        return Err(AlgebroidError::NotAntisymmetric { i, j, k });
                    }
                }
            }
        }
        let variables = (1..=dims.n).map(|i| format!("x{i}")).collect();
        Ok(ChartAlgebroid {
            dims,
            rho,
            c,
            gamma,
            matched_pair,
            variables,
        })
    }

    /// Same as [`ChartAlgebroid::new`], then replaces the connection on
    /// `B x B` by its torsion-free part `nabla - T/2`. Rows with an `A`-index
    /// are left as given.
    pub fn new_symmetrized(
        dims: Dims,
        rho: Vec<Vec<Poly>>,
        c: Vec<Poly>,
        gamma: Vec<Poly>,
        matched_pair: bool,
    ) -> Result<Self, AlgebroidError> {
        let mut alg = ChartAlgebroid::new(dims, rho, c, gamma, matched_pair)?;
        let s = dims.s;
        let half = rat(1, 2);
        let mut fixed = alg.gamma.clone();
        for i in 0..s {
            for j in 0..s {
                for k in 0..s {
                    let t = alg.torsion(i, j, k);
                    fixed[(i * s + j) * s + k] = &alg.gamma(i, j, k).clone() - &t.scale(&half);
                }
            }
        }
        alg.gamma = fixed;
        Ok(alg)
    }

    pub fn with_variables(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.dims.n);
        self.variables = names;
        self
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn is_matched_pair(&self) -> bool {
        self.matched_pair
    }

    pub fn rho(&self, i: usize, j: usize) -> &Poly {
        &self.rho[i][j]
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &Poly {
        let r = self.dims.rank();
        &self.c[(i * r + j) * r + k]
    }

    pub fn gamma(&self, i: usize, j: usize, k: usize) -> &Poly {
        let s = self.dims.s;
        &self.gamma[(i * s + j) * s + k]
    }

    pub fn b_indices(&self) -> std::ops::Range<usize> {
        0..self.dims.s
    }

    pub fn a_indices(&self) -> std::ops::Range<usize> {
        self.dims.s..self.dims.rank()
    }

    pub fn l_indices(&self) -> std::ops::Range<usize> {
        0..self.dims.rank()
    }

    /// `rho(e_i)(f)`.
    pub fn anchor_apply(&self, i: usize, f: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (j, rho) in self.rho[i].iter().enumerate() {
            if !rho.is_zero() {
                out += &(rho * &f.derivative(j));
            }
        }
        out
    }

    /// Torsion `T_{ij}^k`, `k` a `B`-index. For `i` or `j` an `A`-index the
    /// missing `Gamma` term is absent because `A` projects to zero in `L/A`.
    pub fn torsion(&self, i: usize, j: usize, k: usize) -> Poly {
        let s = self.dims.s;
        let mut t = -self.c(i, j, k);
        if j < s {
            t += self.gamma(i, j, k);
        }
        if i < s {
            t -= self.gamma(j, i, k);
        }
        t
    }

    pub fn validate_structure(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        let r = self.dims.rank();
        let n = self.dims.n;
        let names = &self.variables;

        let mut anchor = Residuals::new("anchor_bracket_morphism");
        for i in 0..r {
            for j in (i + 1)..r {
                for k in 0..n {
                    let mut res = &self.anchor_apply(i, &self.rho[j][k]) - &self.anchor_apply(j, &self.rho[i][k]);
                    for m in 0..r {
                        res -= &(self.c(i, j, m) * &self.rho[m][k]);
                    }
                    anchor.record(
                        res.is_zero(),
                        || format!("i={},j={},x{}", i + 1, j + 1, k + 1),
                        || res.display_with(names),
                    );
                }
            }
        }
        report.push(anchor.finish());

        let mut jacobi = Residuals::new("jacobi");
        for i in 0..r {
            for j in (i + 1)..r {
                for k in (j + 1)..r {
                    for l in 0..r {
                        let res = self.jacobiator(i, j, k, l);
                        jacobi.record(
                            res.is_zero(),
                            || format!("i={},j={},k={},l={}", i + 1, j + 1, k + 1, l + 1),
                            || res.display_with(names),
                        );
                    }
                }
            }
        }
        report.push(jacobi.finish());

        let mut pair = Residuals::new("lie_pair_closure");
        for a in self.a_indices() {
            for b in self.a_indices() {
                for k in self.b_indices() {
                    let res = self.c(a, b, k);
                    pair.record(
                        res.is_zero(),
                        || format!("i={},j={},k={}", a + 1, b + 1, k + 1),
                        || res.display_with(names),
                    );
                }
            }
        }
        report.push(pair.finish());

        if self.matched_pair {
            let mut matched = Residuals::new("matched_pair_closure");
            for i in self.b_indices() {
                for j in self.b_indices() {
                    for k in self.a_indices() {
                        let res = self.c(i, j, k);
                        matched.record(
                            res.is_zero(),
                            || format!("i={},j={},k={}", i + 1, j + 1, k + 1),
                            || res.display_with(names),
                        );
                    }
                }
            }
            report.push(matched.finish());
        }

        let mut torsion = Residuals::new("torsion_free");
        for i in self.b_indices() {
            for j in self.b_indices() {
                for k in self.b_indices() {
                    let res = self.torsion(i, j, k);
                    torsion.record(
                        res.is_zero(),
                        || format!("i={},j={},k={}", i + 1, j + 1, k + 1),
                        || res.display_with(names),
                    );
                }
            }
        }
        report.push(torsion.finish());

        let mut extends = Residuals::new("extends_a_action");
        for a in self.a_indices() {
            for j in self.b_indices() {
                for k in self.b_indices() {
                    let res = self.torsion(a, j, k);
                    extends.record(
                        res.is_zero(),
                        || format!("i={},j={},k={}", a + 1, j + 1, k + 1),
                        || res.display_with(names),
                    );
                }
            }
        }
        report.push(extends.finish());

        if self.matched_pair {
            let mut flat = Residuals::new("a_module_flat (derived)");
            for a in self.a_indices() {
                for b in self.a_indices() {
                    for k in self.b_indices() {
                        for l in self.b_indices() {
                            let res = self.a_action_curvature(a, b, k, l);
                            flat.record(
                                res.is_zero(),
                                || format!("i={},j={},k={},l={}", a + 1, b + 1, k + 1, l + 1),
                                || res.display_with(names),
                            );
                        }
                    }
                }
            }
            report.push(flat.finish());
        }
        report
    }

    /// Component `l` of `[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]`.
    fn jacobiator(&self, i: usize, j: usize, k: usize, l: usize) -> Poly {
        let r = self.dims.rank();
        let mut out = Poly::zero();
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            // [f e_m, e_c] = f [e_m, e_c] - rho(e_c)(f) e_m
            for m in 0..r {
                out += &(self.c(a, b, m) * self.c(m, c, l));
            }
            out -= &self.anchor_apply(c, self.c(a, b, l));
        }
        out
    }

    /// Curvature of the `A`-action `nabla^A_a e_k = pr_B [e_a, e_k]` on `B`.
    fn a_action_curvature(&self, a: usize, b: usize, k: usize, l: usize) -> Poly {
        let mut out = &self.anchor_apply(a, self.c(b, k, l)) - &self.anchor_apply(b, self.c(a, k, l));
        for m in self.b_indices() {
            out += &(self.c(a, m, l) * self.c(b, k, m));
            out -= &(self.c(b, m, l) * self.c(a, k, m));
        }
        for m in self.l_indices() {
            if m < self.dims.s {
                out -= &(self.c(a, b, m) * self.gamma(m, k, l));
            } else {
                out -= &(self.c(a, b, m) * self.c(m, k, l));
            }
        }
        out
    }

    /// `R_{ijk}^l = rho_i(G_jk^l) - rho_j(G_ik^l) + G_im^l G_jk^m - G_jm^l G_ik^m - C_ij^m G_mk^l`,
    /// quadratic terms summed over `B`-indices `m`, the last over all `L`-indices.
    pub fn curvature(&self) -> CurvatureTensor {
        let r = self.dims.rank();
        let s = self.dims.s;
        let mut out = Vec::with_capacity(r * r * s * s);
        for i in 0..r {
            for j in 0..r {
                for k in 0..s {
                    for l in 0..s {
                        let mut v = &self.anchor_apply(i, self.gamma(j, k, l))
                            - &self.anchor_apply(j, self.gamma(i, k, l));
                        for m in 0..s {
                            v += &(self.gamma(i, m, l) * self.gamma(j, k, m));
                            v -= &(self.gamma(j, m, l) * self.gamma(i, k, m));
                        }
                        for m in 0..r {
                            v -= &(self.c(i, j, m) * self.gamma(m, k, l));
                        }
                        out.push(v);
                    }
                }
            }
        }
        CurvatureTensor { rank: r, s, r: out }
    }

    fn lambda(&self, i: usize) -> GradedElement {
        GradedElement::gen(self.dims.lambda(i))
    }

    /// The connection as a degree 1 derivation of the function algebra:
    /// `lambda^i rho_i^j d/dx^j - 1/2 lambda^i lambda^j C_ij^k d/dlambda^k
    ///  - lambda^i Gamma_ij^k b^j d/db^k`.
    pub fn nabla_derivation(&self) -> Derivation {
        let mut d = self.chevalley_eilenberg(self.l_indices());
        for k in self.b_indices() {
            let mut v = GradedElement::zero();
            for i in self.l_indices() {
                let li = self.lambda(i);
                for j in self.b_indices() {
                    let g = self.gamma(i, j, k);
                    if !g.is_zero() {
                        v -= &(&li * &GradedElement::b(j)).mul_poly(g);
                    }
                }
            }
            d.set(Gen::B(k), v);
        }
        d
    }

    /// `d_L` on `Lambda(L*)`: the connection with the `b` part dropped.
    pub fn d_l(&self) -> Derivation {
        self.chevalley_eilenberg(self.l_indices())
    }

    /// `d_A` on `Lambda(A*)` (zero on `beta` and `b`).
    pub fn d_a(&self) -> Derivation {
        let mut d = self.chevalley_eilenberg(self.a_indices());
        for i in self.b_indices() {
            d.set(Gen::Beta(i), GradedElement::zero());
        }
        d
    }

    /// Chevalley-Eilenberg differential restricted to the frame indices in
    /// `range` (anchor terms and the `d/dlambda` terms).
    fn chevalley_eilenberg(&self, range: std::ops::Range<usize>) -> Derivation {
        let dims = self.dims;
        let mut d = Derivation::zero(dims, 1);
        for j in 0..dims.n {
            let mut v = GradedElement::zero();
            for i in range.clone() {
                if !self.rho[i][j].is_zero() {
                    v += &self.lambda(i).mul_poly(&self.rho[i][j]);
                }
            }
            d.set(Gen::X(j), v);
        }
        let half = rat(-1, 2);
        for k in self.l_indices() {
            let mut v = GradedElement::zero();
            for i in range.clone() {
                for j in range.clone() {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        v += &(&self.lambda(i) * &self.lambda(j)).mul_poly(&c.scale(&half));
                    }
                }
            }
            d.set(dims.lambda(k), v);
        }
        d
    }

    fn require_a_form<C: Carrier>(&self, w: &C) -> Result<(), AlgebroidError> {
        let ok = w
            .components()
            .iter()
            .all(|c| c.terms().all(|(m, _)| m.q() == 0 && m.r() == 0));
        if ok {
            Ok(())
        } else {
            Err(AlgebroidError::NotAnAForm)
        }
    }

    /// `d_A` on `A`-forms with trivial coefficients.
    pub fn d_a_on_functions(&self, w: &GradedElement) -> Result<GradedElement, AlgebroidError> {
        self.require_a_form(w)?;
        Ok(self.d_a().apply(w))
    }

    /// `d_A` on `B`-valued `A`-forms, `B` an `A`-module through
    /// `nabla^A_a e_k = C_ak^l e_l`.
    pub fn d_a_on_vectors(&self, w: &DSection) -> Result<DSection, AlgebroidError> {
        if !self.matched_pair {
            return Err(AlgebroidError::NotMatchedPair);
        }
        self.require_a_form(w)?;
        let da = self.d_a();
        let comps = self
            .b_indices()
            .map(|l| {
                let mut v = da.apply(w.component(l));
                for a in self.a_indices() {
                    let al = self.lambda(a);
                    for k in self.b_indices() {
                        let c = self.c(a, k, l);
                        if !c.is_zero() {
                            v += &(&al * w.component(k)).mul_poly(c);
                        }
                    }
                }
                v
            })
            .collect();
        Ok(DSection::new(comps))
    }

    /// `d_A` on `Hom(B (x) B, B)`-valued `A`-forms, with
    /// `(nabla_a S)(e_j, e_k) = nabla_a(S(e_j, e_k)) - S(nabla_a e_j, e_k) - S(e_j, nabla_a e_k)`.
    pub fn d_a_on_hom(&self, w: &HomSection) -> Result<HomSection, AlgebroidError> {
        if !self.matched_pair {
            return Err(AlgebroidError::NotMatchedPair);
        }
        self.require_a_form(w)?;
        let da = self.d_a();
        let s = self.dims.s;
        Ok(HomSection::from_fn(s, |j, k, l| {
            let mut v = da.apply(w.get(j, k, l));
            for a in self.a_indices() {
                let mut action = GradedElement::zero();
                for m in self.b_indices() {
                    let c = self.c(a, m, l);
                    if !c.is_zero() {
                        action += &w.get(j, k, m).mul_poly(c);
                    }
                    let c = self.c(a, j, m);
                    if !c.is_zero() {
                        action -= &w.get(m, k, l).mul_poly(c);
                    }
                    let c = self.c(a, k, m);
                    if !c.is_zero() {
                        action -= &w.get(j, m, l).mul_poly(c);
                    }
                }
                v += &(&self.lambda(a) * &action);
            }
            v
        }))
    }
}

/// The algebroids shipped with the crate (the JSON files under `fixtures/`
/// describe the same data).
pub mod fixtures {
    use super::*;
    use crate::poly::{int, Rational};

    fn zeros(len: usize) -> Vec<Poly> {
        vec![Poly::zero(); len]
    }

    struct Builder {
        dims: Dims,
        rho: Vec<Vec<Poly>>,
        c: Vec<Poly>,
        gamma: Vec<Poly>,
    }

    impl Builder {
        fn new(n: usize, s: usize, t: usize) -> Self {
            let dims = Dims::new(n, s, t);
            let r = dims.rank();
            Builder {
                dims,
                rho: vec![zeros(n); r],
                c: zeros(r * r * r),
                gamma: zeros(r * s * s),
            }
        }

        fn rho(mut self, i: usize, j: usize, p: Poly) -> Self {
            self.rho[i][j] = p;
            self
        }

        fn bracket(mut self, i: usize, j: usize, k: usize, p: Poly) -> Self {
            let r = self.dims.rank();
            self.c[(j * r + i) * r + k] = -&p;
            self.c[(i * r + j) * r + k] = p;
            self
        }

        fn gamma(mut self, i: usize, j: usize, k: usize, p: Poly) -> Self {
            let s = self.dims.s;
            self.gamma[(i * s + j) * s + k] = p;
            self
        }

        fn build(self, matched: bool) -> ChartAlgebroid {
            ChartAlgebroid::new(self.dims, self.rho, self.c, self.gamma, matched)
                .expect("fixture data is well formed")
        }
    }

    /// The matched pair `a + b` inside `aff(1)` over a point:
    /// `[e_A, e_B] = e_B`, `Gamma_AB^B = 1`, `Gamma_BB^B = gamma`.
    pub fn point_aff1(gamma: Rational) -> ChartAlgebroid {
        Builder::new(0, 1, 1)
            .bracket(1, 0, 0, Poly::one())
            .gamma(1, 0, 0, Poly::one())
            .gamma(0, 0, 0, Poly::constant(gamma))
            .build(true)
    }

    /// Over the line: `rho_B = d/dx`, `rho_A = x d/dx`, `[e_A, e_B] = -e_B`,
    /// `Gamma_AB^B = -1`, `Gamma_BB^B = x`.
    pub fn line_action() -> ChartAlgebroid {
        let x = Poly::var(0);
        Builder::new(1, 1, 1)
            .rho(0, 0, Poly::one())
            .rho(1, 0, x.clone())
            .bracket(1, 0, 0, Poly::from_int(-1))
            .gamma(1, 0, 0, Poly::from_int(-1))
            .gamma(0, 0, 0, x)
            .build(true)
    }

    /// `B = TM` over the plane with a torsion-free polynomial connection:
    /// `Gamma_11^1 = x2`, `Gamma_12^2 = Gamma_21^2 = x1`, `Gamma_22^1 = 1`.
    pub fn tangent_only() -> ChartAlgebroid {
        let x1 = Poly::var(0);
        let x2 = Poly::var(1);
        Builder::new(2, 2, 0)
            .rho(0, 0, Poly::one())
            .rho(1, 1, Poly::one())
            .gamma(0, 0, 0, x2)
            .gamma(0, 1, 1, x1.clone())
            .gamma(1, 0, 1, x1)
            .gamma(1, 1, 0, Poly::one())
            .build(true)
    }

    /// `B = TM` over the plane with the flat connection `Gamma = 0`.
    pub fn tangent_flat() -> ChartAlgebroid {
        Builder::new(2, 2, 0)
            .rho(0, 0, Poly::one())
            .rho(1, 1, Poly::one())
            .build(true)
    }

    /// A Lie pair that is not a matched pair: the Heisenberg bracket
    /// `[e_1, e_2] = e_3` with `A` spanned by the central `e_3`, anchored by
    /// `rho_1 = d/dx`, with `Gamma_12^2 = Gamma_21^2 = x`.
    pub fn heisenberg_line() -> ChartAlgebroid {
        let x = Poly::var(0);
        Builder::new(1, 2, 1)
            .rho(0, 0, Poly::one())
            .bracket(0, 1, 2, Poly::one())
            .gamma(0, 1, 1, x.clone())
            .gamma(1, 0, 1, x)
            .build(false)
    }

    /// Structure constants violating the Jacobi identity:
    /// `[e_1, e_2] = e_1`, `[e_3, e_1] = e_2`.
    pub fn broken_jacobi() -> ChartAlgebroid {
        Builder::new(0, 2, 1)
            .bracket(0, 1, 0, Poly::one())
            .bracket(2, 0, 1, Poly::one())
            .gamma(0, 1, 0, Poly::from_int(-1))
            .gamma(2, 0, 1, Poly::one())
            .build(true)
    }

    /// All fixtures that pass validation, by name.
    pub fn all_valid() -> Vec<(&'static str, ChartAlgebroid)> {
        vec![
            ("point_aff1", point_aff1(int(1))),
            ("line_action", line_action()),
            ("tangent_only", tangent_only()),
            ("tangent_flat", tangent_flat()),
            ("heisenberg_line", heisenberg_line()),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::poly::int;

    #[test]
    fn fixtures_validate() {
        for (name, alg) in all_valid() {
            let report = alg.validate_structure();
            assert!(report.passed(), "{name}:\n{report}");
        }
    }

    #[test]
    fn broken_jacobi_is_rejected() {
        let report = broken_jacobi().validate_structure();
        assert!(!report.get("jacobi").unwrap().passed);
    }

    #[test]
    fn wrong_a_action_residual() {
        let mut alg = point_aff1(int(1));
        // Gamma_{A,B}^B: flat index (i * s + j) * s + k with i = 1, s = 1.
        alg.gamma[1] = Poly::zero();
        let report = alg.validate_structure();
        let check = report.get("extends_a_action").unwrap();
        assert!(!check.passed);
        assert_eq!(check.residual.as_deref(), Some("-1"));
    }

    #[test]
    fn symmetric_structure_functions_are_rejected() {
        let dims = Dims::new(0, 1, 1);
        let mut c = vec![Poly::zero(); 8];
        let idx = |i: usize, j: usize, k: usize| (i * 2 + j) * 2 + k;
        c[idx(0, 1, 0)] = Poly::one();
        c[idx(1, 0, 0)] = Poly::one();
        let err = ChartAlgebroid::new(dims, vec![vec![], vec![]], c, vec![Poly::zero(); 2], true);
        assert!(matches!(err, Err(AlgebroidError::NotAntisymmetric { .. })));
    }

    #[test]
    fn curvature_of_point_aff1() {
        let g = crate::poly::rat(3, 7);
        let r = point_aff1(g.clone()).curvature();
        assert_eq!(r.get(1, 0, 0, 0), &Poly::constant(-g.clone()));
        assert_eq!(r.get(0, 1, 0, 0), &Poly::constant(g));
    }

    #[test]
    fn curvature_of_line_action() {
        let r = line_action().curvature();
        assert_eq!(r.get(1, 0, 0, 0), &Poly::var(0).scale(&int(2)));
    }

    #[test]
    fn flat_tangent_curvature_vanishes() {
        assert!(tangent_flat().curvature().is_zero());
    }

    #[test]
    fn symmetrization_removes_torsion() {
        let dims = Dims::new(0, 2, 0);
        let mut gamma = vec![Poly::zero(); 8];
        // Gamma_{1,2}^1
        gamma[2] = Poly::from_int(3);
        let alg = ChartAlgebroid::new_symmetrized(dims, vec![vec![], vec![]], vec![Poly::zero(); 8], gamma, true).unwrap();
        assert!(alg.validate_structure().passed());
        assert_eq!(alg.gamma(0, 1, 0), &Poly::constant(crate::poly::rat(3, 2)));
        assert_eq!(alg.gamma(1, 0, 0), &Poly::constant(crate::poly::rat(3, 2)));
    }

    #[test]
    fn nabla_generator_values() {
        let alg = line_action();
        let nabla = alg.nabla_derivation();
        // x -> beta + x alpha
        let want = &GradedElement::beta(0) + &GradedElement::alpha(0).mul_poly(&Poly::var(0));
        assert_eq!(nabla.value(Gen::X(0)), &want);
        // b -> -(Gamma_BB^B beta b + Gamma_AB^B alpha b) = -x beta b + alpha b
        let b = GradedElement::b(0);
        let want = &(&GradedElement::alpha(0) * &b) - &(&GradedElement::beta(0) * &b).mul_poly(&Poly::var(0));
        assert_eq!(nabla.value(Gen::B(0)), &want);
    }

    #[test]
    fn d_a_on_hom_point_example() {
        let g = crate::poly::rat(5, 3);
        let alg = point_aff1(g.clone());
        let mut w = HomSection::zero(1);
        w.set(0, 0, 0, GradedElement::constant(g.clone()));
        let dw = alg.d_a_on_hom(&w).unwrap();
        assert_eq!(dw.get(0, 0, 0), &GradedElement::alpha(0).scale(&-g));
        assert!(alg.d_a_on_hom(&HomSection::zero(1)).unwrap().is_zero());
    }

    #[test]
    fn d_a_rejects_non_matched() {
        let alg = heisenberg_line();
        assert!(matches!(alg.d_a_on_hom(&HomSection::zero(2)), Err(AlgebroidError::NotMatchedPair)));
    }
}
