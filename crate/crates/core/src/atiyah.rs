//! Atiyah cocycles: the Lie pair cocycle `At(a)(b, e) = R(a, b)e` and the
//! cocycle of the dg Lie algebroid `D` of vertical vector fields on the
//! Fedosov dg manifold, together with the comparison between them.
//!
//! A `D`-connection on `D` is written `nabla^0 + T` with `nabla^0` the flat
//! connection killing the constant frame `d/db^i` and `T` a degree 0 section
//! of `Hom(D (x) D, D)`. Its Atiyah cocycle is
//!
//! ```text
//! At(X, Y) = [D, nabla_X Y] - nabla_{[D, X]} Y - (-1)^{|X|} nabla_X [D, Y].
//! ```

use thiserror::Error;

use crate::algebroid::{AlgebroidError, ChartAlgebroid};
use crate::fedosov::{fedosov_x, FedosovData, FedosovError, LieDerivative, TruncationOrder};
use crate::graded::{Degree, Gen, GradedElement};
use crate::homotopy::iota_star;
use crate::poly::Poly;
use crate::sections::{Carrier, DSection, HomSection};
use crate::validation::{Residuals, ValidationReport};

#[derive(Debug, Error)]
pub enum AtiyahError {
    #[error("the connection term T must have degree 0, found {0:?}")]
    DegreeMismatch(Degree),
    #[error("[D, Y] has a non-vertical value on {0}")]
    NotVertical(String),
    #[error("rank mismatch: expected sections of rank {expected}, found {found}")]
    Rank { expected: usize, found: usize },
    #[error(transparent)]
    Algebroid(#[from] AlgebroidError),
    #[error(transparent)]
    Fedosov(#[from] FedosovError),
}

/// Extra b-degrees of `X` carried by [`atiyah_data`]. `At(d_i, d_j)^l` is
/// `d_i d_j D(b^l)`, so its b-degree `k` part involves `X_{k+2}`.
pub const GUARD: u32 = 2;

/// Fedosov data suitable for Atiyah computations at truncation order `N`:
/// `X` is built through b-degree `N + GUARD`, which makes `At^D` exact through
/// b-degree `N` and its cocycle and transgression identities exact through
/// `N - 1`.
pub fn atiyah_data(alg: &ChartAlgebroid, order: TruncationOrder) -> Result<FedosovData, AtiyahError> {
    let inner = TruncationOrder::new(order.get() + GUARD)?;
    Ok(fedosov_x(alg, inner)?)
}

/// Components `At_{a; jk}^l`, `a` running over the `A`-directions
/// (`0..t`), `j, k, l` over `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiePairCocycle {
    s: usize,
    t: usize,
    comps: Vec<Poly>,
}

impl LiePairCocycle {
    pub fn get(&self, a: usize, j: usize, k: usize, l: usize) -> &Poly {
        &self.comps[((a * self.s + j) * self.s + k) * self.s + l]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.t).all(|a| {
            (0..self.s).all(|j| (0..self.s).all(|k| (0..self.s).all(|l| self.get(a, j, k, l) == self.get(a, k, j, l))))
        })
    }

    /// The cocycle as a `Hom(B (x) B, B)`-valued `A`-form `sum_a alpha^a At_a`.
    pub fn to_hom_form(&self) -> HomSection {
        HomSection::from_fn(self.s, |j, k, l| {
            let mut v = GradedElement::zero();
            for a in 0..self.t {
                let c = self.get(a, j, k, l);
                if !c.is_zero() {
                    v += &GradedElement::alpha(a).mul_poly(c);
                }
            }
            v
        })
    }

    /// Non-zero components as `(a, j, k, l, value)`, indices 0-based with
    /// `a` counted inside `A`.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, usize, usize, &Poly)> {
        let s = self.s;
        self.comps.iter().enumerate().filter(|(_, p)| !p.is_zero()).map(move |(idx, p)| {
            let l = idx % s;
            let k = (idx / s) % s;
            let j = (idx / (s * s)) % s;
            let a = idx / (s * s * s);
            (a, j, k, l, p)
        })
    }
}

/// `At_{a; jk}^l = R_{a j k}^l`.
pub fn atiyah_lie_pair(alg: &ChartAlgebroid) -> LiePairCocycle {
    let dims = alg.dims();
    let r = alg.curvature();
    let mut comps = Vec::with_capacity(dims.t * dims.s.pow(3));
    for a in alg.a_indices() {
        for j in alg.b_indices() {
            for k in alg.b_indices() {
                for l in alg.b_indices() {
                    comps.push(r.get(a, j, k, l).clone());
                }
            }
        }
    }
    LiePairCocycle {
        s: dims.s,
        t: dims.t,
        comps,
    }
}

/// `d_A(At)`: zero for every matched pair.
pub fn lie_pair_closure(alg: &ChartAlgebroid) -> Result<HomSection, AtiyahError> {
    Ok(alg.d_a_on_hom(&atiyah_lie_pair(alg).to_hom_form())?)
}

/// `L_D Y = [D, Y]`, kept through b-degree `N`. Checks that the bracket is
/// vertical.
pub fn q_section(fd: &FedosovData, y: &DSection) -> Result<DSection, AtiyahError> {
    let dims = fd.dims();
    if y.rank() != dims.s {
        return Err(AtiyahError::Rank {
            expected: dims.s,
            found: y.rank(),
        });
    }
    let d = fd.d();
    for g in dims.generators() {
        if matches!(g, Gen::B(_)) {
            continue;
        }
        // [D, Y](g) = D(Y(g)) -+ Y(D(g)) with Y(g) = 0
        if !y.act(d.value(g)).is_zero() {
            return Err(AtiyahError::NotVertical(g.to_string()));
        }
    }
    Ok(y.lie_upto(d, fd.order().get()))
}

/// `nabla^0_X Y = X(f^j) d/db^j` for `Y = f^j d/db^j`.
pub fn nabla0(x: &DSection, y: &DSection) -> DSection {
    y.map(|f| x.act(f))
}

/// The `D`-connection `nabla^0 + T`.
#[derive(Clone, Debug, Default)]
pub struct DConnection {
    t: Option<HomSection>,
}

impl DConnection {
    pub fn flat() -> Self {
        DConnection { t: None }
    }

    pub fn with_t(t: HomSection) -> Result<Self, AtiyahError> {
        match t.degree() {
            Degree::Any | Degree::Pure(0) => Ok(DConnection { t: Some(t) }),
            d => Err(AtiyahError::DegreeMismatch(d)),
        }
    }

    pub fn t(&self) -> Option<&HomSection> {
        self.t.as_ref()
    }

    pub fn covariant(&self, x: &DSection, y: &DSection) -> DSection {
        let base = nabla0(x, y);
        match &self.t {
            Some(t) => base.plus(&t.eval(x, y)),
            None => base,
        }
    }
}

/// The Atiyah cocycle of `conn` evaluated on two sections.
pub fn atiyah_on(fd: &FedosovData, conn: &DConnection, x: &DSection, y: &DSection) -> Result<DSection, AtiyahError> {
    let n = fd.order().get();
    let dy = q_section(fd, y)?;
    let mut out = q_section(fd, &conn.covariant(x, y))?;
    for (deg, xp) in x.degree_parts() {
        let dx = q_section(fd, &xp)?;
        out = out.minus(&conn.covariant(&dx, y));
        let last = conn.covariant(&xp, &dy);
        out = if deg % 2 == 1 { out.plus(&last) } else { out.minus(&last) };
    }
    Ok(out.truncate(n))
}

/// `At` of `nabla^0 + T` on the constant frame, assembled as a section of
/// `Hom(D (x) D, D)` of degree 1.
pub fn atiyah_dg(fd: &FedosovData, conn: &DConnection) -> Result<HomSection, AtiyahError> {
    let s = fd.dims().s;
    let mut values = Vec::with_capacity(s);
    for i in 0..s {
        let di = DSection::basis(s, i);
        let mut row = Vec::with_capacity(s);
        for j in 0..s {
            row.push(atiyah_on(fd, conn, &di, &DSection::basis(s, j))?);
        }
        values.push(row);
    }
    Ok(HomSection::from_basis_values(&values))
}

/// The differential of `Hom(D (x) D, D)` induced by `L_D`, kept through
/// b-degree `N`.
pub fn d_hom(fd: &FedosovData, phi: &HomSection) -> HomSection {
    phi.lie_upto(fd.d(), fd.order().get())
}

/// Compare `iota*(At^D)` with `At^(L,A) + d_A(iota* T)` on every basis pair.
pub fn check_theorem2(fd: &FedosovData, conn: &DConnection) -> Result<ValidationReport, AtiyahError> {
    let alg = fd.algebroid();
    let s = alg.dims().s;
    let left = iota_star(&atiyah_dg(fd, conn)?);
    let mut right = atiyah_lie_pair(alg).to_hom_form();
    if let Some(t) = conn.t() {
        let st = iota_star(t);
        if !st.is_zero() {
            right = right.plus(&alg.d_a_on_hom(&st)?);
        }
    }
    let residual = left.minus(&right);
    let names = alg.variables();
    let mut check = Residuals::new("pullback_comparison");
    for j in 0..s {
        for k in 0..s {
            for l in 0..s {
                let r = residual.get(j, k, l);
                check.record(
                    r.is_zero(),
                    || format!("[{},{}->{}]", j + 1, k + 1, l + 1),
                    || r.display_with(names),
                );
            }
        }
    }
    let mut report = ValidationReport::new();
    report.push(check.finish());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::fixtures::*;
    use crate::fedosov::{fedosov_x, TruncationOrder};
    use crate::poly::{int, rat};

    fn fd(alg: &ChartAlgebroid, n: u32) -> FedosovData {
        fedosov_x(alg, TruncationOrder::new(n).unwrap()).unwrap()
    }

    #[test]
    fn lie_pair_values() {
        let g = rat(-4, 5);
        let at = atiyah_lie_pair(&point_aff1(g.clone()));
        assert_eq!(at.get(0, 0, 0, 0), &Poly::constant(-g));
        let at = atiyah_lie_pair(&line_action());
        assert_eq!(at.get(0, 0, 0, 0), &Poly::var(0).scale(&int(2)));
    }

    #[test]
    fn lie_pair_cocycle_closed_and_symmetric() {
        for (name, alg) in all_valid() {
            let at = atiyah_lie_pair(&alg);
            assert!(at.is_symmetric(), "{name}");
            if alg.is_matched_pair() {
                assert!(lie_pair_closure(&alg).unwrap().is_zero(), "{name}");
            }
        }
    }

    #[test]
    fn nabla0_kills_constant_frame() {
        let d1 = DSection::basis(2, 0);
        let d2 = DSection::basis(2, 1);
        assert!(nabla0(&d1, &d2).is_zero());
        let y = DSection::new(vec![GradedElement::zero(), &GradedElement::b(0) * &GradedElement::b(0)]);
        let x = d1.scale_by(&GradedElement::alpha(0));
        let want = DSection::new(vec![
            GradedElement::zero(),
            (&GradedElement::alpha(0) * &GradedElement::b(0)).scale(&int(2)),
        ]);
        assert_eq!(nabla0(&x, &y), want);
    }

    #[test]
    fn flat_dg_cocycle_vanishes() {
        let f = fd(&tangent_flat(), 4);
        assert!(atiyah_dg(&f, &DConnection::flat()).unwrap().is_zero());
        assert!(q_section(&f, &DSection::basis(2, 0)).unwrap().is_zero());
    }

    #[test]
    fn point_aff1_pullback() {
        let g = rat(7, 2);
        let f = fd(&point_aff1(g.clone()), 4);
        let at = iota_star(&atiyah_dg(&f, &DConnection::flat()).unwrap());
        assert_eq!(at.get(0, 0, 0), &GradedElement::alpha(0).scale(&-g));
    }

    #[test]
    fn pullback_comparison_flat_connection() {
        for (name, alg) in all_valid() {
            let f = fd(&alg, 4);
            let report = check_theorem2(&f, &DConnection::flat()).unwrap();
            assert!(report.passed(), "{name}: {report}");
        }
    }

    #[test]
    fn t_must_have_degree_zero() {
        let mut t = HomSection::zero(1);
        t.set(0, 0, 0, GradedElement::alpha(0));
        assert!(matches!(DConnection::with_t(t), Err(AtiyahError::DegreeMismatch(_))));
    }
}
