//! Sections of the vertical bundle `D` and of `Hom(D (x) D, D)`, stored as
//! component tensors of graded elements in the constant frame `d/db^i`.

use std::fmt;

use crate::graded::{Degree, Derivation, Dims, Gen, GradedElement};

/// Anything built from graded elements component by component. The
/// operators `delta`, `kappa`, `iota*`, `pi*` act coefficient-wise on all of
/// these carriers.
pub trait Carrier: Clone + PartialEq + fmt::Debug {
    fn components(&self) -> Vec<&GradedElement>;

    fn map(&self, f: impl FnMut(&GradedElement) -> GradedElement) -> Self;

    fn zip(&self, other: &Self, f: impl FnMut(&GradedElement, &GradedElement) -> GradedElement)
        -> Self;

    fn is_zero(&self) -> bool {
        self.components().iter().all(|c| c.is_zero())
    }

    fn plus(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    fn minus(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    fn truncate(&self, n: u32) -> Self {
        self.map(|c| c.truncate(n))
    }

    fn project(&self, keep: impl Fn(u32, u32, u32) -> bool) -> Self {
        self.map(|c| c.project(&keep))
    }

    /// Common degree of all components.
    fn degree(&self) -> Degree {
        let mut deg = Degree::Any;
        for c in self.components() {
            deg = match (deg, c.degree()) {
                (Degree::Any, d) => d,
                (d, Degree::Any) => d,
                (Degree::Pure(a), Degree::Pure(b)) if a == b => Degree::Pure(a),
                _ => Degree::Mixed,
            };
        }
        deg
    }

    fn max_b_degree(&self) -> Option<u32> {
        self.components().iter().filter_map(|c| c.max_b_degree()).max()
    }

    fn bidegrees(&self) -> Vec<(u32, u32)> {
        let mut v: Vec<_> = self.components().iter().flat_map(|c| c.bidegrees()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Split into components of pure total form degree.
    fn degree_parts(&self) -> Vec<(u32, Self)> {
        let mut degs: Vec<u32> = self.bidegrees().iter().map(|(p, q)| p + q).collect();
        degs.sort_unstable();
        degs.dedup();
        degs.into_iter()
            .map(|d| (d, self.project(|p, q, _| p + q == d)))
            .collect()
    }
}

impl Carrier for GradedElement {
    fn components(&self) -> Vec<&GradedElement> {
        vec![self]
    }

    fn map(&self, mut f: impl FnMut(&GradedElement) -> GradedElement) -> Self {
        f(self)
    }

    fn zip(
        &self,
        other: &Self,
        mut f: impl FnMut(&GradedElement, &GradedElement) -> GradedElement,
    ) -> Self {
        f(self, other)
    }
}

/// A section `f^i d/db^i` of `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DSection {
    comps: Vec<GradedElement>,
}

impl DSection {
    pub fn new(comps: Vec<GradedElement>) -> Self {
        DSection { comps }
    }

    pub fn zero(s: usize) -> Self {
        DSection {
            comps: vec![GradedElement::zero(); s],
        }
    }

    /// The constant section `d/db^i`.
    pub fn basis(s: usize, i: usize) -> Self {
        let mut y = DSection::zero(s);
        y.comps[i] = GradedElement::one();
        y
    }

    pub fn rank(&self) -> usize {
        self.comps.len()
    }

    pub fn component(&self, i: usize) -> &GradedElement {
        &self.comps[i]
    }

    pub fn components_vec(&self) -> &[GradedElement] {
        &self.comps
    }

    /// Read a vertical derivation as a section. Fails if the derivation has
    /// non-zero values on `x` or the odd generators.
    pub fn from_derivation(d: &Derivation) -> Option<DSection> {
        if !d.is_vertical() {
            return None;
        }
        let s = d.dims().s;
        Some(DSection {
            comps: (0..s).map(|i| d.value(Gen::B(i)).clone()).collect(),
        })
    }

    /// The section as a derivation of the given degree.
    pub fn to_derivation(&self, dims: Dims, degree: i32) -> Derivation {
        let mut d = Derivation::zero(dims, degree);
        for (i, c) in self.comps.iter().enumerate() {
            d.set(Gen::B(i), c.clone());
        }
        d
    }

    /// The section as a derivation, with degree read off its components
    /// (zero sections default to degree 0).
    pub fn as_derivation(&self, dims: Dims) -> Derivation {
        let deg = self
            .degree()
            .or(0)
            .expect("section of mixed degree cannot act as a derivation");
        self.to_derivation(dims, deg as i32)
    }

    /// Action on a function: `f^i * d(g)/db^i`.
    pub fn act(&self, g: &GradedElement) -> GradedElement {
        let mut out = GradedElement::zero();
        for (i, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let dg = g.d_db(i);
            if !dg.is_zero() {
                out += &(c * &dg);
            }
        }
        out
    }

    /// Left multiplication by a function.
    pub fn scale_by(&self, f: &GradedElement) -> DSection {
        self.map(|c| f * c)
    }

    pub fn display_with(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .comps
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({})*d/db{}", c.display_with(names), i + 1))
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

impl Carrier for DSection {
    fn components(&self) -> Vec<&GradedElement> {
        self.comps.iter().collect()
    }

    fn map(&self, f: impl FnMut(&GradedElement) -> GradedElement) -> Self {
        DSection {
            comps: self.comps.iter().map(f).collect(),
        }
    }

    fn zip(
        &self,
        other: &Self,
        mut f: impl FnMut(&GradedElement, &GradedElement) -> GradedElement,
    ) -> Self {
        assert_eq!(self.comps.len(), other.comps.len());
        DSection {
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| f(a, b)).collect(),
        }
    }
}

impl fmt::Display for DSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&[]))
    }
}

/// A section of `Hom(D (x) D, D)`: components `phi_{ij}^k` with
/// `phi(d/db^i, d/db^j) = phi_{ij}^k d/db^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomSection {
    s: usize,
    comps: Vec<GradedElement>,
}

impl HomSection {
    pub fn zero(s: usize) -> Self {
        HomSection {
            s,
            comps: vec![GradedElement::zero(); s * s * s],
        }
    }

    pub fn from_fn(s: usize, mut f: impl FnMut(usize, usize, usize) -> GradedElement) -> Self {
        let mut comps = Vec::with_capacity(s * s * s);
        for i in 0..s {
            for j in 0..s {
                for k in 0..s {
                    comps.push(f(i, j, k));
                }
            }
        }
        HomSection { s, comps }
    }

    /// Assemble from the values on basis pairs: `values[i][j] = phi(d_i, d_j)`.
    pub fn from_basis_values(values: &[Vec<DSection>]) -> Self {
        let s = values.len();
        HomSection::from_fn(s, |i, j, k| values[i][j].component(k).clone())
    }

    pub fn rank(&self) -> usize {
        self.s
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &GradedElement {
        &self.comps[(i * self.s + j) * self.s + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: GradedElement) {
        let s = self.s;
        self.comps[(i * s + j) * s + k] = v;
    }

    /// `phi(d/db^i, d/db^j)`.
    pub fn on_basis(&self, i: usize, j: usize) -> DSection {
        DSection::new((0..self.s).map(|k| self.get(i, j, k).clone()).collect())
    }

    /// `phi(X, Y) = phi_{ij}^k X^i Y^j d/db^k`, coefficients multiplied in
    /// that order.
    pub fn eval(&self, x: &DSection, y: &DSection) -> DSection {
        let s = self.s;
        let mut out = DSection::zero(s);
        for i in 0..s {
            let xi = x.component(i);
            if xi.is_zero() {
                continue;
            }
            for j in 0..s {
                let yj = y.component(j);
                if yj.is_zero() {
                    continue;
                }
                for k in 0..s {
                    let phi = self.get(i, j, k);
                    if phi.is_zero() {
                        continue;
                    }
                    let term = &(phi * xi) * yj;
                    out.comps[k] += &term;
                }
            }
        }
        out
    }

    pub fn display_with(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for i in 0..self.s {
            for j in 0..self.s {
                for k in 0..self.s {
                    let c = self.get(i, j, k);
                    if !c.is_zero() {
                        parts.push(format!(
                            "[{},{}->{}] {}",
                            i + 1,
                            j + 1,
                            k + 1,
                            c.display_with(names)
                        ));
                    }
                }
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("; ")
        }
    }
}

impl Carrier for HomSection {
    fn components(&self) -> Vec<&GradedElement> {
        self.comps.iter().collect()
    }

    fn map(&self, f: impl FnMut(&GradedElement) -> GradedElement) -> Self {
        HomSection {
            s: self.s,
            comps: self.comps.iter().map(f).collect(),
        }
    }

    fn zip(
        &self,
        other: &Self,
        mut f: impl FnMut(&GradedElement, &GradedElement) -> GradedElement,
    ) -> Self {
        assert_eq!(self.s, other.s);
        HomSection {
            s: self.s,
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| f(a, b)).collect(),
        }
    }
}

impl fmt::Display for HomSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&[]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    #[test]
    fn dsection_acts_through_b_derivatives() {
        let b1 = GradedElement::b(0);
        let y = DSection::basis(2, 0).scale_by(&GradedElement::alpha(0));
        let sq = &b1 * &b1;
        assert_eq!(y.act(&sq), (&GradedElement::alpha(0) * &b1).scale(&crate::poly::int(2)));
    }

    #[test]
    fn derivation_round_trip() {
        let dims = Dims::new(0, 2, 1);
        let y = DSection::new(vec![GradedElement::beta(1), GradedElement::zero()]);
        let d = y.as_derivation(dims);
        assert_eq!(d.degree(), 1);
        assert_eq!(DSection::from_derivation(&d).unwrap(), y);
    }

    #[test]
    fn hom_eval_is_bilinear_with_coefficient_order() {
        let mut phi = HomSection::zero(1);
        phi.set(0, 0, 0, GradedElement::alpha(0));
        let x = DSection::new(vec![GradedElement::beta(0)]);
        let y = DSection::new(vec![GradedElement::from_poly(Poly::var(0))]);
        let v = phi.eval(&x, &y);
        let want = &(&GradedElement::alpha(0) * &GradedElement::beta(0))
            * &GradedElement::from_poly(Poly::var(0));
        assert_eq!(v.component(0), &want);
    }
}
