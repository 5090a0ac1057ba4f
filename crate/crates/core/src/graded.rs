//! The function algebra of the graded manifold: sparse sums of monomials
//! `alpha^I beta^J b^e` with polynomial coefficients in the chart variables,
//! and graded derivations of it.
//!
//! Odd generators are kept in the canonical order `alpha1 < ... < alphat <
//! beta1 < ... < betas` inside every monomial, which fixes all Koszul signs.
//! The fiber coordinates `b^i` and the chart variables have degree zero.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::Zero;

use crate::poly::{int, Exponents, Poly, Rational};

/// Ranks of the chart: base dimension `n`, rank of `B` (`s`) and of `A` (`t`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dims {
    pub n: usize,
    pub s: usize,
    pub t: usize,
}

impl Dims {
    pub fn new(n: usize, s: usize, t: usize) -> Self {
        assert!(s + t <= 32, "at most 32 odd generators of each kind are supported");
        Dims { n, s, t }
    }

    /// Rank of `L = B + A`.
    pub fn rank(&self) -> usize {
        self.s + self.t
    }

    pub fn generators(&self) -> Vec<Gen> {
        let mut g = Vec::with_capacity(self.n + self.t + 2 * self.s);
        g.extend((0..self.n).map(Gen::X));
        g.extend((0..self.t).map(Gen::Alpha));
        g.extend((0..self.s).map(Gen::Beta));
        g.extend((0..self.s).map(Gen::B));
        g
    }

    /// The odd generator `lambda^i` for an `L`-index: `0..s` are `B`-indices
    /// (`beta`), `s..s+t` are `A`-indices (`alpha`).
    pub fn lambda(&self, i: usize) -> Gen {
        if i < self.s {
            Gen::Beta(i)
        } else {
            Gen::Alpha(i - self.s)
        }
    }

    pub fn is_b_index(&self, i: usize) -> bool {
        i < self.s
    }
}

/// A generator of the function algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    X(usize),
    Alpha(usize),
    Beta(usize),
    B(usize),
}

impl Gen {
    pub fn degree(self) -> i32 {
        match self {
            Gen::X(_) | Gen::B(_) => 0,
            Gen::Alpha(_) | Gen::Beta(_) => 1,
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::X(i) => write!(f, "x{}", i + 1),
            Gen::Alpha(i) => write!(f, "alpha{}", i + 1),
            Gen::Beta(i) => write!(f, "beta{}", i + 1),
            Gen::B(i) => write!(f, "b{}", i + 1),
        }
    }
}

/// Number of pairs `(i in s, j in t)` with `i > j`: the transpositions needed
/// to merge the odd sequence `s` followed by `t` into increasing order.
fn inversions(s: u32, t: u32) -> u32 {
    let mut count = 0;
    let mut rest = t;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        count += (s.checked_shr(j + 1).unwrap_or(0)).count_ones();
    }
    count
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let j = rest.trailing_zeros();
            rest &= rest - 1;
            Some(j as usize)
        }
    })
}

/// `alpha^I beta^J b^e` in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    alpha: u32,
    beta: u32,
    b: Exponents,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    /// Build from index sets; returns the sign of sorting them, or `None` if
    /// an odd generator repeats.
    pub fn from_parts(alpha: &[usize], beta: &[usize], b: Vec<u32>) -> Option<(bool, Monomial)> {
        let mut m = Monomial {
            alpha: 0,
            beta: 0,
            b: Exponents::new(b),
        };
        let mut neg = false;
        for &i in alpha {
            let bit = 1u32 << i;
            if m.alpha & bit != 0 {
                return None;
            }
            neg ^= (m.alpha >> i).count_ones() % 2 == 1;
            m.alpha |= bit;
        }
        for &i in beta {
            let bit = 1u32 << i;
            if m.beta & bit != 0 {
                return None;
            }
            neg ^= (m.beta >> i).count_ones() % 2 == 1;
            m.beta |= bit;
        }
        Some((neg, m))
    }

    pub fn gen(g: Gen) -> Self {
        match g {
            Gen::Alpha(i) => Monomial {
                alpha: 1 << i,
                ..Monomial::one()
            },
            Gen::Beta(i) => Monomial {
                beta: 1 << i,
                ..Monomial::one()
            },
            Gen::B(i) => Monomial {
                b: Exponents::var(i),
                ..Monomial::one()
            },
            Gen::X(_) => panic!("chart variables live in the coefficients"),
        }
    }

    pub fn alpha_mask(&self) -> u32 {
        self.alpha
    }

    pub fn beta_mask(&self) -> u32 {
        self.beta
    }

    pub fn alpha_set(&self) -> Vec<usize> {
        bits(self.alpha).collect()
    }

    pub fn beta_set(&self) -> Vec<usize> {
        bits(self.beta).collect()
    }

    pub fn b_exponents(&self) -> &Exponents {
        &self.b
    }

    /// `A`-form degree.
    pub fn p(&self) -> u32 {
        self.alpha.count_ones()
    }

    /// `B`-form degree.
    pub fn q(&self) -> u32 {
        self.beta.count_ones()
    }

    /// b-degree.
    pub fn r(&self) -> u32 {
        self.b.degree()
    }

    pub fn degree(&self) -> u32 {
        self.p() + self.q()
    }

    pub(crate) fn with_beta(&self, beta: u32) -> Monomial {
        Monomial {
            alpha: self.alpha,
            beta,
            b: self.b.clone(),
        }
    }

    pub(crate) fn with_b(&self, b: Exponents) -> Monomial {
        Monomial {
            alpha: self.alpha,
            beta: self.beta,
            b,
        }
    }

    pub(crate) fn odd_only(&self) -> Monomial {
        Monomial {
            alpha: self.alpha,
            beta: self.beta,
            b: Exponents::one(),
        }
    }

    /// Koszul product. `None` when an odd generator repeats; otherwise the
    /// sign (`true` for negative) and the canonical product.
    pub fn mul(&self, other: &Monomial) -> Option<(bool, Monomial)> {
        if self.alpha & other.alpha != 0 || self.beta & other.beta != 0 {
            return None;
        }
        let swaps = other.alpha.count_ones() * self.beta.count_ones()
            + inversions(self.alpha, other.alpha)
            + inversions(self.beta, other.beta);
        let b = if other.b.degree() == 0 {
            self.b.clone()
        } else if self.b.degree() == 0 {
            other.b.clone()
        } else {
            let len = self.b.as_slice().len().max(other.b.as_slice().len());
            Exponents::new((0..len).map(|i| self.b.get(i) + other.b.get(i)).collect())
        };
        Some((
            swaps % 2 == 1,
            Monomial {
                alpha: self.alpha | other.alpha,
                beta: self.beta | other.beta,
                b,
            },
        ))
    }

    /// The odd generators in canonical order.
    pub fn odd_gens(&self) -> Vec<Gen> {
        bits(self.alpha)
            .map(Gen::Alpha)
            .chain(bits(self.beta).map(Gen::Beta))
            .collect()
    }

    /// Ordering used when printing: form degree, then the `alpha` set, then
    /// the `beta` set, then b-degree and the b exponents.
    pub fn print_cmp(&self, other: &Monomial) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.alpha_set().cmp(&other.alpha_set()))
            .then_with(|| self.beta_set().cmp(&other.beta_set()))
            .then_with(|| self.b.degree().cmp(&other.b.degree()))
            .then_with(|| other.b.grlex_cmp(&self.b))
    }

    fn render(&self) -> String {
        let mut parts: Vec<String> = self.odd_gens().iter().map(|g| g.to_string()).collect();
        for (i, &k) in self.b.as_slice().iter().enumerate() {
            match k {
                0 => {}
                1 => parts.push(format!("b{}", i + 1)),
                _ => parts.push(format!("b{}^{}", i + 1, k)),
            }
        }
        parts.join("*")
    }
}

/// Degree of an element: zero has every degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degree {
    Any,
    Pure(u32),
    Mixed,
}

impl Degree {
    pub fn pure(self) -> Option<u32> {
        match self {
            Degree::Pure(d) => Some(d),
            _ => None,
        }
    }

    /// Degree, treating zero as degree `fallback`.
    pub fn or(self, fallback: u32) -> Option<u32> {
        match self {
            Degree::Any => Some(fallback),
            Degree::Pure(d) => Some(d),
            Degree::Mixed => None,
        }
    }
}

/// An element of `Gamma(Lambda(A*) (x) Lambda(B*) (x) S(B*))` with polynomial
/// coefficients. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GradedElement {
    terms: BTreeMap<Monomial, Poly>,
}

impl GradedElement {
    pub fn zero() -> Self {
        GradedElement::default()
    }

    pub fn one() -> Self {
        GradedElement::from_poly(Poly::one())
    }

    pub fn constant(c: Rational) -> Self {
        GradedElement::from_poly(Poly::constant(c))
    }

    pub fn from_poly(p: Poly) -> Self {
        GradedElement::term(Monomial::one(), p)
    }

    pub fn term(m: Monomial, p: Poly) -> Self {
        let mut e = GradedElement::zero();
        e.add_term(m, p);
        e
    }

    /// A single generator (chart variables become polynomial coefficients).
    pub fn gen(g: Gen) -> Self {
        match g {
            Gen::X(i) => GradedElement::from_poly(Poly::var(i)),
            _ => GradedElement::term(Monomial::gen(g), Poly::one()),
        }
    }

    pub fn alpha(i: usize) -> Self {
        GradedElement::gen(Gen::Alpha(i))
    }

    pub fn beta(i: usize) -> Self {
        GradedElement::gen(Gen::Beta(i))
    }

    pub fn b(i: usize) -> Self {
        GradedElement::gen(Gen::B(i))
    }

    pub fn add_term(&mut self, m: Monomial, p: Poly) {
        if p.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &p;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn add_signed(&mut self, m: Monomial, p: &Poly, neg: bool) {
        if neg {
            self.add_term(m, -p);
        } else {
            self.add_term(m, p.clone());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Add `sign * left * v * right * coeff`, skipping terms of `v` with
    /// b-degree above `max_r`.
    fn accumulate(
        &mut self,
        v: &GradedElement,
        max_r: u32,
        left: &Monomial,
        right: &Monomial,
        coeff: &Poly,
        neg: bool,
    ) {
        for (mv, p) in &v.terms {
            if mv.r() > max_r {
                continue;
            }
            let Some((n1, vm)) = mv.mul(right) else { continue };
            let Some((n2, prod)) = left.mul(&vm) else { continue };
            self.add_signed(prod, &(p * coeff), neg ^ n1 ^ n2);
        }
    }

    /// Product truncated at b-degree `n`.
    pub fn mul_upto(&self, rhs: &GradedElement, n: u32) -> GradedElement {
        let mut out = GradedElement::zero();
        for (m1, p1) in &self.terms {
            let r1 = m1.r();
            if r1 > n {
                continue;
            }
            for (m2, p2) in &rhs.terms {
                if r1 + m2.r() > n {
                    continue;
                }
                if let Some((neg, m)) = m1.mul(m2) {
                    out.add_signed(m, &(p1 * p2), neg);
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Poly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Poly {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Degree {
        let mut it = self.terms.keys().map(Monomial::degree);
        match it.next() {
            None => Degree::Any,
            Some(d) => {
                if it.all(|e| e == d) {
                    Degree::Pure(d)
                } else {
                    Degree::Mixed
                }
            }
        }
    }

    /// Largest b-degree present (`None` for zero).
    pub fn max_b_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::r).max()
    }

    pub fn min_b_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::r).min()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return GradedElement::zero();
        }
        GradedElement {
            terms: self.terms.iter().map(|(m, p)| (m.clone(), p.scale(c))).collect(),
        }
    }

    pub fn mul_poly(&self, q: &Poly) -> Self {
        let mut out = GradedElement::zero();
        for (m, p) in &self.terms {
            out.add_term(m.clone(), p * q);
        }
        out
    }

    /// Keep the monomials whose `(p, q, r)` satisfies the selector.
    pub fn project(&self, keep: impl Fn(u32, u32, u32) -> bool) -> Self {
        GradedElement {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m.p(), m.q(), m.r()))
                .map(|(m, p)| (m.clone(), p.clone()))
                .collect(),
        }
    }

    /// Drop all monomials of b-degree above `n`.
    pub fn truncate(&self, n: u32) -> Self {
        self.project(|_, _, r| r <= n)
    }

    pub fn bidegree_part(&self, p: u32, q: u32) -> Self {
        self.project(|pp, qq, _| pp == p && qq == q)
    }

    pub fn b_degree_part(&self, r: u32) -> Self {
        self.project(|_, _, rr| rr == r)
    }

    /// The distinct `(p, q)` bidegrees present.
    pub fn bidegrees(&self) -> Vec<(u32, u32)> {
        let mut v: Vec<_> = self.terms.keys().map(|m| (m.p(), m.q())).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Left multiplication by a monomial with unit coefficient.
    pub fn left_mul_monomial(&self, m: &Monomial) -> Self {
        let mut out = GradedElement::zero();
        for (m2, p) in &self.terms {
            if let Some((neg, prod)) = m.mul(m2) {
                out.add_signed(prod, p, neg);
            }
        }
        out
    }

    /// Right multiplication by a monomial with unit coefficient.
    pub fn right_mul_monomial(&self, m: &Monomial) -> Self {
        let mut out = GradedElement::zero();
        for (m1, p) in &self.terms {
            if let Some((neg, prod)) = m1.mul(m) {
                out.add_signed(prod, p, neg);
            }
        }
        out
    }

    /// Partial derivative with respect to the even fiber coordinate `b^i`.
    pub fn d_db(&self, i: usize) -> Self {
        let mut out = GradedElement::zero();
        for (m, p) in &self.terms {
            let k = m.b.get(i);
            if k > 0 {
                let mut e = m.b.as_slice().to_vec();
                e[i] -= 1;
                out.add_term(m.with_b(Exponents::new(e)), p.scale(&int(i64::from(k))));
            }
        }
        out
    }

    /// Does any coefficient mention chart variables?
    pub fn is_constant_coefficient(&self) -> bool {
        self.terms.values().all(|p| p.as_constant().is_some())
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| a.0.print_cmp(b.0));
        let mut out = String::new();
        for (idx, (m, p)) in terms.into_iter().enumerate() {
            let mono = m.render();
            let coeff = p.display_with(names);
            let (neg, body) = if mono.is_empty() {
                match coeff.strip_prefix('-') {
                    Some(rest) if p.len() == 1 => (true, rest.to_string()),
                    _ => (false, coeff),
                }
            } else if p.len() == 1 {
                let c = coeff.strip_prefix('-');
                let neg = c.is_some();
                let mag = c.map(str::to_string).unwrap_or(coeff);
                if mag == "1" {
                    (neg, mono)
                } else {
                    (neg, format!("{mag}*{mono}"))
                }
            } else {
                (false, format!("({coeff})*{mono}"))
            };
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&[]))
    }
}

impl AddAssign<&GradedElement> for GradedElement {
    fn add_assign(&mut self, rhs: &GradedElement) {
        for (m, p) in &rhs.terms {
            self.add_term(m.clone(), p.clone());
        }
    }
}

impl SubAssign<&GradedElement> for GradedElement {
    fn sub_assign(&mut self, rhs: &GradedElement) {
        for (m, p) in &rhs.terms {
            self.add_term(m.clone(), -p);
        }
    }
}

impl Add for &GradedElement {
    type Output = GradedElement;
    fn add(self, rhs: &GradedElement) -> GradedElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &GradedElement {
    type Output = GradedElement;
    fn sub(self, rhs: &GradedElement) -> GradedElement {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &GradedElement {
    type Output = GradedElement;
    fn neg(self) -> GradedElement {
        GradedElement {
            terms: self.terms.iter().map(|(m, p)| (m.clone(), -p)).collect(),
        }
    }
}

/// The graded-commutative product.
impl Mul for &GradedElement {
    type Output = GradedElement;
    fn mul(self, rhs: &GradedElement) -> GradedElement {
        let mut out = GradedElement::zero();
        for (m1, p1) in &self.terms {
            for (m2, p2) in &rhs.terms {
                if let Some((neg, m)) = m1.mul(m2) {
                    out.add_signed(m, &(p1 * p2), neg);
                }
            }
        }
        out
    }
}

pub fn gmul(a: &GradedElement, b: &GradedElement) -> GradedElement {
    a * b
}

/// A graded derivation, stored by its values on the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    degree: i32,
    x: Vec<GradedElement>,
    alpha: Vec<GradedElement>,
    beta: Vec<GradedElement>,
    b: Vec<GradedElement>,
}

impl Derivation {
    pub fn zero(dims: Dims, degree: i32) -> Self {
        Derivation {
            degree,
            x: vec![GradedElement::zero(); dims.n],
            alpha: vec![GradedElement::zero(); dims.t],
            beta: vec![GradedElement::zero(); dims.s],
            b: vec![GradedElement::zero(); dims.s],
        }
    }

    /// Build from a generator-value function.
    pub fn from_fn(dims: Dims, degree: i32, mut f: impl FnMut(Gen) -> GradedElement) -> Self {
        let mut d = Derivation::zero(dims, degree);
        for g in dims.generators() {
            d.set(g, f(g));
        }
        d
    }

    pub fn dims(&self) -> Dims {
        Dims {
            n: self.x.len(),
            s: self.b.len(),
            t: self.alpha.len(),
        }
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn value(&self, g: Gen) -> &GradedElement {
        match g {
            Gen::X(i) => &self.x[i],
            Gen::Alpha(i) => &self.alpha[i],
            Gen::Beta(i) => &self.beta[i],
            Gen::B(i) => &self.b[i],
        }
    }

    pub fn set(&mut self, g: Gen, v: GradedElement) {
        match g {
            Gen::X(i) => self.x[i] = v,
            Gen::Alpha(i) => self.alpha[i] = v,
            Gen::Beta(i) => self.beta[i] = v,
            Gen::B(i) => self.b[i] = v,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.dims().generators().iter().all(|&g| self.value(g).is_zero())
    }

    /// Every generator value has degree `deg(g) + degree`.
    pub fn degrees_consistent(&self) -> bool {
        self.dims().generators().iter().all(|&g| {
            let want = g.degree() + self.degree;
            match self.value(g).degree() {
                Degree::Any => true,
                Degree::Pure(d) => d as i32 == want,
                Degree::Mixed => false,
            }
        })
    }

    /// Values on `x` and the odd generators all vanish.
    pub fn is_vertical(&self) -> bool {
        self.x.iter().chain(&self.alpha).chain(&self.beta).all(GradedElement::is_zero)
    }

    pub fn map_values(&self, mut f: impl FnMut(Gen, &GradedElement) -> GradedElement) -> Self {
        let dims = self.dims();
        Derivation::from_fn(dims, self.degree, |g| f(g, self.value(g)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map_values(|_, v| v.scale(c))
    }

    pub fn truncate(&self, n: u32) -> Self {
        self.map_values(|_, v| v.truncate(n))
    }

    /// Apply to an element by the graded Leibniz rule.
    pub fn apply(&self, a: &GradedElement) -> GradedElement {
        self.apply_bounded(a, None)
    }

    /// `apply` followed by truncation at b-degree `n`, without forming the
    /// discarded products.
    pub fn apply_upto(&self, a: &GradedElement, n: u32) -> GradedElement {
        self.apply_bounded(a, Some(n))
    }

    fn apply_bounded(&self, a: &GradedElement, bound: Option<u32>) -> GradedElement {
        let odd = self.degree.rem_euclid(2) == 1;
        let mut out = GradedElement::zero();
        let one = Monomial::one();
        for (m, c) in a.terms() {
            // Largest b-degree a generator value may carry so the product
            // stays within the bound; `None` when nothing fits.
            let room = |lowered: u32| bound.map_or(Some(u32::MAX), |n| (n + lowered).checked_sub(m.r()));
            if let Some(max_r) = room(0) {
                for (j, xv) in self.x.iter().enumerate() {
                    if xv.is_zero() {
                        continue;
                    }
                    let dc = c.derivative(j);
                    if !dc.is_zero() {
                        out.accumulate(xv, max_r, &one, m, &dc, false);
                    }
                }
                let gens = m.odd_gens();
                for (pos, &g) in gens.iter().enumerate() {
                    let v = self.value(g);
                    if v.is_zero() {
                        continue;
                    }
                    let (prefix_gens, rest) = gens.split_at(pos);
                    let prefix = odd_monomial(prefix_gens);
                    let suffix = odd_monomial(&rest[1..]).with_b(m.b.clone());
                    out.accumulate(v, max_r, &prefix, &suffix, c, odd && pos % 2 == 1);
                }
            }
            let Some(max_r) = room(1) else {
                continue;
            };
            let odd_part = m.odd_only();
            let flip = odd && m.odd_gens().len() % 2 == 1;
            for (i, &k) in m.b.as_slice().iter().enumerate() {
                if k == 0 || self.b[i].is_zero() {
                    continue;
                }
                let mut e = m.b.as_slice().to_vec();
                e[i] -= 1;
                let rest = Monomial::one().with_b(Exponents::new(e));
                out.accumulate(&self.b[i], max_r, &odd_part, &rest, &c.scale(&int(i64::from(k))), flip);
            }
        }
        out
    }

    /// Graded commutator `D1 D2 - (-1)^{|D1||D2|} D2 D1`, evaluated on generators.
    pub fn commutator(&self, other: &Derivation) -> Derivation {
        let sign_plus = (self.degree * other.degree).rem_euclid(2) == 1;
        let dims = self.dims();
        Derivation::from_fn(dims, self.degree + other.degree, |g| {
            let a = self.apply(other.value(g));
            let b = other.apply(self.value(g));
            if sign_plus {
                &a + &b
            } else {
                &a - &b
            }
        })
    }

    /// `D(D(g))` for every generator, i.e. the values of `D^2`.
    pub fn square(&self) -> Derivation {
        let dims = self.dims();
        Derivation::from_fn(dims, 2 * self.degree, |g| self.apply(self.value(g)))
    }

    /// Largest b-degree among all generator values.
    pub fn max_b_degree(&self) -> Option<u32> {
        self.dims()
            .generators()
            .iter()
            .filter_map(|&g| self.value(g).max_b_degree())
            .max()
    }
}

fn odd_monomial(gens: &[Gen]) -> Monomial {
    let mut m = Monomial::one();
    for &g in gens {
        match g {
            Gen::Alpha(i) => m.alpha |= 1 << i,
            Gen::Beta(i) => m.beta |= 1 << i,
            _ => unreachable!(),
        }
    }
    m
}

impl Add for &Derivation {
    type Output = Derivation;
    fn add(self, rhs: &Derivation) -> Derivation {
        assert_eq!(self.degree, rhs.degree, "adding derivations of different degrees");
        self.map_values(|g, v| v + rhs.value(g))
    }
}

impl Sub for &Derivation {
    type Output = Derivation;
    fn sub(self, rhs: &Derivation) -> Derivation {
        assert_eq!(self.degree, rhs.degree, "subtracting derivations of different degrees");
        self.map_values(|g, v| v - rhs.value(g))
    }
}

impl Neg for &Derivation {
    type Output = Derivation;
    fn neg(self) -> Derivation {
        self.map_values(|_, v| -v)
    }
}

/// Coordinate vector field `d/db^i`.
pub fn d_db(dims: Dims, i: usize) -> Derivation {
    Derivation::from_fn(dims, 0, |g| {
        if g == Gen::B(i) {
            GradedElement::one()
        } else {
            GradedElement::zero()
        }
    })
}

/// Coordinate vector field `d/dx^j` (acts on coefficients only).
pub fn d_dx(dims: Dims, j: usize) -> Derivation {
    Derivation::from_fn(dims, 0, |g| {
        if g == Gen::X(j) {
            GradedElement::one()
        } else {
            GradedElement::zero()
        }
    })
}

/// Left derivative `d/dbeta^i` (degree -1).
pub fn d_dbeta(dims: Dims, i: usize) -> Derivation {
    Derivation::from_fn(dims, -1, |g| {
        if g == Gen::Beta(i) {
            GradedElement::one()
        } else {
            GradedElement::zero()
        }
    })
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in self.dims().generators() {
            let v = self.value(g);
            if !v.is_zero() {
                writeln!(f, "{g} -> {v}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn dims() -> Dims {
        Dims::new(1, 2, 1)
    }

    #[test]
    fn odd_generators_square_to_zero() {
        let b1 = GradedElement::beta(0);
        assert!((&b1 * &b1).is_zero());
    }

    #[test]
    fn odd_generators_anticommute() {
        let b1 = GradedElement::beta(0);
        let b2 = GradedElement::beta(1);
        let p = &b1 * &b2;
        let q = &b2 * &b1;
        assert_eq!(q, -&p);
        let (neg, m) = Monomial::from_parts(&[], &[0, 1], vec![]).unwrap();
        assert!(!neg);
        assert_eq!(p, GradedElement::term(m, Poly::one()));
    }

    #[test]
    fn even_factors_commute() {
        let xb = GradedElement::from_poly(Poly::var(0)).mul_poly(&Poly::one());
        let xb = &xb * &GradedElement::b(0);
        let a = GradedElement::alpha(0);
        let prod = &xb * &a;
        let (_, m) = Monomial::from_parts(&[0], &[], vec![1]).unwrap();
        assert_eq!(prod, GradedElement::term(m, Poly::var(0)));
        assert_eq!(prod, &a * &xb);
    }

    #[test]
    fn alpha_before_beta_in_canonical_order() {
        let a = GradedElement::alpha(0);
        let b = GradedElement::beta(0);
        let ba = &b * &a;
        let ab = &a * &b;
        assert_eq!(ba, -&ab);
        let (m, _) = ab.terms().next().unwrap();
        assert_eq!(m.alpha_set(), vec![0]);
        assert_eq!(m.beta_set(), vec![0]);
    }

    #[test]
    fn derivative_in_b() {
        let d = d_db(dims(), 0);
        let b1 = GradedElement::b(0);
        let sq = &b1 * &b1;
        assert_eq!(d.apply(&sq), b1.scale(&int(2)));
    }

    #[test]
    fn derivations_kill_constants() {
        let d = d_dbeta(dims(), 0);
        assert!(d.apply(&GradedElement::constant(rat(3, 2))).is_zero());
    }

    #[test]
    fn left_derivative_sign() {
        // d/dbeta1 (alpha1 beta1) = -alpha1
        let d = d_dbeta(dims(), 0);
        let ab = &GradedElement::alpha(0) * &GradedElement::beta(0);
        assert_eq!(d.apply(&ab), -&GradedElement::alpha(0));
    }

    #[test]
    fn coordinate_fields_commute() {
        let c = d_db(dims(), 0).commutator(&d_db(dims(), 1));
        assert!(c.is_zero());
        assert_eq!(c.degree(), 0);
    }

    #[test]
    fn project_and_truncate() {
        let a = &GradedElement::alpha(0) * &GradedElement::beta(0);
        let ab = &GradedElement::alpha(0) * &GradedElement::b(0);
        let sum = &a + &ab;
        assert_eq!(sum.project(|_, q, _| q == 1), a);
        assert_eq!(sum.project(|_, _, _| true), sum);
        let bb = &GradedElement::beta(0) * &GradedElement::b(0);
        assert!(bb.project(|_, _, r| r >= 2).is_zero());
        let b1 = GradedElement::b(0);
        let cube = &(&b1 * &b1) * &b1;
        assert_eq!((&cube + &b1).truncate(2), b1);
        assert!(GradedElement::zero().truncate(3).is_zero());
    }

    #[test]
    fn zero_has_any_degree() {
        assert_eq!(GradedElement::zero().degree(), Degree::Any);
        assert_eq!(GradedElement::beta(0).degree(), Degree::Pure(1));
        let mixed = &GradedElement::beta(0) + &GradedElement::one();
        assert_eq!(mixed.degree(), Degree::Mixed);
    }

    #[test]
    fn display_is_canonical() {
        let e = &(&GradedElement::alpha(0) * &GradedElement::b(0)).scale(&rat(-1, 2))
            + &GradedElement::from_poly(Poly::var(0));
        assert_eq!(e.to_string(), "x1 - 1/2*alpha1*b1");
    }
}
