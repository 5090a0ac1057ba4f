//! Sparse multivariate polynomials over the rationals in the chart variables
//! `x1, ..., xn`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// Exact rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exponent vector with trailing zeros trimmed, so that the same monomial has
/// one representation regardless of how many variables are in scope.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Exponents(Vec<u32>);

impl Exponents {
    pub fn new(mut e: Vec<u32>) -> Self {
        while e.last() == Some(&0) {
            e.pop();
        }
        Exponents(e)
    }

    pub fn one() -> Self {
        Exponents(Vec::new())
    }

    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        Exponents(e)
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Exponents) -> Exponents {
        let len = self.0.len().max(other.0.len());
        let e = (0..len).map(|i| self.get(i) + other.get(i)).collect();
        Exponents(e)
    }

    fn lower(&self, i: usize) -> Exponents {
        let mut e = self.0.clone();
        e[i] -= 1;
        Exponents::new(e)
    }

    /// Graded lexicographic comparison: total degree first, then exponents
    /// of `x1`, `x2`, ... in turn.
    pub fn grlex_cmp(&self, other: &Exponents) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let len = self.0.len().max(other.0.len());
            (0..len)
                .map(|i| self.get(i).cmp(&other.get(i)))
                .find(|o| *o != Ordering::Equal)
                .unwrap_or(Ordering::Equal)
        })
    }
}

/// Polynomial in the chart variables with exact rational coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Exponents, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(Exponents::one(), c);
        p
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(int(n))
    }

    /// The coordinate function `x_{i+1}` (0-based index).
    pub fn var(i: usize) -> Self {
        let mut p = Poly::zero();
        p.add_term(Exponents::var(i), Rational::one());
        p
    }

    pub fn monomial(e: Exponents, c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(e, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    /// Constant term if the polynomial is constant (zero counts as constant).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Exponents::one()).cloned(),
            _ => None,
        }
    }

    /// Number of variables actually referenced.
    pub fn var_span(&self) -> usize {
        self.terms.keys().map(|e| e.0.len()).max().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Exponents::degree).max()
    }

    pub fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Partial derivative with respect to `x_{i+1}`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            let k = e.get(i);
            if k > 0 {
                out.add_term(e.lower(i), c * int(i64::from(k)));
            }
        }
        out
    }

    /// Substitute rational values for every variable.
    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (i, &k) in e.as_slice().iter().enumerate() {
                let x = point.get(i).cloned().unwrap_or_else(Rational::zero);
                for _ in 0..k {
                    v *= &x;
                }
            }
            acc += v;
        }
        acc
    }

    /// Terms in printing order: highest graded-lex monomial first.
    pub fn sorted_terms(&self) -> Vec<(&Exponents, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.grlex_cmp(a.0));
        v
    }

    /// Render with the given variable names; missing names fall back to `x{i}`.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            if !mag.is_one() || e.degree() == 0 {
                factors.push(format_rational(&mag));
            }
            for (i, &k) in e.as_slice().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let name = names.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1));
                if k == 1 {
                    factors.push(name);
                } else {
                    factors.push(format!("{name}^{k}"));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&[]))
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), -c.clone());
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1.mul(e2), c1 * c2);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_coefficients_are_dropped() {
        let x = Poly::var(0);
        let d = &x - &x;
        assert!(d.is_zero());
        assert_eq!(d, Poly::zero());
    }

    #[test]
    fn product_and_derivative() {
        let x = Poly::var(0);
        let y = Poly::var(1);
        let p = &(&x * &x) * &y;
        assert_eq!(p.derivative(0), &Poly::from_int(2) * &(&x * &y));
        assert_eq!(p.derivative(1), &x * &x);
        assert!(p.derivative(2).is_zero());
    }

    #[test]
    fn trailing_zero_exponents_are_canonical() {
        assert_eq!(Exponents::new(vec![1, 0, 0]), Exponents::var(0));
        let p = Poly::monomial(Exponents::new(vec![0, 0]), int(3));
        assert_eq!(p, Poly::from_int(3));
    }

    #[test]
    fn display_orders_graded_lex_descending() {
        let x = Poly::var(0);
        let p = &(&(&x * &x).scale(&int(2)) - &Poly::constant(rat(1, 3))) + &Poly::var(1);
        assert_eq!(p.to_string(), "2*x1^2 + x2 - 1/3");
    }

    #[test]
    fn evaluate_at_point() {
        let x = Poly::var(0);
        let p = &(&x * &x) + &Poly::from_int(1);
        assert_eq!(p.evaluate(&[int(3)]), int(10));
    }
}
