//! Seeded random elements for the verification suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graded::{Dims, GradedElement, Monomial};
use crate::poly::{rat, Exponents, Poly};
use crate::sections::{DSection, HomSection};

/// Shape of the random elements: b-degree and coefficient degree bounds and
/// the number of terms per element.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_b_degree: u32,
    pub max_coeff_degree: u32,
    pub terms: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            max_b_degree: 5,
            max_coeff_degree: 2,
            terms: 3,
        }
    }
}

pub struct Sampler {
    rng: ChaCha8Rng,
    dims: Dims,
}

impl Sampler {
    pub fn new(dims: Dims, seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            dims,
        }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn rational(&mut self) -> crate::poly::Rational {
        let num = self.rng.gen_range(-5..=5);
        let den = self.rng.gen_range(1..=3);
        if num == 0 {
            rat(1, den)
        } else {
            rat(num, den)
        }
    }

    /// A polynomial with up to three terms of degree `<= max_degree`.
    pub fn poly(&mut self, max_degree: u32) -> Poly {
        let mut p = Poly::zero();
        let terms = self.rng.gen_range(1..=3);
        for _ in 0..terms {
            let e = self.exponents(self.dims.n, max_degree);
            let c = self.rational();
            p.add_term(e, c);
        }
        if p.is_zero() {
            Poly::constant(self.rational())
        } else {
            p
        }
    }

    fn exponents(&mut self, vars: usize, max_degree: u32) -> Exponents {
        let mut e = vec![0u32; vars];
        if vars > 0 {
            let deg = self.rng.gen_range(0..=max_degree);
            for _ in 0..deg {
                let i = self.rng.gen_range(0..vars);
                e[i] += 1;
            }
        }
        Exponents::new(e)
    }

    fn subset(&mut self, size: usize) -> Vec<usize> {
        (0..size).filter(|_| self.rng.gen_bool(0.4)).collect()
    }

    /// A random monomial; the flags choose which kinds of generators may occur.
    fn monomial(&mut self, with_beta: bool, with_b: bool, with_alpha: bool, max_b: u32) -> Monomial {
        let alpha = if with_alpha { self.subset(self.dims.t) } else { Vec::new() };
        let beta = if with_beta { self.subset(self.dims.s) } else { Vec::new() };
        let b = if with_b {
            self.exponents(self.dims.s, max_b).as_slice().to_vec()
        } else {
            Vec::new()
        };
        Monomial::from_parts(&alpha, &beta, b).expect("distinct indices").1
    }

    /// A general element of the function algebra.
    pub fn element(&mut self, shape: Shape) -> GradedElement {
        let mut out = GradedElement::zero();
        for _ in 0..shape.terms {
            let m = self.monomial(true, true, true, shape.max_b_degree);
            let c = self.poly(shape.max_coeff_degree);
            out.add_term(m, c);
        }
        out
    }

    /// A homogeneous element of the given form degree (rejection on the
    /// odd part).
    pub fn homogeneous(&mut self, degree: u32, shape: Shape) -> GradedElement {
        let mut out = GradedElement::zero();
        for _ in 0..shape.terms {
            for _ in 0..64 {
                let m = self.monomial(true, true, true, shape.max_b_degree);
                if m.degree() == degree {
                    let c = self.poly(shape.max_coeff_degree);
                    out.add_term(m, c);
                    break;
                }
            }
        }
        out
    }

    /// An `A`-form: no `beta`, b-degree zero.
    pub fn a_form(&mut self, shape: Shape) -> GradedElement {
        let mut out = GradedElement::zero();
        for _ in 0..shape.terms {
            let m = self.monomial(false, false, true, 0);
            let c = self.poly(shape.max_coeff_degree);
            out.add_term(m, c);
        }
        out
    }

    /// A degree 0 element: polynomial in `b` with polynomial coefficients.
    pub fn even_function(&mut self, shape: Shape) -> GradedElement {
        let mut out = GradedElement::zero();
        for _ in 0..shape.terms {
            let m = self.monomial(false, true, false, shape.max_b_degree);
            let c = self.poly(shape.max_coeff_degree);
            out.add_term(m, c);
        }
        out
    }

    pub fn dsection(&mut self, shape: Shape) -> DSection {
        let s = self.dims.s;
        DSection::new((0..s).map(|_| self.element(shape)).collect())
    }

    pub fn hom_section(&mut self, shape: Shape) -> HomSection {
        let s = self.dims.s;
        HomSection::from_fn(s, |_, _, _| self.element(shape))
    }

    pub fn a_form_dsection(&mut self, shape: Shape) -> DSection {
        let s = self.dims.s;
        DSection::new((0..s).map(|_| self.a_form(shape)).collect())
    }

    pub fn a_form_hom(&mut self, shape: Shape) -> HomSection {
        let s = self.dims.s;
        HomSection::from_fn(s, |_, _, _| self.a_form(shape))
    }

    /// A degree 0 section of `Hom(D (x) D, D)`, used as a connection term.
    pub fn even_hom(&mut self, shape: Shape) -> HomSection {
        let s = self.dims.s;
        HomSection::from_fn(s, |_, _, _| self.even_function(shape))
    }

    pub fn even_dsection(&mut self, shape: Shape) -> DSection {
        let s = self.dims.s;
        DSection::new((0..s).map(|_| self.even_function(shape)).collect())
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }
}
