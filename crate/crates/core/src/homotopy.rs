//! The Koszul differential `delta`, its contracting homotopy `kappa`, the
//! pullback `iota*` along `A[1] -> M` and the embedding `pi*` of `A`-forms.
//!
//! On a monomial `alpha^I beta^J b^e` of bidegree `(p, q)` and b-degree `r`:
//!
//! * `delta` adjoins `beta^i` on the right of the odd part and differentiates
//!   in `b^i`, with overall sign `(-1)^{p+q}`; equivalently it is the degree 1
//!   derivation with `delta(b^i) = beta^i`.
//! * `kappa` removes `beta^i` by the left interior product, multiplies by
//!   `b^i` and by `(-1)^p / (q + r)`. Removing the `m`-th `beta` factor
//!   contributes `(-1)^{m-1}`.
//!
//! Both act coefficient-wise on sections of `D` and `Hom(D (x) D, D)`.

use thiserror::Error;

use crate::graded::{Derivation, Dims, Gen, GradedElement, Monomial};
use crate::poly::{int, rat, Exponents};
use crate::sections::Carrier;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomotopyError {
    #[error("pi* expects an A-form (no beta factors, b-degree 0); found a term of bidegree ({p},{q}) and b-degree {r}")]
    NotAnAForm { p: u32, q: u32, r: u32 },
}

fn delta_element(a: &GradedElement) -> GradedElement {
    let mut out = GradedElement::zero();
    for (m, c) in a.terms() {
        let p = m.p();
        let beta = m.beta_mask();
        for (i, &k) in m.b_exponents().as_slice().iter().enumerate() {
            if k == 0 || beta & (1 << i) != 0 {
                continue;
            }
            let above = (beta >> (i + 1)).count_ones();
            // (-1)^{p+q} from the rule, then beta^i moves left past `above` factors
            let neg = (p + m.q() + above) % 2 == 1;
            let mut e = m.b_exponents().as_slice().to_vec();
            e[i] -= 1;
            let mono = m.with_beta(beta | (1 << i)).with_b(Exponents::new(e));
            let coeff = c.scale(&int(if neg { -i64::from(k) } else { i64::from(k) }));
            out.add_term(mono, coeff);
        }
    }
    out
}

fn kappa_element(a: &GradedElement) -> GradedElement {
    let mut out = GradedElement::zero();
    for (m, c) in a.terms() {
        let q = m.q();
        if q == 0 {
            continue;
        }
        let p = m.p();
        let weight = rat(1, i64::from(q + m.r()));
        let beta = m.beta_mask();
        for (pos, i) in m.beta_set().into_iter().enumerate() {
            let neg = (p as usize + pos) % 2 == 1;
            let mut e = m.b_exponents().as_slice().to_vec();
            if e.len() <= i {
                e.resize(i + 1, 0);
            }
            e[i] += 1;
            let mono = m.with_beta(beta & !(1 << i)).with_b(Exponents::new(e));
            let w = if neg { -weight.clone() } else { weight.clone() };
            out.add_term(mono, c.scale(&w));
        }
    }
    out
}

fn is_a_form_monomial(m: &Monomial) -> bool {
    m.q() == 0 && m.r() == 0
}

pub fn delta<C: Carrier>(a: &C) -> C {
    a.map(delta_element)
}

pub fn kappa<C: Carrier>(a: &C) -> C {
    a.map(kappa_element)
}

/// Keep only the terms with no `beta` and b-degree zero.
pub fn iota_star<C: Carrier>(a: &C) -> C {
    a.map(|c| c.project(|_, q, r| q == 0 && r == 0))
}

/// Embed an `A`-form valued carrier back into the big algebra.
pub fn pi_star<C: Carrier>(a: &C) -> Result<C, HomotopyError> {
    for c in a.components() {
        if let Some((m, _)) = c.terms().find(|(m, _)| !is_a_form_monomial(m)) {
            return Err(HomotopyError::NotAnAForm {
                p: m.p(),
                q: m.q(),
                r: m.r(),
            });
        }
    }
    Ok(a.clone())
}

/// `sigma = pi* iota*`.
pub fn sigma<C: Carrier>(a: &C) -> C {
    iota_star(a)
}

/// `delta` as a degree 1 derivation: `b^i -> beta^i`.
pub fn delta_derivation(dims: Dims) -> Derivation {
    Derivation::from_fn(dims, 1, |g| match g {
        Gen::B(i) => GradedElement::beta(i),
        _ => GradedElement::zero(),
    })
}
