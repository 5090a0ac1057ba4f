//! Lift an `A`-form valued in `Hom(B (x) B, B)` to a `D_B`-closed section and
//! come back down with `iota*`.

use liepair::algebroid::fixtures;
use liepair::fedosov::{fedosov_x, mu_lift, quasi_inverse, LieDerivative, TruncationOrder};
use liepair::homotopy::{iota_star, sigma};
use liepair::{Carrier, GradedElement, HomSection, Poly};

fn main() {
    let alg = fixtures::line_action();
    let names = alg.variables();
    let order = TruncationOrder::new(4).unwrap();
    let fd = fedosov_x(&alg, order).unwrap();
    let a = HomSection::from_fn(1, |_, _, _| GradedElement::alpha(0).mul_poly(&Poly::var(0)));

    let mu = mu_lift(&fd, &a).unwrap();
    println!("a      = {}", a.display_with(names));
    println!("mu(a)  = {}", mu.display_with(names));
    let (da, db) = fd.split().unwrap();
    let w = order.window();
    println!("sigma(mu(a)) = a: {}", sigma(&mu) == a);
    println!("D_B mu(a) = 0 through b-degree {w}: {}", mu.lie_upto(db, w).is_zero());
    let da_a = alg.d_a_on_hom(&a).unwrap();
    let rhs = mu_lift(&fd, &da_a).unwrap();
    println!("D_A mu(a) = mu(d_A a): {}", mu.lie_upto(da, w).minus(&rhs.truncate(w)).is_zero());
    let back = iota_star(&quasi_inverse(&fd, &a).unwrap());
    println!("iota*(quasi_inverse(a)) = a: {}", back == a);
}
