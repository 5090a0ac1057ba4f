//! The Koszul differential `delta`, the homotopy `kappa` and the projection
//! `sigma = pi* iota*` on a small element.

use liepair::graded::GradedElement;
use liepair::homotopy::{delta, kappa, sigma};
use liepair::poly::rat;
use liepair::Carrier;

fn main() {
    let names = vec!["x1".to_string()];
    let b = GradedElement::b;
    let a = &(&(&GradedElement::alpha(0) * &b(0)) * &b(1)) + &(&GradedElement::beta(1) * &b(0)).scale(&rat(3, 2));
    let show = |label: &str, e: &GradedElement| println!("{label:>22} = {}", e.display_with(&names));

    show("a", &a);
    show("delta(a)", &delta(&a));
    show("kappa(a)", &kappa(&a));
    show("sigma(a)", &sigma(&a));
    let lhs = delta(&kappa(&a)).plus(&kappa(&delta(&a)));
    show("delta kappa + kappa delta", &lhs);
    assert_eq!(lhs, a.minus(&sigma(&a)));
    println!("homotopy formula holds");
}
