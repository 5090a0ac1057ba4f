//! Build the Fedosov vector field `D = nabla - delta + X` of a Lie pair and
//! check `D^2 = 0` within the truncation window.

use liepair::algebroid::fixtures;
use liepair::fedosov::{fedosov_x, TruncationOrder};

fn main() {
    let alg = fixtures::line_action();
    let names = alg.variables();
    let order = TruncationOrder::new(4).unwrap();
    let fd = fedosov_x(&alg, order).unwrap();
    for (k, xk) in fd.x_parts() {
        println!("X_{k} = {}", xk.display_with(names));
    }
    println!();
    for g in alg.dims().generators() {
        println!("D({g}) = {}", fd.d().value(g).display_with(names));
    }
    let window = order.window();
    let clean = fd.d_squared(window).iter().all(|(_, v)| v.is_zero());
    println!("\nD^2 = 0 through b-degree {window}: {clean}");
}
