//! For a matched pair, `D` splits as `D_A + D_B` and both parts square to
//! zero and anticommute.

use liepair::algebroid::fixtures;
use liepair::fedosov::{fedosov_x, TruncationOrder};
use liepair::poly::rat;

fn main() {
    let alg = fixtures::point_aff1(rat(2, 1));
    let names = alg.variables();
    let order = TruncationOrder::new(5).unwrap();
    let fd = fedosov_x(&alg, order).unwrap();
    let (da, db) = fd.split().unwrap();
    for g in alg.dims().generators() {
        println!("D_A({g}) = {}", da.value(g).display_with(names));
        println!("D_B({g}) = {}", db.value(g).display_with(names));
    }
    let rel = fd.split_relations(order.window()).unwrap();
    println!("\nsplit relations hold: {}", rel.all_zero());
}
