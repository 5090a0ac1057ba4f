//! The Atiyah cocycle of the Lie pair, the Atiyah cocycle of the Fedosov dg
//! manifold, and the comparison of the two after pulling back along `iota`.

use liepair::algebroid::fixtures;
use liepair::atiyah::{atiyah_data, atiyah_dg, atiyah_lie_pair, check_theorem2, DConnection};
use liepair::fedosov::TruncationOrder;
use liepair::homotopy::iota_star;
use liepair::poly::rat;
use liepair::Carrier;

fn main() {
    let order = TruncationOrder::new(4).unwrap();
    for (name, alg) in [("point_aff1", fixtures::point_aff1(rat(3, 2))), ("line_action", fixtures::line_action())] {
        let names = alg.variables();
        println!("== {name}");
        for (a, j, k, l, v) in atiyah_lie_pair(&alg).nonzero() {
            println!("At_lie_pair[a{};{},{}->{}] = {}", a + 1, j + 1, k + 1, l + 1, v.display_with(names));
        }
        let fd = atiyah_data(&alg, order).unwrap();
        let at = atiyah_dg(&fd, &DConnection::flat()).unwrap();
        println!("At_dg = {}", at.truncate(order.window()).display_with(names));
        println!("iota*(At_dg) = {}", iota_star(&at).display_with(names));
        print!("{}", check_theorem2(&fd, &DConnection::flat()).unwrap());
    }
}
