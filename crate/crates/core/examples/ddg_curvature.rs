//! The bigraded split of `d_L` and the curvature `R_m` of the module
//! `m = Gamma(Lambda A^v) (x) Gamma(B)`, contracted against `A` and `B`.

use liepair::algebroid::fixtures;
use liepair::ddg::{curvature_rm, split_dl};

fn main() {
    let alg = fixtures::line_action();
    let names = alg.variables();
    let op = split_dl(&alg).unwrap();
    for g in alg.dims().generators() {
        println!(
            "{g}: d10 = {}, d01 = {}",
            op.d10.value(g).display_with(names),
            op.d01.value(g).display_with(names)
        );
    }
    print!("{}", op.check(names, alg.is_matched_pair()));
    let rm = curvature_rm(&alg).unwrap();
    let (a, b) = (alg.a_indices().start, alg.b_indices().start);
    let v = rm.contracted(a, b, 0);
    println!("i_a i_b R_m(e_1) = {}", v[0].display_with(names));
    print!("{}", rm.check_against_atiyah());
}
