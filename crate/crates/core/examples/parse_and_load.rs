//! Parse polynomial expressions and load a definition file with a bound
//! parameter.

use std::path::PathBuf;

use liepair::file::{gamma_binding, load_algebroid, AlgebroidFile};
use liepair::parse::{parse_poly, print_poly};
use liepair::poly::rat;

fn main() {
    let vars = vec!["x1".to_string(), "x2".to_string()];
    for src in ["2*x1^2 - 1/3", "x1*(x1+1)", "(x1 - x2)^3 / 4", "x2^-1"] {
        match parse_poly(src, &vars) {
            Ok(p) => println!("{src:>18}  ->  {}", print_poly(&p, &vars)),
            Err(e) => println!("{src:>18}  ->  error: {e}"),
        }
    }

    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/point_aff1.json");
    let alg = load_algebroid(&path, &gamma_binding(Some(rat(-5, 2)))).unwrap();
    println!("\nR_(A,B,B)^B with gamma = -5/2: {}", alg.curvature().get(1, 0, 0, 0).display_with(alg.variables()));
    println!("\nre-serialized:\n{}", AlgebroidFile::from_algebroid(&alg).to_json());
}
