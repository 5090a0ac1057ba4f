//! Check the algebroid axioms on the built-in fixtures and on a broken one.

use liepair::algebroid::fixtures;

fn main() {
    for (name, alg) in fixtures::all_valid() {
        let report = alg.validate_structure();
        println!("{name}: {}", if report.passed() { "valid" } else { "INVALID" });
    }
    println!("\nbroken_jacobi:");
    print!("{}", fixtures::broken_jacobi().validate_structure());
}
