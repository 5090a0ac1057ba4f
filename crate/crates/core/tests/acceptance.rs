//! Acceptance criteria 1-8. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use liepair::atiyah::{atiyah_data, atiyah_dg, check_theorem2, DConnection};
use liepair::fedosov::TruncationOrder;
use liepair::file::{gamma_binding, load_algebroid};
use liepair::homotopy::iota_star;
use liepair::parse::{parse_poly, print_poly};
use liepair::poly::{int, rat};
use liepair::sample::{Sampler, Shape};
use liepair::suites::{
    atiyah_suite, connection_suite, ddg_suite, fedosov_suite, homotopy_suite, quasi_iso_suite, SuiteConfig,
};
use liepair::{ChartAlgebroid, GradedElement, Poly, ValidationReport};

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

const BROKEN: &str = "broken_jacobi.json";

/// Every shipped fixture except the deliberately broken one, loaded from disk.
fn shipped() -> Vec<(String, ChartAlgebroid)> {
    let mut names: Vec<String> = std::fs::read_dir(fixtures_dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".json") && n != BROKEN)
        .collect();
    names.sort();
    names
        .into_iter()
        .map(|n| {
            let alg = load_algebroid(&fixtures_dir().join(&n), &BTreeMap::new()).unwrap();
            (n.trim_end_matches(".json").to_string(), alg)
        })
        .collect()
}

fn order(n: u32) -> TruncationOrder {
    TruncationOrder::new(n).unwrap()
}

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            passed: true,
            detail: String::new(),
        }
    }

    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            if self.passed {
                self.detail = what();
            }
            self.passed = false;
        }
    }

    fn report(&mut self, fixture: &str, r: &ValidationReport) {
        self.require(r.passed(), || {
            let f = r.failures().next().unwrap();
            format!(
                "{fixture}: {} at {}: {}",
                f.name,
                f.location.as_deref().unwrap_or("?"),
                f.residual.as_deref().unwrap_or("?")
            )
        });
    }
}

fn run(id: u32, title: &str, f: impl FnOnce(&mut Outcome)) -> bool {
    let start = Instant::now();
    let mut out = Outcome::new();
    f(&mut out);
    let elapsed = start.elapsed();
    let status = if out.passed { "PASS" } else { "FAIL" };
    let detail = if out.detail.is_empty() {
        String::new()
    } else {
        format!("  [{}]", out.detail)
    };
    println!("{status}  criterion {id}: {title} ({:.2} s){detail}", elapsed.as_secs_f64());
    out.passed
}

fn criterion1(out: &mut Outcome) {
    let start = Instant::now();
    for (name, alg) in shipped() {
        let cfg = SuiteConfig::new(order(4));
        out.report(&name, &homotopy_suite(&alg, &cfg));
    }
    let t = start.elapsed();
    out.require(t < Duration::from_secs(10), || format!("runtime {t:?} exceeds 10 s"));
}

fn criterion2(out: &mut Outcome) {
    for (name, alg) in shipped() {
        out.report(&name, &connection_suite(&alg));
    }
}

fn criterion3(out: &mut Outcome) {
    for (name, alg) in shipped() {
        for n in [4, 5] {
            let start = Instant::now();
            out.report(&name, &fedosov_suite(&alg, order(n)));
            let t = start.elapsed();
            if n == 5 {
                out.require(t < Duration::from_secs(60), || format!("{name}: {t:?} at N=5 exceeds 60 s"));
            }
        }
    }
}

fn criterion4(out: &mut Outcome) {
    for (name, alg) in shipped() {
        if alg.is_matched_pair() {
            out.report(&name, &quasi_iso_suite(&alg, &SuiteConfig::new(order(4))));
        }
    }
}

fn criterion5(out: &mut Outcome) {
    for (name, alg) in shipped() {
        out.report(&name, &atiyah_suite(&alg, &SuiteConfig::new(order(4))));
    }
}

fn criterion6(out: &mut Outcome) {
    let dir = fixtures_dir();
    for name in ["point_aff1", "line_action", "tangent_only"] {
        let alg = load_algebroid(&dir.join(format!("{name}.json")), &BTreeMap::new()).unwrap();
        let fd = atiyah_data(&alg, order(4)).unwrap();
        out.report(name, &check_theorem2(&fd, &DConnection::flat()).unwrap());
        let mut sampler = Sampler::new(alg.dims(), 2024);
        let shape = Shape {
            max_b_degree: 2,
            max_coeff_degree: 2,
            terms: 2,
        };
        for _ in 0..20 {
            let conn = DConnection::with_t(sampler.even_hom(shape)).unwrap();
            out.report(name, &check_theorem2(&fd, &conn).unwrap());
        }
    }
    let pullback = |alg: &ChartAlgebroid| {
        let fd = atiyah_data(alg, order(4)).unwrap();
        iota_star(&atiyah_dg(&fd, &DConnection::flat()).unwrap()).get(0, 0, 0).clone()
    };
    for (p, q) in [(1, 1), (-3, 2)] {
        let g = rat(p, q);
        let alg = load_algebroid(&dir.join("point_aff1.json"), &gamma_binding(Some(g.clone()))).unwrap();
        let got = pullback(&alg);
        let want = GradedElement::alpha(0).scale(&-g);
        out.require(got == want, || format!("point_aff1: got {}", got.display_with(alg.variables())));
    }
    let alg = load_algebroid(&dir.join("line_action.json"), &BTreeMap::new()).unwrap();
    let got = pullback(&alg);
    let want = GradedElement::alpha(0).mul_poly(&Poly::var(0).scale(&int(2)));
    out.require(got == want, || format!("line_action: got {}", got.display_with(alg.variables())));
}

fn criterion7(out: &mut Outcome) {
    for (name, alg) in shipped() {
        out.report(&name, &ddg_suite(&alg, &SuiteConfig::new(order(4))));
    }
}

fn liepair(args: &[&str]) -> Option<i32> {
    Command::new(env!("CARGO_BIN_EXE_liepair")).args(args).output().unwrap().status.code()
}

fn criterion8(out: &mut Outcome) {
    let vars: Vec<String> = vec!["x1".into(), "x2".into(), "x3".into()];
    let mut sampler = Sampler::new(liepair::Dims::new(3, 1, 0), 8);
    for i in 0..1000 {
        let p = sampler.poly(1 + i % 5);
        let printed = print_poly(&p, &vars);
        let back = parse_poly(&printed, &vars);
        out.require(back.as_ref() == Ok(&p), || format!("round trip of {printed}"));
    }
    let dir = fixtures_dir();
    let path = |n: &str| dir.join(n).display().to_string();
    for (name, _) in shipped() {
        let code = liepair(&["verify", "--input", &path(&format!("{name}.json")), "--suite", "all"]);
        out.require(code == Some(0), || format!("verify {name}: exit {code:?}"));
    }
    let code = liepair(&["verify", "--input", &path(BROKEN), "--suite", "all"]);
    out.require(code == Some(1), || format!("verify {BROKEN}: exit {code:?}"));
    out.require(Path::new(&path(BROKEN)).exists(), || "broken fixture missing".into());
}

fn main() {
    let results = [
        run(1, "homotopy suite", criterion1),
        run(2, "connection suite", criterion2),
        run(3, "Fedosov suite at N = 4, 5", criterion3),
        run(4, "quasi-isomorphism suite", criterion4),
        run(5, "Atiyah suite", criterion5),
        run(6, "Atiyah class comparison and fixture values", criterion6),
        run(7, "dDG suite", criterion7),
        run(8, "parser round trip and CLI verify", criterion8),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("\nacceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
