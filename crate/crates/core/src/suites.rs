//! Randomized and exhaustive verification suites. Each suite returns a
//! [`ValidationReport`] with one named check per identity; the first
//! non-zero residual of a failing check is rendered symbolically.

use crate::algebroid::ChartAlgebroid;
use crate::atiyah::{
    atiyah_data, atiyah_dg, atiyah_lie_pair, atiyah_on, check_theorem2, d_hom, lie_pair_closure, nabla0, q_section,
    DConnection,
};
use crate::ddg::{curvature_rm, split_dl};
use crate::fedosov::{fedosov_trick_violation, fedosov_x, mu_lift, quasi_inverse, r_dual, LieDerivative, TruncationOrder};
use crate::graded::{Degree, Gen, GradedElement};
use crate::homotopy::{delta, delta_derivation, iota_star, kappa, pi_star, sigma};
use crate::poly::rat;
use crate::sample::{Sampler, Shape};
use crate::sections::{Carrier, DSection, HomSection};
use crate::validation::{Check, Residuals, ValidationReport};

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub order: TruncationOrder,
    /// Random samples per carrier kind in the homotopy suite.
    pub homotopy_samples: usize,
    /// Random `A`-forms per fixture in the quasi-isomorphism suite.
    pub lift_samples: usize,
    /// Random connection terms `T` in the Atiyah suite.
    pub connection_samples: usize,
    pub seed: u64,
}

impl SuiteConfig {
    pub fn new(order: TruncationOrder) -> Self {
        SuiteConfig {
            order,
            homotopy_samples: 100,
            lift_samples: 50,
            connection_samples: 20,
            seed: 0x5eed,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Homotopy,
    Fedosov,
    Atiyah,
    Ddg,
}

/// Printable form of a carrier for residual reports.
pub trait Render {
    fn render(&self, names: &[String]) -> String;
}

impl Render for GradedElement {
    fn render(&self, names: &[String]) -> String {
        self.display_with(names)
    }
}

impl Render for DSection {
    fn render(&self, names: &[String]) -> String {
        self.display_with(names)
    }
}

impl Render for HomSection {
    fn render(&self, names: &[String]) -> String {
        self.display_with(names)
    }
}

fn record<C: Carrier + Render>(acc: &mut Residuals, residual: &C, names: &[String], location: impl FnOnce() -> String) {
    acc.record(residual.is_zero(), location, || residual.render(names));
}

/// Run the named suite (for `All`: structure validation first, then every
/// suite below).
pub fn run_suite(alg: &ChartAlgebroid, suite: Suite, cfg: &SuiteConfig) -> ValidationReport {
    let mut report = ValidationReport::new();
    if suite == Suite::All {
        report.extend(alg.validate_structure());
        if !report.passed() {
            return report;
        }
    }
    if matches!(suite, Suite::All | Suite::Homotopy) {
        report.extend(homotopy_suite(alg, cfg));
    }
    if matches!(suite, Suite::All | Suite::Fedosov) {
        report.extend(connection_suite(alg));
        report.extend(fedosov_suite(alg, cfg.order));
        if alg.is_matched_pair() {
            report.extend(quasi_iso_suite(alg, cfg));
        }
    }
    if matches!(suite, Suite::All | Suite::Atiyah) {
        report.extend(atiyah_suite(alg, cfg));
    }
    if matches!(suite, Suite::All | Suite::Ddg) {
        report.extend(ddg_suite(alg, cfg));
    }
    report
}

/// Contracting homotopy identities on random functions, sections of `D` and
/// sections of `Hom(D (x) D, D)`.
pub fn homotopy_suite(alg: &ChartAlgebroid, cfg: &SuiteConfig) -> ValidationReport {
    let names = alg.variables();
    let mut sampler = Sampler::new(alg.dims(), cfg.seed);
    let shape = Shape::default();
    let mut formula = Residuals::new("homotopy_formula");
    let mut kk = Residuals::new("kappa_squared");
    let mut dd = Residuals::new("delta_squared");
    let mut ip = Residuals::new("iota_pi_identity");
    let mut shifts = Residuals::new("kappa_delta_shift_degrees");

    fn identities<C: Carrier + Render>(
        a: &C,
        f: &C,
        names: &[String],
        loc: &str,
        acc: [&mut Residuals; 4],
    ) {
        let [formula, kk, dd, ip] = acc;
        let lhs = delta(&kappa(a)).plus(&kappa(&delta(a)));
        record(formula, &lhs.minus(&a.minus(&sigma(a))), names, || loc.to_string());
        record(kk, &kappa(&kappa(a)), names, || loc.to_string());
        record(dd, &delta(&delta(a)), names, || loc.to_string());
        let back = iota_star(&pi_star(f).expect("sampled A-form"));
        record(ip, &back.minus(f), names, || loc.to_string());
    }

    for i in 0..cfg.homotopy_samples {
        let a = sampler.element(shape);
        let f = sampler.a_form(shape);
        let loc = format!("element sample {i}");
        identities(&a, &f, names, &loc, [&mut formula, &mut kk, &mut dd, &mut ip]);
        for (m, c) in a.terms() {
            let term = GradedElement::term(m.clone(), c.clone());
            let ok_k = kappa(&term).terms().all(|(m2, _)| m2.r() == m.r() + 1 && m2.q() + 1 == m.q());
            let ok_d = delta(&term).terms().all(|(m2, _)| m2.r() + 1 == m.r() && m2.q() == m.q() + 1);
            shifts.record(ok_k && ok_d, || loc.clone(), || term.display_with(names));
        }

        let y = sampler.dsection(shape);
        let fy = sampler.a_form_dsection(shape);
        let loc = format!("dsection sample {i}");
        identities(&y, &fy, names, &loc, [&mut formula, &mut kk, &mut dd, &mut ip]);

        let phi = sampler.hom_section(Shape { terms: 1, ..shape });
        let fphi = sampler.a_form_hom(Shape { terms: 1, ..shape });
        let loc = format!("hom sample {i}");
        identities(&phi, &fphi, names, &loc, [&mut formula, &mut kk, &mut dd, &mut ip]);
    }
    let mut report = ValidationReport::new();
    for c in [formula, kk, dd, ip, shifts] {
        report.push(c.finish());
    }
    report
}

/// `nabla^2 = R^v`, `[nabla, delta] = 0`, both Bianchi identities and the
/// symmetries of the curvature.
pub fn connection_suite(alg: &ChartAlgebroid) -> ValidationReport {
    let names = alg.variables();
    let dims = alg.dims();
    let nabla = alg.nabla_derivation();
    let rv = r_dual(alg);
    let dl = delta_derivation(dims);
    let sq = nabla.square();
    let nd = nabla.commutator(&dl);
    let b1 = nabla.commutator(&rv);
    let b2 = dl.commutator(&rv);
    let mut c_sq = Residuals::new("nabla_squared_equals_r_dual");
    let mut c_nd = Residuals::new("nabla_delta_commute");
    let mut c_b1 = Residuals::new("bianchi_first");
    let mut c_b2 = Residuals::new("bianchi_second");
    for g in dims.generators() {
        record(&mut c_sq, &(sq.value(g) - rv.value(g)), names, || g.to_string());
        record(&mut c_nd, nd.value(g), names, || g.to_string());
        record(&mut c_b1, b1.value(g), names, || g.to_string());
        record(&mut c_b2, b2.value(g), names, || g.to_string());
    }
    let curv = alg.curvature();
    let mut anti = Residuals::new("curvature_antisymmetric");
    let mut sym = Residuals::new("curvature_symmetric_in_b_arguments");
    for i in alg.l_indices() {
        for j in alg.l_indices() {
            for k in alg.b_indices() {
                for l in alg.b_indices() {
                    let r = curv.get(i, j, k, l) + curv.get(j, i, k, l);
                    anti.record(r.is_zero(), || format!("{},{},{},{}", i + 1, j + 1, k + 1, l + 1), || r.display_with(names));
                    if i >= dims.s && j < dims.s && alg.is_matched_pair() {
                        let r = curv.get(i, j, k, l) - curv.get(i, k, j, l);
                        sym.record(r.is_zero(), || format!("{},{},{},{}", i + 1, j + 1, k + 1, l + 1), || r.display_with(names));
                    }
                }
            }
        }
    }
    let mut report = ValidationReport::new();
    for c in [c_sq, c_nd, c_b1, c_b2, anti] {
        report.push(c.finish());
    }
    if alg.is_matched_pair() {
        report.push(sym.finish());
    }
    report
}

/// Invariants of `X` and `D` at truncation order `N`, identities checked
/// through b-degree `N - 1`.
pub fn fedosov_suite(alg: &ChartAlgebroid, order: TruncationOrder) -> ValidationReport {
    let names = alg.variables();
    let n = order.get();
    let w = order.window();
    let mut report = ValidationReport::new();
    let tag = |s: &str| format!("{s} (N={n})");
    let fd = match fedosov_x(alg, order) {
        Ok(fd) => fd,
        Err(e) => {
            report.push(Check::fail(tag("fedosov_construction"), "construction", e.to_string()));
            return report;
        }
    };
    let dims = alg.dims();
    let rv = DSection::from_derivation(fd.r_dual()).expect("vertical");

    let mut x2 = Residuals::new(tag("x2_equals_kappa_r_dual"));
    record(&mut x2, &fd.x_part(2).expect("N >= 2").minus(&kappa(&rv)), names, || "X_2".into());
    let mut kx = Residuals::new(tag("kappa_x_vanishes"));
    record(&mut kx, &kappa(fd.x()), names, || "X".into());
    let mut ix = Residuals::new(tag("iota_x_vanishes"));
    record(&mut ix, &iota_star(fd.x()), names, || "X".into());
    let mut degs = Residuals::new(tag("x_degrees"));
    for (k, xk) in fd.x_parts() {
        let off = xk.project(|p, q, r| r != k || p + q != 1);
        record(&mut degs, &off, names, || format!("X_{k}"));
    }
    let mut fixed = Residuals::new(tag("fixed_point_equation"));
    {
        let x = fd.x();
        let nabla_x = x.lie(fd.nabla());
        let xx = DSection::new(
            (0..dims.s)
                .map(|l| (&x.act(x.component(l)) + &x.act(x.component(l))).scale(&rat(1, 2)))
                .collect(),
        );
        let rhs = kappa(&rv.plus(&nabla_x).plus(&xx).truncate(n));
        record(&mut fixed, &x.minus(&rhs).truncate(n), names, || "X".into());
    }
    let mut dsq = Residuals::new(tag("d_squared_window"));
    for (g, v) in fd.d_squared(w) {
        record(&mut dsq, &v, names, || g.to_string());
    }
    let mut inter = Residuals::new(tag("iota_intertwines_d_a"));
    let da = alg.d_a();
    for g in dims.generators() {
        let lhs = iota_star(fd.d().value(g));
        let rhs = da.apply(&iota_star(&GradedElement::gen(g)));
        record(&mut inter, &(&lhs - &rhs), names, || g.to_string());
    }
    let mut trick = Residuals::new(tag("fedosov_trick"));
    let mut sampler = Sampler::new(dims, 7);
    for i in 0..10 {
        let s = sampler.dsection(Shape::default());
        if let Some(v) = fedosov_trick_violation(&fd, &s, w) {
            record(&mut trick, &v, names, || format!("sample {i}"));
        }
    }
    for c in [x2, kx, ix, degs, fixed, dsq, inter, trick] {
        report.push(c.finish());
    }

    if alg.is_matched_pair() {
        match fd.split_relations(w) {
            Ok(rel) => {
                let mut sum = Residuals::new(tag("split_sums_to_d"));
                let (a, b) = fd.split().expect("matched pair");
                for g in dims.generators() {
                    record(&mut sum, &(&(a.value(g) + b.value(g)) - fd.d().value(g)), names, || g.to_string());
                }
                report.push(sum.finish());
                for (label, vals) in [
                    ("d_a_squared", &rel.da_squared),
                    ("d_a_d_b_anticommute", &rel.anticommutator),
                    ("d_b_squared", &rel.db_squared),
                ] {
                    let mut c = Residuals::new(tag(label));
                    for (g, v) in vals {
                        record(&mut c, v, names, || g.to_string());
                    }
                    report.push(c.finish());
                }
            }
            Err(e) => report.push(Check::fail(tag("split_d"), "D", e.to_string())),
        }
    }
    report
}

/// `sigma . mu = id`, `D_B . mu = 0`, `D_A . mu = mu . d_A` and
/// `iota* . (eta . mu . pi*) = id` on random `A`-forms.
pub fn quasi_iso_suite(alg: &ChartAlgebroid, cfg: &SuiteConfig) -> ValidationReport {
    let names = alg.variables();
    let n = cfg.order.get();
    let w = cfg.order.window();
    let tag = |s: &str| format!("{s} (N={n})");
    let mut report = ValidationReport::new();
    let fd = match fedosov_x(alg, cfg.order) {
        Ok(fd) => fd,
        Err(e) => {
            report.push(Check::fail(tag("fedosov_construction"), "construction", e.to_string()));
            return report;
        }
    };
    let (da, db) = fd.split().expect("matched pair");
    let mut sampler = Sampler::new(alg.dims(), cfg.seed ^ 0x11);
    let shape = Shape {
        terms: 2,
        ..Shape::default()
    };
    let mut c_sigma = Residuals::new(tag("sigma_mu_identity"));
    let mut c_db = Residuals::new(tag("d_b_mu_vanishes"));
    let mut c_da = Residuals::new(tag("d_a_mu_intertwines"));
    let mut c_qi = Residuals::new(tag("iota_quasi_inverse_identity"));

    for i in 0..cfg.lift_samples {
        let a = sampler.a_form_hom(Shape { terms: 1, ..shape });
        let loc = || format!("hom sample {i}");
        let mu = mu_lift(&fd, &a).expect("A-form input");
        record(&mut c_sigma, &sigma(&mu).minus(&a), names, loc);
        record(&mut c_db, &mu.lie_upto(db, w), names, loc);
        let da_a = alg.d_a_on_hom(&a).expect("matched pair");
        let rhs = mu_lift(&fd, &da_a).expect("A-form input");
        record(&mut c_da, &mu.lie_upto(da, w).minus(&rhs.truncate(w)), names, loc);
        if i < 10 {
            let qi = quasi_inverse(&fd, &a).expect("A-form input");
            record(&mut c_qi, &iota_star(&qi).minus(&a), names, loc);
        }
    }
    for i in 0..(cfg.lift_samples / 5).max(1) {
        let f = sampler.a_form(shape);
        let loc = || format!("function sample {i}");
        let mu = mu_lift(&fd, &f).expect("A-form input");
        record(&mut c_sigma, &sigma(&mu).minus(&f), names, loc);
        record(&mut c_db, &mu.lie_upto(db, w), names, loc);
        let rhs = mu_lift(&fd, &alg.d_a_on_functions(&f).expect("A-form")).expect("A-form input");
        record(&mut c_da, &mu.lie_upto(da, w).minus(&rhs.truncate(w)), names, loc);

        let v = sampler.a_form_dsection(shape);
        let loc = || format!("vector sample {i}");
        let mu = mu_lift(&fd, &v).expect("A-form input");
        record(&mut c_sigma, &sigma(&mu).minus(&v), names, loc);
        record(&mut c_db, &mu.lie_upto(db, w), names, loc);
        let rhs = mu_lift(&fd, &alg.d_a_on_vectors(&v).expect("matched pair")).expect("A-form input");
        record(&mut c_da, &mu.lie_upto(da, w).minus(&rhs.truncate(w)), names, loc);
    }
    for c in [c_sigma, c_db, c_da, c_qi] {
        report.push(c.finish());
    }
    report
}

/// Both Atiyah cocycles, their cocycle identities, the transgression
/// formula and the comparison `iota*(At^D) = At^(L,A) + d_A(iota* T)`.
pub fn atiyah_suite(alg: &ChartAlgebroid, cfg: &SuiteConfig) -> ValidationReport {
    let names = alg.variables();
    let dims = alg.dims();
    let n = cfg.order.get();
    let w = cfg.order.window();
    let tag = |s: &str| format!("{s} (N={n})");
    let mut report = ValidationReport::new();

    let at = atiyah_lie_pair(alg);
    let mut sym = Residuals::new("lie_pair_cocycle_symmetric");
    sym.record(at.is_symmetric(), || "At".into(), || "not symmetric".into());
    report.push(sym.finish());
    if alg.is_matched_pair() {
        let mut closed = Residuals::new("lie_pair_cocycle_closed");
        match lie_pair_closure(alg) {
            Ok(r) => record(&mut closed, &r, names, || "d_A(At)".into()),
            Err(e) => closed.record(false, || "d_A(At)".into(), || e.to_string()),
        }
        report.push(closed.finish());
    }

    let fd = match atiyah_data(alg, cfg.order) {
        Ok(fd) => fd,
        Err(e) => {
            report.push(Check::fail(tag("fedosov_construction"), "construction", e.to_string()));
            return report;
        }
    };
    let flat = DConnection::flat();
    let at0 = atiyah_dg(&fd, &flat).expect("flat connection");
    let mut deg = Residuals::new(tag("dg_cocycle_degree_one"));
    deg.record(matches!(at0.degree(), Degree::Pure(1) | Degree::Any), || "At".into(), || format!("{:?}", at0.degree()));
    report.push(deg.finish());
    let mut closed = Residuals::new(tag("dg_cocycle_closed"));
    record(&mut closed, &at0.lie_upto(fd.d(), w), names, || "Q(At)".into());

    let mut th_flat = check_theorem2(&fd, &flat).expect("flat connection");
    th_flat.checks[0].name = tag("pullback_comparison_flat");
    report.extend(th_flat);

    let mut sampler = Sampler::new(dims, cfg.seed ^ 0x22);
    let t_shape = Shape {
        max_b_degree: 2,
        max_coeff_degree: 2,
        terms: 2,
    };
    let mut trans = Residuals::new(tag("transgression"));
    let mut th_t = Residuals::new(tag("pullback_comparison_random_t"));
    for i in 0..cfg.connection_samples {
        let t = sampler.even_hom(t_shape);
        let conn = DConnection::with_t(t.clone()).expect("degree 0");
        let at_t = atiyah_dg(&fd, &conn).expect("degree 0 connection");
        let res = at_t.minus(&at0).minus(&t.lie_upto(fd.d(), w)).truncate(w);
        record(&mut trans, &res, names, || format!("T sample {i}"));
        if i < 3 {
            record(&mut closed, &at_t.lie_upto(fd.d(), w), names, || format!("Q(At) for T sample {i}"));
        }
        if alg.is_matched_pair() || iota_star(&t).is_zero() {
            let r = check_theorem2(&fd, &conn).expect("degree 0 connection");
            let c = &r.checks[0];
            th_t.record(c.passed, || format!("T sample {i} {}", c.location.clone().unwrap_or_default()), || c.residual.clone().unwrap_or_default());
        }
    }
    report.push(closed.finish());
    report.push(trans.finish());
    if alg.is_matched_pair() {
        report.push(th_t.finish());
    }

    let mut qsq = Residuals::new(tag("q_section_squared"));
    let mut leib = Residuals::new(tag("q_section_leibniz"));
    let mut dsq = Residuals::new(tag("d_hom_squared"));
    let mut bil = Residuals::new(tag("dg_cocycle_bilinear"));
    let mut n0 = Residuals::new("nabla0_pullback_vanishes");
    let small = Shape {
        max_b_degree: 1,
        max_coeff_degree: 1,
        terms: 1,
    };
    for i in 0..5 {
        let y = sampler.dsection(small);
        let qy = q_section(&fd, &y).expect("vertical");
        let qqy = q_section(&fd, &qy).expect("vertical");
        record(&mut qsq, &qqy.truncate(w), names, || format!("sample {i}"));

        let deg = (i % 2) as u32;
        let f = sampler.homogeneous(deg, small);
        let lhs = q_section(&fd, &y.scale_by(&f)).expect("vertical");
        let df = fd.d().apply(&f);
        let mut rhs = y.scale_by(&df);
        let fq = qy.scale_by(&f);
        rhs = if deg % 2 == 1 { rhs.minus(&fq) } else { rhs.plus(&fq) };
        record(&mut leib, &lhs.minus(&rhs).truncate(w), names, || format!("sample {i}"));

        let phi = sampler.hom_section(small);
        record(&mut dsq, &d_hom(&fd, &phi).lie_upto(fd.d(), w), names, || format!("sample {i}"));

        let x = sampler.dsection(small);
        let x = x.project(|p, q, _| (p + q) % 2 == 0);
        let y0 = sampler.even_dsection(small);
        let direct = atiyah_on(&fd, &flat, &x, &y0).expect("flat connection");
        record(&mut bil, &direct.minus(&at0.eval(&x, &y0)).truncate(w), names, || format!("sample {i}"));

        let xb = sampler.dsection(Shape { max_b_degree: 0, ..small });
        let yb = sampler.dsection(Shape { max_b_degree: 0, ..small });
        record(&mut n0, &iota_star(&nabla0(&xb, &yb)), names, || format!("sample {i}"));
    }
    for c in [qsq, leib, dsq, bil, n0] {
        report.push(c.finish());
    }
    report
}

/// The bigraded split of `d_L` and the curvature of the module `m`.
pub fn ddg_suite(alg: &ChartAlgebroid, cfg: &SuiteConfig) -> ValidationReport {
    let names = alg.variables();
    let mut report = ValidationReport::new();
    let op = match split_dl(alg) {
        Ok(op) => op,
        Err(e) => {
            report.push(Check::fail("split_d_l", "d_L", e.to_string()));
            return report;
        }
    };
    let mut total = Residuals::new("split_sums_to_d_l");
    let dl = alg.d_l();
    let sum = op.total();
    for g in alg.dims().generators() {
        if matches!(g, Gen::B(_)) {
            continue;
        }
        record(&mut total, &(sum.value(g) - dl.value(g)), names, || g.to_string());
    }
    report.push(total.finish());
    report.extend(op.check(names, alg.is_matched_pair()));
    if !alg.is_matched_pair() {
        return report;
    }
    let rm = curvature_rm(alg).expect("matched pair");
    report.extend(rm.check_against_atiyah());
    let mut sampler = Sampler::new(alg.dims(), cfg.seed ^ 0x33);
    let shape = Shape {
        max_b_degree: 0,
        max_coeff_degree: 2,
        terms: 2,
    };
    let mut cocycle = Residuals::new("rm_cocycle");
    let mut linear = Residuals::new("rm_module_linear");
    for k in alg.b_indices() {
        let e = DSection::basis(alg.dims().s, k);
        record(&mut cocycle, &rm.cocycle_defect(&e), names, || format!("e_{}", k + 1));
    }
    for i in 0..10 {
        let m = sampler.dsection(shape);
        record(&mut cocycle, &rm.cocycle_defect(&m), names, || format!("sample {i}"));
        let f = sampler.element(shape);
        record(&mut linear, &rm.linearity_defect(&f, &m), names, || format!("sample {i}"));
    }
    report.push(cocycle.finish());
    report.push(linear.finish());
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::fixtures;

    #[test]
    fn all_suites_pass_on_valid_fixtures() {
        let cfg = SuiteConfig {
            homotopy_samples: 10,
            lift_samples: 5,
            connection_samples: 3,
            ..SuiteConfig::new(TruncationOrder::new(4).unwrap())
        };
        for (name, alg) in fixtures::all_valid() {
            let t = std::time::Instant::now();
            let report = run_suite(&alg, Suite::All, &cfg);
            assert!(report.passed(), "{name}:\n{report}");
            eprintln!("{name}: {} checks in {:?}", report.checks.len(), t.elapsed());
        }
    }

    #[test]
    fn broken_fixture_stops_after_validation() {
        let cfg = SuiteConfig::new(TruncationOrder::new(3).unwrap());
        let report = run_suite(&fixtures::broken_jacobi(), Suite::All, &cfg);
        assert!(!report.passed());
        assert!(report.get("jacobi").is_some_and(|c| !c.passed));
    }
}
