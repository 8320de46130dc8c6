use std::path::Path;

use opmodel::acceptance::{self, CriterionOutcome};
use opmodel::analytic_model::{
    self, build_model, coefficients, kernel_eval, verify_intertwining, verify_reproducing, verify_semigroup_model,
    AnalyticModel, RADIUS_CONVENTION, SIGN_CONVENTION,
};
use opmodel::classify::{classify_operator, ClassificationReport};
use opmodel::hardy::{
    block_backward_shift, block_forward_shift, caradus_certificate, inner_check, inner_semigroup_symbol,
    model_space_basis, verify_ladder_decomposition, BlaschkeSpec, PowerSeries,
};
use opmodel::operators::FiniteSupportVector;
use opmodel::semigroup::{
    cogenerator, concavity_equivalence_suite, evolve, growth_bound, growth_bound_log_residual, inverse_cayley,
    EquivalenceConfig, SemigroupSpec,
};
use opmodel::{numkit, ComplexMatrix, Tolerances, C64};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::input::{Source, Symbol};
use crate::report::{Check, InputDigest, Report};
use crate::{ClassifyArgs, CliError, HardyArgs, ModelArgs, ModelCheck, NumericContext, Property, SemigroupArgs, VerifyAllArgs};

const INNER_WARNING: &str =
    "circle sampling is a necessary condition for inner-ness, not a certificate";
const CAYLEY_ROUND_TRIP_TOL: f64 = 1e-9;
const GROWTH_CONSISTENCY_TOL: f64 = 1e-8;
const GROWTH_TIMES: [f64; 3] = [0.5, 1.0, 2.0];
const KERNEL_ORACLE_TOL: f64 = 1e-10;
const LEADING: usize = 16;

fn leading(series: &PowerSeries) -> Vec<C64> {
    series.coeffs().iter().take(LEADING).copied().collect()
}

fn flag_check(name: &str, holds: bool, margin: f64, tolerance: f64) -> Check {
    Check::new(name, holds, margin, tolerance)
}

fn expectation(report: &ClassificationReport, p: Property, tol: &Tolerances) -> Check {
    match p {
        Property::BoundedBelow => {
            flag_check("bounded_below", report.bounded_below.holds, report.bounded_below.margin, tol.rank_tol)
                .with_detail("value is inf ||Tx||/||x||")
        }
        Property::Concave => flag_check("concave", report.concave.holds, report.concave.margin, tol.psd_tol)
            .with_detail("value is the largest eigenvalue of the concavity defect"),
        Property::TwoIsometry => {
            flag_check("two_isometry", report.two_isometry.holds, report.two_isometry.margin, tol.psd_tol)
                .with_detail("value is the norm of the concavity defect")
        }
        Property::TwoContraction => flag_check(
            "two_contraction",
            report.two_contraction.holds,
            report.two_contraction.margin,
            tol.psd_tol,
        )
        .with_detail("value is the smallest eigenvalue of the concavity defect"),
        Property::Pure => method_check("pure", report.pure.holds, &report.pure.method),
        Property::Wandering => method_check("wandering", report.wandering.holds, &report.wandering.method),
    }
}

fn method_check(name: &str, holds: bool, method: &str) -> Check {
    Check::new(name, holds, if holds { 0.0 } else { 1.0 }, 0.0).with_detail(format!("method: {method}"))
}

pub fn classify(args: &ClassifyArgs, tol: &Tolerances) -> Result<Report, CliError> {
    let src = Source::read("operator", &args.operator)?;
    let op = src.operator()?;
    let mut report = Report::new("classify", *tol);
    report.input(src.digest);
    let c = classify_operator(&op, tol).during("classify_operator")?;
    for &p in &args.expect {
        report.check(expectation(&c, p, tol));
    }
    report.result("classification", &c);
    Ok(report)
}

pub fn semigroup(args: &SemigroupArgs, tol: &Tolerances) -> Result<Report, CliError> {
    let src = Source::read("generator", &args.generator)?;
    let spec = SemigroupSpec::new(src.matrix()?);
    let mut report = Report::new("semigroup", *tol);
    report.input(src.digest);
    report.result("dimension", spec.dim());

    if !args.times.is_empty() {
        let mut evolved = Vec::new();
        for &t in &args.times {
            evolved.push(json!({ "t": t, "matrix": evolve(&spec, t).during("evolve")? }));
        }
        report.result("evolution", evolved);
    }
    if args.cogenerator {
        let v = cogenerator(&spec, tol).during("cogenerator")?;
        let back = inverse_cayley(&v, tol).during("inverse_cayley")?;
        let residual = (&back - &spec.generator).norm_two();
        report.check(Check::at_most("cayley_round_trip", residual, CAYLEY_ROUND_TRIP_TOL));
        report.result("cogenerator", &v);
        report.result("cogenerator_norm", v.norm_two());
    }
    if args.growth_bound {
        let bound = growth_bound(&spec).during("growth_bound")?;
        let mut worst: f64 = 0.0;
        for t in GROWTH_TIMES {
            worst = worst.max(growth_bound_log_residual(&spec, &bound, t).during("growth_bound")?);
        }
        report.check(
            Check::at_most("growth_bound_log_limit", worst, GROWTH_CONSISTENCY_TOL)
                .with_detail("|(1/t) log r(exp(tA)) - omega| at t = 0.5, 1, 2"),
        );
        report.result("growth_bound", &bound);
    }
    if args.equivalence_suite {
        let config = EquivalenceConfig::default();
        let eq = concavity_equivalence_suite(&spec, &config, tol).during("concavity_equivalence_suite")?;
        let disagree = if eq.agree { 0.0 } else { 1.0 };
        report.check(Check::at_most("concavity_conditions_agree", disagree, 0.0));
        report.result("equivalence", &eq);
        report.result("equivalence_config", &config);
    }
    Ok(report)
}

fn default_vector(m: &AnalyticModel) -> Result<FiniteSupportVector, CliError> {
    let ambient = m.source().ambient();
    FiniteSupportVector::from_entries(ambient, (0..8).map(|k| (k, C64::new(1.0 / (k as f64 + 1.0), 0.0))))
        .during("default vector")
}

#[derive(Serialize)]
struct ModelSummary {
    defect_dim: usize,
    l_norm: f64,
    radius: f64,
    dual_spectral_radius: f64,
    invariants: analytic_model::ModelInvariants,
}

pub fn model(args: &ModelArgs, tol: &Tolerances) -> Result<Report, CliError> {
    let src = Source::read("operator", &args.operator)?;
    let op = src.operator()?;
    let mut report = Report::new("model", *tol);
    report.input(src.digest);
    let x = match &args.coeffs {
        Some(path) => {
            let s = Source::read("coeffs", path)?;
            let v = s.vector()?;
            report.input(s.digest);
            Some(v)
        }
        None => None,
    };
    let m = build_model(&op, tol).during("build_model")?;
    report.warn(RADIUS_CONVENTION);
    let invariants = m.invariants(16).during("model invariants")?;
    report.result(
        "model",
        ModelSummary {
            defect_dim: m.defect_dim(),
            l_norm: m.l_norm(),
            radius: m.radius(),
            dual_spectral_radius: m.dual_spectral_radius(),
            invariants,
        },
    );
    let x = match x {
        Some(v) => v,
        None => default_vector(&m)?,
    };

    if args.coeffs.is_some() {
        let c = coefficients(&m, &x, args.order).during("coefficients")?;
        report.order("coefficients", c.order);
        report.result("coefficients", &c);
    }
    if let Some((lambda, z)) = args.kernel {
        let k = kernel_eval(&m, lambda, z, tol).during("kernel_eval")?;
        report.check(Check::at_most("kernel_tail", k.tail_bound, tol.tail_tol));
        report.order("kernel", k.order);
        report.result("kernel", json!({ "lambda": lambda, "z": z, "value": k.matrix, "tail_bound": k.tail_bound }));
    }
    for &check in &args.verify {
        match check {
            ModelCheck::Intertwine => {
                let r = verify_intertwining(&m, &x, args.order).during("verify_intertwining")?;
                report.check(Check::new("intertwining", r.pass, r.residual, r.tolerance));
                report.order("intertwining", r.order);
                report.result("intertwining", &r);
            }
            ModelCheck::Reproduce => {
                let mut all = Vec::new();
                for e in m.defect_basis() {
                    let r = verify_reproducing(&m, &x, args.lambda, e, tol).during("verify_reproducing")?;
                    report.check(Check::new("reproducing", r.pass, r.residual, r.tolerance));
                    all.push(r);
                }
                report.result("reproducing", json!({ "lambda": args.lambda, "per_defect_vector": all }));
            }
            ModelCheck::Semigroup => {
                let r = verify_semigroup_model(&m, args.time, &x, args.order).during("verify_semigroup_model")?;
                report.check(Check::at_most("semigroup_identity", r.identity_residual, 1e-12));
                report.check(Check::at_most("semigroup_derivative", r.derivative_residual, r.derivative_tolerance));
                report.check(Check::at_most("semigroup_commutation", r.commutation_residual, 1e-12));
                report.order("semigroup", r.order);
                report.warn(SIGN_CONVENTION);
                report.result("semigroup", &r);
            }
        }
    }
    Ok(report)
}

fn hardy_symbol(args: &HardyArgs, report: &mut Report) -> Result<Option<Symbol>, CliError> {
    if let Some(zeros) = &args.blaschke {
        let spec = BlaschkeSpec::with_zeros(zeros.0.clone()).map_err(|e| CliError::Input(format!("--blaschke: {e}")))?;
        let text = serde_json::to_string(&zeros.0).expect("zeros serialize");
        report.input(InputDigest::new("blaschke", "--blaschke", text.as_bytes()));
        return Ok(Some(Symbol::blaschke(spec, args.order)));
    }
    if let Some(path) = &args.symbol_file {
        let s = Source::read("symbol", path)?;
        let sym = s.symbol(args.order)?;
        report.input(s.digest);
        return Ok(Some(sym));
    }
    Ok(None)
}

pub fn hardy(args: &HardyArgs, tol: &Tolerances) -> Result<Report, CliError> {
    let mut report = Report::new("hardy", *tol);
    let symbol = hardy_symbol(args, &mut report)?;
    let needs_symbol =
        args.semigroup_t.is_some() || args.inner_check || args.model_space.is_some() || args.ladder.is_some();
    if needs_symbol && symbol.is_none() {
        return Err(CliError::Input("this request needs --blaschke or --symbol-file".into()));
    }

    if let Some(sym) = &symbol {
        report.order("symbol", sym.series.order());
        report.result(
            "symbol",
            json!({
                "order": sym.series.order(),
                "blaschke_degree": sym.blaschke.as_ref().map(BlaschkeSpec::degree),
                "leading_coefficients": leading(&sym.series),
            }),
        );
        if args.inner_check {
            let r = inner_check(&sym.series, args.grid, tol).during("inner_check")?;
            report.check(circle_check("symbol_inner", &r));
            report.warn(INNER_WARNING);
            report.result("symbol_inner_check", &r);
        }
        if let Some(t) = args.semigroup_t {
            let phi_t = inner_semigroup_symbol(&sym.series, t).during("inner_semigroup_symbol")?;
            let r = inner_check(&phi_t, args.grid, tol).during("inner_check")?;
            report.check(circle_check("semigroup_symbol_inner", &r));
            report.warn(SIGN_CONVENTION);
            report.warn(INNER_WARNING);
            report.order("semigroup_symbol", phi_t.order());
            report.result(
                "semigroup_symbol",
                json!({ "t": t, "leading_coefficients": leading(&phi_t), "inner_check": r }),
            );
        }
        if let Some(n) = args.model_space {
            let basis = model_space_basis(&sym.series, n, tol).during("model_space_basis")?;
            let gram = numkit::gram(&basis);
            let mut gram_residual: f64 = 0.0;
            for (i, row) in gram.iter().enumerate() {
                for (j, g) in row.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    gram_residual = gram_residual.max((g - C64::new(want, 0.0)).norm());
                }
            }
            report.check(Check::at_most("model_space_orthonormal", gram_residual, 1e-12));
            if let Some(b) = &sym.blaschke {
                let dim = basis.len() as f64;
                report.check(
                    Check::new("model_space_dimension", basis.len() == b.degree(), dim, b.degree() as f64)
                        .with_detail("dimension must equal the Blaschke degree"),
                );
            }
            report.order("model_space", n);
            report.result("model_space", json!({ "dimension": basis.len(), "basis": basis }));
        }
        if let Some(m) = args.ladder {
            let r = verify_ladder_decomposition(&sym.series, m, args.ladder_n, tol)
                .during("verify_ladder_decomposition")?;
            report.check(Check::new("ladder_orthogonality", r.pass, r.off_block_max, r.tolerance).with_detail(format!(
                "total dimension {} of expected {}",
                r.total_dim, r.expected_total_dim
            )));
            report.order("ladder", r.dimension);
            report.result("ladder", &r);
        }
    }

    if let Some(d) = args.caradus {
        if d == 0 {
            return Err(CliError::Input("--caradus needs a positive multiplicity".into()));
        }
        let n = args.caradus_n.unwrap_or(8 * d);
        if n < 2 * d || !n.is_multiple_of(d) {
            return Err(CliError::Input(format!("--caradus-n must be a multiple of {d} and at least {}", 2 * d)));
        }
        let back = caradus_certificate(&block_backward_shift(d, n), Some(d), tol).during("caradus_certificate")?;
        let fwd = caradus_certificate(&block_forward_shift(d, n), None, tol).during("caradus_certificate")?;
        report.check(Check::new(
            "backward_shift_kernel",
            back.interior_kernel_dim == d,
            back.interior_kernel_dim as f64,
            d as f64,
        ));
        report.check(Check::new(
            "backward_shift_surjective",
            back.interior_surjective,
            if back.interior_surjective { 0.0 } else { 1.0 },
            0.0,
        ));
        report.check(Check::new(
            "forward_shift_not_surjective",
            !fwd.interior_surjective,
            if fwd.interior_surjective { 1.0 } else { 0.0 },
            0.0,
        ));
        report.warn(back.caveat);
        report.order("caradus", n);
        report.result("caradus", json!({ "multiplicity": d, "backward_shift": back, "forward_shift": fwd }));
    }
    Ok(report)
}

fn circle_check(name: &str, r: &opmodel::hardy::InnerReport) -> Check {
    let worst = r.circles.iter().map(|c| c.max_modulus).fold(0.0, f64::max);
    Check::new(name, r.pass, worst - 1.0, r.tolerance).with_detail(format!(
        "value is max |f| - 1 on the sampled circles; means increase: {}",
        r.means_increase
    ))
}

/// Fixture contents, from disk or the bundled copies.
struct Fixtures {
    dirichlet: Source,
    isometric: Source,
    blaschke05: Source,
    jordan3: Source,
    skew4: Source,
    zero: Source,
}

const BUNDLED: [(&str, &str); 6] = [
    ("dirichlet.json", include_str!("../fixtures/dirichlet.json")),
    ("isometric.json", include_str!("../fixtures/isometric.json")),
    ("blaschke05.json", include_str!("../fixtures/blaschke05.json")),
    ("jordan3.json", include_str!("../fixtures/jordan3.json")),
    ("skew4.json", include_str!("../fixtures/skew4.json")),
    ("zero.json", include_str!("../fixtures/zero.json")),
];

impl Fixtures {
    fn load(dir: Option<&Path>) -> Result<Self, CliError> {
        let mut sources = Vec::with_capacity(BUNDLED.len());
        for (name, text) in BUNDLED {
            let label = name.trim_end_matches(".json");
            sources.push(match dir {
                Some(d) => Source::read(label, &d.join(name))?,
                None => Source::inline(label, &format!("bundled:{name}"), text),
            });
        }
        let mut it = sources.into_iter();
        let mut next = || it.next().expect("one source per bundled fixture");
        Ok(Fixtures {
            dirichlet: next(),
            isometric: next(),
            blaschke05: next(),
            jordan3: next(),
            skew4: next(),
            zero: next(),
        })
    }

    fn digests(&self) -> Vec<InputDigest> {
        [&self.dirichlet, &self.isometric, &self.blaschke05, &self.jordan3, &self.skew4, &self.zero]
            .iter()
            .map(|s| s.digest.clone())
            .collect()
    }
}

type FixtureCheck = fn(&Fixtures, &Tolerances) -> Result<Vec<Check>, CliError>;

const FIXTURE_CHECKS: [(&str, FixtureCheck); 6] = [
    ("fixture dirichlet", fixture_dirichlet),
    ("fixture isometric", fixture_isometric),
    ("fixture blaschke05", fixture_blaschke),
    ("fixture jordan3", fixture_jordan),
    ("fixture skew4", fixture_skew),
    ("fixture zero", fixture_zero),
];

fn fixture_dirichlet(f: &Fixtures, tol: &Tolerances) -> Result<Vec<Check>, CliError> {
    let op = f.dirichlet.operator()?;
    let c = classify_operator(&op, tol).during("classify_operator")?;
    Ok(vec![
        expectation(&c, Property::TwoIsometry, tol),
        expectation(&c, Property::Concave, tol),
        expectation(&c, Property::BoundedBelow, tol),
        expectation(&c, Property::Pure, tol),
        expectation(&c, Property::Wandering, tol),
    ])
}

fn fixture_isometric(f: &Fixtures, tol: &Tolerances) -> Result<Vec<Check>, CliError> {
    let m = build_model(&f.isometric.operator()?, tol).during("build_model")?;
    let half = C64::new(0.5, 0.0);
    let k = kernel_eval(&m, half, half, tol).during("kernel_eval")?;
    let err = (k.matrix[(0, 0)] - C64::new(4.0 / 3.0, 0.0)).norm();
    Ok(vec![Check::at_most("szego_kernel_at_half", err, KERNEL_ORACLE_TOL).with_detail("k(0.5, 0.5) = 4/3")])
}

fn fixture_blaschke(f: &Fixtures, tol: &Tolerances) -> Result<Vec<Check>, CliError> {
    let sym = f.blaschke05.symbol(4096)?;
    let degree = sym.blaschke.as_ref().map_or(0, BlaschkeSpec::degree);
    let inner = inner_check(&sym.series, 256, tol).during("inner_check")?;
    let ladder = verify_ladder_decomposition(&sym.series, 4, 64, tol).during("verify_ladder_decomposition")?;
    Ok(vec![
        circle_check("blaschke_inner", &inner),
        Check::new("ladder_orthogonality", ladder.pass, ladder.off_block_max, ladder.tolerance),
        Check::new("model_space_dimension", ladder.model_space_dim == degree, ladder.model_space_dim as f64, degree as f64),
    ])
}

fn fixture_jordan(f: &Fixtures, tol: &Tolerances) -> Result<Vec<Check>, CliError> {
    let spec = SemigroupSpec::new(f.jordan3.matrix()?);
    let v = cogenerator(&spec, tol).during("cogenerator")?;
    let back = inverse_cayley(&v, tol).during("inverse_cayley")?;
    let bound = growth_bound(&spec).during("growth_bound")?;
    let mut worst: f64 = 0.0;
    for t in GROWTH_TIMES {
        worst = worst.max(growth_bound_log_residual(&spec, &bound, t).during("growth_bound")?);
    }
    let eq = concavity_equivalence_suite(&spec, &EquivalenceConfig::default(), tol)
        .during("concavity_equivalence_suite")?;
    Ok(vec![
        Check::at_most("cayley_round_trip", (&back - &spec.generator).norm_two(), CAYLEY_ROUND_TRIP_TOL),
        Check::at_most("growth_bound_is_minus_one", (bound.omega + 1.0).abs(), tol.residual_tol),
        Check::at_most("growth_bound_log_limit", worst, GROWTH_CONSISTENCY_TOL),
        Check::at_most("concavity_conditions_agree", if eq.agree { 0.0 } else { 1.0 }, 0.0),
    ])
}

fn fixture_skew(f: &Fixtures, tol: &Tolerances) -> Result<Vec<Check>, CliError> {
    let spec = SemigroupSpec::new(f.skew4.matrix()?);
    let eq = concavity_equivalence_suite(&spec, &EquivalenceConfig::default(), tol)
        .during("concavity_equivalence_suite")?;
    let v = cogenerator(&spec, tol).during("cogenerator")?;
    let unitarity = (&v.adjoint().matmul(&v) - &ComplexMatrix::identity(v.dim())).norm_two();
    let all = eq.conditions().iter().all(|&c| c);
    Ok(vec![
        Check::at_most("concavity_conditions_all_hold", if all { 0.0 } else { 1.0 }, 0.0),
        Check::at_most("cogenerator_unitary", unitarity, tol.residual_tol),
    ])
}

fn fixture_zero(f: &Fixtures, tol: &Tolerances) -> Result<Vec<Check>, CliError> {
    let spec = SemigroupSpec::new(f.zero.matrix()?);
    let v = cogenerator(&spec, tol).during("cogenerator")?;
    let minus_identity = ComplexMatrix::identity(v.dim()).scale_real(-1.0);
    Ok(vec![Check::at_most("cogenerator_is_minus_identity", (&v - &minus_identity).norm_two(), tol.residual_tol)])
}

fn criterion_check(o: &CriterionOutcome) -> Check {
    Check::new(format!("criterion {:02} {}", o.id, o.name), o.pass, o.worst, o.tolerance).with_detail(o.detail.clone())
}

enum Task {
    Criterion(u8),
    Fixture(usize),
}

pub fn verify_all(args: &VerifyAllArgs, tol: &Tolerances) -> Result<Report, CliError> {
    for &id in &args.criteria {
        if !acceptance::CRITERIA.iter().any(|c| c.0 == id) {
            return Err(CliError::Input(format!("unknown criterion {id}")));
        }
    }
    let fixtures = Fixtures::load(args.fixtures.as_deref())?;
    let mut report = Report::new("verify-all", *tol);
    for d in fixtures.digests() {
        report.input(d);
    }

    let mut tasks: Vec<Task> = acceptance::CRITERIA
        .iter()
        .filter(|c| args.criteria.is_empty() || args.criteria.contains(&c.0))
        .map(|c| Task::Criterion(c.0))
        .collect();
    if args.criteria.is_empty() {
        tasks.extend((0..FIXTURE_CHECKS.len()).map(Task::Fixture));
    }

    let results: Vec<(String, Vec<Check>)> = tasks
        .par_iter()
        .map(|task| match task {
            Task::Criterion(id) => {
                let o = acceptance::run_criterion(*id, tol).expect("criterion ids validated");
                (format!("criterion {id:02}"), vec![criterion_check(&o)])
            }
            Task::Fixture(i) => {
                let (name, run) = FIXTURE_CHECKS[*i];
                let checks = run(&fixtures, tol).unwrap_or_else(|e| {
                    vec![Check::new(name, false, f64::INFINITY, 0.0).with_detail(format!("error: {e}"))]
                });
                let checks = checks
                    .into_iter()
                    .map(|mut c| {
                        c.name = format!("{name}: {}", c.name);
                        c
                    })
                    .collect();
                (name.to_owned(), checks)
            }
        })
        .collect();

    let mut summary = Vec::new();
    for (group, checks) in results {
        let pass = checks.iter().all(|c| c.status == crate::report::Status::Pass);
        summary.push(json!({ "group": group, "pass": pass, "checks": checks.len() }));
        for c in checks {
            report.check(c);
        }
    }
    report.result("groups", summary);
    report.warn(SIGN_CONVENTION);
    report.warn(RADIUS_CONVENTION);
    report.warn(INNER_WARNING);
    Ok(report)
}
