//! Batch front-end: parse a JSON run specification, execute the named
//! pipeline, and write a versioned JSON report (sorted keys, 17
//! significant digits) plus optional CSV series data.
//!
//! Exit codes: 0 when everything checked is affirmed, 1 on a malformed
//! specification, 2 when any certificate leg failed, 3 when nothing failed
//! but something stayed unknown or depth-limited.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::Parser;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::algebra::{
    build_function_algebra, build_scalar_algebra, freeness_check, AlgebraElement,
    ScalarAlgebraElement,
};
use crate::construct::{
    check_family_f, classic_example, default_partition, transplant_sequence, FamilyCheck,
    FamilyFailure, FnSeq,
};
use crate::error::{Error, Result};
use crate::poly::{parse_rational, Poly, PolyNoConst};
use crate::realfn::{Interval, RealFn};
use crate::rng::Lcg;
use crate::scalarseq::{Membership, ScalarSeq};
use crate::series::{
    certify_amw, tail_sup_disjoint, uniform_convergence_oracle, AbsoluteCert, AmwCertificate,
    DivergenceCert, UniformCert, UniformOracleReport,
};
use crate::spaces::{
    check_combinations, function_span_family, independence_rank, scalar_span_family,
    ComboVerdict, ProductFamily,
};

pub const REPORT_SCHEMA: &str = "amwkit-report-v1";
pub const DEFAULT_DEPTH: u64 = 20;
const CSV_HEADER: &str = "N,sum_norms,tail_sup,predicted_tail";

/// Command-line arguments. Depth resolution order: `--depth`, then the
/// `AMWKIT_DEPTH` environment variable, then 20.
#[derive(Parser, Debug, Clone)]
#[command(name = "amwkit", version, about = "Certify anti-M-Weierstrass constructions")]
pub struct CliArgs {
    /// Path to the JSON run specification.
    #[arg(long)]
    pub spec: PathBuf,
    /// Directory for report.json and series.csv.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Depth for finite checks.
    #[arg(long)]
    pub depth: Option<u64>,
    /// Seed for randomized draws, in hex.
    #[arg(long, default_value = "0x5EED")]
    pub seed: String,
    /// Also write series.csv.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RunSpec {
    /// Build a family and check the disjoint-support and norm-bound
    /// structure.
    Construct {
        family: FamilySpec,
        #[serde(default)]
        n_list: Option<Vec<u64>>,
    },
    /// Build a sequence and certify the anti-M-Weierstrass properties.
    Certify {
        family: FamilySpec,
        #[serde(default)]
        n_list: Option<Vec<u64>>,
    },
    /// Cross-check the tail-sup identity for a scaled family member.
    Oracle {
        family: FamilySpec,
        scalars: ScalarSpec,
        n_list: Vec<u64>,
    },
    /// Build a generator algebra and certify polynomial elements.
    Algebra { algebra: AlgebraSpec },
    /// Build a span family and certify generators and sampled combinations.
    Spaces {
        spaces: SpacesSpec,
        #[serde(default = "default_draws")]
        draws: usize,
    },
}

fn default_draws() -> usize {
    25
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FamilySpec {
    /// The bump sequence with norms exactly 1/n.
    Classic,
    /// Transplant a source function blockwise over the geometric partition.
    Transplant {
        source: SourceSpec,
        #[serde(default)]
        interval: Option<(f64, f64)>,
    },
    /// Scale a base family termwise by a scalar sequence.
    Scaled {
        scalars: ScalarSpec,
        base: Box<FamilySpec>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SourceSpec {
    Power { c: f64 },
    Exp { c: f64 },
    Affine { slope: f64, intercept: f64 },
    Constant { value: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ScalarSpec {
    /// `1/n`.
    Harmonic,
    /// `1/n^c`.
    Power { c: f64 },
    /// `1/ln^c(n+1)`.
    LogPower { c: f64 },
    Constant { value: f64 },
}

/// One monomial: exponents per variable and a rational coefficient.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyTermSpec {
    pub exps: Vec<u32>,
    pub coeff: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolySpec {
    pub terms: Vec<PolyTermSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum AlgebraSpec {
    /// Generators `(a_n u^i_n)` from shifted transplanted inputs.
    Transplant {
        scalars: ScalarSpec,
        inputs: Vec<SourceSpec>,
        polys: Vec<PolySpec>,
        #[serde(default)]
        interval: Option<(f64, f64)>,
    },
    /// Generators `(a^i_n u_n)` from a scalar basis over one source.
    ScalarBasis {
        basis: Vec<ScalarSpec>,
        source: SourceSpec,
        polys: Vec<PolySpec>,
        #[serde(default)]
        interval: Option<(f64, f64)>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SpacesSpec {
    /// Scalar basis over one base sequence.
    ScalarSpan {
        basis: Vec<ScalarSpec>,
        source: SourceSpec,
        #[serde(default)]
        interval: Option<(f64, f64)>,
    },
    /// One scalar sequence over several transplanted sources.
    FunctionSpan {
        scalars: ScalarSpec,
        sources: Vec<SourceSpec>,
        #[serde(default)]
        interval: Option<(f64, f64)>,
    },
}

/// Run the front-end: never panics, never returns `Err`; every problem is
/// a diagnostic on stderr and exit 1.
pub fn run(args: &CliArgs) -> i32 {
    match execute(args) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("amwkit: {err}");
            1
        }
    }
}

fn resolve_depth(args: &CliArgs) -> Result<u64> {
    if let Some(d) = args.depth {
        return Ok(d);
    }
    match std::env::var("AMWKIT_DEPTH") {
        Ok(raw) => raw.parse().map_err(|_| Error::Spec {
            field: "AMWKIT_DEPTH".into(),
            message: format!("not a depth: {raw:?}"),
        }),
        Err(_) => Ok(DEFAULT_DEPTH),
    }
}

fn resolve_seed(args: &CliArgs) -> Result<u64> {
    let raw = args.seed.trim();
    let digits = raw
        .strip_prefix("0x")
        .or_else(|| raw.strip_prefix("0X"))
        .unwrap_or(raw);
    u64::from_str_radix(digits, 16).map_err(|_| Error::Spec {
        field: "--seed".into(),
        message: format!("not a hex seed: {raw:?}"),
    })
}

fn execute(args: &CliArgs) -> Result<i32> {
    let depth = resolve_depth(args)?;
    let seed = resolve_seed(args)?;
    let text = fs::read_to_string(&args.spec)?;
    let spec: RunSpec = serde_json::from_str(&text)?;

    let run = match &spec {
        RunSpec::Construct { family, n_list } => run_construct(family, n_list.as_deref(), depth)?,
        RunSpec::Certify { family, n_list } => run_certify(family, n_list.as_deref(), depth)?,
        RunSpec::Oracle {
            family,
            scalars,
            n_list,
        } => run_oracle(family, scalars, n_list)?,
        RunSpec::Algebra { algebra } => run_algebra(algebra, depth)?,
        RunSpec::Spaces { spaces, draws } => run_spaces(spaces, *draws, depth, seed)?,
    };

    let mut report = Map::new();
    report.insert("schema".into(), json!(REPORT_SCHEMA));
    report.insert("command".into(), json!(command_name(&spec)));
    report.insert("depth".into(), json!(depth));
    report.insert("seed".into(), json!(format!("{seed:#x}")));
    report.insert("spec".into(), serde_json::to_value(&spec)?);
    report.insert("exit_code".into(), json!(run.exit_code));
    for (k, v) in run.body {
        report.insert(k, v);
    }

    fs::create_dir_all(&args.out)?;
    let report_path = args.out.join("report.json");
    fs::write(&report_path, render_json(&Value::Object(report)))?;
    if args.csv {
        let csv_path = args.out.join("series.csv");
        match &run.csv {
            Some(rows) => fs::write(&csv_path, render_csv(rows))?,
            None => eprintln!("amwkit: this command produces no series data; series.csv not written"),
        }
    }
    println!(
        "{}: {} (exit {}); report at {}",
        command_name(&spec),
        run.summary,
        run.exit_code,
        report_path.display()
    );
    Ok(run.exit_code)
}

fn command_name(spec: &RunSpec) -> &'static str {
    match spec {
        RunSpec::Construct { .. } => "construct",
        RunSpec::Certify { .. } => "certify",
        RunSpec::Oracle { .. } => "oracle",
        RunSpec::Algebra { .. } => "algebra",
        RunSpec::Spaces { .. } => "spaces",
    }
}

struct CsvRow {
    n: u64,
    sum_norms: f64,
    tail_sup: f64,
    predicted_tail: f64,
}

struct RunOutput {
    body: Vec<(String, Value)>,
    exit_code: i32,
    summary: String,
    csv: Option<Vec<CsvRow>>,
}

// ---- spec -> library values ------------------------------------------------

fn parse_interval(spec: &Option<(f64, f64)>) -> Result<Interval> {
    match spec {
        None => Ok(Interval::unit()),
        Some((lo, hi)) => Interval::new(*lo, *hi).map_err(|e| Error::Spec {
            field: "interval".into(),
            message: e.to_string(),
        }),
    }
}

fn build_source(spec: &SourceSpec, domain: Interval) -> Result<RealFn> {
    match spec {
        SourceSpec::Power { c } => RealFn::power(domain, *c),
        SourceSpec::Exp { c } => RealFn::exp(domain, *c),
        SourceSpec::Affine { slope, intercept } => {
            Ok(RealFn::affine(domain, *slope, *intercept))
        }
        SourceSpec::Constant { value } => Ok(RealFn::constant(domain, *value)),
    }
}

fn build_scalars(spec: &ScalarSpec) -> Result<ScalarSeq> {
    match spec {
        ScalarSpec::Harmonic => ScalarSeq::make_power(1.0),
        ScalarSpec::Power { c } => ScalarSeq::make_power(*c),
        ScalarSpec::LogPower { c } => ScalarSeq::make_logpower(*c),
        ScalarSpec::Constant { value } => Ok(ScalarSeq::constant(*value)),
    }
}

/// Build the sequence plus, for scalar-scaled families, the (scalars, base)
/// pair that unlocks the structural certification route.
fn build_family(spec: &FamilySpec) -> Result<(FnSeq, Option<(ScalarSeq, FnSeq)>)> {
    match spec {
        FamilySpec::Classic => Ok((classic_example(), None)),
        FamilySpec::Transplant { source, interval } => {
            let iv = parse_interval(interval)?;
            let f = build_source(source, iv)?;
            let u = transplant_sequence(&default_partition(iv), &f)?;
            Ok((u, None))
        }
        FamilySpec::Scaled { scalars, base } => {
            let a = build_scalars(scalars)?;
            let (b, _) = build_family(base)?;
            Ok((FnSeq::scaled(&a, &b), Some((a, b))))
        }
    }
}

fn build_poly(spec: &PolySpec, nvars: usize, field: &str) -> Result<PolyNoConst> {
    let mut p = Poly::zero(nvars);
    for term in &spec.terms {
        if term.exps.len() != nvars {
            return Err(Error::Spec {
                field: field.into(),
                message: format!(
                    "monomial has {} exponents but the algebra has {nvars} generators",
                    term.exps.len()
                ),
            });
        }
        p.add_term(term.exps.clone(), parse_rational(&term.coeff)?);
    }
    PolyNoConst::new(p)
}

// ---- command runners --------------------------------------------------------

const DEFAULT_N_LIST: [u64; 3] = [10, 100, 1_000];

fn run_construct(spec: &FamilySpec, n_list: Option<&[u64]>, depth: u64) -> Result<RunOutput> {
    let (f, _) = build_family(spec)?;
    let check = check_family_f(&f, depth)?;
    let (exit_code, summary) = match &check {
        FamilyCheck::Certified(_) => (0, "family structure certified".to_string()),
        FamilyCheck::DepthLimited { depth, .. } => {
            (3, format!("nothing failed up to depth {depth}, tail open"))
        }
        FamilyCheck::Failed(_) => (2, "family structure failed".to_string()),
    };
    let mut terms = Vec::new();
    for n in 1..=depth.min(20) {
        match f.term_norm_or_eval(n) {
            Ok(enc) => terms.push(json!({
                "n": n,
                "norm_lower": fnum(enc.lower),
                "norm_upper": fnum(enc.upper),
                "exact": enc.exact,
            })),
            Err(err) => {
                terms.push(json!({ "n": n, "error": err.to_string() }));
                break;
            }
        }
    }
    Ok(RunOutput {
        body: vec![
            ("family_check".into(), family_check_value(&check)),
            ("terms".into(), Value::Array(terms)),
        ],
        exit_code,
        summary,
        csv: Some(series_rows(&f, n_list.unwrap_or(&DEFAULT_N_LIST), depth)),
    })
}

fn run_certify(spec: &FamilySpec, n_list: Option<&[u64]>, depth: u64) -> Result<RunOutput> {
    let (f, meta) = build_family(spec)?;
    let cert = certify_amw(&f, meta.as_ref().map(|(a, b)| (a, b)));
    let exit_code = certificate_exit(&cert);
    let summary = cert.verdict();
    Ok(RunOutput {
        body: vec![("certificate".into(), certificate_value(&cert))],
        exit_code,
        summary,
        csv: Some(series_rows(&f, n_list.unwrap_or(&DEFAULT_N_LIST), depth)),
    })
}

fn run_oracle(family: &FamilySpec, scalars: &ScalarSpec, n_list: &[u64]) -> Result<RunOutput> {
    if n_list.is_empty() {
        return Err(Error::Spec {
            field: "n_list".into(),
            message: "need at least one start index".into(),
        });
    }
    let (u, _) = build_family(family)?;
    let a = build_scalars(scalars)?;
    let report = uniform_convergence_oracle(&u, &a, n_list)?;
    let scaled = FnSeq::scaled(&a, &u);
    let mut rows = Vec::new();
    for r in &report.rows {
        rows.push(CsvRow {
            n: r.n_start,
            sum_norms: partial_norm_sum(&scaled, r.n_start).unwrap_or(f64::NAN),
            tail_sup: r.tail_sup,
            predicted_tail: r.termwise_max,
        });
    }
    let exit_code = if report.all_agree { 0 } else { 2 };
    let summary = if report.all_agree {
        "tail identity agrees at every start index".to_string()
    } else {
        "tail identity disagrees".to_string()
    };
    Ok(RunOutput {
        body: vec![("oracle".into(), oracle_value(&report))],
        exit_code,
        summary,
        csv: Some(rows),
    })
}

fn run_algebra(spec: &AlgebraSpec, depth: u64) -> Result<RunOutput> {
    match spec {
        AlgebraSpec::Transplant {
            scalars,
            inputs,
            polys,
            interval,
        } => {
            let iv = parse_interval(interval)?;
            let a = build_scalars(scalars)?;
            let gs: Vec<RealFn> = inputs
                .iter()
                .map(|s| build_source(s, iv))
                .collect::<Result<_>>()?;
            let algebra = build_function_algebra(&default_partition(iv), &a, &gs)?;
            let parsed: Vec<PolyNoConst> = polys
                .iter()
                .map(|p| build_poly(p, gs.len(), "algebra.polys"))
                .collect::<Result<_>>()?;
            let mut elements = Vec::new();
            let mut certs = Vec::new();
            for p in &parsed {
                let e = algebra.element(p)?;
                let cert = algebra.certify(&e);
                elements.push(transplant_element_value(&e, &cert));
                certs.push(cert);
            }
            let freeness = freeness_check(&algebra, &parsed, depth)?;
            let exit_code = combined_exit(&certs);
            let summary = algebra_summary(&certs);
            Ok(RunOutput {
                body: vec![
                    ("algebra_kind".into(), json!("transplant")),
                    ("elements".into(), Value::Array(elements)),
                    (
                        "freeness".into(),
                        json!({
                            "all_witnessed": freeness.all_witnessed,
                            "rows": freeness
                                .rows
                                .iter()
                                .map(|r| json!({
                                    "poly": r.poly,
                                    "witness": r.witness.map(|(n, x, v)| json!({
                                        "n": n, "x": fnum(x), "value": fnum(v)
                                    })),
                                }))
                                .collect::<Vec<_>>(),
                        }),
                    ),
                ],
                exit_code,
                summary,
                csv: None,
            })
        }
        AlgebraSpec::ScalarBasis {
            basis,
            source,
            polys,
            interval,
        } => {
            let iv = parse_interval(interval)?;
            let seqs: Vec<ScalarSeq> = basis.iter().map(build_scalars).collect::<Result<_>>()?;
            let f = build_source(source, iv)?;
            let u = transplant_sequence(&default_partition(iv), &f)?;
            let algebra = build_scalar_algebra(&seqs, &u)?;
            let parsed: Vec<PolyNoConst> = polys
                .iter()
                .map(|p| build_poly(p, seqs.len(), "algebra.polys"))
                .collect::<Result<_>>()?;
            let mut elements = Vec::new();
            let mut certs = Vec::new();
            for p in &parsed {
                let e = algebra.element(p)?;
                let cert = algebra.certify(&e);
                elements.push(scalar_element_value(&e, &cert));
                certs.push(cert);
            }
            let exit_code = combined_exit(&certs);
            let summary = algebra_summary(&certs);
            Ok(RunOutput {
                body: vec![
                    ("algebra_kind".into(), json!("scalar-basis")),
                    ("elements".into(), Value::Array(elements)),
                ],
                exit_code,
                summary,
                csv: None,
            })
        }
    }
}

fn run_spaces(spec: &SpacesSpec, draws: usize, depth: u64, seed: u64) -> Result<RunOutput> {
    let family = match spec {
        SpacesSpec::ScalarSpan {
            basis,
            source,
            interval,
        } => {
            let iv = parse_interval(interval)?;
            let seqs: Vec<ScalarSeq> = basis.iter().map(build_scalars).collect::<Result<_>>()?;
            let f = build_source(source, iv)?;
            let u = transplant_sequence(&default_partition(iv), &f)?;
            scalar_span_family(&seqs, &u)?
        }
        SpacesSpec::FunctionSpan {
            scalars,
            sources,
            interval,
        } => {
            let iv = parse_interval(interval)?;
            let a = build_scalars(scalars)?;
            let fs: Vec<RealFn> = sources
                .iter()
                .map(|s| build_source(s, iv))
                .collect::<Result<_>>()?;
            function_span_family(&default_partition(iv), &a, &fs)?
        }
    };
    let mut rng = Lcg::new(seed);
    let combos = check_combinations(&family, draws, &mut rng)?;
    let rank = independence_rank(&family.generators, depth.min(10), 3)?;
    let generators: Vec<Value> = family
        .certificates
        .iter()
        .map(|c| json!({ "verdict": c.verdict(), "affirmed": c.affirmed() }))
        .collect();
    let outcomes: Vec<Value> = combos
        .outcomes
        .iter()
        .map(|o| {
            json!({
                "indices": o.indices,
                "coeffs": o.coeffs.iter().map(|&c| fnum(c)).collect::<Vec<_>>(),
                "verdict": combo_verdict_value(&o.verdict),
            })
        })
        .collect();
    let exit_code = if !combos.none_failed {
        2
    } else if combos.all_affirmed {
        0
    } else {
        3
    };
    let summary = format!(
        "{} generators, {} combinations ({}), rank {rank}",
        family.generators.len(),
        combos.outcomes.len(),
        if combos.all_affirmed {
            "all affirmed"
        } else if combos.none_failed {
            "none failed, some depth-limited"
        } else {
            "failures present"
        }
    );
    Ok(RunOutput {
        body: vec![
            ("mode".into(), json!(mode_name(&family))),
            ("generators".into(), Value::Array(generators)),
            (
                "combinations".into(),
                json!({
                    "outcomes": outcomes,
                    "none_failed": combos.none_failed,
                    "all_affirmed": combos.all_affirmed,
                }),
            ),
            ("independence_rank".into(), json!(rank)),
        ],
        exit_code,
        summary,
        csv: None,
    })
}

fn mode_name(family: &ProductFamily) -> &'static str {
    match family.mode {
        crate::spaces::FamilyMode::ScalarSpan => "scalar-span",
        crate::spaces::FamilyMode::FunctionSpan => "function-span",
    }
}

// ---- series data -------------------------------------------------------------

/// `sum_{n <= N} ||f_n||` through structural norms only; `None` as soon as
/// a term has no structural norm.
fn partial_norm_sum(f: &FnSeq, n_max: u64) -> Option<f64> {
    let mut sum = 0.0;
    for n in 1..=n_max {
        sum += f.term_norm(n)?.estimate();
    }
    Some(sum)
}

/// Rows `(N, partial norm sum, certified tail lower, certified tail
/// upper)`. Columns that cannot be computed are NaN, never invented.
fn series_rows(f: &FnSeq, n_list: &[u64], depth: u64) -> Vec<CsvRow> {
    let mut rows = Vec::new();
    for &n in n_list {
        let (tail_sup, predicted_tail) = match tail_sup_disjoint(f, n, depth) {
            Ok(enc) => (enc.lower, enc.upper),
            Err(_) => (f64::NAN, f64::NAN),
        };
        rows.push(CsvRow {
            n,
            sum_norms: partial_norm_sum(f, n).unwrap_or(f64::NAN),
            tail_sup,
            predicted_tail,
        });
    }
    rows
}

// ---- exit codes ----------------------------------------------------------------

fn leg_failed(cert: &AmwCertificate) -> bool {
    matches!(cert.absolute, AbsoluteCert::Failed { .. })
        || matches!(cert.uniform, UniformCert::Failed { .. })
        || matches!(cert.divergence, DivergenceCert::Failed { .. })
}

fn certificate_exit(cert: &AmwCertificate) -> i32 {
    if cert.affirmed() {
        0
    } else if leg_failed(cert) {
        2
    } else {
        3
    }
}

fn combined_exit(certs: &[AmwCertificate]) -> i32 {
    if certs.iter().any(leg_failed) {
        2
    } else if certs.iter().all(AmwCertificate::affirmed) {
        0
    } else {
        3
    }
}

fn algebra_summary(certs: &[AmwCertificate]) -> String {
    let affirmed = certs.iter().filter(|c| c.affirmed()).count();
    format!("{affirmed} of {} elements affirmed", certs.len())
}

// ---- value builders ---------------------------------------------------------

/// Floats enter reports through this: non-finite values become strings so
/// the report stays valid JSON without inventing numbers.
fn fnum(x: f64) -> Value {
    match serde_json::Number::from_f64(x) {
        Some(n) => Value::Number(n),
        None => Value::String(format!("{x}")),
    }
}

fn leg_value(status: &str, holds: bool, reason: &str) -> Value {
    json!({ "status": status, "holds": holds, "reason": reason })
}

fn absolute_value(a: &AbsoluteCert) -> Value {
    match a {
        AbsoluteCert::DisjointSupports { reason } => leg_value("disjoint-supports", true, reason),
        AbsoluteCert::TermwiseSummable { reason } => leg_value("termwise-summable", true, reason),
        AbsoluteCert::Failed { reason } => leg_value("failed", false, reason),
        AbsoluteCert::Unknown { reason } => leg_value("unknown", false, reason),
    }
}

fn uniform_value(u: &UniformCert) -> Value {
    match u {
        UniformCert::NullScalarsOnFamily { reason } => {
            leg_value("null-scalars-on-family", true, reason)
        }
        UniformCert::ExactTailBound { reason } => leg_value("exact-tail-bound", true, reason),
        UniformCert::Failed { reason } => leg_value("failed", false, reason),
        UniformCert::Unknown { reason } => leg_value("unknown", false, reason),
    }
}

fn divergence_value(d: &DivergenceCert) -> Value {
    match d {
        DivergenceCert::NormsNotSummable { reason } => {
            leg_value("norms-not-summable", true, reason)
        }
        DivergenceCert::Failed { reason } => leg_value("failed", false, reason),
        DivergenceCert::Unknown { reason } => leg_value("unknown", false, reason),
    }
}

pub fn certificate_value(cert: &AmwCertificate) -> Value {
    json!({
        "absolute": absolute_value(&cert.absolute),
        "uniform": uniform_value(&cert.uniform),
        "divergence": divergence_value(&cert.divergence),
        "sanity": {
            "tail_sup_at_100": cert.sanity.tail_sup_at_100.map(fnum),
            "norm_partial_sums": cert.sanity.norm_partial_sums
                .iter()
                .map(|&(n, s)| json!([n, fnum(s)]))
                .collect::<Vec<_>>(),
            "warnings": cert.sanity.warnings,
        },
        "notes": cert.notes,
        "affirmed": cert.affirmed(),
        "verdict": cert.verdict(),
    })
}

fn family_check_value(check: &FamilyCheck) -> Value {
    match check {
        FamilyCheck::Certified(c) => json!({
            "status": "certified",
            "disjoint_supports": c.disjoint_supports,
            "norm_inf": fnum(c.l),
            "norm_sup": fnum(c.m),
            "exact": c.exact,
        }),
        FamilyCheck::DepthLimited { l, m, depth, note } => json!({
            "status": "depth-limited",
            "norm_inf": fnum(*l),
            "norm_sup": fnum(*m),
            "depth": depth,
            "note": note,
        }),
        FamilyCheck::Failed(f) => match f {
            FamilyFailure::SupportOverlap { n, m, witness } => json!({
                "status": "failed",
                "failure": "support-overlap",
                "n": n,
                "m": m,
                "witness": fnum(*witness),
            }),
            FamilyFailure::NotFarFromZero { detail } => json!({
                "status": "failed",
                "failure": "not-far-from-zero",
                "detail": detail,
            }),
        },
    }
}

fn membership_value(m: &Membership) -> Value {
    match m {
        Membership::Yes(reason) => json!({ "answer": "yes", "reason": reason }),
        Membership::No(reason) => json!({ "answer": "no", "reason": reason }),
        Membership::Unknown => json!({ "answer": "unknown" }),
    }
}

fn oracle_value(report: &UniformOracleReport) -> Value {
    json!({
        "rows": report.rows.iter().map(|r| json!({
            "n_start": r.n_start,
            "tail_sup": fnum(r.tail_sup),
            "termwise_max": fnum(r.termwise_max),
            "agree": r.agree,
        })).collect::<Vec<_>>(),
        "scalars_in_c0": membership_value(&report.scalars_in_c0),
        "all_agree": report.all_agree,
        "divergence_floor": report.divergence_floor.map(|(floor, holds)| json!({
            "floor": fnum(floor),
            "every_tail_at_least_floor": holds,
        })),
        "notes": report.notes,
    })
}

fn transplant_element_value(e: &AlgebraElement, cert: &AmwCertificate) -> Value {
    json!({
        "poly": e.poly.to_string(),
        "entry_poly": e.entry_poly.as_ref().map(|q| q.to_string()),
        "entry_cancelled": e.entry_cancelled,
        "certificate": certificate_value(cert),
    })
}

fn scalar_element_value(e: &ScalarAlgebraElement, cert: &AmwCertificate) -> Value {
    json!({
        "poly": e.poly.to_string(),
        "witness_terms": e.witness_terms.as_ref().map(|terms| {
            terms.iter()
                .map(|&(exp, w)| json!([fnum(exp), fnum(w)]))
                .collect::<Vec<_>>()
        }),
        "degenerate": e.degenerate,
        "certificate": certificate_value(cert),
    })
}

fn combo_verdict_value(v: &ComboVerdict) -> Value {
    match v {
        ComboVerdict::Affirmed => json!({ "status": "affirmed" }),
        ComboVerdict::DepthLimited(detail) => {
            json!({ "status": "depth-limited", "detail": detail })
        }
        ComboVerdict::Failed(detail) => json!({ "status": "failed", "detail": detail }),
    }
}

// ---- rendering ----------------------------------------------------------------

/// Deterministic JSON: object keys are sorted (the map is ordered), floats
/// are written with 17 significant digits, and there are no timestamps.
pub fn render_json(value: &Value) -> String {
    let mut out = String::new();
    render_value(value, 0, &mut out);
    out.push('\n');
    out
}

fn render_value(value: &Value, indent: usize, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        Value::Number(n) => {
            if n.is_f64() {
                let _ = write!(out, "{:.16e}", n.as_f64().unwrap_or(f64::NAN));
            } else {
                let _ = write!(out, "{n}");
            }
        }
        Value::String(s) => {
            let _ = write!(out, "{}", Value::String(s.clone()));
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                pad(indent + 2, out);
                render_value(item, indent + 2, out);
            }
            out.push('\n');
            pad(indent, out);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            for (i, (key, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                pad(indent + 2, out);
                let _ = write!(out, "{}: ", Value::String(key.clone()));
                render_value(item, indent + 2, out);
            }
            out.push('\n');
            pad(indent, out);
            out.push('}');
        }
    }
}

fn pad(indent: usize, out: &mut String) {
    for _ in 0..indent {
        out.push(' ');
    }
}

fn render_csv(rows: &[CsvRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{:.16e},{:.16e},{:.16e}",
            r.n, r.sum_norms, r.tail_sup, r.predicted_tail
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args_for(dir: &std::path::Path, spec_name: &str) -> CliArgs {
        CliArgs {
            spec: dir.join(spec_name),
            out: dir.to_path_buf(),
            depth: None,
            seed: "0x5EED".into(),
            csv: true,
        }
    }

    fn write_spec(dir: &std::path::Path, name: &str, body: &str) {
        fs::write(dir.join(name), body).unwrap();
    }

    #[test]
    fn classic_certify_exits_zero_with_harmonic_reason() {
        let dir = tempfile::tempdir().unwrap();
        write_spec(
            dir.path(),
            "spec.json",
            r#"{ "command": "certify", "family": { "kind": "classic" } }"#,
        );
        let code = run(&args_for(dir.path(), "spec.json"));
        assert_eq!(code, 0);
        let report = fs::read_to_string(dir.path().join("report.json")).unwrap();
        let v: Value = serde_json::from_str(&report).unwrap();
        assert_eq!(v["schema"], "amwkit-report-v1");
        assert_eq!(v["exit_code"], 0);
        let reason = v["certificate"]["divergence"]["reason"].as_str().unwrap();
        assert!(reason.contains("harmonic norms"), "{reason}");
    }

    #[test]
    fn summable_scaling_exits_two() {
        let dir = tempfile::tempdir().unwrap();
        write_spec(
            dir.path(),
            "spec.json",
            r#"{
              "command": "certify",
              "family": {
                "kind": "scaled",
                "scalars": { "kind": "power", "c": 2.0 },
                "base": { "kind": "transplant", "source": { "kind": "power", "c": 1.0 } }
              }
            }"#,
        );
        let code = run(&args_for(dir.path(), "spec.json"));
        assert_eq!(code, 2);
    }

    #[test]
    fn oracle_csv_rows_carry_exact_tails() {
        let dir = tempfile::tempdir().unwrap();
        write_spec(
            dir.path(),
            "spec.json",
            r#"{
              "command": "oracle",
              "family": { "kind": "transplant", "source": { "kind": "power", "c": 1.0 } },
              "scalars": { "kind": "harmonic" },
              "n_list": [10, 100, 1000]
            }"#,
        );
        let code = run(&args_for(dir.path(), "spec.json"));
        assert_eq!(code, 0);
        let csv = fs::read_to_string(dir.path().join("series.csv")).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "N,sum_norms,tail_sup,predicted_tail");
        assert_eq!(lines.len(), 4);
        for (line, n) in lines[1..].iter().zip([10.0f64, 100.0, 1000.0]) {
            let cols: Vec<&str> = line.split(',').collect();
            let tail: f64 = cols[2].parse().unwrap();
            assert_eq!(tail, 1.0 / n);
        }
    }

    #[test]
    fn malformed_spec_exits_one() {
        let dir = tempfile::tempdir().unwrap();
        write_spec(
            dir.path(),
            "spec.json",
            r#"{ "command": "certify", "family": { "kind": "no-such-kind" } }"#,
        );
        assert_eq!(run(&args_for(dir.path(), "spec.json")), 1);
        write_spec(dir.path(), "bad.json", "{ not json");
        assert_eq!(run(&args_for(dir.path(), "bad.json")), 1);
    }

    #[test]
    fn unknown_certificate_exits_three() {
        // An all-log scalar basis: generators certify, but multi-term
        // combinations have no structural recombination certificate, so the
        // run ends depth-limited rather than affirmed or failed.
        let dir = tempfile::tempdir().unwrap();
        write_spec(
            dir.path(),
            "spec.json",
            r#"{
              "command": "spaces",
              "spaces": {
                "mode": "scalar-span",
                "basis": [
                  { "kind": "log-power", "c": 1.0 },
                  { "kind": "log-power", "c": 2.0 }
                ],
                "source": { "kind": "power", "c": 1.0 }
              },
              "draws": 6
            }"#,
        );
        let code = run(&args_for(dir.path(), "spec.json"));
        assert_eq!(code, 3);
    }

    #[test]
    fn depth_env_and_flag_resolution() {
        let base = CliArgs {
            spec: "unused".into(),
            out: "unused".into(),
            depth: Some(7),
            seed: "0x5EED".into(),
            csv: false,
        };
        assert_eq!(resolve_depth(&base).unwrap(), 7);
        let no_flag = CliArgs {
            depth: None,
            ..base.clone()
        };
        // no env var set in tests: default applies
        assert_eq!(resolve_depth(&no_flag).unwrap(), DEFAULT_DEPTH);
    }

    #[test]
    fn seed_parses_hex_with_or_without_prefix() {
        let mut args = CliArgs {
            spec: "unused".into(),
            out: "unused".into(),
            depth: None,
            seed: "0x5EED".into(),
            csv: false,
        };
        assert_eq!(resolve_seed(&args).unwrap(), 0x5EED);
        args.seed = "5eed".into();
        assert_eq!(resolve_seed(&args).unwrap(), 0x5EED);
        args.seed = "zz".into();
        assert!(resolve_seed(&args).is_err());
    }

    #[test]
    fn reports_are_byte_stable() {
        let dir = tempfile::tempdir().unwrap();
        write_spec(
            dir.path(),
            "spec.json",
            r#"{ "command": "certify", "family": { "kind": "classic" } }"#,
        );
        let args = args_for(dir.path(), "spec.json");
        run(&args);
        let first = fs::read(dir.path().join("report.json")).unwrap();
        let first_csv = fs::read(dir.path().join("series.csv")).unwrap();
        run(&args);
        let second = fs::read(dir.path().join("report.json")).unwrap();
        let second_csv = fs::read(dir.path().join("series.csv")).unwrap();
        assert_eq!(first, second);
        assert_eq!(first_csv, second_csv);
    }

    #[test]
    fn rendered_floats_round_trip() {
        let v = json!({ "x": fnum(0.1), "y": fnum(1.0 / 3.0), "n": 7 });
        let text = render_json(&v);
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["x"].as_f64().unwrap(), 0.1);
        assert_eq!(back["y"].as_f64().unwrap(), 1.0 / 3.0);
        assert_eq!(back["n"].as_u64().unwrap(), 7);
    }

    #[test]
    fn render_sorts_keys() {
        let mut map = Map::new();
        map.insert("zeta".into(), json!(1));
        map.insert("alpha".into(), json!(2));
        let text = render_json(&Value::Object(map));
        let alpha = text.find("alpha").unwrap();
        let zeta = text.find("zeta").unwrap();
        assert!(alpha < zeta);
    }

    #[test]
    fn algebra_command_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        write_spec(
            dir.path(),
            "spec.json",
            r#"{
              "command": "algebra",
              "algebra": {
                "kind": "transplant",
                "scalars": { "kind": "log-power", "c": 1.0 },
                "inputs": [{ "kind": "power", "c": 1.0 }],
                "polys": [
                  { "terms": [{ "exps": [1], "coeff": "1" }] },
                  { "terms": [{ "exps": [2], "coeff": "3/2" }] }
                ],
                "interval": [-1.0, 0.0]
              }
            }"#,
        );
        let code = run(&args_for(dir.path(), "spec.json"));
        assert_eq!(code, 0);
        let report = fs::read_to_string(dir.path().join("report.json")).unwrap();
        let v: Value = serde_json::from_str(&report).unwrap();
        assert_eq!(v["freeness"]["all_witnessed"], true);
        assert_eq!(v["elements"].as_array().unwrap().len(), 2);
    }
}
