use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use dmlwb::algebra::{parse_rat, AffinePoint, PolyMap, Rat};
use dmlwb::batch::{ExperimentConfig, SCHEMA_VERSION, TOOL_VERSION};
use dmlwb::curves::{
    decreasing_intersection_experiment, indeterminacy_periodicity_probe, is_periodic_curve,
    periodic_through_q_check, Curve,
};
use dmlwb::degrees::{degree_sequence, stability_from_profile};
use dmlwb::dml::{dml_classify, DmlParams};
use dmlwb::heights::{
    height_affine, height_growth_probe, northcott_enumerate, place_product, product_formula_check,
    Place,
};
use dmlwb::hirzebruch::{extend_to_fn, model_report, FnModel, FnPoint, TriangularMap};
use dmlwb::intersection::{intersection_multiplicity, intersection_points};
use dmlwb::metrics::{
    approx, basin_probe, local_dml_probe, BasinModel, BasinParams, BasinPoint, DEFAULT_MIN_VISITS,
};
use dmlwb::Error;

#[derive(Parser)]
#[command(name = "dmlwb", version, about = "Exact experiments on polynomial maps of the plane")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degree sequence and stability verdict on P^2.
    Degrees(DegreesArgs),
    /// Height of an affine point, optionally along an orbit.
    Height(HeightArgs),
    /// All points of P^1 or P^2 with height at most a bound.
    Northcott(NorthcottArgs),
    /// Product of |x|_v over all places.
    ProductCheck(ProductArgs),
    /// Distance to a fixed point along an orbit.
    Basin(BasinArgs),
    /// Extension of a triangular map to a Hirzebruch surface.
    FnModel(FnModelArgs),
    /// Period of a curve, with optional probes on F_n.
    CurvePeriod(CurvePeriodArgs),
    /// Intersection multiplicities of two curves.
    Intersect(IntersectArgs),
    /// Orbit visits to a curve.
    Dml {
        #[command(subcommand)]
        cmd: DmlCommand,
    },
    /// Cross product of maps, curves, points and places from a config file.
    Batch(BatchArgs),
}

#[derive(Subcommand)]
enum DmlCommand {
    Scan(DmlScanArgs),
}

#[derive(Args, Serialize)]
struct OutArg {
    /// Write JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct DegreesArgs {
    #[arg(long)]
    map: PathBuf,
    #[arg(long, default_value_t = 10)]
    horizon: usize,
    #[command(flatten)]
    #[serde(skip)]
    out: OutArg,
}

#[derive(Args, Serialize)]
struct HeightArgs {
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    /// Follow the orbit of the point under this map.
    #[arg(long)]
    map: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    horizon: usize,
    #[arg(long, default_value_t = dmlwb::dml::DEFAULT_MAX_BITS)]
    max_bits: u64,
    #[command(flatten)]
    #[serde(skip)]
    out: OutArg,
}

#[derive(Args, Serialize)]
struct NorthcottArgs {
    #[arg(long)]
    bound: u64,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[command(flatten)]
    #[serde(skip)]
    out: OutArg,
}

#[derive(Args, Serialize)]
struct ProductArgs {
    #[arg(long, allow_hyphen_values = true)]
    value: String,
    #[command(flatten)]
    #[serde(skip)]
    out: OutArg,
}

#[derive(Args, Serialize)]
struct BasinArgs {
    #[arg(long)]
    map: PathBuf,
    /// `affine`, `fn:N` or `fn:auto`.
    #[arg(long, default_value = "affine")]
    model: String,
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    /// Fixed point for affine models; `[1,0,1,0]` is used on F_n.
    #[arg(long, allow_hyphen_values = true)]
    target: Option<String>,
    #[arg(long, default_value = "inf")]
    place: String,
    /// A float such as `1e-6`, a fraction, or `2^-20`.
    #[arg(long, default_value = "2^-20")]
    eps: String,
    #[arg(long, default_value_t = 50)]
    horizon: usize,
    /// Also run the local curve probe against this curve (affine models).
    #[arg(long)]
    curve: Option<String>,
    #[arg(long, default_value_t = DEFAULT_MIN_VISITS)]
    min_visits: usize,
    #[arg(long, default_value_t = dmlwb::dml::DEFAULT_MAX_BITS)]
    max_bits: u64,
    #[command(flatten)]
    #[serde(skip)]
    out: OutArg,
}

#[derive(Args, Serialize)]
struct FnModelArgs {
    #[arg(long)]
    map: PathBuf,
    /// Twist `N`, or `auto` for the stability threshold.
    #[arg(long, default_value = "auto")]
    n: String,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct CurvePeriodArgs {
    #[arg(long)]
    map: PathBuf,
    #[arg(long)]
    curve: String,
    #[arg(long, default_value_t = 12)]
    max_period: u32,
    /// Run the F_n probes on this model (`N` or `auto`).
    #[arg(long)]
    fn_model: Option<String>,
    /// Push-forward steps for the indeterminacy probe.
    #[arg(long, default_value_t = 4)]
    steps: usize,
    /// Number of pullbacks in the intersection experiment.
    #[arg(long)]
    decreasing: Option<usize>,
    #[command(flatten)]
    #[serde(skip)]
    out: OutArg,
}

#[derive(Args, Serialize)]
struct IntersectArgs {
    #[arg(long)]
    c1: String,
    #[arg(long)]
    c2: String,
    /// Only this point; otherwise every rational intersection point.
    #[arg(long, allow_hyphen_values = true)]
    at: Option<String>,
    #[command(flatten)]
    #[serde(skip)]
    out: OutArg,
}

#[derive(Args, Serialize)]
struct DmlScanArgs {
    #[arg(long)]
    map: PathBuf,
    #[arg(long)]
    curve: String,
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    #[arg(long, default_value_t = dmlwb::dml::DEFAULT_HORIZON)]
    horizon: usize,
    #[arg(long, default_value_t = dmlwb::dml::DEFAULT_MAX_PERIOD)]
    max_period: u32,
    #[arg(long, default_value_t = dmlwb::dml::DEFAULT_MAX_BITS)]
    max_bits: u64,
    #[command(flatten)]
    #[serde(skip)]
    out: OutArg,
}

#[derive(Args, Serialize)]
struct BatchArgs {
    #[arg(long)]
    config: PathBuf,
    /// Worker threads; `DMLWB_JOBS` takes precedence.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Overrides the `output` field of the config.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Domain(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_domain() {
            Failure::Domain(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

type Outcome = Result<(), Failure>;

fn usage(flag: &str, msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("--{flag}: {msg}"))
}

fn read_map(path: &Path) -> Result<PolyMap, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage("map", format!("cannot read {}: {e}", path.display())))?;
    PolyMap::from_json(&text).map_err(|e| usage("map", e))
}

fn parse_point(flag: &str, s: &str) -> Result<AffinePoint, Failure> {
    AffinePoint::parse(s).map_err(|e| usage(flag, e))
}

fn parse_curve(flag: &str, s: &str) -> Result<Curve, Failure> {
    Curve::parse(s).map_err(|e| usage(flag, e))
}

fn parse_eps(s: &str) -> Result<Rat, Failure> {
    let bad = || usage("eps", format!("'{s}' is not a positive number"));
    let r = if let Some((b, e)) = s.split_once('^') {
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        let e: i32 = e.trim().parse().map_err(|_| bad())?;
        num_traits::pow::Pow::pow(Rat::from_integer(b.into()), e)
    } else if let Ok(r) = parse_rat(s) {
        r
    } else {
        let f: f64 = s.trim().parse().map_err(|_| bad())?;
        Rat::from_float(f).ok_or_else(bad)?
    };
    if r <= Rat::from_integer(0.into()) {
        return Err(bad());
    }
    Ok(r)
}

fn fn_model(map: &PolyMap, choice: &str, flag: &str) -> Result<FnModel, Failure> {
    let t = TriangularMap::from_map(map)?;
    let n = match choice {
        "auto" => t.stability_threshold(),
        s => s
            .parse()
            .map_err(|_| usage(flag, format!("'{s}' is neither a twist nor 'auto'")))?,
    };
    Ok(extend_to_fn(&t, n))
}

fn envelope<A: Serialize>(command: &str, args: &A, result: Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "tool_version": TOOL_VERSION,
        "command": command,
        "config": args,
        "result": result,
    })
}

fn emit(out: Option<&Path>, value: &Value) -> Outcome {
    let text = serde_json::to_string_pretty(value).expect("JSON values serialize") + "\n";
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| usage("out", format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn run_degrees(a: &DegreesArgs) -> Outcome {
    if a.horizon == 0 {
        return Err(usage("horizon", "must be positive"));
    }
    let f = read_map(&a.map)?;
    let prof = degree_sequence(&f, a.horizon)?;
    let verdict = stability_from_profile(&prof);
    eprintln!(
        "degrees {:?}; growth {:?}; lambda ~ {:.6}; {:?}",
        prof.degrees, prof.growth_class, prof.lambda_estimate, verdict
    );
    let mut v = to_value(&prof);
    v["stability"] = to_value(&verdict);
    emit(a.out.out.as_deref(), &envelope("degrees", a, v))
}

fn run_height(a: &HeightArgs) -> Outcome {
    let p = parse_point("point", &a.point)?;
    let h = height_affine(&p);
    eprintln!("H({p}) = {h}");
    let mut v = json!({ "point": p, "height": h.to_string() });
    if let Some(path) = &a.map {
        let f = read_map(path)?;
        let samples = height_growth_probe(&f, &p, a.horizon, a.max_bits);
        if samples.len() <= a.horizon {
            eprintln!("guard: heights exceed {} bits after n = {}", a.max_bits, samples.len() - 1);
        }
        v["orbit"] = to_value(&samples);
    }
    emit(a.out.out.as_deref(), &envelope("height", a, v))
}

fn run_northcott(a: &NorthcottArgs) -> Outcome {
    let pts = northcott_enumerate(a.bound, a.dim)?;
    eprintln!("{} points of height <= {} in P^{}", pts.len(), a.bound, a.dim);
    let v = json!({ "count": pts.len(), "points": pts });
    emit(a.out.out.as_deref(), &envelope("northcott", a, v))
}

fn run_product(a: &ProductArgs) -> Outcome {
    let x = parse_rat(&a.value).map_err(|e| usage("value", e))?;
    let ok = product_formula_check(&x)?;
    let prod = place_product(&x)?;
    eprintln!("product over places of |{}|_v = {prod}: {ok}", a.value);
    let v = json!({ "value": a.value, "product": prod.to_string(), "holds": ok });
    emit(a.out.out.as_deref(), &envelope("product-check", a, v))
}

fn run_basin(a: &BasinArgs) -> Outcome {
    let f = read_map(&a.map)?;
    let place: Place = a.place.parse().map_err(|e| usage("place", e))?;
    let eps = parse_eps(&a.eps)?;
    let start = parse_point("point", &a.point)?;
    let params = BasinParams {
        horizon: a.horizon,
        eps,
        max_bits: a.max_bits,
    };
    let mut v = if a.model == "affine" {
        let q = match &a.target {
            Some(t) => parse_point("target", t)?,
            None => return Err(usage("target", "required for affine models")),
        };
        match &a.curve {
            Some(c) => {
                let c = parse_curve("curve", c)?;
                let r = local_dml_probe(&f, &c, &start, &q, place, &params, a.min_visits)?;
                eprintln!(
                    "local probe: {:?}; basin {:?}; Q hypothesis {:?}",
                    r.verdict, r.basin.verdict, r.q_hypothesis
                );
                to_value(&r)
            }
            None => {
                let r = basin_probe(
                    &BasinModel::Affine(f),
                    &BasinPoint::Affine(start),
                    &BasinPoint::Affine(q),
                    place,
                    &params,
                )?;
                summarize_basin(&r);
                to_value(&r)
            }
        }
    } else if let Some(choice) = a.model.strip_prefix("fn:") {
        if a.curve.is_some() {
            return Err(usage("curve", "the local probe runs on affine models only"));
        }
        let m = fn_model(&f, choice, "model")?;
        let r = basin_probe(
            &BasinModel::Fn(m.clone()),
            &BasinPoint::Affine(start),
            &BasinPoint::Fn(FnPoint::q(m.n)),
            place,
            &params,
        )?;
        summarize_basin(&r);
        to_value(&r)
    } else {
        return Err(usage("model", format!("'{}' is not affine or fn:N", a.model)));
    };
    v["eps"] = json!(a.eps);
    emit(a.out.out.as_deref(), &envelope("basin", a, v))
}

fn summarize_basin(r: &dmlwb::metrics::BasinReport) {
    let last = r.samples.last().and_then(|s| s.distance.as_ref()).map(approx);
    eprintln!("basin at {}: {:?}; last distance {:?}", r.place, r.verdict, last);
    if let Some(g) = &r.guard {
        eprintln!("guard: {g}");
    }
}

fn run_fn_model(a: &FnModelArgs) -> Outcome {
    let f = read_map(&a.map)?;
    let m = fn_model(&f, &a.n, "n")?;
    let r = model_report(&m)?;
    eprintln!(
        "F_{} (threshold {}, stable {}): contraction check {}; locus {}",
        r.n, r.threshold, r.stable, r.contracted_image_check, r.indeterminacy.locus
    );
    emit(a.report.as_deref(), &envelope("fn-model", a, to_value(&r)))
}

fn run_curve_period(a: &CurvePeriodArgs) -> Outcome {
    let f = read_map(&a.map)?;
    let c = parse_curve("curve", &a.curve)?;
    let period = is_periodic_curve(&c, &f, a.max_period)?;
    eprintln!("period of {c}: {period:?} (searched up to {})", a.max_period);
    let mut v = json!({ "curve": c, "period": period });
    if let Some(choice) = &a.fn_model {
        let m = fn_model(&f, choice, "fn-model")?;
        match indeterminacy_periodicity_probe(&m, &c, a.steps, a.max_period) {
            Ok(r) => {
                eprintln!("indeterminacy probe on F_{}: {:?}", m.n, r.verdict);
                v["indeterminacy_probe"] = to_value(&r);
            }
            Err(e) => v["indeterminacy_probe"] = json!({ "error": e.to_string() }),
        }
        let chk = periodic_through_q_check(&m, &c, a.max_period)?;
        if chk.flag {
            eprintln!("flag: periodic curve through [1,0,1,0] with period {:?}", chk.period);
        }
        v["periodic_through_q"] = to_value(&chk);
        if let Some(mm) = a.decreasing {
            match decreasing_intersection_experiment(&m, &c, mm) {
                Ok(r) => {
                    eprintln!("local intersections at [1,0,1,0]: {:?}", r.sequence);
                    v["decreasing_intersections"] = to_value(&r);
                }
                Err(e) => v["decreasing_intersections"] = json!({ "error": e.to_string() }),
            }
        }
    }
    emit(a.out.out.as_deref(), &envelope("curve-period", a, v))
}

fn run_intersect(a: &IntersectArgs) -> Outcome {
    let c1 = parse_curve("c1", &a.c1)?;
    let c2 = parse_curve("c2", &a.c2)?;
    let v = match &a.at {
        Some(s) => {
            let p = parse_point("at", s)?;
            let m = intersection_multiplicity(c1.equation(), c2.equation(), &p);
            eprintln!("I_({p}) = {m}");
            json!({ "point": p, "multiplicity": m })
        }
        None => {
            let s = intersection_points(c1.equation(), c2.equation())?;
            eprintln!("{} rational points; irrational points possible: {}", s.points.len(), s.non_rational);
            to_value(&s)
        }
    };
    emit(a.out.out.as_deref(), &envelope("intersect", a, v))
}

fn run_dml_scan(a: &DmlScanArgs) -> Outcome {
    let f = read_map(&a.map)?;
    let c = parse_curve("curve", &a.curve)?;
    let p = parse_point("point", &a.point)?;
    let params = DmlParams {
        horizon: a.horizon,
        max_period: a.max_period,
        max_bits: a.max_bits,
    };
    let r = dml_classify(&f, &c, &p, &params);
    eprintln!(
        "{:?}: {} visits, progressions {:?}, exceptional {:?}",
        r.verdict,
        r.visit_set.len(),
        r.ap.progressions,
        r.ap.exceptional
    );
    for g in &r.guards {
        eprintln!("guard: {g}");
    }
    emit(a.out.out.as_deref(), &envelope("dml scan", a, to_value(&r)))
}

fn run_batch(a: &BatchArgs) -> Outcome {
    let jobs = match std::env::var("DMLWB_JOBS") {
        Ok(s) => s
            .parse()
            .map_err(|_| Failure::Usage(format!("DMLWB_JOBS: '{s}' is not a count")))?,
        Err(_) => a.jobs,
    };
    let cfg = ExperimentConfig::load(&a.config).map_err(|e| usage("config", e))?;
    let out = a
        .out
        .clone()
        .or_else(|| cfg.raw.output.as_ref().map(|o| a.config.parent().unwrap_or(Path::new(".")).join(o)));
    let report = dmlwb::batch::run_batch(&cfg, jobs)?;
    let errors = report
        .items
        .iter()
        .filter(|i| matches!(i.outcome, dmlwb::batch::ItemOutcome::Error(_)))
        .count();
    eprintln!("{} items, {errors} with errors", report.items.len());
    emit(out.as_deref(), &to_value(&report))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.cmd {
        Command::Degrees(a) => run_degrees(a),
        Command::Height(a) => run_height(a),
        Command::Northcott(a) => run_northcott(a),
        Command::ProductCheck(a) => run_product(a),
        Command::Basin(a) => run_basin(a),
        Command::FnModel(a) => run_fn_model(a),
        Command::CurvePeriod(a) => run_curve_period(a),
        Command::Intersect(a) => run_intersect(a),
        Command::Dml { cmd: DmlCommand::Scan(a) } => run_dml_scan(a),
        Command::Batch(a) => run_batch(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
