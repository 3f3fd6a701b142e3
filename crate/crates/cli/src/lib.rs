//! Command-line front end for the `facloc` library.
//!
//! [`run`] parses arguments, dispatches and returns the rendered report with
//! an exit code: 0 on pass, 1 when an audit or witness fails, 2 on usage or
//! input errors.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use facloc::audit::{
    self, Adversary, BrokenWeightedPoint, CentroidAll, CentroidExtremes, CentroidExtremesPerturbed, Gcm, GridSpec,
    Lrm, MedianLine, Mechanism, MinMaxP, MinimumBoundingBox, MixedDelta, PredictionKind, SweepConfig,
    WitnessOptions,
};
use facloc::geometry::{min_enclosing_circle, Point};
use facloc::line::{onlym_decompose, onlym_transform, MixtureParam};
use facloc::model::{self, Instance, InstanceFile, Lottery, Prediction};
use facloc::plane::GcmConfig;
use facloc::report::{self, format_sig, CsvTable};
use facloc::sampling::RandomInstances;
use serde_json::{json, Value};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_DELTAS: &str = "0,0.1,0.2,0.3,0.4,0.5";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] facloc::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "facloc", version, about = "Truthful facility location with predictions: mechanisms, audits and witnesses")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for sampled instances and perturbations.
    #[arg(long, global = true, env = "FACLOC_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Tolerance for pass/fail decisions.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

const MECH_HELP: &str = "Mechanism id: median, lrm, minmaxp, mixed:<delta>, gcm:<phantom-file>, mbb, \
centroid-ext, centroid-ext-perturbed[:<eps>], centroid-all, broken-weighted";

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a mechanism on an instance: output lottery, exact expected
    /// egalitarian cost and approximation ratio. Without a prediction in the
    /// file the accurate one is used.
    Eval {
        #[arg(long, help = MECH_HELP)]
        mech: String,
        #[arg(long)]
        instance: PathBuf,
    },
    /// Truthfulness-in-expectation audit: every agent's best misreport over a
    /// deviation grid, prediction held fixed. Compliance is certified only up
    /// to grid resolution.
    Audit {
        #[arg(long, help = MECH_HELP)]
        mech: String,
        #[arg(long)]
        instance: PathBuf,
        /// Grid points per axis.
        #[arg(long, default_value_t = 41)]
        grid: usize,
    },
    /// Consistency: worst ratio over random instances with accurate
    /// predictions.
    Consistency {
        #[arg(long, help = MECH_HELP)]
        mech: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        min_agents: usize,
        #[arg(long, default_value_t = 8)]
        max_agents: usize,
    },
    /// Robustness: worst ratio over random instances and adversarial
    /// predictions (facility grid with far clamping probes, or extreme-id
    /// subsets).
    Robustness {
        #[arg(long, help = MECH_HELP)]
        mech: String,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        min_agents: usize,
        #[arg(long, default_value_t = 8)]
        max_agents: usize,
        /// Facility grid points per axis.
        #[arg(long, default_value_t = 101)]
        grid: usize,
    },
    /// Consistency/robustness frontier of the LRM/MinMaxP mixture on two-agent
    /// line instances. Columns: delta,consistency,robustness.
    Sweep {
        /// Comma-separated mixture weights in [0, 0.5].
        #[arg(long, default_value = DEFAULT_DELTAS)]
        deltas: String,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Also write the frontier CSV to this path.
        #[arg(long)]
        emit_plot_data: Option<PathBuf>,
    },
    /// Replay a bound's witness instances: thm2 (enclosing-circle lower bound
    /// 1.118), thm4 (phantom coordinatewise median, ratio 1+sqrt 2), thm5
    /// (bounding-box clamping on two agents), thm3-det / thm3-rand (two-agent
    /// profiles checked against a supplied line mechanism).
    Witness {
        name: String,
        /// Horizontal offset of the phantom-median instance.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        x_tilde: f64,
        /// Line mechanism checked by thm3-det / thm3-rand.
        #[arg(long, help = MECH_HELP)]
        mech: Option<String>,
    },
    /// Smallest enclosing circle of an instance: the optimal facility and
    /// cost, with the ids on the circle.
    Mec {
        #[arg(long)]
        instance: PathBuf,
    },
    /// OnlyM rewrite of a lottery on a two-agent line instance: mass inside
    /// the interval moves to the endpoints and midpoint, costs unchanged.
    TransformOnlym {
        #[arg(long)]
        instance: PathBuf,
        /// JSON list of [x, prob] pairs.
        #[arg(long)]
        lottery: PathBuf,
    },
    /// Two-agent constraint probe: masses weakly left of x_L and at M after
    /// the OnlyM rewrite, against the bound delta - P(M)/2.
    Probe {
        #[arg(long, help = MECH_HELP)]
        mech: String,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        instance: PathBuf,
    },
}

/// Rendered report and exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

impl Outcome {
    fn new(output: String, passed: bool) -> Self {
        Outcome { output, code: if passed { 0 } else { 1 } }
    }
}

/// Ratios may be infinite; JSON has no infinity, so those become `"inf"`.
fn num(v: f64) -> Value {
    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or_else(|| Value::String(format_sig(v)))
}

fn render(format: Format, json: Value, csv: CsvTable) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(&json).expect("json values serialize") + "\n",
        Format::Csv => csv.to_csv(),
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

pub fn load_instance(path: &Path) -> CliResult<(Instance, Prediction)> {
    let text = read(path)?;
    let file = InstanceFile::from_json(&text)
        .map_err(|e| CliError::Usage(format!("malformed instance {}: {e}", path.display())))?;
    Ok(file.into_parts()?)
}

fn load_phantoms(path: &str) -> CliResult<GcmConfig> {
    let text = read(Path::new(path))?;
    let raw: GcmConfig =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("malformed phantom file {path}: {e}")))?;
    Ok(GcmConfig::new(raw.phantoms)?)
}

fn parse_f64(s: &str, what: &str) -> CliResult<f64> {
    s.trim().parse().map_err(|_| CliError::Usage(format!("invalid {what}: {s:?}")))
}

/// Builds a mechanism from its id. `seed` feeds the perturbed variant.
pub fn parse_mechanism(spec: &str, seed: u64) -> CliResult<Box<dyn Mechanism>> {
    let (name, arg) = match spec.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (spec, None),
    };
    let no_arg = |m: Box<dyn Mechanism>| match arg {
        None => Ok(m),
        Some(_) => Err(CliError::Usage(format!("mechanism {name} takes no argument"))),
    };
    match name {
        "median" => no_arg(Box::new(MedianLine)),
        "lrm" => no_arg(Box::new(Lrm)),
        "minmaxp" => no_arg(Box::new(MinMaxP)),
        "mbb" => no_arg(Box::new(MinimumBoundingBox)),
        "centroid-ext" => no_arg(Box::new(CentroidExtremes)),
        "centroid-all" => no_arg(Box::new(CentroidAll)),
        "broken-weighted" => no_arg(Box::new(BrokenWeightedPoint)),
        "mixed" => {
            let d = parse_f64(arg.ok_or_else(|| CliError::Usage("mixed needs :<delta>".into()))?, "delta")?;
            Ok(Box::new(MixedDelta(MixtureParam::new(d)?)))
        }
        "gcm" => {
            let path = arg.ok_or_else(|| CliError::Usage("gcm needs :<phantom-file>".into()))?;
            Ok(Box::new(Gcm { label: path.to_string(), config: load_phantoms(path)? }))
        }
        "centroid-ext-perturbed" => {
            let epsilon = match arg {
                Some(a) => {
                    let e = parse_f64(a, "epsilon")?;
                    if !(e > 0.0 && e.is_finite()) {
                        return Err(facloc::Error::BadEpsilon(e).into());
                    }
                    Some(e)
                }
                None => None,
            };
            Ok(Box::new(CentroidExtremesPerturbed { epsilon, seed }))
        }
        _ => Err(CliError::Usage(format!("unknown mechanism id {spec:?}"))),
    }
}

fn lottery_json(l: &Lottery) -> Value {
    Value::Array(l.atoms().iter().map(|a| json!({ "point": a.point, "prob": a.prob })).collect())
}

fn prediction_for(mech: &dyn Mechanism, inst: &Instance, file: Prediction) -> CliResult<(Prediction, &'static str)> {
    if file != Prediction::None || mech.prediction_kind() == PredictionKind::None {
        file.validate(inst)?;
        Ok((file, "file"))
    } else {
        Ok((mech.accurate_prediction(inst)?, "accurate"))
    }
}

fn eval(cli: &Cli, mech: &str, path: &Path) -> CliResult<Outcome> {
    let mech = parse_mechanism(mech, cli.seed)?;
    let (inst, file_pred) = load_instance(path)?;
    let (pred, source) = prediction_for(mech.as_ref(), &inst, file_pred)?;
    let l = mech.run(&inst, &pred)?;
    let cost = model::egalitarian_cost(&l, &inst)?;
    let opt = model::optimal_solution(&inst);
    let ratio = model::approx_ratio(&l, &inst)?;
    let json = json!({
        "mechanism": mech.id(),
        "prediction_source": source,
        "prediction": pred,
        "lottery": lottery_json(&l),
        "cost": cost,
        "optimal": { "facility": opt.facility, "cost": opt.cost },
        "ratio": num(ratio),
    });
    let mut csv = CsvTable::new(&["point", "prob", "cost", "ratio"]);
    for row in report::lottery_table(&l).rows {
        csv.push(vec![row[0].clone(), row[1].clone(), format_sig(cost), format_sig(ratio)]);
    }
    Ok(Outcome::new(render(cli.format, json, csv), true))
}

fn audit_cmd(cli: &Cli, mech: &str, path: &Path, grid: usize) -> CliResult<Outcome> {
    let mech = parse_mechanism(mech, cli.seed)?;
    let (inst, file_pred) = load_instance(path)?;
    let (pred, source) = prediction_for(mech.as_ref(), &inst, file_pred)?;
    let spec = GridSpec { resolution: grid, ..GridSpec::default() };
    let reports = audit::audit_truthfulness(mech.as_ref(), &inst, &pred, &spec)?;
    let min = audit::min_margin(&reports);
    let passed = min >= -cli.tol;
    let json = json!({
        "mechanism": mech.id(),
        "prediction_source": source,
        "grid": spec,
        "passed": passed,
        "min_margin": num(min),
        "tolerance": cli.tol,
        "note": audit::GRID_CAVEAT,
        "reports": reports.iter().map(|r| json!({
            "agent": r.agent,
            "best_deviation": r.best_deviation,
            "truthful_cost": r.truthful_cost,
            "deviated_cost": r.deviated_cost,
            "margin": r.margin,
        })).collect::<Vec<_>>(),
    });
    Ok(Outcome::new(render(cli.format, json, report::truth_table(&reports)), passed))
}

fn sampler(mech: &dyn Mechanism, min_agents: usize, max_agents: usize) -> CliResult<RandomInstances> {
    if min_agents == 0 || min_agents > max_agents {
        return Err(CliError::Usage(format!("need 1 <= min-agents <= max-agents, got {min_agents}..{max_agents}")));
    }
    Ok(RandomInstances { dim: mech.dim(), min_agents, max_agents })
}

fn estimate_json(kind: &str, mech: &dyn Mechanism, trials: usize, seed: u64, e: &audit::RatioEstimate) -> Value {
    json!({
        "quantity": kind,
        "mechanism": mech.id(),
        "trials": trials,
        "seed": seed,
        "max_ratio": num(e.max_ratio),
        "evaluations": e.evaluations,
        "worst_instance": e.worst_instance.points(),
        "worst_prediction": e.worst_prediction,
    })
}

fn parse_deltas(s: &str) -> CliResult<Vec<f64>> {
    let deltas = s.split(',').map(|d| parse_f64(d, "delta")).collect::<CliResult<Vec<_>>>()?;
    for &d in &deltas {
        MixtureParam::new(d)?;
    }
    Ok(deltas)
}

fn sweep(cli: &Cli, deltas: &str, trials: usize, plot: Option<&Path>) -> CliResult<Outcome> {
    if trials == 0 {
        return Err(CliError::Usage("trials must be positive".into()));
    }
    let cfg = SweepConfig { trials, seed: cli.seed, adversary: Adversary::default() };
    let points = audit::tradeoff_sweep(&parse_deltas(deltas)?, &cfg)?;
    if let Some(path) = plot {
        report::emit_plot_data(&["delta", "consistency", "robustness"], &report::frontier_rows(&points), path)?;
    }
    let json = json!({ "trials": trials, "seed": cli.seed, "frontier": points });
    Ok(Outcome::new(render(cli.format, json, report::frontier_table(&points)), true))
}

fn witness_cmd(cli: &Cli, name: &str, x_tilde: f64, mech: Option<&str>) -> CliResult<Outcome> {
    let mech = mech.map(|m| parse_mechanism(m, cli.seed)).transpose()?;
    let opts = WitnessOptions { x_tilde, mechanism: mech.as_deref() };
    let r = audit::witness(name, &opts)?;
    let json = json!({
        "status": if r.passed { "PASS" } else { "FAIL" },
        "name": r.name,
        "quantity": num(r.quantity),
        "bound": r.bound,
        "derivation": r.derivation,
        "instances": r.instances.iter().map(Instance::points).collect::<Vec<_>>(),
        "checks": r.checks,
    });
    Ok(Outcome::new(render(cli.format, json, report::witness_table(&r)), r.passed))
}

fn mec(cli: &Cli, path: &Path) -> CliResult<Outcome> {
    let (inst, _) = load_instance(path)?;
    let circle = min_enclosing_circle(inst.points())?;
    let support = model::extreme_ids(&inst, model::DEFAULT_TIE_TOL);
    let json = json!({ "center": circle.center, "radius": circle.radius, "support": support });
    let mut csv = CsvTable::new(&["center", "radius", "support"]);
    let ids = support.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    let center = circle.center.coords().iter().map(|&c| format_sig(c)).collect::<Vec<_>>().join(" ");
    csv.push(vec![center, format_sig(circle.radius), ids]);
    Ok(Outcome::new(render(cli.format, json, csv), true))
}

fn load_lottery(path: &Path) -> CliResult<Lottery> {
    let text = read(path)?;
    let pairs: Vec<(f64, f64)> = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("malformed lottery {} (want [[x, prob], ...]): {e}", path.display())))?;
    Ok(Lottery::from_pairs(pairs.into_iter().map(|(x, p)| (Point::line(x), p)))?)
}

fn transform(cli: &Cli, inst_path: &Path, lottery_path: &Path) -> CliResult<Outcome> {
    let (inst, _) = load_instance(inst_path)?;
    let l = load_lottery(lottery_path)?;
    let d = onlym_decompose(&l, &inst)?;
    let t = onlym_transform(&l, &inst)?;
    let (before, after) = (audit::probe_costs(&l, &inst)?, audit::probe_costs(&t, &inst)?);
    let json = json!({
        "decomposition": d,
        "lottery": lottery_json(&t),
        "costs_before": before,
        "costs_after": after,
    });
    let mut csv = CsvTable::new(&["point", "prob", "cost", "left_cost", "right_cost"]);
    for row in report::lottery_table(&t).rows {
        csv.push(vec![
            row[0].clone(),
            row[1].clone(),
            format_sig(after.total),
            format_sig(after.left),
            format_sig(after.right),
        ]);
    }
    Ok(Outcome::new(render(cli.format, json, csv), true))
}

fn probe(cli: &Cli, mech: &str, delta: f64, path: &Path) -> CliResult<Outcome> {
    let mech = parse_mechanism(mech, cli.seed)?;
    let (inst, _) = load_instance(path)?;
    let r = audit::lower_bound_probe_line(mech.as_ref(), delta, &inst)?;
    let json = serde_json::to_value(&r).expect("probe report serializes");
    Ok(Outcome::new(render(cli.format, json, report::probe_table(&r)), true))
}

pub fn execute(cli: &Cli) -> CliResult<Outcome> {
    match &cli.command {
        Command::Eval { mech, instance } => eval(cli, mech, instance),
        Command::Audit { mech, instance, grid } => audit_cmd(cli, mech, instance, *grid),
        Command::Consistency { mech, trials, min_agents, max_agents } => {
            let m = parse_mechanism(mech, cli.seed)?;
            let s = sampler(m.as_ref(), *min_agents, *max_agents)?;
            let e = audit::estimate_consistency(m.as_ref(), &s, *trials, cli.seed)?;
            let json = estimate_json("consistency", m.as_ref(), *trials, cli.seed, &e);
            Ok(Outcome::new(render(cli.format, json, report::estimate_table("consistency", &m.id(), &e)), true))
        }
        Command::Robustness { mech, trials, min_agents, max_agents, grid } => {
            let m = parse_mechanism(mech, cli.seed)?;
            let s = sampler(m.as_ref(), *min_agents, *max_agents)?;
            let adv = Adversary { facility_grid: *grid, ..Adversary::default() };
            let e = audit::estimate_robustness(m.as_ref(), &s, &adv, *trials, cli.seed)?;
            let json = estimate_json("robustness", m.as_ref(), *trials, cli.seed, &e);
            Ok(Outcome::new(render(cli.format, json, report::estimate_table("robustness", &m.id(), &e)), true))
        }
        Command::Sweep { deltas, trials, emit_plot_data } => sweep(cli, deltas, *trials, emit_plot_data.as_deref()),
        Command::Witness { name, x_tilde, mech } => witness_cmd(cli, name, *x_tilde, mech.as_deref()),
        Command::Mec { instance } => mec(cli, instance),
        Command::TransformOnlym { instance, lottery } => transform(cli, instance, lottery),
        Command::Probe { mech, delta, instance } => probe(cli, mech, *delta, instance),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return Outcome { output: e.render().to_string(), code };
        }
    };
    match execute(&cli) {
        Ok(out) => out,
        Err(e) => Outcome { output: format!("error: {e}\n"), code: e.exit_code() },
    }
}
