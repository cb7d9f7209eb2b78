//! `th`: JSON front end for finite abelian group density computations.
//!
//! Every subcommand reads its arguments as JSON, either from flags or from an
//! `--input` document whose keys match the flag names, and writes one JSON
//! document to standard output. Exit status is 0 on success, 1 when the
//! checked property is false, and 2 on bad input.

mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use th_core::density::{
    annihilating_null_space, best_approximation_error, extract_concentration_set, is_dense_coset, is_dense_rank,
    DensityOptions, DEFAULT_REL_TOL,
};
use th_core::measure::{fibers, fourier_coefficient, is_concentrated_on_transversal, pushforward, Concentration};
use th_core::sampling::{
    aliasing_pair, dft, idft, interpolation_kernel, kernel_reconstruct, reconstruct, sample_on_subgroup, AliasingPair,
};
use th_core::sweep::{equivalence_sweep, SweepConfig};
use th_core::transversal::{
    canonical_transversal, check_transversal, cross_section, find_repeated_coset, merge_transversal, TransversalDefect,
};
use th_core::wire;
use th_core::{annihilator, quotient};

use input::{limits_from_env, parse_flag, Args};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Domain(th_core::Error),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    fn json(&self) -> Value {
        let (kind, message) = match self {
            CliError::Input(m) => ("input", m.clone()),
            CliError::Domain(e) => (e.kind(), e.to_string()),
        };
        json!({ "error": { "kind": kind, "message": message } })
    }
}

impl From<th_core::Error> for CliError {
    fn from(e: th_core::Error) -> Self {
        CliError::Domain(e)
    }
}

type CliResult<T> = Result<T, CliError>;

/// A JSON document and whether the property it reports holds.
struct Outcome {
    value: Value,
    holds: bool,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, holds: true }
    }

    fn check(value: Value, holds: bool) -> Self {
        Outcome { value, holds }
    }
}

#[derive(Parser)]
#[command(name = "th", version, about = "Density, transversals and sampling on finite abelian groups")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Pretty,
}

/// JSON-valued arguments. Each takes inline JSON or `@path`.
#[derive(clap::Args)]
struct Inputs {
    /// JSON object supplying any of the arguments below by name (`-` for stdin).
    #[arg(long)]
    input: Option<String>,
    /// `{"invariant_factors":[n1,..]}`
    #[arg(long)]
    group: Option<String>,
    /// `{"generators":[[..],..]}` or a bare list of generators.
    #[arg(long)]
    subgroup: Option<String>,
    /// Subgroup of the dual; defaults to the annihilator of `--subgroup`.
    #[arg(long)]
    lambda: Option<String>,
    /// `{"atoms":[{"point":[..],"weight":w},..],"kind":"nonnegative"|"complex"}`
    #[arg(long)]
    measure: Option<String>,
    #[arg(long)]
    points: Option<String>,
    /// Partial transversal `S` for merging.
    #[arg(long)]
    partial: Option<String>,
    /// Base transversal `R` for merging.
    #[arg(long)]
    base: Option<String>,
    /// Function values on the support of the measure, in sorted point order.
    #[arg(long)]
    values: Option<String>,
    /// `{"group":..,"values":[..]}` with values in lexicographic element order.
    #[arg(long)]
    signal: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    /// Frequencies allowed in a band-limited signal.
    #[arg(long)]
    spectrum: Option<String>,
    #[arg(long)]
    element: Option<String>,
    /// Second argument of the pairing.
    #[arg(long)]
    at: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Relative singular-value threshold for numerical rank.
    #[arg(long, allow_hyphen_values = true)]
    tol: Option<String>,
}

impl Inputs {
    fn args(&self) -> CliResult<Args> {
        Args::new(
            self.input.as_deref(),
            &[
                ("group", &self.group),
                ("subgroup", &self.subgroup),
                ("lambda", &self.lambda),
                ("measure", &self.measure),
                ("points", &self.points),
                ("partial", &self.partial),
                ("base", &self.base),
                ("values", &self.values),
                ("signal", &self.signal),
                ("samples", &self.samples),
                ("spectrum", &self.spectrum),
                ("element", &self.element),
                ("at", &self.at),
                ("alpha", &self.alpha),
                ("tol", &self.tol),
            ],
        )
    }
}

#[derive(Subcommand)]
enum Command {
    /// Normalize a group and report its order.
    Group(Inputs),
    /// Annihilator of `--subgroup` in the dual group.
    Annihilator(Inputs),
    /// Quotient of the dual by `Λ`.
    Quotient(Inputs),
    #[command(subcommand)]
    Transversal(TransversalCmd),
    #[command(subcommand)]
    Density(DensityCmd),
    #[command(subcommand)]
    Measure(MeasureCmd),
    /// The rotation `⟨element, at⟩`.
    Pairing(Inputs),
    /// Restrict `--signal` to `--subgroup`.
    Sample(Inputs),
    /// Rebuild a signal with spectrum in `--spectrum` from `--samples`.
    Reconstruct {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, value_enum, default_value_t = ReconstructMethod::Unfold)]
        method: ReconstructMethod,
    },
    /// Interpolation kernel for `--subgroup` and `--spectrum`.
    Kernel(Inputs),
    /// Fourier transform of `--signal`.
    Dft {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        inverse: bool,
    },
    #[command(subcommand)]
    Sweep(SweepCmd),
}

#[derive(Subcommand)]
enum TransversalCmd {
    /// Does `--points` meet every `Λ`-coset exactly once?
    Check {
        #[command(flatten)]
        inputs: Inputs,
        /// Only require each coset to be met at most once.
        #[arg(long)]
        partial_only: bool,
    },
    Canonical(Inputs),
    /// Complete the partial transversal `--partial` using `--base`.
    Merge(Inputs),
    /// Cross-section induced by the transversal `--points`.
    Section(Inputs),
}

#[derive(Subcommand)]
enum DensityCmd {
    /// Is `P(H)` dense in `L^α(μ)`?
    Check {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, value_enum, default_value_t = DensityMethod::Both)]
        method: DensityMethod,
    },
    /// Distance in `L^α(μ)` from `--values` to `P(H)`.
    Bestapprox(Inputs),
    /// Recover a set meeting each `Λ`-coset once that carries `μ`.
    Extract(Inputs),
    /// Dimension of the measures on `--points` annihilating `P(H)`.
    Nullspace(Inputs),
}

#[derive(Subcommand)]
enum MeasureCmd {
    /// Pushforward onto canonical coset representatives.
    Push(Inputs),
    /// Restrictions to individual `Λ`-cosets.
    Fibers(Inputs),
    /// Is `μ` carried by a set meeting each `Λ`-coset at most once?
    Concentrated(Inputs),
    /// Fourier coefficient at `--element` in `H`.
    Fourier(Inputs),
}

#[derive(Subcommand)]
enum SweepCmd {
    /// Compare the rank and coset density oracles over a family of instances.
    Equivalence(SweepArgs),
}

#[derive(clap::Args)]
struct SweepArgs {
    /// Full configuration as JSON or `@path`; excludes the other flags.
    #[arg(long, conflicts_with_all = ["family", "max_n", "max_order", "max_factors", "min_support",
        "max_support", "instances", "subgroups", "k", "seed", "tol", "random_weights"])]
    config: Option<String>,
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(long)]
    max_n: Option<u64>,
    #[arg(long)]
    max_order: Option<u64>,
    #[arg(long, default_value_t = 3)]
    max_factors: usize,
    #[arg(long, default_value_t = 1)]
    min_support: usize,
    #[arg(long)]
    max_support: Option<usize>,
    #[arg(long)]
    instances: Option<u64>,
    #[arg(long, value_enum)]
    subgroups: Option<Policy>,
    /// Generators per random subgroup.
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_REL_TOL)]
    tol: f64,
    #[arg(long)]
    random_weights: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Cyclic,
    Product,
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    All,
    Random,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DensityMethod {
    Rank,
    Coset,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReconstructMethod {
    Unfold,
    Kernel,
}

fn options(args: &Args) -> CliResult<DensityOptions> {
    let rel_tol = args.f64_or("tol", DEFAULT_REL_TOL)?;
    if !(rel_tol.is_finite() && rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(CliError::input(format!("`tol` must lie in (0, 1), got {rel_tol}")));
    }
    Ok(DensityOptions {
        rel_tol,
        limits: args.limits,
    })
}

fn defect_json(d: &TransversalDefect) -> Value {
    match d {
        TransversalDefect::Repeated {
            coset_rep,
            first,
            second,
        } => json!({ "kind": "repeated", "coset_rep": coset_rep, "first": first, "second": second }),
        TransversalDefect::Missed { coset_rep } => json!({ "kind": "missed", "coset_rep": coset_rep }),
    }
}

fn aliasing_json(p: &AliasingPair) -> Value {
    json!({
        "coset_rep": p.coset_rep,
        "first_frequency": p.first_frequency,
        "second_frequency": p.second_frequency,
        "first": wire::signal_json(&p.first),
        "second": wire::signal_json(&p.second),
    })
}

fn run_transversal(cmd: TransversalCmd) -> CliResult<Outcome> {
    match cmd {
        TransversalCmd::Check { inputs, partial_only } => {
            let args = inputs.args()?;
            let spec = args.group()?;
            let q = args.quotient(&spec)?;
            let t = wire::parse_point_set(&spec, args.get("points")?)?;
            let repeated = find_repeated_coset(&q, &t);
            let full = check_transversal(&q, &t);
            let defect = if partial_only {
                repeated.as_ref().map(defect_json)
            } else {
                full.as_ref().err().map(defect_json)
            };
            let holds = if partial_only { repeated.is_none() } else { full.is_ok() };
            Ok(Outcome::check(
                json!({
                    "transversal": full.is_ok(),
                    "partial_transversal": repeated.is_none(),
                    "defect": defect,
                }),
                holds,
            ))
        }
        TransversalCmd::Canonical(inputs) => {
            let args = inputs.args()?;
            let spec = args.group()?;
            let q = args.quotient(&spec)?;
            Ok(Outcome::ok(wire::point_set_json(&canonical_transversal(&q, &args.limits)?)))
        }
        TransversalCmd::Merge(inputs) => {
            let args = inputs.args()?;
            let spec = args.group()?;
            let q = args.quotient(&spec)?;
            let s = wire::parse_point_set(&spec, args.get("partial")?)?;
            let r = wire::parse_point_set(&spec, args.get("base")?)?;
            Ok(Outcome::ok(wire::point_set_json(&merge_transversal(&q, &s, &r)?)))
        }
        TransversalCmd::Section(inputs) => {
            let args = inputs.args()?;
            let spec = args.group()?;
            let q = args.quotient(&spec)?;
            let t = wire::parse_point_set(&spec, args.get("points")?)?;
            let section = cross_section(&q, &t)?;
            let entries: Vec<Value> = section
                .entries()
                .map(|(rep, image)| json!({ "coset_rep": rep, "image": image }))
                .collect();
            Ok(Outcome::ok(json!({ "section": entries })))
        }
    }
}

fn run_density(cmd: DensityCmd) -> CliResult<Outcome> {
    match cmd {
        DensityCmd::Check { inputs, method } => {
            let args = inputs.args()?;
            let spec = args.group()?;
            let h = args.subgroup(&spec)?;
            let m = wire::parse_measure(&spec, args.get("measure")?)?;
            let alpha = args.f64_or("alpha", 2.0)?;
            let opts = options(&args)?;
            let rank = || is_dense_rank(&m, &h, alpha, &opts);
            let coset = || -> CliResult<_> {
                let q = quotient(&spec, &annihilator(&spec, &h)?)?;
                Ok(is_dense_coset(&m, &q)?)
            };
            Ok(match method {
                DensityMethod::Rank => {
                    let v = rank()?;
                    Outcome::check(wire::verdict_json(&v), v.dense)
                }
                DensityMethod::Coset => {
                    let v = coset()?;
                    Outcome::check(wire::verdict_json(&v), v.dense)
                }
                DensityMethod::Both => {
                    let r = rank()?;
                    let c = coset()?;
                    let agree = r.dense == c.dense;
                    Outcome::check(
                        json!({
                            "dense": c.dense,
                            "agree": agree,
                            "rank": wire::verdict_json(&r),
                            "coset": wire::verdict_json(&c),
                        }),
                        agree && c.dense,
                    )
                }
            })
        }
        DensityCmd::Bestapprox(inputs) => {
            let args = inputs.args()?;
            let spec = args.group()?;
            let h = args.subgroup(&spec)?;
            let m = wire::parse_measure(&spec, args.get("measure")?)?;
            let f = wire::parse_complex_values(args.get("values")?)?;
            let alpha = args.f64_or("alpha", 2.0)?;
            let out = best_approximation_error(&m, &h, &f, alpha, &options(&args)?)?;
            Ok(Outcome::ok(wire::approx_json(&out)))
        }
        DensityCmd::Extract(inputs) => {
            let args = inputs.args()?;
            let spec = args.group()?;
            let q = args.quotient(&spec)?;
            let m = wire::parse_measure(&spec, args.get("measure")?)?;
            let e = extract_concentration_set(&m, &q, &args.limits)?;
            Ok(Outcome::check(wire::extraction_json(&e), e.is_success()))
        }
        DensityCmd::Nullspace(inputs) => {
            let args = inputs.args()?;
            let spec = args.group()?;
            let h = args.subgroup(&spec)?;
            let q = quotient(&spec, &annihilator(&spec, &h)?)?;
            let support = wire::parse_point_set(&spec, args.get("points")?)?;
            let report = annihilating_null_space(&support, &h, &q, &options(&args)?)?;
            Ok(Outcome::ok(serde_json::to_value(report).expect("plain struct serializes")))
        }
    }
}

fn run_measure(cmd: MeasureCmd) -> CliResult<Outcome> {
    match cmd {
        MeasureCmd::Push(inputs) => {
            let args = inputs.args()?;
            let spec = args.group()?;
            let q = args.quotient(&spec)?;
            let m = wire::parse_measure(&spec, args.get("measure")?)?;
            Ok(Outcome::ok(wire::measure_json(&pushforward(&m, &q)?)))
        }
        MeasureCmd::Fibers(inputs) => {
            let args = inputs.args()?;
            let spec = args.group()?;
            let q = args.quotient(&spec)?;
            let m = wire::parse_measure(&spec, args.get("measure")?)?;
            let list: Vec<Value> = fibers(&m, &q)?
                .iter()
                .map(|(rep, f)| json!({ "coset_rep": rep, "measure": wire::measure_json(f) }))
                .collect();
            Ok(Outcome::ok(json!({ "fibers": list })))
        }
        MeasureCmd::Concentrated(inputs) => {
            let args = inputs.args()?;
            let spec = args.group()?;
            let q = args.quotient(&spec)?;
            let m = wire::parse_measure(&spec, args.get("measure")?)?;
            Ok(match is_concentrated_on_transversal(&m, &q)? {
                Concentration::Concentrated { witness } => Outcome::ok(json!({
                    "concentrated": true,
                    "witness": wire::point_set_json(&witness),
                })),
                Concentration::Violated { coset_rep } => Outcome::check(
                    json!({ "concentrated": false, "violating_coset_rep": coset_rep }),
                    false,
                ),
            })
        }
        MeasureCmd::Fourier(inputs) => {
            let args = inputs.args()?;
            let spec = args.group()?;
            let h = args.subgroup(&spec)?;
            let m = wire::parse_measure(&spec, args.get("measure")?)?;
            let y = wire::parse_element(&spec, args.get("element")?)?;
            let c = fourier_coefficient(&m, &h, &y)?;
            Ok(Outcome::ok(json!({ "value": wire::complex_json(c) })))
        }
    }
}

fn run_sweep(cmd: SweepCmd) -> CliResult<Outcome> {
    let SweepCmd::Equivalence(a) = cmd;
    let config_json = match &a.config {
        Some(raw) => parse_flag("config", raw)?,
        None => {
            let family = match a.family {
                None => return Err(CliError::input("`--family` or `--config` is required")),
                Some(Family::Cyclic) => json!({
                    "kind": "cyclic",
                    "max_n": a.max_n.ok_or_else(|| CliError::input("cyclic sweeps need `--max-n`"))?,
                }),
                Some(Family::Product) => json!({
                    "kind": "product",
                    "max_order": a.max_order.ok_or_else(|| CliError::input("product sweeps need `--max-order`"))?,
                    "max_factors": a.max_factors,
                }),
            };
            let subgroups = match (a.subgroups, a.family) {
                (Some(Policy::All), _) | (None, Some(Family::Cyclic)) => json!({ "policy": "all" }),
                _ => json!({ "policy": "random", "k": a.k }),
            };
            let mut m = Map::new();
            m.insert("family".into(), family);
            m.insert("subgroups".into(), subgroups);
            m.insert("min_support".into(), json!(a.min_support));
            m.insert(
                "max_support".into(),
                json!(a.max_support.ok_or_else(|| CliError::input("`--max-support` is required"))?),
            );
            m.insert("instances".into(), json!(a.instances));
            m.insert("seed".into(), json!(a.seed));
            m.insert("rel_tol".into(), json!(a.tol));
            m.insert("random_weights".into(), json!(a.random_weights));
            Value::Object(m)
        }
    };
    let config: SweepConfig = serde_json::from_value(config_json)
        .map_err(|e| CliError::input(format!("sweep configuration: {e}")))?;
    let report = equivalence_sweep(&config, &limits_from_env()?)?;
    let holds = report.disagreements == 0;
    Ok(Outcome::check(
        serde_json::to_value(&report).expect("plain struct serializes"),
        holds,
    ))
}

fn run(command: Command) -> CliResult<Outcome> {
    match command {
        Command::Group(inputs) => {
            let args = inputs.args()?;
            Ok(Outcome::ok(wire::group_json(&args.group()?)))
        }
        Command::Annihilator(inputs) => {
            let args = inputs.args()?;
            let spec = args.group()?;
            let h = args.subgroup(&spec)?;
            Ok(Outcome::ok(wire::subgroup_json(&annihilator(&spec, &h)?)))
        }
        Command::Quotient(inputs) => {
            let args = inputs.args()?;
            let spec = args.group()?;
            let q = args.quotient(&spec)?;
            Ok(Outcome::ok(wire::quotient_json(&q, &args.limits)?))
        }
        Command::Transversal(cmd) => run_transversal(cmd),
        Command::Density(cmd) => run_density(cmd),
        Command::Measure(cmd) => run_measure(cmd),
        Command::Pairing(inputs) => {
            let args = inputs.args()?;
            let spec = args.group()?;
            let gamma = wire::parse_element(&spec, args.get("element")?)?;
            let x = wire::parse_element(&spec, args.get("at")?)?;
            let r = spec.pairing(&gamma, &x)?;
            Ok(Outcome::ok(json!({
                "rotation": { "num": r.num(), "den": r.den() },
                "value": wire::complex_json(r.to_complex()),
            })))
        }
        Command::Sample(inputs) => {
            let args = inputs.args()?;
            let x = wire::parse_signal(args.get("signal")?, &args.limits)?;
            let h = args.subgroup(x.parent())?;
            let table = sample_on_subgroup(&x, &h, &args.limits)?;
            Ok(Outcome::ok(json!({ "samples": wire::samples_json(&table) })))
        }
        Command::Reconstruct { inputs, method } => {
            let args = inputs.args()?;
            let spec = args.group()?;
            let h = args.subgroup(&spec)?;
            let d = wire::parse_point_set(&spec, args.get("spectrum")?)?;
            if let Some(pair) = aliasing_pair(&h, &d, &args.limits)? {
                return Ok(Outcome::check(
                    json!({ "reconstructed": false, "aliasing": aliasing_json(&pair) }),
                    false,
                ));
            }
            let samples = wire::parse_samples(&h, args.get("samples")?, &args.limits)?;
            let (signal, name) = match method {
                ReconstructMethod::Unfold => (reconstruct(&samples, &h, &d, &args.limits)?, "unfold"),
                ReconstructMethod::Kernel => {
                    let kernel = interpolation_kernel(&h, &d, &args.limits)?;
                    (kernel_reconstruct(&samples, &h, &kernel, &args.limits)?, "kernel")
                }
            };
            Ok(Outcome::ok(json!({
                "reconstructed": true,
                "method": name,
                "signal": wire::signal_json(&signal),
            })))
        }
        Command::Kernel(inputs) => {
            let args = inputs.args()?;
            let spec = args.group()?;
            let h = args.subgroup(&spec)?;
            let d = wire::parse_point_set(&spec, args.get("spectrum")?)?;
            if let Some(pair) = aliasing_pair(&h, &d, &args.limits)? {
                return Ok(Outcome::check(
                    json!({ "valid": false, "aliasing": aliasing_json(&pair) }),
                    false,
                ));
            }
            let kernel = interpolation_kernel(&h, &d, &args.limits)?;
            Ok(Outcome::ok(json!({ "valid": true, "kernel": wire::signal_json(&kernel) })))
        }
        Command::Dft { inputs, inverse } => {
            let args = inputs.args()?;
            let x = wire::parse_signal(args.get("signal")?, &args.limits)?;
            let y = if inverse {
                idft(&x, &args.limits)?
            } else {
                dft(&x, &args.limits)?
            };
            Ok(Outcome::ok(wire::signal_json(&y)))
        }
        Command::Sweep(cmd) => run_sweep(cmd),
    }
}

fn render(value: &Value, format: Format) -> String {
    let mut text = match format {
        Format::Json => serde_json::to_string(value),
        Format::Pretty => serde_json::to_string_pretty(value),
    }
    .expect("JSON values always serialize");
    text.push('\n');
    text
}

fn emit(text: &str, output: Option<&PathBuf>) -> CliResult<()> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let result = run(cli.command).and_then(|out| {
        emit(&render(&out.value, format), cli.output.as_ref())?;
        Ok(out.holds)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            print!("{}", render(&e.json(), format));
            ExitCode::from(2)
        }
    }
}

