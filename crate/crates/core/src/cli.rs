//! Command-line front end: scenario parsing, subcommands and report output.
//!
//! Exit codes: 0 on success, 1 on parse or validation errors, 2 when the
//! `example1` self-check finds a deviating quantity.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::allocation::{
    allocate_with_profile, capacity_with_profile, classify_regime, lambda, marginal_utility, max_seed_count,
    nash_equilibrium, thresholds, Allocation,
};
use crate::analysis::{sweep, SweepBudget, SweepOptions, SweepParam};
use crate::centrality::{centrality, centrality_sum_identity, star_centralities};
use crate::dynamics::DynamicsOperator;
use crate::error::{Error, Result};
use crate::graph::Network;
use crate::params::{Firm, ModelParams};

/// Tolerance of the `example1` self-check.
pub const SELF_CHECK_TOL: f64 = 1e-9;

// ---------------------------------------------------------------------------
// Number formatting
// ---------------------------------------------------------------------------

fn trim_fraction(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Formats with 12 significant digits, like C's `%.12g`.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        trim_fraction(&format!("{:.*}", (11 - exp) as usize, x))
    } else {
        format!("{}e{exp}", trim_fraction(mantissa))
    }
}

/// Rounds every float in a JSON tree to 12 significant digits.
pub fn round_json(value: &mut Value) {
    match value {
        Value::Number(num) if num.is_f64() => {
            let x = num.as_f64().expect("f64");
            let rounded: f64 = fmt_num(x).parse().unwrap_or(x);
            if let Some(n) = serde_json::Number::from_f64(rounded) {
                *num = n;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

// ---------------------------------------------------------------------------
// Scenario
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    File(PathBuf),
    Star(usize),
    Balanced { n: usize, d: usize },
    KStar { n: usize, k: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Y0Source {
    Zeros,
    File(PathBuf),
}

impl Y0Source {
    fn parse(s: &str) -> Self {
        if s == "zeros" {
            Y0Source::Zeros
        } else {
            Y0Source::File(PathBuf::from(s))
        }
    }
}

/// A fully specified, validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub graph: GraphSource,
    pub params: ModelParams,
    pub y0: Y0Source,
    pub normalize: bool,
}

impl Scenario {
    pub fn network(&self) -> Result<Network> {
        match &self.graph {
            GraphSource::File(path) => Network::parse(&read_text(path)?, self.normalize),
            GraphSource::Star(n) => Network::star(*n),
            GraphSource::Balanced { n, d } => Network::balanced_ring(*n, *d),
            GraphSource::KStar { n, k } => Network::k_star(*n, *k),
        }
    }

    pub fn initial_state(&self, n: usize) -> Result<Vec<f64>> {
        match &self.y0 {
            Y0Source::Zeros => Ok(vec![0.0; n]),
            Y0Source::File(path) => parse_vector(&read_text(path)?, n, &path.display().to_string()),
        }
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::parse(path.display().to_string(), e.to_string()))
}

/// Parses `n` whitespace-separated numbers; `#` starts a comment line.
pub fn parse_vector(text: &str, n: usize, source: &str) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(n);
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.starts_with('#') {
            continue;
        }
        for tok in line.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|_| Error::parse(format!("{source}:{}", line_no + 1), format!("bad number {tok:?}")))?;
            out.push(v);
        }
    }
    if out.len() != n {
        return Err(Error::parse(
            source,
            format!("expected {n} values, found {}", out.len()),
        ));
    }
    Ok(out)
}

/// Scenario file: a flat JSON object whose keys are the long flag names.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ScenarioFile {
    pub graph: Option<PathBuf>,
    pub star: Option<usize>,
    pub balanced: Option<[usize; 2]>,
    pub kstar: Option<[usize; 2]>,
    pub alpha: Option<f64>,
    pub delta: Option<f64>,
    pub qa: Option<f64>,
    pub qb: Option<f64>,
    pub cs: Option<f64>,
    pub cq: Option<f64>,
    pub budget_a: Option<f64>,
    pub budget_b: Option<f64>,
    pub y0: Option<String>,
    pub normalize: Option<bool>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ScenarioArgs {
    /// JSON scenario file; flags given on the command line override its values
    #[arg(long, value_name = "PATH")]
    pub scenario: Option<PathBuf>,
    /// Graph file: `n`, then n rows of n weights
    #[arg(long, value_name = "PATH")]
    pub graph: Option<PathBuf>,
    /// Star graph with agent 1 at the center
    #[arg(long, value_name = "N")]
    pub star: Option<usize>,
    /// Balanced ring: each agent listens to its next D agents
    #[arg(long, num_args = 2, value_names = ["N", "D"])]
    pub balanced: Option<Vec<usize>>,
    /// k-star: K central agents and N - K leaves
    #[arg(long, num_args = 2, value_names = ["N", "K"])]
    pub kstar: Option<Vec<usize>>,
    /// Rescale graph file rows to sum to 1
    #[arg(long)]
    pub normalize: bool,
    /// Weight of an agent's own isolation payoff, in [1/2, 1]
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Discount factor, in [0, 1)
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    /// Quality of product a
    #[arg(long, allow_negative_numbers = true)]
    pub qa: Option<f64>,
    /// Quality of product b
    #[arg(long, allow_negative_numbers = true)]
    pub qb: Option<f64>,
    /// Seeding cost per unit (default 1)
    #[arg(long, allow_negative_numbers = true)]
    pub cs: Option<f64>,
    /// Quality cost per unit (default 1)
    #[arg(long, allow_negative_numbers = true)]
    pub cq: Option<f64>,
    /// Budget of firm a (default 0)
    #[arg(long = "budget-a", allow_negative_numbers = true)]
    pub budget_a: Option<f64>,
    /// Budget of firm b (default 0)
    #[arg(long = "budget-b", allow_negative_numbers = true)]
    pub budget_b: Option<f64>,
    /// Initial centered consumption: a file of n numbers, or `zeros`
    #[arg(long, value_name = "PATH|zeros")]
    pub y0: Option<String>,
}

fn graph_sources(
    graph: &Option<PathBuf>,
    star: Option<usize>,
    balanced: Option<[usize; 2]>,
    kstar: Option<[usize; 2]>,
    origin: &str,
) -> Result<Option<GraphSource>> {
    let mut found = Vec::new();
    if let Some(p) = graph {
        found.push(GraphSource::File(p.clone()));
    }
    if let Some(n) = star {
        found.push(GraphSource::Star(n));
    }
    if let Some([n, d]) = balanced {
        found.push(GraphSource::Balanced { n, d });
    }
    if let Some([n, k]) = kstar {
        found.push(GraphSource::KStar { n, k });
    }
    match found.len() {
        0 => Ok(None),
        1 => Ok(found.pop()),
        _ => Err(Error::parse(
            origin,
            "more than one graph source among graph, star, balanced and kstar",
        )),
    }
}

fn pair(v: &Option<Vec<usize>>) -> Option<[usize; 2]> {
    v.as_ref().map(|v| [v[0], v[1]])
}

/// Merges the scenario file (if any) with the flags and validates the result.
pub fn parse_scenario(args: &ScenarioArgs) -> Result<Scenario> {
    let file = match &args.scenario {
        Some(path) => {
            let origin = path.display().to_string();
            serde_json::from_str::<ScenarioFile>(&read_text(path)?)
                .map_err(|e| Error::parse(format!("{origin}:{}:{}", e.line(), e.column()), e.to_string()))?
        }
        None => ScenarioFile::default(),
    };
    let file_origin = args
        .scenario
        .as_ref()
        .map(|p| p.display().to_string())
        .unwrap_or_default();

    let from_flags = graph_sources(&args.graph, args.star, pair(&args.balanced), pair(&args.kstar), "flags")?;
    let from_file = graph_sources(&file.graph, file.star, file.balanced, file.kstar, &file_origin)?;
    let graph = from_flags
        .or(from_file)
        .ok_or_else(|| Error::parse("flags", "no graph given: use --graph, --star, --balanced or --kstar"))?;

    let required = |flag: Option<f64>, file: Option<f64>, name: &str| {
        flag.or(file)
            .ok_or_else(|| Error::parse(format!("--{name}"), "missing required value"))
    };
    let params = ModelParams {
        alpha: required(args.alpha, file.alpha, "alpha")?,
        delta: required(args.delta, file.delta, "delta")?,
        q_a: required(args.qa, file.qa, "qa")?,
        q_b: required(args.qb, file.qb, "qb")?,
        c_s: args.cs.or(file.cs).unwrap_or(1.0),
        c_q: args.cq.or(file.cq).unwrap_or(1.0),
        budget_a: args.budget_a.or(file.budget_a).unwrap_or(0.0),
        budget_b: args.budget_b.or(file.budget_b).unwrap_or(0.0),
    };
    params.validate()?;

    let y0 = args
        .y0
        .as_deref()
        .or(file.y0.as_deref())
        .map(Y0Source::parse)
        .unwrap_or(Y0Source::Zeros);

    Ok(Scenario {
        graph,
        params,
        y0,
        normalize: args.normalize || file.normalize.unwrap_or(false),
    })
}

// ---------------------------------------------------------------------------
// Command line
// ---------------------------------------------------------------------------

#[derive(Debug, Parser)]
#[command(
    name = "netseed",
    version,
    about = "Seeding versus quality budget allocation on influence networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    /// Output file (default: stdout)
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BudgetMode {
    /// c_s * total demand capacity + 1 at every grid point
    Generous,
    /// the budget given by --budget-a / --budget-b
    Base,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate the best-response consumption dynamics
    Simulate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Number of update steps
        #[arg(long, default_value_t = 50)]
        horizon: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Discounted walk centrality of every agent
    Centrality {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Optimal budget split of each firm
    Allocate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Pair of optimal allocations and the resulting initial state
    Equilibrium {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Seeding capacity of each firm with an unlimited budget
    Capacity {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Optimal seeding over a grid of one parameter
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Parameter to vary: qa, qb, alpha, delta, cs or cq
        #[arg(long, value_parser = parse_sweep_param)]
        param: SweepParam,
        /// Comma-separated, strictly increasing values
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        grid: Vec<f64>,
        /// Firm whose allocation is reported (a or b)
        #[arg(long, default_value = "a", value_parser = parse_firm)]
        firm: Firm,
        #[arg(long = "budget-mode", value_enum, default_value_t = BudgetMode::Generous)]
        budget_mode: BudgetMode,
        /// Evaluate grid points on this many threads
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reproduce the 15-agent worked example and check every value
    Example1 {
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long = "override-alpha", hide = true)]
        override_alpha: Option<f64>,
    },
}

fn parse_sweep_param(s: &str) -> std::result::Result<SweepParam, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_firm(s: &str) -> std::result::Result<Firm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Parses `std::env::args`, runs the command and returns the exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SelfCheck { .. } => 2,
        _ => 1,
    }
}

fn emit(output: &OutputArgs, body: &str) -> Result<()> {
    match &output.out {
        Some(path) => fs::write(path, body).map_err(|e| Error::parse(path.display().to_string(), e.to_string())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::parse("stdout", e.to_string()))
        }
    }
}

fn json_text(mut value: Value) -> String {
    round_json(&mut value);
    let mut s = serde_json::to_string_pretty(&value).expect("serializable");
    s.push('\n');
    s
}

fn csv_text(header: &[String], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// Runs one subcommand, writing its report.
pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Simulate {
            scenario,
            horizon,
            output,
        } => {
            let s = parse_scenario(&scenario)?;
            emit(
                &output,
                &simulate_report(&s, horizon, output.format.unwrap_or(Format::Csv))?,
            )
        }
        Command::Centrality { scenario, output } => {
            let s = parse_scenario(&scenario)?;
            emit(&output, &centrality_report(&s, output.format.unwrap_or(Format::Csv))?)
        }
        Command::Allocate { scenario, output } => {
            let s = parse_scenario(&scenario)?;
            emit(&output, &allocate_report(&s, output.format.unwrap_or(Format::Json))?)
        }
        Command::Equilibrium { scenario, output } => {
            let s = parse_scenario(&scenario)?;
            emit(&output, &equilibrium_report(&s, output.format.unwrap_or(Format::Json))?)
        }
        Command::Capacity { scenario, output } => {
            let s = parse_scenario(&scenario)?;
            emit(&output, &capacity_report(&s, output.format.unwrap_or(Format::Json))?)
        }
        Command::Sweep {
            scenario,
            param,
            grid,
            firm,
            budget_mode,
            jobs,
            output,
        } => {
            let s = parse_scenario(&scenario)?;
            let options = SweepOptions {
                firm,
                budget: match budget_mode {
                    BudgetMode::Generous => SweepBudget::Generous,
                    BudgetMode::Base => SweepBudget::Base,
                },
                jobs,
            };
            emit(
                &output,
                &sweep_report(&s, param, &grid, options, output.format.unwrap_or(Format::Csv))?,
            )
        }
        Command::Example1 { output, override_alpha } => {
            let report = run_example1(override_alpha);
            let body = match output.format.unwrap_or(Format::Json) {
                Format::Json => json_text(serde_json::to_value(&report).expect("serializable")),
                Format::Csv => report.to_csv(),
            };
            emit(&output, &body)?;
            report.verify()
        }
    }
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

pub fn simulate_report(s: &Scenario, horizon: usize, format: Format) -> Result<String> {
    let net = s.network()?;
    let y0 = nalgebra::DVector::from_vec(s.initial_state(net.n())?);
    let op = DynamicsOperator::new(&net, &s.params)?;
    let traj = op.trajectory(&y0, horizon)?;
    Ok(match format {
        Format::Csv => {
            let mut header = vec!["t".to_string()];
            header.extend((1..=net.n()).map(|i| format!("y_{i}")));
            header.push("x_sum_a".into());
            header.push("x_sum_b".into());
            let rows: Vec<Vec<String>> = traj
                .iter()
                .map(|st| {
                    let mut r = vec![st.t.to_string()];
                    r.extend(st.y.iter().map(|&v| fmt_num(v)));
                    r.push(fmt_num(st.total_a()));
                    r.push(fmt_num(st.total_b()));
                    r
                })
                .collect();
            csv_text(&header, &rows)
        }
        Format::Json => json_text(json!({
            "states": traj.iter().map(|st| json!({
                "t": st.t,
                "y": st.y.iter().copied().collect::<Vec<f64>>(),
                "x_sum_a": st.total_a(),
                "x_sum_b": st.total_b(),
            })).collect::<Vec<_>>(),
        })),
    })
}

pub fn centrality_report(s: &Scenario, format: Format) -> Result<String> {
    let net = s.network()?;
    let profile = centrality(&net, &s.params)?;
    let identity = centrality_sum_identity(&s.params, net.n());
    Ok(match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = profile
                .v
                .iter()
                .enumerate()
                .map(|(i, &v)| vec![(i + 1).to_string(), fmt_num(v)])
                .collect();
            let mut text = csv_text(&["agent".into(), "v".into()], &rows);
            text.push_str(&format!(
                "# v_bar={},v_max={},sum={},sum_identity={}\n",
                fmt_num(profile.v_bar),
                fmt_num(profile.v_max),
                fmt_num(profile.sum()),
                fmt_num(identity)
            ));
            text
        }
        Format::Json => json_text(json!({
            "v": profile.v,
            "v_bar": profile.v_bar,
            "v_max": profile.v_max,
            "sum": profile.sum(),
            "sum_identity": identity,
        })),
    })
}

fn seeds_json(alloc: &Allocation) -> Value {
    Value::Array(
        alloc
            .seeded_agents()
            .into_iter()
            .map(|i| json!({ "agent": i + 1, "seed": alloc.seeds[i] }))
            .collect(),
    )
}

fn firm_json(alloc: &Allocation, capacity: f64, regime: &str) -> Value {
    json!({
        "allocation": seeds_json(alloc),
        "seed_amount": alloc.seeded_amount(),
        "dq": alloc.dq,
        "spend_seeding": alloc.spend_seeding,
        "spend_quality": alloc.spend_quality,
        "capacity": capacity,
        "regime": regime,
    })
}

fn allocation_csv(v: &[f64], allocs: &[&Allocation]) -> String {
    let header: Vec<String> = ["firm", "agent", "v", "seed"].iter().map(|s| s.to_string()).collect();
    let mut rows = Vec::new();
    for alloc in allocs {
        for (i, &seed) in alloc.seeds.iter().enumerate() {
            rows.push(vec![
                alloc.firm.to_string(),
                (i + 1).to_string(),
                fmt_num(v[i]),
                fmt_num(seed),
            ]);
        }
    }
    let mut text = csv_text(&header, &rows);
    for alloc in allocs {
        text.push_str(&format!(
            "# firm={},dq={},spend_seeding={},spend_quality={}\n",
            alloc.firm,
            fmt_num(alloc.dq),
            fmt_num(alloc.spend_seeding),
            fmt_num(alloc.spend_quality)
        ));
    }
    text
}

pub fn allocate_report(s: &Scenario, format: Format) -> Result<String> {
    let net = s.network()?;
    let n = net.n();
    let y0 = s.initial_state(n)?;
    let profile = centrality(&net, &s.params)?;
    let a = allocate_with_profile(&profile, &s.params, &y0, Firm::A)?;
    let b = allocate_with_profile(&profile, &s.params, &y0, Firm::B)?;
    if format == Format::Csv {
        return Ok(allocation_csv(&profile.v, &[&a, &b]));
    }
    let cap_a = capacity_with_profile(&profile, &s.params, &y0, Firm::A)?;
    let cap_b = capacity_with_profile(&profile, &s.params, &y0, Firm::B)?;
    let t = thresholds(&s.params, n);
    Ok(json_text(json!({
        "thresholds": { "a": t.a, "b": t.b },
        "lambda": lambda(&s.params, n),
        "firms": {
            "a": firm_json(&a, cap_a.capacity, &classify_regime(&s.params, n, Firm::A)?.to_string()),
            "b": firm_json(&b, cap_b.capacity, &classify_regime(&s.params, n, Firm::B)?.to_string()),
        },
    })))
}

pub fn equilibrium_report(s: &Scenario, format: Format) -> Result<String> {
    let net = s.network()?;
    let n = net.n();
    let y0 = s.initial_state(n)?;
    let eq = nash_equilibrium(&net, &s.params, &y0)?;
    if !eq.contested_agents.is_empty() {
        let agents: Vec<String> = eq.contested_agents.iter().map(|i| (i + 1).to_string()).collect();
        eprintln!("warning: both firms seed agents {}", agents.join(","));
    }
    if !eq.clamped_agents.is_empty() {
        let agents: Vec<String> = eq.clamped_agents.iter().map(|i| (i + 1).to_string()).collect();
        eprintln!("warning: joint initial state clamped at agents {}", agents.join(","));
    }
    let profile = centrality(&net, &s.params)?;
    if format == Format::Csv {
        return Ok(allocation_csv(&profile.v, &[&eq.a, &eq.b]));
    }
    let (du_a, du_b) = marginal_utility(&s.params, &profile.v, &eq.a.seeds, &eq.b.seeds, eq.a.dq, eq.b.dq)?;
    let cap_a = capacity_with_profile(&profile, &s.params, &y0, Firm::A)?;
    let cap_b = capacity_with_profile(&profile, &s.params, &y0, Firm::B)?;
    let t = thresholds(&s.params, n);
    Ok(json_text(json!({
        "thresholds": { "a": t.a, "b": t.b },
        "lambda": lambda(&s.params, n),
        "firms": {
            "a": firm_json(&eq.a, cap_a.capacity, &classify_regime(&s.params, n, Firm::A)?.to_string()),
            "b": firm_json(&eq.b, cap_b.capacity, &classify_regime(&s.params, n, Firm::B)?.to_string()),
        },
        "payoff_change": { "a": du_a, "b": du_b },
        "initial_state": eq.initial_state,
        "contested_agents": eq.contested_agents.iter().map(|i| i + 1).collect::<Vec<_>>(),
        "clamped_agents": eq.clamped_agents.iter().map(|i| i + 1).collect::<Vec<_>>(),
        "decoupled": eq.decoupled,
    })))
}

pub fn capacity_report(s: &Scenario, format: Format) -> Result<String> {
    let net = s.network()?;
    let n = net.n();
    let y0 = s.initial_state(n)?;
    let profile = centrality(&net, &s.params)?;
    let mut firms = Vec::new();
    for firm in [Firm::A, Firm::B] {
        let report = capacity_with_profile(&profile, &s.params, &y0, firm)?;
        let regime = classify_regime(&s.params, n, firm)?;
        let max_count = match max_seed_count(&s.params, n, firm) {
            Ok(k) => k,
            Err(Error::Regime { n, .. }) => n,
            Err(e) => return Err(e),
        };
        firms.push((report, regime, max_count));
    }
    Ok(match format {
        Format::Csv => {
            let header: Vec<String> = [
                "firm",
                "threshold",
                "capacity",
                "seeded_agents",
                "regime",
                "max_seed_count",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect();
            let rows: Vec<Vec<String>> = firms
                .iter()
                .map(|(r, regime, k)| {
                    let agents: Vec<String> = r.seeded_agents.iter().map(|i| (i + 1).to_string()).collect();
                    vec![
                        r.firm.to_string(),
                        fmt_num(r.threshold),
                        fmt_num(r.capacity),
                        agents.join(" "),
                        regime.to_string(),
                        k.to_string(),
                    ]
                })
                .collect();
            csv_text(&header, &rows)
        }
        Format::Json => {
            let mut obj = serde_json::Map::new();
            for (r, regime, k) in &firms {
                obj.insert(
                    r.firm.to_string(),
                    json!({
                        "threshold": r.threshold,
                        "capacity": r.capacity,
                        "seeded_agents": r.seeded_agents.iter().map(|i| i + 1).collect::<Vec<_>>(),
                        "regime": regime.to_string(),
                        "max_seed_count": k,
                    }),
                );
            }
            json_text(Value::Object(obj))
        }
    })
}

pub fn sweep_report(
    s: &Scenario,
    param: SweepParam,
    grid: &[f64],
    options: SweepOptions,
    format: Format,
) -> Result<String> {
    let net = s.network()?;
    let y0 = s.initial_state(net.n())?;
    let result = sweep(&net, &s.params, &y0, param, grid, options)?;
    Ok(match format {
        Format::Csv => {
            let header: Vec<String> = ["param_value", "seed_amount", "seed_spend", "dq", "verdict_running"]
                .iter()
                .map(|s| s.to_string())
                .collect();
            let rows: Vec<Vec<String>> = result
                .running_verdicts()
                .into_iter()
                .enumerate()
                .map(|(i, v)| {
                    vec![
                        fmt_num(result.grid[i]),
                        fmt_num(result.seed_amount[i]),
                        fmt_num(result.seed_spend[i]),
                        fmt_num(result.dq[i]),
                        v.to_string(),
                    ]
                })
                .collect();
            csv_text(&header, &rows)
        }
        Format::Json => {
            let mut value = serde_json::to_value(&result).expect("serializable");
            value["matches_expected"] = Value::Bool(result.matches_expected());
            value["expected"] = serde_json::to_value(param.expected_response()).expect("serializable");
            json_text(value)
        }
    })
}

// ---------------------------------------------------------------------------
// Worked example
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub quantity: String,
    pub expected: f64,
    pub actual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Example1Report {
    pub n: usize,
    pub params: ModelParams,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Example1Report {
    /// First deviating quantity as [`Error::SelfCheck`].
    pub fn verify(&self) -> Result<()> {
        match self.checks.iter().find(|c| !c.pass) {
            Some(c) => Err(Error::SelfCheck {
                quantity: c.quantity.clone(),
                expected: c.expected,
                actual: c.actual,
            }),
            None => Ok(()),
        }
    }

    pub fn to_csv(&self) -> String {
        let header: Vec<String> = ["quantity", "expected", "actual", "pass"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let rows: Vec<Vec<String>> = self
            .checks
            .iter()
            .map(|c| {
                vec![
                    c.quantity.clone(),
                    fmt_num(c.expected),
                    fmt_num(c.actual),
                    c.pass.to_string(),
                ]
            })
            .collect();
        csv_text(&header, &rows)
    }
}

/// Recomputes the 15-agent example from scratch: thresholds, `lambda`, the
/// maximal seed count, the balanced and star centralities (by linear solve)
/// and the seeding capacities of the balanced ring, the star and the
/// extremal k-star.
pub fn run_example1(alpha_override: Option<f64>) -> Example1Report {
    const N: usize = 15;
    let mut params = ModelParams::example1();
    if let Some(alpha) = alpha_override {
        params.alpha = alpha;
    }
    let y0 = vec![0.0; N];
    let t = thresholds(&params, N);
    let k = max_seed_count(&params, N, Firm::A);

    let capacity_of = |net: Result<Network>| -> f64 {
        net.and_then(|net| crate::allocation::seeding_capacity(&net, &params, &y0, Firm::A))
            .map(|r| r.capacity)
            .unwrap_or(f64::NAN)
    };
    let solve_v = |net: Result<Network>, pick: fn(&crate::CentralityProfile) -> f64| -> f64 {
        net.and_then(|net| centrality(&net, &params))
            .map(|p| pick(&p))
            .unwrap_or(f64::NAN)
    };

    let values = [
        ("threshold_a", 2.5, t.a),
        ("threshold_b", 2.5, t.b),
        ("lambda", 5.0, lambda(&params, N)),
        ("max_seed_count", 3.0, k.as_ref().map(|&k| k as f64).unwrap_or(f64::NAN)),
        ("v_bar", 4.0 / 3.0, solve_v(Network::balanced_ring(N, 2), |p| p.v_bar)),
        ("v_h", 4.8, solve_v(Network::star(N), |p| p.v_max)),
        (
            "v_h_closed_form",
            4.8,
            star_centralities(N, &params).map(|(h, _)| h).unwrap_or(f64::NAN),
        ),
        ("capacity_balanced", 0.0, capacity_of(Network::balanced_ring(N, 2))),
        ("capacity_star", 0.5, capacity_of(Network::star(N))),
        (
            "capacity_k_star",
            1.5,
            match &k {
                Ok(k) if *k >= 1 => capacity_of(Network::k_star(N, *k)),
                _ => f64::NAN,
            },
        ),
    ];
    let checks: Vec<Check> = values
        .iter()
        .map(|&(quantity, expected, actual)| Check {
            quantity: quantity.to_string(),
            expected,
            actual,
            pass: (actual - expected).abs() <= SELF_CHECK_TOL,
        })
        .collect();
    let pass = checks.iter().all(|c| c.pass);
    Example1Report {
        n: N,
        params,
        checks,
        pass,
    }
}
