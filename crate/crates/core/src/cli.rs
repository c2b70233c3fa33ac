//! Command-line front end. [`run`] parses arguments, executes one subcommand
//! and returns the process exit code.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::axioms::{
    check_inclusion_maximality, corrupt_model, utility_suite_with, run_counterexample_fixtures,
    run_utility_batch_with, AxiomVerdict, FixtureReport,
};
use crate::exact::ExactValue;
use crate::generate::RandomShape;
use crate::scenario::{budget_utilization, cost_decile_vector, parse_pabulib, validate, BudgetingScenario, ValidationPolicy};
use crate::solver::{
    branch_and_bound_with, brute_force, compare_with_linear, Aggregator, SearchLimits, SolveOptions, SolveReport,
    SOLVE_CSV_HEADER,
};
use crate::synergy::{interaction_report, Additivity, SynergyModel, INTERACTION_CSV_HEADER};
use crate::Rational;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_TRUNCATED: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;
pub const EXIT_AXIOM: i32 = 4;

/// Largest instance the `oracle` command will enumerate.
pub const ORACLE_MAX_PROJECTS: usize = 12;

#[derive(Parser, Debug)]
#[command(name = "pb-synergy", version, about = "Participatory budgeting with project interactions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the winning bundle.
    Solve(SolveArgs),
    /// List pairwise (or larger) interaction terms.
    Analyze(AnalyzeArgs),
    /// Compare winners with and without interactions.
    Compare(SolveArgs),
    /// Cost distribution and budget utilization.
    Stats(InputArgs),
    /// Run the utility axiom checks and the monotonicity fixtures.
    Axioms(AxiomArgs),
    /// Run only the monotonicity fixtures.
    Fixtures(FixtureArgs),
    /// Cross-check branch and bound against exhaustive enumeration.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug)]
struct InputArgs {
    /// `.pb` files or directories of them.
    inputs: Vec<PathBuf>,
    /// Interaction order: a positive integer or `unbounded`.
    #[arg(long, default_value = "2")]
    k: Additivity,
    /// Handling of over-budget ballots: strict, drop or truncate.
    #[arg(long, default_value = "drop")]
    policy: ValidationPolicy,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value = "sum")]
    alpha: Aggregator,
    /// Stop after exploring this many nodes.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    nodes: Option<u64>,
    /// Stop after this many milliseconds.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    timeout_ms: Option<u64>,
    /// Include wall time in the output (makes it non-reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Only report sets whose raw term has at least this magnitude (`3`, `1/2` or `0.25`).
    #[arg(long, default_value = "0", value_parser = parse_rational)]
    threshold: Rational,
    /// Largest set size to report, capped by k.
    #[arg(long, default_value_t = 2)]
    max_size: usize,
}

#[derive(Args, Debug)]
struct AxiomArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Seed for generated scenarios and sampled subsets.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Number of generated scenarios when no input is given.
    #[arg(long, default_value_t = 200)]
    count: usize,
    /// Skip the monotonicity fixtures.
    #[arg(long)]
    no_fixtures: bool,
    /// Debugging control: perturb one singleton transform before checking.
    #[arg(long)]
    corrupt_model: bool,
}

#[derive(Args, Debug)]
struct FixtureArgs {
    /// Aggregators to run; all three by default.
    #[arg(long, value_delimiter = ',')]
    alpha: Vec<Aggregator>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Aggregators to check; all three by default.
    #[arg(long, value_delimiter = ',')]
    alpha: Vec<Aggregator>,
}

/// Accepts integers, fractions `p/q` and finite decimals.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let text = text.trim();
    let bad = || format!("not a rational number: `{text}`");
    if let Some((whole, frac)) = text.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = format!("{}{frac}", whole.trim_start_matches('-'));
        let numer: BigInt = digits.parse().map_err(|_| bad())?;
        let denom = num_traits::pow(BigInt::from(10), frac.len());
        let value = Rational::new(numer, denom);
        return Ok(if negative { -value } else { value });
    }
    text.parse::<Rational>().map_err(|_| bad())
}

#[derive(Debug)]
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type CmdResult = Result<i32, InputError>;

struct Instance {
    name: String,
    scenario: BudgetingScenario,
}

fn expand(inputs: &[PathBuf]) -> Result<Vec<PathBuf>, InputError> {
    if inputs.is_empty() {
        return Err(InputError("no input given".into()));
    }
    let mut files = Vec::new();
    for path in inputs {
        if path.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(path)
                .map_err(|e| InputError(format!("{}: {e}", path.display())))?
                .filter_map(|entry| entry.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "pb"))
                .collect();
            if found.is_empty() {
                return Err(InputError(format!("{}: no .pb files", path.display())));
            }
            found.sort();
            files.extend(found);
        } else {
            files.push(path.clone());
        }
    }
    Ok(files)
}

fn load(path: &Path, policy: ValidationPolicy) -> Result<Instance, InputError> {
    let where_ = path.display();
    let text = fs::read_to_string(path).map_err(|e| InputError(format!("{where_}: {e}")))?;
    let raw = parse_pabulib(&text).map_err(|e| InputError(format!("{where_}: {e}")))?;
    let (scenario, report) = validate(raw, policy).map_err(|e| InputError(format!("{where_}: {e}")))?;
    if report.warning_count() > 0 {
        eprintln!(
            "{where_}: {} ballots dropped, {} truncated, {} duplicate approvals",
            report.dropped.len(),
            report.truncated.len(),
            report.duplicate_approvals.len()
        );
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| where_.to_string());
    Ok(Instance { name, scenario })
}

fn load_all(args: &InputArgs) -> Result<Vec<Instance>, InputError> {
    expand(&args.inputs)?
        .iter()
        .map(|p| load(p, args.policy))
        .collect()
}

struct Output {
    sink: Box<dyn Write>,
}

impl Output {
    fn open(out: &Option<PathBuf>) -> Result<Self, InputError> {
        let sink: Box<dyn Write> = match out {
            Some(path) => Box::new(fs::File::create(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?),
            None => Box::new(io::stdout().lock()),
        };
        Ok(Output { sink })
    }

    fn json(&mut self, value: &Value) -> Result<(), InputError> {
        writeln!(self.sink, "{}", serde_json::to_string_pretty(value)?)?;
        Ok(())
    }

    fn csv<I, R>(&mut self, header: &[&str], rows: I) -> Result<(), InputError>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator,
        R::Item: AsRef<[u8]>,
    {
        let mut w = csv::Writer::from_writer(&mut self.sink);
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    fn line(&mut self, text: &str) -> Result<(), InputError> {
        writeln!(self.sink, "{text}")?;
        Ok(())
    }
}

fn options(args: &SolveArgs) -> SolveOptions {
    SolveOptions {
        limits: SearchLimits {
            max_nodes: args.nodes,
            timeout: args.timeout_ms.map(Duration::from_millis),
        },
        ..SolveOptions::default()
    }
}

/// One value or, for several instances, an array.
fn one_or_many(mut values: Vec<Value>) -> Value {
    if values.len() == 1 {
        values.remove(0)
    } else {
        Value::Array(values)
    }
}

fn with_instance(name: &str, value: Value) -> Value {
    let mut map = serde_json::Map::new();
    map.insert("instance".into(), json!(name));
    if let Value::Object(fields) = value {
        map.extend(fields);
    }
    Value::Object(map)
}

fn cmd_solve(args: &SolveArgs) -> CmdResult {
    let instances = load_all(&args.input)?;
    let mut reports = Vec::new();
    for inst in &instances {
        let model = SynergyModel::build(&inst.scenario, args.input.k)?;
        reports.push(branch_and_bound_with(&model, &inst.scenario, args.alpha, options(args))?);
    }
    let mut out = Output::open(&args.input.out)?;
    match args.input.format {
        Format::Json => out.json(&one_or_many(
            instances
                .iter()
                .zip(&reports)
                .map(|(i, r)| with_instance(&i.name, r.to_json(args.timing)))
                .collect(),
        ))?,
        Format::Csv => {
            let mut header = SOLVE_CSV_HEADER.to_vec();
            if args.timing {
                header.push("wall_ms");
            }
            out.csv(
                &header,
                instances.iter().zip(&reports).map(|(i, r)| {
                    let mut row = r.csv_row(&i.name).to_vec();
                    if args.timing {
                        row.push(r.wall_ms().to_string());
                    }
                    row
                }),
            )?
        }
        Format::Text => {
            for (i, r) in instances.iter().zip(&reports) {
                out.line(&text_report(&i.name, r, args.timing))?;
            }
        }
    }
    Ok(if reports.iter().all(|r| r.optimal) {
        EXIT_OK
    } else {
        EXIT_TRUNCATED
    })
}

fn text_report(name: &str, r: &SolveReport, timing: bool) -> String {
    let mut line = format!(
        "{name}: {{{}}} cost {} {} {} ({:.6}) k={} nodes {}{}",
        r.ids.join(", "),
        r.bundle.cost,
        r.aggregator,
        r.score,
        r.score.decimal(),
        r.additivity,
        r.stats.nodes_explored,
        if r.optimal { "" } else { " [stopped early]" }
    );
    if timing {
        line.push_str(&format!(" {:.1} ms", r.wall_ms()));
    }
    line
}

fn cmd_analyze(args: &AnalyzeArgs) -> CmdResult {
    let instances = load_all(&args.input)?;
    let k = args.input.k;
    let note = (k == Additivity::Bounded(1)).then_some("k = 1 leaves no interaction terms");
    let mut results = Vec::new();
    for inst in &instances {
        let model = SynergyModel::build(&inst.scenario, k)?;
        results.push(interaction_report(&model, &inst.scenario, args.max_size, &args.threshold)?);
    }
    let mut out = Output::open(&args.input.out)?;
    match args.input.format {
        Format::Json => out.json(&one_or_many(
            instances
                .iter()
                .zip(&results)
                .map(|(i, records)| {
                    let mut v = json!({
                        "instance": i.name,
                        "k": k.to_string(),
                        "threshold": ExactValue::from(&args.threshold),
                        "interactions": records,
                    });
                    if let Some(note) = note {
                        v["note"] = json!(note);
                    }
                    v
                })
                .collect(),
        ))?,
        Format::Csv => {
            let header: Vec<&str> = ["instance"].into_iter().chain(INTERACTION_CSV_HEADER).collect();
            let rows = instances.iter().zip(&results).flat_map(|(i, records)| {
                records.iter().map(move |r| {
                    std::iter::once(i.name.clone())
                        .chain(r.csv_row())
                        .collect::<Vec<_>>()
                })
            });
            out.csv(&header, rows)?
        }
        Format::Text => {
            for (i, records) in instances.iter().zip(&results) {
                out.line(&format!("{} (k={k}): {} interactions", i.name, records.len()))?;
                if let Some(note) = note {
                    out.line(&format!("  {note}"))?;
                }
                for r in records {
                    out.line(&format!(
                        "  {{{}}} {} transform {} ({:.4}) rate {} expected {}",
                        r.subset.join(", "),
                        r.classification.as_str(),
                        r.transform,
                        r.decimal_transform(),
                        r.rate,
                        r.expected_rate
                    ))?;
                }
            }
        }
    }
    Ok(EXIT_OK)
}

fn mean(values: &[Rational]) -> Rational {
    if values.is_empty() {
        return Rational::zero();
    }
    values.iter().cloned().sum::<Rational>() / Rational::from_integer(BigInt::from(values.len()))
}

fn cmd_compare(args: &SolveArgs) -> CmdResult {
    let instances = load_all(&args.input)?;
    let mut rows = Vec::new();
    for inst in &instances {
        let c = compare_with_linear(&inst.scenario, args.alpha, args.input.k, options(args))?;
        rows.push((inst.name.clone(), c));
    }
    let differing = rows.iter().filter(|(_, c)| c.differs).count();
    let fraction = Rational::new(BigInt::from(differing), BigInt::from(rows.len()));
    let moved = mean(&rows.iter().map(|(_, c)| c.reallocated.clone()).collect::<Vec<_>>());
    let aggregate = (rows.len() > 1).then(|| {
        json!({
            "instances": rows.len(),
            "differing": differing,
            "fraction_differing": ExactValue::from(&fraction),
            "mean_reallocated": ExactValue::from(&moved),
        })
    });
    let mut out = Output::open(&args.input.out)?;
    match args.input.format {
        Format::Json => {
            let list: Vec<Value> = rows
                .iter()
                .map(|(name, c)| with_instance(name, serde_json::to_value(c.row()).expect("row serializes")))
                .collect();
            let mut v = json!({ "rows": list });
            if let Some(a) = aggregate {
                v["aggregate"] = a;
            }
            out.json(&v)?
        }
        Format::Csv => {
            let header = [
                "instance", "aggregator", "k", "linear", "synergy", "differs", "reallocated", "optimal",
            ];
            let mut table: Vec<Vec<String>> = rows
                .iter()
                .map(|(name, c)| {
                    let r = c.row();
                    vec![
                        name.clone(),
                        r.aggregator.to_string(),
                        r.k,
                        r.linear.join(","),
                        r.synergy.join(","),
                        r.differs.to_string(),
                        r.reallocated.to_string(),
                        r.optimal.to_string(),
                    ]
                })
                .collect();
            if aggregate.is_some() {
                table.push(vec![
                    "(aggregate)".into(),
                    args.alpha.to_string(),
                    args.input.k.to_string(),
                    String::new(),
                    String::new(),
                    fraction.to_string(),
                    moved.to_string(),
                    rows.iter().all(|(_, c)| c.row().optimal).to_string(),
                ]);
            }
            out.csv(&header, table)?
        }
        Format::Text => {
            for (name, c) in &rows {
                out.line(&format!(
                    "{name}: k=1 {{{}}} vs k={} {{{}}} {} reallocated {}",
                    c.linear.ids.join(", "),
                    args.input.k,
                    c.synergy.ids.join(", "),
                    if c.differs { "DIFFERENT" } else { "same" },
                    c.reallocated
                ))?;
            }
            if aggregate.is_some() {
                out.line(&format!(
                    "{differing}/{} instances differ; mean reallocated share {moved}",
                    rows.len()
                ))?;
            }
        }
    }
    let optimal = rows.iter().all(|(_, c)| c.linear.optimal && c.synergy.optimal);
    Ok(if optimal { EXIT_OK } else { EXIT_TRUNCATED })
}

fn cmd_stats(args: &InputArgs) -> CmdResult {
    let instances = load_all(args)?;
    let per: Vec<(Vec<Rational>, Rational, Rational)> = instances
        .iter()
        .map(|i| {
            let u = budget_utilization(&i.scenario);
            (cost_decile_vector(&i.scenario), u.mean, u.median)
        })
        .collect();
    let avg_deciles: Vec<Rational> = (0..10)
        .map(|j| mean(&per.iter().map(|p| p.0[j].clone()).collect::<Vec<_>>()))
        .collect();
    let avg_mean = mean(&per.iter().map(|p| p.1.clone()).collect::<Vec<_>>());
    let exact = |v: &[Rational]| v.iter().map(ExactValue::from).collect::<Vec<_>>();
    let mut out = Output::open(&args.out)?;
    match args.format {
        Format::Json => {
            let list: Vec<Value> = instances
                .iter()
                .zip(&per)
                .map(|(i, (d, mean, median))| {
                    json!({
                        "instance": i.name,
                        "projects": i.scenario.num_projects(),
                        "voters": i.scenario.num_voters(),
                        "budget": i.scenario.budget(),
                        "cost_deciles": exact(d),
                        "utilization": { "mean": ExactValue::from(mean), "median": ExactValue::from(median) },
                    })
                })
                .collect();
            out.json(&json!({
                "instances": list,
                "average": { "cost_deciles": exact(&avg_deciles), "mean_utilization": ExactValue::from(&avg_mean) },
            }))?
        }
        Format::Csv => {
            let mut header = vec!["instance".to_string(), "projects".into(), "voters".into(), "budget".into()];
            header.extend((1..=10).map(|j| format!("d{j}")));
            header.extend(["mean_utilization".to_string(), "median_utilization".into()]);
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            let mut table: Vec<Vec<String>> = instances
                .iter()
                .zip(&per)
                .map(|(i, (d, mean, median))| {
                    let mut row = vec![
                        i.name.clone(),
                        i.scenario.num_projects().to_string(),
                        i.scenario.num_voters().to_string(),
                        i.scenario.budget().to_string(),
                    ];
                    row.extend(d.iter().map(|x| x.to_string()));
                    row.extend([mean.to_string(), median.to_string()]);
                    row
                })
                .collect();
            let mut avg = vec!["(average)".to_string(), String::new(), String::new(), String::new()];
            avg.extend(avg_deciles.iter().map(|x| x.to_string()));
            avg.extend([avg_mean.to_string(), String::new()]);
            table.push(avg);
            out.csv(&header, table)?
        }
        Format::Text => {
            let fmt = |v: &[Rational]| {
                v.iter()
                    .map(|x| format!("{:.3}", crate::exact::to_f64(x)))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            for (i, (d, mean, median)) in instances.iter().zip(&per) {
                out.line(&format!(
                    "{}: deciles [{}] utilization mean {mean} median {median}",
                    i.name,
                    fmt(d)
                ))?;
            }
            out.line(&format!("average: deciles [{}] utilization {avg_mean}", fmt(&avg_deciles)))?;
        }
    }
    Ok(EXIT_OK)
}

fn verdict_row(scope: &str, v: &AxiomVerdict) -> Vec<String> {
    let (sets, detail) = match &v.witness {
        Some(w) => (
            w.sets.iter().map(|s| format!("{{{}}}", s.join(","))).collect::<Vec<_>>().join(" "),
            w.detail.clone(),
        ),
        None => (String::new(), String::new()),
    };
    vec![
        scope.to_string(),
        v.axiom.clone(),
        if v.holds { "pass" } else { "FAIL" }.to_string(),
        v.universe.clone(),
        sets,
        detail,
    ]
}

fn fixture_row(f: &FixtureReport) -> Vec<String> {
    let mut row = verdict_row(&format!("fixture {} {}", f.name, f.aggregator), &f.verdict);
    // for fixtures the expected outcome is a violation
    row[2] = if f.exhibits_violation() { "violated (expected)" } else { "NOT VIOLATED" }.to_string();
    row
}

const VERDICT_HEADER: [&str; 6] = ["scope", "axiom", "result", "universe", "witness", "detail"];

fn emit_table(out: &mut Output, format: Format, rows: &[Vec<String>]) -> Result<(), InputError> {
    match format {
        Format::Csv => out.csv(&VERDICT_HEADER, rows.iter().cloned()),
        _ => {
            for r in rows {
                let witness = if r[4].is_empty() { String::new() } else { format!("  {} {}", r[4], r[5]) };
                out.line(&format!("{:<28} {:<28} {:<20} {}{witness}", r[0], r[1], r[2], r[3]))?;
            }
            Ok(())
        }
    }
}

fn cmd_axioms(args: &AxiomArgs) -> CmdResult {
    let k = args.input.k;
    let mut failed = false;
    let mut rows = Vec::new();
    let mut body = serde_json::Map::new();
    body.insert("k".into(), json!(k.to_string()));
    body.insert("seed".into(), json!(args.seed));

    if args.input.inputs.is_empty() {
        let summary = run_utility_batch_with(args.seed, args.count, &RandomShape::default(), k, args.corrupt_model)?;
        failed |= !summary.all_hold();
        for t in &summary.tallies {
            let scope = format!("batch of {}", summary.scenarios);
            let mut row = match &t.example {
                Some((i, v)) => verdict_row(&format!("{scope} (#{i})"), v),
                None => verdict_row(&scope, &AxiomVerdict::pass(&t.axiom, "")),
            };
            row[2] = if t.failed == 0 { "pass".into() } else { format!("FAIL {}/{}", t.failed, t.checked) };
            if t.failed == 0 {
                row[3] = format!("{} scenarios", t.checked);
            }
            rows.push(row);
        }
        body.insert("batch".into(), serde_json::to_value(&summary)?);
    } else {
        let mut list = Vec::new();
        for inst in load_all(&args.input)? {
            let mut model = SynergyModel::build(&inst.scenario, k)?;
            if args.corrupt_model {
                model = corrupt_model(&model);
            }
            let mut verdicts = utility_suite_with(&model, &inst.scenario, args.seed)?;
            for alpha in Aggregator::ALL {
                let mut v = check_inclusion_maximality(&model, &inst.scenario, alpha, SolveOptions::default())?;
                v.axiom = format!("{} ({alpha})", v.axiom);
                verdicts.push(v);
            }
            failed |= verdicts.iter().any(|v| !v.holds);
            rows.extend(verdicts.iter().map(|v| verdict_row(&inst.name, v)));
            list.push(json!({ "instance": inst.name, "verdicts": verdicts }));
        }
        body.insert("instances".into(), Value::Array(list));
    }

    if !args.no_fixtures {
        let fixtures = run_counterexample_fixtures(&Aggregator::ALL)?;
        failed |= fixtures.iter().any(|f| !f.exhibits_violation());
        rows.extend(fixtures.iter().map(fixture_row));
        body.insert("fixtures".into(), serde_json::to_value(&fixtures)?);
    }
    body.insert("pass".into(), json!(!failed));

    let mut out = Output::open(&args.input.out)?;
    match args.input.format {
        Format::Json => out.json(&Value::Object(body))?,
        format => emit_table(&mut out, format, &rows)?,
    }
    Ok(if failed { EXIT_AXIOM } else { EXIT_OK })
}

fn aggregators(list: &[Aggregator]) -> Vec<Aggregator> {
    if list.is_empty() {
        Aggregator::ALL.to_vec()
    } else {
        list.to_vec()
    }
}

fn cmd_fixtures(args: &FixtureArgs) -> CmdResult {
    let fixtures = run_counterexample_fixtures(&aggregators(&args.alpha))?;
    let ok = fixtures.iter().all(FixtureReport::exhibits_violation);
    let mut out = Output::open(&args.out)?;
    match args.format {
        Format::Json => out.json(&json!({ "fixtures": fixtures, "pass": ok }))?,
        format => emit_table(&mut out, format, &fixtures.iter().map(fixture_row).collect::<Vec<_>>())?,
    }
    Ok(if ok { EXIT_OK } else { EXIT_AXIOM })
}

fn cmd_oracle(args: &OracleArgs) -> CmdResult {
    let instances = load_all(&args.input)?;
    for inst in &instances {
        let n = inst.scenario.num_projects();
        if n > ORACLE_MAX_PROJECTS {
            return Err(InputError(format!(
                "{}: {n} projects exceed the oracle cap of {ORACLE_MAX_PROJECTS}",
                inst.name
            )));
        }
    }
    let mut rows = Vec::new();
    for inst in &instances {
        let model = SynergyModel::build(&inst.scenario, args.input.k)?;
        for alpha in aggregators(&args.alpha) {
            let bb = branch_and_bound_with(&model, &inst.scenario, alpha, SolveOptions::default())?;
            let bf = brute_force(&model, &inst.scenario, alpha)?;
            let equal = bb.score == bf.score && bb.bundle == bf.bundle;
            rows.push((inst.name.clone(), alpha, equal, bb, bf));
        }
    }
    let mismatch = rows.iter().any(|r| !r.2);
    let mut out = Output::open(&args.input.out)?;
    match args.input.format {
        Format::Json => {
            let list: Vec<Value> = rows
                .iter()
                .map(|(name, alpha, equal, bb, bf)| {
                    json!({
                        "instance": name,
                        "aggregator": alpha,
                        "k": args.input.k.to_string(),
                        "equal": equal,
                        "branch_and_bound": bb.to_json(false),
                        "brute_force": bf.to_json(false),
                    })
                })
                .collect();
            out.json(&json!({ "checks": list, "pass": !mismatch }))?
        }
        Format::Csv => out.csv(
            &["instance", "aggregator", "k", "equal", "bundle", "score", "bnb_nodes", "brute_nodes"],
            rows.iter().map(|(name, alpha, equal, bb, bf)| {
                vec![
                    name.clone(),
                    alpha.to_string(),
                    args.input.k.to_string(),
                    equal.to_string(),
                    bb.ids.join(","),
                    bb.score.to_string(),
                    bb.stats.nodes_explored.to_string(),
                    bf.stats.nodes_explored.to_string(),
                ]
            }),
        )?,
        Format::Text => {
            for (name, alpha, equal, bb, bf) in &rows {
                out.line(&format!(
                    "{name} {alpha}: {} {{{}}} score {} nodes {} vs {}",
                    if *equal { "equal" } else { "MISMATCH" },
                    bb.ids.join(", "),
                    bb.score,
                    bb.stats.nodes_explored,
                    bf.stats.nodes_explored
                ))?;
                if !equal {
                    out.line(&format!("  brute force {{{}}} score {}", bf.ids.join(", "), bf.score))?;
                }
            }
        }
    }
    Ok(if mismatch { EXIT_MISMATCH } else { EXIT_OK })
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Stats(a) => cmd_stats(a),
        Command::Axioms(a) => cmd_axioms(a),
        Command::Fixtures(a) => cmd_fixtures(a),
        Command::Oracle(a) => cmd_oracle(a),
    };
    match result {
        Ok(code) => code,
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            EXIT_INPUT
        }
    }
}
