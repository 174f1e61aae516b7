//! Command-line front end.
//!
//! Exit codes: 0 all checks pass, 1 at least one verdict or assertion
//! failed, 2 usage errors and refused (too large) instances. JSON goes to
//! `--out` or standard output; a human summary goes to standard error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value as Json};

use peakwise::axioms::{check_axiom, Axiom};
use peakwise::domain::{format_value, parse_value, Grid, PrefDomain};
use peakwise::error::{Error, Result};
use peakwise::report::{alt_json, table_json, verdict_json};
use peakwise::rules::Rule;
use peakwise::scenarios::{run_all, run_scenario, ScenarioReport, SCENARIO_NAMES};
use peakwise::search::{classify_rules, enumerate_rules, SearchSpec};

#[derive(Parser)]
#[command(
    name = "peakwise",
    version,
    about = "Verify axioms and search rule tables for public-good location on a discrete interval"
)]
struct Cli {
    #[command(flatten)]
    common: Common,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Comma-separated grid values in [0,1], e.g. 0,1/2,1
    #[arg(long, global = true, conflicts_with = "grid_uniform")]
    grid: Option<String>,

    /// Evenly spaced grid with this many points
    #[arg(long, global = true)]
    grid_uniform: Option<usize>,

    /// Number of agents
    #[arg(long, global = true)]
    agents: Option<usize>,

    /// Write the JSON report to this file instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Size of the thread pool used by the scans
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Skip the instance-size guard on searches
    #[arg(long, global = true)]
    force: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check axioms against a single rule
    Verify {
        /// One of: target, fd, fstar, table
        #[arg(long)]
        rule: String,

        /// Target value for --rule target
        #[arg(long)]
        x: Option<String>,

        /// Default value for --rule target
        #[arg(long)]
        y: Option<String>,

        /// Outcome file for --rule table: one grid value per line, in
        /// profile-id order
        #[arg(long)]
        file: Option<PathBuf>,

        /// Single axiom to check (default: all of them)
        #[arg(long)]
        axiom: Option<String>,

        /// Cap on coalition size for gsp / wgsp
        #[arg(long)]
        max_coalition: Option<usize>,
    },

    /// Enumerate every outcome table satisfying the given axioms
    Enumerate {
        /// Axioms the table must satisfy (comma-separated)
        #[arg(long, value_delimiter = ',')]
        require: Vec<String>,

        /// Axioms the table must violate (comma-separated)
        #[arg(long, value_delimiter = ',')]
        forbid: Vec<String>,

        /// Stop after this many tables
        #[arg(long)]
        limit: Option<usize>,
    },

    /// Run a canned verification suite
    Scenario {
        /// One of: theorem1, remark3, example1, prop1, appendix_claims
        #[arg(long, conflicts_with = "all")]
        name: Option<String>,

        /// Run every scenario
        #[arg(long)]
        all: bool,
    },

    /// Count admissible preferences (and profiles, with --agents)
    Count,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(workers) = cli.common.workers {
        if workers == 0 {
            return Err(Error::InvalidSearch("--workers must be at least 1".into()));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::InvalidSearch(format!("cannot build worker pool: {e}")))?;
        pool.install(|| execute(&cli))
    } else {
        execute(&cli)
    }
}

fn execute(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Verify {
            rule,
            x,
            y,
            file,
            axiom,
            max_coalition,
        } => {
            let dom = domain(&cli.common)?;
            let agents = agents(&cli.common)?;
            let rule = build_rule(&dom, agents, rule, x, y, file)?;
            verify(cli, &dom, &rule, axiom.as_deref(), *max_coalition)
        }
        Command::Enumerate {
            require,
            forbid,
            limit,
        } => {
            let dom = domain(&cli.common)?;
            let agents = agents(&cli.common)?;
            enumerate(cli, &dom, agents, require, forbid, *limit)
        }
        Command::Scenario { name, all } => scenario(cli, name.as_deref(), *all),
        Command::Count => count(cli),
    }
}

fn domain(common: &Common) -> Result<Arc<PrefDomain>> {
    let grid = match (&common.grid, common.grid_uniform) {
        (Some(spec), None) => Grid::parse(spec)?,
        (None, Some(points)) => Grid::uniform(points)?,
        (None, None) => return Err(Error::InvalidGrid("pass --grid or --grid-uniform".into())),
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    };
    Ok(Arc::new(PrefDomain::new(grid)))
}

fn agents(common: &Common) -> Result<usize> {
    common
        .agents
        .ok_or_else(|| Error::InvalidSearch("pass --agents".into()))
}

fn build_rule(
    dom: &Arc<PrefDomain>,
    agents: usize,
    kind: &str,
    x: &Option<String>,
    y: &Option<String>,
    file: &Option<PathBuf>,
) -> Result<Rule> {
    match kind {
        "target" => {
            let x = x
                .as_deref()
                .ok_or_else(|| Error::InvalidRule("--rule target needs --x <value>".into()))?;
            let y = y
                .as_deref()
                .ok_or_else(|| Error::InvalidRule("--rule target needs --y <value>".into()))?;
            Rule::target_default(
                Arc::clone(dom),
                agents,
                grid_index(dom, x)?,
                grid_index(dom, y)?,
            )
        }
        "fd" => Rule::default_dictator(Arc::clone(dom), agents),
        "fstar" => Rule::wgsp_example(Arc::clone(dom), agents),
        "table" => {
            let path = file
                .as_ref()
                .ok_or_else(|| Error::InvalidRule("--rule table needs --file <path>".into()))?;
            let text = std::fs::read_to_string(path)?;
            let mut outcomes = Vec::new();
            for line in text.lines() {
                let line = line.trim();
                if line.is_empty() {
                    continue;
                }
                outcomes.push(grid_index(dom, line)?);
            }
            Rule::from_table(Arc::clone(dom), agents, outcomes)
        }
        other => Err(Error::InvalidRule(format!(
            "unknown rule `{other}`: expected target, fd, fstar or table"
        ))),
    }
}

fn grid_index(dom: &Arc<PrefDomain>, text: &str) -> Result<usize> {
    let value = parse_value(text)?;
    dom.grid().index_of(value).ok_or_else(|| {
        Error::InvalidRule(format!("value {} is not on the grid", format_value(value)))
    })
}

fn verify(
    cli: &Cli,
    dom: &Arc<PrefDomain>,
    rule: &Rule,
    axiom: Option<&str>,
    max_coalition: Option<usize>,
) -> Result<bool> {
    let axioms: Vec<Axiom> = match axiom {
        Some(name) => vec![name.parse()?],
        None => Axiom::ALL.to_vec(),
    };

    let mut verdicts = Vec::with_capacity(axioms.len());
    for axiom in axioms {
        let started = Instant::now();
        let verdict = check_axiom(rule, axiom, max_coalition);
        let elapsed = started.elapsed();
        let status = if verdict.pass { "pass" } else { "FAIL" };
        eprintln!(
            "{}: {status} ({:.1} ms)",
            axiom.name(),
            elapsed.as_secs_f64() * 1e3
        );
        verdicts.push(verdict_json(
            dom,
            &verdict,
            Some(elapsed.as_millis() as u64),
        ));
    }

    let pass = verdicts.iter().all(|v| v["pass"] == json!(true));
    let report = json!({
        "command": "verify",
        "grid": dom.grid().to_json(),
        "agents": rule.agents(),
        "rule": rule.name(),
        "verdicts": verdicts,
        "pass": pass,
    });
    emit(cli, &report)?;
    Ok(pass)
}

fn enumerate(
    cli: &Cli,
    dom: &Arc<PrefDomain>,
    agents: usize,
    require: &[String],
    forbid: &[String],
    limit: Option<usize>,
) -> Result<bool> {
    let require = parse_axioms(require)?;
    let forbid = parse_axioms(forbid)?;
    let mut spec =
        SearchSpec::new(Arc::clone(dom), agents, require, forbid)?.with_force(cli.common.force);
    if let Some(limit) = limit {
        spec = spec.with_limit(limit);
    }

    let started = Instant::now();
    let rules = enumerate_rules(&spec)?;
    let classification = classify_rules(&rules);
    eprintln!(
        "enumerated {} table(s) in {:.1} ms",
        rules.len(),
        started.elapsed().as_secs_f64() * 1e3
    );

    let rendered: Vec<Json> = rules
        .iter()
        .zip(&classification.recognized)
        .map(|(rule, rec)| {
            json!({
                "outcomes": table_json(rule),
                "target_default": rec.map(|(t, y)| {
                    json!({ "target": alt_json(dom, t), "default": alt_json(dom, y) })
                }),
            })
        })
        .collect();
    let passes: Json = classification
        .axiom_passes
        .iter()
        .map(|(axiom, count)| (axiom.name().to_string(), json!(count)))
        .collect::<serde_json::Map<String, Json>>()
        .into();

    let report = json!({
        "command": "enumerate",
        "grid": dom.grid().to_json(),
        "agents": agents,
        "require": spec.required.iter().map(|a| a.name()).collect::<Vec<_>>(),
        "forbid": spec.forbidden.iter().map(|a| a.name()).collect::<Vec<_>>(),
        "count": rules.len(),
        "rules": rendered,
        "summary": {
            "total": classification.total,
            "target_rules": classification.target_count,
            "other": classification.other_count,
            "axiom_passes": passes,
        },
    });
    emit(cli, &report)?;
    Ok(true)
}

fn parse_axioms(names: &[String]) -> Result<Vec<Axiom>> {
    names.iter().map(|n| n.trim().parse()).collect()
}

fn scenario(cli: &Cli, name: Option<&str>, all: bool) -> Result<bool> {
    let reports: Vec<ScenarioReport> = match (name, all) {
        (Some(name), false) => vec![run_scenario(name)?],
        (None, true) => run_all(),
        (None, false) => {
            return Err(Error::UnknownScenario(format!(
                "pass --name <{}> or --all",
                SCENARIO_NAMES.join("|")
            )))
        }
        (Some(_), true) => unreachable!("clap rejects the combination"),
    };

    for report in &reports {
        let status = if report.pass { "pass" } else { "FAIL" };
        eprintln!(
            "scenario {}: {status} ({} assertions, {:.1} ms)",
            report.scenario,
            report.assertions.len(),
            report.elapsed.as_secs_f64() * 1e3
        );
    }

    let pass = reports.iter().all(|r| r.pass);
    let report = json!({
        "command": "scenario",
        "reports": reports,
        "pass": pass,
    });
    emit(cli, &report)?;
    Ok(pass)
}

fn count(cli: &Cli) -> Result<bool> {
    let dom = domain(&cli.common)?;
    let mut report = serde_json::Map::new();
    report.insert("command".into(), json!("count"));
    report.insert("grid".into(), dom.grid().to_json());
    report.insert("points".into(), json!(dom.grid().len()));
    report.insert("preferences".into(), json!(dom.size()));
    eprintln!(
        "{} preferences on a {}-point grid",
        dom.size(),
        dom.grid().len()
    );
    if let Some(agents) = cli.common.agents {
        let profiles = dom.profile_count(agents);
        report.insert("agents".into(), json!(agents));
        report.insert("profiles".into(), json!(profiles));
        eprintln!("{profiles} profiles with {agents} agents");
    }
    emit(cli, &Json::Object(report))?;
    Ok(true)
}

fn emit(cli: &Cli, report: &Json) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    match &cli.common.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}
