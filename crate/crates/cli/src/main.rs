mod demo;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use effectus::harness::{run_suite, Corruption, InstanceId, Law, LawReport, SuiteConfig, SuiteReport, DEFAULT_SEED};

/// Checks the quotient and comprehension laws of effectus instances.
#[derive(Parser, Debug)]
#[command(name = "effectus", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Walk through one instance on a canned example.
    Demo { scenario: Scenario },
    /// Run the law-checking suite.
    Check(CheckArgs),
    /// List instances and the laws checked on each.
    ListInstances,
    /// Print the statement of a law.
    Explain {
        #[arg(value_parser = parse_law)]
        law: Law,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Scenario {
    Sets,
    Powerset,
    Dist,
    Ring,
    Vn,
    Linear,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Human,
    Json,
}

#[derive(clap::Args, Debug)]
struct CheckArgs {
    /// Restrict to these instances (repeatable); all by default.
    #[arg(long = "instance", value_parser = parse_instance)]
    instances: Vec<InstanceId>,
    /// Restrict to these laws (repeatable); all applicable ones by default.
    #[arg(long = "law", value_parser = parse_law)]
    laws: Vec<Law>,
    #[arg(long, env = "EFFECTUS_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Sampled cases per law; defaults to 500 for dist and 200 elsewhere.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    cases: Option<u64>,
    /// Equality tolerance for the float-backed instances.
    #[arg(long, value_parser = parse_tolerance)]
    tolerance: Option<f64>,
    /// Write the JSON report to this file.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Break one transpose formula, to confirm the laws catch it.
    #[arg(long, value_parser = parse_corruption)]
    corrupt: Option<Corruption>,
    /// Re-run a single sampled case from a witness's case seed.
    #[arg(long)]
    replay: Option<u64>,
}

fn parse_instance(s: &str) -> Result<InstanceId, String> {
    s.parse().map_err(|e: effectus::Error| e.to_string())
}

fn parse_law(s: &str) -> Result<Law, String> {
    s.parse().map_err(|e: effectus::Error| e.to_string())
}

fn parse_corruption(s: &str) -> Result<Corruption, String> {
    s.parse().map_err(|e: effectus::Error| e.to_string())
}

fn parse_tolerance(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t > 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err("tolerance must be a positive number".into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Demo { scenario } => {
            let text = match scenario {
                Scenario::Sets => demo::sets(),
                Scenario::Powerset => demo::powerset(),
                Scenario::Dist => demo::dist(),
                Scenario::Ring => demo::ring(),
                Scenario::Vn => demo::vn(),
                Scenario::Linear => demo::linear(),
            }?;
            print!("{text}");
            Ok(ExitCode::SUCCESS)
        }
        Command::ListInstances => {
            for i in InstanceId::ALL {
                println!("{:<9} {}", i.name(), i.description());
                let laws: Vec<&str> = i.laws().iter().map(|l| l.name()).collect();
                println!("{:<9} laws: {}", "", laws.join(", "));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Explain { law } => {
            println!("{}: {}", law.name(), law.statement());
            let on: Vec<&str> = InstanceId::ALL
                .into_iter()
                .filter(|i| i.laws().contains(&law))
                .map(|i| i.name())
                .collect();
            println!("checked on: {}", on.join(", "));
            Ok(ExitCode::SUCCESS)
        }
        Command::Check(args) => check(args),
    }
}

fn check(args: CheckArgs) -> anyhow::Result<ExitCode> {
    let config = SuiteConfig {
        instances: args.instances.clone(),
        laws: args.laws.clone(),
        seed: args.seed,
        cases: args.cases.map(|n| n as usize),
        tolerance: args.tolerance,
        corrupt: args.corrupt,
        replay: args.replay,
        ..SuiteConfig::default()
    };
    let report = run_suite(&config);
    let json = serde_json::to_string_pretty(&report)?;
    if let Some(path) = &args.output {
        fs::write(path, format!("{json}\n")).with_context(|| format!("writing {}", path.display()))?;
    }
    match args.format {
        Format::Json if args.output.is_none() => println!("{json}"),
        Format::Json => {}
        Format::Human => print_human(&report, &args),
    }
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn print_human(report: &SuiteReport, args: &CheckArgs) {
    for r in &report.reports {
        println!(
            "{} {:<9} {:<25} cases={:<6} failures={:<5} max_residual={:.3e}",
            if r.passed() { "PASS" } else { "FAIL" },
            r.instance,
            r.law,
            r.cases,
            r.failures,
            r.max_residual
        );
        for w in &r.witnesses {
            println!("    case {} failed `{}`", w.case, w.check);
            println!("      inputs:   {}", w.inputs);
            println!("      observed: {}", w.observed);
            println!("      expected: {}", w.expected);
            if let Some(s) = w.case_seed {
                println!("      replay:   {}", replay_command(r, s, args));
            }
        }
    }
    println!(
        "{}: {} laws, {} cases, {} failures (seed {})",
        if report.passed() { "ok" } else { "FAILED" },
        report.reports.len(),
        report.cases,
        report.failures,
        report.seed
    );
}

fn replay_command(r: &LawReport, case_seed: u64, args: &CheckArgs) -> String {
    let mut cmd = format!("effectus check --instance {} --law {} --replay {case_seed}", r.instance, r.law);
    if let Some(t) = args.tolerance {
        cmd.push_str(&format!(" --tolerance {t:e}"));
    }
    if let Some(c) = args.corrupt {
        cmd.push_str(&format!(" --corrupt {}", c.name()));
    }
    cmd
}
