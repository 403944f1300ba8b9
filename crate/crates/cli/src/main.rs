use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use plancherel_core::experiments::{self, RunOptions};
use plancherel_core::permutation::{CycleType, Permutation};
use plancherel_core::seminormal::SeminormalForm;

#[derive(Parser, Debug)]
#[command(name = "plancherel", version, about = "Experiments on seminormal matrices under the Plancherel measure")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed of the sample generator; always written to the output.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Number of Monte Carlo samples (each command has its own default).
    #[arg(long, global = true)]
    samples: Option<usize>,

    /// Worker threads; 0 uses all cores. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Form {
    Rational,
    Orthogonal,
}

impl From<Form> for SeminormalForm {
    fn from(f: Form) -> Self {
        match f {
            Form::Rational => SeminormalForm::Rational,
            Form::Orthogonal => SeminormalForm::Orthogonal,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Exact,
    Mc,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
enum Command {
    /// Exact (m, v) constants for every permutation of S_r.
    MvTable {
        #[arg(long, default_value_t = 4)]
        r: usize,
    },
    /// Fluctuations of normalized characters, n^{wt/2} chi-hat_rho.
    CltCharacters {
        /// Sizes, e.g. `400` or `100,400`.
        #[arg(long, value_delimiter = ',', default_value = "400")]
        n: Vec<String>,
        /// Cycle types such as `2`, `3` or `2,2`; repeat the flag for several.
        #[arg(long, default_values = ["2", "3"])]
        rho: Vec<String>,
    },
    /// Fluctuations of the normalized total sum, n (TS - m).
    CltTotalSum {
        #[arg(long, value_delimiter = ',', default_value = "400")]
        n: Vec<String>,
        /// Permutations in cycle notation; repeat the flag for several.
        #[arg(long, default_values = ["(1,2)"])]
        sigma: Vec<String>,
        #[arg(long, value_enum, default_value_t = Form::Rational)]
        form: Form,
    },
    /// Main terms of the partial trace and partial sum.
    MainTerm {
        #[arg(long, value_delimiter = ',', default_value = "400")]
        n: Vec<String>,
        #[arg(long, default_values = ["(1,2)"])]
        sigma: Vec<String>,
        /// Cut points in [0, 1], as decimals or fractions.
        #[arg(long, value_delimiter = ',', default_value = "1/2")]
        u: Vec<String>,
        #[arg(long, value_enum, default_value_t = Form::Rational)]
        form: Form,
    },
    /// Law of large numbers for the partial sum.
    PartialSumLln {
        #[arg(long, value_delimiter = ',', default_value = "20,30,40")]
        n: Vec<String>,
        #[arg(long, default_values = ["(1,2)", "id"])]
        sigma: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "1/2")]
        u: Vec<String>,
        #[arg(long, value_enum, default_value_t = Form::Rational)]
        form: Form,
    },
    /// Probability that some s-step removal keeps a dimension ratio above n^{-alpha s}.
    Conjecture {
        /// Sizes; ranges like `7..40` are inclusive.
        #[arg(long, value_delimiter = ',', default_value = "7..40")]
        n: Vec<String>,
        #[arg(long, default_value_t = 0.2)]
        alpha: f64,
        #[arg(long, default_value_t = 1)]
        s: usize,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
    },
    /// Distance between the co-transition distribution and the semicircle law.
    Cotransition {
        #[arg(long, value_delimiter = ',', default_value = "100,400,2000")]
        n: Vec<String>,
    },
    /// Finite identity suites on every partition up to size n.
    Identities {
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
}

fn parse_sizes(tokens: &[String]) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for t in tokens {
        let t = t.trim();
        if let Some((a, b)) = t.split_once("..") {
            let (a, b): (usize, usize) = (a.parse()?, b.trim_start_matches('=').parse()?);
            out.extend(a..=b);
        } else {
            out.push(t.parse().with_context(|| format!("bad size {t:?}"))?);
        }
    }
    Ok(out)
}

fn parse_unit(t: &str) -> Result<f64> {
    let t = t.trim();
    let u = match t.split_once('/') {
        Some((a, b)) => a.trim().parse::<f64>()? / b.trim().parse::<f64>()?,
        None => t.parse::<f64>()?,
    };
    if !(0.0..=1.0).contains(&u) {
        bail!("u = {t} is outside [0, 1]");
    }
    Ok(u)
}

fn parse_perms(tokens: &[String]) -> Result<Vec<Permutation>> {
    tokens
        .iter()
        .map(|t| t.parse::<Permutation>().with_context(|| format!("bad permutation {t:?}")))
        .collect()
}

fn to_rows<T: Serialize>(rows: &[T]) -> Result<Vec<Value>> {
    rows.iter().map(|r| Ok(serde_json::to_value(r)?)).collect()
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn write_output(cli: &Cli, rows: &[Value]) -> Result<()> {
    let mut sink: Box<dyn Write> = match &cli.out {
        Some(p) => Box::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    match cli.format {
        Format::Json => {
            let doc = json!({ "config": config_value(cli)?, "results": rows, "seed": cli.seed });
            serde_json::to_writer_pretty(&mut sink, &doc)?;
            writeln!(sink)?;
        }
        Format::Csv => {
            writeln!(sink, "# seed={}", cli.seed)?;
            let mut w = csv::Writer::from_writer(sink);
            if let Some(Value::Object(first)) = rows.first() {
                w.write_record(first.keys())?;
                for row in rows {
                    let obj = row.as_object().context("rows are objects")?;
                    w.write_record(first.keys().map(|k| cell(obj.get(k).unwrap_or(&Value::Null))))?;
                }
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn config_value(cli: &Cli) -> Result<Value> {
    let mut cfg = serde_json::to_value(&cli.command)?;
    let obj = cfg.as_object_mut().context("config is an object")?;
    obj.insert("samples".into(), json!(cli.samples));
    obj.insert("seed".into(), json!(cli.seed));
    obj.insert("jobs".into(), json!(cli.jobs));
    obj.insert("format".into(), serde_json::to_value(cli.format)?);
    obj.insert("out".into(), json!(cli.out.as_ref().map(|p| p.display().to_string())));
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(Vec<Value>, bool)> {
    let opts = |default: usize| RunOptions { samples: cli.samples.unwrap_or(default), seed: cli.seed, jobs: cli.jobs };
    let mut ok = true;
    let rows = match &cli.command {
        Command::MvTable { r } => to_rows(&experiments::mv_table(*r)?)?,
        Command::CltCharacters { n, rho } => {
            let rhos = rho
                .iter()
                .map(|t| t.parse::<CycleType>().with_context(|| format!("bad cycle type {t:?}")))
                .collect::<Result<Vec<_>>>()?;
            let mut rows = Vec::new();
            for n in parse_sizes(n)? {
                rows.extend(to_rows(&experiments::clt_characters(n, &rhos, &opts(2000))?)?);
            }
            rows
        }
        Command::CltTotalSum { n, sigma, form } => {
            let sigmas = parse_perms(sigma)?;
            let mut rows = Vec::new();
            for n in parse_sizes(n)? {
                rows.extend(to_rows(&experiments::clt_total_sum(n, &sigmas, (*form).into(), &opts(2000))?)?);
            }
            rows
        }
        Command::MainTerm { n, sigma, u, form } => {
            let cases = cross(&parse_perms(sigma)?, u)?;
            let mut rows = Vec::new();
            for n in parse_sizes(n)? {
                rows.extend(to_rows(&experiments::main_term_experiment(n, &cases, (*form).into(), &opts(2000))?)?);
            }
            rows
        }
        Command::PartialSumLln { n, sigma, u, form } => {
            let cases = cross(&parse_perms(sigma)?, u)?;
            to_rows(&experiments::partial_sum_lln(&parse_sizes(n)?, &cases, (*form).into(), &opts(500))?)?
        }
        Command::Conjecture { n, alpha, s, mode } => {
            let mut rows = Vec::new();
            for n in parse_sizes(n)? {
                let row = match mode {
                    Mode::Exact => experiments::conjecture_probe_exact(n, *alpha, *s)?,
                    Mode::Mc => experiments::conjecture_probe_mc(n, *alpha, *s, &opts(2000))?,
                };
                rows.push(serde_json::to_value(row)?);
            }
            rows
        }
        Command::Cotransition { n } => {
            to_rows(&experiments::cotransition_semicircle(&parse_sizes(n)?, &opts(50))?)?
        }
        Command::Identities { n } => {
            let checks = experiments::identity_suite(*n, cli.seed)?;
            ok = checks.iter().all(|c| c.passed());
            let mut rows = Vec::new();
            for c in &checks {
                let mut v = serde_json::to_value(c)?;
                v["passed"] = json!(c.passed());
                rows.push(v);
            }
            rows
        }
    };
    Ok((rows, ok))
}

fn cross(sigmas: &[Permutation], us: &[String]) -> Result<Vec<(Permutation, f64)>> {
    let us = us.iter().map(|t| parse_unit(t)).collect::<Result<Vec<_>>>()?;
    Ok(sigmas.iter().flat_map(|s| us.iter().map(move |&u| (s.clone(), u))).collect())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|(rows, ok)| write_output(&cli, &rows).map(|_| ok));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("some identities failed");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
