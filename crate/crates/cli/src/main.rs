use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use lr_honeycomb::dual::{flow_from_records, flow_records};
use lr_honeycomb::honeycomb::{
    canonical_honey_flow, honeycomb_from_filling, honeycomb_type, honeycombs_equal, overlay, overlay_flow, render_svg,
    replay_trace_on_flow, Honeycomb,
};
use lr_honeycomb::{canonical_flow, check_flow, count_fillings, count_hives, enumerate_fillings, sum_fillings, Hive, LrFilling, Partition};

/// Littlewood-Richardson fillings, hives, flows and honeycombs.
#[derive(Parser)]
#[command(name = "lrsum", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a filling (or a hive, flow or honeycomb) and report failures.
    Validate {
        file: PathBuf,
        #[arg(long, conflicts_with_all = ["flow", "honeycomb"])]
        hive: bool,
        #[arg(long, conflicts_with = "honeycomb")]
        flow: bool,
        #[arg(long)]
        honeycomb: bool,
    },
    /// Count LR(mu, nu; lambda).
    Count {
        #[command(flatten)]
        triple: Triple,
        #[arg(long, value_enum, default_value_t = Oracle::Filling)]
        oracle: Oracle,
    },
    /// Write every filling of a triple as JSON into a directory.
    Enumerate {
        #[command(flatten)]
        triple: Triple,
        #[arg(long)]
        out: PathBuf,
    },
    /// Filling JSON to hive JSON.
    ToHive { file: PathBuf },
    /// Hive JSON to filling JSON.
    FromHive { file: PathBuf },
    /// Sum two fillings.
    Sum {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Canonical flow of a filling as JSON.
    Flow { file: PathBuf },
    /// Honeycomb of a filling as JSON, optionally drawn with its flow.
    Honeycomb {
        file: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Sum two fillings and compare against the overlay of their honeycombs.
    OverlayCheck { a: PathBuf, b: PathBuf },
}

#[derive(clap::Args)]
struct Triple {
    #[arg(long, value_parser = parse_partition)]
    mu: Partition,
    #[arg(long, value_parser = parse_partition)]
    nu: Partition,
    #[arg(long, value_parser = parse_partition)]
    lambda: Partition,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Oracle {
    Filling,
    Hive,
    Both,
}

fn parse_partition(s: &str) -> Result<Partition, String> {
    let parts = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    Partition::new(parts).map_err(|e| e.to_string())
}

/// An error carrying the exit status it should produce.
#[derive(Debug)]
struct Exit {
    code: u8,
    err: anyhow::Error,
}

trait Code<T> {
    fn code(self, code: u8) -> Result<T, Exit>;
}

impl<T, E: Into<anyhow::Error>> Code<T> for Result<T, E> {
    fn code(self, code: u8) -> Result<T, Exit> {
        self.map_err(|e| Exit { code, err: e.into() })
    }
}

const INVALID: u8 = 1;
const DISAGREE: u8 = 2;
const INTERNAL: u8 = 3;

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Exit> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).code(INVALID)?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display())).code(INVALID)
}

fn read_filling(path: &Path) -> Result<LrFilling, Exit> {
    let f: LrFilling = read_json(path)?;
    let report = f.validate();
    if !report.ok() {
        return Err(Exit { code: INVALID, err: anyhow!("{}: invalid LR filling: {report}", path.display()) });
    }
    Ok(f)
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Exit> {
    let mut s = serde_json::to_string_pretty(value).code(INTERNAL)?;
    s.push('\n');
    Ok(s)
}

fn write(path: &Path, contents: &str) -> Result<(), Exit> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display())).code(INTERNAL)
}

fn type_line(mu: &Partition, nu: &Partition, lambda: &Partition) -> String {
    format!("{mu} {nu} {lambda}")
}

fn run(cli: Cli) -> Result<(), Exit> {
    match cli.command {
        Command::Validate { file, hive, flow, honeycomb } => {
            if hive {
                let h: Hive = read_json(&file)?;
                let report = h.validate();
                println!("{report}");
                if !report.ok() {
                    return Err(Exit { code: INVALID, err: anyhow!("invalid hive") });
                }
            } else if flow {
                let records: Vec<lr_honeycomb::dual::FlowRecord> = read_json(&file)?;
                let (g, fl) = flow_from_records(&records).code(INVALID)?;
                let report = check_flow(&g, &fl);
                if !report.ok() {
                    println!("{:?}", report.failures);
                    return Err(Exit { code: INVALID, err: anyhow!("flow breaks its constraints") });
                }
                println!("ok");
            } else if honeycomb {
                let h: Honeycomb = read_json(&file)?;
                h.check().code(INVALID)?;
                let (mu, nu, lambda) = honeycomb_type(&h).code(INVALID)?;
                println!("ok {}", type_line(&mu, &nu, &lambda));
            } else {
                let f: LrFilling = read_json(&file)?;
                let report = f.validate();
                println!("{report}");
                if !report.ok() {
                    return Err(Exit { code: INVALID, err: anyhow!("invalid LR filling") });
                }
            }
        }
        Command::Count { triple: Triple { mu, nu, lambda }, oracle } => match oracle {
            Oracle::Filling => println!("{}", count_fillings(&mu, &nu, &lambda)),
            Oracle::Hive => println!("{}", count_hives(&mu, &nu, &lambda)),
            Oracle::Both => {
                let (a, b) = std::thread::scope(|s| {
                    let h = s.spawn(|| count_hives(&mu, &nu, &lambda));
                    let a = count_fillings(&mu, &nu, &lambda);
                    (a, h.join())
                });
                let b = b.map_err(|_| Exit { code: INTERNAL, err: anyhow!("hive count panicked") })?;
                println!("{a} {b}");
                if a != b {
                    return Err(Exit { code: DISAGREE, err: anyhow!("fillings give {a}, hives give {b}") });
                }
            }
        },
        Command::Enumerate { triple: Triple { mu, nu, lambda }, out } => {
            let all = enumerate_fillings(&mu, &nu, &lambda);
            fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display())).code(INTERNAL)?;
            let width = all.len().to_string().len().max(4);
            for (n, f) in all.iter().enumerate() {
                let path = out.join(format!("filling-{:0width$}.json", n + 1));
                write(&path, &to_json(f)?)?;
            }
            println!("{}", all.len());
        }
        Command::ToHive { file } => {
            let f = read_filling(&file)?;
            print!("{}", to_json(&Hive::from_filling(&f).code(INTERNAL)?)?);
        }
        Command::FromHive { file } => {
            let h: Hive = read_json(&file)?;
            let report = h.validate();
            if !report.ok() {
                return Err(Exit { code: INVALID, err: anyhow!("invalid hive: {report}") });
            }
            print!("{}", to_json(&h.to_filling().code(INVALID)?)?);
        }
        Command::Sum { a, b, trace, svg } => {
            let (f1, f2) = (read_filling(&a)?, read_filling(&b)?);
            let (sum, steps) = sum_fillings(&f1, &f2).code(INTERNAL)?;
            print!("{}", to_json(&sum)?);
            eprintln!("type {}", type_line(sum.mu(), sum.nu(), sum.lambda()));
            if let Some(path) = trace {
                write(&path, &to_json(&steps)?)?;
            }
            if let Some(path) = svg {
                let (g, fl) = canonical_flow(&sum).code(INTERNAL)?;
                let h = Honeycomb::from_graph(&g);
                write(&path, &render_svg(&h, Some(&fl)))?;
            }
        }
        Command::Flow { file } => {
            let f = read_filling(&file)?;
            let (g, fl) = canonical_flow(&f).code(INTERNAL)?;
            print!("{}", to_json(&flow_records(&g, &fl))?);
        }
        Command::Honeycomb { file, svg } => {
            let f = read_filling(&file)?;
            let (g, fl) = canonical_flow(&f).code(INTERNAL)?;
            let h = Honeycomb::from_graph(&g);
            print!("{}", to_json(&h)?);
            if let Some(path) = svg {
                write(&path, &render_svg(&h, Some(&fl)))?;
            }
        }
        Command::OverlayCheck { a, b } => {
            let (f1, f2) = (read_filling(&a)?, read_filling(&b)?);
            let (sum, trace) = sum_fillings(&f1, &f2).code(INTERNAL)?;
            let summed = honeycomb_from_filling(&sum).code(INTERNAL)?;
            let stacked = overlay(&honeycomb_from_filling(&f1).code(INTERNAL)?, &honeycomb_from_filling(&f2).code(INTERNAL)?);
            let same = honeycombs_equal(&summed, &stacked);
            let replayed = replay_trace_on_flow(&overlay_flow(&f1, &f2).code(INTERNAL)?, &trace).code(INTERNAL)?;
            let flow = replayed.flow().code(INTERNAL)?;
            let consistent = flow.check(&replayed.honeycomb).ok();
            let canonical = flow == canonical_honey_flow(&sum).code(INTERNAL)?.1;
            println!("honeycombs {}", if same { "equal" } else { "differ" });
            println!("replayed flow {}", if consistent { "consistent" } else { "inconsistent" });
            println!("replayed flow {}", if canonical { "canonical" } else { "not canonical" });
            if !(same && consistent && canonical) {
                return Err(Exit { code: DISAGREE, err: anyhow!("overlay check failed") });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Exit { code, err }) => {
            eprintln!("error: {err:#}");
            ExitCode::from(code)
        }
    }
}
