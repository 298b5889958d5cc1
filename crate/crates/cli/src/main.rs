use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use madic::patterns::CombGenerator;
use madic::reduction::{self, ReductionData, SearchOutcome};
use madic::spaces::{self, Space, SymbolicPoint, TestPoint};
use madic::table::{ColorTable, PartitionTable};
use madic::types::{self, StrongDenseType};

#[derive(Parser)]
#[command(name = "madic", version, about = "Exact combinatorics of m-adic trees and their compacta")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// List strong-dense-types on n colors up to relabelling, with their tables.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Check, search for, or construct reductions f = g∘ε.
    Reduce {
        #[command(subcommand)]
        mode: ReduceMode,
    },
    /// Cantor set / split interval criteria and the open degree of K1(P).
    Classify {
        #[arg(long)]
        partition: PathBuf,
    },
    /// Stabilization report for a comb sequence against a list of tests.
    Converge {
        /// `{"space":"k1","partition":..}` or `{"space":"k_inf","family":..}`
        #[arg(long)]
        space: PathBuf,
        /// `{"branch":..,"incidence":[i,j],"depths":[..]}` or with `"count"`
        #[arg(long)]
        generator: PathBuf,
        /// JSON list of test points
        #[arg(long)]
        tests: PathBuf,
        /// Last tooth index checked; defaults to the stabilization bound.
        #[arg(long)]
        horizon: Option<usize>,
    },
    /// Separating neighbourhoods for odeg + 1 points, with certificates.
    Separate {
        #[arg(long)]
        space: PathBuf,
        /// JSON list of symbolic points
        #[arg(long)]
        points: PathBuf,
    },
    /// The low-degree type tables for n = 2, 3, 4.
    Tables {
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

#[derive(Subcommand)]
enum ReduceMode {
    /// Verify a given reduction.
    Check {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        reduction: PathBuf,
    },
    /// Bounded search for a reduction with k <= max-k.
    Search {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_k: usize,
    },
    /// Build f ≺ g with exactly n0 colors.
    Construct {
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        n0: usize,
    },
}

enum Failure {
    Usage(String),
    Validation(String),
}

struct Outcome {
    payload: Value,
    rendering: Option<String>,
    not_found: bool,
}

impl Outcome {
    fn json(payload: Value) -> Self {
        Outcome {
            payload,
            rendering: None,
            not_found: false,
        }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Validation(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn load<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = read_input(path)?;
    serde_json::from_str(&text).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure::Validation(e.to_string())
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialize")
}

fn type_documents(list: &[StrongDenseType]) -> Result<Vec<Value>, Failure> {
    list.iter()
        .map(|t| {
            let (alphabet, partition) = types::partition_from_type(t).map_err(invalid)?;
            Ok(json!({
                "type": to_value(t),
                "m": alphabet.m(),
                "alphabet": to_value(&alphabet),
                "partition": to_value(&partition),
            }))
        })
        .collect()
}

fn render_types(list: &[StrongDenseType]) -> Result<String, Failure> {
    let mut out = types::render_table(list);
    for (k, t) in list.iter().enumerate() {
        let (_, p) = types::partition_from_type(t).map_err(invalid)?;
        out.push_str(&format!("alpha_{}^{} f = {:?}\n", t.n, k, p.table().rows()));
    }
    Ok(out)
}

fn enumerate(n: usize, format: Format) -> Result<Outcome, Failure> {
    if n < 2 {
        return Err(Failure::Usage(format!("--n must be at least 2, got {n}")));
    }
    let list = types::enumerate_types(n).map_err(invalid)?;
    let docs = type_documents(&list)?;
    Ok(Outcome {
        payload: json!({ "n": n, "count": list.len(), "types": docs }),
        rendering: matches!(format, Format::Table).then(|| render_types(&list)).transpose()?,
        not_found: false,
    })
}

fn tables(format: Format) -> Result<Outcome, Failure> {
    let mut payload = Vec::new();
    let mut text = String::new();
    for n in 2..=4 {
        let list = types::enumerate_types(n).map_err(invalid)?;
        payload.push(json!({ "n": n, "count": list.len(), "types": type_documents(&list)? }));
        text.push_str(&format!("n = {n}\n{}\n", render_types(&list)?));
    }
    Ok(Outcome {
        payload: Value::Array(payload),
        rendering: matches!(format, Format::Table).then_some(text),
        not_found: false,
    })
}

fn reduce(mode: ReduceMode) -> Result<Outcome, Failure> {
    match mode {
        ReduceMode::Check { f, g, reduction: r } => {
            let (f, g): (ColorTable, ColorTable) = (load(&f)?, load(&g)?);
            let r: ReductionData = load(&r)?;
            let ok = reduction::check_reduces(&f, &g, &r).map_err(invalid)?;
            let epsilon = reduction::apply_reduction(&r);
            Ok(Outcome::json(json!({ "reduces": ok, "epsilon": to_value(&epsilon) })))
        }
        ReduceMode::Search { f, g, max_k } => {
            if max_k == 0 {
                return Err(Failure::Usage("--max-k must be at least 1".into()));
            }
            let (f, g): (ColorTable, ColorTable) = (load(&f)?, load(&g)?);
            let outcome = reduction::search_reduction(&f, &g, max_k);
            if let SearchOutcome::Found { reduction: r } = &outcome {
                if reduction::check_reduces(&f, &g, r) != Ok(true) {
                    return Err(Failure::Validation("search returned an unverified witness".into()));
                }
            }
            let not_found = matches!(outcome, SearchOutcome::NotFoundUpTo { .. });
            Ok(Outcome {
                payload: to_value(&outcome),
                rendering: None,
                not_found,
            })
        }
        ReduceMode::Construct { g, n0 } => {
            let g: ColorTable = load(&g)?;
            let out = reduction::nsubset_construct(&g, n0).map_err(|e| match e {
                madic::ReductionError::TargetOutOfRange { .. } => Failure::Usage(e.to_string()),
                other => invalid(other),
            })?;
            let verified = reduction::check_reduces(&out.f, &g, &out.reduction).map_err(invalid)?;
            if !verified || out.colors.len() != n0 {
                return Err(Failure::Validation("construction failed re-verification".into()));
            }
            Ok(Outcome::json(json!({
                "f": to_value(&out.f),
                "reduction": to_value(&out.reduction),
                "colors": to_value(&out.colors),
                "verified": verified,
            })))
        }
    }
}

fn classify(path: &Path) -> Result<Outcome, Failure> {
    let p: PartitionTable = load(path)?;
    let c = spaces::classify_subspaces(&p);
    Ok(Outcome::json(json!({
        "contains_cantor": c.contains_cantor,
        "contains_split": c.contains_split,
        "odeg": p.n(),
    })))
}

fn converge(space: &Path, generator: &Path, tests: &Path, horizon: Option<usize>) -> Result<Outcome, Failure> {
    let space: Space = load(space)?;
    let g: CombGenerator = load(generator)?;
    let tests: Vec<TestPoint> = load(tests)?;
    let limit = space.limit(&g).map_err(invalid)?;
    let horizon = match horizon {
        Some(h) => h,
        None => {
            let mut h = 0;
            for t in &tests {
                h = h.max(spaces::teeth_needed(&space, &g, t).map_err(invalid)?);
            }
            h
        }
    };
    let reports = spaces::verify_convergence(&g, &space, &tests, horizon).map_err(invalid)?;
    let all_stable = reports.iter().all(|r| r.k0().is_some());
    Ok(Outcome::json(json!({
        "limit": to_value(&limit),
        "horizon": horizon,
        "all_stable": all_stable,
        "reports": to_value(&reports),
    })))
}

fn separate(space: &Path, points: &Path) -> Result<Outcome, Failure> {
    let space: Space = load(space)?;
    let points: Vec<SymbolicPoint> = load(points)?;
    let sets = spaces::separate_points(&space, &points).map_err(invalid)?;
    let membership = points
        .iter()
        .zip(&sets)
        .map(|(p, s)| spaces::contains(&space, s, p))
        .collect::<Result<Vec<bool>, _>>()
        .map_err(invalid)?;
    let witness = spaces::empty_intersection_witness(&sets);
    if membership.contains(&false) || witness.is_none() {
        return Err(Failure::Validation("separation failed its certificate".into()));
    }
    Ok(Outcome::json(json!({
        "sets": to_value(&sets),
        "membership": membership,
        "empty_intersection": witness.map(|(a, b)| [a, b]),
    })))
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    match cli.command {
        Command::Enumerate { n, format } => enumerate(n, format),
        Command::Reduce { mode } => reduce(mode),
        Command::Classify { partition } => classify(&partition),
        Command::Converge {
            space,
            generator,
            tests,
            horizon,
        } => converge(&space, &generator, &tests, horizon),
        Command::Separate { space, points } => separate(&space, &points),
        Command::Tables { format } => tables(format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            match out.rendering {
                Some(text) => print!("{text}"),
                None => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({ "status": "ok", "payload": out.payload }))
                        .expect("json values serialize")
                ),
            }
            if out.not_found {
                ExitCode::from(4)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(failure) => {
            let (code, name, message) = match failure {
                Failure::Usage(m) => (2, "usage", m),
                Failure::Validation(m) => (3, "validation", m),
            };
            eprintln!("{}", json!({ "status": "error", "code": name, "message": message }));
            ExitCode::from(code)
        }
    }
}
