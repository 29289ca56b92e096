use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use ordercraft::constructions::{
    dichotomy_extract, independent_from_separating, ramsey_extract, separation_witness, thm8_pipeline, Certificate,
    ChainOfDownSets,
};
use ordercraft::families::{generate, Family, FamilySpec};
use ordercraft::poset::{basic_stats, to_dot};
use ordercraft::segments::{downset_lattice, enumerate_ideals, principal};
use ordercraft::semilattice::{embedding_search, structure_report, EmbeddingMode};
use ordercraft::theoremlab::{run_suite_with, SuiteConfig, SUITES};
use ordercraft::{Error, Poset};

/// Writes a line to stdout, ignoring a closed pipe.
macro_rules! say {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

const OK: u8 = 0;
const NOT_FOUND: u8 = 1;
const USAGE: u8 = 2;
const INVALID_INPUT: u8 = 3;
const BUDGET: u8 = 4;

#[derive(Parser)]
#[command(name = "ordercraft", version, about = "Finite posets, downset lattices and embedding witnesses")]
struct Cli {
    /// Worker threads for parallel suites (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a family member and write its poset JSON.
    Generate(GenerateArgs),
    /// Basic statistics and lattice structure of a poset.
    Analyze {
        #[arg(long)]
        input: PathBuf,
    },
    /// Search for an embedding of one poset into another.
    Embed {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long, value_enum, default_value = "order")]
        mode: Mode,
    },
    /// Ideals of a poset, or with --lattice its full downset lattice.
    Ideals {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        lattice: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monochromatic subset of an antichain in a meet-semilattice.
    Ramsey {
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated element indices.
        #[arg(long, value_delimiter = ',', required = true)]
        antichain: Vec<usize>,
        #[arg(long)]
        m: usize,
    },
    /// Separation check and extraction on a chain of ideals.
    Dichotomy(DichotomyArgs),
    /// Independent set to pattern sublattice in a distributive lattice.
    Pipeline {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 4)]
        k: usize,
    },
    /// Run a randomized property suite and print its report.
    Verify {
        /// Suite name, or `all`.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long)]
        plant_fault: bool,
    },
    /// Re-check a certificate file.
    VerifyCert {
        #[arg(long)]
        input: PathBuf,
    },
    /// Export a poset.
    Export {
        #[arg(long)]
        input: PathBuf,
        /// Hasse diagram in Graphviz DOT.
        #[arg(long, required = true)]
        dot: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GenerateArgs {
    /// finite_powerset, omega_star_grid, delta, gamma, v, l_alpha, m5,
    /// sierpinskisation, lattice_sierp, omega_eta or s_alpha.
    #[arg(long, required_unless_present = "spec")]
    family: Option<String>,
    /// Truncation size.
    #[arg(long)]
    n: Option<u64>,
    /// Chain length for l_alpha.
    #[arg(long)]
    a: Option<u64>,
    /// Ordinal coefficients, most significant first: `2,1` is ω·2+1.
    #[arg(long, value_delimiter = ',')]
    coeffs: Vec<u64>,
    #[arg(long, value_enum)]
    scheme: Option<SchemeArg>,
    /// Block length for the block scheme.
    #[arg(long)]
    block: Option<u64>,
    /// Seed for the shuffle scheme.
    #[arg(long)]
    seed: Option<u64>,
    /// Add a new least element.
    #[arg(long)]
    with_bottom: bool,
    /// Read the full family spec from a JSON file instead of flags.
    #[arg(long, conflicts_with_all = ["family", "n", "a", "coeffs", "scheme", "block", "seed", "with_bottom"])]
    spec: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DichotomyArgs {
    /// Chain JSON: {"host": <poset>, "members": [[...], ...]}.
    #[arg(long, conflicts_with_all = ["grid", "powerset"], required_unless_present_any = ["grid", "powerset"])]
    chain: Option<PathBuf>,
    /// Use the suffix chain of the ω*×ω grid truncated at this size.
    #[arg(long, conflicts_with = "powerset")]
    grid: Option<usize>,
    /// Use the suffix chain of the powerset of this many points.
    #[arg(long)]
    powerset: Option<usize>,
    /// Only report whether the chain is separating.
    #[arg(long, conflicts_with_all = ["independent", "depth"])]
    check: bool,
    /// Extract an independent set from a separating chain.
    #[arg(long, conflicts_with = "depth")]
    independent: bool,
    #[arg(long)]
    depth: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Order,
    Join,
    Meet,
    Sublattice,
}

impl From<Mode> for EmbeddingMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Order => EmbeddingMode::Order,
            Mode::Join => EmbeddingMode::Join,
            Mode::Meet => EmbeddingMode::Meet,
            Mode::Sublattice => EmbeddingMode::Sublattice,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Alternating,
    Block,
    Shuffle,
}

/// A command outcome that is not a plain success.
struct Exit {
    code: u8,
    msg: String,
    /// Structured output still worth printing, such as a partial certificate.
    output: Option<String>,
}

impl Exit {
    fn new(code: u8, msg: impl Into<String>) -> Self {
        Exit {
            code,
            msg: msg.into(),
            output: None,
        }
    }
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::BudgetExceeded { .. } => BUDGET,
            Error::Json(_) | Error::InvalidInput(_) | Error::CyclicRelation(_) | Error::IndexOutOfRange { .. } => {
                INVALID_INPUT
            }
            Error::UnsupportedParams(_) | Error::UnsupportedOrdinal(_) | Error::UnknownSuite(_) => USAGE,
            _ => NOT_FOUND,
        };
        let output = match &e {
            Error::ConstructionStalled { partial, .. } => Some(partial.to_json_string()),
            _ => None,
        };
        Exit {
            code,
            msg: e.to_string(),
            output,
        }
    }
}

type Outcome = Result<u8, Exit>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(j) = cli.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("warning: {e}");
        }
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            if let Some(out) = e.output {
                say!("{out}");
            }
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}

fn read_file(path: &Path) -> Result<String, Exit> {
    fs::read_to_string(path).map_err(|e| Exit::new(INVALID_INPUT, format!("{}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Exit> {
    let text = read_file(path)?;
    serde_json::from_str(&text).map_err(|e| Exit::new(INVALID_INPUT, format!("{}: {e}", path.display())))
}

fn read_poset(path: &Path) -> Result<Poset, Exit> {
    read_json(path)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Exit> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n"))
            .map_err(|e| Exit::new(INVALID_INPUT, format!("{}: {e}", path.display()))),
        None => {
            say!("{text}");
            Ok(())
        }
    }
}

fn print_json<T: Serialize>(v: &T) {
    say!("{}", serde_json::to_string_pretty(v).expect("serializable output"));
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Generate(args) => cmd_generate(args),
        Command::Analyze { input } => {
            let p = read_poset(&input)?;
            print_json(&json!({
                "stats": basic_stats(&p),
                "structure": structure_report(&p),
            }));
            Ok(OK)
        }
        Command::Embed { pattern, target, mode } => {
            let (p, t) = (read_poset(&pattern)?, read_poset(&target)?);
            match embedding_search(&p, &t, mode.into())? {
                Some(w) => {
                    print_json(&json!({ "found": true, "witness": w }));
                    Ok(OK)
                }
                None => {
                    print_json(&json!({ "found": false }));
                    Ok(NOT_FOUND)
                }
            }
        }
        Command::Ideals { input, lattice, out } => {
            let p = read_poset(&input)?;
            if lattice {
                emit(&downset_lattice(&p)?.to_json_string(), out.as_deref())?;
                return Ok(OK);
            }
            let ideals = enumerate_ideals(&p);
            let all_principal = ideals.sets.iter().all(|s| (0..p.len()).any(|x| principal(&p, x) == *s));
            let v = json!({
                "count": ideals.len(),
                "ideals": ideals.sets.iter().map(|s| s.members()).collect::<Vec<_>>(),
                "all_principal": all_principal,
            });
            emit(&serde_json::to_string_pretty(&v).expect("json"), out.as_deref())?;
            Ok(OK)
        }
        Command::Ramsey { input, antichain, m } => {
            let p = read_poset(&input)?;
            say!("{}", ramsey_extract(&p, &antichain, m)?.to_json_string());
            Ok(OK)
        }
        Command::Dichotomy(args) => cmd_dichotomy(args),
        Command::Pipeline { input, k } => {
            let t = read_poset(&input)?;
            say!("{}", thm8_pipeline(&t, k)?.to_json_string());
            Ok(OK)
        }
        Command::Verify {
            suite,
            trials,
            seed,
            max_n,
            plant_fault,
        } => {
            let names: Vec<&str> = if suite == "all" {
                SUITES.to_vec()
            } else {
                vec![suite.as_str()]
            };
            let mut reports = Vec::new();
            for name in names {
                let cfg = SuiteConfig {
                    max_n,
                    plant_fault,
                    ..SuiteConfig::new(trials, seed)
                };
                let r = run_suite_with(name, &cfg)?;
                eprintln!(
                    "{}: {} trials, {} failures, {} ms",
                    r.suite,
                    r.trials,
                    r.failures.len(),
                    r.wall_time_ms
                );
                reports.push(r);
            }
            let passed = reports.iter().all(|r| r.passed());
            if reports.len() == 1 {
                print_json(&reports[0]);
            } else {
                print_json(&reports);
            }
            Ok(if passed { OK } else { NOT_FOUND })
        }
        Command::VerifyCert { input } => {
            let text = read_file(&input)?;
            let cert = Certificate::from_json_str(&text)
                .map_err(|e| Exit::new(INVALID_INPUT, format!("{}: {e}", input.display())))?;
            let ok = cert.verify();
            print_json(&json!({ "kind": cert.kind(), "verified": ok }));
            Ok(if ok { OK } else { NOT_FOUND })
        }
        Command::Export { input, dot: _, out } => {
            let p = read_poset(&input)?;
            let dot = to_dot(&p);
            emit(dot.trim_end(), out.as_deref())?;
            Ok(OK)
        }
    }
}

fn family_spec(args: &GenerateArgs) -> Result<FamilySpec, Exit> {
    if let Some(path) = &args.spec {
        return read_json(path);
    }
    let name = args.family.as_deref().expect("clap requires --family without --spec");
    let family: Family = name.parse().map_err(|e: Error| Exit::new(USAGE, e.to_string()))?;
    let mut spec = FamilySpec::new(family);
    for (key, v) in [("n", args.n), ("a", args.a), ("block", args.block), ("seed", args.seed)] {
        if let Some(v) = v {
            spec = spec.param(key, v);
        }
    }
    // Flags list the leading coefficient first; the spec stores c0 as the
    // finite part.
    for (i, &c) in args.coeffs.iter().rev().enumerate() {
        spec = spec.param(&format!("c{i}"), c);
    }
    if let Some(s) = args.scheme {
        let code = match s {
            SchemeArg::Alternating => 0,
            SchemeArg::Block => 1,
            SchemeArg::Shuffle => 2,
        };
        spec = spec.param("scheme", code);
    }
    spec.with_bottom = args.with_bottom;
    Ok(spec)
}

fn cmd_generate(args: GenerateArgs) -> Outcome {
    let spec = family_spec(&args)?;
    let p = generate(&spec)?;
    emit(&p.to_json_string(), args.out.as_deref())?;
    if args.out.is_some() {
        eprintln!("{}: {} elements", spec.family.name(), p.len());
    }
    Ok(OK)
}

fn cmd_dichotomy(args: DichotomyArgs) -> Outcome {
    let chain = match (&args.chain, args.grid, args.powerset) {
        (Some(path), _, _) => read_json::<ChainOfDownSets>(path)?,
        (None, Some(n), _) => ChainOfDownSets::grid_suffixes(n),
        (None, None, Some(n)) => ChainOfDownSets::powerset_suffixes(n),
        (None, None, None) => unreachable!("clap requires a chain source"),
    };
    if args.check {
        let witness = separation_witness(&chain);
        let v: Value = match witness {
            Some((member, x)) => json!({
                "separating": false,
                "witness": { "member": member, "element": x, "label": chain.host().label(x) },
            }),
            None => json!({ "separating": true }),
        };
        print_json(&v);
        return Ok(if witness.is_none() { OK } else { NOT_FOUND });
    }
    let cert = if args.independent {
        independent_from_separating(&chain)?
    } else {
        let d = args
            .depth
            .ok_or_else(|| Exit::new(USAGE, "--depth is required unless --check or --independent is given"))?;
        dichotomy_extract(&chain, d)?
    };
    say!("{}", cert.to_json_string());
    Ok(OK)
}
