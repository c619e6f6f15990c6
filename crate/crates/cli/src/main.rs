use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qkoszul::chains::{build_chains, degree_table};
use qkoszul::experiment::{records_to_csv, run_experiment, timings_to_csv, ExperimentSpec};
use qkoszul::field::Field;
use qkoszul::format::{self, Algebra, FormatError};
use qkoszul::freealg::OrderKind;
use qkoszul::groebner::{buchberger, tip_ideal, GroebnerBasis, GroebnerError};
use qkoszul::koszul::{classify_basis, ClassifyOptions, DegreeFunction, FMode, KoszulError};
use qkoszul::quiver::Quiver;
use qkoszul::resolution::oracle_resolution;
use qkoszul::betti::BettiTable;

#[derive(Parser, Debug)]
#[command(name = "qkoszul", version, about = "Gröbner bases, chains and Koszul-type checks for quiver algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Input file (`-` for standard input).
    #[arg(long, global = true, default_value = "-")]
    input: String,
    #[arg(long, global = true, default_value_t = 10)]
    max_degree: usize,
    #[arg(long, global = true, default_value_t = 6)]
    max_n: usize,
    /// Overrides the order kind named in the input.
    #[arg(long, global = true)]
    order: Option<String>,
    /// `rational` or `fp:P`; overrides the input's field.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Output file; standard output if absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Overrides the seed of an experiment.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Exit with status 4 when a report contains an inconclusive verdict.
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduced Gröbner basis up to the degree bound.
    Gb,
    /// The associated monomial algebra.
    Mon,
    /// Chain table of the tips.
    Ap,
    /// Degree table of the resolution indexed by tip chains.
    Resolve,
    /// Degree table of the minimal resolution, by linear algebra.
    Oracle,
    /// Full classification report.
    Report {
        /// Degree function to test, e.g. `delta:3`, `strict:table:0,1,3,4`
        /// or `weak:affine:2,0`. Weak unless prefixed with `strict:`.
        #[arg(long = "check-f")]
        check_f: Vec<String>,
        /// Use this d instead of the largest basis degree.
        #[arg(long)]
        d: Option<usize>,
    },
    /// Sweep over seeded random instances; the input is an experiment spec.
    Experiment {
        /// Directory for per-instance reports and timings.
        #[arg(long)]
        reports: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

enum Failure {
    Parse(String),
    Precondition(String),
    Inconclusive,
    Other(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Precondition(_) => 3,
            Failure::Inconclusive => 4,
            Failure::Other(_) => 1,
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        if e.is_precondition() {
            Failure::Precondition(e.to_string())
        } else {
            Failure::Parse(e.to_string())
        }
    }
}

impl From<GroebnerError> for Failure {
    fn from(e: GroebnerError) -> Self {
        FormatError::from(e).into()
    }
}

impl From<KoszulError> for Failure {
    fn from(e: KoszulError) -> Self {
        match e {
            KoszulError::Groebner(g) => g.into(),
            KoszulError::BadDegreeFunction(_) => Failure::Parse(e.to_string()),
            other => Failure::Precondition(other.to_string()),
        }
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    let mut s = String::new();
    if path == "-" {
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Parse(format!("reading standard input: {e}")))?;
    } else {
        s = fs::read_to_string(path).map_err(|e| Failure::Parse(format!("reading {path}: {e}")))?;
    }
    Ok(s)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Other(format!("writing {}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Other(e.to_string())),
    }
}

fn load(cli: &Cli) -> Result<Algebra, Failure> {
    let field = cli
        .field
        .as_deref()
        .map(|f| f.parse::<Field>())
        .transpose()
        .map_err(|e| Failure::Parse(e.to_string()))?;
    let order = cli
        .order
        .as_deref()
        .map(OrderKind::parse)
        .transpose()
        .map_err(|e| Failure::Parse(e.to_string()))?;
    let alg = format::parse_algebra(&read_input(&cli.input)?, field, order)?;
    alg.check_relations()?;
    Ok(alg)
}

fn groebner(cli: &Cli, alg: &Algebra) -> Result<GroebnerBasis, Failure> {
    Ok(buchberger(&alg.quiver, &alg.relations, &alg.order, cli.max_degree)?)
}

fn betti_text(q: &Quiver, t: &BettiTable) -> String {
    let many = q.num_vertices() > 1;
    let mut s = String::new();
    for (n, row) in t.rows.iter().enumerate() {
        let mut cells = Vec::new();
        for (&(v, d), &m) in &row.entries {
            for _ in 0..m {
                cells.push(if many { format!("{}:{d}", q.vertex_name(v)) } else { d.to_string() });
            }
        }
        let flag = if row.truncated { " (truncated)" } else { "" };
        s.push_str(&format!("n={n}: {}{flag}\n", cells.join(" ")));
    }
    s
}

fn parse_check(spec: &str) -> Result<(DegreeFunction, FMode), Failure> {
    let (mode, rest) = if let Some(r) = spec.strip_prefix("strict:") {
        (FMode::Strict, r)
    } else if let Some(r) = spec.strip_prefix("weak:") {
        (FMode::Weak, r)
    } else {
        (FMode::Weak, spec)
    };
    let f: DegreeFunction = rest.parse().map_err(|e: KoszulError| Failure::Parse(e.to_string()))?;
    Ok((f, mode))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let text = cli.format == OutputFormat::Text;
    match &cli.command {
        Command::Gb => {
            let alg = load(cli)?;
            let gb = groebner(cli, &alg)?;
            let out = if text {
                let mut s: String = gb
                    .elements()
                    .iter()
                    .map(|g| g.display(&alg.quiver, gb.order()) + "\n")
                    .collect();
                s.push_str(&format!(
                    "complete: {}, valid to degree {}\n",
                    gb.is_complete(),
                    gb.valid_to_degree()
                ));
                s
            } else {
                format::to_json(&format::groebner_to_dto(&alg.quiver, alg.field, &gb))
            };
            emit(&cli.out, &out)
        }
        Command::Mon => {
            let alg = load(cli)?;
            let gb = groebner(cli, &alg)?;
            let tips = tip_ideal(&alg.quiver, &gb);
            let out = if text {
                tips.paths().iter().map(|p| alg.quiver.display_path(p) + "\n").collect()
            } else {
                let mon = Algebra {
                    relations: tips
                        .paths()
                        .iter()
                        .map(|p| qkoszul::freealg::AlgebraElement::from_path(p.clone(), alg.field))
                        .collect(),
                    ..alg.clone()
                };
                format::to_json(&mon.to_input())
            };
            emit(&cli.out, &out)
        }
        Command::Ap | Command::Resolve => {
            let alg = load(cli)?;
            let gb = groebner(cli, &alg)?;
            let tips = tip_ideal(&alg.quiver, &gb);
            let table = build_chains(&alg.quiver, &tips, cli.max_n, None);
            let q = &alg.quiver;
            let out = match (&cli.command, text) {
                (Command::Ap, true) => table
                    .levels()
                    .iter()
                    .enumerate()
                    .map(|(n, l)| {
                        let words: Vec<String> = l.iter().map(|c| q.display_path(&c.word)).collect();
                        format!("n={n}: {}\n", words.join(" "))
                    })
                    .collect(),
                (Command::Ap, false) => format::to_json(&format::chains_to_dto(q, &table)),
                (_, true) => betti_text(q, &degree_table(&table)),
                (_, false) => format::to_json(&format::betti_to_dto(q, &degree_table(&table))),
            };
            if !gb.is_complete() {
                eprintln!(
                    "warning: Gröbner basis incomplete beyond degree {}; tips above it are missing",
                    gb.valid_to_degree()
                );
            }
            emit(&cli.out, &out)
        }
        Command::Oracle => {
            let alg = load(cli)?;
            let gb = groebner(cli, &alg)?;
            let table = oracle_resolution(&alg.quiver, &gb, cli.max_n, cli.max_degree)
                .map_err(|e| Failure::Precondition(e.to_string()))?;
            let out = if text {
                betti_text(&alg.quiver, &table)
            } else {
                format::to_json(&format::betti_to_dto(&alg.quiver, &table))
            };
            emit(&cli.out, &out)
        }
        Command::Report { check_f, d } => {
            let alg = load(cli)?;
            let f_checks = check_f.iter().map(|s| parse_check(s)).collect::<Result<Vec<_>, _>>()?;
            let gb = groebner(cli, &alg)?;
            let opts = ClassifyOptions {
                max_degree: cli.max_degree,
                max_n: cli.max_n,
                d: *d,
                f_checks,
                label: if cli.input == "-" { String::new() } else { file_label(&cli.input) },
            };
            let report = classify_basis(&alg.quiver, &gb, &opts)?;
            let out = if text {
                report.render_text()
            } else {
                serde_json::to_string_pretty(&report).expect("report serializes")
            };
            emit(&cli.out, &out)?;
            if cli.strict && report.has_inconclusive() {
                return Err(Failure::Inconclusive);
            }
            Ok(())
        }
        Command::Experiment { reports } => {
            let mut spec: ExperimentSpec = format::from_json(&read_input(&cli.input)?)?;
            if let Some(s) = cli.seed {
                spec.seed = s;
            }
            spec.validate().map_err(|e| Failure::Parse(e.to_string()))?;
            let res = run_experiment(&spec).map_err(|e| Failure::Other(e.to_string()))?;
            let csv = records_to_csv(&res.records).map_err(|e| Failure::Other(e.to_string()))?;
            if let Some(dir) = reports {
                write_reports(dir, &res.reports, &timings_to_csv(&res.timings))?;
            }
            emit(&cli.out, &csv)
        }
    }
}

fn file_label(path: &str) -> String {
    FsPath::new(path)
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn write_reports(dir: &FsPath, reports: &[qkoszul::koszul::KoszulReport], timing: &str) -> Result<(), Failure> {
    let io = |e: io::Error| Failure::Other(format!("writing {}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    for (i, r) in reports.iter().enumerate() {
        let body = serde_json::to_string_pretty(r).expect("report serializes");
        fs::write(dir.join(format!("instance-{i:04}.json")), body).map_err(io)?;
    }
    fs::write(dir.join("timing.csv"), timing).map_err(io)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Parse(m) => eprintln!("parse error: {m}"),
                Failure::Precondition(m) => eprintln!("precondition failed: {m}"),
                Failure::Inconclusive => eprintln!("report contains inconclusive verdicts"),
                Failure::Other(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
