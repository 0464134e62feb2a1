use std::io::{self, Read, Write};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ncotor_core::oracle::{self, Budget, VerificationReport, BUDGET_ENV, DEFAULT_SEED};
use ncotor_core::render::{self, Drawing, Highlight};
use ncotor_core::{
    mutate, ArQuiver, ConfigDocument, Configuration, DiagSet, Direction, DocumentError, MutationStep, Polygon,
    PolygonSpec,
};
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Budget(String),
    #[error("verification failed")]
    Verification,
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Verification => 4,
        }
    }
}

impl From<DocumentError> for CliError {
    fn from(e: DocumentError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ncotor_core::Error> for CliError {
    fn from(e: ncotor_core::Error) -> Self {
        match e {
            ncotor_core::Error::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "ncotor",
    version,
    about = "n-cotorsion pairs in the polygon model of n-cluster categories"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Svg,
    Tikz,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum HighlightArg {
    None,
    Frame,
    Nc,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    Mutation,
    Galois,
    Subfactor,
    Enumeration,
    Ptolemy,
    All,
}

#[derive(Args)]
struct Input {
    /// Configuration document; `-` reads stdin.
    #[arg(long = "in", value_name = "FILE")]
    input: Option<String>,
    /// Spec `n,m`, used with --set when no document is given.
    #[arg(long, value_name = "N,M")]
    spec: Option<PolygonSpec>,
    /// Members as `{(a,b),...}`, used with --spec.
    #[arg(long, value_name = "SET")]
    set: Option<String>,
}

#[derive(Args)]
struct Output {
    /// Destination; `-` or absent writes stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print nc(S).
    Nc {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Report closedness, Ptolemy property, frame and partner set.
    Check {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Rotate the members of S outside the cut within their cells.
    Mutate {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        /// Cut set, a subset of the frame, as `{(a,b),...}`.
        #[arg(long, default_value = "{}")]
        cut: String,
        #[arg(long, default_value = "backward")]
        direction: Direction,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Stream closed or cluster tilting sets in lectic order.
    Enumerate {
        #[arg(long, value_name = "N,M")]
        spec: PolygonSpec,
        #[arg(long, conflicts_with = "cluster_tilting")]
        closed: bool,
        #[arg(long)]
        cluster_tilting: bool,
        #[arg(long)]
        count_only: bool,
        #[arg(long)]
        limit: Option<usize>,
        #[command(flatten)]
        output: Output,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Check theorems against the brute-force oracle.
    Verify {
        #[arg(long, value_name = "N,M")]
        spec: PolygonSpec,
        #[arg(long, value_enum)]
        check: Check,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Random trials for the Galois check.
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// Cut for the subfactor check; every single frame diagonal is tried when absent.
        #[arg(long)]
        cut: Option<String>,
        /// Largest number of subsets a scan may visit.
        #[arg(long, env = BUDGET_ENV)]
        budget: Option<u64>,
        #[command(flatten)]
        output: Output,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Draw S on the polygon.
    Render {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        #[arg(long, default_value = "{}")]
        cut: String,
        #[arg(long, value_enum, default_value = "none")]
        highlight: HighlightArg,
        #[arg(long, value_enum, default_value = "svg")]
        format: Format,
    },
    /// Export the Auslander-Reiten quiver.
    Quiver {
        #[arg(long, value_name = "N,M")]
        spec: PolygonSpec,
        #[command(flatten)]
        output: Output,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
    /// Run the HTTP session service.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
    },
}

fn read_input(input: &Input) -> Result<(Arc<Polygon>, DiagSet)> {
    match (&input.input, input.spec) {
        (Some(path), _) => {
            let text = if path == "-" {
                let mut s = String::new();
                io::stdin().read_to_string(&mut s)?;
                s
            } else {
                std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))?
            };
            let doc = ConfigDocument::parse(&text)?;
            let poly = Arc::new(Polygon::new(doc.polygon_spec()?));
            let set = doc.to_set(&poly)?;
            Ok((poly, set))
        }
        (None, Some(spec)) => {
            let poly = Arc::new(Polygon::new(spec));
            let set = poly.parse_set(input.set.as_deref().unwrap_or("{}"))?;
            Ok((poly, set))
        }
        (None, None) => Err(CliError::Input("give --in FILE or --spec N,M".into())),
    }
}

fn write_output(output: &Output, text: &str) -> Result<()> {
    match &output.out {
        Some(path) if path.as_os_str() != "-" => std::fs::write(path, text)?,
        _ => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn set_text(poly: &Polygon, set: &DiagSet, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(ConfigDocument::from_set(poly, set).to_json() + "\n"),
        Format::Text => Ok(poly.format_set(set) + "\n"),
        _ => Err(CliError::Input("this command writes json or text".into())),
    }
}

fn pairs(poly: &Polygon, set: &DiagSet) -> Vec<[u32; 2]> {
    poly.diagonals_of(set).iter().map(|d| d.endpoints()).collect()
}

fn budget_guard(poly: &Polygon, budget: Budget) -> Result<()> {
    budget.check(poly.len()).map_err(CliError::from)
}

fn run_verify(
    poly: &Arc<Polygon>,
    check: Check,
    seed: u64,
    trials: u64,
    cut: Option<&str>,
    budget: Budget,
) -> Result<Vec<VerificationReport>> {
    let mut reports = Vec::new();
    let wanted = |c: Check| check == c || check == Check::All;
    if wanted(Check::Enumeration) {
        reports.push(oracle::verify_enumeration(poly, budget)?);
    }
    if wanted(Check::Ptolemy) {
        budget_guard(poly, budget)?;
        reports.push(oracle::verify_ptolemy(poly, budget));
    }
    if wanted(Check::Mutation) {
        budget_guard(poly, budget)?;
        reports.push(oracle::verify_mutation_theorem(poly));
    }
    if wanted(Check::Galois) {
        reports.push(oracle::verify_galois(poly, trials, seed));
    }
    if wanted(Check::Subfactor) {
        let cuts: Vec<DiagSet> = match cut {
            Some(text) => vec![poly.parse_set(text)?],
            None => (0..poly.len()).map(|r| DiagSet::from_ranks(poly.spec(), [r])).collect(),
        };
        let mut merged: Option<VerificationReport> = None;
        for c in cuts {
            let r = oracle::verify_subfactor(poly, &c, budget)?;
            merged = Some(match merged {
                Some(m) => m.merge(r),
                None => r,
            });
        }
        reports.extend(merged);
    }
    Ok(reports)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Nc { input, output, format } => {
            let (poly, set) = read_input(&input)?;
            write_output(&output, &set_text(&poly, &poly.nc(&set), format)?)
        }
        Command::Check { input, output, format } => {
            let (poly, set) = read_input(&input)?;
            let nc = poly.nc(&set);
            let closure = poly.closure(&set);
            let closed = closure == set;
            let ptolemy = poly.is_ptolemy(&set);
            let frame = poly.frame(&set);
            let text = match format {
                Format::Json => {
                    let v = json!({
                        "spec": {"n": poly.spec().n(), "m": poly.spec().m()},
                        "diagonals": pairs(&poly, &set),
                        "closed": closed,
                        "ptolemy": ptolemy,
                        "frame": pairs(&poly, &frame),
                        "partner": pairs(&poly, &nc),
                        "closure": pairs(&poly, &closure),
                    });
                    serde_json::to_string_pretty(&v).expect("json values serialize") + "\n"
                }
                Format::Text => format!(
                    "set       {}\nclosed    {}\nptolemy   {}\nframe     {}\npartner   {}\nclosure   {}\n",
                    poly.format_set(&set),
                    closed,
                    ptolemy,
                    poly.format_set(&frame),
                    poly.format_set(&nc),
                    poly.format_set(&closure)
                ),
                _ => return Err(CliError::Input("check writes json or text".into())),
            };
            write_output(&output, &text)
        }
        Command::Mutate {
            input,
            output,
            cut,
            direction,
            format,
        } => {
            let (poly, set) = read_input(&input)?;
            let cut = poly.parse_set(&cut)?;
            let config = Configuration::new(poly.clone(), set)?;
            let record = mutate(&config, &MutationStep { cut, direction })?;
            write_output(&output, &set_text(&poly, record.after.members(), format)?)
        }
        Command::Enumerate {
            spec,
            closed: _,
            cluster_tilting,
            count_only,
            limit,
            output,
            format,
        } => {
            let poly = Polygon::new(spec);
            let sets: Box<dyn Iterator<Item = DiagSet>> = if cluster_tilting {
                Box::new(poly.enumerate_cluster_tilting())
            } else {
                Box::new(poly.enumerate_closed())
            };
            let sets = sets.take(limit.unwrap_or(usize::MAX));
            if count_only {
                return write_output(&output, &format!("{}\n", sets.count()));
            }
            let mut sink: Box<dyn Write> = match &output.out {
                Some(path) if path.as_os_str() != "-" => Box::new(io::BufWriter::new(std::fs::File::create(path)?)),
                _ => Box::new(io::BufWriter::new(io::stdout().lock())),
            };
            for set in sets {
                match format {
                    Format::Json => {
                        let doc = ConfigDocument::from_set(&poly, &set);
                        writeln!(sink, "{}", serde_json::to_string(&doc).expect("documents serialize"))?
                    }
                    Format::Text => writeln!(sink, "{}", poly.format_set(&set))?,
                    _ => return Err(CliError::Input("enumerate writes json or text".into())),
                }
            }
            sink.flush()?;
            Ok(())
        }
        Command::Verify {
            spec,
            check,
            seed,
            trials,
            cut,
            budget,
            output,
            format,
        } => {
            let poly = Arc::new(Polygon::new(spec));
            let budget = budget.map(Budget).unwrap_or_default();
            let reports = run_verify(&poly, check, seed, trials, cut.as_deref(), budget)?;
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&reports).expect("reports serialize") + "\n",
                Format::Text => reports.iter().map(|r| r.to_table()).collect::<Vec<_>>().join("\n"),
                _ => return Err(CliError::Input("verify writes json or text".into())),
            };
            write_output(&output, &text)?;
            if reports.iter().all(|r| r.passed()) {
                Ok(())
            } else {
                Err(CliError::Verification)
            }
        }
        Command::Render {
            input,
            output,
            cut,
            highlight,
            format,
        } => {
            let (poly, set) = read_input(&input)?;
            let cut = poly.parse_set(&cut)?;
            let highlight = match highlight {
                HighlightArg::None => Highlight::None,
                HighlightArg::Frame => Highlight::Frame,
                HighlightArg::Nc => Highlight::Nc,
            };
            let drawing = Drawing::new(&poly, &set, &cut, highlight);
            let text = match format {
                Format::Svg => render::svg(&drawing),
                Format::Tikz => render::tikz(&drawing),
                Format::Dot => render::dot(&drawing),
                _ => return Err(CliError::Input("render writes svg, tikz or dot".into())),
            };
            write_output(&output, &text)
        }
        Command::Quiver { spec, output, format } => {
            let quiver = ArQuiver::new(&Polygon::new(spec));
            let text = match format {
                Format::Dot => quiver.to_dot(),
                Format::Json => {
                    let vertices: Vec<_> = quiver
                        .vertices
                        .iter()
                        .map(|v| json!({"diagonal": v.diagonal.endpoints(), "column": v.column, "row": v.row}))
                        .collect();
                    let v = json!({
                        "spec": {"n": spec.n(), "m": spec.m()},
                        "vertices": vertices,
                        "arrows": quiver.arrows,
                        "translations": quiver.translations,
                    });
                    serde_json::to_string_pretty(&v).expect("json values serialize") + "\n"
                }
                _ => return Err(CliError::Input("quiver writes dot or json".into())),
            };
            write_output(&output, &text)
        }
        Command::Serve { addr } => {
            let runtime = tokio::runtime::Runtime::new()?;
            eprintln!("listening on http://{addr}");
            runtime.block_on(ncotor_service::serve(addr))?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ncotor: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
