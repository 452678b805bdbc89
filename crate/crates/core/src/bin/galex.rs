use std::fs;
use std::io::Write;
use std::net::IpAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use galex::export::{
    lattice_dot, poset_dot, poset_text, ClassificationDocument, DotOptions, LatticeDocument, PosetDocument,
    ReportDocument,
};
use galex::lattice::DEFAULT_MAX_CONCEPTS;
use galex::service::{self, ServiceConfig, DEFAULT_PORT};
use galex::subhierarchy::{subhierarchy, PosetKind};
use galex::variability::{classify_configuration, report_for};
use galex::{BuildOptions, ConceptLattice, ContextFormat, Error, FormalContext, ReportOptions};

#[derive(Parser)]
#[command(
    name = "galex",
    version,
    about = "Concept lattices and variability facts from binary tables"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildFormat {
    Json,
    Dot,
}

#[derive(clap::Args)]
struct Input {
    /// Context file (CSV, or JSON when the extension is .json)
    context: PathBuf,

    /// Override format detection
    #[arg(long = "input-format", value_enum)]
    input_format: Option<InputFormat>,

    /// Fail when the lattice would have more concepts than this
    #[arg(long, default_value_t = DEFAULT_MAX_CONCEPTS)]
    max_concepts: usize,
}

impl Input {
    fn load(&self) -> galex::Result<FormalContext> {
        let format = match self.input_format {
            Some(InputFormat::Csv) => ContextFormat::Csv,
            Some(InputFormat::Json) => ContextFormat::Json,
            None => ContextFormat::from_path(&self.context),
        };
        FormalContext::parse(&fs::read_to_string(&self.context)?, format)
    }

    fn lattice(&self) -> galex::Result<ConceptLattice> {
        ConceptLattice::build_with(
            &self.load()?,
            &BuildOptions {
                max_concepts: self.max_concepts,
            },
        )
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build the concept lattice and write it as JSON or DOT
    Build {
        #[command(flatten)]
        input: Input,
        /// Output file (stdout when omitted)
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(short, long, value_enum, default_value = "json")]
        format: BuildFormat,
        /// DOT: show full intents and extents instead of reduced labels
        #[arg(long)]
        full_labels: bool,
    },
    /// Print the variability report, or a sub-hierarchy
    #[command(group(ArgGroup::new("view").args(["kind", "aoc", "ac", "oc", "iceberg"])))]
    Report {
        #[command(flatten)]
        input: Input,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// List every implication and mutex, including vacuous ones
        #[arg(long)]
        exhaustive: bool,
        /// Sub-hierarchy to print instead of the report
        #[arg(long)]
        kind: Option<PosetKind>,
        #[arg(long)]
        aoc: bool,
        #[arg(long)]
        ac: bool,
        #[arg(long)]
        oc: bool,
        /// Iceberg with this minimum extent size
        #[arg(long, value_name = "N")]
        iceberg: Option<usize>,
        /// Minimum extent size for --kind iceberg
        #[arg(short = 'n', long = "min-extent", requires = "kind")]
        min_extent: Option<usize>,
        /// JSON instead of text
        #[arg(long)]
        json: bool,
        /// Emit a sub-hierarchy as DOT
        #[arg(long, conflicts_with = "json")]
        dot: bool,
    },
    /// Classify an attribute set as a valid, maximal partial, partial or invalid configuration
    Classify {
        #[command(flatten)]
        input: Input,
        /// Attribute names
        attributes: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Serve the lattice over HTTP
    Serve {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "127.0.0.1")]
        address: IpAddr,
        /// Listen port; GALEX_PORT takes precedence when set
        #[arg(long, default_value_t = DEFAULT_PORT)]
        port: u16,
        /// Directory with the explorer bundle
        #[arg(long)]
        static_dir: Option<PathBuf>,
        /// Idle minutes before a navigation session is dropped
        #[arg(long, default_value_t = 30)]
        session_ttl_mins: u64,
    },
}

fn emit(out: Option<&Path>, text: &str) -> galex::Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> galex::Result<()> {
    match cli.command {
        Command::Build {
            input,
            out,
            format,
            full_labels,
        } => {
            let l = input.lattice()?;
            let text = match format {
                BuildFormat::Json => LatticeDocument::new(&l).to_json(),
                BuildFormat::Dot => lattice_dot(&l, &DotOptions { full_labels }),
            };
            emit(out.as_deref(), &text)
        }
        Command::Report {
            input,
            out,
            exhaustive,
            kind,
            aoc,
            ac,
            oc,
            iceberg,
            min_extent,
            json,
            dot,
        } => {
            let l = input.lattice()?;
            let view = match (kind, aoc, ac, oc, iceberg) {
                (Some(k), ..) => Some((k, min_extent)),
                (_, true, ..) => Some((PosetKind::Aoc, None)),
                (_, _, true, ..) => Some((PosetKind::Ac, None)),
                (_, _, _, true, _) => Some((PosetKind::Oc, None)),
                (.., Some(n)) => Some((PosetKind::Iceberg, Some(n))),
                _ => None,
            };
            let text = match view {
                Some((kind, n)) => {
                    if kind == PosetKind::Iceberg && n.is_none() {
                        return Err(Error::InvalidConfig("iceberg needs --min-extent".into()));
                    }
                    let poset = subhierarchy(&l, kind, n)?;
                    if dot {
                        poset_dot(&l, &poset, &DotOptions { full_labels: false })
                    } else if json {
                        PosetDocument::new(&l, &poset).to_json()
                    } else {
                        poset_text(&PosetDocument::new(&l, &poset))
                    }
                }
                None => {
                    let doc = ReportDocument::new(l.context(), &report_for(&l, &ReportOptions { exhaustive }));
                    if json {
                        doc.to_json()
                    } else {
                        doc.to_text()
                    }
                }
            };
            emit(out.as_deref(), &text)
        }
        Command::Classify {
            input,
            attributes,
            json,
        } => {
            let l = input.lattice()?;
            let ctx = l.context();
            let attrs = ctx.attributes_named(&attributes)?;
            let class = classify_configuration(ctx, &l, &attrs)?;
            let doc = ClassificationDocument::new(ctx, &attrs, &class);
            let text = if json {
                let mut s = serde_json::to_string_pretty(&doc)?;
                s.push('\n');
                s
            } else {
                let mut s = format!("{}\n", doc.class);
                if let Some(c) = doc.concept {
                    s.push_str(&format!("  concept: C_{c}\n"));
                }
                if let Some(closure) = &doc.closure {
                    s.push_str(&format!("  closure: {}\n", closure.join(", ")));
                }
                if !doc.objects.is_empty() {
                    s.push_str(&format!("  objects: {}\n", doc.objects.join(", ")));
                }
                s
            };
            emit(None, &text)
        }
        Command::Serve {
            input,
            address,
            port,
            static_dir,
            session_ttl_mins,
        } => {
            let config = ServiceConfig {
                address,
                port,
                context_path: input.context.clone(),
                max_concepts: input.max_concepts,
                static_dir,
                session_ttl: Duration::from_secs(session_ttl_mins * 60),
            }
            .apply_env()?;
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(service::serve(config))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::FAILURE
        }
    }
}
