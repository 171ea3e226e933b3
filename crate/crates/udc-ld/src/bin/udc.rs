//! Command-line interface to the classmark parser, the class store and the
//! lookup service.

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;
use udc_ld::interpret::interpret;
use udc_ld::rdf::{self, complex_graph, record_graph, Graph};
use udc_ld::service::{self, ServiceConfig};
use udc_ld::store::{Resolution, Store, Terminal, Tier};
use udc_ld::uri;

#[derive(Parser)]
#[command(name = "udc", about = "UDC classmark parsing and linked-data lookup", version)]
struct Cli {
    /// Path to the service configuration file.
    #[arg(long, global = true, env = "UDC_CONFIG")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TierArg {
    Summary,
    Abridged,
    Mrf,
}

impl From<TierArg> for Tier {
    fn from(arg: TierArg) -> Tier {
        match arg {
            TierArg::Summary => Tier::Summary,
            TierArg::Abridged => Tier::Abridged,
            TierArg::Mrf => Tier::Mrf,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Table,
    Json,
    Ttl,
    Html,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a classmark and interpret its elements against the dataset.
    Parse {
        notation: String,
        #[arg(long, value_enum, default_value = "summary")]
        tier: TierArg,
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
        #[arg(long, default_value = "en")]
        lang: String,
    },
    /// Follow a notation's cancellation chain to its current replacement.
    Resolve { notation: String },
    /// Escape a classmark for use in a class URI.
    Encode { notation: String },
    /// Invert the URI escaping back to classmark text.
    Decode { encoded: String },
    /// Validate record files against the configured version catalog.
    Ingest {
        /// Record files to validate; defaults to the configured dataset files.
        files: Vec<PathBuf>,
    },
    /// Write the full dataset of a tier as Turtle on stdout.
    Dump {
        #[arg(long, value_enum)]
        dataset: TierArg,
    },
    /// Run the HTTP lookup service.
    Serve,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn load_config(cli_config: &Option<PathBuf>) -> anyhow::Result<ServiceConfig> {
    let path = cli_config
        .as_deref()
        .ok_or_else(|| anyhow::anyhow!("a config file is required (--config or UDC_CONFIG)"))?;
    ServiceConfig::load(path)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Encode { notation } => {
            let encoded = uri::encode_notation(&notation)
                .map_err(|e| anyhow::anyhow!("cannot encode {notation:?}: {e}"))?;
            println!("{encoded}");
            Ok(())
        }
        Command::Decode { encoded } => {
            let raw = uri::decode_notation(&encoded)
                .map_err(|e| anyhow::anyhow!("cannot decode {encoded:?}: {e}"))?;
            println!("{raw}");
            Ok(())
        }
        Command::Parse {
            notation,
            tier,
            format,
            lang,
        } => {
            let config = load_config(&cli.config)?;
            let store = service::load_store(&config)?;
            let ucfg = config.uri_config();
            let tier = Tier::from(tier);
            let outcome = interpret(&store, &ucfg, tier, &lang, &notation)
                .map_err(|e| anyhow::anyhow!("cannot parse {notation:?}: {e}"))?;
            match format {
                OutputFormat::Json => println!("{}", outcome.to_json()),
                OutputFormat::Html => print!("{}", outcome.to_html()),
                OutputFormat::Ttl => {
                    let complex = complex_graph(&outcome.tree, &|leaf| {
                        store.lookup(tier, leaf).and_then(|r| {
                            uri::class_uri(&ucfg, tier, &r.introduced, &r.notation).ok()
                        })
                    });
                    print!("{}", rdf::to_turtle(&complex.graph));
                }
                OutputFormat::Table => print_table(&outcome),
            }
            Ok(())
        }
        Command::Resolve { notation } => {
            let config = load_config(&cli.config)?;
            let store = service::load_store(&config)?;
            match store.resolve(&notation)? {
                Resolution::Active(record) => {
                    match record.caption("en") {
                        Some(c) => println!("{} is active ({c})", record.notation),
                        None => println!("{} is active", record.notation),
                    }
                    Ok(())
                }
                Resolution::Cancelled { chain, terminal } => {
                    for link in &chain {
                        println!(
                            "{} cancelled in {}; replaced by {}",
                            link.record.notation, link.cancelled_in, link.replaced_by
                        );
                    }
                    match terminal {
                        Terminal::Active(record) => {
                            match record.caption("en") {
                                Some(c) => println!("{} is active ({c})", record.notation),
                                None => println!("{} is active", record.notation),
                            }
                            Ok(())
                        }
                        Terminal::DeadEnd => {
                            anyhow::bail!("the replacement chain ends without an active class")
                        }
                    }
                }
                Resolution::Unknown => anyhow::bail!("{notation} is not in the dataset"),
            }
        }
        Command::Ingest { files } => {
            let config = load_config(&cli.config)?;
            let store = if files.is_empty() {
                service::load_store(&config)?
            } else {
                Store::ingest_files(&files, &config.version_catalog)?
            };
            println!("validated {} records", store.len());
            Ok(())
        }
        Command::Dump { dataset } => {
            let config = load_config(&cli.config)?;
            let store = service::load_store(&config)?;
            let ucfg = config.uri_config();
            let tier = Tier::from(dataset);
            let mut records: Vec<_> = store
                .records()
                .iter()
                .filter(|r| r.visible_at(tier))
                .collect();
            records.sort_by(|a, b| a.notation.cmp(&b.notation));
            let mut merged = Graph::new();
            for record in records {
                merged.extend(record_graph(&store, &ucfg, record, tier));
            }
            print!("{}", rdf::to_turtle(&merged));
            Ok(())
        }
        Command::Serve => {
            let config = load_config(&cli.config)?;
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(service::serve(config))
        }
    }
}

/// Aligned plain-text element table, one row per element or connecting sign.
fn print_table(outcome: &udc_ld::interpret::ParseOutcome) {
    let mut rows = vec![(
        "NOTATION".to_string(),
        "CAPTION".to_string(),
        "VERSION".to_string(),
    )];
    for e in &outcome.elements {
        let caption = if e.kind == "connector" {
            e.caption.clone().unwrap_or_default()
        } else {
            e.caption
                .clone()
                .unwrap_or_else(|| format!("[unknown {}]", notation_label(&e.kind)))
        };
        rows.push((
            e.notation.clone(),
            caption,
            e.version.clone().unwrap_or_default(),
        ));
    }
    let w0 = rows.iter().map(|r| r.0.chars().count()).max().unwrap_or(0);
    let w1 = rows.iter().map(|r| r.1.chars().count()).max().unwrap_or(0);
    for (notation, caption, version) in rows {
        let line = format!("{notation:<w0$}  {caption:<w1$}  {version}");
        println!("{}", line.trim_end());
    }
}

/// Turn a machine kind name into the human label shown for unknown elements.
fn notation_label(kind: &str) -> String {
    kind.replace('_', " ")
}
