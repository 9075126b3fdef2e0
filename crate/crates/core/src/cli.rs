//! Command-line front end. Exit codes: 0 success, 1 usage, 2 data error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::config::PipelineConfig;
use crate::context::Lexicon;
use crate::pipeline::{enrich, ingest, load_taxonomy, search_index, stored_config};
use crate::retrieval::{eval_report, parse_queries, parse_query, rank, Qrels, Query, RetrievalError, Strategy};
use crate::store::IndexStore;
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "vis-enrich", version, about = "Enrich image index structures with webpage context")]
struct Cli {
    /// More log output (repeat for more).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Pair pages with VIS sidecars and write a new index store.
    Ingest {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Mine context, fuse it into the VIS and rewrite the store.
    Enrich {
        #[arg(long)]
        index: PathBuf,
        /// Overrides the config's taxonomy; the bundled one is the default.
        #[arg(long)]
        taxonomy: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output store; defaults to rewriting `--index`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank the documents of a store for one query.
    Search {
        #[arg(long)]
        index: PathBuf,
        #[arg(long, value_parser = parse_strategy)]
        strategy: Strategy,
        #[arg(long)]
        query: String,
        #[arg(short = 'k', long = "top", default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        /// Ranking settings; defaults to the config used for enrichment.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Score every strategy on a judged query set.
    Eval {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        queries: PathBuf,
        #[arg(long)]
        qrels: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse().map_err(|e: RetrievalError| e.to_string())
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), Error> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

fn config_or(path: Option<&Path>, fallback: impl FnOnce() -> Result<PipelineConfig, Error>) -> Result<PipelineConfig, Error> {
    match path {
        Some(p) => Ok(PipelineConfig::load(p)?),
        None => fallback(),
    }
}

fn execute(command: Command, out: &mut dyn std::io::Write) -> Result<(), Error> {
    match command {
        Command::Ingest { corpus, out: dest, config } => {
            let config = config_or(config.as_deref(), || Ok(PipelineConfig::default()))?;
            let outcome = ingest(&corpus, &config)?;
            outcome.store.save(&dest)?;
            log::info!("{} documents ingested", outcome.store.records.len());
        }
        Command::Enrich {
            index,
            taxonomy,
            config,
            out: dest,
        } => {
            let config = config_or(config.as_deref(), || Ok(PipelineConfig::default()))?;
            let taxonomy = load_taxonomy(taxonomy.as_deref().or(config.taxonomy.as_deref()))?;
            let store = IndexStore::load(&index)?;
            let enriched = enrich(&store, &taxonomy, &config)?;
            enriched.save(dest.as_deref().unwrap_or(&index))?;
        }
        Command::Search {
            index,
            strategy,
            query,
            k,
            config,
        } => {
            let store = IndexStore::load(&index)?;
            if store.records.is_empty() {
                return Ok(());
            }
            let config = config_or(config.as_deref(), || stored_config(&store))?;
            let idx = search_index(&store, config.search())?;
            let parsed = if strategy == Strategy::TfIdf {
                Query::text_only(&query)
            } else {
                let taxonomy = idx.taxonomy().ok_or(RetrievalError::NotEnriched)?;
                parse_query(&query, &Lexicon::default(), taxonomy, &config.patterns)?
            };
            let k = usize::try_from(k).unwrap_or(usize::MAX);
            let list = rank(&idx, &parsed, strategy, k)?;
            for (i, e) in list.entries.iter().enumerate() {
                writeln!(out, "{} {} {:.4}", i + 1, e.doc_id, e.score).map_err(|source| Error::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })?;
            }
        }
        Command::Eval {
            index,
            queries,
            qrels,
            config,
            out: dir,
        } => {
            let store = IndexStore::load(&index)?;
            let config = config_or(config.as_deref(), || stored_config(&store))?;
            let queries = parse_queries(&read(&queries)?)?;
            let qrels = Qrels::parse(&read(&qrels)?)?;
            let idx = search_index(&store, config.search())?;
            let report = eval_report(
                &idx,
                &queries,
                &qrels,
                &Strategy::ALL,
                &config.ndcg_n,
                &Lexicon::default(),
                &config.patterns,
            )?;
            std::fs::create_dir_all(&dir).map_err(|source| Error::Io {
                path: dir.clone(),
                source,
            })?;
            write(&dir.join("summary.csv"), &report.summary_csv())?;
            write(&dir.join("per_query.csv"), &report.per_query_csv())?;
        }
    }
    Ok(())
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(cli.command, &mut lock) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_DATA
        }
    }
}
