//! `ekr`: enumerate matching universes, search for maximum families and run
//! verification campaigns.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use ekr_core::harness::{load_campaign, CampaignReport, RunOptions, BUILTIN_NAMES};
use ekr_core::matchings::{PartStructure, Universe, DEFAULT_UNIVERSE_CAP};
use ekr_core::predicates::Predicate;
use ekr_core::search::{extremal, ExtremalOptions, ExtremalReport, DEFAULT_GRAPH_CAP, DEFAULT_MAXIMA_CAP, DEFAULT_NODE_BUDGET};
use ekr_core::Error;

const EXIT_ASSERTION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "ekr", version, about = "Exact maximum intersecting families of hypergraph matchings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
enum Command {
    /// Enumerate a universe of matchings and print its size.
    Enumerate(EnumerateArgs),
    /// Compute a maximum family under a predicate.
    Search(SearchArgs),
    /// Run a campaign whose asserted rows must hold.
    Verify(CampaignArgs),
    /// Run a record-only campaign (conjecture scans and probes).
    Scan(CampaignArgs),
    /// List the built-in campaigns.
    List,
}

#[derive(Args, Debug, Serialize)]
struct UniverseArgs {
    /// Part sizes, e.g. 3,3,3.
    #[arg(long, value_delimiter = ',', required = true)]
    parts: Vec<usize>,
    /// Matching size.
    #[arg(long, conflicts_with = "sizes", required_unless_present = "sizes")]
    r: Option<usize>,
    /// Several matching sizes (non-uniform universe), e.g. 1,2.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
}

impl UniverseArgs {
    fn part_structure(&self) -> ekr_core::Result<PartStructure> {
        PartStructure::new(self.parts.clone())
    }

    fn levels(&self) -> Vec<usize> {
        self.sizes.clone().unwrap_or_else(|| self.r.into_iter().collect())
    }
}

#[derive(Args, Debug, Serialize)]
struct CapArgs {
    /// Largest universe to enumerate.
    #[arg(long, env = "EKR_UNIVERSE_CAP")]
    universe_cap: Option<usize>,
    /// Largest compatibility graph to build.
    #[arg(long, env = "EKR_GRAPH_CAP")]
    graph_cap: Option<usize>,
    /// Branch-and-bound node budget.
    #[arg(long, env = "EKR_NODE_BUDGET")]
    node_budget: Option<u64>,
    /// Most maximum families to enumerate.
    #[arg(long, env = "EKR_MAXIMA_CAP")]
    maxima_cap: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
struct EnumerateArgs {
    #[command(flatten)]
    universe: UniverseArgs,
    #[arg(long, env = "EKR_UNIVERSE_CAP")]
    universe_cap: Option<usize>,
    /// Write the universe as line-delimited JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct SearchArgs {
    #[command(flatten)]
    universe: UniverseArgs,
    /// Predicate as kind:t, e.g. weakly-set-intersecting:2.
    #[arg(long)]
    pred: String,
    /// Enumerate and classify every maximum family.
    #[arg(long)]
    all_maxima: bool,
    /// Start the search from the size of a feasible star.
    #[arg(long)]
    seed_with_star: bool,
    #[command(flatten)]
    caps: CapArgs,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Write PREFIX.json and PREFIX.csv.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct CampaignArgs {
    /// builtin:NAME or a TOML campaign file.
    #[arg(long)]
    campaign: String,
    /// Random families for the projection-clause suite.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    caps: CapArgs,
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Write PREFIX.json and PREFIX.csv.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add wall-clock times to the rows (reports are then not reproducible).
    #[arg(long)]
    timings: bool,
    /// Suppress the row table.
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = serde_json::to_value(&cli.command).unwrap_or(serde_json::Value::Null);
    let result = match &cli.command {
        Command::Enumerate(a) => enumerate(a),
        Command::Search(a) => search(a, &config),
        Command::Verify(a) | Command::Scan(a) => campaign(a, &config),
        Command::List => {
            for name in BUILTIN_NAMES {
                println!("builtin:{name}");
            }
            Ok(0)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::Internal(_) => EXIT_ASSERTION,
        _ => EXIT_USAGE,
    }
}

fn enumerate(a: &EnumerateArgs) -> ekr_core::Result<u8> {
    let parts = a.universe.part_structure()?;
    let cap = a.universe_cap.unwrap_or(DEFAULT_UNIVERSE_CAP);
    let universe = match Universe::enumerate_levels(&parts, &a.universe.levels(), cap) {
        Ok(u) => u,
        Err(Error::UniverseTooLarge { predicted, cap }) => {
            eprintln!("predicted {predicted} matchings exceeds the cap of {cap}");
            return Ok(EXIT_USAGE);
        }
        Err(e) => return Err(e),
    };
    if let Some(path) = &a.out {
        universe.write_jsonl(BufWriter::new(File::create(path)?))?;
    }
    println!("{}", universe.len());
    Ok(0)
}

fn extremal_options(caps: &CapArgs, workers: usize, all_maxima: bool, seed_with_star: bool) -> ExtremalOptions {
    ExtremalOptions {
        universe_cap: caps.universe_cap.unwrap_or(DEFAULT_UNIVERSE_CAP),
        graph_cap: caps.graph_cap.unwrap_or(DEFAULT_GRAPH_CAP),
        node_budget: caps.node_budget.unwrap_or(DEFAULT_NODE_BUDGET),
        maxima_cap: caps.maxima_cap.unwrap_or(DEFAULT_MAXIMA_CAP),
        workers,
        all_maxima,
        seed_with_star,
    }
}

#[derive(Serialize)]
struct SearchDocument<'a> {
    engine_version: &'static str,
    run_config: &'a serde_json::Value,
    report: &'a ExtremalReport,
}

fn search(a: &SearchArgs, config: &serde_json::Value) -> ekr_core::Result<u8> {
    let parts = a.universe.part_structure()?;
    let pred: Predicate = a.pred.parse()?;
    let opts = extremal_options(&a.caps, a.workers, a.all_maxima, a.seed_with_star);
    let rep = extremal(&parts, &a.universe.levels(), pred, &opts)?;
    println!("{}", rep.headline());
    if let Some(line) = rep.maxima_line() {
        println!("{line}");
    }
    println!("witness: {}", rep.witness_classification);
    if rep.inferred_definition {
        println!("note: weak set-intersection uses the projection definition");
    }
    if let Some(prefix) = &a.out {
        let doc = SearchDocument {
            engine_version: ekr_core::harness::ENGINE_VERSION,
            run_config: config,
            report: &rep,
        };
        write_file(&with_ext(prefix, "json"), &(serde_json::to_string_pretty(&doc)? + "\n"))?;
        write_file(&with_ext(prefix, "csv"), &search_csv(&rep, config)?)?;
    }
    Ok(0)
}

fn search_csv(rep: &ExtremalReport, config: &serde_json::Value) -> ekr_core::Result<String> {
    let mut out = format!(
        "# engine={}\n# run_config={}\nparts,sizes,predicate,universe_size,max_size,star_bound,status,maxima,witness_class\n",
        ekr_core::harness::ENGINE_VERSION,
        serde_json::to_string(config)?
    );
    let sizes: Vec<String> = rep.sizes.iter().map(|s| s.to_string()).collect();
    out.push_str(&format!(
        "\"{}\",\"{}\",{},{},{},{},{},{},{}\n",
        rep.parts,
        sizes.join(","),
        rep.predicate,
        rep.universe_size,
        rep.max_size,
        rep.star_bound,
        rep.status,
        rep.all_maxima_count.map(|m| m.to_string()).unwrap_or_default(),
        rep.witness_classification.label()
    ));
    Ok(out)
}

fn campaign(a: &CampaignArgs, config: &serde_json::Value) -> ekr_core::Result<u8> {
    let mut c = load_campaign(&a.campaign)?;
    if let Some(s) = a.samples {
        c.samples = s;
    }
    if let Some(s) = a.seed {
        c.seed = s;
    }
    if let Some(x) = a.caps.universe_cap {
        c.caps.universe = x;
    }
    if let Some(x) = a.caps.graph_cap {
        c.caps.graph = x;
    }
    if let Some(x) = a.caps.node_budget {
        c.caps.node_budget = x;
    }
    if let Some(x) = a.caps.maxima_cap {
        c.caps.maxima = x;
    }
    let opts = RunOptions {
        workers: a.workers,
        timings: a.timings,
    };
    let mut report: CampaignReport = c.run(&opts)?;
    report.run_config = config.clone();
    if a.quiet {
        println!("{}", report.summary_line());
    } else {
        print!("{}", report.table());
    }
    if let Some(prefix) = &a.out {
        write_file(&with_ext(prefix, "json"), &report.to_json()?)?;
        write_file(&with_ext(prefix, "csv"), &report.to_csv()?)?;
    }
    Ok(match report.exit_code() {
        0 => 0,
        1 => EXIT_ASSERTION,
        _ => EXIT_BUDGET,
    })
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn write_file(path: &Path, text: &str) -> ekr_core::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}
