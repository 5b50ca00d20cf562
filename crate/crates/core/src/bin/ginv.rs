use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};

use graph_invariants::expressivity::{self, ToleranceMode};
use graph_invariants::features::{self, FeatureConfig, FeatureMode};
use graph_invariants::io::load_dataset;
use graph_invariants::meta;
use graph_invariants::registry::{build_catalog, Catalog, FingerprintVector, RegimeConfig, SCHEMA_VERSION};
use graph_invariants::Error;

#[derive(Parser)]
#[command(name = "ginv", about = "Graph invariant fingerprints, pair differentiation and feature tables")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Worker threads (output does not depend on this).
    #[arg(long, global = true, default_value_t = default_threads())]
    threads: usize,
    /// Seed for sampling and splitting.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Exit with status 3 if any invariant block failed.
    #[arg(long, global = true)]
    strict: bool,
    /// Magnitude scale q in (0, 1).
    #[arg(long, global = true)]
    q: Option<String>,
    /// Laziness of the Ollivier–Ricci random walk.
    #[arg(long, global = true)]
    alpha: Option<String>,
    /// Highest adjacency power for agg features.
    #[arg(long, global = true, default_value_t = features::DEFAULT_HOPS)]
    hops: usize,
    /// Highest simplex dimension in analytic torsion.
    #[arg(long, global = true)]
    torsion_dim: Option<String>,
    /// Smallest/largest normalized-Laplacian eigenvalues kept.
    #[arg(long, global = true)]
    spectrum_k: Option<String>,
    /// Comma-separated general Randić exponents.
    #[arg(long, global = true, allow_hyphen_values = true)]
    randic_exponents: Option<String>,
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Args)]
struct Selection {
    #[arg(long, default_value = "full")]
    regime: String,
    #[arg(long, default_value = "I")]
    subset: String,
}

#[derive(Subcommand)]
enum Command {
    /// Print the invariants of a configuration, one `name width` per line.
    ListInvariants(Selection),
    /// Fingerprint every graph of a dataset.
    Fingerprint {
        #[arg(long)]
        dataset: PathBuf,
        #[command(flatten)]
        selection: Selection,
        #[arg(long)]
        out: PathBuf,
        /// Sidecar path (defaults to the output path with a .json extension).
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Score graph pairs and select a greedy expressive subset.
    Expressivity {
        /// Pair file, one JSON object per line.
        #[arg(long, required_unless_present = "graph6_pairs", conflicts_with = "graph6_pairs")]
        pairs: Option<PathBuf>,
        /// graph6 listing with the two graphs of each pair on consecutive lines.
        #[arg(long)]
        graph6_pairs: Option<PathBuf>,
        #[command(flatten)]
        selection: Selection,
        #[arg(long, default_value_t = expressivity::DEFAULT_TOLERANCE)]
        tol: f64,
        /// Compare with |a − b| > tol instead of the relative rule.
        #[arg(long)]
        absolute: bool,
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        heatmap: Option<PathBuf>,
    },
    /// Build sum/agg feature rows, optionally joined with fingerprints.
    Features {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, default_value = "sum")]
        mode: String,
        /// Fingerprint subset to append: none, I or S.
        #[arg(long, default_value = "none")]
        combine: String,
        #[arg(long, default_value = "full")]
        regime: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build a dataset-membership table.
    Meta {
        #[arg(long, num_args = 1.., required = true)]
        datasets: Vec<PathBuf>,
        #[command(flatten)]
        selection: Selection,
        #[arg(long, default_value_t = meta::DEFAULT_SAMPLE_SIZE)]
        sample: usize,
        #[arg(long, default_value_t = meta::DEFAULT_TEST_FRACTION)]
        test_frac: f64,
        /// Keep only these datasets (comma-separated names), in this order.
        #[arg(long, value_delimiter = ',')]
        labels: Option<Vec<String>>,
        #[arg(long)]
        out: PathBuf,
        /// Also report nearest-centroid accuracy on the test split.
        #[arg(long)]
        smoke_accuracy: bool,
    },
}

enum Failure {
    Usage(String),
    Data(String),
    Strict(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) => Failure::Usage(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

fn catalog(g: &Global, regime: &str, subset: &str) -> Result<Catalog, Failure> {
    let mut cfg = RegimeConfig::new(regime.parse()?, subset.parse()?);
    for (key, value) in [
        ("q", &g.q),
        ("alpha", &g.alpha),
        ("torsion_dim", &g.torsion_dim),
        ("spectrum_k", &g.spectrum_k),
        ("randic_exponents", &g.randic_exponents),
    ] {
        if let Some(v) = value {
            cfg.set_override(key, v)?;
        }
    }
    Ok(build_catalog(&cfg)?)
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn count_failures<'a>(rows: impl IntoIterator<Item = &'a FingerprintVector>) -> usize {
    rows.into_iter().map(FingerprintVector::num_failed).sum()
}

fn strict_check(g: &Global, failures: usize) -> Result<(), Failure> {
    if g.strict && failures > 0 {
        Err(Failure::Strict(failures))
    } else {
        Ok(())
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    if g.threads == 0 {
        return Err(Failure::Usage("--threads must be at least 1".into()));
    }
    match cli.command {
        Command::ListInvariants(sel) => {
            let c = catalog(g, &sel.regime, &sel.subset)?;
            let mut out = io::stdout().lock();
            for d in c.descriptors() {
                writeln!(out, "{} {}", d.name, d.width())?;
            }
        }
        Command::Fingerprint {
            dataset,
            selection,
            out,
            sidecar,
        } => {
            let c = catalog(g, &selection.regime, &selection.subset)?;
            let ds = load_dataset(&dataset)?;
            let start = std::time::Instant::now();
            let rows = c.fingerprint_dataset(&ds, g.threads)?;
            let mut w = create(&out)?;
            c.write_csv(&rows, &mut w)?;
            w.flush()?;
            let sidecar = sidecar.unwrap_or_else(|| out.with_extension("json"));
            fs::write(&sidecar, c.sidecar_json(&rows)? + "\n")?;
            let failures = count_failures(&rows);
            eprintln!(
                "fingerprinted {} graphs in {:.2}s, {failures} failed blocks",
                rows.len(),
                start.elapsed().as_secs_f64()
            );
            strict_check(g, failures)?;
        }
        Command::Expressivity {
            pairs,
            graph6_pairs,
            selection,
            tol,
            absolute,
            report,
            heatmap,
        } => {
            let c = catalog(g, &selection.regime, &selection.subset)?;
            let pairs = match (pairs, graph6_pairs) {
                (Some(p), _) => expressivity::load_pairs(File::open(&p)?)?,
                (None, Some(p)) => expressivity::convert_brec_graph6(File::open(&p)?)?,
                (None, None) => return Err(Failure::Usage("one of --pairs or --graph6-pairs is required".into())),
            };
            let mode = if absolute { ToleranceMode::Absolute } else { ToleranceMode::Relative };
            let r = expressivity::score_pairs(&pairs, &c, tol, mode, g.threads)?;
            let steps = expressivity::greedy_subset(&r);
            fs::write(&report, expressivity::report_json(&r, &steps)? + "\n")?;
            if let Some(h) = heatmap {
                let mut w = create(&h)?;
                expressivity::export_heatmap(&r, &steps, &mut w)?;
                w.flush()?;
            }
            let total = r.total();
            eprintln!(
                "differentiated {}/{} pairs ({:.1}%), greedy subset of {}",
                total.count,
                total.size,
                100.0 * total.accuracy,
                steps.len()
            );
            let failures = r.differences.iter().flatten().filter(|d| d.is_nan()).count();
            strict_check(g, failures)?;
        }
        Command::Features {
            dataset,
            mode,
            combine,
            regime,
            out,
        } => {
            let mode: FeatureMode = mode.parse()?;
            let config = match mode {
                FeatureMode::Sum => FeatureConfig::sum(),
                FeatureMode::Agg => FeatureConfig::agg(g.hops)?,
            };
            let c = match combine.as_str() {
                "none" => None,
                subset => Some(catalog(g, &regime, subset)?),
            };
            let ds = load_dataset(&dataset)?;
            let mut w = create(&out)?;
            features::write_features_csv(&ds, &config, c.as_ref(), g.threads, &mut w)?;
            w.flush()?;
            if let (Some(c), true) = (&c, g.strict) {
                let rows = c.fingerprint_dataset(&ds, g.threads)?;
                strict_check(g, count_failures(&rows))?;
            }
        }
        Command::Meta {
            datasets,
            selection,
            sample,
            test_frac,
            labels,
            out,
            smoke_accuracy,
        } => {
            let c = catalog(g, &selection.regime, &selection.subset)?;
            let mut sets = datasets.iter().map(load_dataset).collect::<Result<Vec<_>, _>>()?;
            if let Some(labels) = labels {
                sets = meta::select_datasets(sets, &labels)?;
            }
            let t = meta::assemble_meta_table(&sets, &c, sample, test_frac, g.seed, g.threads)?;
            for w in &t.warnings {
                eprintln!("warning: {w}");
            }
            let mut w = create(&out)?;
            meta::export_meta_csv(&t, &mut w)?;
            w.flush()?;
            fs::write(out.with_extension("json"), meta::meta_sidecar_json(&t)? + "\n")?;
            if smoke_accuracy {
                let r = meta::nearest_centroid_accuracy(&t)?;
                println!("{}", serde_json::to_string_pretty(&r).map_err(Error::from)?);
            }
            strict_check(g, count_failures(t.rows.iter().map(|r| &r.fingerprint)))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let version = format!("{} (fingerprint schema {SCHEMA_VERSION})", env!("CARGO_PKG_VERSION"));
    let matches = match Cli::command().version(version.leak() as &str).try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Data(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Strict(n)) => {
            eprintln!("error: {n} invariant blocks failed (--strict)");
            ExitCode::from(3)
        }
    }
}
