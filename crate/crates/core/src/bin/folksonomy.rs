use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use folksonomy::corpus::{load_corpus, InputFormat};
use folksonomy::pipeline::{run_baseline, run_build, run_extract, PipelineConfig};
use folksonomy::synth::{generate, SynthSpec};
use folksonomy::{Constraint, Error};

#[derive(Parser, Debug)]
#[command(
    name = "folksonomy",
    version,
    about = "Build folksonomies from user collection/set hierarchies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the full pipeline and write graph artifacts.
    Build {
        #[arg(short, long)]
        input: PathBuf,
        #[command(flatten)]
        opts: PipelineArgs,
    },
    /// Extract the subgraph around one concept from a build directory.
    Extract {
        /// Directory written by `build`.
        #[arg(short, long)]
        graph_dir: PathBuf,
        /// Concept to center on; normalized like the build input.
        #[arg(short, long)]
        concept: String,
        #[command(flatten)]
        opts: PipelineArgs,
    },
    /// Compare the co-occurrence subsumption baseline with the relation-based graph.
    Baseline {
        #[arg(short, long)]
        input: PathBuf,
        #[command(flatten)]
        opts: PipelineArgs,
    },
    /// Generate a synthetic corpus from a JSON spec.
    Synth {
        #[arg(short, long)]
        spec: PathBuf,
        /// Output JSONL file; stdout when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Print corpus statistics.
    Stats {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        format: Option<String>,
    },
}

#[derive(Args, Debug)]
struct PipelineArgs {
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Input format (jsonl or tsv); guessed from the extension otherwise.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    constraint: Option<String>,
    #[arg(long)]
    top_k: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    stoplist: Option<PathBuf>,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    min_support: Option<u32>,
    #[arg(long)]
    max_depth: Option<usize>,
    #[arg(short, long)]
    output_dir: Option<PathBuf>,
}

impl PipelineArgs {
    fn resolve(&self) -> Result<(PipelineConfig, Option<InputFormat>), Error> {
        let mut cfg = match &self.config {
            Some(path) => PipelineConfig::from_json_file(path)?,
            None => PipelineConfig::default(),
        };
        if let Some(c) = &self.constraint {
            cfg.constraint = c.parse::<Constraint>()?;
        }
        if let Some(k) = self.top_k {
            cfg.top_k = k;
        }
        if let Some(e) = self.epsilon {
            cfg.epsilon = e;
        }
        if let Some(p) = &self.stoplist {
            cfg.stoplist_path = Some(p.clone());
        }
        if let Some(t) = self.threshold {
            cfg.baseline_threshold = t;
        }
        if let Some(m) = self.min_support {
            cfg.baseline_min_support = m;
        }
        if let Some(d) = self.max_depth {
            cfg.max_depth = Some(d);
        }
        if let Some(o) = &self.output_dir {
            cfg.output_dir = o.clone();
        }
        cfg.validate()?;
        let format = self.format.as_deref().map(str::parse).transpose()?;
        Ok((cfg, format))
    }
}

fn print_json<T: serde::Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("report serializes")
    );
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Build { input, opts } => {
            let (cfg, format) = opts.resolve()?;
            let out = run_build(&input, format, &cfg)?;
            eprintln!("{}", out.load);
            eprintln!("{}", out.build.report.summary());
            eprintln!("artifacts written to {}", cfg.output_dir.display());
            print_json(&out.build.report);
        }
        Command::Extract {
            graph_dir,
            concept,
            opts,
        } => {
            let (cfg, _) = opts.resolve()?;
            let out = run_extract(&graph_dir, &concept, &cfg)?;
            eprintln!(
                "`{}`: {} parents, {} children, {} further descendants",
                out.view.focus,
                out.view.parents.len(),
                out.view.children.len(),
                out.view.descendants.len()
            );
            eprintln!(
                "wrote {} and {}",
                out.dot_path.display(),
                out.graphml_path.display()
            );
            print_json(&serde_json::json!({
                "focus": out.view.focus,
                "parents": out.view.parents,
                "children": out.view.children,
                "descendants": out.view.descendants,
                "edges": out.view.edges.len(),
            }));
        }
        Command::Baseline { input, opts } => {
            let (cfg, format) = opts.resolve()?;
            let out = run_baseline(&input, format, &cfg)?;
            let r = &out.report;
            eprintln!(
                "relation-based: {} edges, subsumption baseline (t={}): {} edges; {} only relation-based, {} only baseline, {} shared",
                r.relation_edges, r.threshold, r.baseline_edges, r.only_relation, r.only_baseline, r.shared
            );
            print_json(r);
        }
        Command::Synth { spec, out } => {
            let spec = SynthSpec::from_json_file(&spec)?;
            let corpus = generate(&spec)?;
            match out {
                Some(path) => write_corpus(&corpus, &path)?,
                None => corpus
                    .write_jsonl(std::io::stdout().lock())
                    .map_err(|e| Error::Io {
                        path: "<stdout>".into(),
                        source: e,
                    })?,
            }
            eprintln!(
                "generated {} records from {} users",
                corpus.record_count(),
                corpus.user_count()
            );
        }
        Command::Stats { input, format } => {
            let format = match format {
                Some(f) => f.parse()?,
                None => InputFormat::from_path(&input),
            };
            let (corpus, load) = load_corpus(&input, format)?;
            eprintln!("{load}");
            print_json(&corpus.stats());
        }
    }
    Ok(())
}

fn write_corpus(corpus: &folksonomy::Corpus, path: &Path) -> Result<(), Error> {
    let io_err = |e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut w = BufWriter::new(file);
    corpus.write_jsonl(&mut w).map_err(io_err)?;
    w.flush().map_err(io_err)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
