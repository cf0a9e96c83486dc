//! End-to-end runs: ingest → normalize → tally → resolve → prune → link,
//! plus subgraph extraction and the baseline comparison.
//!
//! Every stage writes plain-text artifacts into the output directory. The
//! same input bytes and configuration give byte-identical artifacts.
//!
//! Build output layout:
//!
//! | file            | contents                                               |
//! |-----------------|--------------------------------------------------------|
//! | `tallies.tsv`   | broader, narrower, user support (support desc)         |
//! | `relations.tsv` | retained pairs: support, reverse support, symmetric    |
//! | `pruned.tsv`    | removed concepts: term, dout, din, ratio (rank order)  |
//! | `graph.tsv`     | final edges, broader TAB narrower                      |
//! | `concepts.txt`  | final concepts, one per line                           |
//! | `graph.graphml` | final graph                                            |
//! | `graph.dot`     | final graph                                            |
//! | `report.json`   | stage counts                                           |
//! | `manifest.json` | tool version, config/stoplist hashes, normalizer       |

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::aggregate::{resolve_conflicts, tally_users, Constraint, Edge, RelationSet, Tallies};
use crate::baseline::{
    build_documents, compare_edges, count_cooccurrence, induce_from_stats, BaselineConfig,
    EdgeComparison,
};
use crate::corpus::{load_corpus, Corpus, InputFormat, LoadReport};
use crate::error::{Error, Result};
use crate::graph::{
    export_graph, extract_subgraph, parse_edge_tsv, prune_concepts, ConceptGraph, ExportFormat,
    PruneConfig, Pruned, SubgraphView,
};
use crate::normalize::{normalize_name, NormalizerConfig, Term};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub constraint: Constraint,
    pub top_k: usize,
    pub epsilon: f64,
    pub stoplist_path: Option<PathBuf>,
    pub baseline_threshold: f64,
    pub baseline_min_support: u32,
    pub max_depth: Option<usize>,
    pub output_dir: PathBuf,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            constraint: Constraint::Soft,
            top_k: 200,
            epsilon: 0.01,
            stoplist_path: None,
            baseline_threshold: 0.8,
            baseline_min_support: 2,
            max_depth: None,
            output_dir: PathBuf::from("out"),
        }
    }
}

/// The subset of the configuration that determines build artifacts.
#[derive(Serialize)]
struct HashedConfig {
    constraint: Constraint,
    top_k: usize,
    epsilon: f64,
    baseline_threshold: f64,
    baseline_min_support: u32,
}

impl PipelineConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("config {}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<()> {
        self.prune_config().validate()?;
        self.baseline_config().validate()?;
        if self.max_depth == Some(0) {
            return Err(Error::Config("max_depth must be at least 1".into()));
        }
        Ok(())
    }

    pub fn prune_config(&self) -> PruneConfig {
        PruneConfig {
            epsilon: self.epsilon,
            top_k: self.top_k,
        }
    }

    pub fn baseline_config(&self) -> BaselineConfig {
        BaselineConfig {
            threshold: self.baseline_threshold,
            min_support: self.baseline_min_support,
        }
    }

    pub fn normalizer(&self) -> Result<NormalizerConfig> {
        let cfg = match &self.stoplist_path {
            Some(path) => NormalizerConfig::with_stoplist_file(path)?,
            None => NormalizerConfig::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// SHA-256 over the artifact-determining fields.
    pub fn config_hash(&self) -> String {
        let hashed = HashedConfig {
            constraint: self.constraint,
            top_k: self.top_k,
            epsilon: self.epsilon,
            baseline_threshold: self.baseline_threshold,
            baseline_min_support: self.baseline_min_support,
        };
        sha256_hex(
            serde_json::to_string(&hashed)
                .expect("config serializes")
                .as_bytes(),
        )
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Counts at each stage of a build.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub records: usize,
    pub users: usize,
    /// Distinct directed term pairs delegated from the records.
    pub raw_relations: usize,
    /// Distinct terms among the delegated pairs.
    pub raw_concepts: usize,
    pub constraint: Constraint,
    pub relations_after_constraint: usize,
    pub symmetric_pairs: usize,
    pub concepts_before_pruning: usize,
    pub concepts_removed: usize,
    pub concepts_after_pruning: usize,
    pub edges_after_pruning: usize,
    pub top_k: usize,
    pub epsilon: f64,
}

impl RunReport {
    pub fn summary(&self) -> String {
        format!(
            "{} records from {} users\n\
             {} delegated relations over {} concepts\n\
             {} relations kept under the {} constraint ({} symmetric pairs)\n\
             {} concepts before pruning, {} removed (top_k={}, epsilon={}), {} remain with {} edges",
            self.records,
            self.users,
            self.raw_relations,
            self.raw_concepts,
            self.relations_after_constraint,
            self.constraint,
            self.symmetric_pairs,
            self.concepts_before_pruning,
            self.concepts_removed,
            self.top_k,
            self.epsilon,
            self.concepts_after_pruning,
            self.edges_after_pruning,
        )
    }
}

/// In-memory result of a build.
#[derive(Clone, Debug)]
pub struct Build {
    pub tallies: Tallies,
    pub relations: RelationSet,
    pub pruned: Pruned,
    pub report: RunReport,
}

impl Build {
    pub fn graph(&self) -> &ConceptGraph {
        &self.pruned.graph
    }

    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.pruned
            .graph
            .edges()
            .map(|(b, n)| (b.clone(), n.clone()))
            .collect()
    }
}

/// Runs the relation-based pipeline on a loaded corpus.
pub fn build(
    corpus: &Corpus,
    cfg: &PipelineConfig,
    normalizer: &NormalizerConfig,
) -> Result<Build> {
    cfg.validate()?;
    let tallies = tally_users(corpus, normalizer);
    let relations = resolve_conflicts(&tallies, cfg.constraint);
    let concepts_before = ConceptGraph::from_relations(&relations).node_count();
    let pruned = prune_concepts(&relations, &cfg.prune_config())?;
    let report = RunReport {
        records: corpus.record_count(),
        users: corpus.user_count(),
        raw_relations: tallies.len(),
        raw_concepts: tallies.concepts().len(),
        constraint: cfg.constraint,
        relations_after_constraint: relations.len(),
        symmetric_pairs: relations.symmetric_pairs().len(),
        concepts_before_pruning: concepts_before,
        concepts_removed: pruned.removed.len(),
        concepts_after_pruning: pruned.graph.node_count(),
        edges_after_pruning: pruned.graph.edge_count(),
        top_k: cfg.top_k,
        epsilon: cfg.epsilon,
    };
    Ok(Build {
        tallies,
        relations,
        pruned,
        report,
    })
}

/// Recorded next to a built graph so later queries normalize the same way.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool_version: String,
    pub config_hash: String,
    pub stoplist_hash: String,
    pub normalizer: NormalizerConfig,
    pub graph_sha256: String,
    pub concepts_sha256: String,
}

pub const MANIFEST_FILE: &str = "manifest.json";
pub const GRAPH_TSV_FILE: &str = "graph.tsv";
pub const CONCEPTS_FILE: &str = "concepts.txt";

fn stoplist_hash(normalizer: &NormalizerConfig) -> String {
    let joined: String = normalizer
        .stoplist
        .iter()
        .map(|w| format!("{w}\n"))
        .collect();
    sha256_hex(joined.as_bytes())
}

fn write_file(dir: &Path, name: &str, contents: &[u8]) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::io(path, e))
}

fn to_json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("report serializes");
    bytes.push(b'\n');
    bytes
}

fn concepts_text(g: &ConceptGraph) -> String {
    g.nodes().map(|t| format!("{t}\n")).collect()
}

/// Writes all build artifacts into `dir`, creating it if needed.
pub fn write_build_artifacts(
    build: &Build,
    cfg: &PipelineConfig,
    normalizer: &NormalizerConfig,
    dir: &Path,
) -> Result<Manifest> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    let mut buf = Vec::new();
    build
        .tallies
        .write_tsv(&mut buf)
        .map_err(|e| Error::io(dir, e))?;
    write_file(dir, "tallies.tsv", &buf)?;

    buf.clear();
    build
        .relations
        .write_tsv(&mut buf)
        .map_err(|e| Error::io(dir, e))?;
    write_file(dir, "relations.tsv", &buf)?;

    let pruned: String = build
        .pruned
        .removed
        .iter()
        .map(|r| {
            format!(
                "{}\t{}\t{}\t{}\n",
                r.term, r.out_degree, r.in_degree, r.ratio
            )
        })
        .collect();
    write_file(dir, "pruned.tsv", pruned.as_bytes())?;

    let graph = build.graph();
    let graph_tsv = export_graph(graph, ExportFormat::Tsv);
    let concepts = concepts_text(graph);
    write_file(dir, GRAPH_TSV_FILE, graph_tsv.as_bytes())?;
    write_file(dir, CONCEPTS_FILE, concepts.as_bytes())?;
    write_file(
        dir,
        "graph.graphml",
        export_graph(graph, ExportFormat::Graphml).as_bytes(),
    )?;
    write_file(
        dir,
        "graph.dot",
        export_graph(graph, ExportFormat::Dot).as_bytes(),
    )?;
    write_file(dir, "report.json", &to_json_bytes(&build.report))?;

    let manifest = Manifest {
        tool_version: TOOL_VERSION.to_string(),
        config_hash: cfg.config_hash(),
        stoplist_hash: stoplist_hash(normalizer),
        normalizer: normalizer.clone(),
        graph_sha256: sha256_hex(graph_tsv.as_bytes()),
        concepts_sha256: sha256_hex(concepts.as_bytes()),
    };
    write_file(dir, MANIFEST_FILE, &to_json_bytes(&manifest))?;
    Ok(manifest)
}

/// Result of [`run_build`].
#[derive(Clone, Debug)]
pub struct BuildOutput {
    pub load: LoadReport,
    pub build: Build,
    pub manifest: Manifest,
}

/// Loads `input`, builds, and writes artifacts to `cfg.output_dir`.
pub fn run_build(
    input: &Path,
    format: Option<InputFormat>,
    cfg: &PipelineConfig,
) -> Result<BuildOutput> {
    cfg.validate()?;
    let normalizer = cfg.normalizer()?;
    let format = format.unwrap_or_else(|| InputFormat::from_path(input));
    let (corpus, load) = load_corpus(input, format)?;
    let build = build(&corpus, cfg, &normalizer)?;
    let manifest = write_build_artifacts(&build, cfg, &normalizer, &cfg.output_dir)?;
    Ok(BuildOutput {
        load,
        build,
        manifest,
    })
}

/// A built graph read back from disk with its manifest.
#[derive(Clone, Debug)]
pub struct StoredGraph {
    pub manifest: Manifest,
    pub graph: ConceptGraph,
}

/// Reads a build directory, checking the graph files against the manifest.
pub fn load_graph_dir(dir: &Path) -> Result<StoredGraph> {
    let artifact_err = |path: PathBuf, reason: String| Error::Artifact { path, reason };
    let read = |name: &str| {
        let path = dir.join(name);
        fs::read_to_string(&path)
            .map_err(|e| artifact_err(path, format!("cannot read artifact: {e}")))
    };
    let manifest_path = dir.join(MANIFEST_FILE);
    let manifest: Manifest = serde_json::from_str(&read(MANIFEST_FILE)?)
        .map_err(|e| artifact_err(manifest_path.clone(), format!("invalid manifest: {e}")))?;
    let graph_tsv = read(GRAPH_TSV_FILE)?;
    let concepts = read(CONCEPTS_FILE)?;
    if sha256_hex(graph_tsv.as_bytes()) != manifest.graph_sha256
        || sha256_hex(concepts.as_bytes()) != manifest.concepts_sha256
    {
        return Err(artifact_err(
            dir.to_path_buf(),
            "graph files do not match the manifest (stale or edited artifact)".into(),
        ));
    }
    let mut graph = ConceptGraph::from_edges(parse_edge_tsv(&graph_tsv)?);
    for line in concepts.lines().filter(|l| !l.is_empty()) {
        let term = Term::new(line).ok_or_else(|| {
            artifact_err(dir.join(CONCEPTS_FILE), format!("invalid concept `{line}`"))
        })?;
        graph.add_node(term);
    }
    Ok(StoredGraph { manifest, graph })
}

/// Maps a free-text query onto a graph concept using the build normalizer.
pub fn resolve_query(
    graph: &ConceptGraph,
    normalizer: &NormalizerConfig,
    query: &str,
) -> Result<Term> {
    let terms = normalize_name(query, normalizer);
    let not_found = |probe: &str| Error::ConceptNotFound {
        query: query.to_string(),
        suggestions: graph.nearest_terms(probe, 3),
    };
    match terms.as_slice() {
        [term] => graph
            .get_term(term.as_str())
            .cloned()
            .ok_or_else(|| not_found(term.as_str())),
        [] => Err(not_found(&query.to_lowercase())),
        [first, ..] => Err(not_found(first.as_str())),
    }
}

/// Result of [`run_extract`].
#[derive(Clone, Debug)]
pub struct ExtractOutput {
    pub view: SubgraphView,
    pub dot_path: PathBuf,
    pub graphml_path: PathBuf,
}

/// Extracts the subgraph around `concept` from a build directory and writes
/// it as DOT and GraphML into `cfg.output_dir`.
pub fn run_extract(graph_dir: &Path, concept: &str, cfg: &PipelineConfig) -> Result<ExtractOutput> {
    cfg.validate()?;
    let stored = load_graph_dir(graph_dir)?;
    let focus = resolve_query(&stored.graph, &stored.manifest.normalizer, concept)?;
    let view = extract_subgraph(&stored.graph, focus.as_str(), cfg.max_depth)?;
    let dir = &cfg.output_dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let stem = format!("subgraph-{}", focus.as_str().replace(' ', "_"));
    let dot_path = dir.join(format!("{stem}.dot"));
    let graphml_path = dir.join(format!("{stem}.graphml"));
    fs::write(&dot_path, export_graph(&view, ExportFormat::Dot))
        .map_err(|e| Error::io(&dot_path, e))?;
    fs::write(&graphml_path, export_graph(&view, ExportFormat::Graphml))
        .map_err(|e| Error::io(&graphml_path, e))?;
    Ok(ExtractOutput {
        view,
        dot_path,
        graphml_path,
    })
}

/// Counts and edge lists from a baseline run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineReport {
    pub threshold: f64,
    pub min_support: u32,
    pub documents: usize,
    pub relation_edges: usize,
    pub baseline_edges: usize,
    pub only_relation: usize,
    pub only_baseline: usize,
    pub shared: usize,
}

#[derive(Clone, Debug)]
pub struct BaselineOutput {
    pub report: BaselineReport,
    pub baseline_edges: BTreeSet<Edge>,
    pub relation_edges: BTreeSet<Edge>,
    pub comparison: EdgeComparison,
}

/// Runs both pipelines on a corpus and compares their final edge sets.
pub fn baseline(
    corpus: &Corpus,
    cfg: &PipelineConfig,
    normalizer: &NormalizerConfig,
) -> Result<BaselineOutput> {
    cfg.validate()?;
    let relation_edges = build(corpus, cfg, normalizer)?.edge_set();
    let docs = build_documents(corpus, normalizer);
    let baseline_cfg = cfg.baseline_config();
    let baseline_edges = induce_from_stats(&count_cooccurrence(&docs), &baseline_cfg)?;
    let comparison = compare_edges(&relation_edges, &baseline_edges);
    let (only_relation, only_baseline, shared) = comparison.counts();
    Ok(BaselineOutput {
        report: BaselineReport {
            threshold: baseline_cfg.threshold,
            min_support: baseline_cfg.min_support,
            documents: docs.len(),
            relation_edges: relation_edges.len(),
            baseline_edges: baseline_edges.len(),
            only_relation,
            only_baseline,
            shared,
        },
        baseline_edges,
        relation_edges,
        comparison,
    })
}

fn edge_tsv(edges: &[Edge]) -> String {
    edges.iter().map(|(b, n)| format!("{b}\t{n}\n")).collect()
}

/// Loads `input`, runs [`baseline`], and writes `baseline.tsv`,
/// `only_relation.tsv`, `only_baseline.tsv`, `shared.tsv` and
/// `baseline_report.json` to `cfg.output_dir`.
pub fn run_baseline(
    input: &Path,
    format: Option<InputFormat>,
    cfg: &PipelineConfig,
) -> Result<BaselineOutput> {
    cfg.validate()?;
    let normalizer = cfg.normalizer()?;
    let format = format.unwrap_or_else(|| InputFormat::from_path(input));
    let (corpus, _) = load_corpus(input, format)?;
    let out = baseline(&corpus, cfg, &normalizer)?;
    let dir = &cfg.output_dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let all: Vec<Edge> = out.baseline_edges.iter().cloned().collect();
    write_file(dir, "baseline.tsv", edge_tsv(&all).as_bytes())?;
    write_file(
        dir,
        "only_relation.tsv",
        edge_tsv(&out.comparison.only_relation).as_bytes(),
    )?;
    write_file(
        dir,
        "only_baseline.tsv",
        edge_tsv(&out.comparison.only_baseline).as_bytes(),
    )?;
    write_file(
        dir,
        "shared.tsv",
        edge_tsv(&out.comparison.shared).as_bytes(),
    )?;
    write_file(dir, "baseline_report.json", &to_json_bytes(&out.report))?;
    Ok(out)
}
