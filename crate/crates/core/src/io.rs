//! Edge-list ingestion, probability assignment and dataset statistics.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Model, NodeId, ProbGraph};
use crate::rng::MasterSeed;

/// Probability values used by the trivalency model.
pub const TR_VALUES: [f64; 3] = [0.1, 0.01, 0.001];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbModel {
    /// Trivalency: each edge draws from [`TR_VALUES`].
    #[default]
    Tr,
    /// Weighted cascade: `p(u, v) = 1 / in_degree(v)`.
    Wc,
    /// Probabilities read from the third column of the file.
    Explicit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeedSpec {
    /// Original ids as they appear in the edge list.
    Ids(Vec<u64>),
    /// A file with one original id per line.
    File(PathBuf),
    /// `k` distinct non-isolated nodes drawn at random.
    Random(usize),
}

impl std::str::FromStr for SeedSpec {
    type Err = Error;

    /// Parses `random:k`, `ids:a,b,c` or a file path.
    fn from_str(s: &str) -> Result<SeedSpec> {
        if let Some(k) = s.strip_prefix("random:") {
            let k = k
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad seed count in '{s}'")))?;
            return Ok(SeedSpec::Random(k));
        }
        if let Some(ids) = s.strip_prefix("ids:") {
            let ids = ids
                .split(',')
                .map(|x| x.trim().parse::<u64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::InvalidArgument(format!("bad seed id list in '{s}'")))?;
            return Ok(SeedSpec::Ids(ids));
        }
        Ok(SeedSpec::File(PathBuf::from(s)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub path: PathBuf,
    pub directed: bool,
    pub prob_model: ProbModel,
    pub seed_spec: SeedSpec,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub n: usize,
    pub m: usize,
    /// `2m / n`.
    pub d_avg: f64,
    /// Largest in-degree plus out-degree.
    pub d_max: usize,
}

/// Raw parse result before it becomes a [`ProbGraph`].
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeList {
    /// Original id of each internal node, ascending.
    pub labels: Vec<u64>,
    /// Internal `(src, dst, p)` triples in file order.
    pub edges: Vec<(u32, u32, Option<f64>)>,
    pub self_loops_dropped: usize,
}

impl EdgeList {
    /// Missing probabilities become NaN, which validation rejects until a
    /// probability model is applied.
    pub fn into_graph(self) -> Result<ProbGraph> {
        let n = self.labels.len();
        ProbGraph::new(
            n,
            self.edges
                .into_iter()
                .map(|(u, v, p)| (u, v, p.unwrap_or(f64::NAN))),
        )?
        .with_labels(self.labels)
    }

    pub fn has_probabilities(&self) -> bool {
        !self.edges.is_empty() && self.edges.iter().all(|e| e.2.is_some())
    }
}

/// Parses whitespace-separated `u v` or `u v p` lines. `#` lines and
/// blank lines are skipped. Undirected input yields both directions of
/// every edge.
pub fn parse_edge_list<R: BufRead>(reader: R, directed: bool, path: &Path) -> Result<EdgeList> {
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut raw: Vec<(u64, u64, Option<f64>)> = Vec::new();
    let mut seen: HashMap<(u64, u64), usize> = HashMap::new();
    let mut self_loops = 0;
    let mut with_p: Option<bool> = None;
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        if fields.len() != 2 && fields.len() != 3 {
            return Err(parse_err(
                lineno,
                format!("expected 'u v' or 'u v p', found {} fields", fields.len()),
            ));
        }
        let id = |f: &str| {
            f.parse::<u64>()
                .map_err(|_| parse_err(lineno, format!("invalid node id '{f}'")))
        };
        let (u, v) = (id(fields[0])?, id(fields[1])?);
        let p = match fields.get(2) {
            Some(f) => Some(
                f.parse::<f64>()
                    .map_err(|_| parse_err(lineno, format!("invalid probability '{f}'")))?,
            ),
            None => None,
        };
        match with_p {
            None => with_p = Some(p.is_some()),
            Some(had) if had != p.is_some() => {
                return Err(parse_err(lineno, "inconsistent number of columns".into()));
            }
            _ => {}
        }
        if u == v {
            self_loops += 1;
            continue;
        }
        let dirs: &[(u64, u64)] = if directed {
            &[(u, v)]
        } else {
            &[(u, v), (v, u)]
        };
        for &(a, b) in dirs {
            if seen.insert((a, b), lineno).is_some() {
                return Err(Error::DuplicateEdge {
                    path: path.to_path_buf(),
                    line: lineno,
                    src: a,
                    dst: b,
                });
            }
            raw.push((a, b, p));
        }
    }

    let mut labels: Vec<u64> = raw.iter().flat_map(|&(u, v, _)| [u, v]).collect();
    labels.sort_unstable();
    labels.dedup();
    let index: HashMap<u64, u32> = labels
        .iter()
        .enumerate()
        .map(|(i, &l)| (l, i as u32))
        .collect();
    let edges = raw
        .into_iter()
        .map(|(u, v, p)| (index[&u], index[&v], p))
        .collect();
    Ok(EdgeList {
        labels,
        edges,
        self_loops_dropped: self_loops,
    })
}

pub fn read_edge_list(path: &Path, directed: bool) -> Result<EdgeList> {
    let f = File::open(path)?;
    parse_edge_list(BufReader::new(f), directed, path)
}

/// Loads the file named by `spec`. Probabilities are taken from the file
/// when present. Seeds are not attached; see [`resolve_seeds`].
pub fn load_edge_list(spec: &DatasetSpec) -> Result<ProbGraph> {
    let list = read_edge_list(&spec.path, spec.directed)?;
    if spec.prob_model == ProbModel::Explicit && !list.has_probabilities() {
        return Err(Error::Parse {
            path: spec.path.clone(),
            line: 0,
            msg: "explicit probabilities requested but the file has no probability column".into(),
        });
    }
    list.into_graph()
}

/// Trivalency assignment; reproducible for a fixed `seed`.
pub fn assign_tr(g: &ProbGraph, seed: MasterSeed) -> ProbGraph {
    let mut rng = seed.rng();
    g.with_probabilities(|_, _| TR_VALUES[rng.random_range(0..TR_VALUES.len())])
}

/// Weighted-cascade assignment over the active edges.
pub fn assign_wc(g: &ProbGraph) -> ProbGraph {
    let indeg: Vec<usize> = (0..g.n() as u32).map(|v| g.in_degree(NodeId(v))).collect();
    g.with_probabilities(|_, e| {
        let d = indeg[e.dst.index()];
        if d == 0 {
            0.0
        } else {
            1.0 / d as f64
        }
    })
}

/// Applies `model` to a freshly loaded graph.
pub fn assign_probabilities(g: &ProbGraph, model: ProbModel, seed: MasterSeed) -> ProbGraph {
    match model {
        ProbModel::Tr => assign_tr(g, seed),
        ProbModel::Wc => assign_wc(g),
        ProbModel::Explicit => g.clone(),
    }
}

pub fn stats(g: &ProbGraph) -> DatasetStats {
    let n = (0..g.n() as u32)
        .filter(|&v| g.is_node_alive(NodeId(v)))
        .count();
    let m = g.active_edge_count();
    let d_max = (0..g.n() as u32)
        .map(|v| g.in_degree(NodeId(v)) + g.out_degree(NodeId(v)))
        .max()
        .unwrap_or(0);
    DatasetStats {
        n,
        m,
        d_avg: if n == 0 {
            0.0
        } else {
            2.0 * m as f64 / n as f64
        },
        d_max,
    }
}

/// Reads original ids, one per line; `#` lines are skipped.
pub fn read_seed_file(path: &Path) -> Result<Vec<u64>> {
    let f = BufReader::new(File::open(path)?);
    let mut ids = Vec::new();
    for (i, line) in f.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        ids.push(t.parse().map_err(|_| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            msg: format!("invalid seed id '{t}'"),
        })?);
    }
    Ok(ids)
}

/// `k` distinct nodes with at least one incident edge, sorted.
pub fn random_seeds(g: &ProbGraph, k: usize, seed: MasterSeed) -> Result<Vec<NodeId>> {
    let pool: Vec<NodeId> = (0..g.n() as u32)
        .map(NodeId)
        .filter(|&v| g.is_node_alive(v) && g.in_degree(v) + g.out_degree(v) > 0)
        .collect();
    if k > pool.len() {
        return Err(Error::InvalidArgument(format!(
            "requested {k} random seeds but only {} nodes are not isolated",
            pool.len()
        )));
    }
    let mut rng = seed.rng();
    let mut picked: Vec<NodeId> = sample(&mut rng, pool.len(), k)
        .into_iter()
        .map(|i| pool[i])
        .collect();
    picked.sort_unstable();
    Ok(picked)
}

/// Internal ids of the seeds described by `spec`.
pub fn resolve_seeds(g: &ProbGraph, spec: &SeedSpec, seed: MasterSeed) -> Result<Vec<NodeId>> {
    let ids = match spec {
        SeedSpec::Random(k) => return random_seeds(g, *k, seed),
        SeedSpec::Ids(ids) => ids.clone(),
        SeedSpec::File(p) => read_seed_file(p)?,
    };
    ids.into_iter()
        .map(|l| {
            g.node_by_label(l).ok_or_else(|| {
                Error::InvalidArgument(format!("seed {l} does not occur in the graph"))
            })
        })
        .collect()
}

/// Loads, assigns probabilities, attaches seeds and sets the model.
pub fn prepare(
    spec: &DatasetSpec,
    model: Model,
    prob_seed: MasterSeed,
    seed_seed: MasterSeed,
) -> Result<ProbGraph> {
    let g = load_edge_list(spec)?;
    let g = assign_probabilities(&g, spec.prob_model, prob_seed).with_model(model);
    let seeds = resolve_seeds(&g, &spec.seed_spec, seed_seed)?;
    g.with_seeds(seeds)
}
