//! Erdős–Rényi MaxCut instances and their exact classical cost tables.
//!
//! Bitstring convention, used everywhere in the crate: bit `i` of the integer
//! `x` is the partition label of vertex `i`. When a bitstring is written as
//! text, character `i` (left to right) is vertex `i`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// Largest vertex count a [`CostTable`] is built for unless a caller raises it.
pub const DEFAULT_QUBIT_CAP: usize = 24;

/// Hard ceiling: vertices are packed into `u64` masks.
const MAX_VERTICES: usize = 63;

/// An undirected simple graph on vertices `0..n`.
///
/// Edges are stored as `(i, j)` with `i < j`, sorted lexicographically, which
/// is also the canonical JSON form `{"n": .., "edges": [[i, j], ..], "seed": ..}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph")]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

#[derive(Deserialize)]
struct RawGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(default)]
    seed: Option<u64>,
}

impl TryFrom<RawGraph> for Graph {
    type Error = Error;

    fn try_from(raw: RawGraph) -> Result<Self> {
        let mut g = Graph::new(raw.n, raw.edges)?;
        g.seed = raw.seed;
        Ok(g)
    }
}

impl Graph {
    /// Builds a graph from an edge list. Pairs may be given in either order;
    /// self-loops, out-of-range endpoints and repeated pairs are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if n > MAX_VERTICES {
            return Err(Error::TooManyQubits { n, cap: MAX_VERTICES });
        }
        let mut normalized = Vec::new();
        for (a, b) in edges {
            if a == b || a >= n || b >= n {
                return Err(Error::InvalidEdge(a, b, n));
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Self { n, edges: normalized, seed: None })
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Result<Self> {
        Self::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Seed the graph was sampled from, if it came from [`gen_er`].
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Number of edges whose endpoints carry different labels in `bits`.
    pub fn cut_value(&self, bits: &[bool]) -> Result<usize> {
        if bits.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: bits.len() });
        }
        Ok(self.edges.iter().filter(|&&(i, j)| bits[i] != bits[j]).count())
    }

    /// Cut value of the bitstring packed into `x` (bit `i` = vertex `i`).
    pub fn cut_value_of(&self, x: u64) -> usize {
        self.edges
            .iter()
            .filter(|&&(i, j)| ((x >> i) ^ (x >> j)) & 1 == 1)
            .count()
    }

    /// Neighbour masks: bit `j` of entry `i` is set when `(i, j)` is an edge.
    fn neighbour_masks(&self) -> Vec<u64> {
        let mut masks = vec![0u64; self.n];
        for &(i, j) in &self.edges {
            masks[i] |= 1 << j;
            masks[j] |= 1 << i;
        }
        masks
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Parses a text bitstring such as `"0011"`; character `i` is vertex `i`.
pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Config(format!("'{other}' is not a bit"))),
        })
        .collect()
}

/// Samples G(n, p_edge): each of the n(n-1)/2 pairs, visited in lexicographic
/// order, is kept when a uniform draw from the seeded stream is below `p_edge`.
pub fn gen_er(n: usize, p_edge: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if !(0.0..=1.0).contains(&p_edge) {
        return Err(Error::InvalidProbability(p_edge));
    }
    let mut stream = rng::stream(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let u: f64 = stream.random();
            if u < p_edge {
                edges.push((i, j));
            }
        }
    }
    let mut g = Graph::new(n, edges)?;
    g.seed = Some(seed);
    Ok(g)
}

/// The diagonal of the MaxCut cost Hamiltonian: `values[x]` is the cut value
/// of bitstring `x`, for all `2^n` bitstrings, plus the exact optimum.
#[derive(Clone, Debug)]
pub struct CostTable {
    n: usize,
    num_edges: usize,
    values: Vec<f64>,
    optimum: f64,
}

impl CostTable {
    /// Enumerates all cuts of `graph` with the default cap of
    /// [`DEFAULT_QUBIT_CAP`] vertices.
    pub fn build(graph: &Graph) -> Result<Self> {
        Self::build_with_cap(graph, DEFAULT_QUBIT_CAP)
    }

    pub fn build_with_cap(graph: &Graph, cap: usize) -> Result<Self> {
        let n = graph.n();
        if n > cap.min(MAX_VERTICES) {
            return Err(Error::TooManyQubits { n, cap: cap.min(MAX_VERTICES) });
        }
        let masks = graph.neighbour_masks();
        let mut values = vec![0.0f64; 1usize << n];
        let mut optimum = 0.0f64;
        // x = y | (1 << h) with h the top set bit: flipping h into the other
        // side changes the cut by deg(h) - 2 |N(h) ∩ y|.
        for x in 1usize..values.len() {
            let h = usize::BITS as usize - 1 - x.leading_zeros() as usize;
            let y = x ^ (1 << h);
            let same_side = (masks[h] & y as u64).count_ones() as f64;
            let v = values[y] + masks[h].count_ones() as f64 - 2.0 * same_side;
            values[x] = v;
            if v > optimum {
                optimum = v;
            }
        }
        Ok(Self { n, num_edges: graph.num_edges(), values, optimum })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Exact MaxCut value.
    pub fn optimum(&self) -> f64 {
        self.optimum
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    /// Largest integer cost level, used to index precomputed phase factors.
    pub(crate) fn max_level(&self) -> usize {
        self.optimum as usize
    }
}
