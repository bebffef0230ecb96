//! Graphs, the edge-list format, brute-force k-clique counting and the
//! Hamming-weight subspace index.
//!
//! Edge-list grammar (one item per line):
//!
//! ```text
//! # comment            ignored, as are blank lines
//! n <count>            optional header fixing the vertex count; must precede edges
//! <i> <j>              undirected edge between 0-based vertices i and j
//! ```
//!
//! Without a header the vertex count is one more than the largest id seen.
//! Duplicate edges are idempotent; self-loops and ids `≥ n` are errors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Largest number of vertex subsets [`count_kcliques`] will enumerate.
pub const MAX_SUBSETS: u64 = 10_000_000;

/// `C(n, k)`, exact for every value that fits in a `u64`; saturates otherwise.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Colexicographic rank of the subset encoded by `label`:
/// `Σ_i C(c_i, i + 1)` over its elements `c_0 < c_1 < …`.
pub fn colex_rank(label: u64) -> u64 {
    let mut rank = 0;
    let mut bits = label;
    let mut i = 0;
    while bits != 0 {
        let c = bits.trailing_zeros() as usize;
        rank += binomial(c, i + 1);
        bits &= bits - 1;
        i += 1;
    }
    rank
}

/// Inverse of [`colex_rank`] over the weight-`k` subsets of `{0, …, n−1}`.
pub fn colex_unrank(n: usize, k: usize, mut rank: u64) -> u64 {
    debug_assert!(rank < binomial(n, k));
    let mut label = 0u64;
    let mut upper = n;
    for i in (1..=k).rev() {
        // largest c < upper with C(c, i) <= rank
        let mut c = upper - 1;
        while binomial(c, i) > rank {
            c -= 1;
        }
        label |= 1 << c;
        rank -= binomial(c, i);
        upper = c;
    }
    label
}

/// Bijection between weight-`k` labels over `n` bits and `0..C(n,k)`, in
/// colexicographic order (`0b0011 < 0b0101 < 0b0110 < 0b1001 < …`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceIndex {
    n: usize,
    k: usize,
    labels: Vec<u64>,
}

impl SubspaceIndex {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k > n || n > 63 {
            return Err(Error::InvalidParameter(format!(
                "no Hamming subspace for n = {n}, k = {k}"
            )));
        }
        let size = binomial(n, k);
        if size > MAX_SUBSETS {
            return Err(Error::SizeCap {
                what: format!("C({n},{k}) = {size} subsets"),
                limit: MAX_SUBSETS as usize,
            });
        }
        // Gosper's hack walks weight-k words in increasing numeric order,
        // which for fixed weight is exactly colex order.
        let mut labels = Vec::with_capacity(size as usize);
        if k == 0 {
            labels.push(0);
        } else {
            let mut x: u64 = (1u64 << k) - 1;
            while x >> n == 0 {
                labels.push(x);
                let c = x & x.wrapping_neg();
                let r = x + c;
                x = (((r ^ x) >> 2) / c) | r;
            }
        }
        Ok(Self { n, k, labels })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn rank(&self, label: u64) -> Option<usize> {
        (label >> self.n == 0 && label.count_ones() as usize == self.k)
            .then(|| colex_rank(label) as usize)
    }

    pub fn unrank(&self, index: usize) -> Option<u64> {
        self.labels.get(index).copied()
    }
}

/// Simple undirected graph with a dense adjacency matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<bool>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            adj: vec![false; n * n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in 0..i {
                g.set_edge(i, j);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(i, j) in edges {
            if i == j {
                return Err(Error::InvalidParameter(format!("self-loop at vertex {i}")));
            }
            if i >= n || j >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({i}, {j}) out of range for {n} vertices"
                )));
            }
            g.set_edge(i, j);
        }
        Ok(g)
    }

    fn set_edge(&mut self, i: usize, j: usize) {
        self.adj[i * self.n + j] = true;
        self.adj[j * self.n + i] = true;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.n + j]
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| ((i + 1)..self.n).filter(move |&j| self.has_edge(i, j)).map(move |j| (i, j)))
    }

    /// Neighbour bitmask of vertex `i` (requires `n ≤ 64`).
    fn neighbour_mask(&self, i: usize) -> u64 {
        (0..self.n).filter(|&j| self.has_edge(i, j)).fold(0, |m, j| m | 1 << j)
    }

    /// Serializes in the edge-list format accepted by [`load_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for (i, j) in self.edges() {
            out.push_str(&format!("{i} {j}\n"));
        }
        out
    }
}

/// Samples G(n, p): each of the C(n,2) edges is present independently with
/// probability `p`, drawn in the order `i = 1..n, j = 0..i` from a
/// `ChaCha8Rng` seeded with `seed`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::empty(n);
    for i in 1..n {
        for j in 0..i {
            if rng.random::<f64>() < p {
                g.set_edge(i, j);
            }
        }
    }
    Ok(g)
}

pub fn load_edge_list(text: &str) -> Result<Graph> {
    let mut declared: Option<usize> = None;
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |msg: String| Error::Parse { line: line_no, msg };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_err(format!("expected two fields, found {}", fields.len())));
        }
        if fields[0] == "n" {
            if declared.is_some() {
                return Err(parse_err("duplicate vertex-count header".into()));
            }
            if !edges.is_empty() {
                return Err(parse_err("vertex-count header must precede edges".into()));
            }
            let n = fields[1]
                .parse::<usize>()
                .map_err(|_| parse_err(format!("invalid vertex count '{}'", fields[1])))?;
            declared = Some(n);
            continue;
        }
        let parse_id = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| parse_err(format!("invalid vertex id '{s}'")))
        };
        let (i, j) = (parse_id(fields[0])?, parse_id(fields[1])?);
        if i == j {
            return Err(parse_err(format!("self-loop at vertex {i}")));
        }
        if let Some(n) = declared {
            if i >= n || j >= n {
                return Err(parse_err(format!("vertex id {} out of range for n = {n}", i.max(j))));
            }
        }
        edges.push((i, j, line_no));
    }
    let n = declared.unwrap_or_else(|| edges.iter().map(|&(i, j, _)| i.max(j) + 1).max().unwrap_or(0));
    let mut g = Graph::empty(n);
    for (i, j, _) in edges {
        g.set_edge(i, j);
    }
    Ok(g)
}

fn check_clique_args(g: &Graph, k: usize) -> Result<()> {
    if k < 2 || k > g.n() {
        return Err(Error::InvalidParameter(format!(
            "clique size k = {k} must satisfy 2 <= k <= n = {}",
            g.n()
        )));
    }
    if g.n() > 63 {
        return Err(Error::SizeCap {
            what: format!("graph with {} vertices", g.n()),
            limit: 63,
        });
    }
    let subsets = binomial(g.n(), k);
    if subsets > MAX_SUBSETS {
        return Err(Error::SizeCap {
            what: format!("C({},{k}) = {subsets} vertex subsets", g.n()),
            limit: MAX_SUBSETS as usize,
        });
    }
    Ok(())
}

/// Number of k-vertex subsets with all `C(k,2)` internal edges, by
/// exhaustive enumeration.
pub fn count_kcliques(g: &Graph, k: usize) -> Result<u64> {
    check_clique_args(g, k)?;
    let masks: Vec<u64> = (0..g.n()).map(|i| g.neighbour_mask(i)).collect();
    let index = SubspaceIndex::new(g.n(), k)?;
    let count = index
        .labels()
        .iter()
        .filter(|&&label| missing_edges(&masks, label) == 0)
        .count();
    Ok(count as u64)
}

/// Number of absent edges inside the vertex subset `label`.
fn missing_edges(masks: &[u64], label: u64) -> u32 {
    let mut bits = label;
    let mut missing = 0;
    while bits != 0 {
        let i = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        // pairs (i, j) with j > i inside the subset
        missing += (bits & !masks[i]).count_ones();
    }
    missing
}

/// Cost `h_C(z) = Σ_{i>j} (1 − G_ij) z_i z_j` for every weight-`k` label,
/// in [`SubspaceIndex`] order. `deformed` clamps each value to `min(h_C, 1)`.
pub fn cost_values(g: &Graph, k: usize, deformed: bool) -> Result<Vec<f64>> {
    check_clique_args(g, k)?;
    let masks: Vec<u64> = (0..g.n()).map(|i| g.neighbour_mask(i)).collect();
    let index = SubspaceIndex::new(g.n(), k)?;
    Ok(index
        .labels()
        .iter()
        .map(|&label| {
            let h = missing_edges(&masks, label) as f64;
            if deformed {
                h.min(1.0)
            } else {
                h
            }
        })
        .collect())
}
