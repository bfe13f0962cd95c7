//! Graph families and signals for the experiment suite.
//!
//! Latent-variable graphs (logistic edge probabilities on uniform 2-d latent
//! positions, optionally sparsified down toward an MST backbone), power-law
//! cluster growth, k-ary trees, degree-regular rooted trees, barbells, and
//! local attachments (cycle, star, clique, level edges). Signals are smooth
//! cosines of a 2-d embedding: the latent positions themselves, or the first
//! two Laplacian eigenvectors for the deterministic families.
//!
//! Every generator is a pure function of its parameters and seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Hard cap for the dense eigensolver; the experiments run at n ≈ 100.
pub const DENSE_EIGEN_CAP: usize = 5000;

const CONNECTIVITY_RETRIES: usize = 100;

/// Per-node 2-d coordinates: latent positions or spectral embeddings.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentEmbedding {
    coords: Vec<[f64; 2]>,
}

impl LatentEmbedding {
    pub fn from_rows(coords: Vec<[f64; 2]>) -> Self {
        Self { coords }
    }

    pub fn node_count(&self) -> usize {
        self.coords.len()
    }

    pub fn row(&self, i: usize) -> [f64; 2] {
        self.coords[i]
    }

    pub fn rows(&self) -> &[[f64; 2]] {
        &self.coords
    }
}

/// Signal roughness knob: the cosine coefficients are `(-alpha, alpha)`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SignalSpec {
    pub alpha: f64,
}

impl SignalSpec {
    pub fn beta(&self) -> (f64, f64) {
        (-self.alpha, self.alpha)
    }
}

/// Parameters of the latent-variable family.
///
/// Edge `(i, j)` appears with probability `1/(1 + exp(-scale·‖Uᵢ−Uⱼ‖))`,
/// which *increases* with latent distance (and is never below 1/2).
/// `negate_exponent` flips the exponent sign so that nearby nodes connect
/// more often instead; that variant is an off-spec convenience and not used
/// by the stock experiments.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LatentGraphParams {
    pub n: usize,
    #[serde(default = "default_scale")]
    pub scale: f64,
    #[serde(default)]
    pub sparsify_p: f64,
    #[serde(default)]
    pub negate_exponent: bool,
}

fn default_scale() -> f64 {
    5.0
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Unit-weight MST membership flags, Kruskal over edges in index order.
fn mst_membership(g: &Graph) -> Vec<bool> {
    let mut dsu = Dsu::new(g.node_count());
    g.edges().iter().map(|&(a, b)| dsu.union(a, b)).collect()
}

/// Sample a latent-variable graph.
///
/// Latent positions are uniform on `[0,1]²`; edges are independent
/// Bernoulli draws with the logistic probability above. The realized graph
/// must be connected (regenerated up to a retry cap otherwise). An MST
/// backbone (unit weights, edge-index tie-break) is then kept and every
/// non-backbone edge is deleted independently with probability
/// `sparsify_p`, so the result stays connected.
pub fn gen_latent_graph(
    params: &LatentGraphParams,
    seed: u64,
) -> Result<(Graph, LatentEmbedding)> {
    if params.n < 2 {
        return Err(Error::InvalidParameter(format!(
            "latent graph needs n >= 2, got {}",
            params.n
        )));
    }
    if !(0.0..=1.0).contains(&params.sparsify_p) {
        return Err(Error::InvalidParameter(format!(
            "sparsify_p must lie in [0, 1], got {}",
            params.sparsify_p
        )));
    }
    let n = params.n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..CONNECTIVITY_RETRIES {
        let coords: Vec<[f64; 2]> = (0..n).map(|_| [rng.random(), rng.random()]).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let dx = coords[i][0] - coords[j][0];
                let dy = coords[i][1] - coords[j][1];
                let dist = (dx * dx + dy * dy).sqrt();
                let exponent =
                    if params.negate_exponent { params.scale * dist } else { -params.scale * dist };
                let p = 1.0 / (1.0 + exponent.exp());
                if rng.random_bool(p) {
                    edges.push((i, j));
                }
            }
        }
        let realized = Graph::from_edge_list(&edges, n)?;
        if !realized.is_connected() {
            continue;
        }
        let in_mst = mst_membership(&realized);
        let kept: Vec<(usize, usize)> = realized
            .edges()
            .iter()
            .zip(&in_mst)
            .filter_map(|(&e, &backbone)| {
                if backbone || !rng.random_bool(params.sparsify_p) {
                    Some(e)
                } else {
                    None
                }
            })
            .collect();
        let sparsified = Graph::from_edge_list(&kept, n)?;
        return Ok((sparsified, LatentEmbedding::from_rows(coords)));
    }
    Err(Error::DisconnectedAfterRetries(CONNECTIVITY_RETRIES))
}

/// Power-law cluster growth: each new node attaches `m` edges; after the
/// first attachment, each further edge is a triad-formation step with
/// probability `p` (link to a random unlinked neighbor of the previous
/// target), otherwise preferential attachment proportional to degree.
pub fn gen_holme_kim(n: usize, m: usize, p: f64, seed: u64) -> Result<Graph> {
    if m < 1 || m >= n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= m < n, got m = {m}, n = {n}"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("triad probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    // Multiset of attachment targets; initial nodes get one entry each so
    // they are reachable before acquiring any degree.
    let mut repeated: Vec<usize> = (0..m).collect();

    let mut link = |a: usize,
                    b: usize,
                    edges: &mut Vec<(usize, usize)>,
                    adj: &mut Vec<Vec<usize>>,
                    repeated: &mut Vec<usize>| {
        edges.push((a, b));
        adj[a].push(b);
        adj[b].push(a);
        repeated.push(b);
    };

    for source in m..n {
        let mut last_target: Option<usize> = None;
        for k in 0..m {
            let mut chosen: Option<usize> = None;
            if k > 0 && rng.random_bool(p) {
                let prev = last_target.expect("set after first attachment");
                let candidates: Vec<usize> = adj[prev]
                    .iter()
                    .copied()
                    .filter(|&v| v != source && !adj[source].contains(&v))
                    .collect();
                if !candidates.is_empty() {
                    chosen = Some(candidates[rng.random_range(0..candidates.len())]);
                }
            }
            if chosen.is_none() {
                // Preferential attachment; rejection-sample the multiset,
                // with a uniform fallback so the loop always terminates.
                for _ in 0..50 * (m + 1) {
                    let t = repeated[rng.random_range(0..repeated.len())];
                    if t != source && !adj[source].contains(&t) {
                        chosen = Some(t);
                        break;
                    }
                }
                if chosen.is_none() {
                    let candidates: Vec<usize> =
                        (0..source).filter(|&v| !adj[source].contains(&v)).collect();
                    if candidates.is_empty() {
                        break;
                    }
                    chosen = Some(candidates[rng.random_range(0..candidates.len())]);
                }
            }
            let target = chosen.expect("fallback produced a candidate");
            link(source, target, &mut edges, &mut adj, &mut repeated);
            last_target = Some(target);
        }
        repeated.extend(std::iter::repeat(source).take(m));
    }
    Graph::from_edge_list(&edges, n)
}

/// Rooted k-ary tree: node 0 is the root; every node above the last level
/// has exactly `branching` children, down to `depth` levels. Internal nodes
/// therefore have degree `branching + 1` (the root has `branching`).
pub fn gen_tree(branching: usize, depth: usize) -> Graph {
    debug_assert!(branching >= 1 && depth >= 1);
    let mut edges = Vec::new();
    let mut level: Vec<usize> = vec![0];
    let mut next_index = 1;
    for _ in 0..depth {
        let mut next_level = Vec::with_capacity(level.len() * branching);
        for &parent in &level {
            for _ in 0..branching {
                edges.push((parent, next_index));
                next_level.push(next_index);
                next_index += 1;
            }
        }
        level = next_level;
    }
    Graph::from_edge_list(&edges, next_index).expect("tree construction is well formed")
}

/// Rooted tree in which every node down to the last level has edge degree
/// exactly `degree`: the root gets `degree` children, every internal node
/// `degree − 1`.
pub fn gen_regular_rooted_tree(degree: usize, depth: usize) -> Result<Graph> {
    if degree < 2 {
        return Err(Error::InvalidParameter(format!(
            "degree-regular tree needs degree >= 2, got {degree}"
        )));
    }
    if depth < 1 {
        return Err(Error::InvalidParameter("tree depth must be at least 1".into()));
    }
    let mut edges = Vec::new();
    let mut level: Vec<usize> = vec![0];
    let mut next_index = 1;
    for l in 0..depth {
        let children = if l == 0 { degree } else { degree - 1 };
        let mut next_level = Vec::with_capacity(level.len() * children);
        for &parent in &level {
            for _ in 0..children {
                edges.push((parent, next_index));
                next_level.push(next_index);
                next_index += 1;
            }
        }
        level = next_level;
    }
    Graph::from_edge_list(&edges, next_index)
}

/// Two `K_m` cliques joined by a chain of `n − 2m` nodes. Nodes `0` and `m`
/// anchor the chain ends (directly adjacent when the chain is empty).
pub fn gen_barbell(clique_size: usize, n: usize) -> Result<Graph> {
    let m = clique_size;
    if m < 2 {
        return Err(Error::InvalidParameter(format!("clique size must be >= 2, got {m}")));
    }
    if n < 2 * m {
        return Err(Error::InvalidParameter(format!(
            "barbell needs n >= 2m, got n = {n}, m = {m}"
        )));
    }
    let mut edges = Vec::new();
    for offset in [0, m] {
        for a in 0..m {
            for b in (a + 1)..m {
                edges.push((offset + a, offset + b));
            }
        }
    }
    if n == 2 * m {
        edges.push((0, m));
    } else {
        edges.push((0, 2 * m));
        for c in 2 * m..n - 1 {
            edges.push((c, c + 1));
        }
        edges.push((n - 1, m));
    }
    Graph::from_edge_list(&edges, n)
}

/// A local modification grafted onto an existing node.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Attachment {
    /// `r − 1` new nodes closing a cycle of length `r` through the node.
    Cycle(usize),
    /// `s` new leaves, all linked to the node only.
    Star(usize),
    /// `s` new nodes forming a clique of size `s + 1` with the node.
    Clique(usize),
    /// All edges between two BFS levels of a tree graph.
    LevelEdges(usize, usize),
}

/// Return a new graph with the attachment added at node `at`.
pub fn attach(g: &Graph, at: usize, what: &Attachment) -> Result<Graph> {
    let n = g.node_count();
    if at >= n {
        return Err(Error::NodeOutOfRange { index: at, n });
    }
    let mut edges: Vec<(usize, usize)> = g.edges().to_vec();
    match *what {
        Attachment::Cycle(r) => {
            if r < 3 {
                return Err(Error::InvalidParameter(format!(
                    "cycle length must be >= 3, got {r}"
                )));
            }
            edges.push((at, n));
            for k in 0..r - 2 {
                edges.push((n + k, n + k + 1));
            }
            edges.push((n + r - 2, at));
            Graph::from_edge_list(&edges, n + r - 1)
        }
        Attachment::Star(s) => {
            if s < 2 {
                return Err(Error::InvalidParameter(format!("star size must be >= 2, got {s}")));
            }
            for k in 0..s {
                edges.push((at, n + k));
            }
            Graph::from_edge_list(&edges, n + s)
        }
        Attachment::Clique(s) => {
            if s < 2 {
                return Err(Error::InvalidParameter(format!(
                    "clique size must be >= 2, got {s}"
                )));
            }
            let members: Vec<usize> = std::iter::once(at).chain(n..n + s).collect();
            for (idx, &a) in members.iter().enumerate() {
                for &b in &members[idx + 1..] {
                    edges.push((a, b));
                }
            }
            Graph::from_edge_list(&edges, n + s)
        }
        Attachment::LevelEdges(l1, l2) => {
            if !g.is_connected() || g.edge_count() != n.saturating_sub(1) {
                return Err(Error::InvalidParameter(
                    "level_edges applies only to tree graphs".into(),
                ));
            }
            if l1 == l2 {
                return Err(Error::InvalidParameter(
                    "level_edges needs two distinct levels".into(),
                ));
            }
            let levels = bfs_levels(g, 0);
            let at_l1: Vec<usize> =
                (0..n).filter(|&v| levels[v] == Some(l1)).collect();
            let at_l2: Vec<usize> =
                (0..n).filter(|&v| levels[v] == Some(l2)).collect();
            if at_l1.is_empty() || at_l2.is_empty() {
                return Err(Error::InvalidParameter(format!(
                    "tree has no nodes at level {}",
                    if at_l1.is_empty() { l1 } else { l2 }
                )));
            }
            for &a in &at_l1 {
                for &b in &at_l2 {
                    edges.push((a, b));
                }
            }
            Graph::from_edge_list(&edges, n)
        }
    }
}

fn bfs_levels(g: &Graph, root: usize) -> Vec<Option<usize>> {
    let mut levels = vec![None; g.node_count()];
    levels[root] = Some(0);
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        let next = levels[u].unwrap() + 1;
        for &v in g.neighbors(u) {
            if levels[v].is_none() {
                levels[v] = Some(next);
                queue.push_back(v);
            }
        }
    }
    levels
}

/// First two eigenvectors of the combinatorial Laplacian `L = D − A`,
/// eigenvalues ascending. The columns are unit vectors, sign-normalized so
/// the first coordinate above 1e-12 in magnitude is positive; exact
/// eigenvalue ties are broken by lexicographic comparison of the normalized
/// vectors. For a connected graph the first column is the constant vector.
pub fn spectral_embedding(g: &Graph) -> Result<LatentEmbedding> {
    spectral_embedding_cols(g, false)
}

/// Like [`spectral_embedding`], but `skip_constant = true` drops the
/// smallest-eigenvalue column and returns columns 2–3 instead.
pub fn spectral_embedding_cols(g: &Graph, skip_constant: bool) -> Result<LatentEmbedding> {
    let n = g.node_count();
    let needed = if skip_constant { 3 } else { 2 };
    if n < needed {
        return Err(Error::InvalidParameter(format!(
            "spectral embedding needs at least {needed} nodes, got {n}"
        )));
    }
    if n > DENSE_EIGEN_CAP {
        return Err(Error::TooLargeForDenseEigen { n, cap: DENSE_EIGEN_CAP });
    }
    let mut lap = nalgebra::DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        lap[(i, i)] = g.degree(i) as f64;
    }
    for &(a, b) in g.edges() {
        lap[(a, b)] = -1.0;
        lap[(b, a)] = -1.0;
    }
    let eigen = lap.symmetric_eigen();
    let mut pairs: Vec<(f64, Vec<f64>)> = (0..n)
        .map(|k| {
            let mut col: Vec<f64> = eigen.eigenvectors.column(k).iter().copied().collect();
            normalize_sign(&mut col);
            (eigen.eigenvalues[k], col)
        })
        .collect();
    pairs.sort_by(|a, b| {
        a.0.total_cmp(&b.0).then_with(|| {
            for (x, y) in a.1.iter().zip(&b.1) {
                match x.total_cmp(y) {
                    std::cmp::Ordering::Equal => continue,
                    other => return other,
                }
            }
            std::cmp::Ordering::Equal
        })
    });
    let first = if skip_constant { 1 } else { 0 };
    let coords = (0..n)
        .map(|i| [pairs[first].1[i], pairs[first + 1].1[i]])
        .collect();
    Ok(LatentEmbedding::from_rows(coords))
}

fn normalize_sign(v: &mut [f64]) {
    if let Some(lead) = v.iter().find(|x| x.abs() > 1e-12) {
        if *lead < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Smooth signal of the embedding: `f_i = 2·cos(-alpha·U_{i,0} + alpha·U_{i,1})`.
pub fn make_signal(u: &LatentEmbedding, alpha: f64) -> Vec<f64> {
    let (b0, b1) = SignalSpec { alpha }.beta();
    u.rows().iter().map(|&[x, y]| 2.0 * (b0 * x + b1 * y).cos()).collect()
}

/// Edgewise roughness `sqrt(Σ_{(i,j)∈E}(f_i − f_j)² / |E|)`; undefined on an
/// edgeless graph.
pub fn roughness(f: &[f64], g: &Graph) -> Result<f64> {
    assert_eq!(f.len(), g.node_count());
    if g.edge_count() == 0 {
        return Err(Error::EdgelessGraph);
    }
    let sum: f64 = g.edges().iter().map(|&(i, j)| (f[i] - f[j]) * (f[i] - f[j])).sum();
    Ok((sum / g.edge_count() as f64).sqrt())
}

/// `Y = f + sigma·ε` with i.i.d. standard normal `ε` from the given stream.
pub fn add_noise<R: Rng>(f: &[f64], sigma: f64, rng: &mut R) -> Vec<f64> {
    debug_assert!(sigma >= 0.0);
    let normal = StandardNormal;
    f.iter()
        .map(|x| x + sigma * <StandardNormal as Distribution<f64>>::sample(&normal, rng))
        .collect()
}

/// A reproducible description of a generated graph: family, parameters,
/// seed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphRecipe {
    #[serde(flatten)]
    pub family: GraphFamily,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GraphFamily {
    Latent(LatentGraphParams),
    HolmeKim { n: usize, m: usize, p: f64 },
    Tree { branching: usize, depth: usize },
    Barbell { clique_size: usize, n: usize },
}

impl GraphRecipe {
    /// Generate the graph together with the embedding its signals are built
    /// from: the latent positions for the latent family, the spectral
    /// embedding otherwise.
    pub fn realize(&self) -> Result<(Graph, LatentEmbedding)> {
        match &self.family {
            GraphFamily::Latent(params) => gen_latent_graph(params, self.seed),
            GraphFamily::HolmeKim { n, m, p } => {
                let g = gen_holme_kim(*n, *m, *p, self.seed)?;
                let u = spectral_embedding(&g)?;
                Ok((g, u))
            }
            GraphFamily::Tree { branching, depth } => {
                let g = gen_tree(*branching, *depth);
                let u = spectral_embedding(&g)?;
                Ok((g, u))
            }
            GraphFamily::Barbell { clique_size, n } => {
                let g = gen_barbell(*clique_size, *n)?;
                let u = spectral_embedding(&g)?;
                Ok((g, u))
            }
        }
    }

    /// Compact descriptive label for result rows and file names.
    pub fn label(&self) -> String {
        match &self.family {
            GraphFamily::Latent(p) => {
                let mut label = format!(
                    "latent(n={},scale={},sparsify_p={}",
                    p.n, p.scale, p.sparsify_p
                );
                if p.negate_exponent {
                    label.push_str(",negate_exponent");
                }
                label.push_str(&format!(",seed={})", self.seed));
                label
            }
            GraphFamily::HolmeKim { n, m, p } => {
                format!("holme_kim(n={n},m={m},p={p},seed={})", self.seed)
            }
            GraphFamily::Tree { branching, depth } => {
                format!("tree(branching={branching},depth={depth})")
            }
            GraphFamily::Barbell { clique_size, n } => {
                format!("barbell(m={clique_size},n={n})")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn latent_sparsify_extremes() {
        let params =
            LatentGraphParams { n: 40, scale: 5.0, sparsify_p: 0.0, negate_exponent: false };
        let (full, u) = gen_latent_graph(&params, 9).unwrap();
        assert_eq!(u.node_count(), 40);
        assert!(full.is_connected());

        let half = LatentGraphParams { sparsify_p: 0.5, ..params };
        let (sparser, _) = gen_latent_graph(&half, 9).unwrap();
        // Same seed draws the same realized graph, so the sparsified edge
        // set is a subset of the full one.
        assert!(sparser.edge_count() < full.edge_count());
        assert!(sparser
            .edges()
            .iter()
            .all(|&(a, b)| full.has_edge(a, b)));
        assert!(sparser.is_connected());

        let mst_only = LatentGraphParams { sparsify_p: 1.0, ..params };
        let (backbone, _) = gen_latent_graph(&mst_only, 9).unwrap();
        assert_eq!(backbone.edge_count(), 39);
        assert!(backbone.is_connected());
    }

    #[test]
    fn latent_density_band() {
        let params =
            LatentGraphParams { n: 100, scale: 5.0, sparsify_p: 0.0, negate_exponent: false };
        let (g, _) = gen_latent_graph(&params, 42).unwrap();
        let density = g.edge_count() as f64 / (100.0 * 99.0 / 2.0);
        // Edge probabilities never drop below 1/2 under this parametrization.
        assert!((0.45..=0.95).contains(&density), "density {density}");
    }

    #[test]
    fn latent_generation_is_deterministic() {
        let params =
            LatentGraphParams { n: 30, scale: 5.0, sparsify_p: 0.3, negate_exponent: false };
        let (g1, u1) = gen_latent_graph(&params, 5).unwrap();
        let (g2, u2) = gen_latent_graph(&params, 5).unwrap();
        assert_eq!(g1, g2);
        assert_eq!(u1, u2);
    }

    #[test]
    fn holme_kim_tree_case() {
        let g = gen_holme_kim(100, 1, 0.1, 3).unwrap();
        assert_eq!(g.edge_count(), 99);
        assert!(g.is_connected());
    }

    #[test]
    fn holme_kim_degree_sum_without_triads() {
        let g = gen_holme_kim(100, 3, 0.0, 17).unwrap();
        let degree_sum: usize = g.degrees().iter().sum();
        let expected = 2 * 3 * (100 - 3);
        assert!(
            degree_sum <= expected && degree_sum >= expected - 12,
            "degree sum {degree_sum}, nominal {expected}"
        );
    }

    #[test]
    fn holme_kim_rejects_bad_parameters() {
        assert!(gen_holme_kim(5, 0, 0.1, 1).is_err());
        assert!(gen_holme_kim(5, 5, 0.1, 1).is_err());
        assert!(gen_holme_kim(5, 2, 1.5, 1).is_err());
    }

    fn average_clustering(g: &Graph) -> f64 {
        let n = g.node_count();
        let mut total = 0.0;
        for i in 0..n {
            let neighbors = g.neighbors(i);
            let d = neighbors.len();
            if d < 2 {
                continue;
            }
            let mut links = 0;
            for (a_idx, &a) in neighbors.iter().enumerate() {
                for &b in &neighbors[a_idx + 1..] {
                    if g.has_edge(a, b) {
                        links += 1;
                    }
                }
            }
            total += 2.0 * links as f64 / (d * (d - 1)) as f64;
        }
        total / n as f64
    }

    #[test]
    fn holme_kim_clustering_grows_with_p() {
        let grid = [0.0, 0.3, 0.6, 0.9];
        let means: Vec<f64> = grid
            .iter()
            .map(|&p| {
                (0..50).map(|seed| average_clustering(&gen_holme_kim(100, 2, p, seed).unwrap()))
                    .sum::<f64>()
                    / 50.0
            })
            .collect();
        for pair in means.windows(2) {
            assert!(pair[0] < pair[1], "clustering means not increasing: {means:?}");
        }
    }

    #[test]
    fn tree_shapes() {
        let g = gen_tree(2, 2);
        assert_eq!(g.node_count(), 7);
        assert_eq!(g.degrees(), &[2, 3, 3, 1, 1, 1, 1]);

        let star = gen_tree(3, 1);
        assert_eq!(star.node_count(), 4);
        assert_eq!(star.degree(0), 3);

        assert_eq!(gen_tree(4, 4).node_count(), 341);
    }

    #[test]
    fn regular_rooted_tree_degrees() {
        let g = gen_regular_rooted_tree(3, 3).unwrap();
        // Every node within 2 hops of the root has degree exactly 3.
        for v in g.neighborhood(0, 2).unwrap().iter() {
            assert_eq!(g.degree(v), 3);
        }
        assert!(gen_regular_rooted_tree(1, 3).is_err());
    }

    #[test]
    fn barbell_shapes() {
        let tiny = gen_barbell(3, 6).unwrap();
        assert_eq!(tiny.edge_count(), 7);
        assert!(tiny.has_edge(0, 3));

        // Construction oracle: two K₂ cliques plus one chain node give
        // 2 + 2 = 4 edges on 5 nodes.
        let g = gen_barbell(2, 5).unwrap();
        assert_eq!(g.node_count(), 5);
        assert_eq!(g.edge_count(), 4);
        assert!(g.is_connected());

        let big = gen_barbell(20, 100).unwrap();
        assert_eq!(big.node_count(), 100);
        assert_eq!(big.edge_count(), 2 * (20 * 19 / 2) + 61);
        assert!(gen_barbell(3, 5).is_err());
    }

    #[test]
    fn attachments() {
        let g = gen_tree(2, 2);
        let with_cycle = attach(&g, 1, &Attachment::Cycle(3)).unwrap();
        assert_eq!(with_cycle.degree(1), g.degree(1) + 2);
        assert_eq!(with_cycle.node_count(), g.node_count() + 2);
        for v in g.node_count()..with_cycle.node_count() {
            assert_eq!(with_cycle.degree(v), 2);
        }

        let with_star = attach(&g, 0, &Attachment::Star(10)).unwrap();
        assert_eq!(with_star.degree(0), g.degree(0) + 10);
        for v in g.node_count()..with_star.node_count() {
            assert_eq!(with_star.degree(v), 1);
        }

        let with_clique = attach(&g, 0, &Attachment::Clique(10)).unwrap();
        assert_eq!(with_clique.degree(0), g.degree(0) + 10);
        for v in g.node_count()..with_clique.node_count() {
            assert_eq!(with_clique.degree(v), 10);
        }
    }

    #[test]
    fn level_edges_demands_a_tree() {
        let tree = gen_tree(2, 3);
        let with_levels = attach(&tree, 0, &Attachment::LevelEdges(2, 3)).unwrap();
        // 4 × 8 pairs, 8 of which already exist as parent-child edges.
        assert_eq!(with_levels.edge_count(), tree.edge_count() + 24);

        let cyclic = attach(&tree, 0, &Attachment::Cycle(3)).unwrap();
        assert!(attach(&cyclic, 0, &Attachment::LevelEdges(1, 2)).is_err());
    }

    #[test]
    fn spectral_embedding_of_connected_graph_starts_constant() {
        let g = gen_tree(2, 3);
        let u = spectral_embedding(&g).unwrap();
        let expected = 1.0 / (g.node_count() as f64).sqrt();
        for &[c, _] in u.rows() {
            assert!((c - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn spectral_embedding_of_path() {
        let g = Graph::from_edge_list(&[(0, 1), (1, 2)], 3).unwrap();
        let u = spectral_embedding(&g).unwrap();
        let root2 = 1.0 / 2.0f64.sqrt();
        let second: Vec<f64> = u.rows().iter().map(|r| r[1]).collect();
        let expected = [root2, 0.0, -root2];
        for (a, b) in second.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-9, "{second:?}");
        }
    }

    #[test]
    fn spectral_embedding_of_disconnected_graph_spans_the_kernel() {
        let g = Graph::from_edge_list(&[(0, 1), (2, 3)], 4).unwrap();
        let u = spectral_embedding(&g).unwrap();
        // Both columns must be Laplacian null vectors: constant per component.
        for col in 0..2 {
            let v: Vec<f64> = u.rows().iter().map(|r| r[col]).collect();
            assert!((v[0] - v[1]).abs() < 1e-9);
            assert!((v[2] - v[3]).abs() < 1e-9);
        }
    }

    #[test]
    fn signal_examples() {
        let u = LatentEmbedding::from_rows(vec![[0.3, 0.7], [0.5, 0.5]]);
        let f = make_signal(&u, 0.0);
        assert!(f.iter().all(|&x| (x - 2.0).abs() < 1e-15));

        let f = make_signal(&u, 3.0);
        assert!((f[1] - 2.0).abs() < 1e-15, "equal coordinates cancel");

        let alpha = 0.8;
        let u = LatentEmbedding::from_rows(vec![[0.0, std::f64::consts::FRAC_PI_2 / alpha]]);
        let f = make_signal(&u, alpha);
        assert!(f[0].abs() < 1e-12, "quarter period hits zero");
    }

    #[test]
    fn roughness_examples() {
        let edge = Graph::from_edge_list(&[(0, 1)], 2).unwrap();
        assert!((roughness(&[0.0, 2.0], &edge).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(roughness(&[1.0, 1.0], &edge).unwrap(), 0.0);

        let path = Graph::from_edge_list(&[(0, 1), (1, 2)], 3).unwrap();
        assert!((roughness(&[0.0, 1.0, 3.0], &path).unwrap() - 2.5f64.sqrt()).abs() < 1e-15);

        let empty = Graph::from_edge_list(&[], 3).unwrap();
        assert!(matches!(roughness(&[1.0, 2.0, 3.0], &empty), Err(Error::EdgelessGraph)));
    }

    #[test]
    fn noise_basics() {
        let f = vec![1.0, -2.0, 0.5];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(add_noise(&f, 0.0, &mut rng), f);

        let mut r1 = ChaCha8Rng::seed_from_u64(2);
        let mut r2 = ChaCha8Rng::seed_from_u64(2);
        assert_eq!(add_noise(&f, 1.0, &mut r1), add_noise(&f, 1.0, &mut r2));
    }

    #[test]
    fn noise_sample_variance() {
        let f = vec![0.0; 10_000];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let y = add_noise(&f, 1.0, &mut rng);
        let mean = y.iter().sum::<f64>() / y.len() as f64;
        let var = y.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (y.len() - 1) as f64;
        assert!((0.94..=1.06).contains(&var), "sample variance {var}");
    }

    #[test]
    fn roughness_grows_with_alpha_on_suite_graphs() {
        let graphs = vec![
            gen_tree(2, 4),
            gen_barbell(5, 20).unwrap(),
            gen_holme_kim(50, 2, 0.3, 1).unwrap(),
        ];
        for g in graphs {
            let u = spectral_embedding(&g).unwrap();
            let values: Vec<f64> = [0.001, 0.1, 1.0, 5.0, 10.0]
                .iter()
                .map(|&alpha| roughness(&make_signal(&u, alpha), &g).unwrap())
                .collect();
            for pair in values.windows(2) {
                assert!(pair[0] <= pair[1], "roughness not monotone: {values:?}");
            }
        }
    }

    #[test]
    fn recipes_are_deterministic() {
        let recipe = GraphRecipe {
            family: GraphFamily::HolmeKim { n: 60, m: 2, p: 0.4 },
            seed: 11,
        };
        let (g1, u1) = recipe.realize().unwrap();
        let (g2, u2) = recipe.realize().unwrap();
        assert_eq!(g1, g2);
        assert_eq!(u1, u2);
        assert_eq!(recipe.label(), "holme_kim(n=60,m=2,p=0.4,seed=11)");
    }

    #[test]
    fn recipe_serde_round_trip() {
        let json = r#"{"family":"latent","n":50,"sparsify_p":0.25,"seed":3}"#;
        let recipe: GraphRecipe = serde_json::from_str(json).unwrap();
        match &recipe.family {
            GraphFamily::Latent(p) => {
                assert_eq!(p.n, 50);
                assert_eq!(p.scale, 5.0);
                assert_eq!(p.sparsify_p, 0.25);
                assert!(!p.negate_exponent);
            }
            other => panic!("wrong family: {other:?}"),
        }
        assert_eq!(recipe.seed, 3);
    }
}
