//! Weighted walks on the self-loop augmented graph.
//!
//! A length-`L` walk from node `i` visits `L+1` nodes where each step stays
//! put or crosses an edge. Under the row-stochastic operator the walk weight
//! is the product of `1/(d+1)` over its first `L` nodes; the symmetric
//! operator rescales that by `sqrt((d_i+1)/(d_j+1))` for endpoint `j`. Summing
//! walk weights by endpoint reproduces the entries of the operator powers
//! exactly, which makes enumeration an independent oracle for the variance
//! quantities `E[(Pᴸ ε)ᵢ²]` — and the route by which the topology-specific
//! variance bounds checked here were derived.
//!
//! Enumeration is exponential in `L`, so it is guarded by a cap; the ordinary
//! computation path for variances is matrix powers ([`PropagationOperator`]).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::operators::{OperatorKind, PropagationOperator};
use crate::synth;

/// Default ceiling on enumerated walks per ensemble.
pub const DEFAULT_WALK_CAP: u64 = 10_000_000;

/// A walk `(i, ℓ₁, …, ℓ_{L−1}, j)` in the augmented graph: consecutive nodes
/// are equal (self-loop step) or adjacent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    pub nodes: Vec<usize>,
}

impl Walk {
    pub fn source(&self) -> usize {
        self.nodes[0]
    }

    pub fn endpoint(&self) -> usize {
        *self.nodes.last().unwrap()
    }

    /// Number of steps (one less than the node count).
    pub fn steps(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn is_valid_in(&self, g: &Graph) -> bool {
        self.nodes.windows(2).all(|w| w[0] == w[1] || g.has_edge(w[0], w[1]))
    }
}

/// Weight of a walk under the row-stochastic operator: the product of
/// `1/(d_u + 1)` over the walk's first `L` nodes (endpoint excluded).
pub fn weight_s(walk: &Walk, g: &Graph) -> f64 {
    walk.nodes[..walk.nodes.len() - 1]
        .iter()
        .map(|&u| 1.0 / g.aug_degree(u) as f64)
        .product()
}

/// Weight under the symmetric operator: the S-weight rescaled by
/// `sqrt((d_i+1)/(d_j+1))` for source `i` and endpoint `j`.
pub fn weight_t(walk: &Walk, g: &Graph) -> f64 {
    let scale =
        (g.aug_degree(walk.source()) as f64 / g.aug_degree(walk.endpoint()) as f64).sqrt();
    scale * weight_s(walk, g)
}

/// All length-`L` walks from one source, grouped by endpoint, with per-kind
/// weight sums.
#[derive(Debug, Clone)]
pub struct WalkEnsemble {
    pub source: usize,
    pub length: usize,
    pub by_endpoint: BTreeMap<usize, Vec<Walk>>,
    /// Endpoint → (sum of S-weights, sum of T-weights).
    pub weight_sums: BTreeMap<usize, (f64, f64)>,
}

impl WalkEnsemble {
    pub fn walk_count(&self) -> usize {
        self.by_endpoint.values().map(Vec::len).sum()
    }

    /// Total S-weight mass; equals 1 for every ensemble because the
    /// row-stochastic operator is a Markov transition matrix.
    pub fn total_weight_s(&self) -> f64 {
        self.weight_sums.values().map(|(s, _)| s).sum()
    }
}

/// Depth-first enumeration of all walks of exactly `length` steps from `i`.
///
/// Fails with [`Error::WalkExplosion`] when the estimate
/// `(max augmented degree)^length` exceeds `cap`; callers should fall back to
/// matrix powers in that case.
pub fn enumerate_walks(g: &Graph, i: usize, length: usize, cap: u64) -> Result<WalkEnsemble> {
    if i >= g.node_count() {
        return Err(Error::NodeOutOfRange { index: i, n: g.node_count() });
    }
    if length == 0 {
        return Err(Error::InvalidParameter("walk length must be at least 1".into()));
    }
    let max_aug = (0..g.node_count()).map(|v| g.aug_degree(v)).max().unwrap_or(1) as u128;
    let estimated = max_aug.checked_pow(length as u32).unwrap_or(u128::MAX);
    if estimated > cap as u128 {
        return Err(Error::WalkExplosion { estimated, cap });
    }

    let mut by_endpoint: BTreeMap<usize, Vec<Walk>> = BTreeMap::new();
    let mut prefix = vec![i];
    descend(g, length, &mut prefix, &mut by_endpoint);
    let mut weight_sums = BTreeMap::new();
    for (&endpoint, walks) in &by_endpoint {
        let s: f64 = walks.iter().map(|w| weight_s(w, g)).sum();
        let t_scale = (g.aug_degree(i) as f64 / g.aug_degree(endpoint) as f64).sqrt();
        weight_sums.insert(endpoint, (s, t_scale * s));
    }
    Ok(WalkEnsemble { source: i, length, by_endpoint, weight_sums })
}

fn descend(
    g: &Graph,
    remaining: usize,
    prefix: &mut Vec<usize>,
    out: &mut BTreeMap<usize, Vec<Walk>>,
) {
    let u = *prefix.last().unwrap();
    if remaining == 0 {
        out.entry(u).or_default().push(Walk { nodes: prefix.clone() });
        return;
    }
    // Augmented neighborhood in ascending node order.
    let mut placed_self = false;
    for &v in g.neighbors(u) {
        if v > u && !placed_self {
            prefix.push(u);
            descend(g, remaining - 1, prefix, out);
            prefix.pop();
            placed_self = true;
        }
        prefix.push(v);
        descend(g, remaining - 1, prefix, out);
        prefix.pop();
    }
    if !placed_self {
        prefix.push(u);
        descend(g, remaining - 1, prefix, out);
        prefix.pop();
    }
}

/// `E[(Pᴸ ε)ᵢ²]` computed from walk weights: the sum over endpoints of the
/// squared weight sums.
pub fn node_variance(ensemble: &WalkEnsemble, kind: OperatorKind) -> f64 {
    ensemble
        .weight_sums
        .values()
        .map(|&(s, t)| match kind {
            OperatorKind::S => s * s,
            OperatorKind::T => t * t,
        })
        .sum()
}

/// The `(i, j)` entry of the L-th operator power, as a sum of walk weights
/// over all length-`L` walks from `i` to `j`.
pub fn entry_via_walks(
    g: &Graph,
    i: usize,
    j: usize,
    length: usize,
    kind: OperatorKind,
    cap: u64,
) -> Result<f64> {
    if j >= g.node_count() {
        return Err(Error::NodeOutOfRange { index: j, n: g.node_count() });
    }
    let ensemble = enumerate_walks(g, i, length, cap)?;
    Ok(ensemble
        .weight_sums
        .get(&j)
        .map(|&(s, t)| match kind {
            OperatorKind::S => s,
            OperatorKind::T => t,
        })
        .unwrap_or(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundSide {
    Lower,
    Upper,
}

/// Outcome of one variance-bound check: the observed variance, the bound it
/// is compared against, and which side the bound sits on.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub observed: f64,
    pub bound: f64,
    pub side: BoundSide,
    pub satisfied: bool,
    /// The verified topology this bound applies to.
    pub topology: String,
}

const BOUND_TOL: f64 = 1e-12;

fn make_report(observed: f64, bound: f64, side: BoundSide, topology: String) -> BoundReport {
    let satisfied = match side {
        BoundSide::Upper => observed <= bound + BOUND_TOL,
        BoundSide::Lower => observed >= bound - BOUND_TOL,
    };
    BoundReport { observed, bound, side, satisfied, topology }
}

/// The neighborhood-size lower bound: `E[(Sᴸ ε)ᵢ²] ≥ 1/|𝒩ᴸ(i)|`, with
/// equality at `L = 1`. Observed via matrix powers for scalability.
pub fn check_lower_bound(g: &Graph, i: usize, depth: usize) -> BoundReport {
    let op = PropagationOperator::build(g, OperatorKind::S);
    let observed = op.row_variance(i, depth);
    let hood = g.neighborhood(i, depth).expect("node index in range");
    let bound = 1.0 / hood.len() as f64;
    make_report(
        observed,
        bound,
        BoundSide::Lower,
        format!("node {i}, depth {depth}, |N^L| = {}", hood.len()),
    )
}

/// The topology-specific variance bounds, checked numerically on graphs
/// constructed to satisfy each bound's structural precondition.
#[derive(Debug, Clone, Copy)]
pub enum VarianceBoundCheck {
    /// Root of a tree whose nodes within `depth` hops all have edge degree
    /// `degree`: variance is upper-bounded by
    /// `4·(d+1)^{-L}·(L+1)·3^{2L}` (exponential decay in `L`).
    TreeUpper { kind: OperatorKind, degree: usize, depth: usize },
    /// A hub of degree `hub_degree` feeding a chain of nodes with degree at
    /// most 3: variance is lower-bounded by `(d+1)^{-2}·4^{2-2L}` for the
    /// row-stochastic kind and `4^{2-2L}/((d+1)(d_j+1))` for the symmetric
    /// kind (decay cannot beat `4^{-2L}`).
    HubChainLower { kind: OperatorKind, hub_degree: usize, depth: usize },
    /// A cycle of length `cycle_len` sharing exactly one node of total degree
    /// `attach_degree` with the rest of the graph: variance is lower-bounded
    /// by `[3/((d_i+1)(r−1))]²·1.5^{-2L}` (row-stochastic) or
    /// `3/((d_i+1)(r−1)²)·1.5^{-2L}` (symmetric).
    CycleLower { kind: OperatorKind, cycle_len: usize, attach_degree: usize, depth: usize },
}

/// Build the check's prescribed topology, verify the structural
/// precondition, and compare the observed variance against the bound.
pub fn check_variance_bound(check: &VarianceBoundCheck) -> Result<BoundReport> {
    match *check {
        VarianceBoundCheck::TreeUpper { kind, degree, depth } => {
            if depth == 0 {
                return Err(Error::InvalidParameter("depth must be at least 1".into()));
            }
            // Depth L+1 so that even the outermost nodes of N^L keep degree d.
            let g = synth::gen_regular_rooted_tree(degree, depth + 1)?;
            let hood = g.neighborhood(0, depth)?;
            for v in hood.iter() {
                if g.degree(v) != degree {
                    return Err(Error::TopologyPrecondition(format!(
                        "node {v} within {depth} hops of the root has degree {}, expected {degree}",
                        g.degree(v)
                    )));
                }
            }
            let op = PropagationOperator::build(&g, kind);
            let observed = op.row_variance(0, depth);
            let d = degree as f64;
            let l = depth as f64;
            let bound = 4.0 * (d + 1.0).powi(-(depth as i32)) * (l + 1.0) * 3f64.powi(2 * depth as i32);
            Ok(make_report(
                observed,
                bound,
                BoundSide::Upper,
                format!("{kind}: rooted tree, all nodes in N^{depth}(root) of degree {degree}"),
            ))
        }
        VarianceBoundCheck::HubChainLower { kind, hub_degree, depth } => {
            if hub_degree == 0 || depth == 0 {
                return Err(Error::InvalidParameter(
                    "hub degree and depth must be at least 1".into(),
                ));
            }
            // Hub 0 with hub_degree−1 leaves plus a chain of `depth` nodes.
            let mut edges: Vec<(usize, usize)> = (1..hub_degree).map(|leaf| (0, leaf)).collect();
            let chain_start = hub_degree;
            edges.push((0, chain_start));
            for k in 0..depth - 1 {
                edges.push((chain_start + k, chain_start + k + 1));
            }
            let g = Graph::from_edge_list(&edges, hub_degree + depth)?;
            if g.degree(0) != hub_degree {
                return Err(Error::TopologyPrecondition(format!(
                    "hub degree is {}, expected {hub_degree}",
                    g.degree(0)
                )));
            }
            for k in 0..depth - 1 {
                let v = chain_start + k;
                if g.degree(v) > 3 {
                    return Err(Error::TopologyPrecondition(format!(
                        "chain node {v} has degree {} > 3",
                        g.degree(v)
                    )));
                }
            }
            let endpoint = chain_start + depth - 1;
            let op = PropagationOperator::build(&g, kind);
            let observed = op.row_variance(0, depth);
            let d = hub_degree as f64;
            let bound = match kind {
                OperatorKind::S => (d + 1.0).powi(-2) * 4f64.powi(2 - 2 * depth as i32),
                OperatorKind::T => {
                    4f64.powi(2 - 2 * depth as i32)
                        / ((d + 1.0) * g.aug_degree(endpoint) as f64)
                }
            };
            Ok(make_report(
                observed,
                bound,
                BoundSide::Lower,
                format!(
                    "{kind}: hub of degree {hub_degree} feeding a degree-≤3 chain of {depth} nodes"
                ),
            ))
        }
        VarianceBoundCheck::CycleLower { kind, cycle_len, attach_degree, depth } => {
            if cycle_len < 3 {
                return Err(Error::InvalidParameter(format!(
                    "cycle length must be at least 3, got {cycle_len}"
                )));
            }
            if attach_degree < 2 {
                return Err(Error::InvalidParameter(format!(
                    "attachment node degree must be at least 2 (the cycle contributes 2), got {attach_degree}"
                )));
            }
            if depth == 0 {
                return Err(Error::InvalidParameter("depth must be at least 1".into()));
            }
            // Node 0 carries attach_degree−2 pendant leaves; the cycle adds 2.
            let leaves = attach_degree - 2;
            let base: Vec<(usize, usize)> = (1..=leaves).map(|leaf| (0, leaf)).collect();
            let h = Graph::from_edge_list(&base, leaves + 1)?;
            let g = synth::attach(&h, 0, &synth::Attachment::Cycle(cycle_len))?;
            if g.degree(0) != attach_degree {
                return Err(Error::TopologyPrecondition(format!(
                    "attachment node degree is {}, expected {attach_degree}",
                    g.degree(0)
                )));
            }
            for v in leaves + 1..g.node_count() {
                if g.degree(v) != 2 {
                    return Err(Error::TopologyPrecondition(format!(
                        "cycle node {v} has degree {}, expected 2",
                        g.degree(v)
                    )));
                }
            }
            let op = PropagationOperator::build(&g, kind);
            let observed = op.row_variance(0, depth);
            let di = attach_degree as f64;
            let r = cycle_len as f64;
            let decay = 1.5f64.powi(-2 * depth as i32);
            let bound = match kind {
                OperatorKind::S => (3.0 / ((di + 1.0) * (r - 1.0))).powi(2) * decay,
                OperatorKind::T => 3.0 / ((di + 1.0) * (r - 1.0) * (r - 1.0)) * decay,
            };
            Ok(make_report(
                observed,
                bound,
                BoundSide::Lower,
                format!(
                    "{kind}: cycle of length {cycle_len} attached at a node of degree {attach_degree}"
                ),
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn path3() -> Graph {
        Graph::from_edge_list(&[(0, 1), (1, 2)], 3).unwrap()
    }

    fn single_edge() -> Graph {
        Graph::from_edge_list(&[(0, 1)], 2).unwrap()
    }

    fn walk(nodes: &[usize]) -> Walk {
        Walk { nodes: nodes.to_vec() }
    }

    #[test]
    fn enumerate_single_edge_two_steps() {
        let e = enumerate_walks(&single_edge(), 0, 2, DEFAULT_WALK_CAP).unwrap();
        assert_eq!(e.walk_count(), 4);
        let to0: Vec<_> = e.by_endpoint[&0].iter().map(|w| w.nodes.clone()).collect();
        let to1: Vec<_> = e.by_endpoint[&1].iter().map(|w| w.nodes.clone()).collect();
        assert_eq!(to0, vec![vec![0, 0, 0], vec![0, 1, 0]]);
        assert_eq!(to1, vec![vec![0, 0, 1], vec![0, 1, 1]]);
    }

    #[test]
    fn enumerate_path_examples() {
        let g = path3();
        let e1 = enumerate_walks(&g, 0, 1, DEFAULT_WALK_CAP).unwrap();
        assert_eq!(e1.walk_count(), 2);
        let e2 = enumerate_walks(&g, 0, 2, DEFAULT_WALK_CAP).unwrap();
        assert_eq!(e2.walk_count(), 5);
        let sizes: Vec<(usize, usize)> =
            e2.by_endpoint.iter().map(|(&j, ws)| (j, ws.len())).collect();
        assert_eq!(sizes, vec![(0, 2), (1, 2), (2, 1)]);
    }

    #[test]
    fn enumeration_cap_trips() {
        let g = path3();
        assert!(matches!(
            enumerate_walks(&g, 0, 4, 10),
            Err(Error::WalkExplosion { .. })
        ));
    }

    #[test]
    fn walks_are_valid_in_their_graph() {
        let g = path3();
        let e = enumerate_walks(&g, 1, 3, DEFAULT_WALK_CAP).unwrap();
        for walks in e.by_endpoint.values() {
            for w in walks {
                assert!(w.is_valid_in(&g));
                assert_eq!(w.steps(), 3);
                assert_eq!(w.source(), 1);
            }
        }
    }

    #[test]
    fn s_weights() {
        let g = path3();
        let edge = single_edge();
        assert!((weight_s(&walk(&[0, 1]), &edge) - 0.5).abs() < 1e-15);
        assert!((weight_s(&walk(&[0, 0, 1]), &edge) - 0.25).abs() < 1e-15);
        assert!((weight_s(&walk(&[0, 1, 2]), &g) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn t_weights_match_operator_entries() {
        let g = path3();
        let edge = single_edge();
        assert!((weight_t(&walk(&[0, 1]), &edge) - 0.5).abs() < 1e-15);
        let t01 = weight_t(&walk(&[0, 1]), &g);
        assert!((t01 - (2.0f64 / 3.0).sqrt() * 0.5).abs() < 1e-15);
        // Symmetry of the one-step weights across the same edge.
        let t10 = weight_t(&walk(&[1, 0]), &g);
        assert!((t01 - t10).abs() < 1e-15);
        let op = PropagationOperator::build(&g, OperatorKind::T);
        assert!((t01 - op.entry(0, 1)).abs() < 1e-15);
    }

    #[test]
    fn node_variance_examples() {
        let edge = single_edge();
        let e = enumerate_walks(&edge, 0, 2, DEFAULT_WALK_CAP).unwrap();
        assert!((node_variance(&e, OperatorKind::S) - 0.5).abs() < 1e-14);

        // At L = 1 the variance is exactly 1/(d_i + 1).
        let g = Graph::from_edge_list(&[(0, 1), (0, 2), (0, 3), (1, 2)], 4).unwrap();
        for i in 0..4 {
            let e = enumerate_walks(&g, i, 1, DEFAULT_WALK_CAP).unwrap();
            let expected = 1.0 / g.aug_degree(i) as f64;
            assert!((node_variance(&e, OperatorKind::S) - expected).abs() < 1e-14);
        }

        // Frozen from the dense oracle: (5/12)² + (5/12)² + (1/6)² = 3/8.
        let e = enumerate_walks(&path3(), 0, 2, DEFAULT_WALK_CAP).unwrap();
        assert!((node_variance(&e, OperatorKind::S) - 0.375).abs() < 1e-14);
    }

    #[test]
    fn entries_via_walks() {
        let edge = single_edge();
        assert!(
            (entry_via_walks(&edge, 0, 0, 2, OperatorKind::S, DEFAULT_WALK_CAP).unwrap() - 0.5)
                .abs()
                < 1e-14
        );
        let g = path3();
        assert!(
            (entry_via_walks(&g, 0, 2, 2, OperatorKind::S, DEFAULT_WALK_CAP).unwrap() - 1.0 / 6.0)
                .abs()
                < 1e-14
        );
        // L = 1 reproduces the operator itself.
        for kind in [OperatorKind::S, OperatorKind::T] {
            let op = PropagationOperator::build(&g, kind);
            for i in 0..3 {
                for j in 0..3 {
                    let via = entry_via_walks(&g, i, j, 1, kind, DEFAULT_WALK_CAP).unwrap();
                    assert!((via - op.entry(i, j)).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn lower_bound_reports() {
        let g = path3();
        for i in 0..3 {
            let report = check_lower_bound(&g, i, 1);
            assert!(report.satisfied);
            assert!((report.observed - report.bound).abs() < 1e-12, "equality at L = 1");
        }
        let report = check_lower_bound(&g, 0, 2);
        assert!(report.satisfied);
        assert!((report.observed - 0.375).abs() < 1e-12);
        assert!((report.bound - 1.0 / 3.0).abs() < 1e-15);

        let k4 = Graph::from_edge_list(
            &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
            4,
        )
        .unwrap();
        let report = check_lower_bound(&k4, 0, 3);
        assert!(report.satisfied);
        assert!(report.observed >= 0.25 - 1e-12);
    }

    #[test]
    fn tree_upper_bound_check() {
        let report = check_variance_bound(&VarianceBoundCheck::TreeUpper {
            kind: OperatorKind::S,
            degree: 3,
            depth: 2,
        })
        .unwrap();
        assert!(report.satisfied);
        assert!((report.bound - 60.75).abs() < 1e-12);
        assert!(report.observed <= 1.0);
    }

    #[test]
    fn hub_chain_lower_bound_check() {
        let report = check_variance_bound(&VarianceBoundCheck::HubChainLower {
            kind: OperatorKind::S,
            hub_degree: 10,
            depth: 3,
        })
        .unwrap();
        assert!(report.satisfied);
        assert!((report.bound - 1.0 / (121.0 * 256.0)).abs() < 1e-15);
    }

    #[test]
    fn cycle_lower_bound_check() {
        let report = check_variance_bound(&VarianceBoundCheck::CycleLower {
            kind: OperatorKind::S,
            cycle_len: 4,
            attach_degree: 4,
            depth: 2,
        })
        .unwrap();
        assert!(report.satisfied);
        let expected = (3.0 / (5.0 * 3.0)).powi(2) * 1.5f64.powi(-4);
        assert!((report.bound - expected).abs() < 1e-15);
        assert!(report.observed >= report.bound);
    }

    #[test]
    fn symmetric_kind_variants_hold() {
        let checks = [
            VarianceBoundCheck::TreeUpper { kind: OperatorKind::T, degree: 4, depth: 2 },
            VarianceBoundCheck::HubChainLower { kind: OperatorKind::T, hub_degree: 5, depth: 3 },
            VarianceBoundCheck::CycleLower {
                kind: OperatorKind::T,
                cycle_len: 5,
                attach_degree: 3,
                depth: 4,
            },
        ];
        for check in &checks {
            let report = check_variance_bound(check).unwrap();
            assert!(report.satisfied, "{}", report.topology);
        }
    }

    #[test]
    fn invalid_topology_parameters() {
        assert!(check_variance_bound(&VarianceBoundCheck::CycleLower {
            kind: OperatorKind::S,
            cycle_len: 2,
            attach_degree: 4,
            depth: 1,
        })
        .is_err());
        assert!(check_variance_bound(&VarianceBoundCheck::HubChainLower {
            kind: OperatorKind::S,
            hub_degree: 0,
            depth: 2,
        })
        .is_err());
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (2..=max_n).prop_flat_map(|n| {
            let pairs = (n * (n - 1)) / 2;
            proptest::collection::vec(any::<bool>(), pairs).prop_map(move |keep| {
                let mut edges = Vec::new();
                let mut k = 0;
                for a in 0..n {
                    for b in (a + 1)..n {
                        if keep[k] {
                            edges.push((a, b));
                        }
                        k += 1;
                    }
                }
                Graph::from_edge_list(&edges, n).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn weight_mass_is_one(g in arb_graph(8), depth in 1usize..=4) {
            for i in 0..g.node_count() {
                let e = enumerate_walks(&g, i, depth, DEFAULT_WALK_CAP).unwrap();
                prop_assert!((e.total_weight_s() - 1.0).abs() < 1e-12);
            }
        }

        #[test]
        fn endpoints_are_exactly_the_neighborhood(g in arb_graph(8), depth in 1usize..=4) {
            for i in 0..g.node_count() {
                let e = enumerate_walks(&g, i, depth, DEFAULT_WALK_CAP).unwrap();
                let endpoints: Vec<usize> = e.by_endpoint.keys().copied().collect();
                let hood = g.neighborhood(i, depth).unwrap();
                prop_assert_eq!(endpoints.as_slice(), hood.as_slice());
            }
        }

        #[test]
        fn walk_variance_matches_matrix_powers(g in arb_graph(8), depth in 1usize..=4) {
            for kind in [OperatorKind::S, OperatorKind::T] {
                let op = PropagationOperator::build(&g, kind);
                let profile = op.variance_profile(depth);
                for i in 0..g.node_count() {
                    let e = enumerate_walks(&g, i, depth, DEFAULT_WALK_CAP).unwrap();
                    let via_walks = node_variance(&e, kind);
                    prop_assert!(
                        (via_walks - profile.per_node[i]).abs() < 1e-9,
                        "kind {} node {} depth {}: {} vs {}",
                        kind, i, depth, via_walks, profile.per_node[i]
                    );
                }
            }
        }

        #[test]
        fn walk_entries_match_matrix_powers(g in arb_graph(7), depth in 1usize..=4) {
            use crate::operators::OperatorKind::*;
            for kind in [S, T] {
                let op = PropagationOperator::build(&g, kind);
                for i in 0..g.node_count() {
                    // Row i of the L-th power via repeated application to basis vectors.
                    for j in 0..g.node_count() {
                        let mut basis = vec![0.0; g.node_count()];
                        basis[j] = 1.0;
                        let col = op.apply_power(depth, &basis).unwrap();
                        let via = entry_via_walks(&g, i, j, depth, kind, DEFAULT_WALK_CAP).unwrap();
                        prop_assert!((via - col[i]).abs() < 1e-10);
                    }
                }
            }
        }

        #[test]
        fn lower_bound_holds_everywhere(g in arb_graph(8), depth in 1usize..=4) {
            for i in 0..g.node_count() {
                let report = check_lower_bound(&g, i, depth);
                prop_assert!(report.satisfied, "{}", report.topology);
                if depth == 1 {
                    prop_assert!((report.observed - report.bound).abs() < 1e-12);
                }
            }
        }
    }
}
