//! Smoothing estimators and their risk.
//!
//! Two families share one risk vocabulary:
//!
//! - the single-weight convolution estimator `Ŵ·Pᴸ·Y` with the closed-form
//!   least-squares weight `Ŵ = (Yᵀ Pᴸ Y) / ‖Pᴸ Y‖²`,
//! - the L-hop local average, node `i` mapped to the uniform mean of `Y`
//!   over its L-hop neighborhood.
//!
//! For a fixed weight the per-n mean squared error decomposes exactly into
//! `‖(W·Pᴸ − I)f*‖²/n + W²‖Pᴸ‖_F²/n` under centered, uncorrelated,
//! unit-variance noise. [`analytic_risk`] evaluates that decomposition;
//! [`monte_carlo_risk`] estimates the same quantities by simulation;
//! [`gcn_risk_bound`] and [`local_average_risk_bound`] evaluate the matching
//! closed-form upper bounds driven by the edgewise smoothness constant Δ.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeSet};
use crate::operators::{OperatorKind, PropagationOperator};

/// Squared-norm threshold below which a fit is treated as degenerate.
pub const DEGENERATE_NORM_SQ: f64 = 1e-300;

/// A fitted single-weight convolution estimator.
#[derive(Debug, Clone)]
pub struct GcnFit {
    pub w_hat: f64,
    pub fitted: Vec<f64>,
    pub depth: usize,
    pub kind: OperatorKind,
}

/// Fit the scalar weight by least squares: `Ŵ = (Yᵀ Pᴸ Y) / ‖Pᴸ Y‖²`.
///
/// Fails with [`Error::DegenerateFit`] when `Y` is (numerically) in the null
/// space of `Pᴸ`.
pub fn fit_gcn(y: &[f64], p: &PropagationOperator, depth: usize) -> Result<GcnFit> {
    let z = p.apply_power(depth, y)?;
    let norm_sq: f64 = z.iter().map(|x| x * x).sum();
    if norm_sq < DEGENERATE_NORM_SQ {
        return Err(Error::DegenerateFit { norm_sq });
    }
    let cross: f64 = y.iter().zip(&z).map(|(a, b)| a * b).sum();
    let w_hat = cross / norm_sq;
    let fitted = z.into_iter().map(|x| w_hat * x).collect();
    Ok(GcnFit { w_hat, fitted, depth, kind: p.kind() })
}

/// The L-hop local average: entry `i` is the mean of `y` over the L-hop
/// neighborhood of `i` (which always contains `i` itself).
pub fn local_average(y: &[f64], g: &Graph, depth: usize) -> Vec<f64> {
    assert_eq!(y.len(), g.node_count());
    (0..g.node_count())
        .map(|i| {
            let hood = g.neighborhood(i, depth).expect("index in range");
            hood.iter().map(|j| y[j]).sum::<f64>() / hood.len() as f64
        })
        .collect()
}

/// The edgewise smoothness constant Δ of a signal.
#[derive(Debug, Clone, Copy)]
pub struct SmoothnessDelta {
    pub delta: f64,
    pub kind: OperatorKind,
}

/// Maximum edge discrepancy of `f`: `|f_i − f_j|` for the row-stochastic
/// operator, `|√(d_i+1)·f_i − √(d_j+1)·f_j|` for the symmetric one.
/// An edgeless graph has Δ = 0.
pub fn smoothness_delta(f: &[f64], g: &Graph, kind: OperatorKind) -> SmoothnessDelta {
    assert_eq!(f.len(), g.node_count());
    let delta = g
        .edges()
        .iter()
        .map(|&(i, j)| match kind {
            OperatorKind::S => (f[i] - f[j]).abs(),
            OperatorKind::T => {
                ((g.aug_degree(i) as f64).sqrt() * f[i] - (g.aug_degree(j) as f64).sqrt() * f[j])
                    .abs()
            }
        })
        .fold(0.0, f64::max);
    SmoothnessDelta { delta, kind }
}

/// Upper bound on the per-n MSE of the fixed-weight convolution smoother:
/// squared bias term plus `W²‖Pᴸ‖_F²/n`.
///
/// The bias factor is `|W|·L·Δ + |1−W|·‖f*‖₂/√n` for the row-stochastic
/// operator; the symmetric one picks up the extra `√(2|E|/n + 1)` scale on
/// the Δ term.
pub fn gcn_risk_bound(
    depth: usize,
    w: f64,
    delta: &SmoothnessDelta,
    f_star: &[f64],
    p: &PropagationOperator,
) -> Result<f64> {
    if delta.kind != p.kind() {
        return Err(Error::KindMismatch {
            expected: p.kind().as_str(),
            got: delta.kind.as_str(),
        });
    }
    let n = p.node_count() as f64;
    let f_norm = f_star.iter().map(|x| x * x).sum::<f64>().sqrt();
    let degree_scale = match p.kind() {
        OperatorKind::S => 1.0,
        // Σ(d_i + 1) = 2|E| + n, so this is √(2|E|/n + 1).
        OperatorKind::T => (p.aug_degrees().iter().sum::<usize>() as f64 / n).sqrt(),
    };
    let bias = w.abs() * depth as f64 * delta.delta * degree_scale
        + (1.0 - w).abs() * f_norm / n.sqrt();
    let variance = w * w * p.variance_profile(depth).total / n;
    Ok(bias * bias + variance)
}

/// Upper bound on the per-n MSE of the L-hop local average:
/// `L²Δ² + (1/n)·Σᵢ 1/|𝒩ᴸ(i)|`. Requires an S-kind Δ.
pub fn local_average_risk_bound(
    depth: usize,
    delta: &SmoothnessDelta,
    g: &Graph,
) -> Result<f64> {
    if delta.kind != OperatorKind::S {
        return Err(Error::KindMismatch { expected: "S", got: delta.kind.as_str() });
    }
    let n = g.node_count() as f64;
    let mean_inv_size: f64 = (0..g.node_count())
        .map(|i| 1.0 / g.neighborhood(i, depth).expect("index in range").len() as f64)
        .sum::<f64>()
        / n;
    let bias = depth as f64 * delta.delta;
    Ok(bias * bias + mean_inv_size)
}

/// Per-n-normalized squared bias, variance, and MSE of a linear smoother.
///
/// Analytic reports satisfy `mse = bias_sq + variance` exactly and carry
/// `mc_stderr = 0`; Monte-Carlo reports estimate all three and record the
/// standard error of the MSE plus the number of skipped degenerate
/// replicates.
#[derive(Debug, Clone, Copy)]
pub struct RiskReport {
    pub bias_sq: f64,
    pub variance: f64,
    pub mse: f64,
    pub mc_stderr: f64,
    pub skipped: usize,
}

/// Exact risk of the fixed-weight smoother `W·Pᴸ` under unit-variance
/// uncorrelated noise: `bias_sq = ‖(W·Pᴸ − I)f*‖²/n`,
/// `variance = W²‖Pᴸ‖_F²/n`.
pub fn analytic_risk(w: f64, p: &PropagationOperator, depth: usize, f_star: &[f64]) -> RiskReport {
    let n = p.node_count() as f64;
    let smoothed = p.apply_power(depth, f_star).expect("dimension checked by caller");
    let bias_sq = smoothed
        .iter()
        .zip(f_star)
        .map(|(s, f)| {
            let d = w * s - f;
            d * d
        })
        .sum::<f64>()
        / n;
    let variance = w * w * p.variance_profile(depth).total / n;
    RiskReport { bias_sq, variance, mse: bias_sq + variance, mc_stderr: 0.0, skipped: 0 }
}

/// The L-hop local average materialized as an explicit row-stochastic
/// smoother matrix (row `i` uniform on `𝒩ᴸ(i)`), so the same analytic risk
/// decomposition applies to it as to the convolution smoothers.
#[derive(Debug, Clone)]
pub struct LocalAverageSmoother {
    depth: usize,
    neighborhoods: Vec<NodeSet>,
}

impl LocalAverageSmoother {
    pub fn new(g: &Graph, depth: usize) -> Self {
        let neighborhoods = (0..g.node_count())
            .map(|i| g.neighborhood(i, depth).expect("index in range"))
            .collect();
        Self { depth, neighborhoods }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn neighborhood_size(&self, i: usize) -> usize {
        self.neighborhoods[i].len()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.neighborhoods.len());
        self.neighborhoods
            .iter()
            .map(|hood| hood.iter().map(|j| v[j]).sum::<f64>() / hood.len() as f64)
            .collect()
    }

    /// `(1/n)·Σᵢ 1/|𝒩ᴸ(i)|`: the exact variance of the local average under
    /// unit-variance uncorrelated noise (each row of the smoother is uniform,
    /// so its squared norm is exactly the reciprocal neighborhood size).
    pub fn variance_exact(&self) -> f64 {
        let n = self.neighborhoods.len() as f64;
        self.neighborhoods.iter().map(|h| 1.0 / h.len() as f64).sum::<f64>() / n
    }

    pub fn analytic_risk(&self, f_star: &[f64]) -> RiskReport {
        let n = self.neighborhoods.len() as f64;
        let smoothed = self.apply(f_star);
        let bias_sq = smoothed
            .iter()
            .zip(f_star)
            .map(|(s, f)| (s - f) * (s - f))
            .sum::<f64>()
            / n;
        let variance = self.variance_exact();
        RiskReport { bias_sq, variance, mse: bias_sq + variance, mc_stderr: 0.0, skipped: 0 }
    }
}

/// Weight handling for the convolution smoother inside Monte-Carlo loops.
#[derive(Debug, Clone, Copy)]
pub enum WeightMode {
    Fixed(f64),
    /// Re-estimate `Ŵ` from each replicate's noisy response.
    Refit,
}

/// Which smoother a Monte-Carlo run simulates.
#[derive(Debug, Clone, Copy)]
pub enum SmootherSpec {
    Gcn { kind: OperatorKind, depth: usize, weight: WeightMode },
    LocalAverage { depth: usize },
}

/// Estimate bias², variance, and MSE of a smoother by simulation.
///
/// Draws `Y = f* + σ·ε` with i.i.d. standard normal noise, one
/// deterministically derived RNG stream per replicate, and reports the
/// empirical decomposition: `bias_sq = ‖mean fit − f*‖²/n`, `variance =
/// mean ‖fit − mean fit‖²/n`, `mse` averaged over replicates with its
/// standard error. Degenerate refits are skipped and counted.
pub fn monte_carlo_risk(
    g: &Graph,
    spec: &SmootherSpec,
    f_star: &[f64],
    sigma: f64,
    replicates: usize,
    seed: u64,
) -> Result<RiskReport> {
    if replicates < 2 {
        return Err(Error::InvalidParameter(format!(
            "monte_carlo_risk needs at least 2 replicates, got {replicates}"
        )));
    }
    let n = g.node_count();
    if f_star.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: f_star.len() });
    }
    enum Machine {
        Op(PropagationOperator, usize, WeightMode),
        Avg(LocalAverageSmoother),
    }
    let machine = match *spec {
        SmootherSpec::Gcn { kind, depth, weight } => {
            Machine::Op(PropagationOperator::build(g, kind), depth, weight)
        }
        SmootherSpec::LocalAverage { depth } => Machine::Avg(LocalAverageSmoother::new(g, depth)),
    };

    let normal = StandardNormal;
    let mut sum_fit = vec![0.0; n];
    let mut sum_sq_norm = 0.0;
    let mut mse_samples = Vec::with_capacity(replicates);
    let mut skipped = 0usize;
    for r in 0..replicates {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(r as u64);
        let y: Vec<f64> = f_star
            .iter()
            .map(|f| f + sigma * <StandardNormal as Distribution<f64>>::sample(&normal, &mut rng))
            .collect();
        let fit = match &machine {
            Machine::Op(p, depth, WeightMode::Fixed(w)) => {
                let z = p.apply_power(*depth, &y)?;
                z.into_iter().map(|x| w * x).collect()
            }
            Machine::Op(p, depth, WeightMode::Refit) => match fit_gcn(&y, p, *depth) {
                Ok(fit) => fit.fitted,
                Err(Error::DegenerateFit { .. }) => {
                    skipped += 1;
                    continue;
                }
                Err(e) => return Err(e),
            },
            Machine::Avg(avg) => avg.apply(&y),
        };
        let mse_r = fit
            .iter()
            .zip(f_star)
            .map(|(a, f)| (a - f) * (a - f))
            .sum::<f64>()
            / n as f64;
        mse_samples.push(mse_r);
        sum_sq_norm += fit.iter().map(|x| x * x).sum::<f64>();
        for (acc, x) in sum_fit.iter_mut().zip(&fit) {
            *acc += x;
        }
    }
    let effective = mse_samples.len();
    if effective < 2 {
        return Err(Error::InvalidParameter(format!(
            "only {effective} non-degenerate replicates out of {replicates}"
        )));
    }
    let reps = effective as f64;
    let mean_fit: Vec<f64> = sum_fit.iter().map(|x| x / reps).collect();
    let bias_sq = mean_fit
        .iter()
        .zip(f_star)
        .map(|(m, f)| (m - f) * (m - f))
        .sum::<f64>()
        / n as f64;
    let mean_fit_norm = mean_fit.iter().map(|x| x * x).sum::<f64>();
    let variance = (sum_sq_norm / reps - mean_fit_norm).max(0.0) / n as f64;
    let mse = mse_samples.iter().sum::<f64>() / reps;
    let mse_var =
        mse_samples.iter().map(|m| (m - mse) * (m - mse)).sum::<f64>() / (reps - 1.0);
    let mc_stderr = (mse_var / reps).sqrt();
    Ok(RiskReport { bias_sq: bias_sq.max(0.0), variance, mse, mc_stderr, skipped })
}

/// Full-vector mean squared error `‖fit − target‖²/n`.
pub fn mean_squared_error(fit: &[f64], target: &[f64]) -> f64 {
    assert_eq!(fit.len(), target.len());
    fit.iter().zip(target).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / fit.len() as f64
}

/// Mean squared error restricted to a node subset. Distinct from the
/// full-vector risk by construction; callers must label which one they
/// report.
pub fn masked_mse(fit: &[f64], target: &[f64], nodes: &[usize]) -> f64 {
    assert!(!nodes.is_empty());
    nodes
        .iter()
        .map(|&i| {
            let d = fit[i] - target[i];
            d * d
        })
        .sum::<f64>()
        / nodes.len() as f64
}
