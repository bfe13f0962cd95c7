//! Denoising of signals observed on graph nodes via linear graph convolutions.
//!
//! A noisy signal `Y = f* + eps` lives on the nodes of an undirected graph.
//! Smoothing it with powers of a propagation operator — the row-stochastic
//! `S = D̃⁻¹Ã` or the symmetric `T = D̃^{-1/2} Ã D̃^{-1/2}`, both built on the
//! self-loop augmented adjacency `Ã = A + I` — trades bias for variance as the
//! number of applications `L` grows. This crate provides:
//!
//! - [`graph`]: the immutable undirected-graph representation and
//!   neighborhood/connectivity utilities,
//! - [`operators`]: sparse `S`/`T` construction, power application, and
//!   per-node variance profiles `E[(Pᴸε)ᵢ²]`,
//! - [`estimators`]: the single-weight convolution estimator with its
//!   closed-form least-squares weight, the L-hop local-averaging baseline,
//!   smoothness constants, risk bounds, and exact/Monte-Carlo risk reports,
//! - [`walks`]: enumeration of weighted walks on the augmented graph and
//!   numerical checks of the variance bounds they imply,
//! - [`synth`]: graph families (latent-variable with MST sparsification,
//!   power-law cluster, trees, barbells), topology attachments, spectral
//!   embeddings, and smooth cosine signals.

pub mod error;
pub mod estimators;
pub mod graph;
pub mod operators;
pub mod synth;
pub mod walks;

pub use error::{Error, Result};
pub use estimators::{
    analytic_risk, fit_gcn, gcn_risk_bound, local_average, local_average_risk_bound,
    monte_carlo_risk, smoothness_delta, GcnFit, LocalAverageSmoother, RiskReport,
    SmootherSpec, SmoothnessDelta, WeightMode,
};
pub use graph::{Graph, NodeSet};
pub use operators::{OperatorKind, PropagationOperator, VarianceProfile};
pub use synth::{
    add_noise, attach, gen_barbell, gen_holme_kim, gen_latent_graph, gen_regular_rooted_tree,
    gen_tree, make_signal, roughness, spectral_embedding, Attachment, GraphFamily, GraphRecipe,
    LatentEmbedding, LatentGraphParams, SignalSpec,
};
pub use walks::{
    check_lower_bound, check_variance_bound, entry_via_walks, enumerate_walks, node_variance,
    weight_s, weight_t, BoundReport, BoundSide, VarianceBoundCheck, Walk, WalkEnsemble,
    DEFAULT_WALK_CAP,
};
