//! Constrained reachability queries and link classification on probabilistic
//! graphs.
//!
//! The crate models graphs whose edges exist independently with known
//! probabilities, answers "are these two nodes connected by a simple path
//! whose label string belongs to a given language" both exactly and by Monte
//! Carlo estimation, turns a family of such queries into feature vectors, and
//! trains regularized logistic models on those features. A recommender
//! pipeline built from user/item rating data exercises the whole stack.

pub mod eval;
pub mod features;
pub mod graph;
pub mod infer;
pub mod learn;
pub mod pattern;
pub mod recsys;

pub use eval::{
    baseline_expected_mae, mae_macro, run_experiment, BaselinePredictor, EvalError, EvalReport,
    ExperimentConfig, ExperimentReport,
};
pub use features::{
    classify_by_query, extract_features, FeatureError, FeatureRow, FeatureTable, LanguageSet,
    QueryOutcome,
};
pub use graph::{EdgeId, GraphError, LabelId, NodeId, Path, PathError, ProbabilisticGraph};
pub use infer::{
    estimate_batch, estimate_probability, exact_probability, exists_path, InferError,
    ReachEstimate, ReachQuery, WorldSample,
};
pub use learn::{
    train_binary, train_multiclass, BinaryProblem, LearnError, LinearModel, TrainOptions,
};
pub use pattern::{parse_pattern, Acceptor, BoundAcceptor, Pattern, PatternError};
pub use recsys::{build_graph, GraphBuildConfig, RatingsTable, RecsysError, RATING_CLASSES};
