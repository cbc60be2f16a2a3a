use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid shape (k={k}, n={n}): {reason}")]
    InvalidShape { k: i64, n: i64, reason: String },

    #[error("k = n+1 = {k} is the Lagrangian Grassmannian IG({n}, {twice_n}); only 1 <= k <= n is supported", twice_n = 2 * n)]
    LagrangianExcluded { k: i64, n: i64 },

    #[error("partition {parts:?} is not a valid {set} index for IG({k}, {ambient})", ambient = 2 * n + 1)]
    InvalidPartition {
        parts: Vec<i32>,
        set: &'static str,
        k: usize,
        n: usize,
    },

    #[error("cannot parse partition {input:?}: {reason}")]
    ParsePartition { input: String, reason: String },

    #[error("graph is not strongly connected ({components} components)")]
    NotStronglyConnected { components: usize },

    #[error("chain edge {from} -> {to} ({kind}) is missing from the Chevalley expansion")]
    ChainEdgeMissing {
        from: String,
        to: String,
        kind: &'static str,
    },

    #[error("chain construction stalled at {at} while heading to {target}")]
    ChainStalled { at: String, target: String },

    #[error("eigenvalue iteration did not converge within {max_iter} sweeps")]
    EigenNoConvergence { max_iter: usize },

    #[error("power iteration did not converge within {max_iter} steps (residual {residual:e})")]
    PowerIterationNoConvergence { max_iter: usize, residual: f64 },

    #[error("matrix is empty")]
    EmptyMatrix,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
