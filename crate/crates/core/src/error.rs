//! Error type shared by every fallible operation in the crate.

use thiserror::Error;

/// Failure modes of the numerical core.
///
/// `Pole` and `Domain` mean the request itself is outside the mathematical
/// domain; the remaining variants mean the request is legal but this build
/// cannot honour it (capacity) or an internal guarantee broke.
#[derive(Debug, Error)]
pub enum CoreError {
    /// Evaluation requested exactly at a pole of the target function.
    #[error("evaluation at a pole: {context}")]
    Pole { context: String },

    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {context}")]
    Domain { context: String },

    /// Structurally invalid parameter (zero grid, misaligned sizes, ...).
    #[error("invalid parameter: {context}")]
    Parameter { context: String },

    /// The requested accuracy or depth exceeds what the configuration
    /// can deliver; `achievable` reports the attainable level.
    #[error("capacity exceeded: requested {requested:e}, achievable {achievable:e}")]
    Capacity { requested: f64, achievable: f64 },

    /// A sampling circle passes too close to a pole of the integrand.
    #[error("circle of radius {rho} passes within {exclusion} of a pole")]
    PoleAdjacentCircle { rho: f64, exclusion: f64 },

    /// A sample on a circle failed; records which node.
    #[error("sampling failed at node {index} (theta = {theta}): {source}")]
    Sampling {
        index: usize,
        theta: f64,
        #[source]
        source: Box<CoreError>,
    },

    /// Series evaluated outside the annulus its coefficients belong to.
    #[error("annulus mismatch: {context}")]
    AnnulusMismatch { context: String },

    /// An internal invariant failed; always a bug, never user error.
    #[error("internal invariant violated: {context}")]
    Internal { context: String },
}

impl CoreError {
    pub fn domain(context: impl Into<String>) -> Self {
        CoreError::Domain {
            context: context.into(),
        }
    }

    pub fn parameter(context: impl Into<String>) -> Self {
        CoreError::Parameter {
            context: context.into(),
        }
    }

    pub fn internal(context: impl Into<String>) -> Self {
        CoreError::Internal {
            context: context.into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn messages_carry_context() {
        let e = CoreError::domain("negative radius");
        assert!(e.to_string().contains("negative radius"));
        let e = CoreError::Capacity {
            requested: 1e-30,
            achievable: 3.2e-15,
        };
        let msg = e.to_string();
        assert!(msg.contains("1e-30") && msg.contains("3.2e-15"));
    }

    #[test]
    fn sampling_preserves_inner_error() {
        let inner = CoreError::Pole {
            context: "s = 1".into(),
        };
        let e = CoreError::Sampling {
            index: 3,
            theta: 0.25,
            source: Box::new(inner),
        };
        assert!(e.to_string().contains("node 3"));
        assert!(std::error::Error::source(&e).is_some());
    }
}
