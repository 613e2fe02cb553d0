use thiserror::Error;

/// Failures of the coordinate maps on SO(3), Sp(1) and SE(3).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error("rotation angle {angle} reaches the chart boundary {limit}")]
    ChartBoundary { angle: f64, limit: f64 },
    #[error("rotation angle is within tolerance of pi; log axis sign is ambiguous")]
    NearPiAmbiguity,
    #[error("compound rotation angle could not be resolved (non-finite input)")]
    CompoundAnglePi,
}

/// Failures of the local-global transition maps.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LgtError {
    #[error("coordinate variant mismatch: combo {combo} cannot take {found}")]
    VariantMismatch { combo: String, found: &'static str },
    #[error(transparent)]
    Map(#[from] MapError),
}

/// Failures while assembling or solving the equations of motion.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("KKT matrix is singular (reciprocal condition estimate {rcond:e})")]
    SingularKkt { rcond: f64 },
    #[error("model uses {model:?} but combo {combo} requires {required:?}")]
    GroupMismatch {
        model: crate::GroupModel,
        combo: String,
        required: crate::GroupModel,
    },
    #[error("state has {found} bodies/entries, model expects {expected}")]
    Dimension { expected: usize, found: usize },
    #[error(transparent)]
    Lgt(#[from] LgtError),
}

impl From<MapError> for DynamicsError {
    fn from(e: MapError) -> Self {
        DynamicsError::Lgt(LgtError::Map(e))
    }
}

/// Failures of the time integrators and the projection step.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegrateError {
    #[error("invalid integrator configuration: {0}")]
    Config(String),
    #[error("initial state is inconsistent: |g|={gnorm:e}, |A V|={gvnorm:e}")]
    InconsistentInitialState { gnorm: f64, gvnorm: f64 },
    #[error("projection did not converge after {iterations} iterations (|g|={gnorm:e})")]
    NoConvergence { iterations: usize, gnorm: f64 },
    #[error("baseline integrator requires quaternion absolute coordinates")]
    NotQuaternion,
    #[error("step {step} (t={t}) failed: {source}")]
    Step {
        step: usize,
        t: f64,
        #[source]
        source: Box<IntegrateError>,
    },
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

impl From<MapError> for IntegrateError {
    fn from(e: MapError) -> Self {
        IntegrateError::Dynamics(e.into())
    }
}

impl From<LgtError> for IntegrateError {
    fn from(e: LgtError) -> Self {
        IntegrateError::Dynamics(e.into())
    }
}
