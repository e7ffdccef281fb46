//! Error type shared by all modules.

use core::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Operation needs an invertible metric (Hodge, adjoint, volume form).
    DegenerateMetric(&'static str),
    /// Gram matrix not symmetric within 1e-14.
    AsymmetricGram,
    /// Eigenvalue signs disagree with the declared signature.
    SignatureMismatch { declared: (usize, usize), computed: (usize, usize) },
    DimensionMismatch { expected: usize, got: usize },
    /// Boost velocity at or above the speed of light.
    SuperluminalBoost,
    /// `R` is not a special orthogonal 3x3 matrix.
    InvalidRotation,
    /// `1 + omega^2 b*b <= 0`; no group element with this boost parameter.
    InvalidBoostParameter,
    /// Operands tagged with different group flavors.
    FlavorMismatch,
    /// Raw-matrix construction failed the membership invariants.
    MembershipViolated(&'static str),
    /// Momentum components violate a structural invariant.
    InvalidMomentum(&'static str),
    /// Operation defined only for timelike energy-momentum.
    NonTimelike,
    /// The charge-based spin form needs q != 0.
    SpinFormUndefined,
    /// Polarization plane is defined only for s != 0.
    NoPolarizationPlane,
    /// Singular-value gap too small to trust the rank decision.
    InconclusiveRank,
    /// Metric not invertible at the queried spacetime point.
    SingularMetric,
    InvalidState(&'static str),
    InvalidForm(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegenerateMetric(what) => write!(f, "{what} undefined for semi-metric"),
            Error::AsymmetricGram => write!(f, "gram matrix is not symmetric"),
            Error::SignatureMismatch { declared, computed } => write!(
                f,
                "declared signature ({},{}) but eigenvalues give ({},{})",
                declared.0, declared.1, computed.0, computed.1
            ),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::SuperluminalBoost => write!(f, "superluminal boost"),
            Error::InvalidRotation => write!(f, "not a special orthogonal rotation"),
            Error::InvalidBoostParameter => write!(f, "invalid boost parameter"),
            Error::FlavorMismatch => write!(f, "group flavor mismatch"),
            Error::MembershipViolated(what) => write!(f, "membership violated: {what}"),
            Error::InvalidMomentum(what) => write!(f, "invalid momentum: {what}"),
            Error::NonTimelike => write!(f, "classification requires timelike energy-momentum"),
            Error::SpinFormUndefined => write!(f, "spin form undefined, use X-form"),
            Error::NoPolarizationPlane => write!(f, "no polarization plane"),
            Error::InconclusiveRank => write!(f, "inconclusive rank"),
            Error::SingularMetric => write!(f, "singular metric at queried point"),
            Error::InvalidState(what) => write!(f, "invalid particle state: {what}"),
            Error::InvalidForm(what) => write!(f, "invalid k-form: {what}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
