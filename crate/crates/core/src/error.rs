use alloc::vec::Vec;
use core::fmt;

/// Crate-wide result type.
pub type Result<T> = core::result::Result<T, Error>;

/// Errors shared by all modules.
///
/// Most variants are recoverable conditions a caller sampling near a
/// degenerate locus must handle (the vertical axis, domain boundaries);
/// the solver variants carry diagnostics of the failed search.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The projection `Π` or a chart was evaluated on the vertical axis `z = 0`.
    AxisPoint,
    /// A component was NaN or infinite where a finite value is required.
    NotFinite,
    /// A half-plane point with `Im(w) <= 0`.
    NotUpperHalfPlane,
    /// A domain descriptor with non-positive or misordered dimensions.
    BadDomain,
    /// A half-plane curve came closer to the real axis than `eps_axis`.
    DegenerateCurve,
    /// A curve sample left the density's domain.
    DomainEscape,
    /// The domain descriptor has no integration parameterization for this operation.
    UnsupportedDomain,
    /// Unknown closed-form family identifier.
    UnknownFamily,
    /// `|Zf1|` (or the orientation gap `|Zf1| - |Zbar f1|`) fell below `eps_deriv`.
    DegenerateDerivative,
    /// Finite-difference probes would leave the map's source domain.
    BoundaryTooClose,
    /// Cylinder moduli violate the standing assumption `a b' / (a' b) > 1`.
    BadModuli,
    /// A boundary profile failed its endpoint or slope checks.
    BadProfile,
    /// Unknown builtin biholomorphism name.
    UnknownName,
    /// The plane map carries no inverse evaluator but one is required.
    MissingInverse,
    /// A chart failed the compatibility check (`|φ'|/Im φ` must depend on
    /// the rectangle's second coordinate only). Carries the s-variation.
    Incompatible { variation: f64 },
    /// No anchor value satisfies the boundary conditions and slope constraint.
    /// Carries the smallest boundary mismatch seen across candidates.
    NoSolution { mismatch: f64 },
    /// Several isolated anchor values pass all checks. Carries the anchors.
    NonUnique { anchors: Vec<f64> },
    /// The mixed partials of the angular potential do not commute within tolerance.
    PathInconsistent { residual: f64 },
    /// Newton inversion of a biholomorphism failed to converge.
    ChartInversion,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::AxisPoint => write!(f, "point lies on the vertical axis z = 0"),
            Error::NotFinite => write!(f, "non-finite component"),
            Error::NotUpperHalfPlane => write!(f, "point is not in the upper half-plane"),
            Error::BadDomain => write!(f, "invalid domain descriptor dimensions"),
            Error::DegenerateCurve => write!(f, "curve degenerates at the axis Im = 0"),
            Error::DomainEscape => write!(f, "sample point left the density's domain"),
            Error::UnsupportedDomain => write!(f, "domain has no parameterization for this operation"),
            Error::UnknownFamily => write!(f, "unknown curve-family identifier"),
            Error::DegenerateDerivative => write!(f, "degenerate horizontal derivative"),
            Error::BoundaryTooClose => write!(f, "point too close to the domain boundary for finite differences"),
            Error::BadModuli => write!(f, "cylinder moduli must satisfy a*b' > a'*b"),
            Error::BadProfile => write!(f, "profile violates endpoint or slope constraints"),
            Error::UnknownName => write!(f, "unknown builtin biholomorphism"),
            Error::MissingInverse => write!(f, "plane map carries no inverse evaluator"),
            Error::Incompatible { variation } => {
                write!(f, "chart fails the compatibility check (s-variation {variation:e})")
            }
            Error::NoSolution { mismatch } => {
                write!(f, "no profile satisfies the boundary conditions (best mismatch {mismatch:e})")
            }
            Error::NonUnique { anchors } => {
                write!(f, "{} isolated anchor values pass all checks", anchors.len())
            }
            Error::PathInconsistent { residual } => {
                write!(f, "angular potential is path dependent (mixed residual {residual:e})")
            }
            Error::ChartInversion => write!(f, "Newton inversion of the biholomorphism failed"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
