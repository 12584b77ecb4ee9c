//! Error types for the symbolic kernel.

use alloc::string::String;
use core::fmt;

use crate::signature::Signature;

/// Errors produced by kernel operations.
///
/// Parse errors carry their own type ([`crate::parse::ParseError`]) because
/// they report a source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A coordinate index outside `1..=n+m`.
    CoordOutOfRange { index: u16, max: u16 },
    /// A time index outside `1..=r+s`.
    TimeOutOfRange { index: u16, max: u16 },
    /// Two expressions built over different signatures were combined.
    SignatureMismatch { left: Signature, right: Signature },
    /// A binding or map component has the wrong parity for its coordinate.
    ParityMismatch { coord: u16 },
    /// A substitution had no binding for a coordinate that occurs.
    UnboundCoordinate { coord: u16 },
    /// The operation requires a time-independent expression.
    TimeDependent,
    /// The operation requires a homogeneous-parity expression.
    Inhomogeneous,
    /// Jet variables are not allowed here (pure time polynomials expected).
    JetsPresent,
    /// Coordinate-change maps must be polynomials in the coordinates alone.
    NotPointwise,
    /// Covector components do not share a consistent parity offset.
    InconsistentParity,
    /// A form of degree larger than the number of coordinates has coefficients.
    DegreeTooLarge { degree: u16, n: u16 },
    /// A Lagrangian that is not in the image of the form dictionary.
    NotFormLike { monomial: String },
    /// A homotopy is not flat enough at the even-time boundaries.
    InsufficientFlatness { coord: u16, time: u16, required: u32 },
    /// Desk-scale bounds for the cohomology computation were exceeded.
    BoundsExceeded,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::CoordOutOfRange { index, max } => {
                write!(f, "coordinate index {index} out of range 1..={max}")
            }
            Error::TimeOutOfRange { index, max } => {
                write!(f, "time index {index} out of range 1..={max}")
            }
            Error::SignatureMismatch { left, right } => {
                write!(f, "signature mismatch: {left} vs {right}")
            }
            Error::ParityMismatch { coord } => {
                write!(f, "parity mismatch in component for coordinate {coord}")
            }
            Error::UnboundCoordinate { coord } => {
                write!(f, "no binding for coordinate {coord}")
            }
            Error::TimeDependent => write!(f, "expression depends on explicit time variables"),
            Error::Inhomogeneous => write!(f, "expression does not have homogeneous parity"),
            Error::JetsPresent => write!(f, "jet variables are not allowed here"),
            Error::NotPointwise => {
                write!(f, "coordinate change must be a polynomial in the coordinates alone")
            }
            Error::InconsistentParity => {
                write!(f, "covector components have inconsistent parities")
            }
            Error::DegreeTooLarge { degree, n } => {
                write!(f, "form degree {degree} exceeds coordinate count {n}")
            }
            Error::NotFormLike { monomial } => {
                write!(f, "not a form-like Lagrangian (offending monomial: {monomial})")
            }
            Error::InsufficientFlatness { coord, time, required } => write!(
                f,
                "homotopy component {coord} is not flat to order {required} at t{time} = 0, 1"
            ),
            Error::BoundsExceeded => write!(f, "requested size exceeds the supported bounds"),
        }
    }
}

impl core::error::Error for Error {}

/// Kernel result alias.
pub type Result<T> = core::result::Result<T, Error>;
