//! Run-wide conventions: logarithm units and default numerical tolerances.

use crate::scalar::Real;

/// Logarithm unit for every entropic quantity the crate returns.
///
/// Internally all formulas are evaluated with natural logarithms and
/// rescaled once at the end, so switching units never changes which
/// branch, region or witness a computation selects.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum LogBase {
    /// Base-2 logarithms; values in bits. The default.
    #[default]
    Two,
    /// Natural logarithms; values in nats.
    E,
}

impl LogBase {
    /// Rescale a value computed in nats into this unit.
    #[inline]
    pub fn from_nats<R: Real>(self, nats: R) -> R {
        match self {
            LogBase::Two => nats / R::of(std::f64::consts::LN_2),
            LogBase::E => nats,
        }
    }

    /// Label used in file headers and JSON output.
    pub fn label(self) -> &'static str {
        match self {
            LogBase::Two => "2",
            LogBase::E => "e",
        }
    }

    /// Parse a label: `"2"` / `"bits"` for base 2, `"e"` / `"nats"` for
    /// natural logarithms. Case-insensitive.
    pub fn parse(text: &str) -> Option<Self> {
        match text.trim().to_ascii_lowercase().as_str() {
            "2" | "bits" | "bit" => Some(LogBase::Two),
            "e" | "nats" | "nat" => Some(LogBase::E),
            _ => None,
        }
    }
}

/// Default tolerances. Constructors and predicates that take an explicit
/// tolerance use these values unless told otherwise.
pub mod tol {
    /// Eigenvalues at or below this are treated as zero when deciding the
    /// support of an operator.
    pub const SUPPORT: f64 = 1e-12;

    /// Probability mass a state may put on the null space of the second
    /// argument of a relative entropy before the value is declared
    /// infinite. Looser than [`SUPPORT`] so that round-off in the two
    /// eigenbases cannot turn a finite entropy into a spurious infinity.
    pub const SUPPORT_LEAK: f64 = 1e-9;

    /// Largest accepted entrywise deviation from Hermitian symmetry.
    pub const HERMITIAN: f64 = 1e-10;

    /// How far below zero the smallest eigenvalue of a nominally positive
    /// operator may sit before it is rejected.
    pub const PSD: f64 = 1e-9;

    /// Slack for membership tests in the `(f, fhat)` parameter plane:
    /// triangle and square boundaries, region borders, branch selection.
    pub const GEOMETRY: f64 = 1e-12;

    /// Largest accepted `|trace - 1|` for an operator that must be a state.
    pub const TRACE: f64 = 1e-8;

    /// Largest accepted entrywise residual `V diag(w) V^H - M`, relative to
    /// the largest entry of `M`, before an eigendecomposition is redone by
    /// the fallback solver.
    pub const EIGEN_RESIDUAL: f64 = 1e-11;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_two_rescales_ln2_to_one_bit() {
        let one_bit: f64 = LogBase::Two.from_nats(std::f64::consts::LN_2);
        assert!((one_bit - 1.0).abs() < 1e-15);
        assert_eq!(LogBase::E.from_nats(1.25f64), 1.25);
    }

    #[test]
    fn parse_accepts_both_spellings() {
        assert_eq!(LogBase::parse("2"), Some(LogBase::Two));
        assert_eq!(LogBase::parse("BITS"), Some(LogBase::Two));
        assert_eq!(LogBase::parse("e"), Some(LogBase::E));
        assert_eq!(LogBase::parse("nats"), Some(LogBase::E));
        assert_eq!(LogBase::parse("10"), None);
    }

    #[test]
    fn infinity_survives_rescaling() {
        assert!(LogBase::Two.from_nats(f64::INFINITY).is_infinite());
    }
}
