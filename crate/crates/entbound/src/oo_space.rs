//! The commutant of {O tensor O : O orthogonal} on C^d tensor C^d.
//!
//! The commutant is spanned by the identity, the flip operator F
//! (`F |ij> = |ji>`) and its partial transpose Fhat (`Fhat = sum_ij
//! |ii><jj|`), so an invariant state is fixed by the two expectation
//! values `f = <F>` and `fhat = <Fhat>`. Equivalently the algebra is
//! spanned by three orthogonal projectors
//!
//! ```text
//! U = Fhat / d,   V = (1 - F) / 2,   W = (1 + F) / 2 - Fhat / d
//! ```
//!
//! with traces 1, d(d-1)/2 and (d+2)(d-1)/2. A state corresponds to a
//! point of the triangle `0 <= fhat`, `f <= 1`, `fhat <= d(1+f)/2`; the
//! partial transpose acts as the swap `(f, fhat) -> (fhat, f)`, so the
//! PPT states are exactly the square `0 <= f, fhat <= 1`.
//!
//! This module provides the parametrization, the basis conversions, the
//! embedding into dense matrices and its inverse (the twirl), the named
//! points of the parameter plane, and the region classification that the
//! closed-form measures dispatch on.

use crate::config::tol;
use crate::error::{Error, Result};
use crate::operator_algebra::HermitianOperator;
use crate::scalar::{abs, max, min, to_f64, MatrixReal, Real};

/// Coarse region of the parameter triangle, named after which optimal
/// PPT witness family realizes the relative entropy of entanglement.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum RegionTag {
    /// The PPT square; every measure vanishes.
    Ppt,
    /// Witness `s = (1 + (d-1)f - fhat)/(d - fhat)`, `shat = 1`.
    A,
    /// Witness `s = 0`, `shat = fhat/(1+f)`; contains the Werner line.
    B,
    /// Witness `s = 0`, `shat = 1`.
    C,
}

impl RegionTag {
    /// Short label for reports and serialized records.
    pub fn label(self) -> &'static str {
        match self {
            RegionTag::Ppt => "PPT",
            RegionTag::A => "A",
            RegionTag::B => "B",
            RegionTag::C => "C",
        }
    }
}

/// Refinement of a region: additivity of the REEP, or the branch the
/// Rains bound takes on non-additive states.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum RegionSubtag {
    /// No refinement applies (PPT states).
    None,
    /// REEP additive under tensoring with arbitrary states.
    AdditiveStrong,
    /// REEP weakly additive (equal to the asymptotic REEP).
    AdditiveWeak,
    /// Non-additive; the Rains objective has its stationary point inside
    /// the triangle (quadrilateral with corners A, Y, C, D).
    Aycd,
    /// Non-additive; the Rains minimum sits on the boundary `shat = 1`
    /// (triangle with corners C, Y, B).
    Cyb,
}

impl RegionSubtag {
    /// Short label for reports and serialized records.
    pub fn label(self) -> &'static str {
        match self {
            RegionSubtag::None => "none",
            RegionSubtag::AdditiveStrong => "additive-strong",
            RegionSubtag::AdditiveWeak => "additive-weak",
            RegionSubtag::Aycd => "AYCD",
            RegionSubtag::Cyb => "CYB",
        }
    }
}

/// Region classification of an OO-invariant state.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub tag: RegionTag,
    pub subtag: RegionSubtag,
}

/// Named points of the parameter triangle, as functions of d.
///
/// A is the projector onto the antisymmetric subspace (the extreme
/// Werner state), B and C span the additivity border segment, D closes
/// the non-additive quadrilateral on the Werner line, E is the corner of
/// the PPT square, and X, Y are the points where the boundary piece of
/// the Rains bound changes its closed form.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct KeyPoints<R: Real> {
    pub a: (R, R),
    pub b: (R, R),
    pub c: (R, R),
    pub d: (R, R),
    pub e: (R, R),
    pub x: (R, R),
    pub y: (R, R),
}

/// Returns the named points for local dimension `d >= 3`.
pub fn key_points<R: Real>(d: usize) -> Result<KeyPoints<R>> {
    if d < 3 {
        return Err(Error::DimensionTooSmall { d, min: 3 });
    }
    let dr = R::of_usize(d);
    let one = R::one();
    let two = R::of(2.0);
    // d^2 + 2d - 4, the common denominator of X and Y
    let den = dr * dr + two * dr - R::of(4.0);
    Ok(KeyPoints {
        a: (-one, R::zero()),
        b: ((dr - R::of(4.0)) / dr, dr - two),
        c: (-two / dr, (dr - two) / dr),
        d: (-two / dr, R::zero()),
        e: (R::zero(), one),
        x: (
            (dr * dr - R::of(6.0) * dr + R::of(4.0)) / den,
            dr * dr * (dr - two) / den,
        ),
        y: (-dr * dr / den, dr * (dr - two) / den),
    })
}

/// Dimensions (traces) of the three spectral sectors U, V, W.
pub fn sector_traces<R: Real>(d: usize) -> [R; 3] {
    let dr = R::of_usize(d);
    let one = R::one();
    let two = R::of(2.0);
    [one, dr * (dr - one) / two, (dr + two) * (dr - one) / two]
}

/// An OO-invariant state: a local dimension and the expectations
/// `(f, fhat)` inside the positivity triangle.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct OOState<R: Real> {
    d: usize,
    f: R,
    fhat: R,
}

impl<R: Real> OOState<R> {
    /// Validates `(f, fhat)` against the positivity triangle for local
    /// dimension `d` and clamps round-off-sized violations onto the
    /// boundary. Rejects points farther outside than the geometry
    /// tolerance.
    pub fn new(d: usize, f: R, fhat: R) -> Result<Self> {
        if d < 2 {
            return Err(Error::DimensionTooSmall { d, min: 2 });
        }
        let gtol = R::of(tol::GEOMETRY);
        let dr = R::of_usize(d);
        let outside = !f.is_finite()
            || !fhat.is_finite()
            || fhat < -gtol
            || f > R::one() + gtol
            || f < -R::one() - gtol
            || fhat > dr * (R::one() + f) / R::of(2.0) + gtol;
        if outside {
            return Err(Error::OutsideTriangle {
                d,
                f: to_f64(f),
                fhat: to_f64(fhat),
            });
        }
        let f = min(max(f, -R::one()), R::one());
        let fhat = min(max(fhat, R::zero()), dr * (R::one() + f) / R::of(2.0));
        Ok(Self { d, f, fhat })
    }

    /// The maximally mixed state, `(f, fhat) = (1/d, 1/d)`.
    pub fn maximally_mixed(d: usize) -> Result<Self> {
        let inv = R::one() / R::of_usize(d);
        Self::new(d, inv, inv)
    }

    /// Local dimension.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Expectation of the flip operator F.
    pub fn f(&self) -> R {
        self.f
    }

    /// Expectation of Fhat.
    pub fn fhat(&self) -> R {
        self.fhat
    }

    /// Coefficients `(a, b, c)` of the expansion `rho = a 1 + b F + c Fhat`.
    pub fn coeffs(&self) -> (R, R, R) {
        let dr = R::of_usize(self.d);
        let one = R::one();
        let two = R::of(2.0);
        let norm = dr * (dr - one) * (dr + two);
        let dp1 = dr + one;
        let a = (dp1 - self.f - self.fhat) / norm;
        let b = (dp1 * self.f - one - self.fhat) / norm;
        let c = (dp1 * self.fhat - one - self.f) / norm;
        (a, b, c)
    }

    /// Weights of the expansion `rho = wU U + wV V + wW W` (the
    /// eigenvalues of rho on the three sectors).
    pub fn uvw_weights(&self) -> (R, R, R) {
        let dr = R::of_usize(self.d);
        let one = R::one();
        let two = R::of(2.0);
        let wu = self.fhat / dr;
        let wv = (one - self.f) / (dr * (dr - one));
        let ww = (dr + dr * self.f - two * self.fhat) / (dr * (dr - one) * (dr + two));
        (wu, wv, ww)
    }

    /// Probability masses of the three sectors: eigenvalue times sector
    /// trace, `(fhat/d, (1-f)/2, (d + df - 2 fhat)/(2d))`. They are
    /// nonnegative and sum to 1.
    pub fn sector_masses(&self) -> [R; 3] {
        let dr = R::of_usize(self.d);
        let one = R::one();
        let two = R::of(2.0);
        [
            self.fhat / dr,
            (one - self.f) / two,
            (dr + dr * self.f - two * self.fhat) / (two * dr),
        ]
    }

    /// Parameters `(fhat, f)` of the partial transpose. The pair may
    /// violate the positivity triangle; that is exactly the NPT case.
    pub fn pt(&self) -> (R, R) {
        (self.fhat, self.f)
    }

    /// Whether the partial transpose is positive, i.e. `0 <= f` and
    /// `fhat <= 1` (within geometry tolerance).
    pub fn is_ppt(&self) -> bool {
        let gtol = R::of(tol::GEOMETRY);
        self.f >= -gtol && self.fhat <= R::one() + gtol
    }

    /// Distance below the top edge `fhat = d(1+f)/2` of the triangle.
    pub(crate) fn top_edge_gap(&self) -> R {
        let dr = R::of_usize(self.d);
        dr * (R::one() + self.f) / R::of(2.0) - self.fhat
    }

    /// Region classification.
    ///
    /// PPT wins on the square boundary. Otherwise the tag records which
    /// optimal-witness family attains the REEP, the additive subtags
    /// apply on `f >= -2/d`, `fhat <= 3 - 4/d + (d-1)f` (inclusive), and
    /// non-additive states split into AYCD or CYB according to whether
    /// the stationary point of the Rains objective keeps `shat <= 1`.
    pub fn classify(&self) -> Region {
        if self.is_ppt() {
            return Region {
                tag: RegionTag::Ppt,
                subtag: RegionSubtag::None,
            };
        }
        let gtol = R::of(tol::GEOMETRY);
        let dr = R::of_usize(self.d);
        let tag = crate::measures::best_candidate(self).region;
        let additive = self.f >= -R::of(2.0) / dr - gtol
            && self.fhat <= R::of(3.0) - R::of(4.0) / dr + (dr - R::one()) * self.f + gtol;
        let subtag = if additive {
            match crate::measures::additivity_check(self).level {
                crate::measures::AdditivityLevel::Strong => RegionSubtag::AdditiveStrong,
                _ => RegionSubtag::AdditiveWeak,
            }
        } else {
            // stationary shat of the Rains objective; d + 2f >= d - 2 > 0
            let shat = (R::of(2.0) + dr) * self.fhat / (dr + R::of(2.0) * self.f);
            if shat > R::one() + gtol {
                RegionSubtag::Cyb
            } else {
                RegionSubtag::Aycd
            }
        };
        Region { tag, subtag }
    }
}

impl<R: MatrixReal> OOState<R> {
    /// The state as a dense d^2 x d^2 matrix, `a 1 + b F + c Fhat`.
    pub fn embed(&self) -> HermitianOperator<R> {
        let (a, b, c) = self.coeffs();
        let zero = R::zero();
        HermitianOperator::from_bipartite_fn(self.d, |i, j, k, l| {
            let mut v = zero;
            if i == k && j == l {
                v = v + a;
            }
            if i == l && j == k {
                v = v + b;
            }
            if i == j && k == l {
                v = v + c;
            }
            num_complex::Complex::new(v, zero)
        })
        .expect("an OO-invariant expansion is Hermitian by construction")
    }
}

/// The flip operator `F |ij> = |ji>`, with trace d.
pub fn flip_operator<R: MatrixReal>(d: usize) -> Result<HermitianOperator<R>> {
    HermitianOperator::from_bipartite_fn(d, |i, j, k, l| {
        num_complex::Complex::new(if i == l && j == k { R::one() } else { R::zero() }, R::zero())
    })
}

/// The operator `Fhat = sum_ij |ii><jj|`, with trace d; equals d times
/// the maximally entangled projector and the partial transpose of F.
pub fn fhat_operator<R: MatrixReal>(d: usize) -> Result<HermitianOperator<R>> {
    HermitianOperator::from_bipartite_fn(d, |i, j, k, l| {
        num_complex::Complex::new(if i == j && k == l { R::one() } else { R::zero() }, R::zero())
    })
}

/// The rank-1 sector projector `U = Fhat / d`.
pub fn projector_u<R: MatrixReal>(d: usize) -> Result<HermitianOperator<R>> {
    let inv = R::one() / R::of_usize(d);
    HermitianOperator::from_bipartite_fn(d, |i, j, k, l| {
        num_complex::Complex::new(if i == j && k == l { inv } else { R::zero() }, R::zero())
    })
}

/// The antisymmetric sector projector `V = (1 - F) / 2`.
pub fn projector_v<R: MatrixReal>(d: usize) -> Result<HermitianOperator<R>> {
    let half = R::of(0.5);
    HermitianOperator::from_bipartite_fn(d, |i, j, k, l| {
        let mut v = R::zero();
        if i == k && j == l {
            v = v + half;
        }
        if i == l && j == k {
            v = v - half;
        }
        num_complex::Complex::new(v, R::zero())
    })
}

/// The remaining sector projector `W = (1 + F) / 2 - Fhat / d`.
pub fn projector_w<R: MatrixReal>(d: usize) -> Result<HermitianOperator<R>> {
    let half = R::of(0.5);
    let inv = R::one() / R::of_usize(d);
    HermitianOperator::from_bipartite_fn(d, |i, j, k, l| {
        let mut v = R::zero();
        if i == k && j == l {
            v = v + half;
        }
        if i == l && j == k {
            v = v + half;
        }
        if i == j && k == l {
            v = v - inv;
        }
        num_complex::Complex::new(v, R::zero())
    })
}

/// Projects a state onto the OO-invariant family by reading off the two
/// expectation values: `f = Tr(M F)`, `fhat = Tr(M Fhat)`. Idempotent on
/// embedded OO states and maps PPT states into the PPT square.
pub fn twirl<R: MatrixReal>(m: &HermitianOperator<R>) -> Result<OOState<R>> {
    if !m.is_psd(tol::PSD) {
        return Err(Error::NotPositive {
            min_eigenvalue: to_f64(m.min_eigenvalue()),
        });
    }
    let trace = m.trace();
    if to_f64(abs(trace - R::one())) > tol::TRACE {
        return Err(Error::NotNormalized {
            trace: to_f64(trace),
        });
    }
    let d = m.dim_local();
    let f = m.trace_product(&flip_operator(d)?)?;
    let fhat = m.trace_product(&fhat_operator(d)?)?;
    // round-off can push the expectations a hair outside the triangle
    let dr = R::of_usize(d);
    let f = min(max(f, -R::one()), R::one());
    let fhat = min(max(fhat, R::zero()), dr * (R::one() + f) / R::of(2.0));
    OOState::new(d, f, fhat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use num_complex::Complex;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type State = OOState<f64>;

    fn state(d: usize, f: f64, fhat: f64) -> State {
        State::new(d, f, fhat).expect("test point must lie in the triangle")
    }

    #[test]
    fn constructor_enforces_the_triangle() {
        assert!(State::new(3, -1.0, 0.0).is_ok());
        assert!(State::new(3, 1.0, 3.0).is_ok(), "maximally entangled corner");
        assert!(matches!(
            State::new(3, -1.0, 0.5),
            Err(Error::OutsideTriangle { .. })
        ));
        assert!(matches!(
            State::new(3, 0.0, -0.5),
            Err(Error::OutsideTriangle { .. })
        ));
        assert!(matches!(
            State::new(3, 1.1, 0.0),
            Err(Error::OutsideTriangle { .. })
        ));
        assert!(matches!(
            State::new(1, 0.0, 0.0),
            Err(Error::DimensionTooSmall { .. })
        ));

        // round-off-sized violations clamp onto the boundary
        let s = State::new(3, 0.5, -1e-14).unwrap();
        assert_eq!(s.fhat(), 0.0);
    }

    #[test]
    fn coeffs_of_maximally_mixed_are_pure_identity() {
        for d in 2..=5 {
            let (a, b, c) = State::maximally_mixed(d).unwrap().coeffs();
            assert!((a - 1.0 / (d * d) as f64).abs() < 1e-15, "d = {d}");
            assert!(b.abs() < 1e-15 && c.abs() < 1e-15, "d = {d}");
        }
    }

    #[test]
    fn coeffs_satisfy_the_normalization_row() {
        // Tr rho = d^2 a + d b + d c must equal 1
        let s = state(3, -1.0, 0.0);
        let (a, b, c) = s.coeffs();
        let d = 3.0;
        assert!((d * (d * a + b + c) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn uvw_weights_at_the_ppt_square_corner() {
        let (wu, wv, ww) = state(3, 0.0, 1.0).uvw_weights();
        assert!((wu - 1.0 / 3.0).abs() < 1e-15);
        assert!((wv - 1.0 / 6.0).abs() < 1e-15);
        assert!((ww - 1.0 / 30.0).abs() < 1e-15);
    }

    #[test]
    fn uvw_weights_of_maximally_mixed_are_uniform() {
        for d in 2..=5 {
            let (wu, wv, ww) = State::maximally_mixed(d).unwrap().uvw_weights();
            let expect = 1.0 / (d * d) as f64;
            assert!((wu - expect).abs() < 1e-15, "d = {d}");
            assert!((wv - expect).abs() < 1e-15, "d = {d}");
            assert!((ww - expect).abs() < 1e-15, "d = {d}");
        }
    }

    #[test]
    fn pt_swaps_and_ppt_is_the_unit_square() {
        let s = state(3, 0.5, 0.5);
        assert_eq!(s.pt(), (0.5, 0.5), "mirror line is fixed");
        assert!(s.is_ppt());
        assert!(!state(3, -1.0, 0.0).is_ppt(), "pt gives fhat = -1 < 0");
        assert!(!state(3, 0.2, 1.5).is_ppt());
        assert!(state(3, 0.0, 1.0).is_ppt(), "corner E counts as PPT");
    }

    #[test]
    fn key_points_match_their_defining_lines() {
        let kp: KeyPoints<f64> = key_points(3).unwrap();
        assert!((kp.x.0 + 5.0 / 11.0).abs() < 1e-15);
        assert!((kp.x.1 - 9.0 / 11.0).abs() < 1e-15);
        assert!((kp.y.0 + 9.0 / 11.0).abs() < 1e-15);
        assert!((kp.y.1 - 3.0 / 11.0).abs() < 1e-15);
        assert_eq!(kp.a, (-1.0, 0.0));
        assert_eq!(kp.e, (0.0, 1.0));

        for d in 3..=6 {
            let kp: KeyPoints<f64> = key_points(d).unwrap();
            let dr = d as f64;
            for (f, fhat) in [kp.x, kp.y, kp.b] {
                assert!(
                    (fhat - dr * (1.0 + f) / 2.0).abs() < 1e-12,
                    "d = {d}: X, Y, B lie on the top edge"
                );
            }
            for (f, fhat) in [kp.b, kp.c] {
                assert!(
                    (fhat - (3.0 - 4.0 / dr + (dr - 1.0) * f)).abs() < 1e-12,
                    "d = {d}: B and C lie on the additivity border"
                );
            }
        }
        assert!(matches!(
            key_points::<f64>(2),
            Err(Error::DimensionTooSmall { .. })
        ));
    }

    #[test]
    fn embedded_basis_operators_have_trace_d() {
        for d in 2..=4 {
            let f: f64 = flip_operator::<f64>(d).unwrap().trace();
            let fh: f64 = fhat_operator::<f64>(d).unwrap().trace();
            assert!((f - d as f64).abs() < 1e-14, "Tr F, d = {d}");
            assert!((fh - d as f64).abs() < 1e-14, "Tr Fhat, d = {d}");
        }
    }

    #[test]
    fn partial_transpose_exchanges_flip_and_fhat() {
        for d in 2..=4 {
            let f = flip_operator::<f64>(d).unwrap();
            let fh = fhat_operator::<f64>(d).unwrap();
            let diff = f.partial_transpose().entries() - fh.entries();
            assert!(diff.iter().all(|e| e.norm_sqr() == 0.0), "d = {d}");
        }
    }

    #[test]
    fn flip_has_unit_absolute_value() {
        let f = flip_operator::<f64>(3).unwrap();
        let id = HermitianOperator::<f64>::identity(3);
        let diff = f.operator_abs().entries() - id.entries();
        assert!(diff.iter().all(|e| e.norm_sqr() < 1e-24), "|F| = 1");
    }

    #[test]
    fn projectors_are_orthogonal_idempotent_and_complete() {
        for d in 3..=5 {
            let u = projector_u::<f64>(d).unwrap();
            let v = projector_v::<f64>(d).unwrap();
            let w = projector_w::<f64>(d).unwrap();
            let traces = sector_traces::<f64>(d);
            assert!((u.trace() - traces[0]).abs() < 1e-12, "d = {d}");
            assert!((v.trace() - traces[1]).abs() < 1e-12, "d = {d}");
            assert!((w.trace() - traces[2]).abs() < 1e-12, "d = {d}");

            let sum = u.entries() + v.entries() + w.entries();
            let id = DMatrix::<Complex<f64>>::identity(d * d, d * d);
            assert!((sum - id).iter().all(|e| e.norm_sqr() < 1e-24), "U+V+W = 1");

            for (name, p) in [("U", &u), ("V", &v), ("W", &w)] {
                let diff = p.entries() * p.entries() - p.entries();
                assert!(
                    diff.iter().all(|e| e.norm_sqr() < 1e-24),
                    "{name}^2 = {name}, d = {d}"
                );
            }
            for (pair, a, b) in [("UV", &u, &v), ("UW", &u, &w), ("VW", &v, &w)] {
                let prod = a.entries() * b.entries();
                assert!(
                    prod.iter().all(|e| e.norm_sqr() < 1e-24),
                    "{pair} = 0, d = {d}"
                );
            }
        }
    }

    #[test]
    fn projector_partial_transposes_expand_as_expected() {
        for d in 3..=4 {
            let dr = d as f64;
            let f = flip_operator::<f64>(d).unwrap();
            let fh = fhat_operator::<f64>(d).unwrap();
            let id = DMatrix::<Complex<f64>>::identity(d * d, d * d);
            let u = projector_u::<f64>(d).unwrap();
            let v = projector_v::<f64>(d).unwrap();
            let w = projector_w::<f64>(d).unwrap();

            let ut2 = u.partial_transpose();
            let expect_u = f.entries() / Complex::new(dr, 0.0);
            assert!((ut2.entries() - expect_u).iter().all(|e| e.norm_sqr() < 1e-24));

            let vt2 = v.partial_transpose();
            let expect_v = (&id - fh.entries()) * Complex::new(0.5, 0.0);
            assert!((vt2.entries() - expect_v).iter().all(|e| e.norm_sqr() < 1e-24));

            let wt2 = w.partial_transpose();
            let expect_w = (&id + fh.entries()) * Complex::new(0.5, 0.0)
                - f.entries() / Complex::new(dr, 0.0);
            assert!((wt2.entries() - expect_w).iter().all(|e| e.norm_sqr() < 1e-24));
        }
    }

    #[test]
    fn embed_reproduces_spectrum_and_twirl_inverts_it() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for d in [3usize, 4] {
            for _ in 0..20 {
                let f = rng.gen_range(-1.0..1.0);
                let fhat = rng.gen_range(0.0..1.0) * (d as f64) * (1.0 + f) / 2.0;
                let s = state(d, f, fhat);
                let m = s.embed();

                assert!((m.trace() - 1.0).abs() < 1e-12);
                assert!(m.is_psd(1e-10), "embedded state must be PSD");

                // spectrum: uvw weights with the sector multiplicities
                let (wu, wv, ww) = s.uvw_weights();
                let mut expect: Vec<f64> = Vec::new();
                let traces = sector_traces::<f64>(d);
                expect.extend(std::iter::repeat(wu).take(traces[0] as usize));
                expect.extend(std::iter::repeat(wv).take(traces[1] as usize));
                expect.extend(std::iter::repeat(ww).take(traces[2] as usize));
                expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let got = m.eigenvalues();
                for (g, e) in got.iter().zip(expect.iter()) {
                    assert!((g - e).abs() < 1e-12, "d = {d}: {g} vs {e}");
                }

                let back = twirl(&m).unwrap();
                assert!((back.f() - s.f()).abs() < 1e-12);
                assert!((back.fhat() - s.fhat()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn twirl_of_maximally_mixed_hits_the_fixed_point() {
        let m = HermitianOperator::<f64>::maximally_mixed(3);
        let s = twirl(&m).unwrap();
        assert!((s.f() - 1.0 / 3.0).abs() < 1e-14);
        assert!((s.fhat() - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn embedded_states_commute_with_local_orthogonals() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let d = 3usize;
        let s = state(d, -0.6, 0.3);
        let m = s.embed();
        for _ in 0..5 {
            // random orthogonal O from the QR factorization of a Gaussian
            let g = DMatrix::<f64>::from_fn(d, d, |_, _| rng.gen::<f64>() - 0.5);
            let q = g.qr().q();
            let qc = q.map(|x| Complex::new(x, 0.0));
            let oo = qc.kronecker(&qc);
            let comm = m.entries() * &oo - &oo * m.entries();
            let max_entry = comm.iter().map(|e| e.norm_sqr()).fold(0.0, f64::max);
            assert!(max_entry < 1e-24, "embed must commute with O tensor O");
        }
    }

    #[test]
    fn twirl_of_random_ppt_states_lands_in_the_square() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let d = 3usize;
        let n = d * d;
        let mut found = 0;
        for _ in 0..200 {
            // a wide factor concentrates samples near the maximally
            // mixed state, where PPT states are common
            let g = DMatrix::from_fn(n, 6 * n, |_, _| {
                Complex::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            });
            let p = &g * g.adjoint();
            let tr: f64 = (0..n).map(|i| p[(i, i)].re).sum();
            let m = HermitianOperator::new(p * Complex::new(1.0 / tr, 0.0)).unwrap();
            if !m.partial_transpose().is_psd(1e-12) {
                continue;
            }
            found += 1;
            let s = twirl(&m).unwrap();
            assert!(s.is_ppt(), "twirl must preserve PPT-ness: {:?}", (s.f(), s.fhat()));
        }
        assert!(found > 0, "the sample should contain PPT states");
    }

    #[test]
    fn classify_matches_the_named_points() {
        let kp: KeyPoints<f64> = key_points(3).unwrap();

        let e = state(3, kp.e.0, kp.e.1).classify();
        assert_eq!(e.tag, RegionTag::Ppt);
        assert_eq!(e.subtag, RegionSubtag::None);

        let a = state(3, kp.a.0, kp.a.1).classify();
        assert_eq!(a.tag, RegionTag::B, "extreme Werner state sits in region B");
        assert_eq!(a.subtag, RegionSubtag::Aycd);

        // midpoint of segment XB lies on the top edge inside CYB
        let f = (kp.x.0 + kp.b.0) / 2.0;
        let mid = state(3, f, 3.0 * (1.0 + f) / 2.0).classify();
        assert_eq!(mid.tag, RegionTag::C);
        assert_eq!(mid.subtag, RegionSubtag::Cyb);

        // a non-PPT state below the additivity border
        let add = state(3, 0.2, 1.5).classify();
        assert_eq!(add.tag, RegionTag::C);
        assert_eq!(add.subtag, RegionSubtag::AdditiveStrong);

        // on the Werner line between D and the PPT square: additive, region B
        let werner = state(3, -0.5, 0.0).classify();
        assert_eq!(werner.tag, RegionTag::B);
        assert!(
            matches!(
                werner.subtag,
                RegionSubtag::AdditiveStrong | RegionSubtag::AdditiveWeak
            ),
            "f = -0.5 >= -2/3 is additive"
        );
    }

    proptest! {
        #[test]
        fn masses_are_nonnegative_and_sum_to_one(
            d in 3usize..6,
            f in -1.0f64..1.0,
            t in 0.0f64..1.0,
        ) {
            let fhat = t * (d as f64) * (1.0 + f) / 2.0;
            let s = state(d, f, fhat);
            let masses = s.sector_masses();
            let total: f64 = masses.iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            for m in masses {
                prop_assert!(m >= -1e-12);
            }
        }

        #[test]
        fn coeffs_round_trip_through_the_forward_map(
            d in 3usize..6,
            f in -1.0f64..1.0,
            t in 0.0f64..1.0,
        ) {
            let fhat = t * (d as f64) * (1.0 + f) / 2.0;
            let s = state(d, f, fhat);
            let (a, b, c) = s.coeffs();
            let dr = d as f64;
            // forward map: traces of (1, F, Fhat) against a 1 + b F + c Fhat
            let one = dr * dr * a + dr * b + dr * c;
            let ff = dr * a + dr * dr * b + dr * c;
            let fh = dr * a + dr * b + dr * dr * c;
            prop_assert!((one - 1.0).abs() < 1e-12);
            prop_assert!((ff - f).abs() < 1e-12);
            prop_assert!((fh - fhat).abs() < 1e-12);
        }

        #[test]
        fn weights_times_traces_normalize(
            d in 3usize..6,
            f in -1.0f64..1.0,
            t in 0.0f64..1.0,
        ) {
            let fhat = t * (d as f64) * (1.0 + f) / 2.0;
            let s = state(d, f, fhat);
            let (wu, wv, ww) = s.uvw_weights();
            let traces = sector_traces::<f64>(d);
            let total = wu * traces[0] + wv * traces[1] + ww * traces[2];
            prop_assert!((total - 1.0).abs() < 1e-12);
        }

        #[test]
        fn ppt_predicate_matches_matrix_partial_transpose(
            f in -1.0f64..1.0,
            t in 0.0f64..1.0,
        ) {
            let d = 3usize;
            let fhat = t * (d as f64) * (1.0 + f) / 2.0;
            let s = state(d, f, fhat);
            // keep a margin so eigenvalue round-off cannot flip the verdict
            let margin = 1e-9;
            let clearly_inside = s.f() > margin && s.fhat() < 1.0 - margin;
            let clearly_outside = s.f() < -margin || s.fhat() > 1.0 + margin;
            if clearly_inside || clearly_outside {
                let matrix_ppt = s.embed().partial_transpose().is_psd(1e-12);
                prop_assert_eq!(s.is_ppt(), matrix_ppt);
            }
        }
    }
}
