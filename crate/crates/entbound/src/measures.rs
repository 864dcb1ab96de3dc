//! Closed-form measures on OO-invariant states: the relative entropy
//! between two invariant states, the negativity, the relative entropy of
//! entanglement with respect to PPT states (REEP) with its optimal
//! witnesses, the Werner-line specialization, and the additivity test
//! that decides where REEP equals its asymptotic regularization.
//!
//! Two invariant states share the spectral sectors U, V, W, so their
//! relative entropy reduces to a three-term classical divergence between
//! the sector masses `(fhat/d, (1-f)/2, (d + df - 2 fhat)/(2d))`. The
//! REEP minimization over the PPT square likewise collapses to at most
//! three closed-form witness candidates, one per region.

use crate::config::{tol, LogBase};
use crate::error::{Error, Result};
use crate::oo_space::{OOState, Region, RegionTag};
use crate::scalar::{abs, clamp, ln, max, xlnx, Real};

/// Value of a measure together with the optimizing state and the region
/// the evaluation dispatched on.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct MeasureResult<R: Real> {
    /// The bound, in the log base the caller requested.
    pub value: R,
    /// The optimizing `(s, shat)` pair, when one is available.
    pub witness: Option<(R, R)>,
    /// Classification of the evaluated state.
    pub region: Region,
}

/// How strongly the REEP is additive on a state.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum AdditivityLevel {
    /// Additive under tensoring with arbitrary states.
    Strong,
    /// Additive under self-tensoring; REEP equals the asymptotic REEP.
    Weak,
    /// Not additive; the asymptotic REEP drops below the REEP.
    None,
}

/// Outcome of the additivity test.
///
/// The coefficients are the absolute eigenvalues of the partially
/// transposed ratio operator `(rho sigma^{-1})^T2` on the sectors U, W
/// and V, in this order. Weak additivity requires all of them to be at
/// most 1; strong additivity additionally requires the signed values to
/// be nonnegative.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct AdditivityVerdict<R: Real> {
    pub level: AdditivityLevel,
    pub coefficients: [R; 3],
}

/// One term `p ln(p/q)` of a classical divergence, with `0 ln 0 = 0` and
/// the infinite sentinel when mass sits outside the support of `q`.
fn kl_term<R: Real>(p: R, q: R) -> R {
    if p <= R::zero() {
        R::zero()
    } else if q <= R::zero() {
        R::infinity()
    } else {
        p * ln(p / q)
    }
}

/// Relative entropy in nats of `rho` with respect to the invariant state
/// with parameters `(s, shat)`, which need not satisfy the PPT square
/// conditions but must lie in the positivity triangle.
pub(crate) fn relent_nats_params<R: Real>(rho: &OOState<R>, s: R, shat: R) -> R {
    let d = R::of_usize(rho.d());
    let one = R::one();
    let two = R::of(2.0);
    let p = rho.sector_masses();
    let q = [shat / d, (one - s) / two, (d + d * s - two * shat) / (two * d)];
    kl_term(p[0], q[0]) + kl_term(p[1], q[1]) + kl_term(p[2], q[2])
}

/// Relative entropy `S(rho || sigma)` between two OO-invariant states,
/// evaluated on the shared sector decomposition. Returns the `+inf`
/// sentinel when `rho` has mass on a sector where `sigma` has none.
pub fn relent_closed<R: Real>(rho: &OOState<R>, sigma: &OOState<R>, base: LogBase) -> Result<R> {
    if rho.d() != sigma.d() {
        return Err(Error::DimensionMismatch {
            left: rho.d(),
            right: sigma.d(),
        });
    }
    Ok(base.from_nats(relent_nats_params(rho, sigma.f(), sigma.fhat())))
}

/// Negativity from raw parameters; see [`negativity_closed`].
pub(crate) fn negativity_params<R: Real>(d: usize, s: R, shat: R) -> R {
    let d = R::of_usize(d);
    let one = R::one();
    let two = R::of(2.0);
    abs(s) / d + abs(one - shat) / two + abs(d + d * shat - two * s) / (two * d)
}

/// The negativity `Tr |sigma^T2|` of an invariant state:
/// `|s|/d + |1 - shat|/2 + |d + d shat - 2s|/(2d)`. Equals 1 exactly for
/// PPT states.
pub fn negativity_closed<R: Real>(sigma: &OOState<R>) -> R {
    negativity_params(sigma.d(), sigma.f(), sigma.fhat())
}

/// The winning REEP witness for a non-PPT state.
#[derive(Copy, Clone, Debug)]
pub(crate) struct Candidate<R: Real> {
    pub region: RegionTag,
    pub witness: (R, R),
    pub nats: R,
}

/// Evaluates the three optimal-witness families and keeps the valid one
/// with the smallest relative entropy. Ties keep the earlier family, in
/// the order A, B, C.
pub(crate) fn best_candidate<R: Real>(rho: &OOState<R>) -> Candidate<R> {
    let gtol = R::of(tol::GEOMETRY);
    let d = R::of_usize(rho.d());
    let one = R::one();
    let zero = R::zero();
    let f = rho.f();
    let fhat = rho.fhat();

    let mut best: Option<Candidate<R>> = None;
    let consider = |best: &mut Option<Candidate<R>>, cand: Candidate<R>| match best {
        Some(b) if cand.nats >= b.nats => {}
        _ => *best = Some(cand),
    };

    // family A: shat = 1, s = (1 + (d-1)f - fhat)/(d - fhat); the
    // denominator vanishes only at the maximally entangled corner, where
    // the witness limit is s = 1. Valid while s stays nonnegative.
    let s_a = if abs(d - fhat) <= gtol {
        one
    } else {
        (one + (d - one) * f - fhat) / (d - fhat)
    };
    if s_a >= -gtol {
        let s_a = clamp(s_a, zero, one);
        consider(
            &mut best,
            Candidate {
                region: RegionTag::A,
                witness: (s_a, one),
                nats: relent_nats_params(rho, s_a, one),
            },
        );
    }

    // family B: s = 0, shat = fhat/(1 + f), with the f = -1 edge limit 0.
    // Valid while shat stays at most 1.
    let shat_b = if one + f <= gtol {
        zero
    } else {
        fhat / (one + f)
    };
    if shat_b <= one + gtol {
        let shat_b = clamp(shat_b, zero, one);
        consider(
            &mut best,
            Candidate {
                region: RegionTag::B,
                witness: (zero, shat_b),
                nats: relent_nats_params(rho, zero, shat_b),
            },
        );
    }

    // family C: the fixed corner witness s = 0, shat = 1, always valid.
    consider(
        &mut best,
        Candidate {
            region: RegionTag::C,
            witness: (zero, one),
            nats: relent_nats_params(rho, zero, one),
        },
    );

    best.expect("family C is unconditionally valid")
}

/// The relative entropy of entanglement with respect to PPT states.
///
/// Zero with witness `rho` itself on PPT states; otherwise the smallest
/// relative entropy over the valid closed-form witness families, with
/// the optimizing `(s, shat)` attached.
pub fn reep<R: Real>(rho: &OOState<R>, base: LogBase) -> MeasureResult<R> {
    if rho.is_ppt() {
        return MeasureResult {
            value: R::zero(),
            witness: Some((rho.f(), rho.fhat())),
            region: rho.classify(),
        };
    }
    let cand = best_candidate(rho);
    // the measure is nonnegative exactly; stop cancellation round-off
    // from leaking a -1e-28 through to callers
    MeasureResult {
        value: base.from_nats(max(cand.nats, R::zero())),
        witness: Some(cand.witness),
        region: rho.classify(),
    }
}

/// REEP on the Werner line, which depends only on `f`:
/// `log 2 + ((1+f)/2) log((1+f)/2) + ((1-f)/2) log((1-f)/2)` for
/// `f < 0`, and 0 on the PPT side `f >= 0`. Independent of d.
pub fn werner_reep<R: Real>(f: R, d: usize, base: LogBase) -> Result<R> {
    if d < 2 {
        return Err(Error::DimensionTooSmall { d, min: 2 });
    }
    let gtol = R::of(tol::GEOMETRY);
    if f < -R::one() - gtol || f > R::one() + gtol {
        return Err(Error::ParameterRange {
            name: "f",
            value: crate::scalar::to_f64(f),
            lo: -1.0,
            hi: 1.0,
        });
    }
    if f >= R::zero() {
        return Ok(R::zero());
    }
    let half = R::of(0.5);
    let one = R::one();
    let nats = R::of(std::f64::consts::LN_2)
        + xlnx((one + f) * half)
        + xlnx((one - f) * half);
    Ok(base.from_nats(max(nats, R::zero())))
}

/// Ratio with the conventions `0/0 = 0` (empty sector on both sides) and
/// `x/0 = +inf` for `x > 0` (mass outside the witness support).
fn sector_ratio<R: Real>(num: R, den: R) -> R {
    let gtol = R::of(tol::GEOMETRY);
    if abs(den) <= gtol {
        if abs(num) <= gtol {
            R::zero()
        } else {
            R::infinity()
        }
    } else {
        num / den
    }
}

/// Tests whether the REEP is additive on `rho`, via the eigenvalues of
/// the partially transposed ratio operator `(rho sigma^{-1})^T2` built
/// from the optimal witness sigma.
///
/// With the sector-weight ratios `u = fhat/shat`, `v = (1-f)/(1-s)`,
/// `w = (d + df - 2 fhat)/(d + ds - 2 shat)` the three eigenvalues are
///
/// ```text
/// e_U = (v+w)/2 + (u-w)/d + d(w-v)/2
/// e_W = (v+w)/2 + (u-w)/d
/// e_V = (v+w)/2 - (u-w)/d
/// ```
///
/// Weak additivity holds iff all of `|e_U|, |e_W|, |e_V|` are at most 1,
/// strong additivity iff additionally every signed value is nonnegative.
/// PPT states get `sigma = rho`, a unit ratio operator, and are strongly
/// additive with coefficients (1, 1, 1).
///
/// Substituting each witness family collapses its ratios: region A gives
/// `v = w = (d - fhat)/(d - 1)`, region B gives `u = w = 1 + f` and
/// `v = 1 - f`. The collapsed forms are used directly; they also carry
/// the right limits on the edges where a raw ratio degenerates to 0/0
/// (the fhat = 0 axis, the top edge, and f = 1).
pub fn additivity_check<R: Real>(rho: &OOState<R>) -> AdditivityVerdict<R> {
    let one = R::one();
    if rho.is_ppt() {
        return AdditivityVerdict {
            level: AdditivityLevel::Strong,
            coefficients: [one, one, one],
        };
    }
    let d = R::of_usize(rho.d());
    let two = R::of(2.0);
    let f = rho.f();
    let fhat = rho.fhat();

    let (u, v, w) = match best_candidate(rho).region {
        RegionTag::A => {
            let vw = (d - fhat) / (d - one);
            (fhat, vw, vw)
        }
        RegionTag::B => (one + f, one - f, one + f),
        RegionTag::C => (
            fhat,
            one - f,
            sector_ratio(d + d * f - two * fhat, d - two),
        ),
        RegionTag::Ppt => unreachable!("PPT states are handled above"),
    };

    let mean = (v + w) / two;
    let skew = (u - w) / d;
    let e_u = mean + skew + d * (w - v) / two;
    let e_w = mean + skew;
    let e_v = mean - skew;

    let gtol = R::of(tol::GEOMETRY);
    let signed = [e_u, e_w, e_v];
    let weak = signed.iter().all(|&e| abs(e) <= one + gtol);
    let strong = weak && signed.iter().all(|&e| e >= -gtol);
    let level = if strong {
        AdditivityLevel::Strong
    } else if weak {
        AdditivityLevel::Weak
    } else {
        AdditivityLevel::None
    };
    AdditivityVerdict {
        level,
        coefficients: [abs(e_u), abs(e_w), abs(e_v)],
    }
}

/// Whether the closed additivity inequalities `f >= -2/d` and
/// `fhat <= 3 - 4/d + (d-1)f` hold (inclusive). Matches the coefficient
/// test of [`additivity_check`] everywhere.
pub fn is_additive_region<R: Real>(rho: &OOState<R>) -> bool {
    let gtol = R::of(tol::GEOMETRY);
    let d = R::of_usize(rho.d());
    rho.f() >= -R::of(2.0) / d - gtol
        && rho.fhat() <= R::of(3.0) - R::of(4.0) / d + (d - R::one()) * rho.f() + gtol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oo_space::RegionSubtag;
    use proptest::prelude::*;

    type State = OOState<f64>;

    fn state(d: usize, f: f64, fhat: f64) -> State {
        State::new(d, f, fhat).expect("test point must lie in the triangle")
    }

    #[test]
    fn relent_between_extreme_werner_and_corner_witness_is_one_bit() {
        let rho = state(3, -1.0, 0.0);
        let sigma = state(3, 0.0, 1.0);
        let bits = relent_closed(&rho, &sigma, LogBase::Two).unwrap();
        assert!((bits - 1.0).abs() < 1e-14, "got {bits}");
    }

    #[test]
    fn relent_detects_support_mismatch() {
        let rho = state(3, 0.0, 1.0);
        let sigma = state(3, 1.0, 0.0);
        let v = relent_closed(&rho, &sigma, LogBase::Two).unwrap();
        assert!(v.is_infinite());
    }

    #[test]
    fn relent_rejects_mixed_dimensions() {
        let rho = state(3, 0.5, 0.5);
        let sigma = state(4, 0.5, 0.5);
        assert!(matches!(
            relent_closed(&rho, &sigma, LogBase::Two),
            Err(Error::DimensionMismatch { left: 3, right: 4 })
        ));
    }

    #[test]
    fn negativity_of_extreme_werner_state() {
        let v = negativity_closed(&state(3, -1.0, 0.0));
        assert!((v - 5.0 / 3.0).abs() < 1e-14, "got {v}");
    }

    #[test]
    fn reep_vanishes_on_ppt_and_is_one_bit_at_the_werner_extreme() {
        let ppt = reep(&state(3, 0.5, 0.5), LogBase::Two);
        assert_eq!(ppt.value, 0.0);
        assert_eq!(ppt.region.tag, RegionTag::Ppt);

        let werner = reep(&state(3, -1.0, 0.0), LogBase::Two);
        assert!((werner.value - 1.0).abs() < 1e-14);
        assert_eq!(werner.region.tag, RegionTag::B, "ties go to the earlier family");
        assert_eq!(werner.witness, Some((0.0, 0.0)));
    }

    #[test]
    fn reep_at_point_b_uses_the_corner_witness() {
        // point B for d = 3 sits on the border of region C
        let r = reep(&state(3, -1.0 / 3.0, 1.0), LogBase::Two);
        assert_eq!(r.region.tag, RegionTag::C);
        assert_eq!(r.witness, Some((0.0, 1.0)));
    }

    #[test]
    fn werner_reep_endpoints() {
        assert!((werner_reep::<f64>(-1.0, 3, LogBase::Two).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(werner_reep::<f64>(0.0, 3, LogBase::Two).unwrap(), 0.0);
        assert_eq!(werner_reep::<f64>(0.7, 3, LogBase::Two).unwrap(), 0.0);
        assert!(matches!(
            werner_reep::<f64>(-1.5, 3, LogBase::Two),
            Err(Error::ParameterRange { .. })
        ));
        assert!(matches!(
            werner_reep::<f64>(-0.5, 1, LogBase::Two),
            Err(Error::DimensionTooSmall { .. })
        ));
    }

    #[test]
    fn werner_reep_matches_reep_on_the_werner_line() {
        for d in [3usize, 4, 5] {
            for k in 0..20 {
                let f = -1.0 + 0.99 * k as f64 / 19.0;
                let direct = reep(&state(d, f, 0.0), LogBase::Two).value;
                let closed = werner_reep(f, d, LogBase::Two).unwrap();
                assert!(
                    (direct - closed).abs() < 1e-12,
                    "d = {d}, f = {f}: {direct} vs {closed}"
                );
            }
        }
    }

    #[test]
    fn reep_in_region_b_depends_only_on_f() {
        // states sharing f but with different fhat inside region B
        let f = -0.9;
        let base = reep(&state(3, f, 0.0), LogBase::Two).value;
        for fhat in [0.02, 0.05, 0.1] {
            let r = reep(&state(3, f, fhat), LogBase::Two);
            assert_eq!(r.region.tag, RegionTag::B);
            assert!(
                (r.value - base).abs() < 1e-12,
                "fhat = {fhat}: {} vs {base}",
                r.value
            );
        }
    }

    #[test]
    fn additivity_at_the_named_points() {
        // point C is on the border: weakly additive but not strongly
        let c = additivity_check(&state(3, -2.0 / 3.0, 1.0 / 3.0));
        assert_eq!(c.level, AdditivityLevel::Weak);
        for coef in c.coefficients {
            assert!(coef <= 1.0 + 1e-12, "border coefficients peak at 1: {coef}");
        }

        // the extreme Werner state is far outside the additive region
        let a = additivity_check(&state(3, -1.0, 0.0));
        assert_eq!(a.level, AdditivityLevel::None);
        assert!((a.coefficients[0] - 2.0).abs() < 1e-12);

        // PPT states are strongly additive with unit coefficients
        let p = additivity_check(&state(3, 0.5, 0.5));
        assert_eq!(p.level, AdditivityLevel::Strong);
        for coef in p.coefficients {
            assert!((coef - 1.0).abs() < 1e-12);
        }

        // a non-PPT state inside the strong region
        let s = additivity_check(&state(3, 0.2, 1.5));
        assert_eq!(s.level, AdditivityLevel::Strong);
    }

    #[test]
    fn additivity_flips_across_the_werner_crossing() {
        let eps = 1e-6;
        let inside = additivity_check(&state(3, -2.0 / 3.0 + eps, 0.0));
        let outside = additivity_check(&state(3, -2.0 / 3.0 - eps, 0.0));
        assert_ne!(inside.level, AdditivityLevel::None);
        assert_eq!(outside.level, AdditivityLevel::None);
    }

    #[test]
    fn classify_subtag_agrees_with_the_coefficient_test() {
        let mid_xb = {
            let f = (-5.0 / 11.0 - 1.0 / 3.0) / 2.0;
            state(3, f, 3.0 * (1.0 + f) / 2.0)
        };
        assert_eq!(mid_xb.classify().subtag, RegionSubtag::Cyb);
        assert_eq!(additivity_check(&mid_xb).level, AdditivityLevel::None);
    }

    proptest! {
        #[test]
        fn relent_is_zero_on_the_diagonal(
            d in 3usize..6,
            f in -1.0f64..1.0,
            t in 0.0f64..1.0,
        ) {
            let fhat = t * (d as f64) * (1.0 + f) / 2.0;
            let s = state(d, f, fhat);
            let v = relent_closed(&s, &s, LogBase::Two).unwrap();
            prop_assert!(v.abs() < 1e-12);
        }

        #[test]
        fn negativity_is_exactly_one_on_the_ppt_square(
            d in 3usize..6,
            s in 0.0f64..1.0,
            shat in 0.0f64..1.0,
        ) {
            let v = negativity_closed(&state(d, s, shat));
            prop_assert!((v - 1.0).abs() < 1e-14);
        }

        #[test]
        fn reep_is_nonnegative_with_a_ppt_witness(
            d in 3usize..6,
            f in -1.0f64..1.0,
            t in 0.0f64..1.0,
        ) {
            let fhat = t * (d as f64) * (1.0 + f) / 2.0;
            let rho = state(d, f, fhat);
            let r = reep(&rho, LogBase::Two);
            prop_assert!(r.value >= 0.0);
            let (s, shat) = r.witness.expect("reep always reports a witness");
            prop_assert!((-1e-9..=1.0 + 1e-9).contains(&s));
            prop_assert!((-1e-9..=1.0 + 1e-9).contains(&shat));
            // value vanishes exactly on PPT states
            prop_assert_eq!(r.value == 0.0, rho.is_ppt());
        }

        #[test]
        fn additive_verdict_matches_the_closed_inequalities(
            f in -1.0f64..1.0,
            t in 0.0f64..1.0,
        ) {
            let d = 3usize;
            let fhat = t * (d as f64) * (1.0 + f) / 2.0;
            let rho = state(d, f, fhat);
            // skip a thin band around the border where the two tests may
            // disagree within tolerance
            let dist_cd = rho.f() + 2.0 / 3.0;
            let dist_bc = 3.0 - 4.0 / 3.0 + 2.0 * rho.f() - rho.fhat();
            if dist_cd.abs() > 1e-9 && dist_bc.abs() > 1e-9 {
                let by_region = is_additive_region(&rho);
                let by_coefficients =
                    additivity_check(&rho).level != AdditivityLevel::None;
                prop_assert_eq!(by_region, by_coefficients);
            }
        }
    }
}
