//! The Rains bound on OO-invariant states: minimize
//! `S(rho||sigma) + log Tr|sigma^T2|` over all states sigma.
//!
//! Restricted to the invariant family the minimization is two
//! dimensional and splits into three cases. Where the REEP is additive
//! the bound coincides with it. On the rest of the triangle the
//! candidate branch `shat > 1` of the stationarity equations is always
//! excluded, so the relevant branch has `s <= 0`, `shat <= 1`, where the
//! negativity is `(d - 2s)/d` and the objective is smooth. Its
//! stationary point
//!
//! ```text
//! s = (2 + d f) / (d + 2 f),   shat = (2 + d) fhat / (d + 2 f)
//! ```
//!
//! lies inside the triangle exactly for states in the quadrilateral
//! AYCD, where the bound depends only on f. Above the line through C
//! and Y the stationary `shat` exceeds 1 and the constrained minimum
//! sits on the boundary `shat = 1`, found here by a bracketed
//! one-dimensional search; on the top-edge segments YX and XB it has the
//! closed forms exposed as [`segment_yx_value`] and [`segment_xb_value`].
//!
//! An independent numerical minimizer over the full triangle
//! ([`rains_numeric`]) cross-checks every closed form.

use crate::config::{tol, LogBase};
use crate::error::{Error, Result};
use crate::measures::{self, MeasureResult};
use crate::oo_space::{OOState, RegionSubtag, RegionTag};
use crate::opt::{golden_section, nelder_mead_2d, zoom_min_2d};
use crate::scalar::{abs, clamp, ln, max, to_f64, xlnx, Real};

/// Which case of the minimization produced a Rains value.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum RainsBranch {
    /// Additive region: the REEP witness is already optimal.
    AdditiveReuse,
    /// Interior stationary point of the smooth branch (region AYCD).
    StationaryAycd,
    /// Constrained minimum on the boundary `shat = 1` (region CYB).
    BoundaryShatOne,
}

/// The optimizing state of the Rains minimization. It is a valid
/// invariant state but, unlike a REEP witness, need not be PPT.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct RainsWitness<R: Real> {
    pub s: R,
    pub shat: R,
    pub branch: RainsBranch,
}

/// Why the `shat > 1` branch of the stationarity equations never
/// contributes: its candidate point, the first condition it violates,
/// and the verdict.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct BranchExclusion<R: Real> {
    /// Candidate `s` of the `shat > 1` branch.
    pub s: R,
    /// Candidate `shat` of the `shat > 1` branch.
    pub shat: R,
    /// The condition the candidate violates, when it violates one.
    pub violated: Option<&'static str>,
    /// Whether the branch is ruled out for this state.
    pub excluded: bool,
}

/// The Rains objective `S(rho||sigma) + log Tr|sigma^T2|` for two
/// invariant states, in the requested unit.
pub fn rains_objective<R: Real>(
    rho: &OOState<R>,
    sigma: &OOState<R>,
    base: LogBase,
) -> Result<R> {
    if rho.d() != sigma.d() {
        return Err(Error::DimensionMismatch {
            left: rho.d(),
            right: sigma.d(),
        });
    }
    let nats = measures::relent_nats_params(rho, sigma.f(), sigma.fhat())
        + ln(measures::negativity_params(sigma.d(), sigma.f(), sigma.fhat()));
    Ok(base.from_nats(nats))
}

/// The objective in the form `S(rho || tau)` with the subnormalized
/// `tau = sigma / Tr|sigma^T2|`. Agrees with [`rains_objective`]; the
/// two are kept separate so the rescaling identity can be tested.
pub fn rains_objective_tau_form<R: Real>(
    rho: &OOState<R>,
    sigma: &OOState<R>,
    base: LogBase,
) -> Result<R> {
    if rho.d() != sigma.d() {
        return Err(Error::DimensionMismatch {
            left: rho.d(),
            right: sigma.d(),
        });
    }
    let norm = measures::negativity_params(sigma.d(), sigma.f(), sigma.fhat());
    let d = R::of_usize(rho.d());
    let one = R::one();
    let two = R::of(2.0);
    let (s, shat) = (sigma.f(), sigma.fhat());
    let p = rho.sector_masses();
    let q = [
        shat / d / norm,
        (one - s) / two / norm,
        (d + d * s - two * shat) / (two * d) / norm,
    ];
    let mut nats = R::zero();
    for i in 0..3 {
        nats = nats
            + if p[i] <= R::zero() {
                R::zero()
            } else if q[i] <= R::zero() {
                R::infinity()
            } else {
                p[i] * ln(p[i] / q[i])
            };
    }
    Ok(base.from_nats(nats))
}

/// The Rains objective on the branch `s <= 0`, `shat <= 1`, where the
/// negativity reduces to `(d - 2s)/d` and the objective is a smooth
/// function of `(s, shat)`:
///
/// `S(rho||sigma) + log((d - 2s)/d)`.
///
/// Evaluated outside that branch this is the analytic continuation used
/// by the stationarity analysis, not the Rains objective itself.
pub fn branch_objective<R: Real>(rho: &OOState<R>, s: R, shat: R, base: LogBase) -> R {
    let d = R::of_usize(rho.d());
    let nats = measures::relent_nats_params(rho, s, shat)
        + ln((d - R::of(2.0) * s) / d);
    base.from_nats(nats)
}

/// The stationary point of the smooth branch,
/// `s = (2 + df)/(d + 2f)`, `shat = (2 + d) fhat / (d + 2f)`.
///
/// Tagged [`RainsBranch::StationaryAycd`] when `shat <= 1`, so the point
/// itself is the minimizer; otherwise [`RainsBranch::BoundaryShatOne`],
/// meaning the constrained minimum moves to the line `shat = 1`.
pub fn stationary_point<R: Real>(rho: &OOState<R>) -> Result<RainsWitness<R>> {
    let d = R::of_usize(rho.d());
    let two = R::of(2.0);
    let den = d + two * rho.f();
    if abs(den) <= R::of(tol::GEOMETRY) {
        return Err(Error::Singular { what: "d + 2f" });
    }
    let s = (two + d * rho.f()) / den;
    let shat = (two + d) * rho.fhat() / den;
    let branch = if shat <= R::one() + R::of(tol::GEOMETRY) {
        RainsBranch::StationaryAycd
    } else {
        RainsBranch::BoundaryShatOne
    };
    Ok(RainsWitness { s, shat, branch })
}

/// The stationary point of the complementary branch `shat > 1` (where
/// the negativity picks up a `|1 - shat|` contribution) and the reason
/// it never produces a minimizer: for every state of the non-additive
/// region the candidate either contradicts its own branch assumption or
/// leaves the positivity triangle.
pub fn shat_gt1_branch_excluded<R: Real>(rho: &OOState<R>) -> BranchExclusion<R> {
    let d = R::of_usize(rho.d());
    let one = R::one();
    let two = R::of(2.0);
    let den = (d * d - two) * rho.f() - d * rho.fhat();
    if abs(den) <= R::of(tol::GEOMETRY) {
        return BranchExclusion {
            s: R::nan(),
            shat: R::nan(),
            violated: Some("stationarity equations are degenerate"),
            excluded: true,
        };
    }
    let s = (d * d - d * rho.fhat() - two) / den;
    let shat = -two * rho.fhat() / den;
    let gtol = R::of(tol::GEOMETRY);

    let violated = if shat <= one + gtol {
        Some("shat > 1 (branch assumption)")
    } else if shat < -gtol {
        Some("shat >= 0")
    } else if s > one + gtol {
        Some("s <= 1")
    } else if shat > d * (one + s) / two + gtol {
        Some("shat <= d(1 + s)/2")
    } else {
        None
    };
    BranchExclusion {
        s,
        shat,
        violated,
        excluded: violated.is_some(),
    }
}

/// Closed form of the Rains bound in region AYCD, an affine function of
/// f alone: `((1 + f) log(d - 2) - 2 log d - (f - 1) log(d + 2)) / 2`.
pub fn aycd_value<R: Real>(f: R, d: usize, base: LogBase) -> Result<R> {
    if d < 3 {
        return Err(Error::DimensionTooSmall { d, min: 3 });
    }
    let dr = R::of_usize(d);
    let one = R::one();
    let two = R::of(2.0);
    let nats = ((one + f) * ln(dr - two) - two * ln(dr) - (f - one) * ln(dr + two)) / two;
    Ok(base.from_nats(nats))
}

/// Closed form of the Rains bound on the top-edge segment YX:
/// `((1+f)/2) log(d(1+f)) + ((1-f)/2) log(d(1-f)/(d-1))
///  + log((d(d+2) - 4)/d^2) - log 2`.
pub fn segment_yx_value<R: Real>(f: R, d: usize, base: LogBase) -> Result<R> {
    if d < 3 {
        return Err(Error::DimensionTooSmall { d, min: 3 });
    }
    let dr = R::of_usize(d);
    let one = R::one();
    let two = R::of(2.0);
    // grouped so that the f = +-1 endpoints stay finite via 0 log 0 = 0
    let t = (one + f) / two;
    let u = (one - f) / two;
    let nats = xlnx(t) + t * ln(two * dr) + xlnx(u) + u * ln(two * dr / (dr - one))
        + ln((dr * (dr + two) - R::of(4.0)) / (dr * dr))
        - ln(two);
    Ok(base.from_nats(nats))
}

/// Closed form of the Rains bound on the top-edge segment XB:
/// `((1+f)/2) log(d-2) + ((f-1)/2) log(d/4)`.
pub fn segment_xb_value<R: Real>(f: R, d: usize, base: LogBase) -> Result<R> {
    if d < 3 {
        return Err(Error::DimensionTooSmall { d, min: 3 });
    }
    let dr = R::of_usize(d);
    let one = R::one();
    let two = R::of(2.0);
    let nats = (one + f) / two * ln(dr - two) + (f - one) / two * ln(dr / R::of(4.0));
    Ok(base.from_nats(nats))
}

/// Lower end of the boundary-search bracket: with `shat = 1` fixed, a
/// valid state needs `1 <= d(1 + s)/2`, i.e. `s >= (2 - d)/d`.
fn boundary_bracket_lo<R: Real>(d: usize) -> R {
    (R::of(2.0) - R::of_usize(d)) / R::of_usize(d)
}

/// The Rains bound from the closed case analysis.
///
/// PPT states give 0. Where the REEP is additive the REEP value and
/// witness are reused. In AYCD the affine closed form applies with the
/// stationary point as witness. In CYB the minimum is located on the
/// line `shat = 1` by golden-section search over the feasible bracket
/// `s` in `[(2-d)/d, 0]`.
pub fn rains_closed<R: Real>(rho: &OOState<R>, base: LogBase) -> Result<MeasureResult<R>> {
    let region = rho.classify();
    if region.tag == RegionTag::Ppt {
        return Ok(MeasureResult {
            value: R::zero(),
            witness: Some((rho.f(), rho.fhat())),
            region,
        });
    }
    match region.subtag {
        RegionSubtag::AdditiveStrong | RegionSubtag::AdditiveWeak => {
            Ok(measures::reep(rho, base))
        }
        RegionSubtag::Aycd => {
            if rho.d() < 3 {
                return Err(Error::DimensionTooSmall { d: rho.d(), min: 3 });
            }
            let w = stationary_point(rho)?;
            Ok(MeasureResult {
                value: aycd_value(rho.f(), rho.d(), base)?,
                witness: Some((w.s, clamp(w.shat, R::zero(), R::one()))),
                region,
            })
        }
        RegionSubtag::Cyb => {
            if rho.d() < 3 {
                return Err(Error::DimensionTooSmall { d: rho.d(), min: 3 });
            }
            let objective = |s: R| branch_objective(rho, s, R::one(), LogBase::E);
            let (s_opt, nats) = golden_section(
                objective,
                boundary_bracket_lo(rho.d()),
                R::zero(),
                R::of(1e-12),
                240,
            );
            Ok(MeasureResult {
                value: base.from_nats(max(nats, R::zero())),
                witness: Some((s_opt, R::one())),
                region,
            })
        }
        RegionSubtag::None => unreachable!("non-PPT states always get a subtag"),
    }
}

/// The Rains bound from an independent numerical minimization over the
/// whole state triangle: multi-start Nelder-Mead on the exact objective
/// (negativity in all branches, not just the smooth one), polished by a
/// zooming grid around the best point. Deterministic.
pub fn rains_numeric<R: Real>(rho: &OOState<R>, base: LogBase) -> Result<MeasureResult<R>> {
    let region = rho.classify();
    if region.tag == RegionTag::Ppt {
        return Ok(MeasureResult {
            value: R::zero(),
            witness: Some((rho.f(), rho.fhat())),
            region,
        });
    }
    let d = rho.d();
    let dr = R::of_usize(d);
    let one = R::one();
    let two = R::of(2.0);

    // project onto the triangle and penalize the distance, so the search
    // is unconstrained but cannot prefer infeasible points
    let project = |x: [R; 2]| -> [R; 2] {
        let s = clamp(x[0], -one, one);
        let shat = clamp(x[1], R::zero(), dr * (one + s) / two);
        [s, shat]
    };
    let objective = |x: [R; 2]| -> R {
        let p = project(x);
        let dist2 = (x[0] - p[0]) * (x[0] - p[0]) + (x[1] - p[1]) * (x[1] - p[1]);
        measures::relent_nats_params(rho, p[0], p[1])
            + ln(measures::negativity_params(d, p[0], p[1]))
            + R::of(10.0) * dist2
    };

    // boundary-biased starts pulled slightly toward the centroid, plus
    // the REEP witness
    let centroid = [one / R::of(3.0), dr / R::of(3.0)];
    let pull = R::of(1e-3);
    let raw_starts: [[R; 2]; 8] = [
        [-one, R::zero()],
        [one, R::zero()],
        [one, dr],
        [R::zero(), R::zero()],
        [one, dr / two],
        [R::zero(), dr / two],
        [R::zero(), one],
        [one, one],
    ];
    let reep_witness = measures::reep(rho, LogBase::E)
        .witness
        .expect("reep always reports a witness");

    let mut evaluations = 0usize;
    let mut best_x = [reep_witness.0, reep_witness.1];
    let mut best_v = objective(best_x);
    let mut best_converged = false;
    evaluations += 1;
    let mut runs: Vec<crate::opt::Minimum<R>> = Vec::with_capacity(9);
    for raw in raw_starts {
        let start = [
            raw[0] + pull * (centroid[0] - raw[0]),
            raw[1] + pull * (centroid[1] - raw[1]),
        ];
        runs.push(nelder_mead_2d(
            &objective,
            start,
            R::of(0.1),
            R::of(1e-10),
            R::of(1e-14),
            4000,
        ));
    }
    runs.push(nelder_mead_2d(
        &objective,
        [reep_witness.0, reep_witness.1],
        R::of(0.05),
        R::of(1e-10),
        R::of(1e-14),
        4000,
    ));
    for m in runs {
        evaluations += m.evaluations;
        if m.value < best_v {
            best_v = m.value;
            best_x = m.x;
            best_converged = m.converged;
        }
    }

    // grid polish around the best point walks through kinks that stall
    // a simplex; widen the window when that simplex gave up early
    let radius = if best_converged { R::of(1e-3) } else { R::of(1e-2) };
    let (zx, zv) = zoom_min_2d(
        &objective,
        best_x,
        radius,
        [-one, R::zero()],
        [one, dr],
        17,
        10,
    );
    evaluations += 17 * 17 * 10;
    if zv < best_v {
        best_x = zx;
    }

    let witness = project(best_x);
    let nats = measures::relent_nats_params(rho, witness[0], witness[1])
        + ln(measures::negativity_params(d, witness[0], witness[1]));
    if !nats.is_finite() {
        return Err(Error::NoConvergence {
            best_value: to_f64(nats),
            best_s: to_f64(witness[0]),
            best_shat: to_f64(witness[1]),
            evaluations,
        });
    }
    Ok(MeasureResult {
        value: base.from_nats(max(nats, R::zero())),
        witness: Some((witness[0], witness[1])),
        region,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oo_space::key_points;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type State = OOState<f64>;

    fn state(d: usize, f: f64, fhat: f64) -> State {
        State::new(d, f, fhat).expect("test point must lie in the triangle")
    }

    /// Uniform sample of the non-additive quadrilateral AYCD for d = 3,
    /// kept a margin away from the fhat = 0 edge where the objective has
    /// a log singularity in its second derivative. The region is capped
    /// by the CY line right of Y and by the top edge left of it.
    fn sample_aycd(rng: &mut ChaCha8Rng) -> State {
        loop {
            let f: f64 = rng.gen_range(-0.999..-2.0 / 3.0);
            let cap = ((3.0 + 2.0 * f) / 5.0).min(3.0 * (1.0 + f) / 2.0);
            if cap <= 2e-3 {
                continue;
            }
            let fhat = rng.gen_range(1e-3..cap);
            let s = state(3, f, fhat);
            if s.classify().subtag == RegionSubtag::Aycd {
                return s;
            }
        }
    }

    #[test]
    fn stationary_point_at_the_werner_extreme() {
        let w = stationary_point(&state(3, -1.0, 0.0)).unwrap();
        assert!((w.s + 1.0).abs() < 1e-14);
        assert!(w.shat.abs() < 1e-14);
        assert_eq!(w.branch, RainsBranch::StationaryAycd);
    }

    #[test]
    fn stationary_shat_is_one_exactly_on_the_cy_line() {
        // the line through C and Y is fhat = (d + 2f)/(d + 2)
        for d in [3usize, 4, 5] {
            let dr = d as f64;
            let f = -0.7;
            let fhat = (dr + 2.0 * f) / (dr + 2.0);
            let w = stationary_point(&state(d, f, fhat)).unwrap();
            assert!((w.shat - 1.0).abs() < 1e-12, "d = {d}: {}", w.shat);
        }
    }

    #[test]
    fn stationary_point_kills_the_gradient() {
        let rho = state(3, -0.7, 0.1);
        let w = stationary_point(&rho).unwrap();
        assert_eq!(w.branch, RainsBranch::StationaryAycd);
        let h = 1e-5;
        let g_s = (branch_objective(&rho, w.s + h, w.shat, LogBase::E)
            - branch_objective(&rho, w.s - h, w.shat, LogBase::E))
            / (2.0 * h);
        let g_shat = (branch_objective(&rho, w.s, w.shat + h, LogBase::E)
            - branch_objective(&rho, w.s, w.shat - h, LogBase::E))
            / (2.0 * h);
        assert!(g_s.abs() < 1e-6, "df/ds = {g_s}");
        assert!(g_shat.abs() < 1e-6, "df/dshat = {g_shat}");
    }

    #[test]
    fn shat_gt1_branch_is_excluded_at_the_werner_extreme() {
        let report = shat_gt1_branch_excluded(&state(3, -1.0, 0.0));
        assert!(report.excluded);
        assert_eq!(report.violated, Some("shat > 1 (branch assumption)"));
        assert!(report.shat.abs() < 1e-14, "fhat = 0 forces shat = 0");
    }

    #[test]
    fn shat_gt1_branch_is_excluded_across_the_nonadditive_region() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..60 {
            let rho = sample_aycd(&mut rng);
            let report = shat_gt1_branch_excluded(&rho);
            assert!(report.excluded, "state {:?}", (rho.f(), rho.fhat()));
        }
    }

    #[test]
    fn rains_at_the_werner_extreme_matches_the_affine_form() {
        let r = rains_closed(&state(3, -1.0, 0.0), LogBase::Two).unwrap();
        let expect = (5.0f64 / 3.0).log2();
        assert!((r.value - expect).abs() < 1e-12, "{} vs {expect}", r.value);
        assert!((r.value - 0.736966).abs() < 1e-5);
        assert_eq!(r.region.subtag, RegionSubtag::Aycd);
    }

    #[test]
    fn closed_segment_forms_join_continuously() {
        for d in [3usize, 4, 5] {
            let kp = key_points::<f64>(d).unwrap();
            let at_y = (segment_yx_value(kp.y.0, d, LogBase::E).unwrap()
                - aycd_value(kp.y.0, d, LogBase::E).unwrap())
            .abs();
            let at_x = (segment_yx_value(kp.x.0, d, LogBase::E).unwrap()
                - segment_xb_value(kp.x.0, d, LogBase::E).unwrap())
            .abs();
            assert!(at_y < 1e-12, "junction at Y, d = {d}: {at_y}");
            assert!(at_x < 1e-12, "junction at X, d = {d}: {at_x}");
        }
    }

    #[test]
    fn boundary_search_reproduces_the_segment_forms() {
        for d in [3usize, 4] {
            let kp = key_points::<f64>(d).unwrap();
            let dr = d as f64;

            // midpoint of YX on the top edge
            let f_yx = (kp.y.0 + kp.x.0) / 2.0;
            let rho = state(d, f_yx, dr * (1.0 + f_yx) / 2.0);
            let r = rains_closed(&rho, LogBase::E).unwrap();
            let closed = segment_yx_value(f_yx, d, LogBase::E).unwrap();
            assert_eq!(r.region.subtag, RegionSubtag::Cyb);
            assert!(
                (r.value - closed).abs() < 1e-8,
                "YX midpoint, d = {d}: {} vs {closed}",
                r.value
            );

            // midpoint of XB on the top edge
            let f_xb = (kp.x.0 + kp.b.0) / 2.0;
            let rho = state(d, f_xb, dr * (1.0 + f_xb) / 2.0);
            let r = rains_closed(&rho, LogBase::E).unwrap();
            let closed = segment_xb_value(f_xb, d, LogBase::E).unwrap();
            assert!(
                (r.value - closed).abs() < 1e-8,
                "XB midpoint, d = {d}: {} vs {closed}",
                r.value
            );
        }
    }

    #[test]
    fn rains_equals_reep_in_the_additive_region() {
        for (f, fhat) in [(0.2, 1.5), (-0.5, 0.0), (-0.6, 0.4), (0.9, 2.0)] {
            let rho = state(3, f, fhat);
            let r = rains_closed(&rho, LogBase::Two).unwrap();
            let e = measures::reep(&rho, LogBase::Two);
            if rho.is_ppt() {
                assert_eq!(r.value, 0.0);
            } else {
                assert_eq!(
                    r.value, e.value,
                    "additive states reuse the REEP, ({f}, {fhat})"
                );
            }
        }
    }

    #[test]
    fn numeric_minimizer_agrees_with_the_closed_forms() {
        // one representative per case: additive, AYCD, CYB interior,
        // CYB top edge, PPT
        let cases = [
            (3usize, 0.2, 1.5),
            (3, -0.9, 0.05),
            (3, -0.6, 0.55),
            (3, -7.0 / 11.0, 3.0 * (1.0 - 7.0 / 11.0) / 2.0),
            (3, 0.5, 0.5),
        ];
        for (d, f, fhat) in cases {
            let rho = state(d, f, fhat);
            let closed = rains_closed(&rho, LogBase::Two).unwrap();
            let numeric = rains_numeric(&rho, LogBase::Two).unwrap();
            assert!(
                (closed.value - numeric.value).abs() < 1e-6,
                "({f}, {fhat}): closed {} vs numeric {}",
                closed.value,
                numeric.value
            );
        }
    }

    #[test]
    fn tau_form_matches_the_two_term_objective() {
        let rho = state(3, -0.6, 0.3);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..40 {
            let s = rng.gen_range(-0.99..0.99);
            let shat = rng.gen_range(0.0..1.0) * 3.0 * (1.0 + s) / 2.0;
            let sigma = state(3, s, shat);
            let direct = rains_objective(&rho, &sigma, LogBase::E).unwrap();
            let tau = rains_objective_tau_form(&rho, &sigma, LogBase::E).unwrap();
            if direct.is_finite() {
                assert!(
                    (direct - tau).abs() < 1e-8,
                    "sigma = ({s}, {shat}): {direct} vs {tau}"
                );
            } else {
                assert!(tau.is_infinite());
            }
        }
    }

    #[test]
    fn objective_reduces_correctly_at_the_two_ends() {
        let rho = state(3, -0.6, 0.3);
        // PPT sigma: the negativity term vanishes
        let sigma = state(3, 0.4, 0.6);
        let obj = rains_objective(&rho, &sigma, LogBase::Two).unwrap();
        let rel = measures::relent_closed(&rho, &sigma, LogBase::Two).unwrap();
        assert!((obj - rel).abs() < 1e-14);

        // sigma = rho: only the negativity term survives
        let self_obj = rains_objective(&rho, &rho, LogBase::Two).unwrap();
        let neg = measures::negativity_closed(&rho);
        assert!((self_obj - neg.log2()).abs() < 1e-14);
    }

    #[test]
    fn cyb_witness_stays_on_the_boundary_line() {
        let rho = state(3, -0.6, 0.55);
        assert_eq!(rho.classify().subtag, RegionSubtag::Cyb);
        let r = rains_closed(&rho, LogBase::Two).unwrap();
        let (s, shat) = r.witness.unwrap();
        assert_eq!(shat, 1.0);
        assert!((boundary_bracket_lo::<f64>(3)..=0.0).contains(&s), "s = {s}");

        let w = stationary_point(&rho).unwrap();
        assert_eq!(w.branch, RainsBranch::BoundaryShatOne);
    }
}
