//! Derivative-free minimizers used by the numerical oracles and by the
//! boundary branch of the Rains bound: golden-section search on an
//! interval, a compact Nelder-Mead simplex in two variables, and dense
//! rectangular grid scans with iterative zoom.
//!
//! Objectives may return `+inf` (infeasible or out-of-support points);
//! every routine here only ever compares values, so infinities are
//! handled naturally.

use crate::scalar::{abs, clamp, max, Real};

/// Result of a minimization.
#[derive(Copy, Clone, Debug)]
pub struct Minimum<R: Real> {
    /// Argument of the best value seen.
    pub x: [R; 2],
    /// Best value seen.
    pub value: R,
    /// Number of objective evaluations spent.
    pub evaluations: usize,
    /// Whether the stopping tolerances were met before the budget ran out.
    pub converged: bool,
}

/// Golden-section search for the minimum of `f` on `[a, b]`.
///
/// Converges for unimodal objectives; for a monotone objective it
/// converges to the appropriate endpoint. Stops when the bracket is
/// narrower than `xtol`. Returns `(x_min, f_min)`.
pub fn golden_section<R: Real>(f: impl Fn(R) -> R, a: R, b: R, xtol: R, max_evals: usize) -> (R, R) {
    // 2 - phi, the golden ratio section of the bracket
    let resp = R::of(2.0 - 1.618_033_988_749_895);
    let (mut a, mut b) = (a, b);
    let mut x1 = a + resp * (b - a);
    let mut x2 = b - resp * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut evals = 2usize;

    while evals < max_evals && abs(b - a) > xtol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + resp * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - resp * (b - a);
            f2 = f(x2);
        }
        evals += 1;
    }

    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Nelder-Mead simplex minimization in two variables with the standard
/// reflection/expansion/contraction coefficients and a shrink fallback.
///
/// `step` sets the initial simplex size around `start`. The search stops
/// once both the simplex diameter falls below `xtol` and the value spread
/// below `ftol`, or after `max_evals` objective evaluations.
pub fn nelder_mead_2d<R: Real>(
    f: impl Fn([R; 2]) -> R,
    start: [R; 2],
    step: R,
    xtol: R,
    ftol: R,
    max_evals: usize,
) -> Minimum<R> {
    let mut pts = [
        start,
        [start[0] + step, start[1]],
        [start[0], start[1] + step],
    ];
    let mut vals = [f(pts[0]), f(pts[1]), f(pts[2])];
    let mut evals = 3usize;
    let half = R::of(0.5);
    let two = R::of(2.0);

    let mut converged = false;
    while evals < max_evals {
        // order so that vals[0] <= vals[1] <= vals[2]
        let mut order = [0usize, 1, 2];
        order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap_or(std::cmp::Ordering::Equal));
        let (best, mid, worst) = (order[0], order[1], order[2]);

        let diameter = max(
            max(
                abs(pts[best][0] - pts[worst][0]) + abs(pts[best][1] - pts[worst][1]),
                abs(pts[best][0] - pts[mid][0]) + abs(pts[best][1] - pts[mid][1]),
            ),
            abs(pts[mid][0] - pts[worst][0]) + abs(pts[mid][1] - pts[worst][1]),
        );
        let spread = vals[worst] - vals[best];
        if diameter <= xtol && (spread <= ftol || !spread.is_finite()) {
            converged = true;
            break;
        }

        let centroid = [
            (pts[best][0] + pts[mid][0]) * half,
            (pts[best][1] + pts[mid][1]) * half,
        ];
        let reflect = [
            centroid[0] + (centroid[0] - pts[worst][0]),
            centroid[1] + (centroid[1] - pts[worst][1]),
        ];
        let fr = f(reflect);
        evals += 1;

        if fr < vals[best] {
            let expand = [
                centroid[0] + two * (centroid[0] - pts[worst][0]),
                centroid[1] + two * (centroid[1] - pts[worst][1]),
            ];
            let fe = f(expand);
            evals += 1;
            if fe < fr {
                pts[worst] = expand;
                vals[worst] = fe;
            } else {
                pts[worst] = reflect;
                vals[worst] = fr;
            }
        } else if fr < vals[mid] {
            pts[worst] = reflect;
            vals[worst] = fr;
        } else {
            // contract toward the better of worst/reflected
            let (toward, ft_base) = if fr < vals[worst] {
                (reflect, fr)
            } else {
                (pts[worst], vals[worst])
            };
            let contract = [
                centroid[0] + half * (toward[0] - centroid[0]),
                centroid[1] + half * (toward[1] - centroid[1]),
            ];
            let fc = f(contract);
            evals += 1;
            if fc < ft_base {
                pts[worst] = contract;
                vals[worst] = fc;
            } else {
                // shrink everything toward the best vertex
                for i in 0..3 {
                    if i != best {
                        pts[i] = [
                            pts[best][0] + half * (pts[i][0] - pts[best][0]),
                            pts[best][1] + half * (pts[i][1] - pts[best][1]),
                        ];
                        vals[i] = f(pts[i]);
                        evals += 1;
                    }
                }
            }
        }
    }

    let mut best = 0usize;
    for i in 1..3 {
        if vals[i] < vals[best] {
            best = i;
        }
    }
    Minimum {
        x: pts[best],
        value: vals[best],
        evaluations: evals,
        converged,
    }
}

/// Dense scan of `f` over the rectangle `[lo[0], hi[0]] x [lo[1], hi[1]]`
/// with `n[0] x n[1]` points including the corners. Returns the best grid
/// point and its value.
pub fn grid_min_2d<R: Real>(f: &impl Fn([R; 2]) -> R, lo: [R; 2], hi: [R; 2], n: [usize; 2]) -> ([R; 2], R) {
    debug_assert!(n[0] >= 2 && n[1] >= 2);
    let mut best_x = lo;
    let mut best_v = R::infinity();
    let dx = (hi[0] - lo[0]) / R::of_usize(n[0] - 1);
    let dy = (hi[1] - lo[1]) / R::of_usize(n[1] - 1);
    for i in 0..n[0] {
        let x = lo[0] + dx * R::of_usize(i);
        for j in 0..n[1] {
            let y = lo[1] + dy * R::of_usize(j);
            let v = f([x, y]);
            if v < best_v {
                best_v = v;
                best_x = [x, y];
            }
        }
    }
    (best_x, best_v)
}

/// Iteratively zoom a grid scan around the running best point.
///
/// Starting from `center` with half-width `radius`, each round scans a
/// `points x points` grid clipped to `[lo, hi]`, recenters on the best
/// point and shrinks the radius by the fixed factor `0.35`. Robust for
/// kinked objectives and minima on the boundary of the box.
pub fn zoom_min_2d<R: Real>(
    f: &impl Fn([R; 2]) -> R,
    center: [R; 2],
    radius: R,
    lo: [R; 2],
    hi: [R; 2],
    points: usize,
    rounds: usize,
) -> ([R; 2], R) {
    let shrink = R::of(0.35);
    let mut c = center;
    let mut r = radius;
    let mut best = (c, f(c));
    for _ in 0..rounds {
        let wlo = [
            clamp(c[0] - r, lo[0], hi[0]),
            clamp(c[1] - r, lo[1], hi[1]),
        ];
        let whi = [
            clamp(c[0] + r, lo[0], hi[0]),
            clamp(c[1] + r, lo[1], hi[1]),
        ];
        let (x, v) = grid_min_2d(f, wlo, whi, [points, points]);
        if v < best.1 {
            best = (x, v);
        }
        c = best.0;
        r = r * shrink;
    }
    best
}
