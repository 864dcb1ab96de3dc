//! Independent numerical cross-checks for the closed forms: a grid
//! minimizer for the REEP, finite-difference gradients, the full-matrix
//! additivity eigenvalue test, the matrix-level Rains objective, and a
//! binegativity sweep of the invariant triangle. None of these call the
//! closed forms they validate, so agreement between the two paths is
//! evidence rather than tautology.

use nalgebra::{Complex, DMatrix};

use crate::config::{tol, LogBase};
use crate::error::{Error, Result};
use crate::measures::{self, AdditivityLevel};
use crate::oo_space::OOState;
use crate::operator_algebra::{self, HermitianOperator};
use crate::opt::{grid_min_2d, nelder_mead_2d, zoom_min_2d};
use crate::scalar::{abs, clamp, ln, max, to_f64, MatrixReal, Real};

/// Eigenvalue slack for the full-matrix additivity test; covers the
/// pseudoinverse and eigensolver error on embedded operators.
pub const MATRIX_ADDITIVITY_TOL: f64 = 1e-8;

/// Spectral summary of `(rho sigma^{-1})^T2`, the operator behind the
/// matrix-level additivity conditions.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct MatrixAdditivity<R: Real> {
    /// Additivity level read off the spectrum: all eigenvalues in
    /// [-1, 1] gives weak, additionally nonnegative gives strong.
    pub level: AdditivityLevel,
    /// Smallest eigenvalue.
    pub min_eigenvalue: R,
    /// Largest eigenvalue magnitude.
    pub max_abs_eigenvalue: R,
}

/// The REEP by direct minimization of the relative entropy over the
/// PPT square: an `n x n` grid scan, simplex refinement from the grid
/// minimum, then a zooming grid polish. Pure numerics, no candidate
/// table.
pub fn reep_grid<R: Real>(rho: &OOState<R>, n: usize, base: LogBase) -> R {
    let one = R::one();
    let objective = |x: [R; 2]| -> R {
        let s = clamp(x[0], R::zero(), one);
        let shat = clamp(x[1], R::zero(), one);
        let dist2 = (x[0] - s) * (x[0] - s) + (x[1] - shat) * (x[1] - shat);
        measures::relent_nats_params(rho, s, shat) + R::of(10.0) * dist2
    };
    let lo = [R::zero(), R::zero()];
    let hi = [one, one];
    let (gx, gv) = grid_min_2d(&objective, lo, hi, [n, n]);
    let m = nelder_mead_2d(
        &objective,
        gx,
        one / R::of_usize(n),
        R::of(1e-10),
        R::of(1e-14),
        2000,
    );
    let (mut best_x, best_v) = if m.value < gv { (m.x, m.value) } else { (gx, gv) };
    let (zx, zv) = zoom_min_2d(
        &objective,
        best_x,
        R::of(2.0) / R::of_usize(n),
        lo,
        hi,
        17,
        8,
    );
    if zv < best_v {
        best_x = zx;
    }
    let s = clamp(best_x[0], R::zero(), one);
    let shat = clamp(best_x[1], R::zero(), one);
    let nats = measures::relent_nats_params(rho, s, shat);
    base.from_nats(max(nats, R::zero()))
}

/// Central finite-difference gradient of a two-variable function.
pub fn fd_gradient<R: Real>(f: impl Fn([R; 2]) -> R, x: [R; 2], h: R) -> [R; 2] {
    let two_h = R::of(2.0) * h;
    [
        (f([x[0] + h, x[1]]) - f([x[0] - h, x[1]])) / two_h,
        (f([x[0], x[1] + h]) - f([x[0], x[1] - h])) / two_h,
    ]
}

/// Moore-Penrose pseudoinverse of a Hermitian operator through its
/// eigendecomposition, dropping eigenvalues at or below the support
/// cutoff.
fn pseudo_inverse<R: MatrixReal>(op: &HermitianOperator<R>) -> DMatrix<Complex<R>> {
    let (values, vectors) = operator_algebra::verified_hermitian_eigen(op.entries());
    let n = values.len();
    let mut inv = DMatrix::<Complex<R>>::zeros(n, n);
    for (j, lam) in values.iter().enumerate() {
        if to_f64(*lam) > tol::SUPPORT {
            let col = vectors.column(j).clone_owned();
            inv += &col * col.adjoint() * Complex::new(R::one() / *lam, R::zero());
        }
    }
    inv
}

/// The matrix-level additivity conditions on an invariant state and its
/// REEP witness: weak additivity iff every eigenvalue of
/// `(rho sigma^{-1})^T2` lies in [-1, 1], strong additivity iff they
/// also are nonnegative. Works directly on embedded matrices and a
/// pseudoinverse, independent of the sector-ratio shortcut.
pub fn additivity_matrix_check<R: MatrixReal>(
    rho: &OOState<R>,
    sigma: &OOState<R>,
) -> Result<MatrixAdditivity<R>> {
    if rho.d() != sigma.d() {
        return Err(Error::DimensionMismatch {
            left: rho.d(),
            right: sigma.d(),
        });
    }
    let product = rho.embed().entries() * pseudo_inverse(&sigma.embed());
    // invariant operators commute, so the product is Hermitian up to
    // numerical noise
    let op = HermitianOperator::with_tolerance(product, 1e-7)?;
    let eigs = op.partial_transpose().eigenvalues();
    let min_eigenvalue = eigs[0];
    let max_abs_eigenvalue = eigs
        .iter()
        .fold(R::zero(), |acc, &e| max(acc, abs(e)));

    let slack = R::of(MATRIX_ADDITIVITY_TOL);
    let level = if max_abs_eigenvalue <= R::one() + slack {
        if min_eigenvalue >= -slack {
            AdditivityLevel::Strong
        } else {
            AdditivityLevel::Weak
        }
    } else {
        AdditivityLevel::None
    };
    Ok(MatrixAdditivity {
        level,
        min_eigenvalue,
        max_abs_eigenvalue,
    })
}

/// The Rains objective evaluated on explicit matrices:
/// `S(rho||sigma) + log Tr|sigma^T2|`.
pub fn rains_matrix_objective<R: MatrixReal>(
    rho: &HermitianOperator<R>,
    sigma: &HermitianOperator<R>,
    base: LogBase,
) -> Result<R> {
    let rel = rho.relative_entropy(sigma, base)?;
    Ok(rel + base.from_nats(ln(sigma.trace_norm_pt())))
}

/// Smallest binegativity defect over an `n x n` parameter grid of the
/// invariant triangle (uniform in f and in the fractional height), each
/// point checked on its embedded matrix.
pub fn min_binegativity_on_grid<R: MatrixReal>(d: usize, n: usize) -> Result<R> {
    if d < 2 {
        return Err(Error::DimensionTooSmall { d, min: 2 });
    }
    let dr = R::of_usize(d);
    let one = R::one();
    let two = R::of(2.0);
    let mut worst = R::infinity();
    for i in 0..n {
        let f = -one + two * R::of_usize(i) / R::of_usize(n - 1);
        for j in 0..n {
            let t = R::of_usize(j) / R::of_usize(n - 1);
            let fhat = t * dr * (one + f) / two;
            let rho = OOState::new(d, f, fhat)?;
            let defect = crate::binegativity::binegativity_defect(&rho.embed())?;
            if defect < worst {
                worst = defect;
            }
        }
    }
    Ok(worst)
}
