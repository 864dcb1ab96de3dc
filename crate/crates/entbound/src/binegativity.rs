//! Binegativity: a state `sigma` is binegative when `|sigma^T2|^T2` has
//! a negative eigenvalue. Non-binegative states admit a simpler
//! expression for the modified Rains bound, so the question of which
//! states are binegative matters for how tight the bound is.
//!
//! PPT states, all pure states, and all OO-invariant states are never
//! binegative; binegative states do exist from local dimension 3 up and
//! sit close to the boundary of state space. This module computes the
//! defect (the minimum eigenvalue of `|sigma^T2|^T2`), verifies the
//! structural identities behind the pure-state and OO-state claims, and
//! runs a seeded random search for binegative witnesses.

use nalgebra::{Complex, DMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::config::tol;
use crate::error::{Error, Result};
use crate::operator_algebra::HermitianOperator;
use crate::oo_space::OOState;
use crate::scalar::{abs, MatrixReal, Real};

/// Weight of the full-rank component in boundary-biased sampling: the
/// search mixes a rank-deficient state with a small full-rank
/// perturbation, since binegative states cluster near the boundary of
/// state space but tiny interior offsets keep the spectrum generic.
pub const BOUNDARY_MIX: f64 = 1e-3;

/// Defect below which a sample counts as a genuine binegative find
/// rather than eigensolver noise.
pub const FIND_THRESHOLD: f64 = -1e-8;

/// Outcome of a binegativity search.
#[derive(Clone, Debug)]
pub struct BinegativityReport<R: MatrixReal> {
    /// Most negative defect seen across all samples.
    pub defect: R,
    /// Number of states tested.
    pub samples_tested: usize,
    /// The state achieving the defect.
    pub worst_state: Option<HermitianOperator<R>>,
    /// Master seed the search ran from.
    pub seed: u64,
}

/// The minimum eigenvalue of `|sigma^T2|^T2`. Negative (beyond
/// numerical noise) exactly for binegative states.
pub fn binegativity_defect<R: MatrixReal>(sigma: &HermitianOperator<R>) -> Result<R> {
    if !sigma.is_psd(tol::PSD) {
        return Err(Error::NotPositive {
            min_eigenvalue: crate::scalar::to_f64(sigma.min_eigenvalue()),
        });
    }
    let trace = crate::scalar::to_f64(sigma.trace());
    if (trace - 1.0).abs() > tol::TRACE {
        return Err(Error::NotNormalized { trace });
    }
    Ok(sigma
        .partial_transpose()
        .operator_abs()
        .partial_transpose()
        .min_eigenvalue())
}

/// The sector eigenvalues of `|sigma^T2|^T2` on (U, V, W) for an
/// invariant state, from the closed expansion: the partial transpose
/// swaps the coefficients of F and Fhat, the absolute value acts
/// sector-wise, and a second swap returns to the original basis. All
/// three are nonnegative for every state of the triangle, which is the
/// closed-form proof that invariant states are never binegative.
pub fn oo_sector_defect<R: Real>(sigma: &OOState<R>) -> [R; 3] {
    let d = R::of_usize(sigma.d());
    let one = R::one();
    let two = R::of(2.0);
    let (f, fhat) = (sigma.f(), sigma.fhat());

    // sigma^T2 is the invariant operator with (f, fhat) swapped; its
    // sector eigenvalues follow the same weight formulas
    let lam_u = f / d;
    let lam_v = (one - fhat) / (d * (d - one));
    let lam_w = (d + d * fhat - two * f) / (d * (d - one) * (d + two));

    // |sigma^T2| in coefficient form alpha + beta F + gamma Fhat
    let (au, av, aw) = (abs(lam_u), abs(lam_v), abs(lam_w));
    let alpha = (aw + av) / two;
    let beta = (aw - av) / two;
    let gamma = (au - aw) / d;

    // the second partial transpose swaps beta and gamma again; read off
    // the sector eigenvalues of the result
    [
        alpha + gamma + beta * d,
        alpha - gamma,
        alpha + gamma,
    ]
}

/// A reproducible random state of the given rank on a bipartite space
/// of total dimension `dim` (a perfect square): the partial trace of a
/// uniformly random pure state on a `dim x rank` extension, i.e.
/// `G G^dagger / Tr` with `G` a complex Gaussian `dim x rank` matrix.
pub fn random_state<R: MatrixReal>(
    dim: usize,
    rank: usize,
    seed: u64,
) -> Result<HermitianOperator<R>> {
    if rank < 1 || rank > dim {
        return Err(Error::InvalidRank { rank, dim });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = DMatrix::<Complex<R>>::zeros(dim, rank);
    for j in 0..rank {
        for i in 0..dim {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            g[(i, j)] = Complex::new(R::of(re), R::of(im));
        }
    }
    let gram = &g * g.adjoint();
    let mut trace = R::zero();
    for i in 0..dim {
        trace = trace + gram[(i, i)].re;
    }
    let rho = gram * Complex::new(R::one() / trace, R::zero());
    HermitianOperator::new(rho)
}

/// Per-sample seed stream: a large odd stride keeps the subsequences of
/// different samples disjoint for any master seed.
fn sample_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add((index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Search for binegative states among `samples` seeded random states on
/// a `d x d` system.
///
/// Unbiased sampling cycles the rank through 1..=d^2 so pure states,
/// boundary states, and full-rank states all get tried. With
/// `bias_boundary` each sample is instead a rank-`ceil(d^2/2)` state
/// with a small full-rank admixture ([`BOUNDARY_MIX`]), the profile
/// binegative states are known to favor. The most negative defect and
/// its state are reported; the report is a deterministic function of
/// `(d, samples, seed, bias_boundary)`.
pub fn search_binegative<R: MatrixReal>(
    d: usize,
    samples: usize,
    seed: u64,
    bias_boundary: bool,
) -> Result<BinegativityReport<R>> {
    if d < 2 {
        return Err(Error::DimensionTooSmall { d, min: 2 });
    }
    let dim = d * d;
    let mut worst_defect = R::infinity();
    let mut worst_state: Option<HermitianOperator<R>> = None;

    for i in 0..samples {
        let s = sample_seed(seed, i);
        let state = if bias_boundary {
            let low = random_state::<R>(dim, dim.div_ceil(2), s)?;
            let full = random_state::<R>(dim, dim, s ^ 0x5851_F42D_4C95_7F2D)?;
            low.mix(&full, R::of(BOUNDARY_MIX))?
        } else {
            random_state::<R>(dim, 1 + i % dim, s)?
        };
        let defect = binegativity_defect(&state)?;
        if defect < worst_defect {
            worst_defect = defect;
            worst_state = Some(state);
        }
    }

    Ok(BinegativityReport {
        defect: worst_defect,
        samples_tested: samples,
        worst_state,
        seed,
    })
}
