use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

use super::space::{ladder_matrix, FockSpace};
use super::types::{
    FockState, KerrConvention, OperatorKind, OperatorMatrix, VarianceMatrix, TAIL_MASS_LIMIT,
};

/// Annihilation operator: `a|n> = sqrt(n)|n-1>`.
pub fn build_ladder(dim: usize) -> Result<OperatorMatrix> {
    if dim < 2 {
        return Err(Error::InvalidDimension(dim));
    }
    Ok(OperatorMatrix::new(ladder_matrix(dim), OperatorKind::General))
}

/// Quadratures with `[x, p] = i`, `x = (a + a^dag)/sqrt(2)`,
/// `p = (a - a^dag)/(i sqrt(2))`; vacuum variances 1/2.
pub fn build_quadratures(dim: usize) -> Result<(OperatorMatrix, OperatorMatrix)> {
    let space = FockSpace::get(dim)?;
    Ok((
        OperatorMatrix::new(space.x.clone(), OperatorKind::Hermitian),
        OperatorMatrix::new(space.p.clone(), OperatorKind::Hermitian),
    ))
}

/// Photon-number operator `n = (x^2 + p^2 - 1)/2`, diagonal.
pub fn build_number(dim: usize) -> Result<OperatorMatrix> {
    if dim < 2 {
        return Err(Error::InvalidDimension(dim));
    }
    let diag = DVector::from_iterator(dim, (0..dim).map(|n| C64::new(n as f64, 0.0)));
    Ok(OperatorMatrix::from_diagonal(diag, OperatorKind::Hermitian))
}

/// Displacement `D_x(alpha) = exp(-i alpha p)`, built by exponentiating the
/// truncated generator through its eigendecomposition; exactly unitary on
/// the truncated space.
pub fn gate_displacement(alpha: f64, dim: usize) -> Result<OperatorMatrix> {
    let space = FockSpace::get(dim)?;
    let entries = space.eig_p().exp_matrix(-alpha);
    Ok(OperatorMatrix::new(entries, OperatorKind::Unitary))
}

/// Momentum displacement `D_p(beta) = exp(i beta x)`; shifts `p` by `beta`.
pub fn gate_momentum_displacement(beta: f64, dim: usize) -> Result<OperatorMatrix> {
    let space = FockSpace::get(dim)?;
    let entries = space.eig_x().exp_matrix(beta);
    Ok(OperatorMatrix::new(entries, OperatorKind::Unitary))
}

/// Squeeze `S(r) = exp(-i r (x p + p x)/2)`.
///
/// Sign convention: `S(r)|0>` has `var(x) = e^{2r}/2` and
/// `var(p) = e^{-2r}/2`, i.e. positive `r` stretches x. Errors when the
/// squeezed vacuum leaves more than the allowed tail mass in the guard band
/// of the truncated basis.
pub fn gate_squeeze(r: f64, dim: usize) -> Result<OperatorMatrix> {
    let space = FockSpace::get(dim)?;
    let tail = squeezed_vacuum_tail(r, dim);
    if tail > TAIL_MASS_LIMIT {
        return Err(Error::TruncationOverflow {
            tail,
            limit: TAIL_MASS_LIMIT,
            dim,
        });
    }
    let entries = space.eig_squeeze().exp_matrix(-r);
    Ok(OperatorMatrix::new(entries, OperatorKind::Unitary))
}

/// Rotation `R(phi) = exp(-i phi (x^2 + p^2)/2)`, diagonal with entries
/// `exp(-i phi (n + 1/2))`.
///
/// Orientation: `R(pi/2)` maps a state displaced along +x to one displaced
/// along -p, i.e. `<p>` of `R(pi/2) D(1)|0>` is -1.
pub fn gate_rotation(phi: f64, dim: usize) -> Result<OperatorMatrix> {
    if dim < 2 {
        return Err(Error::InvalidDimension(dim));
    }
    let diag = DVector::from_iterator(
        dim,
        (0..dim).map(|n| C64::from_polar(1.0, -phi * (n as f64 + 0.5))),
    );
    Ok(OperatorMatrix::from_diagonal(diag, OperatorKind::Unitary))
}

/// Kerr gate, diagonal with entries `exp(-i chi (n+1)^2)` under the default
/// convention or `exp(-i chi (2n+1)^2)` under [`KerrConvention::TwoNPlus1Sq`].
pub fn gate_kerr(chi: f64, convention: KerrConvention, dim: usize) -> Result<OperatorMatrix> {
    if dim < 2 {
        return Err(Error::InvalidDimension(dim));
    }
    let diag = DVector::from_iterator(
        dim,
        (0..dim).map(|n| C64::from_polar(1.0, -chi * convention.phase_exponent(n))),
    );
    Ok(OperatorMatrix::from_diagonal(diag, OperatorKind::Unitary))
}

/// Apply a unitary gate; diagonal gates run element-wise in O(dim).
pub fn apply(gate: &OperatorMatrix, state: &FockState) -> Result<FockState> {
    if gate.dim() != state.dim() {
        return Err(Error::DimensionMismatch(gate.dim(), state.dim()));
    }
    if gate.kind() != OperatorKind::Unitary {
        return Err(Error::NonUnitaryGate);
    }
    let amps = match gate.diagonal() {
        Some(diag) => {
            let mut amps = state.amplitudes().clone();
            for (a, d) in amps.iter_mut().zip(diag.iter()) {
                *a *= d;
            }
            amps
        }
        None => gate.entries() * state.amplitudes(),
    };
    FockState::from_unitary_output(amps)
}

/// `<psi|O|psi>`; imaginary part stays below 1e-10 for Hermitian `O`.
pub fn expectation(state: &FockState, op: &OperatorMatrix) -> Result<C64> {
    if op.dim() != state.dim() {
        return Err(Error::DimensionMismatch(op.dim(), state.dim()));
    }
    let w = op.entries() * state.amplitudes();
    Ok(state.amplitudes().dotc(&w))
}

/// Symmetrized quadrature covariance of a normalized state.
pub fn variance_matrix(state: &FockState) -> Result<VarianceMatrix> {
    let space = FockSpace::get(state.dim())?;
    let (_, _, vxx, vpp, vxp) = space.quad_moments(state);
    Ok(VarianceMatrix { vxx, vpp, vxp })
}

/// `|amplitude|^2` per number state.
pub fn fock_probabilities(state: &FockState) -> Vec<f64> {
    state.amplitudes().iter().map(|c| c.norm_sqr()).collect()
}

/// Tail mass of `S(r)|0>` beyond `0.9 dim`, from the closed-form photon
/// statistics of the squeezed vacuum: only even levels are populated and
/// `P(2k+2)/P(2k) = tanh^2(r) (2k+1)/(2k+2)`.
pub fn squeezed_vacuum_tail(r: f64, dim: usize) -> f64 {
    let t2 = r.tanh() * r.tanh();
    if t2 == 0.0 {
        return 0.0;
    }
    let start = (0.9 * dim as f64).ceil() as usize;
    let mut prob = 1.0 / r.cosh();
    let mut tail = 0.0;
    let mut n = 0usize;
    // walk even levels far enough past the truncation to bound the tail
    while n + 2 < 2 * dim {
        if n >= start {
            tail += prob;
        }
        prob *= t2 * (n as f64 + 1.0) / (n as f64 + 2.0);
        n += 2;
    }
    // geometric bound on everything past the walk
    tail + prob / (1.0 - t2)
}

/// Tail mass of the coherent state `D(alpha)|0>` beyond `0.9 dim`, from its
/// Poisson photon statistics with mean `alpha^2 / 2`.
pub fn coherent_tail(alpha: f64, dim: usize) -> f64 {
    let mean = 0.5 * alpha * alpha;
    if mean == 0.0 {
        return 0.0;
    }
    let start = (0.9 * dim as f64).ceil() as usize;
    let mut prob = (-mean).exp();
    let mut tail = 0.0;
    for n in 0..(2 * dim) {
        if n >= start {
            tail += prob;
        }
        prob *= mean / (n as f64 + 1.0);
    }
    tail
}

/// Largest squeeze parameter whose squeezed vacuum passes the tail guard at
/// this dimension; used to clamp Monte Carlo samples.
pub fn squeeze_guard(dim: usize) -> f64 {
    bisect_guard(|r| squeezed_vacuum_tail(r, dim))
}

/// Largest displacement whose coherent state passes the tail guard.
pub fn displacement_guard(dim: usize) -> f64 {
    bisect_guard(|a| coherent_tail(a, dim))
}

fn bisect_guard(tail: impl Fn(f64) -> f64) -> f64 {
    // half the allowed tail, so states clamped onto the guard sit safely
    // below the hard threshold instead of exactly on it
    let limit = 0.5 * TAIL_MASS_LIMIT;
    let mut lo = 0.0;
    let mut hi = 1.0;
    while tail(hi) <= limit && hi < 1e3 {
        hi *= 2.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if tail(mid) <= limit {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Dense commutator `[A, B]`.
pub fn commutator(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a * b - b * a
}
