use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

use super::types::{FockState, KerrConvention};

/// Banded operator stored by diagonals; all quadrature polynomials used in
/// the hot paths have bandwidth at most 3.
#[derive(Debug, Clone)]
pub struct BandedOp {
    dim: usize,
    bands: Vec<(isize, Vec<C64>)>,
}

impl BandedOp {
    /// Extract every nonzero diagonal of `m` (up to `max_band`); panics if
    /// anything outside the band is nonzero, which would mean the caller
    /// mis-classified the operator.
    pub fn from_dense(m: &DMatrix<C64>, max_band: usize) -> Self {
        let dim = m.nrows();
        assert_eq!(dim, m.ncols());
        for i in 0..dim {
            for j in 0..dim {
                if i.abs_diff(j) > max_band {
                    assert!(
                        m[(i, j)].norm() == 0.0,
                        "entry ({i},{j}) outside bandwidth {max_band}"
                    );
                }
            }
        }
        let mut bands = Vec::new();
        for off in -(max_band as isize)..=(max_band as isize) {
            let len = dim - off.unsigned_abs();
            let mut diag = Vec::with_capacity(len);
            let mut nonzero = false;
            for k in 0..len {
                let (i, j) = if off >= 0 {
                    (k, k + off as usize)
                } else {
                    (k + (-off) as usize, k)
                };
                let v = m[(i, j)];
                if v.norm() != 0.0 {
                    nonzero = true;
                }
                diag.push(v);
            }
            if nonzero {
                bands.push((off, diag));
            }
        }
        Self { dim, bands }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `out += coeff * B v`.
    pub fn axpy(&self, coeff: C64, v: &DVector<C64>, out: &mut DVector<C64>) {
        debug_assert_eq!(v.len(), self.dim);
        debug_assert_eq!(out.len(), self.dim);
        for (off, diag) in &self.bands {
            if *off >= 0 {
                let off = *off as usize;
                for k in 0..diag.len() {
                    out[k] += coeff * diag[k] * v[k + off];
                }
            } else {
                let off = (-*off) as usize;
                for k in 0..diag.len() {
                    out[k + off] += coeff * diag[k] * v[k];
                }
            }
        }
    }

    /// `B v` into a fresh vector.
    pub fn mul_vec(&self, v: &DVector<C64>) -> DVector<C64> {
        let mut out = DVector::zeros(self.dim);
        self.axpy(C64::new(1.0, 0.0), v, &mut out);
        out
    }
}

/// Eigendecomposition of a Hermitian generator, used to exponentiate it into
/// an exactly unitary gate on the truncated space.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: DVector<f64>,
    pub vectors: DMatrix<C64>,
}

impl HermitianEigen {
    fn new(m: DMatrix<C64>) -> Self {
        let se = nalgebra::SymmetricEigen::new(m);
        Self {
            values: se.eigenvalues,
            vectors: se.eigenvectors,
        }
    }

    /// `exp(i s G) |psi>` evaluated as `V exp(i s Lambda) V^dagger |psi>`.
    pub fn apply_exp(&self, scale: f64, psi: &DVector<C64>) -> DVector<C64> {
        let mut coeffs = self.vectors.ad_mul(psi);
        for (c, lambda) in coeffs.iter_mut().zip(self.values.iter()) {
            *c *= C64::from_polar(1.0, scale * lambda);
        }
        &self.vectors * coeffs
    }

    /// Dense `exp(i s G)`.
    pub fn exp_matrix(&self, scale: f64) -> DMatrix<C64> {
        let mut scaled = self.vectors.clone();
        for (j, lambda) in self.values.iter().enumerate() {
            let phase = C64::from_polar(1.0, scale * lambda);
            for i in 0..scaled.nrows() {
                scaled[(i, j)] *= phase;
            }
        }
        scaled * self.vectors.adjoint()
    }
}

/// Per-dimension cache of operators, banded forms, and generator
/// eigendecompositions. All fields are immutable after construction, so a
/// shared reference can be used freely across threads.
pub struct FockSpace {
    dim: usize,
    pub ladder: DMatrix<C64>,
    pub x: DMatrix<C64>,
    pub p: DMatrix<C64>,
    pub x2: DMatrix<C64>,
    pub p2: DMatrix<C64>,
    /// `x p + p x` (unsymmetrized sum, twice the squeeze generator).
    pub xp_sym: DMatrix<C64>,
    pub p3: DMatrix<C64>,
    pub x_band: BandedOp,
    pub p_band: BandedOp,
    pub x2_band: BandedOp,
    pub p2_band: BandedOp,
    pub xp_band: BandedOp,
    eig_p: HermitianEigen,
    eig_x: HermitianEigen,
    eig_sq: HermitianEigen,
}

impl FockSpace {
    fn build(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        let ladder = ladder_matrix(dim);
        let adj = ladder.adjoint();
        let inv_sqrt2 = C64::new(1.0 / 2f64.sqrt(), 0.0);
        let x = (&ladder + &adj) * inv_sqrt2;
        let p = (&ladder - &adj) * C64::new(0.0, -1.0 / 2f64.sqrt());
        let x2 = &x * &x;
        let p2 = &p * &p;
        let xp_sym = &x * &p + &p * &x;
        let p3 = &p2 * &p;

        let x_band = BandedOp::from_dense(&x, 1);
        let p_band = BandedOp::from_dense(&p, 1);
        let x2_band = BandedOp::from_dense(&x2, 2);
        let p2_band = BandedOp::from_dense(&p2, 2);
        let xp_band = BandedOp::from_dense(&xp_sym, 2);

        let eig_p = HermitianEigen::new(p.clone());
        let eig_x = HermitianEigen::new(x.clone());
        let eig_sq = HermitianEigen::new(&xp_sym * C64::new(0.5, 0.0));

        Ok(Self {
            dim,
            ladder,
            x,
            p,
            x2,
            p2,
            xp_sym,
            p3,
            x_band,
            p_band,
            x2_band,
            p2_band,
            xp_band,
            eig_p,
            eig_x,
            eig_sq,
        })
    }

    /// Fetch (building on first use) the shared space for `dim`.
    pub fn get(dim: usize) -> Result<Arc<FockSpace>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<FockSpace>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(space) = cache.lock().unwrap().get(&dim) {
            return Ok(space.clone());
        }
        // Built outside the lock: construction takes O(dim^3) and must not
        // stall readers of other dimensions. A racing duplicate is dropped.
        let fresh = Arc::new(Self::build(dim)?);
        let mut guard = cache.lock().unwrap();
        Ok(guard.entry(dim).or_insert(fresh).clone())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eig_p(&self) -> &HermitianEigen {
        &self.eig_p
    }

    pub fn eig_x(&self) -> &HermitianEigen {
        &self.eig_x
    }

    /// Eigendecomposition of the squeeze generator `(x p + p x)/2`.
    pub fn eig_squeeze(&self) -> &HermitianEigen {
        &self.eig_sq
    }

    pub fn vacuum(&self) -> FockState {
        FockState::vacuum(self.dim).expect("dim checked at construction")
    }

    /// `exp(-i alpha p) |psi>`: displacement along x.
    pub fn apply_displacement(&self, alpha: f64, state: &FockState) -> Result<FockState> {
        self.checked(state)?;
        let amps = self.eig_p.apply_exp(-alpha, state.amplitudes());
        FockState::from_unitary_output(amps)
    }

    /// `exp(i beta x) |psi>`: displacement along p.
    pub fn apply_momentum_displacement(&self, beta: f64, state: &FockState) -> Result<FockState> {
        self.checked(state)?;
        let amps = self.eig_x.apply_exp(beta, state.amplitudes());
        FockState::from_unitary_output(amps)
    }

    /// `exp(-i r (x p + p x)/2) |psi>`; stretches x by `e^r`.
    pub fn apply_squeeze(&self, r: f64, state: &FockState) -> Result<FockState> {
        self.checked(state)?;
        let amps = self.eig_sq.apply_exp(-r, state.amplitudes());
        FockState::from_unitary_output(amps)
    }

    /// Rotation `exp(-i phi (n + 1/2))`, diagonal.
    pub fn apply_rotation(&self, phi: f64, state: &FockState) -> Result<FockState> {
        self.checked(state)?;
        let mut amps = state.amplitudes().clone();
        for (n, a) in amps.iter_mut().enumerate() {
            *a *= C64::from_polar(1.0, -phi * (n as f64 + 0.5));
        }
        FockState::from_unitary_output(amps)
    }

    /// Kerr gate, diagonal with phases set by the convention.
    pub fn apply_kerr(
        &self,
        chi: f64,
        convention: KerrConvention,
        state: &FockState,
    ) -> Result<FockState> {
        self.checked(state)?;
        let mut amps = state.amplitudes().clone();
        for (n, a) in amps.iter_mut().enumerate() {
            *a *= C64::from_polar(1.0, -chi * convention.phase_exponent(n));
        }
        FockState::from_unitary_output(amps)
    }

    /// Coherent state `D(alpha)|0>`.
    pub fn coherent(&self, alpha: f64) -> Result<FockState> {
        self.apply_displacement(alpha, &self.vacuum())
    }

    /// First and second quadrature moments `(mx, mp, vxx, vpp, vxp)`.
    pub fn quad_moments(&self, state: &FockState) -> (f64, f64, f64, f64, f64) {
        let amps = state.amplitudes();
        let mx = real_expect(&self.x_band, amps);
        let mp = real_expect(&self.p_band, amps);
        let mxx = real_expect(&self.x2_band, amps);
        let mpp = real_expect(&self.p2_band, amps);
        let mxp = real_expect(&self.xp_band, amps);
        (mx, mp, mxx - mx * mx, mpp - mp * mp, 0.5 * mxp - mx * mp)
    }

    fn checked(&self, state: &FockState) -> Result<()> {
        if state.dim() != self.dim {
            return Err(Error::DimensionMismatch(state.dim(), self.dim));
        }
        Ok(())
    }
}

fn real_expect(op: &BandedOp, amps: &DVector<C64>) -> f64 {
    let w = op.mul_vec(amps);
    amps.dotc(&w).re
}

pub(crate) fn ladder_matrix(dim: usize) -> DMatrix<C64> {
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    a
}
