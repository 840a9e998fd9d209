use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Norm deviation tolerated on construction and after unitary application.
pub const NORM_TOL: f64 = 1e-10;

/// Probability mass allowed in the top 10% of the truncated basis.
pub const TAIL_MASS_LIMIT: f64 = 1e-8;

/// Diagonal phase profile of the Kerr gate.
///
/// `NPlus1Sq` applies `exp(-i chi (n+1)^2)`, `TwoNPlus1Sq` applies
/// `exp(-i chi (2n+1)^2)`. The two differ by a phase-space rotation, a
/// global phase, and a rescaling `chi -> 4 chi`, so optimized squeezing
/// curves coincide under that rescaling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum KerrConvention {
    #[default]
    NPlus1Sq,
    TwoNPlus1Sq,
}

impl KerrConvention {
    pub fn phase_exponent(self, n: usize) -> f64 {
        match self {
            KerrConvention::NPlus1Sq => {
                let m = (n + 1) as f64;
                m * m
            }
            KerrConvention::TwoNPlus1Sq => {
                let m = (2 * n + 1) as f64;
                m * m
            }
        }
    }
}

impl std::fmt::Display for KerrConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KerrConvention::NPlus1Sq => write!(f, "nPlus1Sq"),
            KerrConvention::TwoNPlus1Sq => write!(f, "twoNplus1Sq"),
        }
    }
}

impl std::str::FromStr for KerrConvention {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "nPlus1Sq" => Ok(KerrConvention::NPlus1Sq),
            "twoNplus1Sq" => Ok(KerrConvention::TwoNPlus1Sq),
            other => Err(format!("unknown Kerr convention {other:?}")),
        }
    }
}

/// Pure state in the truncated number basis.
///
/// Amplitudes are kept normalized to one; the top 10% of the basis acts as
/// a guard band, and states carrying more than [`TAIL_MASS_LIMIT`] there are
/// rejected by the checked constructors and pipeline builders rather than
/// silently used.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    amps: DVector<C64>,
}

impl FockState {
    /// Vacuum `|0>`.
    pub fn vacuum(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let mut amps = DVector::zeros(dim);
        amps[0] = C64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    /// Number state `|n>`.
    pub fn number_state(n: usize, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        if n >= dim {
            return Err(Error::DimensionMismatch(n, dim));
        }
        let mut amps = DVector::zeros(dim);
        amps[n] = C64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    /// Build from raw amplitudes; rejects vectors off normalization by more
    /// than 1e-6 and renormalizes the rest exactly.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        check_dim(amps.len())?;
        let mut amps = DVector::from_vec(amps);
        let norm = amps.norm();
        if (norm - 1.0).abs() > 1e-6 {
            return Err(Error::NotNormalized((norm - 1.0).abs()));
        }
        amps /= C64::new(norm, 0.0);
        Ok(Self { amps })
    }

    /// Internal constructor for amplitudes produced by a unitary; checks the
    /// norm drift instead of renormalizing.
    pub(crate) fn from_unitary_output(amps: DVector<C64>) -> Result<Self> {
        let norm = amps.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized((norm - 1.0).abs()));
        }
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &FockState) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(self.amps.dotc(&other.amps))
    }

    /// Probability mass on `n >= 0.9 dim`.
    pub fn tail_mass(&self) -> f64 {
        let dim = self.dim();
        let start = (0.9 * dim as f64).ceil() as usize;
        self.amps
            .iter()
            .skip(start)
            .map(|c| c.norm_sqr())
            .sum()
    }

    /// Errors with `TruncationOverflow` when the tail guard is violated.
    pub fn check_tail(&self) -> Result<()> {
        let tail = self.tail_mass();
        if tail > TAIL_MASS_LIMIT {
            return Err(Error::TruncationOverflow {
                tail,
                limit: TAIL_MASS_LIMIT,
                dim: self.dim(),
            });
        }
        Ok(())
    }

    pub fn is_tail_safe(&self) -> bool {
        self.tail_mass() <= TAIL_MASS_LIMIT
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::InvalidDimension(dim));
    }
    Ok(())
}

/// Structural classification of an operator on the truncated space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Hermitian,
    Unitary,
    General,
}

/// Dense operator on the truncated space.
///
/// Gates that are diagonal in the number basis (Kerr, rotation) carry their
/// diagonal alongside the dense entries so application stays O(dim).
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    entries: DMatrix<C64>,
    kind: OperatorKind,
    diagonal: Option<DVector<C64>>,
}

impl OperatorMatrix {
    pub fn new(entries: DMatrix<C64>, kind: OperatorKind) -> Self {
        Self {
            entries,
            kind,
            diagonal: None,
        }
    }

    pub fn from_diagonal(diag: DVector<C64>, kind: OperatorKind) -> Self {
        let entries = DMatrix::from_diagonal(&diag);
        Self {
            entries,
            kind,
            diagonal: Some(diag),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn is_diagonal(&self) -> bool {
        self.diagonal.is_some()
    }

    pub(crate) fn diagonal(&self) -> Option<&DVector<C64>> {
        self.diagonal.as_ref()
    }

    /// Max-norm deviation from `A = A^dagger`.
    pub fn hermiticity_defect(&self) -> f64 {
        let adj = self.entries.adjoint();
        (&self.entries - adj)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Max-norm deviation of `U^dagger U` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let dim = self.dim();
        let prod = self.entries.ad_mul(&self.entries);
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                let expect = if i == j {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                };
                worst = worst.max((prod[(i, j)] - expect).norm());
            }
        }
        worst
    }
}

/// Symmetrized 2x2 quadrature covariance, vacuum variance 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceMatrix {
    pub vxx: f64,
    pub vpp: f64,
    pub vxp: f64,
}

impl VarianceMatrix {
    pub fn min_eigenvalue(&self) -> f64 {
        let half_trace = 0.5 * (self.vxx + self.vpp);
        let half_diff = 0.5 * (self.vxx - self.vpp);
        half_trace - (half_diff * half_diff + self.vxp * self.vxp).sqrt()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        let half_trace = 0.5 * (self.vxx + self.vpp);
        let half_diff = 0.5 * (self.vxx - self.vpp);
        half_trace + (half_diff * half_diff + self.vxp * self.vxp).sqrt()
    }

    pub fn det(&self) -> f64 {
        self.vxx * self.vpp - self.vxp * self.vxp
    }
}
