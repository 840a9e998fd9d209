//! Truncated Fock space: states, quadratures, Gaussian and Kerr gates.
//!
//! Conventions used throughout: `[x, p] = i`, vacuum variances 1/2, photon
//! number `n = (x^2 + p^2 - 1)/2`. Displacement and squeeze gates are
//! exponentials of the truncated Hermitian generators through their
//! eigendecompositions, which makes them exactly unitary on the truncated
//! space; fidelity to the untruncated gates is policed by the tail-mass
//! guard on the states they produce.

mod gates;
mod space;
mod types;
pub mod wigner;

pub use gates::{
    apply, build_ladder, build_number, build_quadratures, coherent_tail, commutator,
    displacement_guard, expectation, fock_probabilities, gate_displacement, gate_kerr,
    gate_momentum_displacement, gate_rotation, gate_squeeze, squeeze_guard, squeezed_vacuum_tail,
    variance_matrix,
};
pub use space::{BandedOp, FockSpace, HermitianEigen};
pub use types::{
    FockState, KerrConvention, OperatorKind, OperatorMatrix, VarianceMatrix, NORM_TOL,
    TAIL_MASS_LIMIT,
};
