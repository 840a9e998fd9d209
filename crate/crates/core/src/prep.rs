//! The three state-preparation pipelines: a single Kerr gate applied to a
//! coherent or squeezed input, followed by Gaussian processing.
//!
//! Gates are applied sequentially right-to-left (diagonal ones in O(dim));
//! equality with the precomposed dense product is covered by tests.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fock::{FockSpace, FockState, KerrConvention};
use crate::metrics::wrap_angle;

/// Parameters of the linear-squeezing pipeline `K(chi) D(alpha) |0>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrepParamsLinear {
    pub alpha: f64,
    pub chi: f64,
}

/// Parameters of the cubic pipeline
/// `S(r) D_p(beta) R(phi) K(chi) D(alpha) |0>`.
///
/// The middle displacement acts along p (`D_p(beta) = exp(i beta x)`): that
/// is the displacement family the optimized objective varies, since an
/// x-displacement in this slot only shifts `O_3 = x - p^2` by a constant
/// and leaves its variance unchanged. With this ordering the pipeline state
/// reproduces the transformed-operator objective exactly:
/// `var(O_3)` of the prepared state equals `V_3(zeta_3; g = e^r, phi, beta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrepParamsCubic {
    pub alpha: f64,
    pub chi: f64,
    pub phi: f64,
    pub beta: f64,
    pub r: f64,
}

/// Parameters of the quartic pipeline
/// `R(phi2) S(w) R(phi1) K(chi) S(r) |0>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrepParamsQuartic {
    pub r: f64,
    pub chi: f64,
    pub phi1: f64,
    pub w: f64,
    pub phi2: f64,
}

/// `K(chi) D(alpha) |0>`; errors with truncation overflow when the output
/// leaves too much mass in the tail guard band.
pub fn prep_linear(
    space: &FockSpace,
    params: &PrepParamsLinear,
    convention: KerrConvention,
) -> Result<FockState> {
    let state = space.coherent(params.alpha)?;
    let state = space.apply_kerr(params.chi, convention, &state)?;
    state.check_tail()?;
    Ok(state)
}

/// `S(r) D_p(beta) R(phi) K(chi) D(alpha) |0>`.
pub fn prep_cubic(
    space: &FockSpace,
    params: &PrepParamsCubic,
    convention: KerrConvention,
) -> Result<FockState> {
    let state = space.coherent(params.alpha)?;
    let state = space.apply_kerr(params.chi, convention, &state)?;
    let state = space.apply_rotation(params.phi, &state)?;
    let state = space.apply_momentum_displacement(params.beta, &state)?;
    let state = space.apply_squeeze(params.r, &state)?;
    state.check_tail()?;
    Ok(state)
}

/// `R(phi2) S(w) R(phi1) K(chi) S(r) |0>`.
pub fn prep_quartic(
    space: &FockSpace,
    params: &PrepParamsQuartic,
    convention: KerrConvention,
) -> Result<FockState> {
    let state = space.apply_squeeze(params.r, &space.vacuum())?;
    let state = space.apply_kerr(params.chi, convention, &state)?;
    let state = space.apply_rotation(params.phi1, &state)?;
    let state = space.apply_squeeze(params.w, &state)?;
    let state = space.apply_rotation(params.phi2, &state)?;
    state.check_tail()?;
    Ok(state)
}

/// Heisenberg matrix of the rotation gate on `(x, p)`:
/// `R(phi)^dag x R(phi) = cos(phi) x + sin(phi) p`, and analogously for p.
pub fn rotation_heisenberg(phi: f64) -> [[f64; 2]; 2] {
    let (s, c) = phi.sin_cos();
    [[c, s], [-s, c]]
}

/// Heisenberg matrix of `R(phi2) S(w) R(phi1)`; operator transforms compose
/// left to right, so this is `Rot(phi2) diag(e^w, e^-w) Rot(phi1)`.
pub fn gaussian_chain_heisenberg(phi1: f64, w: f64, phi2: f64) -> [[f64; 2]; 2] {
    let r2 = rotation_heisenberg(phi2);
    let r1 = rotation_heisenberg(phi1);
    let (ew, emw) = (w.exp(), (-w).exp());
    let mid = [
        [r2[0][0] * ew, r2[0][1] * emw],
        [r2[1][0] * ew, r2[1][1] * emw],
    ];
    mat_mul(mid, r1)
}

fn mat_mul(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

/// Euler decomposition of a unit-determinant 2x2 matrix into
/// `Rot(phi2) diag(e^w, e^-w) Rot(phi1)`, i.e. the Heisenberg matrix of
/// `R(phi2) S(w) R(phi1)`. Returns `(phi1, w, phi2)`.
///
/// This is the 2x2 singular value decomposition with both factors forced to
/// proper rotations; for `det(m) = 1` the singular values pair up as
/// `(e^w, e^-w)`.
pub fn euler_decompose(m: [[f64; 2]; 2]) -> (f64, f64, f64) {
    let [[a, b], [c, d]] = m;
    let mtm = [
        [a * a + c * c, a * b + c * d],
        [a * b + c * d, b * b + d * d],
    ];
    let half_trace = 0.5 * (mtm[0][0] + mtm[1][1]);
    let half_diff = 0.5 * (mtm[0][0] - mtm[1][1]);
    let disc = (half_diff * half_diff + mtm[0][1] * mtm[0][1]).sqrt();
    let s1 = (half_trace + disc).max(1e-300).sqrt();

    // leading right singular vector (of M^T M); of the two equivalent
    // eigenvector expressions, take the one whose large component is a sum,
    // not a difference, so nearly diagonal inputs stay accurate
    let (v0, v1) = if mtm[0][1] == 0.0 {
        if mtm[0][0] >= mtm[1][1] {
            (1.0, 0.0)
        } else {
            (0.0, 1.0)
        }
    } else if half_diff >= 0.0 {
        (disc + half_diff, mtm[0][1])
    } else {
        (mtm[0][1], disc - half_diff)
    };
    let vnorm = (v0 * v0 + v1 * v1).sqrt();
    let (v0, v1) = (v0 / vnorm, v1 / vnorm);

    // matching left singular vector
    let u0 = (a * v0 + b * v1) / s1;
    let u1 = (c * v0 + d * v1) / s1;

    // completing u and v to proper rotations U = [u, perp(u)],
    // V = [v, perp(v)] gives M = U diag(s1, det/s1) V^T; det = 1 for the
    // symplectic transforms handled here, so the middle factor is the
    // squeeze diag(e^w, e^-w)
    let phi2 = -f64::atan2(u1, u0);
    let phi1 = f64::atan2(v1, v0);
    (phi1, s1.ln(), phi2)
}

/// State-preparation parameters equivalent to a cubic objective optimum
/// `(chi, phi, beta, g)` at displacement `alpha`: the prepared state
/// `S(ln g) D_p(beta) R(phi) zeta_3` realizes the transformed operators of
/// the objective exactly. For `g < 0` the equivalent branch
/// `(-g, phi +- pi, -beta)` is used.
pub fn cubic_state_params(alpha: f64, chi: f64, phi: f64, beta: f64, g: f64) -> PrepParamsCubic {
    let (g, phi, beta) = if g < 0.0 {
        (-g, wrap_angle(phi + std::f64::consts::PI), -beta)
    } else {
        (g, phi, beta)
    };
    PrepParamsCubic {
        alpha,
        chi,
        phi,
        beta,
        r: g.ln(),
    }
}

/// State-preparation parameters equivalent to a quartic objective optimum
/// `(chi, phi1, omega, phi2)` at input squeezing `r`: the Gaussian chain
/// `R(phi2') S(w) R(phi1')` whose Heisenberg matrix equals the objective's
/// transform matrix. Angles are folded to the branch of smallest magnitude
/// (each is defined modulo pi up to a variance-preserving sign).
pub fn quartic_state_params(
    r: f64,
    chi: f64,
    phi1: f64,
    omega: f64,
    phi2: f64,
) -> PrepParamsQuartic {
    let m = crate::metrics::quartic_transform_matrix(omega, phi1, phi2);
    let (th1, w, th2) = euler_decompose(m);
    let (th1, th2) = fold_angle_pair(th1, th2);
    PrepParamsQuartic {
        r,
        chi,
        phi1: th1,
        w,
        phi2: th2,
    }
}

/// Fold each angle by multiples of pi to the smallest combined magnitude;
/// a pi shift of either angle flips the sign of the Heisenberg matrix,
/// which leaves every variance unchanged.
fn fold_angle_pair(th1: f64, th2: f64) -> (f64, f64) {
    let fold = |t: f64| {
        let t = wrap_angle(t);
        if t > std::f64::consts::FRAC_PI_2 {
            t - std::f64::consts::PI
        } else if t <= -std::f64::consts::FRAC_PI_2 {
            t + std::f64::consts::PI
        } else {
            t
        }
    };
    (fold(th1), fold(th2))
}
