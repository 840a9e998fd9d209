use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

use super::types::FockState;

/// Wigner function samples on a rectangular phase-space grid.
#[derive(Debug, Clone)]
pub struct WignerGrid {
    pub xs: Vec<f64>,
    pub ps: Vec<f64>,
    /// Row-major `values[i_x][i_p]`.
    pub values: Vec<Vec<f64>>,
}

impl WignerGrid {
    /// Integral over the grid window by the midpoint rule.
    pub fn total_mass(&self) -> f64 {
        if self.xs.len() < 2 || self.ps.len() < 2 {
            return 0.0;
        }
        let dx = self.xs[1] - self.xs[0];
        let dp = self.ps[1] - self.ps[0];
        self.values
            .iter()
            .map(|row| row.iter().sum::<f64>())
            .sum::<f64>()
            * dx
            * dp
    }
}

/// Evaluate `W(x, p) = (1/pi) ∫ psi*(x+y) psi(x-y) e^{2ipy} dy` for a pure
/// state, with the position wavefunction reconstructed from the number-basis
/// amplitudes through the harmonic-oscillator eigenfunction recurrence.
pub fn wigner_grid(
    state: &FockState,
    x_range: (f64, f64),
    p_range: (f64, f64),
    resolution: usize,
) -> Result<WignerGrid> {
    if !(x_range.0.is_finite() && x_range.1.is_finite())
        || !(p_range.0.is_finite() && p_range.1.is_finite())
    {
        return Err(Error::InvalidGrid("phase-space window must be finite"));
    }
    if x_range.1 <= x_range.0 || p_range.1 <= p_range.0 {
        return Err(Error::InvalidGrid("window bounds must increase"));
    }
    if resolution < 2 {
        return Err(Error::InvalidGrid("resolution must be at least 2"));
    }

    let xs = linspace(x_range.0, x_range.1, resolution);
    let ps = linspace(p_range.0, p_range.1, resolution);

    let p_max = ps.iter().fold(0.0f64, |m, p| m.max(p.abs())).max(1.0);
    // y window wide enough for the wavefunction to decay, y step fine enough
    // for the fastest oscillation of e^{2ipy}
    let half_width = 0.5 * (x_range.1 - x_range.0) + 8.0;
    let dy = (PI / (8.0 * p_max)).min(0.05);
    let n_y = (2.0 * half_width / dy).ceil() as usize + 1;
    let ys = linspace(-half_width, half_width, n_y);
    let dy = ys[1] - ys[0];

    let mut values = vec![vec![0.0; resolution]; resolution];
    let mut plus = vec![C64::new(0.0, 0.0); n_y];
    let mut minus = vec![C64::new(0.0, 0.0); n_y];
    for (ix, &x) in xs.iter().enumerate() {
        for (k, &y) in ys.iter().enumerate() {
            plus[k] = wavefunction(state, x + y);
            minus[k] = wavefunction(state, x - y);
        }
        for (ip, &p) in ps.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..n_y {
                acc += plus[k].conj() * minus[k] * C64::from_polar(1.0, 2.0 * p * ys[k]);
            }
            values[ix][ip] = (acc * dy).re / PI;
        }
    }

    Ok(WignerGrid { xs, ps, values })
}

/// `psi(x) = sum_n c_n h_n(x)` with the normalized Hermite functions
/// `h_0 = pi^{-1/4} e^{-x^2/2}`, `h_{n+1} = sqrt(2/(n+1)) x h_n - sqrt(n/(n+1)) h_{n-1}`.
pub fn wavefunction(state: &FockState, x: f64) -> C64 {
    let amps = state.amplitudes();
    let mut h_prev = 0.0;
    let mut h = PI.powf(-0.25) * (-0.5 * x * x).exp();
    let mut acc = amps[0] * h;
    for n in 0..amps.len() - 1 {
        let nf = n as f64;
        let h_next = (2.0 / (nf + 1.0)).sqrt() * x * h - (nf / (nf + 1.0)).sqrt() * h_prev;
        h_prev = h;
        h = h_next;
        acc += amps[n + 1] * h;
    }
    acc
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + step * i as f64).collect()
}
