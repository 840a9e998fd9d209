//! Bounded quasi-Newton minimization of the squeezing objectives, with
//! multi-start search per grid point and warm-start chaining across a sweep.

use std::collections::VecDeque;
use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{FockSpace, KerrConvention};
use crate::metrics::{
    self, gaussian_baseline, linear_min_eigenvalue_in, v3_objective, v4_objective, Order,
};
use crate::seeding::substream;

/// Projected-gradient convergence threshold.
pub const PG_TOL: f64 = 1e-7;
/// Central finite-difference step.
pub const FD_STEP: f64 = 1e-6;
/// Default objective-evaluation budget per start.
pub const DEFAULT_BUDGET: usize = 2000;
/// Objective gap treated as a tie and broken by parameter norm.
pub const TIE_TOL: f64 = 1e-12;

/// Outcome of one local minimization.
#[derive(Debug, Clone)]
pub struct MinimizeResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub n_evals: usize,
    pub converged: bool,
}

/// Minimize `f` inside the box `bounds` starting from `start`, by L-BFGS
/// directions with gradient projection onto the box and a backtracking line
/// search. Gradients are central finite differences with step [`FD_STEP`],
/// falling back to one-sided differences at the box faces. Stops when the
/// infinity norm of the projected gradient drops below [`PG_TOL`] or the
/// evaluation budget is exhausted; the returned value never exceeds the
/// value at `start`.
pub fn local_minimize(
    f: &(impl Fn(&[f64]) -> f64 + ?Sized),
    start: &[f64],
    bounds: &[(f64, f64)],
    budget: usize,
) -> MinimizeResult {
    let n = start.len();
    assert_eq!(n, bounds.len());
    let mut n_evals = 0usize;
    let eval = |x: &[f64], n_evals: &mut usize| -> f64 {
        *n_evals += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };

    let clamp = |x: &mut [f64]| {
        for (xi, (lo, hi)) in x.iter_mut().zip(bounds) {
            *xi = xi.clamp(*lo, *hi);
        }
    };

    let mut x = start.to_vec();
    clamp(&mut x);
    let mut fx = eval(&x, &mut n_evals);
    if !fx.is_finite() {
        return MinimizeResult {
            x,
            value: fx,
            n_evals,
            converged: false,
        };
    }

    let gradient = |x: &[f64], n_evals: &mut usize| -> Vec<f64> {
        let mut g = vec![0.0; n];
        let mut xp = x.to_vec();
        for i in 0..n {
            let (lo, hi) = bounds[i];
            let up = (x[i] + FD_STEP).min(hi);
            let dn = (x[i] - FD_STEP).max(lo);
            if up <= dn {
                g[i] = 0.0;
                continue;
            }
            xp[i] = up;
            let fu = eval(&xp, n_evals);
            xp[i] = dn;
            let fd = eval(&xp, n_evals);
            xp[i] = x[i];
            g[i] = (fu - fd) / (up - dn);
        }
        g
    };

    let projected_gradient_norm = |x: &[f64], g: &[f64]| -> f64 {
        let mut worst = 0.0f64;
        for i in 0..n {
            let (lo, hi) = bounds[i];
            let mut gi = g[i];
            if x[i] <= lo && gi > 0.0 {
                gi = 0.0;
            }
            if x[i] >= hi && gi < 0.0 {
                gi = 0.0;
            }
            worst = worst.max(gi.abs());
        }
        worst
    };

    let mut g = gradient(&x, &mut n_evals);
    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new(); // (s, y, 1/y.s)
    let mut best = (x.clone(), fx);
    let mut converged = false;

    while n_evals < budget {
        if projected_gradient_norm(&x, &g) < PG_TOL {
            converged = true;
            break;
        }

        // two-loop recursion for d = -H g
        let mut d: Vec<f64> = g.iter().map(|v| -v).collect();
        let mut alphas = Vec::with_capacity(history.len());
        for (s, y, rho) in history.iter().rev() {
            let alpha = rho * dot(s, &d);
            for i in 0..n {
                d[i] -= alpha * y[i];
            }
            alphas.push(alpha);
        }
        if let Some((s, y, _)) = history.back() {
            let scale = dot(s, y) / dot(y, y);
            if scale.is_finite() && scale > 0.0 {
                for di in d.iter_mut() {
                    *di *= scale;
                }
            }
        }
        for ((s, y, rho), alpha) in history.iter().zip(alphas.into_iter().rev()) {
            let beta = rho * dot(y, &d);
            for i in 0..n {
                d[i] += (alpha - beta) * s[i];
            }
        }

        let mut accepted = false;
        for steepest in [false, true] {
            if steepest {
                d = g.iter().map(|v| -v).collect();
                history.clear();
            }

            // find an Armijo step by halving; a candidate is (x_new, f_new)
            let probe = |t: f64, n_evals: &mut usize| -> Option<(Vec<f64>, f64)> {
                let mut x_new: Vec<f64> = (0..n).map(|i| x[i] + t * d[i]).collect();
                clamp(&mut x_new);
                let step: Vec<f64> = (0..n).map(|i| x_new[i] - x[i]).collect();
                if step.iter().all(|s| s.abs() < 1e-15) {
                    return None;
                }
                let f_new = eval(&x_new, n_evals);
                (f_new <= fx + 1e-4 * dot(&g, &step)).then_some((x_new, f_new))
            };

            let mut t = 1.0;
            let mut chosen = None;
            for bt in 0..40 {
                if n_evals >= budget {
                    break;
                }
                if let Some(cand) = probe(t, &mut n_evals) {
                    chosen = Some(cand);
                    // the unit step passed immediately: the quasi-Newton
                    // scale may be far too short (narrow-valley creep), so
                    // extend while the step keeps paying off
                    if bt == 0 {
                        let mut t_ext = 2.0 * t;
                        for _ in 0..30 {
                            if n_evals >= budget {
                                break;
                            }
                            match probe(t_ext, &mut n_evals) {
                                Some(cand_ext)
                                    if cand_ext.1 < chosen.as_ref().unwrap().1 =>
                                {
                                    chosen = Some(cand_ext);
                                    t_ext *= 2.0;
                                }
                                _ => break,
                            }
                        }
                    }
                    break;
                }
                t *= 0.5;
            }

            if let Some((x_new, f_new)) = chosen {
                let g_new = gradient(&x_new, &mut n_evals);
                let step: Vec<f64> = (0..n).map(|i| x_new[i] - x[i]).collect();
                let y: Vec<f64> = (0..n).map(|i| g_new[i] - g[i]).collect();
                let sy = dot(&step, &y);
                if sy > 1e-10 * norm(&step) * norm(&y) {
                    if history.len() == 8 {
                        history.pop_front();
                    }
                    history.push_back((step, y, 1.0 / sy));
                }
                x = x_new;
                fx = f_new;
                g = g_new;
                if fx < best.1 {
                    best = (x.clone(), fx);
                }
                accepted = true;
            }
            if accepted || n_evals >= budget {
                break;
            }
        }
        if !accepted {
            // no descent along the quasi-Newton or steepest direction
            break;
        }
    }

    MinimizeResult {
        x: best.0,
        value: best.1,
        n_evals,
        converged,
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Which preparation pipeline a sweep optimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepKind {
    Linear,
    Cubic,
    Quartic,
}

impl SweepKind {
    pub fn primary_name(self) -> &'static str {
        match self {
            SweepKind::Linear | SweepKind::Cubic => "alpha",
            SweepKind::Quartic => "r",
        }
    }

    /// Names of the optimized parameters, in tuple order.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            SweepKind::Linear => &["chi"],
            SweepKind::Cubic => &["chi", "phi", "beta", "g"],
            SweepKind::Quartic => &["chi", "phi1", "omega", "phi2"],
        }
    }
}

impl std::fmt::Display for SweepKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SweepKind::Linear => write!(f, "linear"),
            SweepKind::Cubic => write!(f, "cubic"),
            SweepKind::Quartic => write!(f, "quartic"),
        }
    }
}

impl std::str::FromStr for SweepKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "linear" => Ok(SweepKind::Linear),
            "cubic" => Ok(SweepKind::Cubic),
            "quartic" => Ok(SweepKind::Quartic),
            other => Err(format!("unknown sweep kind {other:?}")),
        }
    }
}

/// Box for one optimized parameter; `mirrored` widens it to the symmetric
/// union `[-hi, -lo] u [lo, hi]`, with the branch fixed per start by the
/// sign of the start value.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ParamSpec {
    pub lo: f64,
    pub hi: f64,
    pub mirrored: bool,
}

impl ParamSpec {
    fn plain(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            mirrored: false,
        }
    }

    fn mirrored(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            mirrored: true,
        }
    }

    fn box_for(&self, value: f64) -> (f64, f64) {
        if self.mirrored && value < 0.0 {
            (-self.hi, -self.lo)
        } else {
            (self.lo, self.hi)
        }
    }

    fn draw(&self, rng: &mut impl Rng) -> f64 {
        let magnitude = rng.random_range(self.lo..=self.hi);
        if self.mirrored && rng.random::<bool>() {
            -magnitude
        } else {
            magnitude
        }
    }
}

/// Parameter boxes for each sweep kind. The Kerr strength is kept in
/// (0, 1.5], phases in [-pi, pi], the displacement in [-5, 5], and the
/// scalings g and omega in the mirrored box of magnitude [0.05, 3].
pub fn default_bounds(kind: SweepKind) -> Vec<ParamSpec> {
    match kind {
        SweepKind::Linear => vec![ParamSpec::plain(1e-6, 1.5)],
        SweepKind::Cubic => vec![
            ParamSpec::plain(1e-6, 1.5),
            ParamSpec::plain(-PI, PI),
            ParamSpec::plain(-5.0, 5.0),
            ParamSpec::mirrored(0.05, 3.0),
        ],
        SweepKind::Quartic => vec![
            ParamSpec::plain(1e-6, 1.5),
            ParamSpec::plain(-PI, PI),
            ParamSpec::mirrored(0.05, 3.0),
            ParamSpec::plain(-PI, PI),
        ],
    }
}

/// One grid point of a sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptProblem {
    pub kind: SweepKind,
    pub primary_param: f64,
    pub dim: usize,
    pub convention: KerrConvention,
    pub bounds: Vec<ParamSpec>,
    pub n_starts: usize,
    pub seed: u64,
    /// Position in the sweep grid; random starts are keyed by
    /// (seed, grid_index, start_index).
    pub grid_index: u64,
    pub budget: usize,
}

impl OptProblem {
    pub fn new(
        kind: SweepKind,
        primary_param: f64,
        dim: usize,
        convention: KerrConvention,
        n_starts: usize,
        seed: u64,
        grid_index: u64,
    ) -> Self {
        Self {
            kind,
            primary_param,
            dim,
            convention,
            bounds: default_bounds(kind),
            n_starts,
            seed,
            grid_index,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Optimized parameters and objective at one grid point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimalPoint {
    pub primary_param: f64,
    pub best_params: Vec<f64>,
    /// Minimized variance (least covariance eigenvalue for the linear kind).
    pub objective: f64,
    /// Objective over its reference: the Gaussian baseline for cubic and
    /// quartic, the vacuum variance 1/2 for linear.
    pub xi: f64,
    pub n_evals: usize,
    pub rejected_starts: usize,
}

/// Ordered sweep output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepResult {
    pub kind: SweepKind,
    pub dim: usize,
    pub convention: KerrConvention,
    pub seed: u64,
    pub points: Vec<OptimalPoint>,
    /// (grid index, error message) of points whose optimization failed.
    pub failures: Vec<(usize, String)>,
}

/// Boxed objective over the optimized parameter tuple.
pub type Objective = Box<dyn Fn(&[f64]) -> f64 + Sync + Send>;

/// Build the objective for one grid point. The fixed input state (coherent
/// or squeezed vacuum) is prepared once; each evaluation applies the Kerr
/// gate diagonally and scores the result, so a call costs O(dim).
pub fn point_objective(problem: &OptProblem) -> Result<Objective> {
    let space = FockSpace::get(problem.dim)?;
    make_objective(&space, problem)
}

fn make_objective(space: &Arc<FockSpace>, problem: &OptProblem) -> Result<Objective> {
    let convention = problem.convention;
    let input = match problem.kind {
        SweepKind::Linear | SweepKind::Cubic => space.coherent(problem.primary_param)?,
        SweepKind::Quartic => space.apply_squeeze(problem.primary_param, &space.vacuum())?,
    };
    input.check_tail()?;
    let space = space.clone();
    Ok(match problem.kind {
        SweepKind::Linear => Box::new(move |params: &[f64]| {
            match space.apply_kerr(params[0], convention, &input) {
                Ok(state) => linear_min_eigenvalue_in(&space, &state),
                Err(_) => f64::INFINITY,
            }
        }),
        SweepKind::Cubic => Box::new(move |params: &[f64]| {
            let [chi, phi, beta, g] = [params[0], params[1], params[2], params[3]];
            space
                .apply_kerr(chi, convention, &input)
                .and_then(|zeta| v3_objective(&space, &zeta, g, phi, beta))
                .unwrap_or(f64::INFINITY)
        }),
        SweepKind::Quartic => Box::new(move |params: &[f64]| {
            let [chi, phi1, omega, phi2] = [params[0], params[1], params[2], params[3]];
            space
                .apply_kerr(chi, convention, &input)
                .and_then(|zeta| v4_objective(&space, &zeta, omega, phi1, phi2))
                .unwrap_or(f64::INFINITY)
        }),
    })
}

/// The start tuples a problem will minimize from: the warm start (clamped
/// into its bounds branch) fills slot 0 and displaces one random start, so
/// the random set with a warm start is a strict subset of the set without.
/// Random starts are keyed by (seed, grid_index, start_index).
pub fn generate_starts(problem: &OptProblem, warm_start: Option<&[f64]>) -> Vec<Vec<f64>> {
    let n_random = match warm_start {
        Some(_) => problem.n_starts.saturating_sub(1),
        None => problem.n_starts,
    };
    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(problem.n_starts);
    if let Some(w) = warm_start {
        let mut w = w.to_vec();
        for (wi, spec) in w.iter_mut().zip(&problem.bounds) {
            let (lo, hi) = spec.box_for(*wi);
            *wi = wi.clamp(lo, hi);
        }
        starts.push(w);
    }
    for i in 1..=n_random {
        let mut rng = substream(problem.seed, &[problem.grid_index, i as u64]);
        starts.push(problem.bounds.iter().map(|b| b.draw(&mut rng)).collect());
    }
    starts
}

/// Multi-start bounded minimization at one grid point.
///
/// Start 0 is the warm start when one is given; the remaining starts are
/// drawn uniformly inside the bounds from substreams keyed by
/// (seed, grid_index, start_index), so the result is a deterministic
/// function of the problem. Ties within [`TIE_TOL`] break toward the
/// smallest parameter norm.
pub fn optimize_point(problem: &OptProblem, warm_start: Option<&[f64]>) -> Result<OptimalPoint> {
    let space = FockSpace::get(problem.dim)?;
    let objective = make_objective(&space, problem)?;

    let starts = generate_starts(problem, warm_start);

    let results: Vec<MinimizeResult> = starts
        .par_iter()
        .map(|start| {
            let boxes: Vec<(f64, f64)> = problem
                .bounds
                .iter()
                .zip(start)
                .map(|(spec, &v)| spec.box_for(v))
                .collect();
            local_minimize(objective.as_ref(), start, &boxes, problem.budget)
        })
        .collect();

    let mut n_evals = 0;
    let mut rejected = 0;
    let mut best: Option<&MinimizeResult> = None;
    for res in &results {
        n_evals += res.n_evals;
        if !res.value.is_finite() {
            rejected += 1;
            continue;
        }
        best = Some(match best {
            None => res,
            Some(cur) => {
                if res.value < cur.value - TIE_TOL
                    || ((res.value - cur.value).abs() <= TIE_TOL && norm(&res.x) < norm(&cur.x))
                {
                    res
                } else {
                    cur
                }
            }
        });
    }
    let best = best.ok_or_else(|| {
        Error::OptimizationFailed(format!(
            "all {} starts rejected at {}={}",
            results.len(),
            problem.kind.primary_name(),
            problem.primary_param
        ))
    })?;

    let params = canonicalize_params(problem.kind, &best.x);
    // canonicalization maps between exactly equivalent parameter branches;
    // re-evaluate so the stored objective refers to the stored parameters
    let objective_value = objective(&params);
    debug_assert!(
        (objective_value - best.value).abs() <= 1e-9 * (1.0 + best.value.abs()),
        "canonicalization changed the objective: {} vs {}",
        objective_value,
        best.value
    );

    let xi = match problem.kind {
        SweepKind::Linear => objective_value / 0.5,
        SweepKind::Cubic => objective_value / gaussian_baseline(Order::Cubic).variance,
        SweepKind::Quartic => objective_value / gaussian_baseline(Order::Quartic).variance,
    };

    Ok(OptimalPoint {
        primary_param: problem.primary_param,
        best_params: params,
        objective: objective_value,
        xi,
        n_evals,
        rejected_starts: rejected,
    })
}

/// Map optimized parameters onto a canonical branch of the objective's exact
/// symmetries, so sweep curves are continuous and downstream state
/// parameters are well defined.
///
/// Cubic: `(g, phi, beta) ~ (-g, phi +- pi, -beta)`; the branch with
/// `g > 0` is kept. Quartic: `omega ~ -omega` and each angle is defined
/// modulo pi, folded into (-pi/2, pi/2]; the Kerr strength on the
/// parity-even quartic input is defined modulo pi/4 and is folded into
/// [pi/4, pi/2) to keep a single branch across the sweep.
pub fn canonicalize_params(kind: SweepKind, params: &[f64]) -> Vec<f64> {
    let mut p = params.to_vec();
    match kind {
        SweepKind::Linear => {}
        SweepKind::Cubic => {
            if p[3] < 0.0 {
                p[3] = -p[3];
                p[1] = metrics::wrap_angle(p[1] + PI);
                p[2] = -p[2];
            }
        }
        SweepKind::Quartic => {
            if p[2] < 0.0 {
                p[2] = -p[2];
            }
            p[1] = fold_half_pi(p[1]);
            p[3] = fold_half_pi(p[3]);
            if p[0] < PI / 4.0 {
                let shifted = p[0] + PI / 4.0;
                if shifted <= 1.5 {
                    p[0] = shifted;
                }
            }
        }
    }
    p
}

fn fold_half_pi(phi: f64) -> f64 {
    let mut phi = metrics::wrap_angle(phi);
    if phi > PI / 2.0 {
        phi -= PI;
    } else if phi <= -PI / 2.0 {
        phi += PI;
    }
    phi
}

/// Sweep configuration shared by all grid points.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    pub dim: usize,
    pub convention: KerrConvention,
    pub n_starts: usize,
    pub seed: u64,
    pub budget: usize,
}

impl SweepConfig {
    pub fn new(dim: usize, convention: KerrConvention, n_starts: usize, seed: u64) -> Self {
        Self {
            dim,
            convention,
            n_starts,
            seed,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Optimize every grid value in order, chaining each point's optimum into
/// the next point's start slot. Failed points are recorded and skipped.
pub fn sweep(kind: SweepKind, grid: &[f64], config: &SweepConfig) -> Result<SweepResult> {
    if grid.is_empty() {
        return Err(Error::OptimizationFailed("empty sweep grid".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::OptimizationFailed(
            "sweep grid must be strictly increasing".into(),
        ));
    }
    let mut points = Vec::with_capacity(grid.len());
    let mut failures = Vec::new();
    let mut warm: Option<Vec<f64>> = None;
    for (i, &value) in grid.iter().enumerate() {
        let mut problem = OptProblem::new(
            kind,
            value,
            config.dim,
            config.convention,
            config.n_starts,
            config.seed,
            i as u64,
        );
        problem.budget = config.budget;
        match optimize_point(&problem, warm.as_deref()) {
            Ok(point) => {
                warm = Some(point.best_params.clone());
                points.push(point);
            }
            Err(err) => failures.push((i, err.to_string())),
        }
    }
    Ok(SweepResult {
        kind,
        dim: config.dim,
        convention: config.convention,
        seed: config.seed,
        points,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn quadratic_1d() {
        let f = |x: &[f64]| (x[0] - 2.0) * (x[0] - 2.0);
        let res = local_minimize(&f, &[0.0], &[(0.0, 5.0)], 2000);
        assert_abs_diff_eq!(res.x[0], 2.0, epsilon = 1e-6);
        assert!(res.value < 1e-8);
        assert!(res.converged);
    }

    #[test]
    fn rosenbrock_2d() {
        let f = |x: &[f64]| {
            let (a, b) = (x[0], x[1]);
            (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2)
        };
        let res = local_minimize(&f, &[-1.2, 1.0], &[(-2.0, 2.0), (-2.0, 2.0)], 2000);
        assert_abs_diff_eq!(res.x[0], 1.0, epsilon = 1e-5);
        assert_abs_diff_eq!(res.x[1], 1.0, epsilon = 1e-5);
    }

    #[test]
    fn respects_bounds() {
        let f = |x: &[f64]| x[0] * x[0];
        let res = local_minimize(&f, &[3.0], &[(1.0, 5.0)], 500);
        assert_abs_diff_eq!(res.x[0], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn value_never_worse_than_start() {
        let f = |x: &[f64]| x.iter().map(|v| v.cos()).sum::<f64>();
        for s in [[0.3, 1.9], [2.0, -2.0], [-1.0, 0.0]] {
            let res = local_minimize(&f, &s, &[(-3.0, 3.0), (-3.0, 3.0)], 300);
            assert!(res.value <= f(&s) + 1e-12);
        }
    }

    #[test]
    fn v3_vacuum_recovers_cubic_baseline() {
        let space = FockSpace::get(48).unwrap();
        let vac = space.vacuum();
        let f = move |p: &[f64]| {
            v3_objective(&space, &vac, p[2], p[1], p[0]).unwrap_or(f64::INFINITY)
        };
        // params (beta, phi, g)
        let res = local_minimize(
            &f,
            &[0.3, 0.2, 1.4],
            &[(-5.0, 5.0), (-PI, PI), (0.05, 3.0)],
            2000,
        );
        assert_abs_diff_eq!(
            res.value,
            gaussian_baseline(Order::Cubic).variance,
            epsilon = 1e-7
        );
        assert_abs_diff_eq!(res.x[2], 2f64.powf(1.0 / 6.0), epsilon = 1e-4);
    }

    #[test]
    fn linear_point_at_zero_alpha() {
        let problem = OptProblem::new(
            SweepKind::Linear,
            0.0,
            48,
            KerrConvention::NPlus1Sq,
            6,
            11,
            0,
        );
        let point = optimize_point(&problem, None).unwrap();
        assert_abs_diff_eq!(point.objective, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn optimize_point_deterministic() {
        let problem = OptProblem::new(
            SweepKind::Cubic,
            0.8,
            48,
            KerrConvention::NPlus1Sq,
            6,
            42,
            3,
        );
        let a = optimize_point(&problem, None).unwrap();
        let b = optimize_point(&problem, None).unwrap();
        assert_eq!(a.objective.to_bits(), b.objective.to_bits());
        assert_eq!(a.best_params, b.best_params);
    }

    #[test]
    fn warm_start_never_hurts() {
        let mut problem = OptProblem::new(
            SweepKind::Cubic,
            0.8,
            48,
            KerrConvention::NPlus1Sq,
            6,
            7,
            2,
        );
        let without = optimize_point(
            &{
                let mut p = problem.clone();
                p.n_starts -= 1;
                p
            },
            None,
        )
        .unwrap();
        problem.n_starts = 6;
        let warm = vec![0.9, 0.1, -0.2, 1.2];
        let with = optimize_point(&problem, Some(&warm)).unwrap();
        assert!(with.objective <= without.objective + 1e-12);
    }

    #[test]
    fn cubic_canonicalization_is_exact() {
        let space = FockSpace::get(48).unwrap();
        let zeta = space
            .apply_kerr(
                0.4,
                KerrConvention::NPlus1Sq,
                &space.coherent(0.9).unwrap(),
            )
            .unwrap();
        let raw = [0.4, -0.8, 0.7, -1.3]; // chi, phi, beta, g with g < 0
        let canon = canonicalize_params(SweepKind::Cubic, &raw);
        assert!(canon[3] > 0.0);
        let v_raw = v3_objective(&space, &zeta, raw[3], raw[1], raw[2]).unwrap();
        let v_canon = v3_objective(&space, &zeta, canon[3], canon[1], canon[2]).unwrap();
        assert_abs_diff_eq!(v_raw, v_canon, epsilon = 1e-12);
    }

    #[test]
    fn quartic_canonicalization_is_exact() {
        let space = FockSpace::get(64).unwrap();
        let sq = space.apply_squeeze(0.5, &space.vacuum()).unwrap();
        let raw = [0.2, 2.0, -1.1, -2.5]; // chi, phi1, omega, phi2
        let canon = canonicalize_params(SweepKind::Quartic, &raw);
        assert!(canon[2] > 0.0);
        assert!(canon[0] >= PI / 4.0);
        let conv = KerrConvention::NPlus1Sq;
        let zeta_raw = space.apply_kerr(raw[0], conv, &sq).unwrap();
        let v_raw = v4_objective(&space, &zeta_raw, raw[2], raw[1], raw[3]).unwrap();
        let zeta_canon = space.apply_kerr(canon[0], conv, &sq).unwrap();
        let v_canon = v4_objective(&space, &zeta_canon, canon[2], canon[1], canon[3]).unwrap();
        assert_abs_diff_eq!(v_raw, v_canon, epsilon = 1e-10);
    }

    #[test]
    fn sweep_rejects_bad_grid() {
        let config = SweepConfig::new(48, KerrConvention::NPlus1Sq, 2, 1);
        assert!(sweep(SweepKind::Linear, &[], &config).is_err());
        assert!(sweep(SweepKind::Linear, &[0.5, 0.4], &config).is_err());
    }
}
