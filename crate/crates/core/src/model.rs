//! Asset log-price paths driven by the thinned Hawkes jump process.
//!
//! The log-price has an explicit solution: drift, Brownian part, the sum of
//! jump-map values over accepted jumps, minus the compensator
//! `int_0^t (e^{J_s} - 1) lambda(s) ds`. Between jumps the intensity is a
//! single decaying exponential, so the compensator reduces to weighted
//! moments of `(e^{J_s} - 1)` that we evaluate once per grid cell and
//! reuse across paths.

use crate::error::SimError;
use crate::hawkes::{thin, BaseConfiguration, HawkesParams, HawkesRealization};
use crate::quad::integrate;

/// Absolute tolerance for compensator and kernel quadrature.
pub(crate) const QUAD_TOL: f64 = 1e-10;

/// Deterministic jump map `t -> J_t`.
///
/// `Linear` is the default model (`J_t = gamma * t`); `Zero` disables the
/// jump channel entirely, which is useful as a diffusion-only control but
/// makes jump-weight estimators degenerate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JumpFn {
    Zero,
    Linear { gamma: f64 },
}

impl JumpFn {
    pub fn value(&self, t: f64) -> f64 {
        match self {
            JumpFn::Zero => 0.0,
            JumpFn::Linear { gamma } => gamma * t,
        }
    }

    /// True when the jump map never moves the price.
    pub fn is_degenerate(&self) -> bool {
        matches!(self, JumpFn::Zero)
    }
}

/// Which terminal value an option reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptionKind {
    European,
    Asian,
}

impl OptionKind {
    pub fn terminal(&self, path: &PathRealization) -> f64 {
        match self {
            OptionKind::European => path.terminal_price(),
            OptionKind::Asian => path.asian,
        }
    }
}

/// Call payoff `(x - K)^+`.
pub fn call_payoff(terminal: f64, strike: f64) -> f64 {
    (terminal - strike).max(0.0)
}

/// Static model coefficients for the asset dynamics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub mu: f64,
    pub sigma: f64,
    pub s0: f64,
    pub jump_fn: JumpFn,
    pub horizon: f64,
}

impl ModelParams {
    pub fn new(mu: f64, sigma: f64, s0: f64, jump_fn: JumpFn, horizon: f64) -> Result<Self, SimError> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(SimError::invalid("sigma", format!("must be > 0, got {sigma}")));
        }
        if !(s0 > 0.0) || !s0.is_finite() {
            return Err(SimError::invalid("s0", format!("must be > 0, got {s0}")));
        }
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(SimError::invalid("horizon", format!("must be > 0, got {horizon}")));
        }
        if !mu.is_finite() {
            return Err(SimError::invalid("mu", format!("must be finite, got {mu}")));
        }
        if let JumpFn::Linear { gamma } = jump_fn {
            if !(gamma > 0.0) || !gamma.is_finite() {
                return Err(SimError::invalid(
                    "gamma",
                    format!("linear jump map needs gamma > 0, got {gamma}; use jump_fn=zero to disable jumps"),
                ));
            }
        }
        Ok(Self { mu, sigma, s0, jump_fn, horizon })
    }
}

/// Per-run tables of the jump-map moments
/// `M0(a,b) = int_a^b (e^{J_s} - 1) ds` and
/// `M1(a,b) = int_a^b (e^{J_s} - 1) e^{-beta s} ds`
/// over the uniform grid, plus suffix sums for tail integrals. Everything
/// here is deterministic given `(jump map, beta, grid)` and shared across
/// paths.
#[derive(Debug, Clone)]
pub struct KernelTable {
    pub grid: Vec<f64>,
    pub dt: f64,
    m0_cell: Vec<f64>,
    m1_cell: Vec<f64>,
    /// `m0_suffix[j] = M0(t_j, T)`.
    m0_suffix: Vec<f64>,
    /// `m1_suffix[j] = M1(t_j, T)`.
    m1_suffix: Vec<f64>,
    beta: f64,
    jump_fn: JumpFn,
    pub horizon: f64,
}

impl KernelTable {
    pub fn new(model: &ModelParams, params: &HawkesParams, grid_n: usize) -> Self {
        let n = grid_n.max(1);
        let horizon = model.horizon;
        let dt = horizon / n as f64;
        let grid: Vec<f64> = (0..=n).map(|j| dt * j as f64).collect();
        let jump_fn = model.jump_fn;
        let beta = params.beta();
        let integrand0 = |s: f64| (jump_fn.value(s)).exp() - 1.0;
        let integrand1 = |s: f64| ((jump_fn.value(s)).exp() - 1.0) * (-beta * s).exp();
        let m0_cell: Vec<f64> = (0..n)
            .map(|j| integrate(integrand0, grid[j], grid[j + 1], QUAD_TOL))
            .collect();
        let m1_cell: Vec<f64> = (0..n)
            .map(|j| integrate(integrand1, grid[j], grid[j + 1], QUAD_TOL))
            .collect();
        let mut m0_suffix = vec![0.0; n + 1];
        let mut m1_suffix = vec![0.0; n + 1];
        for j in (0..n).rev() {
            m0_suffix[j] = m0_suffix[j + 1] + m0_cell[j];
            m1_suffix[j] = m1_suffix[j + 1] + m1_cell[j];
        }
        Self {
            grid,
            dt,
            m0_cell,
            m1_cell,
            m0_suffix,
            m1_suffix,
            beta,
            jump_fn,
            horizon,
        }
    }

    pub fn grid_n(&self) -> usize {
        self.m0_cell.len()
    }

    pub fn jump_fn(&self) -> JumpFn {
        self.jump_fn
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `M0(a, b)` for arbitrary bounds.
    pub fn m0(&self, a: f64, b: f64) -> f64 {
        if self.jump_fn.is_degenerate() || b <= a {
            return 0.0;
        }
        let jump_fn = self.jump_fn;
        integrate(|s| jump_fn.value(s).exp() - 1.0, a, b, QUAD_TOL)
    }

    /// `M1(a, b)` for arbitrary bounds.
    pub fn m1(&self, a: f64, b: f64) -> f64 {
        if self.jump_fn.is_degenerate() || b <= a {
            return 0.0;
        }
        let jump_fn = self.jump_fn;
        let beta = self.beta;
        integrate(
            |s| (jump_fn.value(s).exp() - 1.0) * (-beta * s).exp(),
            a,
            b,
            QUAD_TOL,
        )
    }

    /// `M1(v, T)` using the precomputed suffix where possible.
    pub fn m1_tail(&self, v: f64) -> f64 {
        if self.jump_fn.is_degenerate() || v >= self.horizon {
            return 0.0;
        }
        let j = ((v / self.dt) as usize).min(self.grid_n() - 1);
        let cell_end = self.grid[j + 1];
        if v <= self.grid[j] {
            // v is a grid point (or below due to rounding).
            self.m1_suffix[j] + self.m1(v, self.grid[j])
        } else {
            self.m1(v, cell_end) + self.m1_suffix[j + 1]
        }
    }

    /// `M0(v, T)` using the precomputed suffix where possible.
    pub fn m0_tail(&self, v: f64) -> f64 {
        if self.jump_fn.is_degenerate() || v >= self.horizon {
            return 0.0;
        }
        let j = ((v / self.dt) as usize).min(self.grid_n() - 1);
        let cell_end = self.grid[j + 1];
        if v <= self.grid[j] {
            self.m0_suffix[j] + self.m0(v, self.grid[j])
        } else {
            self.m0(v, cell_end) + self.m0_suffix[j + 1]
        }
    }

    pub(crate) fn m0_cell(&self, j: usize) -> f64 {
        self.m0_cell[j]
    }

    pub(crate) fn m1_cell(&self, j: usize) -> f64 {
        self.m1_cell[j]
    }
}

/// Compensator increment `int_a^b (e^{J_s} - 1) lambda(s) ds` on an interval
/// that lies inside one inter-jump segment, where
/// `lambda(s) = lambda0 + (seg_lam - lambda0) e^{-beta (s - seg_t)}`.
pub(crate) fn segment_compensator(
    table: &KernelTable,
    lambda0: f64,
    seg_t: f64,
    seg_lam: f64,
    a: f64,
    b: f64,
    full_cell: Option<usize>,
) -> f64 {
    let (m0, m1) = match full_cell {
        Some(j) => (table.m0_cell(j), table.m1_cell(j)),
        None => (table.m0(a, b), table.m1(a, b)),
    };
    lambda0 * m0 + (seg_lam - lambda0) * (table.beta * seg_t).exp() * m1
}

/// One accepted jump on a simulated path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpMark {
    /// Index into the base configuration's candidate list.
    pub candidate: usize,
    pub t: f64,
    pub x_before: f64,
    pub x_after: f64,
}

impl JumpMark {
    /// Relative price jump `e^{J_t} - 1`.
    pub fn relative_size(&self) -> f64 {
        (self.x_after - self.x_before).exp() - 1.0
    }
}

/// Log-price and price along one path, on the grid and at jump times.
#[derive(Debug, Clone, PartialEq)]
pub struct PathRealization {
    pub grid: Vec<f64>,
    /// Log-price at grid points (jumps at or before a grid time included).
    pub x: Vec<f64>,
    /// Price `s0 * exp(x)` at grid points.
    pub s: Vec<f64>,
    pub jumps: Vec<JumpMark>,
    /// Time average of the price, with every jump time splitting a
    /// quadrature cell.
    pub asian: f64,
    /// Left-limit intensity at grid points.
    pub lambda_grid: Vec<f64>,
    pub s0: f64,
}

impl PathRealization {
    pub fn terminal_price(&self) -> f64 {
        *self.s.last().expect("non-empty grid")
    }

    pub fn terminal_log(&self) -> f64 {
        *self.x.last().expect("non-empty grid")
    }

    /// Time-average of the price by trapezoid quadrature with jump times as
    /// cell boundaries (left/right limits on each side of a jump).
    pub fn asian_average(&self) -> f64 {
        let horizon = *self.grid.last().expect("non-empty grid");
        // Events carry (time, value just before, value just after).
        let mut events: Vec<(f64, f64, f64)> = self
            .grid
            .iter()
            .zip(&self.s)
            .map(|(&t, &s)| (t, s, s))
            .collect();
        for j in &self.jumps {
            events.push((
                j.t,
                self.s0 * j.x_before.exp(),
                self.s0 * j.x_after.exp(),
            ));
        }
        events.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut sum = 0.0;
        for pair in events.windows(2) {
            let (t0, _, right0) = pair[0];
            let (t1, left1, _) = pair[1];
            sum += 0.5 * (right0 + left1) * (t1 - t0);
        }
        sum / horizon
    }
}

/// Simulate the exact-in-distribution path for a base configuration.
///
/// Thinning runs first; an overflowed realization is reported as an error so
/// the caller can resample the configuration with a taller strip.
pub fn simulate_path(
    model: &ModelParams,
    params: &HawkesParams,
    base: &BaseConfiguration,
) -> Result<PathRealization, SimError> {
    let real = thin(base, params);
    if real.overflow_flag {
        return Err(SimError::StripOverflow {
            at: real.intensity_knots.last().map(|&(t, _)| t).unwrap_or(0.0),
            strip_height: base.strip_height,
        });
    }
    let table = KernelTable::new(model, params, base.grid_n());
    Ok(simulate_on(model, params, base, &real, &table))
}

/// Path construction for an already-thinned realization (shared by the
/// perturbation routines, which re-simulate on modified jump sets).
pub fn simulate_on(
    model: &ModelParams,
    params: &HawkesParams,
    base: &BaseConfiguration,
    real: &HawkesRealization,
    table: &KernelTable,
) -> PathRealization {
    let n = base.grid_n();
    assert!(n >= 1, "grid must have at least one cell");
    let grid = &table.grid;
    let lambda0 = params.lambda0();
    let drift = model.mu - 0.5 * model.sigma * model.sigma;

    let w_grid = base.w_grid();

    let mut x = Vec::with_capacity(n + 1);
    let mut jumps = Vec::with_capacity(real.accepted.len());
    x.push(0.0);

    let mut comp = 0.0; // compensator integral up to the sweep position
    let mut jump_sum = 0.0;
    let mut seg_t = 0.0;
    let mut seg_lam = lambda0;
    let mut next_jump = 0usize;

    for j in 0..n {
        let cell_start = grid[j];
        let cell_end = grid[j + 1];
        let mut a = cell_start;
        let mut whole_cell = true;
        while next_jump < real.accepted.len() {
            let (tj, lam_after) = real.intensity_knots[next_jump];
            if tj > cell_end {
                break;
            }
            comp += segment_compensator(table, lambda0, seg_t, seg_lam, a, tj, None);
            let cand = real.accepted[next_jump];
            let w_t = base.candidates[cand].w;
            let x_before = drift * tj + model.sigma * w_t + jump_sum - comp;
            let x_after = x_before + model.jump_fn.value(tj);
            jumps.push(JumpMark {
                candidate: cand,
                t: tj,
                x_before,
                x_after,
            });
            jump_sum += model.jump_fn.value(tj);
            seg_t = tj;
            seg_lam = lam_after;
            a = tj;
            whole_cell = false;
            next_jump += 1;
        }
        let full = if whole_cell { Some(j) } else { None };
        comp += segment_compensator(table, lambda0, seg_t, seg_lam, a, cell_end, full);
        x.push(drift * cell_end + model.sigma * w_grid[j + 1] + jump_sum - comp);
    }

    let s: Vec<f64> = x.iter().map(|&xv| model.s0 * xv.exp()).collect();
    let lambda_grid: Vec<f64> = grid.iter().map(|&t| real.intensity_left(t)).collect();

    let mut path = PathRealization {
        grid: grid.clone(),
        x,
        s,
        jumps,
        asian: 0.0,
        lambda_grid,
        s0: model.s0,
    };
    path.asian = path.asian_average();
    path
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hawkes::{sample_base, Candidate, StreamId};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn sec6_model() -> ModelParams {
        ModelParams::new(0.05, 0.10, 5.0, JumpFn::Linear { gamma: 0.2 }, 1.0).unwrap()
    }

    fn sec6_params() -> HawkesParams {
        HawkesParams::new(1.0, 0.3, 0.8).unwrap()
    }

    fn empty_base(grid_n: usize) -> BaseConfiguration {
        BaseConfiguration::new(
            1.0,
            4.0,
            vec![],
            vec![0.0; grid_n],
            StreamId { seed: 0, path: 0, attempt: 0 },
        )
        .unwrap()
    }

    #[test]
    fn model_validation() {
        assert!(ModelParams::new(0.05, 0.0, 5.0, JumpFn::Zero, 1.0).is_err());
        assert!(ModelParams::new(0.05, 0.1, 0.0, JumpFn::Zero, 1.0).is_err());
        assert!(ModelParams::new(0.05, 0.1, 5.0, JumpFn::Linear { gamma: 0.0 }, 1.0).is_err());
        assert!(ModelParams::new(0.05, 0.1, 5.0, JumpFn::Linear { gamma: -0.2 }, 1.0).is_err());
    }

    #[test]
    fn payoff_examples() {
        assert_eq!(call_payoff(6.0, 5.0), 1.0);
        assert_eq!(call_payoff(4.0, 5.0), 0.0);
        assert_eq!(call_payoff(5.0, 5.0), 0.0);
    }

    #[test]
    fn deterministic_growth_without_jumps() {
        // Vanishing volatility, zero jump map, no candidates: pure
        // exponential growth at rate mu.
        let model = ModelParams::new(0.05, 1e-12, 5.0, JumpFn::Zero, 1.0).unwrap();
        let params = sec6_params();
        let path = simulate_path(&model, &params, &empty_base(100)).unwrap();
        for (j, &t) in path.grid.iter().enumerate() {
            assert_abs_diff_eq!(path.x[j], 0.05 * t, epsilon = 1e-9);
            assert_relative_eq!(path.s[j], 5.0 * (0.05 * t).exp(), max_relative = 1e-9);
        }
    }

    #[test]
    fn no_jump_path_matches_independent_quadrature() {
        // With an empty jump set the compensator is
        // -lambda0 * int_0^t (e^{J_s} - 1) ds; cross-check against a direct
        // quadrature of the integrand.
        let model = sec6_model();
        let params = sec6_params();
        let mut base = empty_base(50);
        // Real Brownian increments, no candidates.
        let sampled = sample_base(&params, 1.0, 4.0, 50, 77, 0, 0);
        base.dw = sampled.dw.clone();
        let path = simulate_path(&model, &params, &base).unwrap();
        let w = base.w_grid();
        for (j, &t) in path.grid.iter().enumerate() {
            let comp = integrate(|s| ((0.2 * s) as f64).exp() - 1.0, 0.0, t, 1e-12);
            let expect = (0.05 - 0.005) * t + 0.1 * w[j] - comp;
            assert_abs_diff_eq!(path.x[j], expect, epsilon = 1e-9);
        }
    }

    #[test]
    fn martingale_growth_of_terminal_price() {
        // Compensated dynamics: E[S_T] = s0 e^{mu T}.
        let model = sec6_model();
        let params = sec6_params();
        let n_paths: u64 = 20_000;
        let table = KernelTable::new(&model, &params, 100);
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for p in 0..n_paths {
            let base = sample_base(&params, 1.0, 4.0, 100, 1234, p, 0);
            let real = thin(&base, &params);
            assert!(!real.overflow_flag);
            let st = simulate_on(&model, &params, &base, &real, &table).terminal_price();
            sum += st;
            sumsq += st * st;
        }
        let mean = sum / n_paths as f64;
        let var = (sumsq / n_paths as f64 - mean * mean).max(0.0);
        let stderr = (var / n_paths as f64).sqrt();
        let expect = 5.0 * (0.05f64).exp();
        assert!(
            (mean - expect).abs() < 3.0 * stderr,
            "mean {mean} vs {expect} (stderr {stderr})"
        );
    }

    #[test]
    fn risk_neutral_growth_along_the_path() {
        let model = sec6_model();
        let params = sec6_params();
        let n_paths: u64 = 20_000;
        let table = KernelTable::new(&model, &params, 100);
        for &(idx, t) in &[(50usize, 0.5f64), (100usize, 1.0)] {
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            for p in 0..n_paths {
                let base = sample_base(&params, 1.0, 4.0, 100, 4321, p, 0);
                let real = thin(&base, &params);
                let path = simulate_on(&model, &params, &base, &real, &table);
                let ratio = path.s[idx] / (5.0 * (0.05 * t).exp());
                sum += ratio;
                sumsq += ratio * ratio;
            }
            let mean = sum / n_paths as f64;
            let var = (sumsq / n_paths as f64 - mean * mean).max(0.0);
            let stderr = (var / n_paths as f64).sqrt();
            assert!((mean - 1.0).abs() < 3.0 * stderr, "t={t}: mean {mean}");
        }
    }

    #[test]
    fn log_jump_additivity_and_positivity() {
        let model = sec6_model();
        let params = sec6_params();
        let table = KernelTable::new(&model, &params, 100);
        for p in 0..100 {
            let base = sample_base(&params, 1.0, 4.0, 100, 555, p, 0);
            let real = thin(&base, &params);
            let path = simulate_on(&model, &params, &base, &real, &table);
            for s in &path.s {
                assert!(*s > 0.0);
            }
            for jm in &path.jumps {
                assert_abs_diff_eq!(jm.x_after - jm.x_before, 0.2 * jm.t, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn asian_of_constant_path_is_the_constant() {
        let n = 10;
        let grid: Vec<f64> = (0..=n).map(|j| j as f64 / n as f64).collect();
        let path = PathRealization {
            grid: grid.clone(),
            x: vec![0.0; n + 1],
            s: vec![3.5; n + 1],
            jumps: vec![],
            asian: 0.0,
            lambda_grid: vec![1.0; n + 1],
            s0: 3.5,
        };
        assert_abs_diff_eq!(path.asian_average(), 3.5, epsilon = 1e-15);
    }

    #[test]
    fn asian_of_deterministic_exponential() {
        let model = ModelParams::new(0.05, 1e-12, 5.0, JumpFn::Zero, 1.0).unwrap();
        let params = sec6_params();
        let path = simulate_path(&model, &params, &empty_base(10_000)).unwrap();
        let expect = 5.0 / 0.05 * ((0.05f64).exp() - 1.0);
        assert_relative_eq!(path.asian, expect, max_relative = 1e-6);
    }

    #[test]
    fn asian_splits_jump_cells() {
        // Hand-built piecewise exponential with one jump off the grid:
        // S_t = 5 e^{c t} before, scaled by rho after. The average is the
        // sum of the two closed-form segment integrals.
        let n = 100usize;
        let c = 0.05;
        let rho: f64 = 1.21;
        let t_jump = 0.4037;
        let grid: Vec<f64> = (0..=n).map(|j| j as f64 / n as f64).collect();
        let x: Vec<f64> = grid
            .iter()
            .map(|&t| {
                if t < t_jump {
                    c * t
                } else {
                    c * t + rho.ln()
                }
            })
            .collect();
        let s: Vec<f64> = x.iter().map(|&xv| 5.0 * xv.exp()).collect();
        let path = PathRealization {
            grid,
            x: x.clone(),
            s,
            jumps: vec![JumpMark {
                candidate: 0,
                t: t_jump,
                x_before: c * t_jump,
                x_after: c * t_jump + rho.ln(),
            }],
            asian: 0.0,
            lambda_grid: vec![1.0; n + 1],
            s0: 5.0,
        };
        let seg = |a: f64, b: f64, scale: f64| scale * 5.0 / c * ((c * b).exp() - (c * a).exp());
        let exact = seg(0.0, t_jump, 1.0) + seg(t_jump, 1.0, rho);
        // Trapezoid error O(1/n^2) on each smooth piece.
        assert_abs_diff_eq!(path.asian_average(), exact, epsilon = 5e-4);
        // Refining the grid shrinks the error.
        let n2 = 200usize;
        let grid2: Vec<f64> = (0..=n2).map(|j| j as f64 / n2 as f64).collect();
        let x2: Vec<f64> = grid2
            .iter()
            .map(|&t| if t < t_jump { c * t } else { c * t + rho.ln() })
            .collect();
        let s2: Vec<f64> = x2.iter().map(|&xv| 5.0 * xv.exp()).collect();
        let path2 = PathRealization {
            grid: grid2,
            x: x2,
            s: s2,
            jumps: path.jumps.clone(),
            asian: 0.0,
            lambda_grid: vec![],
            s0: 5.0,
        };
        let e1 = (path.asian_average() - exact).abs();
        let e2 = (path2.asian_average() - exact).abs();
        assert!(e2 < e1, "refinement should reduce error: {e1} -> {e2}");
        assert!(e1 < 1.0 / n as f64);
    }

    #[test]
    fn kernel_table_tail_matches_direct_quadrature() {
        let model = sec6_model();
        let params = sec6_params();
        let table = KernelTable::new(&model, &params, 100);
        for &v in &[0.0, 0.13, 0.5, 0.777, 0.99, 1.0] {
            let direct = integrate(
                |s| ((0.2 * s).exp() - 1.0) * (-0.8 * s).exp(),
                v,
                1.0,
                1e-13,
            );
            assert_abs_diff_eq!(table.m1_tail(v), direct, epsilon = 1e-9);
        }
    }

    #[test]
    fn jump_at_candidate_uses_bridged_brownian_value() {
        // One accepted candidate with a nonzero bridged Brownian value: the
        // pre-jump log-price must use it.
        let model = sec6_model();
        let params = sec6_params();
        let t1 = 0.35;
        let base = BaseConfiguration::new(
            1.0,
            4.0,
            vec![Candidate { t: t1, z: 0.5, w: 0.7 }],
            vec![0.1; 10],
            StreamId { seed: 0, path: 0, attempt: 0 },
        )
        .unwrap();
        let path = simulate_path(&model, &params, &base).unwrap();
        assert_eq!(path.jumps.len(), 1);
        let comp = integrate(|s| (0.2 * s).exp() - 1.0, 0.0, t1, 1e-12);
        let expect = (0.05 - 0.005) * t1 + 0.1 * 0.7 - comp;
        assert_abs_diff_eq!(path.jumps[0].x_before, expect, epsilon = 1e-9);
    }
}
