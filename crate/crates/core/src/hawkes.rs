//! Hawkes process realization by thinning a dominating Poisson measure.
//!
//! The dominating measure lives on the strip `(0, T) x (0, strip_height]`.
//! A base configuration holds its realized points together with the
//! Brownian increments of the diffusion; thinning sweeps the points in time
//! order and accepts `(t, z)` when `z` lies below the current intensity.
//! Keeping the rejected points around is deliberate: perturbation routines
//! re-thin the same configuration after adding or removing a single point.

use crate::error::SimError;
use crate::rng::{stream, Purpose};
use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};

/// Static Hawkes intensity coefficients.
///
/// The intensity decays at rate `beta` toward `lambda0` and jumps by
/// `alpha` at every accepted point. Construction enforces the stability
/// condition `alpha < beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HawkesParams {
    lambda0: f64,
    alpha: f64,
    beta: f64,
}

impl HawkesParams {
    pub fn new(lambda0: f64, alpha: f64, beta: f64) -> Result<Self, SimError> {
        if !(lambda0 > 0.0) || !lambda0.is_finite() {
            return Err(SimError::invalid("lambda0", format!("must be > 0, got {lambda0}")));
        }
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(SimError::invalid("alpha", format!("must be >= 0, got {alpha}")));
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(SimError::invalid("beta", format!("must be > 0, got {beta}")));
        }
        if alpha >= beta {
            return Err(SimError::invalid(
                "alpha",
                format!("stability violated: alpha={alpha} must be < beta={beta}"),
            ));
        }
        Ok(Self { lambda0, alpha, beta })
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Initial strip height: enough headroom that add-one-point cascades
    /// almost never spill over; the estimator doubles it on overflow.
    pub fn default_strip_height(&self) -> f64 {
        (4.0 * self.lambda0).max(self.lambda0 + 10.0 * self.alpha)
    }

    /// Expected intensity `m(t)`, the solution of
    /// `m' = beta*lambda0 + (alpha - beta) m`, `m(0) = lambda0`.
    pub fn mean_intensity(&self, t: f64) -> f64 {
        let d = self.beta - self.alpha;
        self.lambda0 * (self.beta - self.alpha * ((-d) * t).exp()) / d
    }

    /// Closed form of `int_0^t m(s) ds`.
    pub fn mean_intensity_integral(&self, t: f64) -> f64 {
        let d = self.beta - self.alpha;
        self.lambda0 / d * (self.beta * t + self.alpha * (((-d) * t).exp() - 1.0) / d)
    }
}

/// Identifies the RNG streams a configuration was drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamId {
    pub seed: u64,
    pub path: u64,
    pub attempt: u32,
}

/// One realized point of the dominating measure, with the Brownian value
/// bridged at its time (so perturbations never need new Brownian draws).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub t: f64,
    pub z: f64,
    pub w: f64,
}

/// Realized base Poisson points plus Brownian increments: the sample-path
/// "omega" that all perturbations share.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseConfiguration {
    pub horizon: f64,
    pub strip_height: f64,
    /// Sorted strictly by `t`.
    pub candidates: Vec<Candidate>,
    /// Brownian increments per uniform grid cell; `dw.len()` is the grid size.
    pub dw: Vec<f64>,
    pub seed_id: StreamId,
}

impl BaseConfiguration {
    /// Validating constructor for hand-built configurations.
    pub fn new(
        horizon: f64,
        strip_height: f64,
        candidates: Vec<Candidate>,
        dw: Vec<f64>,
        seed_id: StreamId,
    ) -> Result<Self, SimError> {
        if !(horizon >= 0.0) {
            return Err(SimError::invalid("horizon", format!("must be >= 0, got {horizon}")));
        }
        if !(strip_height > 0.0) {
            return Err(SimError::invalid(
                "strip_height",
                format!("must be > 0, got {strip_height}"),
            ));
        }
        for pair in candidates.windows(2) {
            if !(pair[0].t < pair[1].t) {
                return Err(SimError::invalid(
                    "candidates",
                    format!("times must be strictly increasing, got {} then {}", pair[0].t, pair[1].t),
                ));
            }
        }
        for c in &candidates {
            if !(c.t > 0.0 && c.t < horizon) {
                return Err(SimError::invalid("candidates", format!("time {} outside (0, {horizon})", c.t)));
            }
            if !(c.z > 0.0 && c.z <= strip_height) {
                return Err(SimError::invalid("candidates", format!("mark {} outside (0, {strip_height}]", c.z)));
            }
        }
        Ok(Self {
            horizon,
            strip_height,
            candidates,
            dw,
            seed_id,
        })
    }

    pub fn grid_n(&self) -> usize {
        self.dw.len()
    }

    /// Brownian values on the grid, `W(t_0)=0, ..., W(t_n)`.
    pub fn w_grid(&self) -> Vec<f64> {
        let mut w = Vec::with_capacity(self.dw.len() + 1);
        let mut acc = 0.0;
        w.push(0.0);
        for &d in &self.dw {
            acc += d;
            w.push(acc);
        }
        w
    }

    /// Configuration with candidate `index` removed (shared Brownian data).
    pub fn without_candidate(&self, index: usize) -> BaseConfiguration {
        let mut candidates = self.candidates.clone();
        candidates.remove(index);
        BaseConfiguration {
            candidates,
            dw: self.dw.clone(),
            ..*self
        }
    }

    /// Same increments summed onto a coarser grid. `n` must divide the
    /// current grid size; candidate bridge values stay attached to the
    /// original fine-grid conditioning.
    pub fn coarsen(&self, n: usize) -> Result<BaseConfiguration, SimError> {
        let fine = self.grid_n();
        if n == 0 || fine % n != 0 {
            return Err(SimError::invalid(
                "grid",
                format!("coarse grid {n} must divide fine grid {fine}"),
            ));
        }
        let block = fine / n;
        let dw = self
            .dw
            .chunks(block)
            .map(|c| c.iter().sum::<f64>())
            .collect();
        Ok(BaseConfiguration {
            candidates: self.candidates.clone(),
            dw,
            ..*self
        })
    }
}

/// Draw a base configuration on the strip `(0, horizon) x (0, strip_height]`.
///
/// The candidate count is Poisson with mean `strip_height * horizon`; times
/// and marks are uniform and independent. Brownian increments are attached
/// to the uniform grid of size `grid_n`, and each candidate gets a bridged
/// Brownian value conditioned on the grid (candidates within one cell are
/// bridged sequentially).
pub fn sample_base(
    params: &HawkesParams,
    horizon: f64,
    strip_height: f64,
    grid_n: usize,
    seed: u64,
    path: u64,
    attempt: u32,
) -> BaseConfiguration {
    debug_assert!(strip_height > params.lambda0());
    let seed_id = StreamId { seed, path, attempt };

    let mut pts = stream(seed, path, Purpose::BasePoints, attempt);
    let area = strip_height * horizon;
    let mut candidates: Vec<Candidate> = Vec::new();
    if area > 0.0 {
        loop {
            let count = Poisson::new(area).expect("positive area").sample(&mut pts) as usize;
            candidates.clear();
            candidates.reserve(count);
            for _ in 0..count {
                let mut u: f64 = pts.gen();
                while u == 0.0 {
                    u = pts.gen();
                }
                let t = u * horizon;
                let z = strip_height * (1.0 - pts.gen::<f64>());
                candidates.push(Candidate { t, z, w: 0.0 });
            }
            candidates.sort_by(|a, b| a.t.total_cmp(&b.t));
            // Ties have probability zero; redraw the set on the off chance.
            if candidates.windows(2).all(|p| p[0].t < p[1].t) {
                break;
            }
        }
    }

    let mut brw = stream(seed, path, Purpose::Brownian, attempt);
    let dt = if grid_n > 0 { horizon / grid_n as f64 } else { 0.0 };
    let dw: Vec<f64> = (0..grid_n)
        .map(|_| {
            let g: f64 = StandardNormal.sample(&mut brw);
            g * dt.sqrt()
        })
        .collect();

    // Bridge a Brownian value onto every candidate, conditioning within
    // each grid cell sequentially in time order.
    let mut bridge = stream(seed, path, Purpose::Bridge, attempt);
    if grid_n > 0 && !candidates.is_empty() {
        let w_grid: Vec<f64> = {
            let mut acc = 0.0;
            let mut w = vec![0.0];
            for &d in &dw {
                acc += d;
                w.push(acc);
            }
            w
        };
        let mut cell = 0usize;
        let mut anchor_t = 0.0;
        let mut anchor_w = 0.0;
        for c in candidates.iter_mut() {
            let j = ((c.t / dt) as usize).min(grid_n - 1);
            if j != cell || c.t < anchor_t {
                cell = j;
                anchor_t = dt * j as f64;
                anchor_w = w_grid[j];
            }
            let right_t = dt * (j + 1) as f64;
            let right_w = w_grid[j + 1];
            let span = right_t - anchor_t;
            let mean = anchor_w + (c.t - anchor_t) / span * (right_w - anchor_w);
            let var = (c.t - anchor_t) * (right_t - c.t) / span;
            let g: f64 = StandardNormal.sample(&mut bridge);
            c.w = mean + var.max(0.0).sqrt() * g;
            anchor_t = c.t;
            anchor_w = c.w;
        }
    }

    BaseConfiguration {
        horizon,
        strip_height,
        candidates,
        dw,
        seed_id,
    }
}

/// Thinned jump set plus everything needed to evaluate the intensity
/// exactly at any time.
#[derive(Debug, Clone, PartialEq)]
pub struct HawkesRealization {
    params: HawkesParams,
    horizon: f64,
    /// Indices into the base configuration's candidate list.
    pub accepted: Vec<usize>,
    /// `(jump time, intensity just after the jump)` per accepted point.
    pub intensity_knots: Vec<(f64, f64)>,
    /// True when the post-jump intensity ever exceeded the strip height;
    /// such realizations must be resampled, not used for estimation.
    pub overflow_flag: bool,
}

impl HawkesRealization {
    pub fn params(&self) -> &HawkesParams {
        &self.params
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn jump_count(&self) -> usize {
        self.accepted.len()
    }

    /// Jump times in increasing order.
    pub fn jump_times(&self) -> impl Iterator<Item = f64> + '_ {
        self.intensity_knots.iter().map(|&(t, _)| t)
    }

    /// Exact intensity at `t` with the left-limit convention: the jump at
    /// `t` itself, if any, is excluded.
    pub fn intensity_at(&self, t: f64) -> Result<f64, SimError> {
        if !(0.0..=self.horizon).contains(&t) {
            return Err(SimError::OutOfRange { t, horizon: self.horizon });
        }
        Ok(self.intensity_left(t))
    }

    pub(crate) fn intensity_left(&self, t: f64) -> f64 {
        let lambda0 = self.params.lambda0;
        // Last knot strictly before t.
        let k = self.intensity_knots.partition_point(|&(tk, _)| tk < t);
        if k == 0 {
            lambda0
        } else {
            let (tk, lam) = self.intensity_knots[k - 1];
            lambda0 + (lam - lambda0) * (-self.params.beta * (t - tk)).exp()
        }
    }

    /// Exact `int_a^b lambda(s) ds`: every accepted jump seeds one decaying
    /// exponential of size `alpha`, and the contributions superpose.
    pub fn intensity_integral(&self, a: f64, b: f64) -> f64 {
        debug_assert!(a <= b);
        let lambda0 = self.params.lambda0;
        let alpha = self.params.alpha;
        let beta = self.params.beta;
        let mut total = lambda0 * (b - a);
        for &(tk, _) in &self.intensity_knots {
            if tk >= b {
                break;
            }
            let lo = a.max(tk);
            total += alpha * ((-beta * (lo - tk)).exp() - (-beta * (b - tk)).exp()) / beta;
        }
        total
    }
}

/// Left-limit intensity from an explicit knot list, shared with the
/// perturbed thinning sweeps.
pub(crate) fn intensity_from_knots(params: &HawkesParams, knots: &[(f64, f64)], t: f64) -> f64 {
    let lambda0 = params.lambda0;
    let k = knots.partition_point(|&(tk, _)| tk < t);
    if k == 0 {
        lambda0
    } else {
        let (tk, lam) = knots[k - 1];
        lambda0 + (lam - lambda0) * (-params.beta * (t - tk)).exp()
    }
}

/// Sweep the candidates in time order, accepting `(t, z)` when `z` lies
/// below the intensity built from previously accepted points. Sets the
/// overflow flag when an accepted jump pushes the intensity above the strip.
pub fn thin(base: &BaseConfiguration, params: &HawkesParams) -> HawkesRealization {
    let mut real = HawkesRealization {
        params: *params,
        horizon: base.horizon,
        accepted: Vec::new(),
        intensity_knots: Vec::new(),
        overflow_flag: false,
    };
    for (i, c) in base.candidates.iter().enumerate() {
        let lam = real.intensity_left(c.t);
        if c.z <= lam {
            let after = lam + params.alpha();
            if after > base.strip_height {
                real.overflow_flag = true;
            }
            real.accepted.push(i);
            real.intensity_knots.push((c.t, after));
        }
    }
    real
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sec6_params() -> HawkesParams {
        HawkesParams::new(1.0, 0.3, 0.8).unwrap()
    }

    fn hand_base(horizon: f64, strip: f64, points: &[(f64, f64)]) -> BaseConfiguration {
        let candidates = points
            .iter()
            .map(|&(t, z)| Candidate { t, z, w: 0.0 })
            .collect();
        BaseConfiguration::new(
            horizon,
            strip,
            candidates,
            vec![0.0; 4],
            StreamId { seed: 0, path: 0, attempt: 0 },
        )
        .unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(HawkesParams::new(1.0, 0.3, 0.8).is_ok());
        assert!(HawkesParams::new(1.0, 0.8, 0.8).is_err());
        assert!(HawkesParams::new(1.0, 0.9, 0.8).is_err());
        assert!(HawkesParams::new(0.0, 0.1, 0.8).is_err());
        assert!(HawkesParams::new(1.0, -0.1, 0.8).is_err());
        assert!(HawkesParams::new(1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn candidate_count_matches_strip_area() {
        // strip 2 x horizon 1 => mean count 2.
        let params = HawkesParams::new(1.0, 0.0, 0.8).unwrap();
        let n_paths = 4000;
        let mut total = 0usize;
        for p in 0..n_paths {
            total += sample_base(&params, 1.0, 2.0, 8, 11, p, 0).candidates.len();
        }
        let mean = total as f64 / n_paths as f64;
        let stderr = (2.0 / n_paths as f64).sqrt();
        assert!((mean - 2.0).abs() < 3.0 * stderr, "mean {mean}");
    }

    #[test]
    fn zero_horizon_is_empty() {
        let params = sec6_params();
        let base = sample_base(&params, 0.0, 2.0, 0, 1, 0, 0);
        assert!(base.candidates.is_empty());
    }

    #[test]
    fn same_stream_is_bit_identical() {
        let params = sec6_params();
        let a = sample_base(&params, 1.0, 4.0, 100, 99, 7, 0);
        let b = sample_base(&params, 1.0, 4.0, 100, 99, 7, 0);
        assert_eq!(a, b);
        let c = sample_base(&params, 1.0, 4.0, 100, 99, 7, 1);
        assert_ne!(a, c);
    }

    #[test]
    fn empty_candidates_leave_baseline_intensity() {
        let params = sec6_params();
        let base = hand_base(1.0, 4.0, &[]);
        let real = thin(&base, &params);
        assert_eq!(real.jump_count(), 0);
        for &t in &[0.0, 0.3, 1.0] {
            assert_eq!(real.intensity_at(t).unwrap(), 1.0);
        }
    }

    #[test]
    fn alpha_zero_reduces_to_poisson() {
        // Accepted count should be Poisson(lambda0 * T).
        let params = HawkesParams::new(1.0, 0.0, 0.8).unwrap();
        let n_paths = 20_000;
        let mut total = 0usize;
        for p in 0..n_paths {
            let base = sample_base(&params, 1.0, 4.0, 4, 5, p, 0);
            total += thin(&base, &params).jump_count();
        }
        let mean = total as f64 / n_paths as f64;
        let stderr = (1.0 / n_paths as f64).sqrt();
        assert!((mean - 1.0).abs() < 3.0 * stderr, "mean {mean}");
    }

    #[test]
    fn single_accepted_candidate_decays_exponentially() {
        let params = sec6_params();
        let base = hand_base(2.0, 4.0, &[(0.5, 0.9)]);
        let real = thin(&base, &params);
        assert_eq!(real.accepted, vec![0]);
        for &t in &[0.6f64, 1.0, 1.7] {
            let expect = 1.0 + 0.3 * (-0.8 * (t - 0.5)).exp();
            assert_abs_diff_eq!(real.intensity_at(t).unwrap(), expect, epsilon = 1e-14);
        }
        // Left limit at the jump time itself.
        assert_eq!(real.intensity_at(0.5).unwrap(), 1.0);
    }

    #[test]
    fn intensity_kernel_example() {
        // One jump at 0.5, params (1, 0.3, 0.8), t = 1.0.
        let params = sec6_params();
        let base = hand_base(1.0, 4.0, &[(0.5, 0.2)]);
        let real = thin(&base, &params);
        assert_abs_diff_eq!(
            real.intensity_at(1.0).unwrap(),
            1.0 + 0.3 * (-0.4f64).exp(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn two_jumps_superpose() {
        let params = sec6_params();
        let both = thin(&hand_base(2.0, 4.0, &[(0.4, 0.1), (0.9, 0.2)]), &params);
        let first = thin(&hand_base(2.0, 4.0, &[(0.4, 0.1)]), &params);
        let second = thin(&hand_base(2.0, 4.0, &[(0.9, 0.2)]), &params);
        for &t in &[1.0, 1.4, 2.0] {
            let lhs = both.intensity_at(t).unwrap();
            let rhs = first.intensity_at(t).unwrap() + second.intensity_at(t).unwrap() - 1.0;
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-14);
        }
    }

    #[test]
    fn rethinning_is_idempotent() {
        let params = sec6_params();
        for p in 0..50 {
            let base = sample_base(&params, 1.0, 4.0, 50, 3, p, 0);
            let a = thin(&base, &params);
            let b = thin(&base, &params);
            assert_eq!(a.accepted, b.accepted);
        }
    }

    #[test]
    fn intensity_never_below_baseline() {
        let params = sec6_params();
        for p in 0..200 {
            let base = sample_base(&params, 1.0, 4.0, 20, 17, p, 0);
            let real = thin(&base, &params);
            for k in 0..=20 {
                let t = k as f64 / 20.0;
                assert!(real.intensity_at(t).unwrap() >= 1.0 - 1e-15);
            }
        }
    }

    #[test]
    fn overflow_flag_fires_on_small_strip() {
        let params = HawkesParams::new(1.0, 1.9, 2.0).unwrap();
        let base = hand_base(1.0, 2.0, &[(0.5, 0.5)]);
        let real = thin(&base, &params);
        assert!(real.overflow_flag);
    }

    #[test]
    fn out_of_range_query_errors() {
        let params = sec6_params();
        let real = thin(&hand_base(1.0, 4.0, &[]), &params);
        assert!(matches!(real.intensity_at(1.5), Err(SimError::OutOfRange { .. })));
        assert!(matches!(real.intensity_at(-0.1), Err(SimError::OutOfRange { .. })));
    }

    #[test]
    fn mean_intensity_boundary_cases() {
        let poisson = HawkesParams::new(1.3, 0.0, 0.8).unwrap();
        for &t in &[0.0, 0.5, 2.0] {
            assert_abs_diff_eq!(poisson.mean_intensity(t), 1.3, epsilon = 1e-14);
        }
        let params = sec6_params();
        assert_abs_diff_eq!(params.mean_intensity(0.0), 1.0, epsilon = 1e-14);
        // (beta - alpha e^{(alpha-beta) t}) / (beta - alpha) at t = 1.
        let expect = (0.8 - 0.3 * (-0.5f64).exp()) / 0.5;
        assert_abs_diff_eq!(params.mean_intensity(1.0), expect, epsilon = 1e-14);
    }

    #[test]
    fn mean_intensity_matches_rk4() {
        // Independent fourth-order integration of m' = beta lambda0 + (alpha - beta) m.
        let params = sec6_params();
        let (l0, a, b) = (1.0, 0.3, 0.8);
        let f = |m: f64| b * l0 + (a - b) * m;
        let mut m = l0;
        let n = 4000;
        let h = 1.0 / n as f64;
        let mut integral = 0.0;
        for _ in 0..n {
            let k1 = f(m);
            let k2 = f(m + 0.5 * h * k1);
            let k3 = f(m + 0.5 * h * k2);
            let k4 = f(m + h * k3);
            let m_next = m + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            integral += 0.5 * h * (m + m_next); // fine trapezoid on the dense mesh
            m = m_next;
        }
        assert_abs_diff_eq!(params.mean_intensity(1.0), m, epsilon = 1e-10);
        assert_abs_diff_eq!(params.mean_intensity_integral(1.0), integral, epsilon = 1e-7);
    }

    #[test]
    fn monte_carlo_intensity_tracks_oracle() {
        let params = sec6_params();
        let n_paths: u64 = 20_000;
        for &t in &[0.25, 0.5, 1.0] {
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            for p in 0..n_paths {
                let base = sample_base(&params, 1.0, 4.0, 4, 23, p, 0);
                let lam = thin(&base, &params).intensity_at(t).unwrap();
                sum += lam;
                sumsq += lam * lam;
            }
            let mean = sum / n_paths as f64;
            let var = (sumsq / n_paths as f64 - mean * mean).max(0.0);
            let stderr = (var / n_paths as f64).sqrt();
            let oracle = params.mean_intensity(t);
            assert!(
                (mean - oracle).abs() < 3.0 * stderr,
                "t={t}: mean {mean} vs oracle {oracle} (stderr {stderr})"
            );
        }
    }

    #[test]
    fn monte_carlo_jump_count_tracks_oracle_integral() {
        let params = sec6_params();
        let n_paths: u64 = 20_000;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for p in 0..n_paths {
            let base = sample_base(&params, 1.0, 4.0, 4, 29, p, 0);
            let n = thin(&base, &params).jump_count() as f64;
            sum += n;
            sumsq += n * n;
        }
        let mean = sum / n_paths as f64;
        let var = (sumsq / n_paths as f64 - mean * mean).max(0.0);
        let stderr = (var / n_paths as f64).sqrt();
        let oracle = params.mean_intensity_integral(1.0);
        assert!(
            (mean - oracle).abs() < 3.0 * stderr,
            "mean {mean} vs oracle {oracle} (stderr {stderr})"
        );
    }

    #[test]
    fn exponential_moment_stays_bounded() {
        // Empirical mean of e^{2 lambda(T)} should be stable as the sample
        // doubles, not diverging.
        let params = sec6_params();
        let mut means = Vec::new();
        for &n in &[4000u64, 8000, 16000] {
            let mut sum = 0.0;
            for p in 0..n {
                let base = sample_base(&params, 1.0, 4.0, 4, 31, p, 0);
                let lam = thin(&base, &params).intensity_at(1.0).unwrap();
                sum += (2.0 * lam).exp();
            }
            means.push(sum / n as f64);
        }
        for m in &means {
            assert!(m.is_finite());
        }
        let lo = means.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = means.iter().cloned().fold(0.0f64, f64::max);
        assert!(hi / lo < 1.5, "means {means:?}");
    }

    #[test]
    fn intensity_integral_matches_quadrature() {
        let params = sec6_params();
        let base = sample_base(&params, 1.0, 4.0, 50, 41, 3, 0);
        let real = thin(&base, &params);
        let quad = crate::quad::integrate(|s| real.intensity_left(s), 0.05, 0.93, 1e-12);
        // Quadrature across jump discontinuities still converges, just slower.
        assert_abs_diff_eq!(real.intensity_integral(0.05, 0.93), quad, epsilon = 1e-7);
    }

    #[test]
    fn coarsen_preserves_terminal_brownian() {
        let params = sec6_params();
        let base = sample_base(&params, 1.0, 4.0, 400, 43, 9, 0);
        let coarse = base.coarsen(25).unwrap();
        let fine_w: f64 = base.dw.iter().sum();
        let coarse_w: f64 = coarse.dw.iter().sum();
        assert_abs_diff_eq!(fine_w, coarse_w, epsilon = 1e-12);
        assert!(base.coarsen(30).is_err());
    }
}
