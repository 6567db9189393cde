//! Euler-type discretization of the intensity and log-price, coupled to the
//! exact path through a shared base configuration.
//!
//! The discretized intensity freezes the acceptance threshold at the left
//! grid point of each cell and relaxes toward the baseline explicitly; the
//! discretized log-price freezes the jump map at left endpoints. Running
//! both the exact path and the scheme on the same candidates and Brownian
//! increments gives strong-error samples for the convergence study.

use crate::error::SimError;
use crate::hawkes::{sample_base, thin, BaseConfiguration, HawkesParams};
use crate::model::{simulate_on, KernelTable, ModelParams};

/// Discretized intensity and log-price on the scheme's uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedPath {
    pub grid: Vec<f64>,
    pub lambda_n: Vec<f64>,
    pub x_n: Vec<f64>,
    /// Price growth factor `exp(x_n)` (price relative to `s0`).
    pub s_n: Vec<f64>,
    pub overflow_flag: bool,
}

impl DiscretizedPath {
    pub fn terminal_lambda(&self) -> f64 {
        *self.lambda_n.last().expect("non-empty grid")
    }

    pub fn terminal_log(&self) -> f64 {
        *self.x_n.last().expect("non-empty grid")
    }
}

/// Run the scheme with `n` cells on `base`. The base configuration's grid
/// must be divisible by `n` so Brownian increments can be block-summed onto
/// the coarser grid.
pub fn discretize(
    model: &ModelParams,
    params: &HawkesParams,
    base: &BaseConfiguration,
    n: usize,
) -> Result<DiscretizedPath, SimError> {
    if n == 0 {
        return Err(SimError::invalid("grid", "scheme needs n >= 1"));
    }
    let coarse;
    let base = if base.grid_n() == n {
        base
    } else {
        coarse = base.coarsen(n)?;
        &coarse
    };

    let horizon = base.horizon;
    let dt = horizon / n as f64;
    let grid: Vec<f64> = (0..=n).map(|j| dt * j as f64).collect();
    let lambda0 = params.lambda0();
    let alpha = params.alpha();
    let beta = params.beta();
    let jump = model.jump_fn;
    let drift = model.mu - 0.5 * model.sigma * model.sigma;
    let w = base.w_grid();

    let mut lambda_n = Vec::with_capacity(n + 1);
    lambda_n.push(lambda0);
    let mut x_n = Vec::with_capacity(n + 1);
    x_n.push(0.0);
    let mut overflow = false;

    let mut jump_term = 0.0; // sum of frozen jump sizes over accepted points
    let mut comp = 0.0; // integral of (e^{J^n} - 1) lambda^n
    let mut c = 0usize; // candidate cursor

    for i in 0..n {
        let t_i = grid[i];
        let t_next = grid[i + 1];
        let lam_i = lambda_n[i];
        if lam_i > base.strip_height {
            overflow = true;
        }
        let mut accepted = 0usize;
        let mut holding = 0.0; // sum over accepted points of (t_next - s)
        while c < base.candidates.len() && base.candidates[c].t <= t_next {
            let cand = &base.candidates[c];
            if cand.t > t_i && cand.z <= lam_i {
                accepted += 1;
                holding += t_next - cand.t;
            }
            c += 1;
        }
        lambda_n.push(lam_i + beta * dt * (lambda0 - lam_i) + alpha * accepted as f64);

        // Exact integral of lambda^n over the cell: linear relaxation plus
        // the alpha steps accrued from each acceptance time onward.
        let cell_lambda_int =
            lam_i * dt + 0.5 * beta * dt * dt * (lambda0 - lam_i) + alpha * holding;
        let j_frozen = jump.value(t_i);
        comp += (j_frozen.exp() - 1.0) * cell_lambda_int;
        jump_term += j_frozen * accepted as f64;

        x_n.push(drift * t_next + model.sigma * w[i + 1] + jump_term - comp);
    }

    let s_n = x_n.iter().map(|&x| x.exp()).collect();
    Ok(DiscretizedPath {
        grid,
        lambda_n,
        x_n,
        s_n,
        overflow_flag: overflow,
    })
}

/// Coupled strong-error estimates for one grid size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergencePoint {
    pub n: usize,
    pub lambda_mse: f64,
    pub x_mse: f64,
}

/// Least-squares slope of `ln(mse)` against `ln(n)`. Returns negative
/// infinity when every error vanished (the scheme is exact there).
pub fn log_log_slope(points: &[(usize, f64)]) -> f64 {
    if points.iter().all(|&(_, e)| e <= 0.0) {
        return f64::NEG_INFINITY;
    }
    let data: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(_, e)| e > 0.0)
        .map(|&(n, e)| ((n as f64).ln(), e.ln()))
        .collect();
    let m = data.len() as f64;
    let sx: f64 = data.iter().map(|d| d.0).sum();
    let sy: f64 = data.iter().map(|d| d.1).sum();
    let sxx: f64 = data.iter().map(|d| d.0 * d.0).sum();
    let sxy: f64 = data.iter().map(|d| d.0 * d.1).sum();
    (m * sxy - sx * sy) / (m * sxx - sx * sx)
}

/// Sample coupled errors `E|lambda(T) - lambda^n(T)|^2` and
/// `E|X_T - X^n_T|^2` over a common set of base configurations for every
/// grid size in `grids`. Each grid size must divide the largest one.
pub fn convergence_study(
    model: &ModelParams,
    params: &HawkesParams,
    grids: &[usize],
    n_paths: u64,
    seed: u64,
) -> Result<Vec<ConvergencePoint>, SimError> {
    let &n_max = grids
        .iter()
        .max()
        .ok_or_else(|| SimError::invalid("grids", "empty grid list"))?;
    for &n in grids {
        if n == 0 || n_max % n != 0 {
            return Err(SimError::invalid(
                "grids",
                format!("grid {n} must divide the largest grid {n_max}"),
            ));
        }
    }
    let table = KernelTable::new(model, params, n_max);
    let mut acc = vec![(0.0f64, 0.0f64); grids.len()];

    for p in 0..n_paths {
        let mut strip = params.default_strip_height();
        let mut attempt = 0u32;
        'attempts: loop {
            let base = sample_base(params, model.horizon, strip, n_max, seed, p, attempt);
            let real = thin(&base, params);
            if real.overflow_flag {
                attempt += 1;
                strip *= 2.0;
                if attempt > 8 {
                    return Err(SimError::OverflowExhausted {
                        path: p,
                        attempts: attempt,
                        strip_height: strip,
                    });
                }
                continue;
            }
            let exact = simulate_on(model, params, &base, &real, &table);
            let lambda_exact = real.intensity_left(model.horizon);
            let x_exact = exact.terminal_log();
            let mut sample = Vec::with_capacity(grids.len());
            for &n in grids {
                let disc = discretize(model, params, &base, n)?;
                if disc.overflow_flag {
                    attempt += 1;
                    strip *= 2.0;
                    if attempt > 8 {
                        return Err(SimError::OverflowExhausted {
                            path: p,
                            attempts: attempt,
                            strip_height: strip,
                        });
                    }
                    continue 'attempts;
                }
                let dl = lambda_exact - disc.terminal_lambda();
                let dx = x_exact - disc.terminal_log();
                sample.push((dl * dl, dx * dx));
            }
            for (a, s) in acc.iter_mut().zip(sample) {
                a.0 += s.0;
                a.1 += s.1;
            }
            break;
        }
    }

    Ok(grids
        .iter()
        .zip(acc)
        .map(|(&n, (l, x))| ConvergencePoint {
            n,
            lambda_mse: l / n_paths as f64,
            x_mse: x / n_paths as f64,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hawkes::{Candidate, StreamId};
    use crate::model::JumpFn;
    use approx::assert_abs_diff_eq;

    fn sec6_model() -> ModelParams {
        ModelParams::new(0.05, 0.10, 5.0, JumpFn::Linear { gamma: 0.2 }, 1.0).unwrap()
    }

    fn sec6_params() -> HawkesParams {
        HawkesParams::new(1.0, 0.3, 0.8).unwrap()
    }

    #[test]
    fn alpha_zero_keeps_intensity_at_baseline() {
        // lambda0 is the fixed point of the explicit relaxation.
        let model = sec6_model();
        let params = HawkesParams::new(1.0, 0.0, 0.8).unwrap();
        let base = sample_base(&params, 1.0, 4.0, 100, 3, 0, 0);
        let disc = discretize(&model, &params, &base, 100).unwrap();
        for &l in &disc.lambda_n {
            assert_abs_diff_eq!(l, 1.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn recursion_arithmetic_on_a_hand_case() {
        // Two cells, one candidate per cell; check the update
        // lam_{i+1} = lam_i + beta dt (lambda0 - lam_i) + alpha * count.
        let model = sec6_model();
        let params = sec6_params();
        let base = BaseConfiguration::new(
            1.0,
            4.0,
            vec![
                Candidate { t: 0.25, z: 0.9, w: 0.0 },
                Candidate { t: 0.75, z: 1.05, w: 0.0 },
            ],
            vec![0.0, 0.0],
            StreamId { seed: 0, path: 0, attempt: 0 },
        )
        .unwrap();
        let disc = discretize(&model, &params, &base, 2).unwrap();
        // Cell 0: threshold 1.0, candidate z=0.9 accepted.
        let l1 = 1.0 + 0.8 * 0.5 * (1.0 - 1.0) + 0.3;
        assert_abs_diff_eq!(disc.lambda_n[1], l1, epsilon = 1e-15);
        // Cell 1: threshold 1.3, candidate z=1.05 accepted.
        let l2 = l1 + 0.8 * 0.5 * (1.0 - l1) + 0.3;
        assert_abs_diff_eq!(disc.lambda_n[2], l2, epsilon = 1e-15);
    }

    #[test]
    fn no_candidates_leaves_compensator_error_of_order_dt() {
        // Deterministic case: the scheme error in X_T is pure left-endpoint
        // freezing of J, so it shrinks linearly in dt.
        let model = sec6_model();
        let params = sec6_params();
        let base = BaseConfiguration::new(
            1.0,
            4.0,
            vec![],
            vec![0.0; 400],
            StreamId { seed: 0, path: 0, attempt: 0 },
        )
        .unwrap();
        let table = KernelTable::new(&model, &params, 400);
        let real = thin(&base, &params);
        let exact = simulate_on(&model, &params, &base, &real, &table).terminal_log();
        let e100 = (exact - discretize(&model, &params, &base, 100).unwrap().terminal_log()).abs();
        let e400 = (exact - discretize(&model, &params, &base, 400).unwrap().terminal_log()).abs();
        assert!(e400 < e100 / 3.0, "e100={e100}, e400={e400}");
        assert!(e100 < 1e-2);
    }

    #[test]
    fn coupled_mse_decreases_with_refinement() {
        let model = sec6_model();
        let params = sec6_params();
        let pts = convergence_study(&model, &params, &[25, 100, 400], 800, 97).unwrap();
        assert!(pts[0].x_mse > pts[2].x_mse, "{pts:?}");
        assert!(pts[0].lambda_mse > pts[2].lambda_mse, "{pts:?}");
    }

    #[test]
    fn slopes_meet_the_rate_gates() {
        let model = sec6_model();
        let params = sec6_params();
        let grids = [25, 50, 100, 200, 400];
        let pts = convergence_study(&model, &params, &grids, 3000, 11).unwrap();
        let lambda_slope = log_log_slope(
            &pts.iter().map(|p| (p.n, p.lambda_mse)).collect::<Vec<_>>(),
        );
        let x_slope = log_log_slope(&pts.iter().map(|p| (p.n, p.x_mse)).collect::<Vec<_>>());
        assert!(lambda_slope <= -0.8, "lambda slope {lambda_slope}, {pts:?}");
        assert!(x_slope <= -0.4, "x slope {x_slope}, {pts:?}");
    }

    #[test]
    fn zero_error_reports_infinite_slope() {
        assert_eq!(log_log_slope(&[(25, 0.0), (50, 0.0)]), f64::NEG_INFINITY);
    }

    #[test]
    fn grid_divisibility_is_enforced() {
        let model = sec6_model();
        let params = sec6_params();
        assert!(convergence_study(&model, &params, &[30, 400], 10, 1).is_err());
    }
}
