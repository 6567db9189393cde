//! Monte Carlo engines for option prices and delta estimators.
//!
//! All estimators of one run share the same path set: per-path
//! contributions are computed in a single sweep, collected in path order
//! and reduced pairwise, so results are bit-identical no matter how many
//! worker threads execute the sweep. Paths whose intensity (or whose
//! perturbed intensity, during weight evaluation) spills over the
//! dominating strip are regenerated from a fresh substream with the strip
//! height doubled.

use crate::error::SimError;
use crate::hawkes::{sample_base, thin, HawkesParams};
use crate::malliavin::{pm_path_data, skorokhod_from_data, ImpactKernel, PathCtx};
use crate::model::{call_payoff, simulate_on, KernelTable, ModelParams, OptionKind};
use std::time::Instant;

/// Give up after this many strip doublings per path.
const MAX_STRIP_DOUBLINGS: u32 = 8;

/// Delta estimation method tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeltaMethod {
    /// Pathwise delta from terminal-value scaling.
    Exact,
    /// Brownian (Wiener) Malliavin weight.
    Wm,
    /// Jump (Poisson) Malliavin weight via the Skorokhod integral.
    Pm,
    /// Average of `Wm` and `Pm` on shared paths.
    Wp,
    /// Symmetric finite differences with common random numbers.
    Fd,
}

impl DeltaMethod {
    pub const ALL: [DeltaMethod; 5] = [
        DeltaMethod::Exact,
        DeltaMethod::Wm,
        DeltaMethod::Pm,
        DeltaMethod::Wp,
        DeltaMethod::Fd,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            DeltaMethod::Exact => "EXACT",
            DeltaMethod::Wm => "WM",
            DeltaMethod::Pm => "PM",
            DeltaMethod::Wp => "WP",
            DeltaMethod::Fd => "FD",
        }
    }
}

impl std::fmt::Display for DeltaMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Monte Carlo run configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub n_paths: u64,
    pub grid_n: usize,
    pub seed: u64,
    pub strike: f64,
    pub kind: OptionKind,
    /// Relative bump for finite differences.
    pub fd_bump: f64,
}

impl McConfig {
    pub fn new(
        n_paths: u64,
        grid_n: usize,
        seed: u64,
        strike: f64,
        kind: OptionKind,
        fd_bump: f64,
    ) -> Result<Self, SimError> {
        if n_paths < 2 {
            return Err(SimError::invalid("n_paths", "need at least 2 paths"));
        }
        if grid_n == 0 {
            return Err(SimError::invalid("grid_n", "need at least one grid cell"));
        }
        if !(strike >= 0.0) {
            return Err(SimError::invalid("strike", format!("must be >= 0, got {strike}")));
        }
        if !(fd_bump > 0.0 && fd_bump < 1.0) {
            return Err(SimError::invalid(
                "fd_bump",
                format!("must be in (0, 1), got {fd_bump}"),
            ));
        }
        Ok(Self {
            n_paths,
            grid_n,
            seed,
            strike,
            kind,
            fd_bump,
        })
    }
}

/// A Monte Carlo estimate with its sampling error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub stderr: f64,
    pub n_paths: u64,
    pub wallclock: f64,
}

/// One delta estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaEstimate {
    pub method: DeltaMethod,
    pub value: f64,
    pub stderr: f64,
    pub n_paths: u64,
    pub wallclock: f64,
}

fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 128 {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

/// Sample mean and standard error with deterministic pairwise reduction.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = pairwise_sum(values) / n;
    let devs: Vec<f64> = values.iter().map(|&x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&devs) / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Run `f` on every path with the strip-doubling retry protocol, returning
/// per-path results in path order.
pub(crate) fn with_paths<T, F>(
    model: &ModelParams,
    params: &HawkesParams,
    grid_n: usize,
    seed: u64,
    n_paths: u64,
    f: F,
) -> Result<Vec<T>, SimError>
where
    T: Send,
    F: Fn(&PathCtx) -> Result<T, SimError> + Sync,
{
    let table = KernelTable::new(model, params, grid_n);
    let kernel = ImpactKernel::new(&table, params)?;
    let run = |p: u64| -> Result<T, SimError> {
        let mut strip = params.default_strip_height();
        for attempt in 0..=MAX_STRIP_DOUBLINGS {
            let base = sample_base(params, model.horizon, strip, grid_n, seed, p, attempt);
            let real = thin(&base, params);
            if real.overflow_flag {
                strip *= 2.0;
                continue;
            }
            let path = simulate_on(model, params, &base, &real, &table);
            let ctx = PathCtx {
                model,
                params,
                base: &base,
                real: &real,
                path: &path,
                table: &table,
                kernel: &kernel,
            };
            match f(&ctx) {
                Err(SimError::StripOverflow { .. }) => {
                    strip *= 2.0;
                    continue;
                }
                other => return other,
            }
        }
        Err(SimError::OverflowExhausted {
            path: p,
            attempts: MAX_STRIP_DOUBLINGS + 1,
            strip_height: strip,
        })
    };

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n_paths).into_par_iter().map(run).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n_paths).map(run).collect()
    }
}

/// Undiscounted Monte Carlo price of a European or Asian call.
pub fn price(
    model: &ModelParams,
    params: &HawkesParams,
    cfg: &McConfig,
) -> Result<McEstimate, SimError> {
    let start = Instant::now();
    let kind = cfg.kind;
    let strike = cfg.strike;
    let values = with_paths(model, params, cfg.grid_n, cfg.seed, cfg.n_paths, |ctx| {
        Ok(call_payoff(kind.terminal(ctx.path), strike))
    })?;
    let (value, stderr) = mean_stderr(&values);
    Ok(McEstimate {
        value,
        stderr,
        n_paths: cfg.n_paths,
        wallclock: start.elapsed().as_secs_f64(),
    })
}

/// Per-path raw material for the delta estimators, strike-separable where
/// possible so a strike sweep can reuse one path set.
struct PathRecord {
    /// `S_T` or `Y_T` depending on the option kind.
    terminal: f64,
    /// Multiplies the payoff in the Brownian-weight estimator.
    wm_factor: f64,
    /// Skorokhod integral per strike (only when the jump weight is needed).
    pm_delta: Vec<f64>,
}

fn wm_factor(ctx: &PathCtx, kind: OptionKind) -> f64 {
    let model = ctx.model;
    let horizon = model.horizon;
    match kind {
        OptionKind::European => {
            let w_t: f64 = pairwise_sum(&ctx.base.dw);
            w_t / (model.s0 * horizon * model.sigma)
        }
        OptionKind::Asian => {
            // Adapted Ito sum of S dW on the grid.
            let mut ito = 0.0;
            for (j, &dw) in ctx.base.dw.iter().enumerate() {
                ito += ctx.path.s[j] * dw;
            }
            let y = ctx.path.asian;
            (2.0 * ito / (horizon * model.sigma * y) + 1.0) / model.s0
        }
    }
}

fn collect_records(
    model: &ModelParams,
    params: &HawkesParams,
    cfg: &McConfig,
    strikes: &[f64],
    need_wm: bool,
    need_pm: bool,
) -> Result<Vec<PathRecord>, SimError> {
    if need_pm && model.jump_fn.is_degenerate() {
        return Err(SimError::DegenerateJumpModel);
    }
    let kind = cfg.kind;
    let strikes = strikes.to_vec();
    with_paths(model, params, cfg.grid_n, cfg.seed, cfg.n_paths, move |ctx| {
        let terminal = kind.terminal(ctx.path);
        let wm = if need_wm { wm_factor(ctx, kind) } else { 0.0 };
        let pm_delta = if need_pm {
            // The payoff localizes the weight: strikes at or above the
            // terminal contribute exactly zero, so the Skorokhod integral
            // is only evaluated when it can matter.
            if strikes.iter().any(|&k| terminal > k) {
                let data = pm_path_data(ctx, kind == OptionKind::Asian)?;
                strikes
                    .iter()
                    .map(|&k| {
                        if terminal > k {
                            skorokhod_from_data(ctx.path, &data, ctx.kernel.threshold(), k, kind)
                        } else {
                            0.0
                        }
                    })
                    .collect()
            } else {
                vec![0.0; strikes.len()]
            }
        } else {
            Vec::new()
        };
        Ok(PathRecord {
            terminal,
            wm_factor: wm,
            pm_delta,
        })
    })
}

fn contribution(
    record: &PathRecord,
    method: DeltaMethod,
    strike: f64,
    strike_idx: usize,
    s0: f64,
    fd_bump: f64,
) -> f64 {
    let terminal = record.terminal;
    let payoff = call_payoff(terminal, strike);
    match method {
        DeltaMethod::Exact => {
            if terminal > strike {
                terminal / s0
            } else {
                0.0
            }
        }
        DeltaMethod::Wm => payoff * record.wm_factor,
        DeltaMethod::Pm => payoff * record.pm_delta[strike_idx],
        DeltaMethod::Wp => {
            0.5 * (payoff * record.wm_factor + payoff * record.pm_delta[strike_idx])
        }
        DeltaMethod::Fd => {
            let up = call_payoff((1.0 + fd_bump) * terminal, strike);
            let down = call_payoff((1.0 - fd_bump) * terminal, strike);
            (up - down) / (2.0 * s0 * fd_bump)
        }
    }
}

/// Compute several delta estimators on one shared path set.
pub fn delta_estimates(
    model: &ModelParams,
    params: &HawkesParams,
    cfg: &McConfig,
    methods: &[DeltaMethod],
) -> Result<Vec<DeltaEstimate>, SimError> {
    let start = Instant::now();
    let need_wm = methods
        .iter()
        .any(|m| matches!(m, DeltaMethod::Wm | DeltaMethod::Wp));
    let need_pm = methods
        .iter()
        .any(|m| matches!(m, DeltaMethod::Pm | DeltaMethod::Wp));
    let strikes = [cfg.strike];
    let records = collect_records(model, params, cfg, &strikes, need_wm, need_pm)?;
    let mut out = Vec::with_capacity(methods.len());
    for &method in methods {
        let values: Vec<f64> = records
            .iter()
            .map(|r| contribution(r, method, cfg.strike, 0, model.s0, cfg.fd_bump))
            .collect();
        let (value, stderr) = mean_stderr(&values);
        out.push(DeltaEstimate {
            method,
            value,
            stderr,
            n_paths: cfg.n_paths,
            wallclock: start.elapsed().as_secs_f64(),
        });
    }
    Ok(out)
}

fn single(
    model: &ModelParams,
    params: &HawkesParams,
    cfg: &McConfig,
    method: DeltaMethod,
) -> Result<DeltaEstimate, SimError> {
    Ok(delta_estimates(model, params, cfg, &[method])?.remove(0))
}

/// Pathwise delta `E[H_K(terminal) terminal / s0]`.
pub fn delta_exact(
    model: &ModelParams,
    params: &HawkesParams,
    cfg: &McConfig,
) -> Result<DeltaEstimate, SimError> {
    single(model, params, cfg, DeltaMethod::Exact)
}

/// Brownian-weight delta.
pub fn delta_wm(
    model: &ModelParams,
    params: &HawkesParams,
    cfg: &McConfig,
) -> Result<DeltaEstimate, SimError> {
    single(model, params, cfg, DeltaMethod::Wm)
}

/// Jump-weight delta via the Skorokhod integral.
pub fn delta_pm(
    model: &ModelParams,
    params: &HawkesParams,
    cfg: &McConfig,
) -> Result<DeltaEstimate, SimError> {
    single(model, params, cfg, DeltaMethod::Pm)
}

/// Average of the Brownian and jump weights on shared paths.
pub fn delta_wp(
    model: &ModelParams,
    params: &HawkesParams,
    cfg: &McConfig,
) -> Result<DeltaEstimate, SimError> {
    single(model, params, cfg, DeltaMethod::Wp)
}

/// Symmetric finite differences with common random numbers.
pub fn delta_fd(
    model: &ModelParams,
    params: &HawkesParams,
    cfg: &McConfig,
) -> Result<DeltaEstimate, SimError> {
    single(model, params, cfg, DeltaMethod::Fd)
}

/// One method's curve over a strike grid.
#[derive(Debug, Clone)]
pub struct CurvePoint {
    pub strike: f64,
    pub value: f64,
    pub stderr: f64,
}

/// Mean squared error of one method against the reference delta.
#[derive(Debug, Clone, Copy)]
pub struct MseRow {
    pub method: DeltaMethod,
    pub mse: f64,
}

/// Delta curves over a strike grid plus their mean squared errors against a
/// higher-budget reference run.
#[derive(Debug, Clone)]
pub struct StrikeSweep {
    pub strikes: Vec<f64>,
    /// Pathwise reference delta per strike (independent seed, 10x paths).
    pub reference: Vec<f64>,
    pub curves: Vec<(DeltaMethod, Vec<CurvePoint>)>,
    pub rows: Vec<MseRow>,
}

/// Offset mixed into the seed for the reference run so its paths are
/// independent of the estimation paths.
const REFERENCE_SEED_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

/// Sweep the strike grid with every requested method and report each
/// method's mean squared error against a 10x-budget pathwise reference.
pub fn mse_table(
    model: &ModelParams,
    params: &HawkesParams,
    cfg: &McConfig,
    strikes: &[f64],
    methods: &[DeltaMethod],
) -> Result<StrikeSweep, SimError> {
    if strikes.is_empty() {
        return Ok(StrikeSweep {
            strikes: vec![],
            reference: vec![],
            curves: methods.iter().map(|&m| (m, vec![])).collect(),
            rows: vec![],
        });
    }
    let need_wm = methods
        .iter()
        .any(|m| matches!(m, DeltaMethod::Wm | DeltaMethod::Wp));
    let need_pm = methods
        .iter()
        .any(|m| matches!(m, DeltaMethod::Pm | DeltaMethod::Wp));

    // Reference deltas: pathwise estimator, independent seed, 10x paths.
    let kind = cfg.kind;
    let ref_terminals = with_paths(
        model,
        params,
        cfg.grid_n,
        cfg.seed.wrapping_add(REFERENCE_SEED_SALT),
        cfg.n_paths * 10,
        move |ctx| Ok(kind.terminal(ctx.path)),
    )?;
    let reference: Vec<f64> = strikes
        .iter()
        .map(|&k| {
            let vals: Vec<f64> = ref_terminals
                .iter()
                .map(|&t| if t > k { t / model.s0 } else { 0.0 })
                .collect();
            mean_stderr(&vals).0
        })
        .collect();

    let records = collect_records(model, params, cfg, strikes, need_wm, need_pm)?;

    let mut curves = Vec::with_capacity(methods.len());
    let mut rows = Vec::with_capacity(methods.len());
    for &method in methods {
        let mut points = Vec::with_capacity(strikes.len());
        let mut sq_err = 0.0;
        for (i, &k) in strikes.iter().enumerate() {
            let values: Vec<f64> = records
                .iter()
                .map(|r| contribution(r, method, k, i, model.s0, cfg.fd_bump))
                .collect();
            let (value, stderr) = mean_stderr(&values);
            sq_err += (value - reference[i]) * (value - reference[i]);
            points.push(CurvePoint {
                strike: k,
                value,
                stderr,
            });
        }
        rows.push(MseRow {
            method,
            mse: sq_err / strikes.len() as f64,
        });
        curves.push((method, points));
    }

    Ok(StrikeSweep {
        strikes: strikes.to_vec(),
        reference,
        curves,
        rows,
    })
}

/// The default strike grid: multiples `u = 0.05, 0.10, ..., 1.30` of the
/// initial price.
pub fn default_strike_grid(s0: f64) -> Vec<f64> {
    (1..=26).map(|k| s0 * 0.05 * k as f64).collect()
}
