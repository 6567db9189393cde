//! Configuration differences, option weight fields and the Skorokhod
//! integral.
//!
//! The derivative of a path functional with respect to the jump noise is an
//! add-one-point difference: re-thin the same base configuration with one
//! extra point and subtract. Because thinning is monotone in the point set,
//! adding a point can only promote previously rejected candidates (the
//! cascade), and the terminal log-price response has a closed form built
//! from the impact kernel
//!
//! ```text
//! F_h(v) = J_v - alpha * int_v^h e^{-beta (s - v)} (e^{J_s} - 1) ds.
//! ```
//!
//! `F_T` is increasing after the root of its bracketing slope and positive
//! after a threshold time `v1`; the option weights are localized on
//! `[v1, T]` (where the perturbed terminal stays above the strike) and on
//! `[0, v1]` (where it can fall below). The Skorokhod integral of such an
//! anticipating weight is evaluated pathwise as the leave-one-out sum over
//! realized jumps minus the intensity-compensator integral.

use crate::error::SimError;
use crate::hawkes::{
    intensity_from_knots, thin, BaseConfiguration, HawkesParams, HawkesRealization,
};
use crate::model::{simulate_on, KernelTable, ModelParams, OptionKind, PathRealization};

/// Time tolerance for threshold bisection.
const ROOT_TOL: f64 = 1e-10;

/// Borrowed view of everything one path's perturbation analysis needs.
#[derive(Clone, Copy)]
pub struct PathCtx<'a> {
    pub model: &'a ModelParams,
    pub params: &'a HawkesParams,
    pub base: &'a BaseConfiguration,
    pub real: &'a HawkesRealization,
    pub path: &'a PathRealization,
    pub table: &'a KernelTable,
    pub kernel: &'a ImpactKernel,
}

/// The terminal log-price response to a single added point, together with
/// the threshold time after which it is guaranteed positive.
#[derive(Debug, Clone)]
pub struct ImpactKernel {
    alpha: f64,
    degenerate: bool,
    /// Kernel values at grid points, horizon `T`.
    f_grid: Vec<f64>,
    v1: f64,
    v0: f64,
}

impl ImpactKernel {
    pub fn new(table: &KernelTable, params: &HawkesParams) -> Result<Self, SimError> {
        let alpha = params.alpha();
        let jump = table.jump_fn();
        let horizon = table.horizon;
        let degenerate = jump.is_degenerate();
        let f_grid: Vec<f64> = table
            .grid
            .iter()
            .map(|&v| jump.value(v) - alpha * (table.beta() * v).exp() * table.m1_tail(v))
            .collect();
        if degenerate {
            // F vanishes identically; the threshold convention is 0.
            return Ok(Self {
                alpha,
                degenerate,
                f_grid,
                v1: 0.0,
                v0: 0.0,
            });
        }
        let f = |v: f64| jump.value(v) - alpha * (table.beta() * v).exp() * table.m1_tail(v);
        if f(horizon) <= 0.0 {
            return Err(SimError::ImpactNeverPositive);
        }
        // Bracketing slope G(v) = (e^{J_v} - 1) - beta * M0(v, T): strictly
        // increasing with a single root; F increases beyond it.
        let g = |v: f64| (jump.value(v).exp() - 1.0) - table.beta() * table.m0_tail(v);
        let v0 = if g(0.0) >= 0.0 {
            0.0
        } else {
            bisect(&g, 0.0, horizon)
        };
        // The kernel is increasing past the bracket root, so taking the
        // threshold there (or at the kernel's root beyond it) keeps the
        // kernel bounded away from zero on the open upper branch. A smaller
        // threshold at the kernel's own last sign change would be valid for
        // the localization identity but puts a 1/F singularity at the
        // branch edge, which makes the Skorokhod jump sum heavy-tailed.
        let v1 = if f(v0) < 0.0 {
            bisect(&f, v0, horizon)
        } else {
            v0
        };
        Ok(Self {
            alpha,
            degenerate,
            f_grid,
            v1,
            v0,
        })
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// `F_h(v)` for an arbitrary horizon `h <= T`.
    pub fn value_with_horizon(&self, table: &KernelTable, v: f64, h: f64) -> f64 {
        table.jump_fn().value(v) - self.alpha * (table.beta() * v).exp() * table.m1(v, h)
    }

    /// `F_T(v)`.
    pub fn value(&self, table: &KernelTable, v: f64) -> f64 {
        table.jump_fn().value(v) - self.alpha * (table.beta() * v).exp() * table.m1_tail(v)
    }

    /// `F_T` at grid point `j` (precomputed).
    pub fn value_at_grid(&self, j: usize) -> f64 {
        self.f_grid[j]
    }

    /// Smallest time after which `F_T` stays positive.
    pub fn threshold(&self) -> f64 {
        self.v1
    }

    /// Root of the bracketing slope; `F_T` is increasing beyond it.
    pub fn bracket_root(&self) -> f64 {
        self.v0
    }
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    // f(lo) <= 0 < f(hi) expected; fall back gracefully if not.
    if f(lo) > 0.0 {
        return lo;
    }
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        if f(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Which single-point change produced a difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PerturbationKind {
    Add { t: f64 },
    Remove { jump_index: usize },
}

/// Pathwise differences from adding or removing one base point: intensity,
/// log-price, price and Asian-average responses on the grid, plus the
/// candidates whose acceptance status flipped.
#[derive(Debug, Clone)]
pub struct PerturbationDiff {
    pub kind: PerturbationKind,
    pub d_lambda: Vec<f64>,
    pub d_x: Vec<f64>,
    pub d_s: Vec<f64>,
    pub d_asian: f64,
    pub cascade: Vec<usize>,
}

/// Result of re-thinning with one point added and/or one candidate skipped.
struct PerturbedThinning {
    knots: Vec<(f64, f64)>,
    cascade: Vec<usize>,
    cascade_times: Vec<f64>,
    overflow: bool,
}

fn thin_perturbed(
    base: &BaseConfiguration,
    params: &HawkesParams,
    original: &HawkesRealization,
    add_at: Option<f64>,
    skip_candidate: Option<usize>,
) -> PerturbedThinning {
    let mut was_accepted = vec![false; base.candidates.len()];
    for &i in &original.accepted {
        was_accepted[i] = true;
    }
    let mut out = PerturbedThinning {
        knots: Vec::new(),
        cascade: Vec::new(),
        cascade_times: Vec::new(),
        overflow: false,
    };
    let mut probe_pending = add_at;
    let accept = |t: f64, out: &mut PerturbedThinning, params: &HawkesParams| {
        let lam = intensity_from_knots(params, &out.knots, t);
        let after = lam + params.alpha();
        if after > base.strip_height {
            out.overflow = true;
        }
        out.knots.push((t, after));
    };
    for (i, c) in base.candidates.iter().enumerate() {
        if let Some(tp) = probe_pending {
            // The probe carries an implicit mark below the running
            // intensity, so it is accepted unconditionally at its time.
            if tp <= c.t {
                accept(tp, &mut out, params);
                probe_pending = None;
            }
        }
        if Some(i) == skip_candidate {
            continue;
        }
        let lam = intensity_from_knots(params, &out.knots, c.t);
        let accepted = c.z <= lam;
        if accepted {
            accept(c.t, &mut out, params);
        }
        if accepted != was_accepted[i] {
            out.cascade.push(i);
            out.cascade_times.push(c.t);
        }
    }
    if let Some(tp) = probe_pending {
        accept(tp, &mut out, params);
    }
    out
}

/// `M1(a, b)` decomposed over grid cells so aligned spans hit the
/// precomputed cell moments and only ragged edges pay for quadrature.
fn m1_range(table: &KernelTable, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let grid = &table.grid;
    let n = table.grid_n();
    let k0 = grid.partition_point(|&g| g <= a).saturating_sub(1).min(n - 1);
    let k1 = grid.partition_point(|&g| g < b).saturating_sub(1).min(n - 1);
    if k0 == k1 {
        return if a == grid[k0] && b == grid[k0 + 1] {
            table.m1_cell(k0)
        } else {
            table.m1(a, b)
        };
    }
    let mut acc = if a == grid[k0] {
        table.m1_cell(k0)
    } else {
        table.m1(a, grid[k0 + 1])
    };
    for k in (k0 + 1)..k1 {
        acc += table.m1_cell(k);
    }
    acc += if b == grid[k1 + 1] {
        table.m1_cell(k1)
    } else {
        table.m1(grid[k1], b)
    };
    acc
}

/// Log-price response at every grid point to turning on unit jumps at
/// `points` (sorted times): the jump-map sum minus the compensator response
/// `int (e^{J_s} - 1) Dlambda(s) ds`, where `Dlambda` is the superposition
/// of decaying exponentials seeded at each point.
fn dx_profile(table: &KernelTable, alpha: f64, points: &[f64], grid: &[f64]) -> Vec<f64> {
    let n = grid.len() - 1;
    let mut dx = vec![0.0; n + 1];
    if points.is_empty() {
        return dx;
    }
    let t0 = points[0];
    let jump = table.jump_fn();
    let beta = table.beta();

    let mut amp = 0.0; // Dlambda(s) = amp * e^{-beta s}
    let mut integral = 0.0;
    let mut jump_sum = 0.0;
    let mut pos = t0;
    let mut pt = 0usize;

    for j in 0..=n {
        let t_j = grid[j];
        if t_j < t0 {
            continue;
        }
        // Consume perturbation points up to and including t_j; the running
        // amplitude applies to the stretch before each point.
        while pt < points.len() && points[pt] <= t_j {
            let p = points[pt];
            integral += amp * m1_range(table, pos, p);
            jump_sum += jump.value(p);
            amp += alpha * (beta * p).exp();
            pos = p;
            pt += 1;
        }
        integral += amp * m1_range(table, pos, t_j);
        pos = t_j;
        dx[j] = jump_sum - integral;
    }
    dx
}

/// Difference from adding one point at `t` (implicitly below the running
/// intensity; all such marks produce the same cascade).
pub fn add_point_diff(ctx: &PathCtx, t: f64) -> Result<PerturbationDiff, SimError> {
    let horizon = ctx.base.horizon;
    if !(0.0..horizon).contains(&t) {
        return Err(SimError::OutOfRange { t, horizon });
    }
    let pt = thin_perturbed(ctx.base, ctx.params, ctx.real, Some(t), None);
    if pt.overflow {
        return Err(SimError::StripOverflow {
            at: t,
            strip_height: ctx.base.strip_height,
        });
    }
    let mut points = Vec::with_capacity(1 + pt.cascade_times.len());
    points.push(t);
    points.extend_from_slice(&pt.cascade_times);
    points.sort_by(f64::total_cmp);
    let diff = build_diff(ctx, PerturbationKind::Add { t }, &pt, &points, 1.0, None);
    Ok(diff)
}

/// Difference from removing the `jump_index`-th accepted jump.
pub fn remove_point_diff(ctx: &PathCtx, jump_index: usize) -> Result<PerturbationDiff, SimError> {
    let cand = *ctx
        .real
        .accepted
        .get(jump_index)
        .ok_or_else(|| SimError::invalid("jump_index", "no such accepted jump"))?;
    let t = ctx.base.candidates[cand].t;
    let pt = thin_perturbed(ctx.base, ctx.params, ctx.real, None, Some(cand));
    let mut points = Vec::with_capacity(1 + pt.cascade_times.len());
    points.push(t);
    points.extend_from_slice(&pt.cascade_times);
    points.sort_by(f64::total_cmp);
    // The removed path's price at t is taken from the original jump record.
    let s_probe = ctx.path.s0 * ctx.path.jumps[jump_index].x_before.exp();
    let diff = build_diff(
        ctx,
        PerturbationKind::Remove { jump_index },
        &pt,
        &points,
        -1.0,
        Some(s_probe),
    );
    Ok(diff)
}

fn build_diff(
    ctx: &PathCtx,
    kind: PerturbationKind,
    pt: &PerturbedThinning,
    points: &[f64],
    sign: f64,
    s_probe: Option<f64>,
) -> PerturbationDiff {
    let grid = &ctx.path.grid;
    let n = grid.len() - 1;
    let t0 = points[0];

    let d_lambda: Vec<f64> = grid
        .iter()
        .map(|&tj| {
            intensity_from_knots(ctx.params, &pt.knots, tj) - ctx.real.intensity_left(tj)
        })
        .collect();

    let mut d_x = dx_profile(ctx.table, ctx.params.alpha(), points, grid);
    if sign < 0.0 {
        for v in d_x.iter_mut() {
            *v = -*v;
        }
    }
    let d_s: Vec<f64> = ctx
        .path
        .s
        .iter()
        .zip(&d_x)
        .map(|(&s, &dx)| s * dx.exp_m1())
        .collect();

    // Asian response: trapezoid from the perturbation time to the horizon,
    // with a partial first cell when the time is off the grid.
    let dt = ctx.table.dt;
    let j0 = (t0 / dt).ceil() as usize;
    let j0 = j0.min(n);
    let mut resp = 0.0;
    for j in j0..n {
        resp += 0.5 * (d_s[j] + d_s[j + 1]) * dt;
    }
    if grid[j0] > t0 {
        let ds0 = match s_probe {
            Some(s) => s * (sign * ctx.table.jump_fn().value(t0)).exp_m1(),
            None => {
                // Off-grid convenience probe: log-interpolated price.
                let jl = j0 - 1;
                let w = (t0 - grid[jl]) / dt;
                let x_interp = (1.0 - w) * ctx.path.x[jl] + w * ctx.path.x[j0];
                ctx.path.s0 * x_interp.exp() * (sign * ctx.table.jump_fn().value(t0)).exp_m1()
            }
        };
        resp += 0.5 * (ds0 + d_s[j0]) * (grid[j0] - t0);
    }
    let horizon = ctx.base.horizon;

    PerturbationDiff {
        kind,
        d_lambda,
        d_x,
        d_s,
        d_asian: resp / horizon,
        cascade: pt.cascade.clone(),
    }
}

/// Number of accepted jumps gained by adding one point at `t`
/// (1 for the point itself plus the promoted cascade).
pub fn add_point_jump_count(ctx: &PathCtx, t: f64) -> Result<usize, SimError> {
    let pt = thin_perturbed(ctx.base, ctx.params, ctx.real, Some(t), None);
    if pt.overflow {
        return Err(SimError::StripOverflow {
            at: t,
            strip_height: ctx.base.strip_height,
        });
    }
    Ok(1 + pt.cascade.len())
}

/// Strike-independent perturbation responses probed at every grid point.
#[derive(Debug, Clone)]
pub struct ProbeProfiles {
    /// Terminal log-price response `DX_T(t_j)`.
    pub dx_terminal: Vec<f64>,
    /// `int_{t_j}^T S_u (e^{DX_u(t_j)} - 1) du` per probe (Asian runs only).
    pub response_integral: Option<Vec<f64>>,
}

/// Probe the add-one-point response at every grid time.
pub fn probe_profiles(ctx: &PathCtx, want_asian: bool) -> Result<ProbeProfiles, SimError> {
    let grid = &ctx.path.grid;
    let n = grid.len() - 1;
    let dt = ctx.table.dt;
    let alpha = ctx.params.alpha();
    let mut dx_terminal = vec![0.0; n + 1];
    let mut response = if want_asian { Some(vec![0.0; n + 1]) } else { None };

    for j in 0..=n {
        let t = grid[j];
        let pt = if j == n {
            // A point exactly at the horizon triggers nothing afterwards.
            PerturbedThinning {
                knots: vec![],
                cascade: vec![],
                cascade_times: vec![],
                overflow: false,
            }
        } else {
            thin_perturbed(ctx.base, ctx.params, ctx.real, Some(t), None)
        };
        if pt.overflow {
            return Err(SimError::StripOverflow {
                at: t,
                strip_height: ctx.base.strip_height,
            });
        }
        // Closed form: the impact kernel at the probe plus one kernel term
        // per promoted candidate (all promotions raise the intensity).
        let mut dxt = ctx.kernel.value_at_grid(j);
        for &l in &pt.cascade_times {
            dxt += ctx.kernel.value(ctx.table, l);
        }
        dx_terminal[j] = dxt;

        if let Some(resp) = response.as_mut() {
            let mut points = Vec::with_capacity(1 + pt.cascade_times.len());
            points.push(t);
            points.extend_from_slice(&pt.cascade_times);
            points.sort_by(f64::total_cmp);
            let dx = dx_profile(ctx.table, alpha, &points, grid);
            let mut acc = 0.0;
            for k in j..n {
                let dsk = ctx.path.s[k] * dx[k].exp_m1();
                let dsk1 = ctx.path.s[k + 1] * dx[k + 1].exp_m1();
                acc += 0.5 * (dsk + dsk1) * dt;
            }
            resp[j] = acc;
        }
    }
    Ok(ProbeProfiles {
        dx_terminal,
        response_integral: response,
    })
}

/// Weight-field branch classification per grid time: whether the perturbed
/// terminal clears the strike, within the active time window of that side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// Perturbed terminal above the strike, probe time in `[v1, T]`.
    AboveStrike,
    /// Perturbed terminal at or below the strike, probe time in `[0, v1]`.
    BelowStrike,
    /// Outside the active window of either branch.
    Excluded,
}

/// The weight `u(t)` of one path (constant in the mark within the intensity
/// band), its branch masses and region classification.
#[derive(Debug, Clone)]
pub struct WeightField {
    pub kind: OptionKind,
    pub strike: f64,
    pub v1: f64,
    /// Intensity mass of the above-strike branch.
    pub b1: f64,
    /// Intensity mass of the below-strike branch.
    pub b2: f64,
    /// Intensity mass outside both branches.
    pub excluded_mass: f64,
    pub region: Vec<Region>,
    pub u_values: Vec<f64>,
    /// Terminal log-price response per probe, kept for diagnostics.
    pub dx_terminal: Vec<f64>,
    /// True when the payoff localization makes the whole field vanish.
    pub is_zero: bool,
}

/// Split the pathwise delta target between the two branches. Both carry
/// half shares (tilted by the strike) when both have mass; a branch with no
/// intensity mass hands its share to the other so the defining identity
/// stays exact.
fn branch_split(terminal: f64, strike: f64, b1: f64, b2: f64) -> (f64, f64) {
    if b1 > 0.0 && b2 > 0.0 {
        (0.5 * (terminal + strike), 0.5 * (terminal - strike))
    } else if b1 > 0.0 {
        (terminal, 0.0)
    } else {
        (0.0, terminal)
    }
}

/// Terminal response of the option value to one point added in cell `j`:
/// `S_T (e^{DX_T} - 1)` for the European claim, the increment of the time
/// average for the Asian one.
fn cell_response(
    terminal: f64,
    kind: OptionKind,
    profiles: &ProbeProfiles,
    horizon: f64,
    j: usize,
) -> f64 {
    match kind {
        OptionKind::European => terminal * profiles.dx_terminal[j].exp_m1(),
        OptionKind::Asian => {
            profiles.response_integral.as_ref().expect("asian profiles")[j] / horizon
        }
    }
}

/// Branch classification and normalization masses of one configuration.
/// The weight is treated as constant on every grid cell, classified at the
/// cell's left endpoint, and normalized with the exact intensity mass of
/// each cell, so the localization identity holds exactly at the cell level.
struct BranchData {
    region: Vec<Region>,
    b1: f64,
    b2: f64,
    excluded: f64,
    /// `sum of mass * response^2` over the upper branch (Asian profile).
    q1: f64,
    g1: f64,
    g2: f64,
}

fn branch_data(
    grid: &[f64],
    cell_mass: &[f64],
    profiles: &ProbeProfiles,
    terminal: f64,
    strike: f64,
    kind: OptionKind,
    v1: f64,
) -> BranchData {
    let n = grid.len() - 1;
    let horizon = grid[n];
    let mut region = vec![Region::Excluded; n + 1];
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    let mut excluded = 0.0;
    let mut q1 = 0.0;
    for j in 0..n {
        let r = cell_response(terminal, kind, profiles, horizon, j);
        let bumped = terminal + r > strike;
        let t = grid[j];
        // The upper branch also needs a strictly positive response so its
        // weight (which divides by the response for the European claim)
        // stays bounded; past the threshold this only excludes boundary
        // cells where the impact kernel is still crossing zero.
        if bumped && t >= v1 && r > 0.0 {
            region[j] = Region::AboveStrike;
            b1 += cell_mass[j];
            q1 += cell_mass[j] * r * r;
        } else if !bumped && t <= v1 {
            region[j] = Region::BelowStrike;
            b2 += cell_mass[j];
        } else {
            excluded += cell_mass[j];
        }
    }
    let (g1, g2) = branch_split(terminal, strike, b1, b2);
    BranchData {
        region,
        b1,
        b2,
        excluded,
        q1,
        g1,
        g2,
    }
}

/// Weight of one cell given its branch data.
///
/// The upper branch of the European claim carries the reciprocal of the
/// response (bounded there because the impact kernel is positive past the
/// threshold). The Asian response vanishes linearly at the averaging edge
/// `t -> T`, where its reciprocal is not square-integrable against the
/// jump measure, so the Asian upper branch uses the response-proportional
/// profile instead: it satisfies the same localization identity and stays
/// bounded on the whole branch.
fn cell_weight(bd: &BranchData, kind: OptionKind, s0: f64, r: f64) -> f64 {
    match kind {
        OptionKind::European => {
            if r > 0.0 && bd.b1 > 0.0 {
                bd.g1 / (s0 * bd.b1 * r)
            } else {
                0.0
            }
        }
        OptionKind::Asian => {
            if bd.q1 > 0.0 {
                bd.g1 * r / (s0 * bd.q1)
            } else {
                0.0
            }
        }
    }
}

/// Assemble the weight field for one strike from strike-independent probe
/// profiles and exact per-cell intensity masses.
pub fn assemble_weight_field(
    path: &PathRealization,
    cell_mass: &[f64],
    profiles: &ProbeProfiles,
    v1: f64,
    strike: f64,
    kind: OptionKind,
) -> WeightField {
    let grid = &path.grid;
    let n = grid.len() - 1;
    let horizon = grid[n];
    let terminal = kind.terminal(path);
    let in_the_money = terminal > strike;
    let bd = branch_data(grid, cell_mass, profiles, terminal, strike, kind, v1);

    let s0 = path.s0;
    let mut u_values = vec![0.0; n + 1];
    if in_the_money {
        for j in 0..n {
            u_values[j] = match bd.region[j] {
                Region::AboveStrike => {
                    let r = cell_response(terminal, kind, profiles, horizon, j);
                    cell_weight(&bd, kind, s0, r)
                }
                Region::BelowStrike => -bd.g2 / (s0 * (terminal - strike) * bd.b2),
                Region::Excluded => 0.0,
            };
        }
    }

    WeightField {
        kind,
        strike,
        v1,
        b1: bd.b1,
        b2: bd.b2,
        excluded_mass: bd.excluded,
        region: bd.region,
        u_values,
        dx_terminal: profiles.dx_terminal.clone(),
        is_zero: !in_the_money,
    }
}

/// Strike-independent leave-one-out data for one realized jump: the whole
/// weight field machinery re-evaluated on the configuration without it.
#[derive(Debug, Clone)]
pub struct LooProfile {
    pub t: f64,
    /// Grid cell containing the jump.
    pub cell: usize,
    pub terminal_price: f64,
    pub terminal_asian: f64,
    pub profiles: ProbeProfiles,
    pub cell_mass: Vec<f64>,
}

/// Strike-independent data needed to evaluate the jump-weight delta of one
/// path at any strike.
#[derive(Debug, Clone)]
pub struct PmPathData {
    pub profiles: ProbeProfiles,
    /// Exact intensity mass per grid cell.
    pub cell_mass: Vec<f64>,
    pub loo: Vec<LooProfile>,
}

fn exact_cell_masses(real: &HawkesRealization, grid: &[f64]) -> Vec<f64> {
    (0..grid.len() - 1)
        .map(|j| real.intensity_integral(grid[j], grid[j + 1]))
        .collect()
}

/// Build the probe profiles of the path and of every leave-one-out
/// configuration.
pub fn pm_path_data(ctx: &PathCtx, want_asian: bool) -> Result<PmPathData, SimError> {
    if ctx.kernel.is_degenerate() {
        return Err(SimError::DegenerateJumpModel);
    }
    let grid = &ctx.path.grid;
    let n = grid.len() - 1;
    let profiles = probe_profiles(ctx, want_asian)?;
    let cell_mass = exact_cell_masses(ctx.real, grid);
    let mut loo = Vec::with_capacity(ctx.real.accepted.len());
    for (k, &cand) in ctx.real.accepted.iter().enumerate() {
        let reduced = ctx.base.without_candidate(cand);
        let real_r = thin(&reduced, ctx.params);
        if real_r.overflow_flag {
            return Err(SimError::StripOverflow {
                at: ctx.path.jumps[k].t,
                strip_height: ctx.base.strip_height,
            });
        }
        let path_r = simulate_on(ctx.model, ctx.params, &reduced, &real_r, ctx.table);
        let ctx_r = PathCtx {
            base: &reduced,
            real: &real_r,
            path: &path_r,
            ..*ctx
        };
        let profiles_r = probe_profiles(&ctx_r, want_asian)?;
        let t = ctx.path.jumps[k].t;
        let cell = ((t / ctx.table.dt) as usize).min(n - 1);
        loo.push(LooProfile {
            t,
            cell,
            terminal_price: path_r.terminal_price(),
            terminal_asian: path_r.asian,
            profiles: profiles_r,
            cell_mass: exact_cell_masses(&real_r, grid),
        });
    }
    Ok(PmPathData {
        profiles,
        cell_mass,
        loo,
    })
}

/// Weight of the leave-one-out configuration at the removed jump's cell.
fn loo_weight_value(
    loo: &LooProfile,
    grid: &[f64],
    s0: f64,
    v1: f64,
    strike: f64,
    kind: OptionKind,
) -> f64 {
    let terminal = match kind {
        OptionKind::European => loo.terminal_price,
        OptionKind::Asian => loo.terminal_asian,
    };
    if !(terminal > strike) {
        return 0.0;
    }
    let n = grid.len() - 1;
    let horizon = grid[n];
    let bd = branch_data(grid, &loo.cell_mass, &loo.profiles, terminal, strike, kind, v1);
    match bd.region[loo.cell] {
        Region::AboveStrike => {
            let r = cell_response(terminal, kind, &loo.profiles, horizon, loo.cell);
            cell_weight(&bd, kind, s0, r)
        }
        Region::BelowStrike => -bd.g2 / (s0 * (terminal - strike) * bd.b2),
        Region::Excluded => 0.0,
    }
}

/// Skorokhod integral of the option weight on one path: the leave-one-out
/// sum over realized jumps minus the exact compensator of the cellwise
/// weight.
pub fn skorokhod_from_data(
    path: &PathRealization,
    data: &PmPathData,
    v1: f64,
    strike: f64,
    kind: OptionKind,
) -> f64 {
    let field = assemble_weight_field(path, &data.cell_mass, &data.profiles, v1, strike, kind);
    let n = path.grid.len() - 1;
    let mut comp = 0.0;
    for j in 0..n {
        comp += field.u_values[j] * data.cell_mass[j];
    }
    let mut jump_sum = 0.0;
    for loo in &data.loo {
        jump_sum += loo_weight_value(loo, &path.grid, path.s0, v1, strike, kind);
    }
    jump_sum - comp
}

/// Convenience entry point: build the per-path data and evaluate the
/// Skorokhod integral of the option weight.
pub fn skorokhod_option_weight(
    ctx: &PathCtx,
    strike: f64,
    kind: OptionKind,
) -> Result<f64, SimError> {
    let data = pm_path_data(ctx, kind == OptionKind::Asian)?;
    Ok(skorokhod_from_data(
        ctx.path,
        &data,
        ctx.kernel.threshold(),
        strike,
        kind,
    ))
}

/// Piecewise-constant deterministic weight `u(t) = values[k]` on
/// `[breaks[k], breaks[k+1])`.
#[derive(Debug, Clone)]
pub struct StepWeight {
    pub breaks: Vec<f64>,
    pub values: Vec<f64>,
}

impl StepWeight {
    pub fn constant(horizon: f64, value: f64) -> Self {
        Self {
            breaks: vec![0.0, horizon],
            values: vec![value],
        }
    }

    pub fn at(&self, t: f64) -> f64 {
        let k = self.breaks.partition_point(|&b| b <= t);
        if k == 0 || k > self.values.len() {
            0.0
        } else {
            self.values[k - 1]
        }
    }
}

/// Skorokhod integral of a deterministic step weight: the leave-one-out
/// evaluation of a deterministic weight is itself, and the compensator is
/// integrated exactly on the piecewise-exponential intensity.
pub fn skorokhod_deterministic(real: &HawkesRealization, weight: &StepWeight) -> f64 {
    let jump_sum: f64 = real.jump_times().map(|t| weight.at(t)).sum();
    let mut comp = 0.0;
    for (k, &v) in weight.values.iter().enumerate() {
        comp += v * real.intensity_integral(weight.breaks[k], weight.breaks[k + 1]);
    }
    jump_sum - comp
}
