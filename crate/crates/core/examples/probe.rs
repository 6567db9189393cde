//! Quick look at estimator values at the reference parameter set.

use hawkes_mc::estimators::{self, DeltaMethod, McConfig};
use hawkes_mc::{HawkesParams, JumpFn, ModelParams, OptionKind};
use std::time::Instant;

fn main() {
    let model = ModelParams::new(0.05, 0.10, 5.0, JumpFn::Linear { gamma: 0.2 }, 1.0).unwrap();
    let params = HawkesParams::new(1.0, 0.3, 0.8).unwrap();

    for kind in [OptionKind::European, OptionKind::Asian] {
        let cfg = McConfig::new(10_000, 100, 42, 5.0, kind, 0.01).unwrap();
        let t0 = Instant::now();
        let ests = estimators::delta_estimates(&model, &params, &cfg, &DeltaMethod::ALL).unwrap();
        println!("{kind:?} (10k paths, {:.2}s):", t0.elapsed().as_secs_f64());
        for e in ests {
            println!("  {:<6} {:+.5} +- {:.5}", e.method.as_str(), e.value, e.stderr);
        }
    }

    for kind in [OptionKind::European, OptionKind::Asian] {
        let cfg = McConfig::new(100_000, 100, 7, 5.0, kind, 0.01).unwrap();
        let t0 = Instant::now();
        let ests = estimators::delta_estimates(
            &model,
            &params,
            &cfg,
            &[DeltaMethod::Exact, DeltaMethod::Wm],
        )
        .unwrap();
        println!("{kind:?} (100k paths, {:.2}s):", t0.elapsed().as_secs_f64());
        for e in ests {
            println!("  {:<6} {:+.5} +- {:.5}", e.method.as_str(), e.value, e.stderr);
        }
    }

    for kind in [OptionKind::European, OptionKind::Asian] {
        let cfg = McConfig::new(1_000, 100, 43, 5.0, kind, 0.01).unwrap();
        let strikes = estimators::default_strike_grid(5.0);
        let t0 = Instant::now();
        let sweep =
            estimators::mse_table(&model, &params, &cfg, &strikes, &DeltaMethod::ALL).unwrap();
        println!("{kind:?} MSE table (1k paths, {:.2}s):", t0.elapsed().as_secs_f64());
        for row in sweep.rows {
            println!("  {:<6} {:.6}", row.method.as_str(), row.mse);
        }
    }
}
