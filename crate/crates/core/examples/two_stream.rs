//! Conservation check on the two-stream instability (N = 32, M = 128, T = 10).
//!
//! `cargo run --release -p slvp-core --example two_stream`

use std::sync::Arc;
use std::time::Instant;

use slvp_core::scenarios::init_field;
use slvp_core::{advance, Scenario, SchemeKind, SolverOptions, State};

fn main() -> Result<(), slvp_core::Error> {
    let cfg = Scenario::two_stream();
    let grid = Arc::new(cfg.domain.grid(32, 128)?);
    let none = slvp_core::Source::none();
    let dts: Vec<f64> = std::env::args().skip(1).map(|a| a.parse().expect("dt")).collect();
    let dts = if dts.is_empty() { vec![0.005] } else { dts };
    println!("scheme    dt       mass         momentum     energy");
    let startup: slvp_core::Startup = std::env::var("STARTUP").unwrap_or("onestep2".into()).parse()?;
    let only: Option<SchemeKind> = std::env::var("SCHEME").ok().map(|s| s.parse()).transpose()?;
    for scheme in SchemeKind::ALL.into_iter().filter(|s| only.map_or(true, |o| o == *s)) {
        for &dt in &dts {
            let start = Instant::now();
            let mut state = State::new(init_field(&cfg, grid.clone())?, dt, SolverOptions { startup, ..Default::default() })?;
            let first = state.diagnostics();
            let (mut dq, mut dp, mut dw) = (0.0f64, 0.0f64, 0.0f64);
            let res = advance(&mut state, scheme, &none, 10.0, |_, rec| {
                dq = dq.max(((rec.particles - first.particles) / first.particles).abs());
                dp = dp.max((rec.momentum - first.momentum).abs());
                dw = dw.max(((rec.energy - first.energy) / first.energy).abs());
            });
            if let Err(e) = res {
                println!("{scheme:9} {dt:<8} failed at step {}: {e}", state.k());
                continue;
            }
            println!("{scheme:9} {dt:<8} {dq:.3e}    {dp:.3e}    {dw:.3e}   ({:.2?})", start.elapsed());
        }
    }
    Ok(())
}
