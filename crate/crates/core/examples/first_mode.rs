//! Prints `t, |Ê₁|` for a two-stream or Landau run.
//!
//! `cargo run --release -p slvp-core --example first_mode -- landau bdf2 0.0025 40 32`

use std::sync::Arc;

use slvp_core::scenarios::init_field;
use slvp_core::{advance, Scenario, SchemeKind, SolverOptions, State};

fn main() -> Result<(), slvp_core::Error> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: &str| args.get(i).cloned().unwrap_or_else(|| default.to_string());
    let (cfg, nv) = match arg(0, "landau").as_str() {
        "two_stream" => (Scenario::two_stream(), 128),
        _ => (Scenario::landau(0.01), 32),
    };
    let scheme: SchemeKind = arg(1, "bdf2").parse()?;
    let dt: f64 = arg(2, "0.0025").parse().expect("dt");
    let t_end: f64 = arg(3, "40").parse().expect("T");
    let nv: usize = arg(4, &nv.to_string()).parse().expect("M");
    let grid = Arc::new(cfg.domain.grid(32, nv)?);
    let mut state = State::new(init_field(&cfg, grid)?, dt, SolverOptions::default())?;
    let stride = ((0.05 / dt).round() as usize).max(1);
    advance(&mut state, scheme, &slvp_core::Source::none(), t_end, |s, rec| {
        if s.k() % stride == 0 {
            println!("{:.4} {:.6e} {:.6e}", rec.t, rec.first_mode_abs, rec.first_mode_a1);
        }
    })
}
