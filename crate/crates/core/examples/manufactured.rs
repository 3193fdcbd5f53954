//! Time-convergence study on the manufactured problem (N = M = 32, T = 1).
//!
//! `cargo run --release -p slvp-core --example manufactured`

use std::sync::Arc;

use slvp_core::diagnostics::{l2_relative_error, l2_relative_error_field};
use slvp_core::scenarios::{init_field, manufactured_exact, manufactured_source};
use slvp_core::{advance, Scenario, SchemeKind, SolverOptions, State};

fn main() -> Result<(), slvp_core::Error> {
    let cfg = Scenario::manufactured();
    let grid = Arc::new(cfg.domain.grid(32, 32)?);
    let src = manufactured_source();
    let (exact_f, exact_e) = manufactured_exact(1.0, grid.clone())?;
    let ladder = [0.04, 0.02, 0.01, 0.005, 0.0025, 0.00125];

    let only = std::env::args().nth(1).map(|s| s.parse::<SchemeKind>().unwrap());
    for scheme in SchemeKind::ALL.into_iter().filter(|s| only.map_or(true, |o| o == *s)) {
        let start = std::time::Instant::now();
        println!("{scheme}");
        let mut prev: Option<(f64, f64)> = None;
        for dt in ladder {
            let mut state = State::new(init_field(&cfg, grid.clone())?, dt, SolverOptions::default())?;
            advance(&mut state, scheme, &src, 1.0, |_, _| {})?;
            let ef = l2_relative_error(state.current(), &exact_f)?;
            let ee = l2_relative_error_field(&state.efield().nodal, &exact_e, grid.xgrid())?;
            let rates = prev.map(|(pf, pe)| ((pf / ef).log2(), (pe / ee).log2()));
            match rates {
                Some((rf, re)) => println!("  {dt:<8} {ef:.3e} {rf:5.2}   {ee:.3e} {re:5.2}"),
                None => println!("  {dt:<8} {ef:.3e}         {ee:.3e}"),
            }
            prev = Some((ef, ee));
        }
        eprintln!("  ({:.2?})", start.elapsed());
    }
    Ok(())
}
