use std::f64::consts::PI;
use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slvp_core::phase_space::{
    displaced_points, exact_shifted_eval, phi_transport, taylor_shifted_eval,
};
use slvp_core::{DisplacementField, DistributionField, PhaseGrid};

fn grid16() -> Arc<PhaseGrid<f64>> {
    Arc::new(PhaseGrid::from_bounds(16, 0.0, 2.0 * PI, 16, -PI, PI).unwrap())
}

/// Random trigonometric polynomial in (x, v) with modes up to `kmax` on each axis.
fn band_limited(grid: Arc<PhaseGrid<f64>>, rng: &mut ChaCha8Rng, kmax: usize) -> DistributionField<f64> {
    let terms: Vec<(f64, f64, f64, f64, f64)> = (0..=kmax)
        .flat_map(|p| (0..=kmax).map(move |q| (p as f64, q as f64)))
        .map(|(p, q)| (p, q, rng.gen_range(-1.0..1.0), rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..2.0 * PI)))
        .collect();
    let kx = grid.xgrid().wavenumber();
    let kv = grid.vgrid().wavenumber();
    DistributionField::from_fn(grid, move |x, v| {
        terms
            .iter()
            .map(|&(p, q, a, px, pv)| a * (p * kx * x + px).cos() * (q * kv * v + pv).cos())
            .sum()
    })
}

fn random_displacement(len: usize, rng: &mut ChaCha8Rng, bound: f64) -> DisplacementField<f64> {
    DisplacementField {
        dxs: (0..len).map(|_| rng.gen_range(-bound..bound)).collect(),
        dvs: (0..len).map(|_| rng.gen_range(-bound..bound)).collect(),
    }
}

#[test]
fn taylor_matches_direct_evaluation() {
    let grid = grid16();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let f = band_limited(grid.clone(), &mut rng, 4);
        let disp = random_displacement(grid.len(), &mut rng, 0.05);
        let taylor = taylor_shifted_eval(&f, &disp, 10).unwrap();
        let direct = exact_shifted_eval(&f, &displaced_points(&grid, &disp)).unwrap();
        let err = taylor.iter().zip(&direct).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst = worst.max(err);
    }
    assert!(worst <= 1e-8, "max deviation {worst:e}");
}

#[test]
fn taylor_error_shrinks_with_order() {
    let grid = grid16();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f = band_limited(grid.clone(), &mut rng, 4);
    let disp = random_displacement(grid.len(), &mut rng, 0.05);
    let direct = exact_shifted_eval(&f, &displaced_points(&grid, &disp)).unwrap();
    let errs: Vec<f64> = (1..=6)
        .map(|s| {
            let t = taylor_shifted_eval(&f, &disp, s).unwrap();
            t.iter().zip(&direct).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        })
        .collect();
    for w in errs.windows(2) {
        assert!(w[1] < w[0], "{errs:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transport_integrates_to_zero(seed in any::<u64>(), e_scale in 0.0..5.0f64) {
        let grid = Arc::new(PhaseGrid::from_bounds(16, 0.0, 4.0 * PI, 32, -5.0, 5.0).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = DistributionField::new(grid.clone(), (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
        let e: Vec<f64> = (0..16).map(|_| e_scale * rng.gen_range(-1.0..1.0)).collect();
        let phi = phi_transport(&f, &e).unwrap();
        let integral: f64 = grid.cell_area() * phi.iter().sum::<f64>();
        prop_assert!(integral.abs() < 1e-12, "{}", integral);
    }

    #[test]
    fn evaluations_are_linear(seed in any::<u64>(), a in -2.0..2.0f64) {
        let grid = Arc::new(PhaseGrid::from_bounds(8, 0.0, 1.0, 8, -1.0, 1.0).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rand_field = |rng: &mut ChaCha8Rng| {
            DistributionField::new(grid.clone(), (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
        };
        let u = rand_field(&mut rng);
        let w = rand_field(&mut rng);
        let sum = u.with_values(u.values().iter().zip(w.values()).map(|(p, q)| a * p + q).collect()).unwrap();
        let disp = random_displacement(grid.len(), &mut rng, 0.02);
        let e: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let pts = displaced_points(&grid, &disp);

        type Op<'a> = Box<dyn Fn(&DistributionField<f64>) -> Vec<f64> + 'a>;
        let ops: Vec<Op<'_>> = vec![
            Box::new(|f| taylor_shifted_eval(f, &disp, 3).unwrap()),
            Box::new(|f| exact_shifted_eval(f, &pts).unwrap()),
            Box::new(|f| phi_transport(f, &e).unwrap()),
        ];
        for op in &ops {
            let lhs = op(&sum);
            let (ou, ow) = (op(&u), op(&w));
            for k in 0..lhs.len() {
                prop_assert!((lhs[k] - (a * ou[k] + ow[k])).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn nodes_are_fixed_by_zero_displacement(seed in any::<u64>(), s in 1usize..6) {
        let grid = grid16();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = band_limited(grid.clone(), &mut rng, 3);
        let disp = DisplacementField::zeros(grid.len());
        prop_assert_eq!(taylor_shifted_eval(&f, &disp, s).unwrap(), f.values().to_vec());
        let direct = exact_shifted_eval(&f, &displaced_points(&grid, &disp)).unwrap();
        prop_assert_eq!(direct, f.values().to_vec());
    }

    #[test]
    fn shifts_wrap_periodically(seed in any::<u64>(), turns in -2i32..=2) {
        let grid = grid16();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = band_limited(grid.clone(), &mut rng, 3);
        let (x, v) = (rng.gen_range(0.0..2.0 * PI), rng.gen_range(-PI..PI));
        let lx = 2.0 * PI * turns as f64;
        let a = exact_shifted_eval(&f, &[(x, v)]).unwrap()[0];
        let b = exact_shifted_eval(&f, &[(x + lx, v - lx)]).unwrap()[0];
        prop_assert!((a - b).abs() < 1e-10);
    }
}
