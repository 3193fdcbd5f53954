//! Text snapshots of the distribution: a `key = value` header, then the N·M nodal
//! values one per line in n-major order, 17 significant digits.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use slvp_core::{Distribution, Domain, Phase};

use crate::error::{AppError, AppResult};

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub nx: usize,
    pub nv: usize,
    pub domain: Domain<f64>,
    pub t: f64,
    pub values: Vec<f64>,
}

impl Snapshot {
    pub fn from_field(field: &Distribution, t: f64) -> Self {
        let g = field.grid();
        Self {
            nx: g.nx(),
            nv: g.nv(),
            domain: Domain::new(g.xgrid().origin(), g.xgrid().end(), g.vgrid().origin(), g.vgrid().end()),
            t,
            values: field.values().to_vec(),
        }
    }

    pub fn grid(&self) -> AppResult<Phase> {
        Ok(self.domain.grid(self.nx, self.nv)?)
    }

    /// The values as a field on `grid`, which must have the snapshot's shape and domain.
    pub fn to_field(&self, grid: Arc<Phase>) -> AppResult<Distribution> {
        if grid.nx() != self.nx || grid.nv() != self.nv || !self.domain.matches(&grid) {
            return Err(AppError::Config(format!(
                "snapshot grid {}×{} on {:?} does not match the run grid {}×{}",
                self.nx,
                self.nv,
                self.domain,
                grid.nx(),
                grid.nv()
            )));
        }
        // finiteness is the solver's business, so no check here
        Ok(Distribution::new(grid, self.values.clone())?)
    }

    pub fn to_text(&self) -> String {
        let d = &self.domain;
        let mut out = String::with_capacity(24 * (self.values.len() + 8));
        out.push_str("# slvp snapshot\n");
        let _ = writeln!(out, "N = {}", self.nx);
        let _ = writeln!(out, "M = {}", self.nv);
        for (k, v) in [("x_min", d.x_min), ("x_max", d.x_max), ("v_min", d.v_min), ("v_max", d.v_max), ("t", self.t)] {
            let _ = writeln!(out, "{k} = {v:.16e}");
        }
        for v in &self.values {
            let _ = writeln!(out, "{v:.16e}");
        }
        out
    }

    pub fn parse(text: &str, source: &str) -> AppResult<Self> {
        let bad = |line: usize, msg: String| AppError::Io(format!("{source}:{line}: {msg}"));
        let mut header: [Option<f64>; 7] = [None; 7];
        const NAMES: [&str; 7] = ["N", "M", "x_min", "x_max", "v_min", "v_max", "t"];
        let mut values = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some((k, v)) = line.split_once('=') {
                let slot = NAMES
                    .iter()
                    .position(|n| *n == k.trim())
                    .ok_or_else(|| bad(i + 1, format!("unknown header key '{}'", k.trim())))?;
                if !values.is_empty() {
                    return Err(bad(i + 1, "header line after the data".into()));
                }
                let v: f64 = v.trim().parse().map_err(|_| bad(i + 1, format!("bad number '{}'", v.trim())))?;
                header[slot] = Some(v);
            } else {
                values.push(line.parse::<f64>().map_err(|_| bad(i + 1, format!("bad value '{line}'")))?);
            }
        }
        let mut h = [0.0; 7];
        for (slot, name) in NAMES.iter().enumerate() {
            h[slot] = header[slot].ok_or_else(|| AppError::Io(format!("{source}: header lacks '{name}'")))?;
        }
        let count = |v: f64, name: &str| -> AppResult<usize> {
            if v >= 1.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(AppError::Io(format!("{source}: {name} must be a positive integer, got {v}")))
            }
        };
        let (nx, nv) = (count(h[0], "N")?, count(h[1], "M")?);
        if values.len() != nx * nv {
            return Err(AppError::Io(format!(
                "{source}: expected {} values for {nx}×{nv}, found {}",
                nx * nv,
                values.len()
            )));
        }
        Ok(Self {
            nx,
            nv,
            domain: Domain::new(h[2], h[3], h[4], h[5]),
            t: h[6],
            values,
        })
    }

    pub fn write(&self, path: &Path) -> AppResult<()> {
        fs::write(path, self.to_text()).map_err(|e| AppError::io(path, e))
    }

    pub fn read(path: &Path) -> AppResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }
}

/// File name of the snapshot taken after step `k`.
pub fn snapshot_name(k: usize) -> String {
    format!("snapshot_{k:06}.txt")
}

#[cfg(test)]
mod tests {
    use super::*;
    use slvp_core::scenarios::init_field;
    use slvp_core::Scenario;

    #[test]
    fn text_round_trip_is_exact() {
        let cfg = Scenario::landau(0.5);
        let grid = Arc::new(cfg.domain.grid(8, 16).unwrap());
        let field = init_field(&cfg, grid.clone()).unwrap();
        let snap = Snapshot::from_field(&field, 0.1 + 0.2);
        let back = Snapshot::parse(&snap.to_text(), "mem").unwrap();
        assert_eq!(back, snap);
        assert_eq!(back.to_field(grid).unwrap().values(), field.values());
    }

    #[test]
    fn special_values_survive() {
        let cfg = Scenario::manufactured();
        let grid = Arc::new(cfg.domain.grid(4, 4).unwrap());
        let mut values = vec![0.0; 16];
        values[3] = f64::NAN;
        values[5] = -0.0;
        values[7] = f64::MIN_POSITIVE / 8.0;
        let snap = Snapshot::from_field(&Distribution::new(grid, values).unwrap(), 0.0);
        let back = Snapshot::parse(&snap.to_text(), "mem").unwrap();
        assert!(back.values[3].is_nan());
        assert_eq!(back.values[5].to_bits(), (-0.0f64).to_bits());
        assert_eq!(back.values[7], f64::MIN_POSITIVE / 8.0);
    }

    #[test]
    fn malformed_files() {
        let good = Snapshot {
            nx: 4,
            nv: 4,
            domain: Scenario::manufactured().domain,
            t: 0.0,
            values: vec![1.0; 16],
        }
        .to_text();
        let truncated: String = good.lines().take(20).map(|l| format!("{l}\n")).collect();
        let cases = [
            truncated,
            good.replace("N = 4", "N = 4.5"),
            good.replace("M = 4\n", ""),
            good.replace("t = ", "tt = "),
            format!("{good}oops\n"),
        ];
        for text in cases {
            assert!(matches!(Snapshot::parse(&text, "mem"), Err(AppError::Io(_))), "{text}");
        }
    }

    #[test]
    fn grid_mismatch_is_a_config_error() {
        let cfg = Scenario::manufactured();
        let grid = Arc::new(cfg.domain.grid(4, 4).unwrap());
        let snap = Snapshot::from_field(&Distribution::zeros(grid), 0.0);
        let other = Arc::new(cfg.domain.grid(8, 4).unwrap());
        assert!(matches!(snap.to_field(other), Err(AppError::Config(_))));
    }
}
