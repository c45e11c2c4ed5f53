use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fig2Row {
    pub p: f64,
    #[serde(rename = "N")]
    pub n: u32,
    pub prob: f64,
}

/// `Pr(X ≤ N) = 1 - (1-p)^N`, via `expm1`/`ln_1p` so small `p` keeps its digits.
pub fn geometric_success(p: f64, n: u32) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("p must lie in [0, 1], got {p}")));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    Ok(-(f64::from(n) * (-p).ln_1p()).exp_m1())
}

/// Full cross product, `p` varying fastest.
pub fn figure2_data(p_values: &[f64], n_values: &[u32]) -> Result<Vec<Fig2Row>> {
    let mut rows = Vec::with_capacity(p_values.len() * n_values.len());
    for &n in n_values {
        for &p in p_values {
            rows.push(Fig2Row {
                p,
                n,
                prob: geometric_success(p, n)?,
            });
        }
    }
    Ok(rows)
}

/// The two standard sweeps: N ∈ {2, 10, 50, 100} over p = 0, 0.01, .., 1,
/// then p ∈ {0.1, .., 0.5} over N = 1..=100.
pub fn default_figure2_grids() -> Vec<Fig2Row> {
    let ps: Vec<f64> = (0..=100).map(|i| f64::from(i) / 100.0).collect();
    let ns: Vec<u32> = (1..=100).collect();
    let mut rows = figure2_data(&ps, &[2, 10, 50, 100]).expect("valid grid");
    for p in [0.1, 0.2, 0.3, 0.4, 0.5] {
        rows.extend(figure2_data(&[p], &ns).expect("valid grid"));
    }
    rows
}
