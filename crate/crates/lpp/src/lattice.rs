//! The lattice last-passage model with exponential weights: field sampling,
//! dynamic-programming passage times over up-right paths, and an exhaustive
//! path-enumeration oracle.
//!
//! Path convention: the first step leaves the origin, so the origin's
//! weight is excluded and the endpoint's weight included.

use crate::error::{Error, Result};
use crate::rng::SeedSpec;

const ORACLE_STEP_LIMIT: usize = 16;

/// A lattice site `[x]_t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeSite {
    pub x: usize,
    pub t: usize,
}

impl LatticeSite {
    pub fn new(x: usize, t: usize) -> Self {
        LatticeSite { x, t }
    }
}

/// A rows x cols array of nonnegative weights; `rows` indexes time and
/// `cols` indexes space.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeField {
    rows: usize,
    cols: usize,
    weights: Vec<f64>,
}

impl LatticeField {
    /// Sample i.i.d. Exp(1) weights by inversion, `-ln(U)` with `U` in
    /// `(0, 1]`.
    pub fn sample_exp(rows: usize, cols: usize, seed: SeedSpec) -> Result<Self> {
        if rows < 1 || cols < 1 {
            return Err(Error::Param(format!("dimensions {rows}x{cols} must be >= 1")));
        }
        let mut stream = seed.stream();
        let weights = (0..rows * cols).map(|_| stream.next_exp(1.0)).collect();
        Ok(LatticeField { rows, cols, weights })
    }

    pub fn from_weights(rows: usize, cols: usize, weights: Vec<f64>) -> Result<Self> {
        if rows < 1 || cols < 1 || weights.len() != rows * cols {
            return Err(Error::Param("weight array does not match dimensions".into()));
        }
        if weights.iter().any(|&w| !(w >= 0.0)) {
            return Err(Error::Param("weights must be nonnegative".into()));
        }
        Ok(LatticeField { rows, cols, weights })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn weight(&self, x: usize, t: usize) -> f64 {
        self.weights[t * self.cols + x]
    }

    fn check_site(&self, s: LatticeSite) -> Result<()> {
        if s.x >= self.cols || s.t >= self.rows {
            return Err(Error::Param(format!(
                "site ({},{}) outside field {}x{}",
                s.x, s.t, self.cols, self.rows
            )));
        }
        Ok(())
    }
}

/// Maximal up-right path weight from `from` to `to`, excluding the origin's
/// weight and including the endpoint's. Row-streaming DP with O(width)
/// memory.
pub fn lattice_last_passage(field: &LatticeField, from: LatticeSite, to: LatticeSite) -> Result<f64> {
    field.check_site(from)?;
    field.check_site(to)?;
    if from.x > to.x || from.t > to.t {
        return Err(Error::Param("endpoints not ordered".into()));
    }
    if from == to {
        return Err(Error::Param("no admissible path from a site to itself".into()));
    }
    let width = to.x - from.x + 1;
    let mut dp = vec![0.0f64; width];
    for i in 1..width {
        dp[i] = dp[i - 1] + field.weight(from.x + i, from.t);
    }
    for t in (from.t + 1)..=to.t {
        dp[0] += field.weight(from.x, t);
        for i in 1..width {
            dp[i] = field.weight(from.x + i, t) + dp[i - 1].max(dp[i]);
        }
    }
    Ok(dp[width - 1])
}

/// Passage values from the origin to every `(x, row)` with `x_lo <= x <=
/// x_hi`, by one row-streaming DP pass.
pub fn lattice_row_profile(
    field: &LatticeField,
    row: usize,
    x_lo: usize,
    x_hi: usize,
) -> Result<Vec<f64>> {
    if x_lo > x_hi {
        return Err(Error::Param("empty x range".into()));
    }
    field.check_site(LatticeSite::new(x_hi, row))?;
    if row == 0 && x_lo == 0 {
        return Err(Error::Param("profile range may not include the origin".into()));
    }
    let mut dp = vec![0.0f64; x_hi + 1];
    for x in 1..=x_hi {
        dp[x] = dp[x - 1] + field.weight(x, 0);
    }
    for t in 1..=row {
        dp[0] += field.weight(0, t);
        for x in 1..=x_hi {
            dp[x] = field.weight(x, t) + dp[x - 1].max(dp[x]);
        }
    }
    Ok(dp[x_lo..=x_hi].to_vec())
}

/// Exhaustive enumeration over all up-right paths; refuses more than 16
/// steps. Independent of the DP.
pub fn lattice_path_oracle(field: &LatticeField, from: LatticeSite, to: LatticeSite) -> Result<f64> {
    field.check_site(from)?;
    field.check_site(to)?;
    if from.x > to.x || from.t > to.t {
        return Err(Error::Param("endpoints not ordered".into()));
    }
    if from == to {
        return Err(Error::Param("no admissible path from a site to itself".into()));
    }
    let steps = (to.x - from.x) + (to.t - from.t);
    if steps > ORACLE_STEP_LIMIT {
        return Err(Error::TooManyPaths { steps, limit: ORACLE_STEP_LIMIT });
    }
    fn best_from(field: &LatticeField, x: usize, t: usize, to: LatticeSite) -> f64 {
        let w = field.weight(x, t);
        if x == to.x && t == to.t {
            return w;
        }
        let mut best = f64::NEG_INFINITY;
        if x < to.x {
            best = best.max(best_from(field, x + 1, t, to));
        }
        if t < to.t {
            best = best.max(best_from(field, x, t + 1, to));
        }
        w + best
    }
    let mut best = f64::NEG_INFINITY;
    if from.x < to.x {
        best = best.max(best_from(field, from.x + 1, from.t, to));
    }
    if from.t < to.t {
        best = best.max(best_from(field, from.x, from.t + 1, to));
    }
    Ok(best)
}
