//! Right-continuous integer-valued step functions, the exact representation
//! of passage profiles.

use crate::error::{Error, Result};

/// Monotonicity direction of a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Passage value as a function of the target abscissa x.
    NondecreasingInX,
    /// Passage value as a function of the source abscissa z.
    NonincreasingInZ,
}

/// A right-continuous step function: `value(a) = initial_value` for
/// `a < breakpoints[0]`, and `values[i]` on `[breakpoints[i], breakpoints[i+1})`.
/// Breakpoints are strictly increasing and every jump is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    initial_value: i64,
    breakpoints: Vec<f64>,
    values: Vec<i64>,
    orientation: Orientation,
}

impl StepFunction {
    pub fn new(
        initial_value: i64,
        breakpoints: Vec<f64>,
        values: Vec<i64>,
        orientation: Orientation,
    ) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::Param("breakpoints/values length mismatch".into()));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Param("breakpoints must be strictly increasing".into()));
        }
        let mut prev = initial_value;
        for &v in &values {
            let ok = match orientation {
                Orientation::NondecreasingInX => v > prev,
                Orientation::NonincreasingInZ => v < prev,
            };
            if !ok {
                return Err(Error::Param("jumps must respect the declared orientation".into()));
            }
            prev = v;
        }
        Ok(StepFunction { initial_value, breakpoints, values, orientation })
    }

    pub fn constant(value: i64, orientation: Orientation) -> Self {
        StepFunction { initial_value: value, breakpoints: Vec::new(), values: Vec::new(), orientation }
    }

    pub fn value_at(&self, a: f64) -> i64 {
        let idx = self.breakpoints.partition_point(|&b| b <= a);
        if idx == 0 {
            self.initial_value
        } else {
            self.values[idx - 1]
        }
    }

    pub fn initial_value(&self) -> i64 {
        self.initial_value
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Breakpoints in `(lo, hi]` with the value to the right of each, as a
    /// subrange of indices.
    pub fn jump_range(&self, lo: f64, hi: f64) -> std::ops::Range<usize> {
        let a = self.breakpoints.partition_point(|&b| b <= lo);
        let b = self.breakpoints.partition_point(|&b| b <= hi);
        a..b
    }
}
