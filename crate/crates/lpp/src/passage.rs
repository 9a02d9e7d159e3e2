//! Exact last-passage computations on planar point sets.
//!
//! The passage value between `p <= q` is the maximal length of a chain
//! (strictly increasing in both coordinates) of points inside the half-open
//! rectangle `(p.x, q.x] x (p.t, q.t]`. All routines here run patience
//! sorting over points in x order, so they cost `O(k log k)` in the number
//! of points involved; `lis_oracle` is the independent exhaustive check.

use crate::error::{Error, Result};
use crate::process::{PlanarPoint, PointSet, Rect};
use crate::step::{Orientation, StepFunction};

const ORACLE_LIMIT: usize = 20;

/// A maximizing chain realizing the passage value between two corners.
#[derive(Debug, Clone, PartialEq)]
pub struct Geodesic {
    pub from: PlanarPoint,
    pub to: PlanarPoint,
    pub path: Vec<PlanarPoint>,
}

fn query_rect(points: &PointSet, p: PlanarPoint, q: PlanarPoint) -> Result<Rect> {
    let rect = Rect::new(p.x, q.x, p.t, q.t)
        .map_err(|_| Error::Param(format!("corners not ordered: ({},{}) !<= ({},{})", p.x, p.t, q.x, q.t)))?;
    let region = points.region();
    if !region.contains_rect(&rect) {
        return Err(Error::Coverage { needed: rect, region });
    }
    Ok(rect)
}

/// Patience pass over time keys supplied in strictly increasing x order.
/// Returns the number of piles, i.e. the longest chain length.
fn pile_count(ts: impl Iterator<Item = f64>) -> i64 {
    let mut piles: Vec<f64> = Vec::new();
    for t in ts {
        let k = piles.partition_point(|&top| top < t);
        if k == piles.len() {
            piles.push(t);
        } else {
            piles[k] = t;
        }
    }
    piles.len() as i64
}

/// Longest chain count in the half-open rectangle `(p, q]`.
pub fn last_passage(points: &PointSet, p: PlanarPoint, q: PlanarPoint) -> Result<i64> {
    let rect = query_rect(points, p, q)?;
    Ok(pile_count(
        points
            .slice_x(rect.x0, rect.x1)
            .iter()
            .filter(|pt| rect.t0 < pt.t && pt.t <= rect.t1)
            .map(|pt| pt.t),
    ))
}

/// Exhaustive maximum over all increasing subsequences; refuses more than
/// 20 points. Independent of the patience path.
pub fn lis_oracle(points: &PointSet, p: PlanarPoint, q: PlanarPoint) -> Result<i64> {
    let rect = query_rect(points, p, q)?;
    let pts: Vec<PlanarPoint> = points
        .slice_x(rect.x0, rect.x1)
        .iter()
        .filter(|pt| rect.t0 < pt.t && pt.t <= rect.t1)
        .copied()
        .collect();
    if pts.len() > ORACLE_LIMIT {
        return Err(Error::TooManyPoints { count: pts.len(), limit: ORACLE_LIMIT });
    }
    fn chain_from(i: usize, pts: &[PlanarPoint]) -> i64 {
        let mut best = 0;
        for j in 0..pts.len() {
            if pts[i].strictly_below(&pts[j]) {
                best = best.max(chain_from(j, pts));
            }
        }
        1 + best
    }
    let mut best = 0;
    for i in 0..pts.len() {
        best = best.max(chain_from(i, &pts));
    }
    Ok(best)
}

/// Passage values from source `[z0]_0` to every target `[x]_t` with
/// `x <= x_max`, as a step function in x. One patience sweep.
pub fn passage_profile(points: &PointSet, z0: f64, t: f64, x_max: f64) -> Result<StepFunction> {
    let rect = Rect::new(z0, x_max, 0.0, t)?;
    let region = points.region();
    if !region.contains_rect(&rect) {
        return Err(Error::Coverage { needed: rect, region });
    }
    let mut piles: Vec<f64> = Vec::new();
    let mut breakpoints: Vec<f64> = Vec::new();
    let mut values: Vec<i64> = Vec::new();
    for pt in points.slice_x(z0, x_max) {
        if !(0.0 < pt.t && pt.t <= t) {
            continue;
        }
        let k = piles.partition_point(|&top| top < pt.t);
        if k == piles.len() {
            piles.push(pt.t);
            breakpoints.push(pt.x);
            values.push(piles.len() as i64);
        } else {
            piles[k] = pt.t;
        }
    }
    StepFunction::new(0, breakpoints, values, Orientation::NondecreasingInX)
}

/// Passage values from every source `[z]_0` with `z >= z_min` to the fixed
/// target `[x]_t`, as a step function in z. One reverse patience sweep:
/// processing points by decreasing x and keying on decreasing time computes
/// the longest chain of the processed suffix.
pub fn suffix_profile(points: &PointSet, target: PlanarPoint, z_min: f64) -> Result<StepFunction> {
    let rect = Rect::new(z_min, target.x, 0.0, target.t)?;
    let region = points.region();
    if !region.contains_rect(&rect) {
        return Err(Error::Coverage { needed: rect, region });
    }
    let slice = points.slice_x(z_min, target.x);
    let mut piles: Vec<f64> = Vec::new();
    let mut breakpoints: Vec<f64> = Vec::new();
    let mut values: Vec<i64> = Vec::new();
    for pt in slice.iter().rev() {
        if !(0.0 < pt.t && pt.t <= target.t) {
            continue;
        }
        let key = -pt.t;
        let k = piles.partition_point(|&top| top < key);
        if k == piles.len() {
            // the suffix chain grows: value drops by one when z crosses pt.x
            breakpoints.push(pt.x);
            values.push(piles.len() as i64);
            piles.push(key);
        } else {
            piles[k] = key;
        }
    }
    breakpoints.reverse();
    values.reverse();
    StepFunction::new(piles.len() as i64, breakpoints, values, Orientation::NonincreasingInZ)
}

/// A maximizing chain for `(p, q]` under the canonical patience selection:
/// each point links to the current top of the previous pile, and the chain
/// is rebuilt from the last top of the final pile.
pub fn geodesic(points: &PointSet, p: PlanarPoint, q: PlanarPoint) -> Result<Geodesic> {
    let rect = query_rect(points, p, q)?;
    let pts: Vec<PlanarPoint> = points
        .slice_x(rect.x0, rect.x1)
        .iter()
        .filter(|pt| rect.t0 < pt.t && pt.t <= rect.t1)
        .copied()
        .collect();
    let mut tops: Vec<f64> = Vec::new();
    let mut top_idx: Vec<usize> = Vec::new();
    let mut prev: Vec<usize> = vec![usize::MAX; pts.len()];
    for (i, pt) in pts.iter().enumerate() {
        let k = tops.partition_point(|&top| top < pt.t);
        if k == tops.len() {
            tops.push(pt.t);
            top_idx.push(i);
        } else {
            tops[k] = pt.t;
            top_idx[k] = i;
        }
        if k > 0 {
            prev[i] = top_idx[k - 1];
        }
    }
    let mut path = Vec::with_capacity(tops.len());
    if let Some(&last) = top_idx.last() {
        let mut i = last;
        loop {
            path.push(pts[i]);
            if prev[i] == usize::MAX {
                break;
            }
            i = prev[i];
        }
        path.reverse();
    }
    Ok(Geodesic { from: p, to: q, path })
}
