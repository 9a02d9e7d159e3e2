//! Realized Poisson inputs: the planar bulk process and the axis boundary
//! process, with restriction-consistent leftward extension.
//!
//! Point sets are sampled by the exponential-gap construction: the
//! x-projections of a homogeneous planar Poisson process form a 1-d Poisson
//! process of rate `intensity * height`, so gaps are drawn `Exp(rate)` and
//! each point gets an independent uniform time coordinate. This yields the
//! exact Poisson law (count `Poisson(intensity * area)`, locations i.i.d.
//! uniform) with the output already sorted by x.
//!
//! Windows extend to the left on a doubling grid anchored at the original
//! left edge: strip `j` covers `(anchor*2^j, anchor*2^(j-1)]` and is drawn
//! from lane `j` of the extension substream. Existing points are never
//! touched, so extension preserves the exact realization (restriction
//! consistency), and a combined extension equals the same strips applied
//! one at a time.

use crate::error::{Error, Result};
use crate::rng::{SeedSpec, Stream, Substream};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarPoint {
    pub x: f64,
    pub t: f64,
}

impl PlanarPoint {
    pub fn new(x: f64, t: f64) -> Self {
        PlanarPoint { x, t }
    }

    /// Strict coordinatewise order, the chain relation.
    pub fn strictly_below(&self, other: &PlanarPoint) -> bool {
        self.x < other.x && self.t < other.t
    }
}

/// Half-open planar rectangle `(x0, x1] x (t0, t1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub t0: f64,
    pub t1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, t0: f64, t1: f64) -> Result<Self> {
        if !(x0 <= x1 && t0 <= t1)
            || !(x0.is_finite() && x1.is_finite() && t0.is_finite() && t1.is_finite())
        {
            return Err(Error::Param(format!(
                "invalid rectangle ({x0},{x1}]x({t0},{t1}]"
            )));
        }
        Ok(Rect { x0, x1, t0, t1 })
    }

    pub fn area(&self) -> f64 {
        (self.x1 - self.x0) * (self.t1 - self.t0)
    }

    pub fn contains_point(&self, p: &PlanarPoint) -> bool {
        self.x0 < p.x && p.x <= self.x1 && self.t0 < p.t && p.t <= self.t1
    }

    pub fn contains_rect(&self, r: &Rect) -> bool {
        self.x0 <= r.x0 && r.x1 <= self.x1 && self.t0 <= r.t0 && r.t1 <= self.t1
    }
}

/// A sampled planar Poisson point process, sorted by x.
///
/// Invariants: all points lie in `region` (half-open convention) and no two
/// points share an x or a t coordinate. The gap construction makes x
/// coordinates strictly increasing; the rare finite-precision t collision
/// is resolved by redrawing that time from the same stream.
#[derive(Debug, Clone)]
pub struct PointSet {
    points: Vec<PlanarPoint>,
    region: Rect,
    intensity: f64,
    seed: Option<SeedSpec>,
    /// Original left edge; extension strips double away from it.
    anchor_x0: f64,
    extensions: u32,
}

impl PointSet {
    /// Sample a homogeneous planar Poisson process on `region`.
    pub fn sample(region: Rect, intensity: f64, seed: SeedSpec) -> Result<Self> {
        if !(intensity >= 0.0) || !intensity.is_finite() {
            return Err(Error::Param(format!("intensity {intensity} must be >= 0")));
        }
        let mut stream = seed.stream();
        let mut points = sample_planar_strip(
            region.x0, region.x1, region.t0, region.t1, intensity, &mut stream,
        );
        resolve_batch_ties(&[], &mut points, region.t0, region.t1, &mut stream);
        Ok(PointSet {
            points,
            region,
            intensity,
            seed: Some(seed),
            anchor_x0: region.x0,
            extensions: 0,
        })
    }

    /// Ingest explicit points (tests and oracle configurations). Points are
    /// sorted; duplicate coordinates are rejected rather than resampled.
    pub fn from_points(mut points: Vec<PlanarPoint>, region: Rect, intensity: f64) -> Result<Self> {
        points.sort_by(|a, b| a.x.total_cmp(&b.x));
        for p in &points {
            if !region.contains_point(p) {
                return Err(Error::Param(format!(
                    "point ({}, {}) outside region",
                    p.x, p.t
                )));
            }
        }
        for w in points.windows(2) {
            if w[0].x == w[1].x {
                return Err(Error::Degenerate(format!("duplicate x coordinate {}", w[0].x)));
            }
        }
        let mut ts: Vec<u64> = points.iter().map(|p| p.t.to_bits()).collect();
        ts.sort_unstable();
        if ts.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Degenerate("duplicate t coordinate".into()));
        }
        Ok(PointSet {
            points,
            region,
            intensity,
            seed: None,
            anchor_x0: region.x0,
            extensions: 0,
        })
    }

    pub fn points(&self) -> &[PlanarPoint] {
        &self.points
    }

    pub fn region(&self) -> Rect {
        self.region
    }

    pub fn intensity(&self) -> f64 {
        self.intensity
    }

    /// Index of the first point with `x > x_bound`.
    pub fn index_above(&self, x_bound: f64) -> usize {
        self.points.partition_point(|p| p.x <= x_bound)
    }

    /// Points with x in `(x_lo, x_hi]`.
    pub fn slice_x(&self, x_lo: f64, x_hi: f64) -> &[PlanarPoint] {
        &self.points[self.index_above(x_lo)..self.index_above(x_hi)]
    }

    /// Number of points inside a rectangle (half-open).
    pub fn count_in(&self, rect: &Rect) -> usize {
        self.slice_x(rect.x0, rect.x1)
            .iter()
            .filter(|p| rect.t0 < p.t && p.t <= rect.t1)
            .count()
    }

    /// Extend the region left to cover `new_x0`, appending independent
    /// Poisson strips only; existing points are unchanged. The resulting
    /// left edge lands on the doubling grid, so it may overshoot the
    /// request. The seed must carry an extension substream.
    pub fn extend_left(&mut self, new_x0: f64, seed: SeedSpec) -> Result<()> {
        require_extension_substream(&seed)?;
        if !(new_x0 < self.region.x0) {
            return Err(Error::Param(format!(
                "new left edge {new_x0} must lie left of current edge {}",
                self.region.x0
            )));
        }
        if !(self.anchor_x0 < 0.0) {
            return Err(Error::Param(format!(
                "cannot extend: original left edge {} is not negative",
                self.anchor_x0
            )));
        }
        let (t0, t1) = (self.region.t0, self.region.t1);
        let mut strips: Vec<Vec<PlanarPoint>> = Vec::new();
        let mut added = 0u32;
        while self.strip_edge(self.extensions + added) > new_x0 {
            let j = self.extensions + added + 1;
            let hi = self.strip_edge(j - 1);
            let lo = self.strip_edge(j);
            let mut lane = seed.lane_stream(j as u64);
            let mut strip = sample_planar_strip(lo, hi, t0, t1, self.intensity, &mut lane);
            let mut existing: Vec<u64> = self.points.iter().map(|p| p.t.to_bits()).collect();
            existing.extend(strips.iter().flatten().map(|p| p.t.to_bits()));
            existing.sort_unstable();
            resolve_batch_ties(&existing, &mut strip, t0, t1, &mut lane);
            strips.push(strip);
            added += 1;
        }
        let mut new_points =
            Vec::with_capacity(self.points.len() + strips.iter().map(Vec::len).sum::<usize>());
        for strip in strips.iter().rev() {
            new_points.extend_from_slice(strip);
        }
        new_points.extend_from_slice(&self.points);
        self.points = new_points;
        self.extensions += added;
        self.region.x0 = self.strip_edge(self.extensions);
        debug_assert!(self.points.windows(2).all(|w| w[0].x < w[1].x));
        Ok(())
    }

    /// Extend using the seed the set was sampled with, switched to the bulk
    /// extension substream.
    pub fn extend_left_auto(&mut self, new_x0: f64) -> Result<()> {
        let seed = self
            .seed
            .ok_or_else(|| Error::Param("point set has no seed; cannot auto-extend".into()))?;
        self.extend_left(new_x0, seed.with_substream(Substream::BulkExtension))
    }

    fn strip_edge(&self, j: u32) -> f64 {
        self.anchor_x0 * (1u64 << j) as f64
    }
}

fn require_extension_substream(seed: &SeedSpec) -> Result<()> {
    match seed.substream {
        Substream::BulkExtension | Substream::BoundaryExtension => Ok(()),
        _ => Err(Error::Param("extension requires an extension substream".into())),
    }
}

/// Draw the points of one vertical strip, sorted by x, with strictly
/// increasing x coordinates (a gap that rounds to zero is redrawn).
fn sample_planar_strip(
    x0: f64,
    x1: f64,
    t0: f64,
    t1: f64,
    intensity: f64,
    stream: &mut Stream,
) -> Vec<PlanarPoint> {
    let rate = intensity * (t1 - t0);
    let mut points = Vec::new();
    if rate <= 0.0 || x1 <= x0 {
        return points;
    }
    points.reserve((rate * (x1 - x0) * 1.05) as usize + 16);
    let mut x = x0;
    loop {
        let mut next = x + stream.next_exp(rate);
        while next == x {
            next = x + stream.next_exp(rate);
        }
        if next > x1 {
            break;
        }
        let t = stream.next_in(t0, t1);
        points.push(PlanarPoint::new(next, t));
        x = next;
    }
    points
}

/// Least-significant-digit radix sort, 4 passes of 16-bit digits; the tie
/// scan sorts millions of raw time bits per sample, where this beats the
/// comparison sort severalfold.
fn radix_sort_u64(data: &mut Vec<u64>) {
    let n = data.len();
    if n < (1 << 14) {
        data.sort_unstable();
        return;
    }
    let mut scratch = vec![0u64; n];
    let mut src_is_data = true;
    for pass in 0..4 {
        let shift = pass * 16;
        let mut counts = vec![0usize; 1 << 16];
        {
            let src: &[u64] = if src_is_data { data } else { &scratch };
            for &v in src {
                counts[((v >> shift) & 0xFFFF) as usize] += 1;
            }
        }
        let mut acc = 0usize;
        for c in counts.iter_mut() {
            let k = *c;
            *c = acc;
            acc += k;
        }
        let (src, dst): (&[u64], &mut [u64]) = if src_is_data {
            (&data[..], &mut scratch[..])
        } else {
            (&scratch[..], &mut data[..])
        };
        for &v in src {
            let d = ((v >> shift) & 0xFFFF) as usize;
            dst[counts[d]] = v;
            counts[d] += 1;
        }
        src_is_data = !src_is_data;
    }
    // four passes of flipping leave the result back in `data`
    debug_assert!(src_is_data);
}

/// Redraw batch times until no t coordinate repeats, either within the
/// batch or against `existing_bits` (sorted).
fn resolve_batch_ties(
    existing_bits: &[u64],
    batch: &mut [PlanarPoint],
    t0: f64,
    t1: f64,
    stream: &mut Stream,
) {
    loop {
        let mut scratch: Vec<u64> = batch.iter().map(|p| p.t.to_bits()).collect();
        radix_sort_u64(&mut scratch);
        let mut offenders: Vec<u64> = scratch
            .windows(2)
            .filter(|w| w[0] == w[1])
            .map(|w| w[0])
            .collect();
        for &b in &scratch {
            if existing_bits.binary_search(&b).is_ok() {
                offenders.push(b);
            }
        }
        if offenders.is_empty() {
            return;
        }
        offenders.sort_unstable();
        offenders.dedup();
        for value in offenders {
            let collides_existing = existing_bits.binary_search(&value).is_ok();
            let mut first_kept = false;
            for p in batch.iter_mut() {
                if p.t.to_bits() == value {
                    if !collides_existing && !first_kept {
                        first_kept = true;
                        continue;
                    }
                    p.t = stream.next_in(t0, t1);
                }
            }
        }
    }
}

/// The axis boundary process: a Poisson process of intensity `lambda` on a
/// window `(w_left, w_right]` straddling the origin.
#[derive(Debug, Clone)]
pub struct BoundaryProcess {
    lambda: f64,
    w_left: f64,
    w_right: f64,
    locations: Vec<f64>,
    seed: Option<SeedSpec>,
    anchor_left: f64,
    extensions: u32,
}

impl BoundaryProcess {
    pub fn sample(w_left: f64, w_right: f64, lambda: f64, seed: SeedSpec) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::Param(format!("lambda {lambda} must be > 0")));
        }
        if !(w_left < 0.0 && 0.0 < w_right) {
            return Err(Error::Param(format!(
                "window ({w_left},{w_right}] must straddle the origin"
            )));
        }
        let mut stream = seed.stream();
        let locations = sample_axis_strip(w_left, w_right, lambda, &mut stream);
        Ok(BoundaryProcess {
            lambda,
            w_left,
            w_right,
            locations,
            seed: Some(seed),
            anchor_left: w_left,
            extensions: 0,
        })
    }

    pub fn from_locations(
        mut locations: Vec<f64>,
        w_left: f64,
        w_right: f64,
        lambda: f64,
    ) -> Result<Self> {
        if !(w_left < 0.0 && 0.0 < w_right) {
            return Err(Error::Param(format!(
                "window ({w_left},{w_right}] must straddle the origin"
            )));
        }
        locations.sort_by(f64::total_cmp);
        if locations.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Degenerate("duplicate boundary location".into()));
        }
        if locations.iter().any(|&z| z <= w_left || z > w_right) {
            return Err(Error::Param("boundary location outside window".into()));
        }
        Ok(BoundaryProcess {
            lambda,
            w_left,
            w_right,
            locations,
            seed: None,
            anchor_left: w_left,
            extensions: 0,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn window(&self) -> (f64, f64) {
        (self.w_left, self.w_right)
    }

    pub fn locations(&self) -> &[f64] {
        &self.locations
    }

    /// Locations in `(lo, hi]` as a subslice.
    pub fn slice(&self, lo: f64, hi: f64) -> &[f64] {
        let a = self.locations.partition_point(|&z| z <= lo);
        let b = self.locations.partition_point(|&z| z <= hi);
        &self.locations[a..b]
    }

    /// The signed counting function: for `z > 0` the number of boundary
    /// points in `(0, z]`, for `z <= 0` minus the number in `(z, 0]`.
    /// Right-continuous with unit up-jumps at the locations; `nu(0) = 0`.
    pub fn nu(&self, z: f64) -> Result<i64> {
        if z < self.w_left || z > self.w_right {
            return Err(Error::OutsideWindow {
                z,
                w_left: self.w_left,
                w_right: self.w_right,
            });
        }
        if z > 0.0 {
            Ok(self.slice(0.0, z).len() as i64)
        } else {
            Ok(-(self.slice(z, 0.0).len() as i64))
        }
    }

    /// Extend the window left to cover `new_left` on the doubling grid.
    pub fn extend_left(&mut self, new_left: f64, seed: SeedSpec) -> Result<()> {
        require_extension_substream(&seed)?;
        if !(new_left < self.w_left) {
            return Err(Error::Param(format!(
                "new left edge {new_left} must lie left of current edge {}",
                self.w_left
            )));
        }
        let mut blocks: Vec<Vec<f64>> = Vec::new();
        let mut added = 0u32;
        while self.strip_edge(self.extensions + added) > new_left {
            let j = self.extensions + added + 1;
            let hi = self.strip_edge(j - 1);
            let lo = self.strip_edge(j);
            let mut lane = seed.lane_stream(j as u64);
            blocks.push(sample_axis_strip(lo, hi, self.lambda, &mut lane));
            added += 1;
        }
        let mut new_locations = Vec::with_capacity(
            self.locations.len() + blocks.iter().map(Vec::len).sum::<usize>(),
        );
        for block in blocks.iter().rev() {
            new_locations.extend_from_slice(block);
        }
        new_locations.extend_from_slice(&self.locations);
        self.locations = new_locations;
        self.extensions += added;
        self.w_left = self.strip_edge(self.extensions);
        debug_assert!(self.locations.windows(2).all(|w| w[0] < w[1]));
        Ok(())
    }

    pub fn extend_left_auto(&mut self, new_left: f64) -> Result<()> {
        let seed = self
            .seed
            .ok_or_else(|| Error::Param("boundary has no seed; cannot auto-extend".into()))?;
        self.extend_left(new_left, seed.with_substream(Substream::BoundaryExtension))
    }

    fn strip_edge(&self, j: u32) -> f64 {
        self.anchor_left * (1u64 << j) as f64
    }
}

/// Locations of a 1-d Poisson(rate) process on `(lo, hi]`, sorted, by the
/// exponential-gap construction.
pub fn poisson_locations(lo: f64, hi: f64, rate: f64, stream: &mut Stream) -> Vec<f64> {
    sample_axis_strip(lo, hi, rate, stream)
}

fn sample_axis_strip(lo: f64, hi: f64, rate: f64, stream: &mut Stream) -> Vec<f64> {
    let mut out = Vec::new();
    if hi <= lo {
        return out;
    }
    out.reserve((rate * (hi - lo) * 1.05) as usize + 16);
    let mut z = lo;
    loop {
        let mut next = z + stream.next_exp(rate);
        while next == z {
            next = z + stream.next_exp(rate);
        }
        if next > hi {
            break;
        }
        out.push(next);
        z = next;
    }
    out
}
