//! The boundary-augmented passage process, its exit points, the coupled
//! comparison audit, the scaling events, and the particle dynamics.
//!
//! For a bulk point set P and an axis boundary process of intensity lambda,
//! the augmented passage value to a target `[x]_t` is
//!
//! ```text
//! L_lambda[x]_t = sup_{z <= x} { nu(z) + L([z]_0, [x]_t) }
//! ```
//!
//! where `nu` is the signed boundary count. Both `nu` and the suffix
//! profile `z -> L([z]_0,[x]_t)` are right-continuous step functions, so
//! the supremum over the sampled window is computed exactly by enumerating
//! the constant pieces of their sum. The exit points are the infimum and
//! supremum of the attaining set. If the attaining set touches the left
//! edge of the window, the window is too small; callers extend it by
//! restriction-consistent doubling, which never disturbs the realization
//! already drawn.

use crate::error::{Error, Result};
use crate::passage::{passage_profile, suffix_profile};
use crate::process::{BoundaryProcess, PlanarPoint, PointSet};
use std::collections::BTreeSet;
use std::ops::Bound::{Excluded, Unbounded};

/// Exit points of the augmented passage value at one target.
///
/// `z_left <= z_right <= x`; `max_value` is the augmented passage value.
/// `z_right` is the supremum of the attaining set and `z_left` its infimum,
/// so `z_right` itself need not attain (the attaining set is a union of
/// half-open pieces).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExitPoints {
    pub z_left: f64,
    pub z_right: f64,
    pub max_value: i64,
    /// Set when the attaining set touches the window's left edge; the
    /// reported values are then unreliable and the caller must extend.
    pub left_edge_indeterminate: bool,
}

/// Scaling regimes for the coupling events: the pair of boundary
/// intensities bracketing 1 and the second test abscissa.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalingParams {
    /// Modulus control at the transversal scale `n^(2/3)`:
    /// `lambda_pm = 1 +- delta^(-beta) / n^(1/3)`, second target at
    /// `n + 2 n^(2/3)`. Requires `beta in (1/3,1)`, `delta in (0,1)`.
    Tightness { n: u64, beta: f64, delta: f64 },
    /// Increment control at the short scale `n^gamma`:
    /// `lambda_pm = 1 +- n^(-gamma_prime/2)`, second target at `n + n^gamma`.
    /// Requires `0 < gamma < gamma_prime < 2/3`.
    LocalFluct { n: u64, gamma: f64, gamma_prime: f64 },
    /// Blow-up control at scale `epsilon n^(2/3)`:
    /// `lambda_pm = 1 +- epsilon^(-beta) / n^(1/3)`, second target at
    /// `n + n^(2/3)`. Requires `beta in (0,1/2)`, `epsilon in (0,1)`.
    LocalAiry { n: u64, beta: f64, epsilon: f64 },
}

impl ScalingParams {
    pub fn n(&self) -> u64 {
        match *self {
            ScalingParams::Tightness { n, .. }
            | ScalingParams::LocalFluct { n, .. }
            | ScalingParams::LocalAiry { n, .. } => n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ScalingParams::Tightness { n, beta, delta } => {
                if n < 1 {
                    return Err(Error::Param("n must be >= 1".into()));
                }
                if !(beta > 1.0 / 3.0 && beta < 1.0) {
                    return Err(Error::Param(format!("beta {beta} must lie in (1/3, 1)")));
                }
                if !(delta > 0.0 && delta < 1.0) {
                    return Err(Error::Param(format!("delta {delta} must lie in (0, 1)")));
                }
            }
            ScalingParams::LocalFluct { n, gamma, gamma_prime } => {
                if n < 1 {
                    return Err(Error::Param("n must be >= 1".into()));
                }
                if !(gamma > 0.0 && gamma < 2.0 / 3.0) {
                    return Err(Error::Param(format!("gamma {gamma} must lie in (0, 2/3)")));
                }
                if !(gamma_prime > gamma && gamma_prime < 2.0 / 3.0) {
                    return Err(Error::Param(format!(
                        "gamma_prime {gamma_prime} must lie in (gamma, 2/3)"
                    )));
                }
            }
            ScalingParams::LocalAiry { n, beta, epsilon } => {
                if n < 1 {
                    return Err(Error::Param("n must be >= 1".into()));
                }
                if !(beta > 0.0 && beta < 0.5) {
                    return Err(Error::Param(format!("beta {beta} must lie in (0, 1/2)")));
                }
                if !(epsilon > 0.0 && epsilon < 1.0) {
                    return Err(Error::Param(format!("epsilon {epsilon} must lie in (0, 1)")));
                }
            }
        }
        self.lambda_pm().map(|_| ())
    }

    /// The bracketing intensities `(lambda_plus, lambda_minus)`.
    pub fn lambda_pm(&self) -> Result<(f64, f64)> {
        let dev = match *self {
            ScalingParams::Tightness { n, beta, delta } => {
                delta.powf(-beta) / (n as f64).powf(1.0 / 3.0)
            }
            ScalingParams::LocalFluct { n, gamma_prime, .. } => {
                (n as f64).powf(-gamma_prime / 2.0)
            }
            ScalingParams::LocalAiry { n, beta, epsilon } => {
                epsilon.powf(-beta) / (n as f64).powf(1.0 / 3.0)
            }
        };
        let minus = 1.0 - dev;
        if !(minus > 0.0) {
            return Err(Error::Param(format!(
                "lambda_minus = {minus} <= 0; n too small for the requested deviation"
            )));
        }
        Ok((1.0 + dev, minus))
    }

    /// Abscissa of the second event test, at time n.
    pub fn second_target_x(&self) -> f64 {
        let n = self.n() as f64;
        match *self {
            ScalingParams::Tightness { .. } => n + 2.0 * n.powf(2.0 / 3.0),
            ScalingParams::LocalFluct { gamma, .. } => n + n.powf(gamma),
            ScalingParams::LocalAiry { .. } => n + n.powf(2.0 / 3.0),
        }
    }
}

/// Exact exit-point scan at one target. The candidate domain is
/// `[w_left, x]` with `w_left` the boundary window's left edge; the bulk
/// region must cover `(w_left, x] x (0, t]`.
pub fn exit_points(
    bulk: &PointSet,
    boundary: &BoundaryProcess,
    target: PlanarPoint,
) -> Result<ExitPoints> {
    let (w_left, w_right) = boundary.window();
    if target.x > w_right {
        return Err(Error::OutsideWindow { z: target.x, w_left, w_right });
    }
    if target.x < w_left {
        return Err(Error::OutsideWindow { z: target.x, w_left, w_right });
    }
    let suffix = suffix_profile(bulk, target, w_left)?;

    let locs = boundary.slice(w_left, target.x);
    let jumps = suffix.jump_range(w_left, target.x);
    let bps = &suffix.breakpoints()[jumps.clone()];
    let vals = &suffix.values()[jumps];

    let mut nu_cur = boundary.nu(w_left)?;
    let mut s_cur = suffix.value_at(w_left);

    struct PieceScan {
        best: i64,
        z_left: f64,
        z_right: f64,
        first_start: f64,
    }
    impl PieceScan {
        fn consider(&mut self, start: f64, end: f64, value: i64, closed_end: bool) {
            if start == end && !closed_end {
                return; // empty piece between coincident breakpoints
            }
            if value > self.best {
                self.best = value;
                self.z_left = start;
                self.z_right = end;
                self.first_start = start;
            } else if value == self.best {
                self.z_right = end;
            }
        }
    }
    let mut scan = PieceScan { best: i64::MIN, z_left: f64::NAN, z_right: f64::NAN, first_start: f64::NAN };

    let mut piece_start = w_left;
    let mut li = 0usize;
    let mut bi = 0usize;
    while li < locs.len() || bi < bps.len() {
        let next_loc = locs.get(li).copied().unwrap_or(f64::INFINITY);
        let next_bp = bps.get(bi).copied().unwrap_or(f64::INFINITY);
        let b = next_loc.min(next_bp);
        scan.consider(piece_start, b, nu_cur + s_cur, false);
        if next_loc == b {
            nu_cur += 1;
            li += 1;
        }
        if next_bp == b {
            s_cur = vals[bi];
            bi += 1;
        }
        piece_start = b;
    }
    scan.consider(piece_start, target.x, nu_cur + s_cur, true);

    Ok(ExitPoints {
        z_left: scan.z_left,
        z_right: scan.z_right,
        max_value: scan.best,
        left_edge_indeterminate: scan.first_start == w_left,
    })
}

/// The boundary-augmented passage value `L_lambda[x]_t`. Errors if the
/// maximizer set touches the window's left edge, since the supremum over
/// `(-inf, x]` is then not certified by the sampled window.
pub fn l_lambda(bulk: &PointSet, boundary: &BoundaryProcess, target: PlanarPoint) -> Result<i64> {
    let ep = exit_points(bulk, boundary, target)?;
    if ep.left_edge_indeterminate {
        return Err(Error::WindowInadequate { w_left: boundary.window().0, doublings: 0 });
    }
    Ok(ep.max_value)
}

/// Exit points with adaptive window doubling: while the attaining set
/// touches the left edge, both the boundary window and the bulk region are
/// extended leftward (restriction-consistent, never resampled) up to
/// `max_doublings` times.
pub fn resolve_exit_points(
    bulk: &mut PointSet,
    boundary: &mut BoundaryProcess,
    target: PlanarPoint,
    max_doublings: u32,
) -> Result<ExitPoints> {
    let mut doublings = 0;
    loop {
        let ep = exit_points(bulk, boundary, target)?;
        if !ep.left_edge_indeterminate {
            return Ok(ep);
        }
        if doublings == max_doublings {
            return Err(Error::WindowInadequate { w_left: boundary.window().0, doublings });
        }
        let new_left = boundary.window().0 * 2.0;
        boundary.extend_left_auto(new_left)?;
        let covered = boundary.window().0;
        if bulk.region().x0 > covered {
            bulk.extend_left_auto(covered)?;
        }
        doublings += 1;
    }
}

/// The coupling event: the left exit point under `lambda_plus` at `[n]_n`
/// is nonnegative and the right exit point under `lambda_minus` at the
/// regime's second target is nonpositive.
pub fn evaluate_event(
    bulk: &mut PointSet,
    boundary_plus: &mut BoundaryProcess,
    boundary_minus: &mut BoundaryProcess,
    params: &ScalingParams,
    max_doublings: u32,
) -> Result<bool> {
    let n = params.n() as f64;
    let first = PlanarPoint::new(n, n);
    let second = PlanarPoint::new(params.second_target_x(), n);
    let ep_plus = resolve_exit_points(bulk, boundary_plus, first, max_doublings)?;
    let ep_minus = resolve_exit_points(bulk, boundary_minus, second, max_doublings)?;
    Ok(ep_plus.z_left >= 0.0 && ep_minus.z_right <= 0.0)
}

/// Outcome of a pathwise comparison audit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AuditReport {
    /// Pairs `x <= y` for which at least one exit condition applied.
    pub checked_pairs: u64,
    /// Inequality failures; the comparison is deterministic under the
    /// coupling, so any nonzero count is an implementation fault.
    pub violations: u64,
}

impl AuditReport {
    pub fn merge(self, other: AuditReport) -> AuditReport {
        AuditReport {
            checked_pairs: self.checked_pairs + other.checked_pairs,
            violations: self.violations + other.violations,
        }
    }
}

/// Pathwise local comparison at every grid pair `x <= y`, at time `t`:
/// if the left exit point at `x` is nonnegative, the plain increment is
/// dominated by the augmented increment; if the right exit point at `y` is
/// nonpositive, the reverse holds. Windows extend adaptively as needed.
pub fn comparison_audit(
    bulk: &mut PointSet,
    boundary: &mut BoundaryProcess,
    t: f64,
    x_grid: &[f64],
    max_doublings: u32,
) -> Result<AuditReport> {
    if x_grid.is_empty() {
        return Ok(AuditReport::default());
    }
    if x_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Param("x grid must be strictly increasing".into()));
    }
    if x_grid[0] < 0.0 {
        return Err(Error::Param("comparison targets must be nonnegative".into()));
    }
    let x_max = *x_grid.last().unwrap();
    let profile = passage_profile(bulk, 0.0, t, x_max)?;
    let plain: Vec<i64> = x_grid.iter().map(|&x| profile.value_at(x)).collect();

    let mut augmented = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        let ep = resolve_exit_points(bulk, boundary, PlanarPoint::new(x, t), max_doublings)?;
        augmented.push(ep);
    }

    let mut report = AuditReport::default();
    for i in 0..x_grid.len() {
        for j in (i + 1)..x_grid.len() {
            let d_plain = plain[j] - plain[i];
            let d_aug = augmented[j].max_value - augmented[i].max_value;
            let mut applied = false;
            if augmented[i].z_left >= 0.0 {
                applied = true;
                if !(d_plain <= d_aug) {
                    report.violations += 1;
                }
            }
            if augmented[j].z_right <= 0.0 {
                applied = true;
                if !(d_plain >= d_aug) {
                    report.violations += 1;
                }
            }
            if applied {
                report.checked_pairs += 1;
            }
        }
    }
    Ok(report)
}

/// A finite particle configuration on a window, ordered by position.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleConfig {
    positions: Vec<f64>,
    window: (f64, f64),
    time_stamp: f64,
}

impl ParticleConfig {
    pub fn new(mut positions: Vec<f64>, window: (f64, f64), time_stamp: f64) -> Result<Self> {
        if !(window.0 <= window.1) {
            return Err(Error::Param("invalid particle window".into()));
        }
        positions.sort_by(f64::total_cmp);
        if positions.iter().any(|&p| p <= window.0 || p > window.1) {
            return Err(Error::Param("particle outside window".into()));
        }
        Ok(ParticleConfig { positions, window, time_stamp })
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    pub fn time_stamp(&self) -> f64 {
        self.time_stamp
    }

    /// Number of particles in `(a, b]`.
    pub fn count_in(&self, a: f64, b: f64) -> usize {
        let lo = self.positions.partition_point(|&p| p <= a);
        let hi = self.positions.partition_point(|&p| p <= b);
        hi - lo
    }
}

fn ordered_bits(p: f64) -> u64 {
    let b = p.to_bits();
    if b >> 63 == 1 {
        !b
    } else {
        b | 0x8000_0000_0000_0000
    }
}

fn from_ordered_bits(k: u64) -> f64 {
    if k >> 63 == 1 {
        f64::from_bits(k & 0x7FFF_FFFF_FFFF_FFFF)
    } else {
        f64::from_bits(!k)
    }
}

/// Run the particle dynamics over the bulk points in `(time_stamp, t_end]`,
/// in time order: at a bulk point `(x, s)` the smallest particle strictly
/// right of `x` jumps to `x`; if there is none, a particle is created at
/// `x`. Ordered-set implementation, `O(N log N)` overall.
pub fn evolve(initial: &ParticleConfig, bulk: &PointSet, t_end: f64) -> ParticleConfig {
    let (w0, w1) = initial.window;
    let mut events: Vec<&PlanarPoint> = bulk
        .points()
        .iter()
        .filter(|p| initial.time_stamp < p.t && p.t <= t_end && w0 < p.x && p.x <= w1)
        .collect();
    events.sort_by(|a, b| a.t.total_cmp(&b.t).then(a.x.total_cmp(&b.x)));

    let mut set: BTreeSet<u64> = initial.positions.iter().map(|&p| ordered_bits(p)).collect();
    for ev in events {
        let key = ordered_bits(ev.x);
        let succ = set.range((Excluded(key), Unbounded)).next().copied();
        if let Some(s) = succ {
            set.remove(&s);
        }
        set.insert(key);
    }
    ParticleConfig {
        positions: set.into_iter().map(from_ordered_bits).collect(),
        window: initial.window,
        time_stamp: t_end,
    }
}
