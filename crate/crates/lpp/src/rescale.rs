//! Rescaled processes: pure affine transformations of passage values onto
//! the fluctuation scales, plus the integer snapping used by the lattice
//! variants.

use crate::error::{Error, Result};

/// Path families produced by the rescalers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathKind {
    /// `(L[n + 2u n^(2/3)]_n - (2n + 2u n^(2/3)) + u^2 n^(1/3)) / n^(1/3)`
    Airy,
    /// Centered short-scale increment process at scale `n^gamma`.
    Delta,
    /// Boundary-coupled increment process at the transversal scale.
    BPm,
    /// Boundary-coupled increment process at scale `n^gamma`.
    GammaPm,
    /// Blow-up of the Airy-scale path around 0.
    AiryLocal,
    LatticeAiry,
    LatticeDelta,
}

/// Scaling parameters carried alongside a path for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PathParams {
    pub n: u64,
    pub s: Option<f64>,
    pub gamma: Option<f64>,
    pub lambda: Option<f64>,
    pub epsilon: Option<f64>,
    pub mu: Option<f64>,
    pub sigma: Option<f64>,
}

/// Values of one rescaled process on a u-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RescaledPath {
    pub kind: PathKind,
    pub u_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub params: PathParams,
}

impl RescaledPath {
    pub fn new(kind: PathKind, u_grid: Vec<f64>, values: Vec<f64>, params: PathParams) -> Result<Self> {
        if u_grid.len() != values.len() {
            return Err(Error::Param("grid/values length mismatch".into()));
        }
        if u_grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Param("u grid must be strictly increasing".into()));
        }
        if matches!(kind, PathKind::Delta | PathKind::AiryLocal | PathKind::LatticeDelta) {
            if let Some(i) = find_grid_index(&u_grid, 0.0) {
                if values[i] != 0.0 {
                    return Err(Error::Param(format!(
                        "{kind:?} path must vanish at u = 0, got {}",
                        values[i]
                    )));
                }
            }
        }
        Ok(RescaledPath { kind, u_grid, values, params })
    }

    pub fn value_at_grid(&self, u: f64) -> Result<f64> {
        match find_grid_index(&self.u_grid, u) {
            Some(i) => Ok(self.values[i]),
            None => Err(Error::OffGrid { requested: u }),
        }
    }
}

/// Exact-match grid lookup with only ulp-scale slack; interpolation is
/// deliberately unsupported.
pub fn find_grid_index(grid: &[f64], u: f64) -> Option<usize> {
    let tol = 1e-9 * u.abs().max(1.0);
    let i = grid.partition_point(|&g| g < u - tol);
    if i < grid.len() && (grid[i] - u).abs() <= tol {
        Some(i)
    } else {
        None
    }
}

/// Airy-scale rescaling of a passage value at target `[n + 2u n^(2/3)]_n`.
pub fn airy_rescale(l_val: i64, n: u64, u: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::Param("n must be >= 1".into()));
    }
    let nf = n as f64;
    let n13 = nf.powf(1.0 / 3.0);
    let n23 = nf.powf(2.0 / 3.0);
    if !(nf + 2.0 * u * n23 > 0.0) {
        return Err(Error::Param(format!("target abscissa n + 2u n^(2/3) <= 0 at u={u}")));
    }
    Ok((l_val as f64 - (2.0 * nf + 2.0 * u * n23) + u * u * n13) / n13)
}

/// Short-scale increment rescaling: `(L[sn + u n^gamma]_n - L[sn]_n - mu u
/// n^gamma) / (sigma n^(gamma/2))` with `mu = s^(-1/2)`, `sigma = s^(-1/4)`.
pub fn delta_rescale(l_target: i64, l_base: i64, n: u64, gamma: f64, s: f64, u: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 2.0 / 3.0) {
        return Err(Error::Param(format!("gamma {gamma} must lie in (0, 2/3)")));
    }
    if !(s > 0.0) {
        return Err(Error::Param(format!("s {s} must be > 0")));
    }
    let nf = n as f64;
    let ng = nf.powf(gamma);
    if !(s * nf + u * ng > 0.0) {
        return Err(Error::Param(format!("target abscissa sn + u n^gamma <= 0 at u={u}")));
    }
    let mu = s.powf(-0.5);
    let sigma = s.powf(-0.25);
    Ok(((l_target - l_base) as f64 - mu * u * ng) / (sigma * nf.powf(gamma / 2.0)))
}

/// Boundary-coupled increment at the transversal scale:
/// `(L_lambda[n + 2u n^(2/3)]_n - L_lambda[n]_n - lambda 2u n^(2/3)) / n^(1/3)`.
pub fn b_rescale(l_target: i64, l_base: i64, lambda: f64, n: u64, u: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::Param("n must be >= 1".into()));
    }
    let nf = n as f64;
    Ok(((l_target - l_base) as f64 - lambda * 2.0 * u * nf.powf(2.0 / 3.0)) / nf.powf(1.0 / 3.0))
}

/// Boundary-coupled increment at scale `n^gamma`:
/// `(L_lambda[n + u n^gamma]_n - L_lambda[n]_n - lambda u n^gamma) / n^(gamma/2)`.
pub fn gamma_rescale(
    l_target: i64,
    l_base: i64,
    lambda: f64,
    n: u64,
    gamma: f64,
    u: f64,
) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 2.0 / 3.0) {
        return Err(Error::Param(format!("gamma {gamma} must lie in (0, 2/3)")));
    }
    let nf = n as f64;
    Ok(((l_target - l_base) as f64 - lambda * u * nf.powf(gamma)) / nf.powf(gamma / 2.0))
}

/// Blow-up of an Airy-scale path around 0: `eps^(-1/2) (A(eps u) - A(0))`.
/// Both `eps*u` and `0` must be grid points; interpolation is refused.
pub fn airy_local_value(path: &RescaledPath, epsilon: f64, u: f64) -> Result<f64> {
    if path.kind != PathKind::Airy {
        return Err(Error::Param(format!("blow-up requires an Airy-scale path, got {:?}", path.kind)));
    }
    if !(epsilon > 0.0) {
        return Err(Error::Param(format!("epsilon {epsilon} must be > 0")));
    }
    let at = path.value_at_grid(epsilon * u)?;
    let base = path.value_at_grid(0.0)?;
    Ok((at - base) / epsilon.sqrt())
}

/// Lattice target abscissa for the Airy-scale path: `x = n + round(2^(5/3)
/// u n^(2/3))` together with the u value the snap actually realizes. The
/// induced u perturbation is `O(n^(-2/3))`.
pub fn lattice_airy_target(n: u64, u: f64) -> Result<(usize, f64)> {
    let nf = n as f64;
    let scale = 2f64.powf(5.0 / 3.0) * nf.powf(2.0 / 3.0);
    let x = nf + (scale * u).round();
    if !(x > 0.0) {
        return Err(Error::Param(format!("snapped abscissa {x} not positive at u={u}")));
    }
    Ok((x as usize, (x - nf) / scale))
}

/// Lattice Airy-scale rescaling; `u` must already be the snapped value.
pub fn lattice_airy_rescale(l_val: f64, n: u64, u: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::Param("n must be >= 1".into()));
    }
    let nf = n as f64;
    let n13 = nf.powf(1.0 / 3.0);
    let n23 = nf.powf(2.0 / 3.0);
    let c43 = 2f64.powf(4.0 / 3.0);
    let c83 = 2f64.powf(8.0 / 3.0);
    Ok((l_val - (4.0 * nf + c83 * u * n23) + c43 * u * u * n13) / (c43 * n13))
}

/// Lattice target abscissa for the short-scale path: `x = round(sn + u
/// n^gamma)` with the realized u.
pub fn lattice_delta_target(n: u64, gamma: f64, s: f64, u: f64) -> Result<(usize, f64)> {
    if !(gamma > 0.0 && gamma < 2.0 / 3.0) {
        return Err(Error::Param(format!("gamma {gamma} must lie in (0, 2/3)")));
    }
    let nf = n as f64;
    let ng = nf.powf(gamma);
    let x = (s * nf + u * ng).round();
    if !(x > 0.0) {
        return Err(Error::Param(format!("snapped abscissa {x} not positive at u={u}")));
    }
    Ok((x as usize, (x - s * nf) / ng))
}

/// Lattice short-scale rescaling with `mu = sigma = s^(-1/2)(1 + s^(1/2))`;
/// `u` must already be the snapped value.
pub fn lattice_delta_rescale(
    l_target: f64,
    l_base: f64,
    n: u64,
    gamma: f64,
    s: f64,
    u: f64,
) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 2.0 / 3.0) {
        return Err(Error::Param(format!("gamma {gamma} must lie in (0, 2/3)")));
    }
    if !(s > 0.0) {
        return Err(Error::Param(format!("s {s} must be > 0")));
    }
    let nf = n as f64;
    let mu = s.powf(-0.5) * (1.0 + s.sqrt());
    let sigma = mu;
    Ok((l_target - l_base - mu * u * nf.powf(gamma)) / (sigma * nf.powf(gamma / 2.0)))
}
