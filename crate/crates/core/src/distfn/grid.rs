use serde::{Deserialize, Serialize};

use super::DistFn;
use crate::error::{Error, Result};

pub const DEFAULT_EXCLUSION_RADIUS: f64 = 1e-6;
pub const DEFAULT_GRID_POINTS: usize = 2001;
/// Default grids never reach beyond `±GRID_BOUND`.
pub const GRID_BOUND: f64 = 1e3;

/// Evaluation points for distance estimates, with the radius of the
/// neighborhoods around limit discontinuities that are skipped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalGrid {
    points: Vec<f64>,
    exclusion_radius: f64,
}

impl EvalGrid {
    pub fn new(points: Vec<f64>, exclusion_radius: f64) -> Result<EvalGrid> {
        if points.is_empty() {
            return Err(Error::parameter("grid needs at least one point"));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::parameter("grid points must be finite"));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::parameter("grid points must be strictly increasing"));
        }
        if !(exclusion_radius.is_finite() && exclusion_radius > 0.0) {
            return Err(Error::parameter(format!("exclusion radius must be > 0, got {exclusion_radius}")));
        }
        Ok(EvalGrid {
            points,
            exclusion_radius,
        })
    }

    /// Builds a grid from arbitrary points: sorts and drops duplicates.
    pub fn from_unsorted(mut points: Vec<f64>, exclusion_radius: f64) -> Result<EvalGrid> {
        points.retain(|p| p.is_finite());
        points.sort_by(f64::total_cmp);
        points.dedup();
        EvalGrid::new(points, exclusion_radius)
    }

    /// `n` equally spaced points on `[lo, hi]`.
    pub fn linear(lo: f64, hi: f64, n: usize) -> Result<EvalGrid> {
        check_range(lo, hi, n)?;
        EvalGrid::from_unsorted(linspace(lo, hi, n), DEFAULT_EXCLUSION_RADIUS)
    }

    /// `n` geometrically spaced points on `[lo, hi]`, `0 < lo`.
    pub fn logarithmic(lo: f64, hi: f64, n: usize) -> Result<EvalGrid> {
        check_range(lo, hi, n)?;
        if lo <= 0.0 {
            return Err(Error::parameter(format!("logarithmic grid needs lo > 0, got {lo}")));
        }
        EvalGrid::from_unsorted(geomspace(lo, hi, n), DEFAULT_EXCLUSION_RADIUS)
    }

    /// The default probe grid for `f`: about 2001 points mixing a linear
    /// sweep with geometric refinements towards 0 on `[α-1, ω+1]`, clipped
    /// to `[-1e3, 1e3]`.
    pub fn default_for(f: &DistFn) -> EvalGrid {
        EvalGrid::covering(std::slice::from_ref(f))
    }

    /// A default grid covering the supports of all of `fs`.
    pub fn covering(fs: &[DistFn]) -> EvalGrid {
        let lo = fs
            .iter()
            .map(|f| f.alpha())
            .fold(f64::INFINITY, f64::min);
        let hi = fs
            .iter()
            .map(|f| f.omega())
            .fold(f64::NEG_INFINITY, f64::max);
        EvalGrid::mixed(lo - 1.0, hi + 1.0, DEFAULT_GRID_POINTS)
    }

    /// Linear and logarithmic points on `[lo, hi]` clipped to `±GRID_BOUND`.
    pub fn mixed(lo: f64, hi: f64, n: usize) -> EvalGrid {
        let clip = |v: f64| if v.is_nan() { 0.0 } else { v.clamp(-GRID_BOUND, GRID_BOUND) };
        let (mut lo, mut hi) = (clip(lo), clip(hi));
        if hi - lo < 2.0 {
            let mid = 0.5 * (lo + hi);
            lo = mid - 1.0;
            hi = mid + 1.0;
        }
        let n = n.max(4);
        let n_lin = n / 2;
        let mut points = linspace(lo, hi, n_lin);
        let n_log = n - n_lin;
        let pos = hi > 0.0;
        let neg = lo < 0.0;
        let sides = usize::from(pos) + usize::from(neg);
        if let Some(per_side) = n_log.checked_div(sides) {
            if pos {
                let start = if lo > 0.0 { lo } else { (hi * 1e-3).min(1e-3) };
                points.extend(geomspace(start, hi, per_side));
            }
            if neg {
                let start = if hi < 0.0 { -hi } else { (-lo * 1e-3).min(1e-3) };
                points.extend(geomspace(start, -lo, per_side).into_iter().map(|p| -p));
            }
        }
        EvalGrid::from_unsorted(points, DEFAULT_EXCLUSION_RADIUS).expect("mixed grid is non-empty")
    }

    pub fn with_exclusion_radius(mut self, radius: f64) -> Result<EvalGrid> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::parameter(format!("exclusion radius must be > 0, got {radius}")));
        }
        self.exclusion_radius = radius;
        Ok(self)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn exclusion_radius(&self) -> f64 {
        self.exclusion_radius
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Grid points farther than the exclusion radius from every point of `discs`.
    pub fn continuity_points<'a>(&'a self, discs: &'a [f64]) -> impl Iterator<Item = f64> + 'a {
        let r = self.exclusion_radius;
        self.points.iter().copied().filter(move |x| {
            let i = discs.partition_point(|d| *d < *x);
            let near_above = i < discs.len() && discs[i] - x < r;
            let near_below = i > 0 && x - discs[i - 1] < r;
            !(near_above || near_below)
        })
    }
}

fn check_range(lo: f64, hi: f64, n: usize) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::parameter(format!("grid range needs finite lo < hi, got [{lo}, {hi}]")));
    }
    if n < 2 {
        return Err(Error::parameter(format!("grid needs at least 2 points, got {n}")));
    }
    Ok(())
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
        .collect()
}

fn geomspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n < 2 || lo >= hi {
        return vec![hi];
    }
    let (a, b) = (lo.ln(), hi.ln());
    let step = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { (a + step * i as f64).exp() })
        .collect()
}
