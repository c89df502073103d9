use super::{DistFn, EvalGrid};
use crate::error::{Error, Result};

const LEFT_LIMIT_OFFSET: f64 = 1e-9;
const COMPARISON_SLACK: f64 = 1e-12;

/// `max |F(x) - G(x)|` over the grid points away from `G`'s discontinuities.
pub fn sup_distance(f: &DistFn, g: &DistFn, grid: &EvalGrid) -> Result<f64> {
    let mut seen = false;
    let mut worst = 0.0f64;
    for x in grid.continuity_points(g.discontinuities()) {
        seen = true;
        worst = worst.max((f.value(x) - g.value(x)).abs());
    }
    if seen {
        Ok(worst)
    } else {
        Err(Error::EmptyGrid)
    }
}

/// Smallest `ε = k·resolution` with `F(x-ε) - ε <= G(x) <= F(x+ε) + ε` and the
/// same with `F` and `G` swapped, checked on a default covering grid plus the
/// jump points of both functions and their `ε`-shifts.
pub fn levy_distance(f: &DistFn, g: &DistFn, resolution: f64) -> Result<f64> {
    if !(resolution.is_finite() && resolution > 0.0) {
        return Err(Error::parameter(format!("Lévy resolution must be > 0, got {resolution}")));
    }
    let grid = EvalGrid::covering(&[f.clone(), g.clone()]);
    let mut discs: Vec<f64> = f.discontinuities().to_vec();
    discs.extend_from_slice(g.discontinuities());
    discs.sort_by(f64::total_cmp);
    discs.dedup();

    let holds = |eps: f64| {
        let check = |x: f64| {
            let (fl, fr) = (f.value(x - eps), f.value(x + eps));
            let (gl, gr) = (g.value(x - eps), g.value(x + eps));
            let (fx, gx) = (f.value(x), g.value(x));
            fl - eps <= gx + COMPARISON_SLACK
                && gx <= fr + eps + COMPARISON_SLACK
                && gl - eps <= fx + COMPARISON_SLACK
                && fx <= gr + eps + COMPARISON_SLACK
        };
        grid.points().iter().all(|&x| check(x))
            && discs.iter().all(|&d| {
                [d, d + eps, d - eps]
                    .into_iter()
                    .all(|p| check(p) && check(p - LEFT_LIMIT_OFFSET))
            })
    };

    let top = (1.0 / resolution).ceil() as u64;
    if holds(0.0) {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0u64, top);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(mid as f64 * resolution) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((hi as f64 * resolution).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distfn::{bool_nth_root, power, MaxConvolution};
    use crate::families;

    #[test]
    fn sup_distance_examples() {
        let f = families::frechet(1.0).unwrap();
        let p = families::pareto(1.0).unwrap();
        let grid = EvalGrid::default_for(&f);
        assert_eq!(sup_distance(&f, &f, &grid).unwrap(), 0.0);
        let one = EvalGrid::new(vec![2.0], 1e-6).unwrap();
        let d = sup_distance(&f, &p, &one).unwrap();
        assert!((d - ((-0.5f64).exp() - 0.5)).abs() < 1e-15);
        assert!((d - 0.1065).abs() < 1e-4);
        let d1 = families::dagum(1.0, 1.0).unwrap();
        let back = power(MaxConvolution::Boolean, &bool_nth_root(&d1, 5).unwrap(), 5.0).unwrap();
        let g = EvalGrid::logarithmic(0.01, 100.0, 500).unwrap();
        assert!(sup_distance(&back, &d1, &g).unwrap() <= 1e-12);
    }

    #[test]
    fn empty_grid_is_an_error() {
        let step = DistFn::dirac(0.0).unwrap();
        let grid = EvalGrid::new(vec![0.0], 1e-6).unwrap();
        assert_eq!(sup_distance(&step, &step, &grid), Err(Error::EmptyGrid));
    }

    #[test]
    fn levy_examples() {
        let f = families::frechet(1.0).unwrap();
        assert_eq!(levy_distance(&f, &f, 0.01).unwrap(), 0.0);
        let a = DistFn::dirac(0.0).unwrap();
        let b = DistFn::dirac(1.0).unwrap();
        assert!((levy_distance(&a, &b, 0.01).unwrap() - 1.0).abs() <= 0.01);
        let c = DistFn::dirac(0.3).unwrap();
        assert!((levy_distance(&a, &c, 0.01).unwrap() - 0.3).abs() <= 0.01 + 1e-12);
        let p = families::pareto(1.0).unwrap();
        assert_eq!(
            levy_distance(&f, &p, 0.005).unwrap(),
            levy_distance(&p, &f, 0.005).unwrap()
        );
        assert!(levy_distance(&f, &p, 0.0).is_err());
    }
}
