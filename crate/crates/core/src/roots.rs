//! Bracketing on a uniform grid, bisection, and golden-section search.

use crate::par::{map_indexed, Execution};

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Uniform grid of `n ≥ 2` points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "grid needs at least two points");
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
        .collect()
}

/// Bisects a sign change of `f` on `[lo, hi]` until the midpoint can no
/// longer be separated from an endpoint.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    if f(hi) == 0.0 {
        return hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let mut c = hi - GOLDEN * (hi - lo);
    let mut d = lo + GOLDEN * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(1.0) {
            break;
        }
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - GOLDEN * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + GOLDEN * (hi - lo);
            fd = f(d);
        }
    }
    let x = 0.5 * (lo + hi);
    let fx = f(x);
    // keep the best probe if the final midpoint lands off the top
    [(x, fx), (c, fc), (d, fd)].into_iter().fold(
        (x, fx),
        |best, cand| if cand.1 > best.1 { cand } else { best },
    )
}

/// A zero found on a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRoot {
    pub x: f64,
    /// Found as a near-zero minimum of `|f|` with no sign change.
    pub tangency: bool,
}

/// All sign changes of `f` between consecutive grid points, refined by
/// bisection, plus touching zeros where a local minimum of `|f|` falls
/// below `touch_tol(x)` without a sign change. Sorted ascending.
pub fn grid_roots<F, T>(f: F, grid: &[f64], touch_tol: T, exec: Execution) -> Vec<GridRoot>
where
    F: Fn(f64) -> f64 + Sync + Send,
    T: Fn(f64) -> f64 + Sync + Send,
{
    let values = map_indexed(grid.len(), exec, |i| f(grid[i]));
    let mut brackets = Vec::new();
    let mut touches = Vec::new();
    for i in 0..grid.len().saturating_sub(1) {
        let (a, b) = (values[i], values[i + 1]);
        if a == 0.0 {
            if i == 0 {
                brackets.push((grid[i], grid[i]));
            }
            continue;
        }
        if b == 0.0 || (a < 0.0) != (b < 0.0) {
            brackets.push((grid[i], grid[i + 1]));
        } else if i > 0
            && values[i].abs() < values[i - 1].abs()
            && values[i].abs() <= b.abs()
            && (values[i - 1] < 0.0) == (a < 0.0)
        {
            touches.push(i);
        }
    }
    let mut found: Vec<GridRoot> = map_indexed(brackets.len(), exec, |i| {
        let (lo, hi) = brackets[i];
        GridRoot {
            x: if lo == hi { lo } else { bisect(&f, lo, hi) },
            tangency: false,
        }
    });
    let touched: Vec<Option<GridRoot>> = map_indexed(touches.len(), exec, |j| {
        let i = touches[j];
        let (x, neg_abs) = golden_max(|x| -f(x).abs(), grid[i - 1], grid[i + 1]);
        (-neg_abs <= touch_tol(x)).then_some(GridRoot { x, tangency: true })
    });
    found.extend(touched.into_iter().flatten());
    found.sort_by(|a, b| a.x.total_cmp(&b.x));
    found.dedup_by(|b, a| (b.x - a.x).abs() <= 1e-12 * a.x.abs().max(1.0));
    found
}

/// Local maxima of `f` on a uniform grid of `n` points over `[lo, hi]`,
/// each refined by golden-section search inside its neighbouring cells.
pub fn grid_maxima<F>(f: F, lo: f64, hi: f64, n: usize, exec: Execution) -> Vec<(f64, f64)>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let grid = linspace(lo, hi, n);
    let values = map_indexed(n, exec, |i| f(grid[i]));
    let peaks: Vec<usize> = (1..n - 1)
        .filter(|&i| values[i] > values[i - 1] && values[i] >= values[i + 1])
        .collect();
    map_indexed(peaks.len(), exec, |j| {
        let i = peaks[j];
        golden_max(&f, grid[i - 1], grid[i + 1])
    })
}
