//! Deterministic derivative-free search used by the basis, rotation and
//! measurement optimizers: a uniform grid scan followed by golden-section
//! refinement of the most promising grid minima, and a coordinate-wise
//! variant for a handful of parameters.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Result of a one-dimensional minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Golden-section search for a minimum of `f` on `[lo, hi]`, stopping once
/// the bracket is narrower than `tol`.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Minimum {
    let mut evaluations = 2;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
        evaluations += 1;
        // Bracket stops shrinking once it reaches floating-point resolution.
        if x1 >= x2 {
            break;
        }
    }
    let (x, value) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    Minimum { x, value, evaluations }
}

/// Which end of the interval wins when two candidates have equal values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tie {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    /// Number of grid points, endpoints included.
    pub grid: usize,
    /// Final golden-section bracket width.
    pub tol: f64,
    /// How many of the lowest grid-local minima get refined.
    pub candidates: usize,
    /// Values within `tie_eps` of each other count as equal.
    pub tie_eps: f64,
    pub tie: Tie,
}

impl ScanOptions {
    pub fn new(grid: usize, tol: f64) -> Self {
        ScanOptions {
            grid: grid.max(2),
            tol,
            candidates: 4,
            tie_eps: 0.0,
            tie: Tie::Lower,
        }
    }
}

fn better(a: (f64, f64), b: (f64, f64), opts: &ScanOptions) -> bool {
    // true if candidate a = (value, x) should replace b
    if a.0 < b.0 - opts.tie_eps {
        return true;
    }
    if a.0 > b.0 + opts.tie_eps {
        return false;
    }
    match opts.tie {
        Tie::Lower => a.1 < b.1,
        Tie::Upper => a.1 > b.1,
    }
}

fn eval_grid<F: Fn(f64) -> f64 + Sync>(f: &F, xs: &[f64]) -> Vec<f64> {
    #[cfg(feature = "parallel")]
    {
        if xs.len() >= 64 {
            return xs.par_iter().map(|&x| f(x)).collect();
        }
    }
    xs.iter().map(|&x| f(x)).collect()
}

/// Minimizes `f` on the closed interval `[lo, hi]`: scan a uniform grid, then
/// golden-section refine around the lowest grid-local minima. The grid points
/// themselves stay in the candidate pool, so the result is never worse than
/// the best grid value.
pub fn scan_minimize<F: Fn(f64) -> f64 + Sync>(f: F, lo: f64, hi: f64, opts: &ScanOptions) -> Minimum {
    let g = opts.grid.max(2);
    let step = (hi - lo) / (g - 1) as f64;
    let xs: Vec<f64> = (0..g)
        .map(|k| if k == g - 1 { hi } else { lo + k as f64 * step })
        .collect();
    let vals = eval_grid(&f, &xs);
    let mut evaluations = g;

    let mut local: Vec<usize> = (0..g)
        .filter(|&i| {
            let left = i == 0 || vals[i] <= vals[i - 1];
            let right = i == g - 1 || vals[i] <= vals[i + 1];
            left && right
        })
        .collect();
    local.sort_by(|&a, &b| {
        let order = match opts.tie {
            Tie::Lower => a.cmp(&b),
            Tie::Upper => b.cmp(&a),
        };
        vals[a].total_cmp(&vals[b]).then(order)
    });
    local.truncate(opts.candidates.max(1));

    let mut best = (vals[local[0]], xs[local[0]]);
    for i in 0..g {
        if better((vals[i], xs[i]), best, opts) {
            best = (vals[i], xs[i]);
        }
    }
    for &i in &local {
        let a = if i == 0 { lo } else { xs[i - 1] };
        let b = if i == g - 1 { hi } else { xs[i + 1] };
        let m = golden_section(&f, a, b, opts.tol);
        evaluations += m.evaluations;
        if better((m.value, m.x), best, opts) {
            best = (m.value, m.x);
        }
    }
    Minimum {
        x: best.1,
        value: best.0,
        evaluations,
    }
}

/// Maximizes `f` on `[lo, hi]` with the same strategy as [`scan_minimize`].
pub fn scan_maximize<F: Fn(f64) -> f64 + Sync>(f: F, lo: f64, hi: f64, opts: &ScanOptions) -> Minimum {
    let m = scan_minimize(|x| -f(x), lo, hi, opts);
    Minimum { value: -m.value, ..m }
}

/// Outcome of [`coordinate_search`].
#[derive(Debug, Clone, PartialEq)]
pub struct CoordinateMinimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

/// Coordinate-wise minimization. Each sweep scans every coordinate over
/// `x_j ± span` with `scan` points and golden-refines the best one; sweeps
/// repeat until an improvement smaller than `tol` or `max_rounds`.
pub fn coordinate_search<F: Fn(&[f64]) -> f64>(
    f: F,
    x0: Vec<f64>,
    span: f64,
    scan: usize,
    tol: f64,
    max_rounds: usize,
) -> CoordinateMinimum {
    let mut x = x0;
    let mut value = f(&x);
    let mut evaluations = 1;
    let scan = scan.max(3);
    for _ in 0..max_rounds {
        let start = value;
        for j in 0..x.len() {
            let centre = x[j];
            let step = 2.0 * span / (scan - 1) as f64;
            let mut probe = x.clone();
            let mut eval_at = |t: f64| {
                probe[j] = t;
                f(&probe)
            };
            let mut best_t = centre;
            let mut best_v = value;
            for k in 0..scan {
                let t = centre - span + k as f64 * step;
                let v = eval_at(t);
                if v < best_v {
                    best_v = v;
                    best_t = t;
                }
            }
            evaluations += scan;
            let mut probe = x.clone();
            let m = golden_section(
                |t| {
                    probe[j] = t;
                    f(&probe)
                },
                best_t - step,
                best_t + step,
                tol,
            );
            evaluations += m.evaluations;
            if m.value < best_v {
                best_v = m.value;
                best_t = m.x;
            }
            if best_v < value {
                value = best_v;
                x[j] = best_t;
            }
        }
        if start - value < tol * 1e-3 {
            break;
        }
    }
    CoordinateMinimum { x, value, evaluations }
}
