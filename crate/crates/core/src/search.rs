//! One-dimensional grid search with zoom refinement.
//!
//! A uniform coarse grid of `grid_n` points spans `[lo, hi]` (both endpoints
//! included). Each refinement level shrinks the window by `zoom`, recenters
//! it on the incumbent, clips it to `[lo, hi]` and re-grids it with `grid_n`
//! points. A golden-section pass inside the last grid cell around the
//! incumbent then polishes smooth optima to near machine precision; it only
//! ever replaces the incumbent with a better point. Ties are broken toward
//! the preferred end so results are reproducible.

use serde::{Deserialize, Serialize};

pub const DEFAULT_GRID_N: usize = 512;
pub const DEFAULT_REFINE_LEVELS: usize = 3;
pub const DEFAULT_ZOOM: f64 = 8.0;
const POLISH_ITERS: usize = 80;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub grid_n: usize,
    pub refine_levels: usize,
    pub zoom: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { grid_n: DEFAULT_GRID_N, refine_levels: DEFAULT_REFINE_LEVELS, zoom: DEFAULT_ZOOM }
    }
}

impl GridSpec {
    pub fn with_grid_n(grid_n: usize) -> Self {
        GridSpec { grid_n: grid_n.max(1), ..Default::default() }
    }
}

/// Which end of the interval wins among equal objective values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prefer {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Best {
    pub x: f64,
    pub value: f64,
}

struct Incumbent {
    best: Option<Best>,
    prefer: Prefer,
}

impl Incumbent {
    fn consider(&mut self, x: f64, value: f64) {
        let value = if value.is_nan() { f64::NEG_INFINITY } else { value };
        let replace = match self.best {
            None => true,
            Some(b) => {
                value > b.value
                    || (value == b.value
                        && match self.prefer {
                            Prefer::Lower => x < b.x,
                            Prefer::Upper => x > b.x,
                        })
            }
        };
        if replace {
            self.best = Some(Best { x, value });
        }
    }
}

fn grid_points(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let n = n.max(1);
    (0..n).map(move |i| {
        if n == 1 {
            lo
        } else if i == n - 1 {
            hi
        } else {
            lo + (hi - lo) * (i as f64 / (n - 1) as f64)
        }
    })
}

/// Maximizes `f` over `[lo, hi]`. `seeds` are extra candidates evaluated
/// with the coarse grid; seeds outside the interval are ignored.
pub fn maximize(lo: f64, hi: f64, spec: &GridSpec, prefer: Prefer, seeds: &[f64], f: impl Fn(f64) -> f64) -> Best {
    let mut inc = Incumbent { best: None, prefer };
    if !(hi > lo) {
        inc.consider(lo, f(lo));
        return inc.best.unwrap();
    }
    for x in grid_points(lo, hi, spec.grid_n) {
        inc.consider(x, f(x));
    }
    for &x in seeds {
        if (lo..=hi).contains(&x) {
            inc.consider(x, f(x));
        }
    }
    if spec.grid_n >= 2 {
        let mut span = hi - lo;
        let mut step = span / (spec.grid_n - 1) as f64;
        for _ in 0..spec.refine_levels {
            span /= spec.zoom;
            let center = inc.best.unwrap().x;
            let a = (center - span / 2.0).max(lo);
            let b = (center + span / 2.0).min(hi);
            for x in grid_points(a, b, spec.grid_n) {
                inc.consider(x, f(x));
            }
            step = (b - a) / (spec.grid_n - 1) as f64;
        }
        let center = inc.best.unwrap().x;
        golden_polish((center - step).max(lo), (center + step).min(hi), &mut inc, &f);
    }
    inc.best.unwrap()
}

fn golden_polish(mut a: f64, mut b: f64, inc: &mut Incumbent, f: &impl Fn(f64) -> f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let score = |x: f64| {
        let v = f(x);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (score(c), score(d));
    inc.consider(c, fc);
    inc.consider(d, fd);
    for _ in 0..POLISH_ITERS {
        if !(b - a > f64::EPSILON * a.abs().max(b.abs())) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = score(c);
            inc.consider(c, fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = score(d);
            inc.consider(d, fd);
        }
    }
}

/// Minimizes `f` over `[lo, hi]`; see [`maximize`].
pub fn minimize(lo: f64, hi: f64, spec: &GridSpec, prefer: Prefer, seeds: &[f64], f: impl Fn(f64) -> f64) -> Best {
    let b = maximize(lo, hi, spec, prefer, seeds, |x| -f(x));
    Best { x: b.x, value: -b.value }
}
