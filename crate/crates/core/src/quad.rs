//! Gauss–Legendre quadrature drivers: composite rules with breakpoints,
//! local adaptive bisection, and iterated integration over boxes.

use std::collections::{BinaryHeap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use gauss_quad::legendre::GaussLegendre;

const LOW: usize = 10;
const HIGH: usize = 21;
const MAX_SPLITS: usize = 4000;

/// Nodes and weights on `[-1, 1]` for `deg ≥ 2`, cached per degree.
pub fn rule(deg: usize) -> Arc<Vec<(f64, f64)>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<(f64, f64)>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard
        .entry(deg.max(2))
        .or_insert_with(|| {
            let gl = GaussLegendre::new(deg.max(2)).expect("degree at least 2");
            Arc::new(gl.as_node_weight_pairs().to_vec())
        })
        .clone()
}

/// One Gauss–Legendre panel on `[a, b]`.
pub fn panel(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, deg: usize) -> f64 {
    panel_with_mass(f, a, b, deg).0
}

/// A panel together with the same rule applied to `|f|`.
fn panel_with_mass(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, deg: usize) -> (f64, f64) {
    let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
    let (sum, mass) = rule(deg).iter().fold((0.0, 0.0), |(s, m), (x, w)| {
        let v = w * f(mid + half * x);
        (s + v, m + v.abs())
    });
    (sum * half, mass * half)
}

/// Sorted cut points of `[a, b]`: the ends plus interior breakpoints.
pub fn segments(a: f64, b: f64, breaks: &[f64]) -> Vec<f64> {
    let mut cuts: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|x| *x > a && *x < b)
        .collect();
    cuts.push(a);
    cuts.push(b);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts
}

/// Fixed composite rule: each breakpoint segment gets `panels` panels.
pub fn composite(
    f: &mut dyn FnMut(f64) -> f64,
    a: f64,
    b: f64,
    breaks: &[f64],
    panels: usize,
    deg: usize,
) -> f64 {
    let cuts = segments(a, b, breaks);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let h = (w[1] - w[0]) / panels as f64;
        for p in 0..panels {
            let lo = w[0] + p as f64 * h;
            total += panel(f, lo, lo + h, deg);
        }
    }
    total
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Sum of the local error estimates.
    pub error: f64,
}

/// Adaptive bisection comparing a 10- and a 21-point rule, restarted on
/// each breakpoint segment. `tol` is absolute over the whole interval.
pub fn adaptive(
    f: &mut dyn FnMut(f64) -> f64,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: f64,
) -> Integral {
    if a >= b {
        return Integral {
            value: 0.0,
            error: 0.0,
        };
    }
    let cuts = segments(a, b, breaks);
    let len = b - a;
    let mut out = Integral {
        value: 0.0,
        error: 0.0,
    };
    for w in cuts.windows(2) {
        let r = refine(f, w[0], w[1], tol * (w[1] - w[0]) / len);
        out.value += r.value;
        out.error += r.error;
    }
    out
}

/// A panel with its 10/21-point disagreement as the error estimate.
struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    /// The rules agree to within rounding of the `|f|` mass, so splitting
    /// cannot help.
    settled: bool,
}

impl Piece {
    fn new(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> Self {
        let coarse = panel(f, a, b, LOW);
        let (value, mass) = panel_with_mass(f, a, b, HIGH);
        let error = (value - coarse).abs();
        Piece {
            a,
            b,
            value,
            error,
            settled: error <= 1e-14 * mass,
        }
    }
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error).is_eq()
    }
}

impl Eq for Piece {}

impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Piece {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive bisection: always split the piece with the largest
/// error until the total meets `tol` or the split budget runs out.
fn refine(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> Integral {
    let mut open = BinaryHeap::new();
    let mut done = Integral {
        value: 0.0,
        error: 0.0,
    };
    let first = Piece::new(f, a, b);
    let mut total = first.error;
    open.push(first);
    for _ in 0..MAX_SPLITS {
        if total <= tol {
            break;
        }
        let Some(worst) = open.pop() else { break };
        if worst.settled {
            done.value += worst.value;
            done.error += worst.error;
            continue;
        }
        let m = (worst.a + worst.b) / 2.0;
        let (l, r) = (Piece::new(f, worst.a, m), Piece::new(f, m, worst.b));
        total += l.error + r.error - worst.error;
        open.push(l);
        open.push(r);
    }
    for p in open {
        done.value += p.value;
        done.error += p.error;
    }
    done
}

/// Iterated adaptive integration over the box `[lo, hi]`; `breaks[i]` holds
/// breakpoints for axis `i`.
pub fn adaptive_box(
    f: &mut dyn FnMut(&[f64]) -> f64,
    lo: &[f64],
    hi: &[f64],
    breaks: &[Vec<f64>],
    tol: f64,
) -> Integral {
    let mut point = lo.to_vec();
    nested(f, lo, hi, breaks, tol, 0, &mut point)
}

fn nested(
    f: &mut dyn FnMut(&[f64]) -> f64,
    lo: &[f64],
    hi: &[f64],
    breaks: &[Vec<f64>],
    tol: f64,
    axis: usize,
    point: &mut Vec<f64>,
) -> Integral {
    let empty = Vec::new();
    let br = breaks.get(axis).unwrap_or(&empty);
    if axis + 1 == lo.len() {
        return adaptive(
            &mut |x| {
                point[axis] = x;
                f(point)
            },
            lo[axis],
            hi[axis],
            br,
            tol,
        );
    }
    let inner_tol = tol / (hi[axis] - lo[axis]).max(f64::MIN_POSITIVE);
    adaptive(
        &mut |x| {
            point[axis] = x;
            nested(f, lo, hi, breaks, inner_tol, axis + 1, point).value
        },
        lo[axis],
        hi[axis],
        br,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smooth::bump_value;

    #[test]
    fn bump_mass() {
        // reference value from a 30-digit computation
        let r = adaptive(&mut bump_value, -1.0, 1.0, &[0.0], 1e-15);
        assert!(
            (r.value - 0.443_993_816_168_079_4).abs() < 1e-14,
            "{}",
            r.value
        );
        let c = composite(&mut bump_value, -1.0, 1.0, &[0.0], 4, 30);
        assert!((c - 0.443_993_816_168_079_4).abs() < 1e-13, "{}", c);
    }

    #[test]
    fn box_integral_of_polynomial() {
        let r = adaptive_box(
            &mut |x| x[0] * x[0] * x[1],
            &[0.0, 0.0],
            &[1.0, 2.0],
            &[],
            1e-13,
        );
        assert!((r.value - 2.0 / 3.0).abs() < 1e-13);
    }
}
