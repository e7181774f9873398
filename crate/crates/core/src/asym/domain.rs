//! Open sets as finite unions of open boxes, and compact sample boxes.

use std::fmt;

/// An axis-parallel open box; bounds may be infinite.
#[derive(Debug, Clone, PartialEq)]
pub struct OpenBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl OpenBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        assert_eq!(lo.len(), hi.len(), "box bounds differ in dimension");
        OpenBox { lo, hi }
    }

    /// `(lo, hi)` in one dimension.
    pub fn interval(lo: f64, hi: f64) -> Self {
        OpenBox::new(vec![lo], vec![hi])
    }

    pub fn whole(dim: usize) -> Self {
        OpenBox::new(vec![f64::NEG_INFINITY; dim], vec![f64::INFINITY; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(a, b)| a >= b)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(v, (a, b))| v > a && v < b)
    }

    pub fn intersect(&self, other: &OpenBox) -> OpenBox {
        OpenBox::new(
            self.lo
                .iter()
                .zip(&other.lo)
                .map(|(a, b)| a.max(*b))
                .collect(),
            self.hi
                .iter()
                .zip(&other.hi)
                .map(|(a, b)| a.min(*b))
                .collect(),
        )
    }

    pub fn overlaps(&self, other: &OpenBox) -> bool {
        !self.intersect(other).is_empty()
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| match (a.is_finite(), b.is_finite()) {
                (true, true) => (a + b) / 2.0,
                (true, false) => a + 1.0,
                (false, true) => b - 1.0,
                (false, false) => 0.0,
            })
            .collect()
    }
}

impl fmt::Display for OpenBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| format!("({a}, {b})"))
            .collect();
        f.write_str(&parts.join("x"))
    }
}

/// One axis of a piece produced by box subtraction, with endpoint openness.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Span {
    lo: f64,
    lo_closed: bool,
    hi: f64,
    hi_closed: bool,
}

impl Span {
    fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }
}

type Piece = Vec<Span>;

/// `piece ∖ b` as a list of disjoint pieces.
fn subtract(piece: &Piece, b: &OpenBox) -> Vec<Piece> {
    let meets = piece.iter().zip(b.lo.iter().zip(&b.hi)).all(|(s, (c, d))| {
        let lo = if s.lo < *c {
            (*c, false)
        } else {
            (s.lo, s.lo_closed)
        };
        let hi = if s.hi > *d {
            (*d, false)
        } else {
            (s.hi, s.hi_closed)
        };
        !Span {
            lo: lo.0,
            lo_closed: lo.1,
            hi: hi.0,
            hi_closed: hi.1,
        }
        .is_empty()
    });
    if !meets {
        return vec![piece.clone()];
    }
    let mut out = Vec::new();
    let mut rest = piece.clone();
    for axis in 0..piece.len() {
        let (c, d) = (b.lo[axis], b.hi[axis]);
        let s = rest[axis];
        let left = Span {
            hi: c.min(s.hi),
            hi_closed: if c < s.hi { true } else { s.hi_closed },
            ..s
        };
        if !left.is_empty() {
            let mut p = rest.clone();
            p[axis] = left;
            out.push(p);
        }
        let right = Span {
            lo: d.max(s.lo),
            lo_closed: if d > s.lo { true } else { s.lo_closed },
            ..s
        };
        if !right.is_empty() {
            let mut p = rest.clone();
            p[axis] = right;
            out.push(p);
        }
        let lo = if s.lo < c {
            (c, false)
        } else {
            (s.lo, s.lo_closed)
        };
        let hi = if s.hi > d {
            (d, false)
        } else {
            (s.hi, s.hi_closed)
        };
        rest[axis] = Span {
            lo: lo.0,
            lo_closed: lo.1,
            hi: hi.0,
            hi_closed: hi.1,
        };
    }
    out
}

fn covered(piece: Piece, boxes: &[OpenBox]) -> bool {
    let mut pending = vec![piece];
    for b in boxes {
        pending = pending.iter().flat_map(|p| subtract(p, b)).collect();
        if pending.is_empty() {
            return true;
        }
    }
    pending.is_empty()
}

/// A finite union of open boxes in `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    dim: usize,
    boxes: Vec<OpenBox>,
}

impl Domain {
    pub fn new(dim: usize, boxes: Vec<OpenBox>) -> Self {
        let boxes = boxes
            .into_iter()
            .filter(|b| !b.is_empty())
            .collect::<Vec<_>>();
        assert!(
            boxes.iter().all(|b| b.dim() == dim),
            "box dimension mismatch"
        );
        Domain { dim, boxes }
    }

    pub fn from_box(b: OpenBox) -> Self {
        Domain::new(b.dim(), vec![b])
    }

    pub fn interval(lo: f64, hi: f64) -> Self {
        Domain::from_box(OpenBox::interval(lo, hi))
    }

    pub fn whole(dim: usize) -> Self {
        Domain::from_box(OpenBox::whole(dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn boxes(&self) -> &[OpenBox] {
        &self.boxes
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.boxes.iter().any(|b| b.contains(x))
    }

    pub fn intersect(&self, other: &Domain) -> Domain {
        let mut boxes = Vec::new();
        for a in &self.boxes {
            for b in &other.boxes {
                let c = a.intersect(b);
                if !c.is_empty() {
                    boxes.push(c);
                }
            }
        }
        Domain::new(self.dim, boxes)
    }

    pub fn union(&self, other: &Domain) -> Domain {
        Domain::new(
            self.dim,
            self.boxes.iter().chain(&other.boxes).cloned().collect(),
        )
    }

    /// `other ⊆ self` for open sets.
    pub fn contains_domain(&self, other: &Domain) -> bool {
        other.dim == self.dim
            && other.boxes.iter().all(|b| {
                let piece =
                    b.lo.iter()
                        .zip(&b.hi)
                        .map(|(lo, hi)| Span {
                            lo: *lo,
                            lo_closed: false,
                            hi: *hi,
                            hi_closed: false,
                        })
                        .collect();
                covered(piece, &self.boxes)
            })
    }

    /// `K ⊂⊂ self`: the closed box lies inside the open set.
    pub fn contains_compact(&self, k: &CompactBox) -> bool {
        k.dim() == self.dim && {
            let piece =
                k.lo.iter()
                    .zip(&k.hi)
                    .map(|(lo, hi)| Span {
                        lo: *lo,
                        lo_closed: true,
                        hi: *hi,
                        hi_closed: true,
                    })
                    .collect();
            covered(piece, &self.boxes)
        }
    }

    /// Connectivity of the overlap graph of the boxes.
    pub fn is_connected(&self) -> bool {
        if self.boxes.is_empty() {
            return false;
        }
        let n = self.boxes.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if !seen[j] && self.boxes[i].overlaps(&self.boxes[j]) {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// A finite box around the domain, with infinite sides clipped to
    /// `±clip`.
    pub fn bounding_box(&self, clip: f64) -> CompactBox {
        let lo = (0..self.dim)
            .map(|i| {
                self.boxes
                    .iter()
                    .map(|b| b.lo[i])
                    .fold(f64::INFINITY, f64::min)
                    .max(-clip)
            })
            .collect();
        let hi = (0..self.dim)
            .map(|i| {
                self.boxes
                    .iter()
                    .map(|b| b.hi[i])
                    .fold(f64::NEG_INFINITY, f64::max)
                    .min(clip)
            })
            .collect();
        CompactBox::new(lo, hi, 2)
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.boxes.iter().map(|b| b.to_string()).collect();
        f.write_str(&parts.join(" u "))
    }
}

/// A closed box with a sampling resolution (points per axis, endpoints
/// included).
#[derive(Debug, Clone, PartialEq)]
pub struct CompactBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub resolution: usize,
}

impl CompactBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, resolution: usize) -> Self {
        assert_eq!(lo.len(), hi.len(), "box bounds differ in dimension");
        CompactBox {
            lo,
            hi,
            resolution: resolution.max(2),
        }
    }

    pub fn interval(lo: f64, hi: f64, resolution: usize) -> Self {
        CompactBox::new(vec![lo], vec![hi], resolution)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn with_resolution(&self, resolution: usize) -> Self {
        CompactBox {
            resolution: resolution.max(2),
            ..self.clone()
        }
    }

    /// Tensor grid of sample points.
    pub fn grid(&self) -> Vec<Vec<f64>> {
        let axes: Vec<Vec<f64>> = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| {
                let n = self.resolution;
                (0..n)
                    .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
                    .collect()
            })
            .collect();
        let mut points = vec![Vec::new()];
        for axis in axes {
            points = points
                .into_iter()
                .flat_map(|p| {
                    axis.iter().map(move |v| {
                        let mut q = p.clone();
                        q.push(*v);
                        q
                    })
                })
                .collect();
        }
        points
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn containment_respects_openness() {
        let omega = Domain::new(
            1,
            vec![OpenBox::interval(-1.0, 1.5), OpenBox::interval(1.0, 3.0)],
        );
        assert!(omega.contains_compact(&CompactBox::interval(0.0, 2.0, 5)));
        assert!(!omega.contains_compact(&CompactBox::interval(0.0, 3.0, 5)));
        assert!(omega.contains_domain(&Domain::interval(-1.0, 3.0)));
        assert!(!omega.contains_domain(&Domain::interval(-1.0, 3.5)));
        let gap = Domain::new(
            1,
            vec![OpenBox::interval(0.0, 1.0), OpenBox::interval(1.0, 2.0)],
        );
        assert!(!gap.contains_domain(&Domain::interval(0.0, 2.0)));
        assert!(!gap.is_connected());
        assert!(omega.is_connected());
    }

    #[test]
    fn two_dimensional_cover() {
        let omega = Domain::new(
            2,
            vec![
                OpenBox::new(vec![0.0, 0.0], vec![2.0, 1.0]),
                OpenBox::new(vec![0.0, 0.5], vec![1.0, 2.0]),
            ],
        );
        assert!(omega.contains_compact(&CompactBox::new(vec![0.2, 0.2], vec![0.8, 1.8], 3)));
        assert!(!omega.contains_compact(&CompactBox::new(vec![0.2, 0.2], vec![1.5, 1.8], 3)));
        assert_eq!(
            CompactBox::new(vec![0.0, 0.0], vec![1.0, 1.0], 3)
                .grid()
                .len(),
            9
        );
    }
}
