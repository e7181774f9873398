//! Truncated multivariate Taylor jets.
//!
//! A jet of order `k` in `d` variables stores `∂^α f(x)/α!` for every
//! multi-index with `|α| ≤ k`, in graded order. Arithmetic on jets is
//! forward-mode automatic differentiation of any order.

use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

/// Multi-index enumeration and product table for a given `(d, k)`.
#[derive(Debug)]
pub struct Layout {
    dim: usize,
    order: usize,
    indices: Vec<Vec<u8>>,
    lookup: HashMap<Vec<u8>, usize>,
    /// `(i, j, target)` with `α_i + α_j = α_target`.
    products: Vec<(u32, u32, u32)>,
}

impl Layout {
    fn build(dim: usize, order: usize) -> Self {
        let mut indices = Vec::new();
        for total in 0..=order {
            let mut current = vec![0u8; dim];
            push_graded(&mut indices, &mut current, 0, total);
        }
        let lookup: HashMap<Vec<u8>, usize> = indices
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        let mut products = Vec::new();
        for (i, a) in indices.iter().enumerate() {
            for (j, b) in indices.iter().enumerate() {
                let sum: Vec<u8> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if let Some(&t) = lookup.get(&sum) {
                    products.push((i as u32, j as u32, t as u32));
                }
            }
        }
        Layout {
            dim,
            order,
            indices,
            lookup,
            products,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn index_of(&self, alpha: &[u8]) -> Option<usize> {
        self.lookup.get(alpha).copied()
    }

    pub fn multi_index(&self, i: usize) -> &[u8] {
        &self.indices[i]
    }
}

fn push_graded(out: &mut Vec<Vec<u8>>, current: &mut Vec<u8>, axis: usize, remaining: usize) {
    if axis + 1 == current.len() {
        current[axis] = remaining as u8;
        out.push(current.clone());
        return;
    }
    for v in (0..=remaining).rev() {
        current[axis] = v as u8;
        push_graded(out, current, axis + 1, remaining - v);
    }
    current[axis] = 0;
}

/// Shared layout for `(d, k)`; built once per process.
pub fn layout(dim: usize, order: usize) -> Arc<Layout> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<Layout>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard
        .entry((dim.max(1), order))
        .or_insert_with(|| Arc::new(Layout::build(dim.max(1), order)))
        .clone()
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `α!`.
pub fn multi_factorial(alpha: &[u8]) -> f64 {
    alpha.iter().map(|&a| factorial(a as usize)).product()
}

#[derive(Debug, Clone)]
pub struct Jet {
    layout: Arc<Layout>,
    coeffs: Vec<f64>,
}

impl Jet {
    pub fn zeros(dim: usize, order: usize) -> Self {
        let layout = layout(dim, order);
        let coeffs = vec![0.0; layout.len()];
        Jet { layout, coeffs }
    }

    pub fn constant(dim: usize, order: usize, v: f64) -> Self {
        let mut j = Jet::zeros(dim, order);
        j.coeffs[0] = v;
        j
    }

    /// The coordinate function `x_axis` expanded at `x_axis = at`.
    pub fn variable(dim: usize, order: usize, axis: usize, at: f64) -> Self {
        let mut j = Jet::constant(dim, order, at);
        if order >= 1 {
            let mut alpha = vec![0u8; j.layout.dim];
            alpha[axis] = 1;
            let i = j.layout.index_of(&alpha).expect("first-order index");
            j.coeffs[i] = 1.0;
        }
        j
    }

    /// Embeds univariate Taylor coefficients `c_m` in variable `axis`.
    pub fn univariate(dim: usize, order: usize, axis: usize, taylor: &[f64]) -> Self {
        let mut j = Jet::zeros(dim, order);
        let mut alpha = vec![0u8; j.layout.dim];
        for (m, c) in taylor.iter().enumerate().take(order + 1) {
            alpha[axis] = m as u8;
            let i = j.layout.index_of(&alpha).expect("univariate index");
            j.coeffs[i] = *c;
        }
        j
    }

    pub fn dim(&self) -> usize {
        self.layout.dim
    }

    pub fn order(&self) -> usize {
        self.layout.order
    }

    pub fn layout(&self) -> &Arc<Layout> {
        &self.layout
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    /// Taylor coefficient `∂^α f / α!`; zero beyond the stored order.
    pub fn coeff(&self, alpha: &[u8]) -> f64 {
        let mut key = alpha.to_vec();
        key.resize(self.layout.dim, 0);
        self.layout.index_of(&key).map_or(0.0, |i| self.coeffs[i])
    }

    /// `∂^α f`.
    pub fn derivative(&self, alpha: &[u8]) -> f64 {
        self.coeff(alpha) * multi_factorial(alpha)
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet {
            layout: self.layout.clone(),
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add_scalar(&self, s: f64) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += s;
        out
    }

    /// `f(u)` from the Taylor coefficients `c_m` of `f` at `u(x)`.
    pub fn compose(&self, taylor: &[f64]) -> Jet {
        let k = self.layout.order;
        let mut h = self.clone();
        h.coeffs[0] = 0.0;
        let top = taylor.len().min(k + 1);
        if top == 0 {
            return Jet::zeros(self.layout.dim, k);
        }
        let mut acc = Jet::constant(self.layout.dim, k, taylor[top - 1]);
        for c in taylor[..top - 1].iter().rev() {
            acc = (&acc * &h).add_scalar(*c);
        }
        acc
    }

    /// `1/f`; `None` when the value vanishes.
    pub fn recip(&self) -> Option<Jet> {
        let a = self.value();
        if a == 0.0 || !a.is_finite() {
            return None;
        }
        let k = self.layout.order;
        let taylor: Vec<f64> = (0..=k)
            .map(|j| if j % 2 == 0 { 1.0 } else { -1.0 } / a.powi(j as i32 + 1))
            .collect();
        Some(self.compose(&taylor))
    }

    /// Jet of `∂^α f` of order `order`, read from this higher-order jet.
    pub fn differentiate(&self, alpha: &[u8], order: usize) -> Jet {
        let dim = self.layout.dim;
        let mut out = Jet::zeros(dim, order);
        let out_layout = out.layout.clone();
        for (i, beta) in out_layout.indices.iter().enumerate() {
            let sum: Vec<u8> = beta
                .iter()
                .zip(alpha.iter().chain(std::iter::repeat(&0)))
                .map(|(b, a)| b + a)
                .collect();
            if let Some(src) = self.layout.index_of(&sum) {
                out.coeffs[i] = self.coeffs[src] * multi_factorial(&sum) / multi_factorial(beta);
            }
        }
        out
    }

    /// Lowers the stored order.
    pub fn truncate(&self, order: usize) -> Jet {
        if order >= self.layout.order {
            return self.clone();
        }
        let mut out = Jet::zeros(self.layout.dim, order);
        let n = out.coeffs.len();
        out.coeffs.copy_from_slice(&self.coeffs[..n]);
        out
    }

    /// `Σ_α c_α h^α` for an offset `h`: the Taylor polynomial at `x + h`.
    pub fn eval_offset(&self, h: &[f64]) -> f64 {
        self.layout
            .indices
            .iter()
            .zip(&self.coeffs)
            .map(|(alpha, c)| {
                c * alpha
                    .iter()
                    .zip(h)
                    .map(|(a, x)| x.powi(*a as i32))
                    .product::<f64>()
            })
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    fn check(&self, other: &Jet) {
        debug_assert!(
            Arc::ptr_eq(&self.layout, &other.layout),
            "jet layouts differ"
        );
    }
}

impl Add for &Jet {
    type Output = Jet;

    fn add(self, rhs: &Jet) -> Jet {
        self.check(rhs);
        Jet {
            layout: self.layout.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;

    fn sub(self, rhs: &Jet) -> Jet {
        self.check(rhs);
        Jet {
            layout: self.layout.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &Jet {
    type Output = Jet;

    fn mul(self, rhs: &Jet) -> Jet {
        self.check(rhs);
        let mut coeffs = vec![0.0; self.coeffs.len()];
        if self.layout.order == 0 {
            coeffs[0] = self.coeffs[0] * rhs.coeffs[0];
        } else {
            for &(i, j, t) in &self.layout.products {
                coeffs[t as usize] += self.coeffs[i as usize] * rhs.coeffs[j as usize];
            }
        }
        Jet {
            layout: self.layout.clone(),
            coeffs,
        }
    }
}

impl Neg for &Jet {
    type Output = Jet;

    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_enumeration() {
        let l = layout(2, 2);
        let all: Vec<&[u8]> = (0..l.len()).map(|i| l.multi_index(i)).collect();
        assert_eq!(
            all,
            vec![&[0u8, 0][..], &[1, 0], &[0, 1], &[2, 0], &[1, 1], &[0, 2]]
        );
    }

    #[test]
    fn product_rule() {
        // f = x·y at (2, 3): ∂x∂y f = 1
        let x = Jet::variable(2, 3, 0, 2.0);
        let y = Jet::variable(2, 3, 1, 3.0);
        let f = &x * &y;
        assert_eq!(f.value(), 6.0);
        assert_eq!(f.derivative(&[1, 0]), 3.0);
        assert_eq!(f.derivative(&[1, 1]), 1.0);
        assert_eq!(f.derivative(&[2, 0]), 0.0);
    }

    #[test]
    fn reciprocal_and_shift() {
        let x = Jet::variable(1, 5, 0, 2.0);
        let r = x.recip().unwrap();
        // d³/dx³ 1/x = -6/x⁴
        assert!((r.derivative(&[3]) + 6.0 / 16.0).abs() < 1e-14);
        let d = r.differentiate(&[1], 2);
        assert!((d.value() + 0.25).abs() < 1e-15);
        assert!((d.derivative(&[2]) + 6.0 / 16.0).abs() < 1e-14);
    }
}
