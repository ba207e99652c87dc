//! Second-order forward-mode jets over `n` coordinates.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};

/// Value, gradient, and Hessian of a scalar at a point.
///
/// The Hessian is stored row-major and is kept exactly symmetric: every
/// operation writes the upper triangle and mirrors it. When a jet is built
/// with `second_order == false` the Hessian is empty and only first
/// derivatives propagate.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet2 {
    pub value: f64,
    pub gradient: Vec<f64>,
    hessian: Vec<f64>,
}

impl Jet2 {
    pub fn constant(value: f64, n: usize, second_order: bool) -> Self {
        Self {
            value,
            gradient: vec![0.0; n],
            hessian: if second_order { vec![0.0; n * n] } else { Vec::new() },
        }
    }

    /// The coordinate function `x^index` evaluated at `value`.
    pub fn variable(value: f64, index: usize, n: usize, second_order: bool) -> Self {
        let mut jet = Self::constant(value, n, second_order);
        jet.gradient[index] = 1.0;
        jet
    }

    pub fn dim(&self) -> usize {
        self.gradient.len()
    }

    /// Second partial `∂_i ∂_j`. Zero for first-order jets.
    pub fn hessian(&self, i: usize, j: usize) -> f64 {
        if self.hessian.is_empty() {
            0.0
        } else {
            self.hessian[i * self.dim() + j]
        }
    }

    pub fn gradient_vector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.gradient)
    }

    pub fn hessian_matrix(&self) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |i, j| self.hessian(i, j))
    }

    /// Composition `φ(self)` given `φ(u)`, `φ'(u)` and `φ''(u)`.
    ///
    /// ∇φ = φ'∇u,  Hφ = φ'' ∇u∇uᵀ + φ' Hu.
    pub fn chain(&self, value: f64, d1: f64, d2: f64) -> Self {
        let n = self.dim();
        let gradient = self.gradient.iter().map(|g| d1 * g).collect();
        let mut hessian = Vec::new();
        if !self.hessian.is_empty() {
            hessian = vec![0.0; n * n];
            for i in 0..n {
                for j in i..n {
                    let h = d2 * self.gradient[i] * self.gradient[j] + d1 * self.hessian[i * n + j];
                    hessian[i * n + j] = h;
                    hessian[j * n + i] = h;
                }
            }
        }
        Self {
            value,
            gradient,
            hessian,
        }
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            value: k * self.value,
            gradient: self.gradient.iter().map(|g| k * g).collect(),
            hessian: self.hessian.iter().map(|h| k * h).collect(),
        }
    }

    fn zip(&self, other: &Self, value: f64, f: impl Fn(f64, f64) -> f64) -> Self {
        Self {
            value,
            gradient: self
                .gradient
                .iter()
                .zip(&other.gradient)
                .map(|(a, b)| f(*a, *b))
                .collect(),
            hessian: self
                .hessian
                .iter()
                .zip(&other.hessian)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }

    /// Second-order product rule:
    /// H(uv) = u Hv + v Hu + ∇u∇vᵀ + ∇v∇uᵀ.
    pub fn product(&self, other: &Self) -> Self {
        let n = self.dim();
        let (u, v) = (self.value, other.value);
        let gradient = (0..n)
            .map(|i| u * other.gradient[i] + v * self.gradient[i])
            .collect();
        let mut hessian = Vec::new();
        if !self.hessian.is_empty() {
            hessian = vec![0.0; n * n];
            for i in 0..n {
                for j in i..n {
                    let h = u * other.hessian[i * n + j]
                        + v * self.hessian[i * n + j]
                        + self.gradient[i] * other.gradient[j]
                        + other.gradient[i] * self.gradient[j];
                    hessian[i * n + j] = h;
                    hessian[j * n + i] = h;
                }
            }
        }
        Self {
            value: u * v,
            gradient,
            hessian,
        }
    }
}

impl Add for &Jet2 {
    type Output = Jet2;
    fn add(self, rhs: &Jet2) -> Jet2 {
        self.zip(rhs, self.value + rhs.value, |a, b| a + b)
    }
}

impl Sub for &Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: &Jet2) -> Jet2 {
        self.zip(rhs, self.value - rhs.value, |a, b| a - b)
    }
}

impl Mul for &Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: &Jet2) -> Jet2 {
        self.product(rhs)
    }
}

impl Neg for &Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}
