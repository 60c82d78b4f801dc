//! Cubic interpolating splines with not-a-knot end conditions.

use crate::error::{Error, Result};

/// Piecewise cubic `S` through `(xs[i], ys[i])`, stored as second derivatives
/// at the knots. Outside the knot range the end pieces are continued.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    m: Vec<f64>,
}

impl CubicSpline {
    /// Builds the spline; `xs` must be strictly increasing with at least two
    /// knots. With two knots the spline is linear, with three it is the
    /// interpolating parabola.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::invalid("spline knots and values differ in length"));
        }
        if xs.len() < 2 {
            return Err(Error::invalid("spline needs at least two knots"));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("spline knots must be strictly increasing"));
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(Error::invalid("spline data must be finite"));
        }
        let m = second_derivatives(&xs, &ys);
        Ok(CubicSpline { xs, ys, m })
    }

    pub fn knots(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.ys
    }

    pub fn lo(&self) -> f64 {
        self.xs[0]
    }

    pub fn hi(&self) -> f64 {
        *self.xs.last().unwrap()
    }

    fn segment(&self, x: f64) -> usize {
        let n = self.xs.len();
        match self.xs.partition_point(|&k| k <= x) {
            0 => 0,
            i if i >= n => n - 2,
            i => i - 1,
        }
    }

    // Returns (h, a, b) with a = (x_{i+1} - x)/h, b = (x - x_i)/h.
    fn local(&self, i: usize, x: f64) -> (f64, f64, f64) {
        let h = self.xs[i + 1] - self.xs[i];
        let b = (x - self.xs[i]) / h;
        (h, 1.0 - b, b)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let (h, a, b) = self.local(i, x);
        a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let (h, a, b) = self.local(i, x);
        (self.ys[i + 1] - self.ys[i]) / h
            + (-(3.0 * a * a - 1.0) * self.m[i] + (3.0 * b * b - 1.0) * self.m[i + 1]) * h / 6.0
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let (_, a, b) = self.local(i, x);
        a * self.m[i] + b * self.m[i + 1]
    }

    /// `∫ S` from the knot `xs[i]` to `x`, with `x` inside (or continuing) segment `i`.
    fn segment_integral(&self, i: usize, x: f64) -> f64 {
        let (h, a, b) = self.local(i, x);
        // antiderivative in terms of b, with a = 1 - b
        let lin = h * (self.ys[i] * (b - b * b / 2.0) + self.ys[i + 1] * b * b / 2.0);
        let cub = h * h * h / 6.0
            * (self.m[i] * ((1.0 - a.powi(4)) / 4.0 - (b - b * b / 2.0))
                + self.m[i + 1] * (b.powi(4) / 4.0 - b * b / 2.0));
        lin + cub
    }

    /// Cumulative integral from the first knot to every knot.
    pub fn cumulative_integrals(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.xs.len());
        let mut acc = 0.0;
        out.push(0.0);
        for i in 0..self.xs.len() - 1 {
            acc += self.segment_integral(i, self.xs[i + 1]);
            out.push(acc);
        }
        out
    }

    /// `∫_{xs[0]}^{x} S`, given the table from [`cumulative_integrals`](Self::cumulative_integrals).
    pub fn integral_from_start(&self, cumulative: &[f64], x: f64) -> f64 {
        let i = self.segment(x);
        cumulative[i] + self.segment_integral(i, x)
    }
}

fn second_derivatives(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    if n == 2 {
        return vec![0.0; 2];
    }
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let d: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
    if n == 3 {
        // single parabola: constant second derivative
        let c = 2.0 * (d[1] - d[0]) / (h[0] + h[1]);
        return vec![c; 3];
    }
    // Unknowns m[1..n-1]; not-a-knot eliminates m[0] and m[n-1].
    let k = n - 2;
    let mut sub = vec![0.0; k];
    let mut diag = vec![0.0; k];
    let mut sup = vec![0.0; k];
    let mut rhs = vec![0.0; k];
    for j in 0..k {
        let i = j + 1;
        sub[j] = h[i - 1];
        diag[j] = 2.0 * (h[i - 1] + h[i]);
        sup[j] = h[i];
        rhs[j] = 6.0 * (d[i] - d[i - 1]);
    }
    // m0 = ((h0 + h1) m1 - h0 m2) / h1
    diag[0] += h[0] * (h[0] + h[1]) / h[1];
    sup[0] -= h[0] * h[0] / h[1];
    // m_{n-1} = ((h_{n-3} + h_{n-2}) m_{n-2} - h_{n-2} m_{n-3}) / h_{n-3}
    let (hl, hr) = (h[n - 3], h[n - 2]);
    diag[k - 1] += hr * (hl + hr) / hl;
    sub[k - 1] -= hr * hr / hl;

    let inner = solve_tridiagonal(&sub, &diag, &sup, &rhs);
    let mut m = Vec::with_capacity(n);
    m.push(((h[0] + h[1]) * inner[0] - h[0] * inner[1.min(k - 1)]) / h[1]);
    m.extend_from_slice(&inner);
    let last = ((hl + hr) * inner[k - 1] - hr * inner[k.saturating_sub(2)]) / hl;
    m.push(last);
    m
}

fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let denom = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / denom;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / denom;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}
