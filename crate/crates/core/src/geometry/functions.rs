#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;
use alloc::vec::Vec;

use super::Immersion;

/// Value, parameter gradient and row-major parameter Hessian of a scalar.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarJet {
    pub value: f64,
    pub gradient: Vec<f64>,
    pub hessian: Vec<f64>,
}

/// A smooth scalar function on the chart, with exact parameter derivatives.
pub trait SmoothFn {
    fn jet(&self, u: &[f64]) -> ScalarJet;
}

/// One-variable building block of a [`Separable`] function.
#[derive(Debug, Clone, PartialEq)]
pub enum Factor {
    /// sum_k c_k x^k
    Poly(Vec<f64>),
    /// cos(freq * x + phase)
    Cos { freq: f64, phase: f64 },
    /// ((x - lo)(hi - x))^power on [lo, hi]; vanishes to order `power` at both ends.
    Bump { lo: f64, hi: f64, power: u32 },
    /// exp(rate * x)
    Exp { rate: f64 },
}

impl Factor {
    /// (f, f', f'') at x.
    pub fn eval(&self, x: f64) -> (f64, f64, f64) {
        match self {
            Factor::Poly(c) => {
                let (mut f, mut d1, mut d2) = (0.0, 0.0, 0.0);
                for &ck in c.iter().rev() {
                    d2 = d2 * x + 2.0 * d1;
                    d1 = d1 * x + f;
                    f = f * x + ck;
                }
                (f, d1, d2)
            }
            Factor::Cos { freq, phase } => {
                let a = freq * x + phase;
                (a.cos(), -freq * a.sin(), -freq * freq * a.cos())
            }
            Factor::Bump { lo, hi, power } => {
                let q = (x - lo) * (hi - x);
                let dq = hi + lo - 2.0 * x;
                let ddq = -2.0;
                let p = *power as i32;
                if p == 0 {
                    return (1.0, 0.0, 0.0);
                }
                let qp1 = q.powi(p - 1);
                let f = qp1 * q;
                let d1 = p as f64 * qp1 * dq;
                let qp2 = if p >= 2 { q.powi(p - 2) } else { 0.0 };
                let d2 = p as f64 * ((p - 1) as f64 * qp2 * dq * dq + qp1 * ddq);
                (f, d1, d2)
            }
            Factor::Exp { rate } => {
                let e = (rate * x).exp();
                (e, rate * e, rate * rate * e)
            }
        }
    }
}

/// Product of per-coordinate factors, f(u) = prod_d F_d(u_d), times a scale.
#[derive(Debug, Clone, PartialEq)]
pub struct Separable {
    pub scale: f64,
    pub factors: Vec<Factor>,
}

impl Separable {
    pub fn new(factors: Vec<Factor>) -> Self {
        Separable { scale: 1.0, factors }
    }

    pub fn scaled(mut self, s: f64) -> Self {
        self.scale *= s;
        self
    }
}

impl SmoothFn for Separable {
    fn jet(&self, u: &[f64]) -> ScalarJet {
        let n = self.factors.len();
        let ev: Vec<(f64, f64, f64)> = self.factors.iter().zip(u).map(|(f, &x)| f.eval(x)).collect();
        let prod_except = |skip: &[usize]| -> f64 { (0..n).filter(|d| !skip.contains(d)).map(|d| ev[d].0).product() };
        let value = self.scale * prod_except(&[]);
        let mut gradient = alloc::vec![0.0; n];
        let mut hessian = alloc::vec![0.0; n * n];
        for i in 0..n {
            gradient[i] = self.scale * ev[i].1 * prod_except(&[i]);
            for j in 0..n {
                hessian[i * n + j] = if i == j {
                    self.scale * ev[i].2 * prod_except(&[i])
                } else {
                    self.scale * ev[i].1 * ev[j].1 * prod_except(&[i, j])
                };
            }
        }
        ScalarJet { value, gradient, hessian }
    }
}

/// The ambient coordinate function y^alpha restricted to the immersion.
pub struct AmbientCoordinate<'a, I: Immersion + ?Sized> {
    pub immersion: &'a I,
    pub alpha: usize,
}

impl<I: Immersion + ?Sized> SmoothFn for AmbientCoordinate<'_, I> {
    fn jet(&self, u: &[f64]) -> ScalarJet {
        let jet = self.immersion.jet(u);
        let n = jet.jacobian.ncols();
        ScalarJet {
            value: jet.position[self.alpha],
            gradient: (0..n).map(|i| jet.jacobian[(self.alpha, i)]).collect(),
            hessian: jet.hessian.iter().map(|h| h[self.alpha]).collect(),
        }
    }
}
