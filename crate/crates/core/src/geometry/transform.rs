use nalgebra::{DMatrix, DVector};

use super::{ChartJet, Immersion, ParamBox};

/// Rigid motion plus homothety of an immersion: X -> scale * Q X + shift.
#[derive(Debug, Clone)]
pub struct Transformed<I> {
    pub inner: I,
    pub scale: f64,
    pub rotation: DMatrix<f64>,
    pub shift: DVector<f64>,
}

impl<I: Immersion> Transformed<I> {
    pub fn identity(inner: I) -> Self {
        let m = inner.ambient_dim();
        Transformed { inner, scale: 1.0, rotation: DMatrix::identity(m, m), shift: DVector::zeros(m) }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_rotation(mut self, q: DMatrix<f64>) -> Self {
        self.rotation = q;
        self
    }

    pub fn with_shift(mut self, c: DVector<f64>) -> Self {
        self.shift = c;
        self
    }
}

impl<I: Immersion> Immersion for Transformed<I> {
    fn intrinsic_dim(&self) -> usize {
        self.inner.intrinsic_dim()
    }
    fn ambient_dim(&self) -> usize {
        self.inner.ambient_dim()
    }
    fn param_box(&self) -> ParamBox {
        self.inner.param_box()
    }
    fn jet(&self, u: &[f64]) -> ChartJet {
        let j = self.inner.jet(u);
        let q = &self.rotation * self.scale;
        ChartJet {
            position: &q * j.position + &self.shift,
            jacobian: &q * j.jacobian,
            hessian: j.hessian.into_iter().map(|h| &q * h).collect(),
        }
    }
}
