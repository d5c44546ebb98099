use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::ParamBox;

/// Boundary treatment of one face of the parameter sub-box.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceCondition {
    /// u = du/dn = 0.
    Clamped,
    /// The face is glued to the opposite one.
    Periodic,
}

/// The bounded domain Omega as a sub-box of the chart's parameter box.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    /// [low face, high face] per coordinate.
    pub faces: Vec<[FaceCondition; 2]>,
}

impl DomainSpec {
    /// The whole parameter box: periodic coordinates stay periodic, every
    /// other face is clamped.
    pub fn whole(pb: &ParamBox) -> Self {
        let faces = pb
            .periodic
            .iter()
            .map(|&p| if p { [FaceCondition::Periodic; 2] } else { [FaceCondition::Clamped; 2] })
            .collect();
        DomainSpec { lo: pb.lo.clone(), hi: pb.hi.clone(), faces }
    }

    /// A clamped sub-box. Periodic coordinates must span the full period.
    pub fn sub_box(pb: &ParamBox, lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        let mut d = DomainSpec::whole(pb);
        d.lo = lo;
        d.hi = hi;
        d.validate(pb)?;
        Ok(d)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn is_periodic(&self, d: usize) -> bool {
        self.faces[d][0] == FaceCondition::Periodic
    }

    pub fn validate(&self, pb: &ParamBox) -> Result<()> {
        let bad = |why: alloc::string::String| Err(Error::InvalidInput(why));
        if self.dim() != pb.dim() || self.hi.len() != self.dim() || self.faces.len() != self.dim() {
            return bad(alloc::format!("domain dimension does not match the chart dimension {}", pb.dim()));
        }
        for d in 0..self.dim() {
            let tol = 1e-12 * pb.extent(d).abs().max(1.0);
            if !(self.lo[d] < self.hi[d]) {
                return bad(alloc::format!("domain coordinate {d} is empty"));
            }
            if self.lo[d] < pb.lo[d] - tol || self.hi[d] > pb.hi[d] + tol {
                return bad(alloc::format!("domain coordinate {d} leaves the parameter box"));
            }
            let [f0, f1] = self.faces[d];
            if f0 != f1 {
                return bad(alloc::format!("coordinate {d}: periodic faces come in pairs"));
            }
            let periodic = f0 == FaceCondition::Periodic;
            if periodic != pb.periodic[d] {
                return bad(alloc::format!(
                    "coordinate {d}: periodic flag {periodic} does not match the chart ({})",
                    pb.periodic[d]
                ));
            }
            if periodic && ((self.lo[d] - pb.lo[d]).abs() > tol || (self.hi[d] - pb.hi[d]).abs() > tol) {
                return bad(alloc::format!("coordinate {d}: a periodic coordinate must span the full period"));
            }
        }
        Ok(())
    }
}
