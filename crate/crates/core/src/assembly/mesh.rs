//! Tensor-product C1 Hermite meshes over a parameter box.

use alloc::vec::Vec;

use super::domain::DomainSpec;
use super::hermite::{hermite_1d, hermite_index};
use crate::error::{Error, Result};
use crate::geometry::ScalarJet;
use crate::quadrature::gauss_legendre;

pub const DEFAULT_QUADRATURE: usize = 8;
pub const MIN_QUADRATURE: usize = 6;

/// Uniform tensor grid carrying cubic Hermite (1D) or Bogner-Fox-Schmit
/// (2D and up) shape functions.
///
/// Every node carries 2^n DOFs: the value and all mixed first-order
/// parameter derivatives, indexed by a bitmask over coordinates (bit d set
/// means one derivative in coordinate d). Nodes on a clamped face lose all
/// of them; periodic coordinates identify the last node with the first.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshC1 {
    pub elements: Vec<usize>,
    pub quadrature_order: usize,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub periodic: Vec<bool>,
    nodes: Vec<usize>,
    free_index: Vec<Option<usize>>,
    free_count: usize,
    gauss_nodes: Vec<f64>,
    gauss_weights: Vec<f64>,
}

/// Shape functions of one element evaluated at one quadrature point.
#[derive(Debug, Clone, Default)]
pub struct BasisValues {
    pub values: Vec<f64>,
    /// `n` entries per shape function.
    pub gradients: Vec<f64>,
    /// `n * n` row-major entries per shape function.
    pub hessians: Vec<f64>,
}

impl BasisValues {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn gradient(&self, l: usize, n: usize) -> &[f64] {
        &self.gradients[l * n..(l + 1) * n]
    }

    pub fn hessian(&self, l: usize, n: usize) -> &[f64] {
        &self.hessians[l * n * n..(l + 1) * n * n]
    }
}

/// What a visitor sees at a quadrature point.
pub struct QuadPoint<'a> {
    pub element: usize,
    pub u: &'a [f64],
    /// Parametric weight: Gauss weight times element volume. Multiply by
    /// the weighted density to integrate against e^w dv.
    pub weight: f64,
    pub basis: &'a BasisValues,
    /// Free-DOF index of each local shape function, `None` when clamped.
    pub dofs: &'a [Option<usize>],
}

impl QuadPoint<'_> {
    /// Value, gradient and Hessian of the field with free coefficients `coef`.
    pub fn field(&self, coef: &[f64]) -> ScalarJet {
        let n = self.u.len();
        let mut jet = ScalarJet { value: 0.0, gradient: alloc::vec![0.0; n], hessian: alloc::vec![0.0; n * n] };
        for (l, dof) in self.dofs.iter().enumerate() {
            let Some(r) = *dof else { continue };
            let c = coef[r];
            if c == 0.0 {
                continue;
            }
            jet.value += c * self.basis.values[l];
            for (g, b) in jet.gradient.iter_mut().zip(self.basis.gradient(l, n)) {
                *g += c * b;
            }
            for (h, b) in jet.hessian.iter_mut().zip(self.basis.hessian(l, n)) {
                *h += c * b;
            }
        }
        jet
    }
}

impl MeshC1 {
    pub fn new(domain: &DomainSpec, elements: Vec<usize>, quadrature_order: usize) -> Result<Self> {
        let n = domain.dim();
        if elements.len() != n {
            return Err(Error::InvalidInput(alloc::format!(
                "mesh has {} element counts for a {n}-dimensional domain",
                elements.len()
            )));
        }
        if elements.iter().any(|&e| e == 0) {
            return Err(Error::InvalidInput("every coordinate needs at least one element".into()));
        }
        if quadrature_order < MIN_QUADRATURE {
            return Err(Error::InvalidInput(alloc::format!(
                "quadrature order {quadrature_order} is below the minimum {MIN_QUADRATURE}"
            )));
        }
        let periodic: Vec<bool> = (0..n).map(|d| domain.is_periodic(d)).collect();
        let nodes: Vec<usize> = (0..n).map(|d| if periodic[d] { elements[d] } else { elements[d] + 1 }).collect();
        let kinds = 1usize << n;
        let node_count: usize = nodes.iter().product();

        let mut free_index = alloc::vec![None; node_count * kinds];
        let mut free_count = 0;
        let mut k = alloc::vec![0usize; n];
        for node in 0..node_count {
            unflatten(node, &nodes, &mut k);
            let clamped = (0..n).any(|d| !periodic[d] && (k[d] == 0 || k[d] == elements[d]));
            if !clamped {
                for s in 0..kinds {
                    free_index[node * kinds + s] = Some(free_count);
                    free_count += 1;
                }
            }
        }
        if free_count == 0 {
            return Err(Error::EmptyInterior);
        }

        let (x, w) = gauss_legendre(quadrature_order);
        Ok(MeshC1 {
            elements,
            quadrature_order,
            lo: domain.lo.clone(),
            hi: domain.hi.clone(),
            periodic,
            nodes,
            free_index,
            free_count,
            gauss_nodes: x.iter().map(|t| 0.5 * (t + 1.0)).collect(),
            gauss_weights: w.iter().map(|v| 0.5 * v).collect(),
        })
    }

    pub fn uniform(domain: &DomainSpec, per_axis: usize) -> Result<Self> {
        MeshC1::new(domain, alloc::vec![per_axis; domain.dim()], DEFAULT_QUADRATURE)
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn free_dofs(&self) -> usize {
        self.free_count
    }

    pub fn element_count(&self) -> usize {
        self.elements.iter().product()
    }

    pub fn element_size(&self, d: usize) -> f64 {
        (self.hi[d] - self.lo[d]) / self.elements[d] as f64
    }

    /// Largest element edge in parameter units.
    pub fn mesh_size(&self) -> f64 {
        (0..self.dim()).map(|d| self.element_size(d)).fold(0.0, f64::max)
    }

    /// Free-DOF index of DOF `kind` (bitmask) at the node with multi-index `k`.
    pub fn free_dof(&self, k: &[usize], kind: usize) -> Option<usize> {
        let node = flatten(k, &self.nodes);
        self.free_index[node * (1 << self.dim()) + kind]
    }

    /// Parameter coordinate of node `k` along axis `d`.
    pub fn node_coordinate(&self, d: usize, k: usize) -> f64 {
        self.lo[d] + k as f64 * self.element_size(d)
    }

    /// Free-DOF index of every local shape function of element `e`.
    pub fn element_dofs(&self, e: usize) -> Vec<Option<usize>> {
        let n = self.dim();
        let kinds = 1usize << n;
        let mut idx = alloc::vec![0usize; n];
        unflatten(e, &self.elements, &mut idx);
        let mut k = alloc::vec![0usize; n];
        let mut out = Vec::with_capacity(kinds * kinds);
        for corner in 0..kinds {
            for d in 0..n {
                let mut kd = idx[d] + ((corner >> d) & 1);
                if self.periodic[d] && kd == self.elements[d] {
                    kd = 0;
                }
                k[d] = kd;
            }
            let node = flatten(&k, &self.nodes);
            for kind in 0..kinds {
                out.push(self.free_index[node * kinds + kind]);
            }
        }
        out
    }

    /// All quadrature points in visiting order.
    pub fn quadrature_points(&self) -> Vec<Vec<f64>> {
        let mut pts = Vec::new();
        let _ = self.for_each_point(|qp| {
            pts.push(qp.u.to_vec());
            Ok(())
        });
        pts
    }

    /// Visits every quadrature point, elements in lexicographic order with
    /// the last coordinate fastest. The order is fixed so that assembled
    /// sums are bit-reproducible.
    pub fn for_each_point<F>(&self, mut visit: F) -> Result<()>
    where
        F: FnMut(&QuadPoint<'_>) -> Result<()>,
    {
        let n = self.dim();
        let q = self.quadrature_order;
        let kinds = 1usize << n;
        let local = kinds * kinds;
        let h: Vec<f64> = (0..n).map(|d| self.element_size(d)).collect();
        let volume: f64 = h.iter().product();

        // 1D tables per axis and Gauss point: 4 functions x 3 derivative orders.
        let tables: Vec<Vec<[[f64; 3]; 4]>> =
            (0..n).map(|d| self.gauss_nodes.iter().map(|&t| hermite_1d(t, h[d])).collect()).collect();

        let mut idx = alloc::vec![0usize; n];
        let mut gidx = alloc::vec![0usize; n];
        let mut u = alloc::vec![0.0; n];
        let mut basis = BasisValues {
            values: alloc::vec![0.0; local],
            gradients: alloc::vec![0.0; local * n],
            hessians: alloc::vec![0.0; local * n * n],
        };
        let qn = q.pow(n as u32);
        for e in 0..self.element_count() {
            unflatten(e, &self.elements, &mut idx);
            let dofs = self.element_dofs(e);
            for g in 0..qn {
                unflatten_uniform(g, q, &mut gidx);
                let mut weight = volume;
                for d in 0..n {
                    u[d] = self.lo[d] + (idx[d] as f64 + self.gauss_nodes[gidx[d]]) * h[d];
                    weight *= self.gauss_weights[gidx[d]];
                }
                for corner in 0..kinds {
                    for kind in 0..kinds {
                        let l = corner * kinds + kind;
                        let f = |d: usize, order: usize| {
                            tables[d][gidx[d]][hermite_index((corner >> d) & 1, (kind >> d) & 1)][order]
                        };
                        let prod = |orders: &dyn Fn(usize) -> usize| (0..n).map(|d| f(d, orders(d))).product::<f64>();
                        basis.values[l] = prod(&|_| 0);
                        for i in 0..n {
                            basis.gradients[l * n + i] = prod(&|d| usize::from(d == i));
                            for j in 0..n {
                                basis.hessians[(l * n + i) * n + j] =
                                    prod(&|d| usize::from(d == i) + usize::from(d == j));
                            }
                        }
                    }
                }
                visit(&QuadPoint { element: e, u: &u, weight, basis: &basis, dofs: &dofs })?;
            }
        }
        Ok(())
    }
}

fn flatten(k: &[usize], counts: &[usize]) -> usize {
    k.iter().zip(counts).fold(0, |acc, (&ki, &c)| acc * c + ki)
}

fn unflatten(mut lin: usize, counts: &[usize], out: &mut [usize]) {
    for d in (0..counts.len()).rev() {
        out[d] = lin % counts[d];
        lin /= counts[d];
    }
}

fn unflatten_uniform(mut lin: usize, q: usize, out: &mut [usize]) {
    for d in (0..out.len()).rev() {
        out[d] = lin % q;
        lin /= q;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Annulus, Interval, Rectangle};
    use crate::geometry::Immersion;

    #[test]
    fn interval_dof_count() {
        let d = DomainSpec::whole(&Interval { a: 0.0, b: 1.0 }.param_box());
        let m = MeshC1::uniform(&d, 10).unwrap();
        assert_eq!(m.free_dofs(), 2 * 9);
        assert_eq!(m.quadrature_points().len(), 10 * 8);
    }

    #[test]
    fn rectangle_and_annulus_dof_counts() {
        let r = DomainSpec::whole(&Rectangle { width: 1.0, height: 2.0 }.param_box());
        assert_eq!(MeshC1::new(&r, alloc::vec![4, 6], 6).unwrap().free_dofs(), 4 * 3 * 5);
        let a = DomainSpec::whole(&Annulus { r_inner: 0.5, r_outer: 1.0 }.param_box());
        // radial: 3 interior nodes; angular: 8 periodic nodes
        assert_eq!(MeshC1::new(&a, alloc::vec![4, 8], 6).unwrap().free_dofs(), 4 * 3 * 8);
    }

    #[test]
    fn single_element_is_empty() {
        let d = DomainSpec::whole(&Interval { a: 0.0, b: 1.0 }.param_box());
        assert_eq!(MeshC1::uniform(&d, 1), Err(Error::EmptyInterior));
        assert!(MeshC1::new(&d, alloc::vec![4], 5).is_err());
    }

    #[test]
    fn quadrature_weights_sum_to_area() {
        let r = DomainSpec::whole(&Rectangle { width: 1.5, height: 2.0 }.param_box());
        let m = MeshC1::new(&r, alloc::vec![3, 2], 6).unwrap();
        let mut s = 0.0;
        m.for_each_point(|qp| {
            s += qp.weight;
            Ok(())
        })
        .unwrap();
        let area: f64 = (0..2).map(|d| m.hi[d] - m.lo[d]).product();
        assert!((s - area).abs() < 1e-13);
    }

    #[test]
    fn field_is_continuous_across_elements() {
        let r = DomainSpec::whole(&Rectangle { width: 1.0, height: 1.0 }.param_box());
        let m = MeshC1::new(&r, alloc::vec![3, 3], 6).unwrap();
        // The value DOF of one node only touches the four elements around it.
        let mut coef = alloc::vec![0.0; m.free_dofs()];
        let r0 = m.free_dof(&[1, 1], 0).unwrap();
        coef[r0] = 1.0;
        let node = [m.node_coordinate(0, 1), m.node_coordinate(1, 1)];
        let mut seen = 0;
        m.for_each_point(|qp| {
            let jet = qp.field(&coef);
            let dist = ((qp.u[0] - node[0]).abs()).max((qp.u[1] - node[1]).abs());
            if dist > m.element_size(0) {
                assert_eq!(jet.value, 0.0);
            } else {
                seen += 1;
                assert!(jet.value >= 0.0 && jet.value <= 1.0);
            }
            Ok(())
        })
        .unwrap();
        assert_eq!(seen, 4 * 36);
    }
}
