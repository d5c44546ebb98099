//! The shipped analytic charts.

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::PI;
use nalgebra::{DMatrix, DVector};

use super::{ChartJet, Immersion, ParamBox};
use crate::error::{Error, Result};

pub const CATALOGUE_NAMES: [&str; 7] = [
    "interval",
    "line_segment",
    "rectangle",
    "annulus",
    "sphere_band",
    "grim_reaper_arc",
    "grim_reaper_plane",
];

fn jet(position: &[f64], jacobian: DMatrix<f64>, hessian: Vec<DVector<f64>>) -> ChartJet {
    ChartJet { position: DVector::from_column_slice(position), jacobian, hessian }
}

/// [a, b] in R^1, X(x) = x.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Immersion for Interval {
    fn intrinsic_dim(&self) -> usize {
        1
    }
    fn ambient_dim(&self) -> usize {
        1
    }
    fn param_box(&self) -> ParamBox {
        ParamBox::new(alloc::vec![self.a], alloc::vec![self.b], alloc::vec![false])
    }
    fn jet(&self, u: &[f64]) -> ChartJet {
        jet(&[u[0]], DMatrix::from_element(1, 1, 1.0), alloc::vec![DVector::zeros(1)])
    }
}

/// Straight segment of length `length` in R^2 through `origin` at angle `angle`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineSegment {
    pub length: f64,
    pub angle: f64,
    pub origin: [f64; 2],
}

impl Immersion for LineSegment {
    fn intrinsic_dim(&self) -> usize {
        1
    }
    fn ambient_dim(&self) -> usize {
        2
    }
    fn param_box(&self) -> ParamBox {
        ParamBox::new(alloc::vec![0.0], alloc::vec![self.length], alloc::vec![false])
    }
    fn jet(&self, u: &[f64]) -> ChartJet {
        let (s, c) = self.angle.sin_cos();
        jet(
            &[self.origin[0] + u[0] * c, self.origin[1] + u[0] * s],
            DMatrix::from_column_slice(2, 1, &[c, s]),
            alloc::vec![DVector::zeros(2)],
        )
    }
}

/// [0, width] x [0, height] as the plane z = 0 in R^3.
#[derive(Debug, Clone, PartialEq)]
pub struct Rectangle {
    pub width: f64,
    pub height: f64,
}

impl Immersion for Rectangle {
    fn intrinsic_dim(&self) -> usize {
        2
    }
    fn ambient_dim(&self) -> usize {
        3
    }
    fn param_box(&self) -> ParamBox {
        ParamBox::new(alloc::vec![0.0, 0.0], alloc::vec![self.width, self.height], alloc::vec![false, false])
    }
    fn jet(&self, u: &[f64]) -> ChartJet {
        jet(
            &[u[0], u[1], 0.0],
            DMatrix::from_column_slice(3, 2, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0]),
            alloc::vec![DVector::zeros(3); 4],
        )
    }
}

/// Planar annulus r_inner <= r <= r_outer in polar coordinates (r, phi),
/// phi periodic on [0, 2 pi].
#[derive(Debug, Clone, PartialEq)]
pub struct Annulus {
    pub r_inner: f64,
    pub r_outer: f64,
}

impl Immersion for Annulus {
    fn intrinsic_dim(&self) -> usize {
        2
    }
    fn ambient_dim(&self) -> usize {
        2
    }
    fn param_box(&self) -> ParamBox {
        ParamBox::new(alloc::vec![self.r_inner, 0.0], alloc::vec![self.r_outer, 2.0 * PI], alloc::vec![false, true])
    }
    fn jet(&self, u: &[f64]) -> ChartJet {
        let (r, (s, c)) = (u[0], u[1].sin_cos());
        jet(
            &[r * c, r * s],
            DMatrix::from_column_slice(2, 2, &[c, s, -r * s, r * c]),
            alloc::vec![
                DVector::from_column_slice(&[0.0, 0.0]),
                DVector::from_column_slice(&[-s, c]),
                DVector::from_column_slice(&[-s, c]),
                DVector::from_column_slice(&[-r * c, -r * s]),
            ],
        )
    }
}

/// Band theta_min <= theta <= theta_max of the round sphere of radius
/// `radius` in R^3, chart (theta, phi) with phi periodic on [0, 2 pi].
#[derive(Debug, Clone, PartialEq)]
pub struct SphereBand {
    pub theta_min: f64,
    pub theta_max: f64,
    pub radius: f64,
}

impl Immersion for SphereBand {
    fn intrinsic_dim(&self) -> usize {
        2
    }
    fn ambient_dim(&self) -> usize {
        3
    }
    fn param_box(&self) -> ParamBox {
        ParamBox::new(
            alloc::vec![self.theta_min, 0.0],
            alloc::vec![self.theta_max, 2.0 * PI],
            alloc::vec![false, true],
        )
    }
    fn jet(&self, u: &[f64]) -> ChartJet {
        let r = self.radius;
        let (st, ct) = u[0].sin_cos();
        let (sp, cp) = u[1].sin_cos();
        let v = |a: f64, b: f64, c: f64| DVector::from_column_slice(&[r * a, r * b, r * c]);
        let x_tp = v(-ct * sp, ct * cp, 0.0);
        jet(
            &[r * st * cp, r * st * sp, r * ct],
            DMatrix::from_column_slice(3, 2, &[r * ct * cp, r * ct * sp, -r * st, -r * st * sp, r * st * cp, 0.0]),
            alloc::vec![v(-st * cp, -st * sp, -ct), x_tp.clone(), x_tp, v(-st * cp, -st * sp, 0.0)],
        )
    }
}

/// The grim reaper curve y = -ln cos x over [-x0, x0] in R^2.
#[derive(Debug, Clone, PartialEq)]
pub struct GrimReaperArc {
    pub x0: f64,
}

impl Immersion for GrimReaperArc {
    fn intrinsic_dim(&self) -> usize {
        1
    }
    fn ambient_dim(&self) -> usize {
        2
    }
    fn param_box(&self) -> ParamBox {
        ParamBox::new(alloc::vec![-self.x0], alloc::vec![self.x0], alloc::vec![false])
    }
    fn jet(&self, u: &[f64]) -> ChartJet {
        let x = u[0];
        let c = x.cos();
        jet(
            &[x, -c.ln()],
            DMatrix::from_column_slice(2, 1, &[1.0, x.tan()]),
            alloc::vec![DVector::from_column_slice(&[0.0, 1.0 / (c * c)])],
        )
    }
}

/// Grim reaper cylinder (x/2, t, -ln(cos x)/2) over [-x0, x0] x
/// [-width/2, width/2] in R^3. The half scale makes the trace-normalized
/// mean curvature (1/2) Delta X equal the normal part of e_3.
#[derive(Debug, Clone, PartialEq)]
pub struct GrimReaperPlane {
    pub x0: f64,
    pub width: f64,
}

impl Immersion for GrimReaperPlane {
    fn intrinsic_dim(&self) -> usize {
        2
    }
    fn ambient_dim(&self) -> usize {
        3
    }
    fn param_box(&self) -> ParamBox {
        ParamBox::new(
            alloc::vec![-self.x0, -0.5 * self.width],
            alloc::vec![self.x0, 0.5 * self.width],
            alloc::vec![false, false],
        )
    }
    fn jet(&self, u: &[f64]) -> ChartJet {
        let x = u[0];
        let c = x.cos();
        let z = DVector::zeros(3);
        jet(
            &[0.5 * x, u[1], -0.5 * c.ln()],
            DMatrix::from_column_slice(3, 2, &[0.5, 0.0, 0.5 * x.tan(), 0.0, 1.0, 0.0]),
            alloc::vec![DVector::from_column_slice(&[0.0, 0.0, 0.5 / (c * c)]), z.clone(), z.clone(), z],
        )
    }
}

/// Any catalogue geometry, selected by name.
#[derive(Debug, Clone, PartialEq)]
pub enum Catalogue {
    Interval(Interval),
    LineSegment(LineSegment),
    Rectangle(Rectangle),
    Annulus(Annulus),
    SphereBand(SphereBand),
    GrimReaperArc(GrimReaperArc),
    GrimReaperPlane(GrimReaperPlane),
}

struct Params<'a> {
    name: &'a str,
    given: &'a BTreeMap<String, f64>,
    known: Vec<&'static str>,
}

impl<'a> Params<'a> {
    fn get(&mut self, key: &'static str, default: f64) -> f64 {
        self.known.push(key);
        self.given.get(key).copied().unwrap_or(default)
    }

    fn finish(self) -> Result<()> {
        for k in self.given.keys() {
            if !self.known.contains(&k.as_str()) {
                return Err(Error::InvalidInput(alloc::format!(
                    "geometry '{}' has no parameter '{}' (expected one of {:?})",
                    self.name,
                    k,
                    self.known
                )));
            }
        }
        Ok(())
    }
}

fn require(cond: bool, why: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidInput(why.to_string()))
    }
}

impl Catalogue {
    /// Builds a catalogue geometry; unknown names and parameters are errors.
    pub fn build(name: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let mut p = Params { name, given: params, known: Vec::new() };
        let geom = match name {
            "interval" => {
                let (a, b) = (p.get("a", 0.0), p.get("b", 1.0));
                require(b > a, "interval needs b > a")?;
                Catalogue::Interval(Interval { a, b })
            }
            "line_segment" => {
                let length = p.get("length", 1.0);
                require(length > 0.0, "line_segment needs length > 0")?;
                Catalogue::LineSegment(LineSegment {
                    length,
                    angle: p.get("angle", 0.5),
                    origin: [p.get("origin_x", 0.0), p.get("origin_y", 0.0)],
                })
            }
            "rectangle" => {
                let (width, height) = (p.get("width", 1.0), p.get("height", 1.0));
                require(width > 0.0 && height > 0.0, "rectangle needs positive sides")?;
                Catalogue::Rectangle(Rectangle { width, height })
            }
            "annulus" => {
                let (r_inner, r_outer) = (p.get("r_inner", 0.5), p.get("r_outer", 1.0));
                require(r_inner > 0.0 && r_outer > r_inner, "annulus needs 0 < r_inner < r_outer")?;
                Catalogue::Annulus(Annulus { r_inner, r_outer })
            }
            "sphere_band" => {
                let (theta_min, theta_max) = (p.get("theta_min", 0.6), p.get("theta_max", 2.2));
                let radius = p.get("radius", 1.0);
                require(
                    theta_min > 0.0 && theta_max < PI && theta_min < theta_max,
                    "sphere_band needs 0 < theta_min < theta_max < pi (poles are excluded)",
                )?;
                require(radius > 0.0, "sphere_band needs radius > 0")?;
                Catalogue::SphereBand(SphereBand { theta_min, theta_max, radius })
            }
            "grim_reaper_arc" => {
                let x0 = p.get("x0", 1.0);
                require(x0 > 0.0 && x0 < 0.5 * PI, "grim_reaper_arc needs 0 < x0 < pi/2")?;
                Catalogue::GrimReaperArc(GrimReaperArc { x0 })
            }
            "grim_reaper_plane" => {
                let (x0, width) = (p.get("x0", 1.0), p.get("width", 2.0));
                require(x0 > 0.0 && x0 < 0.5 * PI, "grim_reaper_plane needs 0 < x0 < pi/2")?;
                require(width > 0.0, "grim_reaper_plane needs width > 0")?;
                Catalogue::GrimReaperPlane(GrimReaperPlane { x0, width })
            }
            other => {
                return Err(Error::InvalidInput(alloc::format!(
                    "unknown geometry '{other}' (known: {CATALOGUE_NAMES:?})"
                )))
            }
        };
        p.finish()?;
        Ok(geom)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Catalogue::Interval(_) => "interval",
            Catalogue::LineSegment(_) => "line_segment",
            Catalogue::Rectangle(_) => "rectangle",
            Catalogue::Annulus(_) => "annulus",
            Catalogue::SphereBand(_) => "sphere_band",
            Catalogue::GrimReaperArc(_) => "grim_reaper_arc",
            Catalogue::GrimReaperPlane(_) => "grim_reaper_plane",
        }
    }

    /// One-line human description, used by `list-geometries`.
    pub fn describe(name: &str) -> Option<&'static str> {
        Some(match name {
            "interval" => "[a, b] in R^1; params a=0, b=1",
            "line_segment" => "straight segment in R^2; params length=1, angle=0.5, origin_x=0, origin_y=0",
            "rectangle" => "[0,width]x[0,height] in the plane z=0 of R^3 (minimal); params width=1, height=1",
            "annulus" => "planar annulus, polar chart (r, phi), phi periodic; params r_inner=0.5, r_outer=1",
            "sphere_band" => "band of the sphere in R^3, chart (theta, phi), phi periodic; params theta_min=0.6, theta_max=2.2, radius=1",
            "grim_reaper_arc" => "translator curve (x, -ln cos x) in R^2, x in [-x0, x0]; params x0=1",
            "grim_reaper_plane" => "translator surface (x/2, t, -ln(cos x)/2) in R^3, x in [-x0, x0]; params x0=1, width=2",
            _ => return None,
        })
    }

    fn inner(&self) -> &dyn Immersion {
        match self {
            Catalogue::Interval(g) => g,
            Catalogue::LineSegment(g) => g,
            Catalogue::Rectangle(g) => g,
            Catalogue::Annulus(g) => g,
            Catalogue::SphereBand(g) => g,
            Catalogue::GrimReaperArc(g) => g,
            Catalogue::GrimReaperPlane(g) => g,
        }
    }
}

impl Immersion for Catalogue {
    fn intrinsic_dim(&self) -> usize {
        self.inner().intrinsic_dim()
    }
    fn ambient_dim(&self) -> usize {
        self.inner().ambient_dim()
    }
    fn param_box(&self) -> ParamBox {
        self.inner().param_box()
    }
    fn jet(&self, u: &[f64]) -> ChartJet {
        self.inner().jet(u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point_geometry;
    use crate::geometry::DriftSpec;

    fn all() -> Vec<Catalogue> {
        CATALOGUE_NAMES.iter().map(|n| Catalogue::build(n, &BTreeMap::new()).unwrap()).collect()
    }

    #[test]
    fn jets_match_finite_differences() {
        let h = 1e-6;
        for g in all() {
            let pb = g.param_box();
            let n = g.intrinsic_dim();
            let u: Vec<f64> = (0..n).map(|d| pb.lo[d] + 0.37 * pb.extent(d)).collect();
            let j0 = g.jet(&u);
            for i in 0..n {
                let mut up = u.clone();
                let mut um = u.clone();
                up[i] += h;
                um[i] -= h;
                let (jp, jm) = (g.jet(&up), g.jet(&um));
                let dx = (&jp.position - &jm.position) / (2.0 * h);
                assert!((dx - j0.jacobian.column(i)).norm() < 1e-8, "{}", g.name());
                for j in 0..n {
                    let dd = (jp.jacobian.column(j) - jm.jacobian.column(j)) / (2.0 * h);
                    assert!((dd - j0.second(i, j)).norm() < 1e-7, "{} ({i},{j})", g.name());
                }
            }
        }
    }

    #[test]
    fn periodic_seams_close() {
        for g in all() {
            let pb = g.param_box();
            for d in 0..pb.dim() {
                if !pb.periodic[d] {
                    continue;
                }
                let mut a: Vec<f64> = (0..pb.dim()).map(|k| 0.5 * (pb.lo[k] + pb.hi[k])).collect();
                let mut b = a.clone();
                a[d] = pb.lo[d];
                b[d] = pb.hi[d];
                let (xa, xb) = (g.position(&a), g.position(&b));
                assert!((xa - &xb).norm() <= 1e-12 * xb.norm().max(1.0), "{}", g.name());
            }
        }
    }

    #[test]
    fn rejects_unknown_names_and_keys() {
        assert!(Catalogue::build("torus", &BTreeMap::new()).is_err());
        let mut p = BTreeMap::new();
        p.insert("radius".to_string(), 2.0);
        assert!(Catalogue::build("interval", &p).is_err());
        p.clear();
        p.insert("x0".to_string(), 1.6);
        assert!(Catalogue::build("grim_reaper_arc", &p).is_err());
    }

    #[test]
    fn grim_reaper_curvature_is_cos_x() {
        let g = GrimReaperArc { x0: 1.2 };
        let drift = DriftSpec::translator(&[0.0, 1.0]).unwrap();
        let pg = point_geometry(&g, &drift, &[0.7]).unwrap();
        assert!((pg.mean_curvature - 0.7f64.cos()).abs() < 1e-13);
        assert!((pg.mean_curvature - 0.764_842_187_284_488_5).abs() < 1e-12);
        assert!((pg.drift_tangent_norm - 0.7f64.sin()).abs() < 1e-13);
    }
}
