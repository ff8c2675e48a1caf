//! Closed-form geometry of the rotational surfaces `M1(b)` and `M2(b)`.
//!
//! `M1(b)`: `r(u, v) = (w sinh v, y cosh bv, y sinh bv, w cosh v)` with profile `(y, w)`.
//! `M2(b)`: `r(u, v) = (x cos v, x sin v, z cos bv, z sin bv)` with profile `(x, z)`.
//!
//! In both cases the profile jet stores the first component in `p` and the
//! second in `s`, so `g_uu = p'^2 - s'^2` for either kind.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profiles::{ProfileCurve, ProfileJet, REGULARITY_TOLERANCE};
use crate::pseudo_euclid::{Sign, Vec4};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SurfaceKind {
    /// hyperbolic rotation in the `x1 x4` plane combined with `x2 x3`
    M1,
    /// elliptic rotation in the `x1 x2` plane combined with `x3 x4`
    M2,
}

impl fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceKind::M1 => write!(f, "M1"),
            SurfaceKind::M2 => write!(f, "M2"),
        }
    }
}

impl FromStr for SurfaceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<SurfaceKind> {
        match s {
            "M1" | "m1" => Ok(SurfaceKind::M1),
            "M2" | "m2" => Ok(SurfaceKind::M2),
            other => Err(Error::BadParameter(format!("unknown surface kind {other:?}"))),
        }
    }
}

/// A rotational surface: kind, rotation-rate ratio and profile.
#[derive(Clone, Debug)]
pub struct SurfaceFamily {
    pub kind: SurfaceKind,
    pub b: f64,
    pub profile: ProfileCurve,
}

/// Induced metric in the `(v, u)` coordinate frame; the cross term vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InducedMetric {
    pub g_vv: f64,
    pub g_uu: f64,
}

/// Orthonormal frame `e1 = r_v/q`, `e2 = r_u/A` with normals `e3`, `e4`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FramePoint {
    pub e1: Vec4,
    pub e2: Vec4,
    pub e3: Vec4,
    pub e4: Vec4,
    pub eps1: Sign,
    pub eps2: Sign,
    pub eps3: Sign,
    pub eps4: Sign,
}

impl FramePoint {
    pub fn vectors(&self) -> [Vec4; 4] {
        [self.e1, self.e2, self.e3, self.e4]
    }

    pub fn signs(&self) -> [Sign; 4] {
        [self.eps1, self.eps2, self.eps3, self.eps4]
    }

    /// Largest entry of `|Gram - diag(eps)|`.
    pub fn orthonormality_error(&self) -> f64 {
        let e = self.vectors();
        let s = self.signs();
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let target = if i == j { s[i].value() } else { 0.0 };
                worst = worst.max((e[i].inner(&e[j]) - target).abs());
            }
        }
        worst
    }
}

/// The v-independent invariants of the surface at one profile parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FundamentalData {
    pub a: f64,
    pub q: f64,
    pub eps: Sign,
    pub eps_star: Sign,
    pub h311: f64,
    pub h322: f64,
    pub h412: f64,
    pub w12e1: f64,
    pub w34e1: f64,
}

impl FundamentalData {
    /// `-(εε* h311 + h322)/2` summed directly from the stored coefficients.
    pub fn mean_curvature_coefficient(&self) -> f64 {
        -0.5 * ((self.eps * self.eps_star).value() * self.h311 + self.h322)
    }
}

/// Mean curvature vector `H = coefficient * e3` at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanCurvature {
    pub coefficient: f64,
    pub vector: Vec4,
    pub v: f64,
}

impl SurfaceFamily {
    pub fn new(kind: SurfaceKind, b: f64, profile: ProfileCurve) -> Result<SurfaceFamily> {
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::BadParameter(format!("rotation rate b = {b} must be positive")));
        }
        Ok(SurfaceFamily { kind, b, profile })
    }

    pub fn jet(&self, u: f64) -> Result<ProfileJet> {
        self.profile.eval_jet(u)
    }

    pub fn eval_point(&self, u: f64, v: f64) -> Result<Vec4> {
        eval_point(self, u, v)
    }

    pub fn eval_frame(&self, u: f64, v: f64) -> Result<FramePoint> {
        eval_frame(self, u, v)
    }

    pub fn fundamental_data(&self, u: f64) -> Result<FundamentalData> {
        fundamental_data(self, u)
    }

    pub fn mean_curvature_coefficient(&self, u: f64) -> Result<f64> {
        mean_curvature_coefficient(self, u)
    }

    pub fn mean_curvature(&self, u: f64, v: f64) -> Result<MeanCurvature> {
        mean_curvature(self, u, v)
    }

    pub fn induced_metric(&self, u: f64) -> Result<InducedMetric> {
        induced_metric(self, u)
    }

    pub fn is_planar(&self) -> bool {
        is_planar(self)
    }

    /// Rotation norm `g_vv` from a jet: `s^2 - b^2 p^2` (M1), `p^2 - b^2 s^2` (M2).
    pub fn rotation_norm(&self, jet: &ProfileJet) -> f64 {
        let b2 = self.b * self.b;
        match self.kind {
            SurfaceKind::M1 => jet.s * jet.s - b2 * jet.p * jet.p,
            SurfaceKind::M2 => jet.p * jet.p - b2 * jet.s * jet.s,
        }
    }
}

pub fn eval_point(surface: &SurfaceFamily, u: f64, v: f64) -> Result<Vec4> {
    let j = surface.jet(u)?;
    Ok(position(surface.kind, surface.b, j.p, j.s, v))
}

fn position(kind: SurfaceKind, b: f64, p: f64, s: f64, v: f64) -> Vec4 {
    let bv = b * v;
    match kind {
        SurfaceKind::M1 => Vec4::new(s * v.sinh(), p * bv.cosh(), p * bv.sinh(), s * v.cosh()),
        SurfaceKind::M2 => Vec4::new(p * v.cos(), p * v.sin(), s * bv.cos(), s * bv.sin()),
    }
}

/// `∂r/∂v` in closed form.
fn position_dv(kind: SurfaceKind, b: f64, p: f64, s: f64, v: f64) -> Vec4 {
    let bv = b * v;
    match kind {
        SurfaceKind::M1 => Vec4::new(s * v.cosh(), b * p * bv.sinh(), b * p * bv.cosh(), s * v.sinh()),
        SurfaceKind::M2 => Vec4::new(-p * v.sin(), p * v.cos(), -b * s * bv.sin(), b * s * bv.cos()),
    }
}

pub fn induced_metric(surface: &SurfaceFamily, u: f64) -> Result<InducedMetric> {
    let j = surface.jet(u)?;
    Ok(InducedMetric { g_vv: surface.rotation_norm(&j), g_uu: j.speed_sq() })
}

struct Normalizers {
    a: f64,
    q: f64,
    eps: Sign,
    eps_star: Sign,
}

fn normalizers(surface: &SurfaceFamily, u: f64, j: &ProfileJet) -> Result<Normalizers> {
    let g_uu = j.speed_sq();
    let g_vv = surface.rotation_norm(j);
    let (a, q) = (g_uu.abs().sqrt(), g_vv.abs().sqrt());
    if g_uu.abs() <= REGULARITY_TOLERANCE || g_vv.abs() <= REGULARITY_TOLERANCE {
        return Err(Error::SingularFrame { u, a, q });
    }
    Ok(Normalizers { a, q, eps: Sign::of(g_uu), eps_star: Sign::of(g_vv) })
}

pub fn eval_frame(surface: &SurfaceFamily, u: f64, v: f64) -> Result<FramePoint> {
    let j = surface.jet(u)?;
    let n = normalizers(surface, u, &j)?;
    let b = surface.b;
    let bv = b * v;
    let e1 = position_dv(surface.kind, b, j.p, j.s, v) / n.q;
    let e2 = position(surface.kind, b, j.dp, j.ds, v) / n.a;
    let k = -(n.eps * n.eps_star).value() / n.q;
    let (e3, e4) = match surface.kind {
        SurfaceKind::M1 => {
            let (y, w, dy, dw) = (j.p, j.s, j.dp, j.ds);
            let e3 = Vec4::new(dy * v.sinh(), dw * bv.cosh(), dw * bv.sinh(), dy * v.cosh()) / n.a;
            let e4 = Vec4::new(b * y * v.cosh(), w * bv.sinh(), w * bv.cosh(), b * y * v.sinh()) * k;
            (e3, e4)
        }
        SurfaceKind::M2 => {
            let (x, z, dx, dz) = (j.p, j.s, j.dp, j.ds);
            let e3 = Vec4::new(dz * v.cos(), dz * v.sin(), dx * bv.cos(), dx * bv.sin()) / n.a;
            let e4 = Vec4::new(b * z * v.sin(), -b * z * v.cos(), x * bv.sin(), -x * bv.cos()) * k;
            (e3, e4)
        }
    };
    Ok(FramePoint { e1, e2, e3, e4, eps1: n.eps_star, eps2: n.eps, eps3: -n.eps, eps4: -n.eps_star })
}

pub fn fundamental_data(surface: &SurfaceFamily, u: f64) -> Result<FundamentalData> {
    let j = surface.jet(u)?;
    let n = normalizers(surface, u, &j)?;
    let b = surface.b;
    let b2 = b * b;
    let ee = (n.eps * n.eps_star).value();
    let (p, s, dp, ds) = (j.p, j.s, j.dp, j.ds);
    let aq2 = n.a * n.q * n.q;
    let h322 = (ds * j.ddp - dp * j.dds) / n.a.powi(3);
    let h412 = ee * b * (s * dp - p * ds) / aq2;
    let w34e1 = ee * b * (s * ds - p * dp) / aq2;
    let (h311, w12e1) = match surface.kind {
        SurfaceKind::M1 => ((b2 * p * ds - s * dp) / aq2, (b2 * p * dp - s * ds) / aq2),
        SurfaceKind::M2 => ((b2 * s * dp - p * ds) / aq2, (b2 * s * ds - p * dp) / aq2),
    };
    Ok(FundamentalData { a: n.a, q: n.q, eps: n.eps, eps_star: n.eps_star, h311, h322, h412, w12e1, w34e1 })
}

/// ZMC equation residual from a jet:
/// `s'p'' - p's'' + (p'^2 - s'^2) N / g_vv` with `N = b^2 p s' - s p'` (M1)
/// or `N = b^2 s p' - p s'` (M2).
pub(crate) fn zmc_residual_of_jet(kind: SurfaceKind, b: f64, j: &ProfileJet, g_vv: f64) -> f64 {
    let b2 = b * b;
    let numer = match kind {
        SurfaceKind::M1 => b2 * j.p * j.ds - j.s * j.dp,
        SurfaceKind::M2 => b2 * j.s * j.dp - j.p * j.ds,
    };
    j.ds * j.ddp - j.dp * j.dds + j.speed_sq() * numer / g_vv
}

/// `-(εε* h311 + h322)/2`, evaluated as `-residual / (2 A^3)`.
///
/// The two terms of the direct sum grow like `A^-3` near the singular locus
/// and cancel; the residual form avoids that cancellation.
pub fn mean_curvature_coefficient(surface: &SurfaceFamily, u: f64) -> Result<f64> {
    let j = surface.jet(u)?;
    let n = normalizers(surface, u, &j)?;
    let g_vv = surface.rotation_norm(&j);
    Ok(-zmc_residual_of_jet(surface.kind, surface.b, &j, g_vv) / (2.0 * n.a.powi(3)))
}

pub fn mean_curvature(surface: &SurfaceFamily, u: f64, v: f64) -> Result<MeanCurvature> {
    let coefficient = mean_curvature_coefficient(surface, u)?;
    let frame = eval_frame(surface, u, v)?;
    Ok(MeanCurvature { coefficient, vector: frame.e3 * coefficient, v })
}

/// True for `b = 1` surfaces whose profile is a line `p = c0 s` through the
/// origin with `c0^2 != 1`; these are pieces of planes.
pub fn is_planar(surface: &SurfaceFamily) -> bool {
    if surface.b != 1.0 {
        return false;
    }
    let (lo, hi) = surface.profile.domain();
    let mut slope: Option<f64> = None;
    for i in 0..=16 {
        let u = lo + (hi - lo) * i as f64 / 16.0;
        let Ok(j) = surface.jet(u) else { return false };
        let scale = 1.0 + j.p.abs() + j.s.abs();
        let cross = j.p * j.ds - j.s * j.dp;
        if cross.abs() > 1e-12 * scale * (1.0 + j.dp.abs() + j.ds.abs()) {
            return false;
        }
        if j.ds != 0.0 {
            let c = j.dp / j.ds;
            match slope {
                Some(c0) if (c - c0).abs() > 1e-12 * (1.0 + c0.abs()) => return false,
                None => slope = Some(c),
                _ => {}
            }
        }
    }
    matches!(slope, Some(c) if (c * c - 1.0).abs() > 1e-12)
}
