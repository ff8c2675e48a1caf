//! Finite-difference recomputation of the frame-derived invariants.
//!
//! Everything here is obtained by differencing the position map and the frame
//! fields numerically and projecting with the indefinite inner product. None of
//! the closed-form coefficient formulas are used, so the results serve as an
//! independent check of [`crate::surface_geom::fundamental_data`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pseudo_euclid::Vec4;
use crate::surface_geom::{FramePoint, SurfaceFamily};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub h: f64,
    pub richardson_levels: usize,
    pub probe_v: Vec<f64>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { h: 1e-4, richardson_levels: 1, probe_v: vec![0.0, 0.7, -0.7] }
    }
}

impl OracleConfig {
    fn validate(&self) -> Result<()> {
        if !(self.h.is_finite() && self.h > 0.0) {
            return Err(Error::BadParameter(format!("oracle step h = {} must be positive", self.h)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleSecondFundamentalForm {
    pub h311: f64,
    pub h322: f64,
    pub h412: f64,
    pub h312: f64,
    pub h411: f64,
    pub h422: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleConnectionForms {
    pub w12e1: f64,
    pub w34e1: f64,
    pub w12e2: f64,
    pub w34e2: f64,
}

/// Everything the oracle measures at one `(u, v)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleSample {
    /// `sqrt|<r_u, r_u>|` from differenced positions
    pub a: f64,
    /// `sqrt|<r_v, r_v>|` from differenced positions
    pub q: f64,
    pub frame: FramePoint,
    pub sff: OracleSecondFundamentalForm,
    pub connection: OracleConnectionForms,
    /// `r_u / A` from differenced positions
    pub fd_e2: Vec4,
    /// `r_v / q` from differenced positions
    pub fd_e1: Vec4,
}

impl OracleSample {
    /// `H = (1/2) Σ_r ε_r (ε1 h^r_11 + ε2 h^r_22) e_r`.
    pub fn mean_curvature(&self) -> Vec4 {
        let f = &self.frame;
        let (e1, e2) = (f.eps1.value(), f.eps2.value());
        let c3 = f.eps3.value() * (e1 * self.sff.h311 + e2 * self.sff.h322);
        let c4 = f.eps4.value() * (e1 * self.sff.h411 + e2 * self.sff.h422);
        (f.e3 * c3 + f.e4 * c4) * 0.5
    }
}

/// Central difference with `levels` rounds of Richardson extrapolation.
pub fn richardson<F: Fn(f64) -> Result<Vec4>>(f: F, x: f64, h: f64, levels: usize) -> Result<Vec4> {
    let mut table = Vec::with_capacity(levels + 1);
    for k in 0..=levels {
        let hk = h / f64::powi(2.0, k as i32);
        table.push((f(x + hk)? - f(x - hk)?) / (2.0 * hk));
    }
    for m in 1..=levels {
        let w = f64::powi(4.0, m as i32);
        for k in 0..=(levels - m) {
            table[k] = (table[k + 1] * w - table[k]) / (w - 1.0);
        }
    }
    Ok(table[0])
}

/// Checks that `u ± h` stays in the regular subinterval containing `u`.
fn check_u_probes(surface: &SurfaceFamily, u: f64, h: f64, center: &FramePoint) -> Result<()> {
    for x in [u - h, u + h] {
        match surface.eval_frame(x, 0.0) {
            Ok(f) if f.eps1 == center.eps1 && f.eps2 == center.eps2 => {}
            _ => return Err(Error::StepTooLarge { u, h }),
        }
    }
    Ok(())
}

/// Runs the full oracle at one point.
pub fn oracle_sample(surface: &SurfaceFamily, u: f64, v: f64, cfg: &OracleConfig) -> Result<OracleSample> {
    cfg.validate()?;
    let (h, levels) = (cfg.h, cfg.richardson_levels);
    let frame = surface.eval_frame(u, v)?;
    check_u_probes(surface, u, h, &frame)?;

    let r_u = richardson(|x| surface.eval_point(x, v), u, h, levels)?;
    let r_v = richardson(|y| surface.eval_point(u, y), v, h, levels)?;
    let a = r_u.norm_sq().abs().sqrt();
    let q = r_v.norm_sq().abs().sqrt();
    if a == 0.0 || q == 0.0 {
        return Err(Error::SingularFrame { u, a, q });
    }

    let along_u = |pick: fn(&FramePoint) -> Vec4| -> Result<Vec4> {
        Ok(richardson(|x| surface.eval_frame(x, v).map(|f| pick(&f)), u, h, levels)? / a)
    };
    let along_v = |pick: fn(&FramePoint) -> Vec4| -> Result<Vec4> {
        Ok(richardson(|y| surface.eval_frame(u, y).map(|f| pick(&f)), v, h, levels)? / q)
    };

    let d1_e1 = along_v(|f| f.e1)?;
    let d2_e1 = along_u(|f| f.e1)?;
    let d2_e2 = along_u(|f| f.e2)?;
    let d1_e3 = along_v(|f| f.e3)?;
    let d2_e3 = along_u(|f| f.e3)?;

    let f = &frame;
    let sff = OracleSecondFundamentalForm {
        h311: d1_e1.inner(&f.e3),
        h322: d2_e2.inner(&f.e3),
        h412: d2_e1.inner(&f.e4),
        h312: d2_e1.inner(&f.e3),
        h411: d1_e1.inner(&f.e4),
        h422: d2_e2.inner(&f.e4),
    };
    let connection = OracleConnectionForms {
        w12e1: d1_e1.inner(&f.e2),
        w34e1: d1_e3.inner(&f.e4),
        w12e2: d2_e1.inner(&f.e2),
        w34e2: d2_e3.inner(&f.e4),
    };
    Ok(OracleSample { a, q, frame, sff, connection, fd_e1: r_v / q, fd_e2: r_u / a })
}

pub fn oracle_second_fundamental_form(
    surface: &SurfaceFamily,
    u: f64,
    v: f64,
    cfg: &OracleConfig,
) -> Result<OracleSecondFundamentalForm> {
    Ok(oracle_sample(surface, u, v, cfg)?.sff)
}

pub fn oracle_mean_curvature(surface: &SurfaceFamily, u: f64, v: f64, cfg: &OracleConfig) -> Result<Vec4> {
    Ok(oracle_sample(surface, u, v, cfg)?.mean_curvature())
}

pub fn oracle_connection_forms(
    surface: &SurfaceFamily,
    u: f64,
    v: f64,
    cfg: &OracleConfig,
) -> Result<OracleConnectionForms> {
    Ok(oracle_sample(surface, u, v, cfg)?.connection)
}

/// Signed coefficient `c` with `H = c e3`, read off the oracle's vector.
pub fn oracle_mean_curvature_coefficient(sample: &OracleSample) -> f64 {
    let h = sample.mean_curvature();
    let e3 = sample.frame.e3;
    h.inner(&e3) * sample.frame.eps3.value()
}

/// Mean-curvature vector size used for pass/fail checks: the Euclidean sup
/// norm of its components.
pub fn oracle_mean_curvature_size(sample: &OracleSample) -> f64 {
    sample.mean_curvature().max_abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{ExplicitCurve, ProfileCurve};
    use crate::surface_geom::SurfaceKind;

    fn surf(kind: SurfaceKind, b: f64, c: ExplicitCurve) -> SurfaceFamily {
        SurfaceFamily::new(kind, b, ProfileCurve::explicit(c).unwrap()).unwrap()
    }

    #[test]
    fn richardson_improves_central_difference() {
        let f = |x: f64| Ok(Vec4::new(x.sin(), x.exp(), 0.0, 0.0));
        let exact = Vec4::new(1.0f64.cos(), 1.0f64.exp(), 0.0, 0.0);
        let plain = (richardson(f, 1.0, 1e-2, 0).unwrap() - exact).max_abs();
        let extra = (richardson(f, 1.0, 1e-2, 1).unwrap() - exact).max_abs();
        assert!(extra * 100.0 < plain, "{plain} vs {extra}");
    }

    #[test]
    fn circle_origin_values() {
        let s = surf(SurfaceKind::M1, 1.0, ExplicitCurve::SinCos);
        let o = oracle_sample(&s, 0.0, 0.0, &OracleConfig::default()).unwrap();
        let got = [o.sff.h311, o.sff.h322, o.sff.h412, o.sff.h312, o.sff.h411, o.sff.h422];
        let want = [-1.0, 1.0, 1.0, 0.0, 0.0, 0.0];
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-6, "{got:?}");
        }
        let c = o.connection;
        for x in [c.w12e1, c.w34e1, c.w12e2, c.w34e2] {
            assert!(x.abs() < 1e-6);
        }
    }

    #[test]
    fn step_leaving_subinterval_is_rejected() {
        let s = surf(SurfaceKind::M1, 1.0, ExplicitCurve::SinCos);
        let u = std::f64::consts::FRAC_PI_4 - 5e-5;
        let err = oracle_sample(&s, u, 0.0, &OracleConfig::default()).unwrap_err();
        assert!(matches!(err, Error::StepTooLarge { .. } | Error::SingularFrame { .. }));
    }

    #[test]
    fn mean_curvature_negative_control() {
        let s = surf(SurfaceKind::M1, 2.0, ExplicitCurve::SinCos);
        let h = oracle_mean_curvature(&s, 0.3, 0.0, &OracleConfig::default()).unwrap();
        assert!(h.max_abs() > 1e-3);
    }
}
