//! Zero-mean-curvature diagnostics and the verification driver.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fd_oracle::{oracle_mean_curvature_size, oracle_sample, OracleConfig};
use crate::profiles::{
    regularity_scan, roles, FamilySpec, ProfileCurve, ProfileJet, RegularPiece, REGULARITY_TOLERANCE,
};
use crate::pseudo_euclid::Sign;
use crate::surface_geom::{zmc_residual_of_jet, SurfaceFamily, SurfaceKind};

/// Residual of the second-order ZMC equation at `u`.
///
/// M1: `w'y'' - y'w'' + (y'^2 - w'^2)(b^2 y w' - w y')/(w^2 - b^2 y^2)`;
/// M2: `z'x'' - x'z'' + (x'^2 - z'^2)(b^2 z x' - x z')/(x^2 - b^2 z^2)`.
/// It equals `-2 A^3` times the mean-curvature coefficient.
pub fn zmc_residual(surface: &SurfaceFamily, u: f64) -> Result<f64> {
    let j = surface.jet(u)?;
    let (_, g_vv) = regular_metric(surface, u, &j)?;
    Ok(zmc_residual_of_jet(surface.kind, surface.b, &j, g_vv))
}

fn regular_metric(surface: &SurfaceFamily, u: f64, j: &ProfileJet) -> Result<(f64, f64)> {
    let g_uu = j.speed_sq();
    let g_vv = surface.rotation_norm(j);
    if g_uu.abs() <= REGULARITY_TOLERANCE || g_vv.abs() <= REGULARITY_TOLERANCE {
        return Err(Error::SingularFrame { u, a: g_uu.abs().sqrt(), q: g_vv.abs().sqrt() });
    }
    Ok((g_uu, g_vv))
}

/// First integral of the ZMC equation, normalized by `|speed^2|` so that it
/// does not depend on the parametrization of the profile:
/// `F = (b^2 - 1)(b^2 σ^2 τ'^2 - τ^2 σ'^2) / |p'^2 - s'^2|`, with `σ` the
/// component scaled by `b` and `τ` the other one.
pub fn normalized_first_integral(surface: &SurfaceFamily, u: f64) -> Result<f64> {
    if surface.b == 1.0 {
        return Err(Error::BadParameter(
            "the first integral degenerates for b = 1; test the quadratic family instead".into(),
        ));
    }
    let j = surface.jet(u)?;
    let speed_sq = j.speed_sq();
    if speed_sq.abs() <= REGULARITY_TOLERANCE {
        return Err(Error::LightlikeTangent { u, speed_sq });
    }
    regular_metric(surface, u, &j)?;
    Ok(first_integral_of_jet(surface.kind, surface.b, &j))
}

pub(crate) fn first_integral_of_jet(kind: SurfaceKind, b: f64, j: &ProfileJet) -> f64 {
    let b2 = b * b;
    let (sigma, tau, dsigma, dtau) = match kind {
        SurfaceKind::M1 => (j.p, j.s, j.dp, j.ds),
        SurfaceKind::M2 => (j.s, j.p, j.ds, j.dp),
    };
    (b2 - 1.0) * (b2 * sigma * sigma * dtau * dtau - tau * tau * dsigma * dsigma) / j.speed_sq().abs()
}

/// Residuals of the two Codazzi identities
/// `e2(h311) = ε* h412 ω34(e1) + ω12(e1)(ε* h311 - ε h322)` and
/// `e2(h412) = -ε h322 ω34(e1) + 2 ε* h412 ω12(e1)`,
/// with `e2 = (1/A) d/du` by central differences and one Richardson level.
pub fn codazzi_residuals(surface: &SurfaceFamily, u: f64, h: f64) -> Result<(f64, f64)> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::BadParameter(format!("step h = {h} must be positive")));
    }
    let d = surface.fundamental_data(u)?;
    let at = |x: f64| match surface.fundamental_data(x) {
        Ok(o) if o.eps == d.eps && o.eps_star == d.eps_star => Ok(o),
        _ => Err(Error::StepTooLarge { u, h }),
    };
    let (p1, m1, p2, m2) = (at(u + h)?, at(u - h)?, at(u + 0.5 * h)?, at(u - 0.5 * h)?);
    let deriv = |f: fn(&crate::surface_geom::FundamentalData) -> f64| {
        let coarse = (f(&p1) - f(&m1)) / (2.0 * h);
        let fine = (f(&p2) - f(&m2)) / h;
        (4.0 * fine - coarse) / 3.0 / d.a
    };
    let e2_h311 = deriv(|x| x.h311);
    let e2_h412 = deriv(|x| x.h412);
    let (e, es) = (d.eps.value(), d.eps_star.value());
    let r1 = e2_h311 - (es * d.h412 * d.w34e1 + d.w12e1 * (es * d.h311 - e * d.h322));
    let r2 = e2_h412 - (-e * d.h322 * d.w34e1 + 2.0 * es * d.h412 * d.w12e1);
    Ok((r1, r2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CausalLabel {
    SpacelikePositiveDefinite,
    SpacelikeNegativeDefinite,
    Timelike,
}

impl CausalLabel {
    pub fn from_signs(eps: Sign, eps_star: Sign) -> CausalLabel {
        match (eps * eps_star, eps_star) {
            (Sign::Minus, _) => CausalLabel::Timelike,
            (Sign::Plus, Sign::Plus) => CausalLabel::SpacelikePositiveDefinite,
            (Sign::Plus, Sign::Minus) => CausalLabel::SpacelikeNegativeDefinite,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CausalLabel::SpacelikePositiveDefinite => "spacelike-positive-definite",
            CausalLabel::SpacelikeNegativeDefinite => "spacelike-negative-definite",
            CausalLabel::Timelike => "timelike",
        }
    }
}

impl fmt::Display for CausalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Causal type of the surface over the open interval `(start, end)`; the
/// metric signs must be regular and constant on 256 interior samples.
pub fn classify_causal(surface: &SurfaceFamily, start: f64, end: f64) -> Result<CausalLabel> {
    let mixed = || Error::MixedSigns { start, end };
    let mut signs: Option<(Sign, Sign)> = None;
    let n = 256;
    for i in 1..=n {
        let u = start + (end - start) * i as f64 / (n + 1) as f64;
        let m = surface.induced_metric(u).map_err(|_| mixed())?;
        if m.g_uu.abs() <= REGULARITY_TOLERANCE || m.g_vv.abs() <= REGULARITY_TOLERANCE {
            return Err(mixed());
        }
        let here = (Sign::of(m.g_uu), Sign::of(m.g_vv));
        match signs {
            None => signs = Some(here),
            Some(s) if s != here => return Err(mixed()),
            _ => {}
        }
    }
    let (eps, eps_star) = signs.ok_or_else(mixed)?;
    Ok(CausalLabel::from_signs(eps, eps_star))
}

/// Implicit-equation residual of one profile point against a family.
///
/// Trigonometric and hyperbolic families are checked in solved form: the
/// scaled component fixes the curve parameter up to the inverse-function
/// branches, and the smallest mismatch of the unscaled component over those
/// branches is returned. This stays well conditioned through turning points.
pub fn membership_residual(kind: SurfaceKind, jet: &ProfileJet, family: &FamilySpec, u: f64) -> Result<f64> {
    let (sigma, tau) = roles(kind, jet);
    match *family {
        FamilySpec::Quadratic { lambda0, mu0, .. } => {
            Ok(((sigma + tau).powi(2) + lambda0 * (tau - sigma).powi(2) - mu0).abs())
        }
        FamilySpec::Arcsine { a0, b, c0, branch, eps_star } => {
            let mu_sq = eps_star.value() * a0 / (1.0 - b * b);
            if !(mu_sq > 0.0) || b == 1.0 {
                return Err(Error::NoSolution(format!("arcsine family with μ0^2 = {mu_sq}")));
            }
            let mu = mu_sq.sqrt();
            let y = b * sigma / mu;
            // a point outside the sine range is off the curve by at least the overshoot
            let overshoot = (y.abs() - 1.0).max(0.0) * mu / b;
            let base = y.clamp(-1.0, 1.0).asin();
            let dir = branch.value();
            let mut best = f64::INFINITY;
            for k in -1..=1 {
                for theta in [base, PI - base] {
                    let theta = theta + 2.0 * PI * k as f64;
                    let r = (tau / mu - (dir * theta / b + c0).sin()).abs();
                    best = best.min(r);
                }
            }
            Ok(best + overshoot)
        }
        FamilySpec::Hyperbolic { a0, b, d0, branch, radicand } => {
            if b == 1.0 || d0 <= 0.0 || a0 == 0.0 {
                return Err(Error::BadParameter("invalid hyperbolic family parameters".into()));
            }
            let mu = (a0 / (b * b - 1.0)).abs().sqrt();
            let dir = branch.value();
            let shift = (dir * b - 1.0) * mu.ln() - d0.ln();
            let x = tau / mu;
            if radicand == Sign::Plus {
                let overshoot = (1.0 - x).max(0.0) * mu;
                let t = x.max(1.0).acosh();
                let best = [t, -t]
                    .iter()
                    .map(|t| (b * sigma / mu - (dir * b * t + shift).cosh()).abs())
                    .fold(f64::INFINITY, f64::min);
                Ok(best + overshoot)
            } else {
                let t = x.asinh();
                Ok((b * sigma / mu - (dir * b * t + shift).sinh()).abs())
            }
        }
        FamilySpec::Power { b0, b, branch } => {
            if !(tau > 0.0) {
                return Err(Error::DomainViolation {
                    u,
                    what: format!("power family needs a positive base, got {tau}"),
                });
            }
            Ok((sigma - b0 * tau.powf(branch.value() * b)).abs())
        }
        FamilySpec::Explicit(_) => {
            Err(Error::BadParameter("membership is defined for the implicit families only".into()))
        }
    }
}

/// Maximum membership residual over 201 uniform samples of the profile's
/// domain, endpoints included.
pub fn closed_form_membership(kind: SurfaceKind, profile: &ProfileCurve, family: &FamilySpec) -> Result<f64> {
    let (a, b) = profile.domain();
    let n = 200;
    let mut worst: f64 = 0.0;
    for i in 0..=n {
        let u = if i == n { b } else { a + (b - a) * i as f64 / n as f64 };
        let j = profile.eval_jet(u)?;
        worst = worst.max(membership_residual(kind, &j, family, u)?);
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub zmc: f64,
    pub codazzi: f64,
    pub first_integral_spread: f64,
    pub oracle: f64,
    pub frame: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { zmc: 1e-8, codazzi: 1e-6, first_integral_spread: 1e-8, oracle: 1e-6, frame: 1e-9 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    /// samples per regular subinterval
    pub samples: usize,
    /// relative distance of analytic samples from subinterval endpoints
    pub margin: f64,
    /// relative distance used for finite-difference samples, which need
    /// room for their stencils and lose accuracy near the singular locus
    pub fd_margin: f64,
    /// random oracle probes per subinterval
    pub oracle_samples: usize,
    pub scan_points: usize,
    pub codazzi_h: f64,
    pub seed: u64,
    pub thresholds: Thresholds,
    pub oracle: OracleConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            samples: 200,
            margin: 1e-2,
            fd_margin: 0.1,
            oracle_samples: 20,
            scan_points: 2000,
            codazzi_h: 1e-4,
            seed: 0,
            thresholds: Thresholds::default(),
            oracle: OracleConfig::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubintervalReport {
    pub start: f64,
    pub end: f64,
    pub eps: Sign,
    pub eps_star: Sign,
    pub label: CausalLabel,
    pub samples: usize,
    pub max_mean_curvature: f64,
    pub first_integral_mean: Option<f64>,
    pub first_integral_spread: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub surface_id: String,
    pub kind: SurfaceKind,
    pub b: f64,
    pub domain: (f64, f64),
    pub samples: usize,
    pub planar: bool,
    pub max_zmc_residual: f64,
    pub max_mean_curvature: f64,
    pub max_codazzi_residual_1: f64,
    pub max_codazzi_residual_2: f64,
    /// mean over the longest subinterval (the value flips sign with ε)
    pub first_integral_mean: Option<f64>,
    /// largest spread over any single subinterval
    pub first_integral_spread: Option<f64>,
    pub max_oracle_mean_curvature: f64,
    pub max_oracle_deviation: f64,
    pub max_structural_zero: f64,
    pub max_frame_error: f64,
    pub causal: Vec<SubintervalReport>,
    pub thresholds: Thresholds,
    pub failures: Vec<String>,
    pub verdict: Verdict,
}

/// Relative deviation `|o - a| / max(1, |a|)`.
pub fn relative_deviation(oracle: f64, analytic: f64) -> f64 {
    (oracle - analytic).abs() / analytic.abs().max(1.0)
}

/// Samples every regular subinterval of the profile domain and checks ZMC,
/// the first integral, the Codazzi identities, the frame and the oracle.
pub fn verify(surface_id: &str, surface: &SurfaceFamily, cfg: &VerifyConfig) -> Result<VerificationReport> {
    if cfg.samples < 2 {
        return Err(Error::BadParameter("need at least two samples per subinterval".into()));
    }
    if !(cfg.margin >= 0.0 && cfg.margin < 0.5 && cfg.fd_margin >= 0.0 && cfg.fd_margin < 0.5) {
        return Err(Error::BadParameter("margins must lie in [0, 0.5)".into()));
    }
    let domain = surface.profile.domain();
    let pieces: Vec<RegularPiece> =
        regularity_scan(surface, domain, cfg.scan_points).into_iter().filter(|p| p.len() > 1e-6).collect();
    if pieces.is_empty() {
        return Err(Error::BadParameter(format!("no regular subinterval in ({}, {})", domain.0, domain.1)));
    }

    let t = cfg.thresholds;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut report = VerificationReport {
        surface_id: surface_id.to_string(),
        kind: surface.kind,
        b: surface.b,
        domain,
        samples: 0,
        planar: surface.is_planar(),
        max_zmc_residual: 0.0,
        max_mean_curvature: 0.0,
        max_codazzi_residual_1: 0.0,
        max_codazzi_residual_2: 0.0,
        first_integral_mean: None,
        first_integral_spread: None,
        max_oracle_mean_curvature: 0.0,
        max_oracle_deviation: 0.0,
        max_structural_zero: 0.0,
        max_frame_error: 0.0,
        causal: Vec::new(),
        thresholds: t,
        failures: Vec::new(),
        verdict: Verdict::Pass,
    };
    let with_f = surface.b != 1.0;

    for piece in &pieces {
        let label = classify_causal(surface, piece.start, piece.end)?;
        let mut max_h: f64 = 0.0;
        let mut f_values = Vec::new();
        for u in piece.samples(cfg.samples, cfg.margin) {
            max_h = max_h.max(surface.mean_curvature_coefficient(u)?.abs());
            report.max_zmc_residual = report.max_zmc_residual.max(zmc_residual(surface, u)?.abs());
            for v in [0.0, 0.7] {
                let frame = surface.eval_frame(u, v)?;
                report.max_frame_error = report.max_frame_error.max(frame.orthonormality_error());
            }
            if with_f {
                f_values.push(normalized_first_integral(surface, u)?);
            }
        }
        for u in piece.samples(cfg.samples, cfg.fd_margin) {
            let (r1, r2) = codazzi_residuals(surface, u, cfg.codazzi_h)?;
            report.max_codazzi_residual_1 = report.max_codazzi_residual_1.max(r1.abs());
            report.max_codazzi_residual_2 = report.max_codazzi_residual_2.max(r2.abs());
        }
        let (lo, hi) = (piece.start + cfg.fd_margin * piece.len(), piece.end - cfg.fd_margin * piece.len());
        for _ in 0..cfg.oracle_samples {
            let u = rng.gen_range(lo..=hi);
            let v = if cfg.oracle.probe_v.is_empty() {
                0.0
            } else {
                cfg.oracle.probe_v[rng.gen_range(0..cfg.oracle.probe_v.len())]
            };
            let o = oracle_sample(surface, u, v, &cfg.oracle)?;
            let d = surface.fundamental_data(u)?;
            report.max_oracle_mean_curvature = report.max_oracle_mean_curvature.max(oracle_mean_curvature_size(&o));
            let pairs = [
                (o.sff.h311, d.h311),
                (o.sff.h322, d.h322),
                (o.sff.h412, d.h412),
                (o.connection.w12e1, d.w12e1),
                (o.connection.w34e1, d.w34e1),
            ];
            for (x, y) in pairs {
                report.max_oracle_deviation = report.max_oracle_deviation.max(relative_deviation(x, y));
            }
            for z in [o.sff.h312, o.sff.h411, o.sff.h422, o.connection.w12e2, o.connection.w34e2] {
                report.max_structural_zero = report.max_structural_zero.max(z.abs());
            }
        }
        report.max_mean_curvature = report.max_mean_curvature.max(max_h);
        report.samples += cfg.samples;
        let (mean, spread) = if f_values.is_empty() {
            (None, None)
        } else {
            let mean = f_values.iter().sum::<f64>() / f_values.len() as f64;
            let (lo, hi) = f_values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
            (Some(mean), Some(hi - lo))
        };
        report.causal.push(SubintervalReport {
            start: piece.start,
            end: piece.end,
            eps: piece.eps,
            eps_star: piece.eps_star,
            label,
            samples: cfg.samples,
            max_mean_curvature: max_h,
            first_integral_mean: mean,
            first_integral_spread: spread,
        });
    }

    if with_f {
        let longest = report
            .causal
            .iter()
            .max_by(|a, b| (a.end - a.start).total_cmp(&(b.end - b.start)))
            .expect("at least one subinterval");
        report.first_integral_mean = longest.first_integral_mean;
        report.first_integral_spread = report.causal.iter().filter_map(|c| c.first_integral_spread).reduce(f64::max);
    }

    let mut check = |name: &str, value: f64, limit: f64| {
        if !(value < limit) {
            report.failures.push(format!("{name} = {value:e} exceeds {limit:e}"));
        }
    };
    check("max mean-curvature coefficient", report.max_mean_curvature, t.zmc);
    check("max Codazzi residual 1", report.max_codazzi_residual_1, t.codazzi);
    check("max Codazzi residual 2", report.max_codazzi_residual_2, t.codazzi);
    if let Some(spread) = report.first_integral_spread {
        check("first-integral spread", spread, t.first_integral_spread);
    }
    check("max oracle mean curvature", report.max_oracle_mean_curvature, t.oracle);
    check("max oracle deviation", report.max_oracle_deviation, t.oracle);
    check("max oracle structural zero", report.max_structural_zero, t.oracle);
    check("max frame orthonormality error", report.max_frame_error, t.frame);
    if !report.failures.is_empty() {
        report.verdict = Verdict::Fail;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{make_profile, ExplicitCurve};
    use approx::assert_abs_diff_eq;

    fn surf(kind: SurfaceKind, b: f64, c: ExplicitCurve) -> SurfaceFamily {
        SurfaceFamily::new(kind, b, ProfileCurve::explicit(c).unwrap()).unwrap()
    }

    #[test]
    fn residual_examples() {
        let circle =
            make_profile(SurfaceKind::M1, &FamilySpec::Quadratic { lambda0: 1.0, mu0: 2.0, branch: Sign::Plus })
                .unwrap();
        let s = SurfaceFamily::new(SurfaceKind::M1, 1.0, circle).unwrap();
        assert!(zmc_residual(&s, 0.2).unwrap().abs() < 1e-10);
        let s = surf(SurfaceKind::M1, 2.0, ExplicitCurve::SquareFirst);
        assert!(zmc_residual(&s, 0.7).unwrap().abs() < 1e-10);
        let s = surf(SurfaceKind::M1, 2.0, ExplicitCurve::SinCos);
        assert!(zmc_residual(&s, 0.3).unwrap().abs() > 1e-3);
    }

    #[test]
    fn residual_is_minus_two_a_cubed_times_coefficient() {
        let s = surf(SurfaceKind::M2, 2.0, ExplicitCurve::SinCos);
        for u in [0.1, 0.3] {
            let d = s.fundamental_data(u).unwrap();
            let r = zmc_residual(&s, u).unwrap();
            assert_abs_diff_eq!(r, -2.0 * d.a.powi(3) * d.mean_curvature_coefficient(), epsilon = 1e-12);
        }
    }

    #[test]
    fn first_integral_examples() {
        let s = surf(SurfaceKind::M1, 0.5, ExplicitCurve::DoubleAngleSine);
        for u in [0.2, 0.5, 0.7] {
            assert_abs_diff_eq!(normalized_first_integral(&s, u).unwrap(), 0.75, epsilon = 1e-9);
        }
        let s = surf(SurfaceKind::M1, 2.0, ExplicitCurve::HalfCoshDouble);
        for u in [0.3, 0.8] {
            assert_abs_diff_eq!(normalized_first_integral(&s, u).unwrap(), -3.0, epsilon = 1e-9);
        }
        let s = surf(SurfaceKind::M2, 2.0, ExplicitCurve::CoshShifted);
        assert_abs_diff_eq!(normalized_first_integral(&s, 0.5).unwrap(), 3.0, epsilon = 1e-9);
        let s = surf(SurfaceKind::M1, 1.0, ExplicitCurve::SinCos);
        assert!(matches!(normalized_first_integral(&s, 0.1), Err(Error::BadParameter(_))));
    }

    #[test]
    fn codazzi_examples() {
        let cases = [
            (surf(SurfaceKind::M1, 2.0, ExplicitCurve::SinCos), 0.3),
            (surf(SurfaceKind::M1, 1.0, ExplicitCurve::SinCos), 0.15),
            (surf(SurfaceKind::M2, 2.0, ExplicitCurve::CoshShifted), 0.5),
        ];
        for (s, u) in cases {
            let (r1, r2) = codazzi_residuals(&s, u, 1e-4).unwrap();
            assert!(r1.abs() < 1e-6 && r2.abs() < 1e-6, "{r1} {r2}");
        }
    }

    #[test]
    fn codazzi_step_across_singularity() {
        let s = surf(SurfaceKind::M1, 1.0, ExplicitCurve::SinCos);
        let u = std::f64::consts::FRAC_PI_4 - 0.01;
        assert!(matches!(codazzi_residuals(&s, u, 0.05), Err(Error::StepTooLarge { .. })));
    }

    #[test]
    fn causal_examples() {
        let s = surf(SurfaceKind::M1, 0.5, ExplicitCurve::DoubleAngleSine);
        assert_eq!(
            classify_causal(&s, 0.0, std::f64::consts::FRAC_PI_4).unwrap(),
            CausalLabel::SpacelikePositiveDefinite
        );
        let s = surf(SurfaceKind::M1, 2.0, ExplicitCurve::HalfCoshDouble);
        assert_eq!(classify_causal(&s, 0.0, 2.0).unwrap(), CausalLabel::Timelike);
        let s = surf(SurfaceKind::M1, 1.0, ExplicitCurve::CosSin);
        let (a, b) = (std::f64::consts::FRAC_PI_4, 3.0 * std::f64::consts::FRAC_PI_4);
        assert_eq!(classify_causal(&s, a, b).unwrap(), CausalLabel::SpacelikePositiveDefinite);
        let s = surf(SurfaceKind::M1, 1.0, ExplicitCurve::SinCos);
        assert!(matches!(classify_causal(&s, 0.0, 1.5), Err(Error::MixedSigns { .. })));
    }

    #[test]
    fn membership_examples() {
        let arcsine = FamilySpec::Arcsine { a0: 0.75, b: 0.5, c0: 0.0, branch: Sign::Plus, eps_star: Sign::Plus };
        let c = ProfileCurve::explicit(ExplicitCurve::DoubleAngleSine).unwrap().with_domain(0.0, 0.78).unwrap();
        assert!(closed_form_membership(SurfaceKind::M1, &c, &arcsine).unwrap() < 1e-10);

        let hyper = FamilySpec::Hyperbolic { a0: -3.0, b: 2.0, d0: 1.0, branch: Sign::Plus, radicand: Sign::Plus };
        let c = ProfileCurve::explicit(ExplicitCurve::HalfCoshDouble).unwrap().with_domain(0.0, 2.0).unwrap();
        assert!(closed_form_membership(SurfaceKind::M1, &c, &hyper).unwrap() < 1e-10);

        let c = ProfileCurve::explicit(ExplicitCurve::SquareFirst).unwrap().with_domain(0.1, 1.0).unwrap();
        assert!(closed_form_membership(SurfaceKind::M1, &c, &arcsine).unwrap() > 0.1);
        let c = ProfileCurve::explicit(ExplicitCurve::SquareFirst).unwrap().with_domain(0.1, 0.5).unwrap();
        assert!(closed_form_membership(SurfaceKind::M1, &c, &arcsine).unwrap() > 0.1);
    }

    #[test]
    fn verify_separates_zmc_from_non_zmc() {
        let s =
            surf(SurfaceKind::M1, 2.0, ExplicitCurve::HalfCoshDouble).profile.clone().with_domain(0.0, 2.0).unwrap();
        let s = SurfaceFamily::new(SurfaceKind::M1, 2.0, s).unwrap();
        let r = verify("test", &s, &VerifyConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.failures);
        assert_abs_diff_eq!(r.first_integral_mean.unwrap(), -3.0, epsilon = 1e-9);

        let c = ProfileCurve::explicit(ExplicitCurve::SinCos).unwrap().with_domain(-0.5, 0.5).unwrap();
        let s = SurfaceFamily::new(SurfaceKind::M1, 2.0, c).unwrap();
        let r = verify("circle", &s, &VerifyConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.first_integral_spread.unwrap() > 1e-2);
    }
}
