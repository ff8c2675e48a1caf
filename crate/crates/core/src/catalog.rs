//! Named example surfaces with their known classification.

use std::f64::consts::{E, FRAC_PI_4, FRAC_PI_8};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::profiles::{ExplicitCurve, FamilySpec, ProfileCurve};
use crate::pseudo_euclid::Sign;
use crate::surface_geom::{SurfaceFamily, SurfaceKind};
use crate::zmc_analysis::CausalLabel;

/// Names accepted by [`entry`], in gallery order.
pub const NAMES: [&str; 11] = [
    "M1-circle",
    "M1-hyperbola",
    "ex3.4",
    "ex3.5",
    "ex3.6",
    "M2-circle",
    "M2-hyperbola",
    "ex3.10",
    "ex3.11",
    "ex3.12",
    "vranceanu",
];

/// A causal label expected on an interval of the profile parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExpectedLabel {
    pub start: f64,
    pub end: f64,
    pub label: CausalLabel,
}

/// Launch point for reproducing the profile with the ODE integrator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Launch {
    pub u: f64,
    pub direction: Sign,
    /// value of the normalized first integral on the launch subinterval
    pub first_integral: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub kind: SurfaceKind,
    pub b: f64,
    pub curve: ExplicitCurve,
    pub domain: (f64, f64),
    /// implicit family the profile belongs to
    pub family: FamilySpec,
    /// first-integral value on the stated domain (`None` for b = 1)
    pub first_integral: Option<f64>,
    pub labels: Vec<ExpectedLabel>,
    pub launch: Option<Launch>,
}

impl CatalogEntry {
    pub fn surface(&self) -> Result<SurfaceFamily> {
        let profile = ProfileCurve::explicit(self.curve)?.with_domain(self.domain.0, self.domain.1)?;
        SurfaceFamily::new(self.kind, self.b, profile)
    }

    /// Same surface over a different parameter window.
    pub fn surface_on(&self, start: f64, end: f64) -> Result<SurfaceFamily> {
        let profile = ProfileCurve::explicit(self.curve)?.with_domain(start, end)?;
        SurfaceFamily::new(self.kind, self.b, profile)
    }
}

fn label(start: f64, end: f64, label: CausalLabel) -> ExpectedLabel {
    ExpectedLabel { start, end, label }
}

/// Looks up a catalog entry. `vranceanu` takes `(a, c)`, defaulting to `(1, 0)`.
pub fn entry(name: &str, vranceanu: Option<(f64, f64)>) -> Result<CatalogEntry> {
    use CausalLabel::*;
    let quadratic = |lambda0, mu0| FamilySpec::Quadratic { lambda0, mu0, branch: Sign::Plus };
    let power = FamilySpec::Power { b0: 1.0, b: 2.0, branch: Sign::Plus };
    let e = |name: &str, kind, b, curve, domain: (f64, f64), family, first_integral, labels, launch| CatalogEntry {
        name: name.to_string(),
        kind,
        b,
        curve,
        domain,
        family,
        first_integral,
        labels,
        launch,
    };
    let launch = |u, direction, first_integral| Some(Launch { u, direction, first_integral });
    let out = match name {
        "M1-circle" => e(
            name,
            SurfaceKind::M1,
            1.0,
            ExplicitCurve::SinCos,
            (-FRAC_PI_4, FRAC_PI_4),
            quadratic(1.0, 2.0),
            None,
            vec![label(-FRAC_PI_4, FRAC_PI_4, SpacelikePositiveDefinite)],
            None,
        ),
        "M1-hyperbola" => e(
            name,
            SurfaceKind::M1,
            1.0,
            ExplicitCurve::Reciprocal,
            (0.2, 3.0),
            quadratic(-1.0, 4.0),
            None,
            vec![label(0.2, 1.0, Timelike), label(1.0, 3.0, Timelike)],
            None,
        ),
        "ex3.4" => e(
            name,
            SurfaceKind::M1,
            0.5,
            ExplicitCurve::DoubleAngleSine,
            (0.0, FRAC_PI_4),
            FamilySpec::Arcsine { a0: 0.75, b: 0.5, c0: 0.0, branch: Sign::Plus, eps_star: Sign::Plus },
            Some(0.75),
            vec![label(0.0, FRAC_PI_4, SpacelikePositiveDefinite)],
            launch(1.3, Sign::Plus, -0.75),
        ),
        "ex3.5" => e(
            name,
            SurfaceKind::M1,
            2.0,
            ExplicitCurve::HalfCoshDouble,
            (0.0, 2.0),
            FamilySpec::Hyperbolic { a0: -3.0, b: 2.0, d0: 1.0, branch: Sign::Plus, radicand: Sign::Plus },
            Some(-3.0),
            vec![label(0.0, 2.0, Timelike)],
            launch(0.5, Sign::Plus, -3.0),
        ),
        "ex3.6" => e(
            name,
            SurfaceKind::M1,
            2.0,
            ExplicitCurve::SquareFirst,
            (0.0, 2.0),
            power.clone(),
            Some(0.0),
            vec![label(0.0, 0.5, Timelike), label(0.5, 2.0, Timelike)],
            launch(1.0, Sign::Plus, 0.0),
        ),
        "M2-circle" => e(
            name,
            SurfaceKind::M2,
            1.0,
            ExplicitCurve::CosSin,
            (-FRAC_PI_4, FRAC_PI_4),
            quadratic(1.0, 2.0),
            None,
            vec![label(-FRAC_PI_4, FRAC_PI_4, Timelike)],
            None,
        ),
        "M2-hyperbola" => e(
            name,
            SurfaceKind::M2,
            1.0,
            ExplicitCurve::Reciprocal,
            (0.2, 3.0),
            quadratic(-1.0, 4.0),
            None,
            vec![label(0.2, 1.0, SpacelikeNegativeDefinite), label(1.0, 3.0, SpacelikePositiveDefinite)],
            None,
        ),
        "ex3.10" => e(
            name,
            SurfaceKind::M2,
            2.0,
            ExplicitCurve::CoshShifted,
            (0.0, 1.0),
            FamilySpec::Hyperbolic { a0: 3.0, b: 2.0, d0: E, branch: Sign::Plus, radicand: Sign::Plus },
            Some(3.0),
            vec![label(0.0, 1.0 / 3.0, SpacelikeNegativeDefinite), label(1.0 / 3.0, 1.0, SpacelikePositiveDefinite)],
            launch(0.0, Sign::Minus, -3.0),
        ),
        "ex3.11" => e(
            name,
            SurfaceKind::M2,
            2.0,
            ExplicitCurve::SquareSecond,
            (0.0, 2.0),
            power,
            Some(0.0),
            vec![label(0.0, 0.5, SpacelikePositiveDefinite), label(0.5, 2.0, SpacelikeNegativeDefinite)],
            launch(1.0, Sign::Plus, 0.0),
        ),
        "ex3.12" => e(
            name,
            SurfaceKind::M2,
            0.5,
            ExplicitCurve::ShiftedDoubleSine,
            (FRAC_PI_8, FRAC_PI_4),
            FamilySpec::Arcsine { a0: -0.75, b: 0.5, c0: -FRAC_PI_4, branch: Sign::Plus, eps_star: Sign::Minus },
            Some(-0.75),
            vec![label(FRAC_PI_8, FRAC_PI_4, Timelike)],
            launch(1.6, Sign::Plus, -0.75),
        ),
        "vranceanu" => {
            let (a, c) = vranceanu.unwrap_or((1.0, 0.0));
            if !(a.is_finite() && c.is_finite()) || a == 0.0 {
                return Err(Error::BadParameter("vranceanu needs finite a != 0 and finite c".into()));
            }
            e(
                &format!("vranceanu({a},{c})"),
                SurfaceKind::M1,
                1.0,
                ExplicitCurve::Vranceanu { a, c },
                (-1.5, 1.5),
                quadratic((-2.0 * c).exp(), 2.0 * a * a * (-c).exp()),
                None,
                vec![label(-1.5, 1.5, SpacelikePositiveDefinite)],
                None,
            )
        }
        other => {
            return Err(Error::BadParameter(format!(
                "unknown catalog entry {other:?}; expected one of {}",
                NAMES.join(", ")
            )))
        }
    };
    Ok(out)
}

/// All entries with `vranceanu(1, 0)`.
pub fn all() -> Vec<CatalogEntry> {
    NAMES.iter().map(|n| entry(n, None).expect("catalog names are valid")).collect()
}

/// Parses `vranceanu(a,c)` style names; plain names pass through.
pub fn parse_name(name: &str) -> Result<(String, Option<(f64, f64)>)> {
    let Some(rest) = name.strip_prefix("vranceanu") else {
        return Ok((name.to_string(), None));
    };
    if rest.is_empty() {
        return Ok(("vranceanu".into(), None));
    }
    let inner = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::BadParameter(format!("cannot parse {name:?}")))?;
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    let [a, c] = parts.as_slice() else {
        return Err(Error::BadParameter(format!("{name:?} needs two parameters")));
    };
    let parse = |x: &str| x.parse::<f64>().map_err(|_| Error::BadParameter(format!("bad number {x:?}")));
    Ok(("vranceanu".into(), Some((parse(a)?, parse(c)?))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for n in NAMES {
            assert!(entry(n, None).is_ok());
        }
        assert!(entry("ex9.9", None).is_err());
        assert_eq!(parse_name("vranceanu(2, 0.5)").unwrap(), ("vranceanu".into(), Some((2.0, 0.5))));
        assert_eq!(parse_name("ex3.4").unwrap(), ("ex3.4".into(), None));
        assert!(parse_name("vranceanu(1)").is_err());
    }
}
