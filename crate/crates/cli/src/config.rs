//! Run configuration: command-line flags laid over an optional JSON file.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Deserializer, Serialize};
use zmcrot_core::catalog::{self, CatalogEntry};
use zmcrot_core::zmc_analysis::VerifyConfig;
use zmcrot_core::{make_profile, ExplicitCurve, FamilySpec, ProfileCurve, Sign, SurfaceFamily, SurfaceKind};

use crate::error::{CliError, Result};

/// Environment variable holding the seed of the randomized sweeps.
pub const SEED_VAR: &str = "ZMCROT_SEED";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyName {
    Quadratic,
    Arcsine,
    Hyperbolic,
    Power,
    Explicit,
}

/// Closed-form profiles selectable with `--family explicit --curve <name>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveName {
    SinCos,
    CosSin,
    Reciprocal,
    SquareFirst,
    SquareSecond,
    DoubleAngleSine,
    HalfCoshDouble,
    CoshShifted,
    ShiftedDoubleSine,
    Vranceanu,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Obj,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Obj => "obj",
            Format::Json => "json",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coord {
    X1,
    X2,
    X3,
    X4,
}

impl Coord {
    pub fn index(self) -> usize {
        match self {
            Coord::X1 => 0,
            Coord::X2 => 1,
            Coord::X3 => 2,
            Coord::X4 => 3,
        }
    }
}

/// A closed parameter interval `[start, end]` with `start < end`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
}

impl Interval {
    pub fn new(start: f64, end: f64) -> std::result::Result<Interval, String> {
        if !(start.is_finite() && end.is_finite() && start < end) {
            return Err(format!("interval needs finite bounds with start < end, got {start},{end}"));
        }
        Ok(Interval { start, end })
    }
}

impl FromStr for Interval {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Interval, String> {
        let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `a,b`, got {s:?}"))?;
        let num = |x: &str| x.trim().parse::<f64>().map_err(|_| format!("bad number {x:?} in {s:?}"));
        Interval::new(num(a)?, num(b)?)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.start, self.end)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Interval, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Pair([f64; 2]),
        }
        match Raw::deserialize(d)? {
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Pair([a, b]) => Interval::new(a, b).map_err(serde::de::Error::custom),
        }
    }
}

pub fn parse_sign(s: &str) -> std::result::Result<Sign, String> {
    match s.trim() {
        "+" | "+1" | "1" | "plus" => Ok(Sign::Plus),
        "-" | "-1" | "minus" => Ok(Sign::Minus),
        other => Err(format!("expected + or -, got {other:?}")),
    }
}

fn parse_kind(s: &str) -> std::result::Result<SurfaceKind, String> {
    s.parse().map_err(|e: zmcrot_core::Error| e.to_string())
}

fn de_sign<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Sign>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Int(i64),
        Text(String),
    }
    let sign = match Raw::deserialize(d)? {
        Raw::Int(1) => Sign::Plus,
        Raw::Int(-1) => Sign::Minus,
        Raw::Int(other) => return Err(serde::de::Error::custom(format!("sign must be +1 or -1, got {other}"))),
        Raw::Text(s) => parse_sign(&s).map_err(serde::de::Error::custom)?,
    };
    Ok(Some(sign))
}

/// Everything a command can be told. Every field is optional so that a JSON
/// file and the flags can each supply part of it; flags win.
#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    /// Catalog surface: M1-circle, M1-hyperbola, ex3.4, ex3.5, ex3.6,
    /// M2-circle, M2-hyperbola, ex3.10, ex3.11, ex3.12, vranceanu(a,c)
    #[arg(long)]
    pub example: Option<String>,

    #[arg(long, value_parser = parse_kind)]
    pub kind: Option<SurfaceKind>,

    /// Rotation-rate ratio
    #[arg(long)]
    pub b: Option<f64>,

    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,

    /// Profile for `--family explicit`
    #[arg(long, value_enum)]
    pub curve: Option<CurveName>,

    #[arg(long)]
    pub l0: Option<f64>,
    #[arg(long)]
    pub mu0: Option<f64>,
    #[arg(long)]
    pub a0: Option<f64>,
    #[arg(long)]
    pub c0: Option<f64>,
    #[arg(long)]
    pub d0: Option<f64>,
    #[arg(long)]
    pub b0: Option<f64>,

    #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
    #[serde(deserialize_with = "de_sign")]
    pub branch: Option<Sign>,

    #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
    #[serde(deserialize_with = "de_sign")]
    pub radicand: Option<Sign>,

    #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
    #[serde(deserialize_with = "de_sign")]
    pub eps_star: Option<Sign>,

    /// Vranceanu amplitude
    #[arg(long)]
    pub a: Option<f64>,
    /// Vranceanu shift
    #[arg(long)]
    pub c: Option<f64>,

    /// Profile parameter interval `a,b`
    #[arg(long, allow_hyphen_values = true)]
    pub domain: Option<Interval>,

    /// Rotation parameter interval for exports (default 0,2π)
    #[arg(long, allow_hyphen_values = true)]
    pub v_domain: Option<Interval>,

    /// Samples per regular subinterval (verify) or grid nodes per axis (export)
    #[arg(long)]
    pub samples: Option<usize>,

    /// Relative sampling margin from subinterval ends
    #[arg(long)]
    pub margin: Option<f64>,

    /// Integrator tolerance
    #[arg(long)]
    pub tol: Option<f64>,

    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Coordinate dropped by the OBJ projection (default x3)
    #[arg(long, value_enum)]
    pub drop_coord: Option<Coord>,

    /// Start parameter on the profile for `integrate`
    #[arg(long)]
    pub u0: Option<f64>,

    /// Arclength to integrate
    #[arg(long)]
    pub length: Option<f64>,

    #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
    #[serde(deserialize_with = "de_sign")]
    pub direction: Option<Sign>,
}

macro_rules! overlay {
    ($top:ident, $base:ident; $($field:ident),*) => {
        RunConfig { $($field: $top.$field.or($base.$field)),* }
    };
}

/// A surface resolved from the configuration.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub id: String,
    pub surface: SurfaceFamily,
    /// implicit family of the profile, when it has one
    pub family: Option<FamilySpec>,
    pub entry: Option<CatalogEntry>,
}

impl RunConfig {
    /// Reads a JSON configuration file.
    pub fn from_file(path: &Path) -> Result<RunConfig> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// `self` with unset fields taken from `base`.
    pub fn over(self, base: RunConfig) -> RunConfig {
        overlay!(self, base;
            example, kind, b, family, curve, l0, mu0, a0, c0, d0, b0, branch, radicand, eps_star,
            a, c, domain, v_domain, samples, margin, tol, out, format, drop_coord, u0, length, direction)
    }

    /// Flags merged over the file at `path`, if any, then validated.
    pub fn load(flags: RunConfig, path: Option<&Path>) -> Result<RunConfig> {
        let cfg = match path {
            Some(p) => flags.over(RunConfig::from_file(p)?),
            None => flags,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if let Some(n) = self.samples {
            if n < 2 {
                return bad(format!("--samples must be at least 2, got {n}"));
            }
        }
        if let Some(t) = self.tol {
            if !(t.is_finite() && t > 0.0) {
                return bad(format!("--tol must be positive, got {t}"));
            }
        }
        if let Some(m) = self.margin {
            if !(0.0..0.5).contains(&m) {
                return bad(format!("--margin must lie in [0, 0.5), got {m}"));
            }
        }
        if let Some(l) = self.length {
            if !(l.is_finite() && l > 0.0) {
                return bad(format!("--length must be positive, got {l}"));
            }
        }
        if let Some(b) = self.b {
            if !(b.is_finite() && b > 0.0) {
                return bad(format!("--b must be positive, got {b}"));
            }
        }
        if self.example.is_some() && (self.family.is_some() || self.kind.is_some()) {
            return bad("use either --example or --kind/--family, not both".into());
        }
        Ok(())
    }

    pub fn verify_config(&self) -> Result<VerifyConfig> {
        let mut v = VerifyConfig { seed: seed_from_env()?, ..VerifyConfig::default() };
        if let Some(n) = self.samples {
            v.samples = n;
        }
        if let Some(m) = self.margin {
            v.margin = m;
        }
        Ok(v)
    }

    /// Builds the surface described by the configuration.
    pub fn resolve(&self) -> Result<Resolved> {
        if let Some(name) = &self.example {
            return self.resolve_example(name);
        }
        let kind = self.kind.ok_or_else(|| missing("kind", "a surface without --example"))?;
        let family = self.family.ok_or_else(|| missing("family", "a surface without --example"))?;
        let branch = self.branch.unwrap_or(Sign::Plus);
        let (spec, b) = match family {
            FamilyName::Quadratic => {
                let spec = FamilySpec::Quadratic {
                    lambda0: need(self.l0, "l0", "quadratic")?,
                    mu0: need(self.mu0, "mu0", "quadratic")?,
                    branch,
                };
                (spec, self.b.unwrap_or(1.0))
            }
            FamilyName::Arcsine => {
                let b = need(self.b, "b", "arcsine")?;
                let spec = FamilySpec::Arcsine {
                    a0: need(self.a0, "a0", "arcsine")?,
                    b,
                    c0: self.c0.unwrap_or(0.0),
                    branch,
                    eps_star: self.eps_star.unwrap_or(Sign::Plus),
                };
                (spec, b)
            }
            FamilyName::Hyperbolic => {
                let b = need(self.b, "b", "hyperbolic")?;
                let spec = FamilySpec::Hyperbolic {
                    a0: need(self.a0, "a0", "hyperbolic")?,
                    b,
                    d0: need(self.d0, "d0", "hyperbolic")?,
                    branch,
                    radicand: self.radicand.unwrap_or(Sign::Plus),
                };
                (spec, b)
            }
            FamilyName::Power => {
                let b = need(self.b, "b", "power")?;
                (FamilySpec::Power { b0: need(self.b0, "b0", "power")?, b, branch }, b)
            }
            FamilyName::Explicit => {
                let curve = self.curve.ok_or_else(|| missing("curve", "--family explicit"))?;
                let b = need(self.b, "b", "explicit")?;
                (FamilySpec::Explicit(self.explicit_curve(curve)), b)
            }
        };
        let mut profile = make_profile(kind, &spec)?;
        if let Some(d) = self.domain {
            profile = profile.with_domain(d.start, d.end)?;
        }
        let id = format!("{kind} b={b} {}", describe(&spec));
        let surface = SurfaceFamily::new(kind, b, profile)?;
        let family = (!matches!(spec, FamilySpec::Explicit(_))).then_some(spec);
        Ok(Resolved { id, surface, family, entry: None })
    }

    fn resolve_example(&self, name: &str) -> Result<Resolved> {
        let (base, params) = catalog::parse_name(name).map_err(|e| CliError::Config(e.to_string()))?;
        let params = match (params, self.a, self.c) {
            (Some(p), _, _) => Some(p),
            (None, None, None) => None,
            (None, a, c) => Some((a.unwrap_or(1.0), c.unwrap_or(0.0))),
        };
        let entry = catalog::entry(&base, params).map_err(|e| CliError::Config(e.to_string()))?;
        let surface = match self.domain {
            Some(d) => entry.surface_on(d.start, d.end)?,
            None => entry.surface()?,
        };
        let id = match (base.as_str(), params) {
            ("vranceanu", Some((a, c))) => format!("vranceanu({a},{c})"),
            _ => entry.name.clone(),
        };
        Ok(Resolved { id, surface, family: Some(entry.family.clone()), entry: Some(entry) })
    }

    fn explicit_curve(&self, name: CurveName) -> ExplicitCurve {
        match name {
            CurveName::SinCos => ExplicitCurve::SinCos,
            CurveName::CosSin => ExplicitCurve::CosSin,
            CurveName::Reciprocal => ExplicitCurve::Reciprocal,
            CurveName::SquareFirst => ExplicitCurve::SquareFirst,
            CurveName::SquareSecond => ExplicitCurve::SquareSecond,
            CurveName::DoubleAngleSine => ExplicitCurve::DoubleAngleSine,
            CurveName::HalfCoshDouble => ExplicitCurve::HalfCoshDouble,
            CurveName::CoshShifted => ExplicitCurve::CoshShifted,
            CurveName::ShiftedDoubleSine => ExplicitCurve::ShiftedDoubleSine,
            CurveName::Vranceanu => ExplicitCurve::Vranceanu { a: self.a.unwrap_or(1.0), c: self.c.unwrap_or(0.0) },
        }
    }
}

/// Profile of a resolved surface as an unrestricted closed form, used to
/// place integrator launches anywhere on the curve.
pub fn launch_profile(resolved: &Resolved) -> Result<ProfileCurve> {
    match &resolved.entry {
        Some(e) => Ok(ProfileCurve::explicit(e.curve)?),
        None => Ok(resolved.surface.profile.clone()),
    }
}

pub fn seed_from_env() -> Result<u64> {
    match std::env::var(SEED_VAR) {
        Ok(s) => {
            s.trim().parse().map_err(|_| CliError::Config(format!("{SEED_VAR} must be an unsigned integer, got {s:?}")))
        }
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(e) => Err(CliError::Config(format!("{SEED_VAR}: {e}"))),
    }
}

fn missing(flag: &str, context: &str) -> CliError {
    CliError::Config(format!("--{flag} is required for {context}"))
}

fn need(value: Option<f64>, flag: &str, family: &str) -> Result<f64> {
    value.ok_or_else(|| missing(flag, &format!("the {family} family")))
}

fn describe(spec: &FamilySpec) -> String {
    match spec {
        FamilySpec::Quadratic { lambda0, mu0, branch } => {
            format!("quadratic(l0={lambda0}, mu0={mu0}, branch={branch})")
        }
        FamilySpec::Arcsine { a0, c0, branch, eps_star, .. } => {
            format!("arcsine(a0={a0}, c0={c0}, branch={branch}, eps*={eps_star})")
        }
        FamilySpec::Hyperbolic { a0, d0, branch, radicand, .. } => {
            format!("hyperbolic(a0={a0}, d0={d0}, branch={branch}, radicand={radicand})")
        }
        FamilySpec::Power { b0, branch, .. } => format!("power(b0={b0}, branch={branch})"),
        FamilySpec::Explicit(c) => format!("explicit({c:?})"),
    }
}
