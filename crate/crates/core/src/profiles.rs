//! Profile curves of the rotational surfaces.
//!
//! A profile is a planar curve `u -> (p(u), s(u))`. For `M1` the pair is
//! `(y, w)` and for `M2` it is `(x, z)`. Curves come from the closed-form
//! zero-mean-curvature families, from a set of named explicit curves, or from
//! numerical samples (integrator output, arclength reparametrizations).
//!
//! The families are written in terms of two roles: the *scaled* component
//! (the one multiplied by `b` in the rotation norm, `y` for `M1` and `z` for
//! `M2`) and the *unscaled* component (`w` for `M1`, `x` for `M2`).

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pseudo_euclid::Sign;
use crate::surface_geom::{SurfaceFamily, SurfaceKind};

/// Absolute band below which `speed^2` or `q^2` counts as zero.
pub const REGULARITY_TOLERANCE: f64 = 1e-8;

/// Precision to which regular subinterval endpoints are bisected.
const ENDPOINT_PRECISION: f64 = 1e-10;

/// Position, velocity and acceleration of a profile at one parameter value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileJet {
    pub p: f64,
    pub s: f64,
    pub dp: f64,
    pub ds: f64,
    pub ddp: f64,
    pub dds: f64,
}

impl ProfileJet {
    /// `p'^2 - s'^2`, the `g_uu` component of the induced metric.
    pub fn speed_sq(&self) -> f64 {
        self.dp * self.dp - self.ds * self.ds
    }

    fn is_finite(&self) -> bool {
        [self.p, self.s, self.dp, self.ds, self.ddp, self.dds].iter().all(|x| x.is_finite())
    }
}

/// Family descriptor accepted by [`make_profile`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilySpec {
    /// `(σ + τ)^2 + λ0 (τ - σ)^2 = μ0`, the b = 1 conics.
    Quadratic {
        lambda0: f64,
        mu0: f64,
        branch: Sign,
    },
    /// `asin(τ/μ0) = ±(1/b) asin(bσ/μ0) + c0` with `μ0^2 = ε* a0 / (1 - b^2)`.
    Arcsine {
        a0: f64,
        b: f64,
        c0: f64,
        branch: Sign,
        eps_star: Sign,
    },
    /// `(τ + √(τ^2 ∓ μ0^2))^{±b} = d0 (bσ + √(b^2σ^2 ∓ μ0^2))`.
    Hyperbolic {
        a0: f64,
        b: f64,
        d0: f64,
        branch: Sign,
        radicand: Sign,
    },
    /// `σ = b0 τ^{±b}`, the a0 = 0 member of the hyperbolic families.
    Power {
        b0: f64,
        b: f64,
        branch: Sign,
    },
    Explicit(ExplicitCurve),
}

/// Named closed-form curves, given directly as `(p(u), s(u))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "curve", rename_all = "kebab-case")]
pub enum ExplicitCurve {
    /// `(sin u, cos u)`
    SinCos,
    /// `(cos u, sin u)`
    CosSin,
    /// `(u, 1/u)`
    Reciprocal,
    /// `(c u, d u)`
    Line { c: f64, d: f64 },
    /// `(u^2, u)`
    SquareFirst,
    /// `(u, u^2)`
    SquareSecond,
    /// `(2 sin u, sin 2u)`
    DoubleAngleSine,
    /// `(cosh(2u)/2, cosh u)`
    HalfCoshDouble,
    /// `(cosh u, cosh(2u - 1)/2)`
    CoshShifted,
    /// `(sin(2u - π/4), 2 sin u)`
    ShiftedDoubleSine,
    /// `(f sinh u, f cosh u)` with `f = a cosh(2u + c)^{-1/2}`
    Vranceanu { a: f64, c: f64 },
}

/// Scalar function value with first and second derivative.
#[derive(Clone, Copy, Debug)]
struct J2 {
    v: f64,
    d: f64,
    dd: f64,
}

impl J2 {
    fn new(v: f64, d: f64, dd: f64) -> J2 {
        J2 { v, d, dd }
    }

    fn times(self, o: J2) -> J2 {
        J2::new(self.v * o.v, self.d * o.v + self.v * o.d, self.dd * o.v + 2.0 * self.d * o.d + self.v * o.dd)
    }

    fn scale(self, k: f64) -> J2 {
        J2::new(self.v * k, self.d * k, self.dd * k)
    }

    fn add(self, o: J2) -> J2 {
        J2::new(self.v + o.v, self.d + o.d, self.dd + o.dd)
    }

    /// `sin(k u + c)`
    fn sin(k: f64, c: f64, u: f64) -> J2 {
        let a = k * u + c;
        J2::new(a.sin(), k * a.cos(), -k * k * a.sin())
    }

    fn cos(k: f64, c: f64, u: f64) -> J2 {
        let a = k * u + c;
        J2::new(a.cos(), -k * a.sin(), -k * k * a.cos())
    }

    fn sinh(k: f64, c: f64, u: f64) -> J2 {
        let a = k * u + c;
        J2::new(a.sinh(), k * a.cosh(), k * k * a.sinh())
    }

    fn cosh(k: f64, c: f64, u: f64) -> J2 {
        let a = k * u + c;
        J2::new(a.cosh(), k * a.sinh(), k * k * a.cosh())
    }

    fn ident(u: f64) -> J2 {
        J2::new(u, 1.0, 0.0)
    }

    fn powf(u: f64, e: f64) -> J2 {
        J2::new(u.powf(e), e * u.powf(e - 1.0), e * (e - 1.0) * u.powf(e - 2.0))
    }
}

fn jet_from(p: J2, s: J2) -> ProfileJet {
    ProfileJet { p: p.v, s: s.v, dp: p.d, ds: s.d, ddp: p.dd, dds: s.dd }
}

/// Places the scaled/unscaled roles into the `(p, s)` slots of a kind.
fn jet_from_roles(kind: SurfaceKind, scaled: J2, unscaled: J2) -> ProfileJet {
    match kind {
        SurfaceKind::M1 => jet_from(scaled, unscaled),
        SurfaceKind::M2 => jet_from(unscaled, scaled),
    }
}

/// `(scaled, unscaled)` values of a jet's position for the given kind.
pub fn roles(kind: SurfaceKind, jet: &ProfileJet) -> (f64, f64) {
    match kind {
        SurfaceKind::M1 => (jet.p, jet.s),
        SurfaceKind::M2 => (jet.s, jet.p),
    }
}

#[derive(Clone, Debug)]
enum ClosedForm {
    Ellipse { u_amp: f64, v_amp: f64 },
    Hyperbola { u_amp: f64, v_amp: f64, swapped: bool },
    Arcsine { mu: f64, b: f64, c0: f64, dir: f64 },
    Hyperbolic { mu: f64, b: f64, shift: f64, dir: f64, positive: bool },
    Power { b0: f64, exponent: f64 },
}

#[derive(Clone, Debug)]
enum Repr {
    Family { kind: SurfaceKind, spec: FamilySpec, form: ClosedForm, branch: f64 },
    Explicit(ExplicitCurve),
    Sampled(SampledCurve),
}

/// Sampled profile: nodes with exact jets, interpolated by quintic Hermite
/// polynomials in each of `p` and `s`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledCurve {
    pub nodes: Vec<f64>,
    pub jets: Vec<ProfileJet>,
}

impl SampledCurve {
    pub fn new(nodes: Vec<f64>, jets: Vec<ProfileJet>) -> Result<SampledCurve> {
        if nodes.len() < 2 || nodes.len() != jets.len() {
            return Err(Error::BadParameter("a sampled curve needs at least two nodes with one jet each".into()));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::BadParameter("sampled curve nodes must be strictly increasing".into()));
        }
        if jets.iter().any(|j| !j.is_finite()) || nodes.iter().any(|n| !n.is_finite()) {
            return Err(Error::BadParameter("sampled curve contains non-finite values".into()));
        }
        Ok(SampledCurve { nodes, jets })
    }

    fn eval(&self, u: f64) -> ProfileJet {
        let n = self.nodes.len();
        let i = match self.nodes.partition_point(|&x| x <= u) {
            0 => 0,
            k if k >= n => n - 2,
            k => k - 1,
        };
        let (u0, u1) = (self.nodes[i], self.nodes[i + 1]);
        let (a, b) = (&self.jets[i], &self.jets[i + 1]);
        let h = u1 - u0;
        let t = (u - u0) / h;
        let p = quintic_hermite(h, t, [a.p, a.dp, a.ddp], [b.p, b.dp, b.ddp]);
        let s = quintic_hermite(h, t, [a.s, a.ds, a.dds], [b.s, b.ds, b.dds]);
        jet_from(p, s)
    }
}

/// Quintic Hermite interpolant on one interval of width `h`, evaluated at the
/// local coordinate `t ∈ [0, 1]`; returns value and derivatives in `u`.
fn quintic_hermite(h: f64, t: f64, f0: [f64; 3], f1: [f64; 3]) -> J2 {
    let d = f1[0] - f0[0];
    let a0 = f0[0];
    let a1 = h * f0[1];
    let a2 = 0.5 * h * h * f0[2];
    let a3 = 10.0 * d - h * (6.0 * f0[1] + 4.0 * f1[1]) - 0.5 * h * h * (3.0 * f0[2] - f1[2]);
    let a4 = -15.0 * d + h * (8.0 * f0[1] + 7.0 * f1[1]) + 0.5 * h * h * (3.0 * f0[2] - 2.0 * f1[2]);
    let a5 = 6.0 * d - 3.0 * h * (f0[1] + f1[1]) - 0.5 * h * h * (f0[2] - f1[2]);
    let v = a0 + t * (a1 + t * (a2 + t * (a3 + t * (a4 + t * a5))));
    let dv = a1 + t * (2.0 * a2 + t * (3.0 * a3 + t * (4.0 * a4 + t * 5.0 * a5)));
    let ddv = 2.0 * a2 + t * (6.0 * a3 + t * (12.0 * a4 + t * 20.0 * a5));
    J2::new(v, dv / h, ddv / (h * h))
}

/// An immutable profile curve on a closed parameter interval.
#[derive(Clone, Debug)]
pub struct ProfileCurve {
    repr: Repr,
    domain: (f64, f64),
}

/// Builds a closed-form profile for the given surface kind.
pub fn make_profile(kind: SurfaceKind, spec: &FamilySpec) -> Result<ProfileCurve> {
    let (form, branch, domain) = match *spec {
        FamilySpec::Explicit(curve) => return explicit_profile(curve),
        FamilySpec::Quadratic { lambda0, mu0, branch } => {
            finite(&[lambda0, mu0])?;
            if lambda0 == 0.0 {
                return Err(Error::BadParameter("quadratic family needs lambda0 != 0".into()));
            }
            if mu0 == 0.0 {
                return Err(Error::BadParameter("quadratic family with mu0 = 0 degenerates to lines".into()));
            }
            if lambda0 > 0.0 {
                if mu0 < 0.0 {
                    return Err(Error::NoSolution(format!("(σ+τ)^2 + {lambda0}(τ-σ)^2 = {mu0} has no real points")));
                }
                let form = ClosedForm::Ellipse { u_amp: mu0.sqrt(), v_amp: (mu0 / lambda0).sqrt() };
                (form, branch.value(), (-PI, PI))
            } else {
                let form = ClosedForm::Hyperbola {
                    u_amp: mu0.abs().sqrt(),
                    v_amp: (mu0.abs() / lambda0.abs()).sqrt(),
                    swapped: mu0 < 0.0,
                };
                (form, branch.value(), (-2.0, 2.0))
            }
        }
        FamilySpec::Arcsine { a0, b, c0, branch, eps_star } => {
            finite(&[a0, b, c0])?;
            check_rate(b)?;
            if a0 == 0.0 {
                return Err(Error::BadParameter("arcsine family needs a0 != 0".into()));
            }
            let mu_sq = eps_star.value() * a0 / (1.0 - b * b);
            if !(mu_sq > 0.0) {
                return Err(Error::NoSolution(format!(
                    "ε* a0 / (1 - b^2) = {mu_sq} must be positive for the arcsine family"
                )));
            }
            let dir = branch.value();
            // principal range: |θ| < π/2 and |dir θ / b + c0| < π/2
            let (l, r) = (dir * b * (-FRAC_PI_2 - c0), dir * b * (FRAC_PI_2 - c0));
            let lo = l.min(r).max(-FRAC_PI_2);
            let hi = l.max(r).min(FRAC_PI_2);
            let domain = if lo < hi { (lo, hi) } else { (-FRAC_PI_2, FRAC_PI_2) };
            let form = ClosedForm::Arcsine { mu: mu_sq.sqrt(), b, c0, dir };
            (form, 1.0, domain)
        }
        FamilySpec::Hyperbolic { a0, b, d0, branch, radicand } => {
            finite(&[a0, b, d0])?;
            check_rate(b)?;
            if a0 == 0.0 {
                return Err(Error::BadParameter("a0 = 0 is the power family; use FamilySpec::Power".into()));
            }
            if d0 == 0.0 {
                return Err(Error::BadParameter("hyperbolic family needs d0 != 0".into()));
            }
            if d0 < 0.0 {
                return Err(Error::BadParameter("hyperbolic family with principal square roots needs d0 > 0".into()));
            }
            let mu = (a0 / (b * b - 1.0)).abs().sqrt();
            let dir = branch.value();
            let shift = (dir * b - 1.0) * mu.ln() - d0.ln();
            let positive = radicand == Sign::Plus;
            let domain = if positive {
                // principal roots need t > 0 and dir b t + shift > 0
                let zero = -shift / (dir * b);
                if dir > 0.0 {
                    let lo = zero.max(0.0);
                    (lo, lo + 2.0)
                } else if zero > 0.0 {
                    (0.0, zero)
                } else {
                    (0.0, 2.0)
                }
            } else {
                (-2.0, 2.0)
            };
            let form = ClosedForm::Hyperbolic { mu, b, shift, dir, positive };
            (form, 1.0, domain)
        }
        FamilySpec::Power { b0, b, branch } => {
            finite(&[b0, b])?;
            check_rate(b)?;
            if b0 == 0.0 {
                return Err(Error::BadParameter("power family needs b0 != 0".into()));
            }
            let form = ClosedForm::Power { b0, exponent: branch.value() * b };
            // u = 0 is a singular point of u^(±b)
            (form, 1.0, (0.1, 2.0))
        }
    };
    Ok(ProfileCurve { repr: Repr::Family { kind, spec: spec.clone(), form, branch }, domain })
}

fn finite(values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::BadParameter("family parameters must be finite".into()))
    }
}

fn check_rate(b: f64) -> Result<()> {
    if !(b > 0.0) {
        return Err(Error::BadParameter(format!("rotation rate b = {b} must be positive")));
    }
    if b == 1.0 {
        return Err(Error::BadParameter("this family requires b != 1 (use the quadratic family for b = 1)".into()));
    }
    Ok(())
}

fn explicit_profile(curve: ExplicitCurve) -> Result<ProfileCurve> {
    let domain = match curve {
        ExplicitCurve::SinCos
        | ExplicitCurve::CosSin
        | ExplicitCurve::DoubleAngleSine
        | ExplicitCurve::ShiftedDoubleSine => (-PI, PI),
        ExplicitCurve::Reciprocal => (0.05, 20.0),
        ExplicitCurve::Line { c, d } => {
            finite(&[c, d])?;
            (-10.0, 10.0)
        }
        ExplicitCurve::SquareFirst | ExplicitCurve::SquareSecond => (0.0, 2.0),
        ExplicitCurve::HalfCoshDouble | ExplicitCurve::CoshShifted => (-3.0, 3.0),
        ExplicitCurve::Vranceanu { a, c } => {
            finite(&[a, c])?;
            if a == 0.0 {
                return Err(Error::BadParameter("Vranceanu profile needs a != 0".into()));
            }
            (-3.0, 3.0)
        }
    };
    Ok(ProfileCurve { repr: Repr::Explicit(curve), domain })
}

fn explicit_jet(curve: ExplicitCurve, u: f64) -> ProfileJet {
    match curve {
        ExplicitCurve::SinCos => jet_from(J2::sin(1.0, 0.0, u), J2::cos(1.0, 0.0, u)),
        ExplicitCurve::CosSin => jet_from(J2::cos(1.0, 0.0, u), J2::sin(1.0, 0.0, u)),
        ExplicitCurve::Reciprocal => jet_from(J2::ident(u), J2::new(1.0 / u, -1.0 / (u * u), 2.0 / (u * u * u))),
        ExplicitCurve::Line { c, d } => jet_from(J2::new(c * u, c, 0.0), J2::new(d * u, d, 0.0)),
        ExplicitCurve::SquareFirst => jet_from(J2::new(u * u, 2.0 * u, 2.0), J2::ident(u)),
        ExplicitCurve::SquareSecond => jet_from(J2::ident(u), J2::new(u * u, 2.0 * u, 2.0)),
        ExplicitCurve::DoubleAngleSine => jet_from(J2::sin(1.0, 0.0, u).scale(2.0), J2::sin(2.0, 0.0, u)),
        ExplicitCurve::HalfCoshDouble => jet_from(J2::cosh(2.0, 0.0, u).scale(0.5), J2::cosh(1.0, 0.0, u)),
        ExplicitCurve::CoshShifted => jet_from(J2::cosh(1.0, 0.0, u), J2::cosh(2.0, -1.0, u).scale(0.5)),
        ExplicitCurve::ShiftedDoubleSine => jet_from(J2::sin(2.0, -FRAC_PI_4, u), J2::sin(1.0, 0.0, u).scale(2.0)),
        ExplicitCurve::Vranceanu { a, c } => {
            let phi = 2.0 * u + c;
            let (ch, sh) = (phi.cosh(), phi.sinh());
            let f = J2::new(
                a * ch.powf(-0.5),
                -a * sh * ch.powf(-1.5),
                -a * (2.0 * ch.powf(-0.5) - 3.0 * sh * sh * ch.powf(-2.5)),
            );
            jet_from(f.times(J2::sinh(1.0, 0.0, u)), f.times(J2::cosh(1.0, 0.0, u)))
        }
    }
}

fn family_jet(kind: SurfaceKind, form: &ClosedForm, branch: f64, u: f64) -> ProfileJet {
    match *form {
        ClosedForm::Ellipse { u_amp, v_amp } => {
            // φ = π/4 - u puts the b = 1 unit circle at (sin u, cos u)
            let big_u = J2::cos(-1.0, FRAC_PI_4, u).scale(branch * u_amp);
            let big_v = J2::sin(-1.0, FRAC_PI_4, u).scale(v_amp);
            conic_roles(kind, big_u, big_v)
        }
        ClosedForm::Hyperbola { u_amp, v_amp, swapped } => {
            let (big_u, big_v) = if swapped {
                (J2::sinh(1.0, 0.0, u), J2::cosh(1.0, 0.0, u))
            } else {
                (J2::cosh(1.0, 0.0, u), J2::sinh(1.0, 0.0, u))
            };
            conic_roles(kind, big_u.scale(branch * u_amp), big_v.scale(v_amp))
        }
        ClosedForm::Arcsine { mu, b, c0, dir } => {
            let scaled = J2::sin(1.0, 0.0, u).scale(mu / b);
            let unscaled = J2::sin(dir / b, c0, u).scale(mu);
            jet_from_roles(kind, scaled, unscaled)
        }
        ClosedForm::Hyperbolic { mu, b, shift, dir, positive } => {
            let (unscaled, scaled) = if positive {
                (J2::cosh(1.0, 0.0, u), J2::cosh(dir * b, shift, u))
            } else {
                (J2::sinh(1.0, 0.0, u), J2::sinh(dir * b, shift, u))
            };
            jet_from_roles(kind, scaled.scale(mu / b), unscaled.scale(mu))
        }
        ClosedForm::Power { b0, exponent } => jet_from_roles(kind, J2::powf(u, exponent).scale(b0), J2::ident(u)),
    }
}

/// `U = σ + τ`, `V = τ - σ`, so `σ = (U - V)/2`, `τ = (U + V)/2`.
fn conic_roles(kind: SurfaceKind, big_u: J2, big_v: J2) -> ProfileJet {
    let scaled = big_u.add(big_v.scale(-1.0)).scale(0.5);
    let unscaled = big_u.add(big_v).scale(0.5);
    jet_from_roles(kind, scaled, unscaled)
}

impl ProfileCurve {
    pub fn explicit(curve: ExplicitCurve) -> Result<ProfileCurve> {
        explicit_profile(curve)
    }

    pub fn sampled(curve: SampledCurve) -> ProfileCurve {
        let domain = (curve.nodes[0], *curve.nodes.last().unwrap());
        ProfileCurve { repr: Repr::Sampled(curve), domain }
    }

    /// Restricts (or moves) the parameter interval. Sampled curves cannot be
    /// extended beyond their nodes.
    pub fn with_domain(mut self, start: f64, end: f64) -> Result<ProfileCurve> {
        if !(start.is_finite() && end.is_finite() && start < end) {
            return Err(Error::BadParameter(format!("invalid domain ({start}, {end})")));
        }
        match &self.repr {
            Repr::Sampled(c) => {
                let (lo, hi) = (c.nodes[0], *c.nodes.last().unwrap());
                if start < lo || end > hi {
                    return Err(Error::BadParameter(format!(
                        "domain ({start}, {end}) exceeds the sampled range [{lo}, {hi}]"
                    )));
                }
            }
            Repr::Family { form: ClosedForm::Power { .. }, .. }
            | Repr::Explicit(ExplicitCurve::SquareFirst | ExplicitCurve::SquareSecond)
                if start < 0.0 =>
            {
                return Err(Error::BadParameter("power profiles need u >= 0".into()));
            }
            _ => {}
        }
        self.domain = (start, end);
        Ok(self)
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn family_spec(&self) -> Option<&FamilySpec> {
        match &self.repr {
            Repr::Family { spec, .. } => Some(spec),
            _ => None,
        }
    }

    pub fn explicit_curve(&self) -> Option<ExplicitCurve> {
        match self.repr {
            Repr::Explicit(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_sampled(&self) -> Option<&SampledCurve> {
        match &self.repr {
            Repr::Sampled(c) => Some(c),
            _ => None,
        }
    }

    pub fn contains(&self, u: f64) -> bool {
        u >= self.domain.0 && u <= self.domain.1
    }

    /// Analytic 2-jet for closed forms, interpolated jet for sampled curves.
    pub fn eval_jet(&self, u: f64) -> Result<ProfileJet> {
        let out_of_domain = || Error::OutOfDomain { u, min: self.domain.0, max: self.domain.1 };
        if !self.contains(u) {
            return Err(out_of_domain());
        }
        let jet = match &self.repr {
            Repr::Family { kind, form, branch, .. } => family_jet(*kind, form, *branch, u),
            Repr::Explicit(c) => explicit_jet(*c, u),
            Repr::Sampled(c) => c.eval(u),
        };
        if jet.is_finite() {
            Ok(jet)
        } else {
            Err(out_of_domain())
        }
    }

    /// Samples the curve into a [`SampledCurve`] on `n` uniform nodes.
    pub fn to_sampled(&self, n: usize) -> Result<SampledCurve> {
        let n = n.max(2);
        let (a, b) = self.domain;
        let nodes: Vec<f64> = (0..n).map(|i| lerp(a, b, i as f64 / (n - 1) as f64)).collect();
        let jets = nodes.iter().map(|&u| self.eval_jet(u)).collect::<Result<Vec<_>>>()?;
        SampledCurve::new(nodes, jets)
    }
}

fn lerp(a: f64, b: f64, t: f64) -> f64 {
    if t >= 1.0 {
        b
    } else {
        a + (b - a) * t
    }
}

// Five-point Gauss-Legendre rule on [-1, 1].
const GL_NODES: [f64; 5] =
    [0.0, -0.538_469_310_105_683_1, 0.538_469_310_105_683_1, -0.906_179_845_938_664, 0.906_179_845_938_664];
const GL_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];

fn gauss_legendre<F: Fn(f64) -> Result<f64>>(f: &F, a: f64, b: f64) -> Result<f64> {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let mut sum = 0.0;
    for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
        sum += w * f(mid + half * x)?;
    }
    Ok(sum * half)
}

/// Golden-section search for the minimum of `f` on `[a, b]`.
pub(crate) fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if (b - a).abs() < 1e-13 * (1.0 + a.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Checks that `speed^2` keeps one sign with `|speed^2| > τ_reg` on the
/// domain, scanning `n` samples and refining interior local minima.
fn check_non_lightlike(curve: &ProfileCurve, n: usize) -> Result<Sign> {
    let (a, b) = curve.domain();
    let speed = |u: f64| curve.eval_jet(u).map(|j| j.speed_sq());
    let us: Vec<f64> = (0..n).map(|i| lerp(a, b, i as f64 / (n - 1) as f64)).collect();
    let vals = us.iter().map(|&u| speed(u)).collect::<Result<Vec<_>>>()?;
    let sign = Sign::of(vals[0]);
    for (u, v) in us.iter().zip(&vals) {
        if v.abs() <= REGULARITY_TOLERANCE || Sign::of(*v) != sign {
            return Err(Error::LightlikeTangent { u: *u, speed_sq: *v });
        }
    }
    for i in 1..n - 1 {
        if vals[i].abs() <= vals[i - 1].abs() && vals[i].abs() <= vals[i + 1].abs() {
            let (u, m) = golden_min(|x| speed(x).map(f64::abs).unwrap_or(0.0), us[i - 1], us[i + 1]);
            if m <= REGULARITY_TOLERANCE {
                return Err(Error::LightlikeTangent { u, speed_sq: m });
            }
        }
    }
    Ok(sign)
}

/// Reparametrizes a non-lightlike curve by arclength, `|p'^2 - s'^2| = 1`.
///
/// The result is sampled on `nodes` equally spaced arclength values over
/// `[0, L]`; node positions are found by Newton iteration on the cumulative
/// Gauss-Legendre arclength, and node jets are transformed exactly.
pub fn arclength_reparametrize(curve: &ProfileCurve, nodes: usize) -> Result<ProfileCurve> {
    let nodes = nodes.max(2);
    let eps = check_non_lightlike(curve, (4 * nodes).max(400))?.value();
    let rate = |u: f64| curve.eval_jet(u).map(|j| (eps * j.speed_sq()).sqrt());

    let (a, b) = curve.domain();
    let segments = 4 * nodes;
    let grid: Vec<f64> = (0..=segments).map(|i| lerp(a, b, i as f64 / segments as f64)).collect();
    let mut cumulative = vec![0.0; segments + 1];
    for i in 0..segments {
        cumulative[i + 1] = cumulative[i] + gauss_legendre(&rate, grid[i], grid[i + 1])?;
    }
    let total = cumulative[segments];

    let mut out_nodes = Vec::with_capacity(nodes);
    let mut jets = Vec::with_capacity(nodes);
    for j in 0..nodes {
        let target = total * j as f64 / (nodes - 1) as f64;
        let u = if j == 0 {
            a
        } else if j == nodes - 1 {
            b
        } else {
            let k = cumulative.partition_point(|&c| c <= target).clamp(1, segments) - 1;
            invert_arclength(&rate, grid[k], grid[k + 1], cumulative[k], target)?
        };
        let jet = curve.eval_jet(u)?;
        let sigma = (eps * jet.speed_sq()).sqrt();
        let dsigma = eps * (jet.dp * jet.ddp - jet.ds * jet.dds) / sigma;
        jets.push(ProfileJet {
            p: jet.p,
            s: jet.s,
            dp: jet.dp / sigma,
            ds: jet.ds / sigma,
            ddp: (jet.ddp - jet.dp * dsigma / sigma) / (sigma * sigma),
            dds: (jet.dds - jet.ds * dsigma / sigma) / (sigma * sigma),
        });
        out_nodes.push(target);
    }
    Ok(ProfileCurve::sampled(SampledCurve::new(out_nodes, jets)?))
}

/// Solves `base + ∫_{lo}^{u} rate = target` for `u ∈ [lo, hi]`.
fn invert_arclength<F: Fn(f64) -> Result<f64>>(rate: &F, lo: f64, hi: f64, base: f64, target: f64) -> Result<f64> {
    let (mut left, mut right) = (lo, hi);
    let mut u = 0.5 * (lo + hi);
    for _ in 0..60 {
        let arc = base + gauss_legendre(rate, lo, u)?;
        let resid = arc - target;
        if resid > 0.0 {
            right = u;
        } else {
            left = u;
        }
        let mut next = u - resid / rate(u)?;
        if !(next > left && next < right) {
            next = 0.5 * (left + right);
        }
        if (next - u).abs() <= 1e-15 * (1.0 + u.abs()) {
            return Ok(next);
        }
        u = next;
    }
    Ok(u)
}

/// A maximal regular subinterval with its constant causal signs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularPiece {
    pub start: f64,
    pub end: f64,
    /// `sgn(p'^2 - s'^2)`
    pub eps: Sign,
    /// sign of the rotation norm `g_vv`
    pub eps_star: Sign,
}

impl RegularPiece {
    pub fn len(&self) -> f64 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.len() <= 0.0
    }

    pub fn contains(&self, u: f64) -> bool {
        u > self.start && u < self.end
    }

    /// `n` samples with the given relative margin from both endpoints.
    pub fn samples(&self, n: usize, margin: f64) -> Vec<f64> {
        let n = n.max(2);
        let lo = self.start + margin * self.len();
        let hi = self.end - margin * self.len();
        (0..n).map(|i| lerp(lo, hi, i as f64 / (n - 1) as f64)).collect()
    }
}

/// `(ε, ε*)` at `u`, or `None` on the singular locus (either squared metric
/// coefficient within the regularity tolerance) and outside the domain.
pub fn regular_signs(surface: &SurfaceFamily, u: f64) -> Option<(Sign, Sign)> {
    let m = surface.induced_metric(u).ok()?;
    if m.g_uu.abs() > REGULARITY_TOLERANCE && m.g_vv.abs() > REGULARITY_TOLERANCE {
        Some((Sign::of(m.g_uu), Sign::of(m.g_vv)))
    } else {
        None
    }
}

/// Splits `interval` into maximal open subintervals on which both `g_uu`
/// (speed^2) and `g_vv` (rotation norm) stay away from zero.
pub fn regularity_scan(surface: &SurfaceFamily, interval: (f64, f64), n: usize) -> Vec<RegularPiece> {
    let n = n.max(2);
    let (a, b) = interval;
    let us: Vec<f64> = (0..n).map(|i| lerp(a, b, i as f64 / (n - 1) as f64)).collect();
    let status: Vec<Option<(Sign, Sign)>> = us.iter().map(|&u| regular_signs(surface, u)).collect();

    let mut pieces = Vec::new();
    let mut i = 0;
    while i < n {
        let Some(signs) = status[i] else {
            i += 1;
            continue;
        };
        let mut j = i;
        while j + 1 < n && status[j + 1] == Some(signs) {
            j += 1;
        }
        let good = |u: f64| regular_signs(surface, u) == Some(signs);
        let start = if i == 0 { a } else { bisect_edge(&good, us[i], us[i - 1]) };
        let end = if j == n - 1 { b } else { bisect_edge(&good, us[j], us[j + 1]) };

        // zeros that touch without a sign change show up as local minima
        let mut cuts = vec![start];
        for k in i.max(1)..=j.min(n - 2) {
            for metric in [0usize, 1] {
                let g = |u: f64| {
                    surface.induced_metric(u).map(|m| if metric == 0 { m.g_uu } else { m.g_vv }.abs()).unwrap_or(0.0)
                };
                let (gl, gc, gr) = (g(us[k - 1]), g(us[k]), g(us[k + 1]));
                if gc <= gl && gc <= gr {
                    let (u, m) = golden_min(g, us[k - 1], us[k + 1]);
                    if m <= REGULARITY_TOLERANCE && u > start && u < end {
                        cuts.push(u);
                    }
                }
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|x, y| (*x - *y).abs() < ENDPOINT_PRECISION);
        cuts.push(end);
        for w in cuts.windows(2) {
            // two cuts at one double zero leave a sliver with no regular point
            if w[1] > w[0] && good(0.5 * (w[0] + w[1])) {
                pieces.push(RegularPiece { start: w[0], end: w[1], eps: signs.0, eps_star: signs.1 });
            }
        }
        i = j + 1;
    }
    pieces
}

/// Bisects between a good point and a bad point down to the edge.
fn bisect_edge<F: Fn(f64) -> bool>(good: &F, mut inside: f64, mut outside: f64) -> f64 {
    while (outside - inside).abs() > ENDPOINT_PRECISION {
        let mid = 0.5 * (inside + outside);
        if good(mid) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::E;

    fn jet_close(j: ProfileJet, expected: [f64; 6], tol: f64) {
        let got = [j.p, j.s, j.dp, j.ds, j.ddp, j.dds];
        for (g, e) in got.iter().zip(expected) {
            assert_abs_diff_eq!(*g, e, epsilon = tol);
        }
    }

    #[test]
    fn explicit_jets_match_hand_derivatives() {
        let c = ProfileCurve::explicit(ExplicitCurve::SinCos).unwrap();
        jet_close(c.eval_jet(0.0).unwrap(), [0.0, 1.0, 1.0, 0.0, 0.0, -1.0], 1e-15);

        let c = ProfileCurve::explicit(ExplicitCurve::SquareFirst).unwrap();
        jet_close(c.eval_jet(1.0).unwrap(), [1.0, 1.0, 2.0, 1.0, 2.0, 0.0], 1e-15);

        let c = ProfileCurve::explicit(ExplicitCurve::HalfCoshDouble).unwrap();
        jet_close(c.eval_jet(0.0).unwrap(), [0.5, 1.0, 0.0, 0.0, 2.0, 1.0], 1e-15);
    }

    #[test]
    fn quadratic_unit_circle_instance() {
        let spec = FamilySpec::Quadratic { lambda0: 1.0, mu0: 2.0, branch: Sign::Plus };
        let m1 = make_profile(SurfaceKind::M1, &spec).unwrap();
        let m2 = make_profile(SurfaceKind::M2, &spec).unwrap();
        for u in [-1.0, 0.0, 0.4, 2.0] {
            let j = m1.eval_jet(u).unwrap();
            assert_abs_diff_eq!(j.p, u.sin(), epsilon = 1e-14);
            assert_abs_diff_eq!(j.s, u.cos(), epsilon = 1e-14);
            let j = m2.eval_jet(u).unwrap();
            assert_abs_diff_eq!(j.p, u.cos(), epsilon = 1e-14);
            assert_abs_diff_eq!(j.s, u.sin(), epsilon = 1e-14);
        }
    }

    #[test]
    fn quadratic_hyperbola_satisfies_conic() {
        for (l0, m0) in [(-1.0, 4.0), (-2.0, -3.0), (0.5, 3.0)] {
            for branch in [Sign::Plus, Sign::Minus] {
                let spec = FamilySpec::Quadratic { lambda0: l0, mu0: m0, branch };
                let c = make_profile(SurfaceKind::M1, &spec).unwrap();
                for i in 0..50 {
                    let u = -1.5 + 3.0 * i as f64 / 49.0;
                    let j = c.eval_jet(u).unwrap();
                    let (y, w) = (j.p, j.s);
                    let r = (y + w).powi(2) + l0 * (w - y).powi(2) - m0;
                    assert!(r.abs() < 1e-10, "residual {r} at {u}");
                }
            }
        }
    }

    #[test]
    fn quadratic_parameter_errors() {
        let bad =
            |l0, m0| make_profile(SurfaceKind::M1, &FamilySpec::Quadratic { lambda0: l0, mu0: m0, branch: Sign::Plus });
        assert!(matches!(bad(0.0, 1.0), Err(Error::BadParameter(_))));
        assert!(matches!(bad(1.0, 0.0), Err(Error::BadParameter(_))));
        assert!(matches!(bad(1.0, -1.0), Err(Error::NoSolution(_))));
    }

    #[test]
    fn hyperbolic_reproduces_half_cosh_double() {
        let spec = FamilySpec::Hyperbolic { a0: -3.0, b: 2.0, d0: 1.0, branch: Sign::Plus, radicand: Sign::Plus };
        let c = make_profile(SurfaceKind::M1, &spec).unwrap();
        for u in [0.1, 0.5, 1.3] {
            let j = c.eval_jet(u).unwrap();
            assert_abs_diff_eq!(j.p, 0.5 * (2.0 * u).cosh(), epsilon = 1e-13);
            assert_abs_diff_eq!(j.s, u.cosh(), epsilon = 1e-13);
        }
    }

    #[test]
    fn hyperbolic_reproduces_cosh_shifted_for_m2() {
        let spec = FamilySpec::Hyperbolic { a0: 3.0, b: 2.0, d0: E, branch: Sign::Plus, radicand: Sign::Plus };
        let c = make_profile(SurfaceKind::M2, &spec).unwrap();
        assert!(c.domain().0 >= 0.5 - 1e-12);
        for u in [0.6, 0.9, 1.5] {
            let j = c.eval_jet(u).unwrap();
            assert_abs_diff_eq!(j.p, u.cosh(), epsilon = 1e-13);
            assert_abs_diff_eq!(j.s, 0.5 * (2.0 * u - 1.0).cosh(), epsilon = 1e-13);
        }
    }

    #[test]
    fn arcsine_reproduces_double_angle_sine() {
        let spec = FamilySpec::Arcsine { a0: 0.75, b: 0.5, c0: 0.0, branch: Sign::Plus, eps_star: Sign::Plus };
        let c = make_profile(SurfaceKind::M1, &spec).unwrap();
        let (lo, hi) = c.domain();
        assert_abs_diff_eq!(lo, -FRAC_PI_4, epsilon = 1e-15);
        assert_abs_diff_eq!(hi, FRAC_PI_4, epsilon = 1e-15);
        for u in [0.1, 0.4, 0.7] {
            let j = c.eval_jet(u).unwrap();
            assert_abs_diff_eq!(j.p, 2.0 * u.sin(), epsilon = 1e-14);
            assert_abs_diff_eq!(j.s, (2.0 * u).sin(), epsilon = 1e-14);
        }
    }

    #[test]
    fn arcsine_without_real_radius_has_no_solution() {
        let spec = FamilySpec::Arcsine { a0: -0.75, b: 0.5, c0: 0.0, branch: Sign::Plus, eps_star: Sign::Plus };
        assert!(matches!(make_profile(SurfaceKind::M1, &spec), Err(Error::NoSolution(_))));
        let spec = FamilySpec::Arcsine { a0: 3.0, b: 2.0, c0: 0.0, branch: Sign::Plus, eps_star: Sign::Plus };
        assert!(matches!(make_profile(SurfaceKind::M1, &spec), Err(Error::NoSolution(_))));
    }

    #[test]
    fn power_family_instance() {
        let spec = FamilySpec::Power { b0: 1.0, b: 2.0, branch: Sign::Plus };
        let c = make_profile(SurfaceKind::M1, &spec).unwrap();
        let j = c.eval_jet(1.5).unwrap();
        assert_abs_diff_eq!(j.p, 2.25, epsilon = 1e-15);
        assert_abs_diff_eq!(j.s, 1.5, epsilon = 1e-15);
        assert!(c.clone().with_domain(-1.0, 1.0).is_err());
        let spec = FamilySpec::Power { b0: 0.0, b: 2.0, branch: Sign::Plus };
        assert!(matches!(make_profile(SurfaceKind::M1, &spec), Err(Error::BadParameter(_))));
    }

    #[test]
    fn out_of_domain_is_reported() {
        let c = ProfileCurve::explicit(ExplicitCurve::SinCos).unwrap().with_domain(0.0, 1.0).unwrap();
        assert!(matches!(c.eval_jet(1.5), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn quintic_hermite_is_exact_on_quintics() {
        let f = |u: f64| {
            J2::new(u.powi(5) - 2.0 * u.powi(3) + u, 5.0 * u.powi(4) - 6.0 * u * u + 1.0, 20.0 * u.powi(3) - 12.0 * u)
        };
        let (u0, u1) = (0.3, 1.1);
        let (a, b) = (f(u0), f(u1));
        for t in [0.0, 0.25, 0.6, 1.0] {
            let u = u0 + t * (u1 - u0);
            let got = quintic_hermite(u1 - u0, t, [a.v, a.d, a.dd], [b.v, b.d, b.dd]);
            let want = f(u);
            assert_abs_diff_eq!(got.v, want.v, epsilon = 1e-13);
            assert_abs_diff_eq!(got.d, want.d, epsilon = 1e-12);
            assert_abs_diff_eq!(got.dd, want.dd, epsilon = 1e-11);
        }
    }

    #[test]
    fn lightlike_circle_is_rejected() {
        let c = ProfileCurve::explicit(ExplicitCurve::SinCos).unwrap().with_domain(0.5, 1.0).unwrap();
        assert!(matches!(arclength_reparametrize(&c, 100), Err(Error::LightlikeTangent { .. })));
    }

    #[test]
    fn unit_speed_line_is_unchanged() {
        let (c, d) = (2f64.sqrt(), 1.0);
        let line = ProfileCurve::explicit(ExplicitCurve::Line { c, d }).unwrap().with_domain(0.0, 1.5).unwrap();
        let re = arclength_reparametrize(&line, 50).unwrap();
        assert_abs_diff_eq!(re.domain().1, 1.5, epsilon = 1e-13);
        for u in [0.0, 0.37, 1.2, 1.5] {
            let j = re.eval_jet(u).unwrap();
            assert_abs_diff_eq!(j.p, c * u, epsilon = 1e-12);
            assert_abs_diff_eq!(j.s, d * u, epsilon = 1e-12);
        }
    }
}
