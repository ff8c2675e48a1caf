//! Numerical integration of the zero-mean-curvature profile equation.
//!
//! The primary path integrates the unit-speed second-order system
//! `p'p'' - s's'' = 0`, `s'p'' - p's'' = R` (`R` being minus the algebraic
//! term of the ZMC equation), which is free of square-root branches. The
//! secondary path integrates the square-root first-order system with fixed
//! branch signs and stops at turning points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profiles::{ProfileCurve, ProfileJet, SampledCurve, REGULARITY_TOLERANCE};
use crate::pseudo_euclid::Sign;
use crate::surface_geom::SurfaceKind;
use crate::zmc_analysis::first_integral_of_jet;

/// Largest step the controller may take.
pub const MAX_STEP: f64 = 1e-2;

/// Default absolute and relative tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

const SINGULAR_BAND: f64 = 10.0 * REGULARITY_TOLERANCE;
const MIN_STEP: f64 = 1e-13;
const MAX_STEPS: usize = 2_000_000;

/// Unit-speed position and velocity at the launch point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StartJet {
    pub p: f64,
    pub s: f64,
    pub dp: f64,
    pub ds: f64,
}

/// Scales the velocity of a profile at `u` to unit speed.
pub fn unit_speed_start(profile: &ProfileCurve, u: f64) -> Result<StartJet> {
    let j = profile.eval_jet(u)?;
    let speed_sq = j.speed_sq();
    if speed_sq.abs() <= REGULARITY_TOLERANCE {
        return Err(Error::LightlikeTangent { u, speed_sq });
    }
    let r = speed_sq.abs().sqrt();
    Ok(StartJet { p: j.p, s: j.s, dp: j.dp / r, ds: j.ds / r })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegrationState {
    /// arclength parameter
    pub u: f64,
    pub p: f64,
    pub s: f64,
    pub dp: f64,
    pub ds: f64,
    pub ddp: f64,
    pub dds: f64,
    /// `|dp^2 - ds^2| - 1`
    pub speed_drift: f64,
    /// change of the normalized first integral since the start (0 for b = 1)
    pub first_integral_drift: f64,
}

impl IntegrationState {
    pub fn jet(&self) -> ProfileJet {
        ProfileJet { p: self.p, s: self.s, dp: self.dp, ds: self.ds, ddp: self.ddp, dds: self.dds }
    }
}

/// Integrated states in increasing `u`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub kind: SurfaceKind,
    pub b: f64,
    pub states: Vec<IntegrationState>,
}

impl Trajectory {
    pub fn domain(&self) -> (f64, f64) {
        match (self.states.first(), self.states.last()) {
            (Some(a), Some(b)) => (a.u, b.u),
            _ => (0.0, 0.0),
        }
    }

    pub fn length(&self) -> f64 {
        let (a, b) = self.domain();
        b - a
    }

    pub fn max_speed_drift(&self) -> f64 {
        self.states.iter().map(|s| s.speed_drift.abs()).fold(0.0, f64::max)
    }

    pub fn max_first_integral_drift(&self) -> f64 {
        self.states.iter().map(|s| s.first_integral_drift.abs()).fold(0.0, f64::max)
    }

    /// Sampled profile through the states, interpolated with exact jets.
    pub fn curve(&self) -> Result<ProfileCurve> {
        let nodes = self.states.iter().map(|s| s.u).collect();
        let jets = self.states.iter().map(IntegrationState::jet).collect();
        Ok(ProfileCurve::sampled(SampledCurve::new(nodes, jets)?))
    }
}

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

/// One embedded step; `None` if a stage leaves the admissible set.
fn dopri_step<const N: usize, F>(rhs: &F, y: &[f64; N], h: f64, tol: f64) -> Option<([f64; N], f64)>
where
    F: Fn(&[f64; N]) -> Option<[f64; N]>,
{
    let mut k = [[0.0; N]; 7];
    k[0] = rhs(y)?;
    for i in 1..7 {
        let mut yi = *y;
        for (j, kj) in k.iter().enumerate().take(i) {
            for n in 0..N {
                yi[n] += h * A[i][j] * kj[n];
            }
        }
        k[i] = rhs(&yi)?;
    }
    let mut y5 = *y;
    for (j, kj) in k.iter().enumerate() {
        for n in 0..N {
            y5[n] += h * B5[j] * kj[n];
        }
    }
    let mut err: f64 = 0.0;
    for n in 0..N {
        let diff: f64 = (0..7).map(|j| (B5[j] - B4[j]) * k[j][n]).sum();
        let scale = tol + tol * y[n].abs().max(y5[n].abs());
        err = err.max((h * diff).abs() / scale);
    }
    if y5.iter().all(|x| x.is_finite()) && err.is_finite() {
        Some((y5, err))
    } else {
        None
    }
}

enum Stop {
    Completed,
    /// the admissible set ends at this parameter
    Boundary(f64),
    Stalled(String),
}

/// Adaptive integration of `y' = rhs(y)` over `[0, length]`; `valid` marks
/// the admissible region (regular locus or positive radicands).
fn drive<const N: usize, F, V>(rhs: &F, valid: &V, y0: [f64; N], length: f64, tol: f64) -> (Vec<(f64, [f64; N])>, Stop)
where
    F: Fn(&[f64; N]) -> Option<[f64; N]>,
    V: Fn(&[f64; N]) -> bool,
{
    let mut out = vec![(0.0, y0)];
    let (mut t, mut y) = (0.0, y0);
    let mut h = (0.1 * length).min(MAX_STEP * 0.1);
    let checked = |y: &[f64; N]| if valid(y) { rhs(y) } else { None };
    // earliest parameter known to be unreachable; steps bisect towards it
    let mut bound = f64::INFINITY;
    for _ in 0..MAX_STEPS {
        if t >= length {
            return (out, Stop::Completed);
        }
        if bound - t < MIN_STEP {
            return (out, Stop::Boundary(bound));
        }
        let mut last = length - t <= h;
        let mut step = if last { length - t } else { h };
        if step >= 0.5 * (bound - t) {
            step = 0.5 * (bound - t);
            last = false;
        }
        match dopri_step(&checked, &y, step, tol) {
            Some((y_new, err)) if valid(&y_new) => {
                if err <= 1.0 {
                    t = if last { length } else { t + step };
                    y = y_new;
                    out.push((t, y));
                }
                let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                h = (step * factor).min(MAX_STEP);
                if err > 1.0 && h < MIN_STEP {
                    return (out, Stop::Stalled(format!("step size underflow at u = {t}")));
                }
            }
            _ => {
                bound = t + step;
                h = 0.5 * step;
            }
        }
    }
    (out, Stop::Stalled(format!("more than {MAX_STEPS} steps")))
}

fn rotation_norm(kind: SurfaceKind, b: f64, p: f64, s: f64) -> f64 {
    match kind {
        SurfaceKind::M1 => s * s - b * b * p * p,
        SurfaceKind::M2 => p * p - b * b * s * s,
    }
}

/// Second derivatives of a unit-speed ZMC profile.
fn zmc_accel(kind: SurfaceKind, b: f64, y: &[f64; 4]) -> Option<(f64, f64)> {
    let [p, s, dp, ds] = *y;
    let b2 = b * b;
    let g = rotation_norm(kind, b, p, s);
    let numer = match kind {
        SurfaceKind::M1 => b2 * p * ds - s * dp,
        SurfaceKind::M2 => b2 * s * dp - p * ds,
    };
    let speed_sq = dp * dp - ds * ds;
    let r = -speed_sq * numer / g;
    let d = -speed_sq;
    let out = (ds * r / d, dp * r / d);
    (out.0.is_finite() && out.1.is_finite()).then_some(out)
}

fn state_record(kind: SurfaceKind, b: f64, u: f64, y: [f64; 4], acc: (f64, f64), f0: Option<f64>) -> IntegrationState {
    let [p, s, dp, ds] = y;
    let jet = ProfileJet { p, s, dp, ds, ddp: acc.0, dds: acc.1 };
    IntegrationState {
        u,
        p,
        s,
        dp,
        ds,
        ddp: acc.0,
        dds: acc.1,
        speed_drift: jet.speed_sq().abs() - 1.0,
        first_integral_drift: f0.map_or(0.0, |f0| first_integral_of_jet(kind, b, &jet) - f0),
    }
}

/// Integrates the ZMC equation from a unit-speed start over arclength
/// `length` in the given direction. Going backwards yields the domain
/// `(-length, 0)` in the original orientation.
pub fn integrate_profile(
    kind: SurfaceKind,
    b: f64,
    start: StartJet,
    direction: Sign,
    length: f64,
    tol: f64,
) -> Result<Trajectory> {
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::BadParameter(format!("rotation rate b = {b} must be positive")));
    }
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::BadParameter(format!("length {length} must be positive")));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::BadParameter(format!("tolerance {tol} must be positive")));
    }
    let speed_sq = start.dp * start.dp - start.ds * start.ds;
    if !(speed_sq.abs() - 1.0).abs().le(&1e-10) {
        return Err(Error::BadParameter(format!(
            "start velocity must have unit speed, got |speed^2| = {}",
            speed_sq.abs()
        )));
    }
    let g0 = rotation_norm(kind, b, start.p, start.s);
    if g0.abs() <= SINGULAR_BAND {
        return Err(Error::SingularStart(format!("rotation norm {g0:e} vanishes at the start point")));
    }
    let dir = direction.value();
    let y0 = [start.p, start.s, dir * start.dp, dir * start.ds];
    let (g_sign, e_sign) = (Sign::of(g0), Sign::of(speed_sq));

    let rhs = |y: &[f64; 4]| zmc_accel(kind, b, y).map(|(a, c)| [y[2], y[3], a, c]);
    let valid = |y: &[f64; 4]| {
        let g = rotation_norm(kind, b, y[0], y[1]);
        let e = y[2] * y[2] - y[3] * y[3];
        g.abs() > SINGULAR_BAND && Sign::of(g) == g_sign && e.abs() > SINGULAR_BAND && Sign::of(e) == e_sign
    };
    let (raw, stop) = drive(&rhs, &valid, y0, length, tol);

    let f0 = (b != 1.0).then(|| {
        let acc = zmc_accel(kind, b, &y0).unwrap_or((0.0, 0.0));
        let jet = ProfileJet { p: y0[0], s: y0[1], dp: y0[2], ds: y0[3], ddp: acc.0, dds: acc.1 };
        first_integral_of_jet(kind, b, &jet)
    });
    let mut states: Vec<IntegrationState> = raw
        .into_iter()
        .filter_map(|(t, y)| {
            let acc = zmc_accel(kind, b, &y)?;
            let y = [y[0], y[1], dir * y[2], dir * y[3]];
            Some(state_record(kind, b, dir * t, y, acc, f0))
        })
        .collect();
    if dir < 0.0 {
        states.reverse();
    }
    let trajectory = Trajectory { kind, b, states };
    match stop {
        Stop::Completed => Ok(trajectory),
        Stop::Boundary(at) => Err(Error::HitSingularity { boundary: dir * at, partial: Box::new(trajectory) }),
        Stop::Stalled(why) => Err(Error::ToleranceNotMet(why)),
    }
}

/// Parameters of the square-root first-order system.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchSystem {
    pub kind: SurfaceKind,
    pub b: f64,
    /// `a0 / (b^2 - 1)`
    pub a0_tilde: f64,
    pub eps: Sign,
    pub eps_star: Sign,
}

impl BranchSystem {
    /// `(σ'^2, τ'^2)` at `(σ, τ)`:
    /// `σ'^2 = (ã0 + ε_r b^2 σ^2)/(b^2 σ^2 - τ^2)`, `τ'^2 = (ã0 + ε_r τ^2)/(b^2 σ^2 - τ^2)`
    /// with `ε_r = ε` for M1 and `-ε` for M2.
    pub fn radicands(&self, sigma: f64, tau: f64) -> (f64, f64) {
        let b2 = self.b * self.b;
        let er = match self.kind {
            SurfaceKind::M1 => self.eps.value(),
            SurfaceKind::M2 => -self.eps.value(),
        };
        let den = b2 * sigma * sigma - tau * tau;
        ((self.a0_tilde + er * b2 * sigma * sigma) / den, (self.a0_tilde + er * tau * tau) / den)
    }

    fn split(&self, p: f64, s: f64) -> (f64, f64) {
        match self.kind {
            SurfaceKind::M1 => (p, s),
            SurfaceKind::M2 => (s, p),
        }
    }

    fn join(&self, sigma: f64, tau: f64) -> (f64, f64) {
        self.split(sigma, tau)
    }
}

/// Integrates the first-order system with fixed signs of `(σ', τ')` from the
/// position `start = (p, s)` over arclength `length`.
pub fn branch_first_order(
    system: BranchSystem,
    start: (f64, f64),
    signs: (Sign, Sign),
    length: f64,
    tol: f64,
) -> Result<Trajectory> {
    let BranchSystem { kind, b, eps, eps_star, .. } = system;
    if !(b.is_finite() && b > 0.0) || b == 1.0 {
        return Err(Error::BadParameter(format!("the first-order system needs b > 0, b != 1 (got {b})")));
    }
    if !(length.is_finite() && length > 0.0 && tol.is_finite() && tol > 0.0) {
        return Err(Error::BadParameter("length and tolerance must be positive".into()));
    }
    let (sigma0, tau0) = system.split(start.0, start.1);
    let g0 = tau0 * tau0 - b * b * sigma0 * sigma0;
    if g0.abs() <= SINGULAR_BAND {
        return Err(Error::SingularStart(format!("rotation norm {g0:e} vanishes at the start point")));
    }
    if Sign::of(g0) != eps_star {
        return Err(Error::BadParameter(format!(
            "ε* = {eps_star} does not match the rotation norm {g0} at the start point"
        )));
    }
    let (rs, rt) = system.radicands(sigma0, tau0);
    if !(rs > 0.0) {
        return Err(Error::RadicandNegative { which: "scaled component", value: rs });
    }
    if !(rt > 0.0) {
        return Err(Error::RadicandNegative { which: "unscaled component", value: rt });
    }
    let (ks, kt) = (signs.0.value(), signs.1.value());
    let rhs = |y: &[f64; 2]| {
        let (rs, rt) = system.radicands(y[0], y[1]);
        (rs >= 0.0 && rt >= 0.0).then(|| [ks * rs.sqrt(), kt * rt.sqrt()])
    };
    let valid = |y: &[f64; 2]| {
        let (rs, rt) = system.radicands(y[0], y[1]);
        let g = y[1] * y[1] - b * b * y[0] * y[0];
        rs > tol && rt > tol && Sign::of(g) == eps_star && g.abs() > SINGULAR_BAND
    };
    let (raw, stop) = drive(&rhs, &valid, [sigma0, tau0], length, tol);

    let mut f0 = None;
    let mut states = Vec::with_capacity(raw.len());
    for (t, y) in raw {
        let [sigma, tau] = y;
        let Some([ds_, dt_]) = rhs(&y) else { continue };
        let (ns, nt) = system.radicands(sigma, tau);
        let b2 = b * b;
        let er = match kind {
            SurfaceKind::M1 => eps.value(),
            SurfaceKind::M2 => -eps.value(),
        };
        let den = b2 * sigma * sigma - tau * tau;
        let dden = 2.0 * b2 * sigma * ds_ - 2.0 * tau * dt_;
        // d/dt of each radicand, then x'' = (x'^2)' / (2 x')
        let drs = (2.0 * er * b2 * sigma * ds_ - ns * dden) / den;
        let drt = (2.0 * er * tau * dt_ - nt * dden) / den;
        let dds_ = if ds_ != 0.0 { drs / (2.0 * ds_) } else { 0.0 };
        let ddt_ = if dt_ != 0.0 { drt / (2.0 * dt_) } else { 0.0 };
        let (p, s) = system.join(sigma, tau);
        let (dp, dsv) = system.join(ds_, dt_);
        let (ddp, ddsv) = system.join(dds_, ddt_);
        let jet = ProfileJet { p, s, dp, ds: dsv, ddp, dds: ddsv };
        let f = first_integral_of_jet(kind, b, &jet);
        let f0 = *f0.get_or_insert(f);
        states.push(IntegrationState {
            u: t,
            p,
            s,
            dp,
            ds: dsv,
            ddp,
            dds: ddsv,
            speed_drift: jet.speed_sq().abs() - 1.0,
            first_integral_drift: f - f0,
        });
    }
    let trajectory = Trajectory { kind, b, states };
    match stop {
        Stop::Completed => Ok(trajectory),
        Stop::Boundary(at) => Err(Error::TurningPoint { at, partial: Box::new(trajectory) }),
        Stop::Stalled(why) => Err(Error::ToleranceNotMet(why)),
    }
}
