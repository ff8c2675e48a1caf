use thiserror::Error;

use crate::ode_integrate::Trajectory;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vector is null within tolerance (<v,v> = {value:e})")]
    NearNull { value: f64 },

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("u = {u} lies outside the profile domain [{min}, {max}]")]
    OutOfDomain { u: f64, min: f64, max: f64 },

    #[error("profile tangent is lightlike near u = {u} (speed^2 = {speed_sq:e})")]
    LightlikeTangent { u: f64, speed_sq: f64 },

    #[error("frame is singular at u = {u} (A = {a:e}, q = {q:e})")]
    SingularFrame { u: f64, a: f64, q: f64 },

    #[error("causal signs are not constant on ({start}, {end})")]
    MixedSigns { start: f64, end: f64 },

    #[error("finite-difference step {h:e} leaves the regular subinterval around u = {u}")]
    StepTooLarge { u: f64, h: f64 },

    #[error("point outside the algebraic domain of the family at u = {u}: {what}")]
    DomainViolation { u: f64, what: String },

    #[error("singular start: {0}")]
    SingularStart(String),

    #[error("integration reached a singular locus at arclength {boundary}")]
    HitSingularity { boundary: f64, partial: Box<Trajectory> },

    #[error("integration reached a turning point at arclength {at}")]
    TurningPoint { at: f64, partial: Box<Trajectory> },

    #[error("radicand is negative at the start point ({which} = {value:e})")]
    RadicandNegative { which: &'static str, value: f64 },

    #[error("integrator could not meet tolerance: {0}")]
    ToleranceNotMet(String),
}
