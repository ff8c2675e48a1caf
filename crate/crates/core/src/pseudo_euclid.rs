//! Linear algebra of the pseudo-Euclidean space E^4_2.
//!
//! The inner product has signature (+, +, -, -): the first two coordinates
//! are spacelike and the last two are timelike.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Band below which `<v,v>` counts as zero, relative to `max(1, |v|_1^2)`.
pub const NULL_TOLERANCE: f64 = 1e-10;

/// A sign `+1` or `-1`. Used for the frame signs, causal signs and the
/// explicit branch choices of the profile families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// Sign of a non-zero real; zero maps to `Plus`.
    pub fn of(x: f64) -> Sign {
        if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;
    fn try_from(v: i8) -> std::result::Result<Sign, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("sign must be +1 or -1, got {other}")),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+1"),
            Sign::Minus => write!(f, "-1"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CausalClass {
    Spacelike,
    Timelike,
    Lightlike,
}

/// A point or vector of E^4_2.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec4 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub x4: f64,
}

impl Vec4 {
    pub const ZERO: Vec4 = Vec4::new(0.0, 0.0, 0.0, 0.0);

    pub const fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Vec4 {
        Vec4 { x1, x2, x3, x4 }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x1, self.x2, self.x3, self.x4]
    }

    pub fn from_array(a: [f64; 4]) -> Vec4 {
        Vec4::new(a[0], a[1], a[2], a[3])
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }

    pub fn inner(&self, other: &Vec4) -> f64 {
        inner(self, other)
    }

    pub fn norm_sq(&self) -> f64 {
        inner(self, self)
    }

    pub fn l1_norm(&self) -> f64 {
        self.to_array().iter().map(|c| c.abs()).sum()
    }

    /// Largest absolute coordinate (Euclidean sup-norm, for error measures).
    pub fn max_abs(&self) -> f64 {
        self.to_array().iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn causal_character(&self) -> CausalClass {
        causal_character(self)
    }

    pub fn normalize(&self) -> Result<(Vec4, Sign)> {
        normalize(self)
    }
}

/// `a1 b1 + a2 b2 - a3 b3 - a4 b4`.
pub fn inner(a: &Vec4, b: &Vec4) -> f64 {
    a.x1 * b.x1 + a.x2 * b.x2 - a.x3 * b.x3 - a.x4 * b.x4
}

fn null_band(v: &Vec4) -> f64 {
    let l1 = v.l1_norm();
    NULL_TOLERANCE * (l1 * l1).max(1.0)
}

pub fn causal_character(v: &Vec4) -> CausalClass {
    let n = v.norm_sq();
    if n.abs() <= null_band(v) {
        if *v == Vec4::ZERO {
            CausalClass::Spacelike
        } else {
            CausalClass::Lightlike
        }
    } else if n > 0.0 {
        CausalClass::Spacelike
    } else {
        CausalClass::Timelike
    }
}

/// Scales `v` to `<w,w> = ±1` and returns the sign of `<v,v>`.
pub fn normalize(v: &Vec4) -> Result<(Vec4, Sign)> {
    let n = v.norm_sq();
    if n.abs() <= null_band(v) {
        return Err(Error::NearNull { value: n });
    }
    Ok((*v / n.abs().sqrt(), Sign::of(n)))
}

impl Add for Vec4 {
    type Output = Vec4;
    fn add(self, o: Vec4) -> Vec4 {
        Vec4::new(self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3, self.x4 + o.x4)
    }
}

impl AddAssign for Vec4 {
    fn add_assign(&mut self, o: Vec4) {
        *self = *self + o;
    }
}

impl Sub for Vec4 {
    type Output = Vec4;
    fn sub(self, o: Vec4) -> Vec4 {
        Vec4::new(self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3, self.x4 - o.x4)
    }
}

impl Neg for Vec4 {
    type Output = Vec4;
    fn neg(self) -> Vec4 {
        Vec4::new(-self.x1, -self.x2, -self.x3, -self.x4)
    }
}

impl Mul<f64> for Vec4 {
    type Output = Vec4;
    fn mul(self, k: f64) -> Vec4 {
        Vec4::new(self.x1 * k, self.x2 * k, self.x3 * k, self.x4 * k)
    }
}

impl Mul<Vec4> for f64 {
    type Output = Vec4;
    fn mul(self, v: Vec4) -> Vec4 {
        v * self
    }
}

impl Div<f64> for Vec4 {
    type Output = Vec4;
    fn div(self, k: f64) -> Vec4 {
        Vec4::new(self.x1 / k, self.x2 / k, self.x3 / k, self.x4 / k)
    }
}
