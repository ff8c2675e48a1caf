//! Rotational surfaces `M1(b)` and `M2(b)` in the pseudo-Euclidean space
//! `E^4_2`: construction, zero-mean-curvature analysis, numerical integration
//! of the profile equation and a finite-difference oracle.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod error;
pub mod fd_oracle;
pub mod ode_integrate;
pub mod profiles;
pub mod pseudo_euclid;
pub mod surface_geom;
pub mod zmc_analysis;

pub use error::{Error, Result};
pub use profiles::{make_profile, ExplicitCurve, FamilySpec, ProfileCurve, ProfileJet};
pub use pseudo_euclid::{CausalClass, Sign, Vec4};
pub use surface_geom::{SurfaceFamily, SurfaceKind};
