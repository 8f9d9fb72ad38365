//! Projections from surfaces of revolution to the plane that send meridians
//! to straight lines and preserve lengths along meridians and parallels.
//!
//! Such a map exists exactly when the profile radius satisfies
//! `f(u)² = c·u² + d·u + k` with `c, k > 0`. The crate builds the map in
//! closed form ([`projection`]), certifies it numerically ([`verifier`]),
//! decides existence for arbitrary profiles, and writes graticules, meshes
//! and coordinate tables ([`export`]).
//!
//! ```
//! use meridian_map::{Projection, QuadraticProfile, SurfacePoint};
//!
//! let profile = QuadraticProfile::new(1.0, 0.0, 1.0)?;
//! let map = Projection::standard(profile);
//! let q = map.project(SurfacePoint::new(std::f64::consts::FRAC_PI_2, 1.0));
//! assert!((q.x - 1.0).abs() < 1e-12 && (q.y - 2.0).abs() < 1e-12);
//! # Ok::<(), meridian_map::Error>(())
//! ```

pub mod cli;
pub mod error;
pub mod export;
pub mod profile;
pub mod projection;
pub mod quadrature;
mod spline;
pub mod verifier;

pub use error::{Error, Result};
pub use profile::{
    DomainInterval, GeneralProfile, Jet, ProfileCurve, QuadraticProfile, SurfacePoint,
};
pub use projection::{Branch, PlanePoint, Projection, ProjectionParams, Theta0Branch};

/// Runs the guide's code samples as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/profiles.md")]
    mod profiles {}
    #[doc = include_str!("../../../book/src/projection.md")]
    mod projection {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/classification.md")]
    mod classification {}
    #[doc = include_str!("../../../book/src/export.md")]
    mod export {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
