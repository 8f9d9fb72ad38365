//! Profile curves of surfaces of revolution.
//!
//! A surface of revolution is swept by the profile `(f(u), g(u))`, parametrized
//! by arc length, so `f'² + g'² = 1` and the metric is `du² + f(u)² dt²`.
//! [`QuadraticProfile`] is the family `f² = c·u² + d·u + k` with `c > 0`,
//! `k > 0` and negative discriminant, for which a meridian-straightening
//! projection exists. [`GeneralProfile`] carries any other radius function
//! for the existence test in [`crate::verifier`].

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature;
use crate::spline::CubicSpline;

/// Absolute tolerance for the arc-length companion `g`.
pub const G_TOLERANCE: f64 = 1e-10;

/// `1 - f'²` below this is treated as a genuine violation of the arc-length
/// condition rather than rounding.
pub const ARC_LENGTH_SLACK: f64 = 1e-12;

/// Inward nudge applied to an interval end that sits on the singular abscissa
/// or on the arc-length feasibility boundary.
pub const BOUNDARY_SHRINK: f64 = 1e-9;

/// A closed interval of the profile parameter `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainInterval {
    pub lo: f64,
    pub hi: f64,
}

impl DomainInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(Error::Invalid(format!(
                "interval needs finite lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, u: f64) -> bool {
        self.lo <= u && u <= self.hi
    }

    /// `n` evenly spaced points including both ends (`n >= 2`), or the
    /// midpoint when `n == 1`.
    pub fn linspace(&self, n: usize) -> Vec<f64> {
        match n {
            0 => Vec::new(),
            1 => vec![0.5 * (self.lo + self.hi)],
            _ => (0..n)
                .map(|i| {
                    if i == n - 1 {
                        self.hi
                    } else {
                        self.lo + self.width() * i as f64 / (n - 1) as f64
                    }
                })
                .collect(),
        }
    }
}

impl fmt::Display for DomainInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Coordinates `(t, u)` on the surface: `t` is the angle of the parallel,
/// `u` the arc-length parameter along the meridian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub t: f64,
    pub u: f64,
}

impl SurfacePoint {
    pub fn new(t: f64, u: f64) -> Self {
        Self { t, u }
    }
}

/// `f` and its first two derivatives at one `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub f: f64,
    pub f_prime: f64,
    pub f_second: f64,
}

/// First fundamental form `E du² + 2F du dt + G dt²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricCoefficients {
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

/// The admissible profile `f(u)² = c·u² + d·u + k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticProfile {
    c: f64,
    d: f64,
    k: f64,
    sqrt_c: f64,
    delta: f64,
    sqrt_neg_delta: f64,
}

impl QuadraticProfile {
    /// Validates `c > 0`, `k > 0` and `d² - 4ck < 0`.
    pub fn new(c: f64, d: f64, k: f64) -> Result<Self> {
        if !(c.is_finite() && d.is_finite() && k.is_finite()) {
            return Err(Error::RejectedProfile(format!(
                "coefficients must be finite (c={c}, d={d}, k={k})"
            )));
        }
        if c <= 0.0 {
            return Err(Error::RejectedProfile(format!("c = {c} violates c > 0")));
        }
        if k <= 0.0 {
            return Err(Error::RejectedProfile(format!("k = {k} violates k > 0")));
        }
        let delta = d * d - 4.0 * c * k;
        if delta >= 0.0 {
            return Err(Error::RejectedProfile(format!(
                "discriminant d^2 - 4ck = {delta} must be negative \
                 (otherwise f'' <= 0 somewhere and a'(u) has no real constant)"
            )));
        }
        Ok(Self {
            c,
            d,
            k,
            sqrt_c: c.sqrt(),
            delta,
            sqrt_neg_delta: (-delta).sqrt(),
        })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn sqrt_c(&self) -> f64 {
        self.sqrt_c
    }

    /// `Δ = d² - 4ck`, always negative.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn sqrt_neg_delta(&self) -> f64 {
        self.sqrt_neg_delta
    }

    /// `f(u)² = c·u² + d·u + k`.
    #[inline]
    pub fn radius_squared(&self, u: f64) -> f64 {
        (self.c * u + self.d) * u + self.k
    }

    #[inline]
    pub fn radius(&self, u: f64) -> f64 {
        self.radius_squared(u).sqrt()
    }

    pub fn jet(&self, u: f64) -> Jet {
        let w = self.radius_squared(u);
        let f = w.sqrt();
        Jet {
            f,
            f_prime: (2.0 * self.c * u + self.d) / (2.0 * f),
            f_second: -self.delta / (4.0 * w * f),
        }
    }

    /// The abscissa `u* = -d/(2c)` where `f'` vanishes.
    pub fn singular_abscissa(&self) -> f64 {
        -self.d / (2.0 * self.c)
    }

    /// `1 - f'(u)²`, computed as `q(u) / (4 f²)` with
    /// `q(u) = 4c(1-c)u² + 4d(1-c)u + 4k - d²` to avoid cancellation.
    pub fn arc_length_slack(&self, u: f64) -> f64 {
        let one_minus_c = 1.0 - self.c;
        let q = 4.0 * self.c * one_minus_c * u * u
            + 4.0 * self.d * one_minus_c * u
            + (4.0 * self.k - self.d * self.d);
        q / (4.0 * self.radius_squared(u))
    }

    /// Where `f'² <= 1` holds. The quadratic `q(u)` has discriminant
    /// `16(1-c)Δ`, so for `c <= 1` every `u` is feasible and for `c > 1`
    /// the feasible set is the closed band `u* ± √(-Δ) / (2c√(c-1))`.
    pub fn feasible_band(&self) -> Option<(f64, f64)> {
        if self.c <= 1.0 {
            None
        } else {
            let half = self.sqrt_neg_delta / (2.0 * self.c * (self.c - 1.0).sqrt());
            let center = self.singular_abscissa();
            Some((center - half, center + half))
        }
    }

    /// The largest sub-interval of `requested` on which the arc-length
    /// condition holds and `f'` does not vanish.
    ///
    /// If `u*` sits exactly on an end of the result, that end is moved
    /// inward by [`BOUNDARY_SHRINK`]. If `u*` is interior, fails with
    /// [`Error::SingularitySplit`] carrying both sides.
    pub fn admissible_interval(&self, requested: DomainInterval) -> Result<DomainInterval> {
        let mut lo = requested.lo;
        let mut hi = requested.hi;
        if let Some((band_lo, band_hi)) = self.feasible_band() {
            lo = lo.max(band_lo);
            hi = hi.min(band_hi);
            if lo > hi {
                return Err(Error::EmptyDomain {
                    lo: requested.lo,
                    hi: requested.hi,
                });
            }
        }
        let singular = self.singular_abscissa();
        if lo < singular && singular < hi {
            return Err(Error::SingularitySplit {
                singular,
                below: DomainInterval { lo, hi: singular },
                above: DomainInterval { lo: singular, hi },
            });
        }
        let nudge = BOUNDARY_SHRINK * singular.abs().max(1.0);
        if lo == singular {
            lo += nudge;
        }
        if hi == singular {
            hi -= nudge;
        }
        if lo >= hi {
            return Err(Error::EmptyDomain {
                lo: requested.lo,
                hi: requested.hi,
            });
        }
        Ok(DomainInterval { lo, hi })
    }

    /// A default working interval on the side `u > u*`: `[u*+0.2, u*+2]`
    /// when every `u` is feasible, otherwise the inner 10%–90% of the
    /// feasible half-band.
    pub fn default_domain(&self) -> DomainInterval {
        let center = self.singular_abscissa();
        match self.feasible_band() {
            None => DomainInterval {
                lo: center + 0.2,
                hi: center + 2.0,
            },
            Some((_, band_hi)) => {
                let half = band_hi - center;
                DomainInterval {
                    lo: center + 0.1 * half,
                    hi: center + 0.9 * half,
                }
            }
        }
    }

    /// `g(u) = ∫_{u_ref}^{u} √(1 - f'(s)²) ds`, so `g(u_ref) = 0`.
    pub fn eval_g(&self, u: f64, u_ref: f64) -> Result<f64> {
        self.check_arc_length_path(u.min(u_ref), u.max(u_ref))?;
        quadrature::integrate(
            |s| self.arc_length_slack(s).max(0.0).sqrt(),
            u_ref,
            u,
            G_TOLERANCE,
        )
    }

    // `q` is concave for c > 1, so its minimum over a segment is attained at
    // an end; for c <= 1 it is positive everywhere.
    fn check_arc_length_path(&self, lo: f64, hi: f64) -> Result<()> {
        for u in [lo, hi] {
            let slack = self.arc_length_slack(u);
            if slack < -ARC_LENGTH_SLACK {
                return Err(Error::InfeasibleArcLength { u, slack });
            }
        }
        Ok(())
    }

    /// `K = -f''/f = Δ / (4 f⁴)`.
    pub fn gaussian_curvature(&self, u: f64) -> f64 {
        let w = self.radius_squared(u);
        self.delta / (4.0 * w * w)
    }

    pub fn metric_coefficients(&self, u: f64) -> MetricCoefficients {
        MetricCoefficients {
            e: 1.0,
            f: 0.0,
            g: self.radius_squared(u),
        }
    }

    /// The point `(f(u) cos t, f(u) sin t, g(u))` in space.
    pub fn embed(&self, pt: SurfacePoint, u_ref: f64) -> Result<[f64; 3]> {
        let z = self.eval_g(pt.u, u_ref)?;
        let r = self.radius(pt.u);
        let (s, c) = pt.t.sin_cos();
        Ok([r * c, r * s, z])
    }
}

/// Radius and curvature access shared by both profile kinds.
pub trait ProfileCurve {
    fn radius(&self, u: f64) -> f64;

    fn radius_second_derivative(&self, u: f64) -> f64;

    /// `K = -f''/f`.
    fn gaussian_curvature(&self, u: f64) -> f64 {
        -self.radius_second_derivative(u) / self.radius(u)
    }
}

impl ProfileCurve for QuadraticProfile {
    fn radius(&self, u: f64) -> f64 {
        QuadraticProfile::radius(self, u)
    }

    fn radius_second_derivative(&self, u: f64) -> f64 {
        self.jet(u).f_second
    }

    fn gaussian_curvature(&self, u: f64) -> f64 {
        QuadraticProfile::gaussian_curvature(self, u)
    }
}

#[derive(Clone)]
enum Evaluator {
    Closed(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
    /// Spline through `f²`; the radius is its square root.
    Tabulated(Arc<CubicSpline>),
}

/// An arbitrary profile radius `u ↦ f(u)` on a domain.
#[derive(Clone)]
pub struct GeneralProfile {
    name: String,
    evaluator: Evaluator,
    domain: DomainInterval,
}

impl fmt::Debug for GeneralProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.evaluator {
            Evaluator::Closed(_) => "closed",
            Evaluator::Tabulated(_) => "tabulated",
        };
        f.debug_struct("GeneralProfile")
            .field("name", &self.name)
            .field("kind", &kind)
            .field("domain", &self.domain)
            .finish()
    }
}

impl GeneralProfile {
    /// Wraps a closed-form radius. Fails if `f` is not positive and finite at
    /// the domain ends and a handful of interior points.
    pub fn from_fn<F>(name: impl Into<String>, domain: DomainInterval, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let name = name.into();
        if let Some(u) = domain
            .linspace(33)
            .into_iter()
            .find(|&u| !(f(u).is_finite() && f(u) > 0.0))
        {
            return Err(Error::Invalid(format!(
                "profile {name}: f({u}) = {} is not positive",
                f(u)
            )));
        }
        Ok(Self {
            name,
            evaluator: Evaluator::Closed(Arc::new(f)),
            domain,
        })
    }

    /// Interpolates tabulated `(u, f)` samples. `f²` is interpolated with a
    /// not-a-knot cubic spline, which keeps the interpolant C² and returns
    /// quadratic `f²` data exactly.
    pub fn from_samples(name: impl Into<String>, u: Vec<f64>, f: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if let Some(bad) = f.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::Invalid(format!(
                "profile {name}: sample radius {bad} is not positive"
            )));
        }
        let squared = f.iter().map(|v| v * v).collect();
        let spline = CubicSpline::new(u, squared)?;
        let domain = DomainInterval::new(spline.lo(), spline.hi())?;
        Ok(Self {
            name,
            evaluator: Evaluator::Tabulated(Arc::new(spline)),
            domain,
        })
    }

    /// The unit sphere's profile `f = cos u` on `[0.2, 1.2]`; `K ≡ 1`.
    pub fn sphere() -> Self {
        Self::from_fn("sphere", DomainInterval { lo: 0.2, hi: 1.2 }, f64::cos)
            .expect("cos is positive on [0.2, 1.2]")
    }

    /// The pseudosphere profile `f = e^u` on `[-2, -0.5]`; `K ≡ -1`.
    pub fn pseudosphere() -> Self {
        Self::from_fn(
            "pseudosphere",
            DomainInterval { lo: -2.0, hi: -0.5 },
            f64::exp,
        )
        .expect("exp is positive")
    }

    /// The radius of a quadratic profile viewed as a general one.
    pub fn from_quadratic(p: QuadraticProfile, domain: DomainInterval) -> Self {
        Self {
            name: format!("quadratic:{},{},{}", p.c(), p.d(), p.k()),
            evaluator: Evaluator::Closed(Arc::new(move |u| p.radius(u))),
            domain,
        }
    }

    /// Looks up a named built-in profile.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "sphere" => Some(Self::sphere()),
            "pseudosphere" => Some(Self::pseudosphere()),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> DomainInterval {
        self.domain
    }

    pub fn is_tabulated(&self) -> bool {
        matches!(self.evaluator, Evaluator::Tabulated(_))
    }

    pub fn eval(&self, u: f64) -> f64 {
        match &self.evaluator {
            Evaluator::Closed(f) => f(u),
            Evaluator::Tabulated(s) => s.eval(u).sqrt(),
        }
    }

    /// Step used by [`ProfileCurve::radius_second_derivative`].
    pub fn curvature_step(&self) -> f64 {
        (self.domain.width() / 64.0).min(1e-2)
    }
}

impl ProfileCurve for GeneralProfile {
    fn radius(&self, u: f64) -> f64 {
        self.eval(u)
    }

    /// Fourth-order five-point central difference.
    fn radius_second_derivative(&self, u: f64) -> f64 {
        let h = self.curvature_step();
        let f = |x: f64| self.eval(x);
        (-f(u + 2.0 * h) + 16.0 * f(u + h) - 30.0 * f(u) + 16.0 * f(u - h) - f(u - 2.0 * h))
            / (12.0 * h * h)
    }
}
