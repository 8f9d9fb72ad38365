//! Numerical certification of the projection and the existence test.
//!
//! Every identity the construction relies on is evaluated on samples and
//! summarized as a [`ResidualReport`]. [`existence_classifier`] decides
//! whether an arbitrary profile admits such a map by testing `(f f')'' ≡ 0`
//! and fitting `f²` by a quadratic.

use std::fmt;
use std::ops::Range;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::profile::{
    DomainInterval, GeneralProfile, ProfileCurve, QuadraticProfile, SurfacePoint,
};
use crate::projection::{meridian_turning, meridian_turning_second, PlanePoint, Projection};

/// `‖Φ_u‖ - 1` and `‖Φ_t‖ - f` with central differences.
pub const ISOMETRY_FD_TOLERANCE: f64 = 1e-8;
/// Same residuals with the analytic Jacobian.
pub const ISOMETRY_ANALYTIC_TOLERANCE: f64 = 1e-12;
pub const STRAIGHTNESS_TOLERANCE: f64 = 1e-12;
/// Closed-form identities along the meridian.
pub const IDENTITY_TOLERANCE: f64 = 1e-10;
pub const ODE_TOLERANCE: f64 = 1e-8;

pub const DEFAULT_FD_STEP: f64 = 1e-5;
pub const CLASSIFIER_FD_STEP: f64 = 1e-3;
pub const CLASSIFIER_THRESHOLD: f64 = 1e-4;
pub const CLASSIFIER_SAMPLES: usize = 200;
/// A fitted `-Δ/4` must exceed the fit noise by this factor.
const FLATNESS_NOISE_FACTOR: f64 = 1e3;

/// Where a residual was observed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Location {
    Surface(SurfacePoint),
    Meridian(f64),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Surface(p) => write!(f, "(t={:.6}, u={:.6})", p.t, p.u),
            Location::Meridian(u) => write!(f, "u={u:.6}"),
        }
    }
}

/// Statistics of `|residual|` for one identity over a sample set.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub identity: String,
    pub max_abs_residual: f64,
    pub mean_abs_residual: f64,
    pub worst_point: Location,
    pub samples: usize,
}

impl ResidualReport {
    /// Builds the report. Any NaN residual is reported as an infinite max so
    /// the check fails.
    pub fn from_residuals<I>(identity: impl Into<String>, residuals: I) -> Option<Self>
    where
        I: IntoIterator<Item = (Location, f64)>,
    {
        let mut max = 0.0_f64;
        let mut sum = 0.0;
        let mut samples = 0;
        let mut worst = None;
        for (loc, r) in residuals {
            let r = if r.is_nan() { f64::INFINITY } else { r.abs() };
            if worst.is_none() || r > max {
                max = r;
                worst = Some(loc);
            }
            sum += r;
            samples += 1;
        }
        Some(Self {
            identity: identity.into(),
            max_abs_residual: max,
            mean_abs_residual: sum / samples as f64,
            worst_point: worst?,
            samples,
        })
    }

    pub fn passes(&self, tolerance: f64) -> bool {
        self.max_abs_residual < tolerance
    }
}

/// A tensor grid over `t × u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub t_range: (f64, f64),
    pub u_range: DomainInterval,
    pub nt: usize,
    pub nu: usize,
}

impl Grid {
    pub fn new(t_range: (f64, f64), u_range: DomainInterval, nt: usize, nu: usize) -> Result<Self> {
        if nt == 0 || nu == 0 {
            return Err(Error::Invalid(
                "grid needs at least one point per axis".into(),
            ));
        }
        if !(t_range.0.is_finite() && t_range.1.is_finite()) {
            return Err(Error::Invalid("grid t range must be finite".into()));
        }
        Ok(Self {
            t_range,
            u_range,
            nt,
            nu,
        })
    }

    pub fn t_values(&self) -> Vec<f64> {
        let (t0, t1) = self.t_range;
        if self.nt == 1 {
            return vec![t0];
        }
        (0..self.nt)
            .map(|i| t0 + (t1 - t0) * i as f64 / (self.nt - 1) as f64)
            .collect()
    }

    /// Row-major in `t`, then `u`.
    pub fn points(&self) -> Vec<SurfacePoint> {
        let us = if self.nu == 1 {
            vec![self.u_range.lo]
        } else {
            self.u_range.linspace(self.nu)
        };
        self.t_values()
            .into_iter()
            .flat_map(|t| us.iter().map(move |&u| SurfacePoint::new(t, u)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.nt * self.nu
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn norm(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

/// Residuals of `‖Φ_u‖ = 1` and `‖Φ_t‖ = f(u)` on the grid.
///
/// With `fd_step == 0.0` the analytic Jacobian is used; otherwise central
/// differences with that step (which must lie in `[1e-8, 1e-3]`).
pub fn check_local_isometry(
    proj: &Projection,
    grid: &Grid,
    fd_step: f64,
) -> Result<(ResidualReport, ResidualReport)> {
    if fd_step != 0.0 && !(1e-8..=1e-3).contains(&fd_step) {
        return Err(Error::Invalid(format!(
            "fd_step {fd_step} outside [1e-8, 1e-3] (use 0 for the analytic Jacobian)"
        )));
    }
    let stencil = DomainInterval {
        lo: grid.u_range.lo - fd_step,
        hi: grid.u_range.hi + fd_step,
    };
    match proj.profile.admissible_interval(stencil) {
        Ok(got) if got == stencil => {}
        _ => {
            return Err(Error::DomainExceeded {
                lo: stencil.lo,
                hi: stencil.hi,
            })
        }
    }

    let mut meridian = Vec::with_capacity(grid.len());
    let mut parallel = Vec::with_capacity(grid.len());
    for pt in grid.points() {
        let (d_t, d_u) = if fd_step == 0.0 {
            let j = proj.jacobian(pt);
            (j.d_t, j.d_u)
        } else {
            let h = fd_step;
            let diff =
                |a: PlanePoint, b: PlanePoint| [(a.x - b.x) / (2.0 * h), (a.y - b.y) / (2.0 * h)];
            (
                diff(
                    proj.project(SurfacePoint::new(pt.t + h, pt.u)),
                    proj.project(SurfacePoint::new(pt.t - h, pt.u)),
                ),
                diff(
                    proj.project(SurfacePoint::new(pt.t, pt.u + h)),
                    proj.project(SurfacePoint::new(pt.t, pt.u - h)),
                ),
            )
        };
        let loc = Location::Surface(pt);
        meridian.push((loc, norm(d_u) - 1.0));
        parallel.push((loc, norm(d_t) - proj.profile.radius(pt.u)));
    }
    let mode = if fd_step == 0.0 {
        "analytic"
    } else {
        "central difference"
    };
    Ok((
        ResidualReport::from_residuals(format!("|dPhi/du| = 1 ({mode})"), meridian)
            .ok_or_else(|| Error::Invalid("empty grid".into()))?,
        ResidualReport::from_residuals(format!("|dPhi/dt| = f(u) ({mode})"), parallel)
            .ok_or_else(|| Error::Invalid("empty grid".into()))?,
    ))
}

/// Largest distance of `Φ(t, u_i)` from the line through the first and last
/// image points.
pub fn check_meridian_straightness(
    proj: &Projection,
    t: f64,
    u_samples: &[f64],
) -> Result<ResidualReport> {
    if u_samples.len() < 3 {
        return Err(Error::Invalid(
            "straightness check needs at least 3 samples".into(),
        ));
    }
    let images: Vec<PlanePoint> = u_samples
        .iter()
        .map(|&u| proj.project(SurfacePoint::new(t, u)))
        .collect();
    let (first, last) = (images[0], images[images.len() - 1]);
    let chord = [last.x - first.x, last.y - first.y];
    let length = norm(chord);
    if length == 0.0 {
        return Err(Error::DegenerateLine);
    }
    let residuals = u_samples.iter().zip(&images).map(|(&u, q)| {
        let cross = (q.x - first.x) * chord[1] - (q.y - first.y) * chord[0];
        (Location::Surface(SurfacePoint::new(t, u)), cross / length)
    });
    Ok(
        ResidualReport::from_residuals(format!("meridian t={t:.6} is straight"), residuals)
            .expect("at least 3 samples"),
    )
}

/// Residuals of the closed-form identities along the meridian.
pub fn check_structural_identities(p: &QuadraticProfile, u_samples: &[f64]) -> Vec<ResidualReport> {
    let c_squared = -p.delta() / 4.0;
    let mut rows: [Vec<(Location, f64)>; 6] = Default::default();
    for &u in u_samples {
        let loc = Location::Meridian(u);
        let j = p.jet(u);
        let turn = meridian_turning(p, u);
        let a_second = meridian_turning_second(p, u);
        let (sa, ca) = turn.a.sin_cos();
        rows[0].push((loc, j.f_second - turn.a_prime * turn.a_prime * j.f));
        rows[1].push((loc, 2.0 * j.f_prime * turn.a_prime + j.f * a_second));
        rows[2].push((loc, a_second + 2.0 * j.f_prime * turn.a_prime / j.f));
        rows[3].push((loc, j.f_prime * ca - j.f * turn.a_prime * sa));
        rows[4].push((loc, j.f_prime * sa + j.f * turn.a_prime * ca - p.sqrt_c()));
        rows[5].push((loc, j.f_second * j.f * j.f * j.f - c_squared));
    }
    const NAMES: [&str; 6] = [
        "f'' = (a')^2 f",
        "2 f' a' + f a'' = 0",
        "a'' = -2 f' a' / f",
        "f' cos a - f a' sin a = 0",
        "f' sin a + f a' cos a = sqrt(c)",
        "f'' f^3 = -Delta/4",
    ];
    NAMES
        .iter()
        .zip(rows)
        .filter_map(|(name, r)| ResidualReport::from_residuals(*name, r))
        .collect()
}

/// Integrates `a'' = -2 (f'/f) a'` with the classical fourth-order
/// Runge–Kutta method from closed-form initial data at `u0`, and reports the
/// deviation from the closed-form `a(u)` at every step.
pub fn ode_oracle_a(p: &QuadraticProfile, u0: f64, u1: f64, step: f64) -> Result<ResidualReport> {
    if !(step > 0.0 && step <= 1e-2) {
        return Err(Error::Invalid(format!(
            "ODE step {step} must lie in (0, 1e-2]"
        )));
    }
    let start = meridian_turning(p, u0);
    let mut state = [start.a, start.a_prime];
    let mut residuals = vec![(Location::Meridian(u0), 0.0)];
    let span = u1 - u0;
    let steps = (span.abs() / step).ceil() as usize;
    if steps == 0 {
        return Ok(
            ResidualReport::from_residuals("RK4 a(u) vs closed form", residuals)
                .expect("non-empty"),
        );
    }
    let h = span / steps as f64;
    let rhs = |u: f64, y: [f64; 2]| {
        let j = p.jet(u);
        [y[1], -2.0 * j.f_prime / j.f * y[1]]
    };
    for i in 0..steps {
        let u = u0 + h * i as f64;
        let k1 = rhs(u, state);
        let k2 = rhs(
            u + 0.5 * h,
            [state[0] + 0.5 * h * k1[0], state[1] + 0.5 * h * k1[1]],
        );
        let k3 = rhs(
            u + 0.5 * h,
            [state[0] + 0.5 * h * k2[0], state[1] + 0.5 * h * k2[1]],
        );
        let k4 = rhs(u + h, [state[0] + h * k3[0], state[1] + h * k3[1]]);
        for (s, k) in state.iter_mut().zip(0..2) {
            *s += h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
        }
        let next = if i + 1 == steps {
            u1
        } else {
            u0 + h * (i + 1) as f64
        };
        residuals.push((
            Location::Meridian(next),
            state[0] - meridian_turning(p, next).a,
        ));
    }
    Ok(ResidualReport::from_residuals("RK4 a(u) vs closed form", residuals).expect("non-empty"))
}

/// Settings for [`existence_classifier`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifierConfig {
    pub n_samples: usize,
    pub fd_step: f64,
    /// Applied to `sup |(f f')''| / max(1, sup f²)`.
    pub threshold: f64,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self {
            n_samples: CLASSIFIER_SAMPLES,
            fd_step: CLASSIFIER_FD_STEP,
            threshold: CLASSIFIER_THRESHOLD,
        }
    }
}

/// Fitted `f² ≈ c·u² + d·u + k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticFit {
    pub c: f64,
    pub d: f64,
    pub k: f64,
    /// Largest `|f² - fit|` over the samples.
    pub max_misfit: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExistenceVerdict {
    pub exists: bool,
    /// `sup |(f f')''|` over the samples.
    pub residual_sup: f64,
    /// `residual_sup / max(1, sup f²)`, compared against the threshold.
    pub normalized_residual: f64,
    pub worst_u: f64,
    pub fitted: Option<QuadraticFit>,
    /// Why a fitted quadratic was not accepted, if it was not.
    pub rejection: Option<String>,
    pub curvature_range: (f64, f64),
}

impl fmt::Display for ExistenceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "exists: {}", self.exists)?;
        writeln!(
            f,
            "residual_sup: {:e} (at u={})",
            self.residual_sup, self.worst_u
        )?;
        writeln!(f, "normalized_residual: {:e}", self.normalized_residual)?;
        match &self.fitted {
            Some(fit) => writeln!(f, "fitted: c={} d={} k={}", fit.c, fit.d, fit.k)?,
            None => writeln!(f, "fitted: none")?,
        }
        if let Some(why) = &self.rejection {
            writeln!(f, "rejected: {why}")?;
        }
        write!(
            f,
            "curvature_range: [{}, {}]",
            self.curvature_range.0, self.curvature_range.1
        )
    }
}

/// `(f f')''` at `u`, computed as half the third derivative of `f²` by
/// the five-point central stencil with step `h`.
fn flatness_residual(gp: &GeneralProfile, u: f64, h: f64) -> f64 {
    let w = |x: f64| {
        let f = gp.eval(x);
        f * f
    };
    let third =
        (w(u + 2.0 * h) - 2.0 * w(u + h) + 2.0 * w(u - h) - w(u - 2.0 * h)) / (2.0 * h * h * h);
    0.5 * third
}

/// Decides whether a map that straightens meridians and preserves lengths
/// along meridians and parallels can exist for `gp` on its domain.
pub fn existence_classifier(
    gp: &GeneralProfile,
    config: ClassifierConfig,
) -> Result<ExistenceVerdict> {
    if config.n_samples < 10 {
        return Err(Error::Invalid(
            "classifier needs at least 10 samples".into(),
        ));
    }
    if !(config.fd_step > 0.0 && config.threshold > 0.0) {
        return Err(Error::Invalid(
            "fd_step and threshold must be positive".into(),
        ));
    }
    let domain = gp.domain();
    let reach = 2.0 * config.fd_step;
    let inner = DomainInterval::new(domain.lo + reach, domain.hi - reach).map_err(|_| {
        Error::InsufficientDomain {
            lo: domain.lo,
            hi: domain.hi,
            reach,
        }
    })?;
    let us = inner.linspace(config.n_samples);

    let mut residual_sup = 0.0_f64;
    let mut worst_u = us[0];
    let mut radius_sq_sup = 0.0_f64;
    let mut k_min = f64::INFINITY;
    let mut k_max = f64::NEG_INFINITY;
    for &u in &us {
        let r = flatness_residual(gp, u, config.fd_step).abs();
        if r > residual_sup || r.is_nan() {
            residual_sup = if r.is_nan() { f64::INFINITY } else { r };
            worst_u = u;
        }
        radius_sq_sup = radius_sq_sup.max(gp.eval(u).powi(2));
        let k = ProfileCurve::gaussian_curvature(gp, u);
        k_min = k_min.min(k);
        k_max = k_max.max(k);
    }
    let normalized_residual = residual_sup / radius_sq_sup.max(1.0);

    let mut verdict = ExistenceVerdict {
        exists: false,
        residual_sup,
        normalized_residual,
        worst_u,
        fitted: None,
        rejection: None,
        curvature_range: (k_min, k_max),
    };
    if normalized_residual >= config.threshold {
        return Ok(verdict);
    }

    let fit = fit_quadratic(&us, |u| gp.eval(u).powi(2));
    verdict.fitted = Some(fit);
    // f''·f³ = -Δ/4 must stand clear of the fit noise, otherwise the profile
    // is a (flat) cone or cylinder.
    let noise = fit.max_misfit.max(f64::EPSILON * radius_sq_sup) * radius_sq_sup.max(1.0);
    match QuadraticProfile::new(fit.c, fit.d, fit.k) {
        Err(e) => verdict.rejection = Some(e.to_string()),
        Ok(p) if -p.delta() / 4.0 <= FLATNESS_NOISE_FACTOR * noise => {
            verdict.rejection = Some(format!(
                "f'' f^3 = {:e} is indistinguishable from zero (flat profile)",
                -p.delta() / 4.0
            ));
        }
        Ok(p) => {
            if domain.contains(p.singular_abscissa()) {
                verdict.rejection = Some(format!(
                    "f' vanishes at u = {} inside the domain",
                    p.singular_abscissa()
                ));
            } else {
                verdict.exists = true;
            }
        }
    }
    Ok(verdict)
}

/// Least-squares `w(u) ≈ c·u² + d·u + k`, solved on a centred and scaled
/// abscissa for conditioning.
fn fit_quadratic(us: &[f64], w: impl Fn(f64) -> f64) -> QuadraticFit {
    let lo = us[0];
    let hi = us[us.len() - 1];
    let mid = 0.5 * (lo + hi);
    let half = (0.5 * (hi - lo)).max(f64::MIN_POSITIVE);

    let mut normal = [[0.0; 3]; 3];
    let mut rhs = [0.0; 3];
    for &u in us {
        let s = (u - mid) / half;
        let basis = [s * s, s, 1.0];
        let y = w(u);
        for i in 0..3 {
            rhs[i] += basis[i] * y;
            for j in 0..3 {
                normal[i][j] += basis[i] * basis[j];
            }
        }
    }
    let [alpha, beta, gamma] = solve3(normal, rhs);
    let c = alpha / (half * half);
    let d = beta / half - 2.0 * alpha * mid / (half * half);
    let k = gamma - beta * mid / half + alpha * mid * mid / (half * half);
    let max_misfit = us
        .iter()
        .map(|&u| (w(u) - ((alpha * ((u - mid) / half) + beta) * ((u - mid) / half) + gamma)).abs())
        .fold(0.0, f64::max);
    QuadraticFit {
        c,
        d,
        k,
        max_misfit,
    }
}

/// Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> [f64; 3] {
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("non-empty");
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let factor = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let tail: f64 = (row + 1..3).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    x
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureSummary {
    pub k_min: f64,
    pub k_max: f64,
    pub all_negative: bool,
}

/// Samples `K = -f''/f` at `n` evenly spaced points of `interval`.
pub fn curvature_report<P: ProfileCurve + ?Sized>(
    profile: &P,
    interval: DomainInterval,
    n: usize,
) -> CurvatureSummary {
    let mut k_min = f64::INFINITY;
    let mut k_max = f64::NEG_INFINITY;
    let mut all_negative = true;
    for u in interval.linspace(n.max(1)) {
        let k = profile.gaussian_curvature(u);
        k_min = k_min.min(k);
        k_max = k_max.max(k);
        all_negative &= k < 0.0;
    }
    CurvatureSummary {
        k_min,
        k_max,
        all_negative,
    }
}

/// Configuration of the full check battery run by [`verify_projection`].
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub nt: usize,
    pub nu: usize,
    pub fd_step: f64,
    pub seed: u64,
    /// Random meridian samples for the closed-form identities.
    pub identity_samples: usize,
    pub meridians: usize,
    pub ode_step: f64,
    pub t_range: (f64, f64),
    /// Defaults to [`QuadraticProfile::default_domain`].
    pub u_range: Option<DomainInterval>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            nt: 50,
            nu: 50,
            fd_step: DEFAULT_FD_STEP,
            seed: 0,
            identity_samples: 1000,
            meridians: 10,
            ode_step: 1e-3,
            t_range: (0.0, std::f64::consts::PI),
            u_range: None,
        }
    }
}

/// One row of a verification run.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub report: ResidualReport,
    pub tolerance: f64,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.report.passes(self.tolerance)
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<4} {:<44} max={:<10.3e} mean={:<10.3e} tol={:<8.0e} n={:<5} worst {}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.report.identity,
            self.report.max_abs_residual,
            self.report.mean_abs_residual,
            self.tolerance,
            self.report.samples,
            self.report.worst_point
        )
    }
}

/// Runs every check on `proj`: local isometry (finite-difference and
/// analytic), meridian straightness, the closed-form identities at random
/// `u`, and the ODE oracle over the working interval.
pub fn verify_projection(proj: &Projection, config: &SuiteConfig) -> Result<Vec<CheckOutcome>> {
    let u_range = config
        .u_range
        .unwrap_or_else(|| proj.profile.default_domain());
    let grid = Grid::new(config.t_range, u_range, config.nt, config.nu)?;
    let mut out = Vec::new();
    let (du, dt) = check_local_isometry(proj, &grid, config.fd_step)?;
    out.push(CheckOutcome {
        report: du,
        tolerance: ISOMETRY_FD_TOLERANCE,
    });
    out.push(CheckOutcome {
        report: dt,
        tolerance: ISOMETRY_FD_TOLERANCE,
    });
    let (du, dt) = check_local_isometry(proj, &grid, 0.0)?;
    out.push(CheckOutcome {
        report: du,
        tolerance: ISOMETRY_ANALYTIC_TOLERANCE,
    });
    out.push(CheckOutcome {
        report: dt,
        tolerance: ISOMETRY_ANALYTIC_TOLERANCE,
    });

    let u_line = u_range.linspace(config.nu.max(3));
    let mut worst: Option<ResidualReport> = None;
    for t in Grid::new(config.t_range, u_range, config.meridians.max(1), 1)?.t_values() {
        let r = check_meridian_straightness(proj, t, &u_line)?;
        if worst
            .as_ref()
            .is_none_or(|w| r.max_abs_residual > w.max_abs_residual)
        {
            worst = Some(r);
        }
    }
    if let Some(mut r) = worst {
        r.identity = format!("meridians straight ({} lines)", config.meridians.max(1));
        out.push(CheckOutcome {
            report: r,
            tolerance: STRAIGHTNESS_TOLERANCE,
        });
    }

    let mut rng = StdRng::seed_from_u64(config.seed);
    let us: Vec<f64> = (0..config.identity_samples.max(1))
        .map(|_| rng.gen_range::<f64, Range<f64>>(u_range.lo..u_range.hi))
        .collect();
    for report in check_structural_identities(&proj.profile, &us) {
        out.push(CheckOutcome {
            report,
            tolerance: IDENTITY_TOLERANCE,
        });
    }

    let report = ode_oracle_a(&proj.profile, u_range.lo, u_range.hi, config.ode_step)?;
    out.push(CheckOutcome {
        report,
        tolerance: ODE_TOLERANCE,
    });
    Ok(out)
}
