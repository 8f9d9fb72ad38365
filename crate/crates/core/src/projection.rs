//! The meridian-straightening projection `Φ(t, u) = (x, y)`.
//!
//! For `f² = c·u² + d·u + k` and `b(t) = -√c·t + c₀`,
//!
//! ```text
//! x(t, u) =  u·cos b(t) + ∫ √k·cos(θ₀ - b(t)) dt
//! y(t, u) = -u·sin b(t) + ∫ √k·sin(θ₀ - b(t)) dt
//! ```
//!
//! with `sin θ₀ = d / (2√(ck))`. Each meridian `t = const` is carried to a
//! straight line at unit speed, and each parallel `u = const` is traced at
//! speed `f(u)`. The antiderivatives are taken in closed form and anchored to
//! vanish at `t_base`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::profile::{QuadraticProfile, SurfacePoint};

/// Residual norm at which [`Projection::invert`] stops.
pub const INVERT_TOLERANCE: f64 = 1e-10;
pub const INVERT_MAX_ITERATIONS: usize = 50;
/// Jacobian determinants below this abort the Newton iteration.
pub const SINGULAR_JACOBIAN: f64 = 1e-14;

/// Which of the two solution families to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `b(t) = -√c·t + c₀`, meridian image direction `φ = -b`.
    CaseA,
    /// `b(t) = +√c·t + c₀`, meridian image direction `φ = π - b`.
    CaseB,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::CaseA => 1.0,
            Branch::CaseB => -1.0,
        }
    }
}

/// Choice between the two solutions of `sin θ₀ = d/(2√(ck))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Theta0Branch {
    /// `θ₀ = arcsin(d/(2√(ck)))`, in `(-π/2, π/2)`.
    #[default]
    Principal,
    /// `θ₀ = π - arcsin(d/(2√(ck)))`.
    Mirror,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionParams {
    pub c0: f64,
    pub theta0: f64,
    pub branch: Branch,
    /// Lower limit of the `t`-antiderivatives.
    pub t_base: f64,
}

impl ProjectionParams {
    /// Principal `θ₀`.
    pub fn new(p: &QuadraticProfile, c0: f64, branch: Branch, t_base: f64) -> Self {
        Self::with_theta0_branch(p, c0, branch, t_base, Theta0Branch::Principal)
    }

    pub fn with_theta0_branch(
        p: &QuadraticProfile,
        c0: f64,
        branch: Branch,
        t_base: f64,
        theta0_branch: Theta0Branch,
    ) -> Self {
        // |d / (2√(ck))| < 1 because d² < 4ck.
        let principal = (p.d() / (2.0 * (p.c() * p.k()).sqrt())).asin();
        let theta0 = match theta0_branch {
            Theta0Branch::Principal => principal,
            Theta0Branch::Mirror => PI - principal,
        };
        Self {
            c0,
            theta0,
            branch,
            t_base,
        }
    }

    /// `c₀ = 0`, `t_base = 0`, case A, principal `θ₀`.
    pub fn standard(p: &QuadraticProfile) -> Self {
        Self::new(p, 0.0, Branch::CaseA, 0.0)
    }

    /// Same parameters with `θ₀` shifted by `offset`. The result no longer
    /// satisfies `sin θ₀ = d/(2√(ck))` unless `offset` is a multiple of 2π;
    /// used to inject faults into verification runs.
    pub fn with_theta0_offset(mut self, offset: f64) -> Self {
        self.theta0 += offset;
        self
    }
}

/// Meridian turning angle `a(u)` and its derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeridianTurning {
    pub a: f64,
    pub a_prime: f64,
}

/// `a(u) = arctan((2c/√(-Δ))(u + d/(2c)))`, `a'(u) = (√(-Δ)/2) / f(u)²`.
pub fn meridian_turning(p: &QuadraticProfile, u: f64) -> MeridianTurning {
    MeridianTurning {
        a: ((2.0 * p.c() * u + p.d()) / p.sqrt_neg_delta()).atan(),
        a_prime: 0.5 * p.sqrt_neg_delta() / p.radius_squared(u),
    }
}

/// `a''(u) = -√(-Δ)·f'/f³`, the derivative of `a'` taken directly.
pub fn meridian_turning_second(p: &QuadraticProfile, u: f64) -> f64 {
    let j = p.jet(u);
    -p.sqrt_neg_delta() * j.f_prime / (j.f * j.f * j.f)
}

/// `(g₁, h₁)` is the unit direction of the meridian image; `(G₂, H₂)` are
/// the anchored antiderivatives of `(g₂', h₂') = √k·(cos r, sin r)` with
/// `r = θ₀ - b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameFunctions {
    pub g1: f64,
    pub h1: f64,
    pub big_g2: f64,
    pub big_h2: f64,
}

/// Plane coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &PlanePoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Partial derivatives of `Φ`: `d_t = ∂Φ/∂t`, `d_u = ∂Φ/∂u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jacobian {
    pub d_t: [f64; 2],
    pub d_u: [f64; 2],
}

impl Jacobian {
    pub fn determinant(&self) -> f64 {
        self.d_t[0] * self.d_u[1] - self.d_u[0] * self.d_t[1]
    }
}

/// A profile together with the constants that pin down one map `Φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    pub profile: QuadraticProfile,
    pub params: ProjectionParams,
}

impl Projection {
    pub fn new(profile: QuadraticProfile, params: ProjectionParams) -> Self {
        Self { profile, params }
    }

    pub fn standard(profile: QuadraticProfile) -> Self {
        Self::new(profile, ProjectionParams::standard(&profile))
    }

    /// `db/dt`: `-√c` in case A, `+√c` in case B.
    pub fn b_prime(&self) -> f64 {
        -self.params.branch.sign() * self.profile.sqrt_c()
    }

    pub fn angle_b(&self, t: f64) -> f64 {
        self.b_prime() * t + self.params.c0
    }

    /// `ω(t, u) = a(u) + b(t)`.
    pub fn omega(&self, t: f64, u: f64) -> f64 {
        meridian_turning(&self.profile, u).a + self.angle_b(t)
    }

    /// Direction angle of the meridian image, `φ = -b` (case A) or
    /// `φ = π - b` (case B).
    pub fn phi(&self, t: f64) -> f64 {
        match self.params.branch {
            Branch::CaseA => -self.angle_b(t),
            Branch::CaseB => PI - self.angle_b(t),
        }
    }

    /// Direction angle of the parallel image, so that
    /// `∂Φ/∂t = f(u)·(cos ψ, sin ψ)`.
    ///
    /// Expanding the map gives `ψ = a(u) - b(t)` for the principal `θ₀` and
    /// `ψ = π - a(u) - b(t)` for the mirrored one; it differs from
    /// [`omega`](Self::omega) in the sign of `b` but `∂ψ/∂u = ±a'(u)`
    /// either way.
    pub fn parallel_direction(&self, t: f64, u: f64) -> f64 {
        let a = meridian_turning(&self.profile, u).a;
        let b = self.angle_b(t);
        if self.params.theta0.cos() >= 0.0 {
            a - b
        } else {
            PI - a - b
        }
    }

    pub fn frame_functions(&self, t: f64) -> FrameFunctions {
        let sign = self.params.branch.sign();
        let b = self.angle_b(t);
        let r = self.params.theta0 - b;
        let r_base = self.params.theta0 - self.angle_b(self.params.t_base);
        let scale = sign * (self.profile.k() / self.profile.c()).sqrt();
        FrameFunctions {
            g1: sign * b.cos(),
            h1: -sign * b.sin(),
            big_g2: scale * (r.sin() - r_base.sin()),
            big_h2: -scale * (r.cos() - r_base.cos()),
        }
    }

    pub fn project(&self, pt: SurfacePoint) -> PlanePoint {
        let fr = self.frame_functions(pt.t);
        // `+ 0.0` folds a negative zero into zero.
        PlanePoint {
            x: pt.u * fr.g1 + fr.big_g2 + 0.0,
            y: pt.u * fr.h1 + fr.big_h2 + 0.0,
        }
    }

    pub fn jacobian(&self, pt: SurfacePoint) -> Jacobian {
        let sign = self.params.branch.sign();
        let b = self.angle_b(pt.t);
        let (sb, cb) = b.sin_cos();
        let (sr, cr) = (self.params.theta0 - b).sin_cos();
        let sqrt_k = self.profile.k().sqrt();
        // (g₁', h₁') = √c·(sin b, cos b) in both cases.
        let speed = pt.u * self.profile.sqrt_c();
        Jacobian {
            d_t: [speed * sb + sqrt_k * cr, speed * cb + sqrt_k * sr],
            d_u: [sign * cb, -sign * sb],
        }
    }

    /// Newton iteration for `Φ(t, u) = target` starting at `seed`.
    ///
    /// `Φ` is only locally injective (it repeats with period `2π/√c` in
    /// the angle `b`), so the seed picks the sheet; the returned `t` is not
    /// reduced.
    pub fn invert(&self, target: PlanePoint, seed: SurfacePoint) -> Result<SurfacePoint> {
        let mut pt = seed;
        let mut residual = self.residual(pt, target);
        for iteration in 0..=INVERT_MAX_ITERATIONS {
            let norm = residual[0].hypot(residual[1]);
            if norm <= INVERT_TOLERANCE {
                return Ok(pt);
            }
            if iteration == INVERT_MAX_ITERATIONS {
                break;
            }
            let jac = self.jacobian(pt);
            let det = jac.determinant();
            if det.abs() < SINGULAR_JACOBIAN || !det.is_finite() {
                return Err(Error::NoConvergence {
                    iterations: iteration,
                    residual: norm,
                });
            }
            // Solve [d_t d_u]·(Δt, Δu) = -residual.
            let dt = -(residual[0] * jac.d_u[1] - jac.d_u[0] * residual[1]) / det;
            let du = -(jac.d_t[0] * residual[1] - residual[0] * jac.d_t[1]) / det;

            // Backtrack while the step makes things worse.
            let mut scale = 1.0;
            loop {
                let trial = SurfacePoint::new(pt.t + scale * dt, pt.u + scale * du);
                let trial_residual = self.residual(trial, target);
                if trial_residual[0].hypot(trial_residual[1]) < norm || scale < 1.0 / 64.0 {
                    pt = trial;
                    residual = trial_residual;
                    break;
                }
                scale *= 0.5;
            }
        }
        Err(Error::NoConvergence {
            iterations: INVERT_MAX_ITERATIONS,
            residual: residual[0].hypot(residual[1]),
        })
    }

    fn residual(&self, pt: SurfacePoint, target: PlanePoint) -> [f64; 2] {
        let q = self.project(pt);
        [q.x - target.x, q.y - target.y]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6};

    fn fig1() -> QuadraticProfile {
        QuadraticProfile::new(1.0, 0.0, 1.0).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn theta0_values() {
        let q = |c, d, k| QuadraticProfile::new(c, d, k).unwrap();
        assert_eq!(ProjectionParams::standard(&fig1()).theta0, 0.0);
        let p = q(1.0, 1.0, 1.0);
        assert!(close(
            ProjectionParams::standard(&p).theta0,
            FRAC_PI_6,
            1e-15
        ));
        let p = q(4.0, 2.0, 1.0);
        assert!(close(
            ProjectionParams::standard(&p).theta0,
            std::f64::consts::FRAC_PI_6,
            1e-7
        ));
        let m =
            ProjectionParams::with_theta0_branch(&p, 0.0, Branch::CaseA, 0.0, Theta0Branch::Mirror);
        assert!(close(m.theta0.sin(), 0.5, 1e-15));
        assert!(close(m.theta0, 5.0 * FRAC_PI_6, 1e-15));
    }

    #[test]
    fn turning_angle() {
        let t = meridian_turning(&fig1(), 1.0);
        assert!(close(t.a, FRAC_PI_4, 1e-15) && close(t.a_prime, 0.5, 1e-15));
        let p = QuadraticProfile::new(1.0, 1.0, 1.0).unwrap();
        let t = meridian_turning(&p, 0.0);
        assert!(
            close(t.a, std::f64::consts::FRAC_PI_6, 1e-7) && close(t.a_prime, 0.866_025_4, 1e-7)
        );
        assert_eq!(
            meridian_turning(&fig1(), 0.0),
            MeridianTurning {
                a: 0.0,
                a_prime: 1.0
            }
        );
        for u in [-2.0, 0.3, 1.7] {
            let j = p.jet(u);
            let t = meridian_turning(&p, u);
            assert!(close(t.a_prime * t.a_prime, j.f_second / j.f, 1e-12));
        }
    }

    #[test]
    fn angle_b_branches() {
        let pa = Projection::standard(fig1());
        assert!(close(pa.angle_b(FRAC_PI_2), -FRAC_PI_2, 1e-15));
        let p4 = QuadraticProfile::new(4.0, 0.0, 1.0).unwrap();
        let proj = Projection::new(p4, ProjectionParams::new(&p4, 1.0, Branch::CaseA, 0.0));
        assert_eq!(proj.angle_b(0.5), 0.0);
        let pb = Projection::new(
            fig1(),
            ProjectionParams::new(&fig1(), 0.0, Branch::CaseB, 0.0),
        );
        assert!(close(pb.angle_b(FRAC_PI_2), FRAC_PI_2, 1e-15));
    }

    #[test]
    fn omega_and_phi() {
        let proj = Projection::standard(fig1());
        assert!(close(proj.omega(FRAC_PI_2, 1.0), -FRAC_PI_4, 1e-15));
        assert_eq!(proj.omega(0.0, 0.0), 0.0);
        assert!(close(proj.phi(FRAC_PI_2), FRAC_PI_2, 1e-15));
    }

    #[test]
    fn frame_function_values() {
        let proj = Projection::standard(fig1());
        let expect = |t: f64, want: [f64; 4]| {
            let fr = proj.frame_functions(t);
            let got = [fr.g1, fr.h1, fr.big_g2, fr.big_h2];
            for (g, w) in got.iter().zip(want) {
                assert!(close(*g, w, 1e-15), "t={t}: {got:?} vs {want:?}");
            }
        };
        expect(FRAC_PI_2, [0.0, 1.0, 1.0, 1.0]);
        expect(0.0, [1.0, 0.0, 0.0, 0.0]);
        expect(PI, [-1.0, 0.0, 0.0, 2.0]);
    }

    #[test]
    fn project_spot_values() {
        let proj = Projection::standard(fig1());
        let at = |t, u| proj.project(SurfacePoint::new(t, u));
        assert_eq!(at(0.0, 1.0), PlanePoint::new(1.0, 0.0));
        let q = at(FRAC_PI_2, 1.0);
        assert!(close(q.x, 1.0, 1e-15) && close(q.y, 2.0, 1e-15));
        let q = at(PI, 0.5);
        assert!(close(q.x, -0.5, 1e-15) && close(q.y, 2.0, 1e-15));
    }

    #[test]
    fn jacobian_spot_values() {
        let proj = Projection::standard(fig1());
        let j = proj.jacobian(SurfacePoint::new(FRAC_PI_2, 1.0));
        assert!(close(j.d_u[0], 0.0, 1e-15) && close(j.d_u[1], 1.0, 1e-15));
        assert!(close(j.d_t[0], -1.0, 1e-15) && close(j.d_t[1], 1.0, 1e-15));
        // At the vertex the parallel image leaves along +x.
        let j = proj.jacobian(SurfacePoint::new(0.0, 0.0));
        assert_eq!(j.d_u, [1.0, 0.0]);
        assert_eq!(j.d_t, [1.0, 0.0]);
    }

    #[test]
    fn parallel_direction_matches_jacobian() {
        let p = QuadraticProfile::new(1.3, -0.4, 0.8).unwrap();
        for branch in [Branch::CaseA, Branch::CaseB] {
            for tb in [Theta0Branch::Principal, Theta0Branch::Mirror] {
                let proj = Projection::new(
                    p,
                    ProjectionParams::with_theta0_branch(&p, 0.3, branch, 0.1, tb),
                );
                for (t, u) in [(0.0, 0.5), (1.2, 0.9), (-2.0, 0.3)] {
                    let jac = proj.jacobian(SurfacePoint::new(t, u));
                    let psi = proj.parallel_direction(t, u);
                    let f = p.radius(u);
                    assert!(close(jac.d_t[0], f * psi.cos(), 1e-12));
                    assert!(close(jac.d_t[1], f * psi.sin(), 1e-12));
                }
            }
        }
    }

    #[test]
    fn invert_examples() {
        let proj = Projection::standard(fig1());
        let got = proj
            .invert(PlanePoint::new(1.0, 2.0), SurfacePoint::new(1.4, 0.9))
            .unwrap();
        assert!(close(got.t, FRAC_PI_2, 1e-9) && close(got.u, 1.0, 1e-9));
        let got = proj
            .invert(PlanePoint::new(1.0, 0.0), SurfacePoint::new(0.1, 0.9))
            .unwrap();
        assert!(close(got.t, 0.0, 1e-9) && close(got.u, 1.0, 1e-9));
    }

    #[test]
    fn invert_fails_at_singular_jacobian() {
        // det = f·sin a vanishes at u* = 0.
        let proj = Projection::standard(fig1());
        let err = proj
            .invert(PlanePoint::new(5.0, 5.0), SurfacePoint::new(0.0, 0.0))
            .unwrap_err();
        assert!(matches!(err, Error::NoConvergence { .. }));
    }
}
