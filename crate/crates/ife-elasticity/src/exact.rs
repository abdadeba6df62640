//! The benchmark exact solution for the elasticity interface problem on an
//! elliptical interface.
//!
//! With the normalized radius `r(x, y) = sqrt(x^2/a^2 + y^2/b^2)` the
//! displacement is
//!
//! ```text
//! u_i = (a^2 b^2 / lambda-) r^alpha_i              inside  (r < 1),
//! u_i = (a^2 b^2 / lambda+) r^alpha_i + shift      outside (r > 1),
//! ```
//!
//! where `shift = (1/lambda- - 1/lambda+) a^2 b^2` makes the displacement
//! continuous across `r = 1`. When `mu+/mu- = lambda+/lambda-` the traction
//! is continuous as well and the pair solves the interface problem with the
//! body force `f = -div sigma(u)` computed per side below.

use nalgebra::{Matrix2, Point2, Vector2};

use crate::levelset::{LameField, Side};

/// Semi-axis of the benchmark interface. The divisor is exactly 6.28 (not
/// two pi): the interface is a deliberately near-half-radius circle,
/// `a = b ~ 0.500254`, so it never aligns with mesh lines.
#[allow(clippy::approx_constant)]
pub const BENCHMARK_SEMI_AXIS: f64 = std::f64::consts::PI / 6.28;

/// Exact displacement, body force and boundary trace of the benchmark
/// problem.
#[derive(Debug, Clone)]
pub struct ExactSolution {
    pub a: f64,
    pub b: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub lame: LameField,
}

impl ExactSolution {
    /// The configuration used by the reference convergence tables:
    /// `lambda = (1, 5)`, `mu = (2, 10)`, `a = b = pi / 6.28`,
    /// `alpha = (5, 7)`.
    pub fn benchmark() -> Self {
        let a = BENCHMARK_SEMI_AXIS;
        ExactSolution {
            a,
            b: a,
            alpha1: 5.0,
            alpha2: 7.0,
            lame: LameField::new(1.0, 5.0, 2.0, 10.0).unwrap(),
        }
    }

    pub fn new(a: f64, b: f64, alpha1: f64, alpha2: f64, lame: LameField) -> Self {
        ExactSolution {
            a,
            b,
            alpha1,
            alpha2,
            lame,
        }
    }

    /// Squared normalized radius `x^2/a^2 + y^2/b^2`.
    pub fn rho2(&self, p: Point2<f64>) -> f64 {
        p.x * p.x / (self.a * self.a) + p.y * p.y / (self.b * self.b)
    }

    /// Normalized radius; equals 1 on the interface.
    pub fn radius(&self, p: Point2<f64>) -> f64 {
        self.rho2(p).sqrt()
    }

    /// Side of a point relative to the interface `r = 1`.
    pub fn side_of(&self, p: Point2<f64>) -> Side {
        if self.rho2(p) < 1.0 {
            Side::Minus
        } else {
            Side::Plus
        }
    }

    fn coef(&self, side: Side) -> f64 {
        self.a * self.a * self.b * self.b / self.lame.lambda(side)
    }

    fn shift(&self, side: Side) -> f64 {
        match side {
            Side::Minus => 0.0,
            Side::Plus => {
                (1.0 / self.lame.lambda_minus - 1.0 / self.lame.lambda_plus)
                    * self.a
                    * self.a
                    * self.b
                    * self.b
            }
        }
    }

    fn alpha(&self, comp: usize) -> f64 {
        if comp == 0 {
            self.alpha1
        } else {
            self.alpha2
        }
    }

    /// `rho^alpha` with the `0^0 = 1`, `0^positive = 0` limits, so that the
    /// Hessian formulas stay finite at the origin for `alpha > 4`.
    fn rho_pow(rho: f64, alpha: f64) -> f64 {
        if rho == 0.0 {
            if alpha > 0.0 {
                0.0
            } else if alpha == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            rho.powf(alpha)
        }
    }

    /// Displacement on the given side (each side formula is smooth, so it
    /// extends across the interface).
    pub fn u(&self, side: Side, p: Point2<f64>) -> Vector2<f64> {
        let r = self.radius(p);
        let c = self.coef(side);
        let s = self.shift(side);
        Vector2::new(
            c * Self::rho_pow(r, self.alpha1) + s,
            c * Self::rho_pow(r, self.alpha2) + s,
        )
    }

    /// Displacement with the side chosen by the interface.
    pub fn u_at(&self, p: Point2<f64>) -> Vector2<f64> {
        self.u(self.side_of(p), p)
    }

    /// Boundary trace.
    pub fn g(&self, p: Point2<f64>) -> Vector2<f64> {
        self.u_at(p)
    }

    /// Jacobian of the displacement; row `i` is the gradient of `u_i`.
    ///
    /// For `f = C rho^alpha`: `f_x = C alpha rho^(alpha-2) x / a^2` and
    /// analogously in `y`.
    #[allow(clippy::needless_range_loop)]
    pub fn grad_u(&self, side: Side, p: Point2<f64>) -> Matrix2<f64> {
        let rho = self.radius(p);
        let c = self.coef(side);
        let (a2, b2) = (self.a * self.a, self.b * self.b);
        let mut j = Matrix2::zeros();
        for comp in 0..2 {
            let alpha = self.alpha(comp);
            let s = c * alpha * Self::rho_pow(rho, alpha - 2.0);
            j[(comp, 0)] = s * p.x / a2;
            j[(comp, 1)] = s * p.y / b2;
        }
        j
    }

    /// Hessians of the two displacement components.
    #[allow(clippy::needless_range_loop)]
    pub fn hess_u(&self, side: Side, p: Point2<f64>) -> [Matrix2<f64>; 2] {
        let rho = self.radius(p);
        let c = self.coef(side);
        let (a2, b2) = (self.a * self.a, self.b * self.b);
        let mut out = [Matrix2::zeros(); 2];
        for comp in 0..2 {
            let alpha = self.alpha(comp);
            let s1 = c * alpha * (alpha - 2.0) * Self::rho_pow(rho, alpha - 4.0);
            let s2 = c * alpha * Self::rho_pow(rho, alpha - 2.0);
            let xx = s1 * p.x * p.x / (a2 * a2) + s2 / a2;
            let yy = s1 * p.y * p.y / (b2 * b2) + s2 / b2;
            let xy = s1 * p.x * p.y / (a2 * b2);
            out[comp] = Matrix2::new(xx, xy, xy, yy);
        }
        out
    }

    /// Stress tensor `sigma(u)` on one side.
    pub fn stress(&self, side: Side, p: Point2<f64>) -> Matrix2<f64> {
        let j = self.grad_u(side, p);
        crate::poly::stress_of_jacobian(&j, self.lame.lambda(side), self.lame.mu(side))
    }

    /// Body force `f = -div sigma(u)` on one side, from the analytic second
    /// derivatives:
    ///
    /// ```text
    /// f1 = -[(lambda + 2 mu) u1_xx + mu u1_yy + (lambda + mu) u2_xy]
    /// f2 = -[(lambda + mu) u1_xy + mu u2_xx + (lambda + 2 mu) u2_yy]
    /// ```
    pub fn f(&self, side: Side, p: Point2<f64>) -> Vector2<f64> {
        let (lambda, mu) = (self.lame.lambda(side), self.lame.mu(side));
        let h = self.hess_u(side, p);
        let (u1, u2) = (&h[0], &h[1]);
        Vector2::new(
            -((lambda + 2.0 * mu) * u1[(0, 0)] + mu * u1[(1, 1)] + (lambda + mu) * u2[(0, 1)]),
            -((lambda + mu) * u1[(0, 1)] + mu * u2[(0, 0)] + (lambda + 2.0 * mu) * u2[(1, 1)]),
        )
    }

    /// Largest displacement mismatch across the interface over `n` samples.
    pub fn interface_continuity_residual(&self, n: usize) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let t = std::f64::consts::TAU * k as f64 / n as f64;
            let p = Point2::new(self.a * t.cos(), self.b * t.sin());
            let gap = self.u(Side::Plus, p) - self.u(Side::Minus, p);
            worst = worst.max(gap.norm());
        }
        worst
    }

    /// Largest relative mismatch between the analytic body force and a
    /// central-difference divergence of the stress, over `n` random-ish
    /// points per side.
    pub fn body_force_fd_residual(&self, n: usize, step: f64) -> f64 {
        let mut worst: f64 = 0.0;
        for side in [Side::Minus, Side::Plus] {
            for k in 0..n {
                // Low-discrepancy points in the sampling box of each side.
                let t = (k as f64 + 0.5) / n as f64;
                let ang = std::f64::consts::TAU * t * 7.3;
                let rad = match side {
                    Side::Minus => 0.15 + 0.7 * t,
                    Side::Plus => 1.3 + 0.9 * t,
                };
                let p = Point2::new(
                    self.a * rad.sqrt() * ang.cos(),
                    self.b * rad.sqrt() * ang.sin(),
                );
                let div_fd = |p: Point2<f64>| -> Vector2<f64> {
                    let sxp = self.stress(side, Point2::new(p.x + step, p.y));
                    let sxm = self.stress(side, Point2::new(p.x - step, p.y));
                    let syp = self.stress(side, Point2::new(p.x, p.y + step));
                    let sym = self.stress(side, Point2::new(p.x, p.y - step));
                    Vector2::new(
                        (sxp[(0, 0)] - sxm[(0, 0)]) / (2.0 * step)
                            + (syp[(0, 1)] - sym[(0, 1)]) / (2.0 * step),
                        (sxp[(1, 0)] - sxm[(1, 0)]) / (2.0 * step)
                            + (syp[(1, 1)] - sym[(1, 1)]) / (2.0 * step),
                    )
                };
                let want = self.f(side, p);
                let got = -div_fd(p);
                let scale = want.norm().max(1.0);
                worst = worst.max((got - want).norm() / scale);
            }
        }
        worst
    }
}
