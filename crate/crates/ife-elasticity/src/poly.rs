//! Element-local polynomial spaces.
//!
//! All polynomials are expressed in scaled local coordinates
//! `xi = (X - origin) / h` with `origin` at the element's lower-left corner,
//! so coefficients stay O(1) on every mesh level. Physical derivatives pick
//! up the `1/h` chain-rule factors.

use nalgebra::{Matrix2, Point2, Vector2};

use crate::mesh::SpaceKind;

/// Monomial basis of one of the three local spaces.
///
/// * linear: `{1, x, y}`
/// * bilinear: `{1, x, y, xy}`
/// * rotated Q1: `{1, x, y, x^2 - y^2}`
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Linear,
    Bilinear,
    RotatedQ1,
}

impl Basis {
    pub fn for_space(space: SpaceKind) -> Self {
        match space {
            SpaceKind::Linear => Basis::Linear,
            SpaceKind::Bilinear => Basis::Bilinear,
            SpaceKind::RotatedQ1 => Basis::RotatedQ1,
        }
    }

    /// Number of monomials.
    pub fn len(&self) -> usize {
        match self {
            Basis::Linear => 3,
            Basis::Bilinear | Basis::RotatedQ1 => 4,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn eval(&self, k: usize, xi: f64, eta: f64) -> f64 {
        match k {
            0 => 1.0,
            1 => xi,
            2 => eta,
            3 => match self {
                Basis::Bilinear => xi * eta,
                Basis::RotatedQ1 => xi * xi - eta * eta,
                Basis::Linear => unreachable!("linear basis has 3 monomials"),
            },
            _ => unreachable!(),
        }
    }

    /// Gradient of monomial `k` with respect to the local coordinates.
    fn grad(&self, k: usize, xi: f64, eta: f64) -> (f64, f64) {
        match k {
            0 => (0.0, 0.0),
            1 => (1.0, 0.0),
            2 => (0.0, 1.0),
            3 => match self {
                Basis::Bilinear => (eta, xi),
                Basis::RotatedQ1 => (2.0 * xi, -2.0 * eta),
                Basis::Linear => unreachable!(),
            },
            _ => unreachable!(),
        }
    }

    /// Hessian `(d_xx, d_xy, d_yy)` of monomial `k` in local coordinates.
    fn hess(&self, k: usize) -> (f64, f64, f64) {
        if k < 3 {
            return (0.0, 0.0, 0.0);
        }
        match self {
            Basis::Bilinear => (0.0, 1.0, 0.0),
            Basis::RotatedQ1 => (2.0, 0.0, -2.0),
            Basis::Linear => unreachable!(),
        }
    }
}

/// Scaled local coordinate frame of one element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalFrame {
    pub origin: Point2<f64>,
    pub h: f64,
}

impl LocalFrame {
    pub fn to_local(&self, p: Point2<f64>) -> (f64, f64) {
        (
            (p.x - self.origin.x) / self.h,
            (p.y - self.origin.y) / self.h,
        )
    }
}

/// A scalar polynomial in one local basis.
#[derive(Debug, Clone, Copy)]
pub struct ScalarPoly {
    pub basis: Basis,
    pub frame: LocalFrame,
    /// Coefficients over the monomials; unused entries stay zero.
    pub coeffs: [f64; 4],
}

impl ScalarPoly {
    pub fn zero(basis: Basis, frame: LocalFrame) -> Self {
        ScalarPoly {
            basis,
            frame,
            coeffs: [0.0; 4],
        }
    }

    pub fn eval(&self, p: Point2<f64>) -> f64 {
        let (xi, eta) = self.frame.to_local(p);
        (0..self.basis.len())
            .map(|k| self.coeffs[k] * self.basis.eval(k, xi, eta))
            .sum()
    }

    /// Gradient in physical coordinates.
    pub fn grad(&self, p: Point2<f64>) -> Vector2<f64> {
        let (xi, eta) = self.frame.to_local(p);
        let mut g = Vector2::zeros();
        for k in 0..self.basis.len() {
            let (gx, gy) = self.basis.grad(k, xi, eta);
            g.x += self.coeffs[k] * gx;
            g.y += self.coeffs[k] * gy;
        }
        g / self.frame.h
    }

    /// Hessian in physical coordinates.
    pub fn hess(&self, _p: Point2<f64>) -> Matrix2<f64> {
        let s = 1.0 / (self.frame.h * self.frame.h);
        let mut hxx = 0.0;
        let mut hxy = 0.0;
        let mut hyy = 0.0;
        for k in 0..self.basis.len() {
            let (a, b, c) = self.basis.hess(k);
            hxx += self.coeffs[k] * a;
            hxy += self.coeffs[k] * b;
            hyy += self.coeffs[k] * c;
        }
        Matrix2::new(hxx, hxy, hxy, hyy) * s
    }
}

/// A 2-component vector polynomial; rows of [`VectorPoly::grad`] are the
/// gradients of the components.
#[derive(Debug, Clone, Copy)]
pub struct VectorPoly {
    pub basis: Basis,
    pub frame: LocalFrame,
    /// `coeffs[c][k]` multiplies monomial `k` in component `c`.
    pub coeffs: [[f64; 4]; 2],
}

impl VectorPoly {
    pub fn zero(basis: Basis, frame: LocalFrame) -> Self {
        VectorPoly {
            basis,
            frame,
            coeffs: [[0.0; 4]; 2],
        }
    }

    pub fn component(&self, c: usize) -> ScalarPoly {
        ScalarPoly {
            basis: self.basis,
            frame: self.frame,
            coeffs: self.coeffs[c],
        }
    }

    /// Adds `w * psi` to component `c`.
    pub fn add_scaled_scalar(&mut self, c: usize, psi: &[f64; 4], w: f64) {
        for (ck, pk) in self.coeffs[c].iter_mut().zip(psi) {
            *ck += w * pk;
        }
    }

    pub fn add_scaled(&mut self, other: &VectorPoly, w: f64) {
        debug_assert_eq!(self.basis, other.basis);
        for c in 0..2 {
            for k in 0..4 {
                self.coeffs[c][k] += w * other.coeffs[c][k];
            }
        }
    }

    pub fn eval(&self, p: Point2<f64>) -> Vector2<f64> {
        let (xi, eta) = self.frame.to_local(p);
        let mut v = Vector2::zeros();
        for k in 0..self.basis.len() {
            let b = self.basis.eval(k, xi, eta);
            v.x += self.coeffs[0][k] * b;
            v.y += self.coeffs[1][k] * b;
        }
        v
    }

    /// Jacobian in physical coordinates; row `i` is the gradient of
    /// component `i`.
    pub fn grad(&self, p: Point2<f64>) -> Matrix2<f64> {
        let (xi, eta) = self.frame.to_local(p);
        let mut j = Matrix2::zeros();
        for k in 0..self.basis.len() {
            let (gx, gy) = self.basis.grad(k, xi, eta);
            j[(0, 0)] += self.coeffs[0][k] * gx;
            j[(0, 1)] += self.coeffs[0][k] * gy;
            j[(1, 0)] += self.coeffs[1][k] * gx;
            j[(1, 1)] += self.coeffs[1][k] * gy;
        }
        j / self.frame.h
    }

    /// Hessians in physical coordinates, one per component.
    pub fn hess(&self, p: Point2<f64>) -> [Matrix2<f64>; 2] {
        [self.component(0).hess(p), self.component(1).hess(p)]
    }

    /// Coefficient vector of the second-degree monomial (`xy` or
    /// `x^2 - y^2`); zero for the linear basis.
    pub fn second_degree_coeff(&self) -> Vector2<f64> {
        Vector2::new(self.coeffs[0][3], self.coeffs[1][3])
    }
}

/// Coefficients of the scalar Lagrange basis of `basis` at the given sites:
/// `result[i]` is the coefficient vector of the shape function that is 1 at
/// `sites[i]` and 0 at the others.
pub fn lagrange_scalar_basis(
    basis: Basis,
    frame: LocalFrame,
    sites: &[Point2<f64>],
) -> Vec<[f64; 4]> {
    let m = basis.len();
    assert_eq!(sites.len(), m, "need one site per monomial");
    let mut v = nalgebra::DMatrix::<f64>::zeros(m, m);
    for (r, &p) in sites.iter().enumerate() {
        let (xi, eta) = frame.to_local(p);
        for k in 0..m {
            v[(r, k)] = basis.eval(k, xi, eta);
        }
    }
    let inv = v
        .lu()
        .try_inverse()
        .expect("degree-of-freedom sites are unisolvent for the standard basis");
    (0..m)
        .map(|i| {
            let mut c = [0.0; 4];
            for k in 0..m {
                c[k] = inv[(k, i)];
            }
            c
        })
        .collect()
}

/// Stress tensor `sigma(v) = lambda div(v) I + 2 mu eps(v)` of a vector
/// polynomial evaluated at a point.
pub fn stress(poly: &VectorPoly, p: Point2<f64>, lambda: f64, mu: f64) -> Matrix2<f64> {
    let j = poly.grad(p);
    stress_of_jacobian(&j, lambda, mu)
}

/// Stress tensor built from a displacement Jacobian (row `i` = grad of
/// component `i`).
pub fn stress_of_jacobian(j: &Matrix2<f64>, lambda: f64, mu: f64) -> Matrix2<f64> {
    let div = j[(0, 0)] + j[(1, 1)];
    let eps = (j + j.transpose()) * 0.5;
    Matrix2::identity() * (lambda * div) + eps * (2.0 * mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn frame() -> LocalFrame {
        LocalFrame {
            origin: Point2::new(1.0, 2.0),
            h: 0.5,
        }
    }

    #[test]
    fn bilinear_eval_and_derivatives() {
        // v1 = xi*eta, v2 = xi + 2*eta in local coordinates.
        let mut p = VectorPoly::zero(Basis::Bilinear, frame());
        p.coeffs[0][3] = 1.0;
        p.coeffs[1][1] = 1.0;
        p.coeffs[1][2] = 2.0;

        let x = Point2::new(1.25, 2.25); // xi = eta = 0.5
        assert_relative_eq!(p.eval(x).x, 0.25);
        assert_relative_eq!(p.eval(x).y, 1.5);

        let j = p.grad(x);
        // d(xi*eta)/dx = eta / h = 1.0 etc.
        assert_relative_eq!(j[(0, 0)], 1.0);
        assert_relative_eq!(j[(0, 1)], 1.0);
        assert_relative_eq!(j[(1, 0)], 2.0);
        assert_relative_eq!(j[(1, 1)], 4.0);

        let h = p.hess(x);
        assert_relative_eq!(h[0][(0, 1)], 4.0); // 1/h^2
        assert_relative_eq!(h[0][(0, 0)], 0.0);
        assert_relative_eq!(h[1][(0, 1)], 0.0);
    }

    #[test]
    fn rotated_q1_derivatives() {
        let mut p = VectorPoly::zero(Basis::RotatedQ1, frame());
        p.coeffs[0][3] = 2.0; // 2(xi^2 - eta^2)
        let x = Point2::new(1.25, 2.125); // xi = 0.5, eta = 0.25
        let j = p.grad(x);
        assert_relative_eq!(j[(0, 0)], 2.0 * 2.0 * 0.5 / 0.5);
        assert_relative_eq!(j[(0, 1)], -2.0 * 2.0 * 0.25 / 0.5);
        let h = p.hess(x);
        assert_relative_eq!(h[0][(0, 0)], 2.0 * 2.0 / 0.25);
        assert_relative_eq!(h[0][(1, 1)], -2.0 * 2.0 / 0.25);
        assert_relative_eq!(h[0][(0, 1)], 0.0);
    }

    #[test]
    fn linear_second_derivatives_vanish() {
        let mut p = VectorPoly::zero(Basis::Linear, frame());
        p.coeffs[0][1] = 3.0;
        p.coeffs[1][2] = -1.0;
        let h = p.hess(Point2::new(1.1, 2.3));
        assert_eq!(h[0], Matrix2::zeros());
        assert_eq!(h[1], Matrix2::zeros());
    }

    #[test]
    fn lagrange_basis_kronecker() {
        let f = LocalFrame {
            origin: Point2::new(0.0, 0.0),
            h: 1.0,
        };
        // Rotated Q1 basis at the four edge midpoints of the unit square.
        let sites = [
            Point2::new(0.5, 0.0),
            Point2::new(1.0, 0.5),
            Point2::new(0.5, 1.0),
            Point2::new(0.0, 0.5),
        ];
        let coeffs = lagrange_scalar_basis(Basis::RotatedQ1, f, &sites);
        for (i, c) in coeffs.iter().enumerate() {
            let psi = ScalarPoly {
                basis: Basis::RotatedQ1,
                frame: f,
                coeffs: *c,
            };
            for (j, &s) in sites.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_relative_eq!(psi.eval(s), expect, epsilon = 1e-13);
            }
        }
        // Known closed form for the bottom-midpoint shape function.
        let psi0 = ScalarPoly {
            basis: Basis::RotatedQ1,
            frame: f,
            coeffs: coeffs[0],
        };
        assert_relative_eq!(psi0.eval(Point2::new(0.25, 0.25)), 0.75 + 0.25 - 0.5 - (0.0625 - 0.0625), epsilon = 1e-13);
    }

    #[test]
    fn stress_of_linear_field() {
        // v = (x, 0): div = 1, eps = diag(1, 0).
        let mut p = VectorPoly::zero(Basis::Linear, frame());
        p.coeffs[0][1] = frame().h; // x in physical coords
        let s = stress(&p, Point2::new(1.2, 2.2), 1.0, 2.0);
        assert_relative_eq!(s[(0, 0)], 1.0 + 4.0, epsilon = 1e-14);
        assert_relative_eq!(s[(1, 1)], 1.0, epsilon = 1e-14);
        assert_relative_eq!(s[(0, 1)], 0.0, epsilon = 1e-14);
    }
}
