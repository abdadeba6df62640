//! Vector shape functions: standard polynomials on uncut elements and
//! immersed (piecewise polynomial) shape functions on cut elements.
//!
//! On a cut element the shape function is a pair of polynomials glued across
//! the chord `l`: the plus piece interpolates the plus-side nodal values
//! directly, the minus piece adds `L(X) c0`, and the unknown plus-side
//! coefficients at minus-side sites solve the block system
//! `(Kbar + Lbar PsiBar^T) c = b`. The system matrix is a rank-2 update of a
//! block-diagonal matrix, so `c` comes from the closed-form Sherman-Morrison
//! expression using only 2x2 inverses; solvability is equivalent to the
//! invertibility of `Xi(F)`.

use nalgebra::{Matrix2, Point2, SMatrix, Vector2};

use crate::cut::InterfaceElementData;
use crate::error::{Error, Result};
use crate::jump::{build_jump_matrices, JumpMatrices};
use crate::levelset::{LameField, Side};
use crate::mesh::{ElemGeom, SpaceKind};
use crate::poly::{lagrange_scalar_basis, stress, Basis, VectorPoly};

/// The `2 |I|` standard vector shape functions of one element: the first
/// `|I|` carry the scalar basis in component 0, the last `|I|` in
/// component 1.
pub fn standard_shapes(
    space: SpaceKind,
    geom: &ElemGeom,
    sites: &[Point2<f64>],
) -> Vec<VectorPoly> {
    let basis = Basis::for_space(space);
    let frame = geom.frame();
    let scalar = lagrange_scalar_basis(basis, frame, sites);
    let m = sites.len();
    let mut shapes = Vec::with_capacity(2 * m);
    for c in 0..2 {
        for psi in &scalar {
            let mut p = VectorPoly::zero(basis, frame);
            p.coeffs[c] = *psi;
            shapes.push(p);
        }
    }
    shapes
}

/// Where the traction jump condition is enforced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TractionPoint {
    /// The case-dependent point `F0` that guarantees solvability for the
    /// bilinear and rotated Q1 spaces.
    CaseOptimal,
    /// The chord midpoint `(D + E) / 2`, reproducing the earlier
    /// midpoint-based construction for cross-checks.
    ChordMidpoint,
}

/// Immersed shape functions of one cut element.
#[derive(Debug, Clone)]
pub struct IfeShapeSet {
    pub data: InterfaceElementData,
    pub jm: JumpMatrices,
    /// Per shape function: (minus piece, plus piece).
    pub pieces: Vec<(VectorPoly, VectorPoly)>,
    /// Per shape function: the coefficient of the line function `L`.
    pub c0: Vec<Vector2<f64>>,
    /// Per shape function: plus-piece coefficients at the minus-side sites
    /// (ordered as `data.i_minus`).
    pub c: Vec<Vec<Vector2<f64>>>,
}

/// Constructs the immersed shape functions with the traction condition at
/// the case-optimal point `F0`.
pub fn construct_ife_shapes(data: &InterfaceElementData, mat: &LameField) -> Result<IfeShapeSet> {
    construct_ife_shapes_at(data, mat, TractionPoint::CaseOptimal)
}

/// Constructs the immersed shape functions with a selectable traction point.
pub fn construct_ife_shapes_at(
    data: &InterfaceElementData,
    mat: &LameField,
    at: TractionPoint,
) -> Result<IfeShapeSet> {
    let f = match at {
        TractionPoint::CaseOptimal => data.f0,
        TractionPoint::ChordMidpoint => data.midpoint_de(),
    };
    let jm = build_jump_matrices(data, mat, f)?;

    let xi_scale = jm.xi.norm_squared().max(f64::MIN_POSITIVE);
    let det_xi = jm.xi.determinant();
    if det_xi.abs() <= 1e-12 * xi_scale {
        let lame = jm.lame;
        return Err(Error::SingularConstruction {
            element: data.element_id,
            det: det_xi,
            d: data.d,
            e: data.e,
            lambda_minus: lame.lambda_minus,
            lambda_plus: lame.lambda_plus,
            mu_minus: lame.mu_minus,
            mu_plus: lame.mu_plus,
        });
    }
    let xi_inv = jm.xi.try_inverse().expect("checked determinant above");

    let basis = Basis::for_space(data.space);
    let frame = data.geom.frame();
    let scalar = lagrange_scalar_basis(basis, frame, &data.sites);
    let m = data.sites.len();

    // Local-coordinate coefficients of L(X) = nbar . (X - D) over {1, xi, eta}.
    let line_coeffs = {
        let mut c = [0.0; 4];
        c[0] = data.nbar.dot(&(frame.origin - data.point_d));
        c[1] = frame.h * data.nbar.x;
        c[2] = frame.h * data.nbar.y;
        c
    };

    let mut pieces = Vec::with_capacity(2 * m);
    let mut all_c0 = Vec::with_capacity(2 * m);
    let mut all_c = Vec::with_capacity(2 * m);

    for k in 0..2 * m {
        // Unit nodal-value vectors of this shape function.
        let v = |i: usize| -> Vector2<f64> {
            let mut v = Vector2::zeros();
            if k < m && i == k {
                v.x = 1.0;
            } else if k >= m && i == k - m {
                v.y = 1.0;
            }
            v
        };

        // Plus-side nodal contribution to the hat-stress traction.
        let mut s_plus = Vector2::zeros();
        for &i in &data.i_plus {
            s_plus += jm.psi_bar[i].transpose() * v(i);
        }

        // b_j = K v_j - L(A_j) s_plus, y = Kbar^{-1} b.
        let y: Vec<Vector2<f64>> = data
            .i_minus
            .iter()
            .map(|&j| v(j) - jm.line_at_sites[j] * (jm.k_inv * s_plus))
            .collect();

        // Sherman-Morrison correction through the 2x2 matrix Xi.
        let mut z = Vector2::zeros();
        for (idx, &j) in data.i_minus.iter().enumerate() {
            z += jm.psi_bar[j].transpose() * y[idx];
        }
        let w = jm.k * (jm.q * (xi_inv * (jm.q * z)));
        let c: Vec<Vector2<f64>> = data
            .i_minus
            .iter()
            .enumerate()
            .map(|(idx, &j)| y[idx] - jm.line_at_sites[j] * (jm.k_inv * w))
            .collect();

        // c0 = K^{-1} hat-sigma(phi+)(F) nbar.
        let mut s_total = s_plus;
        for (idx, &j) in data.i_minus.iter().enumerate() {
            s_total += jm.psi_bar[j].transpose() * c[idx];
        }
        let c0 = jm.k_inv * s_total;

        // Assemble the plus piece and derive the minus piece.
        let mut plus = VectorPoly::zero(basis, frame);
        for &i in &data.i_plus {
            let vi = v(i);
            plus.add_scaled_scalar(0, &scalar[i], vi.x);
            plus.add_scaled_scalar(1, &scalar[i], vi.y);
        }
        for (idx, &j) in data.i_minus.iter().enumerate() {
            plus.add_scaled_scalar(0, &scalar[j], c[idx].x);
            plus.add_scaled_scalar(1, &scalar[j], c[idx].y);
        }
        let mut minus = plus;
        minus.add_scaled_scalar(0, &line_coeffs, c0.x);
        minus.add_scaled_scalar(1, &line_coeffs, c0.y);

        pieces.push((minus, plus));
        all_c0.push(c0);
        all_c.push(c);
    }

    Ok(IfeShapeSet {
        data: data.clone(),
        jm,
        pieces,
        c0: all_c0,
        c: all_c,
    })
}

impl IfeShapeSet {
    pub fn n_shapes(&self) -> usize {
        self.pieces.len()
    }

    pub fn piece(&self, k: usize, side: Side) -> &VectorPoly {
        match side {
            Side::Minus => &self.pieces[k].0,
            Side::Plus => &self.pieces[k].1,
        }
    }

    fn select(&self, k: usize, p: Point2<f64>) -> &VectorPoly {
        self.piece(k, self.data.piece_side(p))
    }

    pub fn eval_value(&self, k: usize, p: Point2<f64>) -> Vector2<f64> {
        self.select(k, p).eval(p)
    }

    pub fn eval_grad(&self, k: usize, p: Point2<f64>) -> Matrix2<f64> {
        self.select(k, p).grad(p)
    }

    pub fn eval_hess(&self, k: usize, p: Point2<f64>) -> [Matrix2<f64>; 2] {
        self.select(k, p).hess(p)
    }

    /// Containment-checked evaluation.
    pub fn evaluate(&self, k: usize, p: Point2<f64>) -> Result<Vector2<f64>> {
        if !self.data.geom.contains(p) {
            return Err(Error::PointOutsideElement(p.x, p.y));
        }
        Ok(self.eval_value(k, p))
    }

    /// 2x2 matrix shape function `[phi_i, phi_{i + |I|}]` of site `i` on one
    /// piece.
    pub fn matrix_shape(&self, i: usize, side: Side, p: Point2<f64>) -> Matrix2<f64> {
        let m = self.data.sites.len();
        let a = self.piece(i, side).eval(p);
        let b = self.piece(i + m, side).eval(p);
        Matrix2::new(a.x, b.x, a.y, b.y)
    }

    /// Largest deviation from the nodal Kronecker property.
    pub fn kronecker_residual(&self) -> f64 {
        let m = self.data.sites.len();
        let mut worst: f64 = 0.0;
        for k in 0..2 * m {
            for (j, &site) in self.data.sites.iter().enumerate() {
                let got = self.eval_value(k, site);
                let mut want = Vector2::zeros();
                if k < m && j == k {
                    want.x = 1.0;
                } else if k >= m && j == k - m {
                    want.y = 1.0;
                }
                worst = worst.max((got - want).norm());
            }
        }
        worst
    }

    /// Largest deviation from the partition of unity and its derivative
    /// sums, checked on both pieces at the given points.
    pub fn partition_of_unity_residual(&self, points: &[Point2<f64>]) -> f64 {
        let m = self.data.sites.len();
        let mut worst: f64 = 0.0;
        for &p in points {
            for side in [Side::Minus, Side::Plus] {
                let mut sum_val = Matrix2::zeros();
                let mut sum_grad = [Matrix2::zeros(); 2];
                let mut sum_hess = [Matrix2::zeros(); 3];
                for i in 0..m {
                    sum_val += self.matrix_shape(i, side, p);
                    let ga = self.piece(i, side).grad(p);
                    let gb = self.piece(i + m, side).grad(p);
                    for j in 0..2 {
                        sum_grad[j] +=
                            Matrix2::new(ga[(0, j)], gb[(0, j)], ga[(1, j)], gb[(1, j)]);
                    }
                    let ha = self.piece(i, side).hess(p);
                    let hb = self.piece(i + m, side).hess(p);
                    for (slot, (j, l)) in [(0usize, 0usize), (0, 1), (1, 1)].into_iter().enumerate()
                    {
                        sum_hess[slot] += Matrix2::new(
                            ha[0][(j, l)],
                            hb[0][(j, l)],
                            ha[1][(j, l)],
                            hb[1][(j, l)],
                        );
                    }
                }
                worst = worst.max((sum_val - Matrix2::identity()).norm());
                for g in sum_grad {
                    worst = worst.max(g.norm());
                }
                for h in sum_hess {
                    worst = worst.max(h.norm());
                }
            }
        }
        worst
    }

    /// Largest mismatch of the two pieces along the chord, including the
    /// second-degree coefficient condition.
    pub fn continuity_residual(&self, n_points: usize) -> f64 {
        let mut worst: f64 = 0.0;
        let (d, e) = (self.data.point_d, self.data.point_e);
        for k in 0..self.n_shapes() {
            let (minus, plus) = (&self.pieces[k].0, &self.pieces[k].1);
            for s in 0..n_points {
                let t = (s as f64 + 0.5) / n_points as f64;
                let p = Point2::from(d.coords + t * (e.coords - d.coords));
                worst = worst.max((minus.eval(p) - plus.eval(p)).norm());
            }
            worst =
                worst.max((minus.second_degree_coeff() - plus.second_degree_coeff()).norm());
        }
        worst
    }

    /// Largest relative traction mismatch at the enforcement point.
    pub fn stress_jump_residual(&self, mat: &LameField) -> f64 {
        let lame = self.data.construction_lame(mat);
        let f = self.jm.f;
        let n = self.data.nbar;
        let mut worst: f64 = 0.0;
        for k in 0..self.n_shapes() {
            let tm = stress(&self.pieces[k].0, f, lame.lambda_minus, lame.mu_minus) * n;
            let tp = stress(&self.pieces[k].1, f, lame.lambda_plus, lame.mu_plus) * n;
            let scale = tm.norm().max(tp.norm()).max(1.0 / self.data.geom.h);
            worst = worst.max((tm - tp).norm() / scale);
        }
        worst
    }
}

/// Residuals of the exact representation identities satisfied by the
/// immersed shape functions.
#[derive(Debug, Clone, Copy)]
pub struct IdentityResiduals {
    /// Largest entry of the value identities (zero matrices).
    pub value: f64,
    /// Largest entry mismatch of the first-derivative identities against
    /// `[I2, 0]` / `[0, I2]`.
    pub gradient: f64,
    /// Largest entry of the second-derivative identities (zero matrices).
    pub hessian: f64,
}

/// Evaluates the representation identities at the sample points, anchoring
/// the chord points at the traction point `F`.
pub fn check_fundamental_identity(
    shapes: &IfeShapeSet,
    samples: &[Point2<f64>],
) -> IdentityResiduals {
    let data = &shapes.data;
    let m = data.sites.len();
    let xbar = shapes.jm.f;
    let mut res = IdentityResiduals {
        value: 0.0,
        gradient: 0.0,
        hessian: 0.0,
    };

    let kron = |r: Vector2<f64>, mat: Matrix2<f64>| -> SMatrix<f64, 2, 4> {
        let mut out = SMatrix::<f64, 2, 4>::zeros();
        out.fixed_view_mut::<2, 2>(0, 0).copy_from(&(r.x * mat));
        out.fixed_view_mut::<2, 2>(0, 2).copy_from(&(r.y * mat));
        out
    };

    for &p in samples {
        for side in [Side::Minus, Side::Plus] {
            let (mbar, correction_set) = match side {
                Side::Minus => (&shapes.jm.mbar_minus, &data.i_plus),
                Side::Plus => (&shapes.jm.mbar_plus, &data.i_minus),
            };
            let m_minus_i = mbar - nalgebra::Matrix4::identity();

            // Value identity.
            let mut lam = SMatrix::<f64, 2, 4>::zeros();
            for i in 0..m {
                let phi = shapes.matrix_shape(i, side, p);
                lam += kron(data.sites[i] - p, phi);
            }
            for &i in correction_set {
                let phi = shapes.matrix_shape(i, side, p);
                lam += kron(data.sites[i] - xbar, phi) * m_minus_i;
            }
            res.value = res.value.max(lam.abs().max());

            // First and second derivative identities.
            for j in 0..2 {
                let d_phi = |i: usize| {
                    let ga = shapes.piece(i, side).grad(p);
                    let gb = shapes.piece(i + m, side).grad(p);
                    Matrix2::new(ga[(0, j)], gb[(0, j)], ga[(1, j)], gb[(1, j)])
                };
                let mut lam_d = SMatrix::<f64, 2, 4>::zeros();
                for i in 0..m {
                    lam_d += kron(data.sites[i] - p, d_phi(i));
                }
                for &i in correction_set {
                    lam_d += kron(data.sites[i] - xbar, d_phi(i)) * m_minus_i;
                }
                let mut expected = SMatrix::<f64, 2, 4>::zeros();
                expected
                    .fixed_view_mut::<2, 2>(0, 2 * j)
                    .copy_from(&Matrix2::identity());
                res.gradient = res.gradient.max((lam_d - expected).abs().max());

                for l in j..2 {
                    let dd_phi = |i: usize| {
                        let ha = shapes.piece(i, side).hess(p);
                        let hb = shapes.piece(i + m, side).hess(p);
                        Matrix2::new(ha[0][(j, l)], hb[0][(j, l)], ha[1][(j, l)], hb[1][(j, l)])
                    };
                    let mut lam_h = SMatrix::<f64, 2, 4>::zeros();
                    for i in 0..m {
                        lam_h += kron(data.sites[i] - p, dd_phi(i));
                    }
                    for &i in correction_set {
                        lam_h += kron(data.sites[i] - xbar, dd_phi(i)) * m_minus_i;
                    }
                    res.hessian = res.hessian.max(lam_h.abs().max());
                }
            }
        }
    }
    res
}
