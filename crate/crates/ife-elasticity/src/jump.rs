//! Interface jump matrices.
//!
//! With the Jacobian vectorization `Vec(grad u) = (u1_x, u2_x, u1_y, u2_y)`,
//! the displacement- and traction-continuity conditions across a line with
//! unit normal `nbar` couple the one-sided Jacobians through the 4x4 matrices
//! `Nbar^s`; their determinant is `mu^s (lambda^s + 2 mu^s)`, so the coupling
//! matrices `Mbar^- = (Nbar^+)^{-1} Nbar^-` and `Mbar^+ = (Nbar^-)^{-1}
//! Nbar^+` always exist. The 2x2 matrix `K = Q P^- Q^T` maps the coefficient
//! `c0` of the line function to the traction it produces, and the matrix
//! `Xi(F)` controls the solvability of the whole shape-function system.

use nalgebra::{Matrix2, Matrix4, Point2, Vector2};

use crate::cut::InterfaceElementData;
use crate::error::{Error, Result};
use crate::levelset::LameField;
use crate::mesh::SpaceKind;
use crate::poly::{lagrange_scalar_basis, stress_of_jacobian, Basis, ScalarPoly};

/// Traction/tangent coupling matrix of one material side for a line with
/// unit normal `n`; acts on `Vec(grad u) = (u1_x, u2_x, u1_y, u2_y)`.
pub fn nbar_matrix(n: Vector2<f64>, lambda: f64, mu: f64) -> Matrix4<f64> {
    let (n1, n2) = (n.x, n.y);
    let lp2m = lambda + 2.0 * mu;
    Matrix4::new(
        lp2m * n1,
        mu * n2,
        mu * n2,
        lambda * n1,
        lambda * n2,
        mu * n1,
        mu * n1,
        lp2m * n2,
        -n2,
        0.0,
        n1,
        0.0,
        0.0,
        -n2,
        0.0,
        n1,
    )
}

/// Eigenvectors of `(Mbar^s)^T` with eigenvalue one (tangential directions).
pub fn tangential_eigenvectors(n: Vector2<f64>) -> [nalgebra::Vector4<f64>; 2] {
    [
        nalgebra::Vector4::new(-n.y, 0.0, n.x, 0.0),
        nalgebra::Vector4::new(0.0, -n.y, 0.0, n.x),
    ]
}

/// All jump matrices of one cut element, evaluated at the traction point `f`.
///
/// Material parameters are relabelled to the construction sides of the cut
/// (see [`InterfaceElementData::construction_lame`]).
#[derive(Debug, Clone)]
pub struct JumpMatrices {
    pub nbar: Vector2<f64>,
    pub tbar: Vector2<f64>,
    pub f: Point2<f64>,
    pub nbar_minus: Matrix4<f64>,
    pub nbar_plus: Matrix4<f64>,
    pub mbar_minus: Matrix4<f64>,
    pub mbar_plus: Matrix4<f64>,
    /// `K = Q P^- Q^T`.
    pub k: Matrix2<f64>,
    pub k_inv: Matrix2<f64>,
    /// Orthogonal (and symmetric) `Q = [nbar, tbar]`.
    pub q: Matrix2<f64>,
    pub p_minus: Matrix2<f64>,
    pub xi: Matrix2<f64>,
    pub g_n: f64,
    pub g_t: f64,
    /// Per local site: rows are the hat-stress tractions of the two standard
    /// vector shapes of that site.
    pub psi_bar: Vec<Matrix2<f64>>,
    /// Construction-side Lamé parameters.
    pub lame: LameField,
    /// Line values `L(A_i)` at the sites.
    pub line_at_sites: Vec<f64>,
}

/// Builds the jump matrices of a cut element with the traction condition
/// enforced at `f` (normally `data.f0`).
///
/// `mat` holds the physical material parameters; they are swapped internally
/// when the construction sides are flipped.
pub fn build_jump_matrices(
    data: &InterfaceElementData,
    mat: &LameField,
    f: Point2<f64>,
) -> Result<JumpMatrices> {
    let lame = data.construction_lame(mat);
    let n = data.nbar;
    let t = data.tbar();

    let nbar_minus = nbar_matrix(n, lame.lambda_minus, lame.mu_minus);
    let nbar_plus = nbar_matrix(n, lame.lambda_plus, lame.mu_plus);
    for (nb, lambda, mu) in [
        (&nbar_minus, lame.lambda_minus, lame.mu_minus),
        (&nbar_plus, lame.lambda_plus, lame.mu_plus),
    ] {
        let det = mu * (lambda + 2.0 * mu);
        let inv_norm = nb.try_inverse().map(|i| i.norm()).unwrap_or(f64::INFINITY);
        let cond = nb.norm() * inv_norm;
        if det.is_nan() || det <= 0.0 || cond > 1e12 {
            return Err(Error::IllConditioned(cond));
        }
    }
    let mbar_minus = nbar_plus.try_inverse().unwrap() * nbar_minus;
    let mbar_plus = nbar_minus.try_inverse().unwrap() * nbar_plus;

    let q = Matrix2::new(n.x, t.x, n.y, t.y);
    let p_minus = Matrix2::new(lame.lambda_minus + 2.0 * lame.mu_minus, 0.0, 0.0, lame.mu_minus);
    let k = q * p_minus * q.transpose();
    let k_inv = q * Matrix2::new(1.0 / p_minus[(0, 0)], 0.0, 0.0, 1.0 / p_minus[(1, 1)]) * q.transpose();

    // Standard scalar shapes of this element's space at its sites.
    let basis = Basis::for_space(data.space);
    let frame = data.geom.frame();
    let scalar = lagrange_scalar_basis(basis, frame, &data.sites);
    let line_at_sites: Vec<f64> = data.sites.iter().map(|&p| data.line_value(p)).collect();

    let hat_lambda = lame.hat_lambda();
    let hat_mu = lame.hat_mu();
    let mut g = Vector2::zeros();
    let mut psi_bar = Vec::with_capacity(data.sites.len());
    for (i, coeffs) in scalar.iter().enumerate() {
        let psi = ScalarPoly {
            basis,
            frame,
            coeffs: *coeffs,
        };
        let grad = psi.grad(f);
        if data.i_minus.contains(&i) {
            g += line_at_sites[i] * grad;
        }
        // Hat-stress tractions of the vector shapes (psi, 0) and (0, psi).
        let j1 = Matrix2::new(grad.x, grad.y, 0.0, 0.0);
        let j2 = Matrix2::new(0.0, 0.0, grad.x, grad.y);
        let r1 = stress_of_jacobian(&j1, hat_lambda, hat_mu) * n;
        let r2 = stress_of_jacobian(&j2, hat_lambda, hat_mu) * n;
        psi_bar.push(Matrix2::new(r1.x, r1.y, r2.x, r2.y));
    }
    let g_n = g.dot(&n);
    let g_t = g.dot(&t);

    let xi = p_minus
        + Matrix2::new(
            (hat_lambda + 2.0 * hat_mu) * g_n,
            hat_lambda * g_t,
            hat_mu * g_t,
            hat_mu * g_n,
        );

    Ok(JumpMatrices {
        nbar: n,
        tbar: t,
        f,
        nbar_minus,
        nbar_plus,
        mbar_minus,
        mbar_plus,
        k,
        k_inv,
        q,
        p_minus,
        xi,
        g_n,
        g_t,
        psi_bar,
        lame,
        line_at_sites,
    })
}

/// Solvability diagnostic of the shape-function system.
#[derive(Debug, Clone, Copy)]
pub struct UnisolvenceReport {
    pub det_xi: f64,
    /// Guaranteed lower bound `2 min(mu)^2` for the bilinear and rotated Q1
    /// spaces at the case-optimal traction point.
    pub bound: f64,
    pub ok: bool,
    /// Determinant of the full coefficient system,
    /// `det(K)^(|I-| - 1) det(Xi)`.
    pub system_det: f64,
}

/// Reports `det(Xi)` against the `2 min(mu)^2` bound. For the linear space
/// the bound is not available; `ok` then only records non-singularity, and
/// `system_det` carries the determinant of the coefficient system.
pub fn check_unisolvence_bound(
    jm: &JumpMatrices,
    mat: &LameField,
    data: &InterfaceElementData,
) -> UnisolvenceReport {
    let det_xi = jm.xi.determinant();
    let mu_min = mat.mu_minus.min(mat.mu_plus);
    let bound = 2.0 * mu_min * mu_min;
    let det_k = jm.k.determinant();
    let n_minus = data.i_minus.len();
    let system_det = if n_minus == 0 {
        1.0
    } else {
        det_k.powi(n_minus as i32 - 1) * det_xi
    };
    let ok = match data.space {
        SpaceKind::Linear => {
            system_det.abs() > 1e-12 * det_k.powi(n_minus.max(1) as i32).abs()
        }
        _ => det_xi > bound,
    };
    UnisolvenceReport {
        det_xi,
        bound,
        ok,
        system_det,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cut::{classify_geom, synthetic_cut, CutSpec, ElementClass};
    use crate::mesh::ElemGeom;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn nbar_entries_and_determinant() {
        let n = Vector2::new(1.0, 0.0);
        let nb = nbar_matrix(n, 1.0, 2.0);
        let expected = Matrix4::new(
            5.0, 0.0, 0.0, 1.0, //
            0.0, 2.0, 2.0, 0.0, //
            0.0, 0.0, 1.0, 0.0, //
            0.0, 0.0, 0.0, 1.0,
        );
        assert_eq!(nb, expected);
        assert_relative_eq!(nb.determinant(), 10.0, epsilon = 1e-12);
    }

    #[test]
    fn determinant_identity_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..2000 {
            let ang: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let n = Vector2::new(ang.cos(), ang.sin());
            // Moderate parameter range: the LU determinant itself carries
            // condition-number rounding; the wide [1e-3, 1e3] range is
            // exercised at 1e-10 by the acceptance suite.
            let lambda = 10f64.powf(rng.gen_range(-1.0..1.0));
            let mu = 10f64.powf(rng.gen_range(-1.0..1.0));
            let nb = nbar_matrix(n, lambda, mu);
            let det = nb.determinant();
            let expect = mu * (lambda + 2.0 * mu);
            assert!(
                ((det - expect) / expect).abs() < 1e-12,
                "det {det} vs {expect}"
            );
        }
    }

    #[test]
    fn eigenvector_identity_and_inverse_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..500 {
            let ang: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let n = Vector2::new(ang.cos(), ang.sin());
            let lm = 10f64.powf(rng.gen_range(-2.0..2.0));
            let lp = 10f64.powf(rng.gen_range(-2.0..2.0));
            let mm = 10f64.powf(rng.gen_range(-2.0..2.0));
            let mp = 10f64.powf(rng.gen_range(-2.0..2.0));
            let nm = nbar_matrix(n, lm, mm);
            let np = nbar_matrix(n, lp, mp);
            let mbar_m = np.try_inverse().unwrap() * nm;
            let mbar_p = nm.try_inverse().unwrap() * np;
            for alpha in tangential_eigenvectors(n) {
                assert!((mbar_m.transpose() * alpha - alpha).norm() < 1e-10 * alpha.norm());
                assert!((mbar_p.transpose() * alpha - alpha).norm() < 1e-10 * alpha.norm());
            }
            assert!((mbar_p * mbar_m - Matrix4::identity()).norm() < 1e-10);
        }
    }

    fn bil1_jump(d: f64, e: f64, mat: LameField, f_mid: bool) -> (JumpMatrices, Box<InterfaceElementData>) {
        let geom = ElemGeom::unit_quad(1.0, Point2::new(0.0, 0.0));
        let hp = synthetic_cut(&geom, CutSpec::Corner { corner: 0, d, e }, true);
        let data = match classify_geom(&geom, SpaceKind::Bilinear, &hp, 0).unwrap() {
            ElementClass::Interface(data) => data,
            _ => panic!("expected a cut element"),
        };
        let f = if f_mid { data.midpoint_de() } else { data.f0 };
        let jm = build_jump_matrices(&data, &mat, f).unwrap();
        (jm, data)
    }

    #[test]
    fn k_is_q_p_qt_with_axis_normal() {
        // Cut parallel to the y-axis: nbar = (±1, 0).
        let geom = ElemGeom::unit_quad(1.0, Point2::new(0.0, 0.0));
        let hp = synthetic_cut(
            &geom,
            CutSpec::Opposite {
                vertical: false,
                d: 0.5,
                e: 0.5,
            },
            true,
        );
        let data = match classify_geom(&geom, SpaceKind::Bilinear, &hp, 0).unwrap() {
            ElementClass::Interface(data) => data,
            _ => panic!(),
        };
        let mat = LameField::new(1.0, 1.0, 2.0, 2.0).unwrap();
        let jm = build_jump_matrices(&data, &mat, data.f0).unwrap();
        assert_relative_eq!(jm.nbar.x.abs(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(jm.k[(0, 0)], 5.0, epsilon = 1e-12);
        assert_relative_eq!(jm.k[(1, 1)], 2.0, epsilon = 1e-12);
        assert_relative_eq!(jm.k[(0, 1)], 0.0, epsilon = 1e-12);
        // Eigenvalues of K are lambda- + 2 mu- and mu-.
        let eig = jm.k.symmetric_eigenvalues();
        let (lo, hi) = (eig.min(), eig.max());
        assert_relative_eq!(lo, 2.0, epsilon = 1e-12);
        assert_relative_eq!(hi, 5.0, epsilon = 1e-12);
    }

    #[test]
    fn matched_materials_give_identity_mbar_and_p_xi() {
        let mat = LameField::matched(1.3, 0.7);
        let (jm, data) = bil1_jump(0.4, 0.7, mat, false);
        assert!((jm.mbar_minus - Matrix4::identity()).norm() < 1e-12);
        assert!((jm.mbar_plus - Matrix4::identity()).norm() < 1e-12);
        // lambda_hat = mu_hat = 0 leaves Xi = P-.
        assert!((jm.xi - jm.p_minus).norm() < 1e-14);
        let rep = check_unisolvence_bound(&jm, &mat, &data);
        assert!(rep.ok);
        assert!(rep.det_xi > rep.bound);
    }

    #[test]
    fn bil1_gn_gt_closed_form() {
        // For the corner cut of the bilinear square at F0 the auxiliary
        // functions have closed forms in (d, e).
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let d: f64 = rng.gen_range(0.02..0.98);
            let e: f64 = rng.gen_range(0.02..0.98);
            let mat = LameField::new(1.0, 5.0, 2.0, 10.0).unwrap();
            let (jm, _) = bil1_jump(d, e, mat, false);
            let s2 = d * d + e * e;
            let gn = d * e * (d + e - d * e) / s2;
            let gt = d * e * (d + e - d * e) * (d - e) / (s2 * (d + e));
            assert_relative_eq!(jm.g_n, gn, epsilon = 1e-10);
            assert_relative_eq!(jm.g_t.abs(), gt.abs(), epsilon = 1e-10);
            // Paper-form expansion of det(Xi).
            let (gn, gt) = (jm.g_n, jm.g_t);
            let (lm, lp, mm, mp) = (1.0, 5.0, 2.0, 10.0);
            let expansion = lp * mp * (gn * gn - gt * gt)
                + lm * mm * ((1.0 - gn) * (1.0 - gn) - gt * gt)
                + lm * mp * ((1.0 - gn) * gn + gt * gt)
                + lp * mm * (gn * (1.0 - gn) + gt * gt)
                + 2.0 * mp * mp * gn * gn
                + 2.0 * mm * mm * (1.0 - gn) * (1.0 - gn)
                + 4.0 * mp * mm * (1.0 - gn) * gn;
            assert_relative_eq!(jm.xi.determinant(), expansion, max_relative = 1e-10);
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn det_and_eigenvector_identities(
                ang in 0.0..std::f64::consts::TAU,
                lambda in 0.05f64..20.0,
                mu in 0.05f64..20.0,
            ) {
                let n = Vector2::new(ang.cos(), ang.sin());
                let nb = nbar_matrix(n, lambda, mu);
                let want = mu * (lambda + 2.0 * mu);
                prop_assert!(((nb.determinant() - want) / want).abs() < 1e-12);
                let inv = nb.try_inverse().unwrap();
                let mbar = inv * nbar_matrix(n, 2.0 * lambda, 0.5 * mu);
                for alpha in tangential_eigenvectors(n) {
                    prop_assert!((mbar.transpose() * alpha - alpha).norm() < 1e-11 * mbar.norm().max(1.0));
                }
            }

            #[test]
            fn k_matrix_eigenvalues(
                ang in 0.0..std::f64::consts::TAU,
                lambda in 0.05f64..20.0,
                mu in 0.05f64..20.0,
            ) {
                // K = Q P- Q^T is SPD with eigenvalues lambda + 2 mu and mu.
                let n = Vector2::new(ang.cos(), ang.sin());
                let t = Vector2::new(n.y, -n.x);
                let q = Matrix2::new(n.x, t.x, n.y, t.y);
                let p = Matrix2::new(lambda + 2.0 * mu, 0.0, 0.0, mu);
                let k = q * p * q.transpose();
                let eig = k.symmetric_eigenvalues();
                let (lo, hi) = (eig.min(), eig.max());
                prop_assert!((lo - mu.min(lambda + 2.0 * mu)).abs() < 1e-10 * (1.0 + mu));
                prop_assert!((hi - (lambda + 2.0 * mu).max(mu)).abs() < 1e-10 * (1.0 + lambda + 2.0 * mu));
            }
        }
    }

    #[test]
    fn unisolvence_bound_spec_point() {
        let mat = LameField::new(1.0, 5.0, 2.0, 10.0).unwrap();
        let (jm, data) = bil1_jump(0.5, 0.5, mat, false);
        let rep = check_unisolvence_bound(&jm, &mat, &data);
        assert_relative_eq!(rep.bound, 8.0);
        assert!(rep.det_xi > 8.0, "det Xi = {}", rep.det_xi);
        assert!(rep.ok);
    }
}
