//! Constructs the immersed shape functions on a single cut element and
//! reports every structural property: nodal Kronecker values, continuity
//! along the chord, the traction jump at the enforcement point, partition of
//! unity, the representation identities, and the solvability margin.
//!
//! Run with: `cargo run --release --example shape_diagnostics`

use ife_elasticity::cut::{classify_geom, synthetic_cut, CutSpec, ElementClass};
use ife_elasticity::jump::check_unisolvence_bound;
use ife_elasticity::levelset::LameField;
use ife_elasticity::mesh::{ElemGeom, SpaceKind};
use ife_elasticity::shapes::{check_fundamental_identity, construct_ife_shapes};
use nalgebra::Point2;

fn main() {
    let mat = LameField::new(1.0, 5.0, 2.0, 10.0).unwrap();
    let geom = ElemGeom::unit_quad(1.0, Point2::new(0.0, 0.0));

    let configs: Vec<(SpaceKind, CutSpec)> = vec![
        (
            SpaceKind::Bilinear,
            CutSpec::Corner {
                corner: 0,
                d: 0.35,
                e: 0.72,
            },
        ),
        (
            SpaceKind::Bilinear,
            CutSpec::Opposite {
                vertical: false,
                d: 0.15,
                e: 0.6,
            },
        ),
        (
            SpaceKind::RotatedQ1,
            CutSpec::Corner {
                corner: 0,
                d: 0.85,
                e: 0.3,
            },
        ),
        (
            SpaceKind::RotatedQ1,
            CutSpec::Opposite {
                vertical: true,
                d: 0.45,
                e: 0.82,
            },
        ),
    ];

    let samples: Vec<Point2<f64>> = (0..5)
        .flat_map(|i| (0..5).map(move |j| Point2::new(0.1 + 0.2 * i as f64, 0.1 + 0.2 * j as f64)))
        .collect();

    for (space, spec) in configs {
        let hp = synthetic_cut(&geom, spec, true);
        let data = match classify_geom(&geom, space, &hp, 0).unwrap() {
            ElementClass::Interface(d) => *d,
            _ => unreachable!("the synthetic cut always crosses the element"),
        };
        let shapes = construct_ife_shapes(&data, &mat).unwrap();
        let report = check_unisolvence_bound(&shapes.jm, &mat, &data);
        let identities = check_fundamental_identity(&shapes, &samples);

        println!(
            "{space} {}: d = {:.3}, e = {:.3}, |I-| = {}, t0 = {:.3}",
            data.case,
            data.d,
            data.e,
            data.i_minus.len(),
            data.t0
        );
        println!(
            "  g_n = {:+.4}  g_t = {:+.4}  det Xi = {:.4} (bound {:.4}, ok = {})",
            shapes.jm.g_n, shapes.jm.g_t, report.det_xi, report.bound, report.ok
        );
        println!(
            "  kronecker {:.2e} | chord continuity {:.2e} | traction jump {:.2e}",
            shapes.kronecker_residual(),
            shapes.continuity_residual(10),
            shapes.stress_jump_residual(&mat)
        );
        println!(
            "  partition of unity {:.2e} | identities: value {:.2e}, grad {:.2e}, hess {:.2e}",
            shapes.partition_of_unity_residual(&samples),
            identities.value,
            identities.gradient,
            identities.hessian
        );
        println!();
    }
}
