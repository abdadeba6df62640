//! Random sweep over cut configurations and material parameters verifying
//! the solvability guarantee of the shape-function construction: at the
//! case-optimal traction point, `g_n` stays in [0, 1], `g_t` in [-1, 1] and
//! `det Xi` exceeds `2 min(mu)^2` with margin, for every bilinear and
//! rotated Q1 cut.
//!
//! Run with: `cargo run --release --example unisolvence_sweep [samples]`

use std::collections::BTreeMap;

use ife_elasticity::cut::{classify_geom, synthetic_cut, CutSpec, ElementClass};
use ife_elasticity::jump::{build_jump_matrices, check_unisolvence_bound};
use ife_elasticity::levelset::LameField;
use ife_elasticity::mesh::{ElemGeom, SpaceKind};
use nalgebra::Point2;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

struct CaseStats {
    count: usize,
    min_gn: f64,
    max_gn: f64,
    max_abs_gt: f64,
    min_rel_margin: f64,
}

fn main() {
    let samples: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(100_000);
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_817);
    let geom = ElemGeom::unit_quad(1.0, Point2::new(0.0, 0.0));
    let mut stats: BTreeMap<String, CaseStats> = BTreeMap::new();
    let mut violations = 0usize;

    for _ in 0..samples {
        let spec = if rng.gen_bool(0.5) {
            CutSpec::Corner {
                corner: rng.gen_range(0..4),
                d: rng.gen_range(0.001..0.999),
                e: rng.gen_range(0.001..0.999),
            }
        } else {
            CutSpec::Opposite {
                vertical: rng.gen_bool(0.5),
                d: rng.gen_range(0.001..0.999),
                e: rng.gen_range(0.001..0.999),
            }
        };
        let space = if rng.gen_bool(0.5) {
            SpaceKind::Bilinear
        } else {
            SpaceKind::RotatedQ1
        };
        let hp = synthetic_cut(&geom, spec, rng.gen_bool(0.5));
        let data = match classify_geom(&geom, space, &hp, 0).unwrap() {
            ElementClass::Interface(d) => *d,
            _ => continue,
        };
        let mut draw = || 10f64.powf(rng.gen_range(-3.0..3.0));
        let mat = LameField::new(draw(), draw(), draw(), draw()).unwrap();
        let jm = build_jump_matrices(&data, &mat, data.f0).unwrap();
        let report = check_unisolvence_bound(&jm, &mat, &data);

        let ok = report.ok
            && jm.g_n >= -1e-12
            && jm.g_n <= 1.0 + 1e-12
            && jm.g_t.abs() <= 1.0 + 1e-12;
        if !ok {
            violations += 1;
            if violations <= 5 {
                println!(
                    "VIOLATION: {} d = {} e = {} g_n = {} g_t = {} det = {} bound = {}",
                    data.case, data.d, data.e, jm.g_n, jm.g_t, report.det_xi, report.bound
                );
            }
        }
        let entry = stats.entry(data.case.to_string()).or_insert(CaseStats {
            count: 0,
            min_gn: f64::INFINITY,
            max_gn: f64::NEG_INFINITY,
            max_abs_gt: 0.0,
            min_rel_margin: f64::INFINITY,
        });
        entry.count += 1;
        entry.min_gn = entry.min_gn.min(jm.g_n);
        entry.max_gn = entry.max_gn.max(jm.g_n);
        entry.max_abs_gt = entry.max_abs_gt.max(jm.g_t.abs());
        entry.min_rel_margin = entry
            .min_rel_margin
            .min(report.det_xi / report.bound - 1.0);
    }

    println!("{samples} samples, {violations} violations");
    println!(
        "{:<6} {:>8} {:>12} {:>12} {:>12} {:>14}",
        "case", "n", "min g_n", "max g_n", "max |g_t|", "min margin"
    );
    for (case, s) in &stats {
        println!(
            "{:<6} {:>8} {:>12.4e} {:>12.6} {:>12.6} {:>14.4e}",
            case, s.count, s.min_gn, s.max_gn, s.max_abs_gt, s.min_rel_margin
        );
    }
}
