//! Classifies every element of a Cartesian mesh against the elliptical
//! interface and prints a census of the cut configurations.
//!
//! Run with: `cargo run --release --example classify_interface`

use std::collections::BTreeMap;

use ife_elasticity::cut::{classify_element, ElementClass};
use ife_elasticity::levelset::{Ellipse, Side};
use ife_elasticity::mesh::{build_mesh, MeshKind, Rect, SpaceKind};

fn main() {
    let a = ife_elasticity::exact::BENCHMARK_SEMI_AXIS;
    let interface = Ellipse::new(a, a);

    for (space, mesh_kind) in [
        (SpaceKind::Linear, MeshKind::Triangular),
        (SpaceKind::Bilinear, MeshKind::Rectangular),
        (SpaceKind::RotatedQ1, MeshKind::Rectangular),
    ] {
        println!("== {space} space ==");
        for n in [10usize, 20, 40] {
            let mesh = build_mesh(Rect::square(-1.0, 1.0), n, mesh_kind).unwrap();
            let mut inside = 0usize;
            let mut outside = 0usize;
            let mut cases: BTreeMap<String, usize> = BTreeMap::new();
            let mut flipped = 0usize;
            for e in 0..mesh.n_elements() {
                match classify_element(&mesh, space, &interface, e).unwrap() {
                    ElementClass::NonInterface(Side::Minus) => inside += 1,
                    ElementClass::NonInterface(Side::Plus) => outside += 1,
                    ElementClass::Interface(data) => {
                        *cases.entry(data.case.to_string()).or_default() += 1;
                        if data.flipped {
                            flipped += 1;
                        }
                    }
                }
            }
            let cut: usize = cases.values().sum();
            println!(
                "n = {n:4}: {inside:6} inside, {outside:6} outside, {cut:4} cut \
                 ({flipped} side-flipped)"
            );
            for (case, count) in &cases {
                println!("          {case}: {count}");
            }
        }
        println!();
    }
}
