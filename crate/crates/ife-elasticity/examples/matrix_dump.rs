//! Assembles the immersed stiffness system on a coarse mesh and dumps the
//! matrix in `row col value` coordinate text format for external
//! verification, along with symmetry diagnostics.
//!
//! Run with: `cargo run --release --example matrix_dump [path]`

use ife_elasticity::assembly::{assemble, QuadSettings};
use ife_elasticity::exact::ExactSolution;
use ife_elasticity::levelset::Ellipse;
use ife_elasticity::mesh::{build_mesh, MeshKind, Rect, SpaceKind};
use ife_elasticity::space::IfeSpace;

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "stiffness_n10.txt".to_string());
    let exact = ExactSolution::benchmark();
    let interface = Ellipse::new(exact.a, exact.b);
    let mesh = build_mesh(Rect::square(-1.0, 1.0), 10, MeshKind::Rectangular).unwrap();
    let space = IfeSpace::build(mesh, SpaceKind::Bilinear, &interface, &exact.lame).unwrap();
    let system = assemble(
        &space,
        &exact.lame,
        &interface,
        &|side, p| exact.f(side, p),
        QuadSettings::default(),
    )
    .unwrap();

    let (asym, max_entry) = system.matrix.asymmetry();
    println!(
        "{} dofs, {} stored entries, max |a_ij| = {:.4e}, max |a_ij - a_ji| = {:.2e}",
        system.matrix.n,
        system.matrix.values.len(),
        max_entry,
        asym
    );
    let mut file = std::fs::File::create(&path).unwrap();
    system.matrix.write_coo(&mut file).unwrap();
    println!("wrote coordinate-format matrix to {path}");
}
