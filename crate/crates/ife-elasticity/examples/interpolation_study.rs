//! Interpolation convergence study: Lagrange interpolation of the benchmark
//! displacement into the immersed space, with piecewise L2/H1 errors and
//! estimated rates on a doubling mesh sequence. Optimal rates are (2, 1).
//!
//! Run with: `cargo run --release --example interpolation_study [levels]`

use ife_elasticity::convergence::{run_convergence, StudyConfig, StudyMode};
use ife_elasticity::mesh::SpaceKind;

fn main() {
    let levels: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(5);
    for space in [SpaceKind::Bilinear, SpaceKind::Linear, SpaceKind::RotatedQ1] {
        let config = StudyConfig {
            space,
            mode: StudyMode::Interp,
            levels,
            ..StudyConfig::default()
        };
        let t0 = std::time::Instant::now();
        let record = run_convergence(&config).unwrap();
        println!("{}", record.to_markdown());
        println!("({:.2?})\n", t0.elapsed());
    }
}
