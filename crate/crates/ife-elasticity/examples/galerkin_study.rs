//! Galerkin convergence study: assembles the immersed stiffness system with
//! the derived body force, solves with Jacobi-preconditioned conjugate
//! gradients, and reports piecewise L2/H1 errors and rates.
//!
//! Run with: `cargo run --release --example galerkin_study [levels]`

use ife_elasticity::convergence::{run_convergence, StudyConfig, StudyMode};

fn main() {
    let levels: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(4);
    let config = StudyConfig {
        mode: StudyMode::Solve,
        levels,
        ..StudyConfig::default()
    };
    let t0 = std::time::Instant::now();
    let record = run_convergence(&config).unwrap();
    println!("{}", record.to_markdown());
    println!("({:.2?})", t0.elapsed());
}
