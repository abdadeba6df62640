//! Piecewise error norms and the convergence-study driver.

use nalgebra::Point2;
use rayon::prelude::*;

use crate::assembly::{apply_dirichlet, assemble, solve_cg, uniform_side, QuadSettings};
use crate::error::{Error, Result};
use crate::exact::ExactSolution;
use crate::levelset::{Ellipse, LameField, LevelSet, Side};
use crate::mesh::{build_mesh, Rect, SpaceKind};
use crate::quadrature::{classified_points, element_rule};
use crate::space::{ElementRole, IfeSpace};

/// How the per-component, per-side error pieces combine into one number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormConvention {
    /// Square root of the sum of all squared pieces (the usual discrete
    /// norm).
    RootSumSquares,
    /// Sum of the four piece norms `sum_i sum_s ||e_i||_s` (the piecewise
    /// norm written as a sum of component norms over the two subdomains).
    ComponentSideSum,
}

/// Squared error pieces indexed by `[component][side]`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ErrorNorms {
    pub l2_sq: [[f64; 2]; 2],
    pub h1_sq: [[f64; 2]; 2],
    pub h2_sq: [[f64; 2]; 2],
}

impl ErrorNorms {
    fn combine(pieces: &[[f64; 2]; 2], convention: NormConvention) -> f64 {
        match convention {
            NormConvention::RootSumSquares => pieces
                .iter()
                .flatten()
                .sum::<f64>()
                .max(0.0)
                .sqrt(),
            NormConvention::ComponentSideSum => pieces
                .iter()
                .flatten()
                .map(|&s| s.max(0.0).sqrt())
                .sum(),
        }
    }

    pub fn l2(&self, convention: NormConvention) -> f64 {
        Self::combine(&self.l2_sq, convention)
    }

    pub fn h1(&self, convention: NormConvention) -> f64 {
        Self::combine(&self.h1_sq, convention)
    }

    pub fn h2(&self, convention: NormConvention) -> f64 {
        Self::combine(&self.h2_sq, convention)
    }

    fn add(&mut self, other: &ErrorNorms) {
        for c in 0..2 {
            for s in 0..2 {
                self.l2_sq[c][s] += other.l2_sq[c][s];
                self.h1_sq[c][s] += other.h1_sq[c][s];
                self.h2_sq[c][s] += other.h2_sq[c][s];
            }
        }
    }
}

fn side_index(side: Side) -> usize {
    match side {
        Side::Minus => 0,
        Side::Plus => 1,
    }
}

/// Piecewise L2, semi-H1 and semi-H2 errors of a discrete field against the
/// exact solution. The discrete piece is selected by the chord on cut
/// elements; the exact piece by the interface itself.
pub fn error_norms(
    space: &IfeSpace,
    dof_values: &[f64],
    exact: &ExactSolution,
    ls: &dyn LevelSet,
    quad: QuadSettings,
) -> Result<ErrorNorms> {
    let per_elem: Result<Vec<ErrorNorms>> = (0..space.mesh.n_elements())
        .into_par_iter()
        .map(|e| {
            let geom = space.mesh.elem_geom(e);
            let lf = space.local_field(e, dof_values);
            let mut acc = ErrorNorms::default();
            let mut absorb = |side: Side, p: Point2<f64>, w: f64| {
                let s = side_index(side);
                let ev = lf.eval(p) - exact.u(side, p);
                let eg = lf.grad(p) - exact.grad_u(side, p);
                let lh = lf.hess(p);
                let eh = exact.hess_u(side, p);
                for c in 0..2 {
                    acc.l2_sq[c][s] += w * ev[c] * ev[c];
                    acc.h1_sq[c][s] += w * (eg[(c, 0)] * eg[(c, 0)] + eg[(c, 1)] * eg[(c, 1)]);
                    let dh = lh[c] - eh[c];
                    acc.h2_sq[c][s] += w * dh.norm_squared();
                }
            };
            let plain_side = match &space.roles[e] {
                ElementRole::Standard(_) => uniform_side(&geom, ls),
                ElementRole::Cut(_) => None,
            };
            match plain_side {
                Some(side) => {
                    let rule = element_rule(&geom, quad.smooth_degree)?;
                    for (&p, &w) in rule.points.iter().zip(&rule.weights) {
                        absorb(side, p, w);
                    }
                }
                None => {
                    for (side, p, w) in
                        classified_points(&geom, ls, quad.gamma_subcells, quad.gamma_degree)?
                    {
                        absorb(side, p, w);
                    }
                }
            }
            Ok(acc)
        })
        .collect();
    let mut total = ErrorNorms::default();
    for part in per_elem? {
        total.add(&part);
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StudyMode {
    /// Nodal interpolation of the exact solution.
    Interp,
    /// Galerkin solve with the derived body force and exact boundary data.
    Solve,
}

impl std::fmt::Display for StudyMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StudyMode::Interp => write!(f, "interp"),
            StudyMode::Solve => write!(f, "solve"),
        }
    }
}

/// Full configuration of a convergence study.
#[derive(Debug, Clone)]
pub struct StudyConfig {
    pub space: SpaceKind,
    pub mode: StudyMode,
    pub domain: Rect,
    pub n_start: usize,
    pub levels: usize,
    pub lame: LameField,
    pub a: f64,
    pub b: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub quad: QuadSettings,
    pub norm: NormConvention,
    pub cg_rel_tol: f64,
    pub cg_max_iter: usize,
}

impl Default for StudyConfig {
    fn default() -> Self {
        let a = crate::exact::BENCHMARK_SEMI_AXIS;
        StudyConfig {
            space: SpaceKind::Bilinear,
            mode: StudyMode::Interp,
            domain: Rect::square(-1.0, 1.0),
            n_start: 10,
            levels: 5,
            lame: LameField::new(1.0, 5.0, 2.0, 10.0).unwrap(),
            a,
            b: a,
            alpha1: 5.0,
            alpha2: 7.0,
            quad: QuadSettings::default(),
            norm: NormConvention::RootSumSquares,
            cg_rel_tol: 1e-11,
            cg_max_iter: 200_000,
        }
    }
}

impl StudyConfig {
    pub fn exact(&self) -> ExactSolution {
        ExactSolution::new(self.a, self.b, self.alpha1, self.alpha2, self.lame)
    }

    pub fn interface(&self) -> Ellipse {
        Ellipse::new(self.a, self.b)
    }
}

/// One mesh level of a study.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvRow {
    pub n: usize,
    pub h: f64,
    pub l2: f64,
    pub l2_rate: Option<f64>,
    pub h1: f64,
    pub h1_rate: Option<f64>,
}

/// Error table of one study.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRecord {
    pub space: SpaceKind,
    pub mode: StudyMode,
    pub rows: Vec<ConvRow>,
}

impl ConvergenceRecord {
    /// Builds rows from raw `(n, h, l2, h1)` tuples, estimating rates from
    /// consecutive levels.
    pub fn from_errors(space: SpaceKind, mode: StudyMode, raw: &[(usize, f64, f64, f64)]) -> Self {
        let mut rows: Vec<ConvRow> = Vec::with_capacity(raw.len());
        for &(n, h, l2, h1) in raw {
            let (l2_rate, h1_rate) = match rows.last() {
                Some(prev) => {
                    let denom = (prev.h / h).ln();
                    (
                        Some((prev.l2 / l2).ln() / denom),
                        Some((prev.h1 / h1).ln() / denom),
                    )
                }
                None => (None, None),
            };
            rows.push(ConvRow {
                n,
                h,
                l2,
                l2_rate,
                h1,
                h1_rate,
            });
        }
        ConvergenceRecord { space, mode, rows }
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("# space={},mode={}\n", self.space, self.mode);
        out.push_str("n,h,l2,l2_rate,h1,h1_rate\n");
        for r in &self.rows {
            let fmt_rate = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.n,
                r.h,
                r.l2,
                fmt_rate(r.l2_rate),
                r.h1,
                fmt_rate(r.h1_rate)
            ));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<ConvergenceRecord> {
        let mut space = None;
        let mut mode = None;
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                for part in meta.split(',') {
                    match part.trim().split_once('=') {
                        Some(("space", v)) => {
                            space = Some(parse_space(v)?);
                        }
                        Some(("mode", v)) => {
                            mode = Some(match v {
                                "interp" => StudyMode::Interp,
                                "solve" => StudyMode::Solve,
                                other => {
                                    return Err(Error::BadConfig(format!("unknown mode {other}")))
                                }
                            });
                        }
                        _ => {}
                    }
                }
                continue;
            }
            if line.starts_with("n,") {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 6 {
                return Err(Error::BadConfig(format!("bad csv row: {line}")));
            }
            let parse = |s: &str| -> Result<f64> {
                s.parse()
                    .map_err(|_| Error::BadConfig(format!("bad number {s}")))
            };
            let rate = |s: &str| -> Result<Option<f64>> {
                if s.is_empty() {
                    Ok(None)
                } else {
                    parse(s).map(Some)
                }
            };
            rows.push(ConvRow {
                n: fields[0]
                    .parse()
                    .map_err(|_| Error::BadConfig(format!("bad n {}", fields[0])))?,
                h: parse(fields[1])?,
                l2: parse(fields[2])?,
                l2_rate: rate(fields[3])?,
                h1: parse(fields[4])?,
                h1_rate: rate(fields[5])?,
            });
        }
        Ok(ConvergenceRecord {
            space: space.ok_or_else(|| Error::BadConfig("missing space header".into()))?,
            mode: mode.ok_or_else(|| Error::BadConfig("missing mode header".into()))?,
            rows,
        })
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!(
            "| h | L2 error | rate | H1 error | rate |   ({}, {})\n|---|---|---|---|---|\n",
            self.space, self.mode
        );
        for r in &self.rows {
            let rate = |v: Option<f64>| v.map(|x| format!("{x:.4}")).unwrap_or_else(|| "-".into());
            out.push_str(&format!(
                "| 1/{} | {:.4e} | {} | {:.4e} | {} |\n",
                r.n,
                r.l2,
                rate(r.l2_rate),
                r.h1,
                rate(r.h1_rate)
            ));
        }
        out
    }
}

pub fn parse_space(v: &str) -> Result<SpaceKind> {
    match v {
        "linear" => Ok(SpaceKind::Linear),
        "bilinear" => Ok(SpaceKind::Bilinear),
        "rotated-q1" | "rotated_q1" => Ok(SpaceKind::RotatedQ1),
        other => Err(Error::BadConfig(format!("unknown space {other}"))),
    }
}

/// Result of one study level, including the built space for reuse.
pub struct LevelOutput {
    pub n: usize,
    pub h: f64,
    pub norms: ErrorNorms,
    pub cut_elements: usize,
}

/// Runs one mesh level of a study.
pub fn run_level(config: &StudyConfig, n: usize) -> Result<LevelOutput> {
    let ls = config.interface();
    let exact = config.exact();
    let mesh = build_mesh(config.domain, n, config.space.mesh_kind())?;
    let h = mesh.h;
    let space = IfeSpace::build(mesh, config.space, &ls, &config.lame)?;
    let dof_values = match config.mode {
        StudyMode::Interp => space.interpolate(|p| exact.u_at(p)),
        StudyMode::Solve => {
            let mut system = assemble(
                &space,
                &config.lame,
                &ls,
                &|side, p| exact.f(side, p),
                config.quad,
            )?;
            apply_dirichlet(&mut system, &space, &|p| exact.g(p));
            solve_cg(&system, config.cg_rel_tol, config.cg_max_iter)?.dof_values
        }
    };
    let norms = error_norms(&space, &dof_values, &exact, &ls, config.quad)?;
    Ok(LevelOutput {
        n,
        h,
        norms,
        cut_elements: space.n_cut_elements(),
    })
}

/// Runs the full doubling sequence and tabulates errors and rates.
pub fn run_convergence(config: &StudyConfig) -> Result<ConvergenceRecord> {
    let mut raw = Vec::with_capacity(config.levels);
    for level in 0..config.levels {
        let n = config.n_start << level;
        let out = run_level(config, n)?;
        raw.push((
            out.n,
            out.h,
            out.norms.l2(config.norm),
            out.norms.h1(config.norm),
        ));
    }
    Ok(ConvergenceRecord::from_errors(
        config.space,
        config.mode,
        &raw,
    ))
}
