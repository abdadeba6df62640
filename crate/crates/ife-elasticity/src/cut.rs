//! Classification of mesh elements against the interface and the per-element
//! cut geometry.
//!
//! On an interface element the two boundary crossings `D`, `E` span the line
//! `l` with unit normal `nbar`; `L(X) = nbar . (X - D)` is negative on the
//! "minus" side used by the shape-function construction. The construction
//! requires at least as many degree-of-freedom sites on the plus side as on
//! the minus side, so the sides may be relabelled (`flipped = true`) relative
//! to the sign of the level set.
//!
//! Case labels follow the reference configurations of the construction: a
//! triangle is always cut across one corner (`Lin1` when it is the right-angle
//! corner); a square is cut either across one corner (`Bil1`, `Rq1`-`Rq3`
//! by the number of minus-side sites) or across two opposite edges (`Bil2`,
//! `Rq4`, `Rq5`). The distances `d`, `e` locate the crossings along their
//! edges, measured from the cut corner (corner cuts) or from the minus-side
//! edge endpoints (opposite cuts), normalized by edge length.

use nalgebra::{Point2, Vector2};

use crate::error::{Error, Result};
use crate::levelset::{LevelSet, Side};
use crate::mesh::{CartesianMesh, ElemGeom, ElemShape, SpaceKind};

/// Relative bisection tolerance for edge crossings.
pub const INTERSECTION_TOL: f64 = 1e-14;
/// Crossings closer than this (relative to `h`) to a corner snap onto it.
pub const SNAP_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseLabel {
    Lin1,
    Lin2,
    Bil1,
    Bil2,
    Rq1,
    Rq2,
    Rq3,
    Rq4,
    Rq5,
}

impl std::fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CaseLabel::Lin1 => "Lin1",
            CaseLabel::Lin2 => "Lin2",
            CaseLabel::Bil1 => "Bil1",
            CaseLabel::Bil2 => "Bil2",
            CaseLabel::Rq1 => "RQ1",
            CaseLabel::Rq2 => "RQ2",
            CaseLabel::Rq3 => "RQ3",
            CaseLabel::Rq4 => "RQ4",
            CaseLabel::Rq5 => "RQ5",
        };
        write!(f, "{s}")
    }
}

/// Geometry of one interface element.
#[derive(Debug, Clone)]
pub struct InterfaceElementData {
    pub element_id: usize,
    pub space: SpaceKind,
    pub geom: ElemGeom,
    /// Degree-of-freedom sites in local order.
    pub sites: Vec<Point2<f64>>,
    /// Level-set values at the sites.
    pub site_signs: Vec<f64>,
    pub point_d: Point2<f64>,
    pub point_e: Point2<f64>,
    /// Unit normal of the line `l`; `L < 0` on the construction minus side.
    pub nbar: Vector2<f64>,
    pub case: CaseLabel,
    pub d: f64,
    pub e: f64,
    pub t0: f64,
    /// `t0 * D + (1 - t0) * E`, the traction-enforcement point.
    pub f0: Point2<f64>,
    /// Local site indices on the minus / plus side of `l`.
    pub i_minus: Vec<usize>,
    pub i_plus: Vec<usize>,
    /// True when the construction sides are swapped relative to the level
    /// set (minus side of `l` is the region where the level set is positive).
    pub flipped: bool,
}

impl InterfaceElementData {
    pub fn tbar(&self) -> Vector2<f64> {
        Vector2::new(self.nbar.y, -self.nbar.x)
    }

    /// Signed distance-like line function `L(X) = nbar . (X - D)`.
    pub fn line_value(&self, p: Point2<f64>) -> f64 {
        self.nbar.dot(&(p - self.point_d))
    }

    /// Piece selector; points exactly on `l` count as plus.
    pub fn piece_side(&self, p: Point2<f64>) -> Side {
        if self.line_value(p) < 0.0 {
            Side::Minus
        } else {
            Side::Plus
        }
    }

    /// Physical material side of the piece on construction side `s`.
    pub fn physical_side(&self, s: Side) -> Side {
        if self.flipped {
            s.opposite()
        } else {
            s
        }
    }

    /// Lamé field relabelled to the construction sides.
    pub fn construction_lame(&self, mat: &crate::levelset::LameField) -> crate::levelset::LameField {
        if self.flipped {
            mat.swapped()
        } else {
            *mat
        }
    }

    pub fn midpoint_de(&self) -> Point2<f64> {
        Point2::from((self.point_d.coords + self.point_e.coords) * 0.5)
    }
}

/// Classification result for one element.
#[derive(Debug, Clone)]
pub enum ElementClass {
    NonInterface(Side),
    Interface(Box<InterfaceElementData>),
}

/// Locates the interface crossing on the segment `p0`-`p1` by a bracketing
/// secant/bisection hybrid.
///
/// `tol` is relative to the segment length; the result `X` satisfies
/// `|phi(X)| <= tol * |grad phi(X)| * |p1 - p0|` up to the bracket width.
pub fn find_edge_intersection(
    ls: &dyn LevelSet,
    p0: Point2<f64>,
    p1: Point2<f64>,
    tol: f64,
) -> Result<Point2<f64>> {
    let f0 = ls.phi(p0);
    let f1 = ls.phi(p1);
    let prod = f0 * f1;
    if prod >= 0.0 || prod.is_nan() {
        return Err(Error::NoSignChange);
    }
    let at = |t: f64| Point2::from(p0.coords + t * (p1.coords - p0.coords));
    let (mut a, mut fa, mut b, mut fb) = (0.0, f0, 1.0, f1);
    for _ in 0..100 {
        if b - a <= tol {
            let t = 0.5 * (a + b);
            return Ok(at(t));
        }
        // Secant proposal, guarded to stay well inside the bracket.
        let mut t = b - fb * (b - a) / (fb - fa);
        let margin = 0.01 * (b - a);
        if !t.is_finite() || t <= a + margin || t >= b - margin {
            t = 0.5 * (a + b);
        }
        let ft = ls.phi(at(t));
        if ft == 0.0 {
            return Ok(at(t));
        }
        if fa * ft < 0.0 {
            b = t;
            fb = ft;
        } else {
            a = t;
            fa = ft;
        }
    }
    Err(Error::IntersectionNoConvergence(100))
}

/// Degree-of-freedom sites of an element in local order, derived from the
/// geometry alone (kept consistent with [`crate::mesh::DofMap`]).
pub fn local_dof_sites(geom: &ElemGeom, space: SpaceKind) -> Vec<Point2<f64>> {
    let c = &geom.corners;
    match (geom.shape, space) {
        (ElemShape::Tri, SpaceKind::Linear) => c.clone(),
        (ElemShape::Quad, SpaceKind::Bilinear) => {
            // Paper-style zigzag: lower-left, lower-right, upper-left, upper-right.
            vec![c[0], c[1], c[3], c[2]]
        }
        (ElemShape::Quad, SpaceKind::RotatedQ1) => {
            let mid = |p: Point2<f64>, q: Point2<f64>| Point2::from((p.coords + q.coords) * 0.5);
            vec![
                mid(c[0], c[1]), // bottom
                mid(c[1], c[2]), // right
                mid(c[2], c[3]), // top
                mid(c[3], c[0]), // left
            ]
        }
        _ => panic!("incompatible element shape / space pairing"),
    }
}

/// Classifies one mesh element against the interface.
pub fn classify_element(
    mesh: &CartesianMesh,
    space: SpaceKind,
    ls: &dyn LevelSet,
    element_id: usize,
) -> Result<ElementClass> {
    classify_geom(&mesh.elem_geom(element_id), space, ls, element_id)
}

/// Core classification on a standalone element geometry.
pub fn classify_geom(
    geom: &ElemGeom,
    space: SpaceKind,
    ls: &dyn LevelSet,
    element_id: usize,
) -> Result<ElementClass> {
    let corners = &geom.corners;
    let m = corners.len();
    let phis: Vec<f64> = corners.iter().map(|&p| ls.phi(p)).collect();
    let h = geom.h;

    // Edge crossings with vertex snapping.
    let mut crossings: Vec<(usize, Point2<f64>)> = Vec::new();
    for k in 0..m {
        let (p0, p1) = (corners[k], corners[(k + 1) % m]);
        let (f0, f1) = (phis[k], phis[(k + 1) % m]);
        if f0 * f1 < 0.0 {
            let mut x = find_edge_intersection(ls, p0, p1, INTERSECTION_TOL)?;
            if (x - p0).norm() <= SNAP_TOL * h {
                x = p0;
            } else if (x - p1).norm() <= SNAP_TOL * h {
                x = p1;
            }
            crossings.push((k, x));
        } else if f0 != 0.0 && f0.signum() == f1.signum() {
            let mid = Point2::from((p0.coords + p1.coords) * 0.5);
            if ls.phi(mid) * f0 < 0.0 {
                return Err(Error::HypothesisViolation {
                    element: element_id,
                    hypothesis: "H1",
                    detail: format!(
                        "the interface crosses one edge twice (edge {k} of element {element_id})"
                    ),
                });
            }
        }
    }

    // Merge crossings that snapped onto the same corner.
    let mut distinct: Vec<(usize, Point2<f64>)> = Vec::new();
    for (k, x) in crossings {
        if distinct.iter().all(|&(_, y)| (x - y).norm() > 1e-12 * h) {
            distinct.push((k, x));
        }
    }

    let side_by_majority = || {
        let &far = phis
            .iter()
            .max_by(|a, b| a.abs().total_cmp(&b.abs()))
            .unwrap();
        Side::of(far)
    };

    match distinct.len() {
        0 | 1 => return Ok(ElementClass::NonInterface(side_by_majority())),
        2 => {}
        n => {
            return Err(Error::HypothesisViolation {
                element: element_id,
                hypothesis: "H1/H2",
                detail: format!("{n} boundary crossings on element {element_id}"),
            })
        }
    }

    let (edge_a, pa) = distinct[0];
    let (edge_b, pb) = distinct[1];
    if edge_a == edge_b {
        return Err(Error::HypothesisViolation {
            element: element_id,
            hypothesis: "H2",
            detail: format!("both crossings lie on edge {edge_a} of element {element_id}"),
        });
    }

    // Both crossings on one edge line (e.g. both snapped onto the endpoints
    // of the same edge): the interior is untouched.
    let chord = pb - pa;
    if chord.norm() <= 1e-12 * h {
        return Ok(ElementClass::NonInterface(side_by_majority()));
    }
    for k in 0..m {
        let t = corners[(k + 1) % m] - corners[k];
        let on_line = |p: Point2<f64>| {
            let r = p - corners[k];
            (t.x * r.y - t.y * r.x).abs() <= 1e-12 * h * h
        };
        if on_line(pa) && on_line(pb) {
            return Ok(ElementClass::NonInterface(side_by_majority()));
        }
    }

    // Line normal, oriented so that L agrees in sign with the level set at
    // the corner farthest from the line.
    let mut nbar = Vector2::new(-chord.y, chord.x).normalize();
    let line_val = |n: &Vector2<f64>, p: Point2<f64>| n.dot(&(p - pa));
    let far = (0..m)
        .max_by(|&i, &j| {
            line_val(&nbar, corners[i])
                .abs()
                .total_cmp(&line_val(&nbar, corners[j]).abs())
        })
        .unwrap();
    if line_val(&nbar, corners[far]) * phis[far] < 0.0 {
        nbar = -nbar;
    }
    let mut flipped = false;

    let sites = local_dof_sites(geom, space);
    let site_signs: Vec<f64> = sites.iter().map(|&p| ls.phi(p)).collect();
    let partition = |n: &Vector2<f64>| {
        let mut minus = Vec::new();
        let mut plus = Vec::new();
        for (i, &s) in sites.iter().enumerate() {
            if line_val(n, s) < 0.0 {
                minus.push(i);
            } else {
                plus.push(i);
            }
        }
        (minus, plus)
    };
    let (mut i_minus, mut i_plus) = partition(&nbar);

    // Structural configuration: shared corner (corner cut) or opposite edges.
    let shared_corner = shared_corner_of(m, edge_a, edge_b);

    // The construction assumes |I+| >= |I-|; on exact ties of a corner cut,
    // prefer the corner side as minus.
    let must_flip = if i_minus.len() > i_plus.len() {
        true
    } else if i_minus.len() == i_plus.len() {
        match shared_corner {
            Some(v) => line_val(&nbar, corners[v]) > 0.0,
            None => false,
        }
    } else {
        false
    };
    if must_flip {
        nbar = -nbar;
        flipped = true;
        let (mi, pl) = partition(&nbar);
        i_minus = mi;
        i_plus = pl;
    }

    // Case label, normalized crossing parameters and the D/E roles.
    let (case, d, e, point_d, point_e) = match geom.shape {
        ElemShape::Tri => {
            let v = shared_corner.ok_or_else(|| Error::HypothesisViolation {
                element: element_id,
                hypothesis: "H2",
                detail: "triangle cut across non-adjacent edges".into(),
            })?;
            let vc = corners[v];
            let right_angle = is_right_angle(corners, v);
            let case = if right_angle {
                CaseLabel::Lin1
            } else {
                CaseLabel::Lin2
            };
            // D on the lower-indexed edge.
            let ((ka, xa), (kb, xb)) = ((edge_a, pa), (edge_b, pb));
            let ((_, pd), (_, pe)) = if ka < kb {
                ((ka, xa), (kb, xb))
            } else {
                ((kb, xb), (ka, xa))
            };
            let d = norm_param(pd, vc, edge_len(corners, nearest_edge(corners, pd, vc)));
            let e = norm_param(pe, vc, edge_len(corners, nearest_edge(corners, pe, vc)));
            (case, d, e, pd, pe)
        }
        ElemShape::Quad => {
            match shared_corner {
                Some(v) => {
                    // Corner cut: D on the horizontal edge, E on the vertical one.
                    let vc = corners[v];
                    let (ph, pv) = if edge_is_horizontal(corners, edge_a) {
                        (pa, pb)
                    } else {
                        (pb, pa)
                    };
                    let d = ((ph - vc).norm() / h).clamp(0.0, 1.0);
                    let e = ((pv - vc).norm() / h).clamp(0.0, 1.0);
                    let case = match space {
                        SpaceKind::Bilinear => CaseLabel::Bil1,
                        SpaceKind::RotatedQ1 => match i_minus.len() {
                            0 => CaseLabel::Rq1,
                            1 => CaseLabel::Rq2,
                            2 => CaseLabel::Rq3,
                            n => {
                                return Err(Error::DegenerateCut {
                                    element: element_id,
                                    detail: format!("corner cut with {n} minus midpoints"),
                                })
                            }
                        },
                        SpaceKind::Linear => unreachable!(),
                    };
                    (case, d, e, ph, pv)
                }
                None => {
                    // Opposite-edge cut. D on the bottom (horizontal pair) or
                    // left (vertical pair) edge; distances measured from the
                    // minus-side endpoints.
                    let (pd, pe, kd, ke) = if edge_is_horizontal(corners, edge_a) {
                        if edge_a == 0 {
                            (pa, pb, edge_a, edge_b)
                        } else {
                            (pb, pa, edge_b, edge_a)
                        }
                    } else if edge_a == 3 {
                        (pa, pb, edge_a, edge_b)
                    } else {
                        (pb, pa, edge_b, edge_a)
                    };
                    let minus_end = |k: usize| {
                        let (q0, q1) = (corners[k], corners[(k + 1) % m]);
                        if line_val(&nbar, q0) < 0.0 {
                            q0
                        } else {
                            q1
                        }
                    };
                    let d = ((pd - minus_end(kd)).norm() / h).clamp(0.0, 1.0);
                    let e = ((pe - minus_end(ke)).norm() / h).clamp(0.0, 1.0);
                    let case = match space {
                        SpaceKind::Bilinear => CaseLabel::Bil2,
                        SpaceKind::RotatedQ1 => match i_minus.len() {
                            1 => CaseLabel::Rq4,
                            2 => CaseLabel::Rq5,
                            n => {
                                return Err(Error::DegenerateCut {
                                    element: element_id,
                                    detail: format!("opposite cut with {n} minus midpoints"),
                                })
                            }
                        },
                        SpaceKind::Linear => unreachable!(),
                    };
                    (case, d, e, pd, pe)
                }
            }
        }
    };

    let (t0, f0) = select_f0(case, d, e, point_d, point_e).map_err(|err| match err {
        Error::DegenerateCut { detail, .. } => Error::DegenerateCut {
            element: element_id,
            detail,
        },
        other => other,
    })?;

    Ok(ElementClass::Interface(Box::new(InterfaceElementData {
        element_id,
        space,
        geom: geom.clone(),
        sites,
        site_signs,
        point_d,
        point_e,
        nbar,
        case,
        d,
        e,
        t0,
        f0,
        i_minus,
        i_plus,
        flipped,
    })))
}

/// Picks the traction-enforcement point `F0 = t0 D + (1 - t0) E` for a case.
///
/// Bilinear corner cuts use `t0 = e / (d + e)`; bilinear opposite cuts use
/// `t0 = 1 - e` for `d >= e` and its mirror image `t0 = d` otherwise (the
/// rule must be invariant under relabelling the two crossings, and the
/// solvability bound fails on a fat parameter set without the mirrored
/// branch); rotated Q1 corner cuts pick the crossing farther from the
/// corner; the remaining cases take the chord midpoint (for the linear
/// space the gradients are constant, so any point works).
pub fn select_f0(
    case: CaseLabel,
    d: f64,
    e: f64,
    point_d: Point2<f64>,
    point_e: Point2<f64>,
) -> Result<(f64, Point2<f64>)> {
    let t0 = match case {
        CaseLabel::Lin1 | CaseLabel::Lin2 | CaseLabel::Rq1 => 0.5,
        CaseLabel::Bil1 => {
            if d + e <= f64::EPSILON {
                return Err(Error::DegenerateCut {
                    element: usize::MAX,
                    detail: "corner cut with d + e = 0".into(),
                });
            }
            e / (d + e)
        }
        CaseLabel::Bil2 => {
            if d >= e {
                1.0 - e
            } else {
                d
            }
        }
        CaseLabel::Rq2 | CaseLabel::Rq3 => {
            if d >= e {
                1.0
            } else {
                0.0
            }
        }
        CaseLabel::Rq4 | CaseLabel::Rq5 => 0.5,
    };
    let f0 = Point2::from(t0 * point_d.coords + (1.0 - t0) * point_e.coords);
    Ok((t0, f0))
}

fn shared_corner_of(m: usize, edge_a: usize, edge_b: usize) -> Option<usize> {
    // Edge k runs from corner k to corner k+1.
    let (a, b) = (edge_a.min(edge_b), edge_a.max(edge_b));
    if (a + 1) % m == b {
        Some(b)
    } else if (b + 1) % m == a {
        Some(a)
    } else {
        None
    }
}

fn is_right_angle(corners: &[Point2<f64>], v: usize) -> bool {
    let m = corners.len();
    let prev = corners[(v + m - 1) % m] - corners[v];
    let next = corners[(v + 1) % m] - corners[v];
    prev.dot(&next).abs() <= 1e-10 * prev.norm() * next.norm()
}

fn edge_is_horizontal(corners: &[Point2<f64>], k: usize) -> bool {
    let t = corners[(k + 1) % corners.len()] - corners[k];
    t.y.abs() <= t.x.abs()
}

fn edge_len(corners: &[Point2<f64>], k: usize) -> f64 {
    (corners[(k + 1) % corners.len()] - corners[k]).norm()
}

fn nearest_edge(corners: &[Point2<f64>], p: Point2<f64>, v: Point2<f64>) -> usize {
    // Edge through both p and v (p lies on an edge adjacent to the corner v).
    let m = corners.len();
    (0..m)
        .min_by(|&i, &j| {
            let dist = |k: usize| {
                let a = corners[k];
                let t = corners[(k + 1) % m] - a;
                let cross_p = (t.x * (p.y - a.y) - t.y * (p.x - a.x)).abs();
                let cross_v = (t.x * (v.y - a.y) - t.y * (v.x - a.x)).abs();
                cross_p + cross_v
            };
            dist(i).total_cmp(&dist(j))
        })
        .unwrap()
}

fn norm_param(p: Point2<f64>, v: Point2<f64>, len: f64) -> f64 {
    ((p - v).norm() / len).clamp(0.0, 1.0)
}

/// Synthetic cut descriptions for single-element studies and sweeps.
#[derive(Debug, Clone, Copy)]
pub enum CutSpec {
    /// Straight cut across the two edges adjacent to a corner (counter-
    /// clockwise corner index); `d` along the next edge, `e` along the
    /// previous one, both in (0, 1).
    Corner { corner: usize, d: f64, e: f64 },
    /// Straight cut across two opposite edges: bottom/top (`vertical =
    /// false`, parameters measured from the left) or left/right (`vertical =
    /// true`, measured from the bottom).
    Opposite { vertical: bool, d: f64, e: f64 },
}

/// Builds a straight-line level set realizing `spec` on `geom`.
///
/// `minus_on_first_side` controls which side of the line carries negative
/// level-set values: for corner cuts the corner region, for opposite cuts
/// the region containing the measuring endpoints.
pub fn synthetic_cut(
    geom: &ElemGeom,
    spec: CutSpec,
    minus_on_first_side: bool,
) -> crate::levelset::HalfPlane {
    let c = &geom.corners;
    let m = c.len();
    let (pd, pe, hint) = match spec {
        CutSpec::Corner { corner, d, e } => {
            let v = c[corner];
            let next = c[(corner + 1) % m];
            let prev = c[(corner + m - 1) % m];
            (
                Point2::from(v.coords + d * (next - v)),
                Point2::from(v.coords + e * (prev - v)),
                v,
            )
        }
        CutSpec::Opposite { vertical, d, e } => {
            assert_eq!(geom.shape, ElemShape::Quad);
            if vertical {
                // left edge c3->c0 and right edge c1->c2, measured from bottom
                let pd = Point2::from(c[0].coords + d * (c[3] - c[0]));
                let pe = Point2::from(c[1].coords + e * (c[2] - c[1]));
                (pd, pe, Point2::from((c[0].coords + c[1].coords) * 0.5))
            } else {
                let pd = Point2::from(c[0].coords + d * (c[1] - c[0]));
                let pe = Point2::from(c[3].coords + e * (c[2] - c[3]));
                (pd, pe, Point2::from((c[0].coords + c[3].coords) * 0.5))
            }
        }
    };
    let mut hp = crate::levelset::HalfPlane::through(pd, pe, hint);
    if !minus_on_first_side {
        hp.normal = -hp.normal;
    }
    hp
}
