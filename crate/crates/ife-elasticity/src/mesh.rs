//! Uniform Cartesian meshes of a square domain and degree-of-freedom maps.
//!
//! Rectangular meshes carry square cells of side `h`; triangular meshes split
//! each square along the diagonal from the lower-left to the upper-right
//! corner. Bilinear elements use the vertex ordering
//! `[lower-left, lower-right, upper-left, upper-right]`; rotated Q1 elements
//! place their degrees of freedom at edge midpoints ordered
//! `[bottom, right, top, left]`.

use nalgebra::Point2;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshKind {
    Rectangular,
    Triangular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    Linear,
    Bilinear,
    RotatedQ1,
}

impl SpaceKind {
    /// Number of local degree-of-freedom sites (per component).
    pub fn sites_per_element(&self) -> usize {
        match self {
            SpaceKind::Linear => 3,
            SpaceKind::Bilinear | SpaceKind::RotatedQ1 => 4,
        }
    }

    pub fn mesh_kind(&self) -> MeshKind {
        match self {
            SpaceKind::Linear => MeshKind::Triangular,
            _ => MeshKind::Rectangular,
        }
    }
}

impl std::fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpaceKind::Linear => write!(f, "linear"),
            SpaceKind::Bilinear => write!(f, "bilinear"),
            SpaceKind::RotatedQ1 => write!(f, "rotated-q1"),
        }
    }
}

/// Axis-aligned rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Rect {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Self {
        Rect {
            xmin,
            xmax,
            ymin,
            ymax,
        }
    }

    pub fn square(lo: f64, hi: f64) -> Self {
        Rect::new(lo, hi, lo, hi)
    }

    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }
}

/// Node connectivity of one element (3 for triangles, 4 for quads).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conn {
    Tri([usize; 3]),
    Quad([usize; 4]),
}

impl Conn {
    pub fn as_slice(&self) -> &[usize] {
        match self {
            Conn::Tri(v) => v,
            Conn::Quad(v) => v,
        }
    }

    pub fn len(&self) -> usize {
        self.as_slice().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Geometric shape of an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElemShape {
    Quad,
    /// Right triangle; corners are stored counterclockwise.
    Tri,
}

/// Standalone element geometry handed to quadrature and shape construction.
#[derive(Debug, Clone)]
pub struct ElemGeom {
    pub shape: ElemShape,
    /// Corners in counterclockwise order.
    pub corners: Vec<Point2<f64>>,
    /// Lower-left corner of the bounding box; origin of the local frame.
    pub lower_left: Point2<f64>,
    pub h: f64,
}

impl ElemGeom {
    pub fn unit_quad(h: f64, lower_left: Point2<f64>) -> Self {
        let ll = lower_left;
        ElemGeom {
            shape: ElemShape::Quad,
            corners: vec![
                ll,
                Point2::new(ll.x + h, ll.y),
                Point2::new(ll.x + h, ll.y + h),
                Point2::new(ll.x, ll.y + h),
            ],
            lower_left: ll,
            h,
        }
    }

    pub fn area(&self) -> f64 {
        polygon_area(&self.corners)
    }

    pub fn frame(&self) -> crate::poly::LocalFrame {
        crate::poly::LocalFrame {
            origin: self.lower_left,
            h: self.h,
        }
    }

    /// Containment test with a small tolerance relative to `h`.
    pub fn contains(&self, p: Point2<f64>) -> bool {
        let tol = 1e-12 * self.h;
        let m = self.corners.len();
        for i in 0..m {
            let a = self.corners[i];
            let b = self.corners[(i + 1) % m];
            let cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
            if cross < -tol * self.h {
                return false;
            }
        }
        true
    }
}

pub fn polygon_area(pts: &[Point2<f64>]) -> f64 {
    let m = pts.len();
    let mut sum = 0.0;
    for i in 0..m {
        let a = pts[i];
        let b = pts[(i + 1) % m];
        sum += a.x * b.y - b.x * a.y;
    }
    0.5 * sum
}

/// Uniform Cartesian mesh of a square domain.
#[derive(Debug, Clone)]
pub struct CartesianMesh {
    pub domain: Rect,
    pub n: usize,
    pub h: f64,
    pub kind: MeshKind,
    pub vertices: Vec<Point2<f64>>,
    pub elements: Vec<Conn>,
    /// Vertex-index pairs `(lo, hi)` of the grid edges (rectangular meshes).
    pub edges: Vec<(usize, usize)>,
    pub edge_midpoints: Vec<Point2<f64>>,
    /// Per rectangular element: edge indices `[bottom, right, top, left]`.
    pub elem_edges: Vec<[usize; 4]>,
    pub vertex_on_boundary: Vec<bool>,
    pub edge_on_boundary: Vec<bool>,
}

/// Builds a uniform mesh with `n` subdivisions per axis.
///
/// Only square cells are supported: the domain must itself be square so that
/// the mesh size stays a single scalar `h`.
pub fn build_mesh(domain: Rect, n: usize, kind: MeshKind) -> Result<CartesianMesh> {
    if n < 2 {
        return Err(Error::InvalidMesh(format!(
            "need at least 2 subdivisions per axis, got {n}"
        )));
    }
    if domain.width() <= 0.0 || domain.height() <= 0.0 {
        return Err(Error::InvalidMesh("degenerate domain".into()));
    }
    let scale = domain.width().abs().max(domain.height().abs());
    if (domain.width() - domain.height()).abs() > 1e-12 * scale {
        return Err(Error::InvalidMesh(format!(
            "domain is not square ({} x {}); a single subdivision count would \
             produce non-square cells",
            domain.width(),
            domain.height()
        )));
    }

    let h = domain.width() / n as f64;
    let np = n + 1;
    let mut vertices = Vec::with_capacity(np * np);
    for j in 0..np {
        for i in 0..np {
            vertices.push(Point2::new(
                domain.xmin + i as f64 * h,
                domain.ymin + j as f64 * h,
            ));
        }
    }
    let vid = |i: usize, j: usize| j * np + i;

    let mut elements = Vec::new();
    match kind {
        MeshKind::Rectangular => {
            for j in 0..n {
                for i in 0..n {
                    // Paper ordering: lower-left, lower-right, upper-left, upper-right.
                    elements.push(Conn::Quad([
                        vid(i, j),
                        vid(i + 1, j),
                        vid(i, j + 1),
                        vid(i + 1, j + 1),
                    ]));
                }
            }
        }
        MeshKind::Triangular => {
            // Split along the lower-left -> upper-right diagonal.
            for j in 0..n {
                for i in 0..n {
                    let (ll, lr, ul, ur) =
                        (vid(i, j), vid(i + 1, j), vid(i, j + 1), vid(i + 1, j + 1));
                    elements.push(Conn::Tri([ll, lr, ur]));
                    elements.push(Conn::Tri([ll, ur, ul]));
                }
            }
        }
    }

    // Grid edges; needed for the rotated Q1 degrees of freedom.
    let mut edges = Vec::new();
    let mut edge_on_boundary = Vec::new();
    let h_edge = |i: usize, j: usize| j * n + i;
    let n_horizontal = (n + 1) * n;
    let v_edge = |i: usize, j: usize| n_horizontal + i * n + j;
    for j in 0..np {
        for i in 0..n {
            edges.push((vid(i, j), vid(i + 1, j)));
            edge_on_boundary.push(j == 0 || j == n);
        }
    }
    for i in 0..np {
        for j in 0..n {
            edges.push((vid(i, j), vid(i, j + 1)));
            edge_on_boundary.push(i == 0 || i == n);
        }
    }
    let edge_midpoints = edges
        .iter()
        .map(|&(a, b)| Point2::from((vertices[a].coords + vertices[b].coords) * 0.5))
        .collect();

    let mut elem_edges = Vec::new();
    if kind == MeshKind::Rectangular {
        for j in 0..n {
            for i in 0..n {
                elem_edges.push([
                    h_edge(i, j),
                    v_edge(i + 1, j),
                    h_edge(i, j + 1),
                    v_edge(i, j),
                ]);
            }
        }
    }

    let mut vertex_on_boundary = vec![false; vertices.len()];
    for j in 0..np {
        for i in 0..np {
            vertex_on_boundary[vid(i, j)] = i == 0 || i == n || j == 0 || j == n;
        }
    }

    Ok(CartesianMesh {
        domain,
        n,
        h,
        kind,
        vertices,
        elements,
        edges,
        edge_midpoints,
        elem_edges,
        vertex_on_boundary,
        edge_on_boundary,
    })
}

impl CartesianMesh {
    pub fn n_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn elem_geom(&self, e: usize) -> ElemGeom {
        match self.elements[e] {
            Conn::Quad([ll, lr, ul, ur]) => ElemGeom {
                shape: ElemShape::Quad,
                corners: vec![
                    self.vertices[ll],
                    self.vertices[lr],
                    self.vertices[ur],
                    self.vertices[ul],
                ],
                lower_left: self.vertices[ll],
                h: self.h,
            },
            Conn::Tri(v) => {
                let pts: Vec<_> = v.iter().map(|&i| self.vertices[i]).collect();
                let lower_left = Point2::new(
                    pts.iter().map(|p| p.x).fold(f64::INFINITY, f64::min),
                    pts.iter().map(|p| p.y).fold(f64::INFINITY, f64::min),
                );
                ElemGeom {
                    shape: ElemShape::Tri,
                    corners: pts,
                    lower_left,
                    h: self.h,
                }
            }
        }
    }
}

/// Association of (degree-of-freedom site, component) pairs with global
/// indices; component `c` of site `s` maps to `2 s + c`.
#[derive(Debug, Clone)]
pub struct DofMap {
    pub space: SpaceKind,
    pub sites: Vec<Point2<f64>>,
    /// Per element, global site indices in local order.
    pub elem_sites: Vec<Conn>,
    pub site_on_boundary: Vec<bool>,
}

impl DofMap {
    pub fn n_dofs(&self) -> usize {
        2 * self.sites.len()
    }

    pub fn global(&self, site: usize, comp: usize) -> usize {
        2 * site + comp
    }

    pub fn is_boundary_dof(&self, dof: usize) -> bool {
        self.site_on_boundary[dof / 2]
    }

    /// Degree-of-freedom site coordinates of one element, in local order.
    pub fn elem_site_points(&self, e: usize) -> Vec<Point2<f64>> {
        self.elem_sites[e]
            .as_slice()
            .iter()
            .map(|&s| self.sites[s])
            .collect()
    }

    /// Global dof indices of one element in the vector-shape ordering: the
    /// first `|I|` local shapes carry component 0, the last `|I|` component 1.
    pub fn elem_dofs(&self, e: usize) -> Vec<usize> {
        let sites = self.elem_sites[e].as_slice();
        let mut dofs = Vec::with_capacity(2 * sites.len());
        for c in 0..2 {
            for &s in sites {
                dofs.push(self.global(s, c));
            }
        }
        dofs
    }
}

/// Builds the degree-of-freedom map of a finite element space on `mesh`.
pub fn build_dof_map(mesh: &CartesianMesh, space: SpaceKind) -> Result<DofMap> {
    if space.mesh_kind() != mesh.kind {
        return Err(Error::IncompatibleSpace {
            space,
            mesh: mesh.kind,
        });
    }
    match space {
        SpaceKind::Linear | SpaceKind::Bilinear => Ok(DofMap {
            space,
            sites: mesh.vertices.clone(),
            elem_sites: mesh.elements.clone(),
            site_on_boundary: mesh.vertex_on_boundary.clone(),
        }),
        SpaceKind::RotatedQ1 => Ok(DofMap {
            space,
            sites: mesh.edge_midpoints.clone(),
            elem_sites: mesh.elem_edges.iter().map(|&e| Conn::Quad(e)).collect(),
            site_on_boundary: mesh.edge_on_boundary.clone(),
        }),
    }
}
