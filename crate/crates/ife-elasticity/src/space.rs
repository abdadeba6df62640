//! The global immersed finite element space: one role per element (standard
//! polynomial or immersed shape set) plus the degree-of-freedom map.

use nalgebra::{Matrix2, Point2, Vector2};
use rayon::prelude::*;

use crate::cut::{classify_element, local_dof_sites, ElementClass};
use crate::error::Result;
use crate::levelset::{LameField, LevelSet, Side};
use crate::mesh::{build_dof_map, CartesianMesh, DofMap, SpaceKind};
use crate::poly::{lagrange_scalar_basis, Basis, VectorPoly};
use crate::shapes::{construct_ife_shapes, IfeShapeSet};

/// Role of one element within the space.
#[derive(Debug, Clone)]
pub enum ElementRole {
    /// Untouched by the interface; carries the level-set side of the element.
    Standard(Side),
    /// Cut element with constructed immersed shape functions.
    Cut(Box<IfeShapeSet>),
}

/// A finite element space bound to one mesh, interface and material field.
#[derive(Debug)]
pub struct IfeSpace {
    pub mesh: CartesianMesh,
    pub dof_map: DofMap,
    pub space: SpaceKind,
    pub roles: Vec<ElementRole>,
}

impl IfeSpace {
    /// Classifies every element and constructs immersed shape functions on
    /// the cut ones.
    pub fn build(
        mesh: CartesianMesh,
        space: SpaceKind,
        ls: &dyn LevelSet,
        mat: &LameField,
    ) -> Result<Self> {
        let dof_map = build_dof_map(&mesh, space)?;
        let roles: Result<Vec<ElementRole>> = (0..mesh.n_elements())
            .into_par_iter()
            .map(|e| {
                Ok(match classify_element(&mesh, space, ls, e)? {
                    ElementClass::NonInterface(side) => ElementRole::Standard(side),
                    ElementClass::Interface(data) => {
                        ElementRole::Cut(Box::new(construct_ife_shapes(&data, mat)?))
                    }
                })
            })
            .collect();
        Ok(IfeSpace {
            dof_map,
            space,
            roles: roles?,
            mesh,
        })
    }

    pub fn n_dofs(&self) -> usize {
        self.dof_map.n_dofs()
    }

    pub fn n_cut_elements(&self) -> usize {
        self.roles
            .iter()
            .filter(|r| matches!(r, ElementRole::Cut(_)))
            .count()
    }

    /// Nodal interpolation: evaluates `u` at every degree-of-freedom site.
    pub fn interpolate(&self, u: impl Fn(Point2<f64>) -> Vector2<f64>) -> Vec<f64> {
        let mut values = vec![0.0; self.n_dofs()];
        for (s, &p) in self.dof_map.sites.iter().enumerate() {
            let v = u(p);
            values[self.dof_map.global(s, 0)] = v.x;
            values[self.dof_map.global(s, 1)] = v.y;
        }
        values
    }

    /// The standard vector shape functions of an uncut element.
    pub fn standard_element_shapes(&self, e: usize) -> Vec<VectorPoly> {
        let geom = self.mesh.elem_geom(e);
        let sites = local_dof_sites(&geom, self.space);
        crate::shapes::standard_shapes(self.space, &geom, &sites)
    }

    /// The element-local restriction of a global coefficient field.
    pub fn local_field(&self, e: usize, dof_values: &[f64]) -> LocalField {
        let dofs = self.dof_map.elem_dofs(e);
        let local: Vec<f64> = dofs.iter().map(|&g| dof_values[g]).collect();
        let m = local.len() / 2;
        match &self.roles[e] {
            ElementRole::Standard(_) => {
                let geom = self.mesh.elem_geom(e);
                let sites = local_dof_sites(&geom, self.space);
                let basis = Basis::for_space(self.space);
                let frame = geom.frame();
                let scalar = lagrange_scalar_basis(basis, frame, &sites);
                let mut poly = VectorPoly::zero(basis, frame);
                for i in 0..m {
                    poly.add_scaled_scalar(0, &scalar[i], local[i]);
                    poly.add_scaled_scalar(1, &scalar[i], local[m + i]);
                }
                LocalField::Uniform(poly)
            }
            ElementRole::Cut(shapes) => {
                let basis = Basis::for_space(self.space);
                let frame = shapes.data.geom.frame();
                let mut minus = VectorPoly::zero(basis, frame);
                let mut plus = VectorPoly::zero(basis, frame);
                for (k, &w) in local.iter().enumerate() {
                    minus.add_scaled(&shapes.pieces[k].0, w);
                    plus.add_scaled(&shapes.pieces[k].1, w);
                }
                LocalField::Split {
                    minus,
                    plus,
                    nbar: shapes.data.nbar,
                    point_d: shapes.data.point_d,
                }
            }
        }
    }
}

/// Element-local restriction of a discrete field: a single polynomial, or a
/// pair of polynomials split by the chord.
#[derive(Debug, Clone)]
pub enum LocalField {
    Uniform(VectorPoly),
    Split {
        minus: VectorPoly,
        plus: VectorPoly,
        nbar: Vector2<f64>,
        point_d: Point2<f64>,
    },
}

impl LocalField {
    fn select(&self, p: Point2<f64>) -> &VectorPoly {
        match self {
            LocalField::Uniform(poly) => poly,
            LocalField::Split {
                minus,
                plus,
                nbar,
                point_d,
            } => {
                if nbar.dot(&(p - point_d)) < 0.0 {
                    minus
                } else {
                    plus
                }
            }
        }
    }

    pub fn eval(&self, p: Point2<f64>) -> Vector2<f64> {
        self.select(p).eval(p)
    }

    pub fn grad(&self, p: Point2<f64>) -> Matrix2<f64> {
        self.select(p).grad(p)
    }

    pub fn hess(&self, p: Point2<f64>) -> [Matrix2<f64>; 2] {
        self.select(p).hess(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levelset::Ellipse;
    use crate::mesh::{build_mesh, MeshKind, Rect};
    use approx::assert_relative_eq;

    fn paper_setup() -> (Ellipse, LameField) {
        let a = crate::exact::BENCHMARK_SEMI_AXIS;
        (
            Ellipse::new(a, a),
            LameField::new(1.0, 5.0, 2.0, 10.0).unwrap(),
        )
    }

    #[test]
    fn build_classifies_and_constructs() {
        let (ellipse, mat) = paper_setup();
        let mesh = build_mesh(Rect::square(-1.0, 1.0), 10, MeshKind::Rectangular).unwrap();
        let space = IfeSpace::build(mesh, SpaceKind::Bilinear, &ellipse, &mat).unwrap();
        assert!(space.n_cut_elements() > 0);
        assert_eq!(space.n_dofs(), 242);
    }

    #[test]
    fn constant_interpolation_is_exact_everywhere() {
        // Partition of unity: a constant field is reproduced exactly on both
        // pieces of every element.
        let (ellipse, mat) = paper_setup();
        for (space_kind, mesh_kind) in [
            (SpaceKind::Bilinear, MeshKind::Rectangular),
            (SpaceKind::RotatedQ1, MeshKind::Rectangular),
            (SpaceKind::Linear, MeshKind::Triangular),
        ] {
            let mesh = build_mesh(Rect::square(-1.0, 1.0), 8, mesh_kind).unwrap();
            let space = IfeSpace::build(mesh, space_kind, &ellipse, &mat).unwrap();
            let c = Vector2::new(0.7, -1.3);
            let dofs = space.interpolate(|_| c);
            for e in 0..space.mesh.n_elements() {
                let lf = space.local_field(e, &dofs);
                let g = space.mesh.elem_geom(e);
                let probe = Point2::from(
                    g.corners
                        .iter()
                        .fold(Vector2::zeros(), |acc, p| acc + p.coords)
                        / g.corners.len() as f64,
                );
                assert!((lf.eval(probe) - c).norm() < 1e-12);
                assert!(lf.grad(probe).norm() < 1e-11);
            }
        }
    }

    #[test]
    fn interpolant_is_nodally_exact() {
        let (ellipse, mat) = paper_setup();
        let mesh = build_mesh(Rect::square(-1.0, 1.0), 6, MeshKind::Rectangular).unwrap();
        let space = IfeSpace::build(mesh, SpaceKind::Bilinear, &ellipse, &mat).unwrap();
        let u = |p: Point2<f64>| Vector2::new((p.x * 2.1).sin(), p.y * p.y - p.x);
        let dofs = space.interpolate(u);
        for e in 0..space.mesh.n_elements() {
            let lf = space.local_field(e, &dofs);
            for &s in space.dof_map.elem_sites[e].as_slice() {
                let site = space.dof_map.sites[s];
                assert!((lf.eval(site) - u(site)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn matched_linear_field_reproduced_globally() {
        // With matched materials a globally affine displacement lies in the
        // space, so its interpolant equals it everywhere.
        let ellipse = paper_setup().0;
        let mat = LameField::matched(2.0, 1.0);
        let mesh = build_mesh(Rect::square(-1.0, 1.0), 8, MeshKind::Rectangular).unwrap();
        let space = IfeSpace::build(mesh, SpaceKind::Bilinear, &ellipse, &mat).unwrap();
        let u = |p: Point2<f64>| Vector2::new(0.3 * p.x - 0.2 * p.y + 1.0, p.x + 0.5 * p.y);
        let dofs = space.interpolate(u);
        for e in 0..space.mesh.n_elements() {
            let lf = space.local_field(e, &dofs);
            let g = space.mesh.elem_geom(e);
            for t in [(0.21, 0.43), (0.77, 0.11), (0.5, 0.9)] {
                let p = Point2::new(
                    g.lower_left.x + t.0 * g.h,
                    g.lower_left.y + t.1 * g.h,
                );
                if g.contains(p) {
                    assert!((lf.eval(p) - u(p)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn cut_element_count_scales_linearly() {
        let (ellipse, mat) = paper_setup();
        let mut counts = Vec::new();
        for n in [8usize, 16, 32] {
            let mesh = build_mesh(Rect::square(-1.0, 1.0), n, MeshKind::Rectangular).unwrap();
            let space = IfeSpace::build(mesh, SpaceKind::Bilinear, &ellipse, &mat).unwrap();
            counts.push(space.n_cut_elements());
        }
        assert!(counts[1] > counts[0] && counts[2] > counts[1]);
        assert!(counts[2] < 4 * counts[0], "counts {counts:?}");
        let h = 2.0 / 32.0;
        let circumference = std::f64::consts::PI * 2.0 * 0.5002536;
        assert_relative_eq!(
            counts[2] as f64,
            circumference / h,
            max_relative = 0.45
        );
    }
}
