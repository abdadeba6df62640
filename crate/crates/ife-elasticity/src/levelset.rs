//! Level-set descriptions of the material interface and the piecewise
//! constant Lamé parameters.

use nalgebra::{Point2, Vector2};

use crate::error::{Error, Result};

/// Which side of the interface a point belongs to: `Minus` where the level
/// set is negative, `Plus` where it is positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    pub fn of(value: f64) -> Side {
        if value < 0.0 {
            Side::Minus
        } else {
            Side::Plus
        }
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::Minus => Side::Plus,
            Side::Plus => Side::Minus,
        }
    }
}

/// A smooth scalar function whose zero set is the material interface.
pub trait LevelSet: Sync + Send {
    fn phi(&self, p: Point2<f64>) -> f64;
    fn grad_phi(&self, p: Point2<f64>) -> Vector2<f64>;

    fn side(&self, p: Point2<f64>) -> Side {
        Side::of(self.phi(p))
    }
}

/// Ellipse `x^2/a^2 + y^2/b^2 = 1`; negative inside.
#[derive(Debug, Clone, Copy)]
pub struct Ellipse {
    pub a: f64,
    pub b: f64,
}

impl Ellipse {
    pub fn new(a: f64, b: f64) -> Self {
        Ellipse { a, b }
    }
}

impl LevelSet for Ellipse {
    fn phi(&self, p: Point2<f64>) -> f64 {
        p.x * p.x / (self.a * self.a) + p.y * p.y / (self.b * self.b) - 1.0
    }

    fn grad_phi(&self, p: Point2<f64>) -> Vector2<f64> {
        Vector2::new(2.0 * p.x / (self.a * self.a), 2.0 * p.y / (self.b * self.b))
    }
}

/// Straight interface `n . (X - p0) = 0`; negative on the side `-n` points to.
/// Mostly useful for tests and single-element studies.
#[derive(Debug, Clone, Copy)]
pub struct HalfPlane {
    pub normal: Vector2<f64>,
    pub point: Point2<f64>,
}

impl HalfPlane {
    /// Line through `d_pt` and `e_pt`; `minus_hint` selects which side is
    /// negative.
    pub fn through(d_pt: Point2<f64>, e_pt: Point2<f64>, minus_hint: Point2<f64>) -> Self {
        let t = e_pt - d_pt;
        let mut n = Vector2::new(-t.y, t.x).normalize();
        if n.dot(&(minus_hint - d_pt)) > 0.0 {
            n = -n;
        }
        HalfPlane {
            normal: n,
            point: d_pt,
        }
    }
}

impl LevelSet for HalfPlane {
    fn phi(&self, p: Point2<f64>) -> f64 {
        self.normal.dot(&(p - self.point))
    }

    fn grad_phi(&self, _p: Point2<f64>) -> Vector2<f64> {
        self.normal
    }
}

/// Trivial level set without a zero set inside any bounded domain; every
/// point is on the plus side. Used for classical (non-interface) runs.
#[derive(Debug, Clone, Copy)]
pub struct NoInterface;

impl LevelSet for NoInterface {
    fn phi(&self, _p: Point2<f64>) -> f64 {
        1.0
    }

    fn grad_phi(&self, _p: Point2<f64>) -> Vector2<f64> {
        Vector2::zeros()
    }
}

/// Builds a catalog level set from a name and `(a, b)` parameters.
pub fn catalog(name: &str, a: f64, b: f64) -> Result<Box<dyn LevelSet>> {
    match name {
        "ellipse" => {
            if a <= 0.0 || b <= 0.0 {
                return Err(Error::BadConfig(format!(
                    "ellipse semi-axes must be positive, got a = {a}, b = {b}"
                )));
            }
            Ok(Box::new(Ellipse::new(a, b)))
        }
        "none" => Ok(Box::new(NoInterface)),
        other => Err(Error::UnknownInterface(other.to_string())),
    }
}

/// Piecewise constant Lamé parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LameField {
    pub lambda_minus: f64,
    pub lambda_plus: f64,
    pub mu_minus: f64,
    pub mu_plus: f64,
}

impl LameField {
    pub fn new(lambda_minus: f64, lambda_plus: f64, mu_minus: f64, mu_plus: f64) -> Result<Self> {
        if [lambda_minus, lambda_plus, mu_minus, mu_plus]
            .iter()
            .any(|&v| v <= 0.0 || !v.is_finite())
        {
            return Err(Error::BadConfig(
                "all Lamé parameters must be positive and finite".into(),
            ));
        }
        Ok(LameField {
            lambda_minus,
            lambda_plus,
            mu_minus,
            mu_plus,
        })
    }

    pub fn matched(lambda: f64, mu: f64) -> Self {
        LameField {
            lambda_minus: lambda,
            lambda_plus: lambda,
            mu_minus: mu,
            mu_plus: mu,
        }
    }

    pub fn lambda(&self, side: Side) -> f64 {
        match side {
            Side::Minus => self.lambda_minus,
            Side::Plus => self.lambda_plus,
        }
    }

    pub fn mu(&self, side: Side) -> f64 {
        match side {
            Side::Minus => self.mu_minus,
            Side::Plus => self.mu_plus,
        }
    }

    /// Parameter differences `lambda_plus - lambda_minus`,
    /// `mu_plus - mu_minus` that drive the interface coupling.
    pub fn hat_lambda(&self) -> f64 {
        self.lambda_plus - self.lambda_minus
    }

    pub fn hat_mu(&self) -> f64 {
        self.mu_plus - self.mu_minus
    }

    /// The same field with the roles of the two sides exchanged.
    pub fn swapped(&self) -> Self {
        LameField {
            lambda_minus: self.lambda_plus,
            lambda_plus: self.lambda_minus,
            mu_minus: self.mu_plus,
            mu_plus: self.mu_minus,
        }
    }
}
