//! Small fixed-size 2-D vector/matrix types used throughout the crate.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

/// A 2-D vector (position, gradient, covector — context decides).
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    #[inline]
    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// Euclidean norm.
    #[inline]
    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn angle(theta: f64) -> Self {
        Vec2::new(theta.cos(), theta.sin())
    }

    /// Rotate by +90 degrees.
    #[inline]
    pub fn perp(self) -> Self {
        Vec2::new(-self.y, self.x)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn div(self, s: f64) -> Vec2 {
        Vec2::new(self.x / s, self.y / s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Symmetric 2x2 matrix, stored as (xx, xy, yy).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        xx: 1.0,
        xy: 0.0,
        yy: 1.0,
    };

    #[inline]
    pub fn diag(a: f64, b: f64) -> Self {
        Mat2 {
            xx: a,
            xy: 0.0,
            yy: b,
        }
    }

    #[inline]
    pub fn apply(self, v: Vec2) -> Vec2 {
        Vec2::new(self.xx * v.x + self.xy * v.y, self.xy * v.x + self.yy * v.y)
    }

    /// v . (M v)
    #[inline]
    pub fn quad_form(self, v: Vec2) -> f64 {
        self.apply(v).dot(v)
    }

    /// Eigenvalues of the symmetric matrix, ascending.
    pub fn eigenvalues(self) -> (f64, f64) {
        let tr = self.xx + self.yy;
        let det = self.xx * self.yy - self.xy * self.xy;
        let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
        (tr / 2.0 - disc, tr / 2.0 + disc)
    }

    /// Positive-definite check via eigenvalues.
    pub fn is_positive_definite(self) -> bool {
        self.eigenvalues().0 > 0.0
    }

    /// Symmetric square root of a positive-definite matrix.
    pub fn sqrt_pd(self) -> Mat2 {
        // For diagonal input this must be exactly diagonal.
        if self.xy == 0.0 {
            return Mat2::diag(self.xx.sqrt(), self.yy.sqrt());
        }
        let (l1, l2) = self.eigenvalues();
        // eigenvector for l1
        let v = if self.xy.abs() > 1e-300 {
            let e = Vec2::new(l1 - self.yy, self.xy);
            e / e.norm()
        } else {
            Vec2::new(1.0, 0.0)
        };
        let w = v.perp();
        let (s1, s2) = (l1.sqrt(), l2.sqrt());
        Mat2 {
            xx: s1 * v.x * v.x + s2 * w.x * w.x,
            xy: s1 * v.x * v.y + s2 * w.x * w.y,
            yy: s1 * v.y * v.y + s2 * w.y * w.y,
        }
    }

    pub fn inverse(self) -> Mat2 {
        let det = self.xx * self.yy - self.xy * self.xy;
        Mat2 {
            xx: self.yy / det,
            xy: -self.xy / det,
            yy: self.xx / det,
        }
    }
}
