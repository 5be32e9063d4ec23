use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A point (or vector) in R² or R³.
///
/// Planar points keep `z = 0`, so mixed arithmetic between a planar point and
/// its embedding in space is exact. The stored dimension only controls
/// serialization and sampling.
#[derive(Clone, Copy, PartialEq)]
pub struct Point {
    xyz: [f64; 3],
    dim: u8,
}

impl Point {
    pub const ORIGIN_2D: Point = Point {
        xyz: [0.0; 3],
        dim: 2,
    };

    pub fn new2(x: f64, y: f64) -> Self {
        Point {
            xyz: [x, y, 0.0],
            dim: 2,
        }
    }

    pub fn new3(x: f64, y: f64, z: f64) -> Self {
        Point {
            xyz: [x, y, z],
            dim: 3,
        }
    }

    /// Origin of the given dimension.
    pub fn zero(dim: usize) -> Self {
        Point {
            xyz: [0.0; 3],
            dim: dim as u8,
        }
    }

    /// Builds a point from a coordinate slice of length 2 or 3, rejecting
    /// non-finite values.
    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPoint(format!(
                "non-finite coordinate in {coords:?}"
            )));
        }
        match *coords {
            [x, y] => Ok(Point::new2(x, y)),
            [x, y, z] => Ok(Point::new3(x, y, z)),
            _ => Err(Error::UnsupportedDimension(coords.len())),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn x(&self) -> f64 {
        self.xyz[0]
    }

    pub fn y(&self) -> f64 {
        self.xyz[1]
    }

    pub fn z(&self) -> f64 {
        self.xyz[2]
    }

    pub fn coord(&self, axis: usize) -> f64 {
        self.xyz[axis]
    }

    pub fn coords(&self) -> &[f64] {
        &self.xyz[..self.dim()]
    }

    /// Same coordinates, different nominal dimension (z must be zero to go to 2D).
    pub fn with_dim(mut self, dim: usize) -> Self {
        self.dim = dim as u8;
        if dim == 2 {
            self.xyz[2] = 0.0;
        }
        self
    }

    pub fn is_finite(&self) -> bool {
        self.xyz.iter().all(|c| c.is_finite())
    }

    pub fn dot(&self, other: &Point) -> f64 {
        self.xyz[0] * other.xyz[0] + self.xyz[1] * other.xyz[1] + self.xyz[2] * other.xyz[2]
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dist(&self, other: &Point) -> f64 {
        (*self - *other).norm()
    }

    pub fn dist_sq(&self, other: &Point) -> f64 {
        (*self - *other).norm_sq()
    }

    /// Unit vector in the same direction; `None` for the zero vector.
    pub fn normalized(&self) -> Option<Point> {
        let n = self.norm();
        (n > 0.0).then(|| *self * (1.0 / n))
    }

    pub fn lerp(&self, other: &Point, t: f64) -> Point {
        *self + (*other - *self) * t
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        self.lerp(other, 0.5)
    }

    /// z-component of the cross product (planar orientation).
    pub fn cross2(&self, other: &Point) -> f64 {
        self.xyz[0] * other.xyz[1] - self.xyz[1] * other.xyz[0]
    }

    pub fn cross(&self, other: &Point) -> Point {
        let [a1, a2, a3] = self.xyz;
        let [b1, b2, b3] = other.xyz;
        Point::new3(a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1)
    }

    /// Planar rotation by `angle` radians about the origin.
    pub fn rotate2(&self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point {
            xyz: [
                c * self.x() - s * self.y(),
                s * self.x() + c * self.y(),
                self.z(),
            ],
            dim: self.dim,
        }
    }

    /// Left normal in the plane.
    pub fn perp2(&self) -> Point {
        Point {
            xyz: [-self.y(), self.x(), 0.0],
            dim: self.dim,
        }
    }

    /// Angle in `[0, π]` between two non-zero vectors.
    pub fn angle_to(&self, other: &Point) -> f64 {
        let c = self.dot(other) / (self.norm() * other.norm());
        // atan2 form is accurate near 0 and π
        let s = self.cross(other).norm() / (self.norm() * other.norm());
        s.atan2(c)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim == 2 {
            write!(f, "({}, {})", self.xyz[0], self.xyz[1])
        } else {
            write!(f, "({}, {}, {})", self.xyz[0], self.xyz[1], self.xyz[2])
        }
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point {
            xyz: [
                self.xyz[0] + o.xyz[0],
                self.xyz[1] + o.xyz[1],
                self.xyz[2] + o.xyz[2],
            ],
            dim: self.dim.max(o.dim),
        }
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point {
            xyz: [
                self.xyz[0] - o.xyz[0],
                self.xyz[1] - o.xyz[1],
                self.xyz[2] - o.xyz[2],
            ],
            dim: self.dim.max(o.dim),
        }
    }
}

impl AddAssign for Point {
    fn add_assign(&mut self, o: Point) {
        *self = *self + o;
    }
}

impl SubAssign for Point {
    fn sub_assign(&mut self, o: Point) {
        *self = *self - o;
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point {
            xyz: [self.xyz[0] * s, self.xyz[1] * s, self.xyz[2] * s],
            dim: self.dim,
        }
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        self * -1.0
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let coords = self.coords();
        let mut seq = serializer.serialize_seq(Some(coords.len()))?;
        for c in coords {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct PointVisitor;

        impl<'de> Visitor<'de> for PointVisitor {
            type Value = Point;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an array of 2 or 3 finite numbers")
            }

            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<Point, A::Error> {
                let mut coords = Vec::with_capacity(3);
                while let Some(c) = seq.next_element::<f64>()? {
                    coords.push(c);
                }
                Point::from_slice(&coords).map_err(de::Error::custom)
            }
        }

        deserializer.deserialize_seq(PointVisitor)
    }
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Point,
    pub max: Point,
}

impl Aabb {
    pub fn empty(dim: usize) -> Self {
        let inf = f64::INFINITY;
        let mut min = Point::zero(dim);
        let mut max = Point::zero(dim);
        for a in 0..dim {
            min.xyz[a] = inf;
            max.xyz[a] = -inf;
        }
        Aabb { min, max }
    }

    pub fn from_points<'a>(points: impl IntoIterator<Item = &'a Point>, dim: usize) -> Self {
        let mut b = Aabb::empty(dim);
        for p in points {
            b.include(p);
        }
        b
    }

    pub fn include(&mut self, p: &Point) {
        for a in 0..self.dim() {
            self.min.xyz[a] = self.min.xyz[a].min(p.xyz[a]);
            self.max.xyz[a] = self.max.xyz[a].max(p.xyz[a]);
        }
    }

    pub fn merge(&mut self, other: &Aabb) {
        self.include(&other.min);
        self.include(&other.max);
    }

    pub fn dim(&self) -> usize {
        self.min.dim()
    }

    pub fn inflate(&self, by: f64) -> Aabb {
        let mut b = *self;
        for a in 0..self.dim() {
            b.min.xyz[a] -= by;
            b.max.xyz[a] += by;
        }
        b
    }

    pub fn extent(&self, axis: usize) -> f64 {
        self.max.xyz[axis] - self.min.xyz[axis]
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim()).map(|a| self.extent(a)).product()
    }

    pub fn diagonal(&self) -> f64 {
        self.max.dist(&self.min)
    }

    pub fn center(&self) -> Point {
        self.min.midpoint(&self.max)
    }

    /// Squared distance from `p` to the box (zero inside).
    pub fn dist_sq(&self, p: &Point) -> f64 {
        let mut d = 0.0;
        for a in 0..self.dim() {
            let v = p.xyz[a];
            let e = if v < self.min.xyz[a] {
                self.min.xyz[a] - v
            } else if v > self.max.xyz[a] {
                v - self.max.xyz[a]
            } else {
                0.0
            };
            d += e * e;
        }
        d
    }

    /// Maps a unit-cube sample `u ∈ [0,1)^d` into the box.
    pub fn lerp(&self, u: [f64; 3]) -> Point {
        let mut p = Point::zero(self.dim());
        for (a, ua) in u.iter().enumerate().take(self.dim()) {
            p.xyz[a] = self.min.xyz[a] + ua * self.extent(a);
        }
        p
    }
}
