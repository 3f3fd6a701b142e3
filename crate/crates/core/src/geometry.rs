//! Planar primitives.
//!
//! Points carry their dimension (1 or 2). The planar constructions
//! (circumcircle, orthocenter, Euler data, smallest enclosing circle) accept
//! only 2-D points; 1-D callers lift with `y = 0` via [`Point::lift`].
//!
//! Tolerances are scale-relative: a triangle is degenerate when
//! `|cross| <= 1e-12 * scale^2`, where `scale` is its longest side.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Relative collinearity threshold for triangles.
pub const COLLINEAR_TOL: f64 = 1e-12;

const MEC_SHUFFLE_SEED: u64 = 0x5eed_c12c;
const MEC_CONTAINS_EPS: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dim {
    Line,
    Plane,
}

#[allow(clippy::len_without_is_empty)]
impl Dim {
    /// Number of coordinates.
    pub fn len(self) -> usize {
        match self {
            Dim::Line => 1,
            Dim::Plane => 2,
        }
    }

    pub fn from_len(len: usize) -> Result<Dim> {
        match len {
            1 => Ok(Dim::Line),
            2 => Ok(Dim::Plane),
            n => Err(Error::BadCoordinateCount(n)),
        }
    }
}

/// A location on the line or in the plane.
///
/// A 1-D point stores `y = 0`, so Euclidean arithmetic on 1-D points is the
/// ordinary absolute-value arithmetic of the line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    c: [f64; 2],
    dim: Dim,
}

impl Point {
    pub fn line(x: f64) -> Point {
        Point { c: [x, 0.0], dim: Dim::Line }
    }

    pub fn plane(x: f64, y: f64) -> Point {
        Point { c: [x, y], dim: Dim::Plane }
    }

    /// Checked constructor from a coordinate slice of length 1 or 2.
    pub fn from_coords(coords: &[f64]) -> Result<Point> {
        if coords.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        match *coords {
            [x] => Ok(Point::line(x)),
            [x, y] => Ok(Point::plane(x, y)),
            _ => Err(Error::BadCoordinateCount(coords.len())),
        }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn coords(&self) -> &[f64] {
        &self.c[..self.dim.len()]
    }

    pub fn x(&self) -> f64 {
        self.c[0]
    }

    /// Second coordinate; `0` for 1-D points.
    pub fn y(&self) -> f64 {
        self.c[1]
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|v| v.is_finite())
    }

    /// Embeds a point in the plane (`y = 0` for 1-D points).
    pub fn lift(&self) -> Point {
        Point::plane(self.c[0], self.c[1])
    }

    pub fn dot(&self, o: &Point) -> f64 {
        self.c[0] * o.c[0] + self.c[1] * o.c[1]
    }

    /// z-component of the planar cross product.
    pub fn cross(&self, o: &Point) -> f64 {
        self.c[0] * o.c[1] - self.c[1] * o.c[0]
    }

    pub fn norm(&self) -> f64 {
        self.c[0].hypot(self.c[1])
    }

    /// Euclidean distance without a dimension check.
    pub fn dist(&self, o: &Point) -> f64 {
        (self.c[0] - o.c[0]).hypot(self.c[1] - o.c[1])
    }

    /// Coordinatewise equality within an absolute tolerance.
    pub fn approx_eq(&self, o: &Point, tol: f64) -> bool {
        self.dim == o.dim
            && (self.c[0] - o.c[0]).abs() <= tol
            && (self.c[1] - o.c[1]).abs() <= tol
    }

    fn with_dim_of(self, other: &Point) -> Point {
        let dim = if self.dim == Dim::Plane || other.dim == Dim::Plane {
            Dim::Plane
        } else {
            Dim::Line
        };
        Point { c: self.c, dim }
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point { c: [self.c[0] + o.c[0], self.c[1] + o.c[1]], dim: self.dim }.with_dim_of(&o)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point { c: [self.c[0] - o.c[0], self.c[1] - o.c[1]], dim: self.dim }.with_dim_of(&o)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point { c: [self.c[0] * s, self.c[1] * s], dim: self.dim }
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        self * -1.0
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.dim {
            Dim::Line => write!(f, "({})", self.c[0]),
            Dim::Plane => write!(f, "({}, {})", self.c[0], self.c[1]),
        }
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Point, D::Error> {
        let coords = Vec::<f64>::deserialize(d)?;
        Point::from_coords(&coords).map_err(D::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    /// Whether `p` lies within `radius + tol * (1 + radius)` of the center.
    pub fn contains(&self, p: &Point, tol: f64) -> bool {
        self.center.dist(p) <= self.radius + tol * (1.0 + self.radius)
    }

    fn contains_strict(&self, p: &Point) -> bool {
        self.center.dist(p) <= self.radius * (1.0 + MEC_CONTAINS_EPS)
    }
}

/// Circumcenter, centroid and orthocenter of a triangle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EulerReport {
    pub circumcenter: Point,
    pub centroid: Point,
    pub orthocenter: Point,
    pub circumradius: f64,
}

impl EulerReport {
    /// `|cross(G - O, H - O)|`; zero for collinear O, G, H.
    pub fn collinearity_residual(&self) -> f64 {
        (self.centroid - self.circumcenter).cross(&(self.orthocenter - self.circumcenter)).abs()
    }

    /// `|3 d(O, G) - d(O, H)|`.
    pub fn ratio_residual(&self) -> f64 {
        let og = self.circumcenter.dist(&self.centroid);
        let oh = self.circumcenter.dist(&self.orthocenter);
        (3.0 * og - oh).abs()
    }
}

fn require_plane(points: &[&Point]) -> Result<()> {
    match points.iter().find(|p| p.dim != Dim::Plane) {
        Some(p) => Err(Error::DimensionMismatch { expected: 2, found: p.dim.len() }),
        None => Ok(()),
    }
}

fn same_dim(points: &[Point]) -> Result<Dim> {
    let dim = points.first().ok_or(Error::Empty)?.dim;
    match points.iter().find(|p| p.dim != dim) {
        Some(p) => Err(Error::DimensionMismatch { expected: dim.len(), found: p.dim.len() }),
        None => Ok(dim),
    }
}

/// Euclidean distance between two points of equal dimension.
pub fn distance(p: &Point, q: &Point) -> Result<f64> {
    if p.dim != q.dim {
        return Err(Error::DimensionMismatch { expected: p.dim.len(), found: q.dim.len() });
    }
    Ok(p.dist(q))
}

/// Coordinatewise arithmetic mean.
pub fn centroid(points: &[Point]) -> Result<Point> {
    let dim = same_dim(points)?;
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(sx, sy), p| (sx + p.c[0], sy + p.c[1]));
    Ok(Point { c: [sx / n, sy / n], dim })
}

/// Largest pairwise distance.
pub fn diameter(points: &[Point]) -> f64 {
    let mut best = 0.0f64;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            best = best.max(p.dist(q));
        }
    }
    best
}

fn longest_side(a: &Point, b: &Point, c: &Point) -> f64 {
    a.dist(b).max(b.dist(c)).max(a.dist(c))
}

fn check_triangle(a: &Point, b: &Point, c: &Point) -> Result<()> {
    require_plane(&[a, b, c])?;
    if !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(Error::NonFinite);
    }
    let scale = longest_side(a, b, c);
    let cross = (*b - *a).cross(&(*c - *a));
    if scale == 0.0 || cross.abs() <= COLLINEAR_TOL * scale * scale {
        return Err(Error::DegenerateTriangle);
    }
    Ok(())
}

// Circumcircle computed about the bounding-box center; `None` only for exactly
// collinear input.
fn circumcircle_raw(a: &Point, b: &Point, c: &Point) -> Option<Circle> {
    let ox = (a.c[0].min(b.c[0]).min(c.c[0]) + a.c[0].max(b.c[0]).max(c.c[0])) / 2.0;
    let oy = (a.c[1].min(b.c[1]).min(c.c[1]) + a.c[1].max(b.c[1]).max(c.c[1])) / 2.0;
    let (ax, ay) = (a.c[0] - ox, a.c[1] - oy);
    let (bx, by) = (b.c[0] - ox, b.c[1] - oy);
    let (cx, cy) = (c.c[0] - ox, c.c[1] - oy);
    let d = (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by)) * 2.0;
    if d == 0.0 {
        return None;
    }
    let (a2, b2, c2) = (ax * ax + ay * ay, bx * bx + by * by, cx * cx + cy * cy);
    let x = ox + (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
    let y = oy + (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
    let center = Point::plane(x, y);
    let radius = center.dist(a).max(center.dist(b)).max(center.dist(c));
    Some(Circle { center, radius })
}

/// Circle through three non-collinear planar points.
pub fn circumcircle(a: &Point, b: &Point, c: &Point) -> Result<Circle> {
    check_triangle(a, b, c)?;
    circumcircle_raw(a, b, c).ok_or(Error::DegenerateTriangle)
}

/// Intersection of the altitudes from `a` and `b`.
pub fn orthocenter(a: &Point, b: &Point, c: &Point) -> Result<Point> {
    check_triangle(a, b, c)?;
    // Relative to a: (c - b) . h = 0 and (c - a) . h = (c - a) . (b - a).
    let u = *c - *b;
    let v = *c - *a;
    let rhs = v.dot(&(*b - *a));
    let det = u.cross(&v);
    Ok(Point::plane(a.c[0] - u.c[1] * rhs / det, a.c[1] + u.c[0] * rhs / det))
}

pub fn euler_data(a: &Point, b: &Point, c: &Point) -> Result<EulerReport> {
    let circle = circumcircle(a, b, c)?;
    Ok(EulerReport {
        circumcenter: circle.center,
        centroid: centroid(&[*a, *b, *c])?,
        orthocenter: orthocenter(a, b, c)?,
        circumradius: circle.radius,
    })
}

/// True when no angle of the triangle exceeds 90 degrees, i.e. the
/// circumcenter lies in the closed triangle.
pub fn circumcenter_inside(a: &Point, b: &Point, c: &Point) -> bool {
    (*b - *a).dot(&(*c - *a)) >= 0.0
        && (*a - *b).dot(&(*c - *b)) >= 0.0
        && (*a - *c).dot(&(*b - *c)) >= 0.0
}

fn diameter_circle(a: &Point, b: &Point) -> Circle {
    let center = Point::plane((a.c[0] + b.c[0]) / 2.0, (a.c[1] + b.c[1]) / 2.0);
    Circle { center, radius: center.dist(a).max(center.dist(b)) }
}

/// Smallest circle enclosing a nonempty set of planar points.
///
/// Incremental randomized construction with two and three boundary points
/// known; the shuffle uses a fixed seed so the result is a pure function of
/// the input.
pub fn min_enclosing_circle(points: &[Point]) -> Result<Circle> {
    if points.is_empty() {
        return Err(Error::Empty);
    }
    for p in points {
        require_plane(&[p])?;
        if !p.is_finite() {
            return Err(Error::NonFinite);
        }
    }
    let mut shuffled = points.to_vec();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(MEC_SHUFFLE_SEED));

    let mut circle: Option<Circle> = None;
    for (i, p) in shuffled.iter().enumerate() {
        if circle.is_none_or(|c| !c.contains_strict(p)) {
            circle = Some(mec_one_boundary(&shuffled[..=i], p));
        }
    }
    Ok(circle.expect("nonempty input"))
}

fn mec_one_boundary(points: &[Point], p: &Point) -> Circle {
    let mut c = Circle { center: *p, radius: 0.0 };
    for (i, q) in points.iter().enumerate() {
        if !c.contains_strict(q) {
            c = if c.radius == 0.0 {
                diameter_circle(p, q)
            } else {
                mec_two_boundary(&points[..=i], p, q)
            };
        }
    }
    c
}

fn mec_two_boundary(points: &[Point], p: &Point, q: &Point) -> Circle {
    let circ = diameter_circle(p, q);
    let pq = *q - *p;
    let mut left: Option<Circle> = None;
    let mut right: Option<Circle> = None;
    for r in points {
        if circ.contains_strict(r) {
            continue;
        }
        let cross = pq.cross(&(*r - *p));
        let Some(c) = circumcircle_raw(p, q, r) else { continue };
        let side = pq.cross(&(c.center - *p));
        if cross > 0.0 && left.is_none_or(|l| side > pq.cross(&(l.center - *p))) {
            left = Some(c);
        } else if cross < 0.0 && right.is_none_or(|r| side < pq.cross(&(r.center - *p))) {
            right = Some(c);
        }
    }
    match (left, right) {
        (None, None) => circ,
        (Some(l), None) => l,
        (None, Some(r)) => r,
        (Some(l), Some(r)) => {
            if l.radius <= r.radius {
                l
            } else {
                r
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-12;

    fn p(x: f64, y: f64) -> Point {
        Point::plane(x, y)
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(&p(0.0, 0.0), &p(3.0, 4.0)).unwrap(), 5.0);
        assert_eq!(distance(&p(1.5, -2.0), &p(1.5, -2.0)).unwrap(), 0.0);
        assert_eq!(distance(&Point::line(0.0), &Point::line(2.0)).unwrap(), 2.0);
        assert!(matches!(
            distance(&Point::line(0.0), &p(0.0, 0.0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn centroid_examples() {
        let g = centroid(&[p(0.0, 0.0), p(4.0, 0.0), p(1.0, 3.0)]).unwrap();
        assert!(g.approx_eq(&p(5.0 / 3.0, 1.0), EPS));
        assert_eq!(centroid(&[p(2.0, 7.0)]).unwrap(), p(2.0, 7.0));
        assert_eq!(centroid(&[p(0.0, 0.0), p(2.0, 0.0)]).unwrap(), p(1.0, 0.0));
        assert_eq!(centroid(&[]), Err(Error::Empty));
        assert!(centroid(&[p(0.0, 0.0), Point::line(1.0)]).is_err());
    }

    #[test]
    fn circumcircle_examples() {
        let h = 3f64.sqrt() / 2.0;
        let c = circumcircle(&p(0.0, 0.0), &p(1.0, 0.0), &p(0.5, h)).unwrap();
        assert!(c.center.approx_eq(&p(0.5, 3f64.sqrt() / 6.0), EPS));
        assert!((c.radius - 1.0 / 3f64.sqrt()).abs() < EPS);

        let c = circumcircle(&p(0.0, 0.0), &p(2.0, 0.0), &p(0.0, 2.0)).unwrap();
        assert!(c.center.approx_eq(&p(1.0, 1.0), EPS));
        assert!((c.radius - 2f64.sqrt()).abs() < EPS);
    }

    #[test]
    fn circumcircle_rejects_degenerate() {
        let e = circumcircle(&p(0.0, 0.0), &p(1.0, 1.0), &p(2.0, 2.0));
        assert_eq!(e, Err(Error::DegenerateTriangle));
        let e = circumcircle(&p(1.0, 1.0), &p(1.0, 1.0), &p(3.0, 0.0));
        assert_eq!(e, Err(Error::DegenerateTriangle));
        // Collinear up to rounding.
        let e = circumcircle(&p(0.0, 0.0), &p(1e6, 1e6), &p(2e6, 2e6 + 1e-9));
        assert_eq!(e, Err(Error::DegenerateTriangle));
        assert!(circumcircle(&Point::line(0.0), &p(1.0, 0.0), &p(0.0, 1.0)).is_err());
    }

    #[test]
    fn orthocenter_examples() {
        let h = orthocenter(&p(0.0, 0.0), &p(2.0, 0.0), &p(0.0, 2.0)).unwrap();
        assert!(h.approx_eq(&p(0.0, 0.0), EPS));
        let s = 3f64.sqrt();
        let h = orthocenter(&p(0.0, 0.0), &p(1.0, 0.0), &p(0.5, s / 2.0)).unwrap();
        assert!(h.approx_eq(&p(0.5, s / 6.0), EPS));
        assert_eq!(
            orthocenter(&p(0.0, 0.0), &p(1.0, 0.0), &p(2.0, 0.0)),
            Err(Error::DegenerateTriangle)
        );
    }

    #[test]
    fn equilateral_euler_points_coincide() {
        let s = 3f64.sqrt();
        let r = euler_data(&p(0.0, 0.0), &p(1.0, 0.0), &p(0.5, s / 2.0)).unwrap();
        assert!(r.circumcenter.approx_eq(&r.centroid, EPS));
        assert!(r.centroid.approx_eq(&r.orthocenter, EPS));
    }

    #[test]
    fn obtuse_triangle_orthocenter_outside_circumcircle() {
        let (a, b, c) = (p(0.0, 0.0), p(10.0, 0.0), p(1.0, 0.5));
        assert!(!circumcenter_inside(&a, &b, &c));
        let r = euler_data(&a, &b, &c).unwrap();
        assert!(r.circumcenter.dist(&r.orthocenter) > r.circumradius);
        assert!(r.ratio_residual() < 1e-9 * r.circumradius);
    }

    #[test]
    fn mec_examples() {
        let c = min_enclosing_circle(&[p(0.0, 0.0), p(2.0, 0.0), p(1.0, 0.5)]).unwrap();
        assert!(c.center.approx_eq(&p(1.0, 0.0), EPS));
        assert!((c.radius - 1.0).abs() < EPS);

        let c = min_enclosing_circle(&[p(3.0, -1.0)]).unwrap();
        assert_eq!(c.center, p(3.0, -1.0));
        assert_eq!(c.radius, 0.0);

        let c = min_enclosing_circle(&[p(0.0, 0.0), p(2.0, 0.0)]).unwrap();
        assert!(c.center.approx_eq(&p(1.0, 0.0), EPS));
        assert!((c.radius - 1.0).abs() < EPS);

        assert_eq!(min_enclosing_circle(&[]), Err(Error::Empty));
        assert!(min_enclosing_circle(&[Point::line(1.0)]).is_err());
    }

    #[test]
    fn mec_collinear_and_duplicates() {
        let pts = [p(0.0, 0.0), p(1.0, 1.0), p(3.0, 3.0), p(1.0, 1.0), p(2.0, 2.0)];
        let c = min_enclosing_circle(&pts).unwrap();
        assert!(c.center.approx_eq(&p(1.5, 1.5), EPS));
        assert!((c.radius - 4.5f64.sqrt()).abs() < EPS);

        let same = [p(2.0, 2.0); 5];
        let c = min_enclosing_circle(&same).unwrap();
        assert_eq!(c.radius, 0.0);
    }

    #[test]
    fn point_serde_is_a_coordinate_array() {
        let s = serde_json::to_string(&p(1.0, -2.5)).unwrap();
        assert_eq!(s, "[1.0,-2.5]");
        let q: Point = serde_json::from_str("[4]").unwrap();
        assert_eq!(q, Point::line(4.0));
        assert!(serde_json::from_str::<Point>("[1,2,3]").is_err());
        assert!(serde_json::from_str::<Point>("[]").is_err());
    }
}
