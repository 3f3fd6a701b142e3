//! Brute-force reference constructions used to cross-check the fast paths.
//!
//! Nothing here calls into [`crate::geometry`] beyond the [`Point`] type:
//! circumcenters come from intersecting perpendicular bisectors, orthocenters
//! from the vector identity `H = A + B + C - 2 O`, and the smallest enclosing
//! circle from enumerating every pair and triple.

use crate::geometry::Point;

/// Intersection of the perpendicular bisectors of `ab` and `ac`, with the
/// mean distance to the vertices as radius. `None` for collinear input.
pub fn bisector_circumcircle(a: &Point, b: &Point, c: &Point) -> Option<(Point, f64)> {
    // Bisector of ab: (b - a) . z = (|b|^2 - |a|^2) / 2, likewise for ac.
    let (a1, b1) = (b.x() - a.x(), b.y() - a.y());
    let c1 = (b.x() * b.x() + b.y() * b.y() - a.x() * a.x() - a.y() * a.y()) / 2.0;
    let (a2, b2) = (c.x() - a.x(), c.y() - a.y());
    let c2 = (c.x() * c.x() + c.y() * c.y() - a.x() * a.x() - a.y() * a.y()) / 2.0;
    let det = a1 * b2 - a2 * b1;
    if det == 0.0 {
        return None;
    }
    let o = Point::plane((c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det);
    let r = (o.dist(a) + o.dist(b) + o.dist(c)) / 3.0;
    Some((o, r))
}

/// Orthocenter from the Euler vector identity on the bisector circumcenter.
pub fn orthocenter_from_circumcenter(a: &Point, b: &Point, c: &Point) -> Option<Point> {
    let (o, _) = bisector_circumcircle(a, b, c)?;
    Some(Point::plane(
        a.x() + b.x() + c.x() - 2.0 * o.x(),
        a.y() + b.y() + c.y() - 2.0 * o.y(),
    ))
}

/// Smallest enclosing circle by exhaustive search over all pair-diameter and
/// triple circumcircles, `O(n^4)`.
pub fn brute_force_mec(points: &[Point]) -> Option<(Point, f64)> {
    let first = points.first()?;
    let covers = |o: &Point, r: f64| points.iter().all(|p| o.dist(p) <= r + 1e-10 * (1.0 + r));
    let mut best: Option<(Point, f64)> = None;
    let mut offer = |o: Point, r: f64| {
        if best.is_none_or(|(_, br)| r < br) && covers(&o, r) {
            best = Some((o, r));
        }
    };
    offer(*first, 0.0);
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let (a, b) = (&points[i], &points[j]);
            let o = Point::plane((a.x() + b.x()) / 2.0, (a.y() + b.y()) / 2.0);
            offer(o, a.dist(b) / 2.0);
            for c in &points[j + 1..] {
                if let Some((o, r)) = bisector_circumcircle(a, b, c) {
                    offer(o, r);
                }
            }
        }
    }
    best
}

/// Minimum of `f` over a uniform `steps x steps` grid on a rectangle, with
/// the minimising grid point.
pub fn grid_min<F: Fn(&Point) -> f64>(
    lo: (f64, f64),
    hi: (f64, f64),
    steps: usize,
    f: F,
) -> (Point, f64) {
    let mut best = (Point::plane(lo.0, lo.1), f64::INFINITY);
    for i in 0..steps {
        for j in 0..steps {
            let t = i as f64 / (steps - 1) as f64;
            let s = j as f64 / (steps - 1) as f64;
            let y = Point::plane(lo.0 + t * (hi.0 - lo.0), lo.1 + s * (hi.1 - lo.1));
            let v = f(&y);
            if v < best.1 {
                best = (y, v);
            }
        }
    }
    best
}
