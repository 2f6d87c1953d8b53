//! Plane-geometry kernel: distances, circle-circle intersection, angle-anchored
//! point placement, point reflection, and segment relations.
//!
//! All coordinates are measured in matchstick lengths (one unit = one edge) and
//! all angles are degrees. Everything here is a pure function on value types.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance for geometric coincidence decisions (shared endpoints,
/// collinearity, points lying on a segment).
pub const COINCIDENCE_TOL: f64 = 1e-9;

/// A point in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coord {
    pub x: f64,
    pub y: f64,
}

impl Coord {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Coord) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// 2-D cross product (z-component of the 3-D cross product).
    pub fn cross(self, other: Coord) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn midpoint(self, other: Coord) -> Coord {
        Coord::new((self.x + other.x) / 2.0, (self.y + other.y) / 2.0)
    }
}

impl std::ops::Add for Coord {
    type Output = Coord;
    fn add(self, rhs: Coord) -> Coord {
        Coord::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub for Coord {
    type Output = Coord;
    fn sub(self, rhs: Coord) -> Coord {
        Coord::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Mul<f64> for Coord {
    type Output = Coord;
    fn mul(self, s: f64) -> Coord {
        Coord::new(self.x * s, self.y * s)
    }
}

impl std::fmt::Display for Coord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Side selection: counterclockwise (+1) or clockwise (-1) angle measurement.
///
/// For intersections and apex placements, `Ccw` picks the point on the
/// +1 side of the directed line through the construction's reference pair,
/// where side is the sign of the 2-D cross product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Turn {
    Ccw,
    Cw,
}

impl Turn {
    pub fn sign(self) -> f64 {
        match self {
            Turn::Ccw => 1.0,
            Turn::Cw => -1.0,
        }
    }

    pub fn flipped(self) -> Turn {
        match self {
            Turn::Ccw => Turn::Cw,
            Turn::Cw => Turn::Ccw,
        }
    }
}

impl std::fmt::Display for Turn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Turn::Ccw => "ccw",
            Turn::Cw => "cw",
        })
    }
}

/// Classification of how two closed segments relate to each other.
///
/// The kinds are mutually exclusive; `SharedEndpoint` means the segments share
/// exactly one endpoint coordinate and are otherwise disjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SegmentRelation {
    Disjoint,
    ProperCrossing,
    SharedEndpoint,
    EndpointOnInterior,
    CollinearOverlap,
}

impl SegmentRelation {
    /// True for the relations that are forbidden in a matchstick drawing.
    /// Sharing an endpoint is how edges meet at a vertex, so it is allowed.
    pub fn is_violation(self) -> bool {
        matches!(
            self,
            SegmentRelation::ProperCrossing
                | SegmentRelation::EndpointOnInterior
                | SegmentRelation::CollinearOverlap
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("circles do not intersect: center distance {center_dist}, radii {r1} and {r2}")]
    NoIntersection { center_dist: f64, r1: f64, r2: f64 },
    #[error("concentric circles have no well-defined intersection")]
    ConcentricDegenerate,
    #[error("base and reference point coincide")]
    DegenerateReference,
}

/// Euclidean distance between two points.
pub fn distance(p: Coord, q: Coord) -> f64 {
    (p - q).norm()
}

/// Intersection of two circles: either a single tangent point or an ordered
/// pair. The first point of a pair lies on the +1 (counterclockwise) side of
/// the directed line from the first center to the second.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CircleIntersection {
    Tangent(Coord),
    Pair(Coord, Coord),
}

impl CircleIntersection {
    pub fn points(&self) -> Vec<Coord> {
        match *self {
            CircleIntersection::Tangent(p) => vec![p],
            CircleIntersection::Pair(p, q) => vec![p, q],
        }
    }

    /// Select one intersection point by side: `Ccw` is the +1 side of the
    /// directed line c1 -> c2, `Cw` the other. A tangent point is returned
    /// for either side.
    pub fn pick(&self, side: Turn) -> Coord {
        match (*self, side) {
            (CircleIntersection::Tangent(p), _) => p,
            (CircleIntersection::Pair(p, _), Turn::Ccw) => p,
            (CircleIntersection::Pair(_, q), Turn::Cw) => q,
        }
    }
}

/// Intersects the circle of radius `r1` around `c1` with the circle of radius
/// `r2` around `c2`.
///
/// Fails with `NoIntersection` when the centers are farther apart than
/// `r1 + r2` or closer than `|r1 - r2|` (beyond a 1e-12 tolerance band), and
/// with `ConcentricDegenerate` when the centers coincide.
pub fn circle_circle_intersection(
    c1: Coord,
    r1: f64,
    c2: Coord,
    r2: f64,
) -> Result<CircleIntersection, GeomError> {
    let d = distance(c1, c2);
    if d == 0.0 {
        return Err(GeomError::ConcentricDegenerate);
    }
    if d > r1 + r2 + 1e-12 || d < (r1 - r2).abs() - 1e-12 {
        return Err(GeomError::NoIntersection {
            center_dist: d,
            r1,
            r2,
        });
    }
    // Distance from c1 to the chord's foot along c1 -> c2.
    let a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let h_sq = r1 * r1 - a * a;
    let u = (c2 - c1) * (1.0 / d);
    let foot = c1 + u * a;
    if h_sq <= 0.0 {
        return Ok(CircleIntersection::Tangent(foot));
    }
    let h = h_sq.sqrt();
    // Ccw normal of u, so `foot + n*h` has positive cross((c2-c1), .-c1).
    let n = Coord::new(-u.y, u.x);
    Ok(CircleIntersection::Pair(foot + n * h, foot + n * (-h)))
}

/// Places a new point at unit distance from `base` so that the angle at `base`
/// between the rays base->new and base->reference equals `angle_deg`.
///
/// `Turn::Ccw` rotates the unit vector base->reference counterclockwise by the
/// angle, `Turn::Cw` clockwise; the two choices are mirror images across the
/// base-reference line.
pub fn place_by_angle(
    base: Coord,
    reference: Coord,
    angle_deg: f64,
    turn: Turn,
) -> Result<Coord, GeomError> {
    let v = reference - base;
    let len = v.norm();
    if len == 0.0 {
        return Err(GeomError::DegenerateReference);
    }
    let u = v * (1.0 / len);
    let theta = angle_deg.to_radians() * turn.sign();
    let (sin, cos) = theta.sin_cos();
    Ok(base + Coord::new(cos * u.x - sin * u.y, sin * u.x + cos * u.y))
}

/// Reflects `p` through `center` (a 180-degree rotation).
pub fn point_reflect(p: Coord, center: Coord) -> Coord {
    Coord::new(2.0 * center.x - p.x, 2.0 * center.y - p.y)
}

/// Unsigned angle at `vertex` between the rays vertex->a and vertex->b,
/// in degrees within [0, 180].
pub fn angle_at(vertex: Coord, a: Coord, b: Coord) -> f64 {
    let u = a - vertex;
    let v = b - vertex;
    u.cross(v).abs().atan2(u.dot(v)).to_degrees()
}

/// Minimum distance from `p` to the closed segment `ab`.
pub fn point_segment_distance(p: Coord, a: Coord, b: Coord) -> f64 {
    let ab = b - a;
    let len_sq = ab.dot(ab);
    if len_sq == 0.0 {
        return distance(p, a);
    }
    let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    distance(p, a + ab * t)
}

/// Classifies the relation between closed segments `a1a2` and `b1b2`.
///
/// Coincidence decisions (shared endpoints, collinearity, a point lying on a
/// segment) use [`COINCIDENCE_TOL`]; distances below it count as contact.
pub fn segment_relation(a1: Coord, a2: Coord, b1: Coord, b2: Coord) -> SegmentRelation {
    let tol = COINCIDENCE_TOL;
    let shared = [(a1, b1), (a1, b2), (a2, b1), (a2, b2)]
        .iter()
        .filter(|(p, q)| distance(*p, *q) <= tol)
        .count();
    if shared >= 2 {
        // Both endpoints coincide: identical (possibly reversed) segments.
        return SegmentRelation::CollinearOverlap;
    }

    let len_a = distance(a1, a2);
    let off_line_a = |p: Coord| (a2 - a1).cross(p - a1).abs() > tol * len_a;
    if !off_line_a(b1) && !off_line_a(b2) {
        // All four points on one line: compare the 1-D intervals.
        let u = (a2 - a1) * (1.0 / len_a);
        let s0 = 0.0f64;
        let s1 = len_a;
        let t0 = (b1 - a1).dot(u);
        let t1 = (b2 - a1).dot(u);
        let (t_lo, t_hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
        let overlap = s1.min(t_hi) - s0.max(t_lo);
        return if overlap > tol {
            SegmentRelation::CollinearOverlap
        } else if overlap >= -tol {
            SegmentRelation::SharedEndpoint
        } else {
            SegmentRelation::Disjoint
        };
    }

    if shared == 1 {
        // Non-collinear segments radiating from a common point meet only there.
        return SegmentRelation::SharedEndpoint;
    }

    for p in [b1, b2] {
        if point_segment_distance(p, a1, a2) <= tol {
            return SegmentRelation::EndpointOnInterior;
        }
    }
    for p in [a1, a2] {
        if point_segment_distance(p, b1, b2) <= tol {
            return SegmentRelation::EndpointOnInterior;
        }
    }

    let d1 = (a2 - a1).cross(b1 - a1);
    let d2 = (a2 - a1).cross(b2 - a1);
    let d3 = (b2 - b1).cross(a1 - b1);
    let d4 = (b2 - b1).cross(a2 - b1);
    if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
        SegmentRelation::ProperCrossing
    } else {
        SegmentRelation::Disjoint
    }
}
