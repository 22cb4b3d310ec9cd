//! Planar primitives shared by every other module.
//!
//! Everything downstream (scene generation, rasterization, metrics, topology)
//! reduces to a handful of predicates defined here: point-segment and
//! segment-segment distance, segment-rectangle intersection, point-in-polygon,
//! convex hulls, and a validated simple-polygon type.  All comparisons are
//! plain `f64`; `EPS` is the default absolute tolerance and `TOUCH_EPS` the
//! threshold under which two sets are treated as touching.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
#[cfg(not(feature = "std"))]
use crate::math::FloatExt;

/// Default absolute tolerance for geometric comparisons.
pub const EPS: f64 = 1e-9;
/// Distances at or below this are treated as contact.
pub const TOUCH_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// Z component of the cross product, positive when `o` is counterclockwise
    /// from `self`.
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dist(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    pub fn dist_sq(self, o: Vec2) -> f64 {
        (self - o).norm_sq()
    }

    /// Counterclockwise perpendicular.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Closest point on segment `[a, b]` to `p`.
pub fn seg_closest_point(a: Vec2, b: Vec2, p: Vec2) -> Vec2 {
    let d = b - a;
    let len_sq = d.norm_sq();
    if len_sq == 0.0 {
        return a;
    }
    let t = ((p - a).dot(d) / len_sq).clamp(0.0, 1.0);
    a + d * t
}

pub fn seg_point_dist_sq(a: Vec2, b: Vec2, p: Vec2) -> f64 {
    seg_closest_point(a, b, p).dist_sq(p)
}

pub fn seg_point_dist(a: Vec2, b: Vec2, p: Vec2) -> f64 {
    seg_point_dist_sq(a, b, p).sqrt()
}

/// True when `p` lies on segment `[a, b]`, assuming the three points are
/// collinear.
fn collinear_on_segment(a: Vec2, b: Vec2, p: Vec2) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed-segment intersection test; touching endpoints count.
pub fn segs_intersect(p1: Vec2, p2: Vec2, q1: Vec2, q2: Vec2) -> bool {
    let d1 = (q2 - q1).cross(p1 - q1);
    let d2 = (q2 - q1).cross(p2 - q1);
    let d3 = (p2 - p1).cross(q1 - p1);
    let d4 = (p2 - p1).cross(q2 - p1);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && collinear_on_segment(q1, q2, p1))
        || (d2 == 0.0 && collinear_on_segment(q1, q2, p2))
        || (d3 == 0.0 && collinear_on_segment(p1, p2, q1))
        || (d4 == 0.0 && collinear_on_segment(p1, p2, q2))
}

/// Minimum distance between closed segments; zero when they intersect.
pub fn seg_seg_dist(p1: Vec2, p2: Vec2, q1: Vec2, q2: Vec2) -> f64 {
    if segs_intersect(p1, p2, q1, q2) {
        return 0.0;
    }
    seg_point_dist(q1, q2, p1)
        .min(seg_point_dist(q1, q2, p2))
        .min(seg_point_dist(p1, p2, q1))
        .min(seg_point_dist(p1, p2, q2))
}

/// Closed intersection test between segment `[a, b]` and the axis-aligned
/// rectangle `[lo, hi]`; touching counts.
pub fn seg_intersects_rect(a: Vec2, b: Vec2, lo: Vec2, hi: Vec2) -> bool {
    if a.x.max(b.x) < lo.x || a.x.min(b.x) > hi.x {
        return false;
    }
    if a.y.max(b.y) < lo.y || a.y.min(b.y) > hi.y {
        return false;
    }
    let d = b - a;
    if d.x == 0.0 && d.y == 0.0 {
        // Degenerate segment: the bounding box checks above already placed the
        // point inside the closed rectangle.
        return true;
    }
    let n = d.perp();
    let s0 = n.dot(Vec2::new(lo.x, lo.y) - a);
    let s1 = n.dot(Vec2::new(hi.x, lo.y) - a);
    let s2 = n.dot(Vec2::new(hi.x, hi.y) - a);
    let s3 = n.dot(Vec2::new(lo.x, hi.y) - a);
    let all_pos = s0 > 0.0 && s1 > 0.0 && s2 > 0.0 && s3 > 0.0;
    let all_neg = s0 < 0.0 && s1 < 0.0 && s2 < 0.0 && s3 < 0.0;
    !(all_pos || all_neg)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Vec2,
    pub max: Vec2,
}

impl Aabb {
    pub fn from_points<I: IntoIterator<Item = Vec2>>(points: I) -> Option<Aabb> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut bb = Aabb { min: first, max: first };
        for p in it {
            bb.include(p);
        }
        Some(bb)
    }

    pub fn include(&mut self, p: Vec2) {
        self.min.x = self.min.x.min(p.x);
        self.min.y = self.min.y.min(p.y);
        self.max.x = self.max.x.max(p.x);
        self.max.y = self.max.y.max(p.y);
    }

    pub fn union(mut self, o: Aabb) -> Aabb {
        self.include(o.min);
        self.include(o.max);
        self
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn inflate(&self, d: f64) -> Aabb {
        Aabb {
            min: Vec2::new(self.min.x - d, self.min.y - d),
            max: Vec2::new(self.max.x + d, self.max.y + d),
        }
    }

    /// Distance from `p` to the closed box (zero inside).
    pub fn dist_to_point(&self, p: Vec2) -> f64 {
        let dx = (self.min.x - p.x).max(0.0).max(p.x - self.max.x);
        let dy = (self.min.y - p.y).max(0.0).max(p.y - self.max.y);
        dx.hypot(dy)
    }

    /// Smallest distance between two closed boxes (zero when they overlap).
    pub fn gap_to(&self, o: &Aabb) -> f64 {
        let dx = (self.min.x - o.max.x).max(0.0).max(o.min.x - self.max.x);
        let dy = (self.min.y - o.max.y).max(0.0).max(o.min.y - self.max.y);
        dx.hypot(dy)
    }

    /// Distance from `p` to the farthest corner of the box.
    pub fn farthest_corner_dist(&self, p: Vec2) -> f64 {
        let dx = (p.x - self.min.x).abs().max((p.x - self.max.x).abs());
        let dy = (p.y - self.min.y).abs().max((p.y - self.max.y).abs());
        dx.hypot(dy)
    }
}

/// Direct (non-contracting) planar similarity: reflect across the x axis
/// first when `reflect` is set, then rotate by `rotation` radians, scale by
/// `scale`, and translate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Similarity {
    pub scale: f64,
    pub rotation: f64,
    pub reflect: bool,
    pub translation: Vec2,
}

impl Similarity {
    pub fn new(scale: f64, rotation: f64, reflect: bool, translation: Vec2) -> Result<Similarity> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::Config(alloc::format!(
                "similarity scale must be finite and positive, got {scale}"
            )));
        }
        if !rotation.is_finite() || !translation.is_finite() {
            return Err(Error::Config("similarity parameters must be finite".into()));
        }
        Ok(Similarity { scale, rotation, reflect, translation })
    }

    pub fn identity() -> Similarity {
        Similarity { scale: 1.0, rotation: 0.0, reflect: false, translation: Vec2::ZERO }
    }

    /// Row-major linear part `[m00, m01, m10, m11]`.
    pub fn matrix(&self) -> [f64; 4] {
        let c = self.rotation.cos();
        let s = self.rotation.sin();
        // scale * R(rotation) * (reflect across the x axis)
        if self.reflect {
            [self.scale * c, self.scale * s, self.scale * s, self.scale * -c]
        } else {
            [self.scale * c, self.scale * -s, self.scale * s, self.scale * c]
        }
    }

    pub fn apply(&self, p: Vec2) -> Vec2 {
        let m = self.matrix();
        Vec2::new(
            m[0] * p.x + m[1] * p.y + self.translation.x,
            m[2] * p.x + m[3] * p.y + self.translation.y,
        )
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Similarity) -> Similarity {
        let rotation = if self.reflect {
            self.rotation - other.rotation
        } else {
            self.rotation + other.rotation
        };
        Similarity {
            scale: self.scale * other.scale,
            rotation,
            reflect: self.reflect ^ other.reflect,
            translation: self.apply(other.translation),
        }
    }
}

/// Open or closed chain of points.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<Vec2>,
    pub closed: bool,
}

impl Polyline {
    pub fn open(points: Vec<Vec2>) -> Polyline {
        Polyline { points, closed: false }
    }

    pub fn closed(points: Vec<Vec2>) -> Polyline {
        Polyline { points, closed: true }
    }

    /// Consecutive point pairs, wrapping around when closed.
    pub fn segments(&self) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
        let n = self.points.len();
        let count = if n < 2 {
            0
        } else if self.closed {
            n
        } else {
            n - 1
        };
        (0..count).map(move |i| (self.points[i], self.points[(i + 1) % n]))
    }

    pub fn length(&self) -> f64 {
        self.segments().map(|(a, b)| a.dist(b)).sum()
    }

    pub fn dist_to_point(&self, p: Vec2) -> f64 {
        let mut best = f64::INFINITY;
        for (a, b) in self.segments() {
            best = best.min(seg_point_dist(a, b, p));
        }
        if self.points.len() == 1 {
            best = self.points[0].dist(p);
        }
        best
    }
}

/// Simple polygon with counterclockwise vertices and strictly positive area.
///
/// The constructor validates simplicity and reverses clockwise input, so any
/// held value satisfies the invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    verts: Vec<Vec2>,
}

impl Polygon {
    pub fn new(mut verts: Vec<Vec2>) -> Result<Polygon> {
        if verts.len() < 3 {
            return Err(Error::Config(alloc::format!(
                "polygon needs at least 3 vertices, got {}",
                verts.len()
            )));
        }
        if verts.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("polygon vertices must be finite".into()));
        }
        let n = verts.len();
        for i in 0..n {
            if verts[i] == verts[(i + 1) % n] {
                return Err(Error::Config(alloc::format!(
                    "polygon has a zero-length edge at vertex {i}"
                )));
            }
        }
        let area2 = signed_area_2(&verts);
        if area2 == 0.0 {
            return Err(Error::Config("polygon area is zero".into()));
        }
        if area2 < 0.0 {
            verts.reverse();
        }
        let poly = Polygon { verts };
        if !poly.is_simple() {
            return Err(Error::Config("polygon is self-intersecting".into()));
        }
        Ok(poly)
    }

    pub fn verts(&self) -> &[Vec2] {
        &self.verts
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
        let n = self.verts.len();
        (0..n).map(move |i| (self.verts[i], self.verts[(i + 1) % n]))
    }

    fn is_simple(&self) -> bool {
        let n = self.verts.len();
        for i in 0..n {
            let (a1, a2) = (self.verts[i], self.verts[(i + 1) % n]);
            for j in (i + 1)..n {
                let (b1, b2) = (self.verts[j], self.verts[(j + 1) % n]);
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    // Edges sharing one endpoint may not otherwise overlap.
                    let shared = if j == i + 1 { a2 } else { a1 };
                    let (a_free, b_free) = if j == i + 1 { (a1, b2) } else { (a2, b1) };
                    if (b_free - shared).cross(a_free - shared) == 0.0
                        && (b_free - shared).dot(a_free - shared) > 0.0
                    {
                        return false;
                    }
                } else if segs_intersect(a1, a2, b1, b2) {
                    return false;
                }
            }
        }
        true
    }

    pub fn signed_area(&self) -> f64 {
        signed_area_2(&self.verts) * 0.5
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| a.dist(b)).sum()
    }

    /// Area centroid.
    pub fn centroid(&self) -> Vec2 {
        let mut cx = 0.0;
        let mut cy = 0.0;
        let mut a2 = 0.0;
        for (p, q) in self.edges() {
            let c = p.cross(q);
            a2 += c;
            cx += (p.x + q.x) * c;
            cy += (p.y + q.y) * c;
        }
        Vec2::new(cx / (3.0 * a2), cy / (3.0 * a2))
    }

    pub fn aabb(&self) -> Aabb {
        Aabb::from_points(self.verts.iter().copied()).expect("polygon has vertices")
    }

    /// Strict interior test by crossing parity; points on the boundary give an
    /// unspecified answer, use [`Polygon::on_boundary`] to detect those.
    pub fn contains_point(&self, p: Vec2) -> bool {
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a.y > p.y) != (b.y > p.y) {
                let t = (p.y - a.y) / (b.y - a.y);
                let x_int = a.x + t * (b.x - a.x);
                if p.x < x_int {
                    inside = !inside;
                }
            }
        }
        inside
    }

    pub fn on_boundary(&self, p: Vec2, tol: f64) -> bool {
        self.dist_to_boundary(p) <= tol
    }

    /// Distance from `p` to the boundary curve (not the filled region).
    pub fn dist_to_boundary(&self, p: Vec2) -> f64 {
        let mut best = f64::INFINITY;
        for (a, b) in self.edges() {
            best = best.min(seg_point_dist_sq(a, b, p));
        }
        best.sqrt()
    }

    pub fn is_convex(&self) -> bool {
        let n = self.verts.len();
        for i in 0..n {
            let a = self.verts[i];
            let b = self.verts[(i + 1) % n];
            let c = self.verts[(i + 2) % n];
            let cr = (b - a).cross(c - b);
            let scale = (b - a).norm() * (c - b).norm();
            if cr < -EPS * scale {
                return false;
            }
        }
        true
    }

    pub fn convex_hull(&self) -> Vec<Vec2> {
        convex_hull(&self.verts)
    }

    /// Largest distance between two vertices, computed on the convex hull.
    pub fn diameter(&self) -> f64 {
        let hull = self.convex_hull();
        let mut best = 0.0f64;
        for i in 0..hull.len() {
            for j in (i + 1)..hull.len() {
                best = best.max(hull[i].dist(hull[j]));
            }
        }
        best
    }

    /// A point strictly inside the polygon.
    pub fn interior_point(&self) -> Vec2 {
        let c = self.centroid();
        if self.contains_point(c) && !self.on_boundary(c, 0.0) {
            return c;
        }
        // Convex corner with lowest (y, x), then the standard diagonal trick.
        let n = self.verts.len();
        let mut bi = 0;
        for i in 1..n {
            let (v, b) = (self.verts[i], self.verts[bi]);
            if (v.y, v.x) < (b.y, b.x) {
                bi = i;
            }
        }
        let a = self.verts[(bi + n - 1) % n];
        let b = self.verts[bi];
        let cpt = self.verts[(bi + 1) % n];
        let mut best: Option<(f64, Vec2)> = None;
        for (i, &q) in self.verts.iter().enumerate() {
            if i == bi || i == (bi + n - 1) % n || i == (bi + 1) % n {
                continue;
            }
            let in_tri = (b - a).cross(q - a) >= 0.0
                && (cpt - b).cross(q - b) >= 0.0
                && (a - cpt).cross(q - cpt) >= 0.0;
            if in_tri {
                let d = q.dist(b);
                if best.map_or(true, |(bd, _)| d < bd) {
                    best = Some((d, q));
                }
            }
        }
        match best {
            Some((_, q)) => (b + q) * 0.5,
            None => (a + b + cpt) * (1.0 / 3.0),
        }
    }

    pub fn transform(&self, t: &Similarity) -> Result<Polygon> {
        let verts: Vec<Vec2> = self.verts.iter().map(|&v| t.apply(v)).collect();
        Polygon::new(verts)
    }

    pub fn to_polyline(&self) -> Polyline {
        Polyline::closed(self.verts.clone())
    }
}

fn signed_area_2(verts: &[Vec2]) -> f64 {
    let n = verts.len();
    let mut a2 = 0.0;
    for i in 0..n {
        a2 += verts[i].cross(verts[(i + 1) % n]);
    }
    a2
}

/// Monotone chain convex hull; collinear points are dropped.  Returns the hull
/// in counterclockwise order.
pub fn convex_hull(points: &[Vec2]) -> Vec<Vec2> {
    let mut pts: Vec<Vec2> = points.to_vec();
    pts.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).expect("finite coordinates"));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let build = |iter: &mut dyn Iterator<Item = Vec2>| -> Vec<Vec2> {
        let mut chain: Vec<Vec2> = Vec::new();
        for p in iter {
            while chain.len() >= 2 {
                let b = chain[chain.len() - 1];
                let a = chain[chain.len() - 2];
                if (b - a).cross(p - a) <= 0.0 {
                    chain.pop();
                } else {
                    break;
                }
            }
            chain.push(p);
        }
        chain
    };
    let mut lower = build(&mut pts.iter().copied());
    let mut upper = build(&mut pts.iter().rev().copied());
    lower.pop();
    upper.pop();
    lower.append(&mut upper);
    lower
}
