//! Boundary geodesics: the chord-to-arc constant and path rerouting.
//!
//! For a component boundary, the path constant `k` is the largest ratio of
//! boundary geodesic (shorter arc) to straight-line distance over sampled
//! boundary point pairs. Any path through the open region bounded by the
//! component can be replaced by a boundary path at most `k` times longer
//! than the chord it shortcuts; [`push_path_to_boundary`] performs that
//! replacement for a polyline crossing scene components.

use crate::error::{Error, Result};
use crate::geom::{seg_closest_point, Polygon, Polyline, Vec2, EPS, TOUCH_EPS};
use crate::ifs::Scene;
use alloc::format;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use crate::math::FloatExt;

/// Chord-to-arc scan result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathReport {
    /// Largest geodesic-to-chord ratio over sampled pairs; at least 1.
    pub k: f64,
    /// Sample pair attaining `k`, lexicographically ordered.
    pub witness: (Vec2, Vec2),
    /// Number of boundary samples.
    pub samples: usize,
}

/// Arc-length positions of `samples_per_edge` points per edge (the starting
/// vertex plus interior points; the closing vertex belongs to the next edge).
fn boundary_points(poly: &Polygon, samples_per_edge: u32) -> (Vec<(Vec2, f64)>, f64) {
    let mut out = Vec::new();
    let mut s = 0.0f64;
    for (a, b) in poly.edges() {
        let len = a.dist(b);
        for i in 0..samples_per_edge {
            let t = i as f64 / samples_per_edge as f64;
            out.push((a + (b - a) * t, s + t * len));
        }
        s += len;
    }
    (out, s)
}

/// Largest ratio of boundary geodesic to chord over sampled pairs.
///
/// Ties go to the pair with lexicographically smallest coordinates, so the
/// witness is deterministic.
pub fn boundary_path_constant(poly: &Polygon, samples_per_edge: u32) -> Result<PathReport> {
    if samples_per_edge < 1 {
        return Err(Error::Domain("samples_per_edge must be at least 1".into()));
    }
    let (pts, perimeter) = boundary_points(poly, samples_per_edge);
    let mut k = 1.0f64;
    let mut witness = (pts[0].0, pts[0].0);
    let mut wkey = (f64::INFINITY, f64::INFINITY, f64::INFINITY, f64::INFINITY);
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let (p, sp) = pts[i];
            let (q, sq) = pts[j];
            let chord = p.dist(q);
            if chord <= TOUCH_EPS {
                continue;
            }
            let along = (sq - sp).abs();
            let geo = along.min(perimeter - along);
            let ratio = geo / chord;
            let (lo, hi) = if (p.x, p.y) <= (q.x, q.y) { (p, q) } else { (q, p) };
            let key = (lo.x, lo.y, hi.x, hi.y);
            if ratio > k || (ratio == k && key < wkey) {
                k = ratio;
                witness = (lo, hi);
                wkey = key;
            }
        }
    }
    Ok(PathReport { k, witness, samples: pts.len() })
}

/// Region of the complement a sub-segment runs through.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Region {
    /// Strictly inside component `i` (index into `scene.components`).
    Hole(usize),
    /// Strictly outside the seed (the unbounded complement region).
    Outside,
    /// On the boundary set itself.
    OnBoundary,
}

/// Arc-length position of the point on the polygon boundary closest to `p`.
fn locate_on_boundary(poly: &Polygon, p: Vec2) -> f64 {
    let mut best = f64::INFINITY;
    let mut s_at = 0.0f64;
    let mut s = 0.0f64;
    for (a, b) in poly.edges() {
        let len = a.dist(b);
        let q = seg_closest_point(a, b, p);
        let d = p.dist(q);
        if d < best {
            best = d;
            s_at = s + a.dist(q);
        }
        s += len;
    }
    s_at
}

/// Vertices along the shorter boundary arc from `p_in` to `p_out`
/// (exclusive); ties pick the forward (orientation) direction.
fn geodesic_vertices(poly: &Polygon, p_in: Vec2, p_out: Vec2) -> Vec<Vec2> {
    let verts = poly.verts();
    let n = verts.len();
    let mut prefix = Vec::with_capacity(n + 1);
    let mut s = 0.0f64;
    for (a, b) in poly.edges() {
        prefix.push(s);
        s += a.dist(b);
    }
    let perimeter = s;
    let s_in = locate_on_boundary(poly, p_in);
    let s_out = locate_on_boundary(poly, p_out);
    let forward = (s_out - s_in).rem_euclid(perimeter);
    let backward = perimeter - forward;

    let mut out = Vec::new();
    if forward <= backward {
        for step in 0..n {
            let v = (vertex_after(&prefix, s_in) + step) % n;
            let off = (prefix[v] - s_in).rem_euclid(perimeter);
            if off >= forward {
                break;
            }
            out.push(verts[v]);
        }
    } else {
        for step in 0..n {
            let v = (vertex_before(&prefix, s_in) + n - step) % n;
            let off = (s_in - prefix[v]).rem_euclid(perimeter);
            if off >= backward {
                break;
            }
            out.push(verts[v]);
        }
    }
    out
}

/// Index of the first vertex at arc position strictly greater than `s`.
fn vertex_after(prefix: &[f64], s: f64) -> usize {
    for (v, &pv) in prefix.iter().enumerate() {
        if pv > s {
            return v;
        }
    }
    0
}

/// Index of the last vertex at arc position strictly less than `s`; wraps to
/// the final vertex when `s` precedes every vertex.
fn vertex_before(prefix: &[f64], s: f64) -> usize {
    for (v, &pv) in prefix.iter().enumerate().rev() {
        if pv < s {
            return v;
        }
    }
    prefix.len() - 1
}

/// Splits every path segment at its crossings with component and seed
/// edges and returns the refined point list.
fn split_at_boundaries(scene: &Scene, path: &Polyline) -> Vec<Vec2> {
    let mut edges: Vec<(Vec2, Vec2)> = Vec::new();
    if let Some(seed) = &scene.seed {
        edges.extend(seed.edges());
    }
    for c in &scene.components {
        edges.extend(c.polygon.edges());
    }
    let mut out = Vec::new();
    for (a, b) in path.segments() {
        let ab = b - a;
        let mut ts = alloc::vec![0.0f64, 1.0];
        for &(c, d) in &edges {
            let cd = d - c;
            let denom = ab.cross(cd);
            if denom.abs() <= 1e-12 * ab.norm() * cd.norm() {
                continue;
            }
            let ac = c - a;
            let t = ac.cross(cd) / denom;
            let u = ac.cross(ab) / denom;
            if (-1e-12..=1.0 + 1e-12).contains(&t) && (-1e-12..=1.0 + 1e-12).contains(&u) {
                ts.push(t.clamp(0.0, 1.0));
            }
        }
        ts.sort_by(f64::total_cmp);
        let mut prev_t = f64::NEG_INFINITY;
        for &t in &ts {
            if t - prev_t <= 1e-12 {
                continue;
            }
            prev_t = t;
            let p = a + ab * t;
            if out.last().map_or(true, |&q: &Vec2| p.dist(q) > TOUCH_EPS) {
                out.push(p);
            }
        }
    }
    out
}

fn classify_midpoint(scene: &Scene, mid: Vec2) -> Result<Region> {
    for (ci, c) in scene.components.iter().enumerate() {
        let poly = &c.polygon;
        if poly.aabb().contains(mid)
            && poly.contains_point(mid)
            && poly.dist_to_boundary(mid) > EPS
        {
            return Ok(Region::Hole(ci));
        }
    }
    if let Some(seed) = &scene.seed {
        if !seed.contains_point(mid) && seed.dist_to_boundary(mid) > EPS {
            return Ok(Region::Outside);
        }
    }
    if scene.dist_to_boundary(mid) <= EPS {
        return Ok(Region::OnBoundary);
    }
    Err(Error::Domain(format!(
        "path passes through uncarved material near ({}, {}); it must stay in \
         the closure of the complement regions",
        mid.x, mid.y
    )))
}

/// Replaces every excursion of `path` through an open complement region by
/// the shorter boundary arc of that region, leaving on-boundary stretches
/// and the endpoints untouched.
///
/// The path must be open with at least two points, start and end on the
/// boundary set, and stay within the closure of the complement regions
/// (component interiors, the outside of the seed, and the boundary set
/// itself). A path already on the boundary set is returned unchanged.
pub fn push_path_to_boundary(scene: &Scene, path: &Polyline) -> Result<Polyline> {
    if path.closed || path.points.len() < 2 {
        return Err(Error::Domain(
            "path must be an open polyline with at least two points".into(),
        ));
    }
    let first = path.points[0];
    let last = *path.points.last().expect("len checked");
    for (name, p) in [("start", first), ("end", last)] {
        if scene.dist_to_boundary(p) > EPS {
            return Err(Error::Domain(format!(
                "path {name} ({}, {}) is not on the boundary set",
                p.x, p.y
            )));
        }
    }

    let pts = split_at_boundaries(scene, path);
    let regions: Vec<Region> = pts
        .windows(2)
        .map(|w| classify_midpoint(scene, (w[0] + w[1]) * 0.5))
        .collect::<Result<_>>()?;

    if regions.iter().all(|r| *r == Region::OnBoundary) {
        return Ok(path.clone());
    }

    let region_poly = |r: Region| -> Option<&Polygon> {
        match r {
            Region::Hole(ci) => Some(&scene.components[ci].polygon),
            Region::Outside => scene.seed.as_ref(),
            Region::OnBoundary => None,
        }
    };

    let mut out: Vec<Vec2> = Vec::new();
    let push = |p: Vec2, out: &mut Vec<Vec2>| {
        if out.last().map_or(true, |&q: &Vec2| p.dist(q) > TOUCH_EPS) {
            out.push(p);
        }
    };
    push(pts[0], &mut out);
    let mut i = 0usize;
    while i < regions.len() {
        let region = regions[i];
        let mut j = i;
        while j + 1 < regions.len() && regions[j + 1] == region {
            j += 1;
        }
        let p_in = pts[i];
        let p_out = pts[j + 1];
        match region_poly(region) {
            Some(poly) => {
                for v in geodesic_vertices(poly, p_in, p_out) {
                    push(v, &mut out);
                }
                push(p_out, &mut out);
            }
            None => {
                for &p in &pts[i + 1..=j + 1] {
                    push(p, &mut out);
                }
            }
        }
        i = j + 1;
    }

    // Endpoints are preserved bit for bit.
    out[0] = first;
    let last_idx = out.len() - 1;
    out[last_idx] = last;
    Ok(Polyline { points: out, closed: false })
}

/// On-boundary check used by the tests: largest distance from the polyline
/// (vertices and midpoints) to the boundary set.
#[cfg(test)]
fn max_offset_from_boundary(scene: &Scene, line: &Polyline) -> f64 {
    let mut worst = 0.0f64;
    for &p in &line.points {
        worst = worst.max(scene.dist_to_boundary(p));
    }
    for (a, b) in line.segments() {
        worst = worst.max(scene.dist_to_boundary((a + b) * 0.5));
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::{build_preset, generate_scene};
    use alloc::vec;

    fn unit_square() -> Polygon {
        Polygon::new(vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ])
        .unwrap()
    }

    fn carpet(depth: u32) -> Scene {
        let ifs = build_preset("sierpinski-carpet").unwrap();
        generate_scene(&ifs, depth).unwrap()
    }

    fn polyline_length(line: &Polyline) -> f64 {
        line.segments().map(|(a, b)| a.dist(b)).sum()
    }

    #[test]
    fn square_constant_is_two() {
        // Opposite edge midpoints: geodesic 2 against chord 1.
        let rep = boundary_path_constant(&unit_square(), 64).unwrap();
        assert!((rep.k - 2.0).abs() < 1e-9, "k {}", rep.k);
        let (p, q) = rep.witness;
        assert!((p.dist(q) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn triangle_constant_is_two_from_corner_pairs() {
        // Two samples straddling a 60-degree corner at equal arc distance t
        // have geodesic 2t and chord 2t*sin(30) = t, so the ratio is exactly
        // 2 regardless of t (1 / sin(half interior angle) in general). That
        // beats the vertex-to-opposite-midpoint pair, whose ratio is
        // (3/2) / (sqrt(3)/2) = sqrt(3).
        let tri = Polygon::new(vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.5, 3.0f64.sqrt() / 2.0),
        ])
        .unwrap();
        let rep = boundary_path_constant(&tri, 64).unwrap();
        assert!((rep.k - 2.0).abs() < 1e-9, "k {}", rep.k);
        // The vertex-to-midpoint pair itself still measures sqrt(3).
        let apex = Vec2::new(0.5, 3.0f64.sqrt() / 2.0);
        let base_mid = Vec2::new(0.5, 0.0);
        let geodesic = 1.5;
        let ratio = geodesic / apex.dist(base_mid);
        assert!((ratio - 3.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn many_sided_polygon_approaches_half_pi() {
        let n = 256usize;
        let verts: Vec<Vec2> = (0..n)
            .map(|i| {
                let a = 2.0 * core::f64::consts::PI * i as f64 / n as f64;
                Vec2::new(a.cos(), a.sin())
            })
            .collect();
        let poly = Polygon::new(verts).unwrap();
        let rep = boundary_path_constant(&poly, 16).unwrap();
        assert!(
            (rep.k - core::f64::consts::FRAC_PI_2).abs() < 1e-3,
            "k {}",
            rep.k
        );
    }

    #[test]
    fn doubling_density_barely_moves_k() {
        for poly in [
            unit_square(),
            Polygon::new(vec![
                Vec2::new(0.0, 0.0),
                Vec2::new(1.0, 0.0),
                Vec2::new(0.5, 3.0f64.sqrt() / 2.0),
            ])
            .unwrap(),
        ] {
            let a = boundary_path_constant(&poly, 64).unwrap().k;
            let b = boundary_path_constant(&poly, 128).unwrap().k;
            assert!((a - b).abs() < 1e-3, "k moved from {a} to {b}");
        }
    }

    #[test]
    fn k_is_scale_invariant_and_at_least_one() {
        let big = unit_square()
            .transform(&crate::geom::Similarity {
                scale: 113.0,
                rotation: 1.1,
                reflect: true,
                translation: Vec2::new(-40.0, 7.0),
            })
            .unwrap();
        let rep = boundary_path_constant(&big, 32).unwrap();
        assert!((rep.k - 2.0).abs() < 1e-9);
        assert!(rep.k >= 1.0);
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(matches!(
            boundary_path_constant(&unit_square(), 0).unwrap_err(),
            Error::Domain(_)
        ));
    }

    #[test]
    fn chord_across_hole_walks_the_shorter_arc() {
        // Horizontal chord through the middle hole of the depth-1 carpet:
        // both arcs tie at length 2/3, so the forward (orientation) arc is
        // taken, through the bottom edge.
        let scene = carpet(1);
        let path = Polyline {
            points: vec![Vec2::new(1.0 / 3.0, 0.5), Vec2::new(2.0 / 3.0, 0.5)],
            closed: false,
        };
        let pushed = push_path_to_boundary(&scene, &path).unwrap();
        // Both arcs tie, so the walk visits exactly two adjacent hole
        // corners: either the bottom pair or the top pair.
        assert_eq!(pushed.points.len(), 4);
        let corner_y = pushed.points[1].y;
        assert!(
            (corner_y - 1.0 / 3.0).abs() < 1e-12 || (corner_y - 2.0 / 3.0).abs() < 1e-12
        );
        assert!((pushed.points[2].y - corner_y).abs() < 1e-12);
        assert!((pushed.points[1].x - 1.0 / 3.0).abs() < 1e-12);
        assert!((pushed.points[2].x - 2.0 / 3.0).abs() < 1e-12);
        // Length doubles the chord, matching the square's path constant.
        assert!((polyline_length(&pushed) - 2.0 / 3.0).abs() < 1e-9);
        assert!(max_offset_from_boundary(&scene, &pushed) < 1e-9);
    }

    #[test]
    fn endpoints_survive_bit_for_bit() {
        let scene = carpet(2);
        let a = Vec2::new(1.0 / 3.0, 0.4);
        let b = Vec2::new(2.0 / 3.0, 0.6);
        let path = Polyline { points: vec![a, b], closed: false };
        let pushed = push_path_to_boundary(&scene, &path).unwrap();
        assert_eq!(pushed.points[0].x.to_bits(), a.x.to_bits());
        assert_eq!(pushed.points[0].y.to_bits(), a.y.to_bits());
        let q = pushed.points.last().unwrap();
        assert_eq!(q.x.to_bits(), b.x.to_bits());
        assert_eq!(q.y.to_bits(), b.y.to_bits());
        assert!(max_offset_from_boundary(&scene, &pushed) < 1e-9);
    }

    #[test]
    fn path_already_on_boundary_is_returned_unchanged() {
        let scene = carpet(1);
        let path = Polyline {
            points: vec![Vec2::new(0.0, 0.0), Vec2::new(0.7, 0.0), Vec2::new(1.0, 0.0)],
            closed: false,
        };
        let pushed = push_path_to_boundary(&scene, &path).unwrap();
        assert_eq!(pushed.points, path.points);
    }

    #[test]
    fn endpoint_off_boundary_is_rejected() {
        let scene = carpet(1);
        let path = Polyline {
            points: vec![Vec2::new(0.1, 0.1), Vec2::new(1.0, 0.0)],
            closed: false,
        };
        let err = push_path_to_boundary(&scene, &path).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn path_through_uncarved_material_is_rejected() {
        // The segment from the seed corner to the hole corner runs through
        // solid material at depth 1.
        let scene = carpet(1);
        let path = Polyline {
            points: vec![Vec2::new(0.0, 0.0), Vec2::new(1.0 / 3.0, 1.0 / 3.0)],
            closed: false,
        };
        let err = push_path_to_boundary(&scene, &path).unwrap_err();
        match err {
            Error::Domain(msg) => assert!(msg.contains("uncarved"), "message: {msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn excursion_outside_the_seed_is_pushed_onto_the_seed_ring() {
        // From one bottom corner to the other, dipping below the seed: the
        // replacement walks the bottom edge.
        let scene = carpet(1);
        let path = Polyline {
            points: vec![
                Vec2::new(0.0, 0.0),
                Vec2::new(0.5, -0.4),
                Vec2::new(1.0, 0.0),
            ],
            closed: false,
        };
        let pushed = push_path_to_boundary(&scene, &path).unwrap();
        assert!(max_offset_from_boundary(&scene, &pushed) < 1e-9);
        assert!((polyline_length(&pushed) - 1.0).abs() < 1e-9, "walks the bottom edge");
    }

    #[test]
    fn pushed_length_is_bounded_by_k_times_input() {
        // Chords through carpet holes: every replaced excursion grows by at
        // most the square's constant k = 2.
        let scene = carpet(2);
        let chords = [
            (Vec2::new(1.0 / 3.0, 0.5), Vec2::new(2.0 / 3.0, 0.5)),
            (Vec2::new(4.0 / 9.0, 2.0 / 9.0), Vec2::new(5.0 / 9.0, 2.0 / 9.0)),
            (Vec2::new(0.5, 1.0 / 3.0), Vec2::new(0.5, 2.0 / 3.0)),
        ];
        for (a, b) in chords {
            let path = Polyline { points: vec![a, b], closed: false };
            let input_len = a.dist(b);
            let pushed = push_path_to_boundary(&scene, &path).unwrap();
            let out_len = polyline_length(&pushed);
            assert!(
                out_len <= 2.0 * input_len + 1e-9,
                "chord {a:?}-{b:?}: {out_len} > 2 * {input_len}"
            );
            assert!(max_offset_from_boundary(&scene, &pushed) < 1e-9);
        }
    }
}
