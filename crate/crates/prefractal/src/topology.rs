//! Winding numbers and homotopy classification of radial maps.
//!
//! For a base point `w` off the boundary set, the radial map
//! `x -> (x - w) / |x - w|` sends the boundary set to the unit circle; its
//! homotopy class is decided by which complement component holds `w`, and
//! two base points in the same component give homotopic maps. The winding
//! number of a closed loop around `w` is the discrete invariant that
//! certifies the classification, and `1 / dist(w, E)` bounds the Lipschitz
//! constant of the radial map on the boundary set.

use crate::error::{Error, Result};
use crate::geom::{seg_point_dist, Vec2, TOUCH_EPS};
use crate::ifs::Scene;
use crate::raster::LabeledGrid;
use alloc::format;

#[cfg(not(feature = "std"))]
use crate::math::FloatExt;

/// Winding number of the closed loop through `points` around `w`.
///
/// Signed turn angles accumulate exactly one full turn per encirclement;
/// the total must land within 1e-6 turns of an integer or the loop passes
/// too close to `w` for the arithmetic to certify (numerical error). `w`
/// on the loop itself (within the touch threshold) is a domain error.
pub fn winding_number(points: &[Vec2], w: Vec2) -> Result<i32> {
    if points.len() < 2 {
        return Err(Error::Domain(
            "winding number needs a closed loop of at least two points".into(),
        ));
    }
    for i in 0..points.len() {
        let a = points[i];
        let b = points[(i + 1) % points.len()];
        if a.dist(b) <= TOUCH_EPS {
            continue;
        }
        if seg_point_dist(a, b, w) <= TOUCH_EPS {
            return Err(Error::Domain(format!(
                "base point ({}, {}) lies on the loop",
                w.x, w.y
            )));
        }
    }
    let mut total = 0.0f64;
    for i in 0..points.len() {
        let a = points[i] - w;
        let b = points[(i + 1) % points.len()] - w;
        total += a.cross(b).atan2(a.dot(b));
    }
    let turns = total / core::f64::consts::TAU;
    let rounded = turns.round();
    if (turns - rounded).abs() >= 1e-6 {
        return Err(Error::Numerical(format!(
            "winding sum {turns} is not within 1e-6 of an integer",
        )));
    }
    Ok(rounded as i32)
}

/// Whether the radial maps based at `w` and `z` are homotopic: true exactly
/// when both points lie in the same complement component of the labeled
/// grid. Errors when either point is outside the grid or too close to the
/// boundary set to classify at this resolution.
pub fn homotopy_equivalent(labeled: &LabeledGrid, w: Vec2, z: Vec2) -> Result<bool> {
    Ok(labeled.component_of_point(w)? == labeled.component_of_point(z)?)
}

/// Distance data of one base point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialMapQuery {
    pub w: Vec2,
    /// Exact distance from `w` to the boundary set.
    pub dist_to_boundary: f64,
    /// `1 / dist`: Lipschitz bound of the radial map on the boundary set.
    pub lipschitz_bound: f64,
}

/// Exact distance from `w` to the boundary set and the induced Lipschitz
/// bound. `w` on the boundary set is a domain error.
pub fn radial_query(scene: &Scene, w: Vec2) -> Result<RadialMapQuery> {
    let dist = scene.dist_to_boundary(w);
    if dist <= TOUCH_EPS {
        return Err(Error::Domain(format!(
            "base point ({}, {}) lies on the boundary set",
            w.x, w.y
        )));
    }
    Ok(RadialMapQuery { w, dist_to_boundary: dist, lipschitz_bound: 1.0 / dist })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::{build_preset, generate_scene};
    use crate::metrics::radial::boundary_samples;
    use crate::raster::{label_complement, rasterize};
    use alloc::vec;
    use alloc::vec::Vec;

    fn square_loop() -> Vec<Vec2> {
        vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ]
    }

    #[test]
    fn unit_square_winds_once_around_its_center() {
        assert_eq!(winding_number(&square_loop(), Vec2::new(0.5, 0.5)).unwrap(), 1);
    }

    #[test]
    fn outside_points_have_winding_zero() {
        for w in [Vec2::new(2.0, 0.5), Vec2::new(-1.0, -1.0), Vec2::new(0.5, 7.0)] {
            assert_eq!(winding_number(&square_loop(), w).unwrap(), 0);
        }
    }

    #[test]
    fn reversed_loop_winds_minus_one() {
        let mut pts = square_loop();
        pts.reverse();
        assert_eq!(winding_number(&pts, Vec2::new(0.5, 0.5)).unwrap(), -1);
    }

    #[test]
    fn doubled_loop_winds_twice() {
        let mut pts = square_loop();
        pts.extend(square_loop());
        assert_eq!(winding_number(&pts, Vec2::new(0.5, 0.5)).unwrap(), 2);
    }

    #[test]
    fn figure_eight_winds_oppositely_in_each_lobe() {
        // Upper lobe counterclockwise, lower lobe clockwise, sharing the
        // segment from (0,0) to (1,0).
        let pts = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, -1.0),
            Vec2::new(0.0, -1.0),
        ];
        assert_eq!(winding_number(&pts, Vec2::new(0.5, 0.5)).unwrap(), 1);
        assert_eq!(winding_number(&pts, Vec2::new(0.5, -0.5)).unwrap(), -1);
        assert_eq!(winding_number(&pts, Vec2::new(3.0, 0.0)).unwrap(), 0);
    }

    #[test]
    fn base_point_on_loop_is_rejected() {
        let err = winding_number(&square_loop(), Vec2::new(0.5, 0.0)).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn winding_is_invariant_under_vertex_insertion() {
        // Splitting edges does not change the homotopy class of the loop.
        let mut dense = Vec::new();
        let pts = square_loop();
        for i in 0..pts.len() {
            let a = pts[i];
            let b = pts[(i + 1) % pts.len()];
            for k in 0..8 {
                dense.push(a + (b - a) * (k as f64 / 8.0));
            }
        }
        assert_eq!(winding_number(&dense, Vec2::new(0.25, 0.75)).unwrap(), 1);
        assert_eq!(winding_number(&dense, Vec2::new(1.5, 0.5)).unwrap(), 0);
    }

    #[test]
    fn hole_boundaries_wind_once_around_interior_points() {
        let ifs = build_preset("sierpinski-carpet").unwrap();
        let scene = generate_scene(&ifs, 2).unwrap();
        for comp in &scene.components {
            let w = comp.polygon.interior_point();
            let n = winding_number(comp.polygon.verts(), w).unwrap();
            assert_eq!(n, 1, "component {}", comp.id);
        }
    }

    #[test]
    fn same_hole_base_points_are_homotopic_different_holes_are_not() {
        let ifs = build_preset("sierpinski-carpet").unwrap();
        let scene = generate_scene(&ifs, 2).unwrap();
        let grid = rasterize(&scene, 81).unwrap();
        let labeled = label_complement(&grid);
        // Two points inside the central hole.
        let a = Vec2::new(0.45, 0.5);
        let b = Vec2::new(0.55, 0.45);
        assert!(homotopy_equivalent(&labeled, a, b).unwrap());
        // A generation-2 hole center.
        let c = Vec2::new(1.0 / 6.0, 1.0 / 6.0);
        assert!(!homotopy_equivalent(&labeled, a, c).unwrap());
        // Outside the seed entirely.
        let far = Vec2::new(-0.02, -0.02);
        assert!(!homotopy_equivalent(&labeled, a, far).unwrap());
        assert!(homotopy_equivalent(&labeled, far, Vec2::new(1.02, 1.02)).unwrap());
    }

    #[test]
    fn homotopy_is_an_equivalence_on_classifiable_points() {
        let ifs = build_preset("sierpinski-carpet").unwrap();
        let scene = generate_scene(&ifs, 1).unwrap();
        let grid = rasterize(&scene, 27).unwrap();
        let labeled = label_complement(&grid);
        let pts = [
            Vec2::new(0.4, 0.5),
            Vec2::new(0.6, 0.5),
            Vec2::new(0.5, 0.6),
            Vec2::new(-0.03, 0.5),
            Vec2::new(1.03, 0.5),
        ];
        for &p in &pts {
            assert!(homotopy_equivalent(&labeled, p, p).unwrap(), "reflexive");
            for &q in &pts {
                let pq = homotopy_equivalent(&labeled, p, q).unwrap();
                let qp = homotopy_equivalent(&labeled, q, p).unwrap();
                assert_eq!(pq, qp, "symmetric");
                for &r in &pts {
                    if homotopy_equivalent(&labeled, p, q).unwrap()
                        && homotopy_equivalent(&labeled, q, r).unwrap()
                    {
                        assert!(homotopy_equivalent(&labeled, p, r).unwrap(), "transitive");
                    }
                }
            }
        }
    }

    #[test]
    fn winding_agrees_with_homotopy_on_a_single_ring() {
        // For a scene that is one square ring, two base points are
        // homotopy equivalent exactly when the ring winds the same number
        // of times around both.
        let ring = crate::geom::Polygon::new(square_loop()).unwrap();
        let scene = Scene::from_polylines(vec![ring.to_polyline()]).unwrap();
        let grid = rasterize(&scene, 32).unwrap();
        let labeled = label_complement(&grid);
        // The outside points sit inside the two-cell padding ring.
        let pts = [
            Vec2::new(0.3, 0.3),
            Vec2::new(0.7, 0.6),
            Vec2::new(-0.05, 0.5),
            Vec2::new(1.05, 1.05),
        ];
        for &p in &pts {
            for &q in &pts {
                let same = homotopy_equivalent(&labeled, p, q).unwrap();
                let wp = winding_number(ring.verts(), p).unwrap();
                let wq = winding_number(ring.verts(), q).unwrap();
                assert_eq!(same, wp == wq, "points {p:?} {q:?}");
            }
        }
    }

    #[test]
    fn radial_query_center_of_depth_one_carpet() {
        let ifs = build_preset("sierpinski-carpet").unwrap();
        let scene = generate_scene(&ifs, 1).unwrap();
        let q = radial_query(&scene, Vec2::new(0.5, 0.5)).unwrap();
        assert!((q.dist_to_boundary - 1.0 / 6.0).abs() < 1e-12);
        assert!((q.lipschitz_bound - 6.0).abs() < 1e-10);
    }

    #[test]
    fn radial_query_rejects_boundary_points() {
        let ifs = build_preset("sierpinski-carpet").unwrap();
        let scene = generate_scene(&ifs, 1).unwrap();
        let err = radial_query(&scene, Vec2::new(0.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn lipschitz_bound_controls_the_radial_map_on_samples() {
        // |pi_w(x) - pi_w(y)| <= 2 |x - y| / dist(w, E) for boundary points
        // x, y: each radial projection moves a point by at most its
        // distance defect, and both x and y are at least dist(w, E) away.
        let ifs = build_preset("sierpinski-carpet").unwrap();
        let scene = generate_scene(&ifs, 2).unwrap();
        for w in [Vec2::new(0.5, 0.5), Vec2::new(1.0 / 6.0, 1.0 / 6.0), Vec2::new(-0.3, 0.4)] {
            let q = radial_query(&scene, w).unwrap();
            let samples = boundary_samples(&scene, None);
            let project = |p: Vec2| {
                let d = p - w;
                d * (1.0 / d.norm())
            };
            for (i, &x) in samples.iter().enumerate().step_by(7) {
                for &y in samples.iter().skip(i + 1).step_by(13) {
                    let lhs = project(x).dist(project(y));
                    let rhs = 2.0 * q.lipschitz_bound * x.dist(y);
                    assert!(lhs <= rhs + 1e-12, "w {w:?} x {x:?} y {y:?}");
                }
            }
        }
    }
}
