//! Diameter, inradius, and roundness of a single component.
//!
//! The inradius of a convex polygon is solved exactly: the Chebyshev center
//! maximizes `t` subject to one half-plane constraint per edge, and the
//! optimum of that linear program sits on three active constraints (or two
//! plus degeneracy), so enumerating edge triples and keeping the best
//! feasible candidate is exact up to floating-point rounding. Non-convex
//! polygons (and convex ones with enough edges to make the cubic enumeration
//! slow) fall back to a distance transform on a local grid, which carries an
//! explicit `h * sqrt(2)` error bound.

use crate::error::{Error, Result};
use crate::geom::{Polygon, Vec2};
use crate::ifs::Scene;
use crate::raster::{distance_to_set, rasterize_with, RasterOptions};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use crate::math::FloatExt;

/// Edge count above which the exact triple enumeration is abandoned even for
/// convex polygons; the grid fallback is O(cells) rather than O(n^3 * n).
const EXACT_EDGE_LIMIT: usize = 24;

/// Cells across the polygon diameter used by the grid fallback.
const FALLBACK_CELLS_ACROSS: f64 = 384.0;

/// Size and shape summary of one component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeMetrics {
    /// Largest distance between two vertices.
    pub diameter: f64,
    /// Radius of the largest disk contained in the closed polygon.
    pub inradius: f64,
    /// `inradius / diameter`, in (0, 1/2].
    pub roundness: f64,
    /// Absolute error bound on `inradius`: zero for the exact convex path,
    /// one cell diagonal for the grid fallback.
    pub inradius_error: f64,
}

/// Computes diameter, inradius, and roundness of `polygon`.
pub fn shape_metrics(polygon: &Polygon) -> Result<ShapeMetrics> {
    let diameter = polygon.diameter();
    if diameter <= 0.0 {
        return Err(Error::Domain("polygon has zero diameter".into()));
    }
    let (inradius, inradius_error) =
        if polygon.is_convex() && polygon.verts().len() <= EXACT_EDGE_LIMIT {
            (chebyshev_inradius(polygon)?, 0.0)
        } else {
            grid_inradius(polygon)?
        };
    if inradius <= 0.0 {
        return Err(Error::Numerical(
            "inradius collapsed to zero; polygon is too thin for the solver".into(),
        ));
    }
    Ok(ShapeMetrics {
        diameter,
        inradius,
        roundness: inradius / diameter,
        inradius_error,
    })
}

/// Outward half-plane form of each edge: `n . p <= d` for interior points,
/// with `n` the unit outward normal.
fn half_planes(polygon: &Polygon) -> Vec<(Vec2, f64)> {
    polygon
        .edges()
        .map(|(a, b)| {
            let dir = b - a;
            let len = dir.norm();
            // CCW orientation puts the interior on the left of each edge, so
            // the outward normal is the direction rotated clockwise.
            let n = Vec2::new(dir.y / len, -dir.x / len);
            (n, n.dot(a))
        })
        .collect()
}

/// Exact Chebyshev inradius of a convex polygon.
///
/// Maximizes `t` subject to `n_i . c + t <= d_i`. Every basic optimum is the
/// solution of three constraints taken with equality, so all triples are
/// tried and checked for feasibility. Ties on `t` are broken toward the
/// lexicographically smallest center so the result is deterministic.
fn chebyshev_inradius(polygon: &Polygon) -> Result<f64> {
    let planes = half_planes(polygon);
    let n = planes.len();
    let scale = polygon.diameter();
    let feas_tol = 1e-9 * scale.max(1.0);

    let mut best: Option<(f64, Vec2)> = None;
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let Some((c, t)) = solve_triple(planes[i], planes[j], planes[k]) else {
                    continue;
                };
                if t <= 0.0 || !c.is_finite() {
                    continue;
                }
                let feasible = planes.iter().all(|&(nv, d)| nv.dot(c) + t <= d + feas_tol);
                if !feasible {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bt, bc)) => {
                        t > bt + 1e-12 * scale
                            || ((t - bt).abs() <= 1e-12 * scale
                                && (c.x, c.y) < (bc.x, bc.y))
                    }
                };
                if better {
                    best = Some((t, c));
                }
            }
        }
    }
    best.map(|(t, _)| t).ok_or_else(|| {
        Error::Numerical("no feasible Chebyshev center found for convex polygon".into())
    })
}

/// Solves `n_a . c + t = d_a` (and the same for b, c) for `(c, t)` by
/// Cramer's rule; `None` when the three normals are degenerate.
fn solve_triple(a: (Vec2, f64), b: (Vec2, f64), c: (Vec2, f64)) -> Option<(Vec2, f64)> {
    let det3 = |m: [[f64; 3]; 3]| -> f64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let m = [
        [a.0.x, a.0.y, 1.0],
        [b.0.x, b.0.y, 1.0],
        [c.0.x, c.0.y, 1.0],
    ];
    let det = det3(m);
    if det.abs() < 1e-12 {
        return None;
    }
    let rhs = [a.1, b.1, c.1];
    let col = |idx: usize| {
        let mut mm = m;
        for (row, &r) in mm.iter_mut().zip(rhs.iter()) {
            row[idx] = r;
        }
        det3(mm) / det
    };
    Some((Vec2::new(col(0), col(1)), col(2)))
}

/// Grid-based inradius: rasterize the boundary ring alone, take the distance
/// transform, and return the largest distance over cells whose centers lie
/// inside the polygon. The true inradius differs from the best cell value by
/// at most one cell diagonal.
fn grid_inradius(polygon: &Polygon) -> Result<(f64, f64)> {
    let diameter = polygon.diameter();
    let resolution = (FALLBACK_CELLS_ACROSS / diameter).max(1.0).ceil();
    let ring = Scene::from_polylines(vec![polygon.to_polyline()])?;
    let grid = rasterize_with(&ring, resolution as u32, &RasterOptions::default())?;
    let field = distance_to_set(&grid)?;
    let meta = grid.meta;
    let mut best = 0.0f64;
    for j in 0..meta.height {
        for i in 0..meta.width {
            let center = meta.center(i, j);
            if polygon.contains_point(center) {
                best = best.max(field.dist_idx(meta.index(i, j)));
            }
        }
    }
    let h = meta.h;
    if best <= 0.0 {
        return Err(Error::Numerical(format!(
            "polygon thinner than one grid cell (h = {h:e}); inradius not resolved",
        )));
    }
    Ok((best, h * core::f64::consts::SQRT_2))
}
