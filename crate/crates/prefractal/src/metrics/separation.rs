//! Worst-case separation ratio between component pairs.
//!
//! For disjoint components the quantity `min(diam V, diam W) / dist(V, W)`
//! is scale invariant; its supremum over all pairs is the separation
//! constant of the scene. Components whose boundaries touch (distance below
//! the touch threshold) make the supremum infinite, reported as
//! [`SeparationValue::Unbounded`].
//!
//! The pair scan prunes with bounding-box gaps, but only when the skip can
//! change neither the maximum ratio, nor the witness pair, nor the minimum
//! gap; the result is therefore identical to the brute-force double loop,
//! which the tests check bit for bit.

use crate::error::{Error, Result};
use crate::geom::{seg_seg_dist, Aabb, Polygon, Vec2, TOUCH_EPS};
use crate::ifs::Scene;
use alloc::vec::Vec;

/// Separation constant: finite, or infinite because two components touch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeparationValue {
    /// Supremum of `min(diam V, diam W) / dist(V, W)` over pairs.
    Bounded(f64),
    /// Some pair is at distance below the touch threshold.
    Unbounded,
}

/// Result of the pair scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationReport {
    pub value: SeparationValue,
    /// Component ids of the pair attaining the value (first such pair in id
    /// order on ties).
    pub witness: (usize, usize),
    /// Distance between the witness components.
    pub witness_dist: f64,
    /// Closest point pair realizing `witness_dist`.
    pub witness_points: (Vec2, Vec2),
    /// Smallest pairwise distance over all component pairs.
    pub min_gap: f64,
}

/// Exact distance between two polygon boundaries (minimum over edge pairs).
///
/// Distance between the closed regions equals boundary distance for
/// disjoint polygons; carved components never nest, so this is the right
/// quantity.
pub fn polygon_dist(a: &Polygon, b: &Polygon) -> f64 {
    let mut best = f64::INFINITY;
    for (a0, a1) in a.edges() {
        for (b0, b1) in b.edges() {
            best = best.min(seg_seg_dist(a0, a1, b0, b1));
            if best == 0.0 {
                return 0.0;
            }
        }
    }
    best
}

/// Closest point pair between two polygon boundaries.
fn polygon_closest_points(a: &Polygon, b: &Polygon) -> (Vec2, Vec2) {
    let mut best = f64::INFINITY;
    let mut pts = (a.verts()[0], b.verts()[0]);
    for (a0, a1) in a.edges() {
        for (b0, b1) in b.edges() {
            // Candidate pairs: each endpoint against the other segment.
            for (p, (s0, s1), flip) in [
                (a0, (b0, b1), false),
                (a1, (b0, b1), false),
                (b0, (a0, a1), true),
                (b1, (a0, a1), true),
            ] {
                let q = crate::geom::seg_closest_point(s0, s1, p);
                let d = p.dist(q);
                if d < best {
                    best = d;
                    pts = if flip { (q, p) } else { (p, q) };
                }
            }
        }
    }
    pts
}

/// Scans all component pairs for the separation constant.
///
/// Needs at least two components. The witness is deterministic: the first
/// pair in id order attaining the maximum (or, when unbounded, the first
/// touching pair).
pub fn separation_constant(scene: &Scene) -> Result<SeparationReport> {
    let comps = &scene.components;
    if comps.len() < 2 {
        return Err(Error::Domain(
            "separation constant needs at least two components".into(),
        ));
    }

    let diams: Vec<f64> = comps.iter().map(|c| c.polygon.diameter()).collect();
    let boxes: Vec<Aabb> = comps.iter().map(|c| c.polygon.aabb()).collect();

    let mut best_ratio = f64::NEG_INFINITY;
    let mut witness = (0usize, 1usize);
    let mut witness_dist = f64::INFINITY;
    let mut min_gap = f64::INFINITY;
    let mut unbounded = false;

    for i in 0..comps.len() {
        for j in (i + 1)..comps.len() {
            let min_diam = diams[i].min(diams[j]);
            let gap_lb = boxes[i].gap_to(&boxes[j]);
            // Skip only when the box gap already proves this pair can move
            // none of the outputs: its ratio upper bound does not beat the
            // current maximum and its distance cannot undercut min_gap.
            let ratio_ub = if gap_lb > 0.0 {
                min_diam / gap_lb
            } else {
                f64::INFINITY
            };
            let ratio_moot = unbounded || ratio_ub <= best_ratio;
            if ratio_moot && gap_lb >= min_gap {
                continue;
            }

            let d = polygon_dist(&comps[i].polygon, &comps[j].polygon);
            min_gap = min_gap.min(d);
            if d <= TOUCH_EPS {
                if !unbounded {
                    unbounded = true;
                    witness = (comps[i].id, comps[j].id);
                    witness_dist = d;
                }
                continue;
            }
            if unbounded {
                continue;
            }
            let ratio = min_diam / d;
            if ratio > best_ratio {
                best_ratio = ratio;
                witness = (comps[i].id, comps[j].id);
                witness_dist = d;
            }
        }
    }

    let (wi, wj) = witness;
    let pa = comps.iter().find(|c| c.id == wi).expect("witness id");
    let pb = comps.iter().find(|c| c.id == wj).expect("witness id");
    let witness_points = polygon_closest_points(&pa.polygon, &pb.polygon);

    Ok(SeparationReport {
        value: if unbounded {
            SeparationValue::Unbounded
        } else {
            SeparationValue::Bounded(best_ratio)
        },
        witness,
        witness_dist,
        witness_points,
        min_gap,
    })
}
