//! Grouping of components by shape up to similarity.
//!
//! Two polygons are similar when one maps onto the other under translation,
//! rotation, uniform scaling, and optionally reflection. Each polygon is
//! normalized to a canonical form (centroid at the origin, diameter 1, first
//! edge along the +x axis, minimized over reflection and starting edge), and
//! components whose forms agree vertex-by-vertex within a tolerance share a
//! class. Matching tries every alignment of one polygon against the other's
//! canonical form, so near-symmetric shapes cannot fall out of a class just
//! because their canonical minimizers differ.

use crate::error::{Error, Result};
use crate::geom::{Polygon, Vec2};
use crate::ifs::Scene;
use alloc::vec::Vec;

/// Partition of the scene's components into similarity classes.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityClasses {
    /// Class index per component, in `scene.components` order.
    pub class_of: Vec<u32>,
    /// Component id of the first member of each class.
    pub representatives: Vec<usize>,
    pub tolerance: f64,
}

impl SimilarityClasses {
    pub fn count(&self) -> usize {
        self.representatives.len()
    }
}

/// All normalized alignments of the polygon: centroid at the origin,
/// diameter 1, each cyclic start rotated so its first edge runs along +x,
/// with and without reflection.
fn alignments(poly: &Polygon) -> Vec<Vec<Vec2>> {
    let c = poly.centroid();
    let scale = 1.0 / poly.diameter();
    let base: Vec<Vec2> = poly.verts().iter().map(|&v| (v - c) * scale).collect();
    let mut variants: Vec<Vec<Vec2>> = Vec::with_capacity(2);
    variants.push(base.clone());
    // Reflection flips orientation; reversing restores counterclockwise
    // order so starting edges remain comparable.
    let mut mirrored: Vec<Vec2> = base.iter().map(|v| Vec2::new(v.x, -v.y)).collect();
    mirrored.reverse();
    variants.push(mirrored);

    let n = base.len();
    let mut out = Vec::with_capacity(2 * n);
    for pts in &variants {
        for start in 0..n {
            let a = pts[start];
            let b = pts[(start + 1) % n];
            let dir = b - a;
            let len = dir.norm();
            let (cos, sin) = (dir.x / len, dir.y / len);
            let rotated: Vec<Vec2> = (0..n)
                .map(|i| {
                    let p = pts[(start + i) % n];
                    Vec2::new(p.x * cos + p.y * sin, -p.x * sin + p.y * cos)
                })
                .collect();
            out.push(rotated);
        }
    }
    out
}

fn lex_less(a: &[Vec2], b: &[Vec2]) -> bool {
    for (p, q) in a.iter().zip(b) {
        match p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y)) {
            core::cmp::Ordering::Less => return true,
            core::cmp::Ordering::Greater => return false,
            core::cmp::Ordering::Equal => {}
        }
    }
    false
}

/// Lexicographically smallest alignment; a similarity-invariant fingerprint.
fn canonical_form(poly: &Polygon) -> Vec<Vec2> {
    let mut all = alignments(poly);
    let mut best = all.pop().expect("polygon has vertices");
    for cand in all {
        if lex_less(&cand, &best) {
            best = cand;
        }
    }
    best
}

fn matches(canon: &[Vec2], poly: &Polygon, tolerance: f64) -> bool {
    if canon.len() != poly.verts().len() {
        return false;
    }
    alignments(poly).iter().any(|cand| {
        cand.iter()
            .zip(canon)
            .all(|(p, q)| p.dist(*q) < tolerance)
    })
}

/// Groups components into similarity classes with the given vertex-distance
/// tolerance on normalized forms.
///
/// Classes are numbered by first appearance in component id order, so the
/// partition is deterministic.
pub fn similarity_classes(scene: &Scene, tolerance: f64) -> Result<SimilarityClasses> {
    if !(tolerance > 0.0 && tolerance.is_finite()) {
        return Err(Error::Domain("tolerance must be positive and finite".into()));
    }
    let mut class_of = Vec::with_capacity(scene.components.len());
    let mut representatives: Vec<usize> = Vec::new();
    let mut canons: Vec<Vec<Vec2>> = Vec::new();
    for comp in &scene.components {
        let found = canons
            .iter()
            .position(|canon| matches(canon, &comp.polygon, tolerance));
        match found {
            Some(k) => class_of.push(k as u32),
            None => {
                class_of.push(canons.len() as u32);
                canons.push(canonical_form(&comp.polygon));
                representatives.push(comp.id);
            }
        }
    }
    Ok(SimilarityClasses { class_of, representatives, tolerance })
}
