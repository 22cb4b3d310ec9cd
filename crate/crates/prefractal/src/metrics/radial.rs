//! Ball-based constants measured from boundary sample points.
//!
//! Both constants scan balls `B(x, r)` centered at points `x` sampled on the
//! boundary set (polyline vertices and edge midpoints, deduplicated), over a
//! caller-supplied ladder of scales `r`:
//!
//! * **Porosity**: the deepest retreat from the boundary set inside the
//!   ball, `max { dist(p, E) : p in B(x, r) } / r`, minimized over samples.
//!   Evaluated on the distance transform, so the grid must extend at least
//!   `r` beyond the scene bounds in every direction.
//! * **Contained component**: the largest component lying entirely inside
//!   the closed ball, `max { diam V : V subset of B(x, r) } / r`, minimized
//!   over samples (zero when some ball contains no component).
//!
//! Per-row range-maximum tables (porosity) and centroid buckets
//! (containment) only skip work that provably cannot change the result; the
//! tests pin both against naive full scans bit for bit.

use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::ifs::Scene;
use crate::raster::{DistanceField, GridMeta};
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use crate::math::FloatExt;

/// Smallest scale, in grid cells, at which the discrete ball scan is
/// meaningful.
const MIN_SCALE_CELLS: f64 = 8.0;

/// The ball attaining the reported value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialWitness {
    /// Boundary sample at the ball center.
    pub x: Vec2,
    /// Ball radius.
    pub r: f64,
    /// Ratio measured in this ball.
    pub ratio: f64,
}

/// Porosity scan result.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialConstant {
    /// Minimum over sampled balls of the per-ball ratio.
    pub value: f64,
    pub witness: RadialWitness,
    pub scales: Vec<f64>,
    /// Number of distinct boundary samples used.
    pub samples: usize,
}

/// Contained-component scan result.
#[derive(Debug, Clone, PartialEq)]
pub struct ContainmentConstant {
    /// Minimum over sampled balls of `diam(best contained component) / r`.
    pub value: f64,
    pub witness: RadialWitness,
    pub scales: Vec<f64>,
    pub samples: usize,
    /// Fraction of sampled balls containing at least one component.
    pub containment_fraction: f64,
}

/// Boundary sample points: each polyline contributes its vertices and edge
/// midpoints, in order. `spacing` deduplicates points that quantize to the
/// same lattice cell (first occurrence wins); `None` deduplicates exact
/// bit-equal points only.
pub(crate) fn boundary_samples(scene: &Scene, spacing: Option<f64>) -> Vec<Vec2> {
    let key = |p: Vec2| -> (i64, i64) {
        match spacing {
            Some(s) => ((p.x / s).round() as i64, (p.y / s).round() as i64),
            None => (p.x.to_bits() as i64, p.y.to_bits() as i64),
        }
    };
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut push = |p: Vec2, out: &mut Vec<Vec2>| {
        if seen.insert(key(p)) {
            out.push(p);
        }
    };
    for line in &scene.boundary {
        for (a, b) in line.segments() {
            push(a, &mut out);
            push((a + b) * 0.5, &mut out);
        }
        if !line.closed {
            if let Some(&last) = line.points.last() {
                push(last, &mut out);
            }
        }
    }
    out
}

/// Per-row sparse table for range-maximum queries over the squared distance
/// field. Layer `k` stores the max over spans of length `2^(k+1)`.
struct RowMaxTable {
    w: usize,
    layers: Vec<Vec<u32>>,
}

impl RowMaxTable {
    fn build(field: &DistanceField) -> RowMaxTable {
        let w = field.meta.width;
        let hgt = field.meta.height;
        let n = w * hgt;
        let mut layers: Vec<Vec<u32>> = Vec::new();
        let mut k = 1usize;
        while (1usize << k) <= w {
            let half = 1usize << (k - 1);
            let mut cur = vec![0u32; n];
            {
                let prev: &[u32] = if k == 1 { &field.sq } else { &layers[k - 2] };
                for j in 0..hgt {
                    let row = j * w;
                    for i in 0..=(w - (1 << k)) {
                        cur[row + i] = prev[row + i].max(prev[row + i + half]);
                    }
                }
            }
            layers.push(cur);
            k += 1;
        }
        RowMaxTable { w, layers }
    }

    fn query(&self, sq: &[u32], j: usize, i0: usize, i1: usize) -> u32 {
        let len = i1 - i0 + 1;
        let k = (usize::BITS - 1 - len.leading_zeros()) as usize;
        let at = |kk: usize, i: usize| -> u32 {
            if kk == 0 {
                sq[j * self.w + i]
            } else {
                self.layers[kk - 1][j * self.w + i]
            }
        };
        at(k, i0).max(at(k, i1 + 1 - (1usize << k)))
    }
}

/// Canonical cell-in-ball predicate shared by the scan and the test oracles:
/// the cell center is within the closed ball.
#[inline]
fn cell_in_ball(meta: &GridMeta, i: usize, j: usize, x: Vec2, r: f64) -> bool {
    let c = meta.center(i, j);
    let dx = c.x - x.x;
    let dy = c.y - x.y;
    dx * dx + dy * dy <= r * r
}

/// Exact column interval of in-ball cells in row `j`, or `None` when the row
/// has none. A square-root estimate jumps close to the boundary and a few
/// predicate steps make it exact, so the interval is identical to a full
/// row scan.
fn row_ball_range(meta: &GridMeta, x: Vec2, r: f64, j: usize) -> Option<(usize, usize)> {
    let t = (x.x - meta.origin.x) / meta.h;
    let cy = meta.origin.y + j as f64 * meta.h;
    let dy = cy - x.y;
    let rem = r * r - dy * dy;
    let half = if rem > 0.0 { rem.sqrt() / meta.h } else { 0.0 };
    let mut lo = ((t - half).ceil() as i64 - 2).max(0);
    let mut hi = ((t + half).floor() as i64 + 2).min(meta.width as i64 - 1);
    while lo <= hi && !cell_in_ball(meta, lo as usize, j, x, r) {
        lo += 1;
    }
    while hi >= lo && !cell_in_ball(meta, hi as usize, j, x, r) {
        hi -= 1;
    }
    if lo > hi {
        return None;
    }
    while lo > 0 && cell_in_ball(meta, lo as usize - 1, j, x, r) {
        lo -= 1;
    }
    while (hi as usize) + 1 < meta.width && cell_in_ball(meta, hi as usize + 1, j, x, r) {
        hi += 1;
    }
    Some((lo as usize, hi as usize))
}

/// Largest squared cell distance over the ball `B(x, r)`.
fn ball_max_sq(field: &DistanceField, table: &RowMaxTable, x: Vec2, r: f64) -> u32 {
    let meta = &field.meta;
    let tj = (x.y - meta.origin.y) / meta.h;
    let span = r / meta.h;
    let j_lo = ((tj - span).ceil() as i64 - 2).max(0);
    let j_hi = ((tj + span).floor() as i64 + 2).min(meta.height as i64 - 1);
    let mut best = 0u32;
    let mut j = j_lo;
    while j <= j_hi {
        if let Some((i0, i1)) = row_ball_range(meta, x, r, j as usize) {
            best = best.max(table.query(&field.sq, j as usize, i0, i1));
        }
        j += 1;
    }
    best
}

fn validate_scales(scales: &[f64], min_r: f64, max_r: f64) -> Result<()> {
    if scales.is_empty() {
        return Err(Error::Domain("scale ladder is empty".into()));
    }
    for &r in scales {
        if !r.is_finite() || r < min_r || r > max_r {
            return Err(Error::Domain(format!(
                "scale {r} outside the usable range [{min_r}, {max_r}]",
            )));
        }
    }
    Ok(())
}

/// Porosity constant of the scene on a precomputed distance field.
///
/// Scales must lie in `[8h, diam(bounds)]` and the grid must extend at
/// least `max(scales)` beyond the scene bounds (rasterize with a larger
/// `pad_cells` if not). The per-ball ratio is clamped to 1: in the
/// continuum it cannot exceed 1 because the center lies on the boundary
/// set, so any excess is grid noise of order `h / r`.
pub fn porosity_constant(
    scene: &Scene,
    field: &DistanceField,
    scales: &[f64],
) -> Result<RadialConstant> {
    let meta = &field.meta;
    let diam = scene.bounds.diameter();
    validate_scales(scales, MIN_SCALE_CELLS * meta.h, diam)?;

    let r_max = scales.iter().fold(0.0f64, |a, &b| a.max(b));
    let ext_max_x = meta.origin.x + (meta.width - 1) as f64 * meta.h;
    let ext_max_y = meta.origin.y + (meta.height - 1) as f64 * meta.h;
    let slack = 1e-9 * meta.h;
    if meta.origin.x > scene.bounds.min.x - r_max + slack
        || meta.origin.y > scene.bounds.min.y - r_max + slack
        || ext_max_x < scene.bounds.max.x + r_max - slack
        || ext_max_y < scene.bounds.max.y + r_max - slack
    {
        let need = (r_max / meta.h).ceil() as u64 + 2;
        return Err(Error::Domain(format!(
            "grid does not cover radius {r_max} around the scene; \
             rasterize with pad_cells >= {need}",
        )));
    }

    let samples = boundary_samples(scene, Some(meta.h * 0.5));
    if samples.is_empty() {
        return Err(Error::Domain("scene has no boundary to sample".into()));
    }

    let table = RowMaxTable::build(field);
    let mut best: Option<RadialWitness> = None;
    for &x in &samples {
        for &r in scales {
            let max_sq = ball_max_sq(field, &table, x, r);
            let ratio = ((max_sq as f64).sqrt() * meta.h / r).min(1.0);
            if best.map_or(true, |b| ratio < b.ratio) {
                best = Some(RadialWitness { x, r, ratio });
            }
        }
    }
    let witness = best.expect("samples checked non-empty");
    Ok(RadialConstant {
        value: witness.ratio,
        witness,
        scales: scales.to_vec(),
        samples: samples.len(),
    })
}

/// Contained-component constant of the scene.
///
/// A component counts as contained in `B(x, r)` when every vertex is within
/// `r` of `x` (closed ball). Scales must be positive and at most the scene
/// diameter.
pub fn component_in_ball_constant(scene: &Scene, scales: &[f64]) -> Result<ContainmentConstant> {
    if scene.components.is_empty() {
        return Err(Error::Domain(
            "containment constant needs at least one component".into(),
        ));
    }
    let diam = scene.bounds.diameter();
    validate_scales(scales, f64::MIN_POSITIVE, diam)?;
    let samples = boundary_samples(scene, None);
    if samples.is_empty() {
        return Err(Error::Domain("scene has no boundary to sample".into()));
    }

    let centroids: Vec<Vec2> = scene.components.iter().map(|c| c.polygon.centroid()).collect();
    let diams: Vec<f64> = scene.components.iter().map(|c| c.polygon.diameter()).collect();

    // Per-scale buckets of component indices keyed by floor(centroid / r).
    // A component contained in B(x, r) has its centroid within r of x, so
    // its key differs from x's key by at most 2 per axis.
    let bucket_key = |p: Vec2, r: f64| ((p.x / r).floor() as i64, (p.y / r).floor() as i64);
    let buckets: Vec<BTreeMap<(i64, i64), Vec<u32>>> = scales
        .iter()
        .map(|&r| {
            let mut m: BTreeMap<(i64, i64), Vec<u32>> = BTreeMap::new();
            for (ci, &c) in centroids.iter().enumerate() {
                m.entry(bucket_key(c, r)).or_default().push(ci as u32);
            }
            m
        })
        .collect();

    let mut best: Option<RadialWitness> = None;
    let mut contained_balls = 0usize;
    for &x in &samples {
        for (si, &r) in scales.iter().enumerate() {
            let (kx, ky) = bucket_key(x, r);
            let mut best_diam = 0.0f64;
            for bx in (kx - 2)..=(kx + 2) {
                for by in (ky - 2)..=(ky + 2) {
                    let Some(cands) = buckets[si].get(&(bx, by)) else {
                        continue;
                    };
                    for &ci in cands {
                        let poly = &scene.components[ci as usize].polygon;
                        let contained =
                            poly.verts().iter().all(|&v| {
                                let dx = v.x - x.x;
                                let dy = v.y - x.y;
                                dx * dx + dy * dy <= r * r
                            });
                        if contained {
                            best_diam = best_diam.max(diams[ci as usize]);
                        }
                    }
                }
            }
            if best_diam > 0.0 {
                contained_balls += 1;
            }
            let ratio = best_diam / r;
            if best.map_or(true, |b| ratio < b.ratio) {
                best = Some(RadialWitness { x, r, ratio });
            }
        }
    }
    let witness = best.expect("samples checked non-empty");
    Ok(ContainmentConstant {
        value: witness.ratio,
        witness,
        scales: scales.to_vec(),
        samples: samples.len(),
        containment_fraction: contained_balls as f64 / (samples.len() * scales.len()) as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Polyline;
    use crate::ifs::{build_preset, generate_scene};
    use crate::raster::{distance_to_set, rasterize_with, RasterOptions};

    fn carpet(depth: u32) -> Scene {
        let ifs = build_preset("sierpinski-carpet").unwrap();
        generate_scene(&ifs, depth).unwrap()
    }

    fn padded(scene: &Scene, resolution: u32, r_max: f64) -> (crate::raster::Grid, DistanceField) {
        let pad = (r_max * resolution as f64).ceil() as usize + 2;
        let opts = RasterOptions { pad_cells: pad, ..RasterOptions::default() };
        let grid = rasterize_with(scene, resolution, &opts).unwrap();
        let field = distance_to_set(&grid).unwrap();
        (grid, field)
    }

    /// Full-grid reference for the ball max: every cell tested against the
    /// same predicate.
    fn naive_ball_max_sq(field: &DistanceField, x: Vec2, r: f64) -> u32 {
        let meta = &field.meta;
        let mut best = 0u32;
        for j in 0..meta.height {
            for i in 0..meta.width {
                if cell_in_ball(meta, i, j, x, r) {
                    best = best.max(field.sq[meta.index(i, j)]);
                }
            }
        }
        best
    }

    fn naive_porosity(scene: &Scene, field: &DistanceField, scales: &[f64]) -> RadialConstant {
        let samples = boundary_samples(scene, Some(field.meta.h * 0.5));
        let mut best: Option<RadialWitness> = None;
        for &x in &samples {
            for &r in scales {
                let max_sq = naive_ball_max_sq(field, x, r);
                let ratio = ((max_sq as f64).sqrt() * field.meta.h / r).min(1.0);
                if best.map_or(true, |b| ratio < b.ratio) {
                    best = Some(RadialWitness { x, r, ratio });
                }
            }
        }
        let witness = best.unwrap();
        RadialConstant {
            value: witness.ratio,
            witness,
            scales: scales.to_vec(),
            samples: samples.len(),
        }
    }

    fn naive_containment(scene: &Scene, scales: &[f64]) -> ContainmentConstant {
        let samples = boundary_samples(scene, None);
        let mut best: Option<RadialWitness> = None;
        let mut contained_balls = 0usize;
        for &x in &samples {
            for &r in scales {
                let mut best_diam = 0.0f64;
                for c in &scene.components {
                    let inside = c.polygon.verts().iter().all(|&v| {
                        let dx = v.x - x.x;
                        let dy = v.y - x.y;
                        dx * dx + dy * dy <= r * r
                    });
                    if inside {
                        best_diam = best_diam.max(c.polygon.diameter());
                    }
                }
                if best_diam > 0.0 {
                    contained_balls += 1;
                }
                let ratio = best_diam / r;
                if best.map_or(true, |b| ratio < b.ratio) {
                    best = Some(RadialWitness { x, r, ratio });
                }
            }
        }
        let witness = best.unwrap();
        ContainmentConstant {
            value: witness.ratio,
            witness,
            scales: scales.to_vec(),
            samples: samples.len(),
            containment_fraction: contained_balls as f64
                / (samples.len() * scales.len()) as f64,
        }
    }

    #[test]
    fn porosity_of_bare_segment_is_near_one() {
        // Around any point of a bare segment, half of every ball is empty
        // space; the deepest retreat reaches the ball radius itself.
        let scene = Scene::from_polylines(vec![Polyline {
            points: vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0)],
            closed: false,
        }])
        .unwrap();
        let (_, field) = padded(&scene, 64, 0.25);
        let rep = porosity_constant(&scene, &field, &[0.25]).unwrap();
        assert!(rep.value > 0.85, "value {}", rep.value);
        assert!(rep.value <= 1.0);
    }

    #[test]
    fn porosity_matches_naive_scan_bitwise() {
        let scene = carpet(2);
        let scales = [1.0 / 3.0, 1.0 / 9.0];
        let (_, field) = padded(&scene, 81, 1.0 / 3.0);
        let fast = porosity_constant(&scene, &field, &scales).unwrap();
        let slow = naive_porosity(&scene, &field, &scales);
        assert_eq!(fast.value.to_bits(), slow.value.to_bits());
        assert_eq!(fast.witness.x, slow.witness.x);
        assert_eq!(fast.witness.r.to_bits(), slow.witness.r.to_bits());
        assert_eq!(fast.samples, slow.samples);
        assert!(fast.value > 0.0 && fast.value <= 1.0, "value {}", fast.value);
    }

    #[test]
    fn porosity_rejects_out_of_range_scales() {
        let scene = carpet(1);
        let (_, field) = padded(&scene, 81, 1.0 / 3.0);
        // Below 8 cells.
        let err = porosity_constant(&scene, &field, &[1.0 / 81.0]).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        // Above the scene diameter.
        let err = porosity_constant(&scene, &field, &[10.0]).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        // Empty ladder.
        let err = porosity_constant(&scene, &field, &[]).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn porosity_rejects_insufficient_padding() {
        let scene = carpet(1);
        // Default 2-cell padding cannot host a radius-1/3 ball.
        let grid = rasterize_with(&scene, 81, &RasterOptions::default()).unwrap();
        let field = distance_to_set(&grid).unwrap();
        let err = porosity_constant(&scene, &field, &[1.0 / 3.0]).unwrap_err();
        match err {
            Error::Domain(msg) => assert!(msg.contains("pad_cells"), "message: {msg}"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn containment_is_zero_at_coarse_depth() {
        // At depth 2 no radius-1/9 ball contains a whole hole (even a
        // generation-2 hole needs radius side * sqrt(5)/2 from its best
        // boundary point), while radius-1/3 balls do reach generation-2
        // holes; the min over scales is therefore 0 but some balls contain.
        let rep = component_in_ball_constant(&carpet(2), &[1.0 / 9.0, 1.0 / 3.0]).unwrap();
        assert_eq!(rep.value, 0.0);
        assert!(
            rep.containment_fraction > 0.0 && rep.containment_fraction < 1.0,
            "fraction {}",
            rep.containment_fraction
        );
    }

    #[test]
    fn containment_at_depth_three_reaches_a_middle_hole() {
        // Every radius-1/3 ball centered on the depth-3 boundary contains a
        // generation-2 hole (diameter sqrt(2)/9) and nothing larger fits at
        // the worst centers, so the value is sqrt(2)/3.
        let rep = component_in_ball_constant(&carpet(3), &[1.0 / 3.0]).unwrap();
        assert!(
            (rep.value - core::f64::consts::SQRT_2 / 3.0).abs() < 1e-9,
            "value {}",
            rep.value
        );
        assert!(rep.value <= 1.0);
    }

    #[test]
    fn containment_matches_naive_scan_bitwise() {
        for depth in [2, 3] {
            let scene = carpet(depth);
            let scales = [1.0 / 3.0, 1.0 / 9.0];
            let fast = component_in_ball_constant(&scene, &scales).unwrap();
            let slow = naive_containment(&scene, &scales);
            assert_eq!(fast.value.to_bits(), slow.value.to_bits(), "depth {depth}");
            assert_eq!(fast.witness.x, slow.witness.x, "depth {depth}");
            assert_eq!(
                fast.containment_fraction.to_bits(),
                slow.containment_fraction.to_bits(),
                "depth {depth}"
            );
        }
    }

    #[test]
    fn containment_is_scale_invariant() {
        let scene = carpet(2);
        let lam = 7.5;
        let scaled = scene
            .transform(&crate::geom::Similarity {
                scale: lam,
                rotation: core::f64::consts::PI / 5.0,
                reflect: false,
                translation: Vec2::new(3.0, -2.0),
            })
            .unwrap();
        let base = component_in_ball_constant(&scene, &[1.0 / 3.0, 1.0 / 9.0]).unwrap();
        let moved =
            component_in_ball_constant(&scaled, &[lam / 3.0, lam / 9.0]).unwrap();
        assert!((base.value - moved.value).abs() < 1e-9);
        assert!(
            (base.containment_fraction - moved.containment_fraction).abs() < 1e-12
        );
    }

    #[test]
    fn containment_rejects_bad_scales() {
        let scene = carpet(1);
        assert!(matches!(
            component_in_ball_constant(&scene, &[0.0]).unwrap_err(),
            Error::Domain(_)
        ));
        assert!(matches!(
            component_in_ball_constant(&scene, &[f64::NAN]).unwrap_err(),
            Error::Domain(_)
        ));
        let empty = Scene::from_polylines(vec![Polyline {
            points: vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0)],
            closed: false,
        }])
        .unwrap();
        assert!(matches!(
            component_in_ball_constant(&empty, &[0.5]).unwrap_err(),
            Error::Domain(_)
        ));
    }

    #[test]
    fn sample_dedup_is_deterministic() {
        let scene = carpet(2);
        let a = boundary_samples(&scene, Some(0.001));
        let b = boundary_samples(&scene, Some(0.001));
        assert_eq!(a, b);
        // Exact dedup keeps at least as many points as lattice dedup.
        let exact = boundary_samples(&scene, None);
        assert!(exact.len() >= a.len());
    }
}
