//! Grid discretization of a scene: occupancy, complement labeling, and an
//! exact Euclidean distance transform.
//!
//! Cell (i, j) is the closed square of side h centered at
//! `origin + (i*h, j*h)`; centers sit on an h-lattice anchored two padding
//! cells below the scene bounds.  A cell is occupied when a boundary segment
//! intersects its closed square (a conservative supercover, so every segment
//! produces a 4-connected chain and the complement cannot leak diagonally
//! through E), or when its center lies in the not-yet-carved body, the seed
//! region minus all component interiors.  Filling the body makes the occupied
//! set the depth-d stand-in for E, so complement labels are exactly the
//! carved components plus the unbounded outside.
//!
//! The distance transform works on integer squared cell offsets and only
//! scales by h at the very end, so it is bit-for-bit equal to the brute-force
//! definition.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geom::{seg_intersects_rect, Polygon, Vec2};
use crate::ifs::Scene;
#[cfg(not(feature = "std"))]
use crate::math::FloatExt;

/// Label value stored for occupied cells.
pub const LABEL_NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMeta {
    /// Center of cell (0, 0).
    pub origin: Vec2,
    /// Cell side length, `1 / resolution`.
    pub h: f64,
    pub width: usize,
    pub height: usize,
    pub resolution: u32,
}

impl GridMeta {
    pub fn cells(&self) -> usize {
        self.width * self.height
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.width + i
    }

    pub fn center(&self, i: usize, j: usize) -> Vec2 {
        Vec2::new(self.origin.x + i as f64 * self.h, self.origin.y + j as f64 * self.h)
    }

    /// Cell whose closed square contains `p` (nearest center), or None when
    /// `p` is outside the grid.
    pub fn cell_of(&self, p: Vec2) -> Option<(usize, usize)> {
        let fi = ((p.x - self.origin.x) / self.h).round();
        let fj = ((p.y - self.origin.y) / self.h).round();
        if fi < 0.0 || fj < 0.0 || fi >= self.width as f64 || fj >= self.height as f64 {
            return None;
        }
        Some((fi as usize, fj as usize))
    }
}

#[derive(Debug, Clone)]
struct BitGrid {
    words: Vec<u64>,
}

impl BitGrid {
    fn new(len: usize) -> BitGrid {
        BitGrid { words: vec![0; len.div_ceil(64)] }
    }

    #[inline]
    fn get(&self, idx: usize) -> bool {
        (self.words[idx / 64] >> (idx % 64)) & 1 == 1
    }

    #[inline]
    fn set(&mut self, idx: usize) {
        self.words[idx / 64] |= 1 << (idx % 64);
    }

    fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Occupancy grid produced by [`rasterize`].
#[derive(Debug, Clone)]
pub struct Grid {
    pub meta: GridMeta,
    bits: BitGrid,
}

impl Grid {
    /// Build a grid from an explicit row-major occupancy mask, for callers
    /// that bring their own cell set instead of rasterizing a scene.
    pub fn from_occupancy(meta: GridMeta, occupied: &[bool]) -> Result<Grid> {
        if meta.width == 0 || meta.height == 0 || !meta.h.is_finite() || meta.h <= 0.0 {
            return Err(Error::Config("grid needs positive width, height, and cell size".into()));
        }
        if occupied.len() != meta.cells() {
            return Err(Error::Config(format!(
                "occupancy mask has {} entries, grid has {} cells",
                occupied.len(),
                meta.cells()
            )));
        }
        let mut bits = BitGrid::new(occupied.len());
        for (idx, &occ) in occupied.iter().enumerate() {
            if occ {
                bits.set(idx);
            }
        }
        Ok(Grid { meta, bits })
    }

    pub fn occupied(&self, i: usize, j: usize) -> bool {
        self.bits.get(self.meta.index(i, j))
    }

    pub fn occupied_idx(&self, idx: usize) -> bool {
        self.bits.get(idx)
    }

    pub fn occupied_count(&self) -> usize {
        self.bits.count_ones()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RasterOptions {
    /// Padding ring thickness in cells; at least 2.
    pub pad_cells: usize,
    /// Cap on width * height.
    pub max_cells: u64,
}

impl Default for RasterOptions {
    fn default() -> Self {
        RasterOptions { pad_cells: 2, max_cells: 8192 * 8192 }
    }
}

pub fn rasterize(scene: &Scene, resolution: u32) -> Result<Grid> {
    rasterize_with(scene, resolution, &RasterOptions::default())
}

pub fn rasterize_with(scene: &Scene, resolution: u32, options: &RasterOptions) -> Result<Grid> {
    if resolution < 1 {
        return Err(Error::Bounds("resolution must be at least 1".into()));
    }
    let pad = options.pad_cells.max(2);
    let h = 1.0 / resolution as f64;
    let bounds = scene.bounds;
    let origin = Vec2::new(bounds.min.x - pad as f64 * h, bounds.min.y - pad as f64 * h);
    let span_cells = |extent: f64| -> usize {
        // Smallest count such that origin + (count-1)*h covers the far side
        // plus the padding.
        ((extent / h - 1e-9).ceil().max(0.0) as usize) + 2 * pad + 1
    };
    let width = span_cells(bounds.width());
    let height = span_cells(bounds.height());
    let total = width as u64 * height as u64;
    if total > options.max_cells {
        return Err(Error::Resource(format!(
            "grid of {width} x {height} = {total} cells exceeds the cap of {} \
             (roughly {} MiB of labels)",
            options.max_cells,
            total * 4 / (1024 * 1024),
        )));
    }
    let meta = GridMeta { origin, h, width, height, resolution };
    let mut bits = BitGrid::new(meta.cells());

    for polyline in &scene.boundary {
        for (a, b) in polyline.segments() {
            mark_segment(&meta, &mut bits, a, b);
        }
    }

    if let Some(seed) = &scene.seed {
        let mut inside_seed = BitGrid::new(meta.cells());
        fill_polygon(&meta, seed, &mut inside_seed);
        let mut inside_holes = BitGrid::new(meta.cells());
        for c in &scene.components {
            fill_polygon(&meta, &c.polygon, &mut inside_holes);
        }
        for (w, (s, h)) in bits
            .words
            .iter_mut()
            .zip(inside_seed.words.iter().zip(&inside_holes.words))
        {
            *w |= s & !h;
        }
    }

    Ok(Grid { meta, bits })
}

/// Marks every cell whose closed square intersects segment [a, b].
fn mark_segment(meta: &GridMeta, bits: &mut BitGrid, a: Vec2, b: Vec2) {
    let half = meta.h * 0.5;
    let to_i = |x: f64, lo: bool| -> i64 {
        let f = (x - meta.origin.x) / meta.h;
        if lo { (f - 0.5).floor() as i64 - 1 } else { (f + 0.5).ceil() as i64 + 1 }
    };
    let to_j = |y: f64, lo: bool| -> i64 {
        let f = (y - meta.origin.y) / meta.h;
        if lo { (f - 0.5).floor() as i64 - 1 } else { (f + 0.5).ceil() as i64 + 1 }
    };
    let i0 = to_i(a.x.min(b.x), true).max(0) as usize;
    let i1 = (to_i(a.x.max(b.x), false).max(0) as usize).min(meta.width.saturating_sub(1));
    let j0 = to_j(a.y.min(b.y), true).max(0) as usize;
    let j1 = (to_j(a.y.max(b.y), false).max(0) as usize).min(meta.height.saturating_sub(1));
    for j in j0..=j1 {
        for i in i0..=i1 {
            let c = meta.center(i, j);
            let lo = Vec2::new(c.x - half, c.y - half);
            let hi = Vec2::new(c.x + half, c.y + half);
            if seg_intersects_rect(a, b, lo, hi) {
                bits.set(meta.index(i, j));
            }
        }
    }
}

/// Marks every cell whose center is strictly inside the polygon (cells whose
/// center falls exactly on the boundary are already occupied by the segment
/// supercover, so the tie direction is immaterial).
fn fill_polygon(meta: &GridMeta, poly: &Polygon, bits: &mut BitGrid) {
    let bb = poly.aabb();
    let j_lo = (((bb.min.y - meta.origin.y) / meta.h).floor().max(0.0)) as usize;
    let j_hi = ((((bb.max.y - meta.origin.y) / meta.h).ceil()) as usize).min(meta.height.saturating_sub(1));
    let mut xs: Vec<f64> = Vec::with_capacity(8);
    for j in j_lo..=j_hi {
        let y = meta.origin.y + j as f64 * meta.h;
        xs.clear();
        for (a, b) in poly.edges() {
            if (a.y > y) != (b.y > y) {
                let t = (y - a.y) / (b.y - a.y);
                xs.push(a.x + t * (b.x - a.x));
            }
        }
        if xs.is_empty() {
            continue;
        }
        xs.sort_by(|p, q| p.partial_cmp(q).expect("finite crossing"));
        for pair in xs.chunks_exact(2) {
            let (x0, x1) = (pair[0], pair[1]);
            let mut i = (((x0 - meta.origin.x) / meta.h).floor() as i64).max(0) as usize;
            while i < meta.width {
                let cx = meta.origin.x + i as f64 * meta.h;
                if cx > x1 {
                    break;
                }
                if cx > x0 {
                    bits.set(meta.index(i, j));
                }
                i += 1;
            }
        }
    }
}

/// Complement labeling: 4-connected components of the non-occupied cells,
/// renumbered 0..K-1 in row-major first-appearance order.
#[derive(Debug, Clone)]
pub struct LabeledGrid {
    pub meta: GridMeta,
    /// Per cell: component label, or [`LABEL_NONE`] for occupied cells.
    pub labels: Vec<u32>,
    pub label_count: u32,
    /// Label of the padding ring.
    pub unbounded_label: u32,
    cells_per_label: Vec<Vec<u32>>,
}

impl LabeledGrid {
    pub fn cells_of(&self, label: u32) -> &[u32] {
        &self.cells_per_label[label as usize]
    }

    /// Label of the complement component containing `w`.
    pub fn component_of_point(&self, w: Vec2) -> Result<u32> {
        let (i, j) = self.meta.cell_of(w).ok_or_else(|| {
            Error::Domain(format!("point ({}, {}) lies outside the grid", w.x, w.y))
        })?;
        let label = self.labels[self.meta.index(i, j)];
        if label == LABEL_NONE {
            return Err(Error::Domain(format!(
                "point ({}, {}) is on E or closer than one cell to it at resolution {}",
                w.x, w.y, self.meta.resolution
            )));
        }
        Ok(label)
    }
}

struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n as u32).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (hi, lo) = if self.rank[ra as usize] >= self.rank[rb as usize] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[lo as usize] = hi;
        if self.rank[hi as usize] == self.rank[lo as usize] {
            self.rank[hi as usize] += 1;
        }
    }
}

pub fn label_complement(grid: &Grid) -> LabeledGrid {
    let meta = grid.meta;
    let n = meta.cells();
    let mut uf = UnionFind::new(n);
    for j in 0..meta.height {
        for i in 0..meta.width {
            let idx = meta.index(i, j);
            if grid.occupied_idx(idx) {
                continue;
            }
            if i > 0 && !grid.occupied_idx(idx - 1) {
                uf.union(idx as u32, (idx - 1) as u32);
            }
            if j > 0 && !grid.occupied_idx(idx - meta.width) {
                uf.union(idx as u32, (idx - meta.width) as u32);
            }
        }
    }
    let mut labels = vec![LABEL_NONE; n];
    let mut root_label = vec![LABEL_NONE; n];
    let mut cells_per_label: Vec<Vec<u32>> = Vec::new();
    for idx in 0..n {
        if grid.occupied_idx(idx) {
            continue;
        }
        let root = uf.find(idx as u32) as usize;
        let label = if root_label[root] == LABEL_NONE {
            let l = cells_per_label.len() as u32;
            root_label[root] = l;
            cells_per_label.push(Vec::new());
            l
        } else {
            root_label[root]
        };
        labels[idx] = label;
        cells_per_label[label as usize].push(idx as u32);
    }
    // The padding ring is non-occupied by construction; its label is the
    // unbounded component.  An all-occupied grid cannot occur because padding
    // is at least two cells.
    debug_assert!(!grid.occupied_idx(0));
    let unbounded_label = labels[0];
    LabeledGrid {
        meta,
        labels,
        label_count: cells_per_label.len() as u32,
        unbounded_label,
        cells_per_label,
    }
}

/// Exact Euclidean distance transform to the occupied set.
///
/// `sq` holds squared distances in integer cell units; [`DistanceField::dist`]
/// scales by h.  Occupied cells hold zero.
#[derive(Debug, Clone)]
pub struct DistanceField {
    pub meta: GridMeta,
    pub sq: Vec<u32>,
}

impl DistanceField {
    pub fn dist_idx(&self, idx: usize) -> f64 {
        (self.sq[idx] as f64).sqrt() * self.meta.h
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist_idx(self.meta.index(i, j))
    }
}

const COL_INF: u32 = u32::MAX;

pub fn distance_to_set(grid: &Grid) -> Result<DistanceField> {
    let meta = grid.meta;
    if grid.occupied_count() == 0 {
        return Err(Error::Domain(
            "distance transform needs at least one occupied cell (E is empty)".into(),
        ));
    }
    let (w, hgt) = (meta.width, meta.height);
    // Column pass: distance in rows to the nearest occupied cell of the same
    // column, COL_INF when the column is empty.
    let mut coldist = vec![COL_INF; w * hgt];
    for i in 0..w {
        let mut last: Option<usize> = None;
        for j in 0..hgt {
            let idx = meta.index(i, j);
            if grid.occupied_idx(idx) {
                coldist[idx] = 0;
                last = Some(j);
            } else if let Some(l) = last {
                coldist[idx] = (j - l) as u32;
            }
        }
        last = None;
        for j in (0..hgt).rev() {
            let idx = meta.index(i, j);
            if grid.occupied_idx(idx) {
                last = Some(j);
            } else if let Some(l) = last {
                let d = (l - j) as u32;
                if d < coldist[idx] {
                    coldist[idx] = d;
                }
            }
        }
    }

    // Row pass: lower envelope of the parabolas x -> (x - p)^2 + f(p) with
    // integer arithmetic; envelope boundaries are kept as exact rationals
    // num/den with den > 0.
    let mut sq = vec![0u32; w * hgt];
    let mut v: Vec<i64> = vec![0; w];
    let mut znum: Vec<i64> = vec![0; w + 1];
    let mut zden: Vec<i64> = vec![1; w + 1];
    for j in 0..hgt {
        let mut k: isize = -1;
        for q in 0..w {
            let fq = match coldist[meta.index(q, j)] {
                COL_INF => continue,
                d => (d as i64) * (d as i64),
            };
            let qi = q as i64;
            // Intersection with the top parabola: s = num / den with den > 0.
            let mut num = 0i64;
            let mut den = 1i64;
            while k >= 0 {
                let p = v[k as usize];
                let fp = {
                    let d = coldist[meta.index(p as usize, j)];
                    (d as i64) * (d as i64)
                };
                num = (fq + qi * qi) - (fp + p * p);
                den = 2 * (qi - p);
                // Pop while s <= z[k]; z[0] is minus infinity, so the first
                // parabola is never popped by its left boundary.
                if k > 0 && num * zden[k as usize] <= znum[k as usize] * den {
                    k -= 1;
                } else {
                    break;
                }
            }
            if k < 0 {
                k = 0;
                v[0] = qi;
            } else {
                k += 1;
                v[k as usize] = qi;
                znum[k as usize] = num;
                zden[k as usize] = den;
            }
        }
        debug_assert!(k >= 0, "every row sees at least one finite column");
        let mut kk = 0usize;
        for x in 0..w {
            let xi = x as i64;
            // Advance while z[kk + 1] < x, i.e. znum < x * zden.
            while (kk as isize) < k && znum[kk + 1] < xi * zden[kk + 1] {
                kk += 1;
            }
            let p = v[kk];
            let d = coldist[meta.index(p as usize, j)];
            let fp = (d as i64) * (d as i64);
            let dx = xi - p;
            sq[meta.index(x, j)] = (dx * dx + fp) as u32;
        }
    }
    Ok(DistanceField { meta, sq })
}
