//! Iterated function systems and the finite-depth scenes they generate.
//!
//! An [`IfsSystem`] is a list of contracting similarity maps together with a
//! seed polygon and one or more carve polygons.  Generation g removes the
//! images of every carve polygon under all map words of length g-1; the
//! removed regions are the bounded complementary components, and the union of
//! their boundaries with the seed boundary is the depth-d stand-in for the
//! boundary set E.
//!
//! Component ids are assigned generation-major, then lexicographic in the map
//! word, then by carve index, so equal inputs always enumerate identically.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geom::{Aabb, Polygon, Polyline, Similarity, Vec2, EPS};
#[cfg(not(feature = "std"))]
use crate::math::FloatExt;

/// Contracting similarity: like [`Similarity`] but with scale restricted to
/// (0, 1) so that iterating the system shrinks everything.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityMap {
    sim: Similarity,
}

impl SimilarityMap {
    pub fn new(scale: f64, rotation: f64, reflect: bool, translation: Vec2) -> Result<SimilarityMap> {
        if !(scale.is_finite() && scale > 0.0 && scale < 1.0) {
            return Err(Error::Config(format!(
                "map scale must lie strictly between 0 and 1, got {scale}"
            )));
        }
        Ok(SimilarityMap { sim: Similarity::new(scale, rotation, reflect, translation)? })
    }

    pub fn scale(&self) -> f64 {
        self.sim.scale
    }

    pub fn rotation(&self) -> f64 {
        self.sim.rotation
    }

    pub fn reflect(&self) -> bool {
        self.sim.reflect
    }

    pub fn translation(&self) -> Vec2 {
        self.sim.translation
    }

    pub fn apply(&self, p: Vec2) -> Vec2 {
        self.sim.apply(p)
    }

    pub fn as_similarity(&self) -> &Similarity {
        &self.sim
    }
}

#[derive(Debug, Clone)]
pub struct IfsSystem {
    maps: Vec<SimilarityMap>,
    seed: Polygon,
    carve: Vec<Polygon>,
}

impl IfsSystem {
    /// Validates that every map sends the seed into the seed's closure and
    /// that carve polygons are disjoint open regions inside the seed.
    pub fn new(maps: Vec<SimilarityMap>, seed: Polygon, carve: Vec<Polygon>) -> Result<IfsSystem> {
        if maps.is_empty() {
            return Err(Error::Config("system needs at least one map".into()));
        }
        if carve.is_empty() {
            return Err(Error::Config("system needs at least one carve polygon".into()));
        }
        for (k, map) in maps.iter().enumerate() {
            for &v in seed.verts() {
                let image = map.apply(v);
                if !point_in_closure(&seed, image) {
                    return Err(Error::Config(format!(
                        "map {k} sends seed vertex ({}, {}) outside the seed",
                        v.x, v.y
                    )));
                }
            }
        }
        for (k, c) in carve.iter().enumerate() {
            for &v in c.verts() {
                if !point_in_closure(&seed, v) {
                    return Err(Error::Config(format!(
                        "carve polygon {k} leaves the seed at ({}, {})",
                        v.x, v.y
                    )));
                }
            }
            for (a1, a2) in c.edges() {
                for (b1, b2) in seed.edges() {
                    if segs_properly_cross(a1, a2, b1, b2) {
                        return Err(Error::Config(format!(
                            "carve polygon {k} crosses the seed boundary"
                        )));
                    }
                }
            }
        }
        for i in 0..carve.len() {
            for j in (i + 1)..carve.len() {
                if polygons_overlap(&carve[i], &carve[j]) {
                    return Err(Error::Config(format!(
                        "carve polygons {i} and {j} overlap"
                    )));
                }
            }
        }
        Ok(IfsSystem { maps, seed, carve })
    }

    pub fn maps(&self) -> &[SimilarityMap] {
        &self.maps
    }

    pub fn seed(&self) -> &Polygon {
        &self.seed
    }

    pub fn carve(&self) -> &[Polygon] {
        &self.carve
    }

    /// Number of components generated up to `depth`, without enumerating them.
    pub fn component_count(&self, depth: u32) -> Option<u128> {
        let m = self.maps.len() as u128;
        let c = self.carve.len() as u128;
        let mut total: u128 = 0;
        let mut words: u128 = 1;
        for _ in 1..=depth {
            total = total.checked_add(c.checked_mul(words)?)?;
            words = words.checked_mul(m)?;
        }
        Some(total)
    }
}

fn point_in_closure(poly: &Polygon, p: Vec2) -> bool {
    poly.contains_point(p) || poly.on_boundary(p, EPS)
}

/// Strict transversal crossing; shared endpoints and touches do not count.
fn segs_properly_cross(p1: Vec2, p2: Vec2, q1: Vec2, q2: Vec2) -> bool {
    let d1 = (q2 - q1).cross(p1 - q1);
    let d2 = (q2 - q1).cross(p2 - q1);
    let d3 = (p2 - p1).cross(q1 - p1);
    let d4 = (p2 - p1).cross(q2 - p1);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

/// True when the open interiors of two simple polygons intersect.  Touching
/// boundaries are allowed.
fn polygons_overlap(a: &Polygon, b: &Polygon) -> bool {
    for (a1, a2) in a.edges() {
        for (b1, b2) in b.edges() {
            if segs_properly_cross(a1, a2, b1, b2) {
                return true;
            }
        }
    }
    let inside_strict = |poly: &Polygon, p: Vec2| poly.contains_point(p) && !poly.on_boundary(p, EPS);
    a.verts().iter().any(|&v| inside_strict(b, v))
        || b.verts().iter().any(|&v| inside_strict(a, v))
        || inside_strict(b, a.interior_point())
        || inside_strict(a, b.interior_point())
}

/// One bounded complementary component: a carve-polygon image under a map
/// word, tagged with its generation (word length + 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub id: usize,
    pub generation: u32,
    pub word: Vec<u32>,
    pub carve_index: usize,
    pub polygon: Polygon,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerateLimits {
    pub max_depth: u32,
    pub component_cap: u64,
}

impl Default for GenerateLimits {
    fn default() -> Self {
        GenerateLimits { max_depth: 8, component_cap: 1_000_000 }
    }
}

/// Finite-depth scene: the enumerated bounded components of the complement
/// plus the closed polylines approximating E (seed boundary first, then each
/// component boundary in id order).
#[derive(Debug, Clone)]
pub struct Scene {
    pub components: Vec<Component>,
    pub boundary: Vec<Polyline>,
    pub seed: Option<Polygon>,
    pub depth: u32,
    pub bounds: Aabb,
}

impl Scene {
    pub fn new(seed: Option<Polygon>, components: Vec<Component>, depth: u32) -> Result<Scene> {
        let mut boundary = Vec::with_capacity(components.len() + 1);
        if let Some(s) = &seed {
            boundary.push(s.to_polyline());
        }
        for c in &components {
            boundary.push(c.polygon.to_polyline());
        }
        if boundary.is_empty() {
            return Err(Error::Config("scene has no boundary".into()));
        }
        let bounds = bounds_of(&boundary)
            .ok_or_else(|| Error::Config(String::from("scene boundary has no points")))?;
        Ok(Scene { components, boundary, seed, depth, bounds })
    }

    /// Scene made of raw polylines, with no seed region or components.  Used
    /// for hand-built boundary sets.
    pub fn from_polylines(polylines: Vec<Polyline>) -> Result<Scene> {
        if polylines.iter().all(|p| p.points.is_empty()) {
            return Err(Error::Config("scene boundary has no points".into()));
        }
        let bounds = bounds_of(&polylines)
            .ok_or_else(|| Error::Config(String::from("scene boundary has no points")))?;
        Ok(Scene { components: Vec::new(), boundary: polylines, seed: None, depth: 0, bounds })
    }

    /// Empty scene: no boundary at all.  Rasterizes to an all-clear grid.
    pub fn empty() -> Scene {
        Scene {
            components: Vec::new(),
            boundary: Vec::new(),
            seed: None,
            depth: 0,
            bounds: Aabb { min: Vec2::ZERO, max: Vec2::new(1.0, 1.0) },
        }
    }

    /// The same scene truncated to `depth` generations.  Component ids are a
    /// prefix of the deeper enumeration.
    pub fn truncated(&self, depth: u32) -> Scene {
        let components: Vec<Component> = self
            .components
            .iter()
            .take_while(|c| c.generation <= depth)
            .cloned()
            .collect();
        let mut boundary = Vec::with_capacity(components.len() + 1);
        if let Some(s) = &self.seed {
            boundary.push(s.to_polyline());
        }
        for c in &components {
            boundary.push(c.polygon.to_polyline());
        }
        let bounds = bounds_of(&boundary).unwrap_or(self.bounds);
        Scene { components, boundary, seed: self.seed.clone(), depth, bounds }
    }

    /// Applies a global similarity to every stored polygon and polyline.
    pub fn transform(&self, t: &Similarity) -> Result<Scene> {
        let seed = match &self.seed {
            Some(s) => Some(s.transform(t)?),
            None => None,
        };
        let mut components = Vec::with_capacity(self.components.len());
        for c in &self.components {
            components.push(Component {
                id: c.id,
                generation: c.generation,
                word: c.word.clone(),
                carve_index: c.carve_index,
                polygon: c.polygon.transform(t)?,
            });
        }
        let boundary: Vec<Polyline> = self
            .boundary
            .iter()
            .map(|pl| Polyline {
                points: pl.points.iter().map(|&p| t.apply(p)).collect(),
                closed: pl.closed,
            })
            .collect();
        let bounds = bounds_of(&boundary)
            .ok_or_else(|| Error::Config(String::from("scene boundary has no points")))?;
        Ok(Scene { components, boundary, seed, depth: self.depth, bounds })
    }

    /// Exact distance from `p` to the union of boundary polylines.
    pub fn dist_to_boundary(&self, p: Vec2) -> f64 {
        let mut best = f64::INFINITY;
        for pl in &self.boundary {
            best = best.min(pl.dist_to_point(p));
        }
        best
    }
}

fn bounds_of(polylines: &[Polyline]) -> Option<Aabb> {
    Aabb::from_points(polylines.iter().flat_map(|pl| pl.points.iter().copied()))
}

pub fn generate_scene(system: &IfsSystem, depth: u32) -> Result<Scene> {
    generate_scene_with(system, depth, &GenerateLimits::default())
}

pub fn generate_scene_with(
    system: &IfsSystem,
    depth: u32,
    limits: &GenerateLimits,
) -> Result<Scene> {
    if depth < 1 || depth > limits.max_depth {
        return Err(Error::Bounds(format!(
            "depth {depth} outside permitted range 1..={}",
            limits.max_depth
        )));
    }
    let count = system.component_count(depth).unwrap_or(u128::MAX);
    if count > limits.component_cap as u128 {
        return Err(Error::Resource(format!(
            "depth {depth} would enumerate {count} components, cap is {}",
            limits.component_cap
        )));
    }

    let mut components: Vec<Component> = Vec::with_capacity(count as usize);
    let mut id = 0usize;
    // Transforms of all words of the current length, in lexicographic order.
    let mut word_transforms: Vec<(Vec<u32>, Similarity)> =
        alloc::vec![(Vec::new(), Similarity::identity())];
    for generation in 1..=depth {
        for (word, transform) in &word_transforms {
            for (carve_index, carve) in system.carve.iter().enumerate() {
                let polygon = carve.transform(transform)?;
                components.push(Component {
                    id,
                    generation,
                    word: word.clone(),
                    carve_index,
                    polygon,
                });
                id += 1;
            }
        }
        if generation < depth {
            let mut next = Vec::with_capacity(word_transforms.len() * system.maps.len());
            for (word, transform) in &word_transforms {
                for (k, map) in system.maps.iter().enumerate() {
                    let mut w = word.clone();
                    w.push(k as u32);
                    next.push((w, transform.compose(map.as_similarity())));
                }
            }
            word_transforms = next;
        }
    }
    Scene::new(Some(system.seed.clone()), components, depth)
}

/// Builds one of the named example systems.
pub fn build_preset(name: &str) -> Result<IfsSystem> {
    match name {
        "sierpinski-carpet" => {
            let third = 1.0 / 3.0;
            let mut maps = Vec::with_capacity(8);
            for i in 0..3 {
                for j in 0..3 {
                    if i == 1 && j == 1 {
                        continue;
                    }
                    maps.push(SimilarityMap::new(
                        third,
                        0.0,
                        false,
                        Vec2::new(i as f64 * third, j as f64 * third),
                    )?);
                }
            }
            let seed = Polygon::new(alloc::vec![
                Vec2::new(0.0, 0.0),
                Vec2::new(1.0, 0.0),
                Vec2::new(1.0, 1.0),
                Vec2::new(0.0, 1.0),
            ])?;
            let carve = Polygon::new(alloc::vec![
                Vec2::new(third, third),
                Vec2::new(2.0 * third, third),
                Vec2::new(2.0 * third, 2.0 * third),
                Vec2::new(third, 2.0 * third),
            ])?;
            IfsSystem::new(maps, seed, alloc::vec![carve])
        }
        "sierpinski-gasket" => {
            let s3 = 3.0f64.sqrt();
            let maps = alloc::vec![
                SimilarityMap::new(0.5, 0.0, false, Vec2::new(0.0, 0.0))?,
                SimilarityMap::new(0.5, 0.0, false, Vec2::new(0.5, 0.0))?,
                SimilarityMap::new(0.5, 0.0, false, Vec2::new(0.25, s3 / 4.0))?,
            ];
            let seed = Polygon::new(alloc::vec![
                Vec2::new(0.0, 0.0),
                Vec2::new(1.0, 0.0),
                Vec2::new(0.5, s3 / 2.0),
            ])?;
            let carve = Polygon::new(alloc::vec![
                Vec2::new(0.5, 0.0),
                Vec2::new(0.75, s3 / 4.0),
                Vec2::new(0.25, s3 / 4.0),
            ])?;
            IfsSystem::new(maps, seed, alloc::vec![carve])
        }
        other => Err(Error::Config(format!(
            "unknown preset {other:?}; known presets: sierpinski-carpet, sierpinski-gasket"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn map_apply_order_is_reflect_rotate_scale_translate() {
        let m = SimilarityMap::new(0.5, core::f64::consts::FRAC_PI_2, false, Vec2::new(1.0, 1.0))
            .unwrap();
        let p = m.apply(Vec2::new(1.0, 0.0));
        assert!(p.dist(Vec2::new(1.0, 1.5)) < 1e-15);
    }

    #[test]
    fn map_rejects_scale_outside_open_unit_interval() {
        assert!(SimilarityMap::new(1.0, 0.0, false, Vec2::ZERO).is_err());
        assert!(SimilarityMap::new(0.0, 0.0, false, Vec2::ZERO).is_err());
        assert!(SimilarityMap::new(-0.5, 0.0, false, Vec2::ZERO).is_err());
        assert!(SimilarityMap::new(0.999, 0.0, false, Vec2::ZERO).is_ok());
    }

    #[test]
    fn preset_component_counts_match_the_counting_formula() {
        // Sum over generations g of c * m^(g-1).
        let count = |m: u64, c: u64, d: u32| -> u64 {
            (1..=d).map(|g| c * m.pow(g - 1)).sum()
        };
        let carpet = build_preset("sierpinski-carpet").unwrap();
        let scene = generate_scene(&carpet, 2).unwrap();
        assert_eq!(scene.components.len(), 9);
        assert_eq!(scene.components.len() as u64, count(8, 1, 2));
        let scene = generate_scene(&carpet, 3).unwrap();
        assert_eq!(scene.components.len(), 73);
        assert_eq!(scene.components.len() as u64, count(8, 1, 3));
        let gasket = build_preset("sierpinski-gasket").unwrap();
        let scene = generate_scene(&gasket, 2).unwrap();
        assert_eq!(scene.components.len(), 4);
        assert_eq!(scene.components.len() as u64, count(3, 1, 2));
    }

    #[test]
    fn unknown_preset_is_a_config_error() {
        let err = build_preset("menger").unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        assert!(err.message().contains("sierpinski-carpet"));
    }

    #[test]
    fn depth_limits_are_enforced() {
        let carpet = build_preset("sierpinski-carpet").unwrap();
        assert!(matches!(generate_scene(&carpet, 0), Err(Error::Bounds(_))));
        assert!(matches!(generate_scene(&carpet, 9), Err(Error::Bounds(_))));
        let tight = GenerateLimits { max_depth: 8, component_cap: 10 };
        let err = generate_scene_with(&carpet, 3, &tight).unwrap_err();
        assert!(matches!(err, Error::Resource(_)));
        assert!(err.message().contains("73"), "message was: {err}");
    }

    #[test]
    fn enumeration_is_generation_major_and_deterministic() {
        let carpet = build_preset("sierpinski-carpet").unwrap();
        let a = generate_scene(&carpet, 3).unwrap();
        let b = generate_scene(&carpet, 3).unwrap();
        assert_eq!(a.components.len(), b.components.len());
        for (ca, cb) in a.components.iter().zip(&b.components) {
            assert_eq!(ca.id, cb.id);
            assert_eq!(ca.word, cb.word);
            for (va, vb) in ca.polygon.verts().iter().zip(cb.polygon.verts()) {
                assert_eq!(va.x.to_bits(), vb.x.to_bits());
                assert_eq!(va.y.to_bits(), vb.y.to_bits());
            }
        }
        let mut last_gen = 0;
        for c in &a.components {
            assert!(c.generation >= last_gen);
            last_gen = c.generation;
        }
        // Truncation yields an id-prefix of the deeper enumeration.
        let t = a.truncated(2);
        assert_eq!(t.components.len(), 9);
        for (i, c) in t.components.iter().enumerate() {
            assert_eq!(c.id, i);
            assert_eq!(c.polygon, a.components[i].polygon);
        }
    }

    #[test]
    fn rescaling_the_system_rescales_all_vertices() {
        let lambda = 3.75;
        let carpet = build_preset("sierpinski-carpet").unwrap();
        let scaled_maps: Vec<SimilarityMap> = carpet
            .maps()
            .iter()
            .map(|m| {
                SimilarityMap::new(m.scale(), m.rotation(), m.reflect(), m.translation() * lambda)
                    .unwrap()
            })
            .collect();
        let scale_poly = |p: &Polygon| {
            Polygon::new(p.verts().iter().map(|&v| v * lambda).collect()).unwrap()
        };
        let scaled = IfsSystem::new(
            scaled_maps,
            scale_poly(carpet.seed()),
            carpet.carve().iter().map(scale_poly).collect(),
        )
        .unwrap();
        let base = generate_scene(&carpet, 3).unwrap();
        let big = generate_scene(&scaled, 3).unwrap();
        for (cb, cs) in base.components.iter().zip(&big.components) {
            for (vb, vs) in cb.polygon.verts().iter().zip(cs.polygon.verts()) {
                let want = *vb * lambda;
                assert!(
                    vs.dist(want) <= 1e-12 * want.norm().max(1.0),
                    "{vs:?} vs {want:?}"
                );
            }
        }
    }

    #[test]
    fn gasket_children_touch_the_parent_triangle() {
        let gasket = build_preset("sierpinski-gasket").unwrap();
        let scene = generate_scene(&gasket, 2).unwrap();
        // The generation-2 triangle in the first corner has a vertex on the
        // generation-1 triangle's edge.
        let parent = &scene.components[0].polygon;
        let child = &scene.components[1].polygon;
        let touch = child
            .verts()
            .iter()
            .map(|&v| parent.dist_to_boundary(v))
            .fold(f64::INFINITY, f64::min);
        assert!(touch <= 1e-12, "closest vertex at distance {touch}");
    }

    #[test]
    fn system_validation_rejects_bad_geometry() {
        // Carve polygon escaping the seed.
        let seed = Polygon::new(vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ])
        .unwrap();
        let escaping = Polygon::new(vec![
            Vec2::new(0.5, 0.5),
            Vec2::new(1.5, 0.5),
            Vec2::new(1.5, 0.8),
            Vec2::new(0.5, 0.8),
        ])
        .unwrap();
        let map = SimilarityMap::new(0.5, 0.0, false, Vec2::ZERO).unwrap();
        assert!(IfsSystem::new(vec![map], seed.clone(), vec![escaping]).is_err());
        // Overlapping carve polygons.
        let a = Polygon::new(vec![
            Vec2::new(0.1, 0.1),
            Vec2::new(0.6, 0.1),
            Vec2::new(0.6, 0.6),
            Vec2::new(0.1, 0.6),
        ])
        .unwrap();
        let b = Polygon::new(vec![
            Vec2::new(0.4, 0.4),
            Vec2::new(0.9, 0.4),
            Vec2::new(0.9, 0.9),
            Vec2::new(0.4, 0.9),
        ])
        .unwrap();
        assert!(IfsSystem::new(vec![map], seed.clone(), vec![a, b]).is_err());
        // A map that sends the seed outside itself.
        let bad_map = SimilarityMap::new(0.5, 0.0, false, Vec2::new(0.9, 0.0)).unwrap();
        let carve = Polygon::new(vec![
            Vec2::new(0.4, 0.4),
            Vec2::new(0.6, 0.4),
            Vec2::new(0.6, 0.6),
            Vec2::new(0.4, 0.6),
        ])
        .unwrap();
        assert!(IfsSystem::new(vec![bad_map], seed, vec![carve]).is_err());
    }

    #[test]
    fn map_contracts_distances_by_exactly_its_scale() {
        use proptest::prelude::*;
        proptest!(|(
            scale in 0.05f64..0.95,
            rot in -3.2f64..3.2,
            refl: bool,
            tx in -5.0f64..5.0,
            ty in -5.0f64..5.0,
            ax in -10.0f64..10.0,
            ay in -10.0f64..10.0,
            bx in -10.0f64..10.0,
            by in -10.0f64..10.0,
        )| {
            let m = SimilarityMap::new(scale, rot, refl, Vec2::new(tx, ty)).unwrap();
            let a = Vec2::new(ax, ay);
            let b = Vec2::new(bx, by);
            let d0 = a.dist(b);
            let d1 = m.apply(a).dist(m.apply(b));
            prop_assert!((d1 - scale * d0).abs() <= 1e-12 * d0.max(1.0));
        });
    }
}
