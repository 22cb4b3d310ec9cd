//! Pipeline front end for the `prefractal` core: parse a run configuration,
//! execute every requested analysis at depths 1 through the configured
//! depth, and assemble one machine-readable [`report::Report`] plus the
//! grids an SVG or PGM export needs.
//!
//! Output is deterministic for a fixed configuration and tool version: the
//! pipeline is single-threaded, block order is fixed, and wall-clock
//! timings are recorded only when explicitly requested.

pub mod config;
pub mod pgm;
pub mod report;
pub mod svg;

use std::time::Instant;

use prefractal::error::{Error, Result};
use prefractal::geom::Vec2;
use prefractal::ifs::{generate_scene, IfsSystem, Scene};
use prefractal::metrics::{
    boundary_path_constant, component_in_ball_constant, measure_summary, porosity_constant,
    separation_constant, shape_metrics, similarity_classes, SeparationValue, SimilarityClasses,
};
use prefractal::raster::{
    distance_to_set, label_complement, rasterize, rasterize_with, DistanceField, Grid,
    LabeledGrid, RasterOptions,
};
use prefractal::topology::{homotopy_equivalent, radial_query, winding_number};

pub use config::{parse_config, Metric, RunConfig};
pub use report::Report;
pub use svg::render_svg;

use report::{
    ClassesBlock, ComponentRow, ConfigEcho, ContainmentBlock, CustomEcho, DepthBlock, MapEcho,
    MeasureBlock, PathBlock, ProbeRow, RadialBlock, SeparationBlock, StageTiming, TopologyBlock,
    WitnessBall, SCHEMA_VERSION,
};

/// Vertex tolerance for similarity classing, in units of the normalized
/// (diameter-1) polygon.
pub const CLASS_TOLERANCE: f64 = 1e-6;

/// Everything a run produces: the report plus the final-depth scene and
/// grids, so callers can render figures without recomputing.
pub struct RunOutput {
    pub report: Report,
    pub scene: Scene,
    pub grid: Grid,
    pub labeled: LabeledGrid,
    pub field: DistanceField,
}

impl RunOutput {
    pub fn render_svg(&self) -> String {
        svg::render_svg(&self.scene, &self.report)
    }
}

/// Execute the full pipeline for a validated configuration.
pub fn run_report(config: &RunConfig) -> Result<RunOutput> {
    let mut watch = Stopwatch::new(config.timings);

    let full = generate_scene(&config.system, config.depth)?;
    watch.lap("generate");

    let scales = match &config.scales {
        Some(scales) => scales.clone(),
        None => default_scales(&full, &config.system, config.resolution),
    };
    let porosity_pad = porosity_pad_cells(&scales, config.resolution);

    // The class partition depends only on the final-depth scene; computed
    // once and shared by the depth block, the component table, and the SVG.
    let partition = if config.metric(Metric::Classes) {
        Some(similarity_classes(&full, CLASS_TOLERANCE)?)
    } else {
        None
    };

    let mut depths = Vec::with_capacity(config.depth as usize);
    for depth in 1..=config.depth {
        let truncated;
        let scene: &Scene = if depth == config.depth {
            &full
        } else {
            truncated = full.truncated(depth);
            &truncated
        };
        let block = depth_block(config, scene, depth, &scales, porosity_pad, partition.as_ref())?;
        depths.push(block);
        watch.lap(&format!("depth-{depth}"));
    }

    let grid = rasterize(&full, config.resolution)?;
    let field = distance_to_set(&grid)?;
    let labeled = label_complement(&grid);
    watch.lap("raster");

    let components = if config.metric(Metric::Shape) {
        Some(component_table(&full, partition.as_ref())?)
    } else {
        None
    };
    let classes_block = partition.as_ref().map(|p| ClassesBlock {
        count: p.count(),
        tolerance: p.tolerance,
        class_of: p.class_of.clone(),
        representatives: p.representatives.clone(),
    });
    let topology = if config.metric(Metric::Topology) {
        Some(topology_block(&full, &labeled)?)
    } else {
        None
    };
    watch.lap("finalize");

    let report = Report {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config: config_echo(config, &scales),
        depths,
        components,
        similarity_classes: classes_block,
        topology,
        timings_ms: watch.finish(),
    };
    Ok(RunOutput { report, scene: full, grid, labeled, field })
}

/// Default ball radii: the scene diameter contracted by the system's
/// largest map ratio, one rung per generation except the last.  Rungs finer
/// than the last generation would see no whole components, and rungs the
/// grid cannot resolve (under 8 cells) are dropped.
fn default_scales(scene: &Scene, system: &IfsSystem, resolution: u32) -> Vec<f64> {
    let diam = scene.bounds.diameter();
    let floor = 8.0 / resolution as f64;
    let ratio = system.maps().iter().map(|m| m.scale()).fold(0.0f64, f64::max);
    let mut scales = Vec::new();
    let mut r = diam;
    for _ in 0..scene.depth.max(2) - 1 {
        r *= ratio;
        if r >= floor && r <= diam {
            scales.push(r);
        }
    }
    if scales.is_empty() {
        scales.push(floor.min(diam));
    }
    scales
}

/// Padding that keeps every porosity ball inside the grid: the largest
/// radius in cells, rounded up, plus slack.
fn porosity_pad_cells(scales: &[f64], resolution: u32) -> usize {
    let r_max = scales.iter().fold(0.0f64, |a, &b| a.max(b));
    let h = 1.0 / resolution as f64;
    (r_max / h).ceil() as usize + 3
}

fn depth_block(
    config: &RunConfig,
    scene: &Scene,
    depth: u32,
    scales: &[f64],
    porosity_pad: usize,
    partition: Option<&SimilarityClasses>,
) -> Result<DepthBlock> {
    let count = scene.components.len();

    let separation = if config.metric(Metric::Separation) && count >= 2 {
        let r = separation_constant(scene)?;
        Some(SeparationBlock {
            value: match r.value {
                SeparationValue::Bounded(c) => Some(c),
                SeparationValue::Unbounded => None,
            },
            unbounded: r.value == SeparationValue::Unbounded,
            witness: [r.witness.0, r.witness.1],
            witness_dist: r.witness_dist,
            witness_points: [pt(r.witness_points.0), pt(r.witness_points.1)],
            min_gap: r.min_gap,
        })
    } else {
        None
    };

    let path = if config.metric(Metric::Path) && count >= 1 {
        let mut best: Option<PathBlock> = None;
        for comp in &scene.components {
            let r = boundary_path_constant(&comp.polygon, config.samples_per_edge)?;
            if best.as_ref().is_none_or(|b| r.k > b.k) {
                best = Some(PathBlock {
                    k: r.k,
                    component: comp.id,
                    witness: [pt(r.witness.0), pt(r.witness.1)],
                    samples_per_edge: config.samples_per_edge,
                });
            }
        }
        best
    } else {
        None
    };

    let porosity = if config.metric(Metric::Porosity) {
        let options = RasterOptions { pad_cells: porosity_pad, ..RasterOptions::default() };
        let grid = rasterize_with(scene, config.resolution, &options)?;
        let field = distance_to_set(&grid)?;
        let r = porosity_constant(scene, &field, scales)?;
        Some(RadialBlock {
            value: r.value,
            witness: ball(&r.witness),
            scales: r.scales,
            samples: r.samples,
        })
    } else {
        None
    };

    let component_in_ball = if config.metric(Metric::ComponentInBall) && count >= 1 {
        let r = component_in_ball_constant(scene, scales)?;
        Some(ContainmentBlock {
            value: r.value,
            witness: ball(&r.witness),
            scales: r.scales,
            samples: r.samples,
            containment_fraction: r.containment_fraction,
        })
    } else {
        None
    };

    let measure = if config.metric(Metric::Measure) {
        let m = measure_summary(scene);
        Some(MeasureBlock {
            area_sum: m.area_sum,
            perimeter_sum: m.perimeter_sum,
            area_estimate: m.area_estimate,
        })
    } else {
        None
    };

    let similarity_class_count = if config.metric(Metric::Classes) {
        Some(match partition {
            Some(p) if depth == config.depth => p.count(),
            _ => similarity_classes(scene, CLASS_TOLERANCE)?.count(),
        })
    } else {
        None
    };

    Ok(DepthBlock {
        depth,
        resolution: config.resolution,
        component_count: count,
        separation,
        path,
        porosity,
        component_in_ball,
        measure,
        similarity_class_count,
    })
}

fn component_table(
    scene: &Scene,
    partition: Option<&SimilarityClasses>,
) -> Result<Vec<ComponentRow>> {
    let mut rows = Vec::with_capacity(scene.components.len());
    for comp in &scene.components {
        let shape = shape_metrics(&comp.polygon)?;
        rows.push(ComponentRow {
            id: comp.id,
            generation: comp.generation,
            carve_index: comp.carve_index,
            class: partition.map(|p| p.class_of[comp.id]),
            centroid: pt(comp.polygon.centroid()),
            area: comp.polygon.area(),
            perimeter: comp.polygon.perimeter(),
            diameter: shape.diameter,
            inradius: shape.inradius,
            inradius_error: shape.inradius_error,
            roundness: shape.roundness,
        });
    }
    Ok(rows)
}

/// One probe per generation, at an interior point of that generation's
/// first component: the boundary winds around it once, the radial map based
/// there has the reported Lipschitz bound, and the grid assigns it the
/// reported complement label.
fn topology_block(scene: &Scene, labeled: &LabeledGrid) -> Result<TopologyBlock> {
    let mut probes = Vec::new();
    for generation in 1..=scene.depth {
        let Some(comp) = scene.components.iter().find(|c| c.generation == generation) else {
            continue;
        };
        let point = comp.polygon.interior_point();
        let winding = winding_number(comp.polygon.verts(), point)?;
        let radial = radial_query(scene, point)?;
        let label = labeled.component_of_point(point)?;
        probes.push(ProbeRow {
            component: comp.id,
            generation,
            point: pt(point),
            winding,
            dist_to_boundary: radial.dist_to_boundary,
            lipschitz_bound: radial.lipschitz_bound,
            label,
        });
    }
    Ok(TopologyBlock { probes })
}

fn config_echo(config: &RunConfig, scales: &[f64]) -> ConfigEcho {
    let custom = if config.preset.is_none() {
        Some(CustomEcho {
            maps: config
                .system
                .maps()
                .iter()
                .map(|m| MapEcho {
                    scale: m.scale(),
                    rotation: m.rotation(),
                    reflect: m.reflect(),
                    translation: pt(m.translation()),
                })
                .collect(),
            seed: config.system.seed().verts().iter().map(|&v| pt(v)).collect(),
            carve: config
                .system
                .carve()
                .iter()
                .map(|p| p.verts().iter().map(|&v| pt(v)).collect())
                .collect(),
        })
    } else {
        None
    };
    ConfigEcho {
        preset: config.preset.clone(),
        custom,
        depth: config.depth,
        resolution: config.resolution,
        samples_per_edge: config.samples_per_edge,
        scales: scales.to_vec(),
        metrics: config.metrics.iter().map(|m| m.name().to_string()).collect(),
    }
}

fn pt(v: Vec2) -> [f64; 2] {
    [v.x, v.y]
}

fn ball(w: &prefractal::metrics::RadialWitness) -> WitnessBall {
    WitnessBall { center: pt(w.x), r: w.r, ratio: w.ratio }
}

struct Stopwatch {
    stages: Option<Vec<StageTiming>>,
    last: Instant,
}

impl Stopwatch {
    fn new(enabled: bool) -> Stopwatch {
        Stopwatch { stages: enabled.then(Vec::new), last: Instant::now() }
    }

    fn lap(&mut self, stage: &str) {
        let now = Instant::now();
        if let Some(stages) = &mut self.stages {
            stages.push(StageTiming {
                stage: stage.to_string(),
                millis: now.duration_since(self.last).as_secs_f64() * 1e3,
            });
        }
        self.last = now;
    }

    fn finish(self) -> Option<Vec<StageTiming>> {
        self.stages
    }
}

/// Point classification for the `classify` subcommand: grid labels for each
/// point and pairwise homotopy verdicts.
#[derive(Debug)]
pub struct ClassifyOutcome {
    pub labels: Vec<u32>,
    /// `(i, j, equivalent)` for every unordered pair, `i < j`.
    pub verdicts: Vec<(usize, usize, bool)>,
}

pub fn classify_points(config: &RunConfig, points: &[Vec2]) -> Result<ClassifyOutcome> {
    if points.len() < 2 {
        return Err(Error::Config("classify needs at least two --point arguments".into()));
    }
    let scene = generate_scene(&config.system, config.depth)?;
    let grid = rasterize(&scene, config.resolution)?;
    let labeled = label_complement(&grid);
    let labels = points
        .iter()
        .map(|&p| labeled.component_of_point(p))
        .collect::<Result<Vec<u32>>>()?;
    let mut verdicts = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            verdicts.push((i, j, homotopy_equivalent(&labeled, points[i], points[j])?));
        }
    }
    Ok(ClassifyOutcome { labels, verdicts })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn carpet_config(extra: &str) -> RunConfig {
        parse_config(&format!("preset = \"sierpinski-carpet\"\n{extra}")).unwrap()
    }

    #[test]
    fn default_scales_follow_the_contraction_ladder() {
        let config = carpet_config("");
        let scene = generate_scene(&config.system, 4).unwrap();
        let scales = default_scales(&scene, &config.system, 729);
        let diam = scene.bounds.diameter();
        assert_eq!(scales.len(), 3);
        assert!((scales[0] - diam / 3.0).abs() < 1e-15);
        assert!((scales[2] - diam / 27.0).abs() < 1e-15);
        assert!(scales.iter().all(|&r| r >= 8.0 / 729.0));
        assert!(scales.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn default_scales_drop_unresolvable_rungs() {
        let config = carpet_config("");
        let scene = generate_scene(&config.system, 4).unwrap();
        // At resolution 16 the floor is 0.5 and every carpet rung is finer,
        // so only the fallback single rung remains.
        let scales = default_scales(&scene, &config.system, 16);
        assert_eq!(scales, vec![0.5]);
    }

    #[test]
    fn porosity_padding_covers_the_largest_ball() {
        let pad = porosity_pad_cells(&[0.25, 0.5], 64);
        assert_eq!(pad, 32 + 3);
        assert!(pad as f64 / 64.0 >= 0.5);
    }

    #[test]
    fn classify_rejects_fewer_than_two_points() {
        let config = carpet_config("depth = 1\nresolution = 27\n");
        let err = classify_points(&config, &[Vec2 { x: 0.5, y: 0.5 }]).unwrap_err();
        assert!(err.message().contains("at least two"), "{err}");
    }
}
