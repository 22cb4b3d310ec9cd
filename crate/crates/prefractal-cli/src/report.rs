//! Machine-readable report schema.
//!
//! A report is one JSON document with keys in the fixed order the structs
//! declare.  Optional blocks are omitted entirely (never `null`) when their
//! analysis was not requested, so byte output depends only on the
//! configuration and tool version; the one exception is `separation.value`,
//! which is `null` exactly when the constant is unbounded because component
//! closures touch.  Points are `[x, y]` pairs.  Every constant block sits
//! inside a depth block that carries the depth and grid resolution it was
//! computed at, and every constant carries its witness geometry.

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: ConfigEcho,
    /// One block per depth 1..=config.depth, ascending.
    pub depths: Vec<DepthBlock>,
    /// Per-component table at the final depth (`shape` metric).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<ComponentRow>>,
    /// Similarity-class partition at the final depth (`classes` metric).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub similarity_classes: Option<ClassesBlock>,
    /// Point probes at the final depth (`topology` metric).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub topology: Option<TopologyBlock>,
    /// Wall-clock stage timings; only present when requested, since they
    /// vary run to run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<Vec<StageTiming>>,
}

/// The configuration the run actually used, defaults and overrides applied.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub custom: Option<CustomEcho>,
    pub depth: u32,
    pub resolution: u32,
    pub samples_per_edge: u32,
    /// Ball radii used by the radial scans (explicit or derived ladder).
    pub scales: Vec<f64>,
    pub metrics: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CustomEcho {
    pub maps: Vec<MapEcho>,
    pub seed: Vec<[f64; 2]>,
    pub carve: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MapEcho {
    pub scale: f64,
    pub rotation: f64,
    pub reflect: bool,
    pub translation: [f64; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct DepthBlock {
    pub depth: u32,
    /// Cells per unit of the grids used for grid-backed constants at this
    /// depth.
    pub resolution: u32,
    pub component_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separation: Option<SeparationBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub porosity: Option<RadialBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub component_in_ball: Option<ContainmentBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub similarity_class_count: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparationBlock {
    /// The separation constant; `null` when unbounded.
    pub value: Option<f64>,
    pub unbounded: bool,
    /// Component ids of the witness pair.
    pub witness: [usize; 2],
    pub witness_dist: f64,
    pub witness_points: [[f64; 2]; 2],
    /// Smallest pairwise component distance.
    pub min_gap: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PathBlock {
    /// Largest boundary path constant over all components at this depth.
    pub k: f64,
    /// Component attaining it.
    pub component: usize,
    pub witness: [[f64; 2]; 2],
    pub samples_per_edge: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessBall {
    pub center: [f64; 2],
    pub r: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RadialBlock {
    pub value: f64,
    pub witness: WitnessBall,
    pub scales: Vec<f64>,
    pub samples: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContainmentBlock {
    pub value: f64,
    pub witness: WitnessBall,
    pub scales: Vec<f64>,
    pub samples: usize,
    /// Fraction of sampled balls containing at least one whole component.
    pub containment_fraction: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasureBlock {
    pub area_sum: f64,
    pub perimeter_sum: f64,
    /// Seed area minus carved area; absent for seedless scenes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub area_estimate: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentRow {
    pub id: usize,
    pub generation: u32,
    pub carve_index: usize,
    /// Similarity class; present when the `classes` metric also ran.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<u32>,
    pub centroid: [f64; 2],
    pub area: f64,
    pub perimeter: f64,
    pub diameter: f64,
    pub inradius: f64,
    pub inradius_error: f64,
    pub roundness: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassesBlock {
    pub count: usize,
    pub tolerance: f64,
    /// Class index per component id.
    pub class_of: Vec<u32>,
    /// Component id of the first member of each class.
    pub representatives: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TopologyBlock {
    /// One probe per generation: the first component of that generation,
    /// probed at an interior point.
    pub probes: Vec<ProbeRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeRow {
    pub component: usize,
    pub generation: u32,
    /// Interior point of the component the probe evaluates at.
    pub point: [f64; 2],
    /// Winding of the component boundary around the point.
    pub winding: i32,
    /// Exact distance from the point to the boundary set.
    pub dist_to_boundary: f64,
    /// Lipschitz bound of the radial map based at the point.
    pub lipschitz_bound: f64,
    /// Grid label of the complementary component containing the point.
    pub label: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct StageTiming {
    pub stage: String,
    pub millis: f64,
}

impl Report {
    /// Serialize to the canonical byte form: pretty JSON, fixed key order,
    /// trailing newline.
    pub fn to_json_bytes(&self) -> Vec<u8> {
        let mut bytes = serde_json::to_vec_pretty(self).expect("report serialization is infallible");
        bytes.push(b'\n');
        bytes
    }
}
