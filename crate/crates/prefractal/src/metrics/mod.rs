//! Scale-invariant constants of a carved scene.
//!
//! Every quantity in this module is a ratio of two lengths (or an area
//! normalized by a squared length), so rescaling the scene by any global
//! similarity leaves it unchanged. Each submodule exposes one family:
//!
//! * [`shape`]: per-component diameter, inradius, roundness.
//! * [`separation`]: the worst ratio `min(diam V, diam W) / dist(V, W)`
//!   over component pairs, or `Unbounded` when components touch.
//! * [`radial`]: ball-based constants measured from boundary points, namely
//!   porosity (how far inside a ball one can retreat from the boundary set)
//!   and the contained-component ratio.
//! * [`path`]: boundary geodesics, the chord-to-arc constant of a single
//!   component, and rerouting of a polyline path around components.
//! * [`classes`]: grouping of components by shape up to similarity.
//! * [`measure`]: compensated area and perimeter sums.

pub mod classes;
pub mod measure;
pub mod path;
pub mod radial;
pub mod separation;
pub mod shape;

pub use classes::{similarity_classes, SimilarityClasses};
pub use measure::{measure_summary, MeasureSummary};
pub use path::{boundary_path_constant, push_path_to_boundary, PathReport};
pub use radial::{
    component_in_ball_constant, porosity_constant, ContainmentConstant, RadialConstant,
    RadialWitness,
};
pub use separation::{separation_constant, SeparationReport, SeparationValue};
pub use shape::{shape_metrics, ShapeMetrics};
