//! Compensated area and perimeter sums over components.
//!
//! Deep scenes sum tens of thousands of tiny areas, so plain accumulation
//! loses digits; Neumaier's variant of Kahan summation keeps the totals
//! accurate to the last few ulps regardless of term count or ordering
//! spread.

use crate::ifs::Scene;

/// Totals over all components of a scene.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureSummary {
    pub component_count: usize,
    /// Sum of component areas.
    pub area_sum: f64,
    /// Sum of component perimeters.
    pub perimeter_sum: f64,
    /// Seed area minus `area_sum`: the area of the uncarved material.
    /// `None` when the scene has no seed polygon.
    pub area_estimate: Option<f64>,
}

/// Neumaier compensated sum.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Sums component areas and perimeters; scale covariant (areas by the square
/// of the factor, perimeters linearly).
pub fn measure_summary(scene: &Scene) -> MeasureSummary {
    let area_sum = compensated_sum(scene.components.iter().map(|c| c.polygon.area()));
    let perimeter_sum =
        compensated_sum(scene.components.iter().map(|c| c.polygon.perimeter()));
    MeasureSummary {
        component_count: scene.components.len(),
        area_sum,
        perimeter_sum,
        area_estimate: scene.seed.as_ref().map(|s| s.area() - area_sum),
    }
}
