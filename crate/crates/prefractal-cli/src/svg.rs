//! Static SVG rendering of a scene and its witnesses.
//!
//! The drawing is a pure function of the scene and the report: coordinates
//! are emitted with fixed precision in a fixed element order, so equal
//! inputs give byte-identical files.  The boundary set is stroked black,
//! components are filled by similarity class (falling back to generation
//! when the class partition was not computed), and the witnesses from the
//! final depth block are overlaid: the separation pair, the worst porosity
//! ball, and the path-constant pair, each annotated with a `<title>`.

use std::fmt::Write as _;

use prefractal::geom::Vec2;
use prefractal::ifs::Scene;

use crate::report::Report;

/// Fill palette, one color per class index modulo the palette size.
const PALETTE: [&str; 12] = [
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1", "#76b7b2", "#edc948", "#ff9da7",
    "#9c755f", "#bab0ac", "#86bcb6", "#d37295",
];

const SEPARATION_COLOR: &str = "#d62728";
const POROSITY_COLOR: &str = "#1f77b4";
const PATH_COLOR: &str = "#2ca02c";

/// Render the scene with the report's witness overlays.
pub fn render_svg(scene: &Scene, report: &Report) -> String {
    let bounds = scene.bounds;
    let diam = bounds.diameter().max(1e-9);
    let margin = 0.05 * diam;
    let min = Vec2 { x: bounds.min.x - margin, y: bounds.min.y - margin };
    let max = Vec2 { x: bounds.max.x + margin, y: bounds.max.y + margin };
    let frame = Frame { min, max_y: max.y };
    let (w, h) = (max.x - min.x, max.y - min.y);

    let hairline = 0.0015 * diam;
    let overlay_width = 0.004 * diam;
    let dot = 0.006 * diam;

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {} {}\" width=\"800\">",
        num(w),
        num(h)
    );
    let _ = writeln!(
        out,
        "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>",
        num(w),
        num(h)
    );

    let class_of = report.similarity_classes.as_ref().map(|c| c.class_of.as_slice());
    let _ = writeln!(out, "<g id=\"components\" stroke=\"none\">");
    for comp in &scene.components {
        let class = match class_of {
            Some(classes) => classes.get(comp.id).copied().unwrap_or(comp.generation),
            None => comp.generation,
        };
        let color = PALETTE[class as usize % PALETTE.len()];
        let _ = write!(out, "<path d=\"{}\" fill=\"{color}\">", polygon_path(&frame, comp.polygon.verts()));
        let _ = writeln!(
            out,
            "<title>component {} generation {} class {class}</title></path>",
            comp.id, comp.generation
        );
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(
        out,
        "<g id=\"boundary\" fill=\"none\" stroke=\"#000000\" stroke-width=\"{}\">",
        num(hairline)
    );
    for polyline in &scene.boundary {
        let _ = writeln!(out, "<path d=\"{}\"/>", chain_path(&frame, &polyline.points, polyline.closed));
    }
    let _ = writeln!(out, "</g>");

    if let Some(block) = report.depths.last() {
        let mut overlays = String::new();
        if let Some(sep) = &block.separation {
            let a = frame.map(point(sep.witness_points[0]));
            let b = frame.map(point(sep.witness_points[1]));
            let title = if sep.unbounded {
                format!(
                    "separation witness: components {} and {} touch (dist = {})",
                    sep.witness[0],
                    sep.witness[1],
                    num(sep.witness_dist)
                )
            } else {
                format!(
                    "separation witness: components {} and {}, dist = {}, C = {}",
                    sep.witness[0],
                    sep.witness[1],
                    num(sep.witness_dist),
                    num(sep.value.unwrap_or(f64::NAN))
                )
            };
            let _ = writeln!(
                overlays,
                "<g stroke=\"{SEPARATION_COLOR}\" fill=\"{SEPARATION_COLOR}\" stroke-width=\"{}\">",
                num(overlay_width)
            );
            let _ = writeln!(
                overlays,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
                num(a.x),
                num(a.y),
                num(b.x),
                num(b.y)
            );
            let _ = writeln!(
                overlays,
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/><circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
                num(a.x),
                num(a.y),
                num(dot),
                num(b.x),
                num(b.y),
                num(dot)
            );
            let _ = writeln!(overlays, "<title>{title}</title></g>");
        }
        if let Some(porosity) = &block.porosity {
            let c = frame.map(point(porosity.witness.center));
            let _ = writeln!(
                overlays,
                "<g stroke=\"{POROSITY_COLOR}\" fill=\"none\" stroke-width=\"{}\" stroke-dasharray=\"{} {}\">",
                num(overlay_width),
                num(2.0 * overlay_width),
                num(2.0 * overlay_width)
            );
            let _ = writeln!(
                overlays,
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
                num(c.x),
                num(c.y),
                num(porosity.witness.r)
            );
            let _ = writeln!(
                overlays,
                "<title>porosity witness: r = {}, ratio = {}</title></g>",
                num(porosity.witness.r),
                num(porosity.witness.ratio)
            );
        }
        if let Some(path) = &block.path {
            let a = frame.map(point(path.witness[0]));
            let b = frame.map(point(path.witness[1]));
            let _ = writeln!(
                overlays,
                "<g stroke=\"{PATH_COLOR}\" fill=\"{PATH_COLOR}\" stroke-width=\"{}\">",
                num(overlay_width)
            );
            let _ = writeln!(
                overlays,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
                num(a.x),
                num(a.y),
                num(b.x),
                num(b.y)
            );
            let _ = writeln!(
                overlays,
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/><circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
                num(a.x),
                num(a.y),
                num(dot),
                num(b.x),
                num(b.y),
                num(dot)
            );
            let _ = writeln!(
                overlays,
                "<title>path constant witness: component {}, k = {}</title></g>",
                path.component,
                num(path.k)
            );
        }
        if !overlays.is_empty() {
            let _ = writeln!(out, "<g id=\"witnesses\">{overlays}</g>");
        }
    }

    out.push_str("</svg>\n");
    out
}

/// World-to-SVG mapping: translate to the margin origin and flip y.
struct Frame {
    min: Vec2,
    max_y: f64,
}

impl Frame {
    fn map(&self, p: Vec2) -> Vec2 {
        Vec2 { x: p.x - self.min.x, y: self.max_y - p.y }
    }
}

fn point(p: [f64; 2]) -> Vec2 {
    Vec2 { x: p[0], y: p[1] }
}

/// Fixed-precision coordinate text; `-0.000000` normalized to `0.000000`.
fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn polygon_path(frame: &Frame, verts: &[Vec2]) -> String {
    chain_path(frame, verts, true)
}

fn chain_path(frame: &Frame, points: &[Vec2], closed: bool) -> String {
    let mut d = String::new();
    for (i, &p) in points.iter().enumerate() {
        let q = frame.map(p);
        let _ = write!(d, "{}{},{}", if i == 0 { "M" } else { " L" }, num(q.x), num(q.y));
    }
    if closed {
        d.push_str(" Z");
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use prefractal::ifs::{build_preset, generate_scene};

    use crate::report::{
        ConfigEcho, DepthBlock, PathBlock, RadialBlock, Report, SeparationBlock, WitnessBall,
        SCHEMA_VERSION,
    };

    fn bare_report(depth: u32, resolution: u32) -> Report {
        Report {
            schema_version: SCHEMA_VERSION,
            tool_version: "test".into(),
            config: ConfigEcho {
                preset: Some("sierpinski-carpet".into()),
                custom: None,
                depth,
                resolution,
                samples_per_edge: 4,
                scales: vec![],
                metrics: vec![],
            },
            depths: vec![DepthBlock {
                depth,
                resolution,
                component_count: 0,
                separation: None,
                path: None,
                porosity: None,
                component_in_ball: None,
                measure: None,
                similarity_class_count: None,
            }],
            components: None,
            similarity_classes: None,
            topology: None,
            timings_ms: None,
        }
    }

    #[test]
    fn carpet_depth_two_has_nine_filled_components() {
        let scene = generate_scene(&build_preset("sierpinski-carpet").unwrap(), 2).unwrap();
        let svg = render_svg(&scene, &bare_report(2, 81));
        assert_eq!(svg.matches("<path d=").count(), 9 + scene.boundary.len());
        // Without a class partition fills fall back to generation colors:
        // one generation-1 component, eight generation-2 components.
        assert_eq!(svg.matches(&format!("fill=\"{}\"", PALETTE[1])).count(), 1);
        assert_eq!(svg.matches(&format!("fill=\"{}\"", PALETTE[2])).count(), 8);
        assert!(svg.contains("stroke=\"#000000\""));
        assert!(!svg.contains("id=\"witnesses\""));
        assert!(svg.starts_with("<svg xmlns="));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn class_partition_colors_components_uniformly() {
        let scene = generate_scene(&build_preset("sierpinski-carpet").unwrap(), 2).unwrap();
        let mut report = bare_report(2, 81);
        report.similarity_classes = Some(crate::report::ClassesBlock {
            count: 1,
            tolerance: 1e-6,
            class_of: vec![0; 9],
            representatives: vec![0],
        });
        let svg = render_svg(&scene, &report);
        assert_eq!(svg.matches("class 0</title>").count(), 9);
    }

    #[test]
    fn witness_overlays_are_annotated() {
        let scene = generate_scene(&build_preset("sierpinski-carpet").unwrap(), 2).unwrap();
        let mut report = bare_report(2, 81);
        report.depths[0].separation = Some(SeparationBlock {
            value: Some(std::f64::consts::SQRT_2),
            unbounded: false,
            witness: [0, 1],
            witness_dist: 1.0 / 3.0,
            witness_points: [[1.0 / 3.0, 2.0 / 3.0], [1.0 / 3.0, 1.0 / 3.0]],
            min_gap: 1.0 / 3.0,
        });
        report.depths[0].porosity = Some(RadialBlock {
            value: 0.5,
            witness: WitnessBall { center: [0.5, 1.0], r: 0.25, ratio: 0.5 },
            scales: vec![0.25],
            samples: 10,
        });
        report.depths[0].path = Some(PathBlock {
            k: 2.0,
            component: 0,
            witness: [[1.0 / 3.0, 0.5], [2.0 / 3.0, 0.5]],
            samples_per_edge: 4,
        });
        let svg = render_svg(&scene, &report);
        assert!(svg.contains("id=\"witnesses\""));
        assert!(svg.contains("separation witness: components 0 and 1"));
        assert!(svg.contains("porosity witness: r = 0.250000"));
        assert!(svg.contains("path constant witness: component 0, k = 2.000000"));
        assert_eq!(svg.matches("<line").count(), 2);
    }

    #[test]
    fn rendering_is_deterministic() {
        let scene = generate_scene(&build_preset("sierpinski-gasket").unwrap(), 3).unwrap();
        let report = bare_report(3, 64);
        assert_eq!(render_svg(&scene, &report), render_svg(&scene, &report));
    }

    #[test]
    fn negative_zero_is_normalized() {
        assert_eq!(num(-0.0), "0.000000");
        assert_eq!(num(-1e-9), "0.000000");
        assert_eq!(num(0.5), "0.500000");
    }
}
