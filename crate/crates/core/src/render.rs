//! SVG rendering of embeddings. Output is deterministic: the same embedding
//! and options always produce byte-identical markup.

use crate::construct::Embedding;
use crate::geom::Coord;
use std::fmt::Write;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    /// Pixels per unit length.
    pub scale: f64,
    pub show_labels: bool,
    pub edge_color: String,
    pub vertex_color: String,
    /// Vertex marker radius in pixels.
    pub vertex_radius: f64,
    /// Padding around the drawing in pixels.
    pub margin: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            scale: 60.0,
            show_labels: false,
            edge_color: "gray".to_string(),
            vertex_color: "red".to_string(),
            vertex_radius: 3.0,
            margin: 12.0,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RenderError {
    #[error("cannot render an embedding with no points")]
    EmptyEmbedding,
}

/// Renders the embedding as an SVG 1.1 document. Mathematical y grows upward,
/// pixel y downward, so the drawing is flipped about the horizontal axis and
/// fit to a tight bounding box plus the margin.
pub fn render_svg(e: &Embedding, opts: &RenderOptions) -> Result<String, RenderError> {
    if e.points.is_empty() {
        return Err(RenderError::EmptyEmbedding);
    }

    let mut min = Coord::new(f64::INFINITY, f64::INFINITY);
    let mut max = Coord::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in e.points.values() {
        min.x = min.x.min(p.x);
        min.y = min.y.min(p.y);
        max.x = max.x.max(p.x);
        max.y = max.y.max(p.y);
    }
    let to_px = |p: Coord| {
        (
            (p.x - min.x) * opts.scale + opts.margin,
            (max.y - p.y) * opts.scale + opts.margin,
        )
    };
    let width = (max.x - min.x) * opts.scale + 2.0 * opts.margin;
    let height = (max.y - min.y) * opts.scale + 2.0 * opts.margin;

    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{width:.3}\" height=\"{height:.3}\" viewBox=\"0 0 {width:.3} {height:.3}\">"
    );

    let _ = writeln!(
        svg,
        "  <g stroke=\"{}\" stroke-width=\"2\" stroke-linecap=\"round\">",
        xml_escape(&opts.edge_color)
    );
    for (a, b) in &e.edges {
        let (Some(pa), Some(pb)) = (e.coord(a), e.coord(b)) else {
            continue;
        };
        let (x1, y1) = to_px(pa);
        let (x2, y2) = to_px(pb);
        let _ = writeln!(
            svg,
            "    <line x1=\"{x1:.9}\" y1=\"{y1:.9}\" x2=\"{x2:.9}\" y2=\"{y2:.9}\"/>"
        );
    }
    svg.push_str("  </g>\n");

    let _ = writeln!(svg, "  <g fill=\"{}\">", xml_escape(&opts.vertex_color));
    for p in e.points.values() {
        let (cx, cy) = to_px(*p);
        let _ = writeln!(
            svg,
            "    <circle cx=\"{cx:.9}\" cy=\"{cy:.9}\" r=\"{:.3}\"/>",
            opts.vertex_radius
        );
    }
    svg.push_str("  </g>\n");

    if opts.show_labels {
        svg.push_str("  <g font-family=\"sans-serif\" font-size=\"10\" fill=\"black\">\n");
        for (name, p) in &e.points {
            let (x, y) = to_px(*p);
            let _ = writeln!(
                svg,
                "    <text x=\"{:.9}\" y=\"{:.9}\">{}</text>",
                x + opts.vertex_radius + 1.0,
                y - opts.vertex_radius - 1.0,
                xml_escape(name)
            );
        }
        svg.push_str("  </g>\n");
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}
