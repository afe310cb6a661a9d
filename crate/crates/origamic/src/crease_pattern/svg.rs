//! SVG rendering. Color follows the role tag, line style follows M/V.

use std::fmt::Write;

use super::{ColorTag, CreaseAssignment, CreasePattern};

/// Stroke table. Loaded from config by the CLI; the defaults follow the
/// usual convention of black for the tracked signal.
#[derive(Debug, Clone, PartialEq)]
pub struct SvgStyle {
    pub scale: f64,
    pub margin: f64,
    pub stroke_width: f64,
    pub border_width: f64,
    pub tracked_color: String,
    pub intermediate_color: String,
    pub extraneous_color: String,
    pub border_color: String,
    pub unassigned_color: String,
    pub valley_dash: String,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle {
            scale: 40.0,
            margin: 10.0,
            stroke_width: 1.0,
            border_width: 2.0,
            tracked_color: "#000000".into(),
            intermediate_color: "#888888".into(),
            extraneous_color: "#cc0000".into(),
            border_color: "#000000".into(),
            unassigned_color: "#3366cc".into(),
            valley_dash: "6,4".into(),
        }
    }
}

impl SvgStyle {
    /// Applies a `key = value` override; returns false for unknown keys or bad numbers.
    pub fn set(&mut self, key: &str, value: &str) -> bool {
        let num = || value.parse::<f64>().ok();
        match key {
            "scale" => num().map(|v| self.scale = v).is_some(),
            "margin" => num().map(|v| self.margin = v).is_some(),
            "stroke_width" => num().map(|v| self.stroke_width = v).is_some(),
            "border_width" => num().map(|v| self.border_width = v).is_some(),
            "tracked_color" => {
                self.tracked_color = value.into();
                true
            }
            "intermediate_color" => {
                self.intermediate_color = value.into();
                true
            }
            "extraneous_color" => {
                self.extraneous_color = value.into();
                true
            }
            "border_color" => {
                self.border_color = value.into();
                true
            }
            "unassigned_color" => {
                self.unassigned_color = value.into();
                true
            }
            "valley_dash" => {
                self.valley_dash = value.into();
                true
            }
            _ => false,
        }
    }
}

pub fn export_svg(pattern: &CreasePattern, style: &SvgStyle) -> Vec<u8> {
    let (lo, hi) = match pattern.bounds() {
        Some((lo, hi)) => (lo.to_f64(), hi.to_f64()),
        None => ((0.0, 0.0), (1.0, 1.0)),
    };
    let s = style.scale;
    let m = style.margin;
    let w = (hi.0 - lo.0) * s + 2.0 * m;
    let h = (hi.1 - lo.1) * s + 2.0 * m;
    // SVG y grows downward.
    let tx = |x: f64| (x - lo.0) * s + m;
    let ty = |y: f64| (hi.1 - y) * s + m;

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.3}" height="{h:.3}" viewBox="0 0 {w:.3} {h:.3}">"#
    );
    let _ = writeln!(
        out,
        r#"  <rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="none" stroke="{}" stroke-width="{}"/>"#,
        m,
        m,
        w - 2.0 * m,
        h - 2.0 * m,
        style.border_color,
        style.border_width
    );
    for c in pattern.creases() {
        let color = match (c.assignment, c.tag) {
            (CreaseAssignment::Border, _) => continue,
            (CreaseAssignment::Unassigned, _) => &style.unassigned_color,
            (_, ColorTag::Tracked) => &style.tracked_color,
            (_, ColorTag::Intermediate) => &style.intermediate_color,
            (_, ColorTag::Extraneous) => &style.extraneous_color,
        };
        let (p, q) = (pattern.vertices()[c.v[0]].to_f64(), pattern.vertices()[c.v[1]].to_f64());
        let dash = if c.assignment == CreaseAssignment::Valley {
            format!(r#" stroke-dasharray="{}""#, style.valley_dash)
        } else {
            String::new()
        };
        let _ = writeln!(
            out,
            r#"  <line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{}" stroke-width="{}"{}/>"#,
            tx(p.0),
            ty(p.1),
            tx(q.0),
            ty(q.1),
            color,
            style.stroke_width,
            dash
        );
    }
    out.push_str("</svg>\n");
    out.into_bytes()
}
