//! SVG output for petal diagrams and multicrossing side views.
//!
//! Output is byte-deterministic: coordinates are printed with two decimals
//! and elements are emitted in segment/pair order. Angles follow SVG
//! coordinates (y down), so increasing angle is clockwise on screen.

use std::f64::consts::PI;
use std::fmt::Write as _;

use thiserror::Error;

use crate::crossing::{MulticrossingSpec, Validity};
use crate::petal::{direction_index, PetalDiagram, PetalViolation};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RenderError {
    #[error("canvas dimensions and sizes must be positive")]
    BadOptions,
    #[error("invalid petal diagram: {0:?}")]
    InvalidDiagram(Vec<PetalViolation>),
    #[error("invalid multicrossing: forbidden triples {0:?}")]
    InvalidSpec(Vec<[usize; 3]>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    pub width: f64,
    pub height: f64,
    pub stroke_width: f64,
    pub font_size: f64,
    /// List the classical pairs in a text block.
    pub legend: bool,
    /// Dot on the petal leading into segment 1.
    pub mark_start: bool,
    /// Height labels at both ends of each segment instead of one.
    pub label_both_ends: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            width: 1000.0,
            height: 1000.0,
            stroke_width: 4.0,
            font_size: 22.0,
            legend: true,
            mark_start: true,
            label_both_ends: false,
        }
    }
}

impl RenderOptions {
    fn check(&self) -> Result<(), RenderError> {
        let ok = [self.width, self.height, self.stroke_width, self.font_size]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0);
        if ok {
            Ok(())
        } else {
            Err(RenderError::BadOptions)
        }
    }
}

fn num(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn header(out: &mut String, o: &RenderOptions) {
    let (w, h) = (num(o.width), num(o.height));
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    out.push_str("<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
}

fn legend(out: &mut String, o: &RenderOptions, title: &str, lines: &[String]) {
    let fs = o.font_size;
    let _ = writeln!(
        out,
        "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"{}\">",
        num(fs)
    );
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\">{title}</text>",
        num(fs),
        num(1.5 * fs)
    );
    for (i, line) in lines.iter().enumerate() {
        let _ = writeln!(
            out,
            "<text class=\"legend-entry\" x=\"{}\" y=\"{}\">{line}</text>",
            num(fs),
            num(1.5 * fs + (i + 1) as f64 * 1.25 * fs)
        );
    }
    out.push_str("</g>\n");
}

struct Frame {
    cx: f64,
    cy: f64,
    r: f64,
}

impl Frame {
    fn at(&self, radius: f64, angle: f64) -> (f64, f64) {
        (
            self.cx + radius * angle.cos(),
            self.cy + radius * angle.sin(),
        )
    }
}

fn cubic_point(p: [(f64, f64); 4], t: f64) -> (f64, f64) {
    let s = 1.0 - t;
    let w = [s * s * s, 3.0 * s * s * t, 3.0 * s * t * t, t * t * t];
    (
        (0..4).map(|i| w[i] * p[i].0).sum(),
        (0..4).map(|i| w[i] * p[i].1).sum(),
    )
}

/// Draws `m` chords through the centre, `m` petal loops joining the exit of
/// each segment to the entry of the next, and the height rank of every
/// segment beside its entry end (and exit end when `label_both_ends`).
pub fn render_petal_svg(diagram: &PetalDiagram, o: &RenderOptions) -> Result<String, RenderError> {
    o.check()?;
    let violations = diagram.validate();
    if !violations.is_empty() {
        return Err(RenderError::InvalidDiagram(violations));
    }
    let m = diagram.petals;
    let step = PI / m as f64;
    let f = Frame {
        cx: o.width / 2.0,
        cy: o.height / 2.0,
        r: 0.24 * o.width.min(o.height),
    };
    // exit angle of segment k; its entry end is opposite.
    let exit = |k: usize| direction_index(k, m).unwrap() as f64 * step;
    let petal = |k: usize| {
        let a = exit(k);
        let b = a + step;
        let spread = step / 4.0;
        [
            f.at(f.r, a),
            f.at(2.2 * f.r, a - spread),
            f.at(2.2 * f.r, b + spread),
            f.at(f.r, b),
        ]
    };

    let mut out = String::new();
    header(&mut out, o);
    let _ = writeln!(
        out,
        "<g class=\"petals\" fill=\"none\" stroke=\"black\" stroke-width=\"{}\">",
        num(o.stroke_width)
    );
    for k in 1..=m {
        let p = petal(k);
        let _ = writeln!(
            out,
            "<path class=\"petal\" d=\"M {} {} C {} {} {} {} {} {}\"/>",
            num(p[0].0),
            num(p[0].1),
            num(p[1].0),
            num(p[1].1),
            num(p[2].0),
            num(p[2].1),
            num(p[3].0),
            num(p[3].1)
        );
    }
    out.push_str("</g>\n");

    let _ = writeln!(
        out,
        "<g class=\"segments\" stroke=\"black\" stroke-width=\"{}\">",
        num(o.stroke_width)
    );
    for k in 1..=m {
        let (x1, y1) = f.at(f.r, exit(k) + PI);
        let (x2, y2) = f.at(f.r, exit(k));
        let _ = writeln!(
            out,
            "<line class=\"segment\" data-segment=\"{k}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
            num(x1),
            num(y1),
            num(x2),
            num(y2)
        );
    }
    out.push_str("</g>\n");

    let _ = writeln!(
        out,
        "<g class=\"labels\" font-family=\"sans-serif\" font-size=\"{}\" text-anchor=\"middle\" dominant-baseline=\"central\" fill=\"#b00000\">",
        num(o.font_size)
    );
    for k in 1..=m {
        let h = diagram.height_of(k);
        let mut ends = vec![exit(k) + PI];
        if o.label_both_ends {
            ends.push(exit(k));
        }
        for angle in ends {
            // just inside the end, nudged off the chord
            let (x, y) = f.at(0.82 * f.r, angle + 0.08);
            let _ = writeln!(
                out,
                "<text class=\"height\" data-segment=\"{k}\" x=\"{}\" y=\"{}\">{h}</text>",
                num(x),
                num(y)
            );
        }
    }
    out.push_str("</g>\n");

    if o.mark_start {
        let (x, y) = cubic_point(petal(m), 0.5);
        let _ = writeln!(
            out,
            "<circle class=\"start\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"black\"/>",
            num(x),
            num(y),
            num(2.5 * o.stroke_width)
        );
    }

    if o.legend {
        let lines: Vec<String> = diagram
            .classical_pairs
            .iter()
            .map(|&[i, j]| {
                let (over, under) = if diagram.height_of(i) < diagram.height_of(j) {
                    (i, j)
                } else {
                    (j, i)
                };
                format!("{over} over {under}")
            })
            .collect();
        let title = if lines.is_empty() {
            "classical pairs: none"
        } else {
            "classical pairs"
        };
        legend(&mut out, o, title, &lines);
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Side view of a multicrossing: one horizontal strand per arc, stacked by
/// height rank (top strand highest), and one arc per virtual pair.
pub fn render_crossing_svg(
    spec: &MulticrossingSpec,
    o: &RenderOptions,
) -> Result<String, RenderError> {
    o.check()?;
    if let Validity::Invalid { offending } = spec.validate() {
        return Err(RenderError::InvalidSpec(offending));
    }
    let n = spec.n();
    let top = 0.2 * o.height;
    let gap = 0.6 * o.height / (n - 1) as f64;
    let x0 = 0.15 * o.width;
    let x1 = 0.6 * o.width;
    let y_of = |pos: usize| top + (spec.height_of(pos) - 1) as f64 * gap;

    let mut out = String::new();
    header(&mut out, o);
    let _ = writeln!(
        out,
        "<g class=\"strands\" stroke=\"black\" stroke-width=\"{}\">",
        num(o.stroke_width)
    );
    for pos in 1..=n {
        let y = num(y_of(pos));
        let _ = writeln!(
            out,
            "<line class=\"strand\" data-position=\"{pos}\" x1=\"{}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\"/>",
            num(x0),
            num(x1)
        );
    }
    out.push_str("</g>\n");

    let _ = writeln!(
        out,
        "<g class=\"labels\" font-family=\"sans-serif\" font-size=\"{}\" text-anchor=\"end\" dominant-baseline=\"central\">",
        num(o.font_size)
    );
    for pos in 1..=n {
        let _ = writeln!(
            out,
            "<text class=\"position\" x=\"{}\" y=\"{}\">{pos}</text>",
            num(x0 - 0.5 * o.font_size),
            num(y_of(pos))
        );
    }
    out.push_str("</g>\n");

    let _ = writeln!(
        out,
        "<g class=\"virtual-arcs\" fill=\"none\" stroke=\"#1f4fb0\" stroke-width=\"{}\">",
        num(o.stroke_width * 0.75)
    );
    let lane = (0.35 * o.width) / (n * (n - 1) / 2 + 1) as f64;
    for (idx, (i, j)) in spec.virtual_pairs().enumerate() {
        let (ya, yb) = (y_of(i), y_of(j));
        let xa = x1 + 0.5 * lane * (idx + 1) as f64;
        let bulge = xa + 0.25 * (ya - yb).abs();
        let _ = writeln!(
            out,
            "<path class=\"virtual-arc\" data-pair=\"{i},{j}\" d=\"M {} {} C {} {} {} {} {} {}\"/>",
            num(x1),
            num(ya),
            num(bulge),
            num(ya),
            num(bulge),
            num(yb),
            num(x1),
            num(yb)
        );
    }
    out.push_str("</g>\n");

    if o.legend {
        let classical: Vec<String> = spec
            .to_type()
            .map(|t| {
                t.resolve()
                    .iter()
                    .filter(|p| p.kind != crate::crossing::PairKind::Virtual)
                    .map(|p| p.to_string())
                    .collect()
            })
            .unwrap_or_default();
        legend(&mut out, o, &spec.to_string(), &classical);
    }
    out.push_str("</svg>\n");
    Ok(out)
}
