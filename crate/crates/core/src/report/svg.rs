//! SVG rendering of reinforcement factors.
//!
//! Each track has a vertical median line at `CENTER_X`. The upward factor is
//! a bar extending right, the downward factor a bar extending left, both
//! `factor * PX_PER_UNIT` pixels long. The null box-and-whiskers of each bar
//! sits just above it on the same horizontal axis, so a significant bar
//! visibly runs past its upper whisker.

use std::fmt::Write;

use super::{AttributeReport, CellReport, EvaluationReport};
use crate::error::{Error, Result};

/// Pixels per unit of reinforcement factor.
pub const PX_PER_UNIT: f64 = 200.0;

const LABEL_W: f64 = 190.0;
const MARGIN: f64 = 20.0;
const CENTER_X: f64 = LABEL_W + MARGIN + PX_PER_UNIT;
const WIDTH: f64 = CENTER_X + PX_PER_UNIT + 2.0 * MARGIN + 20.0;
const HEADER_H: f64 = 56.0;
const TRACK_H: f64 = 44.0;
const FOOTER_H: f64 = 36.0;
const BOX_H: f64 = 10.0;
const BAR_H: f64 = 14.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Palette {
    /// Red for upward, blue for downward.
    #[default]
    Standard,
    /// Orange/blue pair distinguishable under common color-vision deficiencies.
    ColorBlind,
}

impl Palette {
    fn up(self) -> &'static str {
        match self {
            Palette::Standard => "#d62728",
            Palette::ColorBlind => "#e69f00",
        }
    }

    fn down(self) -> &'static str {
        match self {
            Palette::Standard => "#1f77b4",
            Palette::ColorBlind => "#0072b2",
        }
    }
}

fn esc(s: &str) -> String {
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

fn px(x: f64) -> String {
    format!("{x:.2}")
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Up,
    Down,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Up => 1.0,
            Side::Down => -1.0,
        }
    }

    fn class(self) -> &'static str {
        match self {
            Side::Up => "up",
            Side::Down => "down",
        }
    }
}

struct Canvas {
    body: String,
    palette: Palette,
}

impl Canvas {
    fn x(&self, side: Side, factor: f64) -> f64 {
        CENTER_X + side.sign() * factor * PX_PER_UNIT
    }

    /// Null box above the bar, then the bar (or an `n/a` note).
    fn cell(&mut self, top: f64, side: Side, cell: &CellReport) {
        let color = match side {
            Side::Up => self.palette.up(),
            Side::Down => self.palette.down(),
        };
        let cls = side.class();
        if let Some(b) = &cell.null_box {
            let y_mid = top + BOX_H / 2.0;
            let (xl, xh) = (self.x(side, b.whisker_low), self.x(side, b.whisker_high));
            let (x1, x3) = (self.x(side, b.q1), self.x(side, b.q3));
            let xm = self.x(side, b.median);
            let _ = write!(
                self.body,
                r##"<g class="null-box {cls}"><line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#444"/><line x1="{xl}" y1="{}" x2="{xl}" y2="{}" stroke="#444"/><line x1="{xh}" y1="{}" x2="{xh}" y2="{}" stroke="#444"/><rect x="{}" y="{}" width="{}" height="{}" fill="#eeeeee" stroke="#444"/><line x1="{xm}" y1="{}" x2="{xm}" y2="{}" stroke="#000"/></g>"##,
                px(xl),
                px(y_mid),
                px(xh),
                px(y_mid),
                px(top),
                px(top + BOX_H),
                px(top),
                px(top + BOX_H),
                px(x1.min(x3)),
                px(top),
                px((x3 - x1).abs()),
                px(BOX_H),
                px(top),
                px(top + BOX_H),
                xl = px(xl),
                xh = px(xh),
                xm = px(xm),
            );
        }
        let bar_top = top + BOX_H + 2.0;
        match cell.factor {
            Some(f) => {
                let len = f * PX_PER_UNIT;
                let x = if side == Side::Up { CENTER_X } else { CENTER_X - len };
                let sig = if cell.significant { " significant" } else { "" };
                let _ = write!(
                    self.body,
                    r#"<rect class="bar {cls}{sig}" x="{}" y="{}" width="{}" height="{}" fill="{color}" data-factor="{}"/>"#,
                    px(x),
                    px(bar_top),
                    px(len),
                    px(BAR_H),
                    f
                );
                let (tx, anchor) = match side {
                    Side::Up => (CENTER_X + len + 4.0, "start"),
                    Side::Down => (CENTER_X - len - 4.0, "end"),
                };
                let star = if cell.significant { "*" } else { "" };
                let _ = write!(
                    self.body,
                    r#"<text x="{}" y="{}" font-size="10" text-anchor="{anchor}">{:.2}{star}</text>"#,
                    px(tx),
                    px(bar_top + BAR_H - 3.0),
                    f
                );
            }
            None => {
                let (tx, anchor) = match side {
                    Side::Up => (CENTER_X + 6.0, "start"),
                    Side::Down => (CENTER_X - 6.0, "end"),
                };
                let _ = write!(
                    self.body,
                    r##"<text class="na {cls}" x="{}" y="{}" font-size="10" fill="#777" text-anchor="{anchor}">n/a</text>"##,
                    px(tx),
                    px(bar_top + BAR_H - 3.0)
                );
            }
        }
    }

    fn track_label(&mut self, top: f64, text: &str, sub: Option<&str>) {
        let _ = write!(
            self.body,
            r#"<text x="{}" y="{}" font-size="12" text-anchor="end">{}</text>"#,
            px(LABEL_W),
            px(top + 18.0),
            esc(text)
        );
        if let Some(sub) = sub {
            let _ = write!(
                self.body,
                r##"<text x="{}" y="{}" font-size="10" fill="#555" text-anchor="end">{}</text>"##,
                px(LABEL_W),
                px(top + 32.0),
                esc(sub)
            );
        }
    }

    fn finish(self, title: &str, subtitle: &str, tracks: usize) -> String {
        let height = HEADER_H + TRACK_H * tracks as f64 + FOOTER_H;
        let plot_top = HEADER_H - 6.0;
        let plot_bottom = HEADER_H + TRACK_H * tracks as f64;
        let mut s = String::new();
        let _ = write!(
            s,
            r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="Helvetica, Arial, sans-serif">"#,
            w = px(WIDTH),
            h = px(height)
        );
        let _ = write!(
            s,
            r##"<rect width="100%" height="100%" fill="white"/><text x="{}" y="22" font-size="15" font-weight="bold">{}</text><text x="{}" y="40" font-size="11" fill="#333">{}</text>"##,
            px(MARGIN),
            esc(title),
            px(MARGIN),
            esc(subtitle)
        );
        // axis ticks at quarter steps on both sides
        for i in -4..=4 {
            let x = CENTER_X + i as f64 * PX_PER_UNIT / 4.0;
            let _ = write!(
                s,
                r##"<line class="grid" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#e5e5e5"/><text x="{}" y="{}" font-size="9" text-anchor="middle">{:.2}</text>"##,
                px(x),
                px(plot_top),
                px(x),
                px(plot_bottom),
                px(x),
                px(plot_bottom + 14.0),
                (i as f64 / 4.0).abs()
            );
        }
        s.push_str(&self.body);
        let _ = write!(
            s,
            r##"<line class="median-line" x1="{c}" y1="{}" x2="{c}" y2="{}" stroke="#000" stroke-width="1.5"/>"##,
            px(plot_top),
            px(plot_bottom),
            c = px(CENTER_X)
        );
        let _ = write!(
            s,
            r#"<text x="{}" y="{}" font-size="10" fill="{}" text-anchor="end">downward reinforcement</text><text x="{}" y="{}" font-size="10" fill="{}">upward reinforcement</text>"#,
            px(CENTER_X - 8.0),
            px(plot_bottom + 28.0),
            self.palette.down(),
            px(CENTER_X + 8.0),
            px(plot_bottom + 28.0),
            self.palette.up()
        );
        s.push_str("</svg>\n");
        s
    }
}

fn attribute_svg(a: &AttributeReport, palette: Palette) -> String {
    let mut c = Canvas { body: String::new(), palette };
    for (t, v) in a.values.iter().enumerate() {
        let top = HEADER_H + TRACK_H * t as f64;
        let _ = write!(c.body, r#"<g class="track" data-value="{}">"#, v.value);
        c.track_label(top, &format!("value {}", v.value), None);
        c.cell(top, Side::Down, &v.down);
        c.cell(top, Side::Up, &v.up);
        c.body.push_str("</g>");
    }
    let subtitle = format!(
        "Kano type: {} | bars: reinforcement factor per value, boxes: null distribution",
        a.label
    );
    c.finish(&a.name, &subtitle, a.values.len())
}

/// Value-level plot for one attribute of the report.
pub fn render_attribute_plot(report: &EvaluationReport, attribute: &str, palette: Palette) -> Result<String> {
    report
        .attribute(attribute)
        .map(|a| attribute_svg(a, palette))
        .ok_or_else(|| Error::UnknownAttribute(attribute.to_owned()))
}

/// Attribute-level plot: one track per attribute, strongest first.
pub fn render_summary_plot(report: &EvaluationReport, palette: Palette) -> String {
    let strength = |a: &AttributeReport| {
        a.up_aggregate.factor.unwrap_or(-1.0).max(a.down_aggregate.factor.unwrap_or(-1.0))
    };
    let mut order: Vec<&AttributeReport> = report.attributes.iter().collect();
    order.sort_by(|a, b| strength(b).total_cmp(&strength(a)));

    let mut c = Canvas { body: String::new(), palette };
    for (t, a) in order.iter().enumerate() {
        let top = HEADER_H + TRACK_H * t as f64;
        let _ = write!(c.body, r#"<g class="track" data-attribute="{}">"#, esc(&a.name));
        c.track_label(top, &a.name, Some(a.label.as_str()));
        c.cell(top, Side::Down, &a.down_aggregate);
        c.cell(top, Side::Up, &a.up_aggregate);
        c.body.push_str("</g>");
    }
    let subtitle = format!(
        "attribute-level reinforcement (n = {}, k = {}, {} resamples, alpha = {})",
        report.dataset.n_labeled, report.params.effective_k, report.params.resamples, report.params.alpha
    );
    c.finish("Reinforcement factors", &subtitle, order.len())
}
