//! Hand-rolled SVG output for Adams-style charts: classes plotted at
//! `(t - s, s)`, vertical segments for v0-multiplication, slope-1/2
//! segments for v1 and slope-1/6 segments for v2. The generator-table
//! variant uses the printed key: circles for generators over
//! `F2[v0^{+-1}, v1]`, triangles for generators over the full ring,
//! with hidden-extension generators drawn in red.

use std::fmt::Write as _;

use crate::ext::ExtChart;
use crate::milnor::q_degree;
use crate::tables::{GenRing, GeneratorTable};

const CELL: f64 = 28.0;
const MARGIN: f64 = 46.0;
const DOT: f64 = 3.4;

struct Canvas {
    body: String,
    width: f64,
    height: f64,
    max_s: f64,
}

impl Canvas {
    fn new(max_stem: f64, max_s: f64) -> Self {
        Canvas {
            body: String::new(),
            width: MARGIN * 2.0 + max_stem * CELL,
            height: MARGIN * 2.0 + max_s * CELL,
            max_s,
        }
    }

    fn xy(&self, stem: f64, s: f64) -> (f64, f64) {
        (
            MARGIN + stem * CELL,
            MARGIN + (self.max_s - s) * CELL,
        )
    }

    fn grid(&mut self, max_stem: i64, max_s: i64) {
        for n in 0..=max_stem {
            let (x, y0) = self.xy(n as f64, 0.0);
            let (_, y1) = self.xy(n as f64, max_s as f64);
            let _ = writeln!(
                self.body,
                r##"<line x1="{x:.1}" y1="{y0:.1}" x2="{x:.1}" y2="{y1:.1}" stroke="#eee"/>"##
            );
            if n % 2 == 0 {
                let _ = writeln!(
                    self.body,
                    r##"<text x="{x:.1}" y="{:.1}" font-size="9" text-anchor="middle" fill="#666">{n}</text>"##,
                    y0 + 16.0
                );
            }
        }
        for s in 0..=max_s {
            let (x0, y) = self.xy(0.0, s as f64);
            let (x1, _) = self.xy(max_stem as f64, s as f64);
            let _ = writeln!(
                self.body,
                r##"<line x1="{x0:.1}" y1="{y:.1}" x2="{x1:.1}" y2="{y:.1}" stroke="#eee"/>"##
            );
            let _ = writeln!(
                self.body,
                r##"<text x="{:.1}" y="{:.1}" font-size="9" text-anchor="end" fill="#666">{s}</text>"##,
                x0 - 8.0,
                y + 3.0
            );
        }
    }

    fn line(&mut self, from: (f64, f64), to: (f64, f64), color: &str) {
        let (x0, y0) = self.xy(from.0, from.1);
        let (x1, y1) = self.xy(to.0, to.1);
        let _ = writeln!(
            self.body,
            r##"<line x1="{x0:.1}" y1="{y0:.1}" x2="{x1:.1}" y2="{y1:.1}" stroke="{color}" stroke-width="1"/>"##
        );
    }

    fn dot(&mut self, at: (f64, f64), color: &str) {
        let (x, y) = self.xy(at.0, at.1);
        let _ = writeln!(
            self.body,
            r##"<circle cx="{x:.1}" cy="{y:.1}" r="{DOT}" fill="{color}"/>"##
        );
    }

    fn circle(&mut self, at: (f64, f64), color: &str) {
        let (x, y) = self.xy(at.0, at.1);
        let _ = writeln!(
            self.body,
            r##"<circle cx="{x:.1}" cy="{y:.1}" r="{DOT}" fill="white" stroke="{color}" stroke-width="1.3"/>"##
        );
    }

    fn triangle(&mut self, at: (f64, f64), color: &str) {
        let (x, y) = self.xy(at.0, at.1);
        let r = DOT + 1.2;
        let _ = writeln!(
            self.body,
            r##"<polygon points="{:.1},{:.1} {:.1},{:.1} {:.1},{:.1}" fill="white" stroke="{color}" stroke-width="1.3"/>"##,
            x,
            y - r,
            x - r,
            y + r * 0.8,
            x + r,
            y + r * 0.8
        );
    }

    fn finish(self, title: &str) -> String {
        format!(
            concat!(
                r##"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" "##,
                r##"viewBox="0 0 {w:.0} {h:.0}">"##,
                "\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
                r##"<text x="{tx:.1}" y="18" font-size="12" fill="#222">{title}</text>"##,
                "\n{body}</svg>\n"
            ),
            w = self.width,
            h = self.height,
            tx = MARGIN,
            title = title,
            body = self.body
        )
    }
}

/// Offset stacked classes in a cell slightly so multiplicities stay
/// visible.
fn spread(stem: i64, s: u32, index: usize, count: usize) -> (f64, f64) {
    let shift = if count <= 1 {
        0.0
    } else {
        (index as f64 - (count as f64 - 1.0) / 2.0) * 0.22
    };
    (stem as f64 + shift, s as f64)
}

/// Render an Ext chart: one dot per basis class, with v0/v1/v2 edges.
pub fn render_chart_svg(chart: &ExtChart, title: &str) -> String {
    let max_stem = chart
        .cells
        .iter()
        .filter(|(_, c)| c.dim > 0)
        .map(|(&(s, t), _)| t - s as i64)
        .max()
        .unwrap_or(0)
        .max(1);
    let max_s = chart.s_max as i64;
    let mut canvas = Canvas::new(max_stem as f64, max_s as f64);
    canvas.grid(max_stem, max_s);
    let colors = ["#444", "#2b6cb0", "#c05621"];
    // edges first, dots on top
    for (&(s, t), cell) in &chart.cells {
        let stem = t - s as i64;
        if stem < 0 || stem > max_stem {
            continue;
        }
        for i in 0..chart.ring.q_count() as u8 {
            let Some(mat) = chart.vmap(i, s, t) else {
                continue;
            };
            let tt = t + q_degree(i);
            let t_stem = tt - (s + 1) as i64;
            let t_dim = chart.dim(s + 1, tt);
            for col in 0..cell.dim {
                for row in 0..t_dim {
                    if mat.get(row, col) {
                        canvas.line(
                            spread(stem, s, col, cell.dim),
                            spread(t_stem, s + 1, row, t_dim),
                            colors[i as usize],
                        );
                    }
                }
            }
        }
    }
    for (&(s, t), cell) in &chart.cells {
        let stem = t - s as i64;
        if stem < 0 || stem > max_stem {
            continue;
        }
        for k in 0..cell.dim {
            canvas.dot(spread(stem, s, k, cell.dim), "#111");
        }
    }
    canvas.finish(title)
}

/// Render a generator table in the chart convention: circles for
/// `F2[v0^{+-1}, v1]`-generators, triangles for full-ring generators,
/// red for generators carrying a hidden v2-extension.
pub fn render_table_svg(table: &GeneratorTable) -> String {
    let gens = table.expanded_gens();
    let max_stem = gens.iter().map(|g| g.t - g.s as i64).max().unwrap_or(1);
    let max_s = gens.iter().map(|g| g.s as i64).max().unwrap_or(0) + 1;
    let mut canvas = Canvas::new(max_stem as f64, max_s as f64);
    canvas.grid(max_stem, max_s);
    let mut per_cell: std::collections::BTreeMap<(i64, u32), Vec<usize>> =
        std::collections::BTreeMap::new();
    for (i, g) in gens.iter().enumerate() {
        per_cell.entry((g.t - g.s as i64, g.s)).or_default().push(i);
    }
    for ((stem, s), idxs) in &per_cell {
        for (k, &i) in idxs.iter().enumerate() {
            let g = &gens[i];
            let color = if g.hidden_v2 { "#c00" } else { "#111" };
            let at = spread(*stem, *s, k, idxs.len());
            match g.ring {
                GenRing::V01 => canvas.circle(at, color),
                GenRing::V012 => canvas.triangle(at, color),
            }
        }
    }
    canvas.finish(&table.title())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comod::{ModulePres, Ring};
    use crate::ext::ext_chart;
    use crate::tables::inductive_table;

    #[test]
    fn chart_svg_is_wellformed() {
        let m = ModulePres::weight_component(2, 4, Ring::E2);
        let chart = ext_chart(&m, Ring::E2, 6, 30).unwrap();
        let svg = render_chart_svg(&chart, "M_2(4)");
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert!(svg.contains("<circle"));
        // deterministic output
        assert_eq!(svg, render_chart_svg(&chart, "M_2(4)"));
    }

    #[test]
    fn table_svg_marks_hidden() {
        let svg = render_table_svg(&inductive_table(2));
        assert!(svg.contains("#c00"));
        assert!(svg.contains("<polygon"));
    }
}
