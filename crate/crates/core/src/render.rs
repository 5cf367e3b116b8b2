//! SVG heatmap of the stopping/continuation regions: time on the horizontal
//! axis, space on the vertical axis, red stopping cells over a green
//! continuation background (matching the reference figures' orientation).

use std::path::Path;

use crate::error::{Error, Result};
use crate::io;

const STOP_COLOR: &str = "#c23b22";
const CONT_COLOR: &str = "#3f9b4f";
const MARGIN_LEFT: f64 = 46.0;
const MARGIN_BOTTOM: f64 = 34.0;
const MARGIN_TOP: f64 = 10.0;
const MARGIN_RIGHT: f64 = 12.0;
const PLOT_W: f64 = 640.0;
const PLOT_H: f64 = 480.0;

fn esc(v: f64) -> String {
    format!("{:.2}", v)
}

/// Renders a decision matrix (rows = time nodes, columns = x nodes,
/// value 1 = stopping) as a standalone SVG. Vertical runs of equal cells are
/// merged into single rectangles per time column.
pub fn heatmap_svg(t: &[f64], x: &[f64], decisions: &[Vec<f64>]) -> String {
    let (t0, t1) = (t[0], *t.last().unwrap());
    let (x0, x1) = (x[0], *x.last().unwrap());
    let w = PLOT_W + MARGIN_LEFT + MARGIN_RIGHT;
    let h = PLOT_H + MARGIN_TOP + MARGIN_BOTTOM;
    let tx = |tv: f64| MARGIN_LEFT + (tv - t0) / (t1 - t0) * PLOT_W;
    let xy = |xv: f64| MARGIN_TOP + (x1 - xv) / (x1 - x0) * PLOT_H;

    let mut svg = String::with_capacity(1 << 16);
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
         viewBox=\"0 0 {w} {h}\">\n"
    ));
    // continuation background
    svg.push_str(&format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{PLOT_W}\" height=\"{PLOT_H}\" fill=\"{CONT_COLOR}\"/>\n",
        esc(MARGIN_LEFT),
        esc(MARGIN_TOP)
    ));

    // stopping cells, merged vertically per time column
    let n = t.len();
    let m = x.len();
    for (i, row) in decisions.iter().enumerate() {
        // cell column spans midpoints between neighbouring time nodes
        let left = if i == 0 { t[0] } else { 0.5 * (t[i - 1] + t[i]) };
        let right = if i + 1 == n {
            t[n - 1]
        } else {
            0.5 * (t[i] + t[i + 1])
        };
        let mut j = 0;
        while j < m {
            if row[j] >= 0.5 {
                let j1 = j;
                while j + 1 < m && row[j + 1] >= 0.5 {
                    j += 1;
                }
                let lo = if j1 == 0 { x[0] } else { 0.5 * (x[j1 - 1] + x[j1]) };
                let hi = if j == m - 1 {
                    x[m - 1]
                } else {
                    0.5 * (x[j] + x[j + 1])
                };
                svg.push_str(&format!(
                    "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{STOP_COLOR}\"/>\n",
                    esc(tx(left)),
                    esc(xy(hi)),
                    esc(tx(right) - tx(left)),
                    esc(xy(lo) - xy(hi)),
                ));
            }
            j += 1;
        }
    }

    // frame and axis labels
    svg.push_str(&format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{PLOT_W}\" height=\"{PLOT_H}\" fill=\"none\" \
         stroke=\"black\" stroke-width=\"1\"/>\n",
        esc(MARGIN_LEFT),
        esc(MARGIN_TOP)
    ));
    for k in 0..=4 {
        let tv = t0 + (t1 - t0) * k as f64 / 4.0;
        let xpix = tx(tv);
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
            esc(xpix),
            esc(MARGIN_TOP + PLOT_H),
            esc(xpix),
            esc(MARGIN_TOP + PLOT_H + 5.0)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{:.2}</text>\n",
            esc(xpix),
            esc(MARGIN_TOP + PLOT_H + 18.0),
            tv
        ));
        let xv = x0 + (x1 - x0) * k as f64 / 4.0;
        let ypix = xy(xv);
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
            esc(MARGIN_LEFT - 5.0),
            esc(ypix),
            esc(MARGIN_LEFT),
            esc(ypix)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{:.2}</text>\n",
            esc(MARGIN_LEFT - 8.0),
            esc(ypix + 4.0),
            xv
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\">t</text>\n",
        esc(MARGIN_LEFT + PLOT_W / 2.0),
        esc(h - 4.0)
    ));
    svg.push_str(&format!(
        "<text x=\"14\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\">x</text>\n",
        esc(MARGIN_TOP + PLOT_H / 2.0)
    ));
    svg.push_str("</svg>\n");
    svg
}

/// Reads D.csv from a result directory and writes heatmap.svg next to it.
pub fn render_directory(dir: &Path) -> Result<()> {
    let d_path = dir.join("D.csv");
    if !d_path.exists() || !dir.join("V.csv").exists() {
        return Err(Error::Config(format!(
            "{}: V.csv / D.csv not found",
            dir.display()
        )));
    }
    let d = io::load_matrix_csv(&d_path)?;
    let svg = heatmap_svg(&d.t, &d.x, &d.values);
    std::fs::write(dir.join("heatmap.svg"), svg)?;
    Ok(())
}

/// Minimal XML well-formedness scan: tag balance and quote closure. Used by
/// tests and as a cheap sanity check after rendering.
pub fn xml_well_formed(text: &str) -> bool {
    let mut stack: Vec<String> = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] != b'<' {
            i += 1;
            continue;
        }
        let Some(close) = text[i..].find('>') else {
            return false;
        };
        let tag = &text[i + 1..i + close];
        i += close + 1;
        if tag.starts_with('?') || tag.starts_with('!') {
            continue;
        }
        if tag.contains('<') || tag.matches('"').count() % 2 == 1 {
            return false;
        }
        if let Some(name) = tag.strip_prefix('/') {
            match stack.pop() {
                Some(open) if open == name.trim() => {}
                _ => return false,
            }
        } else if !tag.ends_with('/') {
            let name = tag.split_whitespace().next().unwrap_or("");
            stack.push(name.to_string());
        }
    }
    stack.is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_stopping_renders_single_color() {
        let t: Vec<f64> = (0..=4).map(|i| i as f64 / 4.0).collect();
        let x: Vec<f64> = (0..=4).map(|i| -1.0 + 0.5 * i as f64).collect();
        let d = vec![vec![1.0; 5]; 5];
        let svg = heatmap_svg(&t, &x, &d);
        // one merged stopping rect per time column + background + frame
        assert_eq!(svg.matches(STOP_COLOR).count(), 5);
        assert!(xml_well_formed(&svg));
    }

    #[test]
    fn disjoint_intervals_render_separate_rects() {
        let t: Vec<f64> = (0..=2).map(|i| i as f64 / 2.0).collect();
        let x: Vec<f64> = (0..=6).map(|i| i as f64).collect();
        // middle slice: two disjoint stopping runs
        let d = vec![
            vec![0.0; 7],
            vec![1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0],
            vec![1.0; 7],
        ];
        let svg = heatmap_svg(&t, &x, &d);
        assert_eq!(svg.matches(STOP_COLOR).count(), 3);
        assert!(xml_well_formed(&svg));
    }

    #[test]
    fn well_formedness_scanner_catches_breakage() {
        assert!(xml_well_formed("<a><b x=\"1\"/><c>t</c></a>"));
        assert!(!xml_well_formed("<a><b></a>"));
        assert!(!xml_well_formed("<a x=\"unclosed></a>"));
    }

    #[test]
    fn render_directory_requires_inputs() {
        let dir = std::env::temp_dir().join(format!("rgmb_render_none_{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        assert!(render_directory(&dir).is_err());
        std::fs::remove_dir_all(&dir).ok();
    }
}
