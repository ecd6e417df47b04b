use super::PulseSchedule;

pub const DEFAULT_CELLS_PER_INTERVAL: usize = 4;

/// ASCII diagram with `DEFAULT_CELLS_PER_INTERVAL` cells per interval.
///
/// Spin 0 is the top line. Pulses are `[#]`, parity pulses `[.]`.
/// `labels` replaces the schedule's own names when its length matches.
pub fn render_ascii<S: AsRef<str>>(s: &PulseSchedule, labels: &[S]) -> String {
    render_ascii_width(s, labels, DEFAULT_CELLS_PER_INTERVAL * s.intervals.max(1))
}

/// ASCII diagram whose timeline spans `width` cells. Boundary `k` is centred
/// on cell `round(k·width/C)`; lines extend one cell past `width` so a box at
/// `T` fits.
pub fn render_ascii_width<S: AsRef<str>>(s: &PulseSchedule, labels: &[S], width: usize) -> String {
    let width = width.max(2);
    let names: Vec<String> = if labels.len() == s.spins.len() {
        labels.iter().map(|l| l.as_ref().to_string()).collect()
    } else {
        s.names()
    };
    let pad = names.iter().map(|n| n.chars().count()).max().unwrap_or(0);
    let c = s.intervals.max(1);
    let mut out = String::new();
    for (sp, name) in s.spins.iter().zip(&names) {
        let mut line = vec!['-'; width + 2];
        for p in &sp.pulses {
            let centre = box_centre(p.boundary, c, width);
            let mark = if p.parity { '.' } else { '#' };
            line[centre - 1] = '[';
            line[centre] = mark;
            line[centre + 1] = ']';
        }
        let timeline: String = line.into_iter().collect();
        out.push_str(&format!("{name:<pad$} {timeline}\n"));
    }
    out
}

fn box_centre(boundary: usize, intervals: usize, width: usize) -> usize {
    let centre = ((boundary * width) as f64 / intervals as f64).round() as usize;
    centre.clamp(1, width)
}

/// SVG drawing of the same layout: one horizontal line per spin, a filled
/// box per pulse and a dashed box per parity pulse.
#[cfg(feature = "svg")]
pub fn render_svg(s: &PulseSchedule) -> String {
    const ROW: f64 = 30.0;
    const LEFT: f64 = 40.0;
    const SPAN: f64 = 400.0;
    let c = s.intervals.max(1) as f64;
    let height = ROW * (s.spins.len() as f64 + 1.0);
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{height}\">\n",
        LEFT + SPAN + 20.0
    );
    for (i, sp) in s.spins.iter().enumerate() {
        let y = ROW * (i as f64 + 1.0);
        out.push_str(&format!(
            "  <text x=\"4\" y=\"{y}\" font-size=\"12\">{}</text>\n",
            escape(&sp.name)
        ));
        out.push_str(&format!(
            "  <line x1=\"{LEFT}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"black\"/>\n",
            LEFT + SPAN
        ));
        for p in &sp.pulses {
            let x = LEFT + SPAN * p.boundary as f64 / c - 2.0;
            let dash = if p.parity {
                " stroke-dasharray=\"2,2\""
            } else {
                ""
            };
            out.push_str(&format!(
                "  <rect x=\"{x}\" y=\"{}\" width=\"4\" height=\"12\" fill=\"none\" stroke=\"black\"{dash}/>\n",
                y - 12.0
            ));
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(feature = "svg")]
fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::SignMatrix;
    use crate::schedule::schedule_from_sign_matrix;

    const NO_LABELS: [&str; 0] = [];

    #[test]
    fn two_spin_diagram() {
        let m = SignMatrix::from_rows(&[[1, 1], [1, -1]]).unwrap();
        let s = schedule_from_sign_matrix(&m, 1.0, false).unwrap();
        assert_eq!(
            render_ascii(&s, &NO_LABELS),
            "I0 ----------\n\
             I1 ---[#]-[.]\n"
        );
    }

    #[test]
    fn four_spin_diagram() {
        let m =
            SignMatrix::from_rows(&[[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]])
                .unwrap();
        let s = schedule_from_sign_matrix(&m, 1.0, true).unwrap();
        assert_eq!(
            render_ascii(&s, &["a", "b", "c", "d"]),
            "a ------------------\n\
             b ---[#]-[#]-[#]----\n\
             c -------[#]--------\n\
             d ---[#]-----[#]----\n"
        );
    }

    #[test]
    fn empty_lines_are_dashes() {
        let m = SignMatrix::from_rows(&[[1, 1, 1]]).unwrap();
        let s = schedule_from_sign_matrix(&m, 1.0, false).unwrap();
        let text = render_ascii(&s, &NO_LABELS);
        assert!(text
            .trim_end()
            .trim_start_matches("I0 ")
            .chars()
            .all(|ch| ch == '-'));
    }

    #[test]
    fn boxes_stay_near_proportional_positions() {
        for width in [5usize, 17, 33, 100] {
            for c in 1..12usize {
                for k in 1..=c {
                    let centre = box_centre(k, c, width) as f64;
                    let ideal = (k * width) as f64 / c as f64;
                    assert!((centre - ideal).abs() <= 1.0, "w={width} c={c} k={k}");
                }
            }
        }
    }

    #[cfg(feature = "svg")]
    #[test]
    fn svg_has_one_rect_per_pulse() {
        let m = SignMatrix::from_rows(&[[1, 1], [1, -1]]).unwrap();
        let s = schedule_from_sign_matrix(&m, 1.0, false).unwrap();
        let svg = render_svg(&s);
        assert_eq!(svg.matches("<rect").count(), 2);
        assert_eq!(svg.matches("stroke-dasharray").count(), 1);
    }
}
