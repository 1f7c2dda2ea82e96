use std::fmt::Write as _;

use crate::format::sig4;

use super::EmotionModel;

/// Features ranked by |t| for each target.
#[derive(Debug, Clone, PartialEq)]
pub struct ImportanceReport {
    pub arousal: Vec<(String, f64)>,
    pub valence: Vec<(String, f64)>,
}

pub fn importance_report(model: &EmotionModel) -> ImportanceReport {
    let ranked = |t: &[f64]| {
        let mut rows: Vec<(String, f64)> = model
            .feature_names
            .iter()
            .cloned()
            .zip(t.iter().copied())
            .collect();
        rows.sort_by(|a, b| b.1.abs().total_cmp(&a.1.abs()));
        rows
    };
    ImportanceReport {
        arousal: ranked(&model.arousal_fit.t_values),
        valence: ranked(&model.valence_fit.t_values),
    }
}

impl ImportanceReport {
    fn targets(&self) -> [(&'static str, &[(String, f64)]); 2] {
        [("arousal", &self.arousal), ("valence", &self.valence)]
    }

    /// `target,feature,t_value`, full precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("target,feature,t_value\n");
        for (target, rows) in self.targets() {
            for (name, t) in rows {
                let _ = writeln!(out, "{target},{name},{t}");
            }
        }
        out
    }

    /// Human-readable table, four significant digits.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        for (target, rows) in self.targets() {
            let _ = writeln!(out, "T-values for {target}");
            for (name, t) in rows {
                let _ = writeln!(out, "  {name:<20} {:>10}", sig4(*t));
            }
        }
        out
    }

    /// Horizontal bar charts, one panel per target, bars centered on t = 0.
    pub fn to_svg(&self) -> String {
        const WIDTH: f64 = 640.0;
        const LABEL_W: f64 = 150.0;
        const BAR_H: f64 = 18.0;
        const GAP: f64 = 6.0;
        const PANEL_HEAD: f64 = 30.0;

        let max_abs = self
            .arousal
            .iter()
            .chain(&self.valence)
            .map(|(_, t)| t.abs())
            .fold(0.0, f64::max)
            .max(1e-12);
        let plot_w = WIDTH - LABEL_W - 20.0;
        let zero_x = LABEL_W + plot_w / 2.0;
        let scale = plot_w / 2.0 / max_abs;

        let panel_h = |n: usize| PANEL_HEAD + n as f64 * (BAR_H + GAP) + GAP;
        let height = panel_h(self.arousal.len()) + panel_h(self.valence.len());

        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" font-family="sans-serif" font-size="12">"#
        );
        let mut y0 = 0.0;
        for (target, rows) in self.targets() {
            let _ = writeln!(
                svg,
                r#"<text x="10" y="{:.1}" font-size="14" font-weight="bold">T-values for {target}</text>"#,
                y0 + 20.0
            );
            let top = y0 + PANEL_HEAD;
            let bottom = top + rows.len() as f64 * (BAR_H + GAP);
            let _ = writeln!(
                svg,
                r##"<line x1="{zero_x:.1}" y1="{top:.1}" x2="{zero_x:.1}" y2="{bottom:.1}" stroke="#444"/>"##
            );
            for (i, (name, t)) in rows.iter().enumerate() {
                let y = top + i as f64 * (BAR_H + GAP);
                let len = t.abs() * scale;
                let x = if *t >= 0.0 { zero_x } else { zero_x - len };
                let fill = if *t >= 0.0 { "#3b73b9" } else { "#c0504d" };
                let _ = writeln!(
                    svg,
                    r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{name}</text>"#,
                    LABEL_W - 6.0,
                    y + BAR_H * 0.75
                );
                let _ = writeln!(
                    svg,
                    r#"<rect x="{x:.1}" y="{y:.1}" width="{len:.1}" height="{BAR_H}" fill="{fill}"><title>{name}: {}</title></rect>"#,
                    sig4(*t)
                );
            }
            y0 += panel_h(rows.len());
        }
        svg.push_str("</svg>\n");
        svg
    }
}

/// Adjusted R² per feature set, laid out as a two-column comparison table.
pub fn fit_report(models: &[&EmotionModel]) -> String {
    let labels: Vec<String> = models
        .iter()
        .map(|m| m.subset().map_or_else(|_| m.feature_names.join(","), |s| s.label()))
        .collect();
    let width = labels.iter().map(String::len).max().unwrap_or(0).max(11);
    let mut out = String::new();
    let _ = writeln!(out, "Adjusted R² (in-sample)");
    let _ = writeln!(out, "{:<width$} | {:>8} | {:>8}", "Feature Set", "Arousal", "Valence");
    let _ = writeln!(out, "{}-+-{}-+-{}", "-".repeat(width), "-".repeat(8), "-".repeat(8));
    for (label, m) in labels.iter().zip(models) {
        let _ = writeln!(
            out,
            "{label:<width$} | {:>8} | {:>8}",
            sig4(m.arousal_fit.adjusted_r2),
            sig4(m.valence_fit.adjusted_r2)
        );
    }
    out
}
