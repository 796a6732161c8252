//! Standalone SVG rank charts.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{BenchError, Result};
use crate::report::{CriterionStats, Summary};

const PALETTE: [&str; 14] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939", "#8c6d31",
    "#843c39",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn save(svg: &str, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
    }
    fs::write(path, svg).map_err(|e| BenchError::io(path, e))
}

/// Average rank of every model under each criterion, one polyline per model.
pub fn rank_comparison_svg(summary: &Summary) -> Result<String> {
    let models = summary.models();
    if models.len() < 2 {
        return Err(BenchError::TooFewModels(models.len()));
    }
    let k = models.len() as f64;
    let cols = summary.criteria.len();
    let (left, top, col_w, height) = (60.0, 40.0, 120.0, 360.0);
    let width = left + col_w * (cols.max(2) - 1) as f64 + 160.0;
    let x = |c: usize| left + col_w * c as f64;
    let y = |rank: f64| top + height * (rank - 1.0) / (k - 1.0);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{}" font-family="sans-serif" font-size="12">"#, top + height + 40.0);
    let _ = writeln!(s, r#"<title>Rank comparison</title>"#);
    for (c, stats) in summary.criteria.iter().enumerate() {
        let _ = writeln!(s, r##"<line x1="{0}" y1="{top}" x2="{0}" y2="{1}" stroke="#bbb"/>"##, x(c), top + height);
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, x(c), top - 15.0, stats.criterion);
    }
    for r in 1..=models.len() {
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{r}</text>"#, left - 25.0, y(r as f64) + 4.0);
    }
    for (j, model) in models.iter().enumerate() {
        let color = PALETTE[j % PALETTE.len()];
        let points: Vec<String> = summary.criteria.iter().enumerate().map(|(c, st)| format!("{:.2},{:.2}", x(c), y(st.average_ranks[j]))).collect();
        let _ = writeln!(s, r#"<polyline class="series" data-model="{0}" fill="none" stroke="{color}" stroke-width="2" points="{1}"/>"#, escape(model), points.join(" "));
        if let Some(last) = summary.criteria.last() {
            let _ = writeln!(s, r#"<text x="{}" y="{}" fill="{color}">{}</text>"#, x(cols - 1) + 8.0, y(last.average_ranks[j]) + 4.0, escape(model));
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn emit_chart(summary: &Summary, path: &Path) -> Result<()> {
    save(&rank_comparison_svg(summary)?, path)
}

/// Critical-difference style chart: average ranks on an axis with the CD bar.
pub fn cd_svg(stats: &CriterionStats) -> Result<String> {
    let k = stats.models.len();
    if k < 2 {
        return Err(BenchError::TooFewModels(k));
    }
    let (left, width) = (40.0, 520.0);
    let x = |rank: f64| left + width * (rank - 1.0) / (k as f64 - 1.0);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| stats.average_ranks[a].total_cmp(&stats.average_ranks[b]).then(a.cmp(&b)));

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" font-family="sans-serif" font-size="12">"#, width + 2.0 * left, 90.0 + 18.0 * k as f64);
    let _ = writeln!(s, r#"<title>Average ranks by {}</title>"#, stats.criterion);
    let _ = writeln!(s, r#"<line x1="{left}" y1="50" x2="{}" y2="50" stroke="black"/>"#, left + width);
    for r in 1..=k {
        let _ = writeln!(s, r#"<text x="{}" y="40" text-anchor="middle">{r}</text>"#, x(r as f64));
    }
    if let Some(n) = &stats.nemenyi {
        let _ = writeln!(s, r#"<line class="cd" x1="{left}" y1="20" x2="{}" y2="20" stroke="black" stroke-width="3"/>"#, x(1.0 + n.cd));
        let _ = writeln!(s, r#"<text x="{}" y="14">CD = {:.3}</text>"#, left, n.cd);
    }
    for (row, &j) in order.iter().enumerate() {
        let yy = 70.0 + 18.0 * row as f64;
        let xr = x(stats.average_ranks[j]);
        let _ = writeln!(s, r##"<line x1="{xr:.2}" y1="50" x2="{xr:.2}" y2="{yy}" stroke="#888"/>"##);
        let _ = writeln!(s, r#"<text class="model" x="{:.2}" y="{}">{} ({:.2})</text>"#, xr + 4.0, yy + 4.0, escape(&stats.models[j]), stats.average_ranks[j]);
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Writes the comparison chart and one rank chart per criterion into `dir`.
pub fn write_charts(summary: &Summary, dir: &Path) -> Result<Vec<std::path::PathBuf>> {
    let mut files = vec![dir.join("rank_comparison.svg")];
    emit_chart(summary, &files[0])?;
    for c in &summary.criteria {
        let path = dir.join(format!("ranks_{}.svg", c.criterion));
        save(&cd_svg(c)?, &path)?;
        files.push(path);
    }
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;
    use profitcast_core::stats::Criterion;

    fn summary(models: &[&str]) -> Summary {
        let k = models.len();
        let criteria = Criterion::ALL
            .iter()
            .map(|&c| CriterionStats {
                criterion: c,
                models: models.iter().map(|m| m.to_string()).collect(),
                average_ranks: (1..=k).map(|r| r as f64).collect(),
                n: 10,
                dropped: 0,
                friedman: None,
                nemenyi: None,
                best: 0,
                p_vs_best: vec![1.0; k],
            })
            .collect();
        Summary { criteria, contrasts: Vec::new() }
    }

    #[test]
    fn one_series_per_model() {
        let svg = rank_comparison_svg(&summary(&["HW", "RW"])).unwrap();
        assert_eq!(svg.matches("class=\"series\"").count(), 2);
        let full = rank_comparison_svg(&summary(&["A", "B", "C", "D", "E", "F"])).unwrap();
        assert_eq!(full.matches("class=\"series\"").count(), 6);
        let first = full.lines().find(|l| l.contains("class=\"series\"")).unwrap();
        assert_eq!(first.split("points=\"").nth(1).unwrap().split_whitespace().count(), 5);
    }

    #[test]
    fn single_model_rejected() {
        assert!(matches!(rank_comparison_svg(&summary(&["HW"])), Err(BenchError::TooFewModels(1))));
    }
}
