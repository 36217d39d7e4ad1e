//! Fraction-aware rendering of payoff tables.

use crate::games::BimatrixGame;

/// Values within this distance of `p/q` with `q <= MAX_DENOMINATOR` print as `p/q`.
pub const FRACTION_TOL: f64 = 1e-9;
pub const MAX_DENOMINATOR: i64 = 64;

/// Smallest-denominator rational within [`FRACTION_TOL`] of `x`.
pub fn as_fraction(x: f64) -> Option<(i64, i64)> {
    if !x.is_finite() || x.abs() > 1e12 {
        return None;
    }
    (1..=MAX_DENOMINATOR).find_map(|q| {
        let p = (x * q as f64).round();
        ((x - p / q as f64).abs() <= FRACTION_TOL).then_some((p as i64, q))
    })
}

/// Six significant digits, no exponent for ordinary magnitudes.
pub fn format_significant(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-4..=9).contains(&magnitude) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// `6`, `8/3 (2.666667)`, or six significant digits.
pub fn format_value(x: f64) -> String {
    match as_fraction(x) {
        Some((p, 1)) => p.to_string(),
        Some((p, q)) => format!("{p}/{q} ({:.6})", p as f64 / q as f64),
        None => format_significant(x),
    }
}

pub fn format_pair((a, b): (f64, f64)) -> String {
    format!("({}, {})", format_value(a), format_value(b))
}

fn pad(s: &str, width: usize) -> String {
    let len = s.chars().count();
    format!("{s}{}", " ".repeat(width.saturating_sub(len)))
}

/// Bordered table: column labels on top, row labels on the left.
pub fn render_table(g: &BimatrixGame) -> String {
    let cells: Vec<Vec<String>> = (0..g.rows())
        .map(|r| (0..g.cols()).map(|c| format_pair(g.payoff(r, c))).collect())
        .collect();
    let label_width = g.row_labels().iter().map(|l| l.chars().count()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..g.cols())
        .map(|c| {
            cells
                .iter()
                .map(|row| row[c].chars().count())
                .chain(std::iter::once(g.col_labels()[c].chars().count()))
                .max()
                .unwrap_or(0)
        })
        .collect();

    let mut out = String::new();
    let mut line = pad("", label_width);
    for (c, w) in widths.iter().enumerate() {
        line.push_str(" | ");
        line.push_str(&pad(&g.col_labels()[c], *w));
    }
    out.push_str(line.trim_end());
    out.push('\n');
    for (r, row) in cells.iter().enumerate() {
        let mut line = pad(&g.row_labels()[r], label_width);
        for (cell, w) in row.iter().zip(&widths) {
            line.push_str(" | ");
            line.push_str(&pad(cell, *w));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}
