//! Hand-rolled SVG figures: a diverging heatmap for curvature fields and a
//! two-series line plot for distance-vs-truncation tables. No plotting
//! dependency; fixed float formatting keeps the bytes stable across runs.

/// Diverging color scale, symmetric around zero: blue for negative values,
/// red for positive, white at zero. `t` is value/maxabs in [-1, 1].
fn diverging_color(t: f64) -> String {
    let t = t.clamp(-1.0, 1.0);
    let lerp = |a: f64, b: f64, s: f64| a + (b - a) * s;
    let (r, g, b) = if t >= 0.0 {
        (
            lerp(255.0, 178.0, t),
            lerp(255.0, 24.0, t),
            lerp(255.0, 43.0, t),
        )
    } else {
        (
            lerp(255.0, 33.0, -t),
            lerp(255.0, 102.0, -t),
            lerp(255.0, 172.0, -t),
        )
    };
    format!("#{:02x}{:02x}{:02x}", r as u8, g as u8, b as u8)
}

/// Row-major grid of values as colored cells, rows top to bottom. The color
/// scale is fixed symmetric around 0 so sign structure is comparable across
/// figures.
pub fn heatmap(title: &str, rows: usize, cols: usize, values: &[f64]) -> String {
    assert_eq!(values.len(), rows * cols, "heatmap grid mismatch");
    let cell = 8.0f64;
    let margin = 24.0f64;
    let width = margin * 2.0 + cols as f64 * cell;
    let height = margin * 2.0 + rows as f64 * cell + 16.0;
    let vmax = values
        .iter()
        .fold(0.0f64, |a, v| a.max(v.abs()))
        .max(1e-300);
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">\n"
    ));
    out.push_str(&format!(
        "  <text x=\"{margin:.0}\" y=\"16\" font-family=\"monospace\" font-size=\"12\">{title} (max |value| = {vmax:.3e})</text>\n"
    ));
    for r in 0..rows {
        for c in 0..cols {
            let v = values[r * cols + c];
            let x = margin + c as f64 * cell;
            let y = margin + r as f64 * cell;
            out.push_str(&format!(
                "  <rect x=\"{x:.1}\" y=\"{y:.1}\" width=\"{cell:.1}\" height=\"{cell:.1}\" fill=\"{}\"/>\n",
                diverging_color(v / vmax)
            ));
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Simple line plot with one polyline per named series; axes start at the
/// origin, y padded 8% above the largest value.
pub fn line_plot(
    title: &str,
    xlabel: &str,
    ylabel: &str,
    series: &[(&str, Vec<(f64, f64)>)],
) -> String {
    let width = 640.0f64;
    let height = 400.0f64;
    let ml = 70.0f64;
    let mr = 20.0f64;
    let mt = 40.0f64;
    let mb = 50.0f64;
    let xmax = series
        .iter()
        .flat_map(|(_, pts)| pts.iter().map(|p| p.0))
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let ymax = series
        .iter()
        .flat_map(|(_, pts)| pts.iter().map(|p| p.1))
        .fold(0.0f64, f64::max)
        .max(1e-300)
        * 1.08;
    let px = |x: f64| ml + (width - ml - mr) * (x / xmax);
    let py = |y: f64| height - mb - (height - mt - mb) * (y / ymax);
    let colors = ["#2166ac", "#b2182b", "#4dac26", "#7b3294"];
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">\n"
    ));
    out.push_str(&format!(
        "  <text x=\"{ml:.0}\" y=\"20\" font-family=\"monospace\" font-size=\"13\">{title}</text>\n"
    ));
    // axes
    out.push_str(&format!(
        "  <line x1=\"{ml:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        height - mb,
        width - mr,
        height - mb
    ));
    out.push_str(&format!(
        "  <line x1=\"{ml:.1}\" y1=\"{mt:.1}\" x2=\"{ml:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        height - mb
    ));
    for k in 0..=4 {
        let xv = xmax * k as f64 / 4.0;
        let yv = ymax * k as f64 / 4.0;
        out.push_str(&format!(
            "  <text x=\"{:.1}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"10\" text-anchor=\"middle\">{xv:.2}</text>\n",
            px(xv),
            height - mb + 16.0
        ));
        out.push_str(&format!(
            "  <text x=\"{:.1}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"10\" text-anchor=\"end\">{yv:.3}</text>\n",
            ml - 6.0,
            py(yv) + 3.0
        ));
    }
    out.push_str(&format!(
        "  <text x=\"{:.1}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">{xlabel}</text>\n",
        (ml + width - mr) / 2.0,
        height - 12.0
    ));
    out.push_str(&format!(
        "  <text x=\"16\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"11\" transform=\"rotate(-90 16 {:.1})\" text-anchor=\"middle\">{ylabel}</text>\n",
        (mt + height - mb) / 2.0,
        (mt + height - mb) / 2.0
    ));
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = colors[i % colors.len()];
        let path: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        out.push_str(&format!(
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            path.join(" ")
        ));
        out.push_str(&format!(
            "  <text x=\"{:.1}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"11\" fill=\"{color}\">{name}</text>\n",
            width - mr - 120.0,
            mt + 16.0 * i as f64
        ));
    }
    out.push_str("</svg>\n");
    out
}
