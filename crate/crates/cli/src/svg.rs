//! Minimal static SVG plots: polylines in a fixed 800x500 viewport. The
//! figures are one-dimensional curves, so no plotting dependency is worth
//! its weight here.

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 50.0;

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// One plotted series: central curve plus a ±2·stderr band.
pub struct Series {
    pub label: String,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub band: Vec<f64>,
}

/// Dashed reference curve (the pointwise limit).
pub struct Reference {
    pub label: String,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

pub fn render_scan(
    title: &str,
    manifest_hash: &str,
    series: &[Series],
    references: &[Reference],
) -> String {
    let mut xs_all: Vec<f64> = Vec::new();
    let mut ys_all: Vec<f64> = Vec::new();
    for s in series {
        xs_all.extend(&s.xs);
        for (&y, &b) in s.ys.iter().zip(&s.band) {
            ys_all.push(y - b);
            ys_all.push(y + b);
        }
    }
    for r in references {
        xs_all.extend(&r.xs);
        ys_all.extend(&r.ys);
    }
    let (x_min, x_max) = bounds(&xs_all, 0.05);
    let (y_min, y_max) = bounds(&ys_all, 0.08);

    let sx = (WIDTH - MARGIN_LEFT - MARGIN_RIGHT) / (x_max - x_min);
    let sy = (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM) / (y_max - y_min);
    let px = |x: f64| MARGIN_LEFT + (x - x_min) * sx;
    let py = |y: f64| HEIGHT - MARGIN_BOTTOM - (y - y_min) * sy;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" width=\"{WIDTH}\" height=\"{HEIGHT}\">\n"
    ));
    out.push_str(&format!("<!-- manifest={manifest_hash} -->\n"));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    out.push_str(&format!(
        "<text x=\"{:.1}\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">{}</text>\n",
        MARGIN_LEFT, title
    ));

    // Axes with a zero line when visible.
    out.push_str(&format!(
        "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        px(x_min),
        py(y_min),
        px(x_max),
        py(y_min)
    ));
    out.push_str(&format!(
        "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        px(x_min),
        py(y_min),
        px(x_min),
        py(y_max)
    ));
    if y_min < 0.0 && y_max > 0.0 {
        out.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"#aaaaaa\" stroke-dasharray=\"2,4\"/>\n",
            px(x_min),
            py(0.0),
            px(x_max),
            py(0.0)
        ));
    }
    for k in 0..=4 {
        let x = x_min + (x_max - x_min) * k as f64 / 4.0;
        let y = y_min + (y_max - y_min) * k as f64 / 4.0;
        out.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{:.2}</text>\n",
            px(x),
            HEIGHT - MARGIN_BOTTOM + 18.0,
            x
        ));
        out.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{:.2}</text>\n",
            MARGIN_LEFT - 6.0,
            py(y) + 4.0,
            y
        ));
    }

    for (idx, r) in references.iter().enumerate() {
        let color = COLORS[(series.len() + idx) % COLORS.len()];
        out.push_str(&polyline(&r.xs, &r.ys, color, "stroke-dasharray=\"6,4\"", &px, &py));
    }
    for (idx, s) in series.iter().enumerate() {
        let color = COLORS[idx % COLORS.len()];
        // ±2 stderr band as a closed polygon.
        let mut points = String::new();
        for ((&x, &y), &b) in s.xs.iter().zip(&s.ys).zip(&s.band) {
            points.push_str(&format!("{:.2},{:.2} ", px(x), py(y + b)));
        }
        for ((&x, &y), &b) in s.xs.iter().zip(&s.ys).zip(&s.band).rev() {
            points.push_str(&format!("{:.2},{:.2} ", px(x), py(y - b)));
        }
        out.push_str(&format!(
            "<polygon points=\"{}\" fill=\"{color}\" fill-opacity=\"0.15\" stroke=\"none\"/>\n",
            points.trim_end()
        ));
        out.push_str(&polyline(&s.xs, &s.ys, color, "", &px, &py));
    }

    // Legend.
    let mut ly = MARGIN_TOP + 10.0;
    for (idx, s) in series.iter().enumerate() {
        let color = COLORS[idx % COLORS.len()];
        out.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{ly:.1}\" x2=\"{:.1}\" y2=\"{ly:.1}\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            WIDTH - 190.0,
            WIDTH - 160.0
        ));
        out.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
            WIDTH - 152.0,
            ly + 4.0,
            s.label
        ));
        ly += 18.0;
    }
    for (idx, r) in references.iter().enumerate() {
        let color = COLORS[(series.len() + idx) % COLORS.len()];
        out.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{ly:.1}\" x2=\"{:.1}\" y2=\"{ly:.1}\" stroke=\"{color}\" stroke-width=\"2\" stroke-dasharray=\"6,4\"/>\n",
            WIDTH - 190.0,
            WIDTH - 160.0
        ));
        out.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
            WIDTH - 152.0,
            ly + 4.0,
            r.label
        ));
        ly += 18.0;
    }

    out.push_str("</svg>\n");
    out
}

fn polyline(
    xs: &[f64],
    ys: &[f64],
    color: &str,
    extra: &str,
    px: &impl Fn(f64) -> f64,
    py: &impl Fn(f64) -> f64,
) -> String {
    let points: String = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| format!("{:.2},{:.2} ", px(x), py(y)))
        .collect();
    format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" {extra}/>\n",
        points.trim_end()
    )
}

fn bounds(values: &[f64], pad: f64) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-9 {
        return (lo - 1.0, hi + 1.0);
    }
    let span = hi - lo;
    (lo - pad * span, hi + pad * span)
}
