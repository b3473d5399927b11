use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 70.0;

/// Log-log scatter of `(eps, deficit)` with the fitted line `exp(b) eps^s`.
pub fn loglog_svg(points: &[(f64, f64)], fit: Option<(f64, f64)>) -> String {
    let pts: Vec<(f64, f64)> = points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.log10(), y.log10())).collect();
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if pts.is_empty() {
        let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle">no positive deficits</text>"#, WIDTH / 2.0, HEIGHT / 2.0);
        svg.push_str("</svg>\n");
        return svg;
    }
    let (mut x0, mut x1, mut y0, mut y1) = bounds(&pts);
    x0 = x0.floor();
    x1 = x1.ceil().max(x0 + 1.0);
    y0 = y0.floor();
    y1 = y1.ceil().max(y0 + 1.0);
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    for d in x0 as i32..=x1 as i32 {
        let x = sx(d as f64);
        let _ = writeln!(svg, r##"<line x1="{x:.1}" y1="{MARGIN}" x2="{x:.1}" y2="{:.1}" stroke="#ddd"/>"##, HEIGHT - MARGIN);
        let _ = writeln!(svg, r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle" font-size="12">1e{d}</text>"#, HEIGHT - MARGIN + 18.0);
    }
    for d in y0 as i32..=y1 as i32 {
        let y = sy(d as f64);
        let _ = writeln!(svg, r##"<line x1="{MARGIN}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#ddd"/>"##, WIDTH - MARGIN);
        let _ = writeln!(svg, r#"<text x="{:.1}" y="{:.1}" text-anchor="end" font-size="12">1e{d}</text>"#, MARGIN - 6.0, y + 4.0);
    }
    let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle">eps</text>"#, WIDTH / 2.0, HEIGHT - 20.0);
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{}" text-anchor="middle" transform="rotate(-90 20 {})">deficit</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    if let Some((slope, intercept)) = fit {
        let line = |lx: f64| (intercept + slope * lx * std::f64::consts::LN_10) / std::f64::consts::LN_10;
        let _ = writeln!(
            svg,
            r##"<path d="M {:.1} {:.1} L {:.1} {:.1}" stroke="#c33" stroke-width="1.5" fill="none"/>"##,
            sx(x0),
            sy(line(x0)),
            sx(x1),
            sy(line(x1))
        );
        let _ = writeln!(svg, r#"<text x="{}" y="{}" font-size="13">slope {slope:.4}</text>"#, MARGIN + 10.0, MARGIN + 20.0);
    }
    for (x, y) in &pts {
        let _ = writeln!(svg, r##"<circle cx="{:.1}" cy="{:.1}" r="4" fill="#236"/>"##, sx(*x), sy(*y));
    }
    svg.push_str("</svg>\n");
    svg
}

fn bounds(pts: &[(f64, f64)]) -> (f64, f64, f64, f64) {
    pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY), |(a, b, c, d), &(x, y)| {
        (a.min(x), b.max(x), c.min(y), d.max(y))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contains_points_and_fit() {
        let svg = loglog_svg(&[(0.02, 0.01), (0.1, 0.2)], Some((2.0, 3.0)));
        assert_eq!(svg.matches("<circle").count(), 2);
        assert!(svg.contains("slope 2.0000"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn empty_input() {
        assert!(loglog_svg(&[(0.1, -1.0)], None).contains("no positive deficits"));
    }
}
