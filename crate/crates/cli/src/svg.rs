//! Bar chart of a shadow profile. Output depends only on the profile.

use std::fmt::Write;

use fracline::ShadowProfile;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;

pub fn render(profile: &ShadowProfile) -> String {
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let n = profile.rays.len().max(1) as f64;
    let peak = profile.rays.iter().map(|r| r.mass).fold(0.0, f64::max);
    let scale = if peak > 0.0 { plot_h / peak } else { 0.0 };
    let bar_w = plot_w / n;
    let base = TOP + plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="18" font-family="sans-serif" font-size="13" text-anchor="middle">shadow profile, theta = {:.6}, L = {}</text>"#,
        WIDTH / 2.0,
        profile.theta,
        profile.level
    );
    let _ = writeln!(s, r##"<g fill="#3a6ea5">"##);
    for (i, ray) in profile.rays.iter().enumerate() {
        let h = ray.mass * scale;
        if h <= 0.0 {
            continue;
        }
        let _ = writeln!(
            s,
            r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}"/>"#,
            LEFT + i as f64 * bar_w,
            base - h,
            bar_w,
            h
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r#"<g stroke="black" stroke-width="1"><line x1="{LEFT}" y1="{base}" x2="{:.2}" y2="{base}"/><line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{base}"/></g>"#,
        LEFT + plot_w
    );
    let first = profile.rays.first().map_or(0.0, |r| r.offset);
    let last = profile.rays.last().map_or(0.0, |r| r.offset);
    let label = |s: &mut String, x: f64, y: f64, anchor: &str, text: String| {
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="11" text-anchor="{anchor}">{text}</text>"#
        );
    };
    label(&mut s, LEFT, base + 16.0, "start", format!("{first:.4}"));
    label(&mut s, LEFT + plot_w, base + 16.0, "end", format!("{last:.4}"));
    label(&mut s, LEFT + plot_w / 2.0, base + 40.0, "middle", "ray offset".into());
    label(&mut s, LEFT - 6.0, TOP + 4.0, "end", format!("{peak:.4}"));
    label(&mut s, LEFT - 6.0, base, "end", "0".into());
    let _ = writeln!(
        s,
        r#"<text x="18" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle" transform="rotate(-90 18 {:.2})">mass</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );
    s.push_str("</svg>\n");
    s
}
