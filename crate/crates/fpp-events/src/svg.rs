//! Region pictures: shaded random region, witness highways and corridors.

use crate::full::FrameGeometry;
use crate::{FullReport, SimpleReport};
use fpp_env::{Highway, Rect, Site};
use fpp_field::FullEnvironment;
use std::fmt::Write;

const MAX_SHADED: u64 = 400_000;

fn header(r: Rect, scale: f64) -> String {
    let (w, h) = ((r.width() + 1) as f64 * scale, (r.height() + 1) as f64 * scale);
    format!(r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}"><rect width="100%" height="100%" fill="white"/>"#)
}

fn xy(r: Rect, scale: f64, s: Site) -> (f64, f64) {
    ((s.x - r.x0) as f64 * scale + scale / 2.0, (r.y1 - s.y) as f64 * scale + scale / 2.0)
}

fn line(out: &mut String, r: Rect, scale: f64, h: &Highway, colour: &str) {
    let pts: Vec<String> = h.sites().filter(|s| r.expand(1).contains(*s)).map(|s| xy(r, scale, s)).map(|(x, y)| format!("{x:.1},{y:.1}")).collect();
    let _ = writeln!(out, r#"<polyline fill="none" stroke="{colour}" stroke-width="{:.1}" points="{}"/>"#, (scale * 0.6).max(1.0), pts.join(" "));
}

fn shade(out: &mut String, r: Rect, scale: f64, colour: &str, inside: impl Fn(Site) -> bool) {
    if r.area() > MAX_SHADED {
        return;
    }
    for s in r.sites().filter(|s| inside(*s)) {
        let (x, y) = xy(r, scale, s);
        let _ = writeln!(out, r#"<rect x="{:.1}" y="{:.1}" width="{scale:.1}" height="{scale:.1}" fill="{colour}"/>"#, x - scale / 2.0, y - scale / 2.0);
    }
}

pub fn svg_simple(report: &SimpleReport, scale: f64) -> String {
    let r = report.window;
    let mut s = header(r, scale);
    if let (Some(x1), Some(x2)) = (report.x1, report.x2) {
        shade(&mut s, r, scale, "#cde", |q| crate::simple::in_omega(report.level, x1, x2, q));
    }
    for h in [report.h1, report.h2].iter().flatten() {
        line(&mut s, r, scale, h, "#c22");
    }
    if let Some(h) = &report.m_witness {
        line(&mut s, r, scale, h, "#f90");
    }
    s.push_str("</svg>\n");
    s
}

pub fn svg_full(env: &FullEnvironment, report: &FullReport, rect: Rect, scale: f64) -> String {
    let mut s = header(rect, scale);
    let geo = FrameGeometry::new(env, report.k, &report.witnesses);
    let (g, cr) = (1i64 << report.k, report.c_over_r);
    shade(&mut s, rect, scale, "#eee", |q| crate::full::in_theta(g, cr, q));
    if let Some(geo) = &geo {
        shade(&mut s, rect, scale, "#cde", |q| geo.in_omega(q));
        shade(&mut s, rect, scale, "#9bd", |q| geo.in_lambda_h(q) || geo.in_lambda_v(q));
    }
    for h in report.witnesses.h.iter().flatten() {
        line(&mut s, rect, scale, &h.highway, "#c22");
    }
    for j in report.witnesses.j.iter().flatten() {
        line(&mut s, rect, scale, &j.highway, "#22c");
    }
    s.push_str("</svg>\n");
    s
}
