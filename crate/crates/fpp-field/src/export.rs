//! CSV and SVG views of a bond field.

use crate::field::BondField;
use fpp_env::Rect;
use std::fmt::Write;

pub fn records_csv(field: &BondField, rect: &Rect) -> String {
    let mut out = String::from("bond,type,kZig,kHV,slow,alphaStar,sigma,tau\n");
    for b in field.bonds() {
        if !rect.contains_bond(b) {
            continue;
        }
        if let Some(r) = field.record(b) {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{:.1},{:.17e},{:.17e}",
                r.bond, r.ty.label(), r.k_zig, r.k_hv, r.slow as u8, r.alpha_star_tenths as f64 / 10.0, r.sigma, r.tau
            );
        }
    }
    out
}

/// Bonds drawn as line segments coloured by type (full model) or by cost.
pub fn svg_layer(field: &BondField, rect: &Rect, scale: f64) -> String {
    let w = rect.width() as f64 * scale;
    let h = rect.height() as f64 * scale;
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let px = |x: i64| (x - rect.x0) as f64 * scale + scale / 2.0;
    let py = |y: i64| (rect.y1 - y) as f64 * scale + scale / 2.0;
    for b in field.bonds() {
        if !rect.contains_bond(b) {
            continue;
        }
        let colour = match field.bond_type(b) {
            Some(t) => t.colour(),
            None => {
                if field.tau(b).unwrap_or(3.0) < 2.5 && b.dir.is_diagonal() {
                    "#1f77b4"
                } else {
                    "#e8e8e8"
                }
            }
        };
        let (p, q) = b.ends();
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{colour}" stroke-width="{:.2}"/>"#,
            px(p.x), py(p.y), px(q.x), py(q.y), scale * 0.3
        );
    }
    out.push_str("</svg>\n");
    out
}
