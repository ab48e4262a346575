//! CSV, SVG and binary exports of paths and distance maps.

use crate::dijkstra::GeodesicTree;
use crate::path::LatticePath;
use fpp_env::Rect;
use std::fmt::Write;

pub fn path_csv(path: &LatticePath) -> String {
    let mut s = String::from("i,x,y\n");
    for (i, p) in path.sites.iter().enumerate() {
        let _ = writeln!(s, "{i},{},{}", p.x, p.y);
    }
    s
}

/// Polyline overlay in the coordinate frame of `svg_layer`.
pub fn svg_overlay(paths: &[LatticePath], rect: Rect, scale: f64, colour: &str) -> String {
    let mut s = String::new();
    for p in paths {
        let pts: Vec<String> = p
            .sites
            .iter()
            .map(|q| format!("{:.2},{:.2}", (q.x - rect.x0) as f64 * scale, (rect.y1 - q.y) as f64 * scale))
            .collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{colour}" stroke-width="{:.2}" points="{}"/>"#, scale * 0.5, pts.join(" "));
    }
    s
}

pub const DIST_MAGIC: &[u8; 4] = b"FPPD";

/// Header: magic, u32 version, root x/y and rect x0 y0 x1 y1 as i64, then
/// one little-endian f64 per site in row-major order (NaN if unreached).
pub fn distance_map_bytes(tree: &GeodesicTree) -> Vec<u8> {
    let mut v = Vec::with_capacity(56 + tree.dist.len() * 8);
    v.extend_from_slice(DIST_MAGIC);
    v.extend_from_slice(&1u32.to_le_bytes());
    for x in [tree.root.x, tree.root.y, tree.rect.x0, tree.rect.y0, tree.rect.x1, tree.rect.y1] {
        v.extend_from_slice(&x.to_le_bytes());
    }
    for (d, &r) in tree.dist.iter().zip(&tree.reached) {
        let x = if r { d.value() } else { f64::NAN };
        v.extend_from_slice(&x.to_le_bytes());
    }
    v
}

/// Inverse of `distance_map_bytes`: (root, rect, values).
pub fn parse_distance_map(b: &[u8]) -> Option<(fpp_env::Site, Rect, Vec<f64>)> {
    if b.len() < 56 || &b[..4] != DIST_MAGIC || u32::from_le_bytes(b[4..8].try_into().ok()?) != 1 {
        return None;
    }
    let g = |i: usize| i64::from_le_bytes(b[8 + 8 * i..16 + 8 * i].try_into().unwrap());
    let root = fpp_env::Site::new(g(0), g(1));
    let rect = Rect::new(g(2), g(3), g(4), g(5));
    let body = &b[56..];
    if body.len() as u64 != rect.area() * 8 {
        return None;
    }
    Some((root, rect, body.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect()))
}
