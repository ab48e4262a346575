use fpp_geodesic::GeodesicTree;

/// Reached site indices ordered so that every parent precedes its children.
pub fn tree_order(t: &GeodesicTree) -> Vec<usize> {
    let n = t.parent.len();
    let mut children: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut roots = Vec::new();
    for i in 0..n {
        if !t.reached[i] {
            continue;
        }
        match t.parent[i] {
            u32::MAX => roots.push(i),
            p => children[p as usize].push(i as u32),
        }
    }
    let mut out = Vec::with_capacity(n);
    let mut stack = roots;
    while let Some(i) = stack.pop() {
        out.push(i);
        stack.extend(children[i].iter().map(|&c| c as usize));
    }
    out
}
