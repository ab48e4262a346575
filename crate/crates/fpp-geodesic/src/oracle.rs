//! Exhaustive path enumeration for tiny windows.

use crate::dijkstra::moves;
use fpp_env::{Bond, Site};
use fpp_field::{BondField, Cost};
use std::cmp::Ordering;

/// Minimum over all self-avoiding paths from `a` to `b` inside the field,
/// by depth-first enumeration. Branches whose partial cost already exceeds
/// the best complete path are cut; bond costs are positive so no minimizer
/// is lost. Returns the minimum and the number of paths attaining it.
pub fn exhaustive_min(field: &BondField, a: Site, b: Site) -> Option<(Cost, Vec<Site>, usize)> {
    let rect = field.rect;
    if !rect.contains(a) || !rect.contains(b) {
        return None;
    }
    let mut best: Option<(Cost, Vec<Site>, usize)> = None;
    let mut on = vec![false; rect.area() as usize];
    let mut stack = vec![a];
    on[rect.index(a)] = true;
    dfs(field, b, Cost::ZERO, &mut stack, &mut on, &mut best);
    best
}

fn dfs(field: &BondField, b: Site, cost: Cost, stack: &mut Vec<Site>, on: &mut [bool], best: &mut Option<(Cost, Vec<Site>, usize)>) {
    if let Some((c, _, _)) = best {
        if cost.cmp_total(c) == Ordering::Greater {
            return;
        }
    }
    let s = *stack.last().unwrap();
    if s == b {
        match best {
            Some((c, _, n)) if cost.cmp_total(c) == Ordering::Equal => *n += 1,
            _ => *best = Some((cost, stack.clone(), 1)),
        }
        return;
    }
    for &(dx, dy) in moves(field) {
        let t = s.offset(dx, dy);
        if !field.rect.contains(t) || on[field.rect.index(t)] {
            continue;
        }
        let Some(k) = field.slot(Bond::between(s, t).unwrap()) else { continue };
        on[field.rect.index(t)] = true;
        stack.push(t);
        dfs(field, b, cost + field.slot_cost(k), stack, on, best);
        stack.pop();
        on[field.rect.index(t)] = false;
    }
}
