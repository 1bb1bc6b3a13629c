//! Naive reachability: every path of at most `depth` firings, every
//! injective choice of tokens, markings as plain (place, payload) lists.

use std::collections::BTreeSet;

use caseflow::dpn::{Fingerprint, Marking, Net, Payload, Transition};

pub type Flat = Vec<(String, Payload)>;

pub fn fingerprint(m: &Flat) -> Fingerprint {
    let mut lines: Vec<String> = m.iter().map(|(p, t)| format!("{p}|{}", t.canonical())).collect();
    lines.sort();
    Fingerprint::of(&lines.join("\n"))
}

fn choices(net: &Net, t: &Transition, m: &Flat, arc: usize, used: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if arc == t.inputs.len() {
        out.push(used.clone());
        return;
    }
    for (i, (place, payload)) in m.iter().enumerate() {
        if used.contains(&i) || place != t.inputs[arc].place.as_str() {
            continue;
        }
        if t.inputs[arc].guard.atoms.iter().all(|a| a.holds(payload)) {
            used.push(i);
            choices(net, t, m, arc + 1, used, out);
            used.pop();
        }
    }
}

fn step(net: &Net, m: &Flat) -> Vec<Flat> {
    let mut out = Vec::new();
    for t in net.transitions.values() {
        let mut all = Vec::new();
        choices(net, t, m, 0, &mut Vec::new(), &mut all);
        'binding: for picked in all {
            let inputs: Vec<&Payload> = picked.iter().map(|&i| &m[i].1).collect();
            let mut next: Flat = m
                .iter()
                .enumerate()
                .filter(|(i, _)| !picked.contains(i))
                .map(|(_, x)| x.clone())
                .collect();
            for arc in &t.outputs {
                let p = arc.transform.apply(&inputs);
                if !net.places[&arc.place].condition.atoms.iter().all(|a| a.holds(&p)) {
                    continue 'binding;
                }
                next.push((arc.place.to_string(), p));
            }
            out.push(next);
        }
    }
    out
}

fn over(m: &Flat, bound: usize) -> bool {
    let places: BTreeSet<&String> = m.iter().map(|(p, _)| p).collect();
    places.into_iter().any(|p| m.iter().filter(|(q, _)| q == p).count() > bound)
}

/// Returns whether some marking was left unexplored for exceeding `bound`.
pub fn reach(net: &Net, m: &Flat, bound: usize, depth: usize, seen: &mut BTreeSet<Fingerprint>) -> bool {
    seen.insert(fingerprint(m));
    if over(m, bound) {
        return true;
    }
    if depth == 0 {
        return false;
    }
    let mut dropped = false;
    for next in step(net, m) {
        // Over-bound successors are dropped, not recorded.
        if over(&next, bound) {
            dropped = true;
        } else {
            dropped |= reach(net, &next, bound, depth - 1, seen);
        }
    }
    dropped
}

/// Truncated when a marking was dropped for the bound, or one more
/// level of depth would find something new.
pub fn truncated(net: &Net, m: &Flat, bound: usize, depth: usize) -> bool {
    let (mut within, mut deeper) = (BTreeSet::new(), BTreeSet::new());
    reach(net, m, bound, depth, &mut within);
    let dropped = reach(net, m, bound, depth + 1, &mut deeper);
    dropped || within != deeper
}

pub fn flat(m: &Marking) -> Flat {
    m.iter().map(|(p, t)| (p.to_string(), t.payload.clone())).collect()
}
