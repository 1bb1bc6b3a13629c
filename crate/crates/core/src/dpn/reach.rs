//! Bounded breadth-first reachability over marking fingerprints.

use std::collections::BTreeSet;

use serde::Serialize;

use super::engine::{bindings, fire_with};
use super::model::{Fingerprint, Marking, Net};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("reachability bounds must be positive (bound {bound}, depth {depth})")]
pub struct BoundsError {
    pub bound: usize,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReachResult {
    pub fingerprints: BTreeSet<Fingerprint>,
    /// Some successor was dropped for exceeding `bound`, or the depth limit
    /// cut off markings not yet seen.
    pub truncated: bool,
}

fn successors<'a>(net: &'a Net, m: &'a Marking) -> impl Iterator<Item = Marking> + 'a {
    net.transitions.values().flat_map(move |t| {
        bindings(t, m)
            .into_iter()
            .filter_map(move |serials| fire_with(net, m, t, &serials).ok().map(|(next, _)| next))
    })
}

/// Markings reachable from `initial` in at most `depth` firings without any
/// place holding more than `bound` tokens. Every binding of every transition
/// is explored, so markings are identified by fingerprint alone.
pub fn reachable(net: &Net, initial: &Marking, bound: usize, depth: usize) -> Result<ReachResult, BoundsError> {
    if bound == 0 || depth == 0 {
        return Err(BoundsError { bound, depth });
    }
    let mut seen = BTreeSet::from([initial.fingerprint()]);
    let mut truncated = false;
    if initial.max_tokens_in_a_place() > bound {
        return Ok(ReachResult {
            fingerprints: seen,
            truncated: true,
        });
    }
    let mut frontier = vec![initial.clone()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for m in &frontier {
            for succ in successors(net, m) {
                if succ.max_tokens_in_a_place() > bound {
                    truncated = true;
                } else if seen.insert(succ.fingerprint()) {
                    next.push(succ);
                }
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    if !truncated {
        truncated = frontier.iter().any(|m| {
            successors(net, m)
                .any(|s| s.max_tokens_in_a_place() > bound || !seen.contains(&s.fingerprint()))
        });
    }
    Ok(ReachResult {
        fingerprints: seen,
        truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::case::NodeId;
    use crate::dpn::format::parse_net;
    use crate::dpn::model::Payload;

    #[test]
    fn no_transitions_gives_the_initial_marking() {
        let net = parse_net("place P\n").unwrap();
        let p = NodeId::new("P").unwrap();
        let m = Marking::from_tokens([(&p, Payload::new("x"))]);
        let r = reachable(&net, &m, 1, 3).unwrap();
        assert_eq!(r.fingerprints, BTreeSet::from([m.fingerprint()]));
        assert!(!r.truncated);
    }

    #[test]
    fn growing_self_loop_is_truncated() {
        let net = parse_net("place P\ntransition grow stage=\"g\" in=P out=P,P\n").unwrap();
        let p = NodeId::new("P").unwrap();
        let m = Marking::from_tokens([(&p, Payload::new("x"))]);
        let r = reachable(&net, &m, 3, 10).unwrap();
        assert_eq!(r.fingerprints.len(), 3);
        assert!(r.truncated);
    }

    #[test]
    fn counter_loop_stops_at_depth() {
        let net = parse_net("place P\ntransition tick stage=\"t\" in=P:n<=100 out=P:n=@0\n").unwrap();
        let p = NodeId::new("P").unwrap();
        let m = Marking::from_tokens([(&p, Payload::new("x").with("n", crate::dpn::Value::Number(1.0)))]);
        // Same payload every time: one marking, nothing truncated.
        let r = reachable(&net, &m, 1, 5).unwrap();
        assert_eq!(r.fingerprints.len(), 1);
        assert!(!r.truncated);
    }

    #[test]
    fn zero_bounds_rejected() {
        let net = Net::default();
        assert!(reachable(&net, &Marking::new(), 0, 1).is_err());
        assert!(reachable(&net, &Marking::new(), 1, 0).is_err());
    }
}
