//! Generators and independent oracles shared by the integration tests and
//! the acceptance harness.
#![allow(dead_code)]

pub mod dpn_oracle;

use caseflow::case::{Argument, BlockType, CaseGraph, Claim, Defeater, DefeaterKind, Evidence, NodeId};
use caseflow::confirm::{Likelihoods, Prob};
use caseflow::dsl::CaseDocument;
use caseflow::resilience::{derive_requirements, parse_catalogue, verify, Revise, VerificationRecord, VerificationReport};
use caseflow::status::{propagate, NoExpansions, Status};
use rand::seq::SliceRandom;
use rand::Rng;

pub const LEVELS: [Status; 5] = [
    Status::Unevaluated,
    Status::Deferred,
    Status::Partial,
    Status::StandardsAssumed,
    Status::Satisfied,
];

fn id(s: String) -> NodeId {
    NodeId::new(s).unwrap()
}

pub fn text<R: Rng>(rng: &mut R) -> String {
    const WORDS: [&str; 12] = [
        "system", "meets", "\"key\"", "properties", "back\\slash", "#hash", "tab\there", "déjà", "x=y", "a,b",
        "new\nline", "ok",
    ];
    let n = rng.gen_range(1..5);
    let mut words: Vec<&str> = (0..n).map(|_| *WORDS.choose(rng).unwrap()).collect();
    words.insert(0, "claim");
    words.join(" ")
}

pub struct Shape {
    pub claims: usize,
    pub evidence: usize,
    pub defeaters: bool,
    pub probs: bool,
    pub expands: bool,
    /// Restrict declared statuses to the five roll-up levels.
    pub levels_only: bool,
}

impl Shape {
    pub fn any<R: Rng>(rng: &mut R, max_nodes: usize) -> Shape {
        let claims = rng.gen_range(1..=max_nodes.max(2) - 1);
        Shape {
            claims,
            evidence: rng.gen_range(0..=max_nodes - claims),
            defeaters: true,
            probs: true,
            expands: true,
            levels_only: false,
        }
    }
}

/// A random well-formed case: claims only support claims with a larger
/// index, so the graph is a DAG.
pub fn random_case<R: Rng>(rng: &mut R, shape: &Shape) -> CaseDocument {
    let prefixes = ["C", "G", "claim_", "c.", "S-"];
    let claim_ids: Vec<NodeId> = (0..shape.claims)
        .map(|i| id(format!("{}{i}", prefixes[i % prefixes.len()])))
        .collect();
    let evidence_ids: Vec<NodeId> = (0..shape.evidence).map(|i| id(format!("E{i}"))).collect();
    let status = |rng: &mut R| -> Option<Status> {
        if rng.gen_bool(0.25) {
            None
        } else if shape.levels_only {
            Some(*LEVELS.choose(rng).unwrap())
        } else {
            Some(*Status::ALL.choose(rng).unwrap())
        }
    };

    let mut g = CaseGraph::new(if rng.gen_bool(0.2) { String::new() } else { text(rng) });
    let mut arg_ids = Vec::new();
    let mut has_args = vec![false; shape.claims];
    for (i, cid) in claim_ids.iter().enumerate() {
        let later: Vec<&NodeId> = claim_ids[i + 1..].iter().chain(&evidence_ids).collect();
        if later.is_empty() {
            continue;
        }
        for k in 0..rng.gen_range(0..3) {
            let n = rng.gen_range(1..=later.len().min(4));
            let supports: Vec<NodeId> = later.choose_multiple(rng, n).map(|s| (*s).clone()).collect();
            let side_pool = &claim_ids[i + 1..];
            let side = if !side_pool.is_empty() && rng.gen_bool(0.3) {
                side_pool.choose(rng).cloned()
            } else {
                None
            };
            let aid = id(format!("A{i}_{k}"));
            g.add_argument(Argument {
                id: aid.clone(),
                block: *BlockType::ALL.choose(rng).unwrap(),
                top: cid.clone(),
                supports,
                side,
            })
            .unwrap();
            arg_ids.push(aid);
            has_args[i] = true;
        }
    }
    for (i, cid) in claim_ids.iter().enumerate() {
        let expands = if shape.expands && !has_args[i] && rng.gen_bool(0.1) {
            Some(if rng.gen_bool(0.5) { format!("sub/case{i}.casl") } else { format!("my cases/{i}.casl") })
        } else {
            None
        };
        let declared = if has_args[i] && rng.gen_bool(0.8) { None } else { status(rng) };
        g.add_claim(Claim {
            id: cid.clone(),
            text: text(rng),
            declared_status: declared,
            expands,
        })
        .unwrap();
    }
    for eid in &evidence_ids {
        g.add_evidence(Evidence {
            id: eid.clone(),
            text: text(rng),
            declared_status: status(rng),
        })
        .unwrap();
    }
    if shape.defeaters {
        let targets: Vec<&NodeId> = claim_ids.iter().chain(&evidence_ids).chain(&arg_ids).collect();
        for d in 0..rng.gen_range(0..3) {
            g.add_defeater(Defeater {
                id: id(format!("D{d}")),
                kind: if rng.gen_bool(0.5) { DefeaterKind::Undercut } else { DefeaterKind::Rebuttal },
                target: (*targets.choose(rng).unwrap()).clone(),
                text: text(rng),
                resolved: rng.gen_bool(0.3),
            })
            .unwrap();
        }
    }
    let mut probs = Vec::new();
    if shape.probs && !evidence_ids.is_empty() {
        for e in &evidence_ids {
            for c in &claim_ids {
                if rng.gen_bool(0.15) {
                    probs.push(Prob {
                        evidence: e.clone(),
                        given: c.clone(),
                        likelihoods: Likelihoods::new(prob(rng), prob(rng)).unwrap(),
                    });
                }
            }
        }
    }
    probs.sort_by(|a, b| (&a.evidence, &a.given).cmp(&(&b.evidence, &b.given)));
    CaseDocument { graph: g, probs }
}

fn prob<R: Rng>(rng: &mut R) -> f64 {
    match rng.gen_range(0..4) {
        0 => 0.0,
        1 => 1.0,
        2 => (rng.gen_range(0..=1000) as f64) / 1000.0,
        _ => rng.gen::<f64>(),
    }
}

/// Rank in the roll-up order, written out independently of the library.
pub fn rank(status: Option<Status>) -> u8 {
    match status.map(|s| s.colour()) {
        Some("red") => 1,
        Some("orange") => 2,
        Some("yellow") => 3,
        Some("green") => 4,
        _ => 0,
    }
}

fn capped(g: &CaseGraph, target: &NodeId, r: u8) -> u8 {
    g.defeaters()
        .filter(|d| &d.target == target && !d.resolved)
        .map(|d| match d.kind {
            DefeaterKind::Undercut => 2,
            DefeaterKind::Rebuttal => 1,
        })
        .fold(r, u8::min)
}

/// Plain recursion over the definitions: evidence and argument-less claims
/// take their declared colour, an argument is as strong as its weakest
/// support (side claim included), a claim as its strongest argument, and
/// unresolved defeaters cap their target. No memoisation.
pub fn oracle_rank(g: &CaseGraph, node: &NodeId) -> u8 {
    if let Some(e) = g.evidence_item(node) {
        return capped(g, node, rank(e.declared_status));
    }
    let Some(c) = g.claim(node) else { return 0 };
    let args: Vec<&Argument> = g.arguments().filter(|a| &a.top == node).collect();
    let raw = if args.is_empty() {
        rank(c.declared_status)
    } else {
        args.iter()
            .map(|a| {
                let weakest = a
                    .supports
                    .iter()
                    .chain(a.side.iter())
                    .map(|s| oracle_rank(g, s))
                    .min()
                    .unwrap_or(4);
                capped(g, &a.id, weakest)
            })
            .max()
            .unwrap()
    };
    capped(g, node, raw)
}

/// Brute-force conditioning: enumerate the four worlds and count the mass
/// where the evidence holds, under the claim and under its negation.
pub fn oracle_likelihoods(joint: [[f64; 2]; 2]) -> (f64, f64) {
    let (mut e_and_h, mut h, mut e_and_nh, mut nh) = (0.0, 0.0, 0.0, 0.0);
    for (hi, row) in joint.iter().enumerate() {
        for (ei, p) in row.iter().enumerate() {
            let claim_holds = hi == 0;
            let evidence_holds = ei == 0;
            if claim_holds {
                h += p;
                if evidence_holds {
                    e_and_h += p;
                }
            } else {
                nh += p;
                if evidence_holds {
                    e_and_nh += p;
                }
            }
        }
    }
    (e_and_h / h, e_and_nh / nh)
}

pub fn oracle_ko(p_e_h: f64, p_e_nh: f64) -> f64 {
    (p_e_h - p_e_nh) / (p_e_h + p_e_nh)
}

/// A random normalised 2×2 table `[[P(h,e), P(h,¬e)], [P(¬h,e), P(¬h,¬e)]]`
/// with non-zero mass on both the claim and its negation.
pub fn random_joint<R: Rng>(rng: &mut R) -> [[f64; 2]; 2] {
    loop {
        let w: [f64; 4] = [rng.gen(), rng.gen(), rng.gen(), rng.gen()];
        let total: f64 = w.iter().sum();
        let mut t = [[w[0] / total, w[1] / total], [w[2] / total, w[3] / total]];
        // Make the table sum to exactly 1 so the library accepts it.
        let drift = 1.0 - (t[0][0] + t[0][1] + t[1][0] + t[1][1]);
        t[1][1] += drift;
        let ok = t.iter().flatten().all(|p| (0.0..=1.0).contains(p));
        if ok && t[0][0] + t[0][1] > 1e-9 && t[1][0] + t[1][1] > 1e-9 && t[0][0] + t[1][0] > 1e-9 {
            return t;
        }
    }
}

pub fn ranks(g: &CaseGraph) -> Vec<(NodeId, u8)> {
    let map = propagate(g, &NoExpansions).unwrap();
    g.claims().map(|c| (c.id.clone(), rank(map.status(&c.id)))).collect()
}

/// Raises the declared colour of one leaf (evidence, or a claim without
/// arguments). Returns `None` when the graph has no upgradable leaf.
pub fn upgrade_a_leaf<R: Rng>(rng: &mut R, g: &CaseGraph) -> Option<CaseGraph> {
    let mut leaves: Vec<NodeId> = g.evidence().map(|e| e.id.clone()).collect();
    leaves.extend(g.claims().filter(|c| g.arguments_for(&c.id).next().is_none()).map(|c| c.id.clone()));
    let target = leaves.choose(rng)?.clone();
    let current = g
        .evidence_item(&target)
        .map(|e| e.declared_status)
        .or_else(|| g.claim(&target).map(|c| c.declared_status))
        .unwrap();
    let higher: Vec<Status> = LEVELS.into_iter().filter(|s| rank(Some(*s)) > rank(current)).collect();
    let new = *higher.choose(rng)?;

    let mut out = CaseGraph::new(g.title.clone());
    for c in g.claims() {
        let mut c: Claim = c.clone();
        if c.id == target {
            c.declared_status = Some(new);
        }
        out.add_claim(c).unwrap();
    }
    for e in g.evidence() {
        let mut e: Evidence = e.clone();
        if e.id == target {
            e.declared_status = Some(new);
        }
        out.add_evidence(e).unwrap();
    }
    for a in g.arguments() {
        out.add_argument(a.clone()).unwrap();
    }
    for d in g.defeaters() {
        out.add_defeater(d.clone()).unwrap();
    }
    Some(out)
}

/// A three-requirement report (`G0` over `a1`, `a2`) with the given records.
pub fn workflow_report(records: &[(&str, Status, &str, Option<Revise>)]) -> VerificationReport {
    let cat = parse_catalogue("outcome G0 \"root\" template=\"root\"\noutcome a1 \"a\" template=\"a\" parent=G0\noutcome a2 \"b\" template=\"b\" parent=G0\n").unwrap();
    let reqs = derive_requirements(&cat, "svc").unwrap();
    let recs: Vec<VerificationRecord> = records
        .iter()
        .map(|(id, status, just, revise)| VerificationRecord {
            requirement: id.parse().unwrap(),
            status: *status,
            justification: just.to_string(),
            specs: vec!["SS-001".into()],
            revise: *revise,
        })
        .collect();
    verify(&reqs, &recs, None).unwrap()
}

/// Every combination of colour, justification and revise flag over two
/// requirements, plus the empty reports.
pub fn workflow_reports() -> Vec<VerificationReport> {
    let statuses = [Status::Satisfied, Status::Partial, Status::StandardsAssumed, Status::Deferred];
    let revises = [None, Some(Revise::Requirements), Some(Revise::Specs)];
    let justs = ["", "because"];
    let mut combos = vec![VerificationReport::default(), workflow_report(&[])];
    for s in statuses {
        for r in revises {
            for j in justs {
                for s2 in statuses {
                    for r2 in revises {
                        combos.push(workflow_report(&[("a1", s, j, r), ("a2", s2, "why", r2)]));
                    }
                }
            }
        }
    }
    combos
}
