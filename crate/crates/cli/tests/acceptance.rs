//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeSet;
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use caseflow::blocks::validate_blocks;
use caseflow::case::{check_wellformed, has_errors, BlockType, NodeId};
use caseflow::confirm::{ko_measure, likelihoods_from_joint, JointDistribution, Likelihoods};
use caseflow::dpn::{fire, initial_marking, parse_events, parse_net, reachable, replay};
use caseflow::dsl::{parse, serialize};
use caseflow::fixtures;
use caseflow::resilience::{advance, parse_specs, WorkflowState};
use caseflow::status::{propagate, NoExpansions};

use common::dpn_oracle::{self, flat};
use common::{oracle_ko, oracle_likelihoods, oracle_rank, random_case, random_joint, rank, ranks, upgrade_a_leaf, Shape};

const BIN: &str = env!("CARGO_BIN_EXE_caseflow");

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn core_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core")
}

fn caseflow(args: &[&str]) -> Result<(i32, String, String), String> {
    let o = Command::new(BIN).args(args).output().map_err(|e| e.to_string())?;
    Ok((
        o.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&o.stdout).into_owned(),
        String::from_utf8_lossy(&o.stderr).into_owned(),
    ))
}

fn is_outcome_row(id: &str) -> bool {
    let mut chars = id.chars();
    matches!(chars.next(), Some('a'..='d')) && chars.as_str().parse::<u32>().is_ok()
}

/// Runs `status` on a case and checks the outcome-row colours and G0.
fn failure_response_status(case: &Path) -> Result<Duration, String> {
    let start = Instant::now();
    let (code, out, err) = caseflow(&["status", case.to_str().unwrap(), "--format", "json"])?;
    let elapsed = start.elapsed();
    ensure(code == 0, || format!("status exited {code}: {err}"))?;
    let mut by_colour: std::collections::BTreeMap<String, BTreeSet<String>> = Default::default();
    let mut root = None;
    for line in out.lines() {
        let v: serde_json::Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
        let (Some(id), Some(status)) = (v["id"].as_str(), v["status"].as_str()) else { continue };
        if id == "G0" {
            root = Some(status.to_string());
        }
        if is_outcome_row(id) {
            by_colour.entry(status.to_string()).or_default().insert(id.to_string());
        }
    }
    let set = |ids: &[&str]| ids.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
    let get = |c: &str| by_colour.get(c).cloned().unwrap_or_default();
    ensure(get("orange") == set(&["a1", "a2", "a8"]), || format!("orange rows {:?}", get("orange")))?;
    ensure(get("yellow") == set(&["a3", "a4", "a5", "a6"]), || format!("yellow rows {:?}", get("yellow")))?;
    ensure(get("red") == set(&["b3", "b8", "c2", "c4", "d2"]), || format!("red rows {:?}", get("red")))?;
    ensure(root.as_deref() == Some("red"), || format!("G0 is {root:?}"))?;
    Ok(elapsed)
}

fn criterion_1() -> Outcome {
    let elapsed = failure_response_status(&core_dir().join("fixtures/failure_response.casl"))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("3 orange, 4 yellow, 5 red outcome rows, G0 red, {} ms", elapsed.as_millis()))
}

fn criterion_2() -> Outcome {
    let specs = parse_specs(fixtures::SPECS).map_err(|e| e.to_string())?;
    ensure(specs.len() == 10, || format!("{} specs", specs.len()))?;
    for child in ["SS-0051", "SS-0052"] {
        let s = specs.iter().find(|s| s.id == child).ok_or(format!("{child} missing"))?;
        ensure(s.parent.as_deref() == Some("SS-005"), || format!("{child} parent {:?}", s.parent))?;
    }
    Ok("10 specs, SS-0051 and SS-0052 under SS-005".into())
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    let n = 1000;
    for i in 0..n {
        let shape = Shape::any(&mut rng, 24);
        let doc = random_case(&mut rng, &shape);
        let text = serialize(&doc).map_err(|e| format!("case {i}: {e}"))?;
        let back = parse(&text).map_err(|e| format!("case {i}: {e}"))?;
        ensure(back == doc, || format!("case {i} differs after parsing"))?;
        let again = serialize(&back).map_err(|e| format!("case {i}: {e}"))?;
        ensure(again == text, || format!("case {i} not byte-stable"))?;
    }
    Ok(format!("{n} generated cases, zero failures"))
}

fn criterion_4() -> Outcome {
    let dir = core_dir().join("tests/fixtures/blocks");
    let mut files: Vec<PathBuf> = fs::read_dir(&dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .map(|e| e.map(|e| e.path()).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    files.sort();
    let mut valid = BTreeSet::new();
    let mut seeded: std::collections::BTreeMap<String, usize> = Default::default();
    for path in &files {
        let name = path.file_stem().unwrap().to_string_lossy().to_string();
        let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
        let doc = parse(&text).map_err(|e| format!("{name}: {e}"))?;
        ensure(!has_errors(&check_wellformed(&doc.graph)), || format!("{name} is malformed"))?;
        let expected: BTreeSet<(String, String)> = text
            .lines()
            .filter_map(|l| l.strip_prefix("# expect: "))
            .filter(|r| *r != "none")
            .filter_map(|r| r.split_once(' ').map(|(a, b)| (a.to_string(), b.to_string())))
            .collect();
        let got: BTreeSet<(String, String)> = validate_blocks(&doc.graph)
            .into_iter()
            .map(|d| (d.argument.to_string(), d.rule.id().to_string()))
            .collect();
        ensure(got == expected, || format!("{name}: flagged {got:?}, seeded {expected:?}"))?;
        let block = name.split('_').next().unwrap_or_default().to_string();
        if expected.is_empty() {
            valid.insert(block);
        } else {
            *seeded.entry(block).or_default() += 1;
        }
    }
    for b in BlockType::ALL {
        let k = b.keyword();
        ensure(valid.contains(k), || format!("no valid fixture for {k}"))?;
        let n = seeded.get(k).copied().unwrap_or(0);
        ensure(n >= 2, || format!("{k}: only {n} seeded fixtures"))?;
    }
    Ok(format!("{} fixtures over 5 block types, exactly the seeded arguments flagged", files.len()))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0f);
    for _ in 0..10_000 {
        let l = Likelihoods::new(rng.gen(), rng.gen()).map_err(|e| e.to_string())?;
        let f = ko_measure(&l).map_err(|e| e.to_string())?;
        let g = ko_measure(&l.negated()).map_err(|e| e.to_string())?;
        ensure((f + g).abs() <= 1e-12, || format!("antisymmetry fails for {l:?}"))?;
        ensure((-1.0..=1.0).contains(&f), || format!("{f} out of bounds"))?;
    }
    for _ in 0..10_000 {
        let t = random_joint(&mut rng);
        let d = JointDistribution::new(t[0][0], t[0][1], t[1][0], t[1][1]).map_err(|e| e.to_string())?;
        let got = ko_measure(&likelihoods_from_joint(&d).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let (peh, penh) = oracle_likelihoods(t);
        let want = oracle_ko(peh, penh);
        ensure((got - want).abs() <= 1e-12, || format!("{t:?}: {got} vs {want}"))?;
    }
    let point = ko_measure(&Likelihoods::new(0.9, 0.1).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure((point - 0.8).abs() <= 1e-12, || format!("(0.9, 0.1) gave {point}"))?;
    Ok("antisymmetry and bounds over 10^4 pairs, oracle over 10^4 tables, (0.9, 0.1) -> 0.8".into())
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5a7);
    let mut checked = 0;
    while checked < 10_000 {
        let shape = Shape { expands: false, levels_only: true, ..Shape::any(&mut rng, 20) };
        let doc = random_case(&mut rng, &shape);
        let Some(upgraded) = upgrade_a_leaf(&mut rng, &doc.graph) else { continue };
        for ((id, before), (_, after)) in ranks(&doc.graph).iter().zip(&ranks(&upgraded)) {
            ensure(after >= before, || format!("{id} dropped from {before} to {after}"))?;
        }
        checked += 1;
    }
    for i in 0..10_000 {
        let shape = Shape { expands: false, levels_only: true, ..Shape::any(&mut rng, 12) };
        let doc = random_case(&mut rng, &shape);
        let map = propagate(&doc.graph, &NoExpansions).map_err(|e| e.to_string())?;
        let ids = doc.graph.claims().map(|c| c.id.clone()).chain(doc.graph.evidence().map(|e| e.id.clone()));
        for id in ids {
            ensure(rank(map.status(&id)) == oracle_rank(&doc.graph, &id), || format!("dag {i}: {id} disagrees"))?;
        }
    }
    Ok("monotone over 10^4 upgrades (<= 20 nodes), oracle agreement on 10^4 DAGs (<= 12 nodes)".into())
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let net = parse_net(fixtures::DELIVERY_NET).map_err(|e| e.to_string())?;
    let init = initial_marking(&net);
    let log = parse_events(fixtures::DELIVERY_LOG).map_err(|e| e.to_string())?;
    let (_, first) = replay(&net, &init, &log).map_err(|e| e.to_string())?;
    for _ in 0..10 {
        let (_, again) = replay(&net, &init, &log).map_err(|e| e.to_string())?;
        ensure(again.fingerprint() == first.fingerprint(), || "trace fingerprint changed".into())?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0xd9);
    let transitions: Vec<NodeId> = net.transitions.keys().cloned().collect();
    let mut failures = 0;
    for run in 0..200 {
        let mut m = init.clone();
        for step in 0..20 {
            if rng.gen_bool(0.2) {
                let inject = parse_events(&format!("inject Requested artefact=r{run}s{step},kind=delivery\n"))
                    .map_err(|e| e.to_string())?;
                m = replay(&net, &m, &inject).map_err(|e| e.to_string())?.0;
                continue;
            }
            let t = &transitions[rng.gen_range(0..transitions.len())];
            let before = m.canonical();
            match fire(&net, &m, t) {
                Ok((next, _)) => m = next,
                Err(_) => {
                    failures += 1;
                    ensure(m.canonical() == before, || format!("failed `{t}` changed the marking"))?;
                }
            }
        }
    }
    ensure(failures > 0, || "no failed firing was exercised".into())?;

    let got = reachable(&net, &init, 2, 6).map_err(|e| e.to_string())?;
    let mut want = BTreeSet::new();
    dpn_oracle::reach(&net, &flat(&init), 2, 6, &mut want);
    ensure(got.fingerprints == want, || {
        format!("{} markings vs oracle {}", got.fingerprints.len(), want.len())
    })?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "deterministic replay, {failures} failed firings left markings intact, {} reachable markings match the oracle, {} ms",
        want.len(),
        elapsed.as_millis()
    ))
}

fn criterion_8() -> Outcome {
    let allowed: BTreeSet<(WorkflowState, WorkflowState)> = {
        use WorkflowState::*;
        [
            (S1UnderstandOutcomes, S2DeriveRequirements),
            (S2DeriveRequirements, S3Verify),
            (S3Verify, S4Evaluate),
            (S4Evaluate, S5DevelopAndOperate),
            (S4Evaluate, S6ReviseRequirements),
            (S4Evaluate, S7ReviseSpecs),
            (S6ReviseRequirements, S3Verify),
            (S7ReviseSpecs, S3Verify),
        ]
        .into_iter()
        .collect()
    };
    let declared: BTreeSet<_> = WorkflowState::EDGES.into_iter().collect();
    ensure(declared == allowed, || format!("declared edges {declared:?}"))?;
    let reports = common::workflow_reports();
    let mut seen = BTreeSet::new();
    for state in WorkflowState::ALL {
        for report in &reports {
            match advance(state, report) {
                Ok(next) => {
                    ensure(allowed.contains(&(state, next)), || format!("{state} -> {next}"))?;
                    seen.insert((state, next));
                }
                Err(_) => ensure(state.is_terminal(), || format!("{state} refused to advance"))?,
            }
        }
    }
    ensure(seen == allowed, || format!("edges never taken: {:?}", allowed.difference(&seen)))?;
    Ok(format!("{} states x {} reports, only the 8 allowed edges taken", WorkflowState::ALL.len(), reports.len()))
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let case = dir.path().join("emitted.casl");
    let fx = core_dir().join("fixtures");
    let arg = |name: &str| fx.join(name).to_string_lossy().into_owned();
    let (code, _, err) = caseflow(&[
        "resilience",
        "verify",
        "--catalogue",
        &arg("failure_response.outcomes"),
        "--records",
        &arg("delivery.records"),
        "--specs",
        &arg("delivery.specs"),
        "--service",
        fixtures::SERVICE,
        "--emit-case",
        case.to_str().unwrap(),
    ])?;
    ensure(code == 0, || format!("verify exited {code}: {err}"))?;
    let (code, out, err) = caseflow(&["check", case.to_str().unwrap(), "--format", "json"])?;
    ensure(code == 0, || format!("check exited {code}: {err}"))?;
    let summary: serde_json::Value =
        serde_json::from_str(out.lines().last().unwrap_or("{}")).map_err(|e| e.to_string())?;
    ensure(summary["errors"] == 0, || format!("check reported {summary}"))?;
    failure_response_status(&case)?;
    Ok("emitted case checks clean and reproduces criterion 1".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("failure-response case statuses", criterion_1),
        ("service specs fixture", criterion_2),
        ("round-trip", criterion_3),
        ("block-rule corpus", criterion_4),
        ("confirmation math", criterion_5),
        ("status algebra", criterion_6),
        ("lifecycle net", criterion_7),
        ("workflow state machine", criterion_8),
        ("end-to-end verify, check, status", criterion_9),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| Err(p.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into())));
        match result {
            Ok(detail) => println!("PASS {}: {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}: {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
