//! The acceptance criteria, one line each. Runs without the libtest harness
//! so the summary always prints; exits nonzero if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::io::Write;
use std::time::{Duration, Instant};

use common::p;
use lr_honeycomb::dual::{flow_to_filling, junction_diversion};
use lr_honeycomb::honeycomb::{
    canonical_honey_flow, honeycomb_from_filling, honeycomb_type, honeycombs_equal, overlay, overlay_flow,
    replay_trace_on_flow,
};
use lr_honeycomb::{
    canonical_flow, count_fillings, count_hives, direct_sum, enumerate_fillings, sum_fillings, Class, Hive, LrFilling,
    Partition, Strand,
};

const TRIPLE_SEED: u64 = 2;
const PAIR_SEED: u64 = 5;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: Vec<String>, checked: usize, what: &str) -> Outcome {
    let pass = failures.is_empty();
    let mut detail = format!("{}/{checked} {what}", checked - failures.len());
    if let Some(first) = failures.first() {
        detail.push_str(&format!("; first failure: {first}"));
    }
    Outcome { pass, detail }
}

fn worked_triples() -> [(Partition, Partition, Partition); 2] {
    [
        (p(&[10, 6, 1]), p(&[13, 7, 1]), p(&[17, 12, 9])),
        (p(&[9, 4]), p(&[12, 6]), p(&[18, 13])),
    ]
}

fn corpus_fillings() -> Vec<LrFilling> {
    common::triples(TRIPLE_SEED, 50, 4, 6).iter().flat_map(|(m, n, l)| enumerate_fillings(m, n, l)).collect()
}

fn hive_values() -> Outcome {
    let hive = Hive::new(vec![
        vec![0],
        vec![10, 18],
        vec![19, 27, 34],
        vec![24, 34, 42, 46],
        vec![27, 38, 48, 54, 57],
        vec![28, 40, 51, 58, 64, 65],
    ])
    .unwrap();
    let mut bad = Vec::new();
    match hive.to_filling() {
        Ok(f) => {
            if (f.k(2, 4), f.k(2, 2)) != (2, 7) {
                bad.push(format!("k(2,4), k(2,2) = {}, {}", f.k(2, 4), f.k(2, 2)));
            }
            if Hive::from_filling(&f).as_ref() != Ok(&hive) {
                bad.push("hive not reproduced".into());
            }
        }
        Err(e) => bad.push(e.to_string()),
    }
    let want = (p(&[10, 9, 5, 3, 1]), p(&[12, 11, 7, 6, 1]), p(&[18, 16, 12, 11, 8]));
    if hive.hive_type().as_ref() != Ok(&want) {
        bad.push(format!("type {:?}", hive.hive_type()));
    }
    outcome(bad, 3, "hive checks")
}

fn round_trips(fillings: &[LrFilling]) -> Outcome {
    let mut bad = Vec::new();
    for f in fillings {
        let hive = Hive::from_filling(f).and_then(|h| h.to_filling());
        let grid = f.to_grid().and_then(|g| LrFilling::from_grid(&g, f.mu(), f.nu(), f.lambda()));
        let flow = canonical_flow(f).and_then(|(g, fl)| flow_to_filling(&g, &fl));
        for (name, back) in [("hive", hive), ("grid", grid), ("flow", flow)] {
            if back.as_ref() != Ok(f) {
                bad.push(format!("{name} round trip of {f:?}"));
            }
        }
    }
    outcome(bad, fillings.len(), "fillings")
}

fn count_equality() -> Outcome {
    let mut triples = common::triples(TRIPLE_SEED, 50, 4, 6);
    triples.extend(worked_triples());
    let mut bad = Vec::new();
    for (m, n, l) in &triples {
        let (a, b) = (count_fillings(m, n, l), count_hives(m, n, l));
        if a != b {
            bad.push(format!("{m} {n} {l}: {a} fillings, {b} hives"));
        }
    }
    outcome(bad, triples.len(), "triples")
}

fn worked_sums() -> Outcome {
    let [(m1, n1, l1), (m2, n2, l2)] = worked_triples();
    let (a, b) = (enumerate_fillings(&m1, &n1, &l1), enumerate_fillings(&m2, &n2, &l2));
    let want = (p(&[10, 9, 6, 4, 1]), p(&[13, 12, 7, 6, 1]), p(&[18, 17, 13, 12, 9]));
    let mut bad = Vec::new();
    for f1 in &a {
        for f2 in &b {
            match sum_fillings(f1, f2) {
                Ok((s, _)) => {
                    let ty = (s.mu().clone(), s.nu().clone(), s.lambda().clone());
                    if !s.validate().ok() || ty != want {
                        bad.push(format!("{f1:?} + {f2:?}"));
                    }
                }
                Err(e) => bad.push(format!("{f1:?} + {f2:?}: {e}")),
            }
        }
    }
    outcome(bad, a.len() * b.len(), "pairs")
}

fn overlays(pairs: &[(LrFilling, LrFilling)]) -> Outcome {
    let mut bad = Vec::new();
    for (n, (f1, f2)) in pairs.iter().enumerate() {
        let same = sum_fillings(f1, f2).and_then(|(s, _)| {
            let stacked = overlay(&honeycomb_from_filling(f1)?, &honeycomb_from_filling(f2)?);
            Ok(honeycombs_equal(&honeycomb_from_filling(&s)?, &stacked))
        });
        if same != Ok(true) {
            bad.push(format!("pair {n}: {same:?}"));
        }
    }
    outcome(bad, pairs.len(), "pairs")
}

/// Saturation, per-label conservation at every face, and `k(i,j)` units of
/// label `i` leaving through row `j`, checked edge by edge.
fn flow_properties(fillings: &[LrFilling]) -> Outcome {
    let mut bad = Vec::new();
    for f in fillings {
        let Ok((g, fl)) = canonical_flow(f) else {
            bad.push(format!("no flow for {f:?}"));
            continue;
        };
        let mut ok = (0..g.edges().len()).all(|e| fl.total(e) == g.edges()[e].capacity);
        for face in g.faces() {
            let (ins, outs) = g.face_io(face);
            let tally = |edges: &[usize]| {
                let mut t: BTreeMap<Strand, u64> = BTreeMap::new();
                for &e in edges {
                    for (s, a) in &fl.loads[e] {
                        *t.entry(*s).or_default() += a;
                    }
                }
                t.retain(|_, a| *a > 0);
                t
            };
            ok &= tally(&ins) == tally(&outs);
        }
        for j in 1..=f.r() {
            let stub = g.edge_index(j, j - 1, Class::Lambda);
            for i in 1..=j {
                ok &= fl.amount(stub, Strand::Content(i)) == f.k(i, j);
                ok &= junction_diversion(&g, &fl, i, j) == f.k(i, j);
            }
        }
        if !ok {
            bad.push(format!("{f:?}"));
        }
    }
    outcome(bad, fillings.len(), "fillings")
}

fn replays(pairs: &[(LrFilling, LrFilling)]) -> Outcome {
    let mut bad = Vec::new();
    for (n, (f1, f2)) in pairs.iter().enumerate() {
        let verdict = sum_fillings(f1, f2).and_then(|(s, trace)| {
            let done = replay_trace_on_flow(&overlay_flow(f1, f2)?, &trace)?;
            let flow = done.flow()?;
            let consistent = flow.check(&done.honeycomb).ok();
            Ok((consistent, flow == canonical_honey_flow(&s)?.1))
        });
        match verdict {
            Ok((true, true)) => {}
            Ok((consistent, canonical)) => bad.push(format!("pair {n}: consistent {consistent}, canonical {canonical}")),
            Err(e) => bad.push(format!("pair {n}: {e}")),
        }
    }
    outcome(bad, pairs.len(), "pairs")
}

fn identities(fillings: &[LrFilling]) -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for f in fillings {
        checked += 1;
        if sum_fillings(f, &LrFilling::empty()).map(|(s, _)| s).as_ref() != Ok(f) {
            bad.push(format!("sum with empty changed {f:?}"));
        }
        for part in [f.mu(), f.nu(), f.lambda()] {
            if &direct_sum(part, &Partition::empty()) != part {
                bad.push(format!("direct sum changed {part}"));
            }
        }
    }
    for lambda in [p(&[1]), p(&[3, 1]), p(&[4, 4, 2]), p(&[5, 3, 3, 1])] {
        checked += 1;
        let z = LrFilling::zero(&lambda);
        let ty = (lambda.clone(), Partition::zeros(lambda.len()), lambda.clone());
        let mut ok = z.validate().ok();
        ok &= Hive::from_filling(&z).and_then(|h| h.to_filling()).as_ref() == Ok(&z);
        ok &= z.to_grid().and_then(|g| LrFilling::from_grid(&g, z.mu(), z.nu(), z.lambda())).as_ref() == Ok(&z);
        ok &= canonical_flow(&z).and_then(|(g, fl)| flow_to_filling(&g, &fl)).as_ref() == Ok(&z);
        ok &= honeycomb_from_filling(&z).and_then(|h| honeycomb_type(&h)).as_ref() == Ok(&ty);
        ok &= sum_fillings(&z, &LrFilling::empty()).map(|(s, _)| s).as_ref() == Ok(&z);
        if !ok {
            bad.push(format!("zero filling of {lambda}"));
        }
    }
    outcome(bad, checked, "identity checks")
}

fn main() {
    let fillings = corpus_fillings();
    let pairs = common::pairs(PAIR_SEED, 200, 3, 5);
    type Criterion<'a> = (&'a str, Duration, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("hive bijection on the worked hive", Duration::from_secs(1), Box::new(hive_values)),
        ("round trips", Duration::from_secs(30), Box::new(|| round_trips(&fillings))),
        ("filling and hive counts agree", Duration::from_secs(120), Box::new(count_equality)),
        ("worked sums are valid of the summed type", Duration::from_secs(120), Box::new(worked_sums)),
        ("sum honeycomb equals overlay", Duration::from_secs(120), Box::new(|| overlays(&pairs))),
        ("canonical flow properties", Duration::from_secs(120), Box::new(|| flow_properties(&fillings))),
        ("trace replay gives the canonical flow", Duration::from_secs(120), Box::new(|| replays(&pairs))),
        ("identities", Duration::from_secs(120), Box::new(|| identities(&fillings))),
    ];
    let mut failed = 0;
    let mut err = std::io::stderr().lock();
    for (n, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let pass = out.pass && took <= *budget;
        failed += usize::from(!pass);
        let _ = writeln!(
            err,
            "criterion {}: {} {name}: {} ({:.2}s, budget {}s)",
            n + 1,
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            took.as_secs_f64(),
            budget.as_secs()
        );
    }
    let _ = writeln!(err, "acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
