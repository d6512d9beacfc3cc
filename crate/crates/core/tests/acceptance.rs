//! Acceptance criteria. Runs as a plain binary and prints one line per
//! criterion; exits nonzero if any fails.

mod common;

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use uslkit::caps::{Budget, Caps};
use uslkit::extension::{decompose, free_extend, verify_embedding};
use uslkit::forcing::{
    check_branch_coding_free, decode, decode_projections, encode_bits, x_safe, Level, UniformTreeSpec,
};
use uslkit::order::{
    canonical_form, enumerate_usl_top, enumerate_usl_top_brute, find_isomorphism, is_almost_end_extension,
    SubstructureWitness,
};
use uslkit::sentence::{
    decide_pi2, decide_question1, decide_sigma2, parse, prenex_pi2, prenex_sigma2, Certificate, DecideError,
};
use uslkit::table::{
    build_rep_prefix, build_table, coding_pairs, verify_coding_ready, verify_table, MapId, RepPrefix,
};

const SEED: u64 = 0x5eed_2026;
/// Per-sentence limit for the curated suite.
const CURATED_LIMIT: Duration = Duration::from_secs(60);
/// Limit for the whole decomposition sweep.
const SWEEP_LIMIT: Duration = Duration::from_secs(600);
const RANDOM_SENTENCES: usize = 100;
const RANDOM_BITSTRINGS: usize = 1000;
const MAX_BITS: usize = 32;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sigma(text: &str, caps: &Caps) -> Result<Certificate, DecideError> {
    decide_sigma2(&prenex_sigma2(&parse(text).unwrap()).unwrap(), caps)
}

fn pi(text: &str, caps: &Caps) -> Result<Certificate, DecideError> {
    decide_pi2(&prenex_pi2(&parse(text).unwrap()).unwrap(), caps)
}

fn curated_suite() -> Outcome {
    let caps = Caps::default();
    let cases: [(&str, bool, bool, Option<usize>); 7] = [
        ("exists x . x = x", true, true, Some(2)),
        ("exists x y . x + y = 1 & !(x = 1) & !(y = 1)", true, true, Some(4)),
        ("exists x . !(x = 0) & forall y . (y <= x -> (y = 0 \\/ y = x))", true, true, Some(3)),
        ("exists x . !(x = 1) & forall y . y <= x", true, false, None),
        ("forall x . x <= 1", false, true, None),
        ("forall x . exists y . !(y <= x) & !(x <= y)", false, false, None),
        ("forall x . exists y . (x <= y & !(x = y)) \\/ x = 1", false, true, None),
    ];
    let mut slowest = Duration::ZERO;
    for (text, is_sigma, want, witness_size) in cases {
        let start = Instant::now();
        let c = if is_sigma { sigma(text, &caps) } else { pi(text, &caps) }.map_err(|e| format!("{text}: {e}"))?;
        let took = start.elapsed();
        slowest = slowest.max(took);
        ensure(c.verdict == Some(want), || format!("{text}: got {:?}", c.verdict))?;
        ensure(took <= CURATED_LIMIT, || format!("{text}: {took:.1?}"))?;
        c.check().map_err(|e| format!("{text}: certificate: {e}"))?;
        if let Some(n) = witness_size {
            let w = c.witness.as_ref().ok_or_else(|| format!("{text}: no witness"))?;
            ensure(w.base.size() == n, || format!("{text}: witness of size {}", w.base.size()))?;
        }
    }
    Ok(format!("7 sentences, slowest {slowest:.2?}"))
}

fn oracle_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut caps = Caps::default();
    caps.max_exists = 3;
    caps.max_forall = 3;
    caps.max_witness_size = 9;
    let models: Vec<Model> = all_up_to(9).iter().map(Model::new).collect();
    // collapsed structures are not witnesses: 0 and 1 differ in the degrees
    let small = |k: usize| models.iter().filter(move |m| m.n >= 2 && m.n <= (1 << k) + 1);
    let (mut checked, mut trues) = (0, 0);
    for i in 0..2 * RANDOM_SENTENCES {
        let existential = i % 2 == 0;
        let k = rng.gen_range(1..=3);
        let vars = names(if existential { "x" } else { "y" }, k);
        let m = random_matrix(&mut rng, k, 2);
        let body = m.show(&vars);
        let (text, got) = if existential {
            let t = quantify("exists", &vars, &body);
            let v = sigma(&t, &caps).map_err(|e| format!("{t}: {e}"))?.verdict;
            let want = small(k).any(|md| md.assignments(k).any(|a| m.eval(md, &a)));
            (t, (v, want))
        } else {
            let t = quantify("forall", &vars, &body);
            let v = pi(&t, &caps).map_err(|e| format!("{t}: {e}"))?.verdict;
            let want = small(k).all(|md| md.assignments(k).all(|a| m.eval(md, &a)));
            (t, (v, want))
        };
        ensure(got.0 == Some(got.1), || format!("{text}: decided {:?}, oracle {}", got.0, got.1))?;
        checked += 1;
        trues += usize::from(got.1);
    }
    Ok(format!("{checked} one-block sentences, {trues} true, 0 mismatches"))
}

fn duality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let caps = Caps::default();
    let (mut agreed, mut capped, mut trues) = (0, 0, 0);
    while agreed < RANDOM_SENTENCES {
        ensure(capped < RANDOM_SENTENCES, || format!("{capped} sentences over caps"))?;
        let (m, k) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let mut vars = names("x", m);
        vars.extend(names("y", k));
        let body = random_matrix(&mut rng, m + k, 2).show(&vars);
        let s = quantify("exists", &vars[..m], &quantify("forall", &vars[m..], &body));
        let neg = format!("!({s})");
        match (sigma(&s, &caps), pi(&neg, &caps)) {
            (Ok(a), Ok(b)) => {
                ensure(a.verdict.is_some() && a.verdict == b.verdict.map(|v| !v), || {
                    format!("{s}: sigma {:?}, pi of negation {:?}", a.verdict, b.verdict)
                })?;
                agreed += 1;
                trues += usize::from(a.verdict == Some(true));
            }
            (Err(DecideError::CapExceeded { .. }), _) | (_, Err(DecideError::CapExceeded { .. })) => capped += 1,
            (Err(e), _) | (_, Err(e)) => return Err(format!("{s}: {e}")),
        }
    }
    Ok(format!("{agreed} Σ₂ sentences ({trues} true), {capped} skipped over caps"))
}

/// Moves a candidate onto `u` through an isomorphism of its small structure.
fn transport(u: &uslkit::order::FiniteUslTop, w: &SubstructureWitness) -> SubstructureWitness {
    let iso = find_isomorphism(u, w.small()).expect("same isomorphism class");
    let inc = iso.iter().map(|&x| w.image(x)).collect();
    SubstructureWitness::new(u.clone(), w.big().clone(), inc).unwrap()
}

fn question1_sweep() -> Outcome {
    let mut by_class: HashMap<Vec<bool>, Vec<SubstructureWitness>> = HashMap::new();
    let mut pairs = 0;
    for v in all_up_to(6) {
        let mut local: HashMap<Vec<bool>, Vec<SubstructureWitness>> = HashMap::new();
        for w in substructures(&v) {
            let literal = aee_literal(w.small(), w.big(), w.inclusion());
            ensure(decide_question1(w.small(), std::slice::from_ref(&w)) == literal, || {
                format!("single candidate disagrees: {:?}", w.inclusion())
            })?;
            let key = canonical_form(w.small()).0.to_structure().leq_matrix().to_vec();
            local.entry(key.clone()).or_default().push(w.clone());
            by_class.entry(key).or_default().push(w);
            pairs += 1;
        }
        for group in local.values() {
            let u = group[0].small().clone();
            let cands: Vec<SubstructureWitness> = group.iter().map(|w| transport(&u, w)).collect();
            let literal = cands.iter().any(|c| aee_literal(c.small(), c.big(), c.inclusion()));
            ensure(decide_question1(&u, &cands) == literal, || "grouped candidates disagree".into())?;
        }
    }
    for group in by_class.values() {
        let u = group[0].small().clone();
        let cands: Vec<SubstructureWitness> = group.iter().map(|w| transport(&u, w)).collect();
        let literal = cands.iter().any(|c| aee_literal(c.small(), c.big(), c.inclusion()));
        ensure(decide_question1(&u, &cands) == literal, || "cross-structure group disagrees".into())?;
        // a list of non-extensions only
        let bad: Vec<SubstructureWitness> =
            cands.iter().filter(|c| !aee_literal(c.small(), c.big(), c.inclusion())).cloned().collect();
        ensure(!decide_question1(&u, &bad), || "accepted only non-extensions".into())?;
    }
    Ok(format!("{pairs} pairs, {} base classes", by_class.len()))
}

fn enumeration_regression() -> Outcome {
    const GOLDEN: [usize; 6] = [1, 1, 1, 2, 5, 15];
    let r = enumerate_usl_top(6, &mut Budget::unlimited()).map_err(|e| e.to_string())?;
    ensure(r.counts() == GOLDEN, || format!("counts {:?}", r.counts()))?;
    let brute: Vec<usize> = enumerate_usl_top_brute(5).iter().map(Vec::len).collect();
    ensure(brute == GOLDEN[..5], || format!("brute counts {brute:?}"))?;
    Ok(format!("counts {:?}, brute force agrees through size 5", r.counts()))
}

fn free_extension_law() -> Outcome {
    let mut n = 0;
    for u in all_up_to(6) {
        for k in 0..=3usize {
            let gens = names("g", k);
            let e = free_extend(&u, &gens).map_err(|e| e.to_string())?;
            let want = (u.size() - 1) * (1 << k) + 1;
            ensure(e.result.size() == want, || format!("|U| = {}, |X| = {k}: {}", u.size(), e.result.size()))?;
            ensure(verify_embedding(&e.embedding, &u, &e.result).passed(), || "embedding fails".into())?;
            ensure(aee_literal(&u, &e.result, &e.embedding), || "not almost initial".into())?;
            n += 1;
        }
    }
    Ok(format!("{n} free extensions"))
}

fn decomposition_sweep() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0;
    for v in all_up_to(6) {
        for w in substructures(&v).into_iter().filter(is_almost_end_extension) {
            let d = decompose(&w).map_err(|e| format!("{:?}: {e}", w.inclusion()))?;
            let checks = d.verify();
            ensure(checks.passed(), || format!("{checks}"))?;
            pairs += 1;
        }
    }
    let took = start.elapsed();
    ensure(took <= SWEEP_LIMIT, || format!("{took:.1?}"))?;
    Ok(format!("{pairs} pairs in {took:.2?}"))
}

fn diamond_rep(depth: usize) -> RepPrefix {
    build_rep_prefix(&uslkit::order::FiniteUslTop::diamond(), depth, true, &Caps::default()).unwrap()
}

fn table_machinery() -> Outcome {
    let caps = Caps::default();
    let lattices = all_up_to(5);
    for l in &lattices {
        let t = build_table(l, &caps).map_err(|e| e.to_string())?;
        ensure(verify_table(&t).passed(), || format!("table over a {}-element lattice", l.size()))?;
    }
    let r = diamond_rep(1);
    let report = verify_coding_ready(&r);
    ensure(report.passed(), || report.to_string())?;
    ensure(report.checks.iter().any(|(n, _)| n == "fresh extensions"), || "no fresh-extension check".into())?;
    let c = r.coding.as_ref().unwrap().coding_set();
    ensure(c.len() == 4, || format!("|C| = {}", c.len()))?;
    Ok(format!("{} tables; diamond prefix coding-ready with |C| = 4", lattices.len()))
}

fn coding_round_trip() -> Outcome {
    let r = diamond_rep(1);
    let l = r.lattice().clone();
    let tree = UniformTreeSpec::identity(&r, MAX_BITS);
    let pairs = coding_pairs(&l);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    for _ in 0..RANDOM_BITSTRINGS {
        let (x, y) = pairs[rng.gen_range(0..pairs.len())];
        let bits: Vec<bool> = (0..rng.gen_range(0..=MAX_BITS)).map(|_| rng.gen()).collect();
        let s = encode_bits(&tree, x, y, &bits).map_err(|e| e.to_string())?;
        ensure(decode(&r, &s, x, y).unwrap() == bits, || format!("{bits:?}"))?;
        let xs: Vec<u64> = s.iter().map(|&a| r.table.map(a)[x.0]).collect();
        let ys: Vec<u64> = s.iter().map(|&a| r.table.map(a)[y.0]).collect();
        ensure(decode_projections(&r, &xs, &ys, x, y).unwrap() == bits, || "projections".into())?;
    }
    let c = r.coding.as_ref().unwrap().coding_set();
    let mut swept = 0;
    for len in 0..=2 {
        for s in tree.strings(len) {
            for x in l.elements().filter(|&x| x != l.top()) {
                let safe = x_safe(&r, &s, x).unwrap();
                for (a, b) in s.iter().zip(&safe) {
                    ensure(!c.contains(b), || format!("{b} left in {s:?}"))?;
                    ensure(r.table.map(*a)[x.0] == r.table.map(*b)[x.0], || format!("{a} -> {b} at {}", l.name(x)))?;
                }
                swept += 1;
            }
        }
    }
    Ok(format!("{RANDOM_BITSTRINGS} bit strings; x_safe on {swept} (string, x) pairs"))
}

/// Random tree of depth 3. Tails copy the branch value or hold constants;
/// `clean` trees use constants outside `C` only.
fn random_tree(r: &RepPrefix, rng: &mut ChaCha8Rng, clean: bool) -> UniformTreeSpec {
    let c = r.coding.as_ref().unwrap().coding_set();
    let pick = |rng: &mut ChaCha8Rng, pos: usize| loop {
        let a = MapId(rng.gen_range(0..r.theta_len(pos)));
        if !c.contains(&a) {
            return a;
        }
    };
    let mut pos = 0;
    let root: Vec<MapId> = (0..rng.gen_range(0..=3))
        .map(|_| {
            pos += 1;
            MapId(rng.gen_range(0..r.theta_len(pos - 1)))
        })
        .collect();
    let mut levels = Vec::new();
    for l in 0..3 {
        let pi: Vec<MapId> = (0..rng.gen_range(0..=2))
            .map(|_| {
                pos += 1;
                pick(rng, pos - 1)
            })
            .collect();
        let tail: Vec<Option<MapId>> = (1..=rng.gen_range(0..=2))
            .map(|j| if !clean && rng.gen_bool(0.4) { None } else { Some(pick(rng, pos + j)) })
            .collect();
        let rho = (0..r.theta_len(l))
            .map(|a| std::iter::once(MapId(a)).chain(tail.iter().map(|t| t.unwrap_or(MapId(a)))).collect())
            .collect();
        pos += 1 + tail.len();
        levels.push(Level { pi, rho });
    }
    UniformTreeSpec { rep: r.clone(), root, levels }
}

fn passes(t: &UniformTreeSpec) -> (bool, bool) {
    (t.validate().passed(), check_branch_coding_free(t).passed())
}

/// Checkers passing on the original still pass.
fn preserved(before: (bool, bool), after: (bool, bool)) -> bool {
    (!before.0 || after.0) && (!before.1 || after.1)
}

fn tree_laws() -> Outcome {
    let r = diamond_rep(2);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let mut composed = 0;
    for i in 0..6 {
        let t = random_tree(&r, &mut rng, i % 2 == 0);
        ensure(t.validate().passed(), || format!("tree {i}: {}", t.validate()))?;
        ensure(t.congruence_respecting().is_none(), || format!("tree {i} not congruence-respecting"))?;
        let (ok, clean) = passes(&t);
        let all: Vec<Vec<MapId>> = (0..=3).flat_map(|n| t.strings(n)).collect();
        for s in &all {
            let full = t.apply(s).unwrap();
            for n in 0..s.len() {
                ensure(full.starts_with(&t.apply(&s[..n]).unwrap()), || format!("order at {s:?}"))?;
            }
        }
        for s in all.iter().filter(|s| s.len() < 3) {
            let h = t.height(s.len());
            let kids: Vec<Vec<MapId>> = (0..r.theta_len(s.len()))
                .map(|a| {
                    let mut e = s.clone();
                    e.push(MapId(a));
                    t.apply(&e).unwrap()
                })
                .collect();
            for (a, ka) in kids.iter().enumerate() {
                ensure(ka[h] == MapId(a), || format!("fork value at {s:?}"))?;
            }
        }
        for len in 0..=3 {
            let mut respecting = None;
            for s in t.strings(len) {
                let ts = t.restrict(&s).unwrap();
                ensure(preserved((ok, clean), passes(&ts)), || format!("checkers change under restriction to {s:?}"))?;
                if respecting.is_none() {
                    respecting = Some(ts.congruence_respecting().is_none());
                    ensure(respecting == Some(true), || format!("congruence lost at length {len}"))?;
                }
                for u in (0..=3 - len).flat_map(|n| ts.strings(n)) {
                    let mut su = s.clone();
                    su.extend(&u);
                    ensure(ts.restrict(&u).unwrap() == t.restrict(&su).unwrap(), || format!("composition at {s:?} {u:?}"))?;
                    ensure(ts.apply(&u).unwrap() == t.apply(&su).unwrap(), || format!("restriction at {s:?} {u:?}"))?;
                    composed += 1;
                }
            }
        }
        for len in 0..=t.root.len().min(2) {
            for mu in t.strings(len) {
                let tm = t.transfer(&mu).unwrap();
                ensure(preserved((ok, clean), passes(&tm)), || format!("checkers change under transfer {mu:?}"))?;
                ensure(tm.root[..len] == mu[..] && tm.root[len..] == t.root[len..], || "transfer root".into())?;
            }
        }
    }
    Ok(format!("6 depth-3 trees, {composed} composition instances"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("curated sentence suite", curated_suite),
        ("one-block oracle agreement", oracle_agreement),
        ("duality", duality),
        ("question-1 kernel", question1_sweep),
        ("enumeration regression", enumeration_regression),
        ("free-extension law", free_extension_law),
        ("decomposition theorem", decomposition_sweep),
        ("table machinery", table_machinery),
        ("coding round trip", coding_round_trip),
        ("uniform-tree laws", tree_laws),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if only.is_some_and(|o| o != i + 1) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} ({took:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why} ({took:.2?})", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
