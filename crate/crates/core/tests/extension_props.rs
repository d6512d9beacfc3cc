use uslkit::caps::Budget;
use uslkit::extension::{decompose, free_extend, verify_embedding};
use uslkit::order::{enumerate_usl_top, is_almost_end_extension, ElementId, FiniteUslTop, SubstructureWitness};
use uslkit::sentence::generated_substructure;

fn all_up_to(n: usize) -> Vec<FiniteUslTop> {
    enumerate_usl_top(n, &mut Budget::unlimited()).unwrap().all().cloned().collect()
}

/// Every join-closed subset containing bot and top, as a substructure.
fn substructures(v: &FiniteUslTop) -> Vec<SubstructureWitness> {
    let mid: Vec<ElementId> = v.elements().filter(|&x| x != v.bot() && x != v.top()).collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << mid.len() {
        let seed: Vec<ElementId> = (0..mid.len()).filter(|i| mask >> i & 1 == 1).map(|i| mid[i]).collect();
        let w = generated_substructure(v, &seed);
        if w.small().size() == seed.len() + if v.size() == 1 { 1 } else { 2 } {
            out.push(w);
        }
    }
    out
}

#[test]
fn free_extension_sizes_and_embeddings() {
    for u in all_up_to(6).into_iter().filter(|u| u.size() >= 2) {
        for k in 0..=3 {
            let gens: Vec<String> = (0..k).map(|i| format!("x{i}")).collect();
            let e = free_extend(&u, &gens).unwrap();
            assert_eq!(e.result.size(), (u.size() - 1) * (1 << k) + 1);
            assert!(verify_embedding(&e.embedding, &u, &e.result).passed());
            let w = SubstructureWitness::new(u.clone(), e.result.clone(), e.embedding.clone()).unwrap();
            assert!(is_almost_end_extension(&w));
        }
    }
}

#[test]
fn decomposition_round_trip_up_to_six() {
    let mut pairs = 0;
    for v in all_up_to(6) {
        for w in substructures(&v).into_iter().filter(is_almost_end_extension) {
            let d = decompose(&w).unwrap_or_else(|e| panic!("{e}"));
            let checks = d.verify();
            assert!(checks.passed(), "{checks}");
            // only the top class of U1 may grow
            let u1 = &d.u1.result;
            for x in u1.elements().filter(|&x| x != u1.top()) {
                let y = d.u2_prime.element(x, 0);
                assert_eq!(d.projection.iter().filter(|&&c| c == d.projection[y.0]).count(), 1);
            }
            pairs += 1;
        }
    }
    assert!(pairs > 25, "{pairs}");
}
