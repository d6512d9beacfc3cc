use std::collections::BTreeSet;

use super::iso::{canonical_form, find_isomorphism, CanonicalForm};
use super::{ElementId, FiniteUslTop};
use crate::caps::{Budget, CapExceeded};

/// Structures grouped by size, each group in canonical order.
#[derive(Debug, Clone)]
pub struct EnumerationResult {
    pub by_size: Vec<Vec<FiniteUslTop>>,
}

impl EnumerationResult {
    /// Counts for sizes `1..=n`.
    pub fn counts(&self) -> Vec<usize> {
        self.by_size.iter().map(Vec::len).collect()
    }

    pub fn all(&self) -> impl Iterator<Item = &FiniteUslTop> {
        self.by_size.iter().flatten()
    }

    pub fn of_size(&self, n: usize) -> &[FiniteUslTop] {
        &self.by_size[n - 1]
    }
}

/// One representative per isomorphism class of USL^⊤ with `1..=n` elements.
///
/// Elements are added in a natural labeling: each new element is maximal
/// among those present, with a chosen downset. Two minimal upper bounds can
/// never be repaired by later (maximal) additions, so such branches are cut.
pub fn enumerate_usl_top(n: usize, budget: &mut Budget) -> Result<EnumerationResult, CapExceeded> {
    assert!(n >= 1, "size bound must be positive");
    let mut by_size = Vec::with_capacity(n);
    for size in 1..=n {
        let mut seen: BTreeSet<CanonicalForm> = BTreeSet::new();
        match size {
            1 => {
                budget.tick("enumerate_usl_top")?;
                seen.insert(canonical_form(&FiniteUslTop::chain(1)).0);
            }
            _ => {
                // down[j] = strict downset of element j as a bitmask
                let mut down: Vec<u64> = vec![0];
                grow(size - 2, &mut down, &mut seen, budget)?;
            }
        }
        by_size.push(seen.into_iter().map(|cf| cf.to_structure()).collect());
    }
    Ok(EnumerationResult { by_size })
}

fn grow(
    middle: usize,
    down: &mut Vec<u64>,
    seen: &mut BTreeSet<CanonicalForm>,
    budget: &mut Budget,
) -> Result<(), CapExceeded> {
    let present = down.len();
    if present == middle + 1 {
        budget.tick("enumerate_usl_top")?;
        let n = middle + 2;
        let top = n - 1;
        let mut leq = vec![false; n * n];
        for y in 0..n {
            for x in 0..n {
                leq[x * n + y] = x == y || y == top || (y < present && down[y] >> x & 1 == 1);
            }
        }
        if let Ok(u) = FiniteUslTop::from_leq(leq, 0, top) {
            seen.insert(canonical_form(&u).0);
        }
        return Ok(());
    }
    // candidate downsets: down-closed subsets of 0..present containing 0
    for mask in 0u64..(1 << (present - 1)) {
        let set = (mask << 1) | 1;
        let closed = (0..present).all(|x| set >> x & 1 == 0 || down[x] & !set == 0);
        if !closed {
            continue;
        }
        down.push(set);
        if joins_repairable(down) {
            grow(middle, down, seen, budget)?;
        }
        down.pop();
    }
    Ok(())
}

fn joins_repairable(down: &[u64]) -> bool {
    let k = down.len();
    let le = |x: usize, y: usize| x == y || down[y] >> x & 1 == 1;
    for x in 0..k {
        for y in x + 1..k {
            let ub: Vec<usize> = (0..k).filter(|&z| le(x, z) && le(y, z)).collect();
            let minimal = ub
                .iter()
                .filter(|&&z| !ub.iter().any(|&w| w != z && le(w, z)))
                .count();
            if minimal > 1 {
                return false;
            }
        }
    }
    true
}

/// Independent generator: every relation on the middle elements, validated,
/// deduplicated by pairwise isomorphism search. Practical for `n ≤ 6`.
pub fn enumerate_usl_top_brute(n: usize) -> Vec<Vec<FiniteUslTop>> {
    let mut out = Vec::new();
    for size in 1..=n {
        let mut reps: Vec<FiniteUslTop> = Vec::new();
        if size == 1 {
            reps.push(FiniteUslTop::chain(1));
            out.push(reps);
            continue;
        }
        let m = size - 2;
        let pairs: Vec<(usize, usize)> = (0..m)
            .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i + 1, j + 1)))
            .collect();
        for mask in 0u64..(1u64 << pairs.len()) {
            let mut leq = vec![false; size * size];
            for x in 0..size {
                leq[x * size + x] = true;
                leq[x * size + size - 1] = true;
                leq[x] = true;
            }
            for (b, &(i, j)) in pairs.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    leq[i * size + j] = true;
                }
            }
            let Ok(u) = FiniteUslTop::validate(
                (0..size).map(|i| format!("e{i}")).collect(),
                leq,
                ElementId(0),
                ElementId(size - 1),
            ) else {
                continue;
            };
            if !reps.iter().any(|r| find_isomorphism(r, &u).is_some()) {
                reps.push(u);
            }
        }
        out.push(reps);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let r = enumerate_usl_top(4, &mut Budget::unlimited()).unwrap();
        assert_eq!(r.counts(), vec![1, 1, 1, 2]);
        let r = enumerate_usl_top(2, &mut Budget::unlimited()).unwrap();
        assert_eq!(r.counts(), vec![1, 1]);
        let r = enumerate_usl_top(1, &mut Budget::unlimited()).unwrap();
        assert_eq!(r.of_size(1)[0].size(), 1);
    }

    #[test]
    fn agrees_with_brute_force() {
        let fast = enumerate_usl_top(6, &mut Budget::unlimited()).unwrap();
        let slow = enumerate_usl_top_brute(6);
        assert_eq!(fast.counts(), slow.iter().map(Vec::len).collect::<Vec<_>>());
        for (a, b) in fast.by_size.iter().zip(&slow) {
            for s in b {
                assert_eq!(a.iter().filter(|r| find_isomorphism(r, s).is_some()).count(), 1);
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let err = enumerate_usl_top(7, &mut Budget::new(10, None)).unwrap_err();
        assert!(err.what.contains("enumerate_usl_top"));
    }
}
