use super::{ElementId, FiniteUslTop};

/// Canonical encoding of an isomorphism class.
///
/// Elements are first sorted by `(|↓x|, |↑x|)`, which puts `bot` first and
/// `top` last; the encoding is the least row-major `≤` matrix over all
/// relabelings that respect that sort.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub size: usize,
    pub bits: Vec<bool>,
}

impl CanonicalForm {
    /// Rebuilds the structure in canonical labeling (names `e0..`).
    pub fn to_structure(&self) -> FiniteUslTop {
        FiniteUslTop::from_leq(self.bits.clone(), 0, self.size - 1)
            .expect("canonical forms come from valid structures")
    }
}

fn invariant(u: &FiniteUslTop, x: ElementId) -> (usize, usize) {
    let down = u.elements().filter(|&y| u.leq(y, x)).count();
    let up = u.elements().filter(|&y| u.leq(x, y)).count();
    // larger upsets first so bot sorts to index 0
    (down, usize::MAX - up)
}

/// Returns the canonical form and a permutation taking `u` onto it
/// (`perm[old] = new`).
pub fn canonical_form(u: &FiniteUslTop) -> (CanonicalForm, Vec<usize>) {
    let n = u.size();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| invariant(u, ElementId(x)));
    let keys: Vec<_> = order.iter().map(|&x| invariant(u, ElementId(x))).collect();
    // block boundaries in the sorted order
    let mut blocks = Vec::new();
    let mut start = 0;
    for i in 1..=n {
        if i == n || keys[i] != keys[start] {
            blocks.push((start, i));
            start = i;
        }
    }

    let mut best: Option<(Vec<bool>, Vec<usize>)> = None;
    let mut slots = order.clone();
    permute_blocks(u, &blocks, 0, &mut slots, &mut best);
    let (bits, new_to_old) = best.expect("at least one labeling");
    let mut perm = vec![0; n];
    for (new, &old) in new_to_old.iter().enumerate() {
        perm[old] = new;
    }
    (CanonicalForm { size: n, bits }, perm)
}

fn encode(u: &FiniteUslTop, new_to_old: &[usize]) -> Vec<bool> {
    let n = new_to_old.len();
    let mut bits = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            bits.push(u.leq(ElementId(new_to_old[i]), ElementId(new_to_old[j])));
        }
    }
    bits
}

fn permute_blocks(
    u: &FiniteUslTop,
    blocks: &[(usize, usize)],
    b: usize,
    slots: &mut Vec<usize>,
    best: &mut Option<(Vec<bool>, Vec<usize>)>,
) {
    if b == blocks.len() {
        let bits = encode(u, slots);
        if best.as_ref().map_or(true, |(bb, _)| bits < *bb) {
            *best = Some((bits, slots.clone()));
        }
        return;
    }
    let (lo, hi) = blocks[b];
    heap_permute(u, blocks, b, lo, hi, hi - lo, slots, best);
}

#[allow(clippy::too_many_arguments)]
fn heap_permute(
    u: &FiniteUslTop,
    blocks: &[(usize, usize)],
    b: usize,
    lo: usize,
    hi: usize,
    k: usize,
    slots: &mut Vec<usize>,
    best: &mut Option<(Vec<bool>, Vec<usize>)>,
) {
    if k <= 1 {
        permute_blocks(u, blocks, b + 1, slots, best);
        return;
    }
    for i in 0..k {
        heap_permute(u, blocks, b, lo, hi, k - 1, slots, best);
        if k % 2 == 0 {
            slots.swap(lo + i, lo + k - 1);
        } else {
            slots.swap(lo, lo + k - 1);
        }
    }
}

/// The lexicographically least order isomorphism `u → v`, if any.
pub fn find_isomorphism(u: &FiniteUslTop, v: &FiniteUslTop) -> Option<Vec<ElementId>> {
    let n = u.size();
    if n != v.size() {
        return None;
    }
    let ku: Vec<_> = u.elements().map(|x| invariant(u, x)).collect();
    let kv: Vec<_> = v.elements().map(|x| invariant(v, x)).collect();
    let mut assign: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    if extend(u, v, &ku, &kv, 0, &mut assign, &mut used) {
        Some(assign.into_iter().map(|a| ElementId(a.unwrap())).collect())
    } else {
        None
    }
}

fn extend(
    u: &FiniteUslTop,
    v: &FiniteUslTop,
    ku: &[(usize, usize)],
    kv: &[(usize, usize)],
    i: usize,
    assign: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
) -> bool {
    let n = u.size();
    if i == n {
        return true;
    }
    for t in 0..n {
        if used[t] || ku[i] != kv[t] {
            continue;
        }
        if (ElementId(i) == u.bot()) != (ElementId(t) == v.bot())
            || (ElementId(i) == u.top()) != (ElementId(t) == v.top())
        {
            continue;
        }
        let consistent = (0..i).all(|j| {
            let s = assign[j].unwrap();
            u.leq(ElementId(i), ElementId(j)) == v.leq(ElementId(t), ElementId(s))
                && u.leq(ElementId(j), ElementId(i)) == v.leq(ElementId(s), ElementId(t))
        });
        if !consistent {
            continue;
        }
        assign[i] = Some(t);
        used[t] = true;
        if extend(u, v, ku, kv, i + 1, assign, used) {
            return true;
        }
        assign[i] = None;
        used[t] = false;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diamond_self_isomorphism_is_identity() {
        let d = FiniteUslTop::diamond();
        let iso = find_isomorphism(&d, &d).unwrap();
        assert_eq!(iso, (0..4).map(ElementId).collect::<Vec<_>>());
    }

    #[test]
    fn size_mismatch_has_no_isomorphism() {
        assert!(find_isomorphism(&FiniteUslTop::chain(3), &FiniteUslTop::diamond()).is_none());
        assert!(find_isomorphism(&FiniteUslTop::chain(4), &FiniteUslTop::diamond()).is_none());
    }

    #[test]
    fn relabeled_chain_has_unique_isomorphism() {
        let c = FiniteUslTop::chain(4);
        let r = c.relabel(&[2, 0, 3, 1]);
        let iso = find_isomorphism(&c, &r).unwrap();
        assert_eq!(iso, vec![ElementId(2), ElementId(0), ElementId(3), ElementId(1)]);
    }

    #[test]
    fn canonical_form_is_relabeling_invariant() {
        let d = FiniteUslTop::diamond();
        let (cf, perm) = canonical_form(&d);
        let (cf2, _) = canonical_form(&d.relabel(&[3, 1, 0, 2]));
        assert_eq!(cf, cf2);
        // bot to index 0, top to the last index
        assert_eq!(perm[0], 0);
        assert_eq!(perm[3], 3);
        assert_eq!(cf.to_structure().size(), 4);
    }
}
