//! Meet and homogeneity interpolant checks between nested tables.

use std::collections::HashMap;

use super::{MapId, Report, UslTable, Violation};
use crate::order::ElementId;

/// For each `x ⊓ y = z` and `α ≡_z β` in `inner`, looks for
/// `α ≡ₓ γ₀ ≡_y γ₁ ≡ₓ γ₂ ≡_y β` in `outer` by following value classes.
pub fn check_meet_interpolants(inner: &UslTable, outer: &UslTable) -> Report {
    let l = inner.lattice();
    let mut report = Report::default();
    let failure = (|| {
        for x in l.elements() {
            for y in l.elements() {
                let z = l.meet(x, y);
                for a in inner.ids() {
                    let reach = reachable_y_values(outer, x, y, inner.value(a, x));
                    for b in inner.ids() {
                        if inner.value(a, z) == inner.value(b, z)
                            && !reach.contains(&inner.value(b, y))
                        {
                            return Some(Violation::MeetInterpolant { x, y, alpha: a, beta: b });
                        }
                    }
                }
            }
        }
        None
    })();
    report.push("meet interpolants", failure);
    report
}

/// Values `γ₂(y)` over chains `γ₀(x) = start`, `γ₀ ≡_y γ₁`, `γ₁ ≡ₓ γ₂`.
fn reachable_y_values(outer: &UslTable, x: ElementId, y: ElementId, start: u64) -> Vec<u64> {
    let ids: Vec<MapId> = outer.ids().collect();
    let y0: Vec<u64> = ids
        .iter()
        .filter(|&&g| outer.value(g, x) == start)
        .map(|&g| outer.value(g, y))
        .collect();
    let x1: Vec<u64> = ids
        .iter()
        .filter(|&&g| y0.contains(&outer.value(g, y)))
        .map(|&g| outer.value(g, x))
        .collect();
    ids.iter()
        .filter(|&&g| x1.contains(&outer.value(g, x)))
        .map(|&g| outer.value(g, y))
        .collect()
}

/// Search for `L`-homomorphisms `inner → outer` with prescribed images of two
/// maps. A homomorphism preserves every `≡ₓ`, so it is the same as a family
/// of value maps `φₓ` with `F(α)(x) = φₓ(α(x))` and every `F(α)` in `outer`.
pub struct HomSearch<'a> {
    inner: &'a UslTable,
    outer: &'a UslTable,
    /// outer maps allowed as images of maps other than the two prescribed ones
    free_targets: Vec<MapId>,
    inner_class: Vec<Vec<usize>>,
    inner_classes_at: Vec<usize>,
    outer_class: Vec<Vec<usize>>,
    /// bit x set iff the two maps agree at x
    inner_agree: Vec<u64>,
    outer_agree: Vec<u64>,
}

fn classes(t: &UslTable) -> (Vec<Vec<usize>>, Vec<usize>) {
    let n = t.lattice().size();
    let mut per_map = vec![vec![0; n]; t.len()];
    let mut counts = vec![0; n];
    for x in 0..n {
        let mut seen: HashMap<u64, usize> = HashMap::new();
        for (i, m) in t.maps().iter().enumerate() {
            let next = seen.len();
            per_map[i][x] = *seen.entry(m[x]).or_insert(next);
        }
        counts[x] = seen.len();
    }
    (per_map, counts)
}

fn agreement(t: &UslTable) -> Vec<u64> {
    let n = t.lattice().size();
    let k = t.len();
    let mut out = vec![0u64; k * k];
    for a in 0..k {
        for b in 0..k {
            out[a * k + b] = (0..n)
                .filter(|&x| t.maps()[a][x] == t.maps()[b][x])
                .fold(0, |acc, x| acc | 1 << x);
        }
    }
    out
}

impl<'a> HomSearch<'a> {
    /// `avoid` lists outer maps that only the two prescribed maps may hit.
    pub fn new(inner: &'a UslTable, outer: &'a UslTable, avoid: &[MapId]) -> Self {
        assert!(inner.lattice().size() <= 64, "lattices above 64 elements are not supported");
        let (inner_class, inner_classes_at) = classes(inner);
        let (outer_class, _) = classes(outer);
        HomSearch {
            inner,
            outer,
            free_targets: outer.ids().filter(|g| !avoid.contains(g)).collect(),
            inner_class,
            inner_classes_at,
            outer_class,
            inner_agree: agreement(inner),
            outer_agree: agreement(outer),
        }
    }

    /// Bitmask of elements at which two inner maps agree.
    pub fn inner_agree(&self, a: MapId, b: MapId) -> u64 {
        self.inner_agree[a.0 * self.inner.len() + b.0]
    }

    pub fn outer_agree(&self, a: MapId, b: MapId) -> u64 {
        self.outer_agree[a.0 * self.outer.len() + b.0]
    }

    /// Is there a homomorphism with `a0 ↦ p` and `a1 ↦ q`?
    pub fn exists(&self, a0: MapId, a1: MapId, p: MapId, q: MapId) -> bool {
        if self.inner_agree(a0, a1) & !self.outer_agree(p, q) != 0 {
            return false;
        }
        let n = self.inner.lattice().size();
        let mut phi: Vec<Vec<usize>> =
            (0..n).map(|x| vec![usize::MAX; self.inner_classes_at[x]]).collect();
        let mut trail = Vec::new();
        if !self.assign(a0, p, &mut phi, &mut trail) || !self.assign(a1, q, &mut phi, &mut trail) {
            return false;
        }
        let mut open: Vec<MapId> = self.inner.ids().filter(|&a| a != a0 && a != a1).collect();
        self.extend(&mut open, &mut phi, &mut trail)
    }

    fn assign(
        &self,
        a: MapId,
        g: MapId,
        phi: &mut [Vec<usize>],
        trail: &mut Vec<(usize, usize)>,
    ) -> bool {
        let mark = trail.len();
        for (x, slot) in phi.iter_mut().enumerate() {
            let c = self.inner_class[a.0][x];
            let o = self.outer_class[g.0][x];
            if slot[c] == usize::MAX {
                slot[c] = o;
                trail.push((x, c));
            } else if slot[c] != o {
                undo(phi, trail, mark);
                return false;
            }
        }
        true
    }

    fn consistent(&self, a: MapId, g: MapId, phi: &[Vec<usize>]) -> bool {
        phi.iter().enumerate().all(|(x, slot)| {
            let fixed = slot[self.inner_class[a.0][x]];
            fixed == usize::MAX || fixed == self.outer_class[g.0][x]
        })
    }

    /// Forward checking: every open map keeps a consistent target, and the
    /// one with the fewest is branched on first.
    fn extend(
        &self,
        open: &mut Vec<MapId>,
        phi: &mut [Vec<usize>],
        trail: &mut Vec<(usize, usize)>,
    ) -> bool {
        if open.is_empty() {
            return true;
        }
        let mut best: Option<(usize, Vec<MapId>)> = None;
        for (i, &a) in open.iter().enumerate() {
            let cands: Vec<MapId> =
                self.free_targets.iter().copied().filter(|&g| self.consistent(a, g, phi)).collect();
            if cands.is_empty() {
                return false;
            }
            if best.as_ref().map_or(true, |(_, b)| cands.len() < b.len()) {
                best = Some((i, cands));
            }
        }
        let (i, cands) = best.unwrap();
        let a = open.swap_remove(i);
        for g in cands {
            let mark = trail.len();
            if self.assign(a, g, phi, trail) {
                if self.extend(open, phi, trail) {
                    return true;
                }
                undo(phi, trail, mark);
            }
        }
        open.push(a);
        let last = open.len() - 1;
        open.swap(i, last);
        false
    }
}

fn undo(phi: &mut [Vec<usize>], trail: &mut Vec<(usize, usize)>, mark: usize) {
    while trail.len() > mark {
        let (x, c) = trail.pop().unwrap();
        phi[x][c] = usize::MAX;
    }
}

/// For all `α₀, α₁, β₀, β₁` in `inner` with `α₀ ≡ₓ α₁ → β₀ ≡ₓ β₁` for every
/// `x`, looks for `γ₀, γ₁` in `outer` and homomorphisms
/// `f: α₀,α₁ ↦ β₀,γ₁`, `g: α₀,α₁ ↦ γ₀,γ₁`, `h: α₀,α₁ ↦ γ₀,β₁`.
///
/// Inner maps are identified with outer maps by value. With a coding set
/// (outer ids), only `α₀` and `α₁` may be sent into it.
pub fn check_homogeneity_interpolants(
    inner: &UslTable,
    outer: &UslTable,
    coding: Option<&[MapId]>,
) -> Report {
    let mut report = Report::default();
    let name = if coding.is_some() {
        "homogeneity interpolants (acceptable)"
    } else {
        "homogeneity interpolants"
    };
    let as_outer: Option<Vec<MapId>> = inner.maps().iter().map(|m| outer.position(m)).collect();
    let Some(as_outer) = as_outer else {
        report.push(name, Some(Violation::NotNested { stage: "inner table is not contained in outer".into() }));
        return report;
    };
    let search = HomSearch::new(inner, outer, coding.unwrap_or(&[]));
    let failure = (|| {
        for a0 in inner.ids() {
            for a1 in inner.ids() {
                let agree = search.inner_agree(a0, a1);
                let mut memo: HashMap<(MapId, MapId), bool> = HashMap::new();
                let mut hom = |p: MapId, q: MapId| {
                    *memo.entry((p, q)).or_insert_with(|| search.exists(a0, a1, p, q))
                };
                for b0 in inner.ids() {
                    for b1 in inner.ids() {
                        if agree & !search.inner_agree(b0, b1) != 0 {
                            continue;
                        }
                        let (p0, p1) = (as_outer[b0.0], as_outer[b1.0]);
                        let found = outer.ids().any(|g1| {
                            hom(p0, g1) && outer.ids().any(|g0| hom(g0, g1) && hom(g0, p1))
                        });
                        if !found {
                            return Some(Violation::Homogeneity { alpha0: a0, alpha1: a1, beta0: b0, beta1: b1 });
                        }
                    }
                }
            }
        }
        None
    })();
    report.push(name, failure);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::FiniteUslTop;

    #[test]
    fn two_chain_passes_trivially() {
        let t = UslTable::new(FiniteUslTop::chain(2), vec![vec![0, 0], vec![0, 1]]);
        assert!(check_meet_interpolants(&t, &t).passed());
        assert!(check_homogeneity_interpolants(&t, &t, None).passed());
    }

    // diamond maps given by their (a, b) coordinates: α(a) = β-coordinate, etc.
    fn diamond_map(ca: u64, cb: u64) -> Vec<u64> {
        vec![0, cb, ca, 1 + ca * 10 + cb]
    }

    #[test]
    fn meet_interpolants_missing() {
        // α ≡₀ β always holds; reaching β from α needs a mixed map
        let d = FiniteUslTop::diamond();
        let mut t = UslTable::new(
            d.clone(),
            vec![vec![0, 0, 0, 0], diamond_map(1, 0), diamond_map(0, 1), diamond_map(1, 1)],
        );
        t.maps[0] = vec![0, 0, 0, 0];
        let inner = UslTable::new(d.clone(), vec![vec![0, 0, 0, 0], diamond_map(1, 1)]);
        let r = check_meet_interpolants(&inner, &inner);
        assert!(matches!(r.first_failure(), Some(Violation::MeetInterpolant { .. })));
        // the four-map grid supplies the interpolants
        assert!(check_meet_interpolants(&inner, &t).passed());
    }

    #[test]
    fn impoverished_outer_fails_homogeneity() {
        let d = FiniteUslTop::diamond();
        let inner = UslTable::new(d, vec![vec![0, 0, 0, 0], diamond_map(1, 1)]);
        // α₀ = 0, α₁ = (1,1), β₀ = (1,1), β₁ = 0: g must swap, h must fix
        assert!(check_homogeneity_interpolants(&inner, &inner, None).passed());
        // forbidding the nonzero map as a free target breaks the zero-map images
        let r = check_homogeneity_interpolants(&inner, &inner, Some(&[MapId(0), MapId(1)]));
        assert!(matches!(r.first_failure(), Some(Violation::Homogeneity { .. })));
    }
}
