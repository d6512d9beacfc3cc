//! Deterministic constructions of tables and representation prefixes.
//!
//! Maps are written in coordinates over the meet-irreducibles `M`: a vector
//! `c: M → ℕ` gives the map `x ↦ Σ_{m ∈ M, x ≰ m} c(m)·Bᵖᵒˢ⁽ᵐ⁾`, so `α ≡ₓ β`
//! iff the coordinates agree on `{m : x ≰ m}`. Order and join hold for any
//! coordinates; differentiation needs enough of them.

use thiserror::Error;

use super::coding::{coding_pairs, CodingApparatus, CodingEntry, RepPrefix, Stage};
use super::{verify_table, MapId, UslTable};
use crate::caps::{Caps, CapExceeded};
use crate::order::{ElementId, FiniteUslTop};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error(transparent)]
    CapExceeded(#[from] CapExceeded),
    #[error("coding needs at least two coatoms, found {found}")]
    TooFewCoatoms { found: usize },
    #[error("unsupported lattice: {reason}")]
    Unsupported { reason: String },
}

/// Meet-irreducible coordinates of a lattice.
#[derive(Clone, Debug)]
pub struct MCoords {
    irreducibles: Vec<ElementId>,
    /// per element, the positions `m` with `x ≰ m`
    support: Vec<Vec<usize>>,
}

impl MCoords {
    pub fn new(l: &FiniteUslTop) -> Self {
        let irreducibles = l.meet_irreducibles();
        let support = l
            .elements()
            .map(|x| {
                irreducibles
                    .iter()
                    .enumerate()
                    .filter(|&(_, &m)| !l.leq(x, m))
                    .map(|(p, _)| p)
                    .collect()
            })
            .collect();
        MCoords { irreducibles, support }
    }

    pub fn dim(&self) -> usize {
        self.irreducibles.len()
    }

    pub fn irreducibles(&self) -> &[ElementId] {
        &self.irreducibles
    }

    pub fn support(&self, x: ElementId) -> &[usize] {
        &self.support[x.0]
    }

    /// Panics when a coordinate is not below `base`.
    pub fn encode(&self, coords: &[u64], base: u64) -> Vec<u64> {
        assert!(coords.iter().all(|&c| c < base));
        self.support
            .iter()
            .map(|s| s.iter().map(|&p| coords[p] * base.pow(p as u32)).sum())
            .collect()
    }
}

/// `{0..=hi}^dim` in lexicographic order.
fn grid(dim: usize, hi: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=hi).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

/// Smallest table (then lexicographically first) among subsets of the
/// 0/1 coordinate maps containing the zero map.
pub fn build_table(l: &FiniteUslTop, caps: &Caps) -> Result<UslTable, BuildError> {
    let mc = MCoords::new(l);
    if mc.dim() > 16 {
        return Err(CapExceeded::new(format!("{} meet-irreducibles", mc.dim())).into());
    }
    let pool: Vec<Vec<u64>> = grid(mc.dim(), 1).iter().map(|c| mc.encode(c, 2)).collect();
    let mut budget = caps.budget();
    for k in 1..=pool.len() {
        let mut pick: Vec<usize> = (1..k).collect();
        loop {
            budget.tick("table search")?;
            let maps = std::iter::once(0).chain(pick.iter().copied()).map(|i| pool[i].clone()).collect();
            let t = UslTable::new(l.clone(), maps);
            if verify_table(&t).passed() {
                return Ok(t);
            }
            if !next_combination(&mut pick, pool.len()) {
                break;
            }
        }
    }
    unreachable!("the full 0/1 coordinate table always passes")
}

/// Advances an increasing selection from `1..n`.
fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let k = pick.len();
    for i in (0..k).rev() {
        if pick[i] < n - k + i {
            pick[i] += 1;
            for j in i + 1..k {
                pick[j] = pick[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Prefix `Θ₀ ⊆ ... ⊆ Θ_depth` for a distributive lattice.
///
/// `Θ₀` holds the 0/1 coordinate maps; with coding it also holds `C`
/// (coordinates all nonzero, chosen greedily per ordered pair) and, for each
/// coding map and `x ≠ ⊤`, the map keeping its coordinates on `{m : x ≰ m}`
/// and zero elsewhere. Each later stage is the full coordinate grid one value
/// wider than everything before it.
pub fn build_rep_prefix(
    l: &FiniteUslTop,
    depth: usize,
    with_coding: bool,
    caps: &Caps,
) -> Result<RepPrefix, BuildError> {
    if with_coding && l.coatoms().len() < 2 {
        return Err(BuildError::TooFewCoatoms { found: l.coatoms().len() });
    }
    if !l.is_distributive() {
        return Err(BuildError::Unsupported {
            reason: "representation prefixes are built for distributive lattices only".into(),
        });
    }
    let mc = MCoords::new(l);
    let mut budget = caps.budget();
    let mut coords: Vec<Vec<u64>> = grid(mc.dim(), 1);
    let mut g: Vec<(ElementId, ElementId, u8, Vec<u64>)> = Vec::new();
    if with_coding {
        for (x, y) in coding_pairs(l) {
            let used = |c: &Vec<u64>, g: &[(ElementId, ElementId, u8, Vec<u64>)]| {
                coords.contains(c) || g.iter().any(|e| &e.3 == c)
            };
            let g0 = first_positive(mc.dim(), &mut budget, |c| !used(c, &g))?;
            let (sx, sy) = (mc.support(x), mc.support(y));
            let g1 = first_positive(mc.dim(), &mut budget, |c| {
                !used(c, &g)
                    && c != &g0
                    && sx.iter().all(|&p| c[p] == g0[p])
                    && sy.iter().any(|&p| c[p] != g0[p])
            })?;
            g.push((x, y, 0, g0));
            g.push((x, y, 1, g1));
        }
        let mut escapes = Vec::new();
        for e in &g {
            for x in l.elements().filter(|&x| x != l.top()) {
                let mut b = vec![0; mc.dim()];
                for &p in mc.support(x) {
                    b[p] = e.3[p];
                }
                if !coords.contains(&b) && !escapes.contains(&b) {
                    escapes.push(b);
                }
            }
        }
        coords.extend(g.iter().map(|e| e.3.clone()));
        coords.extend(escapes);
        coords.sort();
    }
    let mut stages = vec![Stage { index: 0, starred: false, len: coords.len() }];
    let mut hi = coords.iter().flatten().copied().max().unwrap_or(0);
    let mut grow = |coords: &mut Vec<Vec<u64>>, index: usize, starred: bool| -> Result<Stage, CapExceeded> {
        hi += 1;
        for c in grid(mc.dim(), hi) {
            budget.tick("representation prefix")?;
            if !coords.contains(&c) {
                coords.push(c);
            }
        }
        Ok(Stage { index, starred, len: coords.len() })
    };
    for i in 1..=depth {
        if with_coding {
            stages.push(grow(&mut coords, i, true)?);
        }
        stages.push(grow(&mut coords, i, false)?);
    }
    let base = coords.iter().flatten().copied().max().unwrap_or(0) + 1;
    if (base as f64).powi(mc.dim() as i32) > u64::MAX as f64 / 2.0 {
        return Err(CapExceeded::new("map values overflow").into());
    }
    let maps: Vec<Vec<u64>> = coords.iter().map(|c| mc.encode(c, base)).collect();
    let coding = with_coding.then(|| CodingApparatus {
        entries: g
            .iter()
            .map(|(x, y, k, c)| CodingEntry {
                x: *x,
                y: *y,
                k: *k,
                map: MapId(coords.iter().position(|d| d == c).unwrap()),
            })
            .collect(),
    });
    Ok(RepPrefix { table: UslTable::new(l.clone(), maps), stages, coding })
}

/// First coordinate vector with entries in `1..=K` accepted by `ok`, ordered
/// by `K` and then lexicographically.
fn first_positive(
    dim: usize,
    budget: &mut crate::caps::Budget,
    ok: impl Fn(&Vec<u64>) -> bool,
) -> Result<Vec<u64>, CapExceeded> {
    for k in 1u64.. {
        for c in grid(dim, k - 1) {
            budget.tick("coding search")?;
            let c: Vec<u64> = c.iter().map(|v| v + 1).collect();
            if c.contains(&k) && ok(&c) {
                return Ok(c);
            }
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables() {
        let caps = Caps::default();
        assert_eq!(build_table(&FiniteUslTop::chain(1), &caps).unwrap().len(), 1);
        let t = build_table(&FiniteUslTop::chain(2), &caps).unwrap();
        assert_eq!(t.maps(), &[vec![0, 0], vec![0, 1]]);
        let d = build_table(&FiniteUslTop::diamond(), &caps).unwrap();
        assert_eq!(d.len(), 3);
        assert!(verify_table(&d).passed());
    }

    #[test]
    fn diamond_prefix_shape() {
        let r = build_rep_prefix(&FiniteUslTop::diamond(), 1, true, &Caps::default()).unwrap();
        let lens: Vec<usize> = r.stages.iter().map(|s| s.len).collect();
        assert_eq!(lens, vec![11, 25, 36]);
        assert_eq!(r.coding.unwrap().coding_set().len(), 4);
    }

    #[test]
    fn too_few_coatoms() {
        let e = build_rep_prefix(&FiniteUslTop::chain(2), 1, true, &Caps::default());
        assert_eq!(e.unwrap_err(), BuildError::TooFewCoatoms { found: 1 });
    }
}
