//! Finite prefixes of sequential representations and the coding apparatus.

use std::fmt;

use super::interp::{check_homogeneity_interpolants, check_meet_interpolants};
use super::{differentiated, verify_table, MapId, Report, UslTable, Violation};
use crate::order::{ElementId, FiniteUslTop};

/// One stage `Θᵢ` or `Θᵢ*`: the first `len` maps of the prefix table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Stage {
    pub index: usize,
    pub starred: bool,
    pub len: usize,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.index, if self.starred { "*" } else { "" })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodingEntry {
    pub x: ElementId,
    pub y: ElementId,
    pub k: u8,
    pub map: MapId,
}

/// The map `g` from `⟨x,y,k⟩` to coding maps; its image is `C`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CodingApparatus {
    pub entries: Vec<CodingEntry>,
}

impl CodingApparatus {
    /// `C` in increasing id order.
    pub fn coding_set(&self) -> Vec<MapId> {
        let mut c: Vec<MapId> = self.entries.iter().map(|e| e.map).collect();
        c.sort();
        c.dedup();
        c
    }

    pub fn g(&self, x: ElementId, y: ElementId, k: u8) -> Option<MapId> {
        self.entries.iter().find(|e| e.x == x && e.y == y && e.k == k).map(|e| e.map)
    }
}

/// Ordered pairs `x ≠ y` below `⊤` with `x ⊔ y = ⊤`: the domain of `g`, halved.
pub fn coding_pairs(l: &FiniteUslTop) -> Vec<(ElementId, ElementId)> {
    let top = l.top();
    let mut out = Vec::new();
    for x in l.elements().filter(|&x| x != top) {
        for y in l.elements().filter(|&y| y != top) {
            if l.join(x, y) == top {
                out.push((x, y));
            }
        }
    }
    out
}

/// All maps of a finite prefix in one list; every stage is an initial
/// segment, so ids are shared between stages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepPrefix {
    pub table: UslTable,
    pub stages: Vec<Stage>,
    pub coding: Option<CodingApparatus>,
}

impl RepPrefix {
    pub fn lattice(&self) -> &FiniteUslTop {
        self.table.lattice()
    }

    pub fn stage_table(&self, s: usize) -> UslTable {
        self.table.prefix(self.stages[s].len)
    }

    pub fn has_starred(&self) -> bool {
        self.stages.iter().any(|s| s.starred)
    }

    /// Position of `Θᵢ` (unstarred) in `stages`.
    pub fn unstarred(&self, i: usize) -> Option<usize> {
        self.stages.iter().position(|s| s.index == i && !s.starred)
    }

    pub fn starred(&self, i: usize) -> Option<usize> {
        self.stages.iter().position(|s| s.index == i && s.starred)
    }

    /// The fixed escape for a coding map: the least
    /// `β ∈ Θ₀ ∖ C` with `α ≡ₓ β`.
    pub fn escape(&self, alpha: MapId, x: ElementId) -> Option<MapId> {
        let c = self.coding.as_ref().map(|c| c.coding_set()).unwrap_or_default();
        (0..self.stages.first()?.len)
            .map(MapId)
            .find(|&b| !c.contains(&b) && self.table.congruent(x, alpha, b))
    }

    /// Size of `Θⱼ`. Positions past the last stage use the last stage, the
    /// largest part of `Θⱼ` the prefix knows.
    pub fn theta_len(&self, j: usize) -> usize {
        let i = j.min(self.depth());
        self.unstarred(i).map_or(0, |s| self.stages[s].len)
    }

    /// Number of unstarred stages after `Θ₀`.
    pub fn depth(&self) -> usize {
        self.stages.iter().filter(|s| !s.starred).count().saturating_sub(1)
    }
}

/// Table axioms per stage, the nesting chain, meet interpolants for `Θᵢ` in
/// the next stage and homogeneity interpolants into each unstarred stage.
///
/// With starred stages the chain reads `Θ₀ ⊊ Θ₁* ⊊ Θ₁ ⊆ Θ₂* ⊊ ...`, meet
/// interpolants for `Θᵢ` are sought in `Θᵢ₊₁*` and homogeneity interpolants
/// for `Θᵢ₊₁*` in `Θᵢ₊₁`. Without them, both go from `Θᵢ` to `Θᵢ₊₁`.
pub fn verify_rep_prefix(r: &RepPrefix) -> Report {
    let mut report = Report::default();
    for (s, st) in r.stages.iter().enumerate() {
        report.extend(&format!("stage {st} "), verify_table(&r.stage_table(s)));
    }
    report.push("nesting chain", nesting_failure(r));
    let c = r.coding.as_ref().map(|c| c.coding_set());
    for i in 0..r.depth() {
        let (Some(cur), Some(next)) = (r.unstarred(i), r.unstarred(i + 1)) else {
            report.push(
                format!("stage {} present", i + 1),
                Some(Violation::NotNested { stage: format!("{} or {}", i, i + 1) }),
            );
            continue;
        };
        let inner = r.stage_table(cur);
        let outer = r.stage_table(next);
        match r.starred(i + 1) {
            Some(star) => {
                let mid = r.stage_table(star);
                report.extend(&format!("{i} in {}* ", i + 1), check_meet_interpolants(&inner, &mid));
                report.extend(
                    &format!("{}* in {} ", i + 1, i + 1),
                    check_homogeneity_interpolants(&mid, &outer, c.as_deref()),
                );
            }
            None => {
                report.extend(&format!("{i} in {} ", i + 1), check_meet_interpolants(&inner, &outer));
                report.extend(
                    &format!("{i} in {} ", i + 1),
                    check_homogeneity_interpolants(&inner, &outer, c.as_deref()),
                );
            }
        }
    }
    report
}

fn nesting_failure(r: &RepPrefix) -> Option<Violation> {
    let expected = |s: usize| -> (usize, bool) {
        if r.has_starred() {
            if s == 0 { (0, false) } else { (s.div_ceil(2), s % 2 == 1) }
        } else {
            (s, false)
        }
    };
    for (s, st) in r.stages.iter().enumerate() {
        if (st.index, st.starred) != expected(s) || st.len > r.table.len() {
            return Some(Violation::NotNested { stage: st.to_string() });
        }
        if s > 0 {
            let prev = r.stages[s - 1].len;
            // only the step from Θᵢ to Θᵢ₊₁* may be an equality
            let weak = r.has_starred() && st.starred && s > 1;
            if st.len < prev || (st.len == prev && !weak) {
                return Some(Violation::NotNested { stage: st.to_string() });
            }
        }
    }
    if let Some(c) = &r.coding {
        let c = c.coding_set();
        let theta0 = r.stages.first().map_or(0, |s| s.len);
        if c.iter().any(|m| m.0 >= theta0) || c.len() >= theta0 {
            return Some(Violation::NotNested { stage: "C in 0".into() });
        }
    }
    None
}

/// Everything `verify_rep_prefix` checks, plus the coding set and `g`,
/// coding pairs that agree at `x` and differ at `y`, escapes from `C`,
/// differentiation outside `C`, the acceptability side condition and fresh
/// extensions at every coatom.
pub fn verify_coding_ready(r: &RepPrefix) -> Report {
    let mut report = Report::default();
    let Some(coding) = &r.coding else {
        report.push("coding apparatus", Some(Violation::CodingDomain("no coding set".into())));
        return report;
    };
    if !r.has_starred() {
        report.push("starred stages", Some(Violation::NotNested { stage: "no starred stages".into() }));
        return report;
    }
    report.extend("", verify_rep_prefix(r));
    let l = r.lattice();
    let theta0 = r.stage_table(0);
    let c = coding.coding_set();
    report.push("coding bijection", domain_failure(l, coding));
    report.push("coding pairs", coding_pair_failure(l, &theta0, coding));
    let escape = (|| {
        for &a in &c {
            for x in l.elements().filter(|&x| x != l.top()) {
                if !theta0.ids().any(|b| !c.contains(&b) && theta0.congruent(x, a, b)) {
                    return Some(Violation::Escape { alpha: a, x });
                }
            }
        }
        None
    })();
    report.push("escapes", escape);
    let diff = (|| {
        for x in l.elements() {
            for y in l.elements().filter(|&y| !l.leq(x, y)) {
                if !differentiated(&theta0, x, y, |a| !c.contains(&a)) {
                    return Some(Violation::DifferentiationOutsideC { x, y });
                }
            }
        }
        None
    })();
    report.push("differentiation outside C", diff);
    report.push("fresh extensions", fresh_extension_failure(r));
    report
}

fn domain_failure(l: &FiniteUslTop, coding: &CodingApparatus) -> Option<Violation> {
    let pairs = coding_pairs(l);
    let want = 2 * pairs.len();
    if pairs.is_empty() {
        return Some(Violation::CodingDomain("no pair joins nontrivially to top".into()));
    }
    if coding.entries.len() != want {
        return Some(Violation::CodingDomain(format!(
            "g has {} entries, domain has {want}",
            coding.entries.len()
        )));
    }
    for &(x, y) in &pairs {
        for k in 0..2 {
            let n = coding.entries.iter().filter(|e| (e.x, e.y, e.k) == (x, y, k)).count();
            if n != 1 {
                return Some(Violation::CodingDomain(format!(
                    "<{},{},{k}> has {n} images",
                    l.name(x),
                    l.name(y)
                )));
            }
        }
    }
    if coding.coding_set().len() != want {
        return Some(Violation::CodingDomain("g is not injective".into()));
    }
    None
}

fn coding_pair_failure(l: &FiniteUslTop, t: &UslTable, coding: &CodingApparatus) -> Option<Violation> {
    for (x, y) in coding_pairs(l) {
        let (Some(a), Some(b)) = (coding.g(x, y, 0), coding.g(x, y, 1)) else {
            return Some(Violation::CodingPair { x, y });
        };
        if a.0 >= t.len() || b.0 >= t.len() || !t.congruent(x, a, b) || t.congruent(y, a, b) {
            return Some(Violation::CodingPair { x, y });
        }
    }
    None
}

/// For each coatom `x` and `i` with `Θᵢ₊₁*` present: every `α₀, α₁ ∈ Θᵢ` has
/// `β₀, β₁ ∈ Θᵢ₊₁* ∖ Θᵢ` with `αⱼ ≡ₓ βⱼ` and the congruences of the pair kept.
fn fresh_extension_failure(r: &RepPrefix) -> Option<Violation> {
    let l = r.lattice();
    let t = &r.table;
    let n = l.size();
    let agree = |a: MapId, b: MapId| -> Vec<bool> {
        (0..n).map(|y| t.congruent(ElementId(y), a, b)).collect()
    };
    for x in l.coatoms() {
        for i in 0..r.depth() {
            let (Some(cur), Some(star)) = (r.unstarred(i), r.starred(i + 1)) else {
                continue;
            };
            let lo = r.stages[cur].len;
            let hi = r.stages[star].len;
            for a0 in (0..lo).map(MapId) {
                for a1 in (0..lo).map(MapId) {
                    let need = agree(a0, a1);
                    let ok = (lo..hi).map(MapId).filter(|&b| t.congruent(x, a0, b)).any(|b0| {
                        (lo..hi).map(MapId).filter(|&b| t.congruent(x, a1, b)).any(|b1| {
                            let have = agree(b0, b1);
                            need.iter().zip(&have).all(|(&nd, &hv)| !nd || hv)
                        })
                    });
                    if !ok {
                        return Some(Violation::Extension { x, stage: i, alpha0: a0, alpha1: a1 });
                    }
                }
            }
        }
    }
    None
}
