//! `⊤`-preserving free extensions `U[X]`.

use super::ExtensionError;
use crate::order::{ElementId, FiniteUslTop};

/// `U[X]`: pairs `(u, S)` with `u ≠ ⊤` and `S ⊆ X`, ordered componentwise,
/// plus a top that absorbs every join reaching `⊤` in `U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeExtension {
    pub base: FiniteUslTop,
    pub generators: Vec<String>,
    pub result: FiniteUslTop,
    /// `u ↦ (u, ∅)`, `⊤ ↦ ⊤`
    pub embedding: Vec<ElementId>,
    parts: Vec<Option<(ElementId, u32)>>,
}

/// Elements are listed by generator subset (as a bitmask), then by base
/// element, with `⊤` last and keeping the base top's name. Other elements
/// are named `(u;{x,y})`, which keeps names free of whitespace.
pub fn free_extend(u: &FiniteUslTop, generators: &[String]) -> Result<FreeExtension, ExtensionError> {
    for (i, x) in generators.iter().enumerate() {
        if u.id_of(x).is_some() {
            return Err(ExtensionError::NameClash(x.clone()));
        }
        if generators[..i].contains(x) || x.is_empty() || x.contains(|c: char| c.is_whitespace() || ",;{}()".contains(c)) {
            return Err(ExtensionError::BadGenerator(x.clone()));
        }
    }
    if generators.len() > 16 {
        return Err(ExtensionError::BadGenerator(format!("{} generators", generators.len())));
    }
    let below: Vec<ElementId> = u.elements().filter(|&x| x != u.top()).collect();
    let mut parts = Vec::new();
    let mut names = Vec::new();
    for mask in 0..1u32 << generators.len() {
        let set: Vec<&str> = (0..generators.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| generators[i].as_str())
            .collect();
        for &x in &below {
            parts.push(Some((x, mask)));
            names.push(format!("({};{{{}}})", u.name(x), set.join(",")));
        }
    }
    parts.push(None);
    names.push(u.name(u.top()).to_string());
    let n = parts.len();
    let leq = |i: usize, j: usize| match (parts[i], parts[j]) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some((x1, m1)), Some((x2, m2))) => u.leq(x1, x2) && m1 & !m2 == 0,
    };
    let bot = parts.iter().position(|p| *p == Some((u.bot(), 0))).unwrap_or(n - 1);
    let result = FiniteUslTop::from_fn(names, bot, n - 1, leq).expect("free extensions are USLs with top");
    let mut ext = FreeExtension { base: u.clone(), generators: generators.to_vec(), result, embedding: vec![], parts };
    ext.embedding = u.elements().map(|x| ext.element(x, 0)).collect();
    Ok(ext)
}

impl FreeExtension {
    /// `(u, S)` for the subset bitmask `S`, or `⊤` when `u = ⊤`.
    pub fn element(&self, u: ElementId, mask: u32) -> ElementId {
        if u == self.base.top() {
            return self.result.top();
        }
        ElementId(self.parts.iter().position(|p| *p == Some((u, mask))).expect("mask within generators"))
    }

    /// `(⊥, {xᵢ})`.
    pub fn generator(&self, i: usize) -> ElementId {
        self.element(self.base.bot(), 1 << i)
    }

    /// `Some((u, S))`, or `None` for `⊤`.
    pub fn decode(&self, e: ElementId) -> Option<(ElementId, u32)> {
        self.parts[e.0]
    }
}
