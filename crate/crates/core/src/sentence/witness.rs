//! The two enumerations behind the decision procedure.
//!
//! A witness structure generated by `x̄` is fixed by the closure operator
//! `S ↦ {i : x_i ≤ ⋁x_S}` on index sets together with whether `top` is a
//! join of generators. Closure operators are Moore families, so witnesses are
//! enumerated as Moore families on the power set of `x̄`.
//!
//! Almost-end-extensions are grown one universal variable at a time. Adding
//! `y` to a finite lattice `W` is fixed by the closure `a ↦ max{w : w ≤ a ⊔ y}`
//! (a Moore family `Fix` of `W`) and the upset `Y0 = {w : y ≤ w}` inside `Fix`.
//! The new elements are `a ⊔ y` for `a ∈ Fix ∖ Y0`.

use crate::caps::{Budget, CapExceeded, Caps};
use crate::order::{is_almost_end_extension, ElementId, FiniteUslTop, SubstructureWitness};

/// A structure generated by the images of the existential variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessStructure {
    pub structure: FiniteUslTop,
    pub assignment: Vec<ElementId>,
}

/// An almost-end-extension of `U` generated over `U` by the assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AeeExtension {
    pub witness: SubstructureWitness,
    pub assignment: Vec<ElementId>,
}

impl AeeExtension {
    pub fn structure(&self) -> &FiniteUslTop {
        self.witness.big()
    }
}

/// Moore families (meet-closed subsets containing `top`) of a finite lattice,
/// as membership vectors, in a fixed deterministic order.
pub fn moore_families(w: &FiniteUslTop, budget: &mut Budget) -> Result<Vec<Vec<bool>>, CapExceeded> {
    let order = top_down(w);
    let mut out = Vec::new();
    let mut incl = vec![false; w.size()];
    let mut forced = vec![false; w.size()];
    forced[w.top().0] = true;
    moore_rec(w, &order, 0, &mut incl, &mut forced, &mut out, budget)?;
    Ok(out)
}

fn top_down(w: &FiniteUslTop) -> Vec<ElementId> {
    let mut order: Vec<ElementId> = w.elements().collect();
    order.sort_by_key(|&x| std::cmp::Reverse(w.elements().filter(|&y| w.leq(y, x)).count()));
    order
}

fn moore_rec(
    w: &FiniteUslTop,
    order: &[ElementId],
    i: usize,
    incl: &mut Vec<bool>,
    forced: &mut Vec<bool>,
    out: &mut Vec<Vec<bool>>,
    budget: &mut Budget,
) -> Result<(), CapExceeded> {
    if i == order.len() {
        budget.tick("Moore family enumeration")?;
        out.push(incl.clone());
        return Ok(());
    }
    let e = order[i];
    if !forced[e.0] {
        moore_rec(w, order, i + 1, incl, forced, out, budget)?;
    }
    let saved = forced.clone();
    incl[e.0] = true;
    for f in w.elements().filter(|f| incl[f.0]) {
        forced[w.meet(e, f).0] = true;
    }
    moore_rec(w, order, i + 1, incl, forced, out, budget)?;
    incl[e.0] = false;
    *forced = saved;
    Ok(())
}

fn boolean_lattice(m: usize) -> FiniteUslTop {
    let n = 1usize << m;
    FiniteUslTop::from_fn(
        (0..n).map(|s| format!("s{s}")).collect(),
        0,
        n - 1,
        |a, b| a & b == a,
    )
    .expect("power sets are lattices")
}

/// One `(U, x̄ ↦ U)` per isomorphism class respecting the assignment.
///
/// Ordered by size, then by the closure's family of closed sets. The
/// collapsed one-element structure is included only on request.
pub fn enumerate_witness_structures(
    vars: &[String],
    include_degenerate: bool,
    caps: &Caps,
    budget: &mut Budget,
) -> Result<Vec<WitnessStructure>, CapExceeded> {
    let m = vars.len();
    if m > caps.max_exists || m > 6 {
        return Err(CapExceeded::new(format!(
            "{m} existential variables exceed the cap of {}",
            caps.max_exists.min(6)
        )));
    }
    let full = (1usize << m) - 1;
    let families = moore_families(&boolean_lattice(m), budget)?;
    let mut keyed = Vec::new();
    for fam in families {
        let closed: Vec<usize> = (0..=full).filter(|&s| fam[s]).collect();
        let mask: u64 = closed.iter().map(|&s| 1u64 << s).sum();
        for top_extra in [false, true] {
            let size = closed.len() + top_extra as usize;
            if size == 1 && !include_degenerate {
                continue;
            }
            if size > caps.max_witness_size {
                return Err(CapExceeded::new(format!(
                    "witness structure of size {size} exceeds the cap of {}",
                    caps.max_witness_size
                )));
            }
            keyed.push(((size, mask, top_extra), closed.clone()));
        }
    }
    keyed.sort();
    Ok(keyed
        .into_iter()
        .map(|((_, _, top_extra), closed)| build_witness(vars, &closed, top_extra))
        .collect())
}

fn build_witness(vars: &[String], closed: &[usize], top_extra: bool) -> WitnessStructure {
    let m = vars.len();
    let mut sets = closed.to_vec();
    sets.sort_by_key(|&s| (s.count_ones(), s));
    let n = sets.len() + top_extra as usize;
    let cl = |s: usize| {
        *sets
            .iter()
            .find(|&&c| c & s == s)
            .expect("the full set is closed")
    };
    let assignment: Vec<ElementId> = (0..m)
        .map(|i| ElementId(sets.iter().position(|&c| c == cl(1 << i)).unwrap()))
        .collect();
    let mut names: Vec<String> = sets
        .iter()
        .map(|&c| {
            // generators whose closures are maximal below c
            let mut gens: Vec<usize> = Vec::new();
            for i in (0..m).filter(|&i| c >> i & 1 == 1) {
                let ci = cl(1 << i);
                let dominated = (0..m).any(|j| {
                    let cj = cl(1 << j);
                    c >> j & 1 == 1 && cj != ci && cj & ci == ci
                });
                let dup = gens.iter().any(|&g| cl(1 << g) == ci);
                if !dominated && !dup {
                    gens.push(i);
                }
            }
            gens.iter().map(|&i| vars[i].as_str()).collect::<Vec<_>>().join("+")
        })
        .collect();
    names[0] = "0".into();
    if top_extra {
        names.push("1".into());
    } else {
        names[n - 1] = "1".into();
    }
    let structure = FiniteUslTop::from_fn(names, 0, n - 1, |a, b| {
        if b == sets.len() {
            true
        } else if a == sets.len() {
            false
        } else {
            sets[a] & sets[b] == sets[a]
        }
    })
    .expect("closed sets of a closure operator form a lattice");
    WitnessStructure {
        structure,
        assignment,
    }
}

/// Every `(V, ȳ ↦ V)` with `V` an almost-end-extension of `u` generated by
/// `u` and the assignment, one per isomorphism class fixing `u` pointwise.
/// `u` sits at the first `|u|` indices of every `V`.
pub fn enumerate_aee_extensions(
    u: &FiniteUslTop,
    vars: &[String],
    caps: &Caps,
    budget: &mut Budget,
) -> Result<Vec<AeeExtension>, CapExceeded> {
    if vars.len() > caps.max_forall {
        return Err(CapExceeded::new(format!(
            "{} universal variables exceed the cap of {}",
            vars.len(),
            caps.max_forall
        )));
    }
    let mut layer: Vec<(FiniteUslTop, Vec<ElementId>)> = vec![(u.clone(), Vec::new())];
    for var in vars {
        let mut next = Vec::new();
        for (w, assign) in &layer {
            for (v, y) in simple_extensions_over(w, var, u.size(), budget)? {
                if v.size() > caps.max_extension_size {
                    return Err(CapExceeded::new(format!(
                        "extension of size {} exceeds the cap of {}",
                        v.size(),
                        caps.max_extension_size
                    )));
                }
                debug_assert!(aee_over_prefix(u.size(), &v));
                let mut a = assign.clone();
                a.push(y);
                next.push((v, a));
            }
        }
        layer = next;
    }
    let inclusion: Vec<ElementId> = u.elements().collect();
    Ok(layer
        .into_iter()
        .map(|(v, assignment)| AeeExtension {
            witness: SubstructureWitness::new(u.clone(), v, inclusion.clone())
                .expect("the base keeps its indices"),
            assignment,
        })
        .collect())
}

fn aee_over_prefix(n_u: usize, v: &FiniteUslTop) -> bool {
    (n_u..v.size()).all(|new| {
        (0..n_u).all(|b| ElementId(b) == v.top() || !v.leq(ElementId(new), ElementId(b)))
    })
}

/// All `(V, y)` with `V = ⟨W ∪ {y}⟩ ⊇ W`, one per isomorphism class over `W`.
pub fn simple_extensions(
    w: &FiniteUslTop,
    var: &str,
    budget: &mut Budget,
) -> Result<Vec<(FiniteUslTop, ElementId)>, CapExceeded> {
    simple_extensions_over(w, var, 0, budget)
}

/// As [`simple_extensions`], keeping only those in which no new element lies
/// below a non-top element among the first `n_u` elements of `w`.
fn simple_extensions_over(
    w: &FiniteUslTop,
    var: &str,
    n_u: usize,
    budget: &mut Budget,
) -> Result<Vec<(FiniteUslTop, ElementId)>, CapExceeded> {
    let n = w.size();
    let order = top_down(w);
    let meet: Vec<usize> = (0..n * n)
        .map(|i| w.meet(ElementId(i / n), ElementId(i % n)).0)
        .collect();
    let mut out = Vec::new();
    for fix in moore_families(w, budget)? {
        let members: Vec<usize> = (0..n).filter(|&a| fix[a]).collect();
        let c = members.iter().fold(w.top().0, |acc, &a| meet[acc * n + a]);
        // y = c already in W: then Fix = Y0 = ↑c
        if (0..n).all(|a| fix[a] == w.leq(ElementId(c), ElementId(a))) {
            budget.tick("almost-end-extension enumeration")?;
            out.push((w.clone(), ElementId(c)));
        }
        // y new: Y0 avoids c and, over U, every non-top element
        let mut allowed = fix.clone();
        allowed[c] = false;
        for u in (0..n_u).filter(|&u| u != w.top().0) {
            allowed[u] = false;
        }
        for y0 in upsets_within(w, &order, &allowed) {
            budget.tick("almost-end-extension enumeration")?;
            out.push(build_simple_extension(w, &fix, &y0, c, &meet, var));
        }
    }
    Ok(out)
}

/// Upsets of `w` contained in `allowed` that contain `top`.
fn upsets_within(w: &FiniteUslTop, order: &[ElementId], allowed: &[bool]) -> Vec<Vec<bool>> {
    fn rec(
        w: &FiniteUslTop,
        order: &[ElementId],
        allowed: &[bool],
        i: usize,
        cur: &mut Vec<bool>,
        out: &mut Vec<Vec<bool>>,
    ) {
        if i == order.len() {
            out.push(cur.clone());
            return;
        }
        let e = order[i];
        let eligible = allowed[e.0] && w.elements().all(|f| f == e || !w.leq(e, f) || cur[f.0]);
        if e != w.top() {
            rec(w, order, allowed, i + 1, cur, out);
        }
        if eligible {
            cur[e.0] = true;
            rec(w, order, allowed, i + 1, cur, out);
            cur[e.0] = false;
        }
    }
    let mut out = Vec::new();
    if allowed[w.top().0] {
        rec(w, order, allowed, 0, &mut vec![false; w.size()], &mut out);
    }
    out
}

/// The extension with new elements `a ⊔ y` for `a ∈ Fix ∖ Y0`, where
/// `y ∉ W` and `c = min Fix ∉ Y0`. Order and join are read off the
/// parameters: `a ⊔ y ≤ b ⊔ y` iff `a ≤ b`, `w ≤ a ⊔ y` iff `w ≤ a`,
/// `a ⊔ y ≤ w` iff `a ≤ w ∈ Y0`, and `p ⊔ q` is the closure of the join of
/// the underlying elements, made new unless it lands in `Y0`.
fn build_simple_extension(
    w: &FiniteUslTop,
    fix: &[bool],
    y0: &[bool],
    c: usize,
    meet: &[usize],
    var: &str,
) -> (FiniteUslTop, ElementId) {
    let nw = w.size();
    let fresh: Vec<usize> = (0..nw).filter(|&a| fix[a] && !y0[a]).collect();
    let mut slot = vec![usize::MAX; nw];
    for (k, &a) in fresh.iter().enumerate() {
        slot[a] = nw + k;
    }
    // least element of Fix above each element of W
    let closure: Vec<usize> = (0..nw)
        .map(|x| {
            (0..nw)
                .filter(|&a| fix[a] && w.leq(ElementId(x), ElementId(a)))
                .fold(w.top().0, |acc, a| meet[acc * nw + a])
        })
        .collect();
    let n = nw + fresh.len();
    let base = |i: usize| if i < nw { i } else { fresh[i - nw] };
    let le = |x: usize, y: usize| w.leq(ElementId(x), ElementId(y));
    let mut leq = vec![false; n * n];
    let mut join = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (base(i), base(j));
            leq[i * n + j] = match (i < nw, j < nw) {
                (false, true) => le(a, b) && y0[b],
                _ => le(a, b),
            };
            let ab = w.join(ElementId(a), ElementId(b)).0;
            join[i * n + j] = if i < nw && j < nw {
                ab
            } else {
                let cl = closure[ab];
                if y0[cl] {
                    cl
                } else {
                    slot[cl]
                }
            };
        }
    }
    let mut names: Vec<String> = w.names().to_vec();
    for &a in &fresh {
        let mut name = if a == w.bot().0 {
            var.to_string()
        } else {
            format!("{}+{var}", w.name(ElementId(a)))
        };
        while names.contains(&name) {
            name.push('\'');
        }
        names.push(name);
    }
    let v = FiniteUslTop::from_parts_unchecked(names, leq, w.bot(), w.top(), join);
    (v, ElementId(slot[c]))
}

/// True iff some candidate is an almost-end-extension of `u`.
pub fn decide_question1(u: &FiniteUslTop, candidates: &[SubstructureWitness]) -> bool {
    candidates.iter().any(|c| {
        debug_assert_eq!(c.small(), u, "candidate over a different base");
        is_almost_end_extension(c)
    })
}
