//! Two-block prenex forms.
//!
//! Bound variables are first renamed apart. Quantifiers are then collected
//! into a forest (siblings under `&`, `\/`, `->` are independent) with their
//! effective kind after negations, and the forest is cut into alternating
//! blocks greedily starting from the requested kind.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::ast::{Formula, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    fn flip(self) -> Self {
        match self {
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::Forall => Quantifier::Exists,
        }
    }
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantifier::Exists => "exists",
            Quantifier::Forall => "forall",
        })
    }
}

/// A quantifier block of the prenex prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub kind: Quantifier,
    pub vars: Vec<String>,
}

fn show_prefix(blocks: &[Block]) -> String {
    blocks
        .iter()
        .map(|b| format!("{} {}", b.kind, b.vars.join(" ")))
        .collect::<Vec<_>>()
        .join(" . ")
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PrenexError {
    #[error("formula has free variables: {0:?}")]
    NotASentence(Vec<String>),
    #[error("not a Σ₂ sentence: prefix `{}`", show_prefix(.prefix))]
    NotSigma2 { prefix: Vec<Block> },
    #[error("not a Π₂ sentence: prefix `{}`", show_prefix(.prefix))]
    NotPi2 { prefix: Vec<Block> },
}

/// `∃x̄ ∀ȳ matrix`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrenexSigma2 {
    pub existential_vars: Vec<String>,
    pub universal_vars: Vec<String>,
    pub matrix: Formula,
}

/// `∀x̄ ∃ȳ matrix`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrenexPi2 {
    pub universal_vars: Vec<String>,
    pub existential_vars: Vec<String>,
    pub matrix: Formula,
}

fn wrap(kind: Quantifier, vars: &[String], body: Formula) -> Formula {
    if vars.is_empty() {
        return body;
    }
    match kind {
        Quantifier::Exists => Formula::Exists(vars.to_vec(), Box::new(body)),
        Quantifier::Forall => Formula::Forall(vars.to_vec(), Box::new(body)),
    }
}

impl PrenexSigma2 {
    pub fn to_formula(&self) -> Formula {
        let inner = wrap(Quantifier::Forall, &self.universal_vars, self.matrix.clone());
        wrap(Quantifier::Exists, &self.existential_vars, inner)
    }
}

impl PrenexPi2 {
    pub fn to_formula(&self) -> Formula {
        let inner = wrap(Quantifier::Exists, &self.existential_vars, self.matrix.clone());
        wrap(Quantifier::Forall, &self.universal_vars, inner)
    }
}

impl fmt::Display for PrenexSigma2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

impl fmt::Display for PrenexPi2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

pub fn prenex_sigma2(f: &Formula) -> Result<PrenexSigma2, PrenexError> {
    let (blocks, matrix) = prenex_blocks(f, Quantifier::Exists)?;
    match blocks.as_slice() {
        [] => Ok(PrenexSigma2 {
            existential_vars: vec![],
            universal_vars: vec![],
            matrix,
        }),
        [b] => Ok(match b.kind {
            Quantifier::Exists => PrenexSigma2 {
                existential_vars: b.vars.clone(),
                universal_vars: vec![],
                matrix,
            },
            Quantifier::Forall => PrenexSigma2 {
                existential_vars: vec![],
                universal_vars: b.vars.clone(),
                matrix,
            },
        }),
        [e, a] if e.kind == Quantifier::Exists => Ok(PrenexSigma2 {
            existential_vars: e.vars.clone(),
            universal_vars: a.vars.clone(),
            matrix,
        }),
        _ => Err(PrenexError::NotSigma2 { prefix: blocks }),
    }
}

pub fn prenex_pi2(f: &Formula) -> Result<PrenexPi2, PrenexError> {
    let (blocks, matrix) = prenex_blocks(f, Quantifier::Forall)?;
    match blocks.as_slice() {
        [] => Ok(PrenexPi2 {
            universal_vars: vec![],
            existential_vars: vec![],
            matrix,
        }),
        [b] => Ok(match b.kind {
            Quantifier::Forall => PrenexPi2 {
                universal_vars: b.vars.clone(),
                existential_vars: vec![],
                matrix,
            },
            Quantifier::Exists => PrenexPi2 {
                universal_vars: vec![],
                existential_vars: b.vars.clone(),
                matrix,
            },
        }),
        [a, e] if a.kind == Quantifier::Forall => Ok(PrenexPi2 {
            universal_vars: a.vars.clone(),
            existential_vars: e.vars.clone(),
            matrix,
        }),
        _ => Err(PrenexError::NotPi2 { prefix: blocks }),
    }
}

/// Prenex prefix with the fewest alternations whose first block is `first`
/// (an empty first block is dropped), plus the quantifier-free matrix.
pub fn prenex_blocks(f: &Formula, first: Quantifier) -> Result<(Vec<Block>, Formula), PrenexError> {
    let free = f.free_vars();
    if !free.is_empty() {
        return Err(PrenexError::NotASentence(free.into_iter().collect()));
    }
    let renamed = rename_apart(f);
    let (mut forest, matrix) = pull(&renamed, true);
    let mut blocks = Vec::new();
    let mut kind = first;
    while !forest.is_empty() {
        let mut vars = Vec::new();
        loop {
            let mut next = Vec::new();
            let mut took = false;
            for node in forest {
                if node.kind == kind {
                    vars.push(node.var);
                    next.extend(node.children);
                    took = true;
                } else {
                    next.push(node);
                }
            }
            forest = next;
            if !took {
                break;
            }
        }
        if !vars.is_empty() {
            blocks.push(Block { kind, vars });
        }
        kind = kind.flip();
    }
    Ok((blocks, strip_double_negation(matrix)))
}

struct QNode {
    kind: Quantifier,
    var: String,
    children: Vec<QNode>,
}

fn pull(f: &Formula, positive: bool) -> (Vec<QNode>, Formula) {
    match f {
        Formula::Leq(..) | Formula::Eq(..) => (vec![], f.clone()),
        Formula::Not(g) => {
            let (forest, m) = pull(g, !positive);
            (forest, Formula::not(m))
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            let left_pol = if matches!(f, Formula::Implies(..)) { !positive } else { positive };
            let (mut fa, ma) = pull(a, left_pol);
            let (fb, mb) = pull(b, positive);
            fa.extend(fb);
            let m = match f {
                Formula::And(..) => Formula::and(ma, mb),
                Formula::Or(..) => Formula::or(ma, mb),
                _ => Formula::implies(ma, mb),
            };
            (fa, m)
        }
        Formula::Exists(vs, g) | Formula::Forall(vs, g) => {
            let base = if matches!(f, Formula::Exists(..)) {
                Quantifier::Exists
            } else {
                Quantifier::Forall
            };
            let kind = if positive { base } else { base.flip() };
            let (mut forest, m) = pull(g, positive);
            for v in vs.iter().rev() {
                forest = vec![QNode {
                    kind,
                    var: v.clone(),
                    children: forest,
                }];
            }
            (forest, m)
        }
    }
}

fn strip_double_negation(f: Formula) -> Formula {
    match f {
        Formula::Not(g) => match *g {
            Formula::Not(h) => strip_double_negation(*h),
            g => Formula::not(strip_double_negation(g)),
        },
        Formula::And(a, b) => Formula::and(strip_double_negation(*a), strip_double_negation(*b)),
        Formula::Or(a, b) => Formula::or(strip_double_negation(*a), strip_double_negation(*b)),
        Formula::Implies(a, b) => {
            Formula::implies(strip_double_negation(*a), strip_double_negation(*b))
        }
        other => other,
    }
}

/// Gives every binder a distinct name. The first binder of a name keeps it;
/// later ones become `name_1`, `name_2`, ... avoiding every name in sight.
pub fn rename_apart(f: &Formula) -> Formula {
    let mut all = BTreeSet::new();
    collect_names(f, &mut all);
    let mut taken = BTreeSet::new();
    rename(f, &mut Vec::new(), &all, &mut taken)
}

fn collect_names(f: &Formula, out: &mut BTreeSet<String>) {
    fn term(t: &Term, out: &mut BTreeSet<String>) {
        match t {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Join(a, b) => {
                term(a, out);
                term(b, out);
            }
            _ => {}
        }
    }
    match f {
        Formula::Leq(a, b) | Formula::Eq(a, b) => {
            term(a, out);
            term(b, out);
        }
        Formula::Not(g) => collect_names(g, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_names(a, out);
            collect_names(b, out);
        }
        Formula::Exists(vs, g) | Formula::Forall(vs, g) => {
            out.extend(vs.iter().cloned());
            collect_names(g, out);
        }
    }
}

fn rename(
    f: &Formula,
    scope: &mut Vec<(String, String)>,
    all: &BTreeSet<String>,
    taken: &mut BTreeSet<String>,
) -> Formula {
    fn term(t: &Term, scope: &[(String, String)]) -> Term {
        match t {
            Term::Var(v) => Term::Var(
                scope
                    .iter()
                    .rev()
                    .find(|(old, _)| old == v)
                    .map_or_else(|| v.clone(), |(_, new)| new.clone()),
            ),
            Term::Join(a, b) => Term::join(term(a, scope), term(b, scope)),
            other => other.clone(),
        }
    }
    match f {
        Formula::Leq(a, b) => Formula::Leq(term(a, scope), term(b, scope)),
        Formula::Eq(a, b) => Formula::Eq(term(a, scope), term(b, scope)),
        Formula::Not(g) => Formula::not(rename(g, scope, all, taken)),
        Formula::And(a, b) => {
            Formula::and(rename(a, scope, all, taken), rename(b, scope, all, taken))
        }
        Formula::Or(a, b) => Formula::or(rename(a, scope, all, taken), rename(b, scope, all, taken)),
        Formula::Implies(a, b) => {
            Formula::implies(rename(a, scope, all, taken), rename(b, scope, all, taken))
        }
        Formula::Exists(vs, g) | Formula::Forall(vs, g) => {
            let depth = scope.len();
            let mut fresh = Vec::with_capacity(vs.len());
            for v in vs {
                let new = if taken.contains(v) {
                    (1..)
                        .map(|i| format!("{v}_{i}"))
                        .find(|c| !all.contains(c) && !taken.contains(c))
                        .expect("unbounded supply of names")
                } else {
                    v.clone()
                };
                taken.insert(new.clone());
                scope.push((v.clone(), new.clone()));
                fresh.push(new);
            }
            let body = rename(g, scope, all, taken);
            scope.truncate(depth);
            match f {
                Formula::Exists(..) => Formula::Exists(fresh, Box::new(body)),
                _ => Formula::Forall(fresh, Box::new(body)),
            }
        }
    }
}
