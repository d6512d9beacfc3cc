use std::collections::BTreeMap;

use super::ast::{Formula, Term};
use crate::order::{ElementId, FiniteUslTop, SubstructureWitness};

pub type Env = BTreeMap<String, ElementId>;

pub fn eval_term(v: &FiniteUslTop, env: &Env, t: &Term) -> ElementId {
    match t {
        Term::Zero => v.bot(),
        Term::One => v.top(),
        Term::Var(x) => *env
            .get(x)
            .unwrap_or_else(|| panic!("variable `{x}` missing from the environment")),
        Term::Join(a, b) => v.join(eval_term(v, env, a), eval_term(v, env, b)),
    }
}

/// Classical satisfaction of a quantifier-free formula.
///
/// Panics if the formula has quantifiers or a variable is unassigned.
pub fn eval_qf(v: &FiniteUslTop, env: &Env, matrix: &Formula) -> bool {
    match matrix {
        Formula::Leq(a, b) => v.leq(eval_term(v, env, a), eval_term(v, env, b)),
        Formula::Eq(a, b) => eval_term(v, env, a) == eval_term(v, env, b),
        Formula::Not(f) => !eval_qf(v, env, f),
        Formula::And(a, b) => eval_qf(v, env, a) && eval_qf(v, env, b),
        Formula::Or(a, b) => eval_qf(v, env, a) || eval_qf(v, env, b),
        Formula::Implies(a, b) => !eval_qf(v, env, a) || eval_qf(v, env, b),
        Formula::Exists(..) | Formula::Forall(..) => {
            panic!("eval_qf called on a quantified formula")
        }
    }
}

#[derive(Clone, Debug)]
enum CTerm {
    Zero,
    One,
    Slot(usize),
    Join(Box<CTerm>, Box<CTerm>),
}

#[derive(Clone, Debug)]
enum CFormula {
    Leq(CTerm, CTerm),
    Eq(CTerm, CTerm),
    Not(Box<CFormula>),
    And(Box<CFormula>, Box<CFormula>),
    Or(Box<CFormula>, Box<CFormula>),
    Implies(Box<CFormula>, Box<CFormula>),
}

/// A matrix with its variables resolved to slots, for the inner loops of
/// the decision procedure.
#[derive(Clone, Debug)]
pub struct CompiledMatrix {
    vars: Vec<String>,
    body: CFormula,
}

impl CompiledMatrix {
    /// `vars` fixes the slot order; every matrix variable must be listed.
    pub fn new(matrix: &Formula, vars: &[String]) -> Self {
        fn term(t: &Term, vars: &[String]) -> CTerm {
            match t {
                Term::Zero => CTerm::Zero,
                Term::One => CTerm::One,
                Term::Var(x) => CTerm::Slot(
                    vars.iter()
                        .position(|v| v == x)
                        .unwrap_or_else(|| panic!("variable `{x}` has no slot")),
                ),
                Term::Join(a, b) => CTerm::Join(Box::new(term(a, vars)), Box::new(term(b, vars))),
            }
        }
        fn formula(f: &Formula, vars: &[String]) -> CFormula {
            let b = |g: &Formula| Box::new(formula(g, vars));
            match f {
                Formula::Leq(a, c) => CFormula::Leq(term(a, vars), term(c, vars)),
                Formula::Eq(a, c) => CFormula::Eq(term(a, vars), term(c, vars)),
                Formula::Not(g) => CFormula::Not(b(g)),
                Formula::And(g, h) => CFormula::And(b(g), b(h)),
                Formula::Or(g, h) => CFormula::Or(b(g), b(h)),
                Formula::Implies(g, h) => CFormula::Implies(b(g), b(h)),
                Formula::Exists(..) | Formula::Forall(..) => {
                    panic!("cannot compile a quantified formula")
                }
            }
        }
        CompiledMatrix {
            vars: vars.to_vec(),
            body: formula(matrix, vars),
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn eval(&self, v: &FiniteUslTop, slots: &[ElementId]) -> bool {
        fn term(v: &FiniteUslTop, s: &[ElementId], t: &CTerm) -> ElementId {
            match t {
                CTerm::Zero => v.bot(),
                CTerm::One => v.top(),
                CTerm::Slot(i) => s[*i],
                CTerm::Join(a, b) => v.join(term(v, s, a), term(v, s, b)),
            }
        }
        fn formula(v: &FiniteUslTop, s: &[ElementId], f: &CFormula) -> bool {
            match f {
                CFormula::Leq(a, b) => v.leq(term(v, s, a), term(v, s, b)),
                CFormula::Eq(a, b) => term(v, s, a) == term(v, s, b),
                CFormula::Not(g) => !formula(v, s, g),
                CFormula::And(g, h) => formula(v, s, g) && formula(v, s, h),
                CFormula::Or(g, h) => formula(v, s, g) || formula(v, s, h),
                CFormula::Implies(g, h) => !formula(v, s, g) || formula(v, s, h),
            }
        }
        formula(v, slots, &self.body)
    }
}

/// The sub-USL^⊤ generated by `seed`, with the inclusion into `v`.
pub fn generated_substructure(v: &FiniteUslTop, seed: &[ElementId]) -> SubstructureWitness {
    let mut members = vec![false; v.size()];
    members[v.bot().0] = true;
    members[v.top().0] = true;
    for s in seed {
        members[s.0] = true;
    }
    loop {
        let cur: Vec<ElementId> = v.elements().filter(|x| members[x.0]).collect();
        let mut grew = false;
        for &a in &cur {
            for &b in &cur {
                let j = v.join(a, b);
                if !members[j.0] {
                    members[j.0] = true;
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let inclusion: Vec<ElementId> = v.elements().filter(|x| members[x.0]).collect();
    let small = FiniteUslTop::from_fn(
        inclusion.iter().map(|&x| v.name(x).to_string()).collect(),
        inclusion.iter().position(|&x| x == v.bot()).unwrap(),
        inclusion.iter().position(|&x| x == v.top()).unwrap(),
        |i, j| v.leq(inclusion[i], inclusion[j]),
    )
    .expect("a join-closed subset containing bot and top is a USL^⊤");
    SubstructureWitness::new(small, v.clone(), inclusion).expect("inclusion is an embedding")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sentence::parse_formula;

    fn env(pairs: &[(&str, usize)]) -> Env {
        pairs.iter().map(|&(n, i)| (n.to_string(), ElementId(i))).collect()
    }

    #[test]
    fn evaluation_examples() {
        let d = FiniteUslTop::diamond();
        let m = parse_formula("x + y = 1").unwrap();
        assert!(eval_qf(&d, &env(&[("x", 1), ("y", 2)]), &m));
        assert!(eval_qf(&d, &Env::new(), &parse_formula("0 <= 1").unwrap()));
        let c = FiniteUslTop::chain(3);
        assert!(!eval_qf(&c, &env(&[("x", 1)]), &parse_formula("x = 1").unwrap()));
    }

    #[test]
    fn compiled_agrees_with_tree_walk() {
        let d = FiniteUslTop::diamond();
        let m = parse_formula("!(x <= y) -> x + y = 1 \\/ x = 0 & y <= x").unwrap();
        let vars = vec!["x".to_string(), "y".to_string()];
        let c = CompiledMatrix::new(&m, &vars);
        for x in d.elements() {
            for y in d.elements() {
                let e = env(&[("x", x.0), ("y", y.0)]);
                assert_eq!(c.eval(&d, &[x, y]), eval_qf(&d, &e, &m));
            }
        }
    }

    #[test]
    fn generated_substructure_examples() {
        let d = FiniteUslTop::diamond();
        let w = generated_substructure(&d, &[ElementId(1)]);
        assert_eq!(w.small().size(), 3);
        assert_eq!(w.inclusion(), &[ElementId(0), ElementId(1), ElementId(3)]);
        let w = generated_substructure(&d, &[ElementId(1), ElementId(2)]);
        assert_eq!(w.small().size(), 4);
        let w = generated_substructure(&d, &[]);
        assert_eq!(w.small().size(), 2);
        let w = generated_substructure(&FiniteUslTop::chain(1), &[]);
        assert_eq!(w.small().size(), 1);
    }
}
