//! Oracles kept apart from the library: a formula AST with its own printer
//! and evaluator, random generators, and definition-literal predicates.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use uslkit::caps::Budget;
use uslkit::order::{enumerate_usl_top, ElementId, FiniteUslTop, SubstructureWitness};
use uslkit::sentence::generated_substructure;

/// A finite order with joins found by scanning upper bounds, independent of
/// the library's join table.
pub struct Model {
    pub n: usize,
    pub leq: Vec<bool>,
    pub join: Vec<usize>,
    pub bot: usize,
    pub top: usize,
}

impl Model {
    pub fn new(l: &FiniteUslTop) -> Self {
        let n = l.size();
        let leq: Vec<bool> = (0..n * n).map(|i| l.leq(ElementId(i / n), ElementId(i % n))).collect();
        let le = |a: usize, b: usize| leq[a * n + b];
        let join = (0..n * n)
            .map(|i| {
                let (x, y) = (i / n, i % n);
                (0..n)
                    .filter(|&z| le(x, z) && le(y, z))
                    .find(|&z| (0..n).all(|w| !(le(x, w) && le(y, w)) || le(z, w)))
                    .expect("finite USL with top has joins")
            })
            .collect();
        let bot = (0..n).find(|&b| (0..n).all(|x| le(b, x))).unwrap();
        let top = (0..n).find(|&t| (0..n).all(|x| le(x, t))).unwrap();
        Model { n, leq, join, bot, top }
    }

    /// Every assignment of `k` variables.
    pub fn assignments(&self, k: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.n.pow(k as u32)).map(move |mut c| {
            (0..k)
                .map(|_| {
                    let v = c % self.n;
                    c /= self.n;
                    v
                })
                .collect()
        })
    }
}

#[derive(Clone, Debug)]
pub enum T {
    V(usize),
    Zero,
    One,
    J(Box<T>, Box<T>),
}

#[derive(Clone, Debug)]
pub enum F {
    Le(T, T),
    Eq(T, T),
    Not(Box<F>),
    And(Box<F>, Box<F>),
    Or(Box<F>, Box<F>),
}

impl T {
    pub fn show(&self, names: &[String]) -> String {
        match self {
            T::V(i) => names[*i].clone(),
            T::Zero => "0".into(),
            T::One => "1".into(),
            T::J(a, b) => format!("({} + {})", a.show(names), b.show(names)),
        }
    }

    pub fn eval(&self, m: &Model, env: &[usize]) -> usize {
        match self {
            T::V(i) => env[*i],
            T::Zero => m.bot,
            T::One => m.top,
            T::J(a, b) => m.join[a.eval(m, env) * m.n + b.eval(m, env)],
        }
    }
}

impl F {
    pub fn show(&self, names: &[String]) -> String {
        match self {
            F::Le(a, b) => format!("{} <= {}", a.show(names), b.show(names)),
            F::Eq(a, b) => format!("{} = {}", a.show(names), b.show(names)),
            F::Not(f) => format!("!({})", f.show(names)),
            F::And(a, b) => format!("({}) & ({})", a.show(names), b.show(names)),
            F::Or(a, b) => format!("({}) \\/ ({})", a.show(names), b.show(names)),
        }
    }

    pub fn eval(&self, m: &Model, env: &[usize]) -> bool {
        match self {
            F::Le(a, b) => m.leq[a.eval(m, env) * m.n + b.eval(m, env)],
            F::Eq(a, b) => a.eval(m, env) == b.eval(m, env),
            F::Not(f) => !f.eval(m, env),
            F::And(a, b) => a.eval(m, env) && b.eval(m, env),
            F::Or(a, b) => a.eval(m, env) || b.eval(m, env),
        }
    }
}

pub fn random_term(rng: &mut ChaCha8Rng, vars: usize, depth: u32) -> T {
    let leaf = |rng: &mut ChaCha8Rng| match rng.gen_range(0..vars + 2) {
        i if i < vars => T::V(i),
        i if i == vars => T::Zero,
        _ => T::One,
    };
    if depth > 0 && rng.gen_bool(0.3) {
        T::J(Box::new(random_term(rng, vars, depth - 1)), Box::new(random_term(rng, vars, depth - 1)))
    } else if vars > 0 && rng.gen_bool(0.8) {
        T::V(rng.gen_range(0..vars))
    } else {
        leaf(rng)
    }
}

pub fn random_matrix(rng: &mut ChaCha8Rng, vars: usize, depth: u32) -> F {
    if depth == 0 || rng.gen_bool(0.3) {
        let (a, b) = (random_term(rng, vars, 1), random_term(rng, vars, 1));
        let atom = if rng.gen_bool(0.6) { F::Le(a, b) } else { F::Eq(a, b) };
        return if rng.gen_bool(0.3) { F::Not(Box::new(atom)) } else { atom };
    }
    let (a, b) = (Box::new(random_matrix(rng, vars, depth - 1)), Box::new(random_matrix(rng, vars, depth - 1)));
    match rng.gen_range(0..3) {
        0 => F::And(a, b),
        1 => F::Or(a, b),
        _ => F::Not(Box::new(F::And(a, b))),
    }
}

pub fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// `quant v1 v2 . body`, or the body alone for an empty block.
pub fn quantify(quant: &str, vars: &[String], body: &str) -> String {
    if vars.is_empty() {
        body.to_string()
    } else {
        format!("{quant} {} . {body}", vars.join(" "))
    }
}

pub fn all_up_to(n: usize) -> Vec<FiniteUslTop> {
    enumerate_usl_top(n, &mut Budget::unlimited()).unwrap().all().cloned().collect()
}

/// Every join-closed subset containing bot and top, as a substructure.
pub fn substructures(v: &FiniteUslTop) -> Vec<SubstructureWitness> {
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

/// No new element lies below the image of a non-top element.
pub fn aee_literal(small: &FiniteUslTop, big: &FiniteUslTop, inc: &[ElementId]) -> bool {
    big.elements().filter(|v| !inc.contains(v)).all(|v| {
        small.elements().all(|u| !big.leq(v, inc[u.0]) || inc[u.0] == big.top())
    })
}
