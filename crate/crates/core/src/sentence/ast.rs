use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Zero,
    One,
    Var(String),
    Join(Box<Term>, Box<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Leq(Term, Term),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(Vec<String>, Box<Formula>),
    Forall(Vec<String>, Box<Formula>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn join(a: Term, b: Term) -> Term {
        Term::Join(Box::new(a), Box::new(b))
    }

    fn vars_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Zero | Term::One => {}
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Join(a, b) => {
                a.vars_into(out);
                b.vars_into(out);
            }
        }
    }
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(vars: &[&str], body: Formula) -> Formula {
        Formula::Exists(vars.iter().map(|v| v.to_string()).collect(), Box::new(body))
    }

    pub fn forall(vars: &[&str], body: Formula) -> Formula {
        Formula::Forall(vars.iter().map(|v| v.to_string()).collect(), Box::new(body))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_vars_into(&mut out);
        out
    }

    fn free_vars_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Leq(a, b) | Formula::Eq(a, b) => {
                a.vars_into(out);
                b.vars_into(out);
            }
            Formula::Not(f) => f.free_vars_into(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.free_vars_into(out);
                b.free_vars_into(out);
            }
            Formula::Exists(vs, f) | Formula::Forall(vs, f) => {
                let mut inner = BTreeSet::new();
                f.free_vars_into(&mut inner);
                for v in vs {
                    inner.remove(v);
                }
                out.extend(inner);
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Leq(..) | Formula::Eq(..) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Zero => write!(f, "0"),
            Term::One => write!(f, "1"),
            Term::Var(v) => write!(f, "{v}"),
            Term::Join(a, b) => {
                write!(f, "{a} + ")?;
                match **b {
                    Term::Join(..) => write!(f, "({b})"),
                    _ => write!(f, "{b}"),
                }
            }
        }
    }
}

// Printing level: 0 implication, 1 disjunction, 2 conjunction, 3 unary.
fn write_formula(f: &Formula, level: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let (own, body): (u8, Box<dyn Fn(&mut fmt::Formatter<'_>) -> fmt::Result + '_>) = match f {
        Formula::Leq(a, b) => (3, Box::new(move |o| write!(o, "{a} <= {b}"))),
        Formula::Eq(a, b) => (3, Box::new(move |o| write!(o, "{a} = {b}"))),
        Formula::Not(g) => (
            3,
            Box::new(move |o| {
                write!(o, "!")?;
                write_formula(g, 3, o)
            }),
        ),
        Formula::And(a, b) => (
            2,
            Box::new(move |o| {
                write_formula(a, 2, o)?;
                write!(o, " & ")?;
                write_formula(b, 3, o)
            }),
        ),
        Formula::Or(a, b) => (
            1,
            Box::new(move |o| {
                write_formula(a, 1, o)?;
                write!(o, " \\/ ")?;
                write_formula(b, 2, o)
            }),
        ),
        Formula::Implies(a, b) => (
            0,
            Box::new(move |o| {
                write_formula(a, 1, o)?;
                write!(o, " -> ")?;
                write_formula(b, 0, o)
            }),
        ),
        Formula::Exists(vs, g) | Formula::Forall(vs, g) => {
            let q = if matches!(f, Formula::Exists(..)) { "exists" } else { "forall" };
            // a quantifier body runs to the end of the group, so it only
            // prints bare at the outermost level
            (
                0,
                Box::new(move |o| {
                    write!(o, "{q} {} . ", vs.join(" "))?;
                    write_formula(g, 0, o)
                }),
            )
        }
    };
    if own >= level && !(own == 0 && level > 0) {
        body(out)
    } else {
        write!(out, "(")?;
        body(out)?;
        write!(out, ")")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, 0, f)
    }
}
