//! Bounded decision procedures for two-block sentences.
//!
//! A Σ₂ sentence `∃x̄ ∀ȳ φ` holds iff some structure `U` generated by `x̄`
//! has every almost-end-extension `V` generated over `U` by `ȳ` satisfying
//! `φ`. The Π₂ dual is decided by its own loop rather than by negation.

use thiserror::Error;

use super::ast::Formula;
use super::eval::CompiledMatrix;
use super::prenex::{prenex_pi2, prenex_sigma2, PrenexError, PrenexPi2, PrenexSigma2};
use super::witness::{enumerate_aee_extensions, enumerate_witness_structures, AeeExtension};
use crate::caps::{CapExceeded, Caps};
use crate::order::{ElementId, FiniteUslTop};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrefixClass {
    /// `∃x̄ ∀ȳ`
    Sigma2,
    /// `∀x̄ ∃ȳ`
    Pi2,
}

/// An extension of the base structure with the inner block assigned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionInstance {
    pub structure: FiniteUslTop,
    pub inclusion: Vec<ElementId>,
    pub assignment: Vec<ElementId>,
    /// Truth value of the matrix under the combined assignment.
    pub value: bool,
}

/// A base structure with the outer block assigned, optionally extended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub base: FiniteUslTop,
    pub assignment: Vec<ElementId>,
    pub extension: Option<ExtensionInstance>,
}

/// Auditable record of a run.
///
/// Σ₂ true: `witness` is the witness structure. Σ₂ false: `instances` holds
/// one falsifying extension per candidate witness. Π₂ true: `instances` holds
/// one satisfying extension per candidate. Π₂ false: `witness` is the
/// candidate with no satisfying extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub class: PrefixClass,
    pub outer_vars: Vec<String>,
    pub inner_vars: Vec<String>,
    pub matrix: Formula,
    /// `None` only on a partial certificate.
    pub verdict: Option<bool>,
    pub witness: Option<Instance>,
    pub instances: Vec<Instance>,
    /// Why the verdict was withheld.
    pub cap: Option<String>,
}

pub type Sigma2Certificate = Certificate;
pub type Pi2Certificate = Certificate;

#[derive(Debug, Clone, Error)]
pub enum DecideError {
    #[error("{cap}")]
    CapExceeded {
        cap: CapExceeded,
        partial: Box<Certificate>,
    },
    #[error(transparent)]
    Fragment(#[from] PrenexError),
}

impl Certificate {
    fn empty(class: PrefixClass, outer: &[String], inner: &[String], matrix: &Formula) -> Self {
        Certificate {
            class,
            outer_vars: outer.to_vec(),
            inner_vars: inner.to_vec(),
            matrix: matrix.clone(),
            verdict: None,
            witness: None,
            instances: Vec::new(),
            cap: None,
        }
    }

    /// Re-evaluates every recorded extension and re-checks its embedding.
    pub fn check(&self) -> Result<(), String> {
        let mut vars = self.outer_vars.clone();
        vars.extend(self.inner_vars.iter().cloned());
        let m = CompiledMatrix::new(&self.matrix, &vars);
        for (i, inst) in self.instances.iter().chain(&self.witness).enumerate() {
            if inst.assignment.len() != self.outer_vars.len() {
                return Err(format!("instance {i}: outer assignment has the wrong length"));
            }
            let Some(ext) = &inst.extension else {
                if self.inner_vars.is_empty() && self.class == PrefixClass::Sigma2 {
                    if !m.eval(&inst.base, &inst.assignment) {
                        return Err(format!("instance {i}: matrix fails in the witness"));
                    }
                }
                continue;
            };
            let w = crate::order::SubstructureWitness::new(
                inst.base.clone(),
                ext.structure.clone(),
                ext.inclusion.clone(),
            )
            .map_err(|e| format!("instance {i}: {e}"))?;
            if !crate::order::is_almost_end_extension(&w) {
                return Err(format!("instance {i}: not an almost-end-extension"));
            }
            let mut slots: Vec<ElementId> =
                inst.assignment.iter().map(|x| ext.inclusion[x.0]).collect();
            slots.extend(&ext.assignment);
            if m.eval(&ext.structure, &slots) != ext.value {
                return Err(format!("instance {i}: recorded value does not re-evaluate"));
            }
        }
        Ok(())
    }
}

fn slots(base: &[ElementId], ext: &AeeExtension) -> Vec<ElementId> {
    let mut s: Vec<ElementId> = base.iter().map(|&x| ext.witness.image(x)).collect();
    s.extend(&ext.assignment);
    s
}

fn record(base: &FiniteUslTop, assignment: &[ElementId], ext: &AeeExtension, value: bool) -> Instance {
    Instance {
        base: base.clone(),
        assignment: assignment.to_vec(),
        extension: Some(ExtensionInstance {
            structure: ext.structure().clone(),
            inclusion: ext.witness.inclusion().to_vec(),
            assignment: ext.assignment.clone(),
            value,
        }),
    }
}

fn capped(cap: CapExceeded, mut cert: Certificate) -> DecideError {
    cert.cap = Some(cap.what.clone());
    DecideError::CapExceeded {
        cap,
        partial: Box::new(cert),
    }
}

pub fn decide_sigma2(s: &PrenexSigma2, caps: &Caps) -> Result<Sigma2Certificate, DecideError> {
    let (xs, ys) = (&s.existential_vars, &s.universal_vars);
    let mut cert = Certificate::empty(PrefixClass::Sigma2, xs, ys, &s.matrix);
    let mut vars = xs.clone();
    vars.extend(ys.iter().cloned());
    let matrix = CompiledMatrix::new(&s.matrix, &vars);
    let mut budget = caps.budget();
    let witnesses = match enumerate_witness_structures(xs, false, caps, &mut budget) {
        Ok(w) => w,
        Err(e) => return Err(capped(e, cert)),
    };
    for w in witnesses {
        let exts = match enumerate_aee_extensions(&w.structure, ys, caps, &mut budget) {
            Ok(e) => e,
            Err(e) => return Err(capped(e, cert)),
        };
        let counter = exts
            .iter()
            .find(|e| !matrix.eval(e.structure(), &slots(&w.assignment, e)));
        match counter {
            Some(e) => cert
                .instances
                .push(record(&w.structure, &w.assignment, e, false)),
            None => {
                cert.verdict = Some(true);
                cert.witness = Some(Instance {
                    base: w.structure,
                    assignment: w.assignment,
                    extension: None,
                });
                return Ok(cert);
            }
        }
    }
    cert.verdict = Some(false);
    Ok(cert)
}

pub fn decide_pi2(s: &PrenexPi2, caps: &Caps) -> Result<Pi2Certificate, DecideError> {
    let (xs, ys) = (&s.universal_vars, &s.existential_vars);
    // the enumerators cap the outer and inner blocks; here the outer is ∀
    let caps = &Caps {
        max_exists: caps.max_forall,
        max_forall: caps.max_exists,
        ..caps.clone()
    };
    let mut cert = Certificate::empty(PrefixClass::Pi2, xs, ys, &s.matrix);
    let mut vars = xs.clone();
    vars.extend(ys.iter().cloned());
    let matrix = CompiledMatrix::new(&s.matrix, &vars);
    let mut budget = caps.budget();
    let candidates = match enumerate_witness_structures(xs, false, caps, &mut budget) {
        Ok(c) => c,
        Err(e) => return Err(capped(e, cert)),
    };
    let mut verdict = true;
    for c in candidates {
        let exts = match enumerate_aee_extensions(&c.structure, ys, caps, &mut budget) {
            Ok(e) => e,
            Err(e) => return Err(capped(e, cert)),
        };
        let mut support = None;
        for e in &exts {
            let mut env: Vec<ElementId> = c.assignment.iter().map(|&x| e.witness.image(x)).collect();
            env.extend(e.assignment.iter().copied());
            if matrix.eval(e.structure(), &env) {
                support = Some(e);
                break;
            }
        }
        if let Some(e) = support {
            cert.instances.push(record(&c.structure, &c.assignment, e, true));
        } else {
            verdict = false;
            cert.instances.clear();
            cert.witness = Some(Instance {
                base: c.structure,
                assignment: c.assignment,
                extension: None,
            });
            break;
        }
    }
    cert.verdict = Some(verdict);
    Ok(cert)
}

/// Routes a sentence to the Σ₂ or Π₂ procedure by its prefix; sentences in
/// both classes (at most one block) go to Σ₂.
pub fn decide(f: &Formula, caps: &Caps) -> Result<Certificate, DecideError> {
    match prenex_sigma2(f) {
        Ok(s) => decide_sigma2(&s, caps),
        Err(PrenexError::NotSigma2 { .. }) => decide_pi2(&prenex_pi2(f)?, caps),
        Err(e) => Err(e.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sentence::parse;

    fn sigma(s: &str) -> Certificate {
        let c = decide_sigma2(&prenex_sigma2(&parse(s).unwrap()).unwrap(), &Caps::default()).unwrap();
        c.check().unwrap();
        c
    }

    fn pi(s: &str) -> Certificate {
        let c = decide_pi2(&prenex_pi2(&parse(s).unwrap()).unwrap(), &Caps::default()).unwrap();
        c.check().unwrap();
        c
    }

    #[test]
    fn sigma2_examples() {
        let c = sigma("exists x . x = x");
        assert_eq!(c.verdict, Some(true));
        let w = c.witness.unwrap();
        assert_eq!(w.base.size(), 2);
        assert_eq!(w.assignment[0], w.base.bot());

        let c = sigma("exists x y . x + y = 1 & !(x = 1) & !(y = 1)");
        assert_eq!(c.verdict, Some(true));
        let w = c.witness.unwrap();
        assert_eq!(w.base.size(), 4);
        assert!(!w.base.leq(w.assignment[0], w.assignment[1]));

        let c = sigma("exists x . !(x = 0) & forall y . (y <= x -> (y = 0 \\/ y = x))");
        assert_eq!(c.verdict, Some(true));
        let w = c.witness.unwrap();
        assert_eq!(w.base.size(), 3);
        assert!(w.base.lt(w.base.bot(), w.assignment[0]) && w.base.lt(w.assignment[0], w.base.top()));

        let c = sigma("exists x . !(x = 1) & forall y . y <= x");
        assert_eq!(c.verdict, Some(false));
        assert_eq!(c.instances.len(), 3);
    }

    #[test]
    fn pi2_examples() {
        assert_eq!(pi("forall x . x <= 1").verdict, Some(true));
        let c = pi("forall x . exists y . !(y <= x) & !(x <= y)");
        assert_eq!(c.verdict, Some(false));
        let w = c.witness.unwrap();
        // x ↦ 0 comes first in canonical order; it refutes as well as x ↦ 1
        assert_eq!(w.assignment[0], w.base.bot());
        assert_eq!(pi("forall x . exists y . (x <= y & !(x = y)) \\/ x = 1").verdict, Some(true));
    }

    #[test]
    fn routing() {
        let caps = Caps::default();
        let c = decide(&parse("forall x . exists y . x <= y").unwrap(), &caps).unwrap();
        assert_eq!(c.class, PrefixClass::Pi2);
        let c = decide(&parse("0 <= 1").unwrap(), &caps).unwrap();
        assert_eq!((c.class, c.verdict), (PrefixClass::Sigma2, Some(true)));
        let err = decide(&parse("forall x . exists y . forall z . x + y <= z").unwrap(), &caps);
        assert!(matches!(err, Err(DecideError::Fragment(_))));
    }

    #[test]
    fn caps_withhold_the_verdict() {
        let caps = Caps {
            max_exists: 1,
            ..Caps::default()
        };
        let s = prenex_sigma2(&parse("exists x y . x = y").unwrap()).unwrap();
        match decide_sigma2(&s, &caps) {
            Err(DecideError::CapExceeded { partial, .. }) => {
                assert_eq!(partial.verdict, None);
                assert!(partial.cap.is_some());
            }
            other => panic!("{other:?}"),
        }
    }
}
