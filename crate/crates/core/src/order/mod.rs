//! Finite upper semilattices with a named least and greatest element.
//!
//! A [`FiniteUslTop`] is stored by its full `≤` relation. The join table is
//! derived from that relation when the structure is validated and is never an
//! independent source of truth.

mod enumerate;
mod iso;
mod substructure;
pub mod text;

pub use enumerate::{enumerate_usl_top, enumerate_usl_top_brute, EnumerationResult};
pub use iso::{canonical_form, find_isomorphism, CanonicalForm};
pub use substructure::{
    check_embedding, is_almost_end_extension, SubstructureError, SubstructureWitness,
};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of an element, valid only relative to the structure it came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ElementId(pub usize);

impl ElementId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("structure must have at least one element")]
    Empty,
    #[error("relation matrix has {got} entries, expected {expected}")]
    BadShape { expected: usize, got: usize },
    #[error("element index {0} out of range")]
    OutOfRange(usize),
    #[error("not a partial order: {axiom} fails at ({x}, {y})")]
    NotPartialOrder {
        axiom: &'static str,
        x: ElementId,
        y: ElementId,
    },
    #[error("bot {bot} is not below {x}")]
    BotNotLeast { bot: ElementId, x: ElementId },
    #[error("top {top} is not above {x}")]
    TopNotGreatest { top: ElementId, x: ElementId },
    #[error("no join for ({x}, {y}); minimal upper bounds: {minimal_upper_bounds:?}")]
    NoJoin {
        x: ElementId,
        y: ElementId,
        minimal_upper_bounds: Vec<ElementId>,
    },
}

/// A finite upper semilattice with least element `bot` and greatest element `top`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteUslTop {
    names: Vec<String>,
    leq: Vec<bool>,
    bot: ElementId,
    top: ElementId,
    join: Vec<usize>,
}

impl FiniteUslTop {
    /// Checks every axiom and returns the structure, or the first violation.
    ///
    /// `leq` is row-major: `leq[x * n + y]` holds iff `x ≤ y`.
    pub fn validate(
        names: Vec<String>,
        leq: Vec<bool>,
        bot: ElementId,
        top: ElementId,
    ) -> Result<Self, OrderError> {
        let n = names.len();
        if n == 0 {
            return Err(OrderError::Empty);
        }
        if leq.len() != n * n {
            return Err(OrderError::BadShape {
                expected: n * n,
                got: leq.len(),
            });
        }
        for id in [bot, top] {
            if id.0 >= n {
                return Err(OrderError::OutOfRange(id.0));
            }
        }
        let le = |x: usize, y: usize| leq[x * n + y];
        for x in 0..n {
            if !le(x, x) {
                return Err(OrderError::NotPartialOrder {
                    axiom: "reflexivity",
                    x: ElementId(x),
                    y: ElementId(x),
                });
            }
        }
        for x in 0..n {
            for y in 0..n {
                if x != y && le(x, y) && le(y, x) {
                    return Err(OrderError::NotPartialOrder {
                        axiom: "antisymmetry",
                        x: ElementId(x),
                        y: ElementId(y),
                    });
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                if !le(x, y) {
                    continue;
                }
                for z in 0..n {
                    if le(y, z) && !le(x, z) {
                        return Err(OrderError::NotPartialOrder {
                            axiom: "transitivity",
                            x: ElementId(x),
                            y: ElementId(z),
                        });
                    }
                }
            }
        }
        let join = derive_join(n, &leq)?;
        for x in 0..n {
            if !le(bot.0, x) {
                return Err(OrderError::BotNotLeast {
                    bot,
                    x: ElementId(x),
                });
            }
        }
        for x in 0..n {
            if !le(x, top.0) {
                return Err(OrderError::TopNotGreatest {
                    top,
                    x: ElementId(x),
                });
            }
        }
        Ok(FiniteUslTop {
            names,
            leq,
            bot,
            top,
            join,
        })
    }

    /// Trusted constructor for callers that derive `leq` and `join` in
    /// closed form; validated in debug builds only.
    pub(crate) fn from_parts_unchecked(
        names: Vec<String>,
        leq: Vec<bool>,
        bot: ElementId,
        top: ElementId,
        join: Vec<usize>,
    ) -> Self {
        let u = FiniteUslTop {
            names,
            leq,
            bot,
            top,
            join,
        };
        debug_assert_eq!(
            Self::validate(u.names.clone(), u.leq.clone(), bot, top).as_ref(),
            Ok(&u)
        );
        u
    }

    /// Builds a structure with generated names `e0, e1, ...`.
    pub fn from_leq(leq: Vec<bool>, bot: usize, top: usize) -> Result<Self, OrderError> {
        let n = (leq.len() as f64).sqrt() as usize;
        let names = (0..n).map(|i| format!("e{i}")).collect();
        Self::validate(names, leq, ElementId(bot), ElementId(top))
    }

    /// Builds a structure from a `≤` predicate over `0..n`.
    pub fn from_fn(
        names: Vec<String>,
        bot: usize,
        top: usize,
        le: impl Fn(usize, usize) -> bool,
    ) -> Result<Self, OrderError> {
        let n = names.len();
        let mut leq = vec![false; n * n];
        for x in 0..n {
            for y in 0..n {
                leq[x * n + y] = le(x, y);
            }
        }
        Self::validate(names, leq, ElementId(bot), ElementId(top))
    }

    /// The `n`-element chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        let names = match n {
            1 => vec!["0".to_string()],
            2 => vec!["0".to_string(), "1".to_string()],
            _ => {
                let mut v = vec!["0".to_string()];
                v.extend((1..n - 1).map(|i| format!("c{i}")));
                v.push("1".to_string());
                v
            }
        };
        Self::from_fn(names, 0, n - 1, |x, y| x <= y).expect("chains are lattices")
    }

    /// The four-element lattice `0 < a, b < 1`.
    pub fn diamond() -> Self {
        let names = ["0", "a", "b", "1"].map(String::from).to_vec();
        Self::from_fn(names, 0, 3, |x, y| x == y || x == 0 || y == 3).expect("diamond is a lattice")
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn bot(&self) -> ElementId {
        self.bot
    }

    pub fn top(&self) -> ElementId {
        self.top
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> + '_ {
        (0..self.size()).map(ElementId)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: ElementId) -> &str {
        &self.names[x.0]
    }

    pub fn id_of(&self, name: &str) -> Option<ElementId> {
        self.names.iter().position(|n| n == name).map(ElementId)
    }

    pub fn leq_matrix(&self) -> &[bool] {
        &self.leq
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.size());
        self.names = names;
        self
    }

    #[inline]
    pub fn leq(&self, x: ElementId, y: ElementId) -> bool {
        self.leq[x.0 * self.size() + y.0]
    }

    #[inline]
    pub fn lt(&self, x: ElementId, y: ElementId) -> bool {
        x != y && self.leq(x, y)
    }

    #[inline]
    pub fn join(&self, x: ElementId, y: ElementId) -> ElementId {
        ElementId(self.join[x.0 * self.size() + y.0])
    }

    /// Join of a set; the empty join is `bot`.
    pub fn join_all(&self, xs: impl IntoIterator<Item = ElementId>) -> ElementId {
        xs.into_iter().fold(self.bot, |acc, x| self.join(acc, x))
    }

    /// `⋁{z : z ≤ x and z ≤ y}`. The set always contains `bot`.
    pub fn meet(&self, x: ElementId, y: ElementId) -> ElementId {
        self.join_all(self.elements().filter(|&z| self.leq(z, x) && self.leq(z, y)))
    }

    pub fn coatoms(&self) -> Vec<ElementId> {
        let top = self.top;
        self.elements()
            .filter(|&x| self.lt(x, top))
            .filter(|&x| !self.elements().any(|y| self.lt(x, y) && self.lt(y, top)))
            .collect()
    }

    /// True when every pair has a greatest lower bound.
    pub fn is_lattice(&self) -> bool {
        self.elements().all(|x| {
            self.elements().all(|y| {
                let lower: Vec<_> = self
                    .elements()
                    .filter(|&z| self.leq(z, x) && self.leq(z, y))
                    .collect();
                lower
                    .iter()
                    .any(|&g| lower.iter().all(|&z| self.leq(z, g)))
            })
        })
    }

    pub fn is_distributive(&self) -> bool {
        self.elements().all(|x| {
            self.elements().all(|y| {
                self.elements().all(|z| {
                    self.meet(x, self.join(y, z)) == self.join(self.meet(x, y), self.meet(x, z))
                })
            })
        })
    }

    /// Elements that are not the meet of two strictly larger elements (top excluded).
    pub fn meet_irreducibles(&self) -> Vec<ElementId> {
        self.elements()
            .filter(|&m| m != self.top)
            .filter(|&m| {
                let above: Vec<_> = self.elements().filter(|&u| self.lt(m, u)).collect();
                // exactly one upper cover
                let covers: Vec<_> = above
                    .iter()
                    .copied()
                    .filter(|&u| !above.iter().any(|&w| self.lt(w, u)))
                    .collect();
                covers.len() == 1
            })
            .collect()
    }

    /// Pairs `(x, y)` that are the upper covers relation `x ⋖ y`.
    pub fn covers(&self) -> Vec<(ElementId, ElementId)> {
        let mut out = Vec::new();
        for x in self.elements() {
            for y in self.elements() {
                if self.lt(x, y) && !self.elements().any(|z| self.lt(x, z) && self.lt(z, y)) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Relabels elements: element `i` of `self` becomes element `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let n = self.size();
        assert_eq!(perm.len(), n);
        let mut names = vec![String::new(); n];
        let mut leq = vec![false; n * n];
        for x in 0..n {
            names[perm[x]] = self.names[x].clone();
            for y in 0..n {
                leq[perm[x] * n + perm[y]] = self.leq[x * n + y];
            }
        }
        Self::validate(names, leq, ElementId(perm[self.bot.0]), ElementId(perm[self.top.0]))
            .expect("relabeling preserves validity")
    }
}

fn derive_join(n: usize, leq: &[bool]) -> Result<Vec<usize>, OrderError> {
    let le = |x: usize, y: usize| leq[x * n + y];
    let mut join = vec![0; n * n];
    for x in 0..n {
        for y in x..n {
            let ub: Vec<usize> = (0..n).filter(|&z| le(x, z) && le(y, z)).collect();
            let minimal: Vec<usize> = ub
                .iter()
                .copied()
                .filter(|&z| !ub.iter().any(|&w| w != z && le(w, z)))
                .collect();
            if minimal.len() != 1 {
                return Err(OrderError::NoJoin {
                    x: ElementId(x),
                    y: ElementId(y),
                    minimal_upper_bounds: minimal.into_iter().map(ElementId).collect(),
                });
            }
            join[x * n + y] = minimal[0];
            join[y * n + x] = minimal[0];
        }
    }
    Ok(join)
}
