use thiserror::Error;

use super::{ElementId, FiniteUslTop};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstructureError {
    #[error("inclusion has {got} entries for a structure of size {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("inclusion target {0} out of range")]
    OutOfRange(ElementId),
    #[error("inclusion is not injective at {0} and {1}")]
    NotInjective(ElementId, ElementId),
    #[error("inclusion does not preserve or reflect order at ({0}, {1})")]
    Order(ElementId, ElementId),
    #[error("inclusion does not preserve the join of ({0}, {1})")]
    Join(ElementId, ElementId),
    #[error("inclusion does not send bot to bot")]
    Bot,
    #[error("inclusion does not send top to top")]
    Top,
}

/// `small` sitting inside `big` via an injective USL^⊤ embedding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstructureWitness {
    small: FiniteUslTop,
    big: FiniteUslTop,
    inclusion: Vec<ElementId>,
}

impl SubstructureWitness {
    pub fn new(
        small: FiniteUslTop,
        big: FiniteUslTop,
        inclusion: Vec<ElementId>,
    ) -> Result<Self, SubstructureError> {
        check_embedding(&small, &big, &inclusion)?;
        Ok(SubstructureWitness {
            small,
            big,
            inclusion,
        })
    }

    pub fn small(&self) -> &FiniteUslTop {
        &self.small
    }

    pub fn big(&self) -> &FiniteUslTop {
        &self.big
    }

    pub fn inclusion(&self) -> &[ElementId] {
        &self.inclusion
    }

    pub fn image(&self, u: ElementId) -> ElementId {
        self.inclusion[u.0]
    }

    pub fn in_image(&self, v: ElementId) -> bool {
        self.inclusion.contains(&v)
    }

    /// Elements of `big` outside the image, in `big`'s order.
    pub fn new_elements(&self) -> Vec<ElementId> {
        self.big.elements().filter(|&v| !self.in_image(v)).collect()
    }

    pub fn into_parts(self) -> (FiniteUslTop, FiniteUslTop, Vec<ElementId>) {
        (self.small, self.big, self.inclusion)
    }
}

/// Checks that `f` is an injective map preserving `≤` both ways, joins, bot and top.
pub fn check_embedding(
    small: &FiniteUslTop,
    big: &FiniteUslTop,
    f: &[ElementId],
) -> Result<(), SubstructureError> {
    if f.len() != small.size() {
        return Err(SubstructureError::WrongLength {
            expected: small.size(),
            got: f.len(),
        });
    }
    if let Some(&bad) = f.iter().find(|t| t.0 >= big.size()) {
        return Err(SubstructureError::OutOfRange(bad));
    }
    for x in small.elements() {
        for y in small.elements() {
            if x < y && f[x.0] == f[y.0] {
                return Err(SubstructureError::NotInjective(x, y));
            }
            if small.leq(x, y) != big.leq(f[x.0], f[y.0]) {
                return Err(SubstructureError::Order(x, y));
            }
            if f[small.join(x, y).0] != big.join(f[x.0], f[y.0]) {
                return Err(SubstructureError::Join(x, y));
            }
        }
    }
    if f[small.bot().0] != big.bot() {
        return Err(SubstructureError::Bot);
    }
    if f[small.top().0] != big.top() {
        return Err(SubstructureError::Top);
    }
    Ok(())
}

/// No new element of `big` lies below a non-top element of `small`.
pub fn is_almost_end_extension(w: &SubstructureWitness) -> bool {
    let big = w.big();
    w.new_elements().into_iter().all(|v| {
        w.small().elements().all(|u| {
            let iu = w.image(u);
            !big.leq(v, iu) || iu == big.top()
        })
    })
}
