//! Uniform trees at finite depth: application, restriction, transfer,
//! coding accounting, decoding and splits.

pub mod coding;
pub mod splits;
pub mod text;

use thiserror::Error;

use crate::extension::Checks;
use crate::order::ElementId;
use crate::table::{MapId, RepPrefix};

pub use coding::{
    check_branch_coding_free, decode, decode_projections, encode_bits, no_more_root_coding, root_coding_count,
    x_safe,
};
pub use splits::{find_splits, has_split, sp_meet_closed, sp_set, DecisionTable, Split};
pub use text::{parse_tree, write_tree};

/// A string whose `j`-th entry is a map of `Θⱼ`.
pub type Str = Vec<MapId>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForcingError {
    #[error("string of length {len} exceeds tree depth {depth}")]
    DepthExceeded { len: usize, depth: usize },
    #[error("transfer string of length {len} is longer than the root ({root})")]
    BadTransferLength { len: usize, root: usize },
    #[error("entry {entry} at position {pos} is not in the stage for that position")]
    OutOfStage { pos: usize, entry: MapId },
    #[error("({x}, {y}) does not join nontrivially to top")]
    PairDoesNotJoinToTop { x: ElementId, y: ElementId },
    #[error("need {need} levels, tree has {have}")]
    PrefixTooShort { need: usize, have: usize },
    #[error("top has no escapes")]
    TopHasNoEscape,
    #[error("the tree already codes for this pair outside its forks")]
    UnforcedCoding,
}

/// `T(σ⌢α) = T(σ)⌢π_l⌢ρ_{l,α}` for `|σ| = l < depth`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub pi: Str,
    /// indexed by `α ∈ Θ_l`
    pub rho: Vec<Str>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformTreeSpec {
    pub rep: RepPrefix,
    pub root: Str,
    pub levels: Vec<Level>,
}

impl UniformTreeSpec {
    /// `T(σ) = σ` up to `depth`.
    pub fn identity(rep: &RepPrefix, depth: usize) -> Self {
        let levels = (0..depth)
            .map(|l| Level { pi: vec![], rho: (0..rep.theta_len(l)).map(|a| vec![MapId(a)]).collect() })
            .collect();
        UniformTreeSpec { rep: rep.clone(), root: vec![], levels }
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// `|T(σ)⌢π_l|` for `|σ| = l`.
    pub fn height(&self, l: usize) -> usize {
        self.root.len()
            + self.levels[..l].iter().map(|lv| lv.pi.len() + lv.rho[0].len()).sum::<usize>()
            + self.levels[l].pi.len()
    }

    pub fn in_domain(&self, s: &[MapId]) -> bool {
        s.iter().enumerate().all(|(j, a)| a.0 < self.rep.theta_len(j))
    }

    pub fn apply(&self, sigma: &[MapId]) -> Result<Str, ForcingError> {
        if sigma.len() > self.depth() {
            return Err(ForcingError::DepthExceeded { len: sigma.len(), depth: self.depth() });
        }
        let mut out = self.root.clone();
        for (l, &a) in sigma.iter().enumerate() {
            let lv = &self.levels[l];
            let rho = lv.rho.get(a.0).ok_or(ForcingError::OutOfStage { pos: l, entry: a })?;
            out.extend_from_slice(&lv.pi);
            out.extend_from_slice(rho);
        }
        Ok(out)
    }

    /// `T_σ(τ) = T(σ⌢τ)`: rooted at `T(σ)`, levels shifted by `|σ|` and
    /// restricted to `Θ_l` at new level `l`.
    pub fn restrict(&self, sigma: &[MapId]) -> Result<Self, ForcingError> {
        if let Some((j, &a)) = sigma.iter().enumerate().find(|(j, a)| a.0 >= self.rep.theta_len(*j)) {
            return Err(ForcingError::OutOfStage { pos: j, entry: a });
        }
        let root = self.apply(sigma)?;
        let levels = self.levels[sigma.len()..]
            .iter()
            .enumerate()
            .map(|(l, lv)| Level { pi: lv.pi.clone(), rho: lv.rho[..self.rep.theta_len(l)].to_vec() })
            .collect();
        Ok(UniformTreeSpec { rep: self.rep.clone(), root, levels })
    }

    /// `T^μ`: the root's initial segment of length `|μ|` replaced by `μ`.
    pub fn transfer(&self, mu: &[MapId]) -> Result<Self, ForcingError> {
        if mu.len() > self.root.len() {
            return Err(ForcingError::BadTransferLength { len: mu.len(), root: self.root.len() });
        }
        if let Some((j, &a)) = mu.iter().enumerate().find(|(j, a)| a.0 >= self.rep.theta_len(*j)) {
            return Err(ForcingError::OutOfStage { pos: j, entry: a });
        }
        let mut t = self.clone();
        t.root[..mu.len()].copy_from_slice(mu);
        Ok(t)
    }

    /// Shape checks: one `ρ` per map of `Θ_l`, equal lengths per level,
    /// `ρ_{l,α}` starting with `α`, and every entry of every `T(σ)` in the
    /// stage of its position.
    pub fn validate(&self) -> Checks {
        let mut c = Checks::default();
        let r = &self.rep;
        let shape = self.levels.iter().enumerate().find_map(|(l, lv)| {
            if lv.rho.len() != r.theta_len(l) {
                return Some(format!("level {l} has {} rho strings for {} maps", lv.rho.len(), r.theta_len(l)));
            }
            let len = lv.rho[0].len();
            lv.rho.iter().enumerate().find_map(|(a, rho)| {
                if rho.len() != len {
                    Some(format!("rho{l},{a} has length {} instead of {len}", rho.len()))
                } else if rho.first() != Some(&MapId(a)) {
                    Some(format!("rho{l},{a} does not start with alpha{a}"))
                } else {
                    None
                }
            })
        });
        let ok_shape = shape.is_none();
        c.push("uniform shape", shape);
        if !ok_shape {
            return c;
        }
        let in_stage = |pos: usize, s: &[MapId]| {
            s.iter().enumerate().find(|(j, a)| a.0 >= r.theta_len(pos + j)).map(|(j, a)| format!("{a} at position {}", pos + j))
        };
        let mut bad = in_stage(0, &self.root);
        for (l, lv) in self.levels.iter().enumerate() {
            if bad.is_some() {
                break;
            }
            let h = self.height(l);
            bad = in_stage(h - lv.pi.len(), &lv.pi).or_else(|| lv.rho.iter().find_map(|rho| in_stage(h, rho)));
        }
        c.push("entries in stage", bad);
        c
    }

    /// `α ≡ₓ β` implies `ρ_{l,α} ≡ₓ ρ_{l,β}` at every level.
    pub fn congruence_respecting(&self) -> Option<String> {
        let l_ = self.rep.lattice();
        let t = &self.rep.table;
        for (l, lv) in self.levels.iter().enumerate() {
            for a in 0..lv.rho.len() {
                for b in a + 1..lv.rho.len() {
                    for x in l_.elements() {
                        if t.congruent(x, MapId(a), MapId(b))
                            && lv.rho[a].iter().zip(&lv.rho[b]).any(|(&p, &q)| !t.congruent(x, p, q))
                        {
                            return Some(format!("level {l}, alpha{a} and alpha{b} modulo {}", l_.name(x)));
                        }
                    }
                }
            }
        }
        None
    }

    /// Every string of length `len` in the domain, lexicographically.
    pub fn strings(&self, len: usize) -> Vec<Str> {
        let mut out = vec![vec![]];
        for j in 0..len {
            out = out
                .into_iter()
                .flat_map(|s: Str| {
                    (0..self.rep.theta_len(j)).map(move |a| {
                        let mut t = s.clone();
                        t.push(MapId(a));
                        t
                    })
                })
                .collect();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::Caps;
    use crate::order::FiniteUslTop;
    use crate::table::build_rep_prefix;

    pub(crate) fn rep() -> RepPrefix {
        build_rep_prefix(&FiniteUslTop::diamond(), 1, true, &Caps::default()).unwrap()
    }

    /// A depth-2 tree with a root, a stem at level 1 and longer tails.
    pub(crate) fn sample(rep: &RepPrefix) -> UniformTreeSpec {
        let mut t = UniformTreeSpec::identity(rep, 2);
        t.root = vec![MapId(0), MapId(1)];
        t.levels[1].pi = vec![MapId(0)];
        for rho in &mut t.levels[0].rho {
            rho.push(MapId(0));
        }
        t
    }

    #[test]
    fn order_and_nonorder() {
        let r = rep();
        let t = sample(&r);
        assert!(t.validate().passed(), "{}", t.validate());
        assert_eq!(t.apply(&[]).unwrap(), t.root);
        let two = t.strings(2);
        for s in &two {
            let full = t.apply(s).unwrap();
            assert!(full.starts_with(&t.apply(&s[..1]).unwrap()));
        }
        for s in &two {
            for u in &two {
                if s != u {
                    let l = s.iter().zip(u).position(|(a, b)| a != b).unwrap();
                    let (fs, fu) = (t.apply(s).unwrap(), t.apply(u).unwrap());
                    let h = t.height(l);
                    assert_eq!(fs[..h], fu[..h]);
                    assert_eq!((fs[h], fu[h]), (s[l], u[l]));
                }
            }
        }
    }

    #[test]
    fn restrict_compose_and_transfer() {
        let r = rep();
        let t = sample(&r);
        assert_eq!(t.restrict(&[]).unwrap(), t);
        for s in t.strings(1).iter().step_by(5) {
            let ts = t.restrict(s).unwrap();
            for u in ts.strings(1).iter().step_by(7) {
                let mut su = s.clone();
                su.extend(u);
                assert_eq!(ts.restrict(u).unwrap(), t.restrict(&su).unwrap());
            }
        }
        assert_eq!(t.transfer(&t.root[..1]).unwrap(), t);
        assert!(matches!(t.transfer(&[MapId(0); 3]), Err(ForcingError::BadTransferLength { .. })));
        assert!(t.apply(&[MapId(0); 3]).is_err());
    }

    #[test]
    fn congruence_respecting() {
        let r = rep();
        let mut t = sample(&r);
        assert_eq!(t.congruence_respecting(), None);
        // copying the head into the tail respects every congruence
        for (a, rho) in t.levels[0].rho.iter_mut().enumerate() {
            rho[1] = MapId(a);
        }
        assert_eq!(t.congruence_respecting(), None);
        t.levels[0].rho[0][1] = MapId(r.theta_len(0) - 1);
        assert!(t.congruence_respecting().unwrap().starts_with("level 0"));
    }
}
