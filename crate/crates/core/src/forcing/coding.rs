//! Coding accounting on trees, safe replacements, and bit coding along a
//! branch.

use super::{ForcingError, Str, UniformTreeSpec};
use crate::extension::Checks;
use crate::order::ElementId;
use crate::table::{MapId, RepPrefix};

fn coding_set(rep: &RepPrefix) -> Vec<MapId> {
    rep.coding.as_ref().map(|c| c.coding_set()).unwrap_or_default()
}

/// `(level, α, position in π_l⌢ρ_{l,α})` of every coding map that is not
/// the fork value itself.
pub fn branch_coding_violations(t: &UniformTreeSpec) -> Vec<(usize, MapId, usize)> {
    let c = coding_set(&t.rep);
    let mut out = Vec::new();
    for (l, lv) in t.levels.iter().enumerate() {
        for (a, rho) in lv.rho.iter().enumerate() {
            for (j, v) in lv.pi.iter().chain(rho).enumerate() {
                if j != lv.pi.len() && c.contains(v) {
                    out.push((l, MapId(a), j));
                }
            }
        }
    }
    out
}

pub fn check_branch_coding_free(t: &UniformTreeSpec) -> Checks {
    let mut c = Checks::default();
    let v = branch_coding_violations(t);
    c.push(
        "branch-coding-free",
        v.first().map(|(l, a, j)| format!("{} more; first at level {l}, {a}, offset {j}", v.len() - 1)),
    );
    c
}

fn pair_maps(rep: &RepPrefix, x: ElementId, y: ElementId) -> Result<(MapId, MapId), ForcingError> {
    let g = rep.coding.as_ref().ok_or(ForcingError::PairDoesNotJoinToTop { x, y })?;
    match (g.g(x, y, 0), g.g(x, y, 1)) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(ForcingError::PairDoesNotJoinToTop { x, y }),
    }
}

/// Occurrences of `g(x,y,0)` and `g(x,y,1)` in the root.
pub fn root_coding_count(t: &UniformTreeSpec, x: ElementId, y: ElementId) -> Result<usize, ForcingError> {
    let (g0, g1) = pair_maps(&t.rep, x, y)?;
    Ok(t.root.iter().filter(|&&v| v == g0 || v == g1).count())
}

/// `s` root-codes for no pair more often than `t`.
pub fn no_more_root_coding(s: &UniformTreeSpec, t: &UniformTreeSpec) -> bool {
    let l = t.rep.lattice();
    crate::table::coding_pairs(l).into_iter().all(|(x, y)| match (root_coding_count(s, x, y), root_coding_count(t, x, y)) {
        (Ok(a), Ok(b)) => a <= b,
        _ => true,
    })
}

/// Every coding map replaced by its fixed `x`-congruent escape.
pub fn x_safe(rep: &RepPrefix, sigma: &[MapId], x: ElementId) -> Result<Str, ForcingError> {
    if x == rep.lattice().top() {
        return Err(ForcingError::TopHasNoEscape);
    }
    let c = coding_set(rep);
    Ok(sigma
        .iter()
        .map(|&a| if c.contains(&a) { rep.escape(a, x).expect("the prefix supplies escapes") } else { a })
        .collect())
}

/// Follows `g(x,y,bit)` at the first `bits.len()` forks of `t` and returns
/// the image. The tree must not code for the pair anywhere else.
pub fn encode_bits(t: &UniformTreeSpec, x: ElementId, y: ElementId, bits: &[bool]) -> Result<Str, ForcingError> {
    let (g0, g1) = pair_maps(&t.rep, x, y)?;
    if bits.len() > t.depth() {
        return Err(ForcingError::PrefixTooShort { need: bits.len(), have: t.depth() });
    }
    let sigma: Str = bits.iter().map(|&b| if b { g1 } else { g0 }).collect();
    let out = t.apply(&sigma)?;
    if decode(&t.rep, &out, x, y)? != bits {
        return Err(ForcingError::UnforcedCoding);
    }
    Ok(out)
}

/// Bits read off `σ` for the pair: positions congruent to `g(x,y,0)` modulo
/// `x` and to `g(x,y,0)` or `g(x,y,1)` modulo `y`, in order.
pub fn decode(rep: &RepPrefix, sigma: &[MapId], x: ElementId, y: ElementId) -> Result<Vec<bool>, ForcingError> {
    let (g0, g1) = pair_maps(rep, x, y)?;
    let t = &rep.table;
    let xs: Vec<u64> = sigma.iter().map(|&a| t.value(a, x)).collect();
    let ys: Vec<u64> = sigma.iter().map(|&a| t.value(a, y)).collect();
    Ok(decode_values(&xs, &ys, [t.value(g0, x), t.value(g0, y), t.value(g1, y)]))
}

/// The same bits from the values at `x` and at `y` alone.
pub fn decode_projections(
    rep: &RepPrefix,
    xs: &[u64],
    ys: &[u64],
    x: ElementId,
    y: ElementId,
) -> Result<Vec<bool>, ForcingError> {
    let (g0, g1) = pair_maps(rep, x, y)?;
    let t = &rep.table;
    Ok(decode_values(xs, ys, [t.value(g0, x), t.value(g0, y), t.value(g1, y)]))
}

fn decode_values(xs: &[u64], ys: &[u64], [gx, gy0, gy1]: [u64; 3]) -> Vec<bool> {
    xs.iter()
        .zip(ys)
        .filter(|&(&vx, &vy)| vx == gx && (vy == gy0 || vy == gy1))
        .map(|(_, &vy)| vy == gy1)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::Caps;
    use crate::order::FiniteUslTop;
    use crate::table::{build_rep_prefix, coding_pairs};

    fn rep(depth: usize) -> RepPrefix {
        build_rep_prefix(&FiniteUslTop::diamond(), depth, true, &Caps::default()).unwrap()
    }

    #[test]
    fn bits_round_trip() {
        let r = rep(1);
        let t = UniformTreeSpec::identity(&r, 32);
        assert!(check_branch_coding_free(&t).passed());
        for (x, y) in coding_pairs(r.lattice()) {
            for n in [0usize, 1, 5, 32] {
                let bits: Vec<bool> = (0..n).map(|i| (i * 7 + x.0) % 3 == 0).collect();
                let s = encode_bits(&t, x, y, &bits).unwrap();
                assert_eq!(decode(&r, &s, x, y).unwrap(), bits);
                let xs: Vec<u64> = s.iter().map(|&a| r.table.value(a, x)).collect();
                let ys: Vec<u64> = s.iter().map(|&a| r.table.value(a, y)).collect();
                assert_eq!(decode_projections(&r, &xs, &ys, x, y).unwrap(), bits);
            }
        }
        let (x, y) = coding_pairs(r.lattice())[0];
        assert!(matches!(encode_bits(&t, x, y, &[true; 33]), Err(ForcingError::PrefixTooShort { .. })));
    }

    #[test]
    fn root_coding_and_safety() {
        let r = rep(1);
        let l = r.lattice();
        let (x, y) = coding_pairs(l)[0];
        let g = r.coding.as_ref().unwrap();
        let mut t = UniformTreeSpec::identity(&r, 1);
        t.root = vec![g.g(x, y, 0).unwrap(), MapId(0), g.g(x, y, 1).unwrap()];
        assert_eq!(root_coding_count(&t, x, y).unwrap(), 2);
        assert!(matches!(root_coding_count(&t, x, x), Err(ForcingError::PairDoesNotJoinToTop { .. })));
        let plain = UniformTreeSpec::identity(&r, 1);
        assert!(no_more_root_coding(&plain, &t));
        assert!(!no_more_root_coding(&t, &plain));
        // a coding value inside a tail breaks branch-coding-freeness
        let mut bad = plain.clone();
        bad.levels[0].rho[0].push(g.g(x, y, 0).unwrap());
        for rho in &mut bad.levels[0].rho[1..] {
            rho.push(MapId(0));
        }
        assert_eq!(branch_coding_violations(&bad).len(), 1);
        let c = g.coding_set();
        for z in l.elements().filter(|&z| z != l.top()) {
            let safe = x_safe(&r, &t.root, z).unwrap();
            for (a, b) in t.root.iter().zip(&safe) {
                assert!(r.table.congruent(z, *a, *b));
                assert!(!c.contains(b));
            }
        }
        assert_eq!(x_safe(&r, &t.root, l.top()), Err(ForcingError::TopHasNoEscape));
    }
}
