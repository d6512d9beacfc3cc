//! Text bundle for decomposition witnesses.
//!
//! ```text
//! decomposition
//! usl U ... end
//! usl V ... end
//! inclusion: <V element per U element>
//! generators: a1 ...
//! usl U1 ... end
//! h: <V element per U1 element>
//! fresh: b
//! usl U2p ... end
//! usl U2 ... end
//! projection: <U2 element per U2p element>
//! f: <U2 element per V element>
//! end decomposition
//! ```
//!
//! `U1` and `U2p` are rebuilt from `U` and the generator names on reading
//! and must match the stored blocks.

use super::decompose::DecompositionWitness;
use super::free::free_extend;
use crate::order::text::{read_structure, write_structure};
use crate::order::{ElementId, FiniteUslTop, SubstructureWitness};
use crate::textfmt::{keyed, FormatError, Lines};

fn names(u: &FiniteUslTop, ids: &[ElementId]) -> String {
    ids.iter().map(|&x| u.name(x)).collect::<Vec<_>>().join(" ")
}

pub fn write_bundle(d: &DecompositionWitness) -> String {
    let mut out = String::from("decomposition\n");
    out += &write_structure("U", d.u());
    out += &write_structure("V", d.v());
    out += &format!("inclusion: {}\n", names(d.v(), d.inclusion.inclusion()));
    out += &format!("generators: {}\n", d.u1.generators.join(" "));
    out += &write_structure("U1", &d.u1.result);
    out += &format!("h: {}\n", names(d.v(), &d.h));
    out += &format!("fresh: {}\n", d.u2_prime.generators.join(" "));
    out += &write_structure("U2p", &d.u2_prime.result);
    out += &write_structure("U2", &d.u2);
    out += &format!("projection: {}\n", names(&d.u2, &d.projection));
    out += &format!("f: {}\n", names(&d.u2, &d.f));
    out += "end decomposition\n";
    out
}

fn map_line(lines: &mut Lines<'_>, key: &str, target: &FiniteUslTop, len: usize) -> Result<Vec<ElementId>, FormatError> {
    let line = lines.expect(&format!("`{key}:`"))?;
    let ids = keyed(line, key)?
        .split_whitespace()
        .map(|s| target.id_of(s).ok_or_else(|| FormatError::new(line.0, format!("unknown element `{s}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    if ids.len() != len {
        return Err(FormatError::new(line.0, format!("`{key}` needs {len} entries, found {}", ids.len())));
    }
    Ok(ids)
}

/// Parses a bundle. The result still has to pass `verify`.
pub fn read_bundle(text: &str) -> Result<DecompositionWitness, FormatError> {
    let mut lines = Lines::new(text);
    let (n0, head) = lines.expect("`decomposition`")?;
    if head != "decomposition" {
        return Err(FormatError::new(n0, format!("expected `decomposition`, found `{head}`")));
    }
    let u = read_structure(&mut lines)?.structure;
    let v = read_structure(&mut lines)?.structure;
    let inc_line = lines.peek().map_or(n0, |l| l.0);
    let inc = map_line(&mut lines, "inclusion", &v, u.size())?;
    let inclusion = SubstructureWitness::new(u.clone(), v.clone(), inc)
        .map_err(|e| FormatError::new(inc_line, format!("inclusion: {e}")))?;
    let gen_line = lines.expect("`generators:`")?;
    let generators: Vec<String> = keyed(gen_line, "generators")?.split_whitespace().map(String::from).collect();
    let u1 = free_extend(&u, &generators).map_err(|e| FormatError::new(gen_line.0, e.to_string()))?;
    let (n1, stored) = (lines.peek().map_or(n0, |l| l.0), read_structure(&mut lines)?.structure);
    if stored != u1.result {
        return Err(FormatError::new(n1, "U1 does not match the free extension of U"));
    }
    let h = map_line(&mut lines, "h", &v, u1.result.size())?;
    let fresh_line = lines.expect("`fresh:`")?;
    let b: Vec<String> = keyed(fresh_line, "fresh")?.split_whitespace().map(String::from).collect();
    let u2_prime = free_extend(&u1.result, &b).map_err(|e| FormatError::new(fresh_line.0, e.to_string()))?;
    let (n2, stored) = (lines.peek().map_or(n0, |l| l.0), read_structure(&mut lines)?.structure);
    if stored != u2_prime.result || b.len() != 1 {
        return Err(FormatError::new(n2, "U2p does not match the one-generator free extension of U1"));
    }
    let u2 = read_structure(&mut lines)?.structure;
    let projection = map_line(&mut lines, "projection", &u2, u2_prime.result.size())?;
    let f = map_line(&mut lines, "f", &u2, v.size())?;
    let (n, end) = lines.expect("`end decomposition`")?;
    if end != "end decomposition" {
        return Err(FormatError::new(n, format!("expected `end decomposition`, found `{end}`")));
    }
    if let Some((n, l)) = lines.peek() {
        return Err(FormatError::new(n, format!("trailing input `{l}`")));
    }
    Ok(DecompositionWitness { inclusion, u1, h, u2_prime, projection, u2, f })
}
