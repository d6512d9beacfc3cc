//! Tree files: the representation prefix (with its lattice) followed by
//!
//! ```text
//! tree t over r
//! root: 0 1
//! pi0:
//! rho0,0: 0 0
//! rho0,1: 1 0
//! end
//! ```
//!
//! Values are map indices of the prefix.

use std::fmt::Write;

use super::{Level, Str, UniformTreeSpec};
use crate::table::text::{read_lattices, read_rep_block, write_rep};
use crate::table::MapId;
use crate::textfmt::{keyed, FormatError, Lines};

fn join(s: &[MapId]) -> String {
    s.iter().map(|a| a.0.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn write_tree(name: &str, rep_name: &str, lattice_name: &str, t: &UniformTreeSpec) -> String {
    let mut out = write_rep(rep_name, lattice_name, &t.rep);
    writeln!(out, "tree {name} over {rep_name}").unwrap();
    writeln!(out, "root: {}", join(&t.root)).unwrap();
    for (l, lv) in t.levels.iter().enumerate() {
        writeln!(out, "pi{l}: {}", join(&lv.pi)).unwrap();
        for (a, rho) in lv.rho.iter().enumerate() {
            writeln!(out, "rho{l},{a}: {}", join(rho)).unwrap();
        }
    }
    out.push_str("end\n");
    out
}

fn values(n: usize, s: &str) -> Result<Str, FormatError> {
    s.split_whitespace()
        .map(|v| v.parse().map(MapId).map_err(|_| FormatError::new(n, format!("bad map index `{v}`"))))
        .collect()
}

/// Returns the tree name and the tree; shape is left to `validate`.
pub fn parse_tree(text: &str) -> Result<(String, UniformTreeSpec), FormatError> {
    let mut lines = Lines::new(text);
    let lattices = read_lattices(&mut lines)?;
    let rep = read_rep_block(&mut lines, &lattices)?;
    let (n, h) = lines.expect("`tree <name> over <rep>`")?;
    let name = match h.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["tree", name, "over", r] if *r == rep.name => name.to_string(),
        ["tree", _, "over", r] => return Err(FormatError::new(n, format!("unknown representation `{r}`"))),
        _ => return Err(FormatError::new(n, format!("expected `tree <name> over <rep>`, found `{h}`"))),
    };
    let line = lines.expect("`root:`")?;
    let root = values(line.0, keyed(line, "root")?)?;
    let mut levels: Vec<Level> = Vec::new();
    loop {
        let (n, l) = lines.expect("`end`")?;
        if l == "end" {
            break;
        }
        let (key, rest) = l.split_once(':').ok_or_else(|| FormatError::new(n, format!("expected `key: values`, found `{l}`")))?;
        let vals = values(n, rest)?;
        let key = key.trim();
        if let Some(i) = key.strip_prefix("pi") {
            if i.parse() != Ok(levels.len()) {
                return Err(FormatError::new(n, format!("expected pi{}, found `{key}`", levels.len())));
            }
            levels.push(Level { pi: vals, rho: vec![] });
        } else if let Some((i, a)) = key.strip_prefix("rho").and_then(|k| k.split_once(',')) {
            let cur = levels.len().wrapping_sub(1);
            let Some(lv) = levels.last_mut() else {
                return Err(FormatError::new(n, "rho before any pi line"));
            };
            if i.parse() != Ok(cur) || a.parse() != Ok(lv.rho.len()) {
                return Err(FormatError::new(n, format!("expected rho{cur},{}, found `{key}`", lv.rho.len())));
            }
            lv.rho.push(vals);
        } else {
            return Err(FormatError::new(n, format!("unexpected key `{key}`")));
        }
    }
    if let Some((n, l)) = lines.peek() {
        return Err(FormatError::new(n, format!("trailing input `{l}`")));
    }
    if let Some(l) = levels.iter().position(|lv| lv.rho.is_empty()) {
        return Err(FormatError::new(lines.last_line(), format!("level {l} has no rho lines")));
    }
    Ok((name, UniformTreeSpec { rep: rep.rep, root, levels }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forcing::tests::{rep, sample};

    #[test]
    fn round_trip() {
        let r = rep();
        let t = sample(&r);
        let text = write_tree("t", "r", "diamond", &t);
        let (name, back) = parse_tree(&text).unwrap();
        assert_eq!((name.as_str(), back), ("t", t));
        let broken = text.replace("rho0,3:", "rho0,4:");
        assert!(parse_tree(&broken).unwrap_err().message.contains("rho0,3"));
        assert!(parse_tree(&text.replace("tree t over r", "tree t over q")).is_err());
    }
}
