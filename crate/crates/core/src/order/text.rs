//! The `usl <name> ... end` structure format.
//!
//! ```text
//! usl diamond
//! elements: 0 a b 1
//! bot: 0
//! top: 1
//! 0 < a
//! 0 < b
//! a < 1
//! b < 1
//! end
//! ```
//!
//! `bot:`/`top:` default to the first/last listed element. Relation lines
//! are covers; the reflexive-transitive closure is taken.

use std::fmt::Write;

use super::{ElementId, FiniteUslTop};
use crate::textfmt::{keyed, FormatError, Lines};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedStructure {
    pub name: String,
    pub structure: FiniteUslTop,
}

pub fn parse_structure(text: &str) -> Result<NamedStructure, FormatError> {
    let mut lines = Lines::new(text);
    let s = read_structure(&mut lines)?;
    if let Some((n, l)) = lines.peek() {
        return Err(FormatError::new(n, format!("trailing input `{l}`")));
    }
    Ok(s)
}

/// Reads one `usl ... end` block from the cursor.
pub fn read_structure(lines: &mut Lines<'_>) -> Result<NamedStructure, FormatError> {
    let (start, header) = lines.expect("`usl <name>`")?;
    let name = header
        .strip_prefix("usl")
        .map(str::trim)
        .filter(|n| !n.is_empty() && !n.contains(char::is_whitespace))
        .ok_or_else(|| FormatError::new(start, format!("expected `usl <name>`, found `{header}`")))?
        .to_string();
    let el_line = lines.expect("`elements:`")?;
    let names: Vec<String> = keyed(el_line, "elements")?
        .split_whitespace()
        .map(String::from)
        .collect();
    if names.is_empty() {
        return Err(FormatError::new(el_line.0, "a structure needs at least one element"));
    }
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(FormatError::new(el_line.0, format!("duplicate element `{n}`")));
        }
    }
    let lookup = |line: usize, id: &str| {
        names
            .iter()
            .position(|n| n == id)
            .ok_or_else(|| FormatError::new(line, format!("unknown element `{id}`")))
    };
    let mut bot = 0;
    let mut top = names.len() - 1;
    let size = names.len();
    let mut leq = vec![false; size * size];
    for i in 0..size {
        leq[i * size + i] = true;
    }
    loop {
        let (n, l) = lines.expect("`end`")?;
        if l == "end" {
            break;
        }
        if let Ok(rest) = keyed((n, l), "bot") {
            bot = lookup(n, rest)?;
        } else if let Ok(rest) = keyed((n, l), "top") {
            top = lookup(n, rest)?;
        } else if let Some((a, b)) = l.split_once('<') {
            let (a, b) = (lookup(n, a.trim())?, lookup(n, b.trim())?);
            leq[a * size + b] = true;
        } else {
            return Err(FormatError::new(n, format!("expected `<id> < <id>` or `end`, found `{l}`")));
        }
    }
    // Warshall closure
    for k in 0..size {
        for i in 0..size {
            if leq[i * size + k] {
                for j in 0..size {
                    if leq[k * size + j] {
                        leq[i * size + j] = true;
                    }
                }
            }
        }
    }
    let structure = FiniteUslTop::validate(names, leq, ElementId(bot), ElementId(top))
        .map_err(|e| FormatError::new(start, format!("structure `{name}` is invalid: {e}")))?;
    Ok(NamedStructure { name, structure })
}

pub fn write_structure(name: &str, u: &FiniteUslTop) -> String {
    let mut out = String::new();
    writeln!(out, "usl {name}").unwrap();
    writeln!(out, "elements: {}", u.names().join(" ")).unwrap();
    writeln!(out, "bot: {}", u.name(u.bot())).unwrap();
    writeln!(out, "top: {}", u.name(u.top())).unwrap();
    for (x, y) in u.covers() {
        writeln!(out, "{} < {}", u.name(x), u.name(y)).unwrap();
    }
    out.push_str("end\n");
    out
}

/// Two `usl` blocks followed by `inclusion: <big element per small element>`.
pub fn parse_pair(text: &str) -> Result<super::SubstructureWitness, FormatError> {
    let mut lines = Lines::new(text);
    let small = read_structure(&mut lines)?.structure;
    let big = read_structure(&mut lines)?.structure;
    let line = lines.expect("`inclusion:`")?;
    let inc = keyed(line, "inclusion")?
        .split_whitespace()
        .map(|s| big.id_of(s).ok_or_else(|| FormatError::new(line.0, format!("unknown element `{s}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some((n, l)) = lines.peek() {
        return Err(FormatError::new(n, format!("trailing input `{l}`")));
    }
    super::SubstructureWitness::new(small, big, inc).map_err(|e| FormatError::new(line.0, format!("inclusion: {e}")))
}

pub fn write_pair(w: &super::SubstructureWitness) -> String {
    let mut out = write_structure("U", w.small());
    out += &write_structure("V", w.big());
    let names: Vec<&str> = w.inclusion().iter().map(|&v| w.big().name(v)).collect();
    writeln!(out, "inclusion: {}", names.join(" ")).unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diamond_round_trip() {
        let d = FiniteUslTop::diamond();
        let text = write_structure("diamond", &d);
        let back = parse_structure(&text).unwrap();
        assert_eq!(back.name, "diamond");
        assert_eq!(back.structure, d);
    }

    #[test]
    fn defaults_bot_and_top() {
        let s = parse_structure("usl c3\nelements: 0 a 1\n0 < a\na < 1\nend\n").unwrap();
        assert_eq!(s.structure, FiniteUslTop::chain(3).with_names(vec!["0".into(), "a".into(), "1".into()]));
    }

    #[test]
    fn pair_round_trip() {
        let w = crate::order::SubstructureWitness::new(
            FiniteUslTop::chain(2),
            FiniteUslTop::chain(3),
            vec![ElementId(0), ElementId(2)],
        )
        .unwrap();
        assert_eq!(parse_pair(&write_pair(&w)).unwrap(), w);
        let bad = write_pair(&w).replace("inclusion: 0 1", "inclusion: 1 0");
        assert!(parse_pair(&bad).unwrap_err().message.starts_with("inclusion:"));
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_structure("usl x\nelements: 0 1\n0 < q\nend\n").unwrap_err();
        assert_eq!(err.line, 3);
        // a and b have two minimal upper bounds
        let bad = "usl bad\nelements: 0 a b c d 1\n0 < a\n0 < b\na < c\nb < c\na < d\nb < d\nc < 1\nd < 1\nend\n";
        let err = parse_structure(bad).unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.message.contains("no join"));
        let err = parse_structure("usl x\nelements: 0 1\n0 < 1\n").unwrap_err();
        assert!(err.message.contains("end"));
    }
}
