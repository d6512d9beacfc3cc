//! Table and representation-prefix text formats.
//!
//! A file holds `usl` blocks followed by one `table` or `rep` block whose
//! header names its lattice:
//!
//! ```text
//! table t over chain2
//! alpha0: 0 0
//! alpha1: 0 1
//! end
//! ```
//!
//! `rep` blocks add `stage <i>[*]: <count>` lines, the stage being the first
//! `count` maps. Both accept `coding: alpha<i> <- (x,y,k)` with element names.

use std::fmt::Write;

use super::coding::{CodingApparatus, CodingEntry, RepPrefix, Stage};
use super::{MapId, UslTable};
use crate::order::text::{read_structure, write_structure, NamedStructure};
use crate::order::FiniteUslTop;
use crate::textfmt::{FormatError, Lines};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableDoc {
    pub name: String,
    pub lattice_name: String,
    pub table: UslTable,
    pub coding: Option<CodingApparatus>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepDoc {
    pub name: String,
    pub lattice_name: String,
    pub rep: RepPrefix,
}

fn write_maps(out: &mut String, t: &UslTable) {
    for (i, m) in t.maps().iter().enumerate() {
        let vals: Vec<String> = m.iter().map(u64::to_string).collect();
        writeln!(out, "alpha{i}: {}", vals.join(" ")).unwrap();
    }
}

fn write_coding(out: &mut String, l: &FiniteUslTop, c: &CodingApparatus) {
    for e in &c.entries {
        writeln!(out, "coding: {} <- ({},{},{})", e.map, l.name(e.x), l.name(e.y), e.k).unwrap();
    }
}

/// The lattice block followed by the table block.
pub fn write_table(name: &str, lattice_name: &str, t: &UslTable, coding: Option<&CodingApparatus>) -> String {
    let mut out = write_structure(lattice_name, t.lattice());
    writeln!(out, "table {name} over {lattice_name}").unwrap();
    write_maps(&mut out, t);
    if let Some(c) = coding {
        write_coding(&mut out, t.lattice(), c);
    }
    out.push_str("end\n");
    out
}

pub fn write_rep(name: &str, lattice_name: &str, r: &RepPrefix) -> String {
    let mut out = write_structure(lattice_name, r.lattice());
    writeln!(out, "rep {name} over {lattice_name}").unwrap();
    write_maps(&mut out, &r.table);
    for s in &r.stages {
        writeln!(out, "stage {s}: {}", s.len).unwrap();
    }
    if let Some(c) = &r.coding {
        write_coding(&mut out, r.lattice(), c);
    }
    out.push_str("end\n");
    out
}

fn header<'a>(lines: &mut Lines<'a>, keyword: &str) -> Result<(usize, &'a str, &'a str), FormatError> {
    let (n, l) = lines.expect(&format!("`{keyword} <name> over <lattice>`"))?;
    let words: Vec<&str> = l.split_whitespace().collect();
    match words.as_slice() {
        [k, name, "over", lat] if *k == keyword => Ok((n, name, lat)),
        _ => Err(FormatError::new(n, format!("expected `{keyword} <name> over <lattice>`, found `{l}`"))),
    }
}

pub(crate) fn read_lattices(lines: &mut Lines<'_>) -> Result<Vec<NamedStructure>, FormatError> {
    let mut out = Vec::new();
    while lines.peek().is_some_and(|(_, l)| l.starts_with("usl ")) {
        out.push(read_structure(lines)?);
    }
    Ok(out)
}

fn find_lattice(n: usize, lattices: &[NamedStructure], name: &str) -> Result<FiniteUslTop, FormatError> {
    lattices
        .iter()
        .rev()
        .find(|s| s.name == name)
        .map(|s| s.structure.clone())
        .ok_or_else(|| FormatError::new(n, format!("unknown lattice `{name}`")))
}

enum Body {
    Map(Vec<u64>),
    Stage(Stage),
    Coding(usize, CodingEntry),
}

fn body_line(n: usize, l: &str, lat: &FiniteUslTop, expect_index: usize) -> Result<Body, FormatError> {
    let err = |m: String| FormatError::new(n, m);
    if let Some(rest) = l.strip_prefix("coding:") {
        let (lhs, rhs) = rest
            .split_once("<-")
            .ok_or_else(|| err(format!("expected `coding: alpha<i> <- (x,y,k)`, found `{l}`")))?;
        let map = parse_alpha(lhs.trim()).ok_or_else(|| err(format!("bad map name `{}`", lhs.trim())))?;
        let inner = rhs
            .trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| err(format!("expected `(x,y,k)`, found `{}`", rhs.trim())))?;
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        let [x, y, k] = parts.as_slice() else {
            return Err(err(format!("expected three components in `({inner})`")));
        };
        let el = |s: &str| lat.id_of(s).ok_or_else(|| err(format!("unknown element `{s}`")));
        let k = match *k {
            "0" => 0,
            "1" => 1,
            _ => return Err(err(format!("k must be 0 or 1, found `{k}`"))),
        };
        return Ok(Body::Coding(n, CodingEntry { x: el(x)?, y: el(y)?, k, map: MapId(map) }));
    }
    if let Some(rest) = l.strip_prefix("stage ") {
        let (label, count) = rest.split_once(':').ok_or_else(|| err(format!("expected `stage <i>: <n>`, found `{l}`")))?;
        let label = label.trim();
        let (digits, starred) = match label.strip_suffix('*') {
            Some(d) => (d, true),
            None => (label, false),
        };
        let index = digits.parse().map_err(|_| err(format!("bad stage index `{label}`")))?;
        let len = count.trim().parse().map_err(|_| err(format!("bad stage size `{}`", count.trim())))?;
        return Ok(Body::Stage(Stage { index, starred, len }));
    }
    let (name, vals) = l.split_once(':').ok_or_else(|| err(format!("expected `alpha<i>: values`, found `{l}`")))?;
    let i = parse_alpha(name.trim()).ok_or_else(|| err(format!("bad map name `{}`", name.trim())))?;
    if i != expect_index {
        return Err(err(format!("expected alpha{expect_index}, found `{}`", name.trim())));
    }
    let vals: Vec<u64> = vals
        .split_whitespace()
        .map(|v| v.parse().map_err(|_| err(format!("bad value `{v}`"))))
        .collect::<Result<_, _>>()?;
    if vals.len() != lat.size() {
        return Err(err(format!("alpha{i} has {} values, the lattice has {} elements", vals.len(), lat.size())));
    }
    Ok(Body::Map(vals))
}

fn parse_alpha(s: &str) -> Option<usize> {
    s.strip_prefix("alpha")?.parse().ok()
}

fn read_body(
    lines: &mut Lines<'_>,
    lat: &FiniteUslTop,
) -> Result<(Vec<Vec<u64>>, Vec<Stage>, Vec<(usize, CodingEntry)>), FormatError> {
    let (mut maps, mut stages, mut coding) = (Vec::new(), Vec::new(), Vec::new());
    loop {
        let (n, l) = lines.expect("`end`")?;
        if l == "end" {
            break;
        }
        match body_line(n, l, lat, maps.len())? {
            Body::Map(v) => maps.push(v),
            Body::Stage(s) => stages.push(s),
            Body::Coding(n, e) => coding.push((n, e)),
        }
    }
    for (n, e) in &coding {
        if e.map.0 >= maps.len() {
            return Err(FormatError::new(*n, format!("coding names missing map {}", e.map)));
        }
    }
    Ok((maps, stages, coding))
}

fn finish(lines: &Lines<'_>) -> Result<(), FormatError> {
    match lines.peek() {
        Some((n, l)) => Err(FormatError::new(n, format!("trailing input `{l}`"))),
        None => Ok(()),
    }
}

pub fn parse_table(text: &str) -> Result<TableDoc, FormatError> {
    let mut lines = Lines::new(text);
    let lattices = read_lattices(&mut lines)?;
    let (n, name, lat_name) = header(&mut lines, "table")?;
    let lat = find_lattice(n, &lattices, lat_name)?;
    let (maps, stages, coding) = read_body(&mut lines, &lat)?;
    if !stages.is_empty() {
        return Err(FormatError::new(n, "`stage` lines belong in a `rep` block"));
    }
    finish(&lines)?;
    Ok(TableDoc {
        name: name.to_string(),
        lattice_name: lat_name.to_string(),
        table: UslTable::new(lat, maps),
        coding: (!coding.is_empty()).then(|| CodingApparatus { entries: coding.into_iter().map(|c| c.1).collect() }),
    })
}

pub fn parse_rep(text: &str) -> Result<RepDoc, FormatError> {
    let mut lines = Lines::new(text);
    let lattices = read_lattices(&mut lines)?;
    let doc = read_rep_block(&mut lines, &lattices)?;
    finish(&lines)?;
    Ok(doc)
}

/// One `rep` block, its lattice looked up among `lattices`.
pub(crate) fn read_rep_block(lines: &mut Lines<'_>, lattices: &[NamedStructure]) -> Result<RepDoc, FormatError> {
    let (n, name, lat_name) = header(lines, "rep")?;
    let lat = find_lattice(n, &lattices, lat_name)?;
    let (maps, stages, coding) = read_body(lines, &lat)?;
    if stages.is_empty() {
        return Err(FormatError::new(n, "a rep block needs `stage` lines"));
    }
    if let Some(s) = stages.iter().find(|s| s.len > maps.len()) {
        return Err(FormatError::new(n, format!("stage {s} is longer than the map list")));
    }
    Ok(RepDoc {
        name: name.to_string(),
        lattice_name: lat_name.to_string(),
        rep: RepPrefix {
            table: UslTable::new(lat, maps),
            stages,
            coding: (!coding.is_empty()).then(|| CodingApparatus { entries: coding.into_iter().map(|c| c.1).collect() }),
        },
    })
}
