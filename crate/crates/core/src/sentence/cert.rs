//! Certificate documents.
//!
//! ```text
//! certificate sigma2
//! verdict: false
//! exists: x
//! forall: y
//! matrix: !(x = 1) & y <= x
//! instance
//! usl U
//! ...
//! end
//! assign: x=0
//! extension
//! usl V
//! ...
//! end
//! inclusion: 0 1
//! assign: y=1
//! value: false
//! end certificate
//! ```
//!
//! A `witness` block has the same shape as an `instance` block. Assignments
//! and inclusions use element names; structures use the `usl` format.

use serde::{Deserialize, Serialize};

use super::ast::Formula;
use super::decide::{Certificate, ExtensionInstance, Instance, PrefixClass};
use super::parse::parse_formula;
use crate::order::text::{read_structure, write_structure};
use crate::order::{ElementId, FiniteUslTop};
use crate::textfmt::{keyed, FormatError, Lines};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub class: String,
    pub verdict: Option<bool>,
    pub exists: Vec<String>,
    pub forall: Vec<String>,
    pub matrix: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<InstanceDoc>,
    #[serde(default)]
    pub instances: Vec<InstanceDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDoc {
    /// `usl` block text.
    pub base: String,
    /// Element names, one per outer variable.
    pub assignment: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionDoc {
    pub structure: String,
    pub inclusion: Vec<String>,
    pub assignment: Vec<String>,
    pub value: bool,
}

fn names(u: &FiniteUslTop, ids: &[ElementId]) -> Vec<String> {
    ids.iter().map(|&x| u.name(x).to_string()).collect()
}

impl Certificate {
    fn blocks(&self) -> (&[String], &[String]) {
        match self.class {
            PrefixClass::Sigma2 => (&self.outer_vars, &self.inner_vars),
            PrefixClass::Pi2 => (&self.inner_vars, &self.outer_vars),
        }
    }

    pub fn to_doc(&self) -> CertificateDoc {
        let inst = |i: &Instance| InstanceDoc {
            base: write_structure("U", &i.base),
            assignment: names(&i.base, &i.assignment),
            extension: i.extension.as_ref().map(|e| ExtensionDoc {
                structure: write_structure("V", &e.structure),
                inclusion: names(&e.structure, &e.inclusion),
                assignment: names(&e.structure, &e.assignment),
                value: e.value,
            }),
        };
        let (ex, fa) = self.blocks();
        CertificateDoc {
            class: class_name(self.class).into(),
            verdict: self.verdict,
            exists: ex.to_vec(),
            forall: fa.to_vec(),
            matrix: self.matrix.to_string(),
            cap: self.cap.clone(),
            witness: self.witness.as_ref().map(inst),
            instances: self.instances.iter().map(inst).collect(),
        }
    }

    pub fn from_doc(doc: &CertificateDoc) -> Result<Self, String> {
        let class = match doc.class.as_str() {
            "sigma2" => PrefixClass::Sigma2,
            "pi2" => PrefixClass::Pi2,
            other => return Err(format!("unknown certificate class `{other}`")),
        };
        let matrix: Formula = parse_formula(&doc.matrix).map_err(|e| e.to_string())?;
        let (outer, inner) = match class {
            PrefixClass::Sigma2 => (doc.exists.clone(), doc.forall.clone()),
            PrefixClass::Pi2 => (doc.forall.clone(), doc.exists.clone()),
        };
        let inst = |d: &InstanceDoc| -> Result<Instance, String> {
            let base = structure_of(&d.base)?;
            let assignment = ids(&base, &d.assignment)?;
            let extension = match &d.extension {
                None => None,
                Some(e) => {
                    let v = structure_of(&e.structure)?;
                    Some(ExtensionInstance {
                        inclusion: ids(&v, &e.inclusion)?,
                        assignment: ids(&v, &e.assignment)?,
                        structure: v,
                        value: e.value,
                    })
                }
            };
            Ok(Instance {
                base,
                assignment,
                extension,
            })
        };
        Ok(Certificate {
            class,
            outer_vars: outer,
            inner_vars: inner,
            matrix,
            verdict: doc.verdict,
            witness: doc.witness.as_ref().map(inst).transpose()?,
            instances: doc.instances.iter().map(inst).collect::<Result<_, _>>()?,
            cap: doc.cap.clone(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("certificates serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let doc: CertificateDoc = serde_json::from_str(text).map_err(|e| e.to_string())?;
        Self::from_doc(&doc)
    }

    pub fn to_text(&self) -> String {
        let doc = self.to_doc();
        let mut out = format!("certificate {}\n", doc.class);
        let verdict = match doc.verdict {
            Some(true) => "true",
            Some(false) => "false",
            None => "unknown",
        };
        out += &format!("verdict: {verdict}\n");
        let (first, second) = match self.class {
            PrefixClass::Sigma2 => (("exists", &doc.exists), ("forall", &doc.forall)),
            PrefixClass::Pi2 => (("forall", &doc.forall), ("exists", &doc.exists)),
        };
        for (k, vs) in [first, second] {
            out += &format!("{k}: {}\n", vs.join(" "));
        }
        out += &format!("matrix: {}\n", doc.matrix);
        if let Some(cap) = &doc.cap {
            out += &format!("cap: {cap}\n");
        }
        let block = |out: &mut String, head: &str, vars: &[String], d: &InstanceDoc| {
            *out += &format!("{head}\n{}", d.base);
            *out += &format!("assign: {}\n", pairs(vars, &d.assignment));
            if let Some(e) = &d.extension {
                *out += &format!("extension\n{}", e.structure);
                *out += &format!("inclusion: {}\n", e.inclusion.join(" "));
                *out += &format!("assign: {}\n", pairs(&self.inner_vars, &e.assignment));
                *out += &format!("value: {}\n", e.value);
            }
        };
        if let Some(w) = &doc.witness {
            block(&mut out, "witness", &self.outer_vars, w);
        }
        for i in &doc.instances {
            block(&mut out, "instance", &self.outer_vars, i);
        }
        out += "end certificate\n";
        out
    }

    pub fn from_text(text: &str) -> Result<Self, FormatError> {
        let mut lines = Lines::new(text);
        let (n, head) = lines.expect("`certificate <class>`")?;
        let class = head
            .strip_prefix("certificate")
            .map(str::trim)
            .filter(|c| *c == "sigma2" || *c == "pi2")
            .ok_or_else(|| FormatError::new(n, format!("expected `certificate sigma2|pi2`, found `{head}`")))?
            .to_string();
        let vl = lines.expect("`verdict:`")?;
        let verdict = match keyed(vl, "verdict")? {
            "true" => Some(true),
            "false" => Some(false),
            "unknown" => None,
            other => return Err(FormatError::new(vl.0, format!("bad verdict `{other}`"))),
        };
        let (k1, k2) = if class == "sigma2" {
            ("exists", "forall")
        } else {
            ("forall", "exists")
        };
        let words = |s: &str| s.split_whitespace().map(String::from).collect::<Vec<_>>();
        let v1 = words(keyed(lines.expect(k1)?, k1)?);
        let v2 = words(keyed(lines.expect(k2)?, k2)?);
        let (outer, inner) = (v1.clone(), v2.clone());
        let (exists, forall) = if class == "sigma2" { (v1, v2) } else { (v2, v1) };
        let matrix = keyed(lines.expect("`matrix:`")?, "matrix")?.to_string();
        let mut doc = CertificateDoc {
            class,
            verdict,
            exists,
            forall,
            matrix,
            cap: None,
            witness: None,
            instances: Vec::new(),
        };
        loop {
            let line = lines.expect("`end certificate`")?;
            match line.1 {
                "end certificate" => break,
                "witness" => doc.witness = Some(read_instance(&mut lines, &outer, &inner)?),
                "instance" => doc.instances.push(read_instance(&mut lines, &outer, &inner)?),
                _ => doc.cap = Some(keyed(line, "cap")?.to_string()),
            }
        }
        if let Some((n, l)) = lines.peek() {
            return Err(FormatError::new(n, format!("trailing input `{l}`")));
        }
        Certificate::from_doc(&doc).map_err(|e| FormatError::new(1, e))
    }
}

fn class_name(c: PrefixClass) -> &'static str {
    match c {
        PrefixClass::Sigma2 => "sigma2",
        PrefixClass::Pi2 => "pi2",
    }
}

fn pairs(vars: &[String], vals: &[String]) -> String {
    vars.iter()
        .zip(vals)
        .map(|(v, x)| format!("{v}={x}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn read_assign(lines: &mut Lines<'_>, vars: &[String]) -> Result<Vec<String>, FormatError> {
    let line = lines.expect("`assign:`")?;
    let rest = keyed(line, "assign")?;
    let mut out = Vec::new();
    for (item, var) in rest.split_whitespace().zip(vars) {
        match item.split_once('=') {
            Some((v, x)) if v == var => out.push(x.to_string()),
            _ => return Err(FormatError::new(line.0, format!("expected `{var}=<element>`, found `{item}`"))),
        }
    }
    if out.len() != vars.len() || rest.split_whitespace().count() != vars.len() {
        return Err(FormatError::new(line.0, format!("expected {} assignments", vars.len())));
    }
    Ok(out)
}

fn read_instance(
    lines: &mut Lines<'_>,
    outer: &[String],
    inner: &[String],
) -> Result<InstanceDoc, FormatError> {
    let base = read_structure(lines)?;
    let assignment = read_assign(lines, outer)?;
    let extension = if lines.peek().map(|l| l.1) == Some("extension") {
        lines.next_line();
        let v = read_structure(lines)?;
        let il = lines.expect("`inclusion:`")?;
        let inclusion = keyed(il, "inclusion")?.split_whitespace().map(String::from).collect();
        let assignment = read_assign(lines, inner)?;
        let vl = lines.expect("`value:`")?;
        let value = match keyed(vl, "value")? {
            "true" => true,
            "false" => false,
            other => return Err(FormatError::new(vl.0, format!("bad value `{other}`"))),
        };
        Some(ExtensionDoc {
            structure: write_structure(&v.name, &v.structure),
            inclusion,
            assignment,
            value,
        })
    } else {
        None
    };
    Ok(InstanceDoc {
        base: write_structure(&base.name, &base.structure),
        assignment,
        extension,
    })
}

fn structure_of(text: &str) -> Result<FiniteUslTop, String> {
    crate::order::text::parse_structure(text)
        .map(|s| s.structure)
        .map_err(|e| e.to_string())
}

fn ids(u: &FiniteUslTop, names: &[String]) -> Result<Vec<ElementId>, String> {
    names
        .iter()
        .map(|n| u.id_of(n).ok_or_else(|| format!("unknown element `{n}`")))
        .collect()
}

#[cfg(test)]
mod tests {
    use crate::caps::Caps;
    use crate::sentence::{decide, parse, Certificate};

    #[test]
    fn round_trips() {
        for s in [
            "exists x . !(x = 1) & forall y . y <= x",
            "exists x . !(x = 0) & forall y . (y <= x -> (y = 0 \\/ y = x))",
            "forall x . exists y . !(y <= x) & !(x <= y)",
            "forall x . exists y . (x <= y & !(x = y)) \\/ x = 1",
            "0 = 1",
        ] {
            let c = decide(&parse(s).unwrap(), &Caps::default()).unwrap();
            let text = c.to_text();
            let back = Certificate::from_text(&text).unwrap();
            assert_eq!(back, c, "{s}\n{text}");
            back.check().unwrap();
            assert_eq!(Certificate::from_json(&c.to_json()).unwrap(), c);
        }
    }

    #[test]
    fn tampered_value_is_caught() {
        let c = decide(&parse("exists x . !(x = 1) & forall y . y <= x").unwrap(), &Caps::default())
            .unwrap();
        let text = c.to_text().replacen("value: false", "value: true", 1);
        let back = Certificate::from_text(&text).unwrap();
        assert!(back.check().is_err());
    }
}
