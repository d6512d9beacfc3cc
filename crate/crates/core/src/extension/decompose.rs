//! An almost-end-extension `U ⊆ V` as a sub-structure of a simple
//! almost-end-extension `U₂` of a free extension `U₁ = U[A]`.

use super::free::{free_extend, FreeExtension};
use super::{verify_embedding, Checks, ExtensionError};
use crate::order::{check_embedding, is_almost_end_extension, ElementId, FiniteUslTop, SubstructureWitness};
use crate::sentence::generated_substructure;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionWitness {
    /// `U ⊆ V`
    pub inclusion: SubstructureWitness,
    /// `U₁ = U[A]`, with `aᵢ` standing for the `i`-th new element of `V`
    pub u1: FreeExtension,
    /// `U₁ → V`
    pub h: Vec<ElementId>,
    /// `U₂′ = U₁[{b}]`
    pub u2_prime: FreeExtension,
    /// `U₂′ → U₂ = U₂′/≡`
    pub projection: Vec<ElementId>,
    pub u2: FiniteUslTop,
    /// `V → U₂`
    pub f: Vec<ElementId>,
}

fn fresh(base: &str, taken: impl Fn(&str) -> bool) -> String {
    let mut s = base.to_string();
    while taken(&s) {
        s.push('\'');
    }
    s
}

/// Runs the construction and returns it only once `verify` passes.
pub fn decompose(w: &SubstructureWitness) -> Result<DecompositionWitness, ExtensionError> {
    if !is_almost_end_extension(w) {
        return Err(ExtensionError::NotAlmostEndExtension);
    }
    let (u, v) = (w.small(), w.big());
    let new = w.new_elements();
    let a: Vec<String> = (1..=new.len())
        .map(|i| fresh(&format!("a{i}"), |s| u.id_of(s).is_some()))
        .collect();
    let u1 = free_extend(u, &a)?;
    let h = h_map(w, &u1);
    let b = fresh("b", |s| u1.result.id_of(s).is_some());
    let u2_prime = free_extend(&u1.result, &[b])?;
    let eqv = clause_relation(&h, &u2_prime, v);

    // classes in order of their least member, named after it
    let n2 = u2_prime.result.size();
    let mut projection = vec![ElementId(usize::MAX); n2];
    let mut reps = Vec::new();
    for y in 0..n2 {
        if projection[y].0 == usize::MAX {
            for z in y..n2 {
                if eqv[y * n2 + z] {
                    projection[z] = ElementId(reps.len());
                }
            }
            reps.push(y);
        }
    }
    let p2 = &u2_prime.result;
    let k = reps.len();
    let cjoin = |c: usize, d: usize| projection[p2.join(ElementId(reps[c]), ElementId(reps[d])).0].0;
    let names = reps.iter().map(|&r| p2.name(ElementId(r)).to_string()).collect();
    let u2 = FiniteUslTop::from_fn(names, projection[p2.bot().0].0, projection[p2.top().0].0, |c, d| {
        cjoin(c, d) == d
    })
    .map_err(|e| invariant("quotient order", e.to_string()))?;

    let f = v
        .elements()
        .map(|x| {
            if x == v.top() {
                projection[p2.top().0]
            } else if let Some(i) = new.iter().position(|&n| n == x) {
                projection[u2_prime.element(u1.generator(i), 1).0]
            } else {
                let ux = ElementId(w.inclusion().iter().position(|&t| t == x).unwrap());
                projection[u2_prime.element(u1.embedding[ux.0], 0).0]
            }
        })
        .collect();
    debug_assert_eq!(k, u2.size());
    let d = DecompositionWitness { inclusion: w.clone(), u1, h, u2_prime, projection, u2, f };
    let checks = d.verify();
    if checks.passed() {
        Ok(d)
    } else {
        Err(ExtensionError::Invariant(checks))
    }
}

fn invariant(name: &str, msg: String) -> ExtensionError {
    let mut c = Checks::default();
    c.push(name, Some(msg));
    ExtensionError::Invariant(c)
}

/// `h(x, A₁) = x ⊔ ⋁{vᵢ : aᵢ ∈ A₁}` and `h(⊤) = ⊤`.
fn h_map(w: &SubstructureWitness, u1: &FreeExtension) -> Vec<ElementId> {
    let v = w.big();
    let new = w.new_elements();
    u1.result
        .elements()
        .map(|e| match u1.decode(e) {
            None => v.top(),
            Some((x, mask)) => v.join_all(
                std::iter::once(w.image(x))
                    .chain((0..new.len()).filter(|i| mask >> i & 1 == 1).map(|i| new[i])),
            ),
        })
        .collect()
}

/// `≡` on `U₂′` straight from its three clauses, as a row-major matrix.
fn clause_relation(h: &[ElementId], u2p: &FreeExtension, v: &FiniteUslTop) -> Vec<bool> {
    let p2 = &u2p.result;
    let n = p2.size();
    // (x, b) pairs and the top of U₂′
    let with_b = |y: usize| match u2p.decode(ElementId(y)) {
        Some((x, 1)) => Some(x),
        _ => None,
    };
    let is_top = |y: usize| ElementId(y) == p2.top();
    let mut r = vec![false; n * n];
    for y0 in 0..n {
        for y1 in 0..n {
            r[y0 * n + y1] = y0 == y1
                || matches!((with_b(y0), with_b(y1)), (Some(x0), Some(x1)) if h[x0.0] == h[x1.0])
                || (is_top(y0) && with_b(y1).is_some_and(|x1| h[x1.0] == v.top()))
                || (is_top(y1) && with_b(y0).is_some_and(|x0| h[x0.0] == v.top()));
        }
    }
    r
}

impl DecompositionWitness {
    pub fn u(&self) -> &FiniteUslTop {
        self.inclusion.small()
    }

    pub fn v(&self) -> &FiniteUslTop {
        self.inclusion.big()
    }

    /// `U₁ → U₂`, `x ↦ [(x, ∅)]`.
    pub fn u1_into_u2(&self) -> Vec<ElementId> {
        self.u1
            .result
            .elements()
            .map(|x| self.projection[self.u2_prime.element(x, 0).0])
            .collect()
    }

    /// Re-derives everything checkable from `U`, `V`, the generator names and
    /// the stored maps.
    pub fn verify(&self) -> Checks {
        let mut c = Checks::default();
        let (u, v, w) = (self.u(), self.v(), &self.inclusion);
        let new = w.new_elements();
        c.push("V is an almost-end-extension of U", (!is_almost_end_extension(w)).then(|| "fails".into()));

        let u1 = &self.u1;
        let rebuilt = free_extend(u, &u1.generators).ok();
        c.push(
            "U1 is U[A]",
            (rebuilt.as_ref() != Some(u1) || u1.generators.len() != new.len() || u1.base != *u)
                .then(|| "stored U1 differs from the free extension".into()),
        );
        let expected = (u.size() - 1) * (1 << u1.generators.len()) + 1;
        c.push(
            "size of U1",
            (u1.result.size() != expected).then(|| format!("{} != {expected}", u1.result.size())),
        );
        let h = &self.h;
        let r1 = &u1.result;
        if h.len() != r1.size() || h.iter().any(|x| x.0 >= v.size()) {
            c.push("h is total", Some("wrong shape".into()));
            return c;
        }
        c.push(
            "h fixes U",
            u.elements().find(|&x| h[u1.embedding[x.0].0] != w.image(x)).map(|x| u.name(x).to_string()),
        );
        c.push(
            "h(g(v)) = v",
            (0..new.len()).find(|&i| h[u1.generator(i).0] != new[i]).map(|i| v.name(new[i]).to_string()),
        );
        let hom = (h[r1.bot().0] != v.bot() || h[r1.top().0] != v.top())
            .then(|| "bot or top".to_string())
            .or_else(|| {
                r1.elements().flat_map(|x| r1.elements().map(move |y| (x, y))).find_map(|(x, y)| {
                    (h[r1.join(x, y).0] != v.join(h[x.0], h[y.0]))
                        .then(|| format!("{} + {}", r1.name(x), r1.name(y)))
                })
            });
        c.push("h is a homomorphism", hom);

        let p2f = &self.u2_prime;
        let p2 = &p2f.result;
        c.push(
            "U2' is U1[{b}]",
            (p2f.base != *r1 || p2f.generators.len() != 1 || free_extend(r1, &p2f.generators).ok().as_ref() != Some(p2f))
                .then(|| "stored U2' differs from the free extension".into()),
        );
        let n2 = p2.size();
        let proj = &self.projection;
        if proj.len() != n2 || proj.iter().any(|x| x.0 >= self.u2.size()) {
            c.push("projection is total", Some("wrong shape".into()));
            return c;
        }
        let eqv = clause_relation(h, p2f, v);
        let same = |a: usize, b: usize| proj[a] == proj[b];
        let pairs = || (0..n2).flat_map(|a| (0..n2).map(move |b| (a, b)));
        c.push(
            "projection kernel is the clause relation",
            pairs().find(|&(a, b)| eqv[a * n2 + b] != same(a, b)).map(|(a, b)| {
                format!("{} vs {}", p2.name(ElementId(a)), p2.name(ElementId(b)))
            }),
        );
        // equivalence axioms on the clause relation itself
        let refl = (0..n2).all(|a| eqv[a * n2 + a]);
        let sym = pairs().all(|(a, b)| eqv[a * n2 + b] == eqv[b * n2 + a]);
        let trans = pairs().all(|(a, b)| !eqv[a * n2 + b] || (0..n2).all(|z| !eqv[b * n2 + z] || eqv[a * n2 + z]));
        c.push("equivalence relation", (!(refl && sym && trans)).then(|| format!("refl {refl} sym {sym} trans {trans}")));
        let cong = pairs().filter(|&(a, b)| eqv[a * n2 + b]).find_map(|(a, b)| {
            (0..n2)
                .find(|&y| {
                    let (ja, jb) = (p2.join(ElementId(a), ElementId(y)), p2.join(ElementId(b), ElementId(y)));
                    !eqv[ja.0 * n2 + jb.0]
                })
                .map(|y| format!("{} ~ {} joined with {}", p2.name(ElementId(a)), p2.name(ElementId(b)), p2.name(ElementId(y))))
        });
        c.push("join congruence", cong);
        c.push(
            "U1 classes trivial below top",
            r1.elements().filter(|&x| x != r1.top()).find_map(|x| {
                let y = p2f.element(x, 0).0;
                ((0..n2).filter(|&z| same(y, z)).count() != 1).then(|| r1.name(x).to_string())
            }),
        );
        let u2 = &self.u2;
        let qj = pairs().find(|&(a, b)| {
            proj[p2.join(ElementId(a), ElementId(b)).0] != u2.join(proj[a], proj[b])
        });
        c.push(
            "quotient join",
            qj.map(|(a, b)| format!("{} + {}", p2.name(ElementId(a)), p2.name(ElementId(b))))
                .or_else(|| (proj[p2.bot().0] != u2.bot() || proj[p2.top().0] != u2.top()).then(|| "bot or top".into()))
                .or_else(|| (0..u2.size()).find(|&k| !proj.contains(&ElementId(k))).map(|k| format!("class {k} empty"))),
        );
        let nat = self.u1_into_u2();
        let aie = match check_embedding(r1, u2, &nat) {
            Err(e) => Some(e.to_string()),
            Ok(()) => {
                let sw = SubstructureWitness::new(r1.clone(), u2.clone(), nat.clone()).unwrap();
                (!is_almost_end_extension(&sw)).then(|| "not an almost-initial-segment".into())
            }
        };
        c.push("U1 almost-initial in U2", aie);
        let mut seed = nat.clone();
        seed.push(proj[p2f.element(r1.bot(), 1).0]);
        c.push(
            "U2 simple over U1",
            (generated_substructure(u2, &seed).small().size() != u2.size()).then(|| "[(bot,b)] does not generate".into()),
        );
        c.extend("f ", verify_embedding(&self.f, v, u2));
        if self.f.len() == v.size() {
            c.push(
                "f extends U -> U1 -> U2",
                u.elements()
                    .find(|&x| self.f[w.image(x).0] != nat[u1.embedding[x.0].0])
                    .map(|x| u.name(x).to_string()),
            );
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(u: FiniteUslTop, v: FiniteUslTop, inc: &[usize]) -> SubstructureWitness {
        SubstructureWitness::new(u, v, inc.iter().map(|&i| ElementId(i)).collect()).unwrap()
    }

    #[test]
    fn two_chain_into_three_chain() {
        let w = pair(FiniteUslTop::chain(2), FiniteUslTop::chain(3), &[0, 2]);
        let d = decompose(&w).unwrap();
        assert_eq!(d.u1.result.names(), &["(0;{})", "(0;{a1})", "1"]);
        assert_eq!(d.u2.size(), 5);
        assert_eq!(d.u2.name(d.f[1]), "((0;{a1});{b})");
    }

    #[test]
    fn identical_pair() {
        let d = FiniteUslTop::diamond();
        let w = pair(d.clone(), d, &[0, 1, 2, 3]);
        let r = decompose(&w).unwrap();
        assert_eq!(r.u1.result.size(), 4);
        // U[{b}] has 7 elements; nothing collapses
        assert_eq!(r.u2.size(), 7);
    }

    #[test]
    fn cupping_new_element() {
        // 0 < a < 1 plus v with v + a = 1 and v incomparable to a
        let v = FiniteUslTop::from_fn(
            ["0", "a", "v", "1"].map(String::from).to_vec(),
            0,
            3,
            |x, y| x == y || x == 0 || y == 3,
        )
        .unwrap();
        let w = pair(FiniteUslTop::chain(3), v, &[0, 1, 3]);
        let d = decompose(&w).unwrap();
        assert!(d.verify().passed(), "{}", d.verify());
        // (a,{a1}) maps to top under h, so its b-version joins the top class
        let top_class = d.projection.iter().filter(|&&c| c == d.u2.top()).count();
        assert!(top_class > 1);
    }

    #[test]
    fn rejects_non_aee() {
        // 0 < v < a < 1 with U = {0, a, 1}
        let v = FiniteUslTop::chain(4);
        let w = pair(FiniteUslTop::chain(3), v, &[0, 2, 3]);
        assert_eq!(decompose(&w).unwrap_err(), ExtensionError::NotAlmostEndExtension);
    }

    #[test]
    fn tampered_witness_fails() {
        let w = pair(FiniteUslTop::chain(2), FiniteUslTop::chain(3), &[0, 2]);
        let mut d = decompose(&w).unwrap();
        d.f.swap(0, 1);
        assert!(!d.verify().passed());
    }
}
