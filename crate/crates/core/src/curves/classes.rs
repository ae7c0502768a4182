//! Grouping curves of the family by shared components.
//!
//! Pairwise shared components are witnessed by exact gcds. Candidate pairs
//! come from buckets keyed by the irreducible factors of `F(r0, x')` over
//! `F_p`: a common component `h` of two curves has positive degree in `x'`
//! and a unit leading coefficient there, so `h(r0, x')` contributes a common
//! factor modulo `p`. Every gcd and every division is exact; the modular
//! step only decides which pairs are worth examining.
//!
//! The witnesses are refined into a pairwise coprime basis and each basis
//! element collects all curves it divides, so classes are maximal for the
//! divisibility relation.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::Result;
use crate::exact::{BiPoly, UniPoly};

use super::modp::{curve_keys, Poly};
use super::{checked_degree, predict_gamma0, CurveRecord};

/// Classes with at least this many members are exceptional.
pub const EXCEPTIONAL_MIN: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentClass {
    pub component: BiPoly,
    /// Indices into the family, ascending.
    pub members: Vec<usize>,
}

/// A curve of the residual family with its source tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualCurve {
    pub poly: BiPoly,
    /// Family indices whose quotient equals `poly`, ascending.
    pub sources: Vec<usize>,
    /// Whether an exceptional component was divided out.
    pub divided: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClassStats {
    pub buckets: usize,
    pub unbucketed: usize,
    pub pairs_examined: u64,
    pub exact_gcds: u64,
    pub witnesses: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityReport {
    pub deg_phi: usize,
    /// Sorted by component.
    pub classes: Vec<ComponentClass>,
    /// Indices into `classes` with at least five members.
    pub exceptional: Vec<usize>,
    /// Components of the exceptional classes.
    pub gamma0: Vec<BiPoly>,
    /// Per family record: divisible by a component of `gamma0`.
    pub in_gamma0_hat: Vec<bool>,
    /// Symmetry-induced components with the number of family curves each
    /// divides, computed by direct division.
    pub predicted: Vec<(BiPoly, usize)>,
    /// Residual family with exceptional components divided out; constant
    /// quotients dropped, equal quotients merged.
    pub residual: Vec<ResidualCurve>,
    /// Largest non-exceptional class.
    pub max_residual_class: usize,
    /// Largest number of tuples sharing one residual curve.
    pub max_residual_sources: usize,
    pub stats: ClassStats,
    /// Structured failures; empty when every check passes.
    pub violations: Vec<String>,
}

impl MultiplicityReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn gamma0_hat_size(&self) -> usize {
        self.in_gamma0_hat.iter().filter(|&&b| b).count()
    }
}

fn nonconstant(p: BiPoly) -> Option<BiPoly> {
    (!p.is_constant()).then_some(p)
}

/// Adds `a` to a pairwise coprime basis, splitting elements as needed.
fn refine(basis: &mut Vec<BiPoly>, a: BiPoly) -> Result<()> {
    if a.is_constant() {
        return Ok(());
    }
    for idx in 0..basis.len() {
        if basis[idx] == a {
            return Ok(());
        }
        let g = a.gcd(&basis[idx])?;
        if g.is_constant() {
            continue;
        }
        let b = basis.swap_remove(idx);
        let a_rest = a.div_exact(&g).expect("gcd divides").primitive_part()?;
        let b_rest = b.div_exact(&g).expect("gcd divides").primitive_part()?;
        refine(basis, g)?;
        refine(basis, a_rest)?;
        return refine(basis, b_rest);
    }
    basis.push(a);
    Ok(())
}

struct Divisibility<'a> {
    family: &'a [CurveRecord],
    cache: HashMap<(usize, usize), bool>,
}

impl Divisibility<'_> {
    fn check(&mut self, w: usize, witness: &BiPoly, i: usize) -> bool {
        let poly = &self.family[i].poly;
        *self.cache.entry((w, i)).or_insert_with(|| witness.divides(poly))
    }
}

pub fn multiplicity_classes(family: &[CurveRecord], phi: &UniPoly) -> Result<MultiplicityReport> {
    let deg_phi = checked_degree(phi)?;
    let mut stats = ClassStats::default();

    let mut buckets: BTreeMap<Poly, Vec<usize>> = BTreeMap::new();
    let mut unbucketed = Vec::new();
    for (i, r) in family.iter().enumerate() {
        match curve_keys(&r.poly) {
            Some(keys) => {
                for k in keys {
                    buckets.entry(k).or_default().push(i);
                }
            }
            None => unbucketed.push(i),
        }
    }
    stats.buckets = buckets.len();
    stats.unbucketed = unbucketed.len();

    let mut witnesses: Vec<BiPoly> = Vec::new();
    let mut witness_index: HashMap<BiPoly, usize> = HashMap::new();
    let mut by_key: HashMap<Poly, Vec<usize>> = HashMap::new();
    let mut div = Divisibility {
        family,
        cache: HashMap::new(),
    };
    let mut pairs: Vec<(usize, usize, Option<&Poly>)> = Vec::new();
    for (key, members) in &buckets {
        for (x, &i) in members.iter().enumerate() {
            for &j in &members[x + 1..] {
                pairs.push((i, j, Some(key)));
            }
        }
    }
    for &u in &unbucketed {
        for j in 0..family.len() {
            if j != u {
                pairs.push((u.min(j), u.max(j), None));
            }
        }
    }
    for (i, j, key) in pairs {
        stats.pairs_examined += 1;
        let known = match key {
            Some(k) => by_key.get(k).cloned().unwrap_or_default(),
            None => (0..witnesses.len()).collect(),
        };
        let explained = known.into_iter().any(|w| {
            let wp = witnesses[w].clone();
            div.check(w, &wp, i) && div.check(w, &wp, j)
        });
        if explained {
            continue;
        }
        stats.exact_gcds += 1;
        let Some(g) = nonconstant(family[i].poly.gcd(&family[j].poly)?) else {
            continue;
        };
        if witness_index.contains_key(&g) {
            continue;
        }
        let w = witnesses.len();
        witness_index.insert(g.clone(), w);
        for k in curve_keys(&g).unwrap_or_default() {
            by_key.entry(k).or_default().push(w);
        }
        witnesses.push(g);
    }
    stats.witnesses = witnesses.len();

    let mut basis = Vec::new();
    for w in witnesses {
        refine(&mut basis, w)?;
    }
    basis.sort();

    let mut classes = Vec::with_capacity(basis.len());
    for h in basis {
        let mut candidates: Vec<usize> = unbucketed.clone();
        match curve_keys(&h) {
            Some(keys) => {
                for k in keys {
                    if let Some(m) = buckets.get(&k) {
                        candidates.extend(m);
                    }
                }
            }
            None => candidates = (0..family.len()).collect(),
        }
        candidates.sort_unstable();
        candidates.dedup();
        let members: Vec<usize> = candidates
            .into_iter()
            .filter(|&i| h.divides(&family[i].poly))
            .collect();
        classes.push(ComponentClass {
            component: h,
            members,
        });
    }

    let exceptional: Vec<usize> = (0..classes.len())
        .filter(|&c| classes[c].members.len() >= EXCEPTIONAL_MIN)
        .collect();
    let gamma0: Vec<BiPoly> = exceptional
        .iter()
        .map(|&c| classes[c].component.clone())
        .collect();
    let mut in_gamma0_hat = vec![false; family.len()];
    for &c in &exceptional {
        for &i in &classes[c].members {
            in_gamma0_hat[i] = true;
        }
    }
    let max_residual_class = classes
        .iter()
        .filter(|c| c.members.len() < EXCEPTIONAL_MIN)
        .map(|c| c.members.len())
        .max()
        .unwrap_or(0);

    let mut residual: Vec<ResidualCurve> = Vec::new();
    let mut seen: HashMap<BiPoly, usize> = HashMap::new();
    for (i, r) in family.iter().enumerate() {
        let mut q = r.poly.clone();
        if in_gamma0_hat[i] {
            for e in &gamma0 {
                while let Some(next) = q.div_exact(e) {
                    q = next;
                }
            }
            if q.is_constant() {
                continue;
            }
            q = q.primitive_part()?;
        }
        match seen.get(&q) {
            Some(&at) => residual[at].sources.push(i),
            None => {
                seen.insert(q.clone(), residual.len());
                residual.push(ResidualCurve {
                    poly: q,
                    sources: vec![i],
                    divided: in_gamma0_hat[i],
                });
            }
        }
    }
    let max_residual_sources = residual.iter().map(|r| r.sources.len()).max().unwrap_or(0);

    let predicted: Vec<(BiPoly, usize)> = predict_gamma0(phi)?
        .into_iter()
        .map(|p| {
            let hits = family.iter().filter(|r| p.component.divides(&r.poly)).count();
            (p.component, hits)
        })
        .collect();

    let mut violations = Vec::new();
    if gamma0.len() > 4 * deg_phi {
        violations.push(format!(
            "|Gamma0| = {} exceeds 4 deg(phi) = {}",
            gamma0.len(),
            4 * deg_phi
        ));
    }
    if max_residual_class >= EXCEPTIONAL_MIN {
        violations.push(format!("residual class of size {max_residual_class}"));
    }
    for &c in &exceptional {
        let class = &classes[c];
        if !predicted.iter().any(|(p, _)| *p == class.component) {
            violations.push(format!(
                "exceptional component {} with {} members is not symmetry-induced",
                class.component.display_with(["x", "x'"]),
                class.members.len()
            ));
        }
    }
    for (p, hits) in &predicted {
        if *hits >= EXCEPTIONAL_MIN && !gamma0.contains(p) {
            violations.push(format!(
                "predicted component {} divides {hits} curves but was not found",
                p.display_with(["x", "x'"])
            ));
        }
    }

    Ok(MultiplicityReport {
        deg_phi,
        classes,
        exceptional,
        gamma0,
        in_gamma0_hat,
        predicted,
        residual,
        max_residual_class,
        max_residual_sources,
        stats,
        violations,
    })
}
