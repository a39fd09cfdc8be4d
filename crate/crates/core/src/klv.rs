//! Canonical classes of a Lusztig-Vogan module, built from closed-orbit seeds
//! by repeated `b_s` action and peeling off classes that are already known.
//!
//! All classes live in the rescaled basis `^g = v^d(g) g`, where they are
//! unitriangular with lower coefficients in `vZ[v]`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::laurent::{Laurent, QPoly};
use crate::lv::{HatVector, LVVector, LvError, ValidatedDatum};

#[derive(Debug, Error)]
pub enum KlvError {
    #[error("not semisimple at `{param}`: multiplicity {multiplicity} is {reason}")]
    NotSemisimple {
        param: String,
        multiplicity: Laurent,
        reason: &'static str,
    },
    #[error("coefficient {coeff} of `{lower}` in the class of `{upper}` does not have the parity or degree of a KLV polynomial")]
    ParityViolation {
        lower: String,
        upper: String,
        coeff: Laurent,
    },
    #[error("no fixpoint after {cap} rounds of b_s action; raise the cap")]
    CapExceeded { cap: usize },
    #[error(transparent)]
    Lv(#[from] LvError),
}

/// Rewrites a vector in the rescaled basis.
pub fn to_hat(d: &ValidatedDatum, x: &LVVector) -> HatVector {
    let mut out = HatVector::zero();
    for (i, c) in x.iter() {
        out.add_term(i, c.shift(-(d.dim(i) as i64)));
    }
    out
}

pub fn from_hat(d: &ValidatedDatum, x: &HatVector) -> LVVector {
    let mut out = LVVector::zero();
    for (i, c) in x.iter() {
        out.add_term(i, c.shift(d.dim(i) as i64));
    }
    out
}

/// The `b_s` action in rescaled coordinates.
pub fn hat_bs(d: &ValidatedDatum, x: &HatVector, s: usize) -> Result<HatVector, LvError> {
    Ok(to_hat(d, &d.apply_bs(&from_hat(d, x), s)?))
}

/// A canonical class: `param` with coefficient 1 plus lower terms in `vZ[v]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ICClass {
    pub param: usize,
    pub vector: HatVector,
}

/// Parameters whose classes are known only through their sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnresolvedGroup {
    pub params: Vec<usize>,
    pub sum: HatVector,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KLVTable {
    classes: BTreeMap<usize, ICClass>,
    unresolved: Vec<UnresolvedGroup>,
    rounds: usize,
}

impl KLVTable {
    pub fn get(&self, param: usize) -> Option<&ICClass> {
        self.classes.get(&param)
    }

    pub fn is_resolved(&self, param: usize) -> bool {
        self.classes.contains_key(&param)
    }

    pub fn classes(&self) -> impl Iterator<Item = &ICClass> {
        self.classes.values()
    }

    pub fn resolved(&self) -> Vec<usize> {
        self.classes.keys().copied().collect()
    }

    pub fn unresolved(&self) -> &[UnresolvedGroup] {
        &self.unresolved
    }

    /// Productive rounds of `b_s` action needed to reach the fixpoint.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    fn insert(&mut self, param: usize, vector: HatVector) {
        self.classes.insert(param, ICClass { param, vector });
    }
}

/// Checks the unitriangularity and parity conditions on a candidate class.
pub fn is_ic_class(d: &ValidatedDatum, param: usize, x: &HatVector) -> bool {
    let top = d.dim(param) as i64;
    x.coeff(param).is_one()
        && x.iter()
            .filter(|(i, _)| *i != param)
            .all(|(i, c)| c.in_v_zv() && c.has_parity(top - d.dim(i) as i64))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Peeled {
    pub multiplicities: BTreeMap<usize, Laurent>,
    pub residual: HatVector,
}

/// Removes known classes from `x`, top dimension first.
///
/// A known class's multiplicity is read from the nonpositive part of its
/// coefficient and completed to a bar-symmetric polynomial. That reading is
/// exact as long as each unknown class met higher up enters with
/// multiplicity 0 or 1, since then its tail only adds `vZ[v]` terms. Once an
/// unknown coefficient has any other nonpositive part, the remaining
/// coefficients are left in the residual untouched.
pub fn peel(d: &ValidatedDatum, x: &HatVector, known: &KLVTable) -> Result<Peeled, KlvError> {
    let mut work = x.clone();
    let mut mult = BTreeMap::new();
    let mut safe = true;
    let mut unknown_above = false;
    for i in d.top_down_order() {
        let f = work.coeff(i);
        if f.is_zero() {
            continue;
        }
        let Some(class) = known.get(i) else {
            unknown_above = true;
            let low = f.nonpositive_part();
            if !(low.is_zero() || low.is_one()) {
                safe = false;
            }
            continue;
        };
        if !safe {
            continue;
        }
        let m = f.symmetrize_nonpositive();
        let fail = |reason| KlvError::NotSemisimple {
            param: d.param(i).id.clone(),
            multiplicity: f.clone(),
            reason,
        };
        if !unknown_above && m != f {
            return Err(fail("not bar-symmetric"));
        }
        if !m.is_nonnegative() {
            return Err(fail("negative"));
        }
        if !m.is_zero() {
            work.add_scaled(&class.vector, &-&m);
            mult.insert(i, m);
        }
    }
    Ok(Peeled {
        multiplicities: mult,
        residual: work,
    })
}

#[derive(Clone, Debug, Default)]
pub struct KlvOptions {
    /// Parameters seeded as their own classes, beyond the closed and clean ones.
    pub extra_seeds: Vec<usize>,
    /// A previous table whose classes are taken as known.
    pub known: Option<KLVTable>,
    /// Bound on productive rounds; defaults to `|params| * |S|`.
    pub cap: Option<usize>,
}

enum Outcome {
    Settled,
    Resolved(usize, HatVector),
    Group(UnresolvedGroup),
}

/// Computes every class reachable from the seeds.
///
/// Each round applies every `b_s` to every class known at the start of the
/// round and peels the result. A residual with a single top parameter whose
/// coefficient `m` divides it exactly, and whose quotient passes
/// [`is_ic_class`] after peeling, gives a new class. Anything else is kept
/// as an unresolved group and retried in later rounds.
pub fn compute_klv(d: &ValidatedDatum, opts: &KlvOptions) -> Result<KLVTable, KlvError> {
    let mut table = KLVTable::default();
    if let Some(known) = &opts.known {
        for c in known.classes() {
            table.insert(c.param, c.vector.clone());
        }
    }
    let seeds = (0..d.len())
        .filter(|&i| (d.param(i).closed && d.param(i).trivial) || d.param(i).clean)
        .chain(opts.extra_seeds.iter().copied());
    for i in seeds {
        if i >= d.len() {
            return Err(LvError::UnknownParam(format!("#{i}")).into());
        }
        if !table.is_resolved(i) {
            table.insert(i, HatVector::basis(i));
        }
    }

    let cap = opts.cap.unwrap_or(d.len() * d.rank());
    let mut settled: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut rounds = 0;
    loop {
        let mut frontier: Vec<usize> = table.resolved();
        frontier.sort_by_key(|&i| (d.dim(i), d.param(i).id.clone()));
        let mut groups: Vec<UnresolvedGroup> = Vec::new();
        let mut progress = false;
        for p in frontier {
            for s in 0..d.rank() {
                if settled.contains(&(p, s)) {
                    continue;
                }
                let x = hat_bs(d, &table.classes[&p].vector, s)?;
                match examine(d, &x, &table)? {
                    Outcome::Settled => {
                        settled.insert((p, s));
                    }
                    Outcome::Resolved(g, c) => {
                        settled.insert((p, s));
                        table.insert(g, c);
                        progress = true;
                    }
                    Outcome::Group(g) => {
                        if !groups.iter().any(|h| h.params == g.params) {
                            groups.push(g);
                        }
                    }
                }
            }
        }
        if !progress {
            groups.retain(|g| g.params.iter().any(|&i| !table.is_resolved(i)));
            groups.sort_by(|a, b| a.params.cmp(&b.params));
            table.unresolved = groups;
            table.rounds = rounds;
            return Ok(table);
        }
        rounds += 1;
        if rounds > cap {
            return Err(KlvError::CapExceeded { cap });
        }
    }
}

fn examine(d: &ValidatedDatum, x: &HatVector, table: &KLVTable) -> Result<Outcome, KlvError> {
    let r = peel(d, x, table)?.residual;
    if r.is_zero() {
        return Ok(Outcome::Settled);
    }
    let open: Vec<usize> = r.support().filter(|&i| !table.is_resolved(i)).collect();
    let Some(top) = open.iter().map(|&i| d.dim(i)).max() else {
        // Only known classes remain but peeling could not remove them.
        let i = r.support().next().expect("nonzero residual");
        return Err(KlvError::NotSemisimple {
            param: d.param(i).id.clone(),
            multiplicity: r.coeff(i),
            reason: "left over after peeling",
        });
    };
    let mut params: Vec<usize> = open.into_iter().filter(|&i| d.dim(i) == top).collect();
    params.sort_by(|&a, &b| d.param(a).id.cmp(&d.param(b).id));
    if let [g] = params[..] {
        if let Some(c) = split_single(d, g, &r, table)? {
            return Ok(Outcome::Resolved(g, c));
        }
    }
    Ok(Outcome::Group(UnresolvedGroup { params, sum: r }))
}

/// Tries to read `r` as `m * C_g` plus known classes.
fn split_single(d: &ValidatedDatum, g: usize, r: &HatVector, table: &KLVTable) -> Result<Option<HatVector>, KlvError> {
    let m = r.coeff(g);
    if !m.is_bar_symmetric() || !m.is_nonnegative() {
        return Ok(None);
    }
    let mut quotient = HatVector::zero();
    for (i, c) in r.iter() {
        match c.div_exact(&m) {
            Some(qc) => quotient.add_term(i, qc),
            None => return Ok(None),
        }
    }
    let candidate = peel(d, &quotient, table)?.residual;
    Ok(is_ic_class(d, g, &candidate).then_some(candidate))
}

/// Extracts `P_{g', g}(q)` from `h = v^(d(g) - d(g')) P(v^-2)`.
pub fn klv_polynomials(d: &ValidatedDatum, table: &KLVTable) -> Result<BTreeMap<(usize, usize), QPoly>, KlvError> {
    let mut out = BTreeMap::new();
    for class in table.classes() {
        let g = class.param;
        for (i, h) in class.vector.iter() {
            let p = h
                .shift(d.dim(i) as i64 - d.dim(g) as i64)
                .to_q_poly()
                .filter(QPoly::is_nonnegative)
                .ok_or_else(|| KlvError::ParityViolation {
                    lower: d.param(i).id.clone(),
                    upper: d.param(g).id.clone(),
                    coeff: h.clone(),
                })?;
            out.insert((i, g), p);
        }
    }
    Ok(out)
}

/// Parameters of the trivial block that the table neither resolves nor
/// places in an unresolved group.
pub fn uncovered(d: &ValidatedDatum, table: &KLVTable) -> Vec<usize> {
    let grouped: BTreeSet<usize> = table
        .unresolved()
        .iter()
        .flat_map(|g| g.params.iter().copied())
        .collect();
    d.trivial_block()
        .into_iter()
        .filter(|i| !table.is_resolved(*i) && !grouped.contains(i))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermRecord {
    pub param: String,
    pub coeff: Laurent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KlvRecord {
    pub param: String,
    pub klv: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassRecord {
    pub param: String,
    pub terms: Vec<TermRecord>,
    pub klv: Vec<KlvRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupRecord {
    pub params: Vec<String>,
    pub sum: Vec<TermRecord>,
}

/// The serialised table. `basis` is `hat` for the rescaled basis and `raw`
/// for the original parameter basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KlvReport {
    pub basis: &'static str,
    pub classes: Vec<ClassRecord>,
    pub unresolved: Vec<GroupRecord>,
}

impl KlvReport {
    pub fn new(d: &ValidatedDatum, table: &KLVTable, raw: bool) -> Result<Self, KlvError> {
        let polys = klv_polynomials(d, table)?;
        let terms = |x: &HatVector| -> Vec<TermRecord> {
            let pairs: Vec<(usize, Laurent)> = if raw {
                from_hat(d, x).iter().map(|(i, c)| (i, c.clone())).collect()
            } else {
                x.iter().map(|(i, c)| (i, c.clone())).collect()
            };
            let mut pairs = pairs;
            pairs.sort_by_key(|(i, _)| (std::cmp::Reverse(d.dim(*i)), d.param(*i).id.clone()));
            pairs
                .into_iter()
                .map(|(i, coeff)| TermRecord {
                    param: d.param(i).id.clone(),
                    coeff,
                })
                .collect()
        };
        let mut order: Vec<usize> = table.resolved();
        order.sort_by_key(|&i| (d.dim(i), d.param(i).id.clone()));
        let classes = order
            .into_iter()
            .map(|g| {
                let class = table.get(g).expect("resolved");
                let mut klv: Vec<(usize, &QPoly)> = class.vector.support().map(|i| (i, &polys[&(i, g)])).collect();
                klv.sort_by_key(|(i, _)| (std::cmp::Reverse(d.dim(*i)), d.param(*i).id.clone()));
                ClassRecord {
                    param: d.param(g).id.clone(),
                    terms: terms(&class.vector),
                    klv: klv
                        .into_iter()
                        .map(|(i, p)| KlvRecord {
                            param: d.param(i).id.clone(),
                            klv: p.to_string(),
                        })
                        .collect(),
                }
            })
            .collect();
        let unresolved = table
            .unresolved()
            .iter()
            .map(|g| GroupRecord {
                params: g.params.iter().map(|&i| d.param(i).id.clone()).collect(),
                sum: terms(&g.sum),
            })
            .collect();
        Ok(Self {
            basis: if raw { "raw" } else { "hat" },
            classes,
            unresolved,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::HeckeAlgebra;
    use crate::lv::{builtin, gen_complex};

    fn l(s: &str) -> Laurent {
        s.parse().unwrap()
    }

    fn hat(d: &ValidatedDatum, terms: &[(&str, &str)]) -> HatVector {
        let mut h = HatVector::zero();
        for (id, c) in terms {
            h.add_term(d.index_of(id).unwrap(), l(c));
        }
        h
    }

    #[test]
    fn hat_change_of_basis() {
        let d = builtin("sl2r").unwrap();
        let x = d.apply_bs(&d.basis("Q0").unwrap(), 0).unwrap();
        let h = to_hat(&d, &x);
        assert_eq!(h, hat(&d, &[("Q0", "v"), ("Qinf", "v"), ("O_triv", "1")]));
        assert_eq!(from_hat(&d, &h), x);
        assert_eq!(hat_bs(&d, &HatVector::basis(0), 0).unwrap(), h);
        assert!(hat_bs(&d, &HatVector::zero(), 0).unwrap().is_zero());

        let c = gen_complex("A1").unwrap();
        let e = HatVector::basis(c.index_of("e").unwrap());
        assert_eq!(hat_bs(&c, &e, 0).unwrap(), hat(&c, &[("s1", "1"), ("e", "v")]));
    }

    #[test]
    fn sl2r_table() {
        let d = builtin("sl2r").unwrap();
        let t = compute_klv(&d, &KlvOptions::default()).unwrap();
        let o = d.index_of("O_triv").unwrap();
        assert_eq!(
            t.get(o).unwrap().vector,
            hat(&d, &[("O_triv", "1"), ("Q0", "v"), ("Qinf", "v")])
        );
        assert_eq!(t.resolved().len(), 4);
        assert!(t.unresolved().is_empty());
        let polys = klv_polynomials(&d, &t).unwrap();
        assert!(polys.values().all(|p| *p == QPoly::one()));
        assert!(uncovered(&d, &t).is_empty());
    }

    #[test]
    fn peel_examples() {
        let d = builtin("sl2r").unwrap();
        let t = compute_klv(&d, &KlvOptions::default()).unwrap();
        let o = d.index_of("O_triv").unwrap();
        let c = &t.get(o).unwrap().vector;
        let p = peel(&d, &hat_bs(&d, c, 0).unwrap(), &t).unwrap();
        assert_eq!(p.multiplicities, BTreeMap::from([(o, Laurent::quantum_two())]));
        assert!(p.residual.is_zero());
        let p = peel(&d, c, &t).unwrap();
        assert_eq!(p.multiplicities, BTreeMap::from([(o, Laurent::one())]));

        let bad = hat(&d, &[("O_triv", "v")]);
        assert!(matches!(peel(&d, &bad, &t), Err(KlvError::NotSemisimple { .. })));
        let neg = hat(&d, &[("O_triv", "-1")]);
        assert!(matches!(peel(&d, &neg, &t), Err(KlvError::NotSemisimple { .. })));
    }

    #[test]
    fn psl2r_leaves_the_open_pair_unsplit() {
        let d = builtin("psl2r").unwrap();
        let t = compute_klv(&d, &KlvOptions::default()).unwrap();
        assert_eq!(t.resolved(), vec![d.index_of("Q").unwrap()]);
        let [g] = t.unresolved() else {
            panic!("one group expected")
        };
        let names: Vec<&str> = g.params.iter().map(|&i| d.param(i).id.as_str()).collect();
        assert_eq!(names, ["O_sgn", "O_triv"]);
        assert_eq!(g.sum, hat(&d, &[("Q", "2*v"), ("O_triv", "1"), ("O_sgn", "1")]));
        assert!(uncovered(&d, &t).is_empty());
    }

    #[test]
    fn complex_peel_gives_the_next_kl_element() {
        let d = gen_complex("A2").unwrap();
        let t = compute_klv(&d, &KlvOptions::default()).unwrap();
        let s1 = d.index_of("s1").unwrap();
        let s12 = d.index_of("s1s2").unwrap();
        let mut partial = KLVTable::default();
        for c in t.classes().filter(|c| d.dim(c.param) <= 1) {
            partial.insert(c.param, c.vector.clone());
        }
        let x = hat_bs(&d, &t.get(s1).unwrap().vector, 1).unwrap();
        let p = peel(&d, &x, &partial).unwrap();
        assert_eq!(p.residual, t.get(s12).unwrap().vector);
    }

    #[test]
    fn complex_tables_match_kl_basis() {
        for ty in ["A1", "A2", "B2", "A3"] {
            let d = gen_complex(ty).unwrap();
            let t = compute_klv(&d, &KlvOptions::default()).unwrap();
            assert_eq!(t.resolved().len(), d.len(), "{ty}");
            let h = HeckeAlgebra::new(d.system().clone());
            for x in d.system().enumerate().unwrap() {
                let b = h.kl_basis(x).unwrap();
                let class = &t.get(d.index_of(&x.to_string()).unwrap()).unwrap().vector;
                let mut expect = HatVector::zero();
                for (y, c) in b.iter() {
                    expect.add_term(d.index_of(&y.to_string()).unwrap(), c.clone());
                }
                assert_eq!(*class, expect, "{ty} {x}");
            }
        }
    }

    #[test]
    fn a3_klv_polynomial_of_the_longest_element() {
        let d = gen_complex("A3").unwrap();
        let t = compute_klv(&d, &KlvOptions::default()).unwrap();
        let polys = klv_polynomials(&d, &t).unwrap();
        let w0 = d.index_of(&d.system().longest_element().unwrap().to_string()).unwrap();
        assert_eq!(polys[&(d.index_of("e").unwrap(), w0)], QPoly::one());
        // The singular Schubert variety of s2s1s3s2 in A3 has P_{e,x} = 1 + q.
        let x = d
            .index_of(&d.system().element(&[1, 0, 2, 1]).unwrap().to_string())
            .unwrap();
        assert_eq!(polys[&(d.index_of("e").unwrap(), x)].to_string(), "1 + q");
    }

    #[test]
    fn recomputation_is_idempotent() {
        for d in [
            builtin("sl2r").unwrap(),
            builtin("psl2r").unwrap(),
            gen_complex("B2").unwrap(),
        ] {
            let first = compute_klv(&d, &KlvOptions::default()).unwrap();
            let opts = KlvOptions {
                known: Some(first.clone()),
                ..Default::default()
            };
            let second = compute_klv(&d, &opts).unwrap();
            assert_eq!(second.classes, first.classes);
            assert_eq!(second.unresolved, first.unresolved);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let d = gen_complex("A2").unwrap();
        let opts = KlvOptions {
            cap: Some(1),
            ..Default::default()
        };
        assert!(matches!(compute_klv(&d, &opts), Err(KlvError::CapExceeded { cap: 1 })));
    }

    #[test]
    fn resolved_classes_pass_invariants() {
        for d in [builtin("sl2r").unwrap(), gen_complex("A3").unwrap()] {
            let t = compute_klv(&d, &KlvOptions::default()).unwrap();
            for c in t.classes() {
                assert!(is_ic_class(&d, c.param, &c.vector));
            }
        }
    }

    #[test]
    fn parity_violation_is_reported() {
        let d = builtin("sl2r").unwrap();
        let mut t = KLVTable::default();
        let o = d.index_of("O_triv").unwrap();
        t.insert(o, hat(&d, &[("O_triv", "1"), ("Q0", "v^2")]));
        assert!(matches!(klv_polynomials(&d, &t), Err(KlvError::ParityViolation { .. })));
    }

    #[test]
    fn report_in_both_bases() {
        let d = builtin("sl2r").unwrap();
        let t = compute_klv(&d, &KlvOptions::default()).unwrap();
        let hat = KlvReport::new(&d, &t, false).unwrap();
        let open = hat.classes.iter().find(|c| c.param == "O_triv").unwrap();
        let rendered: Vec<String> = open.terms.iter().map(|t| format!("{}:{}", t.param, t.coeff)).collect();
        assert_eq!(rendered, ["O_triv:1", "Q0:v", "Qinf:v"]);
        let raw = KlvReport::new(&d, &t, true).unwrap();
        let open = raw.classes.iter().find(|c| c.param == "O_triv").unwrap();
        assert_eq!(open.terms[0].coeff, l("v"));
        assert_eq!(raw.basis, "raw");
    }
}
