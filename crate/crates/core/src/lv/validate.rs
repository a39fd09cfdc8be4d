//! Structural and algebraic checks on a datum.
//!
//! The structural pass looks at ids, arities, dimensions and the reciprocity
//! between paired root types. Only when it finds nothing does the algebraic
//! pass run, since the action is not even defined on a malformed table.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use super::{Case, DatumFile, LVVector, Param, RootCase, ValidatedDatum};
use crate::coxeter::{CoxeterSystem, Involution, SubgroupSpec};
use crate::laurent::Laurent;
use crate::unionfind::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum ViolationKind {
    DuplicateParam,
    TrivialLocalSystemCount,
    OrbitDimensionMismatch,
    UnknownParam,
    GeneratorOutOfRange,
    DuplicateEntry,
    MissingEntry,
    ArityMismatch,
    DimensionRuleViolation,
    OrbitRuleViolation,
    ReciprocityViolation,
    QuadraticRelationFailure,
    BraidRelationFailure,
    InvalidInvolution,
    SubgroupNotThetaFixed,
    UnknownOrbit,
    ClosedOrbitNotMinimal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub param: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Passed,
    Failed,
    NotRun,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub params: usize,
    pub rank: usize,
    pub violations: Vec<Violation>,
    pub quadratic: CheckStatus,
    pub braid: CheckStatus,
    /// Trivial local systems on closed orbits.
    pub closed_trivial: usize,
    /// `|W_K \ W^theta|`, when `wk` is given and the group is finite.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cosets: Option<usize>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// One-line verdict such as `valid; quadratic OK; braid N/A (rank 1)`.
    pub fn summary(&self) -> String {
        if !self.is_valid() {
            return format!("invalid; {} violation(s)", self.violations.len());
        }
        let braid = match self.braid {
            CheckStatus::NotApplicable => format!("N/A (rank {})", self.rank),
            other => status_word(other).to_string(),
        };
        format!("valid; quadratic {}; braid {}", status_word(self.quadratic), braid)
    }
}

fn status_word(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::Passed => "OK",
        CheckStatus::Failed => "FAILED",
        CheckStatus::NotRun => "not run",
        CheckStatus::NotApplicable => "N/A",
    }
}

struct Checker<'a> {
    file: &'a DatumFile,
    sys: &'a CoxeterSystem,
    violations: Vec<Violation>,
}

impl Checker<'_> {
    fn push(&mut self, kind: ViolationKind, param: Option<&str>, s: Option<usize>, message: String) {
        self.violations.push(Violation {
            kind,
            param: param.map(str::to_string),
            s,
            message,
        });
    }
}

/// Runs every check; returns the resolved table when the structure is sound.
pub(super) fn check(file: &DatumFile, sys: &CoxeterSystem) -> (ValidationReport, Option<Vec<Vec<Case>>>) {
    let mut ck = Checker {
        file,
        sys,
        violations: Vec::new(),
    };
    let rank = sys.rank();
    let theta = check_theta(&mut ck);
    let cosets = theta.as_ref().and_then(|t| check_wk(&mut ck, t));
    let index = check_params(&mut ck);
    let cases = resolve_table(&mut ck, &index);
    let closed_trivial = file.params.iter().filter(|p| p.closed && p.trivial).count();
    let mut report = ValidationReport {
        params: file.params.len(),
        rank,
        violations: Vec::new(),
        quadratic: CheckStatus::NotRun,
        braid: CheckStatus::NotRun,
        closed_trivial,
        cosets,
    };
    let Some(cases) = cases else {
        report.violations = ck.violations;
        return (report, None);
    };
    check_case_rules(&mut ck, &cases);
    if !ck.violations.is_empty() {
        report.violations = ck.violations;
        return (report, None);
    }

    let ops = Operators { file, cases: &cases };
    report.quadratic = check_quadratic(&mut ck, &ops, rank);
    report.braid = if rank < 2 {
        CheckStatus::NotApplicable
    } else {
        check_braid(&mut ck, &ops)
    };
    check_closure(&mut ck, &ops);
    report.violations = ck.violations;
    (report, Some(cases))
}

fn check_theta(ck: &mut Checker) -> Option<Involution> {
    let theta = match &ck.file.theta {
        Some(p) => Involution::new(p.clone()),
        None => return Some(Involution::identity(ck.sys.rank())),
    };
    match theta.check_against(ck.sys) {
        Ok(()) => Some(theta),
        Err(e) => {
            ck.push(ViolationKind::InvalidInvolution, None, None, e.to_string());
            None
        }
    }
}

fn check_wk(ck: &mut Checker, theta: &Involution) -> Option<usize> {
    let spec = SubgroupSpec {
        generators: ck.file.wk.clone()?,
    };
    if !ck.sys.is_finite() {
        return None;
    }
    match ck.sys.coset_reps(theta, &spec) {
        Ok(reps) => Some(reps.len()),
        Err(e) => {
            ck.push(ViolationKind::SubgroupNotThetaFixed, None, None, e.to_string());
            None
        }
    }
}

fn check_params(ck: &mut Checker) -> HashMap<String, usize> {
    let mut index = HashMap::new();
    let mut orbits: BTreeMap<&str, (u32, usize)> = BTreeMap::new();
    let mut dup = Vec::new();
    let mut dim_clash = Vec::new();
    for (i, p) in ck.file.params.iter().enumerate() {
        if index.insert(p.id.clone(), i).is_some() {
            dup.push(p.id.clone());
        }
        let entry = orbits.entry(p.orbit.as_str()).or_insert((p.dim, 0));
        if entry.0 != p.dim {
            dim_clash.push(p.id.clone());
        }
        if p.trivial {
            entry.1 += 1;
        }
    }
    for id in dup {
        ck.push(
            ViolationKind::DuplicateParam,
            Some(&id),
            None,
            format!("id `{id}` is used twice"),
        );
    }
    for id in dim_clash {
        ck.push(
            ViolationKind::OrbitDimensionMismatch,
            Some(&id),
            None,
            "parameters on one orbit must share its dimension".into(),
        );
    }
    let bad: Vec<(String, usize)> = orbits
        .iter()
        .filter(|(_, (_, n))| *n != 1)
        .map(|(o, (_, n))| (o.to_string(), *n))
        .collect();
    for (o, n) in bad {
        ck.push(
            ViolationKind::TrivialLocalSystemCount,
            None,
            None,
            format!("orbit `{o}` has {n} trivial local systems, expected 1"),
        );
    }
    index
}

fn resolve_table(ck: &mut Checker, index: &HashMap<String, usize>) -> Option<Vec<Vec<Case>>> {
    let rank = ck.sys.rank();
    let n = ck.file.params.len();
    let mut slots: Vec<Vec<Option<Case>>> = vec![vec![None; rank]; n];
    let mut ok = true;
    for e in &ck.file.table {
        let Some(&i) = index.get(&e.param) else {
            ck.push(
                ViolationKind::UnknownParam,
                Some(&e.param),
                Some(e.s),
                "table row for an unknown parameter".into(),
            );
            ok = false;
            continue;
        };
        if e.s >= rank {
            ck.push(
                ViolationKind::GeneratorOutOfRange,
                Some(&e.param),
                Some(e.s),
                format!("generator index {} but rank is {rank}", e.s),
            );
            ok = false;
            continue;
        }
        if e.targets.len() != e.case.arity() {
            ck.push(
                ViolationKind::ArityMismatch,
                Some(&e.param),
                Some(e.s),
                format!(
                    "case {} takes {} target(s), got {}",
                    e.case,
                    e.case.arity(),
                    e.targets.len()
                ),
            );
            ok = false;
            continue;
        }
        let mut targets = Vec::with_capacity(e.targets.len());
        for t in &e.targets {
            match index.get(t) {
                Some(&j) => targets.push(j),
                None => {
                    ck.push(
                        ViolationKind::UnknownParam,
                        Some(&e.param),
                        Some(e.s),
                        format!("unknown target `{t}`"),
                    );
                    ok = false;
                }
            }
        }
        if targets.len() != e.targets.len() {
            continue;
        }
        if slots[i][e.s].is_some() {
            ck.push(
                ViolationKind::DuplicateEntry,
                Some(&e.param),
                Some(e.s),
                "second table row for this pair".into(),
            );
            ok = false;
            continue;
        }
        slots[i][e.s] = Some(Case { case: e.case, targets });
    }
    for (i, row) in slots.iter().enumerate() {
        for (s, slot) in row.iter().enumerate() {
            if slot.is_none() {
                let id = ck.file.params[i].id.clone();
                ck.push(ViolationKind::MissingEntry, Some(&id), Some(s), "no table row".into());
                ok = false;
            }
        }
    }
    ok.then(|| {
        slots
            .into_iter()
            .map(|row| row.into_iter().map(Option::unwrap).collect())
            .collect()
    })
}

fn check_case_rules(ck: &mut Checker, cases: &[Vec<Case>]) {
    let params: &[Param] = &ck.file.params;
    let dim = |i: usize| params[i].dim as i64;
    let mut found: Vec<(ViolationKind, usize, usize, String)> = Vec::new();
    for (i, row) in cases.iter().enumerate() {
        for (s, Case { case, targets: t }) in row.iter().enumerate() {
            let other = |j: usize| &cases[j][s];
            let mut bad = |kind, msg: String| found.push((kind, i, s, msg));
            match case {
                RootCase::A | RootCase::E => {}
                RootCase::B1 | RootCase::B2 => {
                    let (step, back) = if *case == RootCase::B1 {
                        (1, RootCase::B2)
                    } else {
                        (-1, RootCase::B1)
                    };
                    if dim(t[0]) != dim(i) + step {
                        bad(
                            ViolationKind::DimensionRuleViolation,
                            format!("{case} target must have dim {:+}", step),
                        );
                    }
                    if other(t[0]).case != back || other(t[0]).targets != [i] {
                        bad(
                            ViolationKind::ReciprocityViolation,
                            format!("{case} target must be {back} pointing back"),
                        );
                    }
                }
                RootCase::C1 => {
                    let (a, b) = (t[0], t[1]);
                    if dim(a) != dim(i) + 1 || dim(b) != dim(i) + 1 {
                        bad(
                            ViolationKind::DimensionRuleViolation,
                            "c1 targets must have dim +1".into(),
                        );
                    }
                    if a == b || params[a].orbit != params[b].orbit || params[a].local_system == params[b].local_system
                    {
                        bad(
                            ViolationKind::OrbitRuleViolation,
                            "c1 targets must be distinct local systems on one orbit".into(),
                        );
                    }
                    if other(a).case != RootCase::C2
                        || other(b).case != RootCase::C2
                        || other(a).targets != [b, i]
                        || other(b).targets != [a, i]
                    {
                        bad(
                            ViolationKind::ReciprocityViolation,
                            "c1 targets must be c2 with targets [other, this]".into(),
                        );
                    }
                }
                RootCase::C2 => {
                    let (o, lower) = (t[0], t[1]);
                    if o == i || params[o].orbit != params[i].orbit {
                        bad(
                            ViolationKind::OrbitRuleViolation,
                            "c2 first target must be another local system on this orbit".into(),
                        );
                    }
                    if dim(lower) != dim(i) - 1 {
                        bad(
                            ViolationKind::DimensionRuleViolation,
                            "c2 second target must have dim -1".into(),
                        );
                    }
                    let lc = other(lower);
                    let set: BTreeSet<usize> = lc.targets.iter().copied().collect();
                    if lc.case != RootCase::C1 || set != BTreeSet::from([i, o]) {
                        bad(
                            ViolationKind::ReciprocityViolation,
                            "c2 lower target must be c1 listing both local systems".into(),
                        );
                    }
                }
                RootCase::D1 => {
                    let (up, eq) = (t[0], t[1]);
                    if dim(up) != dim(i) + 1 || dim(eq) != dim(i) || eq == i {
                        bad(
                            ViolationKind::DimensionRuleViolation,
                            "d1 targets must be [dim +1, another parameter of equal dim]".into(),
                        );
                    }
                    if other(up).case != RootCase::D2 {
                        bad(ViolationKind::ReciprocityViolation, "d1 upper target must be d2".into());
                    }
                    if other(eq).case != RootCase::D1 || other(eq).targets != [up, i] {
                        bad(
                            ViolationKind::ReciprocityViolation,
                            "d1 partner must be d1 with targets [same upper, this]".into(),
                        );
                    }
                }
                RootCase::D2 => {
                    let (a, b) = (t[0], t[1]);
                    if dim(a) != dim(i) - 1 || dim(b) != dim(i) - 1 || a == b {
                        bad(
                            ViolationKind::DimensionRuleViolation,
                            "d2 targets must be two distinct parameters of dim -1".into(),
                        );
                    }
                    if [a, b]
                        .iter()
                        .any(|&j| other(j).case != RootCase::D1 || other(j).targets[0] != i)
                    {
                        bad(
                            ViolationKind::ReciprocityViolation,
                            "d2 targets must be d1 with this as upper target".into(),
                        );
                    }
                }
            }
        }
    }
    for (kind, i, s, msg) in found {
        let id = params[i].id.clone();
        ck.push(kind, Some(&id), Some(s), msg);
    }
}

/// The `T_s` action on a structurally sound table, before the datum is wrapped.
struct Operators<'a> {
    file: &'a DatumFile,
    cases: &'a [Vec<Case>],
}

impl Operators<'_> {
    fn ts(&self, v: &LVVector, s: usize) -> LVVector {
        let mut out = LVVector::zero();
        for (i, c) in v.iter() {
            out.add_scaled(&ValidatedDatum::ts_formula(i, &self.cases[i][s]), c);
        }
        out
    }

    fn len(&self) -> usize {
        self.file.params.len()
    }
}

fn check_quadratic(ck: &mut Checker, ops: &Operators, rank: usize) -> CheckStatus {
    let q = Laurent::q_pow(1);
    let q1 = &q - &Laurent::one();
    let mut status = CheckStatus::Passed;
    for i in 0..ops.len() {
        let e = LVVector::basis(i);
        for s in 0..rank {
            let t1 = ops.ts(&e, s);
            let lhs = ops.ts(&t1, s);
            let mut rhs = t1.scale(&q1);
            rhs.add_scaled(&e, &q);
            if lhs != rhs {
                status = CheckStatus::Failed;
                let id = ops.file.params[i].id.clone();
                ck.push(
                    ViolationKind::QuadraticRelationFailure,
                    Some(&id),
                    Some(s),
                    "T_s^2 differs from (q-1)T_s + q".into(),
                );
            }
        }
    }
    status
}

fn check_braid(ck: &mut Checker, ops: &Operators) -> CheckStatus {
    let rank = ck.sys.rank();
    let mut status = CheckStatus::Passed;
    for s in 0..rank {
        for t in (s + 1)..rank {
            let m = ck.sys.m(s, t) as usize;
            if m == 0 {
                continue;
            }
            for i in 0..ops.len() {
                let run = |a: usize, b: usize| {
                    (0..m).fold(LVVector::basis(i), |v, k| ops.ts(&v, if k % 2 == 0 { a } else { b }))
                };
                if run(s, t) != run(t, s) {
                    status = CheckStatus::Failed;
                    let id = ops.file.params[i].id.clone();
                    ck.push(
                        ViolationKind::BraidRelationFailure,
                        Some(&id),
                        Some(s),
                        format!("braid relation between s{} and s{} fails", s + 1, t + 1),
                    );
                }
            }
        }
    }
    status
}

fn check_closure(ck: &mut Checker, ops: &Operators) {
    let Some(pairs) = &ck.file.closure else {
        return;
    };
    let params = &ck.file.params;
    let orbit_dim: BTreeMap<&str, u32> = params.iter().map(|p| (p.orbit.as_str(), p.dim)).collect();
    let mut found = Vec::new();
    for (lo, hi) in pairs {
        match (orbit_dim.get(lo.as_str()), orbit_dim.get(hi.as_str())) {
            (Some(a), Some(b)) if a < b => {}
            (Some(_), Some(_)) => found.push((
                ViolationKind::DimensionRuleViolation,
                format!("closure pair ({lo}, {hi}) does not increase dimension"),
            )),
            _ => found.push((
                ViolationKind::UnknownOrbit,
                format!("closure pair ({lo}, {hi}) names an unknown orbit"),
            )),
        }
    }
    let mut uf = UnionFind::new(ops.len());
    for i in 0..ops.len() {
        for s in 0..ck.sys.rank() {
            for j in ops.ts(&LVVector::basis(i), s).support() {
                uf.union(i, j);
            }
        }
    }
    let mut closed_bad = Vec::new();
    for block in uf.groups() {
        let low = block.iter().map(|&i| params[i].dim).min().unwrap_or(0);
        for &i in &block {
            if params[i].closed && params[i].dim != low {
                closed_bad.push(params[i].id.clone());
            }
        }
    }
    for (kind, msg) in found {
        ck.push(kind, None, None, msg);
    }
    for id in closed_bad {
        ck.push(
            ViolationKind::ClosedOrbitNotMinimal,
            Some(&id),
            None,
            "closed orbit is not of minimal dimension in its component".into(),
        );
    }
}
