//! Lusztig-Vogan modules given by orbit data.
//!
//! A datum lists parameters (an orbit together with a local system on it)
//! and, for every parameter and simple reflection, the root type that fixes
//! how `T_s` acts. Data are loaded from JSON, checked by [`Datum::validate`],
//! and only a [`ValidatedDatum`] exposes the module action.

mod builtin;
mod validate;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coxeter::{CoxeterError, CoxeterSystem, Involution, SubgroupSpec};
use crate::laurent::Laurent;
use crate::unionfind::UnionFind;

pub use builtin::{builtin, gen_complex, BUILTIN_NAMES};
pub use validate::{CheckStatus, ValidationReport, Violation, ViolationKind};

#[derive(Debug, Error)]
pub enum LvError {
    #[error("unknown parameter `{0}`")]
    UnknownParam(String),
    #[error("generator index {s} out of range for rank {rank}")]
    GeneratorOutOfRange { s: usize, rank: usize },
    #[error("the coxeter block needs exactly one of `type` or `matrix`")]
    BadCoxeterSpec,
    #[error("unknown built-in datum `{0}` (known: sl2r, psl2r, sl2c)")]
    UnknownBuiltin(String),
    #[error("datum is invalid: {}", .0.summary())]
    Invalid(Box<ValidationReport>),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error("malformed datum JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot read datum: {0}")]
    Io(#[from] std::io::Error),
}

/// The eight root types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootCase {
    A,
    B1,
    B2,
    C1,
    C2,
    D1,
    D2,
    E,
}

impl RootCase {
    pub fn arity(self) -> usize {
        match self {
            RootCase::A | RootCase::E => 0,
            RootCase::B1 | RootCase::B2 => 1,
            _ => 2,
        }
    }

    /// Cases in which `s` lies in the tau-invariant of the parameter.
    pub fn is_descent(self) -> bool {
        matches!(
            self,
            RootCase::A | RootCase::B2 | RootCase::C2 | RootCase::D2 | RootCase::E
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            RootCase::A => "a",
            RootCase::B1 => "b1",
            RootCase::B2 => "b2",
            RootCase::C1 => "c1",
            RootCase::C2 => "c2",
            RootCase::D1 => "d1",
            RootCase::D2 => "d2",
            RootCase::E => "e",
        }
    }
}

impl fmt::Display for RootCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Param {
    pub id: String,
    pub orbit: String,
    pub dim: u32,
    pub local_system: String,
    pub trivial: bool,
    #[serde(default)]
    pub closed: bool,
    #[serde(default)]
    pub clean: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub param: String,
    pub s: usize,
    pub case: RootCase,
    #[serde(default)]
    pub targets: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoxeterSpec {
    #[serde(rename = "type", default, skip_serializing_if = "Option::is_none")]
    pub cartan: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<u32>>>,
}

/// The on-disk datum document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumFile {
    pub coxeter: CoxeterSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wk: Option<Vec<Vec<usize>>>,
    pub params: Vec<Param>,
    pub table: Vec<TableEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closure: Option<Vec<(String, String)>>,
}

/// A datum that has been parsed but not yet validated.
#[derive(Clone, Debug)]
pub struct Datum {
    file: DatumFile,
    sys: Arc<CoxeterSystem>,
}

impl Datum {
    pub fn from_file(file: DatumFile) -> Result<Self, LvError> {
        let sys = match (&file.coxeter.cartan, &file.coxeter.matrix) {
            (Some(t), None) => CoxeterSystem::from_cartan(t)?,
            (None, Some(m)) => CoxeterSystem::from_matrix(m.clone())?,
            _ => return Err(LvError::BadCoxeterSpec),
        };
        Ok(Self {
            file,
            sys: Arc::new(sys),
        })
    }

    pub fn from_json(text: &str) -> Result<Self, LvError> {
        Self::from_file(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LvError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn file(&self) -> &DatumFile {
        &self.file
    }

    pub fn system(&self) -> &Arc<CoxeterSystem> {
        &self.sys
    }

    pub fn validate(&self) -> ValidationReport {
        validate::check(&self.file, &self.sys).0
    }

    pub fn into_validated(self) -> Result<ValidatedDatum, LvError> {
        let (report, cases) = validate::check(&self.file, &self.sys);
        match cases {
            Some(cases) if report.is_valid() => Ok(ValidatedDatum::assemble(self, cases, report)),
            _ => Err(LvError::Invalid(Box::new(report))),
        }
    }
}

/// A table entry with targets resolved to parameter indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case {
    pub case: RootCase,
    pub targets: Vec<usize>,
}

/// A datum that passed validation. Parameters are addressed by their index
/// in the file's `params` list.
#[derive(Clone, Debug)]
pub struct ValidatedDatum {
    file: DatumFile,
    sys: Arc<CoxeterSystem>,
    theta: Involution,
    index: HashMap<String, usize>,
    cases: Vec<Vec<Case>>,
    report: ValidationReport,
}

impl ValidatedDatum {
    fn assemble(datum: Datum, cases: Vec<Vec<Case>>, report: ValidationReport) -> Self {
        let Datum { file, sys } = datum;
        let theta = match &file.theta {
            Some(p) => Involution::new(p.clone()),
            None => Involution::identity(sys.rank()),
        };
        let index = file.params.iter().enumerate().map(|(i, p)| (p.id.clone(), i)).collect();
        Self {
            file,
            sys,
            theta,
            index,
            cases,
            report,
        }
    }

    pub fn system(&self) -> &Arc<CoxeterSystem> {
        &self.sys
    }

    pub fn rank(&self) -> usize {
        self.sys.rank()
    }

    pub fn theta(&self) -> &Involution {
        &self.theta
    }

    pub fn wk(&self) -> Option<SubgroupSpec> {
        self.file.wk.as_ref().map(|g| SubgroupSpec { generators: g.clone() })
    }

    pub fn file(&self) -> &DatumFile {
        &self.file
    }

    pub fn report(&self) -> &ValidationReport {
        &self.report
    }

    pub fn len(&self) -> usize {
        self.file.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.file.params.is_empty()
    }

    pub fn params(&self) -> &[Param] {
        &self.file.params
    }

    pub fn param(&self, i: usize) -> &Param {
        &self.file.params[i]
    }

    pub fn dim(&self, i: usize) -> u32 {
        self.file.params[i].dim
    }

    pub fn index_of(&self, id: &str) -> Result<usize, LvError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| LvError::UnknownParam(id.to_string()))
    }

    pub fn case(&self, i: usize, s: usize) -> &Case {
        &self.cases[i][s]
    }

    pub fn closure(&self) -> Option<&[(String, String)]> {
        self.file.closure.as_deref()
    }

    /// Orbits lying in the closure of `orbit` (reflexive, transitive).
    pub fn orbits_below(&self, orbit: &str) -> Option<BTreeSet<String>> {
        let pairs = self.file.closure.as_ref()?;
        let mut seen = BTreeSet::from([orbit.to_string()]);
        let mut stack = vec![orbit.to_string()];
        while let Some(o) = stack.pop() {
            for (lo, hi) in pairs {
                if *hi == o && seen.insert(lo.clone()) {
                    stack.push(lo.clone());
                }
            }
        }
        Some(seen)
    }

    /// Indices ordered by decreasing dimension, ties broken by id.
    pub fn top_down_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| {
            self.dim(b)
                .cmp(&self.dim(a))
                .then_with(|| self.param(a).id.cmp(&self.param(b).id))
        });
        order
    }

    pub fn basis(&self, id: &str) -> Result<LVVector, LvError> {
        Ok(LVVector::basis(self.index_of(id)?))
    }

    /// Builds a vector from `(id, coefficient)` pairs.
    pub fn vector<'a, I>(&self, terms: I) -> Result<LVVector, LvError>
    where
        I: IntoIterator<Item = (&'a str, Laurent)>,
    {
        let mut v = LVVector::zero();
        for (id, c) in terms {
            v.add_term(self.index_of(id)?, c);
        }
        Ok(v)
    }

    fn check_vector(&self, v: &LVVector) -> Result<(), LvError> {
        match v.support().find(|&i| i >= self.len()) {
            Some(i) => Err(LvError::UnknownParam(format!("#{i}"))),
            None => Ok(()),
        }
    }

    fn check_gen(&self, s: usize) -> Result<(), LvError> {
        if s >= self.rank() {
            return Err(LvError::GeneratorOutOfRange { s, rank: self.rank() });
        }
        Ok(())
    }

    /// Image of a basis parameter under `T_s`, with `q = v^-2`.
    pub(crate) fn ts_basis(&self, i: usize, s: usize) -> LVVector {
        Self::ts_formula(i, &self.cases[i][s])
    }

    /// The root-type formula for parameter `i` with table entry `entry`.
    fn ts_formula(i: usize, entry: &Case) -> LVVector {
        let q = Laurent::q_pow(1);
        let q1 = &q - &Laurent::one();
        let Case { case, targets } = entry;
        let mut out = LVVector::zero();
        match case {
            RootCase::A => out.add_term(i, q),
            RootCase::B1 => out.add_term(targets[0], Laurent::one()),
            RootCase::B2 => {
                out.add_term(i, q1);
                out.add_term(targets[0], q);
            }
            RootCase::C1 => {
                out.add_term(i, Laurent::one());
                out.add_term(targets[0], Laurent::one());
                out.add_term(targets[1], Laurent::one());
            }
            RootCase::C2 => {
                out.add_term(i, q1.clone());
                out.add_term(targets[0], Laurent::constant(-1));
                out.add_term(targets[1], q1);
            }
            RootCase::D1 => {
                out.add_term(targets[0], Laurent::one());
                out.add_term(targets[1], Laurent::one());
            }
            RootCase::D2 => {
                out.add_term(i, &q - &Laurent::constant(2));
                out.add_term(targets[0], q1.clone());
                out.add_term(targets[1], q1);
            }
            RootCase::E => out.add_term(i, Laurent::constant(-1)),
        }
        out
    }

    pub fn apply_ts(&self, v: &LVVector, s: usize) -> Result<LVVector, LvError> {
        self.check_gen(s)?;
        self.check_vector(v)?;
        let mut out = LVVector::zero();
        for (i, c) in v.iter() {
            out.add_scaled(&self.ts_basis(i, s), c);
        }
        Ok(out)
    }

    /// `b_s = v T_s + v`.
    pub fn apply_bs(&self, v: &LVVector, s: usize) -> Result<LVVector, LvError> {
        let mut out = self.apply_ts(v, s)?;
        out.add_scaled(v, &Laurent::one());
        Ok(out.scale(&Laurent::v_pow(1)))
    }

    /// Applies `T_{s_1}`, then `T_{s_2}`, and so on.
    pub fn apply_ts_word(&self, v: &LVVector, word: &[usize]) -> Result<LVVector, LvError> {
        word.iter().try_fold(v.clone(), |acc, &s| self.apply_ts(&acc, s))
    }

    /// Connected components of the graph joining each parameter to the
    /// support of its `T_s` images. They refine blocks in general and are
    /// reported as `T_s`-components.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.len());
        for i in 0..self.len() {
            for s in 0..self.rank() {
                for j in self.ts_basis(i, s).support() {
                    uf.union(i, j);
                }
            }
        }
        uf.groups()
    }

    /// The block containing the trivial local systems on closed orbits.
    pub fn trivial_block(&self) -> Vec<usize> {
        let seeds: BTreeSet<usize> = (0..self.len())
            .filter(|&i| self.param(i).closed && self.param(i).trivial)
            .collect();
        let mut out: Vec<usize> = self
            .blocks()
            .into_iter()
            .filter(|b| b.iter().any(|i| seeds.contains(i)))
            .flatten()
            .collect();
        out.sort_unstable();
        out
    }

    /// Renders a vector as `coef*id + ...` in parameter order.
    pub fn render(&self, v: &LVVector) -> String {
        render_terms(v.iter().map(|(i, c)| (self.param(i).id.as_str(), c)))
    }

    /// Same as [`render`](Self::render), with ids marked as hat basis vectors.
    pub fn render_hat(&self, v: &HatVector) -> String {
        let named: Vec<(String, &Laurent)> = v.iter().map(|(i, c)| (format!("^{}", self.param(i).id), c)).collect();
        render_terms(named.iter().map(|(n, c)| (n.as_str(), *c)))
    }
}

fn render_terms<'a>(terms: impl Iterator<Item = (&'a str, &'a Laurent)>) -> String {
    let parts: Vec<String> = terms
        .map(|(name, c)| {
            if c.is_one() {
                name.to_string()
            } else if c.num_terms() == 1 {
                format!("{c}*{name}")
            } else {
                format!("({c})*{name}")
            }
        })
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

macro_rules! sparse_vector {
    ($name:ident) => {
        impl $name {
            pub fn zero() -> Self {
                Self::default()
            }

            pub fn basis(i: usize) -> Self {
                let mut v = Self::zero();
                v.add_term(i, Laurent::one());
                v
            }

            pub fn add_term(&mut self, i: usize, c: Laurent) {
                if c.is_zero() {
                    return;
                }
                let slot = self.terms.entry(i).or_default();
                *slot += &c;
                if slot.is_zero() {
                    self.terms.remove(&i);
                }
            }

            pub fn add_scaled(&mut self, other: &Self, c: &Laurent) {
                for (i, a) in other.iter() {
                    self.add_term(i, a * c);
                }
            }

            pub fn scale(&self, c: &Laurent) -> Self {
                let mut out = Self::zero();
                out.add_scaled(self, c);
                out
            }

            pub fn coeff(&self, i: usize) -> Laurent {
                self.terms.get(&i).cloned().unwrap_or_default()
            }

            pub fn is_zero(&self) -> bool {
                self.terms.is_empty()
            }

            pub fn len(&self) -> usize {
                self.terms.len()
            }

            pub fn is_empty(&self) -> bool {
                self.terms.is_empty()
            }

            pub fn iter(&self) -> impl Iterator<Item = (usize, &Laurent)> {
                self.terms.iter().map(|(i, c)| (*i, c))
            }

            pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
                self.terms.keys().copied()
            }
        }

        impl std::ops::Add<&$name> for &$name {
            type Output = $name;
            fn add(self, rhs: &$name) -> $name {
                let mut out = self.clone();
                out.add_scaled(rhs, &Laurent::one());
                out
            }
        }

        impl std::ops::Sub<&$name> for &$name {
            type Output = $name;
            fn sub(self, rhs: &$name) -> $name {
                let mut out = self.clone();
                out.add_scaled(rhs, &Laurent::constant(-1));
                out
            }
        }
    };
}

/// A finite combination of parameters, keyed by parameter index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LVVector {
    terms: BTreeMap<usize, Laurent>,
}

/// A vector written in the rescaled basis `^g = v^d(g) g`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HatVector {
    terms: BTreeMap<usize, Laurent>,
}

sparse_vector!(LVVector);
sparse_vector!(HatVector);
