//! Fiber Poincaré polynomials of equivariant resolutions
//! `Z = closure(K x0 B) x_{P_J1} closure(B x1 B) x ... x_{P_J} P_I/B -> G/P_I`.
//!
//! The class of the pushforward is the m-class of the seed multiplied by
//! the constant-sheaf class of each Schubert closure and of `P_I/B`, then
//! divided by `p = p_J * prod p_Ji`. Summing its coefficients over the
//! parameters on an orbit gives the Poincaré polynomial of the fiber over
//! a point of that orbit, in powers of `q^(1/2) = v^-1`.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coxeter::{CoxeterError, GroupElt};
use crate::hecke::{HeckeAlgebra, HeckeElt};
use crate::laurent::Laurent;
use crate::lv::{LVVector, LvError, ValidatedDatum};

#[derive(Debug, Error)]
pub enum FiberError {
    #[error("resolution spec violates its constraints: {0}")]
    SpecViolation(String),
    #[error("coefficient of `{param}` is not divisible by p = {p}")]
    NonDivisible { param: String, p: Laurent },
    #[error("the datum has no closure poset")]
    NoClosurePoset,
    #[error("unknown orbit `{0}`")]
    UnknownOrbit(String),
    #[error(transparent)]
    Lv(#[from] LvError),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error("malformed resolution spec: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassTerm {
    pub param: String,
    pub coeff: Laurent,
}

/// A resolution. Exactly one of `x0` and `m_class` must be given; words
/// and subsets use 0-based generator indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_class: Option<Vec<ClassTerm>>,
    #[serde(default)]
    pub xs: Vec<Vec<usize>>,
    #[serde(rename = "Js", default)]
    pub js: Vec<Vec<usize>>,
    #[serde(rename = "J", default)]
    pub j: Vec<usize>,
    #[serde(rename = "I", default)]
    pub i: Vec<usize>,
}

impl ResolutionSpec {
    pub fn from_json(text: &str) -> Result<Self, FiberError> {
        Ok(serde_json::from_str(text)?)
    }
}

/// The constant sheaf on the closure of `orbit`, in degree 0: every orbit
/// in the closure contributes its trivial local system once.
pub fn m_class_smooth_closure(d: &ValidatedDatum, orbit: &str) -> Result<LVVector, FiberError> {
    if !d.params().iter().any(|p| p.orbit == orbit) {
        return Err(FiberError::UnknownOrbit(orbit.to_string()));
    }
    let below = d.orbits_below(orbit).ok_or(FiberError::NoClosurePoset)?;
    let mut v = LVVector::zero();
    for (i, p) in d.params().iter().enumerate() {
        if p.trivial && below.contains(&p.orbit) {
            v.add_term(i, Laurent::one());
        }
    }
    Ok(v)
}

fn violation(msg: impl Into<String>) -> FiberError {
    FiberError::SpecViolation(msg.into())
}

fn subset_of(sub: &[usize], sup: &BTreeSet<usize>) -> bool {
    sub.iter().all(|s| sup.contains(s))
}

fn show(set: &[usize]) -> String {
    let names: Vec<String> = set.iter().map(|s| format!("s{}", s + 1)).collect();
    format!("{{{}}}", names.join(", "))
}

/// The class of the resolution before summing over orbits.
pub fn resolution_class(d: &ValidatedDatum, spec: &ResolutionSpec) -> Result<LVVector, FiberError> {
    let sys = d.system();
    let (m, tau0) = seed(d, spec)?;
    if spec.js.len() != spec.xs.len() {
        return Err(violation(format!(
            "{} Schubert factors but {} subsets Js",
            spec.xs.len(),
            spec.js.len()
        )));
    }
    let xs: Vec<GroupElt> = spec.xs.iter().map(|w| sys.element(w)).collect::<Result<_, _>>()?;
    for (k, (x, jk)) in xs.iter().zip(&spec.js).enumerate() {
        let left = if k == 0 {
            tau0.clone()
        } else {
            sys.right_descents(&xs[k - 1])
        };
        let allowed: BTreeSet<usize> = left.intersection(&sys.left_descents(x)).copied().collect();
        if !subset_of(jk, &allowed) {
            return Err(violation(format!(
                "J{} = {} is not inside {}",
                k + 1,
                show(jk),
                show(&allowed.into_iter().collect::<Vec<_>>())
            )));
        }
    }
    let last = xs.last().map_or(tau0, |x| sys.right_descents(x));
    if !subset_of(&spec.j, &last) {
        return Err(violation(format!(
            "J = {} is not inside the last tau-invariant",
            show(&spec.j)
        )));
    }
    let iset: BTreeSet<usize> = spec.i.iter().copied().collect();
    if !subset_of(&spec.j, &iset) {
        return Err(violation("J must be contained in I"));
    }

    let hecke = HeckeAlgebra::new(Arc::clone(sys));
    let mut class = m;
    for x in &xs {
        class = act(d, &class, &hecke.smooth_closure_class(x)?)?;
    }
    class = act(d, &class, &hecke.parabolic_class(&spec.i)?)?;

    let mut p = sys.parabolic_poincare(&spec.j)?;
    for jk in &spec.js {
        p = &p * &sys.parabolic_poincare(jk)?;
    }
    let mut out = LVVector::zero();
    for (i, c) in class.iter() {
        let q = c.div_exact(&p).ok_or_else(|| FiberError::NonDivisible {
            param: d.param(i).id.clone(),
            p: p.clone(),
        })?;
        out.add_term(i, q);
    }
    Ok(out)
}

/// The m-class of the seed and its tau-invariant.
fn seed(d: &ValidatedDatum, spec: &ResolutionSpec) -> Result<(LVVector, BTreeSet<usize>), FiberError> {
    let tau = |i: usize| -> BTreeSet<usize> { (0..d.rank()).filter(|&s| d.case(i, s).case.is_descent()).collect() };
    match (&spec.x0, &spec.m_class) {
        (Some(id), None) => {
            let i = d.index_of(id)?;
            let p = d.param(i);
            if !p.trivial {
                return Err(violation(format!("seed `{id}` must carry the trivial local system")));
            }
            let m = if p.closed {
                LVVector::basis(i)
            } else {
                m_class_smooth_closure(d, &p.orbit)?
            };
            Ok((m, tau(i)))
        }
        (None, Some(terms)) => {
            let mut m = LVVector::zero();
            for t in terms {
                m.add_term(d.index_of(&t.param)?, t.coeff.clone());
            }
            let mut t = (0..d.rank()).collect::<BTreeSet<_>>();
            for i in m.support() {
                t = t.intersection(&tau(i)).copied().collect();
            }
            Ok((m, t))
        }
        _ => Err(violation("give exactly one of `x0` and `m_class`")),
    }
}

/// Right action of a Hecke element, each `T_y` applied along the reduced word of `y`.
fn act(d: &ValidatedDatum, m: &LVVector, h: &HeckeElt) -> Result<LVVector, FiberError> {
    let mut out = LVVector::zero();
    for (y, c) in h.t_coefficients() {
        let image = d.apply_ts_word(m, &y.indices())?;
        out.add_scaled(&image, &c);
    }
    Ok(out)
}

/// The fiber Poincaré polynomial over points of the orbit of `y`.
pub fn fiber_poincare(d: &ValidatedDatum, spec: &ResolutionSpec, y: &str) -> Result<Laurent, FiberError> {
    let orbit = d.param(d.index_of(y)?).orbit.clone();
    let class = resolution_class(d, spec)?;
    Ok(orbit_sum(d, &class, &orbit))
}

fn orbit_sum(d: &ValidatedDatum, class: &LVVector, orbit: &str) -> Laurent {
    let mut total = Laurent::zero();
    for (i, c) in class.iter() {
        if d.param(i).orbit == orbit {
            total += c;
        }
    }
    total
}

/// Fiber polynomials for every orbit, in order of first appearance.
pub fn fiber_table(d: &ValidatedDatum, spec: &ResolutionSpec) -> Result<Vec<(String, Laurent)>, FiberError> {
    let class = resolution_class(d, spec)?;
    let mut orbits: Vec<String> = Vec::new();
    for p in d.params() {
        if !orbits.contains(&p.orbit) {
            orbits.push(p.orbit.clone());
        }
    }
    Ok(orbits
        .into_iter()
        .map(|o| {
            let f = orbit_sum(d, &class, &o);
            (o, f)
        })
        .collect())
}
