//! The Hecke algebra `H(W, S)` over `Z[v, v^-1]` in the standard basis
//! `{delta_x}`, with `delta_s^2 = 1 + (v^-1 - v) delta_s`.
//!
//! The `T`-basis of the `q`-formulation is `T_x = v^-l(x) delta_x`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::coxeter::{CoxeterError, CoxeterSystem, GroupElt};
use crate::laurent::Laurent;

/// A finite sum `sum_x c_x delta_x`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HeckeElt {
    terms: BTreeMap<GroupElt, Laurent>,
}

impl HeckeElt {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `c * delta_x`
    pub fn term(x: GroupElt, c: Laurent) -> Self {
        let mut h = Self::zero();
        h.add_term(x, c);
        h
    }

    pub fn delta(x: GroupElt) -> Self {
        Self::term(x, Laurent::one())
    }

    pub fn add_term(&mut self, x: GroupElt, c: Laurent) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(x) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &HeckeElt, c: &Laurent) {
        for (x, a) in &other.terms {
            self.add_term(x.clone(), a * c);
        }
    }

    pub fn scale(&self, c: &Laurent) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn coeff(&self, x: &GroupElt) -> Laurent {
        self.terms.get(x).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ShortLex order of the basis element.
    pub fn iter(&self) -> impl Iterator<Item = (&GroupElt, &Laurent)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupElt> {
        self.terms.keys()
    }

    /// Coefficients with respect to `T_x = v^-l(x) delta_x`.
    pub fn t_coefficients(&self) -> BTreeMap<GroupElt, Laurent> {
        self.terms
            .iter()
            .map(|(x, c)| (x.clone(), c.shift(x.length() as i64)))
            .collect()
    }

    /// Serialised form: `(reduced word, coefficient string)` pairs.
    pub fn to_records(&self) -> Vec<HeckeTerm> {
        self.terms
            .iter()
            .map(|(x, c)| HeckeTerm {
                word: x.indices(),
                coeff: c.clone(),
            })
            .collect()
    }

    pub fn from_records(sys: &CoxeterSystem, records: &[HeckeTerm]) -> Result<Self, CoxeterError> {
        let mut h = Self::zero();
        for r in records {
            h.add_term(sys.element(&r.word)?, r.coeff.clone());
        }
        Ok(h)
    }
}

impl std::ops::Add<&HeckeElt> for &HeckeElt {
    type Output = HeckeElt;
    fn add(self, rhs: &HeckeElt) -> HeckeElt {
        let mut out = self.clone();
        out.add_scaled(rhs, &Laurent::one());
        out
    }
}

impl std::ops::Sub<&HeckeElt> for &HeckeElt {
    type Output = HeckeElt;
    fn sub(self, rhs: &HeckeElt) -> HeckeElt {
        let mut out = self.clone();
        out.add_scaled(rhs, &Laurent::constant(-1));
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeTerm {
    pub word: Vec<usize>,
    pub coeff: Laurent,
}

/// The Hecke algebra of a Coxeter system, with a shared cache of
/// Kazhdan-Lusztig basis elements.
#[derive(Debug)]
pub struct HeckeAlgebra {
    sys: Arc<CoxeterSystem>,
    kl_cache: Mutex<HashMap<GroupElt, HeckeElt>>,
}

impl HeckeAlgebra {
    pub fn new(sys: Arc<CoxeterSystem>) -> Self {
        Self {
            sys,
            kl_cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.sys
    }

    pub fn one(&self) -> HeckeElt {
        HeckeElt::delta(self.sys.identity())
    }

    /// `h * delta_s`
    pub fn mul_right_delta_s(&self, h: &HeckeElt, s: usize) -> HeckeElt {
        let corr = Laurent::v_pow(-1) - Laurent::v_pow(1);
        let mut out = HeckeElt::zero();
        for (x, c) in h.iter() {
            let xs = self.sys.mul_gen(x, s);
            if xs.length() < x.length() {
                out.add_term(x.clone(), c * &corr);
            }
            out.add_term(xs, c.clone());
        }
        out
    }

    /// `h * delta_s^-1 = h * (delta_s + v - v^-1)`
    fn mul_right_delta_s_inv(&self, h: &HeckeElt, s: usize) -> HeckeElt {
        let mut out = self.mul_right_delta_s(h, s);
        out.add_scaled(h, &(Laurent::v_pow(1) - Laurent::v_pow(-1)));
        out
    }

    /// `h * b_s = h * (delta_s + v)`
    pub fn mul_right_b_s(&self, h: &HeckeElt, s: usize) -> HeckeElt {
        let mut out = self.mul_right_delta_s(h, s);
        out.add_scaled(h, &Laurent::v_pow(1));
        out
    }

    pub fn mul(&self, a: &HeckeElt, b: &HeckeElt) -> Result<HeckeElt, CoxeterError> {
        let mut out = HeckeElt::zero();
        for (y, c) in b.iter() {
            if !self.sys.owns(y) {
                return Err(CoxeterError::ForeignElement);
            }
            let mut part = a.scale(c);
            for &s in y.word() {
                part = self.mul_right_delta_s(&part, s as usize);
            }
            out.add_scaled(&part, &Laurent::one());
        }
        Ok(out)
    }

    /// The ring homomorphism with `v -> v^-1` and `delta_s -> delta_s^-1`.
    pub fn bar_involution(&self, h: &HeckeElt) -> HeckeElt {
        let mut out = HeckeElt::zero();
        for (x, c) in h.iter() {
            let mut img = self.one();
            for &s in x.word() {
                img = self.mul_right_delta_s_inv(&img, s as usize);
            }
            out.add_scaled(&img, &c.bar());
        }
        out
    }

    /// The Kazhdan-Lusztig basis element `b_x`.
    ///
    /// Built as `b_{xs} b_s` minus `mu`-corrections, where each `mu` is the
    /// degree-0 coefficient met while sweeping down the Bruhat interval.
    pub fn kl_basis(&self, x: &GroupElt) -> Result<HeckeElt, CoxeterError> {
        if !self.sys.owns(x) {
            return Err(CoxeterError::ForeignElement);
        }
        if let Some(b) = self.kl_cache.lock().expect("kl cache poisoned").get(x) {
            return Ok(b.clone());
        }
        let b = if x.is_identity() {
            self.one()
        } else {
            let s = *x.word().last().expect("non-identity") as usize;
            let shorter = self.sys.mul_gen(x, s);
            let prev = self.kl_basis(&shorter)?;
            let mut acc = self.mul_right_b_s(&prev, s);
            let mut below = self.sys.lower_interval(x)?;
            below.reverse();
            for z in below.iter().filter(|z| *z != x) {
                let mu = acc.coeff(z).coeff(0);
                if mu != 0.into() {
                    let bz = self.kl_basis(z)?;
                    acc.add_scaled(&bz, &Laurent::constant(-mu));
                }
            }
            acc
        };
        self.kl_cache
            .lock()
            .expect("kl cache poisoned")
            .insert(x.clone(), b.clone());
        Ok(b)
    }

    /// `h_{y,x}`, the coefficient of `delta_y` in `b_x`.
    pub fn kl_polynomial(&self, y: &GroupElt, x: &GroupElt) -> Result<Laurent, CoxeterError> {
        Ok(self.kl_basis(x)?.coeff(y))
    }

    /// `sum_{y <= x} T_y`: the class of the constant sheaf on a rationally
    /// smooth Schubert closure. Smoothness is the caller's assertion.
    pub fn smooth_closure_class(&self, x: &GroupElt) -> Result<HeckeElt, CoxeterError> {
        let mut out = HeckeElt::zero();
        for y in self.sys.lower_interval(x)? {
            let l = y.length() as i64;
            out.add_term(y, Laurent::v_pow(-l));
        }
        Ok(out)
    }

    /// `sum_{y in W_I} T_y`, the class of the constant sheaf on `P_I / B`.
    pub fn parabolic_class(&self, subset: &[usize]) -> Result<HeckeElt, CoxeterError> {
        let mut out = HeckeElt::zero();
        for y in self.sys.parabolic_elements(subset)? {
            let l = y.length() as i64;
            out.add_term(y, Laurent::v_pow(-l));
        }
        Ok(out)
    }
}
