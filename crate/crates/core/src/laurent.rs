//! Exact Laurent polynomials in `v` with integer coefficients.
//!
//! The Hecke algebra and the Lusztig-Vogan module are written over
//! `Z[v, v^-1]` with `q = v^-2`. Every polynomial quantity in the crate
//! (structure constants, canonical-basis coefficients, Poincaré
//! polynomials) lives in [`Laurent`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A Laurent polynomial `sum c_k v^k`, stored sparsely with no zero entries.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Laurent {
    coeffs: BTreeMap<i64, BigInt>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseLaurentError {
    #[error("empty polynomial string")]
    Empty,
    #[error("malformed term `{0}`")]
    BadTerm(String),
}

impl Laurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * v^k`
    pub fn monomial(c: impl Into<BigInt>, k: i64) -> Self {
        let c = c.into();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(k, c);
        }
        Self { coeffs }
    }

    /// `v^k`
    pub fn v_pow(k: i64) -> Self {
        Self::monomial(1, k)
    }

    /// `q^k = v^(-2k)`
    pub fn q_pow(k: i64) -> Self {
        Self::v_pow(-2 * k)
    }

    /// `v + v^-1`
    pub fn quantum_two() -> Self {
        Self::v_pow(1) + Self::v_pow(-1)
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut out = Self::zero();
        for (k, c) in terms {
            out.add_term(k, c.into());
        }
        out
    }

    /// Substitutes `q = v^-2` into a Laurent polynomial in `q`.
    pub fn from_q<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        Self::from_terms(terms.into_iter().map(|(k, c)| (-2 * k, c)))
    }

    /// Half-integer input mode: exponents are given in units of `q^(1/2)`,
    /// so `(1, c)` means `c q^(1/2) = c v^-1`.
    pub fn from_q_half<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        Self::from_terms(terms.into_iter().map(|(k, c)| (-k, c)))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, k: i64) -> BigInt {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    /// Iterates `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    fn add_term(&mut self, k: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(k).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    /// The substitution `v -> v^-1`.
    pub fn bar(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(k, c)| (-k, c.clone())).collect(),
        }
    }

    pub fn is_bar_symmetric(&self) -> bool {
        self.coeffs.iter().all(|(k, c)| self.coeffs.get(&-k) == Some(c))
    }

    /// Terms with exponent `> 0`.
    pub fn positive_part(&self) -> Self {
        Self {
            coeffs: self.coeffs.range(1..).map(|(k, c)| (*k, c.clone())).collect(),
        }
    }

    /// Terms with exponent `<= 0`.
    pub fn nonpositive_part(&self) -> Self {
        Self {
            coeffs: self.coeffs.range(..=0).map(|(k, c)| (*k, c.clone())).collect(),
        }
    }

    /// The unique bar-symmetric polynomial agreeing with `self` in exponents `<= 0`.
    pub fn symmetrize_nonpositive(&self) -> Self {
        let low = self.nonpositive_part();
        let mut out = low.clone();
        for (k, c) in low.coeffs.range(..0) {
            out.add_term(-k, c.clone());
        }
        out
    }

    /// True when every coefficient is `>= 0`.
    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    /// Multiplies by `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(k, x)| (*k, x * c)).collect(),
        }
    }

    /// True when all exponents lie in `v Z[v]`, i.e. are strictly positive.
    pub fn in_v_zv(&self) -> bool {
        self.min_degree().is_none_or(|k| k > 0)
    }

    /// True when every exponent is congruent to `parity` modulo 2.
    pub fn has_parity(&self, parity: i64) -> bool {
        self.coeffs.keys().all(|k| (k - parity).rem_euclid(2) == 0)
    }

    /// Sum of all coefficients (evaluation at `v = 1`).
    pub fn eval_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    /// Exact division in `Z[v, v^-1]`; `None` when the quotient is not a
    /// Laurent polynomial with integer coefficients.
    pub fn div_exact(&self, divisor: &Laurent) -> Option<Laurent> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (dlo, dhi) = (divisor.min_degree()?, divisor.max_degree()?);
        let lead = &divisor.coeffs[&dhi];
        let mut rem = self.clone();
        let mut quot = Self::zero();
        // Long division from the top; stops once the remainder drops below
        // the lowest degree any quotient term could reach.
        let floor = self.min_degree()? - dlo;
        while let Some(top) = rem.max_degree() {
            let k = top - dhi;
            if k < floor {
                return None;
            }
            let (q, r) = rem.coeffs[&top].div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            let term = Self::monomial(q, k);
            rem -= &(divisor * &term);
            quot += &term;
        }
        Some(quot)
    }

    /// Reads the polynomial as `P(q)` with `q = v^-2` and nonnegative powers of
    /// `q`, returning coefficients indexed by the power of `q`.
    pub fn to_q_poly(&self) -> Option<QPoly> {
        let mut out = Vec::new();
        for (k, c) in &self.coeffs {
            if *k > 0 || k % 2 != 0 {
                return None;
            }
            let idx = (-k / 2) as usize;
            if out.len() <= idx {
                out.resize(idx + 1, BigInt::zero());
            }
            out[idx] = c.clone();
        }
        Some(QPoly(out))
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent({self})")
    }
}

/// Renders `c*v^k` terms in decreasing exponent order, e.g. `v^2 + 2 - 3*v^-1`.
impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.coeffs.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if *k == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if *k == 1 {
                    f.write_str("v")?;
                } else {
                    write!(f, "v^{k}")?;
                }
            }
        }
        Ok(())
    }
}

impl FromStr for Laurent {
    type Err = ParseLaurentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(ParseLaurentError::Empty);
        }
        // Split into signed terms; a '-' directly after '^' belongs to the exponent.
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        let mut prev: Option<char> = None;
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && prev != Some('^') {
                if !cur.is_empty() {
                    terms.push((neg, std::mem::take(&mut cur)));
                    neg = false;
                }
                if ch == '-' {
                    neg = !neg;
                }
            } else {
                cur.push(ch);
            }
            prev = Some(ch);
        }
        if cur.is_empty() {
            return Err(ParseLaurentError::BadTerm(compact));
        }
        terms.push((neg, cur));

        let mut out = Laurent::zero();
        for (neg, term) in terms {
            let (c, k) = parse_term(&term)?;
            out.add_term(k, if neg { -c } else { c });
        }
        Ok(out)
    }
}

fn parse_term(term: &str) -> Result<(BigInt, i64), ParseLaurentError> {
    let bad = || ParseLaurentError::BadTerm(term.to_string());
    let (coef, var) = match term.find('v') {
        None => return Ok((term.parse::<BigInt>().map_err(|_| bad())?, 0)),
        Some(pos) => (&term[..pos], &term[pos..]),
    };
    let c = match coef {
        "" => BigInt::one(),
        _ => coef
            .strip_suffix('*')
            .ok_or_else(bad)?
            .parse::<BigInt>()
            .map_err(|_| bad())?,
    };
    let k = match var {
        "v" => 1,
        _ => var
            .strip_prefix("v^")
            .ok_or_else(bad)?
            .parse::<i64>()
            .map_err(|_| bad())?,
    };
    Ok((c, k))
}

impl Serialize for Laurent {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Laurent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Laurent {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl Add<&Laurent> for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Laurent {
    type Output = Laurent;
    fn add(mut self, rhs: Laurent) -> Laurent {
        self += &rhs;
        self
    }
}

impl AddAssign<&Laurent> for Laurent {
    fn add_assign(&mut self, rhs: &Laurent) {
        for (k, c) in &rhs.coeffs {
            self.add_term(*k, c.clone());
        }
    }
}

impl Sub<&Laurent> for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Laurent {
    type Output = Laurent;
    fn sub(mut self, rhs: Laurent) -> Laurent {
        self -= &rhs;
        self
    }
}

impl SubAssign<&Laurent> for Laurent {
    fn sub_assign(&mut self, rhs: &Laurent) {
        for (k, c) in &rhs.coeffs {
            self.add_term(*k, -c.clone());
        }
    }
}

impl Neg for Laurent {
    type Output = Laurent;
    fn neg(mut self) -> Laurent {
        for c in self.coeffs.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        -self.clone()
    }
}

impl Mul<&Laurent> for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (a, x) in &self.coeffs {
            for (b, y) in &rhs.coeffs {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl Mul for Laurent {
    type Output = Laurent;
    fn mul(self, rhs: Laurent) -> Laurent {
        &self * &rhs
    }
}

/// A polynomial in `q` with nonnegative exponents; index `i` holds the
/// coefficient of `q^i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QPoly(pub Vec<BigInt>);

impl QPoly {
    pub fn one() -> Self {
        QPoly(vec![BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|c| !c.is_negative())
    }

    pub fn to_laurent(&self) -> Laurent {
        Laurent::from_q(self.0.iter().enumerate().map(|(i, c)| (i as i64, c.clone())))
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        f.write_str("q")?;
                    } else {
                        write!(f, "q^{i}")?;
                    }
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl Serialize for QPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn l(s: &str) -> Laurent {
        s.parse().unwrap()
    }

    #[test]
    fn multiplication_examples() {
        let a = l("v + v^-1");
        assert_eq!(&a * &a, l("v^2 + 2 + v^-2"));
        assert_eq!(&Laurent::one() * &a, a);
        assert_eq!(&l("v^-2 - 1") * &l("v^2"), l("1 - v^2"));
    }

    #[test]
    fn bar_examples() {
        assert_eq!(l("v^2 + v").bar(), l("v^-2 + v^-1"));
        assert_eq!(l("3").bar(), l("3"));
        assert_eq!(l("v + v^-1").bar(), l("v + v^-1"));
    }

    #[test]
    fn q_substitution() {
        assert_eq!(Laurent::from_q([(1, 1), (0, -1)]), l("v^-2 - 1"));
        assert_eq!(Laurent::from_q_half([(1, 1)]), l("v^-1"));
        assert!(Laurent::from_q::<_, i64>([]).is_zero());
    }

    #[test]
    fn symmetric_split() {
        assert!(l("v + v^-1").is_bar_symmetric());
        assert!(!l("v^3").is_bar_symmetric());
        let a = l("v^2 + 1");
        assert_eq!(a.positive_part(), l("v^2"));
        assert_eq!(a.nonpositive_part(), l("1"));
        assert_eq!(l("v^3 + 2 - v^-1").symmetrize_nonpositive(), l("-v + 2 - v^-1"));
    }

    #[test]
    fn rendering() {
        assert_eq!(l("v^2 + 2 + v^-2").to_string(), "v^2 + 2 + v^-2");
        assert_eq!(l("-3*v^-1 + v").to_string(), "v - 3*v^-1");
        assert_eq!(Laurent::zero().to_string(), "0");
        assert_eq!(l("-v").to_string(), "-v");
        assert_eq!(l("- - v").to_string(), "v");
    }

    #[test]
    fn parse_errors() {
        assert_eq!("".parse::<Laurent>(), Err(ParseLaurentError::Empty));
        assert!("v^".parse::<Laurent>().is_err());
        assert!("2v".parse::<Laurent>().is_err());
        assert!("1 +".parse::<Laurent>().is_err());
        assert!("x".parse::<Laurent>().is_err());
    }

    #[test]
    fn exact_division() {
        let p = l("1 + v^-2");
        let x = &p * &l("3*v^4 - v + 7*v^-3");
        assert_eq!(x.div_exact(&p), Some(l("3*v^4 - v + 7*v^-3")));
        assert_eq!(l("1").div_exact(&p), None);
        assert_eq!(l("2*v").div_exact(&l("2")), Some(l("v")));
        assert_eq!(l("v").div_exact(&l("2")), None);
        assert_eq!(Laurent::zero().div_exact(&p), Some(Laurent::zero()));
    }

    #[test]
    fn q_poly_view() {
        assert_eq!(l("1 + 2*v^-4").to_q_poly().unwrap().to_string(), "1 + 2*q^2");
        assert!(l("v^-1").to_q_poly().is_none());
        assert!(l("v^2").to_q_poly().is_none());
    }

    fn arb_laurent() -> impl Strategy<Value = Laurent> {
        proptest::collection::vec((-6i64..=6, -20i64..=20), 0..6).prop_map(Laurent::from_terms)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn ring_axioms(a in arb_laurent(), b in arb_laurent(), c in arb_laurent()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
        }

        #[test]
        fn bar_is_involutive_automorphism(a in arb_laurent(), b in arb_laurent()) {
            prop_assert_eq!(a.bar().bar(), a.clone());
            prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
        }

        #[test]
        fn from_q_is_multiplicative(
            p in proptest::collection::vec((-4i64..=4, -9i64..=9), 0..5),
            r in proptest::collection::vec((-4i64..=4, -9i64..=9), 0..5),
        ) {
            let mut prod: Vec<(i64, i64)> = Vec::new();
            for (i, x) in &p {
                for (j, y) in &r {
                    prod.push((i + j, x * y));
                }
            }
            prop_assert_eq!(
                &Laurent::from_q(p.clone()) * &Laurent::from_q(r.clone()),
                Laurent::from_q(prod)
            );
        }

        #[test]
        fn render_parse_round_trip(a in arb_laurent()) {
            prop_assert_eq!(a.to_string().parse::<Laurent>().unwrap(), a);
        }

        #[test]
        fn parts_recombine(a in arb_laurent()) {
            prop_assert_eq!(&a.positive_part() + &a.nonpositive_part(), a.clone());
            prop_assert!(a.symmetrize_nonpositive().is_bar_symmetric());
        }
    }
}
