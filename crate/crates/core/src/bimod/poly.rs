use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A polynomial with rational coefficients in a fixed number of variables,
/// stored as a map from exponent vectors to nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn monomial(exps: Vec<u32>) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, BigRational::one());
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e)
    }

    /// `sum_i coeffs[i] * x_i`
    pub fn linear(coeffs: &[i64]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, &c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, rat(c));
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, exps: Vec<u32>, c: BigRational) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(self.nvars);
        if !c.is_zero() {
            for (e, a) in &self.terms {
                out.terms.insert(e.clone(), a * c);
            }
        }
        out
    }

    /// Largest total degree of a term, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// True for zero and for polynomials whose terms share one total degree.
    pub fn is_homogeneous_of(&self, deg: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == deg)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.nvars), |acc, _| &acc * self)
    }

    /// Substitutes `images[i]` for the `i`-th variable. The result lives in
    /// the ring of the images, so this also maps between rings.
    pub fn substitute(&self, images: &[Poly], target_vars: usize) -> Self {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let mut out = Self::zero(target_vars);
        for (e, c) in &self.terms {
            let mut t = Self::constant(target_vars, c.clone());
            for (img, &k) in images.iter().zip(e) {
                if k > 0 {
                    t = &t * &img.pow(k);
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Exact quotient by a nonzero linear form, or `None` if it leaves a remainder.
    pub fn div_linear(&self, l: &Poly) -> Option<Self> {
        let (k, lead) = (0..l.nvars).find_map(|i| {
            let mut e = vec![0; l.nvars];
            e[i] = 1;
            let c = l.coeff(&e);
            (!c.is_zero()).then_some((i, c))
        })?;
        // Lex order with x_k first, so the leading term of `l` is `lead * x_k`.
        let key = |e: &Vec<u32>| {
            let mut v = vec![e[k]];
            v.extend(e.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, x)| *x));
            v
        };
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((e, c)) = rem
            .terms
            .iter()
            .max_by_key(|(e, _)| key(e))
            .map(|(e, c)| (e.clone(), c.clone()))
        {
            if e[k] == 0 {
                return None;
            }
            let mut qe = e;
            qe[k] -= 1;
            let term = {
                let mut t = Self::zero(self.nvars);
                t.add_term(qe, c / &lead);
                t
            };
            rem = &rem - &(&term * l);
            quot = &quot + &term;
        }
        Some(quot)
    }

    /// All monomials of total degree at most `deg`.
    pub fn monomials_up_to(nvars: usize, deg: u32) -> Vec<Poly> {
        let mut out = Vec::new();
        let mut e = vec![0u32; nvars];
        fn rec(i: usize, left: u32, e: &mut Vec<u32>, out: &mut Vec<Poly>) {
            if i == e.len() {
                out.push(Poly::monomial(e.clone()));
                return;
            }
            for k in 0..=left {
                e[i] = k;
                rec(i + 1, left - k, e, out);
            }
            e[i] = 0;
        }
        rec(0, deg, &mut e, &mut out);
        out.sort_by_key(|m| m.degree());
        out
    }

    /// Renders with the given variable names, highest degree first.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms: Vec<(&Vec<u32>, &BigRational)> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        let mut out = String::new();
        for (idx, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, k)| **k > 0)
                .map(|(i, k)| {
                    let n = names.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
                    if *k == 1 {
                        n
                    } else {
                        format!("{n}^{k}")
                    }
                })
                .collect();
            if vars.is_empty() {
                let _ = write!(out, "{a}");
            } else if a.is_one() {
                out.push_str(&vars.join("*"));
            } else {
                let _ = write!(out, "{a}*{}", vars.join("*"));
            }
        }
        out
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&rat(-1))
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "polynomials from different rings");
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}
