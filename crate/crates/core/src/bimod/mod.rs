//! The algebraic side: polynomial rings `R` and `P`, the restriction
//! `phi: R -> P`, Demazure operators, standard bimodules and Bott-Samelson
//! factors, all over exact rationals.
//!
//! Grading: variables sit in degree 2 and `M(n)^i = M^(n+i)`, so shifting
//! by `(1)` lowers every degree by one and multiplies the graded character
//! `sum_i dim(M^i) v^i` by `v^-1`. Degree bounds `N` count this cohomological
//! degree, so a bound of 8 covers monomials of polynomial degree 4.

mod module;
mod poly;
mod report;
mod series;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use module::{decompose_bs_squared, tensor_bs, BsSquaredReport, FreeBimodule, ModuleKind};
pub use poly::{rat, Poly};
pub use report::{verify_rings, CheckResult, ReportConfig, VerificationReport, Witness, GRADING_CONVENTION};
pub use series::equivariant_poincare;

#[derive(Debug, Error)]
pub enum BimodError {
    #[error("ring spec is invalid: {0}")]
    BadSpec(String),
    #[error("unknown built-in ring spec `{0}` (known: a1, a2, a1xa1-diag)")]
    UnknownBuiltin(String),
    #[error("generator index {0} out of range")]
    GeneratorOutOfRange(usize),
    #[error("verification failed: {0}")]
    VerificationFailure(Box<Witness>),
    #[error("bad series input: {0}")]
    BadSeries(String),
    #[error("malformed ring spec JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// A generator of `W_K`: its word in `W` and its matrix on the variables of `P`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WkGenerator {
    pub word: Vec<usize>,
    pub matrix: Vec<Vec<i64>>,
}

/// The JSON ring description. Matrix rows give the image of one variable
/// as coefficients on the variables of the target ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSpec {
    pub name: String,
    pub r_vars: Vec<String>,
    /// One matrix per simple reflection, acting on `R`.
    pub reflections: Vec<Vec<Vec<i64>>>,
    /// The simple roots `alpha_s` in `R`.
    pub roots: Vec<Vec<i64>>,
    pub p_vars: Vec<String>,
    /// Row `i` is `phi` of the `i`-th variable of `R`.
    pub phi: Vec<Vec<i64>>,
    #[serde(default)]
    pub wk: Vec<WkGenerator>,
}

const A1: &str = r#"{
  "name": "a1",
  "r_vars": ["a"],
  "reflections": [[[-1]]],
  "roots": [[1]],
  "p_vars": ["a"],
  "phi": [[1]],
  "wk": []
}"#;

const A2: &str = r#"{
  "name": "a2",
  "r_vars": ["a1", "a2"],
  "reflections": [[[-1, 0], [1, 1]], [[1, 1], [0, -1]]],
  "roots": [[1, 0], [0, 1]],
  "p_vars": ["a1", "a2"],
  "phi": [[1, 0], [0, 1]],
  "wk": []
}"#;

const A1XA1_DIAG: &str = r#"{
  "name": "a1xa1-diag",
  "r_vars": ["a1", "a2"],
  "reflections": [[[-1, 0], [0, 1]], [[1, 0], [0, -1]]],
  "roots": [[1, 0], [0, 1]],
  "p_vars": ["t"],
  "phi": [[1], [1]],
  "wk": [{ "word": [0, 1], "matrix": [[-1]] }]
}"#;

pub const BUILTIN_RINGS: [&str; 3] = ["a1", "a2", "a1xa1-diag"];

impl RingSpec {
    pub fn from_json(text: &str) -> Result<Self, BimodError> {
        Ok(serde_json::from_str(text)?)
    }

    /// `a1`: one variable, `P = R`, trivial `W_K`. `a2`: the reflection
    /// representation of type `A2` on the simple roots. `a1xa1-diag`:
    /// `R = Q[a1, a2]` restricted to the diagonal `P = Q[t]`, with `W_K`
    /// generated by `s1 s2` acting as `t -> -t`.
    pub fn builtin(name: &str) -> Result<Self, BimodError> {
        let text = match name {
            "a1" => A1,
            "a2" => A2,
            "a1xa1-diag" => A1XA1_DIAG,
            other => return Err(BimodError::UnknownBuiltin(other.to_string())),
        };
        Self::from_json(text)
    }
}

/// A checked ring spec with the maps precomputed as polynomials.
#[derive(Clone, Debug)]
pub struct Rings {
    spec: RingSpec,
    refl: Vec<Vec<Poly>>,
    roots: Vec<Poly>,
    phi: Vec<Poly>,
    wk_p: Vec<Vec<Poly>>,
}

fn linear_images(m: &[Vec<i64>], rows: usize, cols: usize, what: &str) -> Result<Vec<Poly>, BimodError> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(BimodError::BadSpec(format!("{what} must be {rows}x{cols}")));
    }
    Ok(m.iter().map(|r| Poly::linear(r)).collect())
}

impl Rings {
    pub fn new(spec: RingSpec) -> Result<Self, BimodError> {
        let (nr, np) = (spec.r_vars.len(), spec.p_vars.len());
        if spec.reflections.len() != spec.roots.len() {
            return Err(BimodError::BadSpec("one root per reflection".into()));
        }
        let refl = spec
            .reflections
            .iter()
            .enumerate()
            .map(|(s, m)| linear_images(m, nr, nr, &format!("reflection {s}")))
            .collect::<Result<Vec<_>, _>>()?;
        let roots = spec
            .roots
            .iter()
            .map(|r| {
                if r.len() != nr || r.iter().all(|c| *c == 0) {
                    return Err(BimodError::BadSpec("roots must be nonzero vectors over r_vars".into()));
                }
                Ok(Poly::linear(r))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let phi = linear_images(&spec.phi, nr, np, "phi")?;
        let wk_p = spec
            .wk
            .iter()
            .map(|g| linear_images(&g.matrix, np, np, "W_K matrix"))
            .collect::<Result<Vec<_>, _>>()?;
        let rings = Self {
            spec,
            refl,
            roots,
            phi,
            wk_p,
        };
        rings.check()?;
        Ok(rings)
    }

    pub fn builtin(name: &str) -> Result<Self, BimodError> {
        Self::new(RingSpec::builtin(name)?)
    }

    fn check(&self) -> Result<(), BimodError> {
        for s in 0..self.rank() {
            let a = &self.roots[s];
            if self.reflect(s, a) != -a {
                return Err(BimodError::BadSpec(format!("reflection {s} does not negate its root")));
            }
            for i in 0..self.r_vars() {
                let x = Poly::var(self.r_vars(), i);
                if self.reflect(s, &self.reflect(s, &x)) != x {
                    return Err(BimodError::BadSpec(format!("reflection {s} is not an involution")));
                }
            }
        }
        for (k, g) in self.spec.wk.iter().enumerate() {
            if let Some(&s) = g.word.iter().find(|&&s| s >= self.rank()) {
                return Err(BimodError::GeneratorOutOfRange(s));
            }
            for i in 0..self.p_vars() {
                let t = Poly::var(self.p_vars(), i);
                let back = self.wk_apply(k, &self.wk_apply(k, &t));
                if back != t {
                    return Err(BimodError::BadSpec(format!(
                        "W_K generator {k} is not an involution on P"
                    )));
                }
            }
            for i in 0..self.r_vars() {
                let x = Poly::var(self.r_vars(), i);
                if self.phi(&self.act_word(&g.word, &x)) != self.wk_apply(k, &self.phi(&x)) {
                    return Err(BimodError::BadSpec(format!(
                        "phi does not intertwine W_K generator {k}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn rank(&self) -> usize {
        self.refl.len()
    }

    pub fn r_vars(&self) -> usize {
        self.spec.r_vars.len()
    }

    pub fn p_vars(&self) -> usize {
        self.spec.p_vars.len()
    }

    pub fn root(&self, s: usize) -> &Poly {
        &self.roots[s]
    }

    pub fn render_r(&self, f: &Poly) -> String {
        f.render(&self.spec.r_vars)
    }

    pub fn render_p(&self, f: &Poly) -> String {
        f.render(&self.spec.p_vars)
    }

    /// `s(f)` for `f` in `R`.
    pub fn reflect(&self, s: usize, f: &Poly) -> Poly {
        f.substitute(&self.refl[s], self.r_vars())
    }

    /// `x(f)` where `x = s_1 ... s_k` is given by the word `[s_1, ..., s_k]`.
    pub fn act_word(&self, word: &[usize], f: &Poly) -> Poly {
        word.iter().rev().fold(f.clone(), |g, &s| self.reflect(s, &g))
    }

    pub fn phi(&self, f: &Poly) -> Poly {
        f.substitute(&self.phi, self.p_vars())
    }

    fn wk_apply(&self, k: usize, p: &Poly) -> Poly {
        p.substitute(&self.wk_p[k], self.p_vars())
    }

    /// Action on `P` of `w = g_1 ... g_k`, given by `W_K` generator indices.
    pub fn wk_act(&self, w: &[usize], p: &Poly) -> Poly {
        w.iter().rev().fold(p.clone(), |q, &k| self.wk_apply(k, &q))
    }

    /// The word in `W` of `w = g_1 ... g_k`.
    pub fn wk_word(&self, w: &[usize]) -> Vec<usize> {
        w.iter().flat_map(|&k| self.spec.wk[k].word.iter().copied()).collect()
    }

    pub fn wk_generators(&self) -> usize {
        self.spec.wk.len()
    }

    /// All elements of `W_K` as words in its generators, found by closing
    /// under multiplication on the variables of `P`.
    pub fn wk_elements(&self) -> Vec<Vec<usize>> {
        let vars: Vec<Poly> = (0..self.p_vars()).map(|i| Poly::var(self.p_vars(), i)).collect();
        let image = |w: &[usize]| -> Vec<Poly> { vars.iter().map(|x| self.wk_act(w, x)).collect() };
        let mut seen = vec![image(&[])];
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        let mut i = 0;
        while i < words.len() {
            for k in 0..self.wk_generators() {
                let mut w = words[i].clone();
                w.push(k);
                let img = image(&w);
                if !seen.contains(&img) {
                    seen.push(img);
                    words.push(w);
                }
            }
            i += 1;
        }
        words
    }

    /// The Reynolds average of `p` over `W_K`; it lies in `P^{W_K}`.
    pub fn wk_average(&self, p: &Poly) -> Poly {
        let elems = self.wk_elements();
        let mut sum = Poly::zero(self.p_vars());
        for w in &elems {
            sum = &sum + &self.wk_act(w, p);
        }
        sum.scale(&BigRational::new(1.into(), (elems.len() as i64).into()))
    }

    fn check_gen(&self, s: usize) -> Result<(), BimodError> {
        if s >= self.rank() {
            return Err(BimodError::GeneratorOutOfRange(s));
        }
        Ok(())
    }

    /// `(f - s f) / alpha_s`, always an exact division.
    pub fn demazure(&self, f: &Poly, s: usize) -> Result<Poly, BimodError> {
        self.check_gen(s)?;
        let diff = f - &self.reflect(s, f);
        Ok(diff
            .div_linear(&self.roots[s])
            .expect("f - s(f) is divisible by alpha_s"))
    }

    /// `g = g0 + g1 * alpha_s` with `g0, g1` both `s`-invariant.
    pub fn split(&self, g: &Poly, s: usize) -> Result<(Poly, Poly), BimodError> {
        let g1 = self.demazure(g, s)?.scale(&BigRational::new(1.into(), 2.into()));
        let g0 = g - &(&g1 * &self.roots[s]);
        Ok((g0, g1))
    }

    /// Monomials of `R` of cohomological degree at most `n`.
    pub fn r_monomials(&self, n: u32) -> Vec<Poly> {
        Poly::monomials_up_to(self.r_vars(), n / 2)
    }

    pub fn p_monomials(&self, n: u32) -> Vec<Poly> {
        Poly::monomials_up_to(self.p_vars(), n / 2)
    }
}

/// Checks that `p -> w^-1 p` intertwines `P_{wx}` and `P_x` on monomials of
/// degree at most `n`. `w` is a word in the `W_K` generators, `x` a word in `W`.
pub fn std_iso_check(rings: &Rings, w: &[usize], x: &[usize], n: u32) -> Result<(), Witness> {
    if let Some(&k) = w.iter().find(|&&k| k >= rings.wk_generators()) {
        return Err(Witness::new("w", format!("W_K generator {k} out of range"), "", ""));
    }
    if let Some(&s) = x.iter().find(|&&s| s >= rings.rank()) {
        return Err(Witness::new("x", format!("generator {s} out of range"), "", ""));
    }
    let w_inv: Vec<usize> = w.iter().rev().copied().collect();
    let wx: Vec<usize> = rings.wk_word(w).into_iter().chain(x.iter().copied()).collect();
    let ps = rings.p_monomials(n);
    for f in ps.iter().map(|m| rings.wk_average(m)).filter(|f| !f.is_zero()) {
        for p in &ps {
            let lhs = rings.wk_act(&w_inv, &(&f * p));
            let rhs = &f * &rings.wk_act(&w_inv, p);
            if lhs != rhs {
                return Err(Witness::new(
                    "left action",
                    format!("f = {}, p = {}", rings.render_p(&f), rings.render_p(p)),
                    rings.render_p(&rhs),
                    rings.render_p(&lhs),
                ));
            }
        }
    }
    for g in rings.r_monomials(n) {
        let phi_wxg = rings.phi(&rings.act_word(&wx, &g));
        let phi_xg = rings.phi(&rings.act_word(x, &g));
        for p in &ps {
            let lhs = rings.wk_act(&w_inv, &(p * &phi_wxg));
            let rhs = &rings.wk_act(&w_inv, p) * &phi_xg;
            if lhs != rhs {
                return Err(Witness::new(
                    "right action",
                    format!("p = {}, g = {}", rings.render_p(p), rings.render_r(&g)),
                    rings.render_p(&rhs),
                    rings.render_p(&lhs),
                ));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests;
