use std::fmt;

use serde::Serialize;

use super::{decompose_bs_squared, std_iso_check, tensor_bs, FreeBimodule, Rings};
use crate::laurent::Laurent;

pub const GRADING_CONVENTION: &str =
    "generators in degree 2; M(n)^i = M^(n+i); grchar(M) = sum_i dim(M^i) v^i, so grchar(M(1)) = v^-1 grchar(M)";

/// Where a verification failed and on which input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub check: String,
    pub input: String,
    pub expected: String,
    pub actual: String,
}

impl Witness {
    pub fn new(
        check: impl Into<String>,
        input: impl Into<String>,
        expected: impl Into<String>,
        actual: impl Into<String>,
    ) -> Self {
        Self {
            check: check.into(),
            input: input.into(),
            expected: expected.into(),
            actual: actual.into(),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}", self.check, self.input)?;
        if !self.expected.is_empty() || !self.actual.is_empty() {
            write!(f, " (expected {}, got {})", self.expected, self.actual)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl CheckResult {
    fn from(name: String, outcome: Result<String, Witness>) -> Self {
        match outcome {
            Ok(detail) => Self {
                name,
                passed: true,
                detail,
                witness: None,
            },
            Err(w) => Self {
                name,
                passed: false,
                detail: w.to_string(),
                witness: Some(w),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportConfig {
    pub ring: String,
    pub degree_bound: u32,
    pub grading: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub config: ReportConfig,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn demazure_checks(rings: &Rings, s: usize, n: u32) -> Result<String, Witness> {
    let monos = rings.r_monomials(n);
    let r = |f: &super::Poly| rings.render_r(f);
    let bad = |what: &str, f: &super::Poly| Witness::new(what, format!("s{}, f = {}", s + 1, r(f)), "", "");
    for f in &monos {
        let d = rings.demazure(f, s).expect("generator in range");
        if rings.reflect(s, &d) != d {
            return Err(bad("Demazure image is s-invariant", f));
        }
        if !rings.demazure(&d, s).expect("generator in range").is_zero() {
            return Err(bad("Demazure operator squares to zero", f));
        }
        let (g0, g1) = rings.split(f, s).expect("generator in range");
        if rings.reflect(s, &g0) != g0 || rings.reflect(s, &g1) != g1 || &g0 + &(&g1 * rings.root(s)) != *f {
            return Err(bad("splitting g = g0 + g1 alpha_s", f));
        }
    }
    let mut pairs = 0;
    for f in &monos {
        for g in &monos {
            if 2 * (f.degree().unwrap_or(0) + g.degree().unwrap_or(0)) > n {
                continue;
            }
            pairs += 1;
            let lhs = rings.demazure(&(f * g), s).expect("generator in range");
            let rhs = &(&rings.demazure(f, s).expect("in range") * g)
                + &(&rings.reflect(s, f) * &rings.demazure(g, s).expect("in range"));
            if lhs != rhs {
                return Err(Witness::new(
                    "twisted Leibniz rule",
                    format!("s{}, f = {}, g = {}", s + 1, r(f), r(g)),
                    r(&rhs),
                    r(&lhs),
                ));
            }
        }
    }
    Ok(format!("{} monomials, {pairs} Leibniz pairs", monos.len()))
}

fn character_check(rings: &Rings, m: &FreeBimodule, s: usize, n: u32) -> Result<String, Witness> {
    let t = tensor_bs(rings, m, s).expect("generator in range");
    t.verify(rings, n)?;
    let want = &Laurent::quantum_two() * &m.grchar();
    if t.grchar() != want {
        return Err(Witness::new(
            "graded character",
            t.label(),
            want.to_string(),
            t.grchar().to_string(),
        ));
    }
    Ok(format!("grchar({}) = {}", t.label(), t.grchar()))
}

/// Runs every check for a ring spec up to degree bound `n`.
pub fn verify_rings(rings: &Rings, n: u32) -> VerificationReport {
    let mut checks = Vec::new();
    let p_e = FreeBimodule::standard(rings, &[]).expect("identity");
    for s in 0..rings.rank() {
        let tag = format!("s{}", s + 1);
        checks.push(CheckResult::from(
            format!("demazure {tag}"),
            demazure_checks(rings, s, n),
        ));
        let p_s = FreeBimodule::standard(rings, &[s]).expect("generator in range");
        for m in [&p_e, &p_s] {
            checks.push(CheckResult::from(
                format!("tensor {} with B_{tag}", m.label()),
                character_check(rings, m, s, n),
            ));
        }
        let same = {
            let a = tensor_bs(rings, &p_e, s).expect("in range");
            let b = tensor_bs(rings, &p_s, s).expect("in range");
            let witness = rings
                .r_monomials(n)
                .into_iter()
                .find(|g| a.right_matrix(rings, g) != b.right_matrix(rings, g));
            match witness {
                None if a.degrees == b.degrees => Ok(format!("{} = {}", b.label(), a.label())),
                None => Err(Witness::new(
                    "degrees",
                    b.label(),
                    format!("{:?}", a.degrees),
                    format!("{:?}", b.degrees),
                )),
                Some(g) => Err(Witness::new(
                    "right action",
                    format!("g = {}", rings.render_r(&g)),
                    a.label(),
                    b.label(),
                )),
            }
        };
        checks.push(CheckResult::from(format!("P_{tag} (x) B_{tag} = B_{tag}"), same));
        let split = decompose_bs_squared(rings, s, n).map(|r| {
            format!(
                "B_{tag} (x) B_{tag} = B_{tag}(1) + B_{tag}(-1), degrees {:?} + {:?}, grchar {}",
                r.first_degrees, r.second_degrees, r.grchar
            )
        });
        checks.push(CheckResult::from(format!("decompose B_{tag} squared"), split));
        for t in (0..rings.rank()).filter(|&t| t != s) {
            let bs = tensor_bs(rings, &p_e, s).expect("in range");
            checks.push(CheckResult::from(
                format!("tensor {} with B_s{}", bs.label(), t + 1),
                character_check(rings, &bs, t, n),
            ));
        }
    }
    let mut xs: Vec<Vec<usize>> = vec![vec![]];
    xs.extend((0..rings.rank()).map(|s| vec![s]));
    for w in rings.wk_elements() {
        for x in &xs {
            let wname = if w.is_empty() {
                "e".to_string()
            } else {
                w.iter().map(|k| format!("g{}", k + 1)).collect()
            };
            let xname = if x.is_empty() {
                "e".to_string()
            } else {
                x.iter().map(|s| format!("s{}", s + 1)).collect()
            };
            let outcome = std_iso_check(rings, &w, x, n).map(|()| "p -> w^-1 p intertwines".to_string());
            checks.push(CheckResult::from(
                format!("P_(w x) = P_x for w = {wname}, x = {xname}"),
                outcome,
            ));
        }
    }
    VerificationReport {
        config: ReportConfig {
            ring: rings.name().to_string(),
            degree_bound: n,
            grading: GRADING_CONVENTION,
        },
        checks,
    }
}
