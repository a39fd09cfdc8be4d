//! Bimodules that are free of finite rank as left modules over `P`.
//!
//! A module is a list of basis degrees together with a rule giving, for any
//! `g` in `R`, the matrix `A_g` of right multiplication by `g` in that basis
//! (row convention: `b_i . g = sum_k A_g[i][k] b_k`).

use super::report::Witness;
use super::{Poly, Rings};
use crate::laurent::Laurent;

type Matrix = Vec<Vec<Poly>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleKind {
    /// `P_x`: the ring `P` with `p . g = p phi(x g)`.
    Standard { x: Vec<usize> },
    /// `M (x)_R B_s`, with basis `{b_i (x) 1} ++ {b_i (x) alpha_s}`.
    BsFactor { inner: Box<FreeBimodule>, s: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeBimodule {
    pub degrees: Vec<i64>,
    pub kind: ModuleKind,
}

impl FreeBimodule {
    pub fn standard(rings: &Rings, x: &[usize]) -> Option<Self> {
        x.iter().all(|&s| s < rings.rank()).then(|| Self {
            degrees: vec![0],
            kind: ModuleKind::Standard { x: x.to_vec() },
        })
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    /// A label such as `P_s1 (x) B_s1 (x) B_s2`.
    pub fn label(&self) -> String {
        match &self.kind {
            ModuleKind::Standard { x } if x.is_empty() => "P_e".into(),
            ModuleKind::Standard { x } => {
                let w: String = x.iter().map(|s| format!("s{}", s + 1)).collect();
                format!("P_{w}")
            }
            ModuleKind::BsFactor { inner, s } => format!("{} (x) B_s{}", inner.label(), s + 1),
        }
    }

    /// Graded rank `sum_i v^deg(b_i)`; the graded character is this times
    /// the Hilbert series of `P`.
    pub fn grchar(&self) -> Laurent {
        let mut out = Laurent::zero();
        for &d in &self.degrees {
            out += &Laurent::v_pow(d);
        }
        out
    }

    pub fn right_matrix(&self, rings: &Rings, g: &Poly) -> Matrix {
        match &self.kind {
            ModuleKind::Standard { x } => vec![vec![rings.phi(&rings.act_word(x, g))]],
            ModuleKind::BsFactor { inner, s } => {
                let (g0, g1) = rings.split(g, *s).expect("generator checked at construction");
                let a = rings.root(*s);
                let a2g1 = &(a * a) * &g1;
                let m0 = inner.right_matrix(rings, &g0);
                let m1 = inner.right_matrix(rings, &g1);
                let m2 = inner.right_matrix(rings, &a2g1);
                let n = inner.rank();
                let mut out = vec![vec![Poly::zero(rings.p_vars()); 2 * n]; 2 * n];
                for i in 0..n {
                    for k in 0..n {
                        out[i][k] = m0[i][k].clone();
                        out[i][n + k] = m1[i][k].clone();
                        out[n + i][k] = m2[i][k].clone();
                        out[n + i][n + k] = m0[i][k].clone();
                    }
                }
                out
            }
        }
    }

    /// Checks on monomials up to degree `n` that the right action is
    /// associative (`A_gh = A_g A_h`) and respects the grading.
    pub fn verify(&self, rings: &Rings, n: u32) -> Result<(), Witness> {
        let monos = rings.r_monomials(n);
        let np = rings.p_vars();
        for g in &monos {
            let ag = self.right_matrix(rings, g);
            let dg = 2 * g.degree().unwrap_or(0) as i64;
            for (i, row) in ag.iter().enumerate() {
                for (k, entry) in row.iter().enumerate() {
                    let want = self.degrees[i] + dg - self.degrees[k];
                    let ok =
                        entry.is_zero() || (want >= 0 && want % 2 == 0 && entry.is_homogeneous_of((want / 2) as u32));
                    if !ok {
                        return Err(Witness::new(
                            "grading",
                            format!("{}: g = {}, entry ({i}, {k})", self.label(), rings.render_r(g)),
                            format!("homogeneous of degree {want}"),
                            rings.render_p(entry),
                        ));
                    }
                }
            }
            for h in &monos {
                if 2 * (g.degree().unwrap_or(0) + h.degree().unwrap_or(0)) > n {
                    continue;
                }
                let lhs = self.right_matrix(rings, &(g * h));
                let rhs = mat_mul(&ag, &self.right_matrix(rings, h), np);
                if lhs != rhs {
                    return Err(Witness::new(
                        "associativity",
                        format!("{}: g = {}, h = {}", self.label(), rings.render_r(g), rings.render_r(h)),
                        "A_g A_h",
                        "A_gh differs",
                    ));
                }
            }
        }
        Ok(())
    }
}

fn mat_mul(a: &Matrix, b: &Matrix, nvars: usize) -> Matrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![Poly::zero(nvars); m]; n];
    for i in 0..n {
        for k in 0..b.len() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] = &out[i][j] + &(&a[i][k] * &b[k][j]);
            }
        }
    }
    out
}

/// `M (x)_R B_s`: rank doubles, and the basis `b (x) 1`, `b (x) alpha_s`
/// lands in degrees `deg b - 1` and `deg b + 1` after the shift by `(1)`.
pub fn tensor_bs(rings: &Rings, m: &FreeBimodule, s: usize) -> Option<FreeBimodule> {
    if s >= rings.rank() {
        return None;
    }
    let mut degrees: Vec<i64> = m.degrees.iter().map(|d| d - 1).collect();
    degrees.extend(m.degrees.iter().map(|d| d + 1));
    Some(FreeBimodule {
        degrees,
        kind: ModuleKind::BsFactor {
            inner: Box::new(m.clone()),
            s,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BsSquaredReport {
    /// Basis indices of `B_s (x) B_s` with middle slot `1`, forming `B_s(1)`.
    pub first: Vec<usize>,
    /// Basis indices with middle slot `alpha_s`, forming `B_s(-1)`.
    pub second: Vec<usize>,
    pub first_degrees: Vec<i64>,
    pub second_degrees: Vec<i64>,
    pub grchar: Laurent,
}

/// Splits `B_s (x) B_s` along `R = R^s + R^s alpha_s` in the middle slot
/// and checks the pieces against `B_s(1)` and `B_s(-1)` on monomials of
/// degree at most `n`.
pub fn decompose_bs_squared(rings: &Rings, s: usize, n: u32) -> Result<BsSquaredReport, Witness> {
    let fail = |what: &str, detail: String| Witness::new(what, detail, "", "");
    let p_e = FreeBimodule::standard(rings, &[]).expect("identity");
    let bs = tensor_bs(rings, &p_e, s).ok_or_else(|| fail("generator", format!("s{} out of range", s + 1)))?;
    let bss = tensor_bs(rings, &bs, s).expect("generator already checked");
    // Basis order of bss: (1|1, a|1, 1|a, a|a), writing middle|last.
    let first = vec![0, 2];
    let second = vec![1, 3];
    let np = rings.p_vars();
    let proj = |keep: &[usize]| -> Matrix {
        (0..4)
            .map(|i| {
                (0..4)
                    .map(|k| {
                        if i == k && keep.contains(&i) {
                            Poly::one(np)
                        } else {
                            Poly::zero(np)
                        }
                    })
                    .collect()
            })
            .collect()
    };
    let (p1, p2) = (proj(&first), proj(&second));
    let id = proj(&[0, 1, 2, 3]);
    let sum: Matrix = p1
        .iter()
        .zip(&p2)
        .map(|(r1, r2)| r1.iter().zip(r2).map(|(a, b)| a + b).collect())
        .collect();
    if sum != id {
        return Err(fail("p1 + p2 = id", String::new()));
    }
    for (name, p) in [("p1", &p1), ("p2", &p2)] {
        if mat_mul(p, p, np) != *p {
            return Err(fail("idempotent", name.into()));
        }
    }
    if mat_mul(&p1, &p2, np) != proj(&[]) {
        return Err(fail("orthogonal", "p1 p2".into()));
    }
    for g in rings.r_monomials(n) {
        let ag = bss.right_matrix(rings, &g);
        let agb = bs.right_matrix(rings, &g);
        for (name, p, idx) in [("p1", &p1, &first), ("p2", &p2, &second)] {
            if mat_mul(p, &ag, np) != mat_mul(&ag, p, np) {
                return Err(Witness::new(
                    "projection is a bimodule map",
                    format!("{name}, g = {}", rings.render_r(&g)),
                    "p A_g = A_g p",
                    "differs",
                ));
            }
            let restricted: Matrix = idx
                .iter()
                .map(|&i| idx.iter().map(|&k| ag[i][k].clone()).collect())
                .collect();
            if restricted != agb {
                return Err(Witness::new(
                    "image matches B_s",
                    format!("{name}, g = {}", rings.render_r(&g)),
                    "right action of B_s",
                    "differs",
                ));
            }
        }
    }
    bss.verify(rings, n)?;
    let degs = |idx: &[usize]| idx.iter().map(|&i| bss.degrees[i]).collect::<Vec<_>>();
    let (first_degrees, second_degrees) = (degs(&first), degs(&second));
    let shifted = |k: i64| bs.degrees.iter().map(|d| d + k).collect::<Vec<_>>();
    if first_degrees != shifted(-1) || second_degrees != shifted(1) {
        return Err(fail("shifts", format!("{first_degrees:?} / {second_degrees:?}")));
    }
    Ok(BsSquaredReport {
        first,
        second,
        first_degrees,
        second_degrees,
        grchar: bss.grchar(),
    })
}
