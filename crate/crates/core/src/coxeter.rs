//! Coxeter systems: elements, length, Bruhat order, diagram involutions,
//! twisted-fixed elements `W^theta` and right-coset representatives.
//!
//! Groups whose Coxeter labels all lie in `{2, 3, 4, 6}` are realised by an
//! integral root system, and an element is identified with the permutation
//! it induces on the (finite) set of roots. Everything else falls back to
//! braid-move normalisation of words. In both cases an element is stored as
//! its ShortLex-minimal reduced word, which is a canonical form.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use thiserror::Error;

use crate::laurent::Laurent;

/// Marker for `m_st = infinity` in a Coxeter matrix.
pub const INFINITY: u32 = 0;

const ROOT_CAP: usize = 20_000;
const ENUMERATION_CAP: usize = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoxeterError {
    #[error("unknown Cartan type `{0}`")]
    UnknownCartanType(String),
    #[error("invalid Coxeter matrix: {0}")]
    InvalidMatrix(String),
    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },
    #[error("element belongs to a different Coxeter system")]
    ForeignElement,
    #[error("operation needs a finite group")]
    InfiniteGroup,
    #[error("invalid involution: {0}")]
    InvalidInvolution(String),
    #[error("subgroup generator {generator} is not fixed by theta")]
    SubgroupNotThetaFixed { generator: usize },
    #[error("malformed word `{0}`")]
    BadWord(String),
}

/// An element of a Coxeter group, stored as its ShortLex-minimal reduced word.
///
/// Ordering is ShortLex (length, then lexicographic on the canonical word).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElt {
    word: Vec<u8>,
    system: u64,
}

impl GroupElt {
    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    /// Reduced word as generator indices.
    pub fn indices(&self) -> Vec<usize> {
        self.word.iter().map(|&s| s as usize).collect()
    }
}

impl Ord for GroupElt {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.word.len(), &self.word, self.system).cmp(&(other.word.len(), &other.word, other.system))
    }
}

impl PartialOrd for GroupElt {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// `e`, or the word with 1-based generator names such as `s1s2s1`.
impl fmt::Display for GroupElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&word_name(&self.word))
    }
}

impl fmt::Debug for GroupElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupElt({self})")
    }
}

pub fn word_name(word: &[u8]) -> String {
    if word.is_empty() {
        return "e".to_string();
    }
    word.iter().map(|s| format!("s{}", s + 1)).collect()
}

/// Parses `e` or a concatenation such as `s1s2s1` (1-based names) into 0-based indices.
pub fn parse_word_name(name: &str) -> Result<Vec<usize>, CoxeterError> {
    let bad = || CoxeterError::BadWord(name.to_string());
    let trimmed = name.trim();
    if trimmed == "e" || trimmed.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for part in trimmed.split('s').skip(1) {
        let k: usize = part.trim().parse().map_err(|_| bad())?;
        if k == 0 {
            return Err(bad());
        }
        out.push(k - 1);
    }
    if !trimmed.starts_with('s') || out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

struct RootSystem {
    /// Roots in simple-root coordinates.
    roots: Vec<Vec<i64>>,
    positive: Vec<bool>,
    /// `gens[s][i]` is the index of `s(root_i)`.
    gens: Vec<Vec<u32>>,
    simple: Vec<u32>,
}

enum Backend {
    Roots(RootSystem),
    Words,
}

/// A Coxeter system `(W, S)` with generators indexed `0..rank`.
pub struct CoxeterSystem {
    label: Option<String>,
    matrix: Vec<Vec<u32>>,
    fingerprint: u64,
    finite: bool,
    backend: Backend,
    elements: OnceLock<Vec<GroupElt>>,
}

impl fmt::Debug for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoxeterSystem")
            .field("label", &self.label)
            .field("matrix", &self.matrix)
            .finish()
    }
}

impl Clone for CoxeterSystem {
    fn clone(&self) -> Self {
        let mut sys =
            Self::build(self.matrix.clone(), self.label.clone()).expect("matrix was validated on construction");
        sys.elements = self.elements.clone();
        sys
    }
}

impl CoxeterSystem {
    /// Parses a Cartan label such as `A2`, `B3`, `D4`, `G2`, `H3`, `I2(5)`,
    /// or a product like `A1xA1`.
    pub fn from_cartan(label: &str) -> Result<Self, CoxeterError> {
        let mut blocks = Vec::new();
        for part in label.split(['x', '*', '×']) {
            blocks.push(cartan_block(part.trim())?);
        }
        let n: usize = blocks.iter().map(Vec::len).sum();
        let mut matrix = vec![vec![2u32; n]; n];
        let mut offset = 0;
        for b in &blocks {
            for (i, row) in b.iter().enumerate() {
                for (j, m) in row.iter().enumerate() {
                    matrix[offset + i][offset + j] = *m;
                }
            }
            offset += b.len();
        }
        Self::build(matrix, Some(label.trim().to_string()))
    }

    /// Builds a system from a Coxeter matrix; use [`INFINITY`] for `m_st = inf`.
    pub fn from_matrix(matrix: Vec<Vec<u32>>) -> Result<Self, CoxeterError> {
        Self::build(matrix, None)
    }

    fn build(matrix: Vec<Vec<u32>>, label: Option<String>) -> Result<Self, CoxeterError> {
        let n = matrix.len();
        if n == 0 {
            return Err(CoxeterError::InvalidMatrix("rank 0".into()));
        }
        if n > u8::MAX as usize {
            return Err(CoxeterError::InvalidMatrix("rank too large".into()));
        }
        if matrix.iter().any(|row| row.len() != n) {
            return Err(CoxeterError::InvalidMatrix("matrix is not square".into()));
        }
        for (i, row) in matrix.iter().enumerate() {
            for (j, &m) in row.iter().enumerate() {
                if i == j && m != 1 {
                    return Err(CoxeterError::InvalidMatrix(format!("m[{i}][{i}] must be 1")));
                }
                if i != j && m != INFINITY && m < 2 {
                    return Err(CoxeterError::InvalidMatrix(format!("m[{i}][{j}] = {m} < 2")));
                }
                if matrix[j][i] != m {
                    return Err(CoxeterError::InvalidMatrix(format!("m[{i}][{j}] != m[{j}][{i}]")));
                }
            }
        }
        let mut hasher = std::collections::hash_map::DefaultHasher::new();
        matrix.hash(&mut hasher);
        let fingerprint = hasher.finish();

        let (backend, finite) = match integral_cartan(&matrix) {
            Some(cartan) => match root_closure(&cartan) {
                Some(rs) => (Backend::Roots(rs), true),
                None => (Backend::Words, false),
            },
            None => (Backend::Words, words_backend_finite(&matrix)),
        };
        Ok(Self {
            label,
            matrix,
            fingerprint,
            finite,
            backend,
            elements: OnceLock::new(),
        })
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<u32>] {
        &self.matrix
    }

    /// `m_st`, with [`INFINITY`] for an infinite order.
    pub fn m(&self, s: usize, t: usize) -> u32 {
        self.matrix[s][t]
    }

    pub fn is_finite(&self) -> bool {
        self.finite
    }

    /// Whether elements are realised as root permutations.
    pub fn has_root_realisation(&self) -> bool {
        matches!(self.backend, Backend::Roots(_))
    }

    pub fn identity(&self) -> GroupElt {
        GroupElt {
            word: Vec::new(),
            system: self.fingerprint,
        }
    }

    pub fn generator(&self, s: usize) -> GroupElt {
        assert!(s < self.rank(), "generator {s} out of range");
        GroupElt {
            word: vec![s as u8],
            system: self.fingerprint,
        }
    }

    /// The element represented by an arbitrary (not necessarily reduced) word.
    pub fn element(&self, word: &[usize]) -> Result<GroupElt, CoxeterError> {
        for &s in word {
            if s >= self.rank() {
                return Err(CoxeterError::GeneratorOutOfRange {
                    index: s,
                    rank: self.rank(),
                });
            }
        }
        let raw: Vec<u8> = word.iter().map(|&s| s as u8).collect();
        Ok(self.wrap(self.normalize(&raw)))
    }

    /// Parses `e` / `s1s2...` (1-based names).
    pub fn element_from_name(&self, name: &str) -> Result<GroupElt, CoxeterError> {
        self.element(&parse_word_name(name)?)
    }

    fn wrap(&self, word: Vec<u8>) -> GroupElt {
        GroupElt {
            word,
            system: self.fingerprint,
        }
    }

    fn check(&self, x: &GroupElt) -> Result<(), CoxeterError> {
        if x.system == self.fingerprint {
            Ok(())
        } else {
            Err(CoxeterError::ForeignElement)
        }
    }

    pub fn owns(&self, x: &GroupElt) -> bool {
        x.system == self.fingerprint
    }

    fn normalize(&self, word: &[u8]) -> Vec<u8> {
        match &self.backend {
            Backend::Roots(rs) => rs.canonical_word(&rs.perm_of(word)),
            Backend::Words => self.reduce_word(word),
        }
    }

    pub fn multiply(&self, x: &GroupElt, y: &GroupElt) -> Result<GroupElt, CoxeterError> {
        self.check(x)?;
        self.check(y)?;
        let mut w = x.word.clone();
        w.extend_from_slice(&y.word);
        Ok(self.wrap(self.normalize(&w)))
    }

    /// `x * s`
    pub fn mul_gen(&self, x: &GroupElt, s: usize) -> GroupElt {
        let mut w = x.word.clone();
        w.push(s as u8);
        self.wrap(self.normalize(&w))
    }

    /// `s * x`
    pub fn gen_mul(&self, s: usize, x: &GroupElt) -> GroupElt {
        let mut w = Vec::with_capacity(x.word.len() + 1);
        w.push(s as u8);
        w.extend_from_slice(&x.word);
        self.wrap(self.normalize(&w))
    }

    pub fn inverse(&self, x: &GroupElt) -> GroupElt {
        let w: Vec<u8> = x.word.iter().rev().copied().collect();
        self.wrap(self.normalize(&w))
    }

    pub fn length(&self, x: &GroupElt) -> usize {
        x.word.len()
    }

    /// `{s : l(xs) < l(x)}`
    pub fn right_descents(&self, x: &GroupElt) -> BTreeSet<usize> {
        match &self.backend {
            Backend::Roots(rs) => {
                let p = rs.perm_of(&x.word);
                (0..self.rank())
                    .filter(|&s| !rs.positive[p[rs.simple[s] as usize] as usize])
                    .collect()
            }
            Backend::Words => (0..self.rank())
                .filter(|&s| self.mul_gen(x, s).length() < x.length())
                .collect(),
        }
    }

    /// `{s : l(sx) < l(x)}`
    pub fn left_descents(&self, x: &GroupElt) -> BTreeSet<usize> {
        self.right_descents(&self.inverse(x))
    }

    pub fn is_right_descent(&self, x: &GroupElt, s: usize) -> bool {
        self.right_descents(x).contains(&s)
    }

    /// Bruhat order, decided by the lifting property: for a right descent
    /// `s` of `y`, `x <= y` iff `min(x, xs) <= ys`.
    pub fn bruhat_leq(&self, x: &GroupElt, y: &GroupElt) -> Result<bool, CoxeterError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.bruhat_leq_unchecked(x.clone(), y.clone()))
    }

    fn bruhat_leq_unchecked(&self, mut x: GroupElt, mut y: GroupElt) -> bool {
        loop {
            if x.length() > y.length() {
                return false;
            }
            if x.is_identity() {
                return true;
            }
            if x == y {
                return true;
            }
            let s = *y.word.last().expect("y is not the identity") as usize;
            y = self.mul_gen(&y, s);
            let xs = self.mul_gen(&x, s);
            if xs.length() < x.length() {
                x = xs;
            }
        }
    }

    /// All `y <= x`, sorted ShortLex.
    pub fn lower_interval(&self, x: &GroupElt) -> Result<Vec<GroupElt>, CoxeterError> {
        self.check(x)?;
        let mut set: BTreeSet<GroupElt> = BTreeSet::new();
        set.insert(self.identity());
        for &s in &x.word {
            let extra: Vec<GroupElt> = set.iter().map(|y| self.mul_gen(y, s as usize)).collect();
            set.extend(extra);
        }
        Ok(set.into_iter().collect())
    }

    /// All elements of a finite group, sorted ShortLex.
    pub fn enumerate(&self) -> Result<&[GroupElt], CoxeterError> {
        if !self.finite {
            return Err(CoxeterError::InfiniteGroup);
        }
        Ok(self.elements.get_or_init(|| {
            let all = (0..self.rank()).collect::<Vec<_>>();
            let mut v = self.generated_by_gens(&all, ENUMERATION_CAP);
            v.sort();
            v
        }))
    }

    pub fn order(&self) -> Result<usize, CoxeterError> {
        self.enumerate().map(<[GroupElt]>::len)
    }

    fn generated_by_gens(&self, gens: &[usize], cap: usize) -> Vec<GroupElt> {
        let mut seen: HashSet<GroupElt> = HashSet::new();
        let mut queue = VecDeque::from([self.identity()]);
        seen.insert(self.identity());
        while let Some(w) = queue.pop_front() {
            for &s in gens {
                let ws = self.mul_gen(&w, s);
                if seen.insert(ws.clone()) {
                    queue.push_back(ws);
                }
            }
            if seen.len() > cap {
                break;
            }
        }
        seen.into_iter().collect()
    }

    /// Sub-system generated by `I`.
    pub fn parabolic_system(&self, subset: &[usize]) -> Result<CoxeterSystem, CoxeterError> {
        for &s in subset {
            if s >= self.rank() {
                return Err(CoxeterError::GeneratorOutOfRange {
                    index: s,
                    rank: self.rank(),
                });
            }
        }
        if subset.is_empty() {
            return Err(CoxeterError::InvalidMatrix("empty parabolic".into()));
        }
        let matrix = subset
            .iter()
            .map(|&s| subset.iter().map(|&t| self.matrix[s][t]).collect())
            .collect();
        Self::from_matrix(matrix)
    }

    fn parabolic_is_finite(&self, subset: &[usize]) -> Result<bool, CoxeterError> {
        if subset.is_empty() {
            return Ok(true);
        }
        Ok(self.parabolic_system(subset)?.is_finite())
    }

    /// Elements of the standard parabolic subgroup `W_I`, sorted ShortLex.
    pub fn parabolic_elements(&self, subset: &[usize]) -> Result<Vec<GroupElt>, CoxeterError> {
        if !self.parabolic_is_finite(subset)? {
            return Err(CoxeterError::InfiniteGroup);
        }
        let mut v = self.generated_by_gens(subset, ENUMERATION_CAP);
        v.sort();
        Ok(v)
    }

    /// `p_I = sum_{y in W_I} q^l(y)`, returned with `q = v^-2`.
    pub fn parabolic_poincare(&self, subset: &[usize]) -> Result<Laurent, CoxeterError> {
        let mut out = Laurent::zero();
        for y in self.parabolic_elements(subset)? {
            out += &Laurent::q_pow(y.length() as i64);
        }
        Ok(out)
    }

    /// The longest element of `W_I`.
    pub fn longest_parabolic(&self, subset: &[usize]) -> Result<GroupElt, CoxeterError> {
        if !self.parabolic_is_finite(subset)? {
            return Err(CoxeterError::InfiniteGroup);
        }
        let mut w = self.identity();
        'grow: loop {
            for &s in subset {
                let ws = self.mul_gen(&w, s);
                if ws.length() > w.length() {
                    w = ws;
                    continue 'grow;
                }
            }
            return Ok(w);
        }
    }

    pub fn longest_element(&self) -> Result<GroupElt, CoxeterError> {
        self.longest_parabolic(&(0..self.rank()).collect::<Vec<_>>())
    }

    /// Applies a diagram automorphism letter by letter.
    pub fn apply_involution(&self, theta: &Involution, x: &GroupElt) -> GroupElt {
        let w: Vec<u8> = x.word.iter().map(|&s| theta.perm[s as usize] as u8).collect();
        self.wrap(self.normalize(&w))
    }

    /// `W^theta = {w : theta(w) = w}`, sorted ShortLex.
    pub fn theta_fixed(&self, theta: &Involution) -> Result<Vec<GroupElt>, CoxeterError> {
        theta.check_against(self)?;
        Ok(self
            .enumerate()?
            .iter()
            .filter(|w| self.apply_involution(theta, w) == **w)
            .cloned()
            .collect())
    }

    /// Elements of the subgroup generated by the given words.
    pub fn subgroup(&self, spec: &SubgroupSpec) -> Result<Vec<GroupElt>, CoxeterError> {
        if !self.finite {
            return Err(CoxeterError::InfiniteGroup);
        }
        let gens = spec
            .generators
            .iter()
            .map(|w| self.element(w))
            .collect::<Result<Vec<_>, _>>()?;
        let mut seen: BTreeSet<GroupElt> = BTreeSet::from([self.identity()]);
        let mut queue = VecDeque::from([self.identity()]);
        while let Some(w) = queue.pop_front() {
            for g in &gens {
                let wg = self.multiply(&w, g)?;
                if seen.insert(wg.clone()) {
                    queue.push_back(wg);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }

    /// One representative per right coset `W_K w` of `W^theta`, choosing
    /// the ShortLex-minimal element of each coset. Sorted ShortLex.
    pub fn coset_reps(&self, theta: &Involution, wk: &SubgroupSpec) -> Result<Vec<GroupElt>, CoxeterError> {
        let fixed = self.theta_fixed(theta)?;
        for (i, w) in wk.generators.iter().enumerate() {
            let g = self.element(w)?;
            if self.apply_involution(theta, &g) != g {
                return Err(CoxeterError::SubgroupNotThetaFixed { generator: i });
            }
        }
        let sub = self.subgroup(wk)?;
        let mut assigned: HashSet<GroupElt> = HashSet::new();
        let mut reps = Vec::new();
        for w in fixed {
            if assigned.contains(&w) {
                continue;
            }
            for k in &sub {
                assigned.insert(self.multiply(k, &w)?);
            }
            reps.push(w);
        }
        Ok(reps)
    }

    // ---- word backend -------------------------------------------------

    fn braid_class(&self, word: &[u8]) -> Vec<Vec<u8>> {
        let mut seen: HashSet<Vec<u8>> = HashSet::from([word.to_vec()]);
        let mut queue = VecDeque::from([word.to_vec()]);
        while let Some(w) = queue.pop_front() {
            for i in 0..w.len().saturating_sub(1) {
                let (s, t) = (w[i] as usize, w[i + 1] as usize);
                let m = self.matrix[s][t];
                if s == t || m == INFINITY || i + m as usize > w.len() {
                    continue;
                }
                let m = m as usize;
                let alternating = (0..m).all(|k| w[i + k] as usize == if k % 2 == 0 { s } else { t });
                if !alternating {
                    continue;
                }
                let mut nw = w.clone();
                for k in 0..m {
                    nw[i + k] = if k % 2 == 0 { t as u8 } else { s as u8 };
                }
                if seen.insert(nw.clone()) {
                    queue.push_back(nw);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Tits' solution of the word problem: braid moves plus `ss -> 1`.
    fn reduce_word(&self, word: &[u8]) -> Vec<u8> {
        let mut cur = word.to_vec();
        // Cancel trivially adjacent pairs first to keep braid classes small.
        cur = cancel_adjacent(&cur);
        'outer: loop {
            let class = self.braid_class(&cur);
            for w in &class {
                if let Some(i) = (0..w.len().saturating_sub(1)).find(|&i| w[i] == w[i + 1]) {
                    let mut nw = w.clone();
                    nw.drain(i..i + 2);
                    cur = cancel_adjacent(&nw);
                    continue 'outer;
                }
            }
            return class.into_iter().min().expect("class contains the word itself");
        }
    }
}

fn cancel_adjacent(word: &[u8]) -> Vec<u8> {
    let mut out: Vec<u8> = Vec::with_capacity(word.len());
    for &s in word {
        if out.last() == Some(&s) {
            out.pop();
        } else {
            out.push(s);
        }
    }
    out
}

impl RootSystem {
    fn perm_of(&self, word: &[u8]) -> Vec<u32> {
        let n = self.roots.len();
        let mut p: Vec<u32> = (0..n as u32).collect();
        for &s in word {
            let g = &self.gens[s as usize];
            p = g.iter().map(|&b| p[b as usize]).collect();
        }
        p
    }

    /// ShortLex-minimal reduced word: repeatedly strip the smallest left descent.
    fn canonical_word(&self, perm: &[u32]) -> Vec<u8> {
        let mut p = perm.to_vec();
        let mut word = Vec::new();
        let rank = self.simple.len();
        loop {
            let mut inv = vec![0u32; p.len()];
            for (i, &j) in p.iter().enumerate() {
                inv[j as usize] = i as u32;
            }
            let found = (0..rank).find(|&s| !self.positive[inv[self.simple[s] as usize] as usize]);
            match found {
                None => return word,
                Some(s) => {
                    word.push(s as u8);
                    let g = &self.gens[s];
                    p = p.iter().map(|&b| g[b as usize]).collect();
                }
            }
        }
    }
}

/// An integral Cartan matrix realising the Coxeter matrix, when all labels
/// are crystallographic and no cycle carries a label above 3.
fn integral_cartan(m: &[Vec<u32>]) -> Option<Vec<Vec<i64>>> {
    let n = m.len();
    let mut a = vec![vec![0i64; n]; n];
    for i in 0..n {
        a[i][i] = 2;
        for j in (i + 1)..n {
            let (x, y) = match m[i][j] {
                2 => (0, 0),
                3 => (-1, -1),
                4 => (-1, -2),
                6 => (-1, -3),
                _ => return None,
            };
            a[i][j] = x;
            a[j][i] = y;
        }
    }
    // Asymmetric entries on a cycle may not realise the Coxeter group.
    let mut uf = crate::unionfind::UnionFind::new(n);
    let mut has_cycle = false;
    let mut heavy = false;
    for (i, row) in m.iter().enumerate() {
        for (j, &mij) in row.iter().enumerate().skip(i + 1) {
            if mij != 2 {
                has_cycle |= !uf.union(i, j);
                heavy |= mij > 3;
            }
        }
    }
    if has_cycle && heavy {
        return None;
    }
    Some(a)
}

fn root_closure(cartan: &[Vec<i64>]) -> Option<RootSystem> {
    let n = cartan.len();
    let reflect = |s: usize, beta: &[i64]| -> Vec<i64> {
        let pairing: i64 = (0..n).map(|j| cartan[s][j] * beta[j]).sum();
        let mut out = beta.to_vec();
        out[s] -= pairing;
        out
    };
    let mut roots: Vec<Vec<i64>> = Vec::new();
    let mut index: HashMap<Vec<i64>, u32> = HashMap::new();
    let mut queue = VecDeque::new();
    for s in 0..n {
        for sign in [1i64, -1] {
            let mut e = vec![0i64; n];
            e[s] = sign;
            if !index.contains_key(&e) {
                index.insert(e.clone(), roots.len() as u32);
                roots.push(e.clone());
                queue.push_back(e);
            }
        }
    }
    while let Some(beta) = queue.pop_front() {
        for s in 0..n {
            let r = reflect(s, &beta);
            if !index.contains_key(&r) {
                if roots.len() >= ROOT_CAP {
                    return None;
                }
                index.insert(r.clone(), roots.len() as u32);
                roots.push(r.clone());
                queue.push_back(r);
            }
        }
    }
    let positive = roots.iter().map(|r| r.iter().all(|&c| c >= 0)).collect();
    let gens = (0..n)
        .map(|s| roots.iter().map(|r| index[&reflect(s, r)]).collect())
        .collect();
    let simple = (0..n)
        .map(|s| {
            let mut e = vec![0i64; n];
            e[s] = 1;
            index[&e]
        })
        .collect();
    Some(RootSystem {
        roots,
        positive,
        gens,
        simple,
    })
}

/// Finiteness for systems without an integral realisation: every component
/// must be `I2(m)`, `H3` or `H4`, or a crystallographic component.
fn words_backend_finite(m: &[Vec<u32>]) -> bool {
    let n = m.len();
    let mut uf = crate::unionfind::UnionFind::new(n);
    for (i, row) in m.iter().enumerate() {
        for (j, &mij) in row.iter().enumerate().skip(i + 1) {
            if mij == INFINITY {
                return false;
            }
            if mij != 2 {
                uf.union(i, j);
            }
        }
    }
    for comp in uf.groups() {
        let sub: Vec<Vec<u32>> = comp.iter().map(|&i| comp.iter().map(|&j| m[i][j]).collect()).collect();
        if let Some(c) = integral_cartan(&sub) {
            if root_closure(&c).is_none() {
                return false;
            }
            continue;
        }
        if !is_h_or_i2(&sub) {
            return false;
        }
    }
    true
}

fn is_h_or_i2(m: &[Vec<u32>]) -> bool {
    let n = m.len();
    if n <= 2 {
        return true;
    }
    // Must be a path whose single 5 sits at one end, all other edges 3.
    let degree = |i: usize| (0..n).filter(|&j| j != i && m[i][j] != 2).count();
    if (0..n).any(|i| degree(i) > 2) || n > 4 {
        return false;
    }
    let ends: Vec<usize> = (0..n).filter(|&i| degree(i) == 1).collect();
    if ends.len() != 2 {
        return false;
    }
    let mut order = vec![ends[0]];
    while order.len() < n {
        let last = *order.last().unwrap();
        let next = (0..n).find(|&j| j != last && m[last][j] != 2 && !order.contains(&j));
        match next {
            Some(j) => order.push(j),
            None => return false,
        }
    }
    let labels: Vec<u32> = order.windows(2).map(|w| m[w[0]][w[1]]).collect();
    let fives = labels.iter().filter(|&&l| l == 5).count();
    let others_ok = labels.iter().all(|&l| l == 3 || l == 5);
    fives == 1 && others_ok && (labels[0] == 5 || *labels.last().unwrap() == 5)
}

fn cartan_block(part: &str) -> Result<Vec<Vec<u32>>, CoxeterError> {
    let unknown = || CoxeterError::UnknownCartanType(part.to_string());
    let mut chars = part.chars();
    let letter = chars.next().ok_or_else(unknown)?.to_ascii_uppercase();
    let rest: String = chars.collect();
    if letter == 'I' {
        // I2(m)
        let inner = rest
            .strip_prefix("2(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(unknown)?;
        let m: u32 = inner.parse().map_err(|_| unknown())?;
        if m < 2 {
            return Err(unknown());
        }
        return Ok(vec![vec![1, m], vec![m, 1]]);
    }
    let n: usize = rest.parse().map_err(|_| unknown())?;
    let mut mat = vec![vec![2u32; n]; n];
    for (i, row) in mat.iter_mut().enumerate() {
        row[i] = 1;
    }
    let mut edge = |i: usize, j: usize, m: u32| {
        mat[i][j] = m;
        mat[j][i] = m;
    };
    match (letter, n) {
        ('A', n) if n >= 1 => (1..n).for_each(|i| edge(i - 1, i, 3)),
        ('B' | 'C', n) if n >= 2 => {
            (1..n - 1).for_each(|i| edge(i - 1, i, 3));
            edge(n - 2, n - 1, 4);
        }
        ('D', n) if n >= 4 => {
            (1..n - 1).for_each(|i| edge(i - 1, i, 3));
            edge(n - 3, n - 1, 3);
        }
        ('E', 6..=8) => {
            edge(0, 2, 3);
            edge(1, 3, 3);
            (3..n).for_each(|i| edge(i - 1, i, 3));
        }
        ('F', 4) => {
            edge(0, 1, 3);
            edge(1, 2, 4);
            edge(2, 3, 3);
        }
        ('G', 2) => edge(0, 1, 6),
        ('H', 3 | 4) => {
            edge(0, 1, 5);
            (2..n).for_each(|i| edge(i - 1, i, 3));
        }
        _ => return Err(unknown()),
    }
    Ok(mat)
}

/// A diagram automorphism `theta` of order at most two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Involution {
    perm: Vec<usize>,
}

impl Involution {
    pub fn identity(rank: usize) -> Self {
        Self {
            perm: (0..rank).collect(),
        }
    }

    pub fn new(perm: Vec<usize>) -> Self {
        Self { perm }
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn apply(&self, s: usize) -> usize {
        self.perm[s]
    }

    pub fn check_against(&self, sys: &CoxeterSystem) -> Result<(), CoxeterError> {
        let n = sys.rank();
        if self.perm.len() != n {
            return Err(CoxeterError::InvalidInvolution(format!(
                "permutation has length {}, rank is {n}",
                self.perm.len()
            )));
        }
        for (s, &t) in self.perm.iter().enumerate() {
            if t >= n || self.perm[t] != s {
                return Err(CoxeterError::InvalidInvolution(format!("theta^2 != id at {s}")));
            }
        }
        for s in 0..n {
            for t in 0..n {
                if sys.m(self.perm[s], self.perm[t]) != sys.m(s, t) {
                    return Err(CoxeterError::InvalidInvolution(format!(
                        "does not preserve m[{s}][{t}]"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Generators of `W_K`, each a word in `S` (0-based indices).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SubgroupSpec {
    pub generators: Vec<Vec<usize>>,
}

impl SubgroupSpec {
    pub fn trivial() -> Self {
        Self::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(sys: &CoxeterSystem, name: &str) -> GroupElt {
        sys.element_from_name(name).unwrap()
    }

    #[test]
    fn a2_basics() {
        let a2 = CoxeterSystem::from_cartan("A2").unwrap();
        assert_eq!(w(&a2, "s1s2s1").length(), 3);
        assert_eq!(w(&a2, "s2s1s2"), w(&a2, "s1s2s1"));
        assert_eq!(a2.order().unwrap(), 6);
        let e = a2.identity();
        for s in 0..2 {
            assert!(a2.bruhat_leq(&e, &a2.generator(s)).unwrap());
        }
        assert_eq!(a2.lower_interval(&w(&a2, "s1s2s1")).unwrap().len(), 6);
        assert_eq!(a2.right_descents(&w(&a2, "s1s2")), BTreeSet::from([1]));
        assert_eq!(a2.left_descents(&w(&a2, "s1s2")), BTreeSet::from([0]));
        assert!(a2.right_descents(&e).is_empty());
        assert_eq!(a2.right_descents(&a2.generator(0)), BTreeSet::from([0]));
    }

    #[test]
    fn group_orders() {
        for (label, order) in [
            ("A1", 2),
            ("A3", 24),
            ("B2", 8),
            ("B3", 48),
            ("C3", 48),
            ("D4", 192),
            ("G2", 12),
            ("F4", 1152),
            ("A1xA1", 4),
            ("I2(5)", 10),
            ("H3", 120),
        ] {
            let sys = CoxeterSystem::from_cartan(label).unwrap();
            assert_eq!(sys.order().unwrap(), order, "{label}");
        }
    }

    #[test]
    fn longest_element_lengths() {
        for (label, len) in [("A3", 6), ("B3", 9), ("G2", 6), ("D4", 12), ("I2(5)", 5)] {
            let sys = CoxeterSystem::from_cartan(label).unwrap();
            assert_eq!(sys.longest_element().unwrap().length(), len, "{label}");
        }
    }

    #[test]
    fn infinite_groups_reject_enumeration() {
        let affine = CoxeterSystem::from_matrix(vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert!(!affine.is_finite());
        assert_eq!(affine.enumerate().unwrap_err(), CoxeterError::InfiniteGroup);
        let a2_tilde = CoxeterSystem::from_matrix(vec![vec![1, 3, 3], vec![3, 1, 3], vec![3, 3, 1]]).unwrap();
        assert!(!a2_tilde.is_finite());
        // words still normalise
        let x = a2_tilde.element(&[0, 1, 0, 1]).unwrap();
        assert_eq!(x, a2_tilde.element(&[1, 0, 1, 1]).unwrap());
        assert_eq!(x.length(), 2);
    }

    #[test]
    fn word_backend_dihedral_lengths() {
        assert!(CoxeterSystem::from_cartan("G2").unwrap().has_root_realisation());
        let i25 = CoxeterSystem::from_cartan("I2(5)").unwrap();
        assert!(!i25.has_root_realisation());
        let mut lens: Vec<usize> = i25.enumerate().unwrap().iter().map(GroupElt::length).collect();
        lens.sort();
        assert_eq!(lens, vec![0, 1, 1, 2, 2, 3, 3, 4, 4, 5]);
    }

    #[test]
    fn foreign_elements_are_rejected() {
        let a2 = CoxeterSystem::from_cartan("A2").unwrap();
        let b2 = CoxeterSystem::from_cartan("B2").unwrap();
        let x = a2.generator(0);
        let y = b2.generator(0);
        assert_eq!(a2.multiply(&x, &y).unwrap_err(), CoxeterError::ForeignElement);
        assert_eq!(a2.bruhat_leq(&y, &x).unwrap_err(), CoxeterError::ForeignElement);
    }

    #[test]
    fn theta_fixed_sets() {
        let a1 = CoxeterSystem::from_cartan("A1").unwrap();
        assert_eq!(a1.theta_fixed(&Involution::identity(1)).unwrap().len(), 2);
        let a2 = CoxeterSystem::from_cartan("A2").unwrap();
        assert_eq!(a2.theta_fixed(&Involution::identity(2)).unwrap().len(), 6);
        let swap = Involution::new(vec![1, 0]);
        // brute force: theta(w) = w over all six elements
        let all = a2.enumerate().unwrap();
        let brute: Vec<GroupElt> = all
            .iter()
            .filter(|x| {
                let img: Vec<usize> = x.indices().iter().map(|&s| 1 - s).collect();
                a2.element(&img).unwrap() == **x
            })
            .cloned()
            .collect();
        assert_eq!(a2.theta_fixed(&swap).unwrap(), brute);
        assert_eq!(brute, vec![a2.identity(), w(&a2, "s1s2s1")]);
    }

    #[test]
    fn involution_validation() {
        let b2 = CoxeterSystem::from_cartan("A1xA2").unwrap();
        assert!(Involution::new(vec![1, 0, 2]).check_against(&b2).is_err());
        assert!(Involution::new(vec![0, 2, 1]).check_against(&b2).is_ok());
        assert!(Involution::new(vec![0, 0, 1]).check_against(&b2).is_err());
    }

    #[test]
    fn coset_representatives() {
        let a1 = CoxeterSystem::from_cartan("A1").unwrap();
        let reps = a1
            .coset_reps(&Involution::identity(1), &SubgroupSpec::trivial())
            .unwrap();
        assert_eq!(reps, vec![a1.identity(), a1.generator(0)]);

        let a2 = CoxeterSystem::from_cartan("A2").unwrap();
        let all = SubgroupSpec {
            generators: vec![vec![0], vec![1]],
        };
        let reps = a2.coset_reps(&Involution::identity(2), &all).unwrap();
        assert_eq!(reps, vec![a2.identity()]);

        let s1 = SubgroupSpec {
            generators: vec![vec![0]],
        };
        let reps = a2.coset_reps(&Involution::identity(2), &s1).unwrap();
        // brute force: distinct sets {k w : k in <s1>}
        let sub = [a2.identity(), a2.generator(0)];
        let cosets: BTreeSet<BTreeSet<GroupElt>> = a2
            .enumerate()
            .unwrap()
            .iter()
            .map(|x| sub.iter().map(|k| a2.multiply(k, x).unwrap()).collect())
            .collect();
        assert_eq!(cosets.len(), 3);
        assert_eq!(reps.len(), 3);

        let swap = Involution::new(vec![1, 0]);
        let err = a2.coset_reps(&swap, &s1).unwrap_err();
        assert_eq!(err, CoxeterError::SubgroupNotThetaFixed { generator: 0 });
    }

    #[test]
    fn parabolic_poincare_polynomials() {
        let a2 = CoxeterSystem::from_cartan("A2").unwrap();
        assert_eq!(a2.parabolic_poincare(&[0]).unwrap(), Laurent::from_q([(0, 1), (1, 1)]));
        assert_eq!(a2.parabolic_poincare(&[]).unwrap(), Laurent::one());
        // enumerate W(A2) lengths: 0,1,1,2,2,3
        let lens: Vec<i64> = a2.enumerate().unwrap().iter().map(|x| x.length() as i64).collect();
        let brute = Laurent::from_q(lens.into_iter().map(|k| (k, 1)));
        assert_eq!(brute, Laurent::from_q([(0, 1), (1, 2), (2, 2), (3, 1)]));
        assert_eq!(a2.parabolic_poincare(&[0, 1]).unwrap(), brute);
        assert_eq!(a2.longest_parabolic(&[0, 1]).unwrap(), w(&a2, "s1s2s1"));
        let affine = CoxeterSystem::from_matrix(vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert!(affine.parabolic_poincare(&[0, 1]).is_err());
        assert!(affine.parabolic_poincare(&[0]).is_ok());
    }

    #[test]
    fn bruhat_is_a_partial_order_matching_subwords() {
        let a3 = CoxeterSystem::from_cartan("A3").unwrap();
        let all = a3.enumerate().unwrap();
        for y in all {
            let interval: BTreeSet<GroupElt> = a3.lower_interval(y).unwrap().into_iter().collect();
            for x in all {
                assert_eq!(a3.bruhat_leq(x, y).unwrap(), interval.contains(x));
            }
        }
        let w0 = a3.longest_element().unwrap();
        assert_eq!(a3.lower_interval(&w0).unwrap().len(), 24);
    }

    #[test]
    fn word_names_round_trip() {
        assert_eq!(parse_word_name("s1s2s1").unwrap(), vec![0, 1, 0]);
        assert_eq!(parse_word_name("e").unwrap(), Vec::<usize>::new());
        assert!(parse_word_name("s0").is_err());
        assert!(parse_word_name("x1").is_err());
        assert_eq!(word_name(&[0, 1]), "s1s2");
    }

    #[test]
    fn unknown_labels() {
        for bad in ["Z3", "A", "E9", "G3", "D3x", "I2(1)"] {
            assert!(CoxeterSystem::from_cartan(bad).is_err(), "{bad}");
        }
        assert!(CoxeterSystem::from_matrix(vec![vec![1, 3], vec![2, 1]]).is_err());
        assert!(CoxeterSystem::from_matrix(vec![vec![2]]).is_err());
    }
}
