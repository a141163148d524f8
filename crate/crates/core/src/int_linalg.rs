//! Exact linear algebra over the integers (and a little over Z/p and Z/2).
//!
//! Everything here works on arbitrary-precision integers. Matrices are
//! immutable values; the normal-form routines copy their input into a
//! scratch buffer and hand back fresh matrices.

use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[BigInt]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate().take(rows.min(cols)) {
            m.entries[i * cols + i] = d.clone();
        }
        m
    }

    /// Builds a matrix from rows of equal length. `cols` is needed so that
    /// an empty row list still has a definite shape.
    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {}, expected {cols}",
                    row.len()
                )));
            }
            entries.extend(row);
        }
        Ok(Self {
            rows: n,
            cols,
            entries,
        })
    }

    /// Convenience constructor for small literal matrices.
    ///
    /// Panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::from_rows(rows, cols).expect("ragged literal matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self[(i, j)].clone());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * k).collect(),
        }
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("matrix difference".into()));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack of {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn hstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        let rows = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend_from_slice(other.row(i));
                r
            })
            .collect();
        Self::from_rows(rows, self.cols + other.cols)
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        let rows = idx.iter().map(|&i| self.row(i).to_vec()).collect();
        Self::from_rows(rows, self.cols).expect("rows share a width")
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Rank over the rationals, by fraction-free elimination.
    pub fn rank(&self) -> usize {
        bareiss(self.to_rows(), self.cols).0
    }

    /// Determinant of a square matrix.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of non-square matrix".into()));
        }
        if self.rows == 0 {
            return Ok(BigInt::one());
        }
        let (rank, det) = bareiss(self.to_rows(), self.cols);
        Ok(if rank < self.rows { BigInt::zero() } else { det })
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Fraction-free Gaussian elimination. Returns the rank and, for square
/// full-rank input, the determinant.
fn bareiss(mut a: Vec<Vec<BigInt>>, cols: usize) -> (usize, BigInt) {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut sign = 1i32;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            sign = -sign;
        }
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..cols {
                let v = &row[j] * &pivot_row[c] - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    let det = if sign < 0 { -prev } else { prev };
    (r, det)
}

fn sub_row_multiple(rows: &mut [Vec<BigInt>], target: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let (t, s) = if target < src {
        let (lo, hi) = rows.split_at_mut(src);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(target);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in t.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

fn negate_row(row: &mut [BigInt]) {
    for x in row.iter_mut() {
        *x = -std::mem::take(x);
    }
}

/// Row-style Hermite normal form `u·a = h`.
#[derive(Clone, Debug)]
pub struct Hnf {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// Pivot column of each nonzero row of `h`, increasing.
    pub pivots: Vec<usize>,
}

impl Hnf {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// The nonzero rows of `h`: a canonical basis of the row span.
    pub fn basis(&self) -> IntMatrix {
        let idx: Vec<usize> = (0..self.rank()).collect();
        self.h.select_rows(&idx)
    }
}

pub fn hnf(a: &IntMatrix) -> Hnf {
    let (rows, cols) = (a.rows(), a.cols());
    let mut m = a.to_rows();
    let mut u = IntMatrix::identity(rows).to_rows();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let Some(p) = (r..rows)
                .filter(|&i| !m[i][c].is_zero())
                .min_by(|&i, &j| m[i][c].magnitude().cmp(m[j][c].magnitude()))
            else {
                break;
            };
            m.swap(r, p);
            u.swap(r, p);
            let mut clean = true;
            for i in r + 1..rows {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = m[i][c].div_floor(&m[r][c]);
                sub_row_multiple(&mut m, i, r, &q);
                sub_row_multiple(&mut u, i, r, &q);
                if !m[i][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if m[r][c].is_zero() {
            continue;
        }
        if m[r][c].is_negative() {
            negate_row(&mut m[r]);
            negate_row(&mut u[r]);
        }
        for i in 0..r {
            let q = m[i][c].div_floor(&m[r][c]);
            sub_row_multiple(&mut m, i, r, &q);
            sub_row_multiple(&mut u, i, r, &q);
        }
        pivots.push(c);
        r += 1;
    }
    Hnf {
        h: IntMatrix::from_rows(m, cols).expect("shape preserved"),
        u: IntMatrix::from_rows(u, rows).expect("shape preserved"),
        pivots,
    }
}

/// Basis (as rows) of the lattice `{x : x·a = 0}`. The basis is saturated.
pub fn left_kernel(a: &IntMatrix) -> IntMatrix {
    let h = hnf(a);
    let idx: Vec<usize> = (h.rank()..a.rows()).collect();
    h.u.select_rows(&idx)
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(u: &IntMatrix) -> Result<IntMatrix> {
    if u.rows() != u.cols() {
        return Err(Error::DimensionMismatch("inverse of non-square matrix".into()));
    }
    let h = hnf(u);
    if h.h != IntMatrix::identity(u.rows()) {
        return Err(Error::InvalidArgument("matrix is not unimodular".into()));
    }
    Ok(h.u)
}

/// Smith normal form with transforms: `u·a·v = diag(d)`.
#[derive(Clone, Debug)]
pub struct SnfResult {
    /// Invariant factors, `min(rows, cols)` of them, each dividing the next.
    pub d: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.d.iter().filter(|x| !x.is_zero()).count()
    }
}

pub fn snf(a: &IntMatrix) -> SnfResult {
    let (rows, cols) = (a.rows(), a.cols());
    let mut m = a.to_rows();
    let mut u = IntMatrix::identity(rows).to_rows();
    let mut v = IntMatrix::identity(cols).to_rows();
    let n = rows.min(cols);

    let col_op = |m: &mut Vec<Vec<BigInt>>, v: &mut Vec<Vec<BigInt>>, j: usize, t: usize, q: &BigInt| {
        for row in m.iter_mut().chain(v.iter_mut()) {
            if !row[t].is_zero() {
                let d = q * &row[t];
                row[j] -= d;
            }
        }
    };
    let swap_cols = |m: &mut Vec<Vec<BigInt>>, v: &mut Vec<Vec<BigInt>>, i: usize, j: usize| {
        for row in m.iter_mut().chain(v.iter_mut()) {
            row.swap(i, j);
        }
    };

    for t in 0..n {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero()
                    && best.map_or(true, |(bi, bj)| m[i][j].magnitude() < m[bi][bj].magnitude())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut m, &mut v, t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&m[t][t]);
                sub_row_multiple(&mut m, i, t, &q);
                sub_row_multiple(&mut u, i, t, &q);
                clean &= m[i][t].is_zero();
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&m[t][t]);
                col_op(&mut m, &mut v, j, t, &q);
                clean &= m[t][j].is_zero();
            }
            if !clean {
                // a remainder smaller than the pivot survived; promote it
                let mut best = (t, t);
                for i in t + 1..rows {
                    if !m[i][t].is_zero() && m[i][t].magnitude() < m[best.0][best.1].magnitude() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !m[t][j].is_zero() && m[t][j].magnitude() < m[best.0][best.1].magnitude() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    m.swap(t, best.0);
                    u.swap(t, best.0);
                } else if best.1 != t {
                    swap_cols(&mut m, &mut v, t, best.1);
                }
                continue;
            }
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !m[i][j].is_multiple_of(&m[t][t]))
            });
            match offender {
                Some(i) => {
                    let one = BigInt::from(-1);
                    sub_row_multiple(&mut m, t, i, &one);
                    sub_row_multiple(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if m[t][t].is_negative() {
            negate_row(&mut m[t]);
            negate_row(&mut u[t]);
        }
    }
    let d = (0..n).map(|t| m[t][t].clone()).collect();
    SnfResult {
        d,
        u: IntMatrix::from_rows(u, rows).expect("shape preserved"),
        v: IntMatrix::from_rows(v, cols).expect("shape preserved"),
    }
}

fn check_ambient(span: &IntMatrix, ambient_rank: usize) -> Result<()> {
    if span.cols() != ambient_rank {
        return Err(Error::DimensionMismatch(format!(
            "generators have {} coordinates, ambient rank is {ambient_rank}",
            span.cols()
        )));
    }
    Ok(())
}

/// Whether the row span of `span_gens` is a direct summand of `Z^ambient_rank`.
pub fn is_direct_summand(span_gens: &IntMatrix, ambient_rank: usize) -> Result<bool> {
    check_ambient(span_gens, ambient_rank)?;
    Ok(snf(span_gens)
        .d
        .iter()
        .all(|x| x.is_zero() || x.is_one()))
}

/// Basis of the smallest direct summand containing the row span, in
/// canonical (Hermite) form.
pub fn saturate(span_gens: &IntMatrix, ambient_rank: usize) -> Result<IntMatrix> {
    check_ambient(span_gens, ambient_rank)?;
    let t = hnf(&span_gens.transpose());
    let r = t.rank();
    let inv = unimodular_inverse(&t.u)?;
    let cols: Vec<usize> = (0..r).collect();
    let basis = inv.transpose().select_rows(&cols);
    Ok(hnf(&basis).basis())
}

/// Whether two row spans coincide as Z-modules.
pub fn same_row_span(a: &IntMatrix, b: &IntMatrix) -> bool {
    a.cols() == b.cols() && hnf(a).basis() == hnf(b).basis()
}

/// Outcome of checking the summand transfer implication on one instance.
///
/// Maps act on column vectors: `l1: Z^m -> Z^n`, `l3: Z^n -> Z^p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SummandTransfer {
    /// image(l3·l1) is a direct summand of rank m.
    pub composite_summand_full_rank: bool,
    /// image(l1) is a direct summand.
    pub inner_summand: bool,
}

impl SummandTransfer {
    pub fn implication_holds(&self) -> bool {
        !self.composite_summand_full_rank || self.inner_summand
    }
}

pub fn verify_summand_transfer(l1: &IntMatrix, l3: &IntMatrix) -> Result<SummandTransfer> {
    let l2 = l3.mul(l1)?;
    let m = l1.cols();
    let image2 = l2.transpose();
    let composite = is_direct_summand(&image2, l2.rows())? && image2.rank() == m;
    let inner = is_direct_summand(&l1.transpose(), l1.rows())?;
    Ok(SummandTransfer {
        composite_summand_full_rank: composite,
        inner_summand: inner,
    })
}

/// Finitely generated abelian group `Z^free_rank ⊕ ⨁ Z/torsion_i`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct FgAbGroup {
    pub free_rank: usize,
    /// Invariant factors greater than one, each dividing the next.
    #[serde(serialize_with = "serialize_bigints")]
    pub torsion: Vec<BigInt>,
}

fn serialize_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

impl FgAbGroup {
    /// Number of cyclic torsion factors equal to `n`.
    pub fn count_factor(&self, n: u64) -> usize {
        let n = BigInt::from(n);
        self.torsion.iter().filter(|x| **x == n).count()
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let mut j = i;
            while j < self.torsion.len() && self.torsion[j] == self.torsion[i] {
                j += 1;
            }
            parts.push(format!("(Z/{})^{}", self.torsion[i], j - i));
            i = j;
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `Z^cols / rowspan(a)`.
pub fn cokernel(a: &IntMatrix) -> FgAbGroup {
    let s = snf(a);
    let rank = s.rank();
    FgAbGroup {
        free_rank: a.cols() - rank,
        torsion: s.d.into_iter().filter(|x| !x.is_zero() && !x.is_one()).collect(),
    }
}

/// A random unimodular `n × n` matrix: a product of `steps` elementary row
/// operations with multipliers in `-2..=2`, plus row swaps and sign flips.
pub fn random_unimodular<R: rand::Rng>(n: usize, steps: usize, rng: &mut R) -> IntMatrix {
    let mut rows = IntMatrix::identity(n).to_rows();
    if n == 0 {
        return IntMatrix::zeros(0, 0);
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        match rng.gen_range(0..4) {
            0 if i != j => rows.swap(i, j),
            1 => rows[i].iter_mut().for_each(|x| *x = -x.clone()),
            _ if i != j => {
                let k = BigInt::from(rng.gen_range(-2i64..=2));
                let src = rows[j].clone();
                for (x, y) in rows[i].iter_mut().zip(&src) {
                    *x += &k * y;
                }
            }
            _ => {}
        }
    }
    IntMatrix::from_rows(rows, n).expect("square")
}

/// Default prime for modular rank certificates.
pub const CERT_PRIME: u64 = 2_147_483_647;

/// Incremental reduced row echelon form over Z/p.
///
/// Since reduction mod p can only lose rank, the rank of anything fed in
/// here is a lower bound for its rank over Q.
#[derive(Clone, Debug)]
pub struct ModpEchelon {
    p: u64,
    dim: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl ModpEchelon {
    pub fn new(p: u64, dim: usize) -> Self {
        Self {
            p,
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn reduce_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    fn reduce_big(&self, x: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let r = x.mod_floor(&p);
        r.try_into().expect("residue fits in u64")
    }

    fn inv(&self, x: u64) -> u64 {
        // Fermat
        let mut base = x % self.p;
        let mut e = self.p - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        acc
    }

    /// Inserts a sparse integer vector; returns whether it raised the rank.
    pub fn insert_sparse(&mut self, entries: &[(usize, i64)]) -> bool {
        let mut v = vec![0u64; self.dim];
        for &(i, x) in entries {
            v[i] = (v[i] + self.reduce_i64(x)) % self.p;
        }
        self.insert_dense(v)
    }

    pub fn insert_big(&mut self, entries: &[BigInt]) -> bool {
        let v = entries.iter().map(|x| self.reduce_big(x)).collect();
        self.insert_dense(v)
    }

    fn insert_dense(&mut self, mut v: Vec<u64>) -> bool {
        let p = self.p;
        // RREF rows vanish on each other's pivots, so the coefficients can
        // all be read off the incoming vector before subtracting.
        let coeffs: Vec<(usize, u64)> = self
            .pivots
            .iter()
            .enumerate()
            .filter(|(_, &c)| v[c] != 0)
            .map(|(k, &c)| (k, v[c]))
            .collect();
        for (k, c) in coeffs {
            let row = &self.rows[k];
            for (x, &y) in v.iter_mut().zip(row) {
                if y != 0 {
                    *x = (*x + p - c * y % p) % p;
                }
            }
        }
        let Some(q) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.inv(v[q]);
        for x in v.iter_mut() {
            *x = *x * inv % p;
        }
        for row in self.rows.iter_mut() {
            let c = row[q];
            if c != 0 {
                for (x, &y) in row.iter_mut().zip(&v) {
                    if y != 0 {
                        *x = (*x + p - c * y % p) % p;
                    }
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(q);
        true
    }
}

/// Rank of a set of vectors over Z/2.
pub fn gf2_rank(vectors: &[Vec<bool>]) -> usize {
    let width = vectors.first().map_or(0, Vec::len);
    let words = width.div_ceil(64);
    let mut rows: Vec<Vec<u64>> = vectors
        .iter()
        .map(|v| {
            let mut w = vec![0u64; words];
            for (i, &b) in v.iter().enumerate() {
                if b {
                    w[i / 64] |= 1 << (i % 64);
                }
            }
            w
        })
        .collect();
    let mut rank = 0;
    for col in 0..width {
        let (wi, bit) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][wi] & bit != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[wi] & bit != 0 {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_snf(a: &IntMatrix) -> SnfResult {
        let s = snf(a);
        let diag = IntMatrix::diagonal(a.rows(), a.cols(), &s.d);
        assert_eq!(s.u.mul(a).unwrap().mul(&s.v).unwrap(), diag);
        assert!(s.u.determinant().unwrap().magnitude().is_one());
        assert!(s.v.determinant().unwrap().magnitude().is_one());
        for w in s.d.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]) || w[0].is_zero() && w[1].is_zero());
        }
        s
    }

    #[test]
    fn snf_examples() {
        assert_eq!(check_snf(&IntMatrix::identity(3)).d, big(&[1, 1, 1]));
        assert_eq!(check_snf(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]])).d, big(&[1, 6]));
        assert_eq!(check_snf(&IntMatrix::zeros(2, 2)).d, big(&[0, 0]));
    }

    #[test]
    fn snf_rectangular_and_negative() {
        let a = IntMatrix::from_i64(&[&[4, -6, 2], &[-2, 3, 8]]);
        let s = check_snf(&a);
        assert_eq!(s.rank(), 2);
        let b = IntMatrix::from_i64(&[&[0, 0], &[6, 4], &[-3, 9]]);
        check_snf(&b);
    }

    #[test]
    fn direct_summand_examples() {
        let e1 = IntMatrix::from_i64(&[&[1, 0]]);
        assert!(is_direct_summand(&e1, 2).unwrap());
        let two = IntMatrix::from_i64(&[&[2, 0]]);
        assert!(!is_direct_summand(&two, 2).unwrap());
        // SNF of [[1,1],[0,2]] is [1,2]: index-2 sublattice, not a summand
        let m = IntMatrix::from_i64(&[&[1, 1], &[0, 2]]);
        assert_eq!(check_snf(&m).d, big(&[1, 2]));
        assert!(!is_direct_summand(&m, 2).unwrap());
        assert!(matches!(is_direct_summand(&e1, 3), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn saturate_examples() {
        let s = saturate(&IntMatrix::from_i64(&[&[2, 0]]), 2).unwrap();
        assert_eq!(s, IntMatrix::from_i64(&[&[1, 0]]));
        let s = saturate(&IntMatrix::from_i64(&[&[2, 2]]), 2).unwrap();
        assert_eq!(s, IntMatrix::from_i64(&[&[1, 1]]));
        let s = saturate(&IntMatrix::from_i64(&[&[1, 0], &[0, 2]]), 2).unwrap();
        assert_eq!(s, IntMatrix::identity(2));
        assert!(saturate(&IntMatrix::from_i64(&[&[1, 0]]), 3).is_err());
    }

    #[test]
    fn saturate_empty_span() {
        let z = IntMatrix::zeros(0, 3);
        assert_eq!(saturate(&z, 3).unwrap().rows(), 0);
        assert!(is_direct_summand(&z, 3).unwrap());
    }

    #[test]
    fn transfer_examples() {
        let id = IntMatrix::identity(3);
        let t = verify_summand_transfer(&id, &id).unwrap();
        assert_eq!((t.composite_summand_full_rank, t.inner_summand), (true, true));
        let l1 = IntMatrix::from_i64(&[&[1, 0], &[0, 1], &[0, 0]]);
        let l3 = IntMatrix::identity(3).scale(&BigInt::from(2));
        let t = verify_summand_transfer(&l1, &l3).unwrap();
        assert!(!t.composite_summand_full_rank);
        assert!(t.inner_summand);
        assert!(t.implication_holds());
        assert!(verify_summand_transfer(&l1, &IntMatrix::identity(2)).is_err());
    }

    #[test]
    fn cokernel_examples() {
        let g = cokernel(&IntMatrix::zeros(0, 3));
        assert_eq!(g, FgAbGroup { free_rank: 3, torsion: vec![] });
        let g = cokernel(&IntMatrix::from_i64(&[&[2]]));
        assert_eq!(g, FgAbGroup { free_rank: 0, torsion: big(&[2]) });
        let g = cokernel(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]]));
        assert_eq!(g.torsion, big(&[6]));
        assert_eq!(g.to_string(), "(Z/6)^1");
    }

    #[test]
    fn hnf_and_kernel() {
        let a = IntMatrix::from_i64(&[&[2, 4, 6], &[1, 2, 3], &[0, 1, 1]]);
        let h = hnf(&a);
        assert_eq!(h.u.mul(&a).unwrap(), h.h);
        assert_eq!(h.rank(), 2);
        let k = left_kernel(&a);
        assert_eq!(k.rows(), 1);
        assert!(k.mul(&a).unwrap().is_zero());
    }

    #[test]
    fn modp_and_gf2_ranks() {
        let mut e = ModpEchelon::new(CERT_PRIME, 3);
        assert!(e.insert_sparse(&[(0, 1), (1, 1)]));
        assert!(e.insert_sparse(&[(1, 1), (2, 1)]));
        assert!(!e.insert_sparse(&[(0, 1), (2, -1)]));
        assert!(e.insert_sparse(&[(2, 5)]));
        assert_eq!(e.rank(), 3);
        let v = vec![vec![true, true, false], vec![false, true, true], vec![true, false, true]];
        assert_eq!(gf2_rank(&v), 2);
    }

    #[test]
    fn determinant_and_inverse() {
        let a = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.determinant().unwrap(), BigInt::one());
        let inv = unimodular_inverse(&a).unwrap();
        assert_eq!(a.mul(&inv).unwrap(), IntMatrix::identity(2));
        assert!(unimodular_inverse(&IntMatrix::from_i64(&[&[2, 0], &[0, 1]])).is_err());
    }
}
