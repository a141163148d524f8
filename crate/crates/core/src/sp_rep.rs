//! The symplectic lattice `H = Z^{2g}`, elementary generators of `Sp(2g, Z)`,
//! their action on `Λ³H`, the contraction `Λ³H → H` and the Johnson image.
//!
//! Coordinates on `H` are interleaved, `a1, b1, a2, b2, …`, matching the
//! letter order used everywhere else. The generator matrices are written in
//! the block basis `(a_1..a_g, b_1..b_g)`, where the form is `(0 I; −I 0)`,
//! and conjugated into interleaved coordinates.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::assoc::letter_name;
use crate::error::{Error, Result};
use crate::int_linalg::{is_direct_summand, same_row_span, saturate, IntMatrix, ModpEchelon, CERT_PRIME};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SymplecticSpace {
    genus: usize,
}

impl SymplecticSpace {
    pub fn new(genus: usize) -> Result<Self> {
        if genus == 0 {
            return Err(Error::InvalidArgument("genus must be at least 1".into()));
        }
        Ok(Self { genus })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn dim(&self) -> usize {
        2 * self.genus
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.dim() as u8).map(letter_name).collect()
    }

    /// Gram matrix of `ω` in interleaved coordinates: `ω(a_i, b_i) = 1`.
    pub fn form(&self) -> IntMatrix {
        let n = self.dim();
        let mut rows = vec![vec![BigInt::zero(); n]; n];
        for i in 0..self.genus {
            rows[2 * i][2 * i + 1] = BigInt::one();
            rows[2 * i + 1][2 * i] = -BigInt::one();
        }
        IntMatrix::from_rows(rows, n).expect("square")
    }

    /// `(0 I; −I 0)` in block coordinates.
    pub fn block_form(&self) -> IntMatrix {
        let g = self.genus;
        let mut rows = vec![vec![BigInt::zero(); 2 * g]; 2 * g];
        for i in 0..g {
            rows[i][g + i] = BigInt::one();
            rows[g + i][i] = -BigInt::one();
        }
        IntMatrix::from_rows(rows, 2 * g).expect("square")
    }

    /// Permutation taking block coordinates to interleaved ones.
    fn block_to_interleaved(&self) -> IntMatrix {
        let g = self.genus;
        let mut rows = vec![vec![BigInt::zero(); 2 * g]; 2 * g];
        for i in 0..g {
            rows[2 * i][i] = BigInt::one();
            rows[2 * i + 1][g + i] = BigInt::one();
        }
        IntMatrix::from_rows(rows, 2 * g).expect("square")
    }

    pub fn pair(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        let mut s = BigInt::zero();
        for i in 0..self.genus {
            s += &x[2 * i] * &y[2 * i + 1] - &x[2 * i + 1] * &y[2 * i];
        }
        s
    }

    /// `C(2g, 3)`.
    pub fn ext_dim(&self) -> usize {
        let n = self.dim();
        n * n.saturating_sub(1) * n.saturating_sub(2) / 6
    }

    /// Basis triples `i < j < k` in lexicographic order.
    pub fn triples(&self) -> Vec<[usize; 3]> {
        let n = self.dim();
        let mut out = Vec::with_capacity(self.ext_dim());
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    out.push([i, j, k]);
                }
            }
        }
        out
    }

    /// Position of the sorted triple `i < j < k`.
    pub fn triple_index(&self, t: [usize; 3]) -> usize {
        let n = self.dim();
        let [i, j, k] = t;
        // triples starting below i, then pairs (j', k') in i+1..n below (j, k)
        let before_i: usize = (0..i).map(|a| (n - a - 1) * (n - a - 2) / 2).sum();
        let before_j: usize = (i + 1..j).map(|b| n - b - 1).sum();
        before_i + before_j + (k - j - 1)
    }

    /// `e_i ∧ e_j ∧ e_k` as `(sign, index)`, or `None` when it vanishes.
    pub fn basis_wedge(&self, i: usize, j: usize, k: usize) -> Option<(i32, usize)> {
        let mut t = [i, j, k];
        let mut sign = 1;
        for a in 0..3 {
            for b in 0..2 - a {
                if t[b] > t[b + 1] {
                    t.swap(b, b + 1);
                    sign = -sign;
                }
            }
        }
        if t[0] == t[1] || t[1] == t[2] {
            return None;
        }
        Some((sign, self.triple_index(t)))
    }

    pub fn wedge(&self, x: &[BigInt], y: &[BigInt], z: &[BigInt]) -> ExtVector {
        let mut out = ExtVector::zero(*self);
        for (r, t) in self.triples().into_iter().enumerate() {
            let m = [x, y, z];
            out.coords[r] = det3(|a, b| m[b][t[a]].clone());
        }
        out
    }

    /// `θ = Σ_i a_i ∧ b_i` wedged with `v`.
    pub fn theta_wedge(&self, v: &[BigInt]) -> ExtVector {
        let mut out = ExtVector::zero(*self);
        for i in 0..self.genus {
            for (x, c) in v.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if let Some((s, idx)) = self.basis_wedge(2 * i, 2 * i + 1, x) {
                    out.coords[idx] += c * s;
                }
            }
        }
        out
    }

    pub fn unit(&self, i: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.dim()];
        v[i] = BigInt::one();
        v
    }
}

fn det3(m: impl Fn(usize, usize) -> BigInt) -> BigInt {
    &m(0, 0) * (&m(1, 1) * &m(2, 2) - &m(1, 2) * &m(2, 1)) - &m(0, 1) * (&m(1, 0) * &m(2, 2) - &m(1, 2) * &m(2, 0))
        + &m(0, 2) * (&m(1, 0) * &m(2, 1) - &m(1, 1) * &m(2, 0))
}

/// An element of `Λ³H` in the lexicographic triple basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtVector {
    space: SymplecticSpace,
    coords: Vec<BigInt>,
}

impl ExtVector {
    pub fn zero(space: SymplecticSpace) -> Self {
        Self {
            space,
            coords: vec![BigInt::zero(); space.ext_dim()],
        }
    }

    pub fn from_coords(space: SymplecticSpace, coords: Vec<BigInt>) -> Result<Self> {
        if coords.len() != space.ext_dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for a space of dimension {}",
                coords.len(),
                space.ext_dim()
            )));
        }
        Ok(Self { space, coords })
    }

    pub fn space(&self) -> SymplecticSpace {
        self.space
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Nonzero coordinates as `(triple, coefficient)`.
    pub fn support(&self) -> Vec<([usize; 3], BigInt)> {
        self.space
            .triples()
            .into_iter()
            .zip(&self.coords)
            .filter(|(_, c)| !c.is_zero())
            .map(|(t, c)| (t, c.clone()))
            .collect()
    }
}

impl fmt::Display for ExtVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let support = self.support();
        if support.is_empty() {
            return write!(f, "0");
        }
        for (n, (t, c)) in support.into_iter().enumerate() {
            let name = t.map(|i| letter_name(i as u8)).join("∧");
            if n == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            if c.abs().is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{}*{name}", c.abs())?;
            }
        }
        Ok(())
    }
}

/// The five shapes of elementary symplectic matrices, in block form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum SpFamily {
    /// `(I, e_ii; 0, I)`
    UpperDiagonal,
    /// `(I, 0; e_ii, I)`
    LowerDiagonal,
    /// `(I, 0; e_ij + e_ji, I)`, `i < j`
    LowerSymmetric,
    /// `(I, e_ij + e_ji; 0, I)`, `i < j`
    UpperSymmetric,
    /// `(I + e_ij, 0; 0, I − e_ji)`, `i ≠ j`
    Diagonal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpGenerator {
    family: SpFamily,
    i: usize,
    j: usize,
    /// Interleaved coordinates.
    matrix: IntMatrix,
}

impl SpGenerator {
    /// Builds the `λ = 1` instance; indices are 0-based handle indices.
    pub fn new(space: &SymplecticSpace, family: SpFamily, i: usize, j: usize) -> Result<Self> {
        let g = space.genus();
        if i >= g || j >= g {
            return Err(Error::InvalidArgument(format!("handle index out of range for genus {g}")));
        }
        let valid = match family {
            SpFamily::UpperDiagonal | SpFamily::LowerDiagonal => i == j,
            SpFamily::LowerSymmetric | SpFamily::UpperSymmetric => i < j,
            SpFamily::Diagonal => i != j,
        };
        if !valid {
            return Err(Error::InvalidArgument(format!("indices ({i}, {j}) invalid for {family:?}")));
        }
        let mut block = IntMatrix::identity(2 * g).to_rows();
        let one = BigInt::one();
        match family {
            SpFamily::UpperDiagonal => block[i][g + i] = one,
            SpFamily::LowerDiagonal => block[g + i][i] = one,
            SpFamily::LowerSymmetric => {
                block[g + i][j] = one.clone();
                block[g + j][i] = one;
            }
            SpFamily::UpperSymmetric => {
                block[i][g + j] = one.clone();
                block[j][g + i] = one;
            }
            SpFamily::Diagonal => {
                block[i][j] = one.clone();
                block[g + j][g + i] = -one;
            }
        }
        let block = IntMatrix::from_rows(block, 2 * g)?;
        if block.transpose().mul(&space.block_form())?.mul(&block)? != space.block_form() {
            return Err(Error::NotInvariant);
        }
        let p = space.block_to_interleaved();
        let matrix = p.mul(&block)?.mul(&p.transpose())?;
        if matrix.transpose().mul(&space.form())?.mul(&matrix)? != space.form() {
            return Err(Error::NotInvariant);
        }
        Ok(Self { family, i, j, matrix })
    }

    pub fn family(&self) -> SpFamily {
        self.family
    }

    pub fn indices(&self) -> (usize, usize) {
        (self.i, self.j)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }
}

/// All `λ = 1` generators: `g + g + C(g,2) + C(g,2) + g(g−1)` matrices.
pub fn sp_generators(genus: usize) -> Result<Vec<SpGenerator>> {
    let space = SymplecticSpace::new(genus)?;
    let mut out = Vec::new();
    for i in 0..genus {
        out.push(SpGenerator::new(&space, SpFamily::UpperDiagonal, i, i)?);
    }
    for i in 0..genus {
        out.push(SpGenerator::new(&space, SpFamily::LowerDiagonal, i, i)?);
    }
    for fam in [SpFamily::LowerSymmetric, SpFamily::UpperSymmetric] {
        for i in 0..genus {
            for j in i + 1..genus {
                out.push(SpGenerator::new(&space, fam, i, j)?);
            }
        }
    }
    for i in 0..genus {
        for j in 0..genus {
            if i != j {
                out.push(SpGenerator::new(&space, SpFamily::Diagonal, i, j)?);
            }
        }
    }
    Ok(out)
}

/// `Λ³M` on column vectors: entry `(P, Q)` is the minor of `M` on rows `P`,
/// columns `Q`.
pub fn lambda3_matrix(m: &IntMatrix) -> Result<IntMatrix> {
    if m.rows() != m.cols() || m.rows() % 2 == 1 || m.rows() == 0 {
        return Err(Error::DimensionMismatch("expected a square matrix of even size".into()));
    }
    let space = SymplecticSpace::new(m.rows() / 2)?;
    let triples = space.triples();
    let rows = triples
        .iter()
        .map(|p| {
            triples
                .iter()
                .map(|q| det3(|a, b| m[(p[a], q[b])].clone()))
                .collect()
        })
        .collect();
    IntMatrix::from_rows(rows, triples.len())
}

pub fn lambda3_action(gen: &SpGenerator) -> IntMatrix {
    lambda3_matrix(gen.matrix()).expect("generator is square of even size")
}

/// `x∧y∧z ↦ ω(x,y)z − ω(x,z)y + ω(y,z)x`.
pub fn contraction(v: &ExtVector) -> Vec<BigInt> {
    let space = v.space();
    let mut out = vec![BigInt::zero(); space.dim()];
    for ([i, j, k], c) in v.support() {
        let w = |x: usize, y: usize| -> i64 {
            if x / 2 != y / 2 || x == y {
                0
            } else if x % 2 == 0 {
                1
            } else {
                -1
            }
        };
        out[k] += &c * w(i, j);
        out[j] -= &c * w(i, k);
        out[i] += &c * w(j, k);
    }
    out
}

/// Matrix of the contraction on column vectors, `2g × C(2g,3)`.
pub fn contraction_matrix(space: &SymplecticSpace) -> IntMatrix {
    let n = space.ext_dim();
    let mut rows = vec![vec![BigInt::zero(); n]; space.dim()];
    for col in 0..n {
        let mut e = ExtVector::zero(*space);
        e.coords[col] = BigInt::one();
        for (r, x) in contraction(&e).into_iter().enumerate() {
            rows[r][col] = x;
        }
    }
    IntMatrix::from_rows(rows, n).expect("consistent widths")
}

/// Matrix of `v ↦ θ∧v` on column vectors, `C(2g,3) × 2g`.
pub fn theta_section_matrix(space: &SymplecticSpace) -> IntMatrix {
    let cols: Vec<Vec<BigInt>> = (0..space.dim())
        .map(|i| space.theta_wedge(&space.unit(i)).coords)
        .collect();
    IntMatrix::from_rows(cols, space.ext_dim()).expect("consistent widths").transpose()
}

/// Rows `θ∧a_1, θ∧b_1, …, θ∧a_g, θ∧b_g`.
pub fn johnson_image(genus: usize) -> Result<IntMatrix> {
    if genus < 2 {
        return Err(Error::InvalidArgument("genus must be at least 2".into()));
    }
    Ok(theta_section_matrix(&SymplecticSpace::new(genus)?).transpose())
}

/// Largest genus whose commutant system is attempted.
pub const MAX_COMMUTANT_GENUS: usize = 4;

fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64()
        .ok_or_else(|| Error::ResourceBound("matrix entry exceeds 64 bits".into()))
}

/// Whether `x` commutes with `Λ³M` for every generator `M`.
pub fn in_commutant(actions: &[IntMatrix], x: &IntMatrix) -> Result<bool> {
    for a in actions {
        if x.mul(a)? != a.mul(x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Dimension over Q of the matrices commuting with the `Λ³H` action.
///
/// Two explicit commuting matrices, the identity and `θ∧(contraction)`,
/// are checked exactly and shown independent, giving dimension ≥ 2. The
/// commutation system's rank mod a prime bounds its rank over Q from below,
/// so rank `N² − 2` mod p gives dimension ≤ 2. If the bounds do not meet the
/// rank is computed exactly.
pub fn commutant_dimension(genus: usize) -> Result<usize> {
    if genus < 3 {
        return Err(Error::InvalidArgument("genus must be at least 3".into()));
    }
    if genus > MAX_COMMUTANT_GENUS {
        return Err(Error::ResourceBound(format!(
            "commutant system for genus {genus} exceeds the supported size"
        )));
    }
    let space = SymplecticSpace::new(genus)?;
    let n = space.ext_dim();
    let actions: Vec<IntMatrix> = sp_generators(genus)?.iter().map(lambda3_action).collect();

    let section = theta_section_matrix(&space).mul(&contraction_matrix(&space))?;
    let identity = IntMatrix::identity(n);
    let explicit = [identity.clone(), section.clone()];
    let mut lower = 0;
    if explicit
        .iter()
        .map(|x| in_commutant(&actions, x))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|b| b)
    {
        let flat = |m: &IntMatrix| (0..n).flat_map(|r| m.row(r).to_vec()).collect::<Vec<_>>();
        lower = IntMatrix::from_rows(vec![flat(&identity), flat(&section)], n * n)?.rank();
    }

    let unknowns = n * n;
    let mut ech = ModpEchelon::new(CERT_PRIME, unknowns);
    let target = unknowns - lower;
    'outer: for a in &actions {
        let a64: Vec<Vec<i64>> = (0..n)
            .map(|r| a.row(r).iter().map(to_i64).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        for p in 0..n {
            for q in 0..n {
                // (XA − AX)_{pq}
                let mut eq: Vec<(usize, i64)> = Vec::new();
                for r in 0..n {
                    if a64[r][q] != 0 {
                        eq.push((p * n + r, a64[r][q]));
                    }
                    if a64[p][r] != 0 {
                        eq.push((r * n + q, -a64[p][r]));
                    }
                }
                if eq.is_empty() {
                    continue;
                }
                ech.insert_sparse(&eq);
                if ech.rank() == target {
                    break 'outer;
                }
            }
        }
    }
    if ech.rank() == target {
        return Ok(lower);
    }
    // bounds did not meet: rebuild the whole system exactly
    if n > 20 {
        return Err(Error::ResourceBound("exact commutant fallback too large".into()));
    }
    let mut rows = Vec::new();
    for a in &actions {
        for p in 0..n {
            for q in 0..n {
                let mut row = vec![BigInt::zero(); unknowns];
                for r in 0..n {
                    row[p * n + r] += &a[(r, q)];
                    row[r * n + q] -= &a[(p, r)];
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    Ok(unknowns - IntMatrix::from_rows(rows, unknowns)?.rank())
}

/// Whether the row span of `v` is carried into its rational span by every
/// generator. For a direct summand this is invariance over Z as well.
pub fn is_invariant(space: &SymplecticSpace, v: &IntMatrix) -> Result<bool> {
    if v.cols() != space.ext_dim() {
        return Err(Error::DimensionMismatch(format!(
            "{} columns, expected {}",
            v.cols(),
            space.ext_dim()
        )));
    }
    let base = v.rank();
    for gen in sp_generators(space.genus())? {
        let image = lambda3_action(&gen).mul(&v.transpose())?.transpose();
        if v.vstack(&image)?.rank() != base {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Passes from an invariant summand `V` to `V ⊗ Q` and back to its integral
/// points, and checks both composites are the identity.
pub fn summand_correspondence_roundtrip(space: &SymplecticSpace, v: &IntMatrix) -> Result<bool> {
    let n = space.ext_dim();
    if !is_direct_summand(v, n)? {
        return Err(Error::NotSummand);
    }
    if !is_invariant(space, v)? {
        return Err(Error::NotInvariant);
    }
    // integral points of the rational span
    let w_z = saturate(v, n)?;
    let back = saturate(&w_z, n)?;
    Ok(same_row_span(&w_z, v) && same_row_span(&back, &w_z) && w_z.rank() == v.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int_linalg::{random_unimodular, snf};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn triple_index_is_lexicographic() {
        for g in 1..=4 {
            let s = SymplecticSpace::new(g).unwrap();
            for (r, t) in s.triples().into_iter().enumerate() {
                assert_eq!(s.triple_index(t), r);
            }
        }
        assert_eq!(SymplecticSpace::new(3).unwrap().ext_dim(), 20);
        assert_eq!(SymplecticSpace::new(4).unwrap().ext_dim(), 56);
    }

    #[test]
    fn generator_counts_and_form() {
        let counts: Vec<usize> = (1..=3).map(|g| sp_generators(g).unwrap().len()).collect();
        assert_eq!(counts, vec![2, 8, 18]);
        for g in 1..=3 {
            let s = SymplecticSpace::new(g).unwrap();
            for gen in sp_generators(g).unwrap() {
                let m = gen.matrix();
                assert_eq!(m.transpose().mul(&s.form()).unwrap().mul(m).unwrap(), s.form());
            }
        }
        let s = SymplecticSpace::new(2).unwrap();
        assert!(SpGenerator::new(&s, SpFamily::Diagonal, 1, 1).is_err());
        assert!(SpGenerator::new(&s, SpFamily::UpperSymmetric, 1, 0).is_err());
    }

    #[test]
    fn lambda3_determinant_and_identity() {
        for gen in sp_generators(3).unwrap() {
            let a = lambda3_action(&gen);
            assert_eq!(a.rows(), 20);
            assert!(a.determinant().unwrap().abs().is_one());
        }
        assert_eq!(lambda3_matrix(&IntMatrix::identity(6)).unwrap(), IntMatrix::identity(20));
    }

    #[test]
    fn lambda3_is_multiplicative() {
        let gens = sp_generators(3).unwrap();
        for x in gens.iter().step_by(3) {
            for y in gens.iter().step_by(4) {
                let xy = x.matrix().mul(y.matrix()).unwrap();
                assert_eq!(
                    lambda3_matrix(&xy).unwrap(),
                    lambda3_action(x).mul(&lambda3_action(y)).unwrap()
                );
            }
        }
        // M·M⁻¹: the symplectic inverse is −J Mᵀ J
        let s = SymplecticSpace::new(3).unwrap();
        let j = s.form();
        for gen in &gens {
            let inv = j.mul(&gen.matrix().transpose()).unwrap().mul(&j).unwrap().scale(&BigInt::from(-1));
            let prod = lambda3_action(gen).mul(&lambda3_matrix(&inv).unwrap()).unwrap();
            assert_eq!(prod, IntMatrix::identity(20));
        }
    }

    #[test]
    fn contraction_examples() {
        let s = SymplecticSpace::new(3).unwrap();
        let e = |i| s.unit(i);
        assert!(contraction(&s.wedge(&e(0), &e(2), &e(4))).iter().all(Zero::is_zero));
        assert_eq!(contraction(&s.wedge(&e(0), &e(1), &e(2))), e(2));
        assert_eq!(contraction(&s.theta_wedge(&e(0))), big(&[2, 0, 0, 0, 0, 0]));
        // (g − 1)·v in general
        let v = big(&[3, -1, 0, 2, 5, 7]);
        let c = contraction(&s.theta_wedge(&v));
        assert_eq!(c, v.iter().map(|x| x * 2).collect::<Vec<_>>());
    }

    #[test]
    fn contraction_kernel_dimension() {
        for g in 2..=4 {
            let s = SymplecticSpace::new(g).unwrap();
            let c = contraction_matrix(&s);
            assert_eq!(c.rank(), 2 * g);
            assert_eq!(s.ext_dim() - c.rank(), s.ext_dim() - 2 * g);
        }
    }

    #[test]
    fn johnson_image_examples() {
        let j = johnson_image(3).unwrap();
        let s = SymplecticSpace::new(3).unwrap();
        let row = ExtVector::from_coords(s, j.row(0).to_vec()).unwrap();
        let support: Vec<[usize; 3]> = row.support().into_iter().map(|(t, _)| t).collect();
        assert_eq!(support, vec![[0, 2, 3], [0, 4, 5]]);
        assert_eq!(row.to_string(), "a1∧a2∧b2 + a1∧a3∧b3");
        assert_eq!(johnson_image(2).unwrap().rank(), 4);
        for g in 2..=3 {
            let j = johnson_image(g).unwrap();
            assert_eq!(j.rank(), 2 * g);
            assert!(snf(&j).d.iter().all(|x| x.is_one()));
            assert!(is_direct_summand(&j, SymplecticSpace::new(g).unwrap().ext_dim()).unwrap());
        }
        assert!(johnson_image(1).is_err());
    }

    #[test]
    fn commutant_genus_three() {
        assert_eq!(commutant_dimension(3).unwrap(), 2);
        assert!(commutant_dimension(2).is_err());
        assert!(matches!(commutant_dimension(5), Err(Error::ResourceBound(_))));
    }

    #[test]
    fn projections_commute() {
        let s = SymplecticSpace::new(3).unwrap();
        let actions: Vec<IntMatrix> = sp_generators(3).unwrap().iter().map(lambda3_action).collect();
        let sc = theta_section_matrix(&s).mul(&contraction_matrix(&s)).unwrap();
        // integer multiples of the two projections: s∘c and (g−1)I − s∘c
        let comp = IntMatrix::identity(20).scale(&BigInt::from(2)).sub(&sc).unwrap();
        assert!(in_commutant(&actions, &sc).unwrap());
        assert!(in_commutant(&actions, &comp).unwrap());
        assert_eq!(sc.mul(&comp).unwrap(), IntMatrix::zeros(20, 20));
        assert_eq!(sc.rank(), 6);
        assert_eq!(comp.rank(), 14);
    }

    #[test]
    #[ignore = "long-running: 3136 unknowns"]
    fn commutant_genus_four() {
        assert_eq!(commutant_dimension(4).unwrap(), 2);
    }

    #[test]
    fn roundtrip_examples() {
        let s = SymplecticSpace::new(3).unwrap();
        let j = johnson_image(3).unwrap();
        assert!(summand_correspondence_roundtrip(&s, &j).unwrap());
        assert!(summand_correspondence_roundtrip(&s, &IntMatrix::identity(20)).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let u = random_unimodular(6, 30, &mut rng);
            assert!(summand_correspondence_roundtrip(&s, &u.mul(&j).unwrap()).unwrap());
        }
        let s2 = SymplecticSpace::new(2).unwrap();
        assert!(is_invariant(&s2, &johnson_image(2).unwrap()).unwrap());
    }

    #[test]
    fn roundtrip_errors() {
        let s = SymplecticSpace::new(3).unwrap();
        let j = johnson_image(3).unwrap();
        assert!(matches!(
            summand_correspondence_roundtrip(&s, &j.scale(&BigInt::from(2))),
            Err(Error::NotSummand)
        ));
        let single = IntMatrix::from_rows(vec![s.wedge(&s.unit(0), &s.unit(2), &s.unit(4)).coords], 20).unwrap();
        assert!(matches!(
            summand_correspondence_roundtrip(&s, &single),
            Err(Error::NotInvariant)
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn contraction_is_equivariant(coords in proptest::collection::vec(-5i64..=5, 20)) {
            let s = SymplecticSpace::new(3).unwrap();
            let v = ExtVector::from_coords(s, big(&coords)).unwrap();
            for gen in sp_generators(3).unwrap() {
                let moved = ExtVector::from_coords(s, lambda3_action(&gen).apply(v.coords())).unwrap();
                prop_assert_eq!(contraction(&moved), gen.matrix().apply(&contraction(&v)));
            }
        }

        #[test]
        fn wedge_is_alternating(x in proptest::collection::vec(-3i64..=3, 4),
                                y in proptest::collection::vec(-3i64..=3, 4),
                                z in proptest::collection::vec(-3i64..=3, 4)) {
            let s = SymplecticSpace::new(2).unwrap();
            let (x, y, z) = (big(&x), big(&y), big(&z));
            prop_assert!(s.wedge(&x, &x, &z).is_zero());
            let a = s.wedge(&x, &y, &z);
            let b = s.wedge(&y, &x, &z);
            prop_assert_eq!(a.coords().iter().map(|c| -c).collect::<Vec<_>>(), b.coords().to_vec());
        }
    }
}
