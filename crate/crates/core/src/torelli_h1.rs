//! Boolean polynomials, the map `q: B_3 → Λ³H ⊗ Z/2`, and the fibre
//! products whose invariants describe `H_1` of the Torelli group.
//!
//! `q` sends a cubic monomial `xyz` to `x∧y∧z` and lower-degree monomials
//! to zero. It is a reconstruction with the properties the computation
//! needs (Z/2-linear, onto, kills `B_2`), not a transcription of a known
//! formula, and reports carry that caveat.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::assoc::letter_name;
use crate::error::{Error, Result};
use crate::int_linalg::{cokernel, gf2_rank, same_row_span, FgAbGroup, IntMatrix};
use crate::sp_rep::SymplecticSpace;

/// Largest genus for which pullbacks are presented.
pub const MAX_PULLBACK_GENUS: usize = 6;

/// A squarefree monomial; bit `i` is the indeterminate for letter `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub u32);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_vars(vars: &[usize]) -> Self {
        Monomial(vars.iter().fold(0, |m, &v| m | (1 << v)))
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn vars(self) -> Vec<usize> {
        (0..32).filter(|&i| self.0 & (1 << i) != 0).collect()
    }

    /// Idempotent variables: `x·x = x`.
    pub fn mul(self, other: Self) -> Self {
        Monomial(self.0 | other.0)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        for v in self.vars() {
            write!(f, "{}", letter_name(v as u8))?;
        }
        Ok(())
    }
}

/// Squarefree monomials of degree ≤ `bound` in `2g` variables, by degree and
/// then lexicographically in the variable lists.
pub fn bool_basis(genus: usize, bound: usize) -> Vec<Monomial> {
    let n = 2 * genus;
    let mut out = Vec::new();
    for d in 0..=bound.min(n) {
        let mut combo: Vec<usize> = (0..d).collect();
        loop {
            out.push(Monomial::from_vars(&combo));
            // next d-subset of 0..n
            let Some(pos) = (0..d).rev().find(|&i| combo[i] < n - d + i) else {
                break;
            };
            combo[pos] += 1;
            for k in pos + 1..d {
                combo[k] = combo[k - 1] + 1;
            }
        }
    }
    out
}

/// An element of `B_bound`, polynomials over Z/2 with idempotent variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoolPoly {
    genus: usize,
    bound: usize,
    support: BTreeSet<Monomial>,
}

impl BoolPoly {
    pub fn zero(genus: usize, bound: usize) -> Self {
        Self {
            genus,
            bound,
            support: BTreeSet::new(),
        }
    }

    pub fn from_monomials(genus: usize, bound: usize, monomials: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        let mut p = Self::zero(genus, bound);
        for m in monomials {
            if m.vars().iter().any(|&v| v >= 2 * genus) {
                return Err(Error::InvalidArgument(format!("monomial {m} outside genus {genus}")));
            }
            if m.degree() > bound {
                return Err(Error::DegreeOutOfRange {
                    degree: m.degree(),
                    max: bound,
                });
            }
            p.toggle(m);
        }
        Ok(p)
    }

    fn toggle(&mut self, m: Monomial) {
        if !self.support.remove(&m) {
            self.support.insert(m);
        }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn support(&self) -> &BTreeSet<Monomial> {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.support.iter().map(|m| m.degree()).max()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.genus != other.genus {
            return Err(Error::HandleMismatch);
        }
        let mut out = Self {
            genus: self.genus,
            bound: self.bound.max(other.bound),
            support: self.support.clone(),
        };
        for &m in &other.support {
            out.toggle(m);
        }
        Ok(out)
    }

    /// Coordinates over `bool_basis(genus, bound)`.
    pub fn coords(&self, basis: &[Monomial]) -> Result<Vec<bool>> {
        let mut v = vec![false; basis.len()];
        for m in &self.support {
            let i = basis
                .iter()
                .position(|b| b == m)
                .ok_or_else(|| Error::InvalidArgument(format!("monomial {m} not in basis")))?;
            v[i] = true;
        }
        Ok(v)
    }
}

impl fmt::Display for BoolPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support.is_empty() {
            return write!(f, "0");
        }
        let mut ms: Vec<&Monomial> = self.support.iter().collect();
        ms.sort_by_key(|m| (m.degree(), m.vars()));
        let parts: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `a = Σ_i a_i b_i` in `B_2`.
pub fn element_a(genus: usize) -> Result<BoolPoly> {
    if genus == 0 {
        return Err(Error::InvalidArgument("genus must be at least 1".into()));
    }
    BoolPoly::from_monomials(genus, 2, (0..genus).map(|i| Monomial::from_vars(&[2 * i, 2 * i + 1])))
}

/// `q(p)` as a Z/2 vector over the sorted triple basis of `Λ³H`.
pub fn q_map(p: &BoolPoly) -> Result<Vec<bool>> {
    if let Some(d) = p.degree() {
        if d > 3 {
            return Err(Error::DegreeOutOfRange { degree: d, max: 3 });
        }
    }
    let space = SymplecticSpace::new(p.genus())?;
    let mut out = vec![false; space.ext_dim()];
    for m in p.support() {
        if m.degree() == 3 {
            let v = m.vars();
            out[space.triple_index([v[0], v[1], v[2]])] ^= true;
        }
    }
    Ok(out)
}

/// Rank over Z/2 of `q` on all of `B_3` equals `C(2g, 3)`.
pub fn q_is_surjective(genus: usize) -> Result<bool> {
    let space = SymplecticSpace::new(genus)?;
    let images: Vec<Vec<bool>> = bool_basis(genus, 3)
        .into_iter()
        .map(|m| q_map(&BoolPoly::from_monomials(genus, 3, [m])?))
        .collect::<Result<_>>()?;
    Ok(gf2_rank(&images) == space.ext_dim())
}

/// `B_2 ⊆ ker q`.
pub fn q_kills_b2(genus: usize) -> Result<bool> {
    for m in bool_basis(genus, 2) {
        if q_map(&BoolPoly::from_monomials(genus, 2, [m])?)?.iter().any(|&b| b) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum PullbackKind {
    /// `{(p, v) ∈ B_3 × Λ³H : q(p) = v mod 2}`
    D1,
    /// `D1` modulo the subgroup generated by `(a, 0)`
    D3,
}

/// `D` as a quotient of a free abelian group.
///
/// Generators are `u_m = (m, lift q(m))` for each basis monomial `m` of `B_3`
/// and `w_e = (0, 2e)` for each basis triple `e`, in that order. The
/// relations `2u_m = Σ_{e ∈ q(m)} w_e` present the fibre product; `D3` adds
/// `Σ_i u_{a_i b_i}`, which is the element `(a, 0)`.
#[derive(Clone, Debug)]
pub struct PullbackGroup {
    genus: usize,
    kind: PullbackKind,
    include_constant: bool,
    monomials: Vec<Monomial>,
    lifts: Vec<Vec<bool>>,
    relations: IntMatrix,
    invariants: FgAbGroup,
}

impl PullbackGroup {
    pub fn build(genus: usize, kind: PullbackKind, include_constant: bool) -> Result<Self> {
        if genus < 2 {
            return Err(Error::InvalidArgument("genus must be at least 2".into()));
        }
        if genus > MAX_PULLBACK_GENUS {
            return Err(Error::ResourceBound(format!("pullback presentation for genus {genus}")));
        }
        let space = SymplecticSpace::new(genus)?;
        let monomials: Vec<Monomial> = bool_basis(genus, 3)
            .into_iter()
            .filter(|m| include_constant || m.degree() > 0)
            .collect();
        let lifts: Vec<Vec<bool>> = monomials
            .iter()
            .map(|&m| q_map(&BoolPoly::from_monomials(genus, 3, [m])?))
            .collect::<Result<_>>()?;
        let nb = monomials.len();
        let width = nb + space.ext_dim();
        let mut rows = Vec::new();
        for (i, lift) in lifts.iter().enumerate() {
            let mut row = vec![BigInt::zero(); width];
            row[i] = BigInt::from(2);
            for (e, &bit) in lift.iter().enumerate() {
                if bit {
                    row[nb + e] = BigInt::from(-1);
                }
            }
            rows.push(row);
        }
        if kind == PullbackKind::D3 {
            let mut row = vec![BigInt::zero(); width];
            for i in 0..genus {
                let m = Monomial::from_vars(&[2 * i, 2 * i + 1]);
                let k = monomials.iter().position(|&x| x == m).expect("degree-2 monomial present");
                row[k] = BigInt::one();
            }
            rows.push(row);
        }
        let relations = IntMatrix::from_rows(rows, width)?;
        let invariants = cokernel(&relations);
        Ok(Self {
            genus,
            kind,
            include_constant,
            monomials,
            lifts,
            relations,
            invariants,
        })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn kind(&self) -> PullbackKind {
        self.kind
    }

    pub fn includes_constant(&self) -> bool {
        self.include_constant
    }

    pub fn generator_count(&self) -> usize {
        self.relations.cols()
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn invariants(&self) -> &FgAbGroup {
        &self.invariants
    }

    /// `q` here is reconstructed, never a transcription.
    pub fn q_reconstructed(&self) -> bool {
        true
    }

    fn check_len(&self, x: &[BigInt]) -> Result<()> {
        if x.len() != self.generator_count() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for {} generators",
                x.len(),
                self.generator_count()
            )));
        }
        Ok(())
    }

    /// Image in `B_3`.
    pub fn project_bool(&self, x: &[BigInt]) -> Result<BoolPoly> {
        self.check_len(x)?;
        let two = BigInt::from(2);
        let ms = self
            .monomials
            .iter()
            .zip(x)
            .filter(|(_, c)| !c.mod_floor(&two).is_zero())
            .map(|(&m, _)| m);
        BoolPoly::from_monomials(self.genus, 3, ms)
    }

    /// Image in `Λ³H`.
    pub fn project_ext(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        self.check_len(x)?;
        let nb = self.monomials.len();
        let mut v: Vec<BigInt> = x[nb..].iter().map(|c| c * 2).collect();
        for (c, lift) in x[..nb].iter().zip(&self.lifts) {
            for (e, &bit) in lift.iter().enumerate() {
                if bit {
                    v[e] += c;
                }
            }
        }
        Ok(v)
    }

    /// Coordinates of a compatible pair `(p, v)`.
    pub fn element_from_pair(&self, p: &BoolPoly, v: &[BigInt]) -> Result<Vec<BigInt>> {
        let nb = self.monomials.len();
        if v.len() + nb != self.generator_count() {
            return Err(Error::DimensionMismatch("wrong Λ³H dimension".into()));
        }
        let mut x = vec![BigInt::zero(); self.generator_count()];
        let mut rest: Vec<BigInt> = v.to_vec();
        for m in p.support() {
            let i = self
                .monomials
                .iter()
                .position(|b| b == m)
                .ok_or_else(|| Error::InvalidArgument(format!("monomial {m} not a generator")))?;
            x[i] = BigInt::one();
            for (e, &bit) in self.lifts[i].iter().enumerate() {
                if bit {
                    rest[e] -= 1;
                }
            }
        }
        let two = BigInt::from(2);
        for (e, r) in rest.iter().enumerate() {
            let (quot, rem) = r.div_mod_floor(&two);
            if !rem.is_zero() {
                return Err(Error::InvalidArgument("pair is not compatible: q(p) ≠ v mod 2".into()));
            }
            x[nb + e] = quot;
        }
        Ok(x)
    }

    /// Whether `x` is the identity of the group.
    pub fn is_identity(&self, x: &[BigInt]) -> Result<bool> {
        self.check_len(x)?;
        let row = IntMatrix::from_rows(vec![x.to_vec()], self.generator_count())?;
        Ok(same_row_span(&self.relations, &self.relations.vstack(&row)?))
    }

    /// `(a, 0)` in these coordinates.
    pub fn element_a(&self) -> Result<Vec<BigInt>> {
        let space = SymplecticSpace::new(self.genus)?;
        self.element_from_pair(&element_a(self.genus)?, &vec![BigInt::zero(); space.ext_dim()])
    }
}

pub fn pullback_d1(genus: usize) -> Result<PullbackGroup> {
    PullbackGroup::build(genus, PullbackKind::D1, true)
}

pub fn pullback_d3(genus: usize) -> Result<PullbackGroup> {
    PullbackGroup::build(genus, PullbackKind::D3, true)
}

/// `dim B_2 = 1 + 2g + C(2g, 2)`.
pub fn dim_b2(genus: usize) -> usize {
    bool_basis(genus, 2).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn binom(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(bool_basis(3, 1).len(), 7);
        assert_eq!(bool_basis(3, 2).len(), 22);
        assert_eq!(bool_basis(2, 3).len(), 15);
        for g in 1..=4 {
            for i in 0..=4 {
                let expected: usize = (0..=i).map(|d| binom(2 * g, d)).sum();
                assert_eq!(bool_basis(g, i).len(), expected);
            }
        }
        let b = bool_basis(2, 2);
        let unique: BTreeSet<_> = b.iter().collect();
        assert_eq!(unique.len(), b.len());
        assert!(b.iter().all(|m| m.degree() <= 2));
    }

    #[test]
    fn element_a_examples() {
        assert_eq!(element_a(1).unwrap().to_string(), "a1b1");
        let a = element_a(3).unwrap();
        assert_eq!(a.to_string(), "a1b1 + a2b2 + a3b3");
        assert!(!a.is_zero());
        assert!(a.add(&a).unwrap().is_zero());
    }

    #[test]
    fn q_examples() {
        let space = SymplecticSpace::new(3).unwrap();
        let m = Monomial::from_vars(&[0, 2, 4]);
        let p = BoolPoly::from_monomials(3, 3, [m]).unwrap();
        let q = q_map(&p).unwrap();
        assert_eq!(q.iter().filter(|&&b| b).count(), 1);
        assert!(q[space.triple_index([0, 2, 4])]);
        let ab = BoolPoly::from_monomials(3, 2, [Monomial::from_vars(&[0, 1])]).unwrap();
        assert!(q_map(&ab).unwrap().iter().all(|&b| !b));
        assert!(q_map(&p.add(&p).unwrap()).unwrap().iter().all(|&b| !b));
        let quartic = BoolPoly::from_monomials(3, 4, [Monomial::from_vars(&[0, 1, 2, 3])]).unwrap();
        assert!(matches!(q_map(&quartic), Err(Error::DegreeOutOfRange { .. })));
        for g in 2..=3 {
            assert!(q_is_surjective(g).unwrap());
            assert!(q_kills_b2(g).unwrap());
        }
    }

    #[test]
    fn pullback_invariants() {
        let d = pullback_d1(2).unwrap();
        assert_eq!(d.invariants().free_rank, 4);
        assert_eq!(d.invariants().count_factor(2), 11);
        assert_eq!(d.invariants().torsion.len(), 11);
        let d = pullback_d1(3).unwrap();
        assert_eq!(d.invariants().free_rank, 20);
        assert_eq!(d.invariants().count_factor(2), 22);
        let d = pullback_d3(3).unwrap();
        assert_eq!(d.invariants().free_rank, 20);
        assert_eq!(d.invariants().count_factor(2), 21);
        assert_eq!(d.invariants().torsion.len(), 21);
        let d = pullback_d3(2).unwrap();
        assert_eq!((d.invariants().free_rank, d.invariants().torsion.len()), (4, 10));
        assert!(pullback_d1(1).is_err());
    }

    #[test]
    fn constant_convention_shifts_torsion_by_one() {
        for g in 2..=3 {
            for kind in [PullbackKind::D1, PullbackKind::D3] {
                let with = PullbackGroup::build(g, kind, true).unwrap();
                let without = PullbackGroup::build(g, kind, false).unwrap();
                assert_eq!(with.invariants().free_rank, without.invariants().free_rank);
                assert_eq!(with.invariants().torsion.len(), without.invariants().torsion.len() + 1);
            }
        }
    }

    #[test]
    fn element_a_is_killed_only_in_d3() {
        let d1 = pullback_d1(3).unwrap();
        let d3 = pullback_d3(3).unwrap();
        assert!(!d1.is_identity(&d1.element_a().unwrap()).unwrap());
        assert!(d3.is_identity(&d3.element_a().unwrap()).unwrap());
    }

    #[test]
    fn projection_to_ext_is_onto() {
        let d = pullback_d1(3).unwrap();
        let mut images = Vec::new();
        for i in 0..d.generator_count() {
            let mut x = vec![BigInt::zero(); d.generator_count()];
            x[i] = BigInt::one();
            images.push(d.project_ext(&x).unwrap());
        }
        let m = IntMatrix::from_rows(images, 20).unwrap();
        assert!(same_row_span(&m, &IntMatrix::identity(20)));
    }

    #[test]
    fn incompatible_pair_rejected() {
        let d = pullback_d1(2).unwrap();
        let p = BoolPoly::zero(2, 3);
        let mut v = vec![BigInt::zero(); 4];
        v[0] = BigInt::one();
        assert!(d.element_from_pair(&p, &v).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn pairs_round_trip(bits in proptest::collection::vec(any::<bool>(), 42),
                            v in proptest::collection::vec(-4i64..=4, 20)) {
            let g = 3;
            let d = pullback_d1(g).unwrap();
            let basis = bool_basis(g, 3);
            let p = BoolPoly::from_monomials(g, 3, basis.iter().zip(&bits).filter(|(_, &b)| b).map(|(&m, _)| m)).unwrap();
            // adjust v so that the pair is compatible
            let q = q_map(&p).unwrap();
            let v: Vec<BigInt> = v.iter().zip(&q).map(|(&x, &bit)| {
                let x = BigInt::from(x);
                if (x.is_odd()) != bit { x + 1 } else { x }
            }).collect();
            let x = d.element_from_pair(&p, &v).unwrap();
            prop_assert_eq!(d.project_bool(&x).unwrap(), p.clone());
            prop_assert_eq!(d.project_ext(&x).unwrap(), v.clone());
            // the square commutes
            let q2 = q_map(&d.project_bool(&x).unwrap()).unwrap();
            let parity: Vec<bool> = d.project_ext(&x).unwrap().iter().map(|c| c.is_odd()).collect();
            prop_assert_eq!(q2, parity);
        }

        #[test]
        fn q_is_linear(x in proptest::collection::vec(any::<bool>(), 15),
                       y in proptest::collection::vec(any::<bool>(), 15)) {
            let basis = bool_basis(2, 3);
            let mk = |bits: &Vec<bool>| BoolPoly::from_monomials(2, 3,
                basis.iter().zip(bits).filter(|(_, &b)| b).map(|(&m, _)| m)).unwrap();
            let (p, r) = (mk(&x), mk(&y));
            let lhs = q_map(&p.add(&r).unwrap()).unwrap();
            let rhs: Vec<bool> = q_map(&p).unwrap().iter().zip(q_map(&r).unwrap()).map(|(a, b)| a ^ b).collect();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
