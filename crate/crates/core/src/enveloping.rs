//! The enveloping algebra `A_2g / (ω)`, `ω = Σ_i (a_i b_i − b_i a_i)`.
//!
//! Under degree-lexicographic order the leading word of `ω` is `b_g a_g`,
//! which has no self-overlap, so the single rule
//! `b_g a_g → a_g b_g + Σ_{i<g} (a_i b_i − b_i a_i)` is a confluent
//! rewriting system and the reduced words (those avoiding `b_g a_g`) form a
//! Z-basis of the quotient.

use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::assoc::{AssocPoly, Word};
use crate::error::{Error, Result};
use crate::free_lie::LieElement;
use crate::int_linalg::{left_kernel, IntMatrix, ModpEchelon, CERT_PRIME};
use crate::surface_lie::{pbw_product, SurfaceAlgebra};

/// Letter index of `a_i` (1-based `i`).
pub fn a(i: usize) -> u8 {
    (2 * (i - 1)) as u8
}

/// Letter index of `b_i` (1-based `i`).
pub fn b(i: usize) -> u8 {
    (2 * (i - 1) + 1) as u8
}

/// `Σ_i (a_i b_i − b_i a_i)`.
pub fn omega_assoc(genus: usize) -> AssocPoly {
    let mut p = AssocPoly::zero();
    for i in 1..=genus {
        p.add_term(vec![a(i), b(i)], BigInt::one());
        p.add_term(vec![b(i), a(i)], BigInt::from(-1));
    }
    p
}

/// Proper overlaps of a word with itself: lengths `k` with `0 < k < len`
/// such that the length-`k` suffix equals the length-`k` prefix.
pub fn self_overlaps(w: &[u8]) -> Vec<usize> {
    (1..w.len()).filter(|&k| w[w.len() - k..] == w[..k]).collect()
}

/// A single rewrite rule `lhs → rhs` with optional truncation of long words.
///
/// Words are processed from lowest degree upward and, within a degree, from
/// the lexicographically largest down. Every rewrite replaces a word by
/// words that come later in that order, so each word is visited once.
#[derive(Clone, Debug)]
pub struct RewriteRule {
    lhs: Word,
    rhs: AssocPoly,
    truncation: Option<usize>,
}

impl RewriteRule {
    pub fn new(lhs: Word, rhs: AssocPoly, truncation: Option<usize>) -> Result<Self> {
        if lhs.is_empty() {
            return Err(Error::InvalidArgument("empty leading word".into()));
        }
        if !self_overlaps(&lhs).is_empty() {
            return Err(Error::InvalidArgument("leading word overlaps itself".into()));
        }
        for (w, _) in rhs.terms() {
            let later = w.len() > lhs.len() || (w.len() == lhs.len() && *w < lhs);
            if !later {
                return Err(Error::InvalidArgument("rewrite rule does not decrease words".into()));
            }
        }
        Ok(Self {
            lhs,
            rhs,
            truncation,
        })
    }

    pub fn lhs(&self) -> &[u8] {
        &self.lhs
    }

    pub fn rhs(&self) -> &AssocPoly {
        &self.rhs
    }

    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    fn find(&self, w: &[u8]) -> Option<usize> {
        w.windows(self.lhs.len()).position(|x| x == self.lhs.as_slice())
    }

    pub fn is_reduced_word(&self, w: &[u8]) -> bool {
        self.find(w).is_none()
    }

    pub fn reduce(&self, p: &AssocPoly) -> AssocPoly {
        let mut queue: BTreeMap<(usize, Reverse<Word>), BigInt> = BTreeMap::new();
        for (w, c) in p.terms() {
            if self.truncation.map_or(true, |k| w.len() <= k) {
                queue.insert((w.len(), Reverse(w.clone())), c.clone());
            }
        }
        let mut out = AssocPoly::zero();
        while let Some(((len, Reverse(w)), c)) = queue.pop_first() {
            if c.is_zero() {
                continue;
            }
            let Some(pos) = self.find(&w) else {
                out.add_term(w, c);
                continue;
            };
            for (r, k) in self.rhs.terms() {
                let new_len = len - self.lhs.len() + r.len();
                if self.truncation.is_some_and(|t| new_len > t) {
                    continue;
                }
                let mut nw = Vec::with_capacity(new_len);
                nw.extend_from_slice(&w[..pos]);
                nw.extend_from_slice(r);
                nw.extend_from_slice(&w[pos + self.lhs.len()..]);
                let e = queue.entry((new_len, Reverse(nw))).or_default();
                *e += &c * k;
            }
        }
        out
    }
}

/// The defining relation of the enveloping algebra and its rewrite rule.
#[derive(Clone, Debug)]
pub struct RelationDatum {
    pub genus: usize,
    pub omega: AssocPoly,
    pub rule: RewriteRule,
}

impl RelationDatum {
    pub fn new(genus: usize) -> Result<Self> {
        if genus == 0 {
            return Err(Error::InvalidArgument("genus must be at least 1".into()));
        }
        let omega = omega_assoc(genus);
        let lead = vec![b(genus), a(genus)];
        // ω has coefficient −1 on its leading word, so lead ≡ lead + ω
        let rhs = omega.add(&AssocPoly::word(lead.clone()));
        let rule = RewriteRule::new(lead, rhs, None)?;
        Ok(Self { genus, omega, rule })
    }

    pub fn leading_word(&self) -> &[u8] {
        self.rule.lhs()
    }
}

/// Element of the enveloping algebra, stored in reduced form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NcPoly {
    genus: usize,
    poly: AssocPoly,
}

impl NcPoly {
    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn poly(&self) -> &AssocPoly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

#[derive(Clone, Debug)]
pub struct EnvelopingAlgebra {
    relation: RelationDatum,
}

impl EnvelopingAlgebra {
    pub fn new(genus: usize) -> Result<Self> {
        Ok(Self {
            relation: RelationDatum::new(genus)?,
        })
    }

    pub fn genus(&self) -> usize {
        self.relation.genus
    }

    pub fn relation(&self) -> &RelationDatum {
        &self.relation
    }

    pub fn reduce(&self, p: &AssocPoly) -> NcPoly {
        NcPoly {
            genus: self.genus(),
            poly: self.relation.rule.reduce(p),
        }
    }

    pub fn generator(&self, letter: u8) -> NcPoly {
        self.reduce(&AssocPoly::letter(letter))
    }

    pub fn add(&self, x: &NcPoly, y: &NcPoly) -> NcPoly {
        NcPoly {
            genus: self.genus(),
            poly: x.poly.add(&y.poly),
        }
    }

    pub fn mul(&self, x: &NcPoly, y: &NcPoly) -> NcPoly {
        self.reduce(&x.poly.mul(&y.poly))
    }

    pub fn commutator(&self, x: &NcPoly, y: &NcPoly) -> NcPoly {
        self.reduce(&x.poly.commutator(&y.poly))
    }

    /// Image of a free Lie element on `2g` generators.
    pub fn lie_image(&self, x: &LieElement) -> Result<NcPoly> {
        if x.handle().generators != 2 * self.genus() {
            return Err(Error::HandleMismatch);
        }
        Ok(self.reduce(&x.to_assoc()))
    }

    /// Reduced words of length `d`, lexicographic.
    pub fn reduced_words(&self, d: usize) -> Vec<Word> {
        let n = 2 * self.genus() as u8;
        let (bg, ag) = (b(self.genus()), a(self.genus()));
        let mut words: Vec<Word> = vec![Vec::new()];
        for _ in 0..d {
            let mut next = Vec::with_capacity(words.len() * n as usize);
            for w in &words {
                for l in 0..n {
                    if l == ag && w.last() == Some(&bg) {
                        continue;
                    }
                    let mut x = w.clone();
                    x.push(l);
                    next.push(x);
                }
            }
            words = next;
        }
        words
    }

    /// Basis of the degree-`d` central elements.
    ///
    /// Centrality is tested against the generators only. A full-rank
    /// commutator system mod a prime certifies the answer is empty; otherwise
    /// the integer kernel is computed exactly.
    pub fn center_in_degree_assoc(&self, d: usize) -> Result<Vec<NcPoly>> {
        if d == 0 {
            return Err(Error::InvalidArgument("degree must be at least 1".into()));
        }
        let g = self.genus();
        let basis = self.reduced_words(d);
        let target = self.reduced_words(d + 1);
        let cells = basis.len() as u128 * target.len() as u128 * 2 * g as u128;
        if cells > 400_000_000 {
            return Err(Error::ResourceBound(format!(
                "degree {d} commutator system has {cells} cells"
            )));
        }
        let target_index: HashMap<&Word, usize> = target.iter().enumerate().map(|(i, w)| (w, i)).collect();

        // columns of the commutator matrix: one equation per (generator, target word)
        let width = 2 * g * target.len();
        let mut columns: Vec<Vec<(usize, i64)>> = vec![Vec::new(); width];
        for (row, w) in basis.iter().enumerate() {
            let wp = AssocPoly::word(w.clone());
            for gen in 0..2 * g {
                let c = self.relation.rule.reduce(&wp.commutator(&AssocPoly::letter(gen as u8)));
                for (u, k) in c.terms() {
                    let col = gen * target.len() + target_index[u];
                    let k: i64 = k.try_into().map_err(|_| Error::ResourceBound("coefficient overflow".into()))?;
                    columns[col].push((row, k));
                }
            }
        }
        let mut ech = ModpEchelon::new(CERT_PRIME, basis.len());
        for col in columns.iter().filter(|c| !c.is_empty()) {
            ech.insert_sparse(col);
            if ech.rank() == basis.len() {
                return Ok(Vec::new());
            }
        }

        let mut m = vec![vec![BigInt::zero(); width]; basis.len()];
        for (col, entries) in columns.iter().enumerate() {
            for &(row, k) in entries {
                m[row][col] += k;
            }
        }
        let m = IntMatrix::from_rows(m, width)?;
        let kernel = left_kernel(&m);
        Ok(kernel
            .to_rows()
            .into_iter()
            .map(|coeffs| NcPoly {
                genus: g,
                poly: AssocPoly::from_terms(basis.iter().cloned().zip(coeffs)),
            })
            .collect())
    }
}

/// Number of reduced words of length `d`: the degree-`d` dimension of the
/// enveloping algebra.
pub fn hilbert_dimension(genus: usize, d: usize) -> BigInt {
    let n = BigInt::from(2 * genus);
    // words ending in b_g, and all words
    let (mut end_b, mut total) = (BigInt::zero(), BigInt::one());
    for _ in 0..d {
        let new_total = &total * &n - &end_b;
        end_b = total;
        total = new_total;
    }
    total
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PbwReport {
    /// Coefficients of `∏_k (1 − t^k)^{−rank Λ_k}` up to `t^K`.
    pub pbw: Vec<BigInt>,
    /// Reduced-word counts in degrees `0..=K`.
    pub hilbert: Vec<BigInt>,
}

impl PbwReport {
    pub fn passed(&self) -> bool {
        self.pbw == self.hilbert
    }
}

/// Compares the PBW series of the Lie algebra ranks with the enveloping
/// algebra's word counts, through degree `k`.
pub fn pbw_consistency(alg: &SurfaceAlgebra, k: usize) -> Result<PbwReport> {
    if k > alg.max_degree() {
        return Err(Error::DegreeOutOfRange {
            degree: k,
            max: alg.max_degree(),
        });
    }
    let ranks: Vec<usize> = (1..=k).map(|d| alg.rank(d)).collect::<Result<_>>()?;
    Ok(PbwReport {
        pbw: pbw_product(&ranks, k),
        hilbert: (0..=k).map(|d| hilbert_dimension(alg.genus(), d)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_lie::{lyndon_words, LieHandle};
    use proptest::prelude::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Independent count: enumerate all words and keep those free of the factor.
    fn brute_force_reduced(g: usize, d: usize) -> usize {
        let n = 2 * g;
        let (bg, ag) = (b(g), a(g));
        (0..n.pow(d as u32))
            .filter(|&code| {
                let mut w = Vec::with_capacity(d);
                let mut c = code;
                for _ in 0..d {
                    w.push((c % n) as u8);
                    c /= n;
                }
                !w.windows(2).any(|x| x == [bg, ag])
            })
            .count()
    }

    #[test]
    fn leading_word_and_overlap() {
        let r = RelationDatum::new(3).unwrap();
        assert_eq!(r.leading_word(), &[b(3), a(3)]);
        assert!(self_overlaps(r.leading_word()).is_empty());
        assert_eq!(self_overlaps(&[0, 1, 0]), vec![1]);
    }

    #[test]
    fn reduce_examples() {
        let alg = EnvelopingAlgebra::new(2).unwrap();
        assert!(alg.reduce(&omega_assoc(2)).is_zero());
        // golden: b2a2 -> a1b1 - b1a1 + a2b2
        let r = alg.reduce(&AssocPoly::word(vec![b(2), a(2)]));
        assert_eq!(r.to_string(), "a1b1 - b1a1 + a2b2");
        let x = AssocPoly::word(vec![a(1), b(2)]);
        assert!(alg.reduce(&x.sub(&x)).is_zero());
    }

    #[test]
    fn hilbert_examples() {
        assert_eq!(hilbert_dimension(3, 0), BigInt::one());
        assert_eq!(hilbert_dimension(3, 2), BigInt::from(35));
        assert_eq!(hilbert_dimension(2, 3), BigInt::from(56));
        let g3: Vec<BigInt> = (0..=3).map(|d| hilbert_dimension(3, d)).collect();
        assert_eq!(g3, big(&[1, 6, 35, 204]));
    }

    #[test]
    fn hilbert_matches_brute_force_and_recurrence() {
        for g in 1..=3 {
            let n = 2 * g as i64;
            let mut series = vec![BigInt::one(), BigInt::from(n)];
            for d in 2..=6 {
                let next = &series[d - 1] * n - &series[d - 2];
                series.push(next);
            }
            let alg = EnvelopingAlgebra::new(g).unwrap();
            for d in 0..=4 {
                assert_eq!(hilbert_dimension(g, d), BigInt::from(brute_force_reduced(g, d)));
                assert_eq!(hilbert_dimension(g, d), series[d]);
                assert_eq!(BigInt::from(alg.reduced_words(d).len()), series[d]);
            }
        }
    }

    #[test]
    fn center_examples_empty() {
        assert!(EnvelopingAlgebra::new(2).unwrap().center_in_degree_assoc(1).unwrap().is_empty());
        assert!(EnvelopingAlgebra::new(3).unwrap().center_in_degree_assoc(2).unwrap().is_empty());
        assert!(EnvelopingAlgebra::new(2).unwrap().center_in_degree_assoc(4).unwrap().is_empty());
    }

    #[test]
    fn center_nonempty_genus_one() {
        // A_2/(ab − ba) is commutative: everything in degree 1 is central
        let alg = EnvelopingAlgebra::new(1).unwrap();
        assert_eq!(alg.center_in_degree_assoc(1).unwrap().len(), 2);
        assert_eq!(alg.center_in_degree_assoc(2).unwrap().len(), 3);
    }

    #[test]
    fn rule_rejects_increasing_rhs() {
        let bad = RewriteRule::new(vec![0, 1], AssocPoly::word(vec![1, 0]), None);
        assert!(bad.is_err());
        assert!(RewriteRule::new(vec![0, 0], AssocPoly::zero(), None).is_err());
    }

    fn arb_poly(g: usize) -> impl Strategy<Value = AssocPoly> {
        let n = 2 * g as u8;
        proptest::collection::vec((proptest::collection::vec(0..n, 0..4), -3i64..=3), 0..5)
            .prop_map(|terms| AssocPoly::from_terms(terms.into_iter().map(|(w, c)| (w, BigInt::from(c)))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn reduce_is_multiplicative(p in arb_poly(2), q in arb_poly(2)) {
            let alg = EnvelopingAlgebra::new(2).unwrap();
            let lhs = alg.reduce(&p.mul(&q));
            let rhs = alg.mul(&alg.reduce(&p), &alg.reduce(&q));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn reduced_output_has_no_leading_word(p in arb_poly(3)) {
            let alg = EnvelopingAlgebra::new(3).unwrap();
            let r = alg.reduce(&p);
            for (w, _) in r.poly().terms() {
                prop_assert!(alg.relation().rule.is_reduced_word(w));
            }
            prop_assert_eq!(alg.reduce(r.poly()), r);
        }

        #[test]
        fn lie_bracket_matches_commutator(i in 0usize..10, j in 0usize..10) {
            let alg = EnvelopingAlgebra::new(2).unwrap();
            let h = LieHandle::new(4);
            let words: Vec<Word> = (1..=2).flat_map(|d| lyndon_words(4, d)).collect();
            let x = LieElement::basis(h, words[i].clone()).unwrap();
            let y = LieElement::basis(h, words[j].clone()).unwrap();
            let lhs = alg.commutator(&alg.lie_image(&x).unwrap(), &alg.lie_image(&y).unwrap());
            let rhs = alg.lie_image(&x.bracket(&y).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
