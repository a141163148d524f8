//! Free Lie algebra over Z with the Lyndon basis.
//!
//! A Lyndon word `w` is bracketed through its standard factorization
//! `w = uv`, `v` the longest proper Lyndon suffix, giving `P_w = [P_u, P_v]`.
//! Expanded in the free associative algebra, `P_w` is `w` plus words that are
//! lexicographically larger, so the smallest word of any Lie polynomial is
//! Lyndon and its coefficient is the Lyndon coordinate. Coordinates are
//! recovered by peeling off smallest words.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::assoc::{format_word, letter_name, AssocPoly, Word};
use crate::error::{Error, Result};

/// Which Hall family an algebra handle uses. Only the Lyndon family exists,
/// but handles carry it so elements from different conventions never mix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisConvention {
    LyndonStandard,
}

/// Identifies a free Lie algebra: number of generators plus basis family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LieHandle {
    pub generators: usize,
    pub convention: BasisConvention,
}

impl LieHandle {
    pub fn new(generators: usize) -> Self {
        Self {
            generators,
            convention: BasisConvention::LyndonStandard,
        }
    }
}

pub fn is_lyndon(w: &[u8]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// All Lyndon words of exactly `len` letters over `0..n`, in lexicographic order.
pub fn lyndon_words(n: usize, len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if n == 0 || len == 0 {
        return out;
    }
    let top = (n - 1) as u8;
    let mut w: Word = vec![0];
    loop {
        if w.len() == len {
            out.push(w.clone());
        }
        let m = w.len();
        while w.len() < len {
            w.push(w[w.len() - m]);
        }
        while w.last() == Some(&top) {
            w.pop();
        }
        match w.last_mut() {
            Some(l) => *l += 1,
            None => break,
        }
    }
    out
}

/// Splits a Lyndon word of length ≥ 2 at its longest proper Lyndon suffix.
pub fn standard_factorization(w: &[u8]) -> (&[u8], &[u8]) {
    let i = (1..w.len())
        .find(|&i| is_lyndon(&w[i..]))
        .expect("every word of length >= 2 has a Lyndon proper suffix");
    (&w[..i], &w[i..])
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Bracket {
    Leaf(u8),
    Node(Box<Bracket>, Box<Bracket>),
}

impl Bracket {
    pub fn degree(&self) -> usize {
        match self {
            Bracket::Leaf(_) => 1,
            Bracket::Node(l, r) => l.degree() + r.degree(),
        }
    }
}

impl fmt::Display for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bracket::Leaf(l) => write!(f, "{}", letter_name(*l)),
            Bracket::Node(l, r) => write!(f, "[{l},{r}]"),
        }
    }
}

/// A Lyndon basis element together with its standard bracketing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HallWord {
    word: Word,
}

impl HallWord {
    pub fn new(generators: usize, word: Word) -> Result<Self> {
        if word.iter().any(|&l| l as usize >= generators) {
            return Err(Error::InvalidArgument(format!(
                "word {word:?} uses a letter outside 0..{generators}"
            )));
        }
        if !is_lyndon(&word) {
            return Err(Error::InvalidArgument(format!("{} is not a Lyndon word", format_word(&word))));
        }
        Ok(Self { word })
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn degree(&self) -> usize {
        self.word.len()
    }

    pub fn bracketing(&self) -> Bracket {
        bracketing_of(&self.word)
    }

    /// Expansion in the free associative algebra.
    pub fn expansion(&self) -> Arc<AssocPoly> {
        lyndon_expansion(&self.word)
    }
}

impl fmt::Display for HallWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bracketing())
    }
}

fn bracketing_of(w: &[u8]) -> Bracket {
    if w.len() == 1 {
        return Bracket::Leaf(w[0]);
    }
    let (u, v) = standard_factorization(w);
    Bracket::Node(Box::new(bracketing_of(u)), Box::new(bracketing_of(v)))
}

fn expansion_cache() -> &'static Mutex<HashMap<Word, Arc<AssocPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<Word, Arc<AssocPoly>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `P_w` for a Lyndon word, memoized process-wide.
pub fn lyndon_expansion(w: &[u8]) -> Arc<AssocPoly> {
    if let Some(p) = expansion_cache().lock().expect("cache poisoned").get(w) {
        return p.clone();
    }
    let p = if w.len() == 1 {
        AssocPoly::letter(w[0])
    } else {
        let (u, v) = standard_factorization(w);
        lyndon_expansion(u).commutator(&lyndon_expansion(v))
    };
    let p = Arc::new(p);
    // a racing thread may have inserted the same value; either copy is fine
    expansion_cache()
        .lock()
        .expect("cache poisoned")
        .entry(w.to_vec())
        .or_insert(p)
        .clone()
}

fn basis_cache() -> &'static Mutex<HashMap<(usize, usize), Arc<Vec<HallWord>>>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<Vec<HallWord>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Lyndon basis of the degree-`degree` component of the free Lie algebra on
/// `n` generators.
pub fn hall_basis(n: usize, degree: usize) -> Arc<Vec<HallWord>> {
    let key = (n, degree);
    if let Some(b) = basis_cache().lock().expect("cache poisoned").get(&key) {
        return b.clone();
    }
    let basis: Vec<HallWord> = lyndon_words(n, degree)
        .into_iter()
        .map(|word| HallWord { word })
        .collect();
    basis_cache()
        .lock()
        .expect("cache poisoned")
        .entry(key)
        .or_insert_with(|| Arc::new(basis))
        .clone()
}

fn mobius(mut n: usize) -> i64 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Witt's formula `(1/d) Σ_{e|d} μ(e) n^{d/e}`.
pub fn witt_dimension(n: usize, degree: usize) -> BigInt {
    assert!(degree >= 1, "degree must be positive");
    let mut total = BigInt::zero();
    for e in (1..=degree).filter(|e| degree % e == 0) {
        let mu = mobius(e);
        if mu != 0 {
            total += BigInt::from(mu) * num_traits::pow(BigInt::from(n), degree / e);
        }
    }
    total / BigInt::from(degree)
}

/// Element of a free Lie algebra in Lyndon coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieElement {
    handle: LieHandle,
    coords: BTreeMap<Word, BigInt>,
}

impl LieElement {
    pub fn zero(handle: LieHandle) -> Self {
        Self {
            handle,
            coords: BTreeMap::new(),
        }
    }

    pub fn generator(handle: LieHandle, letter: u8) -> Result<Self> {
        Self::basis(handle, vec![letter])
    }

    pub fn basis(handle: LieHandle, word: Word) -> Result<Self> {
        let hw = HallWord::new(handle.generators, word)?;
        let mut e = Self::zero(handle);
        e.coords.insert(hw.word, BigInt::one());
        Ok(e)
    }

    pub fn handle(&self) -> LieHandle {
        self.handle
    }

    pub fn coords(&self) -> &BTreeMap<Word, BigInt> {
        &self.coords
    }

    pub fn coefficient(&self, word: &[u8]) -> BigInt {
        self.coords.get(word).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.coords.keys().map(Vec::len).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn component(&self, d: usize) -> Self {
        Self {
            handle: self.handle,
            coords: self
                .coords
                .iter()
                .filter(|(w, _)| w.len() == d)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.handle == other.handle {
            Ok(())
        } else {
            Err(Error::HandleMismatch)
        }
    }

    fn add_coord(&mut self, w: Word, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.coords.entry(w.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.coords.remove(&w);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (w, c) in &other.coords {
            out.add_coord(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.handle);
        }
        Self {
            handle: self.handle,
            coords: self.coords.iter().map(|(w, c)| (w.clone(), c * k)).collect(),
        }
    }

    /// Image in the free associative algebra.
    pub fn to_assoc(&self) -> AssocPoly {
        let mut out = AssocPoly::zero();
        for (w, c) in &self.coords {
            for (u, a) in lyndon_expansion(w).terms() {
                out.add_term(u.clone(), a * c);
            }
        }
        out
    }

    /// Lyndon coordinates of a Lie polynomial given in associative form.
    pub fn from_assoc(handle: LieHandle, poly: &AssocPoly) -> Result<Self> {
        let mut rest = poly.clone().into_terms();
        let mut out = Self::zero(handle);
        while let Some((w, _)) = rest.iter().min_by(|a, b| a.0.len().cmp(&b.0.len()).then(a.0.cmp(b.0))) {
            let w = w.clone();
            if !is_lyndon(&w) || w.iter().any(|&l| l as usize >= handle.generators) {
                return Err(Error::InvalidArgument(format!(
                    "not a Lie polynomial: leading word {} is not a basis word",
                    format_word(&w)
                )));
            }
            let c = rest[&w].clone();
            for (u, a) in lyndon_expansion(&w).terms() {
                let e = rest.entry(u.clone()).or_default();
                *e -= a * &c;
                if e.is_zero() {
                    rest.remove(u);
                }
            }
            out.coords.insert(w, c);
        }
        Ok(out)
    }

    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let p = self.to_assoc().commutator(&other.to_assoc());
        Self::from_assoc(self.handle, &p)
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|(w, c)| format!("{c}*{}", bracketing_of(w)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Counts primitive necklaces by brute force: words that are strictly
    /// smaller than all their nontrivial rotations.
    fn necklace_count(n: usize, d: usize) -> usize {
        let total = n.pow(d as u32);
        (0..total)
            .filter(|&code| {
                let mut w = vec![0u8; d];
                let mut c = code;
                for x in w.iter_mut().rev() {
                    *x = (c % n) as u8;
                    c /= n;
                }
                (1..d).all(|r| {
                    let rot: Vec<u8> = w[r..].iter().chain(&w[..r]).copied().collect();
                    w < rot
                })
            })
            .count()
    }

    #[test]
    fn hall_basis_examples() {
        assert_eq!(hall_basis(2, 1).len(), 2);
        let b = hall_basis(2, 2);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].to_string(), "[a1,b1]");
        assert_eq!(hall_basis(4, 3).len(), 20);
    }

    #[test]
    fn witt_examples() {
        assert_eq!(witt_dimension(2, 1), BigInt::from(2));
        assert_eq!(witt_dimension(2, 5), BigInt::from(necklace_count(2, 5)));
        assert_eq!(witt_dimension(2, 5), BigInt::from(6));
        assert_eq!(witt_dimension(6, 2), BigInt::from(15));
    }

    #[test]
    fn basis_size_matches_witt_and_necklaces() {
        for n in 1..=6 {
            for d in 1..=6 {
                let len = hall_basis(n, d).len();
                assert_eq!(BigInt::from(len), witt_dimension(n, d), "n={n} d={d}");
                if n.pow(d as u32) <= 50_000 {
                    assert_eq!(len, necklace_count(n, d), "n={n} d={d}");
                }
            }
        }
    }

    #[test]
    fn expansion_is_triangular() {
        for hw in hall_basis(3, 4).iter() {
            let p = hw.expansion();
            let (first, c) = p.terms().next().unwrap();
            assert_eq!(first.as_slice(), hw.word());
            assert!(c.is_one());
        }
    }

    #[test]
    fn rejects_non_lyndon_and_foreign_letters() {
        assert!(HallWord::new(2, vec![1, 0]).is_err());
        assert!(HallWord::new(2, vec![0, 2]).is_err());
        let h = LieHandle::new(2);
        assert!(LieElement::from_assoc(h, &AssocPoly::word(vec![0, 1])).is_err());
    }

    #[test]
    fn handle_mismatch() {
        let x = LieElement::generator(LieHandle::new(2), 0).unwrap();
        let y = LieElement::generator(LieHandle::new(3), 0).unwrap();
        assert_eq!(x.bracket(&y), Err(Error::HandleMismatch));
    }

    fn arb_element(n: usize, max_deg: usize) -> impl Strategy<Value = LieElement> {
        let words: Vec<Word> = (1..=max_deg)
            .flat_map(|d| lyndon_words(n, d))
            .collect();
        proptest::collection::vec((0..words.len(), -3i64..=3), 1..4).prop_map(move |picks| {
            let h = LieHandle::new(n);
            let mut e = LieElement::zero(h);
            for (i, c) in picks {
                e = e
                    .add(&LieElement::basis(h, words[i].clone()).unwrap().scale(&BigInt::from(c)))
                    .unwrap();
            }
            e
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn antisymmetry_and_jacobi(x in arb_element(4, 2), a in arb_element(4, 2), b in arb_element(4, 2)) {
            prop_assert!(x.bracket(&x).unwrap().is_zero());
            let ab = a.bracket(&b).unwrap();
            let ba = b.bracket(&a).unwrap();
            prop_assert!(ab.add(&ba).unwrap().is_zero());
            let j = x.bracket(&ab).unwrap()
                .add(&b.bracket(&x.bracket(&a).unwrap()).unwrap()).unwrap()
                .add(&a.bracket(&b.bracket(&x).unwrap()).unwrap()).unwrap();
            prop_assert!(j.is_zero());
        }

        #[test]
        fn bracket_is_graded(x in arb_element(3, 3), y in arb_element(3, 3)) {
            for dx in x.degrees() {
                for dy in y.degrees() {
                    let z = x.component(dx).bracket(&y.component(dy)).unwrap();
                    prop_assert!(z.degrees().iter().all(|&d| d == dx + dy));
                }
            }
        }

        #[test]
        fn assoc_round_trip(x in arb_element(4, 4)) {
            let back = LieElement::from_assoc(x.handle(), &x.to_assoc()).unwrap();
            prop_assert_eq!(back, x);
        }
    }
}
