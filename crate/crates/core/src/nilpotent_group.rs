//! Words in the surface group and equality in its nilpotent quotients
//! `π/γ_{k+1}`, decided by a truncated Magnus expansion `x ↦ 1 + x`.
//!
//! Series live in the free associative algebra modulo the two-sided ideal
//! generated by `ρ = M(Π_i [a_i, b_i]) − 1` and all words longer than `k`.
//! The lowest-degree part of `ρ` is `ω = Σ_i (a_i b_i − b_i a_i)`, so `ρ`
//! has the same leading word `b_g a_g` as the enveloping relation and the
//! same reduced words; the higher-order tail of `ρ` is what makes the
//! relator expand to exactly 1.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::assoc::{letter_name, parse_letter, AssocPoly, Word};
use crate::enveloping::{a, b, RewriteRule};
use crate::error::{Error, Result};
use crate::free_lie::{hall_basis, Bracket};
use crate::int_linalg::{left_kernel, IntMatrix, ModpEchelon, CERT_PRIME};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupLetter {
    pub generator: u8,
    pub inverse: bool,
}

impl GroupLetter {
    pub fn inv(self) -> Self {
        Self {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }
}

impl fmt::Display for GroupLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", letter_name(self.generator))?;
        if self.inverse {
            write!(f, "^-1")?;
        }
        Ok(())
    }
}

/// A freely reduced word in the generators `a_1, b_1, …` and their inverses.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupWord(Vec<GroupLetter>);

impl GroupWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_letters(letters: impl IntoIterator<Item = GroupLetter>) -> Self {
        let mut stack: Vec<GroupLetter> = Vec::new();
        for l in letters {
            if stack.last() == Some(&l.inv()) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        Self(stack)
    }

    pub fn generator(g: u8) -> Self {
        Self(vec![GroupLetter {
            generator: g,
            inverse: false,
        }])
    }

    pub fn letters(&self) -> &[GroupLetter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_letters(self.0.iter().chain(&other.0).copied())
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// `x y x⁻¹ y⁻¹`.
    pub fn commutator(x: &Self, y: &Self) -> Self {
        x.mul(y).mul(&x.inverse()).mul(&y.inverse())
    }

    /// `Π_i [a_i, b_i]`.
    pub fn surface_relator(genus: usize) -> Self {
        (1..=genus).fold(Self::identity(), |acc, i| {
            acc.mul(&Self::commutator(&Self::generator(a(i)), &Self::generator(b(i))))
        })
    }

    /// Group commutator word of a bracketing.
    pub fn from_bracket(tree: &Bracket) -> Self {
        match tree {
            Bracket::Leaf(l) => Self::generator(*l),
            Bracket::Node(l, r) => Self::commutator(&Self::from_bracket(l), &Self::from_bracket(r)),
        }
    }

    pub fn max_generator(&self) -> Option<u8> {
        self.0.iter().map(|l| l.generator).max()
    }

    /// Parses whitespace-separated letters such as `a1 b2^-1 A3` (uppercase
    /// is the inverse). `1` or an empty string is the identity.
    pub fn parse(s: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (body, inverse) = match tok.strip_suffix("^-1") {
                Some(body) => (body.to_string(), true),
                None if tok.starts_with(|c: char| c.is_ascii_uppercase()) => (tok.to_ascii_lowercase(), true),
                None => (tok.to_string(), false),
            };
            let generator = parse_letter(&body).ok_or_else(|| Error::InvalidArgument(format!("bad letter {tok:?}")))?;
            letters.push(GroupLetter { generator, inverse });
        }
        Ok(Self::from_letters(letters))
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// A truncated expansion `1 + (terms of degree 1..=K)`, reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MagnusSeries {
    degree: usize,
    poly: AssocPoly,
}

impl MagnusSeries {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn poly(&self) -> &AssocPoly {
        &self.poly
    }

    pub fn is_one(&self) -> bool {
        self.poly == AssocPoly::one()
    }

    /// The homogeneous part of degree `d`.
    pub fn component(&self, d: usize) -> AssocPoly {
        self.poly.component(d)
    }

    /// Smallest positive degree with a nonzero term.
    pub fn order(&self) -> Option<usize> {
        self.poly.degrees().into_iter().find(|&d| d > 0)
    }
}

impl fmt::Display for MagnusSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

/// Free-algebra expansion of a word with `x ↦ 1 + x`, truncated, no relation.
fn free_expansion(w: &GroupWord, k: usize) -> AssocPoly {
    let mut s = AssocPoly::one();
    for l in w.letters() {
        s = s.mul_truncated(&letter_series(*l, k), Some(k));
    }
    s
}

fn letter_series(l: GroupLetter, k: usize) -> AssocPoly {
    let mut p = AssocPoly::one();
    if !l.inverse {
        p.add_term(vec![l.generator], BigInt::one());
        return p;
    }
    for m in 1..=k {
        let sign = if m % 2 == 1 { -1 } else { 1 };
        p.add_term(vec![l.generator; m], BigInt::from(sign));
    }
    p
}

/// Arithmetic in `A_2g / ((ρ) + A_{>K})`.
#[derive(Clone, Debug)]
pub struct MagnusContext {
    genus: usize,
    degree: usize,
    rule: RewriteRule,
}

impl MagnusContext {
    pub fn new(genus: usize, degree: usize) -> Result<Self> {
        if genus == 0 {
            return Err(Error::InvalidArgument("genus must be at least 1".into()));
        }
        if degree == 0 {
            return Err(Error::InvalidArgument("truncation degree must be at least 1".into()));
        }
        let lead = vec![b(genus), a(genus)];
        let rho = free_expansion(&GroupWord::surface_relator(genus), degree.max(2)).sub(&AssocPoly::one());
        let rhs = rho.add(&AssocPoly::word(lead.clone()));
        let rule = RewriteRule::new(lead, rhs, Some(degree))?;
        Ok(Self { genus, degree, rule })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rule(&self) -> &RewriteRule {
        &self.rule
    }

    fn check_word(&self, w: &GroupWord) -> Result<()> {
        match w.max_generator() {
            Some(m) if m as usize >= 2 * self.genus => Err(Error::InvalidArgument(format!(
                "word {w} uses letters beyond genus {}",
                self.genus
            ))),
            _ => Ok(()),
        }
    }

    fn series(&self, p: &AssocPoly) -> MagnusSeries {
        MagnusSeries {
            degree: self.degree,
            poly: self.rule.reduce(p),
        }
    }

    pub fn one(&self) -> MagnusSeries {
        self.series(&AssocPoly::one())
    }

    /// Expansion of a word, letter by letter.
    pub fn expand(&self, w: &GroupWord) -> Result<MagnusSeries> {
        self.check_word(w)?;
        let mut s = self.one();
        for l in w.letters() {
            s = self.series(&s.poly.mul_truncated(&letter_series(*l, self.degree), Some(self.degree)));
        }
        Ok(s)
    }

    pub fn mul(&self, x: &MagnusSeries, y: &MagnusSeries) -> MagnusSeries {
        self.series(&x.poly.mul_truncated(&y.poly, Some(self.degree)))
    }

    /// `(1 + X)⁻¹ = Σ_m (−X)^m`, finite because `X` has no constant term.
    pub fn inverse(&self, x: &MagnusSeries) -> MagnusSeries {
        let neg_tail = AssocPoly::one().sub(&x.poly);
        let mut acc = AssocPoly::one();
        let mut power = AssocPoly::one();
        for _ in 0..self.degree {
            power = self.rule.reduce(&power.mul_truncated(&neg_tail, Some(self.degree)));
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        self.series(&acc)
    }

    pub fn commutator(&self, x: &MagnusSeries, y: &MagnusSeries) -> MagnusSeries {
        let xy = self.mul(x, y);
        let yx = self.mul(y, x);
        self.mul(&xy, &self.inverse(&yx))
    }

    /// Expansion of the commutator word of a bracketing, computed from the
    /// subtrees. Agrees with `expand(GroupWord::from_bracket(tree))`.
    pub fn expand_bracket(&self, tree: &Bracket, memo: &mut HashMap<Bracket, MagnusSeries>) -> MagnusSeries {
        if let Some(s) = memo.get(tree) {
            return s.clone();
        }
        let s = match tree {
            Bracket::Leaf(l) => self.series(&letter_series(
                GroupLetter {
                    generator: *l,
                    inverse: false,
                },
                self.degree,
            )),
            Bracket::Node(l, r) => {
                let x = self.expand_bracket(l, memo);
                let y = self.expand_bracket(r, memo);
                self.commutator(&x, &y)
            }
        };
        memo.insert(tree.clone(), s.clone());
        s
    }

    /// `u ≡ v mod γ_{K+1}`.
    pub fn equal_in_quotient(&self, u: &GroupWord, v: &GroupWord) -> Result<bool> {
        Ok(self.expand(&u.mul(&v.inverse()))?.is_one())
    }
}

/// Expansion of `w` truncated at degree `k`.
pub fn expand(genus: usize, w: &GroupWord, k: usize) -> Result<MagnusSeries> {
    MagnusContext::new(genus, k)?.expand(w)
}

/// Whether `u ≡ v` in `π_1(Σ_genus)/γ_{k+1}`.
pub fn equal_in_quotient(genus: usize, u: &GroupWord, v: &GroupWord, k: usize) -> Result<bool> {
    MagnusContext::new(genus, k)?.equal_in_quotient(u, v)
}

/// Verdict for one layer `γ_j/γ_{j+1}` inside `π/γ_{k+1}`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct LayerVerdict {
    pub layer: usize,
    /// Number of commutator words used to span the layer.
    pub spanning: usize,
    /// Rank of their leading terms: the rank of `γ_j/γ_{j+1}`.
    pub rank: usize,
    /// Whether some element of this layer (not in the next) is central.
    pub central: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct QuotientCenterReport {
    pub genus: usize,
    pub class: usize,
    pub layers: Vec<LayerVerdict>,
}

impl QuotientCenterReport {
    /// Exactly the top layer is central.
    pub fn passed(&self) -> bool {
        self.layers
            .iter()
            .all(|l| l.central == (l.layer == self.class))
    }
}

fn word_coords(poly: &AssocPoly, index: &HashMap<Word, usize>, width: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); width];
    for (w, c) in poly.terms() {
        v[index[w]] += c;
    }
    v
}

fn reduced_word_index(rule: &RewriteRule, genus: usize, d: usize) -> HashMap<Word, usize> {
    let n = 2 * genus as u8;
    let mut words: Vec<Word> = vec![Vec::new()];
    for _ in 0..d {
        words = words
            .iter()
            .flat_map(|w| {
                (0..n).map(move |l| {
                    let mut x = w.clone();
                    x.push(l);
                    x
                })
            })
            .filter(|w| rule.is_reduced_word(w))
            .collect();
    }
    words.into_iter().enumerate().map(|(i, w)| (w, i)).collect()
}

fn leading_part(s: &MagnusSeries, d: usize) -> Result<AssocPoly> {
    match s.order() {
        Some(o) if o < d => Err(Error::InvalidArgument(format!(
            "commutator expansion has a term of degree {o} below {d}"
        ))),
        _ => Ok(s.component(d)),
    }
}

/// Rank of the degree-`k` leading terms of the commutator words attached to
/// the Lyndon basis of degree `k`. Equals the rank of `γ_k/γ_{k+1}` when the
/// expansion separates the quotient classes.
pub fn commutator_layer_rank(genus: usize, k: usize) -> Result<usize> {
    let ctx = MagnusContext::new(genus, k)?;
    let index = reduced_word_index(&ctx.rule, genus, k);
    let mut memo = HashMap::new();
    let rows: Vec<Vec<BigInt>> = hall_basis(2 * genus, k)
        .iter()
        .map(|hw| {
            let s = ctx.expand_bracket(&hw.bracketing(), &mut memo);
            Ok(word_coords(&leading_part(&s, k)?, &index, index.len()))
        })
        .collect::<Result<_>>()?;
    Ok(IntMatrix::from_rows(rows, index.len())?.rank())
}

/// For each layer `j ≤ k`, decides whether `γ_j/γ_{j+1}` contributes central
/// elements of `π/γ_{k+1}`.
///
/// For `j < k` an element of `γ_j ∖ γ_{j+1}` central mod `γ_{k+1}` would have
/// all its commutators with generators in `γ_{j+2}`, so it is enough to show
/// the leading-term map `x ↦ ([x, g_i])_i` is injective on the layer. For
/// `j = k` every commutator with a generator must expand to 1.
pub fn center_of_quotient(genus: usize, k: usize) -> Result<QuotientCenterReport> {
    if k < 2 {
        return Err(Error::InvalidArgument("class must be at least 2".into()));
    }
    if genus < 1 {
        return Err(Error::InvalidArgument("genus must be at least 1".into()));
    }
    let n = 2 * genus;
    let mut layers = Vec::with_capacity(k);
    for j in 1..=k {
        let trunc = if j < k { j + 1 } else { k };
        let ctx = MagnusContext::new(genus, trunc)?;
        let mut memo = HashMap::new();
        let basis = hall_basis(n, j);
        let spanning: Vec<MagnusSeries> = basis
            .iter()
            .map(|hw| ctx.expand_bracket(&hw.bracketing(), &mut memo))
            .collect();
        let gens: Vec<MagnusSeries> = (0..n as u8)
            .map(|l| ctx.expand(&GroupWord::generator(l)))
            .collect::<Result<_>>()?;

        let lead_index = reduced_word_index(&ctx.rule, genus, j);
        let lead_rows: Vec<Vec<BigInt>> = spanning
            .iter()
            .map(|s| Ok(word_coords(&leading_part(s, j)?, &lead_index, lead_index.len())))
            .collect::<Result<_>>()?;
        let lead = IntMatrix::from_rows(lead_rows, lead_index.len())?;

        if j == k {
            let central = spanning
                .iter()
                .all(|s| gens.iter().all(|g| ctx.commutator(s, g).is_one()));
            layers.push(LayerVerdict {
                layer: j,
                spanning: basis.len(),
                rank: lead.rank(),
                central,
            });
            continue;
        }

        let next_index = reduced_word_index(&ctx.rule, genus, j + 1);
        let width = n * next_index.len();
        let comm_rows: Vec<Vec<BigInt>> = spanning
            .iter()
            .map(|s| {
                let mut row = Vec::with_capacity(width);
                for g in &gens {
                    let c = ctx.commutator(s, g);
                    row.extend(word_coords(&leading_part(&c, j + 1)?, &next_index, next_index.len()));
                }
                Ok(row)
            })
            .collect::<Result<_>>()?;
        let comm = IntMatrix::from_rows(comm_rows, width)?;

        // Central elements exist iff some c has c·comm = 0 but c·lead ≠ 0.
        // ker(lead) is computed exactly; if it also kills comm then
        // rank[lead|comm] ≤ rank(lead), and rank_p(comm) = rank(lead) closes
        // the sandwich rank(comm) = rank[lead|comm].
        let lead_kernel = left_kernel(&lead);
        let lead_rank = lead.rows() - lead_kernel.rows();
        let kernel_kills_comm = lead_kernel.mul(&comm)?.is_zero();
        let mut ech = ModpEchelon::new(CERT_PRIME, width);
        for i in 0..comm.rows() {
            ech.insert_big(comm.row(i));
        }
        let central = if kernel_kills_comm && ech.rank() == lead_rank {
            false
        } else {
            let both = lead.hstack(&comm)?;
            both.rank() != comm.rank()
        };
        layers.push(LayerVerdict {
            layer: j,
            spanning: basis.len(),
            rank: lead_rank,
            central,
        });
    }
    Ok(QuotientCenterReport {
        genus,
        class: k,
        layers,
    })
}

/// Checks `[p·g, n] = (p g n p⁻¹ n⁻¹ p g⁻¹ p⁻¹)·((p g p⁻¹) n (p g p⁻¹)⁻¹ n⁻¹)`
/// after free reduction.
pub fn verify_identity_viii(p: &GroupWord, g: &GroupWord, n: &GroupWord) -> bool {
    let pg = p.mul(g);
    let lhs = GroupWord::commutator(&pg, n);
    let (pi, gi, ni) = (p.inverse(), g.inverse(), n.inverse());
    let first = [p, g, n, &pi, &ni, p, &gi, &pi]
        .into_iter()
        .fold(GroupWord::identity(), |acc, w| acc.mul(w));
    let conj = p.mul(g).mul(&pi);
    let second = GroupWord::commutator(&conj, n);
    lhs == first.mul(&second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enveloping::{omega_assoc, EnvelopingAlgebra};
    use crate::surface_lie::SurfaceAlgebra;
    use proptest::prelude::*;

    fn w(s: &str) -> GroupWord {
        GroupWord::parse(s).unwrap()
    }

    #[test]
    fn parse_and_reduce() {
        assert_eq!(w("a1 A1 b2"), w("b2"));
        assert_eq!(w("a1 a1^-1"), GroupWord::identity());
        assert_eq!(w("a1 B2").to_string(), "a1 b2^-1");
        assert!(GroupWord::parse("c1").is_err());
        assert_eq!(GroupWord::surface_relator(1).to_string(), "a1 b1 a1^-1 b1^-1");
    }

    #[test]
    fn expand_examples() {
        let s = expand(2, &w("a1"), 2).unwrap();
        assert_eq!(s.to_string(), "1 + a1");
        let s = expand(2, &w("A1"), 2).unwrap();
        assert_eq!(s.to_string(), "1 - a1 + a1a1");
        let s = expand(2, &GroupWord::surface_relator(1), 2).unwrap();
        assert_eq!(s.to_string(), "1 + a1b1 - b1a1");
        assert!(expand(1, &w("a2"), 2).is_err());
    }

    #[test]
    fn relator_keystone() {
        for g in 2..=3 {
            for k in 1..=5 {
                if g == 3 && k == 5 {
                    continue;
                }
                assert!(expand(g, &GroupWord::surface_relator(g), k).unwrap().is_one(), "g={g} k={k}");
            }
        }
    }

    #[test]
    fn naive_homogeneous_reduction_misses_relator() {
        // reducing the plain expansion by ω alone leaves a degree-3 remainder
        let alg = EnvelopingAlgebra::new(2).unwrap();
        let raw = free_expansion(&GroupWord::surface_relator(2), 3);
        let r = alg.reduce(&raw);
        assert!(r.poly().component(2).is_zero());
        assert!(!r.poly().component(3).is_zero());
        assert!(alg.reduce(&omega_assoc(2)).is_zero());
    }

    #[test]
    fn equality_examples() {
        assert!(equal_in_quotient(2, &w("a1 b1"), &w("b1 a1"), 1).unwrap());
        assert!(!equal_in_quotient(2, &w("a1 b1"), &w("b1 a1"), 2).unwrap());
        for k in 1..=4 {
            assert!(equal_in_quotient(2, &GroupWord::surface_relator(2), &GroupWord::identity(), k).unwrap());
        }
    }

    #[test]
    fn bracket_expansion_matches_word_expansion() {
        let ctx = MagnusContext::new(2, 4).unwrap();
        let mut memo = HashMap::new();
        for hw in hall_basis(4, 3).iter() {
            let tree = hw.bracketing();
            let a = ctx.expand_bracket(&tree, &mut memo);
            let b = ctx.expand(&GroupWord::from_bracket(&tree)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn layer_ranks_match_lie_algebra() {
        let alg = SurfaceAlgebra::build(2, 4).unwrap();
        for k in 1..=4 {
            assert_eq!(commutator_layer_rank(2, k).unwrap(), alg.rank(k).unwrap());
        }
    }

    #[test]
    fn center_of_quotient_examples() {
        let r = center_of_quotient(2, 2).unwrap();
        assert!(r.passed());
        assert_eq!(r.layers[1].rank, 5);
        let r = center_of_quotient(3, 2).unwrap();
        assert!(r.passed());
        assert_eq!(r.layers[1].rank, 14);
        assert!(center_of_quotient(2, 3).unwrap().passed());
        assert!(center_of_quotient(2, 1).is_err());
    }

    #[test]
    fn center_of_quotient_detects_abelian_case() {
        // genus 1: π is abelian, so layer 1 is central mod γ_3
        let r = center_of_quotient(1, 2).unwrap();
        assert!(r.layers[0].central);
        assert!(!r.passed());
    }

    #[test]
    fn identity_viii_examples() {
        let g = w("a1 b2");
        let n = w("b1 A2 a1");
        assert!(verify_identity_viii(&GroupWord::identity(), &g, &n));
        assert!(verify_identity_viii(&w("a2"), &g, &GroupWord::identity()));
        assert!(verify_identity_viii(&w("a2 B1"), &g, &n));
    }

    fn arb_word(g: u8, max_len: usize) -> impl Strategy<Value = GroupWord> {
        proptest::collection::vec((0..2 * g, any::<bool>()), 0..=max_len).prop_map(|ls| {
            GroupWord::from_letters(ls.into_iter().map(|(generator, inverse)| GroupLetter { generator, inverse }))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn expansion_is_multiplicative(u in arb_word(2, 6), v in arb_word(2, 6), k in 1usize..=5) {
            let ctx = MagnusContext::new(2, k).unwrap();
            let lhs = ctx.expand(&u.mul(&v)).unwrap();
            let rhs = ctx.mul(&ctx.expand(&u).unwrap(), &ctx.expand(&v).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn inverse_series(u in arb_word(3, 6)) {
            let ctx = MagnusContext::new(3, 4).unwrap();
            let x = ctx.expand(&u).unwrap();
            prop_assert_eq!(ctx.inverse(&x), ctx.expand(&u.inverse()).unwrap());
            prop_assert!(ctx.mul(&x, &ctx.inverse(&x)).is_one());
        }

        #[test]
        fn identity_viii_random(p in arb_word(3, 8), g in arb_word(3, 8), n in arb_word(3, 8)) {
            prop_assert!(verify_identity_viii(&p, &g, &n));
        }

        #[test]
        fn conjugating_the_relator_is_trivial(u in arb_word(2, 5)) {
            let r = GroupWord::surface_relator(2);
            let c = u.mul(&r).mul(&u.inverse());
            prop_assert!(equal_in_quotient(2, &c, &GroupWord::identity(), 4).unwrap());
        }
    }
}
