//! Monomial model of the dual Steenrod algebra quotients that house the
//! homology of the truncated Brown-Peterson spectra, with the degree,
//! weight and length gradings and the action of the Milnor primitives
//! Q0, Q1, Q2.
//!
//! Generators are written `z1, z2, z3, ...` with `deg(z_k) = 2^k - 1`,
//! `wt(z_k) = 2^(k-1)`. The action is the single rule
//! `Q_i(z_n) = z_{n-i-1}^{2^(i+1)}` with `z_0 = 1`, extended as a
//! derivation and reduced in the ambient algebra. The piecewise formulas
//! for the individual quotient algebras are recovered as special cases
//! and checked in the tests.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

/// A finitely supported exponent vector `z1^e1 z2^e2 ...`; `exps[k]` is
/// the exponent of `z_{k+1}`. Trailing zeros are stripped.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    /// The generator `z_k`, `k >= 1`.
    pub fn gen(k: usize) -> Self {
        assert!(k >= 1, "generators are indexed from 1");
        let mut exps = vec![0; k];
        exps[k - 1] = 1;
        Monomial { exps }
    }

    pub fn from_pairs(pairs: &[(usize, u32)]) -> Self {
        let mut m = Monomial::one();
        for &(k, e) in pairs {
            assert!(k >= 1);
            if m.exps.len() < k {
                m.exps.resize(k, 0);
            }
            m.exps[k - 1] += e;
        }
        m.normalize();
        m
    }

    fn normalize(&mut self) {
        while self.exps.last() == Some(&0) {
            self.exps.pop();
        }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    /// Exponent of `z_k`.
    pub fn exp(&self, k: usize) -> u32 {
        assert!(k >= 1);
        self.exps.get(k - 1).copied().unwrap_or(0)
    }

    /// Largest `k` with a nonzero exponent (0 for the unit).
    pub fn top_gen(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> i64 {
        self.exps
            .iter()
            .enumerate()
            .map(|(i, &e)| e as i64 * ((1i64 << (i + 1)) - 1))
            .sum()
    }

    pub fn weight(&self) -> i64 {
        self.exps
            .iter()
            .enumerate()
            .map(|(i, &e)| e as i64 * (1i64 << i))
            .sum()
    }

    /// Number of odd exponents.
    pub fn length(&self) -> u32 {
        self.exps.iter().filter(|&&e| e % 2 == 1).count() as u32
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.exps.len().max(other.exps.len());
        let mut exps = vec![0u32; n];
        for (i, e) in exps.iter_mut().enumerate() {
            *e = self.exps.get(i).copied().unwrap_or(0) + other.exps.get(i).copied().unwrap_or(0);
        }
        let mut m = Monomial { exps };
        m.normalize();
        m
    }

    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        if other.exps.len() > self.exps.len() {
            return None;
        }
        let mut exps = self.exps.clone();
        for (i, &e) in other.exps.iter().enumerate() {
            if exps[i] < e {
                return None;
            }
            exps[i] -= e;
        }
        let mut m = Monomial { exps };
        m.normalize();
        Some(m)
    }

    /// Substitute `z_k -> z_{k+1}` for every generator.
    pub fn shift_up(&self) -> Monomial {
        if self.is_one() {
            return Monomial::one();
        }
        let mut exps = vec![0];
        exps.extend_from_slice(&self.exps);
        Monomial { exps }
    }

    /// Substitute `z_k -> z_{k-1}` with `z_1 -> 1` (the relabeling map
    /// underlying `phi`).
    pub fn shift_down(&self) -> Monomial {
        if self.exps.len() <= 1 {
            return Monomial::one();
        }
        let mut m = Monomial {
            exps: self.exps[1..].to_vec(),
        };
        m.normalize();
        m
    }

    /// `z_k^e` replaced by `z_k^(e + delta)`; panics below zero.
    pub fn with_exp_delta(&self, k: usize, delta: i64) -> Monomial {
        let cur = self.exp(k) as i64;
        let new = cur + delta;
        assert!(new >= 0, "negative exponent");
        let mut exps = self.exps.clone();
        if exps.len() < k {
            exps.resize(k, 0);
        }
        exps[k - 1] = new as u32;
        let mut m = Monomial { exps };
        m.normalize();
        m
    }
}

/// Graded lexicographic order: by degree, then by the exponent vector
/// read from `z1` upward.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "z{}", i + 1)?;
            } else {
                write!(f, "z{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The ambient algebras whose monomial bases we enumerate.
///
/// * `FullDual` - the whole dual Steenrod algebra, all exponents free.
/// * `AModE(n)` - the quotient-module model of `H_* BP<n>`: exponents of
///   `z1 ... z_{n+1}` even, the rest free.
/// * `Exterior(n)` - the dual of `E(n)`: exterior on `z1 ... z_{n+1}`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum AlgebraId {
    FullDual,
    AModE(u8),
    Exterior(u8),
}

impl AlgebraId {
    pub fn contains(&self, m: &Monomial) -> bool {
        match *self {
            AlgebraId::FullDual => true,
            AlgebraId::AModE(n) => (1..=n as usize + 1).all(|k| m.exp(k) % 2 == 0),
            AlgebraId::Exterior(n) => {
                m.top_gen() <= n as usize + 1 && m.exponents().iter().all(|&e| e <= 1)
            }
        }
    }
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraId::FullDual => write!(f, "A*"),
            AlgebraId::AModE(n) => write!(f, "A//E({n})*"),
            AlgebraId::Exterior(n) => write!(f, "E({n})*"),
        }
    }
}

/// A homogeneous GF(2) sum of monomials in a fixed ambient algebra.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Element {
    pub ambient: AlgebraId,
    pub terms: BTreeSet<Monomial>,
}

impl Element {
    pub fn zero(ambient: AlgebraId) -> Self {
        Element {
            ambient,
            terms: BTreeSet::new(),
        }
    }

    pub fn from_monomial(ambient: AlgebraId, m: Monomial) -> Self {
        debug_assert!(ambient.contains(&m));
        let mut terms = BTreeSet::new();
        terms.insert(m);
        Element { ambient, terms }
    }

    pub fn from_monomials<I: IntoIterator<Item = Monomial>>(ambient: AlgebraId, it: I) -> Self {
        let mut e = Element::zero(ambient);
        for m in it {
            e.toggle(m);
        }
        e
    }

    /// GF(2) addition of a single term.
    pub fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        debug_assert_eq!(self.ambient, other.ambient);
        let mut out = self.clone();
        for m in &other.terms {
            out.toggle(m.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<i64> {
        let mut it = self.terms.iter().map(Monomial::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// The common length of all terms, when it is well defined; the
    /// zero element counts as length 0.
    pub fn length(&self) -> Option<u32> {
        let mut it = self.terms.iter().map(Monomial::length);
        let Some(first) = it.next() else {
            return Some(0);
        };
        it.all(|l| l == first).then_some(first)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for m in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// `Q_i(z_k)` as a monomial before reduction: `z_{k-i-1}^{2^(i+1)}`,
/// with `z_0 = 1`; `None` when `k < i + 1` (the action vanishes).
pub fn q_generator(i: u8, k: usize) -> Option<Monomial> {
    let i = i as usize;
    if k < i + 1 {
        return None;
    }
    let target = k - i - 1;
    if target == 0 {
        Some(Monomial::one())
    } else {
        Some(Monomial::from_pairs(&[(target, 1 << (i + 1))]))
    }
}

/// Q_i on a single monomial as a derivation over GF(2): only the odd
/// exponents contribute, and terms leaving the ambient algebra (which
/// only happens for exterior ambients) are discarded as relations.
pub fn q_monomial(i: u8, m: &Monomial, ambient: AlgebraId) -> Element {
    let mut out = Element::zero(ambient);
    for k in 1..=m.top_gen() {
        if m.exp(k) % 2 == 0 {
            continue;
        }
        let Some(image) = q_generator(i, k) else {
            continue;
        };
        let term = m.with_exp_delta(k, -1).mul(&image);
        if ambient.contains(&term) {
            out.toggle(term);
        }
    }
    out
}

/// Q_i extended additively to sums.
pub fn q_action(i: u8, e: &Element) -> Element {
    let mut out = Element::zero(e.ambient);
    for m in &e.terms {
        out = out.add(&q_monomial(i, m, e.ambient));
    }
    out
}

/// Degree shift of `Q_i`: `2^(i+1) - 1`.
pub fn q_degree(i: u8) -> i64 {
    (1i64 << (i + 1)) - 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightFilter {
    Exactly(i64),
    AtMost(i64),
}

/// All monomials of `alg` with degree at most `max_degree` (when given)
/// and weight as filtered, in graded lexicographic order. At least one
/// of the bounds must be present so the answer is finite.
pub fn enumerate_basis(
    alg: AlgebraId,
    max_degree: Option<i64>,
    weight: Option<WeightFilter>,
) -> Vec<Monomial> {
    let degree_cap = match (max_degree, weight) {
        (Some(d), _) => d,
        // deg(m) <= 2 wt(m) - 1 for nonunit monomials
        (None, Some(WeightFilter::Exactly(w) | WeightFilter::AtMost(w))) => (2 * w).max(0),
        (None, None) => panic!("enumerate_basis needs a degree or weight bound"),
    };
    let weight_cap = match weight {
        Some(WeightFilter::Exactly(w) | WeightFilter::AtMost(w)) => w,
        // wt(m) <= deg(m) for every monomial (wt z_k <= deg z_k)
        None => degree_cap,
    };
    let mut out = Vec::new();
    let mut exps: Vec<u32> = Vec::new();
    // Recurse over generator indices; z_k contributes degree 2^k - 1,
    // so indices with 2^k - 1 > degree_cap never appear.
    fn rec(
        alg: AlgebraId,
        k: usize,
        deg_left: i64,
        wt_left: i64,
        exps: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
    ) {
        let gen_deg = (1i64 << k) - 1;
        let gen_wt = 1i64 << (k - 1);
        if gen_deg > deg_left || gen_wt > wt_left {
            let mut m = Monomial {
                exps: exps.clone(),
            };
            m.normalize();
            out.push(m);
            return;
        }
        let step = match alg {
            AlgebraId::FullDual => 1u32,
            AlgebraId::AModE(n) => {
                if k <= n as usize + 1 {
                    2
                } else {
                    1
                }
            }
            AlgebraId::Exterior(n) => {
                if k > n as usize + 1 {
                    // out of range entirely
                    let mut m = Monomial {
                        exps: exps.clone(),
                    };
                    m.normalize();
                    out.push(m);
                    return;
                }
                1
            }
        };
        let max_e = match alg {
            AlgebraId::Exterior(_) => 1i64,
            _ => (deg_left / gen_deg).min(wt_left / gen_wt),
        };
        let mut e = 0i64;
        while e <= max_e {
            exps.push(e as u32);
            rec(
                alg,
                k + 1,
                deg_left - e * gen_deg,
                wt_left - e * gen_wt,
                exps,
                out,
            );
            exps.pop();
            e += step as i64;
        }
    }
    if degree_cap >= 0 && weight_cap >= 0 {
        rec(alg, 1, degree_cap, weight_cap, &mut exps, &mut out);
    }
    if let Some(WeightFilter::Exactly(w)) = weight {
        out.retain(|m| m.weight() == w);
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(pairs: &[(usize, u32)]) -> Monomial {
        Monomial::from_pairs(pairs)
    }

    #[test]
    fn degrees() {
        assert_eq!(Monomial::one().degree(), 0);
        assert_eq!(Monomial::gen(3).degree(), 7);
        assert_eq!(mono(&[(1, 4), (2, 2)]).degree(), 10);
    }

    #[test]
    fn weights() {
        assert_eq!(Monomial::gen(4).weight(), 8);
        assert_eq!(mono(&[(1, 2), (2, 2)]).weight(), 6);
        assert_eq!(mono(&[(3, 2)]).weight(), 8);
    }

    #[test]
    fn length_of_elements() {
        let amb = AlgebraId::FullDual;
        let e = Element::from_monomials(amb, [Monomial::gen(5), Monomial::gen(6)]);
        assert_eq!(e.length(), Some(1));
        let undef = Element::from_monomials(amb, [mono(&[(1, 2)]), Monomial::gen(5)]);
        assert_eq!(undef.length(), None);
        assert_eq!(mono(&[(4, 1), (5, 1)]).length(), 2);
    }

    #[test]
    fn q_action_on_generators() {
        // Q_i z_n = z_{n-i-1}^{2^(i+1)}
        assert_eq!(q_generator(0, 4), Some(mono(&[(3, 2)])));
        assert_eq!(q_generator(1, 4), Some(mono(&[(2, 4)])));
        assert_eq!(q_generator(2, 4), Some(mono(&[(1, 8)])));
        assert_eq!(q_generator(2, 3), Some(Monomial::one()));
        assert_eq!(q_generator(2, 2), None);
    }

    #[test]
    fn q_kills_squares() {
        let amb = AlgebraId::AModE(2);
        for i in 0..3 {
            for k in 1..=3usize {
                let e = Element::from_monomial(amb, mono(&[(k, 2)]));
                assert!(q_action(i, &e).is_zero(), "Q{i} z{k}^2");
            }
        }
    }

    #[test]
    fn q0_of_adjacent_product() {
        // Q_0(z_n z_{n+1}) = z_{n-1}^2 z_{n+1} + z_n^3
        let amb = AlgebraId::AModE(2);
        let e = Element::from_monomial(amb, mono(&[(4, 1), (5, 1)]));
        let got = q_action(0, &e);
        let want = Element::from_monomials(amb, [mono(&[(3, 2), (5, 1)]), mono(&[(4, 3)])]);
        assert_eq!(got, want);
    }

    #[test]
    fn q2_z3_in_a_mod_e1() {
        let amb = AlgebraId::AModE(1);
        let e = Element::from_monomial(amb, Monomial::gen(3));
        let got = q_action(2, &e);
        assert_eq!(got, Element::from_monomial(amb, Monomial::one()));
    }

    #[test]
    fn exterior_action_drops_relations() {
        // In E(2)* the rule reduces to partial derivative in z_{i+1}.
        let amb = AlgebraId::Exterior(2);
        let m = mono(&[(1, 1), (2, 1), (3, 1)]);
        let got = q_action(2, &Element::from_monomial(amb, m));
        assert_eq!(got, Element::from_monomial(amb, mono(&[(1, 1), (2, 1)])));
        // Q0 z3 = z2^2 = 0 in the exterior algebra.
        let z3 = Element::from_monomial(amb, Monomial::gen(3));
        assert!(q_action(0, &z3).is_zero());
    }

    #[test]
    fn enumerate_bu1() {
        let got = enumerate_basis(AlgebraId::AModE(1), None, Some(WeightFilter::AtMost(2)));
        assert_eq!(got, vec![Monomial::one(), mono(&[(1, 2)])]);
    }

    #[test]
    fn enumerate_weight_exactly_8() {
        let got = enumerate_basis(AlgebraId::AModE(2), None, Some(WeightFilter::Exactly(8)));
        let want = vec![
            mono(&[(1, 8)]),
            mono(&[(1, 4), (2, 2)]),
            mono(&[(2, 4)]),
            mono(&[(3, 2)]),
            Monomial::gen(4),
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn enumerate_low_degrees() {
        let got = enumerate_basis(AlgebraId::AModE(2), Some(2), None);
        assert_eq!(got, vec![Monomial::one(), mono(&[(1, 2)])]);
    }

    #[test]
    fn enumerate_exterior() {
        let got = enumerate_basis(AlgebraId::Exterior(1), Some(10), None);
        assert_eq!(
            got,
            vec![
                Monomial::one(),
                Monomial::gen(1),
                Monomial::gen(2),
                mono(&[(1, 1), (2, 1)])
            ]
        );
    }

    #[test]
    fn derivation_degree_weight_length_laws() {
        let amb = AlgebraId::AModE(2);
        let basis = enumerate_basis(amb, Some(24), None);
        for m in &basis {
            for i in 0..3u8 {
                let qm = q_monomial(i, m, amb);
                if m.length() == 0 {
                    assert!(qm.is_zero());
                    continue;
                }
                for t in &qm.terms {
                    assert_eq!(t.degree(), m.degree() - q_degree(i));
                    assert_eq!(t.weight(), m.weight());
                    assert_eq!(t.length(), m.length() - 1);
                }
            }
        }
    }

    #[test]
    fn q_squares_to_zero_and_commutes() {
        let amb = AlgebraId::AModE(2);
        let basis = enumerate_basis(amb, Some(26), None);
        for m in &basis {
            let e = Element::from_monomial(amb, m.clone());
            for i in 0..3u8 {
                assert!(q_action(i, &q_action(i, &e)).is_zero(), "Q{i}^2 {m}");
                for j in 0..3u8 {
                    assert_eq!(
                        q_action(i, &q_action(j, &e)),
                        q_action(j, &q_action(i, &e)),
                        "commuting at {m}"
                    );
                }
            }
        }
    }

    #[test]
    fn derivation_law_on_products() {
        let amb = AlgebraId::AModE(2);
        let basis = enumerate_basis(amb, Some(12), None);
        for x in &basis {
            for y in &basis {
                let xy = Element::from_monomial(amb, x.mul(y));
                for i in 0..3u8 {
                    let lhs = q_action(i, &xy);
                    let mut rhs = Element::zero(amb);
                    for t in q_monomial(i, x, amb).terms {
                        rhs.toggle(t.mul(y));
                    }
                    for t in q_monomial(i, y, amb).terms {
                        rhs.toggle(x.mul(&t));
                    }
                    assert_eq!(lhs, rhs, "Leibniz at {x} * {y}");
                }
            }
        }
    }
}
