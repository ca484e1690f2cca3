//! Finite presentations of graded modules over the exterior algebras
//! E(1) and E(2), given by per-degree labelled bases and per-degree
//! action matrices for the Milnor primitives.
//!
//! Everything is windowed: a presentation either contains the whole
//! (finite-dimensional) module (`complete`) or is only trusted through
//! its `window` degree. Constructors never silently extend windows.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::gf2::{BitVec, Mat2, PivotRule, Subspace};
use crate::milnor::{
    enumerate_basis, q_degree, q_monomial, AlgebraId, Element, Monomial, WeightFilter,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComodError {
    #[error("requested window {requested} exceeds available window {available}")]
    WindowOverflow { requested: i64, available: i64 },
    #[error("modules are over different ground rings")]
    RingMismatch,
    #[error("span is not closed under Q{q} at degree {degree}")]
    NotClosed { q: u8, degree: i64 },
    #[error("label not found in target at degree {degree}: {label}")]
    LabelNotFound { degree: i64, label: String },
}

/// The ground exterior algebra: how many Milnor primitives act.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, PartialOrd, Ord)]
pub enum Ring {
    E1,
    E2,
}

impl Ring {
    pub fn q_count(self) -> usize {
        match self {
            Ring::E1 => 2,
            Ring::E2 => 3,
        }
    }

    /// Internal degrees of the polynomial generators v_i of Ext.
    pub fn v_degrees(self) -> &'static [i64] {
        match self {
            Ring::E1 => &[1, 3],
            Ring::E2 => &[1, 3, 7],
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::E1 => write!(f, "E(1)"),
            Ring::E2 => write!(f, "E(2)"),
        }
    }
}

/// Basis labels. Monomial labels are the common case; tensors and sums
/// keep constructions readable, and `Combo` names an echelon basis
/// vector of a submodule by its monomial support.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Label {
    Mono(Monomial),
    Tensor(Box<Label>, Box<Label>),
    Summand(u32, Box<Label>),
    Combo(Vec<Label>),
    Atom(String),
}

impl Label {
    pub fn mono(&self) -> Option<&Monomial> {
        match self {
            Label::Mono(m) => Some(m),
            _ => None,
        }
    }

    /// Length grading when every constituent is a monomial: a tensor
    /// label has the sum of the factor lengths, a combo only a common
    /// length.
    pub fn length(&self) -> Option<u32> {
        match self {
            Label::Mono(m) => Some(m.length()),
            Label::Tensor(a, b) => Some(a.length()? + b.length()?),
            Label::Summand(_, l) => l.length(),
            Label::Combo(ls) => {
                let mut it = ls.iter().map(Label::length);
                let first = it.next()??;
                it.all(|l| l == Some(first)).then_some(first)
            }
            Label::Atom(_) => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Mono(m) => write!(f, "{m}"),
            Label::Tensor(a, b) => write!(f, "{a} (x) {b}"),
            Label::Summand(i, l) => write!(f, "[{i}]{l}"),
            Label::Combo(ls) => {
                let mut first = true;
                for l in ls {
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    write!(f, "{l}")?;
                }
                Ok(())
            }
            Label::Atom(s) => write!(f, "{s}"),
        }
    }
}

/// A graded module over E(1) or E(2) on a finite labelled basis, with
/// one matrix per degree per Milnor primitive. `actions[i]` at degree
/// `d` maps the degree-`d` slice to degree `d - (2^(i+1) - 1)`.
#[derive(Clone, Debug)]
pub struct ModulePres {
    pub ring: Ring,
    pub window: i64,
    pub complete: bool,
    basis: BTreeMap<i64, Vec<Label>>,
    actions: Vec<BTreeMap<i64, Mat2>>,
}

impl ModulePres {
    pub fn dim(&self, d: i64) -> usize {
        self.basis.get(&d).map_or(0, Vec::len)
    }

    pub fn total_dim(&self) -> usize {
        self.basis.values().map(Vec::len).sum()
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.basis.keys().copied()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.basis.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.basis.keys().next_back().copied()
    }

    pub fn labels(&self, d: i64) -> &[Label] {
        self.basis.get(&d).map_or(&[], Vec::as_slice)
    }

    pub fn label_index(&self, d: i64, label: &Label) -> Option<usize> {
        self.labels(d).iter().position(|l| l == label)
    }

    pub fn monomial_index(&self, m: &Monomial) -> Option<(i64, usize)> {
        let d = m.degree();
        let idx = self
            .labels(d)
            .iter()
            .position(|l| l.mono() == Some(m))?;
        Some((d, idx))
    }

    /// Action of Q_i out of degree `d`, synthesizing a zero matrix of
    /// the right shape when none is stored.
    pub fn action(&self, i: u8, d: i64) -> Mat2 {
        let rows = self.dim(d - q_degree(i));
        let cols = self.dim(d);
        self.actions[i as usize]
            .get(&d)
            .cloned()
            .unwrap_or_else(|| Mat2::zero(rows, cols))
    }

    /// Degrees whose Margolis homology with respect to Q_i can be
    /// certified: for an incomplete window the top `2^(i+1) - 1` degrees
    /// cannot see incoming boundaries.
    pub fn reliable_for(&self, i: u8, d: i64) -> bool {
        self.complete || d + q_degree(i) <= self.window
    }

    /// Q_i Q_i = 0 and Q_i Q_j = Q_j Q_i as matrices in the window.
    pub fn verify(&self) -> Result<(), ComodError> {
        let q = self.ring.q_count() as u8;
        for &d in self.basis.keys() {
            for i in 0..q {
                for j in i..q {
                    let via_ij = self.action(i, d - q_degree(j)).mul(&self.action(j, d));
                    let via_ji = self.action(j, d - q_degree(i)).mul(&self.action(i, d));
                    if via_ij != via_ji {
                        return Err(ComodError::NotClosed { q: i, degree: d });
                    }
                    if i == j && !via_ij.is_zero() {
                        return Err(ComodError::NotClosed { q: i, degree: d });
                    }
                }
            }
        }
        Ok(())
    }

    /// Core builder: a module spanned by monomials of `alg`, with the
    /// Milnor-primitive action computed by the derivation rule. With a
    /// `section` predicate the action is projected onto the span
    /// (quotient presentation); without one the span must be closed.
    fn from_monomials(
        ring: Ring,
        alg: AlgebraId,
        monos: Vec<Monomial>,
        window: i64,
        complete: bool,
        section: Option<&dyn Fn(&Monomial) -> bool>,
    ) -> Result<ModulePres, ComodError> {
        let mut basis: BTreeMap<i64, Vec<Label>> = BTreeMap::new();
        let mut index: BTreeMap<Monomial, (i64, usize)> = BTreeMap::new();
        let mut sorted = monos;
        sorted.sort();
        sorted.dedup();
        for m in sorted {
            let d = m.degree();
            let entry = basis.entry(d).or_default();
            index.insert(m.clone(), (d, entry.len()));
            entry.push(Label::Mono(m));
        }
        let mut actions = vec![BTreeMap::new(); ring.q_count()];
        for (&d, labels) in &basis {
            for i in 0..ring.q_count() as u8 {
                let target = d - q_degree(i);
                let rows = basis.get(&target).map_or(0, Vec::len);
                let mut mat = Mat2::zero(rows, labels.len());
                for (col, label) in labels.iter().enumerate() {
                    let m = label.mono().expect("monomial basis");
                    for term in q_monomial(i, m, alg).terms {
                        if let Some(keep) = section {
                            if !keep(&term) {
                                continue;
                            }
                        }
                        match index.get(&term) {
                            Some(&(td, row)) if td == target => {
                                let cur = mat.get(row, col);
                                mat.set(row, col, !cur);
                            }
                            _ => return Err(ComodError::NotClosed { q: i, degree: d }),
                        }
                    }
                }
                actions[i as usize].insert(d, mat);
            }
        }
        let pres = ModulePres {
            ring,
            window,
            complete,
            basis,
            actions,
        };
        debug_assert!(pres.verify().is_ok());
        Ok(pres)
    }

    /// A module spanned by the given monomials, which must be closed
    /// under the action.
    pub fn span_closed(
        ring: Ring,
        alg: AlgebraId,
        monos: Vec<Monomial>,
        window: i64,
        complete: bool,
    ) -> Result<ModulePres, ComodError> {
        Self::from_monomials(ring, alg, monos, window, complete, None)
    }

    /// A quotient presentation on a monomial section: the action acts in
    /// the ambient algebra and keeps only the terms satisfying `keep`.
    /// Only valid when the discarded span is a submodule.
    pub fn span_section(
        ring: Ring,
        alg: AlgebraId,
        monos: Vec<Monomial>,
        window: i64,
        complete: bool,
        keep: &dyn Fn(&Monomial) -> bool,
    ) -> Result<ModulePres, ComodError> {
        Self::from_monomials(ring, alg, monos, window, complete, Some(keep))
    }

    /// The ambient algebra `(A // E(n))_*` through internal degree
    /// `max_degree`. An incomplete window: the algebra is infinite.
    pub fn ambient(n: u8, max_degree: i64, ring: Ring) -> ModulePres {
        let monos = enumerate_basis(AlgebraId::AModE(n), Some(max_degree), None);
        Self::from_monomials(ring, AlgebraId::AModE(n), monos, max_degree, false, None)
            .expect("ambient algebras are closed under the action")
    }

    /// Brown-Gitler comodule `N_i(j)`: the span of monomials of weight
    /// at most `2j` in `(A // E(i))_*`. Finite, hence complete.
    pub fn brown_gitler(i: u8, j: i64, ring: Ring) -> ModulePres {
        let monos = enumerate_basis(AlgebraId::AModE(i), None, Some(WeightFilter::AtMost(2 * j)));
        let window = monos.iter().map(Monomial::degree).max().unwrap_or(0);
        Self::from_monomials(ring, AlgebraId::AModE(i), monos, window, true, None)
            .expect("weight is preserved by the action")
    }

    /// The weight component `M_i(j)`: monomials of weight exactly `2j`.
    pub fn weight_component(i: u8, j: i64, ring: Ring) -> ModulePres {
        let monos = enumerate_basis(AlgebraId::AModE(i), None, Some(WeightFilter::Exactly(2 * j)));
        let window = monos.iter().map(Monomial::degree).max().unwrap_or(0);
        Self::from_monomials(ring, AlgebraId::AModE(i), monos, window, true, None)
            .expect("weight is preserved by the action")
    }

    /// `E(n)_*` as a module over itself (rank-one free module).
    pub fn exterior(n: u8, ring: Ring) -> ModulePres {
        let alg = AlgebraId::Exterior(n);
        let monos = enumerate_basis(alg, Some((1 << (n as i64 + 2)) - 2 - n as i64), None);
        let window = monos.iter().map(Monomial::degree).max().unwrap_or(0);
        Self::from_monomials(ring, alg, monos, window, true, None)
            .expect("exterior algebra is closed")
    }

    /// One copy of F2 in degree `d`.
    pub fn f2_at(ring: Ring, d: i64) -> ModulePres {
        let mut basis = BTreeMap::new();
        basis.insert(d, vec![Label::Mono(Monomial::one())]);
        let mut actions = vec![BTreeMap::new(); ring.q_count()];
        for (i, map) in actions.iter_mut().enumerate() {
            map.insert(d, Mat2::zero(0, 1));
            let _ = i;
        }
        ModulePres {
            ring,
            window: d,
            complete: true,
            basis,
            actions,
        }
    }

    pub fn trivial(ring: Ring) -> ModulePres {
        Self::f2_at(ring, 0)
    }

    /// The quotient `Q^j (A // E(1))_*` of the ambient algebra by the
    /// weight filtration, presented on its monomial section: monomials
    /// `m z3^e` (`e` = 0 or 1, `m` with even z3-power) with `wt(m) <= 2j`.
    /// The action acts in the ambient algebra and discards terms that
    /// leave the section. Finite; `cap` optionally truncates degrees.
    pub fn filtration_quotient(j: i64, ring: Ring, cap: Option<i64>) -> ModulePres {
        let keep = move |m: &Monomial| even_part_weight(m) <= 2 * j;
        let all = enumerate_basis(
            AlgebraId::AModE(1),
            None,
            Some(WeightFilter::AtMost(2 * j + 4)),
        );
        let mut monos: Vec<Monomial> = all.into_iter().filter(|m| keep(m)).collect();
        let natural_window = monos.iter().map(Monomial::degree).max().unwrap_or(0);
        let (window, complete) = match cap {
            Some(c) if c < natural_window => {
                monos.retain(|m| m.degree() <= c);
                (c, false)
            }
            _ => (natural_window, true),
        };
        Self::from_monomials(ring, AlgebraId::AModE(1), monos, window, complete, Some(&keep))
            .expect("section projection cannot fail")
    }

    pub fn suspend(&self, k: i64) -> ModulePres {
        let basis = self.basis.iter().map(|(&d, l)| (d + k, l.clone())).collect();
        let actions = self
            .actions
            .iter()
            .map(|a| a.iter().map(|(&d, m)| (d + k, m.clone())).collect())
            .collect();
        ModulePres {
            ring: self.ring,
            window: self.window + k,
            complete: self.complete,
            basis,
            actions,
        }
    }

    /// Graded tensor product with the diagonal (primitive) action
    /// `Q_i(x (x) y) = Q_i x (x) y + x (x) Q_i y`.
    pub fn tensor(&self, other: &ModulePres, cap: Option<i64>) -> Result<ModulePres, ComodError> {
        if self.ring != other.ring {
            return Err(ComodError::RingMismatch);
        }
        let available = if self.complete && other.complete {
            self.window + other.window
        } else {
            self.window.min(other.window)
        };
        let window = match cap {
            Some(c) if c > available => {
                return Err(ComodError::WindowOverflow {
                    requested: c,
                    available,
                })
            }
            Some(c) => c,
            None => available,
        };
        let complete = self.complete && other.complete && window >= available;

        // Basis of degree d: (da, ia, ib) in lexicographic order.
        let mut basis: BTreeMap<i64, Vec<Label>> = BTreeMap::new();
        let mut index: BTreeMap<(i64, usize, i64, usize), usize> = BTreeMap::new();
        let lo_a = self.min_degree().unwrap_or(0);
        let lo_b = other.min_degree().unwrap_or(0);
        for (&da, la) in &self.basis {
            for (&db, lb) in &other.basis {
                let d = da + db;
                if d > window {
                    continue;
                }
                let entry = basis.entry(d).or_default();
                for (ia, a) in la.iter().enumerate() {
                    for (ib, b) in lb.iter().enumerate() {
                        index.insert((da, ia, db, ib), entry.len());
                        entry.push(Label::Tensor(Box::new(a.clone()), Box::new(b.clone())));
                    }
                }
            }
        }
        let _ = (lo_a, lo_b);
        let dims: BTreeMap<i64, usize> = basis.iter().map(|(&d, l)| (d, l.len())).collect();
        let mut actions = vec![BTreeMap::new(); self.ring.q_count()];
        for (&(da, ia, db, ib), &col) in &index {
            let d = da + db;
            for i in 0..self.ring.q_count() as u8 {
                let target = d - q_degree(i);
                let rows = dims.get(&target).copied().unwrap_or(0);
                let mat = actions[i as usize]
                    .entry(d)
                    .or_insert_with(|| Mat2::zero(rows, dims[&d]));
                // Q_i a (x) b
                let qa = self.action(i, da);
                for row_a in 0..qa.rows() {
                    if qa.get(row_a, ia) {
                        if let Some(&r) = index.get(&(da - q_degree(i), row_a, db, ib)) {
                            let cur = mat.get(r, col);
                            mat.set(r, col, !cur);
                        }
                    }
                }
                // a (x) Q_i b
                let qb = other.action(i, db);
                for row_b in 0..qb.rows() {
                    if qb.get(row_b, ib) {
                        if let Some(&r) = index.get(&(da, ia, db - q_degree(i), row_b)) {
                            let cur = mat.get(r, col);
                            mat.set(r, col, !cur);
                        }
                    }
                }
            }
        }
        // Fill in zero matrices for degrees without any action entries.
        for (&d, &cols) in &dims {
            for i in 0..self.ring.q_count() {
                actions[i].entry(d).or_insert_with(|| {
                    Mat2::zero(dims.get(&(d - q_degree(i as u8))).copied().unwrap_or(0), cols)
                });
            }
        }
        let pres = ModulePres {
            ring: self.ring,
            window,
            complete,
            basis,
            actions,
        };
        debug_assert!(pres.verify().is_ok());
        Ok(pres)
    }

    pub fn direct_sum(parts: &[&ModulePres]) -> Result<ModulePres, ComodError> {
        let ring = parts.first().map_or(Ring::E2, |p| p.ring);
        if parts.iter().any(|p| p.ring != ring) {
            return Err(ComodError::RingMismatch);
        }
        let incomplete: Vec<&&ModulePres> = parts.iter().filter(|p| !p.complete).collect();
        let complete = incomplete.is_empty();
        let window = if complete {
            parts.iter().map(|p| p.window).max().unwrap_or(0)
        } else {
            incomplete.iter().map(|p| p.window).min().unwrap()
        };
        let mut basis: BTreeMap<i64, Vec<Label>> = BTreeMap::new();
        // offsets[part][degree] = column offset of that part's slice
        let mut offsets: Vec<BTreeMap<i64, usize>> = vec![BTreeMap::new(); parts.len()];
        let mut degrees: Vec<i64> = parts
            .iter()
            .flat_map(|p| p.degrees().collect::<Vec<_>>())
            .filter(|&d| d <= window)
            .collect();
        degrees.sort_unstable();
        degrees.dedup();
        for &d in &degrees {
            let entry = basis.entry(d).or_default();
            for (pi, p) in parts.iter().enumerate() {
                offsets[pi].insert(d, entry.len());
                for l in p.labels(d) {
                    entry.push(Label::Summand(pi as u32, Box::new(l.clone())));
                }
            }
        }
        let dims: BTreeMap<i64, usize> = basis.iter().map(|(&d, l)| (d, l.len())).collect();
        let mut actions = vec![BTreeMap::new(); ring.q_count()];
        for &d in &degrees {
            for i in 0..ring.q_count() as u8 {
                let target = d - q_degree(i);
                let rows = dims.get(&target).copied().unwrap_or(0);
                let mut mat = Mat2::zero(rows, dims[&d]);
                for (pi, p) in parts.iter().enumerate() {
                    let block = p.action(i, d);
                    let col0 = offsets[pi][&d];
                    let row0 = offsets[pi].get(&target).copied().unwrap_or(0);
                    for r in 0..block.rows() {
                        for c in block.row(r).ones() {
                            mat.set(row0 + r, col0 + c, true);
                        }
                    }
                }
                actions[i as usize].insert(d, mat);
            }
        }
        Ok(ModulePres {
            ring,
            window,
            complete,
            basis,
            actions,
        })
    }

    /// Stable JSON document: ring, window, per-degree basis labels,
    /// per-degree action matrices as row lists of column indices.
    pub fn to_json(&self) -> Value {
        let basis: Vec<Value> = self
            .basis
            .iter()
            .map(|(&d, labels)| {
                json!({
                    "degree": d,
                    "labels": labels.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        let actions: Vec<Value> = (0..self.ring.q_count())
            .map(|i| {
                let degrees: Vec<Value> = self.actions[i]
                    .iter()
                    .map(|(&d, m)| {
                        let rows: Vec<Vec<usize>> =
                            (0..m.rows()).map(|r| m.row(r).ones()).collect();
                        json!({"degree": d, "rows": m.rows(), "cols": m.cols(), "row_support": rows})
                    })
                    .collect();
                json!({"q": i, "matrices": degrees})
            })
            .collect();
        json!({
            "ring": self.ring.to_string(),
            "window": self.window,
            "complete": self.complete,
            "basis": basis,
            "actions": actions,
        })
    }
}

/// Weight of the even part of an `(A//E(1))_*` monomial: the weight of
/// `m` in the factorization `x = m z3^e` with `e` the z3-parity.
pub fn even_part_weight(x: &Monomial) -> i64 {
    x.weight() - 4 * (x.exp(3) % 2) as i64
}

/// The relabeling map `phi_i : (A//E(i))_* -> (A//E(i-1))_*`,
/// `z_k^(2^l) -> z_{k-1}^(2^l)` extended multiplicatively.
pub fn phi_element(i: u8, e: &Element) -> Element {
    assert!(i >= 1);
    assert_eq!(e.ambient, AlgebraId::AModE(i));
    Element::from_monomials(
        AlgebraId::AModE(i - 1),
        e.terms.iter().map(Monomial::shift_down),
    )
}

/// The inverse relabeling `f_{i,j}` into the weight component `M_i(j)`:
/// `u -> z1^a * shift(u)` with `a = 2j - wt(shift(u))`.
pub fn f_into_weight_component(j: i64, u: &Monomial) -> Monomial {
    let shifted = u.shift_up();
    let a = 2 * j - shifted.weight();
    assert!(a >= 0 && a % 2 == 0, "monomial outside N(j/2)");
    shifted.with_exp_delta(1, a)
}

/// A degree-preserving linear map between two presentations.
#[derive(Clone, Debug)]
pub struct ChainMap {
    mats: BTreeMap<i64, Mat2>,
}

impl ChainMap {
    pub fn zero() -> Self {
        ChainMap {
            mats: BTreeMap::new(),
        }
    }

    /// Build from a function sending each source basis label to a GF(2)
    /// combination of target labels (as indices).
    pub fn from_fn(
        source: &ModulePres,
        target: &ModulePres,
        mut f: impl FnMut(i64, usize, &Label) -> Vec<usize>,
    ) -> ChainMap {
        let mut mats = BTreeMap::new();
        for (&d, labels) in &source.basis {
            let mut mat = Mat2::zero(target.dim(d), labels.len());
            for (col, label) in labels.iter().enumerate() {
                for row in f(d, col, label) {
                    let cur = mat.get(row, col);
                    mat.set(row, col, !cur);
                }
            }
            mats.insert(d, mat);
        }
        ChainMap { mats }
    }

    pub fn from_mats(mats: BTreeMap<i64, Mat2>) -> ChainMap {
        ChainMap { mats }
    }

    pub fn mat(&self, source: &ModulePres, target: &ModulePres, d: i64) -> Mat2 {
        self.mats
            .get(&d)
            .cloned()
            .unwrap_or_else(|| Mat2::zero(target.dim(d), source.dim(d)))
    }

    pub fn apply(&self, source: &ModulePres, target: &ModulePres, d: i64, v: &BitVec) -> BitVec {
        self.mat(source, target, d).mul_vec(v)
    }

    /// Check commutation with every Q_i through degree `cap`.
    pub fn verify_linear(
        &self,
        source: &ModulePres,
        target: &ModulePres,
        cap: Option<i64>,
    ) -> Result<(), ComodError> {
        let cap = cap.unwrap_or(i64::MAX);
        for &d in source.basis.keys() {
            if d > cap {
                continue;
            }
            for i in 0..source.ring.q_count().min(target.ring.q_count()) as u8 {
                let lhs = target.action(i, d).mul(&self.mat(source, target, d));
                let rhs = self
                    .mat(source, target, d - q_degree(i))
                    .mul(&source.action(i, d));
                if lhs != rhs {
                    return Err(ComodError::NotClosed { q: i, degree: d });
                }
            }
        }
        Ok(())
    }
}

/// A finite sequence `0 -> M_0 -> M_1 -> ... -> M_n -> 0` tested for
/// degreewise exactness by rank bookkeeping.
pub struct ExactSeq {
    pub modules: Vec<ModulePres>,
    pub maps: Vec<ChainMap>,
}

#[derive(Debug, PartialEq, Eq)]
pub struct ExactnessFailure {
    pub node: usize,
    pub degree: i64,
    pub kernel_dim: usize,
    pub image_dim: usize,
}

impl fmt::Display for ExactnessFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "not exact at node {} degree {}: dim ker = {}, dim im = {}",
            self.node, self.degree, self.kernel_dim, self.image_dim
        )
    }
}

impl ExactSeq {
    /// Verify chain-map linearity, zero composites, and exactness at
    /// every node in every degree up to `cap`.
    pub fn check_exact(&self, cap: Option<i64>) -> Result<(), String> {
        let n = self.modules.len();
        assert_eq!(self.maps.len() + 1, n);
        for (k, map) in self.maps.iter().enumerate() {
            map.verify_linear(&self.modules[k], &self.modules[k + 1], cap)
                .map_err(|e| format!("map {k} is not equivariant: {e}"))?;
        }
        let cap = cap.unwrap_or(i64::MAX);
        let mut degrees: Vec<i64> = self
            .modules
            .iter()
            .flat_map(|m| m.degrees().collect::<Vec<_>>())
            .filter(|&d| d <= cap)
            .collect();
        degrees.sort_unstable();
        degrees.dedup();
        for &d in &degrees {
            for node in 0..n {
                let incoming_rank = if node == 0 {
                    0
                } else {
                    self.maps[node - 1]
                        .mat(&self.modules[node - 1], &self.modules[node], d)
                        .rank()
                };
                let kernel_dim = if node == n - 1 {
                    self.modules[node].dim(d)
                } else {
                    let m = self.maps[node].mat(&self.modules[node], &self.modules[node + 1], d);
                    m.cols() - m.rank()
                };
                if node + 1 < n {
                    // composite zero
                    if node >= 1 {
                        let f = self.maps[node - 1].mat(&self.modules[node - 1], &self.modules[node], d);
                        let g = self.maps[node].mat(&self.modules[node], &self.modules[node + 1], d);
                        if !g.mul(&f).is_zero() {
                            return Err(format!("composite through node {node} nonzero at degree {d}"));
                        }
                    }
                }
                if kernel_dim != incoming_rank {
                    return Err(ExactnessFailure {
                        node,
                        degree: d,
                        kernel_dim,
                        image_dim: incoming_rank,
                    }
                    .to_string());
                }
            }
        }
        Ok(())
    }
}

/// The mutually inverse isomorphisms `M_i(j) <-> Sigma^{2j} N_{i-1}(j/2)`
/// realized by the relabeling maps.
pub struct SuspensionIso {
    pub source: ModulePres,
    pub target: ModulePres,
    pub forward: ChainMap,
    pub inverse: ChainMap,
}

pub fn suspension_iso(i: u8, j: i64, ring: Ring) -> SuspensionIso {
    assert!(i >= 1);
    let source = ModulePres::weight_component(i, j, ring);
    let target = ModulePres::brown_gitler(i - 1, j / 2, ring).suspend(2 * j);
    let forward = ChainMap::from_fn(&source, &target, |d, _, label| {
        let m = label.mono().expect("monomial basis");
        let image = Label::Mono(m.shift_down());
        vec![target
            .label_index(d, &image)
            .unwrap_or_else(|| panic!("phi image {image} missing at degree {d}"))]
    });
    let inverse = ChainMap::from_fn(&target, &source, |d, _, label| {
        let u = label.mono().expect("monomial basis");
        let image = Label::Mono(f_into_weight_component(j, u));
        vec![source
            .label_index(d, &image)
            .unwrap_or_else(|| panic!("f image {image} missing at degree {d}"))]
    });
    SuspensionIso {
        source,
        target,
        forward,
        inverse,
    }
}

/// The short exact sequence of E(2)-modules
/// `0 -> Sigma^{4j} bu_j (x) bu_1 -> bu_{2j+1} -> Q^{2j-1} AE1 -> 0`.
pub fn odd_sequence(j: i64) -> ExactSeq {
    assert!(j >= 1);
    let ring = Ring::E2;
    let bu_j = ModulePres::brown_gitler(1, j, ring);
    let bu_1 = ModulePres::brown_gitler(1, 1, ring);
    let a = bu_j.tensor(&bu_1, None).unwrap().suspend(4 * j);
    let b = ModulePres::brown_gitler(1, 2 * j + 1, ring);
    let c = ModulePres::filtration_quotient(2 * j - 1, ring, None);

    let incl = ChainMap::from_fn(&a, &b, |d, _, label| {
        let Label::Tensor(u, w) = label else {
            panic!("tensor basis expected")
        };
        let u = u.mono().expect("monomial");
        let w = w.mono().expect("monomial");
        let image = Label::Mono(f_into_weight_component(2 * j, u).mul(w));
        vec![b
            .label_index(d, &image)
            .unwrap_or_else(|| panic!("inclusion image {image} missing at degree {d}"))]
    });
    let proj = ChainMap::from_fn(&b, &c, |d, _, label| {
        let m = label.mono().expect("monomial");
        if even_part_weight(m) <= 2 * (2 * j - 1) {
            vec![c.label_index(d, label).expect("section monomial")]
        } else {
            vec![]
        }
    });
    ExactSeq {
        modules: vec![a, b, c],
        maps: vec![incl, proj],
    }
}

/// The four-term exact sequence of E(2)-modules
/// `0 -> Sigma^{4j} bu_j -> bu_{2j} -> Q^{2j-1} AE1 -> Sigma^{4j+5} bu_{j-1} -> 0`.
pub fn even_sequence(j: i64) -> ExactSeq {
    assert!(j >= 1);
    let ring = Ring::E2;
    let a = ModulePres::brown_gitler(1, j, ring).suspend(4 * j);
    let b = ModulePres::brown_gitler(1, 2 * j, ring);
    let c = ModulePres::filtration_quotient(2 * j - 1, ring, None);
    let d_mod = ModulePres::brown_gitler(1, j - 1, ring).suspend(4 * j + 5);

    let incl = ChainMap::from_fn(&a, &b, |d, _, label| {
        let u = label.mono().expect("monomial");
        let image = Label::Mono(f_into_weight_component(2 * j, u));
        vec![b
            .label_index(d, &image)
            .unwrap_or_else(|| panic!("inclusion image {image} missing at degree {d}"))]
    });
    let proj = ChainMap::from_fn(&b, &c, |d, _, label| {
        let m = label.mono().expect("monomial");
        if even_part_weight(m) <= 2 * (2 * j - 1) {
            vec![c.label_index(d, label).expect("section monomial")]
        } else {
            vec![]
        }
    });
    let bockstein = ChainMap::from_fn(&c, &d_mod, |d, _, label| {
        let x = label.mono().expect("monomial");
        if x.exp(3) % 2 == 1 && even_part_weight(x) == 4 * j - 2 {
            let m = x.with_exp_delta(3, -1);
            let image = Label::Mono(m.shift_down());
            vec![d_mod
                .label_index(d, &image)
                .unwrap_or_else(|| panic!("cokernel image {image} missing at degree {d}"))]
        } else {
            vec![]
        }
    });
    ExactSeq {
        modules: vec![a, b, c, d_mod],
        maps: vec![incl, proj, bockstein],
    }
}

/// Splitting of a presentation along the action-closure of a seeded
/// span: the submodule on the echelon basis, the quotient on the
/// complementary (low-ordered) monomial section, and the two maps.
pub struct Split {
    pub sub: ModulePres,
    pub quot: ModulePres,
    pub incl: ChainMap,
    pub proj: ChainMap,
}

/// Close `seeds` under the listed Q-actions inside `m` and present the
/// resulting split over `out_ring` (which must act through the listed
/// indices). Sections keep the lower-ordered basis labels of `m`.
pub fn closure_split(
    m: &ModulePres,
    seeds: Vec<(i64, BitVec)>,
    action_indices: &[u8],
    out_ring: Ring,
) -> Split {
    let mut spans: BTreeMap<i64, Subspace> = BTreeMap::new();
    let mut queue: Vec<(i64, BitVec)> = seeds;
    while let Some((d, v)) = queue.pop() {
        let span = spans
            .entry(d)
            .or_insert_with(|| Subspace::new(m.dim(d), PivotRule::High));
        if span.insert(&v).is_none() {
            continue;
        }
        for &i in action_indices {
            let image = m.action(i, d).mul_vec(&v);
            if !image.is_zero() {
                queue.push((d - q_degree(i), image));
            }
        }
    }
    // Submodule presentation on the canonical echelon bases.
    let mut sub_basis: BTreeMap<i64, Vec<Label>> = BTreeMap::new();
    let mut sub_vectors: BTreeMap<i64, Vec<BitVec>> = BTreeMap::new();
    for (&d, span) in &spans {
        if span.dim() == 0 {
            continue;
        }
        let vecs = span.basis();
        let labels = vecs
            .iter()
            .map(|v| {
                let parts: Vec<Label> = v.ones().iter().map(|&c| m.labels(d)[c].clone()).collect();
                if parts.len() == 1 {
                    parts.into_iter().next().unwrap()
                } else {
                    Label::Combo(parts)
                }
            })
            .collect();
        sub_basis.insert(d, labels);
        sub_vectors.insert(d, vecs);
    }
    let express_in_sub = |d: i64, w: &BitVec| -> BitVec {
        let vecs = sub_vectors.get(&d).map(Vec::as_slice).unwrap_or(&[]);
        let pivots: Vec<usize> = spans.get(&d).map(Subspace::pivots).unwrap_or_default();
        let mut coords = BitVec::zeros(vecs.len());
        let mut check = w.clone();
        for (r, &p) in pivots.iter().enumerate() {
            if w.get(p) {
                coords.set(r, true);
                check.xor_assign(&vecs[r]);
            }
        }
        assert!(check.is_zero(), "vector not in closure span");
        coords
    };
    let mut sub_actions = vec![BTreeMap::new(); out_ring.q_count()];
    for (&d, vecs) in &sub_vectors {
        for i in 0..out_ring.q_count() as u8 {
            let target = d - q_degree(i);
            let rows = sub_vectors.get(&target).map_or(0, Vec::len);
            let mut mat = Mat2::zero(rows, vecs.len());
            let amb = m.action(i, d);
            for (col, v) in vecs.iter().enumerate() {
                let image = amb.mul_vec(v);
                if image.is_zero() {
                    continue;
                }
                let coords = express_in_sub(target, &image);
                for r in coords.ones() {
                    mat.set(r, col, true);
                }
            }
            sub_actions[i as usize].insert(d, mat);
        }
    }
    let sub = ModulePres {
        ring: out_ring,
        window: m.window,
        complete: m.complete,
        basis: sub_basis,
        actions: sub_actions,
    };

    // Quotient on the complementary section (non-pivot positions).
    let section: BTreeMap<i64, Vec<usize>> = m
        .basis
        .iter()
        .map(|(&d, labels)| {
            let pivots = spans.get(&d).map(Subspace::pivots).unwrap_or_default();
            let sec: Vec<usize> = (0..labels.len()).filter(|c| !pivots.contains(c)).collect();
            (d, sec)
        })
        .collect();
    let quot_basis: BTreeMap<i64, Vec<Label>> = section
        .iter()
        .filter(|(_, sec)| !sec.is_empty())
        .map(|(&d, sec)| (d, sec.iter().map(|&c| m.labels(d)[c].clone()).collect()))
        .collect();
    let reduce_to_section = |d: i64, v: &BitVec| -> BitVec {
        let Some(sec) = section.get(&d) else {
            return BitVec::zeros(0);
        };
        let mut w = v.clone();
        if let Some(span) = spans.get(&d) {
            span.reduce(&mut w);
        }
        let mut out = BitVec::zeros(sec.len());
        for (r, &c) in sec.iter().enumerate() {
            if w.get(c) {
                out.set(r, true);
            }
        }
        out
    };
    let mut quot_actions = vec![BTreeMap::new(); out_ring.q_count()];
    for (&d, sec) in &section {
        if sec.is_empty() {
            continue;
        }
        for i in 0..out_ring.q_count() as u8 {
            let target = d - q_degree(i);
            let rows = quot_basis.get(&target).map_or(0, Vec::len);
            let mut mat = Mat2::zero(rows, sec.len());
            let amb = m.action(i, d);
            for (col, &c) in sec.iter().enumerate() {
                let image = amb.mul_vec(&BitVec::unit(m.dim(d), c));
                let coords = reduce_to_section(target, &image);
                for r in coords.ones() {
                    mat.set(r, col, true);
                }
            }
            quot_actions[i as usize].insert(d, mat);
        }
    }
    let quot = ModulePres {
        ring: out_ring,
        window: m.window,
        complete: m.complete,
        basis: quot_basis,
        actions: quot_actions,
    };

    let incl_mats: BTreeMap<i64, Mat2> = sub_vectors
        .iter()
        .map(|(&d, vecs)| {
            let mut mat = Mat2::zero(m.dim(d), vecs.len());
            for (col, v) in vecs.iter().enumerate() {
                for r in v.ones() {
                    mat.set(r, col, true);
                }
            }
            (d, mat)
        })
        .collect();
    let proj_mats: BTreeMap<i64, Mat2> = section
        .iter()
        .filter(|(_, sec)| !sec.is_empty())
        .map(|(&d, sec)| {
            let mut mat = Mat2::zero(sec.len(), m.dim(d));
            for c in 0..m.dim(d) {
                let coords = reduce_to_section(d, &BitVec::unit(m.dim(d), c));
                for r in coords.ones() {
                    mat.set(r, c, true);
                }
            }
            let _ = sec;
            (d, mat)
        })
        .collect();

    Split {
        sub,
        quot,
        incl: ChainMap::from_mats(incl_mats),
        proj: ChainMap::from_mats(proj_mats),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milnor::Monomial;

    fn mono(pairs: &[(usize, u32)]) -> Monomial {
        Monomial::from_pairs(pairs)
    }

    #[test]
    fn ambient_low_window() {
        let m = ModulePres::ambient(2, 2, Ring::E2);
        assert_eq!(m.dim(0), 1);
        assert_eq!(m.dim(2), 1);
        assert_eq!(m.total_dim(), 2);
        for i in 0..3 {
            assert!(m.action(i, 2).is_zero());
        }
    }

    #[test]
    fn ambient_z4_actions() {
        let m = ModulePres::ambient(2, 15, Ring::E2);
        let (d, col) = m.monomial_index(&Monomial::gen(4)).unwrap();
        assert_eq!(d, 15);
        let q0 = m.action(0, 15);
        let image: Vec<usize> = (0..q0.rows()).filter(|&r| q0.get(r, col)).collect();
        assert_eq!(image.len(), 1);
        assert_eq!(
            m.labels(14)[image[0]],
            Label::Mono(mono(&[(3, 2)])),
            "Q0 z4 = z3^2"
        );
        let q1 = m.action(1, 15);
        let image: Vec<usize> = (0..q1.rows()).filter(|&r| q1.get(r, col)).collect();
        assert_eq!(m.labels(12)[image[0]], Label::Mono(mono(&[(2, 4)])));
        let q2 = m.action(2, 15);
        let image: Vec<usize> = (0..q2.rows()).filter(|&r| q2.get(r, col)).collect();
        assert_eq!(m.labels(8)[image[0]], Label::Mono(mono(&[(1, 8)])));
    }

    #[test]
    fn ambient_e1_has_q2_z3_unit() {
        let m = ModulePres::ambient(1, 7, Ring::E2);
        let (_, col) = m.monomial_index(&Monomial::gen(3)).unwrap();
        let q2 = m.action(2, 7);
        assert!(q2.get(0, col), "Q2 z3 = 1");
    }

    #[test]
    fn brown_gitler_small() {
        let bu1 = ModulePres::brown_gitler(1, 1, Ring::E2);
        assert_eq!(bu1.total_dim(), 2);
        let bu2 = ModulePres::brown_gitler(1, 2, Ring::E2);
        assert_eq!(bu2.total_dim(), 5);
        let hz0 = ModulePres::brown_gitler(0, 0, Ring::E1);
        assert_eq!(hz0.total_dim(), 1);
    }

    #[test]
    fn weight_component_examples() {
        let m24 = ModulePres::weight_component(2, 4, Ring::E2);
        assert_eq!(m24.total_dim(), 5);
        let m20 = ModulePres::weight_component(2, 0, Ring::E2);
        assert_eq!(m20.total_dim(), 1);
        let m21 = ModulePres::weight_component(2, 1, Ring::E2);
        assert_eq!(m21.total_dim(), 1);
        assert_eq!(m21.labels(2)[0], Label::Mono(mono(&[(1, 2)])));
    }

    #[test]
    fn phi_examples() {
        let amb2 = AlgebraId::AModE(2);
        let e = Element::from_monomial(amb2, mono(&[(4, 1), (5, 2)]));
        let got = phi_element(2, &e);
        assert_eq!(
            got,
            Element::from_monomial(AlgebraId::AModE(1), mono(&[(3, 1), (4, 2)]))
        );
        let z1sq = Element::from_monomial(amb2, mono(&[(1, 2)]));
        assert_eq!(
            phi_element(2, &z1sq),
            Element::from_monomial(AlgebraId::AModE(1), Monomial::one())
        );
        let e1 = Element::from_monomial(AlgebraId::AModE(1), mono(&[(2, 2), (3, 1)]));
        assert_eq!(
            phi_element(1, &e1),
            Element::from_monomial(AlgebraId::AModE(0), mono(&[(1, 2), (2, 1)]))
        );
    }

    #[test]
    fn suspension_iso_examples() {
        // M_2(4) ~ Sigma^8 bu_2: z4 -> z3, z1^8 -> 1.
        let iso = suspension_iso(2, 4, Ring::E2);
        let (d, col) = iso.source.monomial_index(&Monomial::gen(4)).unwrap();
        let f = iso.forward.mat(&iso.source, &iso.target, d);
        let rows: Vec<usize> = (0..f.rows()).filter(|&r| f.get(r, col)).collect();
        assert_eq!(iso.target.labels(15)[rows[0]], Label::Mono(Monomial::gen(3)));
        let (d8, col8) = iso.source.monomial_index(&mono(&[(1, 8)])).unwrap();
        let f8 = iso.forward.mat(&iso.source, &iso.target, d8);
        let rows8: Vec<usize> = (0..f8.rows()).filter(|&r| f8.get(r, col8)).collect();
        assert_eq!(iso.target.labels(8)[rows8[0]], Label::Mono(Monomial::one()));

        // M_2(2) = {z1^4, z2^2} -> Sigma^4 bu_1.
        let iso2 = suspension_iso(2, 2, Ring::E2);
        assert_eq!(iso2.source.total_dim(), 2);
        assert_eq!(iso2.target.total_dim(), 2);

        // forward and inverse are mutually inverse isomorphisms
        for iso in [iso, iso2] {
            for d in iso.source.degrees().collect::<Vec<_>>() {
                let f = iso.forward.mat(&iso.source, &iso.target, d);
                let g = iso.inverse.mat(&iso.target, &iso.source, d);
                assert_eq!(g.mul(&f), Mat2::identity(iso.source.dim(d)));
                assert_eq!(f.mul(&g), Mat2::identity(iso.target.dim(d)));
            }
            iso.forward
                .verify_linear(&iso.source, &iso.target, None)
                .unwrap();
            iso.inverse
                .verify_linear(&iso.target, &iso.source, None)
                .unwrap();
        }
    }

    #[test]
    fn filtration_quotient_j1() {
        let q1 = ModulePres::filtration_quotient(1, Ring::E2, None);
        assert_eq!(q1.total_dim(), 4);
        let degrees: Vec<i64> = q1.degrees().collect();
        assert_eq!(degrees, vec![0, 2, 7, 9]);
    }

    #[test]
    fn filtration_membership() {
        // z3 in F^0 but not F^1; z3^2 in F^4.
        assert_eq!(even_part_weight(&Monomial::gen(3)), 0);
        assert_eq!(even_part_weight(&mono(&[(3, 2)])), 8);
        // odd z3-power monomials in F^j have weight >= 2j + 4
        let x = mono(&[(1, 2), (3, 1)]);
        let j = even_part_weight(&x) / 2;
        assert!(x.weight() >= 2 * j + 4);
    }

    #[test]
    fn tensor_bu1_squared() {
        let bu1 = ModulePres::brown_gitler(1, 1, Ring::E2);
        let t = bu1.tensor(&bu1, None).unwrap();
        let dims: Vec<usize> = (0..=4).map(|d| t.dim(d)).collect();
        assert_eq!(dims, vec![1, 0, 2, 0, 1]);
        assert!(t.complete);
    }

    #[test]
    fn suspend_point() {
        let s = ModulePres::trivial(Ring::E2).suspend(17);
        assert_eq!(s.dim(17), 1);
        assert_eq!(s.total_dim(), 1);
    }

    #[test]
    fn tensor_window_overflow() {
        let a = ModulePres::ambient(2, 10, Ring::E2);
        let bu1 = ModulePres::brown_gitler(1, 1, Ring::E2);
        assert!(matches!(
            a.tensor(&bu1, Some(40)),
            Err(ComodError::WindowOverflow { .. })
        ));
    }

    #[test]
    fn direct_sum_blocks() {
        let a = ModulePres::f2_at(Ring::E2, 0);
        let b = ModulePres::f2_at(Ring::E2, 2);
        let s = ModulePres::direct_sum(&[&a, &b]).unwrap();
        assert_eq!(s.total_dim(), 2);
        assert_eq!(s.dim(0), 1);
        assert_eq!(s.dim(2), 1);
    }

    #[test]
    fn sequences_exact_small() {
        even_sequence(1).check_exact(None).unwrap();
        odd_sequence(1).check_exact(None).unwrap();
    }

    #[test]
    fn even_sequence_shape_j1() {
        let seq = even_sequence(1);
        // 0 -> Sigma^4 bu_1 -> bu_2 -> Q^1 AE1 -> Sigma^9 bu_0 -> 0
        assert_eq!(seq.modules[0].total_dim(), 2);
        assert_eq!(seq.modules[1].total_dim(), 5);
        assert_eq!(seq.modules[2].total_dim(), 4);
        assert_eq!(seq.modules[3].total_dim(), 1);
        assert_eq!(seq.modules[3].degrees().next(), Some(9));
    }

    #[test]
    fn global_weight_decomposition() {
        // dim_d ambient(2) = sum_j dim_d Sigma^{2j} bu_{j/2} for d <= D
        let cap = 26;
        let amb = ModulePres::ambient(2, cap, Ring::E2);
        for d in 0..=cap {
            let mut total = 0;
            for j in 0..=cap {
                let bu = ModulePres::brown_gitler(1, j / 2, Ring::E2);
                total += bu.dim(d - 2 * j);
            }
            assert_eq!(amb.dim(d), total, "degree {d}");
        }
    }

    #[test]
    fn closure_split_dimensions() {
        // Split ambient(2) along the closure of z4: complementary
        // dimensions per degree.
        let amb = ModulePres::ambient(2, 16, Ring::E2);
        let (d, idx) = amb.monomial_index(&Monomial::gen(4)).unwrap();
        let seed = BitVec::unit(amb.dim(d), idx);
        let split = closure_split(&amb, vec![(d, seed)], &[0, 1, 2], Ring::E2);
        for deg in 0..=16 {
            assert_eq!(split.sub.dim(deg) + split.quot.dim(deg), amb.dim(deg));
        }
        split.incl.verify_linear(&split.sub, &amb, None).unwrap();
        split.proj.verify_linear(&amb, &split.quot, None).unwrap();
        split.sub.verify().unwrap();
        split.quot.verify().unwrap();
        // z4's closure contains z4, z3^2, z2^4, z1^8 and nothing else
        assert_eq!(split.sub.total_dim(), 4);
    }
}
