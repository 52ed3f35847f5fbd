//! Graded and bigraded Betti numbers via Koszul homology, and invariants from shifts.
//!
//! `Tor_p(k, S/J)_q` is the homology of `∧^p V ⊗ (S/J)_{q − deg}` with `(S/J)_q` spanned by
//! standard monomials of a Gröbner basis. A table is certified complete when computed up
//! to the degree of the lcm of the initial ideal's generators: the Taylor resolution of
//! `in(J)` lives below that degree and Betti numbers only drop under degeneration.

use crate::arith::FieldElement;
use crate::error::{Error, Result};
use crate::groebner::{GroebnerBasis, Ideal};
use crate::hilbert::{HilbertSeries, Laurent};
use crate::linalg::SparseEchelon;
use crate::poly::{monomials_of_degree, Monomial, MultiDegree, Polynomial, Ring, RingSpec};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::sync::{Arc, Mutex};

/// Whether a table resolves an ideal or its quotient ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModuleKind {
    Ideal,
    Quotient,
}

/// Betti numbers β_{p, q} with the metadata needed to trust them.
#[derive(Clone, Debug)]
pub struct BettiTable {
    pub ring: Ring,
    pub kind: ModuleKind,
    pub label: String,
    /// (p, degree) → rank, positive entries only.
    pub entries: BTreeMap<(usize, MultiDegree), u64>,
    /// Degrees computed: all q ≤ computed_to componentwise.
    pub computed_to: MultiDegree,
    /// Degree box beyond which all Betti numbers provably vanish.
    pub certified_bound: MultiDegree,
}

impl BettiTable {
    pub fn truncated(&self) -> bool {
        !self.certified_bound.le(self.computed_to)
    }

    pub fn get(&self, p: usize, deg: MultiDegree) -> u64 {
        self.entries.get(&(p, deg)).copied().unwrap_or(0)
    }

    /// Graded convenience accessor (d2 = 0).
    pub fn beta(&self, p: usize, q: i64) -> u64 {
        self.get(p, MultiDegree::new(q, 0))
    }

    pub fn max_p(&self) -> Option<usize> {
        self.entries.keys().map(|k| k.0).max()
    }

    /// Shifts at homological index p, with multiplicity.
    pub fn shifts(&self, p: usize) -> Vec<(MultiDegree, u64)> {
        self.entries.iter().filter(|(k, _)| k.0 == p).map(|(k, v)| (k.1, *v)).collect()
    }

    /// Alternating sum Σ (−1)^p β_{p,q} s^q t^..., the series numerator when complete.
    pub fn euler_numerator(&self) -> Laurent {
        let mut l = Laurent::zero();
        for (&(p, d), &b) in &self.entries {
            let sign: i64 = if p % 2 == 0 { 1 } else { -1 };
            l.add_term((sign * b as i64).into(), d.d1, d.d2);
        }
        if self.kind == ModuleKind::Ideal {
            // β_p(I) = β_{p+1}(S/I): the quotient numerator is 1 − (this)
            l = Laurent::one().sub(&l);
        }
        l
    }

    /// Euler check against the quotient's series numerator, degree by degree inside the computed box.
    pub fn euler_check(&self, quotient_series: &HilbertSeries) -> bool {
        let mine = self.euler_numerator();
        let inside = |a: i64, b: i64| a <= self.computed_to.d1 && b <= self.computed_to.d2;
        let keys: BTreeSet<(i64, i64)> = mine.0.keys().chain(quotient_series.num.0.keys()).copied().filter(|k| inside(k.0, k.1)).collect();
        keys.into_iter().all(|k| mine.0.get(&k) == quotient_series.num.0.get(&k))
    }

    /// Regrade (i, j) ↦ (i − d j, j); turns S = k[X;Y] with deg Y = (d,1) into the standard bigrading.
    pub fn phi_regrade(&self, d: i64) -> Result<BettiTable> {
        let degrees: Vec<MultiDegree> = self.ring.degrees.iter().map(|g| MultiDegree::new(g.d1 - d * g.d2, g.d2)).collect();
        let ring = RingSpec::new(self.ring.field, self.ring.vars.clone(), degrees, self.ring.order.clone())?;
        let map = |g: MultiDegree| MultiDegree::new(g.d1 - d * g.d2, g.d2);
        Ok(BettiTable {
            ring,
            kind: self.kind,
            label: format!("{} (regraded by d={d})", self.label),
            entries: self.entries.iter().map(|(&(p, g), &v)| ((p, map(g)), v)).collect(),
            computed_to: map(self.computed_to),
            certified_bound: map(self.certified_bound),
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "module": self.label,
            "kind": match self.kind { ModuleKind::Ideal => "ideal", ModuleKind::Quotient => "quotient" },
            "rows": self.entries.iter().map(|(&(p, d), &r)| json!({"p": p, "degree": [d.d1, d.d2], "rank": r})).collect::<Vec<_>>(),
            "computed_to": [self.computed_to.d1, self.computed_to.d2],
            "certified_bound": [self.certified_bound.d1, self.certified_bound.d2],
            "truncated": self.truncated(),
        })
    }

    /// Betti diagram: rows q − p, columns p (graded), or a shift list (bigraded).
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}{}", self.label, if self.truncated() { "  [truncated]" } else { "" });
        if self.ring.is_bigraded() {
            for p in 0..=self.max_p().unwrap_or(0) {
                let sh: Vec<String> = self.shifts(p).iter().map(|(d, m)| format!("({},{})^{}", -d.d1, -d.d2, m)).collect();
                let _ = writeln!(s, "  D_{p}: {}", sh.join(" "));
            }
            return s;
        }
        let maxp = self.max_p().unwrap_or(0);
        let rows: BTreeSet<i64> = self.entries.keys().map(|&(p, d)| d.d1 - p as i64).collect();
        let _ = write!(s, "{:>6}", "");
        for p in 0..=maxp {
            let _ = write!(s, "{p:>6}");
        }
        let _ = writeln!(s);
        for r in rows {
            let _ = write!(s, "{:>5}:", r);
            for p in 0..=maxp {
                match self.beta(p, r + p as i64) {
                    0 => {
                        let _ = write!(s, "{:>6}", ".");
                    }
                    b => {
                        let _ = write!(s, "{b:>6}");
                    }
                }
            }
            let _ = writeln!(s);
        }
        s
    }
}

/// Standard-monomial model of S/J for Koszul computations.
struct QuotientModel {
    ring: Ring,
    gb: Option<Arc<GroebnerBasis>>,
    lead: Vec<Monomial>,
    bases: HashMap<MultiDegree, (Vec<Monomial>, HashMap<Monomial, usize>)>,
    memo: Mutex<HashMap<Monomial, Arc<Vec<(usize, FieldElement)>>>>,
}

impl QuotientModel {
    fn new(j: &Ideal, box_to: MultiDegree) -> Self {
        let ring = j.ring.clone();
        let gb = if j.is_zero() { None } else { Some(j.gb()) };
        let lead = gb.as_ref().map(|g| g.leading.clone()).unwrap_or_default();
        let degs: Vec<MultiDegree> = (0..=box_to.d1).flat_map(|a| (0..=box_to.d2).map(move |b| MultiDegree::new(a, b))).collect();
        let bases = degs
            .par_iter()
            .map(|&d| {
                let b: Vec<Monomial> =
                    monomials_of_degree(&ring, d).into_iter().filter(|m| !lead.iter().any(|l| l.divides(m))).collect();
                let idx = b.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
                (d, (b, idx))
            })
            .collect();
        QuotientModel { ring, gb, lead, bases, memo: Mutex::new(HashMap::new()) }
    }

    fn basis(&self, d: MultiDegree) -> &[Monomial] {
        self.bases.get(&d).map(|b| b.0.as_slice()).unwrap_or(&[])
    }

    /// Normal form of a monomial as a sparse vector over the standard basis of its degree.
    fn nf(&self, m: &Monomial) -> Arc<Vec<(usize, FieldElement)>> {
        if let Some(v) = self.memo.lock().unwrap().get(m) {
            return v.clone();
        }
        let d = self.ring.monomial_degree(m);
        let (_, idx) = &self.bases[&d];
        let v = if let Some(&i) = idx.get(m) {
            vec![(i, self.ring.field.one())]
        } else if self.lead.iter().any(|l| l.divides(m)) {
            let p = Polynomial::monomial(&self.ring, self.ring.field.one(), m.clone());
            let r = self.gb.as_ref().unwrap().normal_form(&p).unwrap();
            r.terms.into_iter().map(|t| (idx[&t.mono], t.coeff)).collect()
        } else {
            unreachable!("monomial outside the degree box")
        };
        let v = Arc::new(v);
        self.memo.lock().unwrap().insert(m.clone(), v.clone());
        v
    }
}

/// Degree of the lcm of the monomials (zero degree for an empty list).
fn lcm_degree(ring: &RingSpec, ms: &[Monomial]) -> MultiDegree {
    let l = ms.iter().fold(Monomial::one(ring.nvars()), |acc, m| acc.lcm(m));
    ring.monomial_degree(&l)
}

/// Koszul Betti numbers of S/J in every degree q ≤ `to`.
fn koszul_betti(model: &QuotientModel, to: MultiDegree) -> BTreeMap<(usize, MultiDegree), u64> {
    let ring = &model.ring;
    let n = ring.nvars();
    let subsets: Vec<(u32, MultiDegree, usize)> = (0u32..(1 << n))
        .map(|s| {
            let mut d = MultiDegree::default();
            for i in 0..n {
                if s >> i & 1 == 1 {
                    d = d.add(ring.degrees[i]);
                }
            }
            (s, d, s.count_ones() as usize)
        })
        .collect();
    let degs: Vec<MultiDegree> = (0..=to.d1).flat_map(|a| (0..=to.d2).map(move |b| MultiDegree::new(a, b))).collect();
    let results: Vec<Vec<((usize, MultiDegree), u64)>> = degs
        .par_iter()
        .map(|&q| {
            // dims and ranks of ∂_p : K_{p,q} → K_{p−1,q}
            let mut dims = vec![0usize; n + 2];
            let mut ranks = vec![0usize; n + 2];
            for &(_, ds, p) in &subsets {
                let rem = q.sub(ds);
                if rem.d1 < 0 || rem.d2 < 0 {
                    continue;
                }
                dims[p] += model.basis(rem).len();
            }
            for p in 1..=n {
                if dims[p] == 0 || dims[p - 1] == 0 {
                    continue;
                }
                let mut ech: SparseEchelon<(u32, usize)> = SparseEchelon::new();
                for &(s, ds, sp) in &subsets {
                    if sp != p {
                        continue;
                    }
                    let rem = q.sub(ds);
                    if rem.d1 < 0 || rem.d2 < 0 {
                        continue;
                    }
                    for m in model.basis(rem) {
                        let mut row: Vec<((u32, usize), FieldElement)> = Vec::new();
                        let mut k = 0;
                        for i in 0..n {
                            if s >> i & 1 == 0 {
                                continue;
                            }
                            let sign = if k % 2 == 0 { ring.field.one() } else { ring.field.one().neg() };
                            k += 1;
                            let xm = m.mul(&Monomial::var(n, i, 1));
                            let face = s & !(1 << i);
                            for (idx, c) in model.nf(&xm).iter() {
                                row.push(((face, *idx), c.mul(&sign)));
                            }
                        }
                        ech.insert(row);
                    }
                }
                ranks[p] = ech.rank();
            }
            (0..=n)
                .filter_map(|p| {
                    let b = dims[p] - ranks[p] - ranks[p + 1];
                    (b > 0).then_some(((p, q), b as u64))
                })
                .collect()
        })
        .collect();
    results.into_iter().flatten().collect()
}

/// Betti table of S/J or J; `cap` bounds the degrees computed (None: up to the certified bound).
pub fn betti_table(j: &Ideal, kind: ModuleKind, cap: Option<MultiDegree>, label: &str) -> Result<BettiTable> {
    if !j.is_homogeneous() {
        return Err(Error::Inhomogeneous);
    }
    let ring = j.ring.clone();
    if kind == ModuleKind::Ideal && j.is_zero() {
        return Ok(BettiTable {
            ring,
            kind,
            label: label.into(),
            entries: BTreeMap::new(),
            computed_to: MultiDegree::default(),
            certified_bound: MultiDegree::default(),
        });
    }
    let lead = if j.is_zero() { vec![] } else { j.gb().leading.clone() };
    if lead.iter().any(|m| m.is_one()) {
        // S/J = 0; J = S is free of rank one
        let mut entries = BTreeMap::new();
        if kind == ModuleKind::Ideal {
            entries.insert((0, MultiDegree::default()), 1);
        }
        return Ok(BettiTable { ring, kind, label: label.into(), entries, computed_to: MultiDegree::default(), certified_bound: MultiDegree::default() });
    }
    let bound = lcm_degree(&ring, &lead);
    let to = match cap {
        Some(c) => MultiDegree::new(c.d1.min(bound.d1), c.d2.min(bound.d2)),
        None => bound,
    };
    let model = QuotientModel::new(j, to);
    let quotient = koszul_betti(&model, to);
    let entries = match kind {
        ModuleKind::Quotient => quotient,
        ModuleKind::Ideal => quotient.into_iter().filter(|((p, _), _)| *p > 0).map(|((p, d), v)| ((p - 1, d), v)).collect(),
    };
    Ok(BettiTable { ring, kind, label: label.into(), entries, computed_to: to, certified_bound: bound })
}

/// Singly graded table with an optional degree cap.
pub fn graded_betti_table(j: &Ideal, kind: ModuleKind, degree_cap: Option<i64>) -> Result<BettiTable> {
    if j.ring.is_bigraded() {
        return Err(Error::InvalidInput("ring is bigraded; use bigraded_betti_table".into()));
    }
    let cap = degree_cap.map(|c| MultiDegree::new(c, 0));
    if let Some(c) = degree_cap {
        let maxgen = j.generator_degrees()?.iter().map(|d| d.d1).max().unwrap_or(0);
        if c < maxgen {
            return Err(Error::InvalidInput(format!("degree cap {c} below the maximal generator degree {maxgen}")));
        }
    }
    betti_table(j, kind, cap, &format!("{kind:?}"))
}

/// Bigraded table of the Rees algebra S/K over S.
pub fn bigraded_betti_table(p: &crate::rees::ReesPresentation, window: Option<MultiDegree>) -> Result<BettiTable> {
    betti_table(&p.k, ModuleKind::Quotient, window, "Rees algebra")
}

/// a*, reg and projective dimension read off the shifts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantsReport {
    /// t_p per component: max degree at homological index p.
    pub t: Vec<(usize, MultiDegree)>,
    /// a*^k = max_p t_p^k + a^k(S), per component.
    pub a_star: (i64, i64),
    /// reg^k = max_p (t_p^k − p), per component.
    pub reg: (i64, i64),
    pub proj_dim: usize,
    /// a^k(S) = −Σ deg_k of the variables.
    pub a_ring: (i64, i64),
    pub bigraded: bool,
}

impl InvariantsReport {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "t_p": self.t.iter().map(|(p, d)| if self.bigraded { json!({"p": p, "t": [d.d1, d.d2]}) } else { json!({"p": p, "t": d.d1}) }).collect::<Vec<_>>(),
            "proj_dim": self.proj_dim,
            "criterion": "a*(M) = t*(M) + a(S); reg(M) = max_p (t_p - p)",
        });
        if self.bigraded {
            v["a_star"] = json!([self.a_star.0, self.a_star.1]);
            v["reg"] = json!([self.reg.0, self.reg.1]);
            v["a_ring"] = json!([self.a_ring.0, self.a_ring.1]);
        } else {
            v["a_star"] = json!(self.a_star.0);
            v["reg"] = json!(self.reg.0);
            v["a_ring"] = json!(self.a_ring.0);
        }
        v
    }
}

pub fn invariants_from_shifts(b: &BettiTable) -> Result<InvariantsReport> {
    if b.truncated() {
        return Err(Error::Truncated(format!("{} computed to {} but certified only at {}", b.label, b.computed_to, b.certified_bound)));
    }
    let maxp = b.max_p().ok_or_else(|| Error::InvalidInput("zero module has no invariants".into()))?;
    let mut t = Vec::new();
    for p in 0..=maxp {
        let sh = b.shifts(p);
        if sh.is_empty() {
            continue;
        }
        let t1 = sh.iter().map(|(d, _)| d.d1).max().unwrap();
        let t2 = sh.iter().map(|(d, _)| d.d2).max().unwrap();
        t.push((p, MultiDegree::new(t1, t2)));
    }
    let a_ring = (
        -b.ring.degrees.iter().map(|d| d.d1).sum::<i64>(),
        -b.ring.degrees.iter().map(|d| d.d2).sum::<i64>(),
    );
    let a_star = (
        t.iter().map(|(_, d)| d.d1).max().unwrap() + a_ring.0,
        t.iter().map(|(_, d)| d.d2).max().unwrap() + a_ring.1,
    );
    let reg = (
        t.iter().map(|(p, d)| d.d1 - *p as i64).max().unwrap(),
        t.iter().map(|(p, d)| d.d2 - *p as i64).max().unwrap(),
    );
    Ok(InvariantsReport { t, a_star, reg, proj_dim: maxp, a_ring, bigraded: b.ring.is_bigraded() })
}

pub fn proj_dim(b: &BettiTable) -> Result<usize> {
    if b.truncated() {
        return Err(Error::Truncated(b.label.clone()));
    }
    Ok(b.max_p().unwrap_or(0))
}

/// Lexicographically minimal shift at each homological index (used to check monotonicity).
pub fn minimal_shifts(b: &BettiTable) -> Vec<(usize, MultiDegree)> {
    (0..=b.max_p().unwrap_or(0)).filter_map(|p| b.shifts(p).iter().map(|(d, _)| *d).min().map(|d| (p, d))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Field;
    use crate::hilbert::{hilbert_series_ideal, SeriesOf};
    use crate::poly::TermOrder;

    fn cubic() -> Ideal {
        let r = RingSpec::polynomial_ring(4);
        Ideal::parse(&r, &["X1*X4 - X2*X3", "X2^2 - X1*X3", "X3^2 - X2*X4"]).unwrap()
    }

    #[test]
    fn twisted_cubic_tables() {
        let i = cubic();
        let b1 = graded_betti_table(&i, ModuleKind::Ideal, None).unwrap();
        assert!(!b1.truncated());
        assert_eq!(b1.entries.len(), 2);
        assert_eq!((b1.beta(0, 2), b1.beta(1, 3)), (3, 2));
        let b2 = graded_betti_table(&i.power(2), ModuleKind::Ideal, None).unwrap();
        assert_eq!((b2.beta(0, 4), b2.beta(1, 5), b2.beta(2, 6)), (6, 6, 1));
        assert_eq!(b2.entries.len(), 3);
        let inv1 = invariants_from_shifts(&b1).unwrap();
        let inv2 = invariants_from_shifts(&b2).unwrap();
        assert_eq!((inv1.a_star.0, inv1.reg.0), (-1, 2));
        assert_eq!((inv2.a_star.0, inv2.reg.0), (2, 4));
        assert_eq!(proj_dim(&b2).unwrap(), 2);
    }

    #[test]
    fn euler_characteristic_matches_series() {
        let i = cubic().power(2);
        let q = hilbert_series_ideal(&i, SeriesOf::Quotient).unwrap();
        let b = graded_betti_table(&i, ModuleKind::Quotient, None).unwrap();
        assert!(b.euler_check(&q));
        assert_eq!(b.euler_numerator(), q.num);
    }

    #[test]
    fn free_module_invariants() {
        let r = RingSpec::polynomial_ring(3);
        let i = Ideal::parse(&r, &["X1^2"]).unwrap();
        let b = graded_betti_table(&i, ModuleKind::Ideal, None).unwrap();
        let inv = invariants_from_shifts(&b).unwrap();
        assert_eq!((inv.a_star.0, inv.reg.0, inv.proj_dim), (2 - 3, 2, 0));
        let unit = graded_betti_table(&Ideal::unit(&r), ModuleKind::Ideal, None).unwrap();
        assert_eq!(unit.beta(0, 0), 1);
    }

    #[test]
    fn cap_marks_truncation() {
        let i = cubic().power(2);
        let b = graded_betti_table(&i, ModuleKind::Ideal, Some(5)).unwrap();
        assert!(b.truncated());
        assert!(invariants_from_shifts(&b).is_err());
        assert!(graded_betti_table(&i, ModuleKind::Ideal, Some(3)).is_err());
    }

    #[test]
    fn bigraded_monomial_table() {
        let r = RingSpec::new(
            Field::Rational,
            vec!["X1".into(), "X2".into(), "Y1".into()],
            vec![MultiDegree::new(1, 0), MultiDegree::new(1, 0), MultiDegree::new(0, 1)],
            TermOrder::degrevlex(),
        )
        .unwrap();
        let j = Ideal::parse(&r, &["X1*Y1", "X2*Y1"]).unwrap();
        let b = betti_table(&j, ModuleKind::Ideal, None, "J").unwrap();
        assert_eq!(b.get(0, MultiDegree::new(1, 1)), 2);
        assert_eq!(b.get(1, MultiDegree::new(2, 1)), 1);
        let inv = invariants_from_shifts(&b).unwrap();
        assert_eq!(inv.reg, (1, 1));
    }
}
