//! Multidegrees, monomials, term orders, rings and sparse polynomials.

use crate::arith::{Field, FieldElement, Rational};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

/// A Z² bidegree; singly graded rings use `d2 = 0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiDegree {
    pub d1: i64,
    pub d2: i64,
}

impl MultiDegree {
    pub const fn new(d1: i64, d2: i64) -> Self {
        MultiDegree { d1, d2 }
    }

    pub fn add(self, o: MultiDegree) -> MultiDegree {
        MultiDegree::new(self.d1 + o.d1, self.d2 + o.d2)
    }

    pub fn sub(self, o: MultiDegree) -> MultiDegree {
        MultiDegree::new(self.d1 - o.d1, self.d2 - o.d2)
    }

    pub fn scale(self, k: i64) -> MultiDegree {
        MultiDegree::new(self.d1 * k, self.d2 * k)
    }

    /// Componentwise ≤.
    pub fn le(self, o: MultiDegree) -> bool {
        self.d1 <= o.d1 && self.d2 <= o.d2
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.d1, self.d2)
    }
}

/// Exponent vector of a monomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(pub SmallVec<[u16; 16]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, i: usize, e: u16) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = e;
        m
    }

    pub fn from_exps(exps: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    /// Product; panics on exponent overflow.
    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(o.0.iter())
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| a <= b)
    }

    /// `o / self` when `self | o`.
    pub fn quotient_of(&self, o: &Monomial) -> Option<Monomial> {
        if self.divides(o) {
            Some(Monomial(o.0.iter().zip(self.0.iter()).map(|(a, b)| a - b).collect()))
        } else {
            None
        }
    }

    pub fn lcm(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(o.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(o.0.iter()).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn is_coprime(&self, o: &Monomial) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Bit signature: bit i set when variable i (mod 64) occurs; `a | b` implies `sig(a) ⊆ sig(b)`.
    pub fn signature(&self) -> u64 {
        let mut s = 0u64;
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                s |= 1 << (i % 64);
            }
        }
        s
    }
}

/// Kind of a term order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrderKind {
    Lex,
    DegRevLex,
    DegLex,
    /// Product order whose first block is the last `k` variables (in significance order);
    /// any monomial involving them exceeds every monomial free of them.
    Elimination(usize),
}

/// A monomial order: a kind plus the significance order of variables
/// (`perm[0]` is the most significant variable index).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TermOrder {
    pub kind: OrderKind,
    pub perm: Option<Vec<usize>>,
}

impl TermOrder {
    pub fn new(kind: OrderKind) -> Self {
        TermOrder { kind, perm: None }
    }

    pub fn lex() -> Self {
        Self::new(OrderKind::Lex)
    }

    pub fn degrevlex() -> Self {
        Self::new(OrderKind::DegRevLex)
    }

    pub fn deglex() -> Self {
        Self::new(OrderKind::DegLex)
    }

    pub fn elimination(k: usize) -> Self {
        Self::new(OrderKind::Elimination(k))
    }

    pub fn with_perm(mut self, perm: Vec<usize>) -> Self {
        self.perm = Some(perm);
        self
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "lex" => Ok(Self::lex()),
            "degrevlex" | "grevlex" => Ok(Self::degrevlex()),
            "deglex" => Ok(Self::deglex()),
            other => {
                if let Some(k) = other.strip_prefix("elim:") {
                    let k = k.parse().map_err(|_| Error::Parse { pos: 0, msg: format!("bad order {other:?}") })?;
                    Ok(Self::elimination(k))
                } else {
                    Err(Error::Parse { pos: 0, msg: format!("unknown order {other:?}") })
                }
            }
        }
    }
}

impl Default for TermOrder {
    fn default() -> Self {
        Self::degrevlex()
    }
}

impl fmt::Display for TermOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            OrderKind::Lex => write!(f, "lex")?,
            OrderKind::DegRevLex => write!(f, "degrevlex")?,
            OrderKind::DegLex => write!(f, "deglex")?,
            OrderKind::Elimination(k) => write!(f, "elim:{k}")?,
        }
        if let Some(p) = &self.perm {
            write!(f, "{p:?}")?;
        }
        Ok(())
    }
}

/// A polynomial ring over a field with Z²-graded variables and a term order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingSpec {
    pub field: Field,
    pub vars: Vec<String>,
    pub degrees: Vec<MultiDegree>,
    pub order: TermOrder,
    /// Variable weights used by degree-compatible orders: `d1 + d2`.
    weights: Vec<u32>,
    /// Significance order (identity when the order has no permutation).
    perm: Vec<usize>,
}

pub type Ring = Arc<RingSpec>;

impl RingSpec {
    pub fn new(field: Field, vars: Vec<String>, degrees: Vec<MultiDegree>, order: TermOrder) -> Result<Ring> {
        if vars.is_empty() {
            return Err(Error::InvalidInput("ring needs at least one variable".into()));
        }
        if vars.len() != degrees.len() {
            return Err(Error::InvalidInput("variable/degree count mismatch".into()));
        }
        if let Field::Prime(p) = field {
            if !crate::arith::is_prime(p) {
                return Err(Error::InvalidInput(format!("{p} is not prime")));
            }
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::InvalidInput(format!("duplicate variable {v}")));
            }
            let ok = !v.is_empty()
                && v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(Error::InvalidInput(format!("bad variable name {v:?}")));
            }
        }
        for (v, d) in vars.iter().zip(&degrees) {
            if d.d1 < 0 || d.d2 < 0 || (d.d1 == 0 && d.d2 == 0) {
                return Err(Error::InvalidInput(format!("variable {v} must have a nonzero degree in N²")));
            }
        }
        let n = vars.len();
        let perm = match &order.perm {
            Some(p) => {
                let mut seen = vec![false; n];
                if p.len() != n || p.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
                    return Err(Error::InvalidInput("order permutation is not a permutation of the variables".into()));
                }
                p.clone()
            }
            None => (0..n).collect(),
        };
        if let OrderKind::Elimination(k) = order.kind {
            if k > n {
                return Err(Error::InvalidInput("elimination block larger than the variable set".into()));
            }
        }
        let weights = degrees.iter().map(|d| (d.d1 + d.d2) as u32).collect();
        Ok(Arc::new(RingSpec { field, vars, degrees, order, weights, perm }))
    }

    /// Standard graded ring k[names] with all degrees (1,0).
    pub fn standard(field: Field, names: &[&str]) -> Ring {
        Self::new(
            field,
            names.iter().map(|s| s.to_string()).collect(),
            vec![MultiDegree::new(1, 0); names.len()],
            TermOrder::degrevlex(),
        )
        .expect("valid standard ring")
    }

    /// k[X1..Xn] over Q, degrevlex.
    pub fn polynomial_ring(n: usize) -> Ring {
        let names: Vec<String> = (1..=n).map(|i| format!("X{i}")).collect();
        Self::new(Field::Rational, names, vec![MultiDegree::new(1, 0); n], TermOrder::degrevlex()).unwrap()
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Number of variables of degree (1,0).
    pub fn n(&self) -> usize {
        self.degrees.iter().filter(|d| **d == MultiDegree::new(1, 0)).count()
    }

    /// Number of variables with second degree component 1.
    pub fn r(&self) -> usize {
        self.degrees.iter().filter(|d| d.d2 == 1).count()
    }

    pub fn is_bigraded(&self) -> bool {
        self.degrees.iter().any(|d| d.d2 != 0)
    }

    /// True when every variable has degree (1,0).
    pub fn is_standard_graded(&self) -> bool {
        self.degrees.iter().all(|d| *d == MultiDegree::new(1, 0))
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn with_order(&self, order: TermOrder) -> Result<Ring> {
        Self::new(self.field, self.vars.clone(), self.degrees.clone(), order)
    }

    pub fn with_field(&self, field: Field) -> Result<Ring> {
        Self::new(field, self.vars.clone(), self.degrees.clone(), self.order.clone())
    }

    pub fn monomial_degree(&self, m: &Monomial) -> MultiDegree {
        let mut d = MultiDegree::default();
        for (e, g) in m.0.iter().zip(&self.degrees) {
            d.d1 += *e as i64 * g.d1;
            d.d2 += *e as i64 * g.d2;
        }
        d
    }

    fn weighted(&self, m: &Monomial, idx: &[usize]) -> u64 {
        idx.iter().map(|&i| m.0[i] as u64 * self.weights[i] as u64).sum()
    }

    /// Compare two monomials under the ring's order.
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let p = &self.perm;
        match self.order.kind {
            OrderKind::Lex => lex(a, b, p),
            OrderKind::DegLex => self.weighted(a, p).cmp(&self.weighted(b, p)).then_with(|| lex(a, b, p)),
            OrderKind::DegRevLex => self.weighted(a, p).cmp(&self.weighted(b, p)).then_with(|| revlex(a, b, p)),
            OrderKind::Elimination(k) => {
                let split = p.len() - k;
                let (rest, block) = p.split_at(split);
                self.weighted(a, block)
                    .cmp(&self.weighted(b, block))
                    .then_with(|| revlex(a, b, block))
                    .then_with(|| self.weighted(a, rest).cmp(&self.weighted(b, rest)))
                    .then_with(|| revlex(a, b, rest))
            }
        }
    }

    /// Sugar degree of a monomial (the order's weight).
    pub fn weight(&self, m: &Monomial) -> u64 {
        m.0.iter().zip(&self.weights).map(|(e, w)| *e as u64 * *w as u64).sum()
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.vars[i].clone()),
                _ => parts.push(format!("{}^{}", self.vars[i], e)),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

fn lex(a: &Monomial, b: &Monomial, p: &[usize]) -> Ordering {
    for &i in p {
        match a.0[i].cmp(&b.0[i]) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

fn revlex(a: &Monomial, b: &Monomial, p: &[usize]) -> Ordering {
    for &i in p.iter().rev() {
        match a.0[i].cmp(&b.0[i]) {
            Ordering::Equal => continue,
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

/// A coefficient–monomial pair.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Term {
    pub coeff: FieldElement,
    pub mono: Monomial,
}

/// A polynomial: terms strictly descending in the ring's order, no zero coefficients.
#[derive(Clone)]
pub struct Polynomial {
    pub ring: Ring,
    pub terms: Vec<Term>,
}

impl PartialEq for Polynomial {
    fn eq(&self, o: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &o.ring) || self.ring == o.ring) && self.terms == o.terms
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.terms.hash(h)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Polynomial {
    pub fn zero(ring: &Ring) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Ring, c: FieldElement) -> Self {
        Self::monomial(ring, c, Monomial::one(ring.nvars()))
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, ring.field.one())
    }

    pub fn monomial(ring: &Ring, c: FieldElement, m: Monomial) -> Self {
        let terms = if c.is_zero() { vec![] } else { vec![Term { coeff: c, mono: m }] };
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn var(ring: &Ring, i: usize) -> Self {
        Self::monomial(ring, ring.field.one(), Monomial::var(ring.nvars(), i, 1))
    }

    /// Build from arbitrary terms: sorts, merges duplicates, drops zeros.
    pub fn from_terms(ring: &Ring, mut terms: Vec<Term>) -> Self {
        terms.sort_by(|a, b| ring.cmp(&b.mono, &a.mono));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.mono == t.mono => last.coeff = last.coeff.add(&t.coeff),
                _ => out.push(t),
            }
            if out.last().is_some_and(|l| l.coeff.is_zero()) {
                out.pop();
            }
        }
        // a merged zero may sit before a later equal monomial only if adjacent, handled above
        Polynomial { ring: ring.clone(), terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lt(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn lm(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.mono)
    }

    pub fn lc(&self) -> Option<&FieldElement> {
        self.terms.first().map(|t| &t.coeff)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.mono.is_one())
    }

    fn same_ring(&self, o: &Polynomial) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &o.ring) || self.ring == o.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    /// `self + c·m·o`, merging sorted term lists.
    pub fn add_scaled(&self, c: &FieldElement, m: &Monomial, o: &Polynomial) -> Polynomial {
        let ring = &self.ring;
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let mut i = 0;
        let mut oi = o.terms.iter().map(|t| (t.coeff.mul(c), t.mono.mul(m))).peekable();
        while i < self.terms.len() || oi.peek().is_some() {
            let take = match (self.terms.get(i), oi.peek()) {
                (Some(a), Some(b)) => ring.cmp(&a.mono, &b.1),
                (Some(_), None) => Ordering::Greater,
                (None, _) => Ordering::Less,
            };
            match take {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (cc, mm) = oi.next().unwrap();
                    out.push(Term { coeff: cc, mono: mm });
                }
                Ordering::Equal => {
                    let (cc, _) = oi.next().unwrap();
                    let s = self.terms[i].coeff.add(&cc);
                    if !s.is_zero() {
                        out.push(Term { coeff: s, mono: self.terms[i].mono.clone() });
                    }
                    i += 1;
                }
            }
        }
        Polynomial { ring: ring.clone(), terms: out }
    }

    pub fn try_add(&self, o: &Polynomial) -> Result<Polynomial> {
        self.same_ring(o)?;
        Ok(self.add_scaled(&self.ring.field.one(), &Monomial::one(self.ring.nvars()), o))
    }

    pub fn add(&self, o: &Polynomial) -> Polynomial {
        self.try_add(o).expect("ring mismatch")
    }

    pub fn sub(&self, o: &Polynomial) -> Polynomial {
        self.same_ring(o).expect("ring mismatch");
        self.add_scaled(&self.ring.field.one().neg(), &Monomial::one(self.ring.nvars()), o)
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(&self.ring.field.one().neg())
    }

    pub fn scale(&self, c: &FieldElement) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|t| Term { coeff: t.coeff.mul(c), mono: t.mono.clone() }).collect(),
        }
    }

    /// `c·m·self`; monomial multiplication preserves the order, so no re-sort.
    pub fn mul_term(&self, c: &FieldElement, m: &Monomial) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|t| Term { coeff: t.coeff.mul(c), mono: t.mono.mul(m) }).collect(),
        }
    }

    pub fn try_mul(&self, o: &Polynomial) -> Result<Polynomial> {
        self.same_ring(o)?;
        if self.is_zero() || o.is_zero() {
            return Ok(Polynomial::zero(&self.ring));
        }
        let (small, big) = if self.len() <= o.len() { (self, o) } else { (o, self) };
        let mut acc: HashMap<Monomial, FieldElement> = HashMap::with_capacity(self.len() * o.len());
        for a in &small.terms {
            for b in &big.terms {
                let m = a.mono.mul(&b.mono);
                let c = a.coeff.mul(&b.coeff);
                match acc.get_mut(&m) {
                    Some(x) => *x = x.add(&c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(mono, coeff)| Term { coeff, mono }).collect();
        Ok(Polynomial::from_terms(&self.ring, terms))
    }

    pub fn mul(&self, o: &Polynomial) -> Polynomial {
        self.try_mul(o).expect("ring mismatch")
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Polynomial {
        match self.lc() {
            Some(c) if !c.is_one() => self.scale(&c.inv()),
            _ => self.clone(),
        }
    }

    /// Common bidegree of all terms, `None` when inhomogeneous; error on zero.
    pub fn multidegree_of(&self) -> Result<Option<MultiDegree>> {
        let first = self.lm().ok_or(Error::ZeroPolynomial)?;
        let d = self.ring.monomial_degree(first);
        Ok(if self.terms.iter().all(|t| self.ring.monomial_degree(&t.mono) == d) { Some(d) } else { None })
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || matches!(self.multidegree_of(), Ok(Some(_)))
    }

    /// Degree of the leading monomial.
    pub fn lead_degree(&self) -> Option<MultiDegree> {
        self.lm().map(|m| self.ring.monomial_degree(m))
    }

    /// Reinterpret in a ring with the same variables but (possibly) another order or a
    /// superset of trailing variables; `map[i]` is the target index of variable i.
    pub fn map_into(&self, target: &Ring, map: &[usize]) -> Polynomial {
        let n = target.nvars();
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut m = Monomial::one(n);
                for (i, &e) in t.mono.0.iter().enumerate() {
                    m.0[map[i]] += e;
                }
                let coeff = if target.field == self.ring.field {
                    t.coeff.clone()
                } else {
                    target.field.from_rational(&t.coeff.to_rational()).expect("coefficient not representable")
                };
                Term { coeff, mono: m }
            })
            .collect();
        Polynomial::from_terms(target, terms)
    }

    /// Same variables, other order/field: re-sort.
    pub fn to_ring(&self, target: &Ring) -> Polynomial {
        assert_eq!(target.nvars(), self.ring.nvars(), "variable count mismatch");
        let id: Vec<usize> = (0..target.nvars()).collect();
        self.map_into(target, &id)
    }

    /// Substitute `images[i]` (polynomials in `target`) for variable i.
    pub fn substitute(&self, target: &Ring, images: &[Polynomial]) -> Polynomial {
        let mut powers: Vec<Vec<Polynomial>> = images.iter().map(|p| vec![Polynomial::one(target), p.clone()]).collect();
        let mut acc: HashMap<Monomial, FieldElement> = HashMap::new();
        for t in &self.terms {
            let mut prod = Polynomial::constant(
                target,
                if target.field == self.ring.field {
                    t.coeff.clone()
                } else {
                    target.field.from_rational(&t.coeff.to_rational()).expect("coefficient not representable")
                },
            );
            for (i, &e) in t.mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                prod = prod.mul(&powers[i][e as usize]);
            }
            for tt in prod.terms {
                match acc.get_mut(&tt.mono) {
                    Some(x) => *x = x.add(&tt.coeff),
                    None => {
                        acc.insert(tt.mono, tt.coeff);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(mono, coeff)| Term { coeff, mono }).collect();
        Polynomial::from_terms(target, terms)
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter().map(|t| &t.mono)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            let neg = t.coeff.is_negative();
            let abs = if neg { t.coeff.neg() } else { t.coeff.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mono = self.ring.format_monomial(&t.mono);
            if t.mono.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

/// All monomials of the given bidegree, in ascending order of the ring's order.
pub fn monomials_of_degree(ring: &RingSpec, deg: MultiDegree) -> Vec<Monomial> {
    fn rec(ring: &RingSpec, i: usize, rem: MultiDegree, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if i == ring.nvars() {
            if rem == MultiDegree::default() {
                out.push(cur.clone());
            }
            return;
        }
        let g = ring.degrees[i];
        let mut e = 0i64;
        loop {
            let left = rem.sub(g.scale(e));
            if left.d1 < 0 || left.d2 < 0 {
                break;
            }
            cur.0[i] = e as u16;
            rec(ring, i + 1, left, cur, out);
            e += 1;
        }
        cur.0[i] = 0;
    }
    let mut out = Vec::new();
    if deg.d1 < 0 || deg.d2 < 0 {
        return out;
    }
    let mut cur = Monomial::one(ring.nvars());
    rec(ring, 0, deg, &mut cur, &mut out);
    out.sort_by(|a, b| ring.cmp(a, b));
    out
}

// ---------------------------------------------------------------- parsing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(num_bigint::BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let s = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let lit: String = chars[s..i].iter().collect();
            out.push((s, Tok::Num(lit.parse().unwrap())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let s = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((s, Tok::Ident(chars[s..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else if c == '−' {
            out.push((i, Tok::Op('-')));
            i += 1;
        } else {
            return Err(Error::Parse { pos: i, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    ring: &'a Ring,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.here(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().cloned() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = acc.mul(&rhs);
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let at = self.here();
                    let rhs = self.unary()?;
                    if !rhs.is_constant() || rhs.is_zero() {
                        return Err(Error::Parse { pos: at, msg: "division only by nonzero constants".into() });
                    }
                    acc = acc.scale(&rhs.terms[0].coeff.inv());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(k)) => {
                    self.pos += 1;
                    let k: u32 = k.try_into().map_err(|_| Error::Parse { pos: self.here(), msg: "exponent too large".into() })?;
                    Ok(base.pow(k))
                }
                _ => self.err("expected a non-negative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Num(k)) => {
                self.pos += 1;
                let q = Rational::from_bigint(k);
                let c = self
                    .ring
                    .field
                    .from_rational(&q)
                    .ok_or(Error::Parse { pos: at, msg: "literal not representable".into() })?;
                Ok(Polynomial::constant(self.ring, c))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match self.ring.var_index(&name) {
                    Some(i) => Ok(Polynomial::var(self.ring, i)),
                    None => Err(Error::UnknownVariable { name, pos: at }),
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => self.err("expected ')'"),
                }
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parse an expression over the ring's variables: integers, rationals, + − * / ^ and parentheses.
pub fn parse_polynomial(text: &str, ring: &Ring) -> Result<Polynomial> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, ring, end: text.chars().count() };
    let f = p.expr()?;
    if p.pos < p.toks.len() {
        return p.err("trailing input");
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn cubic_ring() -> Ring {
        RingSpec::polynomial_ring(4)
    }

    #[test]
    fn parses_twisted_cubic_generator() {
        let r = cubic_ring();
        let f = parse_polynomial("X1*X4 - X2*X3", &r).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.multidegree_of().unwrap(), Some(MultiDegree::new(2, 0)));
    }

    #[test]
    fn zero_and_cancellation() {
        let r = cubic_ring();
        assert!(parse_polynomial("0", &r).unwrap().is_zero());
        let f = parse_polynomial("X1^2 - X1^2 + X2", &r).unwrap();
        assert_eq!(f.to_string(), "X2");
    }

    #[test]
    fn parse_errors() {
        let r = cubic_ring();
        match parse_polynomial("X1 + Z", &r) {
            Err(Error::UnknownVariable { name, pos }) => {
                assert_eq!(name, "Z");
                assert_eq!(pos, 5);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_polynomial("X1 +", &r), Err(Error::Parse { .. })));
        assert!(matches!(parse_polynomial("X1 $ X2", &r), Err(Error::Parse { pos: 3, .. })));
    }

    #[test]
    fn products() {
        let r = cubic_ring();
        let a = parse_polynomial("X1+X2", &r).unwrap();
        let b = parse_polynomial("X1-X2", &r).unwrap();
        assert_eq!(a.mul(&b).to_string(), "X1^2 - X2^2");
        assert!(a.mul(&Polynomial::zero(&r)).is_zero());
    }

    #[test]
    fn multidegrees() {
        let r = RingSpec::new(
            Field::Rational,
            vec!["X1".into(), "Y1".into()],
            vec![MultiDegree::new(1, 0), MultiDegree::new(2, 1)],
            TermOrder::degrevlex(),
        )
        .unwrap();
        let y = parse_polynomial("Y1", &r).unwrap();
        assert_eq!(y.multidegree_of().unwrap(), Some(MultiDegree::new(2, 1)));
        let f = parse_polynomial("X1+Y1", &r).unwrap();
        assert_eq!(f.multidegree_of().unwrap(), None);
        assert!(Polynomial::zero(&r).multidegree_of().is_err());
    }

    #[test]
    fn orders() {
        let r = RingSpec::standard(Field::Rational, &["x", "y", "z"]);
        let m = |s: &str| parse_polynomial(s, &r).unwrap().lm().unwrap().clone();
        // degrevlex: x*z < y^2
        assert_eq!(r.cmp(&m("x*z"), &m("y^2")), Ordering::Less);
        let lx = r.with_order(TermOrder::lex()).unwrap();
        assert_eq!(lx.cmp(&m("x*z"), &m("y^2")), Ordering::Greater);
        let el = r.with_order(TermOrder::elimination(1)).unwrap();
        assert_eq!(el.cmp(&m("z"), &m("x^5")), Ordering::Greater);
        let pr = r.with_order(TermOrder::lex().with_perm(vec![2, 1, 0])).unwrap();
        assert_eq!(pr.cmp(&m("x^3"), &m("z")), Ordering::Less);
    }

    #[test]
    fn rational_literals_and_division() {
        let r = cubic_ring();
        let f = parse_polynomial("3/2*X1 - X2/4", &r).unwrap();
        assert_eq!(f.to_string(), "3/2*X1 - 1/4*X2");
        assert!(parse_polynomial("X1/X2", &r).is_err());
    }

    fn naive_mul(a: &Polynomial, b: &Polynomial) -> Polynomial {
        let mut terms = Vec::new();
        for x in &a.terms {
            for y in &b.terms {
                terms.push(Term { coeff: x.coeff.mul(&y.coeff), mono: x.mono.mul(&y.mono) });
            }
        }
        Polynomial::from_terms(&a.ring, terms)
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((-5i64..=5, 1i64..=3, prop::collection::vec(0u16..3, 3)), 0..8).prop_map(|ts| {
            let r = RingSpec::standard(Field::Rational, &["x", "y", "z"]);
            let terms = ts
                .into_iter()
                .map(|(n, d, e)| Term { coeff: FieldElement::Q(Rational::new(n, d)), mono: Monomial::from_exps(&e) })
                .collect();
            Polynomial::from_terms(&r, terms)
        })
    }

    fn arb_homogeneous() -> impl Strategy<Value = Polynomial> {
        (1u16..4, prop::collection::vec((1i64..=5, 0u16..4, 0u16..4), 1..6)).prop_map(|(deg, ts)| {
            let r = RingSpec::standard(Field::Rational, &["x", "y", "z"]);
            let terms = ts
                .into_iter()
                .map(|(c, a, b)| {
                    let a = a.min(deg);
                    let b = b.min(deg - a);
                    Term { coeff: FieldElement::Q(Rational::from_int(c)), mono: Monomial::from_exps(&[a, b, deg - a - b]) }
                })
                .collect();
            Polynomial::from_terms(&r, terms)
        })
    }

    proptest! {
        #[test]
        fn product_matches_convolution(a in arb_poly(), b in arb_poly()) {
            prop_assert_eq!(a.mul(&b), naive_mul(&a, &b));
        }

        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert!(a.sub(&a).is_zero());
        }

        #[test]
        fn parse_format_roundtrip(a in arb_poly()) {
            let back = parse_polynomial(&a.to_string(), &a.ring).unwrap();
            prop_assert_eq!(back, a);
        }

        #[test]
        fn degree_additive(a in arb_homogeneous(), b in arb_homogeneous()) {
            let da = a.multidegree_of().unwrap().unwrap();
            let db = b.multidegree_of().unwrap().unwrap();
            prop_assert_eq!(a.mul(&b).multidegree_of().unwrap(), Some(da.add(db)));
        }
    }
}
