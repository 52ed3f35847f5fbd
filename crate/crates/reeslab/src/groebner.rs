//! Buchberger's algorithm and ideal arithmetic.
//!
//! Pairs are processed by the normal strategy on sugar degree with the Gebauer–Möller
//! criteria; reductions are full (tails included), so the working basis stays
//! almost reduced and the final interreduction is cheap.

use crate::arith::FieldElement;
use crate::error::{Error, Result};
use crate::linalg::LinearSpan;
use crate::poly::{Monomial, MultiDegree, OrderKind, Polynomial, Ring, RingSpec, Term, TermOrder};
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

/// A reduced Gröbner basis for a fixed order.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    /// Ring carrying the order of this basis.
    pub ring: Ring,
    /// Monic, reduced, sorted by ascending leading monomial.
    pub basis: Vec<Polynomial>,
    pub leading: Vec<Monomial>,
}

impl GroebnerBasis {
    pub fn order(&self) -> &TermOrder {
        &self.ring.order
    }

    pub fn is_unit(&self) -> bool {
        self.leading.iter().any(|m| m.is_one())
    }

    /// Remainder of `f` modulo the basis (fully reduced).
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        if f.ring.vars != self.ring.vars || f.ring.field != self.ring.field {
            return Err(Error::RingMismatch);
        }
        let f = if f.ring.order == self.ring.order && Arc::ptr_eq(&f.ring, &self.ring) {
            f.clone()
        } else {
            f.to_ring(&self.ring)
        };
        let red = Reducer::from_basis(&self.basis);
        Ok(red.reduce(f, 0).0)
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// Checks that every S-pair reduces to zero and the basis is reduced.
    pub fn verify(&self) -> bool {
        let red = Reducer::from_basis(&self.basis);
        for (i, g) in self.basis.iter().enumerate() {
            if g.lc().is_none_or(|c| !c.is_one()) {
                return false;
            }
            for (j, h) in self.basis.iter().enumerate() {
                if i != j && h.monomials().any(|m| self.leading[i].divides(m)) {
                    return false;
                }
            }
        }
        for i in 0..self.basis.len() {
            for j in i + 1..self.basis.len() {
                let s = spoly(&self.basis[i], &self.basis[j]);
                if !red.reduce(s, 0).0.is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// S-polynomial of two monic polynomials.
fn spoly(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (lf, lg) = (f.lm().unwrap(), g.lm().unwrap());
    let l = lf.lcm(lg);
    let mf = lf.quotient_of(&l).unwrap();
    let mg = lg.quotient_of(&l).unwrap();
    let cf = f.lc().unwrap().inv();
    let cg = g.lc().unwrap().inv().neg();
    let a = f.mul_term(&cf, &mf);
    a.add_scaled(&cg, &mg, g)
}

/// Merge `a + c·m·b` for sorted term slices.
fn merge_scaled(ring: &RingSpec, a: &[Term], c: &FieldElement, m: &Monomial, b: &[Term]) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut bm: Option<Monomial> = b.first().map(|t| t.mono.mul(m));
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), &bm) {
            (Some(x), Some(y)) => ring.cmp(&x.mono, y),
            (Some(_), None) => Ordering::Greater,
            (None, _) => Ordering::Less,
        };
        match ord {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push(Term { coeff: b[j].coeff.mul(c), mono: bm.take().unwrap() });
                j += 1;
                bm = b.get(j).map(|t| t.mono.mul(m));
            }
            Ordering::Equal => {
                let s = a[i].coeff.add(&b[j].coeff.mul(c));
                if !s.is_zero() {
                    out.push(Term { coeff: s, mono: bm.take().unwrap() });
                }
                i += 1;
                j += 1;
                bm = b.get(j).map(|t| t.mono.mul(m));
            }
        }
    }
    out
}

/// Reduction context over a set of monic reducers.
struct Reducer<'a> {
    polys: Vec<&'a Polynomial>,
    sigs: Vec<u64>,
    sugars: Vec<u64>,
}

impl<'a> Reducer<'a> {
    fn from_basis(basis: &'a [Polynomial]) -> Self {
        let ring = basis.first().map(|p| p.ring.clone());
        Reducer {
            polys: basis.iter().collect(),
            sigs: basis.iter().map(|p| p.lm().unwrap().signature()).collect(),
            sugars: basis.iter().map(|p| ring.as_ref().unwrap().weight(p.lm().unwrap())).collect(),
        }
    }

    fn find(&self, m: &Monomial) -> Option<usize> {
        let s = m.signature();
        (0..self.polys.len()).find(|&k| self.sigs[k] & !s == 0 && self.polys[k].lm().unwrap().divides(m))
    }

    /// Full reduction; returns the remainder (monic not enforced) and updated sugar.
    fn reduce(&self, f: Polynomial, mut sugar: u64) -> (Polynomial, u64) {
        let ring = f.ring.clone();
        let mut terms = f.terms;
        let mut idx = 0;
        while idx < terms.len() {
            match self.find(&terms[idx].mono) {
                Some(k) => {
                    let g = self.polys[k];
                    let lt = &g.terms[0];
                    let m = lt.mono.quotient_of(&terms[idx].mono).unwrap();
                    let c = terms[idx].coeff.div(&lt.coeff).neg();
                    sugar = sugar.max(ring.weight(&m) + self.sugars[k]);
                    let suffix = merge_scaled(&ring, &terms[idx + 1..], &c, &m, &g.terms[1..]);
                    terms.truncate(idx);
                    terms.extend(suffix);
                }
                None => idx += 1,
            }
        }
        (Polynomial { ring, terms }, sugar)
    }
}

#[derive(Clone, Debug)]
enum Item {
    Pair { i: usize, j: usize, lcm: Monomial },
    Input(Polynomial),
}

impl Item {
    fn key(&self) -> &Monomial {
        match self {
            Item::Pair { lcm, .. } => lcm,
            Item::Input(p) => p.lm().unwrap(),
        }
    }
}

struct Engine {
    ring: Ring,
    polys: Vec<Polynomial>,
    lms: Vec<Monomial>,
    sigs: Vec<u64>,
    sugars: Vec<u64>,
    active: Vec<bool>,
    queue: BTreeMap<u64, (Vec<Item>, bool)>,
}

impl Engine {
    fn new(ring: Ring) -> Self {
        Engine { ring, polys: vec![], lms: vec![], sigs: vec![], sugars: vec![], active: vec![], queue: BTreeMap::new() }
    }

    fn push(&mut self, sugar: u64, it: Item) {
        let e = self.queue.entry(sugar).or_insert_with(|| (Vec::new(), false));
        e.0.push(it);
        e.1 = true;
    }

    fn pop(&mut self) -> Option<(u64, Item)> {
        loop {
            let (&s, _) = self.queue.iter().next()?;
            let ring = self.ring.clone();
            let bucket = self.queue.get_mut(&s).unwrap();
            if bucket.0.is_empty() {
                self.queue.remove(&s);
                continue;
            }
            if bucket.1 {
                // descending so that pop() yields the smallest lcm
                bucket.0.sort_by(|a, b| ring.cmp(b.key(), a.key()));
                bucket.1 = false;
            }
            let it = bucket.0.pop().unwrap();
            return Some((s, it));
        }
    }

    fn reduce(&self, f: Polynomial, sugar: u64) -> (Polynomial, u64) {
        let ring = f.ring.clone();
        let mut terms = f.terms;
        let mut sugar = sugar;
        let mut idx = 0;
        while idx < terms.len() {
            let m = &terms[idx].mono;
            let s = m.signature();
            let found = (0..self.polys.len())
                .find(|&k| self.active[k] && self.sigs[k] & !s == 0 && self.lms[k].divides(m));
            match found {
                Some(k) => {
                    let g = &self.polys[k];
                    let q = self.lms[k].quotient_of(m).unwrap();
                    let c = terms[idx].coeff.div(&g.terms[0].coeff).neg();
                    sugar = sugar.max(ring.weight(&q) + self.sugars[k]);
                    let suffix = merge_scaled(&ring, &terms[idx + 1..], &c, &q, &g.terms[1..]);
                    terms.truncate(idx);
                    terms.extend(suffix);
                }
                None => idx += 1,
            }
        }
        (Polynomial { ring, terms }, sugar)
    }

    /// Gebauer–Möller update with the new element `h`.
    fn update(&mut self, h: Polynomial, sugar: u64) {
        let hm = h.lm().unwrap().clone();
        let hi = self.polys.len();
        // candidate pairs (g, h)
        let mut cands: Vec<(usize, Monomial, bool)> = Vec::new();
        for g in 0..hi {
            if self.active[g] {
                let l = self.lms[g].lcm(&hm);
                let coprime = self.lms[g].is_coprime(&hm);
                cands.push((g, l, coprime));
            }
        }
        // chain criterion among new pairs: drop (g1,h) if some other lcm(g2,h) properly divides it,
        // keep one representative for equal lcms (prefer a coprime one, which is then discarded)
        let mut keep = vec![true; cands.len()];
        for a in 0..cands.len() {
            for b in 0..cands.len() {
                if a == b || !keep[b] {
                    continue;
                }
                if cands[b].1.divides(&cands[a].1) {
                    if cands[b].1 != cands[a].1 {
                        keep[a] = false;
                        break;
                    }
                    // equal lcm: keep the coprime one if any, else the lower index
                    let prefer_b = (cands[b].2 && !cands[a].2) || (cands[b].2 == cands[a].2 && b < a);
                    if prefer_b {
                        keep[a] = false;
                        break;
                    }
                }
            }
        }
        // B criterion on old pairs
        let lms = &self.lms;
        for (_, (bucket, _)) in self.queue.iter_mut() {
            bucket.retain(|it| match it {
                Item::Pair { i, j, lcm } => {
                    !(hm.divides(lcm) && lms[*i].lcm(&hm) != *lcm && lms[*j].lcm(&hm) != *lcm)
                }
                Item::Input(_) => true,
            });
        }
        let new_pairs: Vec<(usize, Monomial)> =
            cands.into_iter().zip(keep).filter(|(c, k)| *k && !c.2).map(|(c, _)| (c.0, c.1)).collect();
        // deactivate elements whose leading monomial is divisible by lm(h)
        for g in 0..hi {
            if self.active[g] && hm.divides(&self.lms[g]) {
                self.active[g] = false;
            }
        }
        self.sigs.push(hm.signature());
        self.lms.push(hm);
        self.sugars.push(sugar);
        self.active.push(true);
        self.polys.push(h);
        for (g, l) in new_pairs {
            let s = (self.sugars[g] + self.ring.weight(&self.lms[g].quotient_of(&l).unwrap()))
                .max(sugar + self.ring.weight(&self.lms[hi].quotient_of(&l).unwrap()));
            self.push(s, Item::Pair { i: g, j: hi, lcm: l });
        }
    }

    fn run(mut self, gens: Vec<Polynomial>) -> Vec<Polynomial> {
        for g in gens {
            if g.is_zero() {
                continue;
            }
            let s = g.monomials().map(|m| self.ring.weight(m)).max().unwrap();
            self.push(s, Item::Input(g));
        }
        while let Some((s, it)) = self.pop() {
            let f = match it {
                Item::Pair { i, j, .. } => spoly(&self.polys[i], &self.polys[j]),
                Item::Input(p) => p,
            };
            let (h, s2) = self.reduce(f, s);
            if h.is_zero() {
                continue;
            }
            let h = h.monic();
            if h.lm().unwrap().is_one() {
                return vec![h];
            }
            self.update(h, s2);
        }
        let keep: Vec<Polynomial> =
            (0..self.polys.len()).filter(|&k| self.active[k]).map(|k| self.polys[k].clone()).collect();
        interreduce(keep)
    }
}

/// Minimize and fully reduce a Gröbner basis; output monic, ascending by leading monomial.
fn interreduce(mut g: Vec<Polynomial>) -> Vec<Polynomial> {
    if g.is_empty() {
        return g;
    }
    let ring = g[0].ring.clone();
    g.sort_by(|a, b| ring.cmp(a.lm().unwrap(), b.lm().unwrap()));
    let mut minimal: Vec<Polynomial> = Vec::new();
    for p in g {
        if !minimal.iter().any(|q| q.lm().unwrap().divides(p.lm().unwrap())) {
            minimal.push(p);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<Polynomial> =
            minimal.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, p)| p.clone()).collect();
        let red = Reducer::from_basis(&others);
        // leading term is irreducible by minimality; reduce the tail only
        let p = &minimal[k];
        let lead = Polynomial { ring: ring.clone(), terms: vec![p.terms[0].clone()] };
        let tail = Polynomial { ring: ring.clone(), terms: p.terms[1..].to_vec() };
        let (t, _) = if others.is_empty() { (tail, 0) } else { red.reduce(tail, 0) };
        out.push(lead.add(&t).monic());
    }
    out
}

/// Reduced Gröbner basis of the polynomials (all in one ring) for the given ring's order.
pub fn buchberger(ring: &Ring, gens: &[Polynomial]) -> Vec<Polynomial> {
    let gens: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).map(|g| g.to_ring(ring)).collect();
    Engine::new(ring.clone()).run(gens)
}

/// An ideal: generators plus a per-order Gröbner cache.
pub struct Ideal {
    pub ring: Ring,
    pub gens: Vec<Polynomial>,
    cache: RwLock<HashMap<TermOrder, Arc<GroebnerBasis>>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Ideal { ring: self.ring.clone(), gens: self.gens.clone(), cache: RwLock::new(self.cache.read().unwrap().clone()) }
    }
}

impl std::fmt::Debug for Ideal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

impl Ideal {
    pub fn new(ring: &Ring, gens: Vec<Polynomial>) -> Result<Self> {
        for g in &gens {
            if g.ring.vars != ring.vars || g.ring.field != ring.field {
                return Err(Error::RingMismatch);
            }
        }
        let gens = gens.into_iter().filter(|g| !g.is_zero()).map(|g| g.to_ring(ring)).collect();
        Ok(Ideal { ring: ring.clone(), gens, cache: RwLock::new(HashMap::new()) })
    }

    pub fn parse(ring: &Ring, exprs: &[&str]) -> Result<Self> {
        let gens = exprs.iter().map(|e| crate::poly::parse_polynomial(e, ring)).collect::<Result<Vec<_>>>()?;
        Self::new(ring, gens)
    }

    pub fn zero(ring: &Ring) -> Self {
        Ideal { ring: ring.clone(), gens: vec![], cache: RwLock::new(HashMap::new()) }
    }

    pub fn unit(ring: &Ring) -> Self {
        Self::new(ring, vec![Polynomial::one(ring)]).unwrap()
    }

    /// Monomial ideal from exponent vectors.
    pub fn monomial(ring: &Ring, monos: &[Monomial]) -> Self {
        let gens = monos.iter().map(|m| Polynomial::monomial(ring, ring.field.one(), m.clone())).collect();
        Self::new(ring, gens).unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(|g| g.is_homogeneous())
    }

    pub fn is_monomial(&self) -> bool {
        self.gens.iter().all(|g| g.is_monomial())
    }

    /// Leading monomials of generators (meaningful for monomial ideals).
    pub fn monomials(&self) -> Result<Vec<Monomial>> {
        self.gens.iter().map(|g| if g.is_monomial() { Ok(g.terms[0].mono.clone()) } else { Err(Error::NotMonomial) }).collect()
    }

    /// Degrees of generators (homogeneous ideals).
    pub fn generator_degrees(&self) -> Result<Vec<MultiDegree>> {
        self.gens.iter().map(|g| g.multidegree_of()?.ok_or(Error::Inhomogeneous)).collect()
    }

    /// Reduced Gröbner basis for `order`, cached.
    pub fn groebner_basis(&self, order: &TermOrder) -> Arc<GroebnerBasis> {
        if let Some(g) = self.cache.read().unwrap().get(order) {
            return g.clone();
        }
        let ring = if *order == self.ring.order { self.ring.clone() } else { self.ring.with_order(order.clone()).unwrap() };
        let basis = if self.is_monomial() {
            let gens: Vec<Polynomial> = minimal_monomials(&self.monomials().unwrap())
                .into_iter()
                .map(|m| Polynomial::monomial(&ring, ring.field.one(), m))
                .collect();
            let mut g = gens;
            g.sort_by(|a, b| ring.cmp(a.lm().unwrap(), b.lm().unwrap()));
            g
        } else {
            buchberger(&ring, &self.gens)
        };
        let leading = basis.iter().map(|p| p.lm().unwrap().clone()).collect();
        let gb = Arc::new(GroebnerBasis { ring, basis, leading });
        self.cache.write().unwrap().insert(order.clone(), gb.clone());
        gb
    }

    /// Gröbner basis in the ring's own order.
    pub fn gb(&self) -> Arc<GroebnerBasis> {
        self.groebner_basis(&self.ring.order.clone())
    }

    /// Install a precomputed basis (e.g. from a prime-field check) after verifying it generates the ideal.
    pub fn set_groebner_basis(&self, gb: GroebnerBasis) -> Result<()> {
        let ideal_gb = Ideal::new(&self.ring, gb.basis.iter().map(|p| p.to_ring(&self.ring)).collect())?;
        if !self.equals(&ideal_gb) {
            return Err(Error::Validation("basis does not generate the ideal".into()));
        }
        self.cache.write().unwrap().insert(gb.ring.order.clone(), Arc::new(gb));
        Ok(())
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        self.gb().normal_form(f)
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn is_unit(&self) -> bool {
        self.gb().is_unit()
    }

    /// Every generator of each reduces to zero modulo the other.
    pub fn equals(&self, o: &Ideal) -> bool {
        let a = self.gb();
        let b = o.gb();
        o.gens.iter().all(|g| a.contains(g).unwrap_or(false)) && self.gens.iter().all(|g| b.contains(g).unwrap_or(false))
    }

    /// Monomial ideal of leading monomials of the reduced basis.
    pub fn initial_ideal(&self, order: &TermOrder) -> Ideal {
        let gb = self.groebner_basis(order);
        Ideal::monomial(&self.ring, &gb.leading)
    }

    pub fn sum(&self, o: &Ideal) -> Ideal {
        let mut g = self.gens.clone();
        g.extend(o.gens.iter().map(|p| p.to_ring(&self.ring)));
        Ideal::new(&self.ring, g).unwrap()
    }

    pub fn product(&self, o: &Ideal) -> Ideal {
        let mut g = Vec::with_capacity(self.gens.len() * o.gens.len());
        for a in &self.gens {
            for b in &o.gens {
                g.push(a.mul(&b.to_ring(&self.ring)));
            }
        }
        let ideal = Ideal::new(&self.ring, g).unwrap();
        if ideal.is_homogeneous() {
            ideal.minimalize()
        } else {
            ideal
        }
    }

    /// I^j with a minimal generating set when homogeneous; I^0 = (1).
    pub fn power(&self, j: u32) -> Ideal {
        if j == 0 {
            return Ideal::unit(&self.ring);
        }
        let base = if self.is_homogeneous() { self.minimalize() } else { self.clone() };
        let mut acc = base.clone();
        for _ in 1..j {
            acc = acc.product(&base);
        }
        acc
    }

    /// Minimal homogeneous generators by degreewise linear algebra: a candidate is kept only
    /// when it is not in the span of multiples of previously kept generators.
    pub fn minimalize(&self) -> Ideal {
        assert!(self.is_homogeneous(), "minimalize needs a homogeneous ideal");
        if self.is_monomial() {
            let ms = minimal_monomials(&self.monomials().unwrap());
            return Ideal::monomial(&self.ring, &ms);
        }
        let ring = &self.ring;
        let mut cands: Vec<(MultiDegree, Polynomial)> =
            self.gens.iter().map(|g| (g.multidegree_of().unwrap().unwrap(), g.clone())).collect();
        cands.sort_by(|a, b| {
            (a.0.d1 + a.0.d2, a.0).cmp(&(b.0.d1 + b.0.d2, b.0)).then_with(|| ring.cmp(b.1.lm().unwrap(), a.1.lm().unwrap()))
        });
        let mut kept: Vec<(MultiDegree, Polynomial)> = Vec::new();
        let mut k = 0;
        while k < cands.len() {
            let deg = cands[k].0;
            let mut span = LinearSpan::new(ring);
            for (dk, p) in &kept {
                if *dk == deg {
                    span.insert(p.clone());
                    continue;
                }
                let diff = deg.sub(*dk);
                if diff.d1 < 0 || diff.d2 < 0 {
                    continue;
                }
                for m in crate::poly::monomials_of_degree(ring, diff) {
                    span.insert(p.mul_term(&ring.field.one(), &m));
                }
            }
            while k < cands.len() && cands[k].0 == deg {
                let g = cands[k].1.clone();
                if span.insert(g.clone()) {
                    kept.push((deg, g));
                }
                k += 1;
            }
        }
        Ideal::new(ring, kept.into_iter().map(|(_, p)| p).collect()).unwrap()
    }

    /// (I : f) via I ∩ (f) computed by eliminating an auxiliary variable.
    pub fn colon(&self, f: &Polynomial) -> Result<Ideal> {
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.is_zero() {
            return Ok(Ideal::zero(&self.ring));
        }
        let inter = self.intersect(&Ideal::new(&self.ring, vec![f.clone()])?)?;
        let mut gens = Vec::new();
        for g in &inter.gens {
            gens.push(exact_div(g, f).ok_or_else(|| Error::Validation("intersection element not divisible".into()))?);
        }
        let out = Ideal::new(&self.ring, gens)?;
        Ok(if out.is_homogeneous() { out.minimalize() } else { out })
    }

    /// I ∩ J = (t·I + (1−t)·J) ∩ k[vars].
    pub fn intersect(&self, o: &Ideal) -> Result<Ideal> {
        let ring = &self.ring;
        let ext = extend_ring(ring, &["__t"], &[MultiDegree::new(0, 1)])?;
        let map: Vec<usize> = (0..ring.nvars()).collect();
        let t = Polynomial::var(&ext, ring.nvars());
        let one_minus_t = Polynomial::one(&ext).sub(&t);
        let mut gens = Vec::new();
        for g in &self.gens {
            gens.push(t.mul(&g.map_into(&ext, &map)));
        }
        for g in &o.gens {
            gens.push(one_minus_t.mul(&g.map_into(&ext, &map)));
        }
        let j = Ideal::new(&ext, gens)?;
        j.eliminate(&[ring.nvars()])
    }

    /// J ∩ k[remaining variables], returned in the subring (same names, degrees, default order).
    pub fn eliminate(&self, block: &[usize]) -> Result<Ideal> {
        let ring = &self.ring;
        let n = ring.nvars();
        if block.iter().any(|&b| b >= n) {
            return Err(Error::InvalidInput("elimination block out of range".into()));
        }
        let rest: Vec<usize> = (0..n).filter(|i| !block.contains(i)).collect();
        let mut perm = rest.clone();
        perm.extend_from_slice(block);
        let order = TermOrder::elimination(block.len()).with_perm(perm);
        let gb = self.groebner_basis(&order);
        let sub = RingSpec::new(
            ring.field,
            rest.iter().map(|&i| ring.vars[i].clone()).collect(),
            rest.iter().map(|&i| ring.degrees[i]).collect(),
            TermOrder::degrevlex(),
        )?;
        let mut map = vec![usize::MAX; n];
        for (k, &i) in rest.iter().enumerate() {
            map[i] = k;
        }
        let mut gens = Vec::new();
        for p in &gb.basis {
            if p.monomials().all(|m| block.iter().all(|&b| m.0[b] == 0)) {
                let terms = p
                    .terms
                    .iter()
                    .map(|t| Term { coeff: t.coeff.clone(), mono: Monomial(rest.iter().map(|&i| t.mono.0[i]).collect()) })
                    .collect();
                gens.push(Polynomial::from_terms(&sub, terms));
            }
        }
        Ideal::new(&sub, gens)
    }

    /// Map into a ring with extra trailing variables.
    pub fn extend_to(&self, ext: &Ring) -> Ideal {
        let map: Vec<usize> = (0..self.ring.nvars()).collect();
        Ideal::new(ext, self.gens.iter().map(|g| g.map_into(ext, &map)).collect()).unwrap()
    }
}

/// Ring with extra trailing variables, default order.
pub fn extend_ring(ring: &Ring, names: &[&str], degrees: &[MultiDegree]) -> Result<Ring> {
    let mut vars = ring.vars.clone();
    vars.extend(names.iter().map(|s| s.to_string()));
    let mut degs = ring.degrees.clone();
    degs.extend_from_slice(degrees);
    RingSpec::new(ring.field, vars, degs, TermOrder::new(OrderKind::DegRevLex))
}

/// Exact quotient g / f, `None` when f does not divide g.
pub fn exact_div(g: &Polynomial, f: &Polynomial) -> Option<Polynomial> {
    let lt = f.lt()?;
    let mut rem = g.clone();
    let mut q = Polynomial::zero(&g.ring);
    while let Some(t) = rem.lt().cloned() {
        let m = lt.mono.quotient_of(&t.mono)?;
        let c = t.coeff.div(&lt.coeff);
        q = q.add(&Polynomial::monomial(&g.ring, c.clone(), m.clone()));
        rem = rem.add_scaled(&c.neg(), &m, f);
    }
    Some(q)
}

/// Minimal generators of a monomial ideal, sorted and deduplicated.
pub fn minimal_monomials(ms: &[Monomial]) -> Vec<Monomial> {
    let mut v: Vec<Monomial> = ms.to_vec();
    v.sort_by_key(|m| (m.total_degree(), m.0.clone()));
    v.dedup();
    let mut out: Vec<Monomial> = Vec::new();
    for m in v {
        if !out.iter().any(|o| o.divides(&m)) {
            out.push(m);
        }
    }
    out
}
