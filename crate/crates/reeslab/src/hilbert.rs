//! Hilbert series of monomial and homogeneous ideals, Hilbert functions and polynomials.
//!
//! Series are kept as a Laurent numerator over one factor `(1 − s^a t^b)` per ring
//! variable; the numerator of a monomial quotient comes from pivot recursion
//! `N(J) = N(J + (p)) + s^deg(p)·N(J : p)`.

use crate::arith::{binomial, Rational};
use crate::error::{Error, Result};
use crate::groebner::{minimal_monomials, Ideal};
use crate::poly::{Monomial, MultiDegree, RingSpec};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;

/// Laurent polynomial in s, t with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Laurent(pub BTreeMap<(i64, i64), BigInt>);

impl Laurent {
    pub fn zero() -> Self {
        Laurent(BTreeMap::new())
    }

    pub fn one() -> Self {
        Self::monomial(1, 0, 0)
    }

    pub fn monomial(c: i64, a: i64, b: i64) -> Self {
        let mut m = BTreeMap::new();
        if c != 0 {
            m.insert((a, b), BigInt::from(c));
        }
        Laurent(m)
    }

    pub fn from_terms(terms: &[(i64, i64, i64)]) -> Self {
        let mut l = Laurent::zero();
        for &(c, a, b) in terms {
            l.add_term(BigInt::from(c), a, b);
        }
        l
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_term(&mut self, c: BigInt, a: i64, b: i64) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry((a, b)).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&(a, b));
        }
    }

    pub fn add(&self, o: &Laurent) -> Laurent {
        let mut r = self.clone();
        for (&(a, b), c) in &o.0 {
            r.add_term(c.clone(), a, b);
        }
        r
    }

    pub fn neg(&self) -> Laurent {
        Laurent(self.0.iter().map(|(k, c)| (*k, -c)).collect())
    }

    pub fn sub(&self, o: &Laurent) -> Laurent {
        self.add(&o.neg())
    }

    pub fn shift(&self, a: i64, b: i64) -> Laurent {
        Laurent(self.0.iter().map(|(&(x, y), c)| ((x + a, y + b), c.clone())).collect())
    }

    pub fn mul(&self, o: &Laurent) -> Laurent {
        let mut r = Laurent::zero();
        for (&(a, b), c) in &self.0 {
            for (&(x, y), d) in &o.0 {
                r.add_term(c * d, a + x, b + y);
            }
        }
        r
    }

    /// Multiply by `(1 − s^a t^b)`.
    pub fn mul_one_minus(&self, a: i64, b: i64) -> Laurent {
        self.sub(&self.shift(a, b))
    }

    /// Substitute t = s.
    pub fn collapse(&self) -> BTreeMap<i64, BigInt> {
        let mut m: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (&(a, b), c) in &self.0 {
            *m.entry(a + b).or_insert_with(BigInt::zero) += c;
        }
        m.retain(|_, c| !c.is_zero());
        m
    }

    pub fn max_t(&self) -> i64 {
        self.0.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn max_s(&self) -> i64 {
        self.0.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn terms(&self) -> Vec<(BigInt, i64, i64)> {
        self.0.iter().map(|(&(a, b), c)| (c.clone(), a, b)).collect()
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(a, b), c) in &self.0 {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mut mono = String::new();
            match a {
                0 => {}
                1 => mono.push('s'),
                _ => mono.push_str(&format!("s^{a}")),
            }
            match b {
                0 => {}
                1 => mono.push('t'),
                _ => mono.push_str(&format!("t^{b}")),
            }
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}{mono}")?;
            }
        }
        Ok(())
    }
}

/// Rational Hilbert series `num / Π (1 − s^a t^b)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HilbertSeries {
    pub num: Laurent,
    /// Denominator factors, sorted.
    pub den: Vec<(i64, i64)>,
}

/// Which object a series describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOf {
    Ideal,
    Quotient,
}

impl HilbertSeries {
    pub fn new(num: Laurent, mut den: Vec<(i64, i64)>) -> Self {
        den.sort();
        HilbertSeries { num, den }
    }

    /// Series of the polynomial ring itself.
    pub fn of_ring(ring: &RingSpec) -> Self {
        Self::new(Laurent::one(), ring.degrees.iter().map(|d| (d.d1, d.d2)).collect())
    }

    pub fn is_bigraded(&self) -> bool {
        self.den.iter().any(|f| f.1 != 0) || self.num.0.keys().any(|k| k.1 != 0)
    }

    /// Denominator grouped as (a, b, multiplicity).
    pub fn den_grouped(&self) -> Vec<(i64, i64, usize)> {
        let mut out: Vec<(i64, i64, usize)> = Vec::new();
        for &(a, b) in &self.den {
            match out.last_mut() {
                Some(l) if l.0 == a && l.1 == b => l.2 += 1,
                _ => out.push((a, b, 1)),
            }
        }
        out
    }

    /// Expanded denominator as a polynomial.
    pub fn den_poly(&self) -> Laurent {
        self.den.iter().fold(Laurent::one(), |acc, &(a, b)| acc.mul_one_minus(a, b))
    }

    /// Equality as rational functions.
    pub fn same_function(&self, o: &HilbertSeries) -> bool {
        self.num.mul(&o.den_poly()) == o.num.mul(&self.den_poly())
    }

    /// Series of the complementary object: ideal ↔ quotient (both over the same ring).
    pub fn complement(&self) -> HilbertSeries {
        HilbertSeries::new(Laurent::one().sub(&self.num), self.den.clone())
    }

    /// Coefficient table T[i][j] of 1/Π(1 − s^a t^b) for 0 ≤ i ≤ imax, 0 ≤ j ≤ jmax.
    fn partition_table(&self, imax: i64, jmax: i64) -> Vec<Vec<BigInt>> {
        let (iu, ju) = (imax.max(0) as usize, jmax.max(0) as usize);
        let mut t = vec![vec![BigInt::zero(); ju + 1]; iu + 1];
        t[0][0] = BigInt::one();
        for &(a, b) in &self.den {
            let (a, b) = (a as usize, b as usize);
            for i in a..=iu {
                for j in b..=ju {
                    let v = t[i - a][j - b].clone();
                    if !v.is_zero() {
                        t[i][j] += v;
                    }
                }
            }
        }
        t
    }

    /// Hilbert function values on the box [0, imax] × [0, jmax].
    pub fn function_table(&self, imax: i64, jmax: i64) -> Vec<Vec<BigInt>> {
        let p = self.partition_table(imax, jmax);
        let (iu, ju) = (imax.max(0) as usize, jmax.max(0) as usize);
        let mut out = vec![vec![BigInt::zero(); ju + 1]; iu + 1];
        for (&(a, b), c) in &self.num.0 {
            for i in 0..=iu as i64 {
                let u = i - a;
                if u < 0 || u > imax {
                    continue;
                }
                for j in 0..=ju as i64 {
                    let v = j - b;
                    if v < 0 || v > jmax {
                        continue;
                    }
                    let x = &p[u as usize][v as usize];
                    if !x.is_zero() {
                        out[i as usize][j as usize] += c * x;
                    }
                }
            }
        }
        out
    }

    /// Power-series coefficient at a degree.
    pub fn coefficient(&self, deg: MultiDegree) -> BigInt {
        let mina = self.num.0.keys().map(|k| k.0).min().unwrap_or(0).min(0);
        let minb = self.num.0.keys().map(|k| k.1).min().unwrap_or(0).min(0);
        let (imax, jmax) = (deg.d1 - mina, deg.d2 - minb);
        if imax < 0 || jmax < 0 {
            return BigInt::zero();
        }
        let p = self.partition_table(imax, jmax);
        let mut acc = BigInt::zero();
        for (&(a, b), c) in &self.num.0 {
            let (u, v) = (deg.d1 - a, deg.d2 - b);
            if u >= 0 && v >= 0 && u <= imax && v <= jmax {
                acc += c * &p[u as usize][v as usize];
            }
        }
        acc
    }

    /// Singly graded coefficients H(0..=imax).
    pub fn coefficients(&self, imax: i64) -> Vec<BigInt> {
        let t = self.function_table(imax, 0);
        t.into_iter().map(|row| row[0].clone()).collect()
    }

    /// Coefficient of t^j as a singly graded series in s (denominator factors with b = 0).
    pub fn t_slice(&self, j: i64) -> HilbertSeries {
        let base: Vec<(i64, i64)> = self.den.iter().copied().filter(|f| f.1 == 0).collect();
        let moving: Vec<(i64, i64)> = self.den.iter().copied().filter(|f| f.1 != 0).collect();
        // expansion of Π_{b>0} 1/(1 − s^a t^b) truncated at t^j, as s-polynomials per t-degree
        let mut by_t: Vec<Laurent> = vec![Laurent::zero(); (j.max(0) + 1) as usize];
        if j >= 0 {
            by_t[0] = Laurent::one();
        }
        for &(a, b) in &moving {
            for tt in (b as usize)..by_t.len() {
                let prev = by_t[tt - b as usize].shift(a, 0);
                by_t[tt] = by_t[tt].add(&prev);
            }
        }
        let mut num = Laurent::zero();
        for (&(a, b), c) in &self.num.0 {
            let k = j - b;
            if k < 0 || k as usize >= by_t.len() {
                continue;
            }
            for (&(x, _), d) in &by_t[k as usize].0 {
                num.add_term(c * d, a + x, 0);
            }
        }
        HilbertSeries::new(num, base)
    }

    /// Order of vanishing of the collapsed numerator at s = 1.
    fn collapsed_order(&self) -> (usize, BTreeMap<i64, BigInt>) {
        let mut p = self.num.collapse();
        let mut k = 0;
        loop {
            if p.is_empty() {
                return (usize::MAX, p);
            }
            let at1: BigInt = p.values().sum();
            if !at1.is_zero() {
                return (k, p);
            }
            p = divide_one_minus_s(&p);
            k += 1;
        }
    }

    /// Krull dimension: pole order at s = 1 after setting t = s.
    pub fn dimension(&self) -> Option<usize> {
        let (k, _) = self.collapsed_order();
        if k == usize::MAX {
            return None;
        }
        Some(self.den.len().saturating_sub(k))
    }

    /// Reduced singly graded form h(s)/(1−s)^dim for standard gradings.
    pub fn h_vector(&self) -> Result<(BTreeMap<i64, BigInt>, usize)> {
        if !self.den.iter().all(|&f| f == (1, 0)) || self.num.0.keys().any(|k| k.1 != 0) {
            return Err(Error::Unsupported("h-vector needs a standard graded series".into()));
        }
        let (k, p) = self.collapsed_order();
        if k == usize::MAX {
            return Ok((BTreeMap::new(), 0));
        }
        Ok((p, self.den.len() - k))
    }

    /// a-invariant: degree of the series as a rational function, deg h − dim (None for zero).
    pub fn a_invariant(&self) -> Option<i64> {
        let (h, d) = self.h_vector().ok()?;
        h.keys().max().map(|m| m - d as i64)
    }

    /// Multiplicity h(1) for standard graded series.
    pub fn multiplicity(&self) -> Option<BigInt> {
        let (h, _) = self.h_vector().ok()?;
        if h.is_empty() {
            return None;
        }
        Some(h.values().sum())
    }

    /// Graded Hilbert polynomial (standard grading) and its stabilization threshold.
    pub fn hilbert_polynomial(&self) -> Result<HilbertPolynomial> {
        let (h, d) = self.h_vector()?;
        if h.is_empty() || d == 0 {
            let threshold = h.keys().max().map(|m| m + 1).unwrap_or(0);
            return Ok(HilbertPolynomial::Graded { coeffs: vec![], threshold });
        }
        let d = d as i64;
        let eval = |x: i64| -> BigInt { h.iter().map(|(&i, c)| c * binomial(x - i + d - 1, d - 1)).sum() };
        // c_j = ∇^j P(0) − ∇^{j+1} P(0), with ∇^j P(0) = Σ_i (−1)^i C(j,i) P(−i)
        let nabla = |j: i64| -> BigInt {
            (0..=j).map(|i| if i % 2 == 0 { BigInt::one() } else { -BigInt::one() } * binomial(j, i) * eval(-i)).sum()
        };
        let coeffs: Vec<Rational> =
            (0..d).map(|j| Rational::from_bigint(nabla(j) - if j + 1 < d { nabla(j + 1) } else { BigInt::zero() })).collect();
        let deg_h = *h.keys().max().unwrap();
        Ok(HilbertPolynomial::Graded { coeffs, threshold: (deg_h - d + 1).max(0) })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "num": self.num.terms().iter().map(|(c, a, b)| json!([crate::arith::bigint_json(c), a, b])).collect::<Vec<_>>(),
            "den": self.den_grouped().iter().map(|(a, b, m)| json!([a, b, m])).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::InvalidInput("malformed series JSON".into());
        let mut num = Laurent::zero();
        for t in v["num"].as_array().ok_or_else(bad)? {
            let c: BigInt = match &t[0] {
                Value::Number(n) => BigInt::from(n.as_i64().ok_or_else(bad)?),
                Value::String(s) => s.parse().map_err(|_| bad())?,
                _ => return Err(bad()),
            };
            num.add_term(c, t[1].as_i64().ok_or_else(bad)?, t[2].as_i64().ok_or_else(bad)?);
        }
        let mut den = Vec::new();
        for f in v["den"].as_array().ok_or_else(bad)? {
            let (a, b, m) = (f[0].as_i64().ok_or_else(bad)?, f[1].as_i64().ok_or_else(bad)?, f[2].as_u64().ok_or_else(bad)?);
            den.extend(std::iter::repeat_n((a, b), m as usize));
        }
        Ok(HilbertSeries::new(num, den))
    }
}

impl fmt::Display for HilbertSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/(", self.num)?;
        for (k, (a, b, m)) in self.den_grouped().iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            let mut mono = String::new();
            match a {
                0 => {}
                1 => mono.push('s'),
                _ => mono.push_str(&format!("s^{a}")),
            }
            match b {
                0 => {}
                1 => mono.push('t'),
                _ => mono.push_str(&format!("t^{b}")),
            }
            write!(f, "(1-{mono})")?;
            if *m > 1 {
                write!(f, "^{m}")?;
            }
        }
        write!(f, ")")
    }
}

fn divide_one_minus_s(p: &BTreeMap<i64, BigInt>) -> BTreeMap<i64, BigInt> {
    // p = (1 − s)·q: q_k = Σ_{i ≤ k} p_i
    let mut q = BTreeMap::new();
    let mut acc = BigInt::zero();
    let lo = *p.keys().next().unwrap();
    let hi = *p.keys().next_back().unwrap();
    for k in lo..hi {
        if let Some(c) = p.get(&k) {
            acc += c;
        }
        if !acc.is_zero() {
            q.insert(k, acc.clone());
        }
    }
    q
}

/// A Hilbert polynomial: graded in the basis C(s+k, k), or bigraded in C(x, k)·C(t, l) with x = s − d·t.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HilbertPolynomial {
    Graded {
        /// coefficient of C(s+k, k) at index k
        coeffs: Vec<Rational>,
        /// H(s) = P(s) for all s ≥ threshold
        threshold: i64,
    },
    Bigraded {
        d: i64,
        /// (k, l) → coefficient of C(s − d t, k)·C(t, l)
        coeffs: BTreeMap<(u32, u32), Rational>,
        /// validated on x ≥ x0, t ≥ t0 (x = s − d t)
        x0: i64,
        t0: i64,
    },
}

impl HilbertPolynomial {
    pub fn is_zero(&self) -> bool {
        match self {
            HilbertPolynomial::Graded { coeffs, .. } => coeffs.iter().all(|c| c.is_zero()),
            HilbertPolynomial::Bigraded { coeffs, .. } => coeffs.values().all(|c| c.is_zero()),
        }
    }

    /// Total degree (None for the zero polynomial).
    pub fn degree(&self) -> Option<u32> {
        match self {
            HilbertPolynomial::Graded { .. } => {
                let m = self.monomial_coeffs();
                m.iter().rposition(|c| !c.is_zero()).map(|p| p as u32)
            }
            HilbertPolynomial::Bigraded { coeffs, .. } => {
                coeffs.iter().filter(|(_, c)| !c.is_zero()).map(|(k, _)| k.0 + k.1).max()
            }
        }
    }

    pub fn eval(&self, s: i64, t: i64) -> Rational {
        match self {
            HilbertPolynomial::Graded { coeffs, .. } => coeffs
                .iter()
                .enumerate()
                .fold(Rational::zero(), |acc, (k, c)| acc.add(&c.mul(&Rational::from_bigint(binomial(s + k as i64, k as i64))))),
            HilbertPolynomial::Bigraded { d, coeffs, .. } => coeffs.iter().fold(Rational::zero(), |acc, (&(k, l), c)| {
                let b = binomial(s - d * t, k as i64) * binomial(t, l as i64);
                acc.add(&c.mul(&Rational::from_bigint(b)))
            }),
        }
    }

    /// Graded case: coefficients of s^i in the monomial basis.
    pub fn monomial_coeffs(&self) -> Vec<Rational> {
        match self {
            HilbertPolynomial::Graded { coeffs, .. } => {
                let mut out = vec![Rational::zero(); coeffs.len().max(1)];
                for (k, c) in coeffs.iter().enumerate() {
                    // C(s+k, k) = Π_{i=1..k} (s+i)/i
                    let mut poly = vec![Rational::one()];
                    for i in 1..=k as i64 {
                        let mut next = vec![Rational::zero(); poly.len() + 1];
                        for (e, a) in poly.iter().enumerate() {
                            next[e + 1] = next[e + 1].add(&a.div(&Rational::from_int(i)));
                            next[e] = next[e].add(a);
                        }
                        poly = next;
                    }
                    for (e, a) in poly.iter().enumerate() {
                        out[e] = out[e].add(&a.mul(c));
                    }
                }
                while out.len() > 1 && out.last().unwrap().is_zero() {
                    out.pop();
                }
                out
            }
            HilbertPolynomial::Bigraded { .. } => vec![],
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            HilbertPolynomial::Graded { coeffs, threshold } => json!({
                "kind": "graded",
                "binomial_basis": coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "monomial_basis": self.monomial_coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "text": self.to_string(),
                "threshold": threshold,
            }),
            HilbertPolynomial::Bigraded { d, coeffs, x0, t0 } => json!({
                "kind": "bigraded",
                "d": d,
                "coefficients": coeffs.iter().filter(|(_, c)| !c.is_zero()).map(|(k, c)| json!([k.0, k.1, c.to_string()])).collect::<Vec<_>>(),
                "total_degree": self.degree(),
                "validated_from": {"x0": x0, "t0": t0},
                "note": "stabilization region surrogate: validated window, auto-grown",
            }),
        }
    }
}

impl fmt::Display for HilbertPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HilbertPolynomial::Graded { .. } => {
                let m = self.monomial_coeffs();
                let mut first = true;
                for (e, c) in m.iter().enumerate().rev() {
                    if c.is_zero() {
                        continue;
                    }
                    let neg = c.is_negative();
                    let a = if neg { c.neg() } else { c.clone() };
                    if first {
                        if neg {
                            write!(f, "-")?;
                        }
                    } else {
                        write!(f, "{}", if neg { "-" } else { "+" })?;
                    }
                    first = false;
                    let coef = if a.is_one() && e > 0 { String::new() } else { a.to_string() };
                    match e {
                        0 => write!(f, "{a}")?,
                        1 => write!(f, "{coef}s")?,
                        _ => write!(f, "{coef}s^{e}")?,
                    }
                }
                if first {
                    write!(f, "0")?;
                }
                Ok(())
            }
            HilbertPolynomial::Bigraded { d, coeffs, .. } => {
                let mut first = true;
                for ((k, l), c) in coeffs {
                    if c.is_zero() {
                        continue;
                    }
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    write!(f, "{c}*C(s-{d}t,{k})*C(t,{l})")?;
                }
                if first {
                    write!(f, "0")?;
                }
                Ok(())
            }
        }
    }
}

/// Numerator N with H(S/J) = N / Π(1 − s^a t^b), by pivot recursion.
pub fn monomial_numerator(ring: &RingSpec, gens: &[Monomial]) -> Laurent {
    let degs: Vec<(i64, i64)> = ring.degrees.iter().map(|d| (d.d1, d.d2)).collect();
    numerator_rec(&degs, minimal_monomials(gens))
}

fn mono_deg(degs: &[(i64, i64)], m: &Monomial) -> (i64, i64) {
    m.0.iter().zip(degs).fold((0, 0), |acc, (&e, d)| (acc.0 + e as i64 * d.0, acc.1 + e as i64 * d.1))
}

fn numerator_rec(degs: &[(i64, i64)], gens: Vec<Monomial>) -> Laurent {
    if gens.is_empty() {
        return Laurent::one();
    }
    if gens.iter().any(|m| m.is_one()) {
        return Laurent::zero();
    }
    let n = degs.len();
    let mut count = vec![0usize; n];
    for m in &gens {
        for (i, &e) in m.0.iter().enumerate() {
            if e > 0 {
                count[i] += 1;
            }
        }
    }
    let (pivot_var, &maxc) = count.iter().enumerate().max_by_key(|&(i, c)| (*c, std::cmp::Reverse(i))).unwrap();
    if maxc <= 1 {
        // pairwise coprime generators
        return gens.iter().fold(Laurent::one(), |acc, m| {
            let (a, b) = mono_deg(degs, m);
            acc.mul_one_minus(a, b)
        });
    }
    // lower median of the positive exponents of the pivot variable
    let mut exps: Vec<u16> = gens.iter().map(|m| m.0[pivot_var]).filter(|&e| e > 0).collect();
    exps.sort_unstable();
    let e = exps[(exps.len() - 1) / 2];
    let p = Monomial::var(n, pivot_var, e);
    // J + (p)
    let mut plus: Vec<Monomial> = gens.iter().filter(|m| !p.divides(m)).cloned().collect();
    plus.push(p.clone());
    let plus = minimal_monomials(&plus);
    // J : p
    let colon: Vec<Monomial> = gens
        .iter()
        .map(|m| {
            let mut q = m.clone();
            q.0[pivot_var] = q.0[pivot_var].saturating_sub(e);
            q
        })
        .collect();
    let colon = minimal_monomials(&colon);
    let (a, b) = (degs[pivot_var].0 * e as i64, degs[pivot_var].1 * e as i64);
    let (left, right) = rayon::join(|| numerator_rec(degs, plus), || numerator_rec(degs, colon));
    left.add(&right.shift(a, b))
}

/// Series of the quotient ring/J for a monomial ideal J.
pub fn hilbert_series_monomial(j: &Ideal) -> Result<HilbertSeries> {
    let ms = j.monomials()?;
    Ok(HilbertSeries::new(
        monomial_numerator(&j.ring, &ms),
        j.ring.degrees.iter().map(|d| (d.d1, d.d2)).collect(),
    ))
}

/// Series of I or ring/I via the initial ideal in the ring's order.
pub fn hilbert_series_ideal(i: &Ideal, of: SeriesOf) -> Result<HilbertSeries> {
    if !i.is_homogeneous() {
        return Err(Error::Inhomogeneous);
    }
    let quotient = if i.is_monomial() {
        hilbert_series_monomial(i)?
    } else {
        let gb = i.gb();
        HilbertSeries::new(monomial_numerator(&i.ring, &gb.leading), i.ring.degrees.iter().map(|d| (d.d1, d.d2)).collect())
    };
    Ok(match of {
        SeriesOf::Quotient => quotient,
        SeriesOf::Ideal => quotient.complement(),
    })
}

/// Hilbert function value at a degree.
pub fn hilbert_function(series: &HilbertSeries, degree: MultiDegree) -> BigInt {
    series.coefficient(degree)
}

/// Dimension, multiplicity and relevant dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimMultReport {
    pub dimension: Option<usize>,
    pub multiplicity: Option<BigInt>,
    pub relevant_dimension: Option<usize>,
    pub hilbert_polynomial_degree: Option<u32>,
}

impl DimMultReport {
    pub fn to_json(&self) -> Value {
        json!({
            "dimension": self.dimension,
            "multiplicity": self.multiplicity.as_ref().map(crate::arith::bigint_json),
            "relevant_dimension": self.relevant_dimension,
            "hilbert_polynomial_degree": self.hilbert_polynomial_degree,
        })
    }
}

pub fn dim_mult(series: &HilbertSeries) -> Result<DimMultReport> {
    let dimension = series.dimension();
    if series.is_bigraded() {
        let p = bigraded_hilbert_polynomial(series)?;
        let deg = p.degree();
        Ok(DimMultReport {
            dimension,
            multiplicity: None,
            relevant_dimension: deg.map(|k| k as usize + 2),
            hilbert_polynomial_degree: deg,
        })
    } else {
        let std = series.den.iter().all(|&f| f == (1, 0));
        let hp = if std { series.hilbert_polynomial().ok() } else { None };
        Ok(DimMultReport {
            dimension,
            multiplicity: if std && dimension.is_some_and(|d| d > 0) { series.multiplicity() } else { None },
            relevant_dimension: None,
            hilbert_polynomial_degree: hp.and_then(|p| p.degree()),
        })
    }
}

/// Bigraded Hilbert polynomial in the basis C(s − d t, k)·C(t, l), fitted on a lattice
/// window and validated on a disjoint one; the window grows until validation passes.
pub fn bigraded_hilbert_polynomial(series: &HilbertSeries) -> Result<HilbertPolynomial> {
    if series.den.iter().any(|f| f.1 > 1) {
        return Err(Error::Unsupported("second degree components above 1".into()));
    }
    let d = series.den.iter().filter(|f| f.1 == 1).map(|f| f.0).max().ok_or_else(|| Error::Unsupported("series is not bigraded".into()))?;
    let nfac = series.den.len() as i64;
    let dmax = (nfac - 2).max(0);
    let mut x0 = (series.num.0.keys().map(|&(a, b)| a - d * b).max().unwrap_or(0)).max(0) + 1;
    let mut t0 = series.num.max_t().max(0) + 1;
    for _round in 0..10 {
        let span = 2 * dmax + 2;
        let imax = x0 + span + d * (t0 + span);
        let table = series.function_table(imax, t0 + span);
        let h = |x: i64, t: i64| -> BigInt { table[(x + d * t) as usize][t as usize].clone() };
        // forward differences on the triangular grid
        let mut c: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
        for k in 0..=dmax {
            for l in 0..=(dmax - k) {
                let mut acc = BigInt::zero();
                for a in 0..=k {
                    for b in 0..=l {
                        let sign = if (k - a + l - b) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                        acc += sign * binomial(k, a) * binomial(l, b) * h(x0 + a, t0 + b);
                    }
                }
                c.insert((k as u32, l as u32), Rational::from_bigint(acc));
            }
        }
        // change of basis C(x − x0, k) = Σ_m C(x, m) C(−x0, k − m)
        let mut coeffs: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
        for (&(k, l), v) in &c {
            if v.is_zero() {
                continue;
            }
            for m in 0..=k {
                for q in 0..=l {
                    let w = binomial(-x0, (k - m) as i64) * binomial(-t0, (l - q) as i64);
                    let e = coeffs.entry((m, q)).or_insert_with(Rational::zero);
                    *e = e.add(&v.mul(&Rational::from_bigint(w)));
                }
            }
        }
        coeffs.retain(|_, v| !v.is_zero());
        let poly = HilbertPolynomial::Bigraded { d, coeffs, x0, t0 };
        // validation window disjoint from the fitting grid
        let ok = (0..=dmax + 1).all(|a| {
            (0..=dmax + 1).all(|b| {
                let (x, t) = (x0 + dmax + 1 + a, t0 + b);
                let (x2, t2) = (x0 + a, t0 + dmax + 1 + b);
                poly.eval(x + d * t, t) == Rational::from_bigint(h(x, t))
                    && poly.eval(x2 + d * t2, t2) == Rational::from_bigint(h(x2, t2))
            })
        });
        if ok {
            return Ok(poly);
        }
        x0 = 2 * x0 + 1;
        t0 = 2 * t0 + 1;
    }
    Err(Error::Window("bigraded Hilbert polynomial did not stabilize on the searched windows".into()))
}

/// Brute-force count of monomials of degree `deg` outside the monomial ideal (test oracle).
pub fn count_standard_monomials(ring: &RingSpec, gens: &[Monomial], deg: MultiDegree) -> usize {
    crate::poly::monomials_of_degree(ring, deg).iter().filter(|m| !gens.iter().any(|g| g.divides(m))).count()
}

/// Convert a BigInt-valued coefficient vector to i64 for display (panics if out of range).
pub fn to_i64s(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| x.to_i64().expect("coefficient out of range")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Field;
    use crate::poly::{RingSpec, TermOrder};
    use proptest::prelude::*;

    fn cubic() -> Ideal {
        let r = RingSpec::polynomial_ring(4);
        Ideal::parse(&r, &["X1*X4 - X2*X3", "X2^2 - X1*X3", "X3^2 - X2*X4"]).unwrap()
    }

    #[test]
    fn zero_ideal_series() {
        let r = RingSpec::standard(Field::Rational, &["X", "Y"]);
        let s = hilbert_series_ideal(&Ideal::zero(&r), SeriesOf::Quotient).unwrap();
        assert_eq!(s.num, Laurent::one());
        assert_eq!(s.den, vec![(1, 0), (1, 0)]);
    }

    #[test]
    fn square_of_maximal_ideal() {
        let r = RingSpec::standard(Field::Rational, &["X", "Y"]);
        let j = Ideal::parse(&r, &["X^2", "X*Y", "Y^2"]).unwrap();
        let s = hilbert_series_monomial(&j).unwrap();
        assert_eq!(s.num, Laurent::from_terms(&[(1, 0, 0), (-3, 2, 0), (2, 3, 0)]));
        assert_eq!(to_i64s(&s.coefficients(4)), vec![1, 2, 0, 0, 0]);
    }

    #[test]
    fn free_bigraded_algebra() {
        let r = RingSpec::new(
            Field::Rational,
            vec!["X".into(), "Y".into()],
            vec![MultiDegree::new(1, 0), MultiDegree::new(2, 1)],
            TermOrder::degrevlex(),
        )
        .unwrap();
        let s = hilbert_series_ideal(&Ideal::zero(&r), SeriesOf::Quotient).unwrap();
        assert_eq!(s.to_string(), "(1)/((1-s)*(1-s^2t))");
    }

    #[test]
    fn twisted_cubic_series() {
        let i = cubic();
        let s = hilbert_series_ideal(&i, SeriesOf::Ideal).unwrap();
        assert_eq!(s.num, Laurent::from_terms(&[(3, 2, 0), (-2, 3, 0)]));
        let q = hilbert_series_ideal(&i, SeriesOf::Quotient).unwrap();
        assert_eq!(q.hilbert_polynomial().unwrap().to_string(), "3s+1");
        let dm = dim_mult(&q).unwrap();
        assert_eq!(dm.dimension, Some(2));
        assert_eq!(dm.multiplicity, Some(BigInt::from(3)));
        let q2 = hilbert_series_ideal(&i.power(2), SeriesOf::Quotient).unwrap();
        assert_eq!(q2.hilbert_polynomial().unwrap().to_string(), "9s-7");
        let s2 = hilbert_series_ideal(&i.power(2), SeriesOf::Ideal).unwrap();
        assert_eq!(hilbert_function(&s2, MultiDegree::new(5, 0)), BigInt::from(18));
        assert_eq!(hilbert_function(&s2, MultiDegree::new(3, 0)), BigInt::zero());
    }

    #[test]
    fn unit_ideal_quotient_is_zero() {
        let r = RingSpec::polynomial_ring(3);
        let s = hilbert_series_ideal(&Ideal::unit(&r), SeriesOf::Quotient).unwrap();
        assert!(s.num.is_zero());
    }

    #[test]
    fn polynomial_ring_values() {
        let r = RingSpec::polynomial_ring(4);
        let s = HilbertSeries::of_ring(&r);
        assert_eq!(hilbert_function(&s, MultiDegree::new(5, 0)), BigInt::from(56));
        let p = s.hilbert_polynomial().unwrap();
        assert_eq!(p, HilbertPolynomial::Graded { coeffs: vec![Rational::zero(), Rational::zero(), Rational::zero(), Rational::one()], threshold: 0 });
    }

    #[test]
    fn artinian_dimension_zero() {
        let r = RingSpec::standard(Field::Rational, &["X"]);
        let j = Ideal::parse(&r, &["X^4"]).unwrap();
        let s = hilbert_series_monomial(&j).unwrap();
        assert_eq!(s.dimension(), Some(0));
        assert!(s.hilbert_polynomial().unwrap().is_zero());
    }

    #[test]
    fn json_roundtrip() {
        let s = hilbert_series_ideal(&cubic(), SeriesOf::Ideal).unwrap();
        let back = HilbertSeries::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        assert_eq!(s.to_json(), serde_json::json!({"num": [[3, 2, 0], [-2, 3, 0]], "den": [[1, 0, 4]]}));
    }

    #[test]
    fn series_invariant_under_initial_ideal() {
        let i = cubic();
        for o in [TermOrder::lex(), TermOrder::deglex(), TermOrder::degrevlex()] {
            let init = i.initial_ideal(&o);
            assert_eq!(
                hilbert_series_monomial(&init).unwrap(),
                hilbert_series_ideal(&i, SeriesOf::Quotient).unwrap()
            );
        }
    }

    fn arb_monomial_ideal() -> impl Strategy<Value = (usize, Vec<Vec<u16>>)> {
        (2usize..=5).prop_flat_map(|n| (Just(n), prop::collection::vec(prop::collection::vec(0u16..4, n), 1..7)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn series_matches_enumeration((n, gens) in arb_monomial_ideal()) {
            let r = RingSpec::polynomial_ring(n);
            let ms: Vec<Monomial> = gens.iter().map(|g| Monomial::from_exps(g)).collect();
            let s = HilbertSeries::new(monomial_numerator(&r, &ms), vec![(1, 0); n]);
            let coeffs = s.coefficients(12);
            for q in 0..=12 {
                let brute = count_standard_monomials(&r, &ms, MultiDegree::new(q, 0));
                prop_assert_eq!(coeffs[q as usize].clone(), BigInt::from(brute));
            }
        }
    }
}
