//! Exact sparse linear algebra: incremental echelon forms and ranks.

use crate::arith::FieldElement;
use crate::poly::{Monomial, Polynomial, Ring, Term};
use std::collections::HashMap;
use std::hash::Hash;

/// Incremental row-echelon form of sparse vectors indexed by `K`;
/// the pivot of a row is its smallest key.
#[derive(Clone, Debug)]
pub struct SparseEchelon<K: Ord + Hash + Clone> {
    rows: Vec<Vec<(K, FieldElement)>>,
    pivots: HashMap<K, usize>,
}

impl<K: Ord + Hash + Clone> Default for SparseEchelon<K> {
    fn default() -> Self {
        SparseEchelon { rows: Vec::new(), pivots: HashMap::new() }
    }
}

fn axpy<K: Ord + Clone>(a: &[(K, FieldElement)], c: &FieldElement, b: &[(K, FieldElement)]) -> Vec<(K, FieldElement)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => x.0.cmp(&y.0),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, _) => std::cmp::Ordering::Greater,
        };
        match ord {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((b[j].0.clone(), b[j].1.mul(c)));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let s = a[i].1.add(&b[j].1.mul(c));
                if !s.is_zero() {
                    out.push((a[i].0.clone(), s));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

impl<K: Ord + Hash + Clone> SparseEchelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce a sorted sparse vector against the current rows.
    pub fn reduce(&self, mut v: Vec<(K, FieldElement)>) -> Vec<(K, FieldElement)> {
        let mut idx = 0;
        while idx < v.len() {
            match self.pivots.get(&v[idx].0) {
                Some(&r) => {
                    let row = &self.rows[r];
                    let c = v[idx].1.neg();
                    let tail = axpy(&v[idx + 1..], &c, &row[1..]);
                    v.truncate(idx);
                    v.extend(tail);
                }
                None => idx += 1,
            }
        }
        v
    }

    /// Insert a vector (any order, zero entries allowed); true when it increased the rank.
    pub fn insert(&mut self, mut v: Vec<(K, FieldElement)>) -> bool {
        v.retain(|e| !e.1.is_zero());
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let v = self.reduce(v);
        if v.is_empty() {
            return false;
        }
        let inv = v[0].1.inv();
        let v: Vec<(K, FieldElement)> = v.into_iter().map(|(k, c)| (k, c.mul(&inv))).collect();
        self.pivots.insert(v[0].0.clone(), self.rows.len());
        self.rows.push(v);
        true
    }

    pub fn contains(&self, mut v: Vec<(K, FieldElement)>) -> bool {
        v.retain(|e| !e.1.is_zero());
        v.sort_by(|a, b| a.0.cmp(&b.0));
        self.reduce(v).is_empty()
    }
}

/// Rank of a sparse matrix given by rows.
pub fn rank<K: Ord + Hash + Clone>(rows: impl IntoIterator<Item = Vec<(K, FieldElement)>>) -> usize {
    let mut e = SparseEchelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Linear span of polynomials, echeloned on leading monomials in the ring order.
#[derive(Clone, Debug)]
pub struct LinearSpan {
    ring: Ring,
    rows: Vec<Polynomial>,
    pivots: HashMap<Monomial, usize>,
}

impl LinearSpan {
    pub fn new(ring: &Ring) -> Self {
        LinearSpan { ring: ring.clone(), rows: Vec::new(), pivots: HashMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        let mut terms: Vec<Term> = p.terms.clone();
        let mut idx = 0;
        while idx < terms.len() {
            match self.pivots.get(&terms[idx].mono) {
                Some(&r) => {
                    let row = &self.rows[r];
                    let c = terms[idx].coeff.neg();
                    let rest = Polynomial { ring: self.ring.clone(), terms: terms[idx + 1..].to_vec() };
                    let tail = Polynomial { ring: self.ring.clone(), terms: row.terms[1..].to_vec() };
                    let merged = rest.add_scaled(&c, &Monomial::one(self.ring.nvars()), &tail);
                    terms.truncate(idx);
                    terms.extend(merged.terms);
                }
                None => idx += 1,
            }
        }
        Polynomial { ring: self.ring.clone(), terms }
    }

    /// Insert; true when `p` was independent of the span.
    pub fn insert(&mut self, p: Polynomial) -> bool {
        let r = self.reduce(&p);
        if r.is_zero() {
            return false;
        }
        let r = r.monic();
        self.pivots.insert(r.lm().unwrap().clone(), self.rows.len());
        self.rows.push(r);
        true
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.reduce(p).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Field;

    fn q(n: i64) -> FieldElement {
        Field::Rational.from_int(n)
    }

    #[test]
    fn rank_of_small_matrix() {
        let rows = vec![
            vec![(0, q(1)), (1, q(2)), (2, q(3))],
            vec![(0, q(2)), (1, q(4)), (2, q(6))],
            vec![(1, q(1)), (2, q(1))],
        ];
        assert_eq!(rank(rows), 2);
    }

    #[test]
    fn rank_matches_dense_elimination_mod_p() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let f = Field::Prime(101);
            let rows: Vec<Vec<(usize, FieldElement)>> = (0..6)
                .map(|_| {
                    let mut row = Vec::new();
                    for c in 0..5 {
                        if rng.gen_bool(0.5) {
                            row.push((c, f.from_int(rng.gen_range(0..101))));
                        }
                    }
                    row
                })
                .collect();
            let mut dense = vec![vec![0i64; 5]; 6];
            for (i, r) in rows.iter().enumerate() {
                for (c, v) in r {
                    if let FieldElement::Fp(x, _) = v {
                        dense[i][*c] = *x as i64;
                    }
                }
            }
            assert_eq!(rank(rows), dense_rank_mod(dense, 101));
        }
    }

    fn dense_rank_mod(mut m: Vec<Vec<i64>>, p: i64) -> usize {
        let (rows, cols) = (m.len(), m[0].len());
        let mut r = 0;
        for c in 0..cols {
            let Some(piv) = (r..rows).find(|&i| m[i][c] % p != 0) else { continue };
            m.swap(r, piv);
            let inv = crate::arith::inv_mod((m[r][c].rem_euclid(p)) as u32, p as u32) as i64;
            for i in 0..rows {
                if i != r && m[i][c] % p != 0 {
                    let f = m[i][c] * inv % p;
                    for k in 0..cols {
                        m[i][k] = (m[i][k] - f * m[r][k]).rem_euclid(p);
                    }
                }
            }
            r += 1;
        }
        r
    }
}
