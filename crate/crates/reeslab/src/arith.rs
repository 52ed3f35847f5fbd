//! Exact field arithmetic: rationals with a machine-word fast path, and prime fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// Arbitrary-precision rational in lowest terms with positive denominator.
///
/// Values whose numerator and denominator fit in `i64` stay on the small path;
/// intermediate products use `i128`, so the common case never allocates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Rational {
    Small(i64, i64),
    Big(Box<BigRational>),
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    pub fn zero() -> Self {
        Rational::Small(0, 1)
    }

    pub fn one() -> Self {
        Rational::Small(1, 1)
    }

    pub fn from_int(n: i64) -> Self {
        Rational::Small(n, 1)
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_big(BigRational::from_integer(n))
    }

    /// `num/den`, reduced. Panics on zero denominator.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        let g = gcd_i128(num, den);
        let (mut n, mut d) = if g > 1 { (num / g, den / g) } else { (num, den) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        if n == 0 {
            return Rational::Small(0, 1);
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) if n != i64::MIN => Rational::Small(n, d),
            _ => Rational::Big(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))),
        }
    }

    pub fn from_big(r: BigRational) -> Self {
        // BigRational::new reduces; new_raw inputs are always reduced by callers.
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN => Rational::Small(n, d),
            _ => Rational::Big(Box::new(r)),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rational::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rational::Small(n, _) => BigInt::from(*n),
            Rational::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rational::Small(_, d) => BigInt::from(*d),
            Rational::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rational::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Rational::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rational::Small(_, d) => *d == 1,
            Rational::Big(b) => b.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rational::Small(n, _) => *n < 0,
            Rational::Big(b) => b.is_negative(),
        }
    }

    /// Integer value when the rational is integral and fits in `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Rational::Small(n, 1) => Some(*n),
            Rational::Small(..) => None,
            Rational::Big(b) if b.is_integer() => b.numer().to_i64(),
            Rational::Big(_) => None,
        }
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        if self.is_integer() {
            Some(self.numer())
        } else {
            None
        }
    }

    pub fn add(&self, o: &Rational) -> Rational {
        match (self, o) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    if let Some(s) = a.checked_add(*c) {
                        if s != i64::MIN {
                            return Rational::Small(s, 1);
                        }
                    }
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                if b == d {
                    return Self::from_i128(a + c, b);
                }
                match (a.checked_mul(d), c.checked_mul(b), b.checked_mul(d)) {
                    (Some(x), Some(y), Some(z)) => match x.checked_add(y) {
                        Some(s) => Self::from_i128(s, z),
                        None => Self::from_big(self.to_big() + o.to_big()),
                    },
                    _ => Self::from_big(self.to_big() + o.to_big()),
                }
            }
            _ => Self::from_big(self.to_big() + o.to_big()),
        }
    }

    pub fn neg(&self) -> Rational {
        match self {
            Rational::Small(n, d) => Rational::Small(-n, *d),
            Rational::Big(b) => Self::from_big(-(**b).clone()),
        }
    }

    pub fn sub(&self, o: &Rational) -> Rational {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Rational) -> Rational {
        match (self, o) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    if let Some(p) = a.checked_mul(*c) {
                        if p != i64::MIN {
                            return Rational::Small(p, 1);
                        }
                    }
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                match (a.checked_mul(c), b.checked_mul(d)) {
                    (Some(x), Some(y)) => Self::from_i128(x, y),
                    _ => Self::from_big(self.to_big() * o.to_big()),
                }
            }
            _ => Self::from_big(self.to_big() * o.to_big()),
        }
    }

    pub fn inv(&self) -> Rational {
        match self {
            Rational::Small(n, d) => {
                assert!(*n != 0, "division by zero");
                if *n < 0 {
                    Rational::Small(-d, -n)
                } else {
                    Rational::Small(*d, *n)
                }
            }
            Rational::Big(b) => Self::from_big(b.recip()),
        }
    }

    pub fn div(&self, o: &Rational) -> Rational {
        self.mul(&o.inv())
    }

    /// Residue modulo `p`; `None` when the denominator vanishes mod `p`.
    pub fn mod_p(&self, p: u32) -> Option<u32> {
        let pb = BigInt::from(p);
        let n = self.numer().mod_floor(&pb).to_u32()?;
        let d = self.denom().mod_floor(&pb).to_u32()?;
        if d == 0 {
            return None;
        }
        Some(((n as u64 * inv_mod(d, p) as u64) % p as u64) as u32)
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128)))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(n, 1) => write!(f, "{n}"),
            Rational::Small(n, d) => write!(f, "{n}/{d}"),
            Rational::Big(b) => {
                if b.is_integer() {
                    write!(f, "{}", b.numer())
                } else {
                    write!(f, "{}/{}", b.numer(), b.denom())
                }
            }
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for Rational {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let parse = |t: &str| t.trim().parse::<BigInt>().map_err(|e| format!("bad integer {t:?}: {e}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let d = parse(d)?;
                if d.is_zero() {
                    return Err("zero denominator".into());
                }
                Ok(Rational::from_big(BigRational::new(parse(n)?, d)))
            }
            None => Ok(Rational::from_bigint(parse(s)?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_bigint(n)
    }
}

/// Modular inverse of a nonzero residue modulo a prime.
pub fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut t, mut nt) = (0i64, 1i64);
    let (mut r, mut nr) = (p as i64, a as i64);
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    assert!(r == 1, "{a} is not invertible mod {p}");
    t.rem_euclid(p as i64) as u32
}

/// Primality by trial division; field moduli are small.
pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= p as u64 {
        if p as u64 % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

/// The coefficient field of a ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u32),
}

impl Field {
    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> FieldElement {
        match self {
            Field::Rational => FieldElement::Q(Rational::zero()),
            Field::Prime(p) => FieldElement::Fp(0, *p),
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        match self {
            Field::Rational => FieldElement::Q(Rational::from_int(n)),
            Field::Prime(p) => FieldElement::Fp(n.rem_euclid(*p as i64) as u32, *p),
        }
    }

    /// Embed a rational; fails in characteristic p when the denominator vanishes.
    pub fn from_rational(&self, q: &Rational) -> Option<FieldElement> {
        match self {
            Field::Rational => Some(FieldElement::Q(q.clone())),
            Field::Prime(p) => q.mod_p(*p).map(|v| FieldElement::Fp(v, *p)),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

/// An element of a field: a rational or a residue modulo a prime.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Q(Rational),
    Fp(u32, u32),
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Q(q) => q.is_zero(),
            FieldElement::Fp(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Q(q) => q.is_one(),
            FieldElement::Fp(v, _) => *v == 1,
        }
    }

    pub fn field(&self) -> Field {
        match self {
            FieldElement::Q(_) => Field::Rational,
            FieldElement::Fp(_, p) => Field::Prime(*p),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        match (self, o) {
            (FieldElement::Q(a), FieldElement::Q(b)) => FieldElement::Q(a.add(b)),
            (FieldElement::Fp(a, p), FieldElement::Fp(b, _)) => {
                FieldElement::Fp(((*a as u64 + *b as u64) % *p as u64) as u32, *p)
            }
            _ => panic!("field mismatch"),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        match self {
            FieldElement::Q(a) => FieldElement::Q(a.neg()),
            FieldElement::Fp(a, p) => FieldElement::Fp(if *a == 0 { 0 } else { p - a }, *p),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        match (self, o) {
            (FieldElement::Q(a), FieldElement::Q(b)) => FieldElement::Q(a.mul(b)),
            (FieldElement::Fp(a, p), FieldElement::Fp(b, _)) => {
                FieldElement::Fp(((*a as u64 * *b as u64) % *p as u64) as u32, *p)
            }
            _ => panic!("field mismatch"),
        }
    }

    pub fn inv(&self) -> Self {
        match self {
            FieldElement::Q(a) => FieldElement::Q(a.inv()),
            FieldElement::Fp(a, p) => {
                assert!(*a != 0, "division by zero");
                FieldElement::Fp(inv_mod(*a, *p), *p)
            }
        }
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    /// The rational value (prime-field elements map to their representative in [0, p)).
    pub fn to_rational(&self) -> Rational {
        match self {
            FieldElement::Q(q) => q.clone(),
            FieldElement::Fp(v, _) => Rational::from_int(*v as i64),
        }
    }

    /// True when the textual form needs a leading minus sign.
    pub fn is_negative(&self) -> bool {
        match self {
            FieldElement::Q(q) => q.is_negative(),
            FieldElement::Fp(..) => false,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Q(q) => write!(f, "{q}"),
            FieldElement::Fp(v, _) => write!(f, "{v}"),
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Binomial coefficient C(n, k) for integer n (possibly negative) and k ≥ 0, exactly.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if n >= 0 && k > n {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// C(x, k) for a rational x, as a rational.
pub fn binomial_rational(x: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc.mul(&x.sub(&Rational::from_int(i as i64)));
        acc = acc.div(&Rational::from_int(i as i64 + 1));
    }
    acc
}

/// BigInt to a JSON value: a number when it fits in 53 bits, else a decimal string.
pub fn bigint_json(n: &BigInt) -> serde_json::Value {
    const SAFE: i64 = (1i64 << 53) - 1;
    match n.to_i64() {
        Some(v) if (-SAFE..=SAFE).contains(&v) => serde_json::Value::from(v),
        _ => serde_json::Value::String(n.to_string()),
    }
}
