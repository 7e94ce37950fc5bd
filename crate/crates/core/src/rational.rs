//! Exact rational numbers.
//!
//! Values that fit in `i128` stay on a fast path with checked arithmetic and
//! promote to arbitrary precision on overflow. Results are always demoted back
//! when they fit, so equal values have equal representations and derived
//! `Eq`/`Hash` are sound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Q {
    /// Reduced fraction with positive denominator.
    Small(i128, i128),
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

impl Q {
    pub fn zero() -> Q {
        Q::Small(0, 1)
    }

    pub fn one() -> Q {
        Q::Small(1, 1)
    }

    pub fn int(n: i64) -> Q {
        Q::Small(n as i128, 1)
    }

    /// Builds `n/d`; panics on a zero denominator.
    pub fn new(n: i128, d: i128) -> Q {
        assert!(d != 0, "zero denominator");
        if n == 0 {
            return Q::zero();
        }
        let g = gcd_i128(n, d);
        let (mut n, mut d) = (n / g, d / g);
        if d < 0 {
            match (n.checked_neg(), d.checked_neg()) {
                (Some(a), Some(b)) => {
                    n = a;
                    d = b;
                }
                _ => {
                    return Q::from_big(BigRational::new(BigInt::from(n), BigInt::from(d)));
                }
            }
        }
        Q::Small(n, d)
    }

    pub fn from_big(r: BigRational) -> Q {
        if let (Some(n), Some(d)) = (r.numer().to_i128(), r.denom().to_i128()) {
            // BigRational is already reduced with a positive denominator.
            return Q::Small(n, d);
        }
        Q::Big(Box::new(r))
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Q::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Q::Big(b) => (**b).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Q::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Q::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Q::Small(_, d) => *d == 1,
            Q::Big(b) => b.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Q::Small(n, _) => *n < 0,
            Q::Big(b) => b.is_negative(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Q::Small(n, _) => *n > 0,
            Q::Big(b) => b.is_positive(),
        }
    }

    /// The value as an `i64` when it is an integer in range.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Q::Small(n, 1) => i64::try_from(*n).ok(),
            Q::Small(..) => None,
            Q::Big(b) if b.is_integer() => b.numer().to_i64(),
            Q::Big(_) => None,
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Q::Small(n, _) => BigInt::from(*n),
            Q::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Q::Small(_, d) => BigInt::from(*d),
            Q::Big(b) => b.denom().clone(),
        }
    }

    pub fn abs(&self) -> Q {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Q {
        assert!(!self.is_zero(), "reciprocal of zero");
        match self {
            Q::Small(n, d) => Q::new(*d, *n),
            Q::Big(b) => Q::from_big(b.recip()),
        }
    }

    pub fn pow(&self, e: u32) -> Q {
        let mut acc = Q::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn add_ref(&self, o: &Q) -> Q {
        if let (Q::Small(a, b), Q::Small(c, d)) = (self, o) {
            if *b == 1 && *d == 1 {
                if let Some(s) = a.checked_add(*c) {
                    return Q::Small(s, 1);
                }
            } else {
                let g = gcd_i128(*b, *d);
                let bd = b / g;
                let r = (|| {
                    let n = a.checked_mul(d / g)?.checked_add(c.checked_mul(bd)?)?;
                    let den = bd.checked_mul(*d)?;
                    Some(Q::new(n, den))
                })();
                if let Some(r) = r {
                    return r;
                }
            }
        }
        Q::from_big(self.to_big() + o.to_big())
    }

    fn mul_ref(&self, o: &Q) -> Q {
        if let (Q::Small(a, b), Q::Small(c, d)) = (self, o) {
            if *a == 0 || *c == 0 {
                return Q::zero();
            }
            let g1 = gcd_i128(*a, *d);
            let g2 = gcd_i128(*c, *b);
            let r = (|| {
                let n = (a / g1).checked_mul(c / g2)?;
                let den = (b / g2).checked_mul(d / g1)?;
                Some(Q::Small(n, den))
            })();
            if let Some(r) = r {
                return r;
            }
        }
        Q::from_big(self.to_big() * o.to_big())
    }

    /// Binomial coefficient `C(n, k)` for integer `n` (possibly negative).
    pub fn binomial(n: &Q, k: u32) -> Q {
        let mut acc = Q::one();
        for i in 0..k {
            acc = &(&acc * &(n - &Q::int(i as i64))) / &Q::int(i as i64 + 1);
        }
        acc
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        let b = self.to_big();
        b.floor().to_integer()
    }

    pub fn gcd_num(a: &BigInt, b: &BigInt) -> BigInt {
        a.gcd(b)
    }
}

impl Default for Q {
    fn default() -> Self {
        Q::zero()
    }
}

impl From<i64> for Q {
    fn from(n: i64) -> Q {
        Q::int(n)
    }
}

impl From<i32> for Q {
    fn from(n: i32) -> Q {
        Q::int(n as i64)
    }
}

impl From<BigInt> for Q {
    fn from(n: BigInt) -> Q {
        Q::from_big(BigRational::from_integer(n))
    }
}

impl Zero for Q {
    fn zero() -> Q {
        Q::zero()
    }
    fn is_zero(&self) -> bool {
        Q::is_zero(self)
    }
}

impl One for Q {
    fn one() -> Q {
        Q::one()
    }
}

impl Ord for Q {
    fn cmp(&self, o: &Q) -> Ordering {
        if let (Q::Small(a, b), Q::Small(c, d)) = (self, o) {
            if let (Some(x), Some(y)) = (a.checked_mul(*d), c.checked_mul(*b)) {
                return x.cmp(&y);
            }
        }
        self.to_big().cmp(&o.to_big())
    }
}

impl PartialOrd for Q {
    fn partial_cmp(&self, o: &Q) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a Q> for &'a Q {
            type Output = Q;
            fn $m(self, o: &'a Q) -> Q {
                let f: fn(&Q, &Q) -> Q = $body;
                f(self, o)
            }
        }
        impl $tr<Q> for Q {
            type Output = Q;
            fn $m(self, o: Q) -> Q {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Q> for Q {
            type Output = Q;
            fn $m(self, o: &'a Q) -> Q {
                (&self).$m(o)
            }
        }
    };
}

binop!(Add, add, |a, b| a.add_ref(b));
binop!(Sub, sub, |a, b| a.add_ref(&-b.clone()));
binop!(Mul, mul, |a, b| a.mul_ref(b));
binop!(Div, div, |a, b| a.mul_ref(&b.recip()));

impl Neg for Q {
    type Output = Q;
    fn neg(self) -> Q {
        match self {
            Q::Small(n, d) => match n.checked_neg() {
                Some(m) => Q::Small(m, d),
                None => Q::from_big(-BigRational::new_raw(BigInt::from(n), BigInt::from(d))),
            },
            Q::Big(b) => Q::from_big(-*b),
        }
    }
}

impl Neg for &Q {
    type Output = Q;
    fn neg(self) -> Q {
        -self.clone()
    }
}

impl AddAssign<&Q> for Q {
    fn add_assign(&mut self, o: &Q) {
        *self = self.add_ref(o);
    }
}

impl AddAssign for Q {
    fn add_assign(&mut self, o: Q) {
        *self = self.add_ref(&o);
    }
}

impl SubAssign<&Q> for Q {
    fn sub_assign(&mut self, o: &Q) {
        *self = self.add_ref(&-o);
    }
}

impl MulAssign<&Q> for Q {
    fn mul_assign(&mut self, o: &Q) {
        *self = self.mul_ref(o);
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Q::Small(n, 1) => write!(f, "{n}"),
            Q::Small(n, d) => write!(f, "{n}/{d}"),
            Q::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseQError(String);

impl FromStr for Q {
    type Err = ParseQError;
    fn from_str(s: &str) -> Result<Q, ParseQError> {
        let err = || ParseQError(s.to_string());
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| err())?;
        let d: BigInt = d.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(Q::from_big(BigRational::new(n, d)))
    }
}

/// Serializes as a JSON integer when the value fits in `i64`, otherwise as a
/// decimal string.
pub fn bigint_to_json(n: &BigInt) -> serde_json::Value {
    match n.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(n.to_string()),
    }
}

pub fn bigint_from_json(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(BigInt::from),
        serde_json::Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_arithmetic_matches_bigrational() {
        let vals = [(1, 2), (-3, 4), (5, 1), (0, 1), (7, -3), (-11, 6)];
        for &(a, b) in &vals {
            for &(c, d) in &vals {
                let x = Q::new(a as i128, b as i128);
                let y = Q::new(c as i128, d as i128);
                assert_eq!((&x + &y).to_big(), big(a, b) + big(c, d));
                assert_eq!((&x - &y).to_big(), big(a, b) - big(c, d));
                assert_eq!((&x * &y).to_big(), big(a, b) * big(c, d));
                if c != 0 {
                    assert_eq!((&x / &y).to_big(), big(a, b) / big(c, d));
                }
            }
        }
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let x = Q::new(i128::MAX, 1);
        let y = &x + &x;
        assert!(matches!(y, Q::Big(_)));
        let z = &y - &x;
        assert_eq!(z, x);
        assert!(matches!(z, Q::Small(..)));
    }

    #[test]
    fn canonical_sign_and_parse() {
        assert_eq!(Q::new(2, -4), Q::new(-1, 2));
        assert_eq!("-6/8".parse::<Q>().unwrap(), Q::new(-3, 4));
        assert_eq!(Q::new(-3, 4).to_string(), "-3/4");
        assert!("1/0".parse::<Q>().is_err());
    }

    #[test]
    fn binomial_values() {
        assert_eq!(Q::binomial(&Q::int(5), 2), Q::int(10));
        assert_eq!(Q::binomial(&Q::int(-1), 3), Q::int(-1));
        assert_eq!(Q::binomial(&Q::int(3), 5), Q::zero());
    }
}
