//! Scalar arithmetic over the supported coefficient rings: the integers, the
//! rationals, and prime fields of machine-word order.
//!
//! Scalars are passive data; all arithmetic goes through [`RingSpec`] so that a
//! matrix knows exactly which ring its entries live in and mixed-ring operations
//! are impossible by construction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

/// Identifies a coefficient ring.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum RingSpec {
    Integers,
    Rationals,
    /// 𝔽_p for a prime p that fits in a machine word.
    PrimeField(u64),
}

/// A single matrix entry. The variant must match the ambient [`RingSpec`];
/// constructors and arithmetic enforce this.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
    Fp(u64),
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("cannot interpret `{0}` as an element of {1}")]
    BadScalar(String, String),
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "Z"),
            RingSpec::Rationals => write!(f, "Q"),
            RingSpec::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

/// Deterministic Miller–Rabin for u64 moduli.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

impl RingSpec {
    /// Checks that the spec denotes a legal ring (prime modulus for 𝔽_p).
    pub fn validate(self) -> Result<(), RingError> {
        match self {
            RingSpec::PrimeField(p) if !is_prime_u64(p) => Err(RingError::NotPrime(p)),
            _ => Ok(()),
        }
    }

    pub fn is_field(self) -> bool {
        !matches!(self, RingSpec::Integers)
    }

    pub fn zero(self) -> Scalar {
        match self {
            RingSpec::Integers => Scalar::Int(BigInt::zero()),
            RingSpec::Rationals => Scalar::Rat(BigRational::zero()),
            RingSpec::PrimeField(_) => Scalar::Fp(0),
        }
    }

    pub fn one(self) -> Scalar {
        match self {
            RingSpec::Integers => Scalar::Int(BigInt::one()),
            RingSpec::Rationals => Scalar::Rat(BigRational::one()),
            RingSpec::PrimeField(_) => Scalar::Fp(1),
        }
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            RingSpec::Integers => Scalar::Int(BigInt::from(n)),
            RingSpec::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            RingSpec::PrimeField(p) => {
                let r = n.rem_euclid(p as i64 as i64);
                // rem_euclid on i64 only works when p fits; reduce via BigInt otherwise.
                if p <= i64::MAX as u64 {
                    Scalar::Fp(r as u64 % p)
                } else {
                    let m = BigInt::from(n).mod_floor(&BigInt::from(p));
                    Scalar::Fp(u64::try_from(m).expect("reduced residue fits"))
                }
            }
        }
    }

    pub fn from_bigint(self, n: &BigInt) -> Scalar {
        match self {
            RingSpec::Integers => Scalar::Int(n.clone()),
            RingSpec::Rationals => Scalar::Rat(BigRational::from_integer(n.clone())),
            RingSpec::PrimeField(p) => {
                let m = n.mod_floor(&BigInt::from(p));
                Scalar::Fp(u64::try_from(m).expect("reduced residue fits"))
            }
        }
    }

    fn check(self, s: &Scalar) -> &Scalar {
        debug_assert!(
            matches!(
                (self, s),
                (RingSpec::Integers, Scalar::Int(_))
                    | (RingSpec::Rationals, Scalar::Rat(_))
                    | (RingSpec::PrimeField(_), Scalar::Fp(_))
            ),
            "scalar {s:?} does not belong to ring {self}"
        );
        s
    }

    pub fn add(self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self.check(a), self.check(b)) {
            (Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x + y),
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (Scalar::Fp(x), Scalar::Fp(y)) => {
                let p = self.modulus();
                Scalar::Fp(((*x as u128 + *y as u128) % p as u128) as u64)
            }
            _ => unreachable!("mixed scalar variants"),
        }
    }

    pub fn sub(self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self.check(a), self.check(b)) {
            (Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x * y),
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp(mul_mod(*x, *y, self.modulus())),
            _ => unreachable!("mixed scalar variants"),
        }
    }

    pub fn neg(self, a: &Scalar) -> Scalar {
        match self.check(a) {
            Scalar::Int(x) => Scalar::Int(-x),
            Scalar::Rat(x) => Scalar::Rat(-x),
            Scalar::Fp(x) => {
                let p = self.modulus();
                Scalar::Fp(if *x == 0 { 0 } else { p - *x })
            }
        }
    }

    pub fn is_zero(self, a: &Scalar) -> bool {
        match self.check(a) {
            Scalar::Int(x) => x.is_zero(),
            Scalar::Rat(x) => x.is_zero(),
            Scalar::Fp(x) => *x == 0,
        }
    }

    pub fn is_one(self, a: &Scalar) -> bool {
        match self.check(a) {
            Scalar::Int(x) => x.is_one(),
            Scalar::Rat(x) => x.is_one(),
            Scalar::Fp(x) => *x == 1,
        }
    }

    /// Multiplicative inverse, when the element is a unit.
    pub fn inv(self, a: &Scalar) -> Option<Scalar> {
        match self.check(a) {
            Scalar::Int(x) => {
                if x.is_one() || (-x).is_one() {
                    Some(Scalar::Int(x.clone()))
                } else {
                    None
                }
            }
            Scalar::Rat(x) => {
                if x.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(x.recip()))
                }
            }
            Scalar::Fp(x) => {
                if *x == 0 {
                    None
                } else {
                    let p = self.modulus();
                    Some(Scalar::Fp(pow_mod(*x, p - 2, p)))
                }
            }
        }
    }

    /// Exact division a / b, when b divides a in the ring.
    pub fn div_exact(self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        match (self.check(a), self.check(b)) {
            (Scalar::Int(x), Scalar::Int(y)) => {
                if y.is_zero() {
                    return if x.is_zero() { Some(Scalar::Int(BigInt::zero())) } else { None };
                }
                let (q, r) = x.div_rem(y);
                if r.is_zero() {
                    Some(Scalar::Int(q))
                } else {
                    None
                }
            }
            _ => {
                if self.is_zero(b) {
                    if self.is_zero(a) {
                        Some(self.zero())
                    } else {
                        None
                    }
                } else {
                    Some(self.mul(a, &self.inv(b).expect("nonzero field element")))
                }
            }
        }
    }

    fn modulus(self) -> u64 {
        match self {
            RingSpec::PrimeField(p) => p,
            _ => panic!("modulus only defined for prime fields"),
        }
    }

    /// Parses the wire representation of a scalar: a decimal integer, or `a/b`
    /// over the rationals, or a reduced residue over 𝔽_p.
    pub fn parse_scalar(self, text: &str) -> Result<Scalar, RingError> {
        let bad = || RingError::BadScalar(text.to_owned(), self.to_string());
        match self {
            RingSpec::Integers => BigInt::from_str(text.trim()).map(Scalar::Int).map_err(|_| bad()),
            RingSpec::Rationals => {
                let t = text.trim();
                if let Some((num, den)) = t.split_once('/') {
                    let n = BigInt::from_str(num.trim()).map_err(|_| bad())?;
                    let d = BigInt::from_str(den.trim()).map_err(|_| bad())?;
                    if d.is_zero() {
                        return Err(bad());
                    }
                    Ok(Scalar::Rat(BigRational::new(n, d)))
                } else {
                    BigInt::from_str(t)
                        .map(|n| Scalar::Rat(BigRational::from_integer(n)))
                        .map_err(|_| bad())
                }
            }
            RingSpec::PrimeField(_) => BigInt::from_str(text.trim())
                .map(|n| self.from_bigint(&n))
                .map_err(|_| bad()),
        }
    }

    /// Canonical wire representation (inverse to [`RingSpec::parse_scalar`]).
    pub fn format_scalar(self, s: &Scalar) -> String {
        match self.check(s) {
            Scalar::Int(x) => x.to_string(),
            Scalar::Rat(x) => {
                if x.denom().is_one() {
                    x.numer().to_string()
                } else {
                    format!("{}/{}", x.numer(), x.denom())
                }
            }
            Scalar::Fp(x) => x.to_string(),
        }
    }
}

impl Scalar {
    /// The integer magnitude used for pivot selection over ℤ.
    pub fn int_abs(&self) -> BigInt {
        match self {
            Scalar::Int(x) => x.abs(),
            _ => panic!("int_abs on non-integer scalar"),
        }
    }

    pub fn as_int(&self) -> &BigInt {
        match self {
            Scalar::Int(x) => x,
            _ => panic!("as_int on non-integer scalar"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_of_small_and_word_sized_moduli() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(7));
        assert!(is_prime_u64(65537));
        assert!(is_prime_u64((1 << 61) - 1));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(91));
        assert!(!is_prime_u64((1 << 61) - 3));
    }

    #[test]
    fn field_inverse_round_trips() {
        let f7 = RingSpec::PrimeField(7);
        for x in 1..7u64 {
            let inv = f7.inv(&Scalar::Fp(x)).expect("unit");
            assert!(f7.is_one(&f7.mul(&Scalar::Fp(x), &inv)));
        }
        let q = RingSpec::Rationals;
        let half = q.parse_scalar("1/2").expect("parses");
        assert!(q.is_one(&q.mul(&half, &q.inv(&half).expect("unit"))));
    }

    #[test]
    fn exact_division_over_the_integers() {
        let z = RingSpec::Integers;
        let four = z.from_i64(4);
        let two = z.from_i64(2);
        let three = z.from_i64(3);
        assert_eq!(z.div_exact(&four, &two), Some(two.clone()));
        assert_eq!(z.div_exact(&three, &two), None);
    }
}
