//! Exact scalar arithmetic: arbitrary-precision rationals and prime fields.
//!
//! A [`Ring`] is the arithmetic context (the rationals, or `F_p` for a prime
//! `p < 2^31`); a [`Scalar`] is an element of one of those rings.  All
//! operations go through the ring so that prime-field elements can be stored
//! as bare residues.  Residues are kept in `0..p`; since `p < 2^31`, products
//! of residues fit in `u64` without overflow.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Largest allowed prime-field modulus (exclusive): primes must be `< 2^31`.
pub const MAX_PRIME: u64 = 1 << 31;

/// Arithmetic context: exact rationals, or the prime field `F_p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Ring {
    /// Arbitrary-precision rational numbers.
    Rat,
    /// The prime field `F_p`; the modulus is checked prime on construction.
    Fp(u64),
}

/// An element of a [`Ring`].  Prime-field values store the canonical residue
/// in `0..p`; the modulus lives in the ring, not the element.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Scalar {
    Rat(BigRational),
    Fp(u64),
}

/// Trial-division primality test; sufficient for moduli below `2^31`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl Ring {
    /// The prime field `F_p`.  Panics unless `p` is a prime below `2^31`.
    pub fn fp(p: u64) -> Ring {
        assert!(p < MAX_PRIME, "prime-field modulus must be below 2^31");
        assert!(is_prime(p), "modulus {p} is not prime");
        Ring::Fp(p)
    }

    /// The characteristic: 0 for the rationals, `p` for `F_p`.
    pub fn characteristic(&self) -> u64 {
        match self {
            Ring::Rat => 0,
            Ring::Fp(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Ring::Rat => Scalar::Rat(BigRational::zero()),
            Ring::Fp(_) => Scalar::Fp(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Ring::Rat => Scalar::Rat(BigRational::one()),
            Ring::Fp(_) => Scalar::Fp(1),
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Ring::Rat => Scalar::Rat(BigRational::from(BigInt::from(n))),
            Ring::Fp(p) => {
                let r = n.rem_euclid(*p as i64) as u64;
                Scalar::Fp(r)
            }
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            Ring::Rat => Scalar::Rat(BigRational::from(n.clone())),
            Ring::Fp(p) => {
                let r = n.mod_floor(&BigInt::from(*p));
                Scalar::Fp(u64::try_from(r).expect("reduced residue fits u64"))
            }
        }
    }

    pub fn from_rational(&self, r: &BigRational) -> Scalar {
        match self {
            Ring::Rat => Scalar::Rat(r.clone()),
            Ring::Fp(_) => {
                let num = self.from_bigint(r.numer());
                let den = self.from_bigint(r.denom());
                self.div(&num, &den)
            }
        }
    }

    fn modulus(&self) -> u64 {
        match self {
            Ring::Fp(p) => *p,
            Ring::Rat => unreachable!("rational ring has no modulus"),
        }
    }

    /// Panics when a scalar belongs to the other scalar kind; rings of two
    /// different primes produce residues that are simply interpreted in this
    /// ring, so callers must not mix prime fields.
    fn check(&self, a: &Scalar) {
        match (self, a) {
            (Ring::Rat, Scalar::Rat(_)) | (Ring::Fp(_), Scalar::Fp(_)) => {}
            _ => panic!("scalar {a:?} does not belong to ring {self:?}"),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.check(a);
        self.check(b);
        match (a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp((x + y) % self.modulus()),
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.check(a);
        self.check(b);
        match (a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x - y),
            (Scalar::Fp(x), Scalar::Fp(y)) => {
                let p = self.modulus();
                Scalar::Fp((x + p - y) % p)
            }
            _ => unreachable!(),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.check(a);
        self.check(b);
        match (a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp(x * y % self.modulus()),
            _ => unreachable!(),
        }
    }

    /// Multiplicative inverse; `None` for 0.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        self.check(a);
        if a.is_zero() {
            return None;
        }
        match a {
            Scalar::Rat(x) => Some(Scalar::Rat(x.recip())),
            Scalar::Fp(x) => {
                let p = self.modulus();
                // Fermat: x^(p-2) is the inverse of x in F_p.
                Some(Scalar::Fp(pow_mod(*x, p - 2, p)))
            }
        }
    }

    /// Division; panics on a zero divisor (callers validate user input).
    pub fn div(&self, a: &Scalar, b: &Scalar) -> Scalar {
        let inv = self.inv(b).expect("division by zero");
        self.mul(a, &inv)
    }

    /// `a^e` for a nonnegative exponent, by binary exponentiation.
    pub fn pow(&self, a: &Scalar, e: u64) -> Scalar {
        let mut base = a.clone();
        let mut e = e;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `a^e` for any integer exponent; negative exponents require a unit.
    pub fn pow_i64(&self, a: &Scalar, e: i64) -> Scalar {
        if e >= 0 {
            self.pow(a, e as u64)
        } else {
            let inv = self.inv(a).expect("negative power of a non-unit");
            self.pow(&inv, (-e) as u64)
        }
    }

    /// Parses an integer (`-3`) or a rational literal (`5/2`), reducing into
    /// the ring.  Rejects denominators that vanish in a prime field.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar, String> {
        let s = s.trim();
        let (num_str, den_str) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (s, None),
        };
        let num: BigInt = num_str
            .parse()
            .map_err(|_| format!("bad integer `{num_str}`"))?;
        let num = self.from_bigint(&num);
        match den_str {
            None => Ok(num),
            Some(d) => {
                let den: BigInt = d.parse().map_err(|_| format!("bad integer `{d}`"))?;
                let den = self.from_bigint(&den);
                if den.is_zero() {
                    return Err(format!("zero denominator in `{s}`"));
                }
                Ok(self.div(&num, &den))
            }
        }
    }
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(x) => x.is_zero(),
            Scalar::Fp(x) => *x == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(x) => x.is_one(),
            Scalar::Fp(x) => *x == 1,
        }
    }

    /// The underlying rational; panics on prime-field scalars.
    pub fn as_rat(&self) -> &BigRational {
        match self {
            Scalar::Rat(x) => x,
            Scalar::Fp(_) => panic!("expected a rational scalar"),
        }
    }

    /// The canonical residue in `0..p`; panics on rational scalars.
    pub fn as_fp(&self) -> u64 {
        match self {
            Scalar::Fp(x) => *x,
            Scalar::Rat(_) => panic!("expected a prime-field scalar"),
        }
    }

    /// For rationals with denominator 1, the integer value.
    pub fn to_bigint(&self) -> Option<BigInt> {
        match self {
            Scalar::Rat(x) if x.denom().is_one() => Some(x.numer().clone()),
            Scalar::Fp(x) => Some(BigInt::from(*x)),
            _ => None,
        }
    }

    /// Whether the scalar prints with a leading minus sign.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rat(x) => x.is_negative(),
            Scalar::Fp(_) => false,
        }
    }

    /// The scalar with any leading minus removed (prime-field values are
    /// already canonical residues).
    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Rat(x) => Scalar::Rat(x.abs()),
            Scalar::Fp(x) => Scalar::Fp(*x),
        }
    }
}

impl fmt::Display for Scalar {
    /// `3`, `-5/2` for rationals; the canonical residue for `F_p`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(x) => {
                if x.denom().is_one() {
                    write!(f, "{}", x.numer())
                } else {
                    write!(f, "{}/{}", x.numer(), x.denom())
                }
            }
            Scalar::Fp(x) => write!(f, "{x}"),
        }
    }
}

/// `b^e mod m` for `m < 2^31` (products fit in `u64`).
pub fn pow_mod(b: u64, e: u64, m: u64) -> u64 {
    let mut base = b % m;
    let mut e = e;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc
}
