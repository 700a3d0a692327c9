//! Dense univariate polynomials over a [`Ring`], with exact division,
//! gcd, squarefree decomposition, and full factorization over prime fields.
//!
//! Coefficients are stored low degree first with no trailing zeros, so the
//! representation is canonical and `==` is structural equality.

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use std::fmt;

use crate::scalar::{Ring, Scalar};

/// A univariate polynomial with coefficients in `ring`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    ring: Ring,
    /// Coefficient of `x^i` at index `i`; the last entry is nonzero.
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn zero(ring: Ring) -> Poly {
        Poly { ring, coeffs: Vec::new() }
    }

    pub fn one(ring: Ring) -> Poly {
        Poly::constant(ring.one(), ring)
    }

    /// The monomial `x`.
    pub fn x(ring: Ring) -> Poly {
        Poly::monomial(ring.one(), 1, ring)
    }

    pub fn constant(c: Scalar, ring: Ring) -> Poly {
        Poly::from_coeffs(ring, vec![c])
    }

    /// `c * x^e`.
    pub fn monomial(c: Scalar, e: usize, ring: Ring) -> Poly {
        if c.is_zero() {
            return Poly::zero(ring);
        }
        let mut coeffs = vec![ring.zero(); e + 1];
        coeffs[e] = c;
        Poly { ring, coeffs }
    }

    /// Builds from low-to-high coefficients, stripping trailing zeros.
    pub fn from_coeffs(ring: Ring, coeffs: Vec<Scalar>) -> Poly {
        let mut p = Poly { ring, coeffs };
        p.normalize();
        p
    }

    /// Convenience constructor from small integers, low degree first.
    pub fn from_int_coeffs(ring: Ring, coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(ring, coeffs.iter().map(|&c| ring.from_i64(c)).collect())
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Scalar::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn leading_coeff(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.ring.add(&self.coeff(i), &other.coeff(i)))
            .collect();
        Poly::from_coeffs(self.ring, coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.ring.sub(&self.coeff(i), &other.coeff(i)))
            .collect();
        Poly::from_coeffs(self.ring, coeffs)
    }

    pub fn neg(&self) -> Poly {
        Poly::zero(self.ring).sub(self)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.ring);
        }
        let mut coeffs = vec![self.ring.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let prod = self.ring.mul(a, b);
                coeffs[i + j] = self.ring.add(&coeffs[i + j], &prod);
            }
        }
        Poly::from_coeffs(self.ring, coeffs)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        let coeffs = self.coeffs.iter().map(|a| self.ring.mul(a, c)).collect();
        Poly::from_coeffs(self.ring, coeffs)
    }

    /// Multiplies by `x^k`.
    pub fn mul_xk(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.ring.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { ring: self.ring, coeffs }
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut acc = Poly::one(self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Evaluates at a scalar by Horner's rule.
    pub fn eval(&self, at: &Scalar) -> Scalar {
        let mut acc = self.ring.zero();
        for c in self.coeffs.iter().rev() {
            acc = self.ring.add(&self.ring.mul(&acc, at), c);
        }
        acc
    }

    /// `self(other(x))` by Horner's rule.
    pub fn compose(&self, other: &Poly) -> Poly {
        let mut acc = Poly::zero(self.ring);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(other).add(&Poly::constant(c.clone(), self.ring));
        }
        acc
    }

    /// `k`-fold self-composition; `k = 0` gives `x`.
    pub fn compose_iter(&self, k: usize) -> Poly {
        let mut acc = Poly::x(self.ring);
        for _ in 0..k {
            acc = self.compose(&acc);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.ring.mul(c, &self.ring.from_i64(i as i64)))
            .collect();
        Poly::from_coeffs(self.ring, coeffs)
    }

    /// Divides by any nonzero polynomial (field coefficients), returning
    /// `(quotient, remainder)`.  Panics on a zero divisor.
    pub fn divrem(&self, divisor: &Poly) -> (Poly, Poly) {
        let d = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.clone();
        if rem.degree().map_or(true, |n| n < d) {
            return (Poly::zero(self.ring), rem);
        }
        let lead_inv = self
            .ring
            .inv(&divisor.leading_coeff())
            .expect("leading coefficient must be a unit");
        let mut quot = vec![self.ring.zero(); rem.coeffs.len() - d];
        while let Some(n) = rem.degree() {
            if n < d {
                break;
            }
            let c = self.ring.mul(&rem.coeffs[n], &lead_inv);
            let k = n - d;
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                let t = self.ring.mul(&c, dc);
                rem.coeffs[i + k] = self.ring.sub(&rem.coeffs[i + k], &t);
            }
            quot[k] = c;
            rem.normalize();
        }
        (Poly::from_coeffs(self.ring, quot), rem)
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.divrem(divisor);
        assert!(r.is_zero(), "division was not exact");
        q
    }

    /// Scales so the leading coefficient is 1; zero stays zero.
    pub fn make_monic(&self) -> Poly {
        match self.ring.inv(&self.leading_coeff()) {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor by the Euclidean algorithm;
    /// `gcd(0, 0) = 0`.
    pub fn gcd_monic(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// The monic quotient `h / gcd(h, h')`.  In characteristic 0 this is the
    /// radical (each irreducible factor once); in characteristic p, factors
    /// whose multiplicity is divisible by p drop out entirely.
    pub fn squarefree_part(&self) -> Poly {
        assert!(!self.is_zero(), "squarefree part of the zero polynomial");
        let f = self.make_monic();
        if f.is_constant() {
            return Poly::one(self.ring);
        }
        let g = f.gcd_monic(&f.derivative());
        f.div_exact(&g).make_monic()
    }

    /// Over `F_p`, rewrites `f` with vanishing derivative as `g` where
    /// `f = g(x)^p`.
    fn pth_root(&self) -> Poly {
        let p = self.ring.characteristic() as usize;
        assert!(p > 0, "p-th root only applies in characteristic p");
        let coeffs = self
            .coeffs
            .iter()
            .step_by(p)
            .cloned()
            .collect();
        Poly::from_coeffs(self.ring, coeffs)
    }

    /// `self^e mod m` with a big-integer exponent.
    fn pow_mod(&self, e: &BigUint, m: &Poly) -> Poly {
        let mut acc = Poly::one(self.ring);
        let (_, mut base) = self.divrem(m);
        let mut e = e.clone();
        let two = BigUint::from(2u32);
        while !num_traits::Zero::is_zero(&e) {
            if e.bit(0) {
                acc = acc.mul(&base).divrem(m).1;
            }
            base = base.mul(&base).divrem(m).1;
            e /= &two;
        }
        acc
    }

    /// Renders with the given variable name: descending exponents,
    /// `*` between coefficient and variable, e.g. `x^2 + 4*x + 2`.
    pub fn to_string_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (e, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else if negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mag = c.abs();
            if e == 0 {
                out.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    out.push_str(&mag.to_string());
                    out.push('*');
                }
                if e == 1 {
                    out.push_str(var);
                } else {
                    out.push_str(&format!("{var}^{e}"));
                }
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_var("x"))
    }
}

/// Yun's squarefree decomposition in characteristic 0: returns monic
/// pairwise-coprime squarefree factors with their multiplicities, ascending.
/// The leading coefficient is dropped (report it separately if needed).
pub fn yun_squarefree(h: &Poly) -> Vec<(Poly, usize)> {
    assert_eq!(h.ring().characteristic(), 0, "Yun's algorithm needs characteristic 0");
    assert!(!h.is_zero(), "squarefree decomposition of the zero polynomial");
    let f = h.make_monic();
    if f.is_constant() {
        return Vec::new();
    }
    let fd = f.derivative();
    let a0 = f.gcd_monic(&fd);
    let mut b = f.div_exact(&a0);
    let mut c = fd.div_exact(&a0);
    let mut d = c.sub(&b.derivative());
    let mut out = Vec::new();
    let mut i = 1usize;
    while !b.is_constant() {
        let a = b.gcd_monic(&d);
        if !a.is_constant() {
            out.push((a.clone(), i));
        }
        b = b.div_exact(&a);
        c = d.div_exact(&a);
        d = c.sub(&b.derivative());
        i += 1;
    }
    out
}

/// Full factorization over `F_p`: returns the monic irreducible factors with
/// multiplicities, sorted by degree then coefficients.  The unit is the
/// leading coefficient of the input.  Panics over the rationals.
pub fn factor_fp(h: &Poly) -> Vec<(Poly, usize)> {
    let p = h.ring().characteristic();
    assert!(p > 0, "full factorization is implemented over prime fields");
    assert!(!h.is_zero(), "factorization of the zero polynomial");
    let f = h.make_monic();
    let mut out: Vec<(Poly, usize)> = Vec::new();
    factor_rec(&f, 1, &mut out);
    out.sort_by(|(a, _), (b, _)| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| key_fp(a).cmp(&key_fp(b)))
    });
    out
}

fn key_fp(p: &Poly) -> Vec<u64> {
    p.coeffs().iter().map(Scalar::as_fp).collect()
}

fn factor_rec(f: &Poly, mult: usize, out: &mut Vec<(Poly, usize)>) {
    if f.is_constant() {
        return;
    }
    let p = f.ring().characteristic() as usize;
    let fd = f.derivative();
    if fd.is_zero() {
        factor_rec(&f.pth_root(), mult * p, out);
        return;
    }
    // The squarefree polynomial carrying every factor whose multiplicity in f
    // is not divisible by p.
    let pi = f.div_exact(&f.gcd_monic(&fd)).make_monic();
    let mut rest = f.clone();
    for q in factor_squarefree(&pi) {
        let mut e = 0usize;
        loop {
            let (quot, rem) = rest.divrem(&q);
            if !rem.is_zero() {
                break;
            }
            rest = quot;
            e += 1;
        }
        out.push((q, e * mult));
    }
    // Whatever remains is a p-th power; the vanishing-derivative branch above
    // picks it up.
    factor_rec(&rest, mult, out);
}

/// Factors a squarefree monic polynomial into monic irreducibles:
/// distinct-degree splitting by iterated Frobenius, then equal-degree
/// splitting with a deterministic sweep of test polynomials.
fn factor_squarefree(f: &Poly) -> Vec<Poly> {
    let ring = f.ring();
    let p = ring.characteristic();
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let mut rem = f.clone();
    // frob holds x^(p^d) mod f, advanced one Frobenius step per round.
    let x = Poly::x(ring);
    let mut frob = x.pow_mod(&BigUint::from(p), &rem);
    let mut d = 1usize;
    loop {
        let n = match rem.degree() {
            None | Some(0) => break,
            Some(n) => n,
        };
        if 2 * d > n {
            // What's left is a single irreducible factor.
            out.push(rem.clone());
            break;
        }
        let g = rem.gcd_monic(&frob.sub(&x));
        if !g.is_constant() {
            equal_degree_split(&g, d, &mut out);
            rem = rem.div_exact(&g);
            // Reduce the Frobenius image modulo the smaller remainder.
            frob = frob.divrem(&rem).1;
        }
        d += 1;
        if rem.is_constant() {
            break;
        }
        frob = frob.pow_mod(&BigUint::from(p), &rem);
    }
    out
}

/// Splits a monic product of distinct irreducibles, all of degree `d`.
fn equal_degree_split(f: &Poly, d: usize, out: &mut Vec<Poly>) {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return;
    }
    if n == d {
        out.push(f.make_monic());
        return;
    }
    let ring = f.ring();
    let p = ring.characteristic();
    // Deterministic sweep over non-constant polynomials: interpret a counter
    // base p as a coefficient vector.
    let mut counter = BigUint::from(p); // first candidate: x
    let half = if p == 2 {
        BigUint::one()
    } else {
        (BigUint::from(p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32)
    };
    for _ in 0..1_000_000u64 {
        let a = poly_from_counter(&counter, ring);
        counter += BigUint::one();
        let g0 = f.gcd_monic(&a);
        if !g0.is_constant() && g0.degree() < f.degree() {
            equal_degree_split(&g0, d, out);
            equal_degree_split(&f.div_exact(&g0), d, out);
            return;
        }
        let t = if p == 2 {
            // Trace map a + a^2 + ... + a^(2^(d-1)) mod f.
            let mut term = a.divrem(f).1;
            let mut sum = term.clone();
            for _ in 1..d {
                term = term.mul(&term).divrem(f).1;
                sum = sum.add(&term);
            }
            sum
        } else {
            let e = a.pow_mod(&half, f);
            e.sub(&Poly::one(ring))
        };
        let g = f.gcd_monic(&t);
        if !g.is_constant() && g.degree() < f.degree() {
            equal_degree_split(&g, d, out);
            equal_degree_split(&f.div_exact(&g), d, out);
            return;
        }
    }
    panic!("equal-degree splitting exhausted its candidate sweep");
}

fn poly_from_counter(counter: &BigUint, ring: Ring) -> Poly {
    let p = BigUint::from(ring.characteristic());
    let mut coeffs = Vec::new();
    let mut c = counter.clone();
    while !num_traits::Zero::is_zero(&c) {
        let digit = &c % &p;
        coeffs.push(ring.from_bigint(&BigInt::from(digit)));
        c /= &p;
    }
    Poly::from_coeffs(ring, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Ring {
        Ring::Rat
    }

    #[test]
    fn display_matches_canonical_form() {
        let p = Poly::from_int_coeffs(q(), &[2, 4, 1]);
        assert_eq!(p.to_string(), "x^2 + 4*x + 2");
        assert_eq!(p.to_string_var("h"), "h^2 + 4*h + 2");
        let m = Poly::from_int_coeffs(q(), &[1, 0, -1]);
        assert_eq!(m.to_string(), "-x^2 + 1");
        assert_eq!(Poly::zero(q()).to_string(), "0");
        assert_eq!(Poly::from_int_coeffs(q(), &[0, -1]).to_string(), "-x");
        let r = Poly::from_coeffs(q(), vec![q().parse_scalar("3/2").unwrap()]);
        assert_eq!(r.to_string(), "3/2");
    }

    #[test]
    fn arithmetic_identities() {
        let a = Poly::from_int_coeffs(q(), &[1, 2, 3]);
        let b = Poly::from_int_coeffs(q(), &[-1, 0, 0, 5]);
        assert_eq!(a.add(&b).sub(&b), a);
        assert_eq!(a.mul(&b), b.mul(&a));
        let c = Poly::from_int_coeffs(q(), &[7, -2]);
        assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        assert_eq!(a.pow(3), a.mul(&a).mul(&a));
    }

    #[test]
    fn divrem_roundtrip() {
        let rings = [q(), Ring::fp(7)];
        for ring in rings {
            let a = Poly::from_int_coeffs(ring, &[3, 1, 4, 1, 5, 9]);
            let b = Poly::from_int_coeffs(ring, &[2, 7, 1]);
            let (qu, r) = a.divrem(&b);
            assert_eq!(qu.mul(&b).add(&r), a);
            assert!(r.degree() < b.degree());
        }
    }

    #[test]
    fn gcd_examples() {
        // gcd(x^2 - 1, x^3 - 1) = x - 1.
        let a = Poly::from_int_coeffs(q(), &[-1, 0, 1]);
        let b = Poly::from_int_coeffs(q(), &[-1, 0, 0, 1]);
        assert_eq!(a.gcd_monic(&b), Poly::from_int_coeffs(q(), &[-1, 1]));
        // Coprime pair.
        let c = Poly::from_int_coeffs(q(), &[1, 1]);
        let d = Poly::from_int_coeffs(q(), &[2, 1]);
        assert!(c.gcd_monic(&d).is_one());
        assert!(a.gcd_monic(&Poly::zero(q())) == a.make_monic());
    }

    #[test]
    fn eval_and_compose() {
        let p = Poly::from_int_coeffs(q(), &[1, 0, 1]); // x^2 + 1
        assert_eq!(p.eval(&q().from_i64(3)), q().from_i64(10));
        let l = Poly::from_int_coeffs(q(), &[-2, 1]); // x - 2
        // (x-2)^2 + 1 = x^2 - 4x + 5
        assert_eq!(p.compose(&l), Poly::from_int_coeffs(q(), &[5, -4, 1]));
        // Iterated composition of x + 1.
        let s = Poly::from_int_coeffs(q(), &[1, 1]);
        assert_eq!(s.compose_iter(4), Poly::from_int_coeffs(q(), &[4, 1]));
        assert_eq!(s.compose_iter(0), Poly::x(q()));
    }

    #[test]
    fn derivative_rules() {
        let p = Poly::from_int_coeffs(q(), &[5, 3, 0, 2]); // 2x^3 + 3x + 5
        assert_eq!(p.derivative(), Poly::from_int_coeffs(q(), &[3, 0, 6]));
        // In F_3, d/dx of x^3 is 0.
        let f3 = Ring::fp(3);
        assert!(Poly::from_int_coeffs(f3, &[0, 0, 0, 1]).derivative().is_zero());
    }

    #[test]
    fn yun_recovers_built_multiplicities() {
        // h = x * (x+1)^2 * (x+2)^3
        let x = Poly::x(q());
        let a = Poly::from_int_coeffs(q(), &[1, 1]);
        let b = Poly::from_int_coeffs(q(), &[2, 1]);
        let h = x.mul(&a.pow(2)).mul(&b.pow(3)).scale(&q().from_i64(4));
        let dec = yun_squarefree(&h);
        assert_eq!(dec, vec![(x.clone(), 1), (a.clone(), 2), (b.clone(), 3)]);
        // Rebuild and compare monic parts.
        let mut rebuilt = Poly::one(q());
        for (f, m) in &dec {
            rebuilt = rebuilt.mul(&f.pow(*m));
        }
        assert_eq!(rebuilt, h.make_monic());
    }

    #[test]
    fn squarefree_part_examples() {
        let x = Poly::x(q());
        let a = Poly::from_int_coeffs(q(), &[1, 1]);
        let h = x.pow(3).mul(&a.pow(2));
        assert_eq!(h.squarefree_part(), x.mul(&a));
        assert_eq!(Poly::from_int_coeffs(q(), &[0, 0, 5]).squarefree_part(), x);
        // Squarefree input is returned monic and unchanged.
        let sep = Poly::from_int_coeffs(q(), &[-1, 0, 1]);
        assert_eq!(sep.squarefree_part(), sep);
        // In characteristic p, a p-th power has zero derivative and the
        // h/gcd(h, h') quotient collapses to 1.
        let f3 = Ring::fp(3);
        let g = Poly::from_int_coeffs(f3, &[1, 1]);
        assert!(g.pow(3).squarefree_part().is_one());
    }

    #[test]
    fn factor_fp_small_examples() {
        let f5 = Ring::fp(5);
        // x^2 + 1 = (x+2)(x+3) over F_5.
        let h = Poly::from_int_coeffs(f5, &[1, 0, 1]);
        let factors = factor_fp(&h);
        assert_eq!(
            factors,
            vec![
                (Poly::from_int_coeffs(f5, &[2, 1]), 1),
                (Poly::from_int_coeffs(f5, &[3, 1]), 1)
            ]
        );
        // x^2 + 1 is irreducible over F_3.
        let f3 = Ring::fp(3);
        let h3 = Poly::from_int_coeffs(f3, &[1, 0, 1]);
        assert_eq!(factor_fp(&h3), vec![(h3.make_monic(), 1)]);
        // x^4 + 1 = (x+1)^4 over F_2.
        let f2 = Ring::fp(2);
        let h2 = Poly::from_int_coeffs(f2, &[1, 0, 0, 0, 1]);
        assert_eq!(factor_fp(&h2), vec![(Poly::from_int_coeffs(f2, &[1, 1]), 4)]);
    }

    #[test]
    fn factor_fp_mixed_degrees_and_powers() {
        let f3 = Ring::fp(3);
        // Two distinct irreducible quadratics times a cubed linear factor.
        let q1 = Poly::from_int_coeffs(f3, &[1, 0, 1]); // x^2 + 1
        let q2 = Poly::from_int_coeffs(f3, &[2, 1, 1]); // x^2 + x + 2
        let lin = Poly::from_int_coeffs(f3, &[1, 1]);
        let h = q1.mul(&q2).mul(&lin.pow(3)).scale(&f3.from_i64(2));
        let factors = factor_fp(&h);
        assert_eq!(factors, vec![(lin, 3), (q1, 1), (q2, 1)]);
    }

    #[test]
    fn factor_fp_reconstructs_input_randomized_shapes() {
        // Deterministic sweep: build products of scanned linear/quadratic
        // factors and confirm factoring returns exactly the monic input.
        for p in [2u64, 3, 5, 7] {
            let ring = Ring::fp(p);
            for a in 0..p.min(4) {
                for b in 0..p.min(4) {
                    let f = Poly::from_int_coeffs(ring, &[a as i64, 1]);
                    let g = Poly::from_int_coeffs(ring, &[b as i64, 1, 1]);
                    let h = f.pow(2).mul(&g);
                    let mut rebuilt = Poly::one(ring);
                    for (fac, m) in factor_fp(&h) {
                        for _ in 0..m {
                            rebuilt = rebuilt.mul(&fac);
                        }
                    }
                    assert_eq!(rebuilt, h.make_monic(), "p={p} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn factor_fp_larger_prime() {
        let ring = Ring::fp(101);
        let f = Poly::from_int_coeffs(ring, &[13, 1]);
        let g = Poly::from_int_coeffs(ring, &[5, 99, 1]);
        let h = f.mul(&g).mul(&f);
        let factors = factor_fp(&h);
        let mut rebuilt = Poly::one(ring);
        for (fac, m) in &factors {
            rebuilt = rebuilt.mul(&fac.pow(*m));
        }
        assert_eq!(rebuilt, h.make_monic());
        assert!(factors.iter().any(|(fac, m)| *fac == f && *m == 2));
    }
}
