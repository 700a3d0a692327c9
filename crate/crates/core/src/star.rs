//! The formal star product on commuting polynomials in x and y, with a
//! central deformation parameter `hbar`.
//!
//! `a * b = sum_n phi^n(a) * psi^n(b) / n! * hbar^n` where `phi = d/dy` and
//! `psi = h(x) d/dx`; the sum is finite on polynomials.  Setting `hbar = 1`
//! recovers normal-ordered multiplication in the relation algebra with
//! `q = 1` and the same `h` (tested against [`crate::ore`]).

use std::collections::BTreeMap;
use std::fmt;

use crate::ore::{OreAlgebraSpec, OreElement};
use crate::poly::Poly;
use crate::scalar::{Ring, Scalar};
use crate::{Error, Result};

/// A commutative polynomial in x, y, and hbar; keys are exponent triples
/// `(i, j, k)` for `x^i y^j hbar^k`, values are nonzero scalars.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StarPoly {
    ring: Ring,
    terms: BTreeMap<(usize, usize, usize), Scalar>,
}

impl StarPoly {
    pub fn zero(ring: Ring) -> StarPoly {
        StarPoly { ring, terms: BTreeMap::new() }
    }

    pub fn monomial(ring: Ring, c: Scalar, i: usize, j: usize, k: usize) -> StarPoly {
        let mut out = StarPoly::zero(ring);
        out.insert_add((i, j, k), c);
        out
    }

    pub fn one(ring: Ring) -> StarPoly {
        StarPoly::monomial(ring, ring.one(), 0, 0, 0)
    }

    pub fn x(ring: Ring) -> StarPoly {
        StarPoly::monomial(ring, ring.one(), 1, 0, 0)
    }

    pub fn y(ring: Ring) -> StarPoly {
        StarPoly::monomial(ring, ring.one(), 0, 1, 0)
    }

    pub fn hbar(ring: Ring) -> StarPoly {
        StarPoly::monomial(ring, ring.one(), 0, 0, 1)
    }

    /// Embeds a polynomial in x alone.
    pub fn from_poly_x(p: &Poly) -> StarPoly {
        let ring = p.ring();
        let mut out = StarPoly::zero(ring);
        for (i, c) in p.coeffs().iter().enumerate() {
            out.insert_add((i, 0, 0), c.clone());
        }
        out
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn terms(&self) -> &BTreeMap<(usize, usize, usize), Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert_add(&mut self, key: (usize, usize, usize), c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&key) {
            None => {
                self.terms.insert(key, c);
            }
            Some(old) => {
                let sum = self.ring.add(&old, &c);
                if !sum.is_zero() {
                    self.terms.insert(key, sum);
                }
            }
        }
    }

    pub fn add(&self, other: &StarPoly) -> StarPoly {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert_add(*k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> StarPoly {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| (*k, self.ring.neg(c)))
            .collect();
        StarPoly { ring: self.ring, terms }
    }

    pub fn sub(&self, other: &StarPoly) -> StarPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> StarPoly {
        let mut out = StarPoly::zero(self.ring);
        for (k, v) in &self.terms {
            out.insert_add(*k, self.ring.mul(v, c));
        }
        out
    }

    /// Plain commutative product.
    pub fn mul(&self, other: &StarPoly) -> StarPoly {
        let mut out = StarPoly::zero(self.ring);
        for ((i1, j1, k1), c1) in &self.terms {
            for ((i2, j2, k2), c2) in &other.terms {
                out.insert_add((i1 + i2, j1 + j2, k1 + k2), self.ring.mul(c1, c2));
            }
        }
        out
    }

    pub fn partial_x(&self) -> StarPoly {
        let mut out = StarPoly::zero(self.ring);
        for ((i, j, k), c) in &self.terms {
            if *i > 0 {
                let scaled = self.ring.mul(c, &self.ring.from_i64(*i as i64));
                out.insert_add((i - 1, *j, *k), scaled);
            }
        }
        out
    }

    pub fn partial_y(&self) -> StarPoly {
        let mut out = StarPoly::zero(self.ring);
        for ((i, j, k), c) in &self.terms {
            if *j > 0 {
                let scaled = self.ring.mul(c, &self.ring.from_i64(*j as i64));
                out.insert_add((*i, j - 1, *k), scaled);
            }
        }
        out
    }

    /// Multiplies by `hbar^n`.
    pub fn mul_hbar(&self, n: usize) -> StarPoly {
        let terms = self
            .terms
            .iter()
            .map(|((i, j, k), c)| ((*i, *j, k + n), c.clone()))
            .collect();
        StarPoly { ring: self.ring, terms }
    }

    /// The x,y-polynomial sitting in front of `hbar^k`.
    pub fn hbar_slice(&self, k: usize) -> StarPoly {
        let mut out = StarPoly::zero(self.ring);
        for ((i, j, kk), c) in &self.terms {
            if *kk == k {
                out.insert_add((*i, *j, 0), c.clone());
            }
        }
        out
    }

    /// Substitutes a scalar for hbar.
    pub fn eval_hbar(&self, v: &Scalar) -> StarPoly {
        let mut out = StarPoly::zero(self.ring);
        for ((i, j, k), c) in &self.terms {
            let scaled = self.ring.mul(c, &self.ring.pow(v, *k as u64));
            out.insert_add((*i, *j, 0), scaled);
        }
        out
    }

    /// Reinterprets an hbar-free polynomial as a normal-form element of the
    /// relation algebra (`x^i y^j` goes to the PBW monomial).
    pub fn to_ore(&self, spec: &OreAlgebraSpec) -> OreElement {
        let mut out = OreElement::zero(spec);
        for ((i, j, k), c) in &self.terms {
            assert_eq!(*k, 0, "hbar must be substituted away first");
            out = out.add(&OreElement::monomial(
                spec,
                Poly::monomial(c.clone(), *i, self.ring),
                *j,
            ));
        }
        out
    }
}

impl fmt::Display for StarPoly {
    /// Ascending powers of hbar (the deformation expansion), then y and x
    /// descending, e.g. `x*y + hbar`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&(usize, usize, usize)> = self.terms.keys().collect();
        keys.sort_by(|(i1, j1, k1), (i2, j2, k2)| {
            k1.cmp(k2).then(j2.cmp(j1)).then(i2.cmp(i1))
        });
        let mut out = String::new();
        for key in keys {
            let (i, j, k) = *key;
            let c = &self.terms[key];
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
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || (i, j, k) == (0, 0, 0) {
                parts.push(mag.to_string());
            }
            for (name, e) in [("x", i), ("y", j), ("hbar", k)] {
                if e == 1 {
                    parts.push(name.to_string());
                } else if e > 1 {
                    parts.push(format!("{name}^{e}"));
                }
            }
            out.push_str(&parts.join("*"));
        }
        write!(f, "{out}")
    }
}

/// The star product `a * b = sum_n phi^n(a) psi^n(b) / n! hbar^n` with
/// `phi = d/dy`, `psi = h(x) d/dx`.  Characteristic 0 only.
pub fn star_product(a: &StarPoly, b: &StarPoly, h: &Poly) -> Result<StarPoly> {
    let ring = a.ring();
    if ring.characteristic() != 0 {
        return Err(Error::NeedsCharZero);
    }
    let h_embedded = StarPoly::from_poly_x(h);
    let mut acc = StarPoly::zero(ring);
    let mut phi_a = a.clone();
    let mut psi_b = b.clone();
    let mut factorial_inv = ring.one();
    let mut n = 0usize;
    loop {
        if n > 0 {
            phi_a = phi_a.partial_y();
            psi_b = h_embedded.mul(&psi_b.partial_x());
            factorial_inv = ring.div(&factorial_inv, &ring.from_i64(n as i64));
        }
        if phi_a.is_zero() || psi_b.is_zero() {
            break;
        }
        let term = phi_a.mul(&psi_b).scale(&factorial_inv).mul_hbar(n);
        acc = acc.add(&term);
        n += 1;
    }
    Ok(acc)
}

/// The semiclassical bracket: the coefficient of `hbar^1` in the star
/// commutator `a*b - b*a`.
pub fn semiclassical_bracket(a: &StarPoly, b: &StarPoly, h: &Poly) -> Result<StarPoly> {
    let ab = star_product(a, b, h)?;
    let ba = star_product(b, a, h)?;
    Ok(ab.sub(&ba).hbar_slice(1))
}
