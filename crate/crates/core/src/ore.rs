//! The unified relation algebra `F<x,y> / (yx - q*xy - h(x))` and its
//! endomorphisms, derivations, and exponentials.
//!
//! One relation family covers the quantum plane (`h = 0`), the quantum Weyl
//! algebra (`h = 1`, `q != 1`), and the polynomial family with `q = 1`; the
//! case split is data, not code paths.  Elements are kept in left normal form
//! `sum_j p_j(x) * y^j` ("coefficients on the left"), and products are
//! normalized with the twisted single-step rule
//! `y * p(x) = sigma(p) * y + delta(p)` where `sigma(p)(x) = p(q*x)` and
//! `delta` is the sigma-derivation with `delta(x) = h`.

use std::collections::BTreeMap;
use std::fmt;

use crate::poly::{factor_fp, yun_squarefree, Poly};
use crate::scalar::{Ring, Scalar};
use crate::{Error, Result};

/// The algebra data: scalar ring, the unit `q`, and the polynomial `h`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OreAlgebraSpec {
    ring: Ring,
    q: Scalar,
    h: Poly,
}

impl OreAlgebraSpec {
    pub fn new(ring: Ring, q: Scalar, h: Poly) -> OreAlgebraSpec {
        assert_eq!(h.ring(), ring, "h must live over the scalar ring");
        OreAlgebraSpec { ring, q, h }
    }

    /// The polynomial family `yx = xy + h(x)` at `q = 1`.
    pub fn poly_family(ring: Ring, h: Poly) -> OreAlgebraSpec {
        OreAlgebraSpec::new(ring, ring.one(), h)
    }

    /// The Weyl algebra: `q = 1`, `h = 1`.
    pub fn weyl(ring: Ring) -> OreAlgebraSpec {
        OreAlgebraSpec::new(ring, ring.one(), Poly::one(ring))
    }

    /// The quantum plane `yx = q*xy`.
    pub fn quantum_plane(ring: Ring, q: Scalar) -> OreAlgebraSpec {
        OreAlgebraSpec::new(ring, q, Poly::zero(ring))
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn q(&self) -> &Scalar {
        &self.q
    }

    pub fn h(&self) -> &Poly {
        &self.h
    }

    pub fn is_weyl(&self) -> bool {
        self.q.is_one() && self.h.is_one()
    }

    /// The q-integer `[n]_q = 1 + q + ... + q^(n-1)`.
    pub fn q_int(&self, n: usize) -> Scalar {
        let mut acc = self.ring.zero();
        let mut power = self.ring.one();
        for _ in 0..n {
            acc = self.ring.add(&acc, &power);
            power = self.ring.mul(&power, &self.q);
        }
        acc
    }

    /// `sigma(p)(x) = p(q*x)`: scales the degree-`i` coefficient by `q^i`.
    pub fn sigma(&self, p: &Poly) -> Poly {
        let mut power = self.ring.one();
        let coeffs = p
            .coeffs()
            .iter()
            .map(|c| {
                let out = self.ring.mul(c, &power);
                power = self.ring.mul(&power, &self.q);
                out
            })
            .collect();
        Poly::from_coeffs(self.ring, coeffs)
    }

    /// The sigma-derivation on coefficients: `delta(x^n) = [n]_q * h * x^(n-1)`,
    /// extended linearly; equals `h` times the q-derivative of `p`.
    pub fn delta(&self, p: &Poly) -> Poly {
        let qderiv = Poly::from_coeffs(
            self.ring,
            p.coeffs()
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, c)| self.ring.mul(c, &self.q_int(n)))
                .collect(),
        );
        qderiv.mul(&self.h)
    }
}

/// An element `sum_j p_j(x) * y^j` in left normal form; zero polynomials are
/// never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OreElement {
    spec: OreAlgebraSpec,
    terms: BTreeMap<usize, Poly>,
}

impl OreElement {
    pub fn zero(spec: &OreAlgebraSpec) -> OreElement {
        OreElement { spec: spec.clone(), terms: BTreeMap::new() }
    }

    pub fn one(spec: &OreAlgebraSpec) -> OreElement {
        OreElement::from_poly(spec, Poly::one(spec.ring))
    }

    pub fn x(spec: &OreAlgebraSpec) -> OreElement {
        OreElement::from_poly(spec, Poly::x(spec.ring))
    }

    pub fn y(spec: &OreAlgebraSpec) -> OreElement {
        OreElement::monomial(spec, Poly::one(spec.ring), 1)
    }

    pub fn scalar(spec: &OreAlgebraSpec, c: Scalar) -> OreElement {
        OreElement::from_poly(spec, Poly::constant(c, spec.ring))
    }

    pub fn from_poly(spec: &OreAlgebraSpec, p: Poly) -> OreElement {
        OreElement::monomial(spec, p, 0)
    }

    /// `p(x) * y^j`.
    pub fn monomial(spec: &OreAlgebraSpec, p: Poly, j: usize) -> OreElement {
        let mut terms = BTreeMap::new();
        if !p.is_zero() {
            terms.insert(j, p);
        }
        OreElement { spec: spec.clone(), terms }
    }

    pub fn spec(&self) -> &OreAlgebraSpec {
        &self.spec
    }

    /// Map from y-exponent to its (nonzero) x-coefficient polynomial.
    pub fn terms(&self) -> &BTreeMap<usize, Poly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total y-degree; `None` for zero.
    pub fn y_degree(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }

    fn insert_add(&mut self, j: usize, p: Poly) {
        if p.is_zero() {
            return;
        }
        match self.terms.remove(&j) {
            None => {
                self.terms.insert(j, p);
            }
            Some(old) => {
                let sum = old.add(&p);
                if !sum.is_zero() {
                    self.terms.insert(j, sum);
                }
            }
        }
    }

    pub fn add(&self, other: &OreElement) -> OreElement {
        assert_eq!(self.spec, other.spec, "elements belong to different algebras");
        let mut out = self.clone();
        for (j, p) in &other.terms {
            out.insert_add(*j, p.clone());
        }
        out
    }

    pub fn neg(&self) -> OreElement {
        let terms = self.terms.iter().map(|(j, p)| (*j, p.neg())).collect();
        OreElement { spec: self.spec.clone(), terms }
    }

    pub fn sub(&self, other: &OreElement) -> OreElement {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> OreElement {
        let mut out = OreElement::zero(&self.spec);
        for (j, p) in &self.terms {
            out.insert_add(*j, p.scale(c));
        }
        out
    }

    /// Product in normal form, via `y * p(x) = sigma(p) * y + delta(p)`.
    pub fn mul(&self, other: &OreElement) -> OreElement {
        assert_eq!(self.spec, other.spec, "elements belong to different algebras");
        let mut out = OreElement::zero(&self.spec);
        for (j, pj) in &self.terms {
            // Push y^j through the whole of `other`, tracking absolute
            // y-exponents, then attach the left coefficient pj.
            let mut cur: BTreeMap<usize, Poly> = other.terms.clone();
            for _ in 0..*j {
                let mut next: BTreeMap<usize, Poly> = BTreeMap::new();
                for (m, p) in &cur {
                    let up = self.spec.sigma(p);
                    let down = self.spec.delta(p);
                    for (e, q) in [(*m + 1, up), (*m, down)] {
                        if q.is_zero() {
                            continue;
                        }
                        match next.remove(&e) {
                            None => {
                                next.insert(e, q);
                            }
                            Some(old) => {
                                let s = old.add(&q);
                                if !s.is_zero() {
                                    next.insert(e, s);
                                }
                            }
                        }
                    }
                }
                cur = next;
            }
            for (m, s) in cur {
                out.insert_add(m, pj.mul(&s));
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> OreElement {
        let mut acc = OreElement::one(&self.spec);
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

    pub fn commutator(&self, other: &OreElement) -> OreElement {
        self.mul(other).sub(&other.mul(self))
    }

    /// True iff the element commutes with both generators.
    pub fn is_central(&self) -> bool {
        let x = OreElement::x(&self.spec);
        let y = OreElement::y(&self.spec);
        self.commutator(&x).is_zero() && self.commutator(&y).is_zero()
    }

    /// Evaluates a polynomial at an arbitrary element by Horner's rule.
    pub fn subst_poly(p: &Poly, at: &OreElement) -> OreElement {
        let spec = at.spec.clone();
        let mut acc = OreElement::zero(&spec);
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(at).add(&OreElement::scalar(&spec, c.clone()));
        }
        acc
    }
}

impl fmt::Display for OreElement {
    /// Canonical text: y-exponents descending, e.g. `x^2*y^2 + 4*x*y + 2`;
    /// multi-term x-coefficients are parenthesized, e.g. `(x^2 + x)*y^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (j, p) in self.terms.iter().rev() {
            let (negative, body) = term_text(p, *j);
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else if negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&body);
        }
        write!(f, "{out}")
    }
}

/// Renders one `p(x) * y^j` term; returns (starts-negative, body-without-sign).
fn term_text(p: &Poly, j: usize) -> (bool, String) {
    let nonzero = p.coeffs().iter().filter(|c| !c.is_zero()).count();
    if j == 0 {
        let s = p.to_string_var("x");
        return match s.strip_prefix('-') {
            // Only claim the sign when it governs the whole term.
            Some(rest) if nonzero == 1 => (true, rest.to_string()),
            _ => (false, s),
        };
    }
    if nonzero > 1 {
        let y = if j == 1 { "y".to_string() } else { format!("y^{j}") };
        return (false, format!("({})*{}", p.to_string_var("x"), y));
    }
    // Single monomial coefficient c*x^i.
    let i = p.degree().expect("nonzero term");
    let c = p.coeff(i);
    let mut parts: Vec<String> = Vec::new();
    let mag = c.abs();
    if !mag.is_one() {
        parts.push(mag.to_string());
    }
    if i == 1 {
        parts.push("x".to_string());
    } else if i > 1 {
        parts.push(format!("x^{i}"));
    }
    if j == 1 {
        parts.push("y".to_string());
    } else {
        parts.push(format!("y^{j}"));
    }
    (c.is_negative(), parts.join("*"))
}

/// A substitution endomorphism, stored with its generator images; `verified`
/// records that the images satisfy the defining relation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EndoSpec {
    image_x: OreElement,
    image_y: OreElement,
    verified: bool,
}

/// The named generator maps.
#[derive(Clone, Debug)]
pub enum EndoKind {
    /// `x -> x, y -> y + f(x)`.
    Phi(Poly),
    /// `x -> x + f(y), y -> y`.
    Psi(Poly),
    /// `x -> -y, y -> x` (Weyl algebra only).
    Tau,
    /// `x -> a*x + b, y -> a^(deg h - 1) * y`, for `(a, b)` in the symmetry
    /// set of `h`.
    TauAb(Scalar, Scalar),
}

impl EndoSpec {
    pub fn image_x(&self) -> &OreElement {
        &self.image_x
    }

    pub fn image_y(&self) -> &OreElement {
        &self.image_y
    }

    /// Builds from explicit generator images, verifying the defining relation
    /// `Y*X - q*X*Y - h(X) = 0`.
    pub fn custom(spec: &OreAlgebraSpec, image_x: OreElement, image_y: OreElement) -> Result<EndoSpec> {
        let qxy = image_x.mul(&image_y).scale(spec.q());
        let residual = image_y
            .mul(&image_x)
            .sub(&qxy)
            .sub(&OreElement::subst_poly(spec.h(), &image_x));
        if !residual.is_zero() {
            return Err(Error::BadMap(format!(
                "generator images break the defining relation; residual = {residual}"
            )));
        }
        Ok(EndoSpec { image_x, image_y, verified: true })
    }
}

/// Builds one of the named generator maps, verified against the relation.
pub fn make_generator_map(kind: EndoKind, spec: &OreAlgebraSpec) -> Result<EndoSpec> {
    let ring = spec.ring();
    match kind {
        EndoKind::Phi(f) => {
            let image_x = OreElement::x(spec);
            let image_y = OreElement::y(spec).add(&OreElement::from_poly(spec, f));
            EndoSpec::custom(spec, image_x, image_y)
        }
        EndoKind::Psi(f) => {
            let fy = OreElement::subst_poly(&f, &OreElement::y(spec));
            let image_x = OreElement::x(spec).add(&fy);
            let image_y = OreElement::y(spec);
            EndoSpec::custom(spec, image_x, image_y)
        }
        EndoKind::Tau => {
            if !spec.is_weyl() {
                return Err(Error::BadMap(
                    "the quarter-turn map needs the Weyl algebra (q = 1, h = 1)".into(),
                ));
            }
            let image_x = OreElement::y(spec).neg();
            let image_y = OreElement::x(spec);
            EndoSpec::custom(spec, image_x, image_y)
        }
        EndoKind::TauAb(alpha, beta) => {
            if alpha.is_zero() {
                return Err(Error::BadMap("the scale factor must be nonzero".into()));
            }
            let d = match spec.h().degree() {
                Some(d) => d,
                None => {
                    return Err(Error::BadMap(
                        "the affine symmetry map needs a nonzero h".into(),
                    ))
                }
            };
            // Membership in the symmetry set: h(a*x + b) = a^deg(h) * h(x).
            let shifted = spec
                .h()
                .compose(&Poly::from_coeffs(ring, vec![beta.clone(), alpha.clone()]));
            let scaled = spec.h().scale(&ring.pow(&alpha, d as u64));
            if shifted != scaled {
                return Err(Error::BadMap(format!(
                    "({alpha}, {beta}) is not a symmetry of h: h({alpha}*x + {beta}) != {alpha}^{d}*h(x)"
                )));
            }
            let image_x = OreElement::from_poly(
                spec,
                Poly::from_coeffs(ring, vec![beta, alpha.clone()]),
            );
            let ypow = if d == 0 {
                // deg h - 1 = -1: scale y by the inverse of alpha.
                ring.inv(&alpha).expect("alpha is nonzero")
            } else {
                ring.pow(&alpha, (d - 1) as u64)
            };
            let image_y = OreElement::y(spec).scale(&ypow);
            EndoSpec::custom(spec, image_x, image_y)
        }
    }
}

/// Applies a verified endomorphism by substituting the generator images.
pub fn apply_map(e: &EndoSpec, a: &OreElement) -> Result<OreElement> {
    if !e.verified {
        return Err(Error::BadMap("endomorphism was not verified".into()));
    }
    let spec = a.spec().clone();
    let mut out = OreElement::zero(&spec);
    for (j, p) in a.terms() {
        let px = OreElement::subst_poly(p, &e.image_x);
        let term = px.mul(&e.image_y.pow(*j));
        out = out.add(&term);
    }
    Ok(out)
}

/// Composes substitutions: `compose(e1, e2)` acts as `a -> e1(e2(a))`.
pub fn compose_maps(spec: &OreAlgebraSpec, outer: &EndoSpec, inner: &EndoSpec) -> Result<EndoSpec> {
    let image_x = apply_map(outer, &inner.image_x)?;
    let image_y = apply_map(outer, &inner.image_y)?;
    EndoSpec::custom(spec, image_x, image_y)
}

/// A derivation, stored by kind; constructors verify the Leibniz constraint
/// on the defining relation.
#[derive(Clone, Debug)]
pub struct DerivSpec {
    spec: OreAlgebraSpec,
    /// Generator images (D(x), D(y)); the inner derivation keeps its element.
    kind: DerivKind,
}

#[derive(Clone, Debug)]
enum DerivKind {
    /// `D(x) = 0, D(y) = f(x)`.
    DF(Poly),
    /// The inner derivation `[a, -]`.
    Ad(OreElement),
    /// Images (D(x), D(y)) checked at construction.
    Images(OreElement, OreElement),
}

impl DerivSpec {
    /// `D_f`: kills x, sends y to `f(x)`.
    pub fn d_f(spec: &OreAlgebraSpec, f: Poly) -> Result<DerivSpec> {
        let dx = OreElement::zero(spec);
        let dy = OreElement::from_poly(spec, f.clone());
        check_derivation(spec, &dx, &dy)?;
        Ok(DerivSpec { spec: spec.clone(), kind: DerivKind::DF(f) })
    }

    /// The inner derivation `ad(a) = [a, -]`.
    pub fn ad(spec: &OreAlgebraSpec, a: OreElement) -> DerivSpec {
        DerivSpec { spec: spec.clone(), kind: DerivKind::Ad(a) }
    }

    /// Characteristic-p exterior derivation `E_x(x) = y^(p-1), E_x(y) = 0`.
    pub fn e_x(spec: &OreAlgebraSpec) -> Result<DerivSpec> {
        let p = spec.ring().characteristic();
        if p == 0 {
            return Err(Error::BadDerivation(
                "this derivation exists only in positive characteristic".into(),
            ));
        }
        let dx = OreElement::y(spec).pow((p - 1) as usize);
        let dy = OreElement::zero(spec);
        check_derivation(spec, &dx, &dy)?;
        Ok(DerivSpec { spec: spec.clone(), kind: DerivKind::Images(dx, dy) })
    }

    /// Characteristic-p exterior derivation `E_y(x) = 0, E_y(y) = x^(p-1)`.
    pub fn e_y(spec: &OreAlgebraSpec) -> Result<DerivSpec> {
        let p = spec.ring().characteristic();
        if p == 0 {
            return Err(Error::BadDerivation(
                "this derivation exists only in positive characteristic".into(),
            ));
        }
        let dx = OreElement::zero(spec);
        let dy = OreElement::x(spec).pow((p - 1) as usize);
        check_derivation(spec, &dx, &dy)?;
        Ok(DerivSpec { spec: spec.clone(), kind: DerivKind::Images(dx, dy) })
    }

    /// A derivation from explicit generator images, with the Leibniz
    /// constraint on the relation verified.
    pub fn custom(spec: &OreAlgebraSpec, dx: OreElement, dy: OreElement) -> Result<DerivSpec> {
        check_derivation(spec, &dx, &dy)?;
        Ok(DerivSpec { spec: spec.clone(), kind: DerivKind::Images(dx, dy) })
    }

    fn images(&self) -> (OreElement, OreElement) {
        match &self.kind {
            DerivKind::DF(f) => (
                OreElement::zero(&self.spec),
                OreElement::from_poly(&self.spec, f.clone()),
            ),
            DerivKind::Ad(a) => {
                let x = OreElement::x(&self.spec);
                let y = OreElement::y(&self.spec);
                (a.commutator(&x), a.commutator(&y))
            }
            DerivKind::Images(dx, dy) => (dx.clone(), dy.clone()),
        }
    }
}

/// Applies a derivation image-wise to `h(x)` with the full noncommutative
/// Leibniz sum `D(x^n) = sum_a x^a * D(x) * x^(n-1-a)` (the images need not
/// commute with x).
fn apply_to_poly_of_x(spec: &OreAlgebraSpec, p: &Poly, dx: &OreElement) -> OreElement {
    let mut out = OreElement::zero(spec);
    if dx.is_zero() {
        return out;
    }
    let x = OreElement::x(spec);
    for (n, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() || n == 0 {
            continue;
        }
        for a in 0..n {
            let term = x.pow(a).mul(dx).mul(&x.pow(n - 1 - a)).scale(c);
            out = out.add(&term);
        }
    }
    out
}

/// Residual of the Leibniz constraint on the defining relation:
/// `D(y)x + yD(x) - q(D(x)y + xD(y)) - D(h(x))`.
fn check_derivation(spec: &OreAlgebraSpec, dx: &OreElement, dy: &OreElement) -> Result<()> {
    let x = OreElement::x(spec);
    let y = OreElement::y(spec);
    let lhs = dy.mul(&x).add(&y.mul(dx));
    let rhs = dx.mul(&y).add(&x.mul(dy)).scale(spec.q());
    let dh = apply_to_poly_of_x(spec, spec.h(), dx);
    let residual = lhs.sub(&rhs).sub(&dh);
    if residual.is_zero() {
        Ok(())
    } else {
        Err(Error::BadDerivation(format!(
            "generator images break the Leibniz constraint on the relation; residual = {residual}"
        )))
    }
}

/// Extends the derivation from generator images to the whole algebra by the
/// Leibniz rule.
pub fn derivation_apply(d: &DerivSpec, a: &OreElement) -> OreElement {
    if let DerivKind::Ad(inner) = &d.kind {
        return inner.commutator(a);
    }
    let spec = &d.spec;
    let (dx, dy) = d.images();
    let y = OreElement::y(spec);
    let mut out = OreElement::zero(spec);
    for (j, p) in a.terms() {
        // D(p(x) y^j) = D(p) y^j + p * D(y^j).
        let dp = apply_to_poly_of_x(spec, p, &dx);
        out = out.add(&dp.mul(&y.pow(*j)));
        if !dy.is_zero() {
            for b in 0..*j {
                let term = y.pow(b).mul(&dy).mul(&y.pow(j - 1 - b));
                out = out.add(&OreElement::from_poly(spec, p.clone()).mul(&term));
            }
        }
    }
    out
}

/// Default iteration cap for [`exp_derivation`].
pub const EXP_CAP_DEFAULT: usize = 64;

/// `exp(d)` applied to `a`: the sum `sum_k d^k(a) / k!`, which terminates when
/// `d` is locally nilpotent on `a` within `cap` steps.
pub fn exp_derivation(d: &DerivSpec, a: &OreElement, cap: usize) -> Result<OreElement> {
    if d.spec.ring().characteristic() != 0 {
        return Err(Error::NeedsCharZero);
    }
    let ring = d.spec.ring();
    let mut acc = a.clone();
    let mut term = a.clone();
    for k in 1..=cap {
        term = derivation_apply(d, &term);
        if term.is_zero() {
            return Ok(acc);
        }
        let inv_k = ring
            .inv(&ring.from_i64(k as i64))
            .expect("nonzero integer in characteristic 0");
        term = term.scale(&inv_k);
        acc = acc.add(&term);
    }
    Err(Error::NotNilpotent { cap })
}

/// The gcd/squarefree data attached to `h`: monic `gcd(h, h')`, the quotient
/// `pi = h / gcd(h, h')`, and the multiplicity profile mapping each
/// multiplicity to the (squarefree) product of factors occurring with exactly
/// that multiplicity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HInvariants {
    pub gcd: Poly,
    pub pi: Poly,
    pub profile: BTreeMap<usize, Poly>,
}

/// Computes [`HInvariants`].  Over the rationals the profile comes from the
/// gcd chain; over a prime field it groups the full irreducible factorization
/// by multiplicity.
pub fn h_invariants(h: &Poly) -> Result<HInvariants> {
    if h.is_zero() {
        return Err(Error::ZeroInput("the polynomial h must be nonzero".into()));
    }
    let monic = h.make_monic();
    let gcd = monic.gcd_monic(&monic.derivative());
    let pi = monic.div_exact(&gcd).make_monic();
    let mut profile = BTreeMap::new();
    if h.ring().characteristic() == 0 {
        for (factor, mult) in yun_squarefree(&monic) {
            profile.insert(mult, factor);
        }
    } else {
        let mut grouped: BTreeMap<usize, Poly> = BTreeMap::new();
        for (factor, mult) in factor_fp(&monic) {
            let entry = grouped.entry(mult).or_insert_with(|| Poly::one(h.ring()));
            *entry = entry.mul(&factor);
        }
        profile = grouped;
    }
    Ok(HInvariants { gcd, pi, profile })
}
