//! Quantum generalized Heisenberg algebras `H_q(f,g)`: the unital algebra on
//! generators x, h, y with relations
//!
//! ```text
//! h·x = x·f(h),    y·h = f(h)·y,    y·x − q·x·y = g(h)     (q ≠ 0)
//! ```
//!
//! Provides PBW normal ordering on the basis `{x^i h^j y^k}`, the
//! weight-cycle machinery for finite-dimensional modules over prime fields,
//! explicit matrix constructions of the three families of simple modules,
//! relation verification, simplicity and isomorphism testing, and the
//! parameter-transform isomorphisms.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::scalar::{Ring, Scalar};
use crate::{Error, Result};

/// Defining data of `H_q(f,g)`: the ring, a nonzero scalar `q`, and the two
/// parameter polynomials in `h`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QghaSpec {
    ring: Ring,
    q: Scalar,
    f: Poly,
    g: Poly,
}

impl QghaSpec {
    pub fn new(ring: Ring, q: Scalar, f: Poly, g: Poly) -> Result<QghaSpec> {
        if q.is_zero() {
            return Err(Error::ZeroInput("the deformation parameter q".into()));
        }
        assert!(f.ring() == ring && g.ring() == ring, "parameter rings must match");
        Ok(QghaSpec { ring, q, f, g })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn q(&self) -> &Scalar {
        &self.q
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn g(&self) -> &Poly {
        &self.g
    }
}

/// An element in PBW form: map from `(x-exponent, y-exponent)` to the
/// coefficient polynomial in `h`; zero polynomials are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QghaElement {
    spec: QghaSpec,
    terms: BTreeMap<(usize, usize), Poly>,
}

impl QghaElement {
    pub fn zero(spec: &QghaSpec) -> QghaElement {
        QghaElement { spec: spec.clone(), terms: BTreeMap::new() }
    }

    pub fn one(spec: &QghaSpec) -> QghaElement {
        QghaElement::monomial(spec, 0, Poly::one(spec.ring), 0)
    }

    pub fn x(spec: &QghaSpec) -> QghaElement {
        QghaElement::monomial(spec, 1, Poly::one(spec.ring), 0)
    }

    pub fn y(spec: &QghaSpec) -> QghaElement {
        QghaElement::monomial(spec, 0, Poly::one(spec.ring), 1)
    }

    pub fn h(spec: &QghaSpec) -> QghaElement {
        QghaElement::monomial(spec, 0, Poly::x(spec.ring), 0)
    }

    /// `x^i · p(h) · y^k`.
    pub fn monomial(spec: &QghaSpec, i: usize, p: Poly, k: usize) -> QghaElement {
        let mut e = QghaElement::zero(spec);
        e.insert_add(i, p, k);
        e
    }

    pub fn from_poly_h(spec: &QghaSpec, p: Poly) -> QghaElement {
        QghaElement::monomial(spec, 0, p, 0)
    }

    pub fn spec(&self) -> &QghaSpec {
        &self.spec
    }

    pub fn terms(&self) -> &BTreeMap<(usize, usize), Poly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert_add(&mut self, i: usize, p: Poly, k: usize) {
        if p.is_zero() {
            return;
        }
        match self.terms.remove(&(i, k)) {
            None => {
                self.terms.insert((i, k), p);
            }
            Some(old) => {
                let sum = old.add(&p);
                if !sum.is_zero() {
                    self.terms.insert((i, k), sum);
                }
            }
        }
    }

    pub fn add(&self, other: &QghaElement) -> QghaElement {
        assert!(self.spec == other.spec, "mixed algebra specs");
        let mut out = self.clone();
        for ((i, k), p) in &other.terms {
            out.insert_add(*i, p.clone(), *k);
        }
        out
    }

    pub fn neg(&self) -> QghaElement {
        let mut out = QghaElement::zero(&self.spec);
        for ((i, k), p) in &self.terms {
            out.insert_add(*i, p.neg(), *k);
        }
        out
    }

    pub fn sub(&self, other: &QghaElement) -> QghaElement {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> QghaElement {
        let mut out = QghaElement::zero(&self.spec);
        for ((i, k), p) in &self.terms {
            out.insert_add(*i, p.scale(c), *k);
        }
        out
    }

    /// Right multiplication by `x`, using the closed commutation rule
    /// `y^k·x = q^k·x·y^k + Σ_{j<k} q^j·g(f^{∘(k−1−j)}(h))·y^{k−1}`
    /// together with `p(h)·x = x·p(f(h))`.
    fn times_x(&self) -> QghaElement {
        let ring = self.spec.ring;
        let f = &self.spec.f;
        let g = &self.spec.g;
        let q = &self.spec.q;
        let mut out = QghaElement::zero(&self.spec);
        for ((i, k), p) in &self.terms {
            // Leading piece: q^k · x^(i+1) · p(f(h)) · y^k.
            let lead = p.compose(f).scale(&ring.pow(q, *k as u64));
            out.insert_add(i + 1, lead, *k);
            // Lower piece: x^i · p(h)·s_k(h) · y^(k-1).
            if *k >= 1 {
                let mut s = Poly::zero(ring);
                for j in 0..*k {
                    let gf = g.compose(&f.compose_iter(k - 1 - j));
                    s = s.add(&gf.scale(&ring.pow(q, j as u64)));
                }
                out.insert_add(*i, p.mul(&s), k - 1);
            }
        }
        out
    }

    /// Right multiplication by a polynomial in `h`, using
    /// `y^k · r(h) = r(f^{∘k}(h)) · y^k`.
    fn times_h_poly(&self, r: &Poly) -> QghaElement {
        let f = &self.spec.f;
        let mut out = QghaElement::zero(&self.spec);
        for ((i, k), p) in &self.terms {
            let moved = r.compose(&f.compose_iter(*k));
            out.insert_add(*i, p.mul(&moved), *k);
        }
        out
    }

    /// Right multiplication by `y^k` (trivial in PBW form).
    fn times_y_pow(&self, k2: usize) -> QghaElement {
        let mut out = QghaElement::zero(&self.spec);
        for ((i, k), p) in &self.terms {
            out.insert_add(*i, p.clone(), *k + k2);
        }
        out
    }

    /// PBW product.
    pub fn mul(&self, other: &QghaElement) -> QghaElement {
        assert!(self.spec == other.spec, "mixed algebra specs");
        let mut out = QghaElement::zero(&self.spec);
        for ((i2, k2), p2) in &other.terms {
            let mut e = self.clone();
            for _ in 0..*i2 {
                e = e.times_x();
            }
            e = e.times_h_poly(p2);
            e = e.times_y_pow(*k2);
            out = out.add(&e);
        }
        out
    }

    pub fn pow(&self, e: usize) -> QghaElement {
        let mut out = QghaElement::one(&self.spec);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn commutator(&self, other: &QghaElement) -> QghaElement {
        self.mul(other).sub(&other.mul(self))
    }
}

impl fmt::Display for QghaElement {
    /// PBW terms with `(x-exponent, y-exponent)` descending, each rendered
    /// as `x^i * coefficient * y^k`, e.g. `2*x*h^4*y + h^3`.
    fn fmt(&self, fo: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(fo, "0");
        }
        let mut out = String::new();
        for ((i, k), p) in self.terms.iter().rev() {
            let (negated, body) = qgha_term_text(p, *i, *k);
            if out.is_empty() {
                if negated {
                    out.push('-');
                }
            } else if negated {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&body);
        }
        write!(fo, "{out}")
    }
}

/// Renders one PBW term; the flag says whether a leading minus was claimed.
fn qgha_term_text(p: &Poly, i: usize, k: usize) -> (bool, String) {
    let nonzero = p.coeffs().iter().filter(|c| !c.is_zero()).count();
    if i == 0 && k == 0 {
        let s = p.to_string_var("h");
        return match s.strip_prefix('-') {
            Some(rest) if nonzero == 1 => (true, rest.to_string()),
            _ => (false, s),
        };
    }
    let xpart = match i {
        0 => None,
        1 => Some("x".to_string()),
        _ => Some(format!("x^{i}")),
    };
    let ypart = match k {
        0 => None,
        1 => Some("y".to_string()),
        _ => Some(format!("y^{k}")),
    };
    if nonzero > 1 {
        let mut parts: Vec<String> = Vec::new();
        parts.extend(xpart);
        parts.push(format!("({})", p.to_string_var("h")));
        parts.extend(ypart);
        return (false, parts.join("*"));
    }
    // Single-monomial coefficient c*h^d: inline it.
    let d = p.degree().expect("nonzero term");
    let c = p.coeff(d);
    let mag = c.abs();
    let mut parts: Vec<String> = Vec::new();
    if !mag.is_one() {
        parts.push(mag.to_string());
    }
    parts.extend(xpart);
    if d == 1 {
        parts.push("h".to_string());
    } else if d > 1 {
        parts.push(format!("h^{d}"));
    }
    parts.extend(ypart);
    if parts.is_empty() {
        parts.push("1".to_string());
    }
    (c.is_negative(), parts.join("*"))
}

/// A letter of a word in the generators.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum QghaLetter {
    X,
    H,
    Y,
}

/// Parses a word like `"yhx"` (whitespace ignored) into letters.
pub fn parse_word(word: &str) -> Result<Vec<QghaLetter>> {
    let mut out = Vec::new();
    for (off, ch) in word.char_indices() {
        match ch {
            'x' => out.push(QghaLetter::X),
            'h' => out.push(QghaLetter::H),
            'y' => out.push(QghaLetter::Y),
            c if c.is_whitespace() => {}
            c => {
                return Err(Error::Parse {
                    offset: off,
                    msg: format!("unexpected character {c:?} in generator word"),
                })
            }
        }
    }
    Ok(out)
}

/// Normal-orders a generator word by literal rewriting: repeatedly replaces
/// the leftmost inversion using `h·x → x·f(h)`, `y·h → f(h)·y`,
/// `y·x → q·x·y + g(h)`.  Each step strictly decreases the inversion count
/// for the order x < h < y, so the rewriting terminates in PBW form.
pub fn normal_order_word(word: &[QghaLetter], spec: &QghaSpec) -> QghaElement {
    let ring = spec.ring;
    // Letters encoded by PBW rank so an inversion is a strictly descending
    // adjacent pair.
    let rank = |l: &QghaLetter| match l {
        QghaLetter::X => 0u8,
        QghaLetter::H => 1,
        QghaLetter::Y => 2,
    };
    let start: Vec<u8> = word.iter().map(rank).collect();
    let mut pending: BTreeMap<Vec<u8>, Scalar> = BTreeMap::from([(start, ring.one())]);
    let expand = |prefix: &[u8], mid: &Poly, extra: &[u8], suffix: &[u8], c: &Scalar,
                      sink: &mut Vec<(Vec<u8>, Scalar)>| {
        // prefix ++ h^d (for each monomial of mid) ++ extra ++ suffix.
        for (d, coeff) in mid.coeffs().iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let mut w = prefix.to_vec();
            w.extend(std::iter::repeat(1u8).take(d));
            w.extend_from_slice(extra);
            w.extend_from_slice(suffix);
            sink.push((w, ring.mul(c, coeff)));
        }
    };
    loop {
        // Find a word with an inversion.
        let Some(word) = pending
            .keys()
            .find(|w| w.windows(2).any(|p| p[0] > p[1]))
            .cloned()
        else {
            break;
        };
        let coeff = pending.remove(&word).unwrap();
        let pos = word
            .windows(2)
            .position(|p| p[0] > p[1])
            .expect("inversion present");
        let (prefix, rest) = word.split_at(pos);
        let (pair, suffix) = rest.split_at(2);
        let mut pieces: Vec<(Vec<u8>, Scalar)> = Vec::new();
        match (pair[0], pair[1]) {
            (1, 0) => {
                // h x -> x f(h).
                let mut pre = prefix.to_vec();
                pre.push(0);
                expand(&pre, &spec.f, &[], suffix, &coeff, &mut pieces);
            }
            (2, 1) => {
                // y h -> f(h) y.
                expand(prefix, &spec.f, &[2], suffix, &coeff, &mut pieces);
            }
            (2, 0) => {
                // y x -> q x y + g(h).
                let mut w = prefix.to_vec();
                w.extend_from_slice(&[0, 2]);
                w.extend_from_slice(suffix);
                pieces.push((w, ring.mul(&coeff, &spec.q)));
                expand(prefix, &spec.g, &[], suffix, &coeff, &mut pieces);
            }
            _ => unreachable!("not an inversion"),
        }
        for (w, c) in pieces {
            let entry = pending.entry(w).or_insert_with(|| ring.zero());
            *entry = ring.add(entry, &c);
        }
        pending.retain(|_, c| !c.is_zero());
    }
    // All words are now sorted x..x h..h y..y; collect into PBW terms.
    let mut out = QghaElement::zero(spec);
    for (w, c) in pending {
        let i = w.iter().filter(|&&l| l == 0).count();
        let j = w.iter().filter(|&&l| l == 1).count();
        let k = w.iter().filter(|&&l| l == 2).count();
        out.insert_add(i, Poly::monomial(c, j, ring), k);
    }
    out
}

/// Normal-orders a generator word given as text, e.g. `"yhx"`.
pub fn normal_order_qgha(word: &str, spec: &QghaSpec) -> Result<QghaElement> {
    Ok(normal_order_word(&parse_word(word)?, spec))
}

/// A periodic weight sequence: `f(λ(i)) = λ(i+1 mod m)` with `m` minimal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightCycle {
    ring: Ring,
    values: Vec<Scalar>,
}

impl WeightCycle {
    /// Validates the cycle property and the minimality of the period.
    pub fn new(ring: Ring, values: Vec<Scalar>, f: &Poly) -> Result<WeightCycle> {
        if values.is_empty() {
            return Err(Error::ZeroInput("weight cycle".into()));
        }
        let m = values.len();
        for i in 0..m {
            if f.eval(&values[i]) != values[(i + 1) % m] {
                return Err(Error::BadArgument(format!(
                    "not an f-cycle: f(lambda({i})) != lambda({})",
                    (i + 1) % m
                )));
            }
        }
        for d in 1..m {
            if m % d == 0 && (0..m).all(|i| values[i] == values[i % d]) {
                return Err(Error::BadArgument(format!(
                    "period {m} is not minimal: the sequence is {d}-periodic"
                )));
            }
        }
        Ok(WeightCycle { ring, values })
    }

    pub fn period(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn get(&self, i: usize) -> &Scalar {
        &self.values[i % self.values.len()]
    }
}

/// Guard for exhaustive orbit walking.
pub const CYCLE_FIELD_LIMIT: u64 = 1 << 20;

/// All cycles of the map `a ↦ f(a)` on `F_p` with minimal period at most
/// `max_period`, each starting at its minimal field representative and the
/// list sorted by that representative.
pub fn find_cycles(f: &Poly, max_period: usize) -> Result<Vec<WeightCycle>> {
    let ring = f.ring();
    let Ring::Fp(p) = ring else {
        return Err(Error::BadArgument(
            "cycle search requires a prime field; supply an explicit seed over the rationals"
                .into(),
        ));
    };
    if p >= CYCLE_FIELD_LIMIT {
        return Err(Error::BudgetExceeded(format!(
            "field size {p} exceeds the orbit-walk guard {CYCLE_FIELD_LIMIT}"
        )));
    }
    let n = p as usize;
    let image: Vec<usize> = (0..n)
        .map(|a| match f.eval(&ring.from_i64(a as i64)) {
            Scalar::Fp(v) => v as usize,
            Scalar::Rat(_) => unreachable!(),
        })
        .collect();
    // Walk the functional graph: 0 = unvisited, 1 = on current path, 2 = done.
    let mut color = vec![0u8; n];
    let mut pos = vec![usize::MAX; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if color[start] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut b = start;
        while color[b] == 0 {
            color[b] = 1;
            pos[b] = path.len();
            path.push(b);
            b = image[b];
        }
        if color[b] == 1 {
            // New cycle: the path tail from b's position.
            let cycle: Vec<usize> = path[pos[b]..].to_vec();
            if cycle.len() <= max_period {
                // Rotate to the minimal representative.
                let min_at = cycle
                    .iter()
                    .enumerate()
                    .min_by_key(|(_, v)| **v)
                    .map(|(i, _)| i)
                    .unwrap();
                let values: Vec<Scalar> = (0..cycle.len())
                    .map(|i| ring.from_i64(cycle[(min_at + i) % cycle.len()] as i64))
                    .collect();
                cycles.push(WeightCycle { ring, values });
            }
        }
        for v in path {
            color[v] = 2;
        }
    }
    cycles.sort_by_key(|c| match c.values[0] {
        Scalar::Fp(v) => v,
        Scalar::Rat(_) => unreachable!(),
    });
    Ok(cycles)
}

/// Iterates `f` from a seed until it returns to the seed; verifies
/// periodicity rather than searching the whole field (usable over the
/// rationals).  Errors if the orbit does not close within `max_period` steps.
pub fn cycle_from_seed(f: &Poly, seed: &Scalar, max_period: usize) -> Result<WeightCycle> {
    let ring = f.ring();
    let mut values = vec![seed.clone()];
    let mut current = seed.clone();
    for _ in 0..max_period {
        current = f.eval(&current);
        if current == *seed {
            return WeightCycle::new(ring, values, f);
        }
        values.push(current.clone());
    }
    Err(Error::Inconclusive(format!(
        "orbit of the seed does not return within {max_period} steps"
    )))
}

/// The companion sequence `μ(i+1) = q·μ(i) + g(λ(i))` over one full
/// `|λ|·|μ|`-window, with `|μ|` minimal such that `μ(|μ|·|λ|) = μ(0)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MuData {
    mu0: Scalar,
    values: Vec<Scalar>,
    mu_period: usize,
}

impl MuData {
    pub fn mu0(&self) -> &Scalar {
        &self.mu0
    }

    /// `μ(0), …, μ(|λ||μ|−1)`; the sequence extends periodically with
    /// period `|λ|·|μ|`.
    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn mu_period(&self) -> usize {
        self.mu_period
    }

    pub fn window_len(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, i: usize) -> &Scalar {
        &self.values[i % self.values.len()]
    }
}

/// Computes [`MuData`] for a cycle.  Over a prime field the return is
/// guaranteed (the step map is an affine bijection); over the rationals a
/// `period_guard` must be supplied and failure to close is an error.
pub fn mu_data(
    cycle: &WeightCycle,
    q: &Scalar,
    g: &Poly,
    mu0: &Scalar,
    period_guard: Option<usize>,
) -> Result<MuData> {
    let ring = g.ring();
    let m = cycle.period();
    let guard = match (ring, period_guard) {
        (_, Some(s)) => s,
        (Ring::Fp(p), None) => (p * p) as usize,
        (Ring::Rat, None) => {
            return Err(Error::BadArgument(
                "a period guard is required over the rationals".into(),
            ))
        }
    };
    let mut values = vec![mu0.clone()];
    let mut current = mu0.clone();
    for s in 1..=guard {
        for i in 0..m {
            let idx = (s - 1) * m + i;
            current = ring.add(&ring.mul(q, &current), &g.eval(cycle.get(idx)));
            values.push(current.clone());
        }
        if current == *mu0 {
            values.truncate(s * m);
            return Ok(MuData { mu0: mu0.clone(), values, mu_period: s });
        }
    }
    Err(Error::Inconclusive(format!(
        "mu-sequence does not close within {guard} lambda-periods"
    )))
}

/// The three families of finite-dimensional simple modules.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    A,
    B,
    C,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::A => write!(f, "a"),
            Family::B => write!(f, "b"),
            Family::C => write!(f, "c"),
        }
    }
}

/// Construction data retained with a module.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Provenance {
    /// Families a and b: the weight cycle, the μ-window, and the twist γ.
    Cycle {
        lambda: Vec<Scalar>,
        mu: Vec<Scalar>,
        gamma: Scalar,
    },
    /// Family c: the lowest weight α and the ν-window `ν(0..n−1)`.
    LowestWeight { alpha: Scalar, nu: Vec<Scalar> },
    /// A module pushed through a parameter transform.
    Transformed { transform: String, inner: Box<Provenance> },
}

/// A concrete module: three square matrices satisfying the defining
/// relations exactly.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatrixModule {
    pub spec: QghaSpec,
    pub family: Family,
    pub n: usize,
    pub x: Matrix,
    pub y: Matrix,
    pub h: Matrix,
    pub provenance: Provenance,
}

/// Parameters for [`build_module`].
#[derive(Clone, Debug)]
pub enum FamilyParams {
    /// `N = |λ||μ|` basis vectors; X the γ-twisted up-shift, Y the μ-weighted
    /// down-shift.
    A { cycle: WeightCycle, mu: MuData, gamma: Scalar },
    /// The dual: Y the γ-twisted plain down-shift, X the μ-weighted up-shift;
    /// requires some `μ(i) = 0` in the window.
    B { cycle: WeightCycle, mu: MuData, gamma: Scalar },
    /// Lowest-weight family: seed α, dimension found from the first vanishing
    /// of the ν-sequence within `n_cap` steps.
    C { alpha: Scalar, n_cap: usize },
}

/// Builds one module; every output satisfies the relations exactly
/// (checked by the [`verify_module`] postcondition tests).
pub fn build_module(spec: &QghaSpec, params: FamilyParams) -> Result<MatrixModule> {
    let ring = spec.ring;
    match params {
        FamilyParams::A { cycle, mu, gamma } | FamilyParams::B { cycle, mu, gamma }
            if gamma.is_zero() =>
        {
            let _ = (cycle, mu);
            Err(Error::ZeroInput("the twist gamma (must lie in F*)".into()))
        }
        FamilyParams::A { cycle, mu, gamma } => {
            let n = mu.window_len();
            let mut x = Matrix::zero(ring, n, n);
            let mut y = Matrix::zero(ring, n, n);
            let mut h = Matrix::zero(ring, n, n);
            for i in 0..n {
                h.set(i, i, cycle.get(i).clone());
            }
            for i in 0..n - 1 {
                x.set(i + 1, i, ring.one());
            }
            x.set(0, n - 1, gamma.clone());
            for i in 1..n {
                y.set(i - 1, i, mu.get(i).clone());
            }
            let gamma_inv = ring.inv(&gamma).expect("gamma is nonzero");
            y.set(n - 1, 0, ring.mul(&gamma_inv, mu.get(0)));
            Ok(MatrixModule {
                spec: spec.clone(),
                family: Family::A,
                n,
                x,
                y,
                h,
                provenance: Provenance::Cycle {
                    lambda: cycle.values().to_vec(),
                    mu: mu.values().to_vec(),
                    gamma,
                },
            })
        }
        FamilyParams::B { cycle, mu, gamma } => {
            let n = mu.window_len();
            if !mu.values().iter().any(Scalar::is_zero) {
                return Err(Error::BadArgument(
                    "the dual family needs some mu(i) = 0 in the window".into(),
                ));
            }
            let mut x = Matrix::zero(ring, n, n);
            let mut y = Matrix::zero(ring, n, n);
            let mut h = Matrix::zero(ring, n, n);
            for i in 0..n {
                h.set(i, i, cycle.get(i).clone());
            }
            // y: plain down-shift, gamma-twisted at the wrap.
            for i in 1..n {
                y.set(i - 1, i, ring.one());
            }
            y.set(n - 1, 0, ring.inv(&gamma).expect("gamma is nonzero"));
            // x: up-shift weighted by mu(i+1); the wrap carries gamma*mu(0).
            for i in 0..n - 1 {
                x.set(i + 1, i, mu.get(i + 1).clone());
            }
            x.set(0, n - 1, ring.mul(&gamma, mu.get(0)));
            Ok(MatrixModule {
                spec: spec.clone(),
                family: Family::B,
                n,
                x,
                y,
                h,
                provenance: Provenance::Cycle {
                    lambda: cycle.values().to_vec(),
                    mu: mu.values().to_vec(),
                    gamma,
                },
            })
        }
        FamilyParams::C { alpha, n_cap } => {
            // lambda(i) = f^(i)(alpha); nu(0) = 0, nu(i+1) = q nu(i) + g(lambda(i)).
            let mut lambda = vec![alpha.clone()];
            let mut nu = vec![ring.zero()];
            let mut n = None;
            for i in 0..n_cap {
                let next_nu = ring.add(&ring.mul(&spec.q, &nu[i]), &spec.g.eval(&lambda[i]));
                if next_nu.is_zero() {
                    n = Some(i + 1);
                    break;
                }
                nu.push(next_nu);
                lambda.push(spec.f.eval(&lambda[i]));
            }
            let Some(n) = n else {
                return Err(Error::Inconclusive(format!(
                    "nu-sequence for alpha = {alpha} has no zero within {n_cap} steps"
                )));
            };
            let mut x = Matrix::zero(ring, n, n);
            let mut y = Matrix::zero(ring, n, n);
            let mut h = Matrix::zero(ring, n, n);
            for i in 0..n {
                h.set(i, i, lambda[i].clone());
            }
            for i in 0..n.saturating_sub(1) {
                x.set(i + 1, i, ring.one());
            }
            for i in 1..n {
                y.set(i - 1, i, nu[i].clone());
            }
            Ok(MatrixModule {
                spec: spec.clone(),
                family: Family::C,
                n,
                x,
                y,
                h,
                provenance: Provenance::LowestWeight { alpha, nu },
            })
        }
    }
}

/// The three relation residuals of a module; all must vanish.
#[derive(Clone, Debug)]
pub struct ModuleResiduals {
    /// `H·X − X·f(H)`.
    pub hx: Matrix,
    /// `Y·H − f(H)·Y`.
    pub yh: Matrix,
    /// `Y·X − q·X·Y − g(H)`.
    pub bracket: Matrix,
}

impl ModuleResiduals {
    pub fn all_zero(&self) -> bool {
        self.hx.is_zero() && self.yh.is_zero() && self.bracket.is_zero()
    }
}

/// Computes the residual matrices of the defining relations.
pub fn verify_module(m: &MatrixModule) -> ModuleResiduals {
    let f_h = m.h.eval_poly(m.spec.f());
    let g_h = m.h.eval_poly(m.spec.g());
    ModuleResiduals {
        hx: m.h.mul(&m.x).sub(&m.x.mul(&f_h)),
        yh: m.y.mul(&m.h).sub(&f_h.mul(&m.y)),
        bracket: m.y.mul(&m.x).sub(&m.x.mul(&m.y).scale(m.spec.q())).sub(&g_h),
    }
}

/// Strategy for the simplicity test.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SimplicityMethod {
    /// Enumerate every normalized nonzero vector and check that each
    /// generates the whole space.
    Exhaustive,
    /// Try the standard basis plus seeded random vectors first; a proper
    /// closure decides non-simplicity immediately, otherwise fall back to
    /// the exhaustive sweep when within budget.
    Cyclic,
}

/// Budget for the exhaustive sweep: number of normalized vectors.
pub const SIMPLICITY_BUDGET: u128 = 1 << 20;

/// Dimension of the span-closure of `v` under the three matrices; `v` in a
/// module of dimension `n`.
fn closure_dim(mats: [&Matrix; 3], ring: Ring, v: &[Scalar], n: usize) -> usize {
    // Forward-eliminated basis rows with their pivot columns.
    let mut basis: Vec<(usize, Vec<Scalar>)> = Vec::new();
    let mut queue: Vec<Vec<Scalar>> = vec![v.to_vec()];
    let reduce = |basis: &[(usize, Vec<Scalar>)], mut w: Vec<Scalar>| -> Option<(usize, Vec<Scalar>)> {
        for (pivot, row) in basis {
            if !w[*pivot].is_zero() {
                let c = w[*pivot].clone();
                for j in 0..w.len() {
                    let t = ring.mul(&c, &row[j]);
                    w[j] = ring.sub(&w[j], &t);
                }
            }
        }
        let pivot = w.iter().position(|c| !c.is_zero())?;
        let inv = ring.inv(&w[pivot]).expect("field element is invertible");
        for c in w.iter_mut() {
            *c = ring.mul(c, &inv);
        }
        Some((pivot, w))
    };
    while let Some(w) = queue.pop() {
        let Some((pivot, row)) = reduce(&basis, w) else { continue };
        for m in mats {
            queue.push(m.mul_vec(&row));
        }
        basis.push((pivot, row));
        if basis.len() == n {
            return n;
        }
    }
    basis.len()
}

/// Iterates all normalized vectors of `F_p^n` (first nonzero coordinate 1).
fn for_each_normalized_vector(
    p: u64,
    n: usize,
    ring: Ring,
    mut visit: impl FnMut(&[Scalar]) -> bool,
) -> bool {
    let mut v = vec![ring.zero(); n];
    for lead in 0..n {
        // v[lead] = 1; coordinates after lead range over all of F_p.
        for c in v.iter_mut() {
            *c = ring.zero();
        }
        v[lead] = ring.one();
        loop {
            if !visit(&v) {
                return false;
            }
            // Odometer over positions lead+1..n.
            let mut j = n;
            loop {
                if j == lead + 1 {
                    break;
                }
                j -= 1;
                let cur = match v[j] {
                    Scalar::Fp(r) => r,
                    Scalar::Rat(_) => unreachable!(),
                };
                if cur + 1 < p {
                    v[j] = ring.from_i64((cur + 1) as i64);
                    break;
                }
                v[j] = ring.zero();
            }
            if (lead + 1..n).all(|j| v[j].is_zero()) {
                break;
            }
        }
    }
    true
}

/// Decides simplicity.  A vector whose closure is proper witnesses a proper
/// nonzero submodule (definitive `false`); confirming simplicity requires
/// the exhaustive sweep.
pub fn is_simple(m: &MatrixModule, method: SimplicityMethod) -> Result<bool> {
    let ring = m.spec.ring;
    let Ring::Fp(p) = ring else {
        return Err(Error::BadArgument(
            "simplicity testing enumerates vectors over a prime field".into(),
        ));
    };
    let n = m.n;
    let mats = [&m.x, &m.y, &m.h];
    let full = |v: &[Scalar]| closure_dim(mats, ring, v, n) == n;
    if method == SimplicityMethod::Cyclic {
        // Cheap witnesses first: the standard basis and seeded random vectors.
        for i in 0..n {
            let mut v = vec![ring.zero(); n];
            v[i] = ring.one();
            if !full(&v) {
                return Ok(false);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x51_6d_70_1e);
        for _ in 0..16 {
            let v: Vec<Scalar> = (0..n)
                .map(|_| ring.from_i64(rng.gen_range(0..p) as i64))
                .collect();
            if v.iter().all(Scalar::is_zero) {
                continue;
            }
            if !full(&v) {
                return Ok(false);
            }
        }
    }
    // Exhaustive sweep (also the fallback confirming a cyclic pass).
    let count = ((p as u128).pow(n as u32) - 1) / (p as u128 - 1).max(1);
    if count > SIMPLICITY_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "{count} normalized vectors exceed the simplicity budget {SIMPLICITY_BUDGET}"
        )));
    }
    let all_generate = for_each_normalized_vector(p, n, ring, |v| full(v));
    Ok(all_generate)
}

/// Budget for enumerating intertwiner-space combinations.
const ISO_ENUM_BUDGET: u128 = 1 << 14;

/// Decides module isomorphism by solving the intertwiner system
/// `T·X₁ = X₂·T, T·Y₁ = Y₂·T, T·H₁ = H₂·T` and searching the solution space
/// for an invertible element.
pub fn is_isomorphic(m1: &MatrixModule, m2: &MatrixModule) -> Result<bool> {
    if m1.spec != m2.spec {
        return Err(Error::BadArgument(
            "modules over different algebra specs are never compared".into(),
        ));
    }
    if m1.n != m2.n {
        return Ok(false);
    }
    let ring = m1.spec.ring;
    let Ring::Fp(p) = ring else {
        return Err(Error::BadArgument(
            "the isomorphism search enumerates over a prime field".into(),
        ));
    };
    let n = m1.n;
    // Unknown T as a row-major n^2 vector; three blocks of n^2 equations.
    let pairs = [(&m1.x, &m2.x), (&m1.y, &m2.y), (&m1.h, &m2.h)];
    let mut system = Matrix::zero(ring, 3 * n * n, n * n);
    for (blk, (a1, a2)) in pairs.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                let row = blk * n * n + i * n + j;
                // (T·A1)[i][j] = sum_c T[i][c] A1[c][j].
                for c in 0..n {
                    let cur = system.get(row, i * n + c).clone();
                    system.set(row, i * n + c, ring.add(&cur, a1.get(c, j)));
                }
                // −(A2·T)[i][j] = −sum_r A2[i][r] T[r][j].
                for r in 0..n {
                    let cur = system.get(row, r * n + j).clone();
                    system.set(row, r * n + j, ring.sub(&cur, a2.get(i, r)));
                }
            }
        }
    }
    let kernel = system.kernel_basis();
    if kernel.is_empty() {
        return Ok(false);
    }
    let to_matrix = |coeffs: &[Scalar]| -> Matrix {
        let mut t = Matrix::zero(ring, n, n);
        for i in 0..n {
            for j in 0..n {
                let mut v = ring.zero();
                for (b, c) in kernel.iter().zip(coeffs) {
                    v = ring.add(&v, &ring.mul(c, &b[i * n + j]));
                }
                t.set(i, j, v);
            }
        }
        t
    };
    let k = kernel.len();
    let combos = ((p as u128).pow(k as u32) - 1) / (p as u128 - 1).max(1);
    if combos <= ISO_ENUM_BUDGET {
        let mut found = false;
        for_each_normalized_vector(p, k, ring, |coeffs| {
            if to_matrix(coeffs).is_invertible() {
                found = true;
                return false;
            }
            true
        });
        return Ok(found);
    }
    // Large solution space: random sampling, then Schur's lemma for simple
    // inputs (any nonzero intertwiner out of a simple module is injective,
    // hence invertible in equal dimension).
    let mut rng = ChaCha8Rng::seed_from_u64(0x150_0709);
    for _ in 0..200 {
        let coeffs: Vec<Scalar> = (0..k)
            .map(|_| ring.from_i64(rng.gen_range(0..p) as i64))
            .collect();
        if coeffs.iter().all(Scalar::is_zero) {
            continue;
        }
        if to_matrix(&coeffs).is_invertible() {
            return Ok(true);
        }
    }
    if is_simple(m1, SimplicityMethod::Cyclic)? {
        return Ok(true);
    }
    Err(Error::Inconclusive(
        "nonzero intertwiners exist but no invertible one was found within the sampling budget"
            .into(),
    ))
}

/// Budget guard for [`classify_simples`].
const CLASSIFY_BUDGET: u128 = 1 << 24;

/// Enumerates, verifies, simplicity-filters, and isomorphism-deduplicates
/// the modules of dimension ≤ `n_max` from all three families.
pub fn classify_simples(spec: &QghaSpec, n_max: usize) -> Result<Vec<MatrixModule>> {
    let ring = spec.ring;
    let Ring::Fp(p) = ring else {
        return Err(Error::BadArgument(
            "classification enumerates parameters over a prime field".into(),
        ));
    };
    if n_max < 1 {
        return Err(Error::BadArgument("n_max must be at least 1".into()));
    }
    if (p as u128).saturating_pow(n_max as u32) > CLASSIFY_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "p^N_max = {p}^{n_max} exceeds the classification budget"
        )));
    }
    let mut candidates: Vec<MatrixModule> = Vec::new();
    // Families a and b from (cycle, mu0, gamma) triples.
    for cycle in find_cycles(spec.f(), n_max)? {
        for mu0 in 0..p {
            let mu = mu_data(&cycle, spec.q(), spec.g(), &ring.from_i64(mu0 as i64), None)?;
            if mu.window_len() > n_max {
                continue;
            }
            let has_zero = mu.values().iter().any(Scalar::is_zero);
            for gamma in 1..p {
                let gamma = ring.from_i64(gamma as i64);
                candidates.push(build_module(
                    spec,
                    FamilyParams::A { cycle: cycle.clone(), mu: mu.clone(), gamma: gamma.clone() },
                )?);
                if has_zero {
                    candidates.push(build_module(
                        spec,
                        FamilyParams::B { cycle: cycle.clone(), mu: mu.clone(), gamma },
                    )?);
                }
            }
        }
    }
    // Family c from lowest-weight seeds.
    for alpha in 0..p {
        match build_module(
            spec,
            FamilyParams::C { alpha: ring.from_i64(alpha as i64), n_cap: n_max },
        ) {
            Ok(m) => candidates.push(m),
            Err(Error::Inconclusive(_)) => {} // No vanishing within the cap.
            Err(e) => return Err(e),
        }
    }
    // Verify, filter by simplicity, deduplicate.
    let mut kept: Vec<MatrixModule> = Vec::new();
    for m in candidates {
        debug_assert!(verify_module(&m).all_zero());
        if !is_simple(&m, SimplicityMethod::Cyclic)? {
            continue;
        }
        let mut duplicate = false;
        for existing in &kept {
            if is_isomorphic(existing, &m)? {
                duplicate = true;
                break;
            }
        }
        if !duplicate {
            kept.push(m);
        }
    }
    kept.sort_by_key(|m| (m.n, m.family as u8));
    Ok(kept)
}

/// The parameter-transform isomorphisms: each sends `H_q(f,g)` to an
/// isomorphic algebra with the listed new parameters; `q` never changes.
#[derive(Clone, Debug)]
pub enum IsoTransform {
    /// `τ_α`: `f ↦ f(h−α)+α`, `g ↦ g(h−α)`.
    Tau(Scalar),
    /// `σ_λ` (λ ≠ 0): `f ↦ λ·f(λ⁻¹h)`, `g ↦ g(λ⁻¹h)`.
    Sigma(Scalar),
    /// `ρ_{λ,μ}` (λ, μ ≠ 0): `f ↦ f`, `g ↦ λμ·g`.
    Rho(Scalar, Scalar),
}

impl fmt::Display for IsoTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsoTransform::Tau(a) => write!(f, "tau({a})"),
            IsoTransform::Sigma(l) => write!(f, "sigma({l})"),
            IsoTransform::Rho(l, m) => write!(f, "rho({l},{m})"),
        }
    }
}

/// Applies a parameter transform to the spec.
pub fn iso_transform(kind: &IsoTransform, spec: &QghaSpec) -> Result<QghaSpec> {
    let ring = spec.ring;
    let (f2, g2) = match kind {
        IsoTransform::Tau(alpha) => {
            // h - alpha as the inner substitution.
            let shift = Poly::x(ring).sub(&Poly::constant(alpha.clone(), ring));
            let f2 = spec
                .f
                .compose(&shift)
                .add(&Poly::constant(alpha.clone(), ring));
            let g2 = spec.g.compose(&shift);
            (f2, g2)
        }
        IsoTransform::Sigma(lam) => {
            if lam.is_zero() {
                return Err(Error::ZeroInput("the scale of sigma".into()));
            }
            let lam_inv = ring.inv(lam).expect("lambda is nonzero");
            let inner = Poly::x(ring).scale(&lam_inv);
            let f2 = spec.f.compose(&inner).scale(lam);
            let g2 = spec.g.compose(&inner);
            (f2, g2)
        }
        IsoTransform::Rho(lam, mu) => {
            if lam.is_zero() || mu.is_zero() {
                return Err(Error::ZeroInput("a scale of rho".into()));
            }
            (spec.f.clone(), spec.g.scale(&ring.mul(lam, mu)))
        }
    };
    QghaSpec::new(ring, spec.q.clone(), f2, g2)
}

/// Pushes a module forward along a parameter transform; the result is a
/// module for the transformed spec (relations preserved exactly).
pub fn transform_module(kind: &IsoTransform, m: &MatrixModule) -> Result<MatrixModule> {
    let ring = m.spec.ring;
    let spec2 = iso_transform(kind, &m.spec)?;
    let (x2, y2, h2) = match kind {
        IsoTransform::Tau(alpha) => {
            let shifted = m.h.add(&Matrix::identity(ring, m.n).scale(alpha));
            (m.x.clone(), m.y.clone(), shifted)
        }
        IsoTransform::Sigma(lam) => (m.x.clone(), m.y.clone(), m.h.scale(lam)),
        IsoTransform::Rho(lam, mu) => (m.x.scale(lam), m.y.scale(mu), m.h.clone()),
    };
    Ok(MatrixModule {
        spec: spec2,
        family: m.family,
        n: m.n,
        x: x2,
        y: y2,
        h: h2,
        provenance: Provenance::Transformed {
            transform: kind.to_string(),
            inner: Box::new(m.provenance.clone()),
        },
    })
}

fn scalar_json(s: &Scalar) -> serde_json::Value {
    match s {
        Scalar::Fp(v) => serde_json::json!(v),
        Scalar::Rat(_) => serde_json::json!(s.to_string()),
    }
}

fn matrix_json(m: &Matrix) -> serde_json::Value {
    let rows: Vec<Vec<serde_json::Value>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| scalar_json(m.get(i, j))).collect())
        .collect();
    serde_json::json!(rows)
}

fn provenance_json(p: &Provenance) -> serde_json::Value {
    match p {
        Provenance::Cycle { lambda, mu, gamma } => serde_json::json!({
            "lambda": lambda.iter().map(scalar_json).collect::<Vec<_>>(),
            "mu": mu.iter().map(scalar_json).collect::<Vec<_>>(),
            "gamma": scalar_json(gamma),
        }),
        Provenance::LowestWeight { alpha, nu } => serde_json::json!({
            "alpha": scalar_json(alpha),
            "nu": nu.iter().map(scalar_json).collect::<Vec<_>>(),
        }),
        Provenance::Transformed { transform, inner } => serde_json::json!({
            "transform": transform,
            "inner": provenance_json(inner),
        }),
    }
}

/// JSON export of a module: characteristic, dimension, family tag,
/// provenance, and the three matrices row-major.
pub fn module_json(m: &MatrixModule) -> serde_json::Value {
    serde_json::json!({
        "schema": 1,
        "p": m.spec.ring.characteristic(),
        "n": m.n,
        "family": m.family.to_string(),
        "provenance": provenance_json(&m.provenance),
        "x": matrix_json(&m.x),
        "y": matrix_json(&m.y),
        "h": matrix_json(&m.h),
    })
}
