//! Universal normal-ordering polynomials `U_{n,d}`, their coefficient tables
//! by four independent routes, specializations to classical combinatorial
//! numbers, mod-p vanishing checks, and the formal ODE solver.
//!
//! The ambient ring has mutually commuting variables `y_0, y_1, ...` and one
//! noncommuting variable `t` with `t*y_j = y_j*t + y_{j+1}`; `U_{n,d}` is the
//! normal form of `(y_0*t^d)^n`.  Every monomial of a certified `U_{n,d}` has
//! the shape `c * y_0^(n-l) * y_(lambda) * t^k` with `lambda` a partition of
//! `n*d - k` having `l <= n-1` parts.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::ore::{OreAlgebraSpec, OreElement};
use crate::partition::{self, falling_product_int, Partition};
use crate::poly::Poly;
use crate::scalar::{Ring, Scalar};
use crate::{Error, Result};

fn binom(k: usize, j: usize) -> BigInt {
    if j > k {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(k), BigInt::from(j))
}

/// One monomial `prod_j y_j^(e_j) * t^k`; zero exponents are never stored.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct DiffMonomial {
    y_exponents: BTreeMap<usize, usize>,
    t_power: usize,
}

impl DiffMonomial {
    pub fn new(y_exponents: BTreeMap<usize, usize>, t_power: usize) -> DiffMonomial {
        let y_exponents = y_exponents.into_iter().filter(|(_, e)| *e > 0).collect();
        DiffMonomial { y_exponents, t_power }
    }

    pub fn one() -> DiffMonomial {
        DiffMonomial { y_exponents: BTreeMap::new(), t_power: 0 }
    }

    pub fn y_exponents(&self) -> &BTreeMap<usize, usize> {
        &self.y_exponents
    }

    pub fn t_power(&self) -> usize {
        self.t_power
    }

    /// Exponent of `y_0`.
    pub fn y0_exponent(&self) -> usize {
        self.y_exponents.get(&0).copied().unwrap_or(0)
    }

    /// The positive-index part of the monomial as a partition: index `j >= 1`
    /// repeated `e_j` times.
    pub fn lambda(&self) -> Partition {
        let mut parts = Vec::new();
        for (j, e) in &self.y_exponents {
            if *j >= 1 {
                parts.extend(std::iter::repeat(*j).take(*e));
            }
        }
        Partition::new(parts)
    }

    pub fn total_y_degree(&self) -> usize {
        self.y_exponents.values().sum()
    }
}

/// An integer-linear combination of [`DiffMonomial`]s; no zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct UniversalPoly {
    terms: BTreeMap<DiffMonomial, BigInt>,
}

impl UniversalPoly {
    pub fn zero() -> UniversalPoly {
        UniversalPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> UniversalPoly {
        let mut u = UniversalPoly::zero();
        u.insert_add(DiffMonomial::one(), BigInt::one());
        u
    }

    pub fn terms(&self) -> &BTreeMap<DiffMonomial, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert_add(&mut self, m: DiffMonomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            None => {
                self.terms.insert(m, c);
            }
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(m, sum);
                }
            }
        }
    }

    pub fn add(&self, other: &UniversalPoly) -> UniversalPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &UniversalPoly) -> UniversalPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(m.clone(), -c.clone());
        }
        out
    }

    /// Noncommutative product, normalizing with the closed binomial rule
    /// `t^k * y_m = sum_j C(k,j) * y_(m+j) * t^(k-j)`.
    pub fn mul(&self, other: &UniversalPoly) -> UniversalPoly {
        let mut out = UniversalPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                // Expand other's y-block into a variable list and push t^k
                // of the left factor through it.
                let vars: Vec<usize> = mb
                    .y_exponents
                    .iter()
                    .flat_map(|(j, e)| std::iter::repeat(*j).take(*e))
                    .collect();
                for (pushed, k_rem, factor) in push_t(ma.t_power, &vars) {
                    let mut y = ma.y_exponents.clone();
                    for v in pushed {
                        *y.entry(v).or_insert(0) += 1;
                    }
                    let mono = DiffMonomial::new(y, k_rem + mb.t_power);
                    out.insert_add(mono, ca * cb * factor);
                }
            }
        }
        out
    }

    /// Coefficient of a monomial (zero when absent).
    pub fn coeff(&self, m: &DiffMonomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// For a certified `U_{n,d}`: the coefficient `c^{n,d}_lambda`, read off
    /// the monomial `y_0^(n-l) * y_lambda * t^(nd - |lambda|)`.
    pub fn coeff_lambda(&self, n: usize, d: usize, lam: &Partition) -> BigInt {
        if lam.len() + 1 > n || lam.size() > n * d {
            return BigInt::zero();
        }
        let mut y = BTreeMap::new();
        let y0 = n - lam.len();
        if y0 > 0 {
            y.insert(0, y0);
        }
        for &part in lam.parts() {
            *y.entry(part).or_insert(0) += 1;
        }
        self.coeff(&DiffMonomial::new(y, n * d - lam.size()))
    }
}

/// `t^k` pushed left-to-right through the listed y-variables; returns
/// `(bumped variable list, remaining t-power, integer factor)` triples.
fn push_t(k: usize, vars: &[usize]) -> Vec<(Vec<usize>, usize, BigInt)> {
    let Some((&m, rest)) = vars.split_first() else {
        return vec![(Vec::new(), k, BigInt::one())];
    };
    let mut out = Vec::new();
    for j in 0..=k {
        let b = binom(k, j);
        for (tail, k_rem, c) in push_t(k - j, rest) {
            let mut list = vec![m + j];
            list.extend(tail);
            out.push((list, k_rem, &b * c));
        }
    }
    out
}

/// `t^k * y_m` expanded using only the single-step rule
/// `t*y_j = y_j*t + y_(j+1)`; retained as a slow oracle for [`push_t`].
fn push_t_single(k: usize, m: usize) -> BTreeMap<(usize, usize), BigInt> {
    let mut out = BTreeMap::new();
    if k == 0 {
        out.insert((m, 0), BigInt::one());
        return out;
    }
    // t^k y_m = t^(k-1) (y_m t + y_(m+1)).
    for ((v, kk), c) in push_t_single(k - 1, m) {
        *out.entry((v, kk + 1)).or_insert_with(BigInt::zero) += &c;
    }
    for ((v, kk), c) in push_t_single(k - 1, m + 1) {
        *out.entry((v, kk)).or_insert_with(BigInt::zero) += &c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

impl fmt::Display for UniversalPoly {
    /// Terms with `t`-power descending, then partitions in table order;
    /// y-factors by ascending index, e.g. `y0^2*t^2 + y0*y1*t`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&DiffMonomial> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            b.t_power
                .cmp(&a.t_power)
                .then_with(|| a.lambda().cmp(&b.lambda()))
                .then_with(|| a.cmp(b))
        });
        let mut out = String::new();
        for m in keys {
            let c = &self.terms[m];
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mag = c.abs();
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || (m.y_exponents.is_empty() && m.t_power == 0) {
                parts.push(mag.to_string());
            }
            for (j, e) in &m.y_exponents {
                if *e == 1 {
                    parts.push(format!("y{j}"));
                } else {
                    parts.push(format!("y{j}^{e}"));
                }
            }
            if m.t_power == 1 {
                parts.push("t".to_string());
            } else if m.t_power > 1 {
                parts.push(format!("t^{}", m.t_power));
            }
            out.push_str(&parts.join("*"));
        }
        write!(f, "{out}")
    }
}

/// The normal form of `(y_0 * t^d)^n`, computed with the closed binomial
/// push rule.
pub fn universal_power(n: usize, d: usize) -> UniversalPoly {
    assert!(n >= 1 && d >= 1, "both n and d must be at least 1");
    let mut factor = UniversalPoly::zero();
    factor.insert_add(
        DiffMonomial::new(BTreeMap::from([(0usize, 1usize)]), d),
        BigInt::one(),
    );
    let mut u = UniversalPoly::one();
    for _ in 0..n {
        u = u.mul(&factor);
    }
    u
}

/// Same result as [`universal_power`], but every t-push uses only the
/// single-step rule; quadratically slower, kept as an independent oracle.
pub fn universal_power_single_step(n: usize, d: usize) -> UniversalPoly {
    assert!(n >= 1 && d >= 1, "both n and d must be at least 1");
    let mut u = UniversalPoly::one();
    for _ in 0..n {
        let mut next = UniversalPoly::zero();
        for (m, c) in u.terms() {
            for ((v, k_rem), f) in push_t_single(m.t_power, 0) {
                let mut y = m.y_exponents.clone();
                *y.entry(v).or_insert(0) += 1;
                next.insert_add(DiffMonomial::new(y, k_rem + d), c * f);
            }
        }
        u = next;
    }
    u
}

/// Checks the certified shape: every monomial is `y_0^(n-l) y_lambda t^k`
/// with `|lambda| = nd - k`, `l <= n-1`, and total y-degree `n`; all
/// coefficients positive.
pub fn certify_shape(u: &UniversalPoly, n: usize, d: usize) -> bool {
    u.terms().iter().all(|(m, c)| {
        let lam = m.lambda();
        c.is_positive()
            && m.total_y_degree() == n
            && m.y0_exponent() == n - lam.len()
            && lam.len() + 1 <= n.max(1)
            && m.t_power + lam.size() == n * d
    })
}

/// Sparse table of coefficients `c^{n,d}_lambda`, keyed by `(n, k, lambda)`
/// with `|lambda| = nd - k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoeffTable {
    d: usize,
    max_n: usize,
    entries: BTreeMap<(usize, usize, Partition), BigInt>,
}

impl CoeffTable {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn get(&self, n: usize, lam: &Partition) -> BigInt {
        if lam.size() > n * self.d {
            return BigInt::zero();
        }
        let k = n * self.d - lam.size();
        self.entries
            .get(&(n, k, lam.clone()))
            .cloned()
            .unwrap_or_default()
    }

    /// Row `n` in table column order: partitions by size ascending then
    /// reverse-lexicographic (equivalently, descending `t`-power).
    pub fn row(&self, n: usize) -> Vec<(usize, Partition, BigInt)> {
        let mut row: Vec<(usize, Partition, BigInt)> = self
            .entries
            .range((n, 0, Partition::empty())..(n + 1, 0, Partition::empty()))
            .map(|((_, k, lam), c)| (*k, lam.clone(), c.clone()))
            .collect();
        row.sort_by(|(_, a, _), (_, b, _)| a.cmp(b));
        row
    }

    /// TSV rendering with columns `n`, `k`, `partition`, `coefficient`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("n\tk\tpartition\tcoefficient\n");
        for n in 1..=self.max_n {
            for (k, lam, c) in self.row(n) {
                out.push_str(&format!("{n}\t{k}\t{lam}\t{c}\n"));
            }
        }
        out
    }

    /// JSON rendering mirroring the TSV fields.
    pub fn to_json(&self) -> serde_json::Value {
        let mut entries = Vec::new();
        for n in 1..=self.max_n {
            for (k, lam, c) in self.row(n) {
                entries.push(serde_json::json!({
                    "n": n,
                    "k": k,
                    "partition": lam.to_string(),
                    "coefficient": c.to_string(),
                }));
            }
        }
        serde_json::json!({
            "schema": 1,
            "d": self.d,
            "max_n": self.max_n,
            "entries": entries,
        })
    }
}

/// Fills `c^n_lambda` for `1 <= n <= n_max` (d = 1) from the recurrence
/// `c^(n+1)_lambda = c^n_lambda + sum_i (m_i(lambda)+1) * c^n_(lambda[i+1])`,
/// where `lambda[i+1]` demotes one part `i+1` to `i` and the `i = 0` slot uses
/// the zero-padding multiplicity `m_0(lambda) = n - l(lambda)`.
pub fn coeff_table_recurrence(n_max: usize) -> CoeffTable {
    assert!(n_max >= 1, "n_max must be at least 1");
    let mut entries = BTreeMap::new();
    let mut row: BTreeMap<Partition, BigInt> = BTreeMap::from([(Partition::empty(), BigInt::one())]);
    entries.insert((1usize, 1usize, Partition::empty()), BigInt::one());
    for n in 1..n_max {
        // Build row n+1 from row n.
        let mut next: BTreeMap<Partition, BigInt> = BTreeMap::new();
        for size in 0..=n {
            for lam in partition::enumerate(size, None) {
                let mut val = if size <= n - 1 {
                    row.get(&lam).cloned().unwrap_or_default()
                } else {
                    BigInt::zero()
                };
                for i in 0..n {
                    let Some(mu) = lam.shrink(i + 1) else { continue };
                    let Some(prev) = row.get(&mu) else { continue };
                    let mult = if i == 0 {
                        n - lam.len() + 1
                    } else {
                        lam.multiplicity(i) + 1
                    };
                    val += BigInt::from(mult) * prev;
                }
                if !val.is_zero() {
                    entries.insert((n + 1, n + 1 - size, lam.clone()), val.clone());
                    next.insert(lam, val);
                }
            }
        }
        row = next;
    }
    CoeffTable { d: 1, max_n: n_max, entries }
}

/// Table built from the symbolic engine for arbitrary `d` (incremental
/// powers, one multiplication per row).
pub fn coeff_table_engine(n_max: usize, d: usize) -> CoeffTable {
    assert!(n_max >= 1 && d >= 1);
    let mut entries = BTreeMap::new();
    let mut factor = UniversalPoly::zero();
    factor.insert_add(
        DiffMonomial::new(BTreeMap::from([(0usize, 1usize)]), d),
        BigInt::one(),
    );
    let mut u = UniversalPoly::one();
    for n in 1..=n_max {
        u = u.mul(&factor);
        for (m, c) in u.terms() {
            entries.insert((n, m.t_power(), m.lambda()), c.clone());
        }
    }
    CoeffTable { d, max_n: n_max, entries }
}

/// Closed-form value of `c^n_lambda` (d = 1): the sum over all sequences
/// `(i_1, ..., i_(n-1))` of nonnegative integers whose nonzero entries are
/// exactly the parts of `lambda`, of `prod_j C(j - i_1 - ... - i_(j-1), i_j)`.
pub fn coeff_closed_form(n: usize, lam: &Partition) -> BigInt {
    assert!(n >= 1);
    // Remaining parts tracked as distinct values with multiplicities.
    let mut remaining: BTreeMap<usize, usize> = BTreeMap::new();
    for &p in lam.parts() {
        *remaining.entry(p).or_insert(0) += 1;
    }
    fn rec(j: usize, n: usize, prefix_sum: usize, remaining: &mut BTreeMap<usize, usize>) -> BigInt {
        if j == n {
            return if remaining.is_empty() { BigInt::one() } else { BigInt::zero() };
        }
        // i_j = 0 contributes the factor C(j - s, 0) = 1.
        let mut total = rec(j + 1, n, prefix_sum, remaining);
        let choices: Vec<usize> = remaining.keys().copied().collect();
        for v in choices {
            if prefix_sum + v > j {
                continue; // C(j - s, v) = 0 when j - s < v.
            }
            let factor = binom(j - prefix_sum, v);
            let count = remaining.get_mut(&v).unwrap();
            *count -= 1;
            if *count == 0 {
                remaining.remove(&v);
            }
            total += factor * rec(j + 1, n, prefix_sum + v, remaining);
            *remaining.entry(v).or_insert(0) += 1;
        }
        total
    }
    rec(1, n, 0, &mut remaining)
}

/// The umbral route (d = 1): expand `prod_(i=0)^(n-1) (x_i + ... + x_1 + x_0)`
/// over commuting variables, then send the monomial with `x_j`-exponent
/// `alpha_j` (slots `j = 1..n`) and `x_0`-exponent `k` to
/// `y_(alpha_n) ... y_(alpha_1) * t^k`.
pub fn umbral_expand(n: usize) -> UniversalPoly {
    assert!(n >= 1);
    // Commutative expansion: exponent vector over x_0..x_(n-1) -> coefficient.
    let mut product: BTreeMap<Vec<usize>, BigInt> =
        BTreeMap::from([(vec![0; n], BigInt::one())]);
    for i in 0..n {
        let mut next: BTreeMap<Vec<usize>, BigInt> = BTreeMap::new();
        for (exps, c) in &product {
            for v in 0..=i {
                let mut e = exps.clone();
                e[v] += 1;
                *next.entry(e).or_insert_with(BigInt::zero) += c;
            }
        }
        product = next;
    }
    let mut u = UniversalPoly::zero();
    for (exps, c) in product {
        let k = exps[0];
        let mut y: BTreeMap<usize, usize> = BTreeMap::new();
        // Slots j = 1..n; x_j is absent from the product for j = n, so that
        // slot always contributes alpha = 0 (a y_0 factor); exponents of the
        // remaining slots are read straight from the monomial.
        for j in 1..=n {
            let alpha = if j < n { exps[j] } else { 0 };
            *y.entry(alpha).or_insert(0) += 1;
        }
        u.insert_add(DiffMonomial::new(y, k), c);
    }
    u
}

/// Substitutes scalars for the variables: `y_i` from the slice (0 beyond its
/// end) and `t = t_val`.
pub fn specialize_scalar(u: &UniversalPoly, ring: Ring, y: &[Scalar], t_val: &Scalar) -> Scalar {
    let mut acc = ring.zero();
    for (m, c) in u.terms() {
        let mut term = ring.from_bigint(c);
        for (j, e) in m.y_exponents() {
            let base = y.get(*j).cloned().unwrap_or_else(|| ring.zero());
            term = ring.mul(&term, &ring.pow(&base, *e as u64));
        }
        term = ring.mul(&term, &ring.pow(t_val, m.t_power() as u64));
        acc = ring.add(&acc, &term);
    }
    acc
}

/// Substitutes scalars for the `y_i` and replaces each `t^k` by the value
/// assigned to `y_k` (the power-map specialization of the ODE solver).
pub fn specialize_power_map(u: &UniversalPoly, ring: Ring, y: &[Scalar]) -> Scalar {
    let mut acc = ring.zero();
    for (m, c) in u.terms() {
        let mut term = ring.from_bigint(c);
        for (j, e) in m.y_exponents() {
            let base = y.get(*j).cloned().unwrap_or_else(|| ring.zero());
            term = ring.mul(&term, &ring.pow(&base, *e as u64));
        }
        let t_sub = y.get(m.t_power()).cloned().unwrap_or_else(|| ring.zero());
        term = ring.mul(&term, &t_sub);
        acc = ring.add(&acc, &term);
    }
    acc
}

/// Operator specialization into the relation algebra: `y_i` goes to the i-th
/// derivative of `h` and `t^k` to `y^k`, so the result is the normal form of
/// `(h(x)*y^d)^n` when `u = U_{n,d}` and the algebra is the Weyl algebra.
pub fn specialize_weyl(u: &UniversalPoly, h: &Poly, spec: &OreAlgebraSpec) -> OreElement {
    let ring = spec.ring();
    // Precompute the derivative tower of h.
    let max_idx = u
        .terms()
        .keys()
        .flat_map(|m| m.y_exponents().keys().copied())
        .max()
        .unwrap_or(0);
    let mut derivs = vec![h.clone()];
    for _ in 0..max_idx {
        let last = derivs.last().unwrap().derivative();
        derivs.push(last);
    }
    let mut out = OreElement::zero(spec);
    for (m, c) in u.terms() {
        let mut p = Poly::constant(ring.from_bigint(c), ring);
        for (j, e) in m.y_exponents() {
            p = p.mul(&derivs[*j].pow(*e));
        }
        out = out.add(&OreElement::monomial(spec, p, m.t_power()));
    }
    out
}

/// The classical combinatorial numbers, each by its own standard recurrence
/// (independent of the coefficient tables, so they can act as oracles).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ClassicalKind {
    /// Signless Stirling numbers of the first kind (permutations by cycles).
    Stirling1Signless,
    /// Stirling numbers of the second kind (set partitions by blocks).
    Stirling2,
    /// Bell numbers (the `k` argument is ignored).
    Bell,
    /// Eulerian numbers `A(n,k)`, 1-indexed: permutations with `k-1` descents.
    Eulerian,
}

/// Exact classical numbers from their Pascal-style recurrences.
pub fn classical_number(kind: ClassicalKind, n: usize, k: usize) -> Result<BigInt> {
    if k > n {
        return Err(Error::BadArgument(format!(
            "k = {k} out of range for n = {n}"
        )));
    }
    Ok(match kind {
        ClassicalKind::Stirling1Signless => {
            // c(n,k) = c(n-1,k-1) + (n-1) * c(n-1,k).
            let mut row = vec![BigInt::one()]; // n = 0.
            for m in 1..=n {
                let mut next = vec![BigInt::zero(); m + 1];
                for j in 0..=m {
                    let mut v = BigInt::zero();
                    if j >= 1 {
                        v += &row[j - 1];
                    }
                    if j < row.len() {
                        v += BigInt::from(m - 1) * &row[j];
                    }
                    next[j] = v;
                }
                row = next;
            }
            row[k].clone()
        }
        ClassicalKind::Stirling2 => {
            // S(n,k) = S(n-1,k-1) + k * S(n-1,k).
            let mut row = vec![BigInt::one()];
            for m in 1..=n {
                let mut next = vec![BigInt::zero(); m + 1];
                for j in 0..=m {
                    let mut v = BigInt::zero();
                    if j >= 1 {
                        v += &row[j - 1];
                    }
                    if j < row.len() {
                        v += BigInt::from(j) * &row[j];
                    }
                    next[j] = v;
                }
                row = next;
            }
            row[k].clone()
        }
        ClassicalKind::Bell => {
            // Bell triangle: each row starts with the previous row's last
            // entry; B_n is the first entry of row n.
            let mut row = vec![BigInt::one()]; // row 0: [1]; B_0 = 1.
            for _ in 0..n {
                let mut next = vec![row.last().unwrap().clone()];
                for v in &row {
                    let last = next.last().unwrap().clone();
                    next.push(last + v);
                }
                row = next;
            }
            row[0].clone()
        }
        ClassicalKind::Eulerian => {
            // A(n,k) = k*A(n-1,k) + (n-k+1)*A(n-1,k-1), A(1,1) = 1, 1-indexed.
            if n == 0 {
                return Err(Error::BadArgument("Eulerian numbers need n >= 1".into()));
            }
            if k == 0 {
                return Ok(BigInt::zero());
            }
            let mut row = vec![BigInt::zero(), BigInt::one()]; // n = 1: A(1,1)=1.
            for m in 2..=n {
                let mut next = vec![BigInt::zero(); m + 1];
                for j in 1..=m {
                    let mut v = BigInt::zero();
                    if j < row.len() {
                        v += BigInt::from(j) * &row[j];
                    }
                    if j >= 1 && j - 1 < row.len() {
                        v += BigInt::from(m - j + 1) * &row[j - 1];
                    }
                    next[j] = v;
                }
                row = next;
            }
            row.get(k).cloned().unwrap_or_default()
        }
    })
}

/// Which route computes a generalized Stirling number.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StirlingRoute {
    /// `sum over lambda of c^{n,d}_lambda * (q)_lambda` from the table.
    CTable,
    /// Normal ordering of `(x^q * del^d)^n` in the Weyl algebra.
    Weyl,
}

/// The generalized Stirling number `{n, k}_{q,d}` by either route.
pub fn generalized_stirling(
    n: usize,
    k: usize,
    q: usize,
    d: usize,
    route: StirlingRoute,
) -> Result<BigInt> {
    if n < 1 || d < 1 {
        return Err(Error::BadArgument("need n >= 1 and d >= 1".into()));
    }
    if k < d || k > n * d {
        return Err(Error::BadArgument(format!(
            "k = {k} outside the valid range {d}..={}",
            n * d
        )));
    }
    match route {
        StirlingRoute::CTable => {
            let u = universal_power(n, d);
            let mut total = BigInt::zero();
            for lam in partition::enumerate(n * d - k, Some(n.saturating_sub(1))) {
                total += u.coeff_lambda(n, d, &lam) * falling_product_int(q as i64, &lam);
            }
            Ok(total)
        }
        StirlingRoute::Weyl => {
            if q < d {
                return Err(Error::BadArgument(
                    "the operator route needs q >= d (nonnegative x-exponents)".into(),
                ));
            }
            let spec = OreAlgebraSpec::weyl(Ring::Rat);
            let xq = OreElement::from_poly(&spec, Poly::x(Ring::Rat).pow(q));
            let yd = OreElement::y(&spec).pow(d);
            let e = xq.mul(&yd).pow(n);
            // e = x^(n(q-d)) * sum_k {n k} x^k y^k: read one coefficient.
            let base = n * (q - d);
            let Some(p) = e.terms().get(&k) else {
                return Ok(BigInt::zero());
            };
            let c = p.coeff(base + k);
            Ok(c.as_rat().numer().clone())
        }
    }
}

/// Mod-p vanishing report for the row `n = p^m`: the qualifying partitions
/// (`|lambda| != n-1` and `p` does not divide `|lambda|`) with their residues.
#[derive(Clone, Debug)]
pub struct ModpReport {
    pub p: u64,
    pub m: u32,
    pub n: usize,
    /// `(lambda, c^n_lambda mod p)` for each qualifying partition.
    pub entries: Vec<(Partition, u64)>,
    pub all_zero: bool,
}

/// Largest row the mod-p check will compute.
pub const MODP_N_LIMIT: usize = 20;

/// Computes the `c^(p^m)` row and reduces the qualifying entries mod p.
pub fn modp_check(p: u64, m: u32) -> Result<ModpReport> {
    if !crate::scalar::is_prime(p) {
        return Err(Error::BadArgument(format!("{p} is not prime")));
    }
    if m < 1 {
        return Err(Error::BadArgument("the exponent m must be at least 1".into()));
    }
    let n = (p as u128).pow(m);
    if n > MODP_N_LIMIT as u128 {
        return Err(Error::BudgetExceeded(format!(
            "row n = {n} exceeds the table limit {MODP_N_LIMIT}"
        )));
    }
    let n = n as usize;
    let table = coeff_table_recurrence(n);
    let mut entries = Vec::new();
    let mut all_zero = true;
    for size in 0..=n - 1 {
        if size == n - 1 || size % (p as usize) == 0 {
            continue;
        }
        for lam in partition::enumerate(size, None) {
            let c = table.get(n, &lam);
            let residue = c.mod_floor(&BigInt::from(p));
            let residue = u64::try_from(residue).expect("residue fits");
            if residue != 0 {
                all_zero = false;
            }
            entries.push((lam, residue));
        }
    }
    Ok(ModpReport { p, m, n, entries, all_zero })
}

/// Solves `X' = Y(X), X(0) = 0` formally: `x_1 = y_0` and
/// `x_n = U_(n-1)` specialized with the power map `t^k -> y_k`.
/// Characteristic 0 only.
pub fn ode_solve(ring: Ring, y: &[Scalar], n_max: usize) -> Result<Vec<Scalar>> {
    if ring.characteristic() != 0 {
        return Err(Error::NeedsCharZero);
    }
    if n_max < 1 {
        return Err(Error::BadArgument("need at least one coefficient".into()));
    }
    let mut xs = Vec::with_capacity(n_max);
    xs.push(y.first().cloned().unwrap_or_else(|| ring.zero()));
    for n in 2..=n_max {
        let u = universal_power(n - 1, 1);
        xs.push(specialize_power_map(&u, ring, y));
    }
    Ok(xs)
}

/// Residual coefficients of `X' - Y(X)` through order `u^(N-1)`, where
/// `X(u) = sum x_n u^n / n!` and `Y(v) = sum y_i v^i / i!`; an independent
/// truncated-series check of [`ode_solve`] (all entries must be zero).
pub fn ode_series_residual(ring: Ring, y: &[Scalar], xs: &[Scalar]) -> Vec<Scalar> {
    let order = xs.len(); // Coefficients of u^0..u^(order-1) are trustworthy.
    let mut factorial = ring.one();
    // X as a truncated series: index i holds the u^i coefficient.
    let mut x_series = vec![ring.zero(); order + 1];
    for (n, x) in xs.iter().enumerate() {
        factorial = ring.mul(&factorial, &ring.from_i64((n + 1) as i64));
        x_series[n + 1] = ring.div(x, &factorial);
    }
    // X'.
    let mut x_prime = vec![ring.zero(); order];
    for i in 0..order {
        x_prime[i] = ring.mul(&x_series[i + 1], &ring.from_i64((i + 1) as i64));
    }
    // Y(X) by Horner over the polynomial Y, truncating products at u^(order-1).
    let truncated_mul = |a: &[Scalar], b: &[Scalar]| -> Vec<Scalar> {
        let mut out = vec![ring.zero(); order];
        for (i, ai) in a.iter().enumerate().take(order) {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate().take(order - i) {
                let t = ring.mul(ai, bj);
                out[i + j] = ring.add(&out[i + j], &t);
            }
        }
        out
    };
    let mut y_of_x = vec![ring.zero(); order];
    let mut fact = ring.one();
    let y_scaled: Vec<Scalar> = y
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if i > 0 {
                fact = ring.mul(&fact, &ring.from_i64(i as i64));
            }
            ring.div(c, &fact)
        })
        .collect();
    for c in y_scaled.iter().rev() {
        y_of_x = truncated_mul(&y_of_x, &x_series);
        y_of_x[0] = ring.add(&y_of_x[0], c);
    }
    (0..order)
        .map(|i| ring.sub(&x_prime[i], &y_of_x[i]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(pairs: &[(usize, usize)], t: usize) -> DiffMonomial {
        DiffMonomial::new(pairs.iter().copied().collect(), t)
    }

    fn upoly(terms: &[(&[(usize, usize)], usize, i64)]) -> UniversalPoly {
        let mut u = UniversalPoly::zero();
        for (pairs, t, c) in terms {
            u.insert_add(mono(pairs, *t), BigInt::from(*c));
        }
        u
    }

    #[test]
    fn small_universal_powers_match_displayed_expansions() {
        // U_1 = y_0 t.
        assert_eq!(universal_power(1, 1), upoly(&[(&[(0, 1)], 1, 1)]));
        // U_2 = y_0 y_1 t + y_0^2 t^2.
        assert_eq!(
            universal_power(2, 1),
            upoly(&[(&[(0, 1), (1, 1)], 1, 1), (&[(0, 2)], 2, 1)])
        );
        // U_3 = y_0 y_1^2 t + y_0^2 y_2 t + 3 y_0^2 y_1 t^2 + y_0^3 t^3.
        assert_eq!(
            universal_power(3, 1),
            upoly(&[
                (&[(0, 1), (1, 2)], 1, 1),
                (&[(0, 2), (2, 1)], 1, 1),
                (&[(0, 2), (1, 1)], 2, 3),
                (&[(0, 3)], 3, 1),
            ])
        );
        // Single factor with d = 2.
        assert_eq!(universal_power(1, 2), upoly(&[(&[(0, 1)], 2, 1)]));
    }

    #[test]
    fn u4_display_is_canonical() {
        assert_eq!(
            universal_power(4, 1).to_string(),
            "y0^4*t^4 + 6*y0^3*y1*t^3 + 4*y0^3*y2*t^2 + 7*y0^2*y1^2*t^2 \
             + y0^3*y3*t + 4*y0^2*y1*y2*t + y0*y1^3*t"
        );
    }

    #[test]
    fn closed_rule_matches_single_step_oracle() {
        for (n, d) in [(1, 1), (2, 1), (4, 1), (6, 1), (2, 2), (3, 2), (2, 3)] {
            assert_eq!(
                universal_power(n, d),
                universal_power_single_step(n, d),
                "n={n} d={d}"
            );
        }
    }

    #[test]
    fn shape_certification() {
        for d in 1..=3usize {
            for n in 1..=6usize {
                assert!(certify_shape(&universal_power(n, d), n, d), "n={n} d={d}");
            }
        }
        // A polynomial violating the shape fails the check.
        let bad = upoly(&[(&[(1, 1)], 1, 1)]); // y_1 t with no y_0 block for n=2.
        assert!(!certify_shape(&bad, 2, 1));
    }

    #[test]
    fn recurrence_reproduces_reference_rows() {
        let t = coeff_table_recurrence(6);
        let lam = |s: &str| s.parse::<Partition>().unwrap();
        // n = 1..3.
        assert_eq!(t.get(1, &lam("[]")), 1.into());
        assert_eq!(t.get(2, &lam("[]")), 1.into());
        assert_eq!(t.get(2, &lam("[1]")), 1.into());
        assert_eq!(t.get(3, &lam("[1]")), 3.into());
        // n = 4 row: 1, 6, 4, 7, 1, 4, 1.
        let row4: Vec<BigInt> = ["[]", "[1]", "[2]", "[1,1]", "[3]", "[2,1]", "[1,1,1]"]
            .iter()
            .map(|s| t.get(4, &lam(s)))
            .collect();
        assert_eq!(row4, [1, 6, 4, 7, 1, 4, 1].map(BigInt::from).to_vec());
        // n = 5 row: 1, 10, 10, 25, 5, 30, 15, 1, 7, 4, 11, 1.
        let cols5 = [
            "[]", "[1]", "[2]", "[1,1]", "[3]", "[2,1]", "[1,1,1]", "[4]", "[3,1]", "[2,2]",
            "[2,1,1]", "[1,1,1,1]",
        ];
        let row5: Vec<BigInt> = cols5.iter().map(|s| t.get(5, &lam(s))).collect();
        assert_eq!(
            row5,
            [1, 10, 10, 25, 5, 30, 15, 1, 7, 4, 11, 1].map(BigInt::from).to_vec()
        );
        // Spot values from the n = 6 row, including the forced extremes.
        assert_eq!(t.get(6, &lam("[3,2]")), 15.into());
        assert_eq!(t.get(6, &lam("[4,1]")), 11.into());
        assert_eq!(t.get(6, &lam("[3,1,1]")), 32.into());
        assert_eq!(t.get(6, &lam("[2,2,1]")), 34.into());
        assert_eq!(t.get(6, &lam("[2,1,1,1]")), 26.into());
        assert_eq!(t.get(6, &lam("[5]")), 1.into());
        assert_eq!(t.get(6, &lam("[1,1,1,1,1]")), 1.into());
        let total: BigInt = t.row(6).into_iter().map(|(_, _, c)| c).sum();
        assert_eq!(total, 720.into(), "row 6 sums to 6!");
    }

    #[test]
    fn closed_form_examples_and_agreement() {
        let lam = |s: &str| s.parse::<Partition>().unwrap();
        assert_eq!(coeff_closed_form(3, &lam("[1]")), 3.into());
        assert_eq!(coeff_closed_form(4, &lam("[1,1]")), 7.into());
        for n in 1..=7 {
            assert_eq!(coeff_closed_form(n, &Partition::empty()), 1.into());
        }
        // Unplaceable partitions give zero.
        assert_eq!(coeff_closed_form(2, &lam("[1,1]")), 0.into());
        // Full agreement with the recurrence for n <= 8.
        let t = coeff_table_recurrence(8);
        for n in 1..=8usize {
            for size in 0..n {
                for l in partition::enumerate(size, None) {
                    assert_eq!(coeff_closed_form(n, &l), t.get(n, &l), "n={n} lambda={l}");
                }
            }
        }
    }

    #[test]
    fn umbral_route_agrees_with_engine() {
        for n in 1..=7usize {
            assert_eq!(umbral_expand(n), universal_power(n, 1), "n = {n}");
        }
        // The documented assembly of the coefficient 3 at n = 3.
        let u = umbral_expand(3);
        assert_eq!(u.coeff(&mono(&[(0, 2), (1, 1)], 2)), 3.into());
    }

    #[test]
    fn scalar_specializations() {
        let r = Ring::Rat;
        let ones = vec![r.one(); 10];
        // All variables 1, t = 1: n!.
        assert_eq!(
            specialize_scalar(&universal_power(3, 1), r, &ones, &r.one()),
            r.from_i64(6)
        );
        // Bell specialization: y_0 = y_1 = 1, rest 0.
        let bell_in = vec![r.one(), r.one()];
        assert_eq!(
            specialize_scalar(&universal_power(4, 1), r, &bell_in, &r.one()),
            r.from_i64(15)
        );
    }

    #[test]
    fn weyl_specialization_is_normal_ordering() {
        // U_1 with y_0 = h, t = y: the element h(x), then one y.
        let r = Ring::Rat;
        let spec = OreAlgebraSpec::weyl(r);
        let h = Poly::from_int_coeffs(r, &[0, 1, 0, 1]); // x^3 + x
        let u1 = specialize_weyl(&universal_power(1, 1), &h, &spec);
        assert_eq!(u1, OreElement::monomial(&spec, h.clone(), 1));
        // (h y)^n computed directly equals the specialized U_n.
        let hy = OreElement::from_poly(&spec, h.clone()).mul(&OreElement::y(&spec));
        for n in 1..=5usize {
            let direct = hy.pow(n);
            let via_u = specialize_weyl(&universal_power(n, 1), &h, &spec);
            assert_eq!(direct, via_u, "n = {n}");
        }
        // And with d = 2.
        let hyy = OreElement::from_poly(&spec, h.clone()).mul(&OreElement::y(&spec).pow(2));
        for n in 1..=4usize {
            assert_eq!(
                hyy.pow(n),
                specialize_weyl(&universal_power(n, 2), &h, &spec),
                "d = 2, n = {n}"
            );
        }
    }

    #[test]
    fn classical_numbers_match_brute_force() {
        use ClassicalKind::*;
        // Expand x(x+1)(x+2)(x+3): coefficients are signless first-kind.
        let r = Ring::Rat;
        let mut p = Poly::one(r);
        for a in 0..4 {
            p = p.mul(&Poly::from_int_coeffs(r, &[a, 1]));
        }
        for k in 0..=4usize {
            let want = p.coeff(k);
            assert_eq!(
                r.from_bigint(&classical_number(Stirling1Signless, 4, k).unwrap()),
                want
            );
        }
        assert_eq!(classical_number(Stirling2, 4, 2).unwrap(), 7.into());
        // Bell numbers equal row sums of the second kind.
        for n in 0..=8usize {
            let sum: BigInt = (0..=n)
                .map(|k| classical_number(Stirling2, n, k).unwrap())
                .sum();
            assert_eq!(classical_number(Bell, n, 0).unwrap(), sum, "n = {n}");
        }
        // Eulerian numbers against descent counting over S_n.
        fn descents(perm: &[usize]) -> usize {
            perm.windows(2).filter(|w| w[0] > w[1]).count()
        }
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, n);
                    out.push(q);
                }
            }
            out
        }
        for n in 1..=6usize {
            let all = perms(n);
            for k in 1..=n {
                let count = all.iter().filter(|p| descents(p) == k - 1).count();
                assert_eq!(
                    classical_number(Eulerian, n, k).unwrap(),
                    BigInt::from(count),
                    "A({n},{k})"
                );
            }
        }
        assert_eq!(classical_number(Eulerian, 4, 2).unwrap(), 11.into());
        assert!(classical_number(Stirling2, 3, 5).is_err());
    }

    #[test]
    fn generalized_stirling_routes_agree() {
        // (x^2 del)^2 = x^4 del^2 + 2 x^3 del.
        assert_eq!(
            generalized_stirling(2, 1, 2, 1, StirlingRoute::Weyl).unwrap(),
            2.into()
        );
        assert_eq!(
            generalized_stirling(2, 1, 2, 1, StirlingRoute::CTable).unwrap(),
            2.into()
        );
        // q = d = 1 reduces to Stirling numbers of the second kind.
        for n in 1..=5usize {
            for k in 1..=n {
                assert_eq!(
                    generalized_stirling(n, k, 1, 1, StirlingRoute::CTable).unwrap(),
                    classical_number(ClassicalKind::Stirling2, n, k).unwrap(),
                    "n={n} k={k}"
                );
            }
        }
        // Range and precondition errors.
        assert!(generalized_stirling(2, 0, 2, 1, StirlingRoute::CTable).is_err());
        assert!(generalized_stirling(2, 2, 1, 2, StirlingRoute::Weyl).is_err());
    }

    #[test]
    fn modp_vanishing_small_cases() {
        let r = modp_check(5, 1).unwrap();
        assert_eq!(r.n, 5);
        assert!(r.all_zero);
        // Qualifying sizes for n=5, p=5: 1, 2, 3 (size 4 = n-1 excluded,
        // size 0 is a multiple of p).
        assert_eq!(r.entries.len(), 1 + 2 + 3);
        let r = modp_check(2, 2).unwrap();
        assert!(r.all_zero);
        assert!(r.entries.iter().any(|(l, _)| l.to_string() == "[1]"));
        assert!(modp_check(4, 1).is_err());
        assert!(modp_check(2, 31).is_err());
    }

    #[test]
    fn ode_solver_examples() {
        let r = Ring::Rat;
        // All ones: x_n = (n-1)!.
        let ones = vec![r.one(); 12];
        let xs = ode_solve(r, &ones, 8).unwrap();
        let mut fact = r.one();
        for (n, x) in xs.iter().enumerate() {
            if n > 0 {
                fact = r.mul(&fact, &r.from_i64(n as i64));
            }
            assert_eq!(x, &fact, "x_{}", n + 1);
        }
        assert!(ode_series_residual(r, &ones, &xs).iter().all(Scalar::is_zero));
        // y_0 = y_1 = 1, rest 0: x_n = 1.
        let xs = ode_solve(r, &[r.one(), r.one()], 8).unwrap();
        assert!(xs.iter().all(Scalar::is_one));
        assert!(ode_series_residual(r, &[r.one(), r.one()], &xs)
            .iter()
            .all(Scalar::is_zero));
        // Constant y_0 = c: x_1 = c, the rest vanish.
        let c = r.from_i64(7);
        let xs = ode_solve(r, &[c.clone()], 6).unwrap();
        assert_eq!(xs[0], c);
        assert!(xs[1..].iter().all(Scalar::is_zero));
        // Characteristic p refused.
        assert!(matches!(
            ode_solve(Ring::fp(5), &[], 3),
            Err(Error::NeedsCharZero)
        ));
    }

    #[test]
    fn engine_table_matches_recurrence_table() {
        let by_rec = coeff_table_recurrence(7);
        let by_engine = coeff_table_engine(7, 1);
        for n in 1..=7usize {
            assert_eq!(by_rec.row(n), by_engine.row(n), "row {n}");
        }
    }

    #[test]
    fn tsv_and_json_exports() {
        let t = coeff_table_recurrence(2);
        let tsv = t.to_tsv();
        assert_eq!(tsv, "n\tk\tpartition\tcoefficient\n1\t1\t[]\t1\n2\t2\t[]\t1\n2\t1\t[1]\t1\n");
        let j = t.to_json();
        assert_eq!(j["schema"], 1);
        assert_eq!(j["entries"][2]["partition"], "[1]");
    }
}
