//! Concrete operator realizations used as independent oracles: the raising
//! and lowering action on Young's lattice, the Witt intermediate-series
//! action, and the Laurent-basis raising/lowering model.

use std::collections::BTreeMap;

use crate::partition::Partition;
use crate::poly::Poly;
use crate::scalar::{Ring, Scalar};
use crate::{Error, Result};

/// A finite linear combination of partitions, with every referenced
/// partition of size at most `size_cap`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LatticeVector {
    ring: Ring,
    size_cap: usize,
    coefficients: BTreeMap<Partition, Scalar>,
}

impl LatticeVector {
    pub fn zero(ring: Ring, size_cap: usize) -> LatticeVector {
        assert!(size_cap >= 1, "size_cap must be positive");
        LatticeVector { ring, size_cap, coefficients: BTreeMap::new() }
    }

    /// The basis vector for one partition.
    pub fn basis(ring: Ring, size_cap: usize, lam: Partition) -> LatticeVector {
        let mut v = LatticeVector::zero(ring, size_cap);
        v.insert_add(lam, ring.one());
        v
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn size_cap(&self) -> usize {
        self.size_cap
    }

    pub fn coefficients(&self) -> &BTreeMap<Partition, Scalar> {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn insert_add(&mut self, lam: Partition, c: Scalar) {
        assert!(
            lam.size() <= self.size_cap,
            "partition {lam} exceeds size cap {}",
            self.size_cap
        );
        if c.is_zero() {
            return;
        }
        match self.coefficients.remove(&lam) {
            None => {
                self.coefficients.insert(lam, c);
            }
            Some(old) => {
                let sum = self.ring.add(&old, &c);
                if !sum.is_zero() {
                    self.coefficients.insert(lam, sum);
                }
            }
        }
    }

    pub fn add(&self, other: &LatticeVector) -> LatticeVector {
        let mut out = self.clone();
        for (lam, c) in &other.coefficients {
            out.insert_add(lam.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LatticeVector) -> LatticeVector {
        let mut out = self.clone();
        for (lam, c) in &other.coefficients {
            out.insert_add(lam.clone(), self.ring.neg(c));
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> LatticeVector {
        let mut out = LatticeVector::zero(self.ring, self.size_cap);
        for (lam, v) in &self.coefficients {
            out.insert_add(lam.clone(), self.ring.mul(v, c));
        }
        out
    }
}

/// Direction of a one-box move on Young's lattice.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    /// Add one box (the raising operator).
    Up,
    /// Remove one box (the lowering operator).
    Down,
}

/// Linear extension of the cover maps: `up` sends a partition to the sum of
/// its one-box extensions, `down` to the sum of its one-box removals.
/// `up` requires headroom: every partition present must have size strictly
/// below the cap.
pub fn young_apply(direction: Direction, v: &LatticeVector) -> Result<LatticeVector> {
    let covers = |lam: &Partition| match direction {
        Direction::Up => lam.up_covers(),
        Direction::Down => lam.down_covers(),
    };
    young_apply_with(direction, v, covers)
}

/// Same as [`young_apply`] with an injectable cover map, so checks can be
/// exercised against deliberately corrupted covers as a negative control.
pub fn young_apply_with(
    direction: Direction,
    v: &LatticeVector,
    covers: impl Fn(&Partition) -> Vec<Partition>,
) -> Result<LatticeVector> {
    let mut out = LatticeVector::zero(v.ring, v.size_cap);
    for (lam, c) in &v.coefficients {
        if direction == Direction::Up && lam.size() >= v.size_cap {
            return Err(Error::BadArgument(format!(
                "no headroom: partition {lam} has size {} with cap {}",
                lam.size(),
                v.size_cap
            )));
        }
        for target in covers(lam) {
            out.insert_add(target, c.clone());
        }
    }
    Ok(out)
}

/// True iff `(down ∘ up − up ∘ down)` fixes every partition of size at most
/// `n`, computed with `size_cap = n + 1`.
pub fn young_commutator_check(n: usize) -> bool {
    young_commutator_check_with(n, |l| l.up_covers(), |l| l.down_covers())
}

/// [`young_commutator_check`] with injectable cover maps (negative-control
/// hook for the test harness).
pub fn young_commutator_check_with(
    n: usize,
    up: impl Fn(&Partition) -> Vec<Partition>,
    down: impl Fn(&Partition) -> Vec<Partition>,
) -> bool {
    assert!(n >= 1, "N must be at least 1");
    let ring = Ring::Rat;
    let cap = n + 1;
    for size in 0..=n {
        for lam in crate::partition::enumerate(size, None) {
            let v = LatticeVector::basis(ring, cap, lam);
            let du = young_apply_with(Direction::Down, &young_apply_with(Direction::Up, &v, &up).unwrap(), &down)
                .unwrap();
            let ud = young_apply_with(Direction::Up, &young_apply_with(Direction::Down, &v, &down).unwrap(), &up)
                .unwrap();
            if du.sub(&ud) != v {
                return false;
            }
        }
    }
    true
}

/// One failed assertion: which identity, at which site, with what residual.
#[derive(Clone, Debug)]
pub struct ModelFailure {
    pub identity: String,
    pub site: String,
    pub residual: Scalar,
}

/// Outcome of an operator-model check: counts of asserted and skipped sites,
/// the failures, and the largest absolute residual seen.
#[derive(Clone, Debug)]
pub struct ModelReport {
    pub checked: usize,
    pub skipped: usize,
    pub failures: Vec<ModelFailure>,
    pub max_residual: Scalar,
}

impl ModelReport {
    fn new(ring: Ring) -> ModelReport {
        ModelReport {
            checked: 0,
            skipped: 0,
            failures: Vec::new(),
            max_residual: ring.zero(),
        }
    }

    fn record(&mut self, ring: Ring, identity: &str, site: String, residual: Scalar) {
        self.checked += 1;
        let mag = residual.abs();
        if self.max_residual.abs() < mag {
            self.max_residual = mag;
        }
        if !residual.is_zero() {
            self.failures.push(ModelFailure {
                identity: identity.to_string(),
                site,
                residual,
            });
        }
        let _ = ring;
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// JSON rendering: the failure entries as (identity, site, residual).
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "schema": 1,
            "checked": self.checked,
            "skipped": self.skipped,
            "passed": self.passed(),
            "max_residual": self.max_residual.to_string(),
            "failures": self
                .failures
                .iter()
                .map(|f| {
                    serde_json::json!({
                        "identity": f.identity,
                        "site": f.site,
                        "residual": f.residual.to_string(),
                    })
                })
                .collect::<Vec<_>>(),
        })
    }
}

/// Parameters of the intermediate-series action `w_m · y^l = (l − (m+1)μ) y^(m+l)`
/// on the basis `y^0 .. y^basis_cap`.
#[derive(Clone, Debug)]
pub struct WittParams {
    pub mu: Scalar,
    pub basis_cap: usize,
}

impl WittParams {
    pub fn new(mu: Scalar, basis_cap: usize) -> WittParams {
        assert!(matches!(mu, Scalar::Rat(_)), "the Witt check uses exact rationals");
        assert!(basis_cap >= 1);
        WittParams { mu, basis_cap }
    }

    /// `w_m` applied to the basis vector `y^l` as a sparse vector; `None`
    /// when a nonzero coefficient would land outside `[0, basis_cap]` (the
    /// caller must then skip the assertion site).  A vanishing coefficient
    /// yields the zero vector: no out-of-range element materializes.
    fn apply_basis(&self, m: i64, l: i64) -> Option<BTreeMap<i64, Scalar>> {
        let r = Ring::Rat;
        let coeff = r.sub(
            &r.from_i64(l),
            &r.mul(&r.from_i64(m + 1), &self.mu),
        );
        if coeff.is_zero() {
            return Some(BTreeMap::new());
        }
        let target = m + l;
        if target < 0 || target > self.basis_cap as i64 {
            return None;
        }
        Some(BTreeMap::from([(target, coeff)]))
    }

    /// `w_m` applied to a sparse vector; `None` propagates skips.
    fn apply(&self, m: i64, v: &BTreeMap<i64, Scalar>) -> Option<BTreeMap<i64, Scalar>> {
        let r = Ring::Rat;
        let mut out: BTreeMap<i64, Scalar> = BTreeMap::new();
        for (l, c) in v {
            for (target, w) in self.apply_basis(m, *l)? {
                let add = r.mul(c, &w);
                let entry = out.entry(target).or_insert_with(|| r.zero());
                *entry = r.add(entry, &add);
            }
        }
        out.retain(|_, c| !c.is_zero());
        Some(out)
    }
}

/// Verifies `[w_m, w_n] = (n − m) w_(m+n)` on every basis vector where all
/// intermediate indices stay within the cap; out-of-cap sites are counted as
/// skipped, never asserted partially.
pub fn witt_action_check(params: &WittParams, m_lo: i64, m_hi: i64) -> Result<ModelReport> {
    if m_lo < -1 || m_hi > params.basis_cap as i64 {
        return Err(Error::BadArgument(format!(
            "index range {m_lo}..={m_hi} outside [-1, {}]",
            params.basis_cap
        )));
    }
    let r = Ring::Rat;
    let mut report = ModelReport::new(r);
    for m in m_lo..=m_hi {
        for n in m_lo..=m_hi {
            if m + n < -1 {
                continue;
            }
            for l in 0..=params.basis_cap as i64 {
                let site = || format!("m={m}, n={n}, l={l}");
                let base = BTreeMap::from([(l, r.one())]);
                // Both composition orders and the right-hand side must stay
                // in range for the site to be asserted.
                let lhs = (|| {
                    let wn = params.apply(n, &base)?;
                    let wm_wn = params.apply(m, &wn)?;
                    let wm = params.apply(m, &base)?;
                    let wn_wm = params.apply(n, &wm)?;
                    let rhs = params.apply(m + n, &base)?;
                    Some((wm_wn, wn_wm, rhs))
                })();
                let Some((wm_wn, wn_wm, rhs)) = lhs else {
                    report.skipped += 1;
                    continue;
                };
                // Residual = max |[w_m,w_n] - (n-m) w_(m+n)| coefficient.
                let mut residual = r.zero();
                let mut keys: Vec<i64> = wm_wn.keys().chain(wn_wm.keys()).chain(rhs.keys()).copied().collect();
                keys.sort_unstable();
                keys.dedup();
                for k in keys {
                    let a = wm_wn.get(&k).cloned().unwrap_or_else(|| r.zero());
                    let b = wn_wm.get(&k).cloned().unwrap_or_else(|| r.zero());
                    let c = rhs.get(&k).cloned().unwrap_or_else(|| r.zero());
                    let scale = r.from_i64(n - m);
                    let diff = r.sub(&r.sub(&a, &b), &r.mul(&scale, &c));
                    if residual.abs() < diff.abs() {
                        residual = diff;
                    }
                }
                report.record(r, "[w_m, w_n] = (n-m) w_(m+n)", site(), residual);
            }
        }
    }
    Ok(report)
}

/// Pointwise check of the three defining relations on the Laurent basis:
/// `x` raises (`t^k -> t^(k+1)`), `y` lowers with coefficient `mu(k)`, `h`
/// is diagonal with eigenvalue `lambda(k)`.  The sequences are given on the
/// index window starting at `window_start`; each relation is asserted on the
/// interior indices where every term is available.
pub fn laurent_model_check(
    q: &Scalar,
    f: &Poly,
    g: &Poly,
    lambda: &[Scalar],
    mu: &[Scalar],
    window_start: i64,
) -> Result<ModelReport> {
    let r = f.ring();
    if lambda.len() != mu.len() {
        return Err(Error::BadArgument(
            "lambda and mu windows must have the same length".into(),
        ));
    }
    if lambda.len() < 3 {
        return Err(Error::BadArgument(
            "window too short: need at least 3 indices".into(),
        ));
    }
    let len = lambda.len();
    let mut report = ModelReport::new(r);
    let idx = |i: usize| window_start + i as i64;
    // h x = x f(h): lambda(k+1) = f(lambda(k)) for k, k+1 in window.
    for i in 0..len - 1 {
        let residual = r.sub(&lambda[i + 1], &f.eval(&lambda[i]));
        report.record(r, "h x = x f(h)", format!("k={}", idx(i)), residual);
    }
    // y h = f(h) y: mu(k) (lambda(k) - f(lambda(k-1))) = 0 for k-1, k in window.
    for i in 1..len {
        let residual = r.mul(&mu[i], &r.sub(&lambda[i], &f.eval(&lambda[i - 1])));
        report.record(r, "y h = f(h) y", format!("k={}", idx(i)), residual);
    }
    // y x - q x y = g(h): mu(k+1) - q mu(k) - g(lambda(k)) = 0 on interior k.
    for i in 1..len - 1 {
        let residual = r.sub(
            &r.sub(&mu[i + 1], &r.mul(q, &mu[i])),
            &g.eval(&lambda[i]),
        );
        report.record(r, "y x - q x y = g(h)", format!("k={}", idx(i)), residual);
    }
    Ok(report)
}
