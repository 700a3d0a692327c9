//! Integer partitions and Young-lattice cover relations.
//!
//! A [`Partition`] is a weakly decreasing sequence of positive integers; the
//! empty sequence is the unique partition of 0.  Partitions index the
//! coefficient tables of the [`crate::universal`] module (where a part `i`
//! selects the variable `y_i`) and the basis of the Young-lattice module in
//! [`crate::models`].
//!
//! Provided operations: enumeration in a fixed deterministic order,
//! multiplicities, part shrinking, box-adding/box-removing cover relations and
//! falling-factorial products.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::scalar::{Ring, Scalar};

/// An integer partition: weakly decreasing positive parts.
///
/// Values are immutable once constructed and totally ordered by size first,
/// then reverse-lexicographically on the part sequences, which matches the
/// order produced by [`enumerate`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// The empty partition of 0.
    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Builds a partition from parts, sorting them into canonical
    /// (weakly decreasing) order.
    ///
    /// Panics if any part is zero.
    pub fn new(mut parts: Vec<usize>) -> Self {
        assert!(parts.iter().all(|&p| p > 0), "partition parts must be positive");
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    /// The parts in weakly decreasing order.
    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `|λ|`: the sum of the parts.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `ℓ(λ)`: the number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    /// Whether this is the empty partition.
    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `m_i(λ)`: the number of parts equal to `i` (with `i ≥ 1`).
    pub fn multiplicity(&self, i: usize) -> usize {
        assert!(i >= 1, "multiplicity index must be positive");
        self.parts.iter().filter(|&&p| p == i).count()
    }

    /// `λ[i]`: replaces one part equal to `i` by `i - 1` (dropping it when
    /// `i = 1`), returning `None` when no part equals `i`.
    pub fn shrink(&self, i: usize) -> Option<Partition> {
        assert!(i >= 1, "shrink index must be positive");
        let pos = self.parts.iter().position(|&p| p == i)?;
        let mut parts = self.parts.clone();
        if i == 1 {
            parts.remove(pos);
        } else {
            parts[pos] = i - 1;
        }
        Some(Partition::new(parts))
    }

    /// All partitions obtained by adding one box legally: adding 1 to a part
    /// while keeping the sequence weakly decreasing, or appending a new part 1.
    ///
    /// Results are listed by the position of the added box, the new part last.
    pub fn up_covers(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        for i in 0..self.parts.len() {
            if i == 0 || self.parts[i - 1] > self.parts[i] {
                let mut parts = self.parts.clone();
                parts[i] += 1;
                out.push(Partition { parts });
            }
        }
        let mut parts = self.parts.clone();
        parts.push(1);
        out.push(Partition { parts });
        out
    }

    /// All partitions obtained by removing one box legally; the exact inverse
    /// relation of [`Partition::up_covers`], listed by box position.
    pub fn down_covers(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        for i in 0..self.parts.len() {
            if i + 1 == self.parts.len() || self.parts[i] > self.parts[i + 1] {
                let mut parts = self.parts.clone();
                parts[i] -= 1;
                if parts[i] == 0 {
                    parts.remove(i);
                }
                out.push(Partition { parts });
            }
        }
        out
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Partition {
    /// Size first, then reverse-lexicographic: within one size, a partition
    /// with lexicographically larger parts comes first, matching [`enumerate`].
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl fmt::Display for Partition {
    /// Bracketed comma-separated parts: `[2,1,1]`; the empty partition is `[]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for Partition {
    type Err = String;

    /// Parses the bracket form produced by `Display`, e.g. `[2,1,1]` or `[]`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| format!("partition must be bracketed: `{s}`"))?;
        let inner = inner.trim();
        if inner.is_empty() {
            return Ok(Partition::empty());
        }
        let mut parts = Vec::new();
        for piece in inner.split(',') {
            let p: usize = piece
                .trim()
                .parse()
                .map_err(|_| format!("bad partition part `{piece}`"))?;
            if p == 0 {
                return Err("partition parts must be positive".into());
            }
            parts.push(p);
        }
        Ok(Partition::new(parts))
    }
}

/// Enumerates all partitions of `m` (restricted to at most `max_len` parts
/// when given), each exactly once, in reverse-lexicographic order:
/// `enumerate(4, None)` yields `[4], [3,1], [2,2], [2,1,1], [1,1,1,1]`.
pub fn enumerate(m: usize, max_len: Option<usize>) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    let limit = max_len.unwrap_or(usize::MAX);
    enumerate_rec(m, m, limit, &mut current, &mut out);
    out
}

fn enumerate_rec(
    remaining: usize,
    max_part: usize,
    slots: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Partition>,
) {
    if remaining == 0 {
        out.push(Partition {
            parts: current.clone(),
        });
        return;
    }
    if slots == 0 {
        return;
    }
    for part in (1..=remaining.min(max_part)).rev() {
        current.push(part);
        enumerate_rec(remaining - part, part, slots - 1, current, out);
        current.pop();
    }
}

/// `(q)_λ = Π_i q·(q-1)⋯(q-λ_i+1)`: the product over the parts of `λ` of the
/// falling factorials of `q`; the empty product is 1.
pub fn falling_product(ring: &Ring, q: &Scalar, lambda: &Partition) -> Scalar {
    let mut acc = ring.one();
    for &part in lambda.parts() {
        for j in 0..part {
            let factor = ring.sub(q, &ring.from_i64(j as i64));
            acc = ring.mul(&acc, &factor);
        }
    }
    acc
}

/// Falling-factorial product over plain integers, for coefficient-table
/// specializations: `Π_i q·(q-1)⋯(q-λ_i+1)` as a big integer.
pub fn falling_product_int(q: i64, lambda: &Partition) -> num_bigint::BigInt {
    use num_bigint::BigInt;
    let mut acc = BigInt::from(1);
    for &part in lambda.parts() {
        for j in 0..part as i64 {
            acc *= BigInt::from(q - j);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn enumerate_zero_is_empty_partition() {
        assert_eq!(enumerate(0, None), vec![Partition::empty()]);
    }

    #[test]
    fn enumerate_four_in_reverse_lex_order() {
        let got = enumerate(4, None);
        let want = vec![p(&[4]), p(&[3, 1]), p(&[2, 2]), p(&[2, 1, 1]), p(&[1, 1, 1, 1])];
        assert_eq!(got, want);
    }

    #[test]
    fn enumerate_respects_max_len() {
        assert_eq!(enumerate(3, Some(2)), vec![p(&[3]), p(&[2, 1])]);
    }

    #[test]
    fn multiplicity_counts_parts() {
        assert_eq!(p(&[2, 1, 1]).multiplicity(1), 2);
        assert_eq!(p(&[2, 1, 1]).multiplicity(3), 0);
        assert_eq!(Partition::empty().multiplicity(1), 0);
    }

    #[test]
    fn shrink_examples() {
        assert_eq!(p(&[2, 1]).shrink(2), Some(p(&[1, 1])));
        assert_eq!(p(&[1]).shrink(1), Some(Partition::empty()));
        assert_eq!(p(&[2, 2]).shrink(1), None);
    }

    #[test]
    fn up_covers_examples() {
        assert_eq!(Partition::empty().up_covers(), vec![p(&[1])]);
        assert_eq!(
            p(&[2, 1]).up_covers(),
            vec![p(&[3, 1]), p(&[2, 2]), p(&[2, 1, 1])]
        );
        assert_eq!(p(&[1, 1]).up_covers(), vec![p(&[2, 1]), p(&[1, 1, 1])]);
    }

    #[test]
    fn down_covers_examples() {
        assert_eq!(p(&[3, 1]).down_covers(), vec![p(&[2, 1]), p(&[3])]);
        assert_eq!(p(&[1]).down_covers(), vec![Partition::empty()]);
    }

    #[test]
    fn shrink_reduces_size_and_multiplicity() {
        for m in 0..=8usize {
            for lam in enumerate(m, None) {
                for i in 1..=m {
                    if lam.multiplicity(i) > 0 {
                        let mu = lam.shrink(i).unwrap();
                        assert_eq!(mu.size() + 1, lam.size());
                        assert_eq!(mu.multiplicity(i) + 1, lam.multiplicity(i));
                    } else {
                        assert_eq!(lam.shrink(i), None);
                    }
                }
            }
        }
    }

    /// Partition counts against the Euler pentagonal-number recurrence,
    /// implemented independently of the enumeration:
    /// `p(m) = Σ_{k≥1} (-1)^{k+1} [p(m - k(3k-1)/2) + p(m - k(3k+1)/2)]`.
    #[test]
    fn enumerate_counts_match_pentagonal_recurrence() {
        let n_max = 20usize;
        let mut counts = vec![0i64; n_max + 1];
        counts[0] = 1;
        for m in 1..=n_max {
            let mut total = 0i64;
            let mut k = 1usize;
            loop {
                let g1 = k * (3 * k - 1) / 2;
                let g2 = k * (3 * k + 1) / 2;
                if g1 > m && g2 > m {
                    break;
                }
                let sign = if k % 2 == 1 { 1 } else { -1 };
                if g1 <= m {
                    total += sign * counts[m - g1];
                }
                if g2 <= m {
                    total += sign * counts[m - g2];
                }
                k += 1;
            }
            counts[m] = total;
        }
        for m in 0..=n_max {
            assert_eq!(
                enumerate(m, None).len() as i64,
                counts[m],
                "partition count mismatch at m = {m}"
            );
        }
    }

    /// Brute-force oracle: partitions of `m` are exactly the weakly decreasing
    /// positive compositions of `m`, generated here by filtering all
    /// compositions.
    #[test]
    fn enumerate_matches_brute_force_compositions() {
        fn compositions(m: usize) -> Vec<Vec<usize>> {
            if m == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in 1..=m {
                for rest in compositions(m - first) {
                    let mut c = vec![first];
                    c.extend(rest);
                    out.push(c);
                }
            }
            out
        }
        for m in 0..=9usize {
            let mut weakly_decreasing: Vec<Vec<usize>> = compositions(m)
                .into_iter()
                .filter(|c| c.windows(2).all(|w| w[0] >= w[1]))
                .collect();
            weakly_decreasing.sort();
            let mut from_enumerate: Vec<Vec<usize>> =
                enumerate(m, None).iter().map(|p| p.parts().to_vec()).collect();
            from_enumerate.sort();
            assert_eq!(from_enumerate, weakly_decreasing);
        }
    }

    #[test]
    fn up_and_down_covers_are_adjoint() {
        for m in 0..=12usize {
            for lam in enumerate(m, None) {
                for mu in lam.up_covers() {
                    assert!(mu.down_covers().contains(&lam));
                }
                for nu in lam.down_covers() {
                    assert!(nu.up_covers().contains(&lam));
                }
            }
        }
    }

    #[test]
    fn ordering_matches_enumeration_order() {
        let mut all = Vec::new();
        for m in 0..=7usize {
            all.extend(enumerate(m, None));
        }
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
    }

    #[test]
    fn display_and_parse_round_trip() {
        assert_eq!(p(&[2, 1, 1]).to_string(), "[2,1,1]");
        assert_eq!(Partition::empty().to_string(), "[]");
        for m in 0..=8usize {
            for lam in enumerate(m, None) {
                let round: Partition = lam.to_string().parse().unwrap();
                assert_eq!(round, lam);
            }
        }
    }

    #[test]
    fn falling_product_examples() {
        let ring = Ring::Rat;
        let three = ring.from_i64(3);
        assert_eq!(
            falling_product(&ring, &three, &p(&[2])),
            ring.from_i64(6)
        );
        assert_eq!(
            falling_product(&ring, &three, &Partition::empty()),
            ring.one()
        );
        let two = ring.from_i64(2);
        assert_eq!(
            falling_product(&ring, &two, &p(&[1, 1])),
            ring.from_i64(4)
        );
        assert_eq!(falling_product_int(3, &p(&[2])), 6.into());
        assert_eq!(falling_product_int(2, &p(&[1, 1])), 4.into());
    }
}
