//! Exact closed-form counts and bounds.
//!
//! Everything here is arbitrary-precision integer arithmetic. Formulas that
//! contain a division assert that the division is exact; a remainder means a
//! transcription bug and is reported as [`Error::Internal`].

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};
use crate::matchings::PartStructure;

/// An exact non-negative count.
pub type BigCount = BigUint;

/// The falling factorial `(a)_b = a (a-1) ... (a-b+1)`.
pub fn falling(a: usize, b: usize) -> Result<BigCount> {
    if b > a {
        return domain(format!("falling factorial ({a})_{b} needs b <= a"));
    }
    Ok(falling_unchecked(a, b))
}

fn falling_unchecked(a: usize, b: usize) -> BigCount {
    ((a - b + 1)..=a).fold(BigUint::one(), |acc, x| acc * BigUint::from(x))
}

pub fn factorial(n: usize) -> BigCount {
    falling_unchecked(n, n)
}

/// Binomial coefficient; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigCount {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    exact_div(falling_unchecked(n, k), factorial(k)).expect("binomial is integral")
}

fn exact_div(num: BigUint, den: BigUint) -> Result<BigCount> {
    let q = &num / &den;
    if &q * &den != num {
        return Err(Error::Internal(format!(
            "inexact division {num} / {den} in a closed-form count"
        )));
    }
    Ok(q)
}

fn check_range(parts: &PartStructure, r: usize, t: usize) -> Result<()> {
    if t == 0 {
        return domain("t must be at least 1");
    }
    if t > r {
        return domain(format!("t = {t} exceeds r = {r}"));
    }
    if r > parts.min_size() {
        return domain(format!("r = {r} exceeds the smallest part of {parts}"));
    }
    Ok(())
}

/// Number of `r`-edge matchings of the complete k-partite k-graph: `prod_i (n_i)_r / r!`.
///
/// `r = 0` is accepted and counts the single empty matching.
pub fn count_matchings(parts: &PartStructure, r: usize) -> Result<BigCount> {
    if r > parts.min_size() {
        return domain(format!("r = {r} exceeds the smallest part of {parts}"));
    }
    let num = parts
        .sizes()
        .iter()
        .fold(BigUint::one(), |acc, &n| acc * falling_unchecked(n, r));
    exact_div(num, factorial(r))
}

fn star_product(parts: &PartStructure, r: usize, t: usize) -> BigCount {
    parts
        .sizes()
        .iter()
        .fold(BigUint::one(), |acc, &n| acc * falling_unchecked(n - t, r - t))
}

/// Size of a t-star: `prod_i (n_i - t)_{r-t} / (r-t)!`.
pub fn t_star_size(parts: &PartStructure, r: usize, t: usize) -> Result<BigCount> {
    check_range(parts, r, t)?;
    exact_div(star_product(parts, r, t), factorial(r - t))
}

/// Size of a t-set-star: `(t!)^{k-1}` times the t-star size.
pub fn t_set_star_size(parts: &PartStructure, r: usize, t: usize) -> Result<BigCount> {
    let star = t_star_size(parts, r, t)?;
    Ok(factorial(t).pow(parts.k() as u32 - 1) * star)
}

/// Size of the family consistent with per-projection centres on the last
/// part whose shadows there cover `u` vertices:
/// `prod_{j<k} (n_j - t)_{r-t} * (n_k - u)_{r-u} / (r-u)!`,
/// times `(t!)^{k-1}` for the box variant.
pub fn semi_star_size(
    parts: &PartStructure,
    r: usize,
    t: usize,
    u: usize,
    set_variant: bool,
) -> Result<BigCount> {
    check_range(parts, r, t)?;
    if u < t {
        return domain(format!("u = {u} is smaller than t = {t}"));
    }
    if u > r {
        return domain(format!("u = {u} exceeds r = {r}"));
    }
    let sizes = parts.sizes();
    let (&last, rest) = sizes.split_last().expect("k >= 1");
    if u > last {
        return domain(format!("u = {u} exceeds the last part size {last}"));
    }
    let head = rest
        .iter()
        .fold(BigUint::one(), |acc, &n| acc * falling_unchecked(n - t, r - t));
    let tail = exact_div(falling_unchecked(last - u, r - u), factorial(r - u))?;
    let mut size = head * tail;
    if set_variant {
        size *= factorial(t).pow(parts.k() as u32 - 1);
    }
    Ok(size)
}

/// `|{F in C([n], r) : |F ∩ [t+2i]| >= t+i}|`.
pub fn ak_family_size(n: usize, r: usize, t: usize, i: usize) -> Result<BigCount> {
    let frame = t + 2 * i;
    if frame > n {
        return domain(format!("t + 2i = {frame} exceeds n = {n}"));
    }
    if r > n {
        return domain(format!("r = {r} exceeds n = {n}"));
    }
    let outside = n - frame;
    let lo = (t + i).max(r.saturating_sub(outside));
    let hi = r.min(frame);
    Ok((lo..=hi)
        .map(|j| binomial(frame, j) * binomial(outside, r - j))
        .sum())
}

/// Number of permutations of `[n]` with at least `t+i` fixed points inside `[t+2i]`,
/// by inclusion–exclusion over the non-fixed part of the frame.
pub fn gi_size(n: usize, t: usize, i: usize) -> Result<BigCount> {
    let frame = t + 2 * i;
    if frame > n {
        return domain(format!("t + 2i = {frame} exceeds n = {n}"));
    }
    let mut total = BigUint::zero();
    for s in (t + i)..=frame {
        // permutations fixing a given s-subset of the frame and no other frame point
        let free = frame - s;
        let mut exact = BigInt::zero();
        for j in 0..=free {
            let term = BigInt::from(binomial(free, j)) * BigInt::from(factorial(n - s - j));
            if j % 2 == 0 {
                exact += term;
            } else {
                exact -= term;
            }
        }
        let exact = exact
            .to_biguint()
            .ok_or_else(|| Error::Internal("negative inclusion–exclusion count".into()))?;
        total += binomial(frame, s) * exact;
    }
    Ok(total)
}

/// `(|A_l|, |A_{l,x}|)` for `A_l = {A ⊆ [n] : |A| >= l}` and
/// `A_{l,x} = {A ⊆ [n] : |A - {x}| >= l}` (the latter does not depend on `x`).
pub fn katona_sizes(n: usize, l: usize) -> Result<(BigCount, BigCount)> {
    if n == 0 {
        return domain("katona sizes need n >= 1");
    }
    if l > n {
        return domain(format!("l = {l} exceeds n = {n}"));
    }
    let a_l = (l..=n).map(|i| binomial(n, i)).sum();
    let a_lx: BigUint = (l..n).map(|i| binomial(n - 1, i)).sum();
    Ok((a_l, a_lx * 2u32))
}

/// The largest `l` in `1..=(r-t)/2` with
/// `(2l+t-1) Σ_i (-1)^i C(l,i) (n-l-t-i)!  >=  l Σ_i (-1)^i C(l,i) (n-l-t+1-i)!`,
/// or 0 when no `l` qualifies.
pub fn conj2_threshold(n: usize, r: usize, t: usize) -> Result<usize> {
    if t > r || r > n {
        return domain(format!("need t <= r <= n, got t={t} r={r} n={n}"));
    }
    let alt_sum = |l: usize, shift: usize| -> BigInt {
        (0..=l)
            .map(|i| {
                let term = BigInt::from(binomial(l, i)) * BigInt::from(factorial(n + shift - l - t - i));
                if i % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum()
    };
    let mut best = 0;
    for l in 1..=(r - t) / 2 {
        let lhs = BigInt::from(2 * l + t - 1) * alt_sum(l, 0);
        let rhs = BigInt::from(l) * alt_sum(l, 1);
        if lhs >= rhs {
            best = l;
        }
    }
    Ok(best)
}

/// Lossy conversion for display and table columns.
pub fn to_u128(c: &BigCount) -> Option<u128> {
    c.to_u128()
}

/// All `k`-subsets of `0..n` as ascending index vectors, in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Combinations {
    Combinations {
        n,
        idx: (0..k).collect(),
        done: k > n,
    }
}

pub struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut pos = k;
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            if self.idx[pos] < self.n - k + pos {
                self.idx[pos] += 1;
                for q in pos + 1..k {
                    self.idx[q] = self.idx[q - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(s: &[usize]) -> PartStructure {
        PartStructure::new(s.to_vec()).unwrap()
    }

    fn n(x: u64) -> BigCount {
        BigUint::from(x)
    }

    #[test]
    fn falling_examples() {
        assert_eq!(falling(5, 2).unwrap(), n(20));
        assert_eq!(falling(7, 0).unwrap(), n(1));
        assert_eq!(falling(3, 3).unwrap(), n(6));
        assert!(matches!(falling(2, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn count_matchings_examples() {
        assert_eq!(count_matchings(&ps(&[4]), 2).unwrap(), n(6));
        assert_eq!(count_matchings(&ps(&[3, 3]), 2).unwrap(), n(18));
        assert_eq!(count_matchings(&ps(&[2, 2, 2]), 2).unwrap(), n(4));
        assert!(count_matchings(&ps(&[3, 2]), 3).is_err());
    }

    #[test]
    fn star_examples() {
        assert_eq!(t_star_size(&ps(&[3, 3]), 2, 1).unwrap(), n(4));
        assert_eq!(t_star_size(&ps(&[8, 8]), 8, 4).unwrap(), n(24));
        assert_eq!(t_star_size(&ps(&[5, 5]), 3, 3).unwrap(), n(1));
        assert!(t_star_size(&ps(&[5, 5]), 2, 3).is_err());
        assert!(t_star_size(&ps(&[5, 5]), 2, 0).is_err());
    }

    #[test]
    fn set_star_examples() {
        assert_eq!(t_set_star_size(&ps(&[4, 4]), 4, 2).unwrap(), n(4));
        assert_eq!(t_set_star_size(&ps(&[4, 4, 4]), 4, 2).unwrap(), n(16));
        assert_eq!(t_set_star_size(&ps(&[3, 3]), 3, 3).unwrap(), n(6));
    }

    #[test]
    fn semi_star_examples() {
        assert_eq!(semi_star_size(&ps(&[3, 3]), 2, 1, 1, false).unwrap(), n(4));
        assert_eq!(semi_star_size(&ps(&[3, 3, 3]), 2, 1, 2, false).unwrap(), n(4));
        assert_eq!(semi_star_size(&ps(&[4, 4]), 3, 2, 3, true).unwrap(), n(4));
        assert!(semi_star_size(&ps(&[4, 4]), 3, 2, 1, true).is_err());
    }

    #[test]
    fn ak_examples() {
        assert_eq!(ak_family_size(5, 3, 2, 0).unwrap(), n(3));
        assert_eq!(ak_family_size(5, 3, 2, 1).unwrap(), n(4));
        assert!(ak_family_size(5, 3, 2, 2).is_err());
    }

    #[test]
    fn gi_examples() {
        assert_eq!(gi_size(8, 4, 1).unwrap(), n(26));
        assert_eq!(gi_size(8, 4, 0).unwrap(), n(24));
        assert_eq!(gi_size(4, 2, 1).unwrap(), n(1));
        assert!(gi_size(4, 2, 2).is_err());
    }

    #[test]
    fn katona_examples() {
        assert_eq!(katona_sizes(5, 3).unwrap().0, n(16));
        assert_eq!(katona_sizes(6, 4).unwrap().0, n(22));
        assert_eq!(katona_sizes(4, 0).unwrap(), (n(16), n(16)));
    }

    #[test]
    fn combinations_count_and_order() {
        let all: Vec<_> = combinations(5, 3).collect();
        assert_eq!(all.len(), 10);
        assert_eq!(all[0], vec![0, 1, 2]);
        assert_eq!(all[9], vec![2, 3, 4]);
        assert_eq!(combinations(3, 0).count(), 1);
        assert_eq!(combinations(2, 3).count(), 0);
    }

    #[test]
    fn conj2_empty_range() {
        assert_eq!(conj2_threshold(7, 3, 3).unwrap(), 0);
        assert_eq!(conj2_threshold(7, 4, 3).unwrap(), 0);
    }
}
