//! Exact counting: Catalan numbers, two-row standard Young tableaux, weak
//! Dyck paths, closed walks on the `d`-regular tree and the moment
//! polynomials `m_{2n}(c)` they assemble into.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::{MomentPolynomial, Polynomial};

/// Largest walk length accepted by [`enumerate_closed_walks`].
pub const ENUMERATION_MAX_LENGTH: usize = 10;
/// Largest degree accepted by [`enumerate_closed_walks`].
pub const ENUMERATION_MAX_DEGREE: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CombinatoricsError {
    #[error("expected an even length, got {0}")]
    OddLength(usize),
    #[error("expected an odd length, got {0}")]
    EvenLength(usize),
    #[error("length must be positive")]
    ZeroLength,
    #[error("tree degree must be at least 2, got {0}")]
    DegreeTooSmall(usize),
    #[error(
        "exhaustive enumeration limited to length <= {ENUMERATION_MAX_LENGTH} \
         and degree <= {ENUMERATION_MAX_DEGREE}, got length {length}, degree {degree}"
    )]
    EnumerationTooLarge { degree: usize, length: usize },
    #[error("return count must be positive")]
    ZeroReturns,
}

pub type Result<T> = std::result::Result<T, CombinatoricsError>;

/// Two-row partition shape `(lambda1, lambda2)`.
///
/// Shapes with `lambda1 < lambda2` are representable; they simply have no
/// standard tableaux.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PartitionShape {
    pub lambda1: usize,
    pub lambda2: usize,
}

impl PartitionShape {
    pub fn new(lambda1: usize, lambda2: usize) -> Self {
        PartitionShape { lambda1, lambda2 }
    }

    pub fn is_partition(&self) -> bool {
        self.lambda1 >= self.lambda2
    }

    pub fn size(&self) -> usize {
        self.lambda1 + self.lambda2
    }
}

/// Walks of a fixed length on the `d`-regular tree, started at the root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WalkModel {
    degree: usize,
    length: usize,
}

impl WalkModel {
    pub fn new(degree: usize, length: usize) -> Result<Self> {
        if degree < 2 {
            return Err(CombinatoricsError::DegreeTooSmall(degree));
        }
        Ok(WalkModel { degree, length })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// `c = d - 1`, the number of children of a non-root vertex.
    pub fn c(&self) -> u64 {
        (self.degree - 1) as u64
    }
}

/// `C_n = binom(2n, n) / (n + 1)`.
pub fn catalan(n: usize) -> BigUint {
    binomial(2 * n, n as i64) / BigUint::from(n + 1)
}

/// Exact binomial coefficient, zero outside `0 <= k <= n`.
pub fn binomial(n: usize, k: i64) -> BigUint {
    if k < 0 || k as usize > n {
        return BigUint::zero();
    }
    let k = (k as usize).min(n - k as usize);
    // Each partial product is itself a binomial coefficient, so the division
    // is exact at every step.
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn binomial_signed(n: usize, k: i64) -> BigInt {
    BigInt::from(binomial(n, k))
}

/// Number of standard Young tableaux of a two-row shape,
/// `binom(l1 + l2, l1) - binom(l1 + l2, l1 + 1)`; zero when `l1 < l2`.
pub fn syt_count(shape: PartitionShape) -> BigUint {
    if !shape.is_partition() {
        return BigUint::zero();
    }
    let n = shape.size();
    let l1 = shape.lambda1 as i64;
    let diff = binomial_signed(n, l1) - binomial_signed(n, l1 + 1);
    diff.to_biguint()
        .expect("tableau count is non-negative for lambda1 >= lambda2")
}

/// Up/down paths of `length` steps from height 0 to `end_height` that never
/// go below 0, counted by dynamic programming over heights.
pub fn weak_dyck_count(length: usize, end_height: i64) -> BigUint {
    if end_height < 0 || end_height as usize > length {
        return BigUint::zero();
    }
    let mut heights = vec![BigUint::zero(); length + 2];
    heights[0] = BigUint::one();
    for _ in 0..length {
        let mut next = vec![BigUint::zero(); length + 2];
        for (h, count) in heights.iter().enumerate() {
            if count.is_zero() {
                continue;
            }
            next[h + 1] += count;
            if h > 0 {
                next[h - 1] += count;
            }
        }
        heights = next;
    }
    std::mem::take(&mut heights[end_height as usize])
}

/// `m_{2n}(c) = sum_k f^{(2n-k, k)} c^k`.
pub fn moment_polynomial(two_n: usize) -> Result<MomentPolynomial> {
    if !two_n.is_multiple_of(2) {
        return Err(CombinatoricsError::OddLength(two_n));
    }
    Ok(tableau_row(two_n))
}

/// `m_{2n-1}(c) = sum_k f^{(2n-1-k, k)} c^k`: walks from a vertex to a fixed
/// neighbour.
pub fn odd_moment_polynomial(two_n_minus_1: usize) -> Result<MomentPolynomial> {
    if two_n_minus_1.is_multiple_of(2) {
        return Err(CombinatoricsError::EvenLength(two_n_minus_1));
    }
    Ok(tableau_row(two_n_minus_1))
}

/// Row sum `a_len = sum_{k <= len/2} f^{(len-k, k)} c^k`.
fn tableau_row(len: usize) -> MomentPolynomial {
    MomentPolynomial::from_counts(
        (0..=len / 2)
            .map(|k| syt_count(PartitionShape::new(len - k, k)))
            .collect(),
    )
}

/// Closed walks returning to the root only at the end:
/// `(1 + c) C_{n-1} c^{n-1}`.
pub fn irreducible_polynomial(two_n: usize) -> Result<MomentPolynomial> {
    if two_n == 0 {
        return Err(CombinatoricsError::ZeroLength);
    }
    if !two_n.is_multiple_of(2) {
        return Err(CombinatoricsError::OddLength(two_n));
    }
    let n = two_n / 2;
    let p = Polynomial::one_plus_c()
        .shift(n - 1)
        .scale(&catalan(n - 1).into());
    Ok(MomentPolynomial::try_from_polynomial(p).expect("positive coefficients"))
}

/// Row `n` of the truncated Pascal triangle deformed by `c`. Each entry is
/// `c` times the entry above-left plus the entry above-right; entries right
/// of the centre line are dropped. Built only from that recursion.
pub fn c_pascal_row(n: usize) -> Vec<MomentPolynomial> {
    let c = Polynomial::from_i64s(&[0, 1]);
    let mut row = vec![Polynomial::one()];
    for r in 1..=n {
        let width = r / 2 + 1;
        let next = (0..width)
            .map(|j| {
                let above_right = row.get(j).cloned().unwrap_or_default();
                let above_left = match j {
                    0 => Polynomial::zero(),
                    _ => &c * &row[j - 1],
                };
                &above_left + &above_right
            })
            .collect();
        row = next;
    }
    row.into_iter()
        .map(|p| MomentPolynomial::try_from_polynomial(p).expect("recursion keeps signs"))
        .collect()
}

/// Walk counts from the root by distance after `length` steps. From the root
/// there are `d` moves out; elsewhere `d - 1` moves out and one back.
fn distance_profile(model: &WalkModel) -> Vec<BigUint> {
    let len = model.length;
    let out_root = BigUint::from(model.degree);
    let out_inner = BigUint::from(model.degree - 1);
    let mut dist = vec![BigUint::zero(); len + 2];
    dist[0] = BigUint::one();
    for _ in 0..len {
        let mut next = vec![BigUint::zero(); len + 2];
        for (m, count) in dist.iter().enumerate() {
            if count.is_zero() {
                continue;
            }
            if m == 0 {
                next[1] += count * &out_root;
            } else {
                next[m + 1] += count * &out_inner;
                next[m - 1] += count;
            }
        }
        dist = next;
    }
    dist
}

/// Closed walks of the model's length from the root.
pub fn walk_count_dp(model: WalkModel) -> BigUint {
    let mut dist = distance_profile(&model);
    std::mem::take(&mut dist[0])
}

/// Walks from the root ending at one fixed neighbour of the root. This is
/// `m_{2n-1}` when the length is `2n - 1`.
pub fn walk_count_to_neighbor(model: WalkModel) -> BigUint {
    let dist = distance_profile(&model);
    // All d neighbours are equivalent under the tree's automorphisms.
    &dist[1] / BigUint::from(model.degree)
}

/// Closed walks returning to the root exactly `returns` times (the final
/// arrival included), by dynamic programming over (distance, returns).
pub fn walk_count_by_returns(model: WalkModel, returns: usize) -> Result<BigUint> {
    if !model.length.is_multiple_of(2) {
        return Err(CombinatoricsError::OddLength(model.length));
    }
    if returns == 0 {
        return Err(CombinatoricsError::ZeroReturns);
    }
    let len = model.length;
    let out_root = BigUint::from(model.degree);
    let out_inner = BigUint::from(model.degree - 1);
    // state[m][r]: at distance m having returned r times
    let mut state = vec![vec![BigUint::zero(); returns + 2]; len + 2];
    state[0][0] = BigUint::one();
    for _ in 0..len {
        let mut next = vec![vec![BigUint::zero(); returns + 2]; len + 2];
        for m in 0..=len {
            for r in 0..=returns {
                let count = &state[m][r];
                if count.is_zero() {
                    continue;
                }
                if m == 0 {
                    next[1][r] += count * &out_root;
                } else {
                    next[m + 1][r] += count * &out_inner;
                    if m == 1 {
                        next[0][r + 1] += count;
                    } else {
                        next[m - 1][r] += count;
                    }
                }
            }
        }
        state = next;
    }
    Ok(std::mem::take(&mut state[0][returns]))
}

/// Counts closed walks by literally walking the tree. Vertices are reduced
/// words over `d` letters with no letter repeated twice in a row; the root is
/// the empty word, children append a letter, the parent drops the last one.
pub fn enumerate_closed_walks(model: WalkModel) -> Result<BigUint> {
    if model.length > ENUMERATION_MAX_LENGTH || model.degree > ENUMERATION_MAX_DEGREE {
        return Err(CombinatoricsError::EnumerationTooLarge {
            degree: model.degree,
            length: model.length,
        });
    }
    let mut word = Vec::with_capacity(model.length);
    let count = walk_from(&mut word, model.length, model.degree as u8);
    Ok(BigUint::from(count))
}

fn walk_from(word: &mut Vec<u8>, remaining: usize, degree: u8) -> u64 {
    if word.len() > remaining {
        return 0;
    }
    if remaining == 0 {
        return u64::from(word.is_empty());
    }
    let mut total = 0;
    for letter in 0..degree {
        if word.last() == Some(&letter) {
            // Appending the last letter again is the move back to the parent.
            continue;
        }
        word.push(letter);
        total += walk_from(word, remaining - 1, degree);
        word.pop();
    }
    if let Some(letter) = word.pop() {
        total += walk_from(word, remaining - 1, degree);
        word.push(letter);
    }
    total
}
