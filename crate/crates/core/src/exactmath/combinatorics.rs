use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::BigRat;

/// Sign convention for `B_1`; every other Bernoulli number is unaffected.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BernoulliConvention {
    /// `B_1 = -1/2`, the generating function `x/(e^x - 1)`.
    #[default]
    MinusHalf,
    /// `B_1 = +1/2`, the generating function `x/(1 - e^-x)`.
    PlusHalf,
}

impl BernoulliConvention {
    pub const ALL: [BernoulliConvention; 2] = [Self::MinusHalf, Self::PlusHalf];

    pub fn label(self) -> &'static str {
        match self {
            Self::MinusHalf => "B1=-1/2",
            Self::PlusHalf => "B1=+1/2",
        }
    }
}

// Rows grow on demand. Readers take the shared lock; the first caller that
// needs a larger index extends the table under the exclusive lock.
#[derive(Default)]
struct Tables {
    factorial: Vec<BigInt>,
    stirling1: Vec<Vec<BigInt>>,
    stirling2: Vec<Vec<BigInt>>,
    bernoulli: Vec<BigRat>,
}

impl Tables {
    fn extend_factorial(&mut self, n: usize) {
        if self.factorial.is_empty() {
            self.factorial.push(BigInt::one());
        }
        while self.factorial.len() <= n {
            let k = self.factorial.len();
            let next = &self.factorial[k - 1] * BigInt::from(k);
            self.factorial.push(next);
        }
    }

    fn extend_stirling(&mut self, n: usize) {
        if self.stirling1.is_empty() {
            self.stirling1.push(vec![BigInt::one()]);
            self.stirling2.push(vec![BigInt::one()]);
        }
        while self.stirling1.len() <= n {
            let w = self.stirling1.len();
            let prev1 = &self.stirling1[w - 1];
            let prev2 = &self.stirling2[w - 1];
            let at = |row: &Vec<BigInt>, j: usize| row.get(j).cloned().unwrap_or_default();
            let mut row1 = Vec::with_capacity(w + 1);
            let mut row2 = Vec::with_capacity(w + 1);
            row1.push(BigInt::zero());
            row2.push(BigInt::zero());
            for j in 1..=w {
                // [w j] = [w-1 j-1] + (w-1)[w-1 j];  {w j} = j{w-1 j} + {w-1 j-1}
                row1.push(at(prev1, j - 1) + at(prev1, j) * BigInt::from(w - 1));
                row2.push(at(prev2, j) * BigInt::from(j) + at(prev2, j - 1));
            }
            self.stirling1.push(row1);
            self.stirling2.push(row2);
        }
    }

    fn extend_bernoulli(&mut self, n: usize) {
        if self.bernoulli.is_empty() {
            self.bernoulli.push(BigRat::one());
        }
        while self.bernoulli.len() <= n {
            let m = self.bernoulli.len();
            if m >= 3 && m % 2 == 1 {
                self.bernoulli.push(BigRat::zero());
                continue;
            }
            // sum_{i=0}^{m} C(m+1, i) B_i = 0
            let mut acc = BigRat::zero();
            for (i, b) in self.bernoulli.iter().enumerate() {
                if !b.is_zero() {
                    acc += BigRat::from_integer(binom_int(m as u64 + 1, i as i64)) * b;
                }
            }
            self.bernoulli.push(-acc / BigRat::from_integer(BigInt::from(m + 1)));
        }
    }
}

fn tables() -> &'static RwLock<Tables> {
    static TABLES: OnceLock<RwLock<Tables>> = OnceLock::new();
    TABLES.get_or_init(|| RwLock::new(Tables::default()))
}

fn lookup<T>(read: impl Fn(&Tables) -> Option<T>, extend: impl FnOnce(&mut Tables)) -> T {
    if let Some(v) = read(&tables().read().expect("table lock poisoned")) {
        return v;
    }
    let mut guard = tables().write().expect("table lock poisoned");
    extend(&mut guard);
    read(&guard).expect("table extended to the requested index")
}

/// Precomputes every table up to index `bound`.
pub fn warm_up(bound: usize) {
    let mut guard = tables().write().expect("table lock poisoned");
    guard.extend_factorial(bound);
    guard.extend_stirling(bound);
    guard.extend_bernoulli(bound);
}

/// `C(n, k)`; zero when `k < 0` or `k > n`.
pub fn binom_int(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Generalized binomial `x (x-1) ... (x-k+1) / k!` at a rational argument.
pub fn binom_gen(x: &BigRat, k: u64) -> BigRat {
    let mut acc = BigRat::one();
    for i in 0..k {
        acc *= x - BigRat::from_integer(BigInt::from(i));
    }
    acc / BigRat::from_integer(factorial(k as usize))
}

pub fn factorial(n: usize) -> BigInt {
    lookup(|t| t.factorial.get(n).cloned(), |t| t.extend_factorial(n))
}

/// Stirling number of the second kind: partitions of an `m`-set into `t`
/// nonempty blocks.
pub fn stirling2(m: usize, t: usize) -> BigInt {
    if t > m {
        return BigInt::zero();
    }
    lookup(
        |tb| tb.stirling2.get(m).map(|row| row[t].clone()),
        |tb| tb.extend_stirling(m),
    )
}

/// Unsigned Stirling number of the first kind: permutations of `w` elements
/// with `j` cycles.
pub fn stirling1_unsigned(w: usize, j: usize) -> BigInt {
    if j > w {
        return BigInt::zero();
    }
    lookup(
        |tb| tb.stirling1.get(w).map(|row| row[j].clone()),
        |tb| tb.extend_stirling(w),
    )
}

/// `B_j` with `B_1 = -1/2`.
pub fn bernoulli(j: usize) -> BigRat {
    bernoulli_with(j, BernoulliConvention::MinusHalf)
}

pub fn bernoulli_with(j: usize, convention: BernoulliConvention) -> BigRat {
    let b = lookup(|t| t.bernoulli.get(j).cloned(), |t| t.extend_bernoulli(j));
    if j == 1 && convention == BernoulliConvention::PlusHalf {
        -b
    } else {
        b
    }
}

/// `sum_{w=0}^{k-1} (-1)^w w!`.
pub fn alt_factorial_sum(k: usize) -> BigInt {
    let mut acc = BigInt::zero();
    let mut fact = BigInt::one();
    for w in 0..k {
        if w > 0 {
            fact *= w;
        }
        if w % 2 == 0 {
            acc += &fact;
        } else {
            acc -= &fact;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int_rat, rat};

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    /// Pascal's triangle built by addition only.
    fn pascal(n: usize) -> Vec<Vec<BigInt>> {
        let mut rows = vec![vec![BigInt::one()]];
        for i in 1..=n {
            let prev = &rows[i - 1];
            let mut row = vec![BigInt::one(); i + 1];
            for k in 1..i {
                row[k] = &prev[k - 1] + &prev[k];
            }
            rows.push(row);
        }
        rows
    }

    /// Counts set partitions of {0..m-1} into exactly t blocks by restricted
    /// growth strings.
    fn count_partitions(m: usize, t: usize) -> u64 {
        fn go(i: usize, m: usize, max: usize, t: usize) -> u64 {
            if i == m {
                return u64::from(max == t);
            }
            (0..=max.min(t.saturating_sub(1)))
                .map(|b| go(i + 1, m, max.max(b + 1), t))
                .sum()
        }
        if m == 0 {
            return u64::from(t == 0);
        }
        go(1, m, 1, t)
    }

    /// Counts permutations of `w` elements by number of cycles.
    fn count_cycles(w: usize, j: usize) -> u64 {
        fn perms(w: usize) -> Vec<Vec<usize>> {
            if w == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(w - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, w - 1);
                    out.push(q);
                }
            }
            out
        }
        perms(w)
            .into_iter()
            .filter(|p| {
                let mut seen = vec![false; w];
                let mut cycles = 0;
                for s in 0..w {
                    if !seen[s] {
                        cycles += 1;
                        let mut c = s;
                        while !seen[c] {
                            seen[c] = true;
                            c = p[c];
                        }
                    }
                }
                cycles == j
            })
            .count() as u64
    }

    #[test]
    fn binom_int_examples() {
        assert_eq!(binom_int(4, 2), big(6));
        assert_eq!(binom_int(7, 0), big(1));
        let tri = pascal(30);
        assert_eq!(tri[30][15], big(155117520));
        assert_eq!(binom_int(30, 15), tri[30][15]);
        assert_eq!(binom_int(5, -1), big(0));
        assert_eq!(binom_int(5, 6), big(0));
    }

    #[test]
    fn binom_int_pascal_and_symmetry() {
        let tri = pascal(40);
        for n in 1..=40u64 {
            for k in 1..=n as i64 {
                assert_eq!(binom_int(n, k), binom_int(n - 1, k - 1) + binom_int(n - 1, k));
                assert_eq!(binom_int(n, k), binom_int(n, n as i64 - k));
                assert_eq!(binom_int(n, k), tri[n as usize][k as usize]);
            }
        }
    }

    #[test]
    fn binom_gen_examples() {
        assert_eq!(binom_gen(&int_rat(-1), 3), int_rat(-1));
        for r in 0..8 {
            let expect = if r % 2 == 0 { 1 } else { -1 };
            assert_eq!(binom_gen(&int_rat(-1), r), int_rat(expect));
        }
        assert_eq!(binom_gen(&rat(-3, 4), 0), int_rat(1));
        // (-3/4)(-7/4)/2
        assert_eq!(binom_gen(&rat(-3, 4), 2), rat(-3, 4) * rat(-7, 4) / int_rat(2));
        assert_eq!(binom_gen(&rat(-3, 4), 2), rat(21, 32));
    }

    #[test]
    fn binom_gen_agrees_with_binom_int() {
        for x in 0..=20u64 {
            for k in 0..=22u64 {
                assert_eq!(
                    binom_gen(&int_rat(x as i64), k),
                    BigRat::from_integer(binom_int(x, k as i64))
                );
            }
        }
    }

    #[test]
    fn factorial_examples() {
        assert_eq!(factorial(0), big(1));
        assert_eq!(factorial(5), big(120));
        let mut oracle = BigInt::one();
        for i in 1..=20u32 {
            oracle *= i;
        }
        assert_eq!(factorial(20), oracle);
        assert_eq!(factorial(20), BigInt::from(2432902008176640000u64));
    }

    #[test]
    fn stirling2_examples_and_enumeration() {
        assert_eq!(stirling2(3, 2), big(3));
        assert_eq!(stirling2(4, 2), big(7));
        for m in 0..=9 {
            assert_eq!(stirling2(m, m), big(1));
            for t in 0..=m + 1 {
                assert_eq!(stirling2(m, t), BigInt::from(count_partitions(m, t)), "S2({m},{t})");
            }
        }
    }

    #[test]
    fn stirling1_examples_and_enumeration() {
        assert_eq!(stirling1_unsigned(3, 2), big(3));
        assert_eq!(stirling1_unsigned(4, 1), big(6));
        for w in 0..=7 {
            assert_eq!(stirling1_unsigned(w, w), big(1));
            for j in 0..=w + 1 {
                assert_eq!(
                    stirling1_unsigned(w, j),
                    BigInt::from(count_cycles(w, j)),
                    "s1({w},{j})"
                );
            }
        }
        for w in 1..=12 {
            assert_eq!(stirling1_unsigned(w, 1), factorial(w - 1));
        }
    }

    #[test]
    fn stirling_recurrences() {
        for m in 1..=25usize {
            for t in 1..=25usize {
                assert_eq!(
                    stirling2(m, t),
                    stirling2(m - 1, t) * BigInt::from(t) + stirling2(m - 1, t - 1)
                );
                assert_eq!(
                    stirling1_unsigned(m, t),
                    stirling1_unsigned(m - 1, t - 1) + stirling1_unsigned(m - 1, t) * BigInt::from(m - 1)
                );
            }
        }
    }

    #[test]
    fn stirling2_expands_powers_in_falling_factorials() {
        for w in 0..=10usize {
            for x in 1..=10i64 {
                let mut total = BigInt::zero();
                for j in 0..=w {
                    let falling: BigInt = (0..j as i64).map(|i| BigInt::from(x - i)).product();
                    total += stirling2(w, j) * falling;
                }
                assert_eq!(total, BigInt::from(x).pow(w as u32));
            }
        }
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli(0), int_rat(1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli_with(1, BernoulliConvention::PlusHalf), rat(1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(3), int_rat(0));
        assert_eq!(bernoulli(4), rat(-1, 30));
        assert_eq!(bernoulli(12), rat(-691, 2730));
        assert_eq!(bernoulli_with(12, BernoulliConvention::PlusHalf), rat(-691, 2730));
    }

    #[test]
    fn bernoulli_recurrence() {
        for m in 1..=30usize {
            let mut acc = BigRat::zero();
            for i in 0..=m {
                acc += BigRat::from_integer(binom_int(m as u64 + 1, i as i64)) * bernoulli(i);
            }
            assert!(acc.is_zero(), "recurrence fails at m={m}");
        }
    }

    #[test]
    fn alt_factorial_sum_examples_and_recurrence() {
        assert_eq!(alt_factorial_sum(0), big(0));
        assert_eq!(alt_factorial_sum(1), big(1));
        assert_eq!(alt_factorial_sum(4), big(-4));
        for k in 1..=40usize {
            let sign = if (k - 1) % 2 == 0 {
                BigInt::one()
            } else {
                -BigInt::one()
            };
            assert_eq!(alt_factorial_sum(k), alt_factorial_sum(k - 1) + sign * factorial(k - 1));
        }
    }

    #[test]
    fn concurrent_table_growth_is_consistent() {
        use rayon::prelude::*;
        let values: Vec<BigInt> = (0..60usize)
            .into_par_iter()
            .rev()
            .map(|n| stirling2(n, n / 2))
            .collect();
        for (n, v) in values.iter().rev().enumerate() {
            assert_eq!(*v, stirling2(n, n / 2));
        }
    }
}
