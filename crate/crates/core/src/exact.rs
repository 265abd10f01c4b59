//! Exact rational machinery: Bernoulli numbers and the Laurent data of `csc²`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Bernoulli numbers `B_0 ..= B_max` (convention `B_1 = -1/2`).
pub fn bernoulli_numbers(max: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(max + 1);
    b.push(BigRational::one());
    // sum_{k=0}^{m} C(m+1, k) B_k = 0
    for m in 1..=max {
        if m > 1 && m % 2 == 1 {
            b.push(BigRational::zero());
            continue;
        }
        let mut binom = BigInt::one(); // C(m+1, 0)
        let mut acc = BigRational::zero();
        for (k, bk) in b.iter().enumerate() {
            if !bk.is_zero() {
                acc += bk * BigRational::from_integer(binom.clone());
            }
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        // binom is now C(m+1, m) = m + 1
        b.push(-acc / BigRational::from_integer(binom));
    }
    b
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Coefficients `c_j` of `csc²u = Σ c_j u^(2j-2)`, `j = 0 ..= terms-1`.
///
/// `c_0 = 1` and `c_k = (2k-1) 2^(2k) |B_2k| / (2k)!` for `k ≥ 1`.
pub fn csc2_laurent(terms: usize) -> Vec<BigRational> {
    let b = bernoulli_numbers(2 * terms.max(1));
    let mut out = Vec::with_capacity(terms);
    for k in 0..terms {
        if k == 0 {
            out.push(BigRational::one());
            continue;
        }
        let two_k = 2 * k as u64;
        let num = BigInt::from(2 * k as i64 - 1) * (BigInt::one() << (2 * k));
        let c = b[2 * k].abs() * BigRational::from_integer(num)
            / BigRational::from_integer(factorial(two_k));
        out.push(c);
    }
    out
}

/// Reduces a rational to lowest terms with a positive denominator.
pub fn normalized(r: BigRational) -> BigRational {
    let (n, d) = (r.numer().clone(), r.denom().clone());
    let g = n.gcd(&d);
    let (n, d) = (n / &g, d / &g);
    if d.is_negative() {
        BigRational::new_raw(-n, -d)
    } else {
        BigRational::new_raw(n, d)
    }
}
