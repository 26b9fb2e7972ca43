//! Exact Bernoulli numbers (`B_1 = -1/2` convention), memoized in an append-only table.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn table() -> &'static Mutex<Vec<BigRational>> {
    static TABLE: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![BigRational::one()]))
}

/// Binomial coefficients of row `m`.
fn binomial_row(m: usize) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(m + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for k in 1..=m {
        c = c * BigInt::from(m + 1 - k) / BigInt::from(k);
        row.push(c.clone());
    }
    row
}

/// `B_m`, from `sum_{k=0}^{m} C(m+1, k) B_k = 0`.
pub fn bernoulli(m: usize) -> BigRational {
    let mut t = table().lock().expect("bernoulli table poisoned");
    while t.len() <= m {
        let next = t.len();
        let value = if next > 1 && next % 2 == 1 {
            BigRational::zero()
        } else {
            let row = binomial_row(next + 1);
            let mut acc = BigRational::zero();
            for (k, b) in t.iter().enumerate() {
                if !b.is_zero() {
                    acc += b * BigRational::from_integer(row[k].clone());
                }
            }
            -acc / BigRational::from_integer(BigInt::from(next + 1))
        };
        t.push(value);
    }
    t[m].clone()
}
