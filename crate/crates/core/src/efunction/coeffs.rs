use std::sync::RwLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use crate::special::factorial;

/// `a_k = (-1)^k n! / (k+1)^(n+1)` in lowest terms.
pub fn coeff_a(n: u32, k: u64) -> BigRational {
    let num = BigInt::from(factorial(n as u64));
    let den = BigInt::from(num_traits::pow(BigUint::from(k + 1), n as usize + 1));
    let q = BigRational::new(num, den);
    if k % 2 == 1 {
        -q
    } else {
        q
    }
}

/// The coefficient sequence of `F_n(t) = sum_k a_k t^k / k!`, materialized on demand.
#[derive(Debug)]
pub struct EFunctionSeries {
    n: u32,
    coeffs: RwLock<Vec<BigRational>>,
}

impl EFunctionSeries {
    pub fn new(n: u32) -> Self {
        EFunctionSeries { n, coeffs: RwLock::new(Vec::new()) }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of coefficients materialized so far.
    pub fn materialized(&self) -> usize {
        self.coeffs.read().expect("coefficient lock poisoned").len()
    }

    fn ensure(&self, len: usize) {
        if self.materialized() >= len {
            return;
        }
        let mut w = self.coeffs.write().expect("coefficient lock poisoned");
        while w.len() < len {
            let k = w.len() as u64;
            w.push(coeff_a(self.n, k));
        }
    }

    /// `a_k`.
    pub fn coeff(&self, k: usize) -> BigRational {
        self.ensure(k + 1);
        self.coeffs.read().expect("coefficient lock poisoned")[k].clone()
    }

    /// `[a_0, ..., a_{len-1}]`.
    pub fn prefix(&self, len: usize) -> Vec<BigRational> {
        self.ensure(len);
        self.coeffs.read().expect("coefficient lock poisoned")[..len].to_vec()
    }

    /// Power-basis coefficients `c_k = a_k / k!` for `k < len`.
    pub fn taylor_prefix(&self, len: usize) -> Vec<BigRational> {
        to_taylor(&self.prefix(len))
    }
}

/// `a_k -> a_k / k!`.
pub fn to_taylor(a: &[BigRational]) -> Vec<BigRational> {
    let mut fact = BigInt::from(1);
    a.iter()
        .enumerate()
        .map(|(k, ak)| {
            if k > 0 {
                fact *= k;
            }
            ak / BigRational::from_integer(fact.clone())
        })
        .collect()
}
