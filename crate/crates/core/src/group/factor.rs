//! Integer factorization for group orders: trial division up to 10^6, then
//! Miller-Rabin and Pollard's rho (Brent variant) for the cofactor.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 1_000_000;

/// Largest order the factorizer accepts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorBound(pub u64);

impl FactorBound {
    pub const DEFAULT: FactorBound = FactorBound(1_000_000_000_000_000_000);

    /// Environment variable consulted by [`FactorBound::from_env`].
    pub const ENV_VAR: &'static str = "LEETILE_FACTOR_BOUND";

    pub fn from_env() -> Self {
        std::env::var(Self::ENV_VAR)
            .ok()
            .and_then(|v| v.trim().replace('_', "").parse().ok())
            .map(FactorBound)
            .unwrap_or_default()
    }
}

impl Default for FactorBound {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Prime factorization `[(p, e)]` with `p` increasing.
pub fn factorize(n: u64, bound: FactorBound) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::ZeroOrder);
    }
    if n > bound.0 {
        return Err(Error::OrderTooLarge {
            order: n,
            bound: bound.0,
        });
    }
    let mut out: Vec<(u64, u32)> = Vec::new();
    let mut m = n;
    let push = |p: u64, out: &mut Vec<(u64, u32)>| match out.iter_mut().find(|(q, _)| *q == p) {
        Some(entry) => entry.1 += 1,
        None => out.push((p, 1)),
    };

    let mut p = 2u64;
    while p <= TRIAL_LIMIT && p * p <= m {
        while m.is_multiple_of(p) {
            push(p, &mut out);
            m /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        let mut stack = vec![m];
        let mut big = Vec::new();
        while let Some(x) = stack.pop() {
            if x == 1 {
                continue;
            }
            if is_prime(x) {
                big.push(x);
            } else {
                let d = pollard_rho(x);
                stack.push(d);
                stack.push(x / d);
            }
        }
        for q in big {
            push(q, &mut out);
        }
    }
    out.sort_unstable();
    Ok(out)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A nontrivial factor of the composite `n`.
fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q, mut g) = (2u64, 1u64, 1u64, 1u64);
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(128.min(r - k)) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = num_integer::gcd(q, n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = num_integer::gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}
