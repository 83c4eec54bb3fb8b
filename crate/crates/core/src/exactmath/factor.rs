//! Integer factorization for square-class reduction.
//!
//! Trial division by primes below 2^16, then Baillie-PSW style primality
//! (Miller-Rabin on the first 13 prime bases, deterministic below 3.3e24, plus a
//! strong Lucas test above that) and Pollard-Brent splitting of composites.
//! Splitting never returns a wrong factor; it only gets slow for cofactors that
//! are products of two primes above ~2^50.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

const TRIAL_LIMIT: u32 = 1 << 16;
const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
// Miller-Rabin with MR_BASES is exact below this bound.
const MR_EXACT_BOUND: &str = "3317044064679887385961981";

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut composite = vec![false; n];
        let mut primes = Vec::new();
        for i in 2..n {
            if !composite[i] {
                primes.push(i as u32);
                let mut j = i * i;
                while j < n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

/// Prime factorization of `n ≥ 1` as prime → exponent.
pub fn factorize(n: &BigUint) -> BTreeMap<BigUint, u32> {
    assert!(!n.is_zero(), "factorize(0)");
    let mut out = BTreeMap::new();
    let mut rest = n.clone();
    for &p in small_primes() {
        let p_big = BigUint::from(p);
        if &p_big * &p_big > rest {
            break;
        }
        while (&rest % p).is_zero() {
            rest /= p;
            *out.entry(p_big.clone()).or_insert(0) += 1;
        }
    }
    let mut stack = vec![rest];
    while let Some(c) = stack.pop() {
        if c.is_one() {
            continue;
        }
        if is_probable_prime(&c) {
            *out.entry(c).or_insert(0) += 1;
            continue;
        }
        let s = c.sqrt();
        if &s * &s == c {
            stack.push(s.clone());
            stack.push(s);
            continue;
        }
        let d = find_factor(&c);
        stack.push(&c / &d);
        stack.push(d);
    }
    out
}

/// Product of the primes dividing `n` to an odd power.
pub fn squarefree_kernel(n: &BigUint) -> BigUint {
    factorize(n)
        .into_iter()
        .filter(|(_, e)| e % 2 == 1)
        .fold(BigUint::one(), |acc, (p, _)| acc * p)
}

pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in small_primes().iter().take(200) {
        if (n % p).is_zero() {
            return false;
        }
    }
    if !MR_BASES
        .iter()
        .all(|&a| miller_rabin_big(n, &BigUint::from(a)))
    {
        return false;
    }
    let bound: BigUint = MR_EXACT_BOUND.parse().unwrap();
    n < &bound || strong_lucas(n)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
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

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &MR_BASES[..12] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn miller_rabin_big(n: &BigUint, a: &BigUint) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = a.modpow(&d, n);
    if x == one || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

fn jacobi(a: &BigInt, n: &BigInt) -> i32 {
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut result = 1;
    let three = BigInt::from(3);
    let five = BigInt::from(5);
    let eight = BigInt::from(8);
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = n.mod_floor(&eight);
            if r == three || r == five {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&BigInt::from(4)) == three && n.mod_floor(&BigInt::from(4)) == three {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

/// Strong Lucas probable-prime test with Selfridge parameters (P = 1).
fn strong_lucas(n_u: &BigUint) -> bool {
    let n = BigInt::from(n_u.clone());
    let s = n.sqrt();
    if &s * &s == n {
        return false;
    }
    let mut d = BigInt::from(5);
    loop {
        match jacobi(&d, &n) {
            -1 => break,
            0 if d.magnitude() != n_u => return false,
            _ => {}
        }
        d = if d.sign() == num_bigint::Sign::Plus {
            -(d + BigInt::from(2))
        } else {
            -(d - BigInt::from(2))
        };
    }
    let q: BigInt = (BigInt::one() - &d) / 4;
    let half = |x: BigInt| -> BigInt {
        let x = if x.is_odd() { x + &n } else { x };
        let halved: BigInt = x >> 1;
        halved.mod_floor(&n)
    };
    let np1: BigInt = &n + 1;
    let zeros = np1.trailing_zeros().unwrap_or(0);
    let k: BigInt = &np1 >> zeros;

    let reduce = |x: BigInt| -> BigInt { x.mod_floor(&n) };
    // V_{2k} = V_k² − 2Q^k
    let double_v = |v: &BigInt, qk: &BigInt| -> BigInt { reduce(v * v - qk * BigInt::from(2)) };

    let mut u = BigInt::one();
    let mut v = BigInt::one();
    let mut qk = reduce(q.clone());
    let bits = k.bits();
    for i in (0..bits - 1).rev() {
        u = reduce(&u * &v);
        v = double_v(&v, &qk);
        qk = reduce(&qk * &qk);
        if k.bit(i) {
            let nu = half(&u + &v);
            let nv = half(&d * &u + &v);
            u = nu;
            v = nv;
            qk = reduce(&qk * &q);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..zeros {
        v = double_v(&v, &qk);
        qk = reduce(&qk * &qk);
        if v.is_zero() {
            return true;
        }
    }
    false
}

fn find_factor(n: &BigUint) -> BigUint {
    if let Some(small) = n.to_u64() {
        return BigUint::from(rho_u64(small));
    }
    rho_big(n)
}

fn rho_u64(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut ys) = (2u64, 2u64, 2u64);
        let mut q = 1u64;
        let mut g = 1u64;
        let mut r = 1u64;
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
                g = q.gcd(&n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
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

fn rho_big(n: &BigUint) -> BigUint {
    if n.is_even() {
        return BigUint::from(2u32);
    }
    let one = BigUint::one();
    let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut q = one.clone();
        let mut g = one.clone();
        let mut r: u64 = 1;
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..(128.min(r - k)) {
                    y = f(&y);
                    q = q * diff(&x, &y) % n;
                }
                g = q.gcd(n);
                k += 128;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = diff(&x, &ys).gcd(n);
                if g > one {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
        c += 1u32;
    }
}
