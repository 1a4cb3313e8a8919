//! Exact 64-bit integer arithmetic: primality, factorization, Euler phi
//! (plain and with an S-part stripped), p-adic valuations, quadratic
//! residues modulo composites, and prime search in arithmetic progressions.
//!
//! Everything here is deterministic: the Miller-Rabin witness set is fixed
//! and valid for the whole `u64` range, and the Pollard-Brent splitter walks
//! a fixed sequence of polynomial offsets.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{domain, range, Result};

/// Inputs below this bound are factored with a smallest-prime-factor table.
const SPF_LIMIT: u64 = 1 << 20;

/// Trial-division cutoff for larger inputs before handing the cofactor to
/// primality testing and rho splitting.
const TRIAL_CUTOFF: u64 = 100;

fn spf_table() -> &'static [u32] {
    static TABLE: OnceLock<Vec<u32>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = SPF_LIMIT as usize;
        let mut spf = vec![0u32; n];
        for i in 2..n {
            if spf[i] == 0 {
                for j in (i..n).step_by(i) {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                }
            }
        }
        spf
    })
}

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let spf = spf_table();
        (2..TRIAL_CUTOFF)
            .filter(|&p| spf[p as usize] as u64 == p)
            .collect()
    })
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn gcd_i64(a: i64, b: i64) -> u64 {
    gcd_u64(a.unsigned_abs(), b.unsigned_abs())
}

pub fn lcm_u64(a: u64, b: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd_u64(a, b))
        .checked_mul(b)
        .ok_or_else(|| range(format!("lcm({a}, {b}) overflows u64")))
}

/// Extended Euclid: returns (g, x, y) with a*x + b*y = g = gcd(a, b).
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 0 {
        return None;
    }
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = ext_gcd((a % m) as i64, m as i64);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i64) as u64)
}

/// Unique solution modulo m1*m2 of x = r1 (mod m1), x = r2 (mod m2),
/// for coprime moduli.
pub fn crt2(r1: u64, m1: u64, r2: u64, m2: u64) -> Result<u64> {
    if gcd_u64(m1, m2) != 1 {
        return Err(domain(format!("crt2: moduli {m1} and {m2} not coprime")));
    }
    m1.checked_mul(m2)
        .ok_or_else(|| range("crt2: modulus product overflows u64"))?;
    let inv = inv_mod(m1 % m2, m2).expect("coprime moduli have inverses");
    let diff = (r2 % m2 + m2 - r1 % m2) % m2;
    let k = mul_mod(diff, inv, m2);
    // k < m2, so k*m1 + (r1 mod m1) < m1*m2 = m and the sum fits in u64.
    Ok(r1 % m1 + k * m1)
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
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

/// Deterministic Miller-Rabin, exact over the whole `u64` range.
fn miller_rabin(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    // This witness set is deterministic for all n < 3.3 * 10^24.
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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

/// True iff |n| is prime.
pub fn is_prime(n: i64) -> bool {
    miller_rabin(n.unsigned_abs())
}

pub fn is_prime_u64(n: u64) -> bool {
    miller_rabin(n)
}

/// Pollard-Brent splitter; `n` must be odd, composite, and free of factors
/// below [`TRIAL_CUTOFF`]. Walks x -> x^2 + c for c = 1, 2, ... so the
/// returned divisor is a pure function of `n`.
fn brent_split(n: u64) -> u64 {
    for c in 1..64u64 {
        if let Some(d) = brent_cycle(n, c) {
            return d;
        }
    }
    // Unreachable in practice; exhaustive trial division as a last resort.
    let mut p = TRIAL_CUTOFF | 1;
    while p * p <= n {
        if n % p == 0 {
            return p;
        }
        p += 2;
    }
    n
}

fn brent_cycle(n: u64, c: u64) -> Option<u64> {
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let mut y = 2u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut g = 1u64;
    let mut x = 0u64;
    let mut ys = 0u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0u64;
        while k < r && g == 1 {
            ys = y;
            let batch = 128.min(r - k);
            for _ in 0..batch {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd_u64(q, n);
            k += batch;
        }
        r <<= 1;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd_u64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    if g == n {
        None
    } else {
        Some(g)
    }
}

/// Sign plus multiset of (prime, exponent) pairs, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub sign: i8,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Reconstructs the factored integer.
    pub fn value(&self) -> Result<i64> {
        let mut acc: i64 = self.sign as i64;
        for &(p, e) in &self.factors {
            for _ in 0..e {
                let p = i64::try_from(p).map_err(|_| range("prime exceeds i64"))?;
                acc = acc
                    .checked_mul(p)
                    .ok_or_else(|| range("factorization product overflows i64"))?;
            }
        }
        Ok(acc)
    }

    pub fn magnitude(&self) -> u64 {
        self.factors
            .iter()
            .fold(1u64, |acc, &(p, e)| acc * p.pow(e))
    }
}

fn factor_u64_into(m: u64, acc: &mut BTreeMap<u64, u32>) {
    let mut m = m;
    if m < SPF_LIMIT {
        let spf = spf_table();
        while m > 1 {
            let p = spf[m as usize] as u64;
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            *acc.entry(p).or_insert(0) += e;
        }
        return;
    }
    for &p in small_primes() {
        while m % p == 0 {
            m /= p;
            *acc.entry(p).or_insert(0) += 1;
        }
    }
    let mut stack = vec![m];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if m < SPF_LIMIT {
            factor_u64_into(m, acc);
        } else if miller_rabin(m) {
            *acc.entry(m).or_insert(0) += 1;
        } else {
            let d = brent_split(m);
            stack.push(d);
            stack.push(m / d);
        }
    }
}

pub fn factorize(n: i64) -> Result<Factorization> {
    if n == 0 {
        return Err(domain("factorize: zero has no factorization"));
    }
    if n == i64::MIN {
        return Err(range("factorize: |n| must be below 2^63"));
    }
    let mut acc = BTreeMap::new();
    factor_u64_into(n.unsigned_abs(), &mut acc);
    Ok(Factorization {
        sign: if n < 0 { -1 } else { 1 },
        factors: acc.into_iter().collect(),
    })
}

/// Euler phi of |n|.
pub fn euler_phi(n: i64) -> Result<u64> {
    if n == 0 {
        return Err(domain("euler_phi: phi(0) is undefined"));
    }
    if n == i64::MIN {
        return Err(range("euler_phi: |n| must be below 2^63"));
    }
    Ok(phi_u64(n.unsigned_abs()))
}

pub(crate) fn phi_u64(m: u64) -> u64 {
    if m < SPF_LIMIT {
        let spf = spf_table();
        let mut m = m;
        let mut phi = 1u64;
        while m > 1 {
            let p = spf[m as usize] as u64;
            m /= p;
            phi *= p - 1;
            while m % p == 0 {
                m /= p;
                phi *= p;
            }
        }
        phi
    } else {
        let mut acc = BTreeMap::new();
        factor_u64_into(m, &mut acc);
        acc.iter()
            .fold(1u64, |phi, (&p, &e)| phi * p.pow(e - 1) * (p - 1))
    }
}

/// A finite set of distinct primes (the finite part of an S-integer ring).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SPrimeSet {
    primes: BTreeSet<u64>,
}

impl SPrimeSet {
    pub fn new(primes: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for p in primes {
            if !miller_rabin(p) {
                return Err(domain(format!("SPrimeSet: {p} is not prime")));
            }
            set.insert(p);
        }
        Ok(SPrimeSet { primes: set })
    }

    pub fn empty() -> Self {
        SPrimeSet::default()
    }

    pub fn contains(&self, p: u64) -> bool {
        self.primes.contains(&p)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes.iter().copied()
    }
}

/// Euler phi of the ideal (n) in Z with the primes of S inverted: the
/// S-part of |n| is a unit there and is stripped before phi is taken.
pub fn euler_phi_s(n: i64, s: &SPrimeSet) -> Result<u64> {
    if n == 0 {
        return Err(domain("euler_phi_s: phi(0) is undefined"));
    }
    if n == i64::MIN {
        return Err(range("euler_phi_s: |n| must be below 2^63"));
    }
    let mut m = n.unsigned_abs();
    for p in s.iter() {
        while m % p == 0 {
            m /= p;
        }
    }
    Ok(phi_u64(m))
}

/// Largest k with l^k dividing m.
pub fn v_adic(l: u64, m: u64) -> Result<u32> {
    if !miller_rabin(l) {
        return Err(domain(format!("v_adic: {l} is not prime")));
    }
    if m == 0 {
        return Err(domain("v_adic: valuation of 0 is infinite"));
    }
    let mut m = m;
    let mut v = 0u32;
    while m % l == 0 {
        m /= l;
        v += 1;
    }
    Ok(v)
}

/// True iff t^2 = b (mod a) has a solution, for b coprime to a.
///
/// Solvability is decided prime power by prime power over the
/// factorization of `a` (Euler's criterion for odd primes, which lifts to
/// all powers for units; the explicit 2-adic conditions for powers of 2)
/// and combined by CRT.
pub fn is_square_mod(b: i64, a: u64) -> Result<bool> {
    if a == 0 {
        return Err(domain("is_square_mod: modulus must be positive"));
    }
    let br = b.rem_euclid(a as i64) as u64;
    if gcd_u64(br, a) != 1 {
        return Err(domain(format!("is_square_mod: gcd({b}, {a}) != 1")));
    }
    if a == 1 {
        return Ok(true);
    }
    let fac = factorize(a as i64)?;
    for &(p, k) in &fac.factors {
        let solvable = if p == 2 {
            match k {
                1 => true,
                2 => br % 4 == 1,
                _ => br % 8 == 1,
            }
        } else {
            pow_mod(br % p, (p - 1) / 2, p) == 1
        };
        if !solvable {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest prime p <= scan_limit with p = c (mod m); `None` if the scan
/// range holds no such prime. Requires gcd(c, m) = 1.
pub fn find_prime_in_ap(c: i64, m: u64, scan_limit: u64) -> Result<Option<u64>> {
    if m == 0 {
        return Err(domain("find_prime_in_ap: modulus must be positive"));
    }
    let r = c.rem_euclid(m as i64) as u64;
    if gcd_u64(r, m) != 1 {
        return Err(domain(format!("find_prime_in_ap: gcd({c}, {m}) != 1")));
    }
    let step = m.max(1);
    let mut n = if m == 1 { 2 } else { r };
    while n < 2 {
        n += step;
    }
    while n <= scan_limit {
        if miller_rabin(n) {
            return Ok(Some(n));
        }
        match n.checked_add(step) {
            Some(next) => n = next,
            None => break,
        }
    }
    Ok(None)
}

/// As [`find_prime_in_ap`], but skipping primes at or below `above`.
pub fn find_prime_in_ap_above(
    c: i64,
    m: u64,
    above: u64,
    scan_limit: u64,
) -> Result<Option<u64>> {
    if m == 0 {
        return Err(domain("find_prime_in_ap: modulus must be positive"));
    }
    let r = c.rem_euclid(m as i64) as u64;
    if gcd_u64(r, m) != 1 {
        return Err(domain(format!("find_prime_in_ap: gcd({c}, {m}) != 1")));
    }
    let step = m.max(1);
    let mut n = if m == 1 { 2 } else { r };
    while n <= above {
        match n.checked_add(step) {
            Some(next) => n = next,
            None => return Ok(None),
        }
    }
    while n <= scan_limit {
        if miller_rabin(n) {
            return Ok(Some(n));
        }
        match n.checked_add(step) {
            Some(next) => n = next,
            None => break,
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_examples() {
        let f = factorize(360).unwrap();
        assert_eq!(f.sign, 1);
        assert_eq!(f.factors, vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(f.value().unwrap(), 360);

        let f = factorize(-1).unwrap();
        assert_eq!(f.sign, -1);
        assert!(f.factors.is_empty());
        assert_eq!(f.value().unwrap(), -1);

        let f = factorize(2147483647).unwrap();
        assert_eq!(f.factors, vec![(2147483647, 1)]);

        assert!(factorize(0).is_err());
    }

    #[test]
    fn factorize_large_semiprime() {
        // 1000003 * 1000033, both prime, above the SPF table.
        let n = 1000003i64 * 1000033;
        let f = factorize(n).unwrap();
        assert_eq!(f.factors, vec![(1000003, 1), (1000033, 1)]);
        assert_eq!(f.value().unwrap(), n);
    }

    #[test]
    fn is_prime_examples() {
        assert!(is_prime(2));
        assert!(!is_prime(1));
        assert!(!is_prime(0));
        assert!(is_prime(-7));
        // trial-division oracle for 1000003
        let n = 1000003u64;
        let mut composite = false;
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                composite = true;
                break;
            }
            d += 1;
        }
        assert_eq!(is_prime(n as i64), !composite);
    }

    #[test]
    fn euler_phi_examples() {
        assert_eq!(euler_phi(1).unwrap(), 1);
        assert_eq!(euler_phi(-11).unwrap(), 10);
        assert_eq!(euler_phi(360).unwrap(), 96);
        assert!(euler_phi(0).is_err());
    }

    #[test]
    fn euler_phi_s_examples() {
        let s2 = SPrimeSet::new([2]).unwrap();
        assert_eq!(euler_phi_s(12, &s2).unwrap(), 2);
        assert_eq!(euler_phi_s(8, &s2).unwrap(), 1);
        assert_eq!(euler_phi_s(35, &SPrimeSet::empty()).unwrap(), 24);
        assert!(SPrimeSet::new([4]).is_err());
    }

    #[test]
    fn v_adic_examples() {
        assert_eq!(v_adic(2, 40).unwrap(), 3);
        assert_eq!(v_adic(3, 40).unwrap(), 0);
        assert_eq!(v_adic(5, 250).unwrap(), 3);
        assert!(v_adic(4, 10).is_err());
        assert!(v_adic(2, 0).is_err());
    }

    #[test]
    fn is_square_mod_examples() {
        assert!(!is_square_mod(5, 16).unwrap());
        assert!(is_square_mod(9, 16).unwrap());
        assert!(is_square_mod(2, 7).unwrap());
        assert!(is_square_mod(1, 1).unwrap());
        assert!(is_square_mod(-7, 16).unwrap()); // -7 = 9 (mod 16)
        assert!(is_square_mod(6, 4).is_err());
    }

    #[test]
    fn find_prime_in_ap_examples() {
        assert_eq!(find_prime_in_ap(3, 7, 1_000_000).unwrap(), Some(3));
        assert_eq!(find_prime_in_ap(1, 8, 1_000_000).unwrap(), Some(17));
        assert!(find_prime_in_ap(4, 6, 1_000_000).is_err());
        // exhausted scan range
        assert_eq!(find_prime_in_ap(1, 8, 10).unwrap(), None);
    }

    #[test]
    fn find_prime_in_ap_above_skips() {
        assert_eq!(find_prime_in_ap_above(3, 7, 3, 1_000_000).unwrap(), Some(17));
    }

    #[test]
    fn crt_and_inverse() {
        assert_eq!(crt2(2, 3, 3, 4).unwrap() % 12, 11);
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(2, 4), None);
    }
}
