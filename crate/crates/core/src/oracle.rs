//! Brute-force ground truth for the classifier, and witness construction
//! mirroring the Dirichlet-style arguments: running gcds of phi(ax+b) with
//! stabilization detection, l-adic witnesses, and certificates packaging
//! upper-bound witnesses with a lower-bound divisibility scan.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{
    crt2, euler_phi, find_prime_in_ap, find_prime_in_ap_above, gcd_i64, gcd_u64, inv_mod,
    is_square_mod, lcm_u64, v_adic,
};
use crate::error::{domain, range, Result};
use crate::theorem1::{classify_all, classify_paper, classify_positive, normalize, Convention};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TracePoint {
    pub x: i64,
    pub value: i64,
    pub phi: u64,
    pub running_gcd: u64,
}

/// Running-gcd fold over a progression, with the index of the last change.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmpiricalResult {
    pub g: u64,
    pub stabilized_at: usize,
    pub samples_used: usize,
    pub stable: bool,
    pub convention: Convention,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TracePoint>>,
}

fn progression_value(a: i64, b: i64, x: i64) -> Result<i64> {
    a.checked_mul(x)
        .and_then(|v| v.checked_add(b))
        .ok_or_else(|| range(format!("{a}*{x}+{b} overflows i64")))
}

fn check_pair(a: i64, b: i64) -> Result<()> {
    if a == 0 {
        return Err(domain("a must be nonzero"));
    }
    if gcd_i64(a, b) != 1 {
        return Err(domain(format!("gcd({a}, {b}) != 1")));
    }
    Ok(())
}

fn convention_range(convention: Convention, x_limit: i64) -> std::ops::RangeInclusive<i64> {
    match convention {
        Convention::PositiveValues => 0..=x_limit,
        Convention::AllIntegers => -x_limit..=x_limit,
    }
}

fn sample_kept(convention: Convention, value: i64) -> bool {
    match convention {
        Convention::PositiveValues => value > 0,
        Convention::AllIntegers => value != 0,
    }
}

/// Folds gcd of phi(|ax+b|) over the convention's index range.
pub fn empirical_gcd(
    a: i64,
    b: i64,
    convention: Convention,
    x_limit: i64,
    window: usize,
    collect_trace: bool,
) -> Result<EmpiricalResult> {
    check_pair(a, b)?;
    if x_limit < 0 {
        return Err(domain("x_limit must be nonnegative"));
    }
    let mut g = 0u64;
    let mut stabilized_at = 0usize;
    let mut samples = 0usize;
    let mut trace = collect_trace.then(Vec::new);
    for x in convention_range(convention, x_limit) {
        let value = progression_value(a, b, x)?;
        if !sample_kept(convention, value) {
            continue;
        }
        let phi = euler_phi(value)?;
        let next = gcd_u64(g, phi);
        if next != g {
            stabilized_at = samples;
            g = next;
        }
        if let Some(t) = trace.as_mut() {
            t.push(TracePoint {
                x,
                value,
                phi,
                running_gcd: g,
            });
        }
        samples += 1;
    }
    if samples == 0 {
        return Err(domain("empty scan range"));
    }
    Ok(EmpiricalResult {
        g,
        stabilized_at,
        samples_used: samples,
        stable: samples - 1 - stabilized_at >= window,
        convention,
        trace,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "x")]
pub enum DivisibilityOutcome {
    Confirmed,
    Violated(i64),
}

/// Checks g | phi(|ax+b|) over the convention's range; on failure returns
/// the violating x closest to zero (negative before positive on ties).
pub fn divisibility_check(
    a: i64,
    b: i64,
    g: u64,
    convention: Convention,
    x_limit: i64,
) -> Result<DivisibilityOutcome> {
    check_pair(a, b)?;
    if g == 0 {
        return Err(domain("g must be positive"));
    }
    for k in 0..=x_limit {
        let xs: &[i64] = match convention {
            Convention::PositiveValues => &[k],
            Convention::AllIntegers if k == 0 => &[0],
            Convention::AllIntegers => &[-k, k],
        };
        for &x in xs {
            let value = progression_value(a, b, x)?;
            if !sample_kept(convention, value) {
                continue;
            }
            if euler_phi(value)? % g != 0 {
                return Ok(DivisibilityOutcome::Violated(x));
            }
        }
    }
    Ok(DivisibilityOutcome::Confirmed)
}

/// One evaluation point with a claimed l-adic valuation of its phi value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub x: i64,
    pub value: i64,
    pub phi: u64,
    pub l: u64,
    pub claimed_valuation: u32,
}

/// Re-derives every claim of a witness from scratch.
pub fn verify_witness(a: u64, b: u64, w: &Witness) -> bool {
    let recomputed = (a as i64)
        .checked_mul(w.x)
        .and_then(|v| v.checked_add(b as i64));
    if recomputed != Some(w.value) || w.value <= 0 {
        return false;
    }
    match (euler_phi(w.value), v_adic(w.l, w.phi)) {
        (Ok(phi), Ok(v)) => phi == w.phi && v == w.claimed_valuation,
        _ => false,
    }
}

fn witness_from_value(a: u64, b: u64, value: i64, l: u64, expected_v: u32) -> Result<Option<Witness>> {
    debug_assert!(value > 0);
    let x = (value - b as i64) / a as i64;
    let phi = euler_phi(value)?;
    let w = Witness {
        x,
        value,
        phi,
        l,
        claimed_valuation: v_adic(l, phi)?,
    };
    if w.claimed_valuation != expected_v || !verify_witness(a, b, &w) {
        return Ok(None);
    }
    Ok(Some(w))
}

fn direct_scan_witness(a: u64, b: u64, l: u64, target_v: u32, scan_limit: u64) -> Result<Option<Witness>> {
    let mut x = 0i64;
    while (x as u64) <= scan_limit {
        let value = match (a as i64).checked_mul(x).and_then(|v| v.checked_add(b as i64)) {
            Some(v) => v,
            None => break,
        };
        let phi = euler_phi(value)?;
        if v_adic(l, phi)? == target_v {
            return Ok(Some(Witness {
                x,
                value,
                phi,
                l,
                claimed_valuation: target_v,
            }));
        }
        x += 1;
    }
    Ok(None)
}

/// Finds an x with v_l(phi(ax+b)) = 0 for an odd prime l, preferring the
/// constructions of the divisibility argument: a single prime in the right
/// class mod lcm(a, l), then a two-prime product splitting b into non-unit
/// residues mod l, then a direct scan.
pub fn odd_prime_witness(a: u64, b: u64, l: u64, scan_limit: u64) -> Result<Option<Witness>> {
    if l < 3 || !crate::arith::is_prime_u64(l) {
        return Err(domain(format!("odd_prime_witness: {l} is not an odd prime")));
    }
    crate::theorem1::classify_positive(a, b)?; // validates normalization
    let a_prime = lcm_u64(a, l)?;
    // shift b by a if it is not coprime to l; the residue class mod a is unchanged
    let b1 = if b % l == 0 { b + a } else { b };
    debug_assert_eq!(gcd_u64(b1, a_prime), 1);

    if b1 % l != 1 {
        if let Some(p) = find_prime_in_ap(b1 as i64, a_prime, scan_limit)? {
            if let Ok(value) = i64::try_from(p) {
                if let Some(w) = witness_from_value(a, b, value, l, 0)? {
                    return Ok(Some(w));
                }
            }
        }
    } else {
        // b = 1 (mod l): split b = u*v mod lcm(a, l) with u, v both != 1 mod l
        'split: for u in 2..a_prime {
            if gcd_u64(u, a_prime) != 1 || u % l == 1 {
                continue;
            }
            let inv = match inv_mod(u, a_prime) {
                Some(i) => i,
                None => continue,
            };
            let v = crate::arith::mul_mod(b1 % a_prime, inv, a_prime);
            if v % l == 1 || gcd_u64(v, a_prime) != 1 {
                continue;
            }
            let p = match find_prime_in_ap(u as i64, a_prime, scan_limit)? {
                Some(p) => p,
                None => continue 'split,
            };
            let q = if u == v {
                match find_prime_in_ap_above(v as i64, a_prime, p, scan_limit)? {
                    Some(q) => q,
                    None => continue 'split,
                }
            } else {
                match find_prime_in_ap(v as i64, a_prime, scan_limit)? {
                    Some(q) => q,
                    None => continue 'split,
                }
            };
            if p == q {
                continue;
            }
            let value = match p.checked_mul(q).and_then(|v| i64::try_from(v).ok()) {
                Some(v) => v,
                None => continue,
            };
            if let Some(w) = witness_from_value(a, b, value, l, 0)? {
                return Ok(Some(w));
            }
        }
    }
    direct_scan_witness(a, b, l, 0, scan_limit)
}

/// Finds an x with v_2(phi(ax+b)) equal to the 2-adic valuation of the
/// classified g, mirroring the case analysis: primes in a nontrivial class
/// mod 4, products of two primes congruent to -1 mod 4, or the square of a
/// prime when b is a square mod a.
pub fn two_adic_witness(a: u64, b: u64, scan_limit: u64) -> Result<Option<Witness>> {
    let classified = classify_positive(a, b)?;
    let target = v_adic(2, classified.g).unwrap_or(0);

    if b % a == 1 % a || b % a == 2 % a {
        // a unit value is attained directly
        let value = if b % a == 1 % a { 1 } else { 2 };
        if let Some(w) = witness_from_value(a, b, value, 2, 0)? {
            return Ok(Some(w));
        }
    } else if a % 4 == 0 {
        if b % 4 == 3 {
            // nontrivial class mod 4: a single prime has v2(p-1) = 1
            if let Some(p) = find_prime_in_ap(b as i64, a, scan_limit)? {
                if let Ok(value) = i64::try_from(p) {
                    if let Some(w) = witness_from_value(a, b, value, 2, 1)? {
                        return Ok(Some(w));
                    }
                }
            }
        } else if !is_square_mod(b as i64, a)? {
            // b = (-b)(-1) mod a with both classes = 3 mod 4
            let neg_b = (a - b % a) % a;
            let neg_one = a - 1;
            if let (Some(p), Some(q)) = (
                find_prime_in_ap(neg_b as i64, a, scan_limit)?,
                find_prime_in_ap(neg_one as i64, a, scan_limit)?,
            ) {
                if p != q {
                    if let Some(value) = p.checked_mul(q).and_then(|v| i64::try_from(v).ok()) {
                        if let Some(w) = witness_from_value(a, b, value, 2, 2)? {
                            return Ok(Some(w));
                        }
                    }
                }
            }
        } else {
            // b = c^2 mod a: take a prime p = +-c = 3 (mod 4); then
            // phi(p^2) = p(p-1) has v2 = 1
            let c = (1..a).find(|&c| gcd_u64(c, a) == 1 && crate::arith::mul_mod(c, c, a) == b % a);
            if let Some(c) = c {
                let c = if c % 4 == 3 { c } else { a - c };
                if let Some(p) = find_prime_in_ap(c as i64, a, scan_limit)? {
                    if let Some(value) = p.checked_mul(p).and_then(|v| i64::try_from(v).ok()) {
                        if let Some(w) = witness_from_value(a, b, value, 2, 1)? {
                            return Ok(Some(w));
                        }
                    }
                }
            }
        }
    } else if a % 2 == 0 {
        // a = 2 (mod 4): a prime = b mod a/2 and = 3 mod 4 is = b mod a
        let a1 = a / 2;
        if a1 > 1 {
            let r = crt2(b % a1, a1, 3, 4)?;
            if let Some(p) = find_prime_in_ap(r as i64, 2 * a, scan_limit)? {
                if let Ok(value) = i64::try_from(p) {
                    if let Some(w) = witness_from_value(a, b, value, 2, 1)? {
                        return Ok(Some(w));
                    }
                }
            }
        }
    } else if a > 1 {
        // odd a: pick the class of b mod a crossed with -1 mod 4
        let r = crt2(b % a, a, 3, 4)?;
        if let Some(p) = find_prime_in_ap(r as i64, 4 * a, scan_limit)? {
            if let Ok(value) = i64::try_from(p) {
                if let Some(w) = witness_from_value(a, b, value, 2, 1)? {
                    return Ok(Some(w));
                }
            }
        }
    }
    direct_scan_witness(a, b, 2, target, scan_limit)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Sample {
    pub x: i64,
    pub value: i64,
    pub phi: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "x")]
pub enum Verdict {
    /// Witness gcd equals the claim and the claim divides every scanned phi.
    Confirmed,
    /// Witnesses were incomplete; the claim is only bracketed from above.
    UpperBoundOnly,
    /// The claim fails to divide phi at the given x.
    Violated(i64),
}

/// Finite, independently checkable evidence for a claimed g: witnesses
/// whose phi-gcd equals the claim (upper bound) plus a fully scanned range
/// on which the claim divides every phi value (lower bound).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub a: u64,
    pub b: u64,
    pub convention: Convention,
    pub claimed_g: u64,
    pub witnesses: Vec<Witness>,
    pub extra_samples: Vec<Sample>,
    pub divisibility_range: (i64, i64),
    pub verdict: Verdict,
}

pub const DEFAULT_WITNESS_SCAN_LIMIT: u64 = 10_000_000;

/// Builds a certificate for the classified g of the (normalized) pair.
pub fn certificate(a: i64, b: i64, convention: Convention, x_limit: i64) -> Result<Certificate> {
    let (a, b) = normalize(a, b)?;
    let claimed_g = match convention {
        Convention::PositiveValues => classify_positive(a, b)?.g,
        Convention::AllIntegers => classify_all(a, b)?.g,
    };
    let mut witnesses = Vec::new();
    let mut incomplete = false;
    match two_adic_witness(a, b, DEFAULT_WITNESS_SCAN_LIMIT)? {
        Some(w) => witnesses.push(w),
        None => incomplete = true,
    }
    for l in [3u64, 5, 7] {
        match odd_prime_witness(a, b, l, DEFAULT_WITNESS_SCAN_LIMIT)? {
            Some(w) => witnesses.push(w),
            None => incomplete = true,
        }
    }
    let mut witness_gcd = witnesses.iter().fold(0u64, |g, w| gcd_u64(g, w.phi));
    // Extend with direct samples until the witness gcd matches the claim.
    let mut extra_samples = Vec::new();
    if witness_gcd != claimed_g {
        'outer: for k in 0..=x_limit {
            let xs: &[i64] = match convention {
                Convention::PositiveValues => &[k],
                Convention::AllIntegers => &[k, -k],
            };
            for &x in xs {
                if x == 0 && k != 0 {
                    continue;
                }
                let value = progression_value(a as i64, b as i64, x)?;
                if !sample_kept(convention, value) {
                    continue;
                }
                let phi = euler_phi(value)?;
                let next = gcd_u64(witness_gcd, phi);
                if next != witness_gcd {
                    extra_samples.push(Sample { x, value, phi });
                    witness_gcd = next;
                }
                if witness_gcd == claimed_g {
                    break 'outer;
                }
            }
        }
    }
    let divisibility_range = match convention {
        Convention::PositiveValues => (0, x_limit),
        Convention::AllIntegers => (-x_limit, x_limit),
    };
    let verdict = match divisibility_check(a as i64, b as i64, claimed_g, convention, x_limit)? {
        DivisibilityOutcome::Violated(x) => Verdict::Violated(x),
        DivisibilityOutcome::Confirmed => {
            if witness_gcd == claimed_g && !incomplete {
                Verdict::Confirmed
            } else {
                Verdict::UpperBoundOnly
            }
        }
    };
    Ok(Certificate {
        a,
        b,
        convention,
        claimed_g,
        witnesses,
        extra_samples,
        divisibility_range,
        verdict,
    })
}

/// Agreement matrix of both oracles against all three classifiers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossReport {
    pub a: u64,
    pub b: u64,
    pub positive_oracle: EmpiricalResult,
    pub all_oracle: EmpiricalResult,
    pub classify_positive_g: u64,
    pub classify_all_g: u64,
    pub classify_paper_g: u64,
    pub paper_discrepancy: bool,
    pub positive_match: bool,
    pub all_match: bool,
}

impl CrossReport {
    pub fn consistent(&self) -> bool {
        self.positive_match && self.all_match
    }
}

pub fn cross_validate(a: i64, b: i64, x_limit: i64, window: usize) -> Result<CrossReport> {
    let (a, b) = normalize(a, b)?;
    let positive_oracle =
        empirical_gcd(a as i64, b as i64, Convention::PositiveValues, x_limit, window, false)?;
    let all_oracle =
        empirical_gcd(a as i64, b as i64, Convention::AllIntegers, x_limit, window, false)?;
    let classify_positive_g = classify_positive(a, b)?.g;
    let classify_all_g = classify_all(a, b)?.g;
    let (paper, paper_discrepancy) = classify_paper(a, b)?;
    Ok(CrossReport {
        a,
        b,
        positive_match: positive_oracle.g == classify_positive_g,
        all_match: all_oracle.g == classify_all_g,
        positive_oracle,
        all_oracle,
        classify_positive_g,
        classify_all_g,
        classify_paper_g: paper.g,
        paper_discrepancy,
    })
}

/// All coprime normalized pairs with 1 <= b <= a <= a_max.
pub fn coprime_grid(a_max: u64) -> Vec<(u64, u64)> {
    let mut pairs = Vec::new();
    for a in 1..=a_max {
        for b in 1..=a {
            if gcd_u64(a, b) == 1 {
                pairs.push((a, b));
            }
        }
    }
    pairs
}

/// Cross-validates every pair of the grid in parallel; reports come back
/// in grid order regardless of scheduling.
pub fn validate_grid(a_max: u64, x_limit: i64, window: usize) -> Result<Vec<CrossReport>> {
    coprime_grid(a_max)
        .into_par_iter()
        .map(|(a, b)| cross_validate(a as i64, b as i64, x_limit, window))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empirical_gcd_examples() {
        let r = empirical_gcd(7, 3, Convention::PositiveValues, 3, 1, true).unwrap();
        assert_eq!(r.g, 2);
        let trace = r.trace.unwrap();
        assert_eq!(trace[0].phi, 2); // phi(3)
        assert_eq!(trace[1].phi, 4); // phi(10)
        assert_eq!(trace[2].phi, 16); // phi(17)

        let r = empirical_gcd(5, 2, Convention::PositiveValues, 0, 1, false).unwrap();
        assert_eq!(r.g, 1);

        // small windows mislead: gcd looks like 6 until x = 4
        let r = empirical_gcd(12, 7, Convention::PositiveValues, 3, 1, false).unwrap();
        assert_eq!(r.g, 6);
        let r = empirical_gcd(12, 7, Convention::PositiveValues, 4, 1, false).unwrap();
        assert_eq!(r.g, 2);
    }

    #[test]
    fn trace_is_divisibility_chain() {
        let r = empirical_gcd(16, 13, Convention::AllIntegers, 50, 5, true).unwrap();
        let trace = r.trace.unwrap();
        for pair in trace.windows(2) {
            assert_eq!(pair[0].running_gcd % pair[1].running_gcd, 0);
        }
        for p in &trace {
            assert_eq!(p.phi % r.g, 0);
        }
    }

    #[test]
    fn divisibility_check_examples() {
        assert_eq!(
            divisibility_check(16, 13, 4, Convention::PositiveValues, 2000).unwrap(),
            DivisibilityOutcome::Confirmed
        );
        assert_eq!(
            divisibility_check(16, 5, 4, Convention::AllIntegers, 2).unwrap(),
            DivisibilityOutcome::Violated(-1)
        );
        assert_eq!(
            divisibility_check(9, 1, 1, Convention::AllIntegers, 10).unwrap(),
            DivisibilityOutcome::Confirmed
        );
    }

    #[test]
    fn odd_prime_witness_examples() {
        let w = odd_prime_witness(12, 7, 3, 1_000_000).unwrap().unwrap();
        assert_eq!(w.claimed_valuation, 0);
        assert!(verify_witness(12, 7, &w));

        let w = odd_prime_witness(7, 3, 3, 1_000_000).unwrap().unwrap();
        assert_eq!(w.claimed_valuation, 0);
        assert!(verify_witness(7, 3, &w));

        let w = odd_prime_witness(5, 1, 3, 1_000_000).unwrap().unwrap();
        assert!(verify_witness(5, 1, &w));
    }

    #[test]
    fn two_adic_witness_examples() {
        let w = two_adic_witness(16, 13, 1_000_000).unwrap().unwrap();
        assert_eq!(w.claimed_valuation, 2);
        assert!(verify_witness(16, 13, &w));

        let w = two_adic_witness(7, 3, 1_000_000).unwrap().unwrap();
        assert_eq!(w.claimed_valuation, 1);
        assert!(verify_witness(7, 3, &w));

        let w = two_adic_witness(6, 5, 1_000_000).unwrap().unwrap();
        assert_eq!(w.claimed_valuation, 1);
        assert!(verify_witness(6, 5, &w));

        // square case: 9 = 3^2 mod 16
        let w = two_adic_witness(16, 9, 1_000_000).unwrap().unwrap();
        assert_eq!(w.claimed_valuation, 1);
        assert!(verify_witness(16, 9, &w));
    }

    #[test]
    fn certificate_examples() {
        let c = certificate(16, 13, Convention::PositiveValues, 2000).unwrap();
        assert_eq!(c.claimed_g, 4);
        assert_eq!(c.verdict, Verdict::Confirmed);

        let c = certificate(5, 2, Convention::PositiveValues, 10).unwrap();
        assert_eq!(c.claimed_g, 1);
        assert_eq!(c.verdict, Verdict::Confirmed);

        let c = certificate(16, 5, Convention::AllIntegers, 10).unwrap();
        assert_eq!(c.claimed_g, 2);
        assert_eq!(c.verdict, Verdict::Confirmed);
    }

    #[test]
    fn cross_validate_examples() {
        let r = cross_validate(16, 5, 5000, 500).unwrap();
        assert_eq!(r.positive_oracle.g, 4);
        assert_eq!(r.all_oracle.g, 2);
        assert_eq!(r.classify_paper_g, 4);
        assert!(r.paper_discrepancy);
        assert!(r.consistent());

        let r = cross_validate(5, 2, 100, 10).unwrap();
        assert_eq!(r.all_oracle.g, 1);
        assert!(r.consistent() && !r.paper_discrepancy);

        let r = cross_validate(7, 3, 5000, 500).unwrap();
        assert_eq!(r.all_oracle.g, 2);
        assert!(r.consistent() && !r.paper_discrepancy);
    }
}
