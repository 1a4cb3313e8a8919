//! Empirical gcds of phi(P(x)) for integer polynomials with coprime
//! coefficients, and exhaustive coefficient sweeps producing observed
//! lower bounds for a degree-wise uniform constant.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{euler_phi, gcd_i64, gcd_u64};
use crate::error::{domain, range, Error, Result};

/// Total polynomials a single sweep may enumerate.
pub const SWEEP_CAP: u64 = 10_000_000;

/// Integer polynomial a0 + a1 x + ... + an x^n with an != 0, n >= 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Poly {
    coeffs: Vec<i64>,
}

impl Poly {
    pub fn new(coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(domain("polynomial degree must be at least 1"));
        }
        if *coeffs.last().unwrap() == 0 {
            return Err(domain("leading coefficient must be nonzero"));
        }
        Ok(Poly { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// gcd of all coefficients.
    pub fn content(&self) -> u64 {
        self.coeffs.iter().fold(0u64, |g, &c| gcd_i64(c as i64, g as i64))
    }

    /// Horner evaluation with overflow detection.
    pub fn eval(&self, x: i64) -> Result<i64> {
        let mut acc: i64 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = acc
                .checked_mul(x)
                .and_then(|v| v.checked_add(c))
                .ok_or_else(|| range(format!("P({x}) overflows i64")))?;
        }
        Ok(acc)
    }
}

/// Per-polynomial outcome of a gcd fold over x = 0..N.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolyResult {
    pub coeffs: Vec<i64>,
    pub g: u64,
    pub stabilized_at: usize,
    pub samples_used: usize,
    pub stable: bool,
}

/// Folds gcd of phi(|P(x)|) over x = 0, ..., n, skipping zeros of P.
pub fn poly_empirical_gcd(poly: &Poly, n: i64, window: usize) -> Result<PolyResult> {
    if poly.content() != 1 {
        return Err(domain(format!(
            "coefficients must be coprime (content = {})",
            poly.content()
        )));
    }
    let mut g = 0u64;
    let mut stabilized_at = 0usize;
    let mut samples = 0usize;
    for x in 0..=n {
        let value = poly.eval(x)?;
        if value == 0 {
            continue;
        }
        let phi = euler_phi(value)?;
        let next = gcd_u64(g, phi);
        if next != g {
            stabilized_at = samples;
            g = next;
        }
        samples += 1;
    }
    if samples == 0 {
        return Err(domain("all sampled values were zeros of P"));
    }
    Ok(PolyResult {
        coeffs: poly.coeffs.clone(),
        g,
        stabilized_at,
        samples_used: samples,
        stable: samples - 1 - stabilized_at >= window,
    })
}

/// Exhaustive sweep over content-1 polynomials of a fixed degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub degree: u32,
    pub coeff_bound: i64,
    pub sample_limit: i64,
    pub window: usize,
    pub results: Vec<PolyResult>,
    /// Maximum g among stabilized polynomials: an observed lower bound for
    /// any uniform constant at this degree.
    pub max_g: u64,
    pub argmax_coeffs: Vec<i64>,
}

/// Enumerates every polynomial of degree n with coefficients in [-B, B],
/// nonzero leading coefficient and content 1, and folds each over
/// x = 0..sample_limit. Enumeration order (and hence the report) is fixed.
pub fn sweep(degree: u32, coeff_bound: i64, sample_limit: i64, window: usize) -> Result<SweepReport> {
    if degree < 1 {
        return Err(domain("degree must be at least 1"));
    }
    if coeff_bound < 1 {
        return Err(domain("coefficient bound must be at least 1"));
    }
    let span = 2 * coeff_bound as u128 + 1;
    let candidates = span.pow(degree) * (span - 1);
    if candidates > SWEEP_CAP as u128 {
        return Err(Error::TooManyCandidates {
            candidates,
            cap: SWEEP_CAP,
        });
    }

    let polys: Vec<Poly> = (0..candidates as u64)
        .filter_map(|idx| {
            let mut idx = idx as i64;
            let span = span as i64;
            let mut coeffs = Vec::with_capacity(degree as usize + 1);
            for _ in 0..degree {
                coeffs.push(idx % span - coeff_bound);
                idx /= span;
            }
            // leading coefficient skips zero
            let lead = idx % (span - 1) - coeff_bound;
            coeffs.push(if lead >= 0 { lead + 1 } else { lead });
            let poly = Poly::new(coeffs).ok()?;
            (poly.content() == 1).then_some(poly)
        })
        .collect();

    let results: Vec<PolyResult> = polys
        .par_iter()
        .map(|p| poly_empirical_gcd(p, sample_limit, window))
        .collect::<Result<_>>()?;

    let mut max_g = 0u64;
    let mut argmax_coeffs = Vec::new();
    for r in &results {
        if r.stable && r.g > max_g {
            max_g = r.g;
            argmax_coeffs = r.coeffs.clone();
        }
    }
    Ok(SweepReport {
        degree,
        coeff_bound,
        sample_limit,
        window,
        results,
        max_g,
        argmax_coeffs,
    })
}
