//! Arithmetic in Z[i] and Z[omega], the two imaginary quadratic rings with
//! extra roots of unity, plus the totient of a principal ideal and box
//! scans of gcd(phi(a*x+b)) against the mu^2 bound.
//!
//! Elements are stored in integral-basis coordinates u + v*i (Gaussian)
//! or u + v*omega (Eisenstein, omega a primitive cube root of unity, so
//! omega^2 = -1 - omega). Both rings are norm-Euclidean, which gives gcds
//! by nearest-quotient division.

use serde::Serialize;

use crate::arith::{factorize, gcd_u64, pow_mod, v_adic};
use crate::error::{domain, range, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FieldTag {
    RationalQ,
    GaussianQi,
    EisensteinQomega,
}

/// Order of the group of roots of unity.
pub fn mu(field: FieldTag) -> u64 {
    match field {
        FieldTag::RationalQ => 2,
        FieldTag::GaussianQi => 4,
        FieldTag::EisensteinQomega => 6,
    }
}

/// The bound mu^2 on g, or with a prime l the maximal allowed l-part
/// l^(2e) where l^e is the l-part of mu.
pub fn theorem2_bound(field: FieldTag, l: Option<u64>) -> Result<u64> {
    let m = mu(field);
    match l {
        None => Ok(m * m),
        Some(l) => {
            let e = v_adic(l, m)?;
            Ok(l.pow(2 * e))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadInt {
    pub u: i64,
    pub v: i64,
    pub field: FieldTag,
}

const COORD_LIMIT: i64 = 1 << 31;

impl QuadInt {
    pub fn new(u: i64, v: i64, field: FieldTag) -> Result<Self> {
        if field == FieldTag::RationalQ {
            return Err(domain("QuadInt: field must be GaussianQi or EisensteinQomega"));
        }
        if u.abs() >= COORD_LIMIT || v.abs() >= COORD_LIMIT {
            return Err(range(format!("QuadInt: |{u}|, |{v}| must be below 2^31")));
        }
        Ok(QuadInt { u, v, field })
    }

    pub fn gaussian(u: i64, v: i64) -> Result<Self> {
        QuadInt::new(u, v, FieldTag::GaussianQi)
    }

    pub fn eisenstein(u: i64, v: i64) -> Result<Self> {
        QuadInt::new(u, v, FieldTag::EisensteinQomega)
    }

    pub fn from_int(n: i64, field: FieldTag) -> Result<Self> {
        QuadInt::new(n, 0, field)
    }

    pub fn is_zero(&self) -> bool {
        self.u == 0 && self.v == 0
    }
}

fn same_field(a: &QuadInt, b: &QuadInt) -> Result<FieldTag> {
    if a.field != b.field {
        return Err(domain("mixed field tags"));
    }
    Ok(a.field)
}

fn clamp(u: i128, v: i128, field: FieldTag) -> Result<QuadInt> {
    let u = i64::try_from(u).map_err(|_| range("coordinate overflows i64"))?;
    let v = i64::try_from(v).map_err(|_| range("coordinate overflows i64"))?;
    Ok(QuadInt { u, v, field })
}

pub fn add(a: &QuadInt, b: &QuadInt) -> Result<QuadInt> {
    let field = same_field(a, b)?;
    clamp(a.u as i128 + b.u as i128, a.v as i128 + b.v as i128, field)
}

pub fn sub(a: &QuadInt, b: &QuadInt) -> Result<QuadInt> {
    let field = same_field(a, b)?;
    clamp(a.u as i128 - b.u as i128, a.v as i128 - b.v as i128, field)
}

pub fn neg(a: &QuadInt) -> QuadInt {
    QuadInt {
        u: -a.u,
        v: -a.v,
        field: a.field,
    }
}

pub fn mul(a: &QuadInt, b: &QuadInt) -> Result<QuadInt> {
    let field = same_field(a, b)?;
    let (au, av, bu, bv) = (a.u as i128, a.v as i128, b.u as i128, b.v as i128);
    let (u, v) = match field {
        FieldTag::GaussianQi => (au * bu - av * bv, au * bv + av * bu),
        // omega^2 = -1 - omega
        FieldTag::EisensteinQomega => (au * bu - av * bv, au * bv + av * bu - av * bv),
        FieldTag::RationalQ => unreachable!(),
    };
    clamp(u, v, field)
}

pub fn conjugate(a: &QuadInt) -> QuadInt {
    match a.field {
        FieldTag::GaussianQi => QuadInt {
            u: a.u,
            v: -a.v,
            field: a.field,
        },
        // conj(omega) = omega^2 = -1 - omega
        FieldTag::EisensteinQomega => QuadInt {
            u: a.u - a.v,
            v: -a.v,
            field: a.field,
        },
        FieldTag::RationalQ => unreachable!(),
    }
}

pub fn norm(a: &QuadInt) -> Result<u64> {
    let (u, v) = (a.u as i128, a.v as i128);
    let n = match a.field {
        FieldTag::GaussianQi => u * u + v * v,
        FieldTag::EisensteinQomega => u * u - u * v + v * v,
        FieldTag::RationalQ => unreachable!(),
    };
    u64::try_from(n).map_err(|_| range("norm overflows u64"))
}

pub fn is_unit(a: &QuadInt) -> bool {
    norm(a).map(|n| n == 1).unwrap_or(false)
}

/// The finitely many units of the ring, in a fixed order.
pub fn units(field: FieldTag) -> Vec<QuadInt> {
    match field {
        FieldTag::GaussianQi => [(1, 0), (0, 1), (-1, 0), (0, -1)]
            .iter()
            .map(|&(u, v)| QuadInt { u, v, field })
            .collect(),
        FieldTag::EisensteinQomega => [(1, 0), (0, 1), (-1, -1), (-1, 0), (0, -1), (1, 1)]
            .iter()
            .map(|&(u, v)| QuadInt { u, v, field })
            .collect(),
        FieldTag::RationalQ => vec![],
    }
}

fn is_canonical(a: &QuadInt) -> bool {
    match a.field {
        FieldTag::GaussianQi => a.u > 0 && a.v >= 0,
        // the half-open 60-degree sector 0 <= arg < 60
        FieldTag::EisensteinQomega => a.v >= 0 && a.u > a.v,
        FieldTag::RationalQ => false,
    }
}

/// The unique associate of a nonzero element with u > 0, v >= 0 (Gaussian)
/// or inside the sector 0 <= arg < 60 degrees (Eisenstein). Zero maps to
/// itself.
pub fn canonical_associate(a: &QuadInt) -> Result<QuadInt> {
    if a.is_zero() {
        return Ok(*a);
    }
    for unit in units(a.field) {
        let cand = mul(a, &unit)?;
        if is_canonical(&cand) {
            return Ok(cand);
        }
    }
    Err(range("no associate fits in range"))
}

fn round_div(n: i128, d: i128) -> i128 {
    let (n, d) = if d < 0 { (-n, -d) } else { (n, d) };
    if n >= 0 {
        (n + d / 2) / d
    } else {
        -((-n + d / 2) / d)
    }
}

/// Nearest-quotient division: a = q*b + r with norm(r) < norm(b).
pub fn div_rem(a: &QuadInt, b: &QuadInt) -> Result<(QuadInt, QuadInt)> {
    let field = same_field(a, b)?;
    if b.is_zero() {
        return Err(domain("division by zero"));
    }
    let n = norm(b)? as i128;
    let num = mul(a, &conjugate(b))?;
    let q = clamp(round_div(num.u as i128, n), round_div(num.v as i128, n), field)?;
    let r = sub(a, &mul(&q, b)?)?;
    debug_assert!(norm(&r).unwrap() < norm(b).unwrap());
    Ok((q, r))
}

/// True iff b divides a exactly; returns the quotient.
pub fn exact_div(a: &QuadInt, b: &QuadInt) -> Result<Option<QuadInt>> {
    let field = same_field(a, b)?;
    if b.is_zero() {
        return Err(domain("division by zero"));
    }
    let n = norm(b)? as i128;
    let num = mul(a, &conjugate(b))?;
    if num.u as i128 % n != 0 || num.v as i128 % n != 0 {
        return Ok(None);
    }
    Ok(Some(clamp(num.u as i128 / n, num.v as i128 / n, field)?))
}

/// Euclidean gcd, returned as the canonical associate. Coprimality of a
/// pair is `is_unit(quad_gcd(a, b))`.
pub fn quad_gcd(a: &QuadInt, b: &QuadInt) -> Result<QuadInt> {
    same_field(a, b)?;
    if a.is_zero() && b.is_zero() {
        return Err(domain("gcd(0, 0) is undefined"));
    }
    let (mut x, mut y) = (*a, *b);
    while !y.is_zero() {
        let (_, r) = div_rem(&x, &y)?;
        x = y;
        y = r;
    }
    canonical_associate(&x)
}

/// Unit times a product of canonical prime elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadFactorization {
    pub unit: QuadInt,
    pub factors: Vec<(QuadInt, u32)>,
}

impl QuadFactorization {
    pub fn value(&self) -> Result<QuadInt> {
        let mut acc = self.unit;
        for (p, e) in &self.factors {
            for _ in 0..*e {
                acc = mul(&acc, p)?;
            }
        }
        Ok(acc)
    }
}

/// Deterministic square root of -1 mod p, for p = 1 (mod 4): the first
/// quadratic non-residue in 2, 3, ... raised to (p-1)/4.
fn sqrt_of_minus_one(p: u64) -> u64 {
    for n in 2..p {
        if pow_mod(n, (p - 1) / 2, p) == p - 1 {
            return pow_mod(n, (p - 1) / 4, p);
        }
    }
    unreachable!("p = 1 mod 4 has a non-residue")
}

/// Deterministic primitive cube root of 1 mod p, for p = 1 (mod 3).
fn primitive_cube_root(p: u64) -> u64 {
    for n in 2..p {
        let s = pow_mod(n, (p - 1) / 3, p);
        if s != 1 {
            return s;
        }
    }
    unreachable!("p = 1 mod 3 has a non-cube")
}

/// The canonical prime elements above a rational prime p, with the residue
/// norm of each (p for split/ramified primes, p^2 for inert ones).
pub fn primes_above(p: u64, field: FieldTag) -> Result<Vec<(QuadInt, u64)>> {
    let p_i = i64::try_from(p).map_err(|_| range("prime exceeds i64"))?;
    match field {
        FieldTag::GaussianQi => {
            if p == 2 {
                Ok(vec![(QuadInt::gaussian(1, 1)?, 2)])
            } else if p % 4 == 3 {
                Ok(vec![(QuadInt::gaussian(p_i, 0)?, p * p)])
            } else {
                let s = sqrt_of_minus_one(p) as i64;
                let pi = quad_gcd(&QuadInt::gaussian(p_i, 0)?, &QuadInt::gaussian(s, 1)?)?;
                let pi_bar = canonical_associate(&conjugate(&pi))?;
                Ok(vec![(pi, p), (pi_bar, p)])
            }
        }
        FieldTag::EisensteinQomega => {
            if p == 3 {
                // 1 - omega, canonically 2 + omega
                Ok(vec![(canonical_associate(&QuadInt::eisenstein(1, -1)?)?, 3)])
            } else if p % 3 == 2 {
                Ok(vec![(QuadInt::eisenstein(p_i, 0)?, p * p)])
            } else {
                let s = primitive_cube_root(p) as i64;
                let pi = quad_gcd(&QuadInt::eisenstein(p_i, 0)?, &QuadInt::eisenstein(s, -1)?)?;
                let pi_bar = canonical_associate(&conjugate(&pi))?;
                Ok(vec![(pi, p), (pi_bar, p)])
            }
        }
        FieldTag::RationalQ => Err(domain("primes_above: quadratic fields only")),
    }
}

/// Factors a nonzero element into a unit times canonical prime elements,
/// by factoring its rational norm and dividing out the primes above each
/// rational prime.
pub fn quad_factorize(alpha: &QuadInt) -> Result<QuadFactorization> {
    if alpha.is_zero() {
        return Err(domain("quad_factorize: zero input"));
    }
    let n = norm(alpha)?;
    let mut rest = *alpha;
    let mut factors = Vec::new();
    let norm_fac = factorize(i64::try_from(n).map_err(|_| range("norm exceeds i64"))?)?;
    for &(p, _) in &norm_fac.factors {
        for (pi, _) in primes_above(p, alpha.field)? {
            let mut e = 0u32;
            while let Some(q) = exact_div(&rest, &pi)? {
                rest = q;
                e += 1;
            }
            if e > 0 {
                factors.push((pi, e));
            }
        }
    }
    if !is_unit(&rest) {
        return Err(range("quad_factorize: nontrivial cofactor remained"));
    }
    Ok(QuadFactorization {
        unit: rest,
        factors,
    })
}

/// Number of units in the residue ring modulo the principal ideal (alpha):
/// the product over prime element powers pi^k of q^(k-1) (q-1), q the
/// residue norm of pi.
pub fn quad_phi(alpha: &QuadInt) -> Result<u64> {
    if alpha.is_zero() {
        return Err(domain("quad_phi: phi(0) is undefined"));
    }
    let fac = quad_factorize(alpha)?;
    let mut phi: u128 = 1;
    for (pi, k) in &fac.factors {
        let q = norm(pi)? as u128;
        for _ in 1..*k {
            phi *= q;
        }
        phi *= q - 1;
        if phi > u64::MAX as u128 {
            return Err(range("quad_phi overflows u64"));
        }
    }
    Ok(phi as u64)
}

/// Running-gcd fold over a square coordinate box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FieldScanResult {
    pub g: u64,
    pub stabilized_at: usize,
    pub samples_used: usize,
    pub stable: bool,
}

/// Folds gcd of phi(a*x+b) over x = u + v*basis with |u|, |v| <= box_radius
/// (row-major order), skipping a*x+b = 0.
pub fn field_empirical_gcd(
    a: &QuadInt,
    b: &QuadInt,
    box_radius: i64,
    window: usize,
) -> Result<FieldScanResult> {
    same_field(a, b)?;
    if a.is_zero() {
        return Err(domain("field_empirical_gcd: a must be nonzero"));
    }
    if !is_unit(&quad_gcd(a, b)?) {
        return Err(domain("field_empirical_gcd: a and b must be coprime"));
    }
    let mut g = 0u64;
    let mut stabilized_at = 0usize;
    let mut samples = 0usize;
    for u in -box_radius..=box_radius {
        for v in -box_radius..=box_radius {
            let x = QuadInt {
                u,
                v,
                field: a.field,
            };
            let value = add(&mul(a, &x)?, b)?;
            if value.is_zero() {
                continue;
            }
            let phi = quad_phi(&value)?;
            let next = gcd_u64(g, phi);
            if next != g {
                stabilized_at = samples;
                g = next;
            }
            samples += 1;
        }
    }
    if samples == 0 {
        return Err(domain("field_empirical_gcd: empty box"));
    }
    Ok(FieldScanResult {
        g,
        stabilized_at,
        samples_used: samples,
        stable: samples - 1 - stabilized_at >= window,
    })
}

/// Canonical-associate representatives of the nonzero elements with norm
/// at most `max_norm`, sorted by (norm, u, v).
pub fn canonical_elements_up_to_norm(field: FieldTag, max_norm: u64) -> Result<Vec<QuadInt>> {
    if field == FieldTag::RationalQ {
        return Err(domain("quadratic fields only"));
    }
    let r = (max_norm as f64).sqrt().ceil() as i64 * 2 + 1;
    let mut out = Vec::new();
    for u in -r..=r {
        for v in -r..=r {
            let x = QuadInt { u, v, field };
            if x.is_zero() || !is_canonical(&x) {
                continue;
            }
            let n = norm(&x)?;
            if n <= max_norm {
                out.push((n, x));
            }
        }
    }
    out.sort_by_key(|&(n, x)| (n, x.u, x.v));
    Ok(out.into_iter().map(|(_, x)| x).collect())
}

impl std::fmt::Display for QuadInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sym = match self.field {
            FieldTag::GaussianQi => "i",
            FieldTag::EisensteinQomega => "w",
            FieldTag::RationalQ => "?",
        };
        if self.v == 0 {
            write!(f, "{}", self.u)
        } else if self.u == 0 {
            write!(f, "{}{}", self.v, sym)
        } else if self.v < 0 {
            write!(f, "{}{}{}", self.u, self.v, sym)
        } else {
            write!(f, "{}+{}{}", self.u, self.v, sym)
        }
    }
}

impl std::str::FromStr for FieldTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "q" | "rational" => Ok(FieldTag::RationalQ),
            "gauss" | "gaussian" => Ok(FieldTag::GaussianQi),
            "eisenstein" => Ok(FieldTag::EisensteinQomega),
            other => Err(domain(format!("unknown field: {other}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_ops_examples() {
        let one_plus_i = QuadInt::gaussian(1, 1).unwrap();
        let one_minus_i = QuadInt::gaussian(1, -1).unwrap();
        let prod = mul(&one_plus_i, &one_minus_i).unwrap();
        assert_eq!((prod.u, prod.v), (2, 0));

        assert_eq!(norm(&QuadInt::gaussian(2, 1).unwrap()).unwrap(), 5);

        // 1 + omega is a unit
        let e = QuadInt::eisenstein(1, 1).unwrap();
        assert_eq!(norm(&e).unwrap(), 1);
        assert!(is_unit(&e));

        assert!(mul(&one_plus_i, &e).is_err());
    }

    #[test]
    fn norm_multiplicative() {
        let a = QuadInt::eisenstein(3, -2).unwrap();
        let b = QuadInt::eisenstein(-1, 4).unwrap();
        assert_eq!(
            norm(&mul(&a, &b).unwrap()).unwrap(),
            norm(&a).unwrap() * norm(&b).unwrap()
        );
    }

    #[test]
    fn canonical_associate_unique() {
        for field in [FieldTag::GaussianQi, FieldTag::EisensteinQomega] {
            for u in -4..=4i64 {
                for v in -4..=4i64 {
                    let x = QuadInt { u, v, field };
                    if x.is_zero() {
                        continue;
                    }
                    let hits = units(field)
                        .iter()
                        .filter(|&unit| is_canonical(&mul(&x, unit).unwrap()))
                        .count();
                    assert_eq!(hits, 1, "associate orbit of {u}+{v} in {field:?}");
                }
            }
        }
    }

    #[test]
    fn quad_gcd_examples() {
        let g = quad_gcd(
            &QuadInt::gaussian(1, 1).unwrap(),
            &QuadInt::gaussian(3, 0).unwrap(),
        )
        .unwrap();
        assert!(is_unit(&g));

        // (1+i)^2 = 2i, so 1+i divides 2
        let g = quad_gcd(
            &QuadInt::gaussian(2, 0).unwrap(),
            &QuadInt::gaussian(1, 1).unwrap(),
        )
        .unwrap();
        assert_eq!((g.u, g.v), (1, 1));

        let a = QuadInt::gaussian(-3, 4).unwrap();
        let g = quad_gcd(&QuadInt::gaussian(0, 0).unwrap(), &a).unwrap();
        assert_eq!(g, canonical_associate(&a).unwrap());

        assert!(quad_gcd(
            &QuadInt::gaussian(0, 0).unwrap(),
            &QuadInt::gaussian(0, 0).unwrap()
        )
        .is_err());
    }

    #[test]
    fn quad_factorize_examples() {
        // 5 = unit * (2+i)(2-i)
        let f = quad_factorize(&QuadInt::gaussian(5, 0).unwrap()).unwrap();
        assert_eq!(f.factors.len(), 2);
        for (pi, e) in &f.factors {
            assert_eq!(norm(pi).unwrap(), 5);
            assert_eq!(*e, 1);
        }
        assert_eq!(f.value().unwrap(), QuadInt::gaussian(5, 0).unwrap());

        // 2 = unit * (1+i)^2
        let f = quad_factorize(&QuadInt::gaussian(2, 0).unwrap()).unwrap();
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.factors[0].1, 2);

        // 7 = 3 mod 4 stays inert
        let f = quad_factorize(&QuadInt::gaussian(7, 0).unwrap()).unwrap();
        assert_eq!(f.factors, vec![(QuadInt::gaussian(7, 0).unwrap(), 1)]);

        // 3 ramifies in Z[omega]
        let f = quad_factorize(&QuadInt::eisenstein(3, 0).unwrap()).unwrap();
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.factors[0].1, 2);
        assert_eq!(f.value().unwrap(), QuadInt::eisenstein(3, 0).unwrap());
    }

    #[test]
    fn quad_phi_examples() {
        assert_eq!(quad_phi(&QuadInt::gaussian(3, 0).unwrap()).unwrap(), 8);
        assert_eq!(quad_phi(&QuadInt::gaussian(1, 1).unwrap()).unwrap(), 1);
        assert_eq!(quad_phi(&QuadInt::gaussian(5, 0).unwrap()).unwrap(), 16);
        assert_eq!(quad_phi(&QuadInt::gaussian(2, 0).unwrap()).unwrap(), 2);
        assert!(quad_phi(&QuadInt::gaussian(0, 0).unwrap()).is_err());
    }

    #[test]
    fn mu_and_bound_examples() {
        assert_eq!(mu(FieldTag::RationalQ), 2);
        assert_eq!(mu(FieldTag::GaussianQi), 4);
        assert_eq!(mu(FieldTag::EisensteinQomega), 6);
        assert_eq!(theorem2_bound(FieldTag::RationalQ, None).unwrap(), 4);
        assert_eq!(theorem2_bound(FieldTag::GaussianQi, None).unwrap(), 16);
        assert_eq!(theorem2_bound(FieldTag::GaussianQi, Some(3)).unwrap(), 1);
        assert_eq!(theorem2_bound(FieldTag::EisensteinQomega, Some(3)).unwrap(), 9);
    }

    #[test]
    fn field_empirical_gcd_examples() {
        let three = QuadInt::gaussian(3, 0).unwrap();
        let one = QuadInt::gaussian(1, 0).unwrap();
        let r = field_empirical_gcd(&three, &one, 5, 10).unwrap();
        assert_eq!(r.g, 1);

        let a = QuadInt::gaussian(2, 1).unwrap();
        let b = QuadInt::gaussian(0, 1).unwrap();
        let r = field_empirical_gcd(&a, &b, 5, 10).unwrap();
        assert_eq!(r.g, 1);

        let a = QuadInt::gaussian(4, 0).unwrap();
        let b = QuadInt::gaussian(1, 2).unwrap();
        let r = field_empirical_gcd(&a, &b, 20, 100).unwrap();
        assert_eq!(16 % r.g, 0);
    }
}
