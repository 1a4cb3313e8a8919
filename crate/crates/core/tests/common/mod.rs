//! Brute-force oracles shared by the integration suites. These deliberately
//! avoid the library's own computation paths: phi by counting coprime
//! residues, squares by enumeration, quotient-ring units by walking a
//! fundamental domain of the lattice.

use std::collections::HashSet;

use totient_gcd::arith::{ext_gcd, gcd_u64};
use totient_gcd::quadfield::{self, QuadInt};

pub fn phi_brute(n: u64) -> u64 {
    (1..=n).filter(|&k| gcd_u64(k, n) == 1).count() as u64
}

pub fn squares_mod_brute(a: u64) -> HashSet<u64> {
    (0..a).map(|t| t * t % a).collect()
}

/// Counts units in the residue ring modulo (alpha) by enumerating a
/// transversal of the lattice spanned by alpha and alpha*basis.
pub fn unit_count_brute(alpha: &QuadInt) -> u64 {
    assert!(!alpha.is_zero());
    let basis = QuadInt::new(0, 1, alpha.field).unwrap();
    let w = quadfield::mul(alpha, &basis).unwrap();
    let (v1, v2) = ((alpha.u, alpha.v), (w.u, w.v));
    let (g, _, _) = ext_gcd(v1.1, v2.1);
    // combination with second coordinate zero spans the x direction
    let x_span = ((v2.1 / g) * v1.0 - (v1.1 / g) * v2.0).abs();
    let norm = quadfield::norm(alpha).unwrap();
    assert_eq!((x_span * g) as u64, norm, "transversal size must be the norm");
    let mut count = 0;
    for x in 0..x_span {
        for y in 0..g {
            let beta = QuadInt::new(x, y, alpha.field).unwrap();
            if quadfield::is_unit(&quadfield::quad_gcd(&beta, alpha).unwrap()) {
                count += 1;
            }
        }
    }
    count
}
