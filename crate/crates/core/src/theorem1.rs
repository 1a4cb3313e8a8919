//! Exact classification of the gcd of the family phi(ax+b).
//!
//! Two index-range conventions are supported, because the value of the gcd
//! genuinely depends on whether x ranges over all integers or only over
//! those with ax+b > 0:
//!
//! * [`Convention::PositiveValues`] folds phi over the positive values of
//!   the progression only. [`classify_positive`] is exact for it.
//! * [`Convention::AllIntegers`] folds phi(|ax+b|) over every x. The set of
//!   |ax+b| for negative values is exactly the positive progression of the
//!   reflected residue a-b, so [`classify_all`] is the gcd of the two
//!   positive-branch classifications.
//!
//! [`classify_paper`] applies the literal published case split (with the
//! all-integers reading of the unit case) and flags inputs where it
//! disagrees with [`classify_all`]; (16, 5) is the standard example.

use serde::Serialize;

use crate::arith::{gcd_i64, gcd_u64, is_square_mod};
use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// x ranges over integers with ax+b > 0.
    #[serde(rename = "positive")]
    PositiveValues,
    /// x ranges over all of Z; phi is taken of |ax+b|, zeros skipped.
    #[serde(rename = "all")]
    AllIntegers,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GcdCase {
    /// The progression attains a value with phi = 1, so g = 1.
    UnitValue,
    /// 4 | a, b = 1 (mod 4), b a non-square mod a: g = 4.
    Four,
    /// Everything else: g = 2.
    Two,
}

/// The predicates consulted while classifying, kept for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Conditions {
    pub b_mod_a: u64,
    pub a_divisible_by_4: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_mod_4: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_square_mod_a: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub g: u64,
    pub case_tag: GcdCase,
    pub convention: Convention,
    pub conditions: Conditions,
}

fn case_for(g: u64) -> GcdCase {
    match g {
        1 => GcdCase::UnitValue,
        4 => GcdCase::Four,
        _ => GcdCase::Two,
    }
}

/// Canonicalizes (a, b) to a > 0 and b in [1, a].
///
/// Negating a permutes the value multiset (x -> -x), and b only matters
/// modulo a, so every coprime pair has a unique canonical form.
pub fn normalize(a: i64, b: i64) -> Result<(u64, u64)> {
    if a == 0 {
        return Err(domain("normalize: a must be nonzero"));
    }
    if gcd_i64(a, b) != 1 {
        return Err(domain(format!("normalize: gcd({a}, {b}) != 1")));
    }
    let a1 = a.unsigned_abs();
    let mut b1 = b.rem_euclid(a1 as i64) as u64;
    if b1 == 0 {
        // only possible for a1 = 1 given coprimality
        b1 = a1;
    }
    Ok((a1, b1))
}

fn check_normalized(a: u64, b: u64) -> Result<()> {
    if a == 0 {
        return Err(domain("classify: a must be positive"));
    }
    if b == 0 || b > a {
        return Err(domain(format!("classify: b = {b} not in [1, {a}]")));
    }
    if gcd_u64(a, b) != 1 {
        return Err(domain(format!("classify: gcd({a}, {b}) != 1")));
    }
    Ok(())
}

/// Classifies g over the positive values of the progression.
pub fn classify_positive(a: u64, b: u64) -> Result<Classification> {
    check_normalized(a, b)?;
    let b_mod_a = b % a;
    let mut conditions = Conditions {
        b_mod_a,
        a_divisible_by_4: a % 4 == 0,
        b_mod_4: None,
        b_square_mod_a: None,
    };
    // Values 1 or 2 are attained iff b = 1 or 2 (mod a).
    if b_mod_a == 1 % a || b_mod_a == 2 % a {
        return Ok(Classification {
            g: 1,
            case_tag: GcdCase::UnitValue,
            convention: Convention::PositiveValues,
            conditions,
        });
    }
    let g = if a % 4 == 0 {
        conditions.b_mod_4 = Some(b % 4);
        if b % 4 == 1 {
            // With 4 | a and b coprime to a, b = 2 (mod a) cannot happen and
            // b = 1 (mod a) is itself a square, so beyond b = 1 (mod 4) only
            // the square test is needed.
            let sq = is_square_mod(b as i64, a)?;
            conditions.b_square_mod_a = Some(sq);
            if sq {
                2
            } else {
                4
            }
        } else {
            2
        }
    } else {
        2
    };
    Ok(Classification {
        g,
        case_tag: case_for(g),
        convention: Convention::PositiveValues,
        conditions,
    })
}

/// Residue of -b in canonical form [1, a].
pub fn reflect(a: u64, b: u64) -> u64 {
    if b == a {
        a // a = 1 only
    } else {
        a - b
    }
}

/// Classifies g over all integer x: the gcd of the positive-branch
/// classification of b and of the reflected residue a-b.
pub fn classify_all(a: u64, b: u64) -> Result<Classification> {
    check_normalized(a, b)?;
    let fwd = classify_positive(a, b)?;
    let bwd = classify_positive(a, reflect(a, b))?;
    let g = gcd_u64(fwd.g, bwd.g);
    Ok(Classification {
        g,
        case_tag: case_for(g),
        convention: Convention::AllIntegers,
        conditions: fwd.conditions,
    })
}

/// The published case split taken literally, with the all-integers reading
/// of the unit case (values +-1, +-2 all reachable). The flag is set when
/// this disagrees with [`classify_all`].
pub fn classify_paper(a: u64, b: u64) -> Result<(Classification, bool)> {
    check_normalized(a, b)?;
    let b_mod_a = b % a;
    let unit = [1i64, 2, -1, -2]
        .iter()
        .any(|&r| b_mod_a == r.rem_euclid(a as i64) as u64);
    let mut conditions = Conditions {
        b_mod_a,
        a_divisible_by_4: a % 4 == 0,
        b_mod_4: None,
        b_square_mod_a: None,
    };
    let g = if unit {
        1
    } else if a % 4 == 0 {
        conditions.b_mod_4 = Some(b % 4);
        if b % 4 == 1 {
            let sq = is_square_mod(b as i64, a)?;
            conditions.b_square_mod_a = Some(sq);
            if sq {
                2
            } else {
                4
            }
        } else {
            2
        }
    } else {
        2
    };
    let classification = Classification {
        g,
        case_tag: case_for(g),
        convention: Convention::AllIntegers,
        conditions,
    };
    let flag = g != classify_all(a, b)?.g;
    Ok((classification, flag))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize(-16, 21).unwrap(), (16, 5));
        assert_eq!(normalize(1, -7).unwrap(), (1, 1));
        assert_eq!(normalize(16, 5).unwrap(), (16, 5));
        assert!(normalize(0, 1).is_err());
        assert!(normalize(4, 2).is_err());
    }

    #[test]
    fn classify_positive_examples() {
        let c = classify_positive(5, 2).unwrap();
        assert_eq!((c.g, c.case_tag), (1, GcdCase::UnitValue));

        let c = classify_positive(16, 13).unwrap();
        assert_eq!((c.g, c.case_tag), (4, GcdCase::Four));
        assert_eq!(c.conditions.b_mod_4, Some(1));
        assert_eq!(c.conditions.b_square_mod_a, Some(false));

        let c = classify_positive(7, 3).unwrap();
        assert_eq!((c.g, c.case_tag), (2, GcdCase::Two));

        // 9 = 3^2 is a square mod 16, so the four-case is refused
        let c = classify_positive(16, 9).unwrap();
        assert_eq!((c.g, c.case_tag), (2, GcdCase::Two));
    }

    #[test]
    fn classify_all_examples() {
        assert_eq!(classify_all(16, 5).unwrap().g, 2);
        assert_eq!(classify_all(15, 14).unwrap().g, 1);
        for a in 1..40u64 {
            assert_eq!(classify_all(a, 1).unwrap().g, 1);
        }
    }

    #[test]
    fn classify_paper_examples() {
        let (c, flag) = classify_paper(16, 5).unwrap();
        assert_eq!(c.g, 4);
        assert!(flag);

        let (c, flag) = classify_paper(5, 2).unwrap();
        assert_eq!(c.g, 1);
        assert!(!flag);

        let (c, flag) = classify_paper(7, 3).unwrap();
        assert_eq!(c.g, 2);
        assert!(!flag);
    }

    #[test]
    fn residue_dependence_and_reflection() {
        for a in 1..=48u64 {
            for b in 1..=a {
                if gcd_u64(a, b) != 1 {
                    continue;
                }
                // classify consults only the residue of b
                let shifted = normalize(a as i64, (b + a) as i64).unwrap();
                assert_eq!(
                    classify_positive(a, b).unwrap().g,
                    classify_positive(shifted.0, shifted.1).unwrap().g
                );
                // reflection symmetry of the all-integers gcd
                assert_eq!(
                    classify_all(a, b).unwrap().g,
                    classify_all(a, reflect(a, b)).unwrap().g
                );
                // g always divides 4
                let g = classify_positive(a, b).unwrap().g;
                assert!(g == 1 || g == 2 || g == 4);
            }
        }
    }
}
