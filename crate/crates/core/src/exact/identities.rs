use num_traits::One;
use serde::Serialize;

use super::poly::BivarPoly;
use super::qsqrt2::{rat, Rational};
use crate::error::{Error, Result};

// Numerator quadratics of the closed-form kernel entries in the slope
// variable x = beta/alpha, together with their constant denominators; the
// shared factor (1 + x^2) is handled separately.
const NUM_11: [i64; 3] = [8, 4, 5];
const NUM_22: [i64; 3] = [9, 42, 65];
const NUM_33: [i64; 3] = [8, 28, 29];
const NUM_12: [i64; 3] = [3, 14, 5];
const NUM_23: [i64; 3] = [6, 25, 31];

#[derive(Clone, Copy)]
enum Var {
    X,
    Y,
}

fn quad(v: Var, c: [i64; 3]) -> BivarPoly {
    let t = |d: u32, k: i64| match v {
        Var::X => (d, 0, rat(k, 1)),
        Var::Y => (0, d, rat(k, 1)),
    };
    let terms = [t(2, c[0]), t(1, c[1]), t(0, c[2])];
    BivarPoly::from_terms(&terms)
}

fn numerator_and_scale(pair: (usize, usize)) -> Result<([i64; 3], i64)> {
    match pair {
        (1, 1) => Ok((NUM_11, 1)),
        (2, 2) => Ok((NUM_22, 63)),
        (3, 3) => Ok((NUM_33, 28)),
        (1, 2) => Ok((NUM_12, 6)),
        (2, 3) => Ok((NUM_23, 30)),
        _ => Err(Error::InvalidInput(format!(
            "no closed form for node pair {pair:?}; supported pairs are (1,1), (2,2), (3,3), (1,2), (2,3)"
        ))),
    }
}

/// Closed-form kernel entry for a node pair of the built-in example, as a
/// quadratic numerator in x and a constant scale: value = num(x) / (scale * (1 + x^2)).
pub fn closed_form(pair: (usize, usize)) -> Result<(BivarPoly, Rational)> {
    let (num, scale) = numerator_and_scale(pair)?;
    Ok((quad(Var::X, num), rat(scale, 1)))
}

/// Exact evaluation of the closed-form kernel entry at a rational slope x.
pub fn rational_kernel_in_x(pair: (usize, usize), x: &Rational) -> Result<Rational> {
    let (num, scale) = numerator_and_scale(pair)?;
    let [c2, c1, c0] = num.map(|k| rat(k, 1));
    let value = c2 * x * x + c1 * x + c0;
    let den = rat(scale, 1) * (Rational::one() + x * x);
    Ok(value / den)
}

fn quartic(coeffs: &[(u32, u32, i64)]) -> BivarPoly {
    let terms: Vec<(u32, u32, Rational)> =
        coeffs.iter().map(|&(dx, dy, c)| (dx, dy, rat(c, 1))).collect();
    BivarPoly::from_terms(&terms)
}

/// Factors of the locus where the normalized squared kernel entry for the
/// given off-diagonal pair takes equal values at two slopes x != y: a
/// symmetric quadratic factor and a quartic factor.
pub fn invariant_locus_factors(pair: (usize, usize)) -> Result<(BivarPoly, BivarPoly)> {
    match pair {
        (1, 2) => Ok((
            quartic(&[(1, 1, 1), (1, 0, 1), (0, 1, 1), (0, 0, 3)]),
            quartic(&[
                (2, 2, 12),
                (2, 1, 31),
                (1, 2, 31),
                (2, 0, -5),
                (1, 1, 28),
                (0, 2, -5),
                (1, 0, -65),
                (0, 1, -65),
                (0, 0, -50),
            ]),
        )),
        (2, 3) => Ok((
            quartic(&[(1, 1, 1), (1, 0, 1), (0, 1, 1), (0, 0, -1)]),
            quartic(&[
                (2, 2, 12),
                (2, 1, 25),
                (1, 2, 25),
                (2, 0, 37),
                (1, 1, 0),
                (0, 2, 37),
                (1, 0, 25),
                (0, 1, 25),
                (0, 0, 62),
            ]),
        )),
        _ => Err(Error::InvalidInput(format!(
            "locus factorization is available for pairs (1,2) and (2,3), not {pair:?}"
        ))),
    }
}

/// Collision difference for an off-diagonal pair (i, j): the numerator of
/// `k_ij(x)^2 / (k_ii(x) k_jj(x)) - k_ij(y)^2 / (k_ii(y) k_jj(y))` after
/// clearing all positive denominators.
fn collision_difference(pair: (usize, usize)) -> Result<BivarPoly> {
    let (off, d1, d2) = match pair {
        (1, 2) => (NUM_12, NUM_11, NUM_22),
        (2, 3) => (NUM_23, NUM_22, NUM_33),
        _ => {
            return Err(Error::InvalidInput(format!(
                "collision difference is defined for pairs (1,2) and (2,3), not {pair:?}"
            )))
        }
    };
    let lhs = &quad(Var::X, off).pow(2) * &(&quad(Var::Y, d1) * &quad(Var::Y, d2));
    let rhs = &quad(Var::Y, off).pow(2) * &(&quad(Var::X, d1) * &quad(Var::X, d2));
    Ok(&lhs - &rhs)
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub id: String,
    pub description: String,
    pub pass: bool,
    pub witness: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
    pub all_pass: bool,
}

fn divisibility_check(id: &str, pair: (usize, usize), description: &str) -> IdentityCheck {
    let result = (|| -> Result<Rational> {
        let diff = collision_difference(pair)?;
        let (gap, quartic) = invariant_locus_factors(pair)?;
        let x_minus_y = &BivarPoly::var_x() - &BivarPoly::var_y();
        let q = diff.divide_exact(&x_minus_y)?.divide_exact(&gap)?.divide_exact(&quartic)?;
        q.constant_value().ok_or_else(|| {
            Error::IllConditioned(format!("quotient is not constant: {q}"))
        })
    })();
    match result {
        Ok(c) => IdentityCheck {
            id: id.into(),
            description: description.into(),
            pass: true,
            witness: format!("constant quotient {c}"),
        },
        Err(Error::NotDivisible { remainder }) => IdentityCheck {
            id: id.into(),
            description: description.into(),
            pass: false,
            witness: format!("nonzero remainder {remainder}"),
        },
        Err(e) => IdentityCheck {
            id: id.into(),
            description: description.into(),
            pass: false,
            witness: e.to_string(),
        },
    }
}

/// Runs the four exact checks behind the slope-collision analysis of the
/// built-in four-point example:
///
/// (a) the (1,2) collision difference factors as
///     constant * (x - y) * (xy + x + y + 3) * Q1, exactly;
/// (b) the (2,3) collision difference factors as
///     constant * (x - y) * (xy + x + y - 1) * Q2, exactly;
/// (c) Q2 has an explicit positive-combination-of-squares decomposition, so
///     it never vanishes on the reals;
/// (d) Q1 reduces to -24((x+1)^2 + (y+1)^2) modulo xy + x + y - 1, so it is
///     strictly negative on the real points of that curve.
pub fn verify_condition4_identities() -> IdentityReport {
    let mut checks = Vec::new();

    checks.push(divisibility_check(
        "a",
        (1, 2),
        "(1,2) collision difference = c * (x - y)(xy + x + y + 3) Q1",
    ));
    checks.push(divisibility_check(
        "b",
        (2, 3),
        "(2,3) collision difference = c * (x - y)(xy + x + y - 1) Q2",
    ));

    // (c) Q2 as a positive combination of squares plus a positive constant.
    let sos = {
        let x = BivarPoly::var_x();
        let y = BivarPoly::var_y();
        let xy = &x * &y;
        let six = BivarPoly::constant(rat(6, 1));
        let c24 = BivarPoly::constant(rat(113, 24));
        let s1 = &xy + &(&BivarPoly::constant(rat(25, 12)) * &x);
        let s2 = &xy + &(&BivarPoly::constant(rat(25, 12)) * &y);
        let s3 = &(&BivarPoly::constant(rat(5, 2)) * &x) + &BivarPoly::constant(rat(5, 1));
        let s4 = &(&BivarPoly::constant(rat(5, 2)) * &y) + &BivarPoly::constant(rat(5, 1));
        let mut acc = &six * &s1.pow(2);
        acc = &acc + &(&c24 * &x.pow(2));
        acc = &acc + &(&six * &s2.pow(2));
        acc = &acc + &(&c24 * &y.pow(2));
        acc = &acc + &s3.pow(2);
        acc = &acc + &s4.pow(2);
        &acc + &BivarPoly::constant(rat(12, 1))
    };
    let (_, q2) = invariant_locus_factors((2, 3)).expect("fixed pair");
    let diff = &q2 - &sos;
    checks.push(IdentityCheck {
        id: "c".into(),
        description: "Q2 = 6[x(y+25/12)]^2 + 113/24 x^2 + 6[y(x+25/12)]^2 + 113/24 y^2 + (5x/2+5)^2 + (5y/2+5)^2 + 12"
            .into(),
        pass: diff.is_zero(),
        witness: if diff.is_zero() { "exact".into() } else { format!("difference {diff}") },
    });

    // (d) Q1 modulo xy + x + y - 1.
    let (gap2, _) = invariant_locus_factors((2, 3)).expect("fixed pair");
    let (_, q1) = invariant_locus_factors((1, 2)).expect("fixed pair");
    let reduced = q1.reduce_mod(&gap2).expect("nonzero divisor");
    let expected = BivarPoly::from_terms(&[
        (2, 0, rat(-24, 1)),
        (1, 0, rat(-48, 1)),
        (0, 2, rat(-24, 1)),
        (0, 1, rat(-48, 1)),
        (0, 0, rat(-48, 1)),
    ]);
    checks.push(IdentityCheck {
        id: "d".into(),
        description: "Q1 mod (xy + x + y - 1) = -24((x+1)^2 + (y+1)^2)".into(),
        pass: reduced == expected,
        witness: format!("reduced form {reduced}"),
    });

    let all_pass = checks.iter().all(|c| c.pass);
    IdentityReport { checks, all_pass }
}
