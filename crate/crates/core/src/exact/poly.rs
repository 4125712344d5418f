use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::qsqrt2::Rational;
use crate::error::{Error, Result};

/// Sparse bivariate polynomial over Q, keyed by (deg_x, deg_y). Zero
/// coefficients are never stored, so structural equality is polynomial
/// equality. The monomial order used throughout is lex with x before y.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BivarPoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BivarPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn var_x() -> Self {
        Self::monomial(1, 0, Rational::one())
    }

    pub fn var_y() -> Self {
        Self::monomial(0, 1, Rational::one())
    }

    pub fn monomial(dx: u32, dy: u32, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((dx, dy), c);
        }
        Self { terms }
    }

    pub fn from_terms(terms: &[(u32, u32, Rational)]) -> Self {
        let mut p = Self::zero();
        for (dx, dy, c) in terms {
            p.add_term(*dx, *dy, c.clone());
        }
        p
    }

    fn add_term(&mut self, dx: u32, dy: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((dx, dy)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, dx: u32, dy: u32) -> Rational {
        self.terms.get(&(dx, dy)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Some(c) when the polynomial is the constant c (including zero).
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    /// Leading term under lex order with x ranked before y.
    pub fn leading(&self) -> Option<((u32, u32), &Rational)> {
        self.terms.iter().next_back().map(|(k, v)| (*k, v))
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (&(dx, dy), c) in &self.terms {
            acc += c * pow_rat(x, dx) * pow_rat(y, dy);
        }
        acc
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(Rational::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exchanges the two variables.
    pub fn swap_vars(&self) -> Self {
        let mut p = Self::zero();
        for (&(dx, dy), c) in &self.terms {
            p.add_term(dy, dx, c.clone());
        }
        p
    }

    /// Division with remainder by a single divisor under lex order. Each step
    /// either cancels the current leading term against the divisor's leading
    /// term or moves it to the remainder, so `self = q * d + r` exactly and no
    /// remainder term is divisible by the divisor's leading monomial.
    pub fn divide_with_remainder(&self, d: &BivarPoly) -> Result<(BivarPoly, BivarPoly)> {
        let Some(((ldx, ldy), lc)) = d.leading() else {
            return Err(Error::Domain("polynomial division by zero".into()));
        };
        let lc = lc.clone();
        let mut p = self.clone();
        let mut q = BivarPoly::zero();
        let mut r = BivarPoly::zero();
        while let Some(((pdx, pdy), pc)) = p.leading() {
            if pdx >= ldx && pdy >= ldy {
                let t = BivarPoly::monomial(pdx - ldx, pdy - ldy, pc / &lc);
                p = &p - &(&t * d);
                q = &q + &t;
            } else {
                let t = BivarPoly::monomial(pdx, pdy, pc.clone());
                p = &p - &t;
                r = &r + &t;
            }
        }
        Ok((q, r))
    }

    /// Exact division; a nonzero remainder is returned as the error witness.
    pub fn divide_exact(&self, d: &BivarPoly) -> Result<BivarPoly> {
        let (q, r) = self.divide_with_remainder(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NotDivisible { remainder: Box::new(r) })
        }
    }

    /// Remainder of division by `d`; used to substitute a relation such as
    /// xy = 1 - x - y by reducing modulo xy + x + y - 1.
    pub fn reduce_mod(&self, d: &BivarPoly) -> Result<BivarPoly> {
        Ok(self.divide_with_remainder(d)?.1)
    }
}

fn pow_rat(x: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..k {
        acc *= x;
    }
    acc
}

impl Add for &BivarPoly {
    type Output = BivarPoly;
    fn add(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (&(dx, dy), c) in &rhs.terms {
            out.add_term(dx, dy, c.clone());
        }
        out
    }
}

impl Sub for &BivarPoly {
    type Output = BivarPoly;
    fn sub(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (&(dx, dy), c) in &rhs.terms {
            out.add_term(dx, dy, -c.clone());
        }
        out
    }
}

impl Mul for &BivarPoly {
    type Output = BivarPoly;
    fn mul(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = BivarPoly::zero();
        for (&(adx, ady), ac) in &self.terms {
            for (&(bdx, bdy), bc) in &rhs.terms {
                out.add_term(adx + bdx, ady + bdy, ac * bc);
            }
        }
        out
    }
}

impl Neg for &BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        let mut out = BivarPoly::zero();
        for (&(dx, dy), c) in &self.terms {
            out.add_term(dx, dy, -c.clone());
        }
        out
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for BivarPoly {
            type Output = BivarPoly;
            fn $method(self, rhs: BivarPoly) -> BivarPoly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&BivarPoly> for BivarPoly {
            type Output = BivarPoly;
            fn $method(self, rhs: &BivarPoly) -> BivarPoly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(dx, dy), c) in self.terms.iter().rev() {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_coeff = mag.is_one() && (dx, dy) != (0, 0);
            if !unit_coeff {
                write!(f, "{mag}")?;
            }
            let mut star = !unit_coeff;
            for (name, d) in [("x", dx), ("y", dy)] {
                if d > 0 {
                    if star {
                        write!(f, "*")?;
                    }
                    star = true;
                    write!(f, "{name}")?;
                    if d > 1 {
                        write!(f, "^{d}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
