use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always stored reduced with a
/// positive denominator (num-rational maintains both invariants).
pub type Rational = BigRational;

/// Shorthand constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Element a + b*sqrt(2) of the real quadratic field Q(sqrt 2).
///
/// The representation is unique because sqrt(2) is irrational, so equality
/// is plain componentwise equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QSqrt2 {
    a: Rational,
    b: Rational,
}

impl QSqrt2 {
    pub fn new(a: Rational, b: Rational) -> Self {
        Self { a, b }
    }

    pub fn from_rational(a: Rational) -> Self {
        Self { a, b: Rational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n, 1))
    }

    /// a + b*sqrt(2) from small integer fractions.
    pub fn from_parts(a_num: i64, a_den: i64, b_num: i64, b_den: i64) -> Self {
        Self::new(rat(a_num, a_den), rat(b_num, b_den))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn sqrt2() -> Self {
        Self::new(Rational::zero(), rat(1, 1))
    }

    /// Rational part a.
    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    /// Coefficient b of sqrt(2).
    pub fn sqrt2_part(&self) -> &Rational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate a - b*sqrt(2).
    pub fn galois_conj(&self) -> Self {
        Self::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm a^2 - 2 b^2; zero exactly when the element is zero.
    pub fn field_norm(&self) -> Rational {
        &self.a * &self.a - rat(2, 1) * &self.b * &self.b
    }

    /// Multiplicative inverse; division by zero is a domain error.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("division by zero in Q(sqrt 2)".into()));
        }
        let n = self.field_norm();
        Ok(Self::new(&self.a / &n, -&self.b / &n))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * 2f64.sqrt()
    }
}

impl Add for &QSqrt2 {
    type Output = QSqrt2;
    fn add(self, rhs: &QSqrt2) -> QSqrt2 {
        QSqrt2::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Sub for &QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, rhs: &QSqrt2) -> QSqrt2 {
        QSqrt2::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Mul for &QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, rhs: &QSqrt2) -> QSqrt2 {
        // (a1 + b1 s)(a2 + b2 s) = a1 a2 + 2 b1 b2 + (a1 b2 + b1 a2) s.
        QSqrt2::new(
            &self.a * &rhs.a + rat(2, 1) * &self.b * &rhs.b,
            &self.a * &rhs.b + &self.b * &rhs.a,
        )
    }
}

impl Neg for &QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2::new(-self.a.clone(), -self.b.clone())
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for QSqrt2 {
            type Output = QSqrt2;
            fn $method(self, rhs: QSqrt2) -> QSqrt2 {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&QSqrt2> for QSqrt2 {
            type Output = QSqrt2;
            fn $method(self, rhs: &QSqrt2) -> QSqrt2 {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        -&self
    }
}

impl fmt::Display for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let bmag = self.b.abs();
        let s = if bmag == rat(1, 1) { "sqrt2".to_string() } else { format!("{bmag}*sqrt2") };
        if self.a.is_zero() {
            if self.b.is_negative() {
                write!(f, "-{s}")
            } else {
                write!(f, "{s}")
            }
        } else if self.b.is_negative() {
            write!(f, "{} - {s}", self.a)
        } else {
            write!(f, "{} + {s}", self.a)
        }
    }
}

/// Exact determinant by fraction-free Bareiss elimination. Works for any
/// square matrix over Q(sqrt 2); every interior division is exact.
pub fn bareiss_det(mat: &[Vec<QSqrt2>]) -> Result<QSqrt2> {
    let n = mat.len();
    if mat.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidInput("determinant needs a square matrix".into()));
    }
    if n == 0 {
        return Ok(QSqrt2::one());
    }
    let mut m = mat.to_vec();
    let mut sign_flip = false;
    let mut prev = QSqrt2::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Ok(QSqrt2::zero());
            };
            m.swap(k, p);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.checked_div(&prev)?;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if sign_flip { -det } else { det })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_elem(rng: &mut ChaCha8Rng) -> QSqrt2 {
        QSqrt2::new(
            rat(rng.random_range(-20..20), rng.random_range(1..9)),
            rat(rng.random_range(-20..20), rng.random_range(1..9)),
        )
    }

    #[test]
    fn field_axioms_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let u = random_elem(&mut rng);
            let v = random_elem(&mut rng);
            let w = random_elem(&mut rng);
            assert_eq!(&(&u + &v) + &w, &u + &(&v + &w));
            assert_eq!(&(&u * &v) * &w, &u * &(&v * &w));
            assert_eq!(&u * &(&v + &w), &(&u * &v) + &(&u * &w));
            assert_eq!(&u + &v, &v + &u);
            assert_eq!(&u * &v, &v * &u);
            if !v.is_zero() {
                let q = u.checked_div(&v).unwrap();
                assert_eq!(&q * &v, u);
            }
        }
    }

    #[test]
    fn inverse_formula() {
        // 1 / (1 + sqrt2) = sqrt2 - 1.
        let x = QSqrt2::from_parts(1, 1, 1, 1);
        assert_eq!(x.inv().unwrap(), QSqrt2::from_parts(-1, 1, 1, 1));
        assert!(QSqrt2::zero().inv().is_err());
    }

    #[test]
    fn cube_of_sqrt2_minus_one() {
        // (sqrt2 - 1)^3 = 5 sqrt2 - 7.
        let x = QSqrt2::from_parts(-1, 1, 1, 1);
        assert_eq!(x.pow(3), QSqrt2::from_parts(-7, 1, 5, 1));
    }

    #[test]
    fn galois_and_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let u = random_elem(&mut rng);
            let n = u.field_norm();
            assert_eq!(&u * &u.galois_conj(), QSqrt2::from_rational(n.clone()));
            assert_eq!(n.is_zero(), u.is_zero());
        }
    }

    #[test]
    fn display_forms() {
        assert_eq!(QSqrt2::from_parts(17, 7, -8, 7).to_string(), "17/7 - 8/7*sqrt2");
        assert_eq!(QSqrt2::from_int(5).to_string(), "5");
        assert_eq!(QSqrt2::sqrt2().to_string(), "sqrt2");
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..30 {
            let n = rng.random_range(1..=4);
            let m: Vec<Vec<QSqrt2>> =
                (0..n).map(|_| (0..n).map(|_| random_elem(&mut rng)).collect()).collect();
            let det = bareiss_det(&m).unwrap();
            assert_eq!(det, naive_det(&m));
        }
    }

    #[test]
    fn bareiss_singular_is_zero() {
        let row = vec![QSqrt2::from_int(1), QSqrt2::sqrt2()];
        let m = vec![row.clone(), row];
        assert!(bareiss_det(&m).unwrap().is_zero());
    }

    fn naive_det(m: &[Vec<QSqrt2>]) -> QSqrt2 {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = QSqrt2::zero();
        for j in 0..n {
            let minor: Vec<Vec<QSqrt2>> = (1..n)
                .map(|i| (0..n).filter(|&k| k != j).map(|k| m[i][k].clone()).collect())
                .collect();
            let term = &m[0][j] * &naive_det(&minor);
            acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }
}
