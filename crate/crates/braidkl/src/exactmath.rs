//! Exact arithmetic foundation: arbitrary-precision integers and rationals,
//! univariate integer polynomials, and the combinatorial numbers used by the
//! enumeration and recursion engines. No floating point anywhere.

use std::fmt;
use std::ops::{Add, AddAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use num_bigint::BigInt as Int;
pub use num_rational::BigRational as Rat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MathError {
    #[error("double factorial undefined for {0} (need m >= -1)")]
    DoubleFactorialRange(i64),
    #[error("exact division failed: {0} is not divisible by {1}")]
    Indivisible(BigInt, BigInt),
}

/// Univariate polynomial with `BigInt` coefficients, stored densely by degree
/// with no trailing zeros. The zero polynomial has an empty coefficient list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPolynomial {
            coeffs: vec![BigInt::one()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `t^i` (zero beyond the stored degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPolynomial { coeffs }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Reverse the coefficient sequence in degree `d`: t^d * p(1/t).
    /// Requires `d >= deg(p)`.
    pub fn reverse_in_degree(&self, d: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); d + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[d - i] = c.clone();
        }
        Self::new(coeffs)
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + rhs.coeff(i));
        }
        IntPolynomial::new(coeffs)
    }
}

impl AddAssign<&IntPolynomial> for IntPolynomial {
    fn add_assign(&mut self, rhs: &IntPolynomial) {
        *self = &*self + rhs;
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
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
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    if i == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// True iff coefficient `i` equals coefficient `d - i` for all `0 <= i <= d`,
/// i.e. p(t) = t^d p(1/t) once p is viewed in degree `d`.
/// Requires `d >= deg(p)` or `p = 0`.
pub fn poly_is_palindromic(p: &IntPolynomial, d: usize) -> bool {
    debug_assert!(p.degree().is_none_or(|deg| deg <= d));
    (0..=d).all(|i| p.coeff(i) == p.coeff(d - i))
}

/// True iff the coefficients weakly rise and then weakly fall.
pub fn poly_is_unimodal(p: &IntPolynomial) -> bool {
    let cs = &p.coeffs;
    let mut i = 0;
    while i + 1 < cs.len() && cs[i] <= cs[i + 1] {
        i += 1;
    }
    while i + 1 < cs.len() && cs[i] >= cs[i + 1] {
        i += 1;
    }
    i + 1 >= cs.len()
}

pub fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Stirling number of the second kind: partitions of an n-set into k
/// nonempty blocks. Computed by the triangle recurrence
/// S(n,k) = k*S(n-1,k) + S(n-1,k-1).
pub fn stirling2(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    if n == 0 {
        return BigInt::one(); // k == 0 here
    }
    if k == 0 {
        return BigInt::zero();
    }
    let mut row = vec![BigInt::zero(); k + 1];
    row[0] = BigInt::one(); // S(0,0)
    for m in 1..=n {
        for j in (1..=k.min(m)).rev() {
            row[j] = BigInt::from(j) * &row[j] + &row[j - 1];
        }
        row[0] = BigInt::zero();
    }
    row[k].clone()
}

pub fn bell(n: usize) -> BigInt {
    (0..=n).map(|k| stirling2(n, k)).sum()
}

/// All set partitions of {0,..,n-1} as restricted growth strings:
/// assignment[i] is the block index of element i, blocks numbered by first
/// appearance. For n = 0 the single empty partition is returned.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut assign = Vec::with_capacity(n);
    fn go(assign: &mut Vec<usize>, n: usize, used: usize, out: &mut Vec<Vec<usize>>) {
        if assign.len() == n {
            out.push(assign.clone());
            return;
        }
        for b in 0..=used {
            assign.push(b);
            go(assign, n, used.max(b + 1), out);
            assign.pop();
        }
    }
    go(&mut assign, n, 0, &mut out);
    out
}

/// Product m(m-2)(m-4)... with the conventions (-1)!! = 1 and 0!! = 1.
pub fn double_factorial(m: i64) -> Result<BigInt, MathError> {
    if m < -1 {
        return Err(MathError::DoubleFactorialRange(m));
    }
    let mut acc = BigInt::one();
    let mut v = m;
    while v > 1 {
        acc *= BigInt::from(v);
        v -= 2;
    }
    Ok(acc)
}

/// b^e for a possibly negative exponent; a negative exponent is only legal
/// when b = 1 (these occur as 1^(-1) edge terms in the closed-form counts).
pub fn unit_safe_pow(base: &BigInt, exp: i64) -> Result<BigInt, MathError> {
    if exp < 0 {
        if base.is_one() {
            return Ok(BigInt::one());
        }
        return Err(MathError::Indivisible(base.clone(), BigInt::zero()));
    }
    Ok(num_traits::pow::pow(base.clone(), exp as usize))
}

/// Exact division, erroring when the quotient is not integral.
pub fn exact_div(num: &BigInt, den: &BigInt) -> Result<BigInt, MathError> {
    use num_integer::Integer;
    let (q, r) = num.div_rem(den);
    if r.is_zero() {
        Ok(q)
    } else {
        Err(MathError::Indivisible(num.clone(), den.clone()))
    }
}
