//! Truncated bivariate formal power series over the rationals and the
//! three-stage generating-function pipeline C(x,y) -> A(x,y) -> S(x,y):
//! connected, all, and simple counts of the quasi series-parallel family,
//! with coefficient extraction into exact integer polynomials.
//!
//! Series are truncated in x at a fixed order N; the coefficient of x^n is a
//! dense polynomial in y with `BigRational` entries, so y is carried as a
//! parameter through inversion and composition and no division by y occurs.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactmath::{factorial, IntPolynomial, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("truncation orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("constant term must be zero")]
    NonzeroConstantTerm,
    #[error("linear coefficient in x must be 1 for compositional inversion")]
    LinearCoefficientNotOne,
    #[error("coefficient of x^{n} y^{k} scaled by n! is not a nonnegative integer")]
    IntegralityViolation { n: usize, k: usize },
    #[error("x^{n} exceeds truncation order {order}")]
    OrderExceeded { n: usize, order: usize },
}

/// Dense univariate polynomial in y over the rationals; the coefficient ring
/// of [`BivariateSeries`]. Trailing zeros are trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RatPoly {
    coeffs: Vec<Rat>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        RatPoly {
            coeffs: vec![Rat::one()],
        }
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// The monomial y^k.
    pub fn y_pow(k: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = Rat::one();
        RatPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add(&self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }

    pub fn sub(&self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }

    pub fn mul(&self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        RatPoly::new(coeffs)
    }

    pub fn scale(&self, c: &Rat) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply by y.
    pub fn mul_y(&self) -> RatPoly {
        if self.is_zero() {
            return RatPoly::zero();
        }
        let mut coeffs = vec![Rat::zero()];
        coeffs.extend(self.coeffs.iter().cloned());
        RatPoly { coeffs }
    }

    /// Scale by n! and convert to an integer polynomial, checking that every
    /// scaled coefficient is integral.
    pub fn to_int_poly_scaled(&self, n: usize) -> Result<IntPolynomial, SeriesError> {
        let fact = Rat::from_integer(factorial(n));
        let mut cs = Vec::with_capacity(self.coeffs.len());
        for (k, c) in self.coeffs.iter().enumerate() {
            let v = c * &fact;
            if !v.is_integer() {
                return Err(SeriesError::IntegralityViolation { n, k });
            }
            cs.push(v.to_integer());
        }
        Ok(IntPolynomial::new(cs))
    }
}

/// Bivariate power series truncated at x^N, with y-polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariateSeries {
    order: usize,
    /// coeffs[n] is the coefficient of x^n; length is order + 1.
    coeffs: Vec<RatPoly>,
}

impl BivariateSeries {
    pub fn zero(order: usize) -> Self {
        BivariateSeries {
            order,
            coeffs: vec![RatPoly::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = RatPoly::one();
        s
    }

    /// The series x.
    pub fn x(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = RatPoly::one();
        }
        s
    }

    pub fn from_coeffs(order: usize, mut coeffs: Vec<RatPoly>) -> Self {
        coeffs.truncate(order + 1);
        coeffs.resize(order + 1, RatPoly::zero());
        BivariateSeries { order, coeffs }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient of x^n, as a polynomial in y.
    pub fn coeff_x(&self, n: usize) -> Result<&RatPoly, SeriesError> {
        self.coeffs.get(n).ok_or(SeriesError::OrderExceeded {
            n,
            order: self.order,
        })
    }

    /// Coefficient of x^n y^k.
    pub fn coeff(&self, n: usize, k: usize) -> Result<Rat, SeriesError> {
        Ok(self.coeff_x(n)?.coeff(k))
    }

    /// n! * [x^n y^k], asserting integrality.
    pub fn egf_count(&self, n: usize, k: usize) -> Result<BigInt, SeriesError> {
        let v = self.coeff(n, k)? * Rat::from_integer(factorial(n));
        if !v.is_integer() {
            return Err(SeriesError::IntegralityViolation { n, k });
        }
        Ok(v.to_integer())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.check_order(rhs)?;
        Ok(BivariateSeries {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.check_order(rhs)?;
        Ok(BivariateSeries {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.sub(b))
                .collect(),
        })
    }

    pub fn add_constant(&self, c: &RatPoly) -> Self {
        let mut s = self.clone();
        s.coeffs[0] = s.coeffs[0].add(c);
        s
    }

    /// Multiply every x-coefficient by the same y-polynomial.
    pub fn scale_poly(&self, p: &RatPoly) -> Self {
        BivariateSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c.mul(p)).collect(),
        }
    }

    fn check_order(&self, rhs: &Self) -> Result<(), SeriesError> {
        if self.order != rhs.order {
            return Err(SeriesError::OrderMismatch(self.order, rhs.order));
        }
        Ok(())
    }

    fn constant_is_zero(&self) -> bool {
        self.coeffs[0].is_zero()
    }
}

impl fmt::Display for BivariateSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let terms: Vec<String> = c
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(k, v)| format!("{v}*y^{k}"))
                .collect();
            writeln!(f, "x^{n}: {}", terms.join(" + "))?;
        }
        Ok(())
    }
}

/// Product of two series with equal truncation orders.
pub fn series_mul(f: &BivariateSeries, g: &BivariateSeries) -> Result<BivariateSeries, SeriesError> {
    f.check_order(g)?;
    let order = f.order;
    let mut coeffs = vec![RatPoly::zero(); order + 1];
    for i in 0..=order {
        if f.coeffs[i].is_zero() {
            continue;
        }
        for j in 0..=order - i {
            if g.coeffs[j].is_zero() {
                continue;
            }
            coeffs[i + j] = coeffs[i + j].add(&f.coeffs[i].mul(&g.coeffs[j]));
        }
    }
    Ok(BivariateSeries { order, coeffs })
}

/// exp(f) for a series with zero constant term, by the recurrence
/// n*h_n = sum_{k=1..n} k f_k h_{n-k} coming from h' = f' h.
pub fn series_exp(f: &BivariateSeries) -> Result<BivariateSeries, SeriesError> {
    if !f.constant_is_zero() {
        return Err(SeriesError::NonzeroConstantTerm);
    }
    let order = f.order;
    let mut h = vec![RatPoly::zero(); order + 1];
    h[0] = RatPoly::one();
    for n in 1..=order {
        let mut acc = RatPoly::zero();
        for k in 1..=n {
            if f.coeffs[k].is_zero() {
                continue;
            }
            let term = f.coeffs[k].mul(&h[n - k]).scale(&Rat::from_integer(k.into()));
            acc = acc.add(&term);
        }
        h[n] = acc.scale(&Rat::new(BigInt::one(), n.into()));
    }
    Ok(BivariateSeries { order, coeffs: h })
}

/// log(1+g) for a series g with zero constant term, by the recurrence
/// n*h_n = n*g_n - sum_{k=1..n-1} k h_k g_{n-k} coming from (1+g) h' = g'.
pub fn log_one_plus(g: &BivariateSeries) -> Result<BivariateSeries, SeriesError> {
    if !g.constant_is_zero() {
        return Err(SeriesError::NonzeroConstantTerm);
    }
    let order = g.order;
    let mut h = vec![RatPoly::zero(); order + 1];
    for n in 1..=order {
        let mut acc = g.coeffs[n].scale(&Rat::from_integer(n.into()));
        for k in 1..n {
            if h[k].is_zero() || g.coeffs[n - k].is_zero() {
                continue;
            }
            acc = acc.sub(&h[k].mul(&g.coeffs[n - k]).scale(&Rat::from_integer(k.into())));
        }
        h[n] = acc.scale(&Rat::new(BigInt::one(), n.into()));
    }
    Ok(BivariateSeries { order, coeffs: h })
}

/// Termwise antiderivative in x with zero constant term. The result is kept
/// at the same truncation order, so the information in the top input
/// coefficient (which would land at x^(N+1)) is dropped.
pub fn integrate_x(f: &BivariateSeries) -> BivariateSeries {
    let order = f.order;
    let mut coeffs = vec![RatPoly::zero(); order + 1];
    for n in 1..=order {
        coeffs[n] = f.coeffs[n - 1].scale(&Rat::new(BigInt::one(), n.into()));
    }
    BivariateSeries { order, coeffs }
}

/// Termwise derivative in x; the top coefficient of the result is unknown at
/// this truncation order and is left zero.
pub fn derivative_x(f: &BivariateSeries) -> BivariateSeries {
    let order = f.order;
    let mut coeffs = vec![RatPoly::zero(); order + 1];
    for n in 0..order {
        coeffs[n] = f.coeffs[n + 1].scale(&Rat::from_integer((n + 1).into()));
    }
    BivariateSeries { order, coeffs }
}

/// f(g(x), y) for g with zero constant term, by Horner evaluation in x.
pub fn compose_x(
    f: &BivariateSeries,
    g: &BivariateSeries,
) -> Result<BivariateSeries, SeriesError> {
    f.check_order(g)?;
    if !g.constant_is_zero() {
        return Err(SeriesError::NonzeroConstantTerm);
    }
    let order = f.order;
    let mut acc = BivariateSeries::zero(order);
    for n in (0..=order).rev() {
        acc = series_mul(&acc, g)?;
        acc.coeffs[0] = acc.coeffs[0].add(&f.coeffs[n]);
    }
    Ok(acc)
}

/// Reciprocal of a series whose constant term is the polynomial 1.
fn series_reciprocal(u: &BivariateSeries) -> Result<BivariateSeries, SeriesError> {
    if u.coeffs[0] != RatPoly::one() {
        return Err(SeriesError::NonzeroConstantTerm);
    }
    let order = u.order;
    let mut r = vec![RatPoly::zero(); order + 1];
    r[0] = RatPoly::one();
    for n in 1..=order {
        let mut acc = RatPoly::zero();
        for k in 1..=n {
            if u.coeffs[k].is_zero() {
                continue;
            }
            acc = acc.add(&u.coeffs[k].mul(&r[n - k]));
        }
        r[n] = RatPoly::zero().sub(&acc);
    }
    Ok(BivariateSeries { order, coeffs: r })
}

/// Compositional inverse in x of f = x + O(x^2), treating y as a parameter.
/// Newton iteration g <- g - (f(g) - x) / f'(g), doubling the number of
/// correct coefficients each step.
pub fn compositional_inverse_x(f: &BivariateSeries) -> Result<BivariateSeries, SeriesError> {
    if !f.constant_is_zero() || f.coeffs.get(1).cloned() != Some(RatPoly::one()) {
        return Err(SeriesError::LinearCoefficientNotOne);
    }
    let order = f.order;
    let x = BivariateSeries::x(order);
    let fp = derivative_x(f);
    let mut g = x.clone();
    let mut correct = 1usize;
    while correct < order {
        let fg = compose_x(f, &g)?;
        let fpg = compose_x(&fp, &g)?;
        let update = series_mul(&fg.sub(&x)?, &series_reciprocal(&fpg)?)?;
        g = g.sub(&update)?;
        correct = (correct * 2).min(order);
    }
    Ok(g)
}

/// (1/y) log(1+xy) expanded symbolically as sum_m (-1)^(m+1) y^(m-1) x^m / m,
/// so the coefficient ring stays polynomial in y.
fn log_one_plus_xy_over_y(order: usize) -> BivariateSeries {
    let mut coeffs = vec![RatPoly::zero(); order + 1];
    for m in 1..=order {
        let sign = if m % 2 == 1 { 1 } else { -1 };
        coeffs[m] = RatPoly::y_pow(m - 1).scale(&Rat::new(BigInt::from(sign), m.into()));
    }
    BivariateSeries { order, coeffs }
}

/// The function phi(x,y) = (1/y) log(1+xy) + log(1+x) - x whose compositional
/// inverse drives the connected-count series.
pub fn inner_function(order: usize) -> Result<BivariateSeries, SeriesError> {
    let x = BivariateSeries::x(order);
    let part1 = log_one_plus_xy_over_y(order);
    let part2 = log_one_plus(&x)?;
    part1.add(&part2)?.sub(&x)
}

/// C(x,y): exponential generating function of connected series-parallel
/// matroids by ground-set size (x) and rank (y).
/// C = x(y+1) + y * integral of the compositional inverse of phi.
pub fn build_c(order: usize) -> Result<BivariateSeries, SeriesError> {
    let phi = inner_function(order)?;
    let inv = compositional_inverse_x(&phi)?;
    let integral = integrate_x(&inv);
    let mut c = integral.scale_poly(&RatPoly::y_pow(1));
    // the two single-element matroids enter as the correction term x(y+1)
    c.coeffs[1] = c.coeffs[1].add(&RatPoly::new(vec![Rat::one(), Rat::one()]));
    Ok(c)
}

/// A(x,y) = exp(C(x,y)): all quasi series-parallel matroids.
pub fn build_a(order: usize) -> Result<BivariateSeries, SeriesError> {
    series_exp(&build_c(order)?)
}

/// S(x,y) = A(log(x+1), y)/(x+1) - 1: simple quasi series-parallel matroids.
/// Every n! [x^n y^k] coefficient is checked to be a nonnegative integer;
/// a violation signals a pipeline bug upstream.
pub fn build_s(order: usize) -> Result<BivariateSeries, SeriesError> {
    let a = build_a(order)?;
    build_s_from_a(&a)
}

pub fn build_s_from_a(a: &BivariateSeries) -> Result<BivariateSeries, SeriesError> {
    let order = a.order;
    let lg = log_one_plus(&BivariateSeries::x(order))?;
    let composed = compose_x(a, &lg)?;
    let mut one_plus_x = BivariateSeries::one(order);
    if order >= 1 {
        one_plus_x.coeffs[1] = RatPoly::one();
    }
    let s = series_mul(&series_reciprocal(&one_plus_x)?, &composed)?
        .sub(&BivariateSeries::one(order))?;
    for n in 0..=order {
        let fact = Rat::from_integer(factorial(n));
        for (k, c) in s.coeffs[n].coeffs.iter().enumerate() {
            let v = c * &fact;
            if !v.is_integer() || v.is_negative() {
                return Err(SeriesError::IntegralityViolation { n, k });
            }
        }
    }
    Ok(s)
}

/// Z-polynomial of the braid matroid on n+1 vertices, read off as n! [x^n] A.
pub fn z_poly_from_a(a: &BivariateSeries, n: usize) -> Result<IntPolynomial, SeriesError> {
    a.coeff_x(n)?.to_int_poly_scaled(n)
}

/// Kazhdan-Lusztig polynomial of the braid matroid on n+1 vertices: the
/// coefficient sequence of n! [x^n] S reversed in degree n, since
/// n! [x^n] S = y^n P(1/y). For n = 0 the matroid is empty and P = 1.
pub fn kl_poly_from_s(s: &BivariateSeries, n: usize) -> Result<IntPolynomial, SeriesError> {
    if n == 0 {
        return Ok(IntPolynomial::one());
    }
    let q = s.coeff_x(n)?.to_int_poly_scaled(n)?;
    Ok(q.reverse_in_degree(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::poly_is_palindromic;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    fn geometric_alternating(order: usize) -> BivariateSeries {
        // 1 - x + x^2 - ...
        BivariateSeries::from_coeffs(
            order,
            (0..=order)
                .map(|n| RatPoly::constant(rat(if n % 2 == 0 { 1 } else { -1 }, 1)))
                .collect(),
        )
    }

    fn one_plus_x(order: usize) -> BivariateSeries {
        BivariateSeries::one(order)
            .add(&BivariateSeries::x(order))
            .unwrap()
    }

    #[test]
    fn mul_examples() {
        let n = 6;
        let prod = series_mul(&one_plus_x(n), &geometric_alternating(n)).unwrap();
        assert_eq!(prod, BivariateSeries::one(n));

        let f = build_c(4).unwrap();
        assert_eq!(series_mul(&f, &BivariateSeries::one(4)).unwrap(), f);

        let x2 = series_mul(&BivariateSeries::x(2), &BivariateSeries::x(2)).unwrap();
        assert_eq!(x2.coeff(2, 0).unwrap(), rat(1, 1));
        let x1 = series_mul(&BivariateSeries::x(1), &BivariateSeries::x(1)).unwrap();
        assert_eq!(x1, BivariateSeries::zero(1));

        assert_eq!(
            series_mul(&BivariateSeries::x(1), &BivariateSeries::x(2)),
            Err(SeriesError::OrderMismatch(1, 2))
        );
    }

    #[test]
    fn exp_examples() {
        let n = 5;
        assert_eq!(
            series_exp(&BivariateSeries::zero(n)).unwrap(),
            BivariateSeries::one(n)
        );
        let e = series_exp(&BivariateSeries::x(n)).unwrap();
        assert_eq!(e.coeff(2, 0).unwrap(), rat(1, 2));
        assert_eq!(e.coeff(5, 0).unwrap(), rat(1, 120));
        assert_eq!(
            series_exp(&BivariateSeries::one(n)),
            Err(SeriesError::NonzeroConstantTerm)
        );
    }

    #[test]
    fn log_examples() {
        let n = 5;
        let lg = log_one_plus(&BivariateSeries::x(n)).unwrap();
        assert_eq!(lg.coeff(2, 0).unwrap(), rat(-1, 2));
        assert_eq!(lg.coeff(3, 0).unwrap(), rat(1, 3));
        assert_eq!(
            log_one_plus(&BivariateSeries::zero(n)).unwrap(),
            BivariateSeries::zero(n)
        );
        // exp and log are inverse
        let roundtrip = series_exp(&lg).unwrap();
        assert_eq!(roundtrip, one_plus_x(n));
    }

    #[test]
    fn inner_function_low_order_coefficients() {
        // phi = x - (y+1)x^2/2 + (y^2+1)x^3/3 - ..., expanded by hand
        let phi = inner_function(4).unwrap();
        assert_eq!(phi.coeff(0, 0).unwrap(), rat(0, 1));
        assert_eq!(phi.coeff(1, 0).unwrap(), rat(1, 1));
        assert_eq!(phi.coeff(2, 0).unwrap(), rat(-1, 2));
        assert_eq!(phi.coeff(2, 1).unwrap(), rat(-1, 2));
        assert_eq!(phi.coeff(3, 0).unwrap(), rat(1, 3));
        assert_eq!(phi.coeff(3, 1).unwrap(), rat(0, 1));
        assert_eq!(phi.coeff(3, 2).unwrap(), rat(1, 3));
    }

    #[test]
    fn inverse_matches_reference_expansion() {
        // inverse of phi: x + (y+1)x^2/2! + (y^2+6y+1)x^3/3! + (y^3+25y^2+25y+1)x^4/4! + ...
        let inv = compositional_inverse_x(&inner_function(8).unwrap()).unwrap();
        assert_eq!(inv.coeff(1, 0).unwrap(), rat(1, 1));
        assert_eq!(inv.coeff(2, 0).unwrap(), rat(1, 2));
        assert_eq!(inv.coeff(2, 1).unwrap(), rat(1, 2));
        assert_eq!(inv.coeff(3, 0).unwrap(), rat(1, 6));
        assert_eq!(inv.coeff(3, 1).unwrap(), rat(1, 1));
        assert_eq!(inv.coeff(3, 2).unwrap(), rat(1, 6));
        assert_eq!(inv.coeff(4, 0).unwrap(), rat(1, 24));
        assert_eq!(inv.coeff(4, 1).unwrap(), rat(25, 24));
        assert_eq!(inv.coeff(4, 2).unwrap(), rat(25, 24));
        assert_eq!(inv.coeff(4, 3).unwrap(), rat(1, 24));
    }

    #[test]
    fn inverse_of_x_is_x() {
        let g = compositional_inverse_x(&BivariateSeries::x(6)).unwrap();
        assert_eq!(g, BivariateSeries::x(6));
        assert_eq!(
            compositional_inverse_x(&BivariateSeries::one(3)),
            Err(SeriesError::LinearCoefficientNotOne)
        );
    }

    #[test]
    fn inverse_round_trip_on_pipeline_input() {
        let phi = inner_function(10).unwrap();
        let inv = compositional_inverse_x(&phi).unwrap();
        let x = BivariateSeries::x(10);
        assert_eq!(compose_x(&phi, &inv).unwrap(), x);
        assert_eq!(compose_x(&inv, &phi).unwrap(), x);
    }

    #[test]
    fn integrate_examples() {
        let n = 6;
        let int_one = integrate_x(&BivariateSeries::one(n));
        assert_eq!(int_one.coeff(1, 0).unwrap(), rat(1, 1));
        let int_x = integrate_x(&BivariateSeries::x(n));
        assert_eq!(int_x.coeff(2, 0).unwrap(), rat(1, 2));
        // x^5 coefficient of the integrated inverse: (y^3+25y^2+25y+1)/5!
        let inv = compositional_inverse_x(&inner_function(6).unwrap()).unwrap();
        let integral = integrate_x(&inv);
        assert_eq!(integral.coeff(5, 0).unwrap(), rat(1, 120));
        assert_eq!(integral.coeff(5, 1).unwrap(), rat(25, 120));
        assert_eq!(integral.coeff(5, 2).unwrap(), rat(25, 120));
        assert_eq!(integral.coeff(5, 3).unwrap(), rat(1, 120));
    }

    #[test]
    fn compose_examples() {
        let f = build_c(6).unwrap();
        assert_eq!(compose_x(&f, &BivariateSeries::x(6)).unwrap(), f);
        // exp(log(1+x)) = 1 + x
        let lg = log_one_plus(&BivariateSeries::x(8)).unwrap();
        let e = series_exp(&BivariateSeries::x(8)).unwrap();
        assert_eq!(compose_x(&e, &lg).unwrap(), one_plus_x(8));
        assert_eq!(
            compose_x(&f, &BivariateSeries::one(6)),
            Err(SeriesError::NonzeroConstantTerm)
        );
    }

    #[test]
    fn c_series_table_values() {
        let c = build_c(8).unwrap();
        assert_eq!(c.egf_count(4, 2).unwrap(), BigInt::from(6));
        assert_eq!(c.egf_count(6, 3).unwrap(), BigInt::from(290));
        assert_eq!(c.egf_count(1, 0).unwrap(), BigInt::from(1));
        assert_eq!(c.egf_count(1, 1).unwrap(), BigInt::from(1));
        assert_eq!(c.egf_count(7, 3).unwrap(), BigInt::from(2450));
        assert_eq!(c.egf_count(5, 2).unwrap(), BigInt::from(25));
    }

    #[test]
    fn a_series_table_values() {
        let a = build_a(8).unwrap();
        assert_eq!(a.egf_count(4, 2).unwrap(), BigInt::from(35));
        assert_eq!(a.egf_count(7, 3).unwrap(), BigInt::from(10941));
        for n in 0..=8 {
            assert_eq!(a.egf_count(n, n).unwrap(), BigInt::from(1), "diagonal n={n}");
        }
        assert_eq!(a.egf_count(2, 0).unwrap(), BigInt::from(1));
        // coefficient of x in A is 1 + y
        assert_eq!(a.coeff(1, 0).unwrap(), rat(1, 1));
        assert_eq!(a.coeff(1, 1).unwrap(), rat(1, 1));
    }

    #[test]
    fn s_series_table_values() {
        let s = build_s(8).unwrap();
        assert_eq!(s.egf_count(5, 3).unwrap(), BigInt::from(15));
        assert_eq!(s.egf_count(7, 4).unwrap(), BigInt::from(735));
        assert_eq!(s.egf_count(8, 5).unwrap(), BigInt::from(16065));
        assert_eq!(s.egf_count(3, 2).unwrap(), BigInt::from(1));
        // coefficient of x in S is y
        assert_eq!(s.coeff(1, 0).unwrap(), rat(0, 1));
        assert_eq!(s.coeff(1, 1).unwrap(), rat(1, 1));
    }

    #[test]
    fn a_coefficients_palindromic_in_y() {
        let a = build_a(10).unwrap();
        for n in 0..=10 {
            let p = z_poly_from_a(&a, n).unwrap();
            assert!(poly_is_palindromic(&p, n), "n = {n}");
        }
    }

    #[test]
    fn z_poly_examples() {
        let a = build_a(6).unwrap();
        assert_eq!(z_poly_from_a(&a, 2).unwrap(), IntPolynomial::from_i64(&[1, 3, 1]));
        assert_eq!(z_poly_from_a(&a, 0).unwrap(), IntPolynomial::one());
        assert_eq!(
            z_poly_from_a(&a, 3).unwrap(),
            IntPolynomial::from_i64(&[1, 7, 7, 1])
        );
    }

    #[test]
    fn kl_poly_examples() {
        let s = build_s(8).unwrap();
        assert_eq!(kl_poly_from_s(&s, 3).unwrap(), IntPolynomial::from_i64(&[1, 1]));
        assert_eq!(kl_poly_from_s(&s, 0).unwrap(), IntPolynomial::one());
        assert_eq!(
            kl_poly_from_s(&s, 7).unwrap(),
            IntPolynomial::from_i64(&[1, 99, 1225, 735])
        );
    }

    /// Lagrange inversion as an independent oracle: for f = x*u(x) with
    /// u(0) = 1, the inverse g satisfies g_n = (1/n) [x^(n-1)] u(x)^(-n).
    /// Implemented here on raw coefficient tables, independent of the
    /// Newton-iteration path.
    mod lagrange_oracle {
        use super::*;

        type Table = Vec<Vec<Rat>>; // table[n][k] = coefficient of x^n y^k

        fn tab_mul(a: &Table, b: &Table, order: usize) -> Table {
            let mut out = vec![vec![Rat::zero()]; order + 1];
            for i in 0..=order {
                for j in 0..=order - i {
                    for (ka, va) in a[i].iter().enumerate() {
                        if va.is_zero() {
                            continue;
                        }
                        for (kb, vb) in b[j].iter().enumerate() {
                            if vb.is_zero() {
                                continue;
                            }
                            let row = &mut out[i + j];
                            if row.len() <= ka + kb {
                                row.resize(ka + kb + 1, Rat::zero());
                            }
                            row[ka + kb] += va * vb;
                        }
                    }
                }
            }
            out
        }

        fn tab_recip(u: &Table, order: usize) -> Table {
            // u[0] must be the constant 1
            let mut r = vec![vec![Rat::zero()]; order + 1];
            r[0] = vec![Rat::one()];
            for n in 1..=order {
                let mut acc: Vec<Rat> = vec![Rat::zero()];
                for k in 1..=n {
                    for (ka, va) in u[k].iter().enumerate() {
                        if va.is_zero() {
                            continue;
                        }
                        for (kb, vb) in r[n - k].iter().enumerate() {
                            if vb.is_zero() {
                                continue;
                            }
                            if acc.len() <= ka + kb {
                                acc.resize(ka + kb + 1, Rat::zero());
                            }
                            acc[ka + kb] += va * vb;
                        }
                    }
                }
                r[n] = acc.into_iter().map(|v| -v).collect();
            }
            r
        }

        pub fn inverse_coeff(f: &BivariateSeries, n: usize, order: usize) -> Vec<Rat> {
            // u = f / x
            let u: Table = (0..=order)
                .map(|m| {
                    let p = f.coeff_x(m + 1).cloned().unwrap_or_default();
                    (0..=p.degree().map_or(0, |d| d))
                        .map(|k| p.coeff(k))
                        .collect()
                })
                .collect();
            let uinv = tab_recip(&u, order);
            let mut pow = vec![vec![Rat::zero()]; order + 1];
            pow[0] = vec![Rat::one()];
            for _ in 0..n {
                pow = tab_mul(&pow, &uinv, order);
            }
            pow[n - 1]
                .iter()
                .map(|v| v / Rat::from_integer(n.into()))
                .collect()
        }
    }

    #[test]
    fn newton_agrees_with_lagrange_inversion() {
        let order = 8;
        let phi = inner_function(order + 1).unwrap();
        let newton = compositional_inverse_x(&phi).unwrap();
        for n in 1..=order {
            let lag = lagrange_oracle::inverse_coeff(&phi, n, order);
            let got = newton.coeff_x(n).unwrap();
            for k in 0..lag.len().max(got.degree().map_or(0, |d| d + 1)) {
                assert_eq!(
                    got.coeff(k),
                    lag.get(k).cloned().unwrap_or_else(Rat::zero),
                    "x^{n} y^{k}"
                );
            }
        }
    }

    #[test]
    fn pipeline_counts_are_nonnegative_integers() {
        let order = 12;
        let c = build_c(order).unwrap();
        let a = build_a(order).unwrap();
        let s = build_s(order).unwrap();
        for series in [&c, &a, &s] {
            for n in 0..=order {
                let p = series.coeff_x(n).unwrap();
                for k in 0..=p.degree().unwrap_or(0) {
                    let v = series.egf_count(n, k).unwrap();
                    assert!(!v.is_negative());
                }
                // rank never exceeds ground-set size
                assert!(p.degree().is_none_or(|d| d <= n));
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_unit_series(order: usize) -> impl Strategy<Value = BivariateSeries> {
            // f = x + sum_{m>=2} c_m x^m with small integer y-polynomials c_m
            proptest::collection::vec(
                proptest::collection::vec(-3i64..=3, 0..3),
                order.saturating_sub(1),
            )
            .prop_map(move |rows| {
                let mut coeffs = vec![RatPoly::zero(); order + 1];
                coeffs[1] = RatPoly::one();
                for (i, row) in rows.into_iter().enumerate() {
                    coeffs[i + 2] =
                        RatPoly::new(row.into_iter().map(|v| Rat::from_integer(v.into())).collect());
                }
                BivariateSeries::from_coeffs(order, coeffs)
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn inverse_round_trip(f in arb_unit_series(6)) {
                let g = compositional_inverse_x(&f).unwrap();
                let x = BivariateSeries::x(6);
                prop_assert_eq!(compose_x(&f, &g).unwrap(), x.clone());
                prop_assert_eq!(compose_x(&g, &f).unwrap(), x);
            }

            #[test]
            fn exp_log_round_trip(f in arb_unit_series(6)) {
                let e = series_exp(&f).unwrap();
                let minus_one = e.sub(&BivariateSeries::one(6)).unwrap();
                prop_assert_eq!(log_one_plus(&minus_one).unwrap(), f);
            }
        }
    }
}
