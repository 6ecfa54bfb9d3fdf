//! Rational generating functions with denominator `(1-t)^(q+1)` for counting
//! sequences given by positive-part expressions, via Eulerian polynomials.
//!
//! For a term with shifts `n_1 <= ... <= n_r`, substituting `p = n - n_r`
//! turns the product into `p (p + d_1) ... (p + d_{r-1})` with
//! `d_i = n_r - n_i >= 0`, whose expansion has the elementary symmetric
//! functions of the `d_i` as coefficients. Summing `p^j` against
//! `A_j(t)/(1-t)^(j+1)` gives the generating function
//! `t^{n_r} sum_j s_{r-j} A_j(t)/(1-t)^(j+1)`, all positive coefficients.

use std::fmt;

use thiserror::Error;

use crate::pluspoly::{add_i128, mul_i128, DensePolynomial, PlusTerm, PluspartExpression};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenfuncError {
    #[error("term has {shifts} shifts but the denominator exponent allows at most {max}")]
    TooManyShifts { shifts: usize, max: usize },
    #[error("generating functions require nonnegative shifts, got {0}")]
    NegativeShift(i64),
    #[error("series coefficient of t^{index} is not divisible by {divisor}")]
    NonIntegerSeries { index: usize, divisor: i128 },
}

/// The Eulerian polynomial `A_j(t)`, the numerator of `sum_n n^j t^n` over
/// `(1-t)^(j+1)`. Coefficients are palindromic and sum to `j!`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerianPolynomial(DensePolynomial);

impl EulerianPolynomial {
    pub fn coefficients(&self) -> &[i128] {
        self.0.coefficients()
    }

    pub fn as_polynomial(&self) -> &DensePolynomial {
        &self.0
    }
}

/// Exact Eulerian polynomial by the standard triangle recurrence
/// `E(j, k) = (k+1) E(j-1, k) + (j-k) E(j-1, k-1)`.
pub fn eulerian(j: usize) -> EulerianPolynomial {
    if j == 0 {
        return EulerianPolynomial(DensePolynomial::constant(1));
    }
    let mut row = vec![1i128]; // E(1, 0)
    for n in 2..=j {
        let mut next = vec![0i128; n];
        for (k, slot) in next.iter_mut().enumerate() {
            let a = row.get(k).copied().unwrap_or(0);
            let b = if k == 0 { 0 } else { row[k - 1] };
            *slot = add_i128(mul_i128(a, (k + 1) as i128), mul_i128(b, (n - k) as i128));
        }
        row = next;
    }
    let mut coeffs = vec![0i128];
    coeffs.extend(row);
    EulerianPolynomial(DensePolynomial::new(coeffs))
}

/// Numerator over the fixed denominator `(1-t)^denominator_exponent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalCountSeries {
    numerator: DensePolynomial,
    denominator_exponent: usize,
}

impl RationalCountSeries {
    pub fn new(numerator: DensePolynomial, denominator_exponent: usize) -> RationalCountSeries {
        RationalCountSeries {
            numerator,
            denominator_exponent,
        }
    }

    pub fn numerator(&self) -> &DensePolynomial {
        &self.numerator
    }

    pub fn denominator_exponent(&self) -> usize {
        self.denominator_exponent
    }

    /// First `count` power-series coefficients, exactly. Multiplying by
    /// `1/(1-t)` is a running prefix sum, applied `denominator_exponent` times.
    pub fn series(&self, count: usize) -> Vec<i128> {
        let mut out = vec![0i128; count];
        for (i, &c) in self.numerator.coefficients().iter().enumerate() {
            if i >= count {
                break;
            }
            out[i] = c;
        }
        for _ in 0..self.denominator_exponent {
            for i in 1..count {
                out[i] = add_i128(out[i], out[i - 1]);
            }
        }
        out
    }

    /// Divides the numerator by an integer, erroring if any coefficient
    /// (equivalently any series coefficient) would be fractional.
    pub fn divide_exact(&self, divisor: i128) -> Result<RationalCountSeries, GenfuncError> {
        assert!(divisor != 0, "divisor must be nonzero");
        let mut coeffs = Vec::with_capacity(self.numerator.coefficients().len());
        for (index, &c) in self.numerator.coefficients().iter().enumerate() {
            if c % divisor != 0 {
                return Err(GenfuncError::NonIntegerSeries { index, divisor });
            }
            coeffs.push(c / divisor);
        }
        Ok(RationalCountSeries {
            numerator: DensePolynomial::new(coeffs),
            denominator_exponent: self.denominator_exponent,
        })
    }
}

impl fmt::Display for RationalCountSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.numerator.format_var('t');
        let needs_parens = self
            .numerator
            .coefficients()
            .iter()
            .filter(|&&c| c != 0)
            .count()
            > 1;
        if needs_parens {
            write!(f, "({num})/(1-t)^{}", self.denominator_exponent)
        } else {
            write!(f, "{num}/(1-t)^{}", self.denominator_exponent)
        }
    }
}

fn one_minus_t_pow(k: usize) -> DensePolynomial {
    let mut p = DensePolynomial::constant(1);
    let base = DensePolynomial::new(vec![1, -1]);
    for _ in 0..k {
        p = p.multiply(&base);
    }
    p
}

fn elementary_symmetric(values: &[i64]) -> Vec<i128> {
    let mut e = vec![1i128];
    for &d in values {
        let mut next = vec![0i128; e.len() + 1];
        for (k, &ek) in e.iter().enumerate() {
            next[k] = add_i128(next[k], ek);
            next[k + 1] = add_i128(next[k + 1], mul_i128(ek, d as i128));
        }
        e = next;
    }
    e
}

/// Generating function of `n -> coeff * prod (n - n_i)^+` over the common
/// denominator `(1-t)^denominator_exponent`. The term must have fewer shifts
/// than the denominator exponent and all shifts nonnegative.
pub fn term_gf(
    term: &PlusTerm,
    denominator_exponent: usize,
) -> Result<RationalCountSeries, GenfuncError> {
    assert!(denominator_exponent >= 1);
    let r = term.shifts.len();
    if r >= denominator_exponent {
        return Err(GenfuncError::TooManyShifts {
            shifts: r,
            max: denominator_exponent - 1,
        });
    }
    if let Some(&s) = term.shifts.iter().find(|&&s| s < 0) {
        return Err(GenfuncError::NegativeShift(s));
    }
    if r == 0 {
        // Constant sequence: coeff/(1-t), rescaled to the common denominator.
        let numerator = one_minus_t_pow(denominator_exponent - 1).scale(term.coeff);
        return Ok(RationalCountSeries::new(numerator, denominator_exponent));
    }
    let top = *term.shifts.last().expect("r >= 1") as usize;
    let gaps: Vec<i64> = term.shifts[..r - 1]
        .iter()
        .map(|&s| top as i64 - s)
        .collect();
    let sym = elementary_symmetric(&gaps);
    let mut numerator = DensePolynomial::zero();
    for j in 1..=r {
        let part = eulerian(j)
            .as_polynomial()
            .scale(sym[r - j])
            .multiply(&one_minus_t_pow(denominator_exponent - 1 - j));
        numerator = numerator.add(&part);
    }
    numerator = numerator.shift_up(top).scale(term.coeff);
    Ok(RationalCountSeries::new(numerator, denominator_exponent))
}

/// Sum of [`term_gf`] over all terms, over `(1-t)^(q+1)`.
pub fn expression_gf(
    expr: &PluspartExpression,
    q: usize,
) -> Result<RationalCountSeries, GenfuncError> {
    let denominator_exponent = q + 1;
    let mut numerator = DensePolynomial::zero();
    for term in expr.terms() {
        numerator = numerator.add(term_gf(term, denominator_exponent)?.numerator());
    }
    Ok(RationalCountSeries::new(numerator, denominator_exponent))
}
