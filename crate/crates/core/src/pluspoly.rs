//! Exact algebra of positive-part expressions: signed integer combinations of
//! products of factors `(n - s)^+` where `x^+ = max(x, 0)`.
//!
//! These are the closed forms produced by deletion-contraction. Coefficients
//! are checked `i128`; any overflow aborts rather than wrapping.

use std::fmt;

pub(crate) fn add_i128(a: i128, b: i128) -> i128 {
    a.checked_add(b).expect("coefficient overflow")
}

pub(crate) fn mul_i128(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("coefficient overflow")
}

/// One product term: `coeff * prod_{s in shifts} (n - s)^+`.
/// Shifts are kept sorted ascending; the term's degree is `shifts.len()`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlusTerm {
    pub coeff: i128,
    pub shifts: Vec<i64>,
}

impl PlusTerm {
    pub fn new(coeff: i128, mut shifts: Vec<i64>) -> PlusTerm {
        shifts.sort_unstable();
        PlusTerm { coeff, shifts }
    }

    pub fn degree(&self) -> usize {
        self.shifts.len()
    }

    fn evaluate(&self, n: u64) -> i128 {
        let mut value = self.coeff;
        for &s in &self.shifts {
            let factor = (n as i128 - s as i128).max(0);
            value = mul_i128(value, factor);
        }
        value
    }
}

/// A normalized sum of [`PlusTerm`]s: no two terms share a shifts multiset, no
/// zero coefficients, deterministic order (degree descending, then shifts).
/// The zero function is the empty term list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PluspartExpression {
    terms: Vec<PlusTerm>,
}

impl PluspartExpression {
    pub fn zero() -> PluspartExpression {
        PluspartExpression { terms: Vec::new() }
    }

    pub fn one() -> PluspartExpression {
        PluspartExpression::from_terms([PlusTerm::new(1, vec![])])
    }

    /// The monomial `n^q` as a term with `q` zero shifts.
    pub fn monomial(q: usize) -> PluspartExpression {
        PluspartExpression::from_terms([PlusTerm::new(1, vec![0; q])])
    }

    /// Builds and normalizes an expression from arbitrary terms.
    pub fn from_terms(terms: impl IntoIterator<Item = PlusTerm>) -> PluspartExpression {
        PluspartExpression {
            terms: terms.into_iter().collect(),
        }
        .normalize()
    }

    pub fn terms(&self) -> &[PlusTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(PlusTerm::degree).max().unwrap_or(0)
    }

    /// Largest shift appearing in any term; `None` for the zero expression or
    /// when every term is constant.
    pub fn max_shift(&self) -> Option<i64> {
        self.terms
            .iter()
            .filter_map(|t| t.shifts.last().copied())
            .max()
    }

    /// Evaluates the expression at a nonnegative integer.
    pub fn evaluate(&self, n: u64) -> i128 {
        self.terms
            .iter()
            .fold(0i128, |acc, t| add_i128(acc, t.evaluate(n)))
    }

    /// Merges terms with equal shifts multisets, drops zero terms, and sorts
    /// by degree descending then shifts ascending. Idempotent.
    pub fn normalize(&self) -> PluspartExpression {
        let mut terms: Vec<PlusTerm> = self
            .terms
            .iter()
            .map(|t| PlusTerm::new(t.coeff, t.shifts.clone()))
            .collect();
        terms.sort_by(|a, b| a.shifts.cmp(&b.shifts));
        let mut merged: Vec<PlusTerm> = Vec::with_capacity(terms.len());
        for term in terms {
            match merged.last_mut() {
                Some(last) if last.shifts == term.shifts => {
                    last.coeff = add_i128(last.coeff, term.coeff);
                }
                _ => merged.push(term),
            }
        }
        merged.retain(|t| t.coeff != 0);
        merged.sort_by(|a, b| {
            b.degree()
                .cmp(&a.degree())
                .then_with(|| a.shifts.cmp(&b.shifts))
        });
        PluspartExpression { terms: merged }
    }

    pub fn add(&self, other: &PluspartExpression) -> PluspartExpression {
        PluspartExpression {
            terms: self.terms.iter().chain(&other.terms).cloned().collect(),
        }
        .normalize()
    }

    pub fn negate(&self) -> PluspartExpression {
        self.scale(-1)
    }

    pub fn sub(&self, other: &PluspartExpression) -> PluspartExpression {
        self.add(&other.negate())
    }

    pub fn scale(&self, k: i128) -> PluspartExpression {
        PluspartExpression {
            terms: self
                .terms
                .iter()
                .map(|t| PlusTerm {
                    coeff: mul_i128(t.coeff, k),
                    shifts: t.shifts.clone(),
                })
                .collect(),
        }
        .normalize()
    }

    /// Term-by-term product: coefficients multiply, shift multisets unite.
    pub fn multiply(&self, other: &PluspartExpression) -> PluspartExpression {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let mut shifts = a.shifts.clone();
                shifts.extend_from_slice(&b.shifts);
                terms.push(PlusTerm::new(mul_i128(a.coeff, b.coeff), shifts));
            }
        }
        PluspartExpression { terms }.normalize()
    }

    /// The polynomial obtained by dropping every positive-part superscript;
    /// it agrees with `evaluate` for all `n >=` the maximum shift.
    pub fn eventual_polynomial(&self) -> DensePolynomial {
        let mut total = DensePolynomial::zero();
        for term in &self.terms {
            let mut poly = DensePolynomial::constant(term.coeff);
            for &s in &term.shifts {
                poly = poly.multiply(&DensePolynomial::new(vec![-(s as i128), 1]));
            }
            total = total.add(&poly);
        }
        total
    }

    /// Least `N >= 0` such that the expression agrees with its eventual
    /// polynomial at every integer `n >= N`. Computed by scanning downward
    /// from the maximum shift, below which agreement is automatic.
    pub fn polynomial_threshold(&self) -> u64 {
        let poly = self.eventual_polynomial();
        let top = self.max_shift().unwrap_or(0).max(0) as u64;
        let mut threshold = 0;
        for n in (0..top).rev() {
            if self.evaluate(n) != poly.evaluate(n) {
                threshold = n + 1;
                break;
            }
        }
        threshold
    }
}

/// Finite check for equality as functions: two expressions are equal iff their
/// evaluations agree on `0 ..= max_shift + degree + 1` (both are polynomials
/// past the maximum shift, and the window leaves degree+1 agreement points).
pub fn functions_equal(a: &PluspartExpression, b: &PluspartExpression) -> bool {
    let shift = a
        .max_shift()
        .unwrap_or(0)
        .max(b.max_shift().unwrap_or(0))
        .max(0) as u64;
    let degree = a.degree().max(b.degree()) as u64;
    (0..=shift + degree + 1).all(|n| a.evaluate(n) == b.evaluate(n))
}

impl fmt::Display for PluspartExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, term) in self.terms.iter().enumerate() {
            let coeff = term.coeff;
            if i == 0 {
                if coeff < 0 {
                    write!(f, "-")?;
                }
            } else if coeff < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = coeff.unsigned_abs();
            let mut factors = String::new();
            let zeros = term.shifts.iter().filter(|&&s| s == 0).count();
            if zeros == 1 {
                factors.push('n');
            } else if zeros > 1 {
                factors.push_str(&format!("n^{zeros}"));
            }
            let mut rest = term.shifts.iter().filter(|&&s| s != 0).peekable();
            while let Some(&s) = rest.next() {
                let mut reps = 1;
                while rest.peek() == Some(&&s) {
                    rest.next();
                    reps += 1;
                }
                let base = if s > 0 {
                    format!("(n-{s})^+")
                } else {
                    format!("(n+{})^+", -s)
                };
                if reps == 1 {
                    factors.push_str(&base);
                } else {
                    factors.push_str(&format!("[{base}]^{reps}"));
                }
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "{factors}")?;
            } else {
                write!(f, "{mag}{factors}")?;
            }
        }
        Ok(())
    }
}

/// A dense univariate polynomial with exact integer coefficients, lowest
/// degree first; the top coefficient is nonzero unless the polynomial is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DensePolynomial {
    coeffs: Vec<i128>,
}

impl DensePolynomial {
    pub fn new(mut coeffs: Vec<i128>) -> DensePolynomial {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        DensePolynomial { coeffs }
    }

    pub fn zero() -> DensePolynomial {
        DensePolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: i128) -> DensePolynomial {
        DensePolynomial::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficients(&self) -> &[i128] {
        &self.coeffs
    }

    /// Coefficient of the degree-`d` term (0 beyond the stored length).
    pub fn coefficient(&self, d: usize) -> i128 {
        self.coeffs.get(d).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn evaluate(&self, n: u64) -> i128 {
        let x = n as i128;
        self.coeffs
            .iter()
            .rev()
            .fold(0i128, |acc, &c| add_i128(mul_i128(acc, x), c))
    }

    pub fn add(&self, other: &DensePolynomial) -> DensePolynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| add_i128(self.coefficient(i), other.coefficient(i)))
            .collect();
        DensePolynomial::new(coeffs)
    }

    pub fn negate(&self) -> DensePolynomial {
        self.scale(-1)
    }

    pub fn sub(&self, other: &DensePolynomial) -> DensePolynomial {
        self.add(&other.negate())
    }

    pub fn scale(&self, k: i128) -> DensePolynomial {
        DensePolynomial::new(self.coeffs.iter().map(|&c| mul_i128(c, k)).collect())
    }

    pub fn multiply(&self, other: &DensePolynomial) -> DensePolynomial {
        if self.is_zero() || other.is_zero() {
            return DensePolynomial::zero();
        }
        let mut coeffs = vec![0i128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = add_i128(coeffs[i + j], mul_i128(a, b));
            }
        }
        DensePolynomial::new(coeffs)
    }

    /// Multiplies by `x^k`.
    pub fn shift_up(&self, k: usize) -> DensePolynomial {
        if self.is_zero() {
            return DensePolynomial::zero();
        }
        let mut coeffs = vec![0i128; k];
        coeffs.extend_from_slice(&self.coeffs);
        DensePolynomial { coeffs }
    }

    /// Renders in descending powers of `var`, e.g. `n^2 - 3n + 2`.
    pub fn format_var(&self, var: char) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (d, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if out.is_empty() {
                if c < 0 {
                    out.push('-');
                }
            } else if c < 0 {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mag = c.unsigned_abs();
            match d {
                0 => out.push_str(&mag.to_string()),
                _ => {
                    if mag != 1 {
                        out.push_str(&mag.to_string());
                    }
                    out.push(var);
                    if d > 1 {
                        out.push_str(&format!("^{d}"));
                    }
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for DensePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_var('n'))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn queens2_expr() -> PluspartExpression {
        PluspartExpression::from_terms([
            PlusTerm::new(1, vec![0, 0]),
            PlusTerm::new(-1, vec![0]),
            PlusTerm::new(-2, vec![1]),
        ])
    }

    #[test]
    fn evaluate_queens2_at_3() {
        assert_eq!(queens2_expr().evaluate(3), 2);
    }

    #[test]
    fn evaluate_clamps_positive_part() {
        let t = PluspartExpression::from_terms([PlusTerm::new(-2, vec![1])]);
        assert_eq!(t.evaluate(0), 0);
        assert_eq!(t.evaluate(1), 0);
        assert_eq!(t.evaluate(4), -6);
    }

    #[test]
    fn evaluate_bishops2_at_1() {
        let e = PluspartExpression::from_terms([
            PlusTerm::new(1, vec![0, 0]),
            PlusTerm::new(-2, vec![1]),
        ]);
        assert_eq!(e.evaluate(1), 1);
    }

    #[test]
    fn add_cancels_to_zero() {
        let n2 = PluspartExpression::monomial(2);
        assert!(n2.add(&n2.negate()).is_zero());
    }

    #[test]
    fn add_merges_matching_terms() {
        let a = PluspartExpression::from_terms([PlusTerm::new(2, vec![1])]);
        let b = PluspartExpression::from_terms([PlusTerm::new(3, vec![1])]);
        assert_eq!(a.add(&b).terms(), &[PlusTerm::new(5, vec![1])]);
    }

    #[test]
    fn negate_evaluates_opposite() {
        assert_eq!(queens2_expr().negate().evaluate(3), -2);
    }

    #[test]
    fn multiply_combines_shifts() {
        let a = PluspartExpression::from_terms([PlusTerm::new(1, vec![0])]);
        let b = PluspartExpression::from_terms([PlusTerm::new(1, vec![2])]);
        assert_eq!(a.multiply(&b).terms(), &[PlusTerm::new(1, vec![0, 2])]);
    }

    #[test]
    fn multiply_by_zero() {
        let a = PluspartExpression::from_terms([PlusTerm::new(1, vec![0])]);
        assert!(a.multiply(&PluspartExpression::zero()).is_zero());
    }

    #[test]
    fn multiply_square() {
        let a = PluspartExpression::from_terms([PlusTerm::new(1, vec![1])]);
        let sq = a.multiply(&a);
        assert_eq!(sq.terms(), &[PlusTerm::new(1, vec![1, 1])]);
        assert_eq!(sq.evaluate(4), 9);
    }

    #[test]
    fn normalize_merges_and_orders() {
        let e = PluspartExpression::from_terms([
            PlusTerm::new(3, vec![1]),
            PlusTerm::new(-1, vec![1]),
            PlusTerm::new(1, vec![0]),
        ]);
        assert_eq!(
            e.terms(),
            &[PlusTerm::new(1, vec![0]), PlusTerm::new(2, vec![1])]
        );
    }

    #[test]
    fn normalize_cancels() {
        let e =
            PluspartExpression::from_terms([PlusTerm::new(1, vec![2]), PlusTerm::new(-1, vec![2])]);
        assert!(e.is_zero());
    }

    #[test]
    fn normalize_idempotent() {
        let e = queens2_expr();
        assert_eq!(e.normalize(), e);
    }

    #[test]
    fn eventual_polynomial_bishops2() {
        let e = PluspartExpression::from_terms([
            PlusTerm::new(1, vec![0, 0]),
            PlusTerm::new(-2, vec![1]),
        ]);
        assert_eq!(e.eventual_polynomial().coefficients(), &[2, -2, 1]);
    }

    #[test]
    fn eventual_polynomial_queens3() {
        // Piecewise form for three queens, one per row.
        let e = PluspartExpression::from_terms([
            PlusTerm::new(1, vec![0, 0, 0]),
            PlusTerm::new(-3, vec![0, 0]),
            PlusTerm::new(-4, vec![0, 1]),
            PlusTerm::new(-2, vec![0, 2]),
            PlusTerm::new(2, vec![0]),
            PlusTerm::new(8, vec![1]),
            PlusTerm::new(8, vec![2]),
            PlusTerm::new(4, vec![3]),
        ]);
        assert_eq!(e.eventual_polynomial().coefficients(), &[-36, 30, -9, 1]);
        assert_eq!(e.polynomial_threshold(), 3);
    }

    #[test]
    fn eventual_polynomial_monomial() {
        let e = PluspartExpression::monomial(4);
        assert_eq!(e.eventual_polynomial().coefficients(), &[0, 0, 0, 0, 1]);
        assert_eq!(e.polynomial_threshold(), 0);
    }

    #[test]
    fn threshold_bishops4() {
        // Piecewise form for four bishops, one per row.
        let e = PluspartExpression::from_terms([
            PlusTerm::new(1, vec![0, 0, 0, 0]),
            PlusTerm::new(-6, vec![0, 0, 1]),
            PlusTerm::new(-4, vec![0, 0, 2]),
            PlusTerm::new(-2, vec![0, 0, 3]),
            PlusTerm::new(4, vec![0, 1]),
            PlusTerm::new(12, vec![0, 2]),
            PlusTerm::new(16, vec![0, 3]),
            PlusTerm::new(4, vec![0, 4]),
            PlusTerm::new(4, vec![0, 5]),
            PlusTerm::new(4, vec![1, 1]),
            PlusTerm::new(4, vec![1, 3]),
            PlusTerm::new(4, vec![2, 2]),
            PlusTerm::new(-2, vec![1]),
            PlusTerm::new(-8, vec![2]),
            PlusTerm::new(-34, vec![3]),
            PlusTerm::new(-12, vec![4]),
            PlusTerm::new(-20, vec![5]),
            PlusTerm::new(-4, vec![6]),
            PlusTerm::new(-2, vec![7]),
        ]);
        assert_eq!(
            e.eventual_polynomial().coefficients(),
            &[338, -234, 72, -12, 1]
        );
        assert_eq!(e.polynomial_threshold(), 7);
    }

    #[test]
    fn threshold_knights3() {
        let e = PluspartExpression::from_terms([
            PlusTerm::new(1, vec![0, 0, 0]),
            PlusTerm::new(-2, vec![0, 1]),
            PlusTerm::new(-4, vec![0, 2]),
            PlusTerm::new(6, vec![2]),
            PlusTerm::new(4, vec![3]),
            PlusTerm::new(2, vec![4]),
        ]);
        assert_eq!(e.eventual_polynomial().coefficients(), &[-32, 22, -6, 1]);
        assert_eq!(e.polynomial_threshold(), 4);
    }

    #[test]
    fn display_queens2() {
        assert_eq!(queens2_expr().to_string(), "n^2 - n - 2(n-1)^+");
    }

    #[test]
    fn display_polynomial() {
        let p = DensePolynomial::new(vec![2, -3, 1]);
        assert_eq!(p.to_string(), "n^2 - 3n + 2");
        assert_eq!(DensePolynomial::zero().to_string(), "0");
    }

    #[test]
    fn functions_equal_detects_difference() {
        let a = queens2_expr();
        let b = PluspartExpression::from_terms([
            PlusTerm::new(1, vec![0, 0]),
            PlusTerm::new(-2, vec![1]),
        ]);
        assert!(functions_equal(&a, &a.normalize()));
        assert!(!functions_equal(&a, &b));
    }

    #[test]
    #[should_panic(expected = "coefficient overflow")]
    fn evaluate_aborts_on_overflow() {
        let e = PluspartExpression::from_terms([PlusTerm::new(i128::MAX, vec![0])]);
        e.evaluate(3);
    }
}
