//! Exact coefficients: arbitrary-precision rationals and polynomials in the
//! rank variable t.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use std::fmt;

use crate::{Error, Result};

/// Arbitrary-precision rational, kept in lowest terms with positive denominator.
pub type Rational = BigRational;

/// The rational n/1.
pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// The rational p/q. Panics if q = 0.
pub fn ratio(p: i64, q: i64) -> Rational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Univariate polynomial in the rank variable over ℚ, stored low degree first
/// with no trailing zero, so equal polynomials are structurally equal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RankPolynomial {
    coeffs: Vec<Rational>,
}

impl RankPolynomial {
    /// Builds a polynomial from low-first coefficients, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RankPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        RankPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The polynomial t itself.
    pub fn variable() -> Self {
        Self::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
            let b = other.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
            out.push(a + b);
        }
        Self::from_coeffs(out)
    }

    pub fn neg(&self) -> Self {
        RankPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Exact evaluation at t0 by Horner's rule.
    pub fn eval(&self, t0: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t0 + c;
        }
        acc
    }

    /// The substituted polynomial p(t − c).
    pub fn shift_arg(&self, c: &Rational) -> Self {
        let lin = Self::from_coeffs(vec![-c.clone(), Rational::one()]);
        let mut acc = Self::zero();
        for coeff in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Self::constant(coeff.clone()));
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * int(k as i64))
            .collect();
        Self::from_coeffs(coeffs)
    }

    /// Scales a nonzero polynomial so its leading coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => Self::zero(),
            Some(lead) => self.scale(&lead.recip()),
        }
    }

    /// Euclidean division: self = q·divisor + r with deg r < deg divisor.
    pub fn divrem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let Some(d_deg) = divisor.degree() else {
            return Err(Error::Argument("division by the zero polynomial".into()));
        };
        let lead = divisor.coeffs.last().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(d_deg)];
        while rem.len() > d_deg {
            let r_deg = rem.len() - 1;
            let factor = rem.last().unwrap() / &lead;
            quot[r_deg - d_deg] = factor.clone();
            for (k, c) in divisor.coeffs.iter().enumerate() {
                rem[r_deg - d_deg + k] -= &factor * c;
            }
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        Ok((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    /// Monic greatest common divisor by the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }
}

/// The unique polynomial of degree < n through n sample points with distinct
/// abscissas.
pub fn lagrange_interpolate(points: &[(Rational, Rational)]) -> Result<RankPolynomial> {
    for (i, (xi, _)) in points.iter().enumerate() {
        for (xj, _) in &points[..i] {
            if xi == xj {
                return Err(Error::Argument(format!(
                    "repeated interpolation abscissa {xi}"
                )));
            }
        }
    }
    let mut acc = RankPolynomial::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut term = RankPolynomial::constant(yi.clone());
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let denom = xi - xj;
            term = term.mul(&RankPolynomial::from_coeffs(vec![
                -xj / &denom,
                denom.recip(),
            ]));
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

impl fmt::Display for RankPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
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
            let unit_mag = mag.is_one();
            match deg {
                0 => write!(f, "{mag}")?,
                _ if unit_mag => {}
                _ => write!(f, "{mag}*")?,
            }
            match deg {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{deg}")?,
            }
        }
        Ok(())
    }
}

/// The product (t − lower)(t − lower − 1)···(t − upper + 1); empty product = 1.
pub fn falling_factorial(lower: usize, upper: usize) -> Result<RankPolynomial> {
    if lower > upper {
        return Err(Error::Argument(format!(
            "falling_factorial: lower {lower} exceeds upper {upper}"
        )));
    }
    let mut p = RankPolynomial::one();
    for a in lower..upper {
        p = p.mul(&RankPolynomial::from_coeffs(vec![
            int(-(a as i64)),
            Rational::one(),
        ]));
    }
    Ok(p)
}

/// Exact evaluation of a polynomial at a rational rank.
pub fn poly_eval(p: &RankPolynomial, t0: &Rational) -> Rational {
    p.eval(t0)
}

/// A coefficient: a polynomial in t (symbolic context) or a rational number
/// (context specialized at a fixed rank t₀).
///
/// Arithmetic on mixed variants panics; public entry points guard against it
/// by checking rank contexts up front.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Scalar {
    Symbolic(RankPolynomial),
    Specialized(Rational),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Symbolic(p) => p.is_zero(),
            Scalar::Specialized(c) => c.is_zero(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (Scalar::Symbolic(p), Scalar::Symbolic(q)) => Scalar::Symbolic(p.add(q)),
            (Scalar::Specialized(a), Scalar::Specialized(b)) => Scalar::Specialized(a + b),
            _ => panic!("mixed symbolic and specialized scalars"),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (Scalar::Symbolic(p), Scalar::Symbolic(q)) => Scalar::Symbolic(p.mul(q)),
            (Scalar::Specialized(a), Scalar::Specialized(b)) => Scalar::Specialized(a * b),
            _ => panic!("mixed symbolic and specialized scalars"),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Scalar::Symbolic(p) => Scalar::Symbolic(p.neg()),
            Scalar::Specialized(c) => Scalar::Specialized(-c.clone()),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        match self {
            Scalar::Symbolic(p) => Scalar::Symbolic(p.scale(c)),
            Scalar::Specialized(a) => Scalar::Specialized(a * c),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Symbolic(p) => write!(f, "{p}"),
            Scalar::Specialized(c) => write!(f, "{c}"),
        }
    }
}

/// The coefficient ring in force: polynomials in t, or ℚ at a fixed rank t₀.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RankContext {
    Symbolic,
    Specialized(Rational),
}

impl RankContext {
    pub fn zero(&self) -> Scalar {
        self.constant(Rational::zero())
    }

    pub fn one(&self) -> Scalar {
        self.constant(Rational::one())
    }

    pub fn constant(&self, c: Rational) -> Scalar {
        match self {
            RankContext::Symbolic => Scalar::Symbolic(RankPolynomial::constant(c)),
            RankContext::Specialized(_) => Scalar::Specialized(c),
        }
    }

    /// The rank itself: t symbolically, t₀ when specialized.
    pub fn rank(&self) -> Scalar {
        match self {
            RankContext::Symbolic => Scalar::Symbolic(RankPolynomial::variable()),
            RankContext::Specialized(t0) => Scalar::Specialized(t0.clone()),
        }
    }

    /// falling_factorial(lower, upper) as a scalar of this context.
    pub fn falling(&self, lower: usize, upper: usize) -> Result<Scalar> {
        let p = falling_factorial(lower, upper)?;
        Ok(match self {
            RankContext::Symbolic => Scalar::Symbolic(p),
            RankContext::Specialized(t0) => Scalar::Specialized(p.eval(t0)),
        })
    }

    /// Whether the scalar belongs to this context.
    pub fn admits(&self, s: &Scalar) -> bool {
        matches!(
            (self, s),
            (RankContext::Symbolic, Scalar::Symbolic(_))
                | (RankContext::Specialized(_), Scalar::Specialized(_))
        )
    }
}

impl fmt::Display for RankContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankContext::Symbolic => write!(f, "symbolic"),
            RankContext::Specialized(t0) => write!(f, "t={t0}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn falling_factorial_examples() {
        assert_eq!(falling_factorial(2, 2).unwrap(), RankPolynomial::one());
        assert_eq!(
            falling_factorial(1, 2).unwrap(),
            RankPolynomial::from_coeffs(vec![int(-1), int(1)])
        );
        assert_eq!(falling_factorial(0, 3).unwrap().eval(&int(5)), int(60));
        assert!(falling_factorial(3, 1).is_err());
    }

    #[test]
    fn falling_factorial_degree() {
        for (lo, hi) in [(0, 0), (0, 4), (2, 7)] {
            let p = falling_factorial(lo, hi).unwrap();
            assert_eq!(p.degree(), Some(hi - lo).filter(|d| *d > 0).or(Some(0)));
        }
    }

    #[test]
    fn eval_examples() {
        let t = RankPolynomial::variable();
        assert_eq!(t.sub(&RankPolynomial::one()).eval(&int(1)), int(0));
        assert_eq!(t.eval(&ratio(7, 2)), ratio(7, 2));
        let p = t.mul(&t).sub(&t);
        assert_eq!(p.eval(&int(3)), int(6));
    }

    #[test]
    fn shift_arg_shifts_evaluation() {
        let p = falling_factorial(0, 3).unwrap();
        let q = p.shift_arg(&int(2));
        assert_eq!(q.eval(&int(7)), p.eval(&int(5)));
        assert_eq!(p.shift_arg(&int(0)), p);
    }

    #[test]
    fn display_is_readable() {
        let p = RankPolynomial::from_coeffs(vec![int(1), ratio(-3, 2), int(1)]);
        assert_eq!(p.to_string(), "t^2 - 3/2*t + 1");
        assert_eq!(RankPolynomial::zero().to_string(), "0");
        assert_eq!(RankPolynomial::variable().neg().to_string(), "-t");
    }

    #[test]
    fn context_scalars() {
        let sym = RankContext::Symbolic;
        let spec = RankContext::Specialized(ratio(7, 2));
        assert_eq!(sym.falling(1, 2).unwrap().to_string(), "t - 1");
        assert_eq!(spec.falling(1, 2).unwrap(), Scalar::Specialized(ratio(5, 2)));
        assert!(sym.admits(&sym.rank()));
        assert!(!sym.admits(&spec.rank()));
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=9).prop_map(|(p, q)| ratio(p, q))
    }

    fn arb_poly() -> impl Strategy<Value = RankPolynomial> {
        prop::collection::vec(arb_rational(), 0..5).prop_map(RankPolynomial::from_coeffs)
    }

    proptest! {
        #[test]
        fn ring_axioms(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
            prop_assert_eq!(p.add(&q).add(&r), p.add(&q.add(&r)));
            prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
            prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
            prop_assert_eq!(p.mul(&q), q.mul(&p));
            prop_assert_eq!(p.sub(&p), RankPolynomial::zero());
        }

        #[test]
        fn eval_is_ring_homomorphism(p in arb_poly(), q in arb_poly(), t0 in arb_rational()) {
            prop_assert_eq!(p.mul(&q).eval(&t0), p.eval(&t0) * q.eval(&t0));
            prop_assert_eq!(p.add(&q).eval(&t0), p.eval(&t0) + q.eval(&t0));
        }

        #[test]
        fn falling_factorial_is_multiplicative(a in 0usize..4, b in 0usize..4, c in 0usize..4) {
            let mut v = [a, b, c];
            v.sort();
            let [a, b, c] = v;
            let left = falling_factorial(a, b).unwrap().mul(&falling_factorial(b, c).unwrap());
            prop_assert_eq!(left, falling_factorial(a, c).unwrap());
        }

        #[test]
        fn shift_arg_matches_eval(p in arb_poly(), c in arb_rational(), x in arb_rational()) {
            prop_assert_eq!(p.shift_arg(&c).eval(&x), p.eval(&(x - c)));
        }

        #[test]
        fn divrem_reconstructs(p in arb_poly(), d in arb_poly()) {
            prop_assume!(!d.is_zero());
            let (q, r) = p.divrem(&d).unwrap();
            prop_assert_eq!(q.mul(&d).add(&r), p);
            if let Some(r_deg) = r.degree() {
                prop_assert!(r.is_zero() || r_deg < d.degree().unwrap());
            }
        }

        #[test]
        fn gcd_divides_both(p in arb_poly(), q in arb_poly()) {
            let g = p.gcd(&q).unwrap();
            if g.is_zero() {
                prop_assert!(p.is_zero() && q.is_zero());
            } else {
                prop_assert!(p.divrem(&g).unwrap().1.is_zero());
                prop_assert!(q.divrem(&g).unwrap().1.is_zero());
                prop_assert_eq!(g.coeffs().last().cloned().unwrap(), Rational::one());
            }
        }

        #[test]
        fn interpolation_recovers_polynomial(p in arb_poly()) {
            let n = p.coeffs().len().max(1);
            let points: Vec<(Rational, Rational)> =
                (0..n as i64).map(|x| (int(x), p.eval(&int(x)))).collect();
            prop_assert_eq!(lagrange_interpolate(&points).unwrap(), p);
        }
    }

    #[test]
    fn derivative_examples() {
        let p = falling_factorial(0, 2).unwrap();
        assert_eq!(
            p.derivative(),
            RankPolynomial::from_coeffs(vec![int(-1), int(2)])
        );
        assert_eq!(RankPolynomial::one().derivative(), RankPolynomial::zero());
    }

    #[test]
    fn gcd_detects_repeated_roots() {
        let root = RankPolynomial::from_coeffs(vec![int(-3), int(1)]);
        let squared = root.mul(&root);
        assert_eq!(squared.gcd(&squared.derivative()).unwrap(), root);
        let squarefree = falling_factorial(0, 3).unwrap();
        assert_eq!(
            squarefree.gcd(&squarefree.derivative()).unwrap(),
            RankPolynomial::one()
        );
    }
}
