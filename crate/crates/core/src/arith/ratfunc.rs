//! Rational functions in one formal parameter over [`Scalar`].

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::field::{format_scalar, parse_scalar, Field, Scalar};
use super::poly::{forward_owned, Poly};
use super::ArithError;

/// Name used when printing the formal parameter.
pub const PARAM: &str = "d";

/// `num / den` with `den` monic and `gcd(num, den) = 1`. Zero is `0/1`,
/// so equal values always have identical representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Builds and normalizes `num / den`.
    pub fn new(num: Poly, den: Poly) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc::zero());
        }
        let g = num.gcd(&den);
        let num = num.exact_div(&g).expect("gcd divides");
        let den = den.exact_div(&g).expect("gcd divides");
        let lc = den.leading().expect("nonzero").recip();
        Ok(RatFunc {
            num: num.scale(&lc),
            den: den.scale(&lc),
        })
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: Scalar) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    /// The formal parameter itself.
    pub fn param() -> Self {
        RatFunc::from_poly(Poly::x())
    }

    /// `c * d^k` for any integer `k`.
    pub fn monomial(c: Scalar, k: i64) -> Self {
        if k >= 0 {
            RatFunc::from_poly(Poly::monomial(c, k as usize))
        } else {
            RatFunc::new(Poly::constant(c), Poly::monomial(Scalar::one(), (-k) as usize)).expect("nonzero denominator")
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    /// `Some((c, k))` when the value is `c * d^k` with `c != 0`.
    pub fn as_monomial(&self) -> Option<(Scalar, i64)> {
        let nz: Vec<_> = self
            .num
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let dz = self.den.coeffs().iter().filter(|c| !c.is_zero()).count();
        match (nz.as_slice(), dz) {
            ([(a, c)], 1) => Some(((*c).clone(), *a as i64 - self.den.degree()? as i64)),
            _ => None,
        }
    }

    /// Value at a rational point; `None` at a pole.
    pub fn eval(&self, x: &Scalar) -> Option<Scalar> {
        let den = self.den.eval(x);
        (!den.is_zero()).then(|| self.num.eval(x) / den)
    }

    /// Substitutes `d -> -d`.
    pub fn reflect(&self) -> RatFunc {
        RatFunc::new(self.num.reflect(), self.den.reflect()).expect("nonzero denominator")
    }

    pub fn derivative(&self) -> RatFunc {
        let top = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFunc::new(top, &self.den * &self.den).expect("nonzero denominator")
    }

    /// Canonical text form, parsed back by [`RatFunc::parse`]: a polynomial,
    /// a monomial with a negative power such as `"-4/3*d^-2"`, or
    /// `"(num)/(den)"`.
    pub fn display(&self, var: &str) -> String {
        if self.den.is_one() {
            return self.num.display(var);
        }
        if let Some((c, k)) = self.as_monomial() {
            return if c.is_one() {
                format!("{var}^{k}")
            } else if (-c.clone()).is_one() {
                format!("-{var}^{k}")
            } else {
                format!("{}*{var}^{k}", format_scalar(&c))
            };
        }
        format!("({})/({})", self.num.display(var), self.den.display(var))
    }

    pub fn parse(text: &str, var: &str) -> Result<RatFunc, ArithError> {
        let s = text.trim();
        if let Some(inner) = s.strip_prefix('(') {
            let (num, den) = inner
                .split_once(")/(")
                .and_then(|(n, d)| Some((n, d.strip_suffix(')')?)))
                .ok_or_else(|| ArithError::Parse(text.to_string()))?;
            return RatFunc::new(Poly::parse(num, var)?, Poly::parse(den, var)?);
        }
        let neg_power = format!("{var}^-");
        if let Some(pos) = s.find(&neg_power) {
            let k: i64 = s[pos + neg_power.len()..]
                .parse()
                .map_err(|_| ArithError::Parse(text.to_string()))?;
            let c = match s[..pos].trim_end_matches('*') {
                "" => Scalar::one(),
                "-" => -Scalar::one(),
                c => parse_scalar(c)?,
            };
            return Ok(RatFunc::monomial(c, -k));
        }
        Ok(RatFunc::from_poly(Poly::parse(s, var)?))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display(PARAM))
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::from_poly(Poly::zero())
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc::from_poly(Poly::one())
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;

    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero");
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::new(num, &self.den * &rhs.den).expect("nonzero")
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;

    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;

    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero")
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;

    /// Panics on division by zero; use [`Field::try_inv`] to check.
    fn div(self, rhs: &RatFunc) -> RatFunc {
        let inv = rhs.try_inv().expect("division by zero rational function");
        Mul::mul(self, &inv)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;

    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;

    fn neg(self) -> RatFunc {
        -&self
    }
}

forward_owned!(RatFunc, Add::add, Sub::sub, Mul::mul, Div::div);

impl Field for RatFunc {
    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(RatFunc::new(self.den.clone(), self.num.clone()).expect("nonzero numerator"))
        }
    }

    fn from_scalar(s: &Scalar) -> Self {
        RatFunc::constant(s.clone())
    }

    fn as_scalar(&self) -> Option<Scalar> {
        (self.num.is_constant() && self.den.is_one()).then(|| self.num.coeff(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::{int, ratio};

    fn d() -> RatFunc {
        RatFunc::param()
    }

    #[test]
    fn normalization_is_canonical() {
        // (d^2 - 1)/(2d - 2) == (d + 1)/2 == d/2 + 1/2
        let a = RatFunc::new(Poly::from_ints(&[-1, 0, 1]), Poly::from_ints(&[-2, 2])).unwrap();
        let b = &(&d() / &RatFunc::from_int(2)) + &RatFunc::constant(ratio(1, 2));
        assert_eq!(a, b);
        assert!(a.den().is_monic());
        assert_eq!(RatFunc::new(Poly::zero(), Poly::x()).unwrap(), RatFunc::zero());
        assert!(RatFunc::new(Poly::one(), Poly::zero()).is_err());
    }

    #[test]
    fn monomials() {
        let m = RatFunc::monomial(ratio(-4, 3), -2);
        assert_eq!(m.as_monomial(), Some((ratio(-4, 3), -2)));
        assert_eq!((&m * &(&d() * &d())).as_scalar(), Some(ratio(-4, 3)));
        assert_eq!((&d() + &RatFunc::one()).as_monomial(), None);
        assert_eq!(m.reflect(), m);
        assert_eq!(RatFunc::monomial(int(2), -3).reflect(), RatFunc::monomial(int(-2), -3));
    }

    #[test]
    fn eval_and_poles() {
        let f = RatFunc::new(Poly::from_ints(&[1]), Poly::from_ints(&[-1, 1])).unwrap();
        assert_eq!(f.eval(&int(3)), Some(ratio(1, 2)));
        assert_eq!(f.eval(&int(1)), None);
    }

    #[test]
    fn text_round_trip() {
        let cases = [
            RatFunc::zero(),
            RatFunc::constant(ratio(-7, 2)),
            RatFunc::monomial(ratio(4, 3), -1),
            RatFunc::monomial(int(1), -4),
            RatFunc::monomial(int(-1), -4),
            RatFunc::monomial(int(5), 2),
            RatFunc::new(Poly::from_ints(&[1, 1]), Poly::from_ints(&[0, 0, 1, 3])).unwrap(),
        ];
        for f in cases {
            let s = f.to_string();
            assert_eq!(RatFunc::parse(&s, PARAM).unwrap(), f, "{s}");
        }
        assert_eq!(RatFunc::monomial(ratio(4, 3), -1).to_string(), "4/3*d^-1");
    }
}
