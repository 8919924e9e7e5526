//! Exact spectrum of `κ·a_{-1}`: characteristic polynomial, rational
//! roots with multiplicities, and the integer (resonant) levels.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{determinant, Field, Matrix, Poly, RatFunc, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct IndicialData {
    /// Rational eigenvalues with algebraic multiplicity, ascending.
    pub eigenvalues: Vec<(Scalar, usize)>,
    /// Monic factor of the characteristic polynomial without rational roots,
    /// `None` when the spectrum is entirely rational.
    pub irrational_factor: Option<Poly>,
    /// Integer eigenvalues.
    pub resonant_levels: BTreeSet<i64>,
}

impl IndicialData {
    pub fn min_level(&self) -> Option<i64> {
        self.resonant_levels.first().copied()
    }

    pub fn max_level(&self) -> Option<i64> {
        self.resonant_levels.last().copied()
    }

    /// Smallest rational eigenvalue, integer or not.
    pub fn min_eigenvalue(&self) -> Option<&Scalar> {
        self.eigenvalues.first().map(|(v, _)| v)
    }
}

/// `det(λI - m)` as a monic polynomial in `λ`.
pub fn characteristic_polynomial(m: &Matrix<Scalar>) -> Poly {
    let n = m.rows();
    let lambda = RatFunc::param();
    let shifted = Matrix::from_fn(n, n, |i, j| {
        let e = -RatFunc::from_scalar(m.get(i, j));
        if i == j {
            e + lambda.clone()
        } else {
            e
        }
    });
    let det = determinant(&shifted).expect("square");
    debug_assert!(det.den().is_one());
    det.num().clone()
}

pub fn indicial_data(residue: &Matrix<Scalar>, coupling: &Scalar) -> IndicialData {
    let charpoly = characteristic_polynomial(&residue.scale(coupling));
    let (eigenvalues, rest) = rational_roots(&charpoly);
    let resonant_levels = eigenvalues
        .iter()
        .filter(|(v, _)| v.is_integer())
        .filter_map(|(v, _)| v.to_integer().to_i64())
        .collect();
    IndicialData {
        eigenvalues,
        irrational_factor: (!rest.is_constant()).then(|| rest.monic()),
        resonant_levels,
    }
}

/// Rational roots with multiplicities (ascending) and the cofactor left
/// after dividing them out.
pub fn rational_roots(p: &Poly) -> (Vec<(Scalar, usize)>, Poly) {
    let mut roots = Vec::new();
    if p.is_zero() {
        return (roots, Poly::zero());
    }
    let mut rest = p.clone();
    if let Some(v) = rest.valuation().filter(|&v| v > 0) {
        roots.push((Scalar::zero(), v));
        rest = Poly::new(rest.coeffs()[v..].to_vec());
    }
    if rest.is_constant() {
        return (roots, rest);
    }

    // integer coefficients for the rational root test
    let lcm = rest.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = rest
        .coeffs()
        .iter()
        .map(|c| (c * Scalar::from_integer(lcm.clone())).to_integer())
        .collect();
    let lead = ints.last().expect("nonconstant").abs();
    let tail = ints[0].abs();

    for num in divisors(&tail) {
        for den in divisors(&lead) {
            if num.gcd(&den) != BigInt::one() {
                continue;
            }
            for candidate in [
                Scalar::new(num.clone(), den.clone()),
                -Scalar::new(num.clone(), den.clone()),
            ] {
                let factor = Poly::linear_factor(&candidate);
                let mut mult = 0;
                while let Some(q) = rest.exact_div(&factor) {
                    rest = q;
                    mult += 1;
                }
                if mult > 0 {
                    roots.push((candidate, mult));
                }
            }
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    (roots, rest)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut k = BigInt::one();
    while &k * &k <= *n {
        if (n % &k).is_zero() {
            let other = n / &k;
            if other != k {
                large.push(other);
            }
            small.push(k.clone());
        }
        k += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, ratio};
    use crate::model::transposition_matrix;

    fn p1() -> Matrix<Scalar> {
        transposition_matrix(3, 1, 2).unwrap()
    }

    /// Characteristic polynomial by cofactor expansion of `λI - m`, used as
    /// an oracle independent of elimination.
    fn charpoly_by_cofactors(m: &Matrix<Scalar>) -> Poly {
        fn det(rows: &[Vec<Poly>]) -> Poly {
            if rows.len() == 1 {
                return rows[0][0].clone();
            }
            let mut acc = Poly::zero();
            for (j, head) in rows[0].iter().enumerate() {
                let minor: Vec<Vec<Poly>> = rows[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != j)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let term = head * &det(&minor);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
        let n = m.rows();
        let rows: Vec<Vec<Poly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let e = Poly::constant(-m.get(i, j).clone());
                        if i == j {
                            &e + &Poly::x()
                        } else {
                            e
                        }
                    })
                    .collect()
            })
            .collect();
        det(&rows)
    }

    #[test]
    fn charpoly_of_2p1() {
        let m = p1().scale(&int(2));
        // (λ - 2)^2 (λ + 2)
        let expected = Poly::from_ints(&[8, -4, -2, 1]);
        assert_eq!(charpoly_by_cofactors(&m), expected);
        assert_eq!(characteristic_polynomial(&m), expected);
    }

    #[test]
    fn spectra() {
        let d = indicial_data(&p1(), &int(2));
        assert_eq!(d.eigenvalues, vec![(int(-2), 1), (int(2), 2)]);
        assert_eq!(d.resonant_levels, BTreeSet::from([-2, 2]));
        assert!(d.irrational_factor.is_none());

        let d = indicial_data(&Matrix::identity(3), &int(2));
        assert_eq!(d.eigenvalues, vec![(int(2), 3)]);
        assert_eq!(d.resonant_levels, BTreeSet::from([2]));

        let d = indicial_data(&p1(), &int(1));
        assert_eq!(d.eigenvalues, vec![(int(-1), 1), (int(1), 2)]);
        assert_eq!(d.resonant_levels, BTreeSet::from([-1, 1]));

        let d = indicial_data(&p1(), &ratio(2, 3));
        assert_eq!(d.eigenvalues, vec![(ratio(-2, 3), 1), (ratio(2, 3), 2)]);
        assert!(d.resonant_levels.is_empty());
    }

    #[test]
    fn irrational_part_is_reported() {
        // rotation-like block: λ^2 - 2 has no rational roots
        let m = Matrix::from_int_rows(&[&[0, 2, 0], &[1, 0, 0], &[0, 0, 3]]);
        let d = indicial_data(&m, &int(1));
        assert_eq!(d.eigenvalues, vec![(int(3), 1)]);
        assert_eq!(d.irrational_factor, Some(Poly::from_ints(&[-2, 0, 1])));
        assert_eq!(d.resonant_levels, BTreeSet::from([3]));
    }

    #[test]
    fn zero_eigenvalues() {
        let m = Matrix::from_int_rows(&[&[0, 1], &[0, 0]]);
        let d = indicial_data(&m, &int(5));
        assert_eq!(d.eigenvalues, vec![(int(0), 2)]);
    }

    #[test]
    fn charpoly_agrees_with_cofactors_on_permutations() {
        let p2 = transposition_matrix(3, 1, 3).unwrap();
        let sum = &p1() + &p2;
        assert_eq!(characteristic_polynomial(&sum), charpoly_by_cofactors(&sum));
        let (roots, rest) = rational_roots(&characteristic_polynomial(&sum));
        assert_eq!(roots, vec![(int(-1), 1), (int(1), 1), (int(2), 1)]);
        assert!(rest.is_constant());
    }
}
