//! Human-readable matrix rendering for standard output.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{Matrix, RatFunc, Scalar};
use crate::model::ExpansionField;

pub trait Pretty: ExpansionField {
    /// `preferred` is a prefactor to try first when pulling a common
    /// `1/(L·d^k)` out of a symbolic matrix.
    fn pretty(m: &Matrix<Self>, preferred: Option<i64>) -> String;
}

impl Pretty for Scalar {
    fn pretty(m: &Matrix<Self>, _preferred: Option<i64>) -> String {
        m.to_string()
    }
}

impl Pretty for RatFunc {
    fn pretty(m: &Matrix<Self>, preferred: Option<i64>) -> String {
        symbolic_matrix(m, preferred)
    }
}

/// Writes a matrix whose nonzero entries are all `c·d^-k` (one `k > 0`) as
/// `1/(L·d^k) ·` followed by an integer matrix; anything else is printed
/// entrywise.
pub fn symbolic_matrix(m: &Matrix<RatFunc>, preferred: Option<i64>) -> String {
    common_prefactor(m, preferred).unwrap_or_else(|| m.to_string())
}

fn common_prefactor(m: &Matrix<RatFunc>, preferred: Option<i64>) -> Option<String> {
    let mut power = None;
    let mut coeffs = Vec::with_capacity(m.entries().len());
    for e in m.entries() {
        if e.is_zero() {
            coeffs.push(Scalar::zero());
            continue;
        }
        let (c, k) = e.as_monomial()?;
        if *power.get_or_insert(k) != k {
            return None;
        }
        coeffs.push(c);
    }
    let k = -power?;
    if k <= 0 {
        return None;
    }
    let lcm = coeffs
        .iter()
        .fold(num_bigint::BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let candidates = preferred
        .map(|p| Scalar::from_integer(p.into()))
        .into_iter()
        .chain(std::iter::once(Scalar::from_integer(lcm)));
    for l in candidates {
        let scaled: Vec<Scalar> = coeffs.iter().map(|c| c * &l).collect();
        if scaled.iter().all(Scalar::is_integer) {
            let ints = Matrix::from_vec(m.rows(), m.cols(), scaled).expect("same shape");
            let d = if k == 1 { "d".to_string() } else { format!("d^{k}") };
            return Some(format!("1/({l}·{d}) ·\n{ints}"));
        }
    }
    None
}
