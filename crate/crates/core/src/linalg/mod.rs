//! Exact rational linear algebra: scalars, sparse vectors, echelon forms,
//! chain complexes and their homology.

mod complex;
mod echelon;
mod sparse;

pub use complex::{
    coinvariants, homology, homology_with_action, ChainComplex, GradedSpace, HomologyGroup,
    HomologyModule, LinearMap,
};
pub use echelon::{Echelon, Insertion, Solver};
pub use sparse::SparseVec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact rational scalar. Always stored in lowest terms with a positive denominator.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

pub fn one() -> Scalar {
    Scalar::one()
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

/// `(-1)^e` as a scalar.
pub fn sign(odd: bool) -> Scalar {
    if odd {
        -one()
    } else {
        one()
    }
}

/// Canonical textual form: `p` for integers, `p/q` otherwise.
pub fn render(q: &Scalar) -> String {
    q.to_string()
}

pub fn parse_scalar(s: &str) -> Option<Scalar> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Scalar::new(n, d))
        }
        None => Some(Scalar::from_integer(s.parse().ok()?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalars_are_reduced() {
        let q = ratio(6, -4);
        assert_eq!(render(&q), "-3/2");
        assert_eq!(parse_scalar("-3/2"), Some(q));
        assert_eq!(parse_scalar("4/2"), Some(int(2)));
        assert_eq!(render(&int(2)), "2");
        assert_eq!(parse_scalar("1/0"), None);
        assert_eq!(parse_scalar("x"), None);
    }
}
