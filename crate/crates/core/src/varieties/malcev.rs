//! Mal'cev coordinates on the free nilpotent group of class 2.
//!
//! Every element is uniquely `x1^a1 ... xn^an * prod_{i<j} [xi, xj]^b_ij`.
//! Moving `x_i^q` left past `x_j^p` (`i < j`) costs `[x_j^p, x_i^q] =
//! [x_i, x_j]^(-pq)`, so
//!
//! ```text
//! (a, b) * (a', b') = (a + a', b + b' - sum_{i<j} a_j a'_i)
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::finite_groups::GroupOps;
use crate::words::Word;

/// Number of basic commutators `[x_i, x_j]`, `i < j`, on `n` generators.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of `[x_i, x_j]` (1-based, `i < j`) in lexicographic order.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(1 <= i && i < j && j <= n);
    let before: usize = (1..i).map(|k| n - k).sum();
    before + (j - i - 1)
}

/// All pairs `(i, j)`, `i < j`, in basis order.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MalcevVector {
    /// Exponent sums `a_1..a_n`.
    pub a: Vec<BigInt>,
    /// Commutator exponents `b_ij` in [`pairs`] order.
    pub b: Vec<BigInt>,
}

impl MalcevVector {
    pub fn zero(n: usize) -> Self {
        MalcevVector { a: vec![BigInt::zero(); n], b: vec![BigInt::zero(); pair_count(n)] }
    }

    pub fn generator(n: usize, i: usize, exp: &BigInt) -> Self {
        let mut v = Self::zero(n);
        v.a[i - 1] = exp.clone();
        v
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn b_at(&self, i: usize, j: usize) -> &BigInt {
        &self.b[pair_index(self.rank(), i, j)]
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().chain(&self.b).all(Zero::is_zero)
    }

    pub fn is_central(&self) -> bool {
        self.a.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &MalcevVector) -> MalcevVector {
        let n = self.rank();
        let a = self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect();
        let mut b: Vec<BigInt> = self.b.iter().zip(&other.b).map(|(x, y)| x + y).collect();
        for (k, (i, j)) in pairs(n).into_iter().enumerate() {
            b[k] -= &self.a[j - 1] * &other.a[i - 1];
        }
        MalcevVector { a, b }
    }

    pub fn inverse(&self) -> MalcevVector {
        let n = self.rank();
        let a = self.a.iter().map(|x| -x).collect();
        let b = pairs(n)
            .into_iter()
            .enumerate()
            .map(|(k, (i, j))| -&self.b[k] - &self.a[i - 1] * &self.a[j - 1])
            .collect();
        MalcevVector { a, b }
    }
}

impl fmt::Display for MalcevVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.a.iter().map(BigInt::to_string).collect();
        let b: Vec<String> = self.b.iter().map(BigInt::to_string).collect();
        write!(f, "a=({}) b=({})", a.join(","), b.join(","))
    }
}

/// The free class-2 nilpotent group of rank `n`, in Mal'cev coordinates.
#[derive(Clone, Copy, Debug)]
pub struct FreeClass2 {
    pub rank: usize,
}

impl FreeClass2 {
    pub fn generators(&self) -> Vec<MalcevVector> {
        (1..=self.rank).map(|i| MalcevVector::generator(self.rank, i, &BigInt::from(1))).collect()
    }
}

impl GroupOps for FreeClass2 {
    type Elem = MalcevVector;

    fn identity(&self) -> MalcevVector {
        MalcevVector::zero(self.rank)
    }

    fn mul(&self, a: &MalcevVector, b: &MalcevVector) -> MalcevVector {
        a.mul(b)
    }

    fn inv(&self, a: &MalcevVector) -> MalcevVector {
        a.inverse()
    }

    fn pow(&self, a: &MalcevVector, exp: &BigInt) -> MalcevVector {
        // x^k for x = (a, b): (k a, k b + C(k,2) * (-sum_{i<j} a_j a_i))
        let n = self.rank;
        let k = exp;
        let half = (k * (k - 1)) / 2;
        let na = a.a.iter().map(|x| x * k).collect();
        let nb = pairs(n)
            .into_iter()
            .enumerate()
            .map(|(idx, (i, j))| &a.b[idx] * k - &half * &a.a[j - 1] * &a.a[i - 1])
            .collect();
        MalcevVector { a: na, b: nb }
    }
}

/// Collected form of a constant-free word modulo the class-2 law.
pub fn malcev_normal_form(w: &Word) -> Result<MalcevVector> {
    if w.has_constants() {
        return Err(Error::ConstantsNotSupported);
    }
    let group = FreeClass2 { rank: w.var_count() };
    w.evaluate_in(&group, &group.generators(), |_| unreachable!("constant-free"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{parse_word, WordContext};

    fn nf(text: &str, n: usize) -> MalcevVector {
        malcev_normal_form(&parse_word(text, &WordContext::constant_free(n)).unwrap()).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn basic_commutator() {
        let v = nf("[x1,x2]", 2);
        assert_eq!((v.a, v.b), (big(&[0, 0]), big(&[1])));
    }

    #[test]
    fn reversed_product() {
        let v = nf("x2*x1", 2);
        assert_eq!((v.a, v.b), (big(&[1, 1]), big(&[-1])));
        // x1 x2 [x2, x1] = x2 x1
        assert_eq!(nf("x1*x2*[x2,x1]", 2), nf("x2*x1", 2));
    }

    #[test]
    fn cube() {
        let v = nf("x1^3", 3);
        assert_eq!((v.a, v.b), (big(&[3, 0, 0]), big(&[0, 0, 0])));
    }

    #[test]
    fn pair_order_is_lexicographic() {
        assert_eq!(pairs(4), vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
        for (k, (i, j)) in pairs(4).into_iter().enumerate() {
            assert_eq!(pair_index(4, i, j), k);
        }
    }

    #[test]
    fn pow_matches_repeated_product() {
        let g = FreeClass2 { rank: 3 };
        let x = nf("x2*x1^2*x3*[x1,x3]", 3);
        for k in -5i64..=5 {
            let naive = (0..k.abs()).fold(g.identity(), |acc, _| if k < 0 { acc.mul(&x.inverse()) } else { acc.mul(&x) });
            assert_eq!(g.pow(&x, &BigInt::from(k)), naive, "k = {k}");
        }
    }

    #[test]
    fn inverse_cancels() {
        let x = nf("x2^3*x1^-2*x3*x1", 3);
        assert!(x.mul(&x.inverse()).is_zero());
        assert!(x.inverse().mul(&x).is_zero());
    }

    #[test]
    fn constants_rejected() {
        let g = std::sync::Arc::new(crate::finite_groups::build_cyclic(2).unwrap());
        let w = parse_word("g1*x1", &WordContext::new(1, Some(g))).unwrap();
        assert_eq!(malcev_normal_form(&w), Err(Error::ConstantsNotSupported));
    }
}
