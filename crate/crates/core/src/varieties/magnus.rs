//! Magnus embedding of the free metabelian group.
//!
//! `x_i` maps to the pair `(e_i, u_i)`: the monomial `t_i` and the basis
//! vector `u_i` of the free module over `Z[t_1^±1, ..., t_n^±1]`.
//! Multiplication is `(e, m) * (e', m') = (e + e', m * t^e' + m')`, the
//! lower-triangular matrix product `[[t^e, 0], [m, 1]] * [[t^e', 0], [m', 1]]`.
//! The kernel on the free group is its second derived subgroup.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::laurent::LaurentPoly;
use crate::error::{Error, Result};
use crate::finite_groups::GroupOps;
use crate::words::{Syllable, Word};

/// Largest single exponent expanded into a geometric sum.
pub const MAX_MAGNUS_EXPONENT: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MagnusMatrix {
    pub expo: Vec<i64>,
    pub module: Vec<LaurentPoly>,
}

impl MagnusMatrix {
    pub fn identity(n: usize) -> Self {
        MagnusMatrix { expo: vec![0; n], module: vec![LaurentPoly::zero(); n] }
    }

    pub fn generator(n: usize, i: usize) -> Self {
        let mut m = Self::identity(n);
        m.expo[i - 1] = 1;
        m.module[i - 1] = LaurentPoly::monomial(vec![0; n], BigInt::from(1));
        m
    }

    pub fn is_identity(&self) -> bool {
        self.expo.iter().all(|&e| e == 0) && self.module.iter().all(LaurentPoly::is_zero)
    }

    pub fn mul(&self, other: &MagnusMatrix) -> MagnusMatrix {
        let expo = self.expo.iter().zip(&other.expo).map(|(a, b)| a + b).collect();
        let module = self.module.iter().zip(&other.module).map(|(m, m2)| m.shift(&other.expo).add(m2)).collect();
        MagnusMatrix { expo, module }
    }

    pub fn inverse(&self) -> MagnusMatrix {
        let neg: Vec<i64> = self.expo.iter().map(|e| -e).collect();
        let module = self.module.iter().map(|m| m.shift(&neg).neg()).collect();
        MagnusMatrix { expo: neg, module }
    }
}

impl fmt::Display for MagnusMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let expo: Vec<String> = self.expo.iter().map(i64::to_string).collect();
        let module: Vec<String> = self.module.iter().map(|p| format!("[{p}]")).collect();
        write!(f, "t^({}) | {}", expo.join(","), module.join(" "))
    }
}

/// The free metabelian group of rank `n` inside the Magnus matrices.
#[derive(Clone, Copy, Debug)]
pub struct FreeMetabelian {
    pub rank: usize,
}

impl GroupOps for FreeMetabelian {
    type Elem = MagnusMatrix;

    fn identity(&self) -> MagnusMatrix {
        MagnusMatrix::identity(self.rank)
    }

    fn mul(&self, a: &MagnusMatrix, b: &MagnusMatrix) -> MagnusMatrix {
        a.mul(b)
    }

    fn inv(&self, a: &MagnusMatrix) -> MagnusMatrix {
        a.inverse()
    }
}

/// Image of a constant-free word under the Magnus embedding.
pub fn magnus_image(w: &Word) -> Result<MagnusMatrix> {
    if w.has_constants() {
        return Err(Error::ConstantsNotSupported);
    }
    let n = w.var_count();
    let mut acc = MagnusMatrix::identity(n);
    for s in w.syllables() {
        let Syllable::Var { index, exp } = s else { unreachable!("constant-free") };
        let k = exp.abs().to_u64().filter(|&k| k <= MAX_MAGNUS_EXPONENT);
        let k = k.ok_or_else(|| Error::ExponentTooLarge(exp.to_string()))?;
        // x_i^k = (k e_i, u_i (1 + t_i + ... + t_i^(k-1)))
        let mut power = MagnusMatrix::identity(n);
        power.expo[index - 1] = k as i64;
        let mut poly = LaurentPoly::zero();
        for e in 0..k as i64 {
            let mut mono = vec![0; n];
            mono[index - 1] = e;
            poly.add_term(mono, BigInt::from(1));
        }
        power.module[index - 1] = poly;
        if exp.is_negative() {
            power = power.inverse();
        }
        acc = acc.mul(&power);
    }
    Ok(acc)
}
