//! The normal closure of a finite set `T` in the free class-2 nilpotent
//! group `F`, in Mal'cev coordinates.
//!
//! In class 2, conjugates of `t` differ from `t` by the central commutators
//! `[t, x_j]`, so the closure is `{prod_k t_k^kappa_k * z}` with `z` in the
//! central lattice spanned by the `b`-parts of `[t_k, x_j]` and of the
//! products `prod_k t_k^kappa_k` over an integer kernel basis of the
//! weight-1 parts.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::Result;
use crate::finite_groups::GroupOps;
use crate::intlinalg::{hnf, AugLattice, IntMatrix, LatticeSolver};
use crate::varieties::{FreeClass2, MalcevVector};

/// Label of one generator of the central lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CentralGenerator {
    /// `b([t_k, x_j])`; both indices 1-based.
    Commutator { relator: usize, var: usize },
    /// `b(prod_k t_k^kappa_k)` for the given kernel basis row.
    KernelProduct(usize),
}

/// `F / <T^F>` with membership decided in Mal'cev coordinates.
#[derive(Clone, Debug)]
pub struct Class2Quotient {
    rank: usize,
    relators: Vec<MalcevVector>,
    a_solver: LatticeSolver,
    kernel: Vec<Vec<BigInt>>,
    central_generators: Vec<CentralGenerator>,
    central_solver: LatticeSolver,
}

/// Decomposition `v = prod_k t_k^kappa_k * z` with
/// `b(z) = sum_r mu_r * central_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Class2Decomposition {
    pub kappa: Vec<BigInt>,
    pub mu: Vec<BigInt>,
}

impl Class2Quotient {
    pub fn new(rank: usize, relators: Vec<MalcevVector>) -> Result<Self> {
        let f = FreeClass2 { rank };
        let a_rows: Vec<Vec<BigInt>> = relators.iter().map(|t| t.a.clone()).collect();
        let a_lattice = AugLattice::from_rows(rank, Vec::new(), &a_rows)?;
        let (h, u) = hnf(&IntMatrix::from_rows(rank, &a_rows)?);
        let kernel: Vec<Vec<BigInt>> =
            (0..h.rows()).filter(|&r| h.row(r).iter().all(Zero::is_zero)).map(|r| u.row(r).to_vec()).collect();

        let mut quotient = Class2Quotient {
            rank,
            relators,
            a_solver: LatticeSolver::new(&a_lattice),
            kernel,
            central_generators: Vec::new(),
            central_solver: LatticeSolver::new(&AugLattice::from_rows(0, Vec::new(), &[])?),
        };
        let mut rows = Vec::new();
        for (k, t) in quotient.relators.iter().enumerate() {
            for j in 1..=rank {
                let x = MalcevVector::generator(rank, j, &BigInt::from(1));
                let c = f.mul(&f.mul(&f.inv(t), &f.inv(&x)), &f.mul(t, &x));
                quotient.central_generators.push(CentralGenerator::Commutator { relator: k + 1, var: j });
                rows.push(c.b);
            }
        }
        for r in 0..quotient.kernel.len() {
            let p = quotient.power_product(&quotient.kernel[r]);
            debug_assert!(p.is_central());
            quotient.central_generators.push(CentralGenerator::KernelProduct(r));
            rows.push(p.b);
        }
        let width = crate::varieties::pair_count(rank);
        quotient.central_solver = LatticeSolver::new(&AugLattice::from_rows(width, Vec::new(), &rows)?);
        Ok(quotient)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relators(&self) -> &[MalcevVector] {
        &self.relators
    }

    /// Integer kernel basis of the weight-1 parts of the relators.
    pub fn kernel(&self) -> &[Vec<BigInt>] {
        &self.kernel
    }

    pub fn central_generators(&self) -> &[CentralGenerator] {
        &self.central_generators
    }

    /// Rows of the central lattice, in [`central_generators`](Self::central_generators) order.
    pub fn central_lattice(&self) -> &AugLattice {
        self.central_solver.lattice()
    }

    pub fn weight_one_lattice(&self) -> &AugLattice {
        self.a_solver.lattice()
    }

    /// `prod_k t_k^kappa_k`, factors in relator order.
    pub fn power_product(&self, kappa: &[BigInt]) -> MalcevVector {
        let f = FreeClass2 { rank: self.rank };
        self.relators.iter().zip(kappa).fold(f.identity(), |acc, (t, k)| f.mul(&acc, &f.pow(t, k)))
    }

    pub fn decompose(&self, v: &MalcevVector) -> Result<Option<Class2Decomposition>> {
        let Some(kappa) = self.a_solver.solve(&v.a)? else { return Ok(None) };
        let f = FreeClass2 { rank: self.rank };
        let residual = f.mul(&f.inv(&self.power_product(&kappa)), v);
        debug_assert!(residual.is_central());
        Ok(self.central_solver.solve(&residual.b)?.map(|mu| Class2Decomposition { kappa, mu }))
    }

    /// `v` lies in the normal closure, i.e. is trivial in the quotient.
    pub fn contains(&self, v: &MalcevVector) -> Result<bool> {
        Ok(self.decompose(v)?.is_some())
    }
}

impl fmt::Display for Class2Quotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(MalcevVector::to_string).collect();
        write!(
            f,
            "N2({}) / <{}>; weight-1 lattice {}; central lattice {}",
            self.rank,
            rels.join(", "),
            self.weight_one_lattice().generators(),
            self.central_lattice().generators()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::varieties::malcev_normal_form;
    use crate::words::{parse_word, WordContext};

    fn mv(text: &str, n: usize) -> MalcevVector {
        malcev_normal_form(&parse_word(text, &WordContext::constant_free(n)).unwrap()).unwrap()
    }

    #[test]
    fn conjugates_and_commutators_are_members() {
        let q = Class2Quotient::new(2, vec![mv("x1^2", 2)]).unwrap();
        assert!(q.contains(&mv("x2^-1*x1^2*x2", 2)).unwrap());
        assert!(q.contains(&mv("[x1^2,x2]", 2)).unwrap());
        assert!(!q.contains(&mv("[x1,x2]", 2)).unwrap());
        assert!(!q.contains(&mv("x1", 2)).unwrap());
    }

    #[test]
    fn kernel_products_enter_the_central_lattice() {
        // x1*x2 and x2*x1 differ by a commutator and have equal weight-1 parts
        let q = Class2Quotient::new(2, vec![mv("x1*x2", 2), mv("x2*x1", 2)]).unwrap();
        assert_eq!(q.kernel().len(), 1);
        assert!(q.contains(&mv("[x1,x2]", 2)).unwrap());
    }

    #[test]
    fn rank_one_has_no_central_part() {
        let q = Class2Quotient::new(1, vec![mv("x1^3", 1)]).unwrap();
        assert!(q.contains(&mv("x1^-6", 1)).unwrap());
        assert!(!q.contains(&mv("x1^2", 1)).unwrap());
    }
}
