use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{hnf, pivot_columns, smith_diagonal, snf, IntMatrix};
use crate::error::{Error, Result};
use crate::finite_groups::GroupOps;

/// A subgroup of `Z^r + Z/d_1 + ... + Z/d_s`, given by generator rows.
/// The last `s` coordinates of every vector are read modulo the moduli.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugLattice {
    free_rank: usize,
    moduli: Vec<BigInt>,
    generators: IntMatrix,
}

impl AugLattice {
    pub fn new(free_rank: usize, moduli: Vec<BigInt>, generators: IntMatrix) -> Result<Self> {
        let dim = free_rank + moduli.len();
        if generators.cols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: generators.cols() });
        }
        if let Some(d) = moduli.iter().find(|d| **d < BigInt::from(2)) {
            return Err(Error::InvalidParameter(format!("modulus {d} is below 2")));
        }
        let mut lattice = AugLattice { free_rank, moduli, generators };
        for i in 0..lattice.generators.rows() {
            for (j, d) in lattice.moduli.iter().enumerate() {
                let c = free_rank + j;
                lattice.generators[(i, c)] = lattice.generators[(i, c)].mod_floor(d);
            }
        }
        Ok(lattice)
    }

    pub fn from_rows(free_rank: usize, moduli: Vec<BigInt>, rows: &[Vec<BigInt>]) -> Result<Self> {
        let dim = free_rank + moduli.len();
        Self::new(free_rank, moduli, IntMatrix::from_rows(dim, rows)?)
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn moduli(&self) -> &[BigInt] {
        &self.moduli
    }

    pub fn generators(&self) -> &IntMatrix {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.free_rank + self.moduli.len()
    }

    /// Generators stacked with one row `d_j * e_{r+j}` per torsion coordinate.
    pub fn relation_matrix(&self) -> IntMatrix {
        let dim = self.dim();
        let mut extra = IntMatrix::zeros(self.moduli.len(), dim);
        for (j, d) in self.moduli.iter().enumerate() {
            extra[(j, self.free_rank + j)] = d.clone();
        }
        self.generators.stack(&extra).expect("same width")
    }

    /// Reduces the torsion coordinates of `v` into `[0, d_j)`.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut out = v.to_vec();
        for (j, d) in self.moduli.iter().enumerate() {
            out[self.free_rank + j] = out[self.free_rank + j].mod_floor(d);
        }
        out
    }

    /// `sum c_i * gen_i`, torsion part reduced.
    pub fn combine(&self, coeffs: &[BigInt]) -> Result<Vec<BigInt>> {
        Ok(self.reduce(&self.generators.left_apply(coeffs)?))
    }

    pub fn contains(&self, v: &[BigInt]) -> Result<bool> {
        Ok(lattice_member(v, self)?.is_some())
    }
}

/// Solves `v = c * H` for `H` in row echelon form.
pub(crate) fn solve_echelon(h: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut rem = v.to_vec();
    let mut coeffs = vec![BigInt::zero(); h.rows()];
    for (r, c) in pivot_columns(h).into_iter().enumerate() {
        let (q, rest) = rem[c].div_rem(&h[(r, c)]);
        if !rest.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for (j, x) in rem.iter_mut().enumerate() {
                *x -= &q * &h[(r, j)];
            }
        }
        coeffs[r] = q;
    }
    rem.iter().all(Zero::is_zero).then_some(coeffs)
}

/// Membership certificate: coefficients `c` with `sum c_i * gen_i = v`
/// (free part exactly, torsion part modulo the moduli), or `None` when
/// `v` is not in the lattice.
pub fn lattice_member(v: &[BigInt], lattice: &AugLattice) -> Result<Option<Vec<BigInt>>> {
    LatticeSolver::new(lattice).solve(v)
}

/// [`lattice_member`] with the echelon form computed once.
#[derive(Clone, Debug)]
pub struct LatticeSolver {
    lattice: AugLattice,
    h: IntMatrix,
    u: IntMatrix,
}

impl LatticeSolver {
    pub fn new(lattice: &AugLattice) -> Self {
        let (h, u) = hnf(&lattice.relation_matrix());
        LatticeSolver { lattice: lattice.clone(), h, u }
    }

    pub fn lattice(&self) -> &AugLattice {
        &self.lattice
    }

    pub fn solve(&self, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        let lattice = &self.lattice;
        if v.len() != lattice.dim() {
            return Err(Error::DimensionMismatch { expected: lattice.dim(), found: v.len() });
        }
        let v = lattice.reduce(v);
        let Some(c_h) = solve_echelon(&self.h, &v) else { return Ok(None) };
        let c_full = self.u.left_apply(&c_h)?;
        let certificate = c_full[..lattice.generators.rows()].to_vec();
        debug_assert_eq!(lattice.combine(&certificate)?, v, "unsound lattice certificate");
        Ok(Some(certificate))
    }
}

/// A finitely generated abelian group `Z/d_1 + ... + Z/d_k + Z^f` with
/// `d_1 | d_2 | ...`, together with the projection from ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FGAbelian {
    /// One entry per canonical coordinate: a torsion factor `>= 2`, or `0`
    /// for a free coordinate. Torsion coordinates come first.
    factors: Vec<BigInt>,
    projection: IntMatrix,
}

/// `(Z^r + Z/d_1 + ... + Z/d_s) / L` in canonical form.
pub fn quotient_presentation(lattice: &AugLattice) -> FGAbelian {
    let relations = lattice.relation_matrix();
    let (d, _u, v) = snf(&relations);
    let diagonal = smith_diagonal(&d);
    let kept: Vec<usize> = (0..diagonal.len()).filter(|&i| !diagonal[i].is_one()).collect();
    let mut projection = IntMatrix::zeros(lattice.dim(), kept.len());
    for (k, &i) in kept.iter().enumerate() {
        for r in 0..lattice.dim() {
            projection[(r, k)] = v[(r, i)].clone();
        }
    }
    let factors = kept.iter().map(|&i| diagonal[i].clone()).collect();
    FGAbelian { factors, projection }
}

impl FGAbelian {
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.factors.iter().filter(|d| !d.is_zero()).cloned().collect()
    }

    pub fn free_rank(&self) -> usize {
        self.factors.iter().filter(|d| d.is_zero()).count()
    }

    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn projection(&self) -> &IntMatrix {
        &self.projection
    }

    pub fn ambient_dim(&self) -> usize {
        self.projection.rows()
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    fn normalize(&self, mut y: Vec<BigInt>) -> Vec<BigInt> {
        for (x, d) in y.iter_mut().zip(&self.factors) {
            if !d.is_zero() {
                *x = x.mod_floor(d);
            }
        }
        y
    }

    /// Canonical coordinates of the image of an ambient vector.
    pub fn project(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        Ok(self.normalize(self.projection.left_apply(v)?))
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        self.normalize(a.iter().zip(b).map(|(x, y)| x + y).collect())
    }

    pub fn neg(&self, a: &[BigInt]) -> Vec<BigInt> {
        self.normalize(a.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, a: &[BigInt], k: &BigInt) -> Vec<BigInt> {
        self.normalize(a.iter().map(|x| x * k).collect())
    }

    pub fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.rank()]
    }

    pub fn is_zero(&self, a: &[BigInt]) -> bool {
        a.iter().all(Zero::is_zero)
    }

    /// `None` for elements of infinite order.
    pub fn element_order(&self, a: &[BigInt]) -> Option<BigInt> {
        let mut order = BigInt::one();
        for (x, d) in a.iter().zip(&self.factors) {
            if x.is_zero() {
                continue;
            }
            if d.is_zero() {
                return None;
            }
            order = order.lcm(&(d / d.gcd(x)));
        }
        Some(order)
    }

    pub fn format_element(&self, a: &[BigInt]) -> String {
        if a.len() == 1 {
            return a[0].to_string();
        }
        let parts: Vec<String> = a.iter().map(BigInt::to_string).collect();
        format!("({})", parts.join(","))
    }
}

impl GroupOps for FGAbelian {
    type Elem = Vec<BigInt>;

    fn identity(&self) -> Vec<BigInt> {
        self.zero()
    }

    fn mul(&self, a: &Vec<BigInt>, b: &Vec<BigInt>) -> Vec<BigInt> {
        self.add(a, b)
    }

    fn inv(&self, a: &Vec<BigInt>) -> Vec<BigInt> {
        self.neg(a)
    }

    fn pow(&self, a: &Vec<BigInt>, exp: &BigInt) -> Vec<BigInt> {
        self.scale(a, exp)
    }
}

impl fmt::Display for FGAbelian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let mut parts: Vec<String> = self.invariant_factors().iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank() {
            0 => {}
            1 => parts.push("Z".into()),
            k => parts.push(format!("Z^{k}")),
        }
        f.write_str(&parts.join(" x "))
    }
}
