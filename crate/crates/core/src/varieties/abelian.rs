use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::finite_groups::{greedy_generators, ElemId, FiniteGroup, GroupOps};
use crate::intlinalg::{smith_diagonal, snf, IntMatrix};
use crate::words::{Syllable, Word};

/// A fixed isomorphism `G ≅ Z/d_1 + ... + Z/d_s` for a finite abelian `G`,
/// with `d_1 | d_2 | ...` and every `d_j >= 2`.
#[derive(Clone, Debug)]
pub struct AbelianDecomposition {
    moduli: Vec<BigInt>,
    coords: Vec<Vec<BigInt>>,
    lookup: HashMap<Vec<BigInt>, ElemId>,
}

impl AbelianDecomposition {
    /// Computes the decomposition from a greedy generating set: the
    /// relation lattice of the generators is triangular (each generator's
    /// relative order against the previous ones), and its Smith form gives
    /// the invariant factors.
    pub fn of(g: &FiniteGroup) -> Result<Self> {
        if !g.is_abelian() {
            return Err(Error::NonAbelianCoefficients);
        }
        let gens = greedy_generators(g);
        let k = gens.len();
        // exponent vector over `gens` for every element reached so far
        let mut rep: HashMap<ElemId, Vec<i64>> = HashMap::from([(g.identity(), vec![0; k])]);
        let mut relations = IntMatrix::zeros(k, k);
        for (i, &gen) in gens.iter().enumerate() {
            let mut power = gen;
            let mut rel_order = 1i64;
            while !rep.contains_key(&power) {
                power = g.product(power, gen);
                rel_order += 1;
            }
            relations[(i, i)] = BigInt::from(rel_order);
            for (j, &c) in rep[&power].iter().enumerate() {
                relations[(i, j)] -= c;
            }
            let old: Vec<(ElemId, Vec<i64>)> = rep.iter().map(|(a, v)| (*a, v.clone())).collect();
            let mut step = g.identity();
            for e in 1..rel_order {
                step = g.product(step, gen);
                for (a, v) in &old {
                    let mut v = v.clone();
                    v[i] = e;
                    rep.insert(g.product(*a, step), v);
                }
            }
        }
        debug_assert_eq!(rep.len(), g.order());
        let (d, _u, v) = snf(&relations);
        let diagonal = smith_diagonal(&d);
        let kept: Vec<usize> = (0..k).filter(|&i| diagonal[i] > BigInt::from(1)).collect();
        let moduli: Vec<BigInt> = kept.iter().map(|&i| diagonal[i].clone()).collect();
        let mut coords = vec![Vec::new(); g.order()];
        for (a, exps) in &rep {
            let exps: Vec<BigInt> = exps.iter().map(|&e| BigInt::from(e)).collect();
            let image = v.left_apply(&exps)?;
            coords[*a as usize] = kept.iter().zip(&moduli).map(|(&i, d)| image[i].mod_floor(d)).collect();
        }
        let lookup = coords.iter().enumerate().map(|(a, c)| (c.clone(), a as ElemId)).collect();
        Ok(AbelianDecomposition { moduli, coords, lookup })
    }

    pub fn trivial() -> Self {
        AbelianDecomposition {
            moduli: Vec::new(),
            coords: vec![Vec::new()],
            lookup: HashMap::from([(Vec::new(), 0)]),
        }
    }

    /// Decomposition of an optional coefficient group (`None` is trivial).
    pub fn of_coeff(g: Option<&crate::words::GroupRef>) -> Result<Self> {
        match g {
            Some(g) => Self::of(g),
            None => Ok(Self::trivial()),
        }
    }

    pub fn moduli(&self) -> &[BigInt] {
        &self.moduli
    }

    pub fn order(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self, a: ElemId) -> &[BigInt] {
        &self.coords[a as usize]
    }

    /// Inverse of [`coords`](Self::coords); coordinates are reduced first.
    pub fn element(&self, coords: &[BigInt]) -> Option<ElemId> {
        let reduced: Vec<BigInt> = coords.iter().zip(&self.moduli).map(|(c, d)| c.mod_floor(d)).collect();
        self.lookup.get(&reduced).copied()
    }
}

/// Image of a word in `G[X]^ab = Z^n + G` for abelian `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Abelianized {
    pub exponents: Vec<BigInt>,
    pub torsion: Vec<BigInt>,
}

impl Abelianized {
    /// Exponent sums followed by torsion coordinates.
    pub fn to_vector(&self) -> Vec<BigInt> {
        self.exponents.iter().chain(&self.torsion).cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.iter().chain(&self.torsion).all(Zero::is_zero)
    }
}

/// Exponent sums of the variables and the torsion coordinates of the
/// product of the constants, under `decomposition` of the coefficient
/// group.
pub fn abelianization(w: &Word, decomposition: &AbelianDecomposition) -> Result<Abelianized> {
    match w.coeff() {
        Some(g) if !g.is_abelian() => return Err(Error::NonAbelianCoefficients),
        Some(g) if g.order() != decomposition.order() => {
            return Err(Error::MismatchedContext("decomposition belongs to a different group".into()))
        }
        _ => {}
    }
    let mut exponents = vec![BigInt::zero(); w.var_count()];
    let mut torsion = vec![BigInt::zero(); decomposition.moduli.len()];
    for s in w.syllables() {
        match s {
            Syllable::Var { index, exp } => exponents[index - 1] += exp,
            Syllable::Const(g) => {
                for (t, c) in torsion.iter_mut().zip(decomposition.coords(*g)) {
                    *t += c;
                }
            }
        }
    }
    for (t, d) in torsion.iter_mut().zip(&decomposition.moduli) {
        *t = t.mod_floor(d);
    }
    Ok(Abelianized { exponents, torsion })
}

/// `w` lies in the derived subgroup of `G[X]` (for abelian `G`): every
/// exponent sum vanishes and the constants multiply to the identity.
pub(crate) fn in_derived_subgroup(w: &Word) -> bool {
    let mut sums = vec![BigInt::zero(); w.var_count()];
    let mut product = w.coeff().map(|g| g.identity());
    for s in w.syllables() {
        match s {
            Syllable::Var { index, exp } => sums[index - 1] += exp,
            Syllable::Const(c) => {
                let g = w.coeff().expect("constant with coefficients");
                product = product.map(|p| g.mul(&p, c));
            }
        }
    }
    sums.iter().all(Zero::is_zero)
        && match (product, w.coeff()) {
            (Some(p), Some(g)) => p == g.identity(),
            _ => true,
        }
}
