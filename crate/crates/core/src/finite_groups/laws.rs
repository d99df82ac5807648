use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ElemId, FiniteGroup, GEmbedding};
use crate::error::{Error, Result};
use crate::varieties::{laws_of, VarietySpec};
use crate::words::Word;

/// Exhaustive checks are allowed up to this many substitutions per law.
pub const EXHAUSTIVE_LAW_BOUND: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LawBudget {
    /// Every substitution; fails with `BudgetExceeded` above the bound.
    Exhaustive,
    /// `count` seeded random substitutions per law.
    Sample { count: usize, seed: u64 },
    /// Exhaustive when within the bound, otherwise sampled.
    Auto { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawViolation {
    pub law: Word,
    pub point: Vec<ElemId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawCheck {
    pub exhaustive: bool,
    pub counterexample: Option<LawViolation>,
}

impl LawCheck {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Checks that `h` satisfies every defining law of `variety`.
pub fn satisfies_laws(h: &FiniteGroup, variety: &VarietySpec, budget: LawBudget) -> Result<LawCheck> {
    let laws = laws_of(variety);
    let h_ref = std::sync::Arc::new(h.clone());
    let lambda = GEmbedding::trivial(&h_ref);
    let mut exhaustive_all = true;
    for law in laws {
        let arity = law.var_count();
        let total = (h.order() as u128).checked_pow(arity as u32).unwrap_or(u128::MAX);
        let exhaustive = match budget {
            LawBudget::Exhaustive if total > EXHAUSTIVE_LAW_BOUND => {
                return Err(Error::BudgetExceeded(format!(
                    "{total} substitutions exceed the exhaustive bound {EXHAUSTIVE_LAW_BOUND}"
                )))
            }
            LawBudget::Exhaustive => true,
            LawBudget::Sample { .. } => false,
            LawBudget::Auto { .. } => total <= EXHAUSTIVE_LAW_BOUND,
        };
        exhaustive_all &= exhaustive;
        let compiled = law.compile(&h_ref, &lambda)?;
        let identity = h.identity();
        if exhaustive {
            let mut point = vec![0 as ElemId; arity];
            loop {
                if compiled.eval(h, &point) != identity {
                    return Ok(LawCheck { exhaustive: true, counterexample: Some(LawViolation { law, point }) });
                }
                if !advance(&mut point, h.order() as ElemId) {
                    break;
                }
            }
        } else {
            let (count, seed) = match budget {
                LawBudget::Sample { count, seed } | LawBudget::Auto { count, seed } => (count, seed),
                LawBudget::Exhaustive => unreachable!(),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..count {
                let point: Vec<ElemId> = (0..arity).map(|_| rng.gen_range(0..h.order() as ElemId)).collect();
                if compiled.eval(h, &point) != identity {
                    return Ok(LawCheck { exhaustive: false, counterexample: Some(LawViolation { law, point }) });
                }
            }
        }
    }
    Ok(LawCheck { exhaustive: exhaustive_all, counterexample: None })
}

/// Lexicographic odometer; returns false after the last tuple.
pub(crate) fn advance(point: &mut [ElemId], order: ElemId) -> bool {
    for slot in point.iter_mut().rev() {
        *slot += 1;
        if *slot < order {
            return true;
        }
        *slot = 0;
    }
    false
}
