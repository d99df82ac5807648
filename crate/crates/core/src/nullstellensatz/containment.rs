//! Sampled check of `<S^{G[X]}> * Id_V(X) ⊆ Rad_H(S)` for a model `H ∈ V`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::finite_groups::{satisfies_laws, ElemId, FiniteGroup, GEmbedding, LawBudget};
use crate::geometry::{solve_finite, EquationSystem};
use crate::varieties::{sample_identities, VarietySpec};
use crate::words::{random_word, Word};
use crate::Limits;

/// Law-check samples used when the law space is too large to exhaust.
const LAW_SAMPLES: usize = 2000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContainmentFailure {
    pub word: Word,
    pub point: Vec<ElemId>,
    pub value: ElemId,
}

#[derive(Clone, Debug)]
pub struct ContainmentReport {
    pub cases_run: usize,
    pub points: usize,
    pub failures: Vec<ContainmentFailure>,
    pub seed: u64,
    pub budget: usize,
}

impl ContainmentReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Samples `budget` elements `u = (prod of conjugates of s^{+-1}) * v` with
/// `v` an identity instance of `variety`, and checks that each vanishes on
/// all of `V_H(S)`.
pub fn containment_sample_check(
    system: &EquationSystem,
    variety: &VarietySpec,
    h: &Arc<FiniteGroup>,
    lambda: &GEmbedding,
    budget: usize,
    seed: u64,
    limits: &Limits,
) -> Result<ContainmentReport> {
    let check = satisfies_laws(h, variety, LawBudget::Auto { count: LAW_SAMPLES, seed })?;
    if let Some(v) = check.counterexample {
        return Err(Error::ModelNotInVariety(format!("{} fails at {:?}", v.law, v.point)));
    }
    let set = solve_finite(system, h, lambda, limits, 1)?;
    let ctx = system.context();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for _ in 0..budget {
        let mut u = Word::identity(ctx);
        if !system.is_empty() {
            for _ in 0..rng.gen_range(1..=3) {
                let s = &system.words()[rng.gen_range(0..system.len())];
                let s = if rng.gen_bool(0.5) { s.clone() } else { s.inverse() };
                let c = random_word(&mut rng, ctx, 4);
                u = u.concat(&s.conjugate(&c)?)?;
            }
        }
        for v in sample_identities(&mut rng, variety, ctx, 1, 3) {
            u = u.concat(&v)?;
        }
        let compiled = u.compile(h, lambda)?;
        let bad = set.points().iter().map(|p| (p, compiled.eval(h, p))).find(|(_, value)| *value != h.identity());
        if let Some((p, value)) = bad {
            failures.push(ContainmentFailure { word: u, point: p.clone(), value });
        }
    }
    Ok(ContainmentReport { cases_run: budget, points: set.len(), failures, seed, budget })
}
