//! Algebraic sets, radicals and coordinate groups over a finite model.

mod ball;
mod system;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finite_groups::{subgroup_closure_with_cap, Closure, ElemId, FiniteGroup, GEmbedding, GroupOps, TupleGroup};
use crate::words::{CompiledWord, Word};
use crate::Limits;

pub use ball::{for_each_ball_word, word_ball, word_ball_prefix};
pub use system::{parse_system_file, EquationSystem, SystemFile};

/// `V_H(S)`: every point of `H^n` solving the system, in lexicographic order.
#[derive(Clone, Debug)]
pub struct AlgebraicSet {
    points: Vec<Vec<ElemId>>,
    model: Arc<FiniteGroup>,
    lambda: GEmbedding,
    system: EquationSystem,
}

impl AlgebraicSet {
    pub fn points(&self) -> &[Vec<ElemId>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn model(&self) -> &Arc<FiniteGroup> {
        &self.model
    }

    pub fn embedding(&self) -> &GEmbedding {
        &self.lambda
    }

    pub fn system(&self) -> &EquationSystem {
        &self.system
    }

    /// `(h1, h2)` with element names from the model.
    pub fn format_point(&self, point: &[ElemId]) -> String {
        let parts: Vec<String> = point.iter().map(|&a| self.model.element_name(a)).collect();
        format!("({})", parts.join(", "))
    }
}

fn check_model(system: &EquationSystem, h: &Arc<FiniteGroup>, lambda: &GEmbedding) -> Result<()> {
    if !lambda.target().same_as(h) {
        return Err(Error::EmbeddingMismatch("embedding target is not the model group".into()));
    }
    if let Some(g) = system.coeff() {
        if !lambda.source().same_as(g) {
            return Err(Error::EmbeddingMismatch("embedding source is not the coefficient group of the system".into()));
        }
    }
    Ok(())
}

fn decode(mut index: u128, order: u128, n: usize) -> Vec<ElemId> {
    let mut point = vec![0; n];
    for slot in point.iter_mut().rev() {
        *slot = (index % order) as ElemId;
        index /= order;
    }
    point
}

fn advance(point: &mut [ElemId], order: ElemId) {
    for slot in point.iter_mut().rev() {
        *slot += 1;
        if *slot < order {
            return;
        }
        *slot = 0;
    }
}

/// Enumerates `V_H(S)` exhaustively. The tuple space is split into
/// `workers` contiguous ranges; the result does not depend on `workers`.
pub fn solve_finite(
    system: &EquationSystem,
    h: &Arc<FiniteGroup>,
    lambda: &GEmbedding,
    limits: &Limits,
    workers: usize,
) -> Result<AlgebraicSet> {
    check_model(system, h, lambda)?;
    let n = system.var_count();
    let order = h.order() as u128;
    let total = (0..n).try_fold(1u128, |acc, _| acc.checked_mul(order)).unwrap_or(u128::MAX);
    if total > limits.enumeration_cap as u128 {
        return Err(Error::BudgetExceeded(format!(
            "|H|^n = {}^{} exceeds the enumeration cap {}",
            order, n, limits.enumeration_cap
        )));
    }
    let compiled: Vec<CompiledWord> = system.words().iter().map(|w| w.compile(h, lambda)).collect::<Result<_>>()?;
    let id = h.identity();
    let scan = |start: u128, end: u128| -> Vec<Vec<ElemId>> {
        let mut out = Vec::new();
        let mut point = decode(start, order, n);
        for _ in start..end {
            if compiled.iter().all(|w| w.eval(h, &point) == id) {
                out.push(point.clone());
            }
            advance(&mut point, order as ElemId);
        }
        out
    };
    let workers = workers.clamp(1, 64) as u128;
    let points = if workers == 1 || total < 4096 {
        scan(0, total)
    } else {
        let chunk = total.div_ceil(workers);
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|k| {
                    let start = (k * chunk).min(total);
                    let end = ((k + 1) * chunk).min(total);
                    let scan = &scan;
                    scope.spawn(move || scan(start, end))
                })
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("solver worker panicked")).collect()
        })
    };
    Ok(AlgebraicSet { points, model: h.clone(), lambda: lambda.clone(), system: system.clone() })
}

/// Outcome of [`radical_member_finite`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalVerdict {
    pub member: bool,
    /// The algebraic set is empty, so every word is a member.
    pub degenerate: bool,
    /// First point (in set order) where the word is not the identity.
    pub violating_point: Option<Vec<ElemId>>,
}

/// `w ∈ Rad_H(S)`: `w` vanishes at every point of `set`.
pub fn radical_member_finite(w: &Word, set: &AlgebraicSet) -> Result<RadicalVerdict> {
    let w = set.system.adopt(w)?;
    let compiled = w.compile(&set.model, &set.lambda)?;
    let id = set.model.identity();
    let violating_point = set.points.iter().find(|p| compiled.eval(&set.model, p) != id).cloned();
    Ok(RadicalVerdict { member: violating_point.is_none(), degenerate: set.is_empty(), violating_point })
}

/// `Γ_H(S)` realized inside `H^{|V_H(S)|}`.
#[derive(Clone, Debug)]
pub struct CoordinateGroupResult {
    /// The subgroup generated by the coordinate tuples and the diagonals
    /// of a generating set of `λ(G)`.
    pub closure: Closure<Vec<ElemId>>,
    /// `t_i`: the values of `x_i` across all solutions.
    pub generator_tuples: Vec<Vec<ElemId>>,
    /// `λ(g)` repeated across all solutions, indexed by `g`.
    pub constant_diagonals: Vec<Vec<ElemId>>,
    /// Names of the closure generators in order: `x1..xn` then constants.
    pub generator_labels: Vec<String>,
    /// The closure generators, aligned with `generator_labels`.
    pub generators: Vec<Vec<ElemId>>,
    model: Arc<FiniteGroup>,
}

impl CoordinateGroupResult {
    pub fn order(&self) -> usize {
        self.closure.order()
    }

    pub fn tuple_group(&self) -> TupleGroup<'_> {
        TupleGroup::new(&self.model, self.generator_tuples.first().map_or(1, Vec::len)).expect("nonempty set")
    }

    /// Image of `w` in `Γ_H(S)` as a tuple.
    pub fn evaluate(&self, w: &Word) -> Result<Vec<ElemId>> {
        let tg = self.tuple_group();
        w.evaluate_in(&tg, &self.generator_tuples, |g| self.constant_diagonals[g as usize].clone())
    }

    /// The image of `w` is trivial.
    pub fn kills(&self, w: &Word) -> Result<bool> {
        let tg = self.tuple_group();
        Ok(tg.is_identity(&self.evaluate(w)?))
    }
}

/// Builds `Γ_H(S)` for a nonempty algebraic set.
pub fn coordinate_group(set: &AlgebraicSet, limits: &Limits) -> Result<CoordinateGroupResult> {
    if set.is_empty() {
        return Err(Error::EmptyAlgebraicSet);
    }
    let h = &set.model;
    let tg = TupleGroup::new(h, set.len())?;
    let n = set.system.var_count();
    let generator_tuples: Vec<Vec<ElemId>> = (0..n).map(|i| set.points.iter().map(|p| p[i]).collect()).collect();
    let source = set.lambda.source();
    let constant_diagonals: Vec<Vec<ElemId>> = source.elements().map(|g| tg.diagonal(set.lambda.apply(g))).collect();
    let mut gens = generator_tuples.clone();
    let mut labels: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    if set.system.coeff().is_some() {
        for g in crate::finite_groups::greedy_generators(source) {
            gens.push(constant_diagonals[g as usize].clone());
            labels.push(format!("g{g}"));
        }
    }
    let closure = subgroup_closure_with_cap(&tg, &gens, limits.order_cap)?;
    Ok(CoordinateGroupResult {
        closure,
        generators: gens,
        generator_tuples,
        constant_diagonals,
        generator_labels: labels,
        model: h.clone(),
    })
}

/// A word of the ball on which two radicals disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    pub word: Word,
    pub in_first: bool,
    pub in_second: bool,
}

/// Result of [`geometric_compare`]. An empty list only means agreement on
/// the tested ball.
#[derive(Clone, Debug)]
pub struct CompareReport {
    pub max_len: usize,
    pub words_tested: usize,
    pub disagreements: Vec<Disagreement>,
}

/// Compares `Rad_H(S)` and `Rad_H'(S)` on the ball of radius `max_len`.
pub fn geometric_compare(a: &AlgebraicSet, b: &AlgebraicSet, max_len: usize, limits: &Limits) -> Result<CompareReport> {
    if a.system.context() != b.system.context() {
        return Err(Error::MismatchedContext("the two algebraic sets come from different G[X]".into()));
    }
    let ball = word_ball(a.system.context(), max_len, limits.ball_cap)?;
    let mut disagreements = Vec::new();
    for w in &ball {
        let in_first = radical_member_finite(w, a)?.member;
        let in_second = radical_member_finite(w, b)?.member;
        if in_first != in_second {
            disagreements.push(Disagreement { word: w.clone(), in_first, in_second });
        }
    }
    Ok(CompareReport { max_len, words_tested: ball.len(), disagreements })
}
