//! Words in the free product `G[X] = G * F(x1, ..., xn)`.
//!
//! A [`Word`] is always stored in reduced form: no two adjacent constants,
//! no two adjacent powers of the same variable, no zero exponents and no
//! identity constants. Every constructor reduces, so an unreduced word cannot
//! be built.
//!
//! The commutator convention used throughout the crate is
//! `[a, b] = a^-1 b^-1 a b`.

mod parse;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::finite_groups::{ElemId, FiniteGroup, GEmbedding, GroupOps};

pub use parse::{parse_ast, parse_word, parse_word_inferring, WordAst};

/// Shared handle to a coefficient or model group.
pub type GroupRef = Arc<FiniteGroup>;

/// One letter block of a word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Syllable {
    /// `x_index ^ exp`, with `index` 1-based and `exp != 0`.
    Var { index: usize, exp: BigInt },
    /// A non-identity element of the coefficient group.
    Const(ElemId),
}

impl Syllable {
    pub fn var(index: usize, exp: impl Into<BigInt>) -> Self {
        Syllable::Var { index, exp: exp.into() }
    }
}

/// The ambient `G[X]` a word lives in: the number of variables and the
/// coefficient group (`None` when `G` is trivial).
#[derive(Clone, Debug)]
pub struct WordContext {
    var_count: usize,
    coeff: Option<GroupRef>,
}

impl WordContext {
    /// A trivial coefficient group is normalized to `None`.
    pub fn new(var_count: usize, coeff: Option<GroupRef>) -> Self {
        let coeff = coeff.filter(|g| g.order() > 1);
        WordContext { var_count, coeff }
    }

    pub fn constant_free(var_count: usize) -> Self {
        WordContext { var_count, coeff: None }
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn coeff(&self) -> Option<&GroupRef> {
        self.coeff.as_ref()
    }

    pub fn with_var_count(&self, var_count: usize) -> Self {
        WordContext { var_count, coeff: self.coeff.clone() }
    }

    fn same_coeff(&self, other: &WordContext) -> bool {
        match (&self.coeff, &other.coeff) {
            (None, None) => true,
            (Some(a), Some(b)) => a.same_as(b),
            _ => false,
        }
    }

    /// Constant-free contexts are compatible with any coefficient group of
    /// the same variable count.
    pub fn accepts(&self, other: &WordContext) -> bool {
        self.var_count == other.var_count && (other.coeff.is_none() || self.same_coeff(other))
    }
}

impl PartialEq for WordContext {
    fn eq(&self, other: &Self) -> bool {
        self.var_count == other.var_count && self.same_coeff(other)
    }
}

impl Eq for WordContext {}

/// A reduced element of `G[X]`.
#[derive(Clone, Debug)]
pub struct Word {
    syllables: Vec<Syllable>,
    ctx: WordContext,
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.syllables == other.syllables && self.ctx == other.ctx
    }
}

impl Eq for Word {}

impl Hash for Word {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.syllables.hash(state);
        self.ctx.var_count.hash(state);
    }
}

/// Reduces a raw syllable sequence to the unique normal form in `G[X]`.
pub fn free_reduce(raw: impl IntoIterator<Item = Syllable>, ctx: &WordContext) -> Result<Word> {
    let mut out = Vec::new();
    for s in raw {
        push_reduced(&mut out, s, ctx)?;
    }
    Ok(Word { syllables: out, ctx: ctx.clone() })
}

fn push_reduced(stack: &mut Vec<Syllable>, s: Syllable, ctx: &WordContext) -> Result<()> {
    match s {
        Syllable::Var { index, exp } => {
            if index == 0 || index > ctx.var_count {
                return Err(Error::VariableOutOfRange { index, var_count: ctx.var_count });
            }
            if exp.is_zero() {
                return Ok(());
            }
            if let Some(Syllable::Var { index: top, exp: top_exp }) = stack.last_mut() {
                if *top == index {
                    *top_exp += exp;
                    if top_exp.is_zero() {
                        stack.pop();
                    }
                    return Ok(());
                }
            }
            stack.push(Syllable::Var { index, exp });
        }
        Syllable::Const(g) => {
            let group = match &ctx.coeff {
                Some(group) => group,
                // only the identity of a trivial group may appear
                None if g == 0 => return Ok(()),
                None => return Err(Error::UnknownElement { elem: g as u64, order: 1 }),
            };
            if g as usize >= group.order() {
                return Err(Error::UnknownElement { elem: g as u64, order: group.order() });
            }
            if g == group.identity() {
                return Ok(());
            }
            if let Some(Syllable::Const(top)) = stack.last_mut() {
                let prod = group.mul(top, &g);
                if prod == group.identity() {
                    stack.pop();
                } else {
                    *top = prod;
                }
                return Ok(());
            }
            stack.push(Syllable::Const(g));
        }
    }
    Ok(())
}

impl Word {
    pub fn identity(ctx: &WordContext) -> Word {
        Word { syllables: Vec::new(), ctx: ctx.clone() }
    }

    pub fn var(ctx: &WordContext, index: usize) -> Result<Word> {
        free_reduce([Syllable::var(index, 1)], ctx)
    }

    pub fn var_pow(ctx: &WordContext, index: usize, exp: impl Into<BigInt>) -> Result<Word> {
        free_reduce([Syllable::var(index, exp)], ctx)
    }

    pub fn constant(ctx: &WordContext, elem: ElemId) -> Result<Word> {
        free_reduce([Syllable::Const(elem)], ctx)
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn context(&self) -> &WordContext {
        &self.ctx
    }

    pub fn var_count(&self) -> usize {
        self.ctx.var_count
    }

    pub fn coeff(&self) -> Option<&GroupRef> {
        self.ctx.coeff.as_ref()
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn has_constants(&self) -> bool {
        self.syllables.iter().any(|s| matches!(s, Syllable::Const(_)))
    }

    /// Letter length: sum of absolute exponents plus one per constant.
    pub fn letter_length(&self) -> BigInt {
        self.syllables
            .iter()
            .map(|s| match s {
                Syllable::Var { exp, .. } => exp.abs(),
                Syllable::Const(_) => BigInt::one(),
            })
            .sum()
    }

    /// Re-homes the word into a wider context (more variables, or a
    /// coefficient group when the word is constant-free).
    pub fn lift(&self, ctx: &WordContext) -> Result<Word> {
        if ctx.var_count < self.ctx.var_count {
            if let Some(index) = self.max_var_index().filter(|&i| i > ctx.var_count) {
                return Err(Error::VariableOutOfRange { index, var_count: ctx.var_count });
            }
        }
        if self.has_constants() && !self.ctx.same_coeff(ctx) {
            return Err(Error::MismatchedContext(
                "cannot move a word with constants to a different coefficient group".into(),
            ));
        }
        Ok(Word { syllables: self.syllables.clone(), ctx: ctx.clone() })
    }

    pub fn max_var_index(&self) -> Option<usize> {
        self.syllables
            .iter()
            .filter_map(|s| match s {
                Syllable::Var { index, .. } => Some(*index),
                Syllable::Const(_) => None,
            })
            .max()
    }

    fn check_same(&self, other: &Word) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::MismatchedContext(format!(
                "{} variables vs {} variables, or different coefficient groups",
                self.ctx.var_count, other.ctx.var_count
            )));
        }
        Ok(())
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        self.check_same(other)?;
        let mut out = self.syllables.clone();
        for s in &other.syllables {
            push_reduced(&mut out, s.clone(), &self.ctx)?;
        }
        Ok(Word { syllables: out, ctx: self.ctx.clone() })
    }

    pub fn inverse(&self) -> Word {
        let syllables = self
            .syllables
            .iter()
            .rev()
            .map(|s| match s {
                Syllable::Var { index, exp } => Syllable::Var { index: *index, exp: -exp },
                Syllable::Const(g) => {
                    let group = self.ctx.coeff.as_ref().expect("constant without coefficient group");
                    Syllable::Const(group.inv(g))
                }
            })
            .collect();
        Word { syllables, ctx: self.ctx.clone() }
    }

    /// `by^-1 * self * by`.
    pub fn conjugate(&self, by: &Word) -> Result<Word> {
        by.inverse().concat(self)?.concat(by)
    }

    /// `[self, other] = self^-1 other^-1 self other`.
    pub fn commutator(&self, other: &Word) -> Result<Word> {
        self.inverse().concat(&other.inverse())?.concat(self)?.concat(other)
    }

    pub fn pow(&self, exp: i64) -> Word {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity(&self.ctx);
        for _ in 0..exp.unsigned_abs() {
            out = out.concat(&base).expect("same context");
        }
        out
    }

    /// Replaces each `x_i` by `sigma[i]`; constants are kept.
    pub fn substitute(&self, sigma: &Substitution) -> Result<Word> {
        if sigma.images.len() < self.ctx.var_count {
            return Err(Error::MismatchedContext(format!(
                "substitution has {} images for {} variables",
                sigma.images.len(),
                self.ctx.var_count
            )));
        }
        let target = &sigma.ctx;
        if self.has_constants() && !target.same_coeff(&self.ctx) {
            return Err(Error::MismatchedContext(
                "substitution images use a different coefficient group".into(),
            ));
        }
        let mut out = Vec::new();
        for s in &self.syllables {
            match s {
                Syllable::Var { index, exp } => {
                    let image = &sigma.images[index - 1];
                    let block = if exp.is_negative() { image.inverse() } else { image.clone() };
                    let times = exp.abs().to_u64().ok_or_else(|| Error::ExponentTooLarge(exp.to_string()))?;
                    for _ in 0..times {
                        for t in &block.syllables {
                            push_reduced(&mut out, t.clone(), target)?;
                        }
                    }
                }
                Syllable::Const(g) => push_reduced(&mut out, Syllable::Const(*g), target)?,
            }
        }
        Ok(Word { syllables: out, ctx: target.clone() })
    }

    /// Evaluates under the homomorphism `G[X] -> group` sending `x_i` to
    /// `point[i-1]` and each constant `g` to `constant(g)`.
    pub fn evaluate_in<G: GroupOps>(
        &self,
        group: &G,
        point: &[G::Elem],
        constant: impl Fn(ElemId) -> G::Elem,
    ) -> Result<G::Elem> {
        if point.len() != self.ctx.var_count {
            return Err(Error::MismatchedContext(format!(
                "point has {} coordinates, word has {} variables",
                point.len(),
                self.ctx.var_count
            )));
        }
        let mut acc = group.identity();
        for s in &self.syllables {
            let factor = match s {
                Syllable::Var { index, exp } => group.pow(&point[index - 1], exp),
                Syllable::Const(g) => constant(*g),
            };
            acc = group.mul(&acc, &factor);
        }
        Ok(acc)
    }

    /// Evaluates in the finite `G`-group `(h, lambda)`.
    pub fn evaluate(&self, point: &[ElemId], h: &FiniteGroup, lambda: &GEmbedding) -> Result<ElemId> {
        self.check_embedding(h, lambda)?;
        if let Some(&bad) = point.iter().find(|&&a| a as usize >= h.order()) {
            return Err(Error::UnknownElement { elem: bad as u64, order: h.order() });
        }
        self.evaluate_in(h, point, |g| lambda.apply(g))
    }

    pub(crate) fn check_embedding(&self, h: &FiniteGroup, lambda: &GEmbedding) -> Result<()> {
        if !lambda.target().same_as(h) {
            return Err(Error::EmbeddingMismatch("embedding target is not the model group".into()));
        }
        if let Some(g) = &self.ctx.coeff {
            if !lambda.source().same_as(g) {
                return Err(Error::EmbeddingMismatch(
                    "embedding source is not the coefficient group of the word".into(),
                ));
            }
        }
        Ok(())
    }

    /// Precomputes an evaluator for repeated evaluation in `h`.
    pub fn compile(&self, h: &FiniteGroup, lambda: &GEmbedding) -> Result<CompiledWord> {
        self.check_embedding(h, lambda)?;
        let exponent = BigInt::from(h.exponent());
        let steps = self
            .syllables
            .iter()
            .map(|s| match s {
                Syllable::Var { index, exp } => {
                    let e = ((exp % &exponent) + &exponent) % &exponent;
                    Step::Var(index - 1, e.to_u64().unwrap_or(0))
                }
                Syllable::Const(g) => Step::Const(lambda.apply(*g)),
            })
            .filter(|s| !matches!(s, Step::Var(_, 0)))
            .collect();
        Ok(CompiledWord { steps, var_count: self.ctx.var_count })
    }
}

/// A random word of at most `max_len` letters. Each letter is `x_i^{+-1}`
/// or, when the context has coefficients, a non-identity constant.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, ctx: &WordContext, max_len: usize) -> Word {
    let n = ctx.var_count;
    let coeff = ctx.coeff.as_ref();
    if n == 0 && coeff.is_none() {
        return Word::identity(ctx);
    }
    let len = rng.gen_range(0..=max_len);
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        let letter = match coeff {
            Some(g) if n == 0 || rng.gen_bool(0.25) => {
                let mut c = rng.gen_range(0..g.order() as ElemId - 1);
                if c >= g.identity() {
                    c += 1;
                }
                Syllable::Const(c)
            }
            _ => Syllable::var(rng.gen_range(1..=n), if rng.gen_bool(0.5) { 1 } else { -1 }),
        };
        push_reduced(&mut out, letter, ctx).expect("letters drawn from the context");
    }
    Word { syllables: out, ctx: ctx.clone() }
}

#[derive(Clone, Debug)]
enum Step {
    Var(usize, u64),
    Const(ElemId),
}

/// A word with exponents reduced modulo the exponent of a fixed model.
#[derive(Clone, Debug)]
pub struct CompiledWord {
    steps: Vec<Step>,
    var_count: usize,
}

impl CompiledWord {
    /// `point` must have `var_count` coordinates of the model the word was
    /// compiled for.
    pub fn eval(&self, h: &FiniteGroup, point: &[ElemId]) -> ElemId {
        debug_assert_eq!(point.len(), self.var_count);
        let mut acc = h.identity();
        for step in &self.steps {
            let factor = match *step {
                Step::Var(i, e) => h.pow_u64(point[i], e),
                Step::Const(c) => c,
            };
            acc = h.mul(&acc, &factor);
        }
        acc
    }
}

/// Images of `x_1, ..., x_k`, all in one target context.
#[derive(Clone, Debug)]
pub struct Substitution {
    images: Vec<Word>,
    ctx: WordContext,
}

impl Substitution {
    pub fn new(images: Vec<Word>, ctx: &WordContext) -> Result<Self> {
        for w in &images {
            if !ctx.accepts(w.context()) {
                return Err(Error::MismatchedContext("substitution image outside the target context".into()));
            }
        }
        let images = images
            .into_iter()
            .map(|w| Word { syllables: w.syllables, ctx: ctx.clone() })
            .collect();
        Ok(Substitution { images, ctx: ctx.clone() })
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn context(&self) -> &WordContext {
        &self.ctx
    }

    /// The substitution `w -> (w.substitute(self)).substitute(after)`.
    pub fn then(&self, after: &Substitution) -> Result<Substitution> {
        let images = self.images.iter().map(|w| w.substitute(after)).collect::<Result<Vec<_>>>()?;
        Ok(Substitution { images, ctx: after.ctx.clone() })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("1");
        }
        for (k, s) in self.syllables.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            match s {
                Syllable::Var { index, exp } if exp.is_one() => write!(f, "x{index}")?,
                Syllable::Var { index, exp } => write!(f, "x{index}^{exp}")?,
                Syllable::Const(g) => write!(f, "g{g}")?,
            }
        }
        Ok(())
    }
}
