//! Balls of reduced words.
//!
//! Length is letter length: `x1^3` has length 3 and each constant counts 1.
//! Words of equal length are ordered lexicographically in the letters
//! `x1 < x1^-1 < x2 < ... < xn^-1 < g_1 < g_2 < ...` (non-identity constants
//! by identifier).

use crate::error::{Error, Result};
use crate::finite_groups::ElemId;
use crate::words::{free_reduce, Syllable, Word, WordContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Letter {
    Var(usize, i8),
    Const(ElemId),
}

fn alphabet(ctx: &WordContext) -> Vec<Letter> {
    let mut out = Vec::new();
    for i in 1..=ctx.var_count() {
        out.push(Letter::Var(i, 1));
        out.push(Letter::Var(i, -1));
    }
    if let Some(g) = ctx.coeff() {
        out.extend(g.elements().filter(|&a| a != g.identity()).map(Letter::Const));
    }
    out
}

fn may_follow(prev: Option<Letter>, next: Letter) -> bool {
    match (prev, next) {
        (Some(Letter::Var(i, e)), Letter::Var(j, f)) => !(i == j && e == -f),
        (Some(Letter::Const(_)), Letter::Const(_)) => false,
        _ => true,
    }
}

/// Visits the nonidentity reduced words of length `1..=max_len` in ball
/// order until `visit` returns false.
pub fn for_each_ball_word(ctx: &WordContext, max_len: usize, mut visit: impl FnMut(Word) -> bool) {
    let letters = alphabet(ctx);
    let mut stack: Vec<Letter> = Vec::new();
    for len in 1..=max_len {
        if !extend(ctx, &letters, len, &mut stack, &mut visit) {
            return;
        }
    }
}

fn extend(
    ctx: &WordContext,
    letters: &[Letter],
    len: usize,
    stack: &mut Vec<Letter>,
    visit: &mut impl FnMut(Word) -> bool,
) -> bool {
    if stack.len() == len {
        let raw = stack.iter().map(|l| match *l {
            Letter::Var(i, e) => Syllable::var(i, e),
            Letter::Const(c) => Syllable::Const(c),
        });
        let w = free_reduce(raw, ctx).expect("letters drawn from the context");
        return visit(w);
    }
    for &l in letters {
        if may_follow(stack.last().copied(), l) {
            stack.push(l);
            let keep_going = extend(ctx, letters, len, stack, visit);
            stack.pop();
            if !keep_going {
                return false;
            }
        }
    }
    true
}

/// All words of the ball, or `BudgetExceeded` if there are more than `cap`.
pub fn word_ball(ctx: &WordContext, max_len: usize, cap: usize) -> Result<Vec<Word>> {
    let mut out = Vec::new();
    let mut overflow = false;
    for_each_ball_word(ctx, max_len, |w| {
        if out.len() == cap {
            overflow = true;
            return false;
        }
        out.push(w);
        true
    });
    if overflow {
        return Err(Error::BudgetExceeded(format!("word ball of length {max_len} has more than {cap} words")));
    }
    Ok(out)
}

/// The first `limit` words of the ball.
pub fn word_ball_prefix(ctx: &WordContext, max_len: usize, limit: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if limit == 0 {
        return out;
    }
    for_each_ball_word(ctx, max_len, |w| {
        out.push(w);
        out.len() < limit
    });
    out
}
