//! Text syntax for words.
//!
//! ```text
//! expr  := term ('*' term)*
//! term  := atom ('^' int)?
//! atom  := 'x' digits | 'g' digits | '1' | '(' expr ')' | '[' expr (',' expr)+ ']'
//! ```
//!
//! `[a, b, c]` is left-normed: `[[a, b], c]`.

use num_bigint::BigInt;

use super::{free_reduce, Syllable, Word, WordContext};
use crate::error::{Error, ParseError, Result};
use crate::words::GroupRef;

/// Parsed but not yet reduced word expression.
#[derive(Clone, Debug, PartialEq)]
pub enum WordAst {
    One,
    Var(usize),
    Const(u64),
    Product(Vec<WordAst>),
    Power(Box<WordAst>, BigInt),
    Commutator(Vec<WordAst>),
}

impl WordAst {
    pub fn max_var_index(&self) -> usize {
        match self {
            WordAst::One | WordAst::Const(_) => 0,
            WordAst::Var(i) => *i,
            WordAst::Power(a, _) => a.max_var_index(),
            WordAst::Product(items) | WordAst::Commutator(items) => {
                items.iter().map(WordAst::max_var_index).max().unwrap_or(0)
            }
        }
    }

    pub fn build(&self, ctx: &WordContext) -> Result<Word> {
        Ok(match self {
            WordAst::One => Word::identity(ctx),
            WordAst::Var(i) => Word::var(ctx, *i)?,
            WordAst::Const(g) => {
                let order = ctx.coeff().map_or(1, |g| g.order());
                if *g >= order as u64 {
                    return Err(Error::UnknownElement { elem: *g, order });
                }
                free_reduce([Syllable::Const(*g as u32)], ctx)?
            }
            WordAst::Product(items) => {
                let mut acc = Word::identity(ctx);
                for item in items {
                    acc = acc.concat(&item.build(ctx)?)?;
                }
                acc
            }
            WordAst::Power(base, exp) => {
                let base = base.build(ctx)?;
                match base.syllables() {
                    [Syllable::Var { index, exp: e }] => Word::var_pow(ctx, *index, e * exp)?,
                    _ => {
                        let k: i64 = exp.try_into().map_err(|_| Error::ExponentTooLarge(exp.to_string()))?;
                        base.pow(k)
                    }
                }
            }
            WordAst::Commutator(items) => {
                let mut acc = items[0].build(ctx)?;
                for item in &items[1..] {
                    acc = acc.commutator(&item.build(ctx)?)?;
                }
                acc
            }
        })
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    line_start: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.pos - self.line_start + 1, message)
    }

    fn skip_ws(&mut self) {
        while let Some(&c) = self.src.get(self.pos) {
            if c == b'\n' {
                self.line += 1;
                self.line_start = self.pos + 1;
            } else if !c.is_ascii_whitespace() {
                break;
            }
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> std::result::Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn digits(&mut self) -> std::result::Result<&'a str, ParseError> {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii"))
    }

    fn expr(&mut self) -> std::result::Result<WordAst, ParseError> {
        let mut items = vec![self.term()?];
        while self.peek() == Some(b'*') {
            self.pos += 1;
            items.push(self.term()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { WordAst::Product(items) })
    }

    fn term(&mut self) -> std::result::Result<WordAst, ParseError> {
        let atom = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(atom);
        }
        self.pos += 1;
        self.skip_ws();
        let negative = match self.src.get(self.pos) {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let mut exp: BigInt = self.digits()?.parse().expect("digits");
        if negative {
            exp = -exp;
        }
        Ok(WordAst::Power(Box::new(atom), exp))
    }

    fn atom(&mut self) -> std::result::Result<WordAst, ParseError> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let index: usize = self.digits()?.parse().map_err(|_| self.err("variable index too large"))?;
                if index == 0 {
                    return Err(self.err("variable indices start at 1"));
                }
                Ok(WordAst::Var(index))
            }
            Some(b'g') => {
                self.pos += 1;
                let g = self.digits()?.parse().map_err(|_| self.err("element identifier too large"))?;
                Ok(WordAst::Const(g))
            }
            Some(b'1') => {
                self.pos += 1;
                if self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    return Err(self.err("only '1' denotes the identity"));
                }
                Ok(WordAst::One)
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(b'[') => {
                self.pos += 1;
                let mut items = vec![self.expr()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    items.push(self.expr()?);
                }
                if items.len() < 2 {
                    return Err(self.err("commutator needs at least two entries"));
                }
                self.expect(b']')?;
                Ok(WordAst::Commutator(items))
            }
            Some(c) => Err(self.err(format!("unexpected '{}'", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses `text` into an expression tree, reporting positions relative to
/// `line` (1-based) and a column offset.
pub fn parse_ast(text: &str, line: usize, column_offset: usize) -> std::result::Result<WordAst, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, line: 1, line_start: 0 };
    let result = p.expr().and_then(|ast| match p.peek() {
        None => Ok(ast),
        Some(c) => Err(p.err(format!("unexpected '{}'", c as char))),
    });
    result.map_err(|mut e| {
        if e.line == 1 {
            e.column += column_offset;
        }
        e.line += line - 1;
        e
    })
}

/// Parses a word in the given context.
pub fn parse_word(text: &str, ctx: &WordContext) -> Result<Word> {
    let ast = parse_ast(text, 1, 0)?;
    ast.build(ctx)
}

/// Parses a word whose variable count is the largest index it mentions.
pub fn parse_word_inferring(text: &str, coeff: Option<GroupRef>) -> Result<Word> {
    let ast = parse_ast(text, 1, 0)?;
    let ctx = WordContext::new(ast.max_var_index(), coeff);
    ast.build(&ctx)
}
