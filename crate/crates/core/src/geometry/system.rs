//! Equation systems and the system file format.
//!
//! ```text
//! system commuting
//! vars 2
//! coeff none
//! variety abelian
//! eq [x1,x2]
//! eq x1^2*g1      # constants need a coefficient group
//! ```

use std::fmt;

use crate::error::{Error, ParseError, Result};
use crate::varieties::VarietySpec;
use crate::words::{parse_ast, GroupRef, Word, WordContext};

/// A finite set of equations `w ≈ 1` in one `G[X]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationSystem {
    name: String,
    ctx: WordContext,
    words: Vec<Word>,
}

impl EquationSystem {
    /// Every word is lifted into `ctx`; words with constants must already
    /// use its coefficient group.
    pub fn new(name: impl Into<String>, ctx: &WordContext, words: Vec<Word>) -> Result<Self> {
        let words = words.iter().map(|w| w.lift(ctx)).collect::<Result<_>>()?;
        Ok(EquationSystem { name: name.into(), ctx: ctx.clone(), words })
    }

    pub fn empty(ctx: &WordContext) -> Self {
        EquationSystem { name: "S".into(), ctx: ctx.clone(), words: Vec::new() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn context(&self) -> &WordContext {
        &self.ctx
    }

    pub fn var_count(&self) -> usize {
        self.ctx.var_count()
    }

    pub fn coeff(&self) -> Option<&GroupRef> {
        self.ctx.coeff()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Moves `w` into the system's context, or fails if it cannot live there.
    pub fn adopt(&self, w: &Word) -> Result<Word> {
        if w.var_count() != self.ctx.var_count() || !self.ctx.accepts(w.context()) {
            return Err(Error::MismatchedContext(format!(
                "word lives in a different G[X] than system {}",
                self.name
            )));
        }
        w.lift(&self.ctx)
    }
}

impl fmt::Display for EquationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self.words.iter().map(Word::to_string).collect();
        write!(f, "{} = {{{}}}", self.name, words.join(", "))
    }
}

/// A parsed system file.
#[derive(Clone, Debug)]
pub struct SystemFile {
    pub system: EquationSystem,
    /// Name given on the `coeff` line, if not `none`.
    pub coeff_name: Option<String>,
    pub variety: VarietySpec,
}

/// Parses a system file, resolving the `coeff` name through `lookup`.
pub fn parse_system_file(text: &str, lookup: impl Fn(&str) -> Option<GroupRef>) -> Result<SystemFile> {
    let mut name = None;
    let mut vars: Option<usize> = None;
    let mut coeff_name: Option<Option<String>> = None;
    let mut variety = None;
    let mut equations = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("");
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = line.len() - line.trim_start().len();
        let (key, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
        let after = &line[indent + key.len()..];
        let rest_offset = indent + key.len() + (after.len() - after.trim_start().len());
        let rest = rest.trim();
        let err = |msg: String| Error::Parse(ParseError::new(line_no, indent + 1, msg));
        match key {
            "system" => {
                if rest.is_empty() || rest.contains(char::is_whitespace) {
                    return Err(err("expected `system <name>`".into()));
                }
                name = Some(rest.to_string());
            }
            "vars" => {
                let n = rest.parse().map_err(|_| err(format!("bad variable count `{rest}`")))?;
                vars = Some(n);
            }
            "coeff" => {
                coeff_name = Some(if rest == "none" { None } else { Some(rest.to_string()) });
            }
            "variety" => {
                let v = VarietySpec::parse(rest).map_err(|e| match e {
                    Error::Parse(p) => Error::Parse(ParseError::new(line_no, p.column, p.message)),
                    other => other,
                })?;
                variety = Some(v);
            }
            "eq" => equations.push((line_no, rest_offset, rest.to_string())),
            other => return Err(err(format!("unknown directive `{other}`"))),
        }
    }

    let missing = |what: &str| Error::Parse(ParseError::new(1, 1, format!("missing `{what}` line")));
    let name = name.ok_or_else(|| missing("system"))?;
    let vars = vars.ok_or_else(|| missing("vars"))?;
    let coeff_name = coeff_name.unwrap_or(None);
    let coeff = match &coeff_name {
        None => None,
        Some(n) => Some(
            lookup(n).ok_or_else(|| Error::Parse(ParseError::new(1, 1, format!("unknown coefficient group `{n}`"))))?,
        ),
    };
    let ctx = WordContext::new(vars, coeff);
    let mut words = Vec::new();
    for (line_no, offset, text) in equations {
        let ast = parse_ast(&text, line_no, offset)?;
        let i = ast.max_var_index();
        if i > vars {
            return Err(Error::Parse(ParseError::new(
                line_no,
                offset + 1,
                format!("x{i} exceeds `vars {vars}`"),
            )));
        }
        let w = ast.build(&ctx).map_err(|e| match e {
            Error::Parse(p) => Error::Parse(p),
            other => Error::Parse(ParseError::new(line_no, offset + 1, other.to_string())),
        })?;
        words.push(w);
    }
    Ok(SystemFile {
        system: EquationSystem { name, ctx, words },
        coeff_name,
        variety: variety.unwrap_or(VarietySpec::All),
    })
}
