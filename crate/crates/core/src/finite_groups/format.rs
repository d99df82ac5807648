//! Group and embedding files.
//!
//! ```text
//! # comment
//! group C4 order 4
//! builtin cyclic 4
//!
//! group K order 2
//! table
//! 0 1
//! 1 0
//! names
//! e a
//!
//! embed K into C4
//! 0 -> 0
//! 1 -> 2
//! ```
//!
//! Builtins: `cyclic <n>`, `dihedral <n>` (order `2n`), `symmetric <n>`,
//! `heisenberg <p>` (order `p^3`).

use std::sync::Arc;

use super::{
    build_cyclic_with, build_dihedral_with, build_heisenberg_mod_with, build_symmetric, ElemId, FiniteGroup,
    GEmbedding,
};
use crate::error::{Error, ParseError, Result};
use crate::Limits;

#[derive(Clone, Debug)]
pub struct EmbeddingDecl {
    pub source: String,
    pub target: String,
    pub pairs: Vec<(ElemId, ElemId)>,
    pub line: usize,
}

#[derive(Clone, Debug, Default)]
pub struct GroupFile {
    pub groups: Vec<Arc<FiniteGroup>>,
    pub embeddings: Vec<EmbeddingDecl>,
}

impl GroupFile {
    pub fn group(&self, name: &str) -> Option<&Arc<FiniteGroup>> {
        self.groups.iter().find(|g| g.name() == name)
    }

    /// The first group in the file.
    pub fn primary(&self) -> Option<&Arc<FiniteGroup>> {
        self.groups.first()
    }

    /// The declared embedding `source -> target`, or the identity when both
    /// names agree.
    pub fn embedding(&self, source: &str, target: &str) -> Result<GEmbedding> {
        let tgt = self.group(target).ok_or_else(|| Error::InvalidEmbedding(format!("unknown group {target}")))?;
        if source == target {
            return Ok(GEmbedding::identity(tgt));
        }
        let src = self.group(source).ok_or_else(|| Error::InvalidEmbedding(format!("unknown group {source}")))?;
        let decl = self
            .embeddings
            .iter()
            .find(|e| e.source == source && e.target == target)
            .ok_or_else(|| Error::InvalidEmbedding(format!("no embedding {source} into {target} declared")))?;
        let mut map = vec![None; src.order()];
        for &(i, j) in &decl.pairs {
            let slot = map.get_mut(i as usize).ok_or(Error::UnknownElement { elem: i as u64, order: src.order() })?;
            if slot.replace(j).is_some() {
                return Err(Error::InvalidEmbedding(format!("element {i} mapped twice")));
            }
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(i, j)| j.ok_or_else(|| Error::InvalidEmbedding(format!("element {i} has no image"))))
            .collect::<Result<Vec<_>>>()?;
        GEmbedding::new(src.clone(), tgt.clone(), map)
    }
}

struct Pending {
    name: String,
    order: usize,
    line: usize,
    group: Option<FiniteGroup>,
    rows: Vec<Vec<ElemId>>,
    names: Vec<String>,
}

enum Mode {
    Top,
    Table,
    Names,
    Embed,
}

fn perr(line: usize, column: usize, msg: impl Into<String>) -> Error {
    Error::Parse(ParseError::new(line, column, msg))
}

fn number<T: std::str::FromStr>(tok: &str, line: usize, raw: &str) -> Result<T> {
    tok.parse().map_err(|_| perr(line, column_of(raw, tok), format!("expected a number, found '{tok}'")))
}

fn column_of(raw: &str, tok: &str) -> usize {
    raw.find(tok).map_or(1, |c| c + 1)
}

fn finish(pending: Option<Pending>, out: &mut GroupFile) -> Result<()> {
    let Some(p) = pending else { return Ok(()) };
    let group = match (p.group, p.rows.is_empty()) {
        (Some(g), true) => g,
        (None, false) => {
            if p.rows.len() != p.order {
                return Err(perr(p.line, 1, format!("table has {} rows, expected {}", p.rows.len(), p.order)));
            }
            FiniteGroup::from_table(p.name.clone(), p.rows)?
        }
        (Some(_), false) => return Err(perr(p.line, 1, "group has both a builtin and a table")),
        (None, true) => return Err(perr(p.line, 1, "group has neither a builtin nor a table")),
    };
    if group.order() != p.order {
        return Err(perr(p.line, 1, format!("declared order {} but the group has order {}", p.order, group.order())));
    }
    let mut group = group.with_name(p.name);
    if !p.names.is_empty() {
        if p.names.len() != p.order {
            return Err(perr(p.line, 1, format!("{} names for {} elements", p.names.len(), p.order)));
        }
        group = group.with_names(p.names)?;
    }
    if out.group(group.name()).is_some() {
        return Err(perr(p.line, 1, format!("duplicate group name {}", group.name())));
    }
    out.groups.push(Arc::new(group));
    Ok(())
}

pub fn parse_group_file(text: &str) -> Result<GroupFile> {
    parse_group_file_with(text, &Limits::default())
}

pub fn parse_group_file_with(text: &str, limits: &Limits) -> Result<GroupFile> {
    let mut out = GroupFile::default();
    let mut pending: Option<Pending> = None;
    let mut mode = Mode::Top;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let keyword = matches!(toks[0], "group" | "builtin" | "table" | "names" | "embed");
        match (&mode, keyword) {
            (Mode::Table, false) => {
                let p = pending.as_mut().expect("table inside group");
                let row = toks.iter().map(|t| number(t, line, raw)).collect::<Result<Vec<ElemId>>>()?;
                if row.len() != p.order {
                    return Err(perr(line, 1, format!("row has {} entries, expected {}", row.len(), p.order)));
                }
                p.rows.push(row);
                continue;
            }
            (Mode::Names, false) => {
                let p = pending.as_mut().expect("names inside group");
                p.names.extend(toks.iter().map(|t| t.to_string()));
                continue;
            }
            (Mode::Embed, false) => {
                let decl = out.embeddings.last_mut().expect("embed block");
                match toks.as_slice() {
                    [i, "->", j] => decl.pairs.push((number(i, line, raw)?, number(j, line, raw)?)),
                    _ => return Err(perr(line, 1, "expected 'i -> j'")),
                }
                continue;
            }
            (Mode::Top, false) => {
                return Err(perr(line, 1, format!("unexpected '{}'", toks[0])));
            }
            _ => {}
        }
        match toks[0] {
            "group" => {
                finish(pending.take(), &mut out)?;
                match toks.as_slice() {
                    ["group", name, "order", m] => {
                        pending = Some(Pending {
                            name: name.to_string(),
                            order: number(m, line, raw)?,
                            line,
                            group: None,
                            rows: Vec::new(),
                            names: Vec::new(),
                        });
                        mode = Mode::Top;
                    }
                    _ => return Err(perr(line, 1, "expected 'group <name> order <m>'")),
                }
            }
            "builtin" => {
                let p = pending.as_mut().ok_or_else(|| perr(line, 1, "builtin outside a group block"))?;
                let (kind, arg) = match toks.as_slice() {
                    ["builtin", kind, arg] => (*kind, number::<usize>(arg, line, raw)?),
                    _ => return Err(perr(line, 1, "expected 'builtin <kind> <n>'")),
                };
                let g = match kind {
                    "cyclic" => build_cyclic_with(arg, limits)?,
                    "dihedral" => build_dihedral_with(arg, limits)?,
                    "symmetric" => build_symmetric(arg)?,
                    "heisenberg" => build_heisenberg_mod_with(arg, limits)?,
                    other => return Err(perr(line, column_of(raw, other), format!("unknown builtin '{other}'"))),
                };
                p.group = Some(g);
                mode = Mode::Top;
            }
            "table" => {
                if pending.is_none() {
                    return Err(perr(line, 1, "table outside a group block"));
                }
                mode = Mode::Table;
            }
            "names" => {
                let p = pending.as_mut().ok_or_else(|| perr(line, 1, "names outside a group block"))?;
                p.names.extend(toks[1..].iter().map(|t| t.to_string()));
                mode = Mode::Names;
            }
            "embed" => {
                finish(pending.take(), &mut out)?;
                match toks.as_slice() {
                    ["embed", source, "into", target] => out.embeddings.push(EmbeddingDecl {
                        source: source.to_string(),
                        target: target.to_string(),
                        pairs: Vec::new(),
                        line,
                    }),
                    _ => return Err(perr(line, 1, "expected 'embed <G> into <H>'")),
                }
                mode = Mode::Embed;
            }
            _ => unreachable!(),
        }
    }
    finish(pending.take(), &mut out)?;
    if out.groups.is_empty() {
        return Err(perr(1, 1, "no group declared"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# two groups and an embedding
group C4 order 4
builtin cyclic 4

group K order 2
table
0 1
1 0
names
e a

embed K into C4
0 -> 0
1 -> 2
";

    #[test]
    fn parses_sample() {
        let file = parse_group_file(SAMPLE).unwrap();
        assert_eq!(file.groups.len(), 2);
        assert_eq!(file.primary().unwrap().name(), "C4");
        assert_eq!(file.group("K").unwrap().element_name(1), "a");
        let lambda = file.embedding("K", "C4").unwrap();
        assert_eq!(lambda.map(), &[0, 2]);
        assert_eq!(file.embedding("C4", "C4").unwrap().map(), &[0, 1, 2, 3]);
    }

    #[test]
    fn order_mismatch_is_reported() {
        let err = parse_group_file("group X order 5\nbuiltin cyclic 4\n").unwrap_err();
        assert!(matches!(err, Error::Parse(ParseError { line: 1, .. })));
    }

    #[test]
    fn bad_embedding_is_rejected() {
        let text = SAMPLE.replace("1 -> 2", "1 -> 1");
        let file = parse_group_file(&text).unwrap();
        assert!(matches!(file.embedding("K", "C4"), Err(Error::InvalidEmbedding(_))));
    }

    #[test]
    fn stray_tokens_carry_line_numbers() {
        let err = parse_group_file("group X order 2\nbuiltin cyclic 2\nfoo\n").unwrap_err();
        assert!(matches!(err, Error::Parse(ParseError { line: 3, .. })));
        let err = parse_group_file("group X order 2\ntable\n0 1\n1 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse(ParseError { line: 4, column: 3, .. })));
    }
}
