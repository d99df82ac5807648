//! Varieties of groups, their verbal subgroups `Id_V(X)` inside `G[X]`,
//! and membership deciders for the varieties where one is available.
//!
//! `Id_V(X)` is the verbal subgroup of `G[X]` generated by every
//! substitution instance of the defining laws, with words of `G[X]`
//! (constants allowed) substituted for the law variables.

mod abelian;
mod laurent;
mod magnus;
mod malcev;

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::words::{parse_ast, random_word, GroupRef, Substitution, Word, WordContext};

pub use abelian::{abelianization, AbelianDecomposition, Abelianized};
pub use laurent::LaurentPoly;
pub use magnus::{magnus_image, FreeMetabelian, MagnusMatrix};
pub use malcev::{malcev_normal_form, pair_count, pair_index, pairs, FreeClass2, MalcevVector};

/// A variety of groups, given by a tag or an explicit list of laws.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarietySpec {
    All,
    Abelian,
    /// Nilpotent of class at most `c >= 1`.
    Nilpotent(usize),
    Metabelian,
    /// Constant-free laws.
    Laws(Vec<Word>),
}

impl VarietySpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            VarietySpec::Nilpotent(0) => Err(Error::InvalidParameter("nilpotency class must be at least 1".into())),
            VarietySpec::Laws(laws) if laws.iter().any(Word::has_constants) => {
                Err(Error::InvalidParameter("laws must be constant-free".into()))
            }
            _ => Ok(()),
        }
    }

    /// Abelian, or nilpotent of class 1.
    pub fn is_abelian(&self) -> bool {
        matches!(self, VarietySpec::Abelian | VarietySpec::Nilpotent(1))
    }

    pub fn is_class_two(&self) -> bool {
        matches!(self, VarietySpec::Nilpotent(2))
    }

    /// Parses `all | abelian | nilpotent <c> | metabelian | laws { w; ... }`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let perr = |col: usize, msg: &str| Error::Parse(crate::error::ParseError::new(1, col, msg));
        let mut toks = text.split_whitespace();
        let spec = match toks.next() {
            Some("all") => VarietySpec::All,
            Some("abelian") => VarietySpec::Abelian,
            Some("metabelian") => VarietySpec::Metabelian,
            Some("nilpotent") => {
                let c = toks
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| perr(11, "expected a nilpotency class"))?;
                VarietySpec::Nilpotent(c)
            }
            Some("laws") => {
                let open = text.find('{').ok_or_else(|| perr(6, "expected '{'"))?;
                let close = text.rfind('}').ok_or_else(|| perr(text.len() + 1, "expected '}'"))?;
                let mut laws = Vec::new();
                let mut offset = open + 1;
                for piece in text[open + 1..close].split(';') {
                    if !piece.trim().is_empty() {
                        let ast = parse_ast(piece, 1, offset)?;
                        let ctx = WordContext::constant_free(ast.max_var_index());
                        laws.push(ast.build(&ctx)?);
                    }
                    offset += piece.len() + 1;
                }
                if text[close + 1..].trim().is_empty() {
                    let spec = VarietySpec::Laws(laws);
                    spec.validate()?;
                    return Ok(spec);
                }
                return Err(perr(close + 2, "unexpected text after '}'"));
            }
            Some(other) => return Err(perr(1, &format!("unknown variety '{other}'"))),
            None => return Err(perr(1, "expected a variety")),
        };
        if let Some(extra) = toks.next() {
            return Err(perr(text.find(extra).map_or(1, |c| c + 1), "unexpected token"));
        }
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for VarietySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarietySpec::All => f.write_str("all"),
            VarietySpec::Abelian => f.write_str("abelian"),
            VarietySpec::Nilpotent(c) => write!(f, "nilpotent {c}"),
            VarietySpec::Metabelian => f.write_str("metabelian"),
            VarietySpec::Laws(laws) => {
                let body: Vec<String> = laws.iter().map(Word::to_string).collect();
                write!(f, "laws {{ {} }}", body.join("; "))
            }
        }
    }
}

fn left_normed(ctx: &WordContext, arity: usize) -> Word {
    let mut acc = Word::var(ctx, 1).expect("x1");
    for i in 2..=arity {
        acc = acc.commutator(&Word::var(ctx, i).expect("xi")).expect("same context");
    }
    acc
}

/// The defining laws of a variety, each in its own constant-free context
/// whose variable count is the law's arity.
pub fn laws_of(variety: &VarietySpec) -> Vec<Word> {
    match variety {
        VarietySpec::All => Vec::new(),
        VarietySpec::Abelian => vec![left_normed(&WordContext::constant_free(2), 2)],
        VarietySpec::Nilpotent(c) => vec![left_normed(&WordContext::constant_free(c + 1), c + 1)],
        VarietySpec::Metabelian => {
            let ctx = WordContext::constant_free(4);
            let x = |i| Word::var(&ctx, i).expect("xi");
            vec![x(1).commutator(&x(2)).unwrap().commutator(&x(3).commutator(&x(4)).unwrap()).unwrap()]
        }
        VarietySpec::Laws(laws) => laws.clone(),
    }
}

/// One substitution instance of `law` with images drawn at random from
/// `ctx`.
pub fn random_law_instance<R: Rng>(rng: &mut R, law: &Word, ctx: &WordContext, max_len: usize) -> Word {
    let images = (0..law.var_count()).map(|_| random_word(rng, ctx, max_len)).collect();
    let sigma = Substitution::new(images, ctx).expect("images built in ctx");
    law.substitute(&sigma).expect("law is constant-free")
}

/// Seeded sample of elements of `Id_V(X)` in `G[X]`: each is a product of
/// one or two law instances under random substitutions of words of length
/// at most `max_len`.
pub fn identity_instance_sample(
    variety: &VarietySpec,
    n: usize,
    coeff: Option<GroupRef>,
    count: usize,
    max_len: usize,
    seed: u64,
) -> Result<Vec<Word>> {
    variety.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ctx = WordContext::new(n, coeff);
    Ok(sample_identities(&mut rng, variety, &ctx, count, max_len))
}

/// [`identity_instance_sample`] drawing from a caller-owned generator.
pub fn sample_identities<R: Rng>(
    rng: &mut R,
    variety: &VarietySpec,
    ctx: &WordContext,
    count: usize,
    max_len: usize,
) -> Vec<Word> {
    let laws = laws_of(variety);
    if laws.is_empty() {
        return Vec::new();
    }
    (0..count)
        .map(|_| {
            let factors = rng.gen_range(1..=2);
            let mut acc = Word::identity(ctx);
            for _ in 0..factors {
                let law = &laws[rng.gen_range(0..laws.len())];
                acc = acc.concat(&random_law_instance(rng, law, ctx, max_len)).expect("same context");
            }
            acc
        })
        .collect()
}

/// Decides membership in `Id_V(X)` for the coefficient group of the words
/// it is given. Supported: `All` (any `G`); `Abelian` and `Nilpotent(1)`
/// (abelian `G`); `Nilpotent(2)` and `Metabelian` (trivial `G`).
#[derive(Clone, Debug)]
pub struct IdentityOracle {
    variety: VarietySpec,
    coeff: Option<GroupRef>,
}

impl IdentityOracle {
    pub fn new(variety: &VarietySpec, coeff: Option<&GroupRef>) -> Result<Self> {
        variety.validate()?;
        let coeff = coeff.filter(|g| g.order() > 1).cloned();
        match (variety, &coeff) {
            (VarietySpec::All, _) => {}
            (v, Some(g)) if v.is_abelian() => {
                if !g.is_abelian() {
                    return Err(Error::NonAbelianCoefficients);
                }
            }
            (v, None) if v.is_abelian() => {}
            (VarietySpec::Nilpotent(2) | VarietySpec::Metabelian, None) => {}
            (VarietySpec::Nilpotent(2) | VarietySpec::Metabelian, Some(_)) => {
                return Err(Error::UnsupportedVariety(format!(
                    "{variety} is decided only for a trivial coefficient group"
                )))
            }
            (other, _) => return Err(Error::UnsupportedVariety(format!("no identity decider for {other}"))),
        }
        Ok(IdentityOracle { variety: variety.clone(), coeff })
    }

    pub fn variety(&self) -> &VarietySpec {
        &self.variety
    }

    pub fn contains(&self, w: &Word) -> Result<bool> {
        if let Some(g) = w.coeff() {
            if !self.coeff.as_ref().is_some_and(|c| c.same_as(g)) {
                return Err(Error::MismatchedContext("word uses a different coefficient group".into()));
            }
        }
        match &self.variety {
            VarietySpec::All => Ok(w.is_identity()),
            v if v.is_abelian() => Ok(abelian::in_derived_subgroup(w)),
            VarietySpec::Nilpotent(2) => Ok(malcev_normal_form(w)?.is_zero()),
            VarietySpec::Metabelian => Ok(magnus_image(w)?.is_identity()),
            _ => unreachable!("rejected in new"),
        }
    }
}

/// `w ∈ Id_V(X)`, for the coefficient group of `w`.
pub fn identity_member(w: &Word, variety: &VarietySpec) -> Result<bool> {
    IdentityOracle::new(variety, w.coeff())?.contains(w)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::finite_groups::{build_cyclic, build_symmetric, direct_product, GEmbedding};
    use crate::words::parse_word;

    #[test]
    fn laws_of_each_variety() {
        assert!(laws_of(&VarietySpec::All).is_empty());
        assert_eq!(laws_of(&VarietySpec::Abelian)[0].to_string(), "x1^-1*x2^-1*x1*x2");
        let ctx = WordContext::constant_free(3);
        assert_eq!(laws_of(&VarietySpec::Nilpotent(2))[0], parse_word("[[x1,x2],x3]", &ctx).unwrap());
        let ctx = WordContext::constant_free(4);
        assert_eq!(laws_of(&VarietySpec::Metabelian)[0], parse_word("[[x1,x2],[x3,x4]]", &ctx).unwrap());
    }

    #[test]
    fn parse_round_trips() {
        for text in ["all", "abelian", "nilpotent 3", "metabelian", "laws { x1^4; [x1,x2]^2 }"] {
            let v = VarietySpec::parse(text).unwrap();
            assert_eq!(VarietySpec::parse(&v.to_string()).unwrap(), v);
        }
        assert!(VarietySpec::parse("nilpotent 0").is_err());
        assert!(VarietySpec::parse("burnside 3").is_err());
        assert!(VarietySpec::parse("laws { g1 }").is_err());
        assert!(VarietySpec::parse("abelian extra").is_err());
    }

    #[test]
    fn sampler_for_all_is_empty() {
        assert!(identity_instance_sample(&VarietySpec::All, 2, None, 10, 3, 0).unwrap().is_empty());
    }

    #[test]
    fn abelian_instance_example() {
        let ctx = WordContext::constant_free(2);
        let comm = laws_of(&VarietySpec::Abelian).remove(0);
        let sigma = Substitution::new(
            vec![parse_word("x1*x2", &ctx).unwrap(), parse_word("x2", &ctx).unwrap()],
            &ctx,
        )
        .unwrap();
        let inst = comm.substitute(&sigma).unwrap();
        assert!(!inst.is_identity());
        let h = Arc::new(direct_product(&build_cyclic(6).unwrap(), &build_cyclic(6).unwrap()).unwrap());
        let lambda = GEmbedding::trivial(&h);
        for a in h.elements() {
            for b in h.elements() {
                assert_eq!(inst.evaluate(&[a, b], &h, &lambda).unwrap(), h.identity());
            }
        }
    }

    #[test]
    fn sampler_is_deterministic() {
        let g = Some(Arc::new(build_cyclic(6).unwrap()));
        let a = identity_instance_sample(&VarietySpec::Abelian, 2, g.clone(), 20, 3, 42).unwrap();
        let b = identity_instance_sample(&VarietySpec::Abelian, 2, g, 20, 3, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().any(|w| !w.is_identity()));
    }

    #[test]
    fn identity_member_examples() {
        let ctx = WordContext::constant_free(3);
        let w = |t| parse_word(t, &ctx).unwrap();
        assert!(identity_member(&w("[[x1,x2],x3]"), &VarietySpec::Nilpotent(2)).unwrap());
        assert!(!identity_member(&w("[x1,x2]"), &VarietySpec::Metabelian).unwrap());
        assert!(identity_member(&w("[x1,x2]*[x2,x1]"), &VarietySpec::All).unwrap());
        assert!(identity_member(&w("[x1,x2]"), &VarietySpec::Abelian).unwrap());
        assert!(!identity_member(&w("x1"), &VarietySpec::Abelian).unwrap());
    }

    #[test]
    fn unsupported_cases() {
        let ctx = WordContext::constant_free(3);
        let w = parse_word("x1", &ctx).unwrap();
        assert!(matches!(identity_member(&w, &VarietySpec::Nilpotent(3)), Err(Error::UnsupportedVariety(_))));
        let laws = VarietySpec::Laws(vec![parse_word("x1^2", &WordContext::constant_free(1)).unwrap()]);
        assert!(matches!(identity_member(&w, &laws), Err(Error::UnsupportedVariety(_))));
        let s3 = Arc::new(build_symmetric(3).unwrap());
        let ctx = WordContext::new(1, Some(s3));
        let w = parse_word("g1*x1", &ctx).unwrap();
        assert!(matches!(identity_member(&w, &VarietySpec::Abelian), Err(Error::NonAbelianCoefficients)));
        assert!(matches!(identity_member(&w, &VarietySpec::Metabelian), Err(Error::UnsupportedVariety(_))));
    }

    #[test]
    fn constants_in_abelian_identities() {
        let c4 = Arc::new(build_cyclic(4).unwrap());
        let ctx = WordContext::new(1, Some(c4));
        let w = |t| parse_word(t, &ctx).unwrap();
        // g1 x1 g3 x1^-1 has trivial abelian image
        assert!(identity_member(&w("g1*x1*g3*x1^-1"), &VarietySpec::Abelian).unwrap());
        assert!(!identity_member(&w("g1*x1*g1*x1^-1"), &VarietySpec::Abelian).unwrap());
        assert!(identity_member(&w("[g1,x1]"), &VarietySpec::Nilpotent(1)).unwrap());
    }
}
