//! The witness `(T', K, b)`: a `V`-group `K` and a point `b` solving the
//! system while violating `f`.

use num_bigint::BigInt;

use super::{consistency_check, Class2Quotient, VClosure};
use crate::error::{Error, Result};
use crate::geometry::EquationSystem;
use crate::intlinalg::{quotient_presentation, FGAbelian};
use crate::varieties::{FreeClass2, MalcevVector, VarietySpec};
use crate::words::Word;

/// `K = F_V(X) / Q` together with the images of the variables and
/// constants.
#[derive(Clone, Debug)]
pub enum KPresentation {
    Abelian {
        group: FGAbelian,
        /// `b_i`, the image of `x_i`.
        solution: Vec<Vec<BigInt>>,
        /// Image of each element of `G`, by identifier.
        constants: Vec<Vec<BigInt>>,
    },
    Class2 {
        quotient: Box<Class2Quotient>,
        /// `b_i` as Mal'cev representatives.
        solution: Vec<MalcevVector>,
    },
}

#[derive(Clone, Debug)]
pub struct WitnessReport {
    /// Equations `w_1..w_k` of `T'`.
    pub equations: Vec<Word>,
    /// The inequation `f != 1` of `T'`.
    pub inequation: Word,
    pub presentation: KPresentation,
    pub equation_values: Vec<String>,
    pub inequation_value: String,
}

enum Value {
    Abelian(Vec<BigInt>),
    Class2(MalcevVector),
}

impl KPresentation {
    fn evaluate(&self, w: &Word) -> Result<Value> {
        match self {
            KPresentation::Abelian { group, solution, constants } => {
                Ok(Value::Abelian(w.evaluate_in(group, solution, |g| constants[g as usize].clone())?))
            }
            KPresentation::Class2 { quotient, solution } => {
                let f = FreeClass2 { rank: quotient.rank() };
                if w.has_constants() {
                    return Err(Error::ConstantsNotSupported);
                }
                Ok(Value::Class2(w.evaluate_in(&f, solution, |_| unreachable!("constant-free"))?))
            }
        }
    }

    fn is_trivial(&self, v: &Value) -> Result<bool> {
        match (self, v) {
            (KPresentation::Abelian { group, .. }, Value::Abelian(x)) => Ok(group.is_zero(x)),
            (KPresentation::Class2 { quotient, .. }, Value::Class2(x)) => quotient.contains(x),
            _ => unreachable!("value from this presentation"),
        }
    }

    fn format(&self, v: &Value) -> String {
        match (self, v) {
            (KPresentation::Abelian { group, .. }, Value::Abelian(x)) => group.format_element(x),
            (_, Value::Class2(x)) => x.to_string(),
            _ => unreachable!("value from this presentation"),
        }
    }

    /// `K = ...` description.
    pub fn describe(&self) -> String {
        match self {
            KPresentation::Abelian { group, .. } => group.to_string(),
            KPresentation::Class2 { quotient, .. } => quotient.to_string(),
        }
    }

    /// The point `b`, one entry per variable.
    pub fn solution_strings(&self) -> Vec<String> {
        match self {
            KPresentation::Abelian { group, solution, .. } => solution.iter().map(|b| group.format_element(b)).collect(),
            KPresentation::Class2 { solution, .. } => solution.iter().map(MalcevVector::to_string).collect(),
        }
    }
}

impl WitnessReport {
    /// Re-evaluates `T'` at `b` in `K`: every equation must vanish and the
    /// inequation must not.
    pub fn validate(&self) -> Result<bool> {
        let p = &self.presentation;
        for w in &self.equations {
            if !p.is_trivial(&p.evaluate(w)?)? {
                return Ok(false);
            }
        }
        Ok(!p.is_trivial(&p.evaluate(&self.inequation)?)?)
    }

    /// `G` embeds in `K`: only the identity constant maps to zero
    /// (abelian case; trivially true otherwise).
    pub fn g_embeds(&self) -> bool {
        match &self.presentation {
            KPresentation::Abelian { group, constants, .. } => constants.iter().filter(|c| group.is_zero(c)).count() == 1,
            KPresentation::Class2 { .. } => true,
        }
    }
}

/// Builds `K = F_V(X)/Q` and `b_i = x_i Q` for `f` outside the closure `Q`.
pub fn witness_construct(system: &EquationSystem, f: &Word, variety: &VarietySpec) -> Result<WitnessReport> {
    let closure = VClosure::new(system, variety)?;
    let f = system.adopt(f)?;
    if !consistency_check(system, variety)? {
        return Err(Error::Inconsistent);
    }
    if closure.contains(&f)? {
        return Err(Error::NotOutsideClosure);
    }
    let n = system.var_count();
    let presentation = if let Some((lattice, decomposition)) = closure.abelian_lattice() {
        let group = quotient_presentation(lattice);
        let dim = lattice.dim();
        let unit = |i: usize| {
            let mut e = vec![BigInt::from(0); dim];
            e[i] = BigInt::from(1);
            e
        };
        let solution = (0..n).map(|i| group.project(&unit(i))).collect::<Result<_>>()?;
        let constants = match system.coeff() {
            Some(g) => g
                .elements()
                .map(|a| {
                    let mut v = vec![BigInt::from(0); n];
                    v.extend(decomposition.coords(a).iter().cloned());
                    group.project(&v)
                })
                .collect::<Result<_>>()?,
            None => vec![group.zero()],
        };
        KPresentation::Abelian { group, solution, constants }
    } else {
        let quotient = Box::new(closure.class2_quotient().expect("class-2 closure").clone());
        let solution = (1..=n).map(|i| MalcevVector::generator(n, i, &BigInt::from(1))).collect();
        KPresentation::Class2 { quotient, solution }
    };
    let mut equation_values = Vec::new();
    for w in system.words() {
        equation_values.push(presentation.format(&presentation.evaluate(w)?));
    }
    let inequation_value = presentation.format(&presentation.evaluate(&f)?);
    Ok(WitnessReport {
        equations: system.words().to_vec(),
        inequation: f,
        presentation,
        equation_values,
        inequation_value,
    })
}
