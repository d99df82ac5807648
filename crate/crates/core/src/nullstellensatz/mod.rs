//! Verbal closures `<S^{G[X]}> * Id_V(X)`, certificates, and the witness
//! construction for abelian and class-2 nilpotent varieties.

mod class2;
mod containment;
mod witness;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::geometry::{radical_member_finite, solve_finite, word_ball, AlgebraicSet, EquationSystem};
use crate::finite_groups::{FiniteGroup, GEmbedding};
use crate::intlinalg::{hnf, pivot_columns, AugLattice, LatticeSolver};
use crate::varieties::{abelianization, identity_member, malcev_normal_form, AbelianDecomposition, VarietySpec};
use crate::words::{Word, WordContext};
use crate::Limits;

pub use class2::{CentralGenerator, Class2Decomposition, Class2Quotient};
pub use containment::{containment_sample_check, ContainmentFailure, ContainmentReport};
pub use witness::{witness_construct, KPresentation, WitnessReport};

/// Largest number of conjugation entries a certificate may hold.
pub const MAX_CERTIFICATE_ENTRIES: usize = 1_000_000;

/// One factor `c^-1 * s_i^sign * c` of a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateEntry {
    pub conjugator: Word,
    /// 1-based position in the system.
    pub index: usize,
    pub sign: i8,
}

impl CertificateEntry {
    fn plain(index: usize, sign: i8, ctx: &WordContext) -> Self {
        CertificateEntry { conjugator: Word::identity(ctx), index, sign }
    }

    pub fn word(&self, system: &EquationSystem) -> Result<Word> {
        let s = system.words().get(self.index.wrapping_sub(1)).ok_or_else(|| {
            Error::InvalidParameter(format!("certificate refers to equation {} of {}", self.index, system.len()))
        })?;
        let base = if self.sign < 0 { s.inverse() } else { s.clone() };
        base.conjugate(&system.adopt(&self.conjugator)?)
    }
}

/// `w = reconstruction * identity_tail` with the reconstruction an explicit
/// product of conjugates of system words and the tail in `Id_V(X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VClosureCertificate {
    pub conjugation_part: Vec<CertificateEntry>,
    pub identity_tail: Word,
    pub reconstruction: Word,
}

fn product_of(entries: &[CertificateEntry], system: &EquationSystem) -> Result<Word> {
    entries.iter().try_fold(Word::identity(system.context()), |acc, e| acc.concat(&e.word(system)?))
}

impl VClosureCertificate {
    fn assemble(entries: Vec<CertificateEntry>, w: &Word, system: &EquationSystem) -> Result<Self> {
        let reconstruction = product_of(&entries, system)?;
        let identity_tail = reconstruction.inverse().concat(w)?;
        Ok(VClosureCertificate { conjugation_part: entries, identity_tail, reconstruction })
    }

    /// Recomputes the reconstruction and the tail from the entries, and
    /// checks the tail with the identity decider of `variety`.
    pub fn verify(&self, w: &Word, system: &EquationSystem, variety: &VarietySpec) -> Result<bool> {
        let w = system.adopt(w)?;
        let p = product_of(&self.conjugation_part, system)?;
        if p != self.reconstruction {
            return Ok(false);
        }
        let tail = p.inverse().concat(&w)?;
        if tail != self.identity_tail || p.concat(&tail)? != w {
            return Ok(false);
        }
        identity_member(&tail, variety)
    }

    /// Serialized form: one `conj` line per entry, then `idtail`.
    pub fn lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .conjugation_part
            .iter()
            .map(|e| format!("conj {} idx {} sign {}", e.conjugator, e.index, if e.sign < 0 { "-1" } else { "+1" }))
            .collect();
        out.push(format!("idtail {}", self.identity_tail));
        out
    }
}

impl fmt::Display for VClosureCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.lines().join("\n"))
    }
}

#[derive(Clone, Debug)]
enum Kind {
    Abelian { decomposition: AbelianDecomposition, solver: LatticeSolver },
    Class2(Class2Quotient),
}

/// `<S^{G[X]}> * Id_V(X)` for a fixed system, prepared for repeated
/// membership queries. Supported: abelian `V` with abelian (or trivial)
/// `G`, and `Nilpotent(2)` with trivial `G`.
#[derive(Clone, Debug)]
pub struct VClosure {
    system: EquationSystem,
    variety: VarietySpec,
    kind: Kind,
}

fn check_supported(system: &EquationSystem, variety: &VarietySpec) -> Result<()> {
    variety.validate()?;
    match (variety, system.coeff()) {
        (v, None) if v.is_abelian() || v.is_class_two() => Ok(()),
        (v, Some(g)) if v.is_abelian() && g.is_abelian() => Ok(()),
        (v, Some(_)) if v.is_abelian() => {
            Err(Error::UnsupportedVariety("abelian closures need an abelian coefficient group".into()))
        }
        (v, Some(_)) if v.is_class_two() => {
            Err(Error::UnsupportedVariety(format!("{v} closures are decided only without coefficients")))
        }
        (v, _) => Err(Error::UnsupportedVariety(format!("no closure decider for {v}"))),
    }
}

impl VClosure {
    pub fn new(system: &EquationSystem, variety: &VarietySpec) -> Result<Self> {
        check_supported(system, variety)?;
        let n = system.var_count();
        let kind = if variety.is_abelian() {
            let decomposition = AbelianDecomposition::of_coeff(system.coeff())?;
            let rows: Vec<Vec<BigInt>> = system
                .words()
                .iter()
                .map(|s| abelianization(s, &decomposition).map(|a| a.to_vector()))
                .collect::<Result<_>>()?;
            let lattice = AugLattice::from_rows(n, decomposition.moduli().to_vec(), &rows)?;
            Kind::Abelian { decomposition, solver: LatticeSolver::new(&lattice) }
        } else {
            let relators = system.words().iter().map(malcev_normal_form).collect::<Result<_>>()?;
            Kind::Class2(Class2Quotient::new(n, relators)?)
        };
        Ok(VClosure { system: system.clone(), variety: variety.clone(), kind })
    }

    pub fn system(&self) -> &EquationSystem {
        &self.system
    }

    pub fn variety(&self) -> &VarietySpec {
        &self.variety
    }

    /// Image lattice of the system in `Z^n + G` (abelian case only).
    pub fn abelian_lattice(&self) -> Option<(&AugLattice, &AbelianDecomposition)> {
        match &self.kind {
            Kind::Abelian { decomposition, solver } => Some((solver.lattice(), decomposition)),
            Kind::Class2(_) => None,
        }
    }

    pub fn class2_quotient(&self) -> Option<&Class2Quotient> {
        match &self.kind {
            Kind::Class2(q) => Some(q),
            Kind::Abelian { .. } => None,
        }
    }

    /// A certificate if `w` is in the closure, `None` otherwise.
    pub fn decide(&self, w: &Word) -> Result<Option<VClosureCertificate>> {
        let w = self.system.adopt(w)?;
        let ctx = self.system.context();
        if identity_member(&w, &self.variety)? {
            return VClosureCertificate::assemble(Vec::new(), &w, &self.system).map(Some);
        }
        for (k, s) in self.system.words().iter().enumerate() {
            for sign in [1i8, -1] {
                if (sign > 0 && *s == w) || (sign < 0 && s.inverse() == w) {
                    let entry = CertificateEntry::plain(k + 1, sign, ctx);
                    return VClosureCertificate::assemble(vec![entry], &w, &self.system).map(Some);
                }
            }
        }
        let mut entries = Vec::new();
        match &self.kind {
            Kind::Abelian { decomposition, solver } => {
                let v = abelianization(&w, decomposition)?.to_vector();
                let Some(coeffs) = solver.solve(&v)? else { return Ok(None) };
                push_powers(&mut entries, &coeffs, ctx)?;
            }
            Kind::Class2(q) => {
                let v = malcev_normal_form(&w)?;
                let Some(dec) = q.decompose(&v)? else { return Ok(None) };
                push_powers(&mut entries, &dec.kappa, ctx)?;
                for (gen, mu) in q.central_generators().iter().zip(&dec.mu) {
                    let times = repeat_count(mu, entries.len())?;
                    let piece = central_piece(q, gen, mu.is_negative(), &self.system)?;
                    for _ in 0..times {
                        entries.extend(piece.iter().cloned());
                        check_size(entries.len())?;
                    }
                }
            }
        }
        let cert = VClosureCertificate::assemble(entries, &w, &self.system)?;
        debug_assert!(cert.verify(&w, &self.system, &self.variety).unwrap_or(false), "unsound certificate for {w}");
        Ok(Some(cert))
    }

    pub fn contains(&self, w: &Word) -> Result<bool> {
        Ok(self.decide(w)?.is_some())
    }
}

fn check_size(len: usize) -> Result<()> {
    if len > MAX_CERTIFICATE_ENTRIES {
        return Err(Error::BudgetExceeded(format!("certificate longer than {MAX_CERTIFICATE_ENTRIES} entries")));
    }
    Ok(())
}

fn repeat_count(c: &BigInt, already: usize) -> Result<usize> {
    let times = c.abs().to_usize().unwrap_or(usize::MAX);
    check_size(already.saturating_add(times))?;
    Ok(times)
}

/// `prod_k s_k^c_k` as plain entries.
fn push_powers(entries: &mut Vec<CertificateEntry>, coeffs: &[BigInt], ctx: &WordContext) -> Result<()> {
    for (k, c) in coeffs.iter().enumerate() {
        let times = repeat_count(c, entries.len())?;
        let sign = if c.is_negative() { -1 } else { 1 };
        entries.extend(std::iter::repeat_n(CertificateEntry::plain(k + 1, sign, ctx), times));
    }
    Ok(())
}

/// Entries whose product is the central generator, or its inverse.
fn central_piece(
    q: &Class2Quotient,
    gen: &CentralGenerator,
    inverse: bool,
    system: &EquationSystem,
) -> Result<Vec<CertificateEntry>> {
    let ctx = system.context();
    Ok(match *gen {
        // [t, x] = t^-1 * (x^-1 t x)
        CentralGenerator::Commutator { relator, var } => {
            let x = Word::var(ctx, var)?;
            let conj = CertificateEntry { conjugator: x, index: relator, sign: if inverse { -1 } else { 1 } };
            let plain = CertificateEntry::plain(relator, if inverse { 1 } else { -1 }, ctx);
            if inverse {
                vec![conj, plain]
            } else {
                vec![plain, conj]
            }
        }
        CentralGenerator::KernelProduct(r) => {
            let mut piece = Vec::new();
            push_powers(&mut piece, &q.kernel()[r], ctx)?;
            if inverse {
                piece.reverse();
                for e in &mut piece {
                    e.sign = -e.sign;
                }
            }
            piece
        }
    })
}

/// `w ∈ <S^{G[X]}> * Id_V(X)`, with a certificate on yes-answers.
pub fn vclosure_member(
    w: &Word,
    system: &EquationSystem,
    variety: &VarietySpec,
) -> Result<(bool, Option<VClosureCertificate>)> {
    let cert = VClosure::new(system, variety)?.decide(w)?;
    Ok((cert.is_some(), cert))
}

/// `Q ∩ G = 1` in `F_V(X)`, where `Q` is the closure of the system.
pub fn consistency_check(system: &EquationSystem, variety: &VarietySpec) -> Result<bool> {
    variety.validate()?;
    let Some(g) = system.coeff() else { return Ok(true) };
    if !variety.is_abelian() {
        return Err(Error::UnsupportedVariety(format!("{variety} consistency is decided only without coefficients")));
    }
    if !g.is_abelian() {
        return Err(Error::UnsupportedVariety("abelian consistency needs an abelian coefficient group".into()));
    }
    let closure = VClosure::new(system, variety)?;
    let (lattice, _) = closure.abelian_lattice().expect("abelian closure");
    let n = lattice.free_rank();
    let (h, _) = hnf(&lattice.relation_matrix());
    // rows with pivot past the free block span L ∩ (0 + G)
    for (r, c) in pivot_columns(&h).into_iter().enumerate() {
        if c < n {
            continue;
        }
        for (j, d) in lattice.moduli().iter().enumerate() {
            if !(&h[(r, n + j)] % d).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A ball word on which `Rad_H(S)` and the closure disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscrepancyEntry {
    pub word: Word,
    pub in_radical: bool,
    pub in_closure: bool,
}

/// Ball words where `Rad_H(S)` differs from `<S^{G[X]}> * Id_V(X)`; for
/// `H ∈ V` these are radical members outside the closure.
pub fn nsatz_finite_discrepancy(
    system: &EquationSystem,
    variety: &VarietySpec,
    h: &std::sync::Arc<FiniteGroup>,
    lambda: &GEmbedding,
    max_len: usize,
    limits: &Limits,
) -> Result<Vec<DiscrepancyEntry>> {
    let closure = VClosure::new(system, variety)?;
    let set: AlgebraicSet = solve_finite(system, h, lambda, limits, 1)?;
    let mut out = Vec::new();
    for w in word_ball(system.context(), max_len, limits.ball_cap)? {
        let in_radical = radical_member_finite(&w, &set)?.member;
        let in_closure = closure.contains(&w)?;
        if in_radical != in_closure {
            out.push(DiscrepancyEntry { word: w, in_radical, in_closure });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
