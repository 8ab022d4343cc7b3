//! NC integration.
//!
//! A word of direction degree one collapses to a base word by turning its
//! direction letter back into the matching base letter. Words with equal
//! collapses are *1-differentially wed*, and a wed class is exactly the set of
//! terms of the derivative of its collapse. A polynomial is integrable iff it
//! is a union of complete classes with one coefficient per class; the
//! antiderivative keeps one collapsed word per class.
//!
//! The same construction with one plain and one transposed direction letter
//! gives *Levi-differentially wed* classes, which characterise complex
//! hessians.
//!
//! Classes are opened greedily in word order, so the representative of a
//! class is always its smallest word.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::freealg::{Coeff, Letter, Polynomial, Word};
use crate::nccalc::partial_x;

/// All words obtained from `m` by replacing exactly one occurrence of `from`
/// with `to`.
pub fn subst_set(m: &Word, from: Letter, to: Letter) -> BTreeSet<Word> {
    m.positions_of(from)
        .map(|pos| m.with_letter_at(pos, to))
        .collect()
}

/// Substitution applied to every word of a set (the double substitution
/// `m_{x_i -> h_i}{x_j -> h_j}` is `subst_set_all(&subst_set(m, ..), ..)`).
pub fn subst_set_all(words: &BTreeSet<Word>, from: Letter, to: Letter) -> BTreeSet<Word> {
    words.iter().flat_map(|w| subst_set(w, from, to)).collect()
}

/// Collapse of a word with exactly one direction letter, plus that letter.
pub fn one_collapse(m: &Word) -> Option<(Word, Letter)> {
    let dirs = m.direction_positions();
    if dirs.len() != 1 {
        return None;
    }
    let pos = dirs[0];
    let letter = m.letters()[pos];
    Some((m.with_letter_at(pos, letter.to_base()), letter))
}

/// Double collapse of a word with exactly one plain and one transposed
/// direction letter.
pub fn levi_collapse(m: &Word) -> Option<Word> {
    let dirs = m.direction_positions();
    if dirs.len() != 2 {
        return None;
    }
    let (a, b) = (m.letters()[dirs[0]], m.letters()[dirs[1]]);
    if a.transposed == b.transposed {
        return None;
    }
    Some(m.collapse_directions())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WedRelation {
    NotWed,
    Wed,
    /// Wed through an interchange of this base letter with its direction.
    WedWrt(Letter),
}

impl WedRelation {
    pub fn is_wed(self) -> bool {
        !matches!(self, WedRelation::NotWed)
    }
}

pub fn one_wed(m: &Word, other: &Word) -> WedRelation {
    if m.len() != other.len() {
        return WedRelation::NotWed;
    }
    match (one_collapse(m), one_collapse(other)) {
        (Some((cm, lm)), Some((co, lo))) if cm == co => {
            if lm == lo {
                WedRelation::WedWrt(lm.to_base())
            } else {
                WedRelation::Wed
            }
        }
        _ => WedRelation::NotWed,
    }
}

pub fn levi_wed(m: &Word, other: &Word) -> bool {
    match (levi_collapse(m), levi_collapse(other)) {
        (Some(a), Some(b)) => a == b,
        _ => false,
    }
}

/// Members of the 1-wed class whose collapse is `base`.
pub fn one_wed_members(base: &Word) -> BTreeSet<Word> {
    base.letters()
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.is_direction())
        .map(|(pos, l)| base.with_letter_at(pos, l.to_direction()))
        .collect()
}

/// Members of the Levi class whose double collapse is `base`.
pub fn levi_wed_members(base: &Word) -> BTreeSet<Word> {
    let letters = base.letters();
    let mut out = BTreeSet::new();
    for (i, a) in letters.iter().enumerate() {
        if a.is_direction() || a.transposed {
            continue;
        }
        for (j, b) in letters.iter().enumerate() {
            if b.is_direction() || !b.transposed {
                continue;
            }
            let w = base
                .with_letter_at(i, a.to_direction())
                .with_letter_at(j, b.to_direction());
            out.insert(w);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WedKind {
    OneWed,
    LeviWed,
}

/// One equivalence class found in a polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedClass {
    pub representative: Word,
    pub members: BTreeSet<Word>,
    pub kind: WedKind,
    /// Shared coefficient of every member.
    pub coefficient: Coeff,
}

impl WedClass {
    /// The base word all members collapse to.
    pub fn collapse(&self) -> Word {
        self.representative.collapse_directions()
    }
}

/// Why a polynomial failed a class-closure test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassDefect {
    /// The word does not have the direction structure the test requires.
    WrongDirections { word: Word },
    /// A class mate of `word` is absent.
    MissingMate { word: Word, missing: Word },
    /// A class mate of `word` is present with a different coefficient.
    CoefficientMismatch { word: Word, mate: Word },
}

impl ClassDefect {
    pub fn word(&self) -> &Word {
        match self {
            ClassDefect::WrongDirections { word }
            | ClassDefect::MissingMate { word, .. }
            | ClassDefect::CoefficientMismatch { word, .. } => word,
        }
    }

    /// The missing or mismatched mate, if the defect has one.
    pub fn mate(&self) -> Option<&Word> {
        match self {
            ClassDefect::WrongDirections { .. } => None,
            ClassDefect::MissingMate { missing, .. } => Some(missing),
            ClassDefect::CoefficientMismatch { mate, .. } => Some(mate),
        }
    }
}

/// Greedy class grouping shared by every closure test.
fn group_classes(
    p: &Polynomial,
    kind: WedKind,
    mut base_of: impl FnMut(&Word) -> Option<Word>,
    mut members_of: impl FnMut(&Word) -> BTreeSet<Word>,
) -> Result<Vec<WedClass>, ClassDefect> {
    let mut grouped: BTreeSet<Word> = BTreeSet::new();
    let mut classes = Vec::new();
    for (word, c) in p.terms() {
        if grouped.contains(word) {
            continue;
        }
        let base = base_of(word).ok_or_else(|| ClassDefect::WrongDirections { word: word.clone() })?;
        let members = members_of(&base);
        for mate in &members {
            if !p.contains(mate) {
                return Err(ClassDefect::MissingMate {
                    word: word.clone(),
                    missing: mate.clone(),
                });
            }
            if &p.coefficient(mate) != c {
                return Err(ClassDefect::CoefficientMismatch {
                    word: word.clone(),
                    mate: mate.clone(),
                });
            }
        }
        grouped.extend(members.iter().cloned());
        classes.push(WedClass {
            representative: word.clone(),
            members,
            kind,
            coefficient: c.clone(),
        });
    }
    Ok(classes)
}

/// Integrability in all variables (plain and transposed directions alike).
pub fn is_integrable(p: &Polynomial) -> Result<Vec<WedClass>, ClassDefect> {
    group_classes(
        p,
        WedKind::OneWed,
        |w| one_collapse(w).map(|(base, _)| base),
        one_wed_members,
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntegrationError {
    #[error("not integrable: {0:?}")]
    NotIntegrable(ClassDefect),
    #[error("not integrable in x{var}: {defect:?}")]
    NotIntegrableIn { var: u32, defect: ClassDefect },
}

fn antiderivative(vars: usize, classes: &[WedClass]) -> Polynomial {
    let mut f = Polynomial::zero(vars);
    for class in classes {
        f.add_term(class.collapse(), class.coefficient.clone());
    }
    f
}

/// `f` with `derivative(f) == p` and zero constant term.
pub fn integrate(p: &Polynomial) -> Result<Polynomial, IntegrationError> {
    let classes = is_integrable(p).map_err(IntegrationError::NotIntegrable)?;
    Ok(antiderivative(p.vars(), &classes))
}

/// Closure test for a single variable: every word carries exactly one
/// direction letter, which is `h_j`, and its classes wrt `x_j` are complete.
pub fn integrable_in(p: &Polynomial, j: u32) -> Result<Vec<WedClass>, ClassDefect> {
    let (xj, hj) = (Letter::x(j), Letter::h(j));
    group_classes(
        p,
        WedKind::OneWed,
        |w| match one_collapse(w) {
            Some((base, letter)) if letter == hj => Some(base),
            _ => None,
        },
        |base| subst_set(base, xj, hj),
    )
}

/// `f` with `partial_x(f, j) == p` and zero constant term.
pub fn integrate_in(p: &Polynomial, j: u32) -> Result<Polynomial, IntegrationError> {
    let classes =
        integrable_in(p, j).map_err(|defect| IntegrationError::NotIntegrableIn { var: j, defect })?;
    Ok(antiderivative(p.vars(), &classes))
}

/// A candidate gradient `(f_1, ..., f_g)`: `f_i` is linear in `h_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusSystem {
    components: Vec<Polynomial>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrobeniusError {
    #[error("expected {expected} components, got {got}")]
    ComponentCount { expected: usize, got: usize },
    #[error("component {component} mixes contexts")]
    ContextMismatch { component: usize },
    #[error("component {component} is malformed at word {word}")]
    Malformed { component: usize, word: Word },
}

impl FrobeniusSystem {
    /// Components are indexed from 1. Every word of `f_i` must be analytic
    /// with exactly one direction letter, `h_i`.
    pub fn new(components: Vec<Polynomial>) -> Result<Self, FrobeniusError> {
        let vars = components.first().map(Polynomial::vars).unwrap_or(0);
        if components.len() != vars {
            return Err(FrobeniusError::ComponentCount {
                expected: vars,
                got: components.len(),
            });
        }
        for (i, f) in components.iter().enumerate() {
            let idx = i as u32 + 1;
            if f.vars() != vars {
                return Err(FrobeniusError::ContextMismatch {
                    component: idx as usize,
                });
            }
            for w in f.words() {
                let ok = w.is_analytic() && matches!(one_collapse(w), Some((_, l)) if l == Letter::h(idx));
                if !ok {
                    return Err(FrobeniusError::Malformed {
                        component: idx as usize,
                        word: w.clone(),
                    });
                }
            }
        }
        Ok(FrobeniusSystem { components })
    }

    /// Split an analytic derivative `delta` by direction index.
    pub fn split(delta: &Polynomial) -> Result<Self, FrobeniusError> {
        if let Some(w) = delta.words().find(|w| one_collapse(w).is_none()) {
            return Err(FrobeniusError::Malformed {
                component: 0,
                word: w.clone(),
            });
        }
        let comps = (1..=delta.vars() as u32)
            .map(|i| delta.filter_terms(|w| matches!(one_collapse(w), Some((_, l)) if l.index == i)))
            .collect();
        Self::new(comps)
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn sum(&self) -> Polynomial {
        let vars = self.components.first().map(Polynomial::vars).unwrap_or(0);
        self.components
            .iter()
            .fold(Polynomial::zero(vars), |acc, f| &acc + f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrobeniusFailure {
    ComponentNotIntegrable(u32),
    CrossPartialMismatch(u32, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrobeniusVerdict {
    Integrable { potential: Polynomial },
    Fail(FrobeniusFailure),
}

/// Each `f_i` integrable in `x_i` and `(f_i)_{x_j}[h_j] = (f_j)_{x_i}[h_i]`.
/// On success the potential is the antiderivative of `sum f_i`.
pub fn frobenius_check(sys: &FrobeniusSystem) -> FrobeniusVerdict {
    let comps = sys.components();
    for (i, f) in comps.iter().enumerate() {
        if integrable_in(f, i as u32 + 1).is_err() {
            return FrobeniusVerdict::Fail(FrobeniusFailure::ComponentNotIntegrable(i as u32 + 1));
        }
    }
    for i in 0..comps.len() {
        for j in (i + 1)..comps.len() {
            let (ii, jj) = (i as u32 + 1, j as u32 + 1);
            if partial_x(&comps[i], jj) != partial_x(&comps[j], ii) {
                return FrobeniusVerdict::Fail(FrobeniusFailure::CrossPartialMismatch(ii, jj));
            }
        }
    }
    let potential = integrate(&sys.sum()).expect("condition (b) implies integrability");
    FrobeniusVerdict::Integrable { potential }
}

/// P1: one plain and one transposed direction letter per word.
/// P2: Levi classes complete with equal coefficients.
pub fn levi_classes(q: &Polynomial) -> Result<Vec<WedClass>, ClassDefect> {
    group_classes(q, WedKind::LeviWed, levi_collapse, levi_wed_members)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HessianViolation {
    P1(Word),
    P2 { word: Word, missing: Word },
    CoefficientMismatch { word: Word, mate: Word },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HessianVerdict {
    Yes { antiderivative: Polynomial },
    No(HessianViolation),
}

/// Recognise complex hessians; on success `complex_hessian(antiderivative) == q`.
pub fn is_complex_hessian(q: &Polynomial) -> HessianVerdict {
    match levi_classes(q) {
        Ok(classes) => HessianVerdict::Yes {
            antiderivative: antiderivative(q.vars(), &classes),
        },
        Err(ClassDefect::WrongDirections { word }) => HessianVerdict::No(HessianViolation::P1(word)),
        Err(ClassDefect::MissingMate { word, missing }) => {
            HessianVerdict::No(HessianViolation::P2 { word, missing })
        }
        Err(ClassDefect::CoefficientMismatch { word, mate }) => {
            HessianVerdict::No(HessianViolation::CoefficientMismatch { word, mate })
        }
    }
}
