//! Mixed operator-Grassmann rewriting, coherent kets and bras, overlaps,
//! identity resolutions, the weight function, and the phase-convention
//! machinery.
//!
//! A mixed word is a sequence over Grassmann generators and oscillator
//! atoms. Rewriting uses only:
//!
//! - the oscillator relations among operator atoms;
//! - the cross rules xi*ad = q ad*xi and xb*a = q^2 a*xb;
//! - free commutation of Grassmann symbols with N and qN(s);
//! - the configured ket-crossing phases of a [`ConventionConfig`].
//!
//! The pairs (xi, a) and (xb, ad) are never transposed: no relation
//! connects them, and any normalization path that would need such a swap
//! reports [`CoreError::ForbiddenTransposition`] instead.
//!
//! States are written in component form sum_n G_n|n> with the Grassmann
//! coefficient on the left of the ket; bras carry their coefficients on
//! the right. Moving a Grassmann factor of grade g_x from the right of a
//! ket of grade g_k to its left multiplies by the configured phase
//! kappa(g_k, g_x), a power of q with kappa(0, .) = kappa(., 0) = 1. Kets
//! carry grades 0, 2, 1 for n = 0, 1, 2. The two built-in conventions
//! differ only in the four nonzero-grade cells of kappa:
//!
//! - `paper`: every nonzero-grade crossing costs q^2;
//! - `uniform-eq5`: a ket of grade g crosses exactly like a Grassmann
//!   generator of grade g under the binary swap rule, q^(g_x - g_k); the
//!   same-grade cells, which that rule leaves undefined, are set to 1.

use std::collections::BTreeMap;
use std::fmt;

use crate::berezin::{double_integral, MeasureOrder};
use crate::error::CoreError;
use crate::grassmann::{
    format_word, normalize_word, word_grade, AlgebraSignature, GElement, GenKind, GWord,
    GeneratorSym,
};
use crate::oscillator::{atom_on_ket, op_normalize, OpAtom, OpElement, OpWord};
use crate::scalars::CycScalar;

/// Grade carried by the basis ket |n>: 0, 2, 1 for n = 0, 1, 2.
pub fn ket_grade(n: u8) -> u8 {
    (2 * n % 3) as u8
}

/// A phase convention: the ket-crossing table, plus the measure order used
/// by integrations performed under this convention.
#[derive(Clone, Debug)]
pub struct ConventionConfig {
    name: String,
    measure_order: MeasureOrder,
    /// Exponent table: |n> * x = q^kexp[g_ket][g_x] * x * |n>.
    kexp: [[u8; 3]; 3],
}

impl ConventionConfig {
    /// Build a convention from the four nonzero-grade exponents
    /// [[e11, e12], [e21, e22]]; grade-0 rows and columns are fixed at 1.
    pub fn with_exponents(name: &str, e: [[u8; 2]; 2]) -> Self {
        let mut kexp = [[0u8; 3]; 3];
        for (i, row) in e.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                kexp[i + 1][j + 1] = v % 3;
            }
        }
        ConventionConfig { name: name.to_string(), measure_order: MeasureOrder::Notational, kexp }
    }

    /// Every nonzero-grade crossing costs q^2.
    pub fn paper() -> Self {
        Self::with_exponents("paper", [[2, 2], [2, 2]])
    }

    /// Kets cross like Grassmann generators of their grade under the
    /// binary swap rule; same-grade cells are set to 1.
    pub fn uniform_eq5() -> Self {
        let mut e = [[0u8; 2]; 2];
        for gk in 1..3u8 {
            for gx in 1..3u8 {
                e[(gk - 1) as usize][(gx - 1) as usize] = (gx + 3 - gk) % 3;
            }
        }
        Self::with_exponents("uniform-eq5", e)
    }

    pub fn builtins() -> Vec<Self> {
        vec![Self::paper(), Self::uniform_eq5()]
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "paper" => Some(Self::paper()),
            "uniform-eq5" => Some(Self::uniform_eq5()),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn measure_order(&self) -> MeasureOrder {
        self.measure_order
    }

    pub fn with_measure_order(mut self, order: MeasureOrder) -> Self {
        self.measure_order = order;
        self
    }

    /// Phase in |n> * x = kappa * x * |n> for a ket of grade `g_ket` and a
    /// Grassmann factor of grade `g_x`.
    pub fn ket_swap_phase(&self, g_ket: u8, g_x: u8) -> CycScalar {
        CycScalar::q_pow(self.kexp[(g_ket % 3) as usize][(g_x % 3) as usize] as i64)
    }

    fn ket_swap_inverse(&self, g_ket: u8, g_x: u8) -> CycScalar {
        CycScalar::q_pow(-(self.kexp[(g_ket % 3) as usize][(g_x % 3) as usize] as i64))
    }
}

/// One symbol of a mixed word.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum MixedSym {
    G(GeneratorSym),
    Op(OpAtom),
}

impl fmt::Display for MixedSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MixedSym::G(g) => write!(f, "{g}"),
            MixedSym::Op(OpAtom::Create) => f.write_str("ad"),
            MixedSym::Op(OpAtom::Annihilate) => f.write_str("a"),
            MixedSym::Op(OpAtom::Number) => f.write_str("Nop"),
            MixedSym::Op(OpAtom::QNumber(s)) => write!(f, "qN({s})"),
        }
    }
}

/// Raw linear combination of mixed words; no canonical form is imposed
/// until the element is factorized or applied to a ket.
#[derive(Clone, Debug)]
pub struct MixedElement {
    sig: AlgebraSignature,
    terms: Vec<(CycScalar, Vec<MixedSym>)>,
}

impl MixedElement {
    pub fn zero(sig: AlgebraSignature) -> Self {
        MixedElement { sig, terms: Vec::new() }
    }

    pub fn scalar(sig: AlgebraSignature, c: CycScalar) -> Self {
        MixedElement { sig, terms: vec![(c, Vec::new())] }
    }

    pub fn one(sig: AlgebraSignature) -> Self {
        Self::scalar(sig, CycScalar::one())
    }

    pub fn from_word(sig: AlgebraSignature, word: &[MixedSym]) -> Self {
        MixedElement { sig, terms: vec![(CycScalar::one(), word.to_vec())] }
    }

    pub fn from_terms(sig: AlgebraSignature, terms: Vec<(CycScalar, Vec<MixedSym>)>) -> Self {
        MixedElement { sig, terms }
    }

    pub fn signature(&self) -> AlgebraSignature {
        self.sig
    }

    pub fn terms(&self) -> &[(CycScalar, Vec<MixedSym>)] {
        &self.terms
    }

    pub fn scale(&self, c: &CycScalar) -> Self {
        MixedElement {
            sig: self.sig,
            terms: self.terms.iter().map(|(k, w)| (k * c, w.clone())).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.sig, rhs.sig, "mixed algebra signatures");
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        MixedElement { sig: self.sig, terms }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&-CycScalar::one()))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.sig, rhs.sig, "mixed algebra signatures");
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (cl, wl) in &self.terms {
            for (cr, wr) in &rhs.terms {
                let mut w = wl.clone();
                w.extend(wr.iter().copied());
                terms.push((cl * cr, w));
            }
        }
        MixedElement { sig: self.sig, terms }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.sig);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Separate every term into (Grassmann word) * (operator word), sliding
    /// operators right using only the legal cross rules.
    pub fn factorize(&self) -> Result<FactorizedMixed, CoreError> {
        let mut out = FactorizedMixed::zero(self.sig);
        for (coeff, word) in &self.terms {
            let (phase, gpart, oppart) = separate(word)?;
            let Some((gphase, gword)) = normalize_word(self.sig, &gpart)? else {
                continue;
            };
            let opelem = op_normalize(&oppart);
            for (ow, oc) in opelem.iter() {
                let total = &(&(&phase * &gphase) * coeff) * oc;
                out.accumulate(gword.clone(), *ow, total);
            }
        }
        Ok(out)
    }

    /// Apply the element to the basis ket |start>, yielding the expansion
    /// over kets with trailing Grassmann words.
    pub fn apply_to_ket(
        &self,
        conv: &ConventionConfig,
        start: u8,
    ) -> Result<VacuumExpansion, CoreError> {
        let mut out = VacuumExpansion::zero(self.sig);
        for (coeff, word) in &self.terms {
            // Slide Grassmann symbols right toward the ket where a cross
            // rule exists, so the configured phases only enter for symbols
            // genuinely stuck behind an operator.
            let mut w = word.clone();
            let mut phase = CycScalar::one();
            loop {
                let mut moved = false;
                for i in 0..w.len().saturating_sub(1) {
                    let (MixedSym::G(g), MixedSym::Op(o)) = (w[i], w[i + 1]) else {
                        continue;
                    };
                    let Some(p) = slide_right_phase(g, o) else { continue };
                    w.swap(i, i + 1);
                    phase = &phase * &p;
                    moved = true;
                }
                if !moved {
                    break;
                }
            }

            // Fold right to left: operators act on the ket, Grassmann
            // symbols cross it and join the trailing word.
            let mut ket = start;
            let mut trail: Vec<GeneratorSym> = Vec::new();
            let mut alive = true;
            for sym in w.iter().rev() {
                match sym {
                    MixedSym::Op(o) => match atom_on_ket(*o, ket) {
                        Some((c, m)) => {
                            phase = &phase * &c;
                            ket = m;
                        }
                        None => {
                            alive = false;
                            break;
                        }
                    },
                    MixedSym::G(g) => {
                        phase = &phase * &conv.ket_swap_inverse(ket_grade(ket), g.grade());
                        trail.insert(0, *g);
                    }
                }
                if phase.is_zero() {
                    alive = false;
                    break;
                }
            }
            if !alive {
                continue;
            }
            if let Some((tphase, tword)) = normalize_word(self.sig, &trail)? {
                out.accumulate(ket, tword, &(&phase * &tphase) * coeff);
            }
        }
        Ok(out)
    }

    pub fn apply_to_vacuum(&self, conv: &ConventionConfig) -> Result<VacuumExpansion, CoreError> {
        self.apply_to_ket(conv, 0)
    }
}

/// Phase for moving Grassmann symbol `g` right past operator atom `o`,
/// or `None` when no relation connects the pair.
fn slide_right_phase(g: GeneratorSym, o: OpAtom) -> Option<CycScalar> {
    match (g.kind, o) {
        (GenKind::Unbarred, OpAtom::Create) => Some(CycScalar::q_pow(1)),
        (GenKind::Barred, OpAtom::Annihilate) => Some(CycScalar::q_pow(2)),
        (_, OpAtom::Number) | (_, OpAtom::QNumber(_)) => Some(CycScalar::one()),
        (GenKind::Unbarred, OpAtom::Annihilate) | (GenKind::Barred, OpAtom::Create) => None,
    }
}

/// Separate a mixed word into Grassmann-left, operator-right, tracking the
/// phase. Errors when a forbidden pair blocks the separation.
fn separate(word: &[MixedSym]) -> Result<(CycScalar, Vec<GeneratorSym>, Vec<OpAtom>), CoreError> {
    let mut w = word.to_vec();
    let mut phase = CycScalar::one();
    loop {
        let mut moved = false;
        for i in 0..w.len().saturating_sub(1) {
            let (MixedSym::Op(o), MixedSym::G(g)) = (w[i], w[i + 1]) else {
                continue;
            };
            // Moving g left past o inverts the slide-right phase.
            let p = match (g.kind, o) {
                (GenKind::Unbarred, OpAtom::Create) => CycScalar::q_pow(2),
                (GenKind::Barred, OpAtom::Annihilate) => CycScalar::q_pow(1),
                (_, OpAtom::Number) | (_, OpAtom::QNumber(_)) => CycScalar::one(),
                (GenKind::Unbarred, OpAtom::Annihilate) | (GenKind::Barred, OpAtom::Create) => {
                    return Err(CoreError::ForbiddenTransposition {
                        left: MixedSym::Op(o).to_string(),
                        right: g.to_string(),
                    });
                }
            };
            w.swap(i, i + 1);
            phase = &phase * &p;
            moved = true;
        }
        if !moved {
            break;
        }
    }
    let mut gpart = Vec::new();
    let mut oppart = Vec::new();
    for sym in w {
        match sym {
            MixedSym::G(g) => gpart.push(g),
            MixedSym::Op(o) => oppart.push(o),
        }
    }
    Ok((phase, gpart, oppart))
}

/// Factorized mixed element: exact combination of (Grassmann word) *
/// (operator word) pairs.
#[derive(Clone, PartialEq, Eq)]
pub struct FactorizedMixed {
    sig: AlgebraSignature,
    terms: BTreeMap<(GWord, OpWord), CycScalar>,
}

impl FactorizedMixed {
    pub fn zero(sig: AlgebraSignature) -> Self {
        FactorizedMixed { sig, terms: BTreeMap::new() }
    }

    fn accumulate(&mut self, g: GWord, op: OpWord, coeff: CycScalar) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry((g, op)).or_insert_with(CycScalar::zero);
        *entry = &*entry + &coeff;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(GWord, OpWord), &CycScalar)> {
        self.terms.iter()
    }

    /// The pure Grassmann content, if no term carries operators.
    pub fn as_grassmann(&self) -> Option<GElement> {
        if self.terms.keys().any(|(_, op)| *op != OpWord::identity()) {
            return None;
        }
        let raw: Vec<(GWord, CycScalar)> =
            self.terms.iter().map(|((g, _), c)| (g.clone(), c.clone())).collect();
        Some(GElement::from_raw_terms(self.sig, raw).expect("already canonical"))
    }

    /// The pure operator content, if no term carries Grassmann symbols.
    pub fn as_operator(&self) -> Option<OpElement> {
        if self.terms.keys().any(|(g, _)| !g.is_empty()) {
            return None;
        }
        let mut out = OpElement::zero();
        for ((_, op), c) in &self.terms {
            out = out.add(&op_normalize(&op.atoms()).scale(c));
        }
        Some(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|((g, op), c)| {
                    serde_json::json!({
                        "coeff": c.to_json(),
                        "grassmann": format_word(g),
                        "operator": op.to_string(),
                    })
                })
                .collect(),
        )
    }
}

impl fmt::Display for FactorizedMixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|((g, op), c)| {
                let mut parts = Vec::new();
                if !g.is_empty() {
                    parts.push(format_word(g));
                }
                if *op != OpWord::identity() {
                    parts.push(op.to_string());
                }
                if parts.is_empty() {
                    return if c.prints_atomic() { format!("{c}") } else { format!("({c})") };
                }
                let body = parts.join("*");
                if c == &CycScalar::one() {
                    body
                } else if c.prints_atomic() {
                    format!("{c}*{body}")
                } else {
                    format!("({c})*{body}")
                }
            })
            .collect();
        f.write_str(&rendered.join(" + "))
    }
}

impl fmt::Debug for FactorizedMixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FactorizedMixed({})", self)
    }
}

/// Expansion over basis kets with trailing Grassmann words: exact terms
/// coeff * |n> * word. This is the convention-free normal form of a mixed
/// word applied to a ket: the trailing word sits to the right of the ket.
#[derive(Clone, PartialEq, Eq)]
pub struct VacuumExpansion {
    sig: AlgebraSignature,
    terms: BTreeMap<(u8, GWord), CycScalar>,
}

impl VacuumExpansion {
    pub fn zero(sig: AlgebraSignature) -> Self {
        VacuumExpansion { sig, terms: BTreeMap::new() }
    }

    fn accumulate(&mut self, ket: u8, word: GWord, coeff: CycScalar) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry((ket, word)).or_insert_with(CycScalar::zero);
        *entry = &*entry + &coeff;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn signature(&self) -> AlgebraSignature {
        self.sig
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u8, GWord), &CycScalar)> {
        self.terms.iter()
    }

    pub fn coeff_of(&self, ket: u8, word: &[GeneratorSym]) -> CycScalar {
        self.terms
            .get(&(ket, word.to_vec()))
            .cloned()
            .unwrap_or_else(CycScalar::zero)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.sig, rhs.sig, "mixed algebra signatures");
        let mut out = self.clone();
        for ((k, w), c) in &rhs.terms {
            out.accumulate(*k, w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&-CycScalar::one()))
    }

    pub fn scale(&self, c: &CycScalar) -> Self {
        let mut out = Self::zero(self.sig);
        for ((k, w), v) in &self.terms {
            out.accumulate(*k, w.clone(), v * c);
        }
        out
    }

    /// Right-multiply every trailing word by a Grassmann element; the
    /// factor stays right of the kets, so no crossing phase is involved.
    pub fn mul_right(&self, g: &GElement) -> Result<Self, CoreError> {
        assert_eq!(self.sig, g.signature(), "mixed algebra signatures");
        let mut out = Self::zero(self.sig);
        for ((k, w), c) in &self.terms {
            for (gw, gc) in g.iter() {
                let mut joined = w.clone();
                joined.extend(gw.iter().copied());
                if let Some((phase, canonical)) = normalize_word(self.sig, &joined)? {
                    out.accumulate(*k, canonical, &(&phase * c) * gc);
                }
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|((n, w), c)| {
                    serde_json::json!({
                        "ket": n,
                        "word": format_word(w),
                        "coeff": c.to_json(),
                    })
                })
                .collect(),
        )
    }

    /// Convert to component form, moving each trailing word left of its
    /// ket at the configured crossing phase.
    pub fn to_state(&self, conv: &ConventionConfig) -> StateVec {
        let mut components =
            [GElement::zero(self.sig), GElement::zero(self.sig), GElement::zero(self.sig)];
        for ((ket, word), coeff) in &self.terms {
            let phase = conv.ket_swap_phase(ket_grade(*ket), word_grade(word));
            let term = GElement::from_raw_terms(self.sig, [(word.clone(), &phase * coeff)])
                .expect("canonical trail");
            components[*ket as usize] = components[*ket as usize].add(&term);
        }
        StateVec { sig: self.sig, components }
    }
}

impl fmt::Display for VacuumExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|((n, w), c)| {
                let body = if w.is_empty() {
                    format!("|{n}>")
                } else {
                    format!("|{n}>*{}", format_word(w))
                };
                if c == &CycScalar::one() {
                    body
                } else if c.prints_atomic() {
                    format!("{c}*{body}")
                } else {
                    format!("({c})*{body}")
                }
            })
            .collect();
        f.write_str(&rendered.join(" + "))
    }
}

impl fmt::Debug for VacuumExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VacuumExpansion({})", self)
    }
}

/// State in component form: sum_n G_n |n>, coefficients left of kets.
#[derive(Clone, PartialEq, Eq)]
pub struct StateVec {
    sig: AlgebraSignature,
    components: [GElement; 3],
}

impl StateVec {
    pub fn new(sig: AlgebraSignature, components: [GElement; 3]) -> Self {
        StateVec { sig, components }
    }

    pub fn basis(sig: AlgebraSignature, n: u8) -> Self {
        let mut components =
            [GElement::zero(sig), GElement::zero(sig), GElement::zero(sig)];
        components[n as usize] = GElement::one(sig);
        StateVec { sig, components }
    }

    pub fn signature(&self) -> AlgebraSignature {
        self.sig
    }

    pub fn component(&self, n: u8) -> &GElement {
        &self.components[n as usize]
    }

    pub fn components(&self) -> &[GElement; 3] {
        &self.components
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..3)
                .map(|n| {
                    serde_json::json!({
                        "n": n,
                        "coefficient": self.components[n].to_json(),
                    })
                })
                .collect(),
        )
    }
}

impl fmt::Display for StateVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered: Vec<String> = (0..3)
            .filter(|&n| !self.components[n].is_zero())
            .map(|n| format!("({})|{n}>", self.components[n]))
            .collect();
        if rendered.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&rendered.join(" + "))
        }
    }
}

impl fmt::Debug for StateVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StateVec({})", self)
    }
}

/// Bra in component form: sum_n <n| G_n, coefficients right of bras.
#[derive(Clone, PartialEq, Eq)]
pub struct BraVec {
    sig: AlgebraSignature,
    components: [GElement; 3],
}

impl BraVec {
    pub fn new(sig: AlgebraSignature, components: [GElement; 3]) -> Self {
        BraVec { sig, components }
    }

    pub fn signature(&self) -> AlgebraSignature {
        self.sig
    }

    pub fn component(&self, n: u8) -> &GElement {
        &self.components[n as usize]
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..3)
                .map(|n| {
                    serde_json::json!({
                        "n": n,
                        "coefficient": self.components[n].to_json(),
                    })
                })
                .collect(),
        )
    }
}

impl fmt::Display for BraVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered: Vec<String> = (0..3)
            .filter(|&n| !self.components[n].is_zero())
            .map(|n| format!("<{n}|({})", self.components[n]))
            .collect();
        if rendered.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&rendered.join(" + "))
        }
    }
}

impl fmt::Debug for BraVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BraVec({})", self)
    }
}

/// The mixed words of f(ad * xi) = 1 + ad*xi - (ad*xi)^2 over the given
/// generator index, as raw terms.
fn coherent_generator_terms(pair: usize) -> Vec<(CycScalar, Vec<MixedSym>)> {
    let unit: Vec<MixedSym> =
        vec![MixedSym::Op(OpAtom::Create), MixedSym::G(GeneratorSym::xi(pair))];
    let mut quad = unit.clone();
    quad.extend(unit.iter().copied());
    vec![
        (CycScalar::one(), Vec::new()),
        (CycScalar::one(), unit),
        (-CycScalar::one(), quad),
    ]
}

/// Coherent ket over generator `pair`, derived by rewriting the defining
/// mixed words against the vacuum and then crossing trails per `conv`.
pub fn coherent_ket_in(
    conv: &ConventionConfig,
    sig: AlgebraSignature,
    pair: usize,
) -> Result<StateVec, CoreError> {
    let e = MixedElement::from_terms(sig, coherent_generator_terms(pair));
    Ok(e.apply_to_vacuum(conv)?.to_state(conv))
}

/// Coherent ket in the single-pair relational algebra.
pub fn coherent_ket(conv: &ConventionConfig) -> StateVec {
    coherent_ket_in(conv, AlgebraSignature::relational(1), 0).expect("index 0 is in range")
}

/// Coherent bra over generator `pair`: the fixed component list
/// (1, q*xb, -sqrt_bracket2 * xb^2), transcribed rather than conjugated.
pub fn coherent_bra_in(
    _conv: &ConventionConfig,
    sig: AlgebraSignature,
    pair: usize,
) -> Result<BraVec, CoreError> {
    let xb = GeneratorSym::xb(pair);
    let c1 = GElement::from_word(sig, &[xb])?.scale(&CycScalar::q_pow(1));
    let c2 = GElement::from_word(sig, &[xb, xb])?.scale(&-CycScalar::sqrt_bracket2());
    Ok(BraVec::new(sig, [GElement::one(sig), c1, c2]))
}

pub fn coherent_bra(conv: &ConventionConfig) -> BraVec {
    coherent_bra_in(conv, AlgebraSignature::relational(1), 0).expect("index 0 is in range")
}

/// a applied to the coherent ket at the operator level, in component form.
pub fn annihilate(conv: &ConventionConfig) -> StateVec {
    let sig = AlgebraSignature::relational(1);
    let f = MixedElement::from_terms(sig, coherent_generator_terms(0));
    let a = MixedElement::from_word(sig, &[MixedSym::Op(OpAtom::Annihilate)]);
    a.mul(&f).apply_to_vacuum(conv).expect("in range").to_state(conv)
}

/// The defect a*f(ad xi)|0> - xi*f(ad xi)|0> in ket-trailing normal form.
/// Every crossing in its evaluation hits the vacuum, so the result is the
/// same for every convention table; the eigenstate property holds exactly
/// when this is zero.
pub fn eigenstate_defect(conv: &ConventionConfig) -> VacuumExpansion {
    let sig = AlgebraSignature::relational(1);
    let f = MixedElement::from_terms(sig, coherent_generator_terms(0));
    let a = MixedElement::from_word(sig, &[MixedSym::Op(OpAtom::Annihilate)]);
    let xi = MixedElement::from_word(sig, &[MixedSym::G(GeneratorSym::xi(0))]);
    let lhs = a.mul(&f).apply_to_vacuum(conv).expect("in range");
    let rhs = xi.mul(&f).apply_to_vacuum(conv).expect("in range");
    lhs.sub(&rhs)
}

/// Overlap of a bra over one generator with a ket over another: for each
/// n, the bra coefficient crosses |n> at the configured phase and then
/// multiplies the ket coefficient in the Grassmann algebra.
pub fn overlap(bra: &BraVec, ket: &StateVec, conv: &ConventionConfig) -> GElement {
    assert_eq!(bra.signature(), ket.signature(), "mixed algebra signatures");
    let sig = bra.signature();
    let mut out = GElement::zero(sig);
    for n in 0..3u8 {
        let kcomp = ket.component(n);
        if kcomp.is_zero() {
            continue;
        }
        for (bw, bc) in bra.component(n).iter() {
            let phase = conv.ket_swap_phase(ket_grade(n), word_grade(bw));
            let bterm = GElement::from_raw_terms(sig, [(bw.clone(), &phase * bc)])
                .expect("canonical bra word");
            out = out.add(&bterm.mul(kcomp));
        }
    }
    out
}

/// Weight density c0 + c1*(xb xi) + c2*(xb xi)^2 over one generator pair.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightFunction {
    pub c: [CycScalar; 3],
}

impl WeightFunction {
    pub fn new(c0: CycScalar, c1: CycScalar, c2: CycScalar) -> Self {
        WeightFunction { c: [c0, c1, c2] }
    }

    pub fn zero() -> Self {
        Self::new(CycScalar::zero(), CycScalar::zero(), CycScalar::zero())
    }

    /// The weight as an element over generator `pair`.
    pub fn element(&self, sig: AlgebraSignature, pair: usize) -> Result<GElement, CoreError> {
        let xb = GeneratorSym::xb(pair);
        let xi = GeneratorSym::xi(pair);
        let raw = vec![
            (Vec::new(), self.c[0].clone()),
            (vec![xb, xi], self.c[1].clone()),
            (vec![xb, xi, xb, xi], self.c[2].clone()),
        ];
        GElement::from_raw_terms(sig, raw)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "c0": self.c[0].to_json(),
            "c1": self.c[1].to_json(),
            "c2": self.c[2].to_json(),
        })
    }
}

impl fmt::Display for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.c[0], self.c[1], self.c[2])
    }
}

/// Operand ordering of the identity resolution.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum ResolutionForm {
    /// Weight and measure left of the ket-bra product.
    Eq20,
    /// Weight and measure between ket and bra.
    Eq22,
}

impl ResolutionForm {
    pub fn name(&self) -> &'static str {
        match self {
            ResolutionForm::Eq20 => "eq20",
            ResolutionForm::Eq22 => "eq22",
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "eq20" => Some(ResolutionForm::Eq20),
            "eq22" => Some(ResolutionForm::Eq22),
            _ => None,
        }
    }
}

/// The 3x3 matrix of the weighted ket-bra integral: entry (n, m) is the
/// double integral of the weighted product of the ket coefficient at n and
/// the bra coefficient at m, with the bra coefficient's ket-crossing phase
/// applied. A successful resolution of the identity makes this the unit
/// matrix.
pub fn identity_resolution(
    conv: &ConventionConfig,
    w: &WeightFunction,
    form: ResolutionForm,
) -> [[CycScalar; 3]; 3] {
    let sig = AlgebraSignature::relational(1);
    let ket = coherent_ket(conv);
    let bra = coherent_bra(conv);
    let welem = w.element(sig, 0).expect("index 0 is in range");
    let mut out: [[CycScalar; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| CycScalar::zero()));
    for n in 0..3usize {
        for m in 0..3usize {
            let kcomp = ket.component(n as u8);
            let mut entry = CycScalar::zero();
            for (bw, bc) in bra.component(m as u8).iter() {
                let phase = conv.ket_swap_phase(ket_grade(n as u8), word_grade(bw));
                let bterm = GElement::from_raw_terms(sig, [(bw.clone(), &phase * bc)])
                    .expect("canonical bra word");
                let integrand = match form {
                    ResolutionForm::Eq20 => welem.mul(kcomp).mul(&bterm),
                    ResolutionForm::Eq22 => kcomp.mul(&welem).mul(&bterm),
                };
                let value = double_integral(&integrand, 0, conv.measure_order());
                entry = &entry + &value.coeff_of(&[]);
            }
            out[n][m] = entry;
        }
    }
    out
}

/// Whether a 3x3 scalar matrix is the exact unit matrix.
pub fn is_unit_matrix(m: &[[CycScalar; 3]; 3]) -> bool {
    (0..3).all(|r| {
        (0..3).all(|c| {
            if r == c {
                m[r][c] == CycScalar::one()
            } else {
                m[r][c].is_zero()
            }
        })
    })
}

/// Solve for the weight making the resolution the unit matrix. The three
/// diagonal entries are linear in (c0, c1, c2); the system is solved
/// exactly, with a singular system reported as an error.
pub fn solve_weight(
    conv: &ConventionConfig,
    form: ResolutionForm,
) -> Result<WeightFunction, CoreError> {
    // Column k of the system matrix: diagonal of the resolution under the
    // unit weight in slot k.
    let mut m: [[CycScalar; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| CycScalar::zero()));
    for k in 0..3usize {
        let mut w = WeightFunction::zero();
        w.c[k] = CycScalar::one();
        let res = identity_resolution(conv, &w, form);
        for (j, row) in res.iter().enumerate() {
            m[j][k] = row[j].clone();
        }
    }
    let mut rhs = [CycScalar::one(), CycScalar::one(), CycScalar::one()];

    // Gaussian elimination with exact pivoting.
    let mut mat = m;
    for col in 0..3 {
        let Some(pivot_row) = (col..3).find(|&r| !mat[r][col].is_zero()) else {
            return Err(CoreError::SingularWeight(format!(
                "no weight coefficient reaches diagonal slot {col}"
            )));
        };
        mat.swap(col, pivot_row);
        rhs.swap(col, pivot_row);
        let inv = mat[col][col].inv().expect("pivot is nonzero");
        for c in 0..3 {
            mat[col][c] = &mat[col][c] * &inv;
        }
        rhs[col] = &rhs[col] * &inv;
        for r in 0..3 {
            if r == col || mat[r][col].is_zero() {
                continue;
            }
            let factor = mat[r][col].clone();
            for c in 0..3 {
                let delta = &factor * &mat[col][c];
                mat[r][c] = &mat[r][c] - &delta;
            }
            let delta = &factor * &rhs[col];
            rhs[r] = &rhs[r] - &delta;
        }
    }
    let [c0, c1, c2] = rhs;
    Ok(WeightFunction::new(c0, c1, c2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xi(i: usize) -> GeneratorSym {
        GeneratorSym::xi(i)
    }

    fn xb(i: usize) -> GeneratorSym {
        GeneratorSym::xb(i)
    }

    fn q(k: i64) -> CycScalar {
        CycScalar::q_pow(k)
    }

    fn sqrt2() -> CycScalar {
        CycScalar::sqrt_bracket2()
    }

    const R1: AlgebraSignature = AlgebraSignature { n_pairs: 1, mode: crate::grassmann::RuleMode::Relational };
    const R2: AlgebraSignature = AlgebraSignature { n_pairs: 2, mode: crate::grassmann::RuleMode::Relational };

    #[test]
    fn ket_grades() {
        assert_eq!(ket_grade(0), 0);
        assert_eq!(ket_grade(1), 2);
        assert_eq!(ket_grade(2), 1);
    }

    #[test]
    fn builtin_tables() {
        let p = ConventionConfig::paper();
        for gk in 1..3 {
            for gx in 1..3 {
                assert_eq!(p.ket_swap_phase(gk, gx), q(2));
            }
        }
        let u = ConventionConfig::uniform_eq5();
        assert_eq!(u.ket_swap_phase(2, 1), q(2));
        assert_eq!(u.ket_swap_phase(1, 2), q(1));
        assert_eq!(u.ket_swap_phase(1, 1), CycScalar::one());
        assert_eq!(u.ket_swap_phase(2, 2), CycScalar::one());
        for conv in ConventionConfig::builtins() {
            for g in 0..3 {
                assert_eq!(conv.ket_swap_phase(0, g), CycScalar::one());
                assert_eq!(conv.ket_swap_phase(g, 0), CycScalar::one());
            }
        }
        assert!(ConventionConfig::by_name("paper").is_some());
        assert!(ConventionConfig::by_name("uniform-eq5").is_some());
        assert!(ConventionConfig::by_name("other").is_none());
    }

    #[test]
    fn vacuum_expansion_of_the_generating_words() {
        // The ket-trailing form of f(ad xi)|0> is the same for every
        // convention: 1*|0> + |1>*xi - q*sqrt2*|2>*xi^2.
        for conv in ConventionConfig::builtins() {
            let f = MixedElement::from_terms(R1, coherent_generator_terms(0));
            let v = f.apply_to_vacuum(&conv).unwrap();
            assert_eq!(v.coeff_of(0, &[]), CycScalar::one());
            assert_eq!(v.coeff_of(1, &[xi(0)]), CycScalar::one());
            assert_eq!(v.coeff_of(2, &[xi(0), xi(0)]), -(&q(1) * &sqrt2()));
            assert_eq!(v.iter().count(), 3);
        }
    }

    #[test]
    fn coherent_ket_components() {
        let p = coherent_ket(&ConventionConfig::paper());
        assert_eq!(p.component(0), &GElement::one(R1));
        assert_eq!(
            p.component(1),
            &GElement::from_word(R1, &[xi(0)]).unwrap().scale(&q(2))
        );
        assert_eq!(
            p.component(2),
            &GElement::from_word(R1, &[xi(0), xi(0)]).unwrap().scale(&-sqrt2())
        );

        let u = coherent_ket(&ConventionConfig::uniform_eq5());
        assert_eq!(u.component(0), p.component(0));
        assert_eq!(u.component(1), p.component(1));
        assert_eq!(
            u.component(2),
            &GElement::from_word(R1, &[xi(0), xi(0)])
                .unwrap()
                .scale(&-(&q(2) * &sqrt2()))
        );
    }

    #[test]
    fn coherent_bra_components() {
        let b = coherent_bra(&ConventionConfig::paper());
        assert_eq!(b.component(0), &GElement::one(R1));
        assert_eq!(
            b.component(1),
            &GElement::from_word(R1, &[xb(0)]).unwrap().scale(&q(1))
        );
        assert_eq!(
            b.component(2),
            &GElement::from_word(R1, &[xb(0), xb(0)]).unwrap().scale(&-sqrt2())
        );
    }

    #[test]
    fn eigenstate_defect_vanishes_for_builtins() {
        for conv in ConventionConfig::builtins() {
            assert!(eigenstate_defect(&conv).is_zero(), "{}", conv.name());
        }
    }

    #[test]
    fn eigenstate_defect_vanishes_for_arbitrary_tables() {
        for e11 in 0..3u8 {
            for e12 in 0..3u8 {
                for e21 in 0..3u8 {
                    for e22 in 0..3u8 {
                        let conv = ConventionConfig::with_exponents(
                            "custom",
                            [[e11, e12], [e21, e22]],
                        );
                        assert!(
                            eigenstate_defect(&conv).is_zero(),
                            "table {:?}",
                            [[e11, e12], [e21, e22]]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn annihilate_matches_the_generator_multiplied_words() {
        for conv in ConventionConfig::builtins() {
            let lhs = annihilate(&conv);
            let f = MixedElement::from_terms(R1, coherent_generator_terms(0));
            let xi0 = MixedElement::from_word(R1, &[MixedSym::G(xi(0))]);
            let rhs = xi0.mul(&f).apply_to_vacuum(&conv).unwrap().to_state(&conv);
            assert_eq!(lhs, rhs);
            // Vacuum component of a|ket> is exactly xi.
            assert_eq!(lhs.component(0), &GElement::from_word(R1, &[xi(0)]).unwrap());
        }
    }

    #[test]
    fn stuck_symbols_use_the_convention_table() {
        // In ad*xi(0) the Grassmann symbol slides right legally, so the
        // result is convention-free; in Nop*xi(0) likewise. A symbol stuck
        // behind the annihilator must cross the evolving ket instead.
        let word = vec![
            MixedSym::G(xi(0)),
            MixedSym::Op(OpAtom::Annihilate),
            MixedSym::Op(OpAtom::Create),
        ];
        let e = MixedElement::from_word(R1, &word);
        for conv in [
            ConventionConfig::paper(),
            ConventionConfig::uniform_eq5(),
            ConventionConfig::with_exponents("custom", [[1, 0], [2, 1]]),
        ] {
            let v = e.apply_to_vacuum(&conv).unwrap();
            // a ad|0> = |0>, and xi then crosses the vacuum freely.
            assert_eq!(v.coeff_of(0, &[xi(0)]), CycScalar::one());
        }
    }

    #[test]
    fn factorize_tracks_cross_phases() {
        // ad*xi = q^2 xi*ad.
        let e = MixedElement::from_word(
            R1,
            &[MixedSym::Op(OpAtom::Create), MixedSym::G(xi(0))],
        );
        let f = e.factorize().unwrap();
        let terms: Vec<_> = f.iter().collect();
        assert_eq!(terms.len(), 1);
        let ((g, op), c) = terms[0];
        assert_eq!(g.as_slice(), &[xi(0)]);
        assert_eq!(op.ad_pow, 1);
        assert_eq!(c, &q(2));
    }

    #[test]
    fn forbidden_pairs_error_in_factorization() {
        let e = MixedElement::from_word(
            R1,
            &[MixedSym::Op(OpAtom::Annihilate), MixedSym::G(xi(0))],
        );
        assert!(matches!(
            e.factorize(),
            Err(CoreError::ForbiddenTransposition { .. })
        ));
        let e = MixedElement::from_word(
            R1,
            &[MixedSym::Op(OpAtom::Create), MixedSym::G(xb(0))],
        );
        assert!(matches!(
            e.factorize(),
            Err(CoreError::ForbiddenTransposition { .. })
        ));
        // The mirrored orders are already factorized and do not error.
        let e = MixedElement::from_word(
            R1,
            &[MixedSym::G(xi(0)), MixedSym::Op(OpAtom::Annihilate)],
        );
        assert!(e.factorize().is_ok());
    }

    #[test]
    fn factorize_reduces_pure_operator_relations() {
        // a*ad - q*ad*a - qN(2) = 0.
        let sig = R1;
        let a = MixedElement::from_word(sig, &[MixedSym::Op(OpAtom::Annihilate)]);
        let ad = MixedElement::from_word(sig, &[MixedSym::Op(OpAtom::Create)]);
        let qn = MixedElement::from_word(sig, &[MixedSym::Op(OpAtom::QNumber(2))]);
        let e = a.mul(&ad).sub(&ad.mul(&a).scale(&q(1))).sub(&qn);
        assert!(e.factorize().unwrap().is_zero());
    }

    #[test]
    fn overlap_reproduces_the_flat_convention_series() {
        // Bra over generator 0, ket over generator 1, N = 2.
        let conv = ConventionConfig::paper();
        let bra = coherent_bra_in(&conv, R2, 0).unwrap();
        let ket = coherent_ket_in(&conv, R2, 1).unwrap();
        let g = overlap(&bra, &ket, &conv);
        assert_eq!(g.coeff_of(&[]), CycScalar::one());
        assert_eq!(g.coeff_of(&[xi(1), xb(0)]), q(1));
        assert_eq!(g.coeff_of(&[xi(1), xi(1), xb(0), xb(0)]), -q(1));
        assert_eq!(g.len(), 3);

        // The same series written against raw words: linear term q^2 xb0*xi1,
        // quadratic term -q (xb0*xi1)^2.
        let target = GElement::from_raw_terms(
            R2,
            vec![
                (vec![], CycScalar::one()),
                (vec![xb(0), xi(1)], q(2)),
                (vec![xb(0), xi(1), xb(0), xi(1)], -q(1)),
            ],
        )
        .unwrap();
        assert_eq!(g, target);
    }

    #[test]
    fn overlap_linear_term_differs_under_the_graded_convention() {
        let conv = ConventionConfig::uniform_eq5();
        let bra = coherent_bra_in(&conv, R2, 0).unwrap();
        let ket = coherent_ket_in(&conv, R2, 1).unwrap();
        let g = overlap(&bra, &ket, &conv);
        // On the canonical word xi1*xb0: the flat convention's series has
        // coefficient q, this convention produces q^2.
        assert_eq!(g.coeff_of(&[xi(1), xb(0)]), q(2));
        let flat_series_linear =
            GElement::from_raw_terms(R2, vec![(vec![xb(0), xi(1)], q(2))]).unwrap();
        assert_eq!(flat_series_linear.coeff_of(&[xi(1), xb(0)]), q(1));
        assert_ne!(
            g.coeff_of(&[xi(1), xb(0)]),
            flat_series_linear.coeff_of(&[xi(1), xb(0)])
        );
        // The constant and quadratic terms agree with the flat convention's
        // series.
        assert_eq!(g.coeff_of(&[]), CycScalar::one());
        assert_eq!(g.coeff_of(&[xi(1), xi(1), xb(0), xb(0)]), -q(1));
    }

    #[test]
    fn same_variable_overlap_constant_term_is_one() {
        for conv in ConventionConfig::builtins() {
            let bra = coherent_bra(&conv);
            let ket = coherent_ket(&conv);
            let g = overlap(&bra, &ket, &conv);
            assert_eq!(g.coeff_of(&[]), CycScalar::one());
        }
    }

    #[test]
    fn weight_element_normal_form() {
        let w = WeightFunction::new(-q(1), CycScalar::one(), CycScalar::one());
        let e = w.element(R1, 0).unwrap();
        assert_eq!(e.coeff_of(&[]), -q(1));
        assert_eq!(e.coeff_of(&[xi(0), xb(0)]), q(2));
        assert_eq!(e.coeff_of(&[xi(0), xi(0), xb(0), xb(0)]), CycScalar::one());
    }

    #[test]
    fn resolution_with_the_flat_convention_weight_is_the_identity() {
        let conv = ConventionConfig::paper();
        let w = WeightFunction::new(-q(1), CycScalar::one(), CycScalar::one());
        let m = identity_resolution(&conv, &w, ResolutionForm::Eq20);
        assert!(is_unit_matrix(&m), "{m:?}");
    }

    #[test]
    fn resolution_entries_follow_the_convention_and_form() {
        // Same weight, graded convention: the middle diagonal entry shifts
        // by one power of q.
        let w = WeightFunction::new(-q(1), CycScalar::one(), CycScalar::one());
        let m = identity_resolution(&ConventionConfig::uniform_eq5(), &w, ResolutionForm::Eq20);
        assert_eq!(m[0][0], CycScalar::one());
        assert_eq!(m[1][1], q(1));
        assert_eq!(m[2][2], CycScalar::one());

        // Same weight, flat convention, sandwich order: again one power off.
        let m = identity_resolution(&ConventionConfig::paper(), &w, ResolutionForm::Eq22);
        assert_eq!(m[0][0], CycScalar::one());
        assert_eq!(m[1][1], q(1));
        assert_eq!(m[2][2], CycScalar::one());
    }

    #[test]
    fn off_diagonals_vanish_for_all_conventions_and_weights() {
        let weights = [
            WeightFunction::new(-q(1), CycScalar::one(), CycScalar::one()),
            WeightFunction::new(CycScalar::i_unit(), q(2), -CycScalar::one()),
            WeightFunction::zero(),
        ];
        let conventions = [
            ConventionConfig::paper(),
            ConventionConfig::uniform_eq5(),
            ConventionConfig::with_exponents("custom", [[0, 1], [2, 2]]),
        ];
        for conv in &conventions {
            for w in &weights {
                for form in [ResolutionForm::Eq20, ResolutionForm::Eq22] {
                    let m = identity_resolution(conv, w, form);
                    for n in 0..3 {
                        for mm in 0..3 {
                            if n != mm {
                                assert!(m[n][mm].is_zero());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn zero_weight_gives_the_zero_matrix() {
        let m = identity_resolution(
            &ConventionConfig::paper(),
            &WeightFunction::zero(),
            ResolutionForm::Eq20,
        );
        for row in &m {
            for entry in row {
                assert!(entry.is_zero());
            }
        }
    }

    #[test]
    fn solved_weights_match_the_frozen_values() {
        let paper = ConventionConfig::paper();
        let w = solve_weight(&paper, ResolutionForm::Eq20).unwrap();
        assert_eq!(w, WeightFunction::new(-q(1), CycScalar::one(), CycScalar::one()));

        let w22 = solve_weight(&paper, ResolutionForm::Eq22).unwrap();
        assert_eq!(w22, WeightFunction::new(-q(1), q(2), CycScalar::one()));

        let uniform = ConventionConfig::uniform_eq5();
        let wu = solve_weight(&uniform, ResolutionForm::Eq20).unwrap();
        assert_eq!(wu, WeightFunction::new(-q(1), q(2), CycScalar::one()));
    }

    #[test]
    fn solving_then_resolving_returns_the_identity() {
        for conv in ConventionConfig::builtins() {
            for form in [ResolutionForm::Eq20, ResolutionForm::Eq22] {
                let w = solve_weight(&conv, form).unwrap();
                let m = identity_resolution(&conv, &w, form);
                assert!(is_unit_matrix(&m), "{} {:?}", conv.name(), form);
            }
        }
    }

    #[test]
    fn constant_terms_compose_to_one() {
        // Vacuum normalization: the generating function's constant term,
        // the overlap's constant term, and the (0,0) resolution entry under
        // a solved weight multiply to exactly 1.
        for conv in ConventionConfig::builtins() {
            let f_const = coherent_ket(&conv).component(0).coeff_of(&[]);
            let g_const = overlap(&coherent_bra(&conv), &coherent_ket(&conv), &conv).coeff_of(&[]);
            let w = solve_weight(&conv, ResolutionForm::Eq20).unwrap();
            let r00 = identity_resolution(&conv, &w, ResolutionForm::Eq20)[0][0].clone();
            assert_eq!(&(&f_const * &g_const) * &r00, CycScalar::one());
        }
    }

    #[test]
    fn display_forms() {
        let ket = coherent_ket(&ConventionConfig::paper());
        let s = ket.to_string();
        assert!(s.contains("|0>"), "{s}");
        assert!(s.contains("|2>"), "{s}");
        let v = MixedElement::from_terms(R1, coherent_generator_terms(0))
            .apply_to_vacuum(&ConventionConfig::paper())
            .unwrap();
        assert!(v.to_string().contains("|1>*xi(0)"), "{v}");
    }
}
