//! Z3-graded Grassmann algebra on N generator pairs.
//!
//! Generators come in two families: unbarred `xi(a)` of grade 1 and barred
//! `xb(a)` of grade 2, with the grade of a word read mod 3. The defining
//! relations are ternary for same-kind symbols and binary across kinds:
//!
//! - cyclic:   xi_a xi_b xi_c = q xi_b xi_c xi_a (barred with q^2 in place
//!   of q), so a length-3 same-kind block equals any cyclic rotation of
//!   itself up to a power of q;
//! - nilpotent: xi_a^3 = 0, and any same-kind block of length >= 4 vanishes;
//! - cross-kind: xi_a xb_b = q xb_b xi_a, so barred symbols move right of
//!   unbarred ones at a cost of q^2 per adjacent transposition.
//!
//! Binary same-kind products are independent: `xi(0)*xi(1)` and
//! `xi(1)*xi(0)` are distinct basis words and no relation connects them.
//!
//! Canonical form: all unbarred symbols left of all barred ones, each
//! same-kind block rotated (if of length 3) to its lexicographically least
//! cyclic representative, phases accumulated as exact powers of q. The
//! [`RuleMode`] decides what survives beyond that:
//!
//! - [`RuleMode::Constrained`] keeps only the shapes
//!   (#unbarred, #barred) in {(0,0),(1,0),(0,1),(2,0),(0,2),(1,1),(3,0),(0,3)},
//!   giving dimension (3 + 4N + 9N^2 + 2N^3)/3 (6, 21, 50 for N = 1, 2, 3);
//! - [`RuleMode::Relational`] keeps every word the relations themselves do
//!   not kill (9 words for N = 1: xi^k xb^j with k, j <= 2).

use std::collections::BTreeMap;
use std::fmt;

use crate::error::CoreError;
use crate::scalars::CycScalar;

/// Which family a generator belongs to. `Unbarred` has grade 1, `Barred` grade 2.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum GenKind {
    Unbarred,
    Barred,
}

/// One generator symbol.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GeneratorSym {
    pub kind: GenKind,
    pub index: usize,
}

impl GeneratorSym {
    pub fn xi(index: usize) -> Self {
        GeneratorSym { kind: GenKind::Unbarred, index }
    }

    pub fn xb(index: usize) -> Self {
        GeneratorSym { kind: GenKind::Barred, index }
    }

    pub fn grade(&self) -> u8 {
        match self.kind {
            GenKind::Unbarred => 1,
            GenKind::Barred => 2,
        }
    }
}

impl fmt::Display for GeneratorSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GenKind::Unbarred => write!(f, "xi({})", self.index),
            GenKind::Barred => write!(f, "xb({})", self.index),
        }
    }
}

/// Ordered product of generator symbols; canonical words are map keys.
pub type GWord = Vec<GeneratorSym>;

/// Grade of a word, mod 3.
pub fn word_grade(word: &[GeneratorSym]) -> u8 {
    (word.iter().map(|g| g.grade() as u32).sum::<u32>() % 3) as u8
}

/// (#unbarred, #barred) of a word.
pub fn word_shape(word: &[GeneratorSym]) -> (usize, usize) {
    let u = word.iter().filter(|g| g.kind == GenKind::Unbarred).count();
    (u, word.len() - u)
}

/// Rule mode: with or without the shape survival filter.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum RuleMode {
    Constrained,
    Relational,
}

/// Shapes that survive in constrained mode.
const SURVIVING_SHAPES: [(usize, usize); 8] =
    [(0, 0), (1, 0), (0, 1), (2, 0), (0, 2), (1, 1), (3, 0), (0, 3)];

/// Number of generator pairs plus the rule mode.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct AlgebraSignature {
    pub n_pairs: usize,
    pub mode: RuleMode,
}

impl AlgebraSignature {
    pub fn constrained(n_pairs: usize) -> Self {
        AlgebraSignature { n_pairs, mode: RuleMode::Constrained }
    }

    pub fn relational(n_pairs: usize) -> Self {
        AlgebraSignature { n_pairs, mode: RuleMode::Relational }
    }

    /// Constrained dimension (3 + 4N + 9N^2 + 2N^3)/3.
    pub fn constrained_dimension(&self) -> usize {
        let n = self.n_pairs;
        (3 + 4 * n + 9 * n * n + 2 * n * n * n) / 3
    }
}

/// Rotate a length-3 block to its lex-least cyclic representative.
/// Returns (rotation count 0..=2, rotated block).
fn lex_least_rotation(block: &[GeneratorSym]) -> (usize, Vec<GeneratorSym>) {
    debug_assert_eq!(block.len(), 3);
    let mut best = (0usize, block.to_vec());
    for k in 1..3 {
        let mut rot = block.to_vec();
        rot.rotate_left(k);
        if rot < best.1 {
            best = (k, rot);
        }
    }
    best
}

/// Canonicalize one same-kind block. Returns None when the block vanishes,
/// otherwise the q-phase exponent picked up and the canonical block.
fn canonicalize_block(block: &[GeneratorSym], kind: GenKind) -> Option<(i64, Vec<GeneratorSym>)> {
    match block.len() {
        0..=2 => Some((0, block.to_vec())),
        3 => {
            if block[0] == block[1] && block[1] == block[2] {
                return None;
            }
            let (k, rot) = lex_least_rotation(block);
            // One left rotation costs q for unbarred blocks, q^2 for barred.
            let per_step = match kind {
                GenKind::Unbarred => 1,
                GenKind::Barred => 2,
            };
            Some((per_step * k as i64, rot))
        }
        _ => None,
    }
}

/// Reduce a raw word to (phase, canonical word), or `None` when it vanishes.
///
/// The phase is always an exact power of q; relations never change the
/// rational magnitude of a coefficient.
pub fn normalize_word(
    sig: AlgebraSignature,
    word: &[GeneratorSym],
) -> Result<Option<(CycScalar, GWord)>, CoreError> {
    for g in word {
        if g.index >= sig.n_pairs {
            return Err(CoreError::IndexOutOfRange { index: g.index, n: sig.n_pairs });
        }
    }

    // Segregate: every (barred, unbarred) inversion costs one q^2 transposition.
    let mut inversions = 0i64;
    let mut seen_barred = 0i64;
    let mut unbarred = Vec::new();
    let mut barred = Vec::new();
    for g in word {
        match g.kind {
            GenKind::Unbarred => {
                inversions += seen_barred;
                unbarred.push(*g);
            }
            GenKind::Barred => {
                seen_barred += 1;
                barred.push(*g);
            }
        }
    }

    let Some((pu, cu)) = canonicalize_block(&unbarred, GenKind::Unbarred) else {
        return Ok(None);
    };
    let Some((pb, cb)) = canonicalize_block(&barred, GenKind::Barred) else {
        return Ok(None);
    };

    if sig.mode == RuleMode::Constrained
        && !SURVIVING_SHAPES.contains(&(cu.len(), cb.len()))
    {
        return Ok(None);
    }

    let mut canonical = cu;
    canonical.extend(cb);
    Ok(Some((CycScalar::q_pow(2 * inversions + pu + pb), canonical)))
}

/// Exact linear combination of canonical words.
#[derive(Clone, PartialEq, Eq)]
pub struct GElement {
    sig: AlgebraSignature,
    terms: BTreeMap<GWord, CycScalar>,
}

impl GElement {
    pub fn zero(sig: AlgebraSignature) -> Self {
        GElement { sig, terms: BTreeMap::new() }
    }

    pub fn one(sig: AlgebraSignature) -> Self {
        let mut e = Self::zero(sig);
        e.accumulate(Vec::new(), CycScalar::one());
        e
    }

    pub fn scalar(sig: AlgebraSignature, c: CycScalar) -> Self {
        let mut e = Self::zero(sig);
        e.accumulate(Vec::new(), c);
        e
    }

    pub fn generator(sig: AlgebraSignature, g: GeneratorSym) -> Result<Self, CoreError> {
        Self::from_word(sig, &[g])
    }

    /// Normalize a raw word into an element.
    pub fn from_word(sig: AlgebraSignature, word: &[GeneratorSym]) -> Result<Self, CoreError> {
        let mut e = Self::zero(sig);
        if let Some((phase, canonical)) = normalize_word(sig, word)? {
            e.accumulate(canonical, phase);
        }
        Ok(e)
    }

    /// Normalize a raw linear combination.
    pub fn from_raw_terms<I>(sig: AlgebraSignature, raw: I) -> Result<Self, CoreError>
    where
        I: IntoIterator<Item = (GWord, CycScalar)>,
    {
        let mut e = Self::zero(sig);
        for (word, coeff) in raw {
            if let Some((phase, canonical)) = normalize_word(sig, &word)? {
                e.accumulate(canonical, &phase * &coeff);
            }
        }
        Ok(e)
    }

    pub fn signature(&self) -> AlgebraSignature {
        self.sig
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GWord, &CycScalar)> {
        self.terms.iter()
    }

    pub fn coeff_of(&self, word: &[GeneratorSym]) -> CycScalar {
        self.terms.get(word).cloned().unwrap_or_else(CycScalar::zero)
    }

    /// Grade if the element is homogeneous (zero counts as any grade).
    pub fn homogeneous_grade(&self) -> Option<u8> {
        let mut grades = self.terms.keys().map(|w| word_grade(w));
        let first = grades.next()?;
        grades.all(|g| g == first).then_some(first)
    }

    fn accumulate(&mut self, word: GWord, coeff: CycScalar) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(word);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = &*o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn assert_same_sig(&self, rhs: &GElement) {
        assert_eq!(self.sig, rhs.sig, "mixed algebra signatures");
    }

    pub fn scale(&self, c: &CycScalar) -> Self {
        let mut e = Self::zero(self.sig);
        for (w, k) in &self.terms {
            e.accumulate(w.clone(), k * c);
        }
        e
    }

    pub fn add(&self, rhs: &GElement) -> Self {
        self.assert_same_sig(rhs);
        let mut e = self.clone();
        for (w, k) in &rhs.terms {
            e.accumulate(w.clone(), k.clone());
        }
        e
    }

    pub fn sub(&self, rhs: &GElement) -> Self {
        self.add(&rhs.scale(&-CycScalar::one()))
    }

    pub fn mul(&self, rhs: &GElement) -> Self {
        self.assert_same_sig(rhs);
        let mut e = Self::zero(self.sig);
        for (wl, cl) in &self.terms {
            for (wr, cr) in &rhs.terms {
                let mut raw = wl.clone();
                raw.extend(wr.iter().copied());
                if let Ok(Some((phase, canonical))) = normalize_word(self.sig, &raw) {
                    e.accumulate(canonical, &(&phase * cl) * cr);
                }
            }
        }
        e
    }

    /// JSON rendering: list of {coeff, word} objects in canonical order.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(w, c)| {
                    serde_json::json!({
                        "coeff": c.to_json(),
                        "word": w.iter().map(|g| {
                            serde_json::json!({
                                "kind": match g.kind {
                                    GenKind::Unbarred => "xi",
                                    GenKind::Barred => "xb",
                                },
                                "index": g.index,
                            })
                        }).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        )
    }
}

impl std::ops::Mul for &GElement {
    type Output = GElement;
    fn mul(self, rhs: &GElement) -> GElement {
        GElement::mul(self, rhs)
    }
}

impl std::ops::Add for &GElement {
    type Output = GElement;
    fn add(self, rhs: &GElement) -> GElement {
        GElement::add(self, rhs)
    }
}

impl std::ops::Sub for &GElement {
    type Output = GElement;
    fn sub(self, rhs: &GElement) -> GElement {
        GElement::sub(self, rhs)
    }
}

/// Render a word with adjacent repeats grouped into powers.
pub fn format_word(word: &[GeneratorSym]) -> String {
    if word.is_empty() {
        return "1".to_string();
    }
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < word.len() {
        let mut j = i + 1;
        while j < word.len() && word[j] == word[i] {
            j += 1;
        }
        if j - i == 1 {
            parts.push(word[i].to_string());
        } else {
            parts.push(format!("{}^{}", word[i], j - i));
        }
        i = j;
    }
    parts.join("*")
}

impl fmt::Display for GElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                if w.is_empty() {
                    if c.prints_atomic() {
                        format!("{c}")
                    } else {
                        format!("({c})")
                    }
                } else if c == &CycScalar::one() {
                    format_word(w)
                } else if c.prints_atomic() {
                    format!("{}*{}", c, format_word(w))
                } else {
                    format!("({})*{}", c, format_word(w))
                }
            })
            .collect();
        f.write_str(&rendered.join(" + "))
    }
}

impl fmt::Debug for GElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GElement({})", self)
    }
}

/// Enumerate the canonical basis in word order. Guarded at N <= 6.
pub fn enumerate_basis(sig: AlgebraSignature) -> Result<Vec<GWord>, CoreError> {
    const MAX_PAIRS: usize = 6;
    if sig.n_pairs > MAX_PAIRS {
        return Err(CoreError::TooManyGenerators { n: sig.n_pairs, max: MAX_PAIRS });
    }
    let blocks = |kind: GenKind| -> Vec<Vec<GeneratorSym>> {
        let gen = |i: usize| GeneratorSym { kind, index: i };
        let n = sig.n_pairs;
        let mut out: Vec<Vec<GeneratorSym>> = vec![Vec::new()];
        for i in 0..n {
            out.push(vec![gen(i)]);
        }
        for i in 0..n {
            for j in 0..n {
                out.push(vec![gen(i), gen(j)]);
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let block = vec![gen(i), gen(j), gen(k)];
                    if i == j && j == k {
                        continue;
                    }
                    let (rot, least) = lex_least_rotation(&block);
                    if rot == 0 && least == block {
                        out.push(block);
                    }
                }
            }
        }
        out
    };
    let mut basis = Vec::new();
    for u in blocks(GenKind::Unbarred) {
        for b in blocks(GenKind::Barred) {
            if sig.mode == RuleMode::Constrained
                && !SURVIVING_SHAPES.contains(&(u.len(), b.len()))
            {
                continue;
            }
            let mut word = u.clone();
            word.extend(b.iter().copied());
            basis.push(word);
        }
    }
    basis.sort();
    Ok(basis)
}
