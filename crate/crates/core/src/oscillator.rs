//! The nilpotent oscillator algebra and its three-dimensional Fock
//! representation.
//!
//! Generators: a creation operator `ad`, an annihilation operator `a`, a
//! number operator `N`, and the group-like factors `qN(s)` standing for
//! q^(sN). Defining relations:
//!
//! - a ad - q ad a = q^(-N) = q^(2N)
//! - [N, ad] = ad and [N, a] = -a
//! - ad^3 = a^3 = 0
//!
//! Words are reduced to the normal order ad^p qN(s) N^k a^r with p, r <= 2
//! and s taken mod 3. Conjugating a ladder operator by q^(sN) scales it:
//! qN(s) ad = q^s ad qN(s) and a qN(s) = q^s qN(s) a.
//!
//! The Fock space is three-dimensional with basis |0>, |1>, |2>:
//! ad|0> = |1>, ad|1> = i|2>, a|1> = |0>, a|2> = i|1>, N|n> = n|n>.
//! With these coefficients ad a acts as the q-bracket of N, so its
//! spectrum is [0], [1], [2] = 0, 1, -1.

use std::collections::BTreeMap;
use std::fmt;

use crate::scalars::CycScalar;

/// Primitive operator symbols.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum OpAtom {
    Create,
    Annihilate,
    Number,
    /// q^(sN); the exponent is kept mod 3.
    QNumber(u8),
}

/// Normal-ordered monomial ad^p qN(s) N^k a^r.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct OpWord {
    pub ad_pow: u8,
    pub qn_exp: u8,
    pub n_pow: u32,
    pub a_pow: u8,
}

impl OpWord {
    pub fn identity() -> Self {
        OpWord { ad_pow: 0, qn_exp: 0, n_pow: 0, a_pow: 0 }
    }

    pub fn atoms(&self) -> Vec<OpAtom> {
        let mut atoms = Vec::new();
        for _ in 0..self.ad_pow {
            atoms.push(OpAtom::Create);
        }
        if self.qn_exp % 3 != 0 {
            atoms.push(OpAtom::QNumber(self.qn_exp % 3));
        }
        for _ in 0..self.n_pow {
            atoms.push(OpAtom::Number);
        }
        for _ in 0..self.a_pow {
            atoms.push(OpAtom::Annihilate);
        }
        atoms
    }
}

impl fmt::Display for OpWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.ad_pow {
            0 => {}
            1 => parts.push("ad".to_string()),
            p => parts.push(format!("ad^{p}")),
        }
        if self.qn_exp % 3 != 0 {
            parts.push(format!("qN({})", self.qn_exp % 3));
        }
        match self.n_pow {
            0 => {}
            1 => parts.push("N".to_string()),
            k => parts.push(format!("N^{k}")),
        }
        match self.a_pow {
            0 => {}
            1 => parts.push("a".to_string()),
            r => parts.push(format!("a^{r}")),
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// Exact linear combination of normal-ordered monomials.
#[derive(Clone, PartialEq, Eq)]
pub struct OpElement {
    terms: BTreeMap<OpWord, CycScalar>,
}

impl OpElement {
    pub fn zero() -> Self {
        OpElement { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_word(OpWord::identity(), CycScalar::one())
    }

    pub fn atom(atom: OpAtom) -> Self {
        op_normalize(&[atom])
    }

    fn from_word(word: OpWord, coeff: CycScalar) -> Self {
        let mut e = Self::zero();
        e.accumulate(word, coeff);
        e
    }

    fn accumulate(&mut self, word: OpWord, coeff: CycScalar) {
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

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&OpWord, &CycScalar)> {
        self.terms.iter()
    }

    pub fn coeff_of(&self, word: OpWord) -> CycScalar {
        self.terms.get(&word).cloned().unwrap_or_else(CycScalar::zero)
    }

    pub fn scale(&self, c: &CycScalar) -> Self {
        let mut e = Self::zero();
        for (w, k) in &self.terms {
            e.accumulate(*w, k * c);
        }
        e
    }

    pub fn add(&self, rhs: &OpElement) -> Self {
        let mut e = self.clone();
        for (w, k) in &rhs.terms {
            e.accumulate(*w, k.clone());
        }
        e
    }

    pub fn sub(&self, rhs: &OpElement) -> Self {
        self.add(&rhs.scale(&-CycScalar::one()))
    }

    pub fn mul(&self, rhs: &OpElement) -> Self {
        let mut e = Self::zero();
        for (wl, cl) in &self.terms {
            for (wr, cr) in &rhs.terms {
                let mut atoms = wl.atoms();
                atoms.extend(wr.atoms());
                let prod = op_normalize(&atoms);
                for (w, c) in prod.terms {
                    e.accumulate(w, &(&c * cl) * cr);
                }
            }
        }
        e
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(w, c)| {
                    serde_json::json!({
                        "coeff": c.to_json(),
                        "ad_pow": w.ad_pow,
                        "qn_exp": w.qn_exp,
                        "n_pow": w.n_pow,
                        "a_pow": w.a_pow,
                    })
                })
                .collect(),
        )
    }
}

impl std::ops::Mul for &OpElement {
    type Output = OpElement;
    fn mul(self, rhs: &OpElement) -> OpElement {
        OpElement::mul(self, rhs)
    }
}

impl std::ops::Add for &OpElement {
    type Output = OpElement;
    fn add(self, rhs: &OpElement) -> OpElement {
        OpElement::add(self, rhs)
    }
}

impl std::ops::Sub for &OpElement {
    type Output = OpElement;
    fn sub(self, rhs: &OpElement) -> OpElement {
        OpElement::sub(self, rhs)
    }
}

impl fmt::Display for OpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                if *w == OpWord::identity() {
                    if c.prints_atomic() {
                        format!("{c}")
                    } else {
                        format!("({c})")
                    }
                } else if c == &CycScalar::one() {
                    w.to_string()
                } else if c.prints_atomic() {
                    format!("{c}*{w}")
                } else {
                    format!("({c})*{w}")
                }
            })
            .collect();
        f.write_str(&rendered.join(" + "))
    }
}

impl fmt::Debug for OpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OpElement({})", self)
    }
}

/// Rank used to detect out-of-order adjacent atoms: ad < qN < N < a.
fn rank(atom: OpAtom) -> u8 {
    match atom {
        OpAtom::Create => 0,
        OpAtom::QNumber(_) => 1,
        OpAtom::Number => 2,
        OpAtom::Annihilate => 3,
    }
}

/// Reduce an arbitrary atom word to normal order.
pub fn op_normalize(atoms: &[OpAtom]) -> OpElement {
    let mut result = OpElement::zero();
    let mut work: Vec<(CycScalar, Vec<OpAtom>)> = vec![(CycScalar::one(), atoms.to_vec())];

    'outer: while let Some((coeff, word)) = work.pop() {
        for i in 0..word.len().saturating_sub(1) {
            let (l, r) = (word[i], word[i + 1]);
            if rank(l) <= rank(r) {
                continue;
            }
            match (l, r) {
                (OpAtom::Annihilate, OpAtom::Create) => {
                    // a ad = q ad a + q^(2N)
                    let mut swapped = word.clone();
                    swapped.swap(i, i + 1);
                    work.push((&coeff * &CycScalar::q_pow(1), swapped));
                    let mut contracted: Vec<OpAtom> = word[..i].to_vec();
                    contracted.push(OpAtom::QNumber(2));
                    contracted.extend_from_slice(&word[i + 2..]);
                    work.push((coeff, contracted));
                }
                (OpAtom::Number, OpAtom::Create) => {
                    // N ad = ad N + ad
                    let mut swapped = word.clone();
                    swapped.swap(i, i + 1);
                    work.push((coeff.clone(), swapped));
                    let mut dropped: Vec<OpAtom> = word[..i].to_vec();
                    dropped.push(OpAtom::Create);
                    dropped.extend_from_slice(&word[i + 2..]);
                    work.push((coeff, dropped));
                }
                (OpAtom::Annihilate, OpAtom::Number) => {
                    // a N = N a + a
                    let mut swapped = word.clone();
                    swapped.swap(i, i + 1);
                    work.push((coeff.clone(), swapped));
                    let mut dropped: Vec<OpAtom> = word[..i].to_vec();
                    dropped.push(OpAtom::Annihilate);
                    dropped.extend_from_slice(&word[i + 2..]);
                    work.push((coeff, dropped));
                }
                (OpAtom::QNumber(s), OpAtom::Create) => {
                    // qN(s) ad = q^s ad qN(s)
                    let mut swapped = word.clone();
                    swapped.swap(i, i + 1);
                    work.push((&coeff * &CycScalar::q_pow(s as i64), swapped));
                }
                (OpAtom::Annihilate, OpAtom::QNumber(s)) => {
                    // a qN(s) = q^s qN(s) a
                    let mut swapped = word.clone();
                    swapped.swap(i, i + 1);
                    work.push((&coeff * &CycScalar::q_pow(s as i64), swapped));
                }
                (OpAtom::Number, OpAtom::QNumber(_)) => {
                    let mut swapped = word.clone();
                    swapped.swap(i, i + 1);
                    work.push((coeff, swapped));
                }
                _ => unreachable!("rank order covers all descents"),
            }
            continue 'outer;
        }

        // Word is in normal order: fold runs into an OpWord.
        let mut w = OpWord::identity();
        let mut qn_total = 0u32;
        for atom in &word {
            match atom {
                OpAtom::Create => w.ad_pow += 1,
                OpAtom::QNumber(s) => qn_total += *s as u32,
                OpAtom::Number => w.n_pow += 1,
                OpAtom::Annihilate => w.a_pow += 1,
            }
        }
        if w.ad_pow >= 3 || w.a_pow >= 3 {
            continue;
        }
        w.qn_exp = (qn_total % 3) as u8;
        result.accumulate(w, coeff);
    }
    result
}

/// Exact 3x3 matrix over the cyclotomic scalars.
#[derive(Clone, PartialEq, Eq)]
pub struct Fock3(pub [[CycScalar; 3]; 3]);

impl Fock3 {
    pub fn from_fn(f: impl Fn(usize, usize) -> CycScalar) -> Self {
        Fock3(std::array::from_fn(|r| std::array::from_fn(|c| f(r, c))))
    }

    pub fn zeros() -> Self {
        Self::from_fn(|_, _| CycScalar::zero())
    }

    pub fn identity() -> Self {
        Self::from_fn(|r, c| if r == c { CycScalar::one() } else { CycScalar::zero() })
    }

    pub fn diagonal(d: [CycScalar; 3]) -> Self {
        Self::from_fn(|r, c| if r == c { d[r].clone() } else { CycScalar::zero() })
    }

    pub fn mul(&self, rhs: &Fock3) -> Fock3 {
        Self::from_fn(|r, c| {
            let mut sum = CycScalar::zero();
            for k in 0..3 {
                sum = &sum + &(&self.0[r][k] * &rhs.0[k][c]);
            }
            sum
        })
    }

    pub fn add(&self, rhs: &Fock3) -> Fock3 {
        Self::from_fn(|r, c| &self.0[r][c] + &rhs.0[r][c])
    }

    pub fn sub(&self, rhs: &Fock3) -> Fock3 {
        Self::from_fn(|r, c| &self.0[r][c] - &rhs.0[r][c])
    }

    pub fn scale(&self, k: &CycScalar) -> Fock3 {
        Self::from_fn(|r, c| &self.0[r][c] * k)
    }

    pub fn pow(&self, k: u32) -> Fock3 {
        let mut out = Fock3::identity();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }
}

impl fmt::Debug for Fock3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Fock3[")?;
        for row in &self.0 {
            writeln!(f, "  [{}, {}, {}]", row[0], row[1], row[2])?;
        }
        write!(f, "]")
    }
}

/// Action of an atom on the basis ket |n>: returns (coefficient, n').
/// `None` when the ket is annihilated outright.
pub fn atom_on_ket(atom: OpAtom, n: u8) -> Option<(CycScalar, u8)> {
    match atom {
        OpAtom::Create => match n {
            0 => Some((CycScalar::one(), 1)),
            1 => Some((CycScalar::i_unit(), 2)),
            _ => None,
        },
        OpAtom::Annihilate => match n {
            1 => Some((CycScalar::one(), 0)),
            2 => Some((CycScalar::i_unit(), 1)),
            _ => None,
        },
        OpAtom::Number => Some((CycScalar::from_int(n as i64), n)),
        OpAtom::QNumber(s) => Some((CycScalar::q_pow(s as i64 * n as i64), n)),
    }
}

/// Matrix of one atom in the |0>, |1>, |2> basis.
pub fn atom_matrix(atom: OpAtom) -> Fock3 {
    Fock3::from_fn(|r, c| match atom_on_ket(atom, c as u8) {
        Some((coeff, m)) if m as usize == r => coeff,
        _ => CycScalar::zero(),
    })
}

/// Matrix of a normal-ordered element.
pub fn rep(e: &OpElement) -> Fock3 {
    let mut out = Fock3::zeros();
    for (word, coeff) in e.iter() {
        let mut m = Fock3::identity();
        for atom in word.atoms() {
            m = m.mul(&atom_matrix(atom));
        }
        out = out.add(&m.scale(coeff));
    }
    out
}
