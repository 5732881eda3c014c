//! Evaluation of parsed expressions against the core engine.
//!
//! An expression evaluates to either an algebra element (scalars,
//! generators, operators, and their products) or a ket-side state (anything
//! containing `ket(n)`). Bras never stand alone: a leading `bra(n)` closes a
//! product that evaluates to a state, leaving the matched Grassmann content.

use std::fmt;

use tg_core::berezin;
use tg_core::grassmann::{AlgebraSignature, GElement, GenKind, GeneratorSym};
use tg_core::oscillator::OpAtom;
use tg_core::scalars::CycScalar;
use tg_core::states::{ConventionConfig, MixedElement, MixedSym, VacuumExpansion};
use tg_core::CoreError;

use crate::expr::Expr;

pub struct EvalContext {
    pub sig: AlgebraSignature,
    pub conv: ConventionConfig,
}

#[derive(Clone, Debug)]
pub enum Value {
    Elem(MixedElement),
    State(VacuumExpansion),
}

#[derive(Debug)]
pub enum EvalError {
    Core(CoreError),
    Type(String),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Core(e) => write!(f, "{e}"),
            EvalError::Type(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for EvalError {}

impl From<CoreError> for EvalError {
    fn from(e: CoreError) -> Self {
        EvalError::Core(e)
    }
}

fn type_error(msg: impl Into<String>) -> EvalError {
    EvalError::Type(msg.into())
}

fn check_index(ctx: &EvalContext, idx: usize) -> Result<(), EvalError> {
    if idx >= ctx.sig.n_pairs {
        Err(EvalError::Core(CoreError::IndexOutOfRange { index: idx, n: ctx.sig.n_pairs }))
    } else {
        Ok(())
    }
}

fn grassmann_to_mixed(g: &GElement) -> MixedElement {
    MixedElement::from_terms(
        g.signature(),
        g.iter()
            .map(|(w, c)| (c.clone(), w.iter().copied().map(MixedSym::G).collect()))
            .collect(),
    )
}

fn require_grassmann(e: &MixedElement, what: &str) -> Result<GElement, EvalError> {
    e.factorize()?
        .as_grassmann()
        .ok_or_else(|| type_error(format!("{what} requires a pure Grassmann expression")))
}

fn elem_times_state(
    ctx: &EvalContext,
    elem: &MixedElement,
    state: &VacuumExpansion,
) -> Result<VacuumExpansion, EvalError> {
    let mut out = VacuumExpansion::zero(ctx.sig);
    for ((ket, word), coeff) in state.iter() {
        let applied = elem.apply_to_ket(&ctx.conv, *ket)?;
        let trailed = applied.mul_right(&GElement::from_word(ctx.sig, word)?)?;
        out = out.add(&trailed.scale(coeff));
    }
    Ok(out)
}

fn mul_value(ctx: &EvalContext, lhs: Value, rhs: Value) -> Result<Value, EvalError> {
    match (lhs, rhs) {
        (Value::Elem(a), Value::Elem(b)) => Ok(Value::Elem(a.mul(&b))),
        (Value::Elem(a), Value::State(s)) => Ok(Value::State(elem_times_state(ctx, &a, &s)?)),
        (Value::State(s), Value::Elem(b)) => {
            let g = b
                .factorize()?
                .as_grassmann()
                .ok_or_else(|| type_error("only Grassmann factors may follow a ket"))?;
            Ok(Value::State(s.mul_right(&g)?))
        }
        (Value::State(_), Value::State(_)) => Err(type_error("kets cannot multiply kets")),
    }
}

fn bra_extract(n: u8, state: &VacuumExpansion) -> GElement {
    let sig = state.signature();
    let raw: Vec<_> = state
        .iter()
        .filter(|((ket, _), _)| *ket == n)
        .map(|((_, word), c)| (word.clone(), c.clone()))
        .collect();
    GElement::from_raw_terms(sig, raw).expect("expansion words are canonical")
}

fn eval_product(ctx: &EvalContext, items: &[Expr]) -> Result<Value, EvalError> {
    if let Some(Expr::Bra(n)) = items.first() {
        if items.len() == 1 {
            return Err(type_error("a bra can only lead a product that ends in a ket"));
        }
        let rest = eval_product(ctx, &items[1..])?;
        let Value::State(state) = rest else {
            return Err(type_error("a bra must be followed by a ket expression"));
        };
        return Ok(Value::Elem(grassmann_to_mixed(&bra_extract(*n, &state))));
    }

    let mut acc: Option<Value> = None;
    for item in items {
        match item {
            Expr::Bra(_) => return Err(type_error("a bra can only lead a product")),
            Expr::Diff(kind, idx) => {
                check_index(ctx, *idx)?;
                let Some(value) = acc.take() else {
                    return Err(type_error(
                        "a differential must follow the expression it integrates",
                    ));
                };
                let Value::Elem(e) = value else {
                    return Err(type_error("kets cannot be integrated over"));
                };
                let g = require_grassmann(&e, "integration")?;
                let var = match kind {
                    GenKind::Unbarred => GeneratorSym::xi(*idx),
                    GenKind::Barred => GeneratorSym::xb(*idx),
                };
                acc = Some(Value::Elem(grassmann_to_mixed(&berezin::integrate(&g, var))));
            }
            other => {
                let v = eval(ctx, other)?;
                acc = Some(match acc.take() {
                    Some(prev) => mul_value(ctx, prev, v)?,
                    None => v,
                });
            }
        }
    }
    acc.ok_or_else(|| type_error("empty product"))
}

pub fn eval(ctx: &EvalContext, expr: &Expr) -> Result<Value, EvalError> {
    match expr {
        Expr::Rational(p, r) => {
            Ok(Value::Elem(MixedElement::scalar(ctx.sig, CycScalar::from_ratio(*p, *r))))
        }
        Expr::QUnit => Ok(Value::Elem(MixedElement::scalar(ctx.sig, CycScalar::q()))),
        Expr::IUnit => Ok(Value::Elem(MixedElement::scalar(ctx.sig, CycScalar::i_unit()))),
        Expr::Gen(kind, idx) => {
            check_index(ctx, *idx)?;
            let sym = match kind {
                GenKind::Unbarred => GeneratorSym::xi(*idx),
                GenKind::Barred => GeneratorSym::xb(*idx),
            };
            Ok(Value::Elem(MixedElement::from_word(ctx.sig, &[MixedSym::G(sym)])))
        }
        Expr::Diff(..) => {
            Err(type_error("a differential can only trail a product, as in xi(0)^2*dxi(0)"))
        }
        Expr::Annihilate => {
            Ok(Value::Elem(MixedElement::from_word(ctx.sig, &[MixedSym::Op(OpAtom::Annihilate)])))
        }
        Expr::Create => {
            Ok(Value::Elem(MixedElement::from_word(ctx.sig, &[MixedSym::Op(OpAtom::Create)])))
        }
        Expr::Number => {
            Ok(Value::Elem(MixedElement::from_word(ctx.sig, &[MixedSym::Op(OpAtom::Number)])))
        }
        Expr::QN(s) => {
            let s = s.rem_euclid(3) as u8;
            Ok(Value::Elem(MixedElement::from_word(ctx.sig, &[MixedSym::Op(OpAtom::QNumber(s))])))
        }
        Expr::Ket(n) => {
            Ok(Value::State(MixedElement::one(ctx.sig).apply_to_ket(&ctx.conv, *n)?))
        }
        Expr::Bra(_) => Err(type_error("a bra can only lead a product that ends in a ket")),
        Expr::Neg(inner) => {
            let minus_one = -CycScalar::one();
            Ok(match eval(ctx, inner)? {
                Value::Elem(e) => Value::Elem(e.scale(&minus_one)),
                Value::State(s) => Value::State(s.scale(&minus_one)),
            })
        }
        Expr::Sum(items) => {
            let mut acc: Option<Value> = None;
            for item in items {
                let v = eval(ctx, item)?;
                acc = Some(match (acc.take(), v) {
                    (None, v) => v,
                    (Some(Value::Elem(a)), Value::Elem(b)) => Value::Elem(a.add(&b)),
                    (Some(Value::State(a)), Value::State(b)) => Value::State(a.add(&b)),
                    _ => {
                        return Err(type_error(
                            "cannot add a ket expression to an operator expression",
                        ))
                    }
                });
            }
            acc.ok_or_else(|| type_error("empty sum"))
        }
        Expr::Prod(items) => eval_product(ctx, items),
        Expr::Pow(base, exp) => match eval(ctx, base)? {
            Value::Elem(e) => Ok(Value::Elem(e.pow(*exp))),
            Value::State(_) => Err(type_error("kets cannot be raised to a power")),
        },
        Expr::Integrate(inner, kind, idx) => {
            check_index(ctx, *idx)?;
            let Value::Elem(e) = eval(ctx, inner)? else {
                return Err(type_error("kets cannot be integrated over"));
            };
            let g = require_grassmann(&e, "integration")?;
            let var = match kind {
                GenKind::Unbarred => GeneratorSym::xi(*idx),
                GenKind::Barred => GeneratorSym::xb(*idx),
            };
            Ok(Value::Elem(grassmann_to_mixed(&berezin::integrate(&g, var))))
        }
    }
}

/// Extract an exact scalar from an evaluated value, if it is one.
pub fn as_scalar(value: &Value) -> Option<CycScalar> {
    let Value::Elem(e) = value else { return None };
    let f = e.factorize().ok()?;
    let g = f.as_grassmann()?;
    if g.is_zero() {
        return Some(CycScalar::zero());
    }
    if g.len() == 1 {
        let (word, c) = g.iter().next()?;
        if word.is_empty() {
            return Some(c.clone());
        }
    }
    None
}

pub fn render_text(value: &Value) -> Result<String, EvalError> {
    match value {
        Value::Elem(e) => {
            let f = e.factorize()?;
            if let Some(g) = f.as_grassmann() {
                Ok(g.to_string())
            } else if let Some(op) = f.as_operator() {
                Ok(op.to_string())
            } else {
                Ok(f.to_string())
            }
        }
        Value::State(s) => Ok(s.to_string()),
    }
}

pub fn render_json(value: &Value) -> Result<serde_json::Value, EvalError> {
    match value {
        Value::Elem(e) => {
            let f = e.factorize()?;
            if let Some(g) = f.as_grassmann() {
                Ok(serde_json::json!({ "kind": "grassmann", "value": g.to_json() }))
            } else if let Some(op) = f.as_operator() {
                Ok(serde_json::json!({ "kind": "operator", "value": op.to_json() }))
            } else {
                Ok(serde_json::json!({ "kind": "mixed", "value": f.to_json() }))
            }
        }
        Value::State(s) => Ok(serde_json::json!({ "kind": "state", "value": s.to_json() })),
    }
}
