//! Signatures, terms, 2-cell expressions, presentations and extensions.

use std::fmt;
use std::sync::Arc;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Operation {
    pub name: String,
    pub arity: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub operations: Vec<Operation>,
}

impl Signature {
    pub fn new(operations: Vec<Operation>) -> Result<Signature> {
        for (i, op) in operations.iter().enumerate() {
            if operations[..i].iter().any(|o| o.name == op.name) {
                return Err(Error::InvalidPresentation(format!(
                    "operation {} declared twice",
                    op.name
                )));
            }
        }
        Ok(Signature { operations })
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.operations.iter().position(|o| o.name == name)
    }

    pub fn arity(&self, name: &str) -> Result<usize> {
        self.position(name)
            .map(|i| self.operations[i].arity)
            .ok_or_else(|| Error::SignatureMismatch(format!("unknown operation {name}")))
    }
}

/// A term in variables `x1, x2, ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    /// 1-based.
    Var(usize),
    Op(String, Vec<Term>),
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn op(name: &str, args: Vec<Term>) -> Term {
        Term::Op(name.to_string(), args)
    }

    /// Largest variable index occurring, 0 for closed terms.
    pub fn free_arity(&self) -> usize {
        match self {
            Term::Var(i) => *i,
            Term::Op(_, args) => args.iter().map(Term::free_arity).max().unwrap_or(0),
        }
    }

    pub fn check(&self, sig: &Signature) -> Result<()> {
        match self {
            Term::Var(0) => Err(Error::MalformedTerm("variables are numbered from 1".into())),
            Term::Var(_) => Ok(()),
            Term::Op(name, args) => {
                let n = sig.arity(name)?;
                if n != args.len() {
                    return Err(Error::SignatureMismatch(format!(
                        "{name} takes {n} arguments, got {}",
                        args.len()
                    )));
                }
                args.iter().try_for_each(|a| a.check(sig))
            }
        }
    }

    /// Replaces `x_i` by `args[i-1]`.
    pub fn substitute(&self, args: &[Term]) -> Result<Term> {
        match self {
            Term::Var(i) => args.get(i - 1).cloned().ok_or_else(|| {
                Error::MalformedTerm(format!("x{i} has no substitute among {} terms", args.len()))
            }),
            Term::Op(name, sub) => Ok(Term::Op(
                name.clone(),
                sub.iter().map(|t| t.substitute(args)).collect::<Result<_>>()?,
            )),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::Op(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Term::Var(i) => Value::Array(vec!["var".into(), (*i).into()]),
            Term::Op(name, args) => {
                let mut v = vec![Value::from("op"), Value::from(name.as_str())];
                v.extend(args.iter().map(Term::to_json));
                Value::Array(v)
            }
        }
    }

    pub fn from_json(v: &Value) -> Result<Term> {
        let bad = || Error::MalformedTerm(format!("not a term: {v}"));
        let items = v.as_array().ok_or_else(bad)?;
        match items.first().and_then(Value::as_str) {
            Some("var") if items.len() == 2 => {
                let i = items[1].as_u64().ok_or_else(bad)? as usize;
                Ok(Term::Var(i))
            }
            Some("op") if items.len() >= 2 => {
                let name = items[1].as_str().ok_or_else(bad)?;
                let args = items[2..].iter().map(Term::from_json).collect::<Result<_>>()?;
                Ok(Term::Op(name.to_string(), args))
            }
            _ => Err(bad()),
        }
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Term::from_json(&v).map_err(D::Error::custom)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "x{i}"),
            Term::Op(name, args) if args.is_empty() => write!(f, "{name}"),
            Term::Op(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoCellGenerator {
    pub name: String,
    pub arity: usize,
    pub source: Term,
    pub target: Term,
    #[serde(default)]
    pub invertible: bool,
}

/// A 2-cell expression. `Subst` substitutes terms or 2-cells for the
/// variables of `inner`; it is the only horizontal composition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TwoCellExpr {
    Id(Term),
    Gen(String),
    Inv(String),
    /// `VComp(second, first)`.
    VComp(Box<TwoCellExpr>, Box<TwoCellExpr>),
    Subst {
        inner: Box<TwoCellExpr>,
        args: Vec<SubstArg>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubstArg {
    Term(Term),
    Cell(TwoCellExpr),
}

/// Source and target terms of a well-formed expression, and the least
/// context it lives in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Boundary {
    pub arity: usize,
    pub source: Term,
    pub target: Term,
}

impl TwoCellExpr {
    pub fn id(t: Term) -> Self {
        TwoCellExpr::Id(t)
    }

    pub fn gen(name: &str) -> Self {
        TwoCellExpr::Gen(name.to_string())
    }

    pub fn inv(name: &str) -> Self {
        TwoCellExpr::Inv(name.to_string())
    }

    pub fn then(self, second: TwoCellExpr) -> Self {
        TwoCellExpr::VComp(Box::new(second), Box::new(self))
    }

    pub fn vcomp(second: TwoCellExpr, first: TwoCellExpr) -> Self {
        TwoCellExpr::VComp(Box::new(second), Box::new(first))
    }

    pub fn subst(inner: TwoCellExpr, args: Vec<SubstArg>) -> Self {
        TwoCellExpr::Subst {
            inner: Box::new(inner),
            args,
        }
    }

    /// Boundary terms, checked syntactically.
    pub fn boundary(&self, pres: &Presentation) -> Result<Boundary> {
        match self {
            TwoCellExpr::Id(t) => {
                t.check(&pres.signature)?;
                Ok(Boundary {
                    arity: t.free_arity(),
                    source: t.clone(),
                    target: t.clone(),
                })
            }
            TwoCellExpr::Gen(name) => {
                let g = pres.generator(name)?;
                Ok(Boundary {
                    arity: g.arity,
                    source: g.source.clone(),
                    target: g.target.clone(),
                })
            }
            TwoCellExpr::Inv(name) => {
                let g = pres.generator(name)?;
                if !g.invertible {
                    return Err(Error::MalformedExpression(format!(
                        "{name} is not declared invertible"
                    )));
                }
                Ok(Boundary {
                    arity: g.arity,
                    source: g.target.clone(),
                    target: g.source.clone(),
                })
            }
            TwoCellExpr::VComp(second, first) => {
                let (b2, b1) = (second.boundary(pres)?, first.boundary(pres)?);
                if b1.target != b2.source {
                    return Err(Error::MalformedExpression(format!(
                        "vertical composite of {} ⇒ {} then {} ⇒ {}",
                        b1.source, b1.target, b2.source, b2.target
                    )));
                }
                Ok(Boundary {
                    arity: b1.arity.max(b2.arity),
                    source: b1.source,
                    target: b2.target,
                })
            }
            TwoCellExpr::Subst { inner, args } => {
                let b = inner.boundary(pres)?;
                if args.len() < b.arity {
                    return Err(Error::MalformedExpression(format!(
                        "substitution gives {} arguments to a {}-ary 2-cell",
                        args.len(),
                        b.arity
                    )));
                }
                let mut sources = Vec::with_capacity(args.len());
                let mut targets = Vec::with_capacity(args.len());
                let mut arity = 0;
                for a in args {
                    let ab = a.boundary(pres)?;
                    arity = arity.max(ab.arity);
                    sources.push(ab.source);
                    targets.push(ab.target);
                }
                Ok(Boundary {
                    arity,
                    source: b.source.substitute(&sources)?,
                    target: b.target.substitute(&targets)?,
                })
            }
        }
    }
}

impl SubstArg {
    pub fn boundary(&self, pres: &Presentation) -> Result<Boundary> {
        match self {
            SubstArg::Term(t) => TwoCellExpr::Id(t.clone()).boundary(pres),
            SubstArg::Cell(e) => e.boundary(pres),
        }
    }
}

impl fmt::Display for TwoCellExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwoCellExpr::Id(t) => write!(f, "1[{t}]"),
            TwoCellExpr::Gen(n) => write!(f, "{n}"),
            TwoCellExpr::Inv(n) => write!(f, "{n}^-1"),
            TwoCellExpr::VComp(second, first) => write!(f, "({second} . {first})"),
            TwoCellExpr::Subst { inner, args } => {
                write!(f, "{inner}[")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    match a {
                        SubstArg::Term(t) => write!(f, "{t}")?,
                        SubstArg::Cell(e) => write!(f, "{e}")?,
                    }
                }
                write!(f, "]")
            }
        }
    }
}

/// An equation between two 2-cell expressions, with an optional name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellEquation {
    pub name: String,
    pub lhs: TwoCellExpr,
    pub rhs: TwoCellExpr,
}

impl CellEquation {
    /// The context both sides are read in.
    pub fn arity(&self, pres: &Presentation) -> Result<usize> {
        Ok(self.lhs.boundary(pres)?.arity.max(self.rhs.boundary(pres)?.arity))
    }

    fn check(&self, pres: &Presentation) -> Result<()> {
        let (l, r) = (self.lhs.boundary(pres)?, self.rhs.boundary(pres)?);
        if l.source != r.source || l.target != r.target {
            return Err(Error::MalformedExpression(format!(
                "equation {} relates {} ⇒ {} with {} ⇒ {}",
                self.name, l.source, l.target, r.source, r.target
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub signature: Signature,
    pub term_equations: Vec<(Term, Term)>,
    pub generators: Vec<TwoCellGenerator>,
    pub two_cell_equations: Vec<CellEquation>,
}

impl Presentation {
    pub fn new(
        signature: Signature,
        term_equations: Vec<(Term, Term)>,
        generators: Vec<TwoCellGenerator>,
        two_cell_equations: Vec<CellEquation>,
    ) -> Result<Presentation> {
        let p = Presentation {
            signature,
            term_equations,
            generators,
            two_cell_equations,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        for (l, r) in &self.term_equations {
            l.check(&self.signature)?;
            r.check(&self.signature)?;
        }
        for (i, g) in self.generators.iter().enumerate() {
            if self.generators[..i].iter().any(|h| h.name == g.name)
                || self.signature.position(&g.name).is_some()
            {
                return Err(Error::InvalidPresentation(format!("name {} is used twice", g.name)));
            }
            g.source.check(&self.signature)?;
            g.target.check(&self.signature)?;
            if g.source.free_arity().max(g.target.free_arity()) > g.arity {
                return Err(Error::InvalidPresentation(format!(
                    "generator {} mentions variables beyond its arity {}",
                    g.name, g.arity
                )));
            }
        }
        for e in &self.two_cell_equations {
            e.check(self)?;
        }
        Ok(())
    }

    pub fn generator(&self, name: &str) -> Result<&TwoCellGenerator> {
        self.generators
            .iter()
            .find(|g| g.name == name)
            .ok_or_else(|| Error::SignatureMismatch(format!("unknown 2-cell generator {name}")))
    }

    pub fn generator_position(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }
}

/// A presentation enlarged by 2-cell equations only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    pub base: Arc<Presentation>,
    pub added: Vec<CellEquation>,
}

impl Extension {
    pub fn new(base: Arc<Presentation>, added: Vec<CellEquation>) -> Result<Extension> {
        for e in &added {
            e.check(&base)
                .map_err(|err| Error::InvalidExtension(format!("equation {}: {err}", e.name)))?;
        }
        Ok(Extension { base, added })
    }

    pub fn empty(base: Arc<Presentation>) -> Extension {
        Extension {
            base,
            added: Vec::new(),
        }
    }

    /// The enlarged presentation: same operations, term equations and
    /// generators, more 2-cell equations.
    pub fn presentation(&self) -> Presentation {
        let mut p = (*self.base).clone();
        p.two_cell_equations.extend(self.added.iter().cloned());
        p
    }
}

/// The signature with `tensor` (binary) and `I` (nullary) and the three
/// structural cells, invertible, with no equations.
pub fn monoidal_presentation() -> Presentation {
    let x = Term::var;
    let t = |a: Term, b: Term| Term::op(TENSOR, vec![a, b]);
    let unit = || Term::op(UNIT, vec![]);
    Presentation::new(
        Signature::new(vec![
            Operation { name: TENSOR.into(), arity: 2 },
            Operation { name: UNIT.into(), arity: 0 },
        ])
        .expect("distinct names"),
        Vec::new(),
        vec![
            TwoCellGenerator {
                name: ALPHA.into(),
                arity: 3,
                source: t(t(x(1), x(2)), x(3)),
                target: t(x(1), t(x(2), x(3))),
                invertible: true,
            },
            TwoCellGenerator {
                name: LAMBDA.into(),
                arity: 1,
                source: t(unit(), x(1)),
                target: x(1),
                invertible: true,
            },
            TwoCellGenerator {
                name: RHO.into(),
                arity: 1,
                source: t(x(1), unit()),
                target: x(1),
                invertible: true,
            },
        ],
        Vec::new(),
    )
    .expect("the monoidal presentation is well formed")
}

pub const TENSOR: &str = "tensor";
pub const UNIT: &str = "I";
pub const ALPHA: &str = "alpha";
pub const LAMBDA: &str = "lambda";
pub const RHO: &str = "rho";

fn tensor_cell(a: SubstArg, b: SubstArg) -> TwoCellExpr {
    let id = TwoCellExpr::id(Term::op(TENSOR, vec![Term::var(1), Term::var(2)]));
    TwoCellExpr::subst(id, vec![a, b])
}

fn terms(ts: &[Term]) -> Vec<SubstArg> {
    ts.iter().cloned().map(SubstArg::Term).collect()
}

/// `α_{x1,x2,x3⊗x4} ∘ α_{x1⊗x2,x3,x4} = (1 ⊗ α) ∘ α_{x1,x2⊗x3,x4} ∘ (α ⊗ 1)`.
pub fn pentagon() -> CellEquation {
    let x = Term::var;
    let t = |a: Term, b: Term| Term::op(TENSOR, vec![a, b]);
    let alpha_at = |a: Term, b: Term, c: Term| TwoCellExpr::subst(TwoCellExpr::gen(ALPHA), terms(&[a, b, c]));
    let lhs = TwoCellExpr::vcomp(
        alpha_at(x(1), x(2), t(x(3), x(4))),
        alpha_at(t(x(1), x(2)), x(3), x(4)),
    );
    let rhs = TwoCellExpr::vcomp(
        tensor_cell(SubstArg::Term(x(1)), SubstArg::Cell(alpha_at(x(2), x(3), x(4)))),
        TwoCellExpr::vcomp(
            alpha_at(x(1), t(x(2), x(3)), x(4)),
            tensor_cell(SubstArg::Cell(alpha_at(x(1), x(2), x(3))), SubstArg::Term(x(4))),
        ),
    );
    CellEquation {
        name: "pentagon".into(),
        lhs,
        rhs,
    }
}

/// `(1 ⊗ λ) ∘ α_{x1,I,x2} = ρ ⊗ 1`.
pub fn triangle() -> CellEquation {
    let x = Term::var;
    let unit = Term::op(UNIT, vec![]);
    let lambda = TwoCellExpr::subst(TwoCellExpr::gen(LAMBDA), terms(&[x(2)]));
    let rho = TwoCellExpr::subst(TwoCellExpr::gen(RHO), terms(&[x(1)]));
    let lhs = TwoCellExpr::vcomp(
        tensor_cell(SubstArg::Term(x(1)), SubstArg::Cell(lambda)),
        TwoCellExpr::subst(TwoCellExpr::gen(ALPHA), terms(&[x(1), unit, x(2)])),
    );
    let rhs = tensor_cell(SubstArg::Cell(rho), SubstArg::Term(x(2)));
    CellEquation {
        name: "triangle".into(),
        lhs,
        rhs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terms_round_trip_through_json() {
        let t = Term::op(TENSOR, vec![Term::op(UNIT, vec![]), Term::var(2)]);
        let v = serde_json::to_value(&t).unwrap();
        assert_eq!(v, serde_json::json!(["op", "tensor", ["op", "I"], ["var", 2]]));
        assert_eq!(serde_json::from_value::<Term>(v).unwrap(), t);
        assert_eq!(t.free_arity(), 2);
        assert_eq!(t.to_string(), "tensor(I, x2)");
    }

    #[test]
    fn malformed_terms_are_rejected() {
        let p = monoidal_presentation();
        assert!(Term::op(TENSOR, vec![Term::var(1)]).check(&p.signature).is_err());
        assert!(Term::op("cup", vec![]).check(&p.signature).is_err());
        assert!(Term::var(0).check(&p.signature).is_err());
    }

    #[test]
    fn coherence_boundaries_agree() {
        let p = monoidal_presentation();
        for eq in [pentagon(), triangle()] {
            eq.check(&p).unwrap();
        }
        let b = pentagon().lhs.boundary(&p).unwrap();
        assert_eq!(b.arity, 4);
        assert_eq!(b.source.to_string(), "tensor(tensor(tensor(x1, x2), x3), x4)");
        assert_eq!(b.target.to_string(), "tensor(x1, tensor(x2, tensor(x3, x4)))");
        assert_eq!(triangle().arity(&p).unwrap(), 2);
    }

    #[test]
    fn expressions_round_trip_through_json() {
        let e = pentagon().rhs;
        let v = serde_json::to_value(&e).unwrap();
        assert_eq!(serde_json::from_value::<TwoCellExpr>(v).unwrap(), e);
        let one = serde_json::json!({"vcomp": [{"inv": "alpha"}, {"gen": "alpha"}]});
        let parsed: TwoCellExpr = serde_json::from_value(one).unwrap();
        let b = parsed.boundary(&monoidal_presentation()).unwrap();
        assert_eq!(b.source, b.target);
    }

    #[test]
    fn ill_typed_composites_are_rejected() {
        let p = monoidal_presentation();
        let e = TwoCellExpr::vcomp(TwoCellExpr::gen(ALPHA), TwoCellExpr::gen(ALPHA));
        assert!(matches!(e.boundary(&p), Err(Error::MalformedExpression(_))));
        let short = TwoCellExpr::subst(TwoCellExpr::gen(ALPHA), terms(&[Term::var(1)]));
        assert!(short.boundary(&p).is_err());
    }

    #[test]
    fn extensions_reject_mismatched_sides() {
        let p = Arc::new(monoidal_presentation());
        let bad = CellEquation {
            name: "bad".into(),
            lhs: TwoCellExpr::gen(ALPHA),
            rhs: TwoCellExpr::id(Term::var(1)),
        };
        assert!(matches!(Extension::new(p.clone(), vec![bad]), Err(Error::InvalidExtension(_))));
        assert!(Extension::new(p, vec![pentagon(), triangle()]).is_ok());
    }
}
