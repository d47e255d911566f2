//! Propositional formulas over finite-domain variables.
//!
//! Variables are either boolean or bounded integers. A reference may be
//! primed, meaning it reads the value the variable takes at the next step.
//! Booleans are integers restricted to `{0, 1}` wherever a term is expected,
//! so `e = 1` and `e` mean the same thing for a boolean `e`.

mod parse;
mod print;

use std::fmt;

use thiserror::Error;

pub use parse::{parse_expr, parse_spec, ParseError, ParseErrorKind};
pub use print::{print_expr, print_spec};

/// Which player assigns a variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Owner {
    Env,
    Sys,
}

impl fmt::Display for Owner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Owner::Env => f.write_str("env"),
            Owner::Sys => f.write_str("sys"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    Bool,
    /// Inclusive integer interval.
    Int {
        lo: i64,
        hi: i64,
    },
}

impl Domain {
    pub fn lo(&self) -> i64 {
        match *self {
            Domain::Bool => 0,
            Domain::Int { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> i64 {
        match *self {
            Domain::Bool => 1,
            Domain::Int { hi, .. } => hi,
        }
    }

    pub fn size(&self) -> u64 {
        (self.hi() - self.lo()) as u64 + 1
    }

    pub fn contains(&self, value: i64) -> bool {
        self.lo() <= value && value <= self.hi()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarDecl {
    pub name: String,
    pub domain: Domain,
    pub owner: Owner,
}

impl VarDecl {
    pub fn new(name: impl Into<String>, domain: Domain, owner: Owner) -> Self {
        VarDecl {
            name: name.into(),
            domain,
            owner,
        }
    }
}

/// A variable occurrence: index into the declaration list, plus the prime marker.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VarRef {
    pub var: usize,
    pub primed: bool,
}

impl VarRef {
    pub fn current(var: usize) -> Self {
        VarRef { var, primed: false }
    }

    pub fn next(var: usize) -> Self {
        VarRef { var, primed: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    fn apply(self, a: i64, b: i64) -> bool {
        match self {
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

/// Integer-valued term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Int(i64),
    Var(VarRef),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(bool),
    /// A boolean variable used as a proposition.
    Atom(VarRef),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Implies(Box<Expr>, Box<Expr>),
    Iff(Box<Expr>, Box<Expr>),
    Cmp(CmpOp, Term, Term),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("no value for variable #{0} in the current valuation")]
    MissingCurrent(usize),
    #[error("primed variable #{0} has no next-step value")]
    MissingNext(usize),
}

/// Source of variable values during evaluation.
pub(crate) trait Values {
    fn value(&self, r: VarRef) -> Result<i64, EvalError>;
}

/// Current valuation plus an optional (possibly partial) next-step valuation.
struct Checked<'a> {
    current: &'a [i64],
    next: &'a [Option<i64>],
}

impl Values for Checked<'_> {
    #[inline]
    fn value(&self, r: VarRef) -> Result<i64, EvalError> {
        if r.primed {
            self.next
                .get(r.var)
                .copied()
                .flatten()
                .ok_or(EvalError::MissingNext(r.var))
        } else {
            self.current
                .get(r.var)
                .copied()
                .ok_or(EvalError::MissingCurrent(r.var))
        }
    }
}

/// Total current and next valuations; used on hot paths.
pub(crate) struct Total<'a> {
    pub current: &'a [i64],
    pub next: &'a [i64],
}

impl Values for Total<'_> {
    #[inline]
    fn value(&self, r: VarRef) -> Result<i64, EvalError> {
        Ok(if r.primed {
            self.next[r.var]
        } else {
            self.current[r.var]
        })
    }
}

impl Term {
    pub fn var(var: usize) -> Term {
        Term::Var(VarRef::current(var))
    }

    pub fn next(var: usize) -> Term {
        Term::Var(VarRef::next(var))
    }

    fn eval_in(&self, vals: &impl Values) -> Result<i64, EvalError> {
        Ok(match self {
            Term::Int(v) => *v,
            Term::Var(r) => vals.value(*r)?,
            Term::Add(a, b) => a.eval_in(vals)? + b.eval_in(vals)?,
            Term::Sub(a, b) => a.eval_in(vals)? - b.eval_in(vals)?,
        })
    }

    fn visit_refs(&self, f: &mut impl FnMut(VarRef)) {
        match self {
            Term::Int(_) => {}
            Term::Var(r) => f(*r),
            Term::Add(a, b) | Term::Sub(a, b) => {
                a.visit_refs(f);
                b.visit_refs(f);
            }
        }
    }
}

impl std::ops::Add for Term {
    type Output = Term;
    fn add(self, rhs: Term) -> Term {
        Term::Add(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Sub for Term {
    type Output = Term;
    fn sub(self, rhs: Term) -> Term {
        Term::Sub(Box::new(self), Box::new(rhs))
    }
}

impl From<i64> for Term {
    fn from(v: i64) -> Term {
        Term::Int(v)
    }
}

impl Expr {
    #[allow(clippy::should_implement_trait)]
    pub fn not(e: Expr) -> Expr {
        Expr::Not(Box::new(e))
    }

    pub fn and(a: Expr, b: Expr) -> Expr {
        Expr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Expr, b: Expr) -> Expr {
        Expr::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Expr, b: Expr) -> Expr {
        Expr::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Expr, b: Expr) -> Expr {
        Expr::Iff(Box::new(a), Box::new(b))
    }

    pub fn cmp(op: CmpOp, a: impl Into<Term>, b: impl Into<Term>) -> Expr {
        Expr::Cmp(op, a.into(), b.into())
    }

    pub fn eq(a: impl Into<Term>, b: impl Into<Term>) -> Expr {
        Expr::cmp(CmpOp::Eq, a, b)
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn all(items: impl IntoIterator<Item = Expr>) -> Expr {
        items
            .into_iter()
            .reduce(Expr::and)
            .unwrap_or(Expr::Const(true))
    }

    /// Left-nested disjunction; `false` when empty.
    pub fn any(items: impl IntoIterator<Item = Expr>) -> Expr {
        items
            .into_iter()
            .reduce(Expr::or)
            .unwrap_or(Expr::Const(false))
    }

    /// Evaluates under `current`, reading primed variables from `next`.
    ///
    /// `next` may be shorter than the declaration list or hold `None` for
    /// variables whose next value is unknown; reading such a variable fails.
    pub fn eval(&self, current: &[i64], next: &[Option<i64>]) -> Result<bool, EvalError> {
        self.eval_in(&Checked { current, next })
    }

    pub(crate) fn eval_in(&self, vals: &impl Values) -> Result<bool, EvalError> {
        Ok(match self {
            Expr::Const(b) => *b,
            Expr::Atom(r) => vals.value(*r)? != 0,
            Expr::Not(e) => !e.eval_in(vals)?,
            Expr::And(a, b) => a.eval_in(vals)? && b.eval_in(vals)?,
            Expr::Or(a, b) => a.eval_in(vals)? || b.eval_in(vals)?,
            Expr::Implies(a, b) => !a.eval_in(vals)? || b.eval_in(vals)?,
            Expr::Iff(a, b) => a.eval_in(vals)? == b.eval_in(vals)?,
            Expr::Cmp(op, a, b) => op.apply(a.eval_in(vals)?, b.eval_in(vals)?),
        })
    }

    #[inline]
    pub(crate) fn eval_total(&self, current: &[i64], next: &[i64]) -> bool {
        // Total lookups cannot fail.
        self.eval_in(&Total { current, next }).unwrap_or(false)
    }

    /// Calls `f` on every variable occurrence.
    pub fn visit_refs(&self, f: &mut impl FnMut(VarRef)) {
        match self {
            Expr::Const(_) => {}
            Expr::Atom(r) => f(*r),
            Expr::Not(e) => e.visit_refs(f),
            Expr::And(a, b) | Expr::Or(a, b) | Expr::Implies(a, b) | Expr::Iff(a, b) => {
                a.visit_refs(f);
                b.visit_refs(f);
            }
            Expr::Cmp(_, a, b) => {
                a.visit_refs(f);
                b.visit_refs(f);
            }
        }
    }

    pub fn has_primed(&self) -> bool {
        let mut found = false;
        self.visit_refs(&mut |r| found |= r.primed);
        found
    }

    /// Top-level conjuncts, flattening nested `And`.
    pub fn conjuncts(&self) -> Vec<&Expr> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(e) = stack.pop() {
            match e {
                Expr::And(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
                Expr::Const(true) => {}
                other => out.push(other),
            }
        }
        out
    }
}

/// A parsed specification: declarations plus the formula lists of each section.
///
/// Variables are stored environment-first; within each owner the
/// declaration order of the source is kept. Safety and initial lists are
/// conjoined when a game is built; each liveness entry is a separate goal.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Specification {
    pub vars: Vec<VarDecl>,
    pub env_init: Vec<Expr>,
    pub sys_init: Vec<Expr>,
    pub env_safety: Vec<Expr>,
    pub sys_safety: Vec<Expr>,
    pub env_liveness: Vec<Expr>,
    pub sys_liveness: Vec<Expr>,
}

/// Violations of the well-formedness rules of a [`Specification`].
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("variable `{0}` declared more than once")]
    DuplicateVariable(String),
    #[error("variable `{name}` has empty domain {lo}..{hi}")]
    EmptyDomain { name: String, lo: i64, hi: i64 },
    #[error("variables must be ordered environment first")]
    OwnerOrder,
    #[error("reference to undeclared variable #{0}")]
    UndeclaredIndex(usize),
    #[error("primed variable `{var}` not allowed in {section}")]
    PrimedNotAllowed { var: String, section: &'static str },
}

impl Specification {
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn num_env_vars(&self) -> usize {
        self.vars.iter().filter(|v| v.owner == Owner::Env).count()
    }

    /// Checks declaration and prime-placement rules.
    pub fn check(&self) -> Result<(), SpecError> {
        let mut seen = std::collections::HashSet::new();
        let mut in_sys = false;
        for v in &self.vars {
            if !seen.insert(v.name.as_str()) {
                return Err(SpecError::DuplicateVariable(v.name.clone()));
            }
            if let Domain::Int { lo, hi } = v.domain {
                if lo > hi {
                    return Err(SpecError::EmptyDomain {
                        name: v.name.clone(),
                        lo,
                        hi,
                    });
                }
            }
            match v.owner {
                Owner::Sys => in_sys = true,
                Owner::Env if in_sys => return Err(SpecError::OwnerOrder),
                Owner::Env => {}
            }
        }
        for (section, list) in self.sections() {
            for e in list {
                let mut err = None;
                e.visit_refs(&mut |r| {
                    if err.is_some() {
                        return;
                    }
                    let Some(decl) = self.vars.get(r.var) else {
                        err = Some(SpecError::UndeclaredIndex(r.var));
                        return;
                    };
                    if r.primed && !section.allows_prime(decl.owner) {
                        err = Some(SpecError::PrimedNotAllowed {
                            var: decl.name.clone(),
                            section: section.header(),
                        });
                    }
                });
                if let Some(err) = err {
                    return Err(err);
                }
            }
        }
        Ok(())
    }

    pub(crate) fn sections(&self) -> [(Section, &Vec<Expr>); 6] {
        [
            (Section::EnvInit, &self.env_init),
            (Section::SysInit, &self.sys_init),
            (Section::EnvSafety, &self.env_safety),
            (Section::SysSafety, &self.sys_safety),
            (Section::EnvLiveness, &self.env_liveness),
            (Section::SysLiveness, &self.sys_liveness),
        ]
    }

    pub(crate) fn section_mut(&mut self, s: Section) -> &mut Vec<Expr> {
        match s {
            Section::EnvInit => &mut self.env_init,
            Section::SysInit => &mut self.sys_init,
            Section::EnvSafety => &mut self.env_safety,
            Section::SysSafety => &mut self.sys_safety,
            Section::EnvLiveness => &mut self.env_liveness,
            Section::SysLiveness => &mut self.sys_liveness,
            Section::Input | Section::Output => {
                unreachable!("declaration sections hold no formulas")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Section {
    Input,
    Output,
    EnvInit,
    SysInit,
    EnvSafety,
    SysSafety,
    EnvLiveness,
    SysLiveness,
}

impl Section {
    pub(crate) const ALL: [Section; 8] = [
        Section::Input,
        Section::Output,
        Section::EnvInit,
        Section::SysInit,
        Section::EnvSafety,
        Section::SysSafety,
        Section::EnvLiveness,
        Section::SysLiveness,
    ];

    pub(crate) fn header(self) -> &'static str {
        match self {
            Section::Input => "[INPUT]",
            Section::Output => "[OUTPUT]",
            Section::EnvInit => "[ENV_INIT]",
            Section::SysInit => "[SYS_INIT]",
            Section::EnvSafety => "[ENV_SAFETY]",
            Section::SysSafety => "[SYS_SAFETY]",
            Section::EnvLiveness => "[ENV_LIVENESS]",
            Section::SysLiveness => "[SYS_LIVENESS]",
        }
    }

    /// Environment transitions may look at the next input only; system
    /// transitions may look at everything.
    fn allows_prime(self, owner: Owner) -> bool {
        match self {
            Section::EnvSafety => owner == Owner::Env,
            Section::SysSafety => true,
            _ => false,
        }
    }
}
