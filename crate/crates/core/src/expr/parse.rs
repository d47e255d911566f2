use std::collections::HashMap;

use thiserror::Error;

use super::{CmpOp, Domain, Expr, Owner, Section, Specification, Term, VarDecl, VarRef};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown section {0}")]
    UnknownSection(String),
    #[error("content outside of any section")]
    NoSection,
    #[error("undeclared variable `{0}`")]
    UndeclaredVariable(String),
    #[error("variable `{0}` declared more than once")]
    DuplicateVariable(String),
    #[error("empty domain {0}..{1}")]
    EmptyDomain(i64, i64),
    #[error("primed variable `{var}` not allowed in {section}")]
    PrimedNotAllowed { var: String, section: &'static str },
    #[error("integer variable `{0}` used as a proposition")]
    NotBoolean(String),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Prime,
    LParen,
    RParen,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Cmp(CmpOp),
    Plus,
    Minus,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    column: usize,
}

fn syntax(line: usize, column: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        kind: ParseErrorKind::Syntax(msg.into()),
    }
}

fn tokenize(text: &str, line: usize, col0: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = col0 + i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let two: String = chars[i..chars.len().min(i + 3)].iter().collect();
        let (tok, len) = if two.starts_with("<->") {
            (Tok::Iff, 3)
        } else if two.starts_with("->") {
            (Tok::Implies, 2)
        } else if two.starts_with("!=") {
            (Tok::Cmp(CmpOp::Ne), 2)
        } else if two.starts_with("<=") {
            (Tok::Cmp(CmpOp::Le), 2)
        } else if two.starts_with(">=") {
            (Tok::Cmp(CmpOp::Ge), 2)
        } else {
            match c {
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                '!' => (Tok::Not, 1),
                '&' => (Tok::And, 1),
                '|' => (Tok::Or, 1),
                '=' => (Tok::Cmp(CmpOp::Eq), 1),
                '<' => (Tok::Cmp(CmpOp::Lt), 1),
                '>' => (Tok::Cmp(CmpOp::Gt), 1),
                '+' => (Tok::Plus, 1),
                '-' => (Tok::Minus, 1),
                '\'' => (Tok::Prime, 1),
                c if c.is_ascii_digit() => {
                    let end = (i..chars.len())
                        .find(|&j| !chars[j].is_ascii_digit())
                        .unwrap_or(chars.len());
                    let s: String = chars[i..end].iter().collect();
                    let v = s
                        .parse::<i64>()
                        .map_err(|_| syntax(line, column, format!("integer `{s}` out of range")))?;
                    (Tok::Int(v), end - i)
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let end = (i..chars.len())
                        .find(|&j| !(chars[j].is_ascii_alphanumeric() || chars[j] == '_'))
                        .unwrap_or(chars.len());
                    (Tok::Ident(chars[i..end].iter().collect()), end - i)
                }
                other => {
                    return Err(syntax(
                        line,
                        column,
                        format!("unexpected character `{other}`"),
                    ))
                }
            }
        };
        out.push(Token { tok, column });
        i += len;
    }
    Ok(out)
}

struct Scope<'a> {
    names: &'a HashMap<String, usize>,
    vars: &'a [VarDecl],
    section: Option<Section>,
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    line: usize,
    end_column: usize,
    scope: &'a Scope<'a>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn column(&self) -> usize {
        self.toks
            .get(self.pos)
            .map_or(self.end_column, |t| t.column)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        syntax(self.line, self.column(), msg)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn formula(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.implication()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.implication()?;
            lhs = Expr::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.implication()?;
            return Ok(Expr::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Tok::Or) {
            let rhs = self.conjunction()?;
            lhs = Expr::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            let rhs = self.unary()?;
            lhs = Expr::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(&Tok::Not) {
            return Ok(Expr::not(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(Tok::Ident(name)) if name == "true" || name == "TRUE" => {
                self.pos += 1;
                Ok(Expr::Const(true))
            }
            Some(Tok::Ident(name)) if name == "false" || name == "FALSE" => {
                self.pos += 1;
                Ok(Expr::Const(false))
            }
            Some(Tok::LParen) => {
                // Either a parenthesised term starting a comparison, or a
                // parenthesised formula.
                let save = self.pos;
                if let Ok(e) = self.comparison_or_atom() {
                    return Ok(e);
                }
                self.pos = save + 1;
                let inner = self.formula()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.err("expected `)`"));
                }
                Ok(inner)
            }
            Some(_) => self.comparison_or_atom(),
            None => Err(self.err("unexpected end of formula")),
        }
    }

    fn comparison_or_atom(&mut self) -> Result<Expr, ParseError> {
        let start_col = self.column();
        let lhs = self.term()?;
        if let Some(Tok::Cmp(op)) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            return Ok(Expr::Cmp(op, lhs, rhs));
        }
        match lhs {
            Term::Var(r) if self.scope.vars[r.var].domain == Domain::Bool => Ok(Expr::Atom(r)),
            Term::Var(r) => Err(ParseError {
                line: self.line,
                column: start_col,
                kind: ParseErrorKind::NotBoolean(self.scope.vars[r.var].name.clone()),
            }),
            _ => Err(syntax(self.line, start_col, "expected a comparison")),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.term_atom()?;
        loop {
            if self.eat(&Tok::Plus) {
                lhs = lhs + self.term_atom()?;
            } else if self.eat(&Tok::Minus) {
                lhs = lhs - self.term_atom()?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term_atom(&mut self) -> Result<Term, ParseError> {
        let column = self.column();
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(Term::Int(v))
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                match self.peek().cloned() {
                    Some(Tok::Int(v)) => {
                        self.pos += 1;
                        Ok(Term::Int(-v))
                    }
                    _ => Err(self.err("expected integer after `-`")),
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.err("expected `)`"));
                }
                Ok(t)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let primed = self.eat(&Tok::Prime);
                let Some(&var) = self.scope.names.get(&name) else {
                    return Err(ParseError {
                        line: self.line,
                        column,
                        kind: ParseErrorKind::UndeclaredVariable(name),
                    });
                };
                if primed {
                    let owner = self.scope.vars[var].owner;
                    let ok = self.scope.section.is_none_or(|s| s.allows_prime(owner));
                    if !ok {
                        return Err(ParseError {
                            line: self.line,
                            column,
                            kind: ParseErrorKind::PrimedNotAllowed {
                                var: name,
                                section: self.scope.section.map_or("", Section::header),
                            },
                        });
                    }
                }
                Ok(Term::Var(VarRef { var, primed }))
            }
            _ => Err(self.err("expected a term")),
        }
    }
}

fn parse_line(text: &str, line: usize, col0: usize, scope: &Scope<'_>) -> Result<Expr, ParseError> {
    let toks = tokenize(text, line, col0)?;
    let mut p = Parser {
        toks,
        pos: 0,
        line,
        end_column: col0 + text.chars().count(),
        scope,
    };
    let e = p.formula()?;
    if p.pos != p.toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

/// Parses a single formula against a declaration list. Primes are accepted
/// on any variable.
pub fn parse_expr(text: &str, vars: &[VarDecl]) -> Result<Expr, ParseError> {
    let names = vars
        .iter()
        .enumerate()
        .map(|(i, v)| (v.name.clone(), i))
        .collect();
    let scope = Scope {
        names: &names,
        vars,
        section: None,
    };
    parse_line(text, 1, 1, &scope)
}

fn section_of(header: &str) -> Option<Section> {
    Section::ALL.into_iter().find(|s| s.header() == header)
}

fn parse_decl(text: &str, line: usize, col0: usize, owner: Owner) -> Result<VarDecl, ParseError> {
    let Some((name, ty)) = text.split_once(':') else {
        return Err(syntax(
            line,
            col0,
            "expected `name : bool` or `name : lo..hi`",
        ));
    };
    let name = name.trim();
    let valid = name
        .chars()
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !matches!(name, "true" | "false" | "TRUE" | "FALSE");
    if !valid {
        return Err(syntax(
            line,
            col0,
            format!("invalid variable name `{name}`"),
        ));
    }
    let ty_col = col0 + text.find(':').unwrap_or(0) + 1;
    let ty = ty.trim();
    let domain = if ty == "bool" || ty == "boolean" {
        Domain::Bool
    } else {
        let (lo, hi) = ty
            .split_once("..")
            .ok_or_else(|| syntax(line, ty_col, format!("unknown domain `{ty}`")))?;
        let bound = |s: &str| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| syntax(line, ty_col, format!("invalid bound `{}`", s.trim())))
        };
        let (lo, hi) = (bound(lo)?, bound(hi)?);
        if lo > hi {
            return Err(ParseError {
                line,
                column: ty_col,
                kind: ParseErrorKind::EmptyDomain(lo, hi),
            });
        }
        Domain::Int { lo, hi }
    };
    Ok(VarDecl::new(name, domain, owner))
}

/// Parses the sectioned, line-oriented specification format.
///
/// Declarations are collected first, so sections may appear in any order.
pub fn parse_spec(text: &str) -> Result<Specification, ParseError> {
    let mut decls: Vec<(usize, usize, VarDecl)> = Vec::new();
    let mut formulas: Vec<(Section, usize, usize, &str)> = Vec::new();
    let mut current: Option<Section> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col0 = content.len() - content.trim_start().len() + 1;
        if trimmed.starts_with('[') {
            current = Some(section_of(trimmed).ok_or_else(|| ParseError {
                line,
                column: col0,
                kind: ParseErrorKind::UnknownSection(trimmed.to_string()),
            })?);
            continue;
        }
        match current {
            None => {
                return Err(ParseError {
                    line,
                    column: col0,
                    kind: ParseErrorKind::NoSection,
                })
            }
            Some(Section::Input) => {
                decls.push((line, col0, parse_decl(trimmed, line, col0, Owner::Env)?))
            }
            Some(Section::Output) => {
                decls.push((line, col0, parse_decl(trimmed, line, col0, Owner::Sys)?))
            }
            Some(s) => formulas.push((s, line, col0, trimmed)),
        }
    }

    // Environment variables first, each group in source order.
    decls.sort_by_key(|(line, _, d)| (d.owner == Owner::Sys, *line));
    let mut names = HashMap::new();
    let mut vars = Vec::with_capacity(decls.len());
    for (line, column, d) in decls {
        if names.insert(d.name.clone(), vars.len()).is_some() {
            return Err(ParseError {
                line,
                column,
                kind: ParseErrorKind::DuplicateVariable(d.name),
            });
        }
        vars.push(d);
    }

    let mut spec = Specification {
        vars,
        ..Default::default()
    };
    let parsed: Vec<(Section, Expr)> = {
        let mut out = Vec::with_capacity(formulas.len());
        for (section, line, col0, text) in formulas {
            let scope = Scope {
                names: &names,
                vars: &spec.vars,
                section: Some(section),
            };
            out.push((section, parse_line(text, line, col0, &scope)?));
        }
        out
    };
    for (section, e) in parsed {
        spec.section_mut(section).push(e);
    }
    Ok(spec)
}
