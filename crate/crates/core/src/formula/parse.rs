//! Recursive-descent parser for the ASCII formula syntax.
//!
//! ```text
//! formula  := implies ( "<->" formula )?
//! implies  := or ( "->" implies )?
//! or       := and ( "|" and )*
//! and      := unary ( "&" unary )*
//! unary    := "~" unary | quant | "(" formula ")" | atom
//! quant    := ("forall" | "exists") var "." formula
//! atom     := term ("in" | "=") ("^" nat)? term
//! term     := ident ("^" nat)? | "Vbar" | "P" "(" term "," term ")"
//! ```
//!
//! A quantifier body extends as far to the right as possible. `#` starts a
//! comment running to the end of the line.

use super::ast::{Connective, Dialect, Formula, Quantifier, Rel, Term, Var, VBAR};
use super::FormulaError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(u32),
    Caret,
    LParen,
    RParen,
    Comma,
    Dot,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Equals,
    In,
    Forall,
    Exists,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Nat(n) => format!("number `{n}`"),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Not => "`~`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Equals => "`=`".into(),
            Tok::In => "`in`".into(),
            Tok::Forall => "`forall`".into(),
            Tok::Exists => "`exists`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    column: usize,
}

fn lex(text: &str, origin: Pos) -> Result<Vec<(Tok, Pos)>, FormulaError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let (mut line, mut column) = (origin.line, origin.column);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column };
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
        let (tok, len) = if rest.starts_with("<->") {
            (Tok::Iff, 3)
        } else if rest.starts_with("->") {
            (Tok::Implies, 2)
        } else {
            match c {
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                ',' => (Tok::Comma, 1),
                '.' => (Tok::Dot, 1),
                '~' => (Tok::Not, 1),
                '&' => (Tok::And, 1),
                '|' => (Tok::Or, 1),
                '=' => (Tok::Equals, 1),
                '^' => (Tok::Caret, 1),
                c if c.is_ascii_digit() => {
                    let start = i;
                    let mut j = i;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    let digits: String = chars[start..j].iter().collect();
                    let n = digits.parse::<u32>().map_err(|_| FormulaError::Syntax {
                        line,
                        column,
                        message: format!("type index `{digits}` out of range"),
                    })?;
                    (Tok::Nat(n), j - start)
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let start = i;
                    let mut j = i;
                    while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                        j += 1;
                    }
                    let word: String = chars[start..j].iter().collect();
                    let tok = match word.as_str() {
                        "forall" => Tok::Forall,
                        "exists" => Tok::Exists,
                        "in" => Tok::In,
                        _ => Tok::Ident(word),
                    };
                    (tok, j - start)
                }
                other => {
                    return Err(FormulaError::Syntax {
                        line,
                        column,
                        message: format!("unexpected character `{other}`"),
                    })
                }
            }
        };
        out.push((tok, pos));
        i += len;
        column += len;
    }
    out.push((Tok::Eof, Pos { line, column }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    dialect: Dialect,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, FormulaError> {
        self.syntax_at(self.pos(), message)
    }

    fn syntax_at<T>(&self, p: Pos, message: impl Into<String>) -> Result<T, FormulaError> {
        Err(FormulaError::Syntax { line: p.line, column: p.column, message: message.into() })
    }

    fn violation<T>(&self, pos: Pos, message: impl Into<String>) -> Result<T, FormulaError> {
        Err(FormulaError::Dialect {
            line: pos.line,
            column: pos.column,
            dialect: self.dialect,
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), FormulaError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.syntax(format!("expected {}, found {}", tok.describe(), self.peek().describe()))
        }
    }

    fn formula(&mut self) -> Result<Formula, FormulaError> {
        let left = self.implies()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let right = self.formula()?;
            return Ok(Formula::binary(Connective::Iff, left, right));
        }
        Ok(left)
    }

    fn implies(&mut self) -> Result<Formula, FormulaError> {
        let left = self.or()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let right = self.implies()?;
            return Ok(Formula::binary(Connective::Implies, left, right));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula, FormulaError> {
        let mut left = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let right = self.and()?;
            left = Formula::binary(Connective::Or, left, right);
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Formula, FormulaError> {
        let mut left = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let right = self.unary()?;
            left = Formula::binary(Connective::And, left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Forall | Tok::Exists => {
                let q = if self.bump() == Tok::Forall { Quantifier::Forall } else { Quantifier::Exists };
                let v = self.binder()?;
                self.expect(Tok::Dot)?;
                let body = self.formula()?;
                Ok(Formula::Quant(q, v, Box::new(body)))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            _ => self.atom(),
        }
    }

    fn type_index(&mut self) -> Result<Option<u32>, FormulaError> {
        if *self.peek() != Tok::Caret {
            return Ok(None);
        }
        let pos = self.pos();
        if self.dialect != Dialect::Tst {
            return self.violation(pos, "type indices are only allowed in the tst dialect");
        }
        self.bump();
        let at = self.pos();
        match self.bump() {
            Tok::Nat(n) => Ok(Some(n)),
            other => self.syntax_at(at, format!("expected a type index after `^`, found {}", other.describe())),
        }
    }

    fn binder(&mut self) -> Result<Var, FormulaError> {
        let pos = self.pos();
        let name = match self.bump() {
            Tok::Ident(name) => name,
            other => return self.syntax_at(pos, format!("expected a variable to bind, found {}", other.describe())),
        };
        let ty = self.type_index()?;
        match self.dialect {
            Dialect::Plain => {
                if is_upper(&name) {
                    return self.violation(pos, format!("`{name}` is a constant and cannot be bound"));
                }
                Ok(Var::set(name))
            }
            Dialect::Tst => match ty {
                Some(t) => Ok(Var::typed(name, t)),
                None => self.violation(pos, format!("bound variable `{name}` needs a type index")),
            },
            Dialect::LStar => {
                if name == VBAR {
                    return self.violation(pos, "`Vbar` is a constant and cannot be bound");
                }
                Ok(if is_upper(&name) { Var::class(name) } else { Var::set(name) })
            }
        }
    }

    fn term(&mut self) -> Result<Term, FormulaError> {
        let pos = self.pos();
        let name = match self.bump() {
            Tok::Ident(name) => name,
            other => return self.syntax_at(pos, format!("expected a term, found {}", other.describe())),
        };
        if name == "P" && *self.peek() == Tok::LParen {
            if self.dialect != Dialect::LStar {
                return self.violation(pos, "the pairing term `P(s, t)` is only available in lstar");
            }
            self.bump();
            let a = self.term()?;
            self.expect(Tok::Comma)?;
            let b = self.term()?;
            self.expect(Tok::RParen)?;
            return Ok(Term::pair(a, b));
        }
        let ty = self.type_index()?;
        match self.dialect {
            Dialect::Plain => {
                if name == VBAR {
                    return self.violation(pos, "`Vbar` is only available in lstar");
                }
                Ok(if is_upper(&name) { Term::Const(name) } else { Term::Var(Var::set(name)) })
            }
            Dialect::Tst => {
                if name == VBAR {
                    return self.violation(pos, "`Vbar` is only available in lstar");
                }
                match ty {
                    Some(t) => Ok(Term::Var(Var::typed(name, t))),
                    None => self.violation(pos, format!("variable `{name}` needs a type index")),
                }
            }
            Dialect::LStar => Ok(if name == VBAR {
                Term::vbar()
            } else if is_upper(&name) {
                Term::Var(Var::class(name))
            } else {
                Term::Var(Var::set(name))
            }),
        }
    }

    fn atom(&mut self) -> Result<Formula, FormulaError> {
        let pos = self.pos();
        let left = self.term()?;
        let at = self.pos();
        let rel = match self.bump() {
            Tok::In => Rel::Mem,
            Tok::Equals => Rel::Eq,
            other => return self.syntax_at(at, format!("expected `in` or `=`, found {}", other.describe())),
        };
        let annotated = self.type_index()?;
        let right = self.term()?;
        if self.dialect == Dialect::Tst {
            check_tst_atom(rel, &left, &right, annotated).or_else(|m| self.violation(pos, m))?;
        }
        Ok(Formula::atom(rel, left, right))
    }
}

fn check_tst_atom(rel: Rel, left: &Term, right: &Term, annotated: Option<u32>) -> Result<(), String> {
    let (Term::Var(l), Term::Var(r)) = (left, right) else {
        return Err("tst atoms relate variables only".into());
    };
    let (lt, rt) = (l.ty.unwrap_or(0), r.ty.unwrap_or(0));
    if let Some(a) = annotated {
        if a != lt {
            return Err(format!("relation index {a} does not match the type {lt} of `{}`", l.name));
        }
    }
    match rel {
        Rel::Eq if lt != rt => Err(format!("ill-typed equality: {l} = {r} needs equal types")),
        Rel::Mem if lt.checked_add(1) != Some(rt) => {
            Err(format!("ill-typed membership: {l} in {r} needs the right type one above the left"))
        }
        _ => Ok(()),
    }
}

pub(crate) fn is_upper(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

/// Parses a single formula.
pub fn parse(text: &str, dialect: Dialect) -> Result<Formula, FormulaError> {
    parse_at(text, dialect, 1, 1)
}

fn parse_at(text: &str, dialect: Dialect, line: usize, column: usize) -> Result<Formula, FormulaError> {
    let toks = lex(text, Pos { line, column })?;
    let mut p = Parser { toks, at: 0, dialect };
    if *p.peek() == Tok::Eof {
        return p.syntax("empty formula");
    }
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return p.syntax(format!("unexpected {} after formula", p.peek().describe()));
    }
    Ok(f)
}

/// One formula read from a document, with the line it starts on.
#[derive(Clone, Debug)]
pub struct Item {
    pub line: usize,
    pub formula: Formula,
}

/// Splits a document into formulas and parses each one.
///
/// In line mode every non-blank, non-comment line is one formula. In multi
/// mode formulas may span lines and are separated by `;`.
pub fn parse_document(text: &str, dialect: Dialect, multi: bool) -> Vec<Result<Item, FormulaError>> {
    let mut out = Vec::new();
    if !multi {
        for (i, line) in text.lines().enumerate() {
            let trimmed = line.split('#').next().unwrap_or("").trim();
            if trimmed.is_empty() {
                continue;
            }
            out.push(parse_at(line, dialect, i + 1, 1).map(|formula| Item { line: i + 1, formula }));
        }
        return out;
    }
    let (mut line, mut column) = (1usize, 1usize);
    let mut chunk = String::new();
    let (mut start_line, mut start_col) = (1usize, 1usize);
    let mut in_comment = false;
    let flush = |chunk: &mut String, sl: usize, sc: usize, out: &mut Vec<_>| {
        let has_content = chunk
            .lines()
            .any(|l| !l.split('#').next().unwrap_or("").trim().is_empty());
        if has_content {
            let first = chunk
                .lines()
                .enumerate()
                .find(|(_, l)| !l.split('#').next().unwrap_or("").trim().is_empty())
                .map(|(i, _)| sl + i)
                .unwrap_or(sl);
            out.push(parse_at(chunk, dialect, sl, sc).map(|formula| Item { line: first, formula }));
        }
        chunk.clear();
    };
    for c in text.chars() {
        if c == '#' {
            in_comment = true;
        }
        if c == ';' && !in_comment {
            flush(&mut chunk, start_line, start_col, &mut out);
            column += 1;
            start_line = line;
            start_col = column;
            continue;
        }
        chunk.push(c);
        if c == '\n' {
            in_comment = false;
            line += 1;
            column = 1;
        } else {
            column += 1;
        }
    }
    flush(&mut chunk, start_line, start_col, &mut out);
    out
}
