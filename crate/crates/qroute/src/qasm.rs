//! OpenQASM 2.0 subset reader and writer.
//!
//! Accepted: one `qreg`, `include "qelib1.inc"`, the gates `h x t tdg rz rx
//! cx cp cu1 swap ccx`, and `creg`/`barrier`/`measure` (parsed, then
//! dropped). `ccx` is expanded into the 15-gate Clifford+T sequence.
//!
//! A line comment reading exactly `// routing` marks the following `swap`
//! as a router-inserted swap.

use std::fmt::{self, Write as _};

use qroute_core::generators::toffoli;
use qroute_core::{Circuit, Gate, QubitId};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QasmErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unsupported gate: {0}")]
    UnsupportedGate(String),
    #[error("unsupported statement: {0}")]
    UnsupportedStatement(String),
    #[error("unsupported include: {0}")]
    UnsupportedInclude(String),
    #[error("unsupported OpenQASM version {0} (expected 2.0)")]
    Version(String),
    #[error("undeclared qubit {0}")]
    UndeclaredQubit(String),
    #[error("missing qreg declaration")]
    MissingQreg,
    #[error("duplicate qreg declaration")]
    DuplicateQreg,
    #[error("gate {0} applied to the same qubit twice")]
    DuplicateOperand(String),
    #[error("non-finite angle")]
    NonFiniteAngle,
    #[error("routing marker must precede a swap")]
    MisplacedRoutingMarker,
}

/// A parse failure with its 1-based source position.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {col}: {kind}")]
pub struct QasmError {
    pub line: usize,
    pub col: usize,
    pub kind: QasmErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    Real(f64, String),
    Str(String),
    Sym(char),
    Arrow,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Int(i) => write!(f, "'{i}'"),
            Tok::Real(_, s) => write!(f, "'{s}'"),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::Sym(c) => write!(f, "'{c}'"),
            Tok::Arrow => f.write_str("'->'"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
    /// Preceded by a `// routing` comment line.
    routing: bool,
}

/// Tokens plus the name from a `// circuit: NAME` comment, if any.
fn lex(src: &str) -> Result<(Vec<Token>, Option<String>), QasmError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut name = None;
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut marker = false;
    let err = |line, col, msg: String| QasmError { line, col, kind: QasmErrorKind::Syntax(msg) };

    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let bump = |i: &mut usize, col: &mut usize, n: usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            bump(&mut i, &mut col, 1);
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            let start = i + 2;
            let mut end = start;
            while end < chars.len() && chars[end] != '\n' {
                end += 1;
            }
            let text: String = chars[start..end].iter().collect();
            let text = text.trim();
            if text == "routing" {
                marker = true;
            } else if let Some(n) = text.strip_prefix("circuit:") {
                name.get_or_insert_with(|| n.trim().to_string());
            }
            col += end - i;
            i = end;
            continue;
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            Tok::Ident(chars[start..i].iter().collect())
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) {
            let start = i;
            let mut real = false;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                real = true;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    real = true;
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            col += i - start;
            let text: String = chars[start..i].iter().collect();
            if real {
                let v = text
                    .parse::<f64>()
                    .map_err(|_| err(tl, tc, format!("bad number '{text}'")))?;
                Tok::Real(v, text)
            } else {
                let v = text
                    .parse::<u64>()
                    .map_err(|_| err(tl, tc, format!("integer '{text}' too large")))?;
                Tok::Int(v)
            }
        } else if c == '"' {
            let start = i + 1;
            let mut end = start;
            while end < chars.len() && chars[end] != '"' && chars[end] != '\n' {
                end += 1;
            }
            if end >= chars.len() || chars[end] != '"' {
                return Err(err(tl, tc, "unterminated string".into()));
            }
            col += end + 1 - i;
            i = end + 1;
            Tok::Str(chars[start..end].iter().collect())
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            bump(&mut i, &mut col, 2);
            Tok::Arrow
        } else if "[](),;+-*/".contains(c) {
            bump(&mut i, &mut col, 1);
            Tok::Sym(c)
        } else {
            return Err(err(tl, tc, format!("unexpected character {c:?}")));
        };
        out.push(Token { tok, line: tl, col: tc, routing: std::mem::take(&mut marker) });
    }
    out.push(Token { tok: Tok::Eof, line, col, routing: marker });
    Ok((out, name))
}

const MAX_EXPR_DEPTH: usize = 64;

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    qreg: Option<(String, usize)>,
    circuit: Circuit,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, at: &Token, kind: QasmErrorKind) -> Result<T, QasmError> {
        Err(QasmError { line: at.line, col: at.col, kind })
    }

    fn syntax<T>(&self, at: &Token, msg: impl Into<String>) -> Result<T, QasmError> {
        self.fail(at, QasmErrorKind::Syntax(msg.into()))
    }

    fn expect_sym(&mut self, c: char) -> Result<(), QasmError> {
        let t = self.next();
        if t.tok == Tok::Sym(c) {
            Ok(())
        } else {
            self.syntax(&t, format!("expected '{c}', found {}", t.tok))
        }
    }

    fn expect_ident(&mut self) -> Result<(String, Token), QasmError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t)),
            other => self.syntax(&t, format!("expected identifier, found {other}")),
        }
    }

    fn expect_int(&mut self) -> Result<u64, QasmError> {
        let t = self.next();
        match t.tok {
            Tok::Int(v) => Ok(v),
            ref other => self.syntax(&t, format!("expected integer, found {other}")),
        }
    }

    fn header(&mut self) -> Result<(), QasmError> {
        let (kw, t) = self.expect_ident()?;
        if kw != "OPENQASM" {
            return self.syntax(&t, "program must start with 'OPENQASM 2.0;'");
        }
        let v = self.next();
        match &v.tok {
            Tok::Real(x, _) if *x == 2.0 => {}
            Tok::Real(_, s) => return self.fail(&v, QasmErrorKind::Version(s.clone())),
            Tok::Int(i) => return self.fail(&v, QasmErrorKind::Version(i.to_string())),
            other => return self.syntax(&v, format!("expected version number, found {other}")),
        }
        self.expect_sym(';')
    }

    fn statement(&mut self) -> Result<(), QasmError> {
        let (name, t) = self.expect_ident()?;
        if t.routing && name != "swap" {
            return self.fail(&t, QasmErrorKind::MisplacedRoutingMarker);
        }
        match name.as_str() {
            "include" => {
                let s = self.next();
                match &s.tok {
                    Tok::Str(f) if f == "qelib1.inc" => {}
                    Tok::Str(f) => return self.fail(&s, QasmErrorKind::UnsupportedInclude(f.clone())),
                    other => return self.syntax(&s, format!("expected file name, found {other}")),
                }
                self.expect_sym(';')
            }
            "qreg" => {
                let (reg, _) = self.expect_ident()?;
                self.expect_sym('[')?;
                let size_tok = self.peek().clone();
                let size = self.expect_int()?;
                self.expect_sym(']')?;
                self.expect_sym(';')?;
                if self.qreg.is_some() {
                    return self.fail(&t, QasmErrorKind::DuplicateQreg);
                }
                if size == 0 || size > u32::MAX as u64 {
                    return self.syntax(&size_tok, format!("invalid register size {size}"));
                }
                self.qreg = Some((reg, size as usize));
                self.circuit.num_qubits = size as usize;
                Ok(())
            }
            "creg" => {
                self.expect_ident()?;
                self.expect_sym('[')?;
                self.expect_int()?;
                self.expect_sym(']')?;
                self.expect_sym(';')
            }
            "barrier" => {
                loop {
                    self.expect_ident()?;
                    if self.peek().tok == Tok::Sym('[') {
                        self.next();
                        self.expect_int()?;
                        self.expect_sym(']')?;
                    }
                    if self.peek().tok == Tok::Sym(',') {
                        self.next();
                    } else {
                        break;
                    }
                }
                self.expect_sym(';')
            }
            "measure" => {
                self.qubit_arg()?;
                let a = self.next();
                if a.tok != Tok::Arrow {
                    return self.syntax(&a, format!("expected '->', found {}", a.tok));
                }
                self.expect_ident()?;
                self.expect_sym('[')?;
                self.expect_int()?;
                self.expect_sym(']')?;
                self.expect_sym(';')
            }
            "gate" | "opaque" | "if" | "reset" => {
                self.fail(&t, QasmErrorKind::UnsupportedStatement(name))
            }
            _ => self.gate(name, t),
        }
    }

    fn qubit_arg(&mut self) -> Result<usize, QasmError> {
        let (reg, t) = self.expect_ident()?;
        self.expect_sym('[')?;
        let idx = self.expect_int()?;
        self.expect_sym(']')?;
        let Some((declared, size)) = &self.qreg else {
            return self.fail(&t, QasmErrorKind::MissingQreg);
        };
        if reg != *declared || idx >= *size as u64 {
            return self.fail(&t, QasmErrorKind::UndeclaredQubit(format!("{reg}[{idx}]")));
        }
        Ok(idx as usize)
    }

    fn gate(&mut self, name: String, t: Token) -> Result<(), QasmError> {
        let (n_params, n_qubits) = match name.as_str() {
            "h" | "x" | "t" | "tdg" => (0, 1),
            "rz" | "rx" => (1, 1),
            "cx" | "swap" => (0, 2),
            "cp" | "cu1" => (1, 2),
            "ccx" => (0, 3),
            _ => return self.fail(&t, QasmErrorKind::UnsupportedGate(name)),
        };
        let mut params = Vec::new();
        if self.peek().tok == Tok::Sym('(') {
            self.next();
            if self.peek().tok != Tok::Sym(')') {
                loop {
                    params.push(self.expr(0)?);
                    if self.peek().tok == Tok::Sym(',') {
                        self.next();
                    } else {
                        break;
                    }
                }
            }
            self.expect_sym(')')?;
        }
        if params.len() != n_params {
            return self.syntax(&t, format!("{name} takes {n_params} parameter(s), got {}", params.len()));
        }
        if params.iter().any(|p| !p.is_finite()) {
            return self.fail(&t, QasmErrorKind::NonFiniteAngle);
        }
        let mut qs = vec![self.qubit_arg()?];
        while self.peek().tok == Tok::Sym(',') {
            self.next();
            qs.push(self.qubit_arg()?);
        }
        self.expect_sym(';')?;
        if qs.len() != n_qubits {
            return self.syntax(&t, format!("{name} takes {n_qubits} qubit(s), got {}", qs.len()));
        }
        for i in 0..qs.len() {
            if qs[i + 1..].contains(&qs[i]) {
                return self.fail(&t, QasmErrorKind::DuplicateOperand(name));
            }
        }
        let angle = params.first().copied().unwrap_or(0.0);
        let gate = match name.as_str() {
            "h" => Gate::h(qs[0]),
            "x" => Gate::x(qs[0]),
            "t" => Gate::t(qs[0]),
            "tdg" => Gate::tdg(qs[0]),
            "rz" => Gate::rz(angle, qs[0]),
            "rx" => Gate::rx(angle, qs[0]),
            "cx" => Gate::cx(qs[0], qs[1]),
            "cp" | "cu1" => Gate::cp(angle, qs[0], qs[1]),
            "swap" if t.routing => Gate::routing_swap(qs[0], qs[1]),
            "swap" => Gate::swap(qs[0], qs[1]),
            "ccx" => {
                let seq = toffoli(qs[0], qs[1], qs[2]).expect("operands checked distinct");
                self.circuit.gates.extend(seq);
                return Ok(());
            }
            _ => unreachable!("gate table covers every accepted name"),
        };
        self.circuit.push(gate);
        Ok(())
    }

    // expr := term (('+'|'-') term)* ; term := unary (('*'|'/') unary)*
    fn expr(&mut self, depth: usize) -> Result<f64, QasmError> {
        let mut v = self.term(depth)?;
        loop {
            match self.peek().tok {
                Tok::Sym('+') => {
                    self.next();
                    v += self.term(depth)?;
                }
                Tok::Sym('-') => {
                    self.next();
                    v -= self.term(depth)?;
                }
                _ => return Ok(v),
            }
        }
    }

    fn term(&mut self, depth: usize) -> Result<f64, QasmError> {
        let mut v = self.unary(depth)?;
        loop {
            match self.peek().tok {
                Tok::Sym('*') => {
                    self.next();
                    v *= self.unary(depth)?;
                }
                Tok::Sym('/') => {
                    self.next();
                    v /= self.unary(depth)?;
                }
                _ => return Ok(v),
            }
        }
    }

    fn unary(&mut self, depth: usize) -> Result<f64, QasmError> {
        if depth > MAX_EXPR_DEPTH {
            let t = self.peek().clone();
            return self.syntax(&t, "expression nested too deeply");
        }
        let t = self.next();
        match &t.tok {
            Tok::Sym('-') => Ok(-self.unary(depth + 1)?),
            Tok::Sym('+') => self.unary(depth + 1),
            Tok::Int(i) => Ok(*i as f64),
            Tok::Real(x, _) => Ok(*x),
            Tok::Ident(s) if s == "pi" => Ok(std::f64::consts::PI),
            Tok::Sym('(') => {
                let v = self.expr(depth + 1)?;
                self.expect_sym(')')?;
                Ok(v)
            }
            other => self.syntax(&t, format!("expected expression, found {other}")),
        }
    }
}

/// Parses a program of the supported subset into a validated circuit.
pub fn parse_qasm(src: &str) -> Result<Circuit, QasmError> {
    let (toks, name) = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        qreg: None,
        circuit: Circuit::new(name.unwrap_or_default(), 0),
    };
    p.header()?;
    while p.peek().tok != Tok::Eof {
        p.statement()?;
    }
    let eof = p.peek().clone();
    if eof.routing {
        return p.fail(&eof, QasmErrorKind::MisplacedRoutingMarker);
    }
    if p.qreg.is_none() {
        return p.fail(&eof, QasmErrorKind::MissingQreg);
    }
    debug_assert!(p.circuit.validate().is_ok());
    Ok(p.circuit)
}

/// Serializes `c`; angles carry 17 significant digits so the text parses
/// back to bit-identical values.
pub fn emit_qasm(c: &Circuit) -> String {
    let mut s = String::with_capacity(32 * c.len() + 64);
    s.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    if !c.name.is_empty() {
        let _ = writeln!(s, "// circuit: {}", c.name);
    }
    let _ = writeln!(s, "qreg q[{}];", c.num_qubits);
    for g in &c.gates {
        if g.is_routing() {
            s.push_str("// routing\n");
        }
        s.push_str(g.kind().name());
        if let Some(a) = g.kind().angle() {
            let _ = write!(s, "({a:.16e})");
        }
        for (i, QubitId(q)) in g.qubits().iter().enumerate() {
            s.push_str(if i == 0 { " " } else { "," });
            let _ = write!(s, "q[{q}]");
        }
        s.push_str(";\n");
    }
    s
}
