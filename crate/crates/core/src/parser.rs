//! Parsing of parametric binomial ideals.
//!
//! Two input forms are accepted. The line-oriented text form:
//!
//! ```text
//! # Whitney umbrella
//! vars: x1 x2
//! params: c
//! gens:
//!   c*x2^2 - x1^2
//! ```
//!
//! where `;` may stand in for a line break, and an equivalent JSON document
//! `{"vars":[...],"params":[...],"gens":[{"lead":{..},"trail":{..},"sign":"-"}]}`.
//! An optional `field: complex` / `field: nonnegative-reals` statement (or
//! `"field"` key) selects the ground field.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::matrix::IntMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: generator is not a binomial ({message})")]
    NotBinomial { line: usize, message: String },
    #[error("line {line}: coefficients of `{generator}` do not reduce to +-1")]
    NonUnitCoefficient { line: usize, generator: String },
    #[error("line {line}: undeclared symbol `{name}`")]
    UndeclaredSymbol { line: usize, name: String },
    #[error("symbol `{name}` is declared twice")]
    DuplicateSymbol { name: String },
    #[error("at least one variable must be declared")]
    NoVariables,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Field {
    #[default]
    #[serde(rename = "complex")]
    ComplexNumbers,
    #[serde(rename = "nonnegative-reals")]
    NonnegativeReals,
}

impl Field {
    fn keyword(self) -> &'static str {
        match self {
            Field::ComplexNumbers => "complex",
            Field::NonnegativeReals => "nonnegative-reals",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    /// `z^l - z^k`
    Minus,
    /// `z^l + z^k`
    Plus,
}

/// One binomial `z^lead ± z^trail`, exponents in the fixed coordinate order
/// `(x_1..x_n, c_1..c_m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub lead: Vec<u32>,
    pub trail: Vec<u32>,
    pub sign: Sign,
}

impl Generator {
    /// `lead - trail`
    pub fn difference(&self) -> Vec<i64> {
        self.lead
            .iter()
            .zip(&self.trail)
            .map(|(&l, &k)| i64::from(l) - i64::from(k))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProblemSpec {
    pub vars: Vec<String>,
    pub params: Vec<String>,
    pub gens: Vec<Generator>,
    pub field: Field,
}

/// A common monomial factor divided out of a generator during parsing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalization {
    pub generator: usize,
    pub removed: Vec<u32>,
}

impl ProblemSpec {
    pub fn n(&self) -> usize {
        self.vars.len()
    }

    pub fn m(&self) -> usize {
        self.params.len()
    }

    pub fn num_coords(&self) -> usize {
        self.vars.len() + self.params.len()
    }

    /// Coordinate names, variables first.
    pub fn labels(&self) -> Vec<String> {
        self.vars.iter().chain(&self.params).cloned().collect()
    }

    pub fn has_plus_generators(&self) -> bool {
        self.gens.iter().any(|g| g.sign == Sign::Plus)
    }

    /// Builds a pure-difference ideal from exponent difference rows: each row
    /// `b` becomes `z^{b+} - z^{b-}`.
    pub fn from_difference_rows(vars: Vec<String>, params: Vec<String>, rows: &[Vec<i64>]) -> Self {
        let gens = rows
            .iter()
            .map(|b| Generator {
                lead: b.iter().map(|&x| x.max(0) as u32).collect(),
                trail: b.iter().map(|&x| (-x).max(0) as u32).collect(),
                sign: Sign::Minus,
            })
            .collect();
        ProblemSpec {
            vars,
            params,
            gens,
            field: Field::ComplexNumbers,
        }
    }

    /// The r x (n+m) matrix whose i-th row is `lead_i - trail_i`.
    pub fn exponent_matrix(&self) -> IntMatrix {
        let rows: Vec<Vec<i64>> = self.gens.iter().map(Generator::difference).collect();
        IntMatrix::from_rows_with_cols(&rows, self.num_coords())
    }

    /// Hex SHA-256 of the canonical text rendering.
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.to_string().as_bytes());
        hash.iter().fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }

    pub fn render_monomial(&self, exps: &[u32]) -> String {
        render_monomial(&self.labels(), exps.iter().map(|&e| BigInt::from(e)))
    }

    pub fn render_generator(&self, g: &Generator) -> String {
        let op = match g.sign {
            Sign::Minus => '-',
            Sign::Plus => '+',
        };
        format!(
            "{} {op} {}",
            self.render_monomial(&g.lead),
            self.render_monomial(&g.trail)
        )
    }
}

/// Renders `prod labels[i]^exps[i]` as `a^2*b`, or `1` for the empty product.
pub(crate) fn render_monomial<I>(labels: &[String], exps: I) -> String
where
    I: IntoIterator<Item = BigInt>,
{
    let mut parts = Vec::new();
    for (name, e) in labels.iter().zip(exps) {
        if e == BigInt::from(0) {
            continue;
        }
        if e == BigInt::from(1) {
            parts.push(name.clone());
        } else {
            parts.push(format!("{name}^{e}"));
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vars: {}", self.vars.join(" "))?;
        writeln!(f, "params: {}", self.params.join(" "))?;
        if self.field != Field::ComplexNumbers {
            writeln!(f, "field: {}", self.field.keyword())?;
        }
        writeln!(f, "gens:")?;
        for g in &self.gens {
            writeln!(f, "  {}", self.render_generator(g))?;
        }
        Ok(())
    }
}

/// Parses either input form and normalizes the generators.
pub fn parse_input(text: &str) -> Result<ProblemSpec, ParseError> {
    parse_input_logged(text).map(|(spec, _)| spec)
}

/// Like [`parse_input`], also returning the common factors removed from each
/// generator.
pub fn parse_input_logged(text: &str) -> Result<(ProblemSpec, Vec<Normalization>), ParseError> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}

struct Declarations {
    vars: Vec<String>,
    params: Vec<String>,
    field: Field,
    index: HashMap<String, usize>,
}

impl Declarations {
    fn build(vars: Vec<String>, params: Vec<String>, field: Field) -> Result<Self, ParseError> {
        if vars.is_empty() {
            return Err(ParseError::NoVariables);
        }
        let mut index = HashMap::new();
        for (i, name) in vars.iter().chain(&params).enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(ParseError::DuplicateSymbol { name: name.clone() });
            }
        }
        Ok(Declarations {
            vars,
            params,
            field,
            index,
        })
    }

    fn width(&self) -> usize {
        self.vars.len() + self.params.len()
    }
}

/// A signed term `coef * monomial` as read from the input.
struct Term {
    coef: BigInt,
    exps: Vec<u32>,
}

fn assemble(
    decl: Declarations,
    raw: Vec<(usize, String, Vec<Term>)>,
) -> Result<(ProblemSpec, Vec<Normalization>), ParseError> {
    let mut gens = Vec::with_capacity(raw.len());
    let mut log = Vec::new();
    for (idx, (line, source, terms)) in raw.into_iter().enumerate() {
        if terms.len() != 2 {
            return Err(ParseError::NotBinomial {
                line,
                message: format!("{} terms", terms.len()),
            });
        }
        let [mut first, mut second]: [Term; 2] = terms.try_into().ok().expect("two terms");
        if first.coef == BigInt::from(0) || second.coef == BigInt::from(0) {
            return Err(ParseError::NotBinomial {
                line,
                message: "zero coefficient".into(),
            });
        }
        if first.coef.magnitude() != second.coef.magnitude() {
            return Err(ParseError::NonUnitCoefficient {
                line,
                generator: source,
            });
        }
        let removed: Vec<u32> = first
            .exps
            .iter()
            .zip(&second.exps)
            .map(|(a, b)| *a.min(b))
            .collect();
        for (e, r) in first.exps.iter_mut().zip(&removed) {
            *e -= r;
        }
        for (e, r) in second.exps.iter_mut().zip(&removed) {
            *e -= r;
        }
        if first.exps == second.exps {
            return Err(ParseError::NotBinomial {
                line,
                message: "both monomials coincide".into(),
            });
        }
        if removed.iter().any(|&r| r > 0) {
            log.push(Normalization {
                generator: idx,
                removed,
            });
        }
        let sign = if first.coef.sign() == second.coef.sign() {
            Sign::Plus
        } else {
            Sign::Minus
        };
        gens.push(Generator {
            lead: first.exps,
            trail: second.exps,
            sign,
        });
    }
    Ok((
        ProblemSpec {
            vars: decl.vars,
            params: decl.params,
            gens,
            field: decl.field,
        },
        log,
    ))
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// A statement of the text form with its source position.
struct Statement<'a> {
    line: usize,
    column: usize,
    text: &'a str,
}

fn statements(text: &str) -> Vec<Statement<'_>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let mut offset = 0;
        for piece in line.split(';') {
            let trimmed = piece.trim();
            if !trimmed.is_empty() {
                let lead = piece.len() - piece.trim_start().len();
                out.push(Statement {
                    line: lineno + 1,
                    column: offset + lead + 1,
                    text: trimmed,
                });
            }
            offset += piece.len() + 1;
        }
    }
    out
}

fn parse_names(stmt: &Statement<'_>, body: &str, body_col: usize) -> Result<Vec<String>, ParseError> {
    let mut names = Vec::new();
    let mut col = body_col;
    for tok in body.split_whitespace() {
        let at = body[col - body_col..].find(tok).map_or(col, |p| col + p);
        if !tok.starts_with(is_ident_start) || !tok.chars().all(is_ident_char) {
            return Err(ParseError::Syntax {
                line: stmt.line,
                column: at,
                message: format!("invalid name `{tok}`"),
            });
        }
        names.push(tok.to_string());
        col = at + tok.len();
    }
    Ok(names)
}

fn parse_text(text: &str) -> Result<(ProblemSpec, Vec<Normalization>), ParseError> {
    let mut vars = None;
    let mut params = None;
    let mut field = Field::ComplexNumbers;
    let mut gen_lines: Vec<&Statement<'_>> = Vec::new();
    let mut in_gens = false;
    let stmts = statements(text);

    for stmt in &stmts {
        let keyword = ["vars:", "params:", "gens:", "field:"]
            .into_iter()
            .find(|k| stmt.text.starts_with(k));
        let Some(keyword) = keyword else {
            if in_gens {
                gen_lines.push(stmt);
                continue;
            }
            return Err(ParseError::Syntax {
                line: stmt.line,
                column: stmt.column,
                message: "expected `vars:`, `params:`, `field:` or `gens:`".into(),
            });
        };
        let rest = &stmt.text[keyword.len()..];
        let body = rest.trim_start();
        let body_col = stmt.column + keyword.len() + (rest.len() - body.len());
        in_gens = false;
        match keyword {
            "vars:" => vars = Some(parse_names(stmt, body, body_col)?),
            "params:" => params = Some(parse_names(stmt, body, body_col)?),
            "field:" => {
                field = match body {
                    "complex" | "C" => Field::ComplexNumbers,
                    "nonnegative-reals" | "R>=0" => Field::NonnegativeReals,
                    other => {
                        return Err(ParseError::Syntax {
                            line: stmt.line,
                            column: body_col,
                            message: format!("unknown field `{other}`"),
                        })
                    }
                }
            }
            _ => {
                in_gens = true;
                if !body.is_empty() {
                    // An inline first generator after `gens:`.
                    gen_lines.push(stmt);
                }
            }
        }
    }

    let Some(vars) = vars else {
        return Err(ParseError::NoVariables);
    };
    let decl = Declarations::build(vars, params.unwrap_or_default(), field)?;
    let mut raw = Vec::with_capacity(gen_lines.len());
    for stmt in gen_lines {
        let (text, col) = match stmt.text.strip_prefix("gens:") {
            Some(rest) => {
                let body = rest.trim_start();
                (body, stmt.column + 5 + (rest.len() - body.len()))
            }
            None => (stmt.text, stmt.column),
        };
        let terms = PolyParser::new(&decl, text, stmt.line, col).parse()?;
        raw.push((stmt.line, text.to_string(), terms));
    }
    assemble(decl, raw)
}

/// Recursive-descent reader for `[-]mono (+|-) mono ...`.
struct PolyParser<'a> {
    decl: &'a Declarations,
    src: &'a str,
    pos: usize,
    line: usize,
    col0: usize,
}

impl<'a> PolyParser<'a> {
    fn new(decl: &'a Declarations, src: &'a str, line: usize, col0: usize) -> Self {
        PolyParser {
            decl,
            src,
            pos: 0,
            line,
            col0,
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            column: self.col0 + self.pos,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.src[start..self.pos])
    }

    fn parse(mut self) -> Result<Vec<Term>, ParseError> {
        let mut terms = Vec::new();
        let mut negative = self.eat('-');
        if !negative {
            self.eat('+');
        }
        loop {
            let mut term = self.term()?;
            if negative {
                term.coef = -term.coef;
            }
            terms.push(term);
            self.skip_ws();
            match self.peek() {
                None => break,
                Some('+') => negative = false,
                Some('-') => negative = true,
                Some(c) => return Err(self.error(format!("unexpected `{c}`"))),
            }
            self.pos += 1;
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut term = Term {
            coef: BigInt::from(1),
            exps: vec![0; self.decl.width()],
        };
        loop {
            self.factor(&mut term)?;
            if !self.eat('*') {
                return Ok(term);
            }
        }
    }

    fn factor(&mut self, term: &mut Term) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let lit = self.digits().expect("digit present");
                term.coef *= lit.parse::<BigInt>().expect("decimal literal");
                Ok(())
            }
            Some(c) if is_ident_start(c) => {
                let start = self.pos;
                while self.peek().is_some_and(is_ident_char) {
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                let Some(&idx) = self.decl.index.get(name) else {
                    return Err(ParseError::UndeclaredSymbol {
                        line: self.line,
                        name: name.to_string(),
                    });
                };
                let mut exp = 1u32;
                if self.eat('^') {
                    self.skip_ws();
                    let lit = self
                        .digits()
                        .ok_or_else(|| self.error("expected a positive integer exponent"))?;
                    exp = lit
                        .parse()
                        .ok()
                        .filter(|&e: &u32| e > 0)
                        .ok_or_else(|| self.error("exponent must be a positive integer"))?;
                }
                term.exps[idx] += exp;
                Ok(())
            }
            Some(c) => Err(self.error(format!("unexpected `{c}`"))),
            None => Err(self.error("unexpected end of generator")),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonSpec {
    vars: Vec<String>,
    #[serde(default)]
    params: Vec<String>,
    #[serde(default)]
    gens: Vec<JsonGenerator>,
    #[serde(default)]
    field: Field,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonGenerator {
    lead: BTreeMap<String, u32>,
    trail: BTreeMap<String, u32>,
    sign: String,
}

fn parse_json(text: &str) -> Result<(ProblemSpec, Vec<Normalization>), ParseError> {
    let doc: JsonSpec = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let decl = Declarations::build(doc.vars, doc.params, doc.field)?;
    let mut raw = Vec::with_capacity(doc.gens.len());
    for (i, g) in doc.gens.into_iter().enumerate() {
        let line = i + 1;
        let mono = |m: &BTreeMap<String, u32>| -> Result<Vec<u32>, ParseError> {
            let mut exps = vec![0; decl.width()];
            for (name, &e) in m {
                let idx = *decl.index.get(name).ok_or_else(|| ParseError::UndeclaredSymbol {
                    line,
                    name: name.clone(),
                })?;
                exps[idx] += e;
            }
            Ok(exps)
        };
        let second_coef = match g.sign.as_str() {
            "-" => BigInt::from(-1),
            "+" => BigInt::from(1),
            other => {
                return Err(ParseError::Syntax {
                    line,
                    column: 0,
                    message: format!("sign must be \"+\" or \"-\", got {other:?}"),
                })
            }
        };
        let terms = vec![
            Term {
                coef: BigInt::from(1),
                exps: mono(&g.lead)?,
            },
            Term {
                coef: second_coef,
                exps: mono(&g.trail)?,
            },
        ];
        raw.push((line, format!("generator {line}"), terms));
    }
    assemble(decl, raw)
}
