//! Line-oriented parser with name, kind and static dimension checks.

use std::collections::HashMap;

use fwlab_core::numerics::MAX_DIM;
use fwlab_core::C64;

use crate::ast::{Declaration, FrameworkName, Item, Query, ScenarioAst, Statement};
use crate::error::{ErrorKind, SourceError, MAX_ERRORS};
use crate::lexer::{lex_line, Tok, Token};

/// Operators available without a declaration, all 2×2.
pub const CONSTANTS: [&str; 5] = ["I2", "X", "Y", "Z", "H"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NameKind {
    Space,
    Op,
    State,
    Pdi,
    Family,
    Channel,
}

impl NameKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            NameKind::Space => "space",
            NameKind::Op => "operator",
            NameKind::State => "state",
            NameKind::Pdi => "pdi",
            NameKind::Family => "family",
            NameKind::Channel => "channel",
        }
    }
}

/// Row entries and the column of the row's opening `[`.
type Row = (Vec<C64>, usize);

#[derive(Debug, Clone)]
struct Symbol {
    kind: NameKind,
    dim: Option<usize>,
    line: usize,
    builtin: bool,
    used: bool,
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn peek_tok(&self) -> Option<&'a Tok> {
        self.peek().map(|t| &t.tok)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    /// Column for an error at the current position; at the end of the line
    /// this is the last token, so the position stays inside the source.
    fn here(&self) -> usize {
        self.peek()
            .or_else(|| self.toks.last())
            .map(|t| t.column)
            .unwrap_or(1)
    }

    fn error(&self, message: impl Into<String>) -> SourceError {
        SourceError::new(ErrorKind::Parse, self.line, self.here(), message)
    }

    fn unexpected(&self, expected: &str) -> SourceError {
        match self.peek() {
            Some(t) => self.error(format!("expected {expected}, found {}", t.tok.describe())),
            None => self.error(format!("expected {expected} at end of line")),
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, usize), SourceError> {
        match self.peek() {
            Some(Token {
                tok: Tok::Ident(s),
                column,
            }) => {
                self.pos += 1;
                Ok((s.clone(), *column))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), SourceError> {
        match self.peek_tok() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.unexpected(&format!("`{kw}`"))),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<usize, SourceError> {
        match self.peek() {
            Some(t) if t.tok == tok => {
                self.pos += 1;
                Ok(t.column)
            }
            _ => Err(self.unexpected(&tok.describe())),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek_tok() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self, what: &str) -> Result<(usize, usize), SourceError> {
        match self.peek() {
            Some(Token {
                tok:
                    Tok::Number {
                        value,
                        integer: true,
                    },
                column,
            }) if *value <= u32::MAX as f64 => {
                self.pos += 1;
                Ok((*value as usize, *column))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn finish(&self) -> Result<(), SourceError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of line"))
        }
    }

    fn complex(&mut self) -> Result<C64, SourceError> {
        let mut sign = 1.0;
        if self.eat(&Tok::Minus) {
            sign = -1.0;
        } else {
            self.eat(&Tok::Plus);
        }
        let re = match self.peek_tok() {
            Some(Tok::Number { value, .. }) => {
                self.pos += 1;
                sign * value
            }
            Some(Tok::Imag(v)) => {
                self.pos += 1;
                return Ok(C64::new(0.0, sign * v));
            }
            Some(Tok::Ident(s)) if s == "i" => {
                self.pos += 1;
                return Ok(C64::new(0.0, sign));
            }
            _ => return Err(self.unexpected("a complex number")),
        };
        let im_sign = match self.peek_tok() {
            Some(Tok::Plus) => 1.0,
            Some(Tok::Minus) => -1.0,
            _ => return Ok(C64::new(re, 0.0)),
        };
        let im = match self.toks.get(self.pos + 1).map(|t| &t.tok) {
            Some(Tok::Imag(v)) => *v,
            Some(Tok::Ident(s)) if s == "i" => 1.0,
            _ => return Ok(C64::new(re, 0.0)),
        };
        self.pos += 2;
        Ok(C64::new(re, im_sign * im))
    }

    /// `[a, b, ...]`, returning the entries and the column of `[`.
    fn vector(&mut self) -> Result<(Vec<C64>, usize), SourceError> {
        let open = self.expect(Tok::LBracket)?;
        let mut out = Vec::new();
        if self.peek_tok() == Some(&Tok::RBracket) {
            return Err(self.error("empty list"));
        }
        loop {
            if self.at_end() {
                return Err(SourceError::new(
                    ErrorKind::Parse,
                    self.line,
                    open,
                    "unclosed `[`",
                ));
            }
            out.push(self.complex()?);
            match self.peek_tok() {
                Some(Tok::Comma) => self.pos += 1,
                Some(Tok::RBracket) => {
                    self.pos += 1;
                    return Ok((out, open));
                }
                None => {
                    return Err(SourceError::new(
                        ErrorKind::Parse,
                        self.line,
                        open,
                        "unclosed `[`",
                    ))
                }
                _ => return Err(self.unexpected("`,` or `]`")),
            }
        }
    }

    /// `[[..], [..], ...]`, returning rows with the column of each row's `[`.
    fn matrix(&mut self) -> Result<(Vec<Row>, usize), SourceError> {
        let open = self.expect(Tok::LBracket)?;
        let mut rows = Vec::new();
        loop {
            if self.at_end() {
                return Err(SourceError::new(
                    ErrorKind::Parse,
                    self.line,
                    open,
                    "unclosed `[`",
                ));
            }
            rows.push(self.vector()?);
            match self.peek_tok() {
                Some(Tok::Comma) => self.pos += 1,
                Some(Tok::RBracket) => {
                    self.pos += 1;
                    return Ok((rows, open));
                }
                None => {
                    return Err(SourceError::new(
                        ErrorKind::Parse,
                        self.line,
                        open,
                        "unclosed `[`",
                    ))
                }
                _ => return Err(self.unexpected("`,` or `]`")),
            }
        }
    }

    /// `{ a, b, ... }` of names with their columns.
    fn name_set(&mut self, what: &str) -> Result<Vec<(String, usize)>, SourceError> {
        let open = self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        loop {
            if self.at_end() {
                return Err(SourceError::new(
                    ErrorKind::Parse,
                    self.line,
                    open,
                    "unclosed `{`",
                ));
            }
            out.push(self.ident(what)?);
            match self.peek_tok() {
                Some(Tok::Comma) => self.pos += 1,
                Some(Tok::RBrace) => {
                    self.pos += 1;
                    return Ok(out);
                }
                None => {
                    return Err(SourceError::new(
                        ErrorKind::Parse,
                        self.line,
                        open,
                        "unclosed `{`",
                    ))
                }
                _ => return Err(self.unexpected("`,` or `}`")),
            }
        }
    }

    /// `{ j, k, ... }` of block indices; may be empty.
    fn index_set(&mut self) -> Result<Vec<usize>, SourceError> {
        let open = self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        if self.eat(&Tok::RBrace) {
            return Ok(out);
        }
        loop {
            if self.at_end() {
                return Err(SourceError::new(
                    ErrorKind::Parse,
                    self.line,
                    open,
                    "unclosed `{`",
                ));
            }
            out.push(self.integer("a block index")?.0);
            match self.peek_tok() {
                Some(Tok::Comma) => self.pos += 1,
                Some(Tok::RBrace) => {
                    self.pos += 1;
                    return Ok(out);
                }
                None => {
                    return Err(SourceError::new(
                        ErrorKind::Parse,
                        self.line,
                        open,
                        "unclosed `{`",
                    ))
                }
                _ => return Err(self.unexpected("`,` or `}`")),
            }
        }
    }
}

/// A name reference with its position, checked after the line parses.
struct Ref {
    name: String,
    column: usize,
    kind: NameKind,
}

/// Static dimension constraint: every listed reference must have the same
/// dimension (and `fixed`, if given).
struct SameDim {
    refs: Vec<usize>,
    fixed: Option<(usize, &'static str)>,
}

struct Parsed {
    statement: Statement,
    anchor: usize,
    refs: Vec<Ref>,
    same_dim: Vec<SameDim>,
    /// Name being declared, its column and kind.
    declares: Option<(String, usize, NameKind)>,
    /// Dimension a literal declaration introduces, with the literal column.
    literal_dim: Option<(usize, usize)>,
    /// Non-square or ragged literal rows: (column, message).
    shape_error: Option<(usize, String)>,
    new_space: Option<usize>,
}

impl Parsed {
    fn new(statement: Statement, anchor: usize) -> Self {
        Self {
            statement,
            anchor,
            refs: Vec::new(),
            same_dim: Vec::new(),
            declares: None,
            literal_dim: None,
            shape_error: None,
            new_space: None,
        }
    }

    fn add_ref(&mut self, (name, column): (String, usize), kind: NameKind) -> usize {
        self.refs.push(Ref { name, column, kind });
        self.refs.len() - 1
    }
}

fn parse_statement(cur: &mut Cursor) -> Result<Parsed, SourceError> {
    let (kw, kw_col) = cur.ident("a declaration or query keyword")?;
    let parsed = match kw.as_str() {
        "space" => {
            let (name, col) = cur.ident("a space name")?;
            let (dim, dim_col) = cur.integer("a dimension")?;
            cur.finish()?;
            if dim == 0 || dim > MAX_DIM {
                return Err(SourceError::new(
                    ErrorKind::Dimension,
                    cur.line,
                    dim_col,
                    format!("dimension must be between 1 and {MAX_DIM}, got {dim}"),
                ));
            }
            let mut p = Parsed::new(
                Statement::Declaration(Declaration::Space {
                    name: name.clone(),
                    dim,
                }),
                col,
            );
            p.declares = Some((name, col, NameKind::Space));
            p.new_space = Some(dim);
            p
        }
        "op" => {
            let (name, col) = cur.ident("an operator name")?;
            cur.expect(Tok::Eq)?;
            let (rows, open) = cur.matrix()?;
            cur.finish()?;
            let n = rows.len();
            let mut p = Parsed::new(
                Statement::Declaration(Declaration::Op {
                    name: name.clone(),
                    rows: rows.iter().map(|(r, _)| r.clone()).collect(),
                }),
                col,
            );
            if let Some((_, c)) = rows.iter().find(|(r, _)| r.len() != n) {
                p.shape_error = Some((
                    *c,
                    format!("operator must be square: {n} rows but a row has a different length"),
                ));
            } else if n > MAX_DIM {
                p.shape_error = Some((open, format!("dimension {n} exceeds {MAX_DIM}")));
            }
            p.literal_dim = Some((n, open));
            p.declares = Some((name, col, NameKind::Op));
            p
        }
        "state" => {
            let (name, col) = cur.ident("a state name")?;
            cur.expect(Tok::Eq)?;
            let (amps, open) = cur.vector()?;
            cur.finish()?;
            let n = amps.len();
            let mut p = Parsed::new(
                Statement::Declaration(Declaration::State {
                    name: name.clone(),
                    amplitudes: amps,
                }),
                col,
            );
            if n > MAX_DIM {
                p.shape_error = Some((open, format!("dimension {n} exceeds {MAX_DIM}")));
            }
            p.literal_dim = Some((n, open));
            p.declares = Some((name, col, NameKind::State));
            p
        }
        "pdi" => {
            let (name, col) = cur.ident("a pdi name")?;
            match cur.peek_tok() {
                Some(Tok::Ident(s)) if s == "from" => {
                    cur.pos += 1;
                    let op = cur.ident("an operator name")?;
                    cur.finish()?;
                    let mut p = Parsed::new(
                        Statement::Declaration(Declaration::PdiFrom {
                            name: name.clone(),
                            op: op.0.clone(),
                        }),
                        col,
                    );
                    let r = p.add_ref(op, NameKind::Op);
                    p.same_dim.push(SameDim {
                        refs: vec![r],
                        fixed: None,
                    });
                    p.declares = Some((name, col, NameKind::Pdi));
                    p
                }
                Some(Tok::Eq) => {
                    cur.pos += 1;
                    let blocks = cur.name_set("an operator name")?;
                    cur.finish()?;
                    let mut p = Parsed::new(
                        Statement::Declaration(Declaration::PdiBlocks {
                            name: name.clone(),
                            blocks: blocks.iter().map(|(b, _)| b.clone()).collect(),
                        }),
                        col,
                    );
                    let refs = blocks
                        .into_iter()
                        .map(|b| p.add_ref(b, NameKind::Op))
                        .collect();
                    p.same_dim.push(SameDim { refs, fixed: None });
                    p.declares = Some((name, col, NameKind::Pdi));
                    p
                }
                _ => return Err(cur.unexpected("`from` or `=`")),
            }
        }
        "family" => {
            let (name, col) = cur.ident("a family name")?;
            cur.keyword("init")?;
            let init = cur.ident("a state name")?;
            cur.keyword("steps")?;
            let mut steps = Vec::new();
            while !cur.at_end() {
                let paren = cur.eat(&Tok::LParen);
                let u = cur.ident("a unitary operator name")?;
                let f = cur.ident("a pdi name")?;
                if paren {
                    cur.expect(Tok::RParen)?;
                }
                steps.push((u, f));
            }
            if steps.is_empty() {
                return Err(cur.error("a family needs at least one `<unitary> <pdi>` step"));
            }
            let mut p = Parsed::new(
                Statement::Declaration(Declaration::Family {
                    name: name.clone(),
                    init: init.0.clone(),
                    steps: steps
                        .iter()
                        .map(|(u, f)| (u.0.clone(), f.0.clone()))
                        .collect(),
                }),
                col,
            );
            let mut refs = vec![p.add_ref(init, NameKind::State)];
            for (u, f) in steps {
                refs.push(p.add_ref(u, NameKind::Op));
                refs.push(p.add_ref(f, NameKind::Pdi));
            }
            p.same_dim.push(SameDim { refs, fixed: None });
            p.declares = Some((name, col, NameKind::Family));
            p
        }
        "channel" => {
            let (name, col) = cur.ident("a channel name")?;
            cur.keyword("kraus")?;
            let ops = cur.name_set("an operator name")?;
            cur.finish()?;
            let mut p = Parsed::new(
                Statement::Declaration(Declaration::Channel {
                    name: name.clone(),
                    kraus: ops.iter().map(|(o, _)| o.clone()).collect(),
                }),
                col,
            );
            let refs = ops
                .into_iter()
                .map(|o| p.add_ref(o, NameKind::Op))
                .collect();
            p.same_dim.push(SameDim {
                refs,
                fixed: Some((2, "Kraus operators act on one qubit")),
            });
            p.declares = Some((name, col, NameKind::Channel));
            p
        }
        "prob" | "eventprob" => {
            let state = cur.ident("a state name")?;
            let pdi = cur.ident("a pdi name")?;
            let query = if kw == "prob" {
                Query::Prob {
                    state: state.0.clone(),
                    pdi: pdi.0.clone(),
                }
            } else {
                Query::EventProb {
                    state: state.0.clone(),
                    pdi: pdi.0.clone(),
                    indices: cur.index_set()?,
                }
            };
            cur.finish()?;
            let mut p = Parsed::new(Statement::Query(query), kw_col);
            let refs = vec![
                p.add_ref(state, NameKind::State),
                p.add_ref(pdi, NameKind::Pdi),
            ];
            p.same_dim.push(SameDim { refs, fixed: None });
            p
        }
        "compat" | "refine" | "conj" => {
            let kind = if kw == "conj" {
                NameKind::Op
            } else {
                NameKind::Pdi
            };
            let what = if kw == "conj" {
                "an operator name"
            } else {
                "a pdi name"
            };
            let left = cur.ident(what)?;
            let right = cur.ident(what)?;
            cur.finish()?;
            let (l, r) = (left.0.clone(), right.0.clone());
            let query = match kw.as_str() {
                "compat" => Query::Compat { left: l, right: r },
                "refine" => Query::Refine { left: l, right: r },
                _ => Query::Conj { left: l, right: r },
            };
            let mut p = Parsed::new(Statement::Query(query), kw_col);
            let refs = vec![p.add_ref(left, kind), p.add_ref(right, kind)];
            p.same_dim.push(SameDim { refs, fixed: None });
            p
        }
        "consistent" | "histprob" => {
            let family = cur.ident("a family name")?;
            cur.finish()?;
            let query = if kw == "consistent" {
                Query::Consistent {
                    family: family.0.clone(),
                }
            } else {
                Query::HistProb {
                    family: family.0.clone(),
                }
            };
            let mut p = Parsed::new(Statement::Query(query), kw_col);
            p.add_ref(family, NameKind::Family);
            p
        }
        "channelcheck" => {
            let channel = cur.ident("a channel name")?;
            cur.finish()?;
            let mut p = Parsed::new(
                Statement::Query(Query::ChannelCheck {
                    channel: channel.0.clone(),
                }),
                kw_col,
            );
            p.add_ref(channel, NameKind::Channel);
            p
        }
        "teleport" => {
            let state = cur.ident("a state name")?;
            let mut frameworks = Vec::new();
            while !cur.at_end() {
                let col = cur.here();
                let (fw, _) = cur.ident("`Z` or `X`")?;
                let fw = match fw.as_str() {
                    "Z" => FrameworkName::Z,
                    "X" => FrameworkName::X,
                    _ => {
                        return Err(SourceError::new(
                            ErrorKind::Parse,
                            cur.line,
                            col,
                            format!("expected `Z` or `X`, found `{fw}`"),
                        ))
                    }
                };
                if frameworks.contains(&fw) || frameworks.len() == 2 {
                    return Err(SourceError::new(
                        ErrorKind::Parse,
                        cur.line,
                        col,
                        "give `Z`, `X`, or both once each",
                    ));
                }
                frameworks.push(fw);
            }
            if frameworks.is_empty() {
                return Err(cur.unexpected("`Z` or `X`"));
            }
            let mut p = Parsed::new(
                Statement::Query(Query::Teleport {
                    state: state.0.clone(),
                    frameworks,
                }),
                kw_col,
            );
            let r = p.add_ref(state, NameKind::State);
            p.same_dim.push(SameDim {
                refs: vec![r],
                fixed: Some((2, "teleportation input must be a qubit")),
            });
            p
        }
        _ => {
            return Err(SourceError::new(
                ErrorKind::Parse,
                cur.line,
                kw_col,
                format!("unknown statement `{kw}`"),
            ))
        }
    };
    Ok(parsed)
}

struct Checker {
    symbols: HashMap<String, Symbol>,
    space: Option<usize>,
}

impl Checker {
    fn new() -> Self {
        let symbols = CONSTANTS
            .iter()
            .map(|c| {
                (
                    c.to_string(),
                    Symbol {
                        kind: NameKind::Op,
                        dim: Some(2),
                        line: 0,
                        builtin: true,
                        used: false,
                    },
                )
            })
            .collect();
        Self {
            symbols,
            space: None,
        }
    }

    fn declare(
        &mut self,
        name: &str,
        column: usize,
        kind: NameKind,
        dim: Option<usize>,
        line: usize,
    ) -> Result<(), SourceError> {
        if let Some(existing) = self.symbols.get(name) {
            let message = if existing.builtin && existing.used {
                format!("`{name}` is a predeclared constant that is already in use")
            } else if existing.builtin {
                String::new()
            } else {
                format!(
                    "duplicate name `{name}` (first declared on line {})",
                    existing.line
                )
            };
            if !message.is_empty() {
                return Err(SourceError::new(ErrorKind::Name, line, column, message));
            }
        }
        self.symbols.insert(
            name.to_string(),
            Symbol {
                kind,
                dim,
                line,
                builtin: false,
                used: false,
            },
        );
        Ok(())
    }

    /// Declares after a failed line so later references do not cascade.
    fn declare_quietly(&mut self, name: &str, kind: NameKind, line: usize) {
        let free = self.symbols.get(name).is_none_or(|s| s.builtin && !s.used);
        if free {
            self.symbols.insert(
                name.to_string(),
                Symbol {
                    kind,
                    dim: None,
                    line,
                    builtin: false,
                    used: false,
                },
            );
        }
    }

    fn check(&mut self, p: &Parsed, line: usize) -> Result<Option<usize>, SourceError> {
        if let Some((column, message)) = &p.shape_error {
            return Err(SourceError::new(
                ErrorKind::Dimension,
                line,
                *column,
                message.clone(),
            ));
        }
        let mut dims = Vec::with_capacity(p.refs.len());
        for r in &p.refs {
            let sym = self.symbols.get_mut(&r.name).ok_or_else(|| {
                SourceError::new(
                    ErrorKind::Name,
                    line,
                    r.column,
                    format!("undeclared name `{}`", r.name),
                )
            })?;
            if sym.kind != r.kind {
                return Err(SourceError::new(
                    ErrorKind::Name,
                    line,
                    r.column,
                    format!(
                        "`{}` is a {}, expected a {}",
                        r.name,
                        sym.kind.as_str(),
                        r.kind.as_str()
                    ),
                ));
            }
            sym.used = true;
            dims.push(sym.dim);
        }
        let mut declared_dim = None;
        for group in &p.same_dim {
            let mut expected: Option<(usize, String)> =
                group.fixed.map(|(d, why)| (d, why.to_string()));
            for &i in &group.refs {
                let Some(d) = dims[i] else { continue };
                match &expected {
                    None => expected = Some((d, format!("`{}` has dimension {d}", p.refs[i].name))),
                    Some((e, why)) if *e != d => {
                        return Err(SourceError::new(
                            ErrorKind::Dimension,
                            line,
                            p.refs[i].column,
                            format!(
                                "`{}` has dimension {d}, expected {e} ({why})",
                                p.refs[i].name
                            ),
                        ))
                    }
                    _ => {}
                }
            }
            declared_dim = declared_dim.or(expected.map(|(d, _)| d));
        }
        if let Some((n, column)) = p.literal_dim {
            if let Some(space) = self.space {
                if n != space {
                    return Err(SourceError::new(
                        ErrorKind::Dimension,
                        line,
                        column,
                        format!(
                            "literal has dimension {n} but the current space has dimension {space}"
                        ),
                    ));
                }
            }
            declared_dim = Some(n);
        }
        Ok(declared_dim)
    }
}

/// Parses a scenario, collecting up to [`MAX_ERRORS`] source errors.
pub fn parse_scenario(text: &str) -> Result<ScenarioAst, Vec<SourceError>> {
    let mut items = Vec::new();
    let mut errors = Vec::new();
    let mut checker = Checker::new();
    for (idx, raw) in text.lines().enumerate() {
        if errors.len() >= MAX_ERRORS {
            break;
        }
        let line = idx + 1;
        let tokens = match lex_line(raw, line) {
            Ok(t) => t,
            Err(e) => {
                errors.push(e);
                recover_declaration(raw, line, &mut checker);
                continue;
            }
        };
        if tokens.is_empty() {
            continue;
        }
        let mut cur = Cursor {
            toks: &tokens,
            pos: 0,
            line,
        };
        let parsed = match parse_statement(&mut cur) {
            Ok(p) => p,
            Err(e) => {
                errors.push(e);
                recover_from_tokens(&tokens, line, &mut checker);
                continue;
            }
        };
        let checked = checker.check(&parsed, line).and_then(|dim| {
            if let Some((name, column, kind)) = &parsed.declares {
                checker.declare(name, *column, *kind, dim, line)?;
            }
            Ok(())
        });
        match checked {
            Ok(()) => {
                if let Some(d) = parsed.new_space {
                    checker.space = Some(d);
                }
                items.push(Item {
                    line,
                    column: parsed.anchor,
                    statement: parsed.statement,
                });
            }
            Err(e) => {
                errors.push(e);
                if let Some((name, _, kind)) = &parsed.declares {
                    checker.declare_quietly(name, *kind, line);
                }
            }
        }
    }
    if errors.is_empty() {
        Ok(ScenarioAst { items })
    } else {
        errors.truncate(MAX_ERRORS);
        Err(errors)
    }
}

fn decl_kind(keyword: &str) -> Option<NameKind> {
    match keyword {
        "space" => Some(NameKind::Space),
        "op" => Some(NameKind::Op),
        "state" => Some(NameKind::State),
        "pdi" => Some(NameKind::Pdi),
        "family" => Some(NameKind::Family),
        "channel" => Some(NameKind::Channel),
        _ => None,
    }
}

fn recover_from_tokens(tokens: &[Token], line: usize, checker: &mut Checker) {
    if let [Token {
        tok: Tok::Ident(kw),
        ..
    }, Token {
        tok: Tok::Ident(name),
        ..
    }, ..] = tokens
    {
        if let Some(kind) = decl_kind(kw) {
            checker.declare_quietly(name, kind, line);
        }
    }
}

fn recover_declaration(raw: &str, line: usize, checker: &mut Checker) {
    let mut words = raw.split_whitespace();
    if let (Some(kw), Some(name)) = (words.next(), words.next()) {
        let valid = name
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
        if let (Some(kind), true) = (decl_kind(kw), valid) {
            checker.declare_quietly(name, kind, line);
        }
    }
}
