use crate::error::{ErrorKind, SourceError};

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    /// A real literal; `integer` is set when it is written without a point or exponent.
    Number {
        value: f64,
        integer: bool,
    },
    /// A number immediately followed by `i`.
    Imag(f64),
    Eq,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number { value, .. } => format!("number {value}"),
            Tok::Imag(v) => format!("imaginary number {v}i"),
            Tok::Eq => "`=`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    /// 1-based character column of the first character.
    pub column: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Tokenizes one line. Everything from `#` on is a comment.
pub fn lex_line(line: &str, line_no: usize) -> Result<Vec<Token>, SourceError> {
    let chars: Vec<char> = line.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '=' => Some(Tok::Eq),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            _ => None,
        };
        if let Some(tok) = single {
            tokens.push(Token { tok, column });
            i += 1;
            continue;
        }
        if is_ident_start(c) {
            let start = i;
            while i < chars.len() && is_ident_continue(chars[i]) {
                i += 1;
            }
            // Names such as `Px+` or `Pz-` may end in sign characters.
            while i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            tokens.push(Token {
                tok: Tok::Ident(text),
                column,
            });
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            let mut integer = true;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                integer = false;
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
                    integer = false;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                } else {
                    return Err(SourceError::new(
                        ErrorKind::Lex,
                        line_no,
                        column,
                        "malformed exponent in number",
                    ));
                }
            }
            let text: String = chars[start..i].iter().collect();
            let value: f64 = text.parse().map_err(|_| {
                SourceError::new(
                    ErrorKind::Lex,
                    line_no,
                    column,
                    format!("malformed number `{text}`"),
                )
            })?;
            if !value.is_finite() {
                return Err(SourceError::new(
                    ErrorKind::Lex,
                    line_no,
                    column,
                    format!("number `{text}` is out of range"),
                ));
            }
            let imaginary = i < chars.len()
                && chars[i] == 'i'
                && !(i + 1 < chars.len() && is_ident_continue(chars[i + 1]));
            if imaginary {
                i += 1;
                tokens.push(Token {
                    tok: Tok::Imag(value),
                    column,
                });
            } else if i < chars.len() && is_ident_start(chars[i]) {
                return Err(SourceError::new(
                    ErrorKind::Lex,
                    line_no,
                    i + 1,
                    format!("unexpected `{}` after number", chars[i]),
                ));
            } else {
                tokens.push(Token {
                    tok: Tok::Number { value, integer },
                    column,
                });
            }
            continue;
        }
        return Err(SourceError::new(
            ErrorKind::Lex,
            line_no,
            column,
            format!("unexpected character `{c}`"),
        ));
    }
    Ok(tokens)
}
