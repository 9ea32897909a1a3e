use super::parser::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum TokenKind {
    Int(String),
    Ident(String),
    Pipe,
    Gt,
    LParen,
    RParen,
    Comma,
    DotDot,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Equiv,
    Assign,
    Eof,
}

impl TokenKind {
    pub(crate) fn describe(&self) -> String {
        match self {
            TokenKind::Int(s) => format!("integer `{s}`"),
            TokenKind::Ident(s) => format!("`{s}`"),
            TokenKind::Pipe => "`|`".into(),
            TokenKind::Gt => "`>`".into(),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
            TokenKind::Comma => "`,`".into(),
            TokenKind::DotDot => "`..`".into(),
            TokenKind::Plus => "`+`".into(),
            TokenKind::Minus => "`-`".into(),
            TokenKind::Star => "`*`".into(),
            TokenKind::Slash => "`/`".into(),
            TokenKind::Caret => "`^`".into(),
            TokenKind::Equiv => "`===`".into(),
            TokenKind::Assign => "`=`".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub column: usize,
}

/// Tokenizes `text`; `column0` is the 1-based column of its first character.
pub(crate) fn tokenize(text: &str, line: usize, column0: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = column0 + i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '|' => Some(TokenKind::Pipe),
            '>' => Some(TokenKind::Gt),
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            ',' => Some(TokenKind::Comma),
            '+' => Some(TokenKind::Plus),
            '-' => Some(TokenKind::Minus),
            '*' => Some(TokenKind::Star),
            '/' => Some(TokenKind::Slash),
            '^' => Some(TokenKind::Caret),
            _ => None,
        };
        if let Some(kind) = single {
            out.push(Token { kind, line, column });
            i += 1;
            continue;
        }
        if c == '.' {
            if chars.get(i + 1) == Some(&'.') {
                out.push(Token { kind: TokenKind::DotDot, line, column });
                i += 2;
                continue;
            }
            return Err(ParseError::new(line, column, vec!["`..`".into()], "`.`".into()));
        }
        if c == '=' {
            let run = chars[i..].iter().take_while(|&&ch| ch == '=').count();
            match run {
                1 => out.push(Token { kind: TokenKind::Assign, line, column }),
                3 => out.push(Token { kind: TokenKind::Equiv, line, column }),
                _ => {
                    return Err(ParseError::new(
                        line,
                        column,
                        vec!["`=`".into(), "`===`".into()],
                        format!("`{}`", "=".repeat(run)),
                    ))
                }
            }
            i += run;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token { kind: TokenKind::Int(s), line, column });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token { kind: TokenKind::Ident(s), line, column });
            continue;
        }
        return Err(ParseError::new(line, column, vec!["token".into()], format!("`{c}`")));
    }
    out.push(Token {
        kind: TokenKind::Eof,
        line,
        column: column0 + chars.len(),
    });
    Ok(out)
}
