//! Tokenizer for the extended notation. UTF-8 only; a leading BOM is
//! rejected. `//` starts a line comment.

use super::{ParseError, SourceSpan};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Token {
    /// Bare identifier: keywords, prefixes.
    Ident(String),
    /// `prefix:local`
    QName(String, String),
    /// `"..."` with escapes resolved.
    Str(String),
    /// `'prefix:local'`
    SQName(String, String),
    /// Bare integer literal.
    Int(i64),
    /// Unquoted ISO-8601 timestamp.
    Time(String),
    /// `<...>` URI.
    Uri(String),
    /// `@mode`, `@sidecar`
    At(String),
    /// Raw JSON object following `@sidecar`.
    JsonBlob(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semicolon,
    Equals,
    /// `%%` datatype marker.
    DoublePercent,
    /// Bare `-` placeholder.
    Minus,
    Eof,
}

impl Token {
    pub(crate) fn describe(&self) -> String {
        match self {
            Token::Ident(s) => format!("`{s}`"),
            Token::QName(p, l) => format!("`{p}:{l}`"),
            Token::Str(_) => "string literal".to_owned(),
            Token::SQName(p, l) => format!("`'{p}:{l}'`"),
            Token::Int(i) => format!("`{i}`"),
            Token::Time(t) => format!("`{t}`"),
            Token::Uri(u) => format!("`<{u}>`"),
            Token::At(s) => format!("`@{s}`"),
            Token::JsonBlob(_) => "sidecar block".to_owned(),
            Token::LParen => "`(`".to_owned(),
            Token::RParen => "`)`".to_owned(),
            Token::LBracket => "`[`".to_owned(),
            Token::RBracket => "`]`".to_owned(),
            Token::Comma => "`,`".to_owned(),
            Token::Semicolon => "`;`".to_owned(),
            Token::Equals => "`=`".to_owned(),
            Token::DoublePercent => "`%%`".to_owned(),
            Token::Minus => "`-`".to_owned(),
            Token::Eof => "end of input".to_owned(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub token: Token,
    pub span: SourceSpan,
}

struct Cursor<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    line: usize,
    column: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<u8> {
        self.bytes.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.column = 1;
        } else if (b & 0xC0) != 0x80 {
            // count a column per character, not per continuation byte
            self.column += 1;
        }
        Some(b)
    }

    fn here(&self) -> (usize, usize, usize) {
        (self.pos, self.line, self.column)
    }

    fn span_from(&self, start: (usize, usize, usize)) -> SourceSpan {
        SourceSpan {
            start_byte: start.0,
            end_byte: self.pos,
            start_line: start.1,
            start_column: start.2,
            end_line: self.line,
            end_column: self.column,
        }
    }

    fn error(&self, start: (usize, usize, usize), expected: &str, found: String) -> ParseError {
        ParseError {
            span: self.span_from(start),
            expected: expected.to_owned(),
            found,
        }
    }
}

fn is_ident_start(b: u8) -> bool {
    b.is_ascii_alphabetic()
}

fn is_ident_continue(b: u8) -> bool {
    // `+` appears in the encoding-mode names (bundles+, namespaces+)
    b.is_ascii_alphanumeric() || b == b'_' || b == b'-' || b == b'.' || b == b'+'
}

fn is_time_char(b: u8) -> bool {
    b.is_ascii_digit() || matches!(b, b'-' | b':' | b'+' | b'.' | b'T' | b'Z')
}

pub(crate) fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    if text.starts_with('\u{FEFF}') {
        return Err(ParseError {
            span: SourceSpan {
                start_byte: 0,
                end_byte: 3,
                start_line: 1,
                start_column: 1,
                end_line: 1,
                end_column: 1,
            },
            expected: "UTF-8 text without a byte-order mark".to_owned(),
            found: "byte-order mark".to_owned(),
        });
    }
    let mut cursor = Cursor {
        text,
        bytes: text.as_bytes(),
        pos: 0,
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();
    loop {
        // skip whitespace and comments
        loop {
            match cursor.peek() {
                Some(b) if b.is_ascii_whitespace() => {
                    cursor.bump();
                }
                Some(b'/') if cursor.peek_at(1) == Some(b'/') => {
                    while let Some(b) = cursor.peek() {
                        if b == b'\n' {
                            break;
                        }
                        cursor.bump();
                    }
                }
                _ => break,
            }
        }
        let start = cursor.here();
        let Some(b) = cursor.peek() else {
            tokens.push(Spanned {
                token: Token::Eof,
                span: cursor.span_from(start),
            });
            break;
        };
        let token = match b {
            b'(' => {
                cursor.bump();
                Token::LParen
            }
            b')' => {
                cursor.bump();
                Token::RParen
            }
            b'[' => {
                cursor.bump();
                Token::LBracket
            }
            b']' => {
                cursor.bump();
                Token::RBracket
            }
            b',' => {
                cursor.bump();
                Token::Comma
            }
            b';' => {
                cursor.bump();
                Token::Semicolon
            }
            b'=' => {
                cursor.bump();
                Token::Equals
            }
            b'%' => {
                cursor.bump();
                if cursor.peek() == Some(b'%') {
                    cursor.bump();
                    Token::DoublePercent
                } else {
                    return Err(cursor.error(start, "`%%`", "`%`".to_owned()));
                }
            }
            b'<' => {
                cursor.bump();
                let uri_start = cursor.pos;
                while let Some(b) = cursor.peek() {
                    if b == b'>' {
                        break;
                    }
                    if b == b'\n' {
                        return Err(cursor.error(start, "`>` closing the uri", "newline".to_owned()));
                    }
                    cursor.bump();
                }
                if cursor.peek() != Some(b'>') {
                    return Err(cursor.error(start, "`>` closing the uri", "end of input".to_owned()));
                }
                let uri = cursor.text[uri_start..cursor.pos].to_owned();
                cursor.bump();
                Token::Uri(uri)
            }
            b'"' => Token::Str(lex_string(&mut cursor, start, b'"')?),
            b'\'' => {
                let raw = lex_string(&mut cursor, start, b'\'')?;
                match raw.split_once(':') {
                    Some((p, l)) if !p.is_empty() && !l.is_empty() => {
                        Token::SQName(p.to_owned(), l.to_owned())
                    }
                    _ => {
                        return Err(cursor.error(
                            start,
                            "qualified name inside quotes",
                            format!("`'{raw}'`"),
                        ))
                    }
                }
            }
            b'@' => {
                cursor.bump();
                let word_start = cursor.pos;
                while let Some(b) = cursor.peek() {
                    if !is_ident_continue(b) {
                        break;
                    }
                    cursor.bump();
                }
                let word = cursor.text[word_start..cursor.pos].to_owned();
                if word == "sidecar" {
                    tokens.push(Spanned {
                        token: Token::At(word),
                        span: cursor.span_from(start),
                    });
                    let blob = lex_json_blob(&mut cursor)?;
                    Token::JsonBlob(blob)
                } else {
                    Token::At(word)
                }
            }
            b'-' => {
                if cursor.peek_at(1).is_some_and(|b| b.is_ascii_digit()) {
                    lex_number_or_time(&mut cursor, start)?
                } else {
                    cursor.bump();
                    Token::Minus
                }
            }
            b if b.is_ascii_digit() => lex_number_or_time(&mut cursor, start)?,
            b if is_ident_start(b) => {
                while let Some(b) = cursor.peek() {
                    if !is_ident_continue(b) {
                        break;
                    }
                    cursor.bump();
                }
                let word = cursor.text[start.0..cursor.pos].to_owned();
                if cursor.peek() == Some(b':') {
                    cursor.bump();
                    let local_start = cursor.pos;
                    while let Some(b) = cursor.peek() {
                        if !is_ident_continue(b) {
                            break;
                        }
                        cursor.bump();
                    }
                    let local = cursor.text[local_start..cursor.pos].to_owned();
                    if local.is_empty() {
                        return Err(cursor.error(
                            start,
                            "local name after `:`",
                            format!("`{word}:`"),
                        ));
                    }
                    Token::QName(word, local)
                } else {
                    Token::Ident(word)
                }
            }
            other => {
                let ch = cursor.text[cursor.pos..].chars().next().unwrap_or('?');
                let _ = other;
                return Err(cursor.error(start, "a statement token", format!("`{ch}`")));
            }
        };
        let span = cursor.span_from(start);
        let done = token == Token::Eof;
        tokens.push(Spanned { token, span });
        if done {
            break;
        }
    }
    Ok(tokens)
}

fn lex_string(cursor: &mut Cursor, start: (usize, usize, usize), quote: u8) -> Result<String, ParseError> {
    cursor.bump(); // opening quote
    let mut out = String::new();
    loop {
        match cursor.peek() {
            None => {
                return Err(cursor.error(start, "closing quote", "end of input".to_owned()));
            }
            Some(b) if b == quote => {
                cursor.bump();
                return Ok(out);
            }
            Some(b'\\') => {
                cursor.bump();
                match cursor.bump() {
                    Some(b'n') => out.push('\n'),
                    Some(b't') => out.push('\t'),
                    Some(b'r') => out.push('\r'),
                    Some(b'\\') => out.push('\\'),
                    Some(b'"') => out.push('"'),
                    Some(b'\'') => out.push('\''),
                    other => {
                        return Err(cursor.error(
                            start,
                            "escape sequence \\n, \\t, \\r, \\\\, \\\" or \\'",
                            other
                                .map(|b| format!("`\\{}`", b as char))
                                .unwrap_or_else(|| "end of input".to_owned()),
                        ))
                    }
                }
            }
            Some(_) => {
                let ch_start = cursor.pos;
                cursor.bump();
                while cursor.peek().is_some_and(|b| (b & 0xC0) == 0x80) {
                    cursor.bump();
                }
                out.push_str(&cursor.text[ch_start..cursor.pos]);
            }
        }
    }
}

fn lex_number_or_time(cursor: &mut Cursor, start: (usize, usize, usize)) -> Result<Token, ParseError> {
    while cursor.peek().is_some_and(is_time_char) {
        cursor.bump();
    }
    let raw = &cursor.text[start.0..cursor.pos];
    if let Ok(i) = raw.parse::<i64>() {
        return Ok(Token::Int(i));
    }
    if chrono::DateTime::parse_from_rfc3339(raw).is_ok() {
        return Ok(Token::Time(raw.to_owned()));
    }
    Err(cursor.error(
        start,
        "integer or ISO-8601 timestamp",
        format!("`{raw}`"),
    ))
}

/// Scans a balanced JSON object, string-aware, returning the raw text.
fn lex_json_blob(cursor: &mut Cursor) -> Result<String, ParseError> {
    while cursor.peek().is_some_and(|b| b.is_ascii_whitespace()) {
        cursor.bump();
    }
    let start = cursor.here();
    if cursor.peek() != Some(b'{') {
        return Err(cursor.error(
            start,
            "`{` opening the sidecar JSON object",
            cursor
                .peek()
                .map(|b| format!("`{}`", b as char))
                .unwrap_or_else(|| "end of input".to_owned()),
        ));
    }
    let blob_start = cursor.pos;
    let mut depth = 0usize;
    let mut in_string = false;
    loop {
        let Some(b) = cursor.peek() else {
            return Err(cursor.error(start, "`}` closing the sidecar", "end of input".to_owned()));
        };
        cursor.bump();
        if in_string {
            match b {
                b'\\' => {
                    cursor.bump();
                }
                b'"' => in_string = false,
                _ => {}
            }
        } else {
            match b {
                b'"' => in_string = true,
                b'{' => depth += 1,
                b'}' => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(cursor.text[blob_start..cursor.pos].to_owned());
                    }
                }
                _ => {}
            }
        }
    }
}
