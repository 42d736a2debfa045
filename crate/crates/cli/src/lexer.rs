use crate::diag::{Diagnostic, Span};

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    Number(f64),
    /// Decoded text; `raw` tells whether it equals the source between the quotes.
    Str { text: String, raw: bool },
    Punct(char),
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(v) => format!("number {v}"),
            Tok::Str { .. } => "string".into(),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

const PUNCT: &str = "=;{}[](),:+-*";

/// Splits `src` into tokens; `#` starts a comment running to the end of the line.
pub fn tokenize(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    let span = |a: usize, b: usize| Span::locate(src, a, b - a);
    while let Some(&(i, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
        } else if c == '#' {
            while it.next_if(|&(_, c)| c != '\n').is_some() {}
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut end = i;
            while let Some((j, c)) = it.next_if(|&(_, c)| c.is_ascii_alphanumeric() || c == '_') {
                end = j + c.len_utf8();
            }
            out.push(Token { tok: Tok::Ident(src[i..end].to_string()), span: span(i, end) });
        } else if c.is_ascii_digit() || c == '.' {
            let end = number_end(src, i);
            let text = &src[i..end];
            let v: f64 = text.parse().map_err(|_| Diagnostic::error(span(i, end), format!("malformed number `{text}`")))?;
            if !v.is_finite() {
                return Err(Diagnostic::error(span(i, end), format!("number `{text}` is out of range")));
            }
            while it.next_if(|&(j, _)| j < end).is_some() {}
            out.push(Token { tok: Tok::Number(v), span: span(i, end) });
        } else if c == '"' {
            it.next();
            let mut text = String::new();
            let mut raw = true;
            let end = loop {
                match it.next() {
                    None => return Err(Diagnostic::error(span(i, src.len()), "unterminated string")),
                    Some((j, '"')) => break j + 1,
                    Some((j, '\\')) => {
                        raw = false;
                        match it.next() {
                            Some((_, 'n')) => text.push('\n'),
                            Some((_, 't')) => text.push('\t'),
                            Some((_, c @ ('"' | '\\'))) => text.push(c),
                            Some((k, c)) => {
                                return Err(Diagnostic::error(span(j, k + c.len_utf8()), format!("unknown escape `\\{c}`")))
                            }
                            None => return Err(Diagnostic::error(span(i, src.len()), "unterminated string")),
                        }
                    }
                    Some((_, c)) => text.push(c),
                }
            };
            out.push(Token { tok: Tok::Str { text, raw }, span: span(i, end) });
        } else if PUNCT.contains(c) {
            it.next();
            out.push(Token { tok: Tok::Punct(c), span: span(i, i + 1) });
        } else {
            return Err(Diagnostic::error(span(i, i + c.len_utf8()), format!("unexpected character `{c}`")));
        }
    }
    out.push(Token { tok: Tok::Eof, span: span(src.len(), src.len()) });
    Ok(out)
}

/// `digits [. digits] [e [+-] digits]`, also `.5` and `5.`.
fn number_end(src: &str, start: usize) -> usize {
    let b = src.as_bytes();
    let digits = |mut i: usize| {
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        i
    };
    let mut i = digits(start);
    if i < b.len() && b[i] == b'.' {
        i = digits(i + 1);
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        let mut j = i + 1;
        if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
            j += 1;
        }
        if j < b.len() && b[j].is_ascii_digit() {
            i = digits(j);
        }
    }
    i
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn basic_tokens() {
        assert_eq!(
            toks("seq f = \"n^2\"; # note\nscale r = power 1.5e-1;"),
            vec![
                Tok::Ident("seq".into()),
                Tok::Ident("f".into()),
                Tok::Punct('='),
                Tok::Str { text: "n^2".into(), raw: true },
                Tok::Punct(';'),
                Tok::Ident("scale".into()),
                Tok::Ident("r".into()),
                Tok::Punct('='),
                Tok::Ident("power".into()),
                Tok::Number(0.15),
                Tok::Punct(';'),
                Tok::Eof,
            ]
        );
    }

    #[test]
    fn escapes_and_spans() {
        let t = tokenize(r#"x "a\"b""#).unwrap();
        assert_eq!(t[1].tok, Tok::Str { text: "a\"b".into(), raw: false });
        assert_eq!((t[1].span.offset, t[1].span.len), (2, 6));
    }

    #[test]
    fn lexical_errors() {
        assert_eq!(tokenize("seq \"abc").unwrap_err().message, "unterminated string");
        assert_eq!(tokenize("1e999").unwrap_err().message, "number `1e999` is out of range");
        let e = tokenize("a @ b").unwrap_err();
        assert_eq!((e.span.column, e.message.as_str()), (3, "unexpected character `@`"));
        // `1e` stops before the dangling exponent
        assert_eq!(toks("1e"), vec![Tok::Number(1.0), Tok::Ident("e".into()), Tok::Eof]);
    }
}
