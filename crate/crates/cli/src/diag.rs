use std::fmt;

/// A byte range of the source, with its 1-based line and column (in chars).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Span {
    pub offset: usize,
    pub len: usize,
    pub line: usize,
    pub column: usize,
}

impl Span {
    /// Locates `offset..offset + len` in `src`; both ends are clamped to the source.
    pub fn locate(src: &str, offset: usize, len: usize) -> Span {
        let offset = floor_char_boundary(src, offset.min(src.len()));
        let len = len.min(src.len() - offset);
        let before = &src[..offset];
        let line = before.matches('\n').count() + 1;
        let line_start = before.rfind('\n').map_or(0, |i| i + 1);
        let column = src[line_start..offset].chars().count() + 1;
        Span { offset, len, line, column }
    }

    pub fn end(&self) -> usize {
        self.offset + self.len
    }
}

fn floor_char_boundary(s: &str, mut i: usize) -> usize {
    while !s.is_char_boundary(i) {
        i -= 1;
    }
    i
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub span: Span,
    pub severity: Severity,
    pub message: String,
    pub suggestion: Option<String>,
}

impl Diagnostic {
    pub fn error(span: Span, message: impl Into<String>) -> Self {
        Diagnostic { span, severity: Severity::Error, message: message.into(), suggestion: None }
    }

    pub fn warning(span: Span, message: impl Into<String>) -> Self {
        Diagnostic { span, severity: Severity::Warning, message: message.into(), suggestion: None }
    }

    pub fn with_suggestion(mut self, s: Option<String>) -> Self {
        self.suggestion = s;
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// Multi-line report with the offending line and a caret underline.
    pub fn render(&self, src: &str, path: &str) -> String {
        let Span { line, column, len, .. } = self.span;
        let text = src.lines().nth(line - 1).unwrap_or("");
        let gutter = line.to_string().len();
        let pad = " ".repeat(gutter);
        let width = text.chars().skip(column - 1).take(len.max(1)).count().max(1);
        let mut out = format!("{}: {}\n{pad}--> {path}:{line}:{column}\n", self.severity, self.message);
        out += &format!("{pad} |\n{line} | {text}\n{pad} | {}{}\n", " ".repeat(column - 1), "^".repeat(width));
        if let Some(s) = &self.suggestion {
            out += &format!("{pad} = help: {s}\n");
        }
        out
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}: {}", self.span.line, self.span.column, self.severity, self.message)?;
        if let Some(s) = &self.suggestion {
            write!(f, " ({s})")?;
        }
        Ok(())
    }
}

/// `did you mean ...?` for the closest candidate within a small edit distance.
pub fn suggest<'a>(word: &str, candidates: impl IntoIterator<Item = &'a str>) -> Option<String> {
    let limit = (word.chars().count() / 3).max(1) + 1;
    candidates
        .into_iter()
        .filter(|c| *c != word)
        .map(|c| (strsim::levenshtein(word, c), c))
        .filter(|(d, _)| *d <= limit)
        .min()
        .map(|(_, c)| format!("did you mean `{c}`?"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn locate_lines_and_columns() {
        let src = "seq f = 1;\ntask classify g r;";
        let s = Span::locate(src, 25, 1);
        assert_eq!((s.line, s.column), (2, 15));
        assert_eq!(&src[s.offset..s.end()], "g");
        let s = Span::locate(src, 999, 4);
        assert_eq!((s.offset, s.len), (src.len(), 0));
    }

    #[test]
    fn suggestions() {
        assert_eq!(suggest("clasify", ["classify", "distance"]).as_deref(), Some("did you mean `classify`?"));
        assert_eq!(suggest("zzz", ["classify"]), None);
    }

    #[test]
    fn render_underlines() {
        let src = "task classify g r;";
        let d = Diagnostic::error(Span::locate(src, 14, 1), "unknown name g");
        let r = d.render(src, "x.gfa");
        assert!(r.contains("x.gfa:1:15"));
        assert!(r.contains("\n  |               ^\n"));
    }
}
