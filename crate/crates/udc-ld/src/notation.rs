//! Tokenizer and parser for UDC classmarks.
//!
//! A classmark is decomposed into leaf elements (main numbers, common and
//! special auxiliaries, alphabetical extensions, other-system codes) joined
//! by connecting signs (`+`, `:`, `::`, `/`) and optional `[...]` subgroups.
//! Parsing is purely structural: no semantic validation of whether a given
//! combination is meaningful UDC is attempted.

use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// Canonical glyph for the special-auxiliary apostrophe. A plain apostrophe
/// (U+0027) is accepted on input and normalised to this on serialization.
pub const APOSTROPHE: char = '`';

/// Kind of a single leaf element of a classmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementKind {
    MainNumber,
    LanguageAux,
    FormAux,
    PlaceAux,
    EthnicAux,
    TimeAux,
    PropertiesAux,
    MaterialsAux,
    ProcessesAux,
    PersonsAux,
    SpecialHyphen,
    SpecialPointZero,
    SpecialApostrophe,
    AlphaExtension,
    OtherSystemCode,
}

impl ElementKind {
    /// Machine-readable name, matching the serialized form.
    pub fn name(&self) -> &'static str {
        match self {
            ElementKind::MainNumber => "main_number",
            ElementKind::LanguageAux => "language_aux",
            ElementKind::FormAux => "form_aux",
            ElementKind::PlaceAux => "place_aux",
            ElementKind::EthnicAux => "ethnic_aux",
            ElementKind::TimeAux => "time_aux",
            ElementKind::PropertiesAux => "properties_aux",
            ElementKind::MaterialsAux => "materials_aux",
            ElementKind::ProcessesAux => "processes_aux",
            ElementKind::PersonsAux => "persons_aux",
            ElementKind::SpecialHyphen => "special_hyphen",
            ElementKind::SpecialPointZero => "special_point_zero",
            ElementKind::SpecialApostrophe => "special_apostrophe",
            ElementKind::AlphaExtension => "alpha_extension",
            ElementKind::OtherSystemCode => "other_system_code",
        }
    }

    /// Human-readable description used in element tables.
    pub fn label(&self) -> &'static str {
        match self {
            ElementKind::MainNumber => "main class",
            ElementKind::LanguageAux => "common aux. of language",
            ElementKind::FormAux => "common aux. of form",
            ElementKind::PlaceAux => "common aux. of place",
            ElementKind::EthnicAux => "common aux. of ethnic grouping",
            ElementKind::TimeAux => "common aux. of time",
            ElementKind::PropertiesAux => "common aux. of properties",
            ElementKind::MaterialsAux => "common aux. of materials",
            ElementKind::ProcessesAux => "common aux. of processes",
            ElementKind::PersonsAux => "common aux. of persons",
            ElementKind::SpecialHyphen => "special aux. (hyphen)",
            ElementKind::SpecialPointZero => "special aux. (point zero)",
            ElementKind::SpecialApostrophe => "special aux. (apostrophe)",
            ElementKind::AlphaExtension => "alphabetical extension",
            ElementKind::OtherSystemCode => "code from another system",
        }
    }

    /// True for the common auxiliaries, which may stand alone as the head of
    /// a compound. Special auxiliaries only ever attach to a preceding head.
    pub fn is_common_aux(&self) -> bool {
        matches!(
            self,
            ElementKind::LanguageAux
                | ElementKind::FormAux
                | ElementKind::PlaceAux
                | ElementKind::EthnicAux
                | ElementKind::TimeAux
                | ElementKind::PropertiesAux
                | ElementKind::MaterialsAux
                | ElementKind::ProcessesAux
                | ElementKind::PersonsAux
        )
    }
}

/// Connecting sign between operands of a combined classmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Connector {
    Coordination,
    Relation,
    OrderFixing,
    Consecutive,
}

impl Connector {
    pub fn glyph(&self) -> &'static str {
        match self {
            Connector::Coordination => "+",
            Connector::Relation => ":",
            Connector::OrderFixing => "::",
            Connector::Consecutive => "/",
        }
    }

    /// Description shown in element tables next to the glyph.
    pub fn label(&self) -> &'static str {
        match self {
            Connector::Coordination => "coordinated with (connecting sign)",
            Connector::Relation => "related to (common aux. sign)",
            Connector::OrderFixing => "order-fixed with (connecting sign)",
            Connector::Consecutive => "consecutive extension (connecting sign)",
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Connector::Coordination => "coordination",
            Connector::Relation => "relation",
            Connector::OrderFixing => "order_fixing",
            Connector::Consecutive => "consecutive",
        }
    }
}

/// Byte range of a token or element within the source text.
pub type Span = std::ops::Range<usize>;

/// Parse tree of a classmark.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NotationNode {
    Element {
        kind: ElementKind,
        raw: String,
        span: Span,
    },
    Compound {
        head: Box<NotationNode>,
        attachments: Vec<NotationNode>,
    },
    Connected {
        operands: Vec<NotationNode>,
        connectors: Vec<Connector>,
    },
    Subgroup {
        inner: Box<NotationNode>,
    },
}

impl NotationNode {
    /// Serialize back to classmark text. The apostrophe is canonicalised to
    /// the backtick; everything else reproduces the input byte-for-byte.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out
    }

    fn write(&self, out: &mut String) {
        match self {
            NotationNode::Element { raw, .. } => out.push_str(raw),
            NotationNode::Compound { head, attachments } => {
                head.write(out);
                for a in attachments {
                    a.write(out);
                }
            }
            NotationNode::Connected {
                operands,
                connectors,
            } => {
                for (i, op) in operands.iter().enumerate() {
                    if i > 0 {
                        out.push_str(connectors[i - 1].glyph());
                    }
                    op.write(out);
                }
            }
            NotationNode::Subgroup { inner } => {
                out.push('[');
                inner.write(out);
                out.push(']');
            }
        }
    }

    /// Leaf elements and connecting signs in source order.
    pub fn flat_elements(&self) -> Vec<FlatItem<'_>> {
        let mut items = Vec::new();
        self.flatten(&mut items);
        items
    }

    fn flatten<'a>(&'a self, items: &mut Vec<FlatItem<'a>>) {
        match self {
            NotationNode::Element { kind, raw, .. } => {
                items.push(FlatItem::Element { raw, kind: *kind })
            }
            NotationNode::Compound { head, attachments } => {
                head.flatten(items);
                for a in attachments {
                    a.flatten(items);
                }
            }
            NotationNode::Connected {
                operands,
                connectors,
            } => {
                for (i, op) in operands.iter().enumerate() {
                    if i > 0 {
                        items.push(FlatItem::Connector(connectors[i - 1]));
                    }
                    op.flatten(items);
                }
            }
            NotationNode::Subgroup { inner } => inner.flatten(items),
        }
    }
}

/// One entry of the flattened element list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FlatItem<'a> {
    Element { raw: &'a str, kind: ElementKind },
    Connector(Connector),
}

/// Character outside the UDC alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid character at byte {position}")]
pub struct LexError {
    pub position: usize,
}

/// Structural error in an otherwise tokenizable classmark.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: expected {expected}")]
pub struct ParseError {
    pub position: usize,
    pub expected: String,
}

/// Either of the two classmark error kinds.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NotationError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl NotationError {
    pub fn position(&self) -> usize {
        match self {
            NotationError::Lex(e) => e.position,
            NotationError::Parse(e) => e.position,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    /// Digit run, including `.d` decimal continuations (d in 1-9).
    Digits,
    /// `.0` followed by digits: a point-zero special-auxiliary indicator.
    PointZero,
    /// ASCII letter run.
    Letters,
    Open,
    Close,
    OpenBracket,
    CloseBracket,
    Equals,
    Quote,
    Hyphen,
    Apostrophe,
    Asterisk,
    Plus,
    Relation,
    OrderFixing,
    Slash,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token<'a> {
    pub kind: TokenKind,
    pub lexeme: &'a str,
    pub span: Span,
}

/// Split a classmark into tokens. Every byte of the input is covered by
/// exactly one token; `::` is always a single token (longest match).
pub fn tokenize(raw: &str) -> Result<Vec<Token<'_>>, LexError> {
    let bytes = raw.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let start = i;
        let kind = match bytes[i] {
            b'0'..=b'9' => {
                i += 1;
                scan_number(bytes, &mut i);
                TokenKind::Digits
            }
            b'.' => {
                // `.0` starts a point-zero token; `.1`-`.9` never reaches
                // here because scan_number consumes it as a continuation.
                if i + 1 < bytes.len() && bytes[i + 1] == b'0' {
                    i += 2;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    scan_number(bytes, &mut i);
                    TokenKind::PointZero
                } else {
                    return Err(LexError { position: i });
                }
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                    i += 1;
                }
                TokenKind::Letters
            }
            b'(' => {
                i += 1;
                TokenKind::Open
            }
            b')' => {
                i += 1;
                TokenKind::Close
            }
            b'[' => {
                i += 1;
                TokenKind::OpenBracket
            }
            b']' => {
                i += 1;
                TokenKind::CloseBracket
            }
            b'=' => {
                i += 1;
                TokenKind::Equals
            }
            b'"' => {
                i += 1;
                TokenKind::Quote
            }
            b'-' => {
                i += 1;
                TokenKind::Hyphen
            }
            b'`' | b'\'' => {
                i += 1;
                TokenKind::Apostrophe
            }
            b'*' => {
                i += 1;
                TokenKind::Asterisk
            }
            b'+' => {
                i += 1;
                TokenKind::Plus
            }
            b':' => {
                if i + 1 < bytes.len() && bytes[i + 1] == b':' {
                    i += 2;
                    TokenKind::OrderFixing
                } else {
                    i += 1;
                    TokenKind::Relation
                }
            }
            b'/' => {
                i += 1;
                TokenKind::Slash
            }
            _ => return Err(LexError { position: i }),
        };
        tokens.push(Token {
            kind,
            lexeme: &raw[start..i],
            span: start..i,
        });
    }
    Ok(tokens)
}

/// Consume `.d` decimal continuations (d in 1-9) plus trailing digits.
fn scan_number(bytes: &[u8], i: &mut usize) {
    while *i < bytes.len() && bytes[*i].is_ascii_digit() {
        *i += 1;
    }
    while *i + 1 < bytes.len() && bytes[*i] == b'.' && (b'1'..=b'9').contains(&bytes[*i + 1]) {
        *i += 2;
        while *i < bytes.len() && bytes[*i].is_ascii_digit() {
            *i += 1;
        }
    }
}

/// Parse a classmark into its tree.
pub fn parse(raw: &str) -> Result<NotationNode, NotationError> {
    let tokens = tokenize(raw)?;
    if tokens.is_empty() {
        return Err(ParseError {
            position: 0,
            expected: "a non-empty classmark".into(),
        }
        .into());
    }
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        end: raw.len(),
    };
    let node = parser.expression()?;
    if let Some(tok) = parser.peek() {
        return Err(ParseError {
            position: tok.span.start,
            expected: "end of classmark".into(),
        }
        .into());
    }
    Ok(node)
}

struct Parser<'a, 't> {
    tokens: &'t [Token<'a>],
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a, '_> {
    fn peek(&self) -> Option<&Token<'a>> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<&Token<'a>> {
        let tok = self.tokens.get(self.pos);
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    fn here(&self) -> usize {
        self.peek().map(|t| t.span.start).unwrap_or(self.end)
    }

    fn err(&self, expected: &str) -> ParseError {
        ParseError {
            position: self.here(),
            expected: expected.into(),
        }
    }

    fn expression(&mut self) -> Result<NotationNode, ParseError> {
        let mut operands = vec![self.operand()?];
        let mut connectors = Vec::new();
        while let Some(conn) = self.peek().and_then(|t| connector_of(t.kind)) {
            self.pos += 1;
            connectors.push(conn);
            operands.push(self.operand()?);
        }
        if connectors.is_empty() {
            Ok(operands.pop().unwrap())
        } else {
            Ok(NotationNode::Connected {
                operands,
                connectors,
            })
        }
    }

    fn operand(&mut self) -> Result<NotationNode, ParseError> {
        self.compound()
    }

    fn subgroup(&mut self) -> Result<NotationNode, ParseError> {
        self.pos += 1;
        if self.peek().map(|t| t.kind) == Some(TokenKind::CloseBracket) {
            return Err(self.err("a classmark inside [ ]"));
        }
        let inner = self.expression()?;
        match self.peek().map(|t| t.kind) {
            Some(TokenKind::CloseBracket) => {
                self.pos += 1;
                Ok(NotationNode::Subgroup {
                    inner: Box::new(inner),
                })
            }
            _ => Err(self.err("closing ]")),
        }
    }

    fn compound(&mut self) -> Result<NotationNode, ParseError> {
        let head = match self.peek().map(|t| t.kind) {
            Some(TokenKind::OpenBracket) => self.subgroup()?,
            _ => self.element(true)?,
        };
        let mut attachments = Vec::new();
        while self.peek().map(|t| starts_attachment(t.kind)).unwrap_or(false) {
            attachments.push(self.element(false)?);
        }
        if attachments.is_empty() {
            Ok(head)
        } else {
            Ok(NotationNode::Compound {
                head: Box::new(head),
                attachments,
            })
        }
    }

    fn element(&mut self, is_head: bool) -> Result<NotationNode, ParseError> {
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return Err(self.err("a notation element")),
        };
        let node = match tok.kind {
            TokenKind::Digits => {
                self.pos += 1;
                NotationNode::Element {
                    kind: ElementKind::MainNumber,
                    raw: tok.lexeme.to_string(),
                    span: tok.span,
                }
            }
            TokenKind::Open => self.paren_aux()?,
            TokenKind::Quote => self.time_aux()?,
            TokenKind::Equals => {
                self.pos += 1;
                let digits = self.expect_digits("digits after =")?;
                NotationNode::Element {
                    kind: ElementKind::LanguageAux,
                    raw: format!("={}", digits.lexeme),
                    span: tok.span.start..digits.span.end,
                }
            }
            TokenKind::Hyphen => {
                self.pos += 1;
                let digits = self.expect_digits("digits after -")?;
                let kind = match digits.lexeme.as_bytes() {
                    [b'0', b'2', ..] => ElementKind::PropertiesAux,
                    [b'0', b'3', ..] => ElementKind::MaterialsAux,
                    [b'0', b'4', ..] => ElementKind::ProcessesAux,
                    [b'0', b'5', ..] => ElementKind::PersonsAux,
                    [b'1'..=b'9', ..] => ElementKind::SpecialHyphen,
                    _ => {
                        return Err(ParseError {
                            position: digits.span.start,
                            expected: "-02/-03/-04/-05 or a digit 1-9 after -".into(),
                        })
                    }
                };
                NotationNode::Element {
                    kind,
                    raw: format!("-{}", digits.lexeme),
                    span: tok.span.start..digits.span.end,
                }
            }
            TokenKind::Apostrophe => {
                self.pos += 1;
                let digits = self.expect_digits("digits after the apostrophe")?;
                NotationNode::Element {
                    kind: ElementKind::SpecialApostrophe,
                    raw: format!("{}{}", APOSTROPHE, digits.lexeme),
                    span: tok.span.start..digits.span.end,
                }
            }
            TokenKind::PointZero => {
                self.pos += 1;
                NotationNode::Element {
                    kind: ElementKind::SpecialPointZero,
                    raw: tok.lexeme.to_string(),
                    span: tok.span,
                }
            }
            TokenKind::Letters => {
                self.pos += 1;
                NotationNode::Element {
                    kind: ElementKind::AlphaExtension,
                    raw: tok.lexeme.to_string(),
                    span: tok.span,
                }
            }
            TokenKind::Asterisk => {
                // consume content until the next facet indicator, connector
                // or closing bracket
                self.pos += 1;
                let mut raw = String::from("*");
                let mut end = tok.span.end;
                while let Some(t) = self.peek() {
                    match t.kind {
                        TokenKind::Digits | TokenKind::Letters | TokenKind::PointZero => {
                            raw.push_str(t.lexeme);
                            end = t.span.end;
                            self.pos += 1;
                        }
                        _ => break,
                    }
                }
                if raw.len() == 1 {
                    return Err(self.err("a code after *"));
                }
                NotationNode::Element {
                    kind: ElementKind::OtherSystemCode,
                    raw,
                    span: tok.span.start..end,
                }
            }
            _ => return Err(self.err("a notation element")),
        };
        if is_head {
            if let NotationNode::Element { kind, span, .. } = &node {
                if *kind != ElementKind::MainNumber && !kind.is_common_aux() {
                    return Err(ParseError {
                        position: span.start,
                        expected: "a main number or a common auxiliary".into(),
                    });
                }
            }
        }
        Ok(node)
    }

    fn expect_digits(&mut self, expected: &str) -> Result<Token<'a>, ParseError> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Digits => {
                let t = t.clone();
                self.pos += 1;
                Ok(t)
            }
            _ => Err(self.err(expected)),
        }
    }

    /// A parenthesized common auxiliary: form `(0...)`, place `(1...)` to
    /// `(9...)` or ethnic `(=...)`. The raw text keeps the parentheses and
    /// any nested parenthesized content.
    fn paren_aux(&mut self) -> Result<NotationNode, ParseError> {
        let open = self.bump().unwrap().clone();
        let kind = match self.peek() {
            Some(t) if t.kind == TokenKind::Equals => ElementKind::EthnicAux,
            Some(t) if t.kind == TokenKind::Digits => {
                if t.lexeme.starts_with('0') {
                    ElementKind::FormAux
                } else {
                    ElementKind::PlaceAux
                }
            }
            _ => {
                return Err(ParseError {
                    position: open.span.start,
                    expected: "digits or = after (".into(),
                })
            }
        };
        let mut raw = String::from("(");
        let mut depth = 1usize;
        let end;
        loop {
            let tok = match self.bump() {
                Some(t) => t.clone(),
                None => {
                    return Err(ParseError {
                        position: open.span.start,
                        expected: "closing )".into(),
                    })
                }
            };
            match tok.kind {
                TokenKind::Open => depth += 1,
                TokenKind::Close => {
                    depth -= 1;
                    if depth == 0 {
                        raw.push(')');
                        end = tok.span.end;
                        break;
                    }
                }
                TokenKind::OpenBracket | TokenKind::CloseBracket | TokenKind::Quote => {
                    return Err(ParseError {
                        position: tok.span.start,
                        expected: "content of a parenthesized auxiliary".into(),
                    })
                }
                _ => {}
            }
            if depth > 0 {
                // apostrophes inside the auxiliary are canonicalised too
                if tok.kind == TokenKind::Apostrophe {
                    raw.push(APOSTROPHE);
                } else {
                    raw.push_str(tok.lexeme);
                }
            }
        }
        Ok(NotationNode::Element {
            kind,
            raw,
            span: open.span.start..end,
        })
    }

    /// A time auxiliary delimited by double quotes, e.g. `"19"`.
    fn time_aux(&mut self) -> Result<NotationNode, ParseError> {
        let open = self.bump().unwrap().clone();
        let mut raw = String::from("\"");
        let end;
        loop {
            let tok = match self.bump() {
                Some(t) => t.clone(),
                None => {
                    return Err(ParseError {
                        position: open.span.start,
                        expected: "closing \"".into(),
                    })
                }
            };
            match tok.kind {
                TokenKind::Quote => {
                    if raw.len() == 1 {
                        return Err(ParseError {
                            position: tok.span.start,
                            expected: "content of a time auxiliary".into(),
                        });
                    }
                    raw.push('"');
                    end = tok.span.end;
                    break;
                }
                TokenKind::Digits
                | TokenKind::PointZero
                | TokenKind::Letters
                | TokenKind::Slash
                | TokenKind::Hyphen
                | TokenKind::Plus
                | TokenKind::Equals
                | TokenKind::Relation => raw.push_str(tok.lexeme),
                _ => {
                    return Err(ParseError {
                        position: tok.span.start,
                        expected: "content of a time auxiliary".into(),
                    })
                }
            }
        }
        Ok(NotationNode::Element {
            kind: ElementKind::TimeAux,
            raw,
            span: open.span.start..end,
        })
    }
}

fn starts_attachment(kind: TokenKind) -> bool {
    matches!(
        kind,
        TokenKind::Open
            | TokenKind::Quote
            | TokenKind::Equals
            | TokenKind::Hyphen
            | TokenKind::Apostrophe
            | TokenKind::PointZero
            | TokenKind::Letters
            | TokenKind::Asterisk
    )
}

fn connector_of(kind: TokenKind) -> Option<Connector> {
    match kind {
        TokenKind::Plus => Some(Connector::Coordination),
        TokenKind::Relation => Some(Connector::Relation),
        TokenKind::OrderFixing => Some(Connector::OrderFixing),
        TokenKind::Slash => Some(Connector::Consecutive),
        _ => None,
    }
}

impl fmt::Display for NotationNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaf_kinds(raw: &str) -> Vec<(String, ElementKind)> {
        parse(raw)
            .unwrap()
            .flat_elements()
            .into_iter()
            .filter_map(|i| match i {
                FlatItem::Element { raw, kind } => Some((raw.to_string(), kind)),
                FlatItem::Connector(_) => None,
            })
            .collect()
    }

    #[test]
    fn tokenize_place_compound() {
        let toks = tokenize("94(492)").unwrap();
        let lexemes: Vec<_> = toks.iter().map(|t| t.lexeme).collect();
        assert_eq!(lexemes, ["94", "(", "492", ")"]);
        assert_eq!(toks[0].kind, TokenKind::Digits);
        assert_eq!(toks[2].kind, TokenKind::Digits);
    }

    #[test]
    fn tokenize_single_number() {
        let toks = tokenize("94").unwrap();
        assert_eq!(toks.len(), 1);
        assert_eq!(toks[0].lexeme, "94");
        assert_eq!(toks[0].span, 0..2);
    }

    #[test]
    fn tokenize_longest_match_order_fixing() {
        let toks = tokenize("913::94").unwrap();
        let kinds: Vec<_> = toks.iter().map(|t| t.kind).collect();
        assert_eq!(
            kinds,
            [TokenKind::Digits, TokenKind::OrderFixing, TokenKind::Digits]
        );

        // oracle: slide a 2-char window over the input; wherever "::" occurs
        // the tokenizer must emit one OrderFixing token, never two Relations
        for raw in ["::", "94::95", "9::9::9", ":::"] {
            let toks = tokenize(raw).unwrap();
            for pair in toks.windows(2) {
                assert!(
                    !(pair[0].kind == TokenKind::Relation
                        && pair[1].kind == TokenKind::Relation
                        && pair[0].span.end == pair[1].span.start),
                    "two adjacent relations in {raw:?}"
                );
            }
        }
    }

    #[test]
    fn tokenize_covers_every_byte() {
        for raw in ["94(492)", "821.124.5`06-32(883)(082)(086.7)(0.034MP3)=111"] {
            let toks = tokenize(raw).unwrap();
            let mut at = 0;
            for t in &toks {
                assert_eq!(t.span.start, at);
                at = t.span.end;
            }
            assert_eq!(at, raw.len());
        }
    }

    #[test]
    fn tokenize_rejects_foreign_characters() {
        assert_eq!(tokenize("94 92"), Err(LexError { position: 2 }));
        assert_eq!(tokenize("94;"), Err(LexError { position: 2 }));
    }

    #[test]
    fn parse_atomic() {
        assert_eq!(
            parse("94").unwrap(),
            NotationNode::Element {
                kind: ElementKind::MainNumber,
                raw: "94".into(),
                span: 0..2,
            }
        );
    }

    #[test]
    fn parse_relation_of_two_compounds() {
        let tree = parse("94(492):94(729.885)").unwrap();
        match &tree {
            NotationNode::Connected {
                operands,
                connectors,
            } => {
                assert_eq!(connectors, &[Connector::Relation]);
                assert_eq!(operands.len(), 2);
                for (op, place) in operands.iter().zip(["(492)", "(729.885)"]) {
                    match op {
                        NotationNode::Compound { head, attachments } => {
                            assert_eq!(head.as_ref().serialize(), "94");
                            assert_eq!(attachments.len(), 1);
                            match &attachments[0] {
                                NotationNode::Element { kind, raw, .. } => {
                                    assert_eq!(*kind, ElementKind::PlaceAux);
                                    assert_eq!(raw, place);
                                }
                                other => panic!("unexpected attachment {other:?}"),
                            }
                        }
                        other => panic!("unexpected operand {other:?}"),
                    }
                }
            }
            other => panic!("unexpected tree {other:?}"),
        }
    }

    #[test]
    fn parse_long_compound() {
        let kinds = leaf_kinds("821.124.5`06-32(883)(082)(086.7)(0.034MP3)=111");
        let expected = [
            ("821.124.5", ElementKind::MainNumber),
            ("`06", ElementKind::SpecialApostrophe),
            ("-32", ElementKind::SpecialHyphen),
            ("(883)", ElementKind::PlaceAux),
            ("(082)", ElementKind::FormAux),
            ("(086.7)", ElementKind::FormAux),
            ("(0.034MP3)", ElementKind::FormAux),
            ("=111", ElementKind::LanguageAux),
        ];
        assert_eq!(kinds.len(), expected.len());
        for ((raw, kind), (eraw, ekind)) in kinds.iter().zip(expected) {
            assert_eq!(raw, eraw);
            assert_eq!(*kind, ekind);
        }
    }

    #[test]
    fn parse_time_and_place_attachments() {
        let kinds = leaf_kinds("94\"19\"(492)");
        assert_eq!(
            kinds,
            [
                ("94".to_string(), ElementKind::MainNumber),
                ("\"19\"".to_string(), ElementKind::TimeAux),
                ("(492)".to_string(), ElementKind::PlaceAux),
            ]
        );
    }

    #[test]
    fn parse_common_aux_kinds() {
        assert_eq!(leaf_kinds("=112.5")[0].1, ElementKind::LanguageAux);
        assert_eq!(leaf_kinds("(=411.16)")[0].1, ElementKind::EthnicAux);
        assert_eq!(leaf_kinds("62-05")[1].1, ElementKind::PersonsAux);
        assert_eq!(leaf_kinds("62-023")[1].1, ElementKind::PropertiesAux);
        assert_eq!(leaf_kinds("62-032")[1].1, ElementKind::MaterialsAux);
        assert_eq!(leaf_kinds("62-044")[1].1, ElementKind::ProcessesAux);
        assert_eq!(leaf_kinds("53.01")[1].1, ElementKind::SpecialPointZero);
        assert_eq!(leaf_kinds("(492Delft)")[0].1, ElementKind::PlaceAux);
        assert_eq!(leaf_kinds("94A")[1].1, ElementKind::AlphaExtension);
        assert_eq!(leaf_kinds("523.4*Mars")[1].1, ElementKind::OtherSystemCode);
    }

    #[test]
    fn parse_consecutive_and_subgroup() {
        assert!(matches!(
            parse("93/94").unwrap(),
            NotationNode::Connected { .. }
        ));
        match parse("[94+32](492)").unwrap() {
            NotationNode::Compound { head, .. } => {
                assert!(matches!(*head, NotationNode::Subgroup { .. }))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn apostrophe_is_canonicalised() {
        let tree = parse("821.124.5'06").unwrap();
        assert_eq!(tree.serialize(), "821.124.5`06");
    }

    #[test]
    fn parse_errors() {
        // dangling connector
        assert!(parse("94:").is_err());
        // unbalanced brackets and quotes
        assert!(parse("(492").is_err());
        assert!(parse("94)").is_err());
        assert!(parse("[94").is_err());
        assert!(parse("\"19").is_err());
        // empty subgroup and empty auxiliaries
        assert!(parse("[]").is_err());
        assert!(parse("()").is_err());
        assert!(parse("94=").is_err());
        assert!(parse("94-").is_err());
        // empty input
        assert!(parse("").is_err());
        // special auxiliary cannot head a classmark
        assert!(parse("-32(883)").is_err());
    }

    #[test]
    fn parse_error_position_on_open_paren() {
        match parse("(") {
            Err(NotationError::Parse(e)) => assert_eq!(e.position, 0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn round_trip_examples() {
        for raw in [
            "94",
            "94(492)",
            "94(492):94(729.885)",
            "821.124.5`06-32(883)(082)(086.7)(0.034MP3)=111",
            "913::94",
            "93/94",
            "582.28(26)",
            "582.281.1(035)",
            "620.178.162.44",
            "94\"19\"(492)",
            "[94+32](492)",
            "913:94(492)",
            "(492Delft)",
            "(0.034MP3)",
            "=112.5",
            "(1/9)",
        ] {
            assert_eq!(parse(raw).unwrap().serialize(), raw);
        }
    }

    #[test]
    fn flat_elements_with_connector() {
        let tree = parse("94(492):94(729.885)").unwrap();
        let items = tree.flat_elements();
        assert_eq!(items.len(), 5);
        assert!(matches!(items[2], FlatItem::Connector(Connector::Relation)));
    }
}
