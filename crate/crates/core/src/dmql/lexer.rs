//! Tokenizer for the modified-DMQL classification language.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keyword {
    Classify,
    Till,
    Replace,
    AttributeValues,
    Attribute,
    Values,
    With,
    NewAttribute,
    According,
    To,
    Priority,
    In,
    Relevance,
    Where,
    For,
    Count,
    From,
    And,
}

impl Keyword {
    pub fn from_str(s: &str) -> Option<Keyword> {
        Some(match s.to_lowercase().as_str() {
            "classify" => Keyword::Classify,
            "till" => Keyword::Till,
            "replace" => Keyword::Replace,
            "attribute_values" => Keyword::AttributeValues,
            "attribute" => Keyword::Attribute,
            "values" => Keyword::Values,
            "with" => Keyword::With,
            "new_attribute" => Keyword::NewAttribute,
            "according" => Keyword::According,
            "to" => Keyword::To,
            "priority" => Keyword::Priority,
            "in" => Keyword::In,
            "relevance" => Keyword::Relevance,
            "where" => Keyword::Where,
            "for" => Keyword::For,
            "count" => Keyword::Count,
            "from" => Keyword::From,
            "and" => Keyword::And,
            _ => return None,
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Keyword::Classify => "classify",
            Keyword::Till => "till",
            Keyword::Replace => "replace",
            Keyword::AttributeValues => "attribute_values",
            Keyword::Attribute => "attribute",
            Keyword::Values => "values",
            Keyword::With => "with",
            Keyword::NewAttribute => "new_attribute",
            Keyword::According => "according",
            Keyword::To => "to",
            Keyword::Priority => "priority",
            Keyword::In => "in",
            Keyword::Relevance => "relevance",
            Keyword::Where => "where",
            Keyword::For => "for",
            Keyword::Count => "count",
            Keyword::From => "from",
            Keyword::And => "and",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Keyword(Keyword),
    Ident,
    Str,
    Number,
    Punct(char),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub line: usize,
    pub column: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    // Dotted values like India.east are legal bare identifiers.
    c.is_alphanumeric() || c == '_' || c == '.'
}

pub fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1usize;
    let mut column = 1usize;

    while let Some(&c) = chars.peek() {
        let (tok_line, tok_column) = (line, column);
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        if c == '/' {
            // Line comment: `// ...`.
            chars.next();
            column += 1;
            if chars.peek() == Some(&'/') {
                while let Some(&d) = chars.peek() {
                    if d == '\n' {
                        break;
                    }
                    chars.next();
                    column += 1;
                }
                continue;
            }
            return Err(Error::syntax(tok_line, tok_column, "illegal character '/'"));
        }
        if c == '"' {
            chars.next();
            column += 1;
            let mut s = String::new();
            loop {
                match chars.next() {
                    None => {
                        return Err(Error::syntax(
                            tok_line,
                            tok_column,
                            "unterminated string",
                        ))
                    }
                    Some('\n') => {
                        return Err(Error::syntax(
                            tok_line,
                            tok_column,
                            "unterminated string",
                        ))
                    }
                    Some('"') => {
                        column += 1;
                        break;
                    }
                    Some(d) => {
                        column += 1;
                        s.push(d);
                    }
                }
            }
            tokens.push(Token {
                kind: TokenKind::Str,
                lexeme: s,
                line: tok_line,
                column: tok_column,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let mut n = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_digit() {
                    n.push(d);
                    chars.next();
                    column += 1;
                } else {
                    break;
                }
            }
            tokens.push(Token {
                kind: TokenKind::Number,
                lexeme: n,
                line: tok_line,
                column: tok_column,
            });
            continue;
        }
        if is_ident_start(c) {
            let mut word = String::new();
            while let Some(&d) = chars.peek() {
                if is_ident_continue(d) {
                    word.push(d);
                    chars.next();
                    column += 1;
                } else {
                    break;
                }
            }
            // `priority2` lexes as the priority keyword followed by a number.
            let lower = word.to_lowercase();
            if let Some(digits) = lower.strip_prefix("priority") {
                if !digits.is_empty() && digits.chars().all(|d| d.is_ascii_digit()) {
                    tokens.push(Token {
                        kind: TokenKind::Keyword(Keyword::Priority),
                        lexeme: word[.."priority".len()].to_string(),
                        line: tok_line,
                        column: tok_column,
                    });
                    tokens.push(Token {
                        kind: TokenKind::Number,
                        lexeme: digits.to_string(),
                        line: tok_line,
                        column: tok_column + "priority".len(),
                    });
                    continue;
                }
            }
            let kind = match Keyword::from_str(&word) {
                Some(k) => TokenKind::Keyword(k),
                None => TokenKind::Ident,
            };
            tokens.push(Token {
                kind,
                lexeme: word,
                line: tok_line,
                column: tok_column,
            });
            continue;
        }
        if "{}(),=".contains(c) {
            chars.next();
            column += 1;
            tokens.push(Token {
                kind: TokenKind::Punct(c),
                lexeme: c.to_string(),
                line: tok_line,
                column: tok_column,
            });
            continue;
        }
        return Err(Error::syntax(
            tok_line,
            tok_column,
            format!("illegal character '{}'", c),
        ));
    }
    Ok(tokens)
}
