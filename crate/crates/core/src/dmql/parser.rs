//! Recursive-descent parser for the classification-task grammar:
//!
//! ```text
//! query     := "classify" ident clause*
//! clause    := till | priority | relevance | leafcount | from | where
//! till      := "till" ident "replace" "{" valuelist "}" attr_values
//!              "with" "new_attribute" ident
//! priority  := "according" "to" "priority" [number]
//!              "{" ident "(" valuelist ")" attr_values "}"
//! relevance := "in" "relevance" "to" identlist ["new_attribute" ident]
//! leafcount := ("where" | "with") "attribute" "values" "for" ident "count"
//! from      := "from" ident
//! where     := "where" binding ("and" binding)*
//! binding   := ident "=" "{" valuelist "}"
//! attr_values := "attribute_values" | "attribute" "values"
//! ```
//!
//! Keywords are case-insensitive; `priorityN` means priority rank N and a
//! bare `priority` means rank 1.

use super::lexer::{tokenize, Keyword, Token, TokenKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Task {
    Generalize,
    ClassifyTree,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplaceClause {
    pub from_level: String,
    pub to_level: String,
    pub new_attribute: String,
    pub target_values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PriorityClause {
    pub rank: u32,
    pub attribute: String,
    pub value_order: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DmqlQuery {
    /// The identifier right after `classify` (e.g. Decision_Tree).
    pub subject: String,
    pub task: Task,
    pub source_dataset: String,
    pub replace_clause: Option<ReplaceClause>,
    pub priorities: Vec<PriorityClause>,
    /// Relevant attributes; the first entry names the class attribute.
    pub relevance: Vec<String>,
    /// `new_attribute <name>` trailing the relevance list requests a count
    /// column under that name.
    pub count_column: Option<String>,
    pub leaf_count_attr: Option<String>,
    /// Advisory `where X={...}` value-set bindings.
    pub bindings: Vec<(String, Vec<String>)>,
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek2(&self) -> Option<&Token> {
        self.tokens.get(self.pos + 1)
    }

    fn here(&self) -> (usize, usize) {
        match self.peek() {
            Some(t) => (t.line, t.column),
            None => self
                .tokens
                .last()
                .map(|t| (t.line, t.column + t.lexeme.len()))
                .unwrap_or((1, 1)),
        }
    }

    fn err_expected(&self, what: &str) -> Error {
        let (line, column) = self.here();
        let found = match self.peek() {
            Some(t) => format!("'{}'", t.lexeme),
            None => "end of input".to_string(),
        };
        Error::syntax(line, column, format!("expected {}, found {}", what, found))
    }

    fn at_keyword(&self, k: Keyword) -> bool {
        matches!(self.peek(), Some(t) if t.kind == TokenKind::Keyword(k))
    }

    fn eat_keyword(&mut self, k: Keyword) -> bool {
        if self.at_keyword(k) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, k: Keyword) -> Result<()> {
        if self.eat_keyword(k) {
            Ok(())
        } else {
            Err(self.err_expected(&format!("'{}'", k.as_str())))
        }
    }

    fn expect_punct(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Punct(c) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err_expected(&format!("'{}'", c))),
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Ident => {
                let s = t.lexeme.clone();
                self.pos += 1;
                Ok(s)
            }
            // Clause keywords double as plain names in value positions
            // (e.g. an attribute literally named `count`).
            Some(t) if matches!(t.kind, TokenKind::Keyword(Keyword::Count)) => {
                let s = t.lexeme.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err_expected(what)),
        }
    }

    /// Comma-separated identifiers / quoted strings until a closing bracket.
    fn value_list(&mut self, close: char) -> Result<Vec<String>> {
        let mut out = Vec::new();
        loop {
            match self.peek() {
                Some(t) if t.kind == TokenKind::Ident || t.kind == TokenKind::Str => {
                    out.push(t.lexeme.clone());
                    self.pos += 1;
                }
                _ => return Err(self.err_expected("a value")),
            }
            match self.peek() {
                Some(t) if t.kind == TokenKind::Punct(',') => {
                    self.pos += 1;
                }
                Some(t) if t.kind == TokenKind::Punct(close) => return Ok(out),
                _ => return Err(self.err_expected(&format!("',' or '{}'", close))),
            }
        }
    }

    /// `attribute_values` or `attribute values`.
    fn expect_attribute_values(&mut self) -> Result<()> {
        if self.eat_keyword(Keyword::AttributeValues) {
            return Ok(());
        }
        if self.eat_keyword(Keyword::Attribute) {
            return self.expect_keyword(Keyword::Values);
        }
        Err(self.err_expected("'attribute_values'"))
    }

    fn parse_query(&mut self) -> Result<DmqlQuery> {
        self.expect_keyword(Keyword::Classify)?;
        let subject = self.expect_ident("a name after 'classify'")?;
        let mut q = DmqlQuery {
            subject,
            task: Task::ClassifyTree,
            source_dataset: String::new(),
            replace_clause: None,
            priorities: Vec::new(),
            relevance: Vec::new(),
            count_column: None,
            leaf_count_attr: None,
            bindings: Vec::new(),
        };
        let mut have_from = false;
        while let Some(t) = self.peek() {
            match t.kind {
                TokenKind::Keyword(Keyword::Till) => {
                    self.pos += 1;
                    let to_level = self.expect_ident("a level name after 'till'")?;
                    self.expect_keyword(Keyword::Replace)?;
                    self.expect_punct('{')?;
                    let target_values = self.value_list('}')?;
                    self.expect_punct('}')?;
                    self.expect_attribute_values()?;
                    self.expect_keyword(Keyword::With)?;
                    self.expect_keyword(Keyword::NewAttribute)?;
                    let new_attribute = self.expect_ident("a new attribute name")?;
                    q.task = Task::Generalize;
                    q.replace_clause = Some(ReplaceClause {
                        from_level: q.subject.clone(),
                        to_level,
                        new_attribute,
                        target_values,
                    });
                }
                TokenKind::Keyword(Keyword::According) => {
                    self.pos += 1;
                    self.expect_keyword(Keyword::To)?;
                    self.expect_keyword(Keyword::Priority)?;
                    let rank = match self.peek() {
                        Some(t) if t.kind == TokenKind::Number => {
                            let n: u32 = t.lexeme.parse().map_err(|_| {
                                Error::syntax(t.line, t.column, "bad priority rank")
                            })?;
                            self.pos += 1;
                            n
                        }
                        _ => 1,
                    };
                    self.expect_punct('{')?;
                    let attribute = self.expect_ident("a priority attribute")?;
                    self.expect_punct('(')?;
                    let value_order = self.value_list(')')?;
                    self.expect_punct(')')?;
                    self.expect_attribute_values()?;
                    self.expect_punct('}')?;
                    q.priorities.push(PriorityClause {
                        rank,
                        attribute,
                        value_order,
                    });
                }
                TokenKind::Keyword(Keyword::In) => {
                    self.pos += 1;
                    self.expect_keyword(Keyword::Relevance)?;
                    self.expect_keyword(Keyword::To)?;
                    loop {
                        q.relevance.push(self.expect_ident("an attribute name")?);
                        if matches!(self.peek(), Some(t) if t.kind == TokenKind::Punct(',')) {
                            self.pos += 1;
                        } else {
                            break;
                        }
                    }
                    if self.eat_keyword(Keyword::NewAttribute) {
                        q.count_column = Some(self.expect_ident("a count column name")?);
                    }
                }
                TokenKind::Keyword(Keyword::From) => {
                    self.pos += 1;
                    q.source_dataset = self.expect_ident("a dataset name")?;
                    have_from = true;
                }
                TokenKind::Keyword(Keyword::Where) | TokenKind::Keyword(Keyword::With) => {
                    let is_where = t.kind == TokenKind::Keyword(Keyword::Where);
                    // `where attribute values for X count` is the leaf-count
                    // clause; any other `where` starts bindings.
                    let leafcount = matches!(
                        self.peek2().map(|t| &t.kind),
                        Some(TokenKind::Keyword(Keyword::Attribute))
                            | Some(TokenKind::Keyword(Keyword::AttributeValues))
                    );
                    if leafcount {
                        self.pos += 1;
                        self.expect_attribute_values()?;
                        self.expect_keyword(Keyword::For)?;
                        q.leaf_count_attr = Some(self.expect_ident("an attribute name")?);
                        self.expect_keyword(Keyword::Count)?;
                    } else if is_where {
                        self.pos += 1;
                        loop {
                            let name = self.expect_ident("a binding name")?;
                            self.expect_punct('=')?;
                            self.expect_punct('{')?;
                            let values = self.value_list('}')?;
                            self.expect_punct('}')?;
                            q.bindings.push((name, values));
                            if !self.eat_keyword(Keyword::And) {
                                break;
                            }
                        }
                    } else {
                        return Err(self.err_expected("'attribute values' after 'with'"));
                    }
                }
                _ => return Err(self.err_expected("a clause keyword")),
            }
        }
        if !have_from {
            let (line, column) = self.here();
            return Err(Error::syntax(line, column, "missing 'from' clause"));
        }
        if q.task == Task::ClassifyTree && q.relevance.is_empty() {
            let (line, column) = self.here();
            return Err(Error::syntax(
                line,
                column,
                "classification task needs an 'in relevance to' clause",
            ));
        }
        for (name, values) in &q.bindings {
            if values.is_empty() {
                let (line, column) = self.here();
                return Err(Error::syntax(
                    line,
                    column,
                    format!("binding '{}' has an empty value set", name),
                ));
            }
        }
        // Priority ranks must be 1..k without duplicates.
        let mut ranks: Vec<u32> = q.priorities.iter().map(|p| p.rank).collect();
        ranks.sort_unstable();
        for (i, r) in ranks.iter().enumerate() {
            if *r != (i + 1) as u32 {
                let (line, column) = self.here();
                return Err(Error::syntax(
                    line,
                    column,
                    format!("priority ranks must be contiguous from 1, got rank {}", r),
                ));
            }
        }
        Ok(q)
    }
}

pub fn parse(text: &str) -> Result<DmqlQuery> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0 };
    p.parse_query()
}

fn quote_if_needed(v: &str) -> String {
    let bare = !v.is_empty()
        && v.chars().next().map(|c| c.is_alphabetic() || c == '_').unwrap_or(false)
        && v.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '.')
        && Keyword::from_str(v).is_none();
    if bare {
        v.to_string()
    } else {
        format!("\"{}\"", v)
    }
}

/// Canonical text form; `parse(pretty_print(parse(q)))` is a fixpoint.
pub fn pretty_print(q: &DmqlQuery) -> String {
    let mut out = format!("classify {}\n", q.subject);
    if let Some(r) = &q.replace_clause {
        let values: Vec<String> = r.target_values.iter().map(|v| quote_if_needed(v)).collect();
        out.push_str(&format!(
            "till {} replace {{{}}} attribute_values with new_attribute {}\n",
            r.to_level,
            values.join(","),
            r.new_attribute
        ));
    }
    let mut priorities = q.priorities.clone();
    priorities.sort_by_key(|p| p.rank);
    for p in &priorities {
        let values: Vec<String> = p.value_order.iter().map(|v| quote_if_needed(v)).collect();
        out.push_str(&format!(
            "according to priority{} {{{}({}) attribute_values}}\n",
            p.rank,
            p.attribute,
            values.join(",")
        ));
    }
    if !q.relevance.is_empty() {
        out.push_str(&format!("in relevance to {}", q.relevance.join(",")));
        if let Some(c) = &q.count_column {
            out.push_str(&format!(" new_attribute {}", c));
        }
        out.push('\n');
    }
    if let Some(a) = &q.leaf_count_attr {
        out.push_str(&format!("where attribute values for {} count\n", a));
    }
    out.push_str(&format!("from {}\n", q.source_dataset));
    if !q.bindings.is_empty() {
        let parts: Vec<String> = q
            .bindings
            .iter()
            .map(|(name, values)| {
                let vals: Vec<String> = values.iter().map(|v| format!("\"{}\"", v)).collect();
                format!("{}={{{}}}", name, vals.join(","))
            })
            .collect();
        out.push_str(&format!("where {}\n", parts.join(" and ")));
    }
    out
}
