use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("row {row}: expected {expected} fields, found {found}")]
    ArityMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row}, attribute '{attribute}': cannot parse '{value}' as a number")]
    BadNumeric {
        row: usize,
        attribute: String,
        value: String,
    },
    #[error("duplicate attribute name '{0}'")]
    DuplicateAttribute(String),
    #[error("input contains no data rows")]
    EmptyInput,
    #[error("schema must designate exactly one class attribute, found {0}")]
    ClassCount(usize),
    #[error("unknown attribute '{0}'")]
    UnknownAttribute(String),
    #[error("attribute '{0}' is the class attribute")]
    ClassAttribute(String),
    #[error("bad schema line '{0}'")]
    BadSchemaLine(String),

    #[error("hierarchy cycle through value '{0}'")]
    HierarchyCycle(String),
    #[error("value '{0}' has no path to the top level")]
    OrphanValue(String),
    #[error("value '{0}' is mapped to more than one parent")]
    DuplicateParent(String),
    #[error("value '{value}' not covered by the hierarchy for '{attribute}'")]
    UncoveredValue { attribute: String, value: String },
    #[error("unknown value '{0}' in hierarchy")]
    UnknownValue(String),
    #[error("bad hierarchy line '{0}'")]
    BadHierarchyLine(String),
    #[error("hierarchy has more parent steps than declared levels at value '{0}'")]
    LevelOverflow(String),

    #[error("attribute '{0}' has fewer than 2 distinct numeric values")]
    NoNumericSplit(String),
    #[error("cannot build a tree from an empty dataset")]
    EmptyDataset,
    #[error("node at path {0:?} is a leaf")]
    LeafNode(Vec<String>),
    #[error("no node at path {0:?}")]
    BadNodePath(Vec<String>),

    #[error("priority attribute '{0}' not in the schema")]
    UnknownPriorityAttribute(String),

    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown dataset '{0}'")]
    UnknownDataset(String),
    #[error("no hierarchy covers the replacement values {0:?}")]
    NoMatchingHierarchy(Vec<String>),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }
}
