use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{tuple_index, FiniteAlgebra, MAX_SIZE};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ValidationIssue {
    EmptyCarrier,
    TooLarge {
        size: usize,
    },
    DuplicateSymbol {
        symbol: String,
    },
    ZeroArity {
        symbol: String,
    },
    TableLength {
        symbol: String,
        expected: usize,
        found: usize,
    },
    OutOfRange {
        symbol: String,
        index: usize,
        value: usize,
    },
    NotIdempotent {
        symbol: String,
        element: usize,
        value: usize,
    },
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationIssue::EmptyCarrier => write!(f, "carrier is empty"),
            ValidationIssue::TooLarge { size } => write!(f, "size {size} exceeds {MAX_SIZE}"),
            ValidationIssue::DuplicateSymbol { symbol } => write!(f, "symbol {symbol} appears twice"),
            ValidationIssue::ZeroArity { symbol } => write!(f, "operation {symbol} has arity 0"),
            ValidationIssue::TableLength {
                symbol,
                expected,
                found,
            } => {
                write!(f, "operation {symbol}: table has {found} entries, expected {expected}")
            }
            ValidationIssue::OutOfRange { symbol, index, value } => {
                write!(f, "operation {symbol}: entry {index} is {value}, out of range")
            }
            ValidationIssue::NotIdempotent { symbol, element, value } => {
                write!(
                    f,
                    "operation {symbol} is not idempotent: {symbol}({element},...,{element}) = {value}"
                )
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
    pub idempotent: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

pub fn validate_algebra(alg: &FiniteAlgebra) -> ValidationReport {
    let n = alg.size;
    let mut issues = Vec::new();
    if n == 0 {
        issues.push(ValidationIssue::EmptyCarrier);
    }
    if n > MAX_SIZE {
        issues.push(ValidationIssue::TooLarge { size: n });
    }
    let mut seen = HashSet::new();
    let mut idempotent = true;
    for op in &alg.ops {
        if !seen.insert(op.symbol.as_str()) {
            issues.push(ValidationIssue::DuplicateSymbol {
                symbol: op.symbol.clone(),
            });
        }
        if op.arity == 0 {
            issues.push(ValidationIssue::ZeroArity {
                symbol: op.symbol.clone(),
            });
            continue;
        }
        let expected = n.checked_pow(op.arity as u32).unwrap_or(usize::MAX);
        if op.table.len() != expected {
            issues.push(ValidationIssue::TableLength {
                symbol: op.symbol.clone(),
                expected,
                found: op.table.len(),
            });
            idempotent = false;
            continue;
        }
        if let Some((index, &value)) = op.table.iter().enumerate().find(|(_, &v)| v >= n) {
            issues.push(ValidationIssue::OutOfRange {
                symbol: op.symbol.clone(),
                index,
                value,
            });
            idempotent = false;
            continue;
        }
        for a in 0..n {
            let value = op.table[tuple_index(n, &vec![a; op.arity])];
            if value != a {
                issues.push(ValidationIssue::NotIdempotent {
                    symbol: op.symbol.clone(),
                    element: a,
                    value,
                });
                idempotent = false;
                break;
            }
        }
    }
    ValidationReport { issues, idempotent }
}
