//! Monotonicity specifications: for each uninterpreted symbol, the 1-based
//! argument positions in which it must be monotone or anti-monotone.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use crate::term::FunctionSymbol;

/// How a function must behave in one argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Monotone,
    AntiMonotone,
    Free,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ArgSpec {
    pub monotone: BTreeSet<usize>,
    pub anti: BTreeSet<usize>,
}

impl ArgSpec {
    pub fn direction(&self, i: usize) -> Direction {
        if self.monotone.contains(&i) {
            Direction::Monotone
        } else if self.anti.contains(&i) {
            Direction::AntiMonotone
        } else {
            Direction::Free
        }
    }

    /// Positions in `monotone ∪ anti`, ascending.
    pub fn constrained(&self) -> impl Iterator<Item = usize> + '_ {
        let all: BTreeSet<usize> = self.monotone.union(&self.anti).copied().collect();
        all.into_iter()
    }

    pub fn is_vacuous(&self) -> bool {
        self.monotone.is_empty() && self.anti.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("symbol `{0}` is interpreted; only uninterpreted symbols may carry monotonicity")]
    Interpreted(String),
    #[error("symbol `{symbol}` has arity {arity}, index {index} out of range")]
    IndexOutOfRange {
        symbol: String,
        index: usize,
        arity: usize,
    },
    #[error("symbol `{symbol}`: index {index} is both monotone and anti-monotone")]
    Overlap { symbol: String, index: usize },
    #[error("symbol `{0}` is declared with a different signature")]
    Conflicting(String),
}

/// Keyed by symbol name; names are unique within a signature.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MonotonicitySpec {
    entries: BTreeMap<Arc<str>, (Arc<FunctionSymbol>, ArgSpec)>,
}

impl MonotonicitySpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(
        &mut self,
        symbol: &Arc<FunctionSymbol>,
        monotone: impl IntoIterator<Item = usize>,
        anti: impl IntoIterator<Item = usize>,
    ) -> Result<(), SpecError> {
        if !symbol.is_uninterpreted() {
            return Err(SpecError::Interpreted(symbol.name().to_string()));
        }
        let spec = ArgSpec {
            monotone: monotone.into_iter().collect(),
            anti: anti.into_iter().collect(),
        };
        for &i in spec.monotone.iter().chain(&spec.anti) {
            if i == 0 || i > symbol.arity() {
                return Err(SpecError::IndexOutOfRange {
                    symbol: symbol.name().to_string(),
                    index: i,
                    arity: symbol.arity(),
                });
            }
        }
        if let Some(&i) = spec.monotone.intersection(&spec.anti).next() {
            return Err(SpecError::Overlap {
                symbol: symbol.name().to_string(),
                index: i,
            });
        }
        if let Some((existing, _)) = self.entries.get(symbol.name_rc()) {
            if existing != symbol {
                return Err(SpecError::Conflicting(symbol.name().to_string()));
            }
        }
        self.entries
            .insert(symbol.name_rc().clone(), (symbol.clone(), spec));
        Ok(())
    }

    pub fn get(&self, symbol: &FunctionSymbol) -> Option<&ArgSpec> {
        self.entries
            .get(symbol.name())
            .filter(|(s, _)| **s == *symbol)
            .map(|(_, a)| a)
    }

    pub fn get_by_name(&self, name: &str) -> Option<(&Arc<FunctionSymbol>, &ArgSpec)> {
        self.entries.get(name).map(|(s, a)| (s, a))
    }

    /// Entries in name order.
    pub fn iter(&self) -> impl Iterator<Item = (&Arc<FunctionSymbol>, &ArgSpec)> {
        self.entries.values().map(|(s, a)| (s, a))
    }

    /// Entries with at least one constrained argument.
    pub fn constrained(&self) -> impl Iterator<Item = (&Arc<FunctionSymbol>, &ArgSpec)> {
        self.iter().filter(|(_, a)| !a.is_vacuous())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Checks that every symbol of `phi` sharing a name with an entry is the
    /// same symbol.
    pub fn check_against(&self, phi: &crate::term::Term) -> Result<(), SpecError> {
        for f in crate::term::symbols_of(phi) {
            if let Some((s, _)) = self.entries.get(f.name_rc()) {
                if *s != f {
                    return Err(SpecError::Conflicting(f.name().to_string()));
                }
            }
        }
        Ok(())
    }
}
