use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Ordered variable names split into named, disjoint blocks.
///
/// The global order is the concatenation of the blocks; a variable with a
/// smaller index ranks higher in the lexicographic monomial order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VarTable {
    names: Vec<String>,
    blocks: Vec<(String, Range<usize>)>,
}

impl VarTable {
    pub fn new<S: Into<String>>(blocks: Vec<(S, Vec<String>)>) -> Result<Arc<Self>> {
        let mut names = Vec::new();
        let mut ranges = Vec::new();
        for (label, vars) in blocks {
            let start = names.len();
            names.extend(vars);
            ranges.push((label.into(), start..names.len()));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(Error::Structural("empty variable name".into()));
            }
            if names[..i].contains(n) {
                return Err(Error::Structural(format!("duplicate variable name {n:?}")));
            }
        }
        Ok(Arc::new(Self {
            names,
            blocks: ranges,
        }))
    }

    /// A table with a single block.
    pub fn single<S: Into<String>>(label: S, names: Vec<String>) -> Result<Arc<Self>> {
        Self::new(vec![(label, names)])
    }

    /// `prefix1, ..., prefixN`.
    pub fn indexed(prefix: &str, count: usize) -> Vec<String> {
        (1..=count).map(|i| format!("{prefix}{i}")).collect()
    }

    pub fn empty() -> Arc<Self> {
        Arc::new(Self {
            names: Vec::new(),
            blocks: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn block(&self, label: &str) -> Option<Range<usize>> {
        self.blocks
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, r)| r.clone())
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&str, Range<usize>)> {
        self.blocks.iter().map(|(l, r)| (l.as_str(), r.clone()))
    }
}

impl fmt::Debug for VarTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_map();
        for (label, range) in &self.blocks {
            list.entry(label, &&self.names[range.clone()]);
        }
        list.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_concatenate() {
        let t = VarTable::new(vec![
            ("alpha", VarTable::indexed("alpha", 2)),
            ("beta", VarTable::indexed("beta", 1)),
            ("x", vec!["x".to_string()]),
        ])
        .unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(t.block("beta"), Some(2..3));
        assert_eq!(t.index_of("x"), Some(3));
        assert_eq!(t.name(1), "alpha2");
    }

    #[test]
    fn rejects_duplicates() {
        let err = VarTable::new(vec![
            ("p", vec!["a".to_string()]),
            ("q", vec!["a".to_string()]),
        ]);
        assert!(matches!(err, Err(Error::Structural(_))));
    }
}
