//! Name-keyed registries for interchangeable strategies.
//!
//! Betti oracles, rank fields and complex builders all follow the same
//! pattern: a trait object registered under a short name and looked up at
//! runtime from a CLI flag or a report field.

use std::fmt;
use std::sync::Arc;

/// Anything that can be stored in a [`Registry`].
pub trait Named {
    fn name(&self) -> &'static str;
}

/// Insertion-ordered map from names to shared trait objects.
pub struct Registry<T: ?Sized + Named> {
    entries: Vec<Arc<T>>,
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn new() -> Self {
        Registry { entries: Vec::new() }
    }

    /// Registers `item`, replacing an earlier entry with the same name.
    pub fn register(&mut self, item: Arc<T>) -> &mut Self {
        let name = item.name();
        match self.entries.iter().position(|e| e.name() == name) {
            Some(idx) => self.entries[idx] = item,
            None => self.entries.push(item),
        }
        self
    }

    pub fn get(&self, name: &str) -> Result<Arc<T>, UnknownStrategy> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .cloned()
            .ok_or_else(|| UnknownStrategy {
                requested: name.to_string(),
                available: self.names(),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<T>> {
        self.entries.iter()
    }
}

impl<T: ?Sized + Named> Default for Registry<T> {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct UnknownStrategy {
    pub requested: String,
    pub available: Vec<&'static str>,
}

impl fmt::Display for UnknownStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown strategy `{}` (available: {})",
            self.requested,
            self.available.join(", ")
        )
    }
}
