//! Named, ordered parameter storage. Names are unique, shapes immutable
//! after insertion, iteration order is insertion order (checkpoints rely on
//! this).

use std::collections::HashMap;

use uanav_num::Real;

use crate::error::NnError;
use crate::tensor::Tensor;

#[derive(Debug, Clone, Default)]
pub struct ParameterSet<T> {
    names: Vec<String>,
    tensors: Vec<Tensor<T>>,
    index: HashMap<String, usize>,
    /// Bumped on every optimizer update.
    pub version: u64,
}

impl<T: Real> ParameterSet<T> {
    pub fn new() -> Self {
        Self {
            names: Vec::new(),
            tensors: Vec::new(),
            index: HashMap::new(),
            version: 0,
        }
    }

    pub fn insert(&mut self, name: impl Into<String>, tensor: Tensor<T>) -> Result<(), NnError> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(NnError::DuplicateParam(name));
        }
        self.index.insert(name.clone(), self.tensors.len());
        self.names.push(name);
        self.tensors.push(tensor);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.tensors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tensors.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn get(&self, name: &str) -> Result<&Tensor<T>, NnError> {
        self.index_of(name)
            .map(|i| &self.tensors[i])
            .ok_or_else(|| NnError::UnknownParam(name.to_string()))
    }

    pub fn by_index(&self, i: usize) -> (&str, &Tensor<T>) {
        (&self.names[i], &self.tensors[i])
    }

    /// Mutation preserves the shape; only the optimizer and target updates
    /// go through here.
    pub fn update_values(&mut self, i: usize, f: impl FnOnce(&mut Tensor<T>)) {
        let shape = self.tensors[i].shape().to_vec();
        f(&mut self.tensors[i]);
        assert_eq!(self.tensors[i].shape(), &shape[..], "parameter shapes are immutable");
    }

    /// Copy of every parameter whose name starts with `prefix`, order kept.
    pub fn subset_with_prefix(&self, prefix: &str) -> ParameterSet<T> {
        let mut out = ParameterSet::new();
        for (name, tensor) in self.names.iter().zip(&self.tensors) {
            if name.starts_with(prefix) {
                out.insert(name.clone(), tensor.clone()).expect("unique by construction");
            }
        }
        out
    }

    /// Indices of every parameter whose name starts with `prefix`.
    pub fn indices_with_prefix(&self, prefix: &str) -> Vec<usize> {
        self.names
            .iter()
            .enumerate()
            .filter(|(_, n)| n.starts_with(prefix))
            .map(|(i, _)| i)
            .collect()
    }

    /// Insert every entry of `other` (names must not clash).
    pub fn absorb(&mut self, other: ParameterSet<T>) -> Result<(), NnError> {
        for (name, tensor) in other.names.into_iter().zip(other.tensors) {
            self.insert(name, tensor)?;
        }
        Ok(())
    }

    /// Overwrite values of same-named parameters from `other` (shape-checked).
    pub fn load_values_from(&mut self, other: &ParameterSet<T>) -> Result<(), NnError> {
        for (name, tensor) in other.names.iter().zip(&other.tensors) {
            let i = self
                .index_of(name)
                .ok_or_else(|| NnError::UnknownParam(name.clone()))?;
            if self.tensors[i].shape() != tensor.shape() {
                return Err(NnError::ShapeMismatch {
                    context: format!("load `{name}`"),
                    expected: self.tensors[i].shape().to_vec(),
                    got: tensor.shape().to_vec(),
                });
            }
            self.tensors[i] = tensor.clone();
        }
        self.version += 1;
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Tensor<T>)> {
        self.names.iter().map(|s| s.as_str()).zip(&self.tensors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unique_names_enforced() {
        let mut p: ParameterSet<f64> = ParameterSet::new();
        p.insert("a", Tensor::zeros(vec![2])).unwrap();
        assert!(matches!(
            p.insert("a", Tensor::zeros(vec![2])),
            Err(NnError::DuplicateParam(_))
        ));
    }

    #[test]
    fn prefix_subset_keeps_order() {
        let mut p: ParameterSet<f64> = ParameterSet::new();
        p.insert("pi/w", Tensor::zeros(vec![1])).unwrap();
        p.insert("q1/w", Tensor::zeros(vec![1])).unwrap();
        p.insert("pi/b", Tensor::zeros(vec![1])).unwrap();
        let sub = p.subset_with_prefix("pi/");
        assert_eq!(sub.names(), &["pi/w".to_string(), "pi/b".to_string()]);
    }
}
