//! A tape bound to a parameter set: parameters enter as gradient-tracked
//! leaves, everything else as constants.

use uanav_num::Real;

use crate::params::ParameterSet;
use crate::tape::{Gradients, Tape, Var};
use crate::tensor::Tensor;

pub struct Graph<'p, T: Real> {
    pub tape: Tape<T>,
    params: &'p ParameterSet<T>,
    param_vars: Vec<Var>,
}

/// Gradients aligned with the parameter set's insertion order. `None` means
/// the parameter did not participate in the loss.
pub struct ParamGrads<T> {
    pub by_param: Vec<Option<Tensor<T>>>,
}

impl<T: Real> ParamGrads<T> {
    pub fn all_finite(&self) -> bool {
        self.by_param
            .iter()
            .flatten()
            .all(|tensor| tensor.is_finite())
    }
}

impl<'p, T: Real> Graph<'p, T> {
    pub fn new(params: &'p ParameterSet<T>) -> Self {
        let mut tape = Tape::new();
        let param_vars = (0..params.len())
            .map(|i| tape.leaf(params.by_index(i).1.clone(), true))
            .collect();
        Self {
            tape,
            params,
            param_vars,
        }
    }

    /// The leaf holding a named parameter. Unknown names are a programming
    /// error inside network definitions, hence panic.
    pub fn param(&self, name: &str) -> Var {
        let i = self
            .params
            .index_of(name)
            .unwrap_or_else(|| panic!("unknown parameter `{name}`"));
        self.param_vars[i]
    }

    pub fn params(&self) -> &ParameterSet<T> {
        self.params
    }

    pub fn constant(&mut self, value: Tensor<T>) -> Var {
        self.tape.constant(value)
    }

    pub fn value(&self, v: Var) -> &Tensor<T> {
        self.tape.value(v)
    }

    /// Backward pass returning parameter-aligned gradients plus the raw
    /// per-node gradients (for input-gradient checks).
    pub fn backward(&self, loss: Var) -> (ParamGrads<T>, Gradients<T>) {
        let grads = self.tape.backward(loss);
        let by_param = self
            .param_vars
            .iter()
            .map(|&v| grads.get(v).cloned())
            .collect();
        (ParamGrads { by_param }, grads)
    }
}
