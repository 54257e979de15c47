//! Bias-corrected Adam over a group of parameters.

use uanav_num::Real;

use crate::error::NnError;
use crate::graph::ParamGrads;
use crate::params::ParameterSet;
use crate::tensor::Tensor;

#[derive(Debug, Clone)]
pub struct AdamState<T> {
    /// Indices into the owning [`ParameterSet`] this optimizer updates.
    pub group: Vec<usize>,
    m: Vec<Tensor<T>>,
    v: Vec<Tensor<T>>,
    pub step: u64,
    pub beta1: T,
    pub beta2: T,
    pub eps: T,
    /// Mutable: the trainer switches it mid-run.
    pub lr: T,
}

impl<T: Real> AdamState<T> {
    pub fn new(params: &ParameterSet<T>, group: Vec<usize>, lr: T) -> Self {
        let m = group
            .iter()
            .map(|&i| Tensor::zeros(params.by_index(i).1.shape().to_vec()))
            .collect();
        let v = group
            .iter()
            .map(|&i| Tensor::zeros(params.by_index(i).1.shape().to_vec()))
            .collect();
        Self {
            group,
            m,
            v,
            step: 0,
            beta1: T::of(0.9),
            beta2: T::of(0.999),
            eps: T::of(1e-8),
            lr,
        }
    }

    pub fn for_prefix(params: &ParameterSet<T>, prefix: &str, lr: T) -> Self {
        Self::new(params, params.indices_with_prefix(prefix), lr)
    }
}

/// One Adam step over the state's group. A non-finite gradient anywhere in
/// the group rejects the whole step: parameters and moments untouched, the
/// counter not advanced, and the offending parameter reported.
pub fn adam_step<T: Real>(
    params: &mut ParameterSet<T>,
    grads: &ParamGrads<T>,
    state: &mut AdamState<T>,
) -> Result<(), NnError> {
    for &i in &state.group {
        if let Some(g) = &grads.by_param[i] {
            if !g.is_finite() {
                return Err(NnError::NonFiniteGradient(params.by_index(i).0.to_string()));
            }
        }
    }

    state.step += 1;
    let t = state.step;
    let (b1, b2) = (state.beta1, state.beta2);
    let bc1 = T::one() - b1.powi(t as i32);
    let bc2 = T::one() - b2.powi(t as i32);
    let lr = state.lr;
    let eps = state.eps;

    for (slot, &i) in state.group.iter().enumerate() {
        let g_owned;
        let g: &Tensor<T> = match &grads.by_param[i] {
            Some(g) => g,
            None => {
                // Absent gradient == zero gradient: moments still decay.
                g_owned = Tensor::zeros(params.by_index(i).1.shape().to_vec());
                &g_owned
            }
        };
        let m = &mut state.m[slot];
        let v = &mut state.v[slot];
        for ((mv, vv), &gv) in m
            .data_mut()
            .iter_mut()
            .zip(v.data_mut())
            .zip(g.data())
        {
            *mv = b1 * *mv + (T::one() - b1) * gv;
            *vv = b2 * *vv + (T::one() - b2) * gv * gv;
        }
        let m = &state.m[slot];
        let v = &state.v[slot];
        params.update_values(i, |tensor| {
            for ((pv, &mv), &vv) in tensor.data_mut().iter_mut().zip(m.data()).zip(v.data()) {
                let m_hat = mv / bc1;
                let v_hat = vv / bc2;
                *pv -= lr * m_hat / (v_hat.sqrt() + eps);
            }
        });
    }
    params.version += 1;
    Ok(())
}
