//! Layer definitions: dense, 1-D convolution, GRU cell. A layer owns its
//! parameter names and dimensions; values live in a [`ParameterSet`].

use rand::Rng;
use uanav_num::Real;

use crate::error::NnError;
use crate::graph::Graph;
use crate::params::ParameterSet;
use crate::tape::Var;
use crate::tensor::Tensor;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Tanh,
    Relu,
    Sigmoid,
}

impl Activation {
    pub fn apply<T: Real>(&self, g: &mut Graph<T>, x: Var) -> Var {
        match self {
            Activation::Tanh => g.tape.tanh(x),
            Activation::Relu => g.tape.relu(x),
            Activation::Sigmoid => g.tape.sigmoid(x),
        }
    }
}

/// Uniform ±1/√fan_in init, biases zero.
fn uniform_tensor<T: Real>(rng: &mut impl Rng, shape: Vec<usize>, fan_in: usize) -> Tensor<T> {
    let bound = 1.0 / (fan_in as f64).sqrt();
    let n = shape.iter().product();
    let data = (0..n)
        .map(|_| T::of(rng.random_range(-bound..bound)))
        .collect();
    Tensor::from_vec(shape, data)
}

#[derive(Debug, Clone)]
pub struct Dense {
    pub w: String,
    pub b: String,
    pub in_dim: usize,
    pub out_dim: usize,
}

impl Dense {
    pub fn new(prefix: &str, in_dim: usize, out_dim: usize) -> Self {
        Self {
            w: format!("{prefix}/w"),
            b: format!("{prefix}/b"),
            in_dim,
            out_dim,
        }
    }

    pub fn init<T: Real>(
        &self,
        params: &mut ParameterSet<T>,
        rng: &mut impl Rng,
    ) -> Result<(), NnError> {
        params.insert(
            self.w.clone(),
            uniform_tensor(rng, vec![self.in_dim, self.out_dim], self.in_dim),
        )?;
        params.insert(self.b.clone(), Tensor::zeros(vec![self.out_dim]))
    }

    /// y = x·W + b for x of shape [B, in_dim].
    pub fn forward<T: Real>(&self, g: &mut Graph<T>, x: Var) -> Result<Var, NnError> {
        let shape = g.value(x).shape().to_vec();
        if shape.len() != 2 || shape[1] != self.in_dim {
            return Err(NnError::ShapeMismatch {
                context: format!("dense {}", self.w),
                expected: vec![shape.first().copied().unwrap_or(0), self.in_dim],
                got: shape,
            });
        }
        let w = g.param(&self.w);
        let b = g.param(&self.b);
        let xw = g.tape.matmul(x, w);
        Ok(g.tape.add_bias(xw, b))
    }
}

#[derive(Debug, Clone)]
pub struct Conv1d {
    pub w: String,
    pub b: String,
    pub in_ch: usize,
    pub out_ch: usize,
    pub kernel: usize,
    pub stride: usize,
}

impl Conv1d {
    pub fn new(prefix: &str, in_ch: usize, out_ch: usize, kernel: usize, stride: usize) -> Self {
        Self {
            w: format!("{prefix}/w"),
            b: format!("{prefix}/b"),
            in_ch,
            out_ch,
            kernel,
            stride,
        }
    }

    pub fn out_len(&self, len: usize) -> usize {
        (len - self.kernel) / self.stride + 1
    }

    pub fn init<T: Real>(
        &self,
        params: &mut ParameterSet<T>,
        rng: &mut impl Rng,
    ) -> Result<(), NnError> {
        let fan_in = self.in_ch * self.kernel;
        params.insert(
            self.w.clone(),
            uniform_tensor(rng, vec![self.out_ch, self.in_ch, self.kernel], fan_in),
        )?;
        params.insert(self.b.clone(), Tensor::zeros(vec![self.out_ch]))
    }

    pub fn forward<T: Real>(&self, g: &mut Graph<T>, x: Var) -> Result<Var, NnError> {
        let shape = g.value(x).shape().to_vec();
        if shape.len() != 3 || shape[1] != self.in_ch || shape[2] < self.kernel {
            return Err(NnError::ShapeMismatch {
                context: format!("conv1d {}", self.w),
                expected: vec![shape.first().copied().unwrap_or(0), self.in_ch, self.kernel],
                got: shape,
            });
        }
        let w = g.param(&self.w);
        let b = g.param(&self.b);
        Ok(g.tape.conv1d(x, w, b, self.stride))
    }
}

/// GRU cell in the original formulation:
///   z = σ(x·Wxz + h·Whz + bz)        update gate
///   r = σ(x·Wxr + h·Whr + br)        reset gate
///   h̃ = tanh(x·Wxc + (r⊙h)·Whc + bc)
///   h' = (1−z)⊙h + z⊙h̃
/// The z/r gates share one fused matmul pair.
#[derive(Debug, Clone)]
pub struct GruCell {
    pub wx_zr: String,
    pub wh_zr: String,
    pub b_zr: String,
    pub wx_c: String,
    pub wh_c: String,
    pub b_c: String,
    pub in_dim: usize,
    pub hidden: usize,
}

impl GruCell {
    pub fn new(prefix: &str, in_dim: usize, hidden: usize) -> Self {
        Self {
            wx_zr: format!("{prefix}/wx_zr"),
            wh_zr: format!("{prefix}/wh_zr"),
            b_zr: format!("{prefix}/b_zr"),
            wx_c: format!("{prefix}/wx_c"),
            wh_c: format!("{prefix}/wh_c"),
            b_c: format!("{prefix}/b_c"),
            in_dim,
            hidden,
        }
    }

    pub fn init<T: Real>(
        &self,
        params: &mut ParameterSet<T>,
        rng: &mut impl Rng,
    ) -> Result<(), NnError> {
        let h = self.hidden;
        params.insert(
            self.wx_zr.clone(),
            uniform_tensor(rng, vec![self.in_dim, 2 * h], self.in_dim),
        )?;
        params.insert(self.wh_zr.clone(), uniform_tensor(rng, vec![h, 2 * h], h))?;
        params.insert(self.b_zr.clone(), Tensor::zeros(vec![2 * h]))?;
        params.insert(
            self.wx_c.clone(),
            uniform_tensor(rng, vec![self.in_dim, h], self.in_dim),
        )?;
        params.insert(self.wh_c.clone(), uniform_tensor(rng, vec![h, h], h))?;
        params.insert(self.b_c.clone(), Tensor::zeros(vec![h]))
    }

    /// One step: x [B, in_dim], h [B, hidden] → h' [B, hidden].
    pub fn step<T: Real>(&self, g: &mut Graph<T>, x: Var, h: Var) -> Result<Var, NnError> {
        let xs = g.value(x).shape().to_vec();
        let hs = g.value(h).shape().to_vec();
        if xs.len() != 2 || xs[1] != self.in_dim || hs.len() != 2 || hs[1] != self.hidden {
            return Err(NnError::ShapeMismatch {
                context: format!("gru {}", self.wx_zr),
                expected: vec![self.in_dim, self.hidden],
                got: vec![*xs.last().unwrap_or(&0), *hs.last().unwrap_or(&0)],
            });
        }
        let hn = self.hidden;
        let wx_zr = g.param(&self.wx_zr);
        let wh_zr = g.param(&self.wh_zr);
        let b_zr = g.param(&self.b_zr);
        let wx_c = g.param(&self.wx_c);
        let wh_c = g.param(&self.wh_c);
        let b_c = g.param(&self.b_c);

        let gx = g.tape.matmul(x, wx_zr);
        let gh = g.tape.matmul(h, wh_zr);
        let pre = g.tape.add(gx, gh);
        let pre = g.tape.add_bias(pre, b_zr);
        let zr = g.tape.sigmoid(pre);
        let z = g.tape.slice_cols(zr, 0, hn);
        let r = g.tape.slice_cols(zr, hn, hn);

        let rh = g.tape.mul(r, h);
        let cx = g.tape.matmul(x, wx_c);
        let ch = g.tape.matmul(rh, wh_c);
        let cpre = g.tape.add(cx, ch);
        let cpre = g.tape.add_bias(cpre, b_c);
        let cand = g.tape.tanh(cpre);

        // h' = h + z ⊙ (h̃ − h)  ==  (1−z)⊙h + z⊙h̃
        let diff = g.tape.sub(cand, h);
        let zd = g.tape.mul(z, diff);
        Ok(g.tape.add(h, zd))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dense_identity_passes_input_through() {
        let mut params: ParameterSet<f64> = ParameterSet::new();
        let d = Dense::new("lin", 3, 3);
        let eye = Tensor::from_vec(
            vec![3, 3],
            vec![1., 0., 0., 0., 1., 0., 0., 0., 1.],
        );
        params.insert(d.w.clone(), eye).unwrap();
        params.insert(d.b.clone(), Tensor::zeros(vec![3])).unwrap();
        let mut g = Graph::new(&params);
        let x = g.constant(Tensor::from_vec(vec![2, 3], vec![1., 2., 3., 4., 5., 6.]));
        let y = d.forward(&mut g, x).unwrap();
        assert_eq!(g.value(y).data(), &[1., 2., 3., 4., 5., 6.]);
    }

    #[test]
    fn dense_shape_error_reports_both_shapes() {
        let mut params: ParameterSet<f64> = ParameterSet::new();
        let d = Dense::new("lin", 3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        d.init(&mut params, &mut rng).unwrap();
        let mut g = Graph::new(&params);
        let x = g.constant(Tensor::zeros(vec![1, 4]));
        let err = d.forward(&mut g, x).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("[1, 3]") && msg.contains("[1, 4]"), "{msg}");
    }

    #[test]
    fn gru_zero_weights_halve_hidden_state() {
        let mut params: ParameterSet<f64> = ParameterSet::new();
        let cell = GruCell::new("gru", 2, 3);
        params.insert(cell.wx_zr.clone(), Tensor::zeros(vec![2, 6])).unwrap();
        params.insert(cell.wh_zr.clone(), Tensor::zeros(vec![3, 6])).unwrap();
        params.insert(cell.b_zr.clone(), Tensor::zeros(vec![6])).unwrap();
        params.insert(cell.wx_c.clone(), Tensor::zeros(vec![2, 3])).unwrap();
        params.insert(cell.wh_c.clone(), Tensor::zeros(vec![3, 3])).unwrap();
        params.insert(cell.b_c.clone(), Tensor::zeros(vec![3])).unwrap();

        let mut g = Graph::new(&params);
        let x = g.constant(Tensor::from_vec(vec![1, 2], vec![0.7, -0.2]));
        let h = g.constant(Tensor::from_vec(vec![1, 3], vec![1.0, -2.0, 0.5]));
        // z = r = σ(0) = 0.5, h̃ = tanh(0) = 0 → h' = 0.5·h.
        let hn = cell.step(&mut g, x, h).unwrap();
        assert_eq!(g.value(hn).data(), &[0.5, -1.0, 0.25]);

        // Zero input, zero hidden → h' = 0.
        let x0 = g.constant(Tensor::zeros(vec![1, 2]));
        let h0 = g.constant(Tensor::zeros(vec![1, 3]));
        let hz = cell.step(&mut g, x0, h0).unwrap();
        assert_eq!(g.value(hz).data(), &[0.0, 0.0, 0.0]);
    }
}
