//! Reverse-mode tape. Operations push nodes holding the forward value and
//! enough structure to run the exact analytic backward pass. A tape lives
//! for one forward/backward episode; parameters persist outside it.

use uanav_num::Real;

use crate::tensor::Tensor;

/// Handle to a node on a tape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Var(pub(crate) usize);

#[derive(Debug, Clone)]
enum Op<T> {
    Leaf,
    Add(usize, usize),
    Sub(usize, usize),
    Mul(usize, usize),
    /// Row-broadcast bias: [B,F] + [F].
    AddBias(usize, usize),
    /// Column broadcast: [B,1] ⊙ [B,F].
    MulCol(usize, usize),
    /// Row broadcast: [1,F] ⊙ [B,F].
    MulRow(usize, usize),
    /// Row broadcast: [1,F] + [B,F].
    AddRow(usize, usize),
    /// Tile [1,F] to [B,F].
    ExpandRows(usize),
    Neg(usize),
    Scale(usize, T),
    AddScalar(usize, T),
    MatMul(usize, usize),
    Conv1d {
        x: usize,
        w: usize,
        b: usize,
        stride: usize,
    },
    Relu(usize),
    Tanh(usize),
    Sigmoid(usize),
    Exp(usize),
    Softplus(usize),
    Clamp(usize, T, T),
    Min(usize, usize),
    Sum(usize),
    Mean(usize),
    SumCols(usize),
    Concat(Vec<usize>),
    SliceCols {
        x: usize,
        start: usize,
        len: usize,
    },
    Reshape(usize),
}

struct Node<T> {
    value: Tensor<T>,
    op: Op<T>,
    requires_grad: bool,
}

pub struct Tape<T: Real> {
    nodes: Vec<Node<T>>,
}

/// Per-node gradients produced by [`Tape::backward`].
pub struct Gradients<T> {
    grads: Vec<Option<Tensor<T>>>,
}

impl<T: Real> Gradients<T> {
    pub fn get(&self, v: Var) -> Option<&Tensor<T>> {
        self.grads[v.0].as_ref()
    }
}

fn rows_cols(shape: &[usize]) -> (usize, usize) {
    assert_eq!(shape.len(), 2, "expected 2-D tensor, got {shape:?}");
    (shape[0], shape[1])
}

impl<T: Real> Default for Tape<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> Tape<T> {
    pub fn new() -> Self {
        Self { nodes: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn value(&self, v: Var) -> &Tensor<T> {
        &self.nodes[v.0].value
    }

    fn push(&mut self, value: Tensor<T>, op: Op<T>, requires_grad: bool) -> Var {
        self.nodes.push(Node {
            value,
            op,
            requires_grad,
        });
        Var(self.nodes.len() - 1)
    }

    fn rg(&self, v: Var) -> bool {
        self.nodes[v.0].requires_grad
    }

    pub fn leaf(&mut self, value: Tensor<T>, requires_grad: bool) -> Var {
        self.push(value, Op::Leaf, requires_grad)
    }

    pub fn constant(&mut self, value: Tensor<T>) -> Var {
        self.leaf(value, false)
    }

    // -- elementwise binary ----------------------------------------------

    fn same_shape(&self, a: Var, b: Var, what: &str) {
        assert_eq!(
            self.value(a).shape(),
            self.value(b).shape(),
            "{what}: shape mismatch {:?} vs {:?}",
            self.value(a).shape(),
            self.value(b).shape()
        );
    }

    pub fn add(&mut self, a: Var, b: Var) -> Var {
        self.same_shape(a, b, "add");
        let data = self
            .value(a)
            .data()
            .iter()
            .zip(self.value(b).data())
            .map(|(&x, &y)| x + y)
            .collect();
        let t = Tensor::from_vec(self.value(a).shape().to_vec(), data);
        let rg = self.rg(a) || self.rg(b);
        self.push(t, Op::Add(a.0, b.0), rg)
    }

    pub fn sub(&mut self, a: Var, b: Var) -> Var {
        self.same_shape(a, b, "sub");
        let data = self
            .value(a)
            .data()
            .iter()
            .zip(self.value(b).data())
            .map(|(&x, &y)| x - y)
            .collect();
        let t = Tensor::from_vec(self.value(a).shape().to_vec(), data);
        let rg = self.rg(a) || self.rg(b);
        self.push(t, Op::Sub(a.0, b.0), rg)
    }

    pub fn mul(&mut self, a: Var, b: Var) -> Var {
        self.same_shape(a, b, "mul");
        let data = self
            .value(a)
            .data()
            .iter()
            .zip(self.value(b).data())
            .map(|(&x, &y)| x * y)
            .collect();
        let t = Tensor::from_vec(self.value(a).shape().to_vec(), data);
        let rg = self.rg(a) || self.rg(b);
        self.push(t, Op::Mul(a.0, b.0), rg)
    }

    pub fn minimum(&mut self, a: Var, b: Var) -> Var {
        self.same_shape(a, b, "min");
        let data = self
            .value(a)
            .data()
            .iter()
            .zip(self.value(b).data())
            .map(|(&x, &y)| if x <= y { x } else { y })
            .collect();
        let t = Tensor::from_vec(self.value(a).shape().to_vec(), data);
        let rg = self.rg(a) || self.rg(b);
        self.push(t, Op::Min(a.0, b.0), rg)
    }

    /// [B,F] + [F] broadcast over rows.
    pub fn add_bias(&mut self, x: Var, b: Var) -> Var {
        let (rows, cols) = rows_cols(self.value(x).shape());
        assert_eq!(
            self.value(b).shape(),
            &[cols],
            "add_bias: bias {:?} vs features {cols}",
            self.value(b).shape()
        );
        let bias = self.value(b).data().to_vec();
        let mut data = self.value(x).data().to_vec();
        for r in 0..rows {
            for (v, add) in data[r * cols..(r + 1) * cols].iter_mut().zip(&bias) {
                *v += *add;
            }
        }
        let t = Tensor::from_vec(vec![rows, cols], data);
        let rg = self.rg(x) || self.rg(b);
        self.push(t, Op::AddBias(x.0, b.0), rg)
    }

    /// [B,1] ⊙ [B,F].
    pub fn mul_col(&mut self, col: Var, x: Var) -> Var {
        let (rows, cols) = rows_cols(self.value(x).shape());
        assert_eq!(
            self.value(col).shape(),
            &[rows, 1],
            "mul_col: column {:?} vs rows {rows}",
            self.value(col).shape()
        );
        let c = self.value(col).data().to_vec();
        let mut data = self.value(x).data().to_vec();
        for r in 0..rows {
            for v in data[r * cols..(r + 1) * cols].iter_mut() {
                *v *= c[r];
            }
        }
        let t = Tensor::from_vec(vec![rows, cols], data);
        let rg = self.rg(col) || self.rg(x);
        self.push(t, Op::MulCol(col.0, x.0), rg)
    }

    /// [1,F] ⊙ [B,F].
    pub fn mul_row(&mut self, row: Var, x: Var) -> Var {
        let (rows, cols) = rows_cols(self.value(x).shape());
        assert_eq!(
            self.value(row).shape(),
            &[1, cols],
            "mul_row: row {:?} vs cols {cols}",
            self.value(row).shape()
        );
        let rvals = self.value(row).data().to_vec();
        let mut data = self.value(x).data().to_vec();
        for r in 0..rows {
            for (v, m) in data[r * cols..(r + 1) * cols].iter_mut().zip(&rvals) {
                *v *= *m;
            }
        }
        let t = Tensor::from_vec(vec![rows, cols], data);
        let rg = self.rg(row) || self.rg(x);
        self.push(t, Op::MulRow(row.0, x.0), rg)
    }

    /// [1,F] + [B,F].
    pub fn add_row(&mut self, row: Var, x: Var) -> Var {
        let (rows, cols) = rows_cols(self.value(x).shape());
        assert_eq!(
            self.value(row).shape(),
            &[1, cols],
            "add_row: row {:?} vs cols {cols}",
            self.value(row).shape()
        );
        let rvals = self.value(row).data().to_vec();
        let mut data = self.value(x).data().to_vec();
        for r in 0..rows {
            for (v, a) in data[r * cols..(r + 1) * cols].iter_mut().zip(&rvals) {
                *v += *a;
            }
        }
        let t = Tensor::from_vec(vec![rows, cols], data);
        let rg = self.rg(row) || self.rg(x);
        self.push(t, Op::AddRow(row.0, x.0), rg)
    }

    /// Tile [1,F] into [B,F].
    pub fn expand_rows(&mut self, x: Var, rows: usize) -> Var {
        let (one, cols) = rows_cols(self.value(x).shape());
        assert_eq!(one, 1, "expand_rows expects [1,F]");
        let src = self.value(x).data().to_vec();
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            data.extend_from_slice(&src);
        }
        let rg = self.rg(x);
        self.push(Tensor::from_vec(vec![rows, cols], data), Op::ExpandRows(x.0), rg)
    }

    // -- elementwise unary -----------------------------------------------

    pub fn neg(&mut self, x: Var) -> Var {
        let t = self.value(x).map(|v| -v);
        let rg = self.rg(x);
        self.push(t, Op::Neg(x.0), rg)
    }

    pub fn scale(&mut self, x: Var, c: T) -> Var {
        let t = self.value(x).map(|v| v * c);
        let rg = self.rg(x);
        self.push(t, Op::Scale(x.0, c), rg)
    }

    pub fn add_scalar(&mut self, x: Var, c: T) -> Var {
        let t = self.value(x).map(|v| v + c);
        let rg = self.rg(x);
        self.push(t, Op::AddScalar(x.0, c), rg)
    }

    pub fn relu(&mut self, x: Var) -> Var {
        let t = self.value(x).map(|v| v.max(T::zero()));
        let rg = self.rg(x);
        self.push(t, Op::Relu(x.0), rg)
    }

    pub fn tanh(&mut self, x: Var) -> Var {
        let t = self.value(x).map(|v| v.tanh());
        let rg = self.rg(x);
        self.push(t, Op::Tanh(x.0), rg)
    }

    pub fn sigmoid(&mut self, x: Var) -> Var {
        let t = self.value(x).map(sigmoid_scalar);
        let rg = self.rg(x);
        self.push(t, Op::Sigmoid(x.0), rg)
    }

    pub fn exp(&mut self, x: Var) -> Var {
        let t = self.value(x).map(|v| v.exp());
        let rg = self.rg(x);
        self.push(t, Op::Exp(x.0), rg)
    }

    /// ln(1 + e^x), computed stably.
    pub fn softplus(&mut self, x: Var) -> Var {
        let t = self.value(x).map(softplus_scalar);
        let rg = self.rg(x);
        self.push(t, Op::Softplus(x.0), rg)
    }

    pub fn clamp(&mut self, x: Var, lo: T, hi: T) -> Var {
        let t = self.value(x).map(|v| v.max(lo).min(hi));
        let rg = self.rg(x);
        self.push(t, Op::Clamp(x.0, lo, hi), rg)
    }

    // -- linear algebra ----------------------------------------------------

    pub fn matmul(&mut self, a: Var, b: Var) -> Var {
        let (m, k) = rows_cols(self.value(a).shape());
        let (k2, n) = rows_cols(self.value(b).shape());
        assert_eq!(
            k, k2,
            "matmul: inner dims {:?} x {:?}",
            self.value(a).shape(),
            self.value(b).shape()
        );
        let mut out = vec![T::zero(); m * n];
        matmul_nn(self.value(a).data(), self.value(b).data(), &mut out, m, k, n);
        let rg = self.rg(a) || self.rg(b);
        self.push(Tensor::from_vec(vec![m, n], out), Op::MatMul(a.0, b.0), rg)
    }

    /// Valid cross-correlation over the last axis: x [B,C,L], w [O,C,K],
    /// b [O], stride ≥ 1.
    pub fn conv1d(&mut self, x: Var, w: Var, b: Var, stride: usize) -> Var {
        let xs = self.value(x).shape().to_vec();
        let ws = self.value(w).shape().to_vec();
        assert_eq!(xs.len(), 3, "conv1d input must be [B,C,L], got {xs:?}");
        assert_eq!(ws.len(), 3, "conv1d kernel must be [O,C,K], got {ws:?}");
        assert_eq!(xs[1], ws[1], "conv1d channels: input {xs:?} vs kernel {ws:?}");
        assert!(stride >= 1);
        let (batch, chans, len) = (xs[0], xs[1], xs[2]);
        let (out_ch, _, kernel) = (ws[0], ws[1], ws[2]);
        assert!(len >= kernel, "conv1d: length {len} < kernel {kernel}");
        assert_eq!(self.value(b).shape(), &[out_ch]);
        let out_len = (len - kernel) / stride + 1;

        let xv = self.value(x).data();
        let wv = self.value(w).data();
        let bv = self.value(b).data();
        let mut out = vec![T::zero(); batch * out_ch * out_len];
        for bi in 0..batch {
            for o in 0..out_ch {
                for j in 0..out_len {
                    let mut acc = bv[o];
                    let base = j * stride;
                    for c in 0..chans {
                        let xrow = &xv[bi * chans * len + c * len + base..][..kernel];
                        let wrow = &wv[o * chans * kernel + c * kernel..][..kernel];
                        acc += xrow
                            .iter()
                            .zip(wrow)
                            .map(|(&xx, &ww)| xx * ww)
                            .sum::<T>();
                    }
                    out[bi * out_ch * out_len + o * out_len + j] = acc;
                }
            }
        }
        let rg = self.rg(x) || self.rg(w) || self.rg(b);
        self.push(
            Tensor::from_vec(vec![batch, out_ch, out_len], out),
            Op::Conv1d {
                x: x.0,
                w: w.0,
                b: b.0,
                stride,
            },
            rg,
        )
    }

    // -- reductions / reshaping -------------------------------------------

    pub fn sum(&mut self, x: Var) -> Var {
        let s: T = self.value(x).data().iter().copied().sum();
        let rg = self.rg(x);
        self.push(Tensor::scalar(s), Op::Sum(x.0), rg)
    }

    pub fn mean(&mut self, x: Var) -> Var {
        let n = T::of(self.value(x).numel() as f64);
        let s: T = self.value(x).data().iter().copied().sum();
        let rg = self.rg(x);
        self.push(Tensor::scalar(s / n), Op::Mean(x.0), rg)
    }

    /// [B,F] → [B,1], summing across features.
    pub fn sum_cols(&mut self, x: Var) -> Var {
        let (rows, cols) = rows_cols(self.value(x).shape());
        let xv = self.value(x).data();
        let data: Vec<T> = (0..rows)
            .map(|r| xv[r * cols..(r + 1) * cols].iter().copied().sum())
            .collect();
        let rg = self.rg(x);
        self.push(Tensor::from_vec(vec![rows, 1], data), Op::SumCols(x.0), rg)
    }

    /// Concatenate 2-D tensors along the feature axis.
    pub fn concat_cols(&mut self, parts: &[Var]) -> Var {
        assert!(!parts.is_empty());
        let rows = rows_cols(self.value(parts[0]).shape()).0;
        let mut total = 0;
        for &p in parts {
            let (r, c) = rows_cols(self.value(p).shape());
            assert_eq!(r, rows, "concat_cols: row mismatch");
            total += c;
        }
        let mut data = Vec::with_capacity(rows * total);
        for r in 0..rows {
            for &p in parts {
                let (_, c) = rows_cols(self.value(p).shape());
                data.extend_from_slice(&self.value(p).data()[r * c..(r + 1) * c]);
            }
        }
        let rg = parts.iter().any(|&p| self.rg(p));
        self.push(
            Tensor::from_vec(vec![rows, total], data),
            Op::Concat(parts.iter().map(|p| p.0).collect()),
            rg,
        )
    }

    /// Columns [start, start+len) of a 2-D tensor.
    pub fn slice_cols(&mut self, x: Var, start: usize, len: usize) -> Var {
        let (rows, cols) = rows_cols(self.value(x).shape());
        assert!(start + len <= cols, "slice {start}+{len} out of {cols}");
        let xv = self.value(x).data();
        let mut data = Vec::with_capacity(rows * len);
        for r in 0..rows {
            data.extend_from_slice(&xv[r * cols + start..r * cols + start + len]);
        }
        let rg = self.rg(x);
        self.push(
            Tensor::from_vec(vec![rows, len], data),
            Op::SliceCols {
                x: x.0,
                start,
                len,
            },
            rg,
        )
    }

    pub fn reshape(&mut self, x: Var, shape: Vec<usize>) -> Var {
        let t = self.value(x).clone().reshaped(shape);
        let rg = self.rg(x);
        self.push(t, Op::Reshape(x.0), rg)
    }

    // -- backward -----------------------------------------------------------

    /// Reverse pass from a scalar loss. Nodes not requiring gradients are
    /// skipped entirely.
    pub fn backward(&self, loss: Var) -> Gradients<T> {
        assert_eq!(
            self.value(loss).numel(),
            1,
            "backward needs a scalar loss, got {:?}",
            self.value(loss).shape()
        );
        let mut grads: Vec<Option<Tensor<T>>> = (0..self.nodes.len()).map(|_| None).collect();
        if !self.nodes[loss.0].requires_grad {
            return Gradients { grads };
        }
        grads[loss.0] = Some(Tensor::scalar(T::one()));

        for id in (0..=loss.0).rev() {
            if grads[id].is_none() {
                continue;
            }
            let (lower, upper) = grads.split_at_mut(id);
            let g = upper[0].as_ref().unwrap();
            let node = &self.nodes[id];
            let mut acc = |target: usize, delta: Tensor<T>| {
                if !self.nodes[target].requires_grad {
                    return;
                }
                match &mut lower[target] {
                    Some(t) => t.add_assign(&delta),
                    slot => *slot = Some(delta),
                }
            };
            match &node.op {
                Op::Leaf => {}
                Op::Add(a, b) => {
                    acc(*a, g.clone());
                    acc(*b, g.clone());
                }
                Op::Sub(a, b) => {
                    acc(*a, g.clone());
                    acc(*b, g.map(|v| -v));
                }
                Op::Mul(a, b) => {
                    let av = self.nodes[*a].value.data();
                    let bv = self.nodes[*b].value.data();
                    let ga = Tensor::from_vec(
                        g.shape().to_vec(),
                        g.data().iter().zip(bv).map(|(&gg, &v)| gg * v).collect(),
                    );
                    let gb = Tensor::from_vec(
                        g.shape().to_vec(),
                        g.data().iter().zip(av).map(|(&gg, &v)| gg * v).collect(),
                    );
                    acc(*a, ga);
                    acc(*b, gb);
                }
                Op::Min(a, b) => {
                    let av = self.nodes[*a].value.data();
                    let bv = self.nodes[*b].value.data();
                    let mut ga = vec![T::zero(); av.len()];
                    let mut gb = vec![T::zero(); bv.len()];
                    for i in 0..av.len() {
                        if av[i] <= bv[i] {
                            ga[i] = g.data()[i];
                        } else {
                            gb[i] = g.data()[i];
                        }
                    }
                    acc(*a, Tensor::from_vec(g.shape().to_vec(), ga));
                    acc(*b, Tensor::from_vec(g.shape().to_vec(), gb));
                }
                Op::AddBias(x, b) => {
                    let (rows, cols) = rows_cols(g.shape());
                    acc(*x, g.clone());
                    let mut gb = vec![T::zero(); cols];
                    for r in 0..rows {
                        for (dst, &src) in gb.iter_mut().zip(&g.data()[r * cols..(r + 1) * cols]) {
                            *dst += src;
                        }
                    }
                    acc(*b, Tensor::from_vec(vec![cols], gb));
                }
                Op::MulCol(col, x) => {
                    let (rows, cols) = rows_cols(g.shape());
                    let cv = self.nodes[*col].value.data();
                    let xv = self.nodes[*x].value.data();
                    let mut gx = vec![T::zero(); rows * cols];
                    let mut gc = vec![T::zero(); rows];
                    for r in 0..rows {
                        for c in 0..cols {
                            let gg = g.data()[r * cols + c];
                            gx[r * cols + c] = gg * cv[r];
                            gc[r] += gg * xv[r * cols + c];
                        }
                    }
                    acc(*x, Tensor::from_vec(vec![rows, cols], gx));
                    acc(*col, Tensor::from_vec(vec![rows, 1], gc));
                }
                Op::MulRow(row, x) => {
                    let (rows, cols) = rows_cols(g.shape());
                    let rv = self.nodes[*row].value.data();
                    let xv = self.nodes[*x].value.data();
                    let mut gx = vec![T::zero(); rows * cols];
                    let mut gr = vec![T::zero(); cols];
                    for r in 0..rows {
                        for c in 0..cols {
                            let gg = g.data()[r * cols + c];
                            gx[r * cols + c] = gg * rv[c];
                            gr[c] += gg * xv[r * cols + c];
                        }
                    }
                    acc(*x, Tensor::from_vec(vec![rows, cols], gx));
                    acc(*row, Tensor::from_vec(vec![1, cols], gr));
                }
                Op::AddRow(row, x) => {
                    let (rows, cols) = rows_cols(g.shape());
                    acc(*x, g.clone());
                    let mut gr = vec![T::zero(); cols];
                    for r in 0..rows {
                        for (dst, &src) in gr.iter_mut().zip(&g.data()[r * cols..(r + 1) * cols]) {
                            *dst += src;
                        }
                    }
                    acc(*row, Tensor::from_vec(vec![1, cols], gr));
                }
                Op::ExpandRows(x) => {
                    let (rows, cols) = rows_cols(g.shape());
                    let mut gx = vec![T::zero(); cols];
                    for r in 0..rows {
                        for (dst, &src) in gx.iter_mut().zip(&g.data()[r * cols..(r + 1) * cols]) {
                            *dst += src;
                        }
                    }
                    acc(*x, Tensor::from_vec(vec![1, cols], gx));
                }
                Op::Neg(x) => acc(*x, g.map(|v| -v)),
                Op::Scale(x, c) => {
                    let c = *c;
                    acc(*x, g.map(|v| v * c));
                }
                Op::AddScalar(x, _) => acc(*x, g.clone()),
                Op::Relu(x) => {
                    let xv = self.nodes[*x].value.data();
                    let data = g
                        .data()
                        .iter()
                        .zip(xv)
                        .map(|(&gg, &v)| if v > T::zero() { gg } else { T::zero() })
                        .collect();
                    acc(*x, Tensor::from_vec(g.shape().to_vec(), data));
                }
                Op::Tanh(x) => {
                    let yv = node.value.data();
                    let data = g
                        .data()
                        .iter()
                        .zip(yv)
                        .map(|(&gg, &y)| gg * (T::one() - y * y))
                        .collect();
                    acc(*x, Tensor::from_vec(g.shape().to_vec(), data));
                }
                Op::Sigmoid(x) => {
                    let yv = node.value.data();
                    let data = g
                        .data()
                        .iter()
                        .zip(yv)
                        .map(|(&gg, &y)| gg * y * (T::one() - y))
                        .collect();
                    acc(*x, Tensor::from_vec(g.shape().to_vec(), data));
                }
                Op::Exp(x) => {
                    let yv = node.value.data();
                    let data = g
                        .data()
                        .iter()
                        .zip(yv)
                        .map(|(&gg, &y)| gg * y)
                        .collect();
                    acc(*x, Tensor::from_vec(g.shape().to_vec(), data));
                }
                Op::Softplus(x) => {
                    let xv = self.nodes[*x].value.data();
                    let data = g
                        .data()
                        .iter()
                        .zip(xv)
                        .map(|(&gg, &v)| gg * sigmoid_scalar(v))
                        .collect();
                    acc(*x, Tensor::from_vec(g.shape().to_vec(), data));
                }
                Op::Clamp(x, lo, hi) => {
                    let xv = self.nodes[*x].value.data();
                    let data = g
                        .data()
                        .iter()
                        .zip(xv)
                        .map(|(&gg, &v)| if v >= *lo && v <= *hi { gg } else { T::zero() })
                        .collect();
                    acc(*x, Tensor::from_vec(g.shape().to_vec(), data));
                }
                Op::MatMul(a, b) => {
                    let av = &self.nodes[*a].value;
                    let bv = &self.nodes[*b].value;
                    let (m, k) = rows_cols(av.shape());
                    let n = bv.shape()[1];
                    // dA = G · Bᵀ
                    if self.nodes[*a].requires_grad {
                        let mut ga = vec![T::zero(); m * k];
                        matmul_nt(g.data(), bv.data(), &mut ga, m, n, k);
                        acc(*a, Tensor::from_vec(vec![m, k], ga));
                    }
                    // dB = Aᵀ · G
                    if self.nodes[*b].requires_grad {
                        let mut gb = vec![T::zero(); k * n];
                        matmul_tn(av.data(), g.data(), &mut gb, m, k, n);
                        acc(*b, Tensor::from_vec(vec![k, n], gb));
                    }
                }
                Op::Conv1d { x, w, b, stride } => {
                    let xv = &self.nodes[*x].value;
                    let wv = &self.nodes[*w].value;
                    let (batch, chans, len) = (xv.shape()[0], xv.shape()[1], xv.shape()[2]);
                    let (out_ch, _, kernel) = (wv.shape()[0], wv.shape()[1], wv.shape()[2]);
                    let out_len = (len - kernel) / stride + 1;
                    let gd = g.data();
                    if self.nodes[*x].requires_grad {
                        let mut gx = vec![T::zero(); batch * chans * len];
                        for bi in 0..batch {
                            for o in 0..out_ch {
                                for j in 0..out_len {
                                    let gg = gd[bi * out_ch * out_len + o * out_len + j];
                                    let base = j * stride;
                                    for c in 0..chans {
                                        let gxrow =
                                            &mut gx[bi * chans * len + c * len + base..][..kernel];
                                        let wrow =
                                            &wv.data()[o * chans * kernel + c * kernel..][..kernel];
                                        for (dst, &ww) in gxrow.iter_mut().zip(wrow) {
                                            *dst += gg * ww;
                                        }
                                    }
                                }
                            }
                        }
                        acc(*x, Tensor::from_vec(vec![batch, chans, len], gx));
                    }
                    if self.nodes[*w].requires_grad {
                        let mut gw = vec![T::zero(); out_ch * chans * kernel];
                        for bi in 0..batch {
                            for o in 0..out_ch {
                                for j in 0..out_len {
                                    let gg = gd[bi * out_ch * out_len + o * out_len + j];
                                    let base = j * stride;
                                    for c in 0..chans {
                                        let xrow =
                                            &xv.data()[bi * chans * len + c * len + base..][..kernel];
                                        let gwrow =
                                            &mut gw[o * chans * kernel + c * kernel..][..kernel];
                                        for (dst, &xx) in gwrow.iter_mut().zip(xrow) {
                                            *dst += gg * xx;
                                        }
                                    }
                                }
                            }
                        }
                        acc(*w, Tensor::from_vec(vec![out_ch, chans, kernel], gw));
                    }
                    if self.nodes[*b].requires_grad {
                        let mut gb = vec![T::zero(); out_ch];
                        for bi in 0..batch {
                            for o in 0..out_ch {
                                for j in 0..out_len {
                                    gb[o] += gd[bi * out_ch * out_len + o * out_len + j];
                                }
                            }
                        }
                        acc(*b, Tensor::from_vec(vec![out_ch], gb));
                    }
                }
                Op::Sum(x) => {
                    let gg = g.item();
                    let xs = self.nodes[*x].value.shape().to_vec();
                    acc(*x, Tensor::full(xs, gg));
                }
                Op::Mean(x) => {
                    let n = T::of(self.nodes[*x].value.numel() as f64);
                    let gg = g.item() / n;
                    let xs = self.nodes[*x].value.shape().to_vec();
                    acc(*x, Tensor::full(xs, gg));
                }
                Op::SumCols(x) => {
                    let (rows, cols) = rows_cols(self.nodes[*x].value.shape());
                    let mut gx = vec![T::zero(); rows * cols];
                    for r in 0..rows {
                        let gg = g.data()[r];
                        for v in gx[r * cols..(r + 1) * cols].iter_mut() {
                            *v = gg;
                        }
                    }
                    acc(*x, Tensor::from_vec(vec![rows, cols], gx));
                }
                Op::Concat(parts) => {
                    let rows = g.shape()[0];
                    let mut offsets = Vec::with_capacity(parts.len());
                    let mut total = 0usize;
                    for &p in parts {
                        let c = self.nodes[p].value.shape()[1];
                        offsets.push((total, c));
                        total += c;
                    }
                    for (&p, &(off, c)) in parts.iter().zip(&offsets) {
                        if !self.nodes[p].requires_grad {
                            continue;
                        }
                        let mut gp = Vec::with_capacity(rows * c);
                        for r in 0..rows {
                            gp.extend_from_slice(&g.data()[r * total + off..r * total + off + c]);
                        }
                        acc(p, Tensor::from_vec(vec![rows, c], gp));
                    }
                }
                Op::SliceCols { x, start, len } => {
                    let (rows, cols) = rows_cols(self.nodes[*x].value.shape());
                    let mut gx = vec![T::zero(); rows * cols];
                    for r in 0..rows {
                        gx[r * cols + start..r * cols + start + len]
                            .copy_from_slice(&g.data()[r * len..(r + 1) * len]);
                    }
                    acc(*x, Tensor::from_vec(vec![rows, cols], gx));
                }
                Op::Reshape(x) => {
                    let xs = self.nodes[*x].value.shape().to_vec();
                    acc(*x, g.clone().reshaped(xs));
                }
            }
        }
        Gradients { grads }
    }
}

#[inline]
fn sigmoid_scalar<T: Real>(v: T) -> T {
    if v >= T::zero() {
        T::one() / (T::one() + (-v).exp())
    } else {
        let e = v.exp();
        e / (T::one() + e)
    }
}

#[inline]
fn softplus_scalar<T: Real>(v: T) -> T {
    // ln(1+e^v) = max(v,0) + ln(1+e^{-|v|})
    v.max(T::zero()) + (T::one() + (-v.abs()).exp()).ln()
}

/// out[m,n] = a[m,k] · b[k,n]
fn matmul_nn<T: Real>(a: &[T], b: &[T], out: &mut [T], m: usize, k: usize, n: usize) {
    for i in 0..m {
        let arow = &a[i * k..(i + 1) * k];
        let orow = &mut out[i * n..(i + 1) * n];
        for (kk, &aik) in arow.iter().enumerate() {
            let brow = &b[kk * n..(kk + 1) * n];
            for (o, &bv) in orow.iter_mut().zip(brow) {
                *o += aik * bv;
            }
        }
    }
}

/// out[m,k] = g[m,n] · b[k,n]ᵀ
fn matmul_nt<T: Real>(g: &[T], b: &[T], out: &mut [T], m: usize, n: usize, k: usize) {
    for i in 0..m {
        let grow = &g[i * n..(i + 1) * n];
        let orow = &mut out[i * k..(i + 1) * k];
        for (kk, o) in orow.iter_mut().enumerate() {
            let brow = &b[kk * n..(kk + 1) * n];
            *o += grow
                .iter()
                .zip(brow)
                .map(|(&x, &y)| x * y)
                .sum::<T>();
        }
    }
}

/// out[k,n] = a[m,k]ᵀ · g[m,n]
fn matmul_tn<T: Real>(a: &[T], g: &[T], out: &mut [T], m: usize, k: usize, n: usize) {
    for i in 0..m {
        let arow = &a[i * k..(i + 1) * k];
        let grow = &g[i * n..(i + 1) * n];
        for (kk, &av) in arow.iter().enumerate() {
            let orow = &mut out[kk * n..(kk + 1) * n];
            for (o, &gv) in orow.iter_mut().zip(grow) {
                *o += av * gv;
            }
        }
    }
}
