//! Small fully connected networks with exact reverse-mode gradients.

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::rng::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Tanh,
    Identity,
}

impl Activation {
    fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Tanh => z.tanh(),
            Activation::Identity => z,
        }
    }

    /// Derivative expressed through the activation output `y`.
    fn derivative_from_output(self, y: f64) -> f64 {
        match self {
            Activation::Tanh => 1.0 - y * y,
            Activation::Identity => 1.0,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Activation::Tanh => "tanh",
            Activation::Identity => "identity",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "tanh" => Some(Activation::Tanh),
            "identity" => Some(Activation::Identity),
            _ => None,
        }
    }
}

/// Affine map followed by an elementwise activation. `weight` is
/// `out_dim × in_dim`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub weight: Vec<f64>,
    pub bias: Vec<f64>,
    pub activation: Activation,
    pub in_dim: usize,
    pub out_dim: usize,
}

impl Layer {
    pub fn zeros(in_dim: usize, out_dim: usize, activation: Activation) -> Self {
        Self {
            weight: vec![0.0; in_dim * out_dim],
            bias: vec![0.0; out_dim],
            activation,
            in_dim,
            out_dim,
        }
    }

    fn forward(&self, x: &[f64]) -> Vec<f64> {
        self.weight
            .chunks_exact(self.in_dim)
            .zip(&self.bias)
            .map(|(row, b)| self.activation.apply(row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + b))
            .collect()
    }
}

/// A chain of [`Layer`]s.
#[derive(Debug, Clone, PartialEq)]
pub struct TinyNet {
    layers: Vec<Layer>,
}

/// Parameter gradients, laid out like the network's layers.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub layers: Vec<(Vec<f64>, Vec<f64>)>,
}

/// Inputs and outputs of every layer from one forward pass.
#[derive(Debug, Clone)]
pub struct Trace {
    /// `acts[0]` is the network input; `acts[i + 1]` is layer `i`'s output.
    acts: Vec<Vec<f64>>,
}

impl Trace {
    pub fn output(&self) -> &[f64] {
        self.acts.last().unwrap()
    }
}

impl TinyNet {
    pub fn new(layers: Vec<Layer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::Config("network needs at least one layer".into()));
        }
        for (i, l) in layers.iter().enumerate() {
            if l.in_dim == 0 || l.out_dim == 0 {
                return Err(Error::Config(format!("layer {i} has a zero dimension")));
            }
            if l.weight.len() != l.in_dim * l.out_dim || l.bias.len() != l.out_dim {
                return Err(Error::Config(format!("layer {i} parameter shapes do not match its dims")));
            }
            if l.weight.iter().chain(&l.bias).any(|v| !v.is_finite()) {
                return Err(Error::Numerical(format!("layer {i} has non-finite parameters")));
            }
        }
        for (i, pair) in layers.windows(2).enumerate() {
            if pair[0].out_dim != pair[1].in_dim {
                return Err(Error::Config(format!(
                    "layer {i} outputs {} values but layer {} expects {}",
                    pair[0].out_dim,
                    i + 1,
                    pair[1].in_dim
                )));
            }
        }
        Ok(Self { layers })
    }

    /// Random network with uniform Glorot initialization and zero biases.
    /// `dims` lists layer widths from input to output.
    pub fn random(dims: &[usize], activations: &[Activation], rng: &mut Rng) -> Result<Self> {
        if dims.len() != activations.len() + 1 {
            return Err(Error::Config("need one activation per layer".into()));
        }
        let layers = dims
            .windows(2)
            .zip(activations)
            .map(|(w, &act)| {
                let (fan_in, fan_out) = (w[0], w[1]);
                let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
                let mut l = Layer::zeros(fan_in, fan_out, act);
                l.weight.iter_mut().for_each(|v| *v = rng.random_range(-limit..limit));
                l
            })
            .collect();
        Self::new(layers)
    }

    /// Single linear layer computing the identity on `dim` inputs.
    pub fn identity(dim: usize) -> Self {
        let mut l = Layer::zeros(dim, dim, Activation::Identity);
        for i in 0..dim {
            l.weight[i * dim + i] = 1.0;
        }
        Self { layers: vec![l] }
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [Layer] {
        &mut self.layers
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].in_dim
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().unwrap().out_dim
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        let mut h = x.to_vec();
        for l in &self.layers {
            h = l.forward(&h);
        }
        Ok(h)
    }

    pub fn forward_trace(&self, x: &[f64]) -> Result<Trace> {
        self.check_input(x)?;
        let mut acts = Vec::with_capacity(self.layers.len() + 1);
        acts.push(x.to_vec());
        for l in &self.layers {
            let next = l.forward(acts.last().unwrap());
            acts.push(next);
        }
        Ok(Trace { acts })
    }

    /// Parameter gradients and input gradient for loss gradient `grad_out`
    /// at input `x`.
    pub fn backward(&self, x: &[f64], grad_out: &[f64]) -> Result<(Gradients, Vec<f64>)> {
        let trace = self.forward_trace(x)?;
        let mut grads = self.zero_grads();
        let grad_in = self.backward_trace(&trace, grad_out, &mut grads)?;
        Ok((grads, grad_in))
    }

    /// Accumulate parameter gradients from a recorded forward pass into
    /// `grads` and return the input gradient.
    pub fn backward_trace(&self, trace: &Trace, grad_out: &[f64], grads: &mut Gradients) -> Result<Vec<f64>> {
        if grad_out.len() != self.output_dim() {
            return Err(Error::DimMismatch {
                expected: self.output_dim(),
                got: grad_out.len(),
            });
        }
        let mut g = grad_out.to_vec();
        for (i, l) in self.layers.iter().enumerate().rev() {
            let input = &trace.acts[i];
            let output = &trace.acts[i + 1];
            let delta: Vec<f64> = g
                .iter()
                .zip(output)
                .map(|(g, y)| g * l.activation.derivative_from_output(*y))
                .collect();
            let (gw, gb) = &mut grads.layers[i];
            for (o, d) in delta.iter().enumerate() {
                gb[o] += d;
                let row = &mut gw[o * l.in_dim..(o + 1) * l.in_dim];
                row.iter_mut().zip(input).for_each(|(w, x)| *w += d * x);
            }
            let mut prev = vec![0.0; l.in_dim];
            for (o, d) in delta.iter().enumerate() {
                let row = &l.weight[o * l.in_dim..(o + 1) * l.in_dim];
                prev.iter_mut().zip(row).for_each(|(p, w)| *p += d * w);
            }
            g = prev;
        }
        Ok(g)
    }

    pub fn zero_grads(&self) -> Gradients {
        Gradients {
            layers: self
                .layers
                .iter()
                .map(|l| (vec![0.0; l.weight.len()], vec![0.0; l.bias.len()]))
                .collect(),
        }
    }

    /// Gradient-descent step `params -= lr * grads`.
    pub fn apply(&mut self, grads: &Gradients, lr: f64) {
        for (l, (gw, gb)) in self.layers.iter_mut().zip(&grads.layers) {
            l.weight.iter_mut().zip(gw).for_each(|(w, g)| *w -= lr * g);
            l.bias.iter_mut().zip(gb).for_each(|(b, g)| *b -= lr * g);
        }
    }

    /// All parameters in layer order, weights before biases.
    pub fn params(&self) -> Vec<f64> {
        self.layers
            .iter()
            .flat_map(|l| l.weight.iter().chain(&l.bias).copied())
            .collect()
    }

    pub fn set_params(&mut self, params: &[f64]) {
        let mut it = params.iter();
        for l in &mut self.layers {
            for v in l.weight.iter_mut().chain(l.bias.iter_mut()) {
                *v = *it.next().expect("parameter vector too short");
            }
        }
        assert!(it.next().is_none(), "parameter vector too long");
    }

    pub fn is_finite(&self) -> bool {
        self.layers
            .iter()
            .all(|l| l.weight.iter().chain(&l.bias).all(|v| v.is_finite()))
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.input_dim() {
            return Err(Error::DimMismatch {
                expected: self.input_dim(),
                got: x.len(),
            });
        }
        Ok(())
    }
}

impl Gradients {
    pub fn flat(&self) -> Vec<f64> {
        self.layers
            .iter()
            .flat_map(|(w, b)| w.iter().chain(b).copied())
            .collect()
    }

    pub fn scale(&mut self, s: f64) {
        for (w, b) in &mut self.layers {
            w.iter_mut().chain(b.iter_mut()).for_each(|v| *v *= s);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.flat().iter().all(|&v| v == 0.0)
    }
}

/// Largest relative error between two gradient vectors, with the
/// denominator floored at `floor` to avoid blow-up near zero.
pub fn max_relative_error(analytic: &[f64], numeric: &[f64], floor: f64) -> f64 {
    analytic
        .iter()
        .zip(numeric)
        .map(|(a, n)| (a - n).abs() / a.abs().max(n.abs()).max(floor))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn reference_forward(net: &TinyNet, x: &[f64]) -> Vec<f64> {
        // Independent formulation: explicit index loops.
        let mut h = x.to_vec();
        for l in net.layers() {
            let mut out = vec![0.0; l.out_dim];
            for o in 0..l.out_dim {
                let mut z = l.bias[o];
                for i in 0..l.in_dim {
                    z += l.weight[o * l.in_dim + i] * h[i];
                }
                out[o] = if l.activation == Activation::Tanh { z.tanh() } else { z };
            }
            h = out;
        }
        h
    }

    fn loss(net: &TinyNet, x: &[f64], target: &[f64]) -> f64 {
        net.forward(x)
            .unwrap()
            .iter()
            .zip(target)
            .map(|(y, t)| 0.5 * (y - t) * (y - t))
            .sum()
    }

    #[test]
    fn zero_net_gives_zero() {
        let net = TinyNet::new(vec![Layer::zeros(3, 2, Activation::Identity)]).unwrap();
        assert_eq!(net.forward(&[1.0, 2.0, 3.0]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn identity_layer_passes_input() {
        let net = TinyNet::identity(4);
        let x = [0.5, -2.0, 3.25, 0.0];
        assert_eq!(net.forward(&x).unwrap(), x.to_vec());
        let (g, gin) = net.backward(&x, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(gin, vec![1.0, 2.0, 3.0, 4.0]);
        assert!(!g.is_zero());
    }

    #[test]
    fn matches_reference_forward() {
        let net = TinyNet::random(&[5, 7, 3], &[Activation::Tanh, Activation::Identity], &mut rng::seeded(1)).unwrap();
        let x = [0.3, -0.1, 0.9, 1.5, -2.0];
        let a = net.forward(&x).unwrap();
        let b = reference_forward(&net, &x);
        for (u, v) in a.iter().zip(&b) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_grad_out_gives_zero_gradients() {
        let net = TinyNet::random(&[3, 4, 2], &[Activation::Tanh, Activation::Tanh], &mut rng::seeded(2)).unwrap();
        let (g, gin) = net.backward(&[1.0, 2.0, 3.0], &[0.0, 0.0]).unwrap();
        assert!(g.is_zero());
        assert!(gin.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn dimension_errors() {
        let net = TinyNet::identity(2);
        assert!(matches!(net.forward(&[1.0]), Err(Error::DimMismatch { .. })));
        assert!(matches!(net.backward(&[1.0, 2.0], &[1.0]), Err(Error::DimMismatch { .. })));
        let bad = TinyNet::new(vec![Layer::zeros(2, 3, Activation::Tanh), Layer::zeros(4, 1, Activation::Identity)]);
        assert!(bad.is_err());
    }

    #[test]
    fn finite_difference_gradients() {
        let mut g = rng::seeded(9);
        for case in 0..5 {
            let mut net = TinyNet::random(&[4, 6, 3], &[Activation::Tanh, Activation::Identity], &mut g).unwrap();
            let x: Vec<f64> = (0..4).map(|_| g.random_range(-1.0..1.0)).collect();
            let target: Vec<f64> = (0..3).map(|_| g.random_range(-1.0..1.0)).collect();
            let y = net.forward(&x).unwrap();
            let grad_out: Vec<f64> = y.iter().zip(&target).map(|(a, b)| a - b).collect();
            let (grads, grad_in) = net.backward(&x, &grad_out).unwrap();

            let eps = 1e-4;
            let p0 = net.params();
            let mut numeric = Vec::with_capacity(p0.len());
            for i in 0..p0.len() {
                let mut p = p0.clone();
                p[i] += eps;
                net.set_params(&p);
                let up = loss(&net, &x, &target);
                p[i] -= 2.0 * eps;
                net.set_params(&p);
                let down = loss(&net, &x, &target);
                numeric.push((up - down) / (2.0 * eps));
            }
            net.set_params(&p0);
            let err = max_relative_error(&grads.flat(), &numeric, 1e-6);
            assert!(err < 1e-3, "case {case}: parameter rel err {err}");

            let numeric_in: Vec<f64> = (0..x.len())
                .map(|i| {
                    let mut xp = x.clone();
                    xp[i] += eps;
                    let up = loss(&net, &xp, &target);
                    xp[i] -= 2.0 * eps;
                    (up - loss(&net, &xp, &target)) / (2.0 * eps)
                })
                .collect();
            assert!(max_relative_error(&grad_in, &numeric_in, 1e-6) < 1e-3);
        }
    }
}
