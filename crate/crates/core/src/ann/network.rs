use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Largest `f64` strictly below one; keeps saturated activations inside (-1, 1).
const OPEN_UNIT: f64 = 1.0 - f64::EPSILON / 2.0;

/// Bipolar sigmoid `(1 - e^{-u}) / (1 + e^{-u})`.
///
/// Evaluated as `tanh(u/2)`, which is the same function without overflow for
/// large negative `u`. Its derivative is `0.5 (1 - f²)`.
pub fn bipolar_sigmoid(u: f64) -> f64 {
    (0.5 * u).tanh().clamp(-OPEN_UNIT, OPEN_UNIT)
}

/// Hidden and output activations from one forward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct Activations {
    pub hidden: Vec<f64>,
    pub output: Vec<f64>,
}

/// Feedforward network with one hidden layer and no bias terms.
///
/// `v` is J×I (row j holds the weights from every input into hidden node j),
/// `w` is K×J. Both are stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpNetwork {
    input_size: usize,
    hidden_size: usize,
    output_size: usize,
    v: Vec<f64>,
    w: Vec<f64>,
}

impl MlpNetwork {
    pub fn zeros(input_size: usize, hidden_size: usize, output_size: usize) -> Result<Self> {
        check_sizes(input_size, hidden_size, output_size)?;
        Ok(Self {
            input_size,
            hidden_size,
            output_size,
            v: vec![0.0; hidden_size * input_size],
            w: vec![0.0; output_size * hidden_size],
        })
    }

    /// Builds a network from row-major weight matrices.
    pub fn from_weights(
        input_size: usize,
        hidden_size: usize,
        output_size: usize,
        v: Vec<f64>,
        w: Vec<f64>,
    ) -> Result<Self> {
        check_sizes(input_size, hidden_size, output_size)?;
        if v.len() != hidden_size * input_size {
            return Err(Error::input(format!(
                "hidden weights need {}x{} entries, got {}",
                hidden_size,
                input_size,
                v.len()
            )));
        }
        if w.len() != output_size * hidden_size {
            return Err(Error::input(format!(
                "output weights need {}x{} entries, got {}",
                output_size,
                hidden_size,
                w.len()
            )));
        }
        if v.iter().chain(&w).any(|x| !x.is_finite()) {
            return Err(Error::input("weights must be finite"));
        }
        Ok(Self {
            input_size,
            hidden_size,
            output_size,
            v,
            w,
        })
    }

    /// Weights drawn uniformly from `[-init_range, init_range]` with a seeded ChaCha8 stream.
    pub fn seeded(
        input_size: usize,
        hidden_size: usize,
        output_size: usize,
        init_range: f64,
        seed: u64,
    ) -> Result<Self> {
        if !(init_range.is_finite() && init_range > 0.0) {
            return Err(Error::domain(format!("init range must be positive, got {init_range}")));
        }
        let mut net = Self::zeros(input_size, hidden_size, output_size)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for x in net.v.iter_mut().chain(net.w.iter_mut()) {
            *x = rng.random_range(-init_range..=init_range);
        }
        Ok(net)
    }

    pub fn input_size(&self) -> usize {
        self.input_size
    }

    pub fn hidden_size(&self) -> usize {
        self.hidden_size
    }

    pub fn output_size(&self) -> usize {
        self.output_size
    }

    /// Input-to-hidden weights, J×I row-major.
    pub fn hidden_weights(&self) -> &[f64] {
        &self.v
    }

    /// Hidden-to-output weights, K×J row-major.
    pub fn output_weights(&self) -> &[f64] {
        &self.w
    }

    pub(crate) fn hidden_weights_mut(&mut self) -> &mut [f64] {
        &mut self.v
    }

    pub(crate) fn output_weights_mut(&mut self) -> &mut [f64] {
        &mut self.w
    }

    /// `v_ji`, connecting input i to hidden node j.
    pub fn v(&self, j: usize, i: usize) -> f64 {
        self.v[j * self.input_size + i]
    }

    /// `w_kj`, connecting hidden node j to output k.
    pub fn w(&self, k: usize, j: usize) -> f64 {
        self.w[k * self.hidden_size + j]
    }

    pub(crate) fn v_row(&self, j: usize) -> &[f64] {
        &self.v[j * self.input_size..(j + 1) * self.input_size]
    }

    pub(crate) fn w_row(&self, k: usize) -> &[f64] {
        &self.w[k * self.hidden_size..(k + 1) * self.hidden_size]
    }

    /// `p_j = f(Σ_i v_ji z_i)`, `o_k = f(Σ_j w_kj p_j)`.
    pub fn forward(&self, z: &[f64]) -> Result<Activations> {
        if z.len() != self.input_size {
            return Err(Error::input(format!(
                "network expects {} inputs, got {}",
                self.input_size,
                z.len()
            )));
        }
        Ok(self.forward_unchecked(z))
    }

    pub(crate) fn forward_unchecked(&self, z: &[f64]) -> Activations {
        let mut act = Activations {
            hidden: vec![0.0; self.hidden_size],
            output: vec![0.0; self.output_size],
        };
        self.forward_into(z, &mut act);
        act
    }

    /// Forward pass into preallocated buffers of the right lengths.
    pub(crate) fn forward_into(&self, z: &[f64], act: &mut Activations) {
        for (j, p) in act.hidden.iter_mut().enumerate() {
            *p = bipolar_sigmoid(dot(self.v_row(j), z));
        }
        for (k, o) in act.output.iter_mut().enumerate() {
            *o = bipolar_sigmoid(dot(self.w_row(k), &act.hidden));
        }
    }

    /// Output vector only.
    pub fn predict(&self, z: &[f64]) -> Result<Vec<f64>> {
        Ok(self.forward(z)?.output)
    }
}

fn check_sizes(i: usize, j: usize, k: usize) -> Result<()> {
    if i == 0 || j == 0 || k == 0 {
        return Err(Error::input(format!(
            "layer sizes must be at least 1, got {i}-{j}-{k}"
        )));
    }
    Ok(())
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
