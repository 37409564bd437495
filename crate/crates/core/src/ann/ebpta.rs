//! Error signals and weight updates of error back-propagation.
//!
//! With the bipolar sigmoid, `0.5 (1 - y²)` is the activation derivative, so
//! the deltas below are exactly `-∂E/∂net` and the updates are gradient
//! descent steps of size β on `E = ½ Σ_k (d_k - o_k)²`.

use super::network::MlpNetwork;
use crate::error::{Error, Result};

/// `E = ½ Σ_k (d_k - o_k)²`
pub fn pair_error(output: &[f64], desired: &[f64]) -> Result<f64> {
    same_len(output.len(), desired.len(), "output/desired")?;
    Ok(0.5
        * output
            .iter()
            .zip(desired)
            .map(|(o, d)| (d - o) * (d - o))
            .sum::<f64>())
}

/// `δ_Ok = 0.5 (d_k - o_k)(1 - o_k²)`
pub fn output_deltas(output: &[f64], desired: &[f64]) -> Result<Vec<f64>> {
    same_len(output.len(), desired.len(), "output/desired")?;
    let mut out = vec![0.0; output.len()];
    output_deltas_into(output, desired, &mut out);
    Ok(out)
}

pub(crate) fn output_deltas_into(output: &[f64], desired: &[f64], out: &mut [f64]) {
    for ((dk, o), d) in out.iter_mut().zip(output).zip(desired) {
        *dk = 0.5 * (d - o) * (1.0 - o * o);
    }
}

/// `δ_Pj = 0.5 (1 - p_j²) Σ_k δ_Ok w_kj`
pub fn hidden_deltas(hidden: &[f64], output_deltas: &[f64], net: &MlpNetwork) -> Result<Vec<f64>> {
    same_len(hidden.len(), net.hidden_size(), "hidden activations")?;
    same_len(output_deltas.len(), net.output_size(), "output deltas")?;
    let mut out = vec![0.0; hidden.len()];
    hidden_deltas_into(hidden, output_deltas, net, &mut out);
    Ok(out)
}

pub(crate) fn hidden_deltas_into(
    hidden: &[f64],
    output_deltas: &[f64],
    net: &MlpNetwork,
    out: &mut [f64],
) {
    for (j, (dp, p)) in out.iter_mut().zip(hidden).enumerate() {
        let back: f64 = output_deltas
            .iter()
            .enumerate()
            .map(|(k, dk)| dk * net.w(k, j))
            .sum();
        *dp = 0.5 * (1.0 - p * p) * back;
    }
}

/// `v_ji += β δ_Pj z_i` and `w_kj += β δ_Ok p_j`, returning the updated network.
pub fn apply_updates(
    net: &MlpNetwork,
    z: &[f64],
    hidden: &[f64],
    output_deltas: &[f64],
    hidden_deltas: &[f64],
    beta: f64,
) -> Result<MlpNetwork> {
    same_len(z.len(), net.input_size(), "input")?;
    same_len(hidden.len(), net.hidden_size(), "hidden activations")?;
    same_len(output_deltas.len(), net.output_size(), "output deltas")?;
    same_len(hidden_deltas.len(), net.hidden_size(), "hidden deltas")?;
    let mut next = net.clone();
    update_in_place(&mut next, z, hidden, output_deltas, hidden_deltas, beta);
    Ok(next)
}

pub(crate) fn update_in_place(
    net: &mut MlpNetwork,
    z: &[f64],
    hidden: &[f64],
    output_deltas: &[f64],
    hidden_deltas: &[f64],
    beta: f64,
) {
    let inputs = net.input_size();
    for (j, dp) in hidden_deltas.iter().enumerate() {
        let row = &mut net.hidden_weights_mut()[j * inputs..(j + 1) * inputs];
        for (v, zi) in row.iter_mut().zip(z) {
            *v += beta * dp * zi;
        }
    }
    let hidden_n = net.hidden_size();
    for (k, dk) in output_deltas.iter().enumerate() {
        let row = &mut net.output_weights_mut()[k * hidden_n..(k + 1) * hidden_n];
        for (w, pj) in row.iter_mut().zip(hidden) {
            *w += beta * dk * pj;
        }
    }
}

fn same_len(got: usize, want: usize, what: &str) -> Result<()> {
    if got != want {
        return Err(Error::input(format!(
            "{what}: dimension mismatch ({got} vs {want})"
        )));
    }
    Ok(())
}
