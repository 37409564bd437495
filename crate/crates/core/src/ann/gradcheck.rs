use rayon::prelude::*;

use super::ebpta::{hidden_deltas, output_deltas, pair_error};
use super::network::MlpNetwork;
use super::train::TrainingPair;
use crate::error::{Error, Result};

/// `∂E/∂v` (J×I) and `∂E/∂w` (K×J), row-major like the network's weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub hidden: Vec<f64>,
    pub output: Vec<f64>,
}

/// Gradient implied by the delta rules: the update is `+β δ·input`, so
/// `∂E/∂v_ji = -δ_Pj z_i` and `∂E/∂w_kj = -δ_Ok p_j`.
pub fn analytic_gradient(net: &MlpNetwork, pair: &TrainingPair) -> Result<Gradient> {
    let act = net.forward(&pair.z)?;
    let dout = output_deltas(&act.output, &pair.d)?;
    let dhid = hidden_deltas(&act.hidden, &dout, net)?;
    let hidden = dhid
        .iter()
        .flat_map(|dp| pair.z.iter().map(move |zi| -dp * zi))
        .collect();
    let output = dout
        .iter()
        .flat_map(|dk| act.hidden.iter().map(move |pj| -dk * pj))
        .collect();
    Ok(Gradient { hidden, output })
}

/// Max relative deviation between central differences and the delta-rule gradient.
pub fn gradient_check(net: &MlpNetwork, pair: &TrainingPair, epsilon: f64) -> Result<f64> {
    let analytic = analytic_gradient(net, pair)?;
    gradient_check_with(net, pair, epsilon, &analytic)
}

/// Compares `(E⁺ - E⁻) / 2ε` for every weight against a supplied gradient.
///
/// Per weight the deviation is `|a - n| / max(|a|, |n|)`, taken as 0 when both
/// magnitudes are below 1e-12.
pub fn gradient_check_with(
    net: &MlpNetwork,
    pair: &TrainingPair,
    epsilon: f64,
    analytic: &Gradient,
) -> Result<f64> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::domain(format!("epsilon must be positive, got {epsilon}")));
    }
    if analytic.hidden.len() != net.hidden_weights().len()
        || analytic.output.len() != net.output_weights().len()
    {
        return Err(Error::input("gradient shape does not match the network"));
    }
    net.forward(&pair.z)?;
    if pair.d.len() != net.output_size() {
        return Err(Error::input("desired output length does not match the network"));
    }

    let n_hidden = net.hidden_weights().len();
    let total = n_hidden + net.output_weights().len();
    // Max is order-independent, so the parallel reduction is deterministic.
    let deviations = (0..total)
        .into_par_iter()
        .map(|idx| {
            let numeric = central_difference(net, pair, idx, n_hidden, epsilon)?;
            let exact = if idx < n_hidden {
                analytic.hidden[idx]
            } else {
                analytic.output[idx - n_hidden]
            };
            Ok(relative_deviation(exact, numeric))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(deviations.into_iter().fold(0.0, f64::max))
}

fn central_difference(
    net: &MlpNetwork,
    pair: &TrainingPair,
    idx: usize,
    n_hidden: usize,
    epsilon: f64,
) -> Result<f64> {
    let error_at = |delta: f64| -> Result<f64> {
        let mut probe = net.clone();
        if idx < n_hidden {
            probe.hidden_weights_mut()[idx] += delta;
        } else {
            probe.output_weights_mut()[idx - n_hidden] += delta;
        }
        pair_error(&probe.forward_unchecked(&pair.z).output, &pair.d)
    };
    Ok((error_at(epsilon)? - error_at(-epsilon)?) / (2.0 * epsilon))
}

fn relative_deviation(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale < 1e-12 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_net_zero_target_reports_zero() {
        let net = MlpNetwork::zeros(1, 3, 1).unwrap();
        let pair = TrainingPair::new(vec![0.0], vec![0.0]).unwrap();
        assert_eq!(gradient_check(&net, &pair, 1e-5).unwrap(), 0.0);
    }

    #[test]
    fn random_net_passes() {
        let net = MlpNetwork::seeded(2, 5, 3, 1.0, 11).unwrap();
        let pair = TrainingPair::new(vec![0.4, -0.7], vec![0.5, -0.2, 0.1]).unwrap();
        assert!(gradient_check(&net, &pair, 1e-5).unwrap() < 1e-5);
    }

    #[test]
    fn sign_flipped_gradient_is_caught() {
        let net = MlpNetwork::seeded(1, 4, 1, 1.0, 3).unwrap();
        let pair = TrainingPair::new(vec![0.6], vec![0.7]).unwrap();
        let mut g = analytic_gradient(&net, &pair).unwrap();
        for x in g.hidden.iter_mut().chain(g.output.iter_mut()) {
            *x = -*x;
        }
        let dev = gradient_check_with(&net, &pair, 1e-5, &g).unwrap();
        assert!((dev - 2.0).abs() < 1e-4, "{dev}");
    }

    #[test]
    fn bad_epsilon_rejected() {
        let net = MlpNetwork::zeros(1, 1, 1).unwrap();
        let pair = TrainingPair::new(vec![0.0], vec![0.0]).unwrap();
        assert!(gradient_check(&net, &pair, 0.0).is_err());
    }
}
