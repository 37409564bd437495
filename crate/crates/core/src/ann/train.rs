use super::ebpta::{hidden_deltas_into, output_deltas_into, pair_error, update_in_place};
use super::network::{Activations, MlpNetwork};
use crate::error::{Error, Result};

/// Input vector `z` with its desired output `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingPair {
    pub z: Vec<f64>,
    pub d: Vec<f64>,
}

impl TrainingPair {
    /// Rejects non-finite components and targets outside the activation's open range.
    pub fn new(z: Vec<f64>, d: Vec<f64>) -> Result<Self> {
        if z.iter().chain(&d).any(|x| !x.is_finite()) {
            return Err(Error::input("training pair components must be finite"));
        }
        if let Some(x) = d.iter().find(|x| x.abs() >= 1.0) {
            return Err(Error::input(format!(
                "desired output {x} is outside the activation range (-1, 1)"
            )));
        }
        Ok(Self { z, d })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainerConfig {
    /// Learning constant β.
    pub beta: f64,
    pub max_epochs: usize,
    /// Training stops once the summed per-pair error of an epoch is at or below this.
    pub error_goal: f64,
    pub seed: u64,
    /// Half-width of the uniform initialization interval.
    pub init_range: f64,
}

impl Default for TrainerConfig {
    fn default() -> Self {
        Self {
            beta: 0.05,
            max_epochs: 10_000,
            error_goal: 1e-4,
            seed: 0,
            init_range: 0.5,
        }
    }
}

impl TrainerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::domain(format!("beta must be positive, got {}", self.beta)));
        }
        if self.max_epochs == 0 {
            return Err(Error::domain("max_epochs must be at least 1"));
        }
        if self.error_goal.is_nan() || self.error_goal < 0.0 {
            return Err(Error::domain(format!(
                "error goal must be non-negative, got {}",
                self.error_goal
            )));
        }
        if !(self.init_range.is_finite() && self.init_range > 0.0) {
            return Err(Error::domain(format!(
                "init range must be positive, got {}",
                self.init_range
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    pub epochs_run: usize,
    /// Summed pair error of the last epoch (or of the initial check when no epoch ran).
    pub final_cumulative_error: f64,
    /// Summed pair error per epoch, accumulated before each pair's update.
    pub trace: Vec<f64>,
}

/// Summed pair error of `net` over `pairs`, without updating anything.
pub fn cumulative_error(net: &MlpNetwork, pairs: &[TrainingPair]) -> Result<f64> {
    let mut total = 0.0;
    for pair in pairs {
        let out = net.forward(&pair.z)?.output;
        total += pair_error(&out, &pair.d)?;
    }
    Ok(total)
}

/// Per-pattern error back-propagation in dataset order.
///
/// Before the first epoch the summed error is checked against the goal; if it
/// is already met no epoch runs. Each epoch then performs forward pass,
/// deltas and update for every pair in turn.
pub fn train(
    net: &MlpNetwork,
    pairs: &[TrainingPair],
    cfg: &TrainerConfig,
) -> Result<(MlpNetwork, TrainReport)> {
    cfg.validate()?;
    if pairs.is_empty() {
        return Err(Error::input("training set is empty"));
    }
    for (n, pair) in pairs.iter().enumerate() {
        if pair.z.len() != net.input_size() || pair.d.len() != net.output_size() {
            return Err(Error::input(format!(
                "pair {n} has shape {}->{} but the network is {}->{}",
                pair.z.len(),
                pair.d.len(),
                net.input_size(),
                net.output_size()
            )));
        }
    }

    let mut net = net.clone();
    let initial = cumulative_error(&net, pairs)?;
    let mut report = TrainReport {
        epochs_run: 0,
        final_cumulative_error: initial,
        trace: Vec::new(),
    };
    if initial <= cfg.error_goal {
        return Ok((net, report));
    }

    let mut act = Activations {
        hidden: vec![0.0; net.hidden_size()],
        output: vec![0.0; net.output_size()],
    };
    let mut dout = vec![0.0; net.output_size()];
    let mut dhid = vec![0.0; net.hidden_size()];
    for _ in 0..cfg.max_epochs {
        let mut epoch_error = 0.0;
        for pair in pairs {
            net.forward_into(&pair.z, &mut act);
            epoch_error += pair_error(&act.output, &pair.d)?;
            output_deltas_into(&act.output, &pair.d, &mut dout);
            hidden_deltas_into(&act.hidden, &dout, &net, &mut dhid);
            update_in_place(&mut net, &pair.z, &act.hidden, &dout, &dhid, cfg.beta);
        }
        report.trace.push(epoch_error);
        report.epochs_run += 1;
        report.final_cumulative_error = epoch_error;
        if !epoch_error.is_finite() {
            return Err(Error::domain("training diverged (non-finite error)"));
        }
        if epoch_error <= cfg.error_goal {
            break;
        }
    }
    Ok((net, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sine_pairs(n: usize) -> Vec<TrainingPair> {
        (0..n)
            .map(|i| {
                let z = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
                TrainingPair::new(vec![z], vec![0.8 * z.sin()]).unwrap()
            })
            .collect()
    }

    #[test]
    fn pair_validation() {
        assert!(TrainingPair::new(vec![0.0], vec![1.0]).is_err());
        assert!(TrainingPair::new(vec![f64::NAN], vec![0.0]).is_err());
        assert!(TrainingPair::new(vec![5.0], vec![-0.99]).is_ok());
    }

    #[test]
    fn config_validation() {
        assert!(TrainerConfig::default().validate().is_ok());
        let bad = TrainerConfig { beta: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = TrainerConfig { init_range: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn empty_set_rejected() {
        let net = MlpNetwork::zeros(1, 2, 1).unwrap();
        assert!(matches!(train(&net, &[], &TrainerConfig::default()), Err(Error::Input(_))));
    }

    #[test]
    fn huge_goal_stops_at_initial_check() {
        let net = MlpNetwork::seeded(1, 4, 1, 0.5, 1).unwrap();
        let cfg = TrainerConfig { error_goal: 1e300, ..Default::default() };
        let (trained, report) = train(&net, &sine_pairs(10), &cfg).unwrap();
        assert!(report.epochs_run <= 1);
        assert_eq!(report.trace.len(), report.epochs_run);
        assert_eq!(trained, net);
    }

    #[test]
    fn zero_error_fixed_point() {
        let net = MlpNetwork::seeded(1, 3, 1, 0.5, 5).unwrap();
        let pairs: Vec<_> = [-0.7, 0.1, 0.9]
            .iter()
            .map(|&z| TrainingPair::new(vec![z], net.predict(&[z]).unwrap()).unwrap())
            .collect();
        let cfg = TrainerConfig { error_goal: 0.0, max_epochs: 5, ..Default::default() };
        let (trained, report) = train(&net, &pairs, &cfg).unwrap();
        assert_eq!(trained, net);
        assert_eq!(report.final_cumulative_error, 0.0);
        assert_eq!(report.epochs_run, 0);
    }

    #[test]
    fn learns_scaled_sine() {
        let pairs = sine_pairs(50);
        let cfg = TrainerConfig {
            beta: 0.05,
            max_epochs: 10_000,
            error_goal: 1e-3,
            seed: 7,
            init_range: 0.5,
        };
        let net = MlpNetwork::seeded(1, 10, 1, cfg.init_range, cfg.seed).unwrap();
        let (_, report) = train(&net, &pairs, &cfg).unwrap();
        assert!(report.final_cumulative_error < 1e-2, "{report:?}");
        assert!(report.trace.iter().all(|e| *e >= 0.0));
    }
}
