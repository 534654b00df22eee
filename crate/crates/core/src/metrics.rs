//! RMS error and SNR between a clean reference and a prediction, and
//! dataset-level averaging against the 0.3 mV / 8 dB acceptance limits.

use alloc::vec::Vec;

// Unused when std is linked, whose inherent float methods take precedence.
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result, Signal};

pub const RMS_LIMIT_MV: f64 = 0.3;
pub const SNR_THRESHOLD_DB: f64 = 8.0;

/// Value returned by [`snr_db`] when the prediction matches exactly.
pub const SNR_EXACT: f64 = f64::INFINITY;

/// Root mean square of `pred - clean`, averaged over exactly N samples.
pub fn rms(clean: &Signal, pred: &Signal) -> Result<f64> {
    clean.check_compatible(pred)?;
    Ok((squared_error(clean, pred) / clean.len() as f64).sqrt())
}

/// `10 log10(Σ clean² / Σ (pred − clean)²)`; [`SNR_EXACT`] for an exact match.
pub fn snr_db(clean: &Signal, pred: &Signal) -> Result<f64> {
    clean.check_compatible(pred)?;
    let signal_power = clean.power();
    if signal_power == 0.0 {
        return Err(Error::ZeroPower("clean signal"));
    }
    let err = squared_error(clean, pred);
    if err == 0.0 {
        return Ok(SNR_EXACT);
    }
    Ok(10.0 * (signal_power / err).log10())
}

fn squared_error(clean: &Signal, pred: &Signal) -> f64 {
    clean
        .samples()
        .iter()
        .zip(pred.samples())
        .map(|(c, p)| (p - c) * (p - c))
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalMetrics {
    pub rms_mv: f64,
    pub snr_db: f64,
}

impl SignalMetrics {
    pub fn measure(clean: &Signal, pred: &Signal) -> Result<Self> {
        Ok(Self {
            rms_mv: rms(clean, pred)?,
            snr_db: snr_db(clean, pred)?,
        })
    }

    pub fn passes(&self, rms_limit_mv: f64, snr_threshold_db: f64) -> bool {
        self.rms_mv <= rms_limit_mv && self.snr_db >= snr_threshold_db
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub per_signal: Vec<SignalMetrics>,
    pub avg_rms_mv: f64,
    /// Mean over finite SNRs; exact matches are left out. NaN when every
    /// pair matched exactly.
    pub avg_snr_db: f64,
    pub rms_limit_mv: f64,
    pub snr_threshold_db: f64,
    pub pass_fraction: f64,
}

impl EvalReport {
    pub fn from_metrics(per_signal: Vec<SignalMetrics>) -> Result<Self> {
        Self::with_limits(per_signal, RMS_LIMIT_MV, SNR_THRESHOLD_DB)
    }

    pub fn with_limits(
        per_signal: Vec<SignalMetrics>,
        rms_limit_mv: f64,
        snr_threshold_db: f64,
    ) -> Result<Self> {
        if per_signal.is_empty() {
            return Err(Error::Empty("evaluation pairs"));
        }
        let n = per_signal.len() as f64;
        let avg_rms_mv = per_signal.iter().map(|m| m.rms_mv).sum::<f64>() / n;
        let finite: Vec<f64> = per_signal
            .iter()
            .map(|m| m.snr_db)
            .filter(|s| s.is_finite())
            .collect();
        let avg_snr_db = if finite.is_empty() {
            f64::NAN
        } else {
            finite.iter().sum::<f64>() / finite.len() as f64
        };
        let passing = per_signal
            .iter()
            .filter(|m| m.passes(rms_limit_mv, snr_threshold_db))
            .count();
        Ok(Self {
            avg_rms_mv,
            avg_snr_db,
            rms_limit_mv,
            snr_threshold_db,
            pass_fraction: passing as f64 / n,
            per_signal,
        })
    }
}

/// Per-pair metrics plus averages, with the default limits.
pub fn evaluate_dataset<'a, I>(pairs: I) -> Result<EvalReport>
where
    I: IntoIterator<Item = (&'a Signal, &'a Signal)>,
{
    let per_signal = pairs
        .into_iter()
        .map(|(clean, pred)| SignalMetrics::measure(clean, pred))
        .collect::<Result<Vec<_>>>()?;
    EvalReport::from_metrics(per_signal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(v: &[f64]) -> Signal {
        Signal::new(v.to_vec(), 360).unwrap()
    }

    #[test]
    fn rms_examples() {
        let c = sig(&[1.0, 2.0, 3.0]);
        assert_eq!(rms(&c, &c).unwrap(), 0.0);
        assert_eq!(rms(&sig(&[0.0; 4]), &sig(&[1.0; 4])).unwrap(), 1.0);
        let r = rms(&c, &sig(&[2.0, 2.0, 2.0])).unwrap();
        assert!((r - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((r - 0.8165).abs() < 1e-4);
    }

    #[test]
    fn rms_rejects_mismatch() {
        assert!(matches!(
            rms(&sig(&[1.0, 2.0]), &sig(&[1.0])),
            Err(Error::LengthMismatch { .. })
        ));
        let other_rate = Signal::new(alloc::vec![1.0, 2.0], 250).unwrap();
        assert_eq!(
            rms(&sig(&[1.0, 2.0]), &other_rate),
            Err(Error::RateMismatch(360, 250))
        );
    }

    #[test]
    fn snr_examples() {
        let c = sig(&[1.0, -2.0, 0.5]);
        assert!(snr_db(&c, &sig(&[0.0; 3])).unwrap().abs() < 1e-12);
        let ones = sig(&[1.0; 4]);
        let s = snr_db(&ones, &sig(&[1.1; 4])).unwrap();
        assert!((s - 20.0).abs() < 1e-9);
        assert_eq!(snr_db(&ones, &ones).unwrap(), SNR_EXACT);
        assert_eq!(
            snr_db(&sig(&[0.0; 4]), &ones),
            Err(Error::ZeroPower("clean signal"))
        );
    }

    #[test]
    fn snr_and_rms_are_linked() {
        let c = sig(&[0.3, -1.0, 2.5, 0.1, 0.0]);
        let p = sig(&[0.1, -0.7, 2.9, 0.0, 0.2]);
        let r = rms(&c, &p).unwrap();
        let s = snr_db(&c, &p).unwrap();
        let linked = 10.0 * (c.power() / (c.len() as f64 * r * r)).log10();
        assert!((s - linked).abs() < 1e-12);
    }

    #[test]
    fn report_averages() {
        let r = evaluate_dataset([(&sig(&[1.0, 2.0]), &sig(&[1.0, 2.0]))]).unwrap();
        assert_eq!(r.avg_rms_mv, 0.0);
        assert_eq!(r.pass_fraction, 1.0);
        assert!(r.avg_snr_db.is_nan());

        let r = EvalReport::from_metrics(alloc::vec![
            SignalMetrics { rms_mv: 0.2, snr_db: 10.0 },
            SignalMetrics { rms_mv: 0.4, snr_db: 6.0 },
        ])
        .unwrap();
        assert!((r.avg_rms_mv - 0.3).abs() < 1e-15);
        assert_eq!(r.avg_snr_db, 8.0);
        assert_eq!(r.pass_fraction, 0.5);

        assert_eq!(
            EvalReport::from_metrics(alloc::vec![]),
            Err(Error::Empty("evaluation pairs"))
        );
    }

    #[test]
    fn exact_matches_are_excluded_from_snr_average() {
        let r = EvalReport::from_metrics(alloc::vec![
            SignalMetrics { rms_mv: 0.0, snr_db: SNR_EXACT },
            SignalMetrics { rms_mv: 0.1, snr_db: 12.0 },
        ])
        .unwrap();
        assert_eq!(r.avg_snr_db, 12.0);
        assert_eq!(r.pass_fraction, 1.0);
    }
}
