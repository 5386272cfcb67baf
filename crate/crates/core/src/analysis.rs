//! Small numerical helpers shared by the validation code: compensated sums
//! and exponential decay-rate fits.

use crate::error::{invalid, Result};
use crate::C64;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

pub fn neumaier_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = NeumaierSum::new();
    values.into_iter().for_each(|x| acc.add(x));
    acc.value()
}

/// Compensated sum of complex values, componentwise.
pub fn neumaier_sum_complex<I: IntoIterator<Item = C64>>(values: I) -> C64 {
    let (mut re, mut im) = (NeumaierSum::new(), NeumaierSum::new());
    for z in values {
        re.add(z.re);
        im.add(z.im);
    }
    C64::new(re.value(), im.value())
}

/// Least-squares fit of `ln y = ln A - rate t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub rate: f64,
    pub amplitude: f64,
    /// Largest `|ln y - fit|` over the samples.
    pub max_log_residual: f64,
}

pub fn fit_decay_rate(times: &[f64], values: &[f64]) -> Result<DecayFit> {
    if times.len() != values.len() {
        return Err(invalid("values", "times and values differ in length"));
    }
    if times.len() < 2 {
        return Err(invalid("times", "need at least two samples"));
    }
    if let Some(y) = values.iter().find(|y| !(**y > 0.0)) {
        return Err(invalid(
            "values",
            format!("logarithmic fit needs positive values, got {y}"),
        ));
    }
    let n = times.len() as f64;
    let logs: Vec<f64> = values.iter().map(|y| y.ln()).collect();
    let t_mean = times.iter().sum::<f64>() / n;
    let l_mean = logs.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (t, l) in times.iter().zip(&logs) {
        sxx += (t - t_mean) * (t - t_mean);
        sxy += (t - t_mean) * (l - l_mean);
    }
    if sxx == 0.0 {
        return Err(invalid("times", "all sample times coincide"));
    }
    let slope = sxy / sxx;
    let intercept = l_mean - slope * t_mean;
    let max_log_residual = times
        .iter()
        .zip(&logs)
        .map(|(t, l)| (l - intercept - slope * t).abs())
        .fold(0.0, f64::max);
    Ok(DecayFit {
        rate: -slope,
        amplitude: intercept.exp(),
        max_log_residual,
    })
}

/// `|a - b| / |b|`, or `|a|` when `b` is zero.
pub fn relative_error(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

/// `n` points evenly spaced on `[start, end]`, both included.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n)
            .map(|i| start + (end - start) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}
