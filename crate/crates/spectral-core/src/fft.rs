//! Thin 3-D wrapper over rustfft with a process-wide plan cache.
//!
//! Conventions: `forward` maps physical samples to Fourier coefficients and
//! carries the `1/N^3` normalization; `inverse` maps coefficients back to
//! samples with no extra factor, so the two compose to the identity.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use once_cell::sync::Lazy;
use rustfft::{Fft, FftDirection, FftPlanner};

struct PlanPair {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

static PLANS: Lazy<Mutex<HashMap<usize, Arc<PlanPair>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

fn plans_for(n: usize) -> Arc<PlanPair> {
    let mut cache = PLANS.lock().unwrap();
    cache
        .entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            Arc::new(PlanPair {
                forward: planner.plan_fft(n, FftDirection::Forward),
                inverse: planner.plan_fft(n, FftDirection::Inverse),
            })
        })
        .clone()
}

fn transform_axes(n: usize, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
    assert_eq!(data.len(), n * n * n);
    let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];

    // Axis 3 lines are contiguous.
    for line in data.chunks_exact_mut(n) {
        plan.process_with_scratch(line, &mut scratch);
    }

    // Axes 1 and 2: gather a strided line, transform, scatter back.
    let mut line = vec![Complex64::default(); n];
    for i1 in 0..n {
        for i3 in 0..n {
            let base = i1 * n * n + i3;
            for i2 in 0..n {
                line[i2] = data[base + i2 * n];
            }
            plan.process_with_scratch(&mut line, &mut scratch);
            for i2 in 0..n {
                data[base + i2 * n] = line[i2];
            }
        }
    }
    for i2 in 0..n {
        for i3 in 0..n {
            let base = i2 * n + i3;
            for i1 in 0..n {
                line[i1] = data[base + i1 * n * n];
            }
            plan.process_with_scratch(&mut line, &mut scratch);
            for i1 in 0..n {
                data[base + i1 * n * n] = line[i1];
            }
        }
    }
}

/// Physical samples to Fourier coefficients, normalized by `1/N^3`.
pub fn forward(n: usize, data: &mut [Complex64]) {
    let plans = plans_for(n);
    transform_axes(n, data, &plans.forward);
    let scale = 1.0 / (n * n * n) as f64;
    for c in data.iter_mut() {
        *c *= scale;
    }
}

/// Fourier coefficients to physical samples.
pub fn inverse(n: usize, data: &mut [Complex64]) {
    let plans = plans_for(n);
    transform_axes(n, data, &plans.inverse);
}
