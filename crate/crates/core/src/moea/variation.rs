//! Reproduction operators.
//!
//! Continuous dims use simulated binary crossover and polynomial mutation
//! (Deb & Agrawal); integer dims use uniform crossover and random-reset
//! mutation. Offspring are always clipped back into the schema bounds.

use rand::Rng;

use super::MoeaConfig;
use crate::problem::{Candidate, DecisionSchema, DimKind};

const EPS: f64 = 1e-14;

fn sbx_pair<R: Rng + ?Sized>(
    x1: f64,
    x2: f64,
    low: f64,
    high: f64,
    eta: f64,
    rng: &mut R,
) -> (f64, f64) {
    if (x1 - x2).abs() < EPS || high - low < EPS {
        return (x1, x2);
    }
    let (y1, y2) = if x1 < x2 { (x1, x2) } else { (x2, x1) };
    let u: f64 = rng.random();

    let spread = |beta: f64| -> f64 {
        let alpha = 2.0 - beta.powf(-(eta + 1.0));
        if u <= 1.0 / alpha {
            (u * alpha).powf(1.0 / (eta + 1.0))
        } else {
            (1.0 / (2.0 - u * alpha)).powf(1.0 / (eta + 1.0))
        }
    };

    let beta_low = 1.0 + 2.0 * (y1 - low) / (y2 - y1);
    let c1 = 0.5 * ((y1 + y2) - spread(beta_low) * (y2 - y1));
    let beta_high = 1.0 + 2.0 * (high - y2) / (y2 - y1);
    let c2 = 0.5 * ((y1 + y2) + spread(beta_high) * (y2 - y1));

    let (c1, c2) = (c1.clamp(low, high), c2.clamp(low, high));
    if rng.random_bool(0.5) {
        (c2, c1)
    } else {
        (c1, c2)
    }
}

fn polynomial<R: Rng + ?Sized>(x: f64, low: f64, high: f64, eta: f64, rng: &mut R) -> f64 {
    let span = high - low;
    if span < EPS {
        return x;
    }
    let d1 = (x - low) / span;
    let d2 = (high - x) / span;
    let u: f64 = rng.random();
    let power = 1.0 / (eta + 1.0);
    let dq = if u < 0.5 {
        let v = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1).powf(eta + 1.0);
        v.powf(power) - 1.0
    } else {
        let v = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2).powf(eta + 1.0);
        1.0 - v.powf(power)
    };
    (x + dq * span).clamp(low, high)
}

/// Two offspring from two parents.
pub fn crossover_and_mutate<R: Rng + ?Sized>(
    a: &[f64],
    b: &[f64],
    schema: &DecisionSchema,
    config: &MoeaConfig,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    let mut c1 = a.to_vec();
    let mut c2 = b.to_vec();
    if rng.random_bool(config.crossover_prob) {
        for (i, d) in schema.dims().iter().enumerate() {
            if !rng.random_bool(0.5) {
                continue;
            }
            match d.kind {
                DimKind::Continuous => {
                    let (x, y) = sbx_pair(a[i], b[i], d.low, d.high, config.crossover_eta, rng);
                    c1[i] = x;
                    c2[i] = y;
                }
                DimKind::Integer => {
                    c1[i] = b[i];
                    c2[i] = a[i];
                }
            }
        }
    }
    let pm = config.mutation_prob(schema.len());
    for child in [&mut c1, &mut c2] {
        for (i, d) in schema.dims().iter().enumerate() {
            if pm > 0.0 && rng.random_bool(pm) {
                child[i] = match d.kind {
                    DimKind::Continuous => {
                        polynomial(child[i], d.low, d.high, config.mutation_eta, rng)
                    }
                    DimKind::Integer => d.sample(rng),
                };
            }
        }
        schema.repair(child);
    }
    (c1, c2)
}

/// Offspring for consecutive parent pairs; an odd last parent mates with the first.
pub fn variation<R: Rng + ?Sized>(
    parents: &[Candidate],
    schema: &DecisionSchema,
    config: &MoeaConfig,
    rng: &mut R,
) -> Vec<Candidate> {
    let mut out = Vec::with_capacity(parents.len());
    let mut i = 0;
    while out.len() < parents.len() {
        let a = &parents[i % parents.len()];
        let b = &parents[(i + 1) % parents.len()];
        let (c1, c2) = crossover_and_mutate(&a.decisions, &b.decisions, schema, config, rng);
        out.push(Candidate::new(c1));
        if out.len() < parents.len() {
            out.push(Candidate::new(c2));
        }
        i += 2;
    }
    out
}
