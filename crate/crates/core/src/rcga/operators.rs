use rand::Rng;

use super::Chromosome;
use crate::{FcmError, Result};

/// Index drawn with probability proportional to fitness.
pub fn roulette<R: Rng + ?Sized>(fitness: &[f64], rng: &mut R) -> Result<usize> {
    if fitness.is_empty() {
        return Err(FcmError::EmptyPopulation);
    }
    let total: f64 = fitness.iter().sum();
    if !(total > 0.0) {
        return Ok(rng.gen_range(0..fitness.len()));
    }
    let target = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    for (i, f) in fitness.iter().enumerate() {
        acc += f;
        if acc > target {
            return Ok(i);
        }
    }
    // rounding left `target` past the last partial sum
    Ok(fitness.iter().rposition(|&f| f > 0.0).unwrap_or(fitness.len() - 1))
}

/// Fittest of `k` uniformly drawn indices (with replacement).
pub fn tournament<R: Rng + ?Sized>(fitness: &[f64], k: usize, rng: &mut R) -> Result<usize> {
    if fitness.is_empty() {
        return Err(FcmError::EmptyPopulation);
    }
    let mut best = rng.gen_range(0..fitness.len());
    for _ in 1..k {
        let c = rng.gen_range(0..fitness.len());
        if fitness[c] > fitness[best] {
            best = c;
        }
    }
    Ok(best)
}

/// Two parents, each picked by roulette or by tournament with equal odds.
pub fn select<R: Rng + ?Sized>(population: &[Chromosome], k: usize, rng: &mut R) -> Result<(usize, usize)> {
    let fitness: alloc::vec::Vec<f64> = population.iter().map(|c| c.fitness).collect();
    select_by_fitness(&fitness, k, rng)
}

pub(crate) fn select_by_fitness<R: Rng + ?Sized>(fitness: &[f64], k: usize, rng: &mut R) -> Result<(usize, usize)> {
    let one = |rng: &mut R| {
        if rng.gen::<bool>() {
            roulette(fitness, rng)
        } else {
            tournament(fitness, k, rng)
        }
    };
    let a = one(rng)?;
    let b = one(rng)?;
    Ok((a, b))
}

/// Swap the tails of `a` and `b` from gene `cut` on.
pub fn crossover_at(a: &mut [f64], b: &mut [f64], cut: usize) {
    let cut = cut.min(a.len());
    a[cut..].swap_with_slice(&mut b[cut..]);
}

/// One-point crossover with probability `p_recombination`, cut in `[1, len - 1]`.
pub fn crossover<R: Rng + ?Sized>(a: &mut [f64], b: &mut [f64], p_recombination: f64, rng: &mut R) {
    if a.len() < 2 || rng.gen::<f64>() >= p_recombination {
        return;
    }
    let cut = rng.gen_range(1..a.len());
    crossover_at(a, b, cut);
}

/// Non-uniform perturbation `y (1 - u^((1 - g / g_max)^b))`.
pub fn non_uniform_delta(generation: usize, g_max: usize, y: f64, u: f64, b: f64) -> f64 {
    let progress = if g_max == 0 { 1.0 } else { (generation as f64 / g_max as f64).min(1.0) };
    y * (1.0 - libm::pow(u, libm::pow(1.0 - progress, b)))
}

/// Mutate each gene with probability `p_mutation`, choosing uniform
/// resampling or non-uniform perturbation with equal odds.
pub fn mutate<R: Rng + ?Sized>(
    genes: &mut [f64],
    p_mutation: f64,
    generation: usize,
    g_max: usize,
    b: f64,
    rng: &mut R,
) {
    for g in genes.iter_mut() {
        if rng.gen::<f64>() >= p_mutation {
            continue;
        }
        if rng.gen::<bool>() {
            *g = rng.gen_range(-1.0..=1.0);
        } else {
            let u = rng.gen::<f64>();
            if rng.gen::<bool>() {
                *g += non_uniform_delta(generation, g_max, 1.0 - *g, u, b);
            } else {
                *g -= non_uniform_delta(generation, g_max, *g + 1.0, u, b);
            }
        }
        *g = g.clamp(-1.0, 1.0);
    }
}
