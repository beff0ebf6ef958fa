use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::operators::{crossover, mutate, select_by_fitness};
use super::{fitness_of, Chromosome, GaType, LongitudinalData, RcgaConfig};
use crate::sim::Dynamics;
use crate::{FcmError, Result, WeightMatrix};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RcgaOutcome {
    /// Best matrix seen during the whole run.
    pub solution: WeightMatrix,
    pub fitness: f64,
    /// Generations evaluated, the initial population being generation 1.
    /// For the steady-state variant each pair of offspring is one generation.
    pub generations: usize,
    /// Best-ever fitness after each generation.
    pub history: Vec<f64>,
}

/// Evolve a random initial population.
pub fn run(data: &LongitudinalData, cfg: &RcgaConfig, seed: u64) -> Result<RcgaOutcome> {
    run_with_population(data, cfg, seed, &[])
}

/// Like [`run`], with `planted` matrices taking the first population slots.
pub fn run_with_population(
    data: &LongitudinalData,
    cfg: &RcgaConfig,
    seed: u64,
    planted: &[WeightMatrix],
) -> Result<RcgaOutcome> {
    cfg.validate()?;
    let n = data.n_concepts();
    if planted.len() > cfg.population_size {
        return Err(FcmError::InvalidConfig("more planted matrices than population slots".into()));
    }
    if let Some(w) = planted.iter().find(|w| w.len() != n) {
        return Err(FcmError::DimensionMismatch { expected: n, actual: w.len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut population: Vec<Chromosome> = planted
        .iter()
        .map(|w| Chromosome::new(w.as_slice().iter().map(|g| g.clamp(-1.0, 1.0)).collect()))
        .collect();
    while population.len() < cfg.population_size {
        population.push(Chromosome::new((0..n * n).map(|_| rng.gen_range(-1.0..=1.0)).collect()));
    }

    let mut ga = Ga { data, cfg, dynamics: cfg.dynamics(), p_mutation: cfg.p_mutation_for(n), rng };
    for c in &mut population {
        ga.evaluate(c);
    }
    let mut best = population[fittest(&population)].clone();
    let mut history = alloc::vec![best.fitness];
    let mut generation = 1;
    while best.fitness < cfg.threshold && generation < cfg.n_iterations {
        generation += 1;
        match cfg.ga_type {
            GaType::Generational => population = ga.next_generation(&population, generation)?,
            GaType::Ssga => ga.steady_state_step(&mut population, generation)?,
        }
        let i = fittest(&population);
        if population[i].fitness > best.fitness {
            best = population[i].clone();
        }
        history.push(best.fitness);
    }

    Ok(RcgaOutcome {
        solution: WeightMatrix::from_flat(data.concepts().to_vec(), best.genes)?,
        fitness: best.fitness,
        generations: generation,
        history,
    })
}

struct Ga<'a> {
    data: &'a LongitudinalData,
    cfg: &'a RcgaConfig,
    dynamics: Dynamics,
    p_mutation: f64,
    rng: ChaCha8Rng,
}

impl Ga<'_> {
    fn evaluate(&self, c: &mut Chromosome) {
        c.fitness = fitness_of(&c.genes, self.data, self.cfg, &self.dynamics);
    }

    fn offspring(&mut self, population: &[Chromosome], fitness: &[f64], generation: usize) -> Result<[Chromosome; 2]> {
        let (i, j) = select_by_fitness(fitness, self.cfg.tournament_size, &mut self.rng)?;
        let mut a = population[i].genes.clone();
        let mut b = population[j].genes.clone();
        crossover(&mut a, &mut b, self.cfg.p_recombination, &mut self.rng);
        for genes in [&mut a, &mut b] {
            mutate(genes, self.p_mutation, generation, self.cfg.n_iterations, self.cfg.mutation_b, &mut self.rng);
        }
        let mut out = [Chromosome::new(a), Chromosome::new(b)];
        for c in &mut out {
            self.evaluate(c);
        }
        Ok(out)
    }

    /// Full replacement, keeping the previous generation's best member.
    fn next_generation(&mut self, population: &[Chromosome], generation: usize) -> Result<Vec<Chromosome>> {
        let fitness: Vec<f64> = population.iter().map(|c| c.fitness).collect();
        let mut next = Vec::with_capacity(population.len());
        next.push(population[fittest(population)].clone());
        while next.len() < population.len() {
            for child in self.offspring(population, &fitness, generation)? {
                if next.len() < population.len() {
                    next.push(child);
                }
            }
        }
        Ok(next)
    }

    fn steady_state_step(&mut self, population: &mut [Chromosome], generation: usize) -> Result<()> {
        let fitness: Vec<f64> = population.iter().map(|c| c.fitness).collect();
        for child in self.offspring(population, &fitness, generation)? {
            if let Some(slot) = useful_diversity_slot(population, &child) {
                population[slot] = child;
            }
        }
        Ok(())
    }
}

fn fittest(population: &[Chromosome]) -> usize {
    let mut best = 0;
    for (i, c) in population.iter().enumerate() {
        if c.fitness > population[best].fitness {
            best = i;
        }
    }
    best
}

fn gene_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| libm::fabs(x - y)).sum::<f64>() / a.len().max(1) as f64
}

/// Slot the offspring should take, if any. It replaces the worst member when
/// it is fitter, or when it is at least as fit as the median member and
/// further (on average) from the population than the worst member is.
pub(crate) fn useful_diversity_slot(population: &[Chromosome], child: &Chromosome) -> Option<usize> {
    let worst = (0..population.len()).min_by(|&a, &b| population[a].fitness.total_cmp(&population[b].fitness))?;
    if child.fitness > population[worst].fitness {
        return Some(worst);
    }
    let mut sorted: Vec<f64> = population.iter().map(|c| c.fitness).collect();
    sorted.sort_by(f64::total_cmp);
    if child.fitness < sorted[sorted.len() / 2] {
        return None;
    }
    let mean_distance = |genes: &[f64], skip: Option<usize>| {
        let others = population.iter().enumerate().filter(|(i, _)| Some(*i) != skip);
        let (sum, count) = others.fold((0.0, 0usize), |(s, k), (_, c)| (s + gene_distance(genes, &c.genes), k + 1));
        if count == 0 {
            0.0
        } else {
            sum / count as f64
        }
    };
    let child_div = mean_distance(&child.genes, None);
    let worst_div = mean_distance(&population[worst].genes, Some(worst));
    (child_div > worst_div).then_some(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn diversity_rule() {
        let pop = vec![
            Chromosome { genes: vec![0.0, 0.0], fitness: 0.5 },
            Chromosome { genes: vec![0.1, 0.0], fitness: 0.5 },
            Chromosome { genes: vec![0.0, 0.1], fitness: 0.5 },
        ];
        let fitter = Chromosome { genes: vec![0.0, 0.0], fitness: 0.6 };
        assert!(useful_diversity_slot(&pop, &fitter).is_some());
        let far = Chromosome { genes: vec![1.0, -1.0], fitness: 0.5 };
        assert!(useful_diversity_slot(&pop, &far).is_some());
        let near = Chromosome { genes: vec![0.02, 0.02], fitness: 0.5 };
        assert!(useful_diversity_slot(&pop, &near).is_none());
        let weak = Chromosome { genes: vec![1.0, -1.0], fitness: 0.1 };
        assert!(useful_diversity_slot(&pop, &weak).is_none());
    }
}
