//! Choice of the copy index kept for each Z generator when thickening.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::code::CssCode;
use crate::error::{Error, Result};

/// Copy index `choice[r] ∈ 1..=l` for every Z generator `r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub l: usize,
    pub choice: Vec<usize>,
}

impl Assignment {
    pub fn new(l: usize, choice: Vec<usize>) -> Result<Self> {
        let a = Self { l, choice };
        a.check(a.choice.len())?;
        Ok(a)
    }

    /// Every generator at copy `k`.
    pub fn constant(n_z: usize, l: usize, k: usize) -> Result<Self> {
        Self::new(l, vec![k; n_z])
    }

    /// Checks the copy count, the range of every entry and the generator count.
    pub fn check(&self, n_z: usize) -> Result<()> {
        if self.l < 2 {
            return Err(Error::InvalidParameter(format!("copy count l must be at least 2, got {}", self.l)));
        }
        if self.choice.len() != n_z {
            return Err(Error::DimensionMismatch(format!(
                "assignment covers {} Z generators, code has {n_z}",
                self.choice.len()
            )));
        }
        if let Some((r, &k)) = self.choice.iter().enumerate().find(|(_, &k)| k == 0 || k > self.l) {
            return Err(Error::InvalidParameter(format!(
                "Z generator {r} assigned copy {k}, outside 1..={}",
                self.l
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssignmentMethod {
    RandomLll,
    Greedy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssignmentOutcome {
    pub assignment: Assignment,
    /// Largest number of kept Z generators on one qubit copy `(q, k)`.
    pub max_copied_load: usize,
    pub resample_rounds: usize,
    pub method: AssignmentMethod,
    /// Load bound aimed for: `w` for resampling, `ceil(q_Z / l)` for greedy.
    pub target: usize,
    pub target_met: bool,
}

/// Uniform independent copy indices from a seeded ChaCha8 stream.
pub fn random_assignment(n_z: usize, l: usize, seed: u64) -> Result<Assignment> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_with(&mut rng, n_z, l)
}

fn random_with(rng: &mut ChaCha8Rng, n_z: usize, l: usize) -> Result<Assignment> {
    if l < 2 {
        return Err(Error::InvalidParameter(format!("copy count l must be at least 2, got {l}")));
    }
    Ok(Assignment {
        l,
        choice: (0..n_z).map(|_| rng.random_range(1..=l)).collect(),
    })
}

/// `loads[q][k-1]`: Z generators on qubit `q` assigned copy `k`.
pub fn copied_loads(code: &CssCode, a: &Assignment) -> Result<Vec<Vec<usize>>> {
    a.check(code.z_gens().num_rows())?;
    let mut loads = vec![vec![0; a.l]; code.n()];
    for (row, &k) in code.z_gens().rows().iter().zip(&a.choice) {
        for q in row.iter_ones() {
            loads[q][k - 1] += 1;
        }
    }
    Ok(loads)
}

pub fn max_copied_load(code: &CssCode, a: &Assignment) -> Result<usize> {
    Ok(copied_loads(code, a)?.iter().flatten().copied().max().unwrap_or(0))
}

/// Resamples bad events until every qubit copy carries at most `w` kept Z generators.
///
/// A bad event is a pair `(q, k)` with load above `w`. Each round resamples every
/// Z generator on the first bad qubit in `(q, k)` order. When `max_rounds` runs
/// out, the best assignment seen is returned with `target_met = false`.
pub fn lll_resample(code: &CssCode, l: usize, w: usize, seed: u64, max_rounds: usize) -> Result<AssignmentOutcome> {
    code.ensure_valid()?;
    if w == 0 {
        return Err(Error::InvalidParameter("load bound w must be at least 1".into()));
    }
    let n_z = code.z_gens().num_rows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = random_with(&mut rng, n_z, l)?;
    let mut loads = copied_loads(code, &current)?;
    let incident: Vec<Vec<usize>> = code.z_gens().transpose().row_supports();
    let supports = code.z_gens().row_supports();
    let max_of = |loads: &[Vec<usize>]| loads.iter().flatten().copied().max().unwrap_or(0);

    let mut best = (max_of(&loads), current.clone());
    let mut rounds = 0;
    loop {
        let bad = loads.iter().position(|row| row.iter().any(|&c| c > w));
        let Some(q) = bad else { break };
        if rounds == max_rounds {
            break;
        }
        rounds += 1;
        for &r in &incident[q] {
            let old = current.choice[r];
            let new = rng.random_range(1..=l);
            if old != new {
                for &p in &supports[r] {
                    loads[p][old - 1] -= 1;
                    loads[p][new - 1] += 1;
                }
                current.choice[r] = new;
            }
        }
        let m = max_of(&loads);
        if m < best.0 {
            best = (m, current.clone());
        }
    }
    let (max_copied_load, assignment) = if max_of(&loads) <= w { (max_of(&loads), current) } else { best };
    Ok(AssignmentOutcome {
        assignment,
        max_copied_load,
        resample_rounds: rounds,
        method: AssignmentMethod::RandomLll,
        target: w,
        target_met: max_copied_load <= w,
    })
}

/// Deterministic assignment: each Z generator, in index order, takes the copy
/// minimizing the current largest load over its qubits (smallest copy on ties).
pub fn greedy_assignment(code: &CssCode, l: usize) -> Result<AssignmentOutcome> {
    code.ensure_valid()?;
    if l < 2 {
        return Err(Error::InvalidParameter(format!("copy count l must be at least 2, got {l}")));
    }
    let mut loads = vec![vec![0usize; l]; code.n()];
    let mut choice = Vec::with_capacity(code.z_gens().num_rows());
    for row in code.z_gens().rows() {
        let support = row.support();
        let k = (0..l)
            .min_by_key(|&k| (support.iter().map(|&q| loads[q][k]).max().unwrap_or(0), k))
            .expect("l >= 2");
        for &q in &support {
            loads[q][k] += 1;
        }
        choice.push(k + 1);
    }
    let q_z = code.z_gens().col_weights().into_iter().max().unwrap_or(0);
    let target = q_z.div_ceil(l);
    let max_copied_load = loads.iter().flatten().copied().max().unwrap_or(0);
    Ok(AssignmentOutcome {
        assignment: Assignment { l, choice },
        max_copied_load,
        resample_rounds: 0,
        method: AssignmentMethod::Greedy,
        target,
        target_met: max_copied_load <= target,
    })
}

/// The default resampling budget, `100·n_Z`.
pub fn default_max_rounds(code: &CssCode) -> usize {
    100 * code.z_gens().num_rows()
}
