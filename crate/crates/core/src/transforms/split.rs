use serde::Serialize;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::code::CssCode;
use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVector};

/// One application of the generator splitting step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitStep {
    /// Index of the split X generator. Its row now holds the first chain generator.
    pub gen_index: usize,
    pub weight: usize,
    /// The generator's support in chain order `q_1, ..., q_w`.
    pub support: Vec<usize>,
    /// Qubits `(1), ..., (w-3)`.
    pub cut_qubits: Vec<usize>,
    /// Rows of the `w - 2` chain generators, in chain order.
    pub new_generators: Vec<usize>,
}

/// Record of one or more splitting steps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Default)]
pub struct SplitTrace {
    pub steps: Vec<SplitStep>,
    /// `z_matching[r]` is the row of the matching generator of original Z generator `r`.
    pub z_matching: Vec<usize>,
}

impl SplitTrace {
    /// Total number of qubits (equivalently X generators) added.
    pub fn delta(&self) -> usize {
        self.steps.iter().map(|s| s.weight - 3).sum()
    }
}

/// How the qubits of a generator are ordered along its chain.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QubitOrder {
    /// `q_1 < q_2 < ... < q_w` by qubit index.
    #[default]
    Ascending,
    /// Orders chosen jointly over all split generators to keep the heaviest
    /// resulting Z generators as light as possible.
    Clustered,
}

/// Largest generator weight for which [`QubitOrder::Clustered`] searches all orders.
pub const EXHAUSTIVE_ORDER_LIMIT: usize = 6;

const MAX_PLAN_PASSES: usize = 100;
const PLAN_PATIENCE: usize = 10;
const RANDOM_CANDIDATES: usize = 64;

fn check_split(code: &CssCode, gen_index: usize) -> Result<Vec<usize>> {
    code.ensure_valid()?;
    let n_x = code.x_gens().num_rows();
    if gen_index >= n_x {
        return Err(Error::InvalidParameter(format!(
            "X generator {gen_index} out of range ({n_x} generators)"
        )));
    }
    let q = code.x_gens().row(gen_index).support();
    if q.len() < 4 {
        return Err(Error::NothingToSplit {
            index: gen_index,
            weight: q.len(),
        });
    }
    Ok(q)
}

/// Replaces X generator `gen_index` by a chain of weight-3 generators through
/// `w - 3` new cut qubits, and extends each Z generator by the cut qubits needed
/// to keep commutation. The chain follows ascending qubit order.
pub fn split_one_generator(code: &CssCode, gen_index: usize) -> Result<(CssCode, SplitTrace)> {
    let q = check_split(code, gen_index)?;
    split_along(code, gen_index, q)
}

/// Like [`split_one_generator`], with the chain order chosen by `order`.
pub fn split_one_generator_with(code: &CssCode, gen_index: usize, order: QubitOrder) -> Result<(CssCode, SplitTrace)> {
    let q = check_split(code, gen_index)?;
    let q = match order {
        QubitOrder::Ascending => q,
        QubitOrder::Clustered => plan_orders(code, &[gen_index]).remove(0),
    };
    split_along(code, gen_index, q)
}

/// Cut qubits `m` (1-based) picked up by a Z generator whose overlap with the chain
/// is `hits`: those where the overlap with `q_1..q_{m+1}` is odd.
fn cut_count(hits: &[bool]) -> usize {
    let w = hits.len();
    let mut parity = hits[0];
    let mut cuts = 0;
    for &h in &hits[1..w - 2] {
        parity ^= h;
        cuts += parity as usize;
    }
    cuts
}

/// Row index and overlap positions within `q` of each Z generator meeting `q`.
fn touching(code: &CssCode, q: &[usize]) -> Vec<(usize, Vec<usize>)> {
    code.z_gens()
        .rows()
        .iter()
        .enumerate()
        .filter_map(|(r, row)| {
            let pos: Vec<usize> = (0..q.len()).filter(|&i| row.get(q[i])).collect();
            (!pos.is_empty()).then_some((r, pos))
        })
        .collect()
}

/// Cut counts per touching Z generator when the chain visits positions in `perm` order.
fn cuts_for(touch: &[(usize, Vec<usize>)], perm: &[usize]) -> Vec<usize> {
    let w = perm.len();
    let mut rank = vec![0; w];
    for (p, &i) in perm.iter().enumerate() {
        rank[i] = p;
    }
    touch
        .iter()
        .map(|(_, pos)| {
            let mut hits = vec![false; w];
            for &i in pos {
                hits[rank[i]] = true;
            }
            cut_count(&hits)
        })
        .collect()
}

/// Resulting weights of the touching Z generators, sorted in descending order.
fn profile(touch: &[(usize, Vec<usize>)], load: &[usize], cuts: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = touch.iter().zip(cuts).map(|((r, _), c)| load[*r] + c).collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// Candidate orders for one support: every permutation when small, otherwise
/// ascending, one that places overlaps of the heaviest Z generators together, and
/// a few random shuffles.
fn candidates(touch: &[(usize, Vec<usize>)], load: &[usize], w: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let mut perm: Vec<usize> = (0..w).collect();
    if w <= EXHAUSTIVE_ORDER_LIMIT {
        let mut all = vec![perm.clone()];
        while next_permutation(&mut perm) {
            all.push(perm.clone());
        }
        return all;
    }
    let mut by_weight: Vec<&(usize, Vec<usize>)> = touch.iter().collect();
    by_weight.sort_by_key(|(r, pos)| (std::cmp::Reverse(load[*r]), pos[0]));
    let mut placed = vec![false; w];
    let mut order = Vec::with_capacity(w);
    for (_, pos) in by_weight {
        for &i in pos {
            if !placed[i] {
                placed[i] = true;
                order.push(i);
            }
        }
    }
    order.extend((0..w).filter(|&i| !placed[i]));
    let mut out = vec![perm, order];
    for _ in 0..RANDOM_CANDIDATES {
        let mut p: Vec<usize> = (0..w).collect();
        p.shuffle(rng);
        out.push(p);
    }
    out
}

/// Chooses chain orders for the X generators `gens` jointly.
///
/// Each generator in turn takes an order whose touching Z generators end up with
/// the lexicographically smallest descending weight profile, given the cuts
/// contributed by all other generators. Ties are broken at random so the search
/// can move along plateaus; the best overall profile seen is returned. The first
/// pass starts from ascending order and the search is deterministic.
fn plan_orders(code: &CssCode, gens: &[usize]) -> Vec<Vec<usize>> {
    let supports: Vec<Vec<usize>> = gens.iter().map(|&g| code.x_gens().row(g).iter_ones().collect()).collect();
    let touches: Vec<Vec<(usize, Vec<usize>)>> = supports.iter().map(|q| touching(code, q)).collect();
    let mut load: Vec<usize> = code.z_gens().rows().iter().map(|r| r.weight()).collect();
    let mut state: Vec<(Vec<usize>, Vec<usize>)> = supports
        .iter()
        .zip(&touches)
        .map(|(q, touch)| {
            let p: Vec<usize> = (0..q.len()).collect();
            let c = cuts_for(touch, &p);
            (p, c)
        })
        .collect();
    for (touch, (_, cuts)) in touches.iter().zip(&state) {
        for ((r, _), c) in touch.iter().zip(cuts) {
            load[*r] += c;
        }
    }
    let global = |load: &[usize]| {
        let mut v = load.to_vec();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    };
    let mut best = (global(&load), state.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut stale = 0;

    for _ in 0..MAX_PLAN_PASSES {
        for (j, touch) in touches.iter().enumerate() {
            for ((r, _), c) in touch.iter().zip(&state[j].1) {
                load[*r] -= c;
            }
            let mut best_profile = profile(touch, &load, &state[j].1);
            let mut ties = vec![state[j].clone()];
            for p in candidates(touch, &load, supports[j].len(), &mut rng) {
                let c = cuts_for(touch, &p);
                let pr = profile(touch, &load, &c);
                match pr.cmp(&best_profile) {
                    std::cmp::Ordering::Less => {
                        best_profile = pr;
                        ties = vec![(p, c)];
                    }
                    std::cmp::Ordering::Equal => ties.push((p, c)),
                    std::cmp::Ordering::Greater => {}
                }
            }
            state[j] = ties.swap_remove(rng.random_range(0..ties.len()));
            for ((r, _), c) in touch.iter().zip(&state[j].1) {
                load[*r] += c;
            }
        }
        let g = global(&load);
        if g < best.0 {
            best = (g, state.clone());
            stale = 0;
        } else {
            stale += 1;
            if stale >= PLAN_PATIENCE {
                break;
            }
        }
    }
    best.1
        .into_iter()
        .zip(&supports)
        .map(|((p, _), q)| p.into_iter().map(|i| q[i]).collect())
        .collect()
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("suffix has a larger element");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn split_along(code: &CssCode, gen_index: usize, q: Vec<usize>) -> Result<(CssCode, SplitTrace)> {
    let w = q.len();
    let n = code.n();
    let cuts = w - 3;
    let new_n = n + cuts;
    let cut = |m: usize| n + m - 1;

    let chain: Vec<Vec<usize>> = (1..=w - 2)
        .map(|j| {
            let mut s = if j == 1 {
                vec![q[0], q[1], cut(1)]
            } else if j == w - 2 {
                vec![cut(w - 3), q[w - 2], q[w - 1]]
            } else {
                vec![cut(j - 1), q[j], cut(j)]
            };
            s.sort_unstable();
            s
        })
        .collect();

    let mut x_rows: Vec<BitVector> = code.x_gens().rows().iter().map(|r| r.resized(new_n)).collect();
    x_rows[gen_index] = BitVector::from_support(new_n, &chain[0]);
    let mut new_generators = vec![gen_index];
    for s in &chain[1..] {
        new_generators.push(x_rows.len());
        x_rows.push(BitVector::from_support(new_n, s));
    }

    let z_rows: Vec<BitVector> = code
        .z_gens()
        .rows()
        .iter()
        .map(|r| {
            let mut out = r.resized(new_n);
            let mut parity = r.get(q[0]);
            for (m, &qm) in q.iter().enumerate().take(cuts + 1).skip(1) {
                parity ^= r.get(qm);
                if parity {
                    out.set(cut(m));
                }
            }
            out
        })
        .collect();

    let mut out = CssCode::new(BitMatrix::from_rows(new_n, x_rows)?, BitMatrix::from_rows(new_n, z_rows)?)?;
    if let Some(labels) = code.labels() {
        let mut l = labels.clone();
        let base = labels.x[gen_index].clone();
        l.qubits.extend((1..=cuts).map(|m| format!("{base}:({m})")));
        l.x[gen_index] = format!("{base}.1");
        l.x.extend((2..=w - 2).map(|j| format!("{base}.{j}")));
        out = out.with_labels(l)?;
    }
    let trace = SplitTrace {
        steps: vec![SplitStep {
            gen_index,
            weight: w,
            support: q,
            cut_qubits: (1..=cuts).map(cut).collect(),
            new_generators,
        }],
        z_matching: (0..code.z_gens().num_rows()).collect(),
    };
    Ok((out, trace))
}

/// Splits every X generator of weight at least 4, in ascending index order, with
/// [`QubitOrder::Clustered`] chains.
pub fn split_all_x_generators(code: &CssCode) -> Result<(CssCode, SplitTrace)> {
    split_all_x_generators_with(code, QubitOrder::default())
}

pub fn split_all_x_generators_with(code: &CssCode, order: QubitOrder) -> Result<(CssCode, SplitTrace)> {
    code.ensure_valid()?;
    let heavy: Vec<usize> = (0..code.x_gens().num_rows())
        .filter(|&i| code.x_gens().row(i).weight() >= 4)
        .collect();
    let orders = match order {
        QubitOrder::Ascending => heavy.iter().map(|&i| code.x_gens().row(i).iter_ones().collect()).collect(),
        QubitOrder::Clustered => plan_orders(code, &heavy),
    };
    let mut current = code.clone();
    let mut trace = SplitTrace {
        steps: Vec::new(),
        z_matching: (0..code.z_gens().num_rows()).collect(),
    };
    for (i, q) in heavy.into_iter().zip(orders) {
        let (next, t) = split_along(&current, i, q)?;
        trace.steps.extend(t.steps);
        current = next;
    }
    Ok((current, trace))
}
