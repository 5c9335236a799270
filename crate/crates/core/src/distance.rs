//! Exact minimum-distance search and brute-force soundness estimates.
//!
//! Distances are found by increasing-weight search. Within a weight the
//! returned witness is always the first qualifying support in colexicographic
//! order, whichever search strategy found it.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::code::CssCode;
use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVector, RowSpace};

/// Largest kernel dimension the soundness estimators will enumerate.
pub const KERNEL_BUDGET: usize = 20;

/// Default weight cap for soundness estimates.
pub const DEFAULT_SOUNDNESS_CAP: usize = 4;

/// Above this many supports per weight the search switches to meet-in-the-middle.
const DIRECT_SEARCH_LIMIT: u128 = 4_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    X,
    Z,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::X => Side::Z,
            Side::Z => Side::X,
        }
    }
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" | "X" => Ok(Side::X),
            "z" | "Z" => Ok(Side::Z),
            _ => Err(Error::InvalidParameter(format!("side must be x or z, got {s:?}"))),
        }
    }
}

/// Result of a minimum-weight logical search.
///
/// When `exact` is false, `value` is `cap + 1`: no logical of weight `<= cap` exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceResult {
    pub value: usize,
    pub exact: bool,
    pub cap: usize,
    pub witness: Option<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchStrategy {
    /// Direct enumeration for small weight classes, meet-in-the-middle otherwise.
    Auto,
    /// Enumerate every support of each weight in colex order.
    Exhaustive,
    /// Match syndromes of low and high halves of each support.
    MeetInTheMiddle,
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// Visits every `w`-subset of `0..n` in colex order with the XOR of the
/// corresponding `columns`. Supports are passed in descending order.
/// Stops early when `visit` returns false.
fn for_each_colex<F>(n: usize, w: usize, columns: &[BitVector], zero: &BitVector, visit: &mut F) -> bool
where
    F: FnMut(&[usize], &BitVector) -> bool,
{
    fn rec<F>(
        remaining: usize,
        upper: usize,
        columns: &[BitVector],
        chosen: &mut Vec<usize>,
        partial: &mut Vec<BitVector>,
        visit: &mut F,
    ) -> bool
    where
        F: FnMut(&[usize], &BitVector) -> bool,
    {
        if remaining == 0 {
            return visit(chosen, partial.last().expect("non-empty"));
        }
        for c in (remaining - 1)..upper {
            let mut next = partial.last().expect("non-empty").clone();
            next.xor_assign(&columns[c]);
            partial.push(next);
            chosen.push(c);
            let go_on = rec(remaining - 1, c, columns, chosen, partial, visit);
            chosen.pop();
            partial.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
    if w > n {
        return true;
    }
    let mut chosen = Vec::with_capacity(w);
    let mut partial = vec![zero.clone()];
    rec(w, n, columns, &mut chosen, &mut partial, visit)
}

/// Orders two descending supports of equal length by colex order.
fn colex_cmp(a: &[usize], b: &[usize]) -> Ordering {
    a.cmp(b)
}

struct LogicalSearch<'a> {
    n: usize,
    columns: Vec<BitVector>,
    zero: BitVector,
    stabilizers: &'a RowSpace,
}

impl LogicalSearch<'_> {
    fn qualifies(&self, desc: &[usize]) -> bool {
        let mut v = BitVector::zeros(self.n);
        for &i in desc {
            v.set(i);
        }
        !self.stabilizers.contains(&v)
    }

    fn exhaustive(&self, w: usize) -> Option<Vec<usize>> {
        let mut found = None;
        for_each_colex(self.n, w, &self.columns, &self.zero, &mut |desc, syn| {
            if syn.is_zero() && self.qualifies(desc) {
                found = Some(desc.to_vec());
                false
            } else {
                true
            }
        });
        found
    }

    fn meet_in_the_middle(&self, w: usize) -> Option<Vec<usize>> {
        // Split each support into its lowest `w - h` elements and its highest `h`.
        let h = w / 2;
        let mut table: HashMap<Vec<u64>, Vec<Vec<usize>>> = HashMap::new();
        for_each_colex(self.n, h, &self.columns, &self.zero, &mut |desc, syn| {
            table.entry(syn.words().to_vec()).or_default().push(desc.to_vec());
            true
        });
        let mut best: Option<Vec<usize>> = None;
        for_each_colex(self.n, w - h, &self.columns, &self.zero, &mut |low, syn| {
            let Some(highs) = table.get(syn.words()) else {
                return true;
            };
            let low_max = low[0];
            for high in highs {
                if high.last().is_some_and(|&m| m <= low_max) {
                    continue;
                }
                let mut cand = high.clone();
                cand.extend_from_slice(low);
                if best
                    .as_ref()
                    .is_some_and(|b| colex_cmp(&cand, b) != Ordering::Less)
                {
                    continue;
                }
                if self.qualifies(&cand) {
                    best = Some(cand);
                }
            }
            true
        });
        best
    }
}

/// Minimum weight of a logical operator of type `side`, searched up to weight `cap`.
pub fn min_logical_weight(code: &CssCode, side: Side, cap: usize) -> Result<DistanceResult> {
    min_logical_weight_with(code, side, cap, SearchStrategy::Auto)
}

pub fn min_logical_weight_with(
    code: &CssCode,
    side: Side,
    cap: usize,
    strategy: SearchStrategy,
) -> Result<DistanceResult> {
    code.ensure_valid()?;
    if cap == 0 {
        return Err(Error::InvalidParameter("distance cap must be >= 1".into()));
    }
    if code.k() == 0 {
        return Err(Error::NoLogicals);
    }
    let n = code.n();
    let opposite = code.checks(side.other());
    let stabilizers = code.checks(side).echelon();
    let search = LogicalSearch {
        n,
        columns: opposite.columns(),
        zero: BitVector::zeros(opposite.num_rows()),
        stabilizers: &stabilizers,
    };
    for w in 1..=cap.min(n) {
        let direct = match strategy {
            SearchStrategy::Exhaustive => true,
            SearchStrategy::MeetInTheMiddle => false,
            SearchStrategy::Auto => binomial(n, w) <= DIRECT_SEARCH_LIMIT,
        };
        let hit = if direct {
            search.exhaustive(w)
        } else {
            search.meet_in_the_middle(w)
        };
        if let Some(mut desc) = hit {
            desc.reverse();
            return Ok(DistanceResult {
                value: w,
                exact: true,
                cap,
                witness: Some(desc),
            });
        }
    }
    Ok(DistanceResult {
        value: cap + 1,
        exact: false,
        cap,
        witness: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SoundnessKind {
    SoundnessX,
    SoundnessZ,
    CosoundnessX,
    CosoundnessZ,
}

/// Smallest ratio found by a soundness or cosoundness search.
///
/// `epsilon` is `None` when no vector up to the weight cap has a nonzero image
/// (the infimum over an empty set).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SoundnessEstimate {
    pub kind: SoundnessKind,
    pub weight_cap: usize,
    pub epsilon: Option<Ratio<usize>>,
    pub witness: Option<Vec<usize>>,
    /// Per-weight infima `ε(w)` for `w = 1..=weight_cap`.
    pub per_weight: Vec<(usize, Option<Ratio<usize>>)>,
}

/// All elements of the span of `basis`, in Gray-code order.
fn enumerate_span(len: usize, basis: &[BitVector]) -> Vec<BitVector> {
    let mut out = Vec::with_capacity(1 << basis.len());
    let mut v = BitVector::zeros(len);
    out.push(v.clone());
    for i in 1u64..(1u64 << basis.len()) {
        v.xor_assign(&basis[i.trailing_zeros() as usize]);
        out.push(v.clone());
    }
    out
}

/// `min over v` with `wt(v) = w` and `map·v != 0` of `wt(map·v) / min_u wt(v + u)`,
/// `u` ranging over the kernel of `map`.
fn ratio_infimum(
    map: &BitMatrix,
    weight_cap: usize,
    kind: SoundnessKind,
) -> Result<SoundnessEstimate> {
    let kernel = map.kernel_basis();
    if kernel.len() > KERNEL_BUDGET {
        return Err(Error::BudgetExceeded {
            dim: kernel.len(),
            budget: KERNEL_BUDGET,
        });
    }
    let n = map.num_cols();
    let kernel_elems = enumerate_span(n, &kernel);
    let columns = map.columns();
    let zero = BitVector::zeros(map.num_rows());
    let mut best: Option<(Ratio<usize>, Vec<usize>)> = None;
    let mut per_weight = Vec::new();
    for w in 1..=weight_cap {
        let mut best_w: Option<Ratio<usize>> = None;
        for_each_colex(n, w, &columns, &zero, &mut |desc, image| {
            if image.is_zero() {
                return true;
            }
            let v = BitVector::from_support(n, desc);
            let coset_min = kernel_elems
                .iter()
                .map(|u| v.xor(u).weight())
                .min()
                .expect("kernel contains zero");
            let r = Ratio::new(image.weight(), coset_min);
            if best_w.is_none_or(|b| r < b) {
                best_w = Some(r);
            }
            if best.as_ref().is_none_or(|(b, _)| r < *b) {
                let mut asc = desc.to_vec();
                asc.reverse();
                best = Some((r, asc));
            }
            true
        });
        per_weight.push((w, best_w));
    }
    let (epsilon, witness) = match best {
        Some((r, s)) => (Some(r), Some(s)),
        None => (None, None),
    };
    Ok(SoundnessEstimate {
        kind,
        weight_cap,
        epsilon,
        witness,
        per_weight,
    })
}

/// Soundness of errors of type `side`: syndromes are measured by the opposite-type checks.
pub fn soundness(code: &CssCode, side: Side, weight_cap: usize) -> Result<SoundnessEstimate> {
    code.ensure_valid()?;
    let kind = match side {
        Side::X => SoundnessKind::SoundnessX,
        Side::Z => SoundnessKind::SoundnessZ,
    };
    ratio_infimum(code.checks(side.other()), weight_cap, kind)
}

/// Cosoundness of generators of type `side`: `v` ranges over combinations of those generators.
pub fn cosoundness(code: &CssCode, side: Side, weight_cap: usize) -> Result<SoundnessEstimate> {
    code.ensure_valid()?;
    let kind = match side {
        Side::X => SoundnessKind::CosoundnessX,
        Side::Z => SoundnessKind::CosoundnessZ,
    };
    ratio_infimum(&code.checks(side).transpose(), weight_cap, kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn two_qubit_parity() -> CssCode {
        CssCode::from_supports(2, &[vec![0, 1]], &[] as &[Vec<usize>]).unwrap()
    }

    #[test]
    fn colex_order_small() {
        let cols = vec![BitVector::zeros(1); 4];
        let mut seen = Vec::new();
        for_each_colex(4, 2, &cols, &BitVector::zeros(1), &mut |d, _| {
            seen.push(d.to_vec());
            true
        });
        assert_eq!(
            seen,
            vec![vec![1, 0], vec![2, 0], vec![2, 1], vec![3, 0], vec![3, 1], vec![3, 2]]
        );
    }

    #[test]
    fn steane_and_toric_distances() {
        let s = fixtures::steane();
        let d = min_logical_weight(&s, Side::Z, 7).unwrap();
        assert_eq!((d.value, d.exact), (3, true));
        let t = fixtures::toric(3).unwrap();
        let d = min_logical_weight(&t, Side::X, 6).unwrap();
        assert_eq!((d.value, d.exact), (3, true));
    }

    #[test]
    fn parity_code_z_distance_is_two() {
        let d = min_logical_weight(&two_qubit_parity(), Side::Z, 2).unwrap();
        assert_eq!(d.value, 2);
        assert_eq!(d.witness, Some(vec![0, 1]));
    }

    #[test]
    fn cap_too_small_is_a_lower_bound() {
        let t = fixtures::toric(3).unwrap();
        let d = min_logical_weight(&t, Side::Z, 2).unwrap();
        assert_eq!((d.value, d.exact, d.witness), (3, false, None));
    }

    #[test]
    fn no_logicals_is_an_error() {
        let c = CssCode::from_supports(1, &[vec![0]], &[] as &[Vec<usize>]).unwrap();
        assert_eq!(min_logical_weight(&c, Side::X, 1), Err(Error::NoLogicals));
    }

    #[test]
    fn strategies_agree_on_toric() {
        let t = fixtures::toric(3).unwrap();
        for side in [Side::X, Side::Z] {
            let a = min_logical_weight_with(&t, side, 5, SearchStrategy::Exhaustive).unwrap();
            let b = min_logical_weight_with(&t, side, 5, SearchStrategy::MeetInTheMiddle).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn parity_code_soundness() {
        let e = soundness(&two_qubit_parity(), Side::Z, 2).unwrap();
        assert_eq!(e.epsilon, Some(Ratio::new(1, 1)));
        assert_eq!(e.witness, Some(vec![0]));
        // weight 2: Z1Z2 has zero syndrome and is excluded
        assert_eq!(e.per_weight[1], (2, None));
    }

    #[test]
    fn triangle_cosoundness() {
        let c = fixtures::repetition_triangle();
        let e = cosoundness(&c, Side::Z, 2).unwrap();
        assert_eq!(e.epsilon, Some(Ratio::new(2, 1)));
        assert_eq!(e.per_weight, vec![(1, Some(Ratio::new(2, 1))), (2, Some(Ratio::new(2, 1)))]);
    }

    #[test]
    fn independent_generators_cosoundness() {
        // Z1Z2Z3, Z3Z4: independent, so only u = 0.
        let c = CssCode::from_supports(4, &[] as &[Vec<usize>], &[vec![0, 1, 2], vec![2, 3]]).unwrap();
        let e = cosoundness(&c, Side::Z, 2).unwrap();
        // weight 1: min(3, 2)/1 = 2; weight 2: product {0,1,3} has weight 3, ratio 3/2
        assert_eq!(e.epsilon, Some(Ratio::new(3, 2)));
    }

    #[test]
    fn budget_is_enforced() {
        let c = CssCode::from_supports(21, &[] as &[Vec<usize>], &[] as &[Vec<usize>]).unwrap();
        assert!(matches!(
            soundness(&c, Side::Z, 1),
            Err(Error::BudgetExceeded { dim: 21, budget: 20 })
        ));
    }
}
