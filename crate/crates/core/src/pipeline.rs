//! Composed procedures: the combined split-and-thicken step, the full two-phase
//! weight reduction, and distance balancing. Each stage reports the parameter
//! bounds it is expected to satisfy, evaluated on the actual output.

use num_rational::Ratio;
use serde::Serialize;

use crate::assignment::{default_max_rounds, lll_resample, AssignmentOutcome};
use crate::code::{CodeParams, CssCode};
use crate::distance::{min_logical_weight, Side};
use crate::error::{Error, Result};
use crate::transforms::{
    check_lll_condition, lll_lhs_estimate, lll_parameters, split_all_x_generators_with, thicken, thicken_all_first,
    LllVariant, QubitOrder,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = "=")]
    Equal,
    #[serde(rename = ">=")]
    AtLeast,
}

/// One inequality or identity evaluated on concrete parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub lhs: usize,
    pub relation: Relation,
    pub rhs: usize,
    pub holds: bool,
}

impl BoundCheck {
    fn new(name: impl Into<String>, lhs: usize, relation: Relation, rhs: usize) -> Self {
        let holds = match relation {
            Relation::AtMost => lhs <= rhs,
            Relation::Equal => lhs == rhs,
            Relation::AtLeast => lhs >= rhs,
        };
        Self {
            name: name.into(),
            lhs,
            relation,
            rhs,
            holds,
        }
    }

    fn at_most(name: &str, lhs: usize, rhs: usize) -> Self {
        Self::new(name, lhs, Relation::AtMost, rhs)
    }

    fn equal(name: &str, lhs: usize, rhs: usize) -> Self {
        Self::new(name, lhs, Relation::Equal, rhs)
    }

    fn at_least(name: &str, lhs: usize, rhs: usize) -> Self {
        Self::new(name, lhs, Relation::AtLeast, rhs)
    }
}

impl std::fmt::Display for BoundCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rel = match self.relation {
            Relation::AtMost => "<=",
            Relation::Equal => "=",
            Relation::AtLeast => ">=",
        };
        let mark = if self.holds { "ok" } else { "FAILED" };
        write!(f, "{mark}: {} ({} {rel} {})", self.name, self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageReport {
    pub name: String,
    pub before: CodeParams,
    pub after: CodeParams,
    pub checks: Vec<BoundCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assignment: Option<AssignmentOutcome>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineReport {
    pub input: CodeParams,
    pub output: CodeParams,
    pub k_preserved: bool,
    pub stages: Vec<StageReport>,
}

impl PipelineReport {
    pub fn checks(&self) -> impl Iterator<Item = &BoundCheck> {
        self.stages.iter().flat_map(|s| s.checks.iter())
    }

    pub fn failed_checks(&self) -> Vec<&BoundCheck> {
        self.checks().filter(|c| !c.holds).collect()
    }

    pub fn all_hold(&self) -> bool {
        self.k_preserved && self.checks().all(|c| c.holds)
    }

    /// Human-readable summary: one line per stage and per check.
    pub fn render(&self) -> String {
        let mut out = format!("input:  {}\noutput: {}\n", self.input.summary(), self.output.summary());
        out.push_str(&format!("K preserved: {}\n", self.k_preserved));
        for s in &self.stages {
            out.push_str(&format!("[{}] {}\n", s.name, s.after.summary()));
            for n in &s.notes {
                out.push_str(&format!("  note: {n}\n"));
            }
            for c in &s.checks {
                out.push_str(&format!("  {c}\n"));
            }
        }
        out
    }
}

/// How the combined step chooses its weight target `w` and copy count `l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseParams {
    Explicit { w: usize, l: usize },
    /// `w = ceil(2/ε) + 1`, `l = ceil((w_X q_Z)^(1+ε))` from the input parameters.
    Epsilon(Ratio<u64>),
}

impl Default for PhaseParams {
    fn default() -> Self {
        PhaseParams::Explicit { w: 2, l: 2 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PipelineOptions {
    /// Resampling budget; defaults to `100·n_Z` of the split code.
    pub max_rounds: Option<usize>,
    /// When set, distances are searched up to this weight and distance bounds are checked
    /// wherever both sides of a bound are exact.
    pub distance_cap: Option<usize>,
}

fn params_with(code: &CssCode, opts: &PipelineOptions) -> Result<CodeParams> {
    code.params(opts.distance_cap)
}

fn exact(p: &CodeParams, side: Side) -> Option<usize> {
    p.exact_distance(side)
}

fn split_checks(p: &CodeParams, q: &CodeParams, delta: usize) -> Vec<BoundCheck> {
    let mut c = vec![
        BoundCheck::equal("split: qubit count is N + Δ", q.n, p.n + delta),
        BoundCheck::equal("split: X generator count is n_X + Δ", q.n_x, p.n_x + delta),
        BoundCheck::equal("split: Z generator count unchanged", q.n_z, p.n_z),
        BoundCheck::at_most("split: X generator weight at most 3", q.w_x, 3),
        BoundCheck::at_most("split: Z qubit degree at most max(w_X q_Z / 2, q_Z)", q.q_z, (p.w_x * p.q_z / 2).max(p.q_z)),
        BoundCheck::at_most("split: Z generator weight at most w_Z (q_X + 1)", q.w_z, p.w_z * (p.q_x + 1)),
        BoundCheck::at_most("split: X qubit degree at most max(q_X, 2)", q.q_x, p.q_x.max(2)),
        BoundCheck::equal("split: logical qubits preserved", q.k, p.k),
        BoundCheck::equal("split: X total weight is W_X + 2Δ", q.w_total_x, p.w_total_x + 2 * delta),
        BoundCheck::at_most("split: X total weight at most 2 W_X", q.w_total_x, 2 * p.w_total_x),
        BoundCheck::at_most("split: Z total weight at most W_Z (q_X + 1)", q.w_total_z, p.w_total_z * (p.q_x + 1)),
    ];
    if let (Some(d), Some(dt)) = (exact(p, Side::X), exact(q, Side::X)) {
        c.push(BoundCheck::at_least(
            "split: d_X at least d_X / (w_X / 2 + 1)",
            dt,
            (2 * d).div_ceil(p.w_x + 2),
        ));
    }
    if let (Some(d), Some(dt)) = (exact(p, Side::Z), exact(q, Side::Z)) {
        c.push(BoundCheck::at_least("split: d_Z does not decrease", dt, d));
    }
    c
}

fn thicken_checks(p: &CodeParams, q: &CodeParams, l: usize, outcome: Option<&AssignmentOutcome>) -> Vec<BoundCheck> {
    let w_x = if p.n_x == 0 { 0 } else { p.w_x + if l == 2 { 1 } else { 2 } };
    let q_x = if p.n_x == 0 { p.q_x } else { p.q_x.max(2) };
    let w_z = if p.n == 0 { p.w_z } else { p.w_z.max(2 + p.q_x) };
    let mut c = vec![
        BoundCheck::equal("thicken: qubit count is lN + (l-1) n_X", q.n, l * p.n + (l - 1) * p.n_x),
        BoundCheck::equal("thicken: X generator count is l n_X", q.n_x, l * p.n_x),
        BoundCheck::equal("thicken: Z generator count is n_Z + (l-1) N", q.n_z, p.n_z + (l - 1) * p.n),
        BoundCheck::equal("thicken: logical qubits preserved", q.k, p.k),
        BoundCheck::equal("thicken: X generator weight is w_X + 2 (w_X + 1 when l = 2)", q.w_x, w_x),
        BoundCheck::equal("thicken: Z generator weight is max(w_Z, 2 + q_X)", q.w_z, w_z),
        BoundCheck::equal("thicken: X qubit degree is max(q_X, 2)", q.q_x, q_x),
        BoundCheck::at_most("thicken: X total weight at most l (W_X + 2 n_X)", q.w_total_x, l * (p.w_total_x + 2 * p.n_x)),
        BoundCheck::at_most(
            "thicken: Z total weight at most W_Z + 2(l-1)N + (l-1)W_X",
            q.w_total_z,
            p.w_total_z + 2 * (l - 1) * p.n + (l - 1) * p.w_total_x,
        ),
    ];
    if let Some(o) = outcome {
        c.push(BoundCheck::at_most(
            "thicken: Z qubit degree at most max(copied load + 2, w_X)",
            q.q_z,
            (o.max_copied_load + 2).max(p.w_x),
        ));
        if o.target_met {
            c.push(BoundCheck::at_most(
                "thicken: Z qubit degree at most max(w + 2, w_X)",
                q.q_z,
                (o.target + 2).max(p.w_x),
            ));
        }
    }
    if let (Some(d), Some(dt)) = (exact(p, Side::X), exact(q, Side::X)) {
        c.push(BoundCheck::equal("thicken: d_X is l d_X", dt, l * d));
    }
    if let (Some(d), Some(dt)) = (exact(p, Side::Z), exact(q, Side::Z)) {
        c.push(BoundCheck::equal("thicken: d_Z unchanged", dt, d));
    }
    c
}

fn combined_checks(p: &CodeParams, q: &CodeParams, w: usize, l: usize, target_met: bool) -> Vec<BoundCheck> {
    let q_x = p.q_x.max(2);
    let mut c = vec![
        BoundCheck::equal("combined: logical qubits preserved", q.k, p.k),
        BoundCheck::at_most("combined: qubit count at most l (N + n_X + 2 W_X)", q.n, l * (p.n + p.n_x + 2 * p.w_total_x)),
        BoundCheck::at_most("combined: X generator count at most l (n_X + W_X)", q.n_x, l * (p.n_x + p.w_total_x)),
        BoundCheck::at_most("combined: Z generator count at most n_Z + (l-1)(N + W_X)", q.n_z, p.n_z + (l - 1) * (p.n + p.w_total_x)),
        BoundCheck::at_most("combined: X generator weight at most 5", q.w_x, 5),
        BoundCheck::at_most(
            "combined: Z generator weight at most max(w_Z (q_X + 1), 2 + max(q_X, 2))",
            q.w_z,
            (p.w_z * (p.q_x + 1)).max(2 + q_x),
        ),
        BoundCheck::at_most("combined: X qubit degree at most max(q_X, 2)", q.q_x, q_x),
        BoundCheck::at_most("combined: X total weight at most 4 l W_X + 2 l n_X", q.w_total_x, 4 * l * p.w_total_x + 2 * l * p.n_x),
        BoundCheck::at_most(
            "combined: Z total weight at most W_Z (q_X + 1) + 2(l-1)N + 4(l-1)W_X",
            q.w_total_z,
            p.w_total_z * (p.q_x + 1) + 2 * (l - 1) * p.n + 4 * (l - 1) * p.w_total_x,
        ),
    ];
    if target_met {
        c.push(BoundCheck::at_most("combined: Z qubit degree at most max(w + 2, 3)", q.q_z, (w + 2).max(3)));
    }
    if let (Some(d), Some(dt)) = (exact(p, Side::X), exact(q, Side::X)) {
        c.push(BoundCheck::at_least(
            "combined: d_X at least l d_X / (w_X / 2 + 1)",
            dt,
            (2 * l * d).div_ceil(p.w_x + 2),
        ));
    }
    if let (Some(d), Some(dt)) = (exact(p, Side::Z), exact(q, Side::Z)) {
        c.push(BoundCheck::at_least("combined: d_Z does not decrease", dt, d));
    }
    c
}

/// Splits every heavy X generator, then thickens with a resampled copy assignment.
///
/// The output has `w'_X <= 5` and, when the assignment reaches its target,
/// `q'_Z <= max(w + 2, 3)`.
pub fn reduce_wx_qz(code: &CssCode, params: PhaseParams, seed: u64) -> Result<(CssCode, PipelineReport)> {
    reduce_wx_qz_with(code, params, seed, &PipelineOptions::default())
}

pub fn reduce_wx_qz_with(
    code: &CssCode,
    params: PhaseParams,
    seed: u64,
    opts: &PipelineOptions,
) -> Result<(CssCode, PipelineReport)> {
    code.ensure_valid()?;
    let input = params_with(code, opts)?;
    let (w, l) = match params {
        PhaseParams::Explicit { w, l } => (w, l),
        PhaseParams::Epsilon(eps) => lll_parameters(&input, eps)?,
    };
    if l < 2 || w == 0 {
        return Err(Error::InvalidParameter(format!("need w >= 1 and l >= 2, got w={w}, l={l}")));
    }

    let (split, trace) = split_all_x_generators_with(code, QubitOrder::Clustered)?;
    let split_params = params_with(&split, opts)?;
    let split_stage = StageReport {
        name: "split X generators".into(),
        before: input.clone(),
        after: split_params.clone(),
        checks: split_checks(&input, &split_params, trace.delta()),
        assignment: None,
        notes: vec![format!("{} generators split, Δ = {}", trace.steps.len(), trace.delta())],
    };

    let rounds = opts.max_rounds.unwrap_or_else(|| default_max_rounds(&split));
    let outcome = lll_resample(&split, l, w, seed, rounds)?;
    let out = thicken(&split, &outcome.assignment)?;
    let output = params_with(&out, opts)?;
    let lll_holds = check_lll_condition(&input, w, l, LllVariant::Combined);
    let mut notes = vec![format!(
        "w = {w}, l = {l}; local lemma condition {} (left side ≈ {:.3e})",
        if lll_holds { "holds" } else { "does not hold" },
        lll_lhs_estimate(&input, w, l, LllVariant::Combined)
    )];
    if !outcome.target_met {
        notes.push(format!(
            "assignment target not met after {} rounds: copied load {} > w = {w}; Z degree bound not claimed",
            outcome.resample_rounds, outcome.max_copied_load
        ));
    }
    let thicken_stage = StageReport {
        name: "thicken".into(),
        before: split_params.clone(),
        after: output.clone(),
        checks: thicken_checks(&split_params, &output, l, Some(&outcome)),
        assignment: Some(outcome.clone()),
        notes,
    };
    let combined_stage = StageReport {
        name: "combined".into(),
        before: input.clone(),
        after: output.clone(),
        checks: combined_checks(&input, &output, w, l, outcome.target_met),
        assignment: None,
        notes: Vec::new(),
    };
    let report = PipelineReport {
        k_preserved: input.k == output.k,
        input,
        output,
        stages: vec![split_stage, thicken_stage, combined_stage],
    };
    Ok((out, report))
}

/// Two-phase reduction: reduce `w_X, q_Z`, then the same on the dual code, and dualize back.
pub fn weight_reduce(
    code: &CssCode,
    phase1: PhaseParams,
    phase2: PhaseParams,
    seed: u64,
    opts: &PipelineOptions,
) -> Result<(CssCode, PipelineReport)> {
    let (mid, r1) = reduce_wx_qz_with(code, phase1, seed, opts)?;
    let (dual_out, r2) = reduce_wx_qz_with(&mid.dualize(), phase2, seed.wrapping_add(1), opts)?;
    let out = dual_out.dualize();
    let output = r2.output.swapped();
    let mid_p = &r1.output;

    // Bounds for the final code, chained through the intermediate code's actual parameters.
    let (w1, w2) = (phase_w(phase1, &r1.input), phase_w(phase2, &r2.input));
    let q_z_mid = mid_p.q_z;
    let mut checks = vec![
        BoundCheck::equal("final: logical qubits preserved", output.k, r1.input.k),
        BoundCheck::at_most("final: Z generator weight at most 5", output.w_z, 5),
        BoundCheck::at_most(
            "final: X generator weight at most max(w'_X (q'_Z + 1), 2 + max(q'_Z, 2))",
            output.w_x,
            (mid_p.w_x * (q_z_mid + 1)).max(2 + q_z_mid.max(2)),
        ),
        BoundCheck::at_most("final: Z qubit degree at most max(q'_Z, 2)", output.q_z, q_z_mid.max(2)),
    ];
    if r2.stages[1].assignment.as_ref().is_some_and(|o| o.target_met) {
        checks.push(BoundCheck::at_most("final: X qubit degree at most max(w + 2, 3)", output.q_x, (w2 + 2).max(3)));
    }
    if r1.stages[1].assignment.as_ref().is_some_and(|o| o.target_met) {
        checks.push(BoundCheck::at_most(
            "final: Z qubit degree at most max(w + 2, 3)",
            output.q_z,
            (w1 + 2).max(3),
        ));
    }
    let mut stages = Vec::new();
    for s in r1.stages {
        stages.push(StageReport {
            name: format!("phase 1: {}", s.name),
            ..s
        });
    }
    for s in r2.stages {
        stages.push(StageReport {
            name: format!("phase 2 (dual): {}", s.name),
            ..s
        });
    }
    stages.push(StageReport {
        name: "final".into(),
        before: r1.input.clone(),
        after: output.clone(),
        checks,
        assignment: None,
        notes: Vec::new(),
    });
    let report = PipelineReport {
        k_preserved: r1.input.k == output.k,
        input: r1.input,
        output,
        stages,
    };
    Ok((out, report))
}

fn phase_w(p: PhaseParams, input: &CodeParams) -> usize {
    match p {
        PhaseParams::Explicit { w, .. } => w,
        PhaseParams::Epsilon(eps) => lll_parameters(input, eps).map(|(w, _)| w).unwrap_or(usize::MAX),
    }
}

/// Thickens along the side with the smaller distance so both distances match.
///
/// Distances come from `hint` when given, otherwise from an exhaustive search up
/// to weight N. With `d_X < d_Z` the code is thickened with `l = ceil(d_Z / d_X)`
/// and every Z generator at copy 1; with `d_Z < d_X` the dual code is balanced.
pub fn balance(
    code: &CssCode,
    hint: Option<(usize, usize)>,
    opts: &PipelineOptions,
) -> Result<(CssCode, PipelineReport)> {
    code.ensure_valid()?;
    let mut input = code.params(None)?;
    let (d_x, d_z) = match hint {
        Some((0, _)) | Some((_, 0)) => {
            return Err(Error::InvalidParameter("distance hints must be positive".into()));
        }
        Some(h) => h,
        None => {
            if input.k == 0 {
                return Err(Error::DistanceUnavailable("code has no logical qubits".into()));
            }
            let dx = min_logical_weight(code, Side::X, code.n())?;
            let dz = min_logical_weight(code, Side::Z, code.n())?;
            if !dx.exact || !dz.exact {
                return Err(Error::DistanceUnavailable("distance search incomplete; pass a hint".into()));
            }
            let v = (dx.value, dz.value);
            input.d_x = Some(dx);
            input.d_z = Some(dz);
            v
        }
    };
    let mut notes = vec![format!(
        "d_X = {d_x}, d_Z = {d_z} ({})",
        if hint.is_some() { "hint" } else { "exhaustive search" }
    )];
    let (out, l, dual) = if d_x == d_z {
        notes.push("distances already equal; code unchanged".into());
        (code.clone(), 1, false)
    } else if d_x < d_z {
        let l = d_z.div_ceil(d_x);
        (thicken_all_first(code, l)?, l, false)
    } else {
        let l = d_x.div_ceil(d_z);
        (thicken_all_first(&code.dualize(), l)?.dualize(), l, true)
    };
    if l > 1 {
        notes.push(format!(
            "thickened {}with l = {l}, every Z generator kept at copy 1",
            if dual { "the dual code " } else { "" }
        ));
    }
    let mut output = params_with(&out, opts)?;
    let mut checks = vec![BoundCheck::equal("balance: logical qubits preserved", output.k, input.k)];
    if l > 1 {
        let (small, large) = (d_x.min(d_z), d_x.max(d_z));
        let (amp, kept) = if dual { (Side::Z, Side::X) } else { (Side::X, Side::Z) };
        if let Some(d) = exact(&output, amp) {
            checks.push(BoundCheck::equal("balance: amplified distance is l times the smaller one", d, l * small));
        }
        if let Some(d) = exact(&output, kept) {
            checks.push(BoundCheck::equal("balance: larger distance unchanged", d, large));
        }
        let (p_in, p_out) = if dual { (input.swapped(), output.swapped()) } else { (input.clone(), output.clone()) };
        checks.push(BoundCheck::equal(
            "balance: qubit count is lN + (l-1) n_X",
            p_out.n,
            l * p_in.n + (l - 1) * p_in.n_x,
        ));
    } else if opts.distance_cap.is_some() {
        output.d_x = input.d_x.clone();
        output.d_z = input.d_z.clone();
    }
    let stage = StageReport {
        name: "balance".into(),
        before: input.clone(),
        after: output.clone(),
        checks,
        assignment: None,
        notes,
    };
    let report = PipelineReport {
        k_preserved: input.k == output.k,
        input,
        output,
        stages: vec![stage],
    };
    Ok((out, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn steane_single_phase() {
        let (out, r) = reduce_wx_qz(&fixtures::steane(), PhaseParams::Explicit { w: 2, l: 2 }, 7).unwrap();
        assert!(out.commutes());
        assert!(r.k_preserved, "{}", r.render());
        assert!(r.all_hold(), "{}", r.render());
        let p = &r.output;
        assert!(p.w_x <= 5 && p.q_x <= 3);
        assert_eq!(p.k, 1);
        assert_eq!((p.n, p.n_x, p.n_z), (26, 12, 13));
    }

    #[test]
    fn light_code_skips_split() {
        let c = fixtures::toric(3).unwrap().dualize();
        let c = crate::transforms::split_all_x_generators(&c).unwrap().0.dualize();
        let c = c.dualize();
        let (_, r) = reduce_wx_qz(&c, PhaseParams::Explicit { w: 2, l: 2 }, 1).unwrap();
        assert_eq!(r.stages[0].before, r.stages[0].after);
        assert!(r.all_hold(), "{}", r.render());
    }

    #[test]
    fn toric_single_phase_distances() {
        let t = fixtures::toric(3).unwrap();
        let opts = PipelineOptions {
            distance_cap: Some(6),
            ..Default::default()
        };
        let (_, r) = reduce_wx_qz_with(&t, PhaseParams::Explicit { w: 2, l: 2 }, 3, &opts).unwrap();
        assert!(r.all_hold(), "{}", r.render());
        assert!(r.output.exact_distance(Side::Z).is_some_and(|d| d >= 3), "{}", r.render());
        assert!(r.output.d_x.as_ref().unwrap().value >= 2);
    }

    #[test]
    fn epsilon_parameters_are_used() {
        let s = fixtures::steane();
        let (_, r) = reduce_wx_qz(&s, PhaseParams::Epsilon(Ratio::from_integer(1)), 0).unwrap();
        // w_X q_Z = 12, ε = 1: w = 3, l = 12^2
        let a = r.stages[1].assignment.as_ref().unwrap();
        assert_eq!((a.target, a.assignment.l), (3, 144));
        assert!(r.all_hold(), "{}", r.render());
    }

    #[test]
    fn weight_reduce_steane_and_toric() {
        let p = PhaseParams::Explicit { w: 2, l: 2 };
        for code in [fixtures::steane(), fixtures::toric(3).unwrap()] {
            let (out, r) = weight_reduce(&code, p, p, 11, &PipelineOptions::default()).unwrap();
            assert!(out.commutes());
            assert_eq!(r.output.k, code.k());
            assert!(r.all_hold(), "{}", r.render());
        }
    }

    #[test]
    fn balance_branches() {
        let t = fixtures::toric(3).unwrap();
        let (out, r) = balance(&t, None, &PipelineOptions::default()).unwrap();
        assert_eq!(out, t);
        assert!(r.all_hold());

        let (out, r) = balance(&t, Some((2, 7)), &PipelineOptions::default()).unwrap();
        assert_eq!(out.n(), 4 * 18 + 3 * 9);
        assert!(r.all_hold(), "{}", r.render());

        assert!(balance(&t, Some((0, 3)), &PipelineOptions::default()).is_err());
        let no_logicals = CssCode::from_supports(1, &[vec![0]], &[] as &[Vec<usize>]).unwrap();
        assert!(matches!(
            balance(&no_logicals, None, &PipelineOptions::default()),
            Err(Error::DistanceUnavailable(_))
        ));
    }
}
