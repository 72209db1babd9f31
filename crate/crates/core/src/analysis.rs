//! Stability certification, closure `A* = ⊕_{k≥0} A^k`, the descent identity
//! `A(A*x) = A*(Ax) < A*x`, the maximal solution of `x ≤ Ax ⊕ b`, and
//! trajectory simulation.
//!
//! A map is certified stable when the weight of every simple cycle of its
//! entry graph lies strictly below the identity. The stable maps are exactly
//! those for which `A^k x → 0` for all `x`, for which `Ax ≱ x` whenever
//! `x ≠ 0`, and for which `x ≤ Ax ⊕ b` has a unique maximal solution; for
//! them the closure is the finite maximum `⊕_{k<n} A^k`.

use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::fnalg::{self, Contraction, ScalarFn};
use crate::mpmatrix::{
    self, apply, compare_vectors, compose_maps, max_norm, oplus_maps, MapError, MapFile, MpMap,
    NonnegVector, OrderRelation,
};
use crate::ratio::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("map is not certified stable (verdict: {0:?})")]
    NotStable(Verdict),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// A simple cycle `(i_1, …, i_k)` of the entry graph with weight
/// `a_{i_1 i_2} ∘ a_{i_2 i_3} ∘ … ∘ a_{i_k i_1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub nodes: Vec<usize>,
    pub weight: ScalarFn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Stable,
    Unstable,
    Uncertified,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleVerdict {
    pub cycle: Cycle,
    pub contraction: Contraction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityReport {
    pub verdict: Verdict,
    pub cycles: Vec<CycleVerdict>,
    /// Nonzero `x` with `Ax ≥ x`, present for unstable maps.
    pub witness: Option<NonnegVector>,
}

/// Every simple cycle, each listed once starting from its smallest node.
/// The graph has an edge `i → j` whenever `a_ij` is not identically zero.
pub fn enumerate_simple_cycles(a: &MpMap) -> Vec<Cycle> {
    let n = a.dim();
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| !a.entry(i, j).is_zero()).collect())
        .collect();
    let mut cycles = Vec::new();
    let mut path = Vec::with_capacity(n);
    let mut on_path = vec![false; n];
    for start in 0..n {
        path.push(start);
        on_path[start] = true;
        extend_paths(a, &succ, start, &mut path, &mut on_path, &mut cycles);
        on_path[start] = false;
        path.pop();
    }
    cycles
}

fn extend_paths(
    a: &MpMap,
    succ: &[Vec<usize>],
    start: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Cycle>,
) {
    let last = *path.last().expect("nonempty path");
    for &next in &succ[last] {
        if next == start {
            out.push(cycle_from_nodes(a, path.clone()));
        } else if next > start && !on_path[next] {
            path.push(next);
            on_path[next] = true;
            extend_paths(a, succ, start, path, on_path, out);
            on_path[next] = false;
            path.pop();
        }
    }
}

fn cycle_from_nodes(a: &MpMap, nodes: Vec<usize>) -> Cycle {
    let k = nodes.len();
    let edges = (0..k).map(|m| a.entry(nodes[m], nodes[(m + 1) % k]));
    let weight = fnalg::compose_all(edges);
    Cycle { nodes, weight }
}

/// Builds `x` with `x_{i_1} = t` and the value carried backwards around the
/// cycle, so that `(Ax)_{i_m} ≥ a_{i_m i_{m+1}}(x_{i_{m+1}}) = x_{i_m}` and
/// `(Ax)_{i_1} ≥ weight(t) ≥ t`. Checked exactly before it is returned.
fn propagate_witness(a: &MpMap, nodes: &[usize], t: &Rational) -> Option<NonnegVector> {
    let n = a.dim();
    let k = nodes.len();
    let mut coords = vec![Rational::from_integer(0.into()); n];
    coords[nodes[0]] = t.clone();
    let mut carried = t.clone();
    for m in (1..k).rev() {
        let (i, j) = (nodes[m], nodes[(m + 1) % k]);
        carried = fnalg::evaluate(a.entry(i, j), &carried).ok()?;
        coords[i] = carried.clone();
    }
    let x = NonnegVector::new(coords).ok()?;
    let ax = apply(a, &x).ok()?;
    (!x.is_zero() && x.le(&ax)).then_some(x)
}

/// Contraction test on every simple cycle. A refuted cycle makes the map
/// unstable even when other cycles are uncertified.
pub fn check_stability(a: &MpMap) -> StabilityReport {
    let cycles: Vec<CycleVerdict> = enumerate_simple_cycles(a)
        .into_iter()
        .map(|cycle| {
            let contraction = fnalg::below_identity(&cycle.weight);
            CycleVerdict { cycle, contraction }
        })
        .collect();
    let refuted: Vec<(&Cycle, &Rational)> = cycles
        .iter()
        .filter_map(|cv| match &cv.contraction {
            Contraction::Refuted(t) => Some((&cv.cycle, t)),
            _ => None,
        })
        .collect();
    let (verdict, witness) = if !refuted.is_empty() {
        let witness = refuted
            .iter()
            .find_map(|(c, t)| propagate_witness(a, &c.nodes, t));
        (Verdict::Unstable, witness)
    } else if cycles.iter().all(|cv| cv.contraction.is_certified()) {
        (Verdict::Stable, None)
    } else {
        (Verdict::Uncertified, None)
    };
    StabilityReport {
        verdict,
        cycles,
        witness,
    }
}

/// `⊕_{k < terms} A^k x`, computed by iterating.
pub fn iterate_join(a: &MpMap, x: &NonnegVector, terms: usize) -> Result<NonnegVector, MapError> {
    if terms == 0 {
        return Ok(NonnegVector::zeros(x.dim()));
    }
    let mut cur = x.clone();
    let mut acc = x.clone();
    for _ in 1..terms {
        cur = apply(a, &cur)?;
        acc = acc.join(&cur)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureResult {
    /// `A* = ⊕_{k<n} A^k`.
    pub star: MpMap,
    /// Smallest `d` with `⊕_{k≤d} A^k` structurally equal to `A*`.
    pub truncation_degree: usize,
}

impl ClosureResult {
    /// Map file schema plus `"truncation_degree"`.
    pub fn to_map_file(&self) -> MapFile {
        let mut f = MapFile::from_map(&self.star);
        f.truncation_degree = Some(self.truncation_degree);
        f
    }
}

fn compute_closure(a: &MpMap) -> ClosureResult {
    let n = a.dim();
    let mut power = MpMap::identity(n);
    let mut partial = vec![power.clone()];
    for _ in 1..n {
        power = compose_maps(a, &power).expect("same dimension");
        let next = oplus_maps(partial.last().expect("nonempty"), &power).expect("same dimension");
        partial.push(next);
    }
    let star = partial.pop().expect("nonempty");
    let truncation_degree = partial.iter().position(|p| *p == star).unwrap_or(n - 1);
    ClosureResult {
        star,
        truncation_degree,
    }
}

/// Result of the descent check at one point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentCheck {
    /// `A*(Ax)`.
    pub lhs: NonnegVector,
    /// `A*x`.
    pub rhs: NonnegVector,
    pub relation: OrderRelation,
    /// Whether `A(A*x) = A*(Ax)` held exactly.
    pub commutes: bool,
}

/// Outcome of a simulated trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimOutcome {
    ConvergedBelow,
    StepsExhausted,
    /// `x_{k+1} = x_k ≠ 0`: a nonzero fixed point, hence instability.
    FixedPointHit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    /// `x_0, x_1, …` up to and including the state that ended the run.
    pub states: Vec<NonnegVector>,
    pub outcome: SimOutcome,
}

impl Trajectory {
    /// Whether the final norm is at least the initial norm.
    pub fn norm_not_decreased(&self) -> bool {
        let first = self.states.first().map(max_norm);
        let last = self.states.last().map(max_norm);
        matches!((first, last), (Some(f), Some(l)) if l >= f)
    }
}

/// Iterates `x_{k+1} = A x_k` for at most `max_steps` steps.
pub fn simulate(
    a: &MpMap,
    x0: &NonnegVector,
    max_steps: usize,
    halt_norm: &Rational,
) -> Result<Trajectory, MapError> {
    let mut states = vec![x0.clone()];
    if &max_norm(x0) < halt_norm {
        return Ok(Trajectory {
            states,
            outcome: SimOutcome::ConvergedBelow,
        });
    }
    for _ in 0..max_steps {
        let cur = states.last().expect("nonempty");
        let next = apply(a, cur)?;
        let fixed = &next == cur && !next.is_zero();
        let below = &max_norm(&next) < halt_norm;
        states.push(next);
        if below {
            return Ok(Trajectory {
                states,
                outcome: SimOutcome::ConvergedBelow,
            });
        }
        if fixed {
            return Ok(Trajectory {
                states,
                outcome: SimOutcome::FixedPointHit,
            });
        }
    }
    Ok(Trajectory {
        states,
        outcome: SimOutcome::StepsExhausted,
    })
}

/// A map whose stability has been certified; the entry point for closure
/// computations.
#[derive(Debug)]
pub struct StableMap {
    map: MpMap,
    report: StabilityReport,
    closure: OnceLock<ClosureResult>,
}

impl StableMap {
    pub fn new(map: MpMap) -> Result<Self, AnalysisError> {
        let report = check_stability(&map);
        if report.verdict != Verdict::Stable {
            return Err(AnalysisError::NotStable(report.verdict));
        }
        Ok(StableMap {
            map,
            report,
            closure: OnceLock::new(),
        })
    }

    pub fn map(&self) -> &MpMap {
        &self.map
    }

    pub fn dim(&self) -> usize {
        self.map.dim()
    }

    pub fn report(&self) -> &StabilityReport {
        &self.report
    }

    /// Symbolic closure, computed once on first use.
    pub fn closure(&self) -> &ClosureResult {
        self.closure.get_or_init(|| compute_closure(&self.map))
    }

    /// `A*x` as the running maximum of `x, Ax, …, A^{n-1}x`.
    pub fn closure_apply(&self, x: &NonnegVector) -> Result<NonnegVector, MapError> {
        iterate_join(&self.map, x, self.dim())
    }

    pub fn descent_check(&self, x: &NonnegVector) -> Result<DescentCheck, MapError> {
        let rhs = self.closure_apply(x)?;
        let lhs = self.closure_apply(&apply(&self.map, x)?)?;
        let other = apply(&self.map, &rhs)?;
        let relation = compare_vectors(&lhs, &rhs)?;
        Ok(DescentCheck {
            commutes: other == lhs,
            lhs,
            rhs,
            relation,
        })
    }

    /// Largest `x` with `x ≤ Ax ⊕ b`, namely `A*b`.
    pub fn maximal_solution(&self, b: &NonnegVector) -> Result<NonnegVector, MapError> {
        self.closure_apply(b)
    }

    /// Iterates `y ↦ Ay ⊕ b` from `y = b` until it stops changing; returns the
    /// limit and the number of steps that changed `y`.
    pub fn iterate_maximal_solution(
        &self,
        b: &NonnegVector,
    ) -> Result<(NonnegVector, usize), MapError> {
        let mut y = b.clone();
        for steps in 0..=self.dim() {
            let next = apply(&self.map, &y)?.join(b)?;
            if next == y {
                return Ok((y, steps));
            }
            y = next;
        }
        unreachable!("a stable map reaches its maximal solution within n - 1 steps")
    }
}

pub fn closure(a: &MpMap) -> Result<ClosureResult, AnalysisError> {
    Ok(StableMap::new(a.clone())?.closure().clone())
}

pub fn closure_apply(a: &MpMap, x: &NonnegVector) -> Result<NonnegVector, AnalysisError> {
    Ok(StableMap::new(a.clone())?.closure_apply(x)?)
}

pub fn descent_check(a: &MpMap, x: &NonnegVector) -> Result<DescentCheck, AnalysisError> {
    Ok(StableMap::new(a.clone())?.descent_check(x)?)
}

pub fn maximal_solution(a: &MpMap, b: &NonnegVector) -> Result<NonnegVector, AnalysisError> {
    Ok(StableMap::new(a.clone())?.maximal_solution(b)?)
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Serialize)]
struct CycleJson {
    nodes: Vec<usize>,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_t: Option<String>,
    weight: ScalarFn,
}

#[derive(Serialize)]
struct ReportJson {
    verdict: Verdict,
    cycles: Vec<CycleJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<NonnegVector>,
}

impl Serialize for StabilityReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ReportJson {
            verdict: self.verdict,
            cycles: self
                .cycles
                .iter()
                .map(|cv| {
                    let (verdict, witness_t) = match &cv.contraction {
                        Contraction::Certified => ("certified", None),
                        Contraction::Refuted(t) => ("refuted", Some(ratio::format(t))),
                        Contraction::Uncertified => ("uncertified", None),
                    };
                    CycleJson {
                        nodes: cv.cycle.nodes.clone(),
                        verdict,
                        witness_t,
                        weight: cv.cycle.weight.clone(),
                    }
                })
                .collect(),
            witness: self.witness.clone(),
        }
        .serialize(s)
    }
}

impl Serialize for ClosureResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_map_file().serialize(s)
    }
}

/// `true` when some `x` among `candidates` satisfies `x ≠ 0` and `Ax ≥ x`.
pub fn find_fixed_ray_witness<'a>(
    a: &MpMap,
    candidates: impl IntoIterator<Item = &'a NonnegVector>,
) -> Result<Option<NonnegVector>, MapError> {
    for x in candidates {
        if !x.is_zero() && x.le(&apply(a, x)?) {
            return Ok(Some(x.clone()));
        }
    }
    Ok(None)
}

/// Default pointwise grid used when comparing symbolic maps.
pub fn default_grid(n: usize) -> Vec<NonnegVector> {
    mpmatrix::verification_grid(n, 64)
}
