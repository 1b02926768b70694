//! Peeling `Ω(G ∨ H)` into loop spaces of iterated Theriault products.
//!
//! Start from `Ω(G ∨ H) ≃ ΩG × ΩH × Ω(ΩG * ΩH)` with the join split as a
//! wedge of products. At threshold `k`, every residual wedge summand `P` of
//! length `k + 1` is pulled out with `Ω(P ∨ W) ≃ ΩP × Ω(W ⋊ ΩP)`, and the
//! half-smash is split again as `⋁_m W ∘ P^m`. All bookkeeping is done on
//! generator series, where each loop factor `ΩP` contributes the enveloping
//! factor `1/(1 - p)`.
//!
//! The residual wedge is infinite. It is held as a list of families
//! `{B ∘ P₁^{m₁} ∘ ... ∘ P_r^{m_r} : mᵢ ≥ 0}` (nested to the left), whose
//! generator series is `b / ∏(1 - pᵢ)`, and members are only listed on demand.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::homology_models::{join_summands, ProductExpr, SpaceModel};
use crate::series::TruncSeries;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecomposeError {
    #[error("dimension bound {bound} exceeds the models' truncation degree {trunc}")]
    BoundBeyondTruncation { bound: usize, trunc: usize },
}

/// A product with the number of times it occurs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Peeled {
    pub expr: ProductExpr,
    pub multiplicity: usize,
}

/// The residual family `{base ∘ acting₁^{m₁} ∘ ... : mᵢ ≥ 0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualFamily {
    base: ProductExpr,
    acting: Vec<ProductExpr>,
}

impl ResidualFamily {
    pub fn base(&self) -> &ProductExpr {
        &self.base
    }

    pub fn acting(&self) -> &[ProductExpr] {
        &self.acting
    }

    /// Sum of the generator series of all members.
    pub fn gens(&self) -> TruncSeries {
        self.acting.iter().fold(self.base.gens().clone(), |acc, p| {
            &acc * &p.gens().geom_inverse().expect("zero constant term")
        })
    }

    /// `B ⋊ Ω(P₁, ..., P_r)`, or just `B` when nothing acts.
    pub fn label(&self) -> String {
        if self.acting.is_empty() {
            return self.base.label().to_string();
        }
        let acting: Vec<&str> = self.acting.iter().map(ProductExpr::label).collect();
        format!("{} ⋊ Ω[{}]", self.base.label(), acting.join(", "))
    }

    /// Members of length at most `max_length` with homology through `D`.
    pub fn members(&self, max_length: usize) -> Vec<ProductExpr> {
        let mut out = Vec::new();
        let mut stack = vec![(self.base.clone(), 0usize)];
        while let Some((expr, from)) = stack.pop() {
            if expr.length() > max_length || expr.is_trivial() {
                continue;
            }
            for (i, p) in self.acting.iter().enumerate().skip(from) {
                stack.push((expr.circle(p), i));
            }
            out.push(expr);
        }
        out
    }

    /// The family with its base removed, as a disjoint union of families.
    fn without_base(&self) -> Vec<ResidualFamily> {
        (0..self.acting.len())
            .map(|i| ResidualFamily {
                base: self.base.circle(&self.acting[i]),
                acting: self.acting[i..].to_vec(),
            })
            .filter(|f| !f.base.is_trivial())
            .collect()
    }
}

/// Order in which the length-`k + 1` summands are pulled out within a step.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ExtractionOrder {
    /// By bottom cell degree, then label.
    #[default]
    BottomDegreeThenLabel,
    /// The reverse of the default order.
    Reversed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConservationReport {
    /// `1 / (1 - g - h)`.
    pub left: TruncSeries,
    /// `∏ 1/(1 - p_α) · 1/(1 - q)`.
    pub right: TruncSeries,
    pub equal: bool,
}

#[derive(Debug, Clone)]
pub struct PeelState {
    k: usize,
    target: TruncSeries,
    peeled: Vec<Peeled>,
    residual: Vec<ResidualFamily>,
}

impl PeelState {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn trunc_degree(&self) -> usize {
        self.target.degree()
    }

    pub fn peeled(&self) -> &[Peeled] {
        &self.peeled
    }

    pub fn residual(&self) -> &[ResidualFamily] {
        &self.residual
    }

    pub fn residual_series(&self) -> TruncSeries {
        self.residual
            .iter()
            .fold(TruncSeries::zero(self.trunc_degree()), |acc, f| {
                &acc + &f.gens()
            })
    }

    /// Residual summands of length at most `max_length`, by (bottom degree, label).
    pub fn residual_members(&self, max_length: usize) -> Vec<ProductExpr> {
        let mut out: Vec<ProductExpr> = self
            .residual
            .iter()
            .flat_map(|f| f.members(max_length))
            .collect();
        out.sort_by(order_key);
        out
    }

    /// Checks `1/(1 - g - h) = ∏_α 1/(1 - p_α) · 1/(1 - q)` through `D`.
    pub fn conservation(&self) -> ConservationReport {
        let inverse = |s: &TruncSeries| s.geom_inverse().expect("zero constant term");
        let mut right = inverse(&self.residual_series());
        for p in &self.peeled {
            let factor = inverse(p.expr.gens());
            for _ in 0..p.multiplicity {
                right = &right * &factor;
            }
        }
        ConservationReport {
            equal: right == self.target,
            left: self.target.clone(),
            right,
        }
    }

    fn push_peeled(&mut self, expr: ProductExpr) {
        match self.peeled.iter_mut().find(|p| p.expr == expr) {
            Some(p) => p.multiplicity += 1,
            None => self.peeled.push(Peeled {
                expr,
                multiplicity: 1,
            }),
        }
    }
}

fn order_key(a: &ProductExpr, b: &ProductExpr) -> std::cmp::Ordering {
    a.bottom_degree()
        .cmp(&b.bottom_degree())
        .then_with(|| a.label().cmp(b.label()))
}

/// Threshold 1: `ΩG × ΩH` peeled, the join summands as residual.
///
/// When `G` and `H` carry the same name, `H` is primed so that products stay
/// distinguishable.
pub fn init_peel(g: &SpaceModel, h: &SpaceModel) -> PeelState {
    let h = if g.name() == h.name() {
        h.renamed(&format!("{}'", h.name()))
    } else {
        h.clone()
    };
    let trunc = g.trunc_degree().min(h.trunc_degree());
    let (g, h) = (g.truncate(trunc), h.truncate(trunc));
    let target = (g.gens() + h.gens())
        .geom_inverse()
        .expect("zero constant term");
    let mut state = PeelState {
        k: 1,
        target,
        peeled: Vec::new(),
        residual: Vec::new(),
    };
    for m in [&g, &h] {
        if !m.is_contractible() {
            state.push_peeled(ProductExpr::leaf(m));
        }
    }
    state.residual = join_summands(&g, &h)
        .into_iter()
        .map(|base| ResidualFamily {
            base,
            acting: Vec::new(),
        })
        .collect();
    state
}

/// Advances the threshold by one with the default extraction order.
pub fn peel_step(state: &PeelState) -> PeelState {
    peel_step_ordered(state, ExtractionOrder::default())
}

pub fn peel_step_ordered(state: &PeelState, order: ExtractionOrder) -> PeelState {
    if state.residual.is_empty() {
        return state.clone();
    }
    let mut next = state.clone();
    next.k += 1;
    let mut extract: Vec<ProductExpr> = next
        .residual
        .iter()
        .map(|f| f.base.clone())
        .filter(|b| b.length() == next.k)
        .collect();
    extract.sort_by(order_key);
    if order == ExtractionOrder::Reversed {
        extract.reverse();
    }
    for p in extract {
        let at = next
            .residual
            .iter()
            .position(|f| f.base == p)
            .expect("candidate is still a family base");
        let family = next.residual.remove(at);
        next.residual.extend(family.without_base());
        for f in &mut next.residual {
            f.acting.push(p.clone());
        }
        next.push_peeled(p);
    }
    next
}

/// Runs `steps` peel steps after the initial state, returning all states.
pub fn peel_trace(g: &SpaceModel, h: &SpaceModel, steps: usize) -> Vec<PeelState> {
    let mut states = vec![init_peel(g, h)];
    for _ in 0..steps {
        let next = peel_step(states.last().expect("nonempty"));
        states.push(next);
    }
    states
}

/// Every peeled product whose bottom cell lies at or below `dim_bound`: the
/// iterated Whitehead products that can be hit by maps from a complex of that
/// dimension.
pub fn whitehead_basis_below(
    g: &SpaceModel,
    h: &SpaceModel,
    dim_bound: usize,
) -> Result<Vec<ProductExpr>, DecomposeError> {
    let trunc = g.trunc_degree().min(h.trunc_degree());
    if dim_bound > trunc {
        return Err(DecomposeError::BoundBeyondTruncation {
            bound: dim_bound,
            trunc,
        });
    }
    let mut state = init_peel(&g.truncate(dim_bound), &h.truncate(dim_bound));
    while state.k < dim_bound && !state.residual.is_empty() {
        state = peel_step(&state);
    }
    let mut out = Vec::new();
    for p in &state.peeled {
        if p.expr.bottom_degree().is_some_and(|b| b <= dim_bound) {
            out.extend(std::iter::repeat_n(p.expr.clone(), p.multiplicity));
        }
    }
    out.sort_by(order_key);
    Ok(out)
}

/// One entry of a peeled list in a trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeeledEntry {
    pub label: String,
    pub length: usize,
    pub bottom_degree: Option<usize>,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepSummary {
    pub k: usize,
    pub peeled: Vec<PeeledEntry>,
    pub residual_families: usize,
    pub residual_series: TruncSeries,
    pub conservation: bool,
}

impl PeelState {
    pub fn summary(&self) -> StepSummary {
        let mut peeled: Vec<&Peeled> = self.peeled.iter().collect();
        peeled.sort_by(|a, b| order_key(&a.expr, &b.expr));
        StepSummary {
            k: self.k,
            peeled: peeled
                .iter()
                .map(|p| PeeledEntry {
                    label: p.expr.label().to_string(),
                    length: p.expr.length(),
                    bottom_degree: p.expr.bottom_degree(),
                    multiplicity: p.multiplicity,
                })
                .collect(),
            residual_families: self.residual.len(),
            residual_series: self.residual_series(),
            conservation: self.conservation().equal,
        }
    }

    /// Peeled labels with multiplicities, independent of extraction order.
    pub fn peeled_multiset(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for p in &self.peeled {
            *out.entry(p.expr.label().to_string()).or_default() += p.multiplicity;
        }
        out
    }
}
