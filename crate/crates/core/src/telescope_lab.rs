//! Telescopes of graded self-maps, seen through homology.
//!
//! A self-map `e: X → X` induces a degreewise linear map `E`, and the mapping
//! telescope `T(e)` has homology equal to the stable image of `E`. Everything
//! here is finite linear algebra: stable images are ranks of `E^m` with `m` at
//! least the dimension of the degree (Fitting), so no eigenvalue machinery is
//! needed and the answers are exact over any field.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::homology_models::{circle, join_loops, SpaceModel};
use crate::linalg::{Field, Matrix};
use crate::series::TruncSeries;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TelescopeError {
    #[error("block in degree {degree} is {rows}x{cols}, not square")]
    NotSquare {
        degree: usize,
        rows: usize,
        cols: usize,
    },
    #[error("dimension mismatch in degree {degree}: {left} vs {right}")]
    DimensionMismatch {
        degree: usize,
        left: usize,
        right: usize,
    },
    #[error("map is not quasi-idempotent with unit -1 (E^2 = -E fails)")]
    NotMinusQuasiIdempotent,
    #[error("{0} is not modelled as a suspension")]
    NotSuspension(String),
    #[error("cap {cap} exceeds the models' truncation degree {trunc}")]
    CapBeyondTruncation { cap: usize, trunc: usize },
    #[error("invalid matrix document: {0}")]
    InvalidDocument(String),
}

/// A degree-preserving linear self-map of a graded vector space, one square
/// block per degree `0..=D`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedEndo<F: Field> {
    field: F,
    blocks: Vec<Matrix<F>>,
}

impl<F: Field> GradedEndo<F> {
    pub fn new(field: F, blocks: Vec<Matrix<F>>) -> Result<Self, TelescopeError> {
        for (degree, b) in blocks.iter().enumerate() {
            if !b.is_square() {
                return Err(TelescopeError::NotSquare {
                    degree,
                    rows: b.rows(),
                    cols: b.cols(),
                });
            }
        }
        Ok(GradedEndo { field, blocks })
    }

    pub fn identity(field: F, dims: &[usize]) -> Self {
        let blocks = dims.iter().map(|&n| Matrix::identity(&field, n)).collect();
        GradedEndo { field, blocks }
    }

    pub fn zero(field: F, dims: &[usize]) -> Self {
        let blocks = dims.iter().map(|&n| Matrix::zeros(&field, n, n)).collect();
        GradedEndo { field, blocks }
    }

    /// Parses `{"2": [[1, 0], [0, 1]], "3": [[-1]]}`. Entries may be JSON
    /// integers or strings (`"3/4"` over the rationals). Missing degrees up to
    /// the largest key are zero-dimensional.
    pub fn from_json(field: F, json: &str) -> Result<Self, TelescopeError> {
        let bad = |m: String| TelescopeError::InvalidDocument(m);
        let raw: BTreeMap<String, Vec<Vec<serde_json::Value>>> =
            serde_json::from_str(json).map_err(|e| bad(e.to_string()))?;
        let mut by_degree = BTreeMap::new();
        for (key, rows) in raw {
            let degree: usize = key
                .parse()
                .map_err(|_| bad(format!("degree key {key:?} is not a nonnegative integer")))?;
            let mut parsed = Vec::with_capacity(rows.len());
            for row in rows {
                let mut out = Vec::with_capacity(row.len());
                for v in row {
                    let text = match &v {
                        serde_json::Value::Number(n) => n.to_string(),
                        serde_json::Value::String(s) => s.clone(),
                        other => return Err(bad(format!("entry {other} is not a number"))),
                    };
                    let e = field.parse(&text).ok_or_else(|| {
                        bad(format!(
                            "entry {text:?} is not an element of {}",
                            field.name()
                        ))
                    })?;
                    out.push(e);
                }
                parsed.push(out);
            }
            let n = parsed.len();
            let m = if n == 0 {
                Matrix::zeros(&field, 0, 0)
            } else {
                Matrix::from_rows(parsed)
                    .ok_or_else(|| bad(format!("ragged rows in degree {degree}")))?
            };
            if m.cols() != n {
                return Err(TelescopeError::NotSquare {
                    degree,
                    rows: n,
                    cols: m.cols(),
                });
            }
            by_degree.insert(degree, m);
        }
        let top = by_degree.keys().next_back().map_or(0, |d| d + 1);
        let blocks = (0..top)
            .map(|d| {
                by_degree
                    .remove(&d)
                    .unwrap_or_else(|| Matrix::zeros(&field, 0, 0))
            })
            .collect();
        Self::new(field, blocks)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn blocks(&self) -> &[Matrix<F>] {
        &self.blocks
    }

    pub fn block(&self, degree: usize) -> &Matrix<F> {
        &self.blocks[degree]
    }

    /// Top degree `D`; an endomorphism with no blocks reports 0.
    pub fn top_degree(&self) -> usize {
        self.blocks.len().saturating_sub(1)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(Matrix::rows).collect()
    }

    pub fn dim_series(&self) -> TruncSeries {
        TruncSeries::from_coeffs(self.top_degree(), self.dims().into_iter().map(|n| n as u64))
    }

    fn check_compatible(&self, other: &Self) -> Result<(), TelescopeError> {
        let (a, b) = (self.dims(), other.dims());
        for degree in 0..a.len().max(b.len()) {
            let left = a.get(degree).copied().unwrap_or(0);
            let right = b.get(degree).copied().unwrap_or(0);
            if left != right {
                return Err(TelescopeError::DimensionMismatch {
                    degree,
                    left,
                    right,
                });
            }
        }
        Ok(())
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self, TelescopeError> {
        self.check_compatible(other)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.mul(&self.field, b))
            .collect();
        Ok(GradedEndo {
            field: self.field.clone(),
            blocks,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, TelescopeError> {
        self.check_compatible(other)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.add(&self.field, b))
            .collect();
        Ok(GradedEndo {
            field: self.field.clone(),
            blocks,
        })
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        GradedEndo {
            field: self.field.clone(),
            blocks: self
                .blocks
                .iter()
                .map(|b| b.scale(&self.field, c))
                .collect(),
        }
    }

    /// `1 + E`.
    pub fn one_plus(&self) -> Self {
        let id = Self::identity(self.field.clone(), &self.dims());
        self.add(&id).expect("same dimensions")
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.is_zero(&self.field))
    }

    fn rank_series(&self, rank_of: impl Fn(&Matrix<F>) -> usize) -> TruncSeries {
        TruncSeries::from_coeffs(
            self.top_degree(),
            self.blocks.iter().map(|b| rank_of(b) as u64),
        )
    }

    pub fn rank_series_of(&self) -> TruncSeries {
        self.rank_series(|b| b.rank(&self.field))
    }

    pub fn nullity_series(&self) -> TruncSeries {
        self.rank_series(|b| b.rows() - b.rank(&self.field))
    }
}

/// The unit `u` with `E² = u·E` in every degree, if there is one.
///
/// The zero map satisfies this for every unit; it reports `-1`.
pub fn is_quasi_idempotent<F: Field>(e: &GradedEndo<F>) -> Option<F::Elem> {
    let f = e.field();
    let mut unit: Option<F::Elem> = None;
    for b in e.blocks() {
        let sq = b.mul(f, b);
        let pivot = (0..b.rows())
            .flat_map(|i| (0..b.cols()).map(move |j| (i, j)))
            .find(|&(i, j)| !f.is_zero(b.get(i, j)));
        let Some((i, j)) = pivot else {
            if !sq.is_zero(f) {
                return None;
            }
            continue;
        };
        let u = f.mul(sq.get(i, j), &f.inv(b.get(i, j))?);
        if f.is_zero(&u) || sq != b.scale(f, &u) {
            return None;
        }
        match &unit {
            Some(prev) if *prev != u => return None,
            Some(_) => {}
            None => unit = Some(u),
        }
    }
    Some(unit.unwrap_or_else(|| f.from_i64(-1)))
}

/// Stable image dimensions: `rank(E_n^m)` with `m = dim V_n`.
pub fn telescope_dims<F: Field>(e: &GradedEndo<F>) -> TruncSeries {
    let f = e.field();
    e.rank_series(|b| {
        let m = b.rows();
        if m == 0 {
            0
        } else {
            b.pow(f, m).rank(f)
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplittingDegree {
    pub degree: usize,
    pub dimension: usize,
    pub image: usize,
    pub kernel: usize,
    /// Stable rank of `E`.
    pub telescope: usize,
    /// Stable rank of `1 + E`.
    pub complement_telescope: usize,
    /// Rank of the two stable maps stacked, i.e. of `V → T(E) ⊕ T(1+E)`.
    pub joint_rank: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplittingReport {
    pub image_series: TruncSeries,
    pub kernel_series: TruncSeries,
    pub telescope_series: TruncSeries,
    pub complement_series: TruncSeries,
    pub degrees: Vec<SplittingDegree>,
    pub pass: bool,
}

/// For `E² = -E`, checks that `V ≅ T(E) ⊕ T(1+E)` in homology with
/// `T(E)` carrying `im E` and `T(1+E)` carrying `ker E`.
pub fn verify_telescope_splitting<F: Field>(
    e: &GradedEndo<F>,
) -> Result<SplittingReport, TelescopeError> {
    let f = e.field();
    match is_quasi_idempotent(e) {
        Some(u) if u == f.from_i64(-1) => {}
        _ => return Err(TelescopeError::NotMinusQuasiIdempotent),
    }
    let complement = e.one_plus();
    let image_series = e.rank_series_of();
    let kernel_series = e.nullity_series();
    let telescope_series = telescope_dims(e);
    let complement_series = telescope_dims(&complement);

    let mut degrees = Vec::with_capacity(e.blocks().len());
    for (n, b) in e.blocks().iter().enumerate() {
        let dimension = b.rows();
        let joint_rank = if dimension == 0 {
            0
        } else {
            b.pow(f, dimension)
                .vstack(&complement.block(n).pow(f, dimension))
                .rank(f)
        };
        let image = b.rank(f);
        let kernel = dimension - image;
        let telescope = usize::try_from(telescope_series.coeff(n)).expect("small");
        let complement_telescope = usize::try_from(complement_series.coeff(n)).expect("small");
        degrees.push(SplittingDegree {
            degree: n,
            dimension,
            image,
            kernel,
            telescope,
            complement_telescope,
            joint_rank,
            pass: telescope == image
                && complement_telescope == kernel
                && telescope + complement_telescope == dimension
                && joint_rank == dimension,
        });
    }
    Ok(SplittingReport {
        pass: degrees.iter().all(|d| d.pass),
        image_series,
        kernel_series,
        telescope_series,
        complement_series,
        degrees,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SwapReport {
    /// Stable ranks of `F1·F2`.
    pub left: TruncSeries,
    /// Stable ranks of `F2·F1`.
    pub right: TruncSeries,
    pub equal: bool,
}

/// Checks `T(f₁f₂) ≃ T(f₂f₁)` at the level of stable ranks.
pub fn verify_telescope_swap<F: Field>(
    f1: &GradedEndo<F>,
    f2: &GradedEndo<F>,
) -> Result<SwapReport, TelescopeError> {
    let left = telescope_dims(&f1.compose(f2)?);
    let right = telescope_dims(&f2.compose(f1)?);
    Ok(SwapReport {
        equal: left == right,
        left,
        right,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CircleReport {
    pub cap: usize,
    pub dimensions: TruncSeries,
    /// Rendered unit `u` with `(E₁E₂)² = u·E₁E₂`, if one exists.
    pub quasi_idempotent_unit: Option<String>,
    pub telescope: TruncSeries,
    pub complement: TruncSeries,
    pub expected_circle: TruncSeries,
    pub expected_complement: TruncSeries,
    pub pass: bool,
}

/// Lengths of the nonempty words over generators of the given degrees,
/// grouped by total degree `0..=cap`; one entry per word.
fn word_lengths_by_degree(gen_degrees: &[usize], cap: usize) -> Vec<Vec<usize>> {
    let mut by_degree: Vec<Vec<usize>> = vec![Vec::new(); cap + 1];
    let mut stack: Vec<(usize, usize)> = gen_degrees
        .iter()
        .filter(|&&d| d <= cap)
        .map(|&d| (d, 1))
        .collect();
    while let Some((d, len)) = stack.pop() {
        for &gd in gen_degrees {
            if d + gd <= cap {
                stack.push((d + gd, len + 1));
            }
        }
        by_degree[d].push(len);
    }
    by_degree
}

fn cell_degrees(model: &SpaceModel, cap: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for d in 1..=cap {
        let count = usize::try_from(model.gens().coeff(d)).unwrap_or(0);
        out.extend(std::iter::repeat_n(d, count));
    }
    out
}

/// Realizes `X ∘ Y = T(e₁e₂)` for suspensions `X = ΣA`, `Y = ΣB`.
///
/// The basis of `H̃_*(S(ΩX ∧ ΩY))` through degree `cap` is the set of pairs
/// `(u, v)` of nonempty words in `H̃_*(A)` and `H̃_*(B)`, in degree
/// `|u| + |v| + 1`. On a suspension the evaluation `ΣΩX → X` kills
/// decomposable words, so `e₁` acts as the projection onto pairs with `u` a
/// single generator, and `e₂` as the projection onto pairs with `v` a single
/// generator followed by the coordinate flip of the suspension, which is `-1`
/// in homology. The composite `E₁E₂` is then `-P` for the projection `P`
/// onto pairs of generators.
pub fn circle_via_telescope<F: Field>(
    field: F,
    x: &SpaceModel,
    y: &SpaceModel,
    cap: usize,
) -> Result<CircleReport, TelescopeError> {
    for m in [x, y] {
        if !m.is_suspension() {
            return Err(TelescopeError::NotSuspension(m.name()));
        }
    }
    let trunc = x.trunc_degree().min(y.trunc_degree());
    if cap > trunc {
        return Err(TelescopeError::CapBeyondTruncation { cap, trunc });
    }
    let left_words = word_lengths_by_degree(&cell_degrees(x, cap), cap);
    let right_words = word_lengths_by_degree(&cell_degrees(y, cap), cap);

    // basis pairs (u, v), recorded by their word lengths
    let mut basis: Vec<Vec<(usize, usize)>> = vec![Vec::new(); cap + 1];
    for (a, us) in left_words.iter().enumerate() {
        for (b, vs) in right_words.iter().enumerate() {
            if a + b < cap {
                for &ul in us {
                    for &vl in vs {
                        basis[a + b + 1].push((ul, vl));
                    }
                }
            }
        }
    }
    let diagonal = |keep: &dyn Fn(&(usize, usize)) -> bool, value: F::Elem| -> GradedEndo<F> {
        let blocks = basis
            .iter()
            .map(|pairs| {
                let mut m = Matrix::zeros(&field, pairs.len(), pairs.len());
                for (i, p) in pairs.iter().enumerate() {
                    if keep(p) {
                        m.set(i, i, value.clone());
                    }
                }
                m
            })
            .collect();
        GradedEndo::new(field.clone(), blocks).expect("square blocks")
    };
    let e1 = diagonal(&|p| p.0 == 1, field.one());
    let e2 = diagonal(&|p| p.1 == 1, field.from_i64(-1));
    let e = e1.compose(&e2)?;

    let unit = is_quasi_idempotent(&e);
    let telescope = telescope_dims(&e);
    let complement = telescope_dims(&e.one_plus());
    let expected_circle = circle(x, y).red().truncate(cap);
    let total = join_loops(x, y).truncate(cap);
    let expected_complement = &total - &expected_circle;
    let pass = unit.as_ref() == Some(&field.from_i64(-1))
        && telescope == expected_circle
        && complement == expected_complement
        && e.dim_series() == total;
    Ok(CircleReport {
        cap,
        dimensions: e.dim_series(),
        quasi_idempotent_unit: unit.map(|u| field.render(&u)),
        telescope,
        complement,
        expected_circle,
        expected_complement,
        pass,
    })
}
