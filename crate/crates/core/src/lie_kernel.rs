//! Hilbert-series bookkeeping for free graded Lie algebras.
//!
//! Two pieces: the kernel of `L(V ⊕ W) → L(W)`, which is free on the iterated
//! brackets `ad^n(W)(V)`, and the extraction of free Lie algebra dimensions from
//! the tensor-algebra series `1 / (1 - a)` by inverting the
//! Poincaré–Birkhoff–Witt product.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::series::{SeriesError, TruncSeries};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("generator series must have a zero constant term")]
    NonZeroConstant,
    #[error("generator series has a negative coefficient in degree {0}")]
    Negative(usize),
    #[error("extraction gave dimension {value} in degree {degree}; the input is inconsistent with the {convention:?} convention")]
    NegativeDimension {
        degree: usize,
        value: BigInt,
        convention: PbwConvention,
    },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// How odd-degree Lie elements enter the enveloping-algebra series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PbwConvention {
    /// Characteristic-zero graded Lie algebra: odd elements contribute
    /// exterior factors `1 + t^n`, even ones polynomial factors `1/(1 - t^n)`.
    #[default]
    SignGraded,
    /// Every element contributes `1/(1 - t^n)` (ungraded Witt counting).
    DimensionOnly,
}

/// Dimensions of a graded vector space of Lie generators, degrees `>= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSeries {
    dims: TruncSeries,
    convention: PbwConvention,
}

impl GeneratorSeries {
    pub fn new(dims: TruncSeries) -> Result<Self, LieError> {
        Self::with_convention(dims, PbwConvention::SignGraded)
    }

    pub fn with_convention(dims: TruncSeries, convention: PbwConvention) -> Result<Self, LieError> {
        if !dims.coeff(0).is_zero() {
            return Err(LieError::NonZeroConstant);
        }
        if let Some(n) = dims.coeffs().iter().position(Signed::is_negative) {
            return Err(LieError::Negative(n));
        }
        Ok(GeneratorSeries { dims, convention })
    }

    pub fn dims(&self) -> &TruncSeries {
        &self.dims
    }

    pub fn convention(&self) -> PbwConvention {
        self.convention
    }
}

/// Generators `ad^n(H_*)(G_*)` of the kernel of `L(G_* ⊕ H_*) → L(H_*)`,
/// with total series `g / (1 - h)`. Only the `n` whose summand is nonzero
/// below the truncation are labelled.
pub fn kernel_generators(g: &GeneratorSeries, h: &GeneratorSeries) -> (TruncSeries, Vec<String>) {
    let mut total = TruncSeries::zero(g.dims.degree());
    let mut labels = Vec::new();
    let mut term = g.dims.clone();
    let mut n = 0;
    while !term.is_zero() {
        total = &total + &term;
        labels.push(format!("ad^{n}(H_*)(G_*)"));
        if h.dims.is_zero() {
            break;
        }
        term = &term * &h.dims;
        n += 1;
    }
    (total, labels)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelReport {
    /// `1 / (1 - (g + h))`, the tensor algebra on both generator sets.
    pub left: TruncSeries,
    /// `1 / (1 - g/(1 - h)) · 1 / (1 - h)`.
    pub right: TruncSeries,
    pub kernel_series: TruncSeries,
    pub labels: Vec<String>,
    pub equal: bool,
}

/// Checks that the tensor algebra on `g + h` factors as the tensor algebra on
/// the kernel generators times the tensor algebra on `h`.
pub fn check_kernel_identity(g: &GeneratorSeries, h: &GeneratorSeries) -> KernelReport {
    let left = (&g.dims + &h.dims)
        .geom_inverse()
        .expect("zero constant term");
    let (kernel_series, labels) = kernel_generators(g, h);
    let right = &kernel_series.geom_inverse().expect("zero constant term")
        * &h.dims.geom_inverse().expect("zero constant term");
    KernelReport {
        equal: left == right,
        left,
        right,
        kernel_series,
        labels,
    }
}

/// `C(n, k)` for a big `n` and small `k`.
fn binomial(n: &BigInt, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - BigInt::from(i);
        acc = acc.div_floor(&BigInt::from(i + 1));
    }
    acc
}

/// Series of the PBW factor for `count` basis elements in degree `n`.
fn pbw_factor(degree: usize, n: usize, count: &BigInt, convention: PbwConvention) -> TruncSeries {
    let odd = convention == PbwConvention::SignGraded && n % 2 == 1;
    let terms = (0..=degree / n).map(|k| {
        let c = if odd {
            // (1 + t^n)^count
            binomial(count, k)
        } else {
            // (1 - t^n)^(-count)
            binomial(&(count + BigInt::from(k) - BigInt::one()), k)
        };
        (n * k, c)
    });
    TruncSeries::from_terms(degree, terms)
}

/// Recomposes the enveloping-algebra series from Lie dimensions `d_n`.
pub fn pbw_series(lie_dims: &TruncSeries, convention: PbwConvention) -> TruncSeries {
    let degree = lie_dims.degree();
    (1..=degree)
        .filter(|&n| !lie_dims.coeff(n).is_zero())
        .fold(TruncSeries::one(degree), |acc, n| {
            &acc * &pbw_factor(degree, n, &lie_dims.coeff(n), convention)
        })
}

/// Dimensions `d_n` of the free graded Lie algebra on generators `a`, read off
/// degree by degree from `1 / (1 - a) = PBW(d)`.
pub fn free_lie_dims(a: &GeneratorSeries) -> Result<TruncSeries, LieError> {
    lie_dims_from_enveloping(&a.dims.geom_inverse()?, a.convention)
}

/// Inverts the PBW product: finds `d_n` with `PBW(d) = enveloping`.
pub fn lie_dims_from_enveloping(
    enveloping: &TruncSeries,
    convention: PbwConvention,
) -> Result<TruncSeries, LieError> {
    let degree = enveloping.degree();
    let mut dims = TruncSeries::zero(degree);
    let mut running = TruncSeries::one(degree);
    for n in 1..=degree {
        // factors for degrees > n do not touch t^n, and each new factor in
        // degree n contributes exactly d_n to t^n
        let d = enveloping.coeff(n) - running.coeff(n);
        if d.is_negative() {
            return Err(LieError::NegativeDimension {
                degree: n,
                value: d,
                convention,
            });
        }
        if !d.is_zero() {
            running = &running * &pbw_factor(degree, n, &d, convention);
            dims = &dims + &TruncSeries::from_terms(degree, [(n, d)]);
        }
    }
    Ok(dims)
}
