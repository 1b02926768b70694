//! Loop-space homology as an explicit free associative algebra.
//!
//! `H_*(ΩG)` for a co-H space `G` is the tensor algebra on the desuspended
//! homology of `G`. This module realizes that algebra over a prime field or
//! the rationals with explicit monomial bases, evaluates iterated graded
//! commutators, and decides spanning statements by Gaussian elimination. It
//! is deliberately brute force: it shares no code path with the series
//! calculus it is used to check.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use serde::Serialize;

use crate::homology_models::{ProductExpr, ProductShape, SpaceModel};
use crate::lie_kernel::{kernel_generators, GeneratorSeries};
use crate::linalg::{Field, Matrix};
use crate::series::serialize_bigint;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("degree {degree} exceeds the algebra's degree cap {cap}")]
    CapExceeded { degree: usize, cap: usize },
    #[error("generator {0:?} has degree 0; generators must have degree >= 1")]
    ZeroDegreeGenerator(String),
    #[error("no generator is labelled {0:?}")]
    UnknownLeaf(String),
    #[error("element of degree {found} where degree {expected} was required")]
    WrongDegree { expected: usize, found: usize },
    #[error("degree cap {cap} exceeds the models' truncation degree {trunc}")]
    CapBeyondTruncation { cap: usize, trunc: usize },
}

/// A word in the generators, compared length-first and then lexicographically
/// on generator indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word(Vec<u16>);

impl Word {
    pub fn letters(&self) -> &[u16] {
        &self.0
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub degree: usize,
}

/// A homogeneous element: a sparse combination of words of one total degree.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgElement<E> {
    degree: usize,
    terms: BTreeMap<Word, E>,
}

impl<E> AlgElement<E> {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &E)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// The free associative algebra `T(V)` on graded generators, truncated at a
/// degree cap.
#[derive(Debug, Clone)]
pub struct FreeAlgebra<F: Field> {
    field: F,
    generators: Vec<Generator>,
    degree_cap: usize,
}

impl<F: Field> FreeAlgebra<F> {
    pub fn new(
        field: F,
        generators: Vec<Generator>,
        degree_cap: usize,
    ) -> Result<Self, OracleError> {
        if let Some(g) = generators.iter().find(|g| g.degree == 0) {
            return Err(OracleError::ZeroDegreeGenerator(g.label.clone()));
        }
        Ok(FreeAlgebra {
            field,
            generators,
            degree_cap,
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    fn word_degree(&self, w: &[u16]) -> usize {
        w.iter().map(|&i| self.generators[i as usize].degree).sum()
    }

    pub fn zero(&self, degree: usize) -> AlgElement<F::Elem> {
        AlgElement {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> AlgElement<F::Elem> {
        self.monomial(&[])
    }

    pub fn generator(&self, index: usize) -> AlgElement<F::Elem> {
        self.monomial(&[index as u16])
    }

    pub fn generator_by_label(&self, label: &str) -> Option<AlgElement<F::Elem>> {
        self.generators
            .iter()
            .position(|g| g.label == label)
            .map(|i| self.generator(i))
    }

    /// The word with coefficient 1.
    pub fn monomial(&self, letters: &[u16]) -> AlgElement<F::Elem> {
        let mut terms = BTreeMap::new();
        terms.insert(Word(letters.to_vec()), self.field.one());
        AlgElement {
            degree: self.word_degree(letters),
            terms,
        }
    }

    fn accumulate(&self, terms: &mut BTreeMap<Word, F::Elem>, w: Word, c: F::Elem) {
        match terms.get_mut(&w) {
            Some(v) => {
                *v = self.field.add(v, &c);
                if self.field.is_zero(v) {
                    terms.remove(&w);
                }
            }
            None if !self.field.is_zero(&c) => {
                terms.insert(w, c);
            }
            None => {}
        }
    }

    pub fn add(
        &self,
        a: &AlgElement<F::Elem>,
        b: &AlgElement<F::Elem>,
    ) -> Result<AlgElement<F::Elem>, OracleError> {
        if a.degree != b.degree && !a.is_zero() && !b.is_zero() {
            return Err(OracleError::WrongDegree {
                expected: a.degree,
                found: b.degree,
            });
        }
        let degree = if a.is_zero() { b.degree } else { a.degree };
        let mut terms = a.terms.clone();
        for (w, c) in &b.terms {
            self.accumulate(&mut terms, w.clone(), c.clone());
        }
        Ok(AlgElement { degree, terms })
    }

    pub fn scale(&self, a: &AlgElement<F::Elem>, c: &F::Elem) -> AlgElement<F::Elem> {
        if self.field.is_zero(c) {
            return self.zero(a.degree);
        }
        AlgElement {
            degree: a.degree,
            terms: a
                .terms
                .iter()
                .map(|(w, x)| (w.clone(), self.field.mul(x, c)))
                .collect(),
        }
    }

    /// Concatenation product.
    pub fn multiply(
        &self,
        a: &AlgElement<F::Elem>,
        b: &AlgElement<F::Elem>,
    ) -> Result<AlgElement<F::Elem>, OracleError> {
        let degree = a.degree + b.degree;
        if degree > self.degree_cap {
            return Err(OracleError::CapExceeded {
                degree,
                cap: self.degree_cap,
            });
        }
        let mut terms = BTreeMap::new();
        for (u, x) in &a.terms {
            for (v, y) in &b.terms {
                let mut w = Vec::with_capacity(u.0.len() + v.0.len());
                w.extend_from_slice(&u.0);
                w.extend_from_slice(&v.0);
                self.accumulate(&mut terms, Word(w), self.field.mul(x, y));
            }
        }
        Ok(AlgElement { degree, terms })
    }

    /// Graded commutator `[a, b] = ab - (-1)^{|a||b|} ba`.
    pub fn commutator(
        &self,
        a: &AlgElement<F::Elem>,
        b: &AlgElement<F::Elem>,
    ) -> Result<AlgElement<F::Elem>, OracleError> {
        let ab = self.multiply(a, b)?;
        let ba = self.multiply(b, a)?;
        let sign = if a.degree * b.degree % 2 == 0 {
            self.field.from_i64(-1)
        } else {
            self.field.one()
        };
        self.add(&ab, &self.scale(&ba, &sign))
    }

    /// Evaluates an iterated Theriault product as the corresponding iterated
    /// commutator, each leaf standing for the generator with the same label.
    pub fn eval_ad_word(&self, word: &ProductExpr) -> Result<AlgElement<F::Elem>, OracleError> {
        match word.shape() {
            ProductShape::Leaf(m) => {
                let label = m.name();
                self.generator_by_label(&label)
                    .ok_or(OracleError::UnknownLeaf(label))
            }
            ProductShape::Circle(a, b) => {
                let a = self.eval_ad_word(&a)?;
                let b = self.eval_ad_word(&b)?;
                self.commutator(&a, &b)
            }
        }
    }

    /// All words of total degree `degree`, in length-lexicographic order.
    pub fn basis(&self, degree: usize) -> Vec<Word> {
        let mut by_degree: Vec<Vec<Vec<u16>>> = vec![vec![Vec::new()]];
        for n in 1..=degree {
            let mut words = Vec::new();
            for (i, g) in self.generators.iter().enumerate() {
                if g.degree <= n {
                    for tail in &by_degree[n - g.degree] {
                        let mut w = Vec::with_capacity(tail.len() + 1);
                        w.push(i as u16);
                        w.extend_from_slice(tail);
                        words.push(w);
                    }
                }
            }
            by_degree.push(words);
        }
        let mut out: Vec<Word> = by_degree
            .pop()
            .unwrap_or_default()
            .into_iter()
            .map(Word)
            .collect();
        out.sort();
        out
    }

    /// `dim T(V)_degree`.
    pub fn dim(&self, degree: usize) -> usize {
        self.basis(degree).len()
    }

    fn coordinate_matrix(
        &self,
        elems: &[AlgElement<F::Elem>],
        degree: usize,
    ) -> Result<(Matrix<F>, Vec<Word>), OracleError> {
        let basis = self.basis(degree);
        let index: HashMap<&Word, usize> = basis.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut m = Matrix::zeros(&self.field, elems.len(), basis.len());
        for (r, e) in elems.iter().enumerate() {
            if e.degree != degree && !e.is_zero() {
                return Err(OracleError::WrongDegree {
                    expected: degree,
                    found: e.degree,
                });
            }
            for (w, c) in &e.terms {
                m.set(r, index[w], c.clone());
            }
        }
        Ok((m, basis))
    }

    /// Dimension of the span of homogeneous elements of the given degree.
    pub fn rank_of_span(
        &self,
        elems: &[AlgElement<F::Elem>],
        degree: usize,
    ) -> Result<usize, OracleError> {
        let (m, _) = self.coordinate_matrix(elems, degree)?;
        Ok(m.rank(&self.field))
    }

    /// A basis of the span, as the nonzero rows of the reduced echelon form.
    pub fn span_basis(
        &self,
        elems: &[AlgElement<F::Elem>],
        degree: usize,
    ) -> Result<Vec<AlgElement<F::Elem>>, OracleError> {
        let (mut m, basis) = self.coordinate_matrix(elems, degree)?;
        let rank = m.row_reduce(&self.field);
        Ok((0..rank)
            .map(|r| {
                let mut terms = BTreeMap::new();
                for (j, w) in basis.iter().enumerate() {
                    let c = m.get(r, j);
                    if !self.field.is_zero(c) {
                        terms.insert(w.clone(), c.clone());
                    }
                }
                AlgElement { degree, terms }
            })
            .collect())
    }

    /// Degreewise dimensions of the Lie subalgebra generated by the
    /// generators under the graded commutator, for degrees `1..=up_to`.
    ///
    /// Index 0 of the result is always 0.
    pub fn lie_span_dims(&self, up_to: usize) -> Result<Vec<usize>, OracleError> {
        let mut lie: Vec<Vec<AlgElement<F::Elem>>> = vec![Vec::new()];
        for n in 1..=up_to {
            let mut candidates: Vec<AlgElement<F::Elem>> = (0..self.generators.len())
                .filter(|&i| self.generators[i].degree == n)
                .map(|i| self.generator(i))
                .collect();
            for i in 1..n {
                for a in &lie[i] {
                    for b in &lie[n - i] {
                        candidates.push(self.commutator(a, b)?);
                    }
                }
            }
            lie.push(self.span_basis(&candidates, n)?);
        }
        Ok(lie.iter().map(Vec::len).collect())
    }
}

/// Per-degree result of the spanning check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeCheck {
    pub degree: usize,
    /// `dim T(V)_n`.
    pub dimension: usize,
    /// Number of product labels (bracket-word monomial × H-monomial).
    pub count: usize,
    /// Rank of the evaluated products.
    pub rank: usize,
    /// Coefficient of `[1/(1 - g/(1 - h))]·[1/(1 - h)]`.
    #[serde(serialize_with = "serialize_bigint")]
    pub series_count: BigInt,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PbwReport {
    pub field: String,
    pub cap: usize,
    pub generators: Vec<(String, usize)>,
    /// The bracket words `[...[x, y_1], ..., y_n]` used as kernel generators.
    pub bracket_words: Vec<String>,
    pub degrees: Vec<DegreeCheck>,
    pub pass: bool,
}

/// One generator per cell: `prefix1, prefix2, ...` in increasing degree.
fn cell_generators(model: &SpaceModel, prefix: &str, cap: usize) -> Vec<Generator> {
    let mut out = Vec::new();
    for d in 1..=cap {
        let count = usize::try_from(model.gens().coeff(d)).unwrap_or(0);
        for _ in 0..count {
            out.push(Generator {
                label: format!("{prefix}{}", out.len() + 1),
                degree: d,
            });
        }
    }
    out
}

fn generator_leaf(g: &Generator, trunc: usize) -> ProductExpr {
    let sphere = SpaceModel::from_spheres(&[g.degree as i64 + 1], trunc).expect("degree >= 2");
    ProductExpr::leaf(&sphere.renamed(&g.label))
}

/// Checks that `T(V)`, `V = G_* ⊕ H_*` desuspended, is spanned by products of
/// bracket words `ad^n(y...)(x)` followed by monomials in the `H` generators,
/// and that the number of such products equals `dim T(V)_n` in each degree
/// `1..=cap`. Each cell of `G` and `H` contributes one generator.
pub fn check_pbw_surjectivity<F: Field>(
    field: F,
    g: &SpaceModel,
    h: &SpaceModel,
    cap: usize,
) -> Result<PbwReport, OracleError> {
    let trunc = g.trunc_degree().min(h.trunc_degree());
    if cap > trunc {
        return Err(OracleError::CapBeyondTruncation { cap, trunc });
    }
    let xs = cell_generators(g, "x", cap);
    let ys = cell_generators(h, "y", cap);
    let mut generators = xs.clone();
    generators.extend(ys.iter().cloned());
    let algebra = FreeAlgebra::new(field, generators.clone(), cap)?;
    let y_offset = xs.len();

    // bracket words, grouped by degree
    let y_leaves: Vec<(usize, ProductExpr)> = ys
        .iter()
        .map(|y| (y.degree, generator_leaf(y, trunc)))
        .collect();
    let mut words: Vec<(usize, ProductExpr)> = Vec::new();
    let mut frontier: Vec<(usize, ProductExpr)> = xs
        .iter()
        .map(|x| (x.degree, generator_leaf(x, trunc)))
        .collect();
    while let Some((d, w)) = frontier.pop() {
        for (yd, y) in &y_leaves {
            if d + yd <= cap {
                frontier.push((d + yd, w.circle(y)));
            }
        }
        words.push((d, w));
    }
    words.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.label().cmp(b.1.label())));
    let mut word_values = Vec::with_capacity(words.len());
    for (d, w) in &words {
        word_values.push((*d, algebra.eval_ad_word(w)?));
    }

    // monomials in bracket words, and in the y generators, by degree
    let mut w_monomials: Vec<Vec<AlgElement<F::Elem>>> = vec![vec![algebra.one()]];
    let mut y_monomials: Vec<Vec<AlgElement<F::Elem>>> = vec![vec![algebra.one()]];
    for n in 1..=cap {
        let mut ws = Vec::new();
        for (d, v) in &word_values {
            if *d <= n {
                for tail in &w_monomials[n - d] {
                    ws.push(algebra.multiply(v, tail)?);
                }
            }
        }
        w_monomials.push(ws);
        let mut yv = Vec::new();
        for (i, y) in ys.iter().enumerate() {
            if y.degree <= n {
                let gen = algebra.generator(y_offset + i);
                for tail in &y_monomials[n - y.degree] {
                    yv.push(algebra.multiply(&gen, tail)?);
                }
            }
        }
        y_monomials.push(yv);
    }

    let expected = {
        let gs = GeneratorSeries::new(g.gens().truncate(cap)).expect("valid generator series");
        let hs = GeneratorSeries::new(h.gens().truncate(cap)).expect("valid generator series");
        let (kernel, _) = kernel_generators(&gs, &hs);
        &kernel.geom_inverse().expect("zero constant term")
            * &hs.dims().geom_inverse().expect("zero constant term")
    };

    let mut degrees = Vec::with_capacity(cap);
    for n in 1..=cap {
        let mut products = Vec::new();
        for a in 0..=n {
            for m in &w_monomials[a] {
                for y in &y_monomials[n - a] {
                    products.push(algebra.multiply(m, y)?);
                }
            }
        }
        let dimension = algebra.dim(n);
        let rank = algebra.rank_of_span(&products, n)?;
        let count = products.len();
        let series_count = expected.coeff(n);
        degrees.push(DegreeCheck {
            degree: n,
            dimension,
            count,
            rank,
            pass: count == dimension && rank == dimension && series_count == BigInt::from(count),
            series_count,
        });
    }
    Ok(PbwReport {
        field: algebra.field().name(),
        cap,
        generators: generators
            .iter()
            .map(|g| (g.label.clone(), g.degree))
            .collect(),
        bracket_words: words.iter().map(|(_, w)| w.label().to_string()).collect(),
        pass: degrees.iter().all(|d| d.pass),
        degrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{PrimeField, Rationals};
    use proptest::prelude::*;

    fn f101() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    fn gens(degrees: &[usize]) -> Vec<Generator> {
        degrees
            .iter()
            .enumerate()
            .map(|(i, &d)| Generator {
                label: ["x", "y", "z", "w"][i].to_string(),
                degree: d,
            })
            .collect()
    }

    fn elem<F: Field>(alg: &FreeAlgebra<F>, terms: &[(i64, &[u16])]) -> AlgElement<F::Elem> {
        terms
            .iter()
            .fold(alg.zero(alg.word_degree(terms[0].1)), |acc, (c, w)| {
                let m = alg.scale(&alg.monomial(w), &alg.field().from_i64(*c));
                alg.add(&acc, &m).unwrap()
            })
    }

    #[test]
    fn word_order_is_length_lex() {
        let alg = FreeAlgebra::new(Rationals, gens(&[1, 2]), 6).unwrap();
        let b = alg.basis(3);
        let letters: Vec<&[u16]> = b.iter().map(Word::letters).collect();
        assert_eq!(letters, vec![&[0, 1][..], &[1, 0], &[0, 0, 0]]);
        assert_eq!(alg.dim(0), 1);
    }

    #[test]
    fn multiply_examples() {
        let alg = FreeAlgebra::new(f101(), gens(&[1, 1]), 4).unwrap();
        let (x, y) = (alg.generator(0), alg.generator(1));
        assert_eq!(alg.multiply(&x, &y).unwrap(), alg.monomial(&[0, 1]));
        assert_eq!(alg.multiply(&x, &alg.one()).unwrap(), x);
        let xy = alg.add(&x, &y).unwrap();
        assert_eq!(
            alg.multiply(&xy, &x).unwrap(),
            elem(&alg, &[(1, &[0, 0]), (1, &[1, 0])])
        );
        let x4 = alg.monomial(&[0, 0, 0, 0]);
        assert_eq!(
            alg.multiply(&x4, &x),
            Err(OracleError::CapExceeded { degree: 5, cap: 4 })
        );
    }

    #[test]
    fn commutator_examples() {
        let alg = FreeAlgebra::new(f101(), gens(&[1, 1, 2]), 4).unwrap();
        let (x, y, z) = (alg.generator(0), alg.generator(1), alg.generator(2));
        assert_eq!(
            alg.commutator(&x, &y).unwrap(),
            elem(&alg, &[(1, &[0, 1]), (1, &[1, 0])])
        );
        assert_eq!(
            alg.commutator(&x, &z).unwrap(),
            elem(&alg, &[(1, &[0, 2]), (-1, &[2, 0])])
        );
        assert_eq!(alg.commutator(&x, &x).unwrap(), elem(&alg, &[(2, &[0, 0])]));
        assert!(alg.commutator(&z, &z).unwrap().is_zero());
    }

    #[test]
    fn eval_ad_word_examples() {
        let alg = FreeAlgebra::new(f101(), gens(&[1, 1]), 6).unwrap();
        let x = generator_leaf(&alg.generators()[0], 8);
        let y = generator_leaf(&alg.generators()[1], 8);
        assert_eq!(alg.eval_ad_word(&x).unwrap(), alg.generator(0));
        assert_eq!(
            alg.eval_ad_word(&x.ad(&y, 1)).unwrap(),
            elem(&alg, &[(1, &[0, 1]), (1, &[1, 0])])
        );
        // [xy + yx, y] = xyy - yyx
        assert_eq!(
            alg.eval_ad_word(&x.ad(&y, 2)).unwrap(),
            elem(&alg, &[(1, &[0, 1, 1]), (-1, &[1, 1, 0])])
        );
        let stranger = ProductExpr::leaf(&SpaceModel::from_spheres(&[2], 8).unwrap().renamed("q"));
        assert_eq!(
            alg.eval_ad_word(&stranger),
            Err(OracleError::UnknownLeaf("q".into()))
        );
    }

    #[test]
    fn rank_examples() {
        let alg = FreeAlgebra::new(f101(), gens(&[1, 1]), 4).unwrap();
        let x = alg.generator(0);
        assert_eq!(alg.rank_of_span(&[x.clone(), x.clone()], 1).unwrap(), 1);
        assert_eq!(alg.rank_of_span(&[], 1).unwrap(), 0);
        let plus = elem(&alg, &[(1, &[0, 1]), (1, &[1, 0])]);
        let minus = elem(&alg, &[(1, &[0, 1]), (-1, &[1, 0])]);
        assert_eq!(
            alg.rank_of_span(&[plus.clone(), minus.clone()], 2).unwrap(),
            2
        );
        // characteristic 2 collapses them
        let f2 = FreeAlgebra::new(PrimeField::new(2).unwrap(), gens(&[1, 1]), 4).unwrap();
        let plus = elem(&f2, &[(1, &[0, 1]), (1, &[1, 0])]);
        let minus = elem(&f2, &[(1, &[0, 1]), (-1, &[1, 0])]);
        assert_eq!(f2.rank_of_span(&[plus, minus], 2).unwrap(), 1);
        assert!(matches!(
            alg.rank_of_span(&[x], 2),
            Err(OracleError::WrongDegree { .. })
        ));
    }

    #[test]
    fn pbw_check_two_spheres_degree_two() {
        let s2 = SpaceModel::from_spheres(&[2], 8).unwrap();
        let r = check_pbw_surjectivity(f101(), &s2, &s2, 2).unwrap();
        assert!(r.pass);
        assert_eq!(r.degrees[1].dimension, 4);
        assert_eq!(r.degrees[1].count, 4);
        assert_eq!(r.degrees[1].rank, 4);
        assert_eq!(r.bracket_words, vec!["x1", "(x1∘y1)"]);
    }

    #[test]
    fn pbw_check_contractible_h() {
        let g = SpaceModel::from_spheres(&[2, 3], 8).unwrap();
        let pt = SpaceModel::contractible(8);
        let r = check_pbw_surjectivity(f101(), &g, &pt, 6).unwrap();
        assert!(r.pass);
        assert_eq!(r.bracket_words, vec!["x1", "x2"]);
    }

    #[test]
    fn pbw_check_rejects_cap_beyond_truncation() {
        let s2 = SpaceModel::from_spheres(&[2], 4).unwrap();
        assert_eq!(
            check_pbw_surjectivity(f101(), &s2, &s2, 5),
            Err(OracleError::CapBeyondTruncation { cap: 5, trunc: 4 })
        );
    }

    #[test]
    fn lie_span_of_two_odd_generators() {
        let alg = FreeAlgebra::new(Rationals, gens(&[1, 1]), 4).unwrap();
        assert_eq!(alg.lie_span_dims(4).unwrap(), vec![0, 2, 3, 2, 3]);
    }

    fn build(alg: &FreeAlgebra<PrimeField>, degree: usize, coeffs: &[i64]) -> AlgElement<u64> {
        alg.basis(degree)
            .iter()
            .zip(coeffs)
            .fold(alg.zero(degree), |acc, (w, c)| {
                let m = alg.scale(&alg.monomial(w.letters()), &alg.field().from_i64(*c));
                alg.add(&acc, &m).unwrap()
            })
    }

    proptest! {
        #[test]
        fn graded_antisymmetry_and_jacobi(
            da in 1usize..=3,
            db in 1usize..=3,
            dc in 1usize..=3,
            ca in proptest::collection::vec(-3i64..=3, 3),
            cb in proptest::collection::vec(-3i64..=3, 3),
            cc in proptest::collection::vec(-3i64..=3, 3),
        ) {
            let alg = FreeAlgebra::new(f101(), gens(&[1, 2]), 9).unwrap();
            let (a, b, c) = (build(&alg, da, &ca), build(&alg, db, &cb), build(&alg, dc, &cc));
            let f = alg.field();
            let sign = |n: usize| if n.is_multiple_of(2) { f.one() } else { f.from_i64(-1) };

            let ab = alg.commutator(&a, &b).unwrap();
            let ba = alg.commutator(&b, &a).unwrap();
            prop_assert_eq!(ab.clone(), alg.scale(&ba, &f.neg(&sign(da * db))));

            let t1 = alg.scale(&alg.commutator(&a, &alg.commutator(&b, &c).unwrap()).unwrap(), &sign(da * dc));
            let t2 = alg.scale(&alg.commutator(&b, &alg.commutator(&c, &a).unwrap()).unwrap(), &sign(db * da));
            let t3 = alg.scale(&alg.commutator(&c, &ab).unwrap(), &sign(dc * db));
            let sum = alg.add(&alg.add(&t1, &t2).unwrap(), &t3).unwrap();
            prop_assert!(sum.is_zero());
        }

        #[test]
        fn rank_never_exceeds_dimension(degree in 1usize..5, n in 0usize..12, seed in any::<u64>()) {
            let alg = FreeAlgebra::new(f101(), gens(&[1, 1, 2]), 6).unwrap();
            let mut rng = seed;
            let elems: Vec<_> = (0..n).map(|_| {
                alg.basis(degree).iter().fold(alg.zero(degree), |acc, w| {
                    rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    let c = alg.field().from_i64((rng >> 33) as i64 % 5);
                    alg.add(&acc, &alg.scale(&alg.monomial(w.letters()), &c)).unwrap()
                })
            }).collect();
            prop_assert!(alg.rank_of_span(&elems, degree).unwrap() <= alg.dim(degree));
        }
    }
}
