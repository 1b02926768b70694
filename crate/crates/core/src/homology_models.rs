//! Simply connected co-H spaces modelled by their graded homology dimensions.
//!
//! A [`SpaceModel`] stores the *generator series* of a space `G`: the reduced
//! homology dimensions shifted down by one, `g = red(G) / t`. Loop-space
//! homology is the tensor algebra on these generators, so `g` is the natural
//! coordinate for every functor here, and keeping it (rather than `red`) lets a
//! model with truncation degree `D` know `red(G)` through `D + 1`. That extra
//! degree is what makes desuspension-type operations (the circle product)
//! exact through `D`.
//!
//! In generator-series coordinates:
//!
//! | construction      | generator series            |
//! |-------------------|-----------------------------|
//! | `S^n`             | `t^(n-1)`                   |
//! | `G ∨ H`           | `g + h`                     |
//! | `S G`             | `t g`                       |
//! | `G ∧ H`           | `t g h`                     |
//! | `G × H`           | `g + h + t g h`             |
//! | `G ∘ H`           | `g h`                       |
//! | `ad^n(H)(G)`      | `g h^n`                     |
//! | `H_*(Ω G)`        | `1 / (1 - g)`               |

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::series::{serialize_bigint, SeriesError, TruncSeries};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("not simply connected: homology in degree {0}")]
    NotSimplyConnected(i64),
    #[error("space is contractible through degree {0}; connectivity is undefined")]
    Contractible(usize),
    #[error("invalid space document: {0}")]
    InvalidDocument(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// How a model was built. Used for labels and for deciding whether a model is
/// known to be a suspension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceExpr {
    Spheres(Vec<u32>),
    Named { name: String, suspension: bool },
    Suspension(Box<SpaceExpr>),
    Wedge(Box<SpaceExpr>, Box<SpaceExpr>),
    Smash(Box<SpaceExpr>, Box<SpaceExpr>),
    Product(Box<SpaceExpr>, Box<SpaceExpr>),
    Circle(Box<SpaceExpr>, Box<SpaceExpr>),
}

impl SpaceExpr {
    /// Whether the expression is a suspension up to homotopy.
    ///
    /// `SA ∘ SB ≃ A ∧ SB` is again a suspension, so circle products of
    /// suspensions count.
    pub fn is_suspension(&self) -> bool {
        match self {
            SpaceExpr::Spheres(_) | SpaceExpr::Suspension(_) => true,
            SpaceExpr::Named { suspension, .. } => *suspension,
            SpaceExpr::Wedge(a, b) | SpaceExpr::Circle(a, b) => {
                a.is_suspension() && b.is_suspension()
            }
            SpaceExpr::Smash(a, b) => a.is_suspension() || b.is_suspension(),
            SpaceExpr::Product(..) => false,
        }
    }
}

impl fmt::Display for SpaceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceExpr::Spheres(d) if d.is_empty() => f.write_str("*"),
            SpaceExpr::Spheres(d) => {
                let parts: Vec<String> = d.iter().map(|n| format!("S^{n}")).collect();
                if parts.len() == 1 {
                    f.write_str(&parts[0])
                } else {
                    write!(f, "({})", parts.join(" ∨ "))
                }
            }
            SpaceExpr::Named { name, .. } => f.write_str(name),
            SpaceExpr::Suspension(a) => write!(f, "S{a}"),
            SpaceExpr::Wedge(a, b) => write!(f, "({a} ∨ {b})"),
            SpaceExpr::Smash(a, b) => write!(f, "({a} ∧ {b})"),
            SpaceExpr::Product(a, b) => write!(f, "({a} × {b})"),
            SpaceExpr::Circle(a, b) => write!(f, "({a}∘{b})"),
        }
    }
}

/// A simply connected co-H space, known through its homology dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceModel {
    expr: SpaceExpr,
    gens: TruncSeries,
}

impl SpaceModel {
    /// Builds a model from a generator series. The constant term must vanish
    /// (that is, no reduced homology in degree 1).
    pub fn from_generator_series(expr: SpaceExpr, gens: TruncSeries) -> Result<Self, ModelError> {
        if !gens.coeff(0).is_zero() {
            return Err(ModelError::NotSimplyConnected(1));
        }
        Ok(SpaceModel { expr, gens })
    }

    /// Wedge of spheres of the given dimensions; the empty list is a point.
    pub fn from_spheres(degrees: &[i64], trunc_degree: usize) -> Result<Self, ModelError> {
        let mut dims = Vec::with_capacity(degrees.len());
        for &n in degrees {
            if n < 2 {
                return Err(ModelError::NotSimplyConnected(n));
            }
            dims.push(u32::try_from(n).map_err(|_| {
                ModelError::InvalidDocument(format!("sphere degree {n} too large"))
            })?);
        }
        let gens = TruncSeries::from_terms(trunc_degree, dims.iter().map(|&n| (n as usize - 1, 1)));
        Ok(SpaceModel {
            expr: SpaceExpr::Spheres(dims),
            gens,
        })
    }

    /// Model with the given reduced ranks `degree -> rank`.
    pub fn from_reduced_dims(
        name: &str,
        dims: &BTreeMap<i64, u64>,
        suspension: bool,
        trunc_degree: usize,
    ) -> Result<Self, ModelError> {
        let mut gens = TruncSeries::zero(trunc_degree);
        for (&n, &rank) in dims {
            if rank == 0 {
                continue;
            }
            if n < 2 {
                return Err(ModelError::NotSimplyConnected(n));
            }
            gens = &gens + &TruncSeries::from_terms(trunc_degree, [(n as usize - 1, rank)]);
        }
        Ok(SpaceModel {
            expr: SpaceExpr::Named {
                name: name.to_string(),
                suspension,
            },
            gens,
        })
    }

    pub fn contractible(trunc_degree: usize) -> Self {
        SpaceModel {
            expr: SpaceExpr::Spheres(Vec::new()),
            gens: TruncSeries::zero(trunc_degree),
        }
    }

    /// Same homology, new display name.
    pub fn renamed(&self, name: &str) -> Self {
        SpaceModel {
            expr: SpaceExpr::Named {
                name: name.to_string(),
                suspension: self.expr.is_suspension(),
            },
            gens: self.gens.clone(),
        }
    }

    pub fn expr(&self) -> &SpaceExpr {
        &self.expr
    }

    pub fn name(&self) -> String {
        self.expr.to_string()
    }

    /// Loop-space generator series `red / t`.
    pub fn gens(&self) -> &TruncSeries {
        &self.gens
    }

    /// Reduced homology dimensions through `D`.
    pub fn red(&self) -> TruncSeries {
        self.gens.shift(1).expect("upward shift")
    }

    /// Poincaré series `1 + red`.
    pub fn poincare(&self) -> TruncSeries {
        &TruncSeries::one(self.trunc_degree()) + &self.red()
    }

    pub fn trunc_degree(&self) -> usize {
        self.gens.degree()
    }

    pub fn is_suspension(&self) -> bool {
        self.expr.is_suspension()
    }

    pub fn is_contractible(&self) -> bool {
        self.gens.is_zero()
    }

    /// Largest `n` with reduced homology vanishing through degree `n`.
    pub fn connectivity(&self) -> Result<usize, ModelError> {
        self.gens
            .valuation()
            .ok_or(ModelError::Contractible(self.trunc_degree()))
    }

    /// The same model re-truncated at another degree.
    pub fn truncate(&self, trunc_degree: usize) -> Self {
        SpaceModel {
            expr: self.expr.clone(),
            gens: self.gens.truncate(trunc_degree),
        }
    }
}

pub fn from_spheres(degrees: &[i64], trunc_degree: usize) -> Result<SpaceModel, ModelError> {
    SpaceModel::from_spheres(degrees, trunc_degree)
}

pub fn suspend(x: &SpaceModel) -> SpaceModel {
    SpaceModel {
        expr: SpaceExpr::Suspension(Box::new(x.expr.clone())),
        gens: x.gens.shift(1).expect("upward shift"),
    }
}

pub fn wedge(x: &SpaceModel, y: &SpaceModel) -> SpaceModel {
    SpaceModel {
        expr: SpaceExpr::Wedge(Box::new(x.expr.clone()), Box::new(y.expr.clone())),
        gens: &x.gens + &y.gens,
    }
}

pub fn smash(x: &SpaceModel, y: &SpaceModel) -> SpaceModel {
    SpaceModel {
        expr: SpaceExpr::Smash(Box::new(x.expr.clone()), Box::new(y.expr.clone())),
        gens: x.gens.mul_shifted(&y.gens, 1).expect("upward shift"),
    }
}

/// Cartesian product, by the field-coefficient Künneth formula.
pub fn product(x: &SpaceModel, y: &SpaceModel) -> SpaceModel {
    let cross = x.gens.mul_shifted(&y.gens, 1).expect("upward shift");
    SpaceModel {
        expr: SpaceExpr::Product(Box::new(x.expr.clone()), Box::new(y.expr.clone())),
        gens: &(&x.gens + &y.gens) + &cross,
    }
}

/// Theriault product `X ∘ Y`, with `S(X ∘ Y) ≃ X ∧ Y`.
pub fn circle(x: &SpaceModel, y: &SpaceModel) -> SpaceModel {
    SpaceModel {
        expr: SpaceExpr::Circle(Box::new(x.expr.clone()), Box::new(y.expr.clone())),
        gens: &x.gens * &y.gens,
    }
}

/// Poincaré series of `Ω X`: the tensor algebra `1 / (1 - g)`.
pub fn loops(x: &SpaceModel) -> TruncSeries {
    x.gens
        .geom_inverse()
        .expect("generator series has zero constant term")
}

/// Reduced series of the half-smash `X ⋊ Ω Y`.
pub fn half_smash(x: &SpaceModel, loops_of: &SpaceModel) -> TruncSeries {
    &x.red() * &loops(loops_of)
}

/// Reduced series of the join `Ω X * Ω Y ≃ S(Ω X ∧ Ω Y)`.
pub fn join_loops(x: &SpaceModel, y: &SpaceModel) -> TruncSeries {
    let one = TruncSeries::one(x.trunc_degree());
    let rx = &loops(x) - &one;
    let ry = &loops(y) - &one;
    rx.mul_shifted(&ry, 1).expect("upward shift")
}

pub fn connectivity(x: &SpaceModel) -> Result<usize, ModelError> {
    x.connectivity()
}

/// `ad^n(H)(G) = (...((G ∘ H) ∘ H) ... ) ∘ H`, nested to the left.
pub fn ad_power(h: &SpaceModel, g: &SpaceModel, n: usize) -> ProductExpr {
    ProductExpr::leaf(g).ad(&ProductExpr::leaf(h), n)
}

#[derive(Debug)]
enum Node {
    Leaf(Arc<SpaceModel>),
    Circle(Arc<Node>, Arc<Node>),
}

impl Node {
    fn fmt_label(&self, out: &mut String) {
        match self {
            Node::Leaf(m) => out.push_str(&m.name()),
            Node::Circle(a, b) => {
                out.push('(');
                a.fmt_label(out);
                out.push('∘');
                b.fmt_label(out);
                out.push(')');
            }
        }
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a SpaceModel>) {
        match self {
            Node::Leaf(m) => out.push(m),
            Node::Circle(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }

    fn to_expr(&self) -> SpaceExpr {
        match self {
            Node::Leaf(m) => m.expr.clone(),
            Node::Circle(a, b) => SpaceExpr::Circle(Box::new(a.to_expr()), Box::new(b.to_expr())),
        }
    }
}

/// The two halves of a circle product, or the leaf model.
#[derive(Debug, Clone)]
pub enum ProductShape {
    Leaf(SpaceModel),
    Circle(ProductExpr, ProductExpr),
}

/// An iterated Theriault product with a fixed association.
///
/// Association is part of the value: `(G∘H)∘K` and `G∘(H∘K)` are homotopy
/// equivalent but carry different labels.
#[derive(Debug, Clone)]
pub struct ProductExpr {
    node: Arc<Node>,
    length: usize,
    gens: TruncSeries,
    label: Arc<str>,
}

impl ProductExpr {
    pub fn leaf(model: &SpaceModel) -> Self {
        let node = Arc::new(Node::Leaf(Arc::new(model.clone())));
        Self::from_node(node, 1, model.gens.clone())
    }

    fn from_node(node: Arc<Node>, length: usize, gens: TruncSeries) -> Self {
        let mut label = String::new();
        node.fmt_label(&mut label);
        ProductExpr {
            node,
            length,
            gens,
            label: label.into(),
        }
    }

    /// `self ∘ other`.
    pub fn circle(&self, other: &ProductExpr) -> Self {
        Self::from_node(
            Arc::new(Node::Circle(self.node.clone(), other.node.clone())),
            self.length + other.length,
            &self.gens * &other.gens,
        )
    }

    /// `ad^n(acting)(self)`: `self` circled with `acting` `n` times, nested left.
    pub fn ad(&self, acting: &ProductExpr, n: usize) -> Self {
        (0..n).fold(self.clone(), |acc, _| acc.circle(acting))
    }

    /// Number of leaves.
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn gens(&self) -> &TruncSeries {
        &self.gens
    }

    pub fn red(&self) -> TruncSeries {
        self.gens.shift(1).expect("upward shift")
    }

    pub fn model(&self) -> SpaceModel {
        SpaceModel {
            expr: self.node.to_expr(),
            gens: self.gens.clone(),
        }
    }

    pub fn connectivity(&self) -> Result<usize, ModelError> {
        self.gens
            .valuation()
            .ok_or(ModelError::Contractible(self.gens.degree()))
    }

    /// Lowest degree with nonzero reduced homology, if any through `D + 1`.
    pub fn bottom_degree(&self) -> Option<usize> {
        self.gens.valuation().map(|v| v + 1)
    }

    /// True when the product has no homology through the truncation degree.
    pub fn is_trivial(&self) -> bool {
        self.gens.is_zero()
    }

    pub fn leaves(&self) -> Vec<&SpaceModel> {
        let mut out = Vec::with_capacity(self.length);
        self.node.collect_leaves(&mut out);
        out
    }

    pub fn shape(&self) -> ProductShape {
        match &*self.node {
            Node::Leaf(m) => ProductShape::Leaf((**m).clone()),
            Node::Circle(a, b) => {
                let rebuild = |n: &Arc<Node>| {
                    let mut leaves = Vec::new();
                    n.collect_leaves(&mut leaves);
                    let gens = leaves
                        .iter()
                        .fold(TruncSeries::one(self.gens.degree()), |acc, m| {
                            &acc * &m.gens
                        });
                    Self::from_node(n.clone(), leaves.len(), gens)
                };
                ProductShape::Circle(rebuild(a), rebuild(b))
            }
        }
    }
}

impl fmt::Display for ProductExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl PartialEq for ProductExpr {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label && self.gens == other.gens
    }
}

impl Eq for ProductExpr {}

/// One wedge summand contributing to the right-hand side of a splitting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WedgeTerm {
    pub label: String,
    pub length: usize,
    pub bottom_degree: usize,
    /// Total number of cells (sum of reduced ranks) through `D`.
    #[serde(serialize_with = "serialize_bigint")]
    pub cells: BigInt,
}

impl WedgeTerm {
    fn of(p: &ProductExpr) -> Self {
        WedgeTerm {
            label: p.label().to_string(),
            length: p.length(),
            bottom_degree: p.bottom_degree().unwrap_or(0),
            cells: p.red().total(),
        }
    }
}

/// Outcome of comparing two routes to the same Poincaré series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub statement: String,
    pub trunc_degree: usize,
    pub left: TruncSeries,
    pub right: TruncSeries,
    pub equal: bool,
    /// First degree where the two sides differ.
    pub first_difference: Option<usize>,
    pub terms: Vec<WedgeTerm>,
}

impl IdentityReport {
    pub fn new(
        identity: &str,
        statement: &str,
        left: TruncSeries,
        right: TruncSeries,
        terms: Vec<WedgeTerm>,
    ) -> Self {
        let first_difference = (0..=left.degree()).find(|&n| left.coeff(n) != right.coeff(n));
        IdentityReport {
            identity: identity.to_string(),
            statement: statement.to_string(),
            trunc_degree: left.degree(),
            equal: first_difference.is_none() && left.degree() == right.degree(),
            left,
            right,
            first_difference,
            terms,
        }
    }
}

/// `ad^n(acting)(base)` for `n = 0, 1, ...` until the summands vanish below
/// the truncation. Each step raises the bottom degree, so the list is finite.
fn ad_family(base: &ProductExpr, acting: &ProductExpr, start: usize) -> Vec<ProductExpr> {
    let mut out = Vec::new();
    let mut term = base.ad(acting, start);
    while !term.is_trivial() {
        let next = term.circle(acting);
        out.push(term);
        term = next;
    }
    out
}

fn sum_red(terms: &[ProductExpr], degree: usize) -> TruncSeries {
    terms
        .iter()
        .fold(TruncSeries::zero(degree), |acc, p| &acc + &p.red())
}

/// `G ⋊ ΩH ≃ ⋁_{n ≥ 0} ad^n(H)(G)`.
pub fn verify_half_smash_splitting(g: &SpaceModel, h: &SpaceModel) -> IdentityReport {
    let left = half_smash(g, h);
    let terms = ad_family(&ProductExpr::leaf(g), &ProductExpr::leaf(h), 0);
    let right = sum_red(&terms, g.trunc_degree());
    IdentityReport::new(
        "half-smash",
        "red(G ⋊ ΩH) = Σ_{n≥0} red(ad^n(H)(G))",
        left,
        right,
        terms.iter().map(WedgeTerm::of).collect(),
    )
}

/// `SΩG ≃ ⋁_{n ≥ 0} ad^n(G)(G)`.
pub fn verify_suspended_loops_splitting(g: &SpaceModel) -> IdentityReport {
    let d = g.trunc_degree();
    let left = (&loops(g) - &TruncSeries::one(d))
        .shift(1)
        .expect("upward shift");
    let leaf = ProductExpr::leaf(g);
    let terms = ad_family(&leaf, &leaf, 0);
    let right = sum_red(&terms, d);
    IdentityReport::new(
        "suspended-loops",
        "red(SΩG) = Σ_{n≥0} red(ad^n(G)(G))",
        left,
        right,
        terms.iter().map(WedgeTerm::of).collect(),
    )
}

/// The join summands `ad^j(H)(ad^i(G)(G))`, `i ≥ 0`, `j ≥ 1`, nonvanishing
/// below the truncation, ordered by `(i, j)`.
pub fn join_summands(g: &SpaceModel, h: &SpaceModel) -> Vec<ProductExpr> {
    let gl = ProductExpr::leaf(g);
    let hl = ProductExpr::leaf(h);
    ad_family(&gl, &gl, 0)
        .iter()
        .flat_map(|base| ad_family(base, &hl, 1))
        .collect()
}

/// `ΩG * ΩH ≃ ⋁_{i ≥ 0, j ≥ 1} ad^j(H)(ad^i(G)(G))`.
pub fn verify_join_splitting(g: &SpaceModel, h: &SpaceModel) -> IdentityReport {
    let left = join_loops(g, h);
    let terms = join_summands(g, h);
    let right = sum_red(&terms, g.trunc_degree());
    IdentityReport::new(
        "join",
        "red(ΩG * ΩH) = Σ_{i≥0, j≥1} red(ad^j(H)(ad^i(G)(G)))",
        left,
        right,
        terms.iter().map(WedgeTerm::of).collect(),
    )
}

/// Cell count of `G × H ≃ (G ∨ H) ∪_W C(G ∘ H)`.
pub fn verify_product_cells(g: &SpaceModel, h: &SpaceModel) -> IdentityReport {
    let left = &g.poincare() * &h.poincare();
    let cone_cells = circle(g, h).red().shift(1).expect("upward shift");
    let right = &wedge(g, h).poincare() + &cone_cells;
    let gh = ProductExpr::leaf(g).circle(&ProductExpr::leaf(h));
    IdentityReport::new(
        "product-cells",
        "P(G)·P(H) = P(G ∨ H) + t·red(G∘H)",
        left,
        right,
        vec![WedgeTerm::of(&gh)],
    )
}

/// The complement `SQ` of `G ∘ H` in `ΩG * ΩH`, against its closed form
/// `g h t (g + h - g h) / ((1 - g)(1 - h))`.
pub fn verify_join_complement(g: &SpaceModel, h: &SpaceModel) -> IdentityReport {
    let left = &join_loops(g, h) - &circle(g, h).red();
    let (gs, hs) = (g.gens(), h.gens());
    let numer = &(gs + hs) - &(gs * hs);
    let right = (&(&(gs * hs) * &numer) * &(&loops(g) * &loops(h)))
        .shift(1)
        .expect("upward shift");
    IdentityReport::new(
        "join-complement",
        "red(ΩG * ΩH) - red(G∘H) = g h t (g + h - g h) / ((1 - g)(1 - h))",
        left,
        right,
        Vec::new(),
    )
}

/// Input document describing a space.
///
/// Either `{"name": "G", "spheres": [2, 3]}` or
/// `{"name": "M", "reduced_dims": {"3": 1, "4": 1}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDocument {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spheres: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced_dims: Option<BTreeMap<String, u64>>,
    /// Marks a `reduced_dims` space as a suspension (sphere wedges always are).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suspension: Option<bool>,
}

impl SpaceDocument {
    pub fn parse(json: &str) -> Result<Self, ModelError> {
        serde_json::from_str(json).map_err(|e| ModelError::InvalidDocument(e.to_string()))
    }

    pub fn to_model(&self, trunc_degree: usize) -> Result<SpaceModel, ModelError> {
        match (&self.spheres, &self.reduced_dims) {
            (Some(spheres), None) => {
                Ok(SpaceModel::from_spheres(spheres, trunc_degree)?.renamed(&self.name))
            }
            (None, Some(dims)) => {
                let mut parsed = BTreeMap::new();
                for (k, &v) in dims {
                    let n: i64 = k.trim().parse().map_err(|_| {
                        ModelError::InvalidDocument(format!("degree key {k:?} is not an integer"))
                    })?;
                    *parsed.entry(n).or_insert(0) += v;
                }
                SpaceModel::from_reduced_dims(
                    &self.name,
                    &parsed,
                    self.suspension.unwrap_or(false),
                    trunc_degree,
                )
            }
            _ => Err(ModelError::InvalidDocument(
                "exactly one of \"spheres\" or \"reduced_dims\" is required".into(),
            )),
        }
    }
}
