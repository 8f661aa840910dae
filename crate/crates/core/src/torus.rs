//! The based quantum torus over `ℤ[q^{±1/2}]` and its partial
//! compactification: star product, bar involution, exact division, vanishing
//! orders, dominance order, degrees, pointedness and normalization.
//!
//! Elements are finite sums of lattice monomials `x^m` with [`Coefficient`]
//! weights. Multiplication is the `Λ`-twisted star product
//! `x^g * x^h = q^{λ(g,h)/2} x^{g+h}`.

use crate::coeff::Coefficient;
use crate::linalg::{self, rat, RatMat};
use crate::seed::ExchangeMatrix;
use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Exponent vector of a lattice monomial, indexed by the positions of the
/// context's labels.
pub type LatticeVector = Vec<i64>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TorusError {
    #[error("torus elements live in different contexts")]
    ContextMismatch,
    #[error("not divisible in the quantum torus")]
    NotDivisible,
    #[error("the zero element has no vanishing order or degree")]
    ZeroElement,
    #[error("exchange matrix does not have full column rank")]
    RankDeficient,
    #[error("support has no unique dominance-maximal degree")]
    NoUniqueMaxDegree,
    #[error("leading coefficient is not a power of q^(1/2)")]
    LeadingCoefficientNotUnit,
    #[error("unknown vertex label {0}")]
    UnknownLabel(i32),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Vertex labels with their frozen/unfrozen partition. Labels may be
/// negative, as for the extended index set `[-r,-1] ⊔ [1,l]` of a signed
/// word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexSet {
    labels: Vec<i32>,
    frozen: BTreeSet<i32>,
    position: BTreeMap<i32, usize>,
}

impl IndexSet {
    pub fn new(labels: Vec<i32>, frozen: impl IntoIterator<Item = i32>) -> Self {
        let position: BTreeMap<i32, usize> =
            labels.iter().enumerate().map(|(p, l)| (*l, p)).collect();
        assert_eq!(position.len(), labels.len(), "duplicate vertex label");
        let frozen: BTreeSet<i32> = frozen.into_iter().collect();
        for f in &frozen {
            assert!(position.contains_key(f), "frozen label {f} not in index set");
        }
        IndexSet {
            labels,
            frozen,
            position,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[i32] {
        &self.labels
    }

    pub fn frozen(&self) -> &BTreeSet<i32> {
        &self.frozen
    }

    pub fn unfrozen(&self) -> Vec<i32> {
        self.labels
            .iter()
            .copied()
            .filter(|l| !self.frozen.contains(l))
            .collect()
    }

    pub fn is_frozen(&self, label: i32) -> bool {
        self.frozen.contains(&label)
    }

    pub fn pos(&self, label: i32) -> Result<usize, TorusError> {
        self.position
            .get(&label)
            .copied()
            .ok_or(TorusError::UnknownLabel(label))
    }

    pub fn contains(&self, label: i32) -> bool {
        self.position.contains_key(&label)
    }

    /// Standard basis vector `f_label`.
    pub fn basis_vector(&self, label: i32) -> Result<LatticeVector, TorusError> {
        let mut v = vec![0; self.len()];
        v[self.pos(label)?] = 1;
        Ok(v)
    }
}

/// Skew-symmetric integer matrix defining the twist `λ(g,h) = gᵀ Λ h`,
/// indexed by the positions of an [`IndexSet`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LambdaForm {
    entries: Vec<Vec<i64>>,
}

impl LambdaForm {
    pub fn new(entries: Vec<Vec<i64>>) -> Self {
        let n = entries.len();
        for (i, row) in entries.iter().enumerate() {
            assert_eq!(row.len(), n, "Lambda matrix must be square");
            for (j, v) in row.iter().enumerate() {
                assert_eq!(*v, -entries[j][i], "Lambda matrix must be skew-symmetric");
            }
        }
        LambdaForm { entries }
    }

    pub fn zero(n: usize) -> Self {
        LambdaForm {
            entries: vec![vec![0; n]; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn pairing(&self, g: &[i64], h: &[i64]) -> i64 {
        let n = self.dim();
        assert_eq!(g.len(), n);
        assert_eq!(h.len(), n);
        let mut acc = 0i64;
        for i in 0..n {
            if g[i] == 0 {
                continue;
            }
            for j in 0..n {
                acc += g[i] * self.entries[i][j] * h[j];
            }
        }
        acc
    }

    pub fn negated(&self) -> Self {
        LambdaForm {
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(|v| -v).collect())
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|r| r.iter().all(|v| *v == 0))
    }
}

/// A reference quantum torus: an index set together with the skew form that
/// twists its product. Elements keep an `Arc` to their context; contexts
/// compare structurally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusContext {
    pub index: IndexSet,
    pub lambda: LambdaForm,
}

impl TorusContext {
    pub fn new(index: IndexSet, lambda: LambdaForm) -> Arc<Self> {
        assert_eq!(index.len(), lambda.dim(), "index/Lambda dimension mismatch");
        Arc::new(TorusContext { index, lambda })
    }

    pub fn commutative(index: IndexSet) -> Arc<Self> {
        let n = index.len();
        Arc::new(TorusContext {
            index,
            lambda: LambdaForm::zero(n),
        })
    }

    pub fn dim(&self) -> usize {
        self.index.len()
    }
}

/// A finite `ℤ[q^{±1/2}]`-linear combination of lattice monomials `x^m`.
///
/// Invariants: no zero coefficients are stored and all exponent vectors have
/// the context's dimension.
#[derive(Clone, Debug)]
pub struct TorusElement {
    ctx: Arc<TorusContext>,
    terms: BTreeMap<LatticeVector, Coefficient>,
}

impl PartialEq for TorusElement {
    fn eq(&self, other: &Self) -> bool {
        *self.ctx == *other.ctx && self.terms == other.terms
    }
}

impl Eq for TorusElement {}

impl TorusElement {
    pub fn zero(ctx: &Arc<TorusContext>) -> Self {
        TorusElement {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &Arc<TorusContext>) -> Self {
        Self::monomial(ctx, vec![0; ctx.dim()], Coefficient::one())
    }

    pub fn monomial(ctx: &Arc<TorusContext>, m: LatticeVector, c: Coefficient) -> Self {
        assert_eq!(m.len(), ctx.dim(), "exponent dimension mismatch");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        TorusElement {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn from_terms(
        ctx: &Arc<TorusContext>,
        it: impl IntoIterator<Item = (LatticeVector, Coefficient)>,
    ) -> Self {
        let mut out = Self::zero(ctx);
        for (m, c) in it {
            out.add_term(m, c);
        }
        out
    }

    pub fn context(&self) -> &Arc<TorusContext> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticeVector, &Coefficient)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &[i64]) -> Coefficient {
        self.terms.get(m).cloned().unwrap_or_else(Coefficient::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &LatticeVector> {
        self.terms.keys()
    }

    fn add_term(&mut self, m: LatticeVector, c: Coefficient) {
        assert_eq!(m.len(), self.ctx.dim(), "exponent dimension mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check_same_context(&self, other: &Self) -> Result<(), TorusError> {
        if *self.ctx == *other.ctx {
            Ok(())
        } else {
            Err(TorusError::ContextMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, TorusError> {
        self.check_same_context(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, TorusError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        TorusElement {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (m, k) in &self.terms {
            out.add_term(m.clone(), k.mul(c));
        }
        out
    }

    /// The star product `x^g * x^h = q^{λ(g,h)/2} x^{g+h}`, extended
    /// bilinearly.
    pub fn star(&self, other: &Self) -> Result<Self, TorusError> {
        self.check_same_context(other)?;
        let mut out = Self::zero(&self.ctx);
        for (g, cg) in &self.terms {
            for (h, ch) in &other.terms {
                let twist = self.ctx.lambda.pairing(g, h);
                let m: LatticeVector = g.iter().zip(h).map(|(a, b)| a + b).collect();
                out.add_term(m, cg.mul(ch).mul_q_half(twist));
            }
        }
        Ok(out)
    }

    /// Star power with nonnegative exponent.
    pub fn star_pow(&self, n: u32) -> Result<Self, TorusError> {
        let mut acc = Self::one(&self.ctx);
        for _ in 0..n {
            acc = acc.star(self)?;
        }
        Ok(acc)
    }

    /// The bar involution: coefficientwise `q ↦ q^{-1}`, fixing each `x^m`.
    pub fn bar(&self) -> Self {
        TorusElement {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.bar())).collect(),
        }
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.bar() == *self
    }

    /// Left exact division: the unique `c` with `d * c = self`, when it
    /// exists in the torus.
    pub fn exact_divide(&self, d: &Self) -> Result<Self, TorusError> {
        self.divide_impl(d, true)
    }

    /// Right exact division: the unique `c` with `c * d = self`.
    pub fn exact_divide_right(&self, d: &Self) -> Result<Self, TorusError> {
        self.divide_impl(d, false)
    }

    fn divide_impl(&self, d: &Self, left: bool) -> Result<Self, TorusError> {
        self.check_same_context(d)?;
        if d.is_zero() {
            return Err(TorusError::NotDivisible);
        }
        if self.is_zero() {
            return Ok(Self::zero(&self.ctx));
        }
        let (d_top_m, d_top_c) = d.terms.iter().next_back().unwrap();
        let d_low_m = d.terms.keys().next().unwrap();
        let a_low_m = self.terms.keys().next().unwrap();
        // the quotient's lexicographically least exponent, if it exists
        let low_bound: LatticeVector = a_low_m.iter().zip(d_low_m).map(|(a, b)| a - b).collect();
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.ctx);
        while !rem.is_zero() {
            let (r_top_m, r_top_c) = rem.terms.iter().next_back().unwrap();
            let m: LatticeVector = r_top_m.iter().zip(d_top_m).map(|(a, b)| a - b).collect();
            if m < low_bound {
                return Err(TorusError::NotDivisible);
            }
            let twist = if left {
                self.ctx.lambda.pairing(d_top_m, &m)
            } else {
                self.ctx.lambda.pairing(&m, d_top_m)
            };
            let c = r_top_c
                .mul_q_half(-twist)
                .exact_div(d_top_c)
                .ok_or(TorusError::NotDivisible)?;
            let t = Self::monomial(&self.ctx, m, c);
            let prod = if left { d.star(&t)? } else { t.star(d)? };
            rem = rem.sub(&prod)?;
            quot = quot.add(&t)?;
        }
        Ok(quot)
    }

    /// Order of vanishing at `x_label = 0`: the minimum of the `label`
    /// coordinate over the support.
    pub fn vanishing_order(&self, label: i32) -> Result<i64, TorusError> {
        if self.is_zero() {
            return Err(TorusError::ZeroElement);
        }
        let p = self.ctx.index.pos(label)?;
        Ok(self.terms.keys().map(|m| m[p]).min().unwrap())
    }

    /// Membership in the partially compactified torus: no negative powers of
    /// any of the given frozen variables. The zero element belongs.
    pub fn in_compactified_torus(&self, frozen: &BTreeSet<i32>) -> Result<bool, TorusError> {
        for j in frozen {
            let p = self.ctx.index.pos(*j)?;
            if self.terms.keys().any(|m| m[p] < 0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Specialize `q^{1/2} ↦ 1`. The result lives in the commutative torus
    /// on the same index set.
    pub fn semiclassical_limit(&self) -> Self {
        let ctx = TorusContext::commutative(self.ctx.index.clone());
        let mut out = Self::zero(&ctx);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), Coefficient::from_bigint(c.specialize_q_one()));
        }
        out
    }

    /// Render as JSON: an array of `{"m": [...], "c": [[halfExp, int], ...]}`
    /// with terms sorted lexicographically by exponent vector.
    pub fn to_json(&self) -> Value {
        let arr: Vec<Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let coeffs: Vec<Value> = c
                    .iter()
                    .map(|(e, n)| json!([e, bigint_to_json(n)]))
                    .collect();
                json!({"m": m, "c": coeffs})
            })
            .collect();
        Value::Array(arr)
    }

    pub fn from_json(ctx: &Arc<TorusContext>, v: &Value) -> Result<Self, String> {
        let arr = v.as_array().ok_or("torus element must be a JSON array")?;
        let mut out = Self::zero(ctx);
        for t in arr {
            let m: Vec<i64> = t
                .get("m")
                .and_then(Value::as_array)
                .ok_or("term missing \"m\"")?
                .iter()
                .map(|x| x.as_i64().ok_or("exponent must be an integer"))
                .collect::<Result<_, _>>()?;
            if m.len() != ctx.dim() {
                return Err(format!(
                    "exponent vector has length {}, expected {}",
                    m.len(),
                    ctx.dim()
                ));
            }
            let mut c = Coefficient::zero();
            for pair in t
                .get("c")
                .and_then(Value::as_array)
                .ok_or("term missing \"c\"")?
            {
                let p = pair.as_array().filter(|p| p.len() == 2).ok_or("bad coefficient pair")?;
                let e = p[0].as_i64().ok_or("bad half exponent")?;
                let n = json_to_bigint(&p[1]).ok_or("bad integer coefficient")?;
                c = c.add(&Coefficient::monomial(e, n));
            }
            out.add_term(m, c);
        }
        Ok(out)
    }
}

pub fn bigint_to_json(n: &BigInt) -> Value {
    let s = n.to_string();
    match s.parse::<serde_json::Number>() {
        Ok(num) => Value::Number(num),
        Err(_) => Value::String(s),
    }
}

pub fn json_to_bigint(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.to_string().parse().ok(),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff = format!("{c}");
            if coeff == "1" {
                if m.iter().all(|v| *v == 0) {
                    write!(f, "1")?;
                } else {
                    write!(f, "x^{m:?}")?;
                }
            } else if m.iter().all(|v| *v == 0) {
                write!(f, "({coeff})")?;
            } else {
                write!(f, "({coeff})*x^{m:?}")?;
            }
        }
        Ok(())
    }
}

/// `m1 ⪯ m2` in the dominance order of `btilde`: true iff `m1 - m2 = B̃ n`
/// for some `n ≥ 0` with integer entries. Requires `B̃` of full column rank;
/// the system is solved exactly over the rationals.
pub fn dominance_leq(
    m1: &[i64],
    m2: &[i64],
    btilde: &ExchangeMatrix,
) -> Result<bool, TorusError> {
    if !btilde.has_full_column_rank() {
        return Err(TorusError::RankDeficient);
    }
    let rows = btilde.row_labels().len();
    if m1.len() != rows || m2.len() != rows {
        return Err(TorusError::DimensionMismatch {
            expected: rows,
            got: m1.len(),
        });
    }
    let a = RatMat::from_int_rows(btilde.rows());
    let b: Vec<_> = m1.iter().zip(m2).map(|(x, y)| rat(x - y)).collect();
    match linalg::solve(&a, &b) {
        None => Ok(false),
        Some(n) => Ok(n.iter().all(|v| linalg::as_i64(v).map(|k| k >= 0).unwrap_or(false))),
    }
}

/// The degree of a nonzero element: the unique support vector dominating all
/// others, together with whether its coefficient is exactly 1 (pointedness).
pub fn degree_and_pointedness(
    z: &TorusElement,
    btilde: &ExchangeMatrix,
) -> Result<(LatticeVector, bool), TorusError> {
    if z.is_zero() {
        return Err(TorusError::ZeroElement);
    }
    let supp: Vec<&LatticeVector> = z.support().collect();
    'outer: for cand in &supp {
        for other in &supp {
            if other == cand {
                continue;
            }
            if !dominance_leq(other, cand, btilde)? {
                continue 'outer;
            }
        }
        let pointed = z.coefficient(cand).is_one();
        return Ok(((*cand).clone(), pointed));
    }
    Err(TorusError::NoUniqueMaxDegree)
}

/// Divide by the leading coefficient `q^α`, producing a pointed element.
/// Errors when the leading coefficient is not a single power of `q^{1/2}`.
pub fn normalize(z: &TorusElement, btilde: &ExchangeMatrix) -> Result<TorusElement, TorusError> {
    let (deg, _) = degree_and_pointedness(z, btilde)?;
    let lead = z.coefficient(&deg);
    let alpha = lead
        .as_unit_q_power()
        .ok_or(TorusError::LeadingCoefficientNotUnit)?;
    Ok(z.scale(&Coefficient::q_half(-alpha)))
}

/// Degree of a nonzero element, erroring on non-unique maxima.
pub fn degree(z: &TorusElement, btilde: &ExchangeMatrix) -> Result<LatticeVector, TorusError> {
    degree_and_pointedness(z, btilde).map(|(d, _)| d)
}

pub fn vec_add(a: &[i64], b: &[i64]) -> LatticeVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[i64], b: &[i64]) -> LatticeVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_neg(a: &[i64]) -> LatticeVector {
    a.iter().map(|x| -x).collect()
}

pub fn bigint_is_zero(n: &BigInt) -> bool {
    n.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx2(l12: i64) -> Arc<TorusContext> {
        let index = IndexSet::new(vec![1, 2], [2]);
        TorusContext::new(index, LambdaForm::new(vec![vec![0, l12], vec![-l12, 0]]))
    }

    fn mono(ctx: &Arc<TorusContext>, m: &[i64]) -> TorusElement {
        TorusElement::monomial(ctx, m.to_vec(), Coefficient::one())
    }

    #[test]
    fn star_product_monomial_rule() {
        let ctx = ctx2(1);
        let x1 = mono(&ctx, &[1, 0]);
        let x2 = mono(&ctx, &[0, 1]);
        assert_eq!(
            x1.star(&x2).unwrap(),
            TorusElement::monomial(&ctx, vec![1, 1], Coefficient::q_half(1))
        );
        assert_eq!(
            x2.star(&x1).unwrap(),
            TorusElement::monomial(&ctx, vec![1, 1], Coefficient::q_half(-1))
        );
        assert_eq!(x1.star(&x1).unwrap(), mono(&ctx, &[2, 0]));
    }

    #[test]
    fn star_context_mismatch() {
        let a = mono(&ctx2(1), &[1, 0]);
        let b = mono(&ctx2(2), &[0, 1]);
        assert_eq!(a.star(&b).unwrap_err(), TorusError::ContextMismatch);
    }

    #[test]
    fn bar_element_rules() {
        let ctx = ctx2(1);
        let x1 = mono(&ctx, &[1, 0]);
        let x2 = mono(&ctx, &[0, 1]);
        let z = x1.star(&x2).unwrap();
        assert_eq!(z.bar(), x2.star(&x1).unwrap());
        assert_eq!(TorusElement::one(&ctx).bar(), TorusElement::one(&ctx));
        let w = TorusElement::monomial(&ctx, vec![1, 1], Coefficient::q_half(1));
        assert_eq!(
            w.bar(),
            TorusElement::monomial(&ctx, vec![1, 1], Coefficient::q_half(-1))
        );
    }

    #[test]
    fn exact_divide_examples() {
        let ctx = ctx2(1);
        let a = TorusElement::monomial(&ctx, vec![1, 1], Coefficient::q_half(1));
        let x1 = mono(&ctx, &[1, 0]);
        // x^{f1} * x^{f2} = q^{1/2} x^{f1+f2}
        assert_eq!(a.exact_divide(&x1).unwrap(), mono(&ctx, &[0, 1]));

        let sum = mono(&ctx, &[2, 0]).add(&mono(&ctx, &[1, 0])).unwrap();
        let q = sum.exact_divide(&x1).unwrap();
        assert_eq!(
            q,
            mono(&ctx, &[1, 0]).add(&TorusElement::one(&ctx)).unwrap()
        );

        let nd = mono(&ctx, &[1, 0]).add(&mono(&ctx, &[0, 1])).unwrap();
        let d = mono(&ctx, &[1, 0]).add(&TorusElement::one(&ctx)).unwrap();
        assert_eq!(nd.exact_divide(&d).unwrap_err(), TorusError::NotDivisible);
    }

    #[test]
    fn exact_divide_left_right_roundtrips() {
        let ctx = ctx2(3);
        let a = mono(&ctx, &[1, -2])
            .add(&TorusElement::monomial(
                &ctx,
                vec![0, 4],
                Coefficient::q_half(1).add(&Coefficient::from_int(2)),
            ))
            .unwrap();
        let d = mono(&ctx, &[1, 1])
            .add(&TorusElement::monomial(&ctx, vec![-1, 0], Coefficient::q_half(-2)))
            .unwrap();
        let prod = d.star(&a).unwrap();
        assert_eq!(prod.exact_divide(&d).unwrap(), a);
        let prod2 = a.star(&d).unwrap();
        assert_eq!(prod2.exact_divide_right(&d).unwrap(), a);
        assert_eq!(d.star(&prod.exact_divide(&d).unwrap()).unwrap(), prod);
    }

    #[test]
    fn vanishing_orders() {
        let ctx = ctx2(1);
        assert_eq!(mono(&ctx, &[0, 1]).vanishing_order(2).unwrap(), 1);
        let z = mono(&ctx, &[0, -2]).add(&mono(&ctx, &[0, 1])).unwrap();
        assert_eq!(z.vanishing_order(2).unwrap(), -2);
        assert_eq!(TorusElement::one(&ctx).vanishing_order(2).unwrap(), 0);
        assert_eq!(
            TorusElement::zero(&ctx).vanishing_order(2).unwrap_err(),
            TorusError::ZeroElement
        );
    }

    #[test]
    fn compactified_membership() {
        let ctx = ctx2(1);
        let frozen: BTreeSet<i32> = [2].into();
        // negative power of the unfrozen variable is allowed
        assert!(mono(&ctx, &[-1, 0]).in_compactified_torus(&frozen).unwrap());
        assert!(!mono(&ctx, &[0, -1]).in_compactified_torus(&frozen).unwrap());
        assert!(mono(&ctx, &[-1, 1]).in_compactified_torus(&frozen).unwrap());
        assert!(TorusElement::zero(&ctx).in_compactified_torus(&frozen).unwrap());
    }

    fn a1_frozen_b() -> ExchangeMatrix {
        ExchangeMatrix::new(vec![1, 2], vec![1], vec![vec![0], vec![-1]])
    }

    #[test]
    fn dominance_examples() {
        let b = a1_frozen_b();
        assert!(dominance_leq(&[3, -2], &[3, -2], &b).unwrap());
        // -f2 = B e_1
        assert!(dominance_leq(&[0, -1], &[0, 0], &b).unwrap());
        assert!(!dominance_leq(&[0, 1], &[0, 0], &b).unwrap());

        let rank_def = ExchangeMatrix::new(vec![1, 2], vec![1], vec![vec![0], vec![0]]);
        assert_eq!(
            dominance_leq(&[0, 0], &[0, 0], &rank_def).unwrap_err(),
            TorusError::RankDeficient
        );
    }

    #[test]
    fn degree_pointedness_normalize() {
        let ctx = ctx2(1);
        let b = a1_frozen_b();
        // x^{f1} (1 + y_1) with y_1 = x^{B e_1} = x^{-f2}
        let z = mono(&ctx, &[1, 0]).add(&mono(&ctx, &[1, -1])).unwrap();
        assert_eq!(degree_and_pointedness(&z, &b).unwrap(), (vec![1, 0], true));

        let zq = mono(&ctx, &[1, 0]).scale(&Coefficient::q_half(2));
        assert_eq!(degree_and_pointedness(&zq, &b).unwrap(), (vec![1, 0], false));
        assert_eq!(normalize(&zq, &b).unwrap(), mono(&ctx, &[1, 0]));

        let incomparable = mono(&ctx, &[1, 0]).add(&mono(&ctx, &[0, 1])).unwrap();
        assert_eq!(
            degree_and_pointedness(&incomparable, &b).unwrap_err(),
            TorusError::NoUniqueMaxDegree
        );

        let not_unit = mono(&ctx, &[1, 0])
            .scale(&Coefficient::q_half(2).add(&Coefficient::one()));
        assert_eq!(
            normalize(&not_unit, &b).unwrap_err(),
            TorusError::LeadingCoefficientNotUnit
        );
        // already pointed input is unchanged
        assert_eq!(normalize(&z, &b).unwrap(), z);
    }

    #[test]
    fn semiclassical_limit_examples() {
        let ctx = ctx2(1);
        let z = TorusElement::monomial(&ctx, vec![1, 1], Coefficient::q_half(1));
        let lim = z.semiclassical_limit();
        assert!(lim.context().lambda.is_zero());
        assert_eq!(lim.coefficient(&[1, 1]), Coefficient::one());

        let cancel = TorusElement::monomial(
            &ctx,
            vec![1, 0],
            Coefficient::q_half(2).sub(&Coefficient::q_half(-2)),
        );
        assert!(cancel.semiclassical_limit().is_zero());
    }

    #[test]
    fn semiclassical_limit_multiplicative() {
        let ctx = ctx2(2);
        let a = mono(&ctx, &[1, 0]).add(&mono(&ctx, &[0, 1]).scale(&Coefficient::q_half(1))).unwrap();
        let b = mono(&ctx, &[-1, 1]).add(&TorusElement::one(&ctx)).unwrap();
        let lhs = a.star(&b).unwrap().semiclassical_limit();
        let rhs = a
            .semiclassical_limit()
            .star(&b.semiclassical_limit())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn json_roundtrip() {
        let ctx = ctx2(1);
        let z = mono(&ctx, &[1, -3])
            .add(&TorusElement::monomial(
                &ctx,
                vec![0, 2],
                Coefficient::q_half(-1).add(&Coefficient::from_int(5)),
            ))
            .unwrap();
        let j = z.to_json();
        let back = TorusElement::from_json(&ctx, &j).unwrap();
        assert_eq!(back, z);
        let s = serde_json::to_string(&j).unwrap();
        let j2: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(TorusElement::from_json(&ctx, &j2).unwrap(), z);
    }
}
