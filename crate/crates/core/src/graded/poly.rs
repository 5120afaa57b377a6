use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::chart::Chart;
use crate::error::{Error, Result};

pub type Coefficient = BigRational;

pub fn rational(numer: i64, denom: i64) -> Coefficient {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(value: i64) -> Coefficient {
    BigRational::from_integer(BigInt::from(value))
}

/// A grading query result. The zero value is homogeneous in every degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Degree {
    Zero,
    Exact(i64),
    Mixed,
}

impl Degree {
    /// The degree to use in sign exponents; `Zero` contributes nothing so any value works.
    pub fn for_signs(self) -> Option<i64> {
        match self {
            Degree::Zero => Some(0),
            Degree::Exact(d) => Some(d),
            Degree::Mixed => None,
        }
    }

    pub fn exact(self) -> Option<i64> {
        match self {
            Degree::Exact(d) => Some(d),
            _ => None,
        }
    }

    /// True when the value is homogeneous of degree `d` (or zero).
    pub fn admits(self, d: i64) -> bool {
        matches!(self, Degree::Zero) || self == Degree::Exact(d)
    }

    fn merge(self, d: i64) -> Degree {
        match self {
            Degree::Zero => Degree::Exact(d),
            Degree::Exact(e) if e == d => self,
            _ => Degree::Mixed,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Zero => f.write_str("zero"),
            Degree::Exact(d) => write!(f, "{d}"),
            Degree::Mixed => f.write_str("mixed"),
        }
    }
}

pub(crate) fn sign_of(exponent: i64) -> i64 {
    if exponent.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Exponent vector aligned with the chart's generator order, plus the power `k`
/// of the formal factor `e^{kt}`. Odd generators carry exponent 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Vec<u16>,
    exp_power: i32,
}

impl Monomial {
    pub fn unit(len: usize) -> Self {
        Monomial {
            exps: vec![0; len],
            exp_power: 0,
        }
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    pub fn exponent(&self, idx: usize) -> u16 {
        self.exps[idx]
    }

    pub fn exp_power(&self) -> i32 {
        self.exp_power
    }

    pub fn weight(&self, chart: &Chart) -> i64 {
        self.exps
            .iter()
            .zip(chart.generators())
            .map(|(&e, g)| i64::from(e) * i64::from(g.weight))
            .sum()
    }

    pub fn form_degree(&self, chart: &Chart) -> i64 {
        self.exps
            .iter()
            .zip(chart.generators())
            .map(|(&e, g)| i64::from(e) * i64::from(g.form_degree()))
            .sum()
    }

    pub fn total_degree(&self, chart: &Chart) -> i64 {
        self.weight(chart) + self.form_degree(chart)
    }

    fn is_constant(&self) -> bool {
        self.exp_power == 0 && self.exps.iter().all(|&e| e == 0)
    }

    /// Product of two normal-ordered monomials with its Koszul sign, or `None`
    /// when an odd generator would appear twice.
    fn times(&self, other: &Monomial, chart: &Chart) -> Option<(bool, Monomial)> {
        let mut exps = self.exps.clone();
        // Odd generators of `self` sitting to the right of position j.
        let mut odd_after = 0usize;
        let mut negative = false;
        let gens = chart.generators();
        for j in (0..exps.len()).rev() {
            let odd = gens[j].is_odd();
            if odd && other.exps[j] == 1 {
                if self.exps[j] == 1 {
                    return None;
                }
                negative ^= odd_after % 2 == 1;
            }
            if odd && self.exps[j] == 1 {
                odd_after += 1;
            }
            exps[j] = exps[j]
                .checked_add(other.exps[j])
                .expect("exponent overflow");
        }
        Some((
            negative,
            Monomial {
                exps,
                exp_power: self.exp_power + other.exp_power,
            },
        ))
    }

    /// Number of odd generators present strictly before `idx`.
    fn odd_before(&self, idx: usize, chart: &Chart) -> usize {
        self.exps[..idx]
            .iter()
            .zip(chart.generators())
            .filter(|(&e, g)| e > 0 && g.is_odd())
            .count()
    }
}

/// Exact polynomial in the graded generators of a chart.
///
/// Multiplication is graded-commutative for the total degree
/// (weight plus form degree). Monomials are kept in chart order; every
/// transposition of two odd generators contributes a factor `-1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GradedPolynomial {
    chart: Arc<Chart>,
    terms: BTreeMap<Monomial, Coefficient>,
}

pub(crate) fn same_chart(a: &Arc<Chart>, b: &Arc<Chart>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl GradedPolynomial {
    pub fn zero(chart: &Arc<Chart>) -> Self {
        GradedPolynomial {
            chart: Arc::clone(chart),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(chart: &Arc<Chart>, value: Coefficient) -> Self {
        let mut p = Self::zero(chart);
        p.insert(Monomial::unit(chart.len()), value);
        p
    }

    pub fn one(chart: &Arc<Chart>) -> Self {
        Self::constant(chart, Coefficient::one())
    }

    pub fn integer(chart: &Arc<Chart>, value: i64) -> Self {
        Self::constant(chart, integer(value))
    }

    /// The generator at index `idx`.
    pub fn generator_at(chart: &Arc<Chart>, idx: usize) -> Self {
        let mut m = Monomial::unit(chart.len());
        m.exps[idx] = 1;
        let mut p = Self::zero(chart);
        p.insert(m, Coefficient::one());
        p
    }

    pub fn generator(chart: &Arc<Chart>, name: &str) -> Result<Self> {
        Ok(Self::generator_at(chart, chart.require(name)?))
    }

    /// `e^{kt}`; requires a time coordinate.
    pub fn exponential(chart: &Arc<Chart>, k: i32) -> Result<Self> {
        if chart.time_index().is_none() {
            return Err(Error::NoTimeCoordinate);
        }
        let mut m = Monomial::unit(chart.len());
        m.exp_power = k;
        let mut p = Self::zero(chart);
        p.insert(m, Coefficient::one());
        Ok(p)
    }

    /// Build from raw exponent data, normalizing odd squares to zero.
    pub fn from_monomial(
        chart: &Arc<Chart>,
        exps: Vec<u16>,
        exp_power: i32,
        coeff: Coefficient,
    ) -> Result<Self> {
        if exps.len() != chart.len() {
            return Err(Error::ChartMismatch);
        }
        if exp_power != 0 && chart.time_index().is_none() {
            return Err(Error::NoTimeCoordinate);
        }
        let mut p = Self::zero(chart);
        if exps
            .iter()
            .zip(chart.generators())
            .any(|(&e, g)| g.is_odd() && e > 1)
        {
            return Ok(p);
        }
        p.insert(Monomial { exps, exp_power }, coeff);
        Ok(p)
    }

    fn insert(&mut self, m: Monomial, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coefficient)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Constant term value if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<Coefficient> {
        match self.terms.len() {
            0 => Some(Coefficient::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_constant().then(|| c.clone())
            }
            _ => None,
        }
    }

    fn check_chart(&self, other: &Self) -> Result<()> {
        if same_chart(&self.chart, &other.chart) {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }

    fn degree_by(&self, f: impl Fn(&Monomial, &Chart) -> i64) -> Degree {
        self.terms
            .keys()
            .fold(Degree::Zero, |acc, m| acc.merge(f(m, &self.chart)))
    }

    pub fn weight(&self) -> Degree {
        self.degree_by(Monomial::weight)
    }

    pub fn form_degree(&self) -> Degree {
        self.degree_by(Monomial::form_degree)
    }

    pub fn total_degree(&self) -> Degree {
        self.degree_by(Monomial::total_degree)
    }

    /// True if no form-shift generators occur.
    pub fn is_function(&self) -> bool {
        self.form_degree().admits(0)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_chart(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_chart(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        if c.is_zero() {
            return Self::zero(&self.chart);
        }
        GradedPolynomial {
            chart: Arc::clone(&self.chart),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&integer(c))
    }

    /// Graded-commutative product.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_chart(other)?;
        let mut out = Self::zero(&self.chart);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((negative, m)) = ma.times(mb, &self.chart) {
                    let c = ca * cb;
                    out.insert(m, if negative { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(&self.chart);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Multiply by `e^{kt}`.
    pub fn times_exp(&self, k: i32) -> Result<Self> {
        if k == 0 {
            return Ok(self.clone());
        }
        if self.chart.time_index().is_none() {
            return Err(Error::NoTimeCoordinate);
        }
        Ok(GradedPolynomial {
            chart: Arc::clone(&self.chart),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut m = m.clone();
                    m.exp_power += k;
                    (m, c.clone())
                })
                .collect(),
        })
    }

    /// Left graded derivative with respect to the generator at `idx`.
    ///
    /// For the time coordinate this includes `d/dt e^{kt} = k e^{kt}`.
    pub fn derivative_at(&self, idx: usize) -> Self {
        let gen = self.chart.generator(idx);
        let odd = gen.is_odd();
        let is_time = self.chart.time_index() == Some(idx);
        let mut out = Self::zero(&self.chart);
        for (m, c) in &self.terms {
            if is_time && m.exp_power != 0 {
                out.insert(m.clone(), c * integer(i64::from(m.exp_power)));
            }
            let e = m.exps[idx];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.exps[idx] = e - 1;
            let coeff = if odd {
                if m.odd_before(idx, &self.chart) % 2 == 1 {
                    -c.clone()
                } else {
                    c.clone()
                }
            } else {
                c * integer(i64::from(e))
            };
            out.insert(dm, coeff);
        }
        out
    }

    pub fn partial_derivative(&self, name: &str) -> Result<Self> {
        Ok(self.derivative_at(self.chart.require(name)?))
    }

    /// Split into components of fixed weight.
    pub fn weight_components(&self) -> BTreeMap<i64, Self> {
        let mut out: BTreeMap<i64, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.weight(&self.chart))
                .or_insert_with(|| Self::zero(&self.chart))
                .insert(m.clone(), c.clone());
        }
        out
    }

    /// Apply a per-term transformation with access to the monomial's degrees.
    pub(crate) fn map_terms(&self, mut f: impl FnMut(&Monomial, &Coefficient) -> Coefficient) -> Self {
        let mut out = Self::zero(&self.chart);
        for (m, c) in &self.terms {
            out.insert(m.clone(), f(m, c));
        }
        out
    }

    /// Multiply each term by `(-1)^{g(total degree of the term)}`.
    pub(crate) fn sign_by_total_degree(&self, g: impl Fn(i64) -> i64) -> Self {
        let chart = Arc::clone(&self.chart);
        self.map_terms(|m, c| {
            if sign_of(g(m.total_degree(&chart))) < 0 {
                -c.clone()
            } else {
                c.clone()
            }
        })
    }

    /// Weight Euler operator: each weight-`k` component is multiplied by `k`.
    pub fn euler_apply(&self) -> Self {
        let chart = Arc::clone(&self.chart);
        self.map_terms(|m, c| c * integer(m.weight(&chart)))
    }

    /// Re-express on another chart, matching generators by name.
    pub fn transport(&self, target: &Arc<Chart>) -> Result<Self> {
        if same_chart(&self.chart, target) {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> = self
            .chart
            .generators()
            .iter()
            .map(|g| target.index_of(&g.name))
            .collect();
        for (src, dst) in map.iter().enumerate() {
            let Some(dst) = *dst else { continue };
            let g = target.generator(dst);
            let s = self.chart.generator(src);
            if g.weight != s.weight || g.form_degree() != s.form_degree() {
                return Err(Error::ChartMismatch);
            }
        }
        let lookup = |src: usize| {
            map[src].ok_or_else(|| Error::UnknownCoordinate(self.chart.generator(src).name.clone()))
        };
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            if m.exp_power != 0 && target.time_index().is_none() {
                return Err(Error::NoTimeCoordinate);
            }
            let mut exps = vec![0u16; target.len()];
            let mut odd_targets = Vec::new();
            for (src, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    let dst = lookup(src)?;
                    exps[dst] = e;
                    if self.chart.generator(src).is_odd() {
                        odd_targets.push(dst);
                    }
                }
            }
            let inversions = odd_targets
                .iter()
                .enumerate()
                .map(|(i, a)| odd_targets[i + 1..].iter().filter(|b| *b < a).count())
                .sum::<usize>();
            let coeff = if inversions % 2 == 1 { -c.clone() } else { c.clone() };
            out.insert(
                Monomial {
                    exps,
                    exp_power: m.exp_power,
                },
                coeff,
            );
        }
        Ok(out)
    }

    /// Largest absolute numerator/denominator size, for diagnostics.
    pub fn max_coefficient(&self) -> Option<Coefficient> {
        self.terms.values().map(|c| c.abs()).max()
    }
}

impl fmt::Debug for GradedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedPolynomial({self})")
    }
}

impl fmt::Display for GradedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::io::printer::print_polynomial(self))
    }
}

// Operator forms panic on chart mismatch; use the `try_*`/`multiply` methods
// when operands come from unrelated charts.

impl Add for &GradedPolynomial {
    type Output = GradedPolynomial;
    fn add(self, rhs: &GradedPolynomial) -> GradedPolynomial {
        self.try_add(rhs).expect("chart mismatch in addition")
    }
}

impl Sub for &GradedPolynomial {
    type Output = GradedPolynomial;
    fn sub(self, rhs: &GradedPolynomial) -> GradedPolynomial {
        self.try_sub(rhs).expect("chart mismatch in subtraction")
    }
}

impl Mul for &GradedPolynomial {
    type Output = GradedPolynomial;
    fn mul(self, rhs: &GradedPolynomial) -> GradedPolynomial {
        self.multiply(rhs).expect("chart mismatch in multiplication")
    }
}

impl Neg for &GradedPolynomial {
    type Output = GradedPolynomial;
    fn neg(self) -> GradedPolynomial {
        self.scale_int(-1)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for GradedPolynomial {
            type Output = GradedPolynomial;
            fn $m(self, rhs: GradedPolynomial) -> GradedPolynomial {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&GradedPolynomial> for GradedPolynomial {
            type Output = GradedPolynomial;
            fn $m(self, rhs: &GradedPolynomial) -> GradedPolynomial {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for GradedPolynomial {
    type Output = GradedPolynomial;
    fn neg(self) -> GradedPolynomial {
        (&self).neg()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::chart::{make_chart, CoordinateKind::*, CoordinateSpec};

    fn chart() -> Arc<Chart> {
        make_chart(&[
            CoordinateSpec::new("x", 0, Base),
            CoordinateSpec::new("y", 0, Base),
            CoordinateSpec::new("p_x", 1, Momentum),
            CoordinateSpec::new("p_y", 1, Momentum),
            CoordinateSpec::new("θ", 1, Theta),
            CoordinateSpec::new("t", 0, Time),
        ])
        .unwrap()
    }

    fn g(c: &Arc<Chart>, n: &str) -> GradedPolynomial {
        GradedPolynomial::generator(c, n).unwrap()
    }

    /// Brute-force oracle: a word of generators is sorted into chart order by
    /// adjacent transpositions, flipping the sign whenever two odd generators swap.
    fn word_product(c: &Arc<Chart>, word: &[&str]) -> GradedPolynomial {
        let mut idx: Vec<usize> = word.iter().map(|n| c.require(n).unwrap()).collect();
        let mut negative = false;
        for i in 0..idx.len() {
            for j in 0..idx.len() - 1 - i {
                if idx[j] > idx[j + 1] {
                    if c.generator(idx[j]).is_odd() && c.generator(idx[j + 1]).is_odd() {
                        negative = !negative;
                    }
                    idx.swap(j, j + 1);
                }
            }
        }
        let mut exps = vec![0u16; c.len()];
        for i in idx {
            exps[i] += 1;
        }
        let coeff = if negative { integer(-1) } else { integer(1) };
        GradedPolynomial::from_monomial(c, exps, 0, coeff).unwrap()
    }

    #[test]
    fn odd_square_vanishes() {
        let c = chart();
        assert!((&g(&c, "p_x") * &g(&c, "p_x")).is_zero());
    }

    #[test]
    fn odd_transposition_sign() {
        let c = chart();
        let (px, py) = (g(&c, "p_x"), g(&c, "p_y"));
        assert_eq!(&py * &px, -(&px * &py));
        assert_eq!(&px * &py, word_product(&c, &["p_x", "p_y"]));
    }

    #[test]
    fn mixed_product_matches_transposition_oracle() {
        let c = chart();
        let lhs = &(&g(&c, "x") + &(&g(&c, "p_x") * &g(&c, "θ"))) * &g(&c, "y");
        let oracle = word_product(&c, &["x", "y"]) + word_product(&c, &["p_x", "θ", "y"]);
        assert_eq!(lhs, oracle);
        let w = word_product(&c, &["θ", "dx", "p_y", "p_x"]);
        let prod = &(&(&g(&c, "θ") * &g(&c, "dx")) * &g(&c, "p_y")) * &g(&c, "p_x");
        assert_eq!(prod, w);
    }

    #[test]
    fn derivative_examples() {
        let c = chart();
        let x = g(&c, "x");
        assert_eq!((&x * &x).partial_derivative("x").unwrap(), x.scale_int(2));
        let pxpy = &g(&c, "p_x") * &g(&c, "p_y");
        // moving d/dp_y past p_x costs one sign
        assert_eq!(pxpy.partial_derivative("p_y").unwrap(), -g(&c, "p_x"));
        assert_eq!(pxpy.partial_derivative("p_x").unwrap(), g(&c, "p_y"));
        let e2x = x.times_exp(2).unwrap();
        assert_eq!(e2x.partial_derivative("t").unwrap(), x.scale_int(2).times_exp(2).unwrap());
        assert!(matches!(
            x.partial_derivative("nope"),
            Err(Error::UnknownCoordinate(_))
        ));
    }

    #[test]
    fn degree_queries() {
        let c = chart();
        let px = g(&c, "p_x");
        assert_eq!(px.weight(), Degree::Exact(1));
        assert_eq!(px.form_degree(), Degree::Exact(0));
        assert_eq!(px.total_degree(), Degree::Exact(1));
        let dtheta = g(&c, "dθ");
        assert_eq!(dtheta.weight(), Degree::Exact(1));
        assert_eq!(dtheta.form_degree(), Degree::Exact(1));
        assert_eq!(dtheta.total_degree(), Degree::Exact(2));
        assert_eq!((&g(&c, "x") + &px).weight(), Degree::Mixed);
        assert_eq!(GradedPolynomial::zero(&c).weight(), Degree::Zero);
    }

    #[test]
    fn euler_examples() {
        let c = chart();
        assert!(g(&c, "x").euler_apply().is_zero());
        assert_eq!(g(&c, "θ").euler_apply(), g(&c, "θ"));
        let m = &(&g(&c, "x") * &g(&c, "p_x")) * &g(&c, "p_y");
        assert_eq!(m.euler_apply(), m.scale_int(2));
        assert_eq!(g(&c, "dθ").euler_apply(), g(&c, "dθ"));
    }

    #[test]
    fn chart_mismatch() {
        let c = chart();
        let other = make_chart(&[CoordinateSpec::new("x", 0, Base)]).unwrap();
        let a = g(&c, "x");
        let b = g(&other, "x");
        assert_eq!(a.multiply(&b), Err(Error::ChartMismatch));
        assert_eq!(b.transport(&c).unwrap(), a);
    }

    #[test]
    fn transport_reorders_with_sign() {
        let c = chart();
        let rev = make_chart(&[
            CoordinateSpec::new("p_y", 1, Momentum),
            CoordinateSpec::new("p_x", 1, Momentum),
        ])
        .unwrap();
        let p = &g(&rev, "p_y") * &g(&rev, "p_x");
        assert_eq!(p.transport(&c).unwrap(), -(&g(&c, "p_x") * &g(&c, "p_y")));
    }
}
