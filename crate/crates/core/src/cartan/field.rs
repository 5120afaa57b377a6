use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded::poly::same_chart;
use crate::graded::{integer, Chart, Coefficient, CoordinateKind, Degree, GradedPolynomial};

/// A graded derivation `sum_c X^c d/dc` acting from the left.
///
/// Components are indexed by the generator index of a coordinate (never a
/// form shift) and hold functions. Only nonzero components are stored.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorField {
    chart: Arc<Chart>,
    components: BTreeMap<usize, GradedPolynomial>,
}

impl VectorField {
    pub fn zero(chart: &Arc<Chart>) -> Self {
        VectorField {
            chart: Arc::clone(chart),
            components: BTreeMap::new(),
        }
    }

    /// `d/dc` for the named coordinate.
    pub fn coordinate(chart: &Arc<Chart>, name: &str) -> Result<Self> {
        let idx = chart.require(name)?;
        Self::from_indexed(chart, [(idx, GradedPolynomial::one(chart))])
    }

    pub fn new<'a>(
        chart: &Arc<Chart>,
        components: impl IntoIterator<Item = (&'a str, GradedPolynomial)>,
    ) -> Result<Self> {
        let indexed = components
            .into_iter()
            .map(|(name, p)| Ok((chart.require(name)?, p)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_indexed(chart, indexed)
    }

    pub fn from_indexed(
        chart: &Arc<Chart>,
        components: impl IntoIterator<Item = (usize, GradedPolynomial)>,
    ) -> Result<Self> {
        let mut out = Self::zero(chart);
        for (idx, p) in components {
            let gen = chart.generator(idx);
            if gen.kind == CoordinateKind::FormShift {
                return Err(Error::InvalidComponent(
                    gen.name.clone(),
                    "vector fields have no components along form shifts".into(),
                ));
            }
            let p = p.transport(chart)?;
            if !p.is_function() {
                return Err(Error::InvalidComponent(
                    gen.name.clone(),
                    "coefficient contains form generators".into(),
                ));
            }
            out.add_component(idx, p);
        }
        Ok(out)
    }

    fn add_component(&mut self, idx: usize, p: GradedPolynomial) {
        let sum = match self.components.remove(&idx) {
            Some(old) => &old + &p,
            None => p,
        };
        if !sum.is_zero() {
            self.components.insert(idx, sum);
        }
    }

    /// The Euler field `sum_c |c| c d/dc`.
    pub fn euler(chart: &Arc<Chart>) -> Self {
        let comps = chart
            .coordinates()
            .iter()
            .filter(|&&c| chart.generator(c).weight > 0)
            .map(|&c| {
                let w = i64::from(chart.generator(c).weight);
                (c, GradedPolynomial::generator_at(chart, c).scale_int(w))
            })
            .collect::<Vec<_>>();
        Self::from_indexed(chart, comps).expect("euler components are valid")
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &GradedPolynomial)> {
        self.components.iter().map(|(&i, p)| (i, p))
    }

    pub fn component(&self, idx: usize) -> GradedPolynomial {
        self.components
            .get(&idx)
            .cloned()
            .unwrap_or_else(|| GradedPolynomial::zero(&self.chart))
    }

    pub fn component_named(&self, name: &str) -> Result<GradedPolynomial> {
        Ok(self.component(self.chart.require(name)?))
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// `|X| = |X^c| - |c|`, common to every nonzero component.
    pub fn degree(&self) -> Degree {
        let mut acc = Degree::Zero;
        for (&c, p) in &self.components {
            let shift = i64::from(self.chart.generator(c).weight);
            for (m, _) in p.terms() {
                let d = m.total_degree(&self.chart) - shift;
                acc = match acc {
                    Degree::Zero => Degree::Exact(d),
                    Degree::Exact(e) if e == d => acc,
                    _ => return Degree::Mixed,
                };
            }
        }
        acc
    }

    /// Degree for use in sign exponents, rejecting mixed fields.
    pub fn sign_degree(&self) -> Result<i64> {
        self.degree().for_signs().ok_or(Error::NonHomogeneousField)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if !same_chart(&self.chart, &other.chart) {
            return Err(Error::ChartMismatch);
        }
        let mut out = self.clone();
        for (&i, p) in &other.components {
            out.add_component(i, p.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&integer(-1)))
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        let mut out = Self::zero(&self.chart);
        for (&i, p) in &self.components {
            out.add_component(i, p.scale(c));
        }
        out
    }

    /// The field `f X`, i.e. components `f X^c`.
    pub fn left_multiply(&self, f: &GradedPolynomial) -> Result<Self> {
        if !f.is_function() {
            return Err(Error::InvalidComponent(
                "multiplier".into(),
                "must be a function".into(),
            ));
        }
        let mut out = Self::zero(&self.chart);
        for (&i, p) in &self.components {
            out.add_component(i, f.multiply(p)?);
        }
        Ok(out)
    }

    /// `X(f) = sum_c X^c df/dc`.
    pub fn apply(&self, f: &GradedPolynomial) -> Result<GradedPolynomial> {
        if !same_chart(&self.chart, f.chart()) {
            return Err(Error::ChartMismatch);
        }
        let mut out = GradedPolynomial::zero(&self.chart);
        for (&c, coeff) in &self.components {
            let df = f.derivative_at(c);
            if !df.is_zero() {
                out = &out + &(coeff * &df);
            }
        }
        Ok(out)
    }

    pub fn transport(&self, target: &Arc<Chart>) -> Result<Self> {
        if same_chart(&self.chart, target) {
            return Ok(self.clone());
        }
        let mut out = Self::zero(target);
        for (&c, p) in &self.components {
            let idx = target.require(&self.chart.generator(c).name)?;
            out.add_component(idx, p.transport(target)?);
        }
        Ok(out)
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::io::printer::print_vector_field(self))
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField({self})")
    }
}
