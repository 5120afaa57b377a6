use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Role a coordinate plays in the models built on top of a chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoordinateKind {
    Base,
    Momentum,
    Theta,
    Time,
    /// The odd-shifted differential `d<c>` of another coordinate.
    FormShift,
}

impl CoordinateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CoordinateKind::Base => "base",
            CoordinateKind::Momentum => "momentum",
            CoordinateKind::Theta => "theta",
            CoordinateKind::Time => "time",
            CoordinateKind::FormShift => "form-shift",
        }
    }
}

impl fmt::Display for CoordinateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A single generator of the chart's function algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coordinate {
    pub name: String,
    pub weight: u32,
    pub kind: CoordinateKind,
    /// Generator index of the underlying coordinate when `kind` is `FormShift`.
    pub shift_of: Option<usize>,
}

impl Coordinate {
    pub fn form_degree(&self) -> u32 {
        u32::from(self.kind == CoordinateKind::FormShift)
    }

    pub fn total_degree(&self) -> u32 {
        self.weight + self.form_degree()
    }

    pub fn is_odd(&self) -> bool {
        self.total_degree() % 2 == 1
    }
}

/// A local graded chart: coordinates in declaration order, each immediately
/// followed by its form-shift generator `d<name>`.
///
/// Differential forms are functions on this extended chart, so one polynomial
/// kernel serves both functions and forms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chart {
    generators: Vec<Coordinate>,
    coordinates: Vec<usize>,
    shift: Vec<Option<usize>>,
    time: Option<usize>,
}

/// Declaration entry for [`make_chart`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateSpec {
    pub name: String,
    pub weight: i64,
    pub kind: CoordinateKind,
}

impl CoordinateSpec {
    pub fn new(name: impl Into<String>, weight: i64, kind: CoordinateKind) -> Self {
        CoordinateSpec {
            name: name.into(),
            weight,
            kind,
        }
    }
}

/// Name of the form-shift generator attached to coordinate `name`.
pub fn differential_name(name: &str) -> String {
    format!("d{name}")
}

/// Build a chart from a declaration list.
pub fn make_chart(spec: &[CoordinateSpec]) -> Result<Arc<Chart>> {
    Chart::new(spec).map(Arc::new)
}

impl Chart {
    pub fn new(spec: &[CoordinateSpec]) -> Result<Self> {
        let mut generators = Vec::with_capacity(spec.len() * 2);
        let mut coordinates = Vec::with_capacity(spec.len());
        let mut seen = HashSet::new();
        let mut time = None;
        for entry in spec {
            if entry.weight < 0 {
                return Err(Error::NegativeWeight {
                    name: entry.name.clone(),
                    weight: entry.weight,
                });
            }
            if entry.kind == CoordinateKind::FormShift {
                return Err(Error::InvalidComponent(
                    entry.name.clone(),
                    "form-shift generators are created by the chart".into(),
                ));
            }
            let weight = u32::try_from(entry.weight).map_err(|_| Error::NegativeWeight {
                name: entry.name.clone(),
                weight: entry.weight,
            })?;
            if entry.kind == CoordinateKind::Time {
                if weight != 0 {
                    return Err(Error::TimeWeight(entry.name.clone()));
                }
                if time.is_some() {
                    return Err(Error::MultipleTimeCoordinates);
                }
            }
            let dname = differential_name(&entry.name);
            for n in [&entry.name, &dname] {
                if !seen.insert(n.clone()) {
                    return Err(Error::DuplicateName(n.clone()));
                }
            }
            let idx = generators.len();
            if entry.kind == CoordinateKind::Time {
                time = Some(idx);
            }
            coordinates.push(idx);
            generators.push(Coordinate {
                name: entry.name.clone(),
                weight,
                kind: entry.kind,
                shift_of: None,
            });
            generators.push(Coordinate {
                name: dname,
                weight,
                kind: CoordinateKind::FormShift,
                shift_of: Some(idx),
            });
        }
        let mut shift = vec![None; generators.len()];
        for &c in &coordinates {
            shift[c] = Some(c + 1);
        }
        Ok(Chart {
            generators,
            coordinates,
            shift,
            time,
        })
    }

    /// All generators, including form shifts, in normal-form order.
    pub fn generators(&self) -> &[Coordinate] {
        &self.generators
    }

    pub fn generator(&self, idx: usize) -> &Coordinate {
        &self.generators[idx]
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Generator indices of the underlying coordinates (no form shifts).
    pub fn coordinates(&self) -> &[usize] {
        &self.coordinates
    }

    /// Generator index of `d<c>` for the coordinate at `idx`.
    pub fn differential_of(&self, idx: usize) -> Option<usize> {
        self.shift.get(idx).copied().flatten()
    }

    pub fn time_index(&self) -> Option<usize> {
        self.time
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownCoordinate(name.to_string()))
    }

    /// Number of coordinates (form shifts excluded) of each weight, indexed by weight.
    pub fn dimension_profile(&self) -> Vec<usize> {
        let top = self
            .coordinates
            .iter()
            .map(|&c| self.generators[c].weight as usize)
            .max()
            .unwrap_or(0);
        let mut dims = vec![0; top + 1];
        for &c in &self.coordinates {
            dims[self.generators[c].weight as usize] += 1;
        }
        dims
    }

    /// Whether the profile admits a degree-`n` contact form:
    /// `dim_n = dim_0 + 1` and `dim_i = dim_{n-i}` for `0 < i < n`.
    pub fn is_contact_profile(&self, n: u32) -> bool {
        let n = n as usize;
        let mut dims = self.dimension_profile();
        if dims.len() > n + 1 {
            return false;
        }
        dims.resize(n + 1, 0);
        if n == 0 {
            return false;
        }
        dims[n] == dims[0] + 1 && (1..n).all(|i| dims[i] == dims[n - i])
    }

    /// Declaration list reproducing this chart's coordinates.
    pub fn specs(&self) -> Vec<CoordinateSpec> {
        self.coordinates
            .iter()
            .map(|&c| {
                let g = &self.generators[c];
                CoordinateSpec::new(g.name.clone(), i64::from(g.weight), g.kind)
            })
            .collect()
    }

    /// A new chart with `extra` coordinates appended.
    pub fn extended(&self, extra: &[CoordinateSpec]) -> Result<Arc<Chart>> {
        let mut specs = self.specs();
        specs.extend_from_slice(extra);
        make_chart(&specs)
    }
}
