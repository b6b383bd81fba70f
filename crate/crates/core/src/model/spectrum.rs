use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which operator a spectrum belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    DiracSquared,
    Laplace,
}

impl OperatorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OperatorKind::DiracSquared => "dirac_squared",
            OperatorKind::Laplace => "laplace",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralEntry {
    pub value: f64,
    pub multiplicity: usize,
}

/// Ascending eigenvalues with multiplicities.
///
/// Indexing is 1-based and multiplicity-repeated: `gamma(1) <= gamma(2) <= ...`.
/// `gamma_bar(i)` is the i-th nonzero eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    operator: OperatorKind,
    entries: Vec<SpectralEntry>,
    zero_dim: usize,
    total: usize,
}

impl Spectrum {
    pub fn new(operator: OperatorKind, entries: Vec<SpectralEntry>) -> Result<Self> {
        for (i, e) in entries.iter().enumerate() {
            if !e.value.is_finite() || e.value < 0.0 {
                return Err(Error::InvalidRequest(format!(
                    "eigenvalue {} is negative or not finite",
                    e.value
                )));
            }
            if e.multiplicity == 0 {
                return Err(Error::InvalidRequest("zero multiplicity".into()));
            }
            if i > 0 && entries[i - 1].value >= e.value {
                return Err(Error::InvalidRequest(
                    "spectrum values must be strictly increasing".into(),
                ));
            }
        }
        let zero_dim = entries
            .first()
            .filter(|e| e.value == 0.0)
            .map_or(0, |e| e.multiplicity);
        let total = entries.iter().map(|e| e.multiplicity).sum();
        Ok(Self {
            operator,
            entries,
            zero_dim,
            total,
        })
    }

    /// Group sorted values into entries; values within `rel_tol` (relative to the
    /// first member of a group) share an entry. Zero only groups with exact zeros.
    pub fn from_sorted_values(operator: OperatorKind, values: &[f64], rel_tol: f64) -> Result<Self> {
        let mut entries: Vec<SpectralEntry> = Vec::new();
        let mut anchor = f64::NAN;
        for &v in values {
            match entries.last_mut() {
                Some(last) if v - anchor <= rel_tol * anchor.abs() => last.multiplicity += 1,
                _ => {
                    if let Some(last) = entries.last() {
                        if v < last.value {
                            return Err(Error::InvalidRequest("values are not sorted".into()));
                        }
                    }
                    anchor = v;
                    entries.push(SpectralEntry {
                        value: v,
                        multiplicity: 1,
                    });
                }
            }
        }
        Self::new(operator, entries)
    }

    pub fn operator(&self) -> OperatorKind {
        self.operator
    }

    pub fn entries(&self) -> &[SpectralEntry] {
        &self.entries
    }

    /// Number of eigenvalues counted with multiplicity.
    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn zero_dim(&self) -> usize {
        self.zero_dim
    }

    /// Γ_j, 1-based with multiplicity repetition.
    pub fn gamma(&self, j: usize) -> Result<f64> {
        if j == 0 || j > self.total {
            return Err(Error::IndexOutOfRange {
                requested: j,
                available: self.total,
            });
        }
        let mut seen = 0;
        for e in &self.entries {
            seen += e.multiplicity;
            if j <= seen {
                return Ok(e.value);
            }
        }
        unreachable!("index checked against total")
    }

    /// Multiplicity-repeated values.
    pub fn values(&self) -> Vec<f64> {
        self.entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.value, e.multiplicity))
            .collect()
    }

    /// Keep only the first `count` eigenvalues (with multiplicity).
    pub fn truncated(&self, count: usize) -> Spectrum {
        let mut left = count;
        let mut entries = Vec::new();
        for e in &self.entries {
            if left == 0 {
                break;
            }
            let m = e.multiplicity.min(left);
            entries.push(SpectralEntry {
                value: e.value,
                multiplicity: m,
            });
            left -= m;
        }
        Spectrum::new(self.operator, entries).expect("subset of a valid spectrum")
    }

    /// Multiply every eigenvalue by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Spectrum {
        let entries = self
            .entries
            .iter()
            .map(|e| SpectralEntry {
                value: e.value * factor,
                multiplicity: e.multiplicity,
            })
            .collect();
        Spectrum::new(self.operator, entries).expect("positive scaling preserves order")
    }
}

/// Anything that can be indexed as Γ_1 ≤ Γ_2 ≤ ... with a known zero-mode count.
pub trait EigenvalueSource {
    /// Number of eigenvalues available, counted with multiplicity.
    fn available(&self) -> usize;

    /// Γ_j, 1-based.
    fn gamma(&self, j: usize) -> Result<f64>;

    fn zero_dim(&self) -> usize;

    /// Short label recorded as provenance in reports.
    fn label(&self) -> String;

    /// i-th nonzero eigenvalue Γ̄_i = Γ_{m+i}.
    fn gamma_bar(&self, i: usize) -> Result<f64> {
        if i == 0 {
            return Err(Error::IndexOutOfRange {
                requested: 0,
                available: self.available().saturating_sub(self.zero_dim()),
            });
        }
        self.gamma(self.zero_dim() + i).map_err(|_| Error::IndexOutOfRange {
            requested: i,
            available: self.available().saturating_sub(self.zero_dim()),
        })
    }
}

impl EigenvalueSource for Spectrum {
    fn available(&self) -> usize {
        self.total
    }

    fn gamma(&self, j: usize) -> Result<f64> {
        Spectrum::gamma(self, j)
    }

    fn zero_dim(&self) -> usize {
        self.zero_dim
    }

    fn label(&self) -> String {
        format!("closed_form:{}", self.operator.as_str())
    }
}

#[derive(Serialize, Deserialize)]
struct SpectrumRepr {
    operator: OperatorKind,
    entries: Vec<(f64, usize)>,
}

impl Serialize for Spectrum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpectrumRepr {
            operator: self.operator,
            entries: self.entries.iter().map(|e| (e.value, e.multiplicity)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Spectrum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = SpectrumRepr::deserialize(d)?;
        let entries = repr
            .entries
            .into_iter()
            .map(|(value, multiplicity)| SpectralEntry {
                value,
                multiplicity,
            })
            .collect();
        Spectrum::new(repr.operator, entries).map_err(serde::de::Error::custom)
    }
}
