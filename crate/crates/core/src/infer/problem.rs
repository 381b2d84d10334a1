//! Inference problems: variables with finite (or unbounded) domains, an
//! influence graph with signed and essential edges, and partial fixed-point
//! observations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::infer::InferError;
use crate::model::Value;
use crate::skolem::check_user_name;
use crate::term::{Name, Sort, SortKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkVariable {
    name: Name,
    domain: Sort,
}

impl NetworkVariable {
    pub fn boolean(name: impl Into<Name>) -> Self {
        NetworkVariable {
            name: name.into(),
            domain: Sort::BOOL,
        }
    }

    /// Integer variable with levels `0..=max_level`.
    pub fn leveled(name: impl Into<Name>, max_level: i64) -> Result<Self, InferError> {
        let name = name.into();
        if max_level < 1 {
            return Err(InferError::BadDomain {
                variable: name.to_string(),
                reason: format!("maximum level {max_level} is below 1"),
            });
        }
        Ok(NetworkVariable {
            domain: Sort::bounded_int(0, max_level)?,
            name,
        })
    }

    /// Integer variable over all naturals; accepted by the encoder only.
    pub fn unbounded(name: impl Into<Name>) -> Self {
        NetworkVariable {
            name: name.into(),
            domain: Sort::INT,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> Sort {
        self.domain
    }

    /// Domain values in ascending order, if finite.
    pub fn values(&self) -> Option<Vec<Value>> {
        Value::domain(&self.domain)
    }

    pub fn is_bounded(&self) -> bool {
        self.domain.kind() == SortKind::Bool || self.domain.bounds().is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Monotone,
    AntiMonotone,
    Unknown,
}

impl Sign {
    pub fn name(self) -> &'static str {
        match self {
            Sign::Monotone => "monotone",
            Sign::AntiMonotone => "anti-monotone",
            Sign::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An edge `source → target`, both given as variable indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Regulation {
    pub source: usize,
    pub target: usize,
    pub sign: Sign,
    pub essential: bool,
}

/// A partial assignment that must extend to a fixed point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPointObservation {
    pub name: String,
    pub assignments: BTreeMap<usize, Value>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InferenceProblem {
    variables: Vec<NetworkVariable>,
    regulations: Vec<Regulation>,
    observations: Vec<FixedPointObservation>,
    regulators: Vec<Vec<usize>>,
}

impl InferenceProblem {
    pub fn new(
        variables: Vec<NetworkVariable>,
        regulations: Vec<Regulation>,
        observations: Vec<FixedPointObservation>,
    ) -> Result<Self, InferError> {
        let mut names = BTreeSet::new();
        for v in &variables {
            // `|` and `\` cannot appear inside a quoted SMT-LIB symbol.
            if check_user_name(v.name()).is_err() || v.name().contains(['|', '\\']) {
                return Err(InferError::ReservedName(v.name().into()));
            }
            if v.name().is_empty() {
                return Err(InferError::BadDomain {
                    variable: String::new(),
                    reason: "empty variable name".into(),
                });
            }
            if !names.insert(v.name()) {
                return Err(InferError::DuplicateVariable(v.name().into()));
            }
        }
        let n = variables.len();
        let var_name = |i: usize| {
            variables
                .get(i)
                .map(|v| v.name().to_string())
                .unwrap_or_else(|| format!("#{i}"))
        };
        let mut regulators = vec![Vec::new(); n];
        let mut edges = BTreeSet::new();
        for r in &regulations {
            if r.source >= n {
                return Err(InferError::UnknownVariable(var_name(r.source)));
            }
            if r.target >= n {
                return Err(InferError::UnknownVariable(var_name(r.target)));
            }
            if !edges.insert((r.source, r.target)) {
                return Err(InferError::DuplicateRegulation {
                    regulator: var_name(r.source),
                    target: var_name(r.target),
                });
            }
            regulators[r.target].push(r.source);
        }
        for regs in &mut regulators {
            regs.sort_unstable();
        }
        for o in &observations {
            if o.assignments.is_empty() {
                return Err(InferError::EmptyObservation(o.name.clone()));
            }
            for (&i, &value) in &o.assignments {
                let v = variables
                    .get(i)
                    .ok_or_else(|| InferError::UnknownVariable(var_name(i)))?;
                if !value.in_domain(&v.domain()) {
                    return Err(InferError::DomainViolation {
                        variable: v.name().into(),
                        value,
                    });
                }
            }
        }
        Ok(InferenceProblem {
            variables,
            regulations,
            observations,
            regulators,
        })
    }

    pub fn variables(&self) -> &[NetworkVariable] {
        &self.variables
    }

    pub fn regulations(&self) -> &[Regulation] {
        &self.regulations
    }

    pub fn observations(&self) -> &[FixedPointObservation] {
        &self.observations
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name() == name)
    }

    /// Regulators of `target` in variable-list order.
    pub fn regulators(&self, target: usize) -> &[usize] {
        &self.regulators[target]
    }

    pub fn regulation(&self, source: usize, target: usize) -> Option<&Regulation> {
        self.regulations
            .iter()
            .find(|r| r.source == source && r.target == target)
    }

    pub fn is_bounded(&self) -> bool {
        self.variables.iter().all(NetworkVariable::is_bounded)
    }

    /// The same problem with one more observation.
    pub fn with_observation(&self, obs: FixedPointObservation) -> Result<Self, InferError> {
        let mut observations = self.observations.clone();
        observations.push(obs);
        InferenceProblem::new(
            self.variables.clone(),
            self.regulations.clone(),
            observations,
        )
    }

    /// Builds an observation from `(variable name, value)` pairs.
    pub fn observation(
        &self,
        name: impl Into<String>,
        pairs: &[(&str, Value)],
    ) -> Result<FixedPointObservation, InferError> {
        let mut assignments = BTreeMap::new();
        for (n, v) in pairs {
            let i = self
                .variable_index(n)
                .ok_or_else(|| InferError::UnknownVariable(n.to_string()))?;
            assignments.insert(i, *v);
        }
        Ok(FixedPointObservation {
            name: name.into(),
            assignments,
        })
    }
}
