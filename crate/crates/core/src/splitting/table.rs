use std::fmt;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::order::order_residuals;

/// Coefficients of an s-stage, N-split operator-splitting method.
///
/// Row `k` holds the step fractions of stage `k`. Within a stage operators
/// are applied in increasing index order, and stages are applied top to
/// bottom. Operator indices are zero-based throughout the API.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodTable<T> {
    name: String,
    n_operators: usize,
    stages: Vec<Vec<Complex<T>>>,
    design_order: u32,
}

impl<T: Scalar> MethodTable<T> {
    /// Builds a table from raw stage rows; the design order is computed from
    /// the order conditions (0 when even consistency fails, at most 2).
    pub fn from_stages(name: impl Into<String>, stages: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let n_operators = check_shape(&stages)?;
        let mut table = Self {
            name: name.into(),
            n_operators,
            stages,
            design_order: 0,
        };
        table.design_order = order_residuals(&table).satisfied_through;
        Ok(table)
    }

    pub(crate) fn with_order(name: impl Into<String>, stages: Vec<Vec<Complex<T>>>, design_order: u32) -> Self {
        let n_operators = check_shape(&stages).expect("generator produced a malformed table");
        Self {
            name: name.into(),
            n_operators,
            stages,
            design_order,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_operators(&self) -> usize {
        self.n_operators
    }

    pub fn n_stages(&self) -> usize {
        self.stages.len()
    }

    pub fn stages(&self) -> &[Vec<Complex<T>>] {
        &self.stages
    }

    /// `alpha_k^[l]` with zero-based `stage` and `operator`.
    pub fn coefficient(&self, stage: usize, operator: usize) -> &Complex<T> {
        &self.stages[stage][operator]
    }

    pub fn design_order(&self) -> u32 {
        self.design_order
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub(crate) fn set_design_order(&mut self, order: u32) {
        self.design_order = order;
    }

    pub fn conjugate(&self) -> Self {
        Self {
            name: format!("{}*", self.name),
            n_operators: self.n_operators,
            stages: self
                .stages
                .iter()
                .map(|row| row.iter().map(|z| z.conj()).collect())
                .collect(),
            design_order: self.design_order,
        }
    }

    /// Multiplies every coefficient by `s` (a method run over `s * dt`).
    pub fn scaled(&self, s: &Complex<T>) -> Self {
        Self {
            name: self.name.clone(),
            n_operators: self.n_operators,
            stages: self
                .stages
                .iter()
                .map(|row| row.iter().map(|z| z.clone() * s.clone()).collect())
                .collect(),
            design_order: self.design_order,
        }
    }

    pub fn nonzero_count(&self) -> usize {
        self.stages.iter().flatten().filter(|z| !z.is_zero()).count()
    }

    /// Column sums, i.e. the total step fraction given to each operator.
    pub fn column_sums(&self) -> Vec<Complex<T>> {
        (0..self.n_operators)
            .map(|l| {
                self.stages
                    .iter()
                    .fold(Complex::zero(), |acc, row| acc + row[l].clone())
            })
            .collect()
    }

    /// True iff every nonzero coefficient has a strictly positive real part.
    pub fn has_positive_real_parts(&self) -> bool {
        self.stages
            .iter()
            .flatten()
            .filter(|z| !z.is_zero())
            .all(|z| z.re > T::zero())
    }

    /// Smallest real part among nonzero coefficients.
    pub fn min_real_part(&self) -> Option<T> {
        self.stages
            .iter()
            .flatten()
            .filter(|z| !z.is_zero())
            .map(|z| z.re.clone())
            .fold(None, |acc: Option<T>, x| match acc {
                Some(m) if m <= x => Some(m),
                _ => Some(x),
            })
    }

    pub fn convert<U: Scalar>(&self, f: impl Fn(&T) -> U) -> MethodTable<U> {
        MethodTable {
            name: self.name.clone(),
            n_operators: self.n_operators,
            stages: self
                .stages
                .iter()
                .map(|row| row.iter().map(|z| Complex::new(f(&z.re), f(&z.im))).collect())
                .collect(),
            design_order: self.design_order,
        }
    }

    /// Flattened flow order with zero fractions dropped and adjacent flows of
    /// the same operator merged.
    pub fn to_sequence(&self) -> FlowSequence<T> {
        let flows = self.stages.iter().flat_map(|row| {
            row.iter()
                .enumerate()
                .map(|(operator, z)| Flow::new(operator, z.clone()))
        });
        FlowSequence::normalized(self.n_operators, flows)
    }

    /// Greedy packing of a flow sequence into stages: a new stage starts
    /// whenever the next operator index does not exceed the previous one.
    pub fn from_sequence(name: impl Into<String>, seq: &FlowSequence<T>) -> Result<Self> {
        if seq.is_empty() {
            return Err(Error::EmptyTable);
        }
        let mut stages = Vec::new();
        let mut row = vec![Complex::zero(); seq.n_operators];
        let mut last: Option<usize> = None;
        for flow in &seq.flows {
            if last.is_some_and(|prev| flow.operator <= prev) {
                stages.push(std::mem::replace(&mut row, vec![Complex::zero(); seq.n_operators]));
            }
            row[flow.operator] = flow.fraction.clone();
            last = Some(flow.operator);
        }
        stages.push(row);
        Self::from_stages(name, stages)
    }

    /// Canonical form `from_sequence(to_sequence(table))`, keeping name and
    /// design order. An all-zero table collapses to one zero stage.
    pub fn simplify(&self) -> Self {
        let seq = self.to_sequence();
        let stages = if seq.is_empty() {
            vec![vec![Complex::zero(); self.n_operators]]
        } else {
            let packed = Self::from_sequence(self.name.clone(), &seq).expect("nonempty sequence");
            packed.stages
        };
        Self {
            name: self.name.clone(),
            n_operators: self.n_operators,
            stages,
            design_order: self.design_order,
        }
    }
}

fn check_shape<T>(stages: &[Vec<Complex<T>>]) -> Result<usize> {
    let first = stages.first().ok_or(Error::EmptyTable)?;
    let n = first.len();
    if n == 0 {
        return Err(Error::InvalidArity {
            got: 0,
            reason: "a method needs at least one operator",
        });
    }
    for (stage, row) in stages.iter().enumerate() {
        if row.len() != n {
            return Err(Error::RaggedStage {
                stage,
                got: row.len(),
                expected: n,
            });
        }
    }
    Ok(n)
}

impl<T: Scalar + fmt::Display> fmt::Display for MethodTable<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} (N = {}, {} stages, order {})",
            self.name,
            self.n_operators,
            self.stages.len(),
            self.design_order
        )?;
        for (k, row) in self.stages.iter().enumerate() {
            write!(f, "  {:>3} |", k + 1)?;
            for z in row {
                write!(f, " {z}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// One sub-flow: advance `operator` over `fraction * dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct Flow<T> {
    pub operator: usize,
    pub fraction: Complex<T>,
}

impl<T> Flow<T> {
    pub fn new(operator: usize, fraction: Complex<T>) -> Self {
        Self { operator, fraction }
    }
}

/// Merged list of sub-flows. No fraction is exactly zero and no two
/// neighbours share an operator.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowSequence<T> {
    n_operators: usize,
    flows: Vec<Flow<T>>,
}

impl<T: Scalar> FlowSequence<T> {
    /// Validates an already-merged sequence.
    pub fn new(n_operators: usize, flows: Vec<Flow<T>>) -> Result<Self> {
        if n_operators == 0 {
            return Err(Error::InvalidArity {
                got: 0,
                reason: "a sequence needs at least one operator",
            });
        }
        for (i, flow) in flows.iter().enumerate() {
            if flow.operator >= n_operators {
                return Err(Error::InvalidSequence(format!(
                    "item {i} refers to operator {} of {n_operators}",
                    flow.operator
                )));
            }
            if flow.fraction.is_zero() {
                return Err(Error::InvalidSequence(format!("item {i} has a zero fraction")));
            }
            if i > 0 && flows[i - 1].operator == flow.operator {
                return Err(Error::InvalidSequence(format!(
                    "items {} and {i} repeat operator {}",
                    i - 1,
                    flow.operator
                )));
            }
        }
        Ok(Self { n_operators, flows })
    }

    /// Merges neighbours with equal operators and drops zero fractions,
    /// including sums that cancel to zero.
    pub fn normalized(n_operators: usize, flows: impl IntoIterator<Item = Flow<T>>) -> Self {
        let mut out: Vec<Flow<T>> = Vec::new();
        for flow in flows {
            if flow.fraction.is_zero() {
                continue;
            }
            match out.last_mut() {
                Some(top) if top.operator == flow.operator => {
                    top.fraction = top.fraction.clone() + flow.fraction;
                    if top.fraction.is_zero() {
                        out.pop();
                    }
                }
                _ => out.push(flow),
            }
        }
        Self {
            n_operators,
            flows: out,
        }
    }

    pub fn n_operators(&self) -> usize {
        self.n_operators
    }

    pub fn flows(&self) -> &[Flow<T>] {
        &self.flows
    }

    pub fn len(&self) -> usize {
        self.flows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flows.is_empty()
    }

    /// Number of sub-flows given to each operator.
    pub fn flows_per_operator(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_operators];
        for flow in &self.flows {
            counts[flow.operator] += 1;
        }
        counts
    }
}
