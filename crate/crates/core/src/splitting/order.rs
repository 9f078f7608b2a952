//! First- and second-order conditions for N-split methods.
//!
//! Order 1: every column sums to one. Order 2: for each pair `l1 < l2`,
//! `sum_{k>=2} alpha_k^[l1] * sum_{j<k} alpha_j^[l2] = 1/2`.
//!
//! The same information is also accumulated stage by stage through the
//! `c1`/`c2` coefficients of the exponential form of the partial method.
//! With later stages composed on the right, the `c2` update reads
//!
//! ```text
//! c2_k = c2_{k-1} + a_k^l1 a_k^l2 / 2 + c1_{l1,k-1} a_k^l2 / 2 - a_k^l1 c1_{l2,k-1} / 2
//! ```
//!
//! and ends at `c2_s = c1_l1 c1_l2 / 2 - S`, where `S` is the double sum
//! above. The report keeps both routes and the gap between them.

use num_complex::Complex;
use num_traits::Zero;

use crate::scalar::{real, Scalar};

use super::MethodTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// Column `operator` sums to one.
    Consistency { operator: usize },
    /// Commutator `[D_first, D_second]` cancels (`first < second`).
    SecondOrder { first: usize, second: usize },
}

impl std::fmt::Display for Condition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Condition::Consistency { operator } => write!(f, "p1[{}]", operator + 1),
            Condition::SecondOrder { first, second } => write!(f, "p2[{},{}]", first + 1, second + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionResidual<T> {
    pub condition: Condition,
    /// Left-hand side of the condition.
    pub value: Complex<T>,
    /// `value - target`.
    pub residual: Complex<T>,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderReport<T> {
    pub first_order: Vec<ConditionResidual<T>>,
    pub second_order: Vec<ConditionResidual<T>>,
    /// `c1_{l,s}` per operator.
    pub c1: Vec<Complex<T>>,
    /// `c2_{l1,l2,s}` for `l1 < l2`, in the order of `second_order`.
    pub c2: Vec<Complex<T>>,
    /// Largest disagreement between the stagewise recursion and the closed
    /// form sums.
    pub recursion_gap: f64,
    /// Highest order (0, 1 or 2) whose conditions all hold.
    pub satisfied_through: u32,
}

impl<T: Scalar> OrderReport<T> {
    pub fn max_residual(&self, order: u32) -> f64 {
        let list = match order {
            1 => &self.first_order,
            2 => &self.second_order,
            _ => return 0.0,
        };
        list.iter().map(|r| r.magnitude).fold(0.0, f64::max)
    }

    pub fn all_residuals(&self) -> impl Iterator<Item = &ConditionResidual<T>> {
        self.first_order.iter().chain(&self.second_order)
    }
}

pub fn order_residuals<T: Scalar>(table: &MethodTable<T>) -> OrderReport<T> {
    let n = table.n_operators();
    let stages = table.stages();
    let one: Complex<T> = Complex::new(T::one(), T::zero());
    let half = real(T::from_ratio(1, 2));

    let column_sums = table.column_sums();
    let first_order: Vec<_> = column_sums
        .iter()
        .enumerate()
        .map(|(operator, sum)| {
            let residual = sum.clone() - one.clone();
            ConditionResidual {
                condition: Condition::Consistency { operator },
                magnitude: T::magnitude(&residual),
                value: sum.clone(),
                residual,
            }
        })
        .collect();

    // stagewise recursion
    let mut c1 = vec![Complex::<T>::zero(); n];
    let mut c2 = vec![vec![Complex::<T>::zero(); n]; n];
    for row in stages {
        for l1 in 0..n {
            for l2 in l1 + 1..n {
                let a1 = row[l1].clone();
                let a2 = row[l2].clone();
                let update = half.clone() * (a1.clone() * a2.clone() + c1[l1].clone() * a2 - a1 * c1[l2].clone());
                c2[l1][l2] = c2[l1][l2].clone() + update;
            }
        }
        for (acc, a) in c1.iter_mut().zip(row) {
            *acc = acc.clone() + a.clone();
        }
    }

    let mut second_order = Vec::new();
    let mut c2_flat = Vec::new();
    let mut recursion_gap: f64 = 0.0;
    for l1 in 0..n {
        for l2 in l1 + 1..n {
            // closed form: sum_k a_k^l1 * (sum_{j<k} a_j^l2)
            let mut prefix = Complex::<T>::zero();
            let mut value = Complex::<T>::zero();
            for row in stages {
                value = value + row[l1].clone() * prefix.clone();
                prefix = prefix + row[l2].clone();
            }
            let residual = value.clone() - half.clone();
            let predicted_c2 = half.clone() * c1[l1].clone() * c1[l2].clone() - value.clone();
            let gap = predicted_c2 - c2[l1][l2].clone();
            recursion_gap = recursion_gap.max(T::magnitude(&gap));
            second_order.push(ConditionResidual {
                condition: Condition::SecondOrder { first: l1, second: l2 },
                magnitude: T::magnitude(&residual),
                value,
                residual,
            });
            c2_flat.push(c2[l1][l2].clone());
        }
    }

    let holds = |list: &[ConditionResidual<T>]| list.iter().all(|r| T::negligible(&r.residual));
    let satisfied_through = if !holds(&first_order) {
        0
    } else if !holds(&second_order) {
        1
    } else {
        2
    };

    OrderReport {
        first_order,
        second_order,
        c1,
        c2: c2_flat,
        recursion_gap,
        satisfied_through,
    }
}
