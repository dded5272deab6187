//! Deterministic evaluation of straight-line programs over BigComplex.

use super::complex::{complex_sqrt, BigComplex};
use super::float::MIN_PRECISION;
use crate::circuit::{Instruction, NodeId, Program};
use alloc::vec::Vec;
use core::fmt;

/// Values of every node, in instruction order.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalTrace {
    values: Vec<BigComplex>,
    precision_bits: u32,
}

impl EvalTrace {
    pub fn value(&self, node: NodeId) -> &BigComplex {
        &self.values[node]
    }

    pub fn values(&self) -> &[BigComplex] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    /// A DIV whose divisor evaluated to zero at working precision.
    DivisionByZero { node: NodeId },
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::DivisionByZero { node } => {
                write!(f, "division by zero at node {node}")
            }
        }
    }
}

/// Evaluates one instruction against already-computed values.
pub(crate) fn apply_instruction(
    instr: &Instruction,
    values: &[BigComplex],
    precision_bits: u32,
    node: NodeId,
) -> Result<BigComplex, EvalError> {
    Ok(match *instr {
        Instruction::One => BigComplex::one(precision_bits),
        Instruction::Add(a, b) => values[a].add(&values[b]),
        Instruction::Sub(a, b) => values[a].sub(&values[b]),
        Instruction::Mul(a, b) => values[a].mul(&values[b]),
        Instruction::Div(a, b) => {
            if values[b].is_zero() {
                return Err(EvalError::DivisionByZero { node });
            }
            values[a].div(&values[b])
        }
        Instruction::Sqrt(a) => complex_sqrt(&values[a]),
    })
}

/// Evaluates the whole program at the given precision. The result is a pure
/// function of (program, precision): reruns are bit-identical.
pub fn eval_program(program: &Program, precision_bits: u32) -> Result<EvalTrace, EvalError> {
    assert!(
        precision_bits >= MIN_PRECISION,
        "precision below {MIN_PRECISION} bits"
    );
    let mut values = Vec::with_capacity(program.node_count());
    for (node, instr) in program.instructions().iter().enumerate() {
        let v = apply_instruction(instr, &values, precision_bits, node)?;
        values.push(v);
    }
    Ok(EvalTrace {
        values,
        precision_bits,
    })
}
