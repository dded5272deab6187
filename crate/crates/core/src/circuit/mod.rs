//! Straight-line programs over {+, -, *, /, sqrt}.
//!
//! A program is a flat list of instructions forming a DAG: instruction ids
//! are consecutive from 0, operands always point strictly backwards, and the
//! single `ONE` instruction at id 0 is the only source. Periods and pool
//! constants are attached to nodes as labels; they carry no evaluation
//! semantics but let a verifier pin every intermediate to its intended value.

mod builder;
mod dot;
mod text;

pub use builder::{build_program, BuildError, ProgramBuilder};
pub use dot::export_dot;
pub use text::{parse, serialize, ParseError};

use crate::periods::PeriodId;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

pub type NodeId = usize;

/// One instruction; operands are ids of earlier instructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Instruction {
    /// The constant 1; always and only instruction 0.
    One,
    Add(NodeId, NodeId),
    Sub(NodeId, NodeId),
    Mul(NodeId, NodeId),
    Div(NodeId, NodeId),
    Sqrt(NodeId),
}

impl Instruction {
    pub fn opcode(&self) -> &'static str {
        match self {
            Instruction::One => "ONE",
            Instruction::Add(..) => "ADD",
            Instruction::Sub(..) => "SUB",
            Instruction::Mul(..) => "MUL",
            Instruction::Div(..) => "DIV",
            Instruction::Sqrt(..) => "SQRT",
        }
    }

    /// Operand ids in argument order.
    pub fn operands(&self) -> impl Iterator<Item = NodeId> {
        let (a, b) = match *self {
            Instruction::One => (None, None),
            Instruction::Add(a, b)
            | Instruction::Sub(a, b)
            | Instruction::Mul(a, b)
            | Instruction::Div(a, b) => (Some(a), Some(b)),
            Instruction::Sqrt(a) => (Some(a), None),
        };
        a.into_iter().chain(b)
    }
}

/// A straight-line program for one Fermat prime, with period labels and the
/// constant pool recorded alongside the instructions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    p: u64,
    m: u32,
    g: u64,
    instructions: Vec<Instruction>,
    labels: BTreeMap<PeriodId, NodeId>,
    constants: BTreeMap<u64, NodeId>,
}

/// Text-format tag; bumping it invalidates serialized programs.
pub const FORMAT_VERSION: &str = "SLPv1";

impl Program {
    pub(crate) fn from_parts(
        p: u64,
        m: u32,
        g: u64,
        instructions: Vec<Instruction>,
        labels: BTreeMap<PeriodId, NodeId>,
        constants: BTreeMap<u64, NodeId>,
    ) -> Self {
        debug_assert_eq!(instructions.first(), Some(&Instruction::One));
        Program {
            p,
            m,
            g,
            instructions,
            labels,
            constants,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn g(&self) -> u64 {
        self.g
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn node_count(&self) -> usize {
        self.instructions.len()
    }

    /// Instructions excluding the free initial constant 1.
    pub fn op_count(&self) -> u64 {
        self.instructions.len() as u64 - 1
    }

    /// Period label -> node, sorted by (k, r).
    pub fn labels(&self) -> impl Iterator<Item = (PeriodId, NodeId)> + '_ {
        self.labels.iter().map(|(&id, &node)| (id, node))
    }

    pub fn label_node(&self, id: PeriodId) -> Option<NodeId> {
        self.labels.get(&id).copied()
    }

    /// Constant pool value -> node, sorted by value.
    pub fn constants(&self) -> impl Iterator<Item = (u64, NodeId)> + '_ {
        self.constants.iter().map(|(&v, &node)| (v, node))
    }

    pub fn const_node(&self, value: u64) -> Option<NodeId> {
        self.constants.get(&value).copied()
    }
}

/// 12p², the certified ceiling for the whole construction.
pub fn op_bound(p: u64) -> u64 {
    12 * p * p
}

/// Exact instruction count of the built program, without building it:
/// p constant instructions, then per level k < m-1 the 2^k products of
/// 2^k multiplies and 2^k - 1 adds plus 8 root-recovery instructions per
/// pair, and 8 per pair at the top level where the product is the constant 1.
pub fn closed_form_count(p: u64) -> u64 {
    let m = (p - 1).trailing_zeros();
    let mut total = p;
    for k in 0..m.saturating_sub(1) {
        total += (1u64 << k) * ((1u64 << (k + 1)) - 1 + 8);
    }
    total += 8 * (1u64 << (m - 1));
    total
}

/// Per-level instruction budget; `total` is [`closed_form_count`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpBudget {
    pub constants: u64,
    pub per_level: Vec<u64>,
    pub total: u64,
}

impl OpBudget {
    pub fn plan(p: u64) -> Self {
        let m = (p - 1).trailing_zeros();
        let mut per_level = Vec::with_capacity(m as usize);
        for k in 0..m {
            per_level.push(if k + 1 < m {
                (1u64 << k) * ((1u64 << (k + 1)) - 1 + 8)
            } else {
                8 * (1u64 << k)
            });
        }
        let total = p + per_level.iter().sum::<u64>();
        OpBudget {
            constants: p,
            per_level,
            total,
        }
    }
}
