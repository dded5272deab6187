//! Graphviz rendering of a program's dataflow, for eyeballing small cases.

use super::Program;
use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt::Write as _;

/// DOT digraph with one node per instruction and one edge per operand.
/// Period labels and pool-constant values are folded into node labels.
pub fn export_dot(program: &Program) -> String {
    let mut period_of: BTreeMap<usize, (u32, u64)> = BTreeMap::new();
    for (pid, node) in program.labels() {
        period_of.insert(node, (pid.k(), pid.r()));
    }
    let mut const_of: BTreeMap<usize, u64> = BTreeMap::new();
    for (value, node) in program.constants() {
        const_of.insert(node, value);
    }

    let mut out = String::new();
    out.push_str("digraph slp {\n  rankdir=BT;\n  node [shape=box];\n");
    for (id, instr) in program.instructions().iter().enumerate() {
        let _ = write!(out, "  n{id} [label=\"{id} {}", instr.opcode());
        if let Some((k, r)) = period_of.get(&id) {
            let _ = write!(out, "\\nT[{k},{r}]");
        }
        if let Some(v) = const_of.get(&id) {
            let _ = write!(out, "\\n= {v}");
        }
        out.push_str("\"];\n");
    }
    for (id, instr) in program.instructions().iter().enumerate() {
        for op in instr.operands() {
            let _ = writeln!(out, "  n{op} -> n{id};");
        }
    }
    out.push_str("}\n");
    out
}
