//! Plain-text program format.
//!
//! Line-oriented, ASCII, LF-terminated. The first significant line is the
//! header `SLPv1 p=<p> m=<m> g=<g>`; then one line per instruction in id
//! order (`<id> ONE` / `<id> ADD <a> <b>` / `<id> SQRT <a>`); then period
//! labels `LABEL <id> T <k> <r>` and pool constants `CONST <id> <value>`.
//! `#` starts a comment; blank lines are ignored. Parsing re-validates
//! everything the builder guarantees, so a parsed program is structurally
//! sound even from an untrusted file.

use super::{Instruction, NodeId, Program, FORMAT_VERSION};
use crate::ntheory::FermatContext;
use crate::periods::PeriodId;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    line: usize,
    msg: String,
}

impl ParseError {
    fn new(line: usize, msg: impl Into<String>) -> Self {
        ParseError {
            line,
            msg: msg.into(),
        }
    }

    /// 1-based line the error was found on; 0 for end-of-input errors.
    pub fn line(&self) -> usize {
        self.line
    }

    pub fn message(&self) -> &str {
        &self.msg
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.msg)
    }
}

pub fn serialize(program: &Program) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} p={} m={} g={}",
        FORMAT_VERSION,
        program.p(),
        program.m(),
        program.g()
    );
    for (id, instr) in program.instructions().iter().enumerate() {
        let _ = write!(out, "{id} {}", instr.opcode());
        for op in instr.operands() {
            let _ = write!(out, " {op}");
        }
        out.push('\n');
    }
    for (pid, node) in program.labels() {
        let _ = writeln!(out, "LABEL {node} T {} {}", pid.k(), pid.r());
    }
    for (value, node) in program.constants() {
        let _ = writeln!(out, "CONST {node} {value}");
    }
    out
}

fn parse_num<T: core::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, ParseError> {
    tok.parse()
        .map_err(|_| ParseError::new(line, format!("invalid {what} `{tok}`")))
}

fn parse_header(tokens: &[&str], line: usize) -> Result<FermatContext, ParseError> {
    if tokens.len() != 4 || tokens[0] != FORMAT_VERSION {
        return Err(ParseError::new(
            line,
            format!("expected header `{FORMAT_VERSION} p=<p> m=<m> g=<g>`"),
        ));
    }
    let mut fields = [0u64; 3];
    for (tok, (key, slot)) in tokens[1..]
        .iter()
        .zip([("p", 0usize), ("m", 1), ("g", 2)])
    {
        let val = tok
            .strip_prefix(key)
            .and_then(|rest| rest.strip_prefix('='))
            .ok_or_else(|| ParseError::new(line, format!("expected `{key}=<int>`, got `{tok}`")))?;
        fields[slot] = parse_num(val, line, key)?;
    }
    let ctx = FermatContext::with_root(fields[0], fields[2])
        .map_err(|e| ParseError::new(line, e.to_string()))?;
    if u64::from(ctx.m()) != fields[1] {
        return Err(ParseError::new(
            line,
            format!("m={} does not match p={}", fields[1], fields[0]),
        ));
    }
    Ok(ctx)
}

fn parse_operands(
    tokens: &[&str],
    arity: usize,
    id: NodeId,
    line: usize,
) -> Result<[NodeId; 2], ParseError> {
    if tokens.len() != arity {
        return Err(ParseError::new(
            line,
            format!("expected {arity} operand(s), got {}", tokens.len()),
        ));
    }
    let mut ops = [0usize; 2];
    for (slot, tok) in ops.iter_mut().zip(tokens) {
        let op: NodeId = parse_num(tok, line, "operand")?;
        if op >= id {
            return Err(ParseError::new(
                line,
                format!("operand {op} does not precede node {id}"),
            ));
        }
        *slot = op;
    }
    Ok(ops)
}

pub fn parse(text: &str) -> Result<Program, ParseError> {
    let mut ctx: Option<FermatContext> = None;
    let mut instructions: Vec<Instruction> = Vec::new();
    let mut labels: BTreeMap<PeriodId, NodeId> = BTreeMap::new();
    let mut constants: BTreeMap<u64, NodeId> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = body.split_whitespace().collect();

        let Some(ctx) = ctx.as_ref() else {
            ctx = Some(parse_header(&tokens, line)?);
            continue;
        };

        match tokens[0] {
            "LABEL" => {
                if tokens.len() != 5 || tokens[2] != "T" {
                    return Err(ParseError::new(line, "expected `LABEL <id> T <k> <r>`"));
                }
                let node: NodeId = parse_num(tokens[1], line, "node id")?;
                if node >= instructions.len() {
                    return Err(ParseError::new(line, format!("unknown node {node}")));
                }
                let k: u32 = parse_num(tokens[3], line, "level")?;
                let r: u64 = parse_num(tokens[4], line, "residue")?;
                if k > ctx.m() {
                    return Err(ParseError::new(line, format!("level {k} exceeds m")));
                }
                if r >= 1u64 << k {
                    return Err(ParseError::new(
                        line,
                        format!("residue {r} out of range for level {k}"),
                    ));
                }
                if labels.insert(PeriodId::new(k, r), node).is_some() {
                    return Err(ParseError::new(line, format!("duplicate label T[{k},{r}]")));
                }
            }
            "CONST" => {
                if tokens.len() != 3 {
                    return Err(ParseError::new(line, "expected `CONST <id> <value>`"));
                }
                let node: NodeId = parse_num(tokens[1], line, "node id")?;
                if node >= instructions.len() {
                    return Err(ParseError::new(line, format!("unknown node {node}")));
                }
                let value: u64 = parse_num(tokens[2], line, "value")?;
                if value > ctx.p() {
                    return Err(ParseError::new(
                        line,
                        format!("constant {value} exceeds p"),
                    ));
                }
                if constants.insert(value, node).is_some() {
                    return Err(ParseError::new(line, format!("duplicate constant {value}")));
                }
            }
            _ => {
                let id: NodeId = parse_num(tokens[0], line, "node id")?;
                if id != instructions.len() {
                    return Err(ParseError::new(
                        line,
                        format!("expected node id {}, got {id}", instructions.len()),
                    ));
                }
                if tokens.len() < 2 {
                    return Err(ParseError::new(line, "missing opcode"));
                }
                let rest = &tokens[2..];
                let instr = match tokens[1] {
                    "ONE" => {
                        if id != 0 {
                            return Err(ParseError::new(line, "ONE is only instruction 0"));
                        }
                        if !rest.is_empty() {
                            return Err(ParseError::new(line, "ONE takes no operands"));
                        }
                        Instruction::One
                    }
                    "ADD" | "SUB" | "MUL" | "DIV" => {
                        let [a, b] = parse_operands(rest, 2, id, line)?;
                        match tokens[1] {
                            "ADD" => Instruction::Add(a, b),
                            "SUB" => Instruction::Sub(a, b),
                            "MUL" => Instruction::Mul(a, b),
                            _ => Instruction::Div(a, b),
                        }
                    }
                    "SQRT" => {
                        let [a, _] = parse_operands(rest, 1, id, line)?;
                        Instruction::Sqrt(a)
                    }
                    other => {
                        return Err(ParseError::new(line, format!("unknown opcode `{other}`")));
                    }
                };
                if id == 0 && !matches!(instr, Instruction::One) {
                    return Err(ParseError::new(line, "instruction 0 must be ONE"));
                }
                instructions.push(instr);
            }
        }
    }

    let Some(ctx) = ctx else {
        return Err(ParseError::new(0, "missing header"));
    };
    if instructions.is_empty() {
        return Err(ParseError::new(0, "program has no instructions"));
    }
    Ok(Program::from_parts(
        ctx.p(),
        ctx.m(),
        ctx.g(),
        instructions,
        labels,
        constants,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::build_program;

    fn sample(p: u64) -> Program {
        build_program(&FermatContext::new(p).unwrap(), 64).unwrap()
    }

    #[test]
    fn p3_serializes_to_known_text() {
        let text = serialize(&sample(3));
        let want = "\
SLPv1 p=3 m=1 g=2
0 ONE
1 SUB 0 0
2 ADD 0 0
3 ADD 2 0
4 SUB 1 0
5 MUL 2 2
6 SUB 0 5
7 SQRT 6
8 ADD 4 7
9 SUB 4 7
10 DIV 8 2
11 DIV 9 2
LABEL 4 T 0 0
LABEL 10 T 1 0
LABEL 11 T 1 1
CONST 1 0
CONST 0 1
CONST 2 2
CONST 3 3
";
        assert_eq!(text, want);
    }

    #[test]
    fn round_trip_preserves_programs() {
        for p in [3u64, 5, 17] {
            let prog = sample(p);
            let text = serialize(&prog);
            let back = parse(&text).unwrap();
            assert_eq!(prog, back, "p={p}");
            assert_eq!(serialize(&back), text, "p={p}");
        }
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "\
# a root-finding program
SLPv1 p=3 m=1 g=2

0 ONE   # the only source
1 SUB 0 0
LABEL 1 T 0 0
";
        let prog = parse(text).unwrap();
        assert_eq!(prog.node_count(), 2);
        assert_eq!(prog.label_node(PeriodId::new(0, 0)), Some(1));
    }

    fn expect_err(text: &str, want_line: usize, want_fragment: &str) {
        let err = parse(text).unwrap_err();
        assert_eq!(err.line(), want_line, "{err}");
        assert!(
            err.message().contains(want_fragment),
            "`{err}` does not mention `{want_fragment}`"
        );
    }

    #[test]
    fn rejects_malformed_input() {
        expect_err("", 0, "missing header");
        expect_err("SLPv1 p=3 m=1 g=2\n", 0, "no instructions");
        expect_err("SLPv2 p=3 m=1 g=2\n0 ONE\n", 1, "expected header");
        expect_err("SLPv1 p=4 m=2 g=3\n0 ONE\n", 1, "not");
        expect_err("SLPv1 p=3 m=2 g=2\n0 ONE\n", 1, "does not match");
        expect_err("SLPv1 p=3 m=1 g=1\n0 ONE\n", 1, "not");
        expect_err("SLPv1 p=3 m=1 g=2\n0 ADD 0 0\n", 2, "operand");
        expect_err("SLPv1 p=3 m=1 g=2\n0 ONE\n2 SUB 0 0\n", 3, "expected node id 1");
        expect_err("SLPv1 p=3 m=1 g=2\n0 ONE\n1 ONE\n", 3, "only instruction 0");
        expect_err("SLPv1 p=3 m=1 g=2\n0 ONE\n1 SUB 0 1\n", 3, "precede");
        expect_err("SLPv1 p=3 m=1 g=2\n0 ONE\n1 NEG 0\n", 3, "unknown opcode");
        expect_err("SLPv1 p=3 m=1 g=2\n0 ONE\n1 SQRT 0 0\n", 3, "operand");
        expect_err("SLPv1 p=3 m=1 g=2\n0 ONE\nLABEL 5 T 0 0\n", 3, "unknown node");
        expect_err("SLPv1 p=3 m=1 g=2\n0 ONE\nLABEL 0 T 2 0\n", 3, "exceeds m");
        expect_err("SLPv1 p=3 m=1 g=2\n0 ONE\nLABEL 0 T 1 2\n", 3, "out of range");
        expect_err(
            "SLPv1 p=3 m=1 g=2\n0 ONE\nLABEL 0 T 0 0\nLABEL 0 T 0 0\n",
            4,
            "duplicate label",
        );
        expect_err("SLPv1 p=3 m=1 g=2\n0 ONE\nCONST 0 7\n", 3, "exceeds p");
        expect_err(
            "SLPv1 p=3 m=1 g=2\n0 ONE\nCONST 0 1\nCONST 0 1\n",
            4,
            "duplicate constant",
        );
    }

    #[test]
    fn error_display_includes_line() {
        let err = parse("SLPv1 p=3 m=1 g=2\n0 ONE\n1 NEG 0\n").unwrap_err();
        assert_eq!(format!("{err}"), "line 3: unknown opcode `NEG`");
    }
}
