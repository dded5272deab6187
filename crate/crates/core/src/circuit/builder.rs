//! Emission of the root-finding program, level by level.
//!
//! The walk starts from the full period sum T[0,0] = -1 and splits every
//! period of level k into its two refinements at level k+1: they are the
//! roots of t^2 - S·t + P, where S is the parent period and P expands over
//! the count table as P = Z + Σ_s N[k][(r-s) mod 2^k]·T[k,s] (Z = 1 only at
//! the last level, where all counts vanish). Each quadratic costs eight
//! instructions; each product 2^(k+1)-1; the constant pool costs p. Summed,
//! that is the closed-form instruction count and stays below 12p².

use super::{Instruction, NodeId, Program};
use crate::counts::{count_table, CountTable};
use crate::ntheory::{build_dlog_table, FermatContext};
use crate::numeric::{apply_instruction, BigComplex, BigFloat, EvalError, MIN_PRECISION};
use crate::periods::{reference_level, PeriodId, PeriodTable};
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuildError {
    /// The roots of the quadratic splitting T[k,r] could not be matched
    /// one-to-one against the two reference periods they refine into.
    LabelAmbiguity { k: u32, r: u64 },
    /// |S² - 4P| vanished relative to its operands, so the square root
    /// would carry no correct bits at the working precision.
    DegenerateDiscriminant { k: u32, r: u64 },
    Eval(EvalError),
}

impl fmt::Display for BuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildError::LabelAmbiguity { k, r } => {
                write!(f, "cannot label the roots splitting period T[{k},{r}]")
            }
            BuildError::DegenerateDiscriminant { k, r } => {
                write!(f, "degenerate discriminant under period T[{k},{r}]")
            }
            BuildError::Eval(e) => write!(f, "evaluation failed: {e}"),
        }
    }
}

impl From<EvalError> for BuildError {
    fn from(e: EvalError) -> Self {
        BuildError::Eval(e)
    }
}

/// Incremental program construction; every pushed instruction is evaluated
/// immediately, so labeling decisions can consult concrete values.
pub struct ProgramBuilder {
    p: u64,
    m: u32,
    g: u64,
    precision_bits: u32,
    instructions: Vec<Instruction>,
    values: Vec<BigComplex>,
    labels: BTreeMap<PeriodId, NodeId>,
    constants: BTreeMap<u64, NodeId>,
}

impl ProgramBuilder {
    pub fn new(ctx: &FermatContext, precision_bits: u32) -> Self {
        assert!(precision_bits >= MIN_PRECISION);
        let mut b = ProgramBuilder {
            p: ctx.p(),
            m: ctx.m(),
            g: ctx.g(),
            precision_bits,
            instructions: Vec::new(),
            values: Vec::new(),
            labels: BTreeMap::new(),
            constants: BTreeMap::new(),
        };
        b.instructions.push(Instruction::One);
        b.values.push(BigComplex::one(precision_bits));
        b
    }

    pub fn push(&mut self, instr: Instruction) -> Result<NodeId, BuildError> {
        let node = self.instructions.len();
        for op in instr.operands() {
            assert!(op < node, "operand {op} does not precede node {node}");
        }
        assert!(
            !matches!(instr, Instruction::One),
            "ONE is only instruction 0"
        );
        let v = apply_instruction(&instr, &self.values, self.precision_bits, node)?;
        self.instructions.push(instr);
        self.values.push(v);
        Ok(node)
    }

    /// Value of an already-pushed node at the working precision.
    pub fn value(&self, node: NodeId) -> &BigComplex {
        &self.values[node]
    }

    pub fn node_count(&self) -> usize {
        self.instructions.len()
    }

    pub fn label(&mut self, id: PeriodId, node: NodeId) {
        assert!(node < self.instructions.len());
        let prev = self.labels.insert(id, node);
        assert!(prev.is_none(), "duplicate label");
    }

    /// Emits the pool 0..=p: 0 as ONE - ONE, then an ADD chain for 2..=p.
    /// The ONE node doubles as the constant 1. Exactly p instructions.
    pub fn emit_constants(&mut self) -> Result<(), BuildError> {
        self.constants.insert(1, 0);
        let zero = self.push(Instruction::Sub(0, 0))?;
        self.constants.insert(0, zero);
        let mut prev = 0;
        for n in 2..=self.p {
            prev = self.push(Instruction::Add(prev, 0))?;
            self.constants.insert(n, prev);
        }
        Ok(())
    }

    fn cnode(&self, value: u64) -> NodeId {
        self.constants[&value]
    }

    /// Splits every period of level k, returning the nodes of level k+1 in
    /// residue order. Level 0 seeds itself: T[0,0] = -1 enters as
    /// SUB(zero, ONE) in the squaring slot, since (-1)² is already node 0.
    fn build_level(
        &mut self,
        k: u32,
        counts: &CountTable,
        refs_next: &PeriodTable,
        parents: &[NodeId],
    ) -> Result<Vec<NodeId>, BuildError> {
        let top = k + 1 == self.m;
        let half = 1u64 << k;
        let c2 = self.cnode(2);
        let tol = refs_next
            .min_gap()
            .expect("a refined level has at least two periods")
            .ldexp(-1);

        let parent_nodes: Vec<NodeId> = if k == 0 {
            let seed = self.push(Instruction::Sub(self.cnode(0), 0))?;
            self.label(PeriodId::new(0, 0), seed);
            vec![seed]
        } else {
            debug_assert_eq!(parents.len() as u64, half);
            parents.to_vec()
        };

        let mut children = vec![usize::MAX; (half as usize) * 2];
        for r in 0..half {
            let s_node = parent_nodes[r as usize];
            let s2 = if k == 0 {
                0
            } else {
                self.push(Instruction::Mul(s_node, s_node))?
            };
            let p_node = if top {
                0
            } else {
                let mut acc: Option<NodeId> = None;
                for s in 0..half {
                    let n = counts.get(r.wrapping_sub(s));
                    let cn = self.cnode(n);
                    let term = self.push(Instruction::Mul(cn, parent_nodes[s as usize]))?;
                    acc = Some(match acc {
                        None => term,
                        Some(a) => self.push(Instruction::Add(a, term))?,
                    });
                }
                acc.expect("level has at least one period")
            };
            // p = 3 is the one prime whose pool misses 4; 2·2 is it
            let four_p = if self.p == 3 {
                self.push(Instruction::Mul(c2, c2))?
            } else {
                let c4 = self.cnode(4);
                self.push(Instruction::Mul(c4, p_node))?
            };
            let disc = self.push(Instruction::Sub(s2, four_p))?;
            self.check_discriminant(k, r, s2, four_p, disc)?;
            let root = self.push(Instruction::Sqrt(disc))?;
            let hi = self.push(Instruction::Add(s_node, root))?;
            let lo = self.push(Instruction::Sub(s_node, root))?;
            let x1 = self.push(Instruction::Div(hi, c2))?;
            let x2 = self.push(Instruction::Div(lo, c2))?;

            let (na, nb) = self.assign_labels(k, r, x1, x2, refs_next, &tol)?;
            children[r as usize] = na;
            children[(r + half) as usize] = nb;
        }
        Ok(children)
    }

    /// Rejects a discriminant smaller than ~2^(8-B) of the terms forming
    /// it: past that, cancellation has consumed the working precision.
    fn check_discriminant(
        &self,
        k: u32,
        r: u64,
        s2: NodeId,
        four_p: NodeId,
        disc: NodeId,
    ) -> Result<(), BuildError> {
        let scale = self.values[s2]
            .modulus()
            .add(&self.values[four_p].modulus());
        let floor = scale.ldexp(8 - i64::from(self.precision_bits));
        if self.values[disc].modulus() <= floor {
            return Err(BuildError::DegenerateDiscriminant { k, r });
        }
        Ok(())
    }

    /// Decides which root is T[k+1,r] and which is T[k+1,r+2^k]. Each root
    /// must fall within half the level's minimum gap of exactly one of the
    /// two references, and they must claim different ones.
    fn assign_labels(
        &mut self,
        k: u32,
        r: u64,
        x1: NodeId,
        x2: NodeId,
        refs_next: &PeriodTable,
        tol: &BigFloat,
    ) -> Result<(NodeId, NodeId), BuildError> {
        let half = 1u64 << k;
        let ra = r;
        let rb = r + half;
        let va = refs_next.value(ra);
        let vb = refs_next.value(rb);
        let matches_a = |x: &BigComplex| -> Option<bool> {
            match (x.dist(va) < *tol, x.dist(vb) < *tol) {
                (true, false) => Some(true),
                (false, true) => Some(false),
                _ => None,
            }
        };
        let pick1 = matches_a(&self.values[x1]);
        let pick2 = matches_a(&self.values[x2]);
        let (na, nb) = match (pick1, pick2) {
            (Some(true), Some(false)) => (x1, x2),
            (Some(false), Some(true)) => (x2, x1),
            _ => return Err(BuildError::LabelAmbiguity { k, r }),
        };
        self.label(PeriodId::new(k + 1, ra), na);
        self.label(PeriodId::new(k + 1, rb), nb);
        Ok((na, nb))
    }

    pub fn finish(self) -> Program {
        Program::from_parts(
            self.p,
            self.m,
            self.g,
            self.instructions,
            self.labels,
            self.constants,
        )
    }
}

/// Builds the complete labeled program for ctx: constant pool, then m
/// rounds of refinement. The result is a pure function of (ctx, precision).
pub fn build_program(ctx: &FermatContext, precision_bits: u32) -> Result<Program, BuildError> {
    let mut b = ProgramBuilder::new(ctx, precision_bits);
    b.emit_constants()?;
    let dlog = build_dlog_table(ctx);
    let mut level: Vec<NodeId> = Vec::new();
    for k in 0..ctx.m() {
        let counts = count_table(ctx, &dlog, k);
        let refs_next = reference_level(ctx, k + 1, precision_bits);
        level = b.build_level(k, &counts, &refs_next, &level)?;
    }
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::closed_form_count;
    use crate::periods::{reference_period, root_of_unity};

    fn build(p: u64, bits: u32) -> Program {
        build_program(&FermatContext::new(p).unwrap(), bits).unwrap()
    }

    #[test]
    fn op_counts_match_closed_form() {
        for p in [3u64, 5, 17] {
            let prog = build(p, 64);
            assert_eq!(prog.op_count(), closed_form_count(p), "p={p}");
        }
    }

    #[test]
    fn p3_structure() {
        let prog = build(3, 64);
        // pool: ONE, 0 = SUB(0,0), 2, 3; seed; then one quadratic
        assert_eq!(prog.node_count(), 12);
        assert_eq!(prog.instructions()[1], Instruction::Sub(0, 0));
        assert_eq!(prog.instructions()[2], Instruction::Add(0, 0));
        assert_eq!(prog.instructions()[3], Instruction::Add(2, 0));
        assert_eq!(prog.instructions()[4], Instruction::Sub(1, 0)); // -1 seed
        assert_eq!(prog.instructions()[5], Instruction::Mul(2, 2)); // 4 = 2·2
        assert_eq!(prog.instructions()[6], Instruction::Sub(0, 5)); // 1 - 4
        assert_eq!(prog.instructions()[7], Instruction::Sqrt(6));
        assert_eq!(prog.const_node(3), Some(3));
        assert_eq!(prog.label_node(PeriodId::new(0, 0)), Some(4));
    }

    #[test]
    fn labeled_nodes_evaluate_to_their_periods() {
        for p in [3u64, 5, 17] {
            let ctx = FermatContext::new(p).unwrap();
            let prog = build_program(&ctx, 96).unwrap();
            let trace = crate::numeric::eval_program(&prog, 96).unwrap();
            let bound = BigFloat::one(96).ldexp(-70);
            for (id, node) in prog.labels() {
                let want = reference_period(&ctx, id, 96);
                let err = trace.value(node).dist(&want);
                assert!(err <= bound, "p={p} T[{},{}] err {err}", id.k(), id.r());
            }
        }
    }

    #[test]
    fn top_level_holds_all_roots_of_unity() {
        let ctx = FermatContext::new(17).unwrap();
        let prog = build_program(&ctx, 96).unwrap();
        let trace = crate::numeric::eval_program(&prog, 96).unwrap();
        let bound = BigFloat::one(96).ldexp(-70);
        let mut seen = [false; 17];
        for r in 0..16u64 {
            let node = prog.label_node(PeriodId::new(4, r)).unwrap();
            let j = ctx.pow_g(r);
            let want = root_of_unity(&ctx, j, 96);
            assert!(trace.value(node).dist(&want) <= bound, "r={r}");
            seen[j as usize] = true;
        }
        assert!(seen[1..].iter().all(|&s| s));
    }

    #[test]
    fn level0_discriminant_is_exactly_p() {
        // S = -1, P = -(p-1)/4 · 1, so S² - 4P = p with no rounding at all
        for p in [5u64, 17] {
            let ctx = FermatContext::new(p).unwrap();
            let mut b = ProgramBuilder::new(&ctx, 64);
            b.emit_constants().unwrap();
            let dlog = build_dlog_table(&ctx);
            let counts = count_table(&ctx, &dlog, 0);
            let refs = reference_level(&ctx, 1, 64);
            b.build_level(0, &counts, &refs, &[]).unwrap();
            let disc_value = BigFloat::from_u64(p, 64);
            let found = (0..b.node_count())
                .any(|n| b.value(n).im().is_zero() && *b.value(n).re() == disc_value);
            assert!(found, "no node holds exactly {p}");
        }
    }

    #[test]
    fn golden_ratio_appears_for_p5() {
        // T[1,0] = (√5 - 1)/2
        let prog = build(5, 96);
        let trace = crate::numeric::eval_program(&prog, 96).unwrap();
        let node = prog.label_node(PeriodId::new(1, 0)).unwrap();
        let want = BigFloat::from_decimal_str(
            "0.618033988749894848204586834365638117720309179805762862135449",
            96,
        )
        .unwrap();
        let err = trace.value(node).re().sub(&want).abs();
        assert!(err <= BigFloat::one(96).ldexp(-80), "err {err}");
        assert!(trace.value(node).im().abs() <= BigFloat::one(96).ldexp(-80));
    }

    #[test]
    fn building_twice_gives_identical_programs() {
        let a = build(17, 64);
        let b = build(17, 64);
        assert_eq!(a, b);
    }

    #[test]
    fn builder_rejects_second_one() {
        let ctx = FermatContext::new(5).unwrap();
        let mut b = ProgramBuilder::new(&ctx, 64);
        let r = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
            b.push(Instruction::One)
        }));
        assert!(r.is_err());
    }

    #[test]
    fn division_by_zero_surfaces_as_build_error() {
        let ctx = FermatContext::new(5).unwrap();
        let mut b = ProgramBuilder::new(&ctx, 64);
        b.emit_constants().unwrap();
        let zero = 1; // SUB(0,0) is always node 1
        let err = b.push(Instruction::Div(0, zero)).unwrap_err();
        assert!(matches!(
            err,
            BuildError::Eval(EvalError::DivisionByZero { node: _ })
        ));
    }
}
