//! Program verification: does the circuit actually construct what its
//! labels claim, within tolerance, inside the instruction budget?
//!
//! Five independent checks, all against references recomputed from scratch
//! (never against values the builder cached):
//!   1. every labeled node matches its reference period,
//!   2. every top-level node matches eps^(g^r) directly,
//!   3. together the top-level nodes cover all p-1 nontrivial roots,
//!   4. the instruction count stays below 12p²,
//!   5. every declared pool constant holds its integer.
//! A failed check aborts with the offending node; a passing run returns the
//! measured deviations.

use crate::circuit::{op_bound, NodeId, Program};
use crate::counts::count_table;
use crate::ntheory::{build_dlog_table, FermatContext};
use crate::numeric::{eval_program, BigComplex, BigFloat, EvalTrace};
use crate::periods::{reference_level, root_of_unity, PeriodId};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    LabelDeviation,
    TopLevelRoot,
    RootCoverage,
    OpCountBound,
    ConstValue,
    Evaluation,
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckKind::LabelDeviation => "label-deviation",
            CheckKind::TopLevelRoot => "top-level-root",
            CheckKind::RootCoverage => "root-coverage",
            CheckKind::OpCountBound => "op-count-bound",
            CheckKind::ConstValue => "const-value",
            CheckKind::Evaluation => "evaluation",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationFailure {
    pub check: CheckKind,
    pub node: Option<NodeId>,
    pub period: Option<PeriodId>,
    pub detail: String,
}

impl fmt::Display for VerificationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} failed", self.check)?;
        if let Some(node) = self.node {
            write!(f, " at node {node}")?;
        }
        if let Some(id) = self.period {
            write!(f, " (T[{},{}])", id.k(), id.r())?;
        }
        write!(f, ": {}", self.detail)
    }
}

/// Largest deviation seen among the labeled nodes of one level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelDeviation {
    pub k: u32,
    pub max_dev: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub p: u64,
    pub m: u32,
    pub g: u64,
    pub precision_bits: u32,
    pub op_count: u64,
    pub bound: u64,
    pub bound_ok: bool,
    pub max_dev_per_level: Vec<LevelDeviation>,
    pub max_dev: f64,
    pub coverage_ok: bool,
}

fn fail(
    check: CheckKind,
    node: Option<NodeId>,
    period: Option<PeriodId>,
    detail: String,
) -> VerificationFailure {
    VerificationFailure {
        check,
        node,
        period,
        detail,
    }
}

fn deviation(
    trace: &EvalTrace,
    node: NodeId,
    want: &BigComplex,
) -> BigFloat {
    trace.value(node).dist(want)
}

/// Runs all five checks at the given precision. `tol` is the largest
/// accepted absolute deviation between a node and its reference value.
pub fn verify_program(
    program: &Program,
    precision_bits: u32,
    tol: f64,
) -> Result<VerificationReport, VerificationFailure> {
    let ctx = FermatContext::with_root(program.p(), program.g())
        .expect("programs always carry a validated (p, g)");
    let m = ctx.m();
    let tol = BigFloat::from_f64(tol, precision_bits).expect("tolerance must be finite");
    assert!(!tol.is_negative() && !tol.is_zero(), "tolerance must be positive");

    let trace = eval_program(program, precision_bits).map_err(|e| {
        let crate::numeric::EvalError::DivisionByZero { node } = e;
        fail(
            CheckKind::Evaluation,
            Some(node),
            None,
            "division by zero".into(),
        )
    })?;

    // 1: labeled nodes against recomputed reference periods, level by level
    let mut max_dev_per_level = Vec::with_capacity(m as usize + 1);
    let mut max_dev = BigFloat::zero(precision_bits);
    for k in 0..=m {
        let refs = reference_level(&ctx, k, precision_bits);
        let mut level_dev = BigFloat::zero(precision_bits);
        for (id, node) in program.labels().filter(|(id, _)| id.k() == k) {
            let dev = deviation(&trace, node, refs.value(id.r()));
            if dev > tol {
                return Err(fail(
                    CheckKind::LabelDeviation,
                    Some(node),
                    Some(id),
                    format!("deviation {dev} exceeds tolerance {tol}"),
                ));
            }
            if dev > level_dev {
                level_dev = dev.clone();
            }
            if dev > max_dev {
                max_dev = dev;
            }
        }
        max_dev_per_level.push(LevelDeviation {
            k,
            max_dev: level_dev.to_f64(),
        });
    }

    // 2: top-level nodes against eps^(g^r), bypassing the period machinery
    for r in 0..ctx.order() {
        let id = PeriodId::new(m, r);
        let Some(node) = program.label_node(id) else {
            continue; // absence is coverage's business
        };
        let j = ctx.pow_g(r);
        let want = root_of_unity(&ctx, j, precision_bits);
        let dev = deviation(&trace, node, &want);
        if dev > tol {
            return Err(fail(
                CheckKind::TopLevelRoot,
                Some(node),
                Some(id),
                format!("node is not eps^{j}: deviation {dev}"),
            ));
        }
    }

    // 3: the exponents g^r of the labeled top nodes must cover 1..p-1
    let mut seen = vec![false; ctx.p() as usize];
    for r in 0..ctx.order() {
        if program.label_node(PeriodId::new(m, r)).is_some() {
            seen[ctx.pow_g(r) as usize] = true;
        }
    }
    let coverage_ok = seen[1..].iter().all(|&s| s);
    if !coverage_ok {
        let missing = seen[1..].iter().position(|&s| !s).unwrap() + 1;
        return Err(fail(
            CheckKind::RootCoverage,
            None,
            None,
            format!("no labeled node evaluates to eps^{missing}"),
        ));
    }

    // 4: strict instruction budget
    let bound = op_bound(ctx.p());
    let bound_ok = program.op_count() < bound;
    if !bound_ok {
        return Err(fail(
            CheckKind::OpCountBound,
            None,
            None,
            format!("{} ops is not below {bound}", program.op_count()),
        ));
    }

    // 5: declared pool constants hold their exact integers
    for (value, node) in program.constants() {
        let want = BigComplex::from_u64(value, precision_bits);
        let dev = deviation(&trace, node, &want);
        if dev > tol {
            return Err(fail(
                CheckKind::ConstValue,
                Some(node),
                None,
                format!("declared constant {value}, deviation {dev}"),
            ));
        }
    }

    Ok(VerificationReport {
        p: ctx.p(),
        m,
        g: ctx.g(),
        precision_bits,
        op_count: program.op_count(),
        bound,
        bound_ok,
        max_dev_per_level,
        max_dev: max_dev.to_f64(),
        coverage_ok,
    })
}

/// Residuals of the two algebraic identities behind one refinement level,
/// measured on reference values alone (no program involved).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResidual {
    pub k: u32,
    pub r: u64,
    /// |T[k,r] - (T[k+1,r] + T[k+1,r+2^k])|
    pub sum_residual: f64,
    /// |T[k+1,r]·T[k+1,r+2^k] - (Z + Σ_s N[k][(r-s) mod 2^k]·T[k,s])|
    pub product_residual: f64,
}

/// Measures, for every r at level k, how well the refinement identities
/// hold on freshly computed reference periods. Residuals shrink as the
/// precision grows; that is the strongest evidence the count tables are
/// the right coefficients.
pub fn check_identities(
    ctx: &FermatContext,
    k: u32,
    precision_bits: u32,
) -> Vec<IdentityResidual> {
    assert!(k < ctx.m());
    let dlog = build_dlog_table(ctx);
    let counts = count_table(ctx, &dlog, k);
    let parents = reference_level(ctx, k, precision_bits);
    let children = reference_level(ctx, k + 1, precision_bits);
    let half = 1u64 << k;
    let z_term = if k + 1 == ctx.m() { 1u64 } else { 0 };

    let mut out = Vec::with_capacity(half as usize);
    for r in 0..half {
        let left = children.value(r);
        let right = children.value(r + half);
        let sum_residual = parents.value(r).sub(&left.add(right)).modulus();

        let mut expected = BigComplex::from_u64(z_term, precision_bits);
        for s in 0..half {
            let n = counts.get(r.wrapping_sub(s));
            let coeff = BigFloat::from_u64(n, precision_bits);
            expected = expected.add(&parents.value(s).scale(&coeff));
        }
        let product_residual = left.mul(right).sub(&expected).modulus();

        out.push(IdentityResidual {
            k,
            r,
            sum_residual: sum_residual.to_f64(),
            product_residual: product_residual.to_f64(),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_program, closed_form_count, parse, serialize};

    fn ctx(p: u64) -> FermatContext {
        FermatContext::new(p).unwrap()
    }

    #[test]
    fn built_programs_verify() {
        for p in [3u64, 5, 17] {
            let prog = build_program(&ctx(p), 64).unwrap();
            let report = verify_program(&prog, 64, 1e-12).unwrap();
            assert_eq!(report.p, p);
            assert_eq!(report.op_count, closed_form_count(p));
            assert_eq!(report.bound, 12 * p * p);
            assert!(report.bound_ok);
            assert!(report.coverage_ok);
            assert!(report.max_dev < 1e-14, "p={p} max_dev {}", report.max_dev);
            assert_eq!(report.max_dev_per_level.len() as u32, report.m + 1);
        }
    }

    #[test]
    fn deviations_shrink_with_precision() {
        let lo = verify_program(&build_program(&ctx(17), 64).unwrap(), 64, 1e-12).unwrap();
        let hi = verify_program(&build_program(&ctx(17), 128).unwrap(), 128, 1e-12).unwrap();
        assert!(hi.max_dev < lo.max_dev);
        assert!(hi.max_dev < 1e-30);
    }

    fn tampered(p: u64, from: &str, to: &str) -> Program {
        let text = serialize(&build_program(&ctx(p), 64).unwrap());
        assert!(text.contains(from), "`{from}` not in program text");
        parse(&text.replacen(from, to, 1)).unwrap()
    }

    #[test]
    fn tampered_arithmetic_is_caught() {
        // p=3: node 8 is S + sqrt(disc); feeding it disc instead breaks the root
        let prog = tampered(3, "8 ADD 4 7", "8 ADD 4 6");
        let err = verify_program(&prog, 64, 1e-12).unwrap_err();
        assert!(
            matches!(
                err.check,
                CheckKind::LabelDeviation | CheckKind::TopLevelRoot
            ),
            "{err}"
        );
    }

    #[test]
    fn tampered_constant_is_caught() {
        // p=3: node 3 claims to be the constant 3 but now holds 2+2
        let prog = tampered(3, "3 ADD 2 0", "3 ADD 2 2");
        let err = verify_program(&prog, 64, 1e-12).unwrap_err();
        assert_eq!(err.check, CheckKind::ConstValue, "{err}");
        assert_eq!(err.node, Some(3));
    }

    #[test]
    fn missing_top_label_fails_coverage() {
        let text = serialize(&build_program(&ctx(5), 64).unwrap());
        let stripped: String = text
            .lines()
            .filter(|l| !l.starts_with("LABEL 29 "))
            .map(|l| alloc::format!("{l}\n"))
            .collect();
        assert_ne!(stripped, text);
        let err = verify_program(&parse(&stripped).unwrap(), 64, 1e-12).unwrap_err();
        assert_eq!(err.check, CheckKind::RootCoverage, "{err}");
    }

    #[test]
    fn division_by_zero_fails_evaluation() {
        let prog = parse("SLPv1 p=3 m=1 g=2\n0 ONE\n1 SUB 0 0\n2 DIV 0 1\n").unwrap();
        let err = verify_program(&prog, 64, 1e-12).unwrap_err();
        assert_eq!(err.check, CheckKind::Evaluation);
        assert_eq!(err.node, Some(2));
    }

    #[test]
    fn identities_hold_on_references() {
        for p in [5u64, 17] {
            let c = ctx(p);
            for k in 0..c.m() {
                for res in check_identities(&c, k, 96) {
                    assert!(
                        res.sum_residual < 1e-20 && res.product_residual < 1e-20,
                        "p={p} k={k} r={} sum {} product {}",
                        res.r,
                        res.sum_residual,
                        res.product_residual
                    );
                }
            }
        }
    }

    #[test]
    fn identity_residuals_shrink_with_precision() {
        // individual residuals can hit exactly 0 by truncation coincidence,
        // so compare the worst case over all levels, not element-wise
        let c = ctx(17);
        let worst = |bits: u32| -> f64 {
            (0..c.m())
                .flat_map(|k| check_identities(&c, k, bits))
                .map(|res| res.sum_residual.max(res.product_residual))
                .fold(0.0, f64::max)
        };
        let lo = worst(64);
        let hi = worst(160);
        assert!(lo < 1e-12, "lo {lo}");
        assert!(hi < 1e-40, "hi {hi}");
        assert!(hi < lo, "hi {hi} vs lo {lo}");
    }
}
