use super::ast::CongruenceSpec;
use super::eval::{Compiler, EvalError, Evaluator};
use crate::context::PrimeContext;
use crate::residue::Residue;
use crate::verify::{Status, VerificationResult};

/// Checks `spec` at the context's prime.
///
/// A quantified spec fails at the first index whose sides differ; on
/// success the pair for the last index is recorded.
pub fn check_congruence(spec: &CongruenceSpec, ctx: &PrimeContext) -> VerificationResult {
    let p = ctx.p();
    let mut result = VerificationResult {
        congruence_id: spec.id.clone(),
        p,
        status: Status::Skipped,
        lhs: None,
        rhs: None,
        message: None,
    };
    if !spec.precondition.admits(p) {
        return result;
    }
    match compare(spec, ctx) {
        Ok(Outcome { equal, lhs, rhs, at }) => {
            result.status = if equal { Status::Pass } else { Status::Fail };
            result.lhs = lhs;
            result.rhs = rhs;
            if let (false, Some((var, k))) = (equal, at) {
                result.message = Some(format!("first mismatch at {var} = {k}"));
            }
        }
        Err(e) => {
            result.status = Status::Error;
            result.message = Some(e.to_string());
        }
    }
    result
}

struct Outcome {
    equal: bool,
    lhs: Option<Residue>,
    rhs: Option<Residue>,
    at: Option<(String, i128)>,
}

fn compare(spec: &CongruenceSpec, ctx: &PrimeContext) -> Result<Outcome, EvalError> {
    let mut c = Compiler::new(ctx, spec.mod_exponent)?;
    let m = c.modulus();
    let Some(q) = &spec.quantifier else {
        let lhs = c.expr(&spec.lhs)?;
        let rhs = c.expr(&spec.rhs)?;
        let mut ev = Evaluator::new(ctx, m, c.slot_count());
        let (l, r) = (ev.eval(&lhs)?, ev.eval(&rhs)?);
        return Ok(Outcome {
            equal: l == r,
            lhs: Some(m.residue(l)),
            rhs: Some(m.residue(r)),
            at: None,
        });
    };

    let lo = c.index(&q.lo)?;
    let hi = c.index(&q.hi)?;
    let slot = c.bind(&q.var);
    let lhs = c.expr(&spec.lhs)?;
    let rhs = c.expr(&spec.rhs)?;
    let mut ev = Evaluator::new(ctx, m, c.slot_count());
    let (lo, hi) = (ev.index(&lo)?, ev.index(&hi)?);
    let mut out = Outcome {
        equal: true,
        lhs: None,
        rhs: None,
        at: None,
    };
    let mut k = lo;
    while k <= hi {
        ev.slots[slot] = k;
        let (l, r) = (ev.eval(&lhs)?, ev.eval(&rhs)?);
        out.lhs = Some(m.residue(l));
        out.rhs = Some(m.residue(r));
        if l != r {
            out.equal = false;
            out.at = Some((q.var.clone(), k));
            break;
        }
        k += 1;
    }
    Ok(out)
}
