use std::fmt;

use super::Context;
use crate::Element;

/// Outcome of one verified law. A failure carries the witnessing element or
/// pair together with both computed values.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
}

/// The full report of [`check_hypotheses`]: one entry per law, each checked
/// exactly on every element or pair of the sample.
#[derive(Clone, Debug)]
pub struct HypothesisReport {
    pub context: String,
    pub sample_description: String,
    pub sample_size: usize,
    pub checks: Vec<CheckResult>,
}

impl HypothesisReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn failure_summary(&self) -> String {
        let names: Vec<&str> = self.failures().map(|c| c.name.as_str()).collect();
        if names.is_empty() {
            "no failures".to_string()
        } else {
            names.join("; ")
        }
    }
}

impl fmt::Display for HypothesisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "hypothesis report for {} ({} sample elements: {})",
            self.context, self.sample_size, self.sample_description
        )?;
        for c in &self.checks {
            if c.passed {
                writeln!(f, "  pass  {}", c.name)?;
            } else {
                writeln!(
                    f,
                    "  FAIL  {} [witness: {}]",
                    c.name,
                    c.witness.as_deref().unwrap_or("-")
                )?;
            }
        }
        Ok(())
    }
}

/// Verifies, exactly and on every sample element or pair, that the context's
/// declared structure is what it claims to be:
///
/// * `sigma` preserves the unit, is multiplicative, and is inverted by
///   `sigma^{-1}` on both sides;
/// * each `delta` satisfies the twisted Leibniz rule
///   `delta(ab) = delta(a) b + sigma(a) delta(b)`;
/// * with two deltas, `delta_1 delta_2 = delta_2 delta_1` and each delta
///   commutes with `sigma`;
/// * each trace kills delta images and is `sigma`-invariant where declared,
///   and satisfies its declared twisted trace law
///   `tau(ab) = tau(sigma^k(b) a)`.
///
/// Checking on a spanning monomial sample decides the law for the whole
/// algebra, since every law involved is (bi)linear.
pub fn check_hypotheses(ctx: &Context, sample: &[Element]) -> HypothesisReport {
    assert!(!sample.is_empty(), "hypothesis sample must be nonempty");
    let mut checks = Vec::new();

    // sigma preserves the unit
    let one = ctx.one_element();
    checks.push(single_check("sigma preserves the unit", [&one], |[a]| {
        let lhs = ctx.sigma_apply(a);
        (lhs == one.clone(), format!("sigma(1) = {lhs}"))
    }));

    // sigma is multiplicative
    checks.push(pair_check(ctx, "sigma is multiplicative", sample, |a, b| {
        let lhs = ctx.sigma_apply(&a.mul(b));
        let rhs = ctx.sigma_apply(a).mul(&ctx.sigma_apply(b));
        (lhs == rhs, format!("sigma(ab) = {lhs}, sigma(a)sigma(b) = {rhs}"))
    }));

    // sigma^{-1} inverts sigma on both sides
    checks.push(elementwise_check(
        "sigma is invertible",
        sample,
        |a| {
            let fwd = ctx.sigma_inv_apply(&ctx.sigma_apply(a));
            let bwd = ctx.sigma_apply(&ctx.sigma_inv_apply(a));
            (fwd == *a && bwd == *a, format!("round trips gave {fwd} and {bwd}"))
        },
    ));

    // twisted Leibniz rule per delta
    for i in 0..ctx.num_deltas() {
        checks.push(pair_check(
            ctx,
            &format!("delta{} satisfies the sigma-Leibniz rule", i + 1),
            sample,
            |a, b| {
                let lhs = ctx.delta(i, &a.mul(b));
                let rhs = ctx
                    .delta(i, a)
                    .mul(b)
                    .add(&ctx.sigma_apply(a).mul(&ctx.delta(i, b)));
                (lhs == rhs, format!("delta(ab) = {lhs}, expected {rhs}"))
            },
        ));
    }

    // commutation laws
    if ctx.num_deltas() == 2 {
        checks.push(elementwise_check(
            "delta1 commutes with delta2",
            sample,
            |a| {
                let lhs = ctx.delta(0, &ctx.delta(1, a));
                let rhs = ctx.delta(1, &ctx.delta(0, a));
                (lhs == rhs, format!("d1 d2 = {lhs}, d2 d1 = {rhs}"))
            },
        ));
    }
    for i in 0..ctx.num_deltas() {
        checks.push(elementwise_check(
            &format!("sigma commutes with delta{}", i + 1),
            sample,
            |a| {
                let lhs = ctx.delta(i, &ctx.sigma_apply(a));
                let rhs = ctx.sigma_apply(&ctx.delta(i, a));
                (lhs == rhs, format!("delta(sigma(a)) = {lhs}, sigma(delta(a)) = {rhs}"))
            },
        ));
    }

    // trace properties
    for t in 0..ctx.num_traces() {
        let info = ctx.trace_info(t).clone();
        if info.kind.delta_invariant {
            for i in 0..ctx.num_deltas() {
                checks.push(elementwise_check(
                    &format!("trace {} kills delta{} images", info.name, i + 1),
                    sample,
                    |a| {
                        let v = ctx.trace(t, &ctx.delta(i, a));
                        (v.is_zero(), format!("tau(delta(a)) = {v}"))
                    },
                ));
            }
        }
        if info.kind.sigma_invariant {
            checks.push(elementwise_check(
                &format!("trace {} is sigma-invariant", info.name),
                sample,
                |a| {
                    let lhs = ctx.trace(t, &ctx.sigma_apply(a));
                    let rhs = ctx.trace(t, a);
                    (lhs == rhs, format!("tau(sigma(a)) = {lhs}, tau(a) = {rhs}"))
                },
            ));
        }
        let k = info.kind.twist_power;
        checks.push(pair_check(
            ctx,
            &format!("trace {} twisted trace law (k = {k})", info.name),
            sample,
            |a, b| {
                let lhs = ctx.trace(t, &a.mul(b));
                let rhs = ctx.trace(t, &ctx.sigma_pow(k, b).mul(a));
                (lhs == rhs, format!("tau(ab) = {lhs}, tau(sigma^k(b)a) = {rhs}"))
            },
        ));
    }

    HypothesisReport {
        context: ctx.label().to_string(),
        sample_description: ctx.sample_description(),
        sample_size: sample.len(),
        checks,
    }
}

fn single_check<const N: usize>(
    name: &str,
    args: [&Element; N],
    f: impl Fn([&Element; N]) -> (bool, String),
) -> CheckResult {
    let (ok, detail) = f(args);
    CheckResult {
        name: name.to_string(),
        passed: ok,
        witness: if ok { None } else { Some(detail) },
    }
}

fn elementwise_check(
    name: &str,
    sample: &[Element],
    f: impl Fn(&Element) -> (bool, String),
) -> CheckResult {
    for a in sample {
        let (ok, detail) = f(a);
        if !ok {
            return CheckResult {
                name: name.to_string(),
                passed: false,
                witness: Some(format!("a = {a}: {detail}")),
            };
        }
    }
    CheckResult {
        name: name.to_string(),
        passed: true,
        witness: None,
    }
}

fn pair_check(
    _ctx: &Context,
    name: &str,
    sample: &[Element],
    f: impl Fn(&Element, &Element) -> (bool, String),
) -> CheckResult {
    for a in sample {
        for b in sample {
            let (ok, detail) = f(a, b);
            if !ok {
                return CheckResult {
                    name: name.to_string(),
                    passed: false,
                    witness: Some(format!("a = {a}, b = {b}: {detail}")),
                };
            }
        }
    }
    CheckResult {
        name: name.to_string(),
        passed: true,
        witness: None,
    }
}
