//! Certified price reports.
//!
//! The price of uncertainty (resp. variability) divides the reward needed
//! against all of `B` (resp. all bias configurations over `B`) by the worst
//! single-bias reward. Both quantities are NP-hard on general graphs, so the
//! report emits certified bounds, never claimed optima: the minmax lower
//! bound `alpha/b`, the approximation algorithm's verified reward as an upper
//! bound, and for occasionally unbiased agents the exact numerator from the
//! critical-node-set threshold search. Every ratio column is recomputed from
//! the operand columns it sits next to.

use num_traits::One;
use serde::Serialize;

use crate::agent::{is_motivating_uncertain, is_motivating_variable, required_reward_fixed};
use crate::bias::BiasSet;
use crate::graph::TaskGraph;
use crate::incentives::{cns_threshold, uncertain_approx, variable_approx};
use crate::num::{decimal_string, format_rational, Rational};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PriceMode {
    Uncertain,
    Variable,
}

impl PriceMode {
    pub fn name(&self) -> &'static str {
        match self {
            PriceMode::Uncertain => "uncertain",
            PriceMode::Variable => "variable",
        }
    }
}

/// A certified quantity: exact when the two bounds meet.
#[derive(Clone, Debug)]
pub struct Bound {
    pub lo: Rational,
    pub hi: Rational,
}

impl Bound {
    pub fn exact(&self) -> Option<&Rational> {
        (self.lo == self.hi).then_some(&self.lo)
    }
}

/// One experiment row. All values are exact rationals; decimals only appear
/// in the rendered CSV.
#[derive(Clone, Debug)]
pub struct PriceRow {
    pub instance: String,
    pub mode: PriceMode,
    pub b: Rational,
    pub tau: Rational,
    /// Minmax lower bound `alpha / b` on every reward in play.
    pub lower: Rational,
    /// Verified reward of the approximation algorithm.
    pub algo_reward: Rational,
    /// `required_reward_fixed` at each interval endpoint of `B`.
    pub fixed_required: Vec<(Rational, Rational)>,
    /// Bounds on `r(G, B)` resp. `r(G, B^V)`.
    pub numerator: Bound,
    /// Bounds on the worst single-bias reward.
    pub denominator: Bound,
    /// Bounds on the price ratio, recomputed from the operands.
    pub ratio: Bound,
}

#[derive(Clone, Debug, Default)]
pub struct ExperimentReport {
    pub rows: Vec<PriceRow>,
}

/// Computes one certified price row. In variable mode with an occasionally
/// unbiased agent the numerator is the exact critical-node-set threshold;
/// everywhere else it is the verified algorithm reward against the minmax
/// lower bound. Singleton bias sets have ratio exactly 1 by definition.
pub fn run_price_report(
    graph: &TaskGraph,
    set: &BiasSet,
    mode: PriceMode,
    instance: &str,
    tol: &Rational,
) -> Result<ExperimentReport> {
    let b = set.min().clone();
    let tau = set.tau();

    let approx = match mode {
        PriceMode::Uncertain => uncertain_approx(graph, set)?,
        PriceMode::Variable => variable_approx(graph, set)?,
    };
    let configured = graph.apply(&approx.configuration)?;
    let verdict = match mode {
        PriceMode::Uncertain => is_motivating_uncertain(&configured, set, &approx.reward)?,
        PriceMode::Variable => is_motivating_variable(&configured, set, &approx.reward)?,
    };
    if !verdict.motivating {
        return Err(Error::Precondition(
            "approximation output failed its own verifier".into(),
        ));
    }
    // the verifier reports the exact requirement of the certified
    // configuration, which may beat the nominal algorithm reward
    let mut numerator_hi = approx.reward.clone();
    if let Some(required) = &verdict.required_reward {
        if *required < numerator_hi {
            numerator_hi = required.clone();
        }
    }
    let mut numerator = Bound {
        lo: approx.lower.clone(),
        hi: numerator_hi,
    };
    if mode == PriceMode::Variable && set.contains_one() {
        let threshold = cns_threshold(graph, set, tol)?;
        if let Some(exact) = threshold.exact {
            numerator = Bound {
                lo: exact.clone(),
                hi: exact,
            };
        } else {
            numerator = Bound {
                lo: threshold.lo,
                hi: threshold.hi,
            };
        }
    }

    let fixed_required: Vec<(Rational, Rational)> = set
        .endpoints()
        .into_iter()
        .map(|beta| {
            let required = required_reward_fixed(graph, &beta)?;
            Ok((beta, required))
        })
        .collect::<Result<_>>()?;
    // the worst single-bias requirement of the unconfigured graph, maximized
    // over the critical subset, upper-bounds the denominator; the minmax
    // bound lower-bounds it
    let zero_required = is_motivating_uncertain(graph, set, &approx.reward.clone())?
        .required_reward
        .expect("uncertain verdicts carry the requirement");
    let denominator = Bound {
        lo: approx.lower.clone(),
        hi: zero_required,
    };

    let ratio = if set.is_singleton() {
        Bound {
            lo: Rational::one(),
            hi: Rational::one(),
        }
    } else {
        Bound {
            lo: &numerator.lo / &denominator.hi,
            hi: &numerator.hi / &denominator.lo,
        }
    };

    Ok(ExperimentReport {
        rows: vec![PriceRow {
            instance: instance.to_string(),
            mode,
            b,
            tau,
            lower: approx.lower,
            algo_reward: approx.reward,
            fixed_required,
            numerator,
            denominator,
            ratio,
        }],
    })
}

impl ExperimentReport {
    pub fn merge(&mut self, other: ExperimentReport) {
        self.rows.extend(other.rows);
    }

    /// CSV with a fixed column order; every rational is rendered exactly and
    /// as a 15-significant-digit decimal.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "instance,mode,b,b_dec,tau,tau_dec,lower,lower_dec,algo_reward,algo_reward_dec,\
             fixed_required,fixed_required_dec,num_lo,num_lo_dec,num_hi,num_hi_dec,num_exact,\
             den_lo,den_lo_dec,den_hi,den_hi_dec,den_exact,ratio_lo,ratio_lo_dec,ratio_hi,\
             ratio_hi_dec,ratio_exact\n",
        );
        for row in &self.rows {
            let fixed: Vec<String> = row
                .fixed_required
                .iter()
                .map(|(beta, req)| format!("{}:{}", format_rational(beta), format_rational(req)))
                .collect();
            let fixed_dec: Vec<String> = row
                .fixed_required
                .iter()
                .map(|(beta, req)| format!("{}:{}", decimal_string(beta), decimal_string(req)))
                .collect();
            let exact = |bound: &Bound| {
                bound
                    .exact()
                    .map(format_rational)
                    .unwrap_or_default()
            };
            let cells = [
                row.instance.clone(),
                row.mode.name().to_string(),
                format_rational(&row.b),
                decimal_string(&row.b),
                format_rational(&row.tau),
                decimal_string(&row.tau),
                format_rational(&row.lower),
                decimal_string(&row.lower),
                format_rational(&row.algo_reward),
                decimal_string(&row.algo_reward),
                fixed.join(";"),
                fixed_dec.join(";"),
                format_rational(&row.numerator.lo),
                decimal_string(&row.numerator.lo),
                format_rational(&row.numerator.hi),
                decimal_string(&row.numerator.hi),
                exact(&row.numerator),
                format_rational(&row.denominator.lo),
                decimal_string(&row.denominator.lo),
                format_rational(&row.denominator.hi),
                decimal_string(&row.denominator.hi),
                exact(&row.denominator),
                format_rational(&row.ratio.lo),
                decimal_string(&row.ratio.lo),
                format_rational(&row.ratio.hi),
                decimal_string(&row.ratio.hi),
                exact(&row.ratio),
            ];
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}
