use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigUint;
use serde_json::{json, Value};
use vclab::bounds::{bounds_report, m0_pac};
use vclab::combinatorics::{growth_function, sauer_bound, sauer_poly_bound, vc_dimension_with, VcSearch};
use vclab::formula::{
    definable_space, nip_shatter_search, parse_formula, Backend, Formula, ParameterSource, SearchConfig,
};
use vclab::harness::{
    estimate_pac_probability, estimate_ucp_probability, exact_pac_probability, exact_ucp_probability,
};
use vclab::learners::{builtin, LookupTableLearner};
use vclab::nfl::{build_nfl_instance, nfl_report, DEFAULT_CALL_BUDGET, EXTENDED_CALL_BUDGET};
use vclab::rational::{format_rational, parse_rational};
use vclab::{HypothesisSpace, Instance, LearningFunction};

use crate::cli::{
    BoundsArgs, Command, EvalArgs, FormulaArgs, FormulaCommand, GrowthArgs, NflArgs, PacArgs, SauerArgs, ShatterArgs,
    SimArgs, SpaceArgs, VcdimArgs,
};
use crate::error::CliError;
use crate::input::{rationals, rows, Inputs};

/// What a subcommand produced: the JSON result and an optional CSV sweep.
pub struct Output {
    pub result: Value,
    pub sweep: Option<String>,
}

impl Output {
    fn json(result: Value) -> Self {
        Output { result, sweep: None }
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

pub fn run(command: &Command, seed: u64, inputs: &mut Inputs) -> Result<Output, CliError> {
    match command {
        Command::Vcdim(a) => vcdim(a, inputs),
        Command::Growth(a) => growth(a, inputs),
        Command::Sauer(a) => sauer(a),
        Command::Bounds(a) => bounds(a),
        Command::UcpSim(a) => ucp_sim(a, seed, inputs),
        Command::PacSim(a) => pac_sim(a, seed, inputs),
        Command::Nfl(a) => nfl(a, inputs),
        Command::Formula(f) => formula(f, seed, inputs),
    }
}

fn vcdim(a: &VcdimArgs, inputs: &mut Inputs) -> Result<Output, CliError> {
    let space = inputs.space(&a.space)?;
    let pool = inputs.instances(&a.pool)?;
    let search = VcSearch {
        limit: a.limit,
        node_budget: a.node_budget,
    };
    Ok(Output::json(to_value(&vc_dimension_with(&space, &pool, search)?)))
}

fn growth(a: &GrowthArgs, inputs: &mut Inputs) -> Result<Output, CliError> {
    let space = inputs.space(&a.space)?;
    let pool = inputs.instances(&a.pool)?;
    let top = a.max_m.unwrap_or(pool.len()).min(pool.len());
    let values = (1..=top)
        .map(|m| growth_function(&space, m, &pool))
        .collect::<vclab::Result<Vec<_>>>()?;
    let sweep = a.csv.then(|| {
        let mut csv = String::from("m,growth,exact,two_pow_m\n");
        for g in &values {
            let _ = writeln!(csv, "{},{},{},{}", g.m, g.value, g.exact, 1u128 << g.m.min(127));
        }
        csv
    });
    Ok(Output {
        result: json!({ "pool_size": pool.len(), "values": to_value(&values) }),
        sweep,
    })
}

fn big_number(n: &BigUint) -> Value {
    match u64::try_from(n) {
        Ok(v) => json!(v),
        Err(_) => json!(n.to_string()),
    }
}

fn sauer(a: &SauerArgs) -> Result<Output, CliError> {
    let poly = |m: u64| sauer_poly_bound(a.d, m).ok();
    let sweep = a.csv.then(|| {
        let mut csv = String::from("m,sauer_bound,poly_bound,two_pow_m\n");
        for m in 1..=a.m {
            let p = poly(m).map(|v| v.to_string()).unwrap_or_default();
            let _ = writeln!(csv, "{m},{},{p},{}", sauer_bound(a.d, m), BigUint::from(1u8) << m);
        }
        csv
    });
    Ok(Output {
        result: json!({
            "d": a.d,
            "m": a.m,
            "value": big_number(&sauer_bound(a.d, a.m)),
            "poly_bound": poly(a.m),
        }),
        sweep,
    })
}

const EPS_GRID: [f64; 6] = [0.01, 0.05, 0.1, 0.2, 0.3, 0.5];

fn bounds(a: &BoundsArgs) -> Result<Output, CliError> {
    let report = |eps: f64, delta: f64| -> Result<_, CliError> {
        let mut r = bounds_report(a.d, eps, delta, a.mh)?;
        r.m0_pac = m0_pac(eps, delta, a.d, a.mh, a.m0_nmse)?;
        Ok(r)
    };
    let main = report(a.eps, a.delta)?;
    let sweep = if a.csv {
        let mut csv = String::from("eps,delta,m0_singleton,m0_1,m0_2,m0_3,m0_ucp,m0_pac,epsilon0_at_m0\n");
        for &eps in &EPS_GRID {
            for &delta in &EPS_GRID {
                let r = report(eps, delta)?;
                let (c1, c2, c3) = match r.m0_components {
                    Some(c) => (c.m0_1.to_string(), c.m0_2.to_string(), c.m0_3.to_string()),
                    None => Default::default(),
                };
                let _ = writeln!(
                    csv,
                    "{eps},{delta},{},{c1},{c2},{c3},{},{},{}",
                    r.m0_singleton, r.m0_ucp, r.m0_pac, r.epsilon0_at_m0
                );
            }
        }
        Some(csv)
    } else {
        None
    };
    Ok(Output {
        result: to_value(&main),
        sweep,
    })
}

fn learner(arg: &str, space: &HypothesisSpace, inputs: &mut Inputs) -> Result<Arc<dyn LearningFunction>, CliError> {
    if let Some(name) = arg.strip_prefix("builtin:") {
        return Ok(builtin(name, space)?);
    }
    if let Some(path) = arg.strip_prefix("file:") {
        let table = inputs.json(path)?;
        return Ok(Arc::new(LookupTableLearner::from_json(&table, space)?));
    }
    Err(CliError::Usage(format!("learner must be builtin:NAME or file:PATH, got {arg:?}")))
}

fn simulate(
    a: &SimArgs,
    inputs: &mut Inputs,
    exact: &dyn Fn(&vclab::DiscreteDistribution, usize, &vclab::Rational) -> vclab::Result<vclab::ExactReport>,
    sample: &dyn Fn(&vclab::DiscreteDistribution, usize, &vclab::Rational) -> vclab::Result<vclab::TrialReport>,
) -> Result<Output, CliError> {
    let dist = inputs.distribution(&a.dist)?;
    let eps = parse_rational(&a.eps)?;
    let mut csv;
    let reports: Vec<Value> = if a.exact {
        csv = String::from("m,states,probability,probability_f64\n");
        a.m.iter()
            .map(|&m| {
                let r = exact(&dist, m, &eps)?;
                let _ = writeln!(csv, "{},{},{},{}", r.m, r.states, format_rational(&r.probability), r.probability_f64);
                Ok(to_value(&r))
            })
            .collect::<Result<_, CliError>>()?
    } else {
        csv = String::from("m,trials,successes,estimate,ci_low,ci_high\n");
        a.m.iter()
            .map(|&m| {
                let r = sample(&dist, m, &eps)?;
                let _ = writeln!(csv, "{},{},{},{},{},{}", r.m, r.trials, r.successes, r.estimate, r.ci95.0, r.ci95.1);
                Ok(to_value(&r))
            })
            .collect::<Result<_, CliError>>()?
    };
    Ok(Output {
        result: json!({
            "mode": if a.exact { "exact" } else { "monte-carlo" },
            "eps": format_rational(&eps),
            "reports": reports,
        }),
        sweep: Some(csv),
    })
}

fn ucp_sim(a: &SimArgs, seed: u64, inputs: &mut Inputs) -> Result<Output, CliError> {
    let space = inputs.space(&a.space)?;
    simulate(
        a,
        inputs,
        &|d, m, eps| exact_ucp_probability(&space, d, m, eps),
        &|d, m, eps| estimate_ucp_probability(&space, d, m, eps, a.trials, seed),
    )
}

fn pac_sim(a: &PacArgs, seed: u64, inputs: &mut Inputs) -> Result<Output, CliError> {
    let space = inputs.space(&a.sim.space)?;
    let l = learner(&a.learner, &space, inputs)?;
    let mut out = simulate(
        &a.sim,
        inputs,
        &|d, m, eps| exact_pac_probability(l.as_ref(), &space, d, m, eps),
        &|d, m, eps| estimate_pac_probability(l.as_ref(), &space, d, m, eps, a.sim.trials, seed),
    )?;
    out.result["learner"] = json!(l.name());
    Ok(out)
}

fn nfl(a: &NflArgs, inputs: &mut Inputs) -> Result<Output, CliError> {
    let points = match &a.points {
        Some(p) => inputs.instances(p)?,
        None => (0..2 * a.m).map(|i| Instance::atom(format!("x{i}"))).collect(),
    };
    let ambient = if a.space == "full" { None } else { Some(inputs.space(&a.space)?) };
    let inst = build_nfl_instance(points, a.m, ambient)?;
    let l = learner(&a.learner, inst.ambient(), inputs)?;
    let budget = if a.extended { EXTENDED_CALL_BUDGET } else { DEFAULT_CALL_BUDGET };
    let report = nfl_report(l.as_ref(), &inst, budget)?;
    let mut result = to_value(&report);
    result["points"] = json!(inst.points.iter().map(Instance::to_json).collect::<Vec<_>>());
    Ok(Output::json(result))
}

struct Parsed {
    formula: Formula,
    backend: Backend,
}

fn parse(a: &FormulaArgs, inputs: &mut Inputs) -> Result<Parsed, CliError> {
    let text = inputs.formula_text(&a.formula)?;
    let formula = parse_formula(&text, &a.objects, &a.params).map_err(vclab::Error::from)?;
    let backend = match &a.backend {
        Some(b) => b.parse()?,
        None if formula.uses_exp() => Backend::Float,
        None => Backend::Exact,
    };
    Ok(Parsed { formula, backend })
}

fn parameter_source(grid: &Option<String>, list: &Option<String>, budget: u64, seed: u64) -> Result<ParameterSource, CliError> {
    Ok(match (grid, list) {
        (Some(g), _) => ParameterSource::Grid(rows(g)?),
        (None, Some(l)) => ParameterSource::List(rows(l)?),
        (None, None) => ParameterSource::Unrestricted { budget, seed },
    })
}

fn formula(cmd: &FormulaCommand, seed: u64, inputs: &mut Inputs) -> Result<Output, CliError> {
    match cmd {
        FormulaCommand::Parse(a) => {
            let p = parse(a, inputs)?;
            Ok(Output::json(json!({
                "formula": p.formula.to_string(),
                "objects": p.formula.objects,
                "params": p.formula.params,
                "uses_exp": p.formula.uses_exp(),
                "backend": p.backend,
                "closed_form": vclab::formula::detect_closed_form(&p.formula),
            })))
        }
        FormulaCommand::Eval(EvalArgs { formula, x, w }) => {
            let p = parse(formula, inputs)?;
            let value = p.formula.eval(&rationals(x)?, &rationals(w)?, p.backend)?;
            Ok(Output::json(json!({ "formula": p.formula.to_string(), "backend": p.backend, "value": value })))
        }
        FormulaCommand::Space(a) => formula_space(a, seed, inputs),
        FormulaCommand::Shatter(a) => formula_shatter(a, seed, inputs),
    }
}

fn formula_space(a: &SpaceArgs, seed: u64, inputs: &mut Inputs) -> Result<Output, CliError> {
    let p = parse(&a.formula, inputs)?;
    let points = inputs.points(&a.instances)?;
    let arity = p.formula.objects.len();
    let source = parameter_source(&a.grid, &a.list, a.budget, seed)?;
    let text = p.formula.to_string();
    let space = definable_space(p.formula, source, arity, p.backend)?;
    let instances: Vec<Instance> = points.into_iter().map(Instance::point).collect();
    let dich = space.realized_dichotomies(&instances)?;
    let labelings: Vec<String> = dich.labelings().map(ToString::to_string).collect();
    Ok(Output::json(json!({
        "formula": text,
        "backend": p.backend,
        "instances": dich.instances.iter().map(Instance::to_json).collect::<Vec<_>>(),
        "count": labelings.len(),
        "shattered": labelings.len() == 1usize << dich.instances.len(),
        "exact": dich.exact,
        "dichotomies": labelings,
        "known_vc": space.known_vc(),
    })))
}

fn formula_shatter(a: &ShatterArgs, seed: u64, inputs: &mut Inputs) -> Result<Output, CliError> {
    let p = parse(&a.formula, inputs)?;
    let points = inputs.points(&a.instances)?;
    let config = SearchConfig {
        budget: a.budget,
        seed,
        grid: a.grid.as_deref().map(rows).transpose()?,
    };
    let search = nip_shatter_search(&p.formula, &points, p.backend, &config)?;
    let mut result = to_value(&search);
    result["formula"] = json!(p.formula.to_string());
    result["backend"] = json!(p.backend);
    Ok(Output::json(result))
}
