use super::ast::Formula;
use super::parser::parse_formula;

/// Source text of the graph of `ReLU(x) = max(0, x)` over objects `x, y`.
pub const RELU_GRAPH: &str = "(x < 0 -> y = 0) and (0 <= x -> y = x)";

/// `φ(x, y) ⇔ y = max(0, x)`.
pub fn relu_graph() -> Formula {
    parse_formula(RELU_GRAPH, &["x", "y"], &[] as &[&str]).expect("built-in formula parses")
}

/// Parameter names of [`sigmoid_net`] in declaration order: the output
/// bias `u0`, output weights `u1..uk`, then for each hidden unit `i` its
/// bias `v{i}_0` and input weights `v{i}_1..v{i}_n`.
pub fn sigmoid_net_params(inputs: usize, hidden: usize) -> Vec<String> {
    let mut names: Vec<String> = (0..=hidden).map(|i| format!("u{i}")).collect();
    for i in 1..=hidden {
        names.extend((0..=inputs).map(|j| format!("v{i}_{j}")));
    }
    names
}

/// Object names of [`sigmoid_net`]: `x1..xn`.
pub fn sigmoid_net_objects(inputs: usize) -> Vec<String> {
    (1..=inputs).map(|j| format!("x{j}")).collect()
}

/// The classifier `Σᵢ uᵢ·σ(vᵢ₀ + Σⱼ vᵢⱼ·xⱼ) + u₀ ≥ 0` of a two-layer network
/// with `hidden` logistic units, written without division by multiplying
/// through by the positive factor `Πᵢ (1 + exp(−aᵢ))`.
pub fn sigmoid_net(inputs: usize, hidden: usize) -> Formula {
    assert!(inputs >= 1 && hidden >= 1, "a network needs at least one input and one hidden unit");
    let activation = |i: usize| {
        let mut s = format!("v{i}_0");
        for j in 1..=inputs {
            s.push_str(&format!(" + v{i}_{j} * x{j}"));
        }
        format!("(1 + exp(-({s})))")
    };
    let factors: Vec<String> = (1..=hidden).map(activation).collect();
    let mut terms = vec![std::iter::once("u0".to_string()).chain(factors.iter().cloned()).collect::<Vec<_>>().join(" * ")];
    for i in 1..=hidden {
        let mut parts = vec![format!("u{i}")];
        parts.extend(factors.iter().enumerate().filter(|&(l, _)| l + 1 != i).map(|(_, f)| f.clone()));
        terms.push(parts.join(" * "));
    }
    let text = format!("{} >= 0", terms.join(" + "));
    parse_formula(&text, &sigmoid_net_objects(inputs), &sigmoid_net_params(inputs, hidden))
        .expect("generated formula parses")
}

/// Direct evaluation of the network classifier, parameters in the order of
/// [`sigmoid_net_params`].
pub fn sigmoid_net_classify(x: &[f64], params: &[f64], hidden: usize) -> bool {
    let n = x.len();
    let mut out = params[0];
    for i in 1..=hidden {
        let v = &params[hidden + 1 + (i - 1) * (n + 1)..hidden + 1 + i * (n + 1)];
        let a = v[0] + v[1..].iter().zip(x).map(|(w, xi)| w * xi).sum::<f64>();
        out += params[i] / (1.0 + (-a).exp());
    }
    out >= 0.0
}
