//! Central-finite-difference gradient checking against the analytic
//! backward pass.

use uanav_num::Real;

use crate::graph::Graph;
use crate::params::ParameterSet;
use crate::tape::Var;

#[derive(Debug, Clone)]
pub struct GradCheckReport {
    pub max_rel_err: f64,
    /// "param_name[element]" of the worst entry.
    pub worst: String,
    pub elements_checked: usize,
}

/// Compare analytic gradients of a scalar loss against central differences
/// for every element of every parameter.
///
/// Relative error uses an absolute floor so near-zero gradients compare in
/// absolute terms: |a − n| / max(floor, |a|, |n|).
pub fn gradient_check<T: Real>(
    params: &ParameterSet<T>,
    build: impl Fn(&mut Graph<T>) -> Var,
    fd_step: f64,
    rel_floor: f64,
) -> GradCheckReport {
    let mut g = Graph::new(params);
    let loss = build(&mut g);
    assert_eq!(g.value(loss).numel(), 1, "gradient_check needs a scalar loss");
    let (param_grads, _) = g.backward(loss);

    let eval = |p: &ParameterSet<T>| -> f64 {
        let mut g = Graph::new(p);
        let loss = build(&mut g);
        g.value(loss).item().to_f64_lossy()
    };

    let mut report = GradCheckReport {
        max_rel_err: 0.0,
        worst: String::new(),
        elements_checked: 0,
    };
    for i in 0..params.len() {
        let (name, tensor) = params.by_index(i);
        let name = name.to_string();
        let numel = tensor.numel();
        for j in 0..numel {
            let mut plus = params.clone();
            plus.update_values(i, |t| {
                t.data_mut()[j] += T::of(fd_step);
            });
            let mut minus = params.clone();
            minus.update_values(i, |t| {
                t.data_mut()[j] -= T::of(fd_step);
            });
            let numeric = (eval(&plus) - eval(&minus)) / (2.0 * fd_step);
            let analytic = param_grads.by_param[i]
                .as_ref()
                .map(|g| g.data()[j].to_f64_lossy())
                .unwrap_or(0.0);
            let denom = rel_floor.max(analytic.abs()).max(numeric.abs());
            let rel = (analytic - numeric).abs() / denom;
            report.elements_checked += 1;
            if rel > report.max_rel_err {
                report.max_rel_err = rel;
                report.worst = format!("{name}[{j}]");
            }
        }
    }
    report
}
