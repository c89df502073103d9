use super::{parse, Arg, Builtin, Expr};
use crate::distfn::{combine, map, power, DistFn, EmpiricalStep, MaxConvolution, Transport};
use crate::error::Result;
use crate::{families, transforms};

/// Builds the distribution DAG. Errors are wrapped with the path of the
/// offending node: `$` is the root, `$.1` its second argument, and so on.
pub fn elaborate(ast: &Expr) -> Result<DistFn> {
    build(ast, "$")
}

/// `parse` followed by `elaborate`.
pub fn evaluate(text: &str) -> Result<DistFn> {
    elaborate(&parse(text)?)
}

fn build(ast: &Expr, path: &str) -> Result<DistFn> {
    let mut children = Vec::new();
    let mut numbers = Vec::new();
    let mut text = None;
    for (i, arg) in ast.args.iter().enumerate() {
        match arg {
            Arg::Expr(e) => children.push(build(e, &format!("{path}.{i}"))?),
            Arg::Number(v) => numbers.push(*v),
            Arg::Text(s) => text = Some(s.as_str()),
        }
    }
    node(ast.builtin, &children, &numbers, text).map_err(|e| e.at(path))
}

fn node(b: Builtin, kids: &[DistFn], num: &[f64], text: Option<&str>) -> Result<DistFn> {
    use Builtin::*;
    let conv = |b| match b {
        Maxc | Powc => MaxConvolution::Classical,
        Maxf | Powf => MaxConvolution::Free,
        _ => MaxConvolution::Boolean,
    };
    match b {
        Gumbel => Ok(families::gumbel()),
        Frechet => families::frechet(num[0]),
        Weibull => families::weibull(num[0]),
        FreeExp => Ok(families::free_exponential()),
        Pareto => families::pareto(num[0]),
        BetaLaw => families::beta_law(num[0]),
        Dagum => families::dagum(num[0], num[1]),
        Cpc => families::cp_classical(num[0], &kids[0]),
        Cpf => families::cp_free(num[0], &kids[0]),
        // integrality was checked by the parser
        Prelimit => families::cp_prelimit(num[0], &kids[0], num[1].round() as u64),
        Maxc | Maxf | Maxb => combine(conv(b), &kids[0], &kids[1]),
        Powc | Powf | Powb => power(conv(b), &kids[0], num[0]),
        Lambda => map(Transport::LambdaVee, &kids[0]),
        Chi => map(Transport::Chi, &kids[0]),
        ChiInv => map(Transport::ChiInv, &kids[0]),
        Bn => transforms::bn_at(&kids[0], num[0]),
        Tocl => transforms::boolean_to_classical(&kids[0]),
        Tobool => transforms::classical_to_boolean(&kids[0]),
        Scale => kids[0].affine(num[0], num.get(1).copied().unwrap_or(0.0)),
        Truncate => kids[0].truncate_below(num[0]),
        Dirac => DistFn::dirac(num[0]),
        Empirical => match text {
            Some(path) => DistFn::empirical(EmpiricalStep::from_csv(path)?),
            None => DistFn::empirical(EmpiricalStep::new(num.to_vec(), None)?),
        },
    }
}
