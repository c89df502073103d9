//! The expression language of the command-line front end.
//!
//! Everything is a call: `name(arg, arg, ...)` where an argument is a number,
//! a double-quoted string or another call. Names are case-insensitive.
//! Arity and numeric ranges are checked while parsing, so a parsed [`Expr`]
//! only fails later for class or domain reasons.

mod elaborate;
mod parser;
mod printer;

use std::fmt;

use rand::Rng;

pub use elaborate::{elaborate, evaluate};
pub use parser::parse;

/// Every function name the language knows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    Gumbel,
    Frechet,
    Weibull,
    FreeExp,
    Pareto,
    BetaLaw,
    Dagum,
    Cpc,
    Cpf,
    Prelimit,
    Maxc,
    Maxf,
    Maxb,
    Powc,
    Powf,
    Powb,
    Lambda,
    Chi,
    ChiInv,
    Bn,
    Tocl,
    Tobool,
    Scale,
    Truncate,
    Dirac,
    Empirical,
}

impl Builtin {
    pub const ALL: [Builtin; 26] = [
        Builtin::Gumbel,
        Builtin::Frechet,
        Builtin::Weibull,
        Builtin::FreeExp,
        Builtin::Pareto,
        Builtin::BetaLaw,
        Builtin::Dagum,
        Builtin::Cpc,
        Builtin::Cpf,
        Builtin::Prelimit,
        Builtin::Maxc,
        Builtin::Maxf,
        Builtin::Maxb,
        Builtin::Powc,
        Builtin::Powf,
        Builtin::Powb,
        Builtin::Lambda,
        Builtin::Chi,
        Builtin::ChiInv,
        Builtin::Bn,
        Builtin::Tocl,
        Builtin::Tobool,
        Builtin::Scale,
        Builtin::Truncate,
        Builtin::Dirac,
        Builtin::Empirical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Gumbel => "gumbel",
            Builtin::Frechet => "frechet",
            Builtin::Weibull => "weibull",
            Builtin::FreeExp => "freeexp",
            Builtin::Pareto => "pareto",
            Builtin::BetaLaw => "betalaw",
            Builtin::Dagum => "dagum",
            Builtin::Cpc => "cpc",
            Builtin::Cpf => "cpf",
            Builtin::Prelimit => "prelimit",
            Builtin::Maxc => "maxc",
            Builtin::Maxf => "maxf",
            Builtin::Maxb => "maxb",
            Builtin::Powc => "powc",
            Builtin::Powf => "powf",
            Builtin::Powb => "powb",
            Builtin::Lambda => "lambda",
            Builtin::Chi => "chi",
            Builtin::ChiInv => "chiinv",
            Builtin::Bn => "bn",
            Builtin::Tocl => "tocl",
            Builtin::Tobool => "tobool",
            Builtin::Scale => "scale",
            Builtin::Truncate => "truncate",
            Builtin::Dirac => "dirac",
            Builtin::Empirical => "empirical",
        }
    }

    /// Case-insensitive lookup.
    pub fn from_name(name: &str) -> Option<Builtin> {
        let lower = name.to_ascii_lowercase();
        Builtin::ALL.into_iter().find(|b| b.name() == lower)
    }

    /// Parametric families, as opposed to operations on other expressions.
    pub fn is_family(self) -> bool {
        matches!(
            self,
            Builtin::Gumbel
                | Builtin::Frechet
                | Builtin::Weibull
                | Builtin::FreeExp
                | Builtin::Pareto
                | Builtin::BetaLaw
                | Builtin::Dagum
                | Builtin::Cpc
                | Builtin::Cpf
                | Builtin::Prelimit
        )
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Arg {
    Number(f64),
    Text(String),
    Expr(Expr),
}

/// A call node. Family calls and operation calls share this shape;
/// [`Builtin::is_family`] tells them apart.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub builtin: Builtin,
    pub args: Vec<Arg>,
}

impl Expr {
    pub fn new(builtin: Builtin, args: Vec<Arg>) -> Expr {
        Expr { builtin, args }
    }

    /// Number of call nodes in the tree.
    pub fn size(&self) -> usize {
        1 + self
            .args
            .iter()
            .map(|a| match a {
                Arg::Expr(e) => e.size(),
                _ => 0,
            })
            .sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self
            .args
            .iter()
            .map(|a| match a {
                Arg::Expr(e) => e.depth(),
                _ => 0,
            })
            .max()
            .unwrap_or(0)
    }
}

/// A random well-formed expression of depth at most `max_depth`, with every
/// argument inside its admissible range. Used for round-trip fuzzing.
pub fn random_ast<R: Rng + ?Sized>(rng: &mut R, max_depth: usize) -> Expr {
    use Builtin::*;
    const LEAVES: [Builtin; 9] = [Gumbel, FreeExp, Frechet, Weibull, Pareto, BetaLaw, Dagum, Dirac, Empirical];
    let b = if max_depth <= 1 {
        LEAVES[rng.random_range(0..LEAVES.len())]
    } else {
        Builtin::ALL[rng.random_range(0..Builtin::ALL.len())]
    };
    let sub = |rng: &mut R| Arg::Expr(random_ast(rng, max_depth - 1));
    let num = |rng: &mut R, lo: f64| Arg::Number(lo + random_magnitude(rng));
    let any = |rng: &mut R| {
        let v = random_magnitude(rng);
        Arg::Number(if rng.random_bool(0.5) { -v } else { v })
    };
    let args = match b {
        Gumbel | FreeExp => vec![],
        Frechet | Weibull | Pareto | BetaLaw => vec![num(rng, f64::MIN_POSITIVE)],
        Dagum => vec![num(rng, f64::MIN_POSITIVE), num(rng, f64::MIN_POSITIVE)],
        Cpc | Cpf => vec![num(rng, 0.0), sub(rng)],
        Prelimit => {
            let lambda: f64 = rng.random_range(0.0..5.0);
            let n = rng.random_range(lambda.ceil().max(1.0) as u64..=1000);
            vec![Arg::Number(lambda), sub(rng), Arg::Number(n as f64)]
        }
        Maxc | Maxf | Maxb => vec![sub(rng), sub(rng)],
        Powc | Scale => {
            let mut v = vec![sub(rng), num(rng, f64::MIN_POSITIVE)];
            if b == Scale && rng.random_bool(0.5) {
                v.push(any(rng));
            }
            v
        }
        Powf => vec![sub(rng), num(rng, 1.0)],
        Powb | Bn => vec![sub(rng), num(rng, 0.0)],
        Lambda | Chi | ChiInv | Tocl | Tobool => vec![sub(rng)],
        Truncate => vec![sub(rng), any(rng)],
        Dirac => vec![any(rng)],
        Empirical => {
            if rng.random_bool(0.3) {
                const PIECES: [&str; 6] = ["data", "/tmp/x.csv", "\\", "\"", " é", "\n"];
                let path: String = (0..rng.random_range(0..4)).map(|_| PIECES[rng.random_range(0..PIECES.len())]).collect();
                vec![Arg::Text(path)]
            } else {
                (0..rng.random_range(1..5)).map(|_| any(rng)).collect()
            }
        }
    };
    Expr::new(b, args)
}

/// Non-negative floats spread over many decades, including exact zero and integers.
fn random_magnitude<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    match rng.random_range(0..4) {
        0 => 0.0,
        1 => rng.random_range(0..100) as f64,
        2 => rng.random::<f64>(),
        _ => rng.random::<f64>() * 10f64.powi(rng.random_range(-12..12)),
    }
}
