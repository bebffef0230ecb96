use std::fs;

use aqabound::algorithm_zoo::{
    bernstein_vazirani, dj_das, dj_wei, grover, ising_counterexample, kclique, parse_bitstring, Problem,
};
use aqabound::graph_tools::{load_edge_list, random_graph, Graph};

use crate::args::{ProblemArgs, ProblemKind};
use crate::CliError;

fn require_n(a: &ProblemArgs) -> Result<usize, CliError> {
    a.n.ok_or_else(|| CliError::Usage(format!("--n is required for {:?} problems", a.kind)))
}

pub fn load_graph(file: Option<&std::path::Path>, random: bool, n: Option<usize>, p: f64, seed: u64) -> Result<Graph, CliError> {
    match (file, random) {
        (Some(path), false) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Ok(load_edge_list(&text)?)
        }
        (None, true) => {
            let n = n.ok_or_else(|| CliError::Usage("--random needs --n".into()))?;
            Ok(random_graph(n, p, seed)?)
        }
        _ => Err(CliError::Usage("give exactly one of --file or --random for the graph".into())),
    }
}

/// Builds the problem described by `a`, with `n` overriding `--n`.
pub fn build_with_n(a: &ProblemArgs, n: Option<usize>, seed: u64) -> Result<Problem, CliError> {
    let n_opt = n.or(a.n);
    let with_n = || -> Result<usize, CliError> {
        n_opt.ok_or_else(|| CliError::Usage(format!("--n is required for {:?} problems", a.kind)))
    };
    let problem = match a.kind {
        ProblemKind::DjDas => dj_das(with_n()?, &a.function)?,
        ProblemKind::DjWei => dj_wei(with_n()?, &a.function)?,
        ProblemKind::Bv => {
            let secret = a.secret.as_deref().unwrap_or("1");
            let (len, bits) = parse_bitstring(secret)?;
            let n = n_opt.unwrap_or(len);
            if n >= 64 {
                return Err(CliError::Usage(format!("n = {n} is too large")));
            }
            if n < len && bits >> n != 0 {
                return Err(CliError::Usage(format!("secret '{secret}' longer than n = {n}")));
            }
            bernstein_vazirani(n, bits & ((1u64 << n) - 1))?
        }
        ProblemKind::Grover => grover(with_n()?, &a.marked, a.form.into())?,
        ProblemKind::Ising => ising_counterexample(with_n()?)?,
        ProblemKind::Kclique => {
            let g = load_graph(a.file.as_deref(), a.random, n_opt, a.p, seed)?;
            kclique(&g, a.k, a.deformed)?
        }
        ProblemKind::File => {
            let path = a
                .file
                .as_deref()
                .ok_or_else(|| CliError::Usage("the file kind needs --file".into()))?;
            let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Problem::from_json(&text)?
        }
    };
    Ok(problem)
}

pub fn build(a: &ProblemArgs, seed: u64) -> Result<Problem, CliError> {
    build_with_n(a, None, seed)
}

/// Default n values for a scan: up to six consecutive sizes ending at `--n`.
pub fn default_scan(a: &ProblemArgs) -> Result<Vec<usize>, CliError> {
    let n = require_n(a)?;
    let floor = match a.kind {
        ProblemKind::Ising => 3,
        ProblemKind::Kclique => a.k.max(3),
        ProblemKind::File => return Err(CliError::Usage("problem files cannot be scanned".into())),
        _ => 1,
    };
    let lo = n.saturating_sub(5).max(floor);
    Ok((lo..=n).collect())
}
