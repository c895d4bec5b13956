//! Parsing of instance files and of the `--weights` / `--disutility` specs.

use std::fs;
use std::path::Path;

use ggism::{Criterion, DisutilityFunction, GgiWeights, Instance};

use crate::error::CliError;
use crate::{CriterionArg, ScoreArgs};

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

pub fn load_instance(path: &Path) -> Result<Instance, CliError> {
    Instance::parse(&read(path)?).map_err(|e| CliError::input(path.display().to_string(), e))
}

pub fn disutility(spec: &str, n: usize) -> Result<DisutilityFunction, CliError> {
    let dfun = match spec {
        "identity" => DisutilityFunction::Identity,
        "squared" => DisutilityFunction::Squared,
        _ => match spec.strip_prefix("file:") {
            Some(path) => DisutilityFunction::parse_table(&read(Path::new(path))?)
                .map_err(|e| CliError::input(path.to_string(), e))?,
            None => {
                return Err(CliError::Usage(format!(
                    "unknown disutility {spec:?}; expected identity, squared or file:PATH"
                )))
            }
        },
    };
    dfun.check_covers(n).map_err(|e| CliError::input("disutility", e))?;
    Ok(dfun)
}

/// Weights over `big_n` agents.
pub fn weights(spec: &str, big_n: usize) -> Result<GgiWeights, CliError> {
    if spec == "gini" {
        return Ok(GgiWeights::gini(big_n)?);
    }
    if let Some(k) = spec.strip_prefix("head:") {
        let k: usize = k
            .parse()
            .map_err(|_| CliError::Usage(format!("head:K needs a nonnegative integer, got {k:?}")))?;
        return GgiWeights::head(big_n, k).map_err(|e| CliError::input("weights", e));
    }
    if let Some(path) = spec.strip_prefix("file:") {
        return GgiWeights::parse(&read(Path::new(path))?, big_n).map_err(|e| CliError::input(path.to_string(), e));
    }
    Err(CliError::Usage(format!(
        "unknown weights {spec:?}; expected gini, head:K or file:PATH"
    )))
}

pub fn criterion(args: &ScoreArgs, n: usize) -> Result<Criterion, CliError> {
    Ok(match args.criterion {
        CriterionArg::Utilitarian => Criterion::Utilitarian,
        CriterionArg::Egalitarian => Criterion::Egalitarian,
        CriterionArg::SexEqual => Criterion::SexEqual,
        CriterionArg::Balanced => Criterion::Balanced,
        CriterionArg::Ggi => Criterion::Ggi(weights(&args.weights, 2 * n)?),
    })
}

impl ScoreArgs {
    pub fn resolve(&self, n: usize) -> Result<(DisutilityFunction, Criterion), CliError> {
        Ok((disutility(&self.disutility, n)?, criterion(self, n)?))
    }
}
