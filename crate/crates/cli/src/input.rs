use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use vclab::io::{builtin_space, distribution_from_json, instances_from_json, space_from_json};
use vclab::rational::parse_rational;
use vclab::{DiscreteDistribution, HypothesisSpace, Instance, Rational};

use crate::error::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Reads input files and remembers their digests for the manifest.
#[derive(Default)]
pub struct Inputs {
    pub digests: Vec<InputDigest>,
}

impl Inputs {
    pub fn read(&mut self, path: &str) -> Result<String, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::Io(path.to_string(), e))?;
        let digest = Sha256::digest(&bytes);
        self.digests.push(InputDigest {
            path: path.to_string(),
            sha256: format!("{digest:x}"),
        });
        String::from_utf8(bytes).map_err(|_| CliError::Usage(format!("{path} is not UTF-8")))
    }

    /// A file path or an inline JSON literal.
    pub fn json(&mut self, arg: &str) -> Result<Value, CliError> {
        let inline = arg.trim_start().starts_with(['{', '[']);
        let text = if inline { arg.to_string() } else { self.read(arg)? };
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{arg}: {e}")))
    }

    pub fn space(&mut self, arg: &str) -> Result<HypothesisSpace, CliError> {
        if let Ok(space) = builtin_space(arg) {
            return Ok(space);
        }
        Ok(space_from_json(&self.json(arg)?)?)
    }

    pub fn distribution(&mut self, arg: &str) -> Result<DiscreteDistribution, CliError> {
        Ok(distribution_from_json(&self.json(arg)?)?)
    }

    pub fn instances(&mut self, arg: &str) -> Result<Vec<Instance>, CliError> {
        Ok(instances_from_json(&self.json(arg)?)?)
    }

    /// Text of a formula argument; `@path` reads a file.
    pub fn formula_text(&mut self, arg: &str) -> Result<String, CliError> {
        match arg.strip_prefix('@') {
            Some(path) => Ok(self.read(path)?.trim().to_string()),
            None => Ok(arg.to_string()),
        }
    }

    /// Points given as `1;2;3` / `1,0;0,1`, or as JSON.
    pub fn points(&mut self, arg: &str) -> Result<Vec<Vec<Rational>>, CliError> {
        let looks_json = arg.trim_start().starts_with('[') || Path::new(arg).is_file();
        if !looks_json {
            return rows(arg);
        }
        self.instances(arg)?
            .into_iter()
            .map(|x| {
                x.coords()
                    .map(<[Rational]>::to_vec)
                    .ok_or_else(|| CliError::Usage(format!("instance {x} has no coordinates")))
            })
            .collect()
    }
}

pub fn rationals(items: &[String]) -> Result<Vec<Rational>, CliError> {
    items.iter().map(|s| Ok(parse_rational(s.trim())?)).collect()
}

/// `a,b;c,d` into rows of rationals.
pub fn rows(text: &str) -> Result<Vec<Vec<Rational>>, CliError> {
    text.split(';')
        .map(|row| {
            let items: Vec<String> = row.split(',').map(str::to_string).collect();
            rationals(&items)
        })
        .collect()
}
