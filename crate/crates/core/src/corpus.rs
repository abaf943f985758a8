//! Plain-text corpora: one formula per line, under `# vars: x,y` headers
//! that apply until the next header. An optional `# params: a=1/3, b=2`
//! header gives parameters rational values, which are substituted into
//! each following formula; a new `# vars:` header clears it. Other `#`
//! lines are comments.

use crate::parse::parse;
use crate::rational::Rational;
use crate::syntax::{DefinableSet, Valuation, Var};
use crate::{Error, Result};

pub const SHAPES: &str = include_str!("../corpus/shapes.txt");
pub const FUNCTIONS: &str = include_str!("../corpus/functions.txt");
pub const FIBERED: &str = include_str!("../corpus/fibered.txt");
pub const PARAMETRIC: &str = include_str!("../corpus/parametric.txt");

fn parse_params(text: &str, line: usize) -> Result<Valuation> {
    let mut v = Valuation::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Usage(format!("corpus line {line}: expected name=value, got `{part}`")))?;
        let q: Rational =
            value.trim().parse().map_err(|e| Error::Usage(format!("corpus line {line}: {e}")))?;
        v.insert(Var::new(name.trim()), q);
    }
    Ok(v)
}

pub fn parse_corpus(text: &str) -> Result<Vec<DefinableSet>> {
    let mut vars: Option<Vec<String>> = None;
    let mut params = Valuation::new();
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if let Some(v) = line.strip_prefix("# vars:") {
            vars = Some(v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect());
            params.clear();
            continue;
        }
        if let Some(p) = line.strip_prefix("# params:") {
            params = parse_params(p, i + 1)?;
            continue;
        }
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some(vs) = &vars else {
            return Err(Error::Usage(format!("corpus line {}: formula before any `# vars:` header", i + 1)));
        };
        let names: Vec<&str> = vs.iter().map(String::as_str).collect();
        let ps: Vec<&str> = params.keys().map(Var::name).collect();
        let s = parse(line, &names, &ps).map_err(|e| Error::Usage(format!("corpus line {}: {e}", i + 1)))?;
        out.push(s.instantiate(&params));
    }
    Ok(out)
}
