//! Compact space arguments for the command line.
//!
//! ```text
//! euclidean:N            hyperbolic:N
//! tree-star:RAYS:LEN     tree-random:EDGES:SEED
//! tree:<topology.json>   product(SPACE,SPACE)
//! corrupted-demo         {"euclidean":{"dim":2}}   (descriptor JSON)
//! ```

use anyhow::{anyhow, bail, Context, Result};
use hadamard::rng;
use hadamard::spaces::tree::TreeTopology;
use hadamard::SpaceDescriptor;

/// What `verify` should check.
#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    Space(SpaceDescriptor),
    /// Euclidean plane with distances raised to the power 1.5.
    CorruptedDemo,
}

pub fn parse_target(text: &str) -> Result<Target> {
    if text.trim() == "corrupted-demo" {
        return Ok(Target::CorruptedDemo);
    }
    parse_space(text).map(Target::Space)
}

fn number<T: std::str::FromStr>(field: &str, what: &str) -> Result<T> {
    field.trim().parse().map_err(|_| anyhow!("{what} must be a number, got {field:?}"))
}

/// Splits `A,B` at the top-level comma.
fn split_pair(inner: &str) -> Result<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in inner.char_indices() {
        match c {
            '(' | '{' | '[' => depth += 1,
            ')' | '}' | ']' => depth -= 1,
            ',' if depth == 0 => return Ok((&inner[..i], &inner[i + 1..])),
            _ => {}
        }
    }
    bail!("product needs two comma-separated factors")
}

pub fn parse_space(text: &str) -> Result<SpaceDescriptor> {
    let text = text.trim();
    if text.starts_with('{') {
        return serde_json::from_str(text).context("space descriptor JSON");
    }
    if let Some(rest) = text.strip_prefix("product(") {
        let inner = rest.strip_suffix(')').ok_or_else(|| anyhow!("unbalanced parentheses in {text:?}"))?;
        let (l, r) = split_pair(inner)?;
        return Ok(SpaceDescriptor::product(parse_space(l)?, parse_space(r)?));
    }
    let parts: Vec<&str> = text.splitn(2, ':').collect();
    let (kind, args) = (parts[0], parts.get(1).copied().unwrap_or(""));
    let descriptor = match kind {
        "euclidean" => SpaceDescriptor::Euclidean { dim: number(args, "dimension")? },
        "hyperbolic" => SpaceDescriptor::Hyperbolic { dim: number(args, "dimension")? },
        "tree-star" => {
            let (k, len) = args.split_once(':').ok_or_else(|| anyhow!("expected tree-star:RAYS:LEN"))?;
            SpaceDescriptor::WeightedTree { topology: TreeTopology::star(number(k, "ray count")?, number(len, "length")?) }
        }
        "tree-random" => {
            let (e, seed) = args.split_once(':').ok_or_else(|| anyhow!("expected tree-random:EDGES:SEED"))?;
            let edges: usize = number(e, "edge count")?;
            if edges == 0 {
                bail!("a tree needs at least one edge");
            }
            let mut s = rng::stream(number(seed, "seed")?, "tree-topology", 0);
            SpaceDescriptor::WeightedTree { topology: TreeTopology::random(edges, &mut s) }
        }
        "tree" => {
            let text = std::fs::read_to_string(args).with_context(|| format!("reading tree topology {args}"))?;
            let topology: TreeTopology = serde_json::from_str(&text).with_context(|| format!("parsing {args}"))?;
            SpaceDescriptor::WeightedTree { topology }
        }
        _ => bail!("unknown space {text:?}"),
    };
    hadamard::Space::new(&descriptor)?;
    Ok(descriptor)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_and_nested_arguments() {
        assert_eq!(parse_space("euclidean:3").unwrap(), SpaceDescriptor::Euclidean { dim: 3 });
        let p = parse_space("product(euclidean:2,product(hyperbolic:2,tree-star:3:1.5))").unwrap();
        assert_eq!(p.product_depth(), 2);
        assert_eq!(parse_space(r#"{"hyperbolic":{"dim":4}}"#).unwrap(), SpaceDescriptor::Hyperbolic { dim: 4 });
        assert_eq!(parse_target("corrupted-demo").unwrap(), Target::CorruptedDemo);
    }

    #[test]
    fn random_trees_are_reproducible() {
        assert_eq!(parse_space("tree-random:10:4").unwrap(), parse_space("tree-random:10:4").unwrap());
    }

    #[test]
    fn bad_arguments_are_rejected() {
        for s in ["euclidean:0", "euclidean:x", "sphere:2", "product(euclidean:1)", "tree-star:3"] {
            assert!(parse_space(s).is_err(), "{s}");
        }
    }
}
