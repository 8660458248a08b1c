//! Points on the command line: JSON arrays of `[re, im]` pairs.

use clap::ValueEnum;
use lempert_core::{Complex64, DomainKind, Point};

use crate::error::{CliError, Result};

/// Domain names accepted on the command line. The dimension of `𝕃_n` and
/// `L_n` is taken from the point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DomainArg {
    Lhat,
    Tetra,
    Lie,
    Disc,
}

impl DomainArg {
    pub fn kind(self, dim: usize) -> Result<DomainKind> {
        let kind = match self {
            DomainArg::Lhat => DomainKind::LHat(dim),
            DomainArg::Lie => DomainKind::LieBall(dim),
            DomainArg::Tetra => DomainKind::Tetrablock,
            DomainArg::Disc => DomainKind::UnitDisc,
        };
        if dim == 0 || kind.dim() != dim {
            return Err(CliError::Usage(format!("{kind} takes points with {} coordinates, got {dim}", kind.dim())));
        }
        Ok(kind)
    }
}

pub fn parse_point(input: &str) -> Result<Point> {
    let err = |reason: String| CliError::Parse { input: input.to_owned(), reason };
    let pairs: Vec<[f64; 2]> = serde_json::from_str(input).map_err(|e| err(e.to_string()))?;
    if pairs.is_empty() {
        return Err(err("a point needs at least one coordinate".into()));
    }
    let coords = pairs.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
    Point::new(coords).map_err(|e| err(e.to_string()))
}

/// Like [`parse_point`], but `0` stands for the origin of dimension `dim`.
pub fn parse_point_or_origin(input: &str, dim: Option<usize>) -> Result<Point> {
    match (input.trim(), dim) {
        ("0", Some(n)) => Ok(Point::zeros(n)),
        _ => parse_point(input),
    }
}

pub fn point_to_json(z: &Point) -> String {
    let pairs: Vec<[f64; 2]> = z.iter().map(|c| [c.re, c.im]).collect();
    serde_json::to_string(&pairs).expect("finite pairs serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs() {
        let z = parse_point("[ [0.5,0],[0.7,-1e-3] ]").unwrap();
        assert_eq!(z.dim(), 2);
        assert_eq!(z[1], Complex64::new(0.7, -1e-3));
        assert_eq!(point_to_json(&z), "[[0.5,0.0],[0.7,-0.001]]");
    }

    #[test]
    fn rejects_malformed_points() {
        for bad in ["", "[]", "[1,2]", "[[1]]", "[[1,2,3]]", "(0.5,0)", "[[\"a\",0]]"] {
            assert!(matches!(parse_point(bad), Err(CliError::Parse { .. })), "{bad}");
        }
    }

    #[test]
    fn origin_shorthand() {
        assert!(parse_point_or_origin("0", Some(3)).unwrap().is_zero());
        assert!(parse_point_or_origin("0", None).is_err());
    }

    #[test]
    fn domain_dimensions() {
        assert_eq!(DomainArg::Lhat.kind(4).unwrap(), DomainKind::LHat(4));
        assert!(DomainArg::Tetra.kind(2).is_err());
        assert!(DomainArg::Disc.kind(1).is_ok());
    }
}
