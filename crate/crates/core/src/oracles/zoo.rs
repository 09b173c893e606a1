//! String ids for the oracle zoo, as accepted on the command line:
//! `f1`, `f2`, `f3[:beta=<v>]`, `halfsq`, `quad:m=<m>,n=<n>,seed=<s>`,
//! `augl1:m=<m>,n=<n>,k=<k>,seed=<s>[,signal=gaussian|pm_one][,alpha=<a>]`.

use std::collections::BTreeMap;

use crate::augl1::{gen_sparse_problem, SignalKind};
use crate::error::{Error, Result};
use crate::numkit::{gaussian_matrix, DenseMatrix, DenseVector, GaussianStream};
use crate::oracles::{
    make_augl1_dual, make_example_1d, make_quadratic_composite, Example1dKind, ObjectiveOracle,
};

/// One representative of every zoo family.
pub const DEFAULT_ZOO: &[&str] = &[
    "f1",
    "f2",
    "f3:beta=1",
    "halfsq",
    "quad:m=20,n=50,seed=1",
    "augl1:m=20,n=50,k=4,seed=1",
];

#[derive(Debug, Clone, PartialEq)]
pub enum OracleSpec {
    Example(Example1dKind),
    HalfSquare,
    Quadratic {
        m: usize,
        n: usize,
        seed: u64,
    },
    Augl1 {
        m: usize,
        n: usize,
        k: usize,
        seed: u64,
        signal: SignalKind,
        alpha: Option<f64>,
    },
}

fn parse_params(id: &str, body: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for part in body.split(',').filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("`{id}`: expected key=value, got `{part}`")))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn take<T: std::str::FromStr>(
    id: &str,
    params: &mut BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>> {
    params
        .remove(key)
        .map(|v| {
            v.parse::<T>()
                .map_err(|_| Error::Parse(format!("`{id}`: bad value `{v}` for `{key}`")))
        })
        .transpose()
}

fn need<T: std::str::FromStr>(
    id: &str,
    params: &mut BTreeMap<String, String>,
    key: &str,
) -> Result<T> {
    take(id, params, key)?.ok_or_else(|| Error::Parse(format!("`{id}`: missing `{key}`")))
}

impl OracleSpec {
    pub fn parse(id: &str) -> Result<Self> {
        let (family, body) = id.split_once(':').unwrap_or((id, ""));
        let mut params = parse_params(id, body)?;
        let spec = match family.trim() {
            "f1" => OracleSpec::Example(Example1dKind::F1),
            "f2" => OracleSpec::Example(Example1dKind::F2),
            "f3" => OracleSpec::Example(Example1dKind::F3 {
                beta: take(id, &mut params, "beta")?.unwrap_or(1.0),
            }),
            "halfsq" => OracleSpec::HalfSquare,
            "quad" => OracleSpec::Quadratic {
                m: need(id, &mut params, "m")?,
                n: need(id, &mut params, "n")?,
                seed: need(id, &mut params, "seed")?,
            },
            "augl1" => {
                let signal = match params.remove("signal").as_deref() {
                    None | Some("gaussian") => SignalKind::Gaussian,
                    Some("pm_one") => SignalKind::PmOne,
                    Some(other) => {
                        return Err(Error::Parse(format!("`{id}`: unknown signal `{other}`")))
                    }
                };
                OracleSpec::Augl1 {
                    m: need(id, &mut params, "m")?,
                    n: need(id, &mut params, "n")?,
                    k: need(id, &mut params, "k")?,
                    seed: need(id, &mut params, "seed")?,
                    signal,
                    alpha: take(id, &mut params, "alpha")?,
                }
            }
            _ => return Err(Error::UnknownOracle(id.to_string())),
        };
        if let Some(key) = params.keys().next() {
            return Err(Error::Parse(format!("`{id}`: unknown key `{key}`")));
        }
        Ok(spec)
    }

    pub fn build(&self) -> Result<Box<dyn ObjectiveOracle>> {
        Ok(match *self {
            OracleSpec::Example(kind) => Box::new(make_example_1d(kind)?),
            OracleSpec::HalfSquare => Box::new(make_quadratic_composite(
                DenseMatrix::identity(1),
                DenseVector::zeros(1),
            )?),
            OracleSpec::Quadratic { m, n, seed } => {
                let a = gaussian_matrix(m, n, seed);
                let b = DenseVector::from_raw(GaussianStream::substream(seed, 1).gaussians(m));
                Box::new(make_quadratic_composite(a, b)?)
            }
            OracleSpec::Augl1 {
                m,
                n,
                k,
                seed,
                signal,
                alpha,
            } => {
                let mut p = gen_sparse_problem(seed, m, n, k, signal)?;
                if let Some(alpha) = alpha {
                    p.alpha = alpha;
                }
                Box::new(make_augl1_dual(p.a, p.b, p.alpha)?)
            }
        })
    }
}

pub fn oracle_from_id(id: &str) -> Result<Box<dyn ObjectiveOracle>> {
    OracleSpec::parse(id)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_family() {
        for id in DEFAULT_ZOO {
            let o = oracle_from_id(id).unwrap_or_else(|e| panic!("{id}: {e}"));
            assert!(o.dim() >= 1);
        }
        assert_eq!(
            OracleSpec::parse("f3:beta=2.5").unwrap(),
            OracleSpec::Example(Example1dKind::F3 { beta: 2.5 })
        );
    }

    #[test]
    fn rejects_malformed_ids() {
        assert!(matches!(oracle_from_id("f9"), Err(Error::UnknownOracle(_))));
        assert!(oracle_from_id("quad:m=2,n=5").is_err());
        assert!(oracle_from_id("quad:m=2,n=5,seed=1,extra=3").is_err());
        assert!(oracle_from_id("f3:beta=abc").is_err());
        assert!(oracle_from_id("f3:beta=-1").is_err());
        assert!(oracle_from_id("augl1:m=4,n=8,k=2,seed=1,signal=uniform").is_err());
    }

    #[test]
    fn seeded_quad_is_deterministic() {
        let a = oracle_from_id("quad:m=3,n=5,seed=9").unwrap();
        let b = oracle_from_id("quad:m=3,n=5,seed=9").unwrap();
        let x = DenseVector::from(vec![0.1, 0.2, 0.3, 0.4, 0.5]);
        assert_eq!(a.eval(&x).unwrap(), b.eval(&x).unwrap());
    }
}
