use alloc::format;
use alloc::vec::Vec;

use super::PotentialKind;
use crate::{Error, Result};

/// Parses the textual potential forms
///
/// ```text
/// mobius | free | periodic:a,b,... | bernoulli:p,v0,v1[,seed] | custom:@path | custom:a,b,...
/// ```
///
/// `custom:@path` hands `path` to `load`, which returns the values; the
/// Bernoulli seed falls back to `default_seed` when omitted.
pub fn parse_kind<F>(s: &str, default_seed: u64, load: F) -> Result<PotentialKind>
where
    F: FnOnce(&str) -> Result<Vec<f64>>,
{
    let s = s.trim();
    let (head, rest) = match s.split_once(':') {
        Some((h, r)) => (h, Some(r)),
        None => (s, None),
    };
    match (head.to_ascii_lowercase().as_str(), rest) {
        ("mobius" | "moebius", None) => Ok(PotentialKind::Moebius),
        ("free", None) => Ok(PotentialKind::Free),
        ("periodic", Some(r)) => Ok(PotentialKind::Periodic(reals(r)?)),
        ("bernoulli", Some(r)) => {
            let parts: Vec<&str> = r.split(',').map(str::trim).collect();
            if parts.len() != 3 && parts.len() != 4 {
                return Err(Error::input("bernoulli expects p,v0,v1[,seed]"));
            }
            let num = |t: &str| -> Result<f64> {
                t.parse().map_err(|_| Error::input(format!("bad number {t:?}")))
            };
            let seed = match parts.get(3) {
                Some(t) => t.parse().map_err(|_| Error::input(format!("bad seed {t:?}")))?,
                None => default_seed,
            };
            Ok(PotentialKind::Bernoulli {
                prob: num(parts[0])?,
                values: [num(parts[1])?, num(parts[2])?],
                seed,
            })
        }
        ("custom", Some(r)) => match r.strip_prefix('@') {
            Some(path) => Ok(PotentialKind::Custom(load(path)?)),
            None => Ok(PotentialKind::Custom(reals(r)?)),
        },
        _ => Err(Error::input(format!("unknown potential {s:?}"))),
    }
}

fn reals(list: &str) -> Result<Vec<f64>> {
    list.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>().map_err(|_| Error::input(format!("bad number {t:?}")))
        })
        .collect()
}
