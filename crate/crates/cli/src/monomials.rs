//! The `--monomials` argument: either a count of random square-free
//! monomials or an explicit list such as `x1*x2*x3,x2*x4`.

use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Monomials {
    Count(usize),
    /// Each monomial as its 1-based variable indices.
    Explicit(Vec<Vec<usize>>),
}

impl FromStr for Monomials {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if let Ok(n) = s.trim().parse() {
            return Ok(Monomials::Count(n));
        }
        s.split(',')
            .map(|m| {
                m.split('*')
                    .map(|v| {
                        v.trim()
                            .strip_prefix('x')
                            .and_then(|k| k.parse::<usize>().ok())
                            .filter(|&k| k >= 1)
                            .ok_or_else(|| format!("bad variable {v:?} in monomial {m:?}"))
                    })
                    .collect()
            })
            .collect::<Result<_, _>>()
            .map(Monomials::Explicit)
    }
}

/// Bit masks over `vars` variables.
pub fn masks(monomials: &[Vec<usize>], vars: usize) -> Result<Vec<u32>, String> {
    monomials
        .iter()
        .map(|m| {
            m.iter().try_fold(0u32, |mask, &k| {
                if k > vars || k > 32 {
                    Err(format!("x{k} exceeds --vars {vars}"))
                } else {
                    Ok(mask | 1 << (k - 1))
                }
            })
        })
        .collect()
}
