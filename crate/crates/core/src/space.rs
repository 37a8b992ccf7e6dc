//! Entropy measures and space accounting, generic over the float type.

use std::fmt::{self, Display, Write as _};

use num_bigint::BigUint;
use num_traits::{Float, One};
use statrs::function::gamma::ln_gamma;

use crate::brwt::Brwt;
use crate::error::{Error, Result};
use crate::relation::{Pair, RelationDims};

/// Binomials over at most this many cells are computed exactly.
pub const EXACT_CELLS: usize = 10_000;

/// Additive slack per element used when checking the BRWT size bound.
pub const BOUND_SLACK: usize = 8;

fn cast<F: Float>(v: f64) -> F {
    F::from(v).expect("finite value fits the float type")
}

fn lg_big(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 64 {
        return (v.iter_u64_digits().next().unwrap_or(0) as f64).log2();
    }
    let shift = bits - 64;
    let top = (v >> shift).iter_u64_digits().next().unwrap_or(0);
    (top as f64).log2() + shift as f64
}

fn binomial(n: usize, k: usize) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `lg C(n sigma, t)`, the bits needed to tell apart all relations with
/// these dimensions.
pub fn entropy<F: Float>(dims: RelationDims) -> Result<F> {
    let cells = dims.n.checked_mul(dims.sigma).ok_or_else(|| Error::Format("relation too large".into()))?;
    if dims.t > cells {
        return Err(Error::Format(format!("{} pairs do not fit {cells} cells", dims.t)));
    }
    if dims.t == 0 || dims.t == cells {
        return Ok(F::zero());
    }
    if cells <= EXACT_CELLS {
        return Ok(cast(lg_big(&binomial(cells, dims.t))));
    }
    let ln = ln_gamma(cells as f64 + 1.0) - ln_gamma(dims.t as f64 + 1.0) - ln_gamma((cells - dims.t) as f64 + 1.0);
    Ok(cast(ln / std::f64::consts::LN_2))
}

/// `sum n_a lg(n / n_a)` over the nonzero counts, `n` being their sum.
pub fn zero_order<F: Float>(counts: &[usize]) -> F {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return F::zero();
    }
    let n: F = cast(total as f64);
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let c: F = cast(c as f64);
            c * (n / c).log2()
        })
        .fold(F::zero(), |a, b| a + b)
}

/// Zero-order size of a symbol sequence.
pub fn sequence_zero_order<F: Float>(seq: &[usize]) -> F {
    let mut counts = std::collections::HashMap::new();
    for &s in seq {
        *counts.entry(s).or_insert(0usize) += 1;
    }
    zero_order(&counts.into_values().collect::<Vec<_>>())
}

/// Size of the BRWT when each node's two bitmaps are read as one sequence
/// over bit pairs and coded at zero-order entropy. The root, where `00`
/// also occurs, is counted as `2n` plain bits.
pub fn brwt_ideal_bits<F: Float>(b: &Brwt) -> F {
    let root: F = cast((2 * b.dims().n) as f64);
    b.nodes()[1..]
        .iter()
        .map(|v| {
            let [_, c01, c10, c11] = v.symbol_counts();
            zero_order::<F>(&[c01, c10, c11])
        })
        .fold(root, |a, b| a + b)
}

/// `lg(1 + sqrt 2) H(R) + 8 (t + n + sigma)`.
pub fn brwt_bound<F: Float>(dims: RelationDims) -> Result<F> {
    let factor: F = cast((1.0 + 2f64.sqrt()).log2());
    let slack: F = cast((BOUND_SLACK * (dims.t + dims.n + dims.sigma)) as f64);
    Ok(factor * entropy::<F>(dims)? + slack)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentationSpace {
    pub name: String,
    pub payload_bits: usize,
    pub directory_bits: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BrwtSpace<F> {
    pub ideal_bits: F,
    pub bound_bits: F,
    pub leaf_ones: usize,
}

impl<F: Float> BrwtSpace<F> {
    pub fn holds(&self) -> bool {
        self.ideal_bits <= self.bound_bits
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpaceReport<F> {
    pub dims: RelationDims,
    pub entropy_bits: F,
    pub h0_s_bits: F,
    pub representations: Vec<RepresentationSpace>,
    pub brwt: Option<BrwtSpace<F>>,
}

impl<F: Float + Display> SpaceReport<F> {
    pub fn new(dims: RelationDims, pairs: &[Pair]) -> Result<Self> {
        let mut counts = vec![0; dims.sigma + 1];
        for p in pairs {
            counts[p.label] += 1;
        }
        Ok(Self {
            dims,
            entropy_bits: entropy(dims)?,
            h0_s_bits: zero_order(&counts),
            representations: Vec::new(),
            brwt: None,
        })
    }

    pub fn add(&mut self, name: &str, payload_bits: usize, directory_bits: usize) {
        self.representations.push(RepresentationSpace {
            name: name.to_string(),
            payload_bits,
            directory_bits,
        });
    }

    pub fn add_brwt(&mut self, b: &Brwt) -> Result<()> {
        self.add("brwt", b.payload_bits(), b.directory_bits());
        self.brwt = Some(BrwtSpace {
            ideal_bits: brwt_ideal_bits(b),
            bound_bits: brwt_bound(self.dims)?,
            leaf_ones: b.leaf_ones(),
        });
        Ok(())
    }

    /// `key=value` lines, one fact per line.
    pub fn to_key_values(&self) -> String {
        let mut out = String::new();
        let d = self.dims;
        let _ = writeln!(out, "n={}\nsigma={}\nt={}", d.n, d.sigma, d.t);
        let _ = writeln!(out, "entropy_bits={:.4}", self.entropy_bits);
        let _ = writeln!(out, "h0_s_bits={:.4}", self.h0_s_bits);
        for r in &self.representations {
            let _ = writeln!(out, "payload_bits.{}={}", r.name, r.payload_bits);
            let _ = writeln!(out, "directory_bits.{}={}", r.name, r.directory_bits);
        }
        if let Some(b) = &self.brwt {
            let _ = writeln!(out, "brwt_ideal_bits={:.4}", b.ideal_bits);
            let _ = writeln!(out, "brwt_bound_bits={:.4}", b.bound_bits);
            let _ = writeln!(out, "brwt_bound_holds={}", b.holds());
            let _ = writeln!(out, "brwt_leaf_ones={}", b.leaf_ones);
        }
        out
    }
}

impl<F: Float + Display> Display for SpaceReport<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.dims;
        writeln!(f, "{:<16}n={} sigma={} t={}", "relation", d.n, d.sigma, d.t)?;
        writeln!(f, "{:<16}{:>12.2} bits", "entropy H(R)", self.entropy_bits)?;
        writeln!(f, "{:<16}{:>12.2} bits", "t*H0(S)", self.h0_s_bits)?;
        if !self.representations.is_empty() {
            writeln!(f, "{:<16}{:>12} {:>12}", "representation", "payload", "directory")?;
            for r in &self.representations {
                writeln!(f, "{:<16}{:>12} {:>12}", r.name, r.payload_bits, r.directory_bits)?;
            }
        }
        if let Some(b) = &self.brwt {
            writeln!(
                f,
                "{:<16}{:>12.2} bits (bound {:.2}, {})",
                "brwt ideal",
                b.ideal_bits,
                b.bound_bits,
                if b.holds() { "holds" } else { "violated" }
            )?;
        }
        Ok(())
    }
}
