//! Named states: the twelve fully entangled 2×3×3 representatives, GHZ, W, product kets,
//! plus seeded random sampling.

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{CMatrix, PureState, C64, ZERO};

/// Unnormalized kets of the fully entangled 2×3×3 classes, as digit strings
/// (qubit first, then the two qutrits).
const PSI_PATTERNS: [&[&str]; 12] = [
    &["000", "111"],
    &["000", "011", "101"],
    &["000", "011", "102"],
    &["000", "011", "120"],
    &["000", "011", "122"],
    &["000", "011", "101", "112"],
    &["000", "011", "110", "121"],
    &["000", "011", "102", "120"],
    &["000", "011", "112", "120"],
    &["000", "011", "100", "122"],
    &["000", "011", "022", "101"],
    &["000", "011", "022", "101", "112"],
];

pub const PSI_FIRST: u8 = 6;
pub const PSI_LAST: u8 = 17;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum StateId {
    /// `ψ_k` for `k ∈ 6..=17`.
    Psi(u8),
    Ghz(usize),
    W(usize),
    ProductZero(Vec<usize>),
    /// Amplitudes supplied by the caller; has no catalog representative.
    Custom,
}

impl StateId {
    pub fn psi(k: u8) -> Result<Self> {
        if (PSI_FIRST..=PSI_LAST).contains(&k) {
            Ok(StateId::Psi(k))
        } else {
            Err(Error::InvalidStateId(format!("psi{k}")))
        }
    }

    /// `ψ₆ … ψ₁₇` in order.
    pub fn all_psi() -> Vec<StateId> {
        (PSI_FIRST..=PSI_LAST).map(StateId::Psi).collect()
    }

    pub fn dims(&self) -> Option<Vec<usize>> {
        match self {
            StateId::Psi(_) => Some(vec![2, 3, 3]),
            StateId::Ghz(n) | StateId::W(n) => Some(vec![2; *n]),
            StateId::ProductZero(d) => Some(d.clone()),
            StateId::Custom => None,
        }
    }

    /// The stored unnormalized digit pattern of a `ψ_k`.
    pub fn psi_pattern(&self) -> Option<&'static [&'static str]> {
        match self {
            StateId::Psi(k) => Some(PSI_PATTERNS[(*k - PSI_FIRST) as usize]),
            _ => None,
        }
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateId::Psi(k) => write!(f, "psi{k}"),
            StateId::Ghz(n) => write!(f, "ghz:{n}"),
            StateId::W(n) => write!(f, "w:{n}"),
            StateId::ProductZero(d) => {
                let parts: Vec<String> = d.iter().map(|x| x.to_string()).collect();
                write!(f, "zero:{}", parts.join("x"))
            }
            StateId::Custom => write!(f, "custom"),
        }
    }
}

impl FromStr for StateId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidStateId(s.to_string());
        let t = s.trim();
        if let Some(k) = t.strip_prefix("psi") {
            let k: u8 = k.parse().map_err(|_| bad())?;
            return StateId::psi(k).map_err(|_| bad());
        }
        if t == "custom" {
            return Ok(StateId::Custom);
        }
        let (tag, arg) = t.split_once(':').ok_or_else(bad)?;
        match tag {
            "ghz" | "w" => {
                let n: usize = arg.parse().map_err(|_| bad())?;
                if n < 2 {
                    return Err(bad());
                }
                Ok(if tag == "ghz" { StateId::Ghz(n) } else { StateId::W(n) })
            }
            "zero" => {
                let dims = arg
                    .split('x')
                    .map(|p| p.parse::<usize>().ok().filter(|&d| d >= 2))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(bad)?;
                if dims.is_empty() {
                    return Err(bad());
                }
                Ok(StateId::ProductZero(dims))
            }
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for StateId {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<StateId> for String {
    fn from(id: StateId) -> String {
        id.to_string()
    }
}

fn from_patterns(dims: Vec<usize>, kets: &[&str]) -> Result<PureState> {
    let total: usize = dims.iter().product();
    let mut amps = vec![ZERO; total];
    for ket in kets {
        let digits: Vec<usize> = ket.bytes().map(|b| (b - b'0') as usize).collect();
        let idx = digits.iter().zip(&dims).fold(0, |acc, (&k, &d)| acc * d + k);
        amps[idx] += C64::new(1.0, 0.0);
    }
    PureState::new(dims, amps)?.normalize()
}

/// Normalized catalog state for `id`.
pub fn representative(id: &StateId) -> Result<PureState> {
    match id {
        StateId::Psi(_) => from_patterns(vec![2, 3, 3], id.psi_pattern().unwrap()),
        StateId::Ghz(n) if *n >= 2 => {
            let (zeros, ones) = ("0".repeat(*n), "1".repeat(*n));
            from_patterns(vec![2; *n], &[&zeros, &ones])
        }
        StateId::W(n) if *n >= 2 => {
            let kets: Vec<String> = (0..*n)
                .map(|k| (0..*n).map(|j| if j == k { '1' } else { '0' }).collect())
                .collect();
            let refs: Vec<&str> = kets.iter().map(|s| s.as_str()).collect();
            from_patterns(vec![2; *n], &refs)
        }
        StateId::ProductZero(d) => PureState::basis(d.clone(), &vec![0; d.len()]),
        _ => Err(Error::InvalidStateId(id.to_string())),
    }
}

/// Seeded generator used by every randomized routine.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` of the generator seeded by `seed`.
pub fn rng_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Complex standard normal: `E|z|² = 1`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re * s, im * s)
}

pub fn ginibre<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(d, d, |_, _| complex_normal(rng))
}

/// `d×d` matrix of i.i.d. complex standard normals.
pub fn random_ginibre(d: usize, seed: u64) -> Result<CMatrix> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    Ok(ginibre(d, &mut rng_from_seed(seed)))
}

/// Haar-random unitary (QR of a Ginibre matrix with the phase fix).
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let qr = ginibre(d, rng).qr();
    let (q, r) = (qr.q(), qr.r());
    let mut u = q;
    for j in 0..d {
        let rjj = r[(j, j)];
        let ph = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..d {
            u[(i, j)] *= ph;
        }
    }
    u
}

/// Haar-random normalized ket.
pub fn random_ket<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DVector<C64> {
    let v = DVector::from_fn(d, |_, _| complex_normal(rng));
    let n = v.norm();
    v / C64::new(n, 0.0)
}

pub fn random_product_state_with<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Result<PureState> {
    let mut amps = vec![C64::new(1.0, 0.0)];
    for &d in dims {
        let k = random_ket(d, rng);
        amps = amps.iter().flat_map(|a| k.iter().map(move |b| a * b)).collect();
    }
    PureState::new(dims.to_vec(), amps)?.normalize()
}

/// Tensor product of independent Haar-random local kets.
pub fn random_product_state(dims: &[usize], seed: u64) -> Result<PureState> {
    random_product_state_with(dims, &mut rng_from_seed(seed))
}

/// Random normalized state with i.i.d. complex normal amplitudes.
pub fn random_state<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Result<PureState> {
    let total: usize = dims.iter().product();
    let amps = (0..total).map(|_| complex_normal(rng)).collect();
    PureState::new(dims.to_vec(), amps)?.normalize()
}
