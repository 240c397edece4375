//! Feedforward (nonrecursive) nonsystematic convolutional codes.
//!
//! Tap masks address a window of `k * (memory + 1)` input bits. Window bit
//! `t * k + i` holds input stream `i` delayed by `t` steps, so for `k = 1`
//! mask bit `t` is the coefficient of `D^t` in the generator polynomial.
//! Outputs are emitted step-major: codeword index `step * n + j`.

use crate::error::{check_len, Error, Result};

/// Largest supported window, keeps state tables small.
const MAX_WINDOW_BITS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvCodeSpec {
    k: usize,
    n: usize,
    memory: usize,
    taps: Vec<u32>,
    terminated: bool,
}

impl ConvCodeSpec {
    pub fn new(k: usize, n: usize, memory: usize, taps: Vec<u32>, terminated: bool) -> Result<Self> {
        if k == 0 || n == 0 {
            return Err(Error::param("k/n", "must be positive"));
        }
        let window = k * (memory + 1);
        if window > MAX_WINDOW_BITS {
            return Err(Error::param(
                "memory",
                format!("window of {window} bits exceeds {MAX_WINDOW_BITS}"),
            ));
        }
        if taps.len() != n {
            return Err(Error::param("taps", format!("need {n} masks, got {}", taps.len())));
        }
        for (j, &t) in taps.iter().enumerate() {
            if t == 0 || t >> window != 0 {
                return Err(Error::param(
                    "taps",
                    format!("mask {j} = {t:#b} is empty or wider than {window} bits"),
                ));
            }
            // A mask that only reads one current input bit reproduces that
            // input stream verbatim.
            if t.count_ones() == 1 && (t.trailing_zeros() as usize) < k {
                return Err(Error::param(
                    "taps",
                    format!("mask {j} copies input stream {} (systematic output)", t.trailing_zeros()),
                ));
            }
        }
        Ok(Self {
            k,
            n,
            memory,
            taps,
            terminated,
        })
    }

    /// Rate-1/n code from octal generators written with the current-input
    /// coefficient as the most significant of `memory + 1` bits, e.g. `13`
    /// with memory 3 is `1 + D^2 + D^3`.
    pub fn from_octal(memory: usize, generators: &[&str], terminated: bool) -> Result<Self> {
        let width = memory + 1;
        let taps = generators
            .iter()
            .map(|g| {
                let v = u32::from_str_radix(g, 8)
                    .map_err(|_| Error::param("taps", format!("`{g}` is not octal")))?;
                if v >> width != 0 {
                    return Err(Error::param(
                        "taps",
                        format!("generator {g} has more than {width} bits"),
                    ));
                }
                Ok((0..width).fold(0u32, |acc, b| acc | ((v >> (width - 1 - b)) & 1) << b))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(1, generators.len(), memory, taps, terminated)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn taps(&self) -> &[u32] {
        &self.taps
    }

    pub fn terminated(&self) -> bool {
        self.terminated
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn n_states(&self) -> usize {
        1 << (self.k * self.memory)
    }

    /// Trellis steps for `info_len` input bits, including the zero tail.
    pub fn steps(&self, info_len: usize) -> usize {
        info_len / self.k + if self.terminated { self.memory } else { 0 }
    }

    pub fn encoded_len(&self, info_len: usize) -> usize {
        self.steps(info_len) * self.n
    }

    fn check_info_len(&self, info_len: usize) -> Result<()> {
        if info_len % self.k != 0 {
            return Err(Error::param(
                "input length",
                format!("{info_len} is not a multiple of k = {}", self.k),
            ));
        }
        Ok(())
    }

    pub fn encode(&self, u: &[u8]) -> Result<Vec<u8>> {
        self.check_info_len(u.len())?;
        let state_mask = (1u32 << (self.k * self.memory)) - 1;
        let mut out = Vec::with_capacity(self.encoded_len(u.len()));
        let mut state = 0u32;
        for step in 0..self.steps(u.len()) {
            let symbol = if step * self.k < u.len() {
                (0..self.k).fold(0u32, |acc, i| acc | (u[step * self.k + i] as u32 & 1) << i)
            } else {
                0
            };
            let window = (state << self.k) | symbol;
            out.extend(self.taps.iter().map(|&t| ((window & t).count_ones() & 1) as u8));
            state = window & state_mask;
        }
        Ok(out)
    }

    /// Generator polynomials (bit `t` = coefficient of `D^t`), `k = 1` only.
    fn polynomials(&self) -> Result<&[u32]> {
        if self.k != 1 {
            return Err(Error::Unsupported(format!(
                "polynomial operations need k = 1, spec has k = {}",
                self.k
            )));
        }
        Ok(&self.taps)
    }

    /// True when the generators share a factor other than a power of D, so a
    /// finite-weight output can come from an infinite-weight input.
    pub fn is_catastrophic(&self) -> Result<bool> {
        let g = self
            .polynomials()?
            .iter()
            .fold(0u32, |acc, &p| poly_gcd(acc, p >> p.trailing_zeros()));
        Ok(g != 1)
    }
}

fn poly_degree(p: u32) -> i32 {
    31 - p.leading_zeros() as i32
}

fn poly_mod(mut a: u32, b: u32) -> u32 {
    let db = poly_degree(b);
    while a != 0 && poly_degree(a) >= db {
        a ^= b << (poly_degree(a) - db);
    }
    a
}

fn poly_gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        poly_gcd(b, poly_mod(a, b))
    }
}

pub fn conv_encode(spec: &ConvCodeSpec, u: &[u8]) -> Result<Vec<u8>> {
    spec.encode(u)
}

/// Syndrome former of a rate-1/n component at a fixed input length.
///
/// The information set is the first `info_len` symbols of a reference output
/// `r` whose generator has a nonzero constant term. The left inverse recovers
/// the input by power-series division of that output by `g_r`; the syndrome is
/// the residual `c + encode(left_inverse(c))` read off the remaining
/// positions. Writing a syndrome into those positions with zeros on the
/// information set gives a coset representative whose left inverse is zero.
#[derive(Clone, Debug)]
pub struct ComponentSyndromeFormer {
    spec: ConvCodeSpec,
    info_len: usize,
    reference: usize,
    parity_positions: Vec<usize>,
}

impl ComponentSyndromeFormer {
    pub fn new(spec: &ConvCodeSpec, info_len: usize) -> Result<Self> {
        let polys = spec.polynomials()?;
        spec.check_info_len(info_len)?;
        let reference = polys.iter().position(|&g| g & 1 == 1).ok_or_else(|| {
            Error::Unsupported("no generator has a nonzero constant term".into())
        })?;
        let len = spec.encoded_len(info_len);
        let parity_positions = (0..len)
            .filter(|&i| !(i % spec.n == reference && i / spec.n < info_len))
            .collect();
        Ok(Self {
            spec: spec.clone(),
            info_len,
            reference,
            parity_positions,
        })
    }

    pub fn spec(&self) -> &ConvCodeSpec {
        &self.spec
    }

    pub fn info_len(&self) -> usize {
        self.info_len
    }

    pub fn code_len(&self) -> usize {
        self.spec.encoded_len(self.info_len)
    }

    pub fn syndrome_len(&self) -> usize {
        self.parity_positions.len()
    }

    /// Input whose encoding agrees with `c` on the information set.
    pub fn left_inverse(&self, c: &[u8]) -> Result<Vec<u8>> {
        check_len(self.code_len(), c.len())?;
        let g = self.spec.taps[self.reference];
        let n = self.spec.n;
        let mut u = vec![0u8; self.info_len];
        for t in 0..self.info_len {
            let mut bit = c[t * n + self.reference];
            for d in 1..=self.spec.memory.min(t) {
                if g >> d & 1 == 1 {
                    bit ^= u[t - d];
                }
            }
            u[t] = bit;
        }
        Ok(u)
    }

    pub fn syndrome(&self, c: &[u8]) -> Result<Vec<u8>> {
        let u = self.left_inverse(c)?;
        let re = self.spec.encode(&u)?;
        Ok(self.parity_positions.iter().map(|&i| c[i] ^ re[i]).collect())
    }

    pub fn coset_representative(&self, z: &[u8]) -> Result<Vec<u8>> {
        check_len(self.syndrome_len(), z.len())?;
        let mut c = vec![0u8; self.code_len()];
        for (&pos, &bit) in self.parity_positions.iter().zip(z) {
            c[pos] = bit;
        }
        Ok(c)
    }
}
