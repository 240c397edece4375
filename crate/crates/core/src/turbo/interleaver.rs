use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_len, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InterleaverKind {
    /// Uniformly drawn permutation.
    UniformRandom,
    /// Deterministic row-column block spread: indices are written row-wise
    /// into rows of `ceil(sqrt(len))` and read column-wise. Every output
    /// position is known in advance from the length alone.
    Structured,
}

impl fmt::Display for InterleaverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InterleaverKind::UniformRandom => "random",
            InterleaverKind::Structured => "structured",
        })
    }
}

impl FromStr for InterleaverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" | "uniform" | "uniform-random" => Ok(InterleaverKind::UniformRandom),
            "structured" | "block" => Ok(InterleaverKind::Structured),
            other => Err(Error::param(
                "interleaver",
                format!("`{other}` is not one of random, structured"),
            )),
        }
    }
}

/// Block permutation. `interleave(x)[i] = x[permutation[i]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interleaver {
    kind: InterleaverKind,
    permutation: Vec<u32>,
    seed: Option<u64>,
}

pub fn make_interleaver<R: Rng + ?Sized>(
    kind: InterleaverKind,
    length: usize,
    rng: &mut R,
) -> Result<Interleaver> {
    if length < 2 {
        return Err(Error::param("length", format!("interleaver length {length} < 2")));
    }
    let permutation = match kind {
        InterleaverKind::UniformRandom => {
            let mut p: Vec<u32> = (0..length as u32).collect();
            p.shuffle(rng);
            p
        }
        InterleaverKind::Structured => {
            let stride = (length as f64).sqrt().ceil() as usize;
            let mut p: Vec<u32> = (0..length as u32).collect();
            p.sort_by_key(|&i| (i as usize % stride, i as usize / stride));
            p
        }
    };
    Ok(Interleaver {
        kind,
        permutation,
        seed: None,
    })
}

impl Interleaver {
    /// Draws the permutation from a ChaCha8 stream seeded with `seed`.
    pub fn from_seed(kind: InterleaverKind, length: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut il = make_interleaver(kind, length, &mut rng)?;
        if kind == InterleaverKind::UniformRandom {
            il.seed = Some(seed);
        }
        Ok(il)
    }

    pub fn from_permutation(kind: InterleaverKind, permutation: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; permutation.len()];
        for &p in &permutation {
            let slot = seen
                .get_mut(p as usize)
                .ok_or_else(|| Error::param("permutation", format!("index {p} out of range")))?;
            if std::mem::replace(slot, true) {
                return Err(Error::param("permutation", format!("index {p} repeated")));
            }
        }
        Ok(Self {
            kind,
            permutation,
            seed: None,
        })
    }

    pub fn kind(&self) -> InterleaverKind {
        self.kind
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.permutation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.permutation.is_empty()
    }

    pub fn permutation(&self) -> &[u32] {
        &self.permutation
    }

    pub fn interleave<T: Copy>(&self, x: &[T]) -> Result<Vec<T>> {
        check_len(self.len(), x.len())?;
        Ok(self.permutation.iter().map(|&p| x[p as usize]).collect())
    }

    pub fn deinterleave<T: Copy + Default>(&self, y: &[T]) -> Result<Vec<T>> {
        check_len(self.len(), y.len())?;
        let mut x = vec![T::default(); y.len()];
        for (&p, &v) in self.permutation.iter().zip(y) {
            x[p as usize] = v;
        }
        Ok(x)
    }

    pub(crate) fn interleave_into(&self, x: &[f64], out: &mut [f64]) {
        for (o, &p) in out.iter_mut().zip(&self.permutation) {
            *o = x[p as usize];
        }
    }

    pub(crate) fn deinterleave_into(&self, y: &[f64], out: &mut [f64]) {
        for (&p, &v) in self.permutation.iter().zip(y) {
            out[p as usize] = v;
        }
    }
}
