//! BB84 preparation, transmission, measurement, sifting and parameter
//! estimation.

use rand::seq::index::sample;
use rand::Rng;

use crate::channels::ChannelStack;
use crate::error::{Error, Result};
use crate::pauli::{Basis, PauliFrame};

/// Alice's and Bob's bits at matched-basis positions.
///
/// `ground_truth_error` is `alice_bits XOR bob_bits`; it is kept for scoring
/// only and never consulted by the protocol itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiftedKeyPair {
    alice_bits: Vec<u8>,
    bob_bits: Vec<u8>,
    ground_truth_error: Vec<u8>,
    kept_indices: Vec<usize>,
}

impl SiftedKeyPair {
    pub fn new(alice_bits: Vec<u8>, bob_bits: Vec<u8>, kept_indices: Vec<usize>) -> Result<Self> {
        crate::error::check_len(alice_bits.len(), bob_bits.len())?;
        crate::error::check_len(alice_bits.len(), kept_indices.len())?;
        let ground_truth_error = crate::gf2::xor(&alice_bits, &bob_bits);
        Ok(Self {
            alice_bits,
            bob_bits,
            ground_truth_error,
            kept_indices,
        })
    }

    /// Pair without transmission indices, e.g. for synthetic keys.
    pub fn from_bits(alice_bits: Vec<u8>, bob_bits: Vec<u8>) -> Result<Self> {
        let idx = (0..alice_bits.len()).collect();
        Self::new(alice_bits, bob_bits, idx)
    }

    pub fn alice_bits(&self) -> &[u8] {
        &self.alice_bits
    }

    pub fn bob_bits(&self) -> &[u8] {
        &self.bob_bits
    }

    pub fn ground_truth_error(&self) -> &[u8] {
        &self.ground_truth_error
    }

    pub fn kept_indices(&self) -> &[usize] {
        &self.kept_indices
    }

    pub fn len(&self) -> usize {
        self.alice_bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alice_bits.is_empty()
    }

    /// Fraction of mismatched positions; 0 for an empty pair.
    pub fn qber(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        crate::gf2::weight(&self.ground_truth_error) as f64 / self.len() as f64
    }

    fn retain(&self, keep: &[bool]) -> SiftedKeyPair {
        let pick = |v: &[u8]| -> Vec<u8> {
            v.iter().zip(keep).filter(|(_, &k)| k).map(|(&b, _)| b).collect()
        };
        SiftedKeyPair {
            alice_bits: pick(&self.alice_bits),
            bob_bits: pick(&self.bob_bits),
            ground_truth_error: pick(&self.ground_truth_error),
            kept_indices: self
                .kept_indices
                .iter()
                .zip(keep)
                .filter(|(_, &k)| k)
                .map(|(&i, _)| i)
                .collect(),
        }
    }
}

/// Runs prepare / transmit / measure / sift over `n_qubits` qubits.
pub fn run_exchange<R: Rng + ?Sized>(
    n_qubits: usize,
    stack: &ChannelStack,
    rng: &mut R,
) -> Result<SiftedKeyPair> {
    if n_qubits == 0 {
        return Err(Error::param("n_qubits", "must be at least 1"));
    }
    let mut alice = Vec::with_capacity(n_qubits / 2 + 16);
    let mut bob = Vec::with_capacity(n_qubits / 2 + 16);
    let mut kept = Vec::with_capacity(n_qubits / 2 + 16);
    for i in 0..n_qubits {
        let bit = rng.random_bool(0.5) as u8;
        let alice_basis = Basis::random(rng);
        let received = stack.transmit(PauliFrame::new(alice_basis, bit), rng);
        let bob_basis = Basis::random(rng);
        let outcome = received.measure(bob_basis, rng);
        // Basis announcement is public and authentic.
        if bob_basis == alice_basis {
            alice.push(bit);
            bob.push(outcome);
            kept.push(i);
        }
    }
    SiftedKeyPair::new(alice, bob, kept)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimationResult {
    pub disclosed_count: usize,
    pub qber_estimate: f64,
    pub remaining_pair: SiftedKeyPair,
}

pub const DEFAULT_DISCLOSE_FRACTION: f64 = 0.1;

/// Discloses a uniform random subset of `round(fraction * len)` positions,
/// estimates the QBER on it and drops those positions from the pair.
pub fn estimate_parameters<R: Rng + ?Sized>(
    pair: &SiftedKeyPair,
    disclose_fraction: f64,
    rng: &mut R,
) -> Result<EstimationResult> {
    if !(disclose_fraction > 0.0 && disclose_fraction < 1.0) {
        return Err(Error::param(
            "disclose_fraction",
            format!("{disclose_fraction} is not in (0, 1)"),
        ));
    }
    let count = (disclose_fraction * pair.len() as f64).round() as usize;
    if count == 0 {
        return Err(Error::param(
            "disclose_fraction",
            format!("disclosed sample would be empty for a key of {} bits", pair.len()),
        ));
    }
    let chosen = sample(rng, pair.len(), count);
    let mut keep = vec![true; pair.len()];
    let mut mismatches = 0usize;
    for i in chosen.iter() {
        keep[i] = false;
        mismatches += pair.ground_truth_error[i] as usize;
    }
    Ok(EstimationResult {
        disclosed_count: count,
        qber_estimate: mismatches as f64 / count as f64,
        remaining_pair: pair.retain(&keep),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn noiseless_exchange_is_perfectly_correlated() {
        let pair = run_exchange(100_000, &ChannelStack::identity(), &mut rng(1)).unwrap();
        assert_eq!(pair.alice_bits(), pair.bob_bits());
        let kept = pair.len() as f64 / 100_000.0;
        assert!((kept - 0.5).abs() < 0.01, "kept fraction {kept}");
    }

    #[test]
    fn full_interception_gives_quarter_qber() {
        let stack = ChannelStack::eve_then_channel(0.0, 1.0).unwrap();
        let pair = run_exchange(100_000, &stack, &mut rng(2)).unwrap();
        assert!((pair.qber() - 0.25).abs() < 0.01, "{}", pair.qber());
    }

    #[test]
    fn half_interception_gives_eighth_qber() {
        let stack = ChannelStack::eve_then_channel(0.0, 0.5).unwrap();
        let pair = run_exchange(210_000, &stack, &mut rng(20)).unwrap();
        assert!((pair.qber() - 0.125).abs() < 0.01, "{}", pair.qber());
    }

    #[test]
    fn depolarizing_gives_two_thirds_p() {
        let stack = ChannelStack::eve_then_channel(0.06, 0.0).unwrap();
        let pair = run_exchange(100_000, &stack, &mut rng(3)).unwrap();
        assert!((pair.qber() - 0.04).abs() < 0.005, "{}", pair.qber());
    }

    #[test]
    fn ground_truth_is_xor_and_indices_increase() {
        let stack = ChannelStack::eve_then_channel(0.1, 0.3).unwrap();
        let pair = run_exchange(5_000, &stack, &mut rng(4)).unwrap();
        for i in 0..pair.len() {
            assert_eq!(pair.ground_truth_error()[i], pair.alice_bits()[i] ^ pair.bob_bits()[i]);
        }
        assert!(pair.kept_indices().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_zero_qubits() {
        assert!(run_exchange(0, &ChannelStack::identity(), &mut rng(0)).is_err());
    }

    #[test]
    fn basis_choice_is_unbiased() {
        let mut r = rng(9);
        let n = 100_000;
        let diag = (0..n).filter(|_| Basis::random(&mut r) == Basis::Diagonal).count();
        // 4 standard deviations of Binomial(n, 1/2)
        assert!((diag as f64 - n as f64 / 2.0).abs() < 4.0 * (n as f64 / 4.0).sqrt());
    }

    #[test]
    fn estimate_on_error_free_pair_is_zero() {
        let bits: Vec<u8> = (0..1000).map(|i| (i % 3 == 0) as u8).collect();
        let pair = SiftedKeyPair::from_bits(bits.clone(), bits).unwrap();
        let est = estimate_parameters(&pair, 0.3, &mut rng(5)).unwrap();
        assert_eq!(est.qber_estimate, 0.0);
        assert_eq!(est.disclosed_count, 300);
        assert_eq!(est.remaining_pair.len(), 700);
    }

    #[test]
    fn estimate_tracks_planted_rate() {
        let n = 10_000;
        let alice: Vec<u8> = (0..n).map(|i| (i % 2) as u8).collect();
        let bob: Vec<u8> = alice
            .iter()
            .enumerate()
            .map(|(i, &b)| if i % 10 == 0 { b ^ 1 } else { b })
            .collect();
        let pair = SiftedKeyPair::from_bits(alice, bob).unwrap();
        let est = estimate_parameters(&pair, 0.5, &mut rng(6)).unwrap();
        assert!((est.qber_estimate - 0.10).abs() < 0.015);
        assert_eq!(est.remaining_pair.len(), n - est.disclosed_count);
        let rem = &est.remaining_pair;
        for i in 0..rem.len() {
            assert_eq!(rem.ground_truth_error()[i], rem.alice_bits()[i] ^ rem.bob_bits()[i]);
        }
    }

    #[test]
    fn estimate_rejects_bad_fractions() {
        let pair = SiftedKeyPair::from_bits(vec![0; 10], vec![0; 10]).unwrap();
        assert!(estimate_parameters(&pair, 0.0, &mut rng(0)).is_err());
        assert!(estimate_parameters(&pair, 1.0, &mut rng(0)).is_err());
        assert!(estimate_parameters(&pair, 0.01, &mut rng(0)).is_err());
    }
}
