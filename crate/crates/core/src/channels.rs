//! Stochastic channels acting on [`PauliFrame`]s: the depolarizing channel and
//! an intercept-resend eavesdropper, plus the closed-form sifted QBER of the
//! stacked pair.

use rand::Rng;

use crate::error::{check_probability, Result};
use crate::pauli::{Basis, Pauli, PauliFrame};

/// Depolarizing channel strength: X, Y, Z each with probability p/3.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DepolarizingParams {
    p: f64,
}

impl DepolarizingParams {
    pub fn new(p: f64) -> Result<Self> {
        Ok(Self {
            p: check_probability("p", p)?,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Probability `s` that Eve intercepts a given qubit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterceptResendParams {
    s: f64,
}

impl InterceptResendParams {
    pub fn new(s: f64) -> Result<Self> {
        Ok(Self {
            s: check_probability("s", s)?,
        })
    }

    pub fn s(&self) -> f64 {
        self.s
    }
}

pub fn apply_depolarizing<R: Rng + ?Sized>(
    frame: PauliFrame,
    params: DepolarizingParams,
    rng: &mut R,
) -> PauliFrame {
    // One uniform draw partitions [0,1) into I | X | Y | Z.
    let u: f64 = rng.random();
    if u >= params.p {
        return frame;
    }
    let third = params.p / 3.0;
    let e = if u < third {
        Pauli::X
    } else if u < 2.0 * third {
        Pauli::Y
    } else {
        Pauli::Z
    };
    frame.with_error(e)
}

pub fn apply_intercept_resend<R: Rng + ?Sized>(
    frame: PauliFrame,
    params: InterceptResendParams,
    rng: &mut R,
) -> PauliFrame {
    if !rng.random_bool(params.s) {
        return frame;
    }
    let eve_basis = Basis::random(rng);
    let outcome = frame.measure(eve_basis, rng);
    PauliFrame::new(eve_basis, outcome)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChannelStage {
    InterceptResend(InterceptResendParams),
    Depolarizing(DepolarizingParams),
}

impl ChannelStage {
    pub fn apply<R: Rng + ?Sized>(&self, frame: PauliFrame, rng: &mut R) -> PauliFrame {
        match *self {
            ChannelStage::InterceptResend(params) => apply_intercept_resend(frame, params, rng),
            ChannelStage::Depolarizing(params) => apply_depolarizing(frame, params, rng),
        }
    }
}

/// Ordered list of channel stages between Alice and Bob.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ChannelStack {
    stages: Vec<ChannelStage>,
}

impl ChannelStack {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn new(stages: Vec<ChannelStage>) -> Self {
        Self { stages }
    }

    /// Alice -> Eve -> fiber -> Bob.
    pub fn eve_then_channel(p: f64, s: f64) -> Result<Self> {
        Ok(Self::new(vec![
            ChannelStage::InterceptResend(InterceptResendParams::new(s)?),
            ChannelStage::Depolarizing(DepolarizingParams::new(p)?),
        ]))
    }

    /// Alice -> fiber -> Eve -> Bob.
    pub fn channel_then_eve(p: f64, s: f64) -> Result<Self> {
        Ok(Self::new(vec![
            ChannelStage::Depolarizing(DepolarizingParams::new(p)?),
            ChannelStage::InterceptResend(InterceptResendParams::new(s)?),
        ]))
    }

    pub fn stages(&self) -> &[ChannelStage] {
        &self.stages
    }

    pub fn transmit<R: Rng + ?Sized>(&self, frame: PauliFrame, rng: &mut R) -> PauliFrame {
        self.stages.iter().fold(frame, |f, stage| stage.apply(f, rng))
    }
}

/// Expected sifted QBER for intercept-resend at rate `s` stacked with a
/// depolarizing channel of strength `p`.
///
/// Eve contributes an independent flip with probability s/4 and the channel
/// one with probability 2p/3; an intercepted qubit resent in the wrong basis
/// is uniformly random at Bob regardless of the channel. Both stage orders
/// yield `a + b - 2ab`.
pub fn analytic_sifted_qber(depol: DepolarizingParams, attack: InterceptResendParams) -> f64 {
    let a = attack.s / 4.0;
    let b = 2.0 * depol.p / 3.0;
    a + b - 2.0 * a * b
}
