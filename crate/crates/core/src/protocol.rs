//! Two-party negotiation over an in-process channel.
//!
//! Alice (buyer) and Bob (seller) each load their prices into a quantum
//! state, exchange states, append their own prices and the comparison flag,
//! count flagged products, exchange the counts through commitments, and
//! trade when both counts reach the threshold. Every transmitted payload is
//! logged with its qubit/cbit cost.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuits::{build_flag_oracle_with, build_price_oracle, ComparatorKind, PriceScenario};
use crate::commitment::{commit, LinearCode};
use crate::counting::{count_prepared, error_bound, CountEstimate, CountingParams, StatePrep};
use crate::error::{arg, Error, Result};
use crate::rng::derive_seed;
use crate::scalar::Real;
use crate::statevec::{PriceOrder, Register, RegisterLayout, Segment, StateVector};

pub const TRANSCRIPT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// Buyer holding ceilings `A`.
    Alice,
    /// Seller holding floors `B`.
    Bob,
}

impl Role {
    pub fn other(self) -> Role {
        match self {
            Role::Alice => Role::Bob,
            Role::Bob => Role::Alice,
        }
    }

    /// Layout order of the state this party works on after Step 2: its own
    /// price register comes second.
    fn working_order(self) -> PriceOrder {
        match self {
            Role::Bob => PriceOrder::BuyerFirst,
            Role::Alice => PriceOrder::SellerFirst,
        }
    }

    fn own_register(self) -> Register {
        match self {
            Role::Alice => Register::PriceA,
            Role::Bob => Register::PriceB,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Behavior {
    #[default]
    Honest,
    /// Measures the received price state in Step 2, then commits to a
    /// guess and unveils whatever the honest party revealed.
    MeasureAndCheat,
    /// Counts honestly but unveils `claimed` (default: the count with its
    /// lowest bit flipped) instead of the committed value.
    FalseUnveil { claimed: Option<u64> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Party {
    role: Role,
    prices: Vec<u64>,
    behavior: Behavior,
    seed: u64,
}

impl Party {
    pub fn new(role: Role, prices: Vec<u64>, behavior: Behavior, seed: u64) -> Self {
        Self { role, prices, behavior, seed }
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn behavior(&self) -> Behavior {
        self.behavior
    }

    /// Step 1: `N^{-1/2} Σ |i⟩|price_i⟩` on `n + d` qubits.
    fn prepare_price_state<T: Real>(&self, n: usize, d: usize) -> Result<StateVector<T>> {
        let layout = sent_layout(n, d);
        let mut state = StateVector::<T>::uniform_over(n + d, 1..=self.prices.len())?;
        build_price_oracle::<T>(&self.prices, &layout, Register::PriceA)?.apply(&mut state)?;
        Ok(state)
    }

    /// Steps 2–3 on the received state: append own prices and the flag.
    fn extend_received<T: Real>(&self, received: StateVector<T>, layout: &RegisterLayout, kind: ComparatorKind) -> Result<StateVector<T>> {
        let mut state = received.extend_zeros(layout.system_qubits() - received.num_qubits())?;
        build_price_oracle::<T>(&self.prices, layout, self.role.own_register())?.apply(&mut state)?;
        build_flag_oracle_with::<T>(kind, layout)?.apply(&mut state)?;
        Ok(state)
    }
}

/// Layout of a Step 1 message: index register then the sender's prices.
fn sent_layout(n: usize, d: usize) -> RegisterLayout {
    RegisterLayout::packed(n, d, PriceOrder::BuyerFirst, 0, 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Payload {
    QuantumState,
    ClassicalBits,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChannelMessage {
    pub step: u8,
    pub from: Role,
    pub to: Role,
    pub label: String,
    pub payload: Payload,
    pub qubits: usize,
    pub cbits: usize,
    /// Commitment fingerprint, reported outside the headline cost.
    pub fingerprint: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<u64>,
}

/// Ideal channel: transfers ownership of states and logs every payload.
#[derive(Debug, Default)]
pub struct Channel {
    log: Vec<ChannelMessage>,
}

impl Channel {
    pub fn send_state<T: Real>(&mut self, step: u8, from: Role, label: &str, state: StateVector<T>, fingerprint: bool) -> StateVector<T> {
        self.log.push(ChannelMessage {
            step,
            from,
            to: from.other(),
            label: label.to_string(),
            payload: Payload::QuantumState,
            qubits: state.num_qubits(),
            cbits: 0,
            fingerprint,
            value: None,
        });
        state
    }

    pub fn send_bits(&mut self, step: u8, from: Role, label: &str, value: u64, bits: usize) -> u64 {
        self.log.push(ChannelMessage {
            step,
            from,
            to: from.other(),
            label: label.to_string(),
            payload: Payload::ClassicalBits,
            qubits: 0,
            cbits: bits,
            fingerprint: false,
            value: Some(value),
        });
        value
    }

    pub fn into_log(self) -> Vec<ChannelMessage> {
        self.log
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Costs {
    pub qubits: usize,
    pub cbits: usize,
    pub fingerprint_qubits: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ScenarioSummary {
    #[serde(rename = "N")]
    pub products: usize,
    pub n: usize,
    pub d: usize,
    pub epsilon: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StepInfo {
    pub step: u8,
    pub name: &'static str,
}

const STEPS: [StepInfo; 6] = [
    StepInfo { step: 1, name: "load prices and exchange states" },
    StepInfo { step: 2, name: "append own prices" },
    StepInfo { step: 3, name: "apply comparison flag oracle" },
    StepInfo { step: 4, name: "quantum counting" },
    StepInfo { step: 5, name: "commit, unveil and cross-check counts" },
    StepInfo { step: 6, name: "trade decision" },
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartyEstimates<T> {
    pub alice: Option<CountEstimate<T>>,
    pub bob: Option<CountEstimate<T>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CommitmentVerdicts {
    /// Bob's verification of Alice's unveil.
    pub bob_accepts_alice: bool,
    /// Alice's verification of Bob's unveil.
    pub alice_accepts_bob: bool,
}

/// One `(i, price_i)` pair obtained by measuring the other party's state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AttackOutcome {
    pub attacker: Role,
    pub index: u64,
    pub price: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdversaryReport {
    pub party: Role,
    pub behavior: Behavior,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub learned: Option<AttackOutcome>,
    /// The honest party's commitment check rejected the cheater's unveil.
    pub commitment_rejected: bool,
    /// `|t_A − t_B| > δ`.
    pub consistency_failed: bool,
    pub cheat_detected: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NegotiationTranscript<T> {
    pub schema_version: u32,
    pub scenario: ScenarioSummary,
    pub steps: Vec<StepInfo>,
    pub messages: Vec<ChannelMessage>,
    pub costs: Costs,
    pub estimates: PartyEstimates<T>,
    pub delta: T,
    pub consistency: bool,
    pub commitments: CommitmentVerdicts,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adversary: Option<AdversaryReport>,
    /// Alice's unveiled count.
    #[serde(rename = "t_A")]
    pub t_a: u64,
    /// Bob's unveiled count.
    #[serde(rename = "t_B")]
    pub t_b: u64,
    pub trade: bool,
    /// Wall-clock microseconds per step; excluded from JSON so output stays
    /// reproducible.
    #[serde(skip)]
    pub step_micros: Vec<(u8, u128)>,
}

impl<T: Real> NegotiationTranscript<T> {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("transcript serializes")
    }
}

/// Everything a run needs besides the scenario.
#[derive(Clone, Debug)]
pub struct NegotiationConfig {
    pub counting: CountingParams,
    pub code: LinearCode,
    pub master_seed: u64,
}

impl NegotiationConfig {
    /// Default counting parameters and the deterministic parity code with
    /// expansion `c = 2`.
    pub fn for_scenario(scenario: &PriceScenario, master_seed: u64) -> Result<Self> {
        Ok(Self {
            counting: CountingParams::default(),
            code: LinearCode::systematic_parity(scenario.n(), 2.0)?,
            master_seed,
        })
    }
}

/// Scripted cheater for [`run_with_adversary`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Adversary {
    pub party: Role,
    pub behavior: Behavior,
}

pub fn run_negotiation<T: Real>(scenario: &PriceScenario, config: &NegotiationConfig) -> Result<NegotiationTranscript<T>> {
    run(scenario, config, None)
}

pub fn run_with_adversary<T: Real>(scenario: &PriceScenario, adversary: Adversary, config: &NegotiationConfig) -> Result<NegotiationTranscript<T>> {
    run(scenario, config, Some(adversary))
}

/// Measures the other party's Step 1 state on the index and price registers.
pub fn measurement_attack<T: Real>(scenario: &PriceScenario, attacker: Role, seed: u64) -> Result<AttackOutcome> {
    let victim = match attacker {
        Role::Bob => Party::new(Role::Alice, scenario.buyer_prices().to_vec(), Behavior::Honest, 0),
        Role::Alice => Party::new(Role::Bob, scenario.seller_prices().to_vec(), Behavior::Honest, 0),
    };
    let state = victim.prepare_price_state::<T>(scenario.n(), scenario.d())?;
    measure_received(&state, attacker, scenario.n(), scenario.d(), seed)
}

fn measure_received<T: Real>(state: &StateVector<T>, attacker: Role, n: usize, d: usize, seed: u64) -> Result<AttackOutcome> {
    let layout = sent_layout(n, d);
    let (value, _) = state.measure(Segment::new(0, n + d), seed)?;
    let index = layout.index.extract(value as usize);
    let price = layout.price_a.extract(value as usize);
    Ok(AttackOutcome { attacker, index, price })
}

/// Sums message costs; fingerprint qubits are reported separately.
pub fn transcript_costs<T>(transcript: &NegotiationTranscript<T>) -> Result<Costs> {
    tally(&transcript.messages)
}

fn tally(messages: &[ChannelMessage]) -> Result<Costs> {
    let unveils = messages
        .iter()
        .filter(|m| m.step == 5 && m.payload == Payload::ClassicalBits)
        .count();
    if unveils < 2 {
        return Err(Error::State("transcript is missing the Step 5 unveils".into()));
    }
    let mut costs = Costs { qubits: 0, cbits: 0, fingerprint_qubits: 0 };
    for m in messages {
        if m.fingerprint {
            costs.fingerprint_qubits += m.qubits;
        } else {
            costs.qubits += m.qubits;
        }
        costs.cbits += m.cbits;
    }
    Ok(costs)
}

struct Timer {
    start: Instant,
    log: Vec<(u8, u128)>,
}

impl Timer {
    fn lap(&mut self, step: u8) {
        self.log.push((step, self.start.elapsed().as_micros()));
        self.start = Instant::now();
    }
}

fn run<T: Real>(scenario: &PriceScenario, config: &NegotiationConfig, adversary: Option<Adversary>) -> Result<NegotiationTranscript<T>> {
    let (n, d) = (scenario.n(), scenario.d());
    let count = scenario.len();
    if config.code.message_bits() != n {
        return arg(format!(
            "commitment code carries {} bits but counts need {n}",
            config.code.message_bits()
        ));
    }
    config.counting.validate()?;
    let behavior_of = |role: Role| match adversary {
        Some(a) if a.party == role => a.behavior,
        _ => Behavior::Honest,
    };
    for role in [Role::Alice, Role::Bob] {
        if let Behavior::FalseUnveil { claimed: Some(v) } = behavior_of(role) {
            if v >> n != 0 {
                return arg(format!("scripted unveil {v} does not fit in {n} bits"));
            }
        }
    }
    let seed = config.master_seed;
    let alice = Party::new(Role::Alice, scenario.buyer_prices().to_vec(), behavior_of(Role::Alice), derive_seed(seed, 1));
    let bob = Party::new(Role::Bob, scenario.seller_prices().to_vec(), behavior_of(Role::Bob), derive_seed(seed, 2));
    let kind = config.counting.comparator;

    let mut channel = Channel::default();
    let mut timer = Timer { start: Instant::now(), log: Vec::new() };

    // Step 1
    let phi_a = alice.prepare_price_state::<T>(n, d)?;
    let phi_b = bob.prepare_price_state::<T>(n, d)?;
    let at_bob = channel.send_state(1, Role::Alice, "phi'_A", phi_a, false);
    let at_alice = channel.send_state(1, Role::Bob, "phi'_B", phi_b, false);
    timer.lap(1);

    // Steps 2–3
    let mut learned = None;
    let mut held = Vec::new();
    for (party, received) in [(&bob, at_bob), (&alice, at_alice)] {
        if party.behavior == Behavior::MeasureAndCheat {
            learned = Some(measure_received(&received, party.role, n, d, derive_seed(party.seed, 10))?);
            held.push((party, None));
            continue;
        }
        let layout = scenario.layout(party.role.working_order(), kind, 0);
        let state = party.extend_received(received, &layout, kind)?;
        held.push((party, Some((state, layout))));
    }
    timer.lap(2);
    timer.lap(3);

    // Step 4
    let mut estimates = PartyEstimates { alice: None, bob: None };
    for (party, slot) in &held {
        let Some((state, layout)) = slot else { continue };
        let prep = StatePrep::<T>::for_scenario(scenario, layout, kind)?;
        let expected = prep.prepare()?;
        if expected.max_deviation(state) > T::circuit_tol() {
            return Err(Error::Construction(format!("{:?}'s held state does not match its preparation circuit", party.role)));
        }
        let params = CountingParams { rng_seed: derive_seed(party.seed, 20), ..config.counting.clone() };
        let estimate = count_prepared(&prep, layout.flag_qubit(), count, &params)?;
        match party.role {
            Role::Alice => estimates.alice = Some(estimate),
            Role::Bob => estimates.bob = Some(estimate),
        }
    }
    timer.lap(4);

    // Step 5: commit, then unveil (a cheater unveils second so it can copy)
    let own_estimate = |role: Role| match role {
        Role::Alice => estimates.alice.as_ref(),
        Role::Bob => estimates.bob.as_ref(),
    };
    let mut committed = [0u64; 2];
    for (k, party) in [&alice, &bob].into_iter().enumerate() {
        committed[k] = match (party.behavior, own_estimate(party.role)) {
            (_, Some(e)) => e.m_hat as u64,
            (_, None) => {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(party.seed, 30));
                rng.random_range(0..=count as u64)
            }
        };
    }
    let mut held_commitments = Vec::new();
    for (k, party) in [&alice, &bob].into_iter().enumerate() {
        let c = commit::<T>(committed[k], &config.code)?;
        let fp = c.fingerprint().clone();
        let label = if party.role == Role::Alice { "tau_A" } else { "tau_B" };
        channel.send_state(5, party.role, label, fp, true);
        held_commitments.push(c);
    }
    let first = match adversary {
        Some(a) if a.behavior != Behavior::Honest => a.party.other(),
        _ => Role::Alice,
    };
    let mut unveiled = [0u64; 2];
    for role in [first, first.other()] {
        let k = role as usize;
        let party = if role == Role::Alice { &alice } else { &bob };
        let other_revealed = unveiled[1 - k];
        let value = match party.behavior {
            Behavior::Honest => committed[k],
            Behavior::FalseUnveil { claimed } => claimed.unwrap_or(committed[k] ^ 1),
            Behavior::MeasureAndCheat => other_revealed,
        };
        let label = if role == Role::Alice { "t_A" } else { "t_B" };
        unveiled[k] = channel.send_bits(5, role, label, value, n);
    }
    let mut verdicts = [false; 2];
    for (k, c) in held_commitments.iter_mut().enumerate() {
        let verifier = if k == 0 { &bob } else { &alice };
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(verifier.seed, 40));
        verdicts[k] = c.verify(unveiled[k], &mut rng)?;
    }
    let (t_a, t_b) = (unveiled[0], unveiled[1]);
    let delta = [t_a, t_b]
        .iter()
        .map(|&t| error_bound::<T>(config.counting.precision, count, t as usize))
        .fold(T::zero(), T::max);
    let delta = [&estimates.alice, &estimates.bob]
        .iter()
        .filter_map(|e| e.as_ref().map(|e| e.delta))
        .fold(delta, T::max);
    let gap = T::of((t_a as f64 - t_b as f64).abs());
    let consistency = gap <= delta;
    timer.lap(5);

    // Step 6
    let commitments = CommitmentVerdicts { bob_accepts_alice: verdicts[0], alice_accepts_bob: verdicts[1] };
    let eps = scenario.epsilon() as u64;
    let trade = consistency && verdicts[0] && verdicts[1] && t_a >= eps && t_b >= eps;
    timer.lap(6);

    let adversary = adversary.map(|a| {
        let commitment_rejected = match a.party {
            Role::Alice => !commitments.bob_accepts_alice,
            Role::Bob => !commitments.alice_accepts_bob,
        };
        AdversaryReport {
            party: a.party,
            behavior: a.behavior,
            learned,
            commitment_rejected,
            consistency_failed: !consistency,
            cheat_detected: commitment_rejected || !consistency,
        }
    });

    let messages = channel.into_log();
    let costs = tally(&messages)?;
    Ok(NegotiationTranscript {
        schema_version: TRANSCRIPT_SCHEMA_VERSION,
        scenario: ScenarioSummary { products: count, n, d, epsilon: scenario.epsilon() },
        steps: STEPS.to_vec(),
        messages,
        costs,
        estimates,
        delta,
        consistency,
        commitments,
        adversary,
        t_a,
        t_b,
        trade,
        step_micros: timer.log,
    })
}
