//! Gate-toggle training.
//!
//! Each round identifies the set `E` of inputs on which the network disagrees
//! with the target and toggles `G_u` for every `u ∈ E`. `E` comes either from
//! direct inspection of amplitudes (ideal mode) or from estimating the readout
//! probability after the oracle and decoding it as a binary number (sampled mode).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::boolean::{anf_from_truth_table, Anf, BooleanFunction, InputWord};
use crate::error::{Result, TnnError};
use crate::network::{phi_inverse, Oracle, TnnConfig};
use crate::scalar::Real;
use crate::state_prep::{prepare, prepare_direct, Direction, Ranking};
use crate::statevector::StateVector;

/// Amplitudes below this magnitude count as absent from the superposition.
pub const ZERO_AMPLITUDE_TOL: f64 = 1e-12;

/// Largest arity for which sampled decoding fits in a 64-bit integer.
pub const MAX_DECODE_ARITY: usize = 6;

/// Input superposition fed to the network.
#[derive(Clone, Debug, PartialEq)]
pub enum Superposition {
    /// Equal amplitudes (Hadamard on every input qubit).
    Uniform,
    PsiDown,
    PsiUp,
    /// Caller-supplied amplitudes over the `2^n` input words.
    Custom(Vec<f64>),
}

impl Superposition {
    fn direction(&self) -> Option<Direction> {
        match self {
            Superposition::PsiDown => Some(Direction::Down),
            Superposition::PsiUp => Some(Direction::Up),
            _ => None,
        }
    }

    /// Amplitudes over the input words.
    pub fn amplitudes(&self, n: usize) -> Result<Vec<f64>> {
        match self {
            Superposition::Uniform => Ok(vec![(-(n as f64) / 2.0).exp2(); 1 << n]),
            Superposition::PsiDown => crate::state_prep::reference_amplitudes(n, Direction::Down),
            Superposition::PsiUp => crate::state_prep::reference_amplitudes(n, Direction::Up),
            Superposition::Custom(a) => {
                if a.len() != 1 << n {
                    return Err(TnnError::InvalidArgument(format!(
                        "{} amplitudes for arity {n}",
                        a.len()
                    )));
                }
                Ok(a.clone())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShotPolicy {
    /// `s = 1/(16 ε²)` with `ε = 2^(2^(n-1)) / (2^(2^n) - 1)`.
    Paper,
    /// `s = 1/(16 ε²)` with `ε = 1 / (2 (2^(2^n) - 1))`, half the smallest weight.
    Exact,
    Fixed(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Rounding {
    #[default]
    Nearest,
    Floor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum IdealBackend {
    /// Reads `E` off the truth table of the current network; no state vector.
    #[default]
    Sparse,
    /// Prepares the superposition, runs network and oracle, reads the final amplitudes.
    StateVector,
}

/// When the two-phase protocol moves from `PsiDown` to `PsiUp`.
///
/// `None` fields take the arity-dependent defaults: cutoff `⌊n/2⌋`, at most
/// `⌈(n+1)/2⌉` updates in the first phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct SwitchRule {
    pub weight_cutoff: Option<usize>,
    pub max_first_phase_updates: Option<usize>,
}

impl SwitchRule {
    fn cutoff(&self, n: usize) -> usize {
        self.weight_cutoff.unwrap_or(n / 2)
    }

    fn phase_limit(&self, n: usize) -> usize {
        self.max_first_phase_updates.unwrap_or((n + 2) / 2)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdealOptions {
    pub source: Superposition,
    pub backend: IdealBackend,
}

impl Default for IdealOptions {
    fn default() -> Self {
        Self {
            source: Superposition::Uniform,
            backend: IdealBackend::Sparse,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampledOptions {
    pub policy: ShotPolicy,
    pub seed: u64,
    pub source: Superposition,
    /// Switch from `PsiDown` to `PsiUp` mid-training; `None` keeps one superposition.
    pub two_phase: Option<SwitchRule>,
    /// Decode only the top `mask_depth` weights of the active superposition.
    pub mask_depth: Option<usize>,
    pub rounding: Rounding,
    /// An empty `E` is only accepted after a second estimate on the other
    /// superposition also decodes empty.
    pub confirm_empty: bool,
}

impl SampledOptions {
    pub fn new(seed: u64) -> Self {
        Self {
            policy: ShotPolicy::Exact,
            seed,
            source: Superposition::PsiDown,
            two_phase: Some(SwitchRule::default()),
            mask_depth: None,
            rounding: Rounding::Nearest,
            confirm_empty: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum QtMode {
    Ideal(IdealOptions),
    Sampled(SampledOptions),
}

impl QtMode {
    pub fn ideal() -> Self {
        QtMode::Ideal(IdealOptions::default())
    }

    pub fn sampled(seed: u64) -> Self {
        QtMode::Sampled(SampledOptions::new(seed))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainReport {
    pub updates: usize,
    /// `E^(0), E^(1), ...`; the last entry is empty iff training converged.
    pub error_sets: Vec<Vec<InputWord>>,
    pub final_config: TnnConfig,
    pub learned_anf: Anf,
    pub error_rate: f64,
    pub converged: bool,
    /// Readout samples spent on each entry of `error_sets` (0 in ideal mode).
    pub shots_per_update: Vec<u64>,
}

pub fn default_max_updates(n: usize) -> usize {
    4 * (n + 1)
}

fn check_config(f: &BooleanFunction, c: &TnnConfig) -> Result<()> {
    if f.arity() != c.arity() {
        return Err(TnnError::ArityMismatch {
            left: f.arity(),
            right: c.arity(),
        });
    }
    Ok(())
}

/// `{x | a_x ≠ 0 and the network output differs from f(x)}`, from the truth table alone.
pub fn qt_ideal<T: Real>(
    f: &BooleanFunction,
    c: &TnnConfig,
    amplitudes: &[T],
) -> Result<Vec<InputWord>> {
    check_config(f, c)?;
    let n = f.arity();
    if amplitudes.len() != 1 << n {
        return Err(TnnError::InvalidArgument(format!(
            "{} amplitudes for arity {n}",
            amplitudes.len()
        )));
    }
    let tol = T::from_f64_lossy(ZERO_AMPLITUDE_TOL);
    let mut wrong = c.computed_function().table().clone();
    wrong.xor_assign(f.table());
    Ok(wrong
        .iter_ones()
        .filter(|&x| amplitudes[x].abs() > tol)
        .map(|x| InputWord::new(x, n).expect("index fits arity"))
        .collect())
}

/// `E` read from the amplitudes of `O(f) · TNN |ψ>` on readout `|1>`.
///
/// `input` must be an `n + 1` qubit state with the readout in `|0>`.
pub fn qt_statevector<T: Real>(
    f: &BooleanFunction,
    c: &TnnConfig,
    input: &StateVector<T>,
) -> Result<Vec<InputWord>> {
    check_config(f, c)?;
    let n = f.arity();
    let mut s = input.clone();
    c.apply(&mut s)?;
    Oracle::new(f.clone()).apply(&mut s)?;
    let tol = T::from_f64_lossy(ZERO_AMPLITUDE_TOL);
    Ok((0..1usize << n)
        .filter(|&x| s.amplitude(x << 1 | 1).abs() > tol)
        .map(|x| InputWord::new(x, n).expect("index fits arity"))
        .collect())
}

/// `(2^(2^n) - 1)` as an integer; needs `n <= 6`.
fn ladder_denominator(n: usize) -> u128 {
    (1u128 << (1u32 << n)) - 1
}

fn ceil_div(a: u128, b: u128) -> u128 {
    a.div_ceil(b)
}

/// Readout samples per estimate. Saturates at `u64::MAX` for large `n`.
pub fn shot_count(n: usize, policy: ShotPolicy) -> u64 {
    let s = match policy {
        ShotPolicy::Fixed(s) => return s.max(1),
        _ if n == 0 => 1,
        _ if n > 6 => u128::MAX,
        ShotPolicy::Paper => {
            // ε = num / D with num = 2^(2^(n-1)): s = ceil(D² / (16 num²))
            let d = ladder_denominator(n);
            let num_sq = 1u128 << (1u32 << n);
            d.checked_mul(d)
                .map(|dd| ceil_div(dd, 16 * num_sq))
                .unwrap_or(u128::MAX)
        }
        ShotPolicy::Exact => {
            // ε = 1 / (2D): s = ceil(4 D² / 16) = ceil(D² / 4)
            let d = ladder_denominator(n);
            d.checked_mul(d)
                .map(|dd| ceil_div(dd, 4))
                .unwrap_or(u128::MAX)
        }
    };
    s.clamp(1, u64::MAX as u128) as u64
}

/// Recovers the subset whose weights sum to `p1 · (2^(2^n) - 1)`.
pub fn decode_subset(
    p1_estimate: f64,
    n: usize,
    direction: Direction,
    mask_depth: Option<usize>,
    rounding: Rounding,
) -> Result<Vec<InputWord>> {
    if n > MAX_DECODE_ARITY {
        return Err(TnnError::ArityTooLarge {
            n,
            max: MAX_DECODE_ARITY,
        });
    }
    if !(0.0..=1.0).contains(&p1_estimate) {
        return Err(TnnError::InvalidArgument(format!(
            "probability {p1_estimate} outside [0, 1]"
        )));
    }
    let ranking = Ranking::new(n)?;
    Ok(decode_with_ranking(
        p1_estimate,
        &ranking,
        direction,
        mask_depth,
        rounding,
    ))
}

fn decode_with_ranking(
    p1: f64,
    ranking: &Ranking,
    direction: Direction,
    mask_depth: Option<usize>,
    rounding: Rounding,
) -> Vec<InputWord> {
    let n = ranking.arity();
    let dim = 1usize << n;
    let d = ladder_denominator(n) as f64;
    let scaled = p1 * d;
    let m = match rounding {
        Rounding::Nearest => scaled.round(),
        Rounding::Floor => scaled.floor(),
    }
    .clamp(0.0, d) as u128;
    let keep_from = mask_depth.map_or(0, |depth| dim.saturating_sub(depth));
    (0..dim)
        .filter(|&x| {
            let r = ranking.rank(x);
            let bit = match direction {
                Direction::Down => dim - 1 - r,
                Direction::Up => r,
            };
            bit >= keep_from && m >> bit & 1 == 1
        })
        .map(|x| InputWord::new(x, n).expect("index fits arity"))
        .collect()
}

/// Estimates `E` from `shots` readout samples after network and oracle.
pub fn qt_sampled_with<R: rand::Rng + ?Sized>(
    f: &BooleanFunction,
    c: &TnnConfig,
    direction: Direction,
    shots: u64,
    mask_depth: Option<usize>,
    rounding: Rounding,
    rng: &mut R,
) -> Result<Vec<InputWord>> {
    check_config(f, c)?;
    let n = f.arity();
    if n > MAX_DECODE_ARITY {
        return Err(TnnError::ArityTooLarge {
            n,
            max: MAX_DECODE_ARITY,
        });
    }
    let mut s = prepare_direct::<f64>(n, direction)?;
    c.apply(&mut s)?;
    Oracle::new(f.clone()).apply(&mut s)?;
    let ones = s.sample_counts(n, shots.max(1), rng)?;
    let p1 = ones as f64 / shots.max(1) as f64;
    let ranking = Ranking::new(n)?;
    Ok(decode_with_ranking(
        p1, &ranking, direction, mask_depth, rounding,
    ))
}

/// One sampled estimate of `E` seeded from the mode.
pub fn qt_sampled(f: &BooleanFunction, c: &TnnConfig, mode: &QtMode) -> Result<Vec<InputWord>> {
    let QtMode::Sampled(opts) = mode else {
        return Err(TnnError::Unsupported(
            "qt_sampled needs a sampled mode".into(),
        ));
    };
    let direction = sampled_direction(&opts.source)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let shots = shot_count(f.arity(), opts.policy);
    qt_sampled_with(
        f,
        c,
        direction,
        shots,
        opts.mask_depth,
        opts.rounding,
        &mut rng,
    )
}

fn sampled_direction(source: &Superposition) -> Result<Direction> {
    source.direction().ok_or_else(|| {
        TnnError::Unsupported(format!(
            "{source:?} amplitudes are not uniquely decodable from a readout probability"
        ))
    })
}

fn prepared_input(n: usize, source: &Superposition) -> Result<StateVector<f64>> {
    match source {
        Superposition::Uniform => {
            let mut s = StateVector::zero(n + 1)?;
            for q in 0..n {
                s.apply_h(q)?;
            }
            Ok(s)
        }
        Superposition::PsiDown => Ok(prepare::<f64>(n, Direction::Down)?.1),
        Superposition::PsiUp => Ok(prepare::<f64>(n, Direction::Up)?.1),
        Superposition::Custom(a) => {
            let amps = source.amplitudes(n)?;
            debug_assert_eq!(amps.len(), a.len());
            let mut full = vec![0.0; amps.len() * 2];
            for (x, v) in amps.into_iter().enumerate() {
                full[x << 1] = v;
            }
            StateVector::from_amplitudes(n + 1, full)
        }
    }
}

// one per training run, so variant size is irrelevant
#[allow(clippy::large_enum_variant)]
enum Estimator {
    Sparse(Vec<f64>),
    Simulated(StateVector<f64>),
    Sampled {
        opts: SampledOptions,
        shots: u64,
        rng: ChaCha8Rng,
        phase: Direction,
        switched: bool,
    },
}

impl Estimator {
    fn new(n: usize, mode: &QtMode) -> Result<Self> {
        match mode {
            QtMode::Ideal(o) => match o.backend {
                IdealBackend::Sparse => Ok(Estimator::Sparse(o.source.amplitudes(n)?)),
                IdealBackend::StateVector => {
                    Ok(Estimator::Simulated(prepared_input(n, &o.source)?))
                }
            },
            QtMode::Sampled(o) => {
                let phase = sampled_direction(&o.source)?;
                if n > MAX_DECODE_ARITY {
                    return Err(TnnError::ArityTooLarge {
                        n,
                        max: MAX_DECODE_ARITY,
                    });
                }
                Ok(Estimator::Sampled {
                    opts: o.clone(),
                    shots: shot_count(n, o.policy),
                    rng: ChaCha8Rng::seed_from_u64(o.seed),
                    phase,
                    switched: false,
                })
            }
        }
    }

    /// Returns `E` and the samples spent.
    fn estimate(&mut self, f: &BooleanFunction, c: &TnnConfig) -> Result<(Vec<InputWord>, u64)> {
        match self {
            Estimator::Sparse(amps) => Ok((qt_ideal(f, c, amps)?, 0)),
            Estimator::Simulated(s) => Ok((qt_statevector(f, c, s)?, 0)),
            Estimator::Sampled {
                opts,
                shots,
                rng,
                phase,
                ..
            } => {
                let e = qt_sampled_with(f, c, *phase, *shots, opts.mask_depth, opts.rounding, rng)?;
                if !e.is_empty() || !opts.confirm_empty {
                    return Ok((e, *shots));
                }
                let e2 = qt_sampled_with(
                    f,
                    c,
                    phase.flipped(),
                    *shots,
                    opts.mask_depth,
                    opts.rounding,
                    rng,
                )?;
                Ok((e2, 2 * *shots))
            }
        }
    }

    fn after_update(&mut self, n: usize, e: &[InputWord], updates: usize) {
        if let Estimator::Sampled {
            opts,
            phase,
            switched,
            ..
        } = self
        {
            let Some(rule) = opts.two_phase else { return };
            if *switched || *phase != Direction::Down {
                return;
            }
            let cutoff = rule.cutoff(n);
            let low_weight_clear = e.iter().all(|x| x.weight() > cutoff);
            if low_weight_clear || updates >= rule.phase_limit(n) {
                *phase = Direction::Up;
                *switched = true;
            }
        }
    }
}

/// Runs the toggle loop from the all-identity network.
pub fn train(f: &BooleanFunction, mode: &QtMode, max_updates: usize) -> Result<TrainReport> {
    if max_updates == 0 {
        return Err(TnnError::InvalidArgument(
            "max_updates must be at least 1".into(),
        ));
    }
    let n = f.arity();
    let mut estimator = Estimator::new(n, mode)?;
    let mut config = TnnConfig::identity(n)?;
    let mut error_sets = Vec::new();
    let mut shots_per_update = Vec::new();
    let mut updates = 0usize;
    let mut converged = false;
    loop {
        let (e, shots) = estimator.estimate(f, &config)?;
        shots_per_update.push(shots);
        if e.is_empty() {
            error_sets.push(e);
            converged = true;
            break;
        }
        if updates >= max_updates {
            error_sets.push(e);
            break;
        }
        for &u in &e {
            config.toggle(u)?;
        }
        updates += 1;
        estimator.after_update(n, &e, updates);
        error_sets.push(e);
    }
    let mut wrong = config.computed_function().table().clone();
    wrong.xor_assign(f.table());
    let error_rate = wrong.count_ones() as f64 / (1usize << n) as f64;
    Ok(TrainReport {
        updates,
        error_sets,
        learned_anf: phi_inverse(&config),
        final_config: config,
        error_rate,
        converged,
        shots_per_update,
    })
}

/// The network that computes `f` exactly.
pub fn target_config(f: &BooleanFunction) -> TnnConfig {
    crate::network::phi(&anf_from_truth_table(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::parse_function;
    use crate::state_prep::subset_weight;

    fn words(v: &[InputWord]) -> Vec<String> {
        v.iter().map(|w| w.to_string()).collect()
    }

    fn example_f() -> BooleanFunction {
        parse_function("00101001", 3).unwrap()
    }

    #[test]
    fn qt_ideal_trace() {
        let f = example_f();
        let uniform = vec![(0.125f64).sqrt(); 8];
        let mut c = TnnConfig::identity(3).unwrap();
        let e0 = qt_ideal(&f, &c, &uniform).unwrap();
        assert_eq!(words(&e0), ["010", "100", "111"]);
        for &u in &e0 {
            c.toggle(u).unwrap();
        }
        let e1 = qt_ideal(&f, &c, &uniform).unwrap();
        assert_eq!(words(&e1), ["011", "101"]);
        assert!(qt_ideal(&f, &target_config(&f), &uniform)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn qt_ideal_skips_absent_inputs() {
        let f = example_f();
        let mut amps = vec![0.0f64; 8];
        amps[0b010] = 1.0;
        let e = qt_ideal(&f, &TnnConfig::identity(3).unwrap(), &amps).unwrap();
        assert_eq!(words(&e), ["010"]);
        amps[0b010] = 1e-13;
        amps[0b000] = 1.0;
        assert!(qt_ideal(&f, &TnnConfig::identity(3).unwrap(), &amps)
            .unwrap()
            .is_empty());
        assert!(qt_ideal(&f, &TnnConfig::identity(3).unwrap(), &amps[..4]).is_err());
    }

    #[test]
    fn statevector_backend_agrees_with_sparse() {
        let f = example_f();
        let mut s = StateVector::<f64>::zero(4).unwrap();
        for q in 0..3 {
            s.apply_h(q).unwrap();
        }
        let c: TnnConfig = "00101001".parse().unwrap();
        assert_eq!(
            qt_statevector(&f, &c, &s).unwrap(),
            qt_ideal(&f, &c, &[0.3f64; 8]).unwrap()
        );
    }

    #[test]
    fn shot_count_examples() {
        assert_eq!(shot_count(2, ShotPolicy::Paper), 1);
        assert_eq!(shot_count(3, ShotPolicy::Paper), 16);
        assert_eq!(shot_count(2, ShotPolicy::Exact), 57);
        assert_eq!(shot_count(3, ShotPolicy::Exact), 16_257);
        assert_eq!(shot_count(3, ShotPolicy::Fixed(123)), 123);
        assert_eq!(shot_count(3, ShotPolicy::Fixed(0)), 1);
        assert_eq!(shot_count(0, ShotPolicy::Exact), 1);
        assert_eq!(shot_count(9, ShotPolicy::Exact), u64::MAX);
    }

    #[test]
    fn decode_examples() {
        assert!(
            decode_subset(0.0, 3, Direction::Down, None, Rounding::Nearest)
                .unwrap()
                .is_empty()
        );
        let ranking = Ranking::new(3).unwrap();
        let m = subset_weight(&ranking, &[0b010, 0b100, 0b111], Direction::Down);
        assert_eq!(m, (1 << 5) + (1 << 4) + 1);
        let e = decode_subset(
            m as f64 / 255.0,
            3,
            Direction::Down,
            None,
            Rounding::Nearest,
        )
        .unwrap();
        assert_eq!(words(&e), ["010", "100", "111"]);
        assert!(decode_subset(1.5, 3, Direction::Down, None, Rounding::Nearest).is_err());
        assert!(decode_subset(0.5, 7, Direction::Down, None, Rounding::Nearest).is_err());
    }

    #[test]
    fn decode_rounding_modes() {
        // 48.9 / 255 rounds to 49 but floors to 48
        let p = 48.9 / 255.0;
        let near = decode_subset(p, 3, Direction::Down, None, Rounding::Nearest).unwrap();
        let floor = decode_subset(p, 3, Direction::Down, None, Rounding::Floor).unwrap();
        assert_eq!(words(&near), ["010", "100", "111"]);
        assert_eq!(words(&floor), ["010", "100"]);
    }

    #[test]
    fn decode_mask_keeps_top_weights() {
        let ranking = Ranking::new(2).unwrap();
        // every word wrong: p1 = 1
        let all = decode_subset(1.0, 2, Direction::Down, Some(3), Rounding::Nearest).unwrap();
        assert_eq!(words(&all), ["00", "01", "10"]);
        let up = decode_subset(1.0, 2, Direction::Up, Some(1), Rounding::Nearest).unwrap();
        assert_eq!(words(&up), ["11"]);
        let m = subset_weight(&ranking, &[0b01, 0b11], Direction::Down);
        let p = m as f64 / 15.0;
        let e = decode_subset(p, 2, Direction::Down, Some(3), Rounding::Nearest).unwrap();
        assert_eq!(words(&e), ["01"]);
    }

    #[test]
    fn sampled_perfect_network_reports_nothing() {
        for idx in 0..16u64 {
            let f = BooleanFunction::new(2, crate::bits::BitTable::from_word(idx, 4)).unwrap();
            let e = qt_sampled(&f, &target_config(&f), &QtMode::sampled(idx)).unwrap();
            assert!(e.is_empty());
        }
    }

    fn binomial_pmf(s: u64, p: f64, k: u64) -> f64 {
        let ln_choose = (1..=k)
            .map(|i| ((s - k + i) as f64 / i as f64).ln())
            .sum::<f64>();
        (ln_choose + k as f64 * p.ln() + (s - k) as f64 * (1.0 - p).ln()).exp()
    }

    #[test]
    fn sampled_first_round_matches_binomial_oracle() {
        // f = 1011: E^(0) = {00, 10, 11}, P1 = (8 + 2 + 1) / 15 under PsiDown
        let f = parse_function("1011", 2).unwrap();
        let id = TnnConfig::identity(2).unwrap();
        let support: Vec<InputWord> = f.support().collect();
        let shots = shot_count(2, ShotPolicy::Exact);
        let p1 = 11.0 / 15.0;
        let expected: f64 = (0..=shots)
            .filter(|&k| (k as f64 / shots as f64 * 15.0).round() as u64 == 11)
            .map(|k| binomial_pmf(shots, p1, k))
            .sum();
        let trials = 4000u64;
        let hits = (0..trials)
            .filter(|&seed| qt_sampled(&f, &id, &QtMode::sampled(seed)).unwrap() == support)
            .count() as f64;
        let sd = (expected * (1.0 - expected) / trials as f64).sqrt();
        assert!(
            (hits / trials as f64 - expected).abs() < 5.0 * sd,
            "{hits} vs {expected}"
        );
    }

    #[test]
    fn sampled_first_round_recovers_support_with_full_margin_shots() {
        // 1/ε² shots put the 95% interval inside half the smallest weight
        let f = parse_function("1011", 2).unwrap();
        let id = TnnConfig::identity(2).unwrap();
        let support: Vec<InputWord> = f.support().collect();
        for seed in [11u64, 12, 13] {
            let mut opts = SampledOptions::new(seed);
            opts.policy = ShotPolicy::Fixed(900);
            let e = qt_sampled(&f, &id, &QtMode::Sampled(opts)).unwrap();
            assert_eq!(e, support, "seed {seed}");
        }
    }

    #[test]
    fn sampled_rejects_uniform_source() {
        let f = parse_function("1011", 2).unwrap();
        let mut opts = SampledOptions::new(0);
        opts.source = Superposition::Uniform;
        let mode = QtMode::Sampled(opts);
        let id = TnnConfig::identity(2).unwrap();
        assert!(matches!(
            qt_sampled(&f, &id, &mode),
            Err(TnnError::Unsupported(_))
        ));
        assert!(matches!(train(&f, &mode, 4), Err(TnnError::Unsupported(_))));
        assert!(qt_sampled(&f, &id, &QtMode::ideal()).is_err());
    }

    #[test]
    fn sampled_paper_policy_with_mask_stays_low_weight() {
        let f = parse_function("0111", 2).unwrap();
        let id = TnnConfig::identity(2).unwrap();
        for seed in 0..20u64 {
            let mut opts = SampledOptions::new(seed);
            opts.policy = ShotPolicy::Paper;
            opts.mask_depth = Some(3);
            let e = qt_sampled(&f, &id, &QtMode::Sampled(opts)).unwrap();
            assert!(e.iter().all(|x| x.weight() <= 1), "{e:?}");
        }
    }

    #[test]
    fn train_worked_example() {
        let f = example_f();
        let r = train(&f, &QtMode::ideal(), default_max_updates(3)).unwrap();
        assert!(r.converged);
        assert_eq!(r.updates, 2);
        let sets: Vec<Vec<String>> = r.error_sets.iter().map(|e| words(e)).collect();
        assert_eq!(
            sets,
            vec![
                vec!["010".to_string(), "100".into(), "111".into()],
                vec!["011".into(), "101".into()],
                vec![]
            ]
        );
        assert_eq!(r.learned_anf.to_string(), "x0^x1^x0.x2^x1.x2^x0.x1.x2");
        assert_eq!(r.error_rate, 0.0);
        assert_eq!(r.shots_per_update, vec![0, 0, 0]);
    }

    #[test]
    fn train_zero_function_needs_no_update() {
        let f = BooleanFunction::constant(3, false).unwrap();
        for mode in [QtMode::ideal(), QtMode::sampled(5)] {
            let r = train(&f, &mode, 8).unwrap();
            assert!(r.converged);
            assert_eq!(r.updates, 0);
            assert_eq!(r.error_sets, vec![Vec::<InputWord>::new()]);
        }
    }

    #[test]
    fn train_respects_update_cap() {
        // a single update cannot fix this function
        let f = example_f();
        let r = train(&f, &QtMode::ideal(), 1).unwrap();
        assert!(!r.converged);
        assert_eq!(r.updates, 1);
        assert_eq!(r.error_sets.len(), 2);
        assert!(!r.error_sets[1].is_empty());
        assert!(r.error_rate > 0.0);
        assert!(train(&f, &QtMode::ideal(), 0).is_err());
    }

    #[test]
    fn train_statevector_backend_with_prepared_states() {
        let f = example_f();
        for source in [
            Superposition::Uniform,
            Superposition::PsiDown,
            Superposition::PsiUp,
        ] {
            let mode = QtMode::Ideal(IdealOptions {
                source,
                backend: IdealBackend::StateVector,
            });
            let r = train(&f, &mode, 8).unwrap();
            assert!(r.converged);
            assert_eq!(r.final_config, target_config(&f));
        }
    }

    #[test]
    fn switch_rule_defaults() {
        let r = SwitchRule::default();
        assert_eq!(r.cutoff(2), 1);
        assert_eq!(r.phase_limit(2), 2);
        assert_eq!(r.cutoff(3), 1);
        assert_eq!(r.phase_limit(3), 2);
        assert_eq!(r.phase_limit(4), 3);
    }
}
