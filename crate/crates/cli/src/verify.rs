//! The per-case pipeline behind `verify` and `report`.

use log::{debug, info};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use ksection::exact::{nilpotency_index, rank, rat, ratio_string, Rat};
use ksection::matspace::{
    act, act_mpq, from_blocks, from_matrix_space, is_regular_mpq, random_group_element_with,
    to_matrix_space,
};
use ksection::nilpotent::{centralizer, closed_form_centralizer, is_relatively_regular, regular_nilpotent};
use ksection::pairs::{combine, make_pair, Family, SymmetricPair};
use ksection::sl2::{self, complete_triple, f_ambiguity, verify_triple};
use ksection::slice::{invariants, make_slice, InversionMethod, KostantSlice, SolverConfig};
use ksection::RatMatrix;

use crate::canonical::canonicalize;
use crate::error::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Height bound for random slice coordinates and random matrices.
pub const COORD_HEIGHT: i64 = 10;
/// Height bound for random group elements.
pub const GROUP_HEIGHT: u32 = 10;
/// Random group elements per case for the conjugation and equivariance checks.
pub const GROUP_TRIALS: usize = 20;
/// Random slice points per case for the Jacobian rank check.
pub const JACOBIAN_POINTS: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub family: Family,
    pub p: usize,
    pub q: usize,
    pub rank_theta: usize,
    pub e: RatMatrix,
    pub nilpotency_index: Option<usize>,
    pub centralizer_dim: usize,
    pub triple_f: Option<RatMatrix>,
    pub triple_h: Option<RatMatrix>,
    pub checks: Vec<Check>,
    pub roundtrip_trials: usize,
    pub roundtrip_passes: usize,
    /// Round trips that the Newton stage could not finish and the exact
    /// graded stage did.
    pub roundtrip_graded: usize,
    pub seed: u64,
    pub tool_version: String,
    /// Reasons for failed checks, empty on a passing certificate.
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn is_passing(&self) -> bool {
        self.checks.iter().all(|c| c.pass) && self.roundtrip_passes == self.roundtrip_trials
    }

    pub fn check(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.pass)
    }

    pub fn label(&self) -> String {
        format!("{}({},{})", self.family, self.p, self.q)
    }

    /// Pretty JSON with object keys sorted.
    pub fn to_json(&self) -> String {
        sorted_json(self)
    }
}

pub fn sorted_json<T: Serialize>(value: &T) -> String {
    // serde_json's default map is ordered, so a round trip through Value sorts keys.
    let v = serde_json::to_value(value).expect("certificate values serialize");
    serde_json::to_string_pretty(&v).expect("json values serialize")
}

/// Independent random stream per (seed, case, purpose).
pub(crate) fn case_rng(seed: u64, pair: &SymmetricPair, purpose: u64) -> ChaCha8Rng {
    let family = match pair.family() {
        Family::Gl => 0u64,
        Family::Orth => 1,
        Family::Sp => 2,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((family * 64 + pair.p() as u64) * 64 + pair.q() as u64) * 16 + purpose);
    rng
}

pub fn random_rat(rng: &mut impl Rng, height: i64) -> Rat {
    rat(rng.random_range(-height..=height), rng.random_range(1..=height))
}

pub fn random_coords(rng: &mut impl Rng, dim: usize) -> Vec<Rat> {
    (0..dim).map(|_| random_rat(rng, COORD_HEIGHT)).collect()
}

fn random_int_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> RatMatrix {
    RatMatrix::from_fn(rows, cols, |_, _| Rat::from_integer(rng.random_range(-COORD_HEIGHT..=COORD_HEIGHT).into()))
}

fn show(coords: &[Rat]) -> String {
    let parts: Vec<String> = coords.iter().map(ratio_string).collect();
    format!("[{}]", parts.join(", "))
}

fn span_rank(ms: &[RatMatrix]) -> usize {
    if ms.is_empty() {
        return 0;
    }
    let rows = ms[0].entries().len();
    rank(&RatMatrix::from_fn(rows, ms.len(), |i, j| ms[j].entries()[i].clone()))
}

struct Recorder {
    checks: Vec<Check>,
    notes: Vec<String>,
}

impl Recorder {
    fn record(&mut self, name: &str, pass: bool) {
        self.checks.push(Check {
            name: name.to_string(),
            pass,
        });
    }

    fn note(&mut self, name: &str, detail: impl Into<String>) {
        self.notes.push(format!("{name}: {}", detail.into()));
    }

    fn record_with(&mut self, name: &str, outcome: Result<(), String>) {
        if let Err(detail) = &outcome {
            self.note(name, detail.clone());
        }
        self.record(name, outcome.is_ok());
    }
}

fn all_trials(trials: usize, mut f: impl FnMut(usize) -> Result<bool, String>) -> Result<(), String> {
    for t in 0..trials {
        if !f(t)? {
            return Err(format!("trial {t} failed"));
        }
    }
    Ok(())
}

/// Runs every check for one case. Fails only on invalid parameters; failed
/// checks are recorded in the certificate instead.
pub fn cmd_verify(family: Family, p: usize, q: usize, seed: u64, trials: usize) -> Result<Certificate, CliError> {
    let pair = make_pair(family, p, q)?;
    info!("verifying {family}({p},{q}) seed {seed} trials {trials}");
    let mut rec = Recorder {
        checks: Vec::new(),
        notes: Vec::new(),
    };

    let e = regular_nilpotent(&pair);
    let nilp = nilpotency_index(&e).expect("square");
    let cent = centralizer(&pair, &e).expect("shape");
    rec.record("e_in_g_minus", pair.in_minus(&e));
    rec.record("e_nilpotent", nilp.is_some());
    rec.record("centralizer_dim_eq_rank", cent.len() == pair.rank_theta());
    let closed = closed_form_centralizer(&pair);
    let both: Vec<RatMatrix> = cent.iter().chain(&closed).cloned().collect();
    let r = span_rank(&cent);
    rec.record("closed_form_match", span_rank(&closed) == r && span_rank(&both) == r);
    debug!("{family}({p},{q}) construction checks done");

    let triple = complete_triple(&pair, &e);
    let slice = match &triple {
        Ok(t) => {
            let results = verify_triple(&pair, t);
            let pass = |names: &[&str]| names.iter().all(|n| results.iter().any(|(m, ok)| m == n && *ok));
            rec.record("triple_exists", true);
            rec.record(
                "triple_relations",
                pass(&[sl2::CHECK_NONZERO, sl2::CHECK_HE, sl2::CHECK_HF, sl2::CHECK_EF]),
            );
            rec.record("h_in_g_plus", pass(&[sl2::CHECK_H_PLUS]));
            rec.record("f_in_g_minus", pass(&[sl2::CHECK_F_MINUS]));
            rec.record("f_regular", centralizer(&pair, &t.f).map(|c| c.len() == pair.rank_theta()).unwrap_or(false));
            rec.record("f_unique", f_ambiguity(&pair, &e, &t.h).map(|d| d == 0).unwrap_or(false));
            match make_slice(&pair, t.clone()) {
                Ok(s) => Some(s),
                Err(err) => {
                    rec.note("slice", err.to_string());
                    None
                }
            }
        }
        Err(err) => {
            rec.note("triple_exists", err.to_string());
            for name in ["triple_exists", "triple_relations", "h_in_g_plus", "f_in_g_minus", "f_regular", "f_unique"] {
                rec.record(name, false);
            }
            None
        }
    };
    debug!("{family}({p},{q}) triple checks done");

    let mut roundtrip_passes = 0;
    let mut roundtrip_graded = 0;
    match &slice {
        Some(s) => {
            let mut rng = case_rng(seed, &pair, 1);
            for _ in 0..trials {
                let coords = random_coords(&mut rng, s.dim());
                let back = s
                    .point(&coords)
                    .and_then(|x| invariants(&pair, &x))
                    .and_then(|inv| s.invert_traced(&inv, &SolverConfig::default()));
                match back {
                    Ok((b, how)) if b == coords => {
                        roundtrip_passes += 1;
                        roundtrip_graded += usize::from(how == InversionMethod::Graded);
                    }
                    other => rec.note("roundtrip", format!("{} -> {}", show(&coords), match other {
                        Ok((b, _)) => show(&b),
                        Err(e) => e.to_string(),
                    })),
                }
            }
            if roundtrip_passes < trials {
                rec.note("roundtrip", format!("{roundtrip_passes}/{trials} recovered"));
            }
            rec.record("roundtrip", roundtrip_passes == trials);
            debug!("{family}({p},{q}) roundtrip done");
            rec.record_with("invariant_conjugation", conjugation_check(&pair, s, seed));
            debug!("{family}({p},{q}) conjugation done");
            rec.record_with("separation_jacobian_rank", jacobian_check(&pair, s, seed));
        }
        None => {
            rec.note("roundtrip", "no slice");
            for name in ["roundtrip", "invariant_conjugation", "separation_jacobian_rank"] {
                rec.record(name, false);
            }
        }
    }
    debug!("{family}({p},{q}) slice checks done");

    rec.record_with("equivariance", equivariance_check(&pair, seed));
    match family {
        Family::Gl => rec.record_with("gl_rank_invariance", gl_rank_check(&pair, seed)),
        Family::Orth | Family::Sp => rec.record_with("mpq_regular_match", mpq_regular_check(&pair, &e, seed)),
    }

    let (triple_f, triple_h) = match triple {
        Ok(t) => (Some(t.f), Some(t.h)),
        Err(_) => (None, None),
    };
    let cert = Certificate {
        family,
        p,
        q,
        rank_theta: pair.rank_theta(),
        e,
        nilpotency_index: nilp,
        centralizer_dim: cent.len(),
        triple_f,
        triple_h,
        checks: rec.checks,
        roundtrip_trials: trials,
        roundtrip_passes,
        roundtrip_graded,
        seed,
        tool_version: TOOL_VERSION.to_string(),
        notes: rec.notes,
    };
    info!("{} {}", cert.label(), if cert.is_passing() { "pass" } else { "FAIL" });
    Ok(cert)
}

fn conjugation_check(pair: &SymmetricPair, s: &KostantSlice<'_>, seed: u64) -> Result<(), String> {
    let mut rng = case_rng(seed, pair, 2);
    all_trials(GROUP_TRIALS, |_| {
        let coords = random_coords(&mut rng, s.dim());
        let g = random_group_element_with(pair, &mut rng, GROUP_HEIGHT).map_err(|e| e.to_string())?;
        let x = s.point(&coords).map_err(|e| e.to_string())?;
        let y = act(pair, &g, &x).map_err(|e| e.to_string())?;
        let same = invariants(pair, &y).map_err(|e| e.to_string())? == invariants(pair, &x).map_err(|e| e.to_string())?;
        let canon = canonicalize(pair, s, &y).map_err(|e| e.to_string())?;
        Ok(same && canon.coords == coords && canon.representative == x)
    })
}

fn jacobian_check(pair: &SymmetricPair, s: &KostantSlice<'_>, seed: u64) -> Result<(), String> {
    let mut rng = case_rng(seed, pair, 3);
    all_trials(JACOBIAN_POINTS, |_| {
        let coords = random_coords(&mut rng, s.dim());
        let r = s.jacobian_rank_at(&coords).map_err(|e| e.to_string())?;
        if r != pair.rank_theta() {
            return Err(format!("rank {r} at {coords:?}"));
        }
        Ok(true)
    })
}

fn random_minus(rng: &mut impl Rng, pair: &SymmetricPair) -> RatMatrix {
    let coeffs: Vec<Rat> = pair.basis_minus().iter().map(|_| random_rat(rng, COORD_HEIGHT)).collect();
    combine(pair.basis_minus(), &coeffs, pair.n())
}

fn equivariance_check(pair: &SymmetricPair, seed: u64) -> Result<(), String> {
    let mut rng = case_rng(seed, pair, 4);
    all_trials(GROUP_TRIALS, |_| {
        let g = random_group_element_with(pair, &mut rng, GROUP_HEIGHT).map_err(|e| e.to_string())?;
        let x = random_minus(&mut rng, pair);
        let a = to_matrix_space(pair, &x).map_err(|e| e.to_string())?;
        let lhs = to_matrix_space(pair, &act(pair, &g, &x).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let rhs = act_mpq(pair, &g, &a).map_err(|e| e.to_string())?;
        let back = match pair.family() {
            Family::Gl => from_blocks(pair, &a, &x.block(pair.p(), 0, pair.q(), pair.p())),
            _ => from_matrix_space(pair, &a),
        }
        .map_err(|e| e.to_string())?;
        Ok(lhs == rhs && back == x)
    })
}

fn gl_rank_check(pair: &SymmetricPair, seed: u64) -> Result<(), String> {
    let mut rng = case_rng(seed, pair, 5);
    all_trials(GROUP_TRIALS, |t| {
        let g = random_group_element_with(pair, &mut rng, GROUP_HEIGHT).map_err(|e| e.to_string())?;
        // low-rank draws: product of p x k and k x q integer matrices
        let k = t % (pair.q() + 1);
        let a = &random_int_matrix(&mut rng, pair.p(), k.max(1)) * &random_int_matrix(&mut rng, k.max(1), pair.q());
        let a = if k == 0 { RatMatrix::zeros(pair.p(), pair.q()) } else { a };
        Ok(act_mpq(pair, &g, &a).map_err(|e| e.to_string())?.rank() == a.rank())
    })
}

fn mpq_regular_check(pair: &SymmetricPair, e: &RatMatrix, seed: u64) -> Result<(), String> {
    let mut rng = case_rng(seed, pair, 6);
    let mut samples = vec![
        to_matrix_space(pair, e).map_err(|err| err.to_string())?,
        RatMatrix::zeros(pair.p(), pair.q()),
    ];
    for _ in 0..GROUP_TRIALS {
        samples.push(random_int_matrix(&mut rng, pair.p(), pair.q()));
    }
    for (i, a) in samples.iter().enumerate() {
        let lhs = is_regular_mpq(pair, a).map_err(|err| err.to_string())?;
        let x = from_matrix_space(pair, a).map_err(|err| err.to_string())?;
        let rhs = is_relatively_regular(pair, &x).map_err(|err| err.to_string())?;
        if lhs != rhs || (i == 0 && !lhs) {
            return Err(format!("sample {i}: M_pq {lhs}, g(-1) {rhs}"));
        }
    }
    Ok(())
}
