//! Acceptance suite. Runs every criterion over the full case range and prints
//! one line per criterion; exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ksection::exact::{charpoly, nilpotency_index, rank, rat, Rat};
use ksection::matspace::{act, act_mpq, from_blocks, from_matrix_space, random_group_element_with, to_matrix_space};
use ksection::nilpotent::{centralizer, closed_form_centralizer, regular_nilpotent};
use ksection::pairs::{combine, make_pair, Family, SymmetricPair};
use ksection::sl2::{complete_triple, verify_triple};
use ksection::slice::{invariants, make_slice, KostantSlice};
use ksection::RatMatrix;
use ksection_cli::{canonicalize, cmd_report, Ranges};

const ROUNDTRIP_TRIALS: usize = 50;
const COORD_HEIGHT: i64 = 10;
const CONJUGATION_TRIALS: usize = 20;
const EQUIVARIANCE_TRIALS: usize = 20;
const JACOBIAN_POINTS: usize = 10;
const GROUP_HEIGHT: u32 = 10;
const CONSTRUCTION_BUDGET: Duration = Duration::from_secs(120);
const ROUNDTRIP_BUDGET: Duration = Duration::from_secs(600);
const SEED: u64 = 20_240_601;

/// GL `1 <= q <= p <= 8`; ORTH `|p - q| <= 1`, `p + q <= 16`; SP even `2 <= q <= p <= 8`.
fn cases() -> Vec<(Family, usize, usize)> {
    let mut out = Vec::new();
    for p in 1..=8 {
        for q in 1..=p {
            out.push((Family::Gl, p, q));
        }
    }
    for p in 1..=16usize {
        for q in p.saturating_sub(1).max(1)..=p {
            if p + q <= 16 {
                out.push((Family::Orth, p, q));
            }
        }
    }
    for p in (2..=8).step_by(2) {
        for q in (2..=p).step_by(2) {
            out.push((Family::Sp, p, q));
        }
    }
    out
}

/// Centralizer dimensions as tabulated for the explicit nilpotents.
fn expected_rank(family: Family, p: usize, q: usize) -> usize {
    match family {
        Family::Gl => q,
        Family::Sp => q / 2,
        // p = q + 1: q; p = q = 2k: 2k; p = q = 2k + 1: 2k + 1
        Family::Orth => {
            let _ = p;
            q
        }
    }
}

fn label(f: Family, p: usize, q: usize) -> String {
    format!("{f}({p},{q})")
}

fn rng_for(purpose: u64, f: Family, p: usize, q: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ purpose.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    rng.set_stream((f as u64) << 16 | (p as u64) << 8 | q as u64);
    rng
}

fn random_coords(rng: &mut impl Rng, dim: usize) -> Vec<Rat> {
    (0..dim)
        .map(|_| rat(rng.random_range(-COORD_HEIGHT..=COORD_HEIGHT), rng.random_range(1..=COORD_HEIGHT)))
        .collect()
}

fn random_int_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> RatMatrix {
    RatMatrix::from_fn(rows, cols, |_, _| Rat::from_integer(rng.random_range(-COORD_HEIGHT..=COORD_HEIGHT).into()))
}

fn span_rank(ms: &[RatMatrix]) -> usize {
    if ms.is_empty() {
        return 0;
    }
    let rows = ms[0].entries().len();
    rank(&RatMatrix::from_fn(rows, ms.len(), |i, j| ms[j].entries()[i].clone()))
}

fn br(x: &RatMatrix, y: &RatMatrix) -> RatMatrix {
    &(x * y) - &(y * x)
}

type Case = (Family, usize, usize);
type Criterion = fn(&[Case]) -> Outcome;

struct Outcome {
    number: usize,
    title: &'static str,
    passed: usize,
    total: usize,
    failures: Vec<String>,
    elapsed: Duration,
    budget: Option<Duration>,
}

impl Outcome {
    fn ok(&self) -> bool {
        self.failures.is_empty() && self.passed == self.total && self.budget.is_none_or(|b| self.elapsed <= b)
    }

    fn line(&self) -> String {
        let mut s = format!(
            "[{}] criterion {}: {} ({}/{} cases, {:.1}s",
            if self.ok() { "PASS" } else { "FAIL" },
            self.number,
            self.title,
            self.passed,
            self.total,
            self.elapsed.as_secs_f64()
        );
        if let Some(b) = self.budget {
            s.push_str(&format!(", budget {}s", b.as_secs()));
        }
        s.push(')');
        if !self.failures.is_empty() {
            s.push_str(" failing: ");
            s.push_str(&self.failures.join("; "));
        }
        s
    }
}

/// Runs `check` on every case and collects failures.
fn per_case(
    number: usize,
    title: &'static str,
    budget: Option<Duration>,
    cases: &[(Family, usize, usize)],
    mut check: impl FnMut(Family, usize, usize) -> Result<(), String>,
) -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    for &(f, p, q) in cases {
        if let Err(why) = check(f, p, q) {
            failures.push(format!("{} ({why})", label(f, p, q)));
        }
    }
    Outcome {
        number,
        title,
        passed: cases.len() - failures.len(),
        total: cases.len(),
        failures,
        elapsed: start.elapsed(),
        budget,
    }
}

fn pair(f: Family, p: usize, q: usize) -> SymmetricPair {
    make_pair(f, p, q).expect("case parameters are valid")
}

fn slice_of(pair: &SymmetricPair) -> Result<KostantSlice<'_>, String> {
    let t = complete_triple(pair, &regular_nilpotent(pair)).map_err(|e| e.to_string())?;
    make_slice(pair, t).map_err(|e| e.to_string())
}

fn criterion_1(cases: &[(Family, usize, usize)]) -> Outcome {
    per_case(1, "construction suite", Some(CONSTRUCTION_BUDGET), cases, |f, p, q| {
        let pair = pair(f, p, q);
        let e = regular_nilpotent(&pair);
        if !pair.in_minus(&e) {
            return Err("e not in g(-1)".into());
        }
        // nilpotent: e^n = 0 by direct powering
        if !e.pow((p + q) as u32).unwrap().is_zero() {
            return Err("e^n != 0".into());
        }
        if nilpotency_index(&e).unwrap().is_none() {
            return Err("charpoly route disagrees on nilpotency".into());
        }
        let dim = centralizer(&pair, &e).unwrap().len();
        let want = expected_rank(f, p, q);
        if dim != want {
            return Err(format!("centralizer dim {dim}, expected {want}"));
        }
        Ok(())
    })
}

fn criterion_2(cases: &[(Family, usize, usize)]) -> Outcome {
    per_case(2, "oracle equivalence", None, cases, |f, p, q| {
        let pair = pair(f, p, q);
        let computed = centralizer(&pair, &regular_nilpotent(&pair)).unwrap();
        let closed = closed_form_centralizer(&pair);
        let both: Vec<RatMatrix> = computed.iter().chain(&closed).cloned().collect();
        let (a, b, c) = (span_rank(&computed), span_rank(&closed), span_rank(&both));
        if a == b && b == c {
            Ok(())
        } else {
            Err(format!("ranks computed {a}, closed form {b}, union {c}"))
        }
    })
}

fn criterion_3(cases: &[(Family, usize, usize)]) -> Outcome {
    per_case(3, "sl2 suite", None, cases, |f, p, q| {
        let pair = pair(f, p, q);
        let e = regular_nilpotent(&pair);
        let t = complete_triple(&pair, &e).map_err(|err| err.to_string())?;
        if let Some((name, _)) = verify_triple(&pair, &t).into_iter().find(|(_, ok)| !ok) {
            return Err(format!("check {name} false"));
        }
        let two = rat(2, 1);
        let nonzero = !(t.e.is_zero() || t.f.is_zero() || t.h.is_zero());
        let rel = br(&t.h, &t.e) == t.e.scale(&two) && br(&t.h, &t.f) == t.f.scale(&-two.clone()) && br(&t.e, &t.f) == t.h;
        let grading = pair.in_plus(&t.h) && pair.in_minus(&t.f);
        let f_dim = centralizer(&pair, &t.f).unwrap().len();
        if !(nonzero && rel && grading) {
            return Err("direct bracket evaluation disagrees".into());
        }
        if f_dim != expected_rank(f, p, q) {
            return Err(format!("f centralizer dim {f_dim}"));
        }
        Ok(())
    })
}

fn criterion_4(cases: &[(Family, usize, usize)]) -> Outcome {
    per_case(4, "slice round-trip", Some(ROUNDTRIP_BUDGET), cases, |f, p, q| {
        let pair = pair(f, p, q);
        let s = slice_of(&pair)?;
        let mut rng = rng_for(4, f, p, q);
        for trial in 0..ROUNDTRIP_TRIALS {
            let coords = random_coords(&mut rng, s.dim());
            let inv = invariants(&pair, &s.point(&coords).unwrap()).unwrap();
            match s.invert(&inv) {
                Ok(back) if back == coords => {}
                Ok(back) => return Err(format!("trial {trial}: {coords:?} came back as {back:?}")),
                Err(e) => return Err(format!("trial {trial}: {coords:?}: {e}")),
            }
        }
        Ok(())
    })
}

fn criterion_5(cases: &[(Family, usize, usize)]) -> Outcome {
    per_case(5, "canonicalization under conjugation", None, cases, |f, p, q| {
        let pair = pair(f, p, q);
        let s = slice_of(&pair)?;
        let mut rng = rng_for(5, f, p, q);
        for trial in 0..CONJUGATION_TRIALS {
            let coords = random_coords(&mut rng, s.dim());
            let x = s.point(&coords).unwrap();
            let g = random_group_element_with(&pair, &mut rng, GROUP_HEIGHT).map_err(|e| e.to_string())?;
            let y = &(g.matrix() * &x) * g.inverse_matrix();
            if charpoly(&y).unwrap() != charpoly(&x).unwrap()
                || invariants(&pair, &y).unwrap() != invariants(&pair, &x).unwrap()
            {
                return Err(format!("trial {trial}: invariants changed under conjugation"));
            }
            let canon = canonicalize(&pair, &s, &y).map_err(|e| format!("trial {trial}: {e}"))?;
            if canon.coords != coords {
                return Err(format!("trial {trial}: canonical coordinates differ"));
            }
        }
        Ok(())
    })
}

fn criterion_6(cases: &[(Family, usize, usize)]) -> Outcome {
    per_case(6, "equivariance", None, cases, |f, p, q| {
        let pair = pair(f, p, q);
        let mut rng = rng_for(6, f, p, q);
        for trial in 0..EQUIVARIANCE_TRIALS {
            let g = random_group_element_with(&pair, &mut rng, GROUP_HEIGHT).map_err(|e| e.to_string())?;
            let g1 = g.matrix().block(0, 0, p, p);
            let g2_inv = g.matrix().block(p, p, q, q).inverse().unwrap();
            match f {
                Family::Gl => {
                    // rank invariance on matrices of every rank 0..=q
                    let k = trial % (q + 1);
                    let a = if k == 0 {
                        RatMatrix::zeros(p, q)
                    } else {
                        &random_int_matrix(&mut rng, p, k) * &random_int_matrix(&mut rng, k, q)
                    };
                    let moved = &(&g1 * &a) * &g2_inv;
                    if moved.rank() != a.rank() || act_mpq(&pair, &g, &a).unwrap() != moved {
                        return Err(format!("trial {trial}: rank or action mismatch"));
                    }
                    let b = random_int_matrix(&mut rng, q, p);
                    let x = from_blocks(&pair, &a, &b).unwrap();
                    if to_matrix_space(&pair, &act(&pair, &g, &x).unwrap()).unwrap() != moved {
                        return Err(format!("trial {trial}: block equivariance"));
                    }
                }
                Family::Orth | Family::Sp => {
                    let coeffs: Vec<Rat> = pair
                        .basis_minus()
                        .iter()
                        .map(|_| rat(rng.random_range(-COORD_HEIGHT..=COORD_HEIGHT), rng.random_range(1..=COORD_HEIGHT)))
                        .collect();
                    let x = combine(pair.basis_minus(), &coeffs, p + q);
                    let a = to_matrix_space(&pair, &x).unwrap();
                    if from_matrix_space(&pair, &a).unwrap() != x {
                        return Err(format!("trial {trial}: correspondence is not a bijection"));
                    }
                    let conj = &(g.matrix() * &x) * g.inverse_matrix();
                    let lhs = to_matrix_space(&pair, &conj).unwrap();
                    let rhs = &(&g1 * &a) * &g2_inv;
                    if lhs != rhs {
                        return Err(format!("trial {trial}: equivariance fails"));
                    }
                }
            }
        }
        Ok(())
    })
}

fn criterion_7(cases: &[(Family, usize, usize)]) -> Outcome {
    per_case(7, "separation (Jacobian rank)", None, cases, |f, p, q| {
        let pair = pair(f, p, q);
        let s = slice_of(&pair)?;
        let mut rng = rng_for(7, f, p, q);
        for _ in 0..JACOBIAN_POINTS {
            let coords = random_coords(&mut rng, s.dim());
            let r = s.jacobian_rank_at(&coords).unwrap();
            if r != expected_rank(f, p, q) {
                return Err(format!("rank {r} at {coords:?}"));
            }
        }
        Ok(())
    })
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let ranges = Ranges {
        gl_max: 8,
        o_max: 8,
        sp_max: 8,
    };
    let first = cmd_report(ranges, SEED, ROUNDTRIP_TRIALS, 1).expect("report runs");
    let second = cmd_report(ranges, SEED, ROUNDTRIP_TRIALS, 4).expect("report runs");
    let (a, b) = (first.to_json(), second.to_json());
    let total = first.certificates.len();
    let mut failures = Vec::new();
    for (x, y) in first.certificates.iter().zip(&second.certificates) {
        if x.to_json() != y.to_json() {
            failures.push(x.label());
        }
    }
    if a != b && failures.is_empty() {
        failures.push("report envelope differs".into());
    }
    if total != second.certificates.len() {
        failures.push("case counts differ".into());
    }
    Outcome {
        number: 8,
        title: "determinism (same seed, jobs 1 vs 4)",
        passed: total - failures.len().min(total),
        total,
        failures,
        elapsed: start.elapsed(),
        budget: None,
    }
}

fn main() -> ExitCode {
    let cases = cases();
    println!("acceptance: {} cases, seed {SEED}", cases.len());
    let runs: [Criterion; 7] =
        [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7];
    let mut all_ok = true;
    for run in runs {
        let outcome = run(&cases);
        all_ok &= outcome.ok();
        println!("{}", outcome.line());
    }
    let outcome = criterion_8();
    all_ok &= outcome.ok();
    println!("{}", outcome.line());
    if all_ok {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: some criteria FAIL");
        ExitCode::FAILURE
    }
}
