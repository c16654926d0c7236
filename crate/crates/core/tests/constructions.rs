//! Construction suite: every explicit nilpotent lies in g(-1), is nilpotent,
//! is relatively regular, and its centralizer agrees with the hand-derived
//! closed form.

use ksection::exact::{nilpotency_index, rank};
use ksection::nilpotent::{centralizer, closed_form_centralizer, is_relatively_regular, regular_nilpotent};
use ksection::pairs::{bracket, make_pair, Family};
use ksection::RatMatrix;

fn cases(max_gl: usize, max_o: usize, max_sp: usize) -> Vec<(Family, usize, usize)> {
    let mut out = Vec::new();
    for p in 1..=max_gl {
        for q in 1..=p {
            out.push((Family::Gl, p, q));
        }
    }
    for p in 1..=max_o {
        for q in p.saturating_sub(1).max(1)..=p {
            out.push((Family::Orth, p, q));
        }
    }
    for p in (2..=max_sp).step_by(2) {
        for q in (2..=p).step_by(2) {
            out.push((Family::Sp, p, q));
        }
    }
    out
}

fn span_rank(ms: &[RatMatrix]) -> usize {
    if ms.is_empty() {
        return 0;
    }
    let cols = ms.len();
    let rows = ms[0].entries().len();
    rank(&RatMatrix::from_fn(rows, cols, |i, j| ms[j].entries()[i].clone()))
}

#[test]
fn explicit_elements_are_regular_nilpotent() {
    for (fam, p, q) in cases(5, 5, 6) {
        let pair = make_pair(fam, p, q).unwrap();
        let e = regular_nilpotent(&pair);
        assert!(pair.in_minus(&e), "{fam}({p},{q}) e not in g(-1)");
        assert!(nilpotency_index(&e).unwrap().is_some(), "{fam}({p},{q}) not nilpotent");
        assert_eq!(centralizer(&pair, &e).unwrap().len(), pair.rank_theta(), "{fam}({p},{q})");
        assert!(is_relatively_regular(&pair, &e).unwrap());
    }
}

#[test]
fn closed_forms_span_the_centralizer() {
    for (fam, p, q) in cases(5, 6, 6) {
        let pair = make_pair(fam, p, q).unwrap();
        let e = regular_nilpotent(&pair);
        let computed = centralizer(&pair, &e).unwrap();
        let closed = closed_form_centralizer(&pair);
        for c in &closed {
            assert!(pair.in_minus(c), "{fam}({p},{q}) closed form leaves g(-1)");
            assert!(bracket(&e, c).unwrap().is_zero(), "{fam}({p},{q}) closed form does not commute");
        }
        let both: Vec<RatMatrix> = computed.iter().chain(&closed).cloned().collect();
        let r = span_rank(&computed);
        assert_eq!(span_rank(&closed), r, "{fam}({p},{q}) closed-form rank");
        assert_eq!(span_rank(&both), r, "{fam}({p},{q}) spans differ");
    }
}
