//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p cohcalc-core --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cohcalc_core::bracket_oracle::{check_pbw_surjectivity, FreeAlgebra, Generator};
use cohcalc_core::decomposer::{init_peel, peel_step, whitehead_basis_below};
use cohcalc_core::homology_models::{
    circle, loops, verify_half_smash_splitting, verify_join_complement, verify_join_splitting,
    verify_product_cells, verify_suspended_loops_splitting,
};
use cohcalc_core::lie_kernel::{check_kernel_identity, free_lie_dims, GeneratorSeries};
use cohcalc_core::telescope_lab::{
    circle_via_telescope, verify_telescope_splitting, verify_telescope_swap, GradedEndo,
};
use cohcalc_core::{Field, Matrix, PrimeField, Rationals, SpaceModel, TruncSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const D: usize = 32;

struct Criterion {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn random_wedge(rng: &mut ChaCha8Rng) -> Vec<i64> {
    let cells = rng.gen_range(1..=6);
    let mut degrees: Vec<i64> = (0..cells).map(|_| rng.gen_range(2..=8)).collect();
    degrees.sort_unstable();
    degrees
}

fn random_pairs() -> Vec<(Vec<i64>, Vec<i64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    (0..20)
        .map(|_| (random_wedge(&mut rng), random_wedge(&mut rng)))
        .collect()
}

fn sphere_wedge(degrees: &[i64], trunc: usize) -> SpaceModel {
    SpaceModel::from_spheres(degrees, trunc).expect("simply connected")
}

fn identity_suite(pairs: &[(Vec<i64>, Vec<i64>)]) -> Criterion {
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    for (a, b) in pairs {
        let start = Instant::now();
        let (g, h) = (sphere_wedge(a, D), sphere_wedge(b, D));
        let verdicts = [
            verify_half_smash_splitting(&g, &h),
            verify_suspended_loops_splitting(&g),
            verify_join_splitting(&g, &h),
            verify_product_cells(&g, &h),
            verify_join_complement(&g, &h),
        ];
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        for r in &verdicts {
            if !r.equal || r.trunc_degree != D {
                failures.push(format!("{} on {a:?},{b:?}", r.identity));
            }
        }
        if elapsed >= Duration::from_secs(1) {
            failures.push(format!("{a:?},{b:?} took {elapsed:?}"));
        }
    }
    Criterion {
        id: 1,
        name: "five splitting identities exact through degree 32 on 20 random sphere-wedge pairs",
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("slowest pair {slowest:.2?}")
        } else {
            failures.join("; ")
        },
    }
}

fn kernel_suite(pairs: &[(Vec<i64>, Vec<i64>)]) -> Criterion {
    let mut failures = Vec::new();
    for (a, b) in pairs {
        let g = GeneratorSeries::new(sphere_wedge(a, D).gens().clone()).expect("valid");
        let h = GeneratorSeries::new(sphere_wedge(b, D).gens().clone()).expect("valid");
        if !check_kernel_identity(&g, &h).equal {
            failures.push(format!("{a:?},{b:?}"));
        }
    }
    let t = GeneratorSeries::new(TruncSeries::monomial(D, 1, 1)).expect("valid");
    let r = check_kernel_identity(&t, &t);
    let two_t = TruncSeries::monomial(D, 1, 2)
        .geom_inverse()
        .expect("valid");
    if !(r.equal && r.left == two_t && r.right == two_t) {
        failures.push("g = h = t does not give 1/(1-2t)".into());
    }
    Criterion {
        id: 2,
        name:
            "kernel identity exact through degree 32 on the same pairs, and 1/(1-2t) for g = h = t",
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            "21 cases".into()
        } else {
            failures.join("; ")
        },
    }
}

fn oracle_suite() -> Criterion {
    let start = Instant::now();
    let f = PrimeField::new(101).expect("prime");
    let s2 = sphere_wedge(&[2], D);
    let w = sphere_wedge(&[2, 3], D);
    let mut failures = Vec::new();
    for (label, g, cap) in [("S^2,S^2", &s2, 8), ("S^2 v S^3,S^2", &w, 7)] {
        match check_pbw_surjectivity(f, g, &s2, cap) {
            Ok(r) => {
                for d in r.degrees.iter().filter(|d| !d.pass) {
                    failures.push(format!(
                        "{label} degree {}: dim {} count {} rank {}",
                        d.degree, d.dimension, d.count, d.rank
                    ));
                }
                if r.degrees.len() != cap {
                    failures.push(format!("{label}: {} degrees checked", r.degrees.len()));
                }
            }
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(60) {
        failures.push(format!("took {elapsed:?}"));
    }
    Criterion {
        id: 3,
        name: "tensor-algebra spanning check over F_101 (S^2,S^2 to degree 8; S^2 v S^3,S^2 to degree 7)",
        pass: failures.is_empty(),
        detail: if failures.is_empty() { format!("{elapsed:.2?}") } else { failures.join("; ") },
    }
}

fn lie_suite() -> Criterion {
    let mut failures = Vec::new();
    let two = GeneratorSeries::new(TruncSeries::monomial(6, 1, 2)).expect("valid");
    let dims = free_lie_dims(&two).expect("consistent");
    let head: Vec<i64> = (1..=3)
        .map(|n| i64::try_from(dims.coeff(n)).unwrap_or(-1))
        .collect();
    if head != [2, 3, 2] {
        failures.push(format!("two odd degree-1 generators gave {head:?}"));
    }
    for degrees in [&[1usize, 1][..], &[1, 2], &[2, 2], &[1, 1, 2]] {
        let gens: Vec<Generator> = degrees
            .iter()
            .enumerate()
            .map(|(i, &d)| Generator {
                label: format!("a{i}"),
                degree: d,
            })
            .collect();
        let alg = FreeAlgebra::new(Rationals, gens, 6).expect("positive degrees");
        let spans = alg.lie_span_dims(6).expect("within cap");
        let series = TruncSeries::from_terms(6, degrees.iter().map(|&d| (d, 1)));
        let predicted =
            free_lie_dims(&GeneratorSeries::new(series).expect("valid")).expect("consistent");
        for (n, &span) in spans.iter().enumerate().skip(1) {
            if predicted.coeff(n) != span.into() {
                failures.push(format!(
                    "generators {degrees:?} degree {n}: series {} vs span {span}",
                    predicted.coeff(n)
                ));
            }
        }
    }
    Criterion {
        id: 4,
        name: "free Lie dimensions d1=2, d2=3, d3=2 and agreement with commutator spans over Q through degree 6",
        pass: failures.is_empty(),
        detail: if failures.is_empty() { format!("d1..d6 = {:?}", &dims.coeffs()[1..]) } else { failures.join("; ") },
    }
}

fn random_block(rng: &mut ChaCha8Rng, f: &PrimeField, n: usize) -> Matrix<PrimeField> {
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.gen_range(0..5)).collect())
        .collect();
    if n == 0 {
        Matrix::zeros(f, 0, 0)
    } else {
        Matrix::from_i64_rows(f, &rows).expect("rectangular")
    }
}

fn random_invertible(
    rng: &mut ChaCha8Rng,
    f: &PrimeField,
    n: usize,
) -> (Matrix<PrimeField>, Matrix<PrimeField>) {
    loop {
        let s = random_block(rng, f, n);
        if let Some(inv) = s.inverse(f) {
            return (s, inv);
        }
    }
}

fn telescope_suite() -> Criterion {
    let f = PrimeField::new(5).expect("prime");
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();
    for trial in 0..100 {
        let blocks = (0..6)
            .map(|_| {
                let n = rng.gen_range(0..=6);
                let r = rng.gen_range(0..=n);
                let mut p = Matrix::zeros(&f, n, n);
                for i in 0..r {
                    p.set(i, i, f.from_i64(-1));
                }
                let (s, inv) = random_invertible(&mut rng, &f, n);
                s.mul(&f, &p).mul(&f, &inv)
            })
            .collect();
        let e = GradedEndo::new(f, blocks).expect("square");
        match verify_telescope_splitting(&e) {
            Ok(r) if r.pass => {}
            Ok(_) => failures.push(format!("splitting trial {trial}")),
            Err(err) => failures.push(format!("splitting trial {trial}: {err}")),
        }
    }
    for trial in 0..100 {
        let dims: Vec<usize> = (0..6).map(|_| rng.gen_range(0..=6)).collect();
        let mut make = || {
            let blocks = dims
                .iter()
                .map(|&n| random_block(&mut rng, &f, n))
                .collect();
            GradedEndo::new(f, blocks).expect("square")
        };
        let (a, b) = (make(), make());
        if !verify_telescope_swap(&a, &b)
            .map(|r| r.equal)
            .unwrap_or(false)
        {
            failures.push(format!("swap trial {trial}"));
        }
    }
    let s2 = sphere_wedge(&[2], D);
    match circle_via_telescope(f, &s2, &s2, 6) {
        Ok(r) => {
            let t3 = TruncSeries::monomial(6, 3, 1);
            if !(r.pass && r.telescope == t3 && circle(&s2, &s2).red().truncate(6) == t3) {
                failures.push(format!("circle(S^2, S^2) telescope {}", r.telescope));
            }
        }
        Err(e) => failures.push(format!("circle(S^2, S^2): {e}")),
    }
    Criterion {
        id: 5,
        name: "telescope splitting (100 random maps over F_5), swap (100 pairs), S^2∘S^2 as a telescope gives t^3",
        pass: failures.is_empty(),
        detail: if failures.is_empty() { "201 cases".into() } else { failures.join("; ") },
    }
}

fn peel_suite() -> Criterion {
    let mut failures = Vec::new();
    let s2 = sphere_wedge(&[2], 16);
    let s3 = sphere_wedge(&[3], 16);
    for (label, h) in [("S^2,S^2", &s2), ("S^2,S^3", &s3)] {
        let mut state = init_peel(&s2, h);
        loop {
            let c = state.conservation();
            if !c.equal || c.left.degree() != 16 {
                failures.push(format!("{label} k={}", state.k()));
            }
            if state.k() == 4 {
                break;
            }
            let next = peel_step(&state);
            if next.k() != state.k() + 1 {
                failures.push(format!("{label} stalled at k={}", state.k()));
                break;
            }
            state = next;
        }
    }
    let basis = whitehead_basis_below(&sphere_wedge(&[2], D), &sphere_wedge(&[2], D), 3);
    let labels: Vec<String> = basis
        .iter()
        .flatten()
        .map(|p| p.label().to_string())
        .collect();
    if labels.len() != 3 {
        failures.push(format!("basis below 3: {labels:?}"));
    }
    Criterion {
        id: 6,
        name: "peeling to k=4 conserves series through degree 16; three products below dimension 3 for S^2,S^2",
        pass: failures.is_empty(),
        detail: if failures.is_empty() { labels.join(", ") } else { failures.join("; ") },
    }
}

fn james_suite() -> Criterion {
    let s2 = sphere_wedge(&[2], D);
    let r = verify_suspended_loops_splitting(&s2);
    let expected = TruncSeries::from_terms(D, (2..=D).map(|n| (n, 1)));
    let shifted = (&loops(&s2) - &TruncSeries::one(D))
        .shift(1)
        .expect("upward");
    let pass = r.equal && r.left == expected && r.right == expected && shifted == expected;
    Criterion {
        id: 7,
        name: "suspended loops on S^2 splits as t^2 + t^3 + ... through degree 32",
        pass,
        detail: format!("{} wedge summands", r.terms.len()),
    }
}

fn main() -> ExitCode {
    let pairs = random_pairs();
    let criteria = [
        identity_suite(&pairs),
        kernel_suite(&pairs),
        oracle_suite(),
        lie_suite(),
        telescope_suite(),
        peel_suite(),
        james_suite(),
    ];
    for c in &criteria {
        println!(
            "{} [{}] {} ({})",
            if c.pass { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            c.detail
        );
    }
    let failed = criteria.iter().filter(|c| !c.pass).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
