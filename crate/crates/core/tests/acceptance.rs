//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use psys_core::complexity::{
    check_quadratic_bound, equivalent_systems, iterated_reduction_sizes, prime_power_family, reduce_once,
    worst_case_family,
};
use psys_core::factor::nth_prime;
use psys_core::monoid::{build_repr, canonicalize, classify_context_free, equivalent_star, minimize, rebuild};
use psys_core::semantics::{
    enumerate_plus, enumerate_star, evaluate_witness, member_plus, member_star, simulate_reachable,
};
use psys_core::{ContextFreeClass, Mode, PSystem, UnaryPSystem};

const CORPUS_SIZE: usize = 500;
const SEED: u64 = 0x005e_ed0f_c0de;

/// Random unary systems: axiom in 1..=9, up to 4 homomorphisms with
/// coefficients in 1..=9.
fn corpus() -> Vec<UnaryPSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..CORPUS_SIZE)
        .map(|_| {
            let n = rng.gen_range(0..=4);
            UnaryPSystem {
                axiom_len: rng.gen_range(1..=9),
                coeffs: (0..n).map(|_| rng.gen_range(1..=9)).collect(),
            }
        })
        .collect()
}

fn random_order(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    order
}

type Check = fn() -> Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn geometric_language() -> Result<(), String> {
    let sys = UnaryPSystem::new(2, vec![3]).unwrap();
    let got = enumerate_star(&sys, 10_000).unwrap();
    let expected = BTreeSet::from([2, 6, 18, 54, 162, 486, 1458, 4374]);
    ensure!(got == expected, "L*(a^2; 3) to 10^4 = {got:?}");
    ensure!(member_star(&sys, 4).unwrap().is_none(), "4 reported in L*");
    let rival = UnaryPSystem::new(1, vec![2]).unwrap();
    ensure!(enumerate_plus(&rival, 10).unwrap().contains(&4), "4 missing from L+(a; 2)");
    Ok(())
}

fn prime_power_enumeration() -> Result<(), String> {
    ensure!(
        (nth_prime(1), nth_prime(2), nth_prime(3)) == (2, 3, 5),
        "first primes are not 2, 3, 5"
    );
    for n in [2usize, 3] {
        let sys = prime_power_family(n).unwrap();
        ensure!(
            (0..n).all(|i| sys.homs[i][i] == [2, 3, 5][i]),
            "Π({n}) does not use primes 2, 3, 5"
        );
        // nested loop over p_1^{m_1}, ..., p_n^{m_n}
        let primes = [2u64, 3, 5];
        let powers: Vec<Vec<u64>> = primes[..n]
            .iter()
            .map(|&p| std::iter::successors(Some(1u64), |&x| Some(x * p)).take_while(|&x| x <= 200).collect())
            .collect();
        let mut oracle = BTreeSet::new();
        for &x in &powers[0] {
            for &y in &powers[1] {
                if n == 2 {
                    if x + y <= 200 {
                        oracle.insert(vec![x, y]);
                    }
                    continue;
                }
                for &z in &powers[2] {
                    if x + y + z <= 200 {
                        oracle.insert(vec![x, y, z]);
                    }
                }
            }
        }
        let got = enumerate_star(&sys, 200).unwrap();
        ensure!(got == oracle, "Π({n}) enumeration differs from oracle");
        ensure!(simulate_reachable(&sys, 200).unwrap() == oracle, "Π({n}) simulation differs from oracle");
    }
    Ok(())
}

fn permutation_invariance() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    for sys in corpus() {
        let order = random_order(&mut rng, sys.hom_count());
        let p = sys.permute(&order).unwrap();
        ensure!(
            enumerate_star(&sys, 2000).unwrap() == enumerate_star(&p, 2000).unwrap(),
            "L* changed under {order:?} for {sys:?}"
        );
        ensure!(
            enumerate_plus(&sys, 2000).unwrap() == enumerate_plus(&p, 2000).unwrap(),
            "L+ changed under {order:?} for {sys:?}"
        );
        ensure!(equivalent_star(&sys, &p).unwrap(), "not equivalent to its permutation: {sys:?}");
    }
    Ok(())
}

fn plus_to_star_bridge() -> Result<(), String> {
    for sys in corpus() {
        let converted = sys.plus_to_star().unwrap();
        for bound in [100, 2000] {
            ensure!(
                enumerate_plus(&sys, bound).unwrap() == enumerate_star(&converted, bound).unwrap(),
                "bridge fails for {sys:?} at bound {bound}"
            );
        }
    }
    Ok(())
}

fn representation_lemma() -> Result<(), String> {
    for sys in corpus() {
        let star = enumerate_star(&sys, 2000).unwrap();
        let plus = enumerate_star(&sys.plus_to_star().unwrap(), 2000).unwrap();
        for m in 1..=2000u64 {
            let w = member_star(&sys, m).unwrap();
            ensure!(w.is_some() == star.contains(&m), "L* membership of {m} wrong for {sys:?}");
            if let Some(w) = w {
                ensure!(evaluate_witness(&sys, &w) == Some(m), "bad L* witness {w:?} for {m} in {sys:?}");
            }
            let w = member_plus(&sys, m).unwrap();
            ensure!(w.is_some() == plus.contains(&m), "L+ membership of {m} wrong for {sys:?}");
            if let Some(w) = w {
                ensure!(
                    w.iter().all(|&t| t >= 1) && evaluate_witness(&sys, &w) == Some(m),
                    "bad L+ witness {w:?} for {m} in {sys:?}"
                );
            }
        }
    }
    Ok(())
}

fn canonical_form() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    for sys in corpus() {
        let cf = canonicalize(&sys).unwrap();
        let repr = build_repr(&sys.strip_identities().0).unwrap();
        ensure!(
            cf.generators.iter().all(|g| repr.columns.contains(g)),
            "(a) generator outside M_Π for {sys:?}"
        );
        let min = minimize(&sys).unwrap();
        ensure!(
            enumerate_star(&min, 2000).unwrap() == enumerate_star(&sys, 2000).unwrap(),
            "(b) minimize changed L* for {sys:?}"
        );
        ensure!(canonicalize(&rebuild(&cf).unwrap()).unwrap() == cf, "(c) not idempotent for {sys:?}");
        let order = random_order(&mut rng, sys.hom_count());
        ensure!(
            canonicalize(&sys.permute(&order).unwrap()).unwrap() == cf,
            "(c) not permutation invariant for {sys:?}"
        );
        let live: Vec<u64> = sys.coeffs.iter().copied().filter(|&c| c > 1).collect();
        if !live.is_empty() {
            let mut injected = sys.clone();
            for _ in 0..rng.gen_range(1..=3) {
                let parts = rng.gen_range(2..=3);
                let c: u64 = (0..parts).map(|_| *live.choose(&mut rng).unwrap()).product();
                let at = rng.gen_range(0..=injected.coeffs.len());
                injected.coeffs.insert(at, c);
            }
            ensure!(
                canonicalize(&injected).unwrap() == cf,
                "(d) injected columns changed the form: {sys:?} -> {injected:?}"
            );
        }
    }
    Ok(())
}

fn identity_size_bound() -> Result<(), String> {
    for sys in corpus() {
        let min = minimize(&sys).unwrap();
        ensure!(min.size() <= sys.size(), "minimize grew {sys:?} to {min:?}");
        let cf = canonicalize(&sys).unwrap();
        let all_distinct_irreducible = !sys.coeffs.contains(&1) && cf.generators.len() == sys.hom_count();
        if all_distinct_irreducible {
            ensure!(min.size() == sys.size(), "size changed for already-minimal {sys:?}");
        }
    }
    Ok(())
}

fn quadratic_worst_case() -> Result<(), String> {
    for m in 2..=10u64 {
        let sys = worst_case_family(m, 2).unwrap();
        let reduced = reduce_once(&sys).unwrap().ok_or("no reduction")?;
        ensure!(sys.size() == 3 * m, "size before is {} for m={m}", sys.size());
        ensure!(reduced.size() == m + m * m, "size after is {} for m={m}", reduced.size());
        ensure!(m + m * m < (3 * m) * (3 * m), "bound arithmetic fails for m={m}");
        ensure!(check_quadratic_bound(&sys, &reduced), "quadratic bound fails for m={m}");
        ensure!(
            enumerate_plus(&sys, 5000).unwrap() == enumerate_plus(&reduced, 5000).unwrap(),
            "L+ changed for m={m}"
        );
    }
    Ok(())
}

fn iterated_reduction() -> Result<(), String> {
    for m in 2..=4u64 {
        for n in 2..=4usize {
            for x in 1..n {
                let (before, after) = iterated_reduction_sizes(m, n, x).unwrap();
                let expected = (n - x) as u64 * m + m.pow(x as u32 + 1);
                ensure!(before == (n as u64 + 1) * m, "before = {before} for m={m} n={n}");
                ensure!(after == expected, "m={m} n={n} x={x}: measured {after}, expected {expected}");
                if x == n - 1 {
                    ensure!(after == m + m.pow(n as u32), "exponential case m={m} n={n}");
                }
            }
        }
    }
    Ok(())
}

fn simulator_oracle() -> Result<(), String> {
    for sys in corpus() {
        ensure!(
            simulate_reachable(&sys, 2000).unwrap() == enumerate_star(&sys, 2000).unwrap(),
            "simulator disagrees for {sys:?}"
        );
    }
    Ok(())
}

fn lone_equivalent() -> Result<(), String> {
    for m in 3..=5u64 {
        let target = worst_case_family(m, 2).unwrap();
        let found = equivalent_systems(&target, Mode::Plus, 1, m + m * m).unwrap();
        let expected = vec![UnaryPSystem {
            axiom_len: m * m,
            coeffs: vec![m],
        }];
        ensure!(found == expected, "m={m}: found {found:?}");
    }
    Ok(())
}

fn context_free_corollary() -> Result<(), String> {
    let identity_only = (1..=9u64).flat_map(|a| {
        (0..=3usize).map(move |n| UnaryPSystem {
            axiom_len: a,
            coeffs: vec![1; n],
        })
    });
    for sys in corpus().into_iter().chain(identity_only) {
        let class = classify_context_free(&sys).unwrap();
        let maxc = sys.coeffs.iter().copied().max().unwrap_or(1);
        let bounds = [sys.axiom_len, sys.axiom_len * maxc, 2000.max(sys.axiom_len)];
        let sizes: Vec<usize> = bounds.iter().map(|&b| enumerate_star(&sys, b).unwrap().len()).collect();
        let singleton = sizes.iter().all(|&s| s == 1);
        ensure!(
            singleton == (class == ContextFreeClass::Singleton(sys.axiom_len)),
            "{sys:?} classified {class:?}, enumeration sizes {sizes:?}"
        );
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, Check); 12] = [
        ("single-homomorphism geometric language", geometric_language),
        ("prime-power family (n = 2, 3)", prime_power_enumeration),
        ("permutation invariance", permutation_invariance),
        ("plus-to-star bridge", plus_to_star_bridge),
        ("representation via exponent vectors", representation_lemma),
        ("canonical form", canonical_form),
        ("identity size bound for L*", identity_size_bound),
        ("quadratic worst case", quadratic_worst_case),
        ("iterated reduction sizes", iterated_reduction),
        ("simulator matches closed form", simulator_oracle),
        ("lone single-homomorphism equivalent", lone_equivalent),
        ("context-free classification", context_free_corollary),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(()) => println!("criterion {:>2} PASS  {name}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
