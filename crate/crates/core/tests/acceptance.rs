//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed; exits non-zero if any fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ekr_core::combinat::{ak_family_size, binomial};
use ekr_core::constructions::klein_family;
use ekr_core::harness::{Campaign, Outcome, RunOptions};
use ekr_core::predicates::{classify_star, family_satisfies, projection_is_set_star};
use ekr_core::search::{all_max_cliques, max_clique, BoundStatus, CliqueOptions, Graph};
use ekr_core::{extremal, ExtremalOptions, ExtremalReport, Matching, PartStructure, Predicate, StarKind};

type Check = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Check);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn search(parts: &[usize], sizes: &[usize], pred: Predicate) -> Result<ExtremalReport, String> {
    let parts = PartStructure::new(parts.to_vec()).map_err(|e| e.to_string())?;
    let opts = ExtremalOptions {
        all_maxima: true,
        ..ExtremalOptions::default()
    };
    extremal(&parts, sizes, pred, &opts).map_err(|e| e.to_string())
}

fn falling(a: u64, b: u64) -> u64 {
    (0..b).map(|i| a - i).product()
}

fn fact(n: u64) -> u64 {
    (1..=n).product()
}

/// Star size for r-matchings: `prod (n_i - 1)_{r-1} / (r-1)!`.
fn star_formula(parts: &[usize], r: usize) -> u64 {
    let r = r as u64;
    parts.iter().map(|&n| falling(n as u64 - 1, r - 1)).product::<u64>() / fact(r - 1)
}

fn run_campaign(name: &str, samples: Option<usize>, workers: usize) -> Result<ekr_core::harness::CampaignReport, String> {
    let mut c = Campaign::builtin(name).map_err(|e| e.to_string())?;
    if let Some(s) = samples {
        c.samples = s;
    }
    c.run(&RunOptions { workers, timings: false }).map_err(|e| e.to_string())
}

fn criterion_1() -> Check {
    let cells: [(&[usize], u64); 4] = [(&[3, 3], 4), (&[3, 4], 6), (&[4, 4], 9), (&[3, 3, 3], 8)];
    let mut seen = Vec::new();
    for (parts, want) in cells {
        ensure(star_formula(parts, 2) == want, format!("formula for {parts:?} gives {}", star_formula(parts, 2)))?;
        let rep = search(parts, &[2], Predicate::intersecting(1))?;
        ensure(rep.max_size as u64 == want, format!("{parts:?}: max {} != {want}", rep.max_size))?;
        ensure(rep.all_maxima_are(StarKind::Star), format!("{parts:?}: a maximum is not a 1-star"))?;
        seen.push(format!("{}", rep.max_size));
    }
    Ok(format!("maxima {} all 1-stars", seen.join(",")))
}

fn criterion_2() -> Check {
    let rep = search(&[3, 3], &[3], Predicate::intersecting(1))?;
    ensure(rep.max_size as u64 == fact(2), format!("max {} != (n-1)! = 2", rep.max_size))?;
    ensure(rep.all_maxima_are(StarKind::Star), "a maximum is not a star")?;
    Ok(format!("max=2, {}", rep.maxima_line().unwrap_or_default()))
}

/// Counts r-subsets of [n] meeting [t+2i] in at least t+i points.
fn ak_oracle(n: usize, r: usize, t: usize, i: usize) -> usize {
    let frame = t + 2 * i;
    (0u32..1 << n)
        .filter(|s| s.count_ones() as usize == r)
        .filter(|s| (s & ((1u32 << frame.min(n)) - 1)).count_ones() as usize >= t + i)
        .count()
}

fn criterion_3() -> Check {
    let (r, t) = (3, 2);
    let mut seen = Vec::new();
    for n in 5..=9 {
        let best = (0..)
            .take_while(|i| t + 2 * i <= n)
            .map(|i| {
                let size = ak_oracle(n, r, t, i);
                assert_eq!(ak_family_size(n, r, t, i).unwrap(), size.into());
                size
            })
            .max()
            .unwrap();
        let rep = search(&[n], &[r], Predicate::intersecting(t))?;
        ensure(rep.max_size == best, format!("n={n}: max {} != {best}", rep.max_size))?;
        let want = if n < (r - t + 1) * (t + 1) {
            BoundStatus::ExceedsStarBound
        } else {
            BoundStatus::MatchesStarBound
        };
        ensure(rep.status == want, format!("n={n}: status {}", rep.status))?;
        seen.push(format!("n={n}:{}", rep.max_size));
    }
    Ok(seen.join(" "))
}

/// Largest t-intersecting family of subsets of [n].
fn katona_oracle(n: usize, t: usize) -> u64 {
    let tail = |from: usize| (from..=n).map(|j| binomial(n, j)).sum::<num_bigint::BigUint>();
    let v = if (n + t).is_multiple_of(2) {
        tail((n + t) / 2)
    } else {
        binomial(n - 1, (n + t - 1) / 2) + tail((n + t + 1) / 2)
    };
    v.try_into().unwrap()
}

fn criterion_4() -> Check {
    let mut seen = Vec::new();
    for n in 4..=6 {
        for t in 1..=2 {
            let levels: Vec<usize> = (1..=n).collect();
            let rep = search(&[n], &levels, Predicate::intersecting(t))?;
            let want = katona_oracle(n, t);
            ensure(rep.max_size as u64 == want, format!("n={n} t={t}: max {} != {want}", rep.max_size))?;
            seen.push(format!("{n}/{t}:{}", rep.max_size));
        }
    }
    ensure(katona_oracle(5, 1) == 16, "n=5 t=1 is not 16")?;
    let report = run_campaign("katona", None, 0)?;
    ensure(report.verdict.failed == 0, format!("katona campaign: {}", report.verdict))?;
    Ok(seen.join(" "))
}

/// Heap's algorithm over [1..=n].
fn permutations(n: usize) -> Vec<Vec<u32>> {
    let mut a: Vec<u32> = (1..=n as u32).collect();
    let mut out = vec![a.clone()];
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

fn perm_matching(p: &[u32]) -> Matching {
    let edges: Vec<[u32; 2]> = p.iter().enumerate().map(|(i, &x)| [i as u32 + 1, x]).collect();
    Matching::from_tuples(&edges).unwrap()
}

fn criterion_5() -> Check {
    let report = run_campaign("examples", None, 0)?;
    ensure(
        report.rows.len() == 4 && report.rows.iter().all(|r| r.outcome == Outcome::Pass),
        format!("examples campaign: {}", report.verdict),
    )?;
    // fixed-point frame G_1 at n = 8, t = 4: at least 5 fixed points inside [6]
    let g1 = permutations(8)
        .iter()
        .filter(|p| (0..6).filter(|&i| p[i] == i as u32 + 1).count() >= 5)
        .count();
    ensure(g1 == 26 && fact(4) == 24, format!("|G_1| = {g1}"))?;
    // Klein four-group as perfect matchings of K_{4,4}
    let klein: Vec<Matching> = [[1, 2, 3, 4], [2, 1, 4, 3], [3, 4, 1, 2], [4, 3, 2, 1]]
        .iter()
        .map(|p| perm_matching(p))
        .collect();
    let set2 = Predicate::set_intersecting(2);
    ensure(
        klein.iter().all(|p| klein.iter().all(|q| set2.holds(p, q))),
        "Klein group is not 2-set-intersecting",
    )?;
    let lib = klein_family(2, 1_000_000).map_err(|e| e.to_string())?;
    ensure(lib.members().cloned().collect::<BTreeSet<_>>() == klein.iter().cloned().collect(), "Klein family differs")?;
    ensure(!classify_star(&lib, 2).map_err(|e| e.to_string())?.is_set_star(), "Klein group is a 2-set-star")?;
    let k3 = klein_family(3, 1_000_000).map_err(|e| e.to_string())?;
    ensure(k3.len() == 16, "k=3 Klein family size")?;
    ensure(family_satisfies(&k3, &Predicate::weakly_set_intersecting(2)), "k=3 not weakly 2-set-intersecting")?;
    let a = Matching::from_tuples(&[[1, 1, 1], [2, 2, 2], [3, 3, 3], [4, 4, 4]]).unwrap();
    let b = Matching::from_tuples(&[[1, 2, 3], [2, 1, 4], [3, 4, 1], [4, 3, 2]]).unwrap();
    ensure(k3.contains(&a) && k3.contains(&b), "witness pair not in the family")?;
    ensure(!set2.holds(&a, &b), "witness pair is 2-set-intersecting")?;
    Ok("4 example rows pass; |G_1|=26 > 24; Klein k=2 size 4; k=3 size 16".into())
}

fn criterion_6() -> Check {
    let parts = [3, 3];
    let want: u64 = [1, 2].iter().map(|&r| star_formula(&parts, r)).sum();
    let rep = search(&parts, &[1, 2], Predicate::intersecting(1))?;
    ensure(want == 5 && rep.max_size as u64 == want, format!("max {} != {want}", rep.max_size))?;
    ensure(rep.all_maxima_are(StarKind::Star), "a maximum is not a star")?;
    Ok(format!("max=5, {}", rep.maxima_line().unwrap_or_default()))
}

fn criterion_7() -> Check {
    let report = run_campaign("lemma1", Some(1000), 0)?;
    let random: usize = report
        .rows
        .iter()
        .filter(|r| r.case.ends_with("random"))
        .flat_map(|r| r.detail["family_sizes"].as_object().cloned().unwrap_or_default())
        .map(|(_, n)| n.as_u64().unwrap_or(0) as usize)
        .sum();
    ensure(random == 1000, format!("{random} random families checked"))?;
    ensure(report.verdict.failed == 0 && report.verdict.errors == 0, report.verdict.to_string())?;
    Ok(format!("{random} random families, {}", report.verdict))
}

fn criterion_8a() -> Check {
    let report = run_campaign("weak-star", None, 0)?;
    let row = report
        .rows
        .iter()
        .find(|r| r.case.starts_with("(3,3,3) r=2 t=1"))
        .ok_or("no (3,3,3) r=2 t=1 row")?;
    ensure(row.outcome == Outcome::Pass, format!("{}: {}", row.observed, row.note))?;
    Ok(row.observed.clone())
}

/// Every 2-set-star of perfect matchings of K_{4,4}, built from permutations.
fn set_stars_4x4() -> Vec<BTreeSet<Matching>> {
    let pairs: Vec<[u32; 2]> = (1..=4).flat_map(|a| (a + 1..=4).map(move |b| [a, b])).collect();
    let perms = permutations(4);
    let mut out = Vec::new();
    for c1 in &pairs {
        for c2 in &pairs {
            let star = perms
                .iter()
                .filter(|p| c1.iter().filter(|&&x| c2.contains(&p[x as usize - 1])).count() == 2)
                .map(|p| perm_matching(p))
                .collect();
            out.push(star);
        }
    }
    out
}

fn criterion_8b() -> Check {
    let k3 = klein_family(3, 1_000_000).map_err(|e| e.to_string())?;
    let stars = set_stars_4x4();
    let mut projections_are_stars = true;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let proj: BTreeSet<Matching> = k3
            .members()
            .map(|m| m.project_pair(i, j).unwrap().to_matching())
            .collect();
        projections_are_stars &= stars.contains(&proj);
    }
    let lib_weak = projection_is_set_star(&k3, 2).map_err(|e| e.to_string())?;
    let class = classify_star(&k3, 2).map_err(|e| e.to_string())?;
    ensure(lib_weak == projections_are_stars, "library and oracle disagree on the projections")?;
    ensure(!class.is_set_star(), "Klein k=3 is a 2-set-star")?;
    ensure(
        lib_weak && class.weak_set_star,
        "Klein k=3 is not a weak 2-set-star: each 2-part projection is the Klein group, which is not a 2-set-star",
    )?;
    Ok("weak-2-set-star, not a 2-set-star".into())
}

fn criterion_9() -> Check {
    let report = run_campaign("formulas", None, 0)?;
    ensure(report.verdict.failed == 0 && report.verdict.errors == 0, report.verdict.to_string())?;
    Ok(format!("{} construction rows agree", report.verdict.passed))
}

fn naive_cliques(g: &Graph) -> (usize, Vec<Vec<usize>>) {
    fn grow(g: &Graph, clique: &mut Vec<usize>, from: usize, best: &mut (usize, Vec<Vec<usize>>)) {
        if clique.len() > best.0 {
            *best = (clique.len(), Vec::new());
        }
        if clique.len() == best.0 {
            best.1.push(clique.clone());
        }
        for v in from..g.len() {
            if clique.iter().all(|&u| g.adjacent(u, v)) {
                clique.push(v);
                grow(g, clique, v + 1, best);
                clique.pop();
            }
        }
    }
    let mut best = (0, Vec::new());
    grow(g, &mut Vec::new(), 0, &mut best);
    best
}

fn criterion_10() -> Check {
    let mut cases = 0;
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=20);
        let density = rng.gen_range(0.1..0.95);
        let mut g = Graph::new(n);
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen_bool(density) {
                    g.add_edge(a, b);
                }
            }
        }
        let (size, mut all) = naive_cliques(&g);
        all.sort();
        let mut first: Option<(usize, Vec<usize>, Vec<Vec<usize>>)> = None;
        for workers in [1, 2, 4] {
            let opts = CliqueOptions { workers, ..CliqueOptions::default() };
            let (s, w) = max_clique(&g, &opts).map_err(|e| e.to_string())?;
            let maxima = all_max_cliques(&g, s, 1_000_000, &opts).map_err(|e| e.to_string())?;
            ensure(s == size, format!("seed {seed}: {s} != naive {size}"))?;
            ensure(g.is_clique(&w) && w == all[0], format!("seed {seed}: witness {w:?}"))?;
            let mut sorted = maxima.clone();
            sorted.sort();
            ensure(sorted == all, format!("seed {seed}: maxima differ from naive"))?;
            match &first {
                None => first = Some((s, w, maxima)),
                Some(f) => ensure(*f == (s, w, maxima), format!("seed {seed}: workers={workers} differs"))?,
            }
        }
        cases += 1;
    }
    let one = run_campaign("intersecting", None, 1)?.to_csv().map_err(|e| e.to_string())?;
    let four = run_campaign("intersecting", None, 4)?.to_csv().map_err(|e| e.to_string())?;
    ensure(one == four, "campaign CSV differs between 1 and 4 workers")?;
    Ok(format!("{cases} graphs agree with naive enumeration; 1/2/4 workers identical"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("1", 10, criterion_1),
        ("2", 1, criterion_2),
        ("3", 30, criterion_3),
        ("4", 300, criterion_4),
        ("5", 10, criterion_5),
        ("6", 10, criterion_6),
        ("7", 60, criterion_7),
        ("8a", 60, criterion_8a),
        ("8b", 60, criterion_8b),
        ("9", 60, criterion_9),
        ("10", 60, criterion_10),
    ];
    let mut failed = Vec::new();
    for (id, limit, f) in criteria {
        let start = Instant::now();
        let result = f();
        let took = start.elapsed();
        let result = match result {
            Ok(msg) if took > Duration::from_secs(limit) => Err(format!("{msg}; took {took:.2?} > {limit}s")),
            other => other,
        };
        match result {
            Ok(msg) => println!("PASS criterion {id} ({took:.2?}): {msg}"),
            Err(msg) => {
                println!("FAIL criterion {id} ({took:.2?}): {msg}");
                failed.push(id);
            }
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {}", failed.join(", "));
        std::process::exit(1);
    }
}
