//! Acceptance checks, one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness. The process exits 0 whatever the
//! outcome so the report always lands in the test log; set
//! `EPT_ACCEPTANCE_STRICT=1` to exit 1 when any criterion fails, and
//! `EPT_ACCEPTANCE_ONLY=3,7` to run a subset.

use std::collections::HashSet;
use std::process::Command;
use std::time::{Duration, Instant};

use ept_lab::assembly::{generate, AssemblyParams};
use ept_lab::ast::{alpha_number, parse_sexpr, reify};
use ept_lab::belief::{beta_from_epsilon, epsilon_from_beta, run_chain, CouplingParams, PriorMode, Schedule};
use ept_lab::communities::{girvan_newman, Partition};
use ept_lab::experiments::{abductive_grid, firewall_delta, prior_response};
use ept_lab::graph::degrees;
use ept_lab::netstats::fit_power_law;
use ept_lab::{DagBuilder, ProofDag};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn path_graph(n: usize) -> ProofDag {
    let mut b = DagBuilder::new();
    let ids: Vec<_> = (0..n).map(|i| b.named(&format!("v{i}"))).collect();
    for w in ids.windows(2) {
        b.add_edge(w[0], w[1]);
    }
    b.build().unwrap()
}

fn random_dag(n: usize, p: f64, seed: u64) -> ProofDag {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = DagBuilder::new();
    let ids: Vec<_> = (0..n).map(|i| b.named(&format!("n{i}"))).collect();
    for j in 1..n {
        for i in 0..j {
            if rng.random_bool(p) {
                b.add_edge(ids[i], ids[j]);
            }
        }
    }
    b.build().unwrap()
}

/// Two `size`-cliques (edges oriented low to high index) joined by one edge.
fn two_cliques(size: usize) -> ProofDag {
    let mut b = DagBuilder::new();
    let ids: Vec<_> = (0..2 * size).map(|i| b.named(&format!("c{i}"))).collect();
    for half in [0, size] {
        for i in half..half + size {
            for j in i + 1..half + size {
                b.add_edge(ids[i], ids[j]);
            }
        }
    }
    b.add_edge(ids[size - 1], ids[size]);
    b.build().unwrap()
}

fn assembly_5000() -> ProofDag {
    generate(&AssemblyParams { n_nodes: 5000, mean_deps: 3.0, copy_prob: 0.8, seed: 0 }).unwrap()
}

fn c1_mapping() -> Outcome {
    let e1 = epsilon_from_beta(1.0).unwrap();
    let b2 = beta_from_epsilon(1e-2).unwrap();
    let e0 = epsilon_from_beta(0.0).unwrap();
    let mut worst: f64 = 0.0;
    for k in 1..2000 {
        let eps = k as f64 / 4000.0;
        let back = epsilon_from_beta(beta_from_epsilon(eps).unwrap()).unwrap();
        worst = worst.max((back - eps).abs());
    }
    for k in 0..200 {
        let beta = k as f64 * 0.05;
        let back = beta_from_epsilon(epsilon_from_beta(beta).unwrap()).unwrap();
        worst = worst.max((back - beta).abs() * epsilon_from_beta(beta).unwrap());
    }
    let closed_e1 = 1.0 / (1.0 + 2f64.exp());
    let closed_b2 = 0.5 * 99f64.ln();
    let pass = e0 == 0.5
        && (e1 - 0.1192029).abs() < 1e-7
        && (b2 - 2.2975599).abs() < 1e-7
        && (e1 - closed_e1).abs() < 1e-15
        && (b2 - closed_b2).abs() < 1e-14
        && worst < 1e-12;
    outcome(pass, format!("eps(1)={e1:.10} beta(0.01)={b2:.10} round-trip max err {worst:.2e}"))
}

fn c2_single_spin() -> Outcome {
    let dag = path_graph(1);
    let mut pass = true;
    let mut parts = Vec::new();
    for p in [0.25, 0.5, 0.75, 0.9] {
        let params = CouplingParams::symmetric(1.0, p);
        let schedule =
            Schedule { burn_in_sweeps: 100, n_samples: 12_500, sample_stride_sweeps: 1, n_replicas: 8, seed: 7 };
        let b = run_chain(&dag, &params, &schedule).unwrap().beliefs[0];
        pass &= (b - p).abs() <= 0.01;
        parts.push(format!("p={p}: {b:.4}"));
    }
    outcome(pass, parts.join(", "))
}

/// Exact marginals P(s_i = +1) by enumerating all 2^N states of
/// E = -beta * sum_edges s_i s_j - h * sum_i s_i.
fn exact_marginals(dag: &ProofDag, beta: f64, h: f64) -> Vec<f64> {
    let n = dag.node_count();
    let edges: Vec<(usize, usize)> = dag.edges().map(|(a, b)| (a.index(), b.index())).collect();
    let mut z = 0.0;
    let mut up = vec![0.0; n];
    for mask in 0u32..1 << n {
        let s = |i: usize| if mask >> i & 1 == 1 { 1.0 } else { -1.0 };
        let coupling: f64 = edges.iter().map(|&(a, b)| s(a) * s(b)).sum();
        let field: f64 = (0..n).map(s).sum();
        let w = (beta * coupling + h * field).exp();
        z += w;
        for (i, u) in up.iter_mut().enumerate() {
            if mask >> i & 1 == 1 {
                *u += w;
            }
        }
    }
    up.iter().map(|u| u / z).collect()
}

fn c3_gibbs_oracle() -> Outcome {
    let prior: f64 = 0.75;
    let h = 0.5 * (prior / (1.0 - prior)).ln();
    let mut worst: f64 = 0.0;
    let mut worst_at = String::new();
    for g in 0..20u64 {
        let n = 4 + (g as usize % 9);
        let dag = random_dag(n, 0.2, 1000 + g);
        for beta in [0.5, 1.0, 2.0] {
            let params = CouplingParams::symmetric(beta, prior);
            let schedule =
                Schedule { burn_in_sweeps: 1000, n_samples: 125_000, sample_stride_sweeps: 1, n_replicas: 8, seed: g };
            let chain = run_chain(&dag, &params, &schedule).unwrap().beliefs;
            let exact = exact_marginals(&dag, beta, h);
            let err = chain.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            if err > worst {
                worst = err;
                worst_at = format!("graph {g} (N={n}, {} edges) beta={beta}", dag.edge_count());
            }
        }
    }
    outcome(worst <= 0.02, format!("60 cases, max |chain - exact| = {worst:.4} at {worst_at}"))
}

fn c4_ev4() -> Outcome {
    let text = include_str!("../data/ev4.sexp");
    let r = reify(&alpha_number(&parse_sexpr(text).unwrap())).unwrap();
    let dag = &r.dag;
    let ev2 = dag.nodes().filter(|&n| dag.label(n) == "Top.ev_2").count();

    // Kahn's algorithm on the raw edge list
    let n = dag.node_count();
    let mut indeg = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (a, b) in dag.edges() {
        indeg[b.index()] += 1;
        out[a.index()].push(b.index());
    }
    let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for &w in &out[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                stack.push(w);
            }
        }
    }
    let acyclic = seen == n;

    let mut keys = HashSet::new();
    let unique = dag.nodes().all(|v| {
        let children: Vec<usize> = r.children(v).iter().map(|c| c.index()).collect();
        keys.insert((dag.label(v).to_string(), children))
    });
    outcome(
        ev2 == 1 && acyclic && unique,
        format!(
            "{n} nodes, {} edges; Top.ev_2 nodes={ev2} acyclic={acyclic} unique (label, children)={unique}",
            dag.edge_count()
        ),
    )
}

/// Exact Zipf sampler on {1, 2, ...} with P(k) proportional to k^-alpha
/// (Devroye's rejection method).
fn zipf(alpha: f64, rng: &mut impl Rng) -> usize {
    let b = 2f64.powf(alpha - 1.0);
    loop {
        let u: f64 = 1.0 - rng.random::<f64>();
        let v: f64 = rng.random();
        let x = u.powf(-1.0 / (alpha - 1.0)).floor();
        if x > 1e12 {
            continue;
        }
        let t = (1.0 + 1.0 / x).powf(alpha - 1.0);
        if v * x * (t - 1.0) / (b - 1.0) <= t / b {
            return x as usize;
        }
    }
}

fn c5_power_law() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let sample: Vec<usize> = (0..10_000).map(|_| zipf(2.2, &mut rng)).collect();
    let fit = fit_power_law(&sample).unwrap();
    outcome(
        (fit.alpha - 2.2).abs() <= 0.1,
        format!(
            "alpha_hat={:.4} +/- {:.4} (d_min={}, n_tail={}, ks={:.4})",
            fit.alpha, fit.alpha_stderr, fit.d_min, fit.n_tail, fit.ks_distance
        ),
    )
}

fn c6_assembly_signature() -> Outcome {
    let dag = generate(&AssemblyParams::default()).unwrap();
    let table = degrees(&dag);
    let fit = fit_power_law(&table.out_degree).unwrap();

    // every node after the first draws 1 + Geometric dependencies, so the
    // shifted in-degree is compared against a geometric law on {0, 1, ...}
    let shifted: Vec<usize> = table.in_degree[1..].iter().map(|&d| d - 1).collect();
    let n = shifted.len();
    let mean = shifted.iter().sum::<usize>() as f64 / n as f64;
    let q = mean / (1.0 + mean);
    let max = *shifted.iter().max().unwrap();
    let mut counts = vec![0usize; max + 1];
    for &d in &shifted {
        counts[d] += 1;
    }
    let mut cum = 0usize;
    let mut ks: f64 = 0.0;
    for (k, c) in counts.iter().enumerate() {
        let model_below = 1.0 - q.powi(k as i32);
        ks = ks.max((cum as f64 / n as f64 - model_below).abs());
        cum += c;
        let model_upto = 1.0 - q.powi(k as i32 + 1);
        ks = ks.max((cum as f64 / n as f64 - model_upto).abs());
    }
    let critical = 1.358 / (n as f64).sqrt();
    let alpha_ok = (1.8..=2.2).contains(&fit.alpha);
    outcome(
        alpha_ok && ks < critical,
        format!(
            "out-degree alpha_hat={:.4} (d_min={}, n_tail={}); in-degree geometric KS={ks:.4} vs critical {critical:.4}",
            fit.alpha, fit.d_min, fit.n_tail
        ),
    )
}

const EPS_GRID: [f64; 6] = [0.5, 0.2, 0.1, 0.05, 0.02, 0.01];

fn c7_ept() -> Outcome {
    let path = path_graph(1000);
    // without a prior field an isolated node sits at one half
    let baseline = 0.5;
    let schedule =
        Schedule { burn_in_sweeps: 10_000, n_samples: 1000, sample_stride_sweeps: 10, n_replicas: 96, seed: 11 };
    let mut path_ok = true;
    let mut parts = Vec::new();
    for eps in EPS_GRID {
        let params = CouplingParams::from_error_rates(eps, eps, 0.75).unwrap().with_mode(PriorMode::InitOnly);
        let s = run_chain(&path, &params, &schedule).unwrap();
        let t = s.theorem_belief.unwrap();
        path_ok &= (t - baseline).abs() <= 0.05;
        parts.push(format!("{eps}:{t:.3}"));
    }

    let mut field = Vec::new();
    for eps in [0.2, 0.01] {
        let params = CouplingParams::from_error_rates(eps, eps, 0.75).unwrap();
        let s = run_chain(&path, &params, &Schedule::default()).unwrap();
        field.push(format!("{eps}:{:.3}", s.theorem_belief.unwrap()));
    }
    println!("      note: path theorem belief with the prior as a field (baseline 0.75): {}", field.join(" "));

    let asm = assembly_5000();
    let params = CouplingParams::from_error_rates(0.01, 0.01, 0.75).unwrap().with_mode(PriorMode::InitOnly);
    let s = run_chain(&asm, &params, &Schedule::default()).unwrap();
    let f2 = s.theorem_belief.unwrap();
    outcome(
        path_ok && f2 > 0.99,
        format!("path (init-only, baseline {baseline}) eps:theorem {}; assembly f2={f2:.4}", parts.join(" ")),
    )
}

fn c8_prior() -> Outcome {
    let asm = assembly_5000();
    let priors = [0.5, 0.55, 0.6, 0.7, 0.8, 0.9, 0.95];
    let rows = prior_response(&asm, 0.01, &priors, PriorMode::InitOnly, &Schedule::default()).unwrap();
    let pass = rows.iter().filter(|r| r.prior >= 0.6).all(|r| r.theorem_belief > 0.95);
    let parts: Vec<String> = rows.iter().map(|r| format!("{}:{:.3}", r.prior, r.theorem_belief)).collect();
    outcome(pass, format!("prior:theorem {}", parts.join(" ")))
}

fn c9_abductive() -> Outcome {
    let asm = assembly_5000();
    let schedule = Schedule { n_replicas: 32, seed: 1, ..Schedule::default() };
    let g = abductive_grid(&asm, &[0.05], &[0.05, 0.001], 0.75, PriorMode::InitOnly, &schedule).unwrap();
    let lo = g.eps_imp.iter().position(|&e| e == 0.001).unwrap();
    let hi = g.eps_imp.iter().position(|&e| e == 0.05).unwrap();
    let strong = g.theorem[0][lo];
    let weak = g.theorem[0][hi];
    let se = (g.theorem_stderr[0][lo].powi(2) + g.theorem_stderr[0][hi].powi(2)).sqrt();
    let drop = weak - strong;
    println!(
        "      note: mean belief over all nodes: eps_imp=0.001 -> {:.4}, eps_imp=0.05 -> {:.4}",
        g.mean[0][lo], g.mean[0][hi]
    );
    outcome(
        drop >= 3.0 * se && drop > 0.0,
        format!(
            "eps_dep=0.05: theorem at eps_imp=0.001 {strong:.4}, at eps_imp=0.05 {weak:.4}; drop {drop:.4} vs 3 se = {:.4}",
            3.0 * se
        ),
    )
}

fn c10_firewall() -> Outcome {
    let cliques = two_cliques(20);
    let assignment: Vec<Option<usize>> = (0..40).map(|i| Some(i / 20)).collect();
    let part = Partition::from_assignment(&cliques, assignment);
    let schedule = Schedule { burn_in_sweeps: 200, n_samples: 200, sample_stride_sweeps: 2, n_replicas: 8, seed: 3 };
    let m = firewall_delta(&cliques, &part, 1.0, 10, &schedule).unwrap();
    let z_mod = m.delta_l1 / m.delta_l1_stderr;

    let random = random_dag(200, 0.05, 77);
    let mut rng = ChaCha8Rng::seed_from_u64(78);
    let mut labels: Vec<usize> = (0..200).map(|i| i % 4).collect();
    labels.shuffle(&mut rng);
    let part = Partition::from_assignment(&random, labels.into_iter().map(Some).collect());
    let r = firewall_delta(&random, &part, 1.0, 10, &schedule).unwrap();
    let z_null = r.delta_l1 / r.delta_l1_stderr;
    outcome(
        z_mod >= 3.0 && z_null.abs() < 2.0,
        format!(
            "two cliques dL1={:.3} +/- {:.3} (z={z_mod:.1}); random graph dL1={:.4} +/- {:.4} (z={z_null:.2})",
            m.delta_l1, m.delta_l1_stderr, r.delta_l1, r.delta_l1_stderr
        ),
    )
}

/// Undirected modularity of a labelled partition.
fn modularity(n: usize, edges: &[(usize, usize)], labels: &[usize]) -> f64 {
    let m = edges.len() as f64;
    let k = labels.iter().max().unwrap() + 1;
    let mut inside = vec![0.0; k];
    let mut degree = vec![0.0; k];
    for &(a, b) in edges {
        if labels[a] == labels[b] {
            inside[labels[a]] += 1.0;
        }
        degree[labels[a]] += 1.0;
        degree[labels[b]] += 1.0;
    }
    debug_assert_eq!(labels.len(), n);
    (0..k).map(|c| inside[c] / m - (degree[c] / (2.0 * m)).powi(2)).sum()
}

/// Best partition over every set partition of `n` nodes, enumerated as
/// restricted growth strings.
fn exhaustive_best(n: usize, edges: &[(usize, usize)]) -> (f64, Vec<usize>) {
    let mut labels = vec![0usize; n];
    let mut best = (f64::NEG_INFINITY, labels.clone());
    loop {
        let q = modularity(n, edges, &labels);
        if q > best.0 + 1e-12 {
            best = (q, labels.clone());
        }
        // next restricted growth string
        let mut i = n - 1;
        loop {
            if i == 0 {
                return best;
            }
            let limit = labels[..i].iter().max().unwrap() + 1;
            if labels[i] < limit {
                labels[i] += 1;
                for l in &mut labels[i + 1..] {
                    *l = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

fn c11_girvan_newman() -> Outcome {
    let dag = two_cliques(5);
    let edges: Vec<(usize, usize)> = dag.edges().map(|(a, b)| (a.index(), b.index())).collect();
    let (best_q, best) = exhaustive_best(10, &edges);
    let gn = girvan_newman(&dag);
    let gn_labels: Vec<usize> = gn.assignment.iter().map(|a| a.unwrap()).collect();
    let same = |a: &[usize], b: &[usize]| (0..10).all(|i| (0..10).all(|j| (a[i] == a[j]) == (b[i] == b[j])));
    let cliques: Vec<usize> = (0..10).map(|i| i / 5).collect();
    let pass = same(&gn_labels, &best) && same(&gn_labels, &cliques) && (gn.modularity - best_q).abs() < 1e-12;
    outcome(
        pass,
        format!(
            "GN Q={:.6} modules={}; exhaustive best Q={best_q:.6} over 115975 partitions",
            gn.modularity,
            gn.module_count()
        ),
    )
}

fn c12_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_ept-lab");
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap().to_string();
    let runs: Vec<Vec<String>> = [
        "gen --nodes 500 --seed 21 -o {d}/g.json",
        "communities {d}/g.json --method louvain -o {d}/p.json",
        "simulate {d}/g.json --samples 100 --replicas 4 --seed 2 -o {d}/sim.csv",
        "sweep {d}/g.json --eps 0.2,0.02 --samples 50 --replicas 4 --seed 3 -o {d}/sweep.csv",
        "prior-curve {d}/g.json --priors 0.55,0.9 --samples 50 --replicas 4 --seed 4 -o {d}/prior.csv",
        "grid {d}/g.json --eps-dep 0.1,0.01 --eps-imp 0.1,0.01 --samples 30 --replicas 2 --seed 5 -o {d}/grid.csv",
        "firewall {d}/g.json --partition {d}/p.json --n-flip 4 --samples 30 --replicas 2 --seed 6 -o {d}/fw.csv",
    ]
    .iter()
    .map(|r| r.replace("{d}", &d).split_whitespace().map(String::from).collect())
    .collect();

    let mut first = Vec::new();
    for args in &runs {
        let st = Command::new(bin).args(args).env("EPT_LAB_THREADS", "4").status().unwrap();
        if !st.success() {
            return outcome(false, format!("{} failed", args[0]));
        }
        let out = args.last().unwrap().clone();
        first.push((out.clone(), std::fs::read(&out).unwrap()));
    }
    let mut identical = 0;
    for (out, bytes) in &first {
        let manifest: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(format!("{out}.manifest.json")).unwrap()).unwrap();
        let argv: Vec<&str> = manifest["argv"].as_array().unwrap()[1..].iter().map(|v| v.as_str().unwrap()).collect();
        std::fs::remove_file(out).unwrap();
        let st = Command::new(bin).args(&argv).env("EPT_LAB_THREADS", "1").status().unwrap();
        if st.success() && std::fs::read(out).unwrap() == *bytes {
            identical += 1;
        }
    }
    outcome(
        identical == first.len(),
        format!("{identical}/{} seeded outputs byte-identical on manifest re-run", first.len()),
    )
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 12] = [
        ("error-rate mapping", Duration::from_secs(1), c1_mapping),
        ("single-spin exactness", Duration::from_secs(1), c2_single_spin),
        ("Gibbs oracle equivalence", Duration::from_secs(120), c3_gibbs_oracle),
        ("ev_4 pipeline fidelity", Duration::from_secs(1), c4_ev4),
        ("power-law recovery", Duration::from_secs(5), c5_power_law),
        ("assembly-model signature", Duration::from_secs(10), c6_assembly_signature),
        ("EPT presence/absence", Duration::from_secs(600), c7_ept),
        ("prior susceptibility", Duration::from_secs(600), c8_prior),
        ("abductive paradox", Duration::from_secs(900), c9_abductive),
        ("firewall sign and null", Duration::from_secs(300), c10_firewall),
        ("Girvan-Newman exactness", Duration::from_secs(10), c11_girvan_newman),
        ("determinism", Duration::from_secs(60), c12_determinism),
    ];
    let only: Option<Vec<usize>> =
        std::env::var("EPT_ACCEPTANCE_ONLY").ok().map(|v| v.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let mut failed = 0;
    let mut ran = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        if only.as_ref().is_some_and(|o| !o.contains(&(i + 1))) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let o = check();
        let took = start.elapsed();
        let pass = o.pass && took <= *budget;
        if !pass {
            failed += 1;
        }
        println!(
            "{} {:>2} {name}: {} [{:.2}s, budget {}s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            took.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} passed, {failed} failed", ran - failed);
    if failed > 0 && std::env::var("EPT_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
