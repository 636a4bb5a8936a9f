//! End-to-end acceptance suite; prints one line per criterion.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use sectional_cli::materialize::Resolver;
use sectional_cli::{load, run, Report, RunOptions, Selection, Source, Status};
use sectional_core::bundles::{
    convolve, graded_roundtrip_iso, validate_bundle, AlgebraPresentation, Bundle, BundleSpec, Grading, Section,
};
use sectional_core::rings::{Elem, Ring};
use sectional_core::semigroupoid::{
    samples, validate_semigroupoid, FiniteSemigroupoid, Homomorphism, SemigroupoidTables,
};
use sectional_core::theorems::{sample_associativity, smash_theorem, Certificate, Verdict};
use sectional_core::{Error, Rule};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn example_paths() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir().join("examples"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    v.sort();
    v
}

fn run_example(name: &str, selection: Selection, ring: Option<&str>) -> Report {
    let path = dir().join("examples").join(name);
    let sources = vec![Source { path: name.into(), text: Ok(std::fs::read_to_string(path).unwrap()) }];
    run("acceptance", &sources, &RunOptions { selection, ring: ring.map(String::from), ..RunOptions::default() })
}

fn verdicts(r: &Report) -> Result<Vec<&Verdict>, String> {
    r.tasks
        .iter()
        .map(|t| match (&t.status, &t.verdict) {
            (Status::Pass, Some(v)) => Ok(v),
            _ => Err(format!("task {} is {:?}: {}", t.id, t.status, t.message.clone().unwrap_or_default())),
        })
        .collect()
}

fn has_passing(c: &Certificate, names: &[&str]) -> Result<(), String> {
    for n in names {
        match c.check(n) {
            Some(k) if k.passed => {}
            Some(k) => return Err(format!("{}: {n} failed: {}", c.map, k.detail)),
            None => return Err(format!("{}: no {n} check", c.map)),
        }
    }
    Ok(())
}

// 1 ------------------------------------------------------------------------

fn product_table(t: &SemigroupoidTables) -> HashMap<(&str, &str), &str> {
    t.prod.iter().map(|[a, b, c]| ((a.as_str(), b.as_str()), c.as_str())).collect()
}

/// Confirms a reported witness against the raw tables.
fn witness_holds(t: &SemigroupoidTables, rule: Rule, w: &[String]) -> bool {
    let table = product_table(t);
    let arrow = |n: &str| t.arrows.iter().find(|a| a.name == n);
    let get = |a: &str, b: &str| table.get(&(a, b)).copied();
    match (rule, w) {
        (Rule::Associativity, [a, b, c]) => {
            let left = get(a, b).and_then(|ab| get(ab, c));
            let right = get(b, c).and_then(|bc| get(a, bc));
            left != right
        }
        (Rule::MissingProduct, [a, b]) => arrow(a).unwrap().src == arrow(b).unwrap().rng && get(a, b).is_none(),
        (Rule::ProductOnNonComposable, [a, b]) => arrow(a).unwrap().src != arrow(b).unwrap().rng && get(a, b).is_some(),
        (Rule::SourceOfProduct, [a, b]) => get(a, b).is_some_and(|c| arrow(c).unwrap().src != arrow(b).unwrap().src),
        (Rule::RangeOfProduct, [a, b]) => get(a, b).is_some_and(|c| arrow(c).unwrap().rng != arrow(a).unwrap().rng),
        _ => false,
    }
}

fn axiom_validators() -> Outcome {
    let corpus =
        [samples::trivial_monoid(), samples::pair_groupoid(2), samples::z2(), samples::semilattice(), samples::klein()];
    for t in &corpus {
        validate_semigroupoid(t).map_err(|e| format!("{} rejected: {e}", t.name))?;
    }
    // (structure, left, right, new product); an empty product deletes the entry
    let perturbations: [(usize, &str, &str, &str); 10] = [
        (0, "1", "1", ""),
        (1, "(1,1)", "(1,1)", "(1,2)"),
        (1, "(1,2)", "(2,1)", "(2,2)"),
        (2, "g", "u", "u"),
        (2, "u", "g", "u"),
        (3, "e", "e", ""),
        (3, "1", "e", ""),
        (4, "a", "b", "a"),
        (4, "c", "c", "a"),
        (4, "u", "u", "a"),
    ];
    for (k, a, b, c) in perturbations {
        let mut t = corpus[k].clone();
        let at = t.prod.iter().position(|p| p[0] == a && p[1] == b).ok_or("perturbation outside the table")?;
        if c.is_empty() {
            t.prod.remove(at);
        } else {
            t.prod[at][2] = c.into();
        }
        let label = format!("{} with {a}·{b} -> {c:?}", t.name);
        match validate_semigroupoid(&t) {
            Err(Error::Invalid(report)) => {
                let v = report.first().ok_or("empty report")?;
                ensure!(witness_holds(&t, v.rule, &v.witness), "{label}: witness {v} does not hold");
            }
            Err(e) => return Err(format!("{label}: unexpected error {e}")),
            Ok(_) => return Err(format!("{label}: accepted")),
        }
    }
    Ok("5 structures valid, 10 perturbations rejected with confirmed witnesses".into())
}

// 2 ------------------------------------------------------------------------

/// xorshift coefficients in -3..=3, independent of the library sampler.
struct Coefficients(u64);

impl Coefficients {
    fn next(&mut self) -> i64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        (self.0 % 7) as i64 - 3
    }
}

/// `(α∗β)(γ) = Σ_{ab=γ} α(a)β(b)` on a rank-1 trivial bundle, straight from the table.
fn naive_convolution(ring: &Ring, g: &FiniteSemigroupoid, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
    let mut out = ring.zero_vec(g.arrow_count());
    for a in g.arrows() {
        for b in g.arrows() {
            if let Some(c) = g.prod(a, b) {
                out[c] = ring.add(&out[c], &ring.mul(&x[a], &y[b]));
            }
        }
    }
    out
}

fn convolution_associativity() -> Outcome {
    let g = Arc::new(validate_semigroupoid(&samples::pair_groupoid(2)).unwrap());
    for ring in [Ring::zmod(4), Ring::rationals()] {
        let bundle = validate_bundle(&BundleSpec::trivial("pairs", &g), &ring, g.clone()).map_err(|e| e.to_string())?;
        let verdict = sample_associativity(&bundle, 200, 7).map_err(|e| e.to_string())?;
        ensure!(verdict.passed, "sampler failed over {}", ring.describe());
        let mut coeffs = Coefficients(0x9e37_79b9_7f4a_7c15);
        for k in 0..200 {
            let mut draw = || (0..4).map(|_| ring.from_int(coeffs.next())).collect::<Vec<_>>();
            let (a, b, c) = (draw(), draw(), draw());
            let left = naive_convolution(&ring, &g, &naive_convolution(&ring, &g, &a, &b), &c);
            let right = naive_convolution(&ring, &g, &a, &naive_convolution(&ring, &g, &b, &c));
            ensure!(left == right, "triple {k} over {} is not associative", ring.describe());
            let sec = |v: &[Elem]| Section::from_coordinates(&bundle, v).unwrap();
            let lib = convolve(&bundle, &convolve(&bundle, &sec(&a), &sec(&b)).unwrap(), &sec(&c)).unwrap();
            ensure!(lib.coordinates(&bundle) == left, "library convolution disagrees on triple {k}");
        }
    }
    Ok("200 + 200 seeded triples over Z/4 and Q, library and table convolution agree".into())
}

// 3 ------------------------------------------------------------------------

fn graded(
    name: &str,
    ring: &Ring,
    labels: &[&str],
    grading: SemigroupoidTables,
    degrees: Vec<usize>,
    product: impl Fn(usize, usize) -> Option<usize>,
) -> AlgebraPresentation {
    let n = labels.len();
    let g = Arc::new(validate_semigroupoid(&grading).unwrap());
    AlgebraPresentation::from_dense(name, ring, labels.iter().map(|s| s.to_string()).collect(), |i, j| {
        Ok(product(i, j).map_or(ring.zero_vec(n), |k| ring.unit_vec(n, k)))
    })
    .unwrap()
    .with_grading(Grading { semigroupoid: g, degrees })
    .unwrap()
}

fn graded_roundtrip() -> Outcome {
    let r = Ring::rationals();
    let group = graded("Rz2", &r, &["u", "g"], samples::z2(), vec![0, 1], |i, j| Some(i ^ j));
    let matrices =
        graded("M2", &r, &["e11", "e12", "e21", "e22"], samples::pair_groupoid(2), vec![0, 1, 2, 3], |p, q| {
            (p % 2 == q / 2).then_some((p / 2) * 2 + q % 2)
        });
    for a in [group, matrices] {
        let map = graded_roundtrip_iso(&a).map_err(|e| e.to_string())?;
        let cert = map.certify().map_err(|e| e.to_string())?;
        has_passing(&cert, &["multiplicative", "inverse-after-map", "map-after-inverse", "graded", "bijective"])?;
        let (s, t) = (map.source(), map.target());
        for i in 0..s.rank() {
            ensure!(
                map.apply_inverse(&map.apply(&s.unit_vec(i))) == Some(s.unit_vec(i)),
                "{}: composite off at {i}",
                a.name()
            );
        }
        for j in 0..t.rank() {
            ensure!(
                map.apply(&map.apply_inverse(&t.unit_vec(j)).unwrap()) == t.unit_vec(j),
                "{}: composite off at {j}",
                a.name()
            );
        }
    }
    Ok("R[Z/2] and M2 over P2 round trip as graded isomorphisms".into())
}

// 4 ------------------------------------------------------------------------

fn tensor() -> Outcome {
    let report = run_example("tensor.json", Selection::Theorem("tensor".into()), None);
    let text = std::fs::read_to_string(dir().join("examples/tensor.json")).unwrap();
    let (ws, ring) = load(&text, None)?;
    let r = Resolver::new(&ws, ring);
    let vs = verdicts(&report)?;
    ensure!(vs.len() == 3, "expected three tensor instances, found {}", vs.len());
    let mut seen = Vec::new();
    for (task, v) in report.tasks.iter().zip(vs) {
        has_passing(&v.certificates[0], &["multiplicative", "inverse-after-map", "map-after-inverse", "bijective"])?;
        let b = r.bundle(&task.targets[0]).map_err(|e| e.to_string())?;
        let e = r.semigroupoid(&task.targets[1]).map_err(|e| e.to_string())?;
        let (left, right) = (b.total_rank(), e.arrow_count());
        ensure!(
            v.ranks["product-bundle"] == left * right,
            "{}: {} != {left}·{right}",
            task.id,
            v.ranks["product-bundle"]
        );
        seen.push(format!("{left}·{right}={}", left * right));
    }
    ensure!(seen.contains(&"4·2=8".to_string()), "no P2 x Z/2 instance");
    Ok(format!("T certified on 3 instances, ranks {}", seen.join(", ")))
}

// 5 ------------------------------------------------------------------------

fn crossed() -> Outcome {
    let report = run_example("crossed.json", Selection::Theorem("crossed".into()), None);
    let text = std::fs::read_to_string(dir().join("examples/crossed.json")).unwrap();
    let (ws, ring) = load(&text, None)?;
    let r = Resolver::new(&ws, ring);
    let vs = verdicts(&report)?;
    ensure!(vs.len() == 3, "expected three crossed instances, found {}", vs.len());
    let mut ranks = Vec::new();
    for (task, v) in report.tasks.iter().zip(vs) {
        ensure!(v.certificates.len() == 3, "{}: expected Psi, Phi and the L map", task.id);
        for c in &v.certificates {
            has_passing(c, &["multiplicative", "inverse-after-map", "map-after-inverse"])?;
        }
        let theta = r.bundle_action(&task.targets[0]).map_err(|e| e.to_string())?;
        let base = theta.base_action();
        let expected: usize =
            base.actor().base().arrows().flat_map(|s| base.domain(s)).map(|x| theta.bundle().rank(x)).sum();
        ensure!(
            v.ranks["crossed-product"] == expected,
            "{}: crossed product rank {} != {expected}",
            task.id,
            v.ranks["crossed-product"]
        );
        ensure!(v.ranks["semidirect-sectional"] == expected, "{}: semidirect rank differs", task.id);
        ranks.push(expected.to_string());
    }
    Ok(format!("Psi, Phi and the L map certified, ranks {}", ranks.join("/")))
}

// 6 ------------------------------------------------------------------------

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

/// Searches every relabeling of arrows and vertices for one matching all tables.
fn tables_isomorphic(a: &FiniteSemigroupoid, b: &FiniteSemigroupoid) -> bool {
    if a.arrow_count() != b.arrow_count() || a.vertex_count() != b.vertex_count() {
        return false;
    }
    permutations(a.vertex_count()).iter().any(|pv| {
        permutations(a.arrow_count()).iter().any(|pa| {
            a.arrows().all(|x| pv[a.src(x)] == b.src(pa[x]) && pv[a.rng(x)] == b.rng(pa[x]))
                && a.arrows().all(|x| a.arrows().all(|y| a.prod(x, y).map(|z| pa[z]) == b.prod(pa[x], pa[y])))
        })
    })
}

fn smash() -> Outcome {
    let r = Ring::rationals();
    let z2 = Arc::new(validate_semigroupoid(&samples::z2()).unwrap());
    let b: Bundle = validate_bundle(&BundleSpec::trivial("flat", &z2), &r, z2.clone()).map_err(|e| e.to_string())?;
    let t = smash_theorem(&b, &Homomorphism::identity(z2)).map_err(|e| e.to_string())?;
    ensure!(t.verdict.ranks["smash"] == 4 && t.verdict.ranks["skew-sectional"] == 4, "ranks {:?}", t.verdict.ranks);
    has_passing(
        &t.verdict.certificates[0],
        &["multiplicative", "inverse-after-map", "map-after-inverse", "graded", "bijective"],
    )?;
    let p2 = validate_semigroupoid(&samples::pair_groupoid(2)).unwrap();
    ensure!(tables_isomorphic(&t.skew.semigroupoid, &p2), "skew product is not the pair groupoid");
    Ok("ranks 4 = 4, graded isomorphism certified, skew product matches P2 by table search".into())
}

// 7 ------------------------------------------------------------------------

fn quotient() -> Outcome {
    let mut lines = Vec::new();
    for ring in [None, Some("zmod:5")] {
        let report = run_example("quotient.json", Selection::Theorem("quotient".into()), ring);
        let vs = verdicts(&report)?;
        ensure!(!vs.is_empty(), "no quotient instances");
        for v in &vs {
            has_passing(&v.certificates[0], &["multiplicative", "surjective"])?;
            ensure!(v.checks.iter().all(|c| c.passed), "{}: {:?}", v.instance, v.first_failure());
            ensure!(
                v.ranks["kernel"] + v.ranks["quotient-sectional"] == v.ranks["sectional"],
                "{}: rank-nullity fails",
                v.instance
            );
        }
        lines.push(format!("{} instances over {}", vs.len(), ring.unwrap_or("q")));
    }
    Ok(format!("T onto and kernel spanned by the generators: {}", lines.join(", ")))
}

// 8 ------------------------------------------------------------------------

fn germ() -> Outcome {
    let report = run_example("germ.json", Selection::Theorem("germ".into()), None);
    let vs = verdicts(&report)?;
    let v = vs.first().ok_or("no germ task")?;
    let got = (v.ranks["crossed-product"], v.ranks["ideal"], v.ranks["germ-algebra"]);
    ensure!(got == (3, 1, 2), "ranks {got:?}");
    has_passing(&v.certificates[0], &["multiplicative", "surjective"])?;
    ensure!(v.checks.iter().any(|c| c.name == "kernel-is-ideal" && c.passed), "kernel is not the order ideal");
    Ok("ranks 3/1/2; the map is onto with kernel equal to the ideal".into())
}

// 9 ------------------------------------------------------------------------

fn determinism() -> Outcome {
    let inputs: Vec<String> = example_paths()
        .iter()
        .map(|p| Path::new("examples").join(p.file_name().unwrap()).display().to_string())
        .collect();
    let once = || {
        Command::new(env!("CARGO_BIN_EXE_sectional"))
            .current_dir(dir())
            .args(["verify", "all", "--input"])
            .args(&inputs)
            .args(["--seed", "7", "--no-timestamp"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (once()?, once()?);
    ensure!(a.status.code() == Some(0), "exit {:?}: {}", a.status.code(), String::from_utf8_lossy(&a.stdout));
    ensure!(a.stdout == b.stdout, "reports differ between runs");
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).map_err(|e| e.to_string())?;
    ensure!(report.get("timestamp").is_none(), "timestamp present");
    Ok(format!(
        "{} files, {} tasks, identical {}-byte reports",
        inputs.len(),
        report["summary"]["total"],
        a.stdout.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("axiom validators", axiom_validators),
        ("convolution associativity", convolution_associativity),
        ("graded round trip", graded_roundtrip),
        ("tensor", tensor),
        ("crossed product", crossed),
        ("smash product", smash),
        ("quotient", quotient),
        ("germs", germ),
        ("cli determinism", determinism),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
