//! Command-line front end: load a simplicial complex, enumerate skeleton
//! components, build both model categories, run the verification suites,
//! compute and diff Ext tables, and print the quiver presentation.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use skeleta::flow::{
    count_flow_intersections, energy_drift, integrate_orbit, FlowParams, PhasePoint,
};
use skeleta::koszul::KoszulSpec;
use skeleta::linalg::Backend;
use skeleta::lincat::{build_monomial_category, check_category_axioms, LinearCategory};
use skeleta::monomial::{
    check_axiom1, check_axiom2, check_axiom3, check_generation, check_notcomp,
    koszul_acyclicity_by_subset, Candidate,
};
use skeleta::poset::build_poset_model;
use skeleta::simplicial::{Face, SimplicialComplex};
use skeleta::toric::{
    build_b_category, build_b_dg_category, cohomology_weight, koszul_support_check, ToricCover,
};

#[derive(Parser)]
#[command(name = "skeleta", version, about = "simplicial skeleta and their toric mirrors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum OutFormat {
    Tsv,
    Json,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Pipeline {
    A,
    B,
    Both,
}

#[derive(Parser)]
struct InputArgs {
    /// JSON file {"n": <int>, "facets": [[v, ...], ...]} with 1-based
    /// vertices; the loader closes the facet list downward.
    #[arg(long)]
    input: PathBuf,
    /// Accept complexes that omit some vertices of [n].
    #[arg(long, default_value_t = false)]
    allow_missing_vertices: bool,
}

#[derive(Parser)]
struct FieldArg {
    /// Rank backend: `q` for exact rationals, `fp:P` for the prime field.
    #[arg(long, default_value = "q")]
    field: String,
}

impl FieldArg {
    fn backend(&self) -> Result<Backend, String> {
        if self.field == "q" {
            return Ok(Backend::Rational);
        }
        if let Some(p) = self.field.strip_prefix("fp:") {
            let p: u64 = p.parse().map_err(|_| format!("bad prime in --field {}", self.field))?;
            if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
                return Err(format!("{p} is not prime"));
            }
            return Ok(Backend::Prime(p));
        }
        Err(format!("unknown field {}; use q or fp:P", self.field))
    }
}

#[derive(Subcommand)]
enum Command {
    /// List the smooth components of the skeleton with sample points.
    Components {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = OutFormat::Tsv)]
        out: OutFormat,
        #[arg(long, default_value_t = 0.25)]
        epsilon: f64,
    },
    /// Run the full verification battery on both model categories.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        field: FieldArg,
        /// Check this category dump instead of the freshly built toric
        /// category (structure and axioms must still hold).
        #[arg(long)]
        category_dump: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutFormat::Tsv)]
        out: OutFormat,
    },
    /// Print the graded Ext table between all generator pairs.
    ExtTable {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        field: FieldArg,
        #[arg(long, value_enum, default_value_t = Pipeline::Both)]
        pipeline: Pipeline,
        #[arg(long, value_enum, default_value_t = OutFormat::Tsv)]
        out: OutFormat,
    },
    /// Print the degree-0 arrow quiver with relations and the
    /// higher-degree classes.
    Quiver {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = OutFormat::Tsv)]
        out: OutFormat,
    },
    /// Build a Koszul complex in the toric category and test acyclicity
    /// against the support criterion.
    Koszul {
        #[command(flatten)]
        input: InputArgs,
        /// Comma-separated Koszul directions, e.g. 1,2.
        #[arg(long)]
        i_set: String,
        /// Comma-separated base subset (may be empty).
        #[arg(long, default_value = "")]
        j_set: String,
    },
    /// Čech cohomology of the structure sheaf at one weight.
    Cohomology {
        #[command(flatten)]
        input: InputArgs,
        /// Comma-separated integer weight, e.g. -1,-1.
        #[arg(long)]
        weight: String,
        #[arg(long, value_enum, default_value_t = OutFormat::Tsv)]
        out: OutFormat,
    },
    /// Numeric checks of the skeleton flow (orbit margins, intersection
    /// counts, energy drift).
    FlowCheck {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 0.25)]
        epsilon: f64,
        #[arg(long, default_value_t = 8.0)]
        w: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 40)]
        grid: usize,
        /// Write the sampled orbit of the first transversal point as CSV
        /// rows `t, x…, y…`.
        #[arg(long)]
        dump_orbit: Option<PathBuf>,
    },
}

#[derive(Deserialize)]
struct ComplexFile {
    n: usize,
    facets: Vec<Vec<usize>>,
}

fn load_complex(args: &InputArgs) -> Result<SimplicialComplex, String> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| format!("cannot read {}: {e}", args.input.display()))?;
    let file: ComplexFile =
        serde_json::from_str(&text).map_err(|e| format!("bad complex file: {e}"))?;
    let faces: Vec<Face> = file
        .facets
        .iter()
        .map(|f| {
            for &v in f {
                if v == 0 || v > file.n {
                    return Err(format!("vertex {v} out of range 1..={}", file.n));
                }
            }
            Ok(Face::from_verts(f))
        })
        .collect::<Result<_, _>>()?;
    let complex =
        SimplicialComplex::closure(file.n, &faces).map_err(|e| format!("bad complex: {e}"))?;
    if !args.allow_missing_vertices {
        complex
            .require_all_vertices()
            .map_err(|e| format!("{e}"))?;
    }
    Ok(complex)
}

fn parse_face(text: &str) -> Result<Face, String> {
    if text.trim().is_empty() {
        return Ok(Face::EMPTY);
    }
    let verts: Vec<usize> = text
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| format!("bad vertex {t}")))
        .collect::<Result<_, _>>()?;
    Ok(Face::from_verts(&verts))
}

fn parse_weight(text: &str, n: usize) -> Result<Vec<i64>, String> {
    let w: Vec<i64> = text
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| format!("bad weight entry {t}")))
        .collect::<Result<_, _>>()?;
    if w.len() != n {
        return Err(format!("weight has {} entries, complex has n = {n}", w.len()));
    }
    Ok(w)
}

fn dims_cell(dims: &BTreeMap<i64, usize>) -> String {
    if dims.is_empty() {
        return "0".into();
    }
    dims.iter().map(|(d, k)| format!("{d}:{k}")).collect::<Vec<_>>().join(",")
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("SKELETA_THREADS") {
        if let Ok(t) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Components { input, out, epsilon } => {
            let k = load_complex(&input)?;
            let comps = k.components();
            match out {
                OutFormat::Tsv => {
                    println!("sigma\tsigns\tpoint_x\tpoint_y");
                    for c in &comps {
                        let signs: Vec<String> = c
                            .signs
                            .iter()
                            .map(|(v, s)| format!("{v}:{}", if *s > 0 { "+" } else { "-" }))
                            .collect();
                        let (x, y) = c.sample_point(k.n(), epsilon);
                        println!(
                            "{}\t{}\t{}\t{}",
                            c.sigma,
                            signs.join(","),
                            fmt_vec(&x),
                            fmt_vec(&y)
                        );
                    }
                }
                OutFormat::Json => {
                    let rows: Vec<serde_json::Value> = comps
                        .iter()
                        .map(|c| {
                            let (x, y) = c.sample_point(k.n(), epsilon);
                            serde_json::json!({
                                "sigma": c.sigma.verts(),
                                "signs": c.signs,
                                "point": {"x": x, "y": y},
                            })
                        })
                        .collect();
                    println!("{}", serde_json::to_string_pretty(&rows).unwrap());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { input, field, category_dump, out } => {
            let k = load_complex(&input)?;
            let backend = field.backend()?;
            verify(&k, backend, category_dump.as_deref(), out)
        }
        Command::ExtTable { input, field, pipeline, out } => {
            let k = load_complex(&input)?;
            let backend = field.backend()?;
            let table_a = if pipeline != Pipeline::B {
                Some(build_poset_model(&k).ext_table_backend(backend))
            } else {
                None
            };
            let table_b = if pipeline != Pipeline::A {
                Some(build_b_category(&k).ext_table())
            } else {
                None
            };
            match out {
                OutFormat::Tsv => {
                    if let Some(t) = &table_a {
                        println!("pipeline\ta");
                        print!("{}", t.to_tsv());
                    }
                    if let Some(t) = &table_b {
                        println!("pipeline\tb");
                        print!("{}", t.to_tsv());
                    }
                }
                OutFormat::Json => {
                    let v = serde_json::json!({
                        "a": table_a,
                        "b": table_b,
                    });
                    println!("{}", serde_json::to_string_pretty(&v).unwrap());
                }
            }
            if let (Some(a), Some(b)) = (&table_a, &table_b) {
                match a.first_difference(b) {
                    None => println!("tables\tequal"),
                    Some((x, y)) => {
                        println!("tables\tDIFFER at ({x}, {y})");
                        return Ok(ExitCode::from(1));
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Quiver { input, out } => {
            let k = load_complex(&input)?;
            let b = build_b_category(&k);
            print_quiver(&k, &b.category, out);
            Ok(ExitCode::SUCCESS)
        }
        Command::Koszul { input, i_set, j_set } => {
            let k = load_complex(&input)?;
            let i_face = parse_face(&i_set)?;
            let j_face = parse_face(&j_set)?;
            let b = build_b_category(&k);
            let dg = build_b_dg_category(&k);
            let c = build_monomial_category(k.n());
            let cand = Candidate {
                complex: &k,
                source: &c,
                target: &b.category,
                functor: &b.functor,
                tw_target: &dg.category,
                tw_functor: &dg.functor,
                backend: Backend::Rational,
            };
            let spec = KoszulSpec::new(i_face, j_face).map_err(|e| e.to_string())?;
            let x = skeleta::koszul::build_koszul(cand.tw_functor, cand.tw_target, &spec)
                .map_err(|e| e.to_string())?;
            let acyclic =
                skeleta::twisted::is_zero_object(cand.tw_target, &x).map_err(|e| e.to_string())?;
            let support_empty = koszul_support_check(&k, i_face);
            println!("i_set\t{i_face}");
            println!("j_set\t{j_face}");
            println!("summands\t{}", x.summands.len());
            println!("acyclic\t{acyclic}");
            println!("support_empty\t{support_empty}");
            println!("agree\t{}", acyclic == support_empty);
            Ok(if acyclic == support_empty { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Cohomology { input, weight, out } => {
            let k = load_complex(&input)?;
            let w = parse_weight(&weight, k.n())?;
            let cover = ToricCover::new(&k);
            let h = cohomology_weight(&cover, &w);
            match out {
                OutFormat::Tsv => {
                    println!("weight\t{}", weight);
                    println!("dims\t{}", dims_cell(&h));
                }
                OutFormat::Json => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&serde_json::json!({
                            "weight": w,
                            "dims": h,
                        }))
                        .unwrap()
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::FlowCheck { input, epsilon, w, dt, tol, grid, dump_orbit } => {
            let k = load_complex(&input)?;
            let params = FlowParams { epsilon, w, dt, tol };
            if let Some(path) = &dump_orbit {
                let p = PhasePoint::new(vec![1.0; k.n()], vec![params.epsilon / 2.0; k.n()]);
                let orbit = integrate_orbit(&p, &k, &params, 10.0).map_err(|e| e.to_string())?;
                let mut text = String::from("t");
                for i in 1..=k.n() {
                    text.push_str(&format!(",x{i}"));
                }
                for i in 1..=k.n() {
                    text.push_str(&format!(",y{i}"));
                }
                text.push('\n');
                for (t, q) in &orbit {
                    text.push_str(&format!("{t}"));
                    for v in q.x.iter().chain(&q.y) {
                        text.push_str(&format!(",{v}"));
                    }
                    text.push('\n');
                }
                std::fs::write(path, text).map_err(|e| e.to_string())?;
            }
            flow_check(&k, &params, grid)
        }
    }
}

fn fmt_vec(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(",")
}

fn verify(
    k: &SimplicialComplex,
    backend: Backend,
    dump_path: Option<&std::path::Path>,
    out: OutFormat,
) -> Result<ExitCode, String> {
    let mut reports: Vec<skeleta::monomial::AxiomReport> = Vec::new();
    let c = build_monomial_category(k.n());
    let b = build_b_category(k);
    let dg = build_b_dg_category(k);
    let target: LinearCategory = match dump_path {
        None => b.category.clone(),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| format!("cannot read {}: {e}", p.display()))?;
            let dump = serde_json::from_str(&text).map_err(|e| format!("bad dump: {e}"))?;
            LinearCategory::from_dump(&dump)
        }
    };
    let mut all_ok = true;
    let fail = |name: &str, detail: String| {
        println!("{name}\tFAIL\t{detail}");
    };

    let cat_report = check_category_axioms(&target);
    if cat_report.passed() {
        println!("category-axioms\tpass");
    } else {
        all_ok = false;
        fail("category-axioms", format!("{:?}", cat_report.violations.first()));
    }

    let cand = Candidate {
        complex: k,
        source: &c,
        target: &target,
        functor: &b.functor,
        tw_target: &dg.category,
        tw_functor: &dg.functor,
        backend,
    };
    let a1 = check_axiom1(&cand);
    report_line("axiom1", &a1, &mut all_ok);
    reports.push(a1);
    if all_ok {
        let a2 = check_axiom2(&cand).map_err(|e| e.to_string())?;
        report_line("axiom2", &a2, &mut all_ok);
        reports.push(a2);
        let a3 = check_axiom3(&cand);
        report_line("axiom3", &a3, &mut all_ok);
        reports.push(a3);
        let nc = check_notcomp(&cand);
        report_line("notcomp", &nc, &mut all_ok);
        reports.push(nc);
        let poset = build_poset_model(k);
        let gen = check_generation(&cand, &poset).map_err(|e| e.to_string())?;
        report_line("generation", &gen, &mut all_ok);
        reports.push(gen);

        // Koszul acyclicity against the support criterion
        let mut duality_ok = true;
        for bits in 0..(1u32 << k.n()) {
            let i_face = Face(bits);
            let acyclic = koszul_acyclicity_by_subset(&cand, i_face).map_err(|e| e.to_string())?;
            let support = koszul_support_check(k, i_face);
            let expected = !k.contains(i_face);
            if acyclic != support || acyclic != expected {
                duality_ok = false;
                fail("koszul-support", format!("I={i_face} acyclic={acyclic} support={support}"));
            }
        }
        if duality_ok {
            println!("koszul-support\tpass");
        }
        all_ok &= duality_ok;

        // the mirror diff
        let table_a = poset.ext_table_backend(backend);
        let table_b = b.ext_table();
        match table_a.first_difference(&table_b) {
            None => println!("ext-tables\tpass"),
            Some((x, y)) => {
                all_ok = false;
                fail("ext-tables", format!("first difference at ({x}, {y})"));
            }
        }
    }
    if out == OutFormat::Json {
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({
                "passed": all_ok,
                "reports": reports,
            }))
            .unwrap()
        );
    }
    Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn report_line(name: &str, report: &skeleta::monomial::AxiomReport, all_ok: &mut bool) {
    if report.passed() {
        println!("{name}\tpass");
    } else {
        *all_ok = false;
        let f = report.first_failure().unwrap();
        println!("{name}\tFAIL\t{} {}", f.triple, f.witness);
    }
}

fn print_quiver(k: &SimplicialComplex, cat: &LinearCategory, out: OutFormat) {
    let n = k.n();
    let count = 1usize << n;
    let mut arrows: Vec<(Face, Face, usize)> = Vec::new();
    for src in 0..count {
        for v in 1..=n {
            let fs = Face(src as u32);
            if fs.contains(v) {
                continue;
            }
            let fd = fs.insert(v);
            if cat.hom_dim(src, fd.0 as usize, 0) > 0 {
                arrows.push((fs, fd, v));
            }
        }
    }
    // commutativity relations across unit squares
    let mut relations: Vec<String> = Vec::new();
    for src in 0..count {
        let fs = Face(src as u32);
        for i in 1..=n {
            for j in i + 1..=n {
                if fs.contains(i) || fs.contains(j) {
                    continue;
                }
                let (fi, fj, fij) = (fs.insert(i), fs.insert(j), fs.insert(i).insert(j));
                let have = |a: Face, b: Face| cat.hom_dim(a.0 as usize, b.0 as usize, 0) > 0;
                if have(fs, fi) && have(fs, fj) && have(fi, fij) && have(fj, fij) {
                    relations.push(format!("e{j}∘e{i} = e{i}∘e{j} at {fs}"));
                }
            }
        }
    }
    // higher-degree classes
    let mut higher: Vec<(Face, Face, i64, usize)> = Vec::new();
    for a in 0..count {
        for b in 0..count {
            for (deg, dim) in cat.hom_dims(a, b) {
                if deg > 0 {
                    higher.push((Face(a as u32), Face(b as u32), deg, dim));
                }
            }
        }
    }
    match out {
        OutFormat::Tsv => {
            println!("arrows\t{}", arrows.len());
            for (a, b, v) in &arrows {
                println!("arrow\te{v}\t{}\t{}", cat.objects[a.0 as usize], cat.objects[b.0 as usize]);
            }
            println!("relations\t{}", relations.len());
            for r in &relations {
                println!("relation\t{r}");
            }
            println!("higher\t{}", higher.len());
            for (a, b, deg, dim) in &higher {
                println!(
                    "class\t[{deg}] dim {dim}\t{}\t{}",
                    cat.objects[a.0 as usize], cat.objects[b.0 as usize]
                );
            }
        }
        OutFormat::Json => {
            let v = serde_json::json!({
                "arrows": arrows.iter().map(|(a, b, vtx)| serde_json::json!({
                    "label": format!("e{vtx}"),
                    "src": cat.objects[a.0 as usize],
                    "dst": cat.objects[b.0 as usize],
                })).collect::<Vec<_>>(),
                "relations": relations,
                "higher": higher.iter().map(|(a, b, deg, dim)| serde_json::json!({
                    "deg": deg,
                    "dim": dim,
                    "src": cat.objects[a.0 as usize],
                    "dst": cat.objects[b.0 as usize],
                })).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
        }
    }
}

fn flow_check(k: &SimplicialComplex, params: &FlowParams, grid: usize) -> Result<ExitCode, String> {
    if k.n() > 2 {
        return Err("flow checks are implemented for n <= 2".into());
    }
    let mut ok = true;
    // orbit margins from the standard transversal at x = 1
    let n = k.n();
    let samples = 11;
    let mut worst_margin = f64::INFINITY;
    let mut worst_drift: f64 = 0.0;
    for s in 0..samples {
        let r = -params.epsilon + 2.0 * params.epsilon * (s as f64) / ((samples - 1) as f64);
        let p = PhasePoint::new(vec![1.0; n], vec![r; n]);
        match integrate_orbit(&p, k, params, 50.0) {
            Ok(path) => {
                let margin = path
                    .iter()
                    .map(|(_, q)| skeleta::flow::singular_margin(q, k))
                    .fold(f64::INFINITY, f64::min);
                worst_margin = worst_margin.min(margin);
                worst_drift = worst_drift.max(energy_drift(&path, k));
            }
            Err(e) => {
                ok = false;
                println!("orbit\tFAIL\tr={r}: {e}");
            }
        }
    }
    println!("orbit-margin\t{}\t{worst_margin:.3e}", if worst_margin >= params.tol { "pass" } else { "FAIL" });
    println!("energy-drift\t{}\t{worst_drift:.3e}", if worst_drift < 1e-6 { "pass" } else { "FAIL" });
    ok &= worst_margin >= params.tol && worst_drift < 1e-6;

    if n == 1 {
        let p1 = PhasePoint::new(vec![1.0], vec![0.0]);
        let p2 = PhasePoint::new(vec![-1.0], vec![0.0]);
        let c_fwd = count_flow_intersections(&p1, Face::EMPTY, &p2, Face::EMPTY, k, params, grid);
        println!("intersections-forward\t{}\t{c_fwd}", if c_fwd == 1 { "pass" } else { "FAIL" });
        let c_rev = count_flow_intersections(&p2, Face::EMPTY, &p1, Face::EMPTY, k, params, grid);
        println!("intersections-reverse\t{}\t{c_rev}", if c_rev == 0 { "pass" } else { "FAIL" });
        ok &= c_fwd == 1 && c_rev == 0;
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
