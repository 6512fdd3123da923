//! Batch front end: parse presentation files, run the surgeries and
//! computations, and print deterministic reports.
//!
//! Exit codes: 0 on success/pass, 1 on a report-level failure, 2 on usage
//! errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gentle_core::drinfeld::{
    e_infinity_check, formality_check, quotient_cohomology, quotient_hom_complex, ss_pages,
};
use gentle_core::field::{parse_scalar, Field, PrimeField, Rationals};
use gentle_core::gentle::{is_gentle, pinched_decompose};
use gentle_core::parse::{parse_presentation, serialize_presentation};
use gentle_core::surface::{
    boundary_winding_numbers, contraction_check, grading_from_degrees, pinched_surface,
    surface_from_gentle, RibbonSurface,
};
use gentle_core::transforms::{
    find_graded_kroneckers, idempotent_subalgebra, localize, pinch, pinch_localize_comparison,
    resolve_loops, verify_iso, GradedKronecker,
};
use gentle_core::twisted::{cohomology, hom_complex, TwistedComplex};
use gentle_core::{fixtures, EnumLimits, Presentation};

#[derive(Parser)]
#[command(name = "gentle", version, about = "Exact computations with graded (pinched) gentle presentations", max_term_width = 100)]
struct Cli {
    /// Work over the prime field of this order instead of the rationals.
    #[arg(long = "char", global = true)]
    char_p: Option<u64>,

    /// Output mode.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Length bound for truncated hom-space bases.
    #[arg(long, global = true, default_value_t = 6)]
    length_bound: usize,

    /// Extra length slack for ideal products.
    #[arg(long, global = true, default_value_t = 2)]
    slack: usize,

    /// Filtration truncation for quotient complexes.
    #[arg(long, global = true, default_value_t = 6)]
    filtration_max: usize,

    /// Degree window `lo:hi`.
    #[arg(long, global = true, default_value = "-5:5", value_parser = parse_window, allow_hyphen_values = true)]
    window: (i64, i64),

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo: i64 = lo.parse().map_err(|_| "bad window bound")?;
    let hi: i64 = hi.parse().map_err(|_| "bad window bound")?;
    if lo > hi {
        return Err("empty window".into());
    }
    Ok((lo, hi))
}

#[derive(Args, Clone)]
struct KroneckerArg {
    /// Kronecker pair `alpha,beta` by arrow name.
    #[arg(long, value_parser = parse_pair)]
    kronecker: (String, String),

    /// Band parameter as an exact rational.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    mu: String,
}

fn parse_pair(s: &str) -> Result<(String, String), String> {
    let (a, b) = s.split_once(',').ok_or("expected alpha,beta")?;
    Ok((a.trim().to_string(), b.trim().to_string()))
}

/// One end of a hom complex: a vertex projective or the band object.
#[derive(Clone)]
enum ObjectSpec {
    Projective(String),
    Band,
}

fn parse_object(s: &str) -> Result<ObjectSpec, String> {
    if s == "band" || s == "B" {
        return Ok(ObjectSpec::Band);
    }
    if let Some(v) = s.strip_prefix("P:") {
        return Ok(ObjectSpec::Projective(v.to_string()));
    }
    Err("expected `P:<vertex>` or `band`".into())
}

#[derive(Subcommand)]
enum Command {
    /// Check the gentle conditions; exit 1 with the violated clause on failure.
    Validate { file: PathBuf },

    /// Split arrows into a gentle part and vanishing loops.
    Decompose {
        file: PathBuf,
        /// Rewrite one-sided loops so they become part of the gentle quiver.
        #[arg(long)]
        normalize: bool,
    },

    /// List graded Kronecker pairs with acyclicity reports.
    Kroneckers { file: PathBuf },

    /// Adjoin a formal inverse of `alpha + mu*beta`.
    Localize {
        file: PathBuf,
        #[command(flatten)]
        pair: KroneckerArg,
        /// Write the result here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },

    /// Pinch at an acyclic Kronecker pair.
    Pinch {
        file: PathBuf,
        #[command(flatten)]
        pair: KroneckerArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },

    /// Split every vanishing loop into a gentle pair of loops.
    Resolve {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },

    /// Present the idempotent subalgebra on a vertex subset.
    Subalgebra {
        file: PathBuf,
        /// Comma-separated kept vertex names.
        #[arg(long, value_delimiter = ',')]
        vertices: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },

    /// Build and validate the band object of a Kronecker pair.
    Band {
        file: PathBuf,
        #[command(flatten)]
        pair: KroneckerArg,
        /// Write the presentation with the twisted-complex blocks appended.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },

    /// Basis and differential of a hom complex between twisted complexes.
    Hom {
        file: PathBuf,
        /// Source object: `P:<vertex>` or `band`.
        #[arg(long, value_parser = parse_object)]
        from: ObjectSpec,
        /// Target object: `P:<vertex>` or `band`.
        #[arg(long, value_parser = parse_object)]
        to: ObjectSpec,
        #[command(flatten)]
        pair: KroneckerArg,
    },

    /// Cohomology of a hom complex over the degree window.
    Cohomology {
        file: PathBuf,
        #[arg(long, value_parser = parse_object)]
        from: ObjectSpec,
        #[arg(long, value_parser = parse_object)]
        to: ObjectSpec,
        #[command(flatten)]
        pair: KroneckerArg,
    },

    /// Truncated quotient hom cohomology for a vertex pair.
    Quotient {
        file: PathBuf,
        #[arg(long)]
        source_vertex: String,
        #[arg(long)]
        target_vertex: String,
        #[command(flatten)]
        pair: KroneckerArg,
    },

    /// Spectral sequence pages of the level filtration.
    SsPages {
        file: PathBuf,
        #[arg(long)]
        source_vertex: String,
        #[arg(long)]
        target_vertex: String,
        #[command(flatten)]
        pair: KroneckerArg,
        /// Last page to print.
        #[arg(long, default_value_t = 2)]
        r_max: usize,
    },

    /// Compare the limit page against the closed form on the pair.
    EinfCheck {
        file: PathBuf,
        #[arg(long)]
        source_vertex: String,
        #[arg(long)]
        target_vertex: String,
        #[command(flatten)]
        pair: KroneckerArg,
    },

    /// Compare quotient cohomology against the localization.
    Formality {
        file: PathBuf,
        #[command(flatten)]
        pair: KroneckerArg,
    },

    /// Verify the built-in subalgebra rewriting for a Kronecker pair.
    IsoCheck {
        file: PathBuf,
        #[command(flatten)]
        pair: KroneckerArg,
    },

    /// Surface invariants; `--pinched` pairs punctures into singularities.
    Surface {
        file: PathBuf,
        #[arg(long)]
        pinched: bool,
    },

    /// Boundary winding numbers for the degree grading.
    Winding { file: PathBuf },

    /// Compare pinching against the cut-and-cap surgery on the surface.
    ContractCheck {
        file: PathBuf,
        #[command(flatten)]
        pair: KroneckerArg,
    },

    /// Write the sample presentations into a directory.
    Fixtures {
        #[arg(short, long, default_value = ".")]
        output: PathBuf,
    },
}

fn main() -> ExitCode {
    // Exit quietly when the consumer closes the pipe (head, less, ...).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let result = match cli.char_p {
        None => run(&Rationals, &cli),
        Some(p) => match PrimeField::new(p) {
            Ok(f) => run(&f, &cli),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
    };
    match result {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn load<F: Field>(field: &F, path: &Path) -> anyhow::Result<Presentation<F>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
    Ok(parse_presentation(field, &text)?)
}

fn kron_by_name<F: Field>(
    p: &Presentation<F>,
    pair: &(String, String),
) -> anyhow::Result<GradedKronecker> {
    Ok(GradedKronecker {
        alpha: p.arrow_named(&pair.0)?,
        beta: p.arrow_named(&pair.1)?,
    })
}

fn emit(output: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn build_object<F: Field>(
    p: &Presentation<F>,
    spec: &ObjectSpec,
    pair: &KroneckerArg,
) -> anyhow::Result<TwistedComplex<F>> {
    match spec {
        ObjectSpec::Projective(v) => Ok(TwistedComplex::projective(p.vertex_named(v)?)),
        ObjectSpec::Band => {
            let k = kron_by_name(p, &pair.kronecker)?;
            let mu = parse_scalar(&p.field, &pair.mu)?;
            Ok(TwistedComplex::band(p, &k, &mu)?)
        }
    }
}

fn surface_report(s: &RibbonSurface, windings: Option<&[i64]>) -> String {
    let mut out = String::new();
    for (k, c) in s.components.iter().enumerate() {
        let inv = &c.invariants;
        let circles: Vec<String> = c
            .circle_ids
            .iter()
            .map(|&ci| {
                let circ = &s.circles[ci];
                match windings {
                    Some(w) => format!(
                        "(○={}, ●={}, w={})",
                        circ.fans.len(),
                        circ.walks.len(),
                        w[ci]
                    ),
                    None => format!("(○={}, ●={})", circ.fans.len(), circ.walks.len()),
                }
            })
            .collect();
        out.push_str(&format!(
            "component {k}: genus {}, boundaries [{}], punctures (○={}, ●={}), singularities={}\n",
            inv.genus,
            circles.join(", "),
            inv.o_punctures,
            inv.b_punctures,
            s.singularities
                .iter()
                .filter(|((a, b), _)| c.fans.contains(a) || c.fans.contains(b))
                .count(),
        ));
    }
    out
}

fn run<F: Field>(field: &F, cli: &Cli) -> anyhow::Result<bool> {
    let limits = EnumLimits { max_paths: 1_000_000, slack: cli.slack };
    let len = cli.length_bound;
    let window = cli.window;
    let structured = cli.format == Format::Structured;

    match &cli.command {
        Command::Validate { file } => {
            let p = load(field, file)?;
            let rep = is_gentle(&p);
            if rep.ok() {
                println!("gentle=pass vertices={} arrows={}", p.quiver().vertex_count(), p.quiver().arrow_count());
                Ok(true)
            } else {
                for v in &rep.violations {
                    println!("violation clause=\"{}\" witness={}", v.clause, v.witness);
                }
                Ok(false)
            }
        }
        Command::Decompose { file, normalize } => {
            let p = load(field, file)?;
            match pinched_decompose(&p, *normalize) {
                Ok(out) => {
                    let d = out.decomposition().unwrap();
                    println!(
                        "decomposition=pass loops={} gentle_relations={} loop_relations={}",
                        d.loops.len(),
                        d.gentle_relations.len(),
                        d.pinched_relations.len()
                    );
                    print!("{}", serialize_presentation(&out, None));
                    Ok(true)
                }
                Err(e) => {
                    println!("decomposition=fail reason=\"{e}\"");
                    Ok(false)
                }
            }
        }
        Command::Kroneckers { file } => {
            let p = load(field, file)?;
            let ks = find_graded_kroneckers(&p)?;
            for info in &ks {
                let q = p.quiver();
                println!(
                    "pair={},{} acyclic={} plain_quiver_acyclic={}{}",
                    q.arrow_name(info.pair.alpha),
                    q.arrow_name(info.pair.beta),
                    info.acyclicity.relation_aware,
                    info.acyclicity.plain_quiver,
                    if info.acyclicity.discrepancy() { " discrepancy=reported" } else { "" },
                );
            }
            if ks.is_empty() {
                println!("pairs=0");
            }
            Ok(true)
        }
        Command::Localize { file, pair, output } => {
            let p = load(field, file)?;
            let k = kron_by_name(&p, &pair.kronecker)?;
            let mu = parse_scalar(field, &pair.mu)?;
            let out = localize(&p, &k, &mu)?;
            let prov = format!(
                "localize kronecker={},{} mu={} delta={}",
                pair.kronecker.0, pair.kronecker.1, pair.mu, out.delta
            );
            emit(output, &serialize_presentation(&out.presentation, Some(&prov)))?;
            Ok(true)
        }
        Command::Pinch { file, pair, output } => {
            let p = load(field, file)?;
            let k = kron_by_name(&p, &pair.kronecker)?;
            let out = pinch(&p, &k)?;
            let prov = format!(
                "pinch kronecker={},{} gamma={} merged={}->{}",
                pair.kronecker.0,
                pair.kronecker.1,
                out.gamma,
                out.merged_vertex.0,
                out.merged_vertex.1
            );
            emit(output, &serialize_presentation(&out.presentation, Some(&prov)))?;
            Ok(true)
        }
        Command::Resolve { file, output } => {
            let p = load(field, file)?;
            let out = resolve_loops(&p)?;
            let pairing: Vec<String> =
                out.pairing.iter().map(|(a, b)| format!("{a}~{b}")).collect();
            let prov = format!("resolve pairing=[{}]", pairing.join(", "));
            emit(output, &serialize_presentation(&out.presentation, Some(&prov)))?;
            Ok(true)
        }
        Command::Subalgebra { file, vertices, output } => {
            let p = load(field, file)?;
            let keep: Vec<_> = vertices
                .iter()
                .map(|v| p.vertex_named(v))
                .collect::<Result<_, _>>()?;
            let sub = idempotent_subalgebra(&p, &keep, len, &limits)?;
            let prov = format!("subalgebra vertices={} length_bound={len}", vertices.join(","));
            emit(output, &serialize_presentation(&sub, Some(&prov)))?;
            Ok(true)
        }
        Command::Band { file, pair, output } => {
            let p = load(field, file)?;
            let k = kron_by_name(&p, &pair.kronecker)?;
            let mu = parse_scalar(field, &pair.mu)?;
            let b = TwistedComplex::band(&p, &k, &mu)?;
            let q = p.quiver();
            if let Some(path) = output {
                let prov = format!(
                    "band kronecker={},{} mu={}",
                    pair.kronecker.0, pair.kronecker.1, pair.mu
                );
                let mut text = serialize_presentation(&p, Some(&prov));
                text.push_str(&gentle_core::twisted::serialize_twisted(&p, &b));
                emit(&Some(path.clone()), &text)?;
            }
            for (i, (v, r)) in b.summands().iter().enumerate() {
                println!("summand={i} vertex={} shift={r}", q.vertex_name(*v));
            }
            println!("entry(0,1)={}", b.entry(0, 1).display(field, q));
            println!("validation=pass");
            Ok(true)
        }
        Command::Hom { file, from, to, pair } => {
            let p = load(field, file)?;
            let x = build_object(&p, from, pair)?;
            let y = build_object(&p, to, pair)?;
            let hc = hom_complex(&p, &x, &y, len, &limits)?;
            for (i, it) in hc.items().iter().enumerate() {
                println!(
                    "item={i} row={} col={} degree={} element={}",
                    it.row,
                    it.col,
                    it.degree,
                    hc.item_element(i).display(field, p.quiver())
                );
            }
            for i in 0..hc.dim() {
                let img = hc.differential(i);
                if !img.is_empty() {
                    let terms: Vec<String> = img
                        .iter()
                        .map(|(j, c)| format!("{}*item{}", field.display(c), j))
                        .collect();
                    println!("d item={i} -> {}", terms.join(" + "));
                }
            }
            Ok(true)
        }
        Command::Cohomology { file, from, to, pair } => {
            let p = load(field, file)?;
            let x = build_object(&p, from, pair)?;
            let y = build_object(&p, to, pair)?;
            let hc = hom_complex(&p, &x, &y, len, &limits)?;
            let t = cohomology(field, &hc, window);
            for n in window.0..=window.1 {
                let d = t.dim(n);
                if d > 0 || structured {
                    println!("degree={n} dim={d}");
                }
            }
            println!("total={}", t.total_dim());
            Ok(true)
        }
        Command::Quotient { file, source_vertex, target_vertex, pair } => {
            let p = load(field, file)?;
            let i = p.vertex_named(source_vertex)?;
            let j = p.vertex_named(target_vertex)?;
            let k = kron_by_name(&p, &pair.kronecker)?;
            let mu = parse_scalar(field, &pair.mu)?;
            let b = TwistedComplex::band(&p, &k, &mu)?;
            let qc = quotient_hom_complex(&p, i, j, &b, cli.filtration_max, len, &limits)?;
            let qh = quotient_cohomology(&p, &qc, window);
            let pages = ss_pages(&p, &qc, qc.p_max + 1, window)?;
            let einf = pages.last().unwrap();
            for n in window.0..=window.1 {
                let d = qh.dims.get(&n).copied().unwrap_or(0);
                if d == 0 && !structured {
                    continue;
                }
                let profile: Vec<String> = (0..=qc.p_max)
                    .map(|lvl| einf.dim(lvl, n - lvl as i64).to_string())
                    .collect();
                println!(
                    "source={source_vertex} target={target_vertex} degree={n} dim={d} stable={} filtration_profile=[{}]",
                    qh.stable.get(&n).copied().unwrap_or(false),
                    profile.join(",")
                );
            }
            Ok(true)
        }
        Command::SsPages { file, source_vertex, target_vertex, pair, r_max } => {
            let p = load(field, file)?;
            let i = p.vertex_named(source_vertex)?;
            let j = p.vertex_named(target_vertex)?;
            let k = kron_by_name(&p, &pair.kronecker)?;
            let mu = parse_scalar(field, &pair.mu)?;
            let b = TwistedComplex::band(&p, &k, &mu)?;
            let qc = quotient_hom_complex(&p, i, j, &b, cli.filtration_max, len, &limits)?;
            let pages = ss_pages(&p, &qc, *r_max, window)?;
            for page in &pages {
                for (&(level, q), dim) in &page.dims() {
                    println!("page={} level={level} q={q} dim={dim}", page.r);
                }
            }
            Ok(true)
        }
        Command::EinfCheck { file, source_vertex, target_vertex, pair } => {
            let p = load(field, file)?;
            let i = p.vertex_named(source_vertex)?;
            let j = p.vertex_named(target_vertex)?;
            let k = kron_by_name(&p, &pair.kronecker)?;
            let mu = parse_scalar(field, &pair.mu)?;
            let b = TwistedComplex::band(&p, &k, &mu)?;
            let qc = quotient_hom_complex(&p, i, j, &b, cli.filtration_max, len, &limits)?;
            let rep = e_infinity_check(&p, &qc, window, len, &limits)?;
            println!(
                "einf=pass={} a={} margin={} stabilized_at={}",
                rep.pass(),
                rep.a,
                rep.margin,
                rep.stabilized_at
            );
            for m in &rep.mismatches {
                println!("mismatch {m}");
            }
            Ok(rep.pass())
        }
        Command::Formality { file, pair } => {
            let p = load(field, file)?;
            let k = kron_by_name(&p, &pair.kronecker)?;
            let mu = parse_scalar(field, &pair.mu)?;
            let rep = formality_check(&p, &k, &mu, window, cli.filtration_max, len, &limits)?;
            println!("formality=pass={} pairs={}", rep.pass(), rep.pairs_checked);
            for f in &rep.failures {
                println!("failure {f}");
            }
            Ok(rep.pass())
        }
        Command::IsoCheck { file, pair } => {
            let p = load(field, file)?;
            let k = kron_by_name(&p, &pair.kronecker)?;
            let mu = parse_scalar(field, &pair.mu)?;
            let cmp = pinch_localize_comparison(&p, &k, &mu, &limits)?;
            let rep = verify_iso(&cmp.subalgebra, &cmp.pinched, &cmp.candidate, len, &limits)?;
            println!("iso=pass={}", rep.pass());
            for f in &rep.failures {
                println!("failure {f}");
            }
            Ok(rep.pass())
        }
        Command::Surface { file, pinched } => {
            let p = load(field, file)?;
            let s = if *pinched { pinched_surface(&p)? } else { surface_from_gentle(&p)? };
            let windings = if *pinched {
                None
            } else {
                Some(boundary_winding_numbers(&s, &grading_from_degrees(&p)))
            };
            print!("{}", surface_report(&s, windings.as_deref()));
            Ok(true)
        }
        Command::Winding { file } => {
            let p = load(field, file)?;
            let s = surface_from_gentle(&p)?;
            let g = grading_from_degrees(&p);
            let w = boundary_winding_numbers(&s, &g);
            let mut per_comp: BTreeMap<usize, i64> = BTreeMap::new();
            for (ci, &wi) in w.iter().enumerate() {
                let comp = s.component_of_fan(s.circles[ci].fans[0]);
                println!("circle={ci} component={comp} winding={wi}");
                *per_comp.entry(comp).or_default() += wi;
            }
            for (comp, total) in per_comp {
                let inv = &s.components[comp].invariants;
                let expected = 4 - 2 * inv.circles.len() as i64 - 4 * inv.genus;
                println!(
                    "component={comp} sum={total} expected={expected} identity={}",
                    total == expected
                );
            }
            Ok(true)
        }
        Command::ContractCheck { file, pair } => {
            let p = load(field, file)?;
            let k = kron_by_name(&p, &pair.kronecker)?;
            let rep = contraction_check(&p, &k)?;
            println!("contraction=match={}", rep.matched);
            let (sides, edges) = &rep.pinched_route;
            for (i, side) in sides.iter().enumerate() {
                println!(
                    "side={i} genus={} euler={} circles={:?} o_punctures={} b_punctures={} paired_slots={}",
                    side.genus,
                    side.euler,
                    side.circles,
                    side.o_punctures_unpaired,
                    side.b_punctures,
                    side.paired_slots
                );
            }
            for (a, b) in edges {
                println!("singularity joins={a},{b}");
            }
            Ok(rep.matched)
        }
        Command::Fixtures { output } => {
            std::fs::create_dir_all(output)?;
            let files = [
                ("lambda0.alg", serialize_presentation(&fixtures::lambda0(field), None)),
                ("lambda1.alg", serialize_presentation(&fixtures::lambda1(field), None)),
                (
                    "lambda1_pinched.alg",
                    serialize_presentation(&fixtures::lambda1_pinched(field), None),
                ),
            ];
            for (name, text) in files {
                let path = output.join(name);
                std::fs::write(&path, text)?;
                println!("wrote {}", path.display());
            }
            Ok(true)
        }
    }
}
