use std::path::Path;

use anyhow::anyhow;
use contraction_models::contraction::{
    canonical_quadruple, cnu_split, defect_analysis, evaluation_frame, green_residual, mark, primed_quadruple, theta,
    weyl_function, weyl_realization, ContractionAnalysis, CONTRACTION_TOL,
};
use contraction_models::disc::{DiscPoint, GridConfig};
use contraction_models::kernel::{gram_assemble, kernel_block, kernel_oracle_projection, GRAM_RANK_TOL};
use contraction_models::linalg::{max_abs_diff, re, singular_values, spectral_norm, CMat};
use contraction_models::model::{equivalence_check, synthesize, verify_model, EquivalenceTol, MarkedDisc, Verdict};
use contraction_models::random::gaussian;
use contraction_models::schur::SchurRealization;
use contraction_models::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::io;
use crate::report::{complex, matrix, num, sci, Report};

/// Failure classes with their exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Unreadable or invalid input (exit 2).
    Input(anyhow::Error),
    /// Not a contraction, or not c.n.u. where that is required (exit 3).
    NotContraction(String),
    /// Rank did not stabilize under grid refinement (exit 5).
    RankNotStable(String),
    /// Numerical failure inside the library (exit 1).
    Internal(anyhow::Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Internal(_) => 1,
            Failure::Input(_) => 2,
            Failure::NotContraction(_) => 3,
            Failure::RankNotStable(_) => 5,
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Input(e) | Failure::Internal(e) => format!("{e:#}"),
            Failure::NotContraction(m) | Failure::RankNotStable(m) => m.clone(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotAContraction { .. } | Error::NotCnu { .. } => Failure::NotContraction(e.to_string()),
            Error::NotFiniteDimensional { .. } => Failure::RankNotStable(e.to_string()),
            Error::InvalidRealization(_)
            | Error::NotStrictContraction { .. }
            | Error::DimensionMismatch { .. }
            | Error::Precondition(_) => Failure::Input(anyhow!(e)),
            _ => Failure::Internal(anyhow!(e)),
        }
    }
}

pub struct Settings {
    pub tol: f64,
    pub grid: GridConfig,
}

/// A finished command: the report and whether every check passed.
pub struct Outcome {
    pub report: String,
    pub passed: bool,
}

fn grid_section(r: &mut Report, s: &Settings) {
    r.open("grid");
    r.line("radii", format!("[{}]", s.grid.radii.iter().map(|&x| num(x)).collect::<Vec<_>>().join(", ")));
    r.line("angles", s.grid.angles);
    r.line("r_max", num(s.grid.r_max));
    r.line("seed", s.grid.seed);
    r.close();
}

fn load_contraction(path: &Path) -> Result<ContractionAnalysis, Failure> {
    let t = io::read_operator(path).map_err(Failure::Input)?;
    Ok(defect_analysis(&t, CONTRACTION_TOL)?)
}

/// Points where `Θ` and `B` are sampled: `0₊`, `λ = r` for every radius,
/// then the `𝔻₊` ring points.
fn sample_points(s: &Settings, grid: &[DiscPoint]) -> Result<Vec<DiscPoint>, Failure> {
    let mut pts = vec![DiscPoint::zero_plus()];
    for &r in &s.grid.radii {
        pts.push(DiscPoint::plus(re(r))?);
    }
    pts.extend(grid.iter().filter(|p| p.is_plus() && p.coord().norm() > 0.0));
    Ok(pts)
}

pub fn analyze(path: &Path, s: &Settings) -> Result<Outcome, Failure> {
    let an = load_contraction(path)?;
    let grid = s.grid.build()?;
    let (unitary, _) = cnu_split(an.operator(), CONTRACTION_TOL)?;
    let (np, nm) = an.indices();

    let mut r = Report::new();
    r.line("command", "analyze");
    r.line("input", path.display());
    r.line("dim", an.dim());
    r.line("norm", num(spectral_norm(an.operator())));
    r.line("indices", format!("[{np}, {nm}]"));
    r.line("defect_kernel_dim", an.k_frame().rank());
    r.line("cnu", unitary.rank() == 0);
    r.line("unitary_part_dim", unitary.rank());
    r.line("norm_t", num(spectral_norm(an.t())));
    r.open("frames");
    r.line("k_perp", matrix(an.k_perp()));
    r.line("kstar_perp", matrix(an.kstar_perp()));
    r.line("t", matrix(an.t()));
    r.close();
    grid_section(&mut r, s);

    let can = canonical_quadruple(&an);
    let primed = primed_quadruple(&an)?;
    r.open("samples");
    for p in sample_points(s, &grid)? {
        let l = p.coord();
        r.item("lambda", complex(l));
        r.line("theta", matrix(&theta(&an, l)?));
        r.line("weyl_canonical", matrix(&weyl_function(&an, &can, l)?));
        r.line("weyl_primed", matrix(&weyl_function(&an, &primed, l)?));
        r.close();
    }
    r.close();
    Ok(Outcome { report: r.finish(), passed: true })
}

pub enum MarkChoice<'a> {
    Canonical,
    File(&'a Path),
}

struct Check {
    name: &'static str,
    residual: f64,
    pass: bool,
}

fn residual_check(name: &'static str, residual: f64, tol: f64) -> Check {
    Check { name, residual, pass: residual <= tol }
}

const GREEN_PAIRS: usize = 8;

pub fn verify(path: &Path, mark_choice: MarkChoice<'_>, s: &Settings) -> Result<Outcome, Failure> {
    let an = load_contraction(path)?;
    if !an.is_cnu()? {
        return Err(Failure::NotContraction(format!("{}: operator is not c.n.u.", path.display())));
    }
    let grid = s.grid.build()?;
    let (np, nm) = an.indices();
    let can = canonical_quadruple(&an);
    let primed = primed_quadruple(&an)?;
    let mark_matrix = match mark_choice {
        MarkChoice::Canonical => mark(&an, &can)?,
        MarkChoice::File(p) => io::read_matrix(p, nm, np).map_err(Failure::Input)?,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(s.grid.seed);
    let frame = an.at_perp().frame();
    let a = frame * gaussian(frame.ncols(), GREEN_PAIRS, &mut rng);
    let b = frame * gaussian(frame.ncols(), GREEN_PAIRS, &mut rng);

    let mut checks = vec![
        residual_check("green_canonical", green_residual(&an, &can, &a, &b), s.tol),
        residual_check("green_primed", green_residual(&an, &primed, &a, &b), s.tol),
    ];

    let mut p3 = 0.0f64;
    for p in grid.iter().filter(|p| p.is_plus()) {
        let l = p.coord();
        p3 = p3.max((weyl_function(&an, &primed, l)? + theta(&an, l)?).norm());
    }
    checks.push(residual_check("primed_weyl_equals_minus_theta", p3, s.tol));

    let wf = weyl_realization(&an, &can)?;
    let xi: Vec<CMat> = grid.iter().map(|p| evaluation_frame(&an, &can, p)).collect::<Result<_, _>>()?;
    let mut route = 0.0f64;
    for (i, p) in grid.iter().enumerate() {
        for (j, q) in grid.iter().enumerate() {
            let table = kernel_block(&wf, p, q)?;
            route = route.max(max_abs_diff(&table, &(xi[i].adjoint() * &xi[j])));
            match kernel_oracle_projection(&wf, p, q) {
                Ok(proj) => route = route.max(max_abs_diff(&table, &proj)),
                Err(Error::ConfluentUnsupported) => {}
                Err(e) => return Err(e.into()),
            }
        }
    }
    checks.push(residual_check("kernel_dual_route", route, s.tol));

    let model = verify_model(&an, &can, &mark_matrix, &grid)?;
    checks.push(residual_check("boundary_identity", model.max_residual_t1, s.tol));
    checks.push(residual_check("model_identity", model.max_residual_model, s.tol));

    let gram = gram_assemble(&wf, &grid)?;
    let neg = (-gram.min_eigenvalue()).max(0.0) / gram.norm().max(f64::MIN_POSITIVE);
    checks.push(residual_check("gram_psd", neg, s.tol));
    let rank = gram.rank_with(GRAM_RANK_TOL);
    let rank_gap = rank.abs_diff(an.dim()) as f64;
    checks.push(Check { name: "gram_rank", residual: rank_gap, pass: rank == an.dim() });

    let mut r = Report::new();
    r.line("command", "verify");
    r.line("input", path.display());
    r.line("dim", an.dim());
    r.line("indices", format!("[{np}, {nm}]"));
    r.line(
        "mark",
        match mark_choice {
            MarkChoice::Canonical => "canonical".to_string(),
            MarkChoice::File(p) => p.display().to_string(),
        },
    );
    r.line("tol", sci(s.tol));
    grid_section(&mut r, s);
    r.line("gram_rank", rank);
    r.open("checks");
    for c in &checks {
        r.item("name", c.name);
        r.line("residual", sci(c.residual));
        r.line("status", if c.pass { "pass" } else { "fail" });
        r.close();
    }
    r.close();
    let passed = checks.iter().all(|c| c.pass);
    r.line("result", if passed { "pass" } else { "fail" });
    Ok(Outcome { report: r.finish(), passed })
}

pub fn synthesize_cmd(disc: &Path, out: &Path, roundtrip: Option<&Path>, s: &Settings) -> Result<Outcome, Failure> {
    let data = io::read_marked_disc(disc).map_err(Failure::Input)?;
    let realization = SchurRealization::new(data.a, data.b_in, data.c, data.d)?;
    let md = MarkedDisc::new(realization, data.mark)?;
    let original = roundtrip.map(|p| io::read_operator(p).map_err(Failure::Input)).transpose()?;

    let op = synthesize(&md, &s.grid, GRAM_RANK_TOL)?;
    io::write_operator(out, op.matrix()).map_err(Failure::Input)?;

    let mut r = Report::new();
    r.line("command", "synthesize");
    r.line("input", disc.display());
    r.line("output", out.display());
    grid_section(&mut r, s);
    r.line("gram_rank", op.dim());
    r.line("refined_gram_rank", op.refined_rank());
    r.line("residual", sci(op.residual()));
    r.line("norm", num(spectral_norm(op.matrix())));
    r.line(
        "singular_values",
        format!("[{}]", singular_values(op.matrix()).iter().map(|&x| num(x)).collect::<Vec<_>>().join(", ")),
    );
    r.line("matrix", matrix(op.matrix()));
    let mut passed = op.residual() <= s.tol;
    r.line("residual_status", if passed { "pass" } else { "fail" });

    if let (Some(path), Some(t)) = (roundtrip, original) {
        let rep = equivalence_check(op.matrix(), &t, EquivalenceTol::default());
        r.open("roundtrip");
        r.line("original", path.display());
        r.line(
            "verdict",
            match rep.verdict {
                Verdict::Equivalent => "equivalent",
                Verdict::NotEquivalent => "not_equivalent",
                Verdict::Inconclusive => "inconclusive",
            },
        );
        r.line("singular_value_gap", sci(rep.singular_value_gap));
        r.line("eigenvalue_gap", sci(rep.eigenvalue_gap));
        r.line("charpoly_gap", sci(rep.charpoly_gap));
        r.line("trace_gap", sci(rep.trace_gap));
        r.line("word_length", rep.word_length);
        r.close();
        passed &= rep.verdict == Verdict::Equivalent;
    }
    r.line("result", if passed { "pass" } else { "fail" });
    Ok(Outcome { report: r.finish(), passed })
}
