//! Command-line front end. All indices on the command line are 1-based;
//! the library is 0-based throughout.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use signpat::{
    apply_border_step, certify_inertia_jacobian, equivalent, find_full_rank_placement,
    inertial_equal_index_border, inertial_unequal_index_border, parse_rational,
    realize_polynomial, recursive_border, refined_inertia, seed_by_name, seed_catalog, sign_of,
    BorderProvenance, BorderStep, Certification, CheckOutcome, Error, InertiaCertification,
    InertiaJacobianReport, InertialEqualBorderReport, InertialUnequalBorderReport,
    RationalMatrix, RealizationResult, RealizeOptions, Result, SeedEntry, SeedKind, SignPattern,
    Transform, VariablePlacement, DEFAULT_INERTIA_TOL,
};

#[derive(Parser)]
#[command(
    name = "signpat",
    about = "Certify and grow sign patterns with exact arithmetic",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Certify a nilpotent realization with a full-rank Jacobian.
    Certify {
        /// Matrix file (rational rows, or JSON).
        #[arg(long)]
        matrix: PathBuf,
        #[command(flatten)]
        placement: PlacementArgs,
    },
    /// Border a matrix, re-certifying each round.
    Border {
        #[arg(long)]
        matrix: PathBuf,
        #[command(flatten)]
        mode: BorderMode,
        /// Diagonal row index for --equal, column index for --unequal.
        #[arg(long)]
        k: Option<usize>,
        /// Border row index for --unequal.
        #[arg(long)]
        j: Option<usize>,
        /// Border entry value for --unequal.
        #[arg(long)]
        b: Option<String>,
        /// Column index whose minor determinant guards the recursion.
        #[arg(long)]
        v: Option<usize>,
        /// Bordering rounds for --equal and --unequal.
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Comma-separated x vector for --general.
        #[arg(long)]
        x: Option<String>,
        /// Comma-separated z vector for --general.
        #[arg(long)]
        z: Option<String>,
    },
    /// Generate a member of a recursive border family.
    Family {
        /// Family name: bn or kn.
        #[arg(long)]
        name: String,
        /// Order of the member to generate.
        #[arg(long)]
        n: usize,
    },
    /// Refined inertia, the inertia hypothesis, and inertial borders.
    Inertia {
        #[arg(long)]
        matrix: PathBuf,
        #[command(flatten)]
        mode: InertiaMode,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        j: Option<usize>,
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        v: Option<usize>,
        /// Real-part tolerance for numeric eigenvalue classification.
        #[arg(long, default_value_t = DEFAULT_INERTIA_TOL)]
        tol: f64,
        #[command(flatten)]
        placement: PlacementArgs,
    },
    /// Target a characteristic polynomial with a float realization.
    Realize {
        /// Pattern file (+-0 rows, or JSON).
        #[arg(long)]
        pattern: PathBuf,
        /// Seed matrix file; must realize the pattern.
        #[arg(long)]
        seed: PathBuf,
        /// Comma-separated coefficients, highest power first.
        #[arg(long)]
        target: String,
        #[command(flatten)]
        placement: PlacementArgs,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 100)]
        max_iters: usize,
        #[arg(long, default_value_t = 10)]
        stages: usize,
    },
    /// Search for an equivalence witness between two patterns.
    Equiv {
        #[arg(long)]
        first: PathBuf,
        #[arg(long)]
        second: PathBuf,
    },
    /// List the seed catalog, or print one entry.
    Catalog {
        #[arg(long)]
        name: Option<String>,
    },
}

#[derive(Args)]
struct PlacementArgs {
    /// Variable position as 1-based "row,col"; repeat for more.
    /// Defaults to every nonzero entry.
    #[arg(long = "var", value_name = "R,C", conflicts_with = "auto")]
    vars: Vec<String>,
    /// Search for a minimal full-rank placement instead.
    #[arg(long)]
    auto: bool,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct BorderMode {
    /// Border at a diagonal entry of row k.
    #[arg(long)]
    equal: bool,
    /// Border with distinct row and column indices.
    #[arg(long)]
    unequal: bool,
    /// Border with explicit x and z vectors.
    #[arg(long)]
    general: bool,
}

#[derive(Args)]
#[group(required = false, multiple = false)]
struct InertiaMode {
    /// Apply the inertial equal-index border.
    #[arg(long)]
    equal: bool,
    /// Apply the inertial unequal-index border.
    #[arg(long)]
    unequal: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli.command, format) {
        Ok((report, ok)) => {
            // A closed pipe (e.g. piping into head) is not an error.
            use std::io::Write;
            if writeln!(std::io::stdout(), "{report}").is_err() {
                return ExitCode::SUCCESS;
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse(_) | Error::NonSquare { .. } => 2,
                Error::Nonconvergence { .. } | Error::OrthantViolation(_) => 4,
                _ => 3,
            })
        }
    }
}

fn run(command: Command, format: Format) -> Result<(String, bool)> {
    match command {
        Command::Certify { matrix, placement } => {
            let a = load_matrix(&matrix)?;
            let placement = resolve_placement(&a, &placement)?;
            let certification = signpat::certify_nilpotent_jacobian(&a, &placement)?;
            let report = CertifyReport {
                catalog_match: catalog_match(Some(&a), Some(&certification.pattern)),
                certification,
            };
            let ok = report.certification.superpatterns_spectrally_arbitrary;
            Ok((render(&report, format, render_certify), ok))
        }
        Command::Border {
            matrix,
            mode,
            k,
            j,
            b,
            v,
            count,
            x,
            z,
        } => {
            let a = load_matrix(&matrix)?;
            let v = v.map(|i| one_based("v", i)).transpose()?;
            if mode.general {
                let x = parse_rational_list(&required(x, "--general needs --x")?)?;
                let z = parse_rational_list(&required(z, "--general needs --z")?)?;
                let step = BorderStep::General { x, z };
                let bordered = apply_border_step(&a, &step)?;
                return finish_border(None, bordered, format);
            }
            let k = one_based("k", required(k, "bordering needs --k")?)?;
            let step = if mode.equal {
                BorderStep::EqualIndex { k, v }
            } else {
                let j = one_based("j", required(j, "--unequal needs --j")?)?;
                let b = parse_rational(&required(b, "--unequal needs --b")?)?;
                BorderStep::UnequalIndex { j, k, b, v }
            };
            let (bordered, provenance) = recursive_border(&a, &step, count)?;
            finish_border(Some(provenance), bordered, format)
        }
        Command::Family { name, n } => {
            let (pattern, realization) = match name.to_lowercase().as_str() {
                "bn" => signpat::gen_bn(n)?,
                "kn" => signpat::gen_kn(n)?,
                other => {
                    return Err(Error::Parse(format!(
                        "unknown family {other:?}; expected bn or kn"
                    )))
                }
            };
            let placement = VariablePlacement::all_nonzeros(&pattern);
            let certification = signpat::certify_nilpotent_jacobian(&realization, &placement)?;
            let ok = certification.superpatterns_spectrally_arbitrary;
            let report = FamilyReport {
                name: name.to_lowercase(),
                n,
                nonzeros: pattern.nonzero_count(),
                pattern,
                realization,
                certification,
            };
            Ok((render(&report, format, render_family), ok))
        }
        Command::Inertia {
            matrix,
            mode,
            k,
            j,
            b,
            v,
            tol,
            placement,
        } => {
            let a = load_matrix(&matrix)?;
            if mode.equal || mode.unequal {
                let placement = resolve_placement(&a, &placement)?;
                let k = one_based("k", required(k, "inertial bordering needs --k")?)?;
                let v = one_based("v", required(v, "inertial bordering needs --v")?)?;
                let (bordered, report) = if mode.equal {
                    let (m, r) = inertial_equal_index_border(&a, k, v, &placement)?;
                    (m, InertialBorder::Equal(r))
                } else {
                    let j = one_based("j", required(j, "--unequal needs --j")?)?;
                    let b = parse_rational(&required(b, "--unequal needs --b")?)?;
                    let (m, r) = inertial_unequal_index_border(&a, j, k, &b, v, &placement)?;
                    (m, InertialBorder::Unequal(r))
                };
                let pattern = sign_of(&bordered)?;
                let report = InertialBorderReport {
                    catalog_match: catalog_match(Some(&bordered), Some(&pattern)),
                    matrix: bordered,
                    pattern,
                    report,
                };
                return Ok((render(&report, format, render_inertial_border), true));
            }
            let inertia = refined_inertia(&a, tol)?;
            let hypothesis = if placement.auto || !placement.vars.is_empty() {
                let placement = resolve_placement(&a, &placement)?;
                Some(certify_inertia_jacobian(&a, &placement)?)
            } else {
                None
            };
            let ok = hypothesis
                .as_ref()
                .map_or(true, |h| h.hypothesis_satisfied);
            let report = InertiaReport {
                catalog_match: catalog_match(Some(&a), sign_of(&a).ok().as_ref()),
                inertia,
                hypothesis,
            };
            Ok((render(&report, format, render_inertia), ok))
        }
        Command::Realize {
            pattern,
            seed,
            target,
            placement,
            tol,
            max_iters,
            stages,
        } => {
            let pattern = load_pattern(&pattern)?;
            let seed = load_matrix(&seed)?;
            let placement = resolve_placement(&seed, &placement)?;
            let target = parse_f64_list(&target)?;
            let opts = RealizeOptions {
                tol,
                max_iters,
                homotopy_stages: stages,
            };
            let result = realize_polynomial(&pattern, &seed, &placement, &target, &opts)?;
            let ok = result.sign_ok && result.residual < opts.tol;
            Ok((render(&result, format, render_realization), ok))
        }
        Command::Equiv { first, second } => {
            let a = load_pattern(&first)?;
            let b = load_pattern(&second)?;
            let witness = equivalent(&a, &b)?;
            let report = EquivReport {
                equivalent: witness.is_some(),
                witness,
            };
            let ok = report.equivalent;
            Ok((render(&report, format, render_equiv), ok))
        }
        Command::Catalog { name } => match name {
            Some(name) => {
                let entry = seed_by_name(&name).ok_or_else(|| {
                    Error::Parse(format!("no catalog entry named {name:?}"))
                })?;
                Ok((render(&entry, format, render_catalog_entry), true))
            }
            None => {
                let listing = CatalogListing {
                    entries: seed_catalog()
                        .into_iter()
                        .map(|e| CatalogRow {
                            order: e.pattern.order(),
                            nonzeros: e.pattern.nonzero_count(),
                            kind: kind_text(&e.kind),
                            name: e.name,
                        })
                        .collect(),
                };
                Ok((render(&listing, format, render_catalog_listing), true))
            }
        },
    }
}

#[derive(Serialize)]
struct CertifyReport {
    catalog_match: Option<String>,
    certification: Certification,
}

#[derive(Serialize)]
struct BorderReport {
    provenance: Option<BorderProvenance>,
    matrix: RationalMatrix,
    pattern: SignPattern,
    certification: Certification,
    catalog_match: Option<String>,
}

#[derive(Serialize)]
struct FamilyReport {
    name: String,
    n: usize,
    nonzeros: usize,
    pattern: SignPattern,
    realization: RationalMatrix,
    certification: Certification,
}

#[derive(Serialize)]
struct InertiaReport {
    catalog_match: Option<String>,
    inertia: InertiaCertification,
    hypothesis: Option<InertiaJacobianReport>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum InertialBorder {
    Equal(InertialEqualBorderReport),
    Unequal(InertialUnequalBorderReport),
}

#[derive(Serialize)]
struct InertialBorderReport {
    catalog_match: Option<String>,
    matrix: RationalMatrix,
    pattern: SignPattern,
    report: InertialBorder,
}

#[derive(Serialize)]
struct EquivReport {
    equivalent: bool,
    witness: Option<Transform>,
}

#[derive(Serialize)]
struct CatalogListing {
    entries: Vec<CatalogRow>,
}

#[derive(Serialize)]
struct CatalogRow {
    name: String,
    order: usize,
    kind: String,
    nonzeros: usize,
}

fn finish_border(
    provenance: Option<BorderProvenance>,
    matrix: RationalMatrix,
    format: Format,
) -> Result<(String, bool)> {
    let pattern = sign_of(&matrix)?;
    let placement = VariablePlacement::all_nonzeros(&pattern);
    let certification = signpat::certify_nilpotent_jacobian(&matrix, &placement)?;
    let ok = certification.superpatterns_spectrally_arbitrary;
    let report = BorderReport {
        catalog_match: catalog_match(Some(&matrix), Some(&pattern)),
        provenance,
        matrix,
        pattern,
        certification,
    };
    Ok((render(&report, format, render_border), ok))
}

fn load_matrix(path: &Path) -> Result<RationalMatrix> {
    let text = read_file(path)?;
    if text.trim_start().starts_with(['{', '[']) {
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    } else {
        RationalMatrix::parse_text(&text)
    }
}

fn load_pattern(path: &Path) -> Result<SignPattern> {
    let text = read_file(path)?;
    if text.trim_start().starts_with('{') {
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    } else {
        SignPattern::parse_text(&text)
    }
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn required<T>(value: Option<T>, message: &str) -> Result<T> {
    value.ok_or_else(|| Error::Parse(message.to_string()))
}

fn one_based(flag: &str, value: usize) -> Result<usize> {
    if value == 0 {
        return Err(Error::Parse(format!("--{flag} is 1-based; 0 is out of range")));
    }
    Ok(value - 1)
}

fn parse_position(text: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("invalid position {text:?}; expected 1-based \"row,col\""));
    let (r, c) = text.split_once(',').ok_or_else(bad)?;
    let r: usize = r.trim().parse().map_err(|_| bad())?;
    let c: usize = c.trim().parse().map_err(|_| bad())?;
    if r == 0 || c == 0 {
        return Err(bad());
    }
    Ok((r - 1, c - 1))
}

fn parse_rational_list(text: &str) -> Result<Vec<signpat::Rational>> {
    text.split(',').map(parse_rational).collect()
}

fn parse_f64_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("invalid coefficient {t:?}")))
        })
        .collect()
}

fn resolve_placement(matrix: &RationalMatrix, args: &PlacementArgs) -> Result<VariablePlacement> {
    if args.auto {
        return find_full_rank_placement(matrix, &[])?.ok_or_else(|| {
            Error::Precondition(
                "no placement of the nonzero entries reaches full Jacobian rank".to_string(),
            )
        });
    }
    if args.vars.is_empty() {
        return Ok(VariablePlacement::all_nonzeros(&sign_of(matrix)?));
    }
    let positions = args
        .vars
        .iter()
        .map(|v| parse_position(v))
        .collect::<Result<Vec<_>>>()?;
    Ok(VariablePlacement::new(positions))
}

fn catalog_match(matrix: Option<&RationalMatrix>, pattern: Option<&SignPattern>) -> Option<String> {
    let entries = seed_catalog();
    if let Some(m) = matrix {
        if let Some(e) = entries.iter().find(|e| &e.realization == m) {
            return Some(e.name.clone());
        }
    }
    if let Some(p) = pattern {
        if let Some(e) = entries.iter().find(|e| &e.pattern == p) {
            return Some(e.name.clone());
        }
    }
    None
}

fn kind_text(kind: &SeedKind) -> String {
    match kind {
        SeedKind::Nilpotent => "nilpotent".to_string(),
        SeedKind::RefinedInertia { expected } => {
            let (a, b, c1, c2) = expected.as_tuple();
            format!("refined inertia ({a}, {b}, {c1}, {c2})")
        }
    }
}

fn render<T: Serialize>(report: &T, format: Format, text: impl Fn(&T) -> String) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("serializable report"),
        Format::Text => text(report),
    }
}

fn indent(text: &str) -> String {
    text.lines()
        .map(|l| format!("  {l}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn placement_text(p: &VariablePlacement) -> String {
    p.positions
        .iter()
        .map(|(r, c)| format!("({},{})", r + 1, c + 1))
        .collect::<Vec<_>>()
        .join(" ")
}

fn outcome_text(o: &CheckOutcome) -> &'static str {
    match o {
        CheckOutcome::Passed => "passed",
        CheckOutcome::Failed => "failed",
        CheckOutcome::NotExact => "not exact",
    }
}

fn match_line(out: &mut Vec<String>, name: &Option<String>) {
    if let Some(name) = name {
        out.push(format!("catalog match: {name}"));
    }
}

fn certification_lines(out: &mut Vec<String>, c: &Certification) {
    let n = c.pattern.order();
    out.push(format!("nilpotent: {}", c.nilpotent));
    out.push(format!("jacobian rank: {} of {n}", c.jacobian_rank));
    out.push(format!(
        "nonderogatory check: {}",
        outcome_text(&c.nonderogatory_check)
    ));
    out.push(format!(
        "irreducible check: {}",
        outcome_text(&c.irreducible_check)
    ));
    out.push(format!(
        "superpatterns spectrally arbitrary: {}",
        c.superpatterns_spectrally_arbitrary
    ));
}

fn render_certify(report: &CertifyReport) -> String {
    let mut out = vec!["certify report".to_string()];
    out.push("pattern:".to_string());
    out.push(indent(&report.certification.pattern.to_text()));
    out.push(format!(
        "placement (1-based): {}",
        placement_text(&report.certification.placement)
    ));
    certification_lines(&mut out, &report.certification);
    match_line(&mut out, &report.catalog_match);
    out.join("\n")
}

fn render_border(report: &BorderReport) -> String {
    let mut out = vec!["border report".to_string()];
    if let Some(provenance) = &report.provenance {
        for (i, round) in provenance.rounds.iter().enumerate() {
            out.push(format!(
                "round {}: order {}, nilpotent {}, jacobian rank {}, full rank {}",
                i + 1,
                round.order,
                round.nilpotent,
                round.jacobian_rank,
                round.full_rank
            ));
        }
    }
    out.push("matrix:".to_string());
    out.push(indent(&report.matrix.to_aligned_text()));
    out.push("pattern:".to_string());
    out.push(indent(&report.pattern.to_text()));
    certification_lines(&mut out, &report.certification);
    match_line(&mut out, &report.catalog_match);
    out.join("\n")
}

fn render_family(report: &FamilyReport) -> String {
    let mut out = vec![format!("family {}, order {}", report.name, report.n)];
    out.push("pattern:".to_string());
    out.push(indent(&report.pattern.to_text()));
    out.push(format!("nonzeros: {}", report.nonzeros));
    out.push("realization:".to_string());
    out.push(indent(&report.realization.to_aligned_text()));
    certification_lines(&mut out, &report.certification);
    out.join("\n")
}

fn inertia_lines(out: &mut Vec<String>, inertia: &InertiaCertification) {
    let (a, b, c1, c2) = inertia.refined_inertia.as_tuple();
    out.push(format!("refined inertia: ({a}, {b}, {c1}, {c2})"));
    out.push(format!("zero multiplicity exact: {}", inertia.zero_mult_exact));
    out.push(format!("imaginary count exact: {}", inertia.imaginary_exact));
    match inertia.tolerance_used {
        Some(tol) => out.push(format!("tolerance used: {tol:e}")),
        None => out.push("tolerance used: none".to_string()),
    }
}

fn render_inertia(report: &InertiaReport) -> String {
    let mut out = vec!["inertia report".to_string()];
    inertia_lines(&mut out, &report.inertia);
    if let Some(h) = &report.hypothesis {
        out.push(format!("hypothesis satisfied: {}", h.hypothesis_satisfied));
        out.push(format!(
            "superpatterns inertially arbitrary: {}",
            h.superpatterns_inertially_arbitrary
        ));
        out.push(format!(
            "jacobian rank: {} of {}",
            h.certification.jacobian_rank,
            h.certification.pattern.order()
        ));
    }
    match_line(&mut out, &report.catalog_match);
    out.join("\n")
}

fn render_inertial_border(report: &InertialBorderReport) -> String {
    let (base, bordered, incremented) = match &report.report {
        InertialBorder::Equal(r) => (&r.base, &r.bordered, r.zero_mult_incremented),
        InertialBorder::Unequal(r) => (&r.base, &r.bordered, r.zero_mult_incremented),
    };
    let mut out = vec!["inertial border report".to_string()];
    out.push(format!(
        "base hypothesis satisfied: {}",
        base.hypothesis_satisfied
    ));
    inertia_lines(&mut out, &bordered.inertia);
    out.push(format!("zero multiplicity incremented: {incremented}"));
    out.push(format!(
        "bordered full rank: {}",
        bordered.certification.full_rank
    ));
    out.push("matrix:".to_string());
    out.push(indent(&report.matrix.to_aligned_text()));
    out.push("pattern:".to_string());
    out.push(indent(&report.pattern.to_text()));
    match_line(&mut out, &report.catalog_match);
    out.join("\n")
}

fn render_realization(result: &RealizationResult) -> String {
    let mut out = vec!["realization report".to_string()];
    out.push(format!("iterations: {}", result.iterations));
    out.push(format!("residual: {:e}", result.residual));
    out.push(format!("sign ok: {}", result.sign_ok));
    out.push("matrix:".to_string());
    for row in &result.matrix {
        let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        out.push(format!("  {}", cells.join(" ")));
    }
    out.join("\n")
}

fn render_equiv(report: &EquivReport) -> String {
    match &report.witness {
        None => "equivalent: no".to_string(),
        Some(w) => {
            let signature: Vec<String> = w.signature.iter().map(|s| s.to_string()).collect();
            let permutation: Vec<String> =
                w.permutation.iter().map(|p| (p + 1).to_string()).collect();
            [
                "equivalent: yes".to_string(),
                format!("signature: {}", signature.join(" ")),
                format!("permutation (1-based): {}", permutation.join(" ")),
                format!("transpose: {}", w.transpose),
                format!("negate: {}", w.negate),
            ]
            .join("\n")
        }
    }
}

fn render_catalog_entry(entry: &SeedEntry) -> String {
    let mut out = vec![format!(
        "{}, order {}, {}",
        entry.name,
        entry.pattern.order(),
        kind_text(&entry.kind)
    )];
    out.push("pattern:".to_string());
    out.push(indent(&entry.pattern.to_text()));
    out.push("realization:".to_string());
    out.push(indent(&entry.realization.to_aligned_text()));
    out.push(format!(
        "placement (1-based): {}",
        placement_text(&entry.placement)
    ));
    out.join("\n")
}

fn render_catalog_listing(listing: &CatalogListing) -> String {
    let mut out = vec![format!(
        "{:<12} {:>5} {:>8}  kind",
        "name", "order", "nonzeros"
    )];
    for row in &listing.entries {
        out.push(format!(
            "{:<12} {:>5} {:>8}  {}",
            row.name, row.order, row.nonzeros, row.kind
        ));
    }
    out.join("\n")
}
