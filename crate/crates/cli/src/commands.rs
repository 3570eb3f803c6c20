//! Command implementations. Every command renders to a string (table or
//! JSON) so output stays deterministic and testable; `check` additionally
//! reports whether a property violation was found.

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use rankprob_core::kappa::RankingFunction;
use rankprob_core::oracle::{
    check_congruence_i, check_congruence_ii, check_theorem3, coarseness_levels,
    dense_strata_vectors, random_rational_dist, tail_dominance_violations, CongruenceReport,
    RevisionMode, DEFAULT_EVENT_GUARD,
};
use rankprob_core::prob::ProbDist;
use rankprob_core::rational::format_fraction;
use rankprob_core::space::Event;
use rankprob_core::transform::{
    acceptance_threshold, epsilon_rule, leap_indices, probability_bounds, to_kappa, to_kappa_trace,
    to_prob, to_prob_exponential, to_prob_exponential_trace, to_prob_trace,
};

use crate::document::Document;
use crate::render::{cell, json_number, Table};
use crate::{Cli, CliError, Command, Format, ModeArg};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Clean,
    ViolationFound,
}

/// Cap on individually listed violations; the full count is always shown.
const MAX_LISTED_VIOLATIONS: usize = 20;

pub fn run(cli: Cli) -> Result<(String, Outcome), CliError> {
    let fmt = cli.format;
    let places = cli.precision;
    match cli.command {
        Command::ToKappa { input, normalize } => {
            to_kappa_cmd(input.as_deref(), normalize, fmt, places)
        }
        Command::ToProb { input, densify } => {
            to_prob_cmd(input.as_deref(), densify, false, fmt, places)
        }
        Command::ToProbExp { input, densify } => {
            to_prob_cmd(input.as_deref(), densify, true, fmt, places)
        }
        Command::EpsRule {
            input,
            eps,
            normalize,
        } => eps_rule_cmd(input.as_deref(), eps.as_deref(), normalize, fmt, places),
        Command::Condition {
            input,
            evidence,
            normalize,
            densify,
        } => condition_cmd(
            input.as_deref(),
            evidence.as_deref(),
            normalize,
            densify,
            fmt,
            places,
        ),
        Command::Image {
            input,
            evidence,
            closeness,
            normalize,
        } => image_cmd(
            input.as_deref(),
            evidence.as_deref(),
            closeness.as_deref(),
            normalize,
            fmt,
            places,
        ),
        Command::Densify { input } => densify_cmd(input.as_deref(), fmt),
        Command::Bounds { input, densify } => bounds_cmd(input.as_deref(), densify, fmt, places),
        Command::Threshold { input, densify } => {
            threshold_cmd(input.as_deref(), densify, fmt, places)
        }
        Command::Roundtrip { input, densify } => roundtrip_cmd(input.as_deref(), densify, fmt),
        Command::Check {
            theorem,
            input,
            eps,
            evidence,
            max_n,
            random,
            n,
            seed,
            mode,
            normalize,
            densify,
        } => check_cmd(CheckArgs {
            theorem,
            input,
            eps,
            evidence,
            max_n,
            random,
            n,
            seed,
            mode,
            normalize,
            densify,
            fmt,
            places,
        }),
    }
}

fn ranking_doc(delta: &RankingFunction) -> Value {
    json!({
        "kind": "ranking",
        "worlds": delta.space().labels(),
        "values": delta.ranks(),
    })
}

fn prob_doc(p: &ProbDist) -> Value {
    json!({
        "kind": "probability",
        "worlds": p.space().labels(),
        "values": p.masses().iter().map(format_fraction).collect::<Vec<_>>(),
    })
}

fn ranks_str(delta: &RankingFunction) -> String {
    let parts: Vec<String> = delta.ranks().iter().map(u32::to_string).collect();
    format!("({})", parts.join(", "))
}

fn finish_json(value: Value) -> String {
    let mut out = serde_json::to_string_pretty(&value).expect("serializable value");
    out.push('\n');
    out
}

fn to_kappa_cmd(
    input: Option<&Path>,
    normalize: bool,
    fmt: Format,
    places: usize,
) -> Result<(String, Outcome), CliError> {
    let doc = Document::load(input)?;
    let p = doc.to_prob_dist(normalize)?;
    let trace = to_kappa_trace(&p);
    let ranking = trace.ranking();
    let mut sorted = p.masses().to_vec();
    sorted.sort_by(|a, b| b.cmp(a));
    let leaps = leap_indices(&sorted).expect("sorted positive masses");
    // display positions are 1-based, matching the table's `i` column
    let leap_positions: Vec<usize> = leaps.indices().iter().map(|i| i + 1).collect();
    let levels = coarseness_levels(&ranking);

    let output = match fmt {
        Format::Table => {
            let mut table = Table::new(["i", "world", "p_i", "M_i", "rank"]);
            for (i, row) in trace.rows().iter().enumerate() {
                table.row([
                    (i + 1).to_string(),
                    p.space().label(row.world).to_owned(),
                    cell(&row.mass, places),
                    cell(&row.remaining, places),
                    row.rank.to_string(),
                ]);
            }
            let leaps_line = if leap_positions.is_empty() {
                "leap positions: none".to_owned()
            } else {
                format!(
                    "leap positions: {}",
                    leap_positions
                        .iter()
                        .map(usize::to_string)
                        .collect::<Vec<_>>()
                        .join(", ")
                )
            };
            format!("{}{leaps_line}\nlevels: {levels}\n", table.render())
        }
        Format::Json => finish_json(json!({
            "command": "to-kappa",
            "rows": trace.rows().iter().enumerate().map(|(i, row)| json!({
                "position": i + 1,
                "world": p.space().label(row.world),
                "mass": json_number(&row.mass, places),
                "remaining": json_number(&row.remaining, places),
                "rank": row.rank,
            })).collect::<Vec<_>>(),
            "leap_positions": leap_positions,
            "levels": levels,
            "ranking": ranking_doc(&ranking),
        })),
    };
    Ok((output, Outcome::Clean))
}

fn to_prob_cmd(
    input: Option<&Path>,
    densify: bool,
    exponential: bool,
    fmt: Format,
    places: usize,
) -> Result<(String, Outcome), CliError> {
    let doc = Document::load(input)?;
    let delta = doc.to_ranking(densify)?;
    let (strata, unnormalized, z, dist, k_max) = if exponential {
        let trace = to_prob_exponential_trace(&delta);
        (
            trace.strata().clone(),
            trace.unnormalized().to_vec(),
            trace.z().clone(),
            trace.dist().clone(),
            Some(trace.k_max()),
        )
    } else {
        let trace = to_prob_trace(&delta);
        (
            trace.strata().clone(),
            trace.unnormalized().to_vec(),
            trace.z().clone(),
            trace.dist().clone(),
            None,
        )
    };
    let command = if exponential {
        "to-prob-exp"
    } else {
        "to-prob"
    };

    let output = match fmt {
        Format::Table => {
            let mut per_rank = Table::new(["rank", "k_i", "u_i", "p(world)"]);
            for (rank, (count, u)) in strata.counts().iter().zip(&unnormalized).enumerate() {
                per_rank.row([
                    rank.to_string(),
                    count.to_string(),
                    cell(u, places),
                    cell(&(u * &z), places),
                ]);
            }
            let mut per_world = Table::new(["world", "rank", "mass"]);
            for (world, label) in delta.space().labels().iter().enumerate() {
                per_world.row([
                    label.clone(),
                    delta.rank(world).to_string(),
                    cell(dist.mass(world), places),
                ]);
            }
            let k_max_line = match k_max {
                Some(k) => format!("k_max = {k}\n"),
                None => String::new(),
            };
            format!(
                "{}{k_max_line}Z = {}, 1/Z = {}\n\n{}",
                per_rank.render(),
                cell(&z, places),
                cell(&z.recip(), places),
                per_world.render()
            )
        }
        Format::Json => {
            let mut value = json!({
                "command": command,
                "strata": strata.counts(),
                "per_rank": strata.counts().iter().zip(&unnormalized).enumerate().map(|(rank, (count, u))| json!({
                    "rank": rank,
                    "count": count,
                    "unnormalized": json_number(u, places),
                    "mass": json_number(&(u * &z), places),
                })).collect::<Vec<_>>(),
                "z": json_number(&z, places),
                "z_inverse": json_number(&z.recip(), places),
                "distribution": prob_doc(&dist),
            });
            if let Some(k) = k_max {
                value["k_max"] = json!(k);
            }
            finish_json(value)
        }
    };
    Ok((output, Outcome::Clean))
}

fn eps_rule_cmd(
    input: Option<&Path>,
    eps_flag: Option<&str>,
    normalize: bool,
    fmt: Format,
    places: usize,
) -> Result<(String, Outcome), CliError> {
    let doc = Document::load(input)?;
    let p = doc.to_prob_dist(normalize)?;
    let eps = doc.epsilon(eps_flag)?.ok_or_else(|| {
        CliError::input("no epsilon given (use --eps or the document's eps field)".to_owned())
    })?;
    let out = epsilon_rule(&p, &eps)?;

    let output = match fmt {
        Format::Table => {
            let mut table = Table::new(["world", "p", "k_raw", "rank"]);
            for (world, label) in p.space().labels().iter().enumerate() {
                table.row([
                    label.clone(),
                    cell(p.mass(world), places),
                    out.raw()[world].to_string(),
                    out.ranking().rank(world).to_string(),
                ]);
            }
            format!("{}epsilon = {}\n", table.render(), cell(&eps, places))
        }
        Format::Json => finish_json(json!({
            "command": "eps-rule",
            "epsilon": json_number(&eps, places),
            "rows": p.space().labels().iter().enumerate().map(|(world, label)| json!({
                "world": label,
                "mass": json_number(p.mass(world), places),
                "raw": out.raw()[world],
                "rank": out.ranking().rank(world),
            })).collect::<Vec<_>>(),
            "ranking": ranking_doc(out.ranking()),
        })),
    };
    Ok((output, Outcome::Clean))
}

fn condition_cmd(
    input: Option<&Path>,
    evidence_flag: Option<&str>,
    normalize: bool,
    densify: bool,
    fmt: Format,
    places: usize,
) -> Result<(String, Outcome), CliError> {
    let doc = Document::load(input)?;
    let space = doc.space()?;
    let evidence = doc.evidence(&space, evidence_flag)?.ok_or_else(|| {
        CliError::input(
            "no evidence event given (use --evidence or the document's evidence field)".to_owned(),
        )
    })?;
    let output = match doc.kind {
        crate::document::Kind::Probability => {
            let p = doc.to_prob_dist(normalize)?;
            let prior = p.prob_of_event(&evidence);
            let conditioned = p.condition(&evidence)?;
            match fmt {
                Format::Table => {
                    let mut table = Table::new(["world", "mass"]);
                    for (world, label) in conditioned.space().labels().iter().enumerate() {
                        table.row([label.clone(), cell(conditioned.mass(world), places)]);
                    }
                    format!(
                        "conditioned on {} (p = {})\n{}",
                        evidence.format_with(&space),
                        cell(&prior, places),
                        table.render()
                    )
                }
                Format::Json => finish_json(json!({
                    "command": "condition",
                    "evidence": evidence.members().map(|w| space.label(w)).collect::<Vec<_>>(),
                    "evidence_probability": json_number(&prior, places),
                    "distribution": prob_doc(&conditioned),
                })),
            }
        }
        crate::document::Kind::Ranking => {
            let delta = doc.to_ranking(densify)?;
            let prior = delta.rank_of_event(&evidence).finite();
            let conditioned = delta.condition(&evidence)?;
            match fmt {
                Format::Table => {
                    let mut table = Table::new(["world", "rank"]);
                    for (world, label) in conditioned.space().labels().iter().enumerate() {
                        table.row([label.clone(), conditioned.rank(world).to_string()]);
                    }
                    format!(
                        "conditioned on {} (rank = {prior})\n{}",
                        evidence.format_with(&space),
                        table.render()
                    )
                }
                Format::Json => finish_json(json!({
                    "command": "condition",
                    "evidence": evidence.members().map(|w| space.label(w)).collect::<Vec<_>>(),
                    "evidence_rank": prior,
                    "ranking": ranking_doc(&conditioned),
                })),
            }
        }
    };
    Ok((output, Outcome::Clean))
}

fn image_cmd(
    input: Option<&Path>,
    evidence_flag: Option<&str>,
    closeness_path: Option<&Path>,
    normalize: bool,
    fmt: Format,
    places: usize,
) -> Result<(String, Outcome), CliError> {
    let doc = Document::load(input)?;
    let p = doc.to_prob_dist(normalize)?;
    let space = p.space().clone();
    let evidence = doc.evidence(&space, evidence_flag)?.ok_or_else(|| {
        CliError::input(
            "no evidence event given (use --evidence or the document's evidence field)".to_owned(),
        )
    })?;
    let (closeness, derived) = match closeness_path {
        Some(path) => {
            let closeness_doc = Document::load(Some(path))?;
            let delta = closeness_doc.to_ranking(false)?;
            if delta.space() != &space {
                return Err(CliError::input(
                    "closeness ranking must list the same worlds as the input".to_owned(),
                ));
            }
            (delta, false)
        }
        None => (to_kappa(&p), true),
    };
    let imaged = p.image(&closeness, &evidence)?;

    let output = match fmt {
        Format::Table => {
            let mut table = Table::new(["world", "rank", "mass"]);
            for (world, label) in space.labels().iter().enumerate() {
                table.row([
                    label.clone(),
                    closeness.rank(world).to_string(),
                    cell(imaged.mass(world), places),
                ]);
            }
            let source = if derived {
                "derived by mass countdown"
            } else {
                "from document"
            };
            format!(
                "imaged on {} (closeness {source})\n{}",
                evidence.format_with(&space),
                table.render()
            )
        }
        Format::Json => finish_json(json!({
            "command": "image",
            "evidence": evidence.members().map(|w| space.label(w)).collect::<Vec<_>>(),
            "closeness": ranking_doc(&closeness),
            "closeness_derived": derived,
            "worlds": space.labels(),
            "masses": imaged.masses().iter().map(|m| json_number(m, places)).collect::<Vec<_>>(),
            "support": imaged.support().members().map(|w| space.label(w)).collect::<Vec<_>>(),
        })),
    };
    Ok((output, Outcome::Clean))
}

fn densify_cmd(input: Option<&Path>, fmt: Format) -> Result<(String, Outcome), CliError> {
    let doc = Document::load(input)?;
    // accept any non-negative ranks here; densification is the point
    let delta = doc.to_ranking(true)?;
    let original: Vec<u32> = doc
        .values
        .iter()
        .map(|v| match v {
            crate::document::ValueRepr::Integer(i) => *i as u32,
            crate::document::ValueRepr::Text(s) => s.trim().parse().expect("validated above"),
        })
        .collect();

    let output = match fmt {
        Format::Table => {
            let mut table = Table::new(["world", "rank", "densified"]);
            for (world, label) in delta.space().labels().iter().enumerate() {
                table.row([
                    label.clone(),
                    original[world].to_string(),
                    delta.rank(world).to_string(),
                ]);
            }
            table.render()
        }
        Format::Json => finish_json(json!({
            "command": "densify",
            "original": original,
            "ranking": ranking_doc(&delta),
        })),
    };
    Ok((output, Outcome::Clean))
}

fn bounds_cmd(
    input: Option<&Path>,
    densify: bool,
    fmt: Format,
    places: usize,
) -> Result<(String, Outcome), CliError> {
    let doc = Document::load(input)?;
    let delta = doc.to_ranking(densify)?;
    let strata = delta.strata();
    let rows: Vec<(usize, usize, _, _)> = (0..=strata.max_rank())
        .map(|rank| {
            let (lo, hi) = probability_bounds(&strata, rank).expect("rank in range");
            (rank, strata.counts()[rank], lo, hi)
        })
        .collect();

    let output = match fmt {
        Format::Table => {
            let mut table = Table::new(["rank", "k_i", "lo", "hi"]);
            for (rank, count, lo, hi) in &rows {
                table.row([
                    rank.to_string(),
                    count.to_string(),
                    cell(lo, places),
                    cell(hi, places),
                ]);
            }
            format!(
                "{}an event of rank i has probability in [lo, hi)\n",
                table.render()
            )
        }
        Format::Json => finish_json(json!({
            "command": "bounds",
            "strata": strata.counts(),
            "per_rank": rows.iter().map(|(rank, count, lo, hi)| json!({
                "rank": rank,
                "count": count,
                "lo": json_number(lo, places),
                "hi": json_number(hi, places),
            })).collect::<Vec<_>>(),
        })),
    };
    Ok((output, Outcome::Clean))
}

fn threshold_cmd(
    input: Option<&Path>,
    densify: bool,
    fmt: Format,
    places: usize,
) -> Result<(String, Outcome), CliError> {
    let doc = Document::load(input)?;
    let delta = doc.to_ranking(densify)?;
    let strata = delta.strata();
    let threshold = acceptance_threshold(&strata);

    let output = match fmt {
        Format::Table => format!(
            "k_0 = {}\nunnormalized threshold: {}\nnormalized threshold:   {}\n",
            strata.counts()[0],
            cell(&threshold.unnormalized, places),
            cell(&threshold.normalized, places),
        ),
        Format::Json => finish_json(json!({
            "command": "threshold",
            "k0": strata.counts()[0],
            "unnormalized": json_number(&threshold.unnormalized, places),
            "normalized": json_number(&threshold.normalized, places),
        })),
    };
    Ok((output, Outcome::Clean))
}

fn roundtrip_cmd(
    input: Option<&Path>,
    densify: bool,
    fmt: Format,
) -> Result<(String, Outcome), CliError> {
    let doc = Document::load(input)?;
    let delta = doc.to_ranking(densify)?;
    let dense = delta.densify();
    let recovered = to_kappa(&to_prob(&delta));
    let exact = recovered == dense;
    let outcome = if exact {
        Outcome::Clean
    } else {
        Outcome::ViolationFound
    };

    let output = match fmt {
        Format::Table => format!(
            "input ranks:     {}\ndensified:       {}\nrecovered ranks: {}\nround trip: {}\n",
            ranks_str(&delta),
            ranks_str(&dense),
            ranks_str(&recovered),
            if exact { "exact" } else { "MISMATCH" },
        ),
        Format::Json => finish_json(json!({
            "command": "roundtrip",
            "input": delta.ranks(),
            "densified": dense.ranks(),
            "recovered": recovered.ranks(),
            "exact": exact,
        })),
    };
    Ok((output, outcome))
}

struct CheckArgs {
    theorem: u8,
    input: Option<PathBuf>,
    eps: Option<String>,
    evidence: Option<String>,
    max_n: Option<usize>,
    random: Option<u64>,
    n: Option<usize>,
    seed: Option<u64>,
    mode: ModeArg,
    normalize: bool,
    densify: bool,
    fmt: Format,
    places: usize,
}

fn check_cmd(args: CheckArgs) -> Result<(String, Outcome), CliError> {
    match args.theorem {
        1 => check_theorem1(args),
        2 => check_theorem2(args),
        3 => check_theorem3_cmd(args),
        other => Err(CliError::input(format!(
            "unknown theorem {other}: expected 1, 2, or 3"
        ))),
    }
}

fn violation_lines(
    report: &CongruenceReport,
    space: &rankprob_core::WorldSpace,
    relation: &str,
    places: usize,
) -> Vec<String> {
    report
        .violations
        .iter()
        .take(MAX_LISTED_VIOLATIONS)
        .map(|v| {
            format!(
                "  p({}) = {} {relation} p({}) = {} but ranks {} vs {}",
                v.event_a.format_with(space),
                cell(&v.p_a, places),
                v.event_b.format_with(space),
                cell(&v.p_b, places),
                v.rank_a,
                v.rank_b,
            )
        })
        .collect()
}

fn violations_json(report: &CongruenceReport, space: &rankprob_core::WorldSpace) -> Value {
    json!(report
        .violations
        .iter()
        .take(MAX_LISTED_VIOLATIONS)
        .map(|v| json!({
            "event_a": v.event_a.members().map(|w| space.label(w)).collect::<Vec<_>>(),
            "event_b": v.event_b.members().map(|w| space.label(w)).collect::<Vec<_>>(),
            "p_a": format_fraction(&v.p_a),
            "p_b": format_fraction(&v.p_b),
            "rank_a": v.rank_a,
            "rank_b": v.rank_b,
        }))
        .collect::<Vec<_>>())
}

fn check_theorem1(args: CheckArgs) -> Result<(String, Outcome), CliError> {
    let guard = args.max_n.unwrap_or(DEFAULT_EVENT_GUARD);
    if let Some(count) = args.random {
        let n = args.n.unwrap_or(5);
        let seed = args.seed.unwrap_or(0);
        let space = rankprob_core::WorldSpace::with_size(n)?;
        if n > guard {
            return Err(rankprob_core::Error::SpaceTooLarge { n, guard }.into());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut congruent = 0u64;
        let mut level_mismatches = 0u64;
        let mut failures: Vec<String> = Vec::new();
        for _ in 0..count {
            let p = random_rational_dist(&space, 1_000_000, &mut rng);
            let delta = to_kappa(&p);
            let report = check_congruence_i(&p, &delta, guard)?;
            let mut sorted = p.masses().to_vec();
            sorted.sort_by(|a, b| b.cmp(a));
            let leaps = leap_indices(&sorted).expect("sorted positive masses");
            let levels_ok = coarseness_levels(&delta) == leaps.count() + 1;
            if report.holds() {
                congruent += 1;
            } else if failures.len() < MAX_LISTED_VIOLATIONS {
                failures.push(format!("  violation on masses {:?}", p.masses()));
            }
            if !levels_ok {
                level_mismatches += 1;
            }
        }
        let holds = congruent == count && level_mismatches == 0;
        let outcome = if holds {
            Outcome::Clean
        } else {
            Outcome::ViolationFound
        };
        let output = match args.fmt {
            Format::Table => {
                let mut out = format!(
                    "theorem 1 randomized suite: n = {n}, {count} distributions, seed {seed}\n\
                     congruent: {congruent}/{count}, level-count mismatches: {level_mismatches}\n\
                     holds: {}\n",
                    if holds { "yes" } else { "NO" }
                );
                for line in failures {
                    out.push_str(&line);
                    out.push('\n');
                }
                out
            }
            Format::Json => finish_json(json!({
                "command": "check",
                "theorem": 1,
                "source": "random",
                "n": n,
                "count": count,
                "seed": seed,
                "congruent": congruent,
                "level_mismatches": level_mismatches,
                "holds": holds,
            })),
        };
        return Ok((output, outcome));
    }

    if args.input.is_none() {
        return Err(CliError::input(
            "theorem 1 needs an input document (pass `-` to read stdin) or --random".to_owned(),
        ));
    }
    let doc = Document::load(args.input.as_deref())?;
    let p = doc.to_prob_dist(args.normalize)?;
    // the epsilon-rule variant is opt-in by flag; a stray `eps` field in the
    // document must not change which transformation gets checked
    let eps = match args.eps.as_deref() {
        Some(raw) => Some(rankprob_core::rational::parse_rational(raw)?),
        None => None,
    };
    let (delta, ranking_desc) = match &eps {
        Some(eps) => {
            let ranking = epsilon_rule(&p, eps)?.into_ranking();
            let desc = format!(
                "epsilon rule with eps = {} = {}",
                cell(eps, args.places),
                ranks_str(&ranking)
            );
            (ranking, desc)
        }
        None => {
            let ranking = to_kappa(&p);
            let desc = format!("derived by mass countdown = {}", ranks_str(&ranking));
            (ranking, desc)
        }
    };
    let report = check_congruence_i(&p, &delta, guard)?;
    let outcome = if report.holds() {
        Outcome::Clean
    } else {
        Outcome::ViolationFound
    };
    let output = match args.fmt {
        Format::Table => {
            let mut out = format!(
                "check: congruence of the probability-to-ranking transformation\n\
                 ranking: {ranking_desc}\n"
            );
            if report.holds() {
                out.push_str(&format!(
                    "holds: yes, {} pairs checked\n",
                    report.pairs_checked
                ));
            } else {
                out.push_str(&format!(
                    "holds: NO, {} pairs checked, {} violation{}\n",
                    report.pairs_checked,
                    report.violations.len(),
                    if report.violations.len() == 1 {
                        ""
                    } else {
                        "s"
                    },
                ));
                for line in violation_lines(&report, p.space(), ">=", args.places) {
                    out.push_str(&line);
                    out.push('\n');
                }
            }
            out
        }
        Format::Json => finish_json(json!({
            "command": "check",
            "theorem": 1,
            "source": "document",
            "epsilon": eps.map(|e| format_fraction(&e)),
            "ranking": ranking_doc(&delta),
            "holds": report.holds(),
            "pairs_checked": report.pairs_checked,
            "violation_count": report.violations.len(),
            "violations": violations_json(&report, p.space()),
        })),
    };
    Ok((output, outcome))
}

fn check_theorem2(args: CheckArgs) -> Result<(String, Outcome), CliError> {
    if let Some(input) = &args.input {
        let doc = Document::load(Some(input))?;
        let delta = doc.to_ranking(args.densify)?;
        let guard = args.max_n.unwrap_or(DEFAULT_EVENT_GUARD);
        let mut sections = Vec::new();
        let mut holds = true;
        for (name, p) in [
            ("stratified", to_prob(&delta)),
            ("exponential", to_prob_exponential(&delta)),
        ] {
            let report = check_congruence_ii(&delta, &p, guard)?;
            let dominance = tail_dominance_violations(&delta, &p);
            holds &= report.holds() && dominance.is_empty();
            sections.push((name, report, dominance, p));
        }
        let outcome = if holds {
            Outcome::Clean
        } else {
            Outcome::ViolationFound
        };
        let output = match args.fmt {
            Format::Table => {
                let mut out = format!("theorem 2 check for strata {}\n", delta.strata());
                for (name, report, dominance, p) in &sections {
                    out.push_str(&format!(
                        "{name} transform: {} ({} pairs), tail dominance {}\n",
                        if report.holds() {
                            "congruent".to_owned()
                        } else {
                            format!("{} violations", report.violations.len())
                        },
                        report.pairs_checked,
                        if dominance.is_empty() {
                            "holds"
                        } else {
                            "FAILS"
                        },
                    ));
                    for line in violation_lines(report, p.space(), "<=", args.places) {
                        out.push_str(&line);
                        out.push('\n');
                    }
                }
                out
            }
            Format::Json => finish_json(json!({
                "command": "check",
                "theorem": 2,
                "source": "document",
                "strata": delta.strata().counts(),
                "transforms": sections.iter().map(|(name, report, dominance, p)| json!({
                    "transform": name,
                    "holds": report.holds(),
                    "pairs_checked": report.pairs_checked,
                    "violations": violations_json(report, p.space()),
                    "tail_dominance_violations": dominance,
                })).collect::<Vec<_>>(),
                "holds": holds,
            })),
        };
        return Ok((output, outcome));
    }

    // sweep over every dense strata vector
    let bound = sweep_bound(args.max_n)?;
    let mut lines = Vec::new();
    let mut total = 0u64;
    for n in 1..=bound {
        let vectors = dense_strata_vectors(n, DEFAULT_EVENT_GUARD)?;
        let count = vectors.len();
        for strata in vectors {
            let delta = RankingFunction::from_strata(&strata)?;
            for p in [to_prob(&delta), to_prob_exponential(&delta)] {
                let report = check_congruence_ii(&delta, &p, DEFAULT_EVENT_GUARD)?;
                if !report.holds() || !tail_dominance_violations(&delta, &p).is_empty() {
                    return sweep_failure(args.fmt, 2, &format!("strata {strata}"));
                }
            }
            total += 1;
        }
        lines.push(format!(
            "  n = {n}: {count} vector{}, both transforms congruent, tail dominance holds",
            if count == 1 { "" } else { "s" }
        ));
    }
    let output = match args.fmt {
        Format::Table => format!(
            "theorem 2 sweep: all dense strata vectors, n <= {bound}\n{}\nall {total} vectors verified\n",
            lines.join("\n")
        ),
        Format::Json => finish_json(json!({
            "command": "check",
            "theorem": 2,
            "source": "sweep",
            "max_n": bound,
            "vectors_verified": total,
            "holds": true,
        })),
    };
    Ok((output, Outcome::Clean))
}

fn check_theorem3_cmd(args: CheckArgs) -> Result<(String, Outcome), CliError> {
    let mode = match args.mode {
        ModeArg::Conditioning => RevisionMode::Conditioning,
        ModeArg::Imaging => RevisionMode::Imaging,
    };
    if let Some(input) = &args.input {
        let doc = Document::load(Some(input))?;
        let delta = doc.to_ranking(args.densify)?;
        let space = delta.space().clone();
        if let Some(evidence) = doc.evidence(&space, args.evidence.as_deref())? {
            let report = check_theorem3(&delta, &evidence, mode)?;
            let outcome = if report.matches() {
                Outcome::Clean
            } else {
                Outcome::ViolationFound
            };
            let fallback_note = if mode == RevisionMode::Imaging {
                format!(
                    "\nnearest-class fallback used: {}",
                    if report.used_nearest_class_fallback {
                        "yes"
                    } else {
                        "no"
                    }
                )
            } else {
                String::new()
            };
            let output = match args.fmt {
                Format::Table => format!(
                    "theorem 3 check: evidence {}, mode {mode}\n\
                     ranking path:     {}\nprobability path: {}\ncommutes: {}{fallback_note}\n",
                    evidence.format_with(&space),
                    ranks_str(&report.left),
                    ranks_str(&report.right),
                    if report.matches() { "yes" } else { "NO" },
                ),
                Format::Json => finish_json(json!({
                    "command": "check",
                    "theorem": 3,
                    "source": "document",
                    "mode": mode.to_string(),
                    "evidence": evidence.members().map(|w| space.label(w)).collect::<Vec<_>>(),
                    "left": ranking_doc(&report.left),
                    "right": ranking_doc(&report.right),
                    "commutes": report.matches(),
                    "nearest_class_fallback": report.used_nearest_class_fallback,
                })),
            };
            return Ok((output, outcome));
        }
        // no evidence: every non-empty event of this document's space
        let n = space.world_count();
        let guard = args.max_n.unwrap_or(DEFAULT_EVENT_GUARD);
        if n > guard {
            return Err(rankprob_core::Error::SpaceTooLarge { n, guard }.into());
        }
        let mut cases = 0u64;
        let mut fallbacks = 0u64;
        for mask in 1u64..1 << n {
            let evidence = Event::from_mask(mask, n);
            let report = check_theorem3(&delta, &evidence, mode)?;
            if !report.matches() {
                return sweep_failure(args.fmt, 3, &format!("evidence {evidence}"));
            }
            cases += 1;
            if report.used_nearest_class_fallback {
                fallbacks += 1;
            }
        }
        let fallback_note = fallback_summary(mode, fallbacks);
        let output = match args.fmt {
            Format::Table => format!(
                "theorem 3 check: all {cases} non-empty evidence events, mode {mode}\n\
                 all cases commute{fallback_note}\n"
            ),
            Format::Json => finish_json(json!({
                "command": "check",
                "theorem": 3,
                "source": "document",
                "mode": mode.to_string(),
                "cases": cases,
                "nearest_class_fallback_cases": fallbacks,
                "commutes": true,
            })),
        };
        return Ok((output, Outcome::Clean));
    }

    if args.evidence.is_some() {
        return Err(CliError::input(
            "--evidence needs an input document (pass `-` to read stdin)".to_owned(),
        ));
    }
    // sweep over every dense strata vector and every non-empty evidence
    let bound = sweep_bound(args.max_n)?;
    let mut cases = 0u64;
    let mut fallbacks = 0u64;
    for n in 1..=bound {
        for strata in dense_strata_vectors(n, DEFAULT_EVENT_GUARD)? {
            let delta = RankingFunction::from_strata(&strata)?;
            for mask in 1u64..1 << n {
                let evidence = Event::from_mask(mask, n);
                let report = check_theorem3(&delta, &evidence, mode)?;
                if !report.matches() {
                    return sweep_failure(
                        args.fmt,
                        3,
                        &format!("strata {strata}, evidence {evidence}"),
                    );
                }
                cases += 1;
                if report.used_nearest_class_fallback {
                    fallbacks += 1;
                }
            }
        }
    }
    let fallback_note = fallback_summary(mode, fallbacks);
    let output = match args.fmt {
        Format::Table => format!(
            "theorem 3 sweep: all dense strata vectors, n <= {bound}, mode {mode}\n\
             all {cases} cases commute{fallback_note}\n"
        ),
        Format::Json => finish_json(json!({
            "command": "check",
            "theorem": 3,
            "source": "sweep",
            "max_n": bound,
            "mode": mode.to_string(),
            "cases": cases,
            "nearest_class_fallback_cases": fallbacks,
            "commutes": true,
        })),
    };
    Ok((output, Outcome::Clean))
}

fn fallback_summary(mode: RevisionMode, fallbacks: u64) -> String {
    if mode == RevisionMode::Imaging {
        format!(" (nearest-class fallback used in {fallbacks} cases)")
    } else {
        String::new()
    }
}

/// Sweeps default to n <= 8 and are hard-capped by the enumeration guard.
fn sweep_bound(max_n: Option<usize>) -> Result<usize, CliError> {
    let bound = max_n.unwrap_or(8);
    if bound > DEFAULT_EVENT_GUARD {
        return Err(CliError::guard(format!(
            "sweep bound {bound} exceeds guard {DEFAULT_EVENT_GUARD}"
        )));
    }
    Ok(bound)
}

fn sweep_failure(fmt: Format, theorem: u8, case: &str) -> Result<(String, Outcome), CliError> {
    let output = match fmt {
        Format::Table => format!("theorem {theorem} FAILED on {case}\n"),
        Format::Json => finish_json(json!({
            "command": "check",
            "theorem": theorem,
            "holds": false,
            "failed_case": case,
        })),
    };
    Ok((output, Outcome::ViolationFound))
}
