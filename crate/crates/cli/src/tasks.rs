//! Task dispatch: one [`Job`] in, one [`Report`] out.

use std::fmt::Write as _;
use std::sync::Arc;

use oiglab::fds::{encode_transductive, EpsOutcome, Fds};
use oiglab::label::{Label, Labeling};
use oiglab::learners::{
    oig_learner, worst_case_error, ErmLearner, MinRectangleLearner, OptimalLearner, TieBreakPolicy, TransductiveLearner,
};
use oiglab::matching::{
    b_matching_feasible, compactness_check, densest_subgraph, epsilon_demands, fractional_hall_complexity, hall_complexity,
    max_avg_degree, optimal_orientation, orientation_error,
};
use oiglab::oig::{build_agnostic_oig, build_bipartite_oig, build_oig, dump_bipartite, BipartiteOig};
use oiglab::pac::{
    pac_error_estimate, pac_to_transductive, transductive_to_pac, MinRectanglePac, NearestNeighborPac, PacEstimate, PacLearner,
    ReductionConfig,
};
use oiglab::{Budget, Rational, Setting};

use crate::doc::{Direction, FdsDoc, LearnerKind, Params, Problem, ProblemDoc, TaskKind, TieBreakKind};
use crate::error::{CliError, CliResult};
use crate::report::{blank, exact, joined, Report, Status};

/// A fully resolved unit of work.
#[derive(Clone, Debug)]
pub struct Job {
    pub id: String,
    pub task: TaskKind,
    pub problem: Option<ProblemDoc>,
    pub fds: Option<FdsDoc>,
    pub params: Params,
}

impl Job {
    pub fn budget(&self) -> Budget {
        let mut b = Budget::default();
        if let Some(n) = self.params.budget_nodes {
            b = b.with_nodes(n);
        }
        if let Some(s) = self.params.budget_subsets {
            b = b.with_subset_nodes(s);
        }
        b
    }

    fn problem(&self) -> CliResult<Problem> {
        let mut p = self.problem.as_ref().ok_or(CliError::Missing("problem"))?.compile()?;
        if let Some(s) = self.params.setting {
            p.setting = s.into();
        }
        Ok(p)
    }

    fn fds(&self) -> CliResult<Fds> {
        self.fds.as_ref().ok_or(CliError::Missing("fds"))?.compile()
    }

    fn rational(&self, value: &Option<String>, name: &'static str) -> CliResult<Rational> {
        Ok(oiglab::label::parse_rational(value.as_deref().ok_or(CliError::Missing(name))?)?)
    }

    fn seed(&self) -> CliResult<u64> {
        self.params.seed.ok_or(CliError::Missing("seed"))
    }

    fn trials(&self) -> CliResult<usize> {
        self.params.trials.ok_or(CliError::Missing("trials"))
    }
}

pub fn execute(job: &Job) -> CliResult<Report> {
    match job.task {
        TaskKind::BuildOig => build(job),
        TaskKind::Orient => orient(job),
        TaskKind::Hall => hall(job),
        TaskKind::Mad => mad(job),
        TaskKind::Evaluate => evaluate(job),
        TaskKind::PacEval => pac_eval(job),
        TaskKind::Reduce => reduce(job),
        TaskKind::FdsSolve => fds_solve(job),
        TaskKind::FdsMinmax => fds_minmax(job),
        TaskKind::FdsEncode => fds_encode(job),
        TaskKind::Compactness => compactness(job),
    }
}

fn setting_name(s: Setting) -> String {
    s.to_string()
}

/// `H|_S` and the bipartite OIG of the problem's setting.
pub fn problem_oig(p: &Problem, budget: &Budget) -> CliResult<(Vec<Labeling>, BipartiteOig)> {
    let rows = p.family.restrict_within(&p.points, budget.nodes)?;
    if rows.is_empty() {
        return Err(CliError::Invalid("the family has no labeling of these points".into()));
    }
    let labels = p.family.label_space();
    let oig = match p.setting {
        Setting::Realizable => build_bipartite_oig(&rows, &labels, budget)?,
        Setting::Agnostic => build_agnostic_oig(&rows, &labels, p.points.len(), budget)?,
    };
    Ok((rows, oig))
}

fn build(job: &Job) -> CliResult<Report> {
    let p = job.problem()?;
    let budget = job.budget();
    let (rows, oig) = problem_oig(&p, &budget)?;
    let g = oig.graph();
    let mut r = Report::new(&["instance", "setting", "n", "labels", "hypotheses", "left", "right", "edges"]);
    r.push(vec![
        job.id.clone(),
        setting_name(p.setting),
        p.points.len().to_string(),
        oig.label_space().len().to_string(),
        rows.len().to_string(),
        g.left_count().to_string(),
        g.right_count().to_string(),
        g.edge_count().to_string(),
    ]);
    r.summary = dump_bipartite(&oig);
    Ok(r)
}

/// Maximum average degree of the realizable binary OIG, when defined.
fn binary_mad(p: &Problem, rows: &[Labeling], budget: &Budget) -> CliResult<Option<Rational>> {
    if p.setting != Setting::Realizable || p.family.label_space().len() != 2 {
        return Ok(None);
    }
    Ok(Some(max_avg_degree(&build_oig(rows, budget)?, None, budget)?))
}

fn orient(job: &Job) -> CliResult<Report> {
    let p = job.problem()?;
    let budget = job.budget();
    let (rows, oig) = problem_oig(&p, &budget)?;
    let g = oig.graph();
    let o = optimal_orientation(g)?;
    let mut r = Report::new(&[
        "instance", "setting", "n", "nodes", "edges", "k_star", "hall_eps_num", "hall_eps_den", "hall_eps", "mad_num", "mad_den", "mad",
    ]);
    let mut row = vec![
        job.id.clone(),
        setting_name(p.setting),
        g.n().to_string(),
        g.right_count().to_string(),
        g.edge_count().to_string(),
        o.k_star.to_string(),
    ];
    let mut summary = String::new();
    if g.right_count() <= budget.subset_nodes {
        row.extend(exact(hall_complexity(g, &budget)?));
    } else {
        row.extend(blank());
        let _ = writeln!(summary, "hall_eps skipped: {} right nodes exceed the subset budget {}", g.right_count(), budget.subset_nodes);
    }
    row.extend(binary_mad(&p, &rows, &budget)?.map_or_else(blank, exact));
    r.push(row);
    let _ = writeln!(summary, "optimal error {} (k* = {} of n = {})", orientation_error(&o), o.k_star, o.n);
    for (l, &target) in o.assignment.iter().enumerate() {
        let _ = writeln!(summary, "{} -> {}", oig.left()[l], oig.right()[target]);
    }
    r.summary = summary;
    Ok(r)
}

fn hall(job: &Job) -> CliResult<Report> {
    let p = job.problem()?;
    let budget = job.budget();
    let (_, oig) = problem_oig(&p, &budget)?;
    let g = oig.graph();
    let mut r = Report::new(&[
        "instance",
        "setting",
        "n",
        "hall_eps_num",
        "hall_eps_den",
        "hall_eps",
        "fractional_num",
        "fractional_den",
        "fractional",
        "eps",
        "feasible",
        "witness",
    ]);
    let mut row = vec![job.id.clone(), setting_name(p.setting), g.n().to_string()];
    let h = hall_complexity(g, &budget)?;
    row.extend(exact(h));
    row.extend(exact(fractional_hall_complexity(g, &budget)?));
    let mut summary = format!("Hall complexity {h}\n");
    match &job.params.eps {
        None => row.extend([String::new(), String::new(), String::new()]),
        Some(_) => {
            let eps = job.rational(&job.params.eps, "eps")?;
            let out = b_matching_feasible(g, &epsilon_demands(g, eps));
            row.push(eps.to_string());
            row.push(out.is_feasible().to_string());
            match out.witness() {
                Some(w) => {
                    row.push(joined(w.right_subset.iter().map(|&i| &oig.right()[i]), ";"));
                    let _ = writeln!(summary, "infeasible at eps {eps}: {} right nodes demand {} > |N| = {}", w.right_subset.len(), w.demand, w.neighborhood);
                    r.status = Status::Infeasible;
                }
                None => {
                    row.push(String::new());
                    let _ = writeln!(summary, "feasible at eps {eps}");
                }
            }
        }
    }
    r.push(row);
    r.summary = summary;
    Ok(r)
}

fn mad(job: &Job) -> CliResult<Report> {
    let p = job.problem()?;
    let budget = job.budget();
    if p.family.label_space().len() != 2 {
        return Err(CliError::Invalid("maximum average degree is defined for binary label spaces".into()));
    }
    let rows = p.family.restrict_within(&p.points, budget.nodes)?;
    let g = build_oig(&rows, &budget)?;
    let edges = g.edge_pairs()?;
    let mad = max_avg_degree(&g, None, &budget)?;
    let (_, dense) = densest_subgraph(g.nodes().len(), &edges);
    let mut r = Report::new(&["instance", "n", "nodes", "edges", "mad_num", "mad_den", "mad", "densest"]);
    let mut row = vec![job.id.clone(), g.n().to_string(), g.nodes().len().to_string(), edges.len().to_string()];
    row.extend(exact(mad));
    row.push(joined(dense.iter().map(|&i| &g.nodes()[i]), ";"));
    r.push(row);
    r.summary = format!("maximum average degree {mad}; densest subgraph has {} nodes\n", dense.len());
    Ok(r)
}

fn policy(job: &Job) -> CliResult<TieBreakPolicy> {
    Ok(match job.params.tie_break.unwrap_or(TieBreakKind::Lex) {
        TieBreakKind::Lex => TieBreakPolicy::FirstLexicographic,
        TieBreakKind::Adversarial => TieBreakPolicy::AdversarialOracle,
        TieBreakKind::Seeded => TieBreakPolicy::SeededRandom(job.seed()?),
    })
}

/// A learner for arbitrary point tuples of the problem's family.
fn transductive_learner(job: &Job, p: &Problem, kind: LearnerKind) -> CliResult<Arc<dyn TransductiveLearner>> {
    Ok(match kind {
        LearnerKind::Oig => Arc::new(OptimalLearner::new(p.family.clone(), job.budget())),
        LearnerKind::Erm => Arc::new(ErmLearner::new(p.family.clone(), policy(job)?, p.loss.clone()).with_budget(job.budget())),
        LearnerKind::Minrect => Arc::new(MinRectangleLearner::new(p.dim)),
        LearnerKind::Nearest => {
            return Err(CliError::Invalid("nearest is a PAC learner; use reduce --direction p2t".into()));
        }
    })
}

fn pac_learner(p: &Problem, kind: LearnerKind) -> CliResult<Box<dyn PacLearner>> {
    Ok(match kind {
        LearnerKind::Minrect => Box::new(MinRectanglePac { d: p.dim }),
        LearnerKind::Nearest => {
            let fallback = p.family.label_space().into_iter().min().unwrap_or(Label::negative());
            Box::new(NearestNeighborPac { fallback })
        }
        other => return Err(CliError::Invalid(format!("{other:?} is not a PAC learner; choose minrect or nearest"))),
    })
}

/// Worst-case (excess) error of the chosen learner on the problem's points.
pub fn evaluate_value(job: &Job) -> CliResult<(String, Rational, Labeling)> {
    let p = job.problem()?;
    let budget = job.budget();
    let kind = job.params.learner.ok_or(CliError::Missing("learner"))?;
    let learner: Arc<dyn TransductiveLearner> = match kind {
        // The optimal learner for this point tuple, agnostic OIG included.
        LearnerKind::Oig => {
            let (_, oig) = problem_oig(&p, &budget)?;
            Arc::new(oig_learner(&optimal_orientation(oig.graph())?, &oig)?)
        }
        other => transductive_learner(job, &p, other)?,
    };
    let wc = worst_case_error(learner.as_ref(), p.family.as_ref(), &p.points, p.setting, &p.loss, &budget)?;
    Ok((learner.name(), wc.error, wc.witness))
}

fn evaluate(job: &Job) -> CliResult<Report> {
    let p = job.problem()?;
    let (name, error, witness) = evaluate_value(job)?;
    let mut r = Report::new(&["learner", "setting", "n", "worst_error_num", "worst_error_den", "worst_error", "witness"]);
    let mut row = vec![name.clone(), setting_name(p.setting), p.points.len().to_string()];
    row.extend(exact(error));
    row.push(witness.to_string());
    r.push(row);
    r.summary = format!("{name}: worst-case {} error {error} at truth {witness}\n", setting_name(p.setting));
    Ok(r)
}

/// Optimal error of the problem's OIG.
pub fn orient_value(job: &Job) -> CliResult<Rational> {
    let p = job.problem()?;
    let (_, oig) = problem_oig(&p, &job.budget())?;
    Ok(orientation_error(&optimal_orientation(oig.graph())?))
}

fn trial_report(est: &PacEstimate<Rational>, delta: Option<Rational>) -> (Report, String) {
    let mut r = Report::new(&["trial", "loss_num", "loss_den", "loss"]);
    for (t, l) in est.per_trial.iter().enumerate() {
        let mut row = vec![t.to_string()];
        row.extend(exact(*l));
        r.push(row);
    }
    let mut s = format!(
        "trials {}: mean {}, median {}, 95th percentile {}, max {}\n",
        est.per_trial.len(),
        est.mean(),
        est.quantile(0.5),
        est.quantile(0.95),
        est.sorted.last().expect("at least one trial")
    );
    if let Some(d) = delta {
        let q = 1.0 - *d.numer() as f64 / *d.denom() as f64;
        let _ = writeln!(s, "(1 - delta)-quantile {}", est.quantile(q));
    }
    (r, s)
}

fn pac_eval(job: &Job) -> CliResult<Report> {
    let p = job.problem()?;
    let dist = p.distribution.clone().ok_or(CliError::Missing("distribution"))?;
    let learner = pac_learner(&p, job.params.learner.ok_or(CliError::Missing("learner"))?)?;
    let n = job.params.samples.ok_or(CliError::Missing("samples"))?;
    let est = pac_error_estimate(learner.as_ref(), &dist, n, job.trials()?, job.seed()?, p.setting, Some(p.family.as_ref()), &p.loss)?;
    let (mut r, summary) = trial_report(&est, None);
    r.summary = format!("{} with {n} samples; {summary}", learner.name());
    Ok(r)
}

fn reduce(job: &Job) -> CliResult<Report> {
    let p = job.problem()?;
    match job.params.direction.ok_or(CliError::Missing("direction"))? {
        Direction::T2p => {
            let dist = p.distribution.clone().ok_or(CliError::Missing("distribution"))?;
            let learner = transductive_learner(job, &p, job.params.learner.unwrap_or(LearnerKind::Oig))?;
            let delta = job.rational(&job.params.delta, "delta")?;
            let block = job.params.block.ok_or(CliError::Missing("block"))?;
            let config = ReductionConfig::new(delta, block, job.rational(&job.params.holdout_eps, "holdout_eps")?);
            let (reps, holdout, n) = (config.repetitions(), config.holdout(), config.samples_needed());
            let t2p = transductive_to_pac(learner, config, p.loss.clone())?;
            let est = pac_error_estimate(&t2p, &dist, n, job.trials()?, job.seed()?, p.setting, Some(p.family.as_ref()), &p.loss)?;
            let (mut r, summary) = trial_report(&est, Some(delta));
            r.summary = format!("{}: {reps} blocks of {block}, holdout {holdout}, {n} samples per trial; {summary}", t2p.name());
            Ok(r)
        }
        Direction::P2t => {
            let seed = job.seed()?;
            let kind = job.params.learner.unwrap_or(LearnerKind::Minrect);
            let wc = match kind {
                LearnerKind::Minrect => {
                    let t = pac_to_transductive(MinRectanglePac { d: p.dim }, seed);
                    (t.name(), worst_case_error(&t, p.family.as_ref(), &p.points, p.setting, &p.loss, &job.budget())?)
                }
                LearnerKind::Nearest => {
                    let fallback = p.family.label_space().into_iter().min().unwrap_or(Label::negative());
                    let t = pac_to_transductive(NearestNeighborPac { fallback }, seed);
                    (t.name(), worst_case_error(&t, p.family.as_ref(), &p.points, p.setting, &p.loss, &job.budget())?)
                }
                other => return Err(CliError::Invalid(format!("{other:?} is not a PAC learner; choose minrect or nearest"))),
            };
            let (name, wc) = wc;
            let mut r = Report::new(&["learner", "setting", "n", "worst_error_num", "worst_error_den", "worst_error", "witness"]);
            let mut row = vec![name.clone(), setting_name(p.setting), p.points.len().to_string()];
            row.extend(exact(wc.error));
            row.push(wc.witness.to_string());
            r.push(row);
            r.summary = format!("{name}: worst-case error {} at truth {}\n", wc.error, wc.witness);
            Ok(r)
        }
    }
}

fn assignment_text(fds: &Fds, values: &[usize]) -> String {
    joined(fds.left().iter().zip(values).map(|(v, &z)| format!("{}={}", v.name, v.domain[z])), ";")
}

fn fds_solve(job: &Job) -> CliResult<Report> {
    let fds = job.fds()?;
    let eps = job.rational(&job.params.eps, "eps")?;
    let mut r = Report::new(&["status", "eps_num", "eps_den", "eps", "max_output_num", "max_output_den", "max_output", "assignment", "certificate"]);
    let mut row = Vec::new();
    match fds.epsilon_assignment(&eps, &job.budget())? {
        EpsOutcome::Feasible(u) => {
            let max = fds.max_output(&u)?;
            row.push("feasible".into());
            row.extend(exact(eps));
            row.extend(exact(max));
            row.push(assignment_text(&fds, &u.values));
            row.push(String::new());
            r.summary = format!("eps-assignment found; largest output {max}\n");
        }
        EpsOutcome::Infeasible(c) => {
            row.push("infeasible".into());
            row.extend(exact(eps));
            row.extend(blank());
            row.push(String::new());
            row.push(joined(c.right_nodes.iter().map(|&b| &fds.right()[b]), ";"));
            r.summary = format!("no eps-assignment; the {} certificate nodes already admit none\n", c.right_nodes.len());
            r.status = Status::Infeasible;
        }
    }
    r.push(row);
    Ok(r)
}

fn fds_minmax(job: &Job) -> CliResult<Report> {
    let fds = job.fds()?;
    let (v, u) = fds.min_max_value(&job.budget())?;
    let mut r = Report::new(&["value_num", "value_den", "value", "assignment"]);
    let mut row = exact(v);
    row.push(assignment_text(&fds, &u.values));
    r.push(row);
    r.summary = format!("min-max value {v}\n");
    Ok(r)
}

fn fds_encode(job: &Job) -> CliResult<Report> {
    let p = job.problem()?;
    let fds: Fds = encode_transductive(p.family.as_ref(), &p.points, p.setting, &p.loss, &job.budget())?;
    let mut r = Report::new(&[]);
    r.document = Some(crate::doc::canonical_json(&FdsDoc::from_fds(&fds)));
    r.summary = format!("FDS with {} left and {} right nodes, {} edges\n", fds.left().len(), fds.right().len(), fds.edges().len());
    Ok(r)
}

fn compactness(job: &Job) -> CliResult<Report> {
    let p = job.problem()?;
    let budget = job.budget();
    let (_, oig) = problem_oig(&p, &budget)?;
    let g = oig.graph();
    let eps = job.rational(&job.params.eps, "eps")?;
    let cap = job.params.max_subset.unwrap_or(g.right_count());
    let rep = compactness_check(g, eps, cap, &budget)?;
    let names = |s: &[usize]| joined(s.iter().map(|&i| &oig.right()[i]), ";");
    let mut r = Report::new(&[
        "instance",
        "setting",
        "n",
        "eps_num",
        "eps_den",
        "eps",
        "whole_feasible",
        "subsets_checked",
        "agrees",
        "first_infeasible_subset",
        "witness",
    ]);
    let mut row = vec![job.id.clone(), setting_name(p.setting), g.n().to_string()];
    row.extend(exact(eps));
    row.push(rep.whole_feasible.to_string());
    row.push(rep.subsets_checked.to_string());
    row.push(rep.agrees.to_string());
    row.push(rep.first_infeasible_subset.as_deref().map(names).unwrap_or_default());
    row.push(rep.witness.as_ref().map(|w| names(&w.right_subset)).unwrap_or_default());
    r.push(row);
    r.summary = format!(
        "eps {eps}: whole graph {}, {} subsets of size <= {cap} checked, finite subsets {}\n",
        if rep.whole_feasible { "feasible" } else { "infeasible" },
        rep.subsets_checked,
        if rep.agrees { "agree" } else { "DISAGREE" }
    );
    if !rep.whole_feasible {
        r.status = Status::Infeasible;
    }
    Ok(r)
}
