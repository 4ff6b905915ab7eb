//! Per-domain agent rosters, interaction patterns, and step text.

use rand::Rng;

use crate::trace::{ActionType, Domain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pattern {
    SequentialReviewLoop,
    HierarchicalDispatch,
    PipelineFeedback,
    IterativeRefinement,
    ParallelAnalysis,
    ConsultationChain,
    DocumentPipeline,
    AdaptiveLoop,
    Aggregation,
    IncidentResponse,
}

impl Pattern {
    pub fn as_str(self) -> &'static str {
        match self {
            Pattern::SequentialReviewLoop => "sequential+review-loop",
            Pattern::HierarchicalDispatch => "hierarchical-dispatch",
            Pattern::PipelineFeedback => "pipeline+feedback",
            Pattern::IterativeRefinement => "iterative-refinement",
            Pattern::ParallelAnalysis => "parallel-analysis",
            Pattern::ConsultationChain => "consultation-chain",
            Pattern::DocumentPipeline => "document-pipeline",
            Pattern::AdaptiveLoop => "adaptive-loop",
            Pattern::Aggregation => "aggregation",
            Pattern::IncidentResponse => "incident-response",
        }
    }
}

/// One run of consecutive steps by a single role.
#[derive(Debug, Clone, Copy)]
struct Phase {
    role: usize,
    action: ActionType,
    min_run: usize,
    max_run: usize,
}

const fn ph(role: usize, action: ActionType, min_run: usize, max_run: usize) -> Phase {
    Phase {
        role,
        action,
        min_run,
        max_run,
    }
}

/// Static description of how one domain's workflow unfolds. Loops are
/// unrolled: the body repeats, each iteration contributing fresh steps.
#[derive(Debug, Clone)]
pub struct DomainTemplate {
    pub domain: Domain,
    pub roles: &'static [&'static str],
    pub pattern: Pattern,
    prefix: &'static [Phase],
    body: &'static [Phase],
    suffix: Phase,
    /// The task the agents collaborate on.
    pub subjects: &'static [&'static str],
    /// Identifiers that appear in rules and hand-offs.
    pub variables: &'static [&'static str],
    /// Things a careful step verifies.
    pub checks: &'static [&'static str],
    /// Noun for the artifact each step emits.
    pub artifact: &'static str,
}

/// One planned step of a clean trace, before text is rendered.
#[derive(Debug, Clone, PartialEq)]
pub struct StepPlan {
    pub role: usize,
    pub action: ActionType,
}

use ActionType::*;

static TEMPLATES: [DomainTemplate; 10] = [
    DomainTemplate {
        domain: Domain::Coding,
        roles: &["Planner", "Coder", "Reviewer", "Executor"],
        pattern: Pattern::SequentialReviewLoop,
        prefix: &[ph(0, Plan, 1, 3)],
        body: &[ph(1, Code, 2, 5), ph(2, Review, 1, 3)],
        suffix: ph(3, Execute, 1, 1),
        subjects: &["an average function", "a csv parser", "a rate limiter", "a cache layer", "a date formatter"],
        variables: &["total", "count", "batch_size", "max_items", "offset", "threshold", "row_index", "limit"],
        checks: &["empty input", "integer overflow", "null values", "boundary indices", "unicode input"],
        artifact: "patch",
    },
    DomainTemplate {
        domain: Domain::CustomerService,
        roles: &["Router", "Specialist", "Resolver", "Logger"],
        pattern: Pattern::HierarchicalDispatch,
        prefix: &[ph(0, Analyze, 1, 3)],
        body: &[ph(1, Analyze, 2, 5), ph(0, Message, 1, 3)],
        suffix: ph(3, Other, 1, 1),
        subjects: &["a refund request", "a billing dispute", "a login issue", "a delivery delay", "a plan upgrade"],
        variables: &["refund_amount", "account_tier", "ticket_priority", "days_open", "credit_limit", "order_total"],
        checks: &["account ownership", "refund eligibility", "order history", "policy window", "payment status"],
        artifact: "ticket note",
    },
    DomainTemplate {
        domain: Domain::Research,
        roles: &["Searcher", "Analyzer", "Synthesizer", "Writer"],
        pattern: Pattern::PipelineFeedback,
        prefix: &[ph(0, Search, 1, 3)],
        body: &[ph(1, Analyze, 2, 5), ph(2, Synthesize, 1, 3)],
        suffix: ph(3, Write, 1, 1),
        subjects: &["sleep and memory studies", "battery chemistry trends", "urban heat islands", "protein folding methods"],
        variables: &["sample_size", "effect_size", "p_threshold", "year_cutoff", "citation_count", "study_weight"],
        checks: &["source credibility", "sample overlap", "publication date", "retracted papers", "unit consistency"],
        artifact: "summary",
    },
    DomainTemplate {
        domain: Domain::Planning,
        roles: &["Scheduler", "Optimizer", "Validator", "Notifier"],
        pattern: Pattern::IterativeRefinement,
        prefix: &[ph(0, Plan, 1, 3)],
        body: &[ph(1, Analyze, 2, 5), ph(2, Validate, 1, 3)],
        suffix: ph(3, Message, 1, 1),
        subjects: &["a team offsite", "a conference agenda", "a shift rota", "a product launch", "a venue booking"],
        variables: &["slot_count", "max_hours", "room_capacity", "travel_time", "buffer_minutes", "headcount"],
        checks: &["calendar conflicts", "room availability", "time zones", "holiday dates", "travel buffers"],
        artifact: "schedule",
    },
    DomainTemplate {
        domain: Domain::Trading,
        roles: &["Analyst", "Strategist", "RiskManager", "Executor"],
        pattern: Pattern::ParallelAnalysis,
        prefix: &[ph(0, Analyze, 1, 3)],
        body: &[ph(1, Plan, 2, 5), ph(2, Validate, 1, 3)],
        suffix: ph(3, Execute, 1, 1),
        subjects: &["a momentum position", "a hedge rebalance", "a pairs trade", "a sector rotation"],
        variables: &["position_size", "stop_loss", "max_drawdown", "entry_price", "exposure", "volatility"],
        checks: &["margin headroom", "position limits", "liquidity", "market hours", "correlation caps"],
        artifact: "order ticket",
    },
    DomainTemplate {
        domain: Domain::Healthcare,
        roles: &["Triager", "Specialist", "Pharmacist", "Coordinator"],
        pattern: Pattern::ConsultationChain,
        prefix: &[ph(0, Analyze, 1, 3)],
        body: &[ph(1, Analyze, 2, 5), ph(2, Review, 1, 3)],
        suffix: ph(3, Message, 1, 1),
        subjects: &["a chest pain referral", "a diabetes follow up", "a post surgery plan", "an allergy consult"],
        variables: &["dose_mg", "heart_rate", "patient_age", "creatinine", "max_daily_dose", "weight_kg"],
        checks: &["drug interactions", "allergy history", "renal function", "dosage range", "consent status"],
        artifact: "care plan",
    },
    DomainTemplate {
        domain: Domain::Legal,
        roles: &["Researcher", "Analyst", "Drafter", "Reviewer"],
        pattern: Pattern::DocumentPipeline,
        prefix: &[ph(0, Search, 1, 3)],
        body: &[ph(1, Analyze, 2, 5), ph(2, Write, 1, 3)],
        suffix: ph(3, Review, 1, 1),
        subjects: &["a supplier contract", "a lease renewal", "an employment agreement", "a licensing deal"],
        variables: &["notice_days", "liability_cap", "term_months", "penalty_rate", "renewal_count", "deposit"],
        checks: &["governing law", "termination clauses", "defined terms", "signature blocks", "precedent dates"],
        artifact: "memo",
    },
    DomainTemplate {
        domain: Domain::Education,
        roles: &["Assessor", "Tutor", "ContentGenerator", "Evaluator"],
        pattern: Pattern::AdaptiveLoop,
        prefix: &[ph(0, Analyze, 1, 3)],
        body: &[ph(1, Message, 2, 5), ph(2, Write, 1, 3)],
        suffix: ph(3, Review, 1, 1),
        subjects: &["fractions practice", "essay structure", "photosynthesis basics", "linear equations"],
        variables: &["mastery_score", "difficulty", "attempts", "pass_mark", "streak", "hint_budget"],
        checks: &["prerequisite skills", "answer keys", "reading level", "learning goals", "prior attempts"],
        artifact: "lesson",
    },
    DomainTemplate {
        domain: Domain::Finance,
        roles: &["DataCollector", "Analyst", "Advisor", "Reporter"],
        pattern: Pattern::Aggregation,
        prefix: &[ph(0, Search, 1, 3)],
        body: &[ph(1, Analyze, 2, 5), ph(2, Plan, 1, 3)],
        suffix: ph(3, Write, 1, 1),
        subjects: &["a retirement plan", "a college fund", "a mortgage refinance", "a tax strategy"],
        variables: &["annual_income", "savings_rate", "risk_score", "horizon_years", "fee_ratio", "allocation"],
        checks: &["account balances", "tax brackets", "fee disclosures", "risk profile", "income sources"],
        artifact: "statement",
    },
    DomainTemplate {
        domain: Domain::Devops,
        roles: &["Monitor", "Diagnoser", "Remediator", "Verifier"],
        pattern: Pattern::IncidentResponse,
        prefix: &[ph(0, Analyze, 1, 3)],
        body: &[ph(1, Analyze, 2, 5), ph(2, Execute, 1, 3)],
        suffix: ph(3, Validate, 1, 1),
        subjects: &["a latency spike", "a disk pressure alert", "a certificate expiry", "a memory leak"],
        variables: &["cpu_percent", "replica_count", "latency_ms", "disk_free_gb", "retry_limit", "pool_size"],
        checks: &["rollback plan", "health probes", "change window", "dependency status", "alert routing"],
        artifact: "runbook entry",
    },
];

impl DomainTemplate {
    pub fn for_domain(domain: Domain) -> &'static DomainTemplate {
        TEMPLATES
            .iter()
            .find(|t| t.domain == domain)
            .expect("every domain has a template")
    }

    pub fn all() -> &'static [DomainTemplate] {
        &TEMPLATES
    }

    /// Plans exactly `len` steps: prefix, then the unrolled loop body until
    /// the budget is used, then the closing phase.
    pub fn plan<R: Rng>(&self, len: usize, rng: &mut R) -> Vec<StepPlan> {
        let budget = len - self.suffix.max_run;
        let mut plan = Vec::with_capacity(len);
        let phases = self.prefix.iter().chain(self.body.iter().cycle());
        for p in phases {
            if plan.len() >= budget {
                break;
            }
            let run = rng.gen_range(p.min_run..=p.max_run).min(budget - plan.len());
            plan.extend((0..run).map(|_| StepPlan {
                role: p.role,
                action: p.action,
            }));
        }
        plan.push(StepPlan {
            role: self.suffix.role,
            action: self.suffix.action,
        });
        plan
    }
}
