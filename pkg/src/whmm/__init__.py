"""Weighted hidden Markov models of biased decision-making.

The package has three layers: a probabilistic core (weighted Markov models
whose per-state somatic weights bias transition likelihoods), a logical
layer (finite Kripke frames with a modal model checker and detectors for
causally blind policy beliefs), and an experiment layer (simulated or live
cohorts choosing between four policies, summarized against the uniform
baseline).  ``whmm.service`` hosts the live three-phase protocol over HTTP
and ``whmm.cli`` binds everything into one command-line tool.
"""

from .core import (
    InitialDistribution,
    SomaticWeights,
    StateSpace,
    Trajectory,
    TransitionMatrix,
    ViterbiResult,
    WeightedMarkovModel,
    apply_weights,
    build_model,
    forward_likelihood,
    neutral_weights,
    reach_probability,
    sample_trajectory,
    viterbi_decode,
)
from .estimation import WeightEstimate, estimate_weights, path_log_likelihood, transition_counts
from .formulas import (
    And,
    Atom,
    Box,
    Diamond,
    Formula,
    Implies,
    Not,
    Or,
    atoms_of,
    format_formula,
    parse_formula,
)
from .kripke import (
    CcbVerdict,
    Evaluator,
    KripkeFrame,
    Universe,
    classify_universe,
    detect_ccb,
    eval_formula,
)
from .bridge import (
    AuditReport,
    OutcomeProfile,
    Policy,
    PolicyReport,
    Problem,
    bounded_unroll,
    ccb_audit,
    eventually_all_paths,
    eventually_some_path,
    outcome_profile,
    outcome_profiles,
    policy_atom,
    policy_subframe,
    whmm_to_kripke,
)
from .experiment import (
    AgentConfig,
    ChoiceRecord,
    CohortSummary,
    binomial_two_sided_pvalue,
    choice_distribution,
    plot_rows,
    proportion_interval,
    run_cohort,
    summarize,
    summary_text,
)
from .eventlog import ChoiceLog, append_records, read_records
from .serialization import (
    fixture_dir,
    fixture_path,
    frame_from_dict,
    frame_to_dict,
    load_frame,
    load_model,
    load_problem,
    load_trajectories,
    model_from_dict,
    model_to_dict,
    problem_from_dict,
    problem_to_dict,
    save_json,
    save_trajectories,
)
from . import errors

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
