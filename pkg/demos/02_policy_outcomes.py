"""Score the four policies of a bundled decision problem, truth vs. belief.

The drug-policy fixture has one policy that empirically inverts its goal
while a somatic overlay makes exactly that policy the most attractive one.

Run:  python demos/02_policy_outcomes.py
"""

from whmm import ccb_audit, fixture_path, load_problem, outcome_profiles

problem = load_problem(fixture_path("war_on_drugs.problem.json"))
print(problem.description, "\n")

profiles = outcome_profiles(problem)
print(f"{'policy':6s} {'flag':10s} {'p_goal':>8s} {'p_anti':>8s} "
      f"{'subj_goal':>10s}  classification")
for label in "ABCD":
    p = profiles[label]
    flag = problem.policy(label).flag
    print(f"{label:6s} {flag:10s} {p.p_goal_true:8.4f} {p.p_antigoal_true:8.4f} "
          f"{p.p_goal_subjective:10.4f}  {p.classification}")
print(f"\nrandom-policy baseline (mean true goal reach): {profiles['A'].baseline:.4f}")

# The audit ties it together: the belief-ranked best policy is the one that
# objectively makes the bad outcome more likely.
report = ccb_audit(problem)
print(f"subjective argmax: {', '.join(report.subjective_argmax)}")
print(f"causal-blindness footprint: {report.ccb_footprint}")

verdict = next(r.verdict for r in report.policies if r.policy == "B")
print(f"\npolicy B necessity claim holds: {verdict.relaxed_claim_holds}")
print(f"policy B probable case (possibly works, possibly backfires): "
      f"{verdict.probable_case_holds}")
print(f"witnesses: {verdict.witnesses}")
