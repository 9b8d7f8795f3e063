"""Kripke frames, the formula language, and the three-universe classifier.

Run:  python demos/03_modal_logic.py
"""

from whmm import (
    KripkeFrame,
    classify_universe,
    detect_ccb,
    eval_formula,
    fixture_path,
    load_frame,
    parse_formula,
)

# Hand-built frame: from the crossroads you can try the plan or skip it;
# trying it can land well or badly.
frame = KripkeFrame(
    worlds=["crossroads", "tried_plan_won", "tried_plan_lost", "skipped"],
    access=[("crossroads", "tried_plan_won"),
            ("crossroads", "tried_plan_lost"),
            ("crossroads", "skipped")],
    valuation={
        "tried_plan_won": ["plan", "goal"],
        "tried_plan_lost": ["plan"],
        "skipped": [],
    },
)

for text in ("[](plan -> goal)",          # the relaxed belief: plan necessarily works
             "<>(plan & goal)",           # possibly it works
             "<>(plan & !goal)",          # possibly it backfires
             "!([](plan -> goal))"):
    formula = parse_formula(text)
    value = eval_formula(frame, "crossroads", formula)
    print(f"{text:25s} at crossroads: {value}")

# The detector bundles exactly that pattern and names its witnesses.
verdict = detect_ccb(frame, "crossroads", "plan", "goal")
print(f"\nnecessity claim holds: {verdict.relaxed_claim_holds}")
print(f"probable case holds:   {verdict.probable_case_holds}")
print(f"witnesses:             {verdict.witnesses}")

# Bundled reconstructions of the three readings of one causal chain:
# the believed chain, its observed inversion, and the corrected picture.
print()
for name in ("relaxed", "empirical", "corrected"):
    f = load_frame(fixture_path(f"war_on_drugs_{name}.frame.json"))
    universe = classify_universe(f, "punish_drug_crime", "deaths_minimised")
    print(f"war_on_drugs_{name:9s} classifies as {universe.value}")
