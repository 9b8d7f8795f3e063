
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from whmm import (
    KripkeFrame,
    Universe,
    classify_universe,
    detect_ccb,
    eval_formula,
    fixture_path,
    load_frame,
    parse_formula,
)
from whmm.errors import InvalidFrame, UnknownWorld
from whmm.formulas import Atom, Box, Diamond, Implies, Not
from whmm.kripke import Evaluator

from oracles import all_formulas, eval_naive


def frame_of(worlds, edges, valuation):
    return KripkeFrame(worlds, edges, valuation)


DEAD_END = frame_of(["w"], [], {"w": []})


class TestFrameConstruction:
    def test_valuation_covers_all_worlds(self):
        frame = frame_of(["a", "b"], [("a", "b")], {"a": ["p"]})
        assert frame.valuation["b"] == frozenset()

    def test_rejects_undeclared_edge_world(self):
        with pytest.raises(InvalidFrame):
            frame_of(["a"], [("a", "b")], {})

    def test_rejects_undeclared_valuation_world(self):
        with pytest.raises(InvalidFrame):
            frame_of(["a"], [], {"b": ["p"]})

    def test_successors_in_declaration_order(self):
        frame = frame_of(["c", "a", "b"], [("a", "b"), ("a", "c")], {})
        assert frame.successors("a") == ("c", "b")

    def test_unknown_world_raises(self):
        with pytest.raises(UnknownWorld):
            eval_formula(DEAD_END, "nope", Atom("p"))


class TestEvalFormula:
    def test_vacuous_box_at_dead_end(self):
        assert eval_formula(DEAD_END, "w", Box(Atom("p"))) is True

    def test_diamond_false_at_dead_end(self):
        assert eval_formula(DEAD_END, "w", Diamond(Atom("p"))) is False

    def test_undeclared_atom_is_false(self):
        frame = frame_of(["a"], [("a", "a")], {"a": ["p"]})
        assert eval_formula(frame, "a", Atom("undeclared")) is False
        assert eval_formula(frame, "a", Not(Atom("undeclared"))) is True

    def test_relaxed_universe_one(self):
        # chain A -> B -> C where the outcome world records both the done
        # policy and the goal: at A the agent can reach a world from which
        # the policy necessarily yields the goal
        frame = frame_of(
            ["A", "B", "C"],
            [("A", "B"), ("B", "C")],
            {"C": ["B_done", "C"]},
        )
        formula = Diamond(Box(Implies(Atom("B_done"), Atom("C"))))
        assert eval_formula(frame, "A", formula) is True

    def test_three_worlds_fixture_necessity_per_world(self):
        frame = load_frame(fixture_path("three_worlds.json"))
        formula = parse_formula("[](B -> C)")
        truth = {w: eval_formula(frame, w, formula) for w in frame.worlds}
        assert truth == {"A": False, "B": True, "notB": True, "C": True, "notC": True}


class TestDetectCcb:
    def test_probable_case_with_witnesses(self):
        frame = frame_of(
            ["A", "good", "bad"],
            [("A", "good"), ("A", "bad")],
            {"good": ["B_done", "C"], "bad": ["B_done"]},
        )
        verdict = detect_ccb(frame, "A", "B_done", "C")
        assert verdict.relaxed_claim_holds is False
        assert verdict.probable_case_holds is True
        assert verdict.witnesses == {
            "box_counterexample": "bad",
            "possibly_goal": "good",
            "possibly_not_goal": "bad",
        }

    def test_necessity_case(self):
        frame = frame_of(
            ["A", "w1", "w2"],
            [("A", "w1"), ("A", "w2")],
            {"w1": ["B_done", "C"], "w2": ["C"]},
        )
        verdict = detect_ccb(frame, "A", "B_done", "C")
        assert verdict.relaxed_claim_holds is True
        assert verdict.probable_case_holds is False
        assert "box_counterexample" not in verdict.witnesses

    def test_dead_end_is_vacuously_relaxed(self):
        verdict = detect_ccb(DEAD_END, "w", "B_done", "C")
        assert verdict.relaxed_claim_holds is True
        assert verdict.probable_case_holds is False
        assert verdict.witnesses == {}

    def test_verdicts_never_both_true(self):
        for frame in _small_frames(limit=200, seed=5):
            verdict = detect_ccb(frame, frame.worlds[0], "p", "q")
            assert not (verdict.relaxed_claim_holds and verdict.probable_case_holds)

    def test_witnesses_recheck(self):
        claim = Implies(Atom("p"), Atom("q"))
        bad = Implies(Atom("p"), Not(Atom("q")))
        for frame in _small_frames(limit=300, seed=6):
            verdict = detect_ccb(frame, frame.worlds[0], "p", "q")
            w = verdict.witnesses
            if "box_counterexample" in w:
                assert eval_formula(frame, w["box_counterexample"], claim) is False
            if "possibly_goal" in w:
                assert eval_formula(frame, w["possibly_goal"], claim) is True
            if "possibly_not_goal" in w:
                assert eval_formula(frame, w["possibly_not_goal"], bad) is True


class TestClassifyUniverse:
    POLICY, GOAL = "punish_drug_crime", "deaths_minimised"

    @pytest.mark.parametrize("name,expected", [
        ("war_on_drugs_relaxed.frame.json", Universe.RELAXED),
        ("war_on_drugs_empirical.frame.json", Universe.EMPIRICAL),
        ("war_on_drugs_corrected.frame.json", Universe.CORRECTED),
    ])
    def test_bundled_fixture_universes(self, name, expected):
        frame = load_frame(fixture_path(name))
        assert classify_universe(frame, self.POLICY, self.GOAL) == expected

    def test_disjoint_union_is_mixed(self):
        worlds, edges, valuation = [], set(), {}
        for i, name in enumerate(("relaxed", "empirical", "corrected")):
            frame = load_frame(fixture_path(f"war_on_drugs_{name}.frame.json"))
            rename = {w: f"u{i + 1}.{w}" for w in frame.worlds}
            worlds += [rename[w] for w in frame.worlds]
            edges |= {(rename[a], rename[b]) for a, b in frame.access}
            valuation.update({rename[w]: set(atoms) for w, atoms in frame.valuation.items()})
        union = frame_of(worlds, edges, valuation)
        assert classify_universe(union, self.POLICY, self.GOAL) == Universe.MIXED

    def test_no_policy_worlds_is_vacuously_relaxed(self):
        frame = frame_of(["a", "b"], [("a", "b")], {})
        assert classify_universe(frame, "p", "g") == Universe.RELAXED


# --- generators for the property checks ---------------------------------------

def _small_frames(limit, seed):
    """Deterministic sample of frames with <= 3 worlds over atoms {p, q}."""
    import random

    rng = random.Random(seed)
    names = ["w0", "w1", "w2"]
    out = []
    for _ in range(limit):
        n = rng.randint(1, 3)
        worlds = names[:n]
        edges = {(a, b) for a in worlds for b in worlds if rng.random() < 0.4}
        valuation = {w: {a for a in ("p", "q") if rng.random() < 0.5} for w in worlds}
        out.append(frame_of(worlds, edges, valuation))
    return out


@st.composite
def frames(draw):
    n = draw(st.integers(1, 4))
    worlds = [f"w{i}" for i in range(n)]
    edges = draw(st.sets(st.tuples(st.sampled_from(worlds), st.sampled_from(worlds))))
    valuation = {w: draw(st.sets(st.sampled_from(["p", "q"]))) for w in worlds}
    return frame_of(worlds, edges, valuation)


@st.composite
def small_formulas(draw):
    pool = all_formulas(("p", "q"), levels=2)
    return draw(st.sampled_from(pool))


@given(frames(), small_formulas())
@settings(max_examples=300, deadline=None)
def test_matches_naive_semantics(frame, formula):
    ev = Evaluator(frame)
    for world in frame.worlds:
        assert ev.eval(world, formula) == eval_naive(frame, world, formula)


@given(frames(), small_formulas())
@settings(max_examples=200, deadline=None)
def test_box_diamond_duality(frame, formula):
    ev = Evaluator(frame)
    for world in frame.worlds:
        assert ev.eval(world, Box(formula)) == ev.eval(world, Not(Diamond(Not(formula))))


@given(frames())
@settings(max_examples=200, deadline=None)
def test_k_axiom(frame):
    ev = Evaluator(frame)
    p, q = Atom("p"), Atom("q")
    for world in frame.worlds:
        if ev.eval(world, Box(Implies(p, q))) and ev.eval(world, Box(p)):
            assert ev.eval(world, Box(q))


def test_evaluation_is_pure():
    frame = frame_of(["a", "b"], [("a", "b"), ("b", "a")], {"a": ["p"]})
    formula = parse_formula("[](p -> <>p) & <>!p")
    first = [eval_formula(frame, w, formula) for w in frame.worlds]
    again = [eval_formula(frame, w, formula) for w in frame.worlds]
    assert first == again


def test_exhaustive_two_world_frames_against_naive():
    # every relation and valuation over two worlds, all two-level formulas
    pool = all_formulas(("p", "q"), levels=2)
    worlds = ["w0", "w1"]
    pairs = [(a, b) for a in worlds for b in worlds]
    for edge_bits in range(16):
        edges = {pairs[i] for i in range(4) if edge_bits >> i & 1}
        for val_bits in range(16):
            valuation = {
                "w0": {a for i, a in enumerate(("p", "q")) if val_bits >> i & 1},
                "w1": {a for i, a in enumerate(("p", "q")) if val_bits >> (i + 2) & 1},
            }
            frame = frame_of(worlds, edges, valuation)
            ev = Evaluator(frame)
            for formula in pool[:40]:
                for world in worlds:
                    assert ev.eval(world, formula) == eval_naive(frame, world, formula)
