"""Worst-case decision solvers: committed and per-observation rules,
conditioning/ignoring diagnostics, and robust pairwise preference."""

import numpy as np
import pytest

from credalkit import (
    CredalSet,
    DecisionRule,
    JointDist,
    LossFn,
    SpaceSpec,
    action_minimax,
    aposteriori_minimax,
    apriori_minimax,
    check_conditioning_optimal,
    check_ignoring_optimal,
    conditional_worst_case,
    credal_marginal_y,
    expected_loss,
    load_builtin,
    walley_compare,
)

from oracles import (
    oracle_commitment_value,
    oracle_single_decision_value,
    random_credal,
    random_loss,
    random_space,
)


@pytest.fixture(scope="module")
def pinned():
    sc = load_builtin("example_2_1")
    return sc.credal_set, sc.loss


@pytest.fixture(scope="module")
def monty():
    sc = load_builtin("monty_hall")
    return sc.credal_set, sc.loss


@pytest.fixture(scope="module")
def coin():
    sc = load_builtin("walley_coin")
    return sc.credal_set, sc.loss


def _worst_of(p, rule, loss):
    return max(expected_loss(v, rule, loss) for v in p.vertices)


# -- committed (before observing) -------------------------------------------

def test_committed_rule_for_pinned_outcome(pinned):
    p, loss = pinned
    res = apriori_minimax(p, loss)
    assert res.value == pytest.approx(1 / 3, abs=1e-9)
    # always guess the frequent outcome, regardless of the observation
    assert np.allclose(res.rule.table[:, 1], 1.0, atol=1e-6)
    assert res.rule.is_constant()


def test_committed_value_matches_deterministic_rule_game(pinned, monty, coin):
    for p, loss in (pinned, monty, coin):
        res = apriori_minimax(p, loss)
        reference = oracle_commitment_value(p.space, p.flat, loss)
        assert res.value == pytest.approx(reference, abs=1e-7)


def test_committed_rule_for_three_doors(monty):
    p, loss = monty
    res = apriori_minimax(p, loss)
    assert res.value == pytest.approx(1 / 3, abs=1e-9)
    # the committed optimum is the deterministic always-switch rule
    expected = DecisionRule.deterministic(p.space, {"G2": "3", "G3": "2"})
    assert np.allclose(res.rule.table, expected.table, atol=1e-6)


def test_committed_worst_case_is_attained(pinned):
    p, loss = pinned
    res = apriori_minimax(p, loss)
    assert _worst_of(p, res.rule, loss) == pytest.approx(res.value, abs=1e-9)
    assert len(res.worst_case_vertices) >= 1
    duals = res.vertex_duals
    assert duals.sum() == pytest.approx(1.0, abs=1e-9)
    assert duals.min() >= -1e-12


@pytest.mark.parametrize("seed", range(8))
def test_committed_solver_is_sound_against_sampled_rules(seed):
    """No sampled rule beats the reported value; the reported rule attains it."""
    rng = np.random.default_rng(7000 + seed)
    space = random_space(rng, nx=2, ny=2, na=2)
    p = random_credal(rng, space, k=3)
    loss = random_loss(rng, space)
    res = apriori_minimax(p, loss)
    assert _worst_of(p, res.rule, loss) <= res.value + 1e-7
    for _ in range(50):
        rule = DecisionRule(space, rng.dirichlet(np.ones(space.na), size=space.nx))
        assert _worst_of(p, rule, loss) >= res.value - 1e-7


@pytest.mark.parametrize("seed", range(4))
def test_committed_value_is_equivariant_under_affine_loss_maps(seed):
    rng = np.random.default_rng(7100 + seed)
    space = random_space(rng, nx=2, ny=3, na=2)
    p = random_credal(rng, space, k=3)
    loss = random_loss(rng, space)
    a, b = 2.5, 0.75
    scaled = LossFn(space, a * loss.table + b)
    plain = apriori_minimax(p, loss)
    mapped = apriori_minimax(p, scaled)
    assert mapped.value == pytest.approx(a * plain.value + b, abs=1e-7)


def test_committed_solver_on_a_singleton_set_is_bayes():
    space = SpaceSpec(("x0", "x1"), ("y0", "y1"), ("a0", "a1"))
    rng = np.random.default_rng(42)
    p = CredalSet(space, [JointDist(space, rng.dirichlet(np.ones(4)).reshape(2, 2))])
    loss = LossFn(space, [[0.0, 1.0], [1.0, 0.0]])
    res = apriori_minimax(p, loss)
    # against a single joint, the committed optimum equals the per-x Bayes act
    joint = p.vertices[0].weights
    bayes = 0.0
    for ix in range(2):
        row = joint[ix]
        bayes += min(row @ loss.table[:, a] for a in range(2))
    assert res.value == pytest.approx(bayes, abs=1e-9)


# -- per-observation ---------------------------------------------------------

def test_per_observation_rule_for_pinned_outcome(pinned):
    p, loss = pinned
    res = aposteriori_minimax(p, loss)
    # conditioning destroys the frequency information: both rows uniform
    assert np.allclose(res.rule.table, 0.5, atol=1e-6)
    assert res.per_x_values == pytest.approx({"0": 0.5, "1": 0.5}, abs=1e-9)
    assert res.value == pytest.approx(0.5, abs=1e-9)


def test_per_observation_rule_for_three_doors(monty):
    p, loss = monty
    res = aposteriori_minimax(p, loss)
    expected = np.array([[0.5, 0.0, 0.5], [0.5, 0.5, 0.0]])
    assert np.allclose(res.rule.table, expected, atol=1e-6)
    assert res.per_x_values == pytest.approx({"G2": 0.5, "G3": 0.5}, abs=1e-9)
    # its worst case over the original set is also 1/2 (up to the canonical
    # rule's tie-break guard, which may shift rows by up to 1e-9)
    assert res.value == pytest.approx(0.5, abs=1e-8)


def test_per_observation_values_match_single_decision_oracle(monty):
    p, loss = monty
    from credalkit import conditional_y_sets

    res = aposteriori_minimax(p, loss)
    sets = conditional_y_sets(p)
    for x, mset in sets.items():
        if mset is None:
            continue
        reference = oracle_single_decision_value(mset.vertices, loss)
        assert res.per_x_values[x] == pytest.approx(reference, abs=1e-7)


def test_per_observation_value_never_beats_committed(pinned, monty, coin):
    for p, loss in (pinned, monty, coin):
        apri = apriori_minimax(p, loss)
        apost = aposteriori_minimax(p, loss)
        # committing can only help: the per-observation rule's global worst
        # case is at least the committed value
        assert apost.value >= apri.value - 1e-9


def test_unreachable_observation_gets_a_uniform_row():
    space = SpaceSpec(("x0", "x1"), ("y0", "y1"), ("a0", "a1"))
    p = CredalSet(space, [JointDist(space, [[0.4, 0.6], [0.0, 0.0]])])
    loss = LossFn(space, [[0.0, 1.0], [1.0, 0.0]])
    res = aposteriori_minimax(p, loss)
    assert res.unconstrained_x == ("x1",)
    assert np.allclose(res.rule.table[1], 0.5)


def test_point_mass_conditional_plays_the_certain_outcome():
    space = SpaceSpec(("x0",), ("y0", "y1"), ("a0", "a1"))
    p = CredalSet(space, [JointDist(space, [[1.0, 0.0]])])
    loss = LossFn(space, [[0.0, 1.0], [1.0, 0.0]])
    res = aposteriori_minimax(p, loss)
    assert res.rule.table[0, 0] == pytest.approx(1.0, abs=1e-6)
    assert res.value == pytest.approx(0.0, abs=1e-9)


def test_conditional_worst_case_of_a_rule(monty):
    p, loss = monty
    switch = DecisionRule.deterministic(p.space, {"G2": "3", "G3": "2"})
    per_x = conditional_worst_case(p, switch, loss)
    assert per_x["G2"] == pytest.approx(0.5, abs=1e-9)
    assert per_x["G3"] == pytest.approx(0.5, abs=1e-9)


# -- one-shot action solver ---------------------------------------------------

def test_action_solver_flattest_tie_break_is_uniform(pinned):
    p, loss = pinned
    my = credal_marginal_y(
        CredalSet(p.space, [p.vertices[0], p.vertices[3]])
    )
    # against the full outcome simplex every action has worst case 1;
    # the canonical answer spreads mass evenly
    from credalkit import conditional_y_sets

    sets = conditional_y_sets(p)
    sol = action_minimax(sets["0"], loss, prefer="flattest")
    assert np.allclose(sol.rho, 0.5, atol=1e-6)
    assert sol.value == pytest.approx(0.5, abs=1e-9)
    assert my is not None


def test_action_solver_pure_tie_break_picks_lowest_index():
    space = SpaceSpec(("x0",), ("y0", "y1"), ("a0", "a1"))
    from credalkit.credal import MarginalSet

    mset = MarginalSet(("y0", "y1"), np.eye(2))
    # both actions carry identical losses, so every mixture is optimal and
    # the pure tie-break must settle on the first action
    loss = LossFn(space, [[0.0, 0.0], [1.0, 1.0]])
    sol = action_minimax(mset, loss, prefer="pure")
    assert sol.pure_index == 0
    assert np.allclose(sol.rho, [1.0, 0.0])
    assert sol.value == pytest.approx(1.0, abs=1e-9)


def test_action_solver_pure_mode_falls_back_when_no_pure_action_is_optimal():
    space = SpaceSpec(("x0",), ("y0", "y1"), ("a0", "a1"))
    from credalkit.credal import MarginalSet

    mset = MarginalSet(("y0", "y1"), np.eye(2))
    loss = LossFn(space, [[0.0, 1.0], [1.0, 0.0]])
    sol = action_minimax(mset, loss, prefer="pure")
    # mixing strictly beats every pure action here
    assert sol.pure_index is None
    assert np.allclose(sol.rho, [0.5, 0.5], atol=1e-6)
    assert sol.value == pytest.approx(0.5, abs=1e-9)


# -- conditioning diagnostics --------------------------------------------------

def test_conditioning_verdict_for_three_doors(monty):
    p, loss = monty
    rep = check_conditioning_optimal(p, loss)
    # marginal + conditional information does not pin the set down, so the
    # committed answer is not licensed by updating alone ...
    assert not rep.hull_equal
    assert rep.verdict == "recombination-fails"
    # ... even though, in this particular problem, the committed rule does
    # happen to attain the per-observation optimum at every observation
    assert rep.agrees
    assert rep.max_gap <= 1e-9


def test_conditioning_verdict_for_pinned_outcome(pinned):
    p, loss = pinned
    rep = check_conditioning_optimal(p, loss)
    assert rep.verdict == "recombination-fails"
    # committing strictly beats updating here
    assert rep.aposteriori.value - rep.apriori.value > 0.1


def test_conditioning_verdict_when_the_hull_is_tight():
    space = SpaceSpec(("x0", "x1"), ("y0", "y1"), ("a0", "a1"))
    # a product set: X-marginal free in a segment, conditionals fixed and
    # equal across x. Recombination recovers the set exactly.
    q = np.array([0.3, 0.7])
    joints = []
    for mx in ([0.4, 0.6], [0.7, 0.3]):
        joints.append(JointDist(space, np.outer(mx, q)))
    p = CredalSet(space, joints)
    loss = LossFn(space, [[0.0, 1.0], [1.0, 0.0]])
    rep = check_conditioning_optimal(p, loss)
    assert rep.hull_equal
    assert rep.full_support
    assert rep.verdict == "conditioning-optimal"
    assert rep.max_gap <= 1e-7


# -- ignoring diagnostics -------------------------------------------------------

def test_ignoring_holds_for_pinned_outcome(pinned):
    p, loss = pinned
    rep = check_ignoring_optimal(p, loss)
    assert rep.verdict == "holds"
    assert rep.is_optimal
    assert rep.identity_residual <= 1e-7
    assert rep.ignoring_value == pytest.approx(1 / 3, abs=1e-7)
    assert rep.ignoring_rule.is_constant()


def test_ignoring_fails_for_three_doors(monty):
    p, loss = monty
    rep = check_ignoring_optimal(p, loss)
    assert rep.verdict == "fails"
    assert rep.witness_vertex is not None
    assert not rep.is_optimal
    assert rep.ignoring_value == pytest.approx(2 / 3, abs=1e-7)
    assert rep.apriori_value == pytest.approx(1 / 3, abs=1e-7)


def test_ignoring_holds_for_the_coin_pair(coin):
    p, loss = coin
    rep = check_ignoring_optimal(p, loss)
    # the independent product of the marginals is one of the members
    assert rep.verdict == "holds"
    assert rep.is_optimal
    assert rep.ignoring_value == pytest.approx(0.5, abs=1e-7)


# -- robust pairwise preference -------------------------------------------------

def test_preference_between_switching_and_staying(monty):
    p, loss = monty
    switch = DecisionRule.deterministic(p.space, {"G2": "3", "G3": "2"})
    stay = DecisionRule.deterministic(p.space, {"G2": "1", "G3": "1"})
    cmp = walley_compare(switch, stay, p, loss)
    assert cmp.relation == "first-preferred"
    assert cmp.s12 == pytest.approx(-1 / 3, abs=1e-9)
    assert cmp.s21 == pytest.approx(1 / 3, abs=1e-9)


def test_preference_is_antisymmetric(monty):
    p, loss = monty
    switch = DecisionRule.deterministic(p.space, {"G2": "3", "G3": "2"})
    stay = DecisionRule.deterministic(p.space, {"G2": "1", "G3": "1"})
    forward = walley_compare(switch, stay, p, loss)
    backward = walley_compare(stay, switch, p, loss)
    assert backward.relation == "second-preferred"
    assert backward.s12 == pytest.approx(forward.s21, abs=1e-12)


def test_identical_rules_are_equivalent(monty):
    p, loss = monty
    rule = DecisionRule.uniform(p.space)
    cmp = walley_compare(rule, rule, p, loss)
    assert cmp.relation == "equivalent"
    assert cmp.s12 == pytest.approx(0.0, abs=1e-12)


def test_incomparable_rules_exist(pinned):
    p, loss = pinned
    r1 = DecisionRule.deterministic(p.space, {"0": "0", "1": "1"})
    r2 = DecisionRule.deterministic(p.space, {"0": "1", "1": "0"})
    cmp = walley_compare(r1, r2, p, loss)
    assert cmp.relation == "incomparable"
    assert cmp.s12 > 0 and cmp.s21 > 0
