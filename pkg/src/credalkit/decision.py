"""Worst-case-optimal decision rules against a credal set.

Two solvers live here.  The commitment solver picks one randomized rule
minimising the worst expected loss over the whole set; the per-observation
solver conditions first and then minimises the worst conditional expected
loss separately at each observation.  Both are plain linear programs over
the vertex parameterisation of the set, and both report the dual weights on
the vertex constraints (the adversary's mixture).

Tie handling: a worst-case-optimal action distribution is generally a face,
not a point.  ``action_minimax`` therefore resolves ties deterministically;
callers choose between the flattest optimum (minimise the largest action
weight — used for per-observation rules) and a deterministic optimum when
one exists (used by the game solvers).  Either choice stays on the optimal
face, so values and certificates are unaffected.
"""

from dataclasses import dataclass, field

import numpy as np

from .core import DecisionRule, expected_loss
from .credal import (
    IRREDUNDANT_TOL,
    condition_on_x,
    credal_marginal_y,
)
from .errors import NumericalError
from .numerics import LinearProgram, solve_lp

VALUE_TOL = 1e-7
_TIE_GUARD = 1e-9


@dataclass
class ActionSolution:
    """One-shot game against a polytope of outcome distributions."""

    rho: np.ndarray          # action distribution
    value: float             # minimax value
    vertex_weights: np.ndarray  # adversary mixture over polytope vertices
    worst: float             # worst case actually attained by rho
    pure_index: int | None   # set when rho is a pure action chosen on a tie


def _stage1(e):
    k, na = e.shape
    c = np.zeros(na + 1)
    c[-1] = 1.0
    a_ub = np.hstack([e, -np.ones((k, 1))])
    a_eq = np.zeros((1, na + 1))
    a_eq[0, :na] = 1.0
    lower = np.concatenate([np.zeros(na), [-np.inf]])
    sol = solve_lp(
        LinearProgram(c=c, a_eq=a_eq, b_eq=[1.0], a_ub=a_ub, b_ub=np.zeros(k), lower=lower)
    )
    if sol.status != "optimal":
        raise NumericalError(f"action game LP ended {sol.status}")
    rho = np.clip(sol.x[:na], 0.0, None)
    rho /= rho.sum()
    weights = np.clip(-sol.dual_ub, 0.0, None)
    total = weights.sum()
    if total <= 0.0:
        raise NumericalError("degenerate adversary weights on the action game")
    return rho, float(sol.objective), weights / total


def _stage2_flattest(e, value):
    """Minimise the largest action weight over the optimal face."""
    k, na = e.shape
    c = np.zeros(na + 1)
    c[-1] = 1.0
    rows = [np.hstack([e, np.zeros((k, 1))])]
    rhs = [np.full(k, value + _TIE_GUARD)]
    rows.append(np.hstack([np.eye(na), -np.ones((na, 1))]))
    rhs.append(np.zeros(na))
    a_eq = np.zeros((1, na + 1))
    a_eq[0, :na] = 1.0
    sol = solve_lp(
        LinearProgram(
            c=c, a_eq=a_eq, b_eq=[1.0], a_ub=np.vstack(rows), b_ub=np.concatenate(rhs)
        )
    )
    if sol.status != "optimal":
        return None
    rho = np.clip(sol.x[:na], 0.0, None)
    return rho / rho.sum()


def action_minimax(marginal_set, loss, prefer="flattest"):
    """Minimax action distribution against a set of outcome distributions.

    ``prefer='flattest'`` re-solves over the optimal face for the most
    uniform optimum; ``prefer='pure'`` returns a deterministic action
    whenever one is optimal (smallest action index wins); ``prefer=None``
    returns the plain LP solution.
    """
    e = marginal_set.vertices @ loss.table
    rho, value, weights = _stage1(e)
    pure_index = None
    if prefer == "pure":
        worst_pure = e.max(axis=0)
        attaining = np.nonzero(worst_pure <= value + _TIE_GUARD)[0]
        if attaining.size:
            pure_index = int(attaining[0])
            rho = np.zeros(e.shape[1])
            rho[pure_index] = 1.0
        else:
            flat = _stage2_flattest(e, value)
            if flat is not None:
                rho = flat
    elif prefer == "flattest":
        flat = _stage2_flattest(e, value)
        if flat is not None:
            rho = flat
    worst = float((e @ rho).max())
    return ActionSolution(
        rho=rho, value=value, vertex_weights=weights, worst=worst, pure_index=pure_index
    )


@dataclass
class MinimaxResult:
    """Solution of one of the two worst-case problems."""

    rule: DecisionRule
    value: float
    worst_case_vertices: tuple          # indices of vertices attaining value
    per_x_values: dict | None = None    # per-observation values (conditional solver)
    vertex_duals: np.ndarray | None = None  # adversary mixture (commitment solver)
    unconstrained_x: tuple = field(default=())  # observations with no mass anywhere

    def as_dict(self, space):
        return {
            "rule": {x: self.rule.table[i].tolist() for i, x in enumerate(space.x_labels)},
            "value": self.value,
            "worst_case_vertices": list(self.worst_case_vertices),
            "per_x_values": self.per_x_values,
            "vertex_duals": None if self.vertex_duals is None else self.vertex_duals.tolist(),
            "unconstrained_x": list(self.unconstrained_x),
        }


def _vertex_action_losses(p, loss):
    """Per-vertex tables W[j][x, a] = sum_y V_j(x, y) L(y, a)."""
    return np.array([v.weights @ loss.table for v in p.vertices])


def apriori_minimax(p, loss):
    """Best single rule against the whole set (commitment problem).

    min_rule max_j sum_{x,a} rule(x,a) W[j][x,a]; the duals on the vertex
    rows are the adversary's optimal mixture.
    """
    space = p.space
    contrib = _vertex_action_losses(p, loss)
    k = contrib.shape[0]
    nv = space.nx * space.na
    c = np.zeros(nv + 1)
    c[-1] = 1.0
    a_ub = np.hstack([contrib.reshape(k, nv), -np.ones((k, 1))])
    a_eq = np.zeros((space.nx, nv + 1))
    for ix in range(space.nx):
        a_eq[ix, ix * space.na:(ix + 1) * space.na] = 1.0
    lower = np.concatenate([np.zeros(nv), [-np.inf]])
    sol = solve_lp(
        LinearProgram(
            c=c, a_eq=a_eq, b_eq=np.ones(space.nx), a_ub=a_ub, b_ub=np.zeros(k), lower=lower
        )
    )
    if sol.status != "optimal":
        raise NumericalError(f"commitment LP ended {sol.status}")
    table = np.clip(sol.x[:nv].reshape(space.nx, space.na), 0.0, None)
    table /= table.sum(axis=1, keepdims=True)
    rule = DecisionRule(space, table)
    value = float(sol.objective)
    duals = np.clip(-sol.dual_ub, 0.0, None)
    duals /= duals.sum()
    per_vertex = np.array([expected_loss(v, rule, loss) for v in p.vertices])
    worst = tuple(int(j) for j in np.nonzero(per_vertex >= value - VALUE_TOL)[0])
    return MinimaxResult(
        rule=rule, value=value, worst_case_vertices=worst, vertex_duals=duals
    )


def aposteriori_minimax(p, loss):
    """Condition on each observation, then solve the one-shot action game.

    Observations no member can realise get a uniform row and are listed in
    ``unconstrained_x``.  ``value`` is the worst expected loss of the
    assembled rule over the original (unconditioned) set, so it is directly
    comparable with the commitment value.
    """
    space = p.space
    table = np.zeros((space.nx, space.na))
    per_x = {}
    unconstrained = []
    for ix, x in enumerate(space.x_labels):
        cond = condition_on_x(p, x)
        if cond is None:
            table[ix] = 1.0 / space.na
            unconstrained.append(x)
            continue
        sol = action_minimax(credal_marginal_y(cond), loss, prefer="flattest")
        table[ix] = sol.rho
        per_x[x] = sol.value
    rule = DecisionRule(space, table)
    per_vertex = np.array([expected_loss(v, rule, loss) for v in p.vertices])
    value = float(per_vertex.max())
    worst = tuple(int(j) for j in np.nonzero(per_vertex >= value - VALUE_TOL)[0])
    return MinimaxResult(
        rule=rule,
        value=value,
        worst_case_vertices=worst,
        per_x_values=per_x,
        unconstrained_x=tuple(unconstrained),
    )


def conditional_worst_case(p, rule, loss):
    """Worst conditional expected loss of each of the rule's rows.

    For every observation with a defined conditional set, evaluate that
    row against the conditional outcome polytope's vertices and take the
    maximum.  Returns {x label: value}.
    """
    out = {}
    for ix, x in enumerate(p.space.x_labels):
        cond = condition_on_x(p, x)
        if cond is None:
            continue
        e = credal_marginal_y(cond).vertices @ loss.table
        out[x] = float((e @ rule.table[ix]).max())
    return out


@dataclass(frozen=True)
class ConditioningReport:
    """Does conditioning reproduce the commitment answer here?"""

    hull_equal: bool          # set equals its marginal/conditional recombination
    full_support: bool        # every member gives every observation mass
    apriori: MinimaxResult
    aposteriori: MinimaxResult
    per_x_gap: dict           # apriori row's conditional worst minus per-x value
    max_gap: float
    agrees: bool
    verdict: str

    def as_dict(self, space):
        return {
            "hull_equal": self.hull_equal,
            "full_support": self.full_support,
            "apriori": self.apriori.as_dict(space),
            "aposteriori": self.aposteriori.as_dict(space),
            "per_x_gap": self.per_x_gap,
            "max_gap": self.max_gap,
            "agrees": self.agrees,
            "verdict": self.verdict,
        }


def check_conditioning_optimal(p, loss, tol=1e-6):
    """Test the recombination identity and compare the two solvers.

    When the set equals its recombination hull, the commitment-optimal
    rule is also optimal conditionally at every observation it can reach,
    so the per-observation gaps vanish.
    """
    from .credal import build_hull, credal_equal  # local to avoid cycle at import

    hull_equal = credal_equal(p, build_hull(p))
    full_support = all(
        v.weights.sum(axis=1).min() > 1e-9 for v in p.vertices
    )
    apri = apriori_minimax(p, loss)
    apost = aposteriori_minimax(p, loss)
    cond_worst = conditional_worst_case(p, apri.rule, loss)
    gaps = {
        x: cond_worst[x] - apost.per_x_values[x]
        for x in cond_worst
        if x in apost.per_x_values
    }
    max_gap = max((abs(g) for g in gaps.values()), default=0.0)
    agrees = max_gap <= tol
    if hull_equal and agrees:
        verdict = "conditioning-optimal"
    elif hull_equal:
        verdict = "recombination-holds-rule-differs"
    else:
        verdict = "recombination-fails"
    return ConditioningReport(
        hull_equal=hull_equal,
        full_support=full_support,
        apriori=apri,
        aposteriori=apost,
        per_x_gap=gaps,
        max_gap=float(max_gap),
        agrees=agrees,
        verdict=verdict,
    )


def _independent_member_residual(p, q):
    """How far the set is from containing a product with outcome part q.

    min sum(s) over lam, m, s of  | sum_k lam_k V_k - m x q |_1  with both
    lam and m on their simplices; 0 means some member factorises as m x q.
    """
    space = p.space
    k = p.n_vertices
    nx, ny = space.nx, space.ny
    ncell = nx * ny
    nvar = k + nx + 2 * ncell
    a_eq = np.zeros((ncell + 2, nvar))
    b_eq = np.zeros(ncell + 2)
    for cell in range(ncell):
        ix, iy = divmod(cell, ny)
        a_eq[cell, :k] = p.flat[:, cell]
        a_eq[cell, k + ix] = -q[iy]
        a_eq[cell, k + nx + cell] = 1.0
        a_eq[cell, k + nx + ncell + cell] = -1.0
    a_eq[ncell, :k] = 1.0
    b_eq[ncell] = 1.0
    a_eq[ncell + 1, k:k + nx] = 1.0
    b_eq[ncell + 1] = 1.0
    c = np.concatenate([np.zeros(k + nx), np.ones(2 * ncell)])
    sol = solve_lp(LinearProgram(c=c, a_eq=a_eq, b_eq=b_eq))
    if sol.status != "optimal":
        raise NumericalError(f"factorisation LP ended {sol.status}")
    return float(sol.objective)


@dataclass(frozen=True)
class IgnoringReport:
    """Can a rule that never looks at the observation be optimal?"""

    verdict: str                 # holds / fails / indeterminate
    witness_vertex: int | None   # outcome-marginal vertex that fails to factorise
    samples_checked: int
    ignoring_rule: DecisionRule
    ignoring_value: float        # worst case of that rule over the whole set
    marginal_value: float        # one-shot value against the outcome marginal set
    apriori_value: float
    is_optimal: bool
    identity_residual: float     # |ignoring_value - marginal_value|

    def as_dict(self, space):
        return {
            "verdict": self.verdict,
            "witness_vertex": self.witness_vertex,
            "samples_checked": self.samples_checked,
            "ignoring_rule": {
                x: self.ignoring_rule.table[i].tolist()
                for i, x in enumerate(space.x_labels)
            },
            "ignoring_value": self.ignoring_value,
            "marginal_value": self.marginal_value,
            "apriori_value": self.apriori_value,
            "is_optimal": self.is_optimal,
            "identity_residual": self.identity_residual,
        }


def check_ignoring_optimal(p, loss, tol=1e-6, n_samples=100, seed=0):
    """Test whether ignoring the observation costs anything here.

    The sufficient condition checked: every outcome distribution in the
    outcome-marginal set extends to a product distribution inside the set.
    It is certified on the marginal polytope's vertices; because the
    condition need not be preserved under mixing, a seeded sample of
    interior points is also tested, giving verdicts 'holds' (all pass),
    'fails' (a vertex fails, with witness), or 'indeterminate' (vertices
    pass, some sampled interior point fails).

    Independently of the verdict, the best observation-ignoring rule, its
    worst-case value, and the commitment value are reported; when the
    condition holds, the two values agree and the constant row solves the
    one-shot game against the outcome-marginal set.
    """
    my = credal_marginal_y(p)
    verdict = "holds"
    witness = None
    for i, q in enumerate(my.vertices):
        if _independent_member_residual(p, q) > IRREDUNDANT_TOL:
            verdict = "fails"
            witness = i
            break
    samples_checked = 0
    if verdict == "holds" and my.n_vertices > 1:
        rng = np.random.default_rng(seed)
        for _ in range(n_samples):
            lam = rng.dirichlet(np.ones(my.n_vertices))
            q = lam @ my.vertices
            samples_checked += 1
            if _independent_member_residual(p, q) > IRREDUNDANT_TOL:
                verdict = "indeterminate"
                break

    sol = action_minimax(my, loss, prefer="flattest")
    space = p.space
    rule = DecisionRule(space, np.tile(sol.rho, (space.nx, 1)))
    ignoring_value = max(expected_loss(v, rule, loss) for v in p.vertices)
    apri_value = apriori_minimax(p, loss).value
    return IgnoringReport(
        verdict=verdict,
        witness_vertex=witness,
        samples_checked=samples_checked,
        ignoring_rule=rule,
        ignoring_value=float(ignoring_value),
        marginal_value=sol.value,
        apriori_value=apri_value,
        is_optimal=bool(abs(ignoring_value - apri_value) <= tol),
        identity_residual=float(abs(ignoring_value - sol.value)),
    )


@dataclass(frozen=True)
class WalleyComparison:
    """Robust pairwise preference between two rules.

    ``s12`` is the largest expected excess loss of the first rule over the
    second across the set; the first rule is (weakly) preferred when that
    excess is never positive.
    """

    relation: str  # first-preferred / second-preferred / equivalent / incomparable
    s12: float
    s21: float

    def as_dict(self):
        return {"relation": self.relation, "s12": self.s12, "s21": self.s21}


def walley_compare(rule1, rule2, p, loss, tol=1e-9):
    diff = rule1.loss_matrix(loss) - rule2.loss_matrix(loss)
    per_vertex = p.flat @ diff.ravel()
    s12 = float(per_vertex.max())
    s21 = float(-per_vertex.min())
    first = s12 <= tol
    second = s21 <= tol
    if first and second:
        relation = "equivalent"
    elif first:
        relation = "first-preferred"
    elif second:
        relation = "second-preferred"
    else:
        relation = "incomparable"
    return WalleyComparison(relation=relation, s12=s12, s21=s21)
