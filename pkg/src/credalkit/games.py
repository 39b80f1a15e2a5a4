"""Zero-sum games between a bookie choosing from a credal set and an agent.

In the commitment game the bookie mixes over the set's extreme joints and
the agent commits to a full rule before seeing anything; in the observation
game both act after a particular observation, the bookie mixing over the
conditioned extreme joints and the agent choosing one action distribution.
Both games are solved by LP, the bookie's equilibrium mixture is read off
the dual variables, and every solve returns a machine-checked certificate.

The certificate verifies, at the reported equilibrium (sigma*, delta*) with
aggregate distribution Pr*:

  (1) support: every vertex the bookie plays is worst-case for delta*;
  (2) the four-way equality chain
        E_Pr*[delta*] = min_delta E_Pr*[delta]
                      = max_P min_delta E_P[delta]
                      = min_delta max_P E_P[delta]
                      = max_P E_P[delta*],
      where max_P ranges over the credal set (computed as an LP over the
      vertex mixture, not a vertex scan: the inner minimum makes the
      middle quantity concave, so scanning vertices would be wrong);
  (3) best-response gaps for both players.

Residuals above tolerance raise ``CertificateError`` carrying the full
breakdown; nothing is clamped.
"""

from dataclasses import dataclass

import numpy as np

from .core import DecisionRule, JointDist, expected_loss
from .credal import condition_on_x, credal_marginal_y
from .decision import (
    ActionSolution,
    action_minimax,
    aposteriori_minimax,
    apriori_minimax,
    conditional_worst_case,
    _vertex_action_losses,
)
from .errors import CertificateError, EmptyConditionalError, NumericalError
from .numerics import LinearProgram, solve_lp

SUPPORT_EPS = 1e-9


@dataclass(frozen=True)
class BookieMixture:
    """Mixture over extreme joints of the (possibly conditioned) set."""

    vertex_indices: tuple
    weights: np.ndarray

    def as_dict(self):
        return {
            "vertex_indices": list(self.vertex_indices),
            "weights": np.asarray(self.weights).tolist(),
        }


@dataclass(frozen=True)
class Equilibrium:
    bookie: BookieMixture
    agent: DecisionRule
    value: float
    aggregate: JointDist
    observed_x: str | None = None

    def as_dict(self):
        space = self.agent.space
        return {
            "bookie": self.bookie.as_dict(),
            "agent": {x: self.agent.table[i].tolist() for i, x in enumerate(space.x_labels)},
            "value": self.value,
            "aggregate": self.aggregate.weights.tolist(),
            "observed_x": self.observed_x,
        }


@dataclass(frozen=True)
class EquilibriumCertificate:
    """Residuals proving the reported pair is an equilibrium."""

    chain_values: tuple       # the five quantities of the equality chain
    chain_residuals: tuple    # |q1-q2|, |q2-q3|, |q3-q4|, |q4-q5|
    support_residual: float   # worst |E_vertex - max E| over the support
    agent_gap: float          # E_Pr*[delta*] - min_delta E_Pr*[delta]
    bookie_gap: float         # max_P E_P[delta*] - E_Pr*[delta*]

    @property
    def max_residual(self):
        return max(
            max(self.chain_residuals),
            self.support_residual,
            abs(self.agent_gap),
            abs(self.bookie_gap),
        )

    def passes(self, tol=1e-6):
        return self.max_residual <= tol

    def as_dict(self):
        return {
            "chain_values": list(self.chain_values),
            "chain_residuals": list(self.chain_residuals),
            "support_residual": self.support_residual,
            "agent_gap": self.agent_gap,
            "bookie_gap": self.bookie_gap,
            "max_residual": self.max_residual,
        }


def _maximin_over_mixtures(action_losses):
    """max over vertex mixtures of the mixture's own best-response value.

    ``action_losses[k, x, a]``: expected loss of action a at observation x
    under vertex k (unnormalised by observation mass).  Epigraph variables
    u_x <= sum_k lam_k W[k,x,a] for every a; maximise sum_x u_x.
    """
    k, nx, na = action_losses.shape
    nvar = k + nx
    c = np.zeros(nvar)
    c[k:] = -1.0
    rows = []
    for ix in range(nx):
        for ia in range(na):
            row = np.zeros(nvar)
            row[:k] = -action_losses[:, ix, ia]
            row[k + ix] = 1.0
            rows.append(row)
    a_eq = np.zeros((1, nvar))
    a_eq[0, :k] = 1.0
    lower = np.concatenate([np.zeros(k), np.full(nx, -np.inf)])
    sol = solve_lp(
        LinearProgram(
            c=c,
            a_eq=a_eq,
            b_eq=[1.0],
            a_ub=np.vstack(rows),
            b_ub=np.zeros(len(rows)),
            lower=lower,
        )
    )
    if sol.status != "optimal":
        raise NumericalError(f"mixture maximin LP ended {sol.status}")
    return -float(sol.objective)


def _certify(chain, support_residual, agent_gap, bookie_gap, equilibrium, tol):
    q1, q2, q3, q4, q5 = chain
    cert = EquilibriumCertificate(
        chain_values=tuple(float(q) for q in chain),
        chain_residuals=(
            abs(q1 - q2),
            abs(q2 - q3),
            abs(q3 - q4),
            abs(q4 - q5),
        ),
        support_residual=float(support_residual),
        agent_gap=float(agent_gap),
        bookie_gap=float(bookie_gap),
    )
    if not cert.passes(tol):
        raise CertificateError(
            f"equilibrium certificate failed: max residual {cert.max_residual:.3g} "
            f"exceeds {tol:.3g} (chain={cert.chain_residuals}, "
            f"support={cert.support_residual:.3g}, agent_gap={cert.agent_gap:.3g}, "
            f"bookie_gap={cert.bookie_gap:.3g})",
            equilibrium=equilibrium,
            certificate=cert,
        )
    return cert


def solve_commitment_game(p, loss, tol=1e-6):
    """Equilibrium of the game where the agent commits to a full rule.

    Returns ``(Equilibrium, EquilibriumCertificate)``; raises
    ``CertificateError`` when any residual exceeds ``tol``.
    """
    space = p.space
    apri = apriori_minimax(p, loss)
    delta = apri.rule
    pi = apri.vertex_duals
    aggregate = JointDist(space, np.tensordot(pi, p.flat.reshape(p.n_vertices, space.nx, space.ny), axes=(0, 0)))

    per_vertex = np.array([expected_loss(v, delta, loss) for v in p.vertices])
    q5 = float(per_vertex.max())
    q1 = float(pi @ per_vertex)
    # best response to the aggregate: pick the best action cell by cell
    cell_losses = aggregate.weights @ loss.table  # (nx, na)
    q2 = float(cell_losses.min(axis=1).sum())
    q3 = _maximin_over_mixtures(_vertex_action_losses(p, loss))
    q4 = apri.value

    support = np.nonzero(pi > SUPPORT_EPS)[0]
    support_residual = float(np.abs(per_vertex[support] - q5).max()) if support.size else np.inf
    weights = pi[support] / pi[support].sum()
    equilibrium = Equilibrium(
        bookie=BookieMixture(tuple(int(j) for j in support), weights),
        agent=delta,
        value=q4,
        aggregate=aggregate,
    )
    cert = _certify(
        (q1, q2, q3, q4, q5), support_residual, q1 - q2, q5 - q1, equilibrium, tol
    )
    return equilibrium, cert


def solve_observation_game(p, loss, x_label, tol=1e-6):
    """Equilibrium of the one-shot game after observing ``x_label``.

    The bookie mixes over the conditioned set's extreme joints; the agent
    picks one action distribution.  A deterministic agent strategy is
    reported whenever one is optimal.  Raises ``EmptyConditionalError``
    when no member of the set can produce the observation.
    """
    space = p.space
    cond = condition_on_x(p, x_label)
    if cond is None:
        raise EmptyConditionalError(
            f"no member gives observation {x_label!r} positive probability"
        )
    mset = credal_marginal_y(cond)
    sol: ActionSolution = action_minimax(mset, loss, prefer="pure")
    pi = sol.vertex_weights
    rho = sol.rho
    q4 = sol.value

    aggregate = JointDist(space, np.tensordot(pi, cond.flat.reshape(cond.n_vertices, space.nx, space.ny), axes=(0, 0)))
    e = mset.vertices @ loss.table          # (k, na)
    per_vertex = e @ rho
    q5 = float(per_vertex.max())
    q1 = float(pi @ per_vertex)
    r_star = pi @ mset.vertices             # aggregate outcome distribution
    q2 = float((r_star @ loss.table).min())
    q3 = _maximin_over_mixtures(e[:, None, :])

    support = np.nonzero(pi > SUPPORT_EPS)[0]
    support_residual = float(np.abs(per_vertex[support] - q5).max()) if support.size else np.inf
    weights = pi[support] / pi[support].sum()

    table = np.full((space.nx, space.na), 1.0 / space.na)
    table[space.x_index(x_label)] = rho
    equilibrium = Equilibrium(
        bookie=BookieMixture(tuple(int(j) for j in support), weights),
        agent=DecisionRule(space, table),
        value=q4,
        aggregate=aggregate,
        observed_x=x_label,
    )
    cert = _certify(
        (q1, q2, q3, q4, q5), support_residual, q1 - q2, q5 - q1, equilibrium, tol
    )
    return equilibrium, cert


@dataclass(frozen=True)
class ObservationComparison:
    x: str
    defined: bool
    tv_distance: float            # between the two rules' rows at x
    commitment_row_worst: float | None  # conditional worst of the commitment row
    observation_value: float | None     # per-observation optimal value
    gap: float | None

    def as_dict(self):
        return {
            "x": self.x,
            "defined": self.defined,
            "tv_distance": self.tv_distance,
            "commitment_row_worst": self.commitment_row_worst,
            "observation_value": self.observation_value,
            "gap": self.gap,
        }


@dataclass(frozen=True)
class TimeInconsistencyReport:
    """Do the commitment answer and the per-observation answers disagree?"""

    apriori: "MinimaxResult"
    aposteriori: "MinimaxResult"
    per_x: tuple
    global_gap: float    # worst case of the per-observation rule minus commitment value
    max_tv: float
    max_gap: float
    inconsistent: bool
    notes: tuple

    def as_dict(self, space):
        return {
            "apriori": self.apriori.as_dict(space),
            "aposteriori": self.aposteriori.as_dict(space),
            "per_x": [c.as_dict() for c in self.per_x],
            "global_gap": self.global_gap,
            "max_tv": self.max_tv,
            "max_gap": self.max_gap,
            "inconsistent": self.inconsistent,
            "notes": list(self.notes),
        }


def time_inconsistency_report(p, loss, tol=1e-6):
    """Compare the commitment solution with the per-observation solutions.

    Inconsistency is flagged when the rules differ (total variation above
    ``tol`` at some observation) or any value comparison does: a commitment
    row that is conditionally suboptimal, or a per-observation rule whose
    worst case over the whole set exceeds the commitment value.
    """
    apri = apriori_minimax(p, loss)
    apost = aposteriori_minimax(p, loss)
    cond_worst = conditional_worst_case(p, apri.rule, loss)
    cells = []
    for ix, x in enumerate(p.space.x_labels):
        defined = x in apost.per_x_values
        tv = 0.5 * float(np.abs(apri.rule.table[ix] - apost.rule.table[ix]).sum())
        if defined:
            worst = cond_worst[x]
            val = apost.per_x_values[x]
            cells.append(ObservationComparison(x, True, tv, float(worst), float(val), float(worst - val)))
        else:
            cells.append(ObservationComparison(x, False, tv, None, None, None))
    global_gap = float(apost.value - apri.value)
    max_tv = max((c.tv_distance for c in cells if c.defined), default=0.0)
    max_gap = max((c.gap for c in cells if c.defined), default=0.0)
    inconsistent = max_tv > tol or max_gap > tol or global_gap > tol
    notes = []
    if inconsistent:
        notes.append(
            "the optimal rule under commitment and the observation-by-observation "
            "optimal rule disagree; which one applies depends on when the agent "
            "can bind itself"
        )
    else:
        notes.append("commitment and per-observation answers coincide")
    return TimeInconsistencyReport(
        apriori=apri,
        aposteriori=apost,
        per_x=tuple(cells),
        global_gap=global_gap,
        max_tv=float(max_tv),
        max_gap=float(max_gap),
        inconsistent=bool(inconsistent),
        notes=tuple(notes),
    )
