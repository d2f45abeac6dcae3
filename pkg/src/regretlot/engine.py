"""Pairwise regret comparison of lotteries.

The comparison statistic between a first lottery ``x`` (probabilities ``p``)
and a second lottery ``y`` (probabilities ``q``) is

    D(x, y) = sum_ij g(u(y_j) - u(x_i)) * w_ij,

with weights ``w_ij = p_i * q_j`` for independent lotteries or a joint
matrix entry for dependent ones.  Negative D means the first lottery is
preferred (it leaves the smaller average regret).

Exactness guarantees baked into the summation:

* terms are accumulated as ``sum_{i<j}(T_ij + T_ji) + trace(T)``, so swapping
  the two lotteries (and transposing the coupling) negates the result
  *bitwise*, and comparing a lottery with itself yields exactly ``0.0``;
* utility values enter only through differences, so affine shifts of the
  utility curve cannot change any verdict, bitwise.

Indifference is declared inside a relative band ``1e-12 * scale`` where
``scale = max(1, largest |g| term encountered)`` — a raw absolute tolerance
is meaningless when comparator values reach 1e20 in near-degenerate regimes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .curves import RegretKernel, UtilityCurve
from .errors import (
    EvaluationOverflow,
    InvalidParameter,
    MarginalMismatch,
    OrderingViolation,
)
from .lottery import (
    JointLottery,
    Lottery,
    align_many,
    canonicalize,
)

#: relative width of the indifference band
INDIFFERENCE_REL_TOL = 1e-12


class Direction(str, enum.Enum):
    FIRST_PREFERRED = "FirstPreferred"
    SECOND_PREFERRED = "SecondPreferred"
    INDIFFERENT = "Indifferent"


@dataclass(frozen=True)
class Verdict:
    """Preference direction plus the signed comparison statistic.

    ``regret_difference`` is negative when the first lottery is preferred;
    ``scale`` records the largest |g| term encountered and ``band`` the
    indifference half-width derived from it.
    """

    direction: Direction
    regret_difference: float
    scale: float
    band: float

    @staticmethod
    def from_difference(difference: float, scale: float) -> "Verdict":
        band = INDIFFERENCE_REL_TOL * scale
        if difference < -band:
            direction = Direction.FIRST_PREFERRED
        elif difference > band:
            direction = Direction.SECOND_PREFERRED
        else:
            direction = Direction.INDIFFERENT
        return Verdict(direction, difference, scale, band)


def expected_utility(lot: Lottery, utility: UtilityCurve) -> float:
    """The classical per-lottery value sum(u(x_i) * p_i)."""
    return float(sum(utility.value(x) * p for x, p in zip(lot.outcomes, lot.probs)))


def regret_given_outcome(
    counterfactual: Lottery,
    realized_utile: float,
    kernel: RegretKernel,
    utility: UtilityCurve,
) -> float:
    """Average regret about not holding ``counterfactual`` after having
    realized a known utility level.

    The counterfactual lottery was not played, so its outcome is unknown and
    the kernel is averaged over its distribution:
    ``sum_i f(u(x_i) - realized) * p_i``.
    """
    total = 0.0
    for x, p in zip(counterfactual.outcomes, counterfactual.probs):
        total += kernel.f(utility.value(x) - realized_utile) * p
    return total


# ---------------------------------------------------------------------------
# Pairwise comparison core
# ---------------------------------------------------------------------------

def _embedded_weights(
    x: Lottery, y: Lottery, coupling: JointLottery | str | None
) -> tuple[tuple[float, ...], np.ndarray]:
    """Common square grid and weight matrix for the double sum."""
    cx, cy = canonicalize(x), canonicalize(y)
    if coupling is None or coupling == "independent":
        grid, (px, qy) = _common_grid(cx, cy)
        return grid, np.outer(px, qy)
    if not isinstance(coupling, JointLottery):
        raise InvalidParameter(f"unsupported coupling {coupling!r}")
    if coupling.grid_x != cx.outcomes or coupling.grid_y != cy.outcomes:
        raise MarginalMismatch(
            "joint grids do not match the canonical outcome grids of the lotteries"
        )
    dev_p = float(np.max(np.abs(coupling.marginal_x() - cx.prob_array())))
    dev_q = float(np.max(np.abs(coupling.marginal_y() - cy.prob_array())))
    if max(dev_p, dev_q) > 1e-12:
        raise MarginalMismatch(
            f"joint marginals deviate from the lotteries by {max(dev_p, dev_q)!r}"
        )
    grid, _ = _common_grid(cx, cy)
    index = {v: k for k, v in enumerate(grid)}
    weights = np.zeros((len(grid), len(grid)))
    ix = [index[v] for v in cx.outcomes]
    iy = [index[v] for v in cy.outcomes]
    weights[np.ix_(ix, iy)] = coupling.joint
    return grid, weights


def _common_grid(cx: Lottery, cy: Lottery):
    grid, rows = align_many(cx, cy)
    return grid, (np.asarray(rows[0]), np.asarray(rows[1]))


def _difference_and_scale(
    x: Lottery,
    y: Lottery,
    kernel: RegretKernel,
    utility: UtilityCurve,
    coupling: JointLottery | str | None,
) -> tuple[float, float]:
    grid, weights = _embedded_weights(x, y, coupling)
    utiles = np.array([utility.base_value(v) for v in grid])
    gaps = utiles[None, :] - utiles[:, None]  # rows: first lottery, cols: second
    g_matrix = kernel.g_array(gaps)
    terms = g_matrix * weights
    # pair-cancelling order: (i, j) with (j, i), then the diagonal
    paired = terms + terms.T
    upper = np.triu_indices(len(grid), k=1)
    difference = float(np.sum(paired[upper]) + np.trace(terms))
    present = weights != 0.0
    scale = max(1.0, float(np.max(np.abs(g_matrix), where=present, initial=0.0)))
    return difference, scale


def regret_difference(
    x: Lottery,
    y: Lottery,
    kernel: RegretKernel,
    utility: UtilityCurve,
    coupling: JointLottery | str | None = None,
) -> float:
    """Signed comparison statistic; negative means ``x`` is preferred.

    ``coupling`` is ``None``/``"independent"`` for product weights, or a
    :class:`JointLottery` whose marginals must reproduce ``x`` and ``y``
    within 1e-12 (otherwise :class:`~regretlot.errors.MarginalMismatch`).
    """
    return _difference_and_scale(x, y, kernel, utility, coupling)[0]


def prefer(
    x: Lottery,
    y: Lottery,
    kernel: RegretKernel,
    utility: UtilityCurve,
    coupling: JointLottery | str | None = None,
) -> Verdict:
    """Compare two lotteries and wrap the result in a :class:`Verdict`."""
    difference, scale = _difference_and_scale(x, y, kernel, utility, coupling)
    return Verdict.from_difference(difference, scale)


# ---------------------------------------------------------------------------
# Transitive fast path: positive score factorization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FishburnScores:
    """Positive per-lottery scores whose cross products order lotteries.

    ``v = sum a**u(x_i) * p_i`` and ``w = sum a**(-u(x_i)) * p_i`` are both
    strictly positive, and the first lottery is preferred exactly when
    ``v(x) * w(y) >= v(y) * w(x)``.
    """

    v: float
    w: float


def fishburn_scores(lot: Lottery, a: float, utility: UtilityCurve) -> FishburnScores:
    if not a > 0.0:
        raise InvalidParameter(f"score base must be positive, got {a!r}")
    ln_a = math.log(a)
    v = 0.0
    w = 0.0
    for x, p in zip(lot.outcomes, lot.probs):
        exponent = utility.value(x) * ln_a
        if abs(exponent) > 709.0:
            raise EvaluationOverflow(
                f"a**u is not representable at outcome {x!r}", exponent=exponent
            )
        v += math.exp(exponent) * p
        w += math.exp(-exponent) * p
    if not (math.isfinite(v) and math.isfinite(w) and v > 0.0 and w > 0.0):
        raise EvaluationOverflow(f"scores degenerate: v={v!r}, w={w!r}")
    return FishburnScores(v, w)


def prefer_transitive(
    x: Lottery,
    y: Lottery,
    a: float,
    b: float,
    utility: UtilityCurve,
) -> Verdict:
    """Compare via the score factorization of the exponential comparator.

    Equivalent to :func:`prefer` with the ``exp`` kernel
    ``g(t) = b * (a**t - a**(-t))``: the reported ``regret_difference`` is
    ``-b * (v(x) w(y) - v(y) w(x))``, which matches the double-sum value.
    """
    if not b > 0.0:
        raise InvalidParameter(f"scale b must be positive, got {b!r}")
    sx = fishburn_scores(x, a, utility)
    sy = fishburn_scores(y, a, utility)
    split = sx.v * sy.w - sy.v * sx.w
    difference = -b * split
    scale = max(1.0, _max_g_term(x, y, RegretKernel.exponential(a, b), utility))
    return Verdict.from_difference(difference, scale)


def _max_g_term(x, y, kernel, utility):
    values = [utility.base_value(v) for v in set(x.outcomes) | set(y.outcomes)]
    span = max(values) - min(values)
    return abs(kernel.g_magnitude(span))


# ---------------------------------------------------------------------------
# Continuity: the indifference mixing weight
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IndifferenceResult:
    """Mixing weight making ``alpha*p + (1-alpha)*r`` indifferent to ``q``.

    ``A`` is the margin by which ``p`` beats ``q`` and ``B`` the margin by
    which ``q`` beats ``r``; both are nonnegative when the triple is ordered,
    and ``alpha = B / (A + B)``.  ``degenerate`` flags the all-indifferent
    case where the weight is undetermined and 0.5 is returned by convention.
    """

    alpha: float
    A: float
    B: float
    degenerate: bool
    mixture: Lottery


def indifference_alpha(
    p: Lottery,
    q: Lottery,
    r: Lottery,
    kernel: RegretKernel,
    utility: UtilityCurve,
) -> IndifferenceResult:
    """Solve the continuity condition for an ordered triple p >= q >= r.

    Raises :class:`~regretlot.errors.OrderingViolation` when either margin is
    negative beyond the indifference band.  Restricted to independent
    coupling: the nonnegativity of the margins is only guaranteed there.
    """
    d_pq, s1 = _difference_and_scale(p, q, kernel, utility, None)
    d_rq, s2 = _difference_and_scale(r, q, kernel, utility, None)
    margin_a = -d_pq
    margin_b = d_rq
    scale = max(s1, s2)
    band = INDIFFERENCE_REL_TOL * scale
    if margin_a < -band or margin_b < -band:
        raise OrderingViolation(
            f"triple is not ordered: A={margin_a!r}, B={margin_b!r} (band {band!r})"
        )
    grid, (pp, qq, rr) = _grid3(p, q, r)
    total = margin_a + margin_b
    if total <= 1e-15:
        alpha = 0.5
        degenerate = True
    else:
        alpha = min(1.0, max(0.0, margin_b / total))
        degenerate = False
    mix = tuple(alpha * a + (1.0 - alpha) * c for a, c in zip(pp, rr))
    return IndifferenceResult(alpha, margin_a, margin_b, degenerate, Lottery(grid, mix))


def _grid3(p, q, r):
    grid, rows = align_many(p, q, r)
    return grid, rows


# ---------------------------------------------------------------------------
# Composite two-stage lotteries
# ---------------------------------------------------------------------------

class CompositeVariant(enum.Enum):
    """How the mixing stage of two composite options is realised.

    * ``SHARED_Z_INDEPENDENT_SWITCHES`` — both options embed the *same*
      residual lottery, but each option flips its own switch.
    * ``SHARED_SWITCH`` — one switch decides the stage for both options, so
      the residual lottery cancels from the comparison entirely.
    * ``INDEPENDENT_Z`` — each option carries an independent copy of the
      residual lottery (same distribution, separate draws).
    """

    SHARED_Z_INDEPENDENT_SWITCHES = "shared_z_independent_switches"
    SHARED_SWITCH = "shared_switch"
    INDEPENDENT_Z = "independent_z"


def composite_regret(
    variant: CompositeVariant,
    x: Lottery,
    y: Lottery,
    z: Lottery,
    alpha: float,
    kernel: RegretKernel,
    utility: UtilityCurve,
) -> float:
    """Comparison statistic between options A = (1-alpha) x + alpha z and
    B = (1-alpha) y + alpha z under the chosen realisation of the mixing
    stage.  A is (weakly) preferred iff the result is <= 0.
    """
    if not 0.0 <= alpha <= 1.0:
        raise InvalidParameter(f"alpha must lie in [0, 1], got {alpha!r}")
    one = 1.0 - alpha
    d_xy = regret_difference(x, y, kernel, utility)
    if variant is CompositeVariant.SHARED_SWITCH:
        return one * one * d_xy
    d_xz = regret_difference(x, z, kernel, utility)
    d_zy = regret_difference(z, y, kernel, utility)
    value = one * one * d_xy + one * alpha * d_xz + one * alpha * d_zy
    if variant is CompositeVariant.INDEPENDENT_Z:
        # the residual-vs-residual term; identically zero by antisymmetry,
        # computed literally rather than omitted
        value += alpha * alpha * regret_difference(z, z, kernel, utility)
    return value
