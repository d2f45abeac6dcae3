"""First-order stochastic dominance and coupling-deviation machinery.

Dominance compares cumulative probability chains on a common ascending
grid; ties within 1e-12 count as satisfying the weak inequalities.  The
deviation matrix ``theta = P - p (x) q`` of a square joint coupling has zero
row and column sums; it decomposes over an (n-1)^2 basis of four-point
matrices, which is what the consistency argument for dependent lotteries
reduces to.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .curves import RegretKernel, UtilityCurve
from .errors import (
    InvariantViolation,
    NonSquareGrid,
    PreconditionViolation,
    ShapeMismatch,
)
from .lottery import JointLottery, Lottery, align

#: tolerance for cumulative-chain and theta comparisons
DOMINANCE_TOL = 1e-12


class Relation(str, enum.Enum):
    FIRST_DOMINATES = "FirstDominates"
    SECOND_DOMINATES = "SecondDominates"
    EQUAL = "Equal"
    INCOMPARABLE = "Incomparable"


@dataclass(frozen=True)
class DominanceVerdict:
    """Outcome of a cumulative-chain comparison.

    ``witness_first`` is the first grid index (0-based, on the aligned grid)
    where the first lottery's cumulative exceeds the second's — i.e. where
    first-dominance fails — and symmetrically for ``witness_second``.
    """

    relation: Relation
    witness_first: int | None
    witness_second: int | None


def stochastic_dominance(x: Lottery, y: Lottery) -> DominanceVerdict:
    """First-order comparison: the dominant lottery's cumulative chain never
    exceeds the other's on the union grid."""
    ax, ay = align(x, y)
    cum_x = np.cumsum(ax.prob_array())
    cum_y = np.cumsum(ay.prob_array())
    first_ok = cum_x <= cum_y + DOMINANCE_TOL
    second_ok = cum_y <= cum_x + DOMINANCE_TOL
    witness_first = None if bool(first_ok.all()) else int(np.argmin(first_ok))
    witness_second = None if bool(second_ok.all()) else int(np.argmin(second_ok))
    if np.all(np.abs(cum_x - cum_y) <= DOMINANCE_TOL):
        relation = Relation.EQUAL
    elif witness_first is None:
        relation = Relation.FIRST_DOMINATES
    elif witness_second is None:
        relation = Relation.SECOND_DOMINATES
    else:
        relation = Relation.INCOMPARABLE
    return DominanceVerdict(relation, witness_first, witness_second)


def cumulative_lemma_check(
    p, q, g_seq
) -> tuple[bool, int | None]:
    """Partial-sum comparison underpinning the dominance-consistency proof.

    Given probability sequences with ``cum(p) <= cum(q)`` and any
    nondecreasing sequence of nonpositive values ``g_seq``, every partial sum
    ``sum_{i<=k} p_i g_i`` must weakly exceed ``sum_{i<=k} q_i g_i``.
    Returns ``(holds, first_failing_k)`` with ``k`` 0-based.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    g = np.asarray(g_seq, dtype=float)
    if not (p.shape == q.shape == g.shape) or p.ndim != 1:
        raise PreconditionViolation("p, q and g_seq must be 1-D and equally long")
    if np.any(np.diff(g) < 0.0):
        raise PreconditionViolation("g_seq must be nondecreasing")
    if np.any(g > 0.0):
        raise PreconditionViolation("g_seq must be nonpositive")
    if np.any(np.cumsum(p) > np.cumsum(q) + DOMINANCE_TOL):
        raise PreconditionViolation("cumulative(p) must not exceed cumulative(q)")
    lhs = np.cumsum(p * g)
    rhs = np.cumsum(q * g)
    tol = DOMINANCE_TOL * max(1.0, float(np.max(np.abs(g))))
    ok = lhs >= rhs - tol
    if bool(ok.all()):
        return True, None
    return False, int(np.argmin(ok))


# ---------------------------------------------------------------------------
# Deviation-from-independence matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThetaMatrix:
    """Deviation of a square joint coupling from the product of its marginals.

    Every row and column sums to zero, and each entry is bounded by the
    corresponding product ``p_i * q_j`` — the regime in which the dependent
    consistency result is stated.
    """

    grid: tuple[float, ...]
    theta: np.ndarray
    p: tuple[float, ...]
    q: tuple[float, ...]

    @property
    def n(self) -> int:
        return len(self.grid)


def theta_matrix(joint: JointLottery) -> ThetaMatrix:
    """Build and validate the deviation matrix of a square joint coupling."""
    if joint.grid_x != joint.grid_y:
        raise NonSquareGrid("theta matrix requires grid_x == grid_y")
    p = joint.marginal_x()
    q = joint.marginal_y()
    theta = joint.joint - np.outer(p, q)
    row = np.abs(theta.sum(axis=1))
    col = np.abs(theta.sum(axis=0))
    if float(np.max(row)) > DOMINANCE_TOL or float(np.max(col)) > DOMINANCE_TOL:
        k = int(np.argmax(np.concatenate([row, col])))
        raise InvariantViolation(
            "theta rows/columns do not sum to zero", entry=(k % len(p),)
        )
    bound = np.outer(p, q) + DOMINANCE_TOL
    if np.any(np.abs(theta) > bound):
        i, j = map(int, np.argwhere(np.abs(theta) > bound)[0])
        raise InvariantViolation(
            f"|theta[{i},{j}]| = {abs(theta[i, j])!r} exceeds p_i*q_j = {p[i] * q[j]!r}",
            entry=(i, j),
        )
    theta = theta.copy()
    theta.setflags(write=False)
    return ThetaMatrix(
        joint.grid_x, theta, tuple(map(float, p)), tuple(map(float, q))
    )


def check_buk(t: ThetaMatrix, tol: float = DOMINANCE_TOL) -> bool:
    """Lower-triangle dominance of the deviation matrix:
    ``theta[i, j] >= theta[j, i]`` for every ``i > j`` (within ``tol``)."""
    th = t.theta
    return bool(np.all(np.tril(th - th.T, k=-1) >= -tol))


def buk_margins(t: ThetaMatrix) -> list[tuple[int, int, float]]:
    """Per-pair margins ``theta[i, j] - theta[j, i]`` for i > j (0-based)."""
    th = t.theta
    return [
        (i, j, float(th[i, j] - th[j, i]))
        for i in range(t.n)
        for j in range(i)
    ]


def basis_matrix(n: int, i: int, j: int) -> np.ndarray:
    """The four-point basis matrix with +1 at (i, j) and (n-1, n-1) and
    -1 at (i, n-1) and (n-1, j); indices 0-based with i, j < n-1."""
    if not (0 <= i < n - 1 and 0 <= j < n - 1):
        raise ShapeMismatch(f"basis index ({i}, {j}) out of range for n={n}")
    m = np.zeros((n, n))
    m[i, j] += 1.0
    m[n - 1, n - 1] += 1.0
    m[i, n - 1] -= 1.0
    m[n - 1, j] -= 1.0
    return m


def basis_decompose(t: ThetaMatrix) -> np.ndarray:
    """Coefficients c with ``theta = sum c[i, j] * basis_matrix(n, i, j)``.

    Zero row/column sums make the top-left (n-1)x(n-1) block a complete
    coordinate system; the reconstruction is exact to 1e-14 per entry.
    """
    n = t.n
    if n < 2:
        raise ShapeMismatch("decomposition needs n >= 2")
    coeffs = np.array(t.theta[: n - 1, : n - 1])
    recon = np.zeros((n, n))
    for i in range(n - 1):
        for j in range(n - 1):
            recon += coeffs[i, j] * basis_matrix(n, i, j)
    err = float(np.max(np.abs(recon - t.theta)))
    if err > 1e-14:
        raise InvariantViolation(f"basis reconstruction error {err!r} exceeds 1e-14")
    return coeffs


def hadamard_norm(mat, g_matrix: np.ndarray) -> float:
    """Sum of all entries of the elementwise product ``mat (.) g_matrix``."""
    m = mat.theta if isinstance(mat, ThetaMatrix) else np.asarray(mat, dtype=float)
    g = np.asarray(g_matrix, dtype=float)
    if m.shape != g.shape:
        raise ShapeMismatch(f"shapes {m.shape} and {g.shape} differ")
    return float(np.sum(m * g))


def g_value_matrix(
    grid, kernel: RegretKernel, utility: UtilityCurve
) -> np.ndarray:
    """Comparator matrix ``G[i, j] = g(u(grid[j]) - u(grid[i]))``."""
    utiles = np.array([utility.base_value(v) for v in grid])
    return kernel.g_array(utiles[None, :] - utiles[:, None])
