"""Finite lotteries over monetary outcomes and joint couplings between them.

A lottery is a finite probability table over money.  Two lotteries can be
coupled three ways: independently (product weights), through a shared state
of nature (diagonal coupling), or through an arbitrary joint matrix whose
row sums reproduce the first lottery's probabilities and whose column sums
reproduce the second's.

All types are immutable after construction and all operations are pure, so
values can be shared freely across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    EmptyLottery,
    LengthMismatch,
    MarginalMismatch,
    NegativeProbability,
    ProbabilitySumMismatch,
    TotalMassMismatch,
    ValidationError,
)

#: Absolute tolerance for probability-mass checks.  Inputs are short decimal
#: fractions, so double precision leaves ample headroom at 1e-12.
PROB_TOL = 1e-12


@dataclass(frozen=True)
class Lottery:
    """A finite probability distribution over monetary outcomes.

    ``outcomes`` and ``probs`` have equal length; probabilities are
    nonnegative and sum to one within :data:`PROB_TOL`.  The value is *not*
    required to be canonical: duplicated outcomes, zero-probability entries
    and unsorted order are all legal, and are normalised by
    :func:`canonicalize`.
    """

    outcomes: tuple[float, ...]
    probs: tuple[float, ...]

    def __post_init__(self):
        outcomes = tuple(float(x) for x in self.outcomes)
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "probs", probs)
        if len(outcomes) != len(probs):
            raise LengthMismatch(
                f"{len(outcomes)} outcomes vs {len(probs)} probabilities"
            )
        if not outcomes:
            raise EmptyLottery("a lottery needs at least one outcome")
        for p in probs:
            if p < 0.0:
                raise NegativeProbability(f"probability {p!r} is negative")
        total = sum(probs)
        if abs(total - 1.0) > PROB_TOL:
            raise ProbabilitySumMismatch(
                f"probabilities sum to {total!r}, expected 1 within {PROB_TOL}"
            )

    def __len__(self) -> int:
        return len(self.outcomes)

    @property
    def is_canonical(self) -> bool:
        """True when outcomes strictly increase and no probability is zero."""
        if any(p == 0.0 for p in self.probs):
            return False
        return all(a < b for a, b in zip(self.outcomes, self.outcomes[1:]))

    def prob_array(self) -> np.ndarray:
        return np.asarray(self.probs, dtype=float)

    def outcome_array(self) -> np.ndarray:
        return np.asarray(self.outcomes, dtype=float)


def make_lottery(outcomes: Sequence[float], probs: Sequence[float]) -> Lottery:
    """Validate and build a lottery, retaining the input order."""
    return Lottery(tuple(outcomes), tuple(probs))


def sure(outcome: float) -> Lottery:
    """The degenerate lottery paying ``outcome`` with certainty."""
    return Lottery((float(outcome),), (1.0,))


def canonicalize(lot: Lottery) -> Lottery:
    """Merge duplicate outcomes, drop zero-probability entries, sort ascending.

    The induced distribution over money is unchanged; the operation is
    idempotent.  Outcome equality is exact representable-value equality
    (inputs come from config files, not from accumulated arithmetic).
    """
    if lot.is_canonical:
        return lot
    mass: dict[float, float] = {}
    for x, p in zip(lot.outcomes, lot.probs):
        if x in mass:
            mass[x] += p
        else:
            mass[x] = p
    pairs = sorted((x, p) for x, p in mass.items() if p != 0.0)
    return Lottery(tuple(x for x, _ in pairs), tuple(p for _, p in pairs))


def align(a: Lottery, b: Lottery) -> tuple[Lottery, Lottery]:
    """Return both lotteries on the union outcome grid, zero-padded.

    Adding zero-probability events leaves each marginal distribution over
    money unchanged; the returned pair shares an identical outcome tuple.
    """
    grid, rows = align_many(a, b)
    return (Lottery(grid, rows[0]), Lottery(grid, rows[1]))


def align_many(*lots: Lottery) -> tuple[tuple[float, ...], list[tuple[float, ...]]]:
    """Common ascending grid plus one zero-padded probability row per input."""
    canon = [canonicalize(l) for l in lots]
    first = canon[0].outcomes
    if all(c.outcomes == first for c in canon):
        return first, [c.probs for c in canon]
    grid = tuple(sorted({x for c in canon for x in c.outcomes}))
    index = {x: k for k, x in enumerate(grid)}
    rows = []
    for c in canon:
        row = [0.0] * len(grid)
        for x, p in zip(c.outcomes, c.probs):
            row[index[x]] = p
        rows.append(tuple(row))
    return grid, rows


class JointLottery:
    """A joint probability matrix over two outcome grids.

    ``joint[i, j]`` is the probability of the first lottery paying
    ``grid_x[i]`` while the second pays ``grid_y[j]``.  Row sums are the
    first lottery's marginal probabilities, column sums the second's.
    """

    __slots__ = ("grid_x", "grid_y", "joint")

    def __init__(
        self,
        grid_x: Sequence[float],
        grid_y: Sequence[float],
        joint: Iterable[Iterable[float]] | np.ndarray,
    ):
        gx = tuple(float(x) for x in grid_x)
        gy = tuple(float(y) for y in grid_y)
        mat = np.array(joint, dtype=float)
        if mat.ndim != 2 or mat.shape != (len(gx), len(gy)):
            raise ValidationError(
                f"joint matrix shape {mat.shape} does not match grids "
                f"({len(gx)}, {len(gy)})"
            )
        if mat.size == 0:
            raise EmptyLottery("joint matrix is empty")
        if np.any(mat < 0.0):
            i, j = map(int, np.argwhere(mat < 0.0)[0])
            raise NegativeProbability(f"joint[{i},{j}] = {mat[i, j]!r} is negative")
        total = float(mat.sum())
        if abs(total - 1.0) > PROB_TOL:
            raise TotalMassMismatch(
                f"joint mass sums to {total!r}, expected 1 within {PROB_TOL}"
            )
        mat.setflags(write=False)
        object.__setattr__(self, "grid_x", gx)
        object.__setattr__(self, "grid_y", gy)
        object.__setattr__(self, "joint", mat)

    def __setattr__(self, name, value):  # immutable after construction
        raise AttributeError("JointLottery is immutable")

    @property
    def shape(self) -> tuple[int, int]:
        return self.joint.shape

    def marginal_x(self) -> np.ndarray:
        """Row sums: probabilities of the first (x) lottery."""
        return self.joint.sum(axis=1)

    def marginal_y(self) -> np.ndarray:
        """Column sums: probabilities of the second (y) lottery."""
        return self.joint.sum(axis=0)

    def lottery_x(self) -> Lottery:
        return Lottery(self.grid_x, tuple(float(p) for p in self.marginal_x()))

    def lottery_y(self) -> Lottery:
        return Lottery(self.grid_y, tuple(float(p) for p in self.marginal_y()))

    def transposed(self) -> "JointLottery":
        return JointLottery(self.grid_y, self.grid_x, self.joint.T)


def make_joint(
    grid_x: Sequence[float],
    grid_y: Sequence[float],
    joint: Iterable[Iterable[float]] | np.ndarray,
    expected_p: Sequence[float] | None = None,
    expected_q: Sequence[float] | None = None,
) -> JointLottery:
    """Validate and build a joint coupling.

    The diagnostic variant, given expected marginals, additionally checks
    row sums against ``expected_p`` and column sums against ``expected_q``
    within :data:`PROB_TOL`.
    """
    jl = JointLottery(grid_x, grid_y, joint)
    if expected_p is not None:
        dev = np.max(np.abs(jl.marginal_x() - np.asarray(expected_p, dtype=float)))
        if dev > PROB_TOL:
            raise MarginalMismatch(f"row marginals deviate by {dev!r}")
    if expected_q is not None:
        dev = np.max(np.abs(jl.marginal_y() - np.asarray(expected_q, dtype=float)))
        if dev > PROB_TOL:
            raise MarginalMismatch(f"column marginals deviate by {dev!r}")
    return jl


def diagonal_coupling(lot: Lottery) -> JointLottery:
    """Couple a lottery with itself through the same states of nature.

    The joint matrix is diagonal with the lottery's own probabilities, so
    both marginals equal the input distribution by construction.
    """
    c = canonicalize(lot)
    return JointLottery(c.outcomes, c.outcomes, np.diag(c.prob_array()))


# ---------------------------------------------------------------------------
# JSON documents (the wire format used by the CLI and audit snapshots)
# ---------------------------------------------------------------------------

def lottery_to_doc(lot: Lottery) -> dict:
    return {"outcomes": list(lot.outcomes), "probs": list(lot.probs)}


def lottery_from_doc(doc: dict) -> Lottery:
    try:
        return make_lottery(doc["outcomes"], doc["probs"])
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed lottery document: {exc}") from exc


def joint_to_doc(jl: JointLottery) -> dict:
    return {
        "grid_x": list(jl.grid_x),
        "grid_y": list(jl.grid_y),
        "joint": [list(map(float, row)) for row in jl.joint],
    }


def joint_from_doc(doc: dict) -> JointLottery:
    try:
        return JointLottery(doc["grid_x"], doc["grid_y"], doc["joint"])
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed joint document: {exc}") from exc


def load_lottery(path: str) -> Lottery:
    with open(path, "r", encoding="utf-8") as fh:
        return lottery_from_doc(json.load(fh))


def load_joint(path: str) -> JointLottery:
    with open(path, "r", encoding="utf-8") as fh:
        return joint_from_doc(json.load(fh))
