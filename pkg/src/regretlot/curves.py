"""Parametric utility curves and regret kernels.

The kernel ``f`` scores a counterfactual utility gap (positive for missed
gains, negative for avoided losses, ``f(0) = 0``).  Pairwise comparisons
only ever consume the antisymmetric net comparator ``g(x) = f(x) - f(-x)``,
which is nondecreasing for every family here.

Numerical policy for the hyperbolic-sine families: ``sinh(t)`` is evaluated
directly for ``|t| < 30`` and in the log domain as
``sign(t) * exp(|t| - ln 2 + log1p(-exp(-2|t|)))`` beyond that, which is
exact to double precision and only overflows past ``|t| ~ 709``.  Callers
that merely need the *sign* of a weighted sum at extreme arguments must use
the log-domain comparison path (see :mod:`regretlot.allais`) instead of
materialising ``g`` values.

Antisymmetry is enforced structurally: ``g`` is always computed as
``sign(d) * g(|d|)``, so ``g(d) + g(-d) == 0`` holds bitwise at every
representable point regardless of the underlying libm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EvaluationOverflow, InvalidParameter

_LN2 = math.log(2.0)
#: crossover between direct sinh and the log-domain expression
_SINH_SWITCH = 30.0
#: largest exponent exp() can take without overflowing a float64
_EXP_MAX = 709.0


def log_sinh(t: float) -> float:
    """ln(sinh t) for t > 0, stable for arbitrarily large t."""
    if t <= 0.0:
        raise DomainError(f"log_sinh needs a positive argument, got {t!r}")
    if t < _SINH_SWITCH:
        return math.log(math.sinh(t))
    # sinh t = e^t (1 - e^{-2t}) / 2; the correction underflows to 0 for large t
    return t - _LN2 + math.log1p(-math.exp(-2.0 * t))


def stable_sinh(t: float) -> float:
    """sinh(t) without intermediate overflow for |t| up to ~709."""
    a = abs(t)
    if a < _SINH_SWITCH:
        return math.sinh(t)
    ln_value = a - _LN2 + math.log1p(-math.exp(-2.0 * a))
    if ln_value > _EXP_MAX:
        raise EvaluationOverflow(
            f"sinh({t!r}) exceeds the float64 range", exponent=ln_value
        )
    return math.copysign(math.exp(ln_value), t)


def _sinh_magnitude_array(t: np.ndarray) -> np.ndarray:
    """Vectorised sinh(t) for t >= 0 with the same stability policy."""
    out = np.empty_like(t)
    small = t < _SINH_SWITCH
    out[small] = np.sinh(t[small])
    if not np.all(small):
        big = t[~small]
        ln_value = big - _LN2 + np.log1p(-np.exp(-2.0 * big))
        worst = float(np.max(ln_value))
        if worst > _EXP_MAX:
            raise EvaluationOverflow(
                "sinh argument exceeds the float64 range", exponent=worst
            )
        out[~small] = np.exp(ln_value)
    return out


def _parse_spec(spec: str, what: str) -> tuple[str, dict[str, float]]:
    """Parse ``family:key=value,key=value`` strings used by the CLI."""
    head, _, tail = spec.strip().partition(":")
    family = head.strip().lower()
    params: dict[str, float] = {}
    if tail:
        for item in tail.split(","):
            key, sep, value = item.partition("=")
            if not sep:
                raise InvalidParameter(f"bad {what} spec {spec!r}: missing '=' in {item!r}")
            try:
                params[key.strip()] = float(value)
            except ValueError as exc:
                raise InvalidParameter(f"bad {what} spec {spec!r}: {exc}") from exc
    return family, params


# ---------------------------------------------------------------------------
# Utility curves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UtilityCurve:
    """Strictly increasing utility of money.

    Families: ``linear`` (u(x) = x) and ``log`` with threshold gamma > 0
    (u(x) = ln(x/gamma + 1), defined for x > -gamma).  Either family may be
    affinely shifted by ``shift`` (u(x) + a); preference comparisons depend
    only on utility differences, so the shift never influences them — the
    engine consumes :meth:`difference`, where the shift cancels symbolically.
    """

    family: str
    gamma: float | None = None
    shift: float = 0.0

    def __post_init__(self):
        if self.family == "log":
            if self.gamma is None or not self.gamma > 0.0:
                raise InvalidParameter(f"log utility needs gamma > 0, got {self.gamma!r}")
        elif self.family == "linear":
            if self.gamma is not None:
                raise InvalidParameter("linear utility takes no gamma")
        else:
            raise InvalidParameter(f"unknown utility family {self.family!r}")

    @classmethod
    def linear(cls, shift: float = 0.0) -> "UtilityCurve":
        return cls("linear", shift=shift)

    @classmethod
    def log(cls, gamma: float, shift: float = 0.0) -> "UtilityCurve":
        return cls("log", gamma=gamma, shift=shift)

    @classmethod
    def parse(cls, spec: str) -> "UtilityCurve":
        """Build from a spec string such as ``"linear"`` or ``"log:gamma=0.021"``."""
        family, params = _parse_spec(spec, "utility")
        if family == "linear":
            return cls.linear(shift=params.pop("shift", 0.0)) if not params or set(params) <= {"shift"} else _bad(spec)
        if family == "log":
            gamma = params.pop("gamma", None)
            shift = params.pop("shift", 0.0)
            if gamma is None or params:
                raise InvalidParameter(f"bad utility spec {spec!r}")
            return cls.log(gamma, shift=shift)
        raise InvalidParameter(f"unknown utility family in {spec!r}")

    def spec_string(self) -> str:
        parts = []
        if self.family == "log":
            parts.append(f"gamma={self.gamma!r}")
        if self.shift != 0.0:
            parts.append(f"shift={self.shift!r}")
        return self.family + (":" + ",".join(parts) if parts else "")

    def base_value(self, x: float) -> float:
        """Utility before the affine shift."""
        if self.family == "linear":
            return float(x)
        t = x / self.gamma
        if t <= -1.0:
            raise DomainError(
                f"x={x!r} outside the log-utility domain (x/gamma + 1 must be > 0)"
            )
        return math.log1p(t)

    def value(self, x: float) -> float:
        return self.base_value(x) + self.shift

    def difference(self, x: float, y: float) -> float:
        """u(x) - u(y); the affine shift cancels exactly."""
        return self.base_value(x) - self.base_value(y)


def _bad(spec: str):
    raise InvalidParameter(f"bad utility spec {spec!r}")


def eval_utility(curve: UtilityCurve, x: float) -> float:
    """u(x) for the given curve, including its affine shift."""
    return curve.value(x)


# ---------------------------------------------------------------------------
# Regret kernels
# ---------------------------------------------------------------------------

_FAMILIES = ("linear", "exp", "sinh", "pure-regret", "tanh")


@dataclass(frozen=True)
class RegretKernel:
    """A regret/appreciation kernel ``f`` and its comparator ``g``.

    Families and their comparators:

    ==============  ==========================  =============================
    family          f(x)                        g(x) = f(x) - f(-x)
    ==============  ==========================  =============================
    ``linear``      a*x/2                       a*x
    ``exp``         b*(a**x - 1)                b*(a**x - a**-x)
    ``sinh``        (e**(x/beta) - 1)/2         sinh(x/beta)
    ``pure-regret`` a*max(x, 0)                 a*x
    ``tanh``        tanh(x)/2                   tanh(x)
    ==============  ==========================  =============================

    ``sinh`` is the ``exp`` family at a = e**(1/beta), b = 1/2.  ``tanh`` is
    kept as a known-failing fixture: it is antisymmetric and monotone but
    sub-additive on the positive domain, so it fails the super-additivity
    screen and admits preference cycles.
    """

    family: str
    a: float | None = None
    b: float | None = None
    beta: float | None = None

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise InvalidParameter(f"unknown kernel family {self.family!r}")
        if self.family in ("linear", "pure-regret"):
            if self.a is None or not self.a > 0.0:
                raise InvalidParameter(f"{self.family} kernel needs a > 0, got {self.a!r}")
        elif self.family == "exp":
            if self.a is None or not self.a > 0.0:
                raise InvalidParameter(f"exp kernel needs a > 0, got {self.a!r}")
            if self.b is None or not self.b > 0.0:
                raise InvalidParameter(f"exp kernel needs b > 0, got {self.b!r}")
        elif self.family == "sinh":
            if self.beta is None or not self.beta > 0.0:
                raise InvalidParameter(f"sinh kernel needs beta > 0, got {self.beta!r}")

    @classmethod
    def linear(cls, a: float = 1.0) -> "RegretKernel":
        return cls("linear", a=a)

    @classmethod
    def exponential(cls, a: float, b: float = 0.5) -> "RegretKernel":
        return cls("exp", a=a, b=b)

    @classmethod
    def sinh(cls, beta: float = 1.0) -> "RegretKernel":
        return cls("sinh", beta=beta)

    @classmethod
    def pure_regret(cls, a: float = 1.0) -> "RegretKernel":
        return cls("pure-regret", a=a)

    @classmethod
    def tanh(cls) -> "RegretKernel":
        return cls("tanh")

    @classmethod
    def parse(cls, spec: str) -> "RegretKernel":
        """Build from a spec string, e.g. ``"sinh:beta=1.0"`` or ``"exp:a=2,b=0.5"``."""
        family, params = _parse_spec(spec, "kernel")
        family = {"pure_regret": "pure-regret"}.get(family, family)
        try:
            if family == "linear":
                return cls.linear(**params) if set(params) <= {"a"} else _badk(spec)
            if family == "pure-regret":
                return cls.pure_regret(**params) if set(params) <= {"a"} else _badk(spec)
            if family == "exp":
                return cls.exponential(**params) if {"a"} <= set(params) <= {"a", "b"} else _badk(spec)
            if family == "sinh":
                return cls.sinh(**params) if set(params) <= {"beta"} else _badk(spec)
            if family == "tanh":
                return cls.tanh() if not params else _badk(spec)
        except TypeError as exc:
            raise InvalidParameter(f"bad kernel spec {spec!r}: {exc}") from exc
        raise InvalidParameter(f"unknown kernel family in {spec!r}")

    def spec_string(self) -> str:
        if self.family == "tanh":
            return "tanh"
        if self.family == "sinh":
            return f"sinh:beta={self.beta!r}"
        if self.family == "exp":
            return f"exp:a={self.a!r},b={self.b!r}"
        return f"{self.family}:a={self.a!r}"

    @property
    def is_transitive_family(self) -> bool:
        """True when pairwise preferences under this comparator are transitive
        for every lottery set (linear comparators reduce to expected utility;
        exp/sinh factor into positive score ratios)."""
        return self.family in ("linear", "pure-regret", "exp", "sinh")

    # -- scalar evaluation --------------------------------------------------

    def f(self, d: float) -> float:
        """Kernel value at a utility gap ``d``."""
        if self.family == "linear":
            return 0.5 * self.a * d
        if self.family == "pure-regret":
            return self.a * d if d > 0.0 else 0.0
        if self.family == "tanh":
            return 0.5 * math.tanh(d)
        if self.family == "sinh":
            t = d / self.beta
        else:  # exp
            t = d * math.log(self.a)
        try:
            value = math.expm1(t)
        except OverflowError as exc:
            raise EvaluationOverflow(f"f({d!r}) overflows", exponent=t) from exc
        return 0.5 * value if self.family == "sinh" else self.b * value

    def g_magnitude(self, t: float) -> float:
        """g at a nonnegative gap; see :meth:`g` for the signed version."""
        if self.family in ("linear", "pure-regret"):
            return self.a * t
        if self.family == "tanh":
            return math.tanh(t)
        if self.family == "sinh":
            return stable_sinh(t / self.beta)
        return 2.0 * self.b * stable_sinh(t * math.log(self.a))

    def g(self, d: float) -> float:
        """Net comparator ``g(d) = f(d) - f(-d)``, antisymmetric bitwise."""
        if d == 0.0:
            return 0.0
        return math.copysign(self.g_magnitude(abs(d)), d)

    # -- vectorised evaluation ----------------------------------------------

    def g_array(self, d: np.ndarray) -> np.ndarray:
        """Elementwise ``g`` over an array of utility gaps."""
        d = np.asarray(d, dtype=float)
        mag = np.abs(d)
        if self.family in ("linear", "pure-regret"):
            out = self.a * mag
        elif self.family == "tanh":
            out = np.tanh(mag)
        elif self.family == "sinh":
            out = _sinh_magnitude_array(mag / self.beta)
        else:
            out = 2.0 * self.b * _sinh_magnitude_array(mag * math.log(self.a))
        # copysign keeps g(-d) == -g(d) bitwise; g_magnitude(0) is 0 for all
        # families, so the d == 0 case needs no special-casing
        return np.copysign(out, d)


def _badk(spec: str):
    raise InvalidParameter(f"bad kernel spec {spec!r}")


def eval_g(kernel: RegretKernel, d: float) -> float:
    """g(d) for the kernel's comparator family."""
    return kernel.g(d)
