"""Catalog of reaction pairs (f, g) for two-species systems.

Growth laws F, G feed the absorption-type model

    f(u, v) = -u * F(v),      g(u, v) = u * G(v),

the combustion model uses f = -u^m e^v, g = u^m e^v, and ``BlowupExample``
is the polynomial pair f = (u - u^2) v^2, g = u v^2 whose solutions
diverge in finite time.  Each catalog entry carries the constants
(claimed_C, claimed_mu) it claims for the control-of-mass inequality
f <= f + mu*g <= 0 on u + v >= C; those claims are checked elsewhere
(see ``rdcertify.verify``), never assumed.

Growth laws can vastly exceed double precision (e^(e^s) overflows near
s = 6.565), so every law carries an overflow guard ``s_max`` -- the
largest s at which its value is still representable -- and a log-domain
evaluation used wherever only ratios matter.
"""

from __future__ import annotations

import math

import numpy as np

LOG_DBL_MAX = math.log(np.finfo(float).max)          # ~709.78
DOUBLE_EXP_GUARD = math.log(LOG_DBL_MAX)             # ~6.565, e^(e^s) limit


# ---------------------------------------------------------------------------
# Growth laws
# ---------------------------------------------------------------------------

class GrowthFunction:
    """Scalar growth law s >= 0 -> F(s).

    Subclasses implement ``value`` (may overflow to inf past ``s_max``),
    ``log_value`` (log F(s); -inf where F(s) <= 0), and ``spec`` (the
    config-file string that reconstructs the law).
    """

    s_max: float = math.inf

    def value(self, s):
        raise NotImplementedError

    def log_value(self, s):
        raise NotImplementedError

    @property
    def spec(self) -> str:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.spec!r})"

    def __eq__(self, other):
        return type(self) is type(other) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)


class Power(GrowthFunction):
    """F(s) = s**beta, beta > 0."""

    def __init__(self, beta: float):
        if not beta > 0:
            raise ValueError(f"beta must be > 0, got {beta}")
        self.beta = float(beta)
        self.s_max = math.exp(min(LOG_DBL_MAX, LOG_DBL_MAX / self.beta))

    def value(self, s):
        with np.errstate(over="ignore"):
            return np.asarray(s, dtype=float) ** self.beta

    def log_value(self, s):
        s = np.asarray(s, dtype=float)
        with np.errstate(divide="ignore"):
            return self.beta * np.log(s)

    @property
    def spec(self):
        return f"power:{self.beta!r}"


class Exp(GrowthFunction):
    """F(s) = e**s."""

    s_max = LOG_DBL_MAX

    def value(self, s):
        with np.errstate(over="ignore"):
            return np.exp(np.asarray(s, dtype=float))

    def log_value(self, s):
        return np.asarray(s, dtype=float) + 0.0

    @property
    def spec(self):
        return "exp"


class SubExp(GrowthFunction):
    """F(s) = e**(s**gamma), 0 < gamma < 1 (sub-exponential growth)."""

    def __init__(self, gamma: float):
        if not 0.0 < gamma < 1.0:
            raise ValueError(f"gamma must lie in (0, 1), got {gamma}")
        self.gamma = float(gamma)
        self.s_max = LOG_DBL_MAX ** (1.0 / self.gamma)

    def value(self, s):
        with np.errstate(over="ignore"):
            return np.exp(np.asarray(s, dtype=float) ** self.gamma)

    def log_value(self, s):
        return np.asarray(s, dtype=float) ** self.gamma

    @property
    def spec(self):
        return f"subexp:{self.gamma!r}"


class DoubleExp(GrowthFunction):
    """F(s) = e**(e**s); representable only up to s ~ 6.565."""

    s_max = DOUBLE_EXP_GUARD

    def value(self, s):
        with np.errstate(over="ignore"):
            return np.exp(np.exp(np.asarray(s, dtype=float)))

    def log_value(self, s):
        with np.errstate(over="ignore"):
            return np.exp(np.asarray(s, dtype=float))

    @property
    def spec(self):
        return "doubleexp"


class DoubleExpMinusPoly(GrowthFunction):
    """F(s) = e**(e**s) - P(s) for a polynomial P.

    ``coeffs[k]`` is the coefficient of s**k.  The log value is computed
    as e**s + log1p(-P(s) * e**(-e**s)) so the double exponential never
    has to be materialized; where P(s) >= e**(e**s) the value is not
    positive and log_value returns -inf.
    """

    s_max = DOUBLE_EXP_GUARD

    def __init__(self, coeffs):
        self.coeffs = tuple(float(c) for c in coeffs)
        if not self.coeffs:
            raise ValueError("coeffs must contain at least one coefficient")

    def _poly(self, s):
        return np.polynomial.polynomial.polyval(s, self.coeffs)

    def value(self, s):
        s = np.asarray(s, dtype=float)
        with np.errstate(over="ignore"):
            return np.exp(np.exp(s)) - self._poly(s)

    def log_value(self, s):
        s = np.asarray(s, dtype=float)
        with np.errstate(over="ignore", under="ignore"):
            e = np.exp(s)
            rel = self._poly(s) * np.exp(-e)   # P(s) / e^(e^s)
        with np.errstate(divide="ignore", invalid="ignore"):
            corr = np.where(rel < 1.0, np.log1p(-np.minimum(rel, 1.0)), -np.inf)
        return e + corr

    @property
    def spec(self):
        return "doubleexp-poly:" + ",".join(repr(c) for c in self.coeffs)


_GROWTH_KINDS = {
    "power": Power,
    "exp": Exp,
    "subexp": SubExp,
    "doubleexp": DoubleExp,
    "doubleexp-poly": DoubleExpMinusPoly,
}


def growth_from_spec(text: str) -> GrowthFunction:
    """Build a growth law from its config string, e.g. ``power:2.0``."""
    kind, _, arg = text.strip().partition(":")
    if kind == "exp":
        return Exp()
    if kind == "doubleexp":
        return DoubleExp()
    if kind == "power":
        return Power(float(arg))
    if kind == "subexp":
        return SubExp(float(arg))
    if kind == "doubleexp-poly":
        return DoubleExpMinusPoly([float(c) for c in arg.split(",")])
    raise ValueError(
        f"unknown growth function {text!r}; expected one of "
        f"{sorted(_GROWTH_KINDS)}"
    )


# ---------------------------------------------------------------------------
# Reaction models
# ---------------------------------------------------------------------------

class ReactionModel:
    """A reaction pair (f, g) plus the control-of-mass constants it claims.

    Extension point: user models subclass this and implement ``rates``;
    f and g must be continuously differentiable on u, v >= 0 with
    f(0, v) = 0 and g(u, 0) >= 0 so positivity of trajectories is
    preserved.  ``claimed_C``/``claimed_mu`` may be None when the model
    claims no control-of-mass constants.
    """

    kind: str = "custom"
    claimed_C: float | None = None
    claimed_mu: float | None = None

    def rates(self, u, v):
        """Vectorized (f, g) without domain checks; may overflow to inf."""
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}(C={self.claimed_C}, mu={self.claimed_mu})"


def _zero_where_zero(base, factor):
    # base * factor with the convention 0 * inf = 0 (reactant absent).
    with np.errstate(invalid="ignore"):
        prod = base * factor
    return np.where(base == 0.0, 0.0, prod)


class Absorption(ReactionModel):
    """f = -u F(v), g = u G(v): species u consumed, v produced.

    The claimed constants default to C = A, mu = lam where A is the
    sampled threshold past which F/G stays above lam (None when the
    search fails).
    """

    kind = "absorption"

    def __init__(self, F: GrowthFunction, G: GrowthFunction, lam: float = 0.5,
                 claimed_C: float | None = None, claimed_mu: float | None = None,
                 threshold_s_max: float = 10.0, threshold_samples: int = 2001):
        self.F = F
        self.G = G
        self.lam = float(lam)
        if claimed_C is None and claimed_mu is None:
            A = find_threshold_A(F, G, self.lam, threshold_s_max,
                                 threshold_samples)
            if A is not None:
                claimed_C, claimed_mu = A, self.lam
        self.claimed_C = claimed_C
        self.claimed_mu = claimed_mu

    def rates(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        f = -_zero_where_zero(u, self.F.value(v))
        g = _zero_where_zero(u, self.G.value(v))
        return f, g


class Combustion(ReactionModel):
    """Exothermic combustion: f = -u^m e^v, g = u^m e^v (u is the
    reactant concentration, v the temperature).  f + g = 0 identically,
    and the pair claims C = 0, mu = 1/2."""

    kind = "combustion"

    def __init__(self, m: int = 1, claimed_C: float = 0.0,
                 claimed_mu: float = 0.5):
        if not (isinstance(m, int) and m >= 1):
            raise ValueError(f"m must be a positive integer, got {m}")
        self.m = m
        self.claimed_C = claimed_C
        self.claimed_mu = claimed_mu

    def rates(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        with np.errstate(over="ignore"):
            um = u ** self.m
            g = _zero_where_zero(um, np.exp(v))
        return -g, g


class BlowupExample(ReactionModel):
    """f = (u - u^2) v^2, g = u v^2.

    Polynomial kinetics with f > 0 on 0 < u < 1, v > 0, so no constants
    (C, mu) can satisfy the control-of-mass inequality; solutions with
    1/2 <= u0 <= 1 blow up in finite time.  Claims nothing.
    """

    kind = "blowup_example"

    def rates(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        with np.errstate(over="ignore", invalid="ignore"):
            v2 = v * v
            f = _zero_where_zero(u - u * u, v2)
            g = _zero_where_zero(u, v2)
        return f, g


def evaluate(model: ReactionModel, u, v):
    """The pair (f, g) at u, v >= 0.

    Raises ValueError on negative input; overflow is reported by
    returning non-finite entries (the flagged divergence value), never
    by raising.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if np.any(u < 0) or np.any(v < 0):
        raise ValueError("reaction evaluation requires u >= 0 and v >= 0")
    f, g = model.rates(u, v)
    if f.ndim == 0:
        return float(f), float(g)
    return f, g


# ---------------------------------------------------------------------------
# Threshold search for the ratio F/G
# ---------------------------------------------------------------------------

def find_threshold_A(F: GrowthFunction, G: GrowthFunction, lam: float,
                     s_max: float = 10.0, n_samples: int = 2001):
    """Smallest sampled A with F(s)/G(s) > lam for every sample in (A, s_max].

    The ratio test runs entirely in the log domain (log F - log G >
    log lam), so F and G may individually overflow where their ratio is
    benign.  Returns None when the tail condition fails at s_max or the
    log ratio is unrepresentable there.
    """
    if not 0.0 < lam < 1.0:
        raise ValueError(f"lam must lie in (0, 1), got {lam}")
    if not (s_max > 0 and n_samples >= 2):
        raise ValueError("need s_max > 0 and n_samples >= 2")
    s = np.linspace(0.0, float(s_max), int(n_samples))
    with np.errstate(invalid="ignore"):
        log_ratio = F.log_value(s) - G.log_value(s)
        ok = log_ratio > math.log(lam)        # NaN compares False
    if not ok[-1]:
        return None
    failed = np.flatnonzero(~ok)
    if failed.size == 0:
        return float(s[0])
    return float(s[failed[-1]])
