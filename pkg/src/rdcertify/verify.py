"""Sampled condition checking and claim monitoring.

The control-of-mass condition

    f(u, v) <= f(u, v) + mu * g(u, v) <= 0   for u, v >= 0, u + v >= C

is checked on a bounded box [0, u_max] x [0, v_max]: a deterministic
lattice plus an equal number of seeded uniform samples.  The report
records the box, the seed, and up to 100 violation witnesses, so every
certificate is explicit about its scope.  Samples where the kinetics
overflow are counted as indeterminate, never as passes.

``monitor_bounds`` watches a trajectory state against the candidate
bounds (u_bar0, v_bar0); ``assemble_claim_report`` folds a run's series
and events into a machine-readable verdict on whether the bounds held.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

DEFAULT_SEED = 20240817
MAX_WITNESSES = 100


def sampling_seed() -> int:
    """Seed for the random half of the sampling (RD_CERTIFY_SEED overrides)."""
    return int(os.environ.get("RD_CERTIFY_SEED", DEFAULT_SEED))


# ---------------------------------------------------------------------------
# Control-of-mass checking
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MassControlViolation:
    u: float
    v: float
    f: float
    f_plus_mu_g: float
    which: str   # "f_le_f_plus_mu_g" or "f_plus_mu_g_le_0"


@dataclass
class MassControlReport:
    passed: bool
    mu: float
    C: float
    u_max: float
    v_max: float
    n_per_axis: int
    seed: int
    samples_tested: int
    samples_indeterminate: int
    violations: list = field(default_factory=list)

    def to_lines(self, prefix: str = "mass_control") -> list[str]:
        lines = [
            f"{prefix}.passed: {str(self.passed).lower()}",
            f"{prefix}.mu: {self.mu!r}",
            f"{prefix}.C: {self.C!r}",
            f"{prefix}.box: [0,{self.u_max!r}]x[0,{self.v_max!r}]",
            f"{prefix}.n_per_axis: {self.n_per_axis}",
            f"{prefix}.seed: {self.seed}",
            f"{prefix}.samples_tested: {self.samples_tested}",
            f"{prefix}.samples_indeterminate: {self.samples_indeterminate}",
            f"{prefix}.violations: {len(self.violations)}",
        ]
        for k, w in enumerate(self.violations, start=1):
            lines.append(
                f"{prefix}.witness_{k}: u={w.u!r} v={w.v!r} f={w.f!r} "
                f"f_plus_mu_g={w.f_plus_mu_g!r} inequality={w.which}"
            )
        return lines


def _sample_box(C, u_max, v_max, n_per_axis, seed):
    uu, vv = np.meshgrid(np.linspace(0.0, u_max, n_per_axis),
                         np.linspace(0.0, v_max, n_per_axis))
    lattice = np.column_stack([uu.ravel(), vv.ravel()])
    rng = np.random.default_rng(seed)
    rand = rng.uniform([0.0, 0.0], [u_max, v_max],
                       size=(n_per_axis * n_per_axis, 2))
    pts = np.vstack([lattice, rand])         # lattice first: merge order
    return pts[pts[:, 0] + pts[:, 1] >= C]


def check_mass_control(model, C: float, mu: float, u_max: float, v_max: float,
                       n_per_axis: int, seed: int | None = None) -> MassControlReport:
    """Check f <= f + mu*g <= 0 on the region u + v >= C of the box.

    ``passed`` is True exactly when no violation was found among the
    finite samples; overflowing samples are reported as indeterminate.
    """
    if not mu > 0:
        raise ValueError(f"mu must be > 0, got {mu}")
    if not (C >= 0 and u_max > 0 and v_max > 0):
        raise ValueError("need C >= 0 and a positive sampling box")
    if not n_per_axis >= 2:
        raise ValueError(f"n_per_axis must be >= 2, got {n_per_axis}")
    seed = sampling_seed() if seed is None else int(seed)

    pts = _sample_box(C, u_max, v_max, int(n_per_axis), seed)
    with np.errstate(over="ignore", invalid="ignore"):
        f, g = model.rates(pts[:, 0], pts[:, 1])
        fpm = f + mu * g
    finite = np.isfinite(f) & np.isfinite(g) & np.isfinite(fpm)

    violations = []
    first = f > fpm        # fails f <= f + mu*g, i.e. mu*g < 0
    second = fpm > 0.0     # fails f + mu*g <= 0
    for idx in np.flatnonzero(finite & (first | second)):
        if len(violations) >= MAX_WITNESSES:
            break
        which = "f_le_f_plus_mu_g" if first[idx] else "f_plus_mu_g_le_0"
        violations.append(MassControlViolation(
            u=float(pts[idx, 0]), v=float(pts[idx, 1]),
            f=float(f[idx]), f_plus_mu_g=float(fpm[idx]), which=which))

    return MassControlReport(
        passed=not violations, mu=float(mu), C=float(C),
        u_max=float(u_max), v_max=float(v_max), n_per_axis=int(n_per_axis),
        seed=seed, samples_tested=int(finite.sum()),
        samples_indeterminate=int((~finite).sum()), violations=violations)


def search_mu(model, C: float, u_max: float, v_max: float, n_per_axis: int,
              seed: int | None = None) -> MassControlReport:
    """Fallback when a model claims no mu: try mu = 1, 1/2, ..., 2**-20
    and return the report of the largest passing value (or the last,
    fully failed attempt when none passes)."""
    report = None
    for k in range(21):
        report = check_mass_control(model, C, 2.0 ** -k, u_max, v_max,
                                    n_per_axis, seed)
        if report.passed:
            return report
    return report


@dataclass
class GNonNegReport:
    passed: bool
    u_max: float
    v_max: float
    n_per_axis: int
    samples_tested: int
    samples_indeterminate: int
    violations: list = field(default_factory=list)   # (u, v, g) triples

    def to_lines(self, prefix: str = "g_nonneg") -> list[str]:
        lines = [
            f"{prefix}.passed: {str(self.passed).lower()}",
            f"{prefix}.box: [0,{self.u_max!r}]x[0,{self.v_max!r}]",
            f"{prefix}.samples_tested: {self.samples_tested}",
            f"{prefix}.samples_indeterminate: {self.samples_indeterminate}",
            f"{prefix}.violations: {len(self.violations)}",
        ]
        for k, (u, v, g) in enumerate(self.violations, start=1):
            lines.append(f"{prefix}.witness_{k}: u={u!r} v={v!r} g={g!r}")
        return lines


def check_g_nonneg(model, u_max: float, v_max: float,
                   n_per_axis: int) -> GNonNegReport:
    """Sampled check that g >= 0 on the lattice of the box."""
    if not (u_max > 0 and v_max > 0 and n_per_axis >= 2):
        raise ValueError("need a positive box and n_per_axis >= 2")
    uu, vv = np.meshgrid(np.linspace(0.0, u_max, int(n_per_axis)),
                         np.linspace(0.0, v_max, int(n_per_axis)))
    u, v = uu.ravel(), vv.ravel()
    with np.errstate(over="ignore", invalid="ignore"):
        _, g = model.rates(u, v)
    finite = np.isfinite(g)
    bad = np.flatnonzero(finite & (g < 0.0))[:MAX_WITNESSES]
    violations = [(float(u[i]), float(v[i]), float(g[i])) for i in bad]
    return GNonNegReport(
        passed=not violations, u_max=float(u_max), v_max=float(v_max),
        n_per_axis=int(n_per_axis), samples_tested=int(finite.sum()),
        samples_indeterminate=int((~finite).sum()), violations=violations)


def default_box(C: float, *data_sups: float) -> float:
    """Default sampling box edge: max(2C, 10, 2 * largest data sup)."""
    return max(2.0 * C, 10.0, *(2.0 * s for s in data_sups)) if data_sups \
        else max(2.0 * C, 10.0)


# ---------------------------------------------------------------------------
# Bound monitoring
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundEvent:
    t: float
    node: int
    field: str     # "u" or "v"
    value: float
    bound: float

    @property
    def exceedance(self) -> float:
        return self.value - self.bound


def monitor_bounds(state, u_bar0: float, v_bar0: float) -> BoundEvent | None:
    """First node (u scanned before v) strictly above its bound, or None.

    Bounds are non-strict: a value equal to the bound is not an event.
    """
    for name, values, bound in (("u", state.u, u_bar0), ("v", state.v, v_bar0)):
        values = np.asarray(values)
        over = values > bound
        if over.any():
            idx = int(np.argmax(over))
            return BoundEvent(t=float(state.t), node=idx, field=name,
                              value=float(values[idx]), bound=float(bound))
    return None


@dataclass
class ClaimReport:
    bound_u_held: bool
    bound_v_held: bool
    first_violation: BoundEvent | None
    J_sign_history: np.ndarray
    L_max: float

    def to_lines(self, prefix: str = "claim") -> list[str]:
        signs = self.J_sign_history
        lines = [
            f"{prefix}.bound_u_held: {str(self.bound_u_held).lower()}",
            f"{prefix}.bound_v_held: {str(self.bound_v_held).lower()}",
            f"{prefix}.L_max: {self.L_max!r}",
            f"{prefix}.J_sign_counts: neg={int((signs < 0).sum())}"
            f" zero={int((signs == 0).sum())} pos={int((signs > 0).sum())}",
        ]
        if self.first_violation is None:
            lines.append(f"{prefix}.first_violation: none")
        else:
            w = self.first_violation
            lines.append(
                f"{prefix}.first_violation: t={w.t!r} node={w.node} "
                f"field={w.field} value={w.value!r} bound={w.bound!r} "
                f"exceedance={w.exceedance!r}"
            )
        return lines


def assemble_claim_report(series, events) -> ClaimReport:
    """Fold a run's series and bound events into a ClaimReport.

    The per-field flags come from the logged sup norms against the
    bounds stored on the series; the first violation is the earliest
    collected event (events arrive in step order).
    """
    sup_u = series.sup_u
    sup_v = series.sup_v
    with np.errstate(invalid="ignore"):
        bound_u_held = not bool(np.any(sup_u > series.u_bar0))
        bound_v_held = not bool(np.any(sup_v > series.v_bar0))
        J = series.J
        signs = np.sign(J)
    return ClaimReport(
        bound_u_held=bound_u_held,
        bound_v_held=bound_v_held,
        first_violation=events[0] if events else None,
        J_sign_history=signs,
        L_max=float(np.max(series.L)) if len(series) else 0.0,
    )
