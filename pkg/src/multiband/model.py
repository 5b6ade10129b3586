"""Core data model for multi-band robust optimization.

A nominal linear program ``max c'x  s.t.  A x <= b, x >= 0`` is protected
against coefficient deviations described by a *band scheme*: each uncertain
coefficient (i, j) owns a strictly increasing vector of deviation thresholds

    d_ij^{K-} < ... < d_ij^{-1} < d_ij^0 = 0 < d_ij^1 < ... < d_ij^{K+}

which partitions its deviation range into bands.  Band ``K-`` is the closed
singleton ``{d^{K-}}``; every other band ``k`` is the half-open interval
``(d^{k-1}, d^k]``.  System-wide integer bounds ``l_k <= u_k`` limit how many
coefficients of a row may fall in band ``k`` simultaneously.

The *profile* of a scheme is the band-count vector ``theta`` that a worst-case
scenario uses: an index ``p`` splits the bands into those pinned at their
lower bound (below ``p``), those pinned at their upper bound (above ``p``),
and the middle band that absorbs the remainder so the counts sum to ``n``.

All tolerances in this module are absolute at ``TOL = 1e-9``.  Band
membership uses half-open intervals with the tolerance applied to the right
endpoint.  Problems are maximization-form internally; minimization instances
are negated on ingest and their reported objective values negated back at
the CLI boundary.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping

import numpy as np

TOL = 1e-9


class InstanceError(ValueError):
    """Raised for structurally or semantically invalid instance data."""


class ScenarioError(ValueError):
    """Raised when an operation receives an infeasible scenario."""


class ProfileError(ValueError):
    """Raised when a band scheme admits no valid profile for a given n."""


# ---------------------------------------------------------------------------
# nominal problem
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NominalProblem:
    """A linear program ``max c'x  s.t.  A x <= b``, ``x >= 0``.

    ``int_vars`` lists 0-based columns restricted to integers.  ``free_vars``
    lists columns exempt from the nonnegativity default (used by extended
    programs whose auxiliary dual variables are sign-unrestricted); the two
    sets must be disjoint.
    """

    c: np.ndarray
    A: np.ndarray
    b: np.ndarray
    int_vars: frozenset[int] = frozenset()
    free_vars: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", np.asarray(self.c, dtype=float))
        object.__setattr__(self, "A", np.atleast_2d(np.asarray(self.A, dtype=float)))
        object.__setattr__(self, "b", np.asarray(self.b, dtype=float))
        object.__setattr__(self, "int_vars", frozenset(int(j) for j in self.int_vars))
        object.__setattr__(self, "free_vars", frozenset(int(j) for j in self.free_vars))
        if self.A.shape != (self.m, self.n):
            raise InstanceError(
                f"A has shape {self.A.shape}, expected ({self.m}, {self.n})"
            )
        bad = [j for j in self.int_vars | self.free_vars if not 0 <= j < self.n]
        if bad:
            raise InstanceError(f"variable indices out of range: {sorted(bad)}")
        if self.int_vars & self.free_vars:
            raise InstanceError("int_vars and free_vars must be disjoint")

    @property
    def n(self) -> int:
        return self.c.shape[0]

    @property
    def m(self) -> int:
        return self.b.shape[0]


# ---------------------------------------------------------------------------
# band scheme
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BandScheme:
    """Deviation bands plus system-wide (optionally per-row) count bounds.

    ``dev`` maps an uncertain coefficient ``(i, j)`` to its threshold vector
    over all bands ``K- .. K+`` in ascending band order, with the implicit
    ``d^0 = 0`` filled in.  Coefficients absent from ``dev`` are *certain*:
    they never deviate and do not take part in band counting.

    ``lower`` / ``upper`` are arrays over the same band ordering.  Per-row
    overrides, when present, replace both arrays for that row.
    """

    k_minus: int
    k_plus: int
    lower: np.ndarray
    upper: np.ndarray
    dev: dict[tuple[int, int], np.ndarray] = field(default_factory=dict)
    row_bounds: dict[int, tuple[np.ndarray, np.ndarray]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not (self.k_minus <= 0 <= self.k_plus):
            raise InstanceError(
                f"band range [{self.k_minus}, {self.k_plus}] must contain 0"
            )
        object.__setattr__(self, "lower", np.asarray(self.lower, dtype=int))
        object.__setattr__(self, "upper", np.asarray(self.upper, dtype=int))
        nb = self.num_bands
        for name in ("lower", "upper"):
            arr = getattr(self, name)
            if arr.shape != (nb,):
                raise InstanceError(f"{name} has length {arr.shape[0]}, expected {nb}")
        norm_dev = {}
        for (i, j), d in self.dev.items():
            d = np.asarray(d, dtype=float)
            if d.shape != (nb,):
                raise InstanceError(
                    f"threshold vector for ({i}, {j}) has length {d.shape[0]}, "
                    f"expected {nb}"
                )
            if abs(d[self.index(0)]) > TOL:
                raise InstanceError(f"threshold d^0 for ({i}, {j}) must be 0")
            if np.any(np.diff(d) <= TOL):
                raise InstanceError(
                    f"thresholds for ({i}, {j}) must be strictly increasing"
                )
            norm_dev[(int(i), int(j))] = d
        object.__setattr__(self, "dev", norm_dev)
        norm_rows = {}
        for i, (lo, up) in self.row_bounds.items():
            lo = np.asarray(lo, dtype=int)
            up = np.asarray(up, dtype=int)
            if lo.shape != (nb,) or up.shape != (nb,):
                raise InstanceError(f"row {i} bound overrides must have length {nb}")
            norm_rows[int(i)] = (lo, up)
        object.__setattr__(self, "row_bounds", norm_rows)

    # -- band bookkeeping ---------------------------------------------------

    @property
    def bands(self) -> range:
        """Band indices ``K- .. K+`` in ascending order."""
        return range(self.k_minus, self.k_plus + 1)

    @property
    def num_bands(self) -> int:
        return self.k_plus - self.k_minus + 1

    def index(self, k: int) -> int:
        """Array position of band ``k``."""
        if not self.k_minus <= k <= self.k_plus:
            raise KeyError(f"band {k} outside [{self.k_minus}, {self.k_plus}]")
        return k - self.k_minus

    def bounds_for_row(self, i: int | None) -> tuple[np.ndarray, np.ndarray]:
        if i is not None and i in self.row_bounds:
            return self.row_bounds[i]
        return self.lower, self.upper

    def thresholds(self, i: int, j: int) -> np.ndarray | None:
        """Threshold vector of coefficient (i, j), or None if certain."""
        return self.dev.get((i, j))

    def uncertain_cols(self, i: int) -> list[int]:
        """Ascending columns of row ``i`` that carry deviation bands."""
        return sorted(j for (r, j) in self.dev if r == i)

    def rows_with_uncertainty(self) -> list[int]:
        return sorted({i for (i, _) in self.dev})

    def band_of(self, i: int, j: int, value: float) -> int | None:
        """Band containing a deviation value, or None if out of range.

        Band ``K-`` is matched as a closed singleton; the remaining bands
        are half-open ``(d^{k-1}, d^k]`` with TOL applied to the right
        endpoint.
        """
        d = self.thresholds(i, j)
        if d is None:
            return 0 if abs(value) <= TOL else None
        if value < d[0] - TOL:
            return None
        if value <= d[0] + TOL:
            return self.k_minus
        for k in range(self.k_minus + 1, self.k_plus + 1):
            if value <= d[self.index(k)] + TOL:
                return k
        return None

    def validate_for(self, n: int) -> list[str]:
        """Invariant violations of this scheme relative to a problem size."""
        problems = []
        lo, up = self.lower, self.upper
        if np.any(lo < 0):
            problems.append("band lower bounds must be nonnegative")
        if np.any(lo > up):
            problems.append("band lower bounds must not exceed upper bounds")
        if np.any(up > n):
            problems.append(f"band upper bounds must not exceed n={n}")
        if up[self.index(0)] != n:
            problems.append(f"u_0 must equal n={n} (zero deviation always allowed)")
        if int(lo.sum()) > n:
            problems.append("sum of band lower bounds exceeds n")
        for i, (rlo, rup) in sorted(self.row_bounds.items()):
            if np.any(rlo < 0) or np.any(rlo > rup) or np.any(rup > n):
                problems.append(f"row {i} bound overrides out of range")
            if rup[self.index(0)] != n:
                problems.append(f"row {i} override must keep u_0 = n")
            if int(rlo.sum()) > n:
                problems.append(f"row {i} override lower bounds exceed n")
        return problems


# ---------------------------------------------------------------------------
# profile
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Profile:
    """Worst-case band counts: ``theta[k]`` coefficients land in band k."""

    p: int
    theta: dict[int, int]

    @property
    def total(self) -> int:
        return sum(self.theta.values())


def compute_profile(scheme: BandScheme, n: int, row: int | None = None) -> Profile:
    """Worst-case band-count vector for ``n`` uncertain coefficients.

    The split index ``p`` is the smallest band such that pinning every band
    below it at its lower bound and every band above it at its upper bound
    leaves a nonnegative remainder that fits within band ``p``'s own bounds.
    Bands below ``p`` get ``l_k``, bands above get ``u_k``, and band ``p``
    absorbs ``n`` minus the rest.

    Raises ProfileError if the bounds admit no count vector summing to ``n``
    (lower bounds too large, or total capacity below ``n``).
    """
    lo, up = scheme.bounds_for_row(row)
    ks = list(scheme.bands)
    nb = len(ks)
    if int(lo.sum()) > n:
        raise ProfileError(f"sum of lower bounds {int(lo.sum())} exceeds n={n}")
    p_idx = None
    for idx in range(nb):
        if lo[: idx + 1].sum() + up[idx + 1 :].sum() <= n:
            p_idx = idx
            break
    if p_idx is None:
        # lower bounds alone exceed n; unreachable given the check above
        raise ProfileError("no split index exists for these bounds")
    theta = {}
    for idx, k in enumerate(ks):
        if idx < p_idx:
            theta[k] = int(lo[idx])
        elif idx > p_idx:
            theta[k] = int(up[idx])
    rest = n - sum(theta.values())
    if not lo[p_idx] <= rest <= up[p_idx]:
        raise ProfileError(
            f"band capacity cannot place n={n} coefficients "
            f"(remainder {rest} outside [{int(lo[p_idx])}, {int(up[p_idx])}] "
            f"at band {ks[p_idx]})"
        )
    theta[ks[p_idx]] = int(rest)
    return Profile(p=ks[p_idx], theta=dict(sorted(theta.items())))


# ---------------------------------------------------------------------------
# scenarios
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Scenario:
    """A concrete deviation matrix, same shape as the constraint matrix."""

    dev: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "dev", np.atleast_2d(np.asarray(self.dev, dtype=float)))


@dataclass(frozen=True)
class ScenarioViolation:
    """First feasibility property a scenario breaks.

    ``prop`` numbers the properties: 1 = a deviation outside its coefficient
    range (reported with the column), 2 = a band count outside [l_k, u_k]
    for a band above the lowest (reported with the band), 3 = the same for
    the lowest band's closed singleton.
    """

    prop: int
    row: int
    col: int | None = None
    band: int | None = None
    message: str = ""

    def __bool__(self) -> bool:  # a violation is falsy as a "validity" answer
        return False


@dataclass(frozen=True)
class BandPartition:
    """Per-row assignment of columns to bands, ``rows[i][k] = (j, ...)``."""

    rows: dict[int, dict[int, tuple[int, ...]]]

    def __bool__(self) -> bool:
        return True

    def counts(self, i: int) -> dict[int, int]:
        return {k: len(js) for k, js in self.rows[i].items()}


def validate_scenario(
    problem: NominalProblem, scheme: BandScheme, scenario: Scenario
) -> BandPartition | ScenarioViolation:
    """Check a deviation matrix against ranges and band-count bounds.

    Returns the band partition (per row, band -> ascending column tuple)
    when every deviation lies in its coefficient's range, certain
    coefficients do not deviate, and each row's band counts respect the
    scheme's (or the row's overriding) bounds.  Otherwise returns a report
    naming the first violated property, scanning rows in order, columns
    before bands, bands ascending.

    The partition covers every column (certain columns always land in band
    0), but only uncertain columns count toward the band-cardinality
    bounds.
    """
    if scenario.dev.shape != (problem.m, problem.n):
        raise ScenarioError(
            f"scenario has shape {scenario.dev.shape}, "
            f"expected ({problem.m}, {problem.n})"
        )
    rows: dict[int, dict[int, tuple[int, ...]]] = {}
    for i in range(problem.m):
        assign: dict[int, list[int]] = {k: [] for k in scheme.bands}
        counted: dict[int, int] = {k: 0 for k in scheme.bands}
        for j in range(problem.n):
            v = float(scenario.dev[i, j])
            k = scheme.band_of(i, j, v)
            if k is None:
                return ScenarioViolation(
                    prop=1, row=i, col=j,
                    message=f"deviation {v} at ({i}, {j}) outside coefficient range",
                )
            assign[k].append(j)
            if scheme.thresholds(i, j) is not None:
                counted[k] += 1
        lo, up = scheme.bounds_for_row(i)
        for k in scheme.bands:
            cnt = counted[k]
            lo_k = int(lo[scheme.index(k)])
            up_k = int(up[scheme.index(k)])
            if not lo_k <= cnt <= up_k:
                prop = 3 if k == scheme.k_minus else 2
                return ScenarioViolation(
                    prop=prop, row=i, band=k,
                    message=(
                        f"row {i} band {k} count {cnt} outside "
                        f"[{lo_k}, {up_k}]"
                    ),
                )
        rows[i] = {k: tuple(sorted(js)) for k, js in assign.items()}
    return BandPartition(rows=rows)


def dominates(s1: Scenario, s2: Scenario) -> bool:
    """Componentwise ``s1 >= s2`` within TOL."""
    return bool(np.all(s1.dev >= s2.dev - TOL))


def canonicalize_scenario(
    problem: NominalProblem, scheme: BandScheme, scenario: Scenario
) -> Scenario:
    """Scenario at band endpoints with band counts exactly the profile.

    Two steps per row, acting only on uncertain coefficients:

    1. round every deviation up to the right endpoint of its band (the
       lowest band is a singleton and stays put);
    2. repair band counts to the row profile by repeatedly moving the
       smallest column from the lowest over-full band into the highest
       under-full band.

    Raises ScenarioError when a deviation lies outside its coefficient's
    range; band-count bounds on the *input* are not required (the repair
    enforces the profile counts regardless).  When the input's counts do
    respect the bounds, every over-full band lies below every under-full
    band, each move pushes a deviation to a weakly larger threshold, and
    the result dominates the input.
    """
    if scenario.dev.shape != (problem.m, problem.n):
        raise ScenarioError(
            f"scenario has shape {scenario.dev.shape}, "
            f"expected ({problem.m}, {problem.n})"
        )
    out = np.zeros_like(scenario.dev)
    for i in range(problem.m):
        cols = scheme.uncertain_cols(i)
        for j in range(problem.n):
            if scheme.band_of(i, j, float(scenario.dev[i, j])) is None:
                raise ScenarioError(
                    f"cannot canonicalize: deviation {scenario.dev[i, j]} at "
                    f"({i}, {j}) outside coefficient range"
                )
        if not cols:
            continue
        prof = compute_profile(scheme, len(cols), row=i)
        band_at = {
            j: scheme.band_of(i, j, float(scenario.dev[i, j])) for j in cols
        }
        counts = {k: 0 for k in scheme.bands}
        for k in band_at.values():
            counts[k] += 1
        while counts != prof.theta:
            k_from = min(k for k in scheme.bands if counts[k] > prof.theta[k])
            k_to = max(k for k in scheme.bands if counts[k] < prof.theta[k])
            j = min(j for j, k in band_at.items() if k == k_from)
            band_at[j] = k_to
            counts[k_from] -= 1
            counts[k_to] += 1
        for j in cols:
            d = scheme.thresholds(i, j)
            out[i, j] = d[scheme.index(band_at[j])]
    return Scenario(dev=out)


# ---------------------------------------------------------------------------
# samples attached to instances
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SampleSet:
    """Observed coefficient values, ``values[(i, j)]`` of common length W."""

    values: dict[tuple[int, int], np.ndarray]

    def __post_init__(self) -> None:
        norm = {
            (int(i), int(j)): np.asarray(v, dtype=float)
            for (i, j), v in self.values.items()
        }
        object.__setattr__(self, "values", norm)

    @property
    def draws(self) -> int:
        lengths = {v.shape[0] for v in self.values.values()}
        return lengths.pop() if len(lengths) == 1 else -1


# ---------------------------------------------------------------------------
# instances and JSON interchange
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Instance:
    """A nominal problem, its band scheme, and optional observed samples.

    ``sense`` records the sense of the source data ("max" or "min"); the
    stored problem is always maximization-form, with costs negated on
    ingest for minimization instances.
    """

    problem: NominalProblem
    scheme: BandScheme
    samples: SampleSet | None = None
    sense: str = "max"

    @property
    def signed_value(self):
        """Map an internal objective value back to the source sense."""
        return (lambda v: -v) if self.sense == "min" else (lambda v: v)


def _band_key_map(obj: Mapping[str, Any], what: str) -> dict[int, float]:
    out = {}
    for key, val in obj.items():
        try:
            out[int(key)] = val
        except (TypeError, ValueError):
            raise InstanceError(f"{what} has non-integer band key {key!r}") from None
    return out


def parse_instance(data: Mapping[str, Any]) -> Instance:
    """Build an Instance from parsed JSON, raising InstanceError on misfit.

    Structural problems (wrong shapes, missing keys, unknown bands) raise
    immediately; use :func:`instance_violations` afterwards for the full
    semantic invariant report.
    """
    if not isinstance(data, Mapping):
        raise InstanceError("instance must be a JSON object")
    try:
        sense = data.get("sense", "max")
        if sense not in ("max", "min"):
            raise InstanceError(f"sense must be 'max' or 'min', got {sense!r}")
        n = int(data["n"])
        m = int(data["m"])
        c = np.asarray(data["c"], dtype=float)
        A = np.asarray(data["A"], dtype=float)
        b = np.asarray(data["b"], dtype=float)
    except KeyError as exc:
        raise InstanceError(f"missing required field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise InstanceError(f"malformed numeric field: {exc}") from None
    if c.shape != (n,):
        raise InstanceError(f"c has shape {c.shape}, expected ({n},)")
    if A.shape != (m, n):
        raise InstanceError(f"A has shape {A.shape}, expected ({m}, {n})")
    if b.shape != (m,):
        raise InstanceError(f"b has shape {b.shape}, expected ({m},)")
    if sense == "min":
        c = -c
    int_vars = frozenset(int(j) for j in data.get("int_vars", []))
    free_vars = frozenset(int(j) for j in data.get("free_vars", []))
    problem = NominalProblem(c=c, A=A, b=b, int_vars=int_vars, free_vars=free_vars)

    bands = data.get("bands")
    if bands is None:
        raise InstanceError("missing required field 'bands'")
    try:
        k_minus = int(bands["K_minus"])
        k_plus = int(bands["K_plus"])
        lo_map = _band_key_map(bands["l"], "bands.l")
        up_map = _band_key_map(bands["u"], "bands.u")
    except KeyError as exc:
        raise InstanceError(f"bands missing field {exc.args[0]!r}") from None
    ks = list(range(k_minus, k_plus + 1))
    for name, mp in (("l", lo_map), ("u", up_map)):
        missing = [k for k in ks if k not in mp]
        extra = [k for k in mp if k not in ks]
        if missing or extra:
            raise InstanceError(
                f"bands.{name} must cover exactly bands {k_minus}..{k_plus} "
                f"(missing {missing}, unknown {extra})"
            )
    lower = np.array([lo_map[k] for k in ks], dtype=int)
    upper = np.array([up_map[k] for k in ks], dtype=int)

    dev = {}
    zero_pos = -k_minus
    for entry in bands.get("dev", []):
        try:
            i, j = int(entry["i"]), int(entry["j"])
            d_map = _band_key_map(entry["d"], f"dev entry ({entry.get('i')}, {entry.get('j')})")
        except KeyError as exc:
            raise InstanceError(f"dev entry missing field {exc.args[0]!r}") from None
        if not 0 <= i < m or not 0 <= j < n:
            raise InstanceError(f"dev entry ({i}, {j}) out of range")
        if (i, j) in dev:
            raise InstanceError(f"duplicate dev entry for ({i}, {j})")
        if 0 in d_map:
            raise InstanceError(
                f"dev entry ({i}, {j}) lists d^0, which is implicit and fixed at 0"
            )
        needed = [k for k in ks if k != 0]
        missing = [k for k in needed if k not in d_map]
        extra = [k for k in d_map if k not in ks]
        if missing or extra:
            raise InstanceError(
                f"dev entry ({i}, {j}) must give thresholds for bands "
                f"{needed} (missing {missing}, unknown {extra})"
            )
        vec = np.array([0.0 if k == 0 else float(d_map[k]) for k in ks])
        vec[zero_pos] = 0.0
        dev[(i, j)] = vec

    row_bounds = {}
    for entry in bands.get("row_overrides", []):
        try:
            i = int(entry["i"])
            rlo = _band_key_map(entry["l"], f"row override {entry.get('i')} l")
            rup = _band_key_map(entry["u"], f"row override {entry.get('i')} u")
        except KeyError as exc:
            raise InstanceError(
                f"row override missing field {exc.args[0]!r}"
            ) from None
        if not 0 <= i < m:
            raise InstanceError(f"row override {i} out of range")
        if sorted(rlo) != ks or sorted(rup) != ks:
            raise InstanceError(f"row override {i} must cover all bands")
        row_bounds[i] = (
            np.array([rlo[k] for k in ks], dtype=int),
            np.array([rup[k] for k in ks], dtype=int),
        )

    scheme = BandScheme(
        k_minus=k_minus, k_plus=k_plus, lower=lower, upper=upper,
        dev=dev, row_bounds=row_bounds,
    )

    samples = None
    if "samples" in data and data["samples"]:
        values = {}
        for entry in data["samples"]:
            try:
                i, j = int(entry["i"]), int(entry["j"])
                vals = np.asarray(entry["values"], dtype=float)
            except (KeyError, TypeError, ValueError):
                raise InstanceError("malformed samples entry") from None
            if not 0 <= i < m or not 0 <= j < n:
                raise InstanceError(f"samples entry ({i}, {j}) out of range")
            if (i, j) in values:
                raise InstanceError(f"duplicate samples entry for ({i}, {j})")
            values[(i, j)] = vals
        samples = SampleSet(values=values)

    return Instance(problem=problem, scheme=scheme, samples=samples, sense=sense)


def instance_violations(inst: Instance) -> list[str]:
    """All semantic invariant violations of an already-parsed instance."""
    problems = list(inst.scheme.validate_for(inst.problem.n))
    try:
        compute_profile(inst.scheme, inst.problem.n)
        for i in inst.scheme.rows_with_uncertainty():
            compute_profile(inst.scheme, len(inst.scheme.uncertain_cols(i)), row=i)
    except ProfileError as exc:
        problems.append(str(exc))
    if inst.samples is not None:
        if inst.samples.draws < 1:
            problems.append("samples must share a common length W >= 1")
        A = inst.problem.A
        for (i, j), vals in sorted(inst.samples.values.items()):
            d = inst.scheme.thresholds(i, j)
            lo_dev = 0.0 if d is None else float(d[0])
            hi_dev = 0.0 if d is None else float(d[-1])
            a_bar = float(A[i, j])
            if np.any(vals < a_bar + lo_dev - TOL) or np.any(vals > a_bar + hi_dev + TOL):
                problems.append(
                    f"samples for ({i}, {j}) leave the supported range "
                    f"[{a_bar + lo_dev}, {a_bar + hi_dev}]"
                )
    return problems


def load_instance(source: str | Path | Mapping[str, Any]) -> Instance:
    """Parse and fully validate an instance from a path or parsed object."""
    if isinstance(source, (str, Path)):
        with open(source) as fh:
            data = json.load(fh)
    else:
        data = source
    inst = parse_instance(data)
    problems = instance_violations(inst)
    if problems:
        raise InstanceError("; ".join(problems))
    return inst


def dump_instance(inst: Instance) -> dict[str, Any]:
    """Instance back to the JSON interchange structure (always max-form)."""
    problem, scheme = inst.problem, inst.scheme
    ks = list(scheme.bands)
    data: dict[str, Any] = {
        "sense": "max",
        "n": problem.n,
        "m": problem.m,
        "c": problem.c.tolist(),
        "A": problem.A.tolist(),
        "b": problem.b.tolist(),
    }
    if problem.int_vars:
        data["int_vars"] = sorted(problem.int_vars)
    if problem.free_vars:
        data["free_vars"] = sorted(problem.free_vars)
    data["bands"] = {
        "K_minus": scheme.k_minus,
        "K_plus": scheme.k_plus,
        "l": {str(k): int(scheme.lower[scheme.index(k)]) for k in ks},
        "u": {str(k): int(scheme.upper[scheme.index(k)]) for k in ks},
        "dev": [
            {
                "i": i,
                "j": j,
                "d": {str(k): float(d[scheme.index(k)]) for k in ks if k != 0},
            }
            for (i, j), d in sorted(scheme.dev.items())
        ],
    }
    if scheme.row_bounds:
        data["bands"]["row_overrides"] = [
            {
                "i": i,
                "l": {str(k): int(lo[scheme.index(k)]) for k in ks},
                "u": {str(k): int(up[scheme.index(k)]) for k in ks},
            }
            for i, (lo, up) in sorted(scheme.row_bounds.items())
        ]
    if inst.samples is not None:
        data["samples"] = [
            {"i": i, "j": j, "values": vals.tolist()}
            for (i, j), vals in sorted(inst.samples.values.items())
        ]
    return data
