"""Exact counts of bounded-height points over F_q and dimension fitting.

The coefficient expansion of a variety at bound b is a plain system over
F_q; this module counts its solutions exactly.  Three paths:

* plain: breadth-first enumeration over the coefficient variables in a
  greedy order, pruning with every equation as soon as its support is
  complete.  Also the streaming path (actual points, open conditions,
  primitivity).
* blocks: when a set L of variables appears in every monomial with joint
  degree at most 1, the system is linear in L over the rest.  Split the
  rest into A (coupled to L) and B; for each A-assignment the condition on
  B is membership of a pattern vector in a fixed subspace, so one matrix
  product against the precomputed pattern table settles a whole fiber.
  Fibers with the same reduced null-space system share one computation.
* projective counts run the affine core at every bound m <= b and peel
  content: a nonzero solution is uniquely a monic polynomial times a
  primitive one, and the system is homogeneous, so the primitive counts
  satisfy a clean recursion.  Orbit count = primitive count / (q-1).

Counts are exact integers; dimensions come from fitting log N against
log q across several primes and are flagged stable only when every prime
pair rounds to the same slope.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .parsing import parse_poly, poly_to_str
from .rings import PrimeField, UniPoly, uni_gcd
from .varieties import (
    AFFINE,
    PROJECTIVE,
    ExpandedSystem,
    HeightPoint,
    VarietySpec,
    expand,
    variety_from_strs,
)

DEFAULT_BUDGET = 10**9
PLAIN_CUTOFF = 200_000


class BudgetExceeded(RuntimeError):
    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


@dataclass
class SearchStats:
    visits: int = 0
    path: str = ""
    cache_hits: int = 0
    cache_misses: int = 0
    seconds: float = 0.0

    def tag(self, name: str):
        if name not in self.path.split("+"):
            self.path = f"{self.path}+{name}" if self.path else name


# ---------------------------------------------------------------------------
# compiled equations and vectorized evaluation
# ---------------------------------------------------------------------------


def _compile(eq) -> tuple:
    """MultiPoly over F_p -> (terms, support): terms are (c, ((var, exp), ...))."""
    terms = []
    for e, c in eq.terms.items():
        terms.append((int(c), tuple((i, k) for i, k in enumerate(e) if k)))
    support = frozenset(i for _, ve in terms for i, _ in ve)
    return terms, support


def _eval_terms(terms, cols, q):
    """Evaluate a compiled term list on column vectors, mod q."""
    n = None
    for col in cols.values():
        n = len(col)
        break
    if n is None:
        n = 1
    acc = np.zeros(n, dtype=np.int32)
    powers = {}
    for c, ve in terms:
        term = np.full(n, c, dtype=np.int32)
        for var, e in ve:
            key = (var, e)
            if key not in powers:
                p = cols[var].astype(np.int32)
                for _ in range(e - 1):
                    p = p * cols[var] % q
                powers[key] = p
            term = term * powers[key] % q
        acc += term
    return acc % q


def _greedy_order(compiled, pool):
    """Variable order that completes equation supports as early as possible."""
    remaining = set(pool)
    order = []
    supports = [set(s) & remaining for _, s in compiled]
    while remaining:
        missing = [(len(s - set(order)), i) for i, s in enumerate(supports)]
        live = [(m, i) for m, i in missing if m > 0]
        if not live:
            order.extend(sorted(remaining))
            break
        _, i = min(live)
        for v in sorted(supports[i] - set(order)):
            order.append(v)
            remaining.discard(v)
    return order


def _bfs_enumerate(compiled, pool, q, budget, stats, include_free):
    """All assignments of the pool satisfying the compiled equations.

    Returns (array rows x len(order), var -> column, multiplier).  Free
    variables (not in any support) are enumerated when include_free, else
    folded into the multiplier.
    """
    for terms, support in compiled:
        if not support:
            if sum(c for c, _ in terms) % q:
                return np.empty((0, 0), dtype=np.int16), {}, 1
    active = set()
    for _, support in compiled:
        active |= support
    active &= set(pool)
    free = sorted(set(pool) - active)
    order = _greedy_order(compiled, active)
    if include_free:
        order = order + free
    done_at = {}
    for i, (_, support) in enumerate(compiled):
        if support and support <= set(order):
            done_at[i] = max(order.index(v) for v in support)
    arr = np.empty((1, 0), dtype=np.int16)
    pos = {}
    base = np.arange(q, dtype=np.int16).reshape(-1, 1)
    for step, v in enumerate(order):
        rows = arr.shape[0]
        stats.visits += rows * q
        if stats.visits > budget:
            raise BudgetExceeded(
                f"enumeration budget exhausted at variable {step + 1}/{len(order)}",
                estimate=rows * q ** (len(order) - step),
            )
        arr = np.hstack([np.repeat(arr, q, axis=0), np.tile(base, (rows, 1))])
        pos[v] = step
        for i, (terms, _) in enumerate(compiled):
            if done_at.get(i) != step:
                continue
            vals = _eval_terms(terms, {u: arr[:, pos[u]] for u in pos}, q)
            arr = arr[vals == 0]
        if arr.shape[0] == 0:
            return arr, pos, 1
    mult = 1 if include_free else q ** len(free)
    return arr, pos, mult


# ---------------------------------------------------------------------------
# linear-block fast path
# ---------------------------------------------------------------------------


def _linear_block(compiled, active):
    """Largest variable set with joint degree <= 1 in every monomial."""
    block = set(active)
    while block:
        conflict = {}
        violated = False
        for terms, _ in compiled:
            for _, ve in terms:
                inside = [i for i, e in ve if i in block]
                weight = sum(e for i, e in ve if i in block)
                if weight >= 2:
                    violated = True
                    for i in inside:
                        conflict[i] = conflict.get(i, 0) + 1
        if not violated:
            return block
        worst = max(conflict.items(), key=lambda kv: (kv[1], kv[0]))[0]
        block.discard(worst)
    return block


def _small_solve(mrows, q, width):
    """Rank and left-null basis of an integer matrix mod q.

    Gaussian elimination on [M | I]; rows whose M-part vanishes give the
    left-null combinations in their I-part.
    """
    nrows = len(mrows)
    aug = [list(r) + [1 if i == j else 0 for j in range(nrows)] for i, r in enumerate(mrows)]
    r = 0
    for c in range(width):
        piv = next((i for i in range(r, nrows) if aug[i][c] % q), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = pow(aug[r][c], q - 2, q)
        aug[r] = [x * inv % q for x in aug[r]]
        for i in range(nrows):
            if i != r and aug[i][c] % q:
                f = aug[i][c]
                aug[i] = [(x - f * y) % q for x, y in zip(aug[i], aug[r])]
        r += 1
        if r == nrows:
            break
    null = [row[width:] for row in aug[r:]]
    return r, null


def _rref_key(rows, q):
    """Canonical bytes of the row space of an integer matrix mod q."""
    if not rows:
        return b""
    work = [list(r) for r in rows]
    ncols = len(work[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(work)) if work[i][c] % q), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = pow(work[r][c], q - 2, q)
        work[r] = [x * inv % q for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c] % q:
                f = work[i][c]
                work[i] = [(x - f * y) % q for x, y in zip(work[i], work[r])]
        r += 1
        if r == len(work):
            break
    live = [tuple(row) for row in work[:r]]
    return bytes(x for row in live for x in row)


def _block_count(compiled, nvars, q, budget, stats) -> int:
    """Count solutions by eliminating the linear block fiberwise."""
    active = set()
    for _, s in compiled:
        active |= s
    block = _linear_block(compiled, active)
    if not block:
        raise ValueError("no linear block")
    a_vars = set()
    for terms, _ in compiled:
        for _, ve in terms:
            if any(i in block for i, _ in ve):
                a_vars |= {i for i, _ in ve if i not in block}
    b_vars = active - block - a_vars
    a_list, b_list, l_list = sorted(a_vars), sorted(b_vars), sorted(block)
    l_pos = {v: i for i, v in enumerate(l_list)}

    a_only, b_only, system = [], [], []
    for terms, support in compiled:
        if support <= a_vars:
            a_only.append((terms, support))
        elif support <= b_vars:
            b_only.append((terms, support))
        else:
            system.append((terms, support))

    xb, bpos, _ = _bfs_enumerate(b_only, b_list, q, budget, stats, include_free=True)
    xa, apos, _ = _bfs_enumerate(a_only, a_list, q, budget, stats, include_free=True)
    na, nb = xa.shape[0], xb.shape[0]
    if na == 0 or (b_list and nb == 0):
        return 0
    stats.visits += na
    if stats.visits > budget:
        raise BudgetExceeded("fiber loop exceeds budget", estimate=na)

    # split every system row into  sum_l coeff_l(A) x_l + sum_pat gamma_pat(A) pat(B)
    patterns = {}
    m_polys = [dict() for _ in system]  # l index -> list of (c, A-part)
    g_polys = [dict() for _ in system]  # pattern index -> list of (c, A-part)
    for ei, (terms, _) in enumerate(system):
        for c, ve in terms:
            lpart = [(i, e) for i, e in ve if i in block]
            apart = tuple((i, e) for i, e in ve if i in a_vars)
            bpart = tuple((i, e) for i, e in ve if i in b_vars)
            if lpart:
                li = l_pos[lpart[0][0]]
                m_polys[ei].setdefault(li, []).append((c, apart))
            else:
                if bpart not in patterns:
                    patterns[bpart] = len(patterns)
                g_polys[ei].setdefault(patterns[bpart], []).append((c, apart))
    npat = len(patterns)
    ne = len(system)
    nl = len(l_list)

    # pattern table over the enumerated B-side
    pmat = np.zeros((npat, nb), dtype=np.int16)
    bcols = {v: xb[:, bpos[v]] for v in bpos}
    for bpart, j in patterns.items():
        col = np.ones(nb, dtype=np.int32)
        for var, e in bpart:
            p = bcols[var].astype(np.int32)
            for _ in range(e - 1):
                p = p * bcols[var] % q
            col = col * p % q
        pmat[j] = col

    acols = {v: xa[:, apos[v]] for v in apos}
    m_all = np.zeros((na, ne, nl), dtype=np.int16)
    g_all = np.zeros((na, ne, npat), dtype=np.int16)
    for ei in range(ne):
        for li, terms in m_polys[ei].items():
            m_all[:, ei, li] = _eval_terms(terms, acols, q)
        for pj, terms in g_polys[ei].items():
            g_all[:, ei, pj] = _eval_terms(terms, acols, q)

    cache = {}
    total = 0
    for i in range(na):
        rank, null = _small_solve(m_all[i].tolist(), q, nl)
        if not null:
            ncons = nb
        else:
            u = (np.array(null, dtype=np.int32) @ g_all[i]) % q
            key = _rref_key(u.tolist(), q)
            if key in cache:
                ncons = cache[key]
                stats.cache_hits += 1
            else:
                live = u[np.any(u, axis=1)]
                if live.shape[0] == 0:
                    ncons = nb
                else:
                    z = (live @ pmat.astype(np.int32)) % q
                    ncons = int(np.count_nonzero(~np.any(z, axis=0)))
                cache[key] = ncons
                stats.cache_misses += 1
        if ncons:
            total += q ** (nl - rank) * ncons
    return total


# ---------------------------------------------------------------------------
# core affine count and projective content recursion
# ---------------------------------------------------------------------------


def _core_count(equations, nvars, q, budget, stats) -> int:
    compiled = [_compile(eq) for eq in equations]
    for terms, support in compiled:
        if not support and sum(c for c, _ in terms) % q:
            return 0
    compiled = [cs for cs in compiled if cs[1]]
    active = set()
    for _, s in compiled:
        active |= s
    inactive = nvars - len(active)
    mult = q**inactive
    if not compiled:
        return mult
    if q ** len(active) <= PLAIN_CUTOFF:
        stats.tag("plain")
        arr, _, m2 = _bfs_enumerate(compiled, sorted(active), q, budget, stats, False)
        return arr.shape[0] * m2 * mult
    block = _linear_block(compiled, active)
    if block:
        stats.tag("blocks")
        return _block_count(compiled, nvars, q, budget, stats) * mult
    stats.tag("plain")
    arr, _, m2 = _bfs_enumerate(compiled, sorted(active), q, budget, stats, False)
    return arr.shape[0] * m2 * mult


def _projective_counts(X: VarietySpec, b, q, budget, stats):
    """(orbit count, primitive count) via the content recursion."""
    pr = {}
    for m in range(1, b + 1):
        S = expand(X, m)
        full = _core_count(S.equations, S.nvars, q, budget, stats)
        prim = full - 1
        for k in range(1, m):
            prim -= q**k * pr[m - k]
        pr[m] = prim
    orbits, rem = divmod(pr[b], q - 1)
    if rem:
        raise AssertionError("primitive count not divisible by q-1")
    return orbits, pr[b]


@dataclass
class CountResult:
    count: int  # census count: orbit count for projective, raw for affine
    primitive: int | None
    q: int
    b: int
    stats: SearchStats

    def to_json(self):
        return {
            "q": self.q,
            "b": self.b,
            "count": self.count,
            "primitive": self.primitive,
            "visits": self.stats.visits,
            "path": self.stats.path,
            "cache": [self.stats.cache_hits, self.stats.cache_misses],
            "seconds": round(self.stats.seconds, 3),
        }


def count_points(X: VarietySpec, b: int, budget: int = DEFAULT_BUDGET) -> CountResult:
    """Exact census count of the height-below-b locus of X over its field."""
    q = X.base_field.p
    stats = SearchStats()
    t0 = time.monotonic()
    if X.inequations:
        pts = point_stream(X, b, budget=budget, stats=stats)
        if X.ambient == PROJECTIVE:
            res = CountResult(len(pts), len(pts) * (q - 1), q, b, stats)
        else:
            res = CountResult(len(pts), None, q, b, stats)
    elif X.ambient == PROJECTIVE:
        orbits, prim = _projective_counts(X, b, q, budget, stats)
        res = CountResult(orbits, prim, q, b, stats)
    else:
        S = expand(X, b)
        n = _core_count(S.equations, S.nvars, q, budget, stats)
        res = CountResult(n, None, q, b, stats)
    stats.seconds = time.monotonic() - t0
    return res


def point_stream(X: VarietySpec, b: int, budget: int = DEFAULT_BUDGET, stats=None):
    """Materialize the points themselves (one representative per orbit for
    projective X).  Meant for fixture-sized instances."""
    q = X.base_field.p
    if stats is None:
        stats = SearchStats()
    stats.tag("stream")
    S = expand(X, b)
    compiled = [_compile(eq) for eq in S.equations]
    for terms, support in compiled:
        if not support and sum(c for c, _ in terms) % q:
            return []
    compiled = [cs for cs in compiled if cs[1]]
    arr, pos, _ = _bfs_enumerate(
        compiled, list(range(S.nvars)), q, budget, stats, include_free=True
    )
    if arr.shape[0] == 0:
        return []
    cols = {v: arr[:, pos[v]] for v in range(S.nvars)}
    keep = np.ones(arr.shape[0], dtype=bool)
    for group in S.open_groups:
        any_nonzero = np.zeros(arr.shape[0], dtype=bool)
        for g in group:
            gterms, gsupp = _compile(g)
            any_nonzero |= _eval_terms(gterms, cols, q) != 0
        keep &= any_nonzero
    arr = arr[keep]
    # back to natural variable order
    perm = [pos[v] for v in range(S.nvars)]
    arr = arr[:, perm]
    points = []
    if X.ambient == PROJECTIVE:
        flat_nonzero = arr != 0
        first = np.argmax(flat_nonzero, axis=1)
        is_zero_row = ~flat_nonzero.any(axis=1)
        lead = arr[np.arange(arr.shape[0]), first]
        arr = arr[(lead == 1) & ~is_zero_row]  # one representative per orbit
        for row in arr.tolist():
            pt = S.to_point(row)
            g = None
            for c in pt.coords:
                if c.is_zero():
                    continue
                g = c.monic() if g is None else uni_gcd(g, c)
                if g.deg == 0:
                    break
            if g is not None and g.deg == 0:
                points.append(pt)
    else:
        for row in arr.tolist():
            points.append(S.to_point(row))
    return points


# ---------------------------------------------------------------------------
# instances, reports, dimension fitting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InstanceSpec:
    """A q-generic variety: equation strings plus declared invariants."""

    name: str
    ambient: str
    names: tuple
    equations: tuple
    inequations: tuple = ()
    dim: int | None = None  # declared dimension m of the variety itself
    degree: int | None = None  # declared degree d
    note: str = ""

    def variety(self, q: int) -> VarietySpec:
        return variety_from_strs(
            self.ambient, self.names, self.equations, q, self.inequations
        )

    def dim_bound(self, b: int):
        return None if self.dim is None else self.dim * b

    def to_json(self):
        return {
            "name": self.name,
            "ambient": self.ambient,
            "names": list(self.names),
            "equations": list(self.equations),
            "inequations": list(self.inequations),
            "m": self.dim,
            "d": self.degree,
            "note": self.note,
        }

    @classmethod
    def from_json(cls, obj) -> "InstanceSpec":
        return cls(
            name=obj.get("name", "instance"),
            ambient=obj["ambient"],
            names=tuple(obj["names"]),
            equations=tuple(obj["equations"]),
            inequations=tuple(obj.get("inequations", ())),
            dim=obj.get("m"),
            degree=obj.get("d"),
            note=obj.get("note", ""),
        )

    @classmethod
    def from_variety(cls, name, X: VarietySpec, dim=None, degree=None):
        return cls(
            name=name,
            ambient=X.ambient,
            names=X.names,
            equations=tuple(poly_to_str(f, X.names) for f in X.equations),
            inequations=tuple(poly_to_str(g, X.names) for g in X.inequations),
            dim=dim,
            degree=degree,
        )


def _fit_dimension(qs, counts):
    """Least-squares slope of log N against log q, with stability across pairs."""
    if any(n <= 0 for n in counts):
        return {"slope": None, "dim": None, "residual": None, "stable": False}
    xs = [math.log(q) for q in qs]
    ys = [math.log(n) for n in counts]
    xbar = sum(xs) / len(xs)
    ybar = sum(ys) / len(ys)
    den = sum((x - xbar) ** 2 for x in xs)
    slope = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys)) / den
    fitted = round(slope)
    pair_slopes = [
        (ys[j] - ys[i]) / (xs[j] - xs[i])
        for i in range(len(qs))
        for j in range(i + 1, len(qs))
    ]
    stable = all(round(s) == fitted for s in pair_slopes)
    residual = max(abs(s - slope) for s in pair_slopes)
    exact = None
    guesses = {round(math.log(n) / math.log(q)) for q, n in zip(qs, counts)}
    if len(guesses) == 1:
        k = guesses.pop()
        if all(n == q**k for q, n in zip(qs, counts)):
            exact = k
    return {
        "slope": slope,
        "dim": fitted,
        "residual": residual,
        "stable": stable,
        "exact_exponent": exact,
        "constants": [n / q**fitted for q, n in zip(qs, counts)],
    }


@dataclass
class CensusReport:
    instance: str
    b: int
    qs: tuple
    counts: tuple
    fit: dict
    bound: int | None
    conforms: bool | None
    results: tuple = ()

    def to_json(self):
        out = {
            "instance": self.instance,
            "b": self.b,
            "qs": list(self.qs),
            "counts": list(self.counts),
            "dim": self.fit.get("dim"),
            "slope": self.fit.get("slope"),
            "residual": self.fit.get("residual"),
            "stable": self.fit.get("stable"),
            "exact_exponent": self.fit.get("exact_exponent"),
            "constants": self.fit.get("constants"),
            "bound": self.bound,
            "conforms": self.conforms,
        }
        out["runs"] = [r.to_json() for r in self.results]
        return out


def _count_worker(payload):
    inst = InstanceSpec.from_json(payload["instance"])
    res = count_points(inst.variety(payload["q"]), payload["b"], payload["budget"])
    return res


def dim_estimate(
    inst: InstanceSpec, b: int, qs, budget: int = DEFAULT_BUDGET, pool=None
) -> CensusReport:
    """Counts across primes, slope fit, and the declared-bound verdict."""
    qs = tuple(sorted(qs))
    if len(qs) < 3:
        raise ValueError("need at least 3 primes for a dimension fit")
    payloads = [
        {"instance": inst.to_json(), "b": b, "q": q, "budget": budget} for q in qs
    ]
    if pool is None:
        results = [_count_worker(p) for p in payloads]
    else:
        results = pool.map(_count_worker, payloads)
    counts = tuple(r.count for r in results)
    fit = _fit_dimension(qs, counts)
    bound = inst.dim_bound(b)
    conforms = None
    if bound is not None and fit["dim"] is not None:
        conforms = fit["dim"] <= bound
    return CensusReport(
        instance=inst.name,
        b=b,
        qs=qs,
        counts=counts,
        fit=fit,
        bound=bound,
        conforms=conforms,
        results=tuple(results),
    )


def sz_recursion_check(
    inst: InstanceSpec, b: int, qs, coord: int = 0, budget: int = DEFAULT_BUDGET
):
    """Fiber the census over one coordinate and fit the largest fiber.

    The induction behind the affine dimension bound says each fiber of a
    coordinate projection is a bounded-height locus of a variety of one
    dimension less, so the largest fiber should fit to at most (m-1)*b.
    """
    if inst.ambient != AFFINE:
        raise ValueError("fiber check is for affine instances")
    per_q = []
    max_fibers = []
    for q in qs:
        X = inst.variety(q)
        pts = point_stream(X, b, budget=budget)
        fibers = {}
        for pt in pts:
            key = tuple(pt.coords[coord].coeffs)
            fibers[key] = fibers.get(key, 0) + 1
        biggest = max(fibers.values()) if fibers else 0
        per_q.append(
            {"q": q, "points": len(pts), "fibers": len(fibers), "max_fiber": biggest}
        )
        max_fibers.append(biggest)
    fit = _fit_dimension(list(qs), max_fibers)
    bound = None if inst.dim is None else (inst.dim - 1) * b
    ok = None
    if bound is not None and fit["dim"] is not None:
        ok = fit["dim"] <= bound
    return {
        "instance": inst.name,
        "b": b,
        "coord": coord,
        "per_q": per_q,
        "fiber_dim": fit["dim"],
        "fiber_dim_stable": fit["stable"],
        "bound": bound,
        "conforms": ok,
    }
