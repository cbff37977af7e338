"""Auxiliary polynomials through monomial evaluation matrices.

The engine: points of bounded height lying in a fixed congruence class force
p-adic divisibility on the determinants of monomial evaluation matrices.
Once the matrix loses full column rank over K, its kernel holds a form g
that vanishes on every class point; as soon as the kernel is bigger than
the space of multiples of the defining equation f, some kernel element is
coprime to f.  We search the degree M incrementally until that happens.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from math import comb, factorial, inf

from .census import DEFAULT_BUDGET, point_stream
from .multipoly import MultiPoly, reduce_mod
from .rings import PolyRing, RatFunc, UniPoly, uni_lcm
from .varieties import HeightPoint, VarietySpec, default_names


class DegreeBudgetError(RuntimeError):
    """Raised when the incremental degree search exceeds its cap."""


# ---------------------------------------------------------------------------
# monomial bases
# ---------------------------------------------------------------------------


def _exponents(total: int, nvars: int):
    if nvars == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for rest in _exponents(total - head, nvars - 1):
            yield (head,) + rest


@dataclass(frozen=True)
class MonomialBasis:
    degree: int
    nvars: int
    monomials: tuple  # exponent vectors, deterministic order

    def __len__(self):
        return len(self.monomials)

    def evaluate_row(self, coords):
        """One evaluation row: each monomial applied to the coordinates."""
        out = []
        pows = {}
        for exps in self.monomials:
            acc = None
            for i, e in enumerate(exps):
                if not e:
                    continue
                key = (i, e)
                if key not in pows:
                    pows[key] = coords[i] ** e if e > 1 else coords[i]
                acc = pows[key] if acc is None else acc * pows[key]
            if acc is None:
                acc = UniPoly.one(coords[0].field)
            out.append(acc)
        return out


def monomial_basis(degree: int, nvars: int, homogeneous: bool = True) -> MonomialBasis:
    if degree < 0 or nvars < 1:
        raise ValueError("need degree >= 0 and at least one variable")
    if homogeneous:
        monos = tuple(_exponents(degree, nvars))
    else:
        monos = tuple(
            m for d in range(degree + 1) for m in _exponents(d, nvars)
        )
    return MonomialBasis(degree=degree, nvars=nvars, monomials=monos)


def basis_size(degree: int, nvars: int) -> int:
    """|B[M]| for homogeneous degree M in nvars variables, 0 for M < 0."""
    if degree < 0:
        return 0
    return comb(degree + nvars - 1, nvars - 1)


# ---------------------------------------------------------------------------
# multiplicity
# ---------------------------------------------------------------------------


def _recentre(f: MultiPoly, point) -> MultiPoly:
    shifted = [
        MultiPoly.var(f.ring, f.nvars, i)
        + MultiPoly.const(f.ring, f.nvars, point[i])
        for i in range(f.nvars)
    ]
    return f.compose(shifted)


def mult_at(f: MultiPoly, point, prime: UniPoly | None = None) -> int:
    """Least total degree of a term of f recentred at the point.

    f may carry O_K coefficients together with a degree-1 prime, in which
    case it is reduced first.  Projective inputs are passed through the
    affine chart of a nonvanishing coordinate.
    """
    if prime is not None:
        f = reduce_mod(f, prime)
    fld = f.ring
    if isinstance(fld, PolyRing):
        raise TypeError("multiplicity lives over the residue field; pass prime=")
    point = tuple(c % fld.p for c in point)
    if f.is_homogeneous() and f.total_degree() > 0 and any(point):
        chart = max(i for i, c in enumerate(point) if c)
        scale = fld.inv(point[chart])
        point = tuple(c * scale % fld.p for c in point)
        devals = [
            MultiPoly.var(fld, f.nvars - 1, i if i < chart else i - 1)
            if i != chart
            else MultiPoly.const(fld, f.nvars - 1, 1)
            for i in range(f.nvars)
        ]
        f = f.compose(devals)
        point = tuple(c for i, c in enumerate(point) if i != chart)
    if f.evaluate(list(point)) != 0:
        raise ValueError("point not on variety")
    g = _recentre(f, point)
    return min(sum(e) for e in g.terms)


# ---------------------------------------------------------------------------
# congruence data and evaluation matrices
# ---------------------------------------------------------------------------


def _lambda_of(prime: UniPoly) -> int:
    if prime.deg != 1:
        raise ValueError("only degree-1 primes t - lambda are supported")
    fld = prime.field
    return fld.div(fld.neg(prime.coeff(0)), prime.coeff(1))


@dataclass(frozen=True)
class CongruenceDatum:
    prime: UniPoly
    point: tuple  # residue coordinates over F_q
    multiplicity: int | None = None  # computed from f when absent

    def __post_init__(self):
        _lambda_of(self.prime)

    @property
    def residue(self) -> int:
        return _lambda_of(self.prime)

    def resolved(self, f: MultiPoly) -> "CongruenceDatum":
        """Validate against f, filling in the multiplicity."""
        mu = mult_at(f, self.point, prime=self.prime)
        if self.multiplicity is not None and self.multiplicity != mu:
            raise ValueError(
                f"declared multiplicity {self.multiplicity} but computed {mu}"
            )
        return CongruenceDatum(self.prime, self.point, mu)


def _match_projective(red, target, p):
    """Residue tuples agree up to F_q^x scaling."""
    i = next((k for k, c in enumerate(red) if c), None)
    j = next((k for k, c in enumerate(target) if c), None)
    if i is None or j is None or i != j:
        return False
    s = pow(red[i], p - 2, p) * target[i] % p
    return all(c * s % p == d % p for c, d in zip(red, target))


def congruence_class(X: VarietySpec, b: int, data, budget=DEFAULT_BUDGET):
    """Bounded-height points of X whose reductions hit every datum."""
    pts = point_stream(X, b, budget=budget)
    p = X.base_field.p
    keep = []
    for pt in pts:
        ok = True
        for datum in data:
            red = pt.reduce_at(datum.residue)
            if X.ambient == "projective":
                if not _match_projective(red, datum.point, p):
                    ok = False
                    break
            elif tuple(c % p for c in red) != tuple(c % p for c in datum.point):
                ok = False
                break
        if ok:
            keep.append(pt)
    return keep


@dataclass(frozen=True)
class EvalMatrix:
    points: tuple
    basis: MonomialBasis
    entries: tuple  # rows of UniPoly

    @property
    def shape(self):
        return (len(self.entries), len(self.basis))


def build_eval_matrix(points, basis: MonomialBasis) -> EvalMatrix:
    rows = []
    for pt in points:
        coords = pt.coords if isinstance(pt, HeightPoint) else tuple(pt)
        if len(coords) != basis.nvars:
            raise ValueError("point arity does not match the basis")
        rows.append(tuple(basis.evaluate_row(coords)))
    return EvalMatrix(points=tuple(points), basis=basis, entries=tuple(rows))


# ---------------------------------------------------------------------------
# p-adic divisibility of determinants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DivisibilityReport:
    exponent: float  # v_p of the gcd of s x s minors; inf when rank < s
    s: int
    rank: int
    pivots: tuple
    certified: int | None  # s(s-1)/2 for plane curves at smooth points
    main_term: float

    def to_json(self):
        return {
            "e": "inf" if self.exponent == inf else int(self.exponent),
            "s": self.s,
            "rank": self.rank,
            "pivot_valuations": list(self.pivots),
            "certified_lower_bound": self.certified,
            "main_term": self.main_term,
        }


def _local_smith_valuations(rows, prime: UniPoly):
    """Pivot valuations of the matrix over the local ring at prime.

    Repeatedly pivot on a minimal-valuation entry and clear its row and
    column; the running sum after k steps is v_p(gcd of k x k minors).
    """
    work = [[RatFunc.from_poly(e) for e in row] for row in rows]
    nr, nc = len(work), len(work[0])
    live_r = list(range(nr))
    live_c = list(range(nc))
    pivots = []
    while live_r and live_c:
        best = None
        for i in live_r:
            for j in live_c:
                a = work[i][j]
                if a.is_zero():
                    continue
                v = a.valuation(prime)
                if best is None or v < best[0]:
                    best = (v, i, j)
        if best is None:
            break
        v, pi, pj = best
        pivots.append(v)
        piv = work[pi][pj]
        for i in live_r:
            if i == pi:
                continue
            a = work[i][pj]
            if a.is_zero():
                continue
            factor = a / piv
            for j in live_c:
                work[i][j] = work[i][j] - factor * work[pi][j]
        for j in live_c:
            if j != pj:
                work[pi][j] = RatFunc.from_int(prime.field, 0)
        live_r.remove(pi)
        live_c.remove(pj)
    return pivots


def divisibility_exponent(
    points,
    basis: MonomialBasis,
    prime: UniPoly,
    residue_point=None,
    multiplicity: int = 1,
) -> DivisibilityReport:
    """v_p of the gcd of all s x s minors of the evaluation matrix.

    s = number of points; must not exceed the basis size.  Rank deficiency
    over K gives exponent inf.  For plane curves (basis in 3 variables) at
    smooth residue points the triangular bound s(s-1)/2 is certified.
    """
    s = len(points)
    if s == 0:
        raise ValueError("need at least one point")
    if s > len(basis):
        raise ValueError("more points than monomials: enlarge the basis")
    if residue_point is not None:
        p = prime.field.p
        lam = _lambda_of(prime)
        for pt in points:
            red = pt.reduce_at(lam)
            proj = getattr(pt, "projective", False)
            same = (
                _match_projective(red, residue_point, p)
                if proj
                else tuple(c % p for c in red) == tuple(c % p for c in residue_point)
            )
            if not same:
                raise ValueError("point lies outside the congruence class")
    mat = build_eval_matrix(points, basis)
    pivots = _local_smith_valuations(mat.entries, prime)
    rank = len(pivots)
    n = basis.nvars - 2  # hypersurface dimension for projective bases
    certified = s * (s - 1) // 2 if n == 1 and multiplicity == 1 else None
    main = (
        (factorial(n) / multiplicity) ** (1.0 / n) * n / (n + 1) * s ** (1 + 1.0 / n)
        if n >= 1
        else 0.0
    )
    e = float(sum(pivots)) if rank == s else inf
    return DivisibilityReport(
        exponent=e,
        s=s,
        rank=rank,
        pivots=tuple(pivots),
        certified=certified,
        main_term=main,
    )


# ---------------------------------------------------------------------------
# coordinate normalization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ShearRecord:
    shear: tuple  # constants a_i: x_i -> x_i + a_i * x_last
    inverse: tuple

    def to_json(self):
        return {"shear": list(self.shear), "inverse": list(self.inverse)}


def _apply_shear(f: MultiPoly, consts) -> MultiPoly:
    n = f.nvars
    last = MultiPoly.var(f.ring, n, n - 1)
    values = []
    for i in range(n - 1):
        v = MultiPoly.var(f.ring, n, i)
        if consts[i]:
            v = v + last.scale(UniPoly.const(f.ring.base, consts[i]))
        values.append(v)
    values.append(last)
    return f.compose(values)


def poly_height(f: MultiPoly) -> int:
    """Largest coefficient degree (0 for constant-coefficient forms)."""
    if f.is_zero():
        raise ValueError("height of the zero polynomial")
    return max(max(c.deg, 0) for c in f.terms.values())


def coordinate_normalize(f: MultiPoly, rng=None, tries: int = 500):
    """Shear so the last-variable power has a coefficient of full height.

    The new coefficient of x_last^d equals f evaluated at the shear point
    (a_0, ..., a_{n-1}, 1); we look for constants where that evaluation has
    degree h(f).  h and the point set of the variety are both preserved.
    """
    if not f.is_homogeneous():
        raise ValueError("normalization expects a homogeneous input")
    if not isinstance(f.ring, PolyRing):
        raise TypeError("O_K coefficients required")
    ring = f.ring
    fld = ring.base
    n = f.nvars
    d = f.total_degree()
    h = poly_height(f)
    top = tuple([0] * (n - 1) + [d])
    cur = f.coeff_of(top)
    if not cur.is_zero() and cur.deg == h:
        ident = ShearRecord(shear=(0,) * (n - 1), inverse=(0,) * (n - 1))
        return f, ident
    rng = rng or random.Random(0)

    def attempt(consts):
        vals = [UniPoly.const(fld, c) for c in consts] + [UniPoly.one(fld)]
        img = _evaluate_okpoly(f, vals)
        return (not img.is_zero()) and img.deg == h

    found = None
    if fld.p ** (n - 1) <= 4096:
        import itertools

        for consts in itertools.product(range(fld.p), repeat=n - 1):
            if attempt(consts):
                found = consts
                break
    else:
        for _ in range(tries):
            consts = tuple(rng.randrange(fld.p) for _ in range(n - 1))
            if attempt(consts):
                found = consts
                break
    if found is None:
        raise ValueError(
            "no constant point attains the height: retry over a larger field"
        )
    g = _apply_shear(f, found)
    rec = ShearRecord(
        shear=found, inverse=tuple(fld.neg(c) for c in found)
    )
    return g, rec


def _evaluate_okpoly(f: MultiPoly, vals) -> UniPoly:
    """Exact evaluation of an O_K-coefficient polynomial at UniPoly values."""
    fld = f.ring.base
    acc = UniPoly.zero(fld)
    pows = {}
    for e, c in f.terms.items():
        term = c
        for i, k in enumerate(e):
            if not k:
                continue
            key = (i, k)
            if key not in pows:
                pows[key] = vals[i] ** k
            term = term * pows[key]
        acc = acc + term
    return acc


# ---------------------------------------------------------------------------
# the auxiliary polynomial search
# ---------------------------------------------------------------------------


@dataclass
class AuxPolyResult:
    g: MultiPoly
    M: int
    certificate: tuple  # points g provably vanishes on
    coprime: bool
    vacuous: bool
    rank: int
    kernel_dim: int
    details: dict = dc_field(default_factory=dict)

    def to_json(self, names=None):
        return {
            "g": self.g.to_str(names),
            "M": self.M,
            "points_captured": len(self.certificate),
            "coprime_to_f": self.coprime,
            "vacuous": self.vacuous,
            "rank": self.rank,
            "kernel_dim": self.kernel_dim,
            **self.details,
        }


class _IncrementalRREF:
    """Gauss-Jordan over K, one row at a time, pivot columns tracked."""

    def __init__(self, width: int, field):
        self.width = width
        self.field = field
        self.rows = {}  # pivot col -> fully reduced row (list of RatFunc)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def add(self, row) -> bool:
        row = list(row)
        for col in sorted(self.rows):
            if not row[col].is_zero():
                f = row[col]
                piv = self.rows[col]
                for j in range(col, self.width):
                    row[j] = row[j] - f * piv[j]
        lead = next((j for j in range(self.width) if not row[j].is_zero()), None)
        if lead is None:
            return False
        inv = row[lead].inv()
        row = [e * inv for e in row]
        for col, other in self.rows.items():
            if not other[lead].is_zero():
                f = other[lead]
                for j in range(self.width):
                    other[j] = other[j] - f * row[j]
        self.rows[lead] = row
        return True

    def kernel_basis(self):
        free = [j for j in range(self.width) if j not in self.rows]
        basis = []
        for j in free:
            vec = [RatFunc.from_int(self.field, 0)] * self.width
            vec[j] = RatFunc.from_int(self.field, 1)
            for col, row in self.rows.items():
                vec[col] = -row[j]
            basis.append(vec)
        return basis


def _kernel_vector_to_poly(vec, basis: MonomialBasis, ring: PolyRing) -> MultiPoly:
    den = None
    for e in vec:
        if e.is_zero():
            continue
        den = e.den if den is None else uni_lcm(den, e.den)
    if den is None:
        return MultiPoly.zero(ring, basis.nvars)
    terms = {}
    for exps, e in zip(basis.monomials, vec):
        if e.is_zero():
            continue
        c = e.num * den.divexact(e.den)
        terms[exps] = c
    g = MultiPoly(ring, basis.nvars, terms)
    return g.primitive_part()


def _search_kernel(points_coords, f, d, nvars, ring, m_start, m_max):
    """Incremental M: first degree whose kernel outgrows f * B[M-d]."""
    K_field = ring.base
    for M in range(m_start, m_max + 1):
        basis = monomial_basis(M, nvars)
        allowance = basis_size(M - d, nvars)
        target = len(basis) - allowance
        rref = _IncrementalRREF(len(basis), K_field)
        stalled = False
        for coords in points_coords:
            row = [RatFunc.from_poly(e) for e in basis.evaluate_row(coords)]
            rref.add(row)
            if rref.rank >= target:
                stalled = True  # kernel can no longer beat f*B[M-d]
                break
        if stalled:
            continue
        kernel = rref.kernel_basis()
        cands = []
        for vec in kernel:
            g = _kernel_vector_to_poly(vec, basis, ring)
            if g.is_zero():
                continue
            if not f.divides(g):
                cands.append(g)
        if cands:
            return cands, M, basis, rref.rank, len(kernel)
    raise DegreeBudgetError(
        f"degree budget exhausted at M = {m_max}: "
        "bug or unsatisfied hypothesis"
    )


def auxiliary_poly_projective(
    f: MultiPoly,
    b: int,
    data,
    budget=DEFAULT_BUDGET,
    m_max: int | None = None,
) -> AuxPolyResult:
    """Homogeneous g with f never dividing g, vanishing on the whole
    congruence class of X(b).

    The class is enumerated exactly over the working field; M grows from
    deg f until the evaluation matrix leaves enough kernel.
    """
    if not f.is_homogeneous():
        raise ValueError("projective construction needs a homogeneous f")
    ring = f.ring
    d = f.total_degree()
    if d < 1:
        raise ValueError("constant f")
    f = f.primitive_part()
    nvars = f.nvars
    data = tuple(datum.resolved(f) for datum in data)
    X = VarietySpec("projective", default_names("projective", nvars - 1), (f,))
    pts = congruence_class(X, b, data, budget=budget)
    if m_max is None:
        # rank never exceeds the class size, so the search is guaranteed to
        # close once the restricted monomial count passes it
        m_max = max(2 * d + 6, d * (b + 2))
        while basis_size(m_max, nvars) - basis_size(m_max - d, nvars) <= len(pts):
            m_max += 1
    coords = [pt.coords for pt in pts]
    cands, M, basis, rank, kdim = _search_kernel(
        coords, f, d, nvars, ring, d, m_max
    )
    g = cands[0]
    for pt in pts:
        if not _evaluate_okpoly(g, list(pt.coords)).is_zero():
            raise AssertionError("kernel element fails to vanish on the class")
    return AuxPolyResult(
        g=g,
        M=M,
        certificate=tuple(pts),
        coprime=True,
        vacuous=not pts,
        rank=rank,
        kernel_dim=kdim,
        details={"s_target": len(basis) - basis_size(M - d, nvars)},
    )


def _constant_point_off(f: MultiPoly, rng, tries=2000):
    fld = f.ring.base
    n = f.nvars
    if fld.p ** n <= 4096:
        import itertools

        for consts in itertools.product(range(fld.p), repeat=n):
            vals = [UniPoly.const(fld, c) for c in consts]
            if not _evaluate_okpoly(f, vals).is_zero():
                return consts
    else:
        for _ in range(tries):
            consts = tuple(rng.randrange(fld.p) for _ in range(n))
            vals = [UniPoly.const(fld, c) for c in consts]
            if not _evaluate_okpoly(f, vals).is_zero():
                return consts
    raise ValueError("no constant point off the variety over this field")


def _shift(f: MultiPoly, consts) -> MultiPoly:
    vals = [
        MultiPoly.var(f.ring, f.nvars, i)
        + MultiPoly.const(f.ring, f.nvars, consts[i])
        for i in range(f.nvars)
    ]
    return f.compose(vals)


def _homogenize_with(f: MultiPoly, H: UniPoly) -> MultiPoly:
    """sum_i H^i f_i x_0^(d-i) in one more variable (index 0)."""
    ring = f.ring
    d = f.total_degree()
    n = f.nvars
    out = {}
    hp = {0: UniPoly.one(ring.base)}
    for e, c in f.terms.items():
        i = sum(e)
        if i not in hp:
            hp[i] = H**i
        ne = (d - i,) + e
        out[ne] = out.get(ne, UniPoly.zero(ring.base)) + c * hp[i]
    return MultiPoly(ring, n + 1, {e: c for e, c in out.items() if not c.is_zero()})


def auxiliary_poly_affine(
    f: MultiPoly,
    b: int,
    data,
    budget=DEFAULT_BUDGET,
    m_max: int | None = None,
    rng=None,
) -> AuxPolyResult:
    """Affine variant: shift until the constant term survives, homogenize
    against H = (t - lambda)^(b-1) with lambda off the roots of f_0 and off
    the congruence primes, run the projective search on the lifted points
    (H : a), then substitute x_0 = H back."""
    ring = f.ring
    fld = ring.base
    d = f.total_degree()
    if d < 1:
        raise ValueError("constant f")
    f = f.primitive_part()
    n = f.nvars
    rng = rng or random.Random(0)
    data = tuple(datum.resolved(f) for datum in data)

    shift = (0,) * n
    fw = f
    f0 = fw.constant_coeff()
    if f0.is_zero():
        shift = _constant_point_off(f, rng)
        fw = _shift(f, shift)
        f0 = fw.constant_coeff()
    data_w = tuple(
        CongruenceDatum(
            dm.prime,
            tuple((c - s) % fld.p for c, s in zip(dm.point, shift)),
            dm.multiplicity,
        )
        for dm in data
    )
    banned = {dm.residue for dm in data_w}
    lam = next(
        (
            x
            for x in range(fld.p)
            if x not in banned and f0.eval_at(x) != 0
        ),
        None,
    )
    if lam is None:
        raise ValueError("no residue avoids f_0 and the congruence primes")
    H = UniPoly(fld, [fld.neg(lam), 1]) ** (b - 1) if b > 1 else UniPoly.one(fld)

    F = _homogenize_with(fw, H)
    Xw = VarietySpec("affine", default_names("affine", n), (fw,))
    pts = congruence_class(Xw, b, data_w, budget=budget)
    lifted = [(H,) + pt.coords for pt in pts]
    if m_max is None:
        m_max = max(2 * d + 6, d * (b + 2))
        while basis_size(m_max, n + 1) - basis_size(m_max - d, n + 1) <= len(lifted):
            m_max += 1

    # the kernel element must stay coprime to f after x_0 -> H, so the
    # generic projective search runs here with the extra acceptance step
    for M in range(d, m_max + 1):
        basis = monomial_basis(M, n + 1)
        allowance = basis_size(M - d, n + 1)
        target = len(basis) - allowance
        rref = _IncrementalRREF(len(basis), fld)
        stalled = False
        for coords in lifted:
            row = [RatFunc.from_poly(e) for e in basis.evaluate_row(coords)]
            rref.add(row)
            if rref.rank >= target:
                stalled = True
                break
        if stalled:
            continue
        for vec in rref.kernel_basis():
            G = _kernel_vector_to_poly(vec, basis, ring)
            if G.is_zero() or F.divides(G):
                continue
            dropped = G.substitute_coeff(0, H)
            gw = MultiPoly(ring, n, {e[1:]: c for e, c in dropped.terms.items()})
            if gw.is_zero() or fw.divides(gw):
                continue
            gw = gw.primitive_part()
            g = _shift(gw, tuple(fld.neg(c) for c in shift)) if any(shift) else gw
            if f.divides(g):
                continue
            certificate = tuple(
                HeightPoint(
                    tuple(
                        c + UniPoly.const(fld, s)
                        for c, s in zip(pt.coords, shift)
                    ),
                    projective=False,
                )
                for pt in pts
            )
            for cp in certificate:
                if not _evaluate_okpoly(g, list(cp.coords)).is_zero():
                    raise AssertionError(
                        "dehomogenized g fails to vanish on the class"
                    )
            return AuxPolyResult(
                g=g,
                M=M,
                certificate=certificate,
                coprime=True,
                vacuous=not pts,
                rank=rref.rank,
                kernel_dim=len(basis) - rref.rank,
                details={
                    "H": str(H),
                    "lambda": lam,
                    "shift": list(shift),
                    "s_target": target,
                },
            )
    raise DegreeBudgetError(
        f"degree budget exhausted at M = {m_max}: bug or unsatisfied hypothesis"
    )
