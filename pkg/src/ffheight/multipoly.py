"""Sparse multivariate polynomials over F_p, F_p[t], or F_p(t).

Terms map exponent vectors to nonzero coefficients; the coefficient domain is
carried as a ring tag (PrimeField, PolyRing, FracField).  The fixed monomial
order everywhere is graded reverse lexicographic.
"""

from __future__ import annotations

from itertools import combinations

from .rings import (
    NEG_INF,
    FracField,
    PolyRing,
    PrimeField,
    RatFunc,
    UniPoly,
    valuation_at,
)


def grevlex_key(exps):
    # higher total degree wins; ties broken so the monomial whose exponent
    # vector has the smaller last nonzero difference is larger
    return (sum(exps), tuple(-e for e in reversed(exps)))


def monomial_divides(a, b) -> bool:
    """Does x^a divide x^b."""
    return all(ea <= eb for ea, eb in zip(a, b))


def monomial_div(b, a):
    return tuple(eb - ea for ea, eb in zip(a, b))


def monomial_mul(a, b):
    return tuple(ea + eb for ea, eb in zip(a, b))


def monomial_lcm(a, b):
    return tuple(max(ea, eb) for ea, eb in zip(a, b))


class MultiPoly:
    __slots__ = ("ring", "nvars", "terms")

    def __init__(self, ring, nvars: int, terms=None):
        clean = {}
        if terms:
            for exps, c in terms.items() if isinstance(terms, dict) else terms:
                exps = tuple(exps)
                if len(exps) != nvars:
                    raise ValueError("exponent vector has wrong length")
                if any(e < 0 for e in exps):
                    raise ValueError("negative exponent")
                if exps in clean:
                    c = ring.add(clean[exps], c)
                if ring.is_zero(c):
                    clean.pop(exps, None)
                else:
                    clean[exps] = c
        self.ring = ring
        self.nvars = nvars
        self.terms = clean

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, ring, nvars):
        return cls(ring, nvars)

    @classmethod
    def const(cls, ring, nvars, c):
        return cls(ring, nvars, {(0,) * nvars: ring.coerce(c)})

    @classmethod
    def var(cls, ring, nvars, i):
        if not 0 <= i < nvars:
            raise IndexError("variable index out of range")
        e = [0] * nvars
        e[i] = 1
        return cls(ring, nvars, {tuple(e): ring.one})

    def _compat(self, other):
        if not isinstance(other, MultiPoly):
            raise TypeError(f"expected MultiPoly, got {other!r}")
        if other.ring != self.ring or other.nvars != self.nvars:
            raise ValueError("mixed rings or variable counts")

    # -- ring operations ----------------------------------------------------
    def __add__(self, other):
        if isinstance(other, int):
            other = MultiPoly.const(self.ring, self.nvars, other)
        self._compat(other)
        out = dict(self.terms)
        ring = self.ring
        for e, c in other.terms.items():
            if e in out:
                s = ring.add(out[e], c)
                if ring.is_zero(s):
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        r = MultiPoly.zero(self.ring, self.nvars)
        r.terms = out
        return r

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = MultiPoly.const(self.ring, self.nvars, other)
        return self + (-other)

    def __neg__(self):
        r = MultiPoly.zero(self.ring, self.nvars)
        r.terms = {e: self.ring.neg(c) for e, c in self.terms.items()}
        return r

    def __mul__(self, other):
        if isinstance(other, int):
            other = MultiPoly.const(self.ring, self.nvars, other)
        self._compat(other)
        ring = self.ring
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = monomial_mul(e1, e2)
                c = ring.mul(c1, c2)
                if e in out:
                    c = ring.add(out[e], c)
                if ring.is_zero(c):
                    out.pop(e, None)
                else:
                    out[e] = c
        r = MultiPoly.zero(self.ring, self.nvars)
        r.terms = out
        return r

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = MultiPoly.const(self.ring, self.nvars, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scale(self, c):
        """Multiply by a coefficient of the ring."""
        ring = self.ring
        r = MultiPoly.zero(ring, self.nvars)
        if ring.is_zero(c):
            return r
        r.terms = {e: ring.mul(cc, c) for e, cc in self.terms.items()}
        return r

    def term_mul(self, exps, c):
        """Multiply by the single term c * x^exps."""
        ring = self.ring
        r = MultiPoly.zero(ring, self.nvars)
        if ring.is_zero(c):
            return r
        r.terms = {monomial_mul(e, exps): ring.mul(cc, c) for e, cc in self.terms.items()}
        return r

    # -- structure -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self):
        if not self.terms:
            return NEG_INF
        return max(sum(e) for e in self.terms)

    def degree_in(self, i: int) -> int:
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def support(self):
        """Indices of variables actually appearing."""
        s = set()
        for e in self.terms:
            for i, x in enumerate(e):
                if x:
                    s.add(i)
        return s

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def homogeneous_part(self, i: int):
        """Sum of terms of total x-degree exactly i (t inside coefficients ignored)."""
        r = MultiPoly.zero(self.ring, self.nvars)
        r.terms = {e: c for e, c in self.terms.items() if sum(e) == i}
        return r

    def coeff_of(self, exps):
        return self.terms.get(tuple(exps), self.ring.zero)

    def constant_coeff(self):
        return self.terms.get((0,) * self.nvars, self.ring.zero)

    def leading_term(self):
        """(exponents, coefficient) of the grevlex leading term."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=grevlex_key)
        return e, self.terms[e]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)

    def monic(self):
        """Scale so the grevlex leading coefficient is 1.  Field coefficients only."""
        e, c = self.leading_term()
        ring = self.ring
        if isinstance(ring, PrimeField):
            return self.scale(ring.inv(c))
        if isinstance(ring, FracField):
            return self.scale(c.inv())
        raise TypeError("monic() needs field coefficients")

    # -- evaluation and substitution ------------------------------------------
    def evaluate(self, vals):
        """Full evaluation; vals are coefficient-ring elements (ints over F_p)."""
        if len(vals) != self.nvars:
            raise ValueError("wrong number of values")
        ring = self.ring
        if isinstance(ring, PrimeField):
            p = ring.p
            acc = 0
            for e, c in self.terms.items():
                v = c
                for x, k in zip(vals, e):
                    if k:
                        v = v * pow(x, k, p) % p
                acc = (acc + v) % p
            return acc
        acc = ring.zero
        for e, c in self.terms.items():
            v = c
            for x, k in zip(vals, e):
                for _ in range(k):
                    v = ring.mul(v, x)
            acc = ring.add(acc, v)
        return acc

    def compose(self, values):
        """Substitute values[i] (MultiPolys over the same ring) for variable i."""
        if len(values) != self.nvars:
            raise ValueError("need one value per variable")
        if not values:
            raise ValueError("compose needs at least one variable")
        tgt_ring = values[0].ring
        tgt_n = values[0].nvars
        pows = {}

        def power(i, k):
            if k == 0:
                return MultiPoly.const(tgt_ring, tgt_n, 1)
            key = (i, k)
            if key not in pows:
                pows[key] = values[i] ** k
            return pows[key]

        acc = MultiPoly.zero(tgt_ring, tgt_n)
        for e, c in self.terms.items():
            term = MultiPoly.const(tgt_ring, tgt_n, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            acc = acc + term
        return acc

    def substitute_coeff(self, i: int, value: UniPoly):
        """Replace variable i by a coefficient-ring value (PolyRing only)."""
        ring = self.ring
        if not isinstance(ring, PolyRing):
            raise TypeError("substitute_coeff needs O_K coefficients")
        out = MultiPoly.zero(ring, self.nvars)
        vp = {0: ring.one}
        for e, c in self.terms.items():
            k = e[i]
            if k not in vp:
                vp[k] = value ** k
            ne = list(e)
            ne[i] = 0
            out = out + MultiPoly(ring, self.nvars, {tuple(ne): c * vp[k]})
        return out

    def map_coeffs(self, fn, new_ring):
        out = {}
        for e, c in self.terms.items():
            nc = fn(c)
            if not new_ring.is_zero(nc):
                out[e] = nc
        r = MultiPoly.zero(new_ring, self.nvars)
        r.terms = out
        return r

    def to_fractions(self):
        if isinstance(self.ring, FracField):
            return self
        if not isinstance(self.ring, PolyRing):
            raise TypeError("only O_K coefficients promote to K")
        K = FracField(self.ring.base)
        return self.map_coeffs(RatFunc.from_poly, K)

    # -- O_K content ---------------------------------------------------------
    def content(self) -> UniPoly:
        """gcd of the coefficients (PolyRing coefficients)."""
        if not isinstance(self.ring, PolyRing):
            raise TypeError("content needs O_K coefficients")
        if not self.terms:
            raise ValueError("content of the zero polynomial")
        from .rings import uni_gcd

        g = None
        for c in self.terms.values():
            g = c.monic() if g is None else uni_gcd(g, c)
            if g.deg == 0:
                break
        return g

    def primitive_part(self):
        g = self.content()
        if g.deg == 0:
            return self
        return self.map_coeffs(lambda c: c.divexact(g), self.ring)

    # -- division --------------------------------------------------------------
    def divmod_single(self, g):
        """Multivariate division by one divisor in grevlex order."""
        self._compat(g)
        if g.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        ring = self.ring
        ge, gc = g.leading_term()
        q = MultiPoly.zero(ring, self.nvars)
        r = MultiPoly.zero(ring, self.nvars)
        rem = self
        while not rem.is_zero():
            e, c = rem.leading_term()
            if monomial_divides(ge, e):
                if isinstance(ring, PrimeField):
                    factor = ring.div(c, gc)
                elif isinstance(ring, FracField):
                    factor = c / gc
                else:
                    qq, rr = divmod(c, gc)
                    if not rr.is_zero():
                        # leading coefficient does not divide: move term to remainder
                        r = r + MultiPoly(ring, self.nvars, {e: c})
                        rem = rem - MultiPoly(ring, self.nvars, {e: c})
                        continue
                    factor = qq
                me = monomial_div(e, ge)
                q = q + MultiPoly(ring, self.nvars, {me: factor})
                rem = rem - g.term_mul(me, factor)
            else:
                r = r + MultiPoly(ring, self.nvars, {e: c})
                rem = rem - MultiPoly(ring, self.nvars, {e: c})
        return q, r

    def divexact(self, g):
        q, r = self.divmod_single(g)
        if not r.is_zero():
            raise ArithmeticError("inexact division")
        return q

    def divides(self, f) -> bool:
        """Does self divide f (over the fraction field for O_K coefficients)."""
        if f.is_zero():
            return True
        a, b = f, self
        if isinstance(self.ring, PolyRing):
            a, b = f.to_fractions(), self.to_fractions()
        _, r = a.divmod_single(b)
        return r.is_zero()

    # -- misc -------------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = MultiPoly.const(self.ring, self.nvars, other)
        return (
            isinstance(other, MultiPoly)
            and other.ring == self.ring
            and other.nvars == self.nvars
            and other.terms == self.terms
        )

    __hash__ = None

    def to_str(self, names=None) -> str:
        if not self.terms:
            return "0"
        if names is None:
            names = [f"x{i}" for i in range(self.nvars)]
        ring = self.ring
        pieces = []
        for e, c in self.sorted_terms():
            factors = []
            cs = ring.fmt(c)
            is_one = cs == "1"
            # a one-term coefficient like 4*t reparses without parentheses
            needs_paren = isinstance(c, UniPoly) and len(c.coeffs) - c.coeffs.count(0) > 1
            needs_paren = needs_paren or isinstance(c, RatFunc)
            if not is_one or not any(e):
                factors.append(f"({cs})" if needs_paren and any(e) else cs)
            for i, k in enumerate(e):
                if k == 1:
                    factors.append(names[i])
                elif k > 1:
                    factors.append(f"{names[i]}^{k}")
            pieces.append("*".join(factors))
        return " + ".join(pieces)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"MultiPoly({self.ring!r}, {self})"


def reduce_mod(f: MultiPoly, p: UniPoly) -> MultiPoly:
    """Reduce O_K coefficients modulo a degree-1 prime p = c1*t + c0.

    Substitutes the residue t = -c0/c1 into every coefficient, landing in
    F_p-coefficient polynomials.  Degree >= 2 primes would need an extension
    field and are rejected.
    """
    if not isinstance(f.ring, PolyRing):
        raise TypeError("reduce_mod needs O_K coefficients")
    if p.deg != 1:
        raise ValueError("unsupported prime: only degree-1 primes t - lambda")
    base = f.ring.base
    lam = base.div(base.neg(p.coeff(0)), p.coeff(1))
    return f.map_coeffs(lambda c: c.eval_at(lam), base)


def coeffs_in_var(f: MultiPoly, i: int):
    """f as a polynomial in variable i: list of MultiPolys free of i, low degree first."""
    d = f.degree_in(i)
    out = [MultiPoly.zero(f.ring, f.nvars) for _ in range(d + 1)]
    for e, c in f.terms.items():
        ne = list(e)
        k = ne[i]
        ne[i] = 0
        out[k] = out[k] + MultiPoly(f.ring, f.nvars, {tuple(ne): c})
    return out


def bareiss_det(rows, ring, nvars):
    """Fraction-free determinant of a square MultiPoly matrix."""
    n = len(rows)
    if n == 0:
        return MultiPoly.const(ring, nvars, 1)
    m = [list(r) for r in rows]
    sign = 1
    prev = MultiPoly.const(ring, nvars, 1)
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return MultiPoly.zero(ring, nvars)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = num.divexact(prev)
            m[i][k] = MultiPoly.zero(ring, nvars)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det


def resultant(f: MultiPoly, g: MultiPoly, i: int) -> MultiPoly:
    """Resultant of f and g with respect to variable i (Sylvester determinant).

    The result does not involve variable i.  Errors when either input is zero
    or both have degree 0 in the variable.
    """
    f._compat(g)
    if f.is_zero() or g.is_zero():
        raise ValueError("resultant with zero polynomial")
    fc = coeffs_in_var(f, i)
    gc = coeffs_in_var(g, i)
    m, n = len(fc) - 1, len(gc) - 1
    if m == 0 and n == 0:
        raise ValueError("both inputs are free of the variable")
    if m == 0:
        return fc[0] ** n
    if n == 0:
        return gc[0] ** m
    size = m + n
    zero = MultiPoly.zero(f.ring, f.nvars)
    rows = []
    frow = list(reversed(fc))  # descending in x_i
    grow = list(reversed(gc))
    for k in range(n):
        rows.append([zero] * k + frow + [zero] * (size - m - 1 - k))
    for k in range(m):
        rows.append([zero] * k + grow + [zero] * (size - n - 1 - k))
    return bareiss_det(rows, f.ring, f.nvars)


def minors_gcd_valuation(rows, s: int, p: UniPoly):
    """v_p of the gcd of all s x s minors of a matrix of UniPolys (small matrices).

    Direct enumeration; used as a cross-check oracle for the local Smith
    computation in the determinant-method module.
    """
    ncols = len(rows[0])
    best = None
    for row_idx in combinations(range(len(rows)), s):
        for col_idx in combinations(range(ncols), s):
            sub = [[rows[i][j] for j in col_idx] for i in row_idx]
            det = unipoly_det(sub)
            if det.is_zero():
                continue
            v = valuation_at(det, p)
            best = v if best is None else min(best, v)
            if best == 0:
                return 0
    return best  # None when every minor vanishes


def unipoly_det(m):
    n = len(m)
    field = m[0][0].field
    m = [list(r) for r in m]
    sign = 1
    prev = UniPoly.one(field)
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return UniPoly.zero(field)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).divexact(prev)
            m[i][k] = UniPoly.zero(field)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det
