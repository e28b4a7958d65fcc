"""Left/right integrals and cointegrals as exact linear solves.

Cointegrals only need the generator conditions (the defining identity is
multiplicative in h); integrals are solved from the coproduct conditions over
all basis monomials with an early-exit echelon plus a full verification pass.
Everything downstream consumes these up to scale, so the normalizations here
are conventions, not content.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .hopfcore import Element, antipode, coproduct, _antipode_monomial, _coproduct_monomial
from .linalg import RowEchelon


class SolutionSpaceNotOneDimensional(Exception):
    pass


class LinearFunctional:
    """Functional on H given by its values on basis monomials (sparse)."""

    __slots__ = ("h", "vec", "_svec")

    def __init__(self, h, vec):
        self.h = h
        self.vec = {k: v for k, v in vec.items() if v}
        self._svec = None

    def on_monomial(self, exp):
        return self.vec.get(exp, self.h.field.zero)

    def __call__(self, x: Element):
        out = self.h.field.zero
        for m, c in x.terms.items():
            v = self.vec.get(m)
            if v:
                out = out + c * v
        return out

    def compose_antipode(self):
        """The functional m -> lambda(S(m)), materialized on the full basis."""
        if self._svec is None:
            h = self.h
            out = {}
            for i in range(h.dimension):
                m = h.exp_of(i)
                val = h.field.zero
                for m2, c in _antipode_monomial(h, m).items():
                    v = self.vec.get(m2)
                    if v:
                        val = val + c * v
                if val:
                    out[m] = val
            self._svec = LinearFunctional(h, out)
        return self._svec

    def scale(self, c):
        return LinearFunctional(self.h, {k: c * v for k, v in self.vec.items()})

    def __eq__(self, other):
        return isinstance(other, LinearFunctional) and self.vec == other.vec

    def is_zero(self):
        return not self.vec


@dataclass
class IntegralPackage:
    cointegral_left: Element
    cointegral_right: Element
    integral_left: LinearFunctional
    integral_right: LinearFunctional
    unimodular: bool = False
    integral_two_sided: bool = False
    cosemisimple: bool = False
    notes: dict = dc_field(default_factory=dict)


def _generator_elements(h):
    return [exp for _, exp in h.generator_exps()]


def _solve_one_sided_cointegral(h, side):
    """Nonzero solution of {g.x = eps(g) x} (left) or {x.g = eps(g) x} (right)."""
    field = h.field
    ech = RowEchelon(field)
    dim = h.dimension
    gens = _generator_elements(h)
    solved = None
    for g in gens:
        eps = h.counit(g)
        rows = {}
        for i in range(dim):
            m = h.exp_of(i)
            prod = h.multiply_monomials(g, m) if side == "left" else h.multiply_monomials(m, g)
            for mo, c in prod.items():
                rows.setdefault(mo, {})[i] = rows.setdefault(mo, {}).get(i, field.zero) + c
        for mo, row in rows.items():
            if eps:
                j = h.index_of(mo)
                row[j] = row.get(j, field.zero) - eps
            row = {k: v for k, v in row.items() if v}
            if row:
                ech.add_row(row)
        if ech.rank >= dim - 1:
            break
    kern = ech.kernel_basis(dim)
    if len(kern) != 1:
        raise SolutionSpaceNotOneDimensional(
            f"{side} cointegral space has dimension {len(kern)}")
    vec = kern[0]
    el = Element(h, {h.exp_of(i): c for i, c in vec.items() if c})
    # normalize: least basis index with nonzero coefficient gets coefficient 1
    lead = min(el.terms, key=h.index_of)
    el = el.scale(el.terms[lead].inverse())
    # verify against every generator (covers the ones skipped by early exit)
    for g in gens:
        eps = h.counit(g)
        ge = Element.monomial(h, g)
        prod = ge * el if side == "left" else el * ge
        want = el.scale(eps) if eps else Element.zero(h)
        if prod != want:
            raise SolutionSpaceNotOneDimensional(f"{side} cointegral failed verification")
    return el


def solve_cointegrals(h):
    return _solve_one_sided_cointegral(h, "left"), _solve_one_sided_cointegral(h, "right")


def _integral_rows(h, m, side):
    """Constraint rows on lambda from the defining identity at basis monomial m."""
    field = h.field
    grouped = {}
    for (a, b), c in _coproduct_monomial(h, m).items():
        if side == "left":
            grouped.setdefault(a, {}).setdefault(b, field.zero)
            grouped[a][b] = grouped[a][b] + c
        else:
            grouped.setdefault(b, {}).setdefault(a, field.zero)
            grouped[b][a] = grouped[b][a] + c
    rows = []
    for outer, inner in grouped.items():
        row = {h.index_of(k): v for k, v in inner.items() if v}
        if outer == h.unit:
            j = h.index_of(m)
            row[j] = row.get(j, field.zero) - field.one
        row = {k: v for k, v in row.items() if v}
        if row:
            rows.append(row)
    return rows


def _solve_one_sided_integral(h, side):
    field = h.field
    dim = h.dimension
    ech = RowEchelon(field)
    cutoff = None
    for i in range(dim):
        m = h.exp_of(i)
        for row in _integral_rows(h, m, side):
            ech.add_row(row)
        if ech.rank >= dim - 1:
            cutoff = i
            break
    kern = ech.kernel_basis(dim)
    if len(kern) != 1:
        raise SolutionSpaceNotOneDimensional(f"{side} integral space has dimension {len(kern)}")
    lam = LinearFunctional(h, {h.exp_of(i): c for i, c in kern[0].items()})
    lam = _normalize_integral(h, lam)
    # full verification pass over every basis monomial
    start = (cutoff + 1) if cutoff is not None else dim
    for i in range(dim):
        m = h.exp_of(i)
        if i <= (cutoff if cutoff is not None else -1):
            continue
        acc = {}
        for (a, b), c in _coproduct_monomial(h, m).items():
            val = lam.on_monomial(b if side == "left" else a)
            if val:
                key = a if side == "left" else b
                cur = acc.get(key)
                nv = c * val if cur is None else cur + c * val
                if nv:
                    acc[key] = nv
                elif cur is not None:
                    del acc[key]
        want = lam.on_monomial(m)
        ok = (not acc and not want) or (set(acc) == {h.unit} and acc[h.unit] == want)
        if not ok:
            raise SolutionSpaceNotOneDimensional(f"{side} integral failed verification at {m}")
    return lam


def _normalize_integral(h, lam):
    """Scale so the distinguished top monomial evaluates to 1 when possible."""
    top = [0] * h.nslots
    for j, g in enumerate(h.generators):
        if g.kind in ("E", "F"):
            top[j] = h.rp - 1
        elif g.kind == "K":
            top[j] = h.rp - 1
        elif g.kind == "nil":
            top[j] = 1
    top = tuple(top)
    v = lam.on_monomial(top)
    if v:
        return lam.scale(v.inverse())
    for i in range(h.dimension):
        v = lam.on_monomial(h.exp_of(i))
        if v:
            return lam.scale(v.inverse())
    raise SolutionSpaceNotOneDimensional("integral solved to zero")


def solve_integrals(h):
    return _solve_one_sided_integral(h, "left"), _solve_one_sided_integral(h, "right")


def solve_package(h) -> IntegralPackage:
    lam_l, lam_r = solve_integrals(h)
    co_l, co_r = solve_cointegrals(h)
    pkg = IntegralPackage(co_l, co_r, lam_l, lam_r)
    classify_modularity(h, pkg)
    return pkg


def is_right_cointegral(h, el):
    for g in _generator_elements(h):
        eps = h.counit(g)
        want = el.scale(eps) if eps else Element.zero(h)
        if el * Element.monomial(h, g) != want:
            return False
    return True


def is_left_cointegral(h, el):
    for g in _generator_elements(h):
        eps = h.counit(g)
        want = el.scale(eps) if eps else Element.zero(h)
        if Element.monomial(h, g) * el != want:
            return False
    return True


def classify_modularity(h, pkg: IntegralPackage):
    """Unimodularity, two-sidedness of the integral, cosemisimplicity."""
    lam = pkg.integral_left
    pkg.unimodular = is_right_cointegral(h, pkg.cointegral_left)
    s_co = antipode(h, pkg.cointegral_left)
    pkg.notes["S(cointegral) == cointegral"] = (s_co == pkg.cointegral_left)
    lam_s = lam.compose_antipode()
    # two-sidedness is scale-invariant; compare up to the solver normalization
    pkg.integral_two_sided = _proportional(h, lam_s.vec, lam.vec) == h.field.one \
        if _proportional(h, lam_s.vec, lam.vec) is not None else False
    pkg.cosemisimple = bool(lam.on_monomial(h.unit))
    return {
        "unimodular": pkg.unimodular,
        "integral_two_sided": pkg.integral_two_sided,
        "cosemisimple": pkg.cosemisimple,
    }


def _proportional(h, vec_a, vec_b):
    """Scalar c with vec_a == c * vec_b, or None."""
    if not vec_a and not vec_b:
        return h.field.one
    if not vec_a or not vec_b:
        return None
    if set(vec_a) != set(vec_b):
        return None
    items = iter(vec_a.items())
    k0, v0 = next(items)
    c = v0 / vec_b[k0]
    for k, v in items:
        if v != c * vec_b[k]:
            return None
    return c


def proportionality_scalar(h, a, b):
    """Scalar c with a == c*b for Elements or functionals; None if not parallel."""
    ta = a.terms if isinstance(a, Element) else a.vec
    tb = b.terms if isinstance(b, Element) else b.vec
    return _proportional(h, ta, tb)


def anomaly(h, lam: LinearFunctional, v: Element):
    """lambda(v); zero means anomalous / twist degenerate."""
    return lam(v)
