"""Elements of H, H(x)H, H(x)H(x)H and the full Hopf structure.

Elements are sparse scalar-weighted combinations of basis monomials (exponent
tuples); tensors use monomial pairs/triples as keys.  The coproduct, antipode
and inverse antipode are computed per monomial from the generator tables and
cached on the algebra handle.
"""

from __future__ import annotations

import random


class SingularAntipode(Exception):
    pass


def _acc(d, k, v):
    cur = d.get(k)
    if cur is None:
        if v:
            d[k] = v
    else:
        v = cur + v
        if v:
            d[k] = v
        else:
            del d[k]


class Element:
    __slots__ = ("h", "terms")

    def __init__(self, h, terms=None):
        self.h = h
        self.terms = terms or {}

    @classmethod
    def zero(cls, h):
        return cls(h, {})

    @classmethod
    def unit(cls, h, coeff=None):
        return cls(h, {h.unit: coeff if coeff is not None else h.field.one})

    @classmethod
    def monomial(cls, h, exp, coeff=None):
        return cls(h, {exp: coeff if coeff is not None else h.field.one})

    @classmethod
    def from_dict(cls, h, d):
        return cls(h, {k: v for k, v in d.items() if v})

    def copy(self):
        return Element(self.h, dict(self.terms))

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            _acc(out, k, v)
        return Element(self.h, out)

    def __sub__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            _acc(out, k, -v)
        return Element(self.h, out)

    def __neg__(self):
        return Element(self.h, {k: -v for k, v in self.terms.items()})

    def scale(self, c):
        if not c:
            return Element.zero(self.h)
        return Element(self.h, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Element):
            return self.scale(other)
        h = self.h
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                c = c1 * c2
                for m3, c3 in h.multiply_monomials(m1, m2).items():
                    _acc(out, m3, c * c3)
        return Element(h, out)

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        return isinstance(other, Element) and self.h is other.h and self.terms == other.terms

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def coeff(self, exp):
        return self.terms.get(exp, self.h.field.zero)

    def counit(self):
        h = self.h
        out = h.field.zero
        for m, c in self.terms.items():
            e = h.counit(m)
            if e:
                out = out + c * e
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for m in sorted(self.terms, key=self.h.index_of):
            bits.append(f"({self.terms[m]})*{self.h.monomial_name(m)}")
        return " + ".join(bits)


class Tensor2:
    __slots__ = ("h", "terms")

    def __init__(self, h, terms=None):
        self.h = h
        self.terms = terms or {}

    @classmethod
    def unit(cls, h):
        return cls(h, {(h.unit, h.unit): h.field.one})

    @classmethod
    def of(cls, a: Element, b: Element):
        out = {}
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                _acc(out, (m1, m2), c1 * c2)
        return cls(a.h, out)

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            _acc(out, k, v)
        return Tensor2(self.h, out)

    def __sub__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            _acc(out, k, -v)
        return Tensor2(self.h, out)

    def scale(self, c):
        if not c:
            return Tensor2(self.h, {})
        return Tensor2(self.h, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        h = self.h
        out = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                c = c1 * c2
                left = h.multiply_monomials(a1, a2)
                right = h.multiply_monomials(b1, b2)
                for ml, cl in left.items():
                    ccl = c * cl
                    for mr, cr in right.items():
                        _acc(out, (ml, mr), ccl * cr)
        return Tensor2(h, out)

    def flip(self):
        return Tensor2(self.h, {(b, a): c for (a, b), c in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, Tensor2) and self.terms == other.terms

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def apply_left(self, f):
        """(f (x) id): f maps monomial exp -> scalar."""
        out = {}
        for (a, b), c in self.terms.items():
            v = f(a)
            if v:
                _acc(out, b, c * v)
        return Element(self.h, out)

    def apply_right(self, f):
        out = {}
        for (a, b), c in self.terms.items():
            v = f(b)
            if v:
                _acc(out, a, c * v)
        return Element(self.h, out)

    def apply_both(self, f, g):
        out = self.h.field.zero
        for (a, b), c in self.terms.items():
            va = f(a)
            if va:
                vb = g(b)
                if vb:
                    out = out + c * va * vb
        return out


class Tensor3:
    __slots__ = ("h", "terms")

    def __init__(self, h, terms=None):
        self.h = h
        self.terms = terms or {}

    @classmethod
    def unit(cls, h):
        return cls(h, {(h.unit, h.unit, h.unit): h.field.one})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            _acc(out, k, v)
        return Tensor3(self.h, out)

    def __sub__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            _acc(out, k, -v)
        return Tensor3(self.h, out)

    def __mul__(self, other):
        h = self.h
        out = {}
        for (a1, b1, c1), x1 in self.terms.items():
            for (a2, b2, c2), x2 in other.terms.items():
                x = x1 * x2
                pa = h.multiply_monomials(a1, a2)
                pb = h.multiply_monomials(b1, b2)
                pc = h.multiply_monomials(c1, c2)
                for ma, xa in pa.items():
                    for mb, xb in pb.items():
                        xab = x * xa * xb
                        for mc, xc in pc.items():
                            _acc(out, (ma, mb, mc), xab * xc)
        return Tensor3(h, out)

    def __eq__(self, other):
        return isinstance(other, Tensor3) and self.terms == other.terms

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)


# ---------------------------------------------------------------------------
# Structure maps


def _coproduct_monomial(h, exp):
    cache = getattr(h, "_cop_cache", None)
    if cache is None:
        cache = h._cop_cache = {}
    hit = cache.get(exp)
    if hit is not None:
        return hit
    one = h.field.one
    terms = {(h.unit, h.unit): one}
    for j in range(h.nslots):
        e = exp[j]
        if not e:
            continue
        if h.generators[j].kind == "perm":
            out = {}
            sig = [0] * h.nslots
            sig[j] = e
            sig = tuple(sig)
            for (l, r), c in terms.items():
                pl = h.multiply_monomials(l, sig)
                pr = h.multiply_monomials(r, sig)
                for ml, cl in pl.items():
                    for mr, cr in pr.items():
                        _acc(out, (ml, mr), c * cl * cr)
            terms = out
            continue
        factors = h.gen_coproduct[j]
        for _ in range(e):
            out = {}
            for (l, r), c in terms.items():
                for (fl, fr, fc) in factors:
                    cl_map = h.multiply_monomials(l, fl)
                    for ml, cl in cl_map.items():
                        cc = c * fc * cl
                        for mr, cr in h.multiply_monomials(r, fr).items():
                            _acc(out, (ml, mr), cc * cr)
            terms = out
    terms = {k: v for k, v in terms.items() if v}
    cache[exp] = terms
    return terms


def coproduct(h, x: Element) -> Tensor2:
    out = {}
    for m, c in x.terms.items():
        for k, v in _coproduct_monomial(h, m).items():
            _acc(out, k, c * v)
    return Tensor2(h, out)


def coproduct_cop(h, x: Element) -> Tensor2:
    return coproduct(h, x).flip()


def _antipode_monomial(h, exp, inverse=False):
    attr = "_antipode_inv_cache" if inverse else "_antipode_cache"
    cache = getattr(h, attr, None)
    if cache is None:
        cache = {}
        setattr(h, attr, cache)
    hit = cache.get(exp)
    if hit is not None:
        return hit
    gen_table = h.gen_antipode if not inverse else _gen_antipode_inverse_table(h)
    out = {h.unit: h.field.one}
    for j in range(h.nslots - 1, -1, -1):
        e = exp[j]
        if not e:
            continue
        if h.generators[j].kind == "perm":
            sig = [0] * h.nslots
            sig[j] = h.perm_inv[e]
            sig = tuple(sig)
            nxt = {}
            for m, c in out.items():
                for m2, c2 in h.multiply_monomials(m, sig).items():
                    _acc(nxt, m2, c * c2)
            out = nxt
            continue
        fac = gen_table[j]
        for _ in range(e):
            nxt = {}
            for m, c in out.items():
                for fm, fc in fac.items():
                    cc = c * fc
                    for m2, c2 in h.multiply_monomials(m, fm).items():
                        _acc(nxt, m2, cc * c2)
            out = nxt
    out = {k: v for k, v in out.items() if v}
    cache[exp] = out
    return out


def _gen_antipode_inverse_table(h):
    tab = getattr(h, "_gen_antipode_inv", None)
    if tab is not None:
        return tab
    tab = {}
    one = h.field.one
    unit = h.unit
    for j, g in enumerate(h.generators):
        if g.kind == "perm":
            continue
        ej = list(unit)
        ej[j] = 1
        ej = tuple(ej)
        if g.kind in ("K", "group"):
            inv = list(unit)
            inv[j] = (g.order - 1) % g.order
            tab[j] = {tuple(inv): one}
        elif g.kind == "E":
            # S^{-1}(E) = -K^{-1} E
            kinv = list(unit)
            kinv[2] = h.rp - 1
            prod = h.multiply_monomials(tuple(kinv), ej)
            tab[j] = {m: -c for m, c in prod.items()}
        elif g.kind == "F":
            # S^{-1}(F) = -F K
            k1 = list(unit)
            k1[2] = 1
            prod = h.multiply_monomials(ej, tuple(k1))
            tab[j] = {m: -c for m, c in prod.items()}
        elif g.kind == "nil":
            # S^{-1}(X) = -T^{-1} X for the coproduct tail T
            tail = h.nil_tails[j]
            inv_tail = list(unit)
            for s, te in enumerate(tail):
                if te:
                    inv_tail[s] = (h.generators[s].order - te) % h.generators[s].order
            prod = h.multiply_monomials(tuple(inv_tail), ej)
            tab[j] = {m: -c for m, c in prod.items()}
    h._gen_antipode_inv = tab
    return tab


def antipode(h, x: Element) -> Element:
    out = {}
    for m, c in x.terms.items():
        for m2, c2 in _antipode_monomial(h, m).items():
            _acc(out, m2, c * c2)
    return Element(h, out)


def antipode_inverse(h, x: Element) -> Element:
    out = {}
    for m, c in x.terms.items():
        for m2, c2 in _antipode_monomial(h, m, inverse=True).items():
            _acc(out, m2, c * c2)
    return Element(h, out)


def adjoint_action(h, a: Element, b: Element) -> Element:
    """a |> b = a_(1) b S(a_(2))."""
    out = Element.zero(h)
    for m, c in a.terms.items():
        for (m1, m2), cc in _coproduct_monomial(h, m).items():
            sa = Element(h, _antipode_monomial(h, m2))
            piece = Element.monomial(h, m1, c * cc) * b * sa
            out = out + piece
    return out


def tensor_lift_left(h, t: Tensor2) -> Tensor3:
    """(Delta (x) id) applied to a Tensor2."""
    out = {}
    for (a, b), c in t.terms.items():
        for (a1, a2), cc in _coproduct_monomial(h, a).items():
            _acc(out, (a1, a2, b), c * cc)
    return Tensor3(h, out)


def tensor_lift_right(h, t: Tensor2) -> Tensor3:
    """(id (x) Delta) applied to a Tensor2."""
    out = {}
    for (a, b), c in t.terms.items():
        for (b1, b2), cc in _coproduct_monomial(h, b).items():
            _acc(out, (a, b1, b2), c * cc)
    return Tensor3(h, out)


def random_element(h, rng: random.Random, max_terms=8) -> Element:
    """Seeded sparse element with coefficients from {+-1, +-zeta}."""
    field = h.field
    zeta = field.root_of_unity(h.root_order) if h.root_order > 1 else field.one
    coeffs = [field.one, -field.one, zeta, -zeta]
    out = {}
    for _ in range(rng.randrange(1, max_terms + 1)):
        exp = h.exp_of(rng.randrange(h.dimension))
        _acc(out, exp, coeffs[rng.randrange(4)])
    return Element(h, out)


# ---------------------------------------------------------------------------
# Hopf axiom verifier


def verify_hopf(h, sample=20, seed=0):
    """Exact check of all nine Hopf axioms plus the coopposite coalgebra laws.

    Runs on every generator and on `sample` seeded random elements; returns a
    report listing each axiom with a pass flag and a witness on failure.
    """
    rng = random.Random(seed)
    field = h.field
    gens = [Element.monomial(h, e) for _, e in h.generator_exps()]
    randoms = [random_element(h, rng) for _ in range(sample)]
    witnesses = gens + randoms
    pair_pool = witnesses if len(witnesses) <= 12 else witnesses[:6] + randoms[:6]
    results = []

    def check(name, ok, witness=None):
        results.append({"axiom": name, "passed": bool(ok), "witness": witness})

    unit_el = Element.unit(h)

    # 1: associativity of mu
    ok, wit = True, None
    n = len(pair_pool)
    for i in range(n):
        x = pair_pool[i]
        y = pair_pool[(3 * i + 1) % n]
        z = pair_pool[(5 * i + 2) % n]
        if ((x * y) * z) != (x * (y * z)):
            ok, wit = False, repr((x, y, z))
            break
    check("mu associative", ok, wit)

    # 2: unit laws
    ok, wit = True, None
    for x in witnesses:
        if unit_el * x != x or x * unit_el != x:
            ok, wit = False, repr(x)
            break
    check("unit laws", ok, wit)

    # 3: coassociativity
    ok, wit = True, None
    for x in witnesses:
        d = coproduct(h, x)
        if tensor_lift_left(h, d) != tensor_lift_right(h, d):
            ok, wit = False, repr(x)
            break
    check("Delta coassociative", ok, wit)

    # 4: counit laws
    ok, wit = True, None
    for x in witnesses:
        d = coproduct(h, x)
        left = d.apply_left(h.counit)
        right = d.apply_right(h.counit)
        if left != x or right != x:
            ok, wit = False, repr(x)
            break
    check("counit laws", ok, wit)

    # 5: Delta is an algebra map
    ok, wit = True, None
    for i, x in enumerate(pair_pool):
        y = pair_pool[(i * 3 + 1) % len(pair_pool)]
        if coproduct(h, x * y) != coproduct(h, x) * coproduct(h, y):
            ok, wit = False, repr((x, y))
            break
    check("Delta multiplicative", ok, wit)

    # 6: epsilon is an algebra map
    ok, wit = True, None
    for i, x in enumerate(pair_pool):
        y = pair_pool[(i * 5 + 2) % len(pair_pool)]
        if (x * y).counit() != x.counit() * y.counit():
            ok, wit = False, repr((x, y))
            break
    check("epsilon multiplicative", ok, wit)

    # 7, 8: unit is grouplike, epsilon(1) = 1
    check("Delta(1) = 1x1", coproduct(h, unit_el) == Tensor2.unit(h))
    check("epsilon(1) = 1", unit_el.counit() == field.one)

    # 9: antipode axiom, both sides
    ok, wit = True, None
    for x in witnesses:
        d = coproduct(h, x)
        target = Element.unit(h, x.counit()) if x.counit() else Element.zero(h)
        left = Element.zero(h)
        right = Element.zero(h)
        for (a, b), c in d.terms.items():
            left = left + Element(h, _antipode_monomial(h, a)).scale(c) * Element.monomial(h, b)
            right = right + Element.monomial(h, a, c) * Element(h, _antipode_monomial(h, b))
        if left != target or right != target:
            ok, wit = False, repr(x)
            break
    check("antipode axiom", ok, wit)

    # coopposite coalgebra laws: tau.Delta is coassociative with the same counit
    ok, wit = True, None
    for x in witnesses[: len(gens) + 5]:
        d = coproduct_cop(h, x)
        left3, right3 = {}, {}
        for (a, b), c in d.terms.items():
            for (a1, a2), cc in _coproduct_monomial(h, a).items():
                _acc(left3, (a2, a1, b), c * cc)   # (Delta^cop (x) id)
            for (b1, b2), cc in _coproduct_monomial(h, b).items():
                _acc(right3, (a, b2, b1), c * cc)  # (id (x) Delta^cop)
        if Tensor3(h, left3) != Tensor3(h, right3):
            ok, wit = False, repr(x)
            break
        if d.apply_left(h.counit) != x or d.apply_right(h.counit) != x:
            ok, wit = False, repr(x)
            break
    check("coopposite coalgebra laws", ok, wit)

    passed = all(r["passed"] for r in results)
    return {"passed": passed, "axioms": results}
