"""Algebra presentations and the rewriting engine behind the monomial basis.

Four families are supported: diagonal grouplike/nilpotent presentations
(Nenciu data), the small quantum group at an even root of unity, semidirect
biproducts of the two, and the finite-characteristic triple product with a
symmetric-group factor.  A fifth degenerate kind, the plain symmetric group
algebra, reuses the same machinery.

A monomial is an exponent tuple over the algebra's ordered generator slots;
products are computed by moving the right word's generators leftward one slot
at a time, picking up diagonal commutation scalars.  The only multi-term
rewrite is straightening E past a power of F.  Confluence is not proved, it
is certified by the associativity test suite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd

from .scalars import make_field


class PresentationError(Exception):
    pass


class InvalidSpec(PresentationError):
    pass


def _lcm(a, b):
    return a * b // gcd(a, b)


def _lcm_all(xs, start=1):
    out = start
    for x in xs:
        out = _lcm(out, x)
    return out


# ---------------------------------------------------------------------------
# Nenciu data and validation


@dataclass(frozen=True)
class NenciuData:
    """Grouplike orders m, nilpotent count t, commutation matrix d, tail matrix u."""

    m: tuple
    t: int
    d: tuple   # t rows of length s, entries taken mod m_a
    u: tuple
    opposite_pairs: tuple = ()
    names: tuple = ()  # optional generator display names (grouplikes then nilpotents)

    @property
    def s(self):
        return len(self.m)

    def normalized(self):
        m = tuple(int(x) for x in self.m)
        d = tuple(tuple(int(x) % m[a] for a, x in enumerate(row)) for row in self.d)
        u = tuple(tuple(int(x) % m[a] for a, x in enumerate(row)) for row in self.u)
        return NenciuData(m, self.t, d, u, tuple(tuple(p) for p in self.opposite_pairs), self.names)


@dataclass
class ValidationReport:
    passed: bool
    failures: list

    def __bool__(self):
        return self.passed


def _root_exponent(m, x_row, y_row):
    """Exponent e (mod L = lcm(m)) with prod_a xi_a^{x_a y_a} = zeta_L^e."""
    L = _lcm_all(m)
    e = 0
    for ma, x, y in zip(m, x_row, y_row):
        e += (x * y % ma) * (L // ma)
    return e % L, L


def validate(data: NenciuData) -> ValidationReport:
    """Check the consistency constraints on (m, t, d, u) and opposite pairs."""
    data = data.normalized()
    failures = []
    if data.t and data.s == 0:
        failures.append(("shape", "nilpotent generators need at least one grouplike for tails"))
    if len(data.d) != data.t or len(data.u) != data.t:
        failures.append(("shape", f"d/u must have {data.t} rows"))
        return ValidationReport(False, failures)
    for row in list(data.d) + list(data.u):
        if len(row) != data.s:
            failures.append(("shape", "row length must equal number of grouplikes"))
            return ValidationReport(False, failures)
    if any(ma < 1 for ma in data.m):
        failures.append(("shape", "grouplike orders must be >= 1"))
        return ValidationReport(False, failures)
    for k in range(data.t):
        e, L = _root_exponent(data.m, data.d[k], data.u[k])
        if L % 2 or e != L // 2:
            failures.append(("diagonal", k, k))
    for k in range(data.t):
        for l in range(k + 1, data.t):
            e1, L = _root_exponent(data.m, data.d[k], data.u[l])
            e2, _ = _root_exponent(data.m, data.d[l], data.u[k])
            if (e1 + e2) % L:
                failures.append(("cross", k, l))
    for (k, k2) in data.opposite_pairs:
        for a in range(data.s):
            if (data.d[k][a] + data.d[k2][a]) % data.m[a]:
                failures.append(("opposite-d", k, k2))
                break
        for a in range(data.s):
            if (data.u[k][a] + data.u[k2][a]) % data.m[a]:
                failures.append(("opposite-u", k, k2))
                break
    return ValidationReport(not failures, failures)


# ---------------------------------------------------------------------------
# Algebra specs


@dataclass(frozen=True)
class AlgebraSpec:
    kind: str              # nenciu | uqsl2 | biproduct | triple | group_sp
    field_char: int = 0
    nenciu: NenciuData = None
    r: int = 0             # order of q for the sl2 part
    p: int = 0             # symmetric group letters / characteristic for triple
    name: str = ""

    def describe(self):
        return self.name or self.kind


def perms(p):
    return list(itertools.permutations(range(p)))


class Generator:
    __slots__ = ("name", "kind", "order", "extra")

    def __init__(self, name, kind, order, extra=None):
        self.name = name
        self.kind = kind      # 'E' | 'F' | 'K' | 'group' | 'nil' | 'perm'
        self.order = order    # slot radix
        self.extra = extra

    def __repr__(self):
        return f"Generator({self.name})"


class AlgebraHandle:
    """A built presentation: basis enumeration, rewriting, generator tables."""

    def __init__(self, spec: AlgebraSpec, field=None):
        self.spec = spec
        self.kind = spec.kind
        data = spec.nenciu.normalized() if spec.nenciu is not None else None
        self.nenciu = data

        if spec.kind in ("uqsl2", "biproduct"):
            if spec.r % 8:
                raise InvalidSpec("order of q must be a multiple of 8")
        if spec.kind == "triple":
            if spec.r % 8:
                raise InvalidSpec("order of q must be a multiple of 8")
            if spec.field_char != spec.p:
                raise InvalidSpec("triple product lives in characteristic p")
            if spec.p < 3:
                raise InvalidSpec("p must be an odd prime > 2")
            if gcd(spec.r, spec.p) != 1:
                raise InvalidSpec("order of q must be coprime to p")
        if data is not None:
            rep = validate(data)
            if not rep:
                raise InvalidSpec(f"presentation constraints fail: {rep.failures}")

        self.r = spec.r
        self.rp = spec.r // 2 if spec.r else 0     # r'
        self.rpp = spec.r // 4 if spec.r else 0    # r''

        # common root order: every commutation scalar is a power of zeta_L
        orders = [2]
        if data is not None:
            orders += [ma for ma in data.m]
        if spec.r:
            orders.append(spec.r)
        self.root_order = _lcm_all(orders)

        if field is None:
            if spec.field_char == 0:
                conductor = _lcm_all([self.root_order, 8])
                field = make_field(char=0, conductor=conductor)
            else:
                field = make_field(char=spec.field_char, root_orders=[self.root_order, 8])
        self.field = field
        L = self.root_order
        self._roots = [field.root_of_unity(L, k) for k in range(L)]

        self._build_generators()
        self._build_strides()
        self._build_gamma()
        self._build_hopf_tables()
        self._memo_FE = {}

    # -- construction ---------------------------------------------------------

    def _build_generators(self):
        spec, data = self.spec, self.nenciu
        gens = []
        self.sl2_slots = None
        self.group_slots = []
        self.nil_slots = []
        self.perm_slot = None
        if spec.kind in ("uqsl2", "biproduct", "triple"):
            gens.append(Generator("E", "E", self.rp))
            gens.append(Generator("F", "F", self.rp))
            gens.append(Generator("K", "K", self.rp))
            self.sl2_slots = (0, 1, 2)
        if data is not None:
            g0 = len(gens)
            names = data.names or tuple(
                [f"K{a+1}" for a in range(data.s)] + [f"X{k+1}" for k in range(data.t)])
            for a in range(data.s):
                gens.append(Generator(names[a], "group", data.m[a]))
            self.group_slots = list(range(g0, g0 + data.s))
            n0 = len(gens)
            for k in range(data.t):
                gens.append(Generator(names[data.s + k], "nil", 2))
            self.nil_slots = list(range(n0, n0 + data.t))
        if spec.kind in ("triple", "group_sp"):
            self.perm_elements = perms(spec.p)
            self.perm_index = {pm: i for i, pm in enumerate(self.perm_elements)}
            self.perm_mul = [[self.perm_index[tuple(a[b[l]] for l in range(spec.p))]
                              for b in self.perm_elements] for a in self.perm_elements]
            self.perm_inv = [self.perm_index[tuple(sorted(range(spec.p), key=lambda l: a[l]))]
                             for a in self.perm_elements]
            gens.append(Generator("sigma", "perm", len(self.perm_elements)))
            self.perm_slot = len(gens) - 1
        self.generators = gens
        self.nslots = len(gens)
        if spec.kind == "triple":
            # nilpotent slot layout: pairs (Z+_l, Z-_l) adjacent, l = 1..p
            assert data is not None and data.t == 2 * spec.p

    def _build_strides(self):
        radices = [g.order for g in self.generators]
        strides = []
        acc = 1
        for r in reversed(radices):
            strides.append(acc)
            acc *= r
        strides.reverse()
        self.radices = radices
        self.strides = strides
        self.dimension = acc
        self.unit = (0,) * self.nslots

    def index_of(self, exp):
        return sum(e * s for e, s in zip(exp, self.strides))

    def exp_of(self, index):
        out = []
        for r, s in zip(self.radices, self.strides):
            out.append((index // s) % r)
        return tuple(out)

    def basis(self):
        """Deterministic enumeration of all dim(h) monomials (exponent tuples)."""
        return [self.exp_of(i) for i in range(self.dimension)]

    def _build_gamma(self):
        """gamma[k][j] = root exponent g with  g_k g_j = zeta_L^g  g_j g_k, for k > j."""
        L = self.root_order
        n = self.nslots
        data = self.nenciu
        gamma = [[0] * n for _ in range(n)]

        def xi_exp(a, power):
            # xi_a^power as exponent of zeta_L
            return (power % data.m[a]) * (L // data.m[a]) % L

        for k in range(n):
            for j in range(k):
                gk, gj = self.generators[k], self.generators[j]
                e = 0
                if gk.kind == "perm" or gj.kind == "perm":
                    continue  # handled by index permutation
                if gj.kind == "E":
                    if gk.kind == "K":
                        e = 2 * (L // self.r)                    # K E = q^2 E K
                    elif gk.kind == "nil":
                        e = L // 2                               # X E = - E X
                    elif gk.kind == "F":
                        e = None                                 # multi-term, special
                elif gj.kind == "F":
                    if gk.kind == "K":
                        e = (-2) * (L // self.r) % L             # K F = q^-2 F K
                    elif gk.kind == "nil":
                        e = 0                                    # [F, X] = 0
                elif gj.kind == "K":
                    if gk.kind == "nil":
                        e = L // 2                               # X K = - K X
                elif gj.kind == "group":
                    a = self.group_slots.index(j)
                    if gk.kind == "nil":
                        kk = self.nil_slots.index(k)
                        e = xi_exp(a, -data.d[kk][a])            # X_k K_a = xi^-d K_a X_k
                elif gj.kind == "nil":
                    jj = self.nil_slots.index(j)
                    if gk.kind == "nil":
                        kk = self.nil_slots.index(k)
                        ex, LL = _root_exponent(data.m, data.d[jj], data.u[kk])
                        e = ex * (L // LL) % L                   # X_k X_j = xi^{d_j.u_k} X_j X_k
                gamma[k][j] = e
        self.gamma = gamma

    def root(self, e):
        return self._roots[e % self.root_order]

    def q_power(self, e):
        return self._roots[(e * (self.root_order // self.r)) % self.root_order]

    def xi_power(self, a, e):
        ma = self.nenciu.m[a]
        return self._roots[(e % ma) * (self.root_order // ma) % self.root_order]

    # -- multiplication --------------------------------------------------------

    def _insert_generator(self, exp, rexp, j, e):
        """Insert g_j^e from the right into monomial exp (with root exponent rexp).

        Yields (exp, rexp, extra_scalar_or_None) terms.
        """
        if e == 0:
            yield exp, rexp, None
            return
        gj = self.generators[j]
        if gj.kind == "perm":
            cur = exp[self.perm_slot]
            out = list(exp)
            out[self.perm_slot] = self.perm_mul[cur][e]
            yield tuple(out), rexp, None
            return
        if gj.kind == "nil" and self.perm_slot is not None:
            sig = self.perm_elements[exp[self.perm_slot]]
            # sigma Z_l = Z_{sigma(l)} sigma: crossing sigma re-labels the pair index
            pair, sign_slot = divmod(j - self.nil_slots[0], 2)
            j = self.nil_slots[0] + 2 * sig[pair] + sign_slot
        L = self.root_order
        gam = self.gamma
        if gj.kind == "E":
            terms = [(exp, rexp, None)]
            for _ in range(e):
                nxt = []
                for t_exp, t_rexp, t_sc in terms:
                    for o_exp, o_rexp, o_sc in self._insert_single_E(t_exp, t_rexp):
                        sc = o_sc if t_sc is None else (t_sc if o_sc is None else t_sc * o_sc)
                        nxt.append((o_exp, o_rexp, sc))
                terms = nxt
            yield from terms
            return
        add = 0
        for k in range(j + 1, self.nslots):
            if exp[k] and self.generators[k].kind != "perm":
                g = gam[k][j]
                if g:
                    add += g * exp[k]
        rexp = (rexp + add * e) % L
        cur = exp[j]
        if gj.kind in ("group", "K"):
            out = list(exp)
            out[j] = (cur + e) % gj.order
            yield tuple(out), rexp, None
            return
        # nilpotent of square zero, or F with power cutoff
        new = cur + e
        if gj.kind == "nil" and new >= 2:
            return
        if gj.kind == "F" and new >= self.rp:
            return
        out = list(exp)
        out[j] = new
        yield tuple(out), rexp, None

    def _insert_single_E(self, exp, rexp):
        """Multiply monomial exp by one E from the right: cross the sigma, X,
        grouplike and K blocks diagonally, then straighten past F^f."""
        L = self.root_order
        add = 2 * exp[2] * (L // self.r)                 # E crosses K^c: q^{2c}
        for k in self.nil_slots:
            if exp[k]:
                add += (L // 2) * exp[k]                 # E anticommutes with X_k
        rexp = (rexp + add) % L
        c = exp[2]
        f = exp[1]
        ecur = exp[0]
        out = []
        if ecur + 1 < self.rp:
            t = list(exp)
            t[0] = ecur + 1
            out.append((tuple(t), rexp, None))
        if f:
            # F^f E = E F^f - [f] F^{f-1} (q^{-(f-1)} K - q^{f-1} K^{-1}) / (q - q^{-1})
            key = f
            coefs = self._memo_FE.get(key)
            if coefs is None:
                q1 = self.q_power(1)
                qm1 = self.q_power(-1)
                brk = (self.q_power(f) - self.q_power(-f)) / (q1 - qm1)  # [f]
                coefs = (brk * self.q_power(-(f - 1)) / (q1 - qm1),
                         brk * self.q_power(f - 1) / (q1 - qm1))
                self._memo_FE[key] = coefs
            cK, cKinv = coefs
            t1 = list(exp)
            t1[1] = f - 1
            t1[2] = (c + 1) % self.rp
            out.append((tuple(t1), rexp, -cK))
            t2 = list(exp)
            t2[1] = f - 1
            t2[2] = (c - 1) % self.rp
            out.append((tuple(t2), rexp, cKinv))
        return out

    def multiply_monomials(self, a, b):
        """Product of two basis monomials as {exponent tuple: scalar}."""
        terms = [(a, 0, None)]
        for j in range(self.nslots):
            e = b[j]
            if not e:
                continue
            nxt = []
            for exp, rexp, sc in terms:
                for o_exp, o_rexp, o_sc in self._insert_generator(exp, rexp, j, e):
                    osc = sc if o_sc is None else (o_sc if sc is None else sc * o_sc)
                    nxt.append((o_exp, o_rexp, osc))
            terms = nxt
            if not terms:
                return {}
        out = {}
        for exp, rexp, sc in terms:
            val = self.root(rexp) if sc is None else self.root(rexp) * sc
            cur = out.get(exp)
            val = val if cur is None else cur + val
            if val:
                out[exp] = val
            elif cur is not None:
                del out[exp]
        return out

    def monomial_times_generator_power(self, exp, j, e):
        """Right-multiply a monomial by g_j^e; returns {exp: scalar}."""
        out = {}
        for o_exp, o_rexp, o_sc in self._insert_generator(exp, 0, j, e):
            val = self.root(o_rexp) if o_sc is None else self.root(o_rexp) * o_sc
            cur = out.get(o_exp)
            val = val if cur is None else cur + val
            if val:
                out[o_exp] = val
            elif cur is not None:
                del out[o_exp]
        return out

    # -- Hopf structure tables --------------------------------------------------

    def _build_hopf_tables(self):
        """Generator coproducts, antipodes and counits, in canonical form."""
        data = self.nenciu
        self.gen_coproduct = {}   # slot -> list of (exp_left, exp_right, scalar)
        self.gen_antipode = {}    # slot -> {exp: scalar}
        self.gen_counit = {}
        one = self.field.one
        unit = self.unit
        for j, g in enumerate(self.generators):
            ej = list(unit)
            if g.kind == "perm":
                continue
            ej[j] = 1
            ej = tuple(ej)
            if g.kind == "E":
                kexp = list(unit)
                kexp[2] = 1
                self.gen_coproduct[j] = [(unit, ej, one), (ej, tuple(kexp), one)]
                skexp = list(unit)
                skexp[0] = 1
                skexp[2] = self.rp - 1
                self.gen_antipode[j] = {tuple(skexp): -one}      # S(E) = -E K^{-1}
                self.gen_counit[j] = self.field.zero
            elif g.kind == "F":
                kinv = list(unit)
                kinv[2] = self.rp - 1
                self.gen_coproduct[j] = [(ej, unit, one), (tuple(kinv), ej, one)]
                sf = list(unit)
                sf[1] = 1
                sf[2] = 1
                self.gen_antipode[j] = {tuple(sf): -self.q_power(-2)}  # S(F) = -K F = -q^{-2} F K
                self.gen_counit[j] = self.field.zero
            elif g.kind in ("K", "group"):
                self.gen_coproduct[j] = [(ej, ej, one)]
                inv = list(unit)
                inv[j] = (g.order - 1) % g.order
                self.gen_antipode[j] = {tuple(inv): one}
                self.gen_counit[j] = one
            elif g.kind == "nil":
                k = self.nil_slots.index(j)
                tail = list(unit)
                if self.kind in ("biproduct", "triple"):
                    tail[2] = self.rpp % self.rp
                for a, slot in enumerate(self.group_slots):
                    tail[slot] = data.u[k][a] % data.m[a]
                tail = tuple(tail)
                self.gen_coproduct[j] = [(unit, ej, one), (ej, tail, one)]
                # S(X_k) = -X_k * tail^{-1}, normalized to canonical order
                inv_tail = list(unit)
                if self.kind in ("biproduct", "triple"):
                    inv_tail[2] = (-self.rpp) % self.rp
                for a, slot in enumerate(self.group_slots):
                    inv_tail[slot] = (-data.u[k][a]) % data.m[a]
                prod = self.multiply_monomials(ej, tuple(inv_tail))
                self.gen_antipode[j] = {m: -c for m, c in prod.items()}
                self.gen_counit[j] = self.field.zero
        if self.perm_slot is not None:
            j = self.perm_slot
            self.gen_counit[j] = one
        self.nil_tails = {}
        for j in self.nil_slots:
            for (l, r, c) in self.gen_coproduct[j]:
                if l == unit:
                    continue
                self.nil_tails[j] = r

    def counit(self, exp):
        for j, e in enumerate(exp):
            if e and self.generators[j].kind in ("E", "F", "nil"):
                return self.field.zero
        return self.field.one

    # -- commutation weights (for grouplike bicharacter fast paths) ------------

    def comm_weight_group(self, exp, a):
        """w with K_a m = xi_a^w m K_a for monomial m."""
        data = self.nenciu
        w = 0
        for k, slot in enumerate(self.nil_slots):
            if exp[slot]:
                w += data.d[k][a]
        return w % data.m[a]

    def comm_weight_K(self, exp):
        """w with K m = q^w m K (sl2-containing kinds)."""
        w = 2 * exp[0] - 2 * exp[1]
        nil_count = sum(exp[s] for s in self.nil_slots)
        w += self.rp * nil_count
        return w % self.r

    def generator_exps(self):
        """Single-generator monomials (all sigma_t for the permutation slot)."""
        out = []
        for j, g in enumerate(self.generators):
            if g.kind == "perm":
                for t in range(1, g.order):
                    e = list(self.unit)
                    e[j] = t
                    out.append((g.name + f"_{t}", tuple(e)))
            else:
                e = list(self.unit)
                e[j] = 1
                out.append((g.name, tuple(e)))
        return out

    def monomial_name(self, exp):
        parts = []
        for j, e in enumerate(exp):
            if not e:
                continue
            g = self.generators[j]
            if g.kind == "perm":
                parts.append(f"s{self.perm_elements[e]}")
            elif e == 1:
                parts.append(g.name)
            else:
                parts.append(f"{g.name}^{e}")
        return "*".join(parts) if parts else "1"

    def __repr__(self):
        return f"AlgebraHandle({self.spec.describe()}, dim={self.dimension})"


# ---------------------------------------------------------------------------
# Bundled presentations


def sf_data(n):
    """Symplectic fermions SF_{2n}: one involution L, n anticommuting pairs."""
    names = ["L"] + [x for l in range(n) for x in (f"Z+{l+1}", f"Z-{l+1}")]
    return NenciuData(
        m=(2,),
        t=2 * n,
        d=tuple((1,) for _ in range(2 * n)),
        u=tuple((1,) for _ in range(2 * n)),
        opposite_pairs=tuple((2 * l, 2 * l + 1) for l in range(n)),
        names=tuple(names),
    )


def n1_data():
    names = ("K1", "K2", "X+", "X-")
    return NenciuData(
        m=(4, 4),
        t=2,
        d=((1, 1), (-1, -1)),
        u=((1, 1), (-1, -1)),
        opposite_pairs=((0, 1),),
        names=names,
    )


def n2_data(t1=1, t2=1):
    names = (["K1", "K2", "K3"]
             + [x for k in range(t1) for x in (f"X+{k+1}", f"X-{k+1}")]
             + [x for l in range(t2) for x in (f"Z+{l+1}", f"Z-{l+1}")])
    d, u, pairs = [], [], []
    for k in range(t1):
        d += [(1, 1, 1), (-1, -1, -1)]
        u += [(1, 1, 0), (-1, -1, 0)]
        pairs.append((2 * k, 2 * k + 1))
    for l in range(t2):
        d += [(0, 2, 1), (0, -2, -1)]
        u += [(0, 0, 2), (0, 0, 2)]
        pairs.append((2 * t1 + 2 * l, 2 * t1 + 2 * l + 1))
    return NenciuData(m=(4, 4, 4), t=2 * (t1 + t2), d=tuple(d), u=tuple(u),
                      opposite_pairs=tuple(pairs), names=tuple(names))


def preset_spec(name, char=0):
    name = name.lower()
    if name.startswith("sf"):
        n = int(name[2:]) // 2 if len(name) > 2 else 1
        return AlgebraSpec("nenciu", char, sf_data(n), name=f"SF_{2*n}")
    if name == "n1":
        return AlgebraSpec("nenciu", char, n1_data(), name="N_1")
    if name == "n2":
        return AlgebraSpec("nenciu", char, n2_data(), name="N_2")
    if name == "uqsl2":
        return AlgebraSpec("uqsl2", char, None, r=8, name="uqsl2_r8")
    if name in ("uqsl2xsf2", "biproduct_sf2"):
        return AlgebraSpec("biproduct", char, sf_data(1), r=8, name="uqsl2xSF_2")
    if name in ("uqsl2xn1", "biproduct_n1"):
        return AlgebraSpec("biproduct", char, n1_data(), r=8, name="uqsl2xN_1")
    if name in ("uqsl2xn2", "biproduct_n2"):
        return AlgebraSpec("biproduct", char, n2_data(), r=8, name="uqsl2xN_2")
    if name == "triple_p3":
        return AlgebraSpec("triple", 3, sf_data(3), r=8, p=3, name="triple_r8_p3")
    if name == "s3_group":
        return AlgebraSpec("group_sp", 3, None, p=3, name="F3[S3]")
    raise InvalidSpec(f"unknown preset {name!r}")


def build(spec: AlgebraSpec, field=None) -> AlgebraHandle:
    return AlgebraHandle(spec, field=field)
