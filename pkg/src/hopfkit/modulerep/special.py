"""Hand-built module families: the Xi ladders, the Jordan-block family for the
symplectic fermions, lifts of transparent modules to the biproducts, and the
displayed biproduct projective tables (kept as claims to cross-check).

Every constructed module runs the module-law verifier; the displayed tables
are expected to carry index slips, so their check returns a report instead of
asserting.
"""

from __future__ import annotations

from .reps import ModuleRep


class InvalidParameters(Exception):
    pass


def _empty_cols(h, dim):
    return {name: [{} for _ in range(dim)] for name, _ in h.generator_exps()}


def xi_module_n2(h, v, k, eps, delta, verify=True) -> ModuleRep:
    """Xi^v_{k,eps,delta} over the three-grouplike algebra with X and Z pairs.

    Basis: e^[eps] (alpha=0), e^1..e^k, e^[delta] (alpha=k+1), o^1..o^{k+1}.
    The X pair acts as the ladder, the Z pair acts as zero.  The displayed
    "X+ e^[delta] = o^1" line is dropped: it violates the module law for even
    ladder length, and the ladder shape requires no such arrow.
    """
    if k < 0 or eps not in (0, 1) or delta not in (0, 1) or len(v) != 3:
        raise InvalidParameters("xi module parameters out of range")
    evens = ([("eps", 0)] if eps else []) + [(f"e{g}", g) for g in range(1, k + 1)] \
        + ([("delta", k + 1)] if delta else [])
    odds = [(f"o{b}", b) for b in range(1, k + 2)]
    labels = [name for name, _ in evens] + [name for name, _ in odds]
    dim = len(labels)
    if dim != 2 * k + eps + delta + 1:
        raise InvalidParameters("dimension bookkeeping failed")
    index = {name: i for i, name in enumerate(labels)}
    field = h.field
    cols = _empty_cols(h, dim)
    names = {g.name: j for j, g in enumerate(h.generators)}
    for a in range(3):
        gen = f"K{a+1}"
        for name, alpha in evens:
            cols[gen][index[name]][index[name]] = h.xi_power(a, v[a] + 2 * alpha)
        for name, beta in odds:
            cols[gen][index[name]][index[name]] = h.xi_power(a, v[a] + 2 * beta - 1)
    xplus, xminus = "X+1", "X-1"
    for name, alpha in evens:
        if name == "eps":
            cols[xplus][index[name]][index["o1"]] = field.one
        elif name == "delta":
            cols[xminus][index[name]][index[f"o{k+1}"]] = field.one
        else:
            cols[xplus][index[name]][index[f"o{alpha+1}"]] = field.one
            cols[xminus][index[name]][index[f"o{alpha}"]] = field.one
    M = ModuleRep(h, dim, cols, labels=labels, name=f"Xi{tuple(v)}_{k}{eps}{delta}")
    if verify:
        ok, wit = M.verify()
        if not ok:
            raise InvalidParameters(f"module law failed at {wit}")
    return M


def sf_xi_module(h, sign, k, eps, delta, verify=True) -> ModuleRep:
    """The Zaitsev-Nikolenko ladder for SF_2: sign picks the L-eigenvalues."""
    if k < 0 or eps not in (0, 1) or delta not in (0, 1):
        raise InvalidParameters("parameters out of range")
    evens = ([("eps", 0)] if eps else []) + [(f"e{g}", g) for g in range(1, k + 1)] \
        + ([("delta", k + 1)] if delta else [])
    odds = [(f"o{b}", b) for b in range(1, k + 2)]
    labels = [n for n, _ in evens] + [n for n, _ in odds]
    dim = len(labels)
    index = {n: i for i, n in enumerate(labels)}
    field = h.field
    one = field.one
    cols = _empty_cols(h, dim)
    ev_val = one if sign > 0 else -one
    for n, _ in evens:
        cols["L"][index[n]][index[n]] = ev_val
    for n, _ in odds:
        cols["L"][index[n]][index[n]] = -ev_val
    for n, alpha in evens:
        if n == "eps":
            cols["Z+1"][index[n]][index["o1"]] = one
        elif n == "delta":
            cols["Z-1"][index[n]][index[f"o{k+1}"]] = one
        else:
            cols["Z+1"][index[n]][index[f"o{alpha+1}"]] = one
            cols["Z-1"][index[n]][index[f"o{alpha}"]] = one
    M = ModuleRep(h, dim, cols, labels=labels, name=f"Xi{'+' if sign>0 else '-'}_{k}{eps}{delta}")
    if verify:
        ok, wit = M.verify()
        if not ok:
            raise InvalidParameters(f"module law failed at {wit}")
    return M


def sf_jordan_module(h, sign, mu, n, verify=True) -> ModuleRep:
    """H^sign_{mu,n} for SF_2: Z+ acts by a Jordan block, Z- diagonally."""
    if n < 1:
        raise InvalidParameters("n must be positive")
    field = h.field
    if not mu:
        raise InvalidParameters("mu must be nonzero")
    mu = field.from_int(mu) if isinstance(mu, int) else mu
    labels = [f"e{a}" for a in range(1, n + 1)] + [f"o{a}" for a in range(1, n + 1)]
    dim = 2 * n
    index = {nm: i for i, nm in enumerate(labels)}
    one = field.one
    cols = _empty_cols(h, dim)
    ev_val = one if sign > 0 else -one
    for a in range(1, n + 1):
        cols["L"][index[f"e{a}"]][index[f"e{a}"]] = ev_val
        cols["L"][index[f"o{a}"]][index[f"o{a}"]] = -ev_val
        cols["Z-1"][index[f"e{a}"]][index[f"o{a}"]] = one if a < n else mu
        cols["Z+1"][index[f"e{a}"]][index[f"o{a}"]] = mu if a < n else mu
        if a < n:
            col = cols["Z+1"][index[f"e{a}"]]
            col[index[f"o{a}"]] = mu
            col[index[f"o{a+1}"]] = one
    # Z- e^a = o^a for a < n and Z- e^n = mu o^n; Z+ e^a = mu o^a + o^{a+1}, Z+ e^n = mu o^n
    for a in range(1, n + 1):
        cols["Z-1"][index[f"e{a}"]] = {index[f"o{a}"]: one if a < n else mu}
        if a < n:
            cols["Z+1"][index[f"e{a}"]] = {index[f"o{a}"]: mu, index[f"o{a+1}"]: one}
        else:
            cols["Z+1"][index[f"e{a}"]] = {index[f"o{a}"]: mu}
    M = ModuleRep(h, dim, cols, labels=labels, name=f"H{'+' if sign>0 else '-'}_{n}")
    if verify:
        ok, wit = M.verify()
        if not ok:
            raise InvalidParameters(f"module law failed at {wit}")
    return M


def lift_to_biproduct(h_big, h_small, M: ModuleRep, k_sign=+1, verify=True) -> ModuleRep:
    """Extend a Nenciu-part module to the biproduct: E, F act as zero and the
    sl2 K acts by +-1 on the L-grading layers (the transparent-lift recipe)."""
    field = h_big.field
    dim = M.dim
    cols = _empty_cols(h_big, dim)
    small_names = [g.name for g in h_small.generators]
    for name in small_names:
        for j in range(dim):
            cols[name][j] = dict(M.cols[name][j])
    # K eigenvalue: k_sign on the even layer, -k_sign on the odd layer, read
    # from the Nenciu grading (the product of the K_a-eigenvalue exponents'
    # parity is what the X-anticommutation sees)
    parity = _layer_parity(h_small, M)
    kv = field.from_int(k_sign)
    for j in range(dim):
        cols["K"][j][j] = kv if parity[j] == 0 else -kv
    Mb = ModuleRep(h_big, dim, cols, labels=M.labels, name=f"lift({M.name})")
    if verify:
        ok, wit = Mb.verify()
        if not ok:
            raise InvalidParameters(f"lift module law failed at {wit}")
    return Mb


def _layer_parity(h_small, M: ModuleRep):
    """Z_2 grading on which the nilpotent letters shift by one (undirected
    closure of the nilpotent action graph, component by component)."""
    nil_names = [h_small.generators[s].name for s in h_small.nil_slots]
    adj = {j: set() for j in range(M.dim)}
    for name in nil_names:
        for j in range(M.dim):
            for i in M.cols[name][j]:
                adj[j].add(i)
                adj[i].add(j)
    parity = {}
    for start in range(M.dim):
        if start in parity:
            continue
        parity[start] = 0
        queue = [start]
        while queue:
            j = queue.pop()
            for i in adj[j]:
                if i not in parity:
                    parity[i] = 1 - parity[j]
                    queue.append(i)
                elif parity[i] == parity[j]:
                    raise InvalidParameters("nilpotent action graph is not bipartite")
    return parity


def product_projective_table(h, sigma, p_tuple, verify=False):
    """The displayed basis/action table for the biproduct projectives of the
    symplectic-fermion biproduct, transcribed literally (index slips and all).

    Returns (ModuleRep, law_report); the caller compares it against the
    generated projective and reports agreement or witnesses.
    """
    field = h.field
    rp = h.rp
    data = h.nenciu
    t = data.t
    import itertools
    rmasks = list(itertools.product(range(2), repeat=t))
    kinds = [("b", n) for n in range(sigma)] + [("a", n) for n in range(sigma)] \
        + [("x", m) for m in range(rp - sigma)] + [("y", m) for m in range(rp - sigma)]
    labels = [(kind, n, r) for r in rmasks for (kind, n) in kinds]
    index = {lab: i for i, lab in enumerate(labels)}
    dim = len(labels)
    cols = _empty_cols(h, dim)
    one = field.one
    q = h.q_power

    def bracket(n):
        return (h.q_power(n) - h.q_power(-n)) / (h.q_power(1) - h.q_power(-1))

    a_par = one  # the "+" member of the pair
    for (kind, n, r) in labels:
        j = index[(kind, n, r)]
        sgn = -one if (sum(r) % 2) else one
        if kind in ("x", "y"):
            cols["K"][j][j] = -sgn * q(rp - sigma - 1 - 2 * n)
        else:
            cols["K"][j][j] = sgn * q(sigma - 1 - 2 * n)
        # E ladder
        if kind == "x" and n >= 1:
            cols["E"][j][index[("x", n - 1, r)]] = -bracket(n) * bracket(rp - sigma - n)
        if kind == "y":
            if n >= 1:
                cols["E"][j][index[("y", n - 1, r)]] = -bracket(n) * bracket(rp - sigma - n)
                cols["E"][j][index[("x", n - 1, r)]] = one
            else:
                cols["E"][j][index[("a", sigma - 1, r)]] = one
        if kind == "a" and n >= 1:
            cols["E"][j][index[("a", n - 1, r)]] = bracket(n) * bracket(sigma - n)
        if kind == "b":
            if n >= 1:
                cols["E"][j][index[("b", n - 1, r)]] = bracket(n) * bracket(sigma - n)
                cols["E"][j][index[("a", n - 1, r)]] = one
            else:
                cols["E"][j][index[("x", rp - sigma - 1, r)]] = one
        # F ladder
        if kind == "x":
            if n <= rp - sigma - 2:
                cols["F"][j][index[("x", n + 1, r)]] = one
            else:
                cols["F"][j][index[("a", 0, r)]] = one
        if kind == "y" and n <= rp - sigma - 2:
            cols["F"][j][index[("y", n + 1, r)]] = one
        if kind == "a" and n <= sigma - 2:
            cols["F"][j][index[("a", n + 1, r)]] = one
        if kind == "b":
            if 1 <= n <= sigma - 2:
                cols["F"][j][index[("b", n + 1, r)]] = one
            elif n == sigma - 1:
                cols["F"][j][index[("y", 0, r)]] = one
        # nilpotent ladders with the displayed sign bookkeeping
        for kk, slot in enumerate(h.nil_slots):
            gen = h.generators[slot].name
            if r[kk]:
                continue
            rbar = tuple(1 if idx == kk else r[idx] for idx in range(t))
            pre = sum(r[:kk])
            tailsign = h.root((h.root_order // 2) * pre)
            if kind == "x":
                val = h.root((h.root_order // 2) * ((n - rp + sigma) % 2)) * tailsign
            elif kind == "y":
                val = h.root((h.root_order // 2) * ((n + sigma - 1) % 2)) * tailsign
            elif kind == "a":
                val = h.root((h.root_order // 2) * ((n + 1) % 2)) * tailsign
            else:
                val = h.root((h.root_order // 2) * (n % 2)) * tailsign
            cols[gen][j][index[(kind, n, rbar)]] = val
        # grouplike part: K_a z^r = xi^{r . d_a} z^r
        for a, slot in enumerate(h.group_slots):
            gen = h.generators[slot].name
            e = sum(data.d[kk][a] for kk in range(t) if r[kk])
            cols[gen][j][j] = h.xi_power(a, e + p_tuple[a] * 0)
    M = ModuleRep(h, dim, cols, labels=labels, name=f"tableP+_{sigma}{p_tuple}")
    law = M.verify()
    return M, law
