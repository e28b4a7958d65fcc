"""Fusion rules for the V^r_p family: theorem prediction vs construction.

The prediction applies the combinatorial formula; the verification builds the
tensor product module, spins the stated generators, certifies the direct sum
by rank additivity, and matches each summand to its predicted type by
fingerprint plus an explicit invertible intertwiner.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product as iproduct

from ..hopfcore import Element
from ..linalg import SpanBasis
from .decompose import Fingerprint, measure_fingerprint
from .idempotents import nenciu_idempotents
from .reps import (ModuleRep, modules_isomorphic, regular_module,
                   submodule_generated, tensor_module)


class PredictionMismatch(Exception):
    pass


def build_v_module(h, r, p, reg=None, idem=None):
    """V^r_p: the submodule of the regular module spun from X^r omega_p."""
    if reg is None:
        reg = regular_module(h)
    if idem is None:
        idem = nenciu_idempotents(h, verify=False)
    om = idem.elements[tuple(p)]
    xr = [0] * h.nslots
    for k, slot in enumerate(h.nil_slots):
        xr[slot] = r[k]
    gen = Element.monomial(h, tuple(xr)) * om
    vec = {h.index_of(m): c for m, c in gen.terms.items()}
    sub, span = submodule_generated(reg, [vec], name=f"V{tuple(r)}_{tuple(p)}")
    return sub, span


def commutation_tuple(h, r):
    """a with K_a X^r = xi^{a_a} X^r K_a (the row sum of d over the mask)."""
    data = h.nenciu
    return tuple(sum(data.d[k][a] for k in range(data.t) if r[k]) % data.m[a]
                 for a in range(data.s))


def fusion_prediction(h, r, p, s, q, corrected=True):
    """Multiset of (mask, eigenvalue) summands from the fusion formula.

    With corrected=True the labels include the commutation shift of X^{r.s}
    (the eigenvalue bookkeeping the displayed formula drops); with False they
    are the formula exactly as displayed, kept for the informative comparison.
    """
    data = h.nenciu
    t = data.t
    a = commutation_tuple(h, r)
    b = commutation_tuple(h, s)
    rs = tuple(ri * si for ri, si in zip(r, s))
    c = commutation_tuple(h, rs) if corrected else tuple([0] * data.s)
    # o selects the k with r_k = s_k = 0
    o = tuple(1 if (r[k] == 0 and s[k] == 0) else 0 for k in range(t))
    out = {}
    for y in iproduct(*[range(2) if o[k] else range(1) for k in range(t)]):
        l = commutation_tuple(h, y)
        label = tuple((p[i] + q[i] - a[i] - b[i] - l[i] + c[i]) % data.m[i]
                      for i in range(data.s))
        key = (rs, label)
        out[key] = out.get(key, 0) + 1
    return out


def fusion(h, r, p, s, q, reg=None, idem=None, check_iso=True):
    """Theorem prediction and constructed decomposition of V^r_p (x) V^s_q."""
    if reg is None:
        reg = regular_module(h)
    if idem is None:
        idem = nenciu_idempotents(h, verify=False)
    data = h.nenciu
    field = h.field
    V, _ = build_v_module(h, r, p, reg, idem)
    W, _ = build_v_module(h, s, q, reg, idem)
    T = tensor_module(h, V, W)
    prediction = fusion_prediction(h, r, p, s, q, corrected=True)
    prediction_displayed = fusion_prediction(h, r, p, s, q, corrected=False)
    # construct: generators (X^y g) (x) h over the allowed index set
    o = tuple(1 if (r[k] == 0 and s[k] == 0) else 0 for k in range(data.t))
    union = SpanBasis(field)
    total = 0
    constructed = {}
    summand_modules = []
    for y in iproduct(*[range(2) if o[k] else range(1) for k in range(data.t)]):
        # inside V, the generator is at coordinate 0; X^y applied there
        yv = {0: field.one}
        for k in reversed(range(data.t)):
            if y[k]:
                name = h.generators[h.nil_slots[k]].name
                yv = V.apply_generator(name, yv)
        gen_vec = {}
        for i, c in yv.items():
            gen_vec[i * W.dim + 0] = c
        sub, span = submodule_generated(T, [gen_vec], name=f"fus{y}")
        for v in span.inserted:
            union.add(v)
        total += sub.dim
        fp = measure_fingerprint(h, sub, 0)
        key = (fp.mask, fp.p)
        constructed[key] = constructed.get(key, 0) + 1
        summand_modules.append((key, sub))
    def shape_multiset(d):
        out = {}
        for (mask, _lbl), v in d.items():
            out[mask] = out.get(mask, 0) + v
        return out

    report = {
        "prediction": prediction,
        "prediction_displayed": prediction_displayed,
        "constructed": constructed,
        "labels_match": prediction == constructed,
        "labels_match_displayed": prediction_displayed == constructed,
        "shapes_match": shape_multiset(prediction) == shape_multiset(constructed),
        "direct_sum": union.dim == total,
        "dims_sum": total == V.dim * W.dim,
    }
    if check_iso:
        ok = True
        for (mask, label), sub in summand_modules:
            ref, _ = build_v_module(h, mask, label, reg, idem)
            if sub.dim != ref.dim or modules_isomorphic(sub, ref) is None:
                ok = False
        report["isomorphism_certified"] = ok
    return report
