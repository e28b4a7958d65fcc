"""Bundled algebra families: presentation, R-matrix, ribbon element, paper data.

One place that knows, for each shipped example, which z-matrix and exponential
tail to use, how to assemble the ribbon element, and what the closed-form
integrals look like.  The ribbon element for the small quantum group is the
verified one (K^{-1} u); the displayed double-sum form is also assembled for
an informative comparison, since it fails the ribbon axioms as printed.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .hopfcore import Element
from .presentations import AlgebraHandle, build, preset_spec
from .quasitriangular import RMatrix, RMatrixSpec, build_R, drinfeld, trivial_R
from .ribbon import embed_nenciu_element, nenciu_ribbon, uqsl2_ribbon_factor

Z_SF = ((1,),)
Z_N1 = ((2, 3), (1, 0))
Z_N2 = ((0, 3, 2), (1, 0, 0), (2, 0, 2))


def _alpha_all_pairs(data, value=1):
    return {i: value for i in range(len(data.opposite_pairs))}


def _alpha_z_pairs_n2(t1, t2, value=1):
    return {t1 + l: value for l in range(t2)}


@dataclass
class FamilyBundle:
    name: str
    handle: AlgebraHandle
    R: RMatrix
    ribbon: Element = None
    ribbon_displayed: Element = None
    u: Element = None
    u_inverse: Element = None
    drinfeld_checks: dict = dc_field(default_factory=dict)
    nenciu_handle: AlgebraHandle = None
    alpha: dict = dc_field(default_factory=dict)
    notes: dict = dc_field(default_factory=dict)


def _nenciu_part_R(name, h_small):
    if "sf" in name or name == "triple_p3":
        return build_R(h_small, RMatrixSpec.make(z=Z_SF, alpha=_alpha_all_pairs(h_small.nenciu)))
    if name.endswith("n1"):
        return build_R(h_small, RMatrixSpec.make(z=Z_N1))
    if name.endswith("n2"):
        return build_R(h_small, RMatrixSpec.make(z=Z_N2, alpha=_alpha_z_pairs_n2(1, 1)))
    raise ValueError(name)


def make_bundle(name, char=0, with_drinfeld=True) -> FamilyBundle:
    name = name.lower()
    spec = preset_spec(name, char=char)
    h = build(spec)
    alpha = {}
    if name.startswith("sf"):
        alpha = _alpha_all_pairs(h.nenciu)
        R = build_R(h, RMatrixSpec.make(z=Z_SF, alpha=alpha))
        v = nenciu_ribbon(h, alpha)
        b = FamilyBundle(name, h, R, ribbon=v, alpha=alpha)
    elif name == "n1":
        R = build_R(h, RMatrixSpec.make(z=Z_N1))
        b = FamilyBundle(name, h, R, ribbon=Element.unit(h))
    elif name == "n2":
        alpha = _alpha_z_pairs_n2(1, 1)
        R = build_R(h, RMatrixSpec.make(z=Z_N2, alpha=alpha))
        b = FamilyBundle(name, h, R, ribbon=nenciu_ribbon(h, alpha), alpha=alpha)
    elif name == "uqsl2":
        R = build_R(h, RMatrixSpec.make(include_D_Theta=True))
        b = FamilyBundle(name, h, R)
        u, uinv, checks = drinfeld(h, R)
        kinv = [0] * h.nslots
        kinv[2] = h.rp - 1
        b.ribbon = Element.monomial(h, tuple(kinv)) * u
        b.ribbon_displayed = uqsl2_ribbon_factor(h)
        b.u, b.u_inverse, b.drinfeld_checks = u, uinv, checks
        return b
    elif name in ("uqsl2xsf2", "uqsl2xn1", "uqsl2xn2", "triple_p3"):
        if name == "uqsl2xsf2":
            small = "sf2"
            alpha = {0: 1}
            zmat = Z_SF
        elif name == "uqsl2xn1":
            small = "n1"
            alpha = {}
            zmat = Z_N1
        elif name == "uqsl2xn2":
            small = "n2"
            alpha = _alpha_z_pairs_n2(1, 1)
            zmat = Z_N2
        else:
            small = f"sf{2 * spec.p}"
            alpha = _alpha_all_pairs(h.nenciu)
            zmat = Z_SF
        R = build_R(h, RMatrixSpec.make(z=zmat, alpha=alpha,
                                        include_D_Theta=True, use_barred_tail=True))
        b = FamilyBundle(name, h, R, alpha=alpha)
        h_small = build(preset_spec(small, char=char), field=h.field)
        b.nenciu_handle = h_small
        if with_drinfeld:
            u_H, _, _ = drinfeld(h_small, _nenciu_part_R(name, h_small))
            u_U, _, _ = drinfeld(h, build_R(h, RMatrixSpec.make(include_D_Theta=True)))
            kinv = [0] * h.nslots
            kinv[2] = h.rp - 1
            b.ribbon = Element.monomial(h, tuple(kinv)) * u_U * embed_nenciu_element(h, h_small, u_H)
            # the form as displayed: double sum times the Nenciu pivotal and tail
            b.ribbon_displayed = uqsl2_ribbon_factor(h) * embed_nenciu_element(h, h_small, u_H)
    elif name == "s3_group":
        R = trivial_R(h)
        b = FamilyBundle(name, h, R, ribbon=Element.unit(h))
    else:
        raise ValueError(f"unknown family {name}")
    return b


# -- closed-form integral data (for up-to-scalar cross-checks) -------------------


def closed_form_cointegral(bundle: FamilyBundle) -> Element:
    """The cointegral as displayed for the family, without the 1/sqrt
    normalizations (cross-checks are up to one global scalar anyway)."""
    h = bundle.handle
    name = bundle.name
    unit = h.unit

    def group_sum_all():
        out = {}
        data = h.nenciu
        if data is None:
            return {unit: h.field.one}
        idx = [0] * len(h.group_slots)
        while True:
            exp = [0] * h.nslots
            for a, slot in enumerate(h.group_slots):
                exp[slot] = idx[a]
            out[tuple(exp)] = h.field.one
            for a in range(len(idx)):
                idx[a] += 1
                if idx[a] < data.m[a]:
                    break
                idx[a] = 0
            else:
                break
        return out

    def top_nilpotent():
        exp = [0] * h.nslots
        for s in h.nil_slots:
            exp[s] = 1
        return tuple(exp)

    if name in ("sf2", "sf4", "sf6", "n1", "n2"):
        return Element(h, group_sum_all()) * Element.monomial(h, top_nilpotent())
    if name == "uqsl2":
        out = Element.zero(h)
        for a in range(h.rp):
            out = out + Element.monomial(h, (h.rp - 1, h.rp - 1, a))
        return out
    if name in ("uqsl2xsf2", "uqsl2xn1", "uqsl2xn2", "triple_p3"):
        out = Element.zero(h)
        ef = [0] * h.nslots
        ef[0] = h.rp - 1
        ef[1] = h.rp - 1
        for a in range(h.rp):
            e2 = list(ef)
            e2[2] = a
            out = out + Element.monomial(h, tuple(e2))
        out = out * Element(h, group_sum_all()) * Element.monomial(h, top_nilpotent())
        if h.perm_slot is not None:
            sig_sum = Element.zero(h)
            for t in range(h.generators[h.perm_slot].order):
                e3 = [0] * h.nslots
                e3[h.perm_slot] = t
                sig_sum = sig_sum + Element.monomial(h, tuple(e3))
            out = out * sig_sum
        return out
    if name == "s3_group":
        out = Element.zero(h)
        for t in range(h.dimension):
            out = out + Element.monomial(h, h.exp_of(t))
        return out
    raise ValueError(name)


def closed_form_integral_support(bundle: FamilyBundle):
    """The unique basis monomial carrying the displayed integral."""
    h = bundle.handle
    exp = [0] * h.nslots
    if h.sl2_slots:
        exp[0] = h.rp - 1
        exp[1] = h.rp - 1
        exp[2] = h.rp - 1
    for s in h.nil_slots:
        exp[s] = 1
    if bundle.name == "s3_group":
        return h.unit
    return tuple(exp)
