"""Maurer-Cartan residuals, gauge action, BCH, obstructions, tangent spaces.

All series (gauge, BCH) are summed exactly; the coefficient algebra's power
filtration certifies termination: every bracket raises the filtration level,
and levels ≥ ν vanish.  Obstruction cocycles use the deterministic lifting
section stored on the small extension; lift-independence is a theorem and is
property-tested with alternate sections rather than assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from . import linalg as la
from .artin import (
    CoefficientAlgebra,
    SmallExtension,
    TensorDgla,
    epsilon_algebra,
    tensor_dgla,
    tensor_map,
)
from .dgla import ConeComplex, Dgla, DglaMorphism, Violation, cone_pair
from .errors import (
    BaseMismatch,
    DegreeMismatch,
    InconsistentInput,
    InvalidInput,
    NotVerifiedMC,
    NotVerifiedTriple,
    TargetMismatch,
)
from .graded import (
    CohomologyResult,
    GradedElement,
    compute_cohomology,
    element_from_vector,
    zero_element,
)

ZERO = Fraction(0)
ONE = Fraction(1)


def _require_degree(x: GradedElement, degree: int, what: str) -> None:
    for (deg, _i), _c in x.coords.items():
        if deg != degree:
            raise DegreeMismatch(f"{what} must be homogeneous of degree {degree}, "
                                 f"found a term in degree {deg}")


def mc_residual(T: TensorDgla, x: GradedElement) -> GradedElement:
    """dx + ½[x,x] for a degree-1 element."""
    _require_degree(x, 1, "Maurer-Cartan candidate")
    return T.differential_of(x) + Fraction(1, 2) * T.bracket(x, x)


def gauge_apply(T: TensorDgla, a: GradedElement, x: GradedElement) -> GradedElement:
    """e^a * x = x + Σ_{n≥0} ad_a^n/(n+1)! ([a,x] − da), summed exactly."""
    _require_degree(a, 0, "gauge parameter")
    _require_degree(x, 1, "gauge target")
    u = T.bracket(a, x) - T.differential_of(a)
    total = x
    term = u
    denom = 1
    n = 0
    while not term.is_zero():
        denom *= n + 1
        total = total + Fraction(1, denom) * term
        term = T.bracket(a, term)
        n += 1
        if n > T.nu + 1:
            raise InvalidInput("gauge series failed to terminate; coefficients not nilpotent")
    return total


def _compositions(weight: int, blocks: int):
    """Sequences of `blocks` pairs (p, q) with p+q ≥ 1 summing to `weight`."""
    if blocks == 0:
        if weight == 0:
            yield ()
        return
    for first in range(1, weight - blocks + 2):
        for p in range(first + 1):
            q = first - p
            for rest in _compositions(weight - first, blocks - 1):
                yield ((p, q),) + rest


def _dynkin_term(T: TensorDgla, a: GradedElement, b: GradedElement,
                 comp: tuple[tuple[int, int], ...]) -> GradedElement:
    """Right-nested bracket word ad_a^{p1} ad_b^{q1} … applied to the last letter."""
    word: list[GradedElement] = []
    for p, q in comp:
        word.extend([a] * p)
        word.extend([b] * q)
    inner = word.pop()
    out = inner
    for letter in reversed(word):
        if out.is_zero():
            return out
        out = T.bracket(letter, out)
    return out


def bch_product(T: TensorDgla, a: GradedElement, b: GradedElement) -> GradedElement:
    """Baker-Campbell-Hausdorff product by the Dynkin series.

    Exact rational coefficients; the series is truncated by the filtration
    certificate (words of weight ≥ ν vanish).  Satisfies e^a e^b = e^{a•b}
    as gauge operators.
    """
    _require_degree(a, 0, "BCH argument")
    _require_degree(b, 0, "BCH argument")
    total = zero_element(T.space, 0)
    max_weight = max(T.nu - 1, 1)
    for w in range(1, max_weight + 1):
        for n in range(1, w + 1):
            for comp in _compositions(w, n):
                term = _dynkin_term(T, a, b, comp)
                if term.is_zero():
                    continue
                denom = n * w
                for p, q in comp:
                    denom *= math.factorial(p) * math.factorial(q)
                sign = 1 if (n - 1) % 2 == 0 else -1
                total = total + Fraction(sign, denom) * term
    return total


@dataclass(frozen=True)
class McElement:
    """Degree-1 element of L ⊗ m_A; verified means the MC residual vanishes."""

    tensor: TensorDgla
    element: GradedElement
    verified: bool = False


def mc_element(T: TensorDgla, x: GradedElement) -> McElement:
    """Verify the Maurer-Cartan equation and wrap the element."""
    res = mc_residual(T, x)
    if not res.is_zero():
        raise NotVerifiedMC(f"MC residual is nonzero: {res.pretty()}")
    return McElement(T, x, True)


def stabilizer_element(x: McElement, hparam: GradedElement) -> GradedElement:
    """a = dh + [x, h] for h of degree −1; fixes x under the gauge action."""
    if not x.verified:
        raise NotVerifiedMC("stabilizer_element requires a verified MC element")
    T = x.tensor
    _require_degree(hparam, -1, "stabilizer parameter")
    a = T.differential_of(hparam) + T.bracket(x.element, hparam)
    if gauge_apply(T, a, x.element) != x.element:
        raise InvalidInput("internal: stabilizer element does not fix x")
    return a


# --- single obstruction ------------------------------------------------------


@dataclass(frozen=True)
class ObstructionClass:
    """Class in H^degree(complex) ⊗ J, with the raw cocycle that produced it."""

    cohomology: CohomologyResult
    degree: int
    kernel_labels: tuple[str, ...]
    coords: tuple[tuple[Fraction, ...], ...]  # one coordinate vector per J basis vector
    cocycle: object

    def is_zero(self) -> bool:
        return all(c == 0 for vec in self.coords for c in vec)

    def label_map(self) -> dict[str, Fraction]:
        """Nonzero class coordinates keyed 'representative-label@J-label'."""
        out: dict[str, Fraction] = {}
        for j, vec in enumerate(self.coords):
            jlab = self.kernel_labels[j]
            for r, c in enumerate(vec):
                if c == 0:
                    continue
                rep = self.cohomology.representative(self.degree, r)
                deg, idx, lead = next(iter(rep.terms()))
                rep_label = rep.space.label(deg, idx)
                out[f"{rep_label}@{jlab}"] = c
        return out


class NoLift:
    """Sentinel: the obstruction class is nonzero, no lift exists."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NoLift"


NO_LIFT = NoLift()


def _section_matrix(ext: SmallExtension, section: la.Matrix | None) -> la.Matrix:
    if section is None:
        return ext.section
    if len(section) != ext.B.dim or any(len(r) != ext.A.dim for r in section):
        raise InvalidInput("alternate section has the wrong shape")
    if la.mat_mul(ext.alpha, section) != la.identity(ext.A.dim):
        raise InvalidInput("alternate section is not a right inverse of alpha")
    return section


def _j_components(T: TensorDgla, ext: SmallExtension,
                  x: GradedElement) -> list[GradedElement]:
    """Factor elements x_j with x = Σ_j x_j ⊗ J_j; error if x ∉ L ⊗ J."""
    by_l: dict[tuple[int, int], dict[int, Fraction]] = {}
    for (deg, idx), c in x.coords.items():
        ldeg, lidx, ai = T.from_tensor[(deg, idx)]
        by_l.setdefault((ldeg, lidx), {})[ai] = c
    out: list[dict[tuple[int, int], Fraction]] = [dict() for _ in range(ext.kernel_dim)]
    for lkey, bvec in by_l.items():
        coords = ext.kernel_coords(bvec)
        if coords is None:
            raise InvalidInput("cocycle does not lie in ⊗J; extension data inconsistent")
        for j, c in enumerate(coords):
            if c != 0:
                out[j][lkey] = c
    return [GradedElement(T.factor.space, d) for d in out]


def _tensor_with_kernel(T_B: TensorDgla, ext: SmallExtension,
                        parts: Iterable[GradedElement]) -> GradedElement:
    """Σ_j parts_j ⊗ J_j inside the B-tensor."""
    total = zero_element(T_B.space)
    for j, part in enumerate(parts):
        for b_idx, c in enumerate(ext.kernel[j]):
            if c == 0:
                continue
            total = total + c * T_B.pure(part, b_idx)
    return total


def obstruction_single(ext: SmallExtension, x: McElement, *,
                       section: la.Matrix | None = None,
                       tensor_B: TensorDgla | None = None,
                       cohomology: CohomologyResult | None = None) -> ObstructionClass:
    """Obstruction class in H²(L) ⊗ J to lifting x along the small extension."""
    if not x.verified:
        raise NotVerifiedMC("obstruction_single requires a verified MC element")
    if x.tensor.coeff != ext.A:
        raise BaseMismatch("element does not live over the extension's target")
    L = x.tensor.factor
    T_B = tensor_B if tensor_B is not None else tensor_dgla(L, ext.B)
    sec = _section_matrix(ext, section)
    lifted = x.tensor.map_coefficients(x.element, sec, T_B)
    cocycle = mc_residual(T_B, lifted)
    parts = _j_components(T_B, ext, cocycle)
    H = cohomology if cohomology is not None else compute_cohomology(L.complex)
    coords = []
    for part in parts:
        if not L.differential_of(part).is_zero():
            raise InvalidInput("internal: obstruction cocycle is not a cycle")
        coords.append(tuple(H.class_of(part, degree=2)))
    jlabels = tuple(ext.kernel_label(j) for j in range(ext.kernel_dim))
    return ObstructionClass(H, 2, jlabels, tuple(coords), cocycle)


def lift_if_unobstructed(ext: SmallExtension, x: McElement, cls: ObstructionClass,
                         *, tensor_B: TensorDgla | None = None):
    """Constructive lift x̄ = x̃ − q when the class vanishes; NoLift otherwise."""
    if not x.verified:
        raise NotVerifiedMC("lift_if_unobstructed requires a verified MC element")
    L = x.tensor.factor
    T_B = tensor_B if tensor_B is not None else tensor_dgla(L, ext.B)
    recomputed = obstruction_single(ext, x, tensor_B=T_B, cohomology=cls.cohomology)
    if recomputed.coords != cls.coords:
        raise InconsistentInput("class does not match the recomputed cocycle projection")
    if not cls.is_zero():
        return NO_LIFT
    lifted = x.tensor.map_coefficients(x.element, ext.section, T_B)
    cocycle = mc_residual(T_B, lifted)
    parts = _j_components(T_B, ext, cocycle)
    q_parts = []
    for part in parts:
        if part.is_zero():
            q_parts.append(zero_element(L.space, 1))
            continue
        dmat = L.complex.d.matrix(1)
        sol = la.solve(dmat, part.component_vector(2), cols=L.space.dim(1))
        if sol is None:
            raise InvalidInput("internal: vanishing class but dq = h unsolvable")
        q_parts.append(element_from_vector(L.space, 1, sol))
    q = _tensor_with_kernel(T_B, ext, q_parts)
    lifted_mc = lifted - q
    out = mc_element(T_B, lifted_mc)
    if T_B.map_coefficients(lifted_mc, ext.alpha, x.tensor) != x.element:
        raise InvalidInput("internal: lift does not project to x")
    return out


# --- pair functor ------------------------------------------------------------


@dataclass(frozen=True)
class PairSetting:
    """A pair (h, g) tensored with one coefficient algebra."""

    h: DglaMorphism
    g: DglaMorphism
    coeff: CoefficientAlgebra
    tL: TensorDgla
    tN: TensorDgla
    tM: TensorDgla
    h_tensor: object  # GradedMap on tensors
    g_tensor: object

    def apply_h(self, x: GradedElement) -> GradedElement:
        return self.h_tensor.apply(x)

    def apply_g(self, y: GradedElement) -> GradedElement:
        return self.g_tensor.apply(y)

    def __eq__(self, other):
        if not isinstance(other, PairSetting):
            return NotImplemented
        return (self.h, self.g, self.coeff) == (other.h, other.g, other.coeff)

    __hash__ = None


def pair_setting(h: DglaMorphism, g: DglaMorphism, A: CoefficientAlgebra) -> PairSetting:
    if h.target != g.target:
        raise TargetMismatch("h and g must share their target")
    tL = tensor_dgla(h.source, A)
    tN = tensor_dgla(g.source, A)
    tM = tensor_dgla(h.target, A)
    return PairSetting(h, g, A, tL, tN, tM,
                       tensor_map(h.map, tL, tM), tensor_map(g.map, tN, tM))


@dataclass(frozen=True)
class McTriple:
    """(x, y, e^p) for the pair functor; verified means both MC equations and
    the linking equation g(y) = e^p * h(x) hold."""

    setting: PairSetting
    x: GradedElement
    y: GradedElement
    p: GradedElement
    verified: bool = False


def mc_pair_check(setting: PairSetting, x: GradedElement, y: GradedElement,
                  p: GradedElement) -> tuple[McTriple, list[Violation]]:
    """Verify the two MC residuals and the gauge-linking equation exactly."""
    report: list[Violation] = []
    _require_degree(x, 1, "first component")
    _require_degree(y, 1, "second component")
    _require_degree(p, 0, "linking exponent")
    rx = mc_residual(setting.tL, x)
    if not rx.is_zero():
        report.append(Violation("mc_first", ("x",), f"residual {rx.pretty()}"))
    ry = mc_residual(setting.tN, y)
    if not ry.is_zero():
        report.append(Violation("mc_second", ("y",), f"residual {ry.pretty()}"))
    link = setting.apply_g(y) - gauge_apply(setting.tM, p, setting.apply_h(x))
    if not link.is_zero():
        report.append(Violation("linking", ("x", "y", "p"),
                                f"g(y) − e^p*h(x) = {link.pretty()}"))
    return McTriple(setting, x, y, p, not report), report


def mc_triple(setting: PairSetting, x: GradedElement, y: GradedElement,
              p: GradedElement) -> McTriple:
    triple, report = mc_pair_check(setting, x, y, p)
    if report:
        raise NotVerifiedTriple("; ".join(str(v) for v in report))
    return triple


def gauge_apply_pair(a: GradedElement, b: GradedElement, t: McTriple) -> McTriple:
    """(e^a, e^b) * (x, y, e^p) = (e^a*x, e^b*y, e^{g(b)} e^p e^{−h(a)})."""
    if not t.verified:
        raise NotVerifiedTriple("gauge_apply_pair requires a verified triple")
    s = t.setting
    _require_degree(a, 0, "first gauge parameter")
    _require_degree(b, 0, "second gauge parameter")
    x2 = gauge_apply(s.tL, a, t.x)
    y2 = gauge_apply(s.tN, b, t.y)
    p2 = bch_product(s.tM, s.apply_g(b), bch_product(s.tM, t.p, -s.apply_h(a)))
    return mc_triple(s, x2, y2, p2)


def extended_equiv_verify(t1: McTriple, t2: McTriple, a: GradedElement,
                          b: GradedElement, c: GradedElement) -> list[Violation]:
    """Witness check for the extended relation ≈ with stabilizer factor
    T = dc + [g(y₁), c]: verifies the three equations exactly."""
    s = t1.setting
    if t2.setting != s:
        raise BaseMismatch("triples live over different pair settings")
    report: list[Violation] = []
    _require_degree(c, -1, "stabilizer parameter")
    if gauge_apply(s.tL, a, t1.x) != t2.x:
        report.append(Violation("equiv_first", ("a",), "x₂ ≠ e^a * x₁"))
    if gauge_apply(s.tN, b, t1.y) != t2.y:
        report.append(Violation("equiv_second", ("b",), "y₂ ≠ e^b * y₁"))
    gy1 = s.apply_g(t1.y)
    stab = s.tM.differential_of(c) + s.tM.bracket(gy1, c)
    expected = bch_product(
        s.tM, s.apply_g(b),
        bch_product(s.tM, stab, bch_product(s.tM, t1.p, -s.apply_h(a))))
    if expected != t2.p:
        report.append(Violation("equiv_linking", ("a", "b", "c"),
                                "e^{p₂} ≠ e^{g(b)} e^T e^{p₁} e^{−h(a)}"))
    return report


@dataclass(frozen=True)
class PairObstructionClass(ObstructionClass):
    """Obstruction in H²(C_{(h,g)}) ⊗ J; cocycle is the triple (l, k, r)."""

    cone: ConeComplex = None


def obstruction_pair(ext: SmallExtension, t: McTriple, *,
                     section: la.Matrix | None = None,
                     setting_B: PairSetting | None = None,
                     cone: ConeComplex | None = None,
                     cohomology: CohomologyResult | None = None) -> PairObstructionClass:
    """Obstruction class of a verified triple along a small extension.

    Lifts (x, y, p) by the extension's section, forms the cocycle
    (l, k, r) with r = −g(ỹ) + e^q * h(x̃), checks it is a D-cycle, and
    projects into H²(C_{(h,g)}) ⊗ J.
    """
    if not t.verified:
        raise NotVerifiedTriple("obstruction_pair requires a verified triple")
    s = t.setting
    if s.coeff != ext.A:
        raise BaseMismatch("triple does not live over the extension's target")
    sB = setting_B if setting_B is not None else pair_setting(s.h, s.g, ext.B)
    sec = _section_matrix(ext, section)
    xt = s.tL.map_coefficients(t.x, sec, sB.tL)
    yt = s.tN.map_coefficients(t.y, sec, sB.tN)
    q = s.tM.map_coefficients(t.p, sec, sB.tM)
    l = mc_residual(sB.tL, xt)
    k = mc_residual(sB.tN, yt)
    r = -sB.apply_g(yt) + gauge_apply(sB.tM, q, sB.apply_h(xt))
    l_parts = _j_components(sB.tL, ext, l)
    k_parts = _j_components(sB.tN, ext, k)
    r_parts = _j_components(sB.tM, ext, r)

    L, N, M = s.h.source, s.g.source, s.h.target
    the_cone = cone if cone is not None else cone_pair(s.h, s.g)
    H = cohomology if cohomology is not None else compute_cohomology(the_cone.complex)
    coords = []
    for lj, kj, rj in zip(l_parts, k_parts, r_parts):
        if not L.differential_of(lj).is_zero() or not N.differential_of(kj).is_zero():
            raise InvalidInput("internal: obstruction cocycle is not a cycle")
        cyc = -M.differential_of(rj) - s.g.apply(kj) + s.h.apply(lj)
        if not cyc.is_zero():
            raise InvalidInput("internal: −dr − g(k) + h(l) ≠ 0")
        cone_elem = (the_cone.embed("L", lj) + the_cone.embed("N", kj)
                     + the_cone.embed("M", rj))
        coords.append(tuple(H.class_of(cone_elem, degree=2)))
    jlabels = tuple(ext.kernel_label(j) for j in range(ext.kernel_dim))
    return PairObstructionClass(H, 2, jlabels, tuple(coords), (l, k, r), the_cone)


def lift_pair_if_unobstructed(ext: SmallExtension, t: McTriple,
                              cls: PairObstructionClass, *,
                              setting_B: PairSetting | None = None):
    """Constructive lift (x̃−u, ỹ−v, q−z) when the class vanishes."""
    if not t.verified:
        raise NotVerifiedTriple("lift_pair_if_unobstructed requires a verified triple")
    s = t.setting
    sB = setting_B if setting_B is not None else pair_setting(s.h, s.g, ext.B)
    the_cone = cls.cone
    recomputed = obstruction_pair(ext, t, setting_B=sB, cone=the_cone,
                                  cohomology=cls.cohomology)
    if recomputed.coords != cls.coords:
        raise InconsistentInput("class does not match the recomputed cocycle projection")
    if not cls.is_zero():
        return NO_LIFT
    xt = s.tL.map_coefficients(t.x, ext.section, sB.tL)
    yt = s.tN.map_coefficients(t.y, ext.section, sB.tN)
    q = s.tM.map_coefficients(t.p, ext.section, sB.tM)
    l = mc_residual(sB.tL, xt)
    k = mc_residual(sB.tN, yt)
    r = -sB.apply_g(yt) + gauge_apply(sB.tM, q, sB.apply_h(xt))
    l_parts = _j_components(sB.tL, ext, l)
    k_parts = _j_components(sB.tN, ext, k)
    r_parts = _j_components(sB.tM, ext, r)
    cone_cx = the_cone.complex
    u_parts, v_parts, z_parts = [], [], []
    for lj, kj, rj in zip(l_parts, k_parts, r_parts):
        target = (the_cone.embed("L", lj) + the_cone.embed("N", kj)
                  + the_cone.embed("M", rj))
        dmat = cone_cx.d.matrix(1)
        sol = la.solve(dmat, target.component_vector(2), cols=cone_cx.space.dim(1))
        if sol is None:
            raise InvalidInput("internal: vanishing class but D(u,v,z) = (l,k,r) unsolvable")
        w = element_from_vector(cone_cx.space, 1, sol)
        u_parts.append(the_cone.project("L", w))
        v_parts.append(the_cone.project("N", w))
        z_parts.append(the_cone.project("M", w))
    xbar = xt - _tensor_with_kernel(sB.tL, ext, u_parts)
    ybar = yt - _tensor_with_kernel(sB.tN, ext, v_parts)
    pbar = q - _tensor_with_kernel(sB.tM, ext, z_parts)
    out = mc_triple(sB, xbar, ybar, pbar)
    if sB.tL.map_coefficients(xbar, ext.alpha, s.tL) != t.x or \
       sB.tN.map_coefficients(ybar, ext.alpha, s.tN) != t.y or \
       sB.tM.map_coefficients(pbar, ext.alpha, s.tM) != t.p:
        raise InvalidInput("internal: lifted triple does not project to the input")
    return out


# --- gauge equivalence decision ----------------------------------------------


@dataclass(frozen=True)
class Equivalent:
    witness: GradedElement


@dataclass(frozen=True)
class NotEquivalent:
    reason: str


@dataclass(frozen=True)
class Undecided:
    reason: str


class _Budget:
    def __init__(self, nodes: int):
        self.remaining = nodes

    def spend(self) -> bool:
        self.remaining -= 1
        return self.remaining >= 0


def _kernel_ball(particular: la.Vector, kernel: list[la.Vector], radius: int):
    """particular + integer combinations of kernel vectors, by growing L∞ shell."""
    yield particular
    if not kernel:
        return
    from itertools import product

    for r in range(1, radius + 1):
        for coeffs in product(range(-r, r + 1), repeat=len(kernel)):
            if max(abs(c) for c in coeffs) != r:
                continue
            vec = list(particular)
            for c, k in zip(coeffs, kernel):
                if c:
                    vec = [v + c * kv for v, kv in zip(vec, k)]
            yield vec


def gauge_equiv_decide(x: McElement, y: McElement, budget: int = 2000,
                       radius: int = 3,
                       cancel: Callable[[], bool] | None = None):
    """Staged decision of gauge equivalence along the m_A-power filtration.

    Level 1 is a linear system (its infeasibility is a sound NotEquivalent
    certificate); at each deeper level the condition is affine-linear in the
    new unknown given earlier choices, and kernel freedoms are carried and
    backtracked as integer combinations within the node budget.  Returns
    Equivalent(witness) with gauge_apply(witness, x) = y verified,
    NotEquivalent, or Undecided on budget/cancel exhaustion.
    """
    if x.tensor != y.tensor:
        raise BaseMismatch("elements live over different tensor DGLAs")
    if not (x.verified and y.verified):
        raise NotVerifiedMC("gauge_equiv_decide requires verified MC elements")
    T = x.tensor
    space = T.space

    def keys_at(degree: int, level: int) -> list[tuple[int, int]]:
        return [(degree, i) for i in range(space.dim(degree))
                if T.levels[(degree, i)] == level]

    levels = sorted({lvl for lvl in T.levels.values()})
    unknown_keys = {lvl: keys_at(0, lvl) for lvl in levels}
    row_keys = {lvl: keys_at(1, lvl) for lvl in levels}

    # level-k system matrix: d restricted to (level-k deg-0) -> (level-k deg-1)
    d0 = T.dgla.complex.d.matrix(0)
    sys_mats = {}
    for lvl in levels:
        cols = unknown_keys[lvl]
        rows = row_keys[lvl]
        sys_mats[lvl] = [[d0[rk[1]][ck[1]] if space.dim(1) else ZERO for ck in cols]
                         for rk in rows]

    budget_box = _Budget(budget)
    out_of_budget = []

    def attempt(level_idx: int, a_cur: GradedElement):
        if cancel is not None and cancel():
            out_of_budget.append("cancelled")
            return None
        if level_idx == len(levels):
            if gauge_apply(T, a_cur, x.element) == y.element:
                return a_cur
            return None
        lvl = levels[level_idx]
        cols = unknown_keys[lvl]
        rows = row_keys[lvl]
        current = gauge_apply(T, a_cur, x.element)
        rhs = [(current - y.element).coords.get(rk, ZERO) for rk in rows]
        if not cols:
            if any(c != 0 for c in rhs):
                return "infeasible"
            return attempt(level_idx + 1, a_cur)
        mat = sys_mats[lvl]
        particular = la.solve(mat, rhs, cols=len(cols))
        if particular is None:
            return "infeasible"
        kernel = la.nullspace(mat, cols=len(cols))
        for cand in _kernel_ball(particular, kernel, radius):
            if not budget_box.spend():
                out_of_budget.append("budget")
                return None
            a_next = a_cur + GradedElement(
                space, {ck: cand[i] for i, ck in enumerate(cols)}, 0)
            got = attempt(level_idx + 1, a_next)
            if isinstance(got, GradedElement):
                return got
            if got == "infeasible" and not kernel:
                # no freedom at this level: deeper infeasibility propagates
                return None
        return None

    result = attempt(0, zero_element(space, 0))
    if isinstance(result, GradedElement):
        if gauge_apply(T, result, x.element) != y.element:
            raise InvalidInput("internal: witness validation failed")
        return Equivalent(result)
    if result == "infeasible":
        return NotEquivalent("level-1 linear system y − x ≡ −da (mod m²) is infeasible")
    if out_of_budget:
        return Undecided(f"search stopped: {out_of_budget[0]}")
    return Undecided("no witness found within the explored kernel perturbations")


# --- tangent dimensions -------------------------------------------------------


def tangent_dim_single(L: Dgla, shift_n: int = 0) -> int:
    """dim H^{1+n}(L), asserted equal to the direct MC/gauge computation
    over K·ε with deg ε = −n."""
    via_cohomology = compute_cohomology(L.complex).dim(1 + shift_n)
    T = tensor_dgla(L, epsilon_algebra(shift_n))
    d1 = T.dgla.complex.d.matrix(1)
    d0 = T.dgla.complex.d.matrix(0)
    solutions = T.space.dim(1) - la.rank(d1)
    direct = solutions - la.rank(d0)
    if direct != via_cohomology:
        raise InvalidInput(
            f"tangent computations disagree: H gives {via_cohomology}, MC/gauge gives {direct}")
    return direct


def tangent_dim_pair(h: DglaMorphism, g: DglaMorphism, shift_n: int = 0) -> int:
    """dim H^{1+n}(C_{(h,g)}), asserted equal to the direct MC/gauge count."""
    cone = cone_pair(h, g)
    via_cohomology = compute_cohomology(cone.complex).dim(1 + shift_n)

    s = pair_setting(h, g, epsilon_algebra(shift_n))
    nx, ny, np_ = s.tL.space.dim(1), s.tN.space.dim(1), s.tM.space.dim(0)
    rows_x, rows_y, rows_m = s.tL.space.dim(2), s.tN.space.dim(2), s.tM.space.dim(1)
    cols = nx + ny + np_
    eq = la.zeros(rows_x + rows_y + rows_m, cols)
    dL = s.tL.dgla.complex.d.matrix(1)
    dN = s.tN.dgla.complex.d.matrix(1)
    dM = s.tM.dgla.complex.d.matrix(0)
    hm = s.h_tensor.matrix(1)
    gm = s.g_tensor.matrix(1)
    for r in range(rows_x):
        for c in range(nx):
            eq[r][c] = dL[r][c]
    for r in range(rows_y):
        for c in range(ny):
            eq[rows_x + r][nx + c] = dN[r][c]
    for r in range(rows_m):
        for c in range(nx):
            eq[rows_x + rows_y + r][c] = hm[r][c]
        for c in range(ny):
            eq[rows_x + rows_y + r][nx + c] = -gm[r][c]
        for c in range(np_):
            eq[rows_x + rows_y + r][nx + ny + c] = -dM[r][c]
    solutions = cols - la.rank(eq)

    na, nb = s.tL.space.dim(0), s.tN.space.dim(0)
    nc = s.tM.space.dim(-1)
    gauge = la.zeros(cols, na + nb + nc)
    dL0 = s.tL.dgla.complex.d.matrix(0)
    dN0 = s.tN.dgla.complex.d.matrix(0)
    dMm1 = s.tM.dgla.complex.d.matrix(-1)
    h0 = s.h_tensor.matrix(0)
    g0 = s.g_tensor.matrix(0)
    for r in range(nx):
        for c in range(na):
            gauge[r][c] = -dL0[r][c]
    for r in range(ny):
        for c in range(nb):
            gauge[nx + r][na + c] = -dN0[r][c]
    for r in range(np_):
        for c in range(na):
            gauge[nx + ny + r][c] = -h0[r][c]
        for c in range(nb):
            gauge[nx + ny + r][na + c] = g0[r][c]
        for c in range(nc):
            gauge[nx + ny + r][na + nb + c] = dMm1[r][c]
    direct = solutions - la.rank(gauge)
    if direct != via_cohomology:
        raise InvalidInput(
            f"tangent computations disagree: H gives {via_cohomology}, MC/gauge gives {direct}")
    return direct
