"""DGLA structures, morphisms, axiom validation, and mapping cones.

Bracket structure constants are stored only for canonically ordered basis
pairs ((i,p) <= (j,q) lexicographically); the other order is derived from
graded antisymmetry.  The cone differential follows the convention tagged
"iacono-cone-v1": D(l,n,m) = (dl, dn, −dm − g(n) + h(l)), with −d on the
M-part.  Cones are plain complexes; no bracket is ever defined on them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from . import linalg as la
from .errors import (
    DegreeWindowViolation,
    InvalidInput,
    NotInjective,
    TargetMismatch,
    WindowTooSmall,
)
from .graded import (
    ChainComplex,
    GradedElement,
    GradedMap,
    GradedSpace,
    basis_element,
    direct_sum,
    element_from_vector,
    hom_complex,
    map_from_basis_images,
    identity_map,
    zero_complex,
    zero_element,
    zero_map,
)

ZERO = Fraction(0)
ONE = Fraction(1)

BasisKey = tuple[int, int]  # (degree, index)


def koszul_sign(i: int, j: int) -> Fraction:
    return ONE if (i * j) % 2 == 0 else -ONE


@dataclass(frozen=True)
class Violation:
    """One failed axiom instance with its witnessing basis tuple."""

    axiom: str
    witness: tuple[str, ...]
    detail: str = ""

    def __str__(self):
        where = ", ".join(self.witness)
        msg = f"{self.axiom} violated at ({where})"
        return f"{msg}: {self.detail}" if self.detail else msg


@dataclass(frozen=True)
class Dgla:
    """Chain complex plus bracket structure constants on canonical pairs."""

    complex: ChainComplex
    brackets: Mapping[tuple[BasisKey, BasisKey], GradedElement] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (a, b), val in self.brackets.items():
            if b < a:
                raise InvalidInput(f"non-canonical bracket key {(a, b)}")
            if val.space != self.space:
                raise InvalidInput("bracket value lives in a different space")
            if not val.is_zero():
                clean[(a, b)] = val
        object.__setattr__(self, "brackets", clean)

    @property
    def space(self) -> GradedSpace:
        return self.complex.space

    @property
    def d(self) -> GradedMap:
        return self.complex.d

    def differential_of(self, x: GradedElement) -> GradedElement:
        return self.complex.d.apply(x)

    def bracket_basis(self, a: BasisKey, b: BasisKey) -> GradedElement:
        if b < a:
            stored = self.brackets.get((b, a))
            if stored is None:
                return zero_element(self.space)
            return (-koszul_sign(a[0], b[0])) * stored
        stored = self.brackets.get((a, b))
        if stored is None:
            return zero_element(self.space)
        return stored

    def bracket(self, x: GradedElement, y: GradedElement) -> GradedElement:
        out = zero_element(self.space)
        for (i, p), cx in x.coords.items():
            for (j, q), cy in y.coords.items():
                base = self.bracket_basis((i, p), (j, q))
                if not base.is_zero():
                    out = out + (cx * cy) * base
        return out

    def is_abelian(self) -> bool:
        return not self.brackets

    def __eq__(self, other):
        if not isinstance(other, Dgla):
            return NotImplemented
        return self.complex == other.complex and self.brackets == other.brackets

    __hash__ = None


def make_dgla(complex: ChainComplex,
              entries: Iterable[tuple[BasisKey, BasisKey, GradedElement]] = ()) -> Dgla:
    """Fold arbitrary-order bracket entries into canonical storage.

    Entries given in both orders must be antisymmetry-consistent; otherwise
    InvalidInput is raised rather than silently keeping one of them.
    """
    canonical: dict[tuple[BasisKey, BasisKey], GradedElement] = {}
    for a, b, val in entries:
        key, stored = ((a, b), val) if a <= b else ((b, a), (-koszul_sign(a[0], b[0])) * val)
        if key in canonical:
            if canonical[key] != stored:
                raise InvalidInput(f"inconsistent duplicate bracket entries at {key}")
        else:
            canonical[key] = stored
    return Dgla(complex, canonical)


def dgla_from_labels(complex: ChainComplex,
                     entries: Mapping[tuple[str, str], Mapping[str, object]]) -> Dgla:
    """Bracket entries keyed by label pairs, values as label -> scalar maps."""
    space = complex.space
    triples = []
    for (la_, lb), val in entries.items():
        a = space.locate(la_)
        b = space.locate(lb)
        coords = {}
        for lab, c in val.items():
            coords[space.locate(lab)] = la.frac(c)
        triples.append((a, b, GradedElement(space, coords)))
    return make_dgla(complex, triples)


def abelian_dgla(complex: ChainComplex) -> Dgla:
    return Dgla(complex, {})


def zero_dgla() -> Dgla:
    return abelian_dgla(zero_complex())


def validate_dgla(L: Dgla) -> list[Violation]:
    """Check d²=0, bracket degrees, antisymmetry, Leibniz, and Jacobi.

    Violations are report entries, never exceptions; an empty report means
    the candidate is a DGLA.
    """
    report: list[Violation] = []
    space = L.space
    for lab in L.complex.d_squared_witnesses():
        report.append(Violation("d_squared", (lab,), "d(d(e)) ≠ 0"))

    keys = [(i, p) for i in space.degrees() for p in range(space.dim(i))]

    def name(k: BasisKey) -> str:
        return space.label(*k)

    for (a, b), val in L.brackets.items():
        expected = a[0] + b[0]
        for (deg, _idx), _c in val.coords.items():
            if deg != expected:
                report.append(Violation(
                    "bracket_degree", (name(a), name(b)),
                    f"value has a term in degree {deg}, expected {expected}",
                ))
                break

    for a in keys:
        for b in keys:
            lhs = L.bracket_basis(a, b) + koszul_sign(a[0], b[0]) * L.bracket_basis(b, a)
            if not lhs.is_zero():
                report.append(Violation("antisymmetry", (name(a), name(b)),
                                        f"[a,b]+(−1)^(deg a·deg b)[b,a] = {lhs.pretty()}"))

    d = L.complex.d
    for a in keys:
        ea = basis_element(space, *a)
        da = d.apply(ea)
        for b in keys:
            eb = basis_element(space, *b)
            lhs = d.apply(L.bracket(ea, eb))
            sign = ONE if a[0] % 2 == 0 else -ONE
            rhs = L.bracket(da, eb) + sign * L.bracket(ea, d.apply(eb))
            if lhs != rhs:
                report.append(Violation("leibniz", (name(a), name(b)),
                                        f"d[a,b] − [da,b] − (−1)^deg a [a,db] = {(lhs - rhs).pretty()}"))

    for a in keys:
        ea = basis_element(space, *a)
        for b in keys:
            eb = basis_element(space, *b)
            ab = L.bracket(ea, eb)
            sign = koszul_sign(a[0], b[0])
            for c in keys:
                ec = basis_element(space, *c)
                lhs = L.bracket(ea, L.bracket(eb, ec))
                rhs = L.bracket(ab, ec) + sign * L.bracket(eb, L.bracket(ea, ec))
                if lhs != rhs:
                    report.append(Violation("jacobi", (name(a), name(b), name(c)),
                                            f"defect {(lhs - rhs).pretty()}"))
    return report


@dataclass(frozen=True)
class ChainMap:
    """Degree-0 map of complexes; commuting with d is checked by is_chain_map."""

    source: ChainComplex
    target: ChainComplex
    map: GradedMap

    def __post_init__(self):
        if self.map.source != self.source.space or self.map.target != self.target.space:
            raise InvalidInput("chain map spaces do not match its complexes")
        if self.map.degree != 0:
            raise DegreeWindowViolation("chain map must have degree 0")

    def apply(self, x: GradedElement) -> GradedElement:
        return self.map.apply(x)

    def commutes_with_d(self) -> bool:
        return self.map.compose(self.source.d) == self.target.d.compose(self.map)

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        return (self.source, self.target, self.map) == (other.source, other.target, other.map)

    __hash__ = None


@dataclass(frozen=True)
class DglaMorphism:
    """Degree-0 map of DGLAs; axiom compliance checked by validate_morphism."""

    source: Dgla
    target: Dgla
    map: GradedMap

    def __post_init__(self):
        if self.map.source != self.source.space or self.map.target != self.target.space:
            raise InvalidInput("morphism spaces do not match its endpoints")
        if self.map.degree != 0:
            raise DegreeWindowViolation("DGLA morphism must have degree 0")

    def apply(self, x: GradedElement) -> GradedElement:
        return self.map.apply(x)

    def chain_map(self) -> ChainMap:
        return ChainMap(self.source.complex, self.target.complex, self.map)

    def __eq__(self, other):
        if not isinstance(other, DglaMorphism):
            return NotImplemented
        return (self.source, self.target, self.map) == (other.source, other.target, other.map)

    __hash__ = None


def identity_morphism(L: Dgla) -> DglaMorphism:
    return DglaMorphism(L, L, identity_map(L.space))


def zero_morphism(L: Dgla, M: Dgla) -> DglaMorphism:
    return DglaMorphism(L, M, zero_map(L.space, M.space, 0))


def morphism_from_labels(L: Dgla, M: Dgla, images: Mapping[str, Mapping[str, object]]) -> DglaMorphism:
    space = L.space
    tgt = M.space
    imgs = {}
    for lab, val in images.items():
        deg = space.locate(lab)[0]
        coords = {tgt.locate(t): la.frac(c) for t, c in val.items()}
        imgs[lab] = GradedElement(tgt, coords, deg)
    return DglaMorphism(L, M, map_from_basis_images(space, tgt, 0, imgs))


def validate_morphism(phi: DglaMorphism) -> list[Violation]:
    """Check chain-map and bracket-preservation on all basis pairs."""
    report: list[Violation] = []
    L, M = phi.source, phi.target
    space = L.space
    keys = [(i, p) for i in space.degrees() for p in range(space.dim(i))]

    def name(k: BasisKey) -> str:
        return space.label(*k)

    for a in keys:
        ea = basis_element(space, *a)
        lhs = phi.apply(L.differential_of(ea))
        rhs = M.differential_of(phi.apply(ea))
        if lhs != rhs:
            report.append(Violation("chain_map", (name(a),),
                                    f"φ(da) − d φ(a) = {(lhs - rhs).pretty()}"))
    for a in keys:
        ea = basis_element(space, *a)
        fa = phi.apply(ea)
        for b in keys:
            eb = basis_element(space, *b)
            lhs = phi.apply(L.bracket(ea, eb))
            rhs = M.bracket(fa, phi.apply(eb))
            if lhs != rhs:
                report.append(Violation("bracket_preservation", (name(a), name(b)),
                                        f"φ[a,b] − [φa,φb] = {(lhs - rhs).pretty()}"))
    return report


# --- cones -----------------------------------------------------------------

CONE_CONVENTION = "iacono-cone-v1"


def _as_chain_map(f) -> ChainMap:
    if isinstance(f, ChainMap):
        return f
    if isinstance(f, DglaMorphism):
        return f.chain_map()
    raise InvalidInput(f"expected a chain map or DGLA morphism, got {type(f)!r}")


@dataclass(frozen=True)
class ConePart:
    """Embedding/projection pair for one building block of a cone."""

    name: str
    embed: GradedMap
    project: GradedMap


@dataclass(frozen=True)
class ConeComplex:
    """Suspended mapping cone with provenance and block bookkeeping."""

    complex: ChainComplex
    kind: str  # "single" or "pair"
    convention: str
    h: ChainMap
    g: ChainMap | None
    parts: Mapping[str, ConePart]

    def embed(self, part: str, x: GradedElement) -> GradedElement:
        return self.parts[part].embed.apply(x)

    def project(self, part: str, x: GradedElement) -> GradedElement:
        return self.parts[part].project.apply(x)

    def __eq__(self, other):
        if not isinstance(other, ConeComplex):
            return NotImplemented
        return self.complex == other.complex and self.kind == other.kind

    __hash__ = None


def _cone_space(sources: list[tuple[str, GradedSpace, int]]) -> GradedSpace:
    """Graded space ⊕ parts, each part shifted down by its offset.

    A part (prefix, space, off) contributes space^{i-off} to cone degree i.
    """
    dmin = min(s.dmin + off for _p, s, off in sources)
    dmax = max(s.dmax + off for _p, s, off in sources)
    basis: dict[int, tuple[str, ...]] = {}
    for i in range(dmin, dmax + 1):
        labels: list[str] = []
        for prefix, space, off in sources:
            labels.extend(prefix + l for l in space.labels(i - off))
        if labels:
            basis[i] = tuple(labels)
    if not basis:
        # all parts empty: keep a legal empty window
        return GradedSpace(0, 0, {})
    return GradedSpace(dmin, dmax, basis)


def _part_maps(cone_space: GradedSpace, prefix: str, space: GradedSpace,
               off: int) -> ConePart:
    embed_images = {}
    proj_images = {}
    for i in space.degrees():
        for lab in space.labels(i):
            clab = prefix + lab
            embed_images[lab] = GradedElement(cone_space, {cone_space.locate(clab): ONE}, i + off)
            proj_images[clab] = GradedElement(space, {space.locate(lab): ONE}, i)
    embed = map_from_basis_images(space, cone_space, off, embed_images)
    project = map_from_basis_images(cone_space, space, -off, proj_images)
    return ConePart(prefix.rstrip(":"), embed, project)


def cone_single(h) -> ConeComplex:
    """Suspended cone of h: C_h^i = L^i ⊕ M^{i−1}, δ(l,m) = (dl, −dm + h(l))."""
    h = _as_chain_map(h)
    L, M = h.source, h.target
    space = _cone_space([("L:", L.space, 0), ("M:", M.space, 1)])
    part_l = _part_maps(space, "L:", L.space, 0)
    part_m = _part_maps(space, "M:", M.space, 1)
    d = (part_l.embed.compose(L.d).compose(part_l.project)
         + part_m.embed.compose(h.map).compose(part_l.project)
         - part_m.embed.compose(M.d).compose(part_m.project))
    cx = ChainComplex(space, GradedMap(space, space, 1, d.blocks))
    cx.require_d_squared_zero()
    return ConeComplex(cx, "single", CONE_CONVENTION, h, None,
                       {"L": part_l, "M": part_m})


def cone_pair(h, g) -> ConeComplex:
    """Suspended cone of a pair: D(l,n,m) = (dl, dn, −dm − g(n) + h(l))."""
    h = _as_chain_map(h)
    g = _as_chain_map(g)
    if h.target != g.target:
        raise TargetMismatch("h and g must share their target")
    L, N, M = h.source, g.source, h.target
    space = _cone_space([("L:", L.space, 0), ("N:", N.space, 0), ("M:", M.space, 1)])
    part_l = _part_maps(space, "L:", L.space, 0)
    part_n = _part_maps(space, "N:", N.space, 0)
    part_m = _part_maps(space, "M:", M.space, 1)
    d = (part_l.embed.compose(L.d).compose(part_l.project)
         + part_n.embed.compose(N.d).compose(part_n.project)
         + part_m.embed.compose(h.map).compose(part_l.project)
         - part_m.embed.compose(g.map).compose(part_n.project)
         - part_m.embed.compose(M.d).compose(part_m.project))
    cx = ChainComplex(space, GradedMap(space, space, 1, d.blocks))
    cx.require_d_squared_zero()
    return ConeComplex(cx, "pair", CONE_CONVENTION, h, g,
                       {"L": part_l, "N": part_n, "M": part_m})


def difference_chain_map(h, g) -> ChainMap:
    """h − g: L ⊕ N → M, (l, n) ↦ h(l) − g(n), on the labelled direct sum."""
    h = _as_chain_map(h)
    g = _as_chain_map(g)
    if h.target != g.target:
        raise TargetMismatch("h and g must share their target")
    total, inc_l, inc_n, proj_l, proj_n = direct_sum(h.source, g.source, ("L:", "N:"))
    m = h.map.compose(proj_l) - g.map.compose(proj_n)
    return ChainMap(total, h.target, m)


def cokernel(f: ChainMap) -> tuple[ChainComplex, ChainMap]:
    """Quotient complex coker(f) with its projection π.

    The quotient basis is the deterministic completion of im(f) by standard
    basis vectors of the target, degree by degree.
    """
    M = f.target
    space = M.space
    basis: dict[int, tuple[str, ...]] = {}
    comp_vectors: dict[int, list[la.Vector]] = {}
    proj_rows: dict[int, la.Matrix] = {}
    for i in space.degrees():
        n = space.dim(i)
        if n == 0:
            continue
        img = la.column_space_basis(f.map.matrix(i)) if f.source.space.dim(i) else []
        full = list(img)
        chosen: list[int] = []
        for j in range(n):
            e = la.unit_vector(n, j)
            if la.in_span(full, e) is None:
                full.append(e)
                chosen.append(j)
        if not chosen:
            continue
        basis[i] = tuple(f"q:{space.label(i, j)}" for j in chosen)
        comp_vectors[i] = [la.unit_vector(n, j) for j in chosen]
        f_inv = la.inverse(la.from_columns(full, n))
        proj_rows[i] = [f_inv[len(img) + k] for k in range(len(chosen))]
    if basis:
        qspace = GradedSpace(space.dmin, space.dmax, basis)
    else:
        qspace = GradedSpace(0, 0, {})
    pi = GradedMap(space, qspace, 0,
                   {i: rows for i, rows in proj_rows.items()})
    # induced differential: d̄(q) = π(d(rep(q)))
    images = {}
    for i, vecs in comp_vectors.items():
        for k, v in enumerate(vecs):
            rep = element_from_vector(space, i, v)
            img = pi.apply(M.d.apply(rep))
            lab = qspace.label(i, k)
            if not img.is_zero():
                images[lab] = img
    dq = map_from_basis_images(qspace, qspace, 1, images)
    qcx = ChainComplex(qspace, dq)
    qcx.require_d_squared_zero()
    return qcx, ChainMap(M, qcx, pi)


def gamma_quotient_map(h, g) -> ChainMap:
    """γ: C_{(h,g)} → C_{π∘g}, (l, n, m) ↦ (−n, π(m)), for injective h."""
    h = _as_chain_map(h)
    g = _as_chain_map(g)
    if h.target != g.target:
        raise TargetMismatch("h and g must share their target")
    for i in h.source.space.degrees():
        if h.map.kernel_dim(i) > 0:
            raise NotInjective(f"h has a kernel in degree {i}")
    src_cone = cone_pair(h, g)
    coker_cx, pi = cokernel(h)
    pig = ChainMap(g.source, coker_cx, pi.map.compose(g.map))
    tgt_cone = cone_single(pig)
    m = (tgt_cone.parts["L"].embed.compose(src_cone.parts["N"].project).scale(-1)
         + tgt_cone.parts["M"].embed.compose(pi.map).compose(src_cone.parts["M"].project))
    gamma = ChainMap(src_cone.complex, tgt_cone.complex, m)
    if not gamma.commutes_with_d():
        raise InvalidInput("internal: γ is not a chain map")
    return gamma


def swap_iso(h, g) -> ChainMap:
    """Involution C_{(h,g)} → C_{(g,h)} sending (l, n, m) to (−l, −n, m)."""
    h = _as_chain_map(h)
    g = _as_chain_map(g)
    if h.target != g.target:
        raise TargetMismatch("h and g must share their target")
    src = cone_pair(h, g)
    tgt = cone_pair(g, h)
    m = (tgt.parts["N"].embed.compose(src.parts["L"].project).scale(-1)
         + tgt.parts["L"].embed.compose(src.parts["N"].project).scale(-1)
         + tgt.parts["M"].embed.compose(src.parts["M"].project))
    gamma = ChainMap(src.complex, tgt.complex, m)
    if not gamma.commutes_with_d():
        raise InvalidInput("internal: swap is not a chain map")
    return gamma


def les_exactness(h, g) -> list[Violation]:
    """Rank identities for the long exact sequence
    ··· → Hⁱ(C) → Hⁱ(L⊕N) → Hⁱ(M) → H^{i+1}(C) → ···.

    The three composites vanish identically by construction; exactness is
    checked by rank counting: at every node, rank of the incoming map must
    equal the nullity of the outgoing one.
    """
    from .graded import compute_cohomology, induced_cohomology_matrix

    h = _as_chain_map(h)
    g = _as_chain_map(g)
    cone = cone_pair(h, g)
    H_c = compute_cohomology(cone.complex)
    total, inc_l, inc_n, proj_l, proj_n = direct_sum(h.source, g.source, ("L:", "N:"))
    H_sum = compute_cohomology(total)
    H_m = compute_cohomology(h.target)

    # ι: H^{i−1}(M) → H^i(C) via the M-part embedding (degree +1)
    iota = cone.parts["M"].embed
    # π: H^i(C) → H^i(L⊕N) projecting to the source parts
    pi = (inc_l.compose(cone.parts["L"].project)
          + inc_n.compose(cone.parts["N"].project))
    # connecting map: class of h(l) − g(n)
    conn = h.map.compose(proj_l) - g.map.compose(proj_n)

    report: list[Violation] = []
    degrees = range(cone.complex.space.dmin - 1, cone.complex.space.dmax + 2)
    for i in degrees:
        mi = induced_cohomology_matrix(iota, H_m, H_c, i - 1)
        mp = induced_cohomology_matrix(pi, H_c, H_sum, i)
        mc = induced_cohomology_matrix(conn, H_sum, H_m, i)
        mi_next = induced_cohomology_matrix(iota, H_m, H_c, i)
        if not la.is_zero_matrix(la.mat_mul(mp, mi)):
            report.append(Violation("les_composite", (f"H^{i}(C)",), "π∘ι ≠ 0"))
        if la.rank(mi) != H_c.dim(i) - la.rank(mp):
            report.append(Violation("les_exactness", (f"H^{i}(C)",),
                                    f"rank ι = {la.rank(mi)}, nullity π = {H_c.dim(i) - la.rank(mp)}"))
        if not la.is_zero_matrix(la.mat_mul(mc, mp)):
            report.append(Violation("les_composite", (f"H^{i}(L⊕N)",), "conn∘π ≠ 0"))
        if la.rank(mp) != H_sum.dim(i) - la.rank(mc):
            report.append(Violation("les_exactness", (f"H^{i}(L⊕N)",),
                                    f"rank π = {la.rank(mp)}, nullity conn = {H_sum.dim(i) - la.rank(mc)}"))
        if not la.is_zero_matrix(la.mat_mul(mi_next, mc)):
            report.append(Violation("les_composite", (f"H^{i}(M)",), "ι∘conn ≠ 0"))
        if la.rank(mc) != H_m.dim(i) - la.rank(mi_next):
            report.append(Violation("les_exactness", (f"H^{i}(M)",),
                                    f"rank conn = {la.rank(mc)}, nullity ι = {H_m.dim(i) - la.rank(mi_next)}"))
    return report


# --- fiber products --------------------------------------------------------


def direct_sum_dgla(L: Dgla, N: Dgla,
                    prefixes: tuple[str, str] = ("L:", "N:")) -> tuple[
                        Dgla, GradedMap, GradedMap, GradedMap, GradedMap]:
    """Product DGLA L × N with componentwise bracket."""
    cx, inc_l, inc_n, proj_l, proj_n = direct_sum(L.complex, N.complex, prefixes)
    entries = []
    for (a, b), val in L.brackets.items():
        entries.append(((a[0], _reindex(cx.space, prefixes[0], L.space, a)),
                        (b[0], _reindex(cx.space, prefixes[0], L.space, b)),
                        inc_l.apply(val)))
    for (a, b), val in N.brackets.items():
        entries.append(((a[0], _reindex(cx.space, prefixes[1], N.space, a)),
                        (b[0], _reindex(cx.space, prefixes[1], N.space, b)),
                        inc_n.apply(val)))
    dgla = make_dgla(cx, entries)
    return dgla, inc_l, inc_n, proj_l, proj_n


def _reindex(total: GradedSpace, prefix: str, space: GradedSpace, key: BasisKey) -> int:
    lab = prefix + space.label(*key)
    deg, idx = total.locate(lab)
    if deg != key[0]:
        raise InvalidInput("internal: degree drift in direct sum")
    return idx


@dataclass(frozen=True)
class FiberProduct:
    """Sub-DGLA L ×_M N with its embedding and a surjectivity report."""

    dgla: Dgla
    product: Dgla
    embed: GradedMap  # fiber -> L ⊕ N
    surjective: Mapping[int, bool]  # per degree, is g−h: N×L → M surjective

    def all_surjective(self) -> bool:
        return all(self.surjective.values())


def fiber_product_dgla(h: DglaMorphism, g: DglaMorphism) -> FiberProduct:
    """Kernel of (h−g): L⊕N → M with restricted differential and bracket."""
    if h.target != g.target:
        raise TargetMismatch("h and g must share their target")
    L, N, M = h.source, g.source, h.target
    product, inc_l, inc_n, proj_l, proj_n = direct_sum_dgla(L, N)
    diff = h.map.compose(proj_l) - g.map.compose(proj_n)

    pspace = product.space
    basis: dict[int, tuple[str, ...]] = {}
    embed_cols: dict[int, list[la.Vector]] = {}
    for i in pspace.degrees():
        n = pspace.dim(i)
        if n == 0:
            continue
        ker = la.nullspace(diff.matrix(i), cols=n)
        if not ker:
            continue
        basis[i] = tuple(f"fp{i}_{k}" for k in range(len(ker)))
        embed_cols[i] = ker
    fspace = GradedSpace(pspace.dmin, pspace.dmax, basis) if basis else GradedSpace(0, 0, {})
    embed = GradedMap(fspace, pspace, 0,
                      {i: la.from_columns(cols, pspace.dim(i))
                       for i, cols in embed_cols.items()})

    def restrict(x: GradedElement, degree: int) -> la.Vector:
        cols = embed_cols.get(degree)
        if cols is None:
            if not x.is_zero():
                raise InvalidInput("element leaves the fiber product (invalid inputs)")
            return []
        coords = la.in_span(cols, x.component_vector(degree))
        if coords is None:
            raise InvalidInput("element leaves the fiber product (invalid inputs)")
        return coords

    d_images = {}
    for i, cols in embed_cols.items():
        for k, v in enumerate(cols):
            img = product.differential_of(element_from_vector(pspace, i, v))
            vec = restrict(img, i + 1)
            el = element_from_vector(fspace, i + 1, vec) if vec else zero_element(fspace)
            if not el.is_zero():
                d_images[fspace.label(i, k)] = el
    fcx = ChainComplex(fspace, map_from_basis_images(fspace, fspace, 1, d_images))

    entries = []
    for i, cols_i in embed_cols.items():
        for p, vp in enumerate(cols_i):
            ep = element_from_vector(pspace, i, vp)
            for j, cols_j in embed_cols.items():
                for q, vq in enumerate(cols_j):
                    if (j, q) < (i, p):
                        continue
                    val = product.bracket(ep, element_from_vector(pspace, j, vq))
                    if val.is_zero():
                        continue
                    vec = restrict(val, i + j)
                    entries.append(((i, p), (j, q), element_from_vector(fspace, i + j, vec)))
    fdgla = make_dgla(fcx, entries)

    surj = {}
    for i in M.space.degrees():
        dim_m = M.space.dim(i)
        surj[i] = (la.rank(diff.matrix(i)) == dim_m)
    return FiberProduct(fdgla, product, embed, surj)


# --- Cartan homotopy and the adjoined-differential DGLA --------------------


@dataclass(frozen=True)
class CartanHomotopyCandidate:
    source: Dgla
    target: Dgla
    imap: GradedMap  # degree −1

    def __post_init__(self):
        if self.imap.degree != -1:
            raise DegreeWindowViolation("Cartan homotopy candidate must have degree −1")
        if self.imap.source != self.source.space or self.imap.target != self.target.space:
            raise InvalidInput("candidate map endpoints do not match")


def cartan_homotopy_check(c: CartanHomotopyCandidate) -> list[Violation]:
    """Check i([a,b]) = [i(a), d'i(b)] and [i(a), i(b)] = 0 on basis pairs,
    with d'i(a) = d_M(i(a)) + i(d_L(a))."""
    report: list[Violation] = []
    L, M, imap = c.source, c.target, c.imap
    space = L.space
    di = M.complex.d.compose(imap) + imap.compose(L.complex.d)
    keys = [(i, p) for i in space.degrees() for p in range(space.dim(i))]
    for a in keys:
        ea = basis_element(space, *a)
        ia = imap.apply(ea)
        for b in keys:
            eb = basis_element(space, *b)
            lhs = imap.apply(L.bracket(ea, eb))
            rhs = M.bracket(ia, di.apply(eb))
            if lhs != rhs:
                report.append(Violation(
                    "cartan_bracket", (space.label(*a), space.label(*b)),
                    f"i[a,b] − [i(a), d'i(b)] = {(lhs - rhs).pretty()}"))
            comm = M.bracket(ia, imap.apply(eb))
            if not comm.is_zero():
                report.append(Violation(
                    "cartan_commuting", (space.label(*a), space.label(*b)),
                    f"[i(a), i(b)] = {comm.pretty()}"))
    return report


def adjoin_d(L: Dgla, label: str = "delta") -> tuple[Dgla, str]:
    """Adjoin a degree-1 element δ with [δ, v]' = dv and d'(δ) = 0.

    Returns the extended DGLA and the actual label used for δ.
    """
    space = L.space
    if not (space.dmin <= 1 <= space.dmax):
        raise WindowTooSmall("degree window does not admit degree 1")
    delta = label
    while space.has_label(delta):
        delta += "'"
    basis = {i: space.labels(i) for i in space.degrees() if space.dim(i)}
    basis[1] = basis.get(1, ()) + (delta,)
    nspace = GradedSpace(space.dmin, space.dmax, basis)

    def lift(x: GradedElement, degree: int | None = None) -> GradedElement:
        coords = {}
        for (deg, idx), c in x.coords.items():
            coords[nspace.locate(space.label(deg, idx))] = c
        return GradedElement(nspace, coords, degree if degree is not None else x.degree)

    d_images = {}
    for i in space.degrees():
        for lab in space.labels(i):
            img = L.differential_of(basis_element(space, i, space.labels(i).index(lab)))
            if not img.is_zero():
                d_images[lab] = lift(img, i + 1)
    nd = map_from_basis_images(nspace, nspace, 1, d_images)
    ncx = ChainComplex(nspace, nd)

    entries = []
    for (a, b), val in L.brackets.items():
        ka = nspace.locate(space.label(*a))
        kb = nspace.locate(space.label(*b))
        entries.append((ka, kb, lift(val)))
    dkey = nspace.locate(delta)
    for i in space.degrees():
        for p, lab in enumerate(space.labels(i)):
            dv = L.differential_of(basis_element(space, i, p))
            if dv.is_zero():
                continue
            entries.append((dkey, nspace.locate(lab), lift(dv)))
    return make_dgla(ncx, entries), delta


def endomorphism_dgla(V: ChainComplex) -> Dgla:
    """End(V) = Hom^*(V, V) with graded commutator bracket and d' = [d, −]."""
    hom = hom_complex(V, V)
    hspace = hom.space
    comp: dict[tuple[BasisKey, BasisKey], BasisKey | None] = {}

    def decode(key: BasisKey) -> tuple[BasisKey, BasisKey]:
        lab = hspace.label(*key)
        src, tgt = lab.split(">")
        return V.space.locate(src), V.space.locate(tgt)

    keys = [(n, p) for n in hspace.degrees() for p in range(hspace.dim(n))]
    entries = []
    for a in keys:
        sa, ta = decode(a)
        for b in keys:
            if b < a:
                continue
            sb, tb = decode(b)
            coords: dict[BasisKey, Fraction] = {}
            # a ∘ b is elementary when target(b) == source(a)
            if tb == sa:
                lab = f"{V.space.label(*sb)}>{V.space.label(*ta)}"
                coords[hspace.locate(lab)] = coords.get(hspace.locate(lab), ZERO) + ONE
            if ta == sb:
                lab = f"{V.space.label(*sa)}>{V.space.label(*tb)}"
                key = hspace.locate(lab)
                coords[key] = coords.get(key, ZERO) - koszul_sign(a[0], b[0])
            val = GradedElement(hspace, coords, a[0] + b[0])
            if not val.is_zero():
                entries.append((a, b, val))
    return make_dgla(hom, entries)
