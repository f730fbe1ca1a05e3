"""Graded vector spaces, graded maps, chain complexes, cohomology.

Everything lives over the exact rationals inside a finite degree window.
Degree blocks are dense matrices (see linalg); elements are sparse maps
(degree, basis index) -> Fraction.  All objects are immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from . import linalg as la
from .errors import (
    DegreeWindowViolation,
    DifferentialNotSquareZero,
    InvalidInput,
    WindowTooSmall,
)

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True, eq=True)
class GradedSpace:
    """Finite-window graded vector space with labelled basis per degree."""

    dmin: int
    dmax: int
    basis: Mapping[int, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        if self.dmin > self.dmax:
            raise InvalidInput(f"empty degree window [{self.dmin},{self.dmax}]")
        clean: dict[int, tuple[str, ...]] = {}
        seen: dict[str, int] = {}
        for deg, labels in sorted(self.basis.items()):
            labels = tuple(labels)
            if not labels:
                continue
            if not self.dmin <= deg <= self.dmax:
                raise DegreeWindowViolation(
                    f"basis declared at degree {deg} outside window [{self.dmin},{self.dmax}]"
                )
            for lab in labels:
                if lab in seen:
                    raise InvalidInput(f"duplicate basis label {lab!r}")
                seen[lab] = deg
            clean[deg] = labels
        object.__setattr__(self, "basis", clean)
        object.__setattr__(self, "_locate", {})
        for deg, labels in clean.items():
            for idx, lab in enumerate(labels):
                self._locate[lab] = (deg, idx)

    def degrees(self) -> range:
        return range(self.dmin, self.dmax + 1)

    def dim(self, degree: int) -> int:
        return len(self.basis.get(degree, ()))

    def total_dim(self) -> int:
        return sum(len(v) for v in self.basis.values())

    def labels(self, degree: int) -> tuple[str, ...]:
        return self.basis.get(degree, ())

    def label(self, degree: int, index: int) -> str:
        return self.basis[degree][index]

    def locate(self, lab: str) -> tuple[int, int]:
        try:
            return self._locate[lab]
        except KeyError:
            raise InvalidInput(f"unknown basis label {lab!r}") from None

    def has_label(self, lab: str) -> bool:
        return lab in self._locate

    def __eq__(self, other):
        if not isinstance(other, GradedSpace):
            return NotImplemented
        return (self.dmin, self.dmax, self.basis) == (other.dmin, other.dmax, other.basis)

    __hash__ = None


def zero_space() -> GradedSpace:
    return GradedSpace(0, 0, {})


@dataclass(frozen=True)
class GradedElement:
    """Sparse element; an optional declared homogeneous degree is enforced."""

    space: GradedSpace
    coords: Mapping[tuple[int, int], Fraction]
    degree: int | None = None

    def __post_init__(self):
        clean = {}
        for (deg, idx), c in self.coords.items():
            c = la.frac(c)
            if c == 0:
                continue
            if idx >= self.space.dim(deg):
                raise InvalidInput(f"coordinate at ({deg},{idx}) outside basis")
            if self.degree is not None and deg != self.degree:
                raise DegreeWindowViolation(
                    f"nonzero coordinate at degree {deg} in element declared degree {self.degree}"
                )
            clean[(deg, idx)] = c
        object.__setattr__(self, "coords", clean)

    def is_zero(self) -> bool:
        return not self.coords

    def terms(self) -> Iterable[tuple[int, int, Fraction]]:
        for (deg, idx), c in sorted(self.coords.items()):
            yield deg, idx, c

    def homogeneous_degree(self) -> int | None:
        """Common degree of all nonzero terms (declared degree as fallback)."""
        degs = {deg for (deg, _i) in self.coords}
        if not degs:
            return self.degree
        if len(degs) == 1:
            return next(iter(degs))
        return None

    def component_vector(self, degree: int) -> la.Vector:
        v = la.zero_vector(self.space.dim(degree))
        for (deg, idx), c in self.coords.items():
            if deg == degree:
                v[idx] = c
        return v

    def component(self, degree: int) -> "GradedElement":
        return GradedElement(
            self.space,
            {k: c for k, c in self.coords.items() if k[0] == degree},
            degree,
        )

    def support_degrees(self) -> list[int]:
        return sorted({deg for (deg, _i) in self.coords})

    def __add__(self, other: "GradedElement") -> "GradedElement":
        if self.space != other.space:
            raise InvalidInput("adding elements of different spaces")
        coords = dict(self.coords)
        for k, c in other.coords.items():
            coords[k] = coords.get(k, ZERO) + c
        deg = self.degree if self.degree == other.degree else None
        return GradedElement(self.space, coords, deg)

    def __neg__(self) -> "GradedElement":
        return GradedElement(self.space, {k: -c for k, c in self.coords.items()}, self.degree)

    def __sub__(self, other: "GradedElement") -> "GradedElement":
        return self + (-other)

    def scale(self, c) -> "GradedElement":
        c = la.frac(c)
        return GradedElement(self.space, {k: c * v for k, v in self.coords.items()}, self.degree)

    def __rmul__(self, c) -> "GradedElement":
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, GradedElement):
            return NotImplemented
        return self.space == other.space and self.coords == other.coords

    __hash__ = None

    def pretty(self) -> str:
        if not self.coords:
            return "0"
        parts = []
        for deg, idx, c in self.terms():
            lab = self.space.label(deg, idx)
            parts.append(lab if c == 1 else f"{c}*{lab}")
        return " + ".join(parts)


def zero_element(space: GradedSpace, degree: int | None = None) -> GradedElement:
    return GradedElement(space, {}, degree)


def basis_element(space: GradedSpace, degree: int, index: int) -> GradedElement:
    return GradedElement(space, {(degree, index): ONE}, degree)


def element_from_labels(space: GradedSpace, coeffs: Mapping[str, object],
                        degree: int | None = None) -> GradedElement:
    coords = {}
    for lab, c in coeffs.items():
        deg, idx = space.locate(lab)
        coords[(deg, idx)] = coords.get((deg, idx), ZERO) + la.frac(c)
    return GradedElement(space, coords, degree)


def element_from_vector(space: GradedSpace, degree: int, vec: la.Vector) -> GradedElement:
    return GradedElement(space, {(degree, i): c for i, c in enumerate(vec)}, degree)


@dataclass(frozen=True)
class GradedMap:
    """Degree-n linear map given by one matrix per populated source degree.

    blocks[i] has shape (dim_target(i+n), dim_source(i)); absent blocks are
    zero.  A block whose target degree falls outside the target window must
    be zero, otherwise the map silently truncates d²=0-style identities.
    """

    source: GradedSpace
    target: GradedSpace
    degree: int
    blocks: Mapping[int, la.Matrix] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for i, mat in self.blocks.items():
            tdeg = i + self.degree
            sdim = self.source.dim(i)
            tdim = self.target.dim(tdeg)
            if tdim == 0 or sdim == 0:
                if not la.is_zero_matrix(mat):
                    raise DegreeWindowViolation(
                        f"nonzero block from degree {i} into degree {tdeg} "
                        f"(dimensions {sdim} -> {tdim})"
                    )
                continue
            if len(mat) != tdim or any(len(row) != sdim for row in mat):
                raise InvalidInput(
                    f"block at degree {i} has shape {len(mat)}x{la.num_cols(mat)}, "
                    f"expected {tdim}x{sdim}"
                )
            if not la.is_zero_matrix(mat):
                clean[i] = [ [la.frac(x) for x in row] for row in mat ]
        object.__setattr__(self, "blocks", clean)

    def matrix(self, i: int) -> la.Matrix:
        if i in self.blocks:
            return la.mat_copy(self.blocks[i])
        return la.zeros(self.target.dim(i + self.degree), self.source.dim(i))

    def apply(self, x: GradedElement) -> GradedElement:
        if x.space != self.source:
            raise InvalidInput("element does not live in the map's source")
        coords: dict[tuple[int, int], Fraction] = {}
        for (deg, idx), c in x.coords.items():
            block = self.blocks.get(deg)
            if block is None:
                continue
            tdeg = deg + self.degree
            for r, row in enumerate(block):
                if row[idx] != 0:
                    key = (tdeg, r)
                    coords[key] = coords.get(key, ZERO) + c * row[idx]
        deg = None if x.degree is None else x.degree + self.degree
        return GradedElement(self.target, coords, deg)

    def compose(self, inner: "GradedMap") -> "GradedMap":
        """self ∘ inner."""
        if inner.target != self.source:
            raise InvalidInput("composition shape mismatch")
        blocks = {}
        for i in inner.source.degrees():
            mid = i + inner.degree
            tdeg = mid + self.degree
            if inner.source.dim(i) == 0 or self.target.dim(tdeg) == 0:
                continue
            b = la.mat_mul(self.matrix(mid), inner.matrix(i))
            if not la.is_zero_matrix(b):
                blocks[i] = b
        return GradedMap(inner.source, self.target, inner.degree + self.degree, blocks)

    def __add__(self, other: "GradedMap") -> "GradedMap":
        if (self.source, self.target, self.degree) != (other.source, other.target, other.degree):
            raise InvalidInput("adding incompatible maps")
        blocks = {}
        for i in set(self.blocks) | set(other.blocks):
            blocks[i] = la.mat_add(self.matrix(i), other.matrix(i))
        return GradedMap(self.source, self.target, self.degree, blocks)

    def __neg__(self) -> "GradedMap":
        return self.scale(-1)

    def __sub__(self, other: "GradedMap") -> "GradedMap":
        return self + (-other)

    def scale(self, c) -> "GradedMap":
        c = la.frac(c)
        return GradedMap(
            self.source, self.target, self.degree,
            {i: la.mat_scale(c, m) for i, m in self.blocks.items()},
        )

    def is_zero(self) -> bool:
        return not self.blocks

    def __eq__(self, other):
        if not isinstance(other, GradedMap):
            return NotImplemented
        if (self.source, self.target, self.degree) != (other.source, other.target, other.degree):
            return False
        return self.blocks == other.blocks

    __hash__ = None

    def kernel_dim(self, i: int) -> int:
        return self.source.dim(i) - la.rank(self.matrix(i))

    def rank(self, i: int) -> int:
        return la.rank(self.matrix(i))


def zero_map(source: GradedSpace, target: GradedSpace, degree: int) -> GradedMap:
    return GradedMap(source, target, degree, {})


def map_from_basis_images(source: GradedSpace, target: GradedSpace, degree: int,
                          images: Mapping[str, GradedElement]) -> GradedMap:
    """Build a GradedMap from images of (some) source basis labels."""
    blocks: dict[int, la.Matrix] = {}
    for lab, img in images.items():
        sdeg, sidx = source.locate(lab)
        if img.is_zero():
            continue
        tdeg = sdeg + degree
        for (d, r), c in img.coords.items():
            if d != tdeg:
                raise DegreeWindowViolation(
                    f"image of {lab!r} has a term at degree {d}, expected {tdeg}"
                )
            block = blocks.setdefault(sdeg, la.zeros(target.dim(tdeg), source.dim(sdeg)))
            block[r][sidx] += c
    return GradedMap(source, target, degree, blocks)


def identity_map(space: GradedSpace) -> GradedMap:
    blocks = {i: la.identity(space.dim(i)) for i in space.degrees() if space.dim(i)}
    return GradedMap(space, space, 0, blocks)


@dataclass(frozen=True)
class ChainComplex:
    """Graded space with a degree +1 differential."""

    space: GradedSpace
    d: GradedMap

    def __post_init__(self):
        if self.d.source != self.space or self.d.target != self.space:
            raise InvalidInput("differential must be an endomap of the space")
        if self.d.degree != 1:
            raise DegreeWindowViolation(f"differential has degree {self.d.degree}, expected 1")

    def d_squared_witnesses(self) -> list[str]:
        """Labels of basis vectors on which d(d(e)) is nonzero."""
        bad = []
        dd = self.d.compose(self.d)
        for i, block in dd.blocks.items():
            for col in range(la.num_cols(block)):
                if any(row[col] != 0 for row in block):
                    bad.append(self.space.label(i, col))
        return bad

    def require_d_squared_zero(self) -> None:
        bad = self.d_squared_witnesses()
        if bad:
            raise DifferentialNotSquareZero(f"d²≠0 on basis vectors {bad}")

    def differential_of(self, x: GradedElement) -> GradedElement:
        return self.d.apply(x)

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * self.space.dim(i) for i in self.space.degrees())

    def __eq__(self, other):
        if not isinstance(other, ChainComplex):
            return NotImplemented
        return self.space == other.space and self.d == other.d

    __hash__ = None


def zero_complex() -> ChainComplex:
    s = zero_space()
    return ChainComplex(s, zero_map(s, s, 1))


@dataclass(frozen=True)
class CohomologyResult:
    """Dimensions, representative cycles, and class-projection matrices.

    For each degree i, ``projections[i]`` is a dim H^i x dim V^i matrix P
    with P·(boundary) = 0 and P·(representative_j) = e_j, so P sends any
    cycle's coordinates to its class coordinates.
    """

    complex: ChainComplex
    dims: Mapping[int, int]
    representatives: Mapping[int, tuple[GradedElement, ...]]
    projections: Mapping[int, la.Matrix]

    def dim(self, degree: int) -> int:
        return self.dims.get(degree, 0)

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def project_vector(self, degree: int, vec: la.Vector) -> la.Vector:
        if degree not in self.projections:
            return []
        return la.mat_vec(self.projections[degree], vec)

    def class_of(self, x: GradedElement, degree: int | None = None) -> la.Vector:
        """Class coordinates of a homogeneous cycle."""
        if degree is None:
            degree = x.homogeneous_degree()
            if degree is None:
                raise DegreeMismatchError(x)
        return self.project_vector(degree, x.component_vector(degree))

    def representative(self, degree: int, j: int) -> GradedElement:
        return self.representatives[degree][j]


class DegreeMismatchError(InvalidInput):
    def __init__(self, x):
        super().__init__(f"element is not homogeneous: {x.coords}")


def compute_cohomology(complex: ChainComplex) -> CohomologyResult:
    """Exact cohomology of a validated complex, degree by degree.

    Representatives are chosen deterministically from the row-reduced kernel
    basis: kernel vectors are scanned in free-column order and kept whenever
    they add a dimension beyond the boundary span.
    """
    complex.require_d_squared_zero()
    space = complex.space
    dims: dict[int, int] = {}
    reps: dict[int, tuple[GradedElement, ...]] = {}
    projs: dict[int, la.Matrix] = {}
    for i in space.degrees():
        n = space.dim(i)
        if n == 0:
            dims[i] = 0
            reps[i] = ()
            projs[i] = []
            continue
        d_i = complex.d.matrix(i)
        d_prev = complex.d.matrix(i - 1)
        kernel = la.nullspace(d_i, cols=n)
        boundary_basis = la.column_space_basis(d_prev) if space.dim(i - 1) else []
        h_dim = len(kernel) - len(boundary_basis)
        dims[i] = h_dim

        span: list[la.Vector] = list(boundary_basis)
        chosen: list[la.Vector] = []
        for k in kernel:
            if len(chosen) == h_dim:
                break
            if la.in_span(span, k) is None:
                span.append(k)
                chosen.append(k)
        if len(chosen) != h_dim:
            raise InvalidInput("internal: representative selection failed")

        # Complete [boundaries | representatives] to a basis of V^i with
        # standard basis vectors; the projection is the representative rows
        # of the inverse basis matrix.
        full: list[la.Vector] = list(boundary_basis) + list(chosen)
        for j in range(n):
            if len(full) == n:
                break
            e = la.unit_vector(n, j)
            if la.in_span(full, e) is None:
                full.append(e)
        f_mat = la.from_columns(full, n)
        f_inv = la.inverse(f_mat)
        nb = len(boundary_basis)
        projs[i] = [f_inv[nb + j] for j in range(h_dim)]
        reps[i] = tuple(element_from_vector(space, i, v) for v in chosen)
    return CohomologyResult(complex, dims, reps, projs)


def shift(complex: ChainComplex, n: int) -> ChainComplex:
    """Shifted complex V[n]: V[n]^i = V^{i+n}, differential (−1)^n d."""
    if n == 0:
        return complex
    space = complex.space
    new_space = GradedSpace(
        space.dmin - n, space.dmax - n,
        {deg - n: labels for deg, labels in space.basis.items()},
    )
    sign = ONE if n % 2 == 0 else -ONE
    blocks = {}
    for i, mat in complex.d.blocks.items():
        blocks[i - n] = la.mat_scale(sign, mat)
    return ChainComplex(new_space, GradedMap(new_space, new_space, 1, blocks))


def hom_label(src_label: str, tgt_label: str) -> str:
    return f"{src_label}>{tgt_label}"


def hom_complex(V: ChainComplex, W: ChainComplex,
                window: tuple[int, int] | None = None) -> ChainComplex:
    """Hom^*(V, W) with differential d'(f) = d_W f − (−1)^{deg f} f d_V.

    The basis of Hom^n is the elementary maps basis_V(i) -> basis_W(i+n).
    With no window the full natural window is used; an explicit window that
    clips a nonzero d' entry raises DegreeWindowViolation, and one holding
    no nonzero Hom^n at all raises WindowTooSmall.
    """
    sv, sw = V.space, W.space
    nat_min = sw.dmin - sv.dmax
    nat_max = sw.dmax - sv.dmin
    if window is None:
        window = (nat_min, nat_max)
    wmin, wmax = window
    if wmin > wmax:
        raise WindowTooSmall(f"empty Hom window [{wmin},{wmax}]")

    basis: dict[int, tuple[str, ...]] = {}
    for n in range(wmin, wmax + 1):
        labels = []
        for i in sv.degrees():
            if sv.dim(i) == 0 or sw.dim(i + n) == 0:
                continue
            for p, vl in enumerate(sv.labels(i)):
                for q, wl in enumerate(sw.labels(i + n)):
                    labels.append(hom_label(vl, wl))
        if labels:
            basis[n] = tuple(labels)
    if not any(basis.values()):
        raise WindowTooSmall(f"window [{wmin},{wmax}] holds no nonzero Hom^n")
    hspace = GradedSpace(wmin, wmax, basis)

    def elem_pairs(n: int):
        for i in sv.degrees():
            if sv.dim(i) == 0 or sw.dim(i + n) == 0:
                continue
            for p, vl in enumerate(sv.labels(i)):
                for q, wl in enumerate(sw.labels(i + n)):
                    yield i, p, q, hom_label(vl, wl)

    images: dict[str, GradedElement] = {}
    for n in hspace.degrees():
        if hspace.dim(n) == 0:
            continue
        sign = ONE if n % 2 == 0 else -ONE
        for i, p, q, lab in elem_pairs(n):
            coords: dict[tuple[int, int], Fraction] = {}
            # d_W ∘ E: contributes at elementary maps (i,p) -> (i+n+1, r)
            dw = W.d.matrix(i + n)
            for r in range(sw.dim(i + n + 1)):
                c = dw[r][q]
                if c == 0:
                    continue
                tl = hom_label(sv.label(i, p), sw.label(i + n + 1, r))
                if not hspace.has_label(tl):
                    raise DegreeWindowViolation(
                        f"d'({lab}) needs Hom^{n+1} entry {tl} outside window"
                    )
                key = hspace.locate(tl)
                coords[key] = coords.get(key, ZERO) + c
            # (−1)^n E ∘ d_V: contributes at (i−1, s) -> (i+n, q)
            dv = V.d.matrix(i - 1)
            for s in range(sv.dim(i - 1)):
                c = dv[p][s]
                if c == 0:
                    continue
                tl = hom_label(sv.label(i - 1, s), sw.label(i + n, q))
                if not hspace.has_label(tl):
                    raise DegreeWindowViolation(
                        f"d'({lab}) needs Hom^{n+1} entry {tl} outside window"
                    )
                key = hspace.locate(tl)
                coords[key] = coords.get(key, ZERO) - sign * c
            if coords:
                images[lab] = GradedElement(hspace, coords, n + 1)
    d = map_from_basis_images(hspace, hspace, 1, images)
    return ChainComplex(hspace, d)


def htp_complex(V: ChainComplex, W: ChainComplex,
                window: tuple[int, int] | None = None) -> ChainComplex:
    """Htp(V, W) = Hom^*(V[1], W), obtained by composing with the shift."""
    return hom_complex(shift(V, 1), W, window)


def graded_map_to_hom_element(f: GradedMap, hom: ChainComplex) -> GradedElement:
    """Coordinates of a graded map inside a Hom^* complex's basis."""
    coords: dict[tuple[int, int], Fraction] = {}
    n = f.degree
    for i, block in f.blocks.items():
        for q, row in enumerate(block):
            for p, c in enumerate(row):
                if c == 0:
                    continue
                lab = hom_label(f.source.label(i, p), f.target.label(i + n, q))
                coords[hom.space.locate(lab)] = c
    return GradedElement(hom.space, coords, n)


def induced_cohomology_matrix(f: GradedMap, H_src: CohomologyResult,
                              H_tgt: CohomologyResult, degree: int) -> la.Matrix:
    """Matrix of the map induced in cohomology at one degree.

    f must be a chain map of degree n; column j is the class of f applied to
    the j-th source representative, in target-class coordinates at
    degree + n.
    """
    cols = []
    for rep in H_src.representatives.get(degree, ()):
        img = f.apply(rep)
        cols.append(H_tgt.project_vector(degree + f.degree,
                                         img.component_vector(degree + f.degree)))
    return la.from_columns(cols, H_tgt.dim(degree + f.degree))


def direct_sum(V: ChainComplex, W: ChainComplex,
               prefixes: tuple[str, str] = ("0:", "1:")) -> tuple[
                   ChainComplex, GradedMap, GradedMap, GradedMap, GradedMap]:
    """V ⊕ W with labelled injections and projections.

    Returns (complex, inc_V, inc_W, proj_V, proj_W).
    """
    pv, pw = prefixes
    dmin = min(V.space.dmin, W.space.dmin)
    dmax = max(V.space.dmax, W.space.dmax)
    basis = {}
    for i in range(dmin, dmax + 1):
        labels = tuple(pv + l for l in V.space.labels(i)) + tuple(
            pw + l for l in W.space.labels(i))
        if labels:
            basis[i] = labels
    sspace = GradedSpace(dmin, dmax, basis)

    def inc(space_from: GradedSpace, prefix: str) -> GradedMap:
        images = {}
        for i in space_from.degrees():
            for lab in space_from.labels(i):
                images[lab] = GradedElement(sspace, {sspace.locate(prefix + lab): ONE}, i)
        return map_from_basis_images(space_from, sspace, 0, images)

    def proj(space_to: GradedSpace, prefix: str) -> GradedMap:
        images = {}
        for i in sspace.degrees():
            for lab in sspace.labels(i):
                if lab.startswith(prefix) and space_to.has_label(lab[len(prefix):]):
                    inner = lab[len(prefix):]
                    if space_to.locate(inner)[0] == i:
                        images[lab] = GradedElement(
                            space_to, {space_to.locate(inner): ONE}, i)
        return map_from_basis_images(sspace, space_to, 0, images)

    inc_v = inc(V.space, pv)
    inc_w = inc(W.space, pw)
    proj_v = proj(V.space, pv)
    proj_w = proj(W.space, pw)
    d_blocks: dict[int, la.Matrix] = {}
    for i in range(dmin, dmax + 1):
        sdim = sspace.dim(i)
        tdim = sspace.dim(i + 1)
        if sdim == 0 or tdim == 0:
            continue
        m = la.zeros(tdim, sdim)
        vdim_s, vdim_t = V.space.dim(i), V.space.dim(i + 1)
        bv = V.d.matrix(i)
        for r in range(vdim_t):
            for c in range(vdim_s):
                m[r][c] = bv[r][c]
        bw = W.d.matrix(i)
        for r in range(W.space.dim(i + 1)):
            for c in range(W.space.dim(i)):
                m[vdim_t + r][vdim_s + c] = bw[r][c]
        if not la.is_zero_matrix(m):
            d_blocks[i] = m
    cx = ChainComplex(sspace, GradedMap(sspace, sspace, 1, d_blocks))
    return cx, inc_v, inc_w, proj_v, proj_w
