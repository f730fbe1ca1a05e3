"""Seeded corpus of single-constant corruptions for the axiom suite.

Every entry genuinely violates a DGLA axiom; mere rescalings that produce an
isomorphic algebra are deliberately excluded (nilpotent toy algebras admit
many valid tables, so each corruption was chosen so an identity binds).
"""

from __future__ import annotations

from mcdeform import library as lib
from mcdeform.dgla import Dgla, make_dgla
from mcdeform.graded import (
    ChainComplex,
    GradedElement,
    GradedSpace,
    basis_element,
    map_from_basis_images,
)
from mcdeform import linalg as la


def with_bracket(L: Dgla, a_lab: str, b_lab: str, value: dict[str, object]) -> Dgla:
    """Rebuild L with the structure constant [a, b] replaced."""
    space = L.space
    a = space.locate(a_lab)
    b = space.locate(b_lab)
    key = (a, b) if a <= b else (b, a)
    entries = []
    for (ka, kb), val in L.brackets.items():
        if (ka, kb) != key:
            entries.append((ka, kb, val))
    coords = {space.locate(lab): la.frac(c) for lab, c in value.items()}
    new_val = GradedElement(space, coords)
    if a <= b:
        entries.append((a, b, new_val))
    else:
        from mcdeform.dgla import koszul_sign
        entries.append((b, a, (-koszul_sign(a[0], b[0])) * new_val))
    return make_dgla(L.complex, entries)


def chain_d_squared_bad() -> Dgla:
    """u → v → w with d(v) ≠ 0: d² ≠ 0 on u."""
    space = GradedSpace(0, 2, {0: ("u",), 1: ("v",), 2: ("w",)})
    d = map_from_basis_images(space, space, 1, {
        "u": basis_element(space, 1, 0),
        "v": basis_element(space, 2, 0),
    })
    return Dgla(ChainComplex(space, d), {})


def corpus() -> list[tuple[str, Dgla]]:
    sl2 = lib.sl2()
    heis0 = lib.heis0()
    heis = lib.heis()
    obst = lib.obstructed()
    endo = lib.endo_acyclic()
    return [
        # sl2: Jacobi binds single coefficients
        ("sl2 [h,e]=3e", with_bracket(sl2, "h", "e", {"e": 3})),
        ("sl2 [h,f]=-f", with_bracket(sl2, "h", "f", {"f": -1})),
        ("sl2 [e,f]=h+e", with_bracket(sl2, "e", "f", {"h": 1, "e": 1})),
        ("sl2 [e,f]=e", with_bracket(sl2, "e", "f", {"e": 1})),
        ("sl2 [h,e]=2f", with_bracket(sl2, "h", "e", {"f": 2})),
        ("sl2 [h,e]=2e+h", with_bracket(sl2, "h", "e", {"e": 2, "h": 1})),
        ("sl2 [h,h]=e", with_bracket(sl2, "h", "h", {"e": 1})),
        ("sl2 [e,e]=h", with_bracket(sl2, "e", "e", {"h": 1})),
        # heis0: Jacobi via non-derivation actions, even-diagonal antisymmetry
        ("heis0 [p,z]=p", with_bracket(heis0, "p", "z", {"p": 1})),
        ("heis0 [q,z]=q", with_bracket(heis0, "q", "z", {"q": 1})),
        ("heis0 [z,z]=p", with_bracket(heis0, "z", "z", {"p": 1})),
        ("heis0 [p,p]=z", with_bracket(heis0, "p", "p", {"z": 1})),
        # heis: even-diagonal and degree violations
        ("heis [a,a]=a", with_bracket(heis, "a", "a", {"a": 1})),
        ("heis [a,x]=a", with_bracket(heis, "a", "x", {"a": 1})),
        ("heis [x,y]=y", with_bracket(heis, "x", "y", {"y": 1})),
        # obstructed: degree corruptions, including [x,y] ↦ y
        ("obstructed [x,y]=y", with_bracket(obst, "x", "y", {"y": 1})),
        ("obstructed [y,y]=y", with_bracket(obst, "y", "y", {"y": 1})),
        ("obstructed [x,x]=x", with_bracket(obst, "x", "x", {"x": 1})),
        # End(u→v): Leibniz and Jacobi bind because d ≠ 0
        ("endo [v>u,u>v]=id_u-id_v", with_bracket(endo, "v>u", "u>v", {"u>u": 1, "v>v": -1})),
        ("endo [u>u,u>v]=u>v", with_bracket(endo, "u>u", "u>v", {"u>v": 1})),
        ("endo [v>u,v>u]=v>u", with_bracket(endo, "v>u", "v>u", {"v>u": 1})),
        ("endo [u>v,u>v]=u>v", with_bracket(endo, "u>v", "u>v", {"u>v": 1})),
        ("endo [u>u,v>v]=u>u", with_bracket(endo, "u>u", "v>v", {"u>u": 1})),
        # differential corruption
        ("chain d(v)=w", chain_d_squared_bad()),
    ]
