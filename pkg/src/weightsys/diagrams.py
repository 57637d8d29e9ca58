"""Diagram data model: chord diagrams, closed/open Jacobi diagrams, fixed-legged
diagrams, canonicalization with antisymmetry sign tracking, enumeration, the
product of closed diagrams and the leg-averaging closure map.

Conventions
-----------
* Half-edges are integers ``0..H-1``; ``pairing[h]`` is the partner of ``h``
  (a fixed-point-free involution).
* ``verts[v]`` lists the half-edges of vertex ``v``.  Internal trivalent
  vertices carry exactly 3 half-edges whose tuple order is the cyclic order
  (counterclockwise in all transcribed drawings).  Reversing it is an
  antisymmetry flip and costs a sign.
* External vertices (on the Wilson loop) and legs carry exactly 1 half-edge.
* Marked vertices carry 4 half-edges and an integer mark.  Two flavours:
  ``"edge"`` marks keep the pairing split ``(a, b | c, d)`` of the stored
  order, ``"cross"`` marks are the 4-legged cross vertices.  Marked vertices
  take no antisymmetry sign and admit no relabeling freedom.
* ``wilson`` lists the external vertices in loop orientation order; the only
  symmetry of a closed diagram is rotation of this list.  Open diagrams may
  permute their legs freely (no sign); fixed-legged diagrams may not.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

CHORD = "chord"
CLOSED = "closed"
OPEN = "open"
FIXED = "fixed"

_KIND_TAG = {CHORD: 0, CLOSED: 1, OPEN: 2, FIXED: 3}
_JSON_KIND = {CHORD: "chord", CLOSED: "closed-jacobi", OPEN: "open-jacobi", FIXED: "fixed-legged"}
_JSON_KIND_REV = {v: k for k, v in _JSON_KIND.items()}


class DiagramError(ValueError):
    """Structural error: a diagram violates its invariants."""


class CapacityError(ValueError):
    """Requested size exceeds the configured desk-scale bounds."""


@dataclass(frozen=True)
class CanonicalForm:
    key: bytes
    sign: int  # +1, -1 or 0 for antisymmetry-null diagrams


@dataclass(frozen=True)
class Diagram:
    kind: str
    verts: tuple
    pairing: tuple
    wilson: Optional[tuple] = None
    legs: Optional[tuple] = None
    marks: tuple = ()  # ((vertex, mark, "edge"|"cross"), ...)
    _canon: list = field(default=None, compare=False, hash=False, repr=False)

    # -- basic structure -------------------------------------------------

    @property
    def n_half_edges(self):
        return len(self.pairing)

    @property
    def n_vertices(self):
        return len(self.verts)

    def degree(self):
        """Half the total vertex count (always an integer here)."""
        return len(self.verts) // 2

    def mark_of(self, v):
        for vv, m, _t in self.marks:
            if vv == v:
                return m
        return None

    def internal_vertices(self):
        marked = {v for v, _m, _t in self.marks}
        return [v for v, hs in enumerate(self.verts) if len(hs) == 3 or v in marked]

    def external_vertices(self):
        return [v for v, hs in enumerate(self.verts) if len(hs) == 1]

    def validate(self):
        H = len(self.pairing)
        seen = [0] * H
        for hs in self.verts:
            for h in hs:
                if not 0 <= h < H:
                    raise DiagramError("half-edge id out of range")
                seen[h] += 1
        if any(s != 1 for s in seen):
            raise DiagramError("verts do not partition the half-edges")
        for h, p in enumerate(self.pairing):
            if p == h or self.pairing[p] != h:
                raise DiagramError("pairing is not a fixed-point-free involution")
        marked = {v: m for v, m, _t in self.marks}
        for v, hs in enumerate(self.verts):
            if v in marked:
                if len(hs) != 4:
                    raise DiagramError("marked vertex must be 4-valent")
                if marked[v] < 0:
                    raise DiagramError("negative mark")
            elif len(hs) not in (1, 3):
                raise DiagramError("unmarked vertex must be 1- or 3-valent")
        ones = {v for v, hs in enumerate(self.verts) if len(hs) == 1}
        if self.kind in (CHORD, CLOSED):
            if self.legs is not None:
                raise DiagramError("closed kinds carry no legs")
            if self.wilson is None or set(self.wilson) != ones or len(self.wilson) != len(ones):
                raise DiagramError("wilson must list each external vertex once")
            if self.kind == CHORD and len(ones) != len(self.verts):
                raise DiagramError("chord diagrams have no internal vertices")
        else:
            if self.wilson is not None:
                raise DiagramError("open kinds carry no Wilson loop")
            if self.legs is None or set(self.legs) != ones or len(self.legs) != len(ones):
                raise DiagramError("legs must list each univalent vertex once")
        if self.kind == CLOSED:
            # every internal component must touch the Wilson loop
            for comp in self._components():
                if not any(len(self.verts[v]) == 1 for v in comp):
                    raise DiagramError("internal component not touching the Wilson loop")
        if self.kind == OPEN:
            for comp in self._components():
                if not any(v in ones for v in comp):
                    raise DiagramError("open component without a leg")
        return self

    def _components(self):
        nv = len(self.verts)
        vert_of = {}
        for v, hs in enumerate(self.verts):
            for h in hs:
                vert_of[h] = v
        seen = set()
        comps = []
        for v0 in range(nv):
            if v0 in seen:
                continue
            comp = {v0}
            stack = [v0]
            seen.add(v0)
            while stack:
                v = stack.pop()
                for h in self.verts[v]:
                    u = vert_of[self.pairing[h]]
                    if u not in seen:
                        seen.add(u)
                        comp.add(u)
                        stack.append(u)
            comps.append(comp)
        return comps

    # -- canonicalization -------------------------------------------------

    def canonical(self):
        if self._canon is None:
            object.__setattr__(self, "_canon", [_canonicalize(self)])
        return self._canon[0][0]

    def canonical_rep(self):
        self.canonical()
        return self._canon[0][1]

    def __repr__(self):
        return f"Diagram({self.kind}, nv={len(self.verts)}, deg={self.degree()})"


def make(kind, verts, pairing, wilson=None, legs=None, marks=()):
    verts = tuple(tuple(hs) for hs in verts)
    pairing = tuple(pairing)
    wilson = tuple(wilson) if wilson is not None else None
    legs = tuple(legs) if legs is not None else None
    marks = tuple(sorted(tuple(m) for m in marks))
    return Diagram(kind, verts, pairing, wilson, legs, marks).validate()


def from_edges(kind, vertex_slots, edges, wilson=None, legs=None, marks=()):
    """Build a diagram from named vertex slots.

    ``vertex_slots[v]`` is the list of slot names of vertex ``v`` in cyclic
    order; ``edges`` is a list of ((v, name), (u, name)) pairs covering every
    slot exactly once.
    """
    ids = {}
    verts = []
    k = 0
    for v, names in enumerate(vertex_slots):
        hs = []
        for name in names:
            ids[(v, name)] = k
            hs.append(k)
            k += 1
        verts.append(tuple(hs))
    pairing = [None] * k
    for a, b in edges:
        ha, hb = ids[a], ids[b]
        if pairing[ha] is not None or pairing[hb] is not None:
            raise DiagramError(f"slot reused in edge {a}-{b}")
        pairing[ha], pairing[hb] = hb, ha
    if any(p is None for p in pairing):
        raise DiagramError("unmatched slot")
    return make(kind, verts, pairing, wilson=wilson, legs=legs, marks=marks)


_MTYPE_CODE = {"edge": 1, "cross": 2}


def _typemark(d, v, marked):
    hs = d.verts[v]
    if v in marked:
        m, t = marked[v]
        return 3 + 8 * m + 4 * (_MTYPE_CODE[t] - 1)
    if len(hs) == 1:
        return 0 if d.kind in (CHORD, CLOSED) else 1
    return 2


def _canonicalize(d):
    internal = [v for v, hs in enumerate(d.verts) if len(hs) != 1]
    if d.kind in (CHORD, CLOSED) and not internal:
        return _canon_chord(d)
    if d.kind in (OPEN, FIXED):
        comps = d._components()
        if len(comps) > 1:
            if d.kind == FIXED:
                raise DiagramError("disconnected fixed-legged diagrams unsupported")
            return _canon_multi(d, comps)
    return _canon_connected(d)


def _canon_chord(d):
    e = len(d.wilson or ())
    if e == 0:
        key = bytes([_KIND_TAG[CHORD], 0])
        rep = make(CHORD, (), (), wilson=())
        return CanonicalForm(key, 1), rep
    pos = {v: i for i, v in enumerate(d.wilson)}
    half_of = {v: d.verts[v][0] for v in d.wilson}
    vert_of = {}
    for v, hs in enumerate(d.verts):
        for h in hs:
            vert_of[h] = v
    offs = [0] * e
    for i, v in enumerate(d.wilson):
        j = pos[vert_of[d.pairing[half_of[v]]]]
        offs[i] = (j - i) % e
    best = None
    best_r = 0
    for r in range(e):
        cand = bytes(offs[(i + r) % e] for i in range(e))
        if best is None or cand < best:
            best, best_r = cand, r
    key = bytes([_KIND_TAG[CHORD], e]) + best
    verts = tuple((i,) for i in range(e))
    pairing = [0] * e
    for i in range(e):
        pairing[i] = (i + best[i]) % e
    rep = make(CHORD, verts, pairing, wilson=tuple(range(e)))
    return CanonicalForm(key, 1), rep


def _canon_multi(d, comps):
    parts = []
    for comp in sorted(comps, key=min):
        sub = _subdiagram(d, comp)
        cf, rep = _canon_connected(sub)
        parts.append((cf.key, cf.sign, rep))
    parts.sort(key=lambda p: p[0])
    sign = 1
    for _k, s, _r in parts:
        sign *= s
    rep = _concat_open(d.kind, [p[2] for p in parts])
    key = bytes([_KIND_TAG[d.kind], 255]) + b"|".join(p[0] for p in parts)
    return CanonicalForm(key, sign), rep


def _subdiagram(d, comp):
    comp = sorted(comp)
    vmap = {v: i for i, v in enumerate(comp)}
    hmap = {}
    verts = []
    for v in comp:
        hs = []
        for h in d.verts[v]:
            hmap[h] = len(hmap)
            hs.append(hmap[h])
        verts.append(tuple(hs))
    pairing = [None] * len(hmap)
    for h, p in enumerate(d.pairing):
        if h in hmap:
            pairing[hmap[h]] = hmap[p]
    legs = tuple(vmap[v] for v in d.legs if v in vmap) if d.legs else None
    marks = tuple((vmap[v], m, t) for v, m, t in d.marks if v in vmap)
    return make(d.kind, verts, pairing, legs=legs, marks=marks)


def _concat_open(kind, reps):
    verts = []
    pairing = []
    legs = []
    marks = []
    for rep in reps:
        voff = len(verts)
        hoff = len(pairing)
        for hs in rep.verts:
            verts.append(tuple(h + hoff for h in hs))
        pairing.extend(p + hoff for p in rep.pairing)
        legs.extend(v + voff for v in rep.legs)
        marks.extend((v + voff, m, t) for v, m, t in rep.marks)
    return make(kind, verts, pairing, legs=legs, marks=marks)


def _canon_connected(d):
    verts = d.verts
    pairing = d.pairing
    nv = len(verts)
    vert_of = {}
    slot_of = {}
    for v, hs in enumerate(verts):
        for i, h in enumerate(hs):
            vert_of[h] = v
            slot_of[h] = i
    marked = {v: (m, t) for v, m, t in d.marks}
    tmark = [_typemark(d, v, marked) for v in range(nv)]

    if d.kind in (CHORD, CLOSED):
        e = len(d.wilson)
        starts = [tuple(d.wilson[(r + i) % e] for i in range(e)) for r in range(e)]
    elif d.kind == OPEN:
        starts = [(v,) for v in d.legs]
    else:
        starts = [tuple(d.legs)]

    best = None  # (stream, pairing_code)
    best_signs = set()
    best_state = None

    for pre in starts:
        # state: label map, order, pres (chosen slot order), sign, stream
        label0 = {v: i for i, v in enumerate(pre)}
        pres0 = {v: verts[v] for v in pre}
        stack = [(label0, dict(pres0), list(pre), 1, [], 0, 0, 0)]
        # (label, pres, order, sign, stream, vi, si, cmp) cmp: 0 tied, -1 strictly better
        while stack:
            label, pres, order, sign, stream, vi, si, cmp_state = stack.pop()
            if best is not None:
                # the best candidate may have changed since this branch was
                # saved: recompare the whole prefix
                cmp_state = 0
                bs = best[0]
                for k, entry in enumerate(stream):
                    if k >= len(bs) or entry < bs[k]:
                        cmp_state = -1
                        break
                    if entry > bs[k]:
                        cmp_state = 1
                        break
                if cmp_state == 1:
                    continue
            pruned = False
            while vi < len(order):
                v = order[vi]
                hs = pres[v]
                if si >= len(hs):
                    vi += 1
                    si = 0
                    continue
                h = hs[si]
                si += 1
                h2 = pairing[h]
                u = vert_of[h2]
                if u not in label:
                    label[u] = len(order)
                    order.append(u)
                    if tmark[u] == 2:
                        us = verts[u]
                        j = slot_of[h2]
                        fwd = (us[j], us[(j + 1) % 3], us[(j + 2) % 3])
                        bwd = (us[j], us[(j + 2) % 3], us[(j + 1) % 3])
                        # branch on the reversed orientation
                        lbl2 = dict(label)
                        pres2 = dict(pres)
                        pres2[u] = bwd
                        stack.append((lbl2, pres2, list(order), -sign,
                                      list(stream), vi, si, cmp_state))
                        pres[u] = fwd
                    else:
                        pres[u] = verts[u]
                entry = label[u] * 64 + tmark[u]
                stream.append(entry)
                if cmp_state == 0 and best is not None:
                    k = len(stream) - 1
                    bs = best[0]
                    if k < len(bs):
                        if entry > bs[k]:
                            pruned = True
                            break
                        if entry < bs[k]:
                            cmp_state = -1
            if pruned:
                continue
            # complete candidate: build the dart-level pairing code
            code = _pairing_code(d, label, pres, order)
            cand = (tuple(stream), code)
            if best is None or cand < best:
                best = cand
                best_signs = {sign}
                best_state = (dict(label), dict(pres), list(order))
            elif cand == best:
                best_signs.add(sign)

    sign = 0 if len(best_signs) == 2 else best_signs.pop()
    key = _pack_key(d, best)
    rep = _build_rep(d, *best_state)
    return CanonicalForm(key, sign), rep


def _pairing_code(d, label, pres, order):
    dart_id = {}
    for v in order:
        base = label[v] * 4
        for i, h in enumerate(pres[v]):
            dart_id[h] = base + i
    code = []
    for v in order:
        for h in pres[v]:
            code.append(dart_id[d.pairing[h]])
    return tuple(code)


def _pack_key(d, best):
    stream, code = best
    out = bytearray([_KIND_TAG[d.kind]])
    out += len(d.verts).to_bytes(2, "big")
    for x in stream:
        out += x.to_bytes(2, "big")
    out.append(254)
    for x in code:
        out += x.to_bytes(2, "big")
    return bytes(out)


def _build_rep(d, label, pres, order):
    hmap = {}
    verts = []
    for v in order:
        hs = []
        for h in pres[v]:
            hmap[h] = len(hmap)
            hs.append(hmap[h])
        verts.append(tuple(hs))
    pairing = [None] * len(hmap)
    for h, nh in hmap.items():
        pairing[nh] = hmap[d.pairing[h]]
    wilson = None
    legs = None
    if d.kind in (CHORD, CLOSED):
        e = len(d.wilson)
        wilson = tuple(range(e))
    else:
        legs = tuple(sorted(label[v] for v in d.legs))
    marks = tuple(sorted((label[v], m, t) for v, m, t in d.marks))
    return make(d.kind, verts, pairing, wilson=wilson, legs=legs, marks=marks)


# -- linear combinations -------------------------------------------------


class LinComb:
    """Finite formal sum of canonical diagram classes with exact rational
    coefficients.  The class representative of each key is the canonical
    representative diagram (sign +1 by construction)."""

    __slots__ = ("terms", "reps")

    def __init__(self, terms=None, reps=None):
        self.terms = terms or {}
        self.reps = reps or {}

    @classmethod
    def of(cls, *pairs):
        out = cls()
        for coeff, diag in pairs:
            out.add(coeff, diag)
        return out

    def add(self, coeff, diag):
        coeff = Fraction(coeff)
        if not coeff:
            return self
        cf = diag.canonical()
        if cf.sign == 0:
            return self
        c = self.terms.get(cf.key, Fraction(0)) + coeff * cf.sign
        if c:
            self.terms[cf.key] = c
            if cf.key not in self.reps:
                self.reps[cf.key] = diag.canonical_rep()
        else:
            self.terms.pop(cf.key, None)
        return self

    def add_lc(self, other, scale=1):
        scale = Fraction(scale)
        if not scale:
            return self
        for key, c in other.terms.items():
            s = self.terms.get(key, Fraction(0)) + c * scale
            if s:
                self.terms[key] = s
                if key not in self.reps:
                    self.reps[key] = other.reps[key]
            else:
                self.terms.pop(key, None)
        return self

    def __add__(self, other):
        return LinComb(dict(self.terms), dict(self.reps)).add_lc(other)

    def __sub__(self, other):
        return LinComb(dict(self.terms), dict(self.reps)).add_lc(other, -1)

    def __mul__(self, scale):
        scale = Fraction(scale)
        if not scale:
            return LinComb()
        return LinComb({k: c * scale for k, c in self.terms.items()}, dict(self.reps))

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, LinComb) and self.terms == other.terms

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def items(self):
        """(coefficient, representative diagram) per term, key-sorted."""
        return [(self.terms[k], self.reps[k]) for k in sorted(self.terms)]

    def map_diagrams(self, fn):
        """Apply a linear diagram->LinComb map to every term."""
        out = LinComb()
        for key in sorted(self.terms):
            out.add_lc(fn(self.reps[key]), self.terms[key])
        return out

    def __repr__(self):
        return f"LinComb({len(self.terms)} terms)"


# -- constructions -------------------------------------------------------


def empty_diagram():
    return make(CHORD, (), (), wilson=())


def chord_diagram(pairs):
    """Chord diagram on the circle positions appearing in ``pairs``."""
    pts = sorted(p for pair in pairs for p in pair)
    if len(set(pts)) != len(pts):
        raise DiagramError("duplicate circle position")
    pos = {p: i for i, p in enumerate(pts)}
    e = len(pts)
    verts = tuple((i,) for i in range(e))
    pairing = [None] * e
    for a, b in pairs:
        pairing[pos[a]], pairing[pos[b]] = pos[b], pos[a]
    return make(CHORD, verts, pairing, wilson=tuple(range(e)))


def strut():
    return make(OPEN, ((0,), (1,)), (1, 0), legs=(0, 1))


def open_bubble():
    """Two internal vertices joined by a double edge, one leg each (degree 2)."""
    return from_edges(
        OPEN,
        [("l", "P", "Q"), ("l", "P", "Q"), ("e",), ("e",)],
        [((0, "l"), (2, "e")), ((1, "l"), (3, "e")),
         ((0, "P"), (1, "P")), ((0, "Q"), (1, "Q"))],
        legs=(2, 3),
    )


def open_tripod():
    return from_edges(
        OPEN,
        [("a", "b", "c"), ("e",), ("e",), ("e",)],
        [((0, "a"), (1, "e")), ((0, "b"), (2, "e")), ((0, "c"), (3, "e"))],
        legs=(1, 2, 3),
    )


def product(d1, d2):
    """Connected sum of two closed diagrams along their Wilson loops.

    Each factor is cut just before its ``wilson[0]`` and the loops spliced
    in order.  ``product_lc`` feeds canonical representatives here, so at
    the class level the cut point is the canonically smallest external
    vertex.
    """
    for d in (d1, d2):
        if d.kind not in (CHORD, CLOSED):
            raise DiagramError("product needs closed diagrams")
    verts = list(d1.verts)
    voff = len(d1.verts)
    hoff = len(d1.pairing)
    for hs in d2.verts:
        verts.append(tuple(h + hoff for h in hs))
    pairing = list(d1.pairing) + [p + hoff for p in d2.pairing]
    wilson = tuple(d1.wilson) + tuple(v + voff for v in d2.wilson)
    marks = tuple(d1.marks) + tuple((v + voff, m, t) for v, m, t in d2.marks)
    kind = CHORD if (d1.kind == CHORD and d2.kind == CHORD) else CLOSED
    return make(kind, verts, pairing, wilson=wilson, marks=marks)


def product_lc(x, y):
    out = LinComb()
    for cx, dx in x.items():
        for cy, dy in y.items():
            out.add(cx * cy, product(dx, dy))
    return out


def attach_legs(d, order):
    """Close an open or fixed diagram by attaching its legs to a Wilson loop
    in the given order (a sequence of leg vertex ids)."""
    if d.kind not in (OPEN, FIXED):
        raise DiagramError("attach_legs needs a legged diagram")
    if sorted(order) != sorted(d.legs):
        raise DiagramError("order must enumerate the legs")
    vmap = {}
    verts = []
    for v in order:
        vmap[v] = len(verts)
        verts.append(d.verts[v])
    for v, hs in enumerate(d.verts):
        if v not in vmap:
            vmap[v] = len(verts)
            verts.append(hs)
    new_verts = [verts[i] for i in range(len(verts))]
    marks = tuple((vmap[v], m, t) for v, m, t in d.marks)
    wilson = tuple(range(len(order)))
    kind = CHORD if not d.internal_vertices() and not marks else CLOSED
    return make(kind, new_verts, d.pairing, wilson=wilson, marks=marks)


def close(d):
    """The averaging map: (1/l!) sum over all leg orders of the closure."""
    import itertools

    if isinstance(d, LinComb):
        return d.map_diagrams(close)
    if d.kind not in (OPEN, FIXED):
        raise DiagramError("close needs an open or fixed-legged diagram")
    legs = list(d.legs)
    if len(legs) > 8:
        raise CapacityError("closure bound: at most 8 legs")
    out = LinComb()
    coeff = Fraction(1, _factorial(len(legs)))
    for order in itertools.permutations(legs):
        out.add(coeff, attach_legs(d, order))
    return out


def _factorial(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


# -- enumeration ----------------------------------------------------------


def enumerate_chord_diagrams(n, max_degree=8):
    """One canonical representative per rotation class of n-chord diagrams."""
    if not 1 <= n <= max_degree:
        raise CapacityError(f"chord enumeration bound: 1 <= n <= {max_degree}")
    seen = {}
    e = 2 * n

    def rec(free, pairs):
        if not free:
            d = chord_diagram(pairs)
            cf = d.canonical()
            if cf.key not in seen:
                seen[cf.key] = d.canonical_rep()
            return
        a = free[0]
        for i in range(1, len(free)):
            rec(free[1:i] + free[i + 1:], pairs + [(a, free[i])])

    rec(tuple(range(e)), [])
    return [seen[k] for k in sorted(seen)]


def enumerate_connected_open_diagrams(n, max_legs=None, max_degree=7):
    """Connected open Jacobi diagrams of degree ``n`` (2n vertices) with
    between 1 and ``max_legs`` legs, one canonical representative per class,
    antisymmetry-null classes excluded."""
    if not 1 <= n <= max_degree:
        raise CapacityError(f"open enumeration bound: 1 <= n <= {max_degree}")
    if max_legs is None:
        max_legs = n + 1
    out = []
    for l in range(1, min(max_legs, n + 1) + 1):
        out.extend(enumerate_open_sector(n, l))
    return out


def enumerate_open_sector(n, l):
    """Connected open diagrams of degree n with exactly l legs (non-null)."""
    t = 2 * n - l
    if t < 0 or (3 * t + l) % 2 or (t == 0 and l != 2):
        return []
    if t > 0 and l > 3 * t - 2 * (t - 1):
        # a connected graph on t internal vertices uses >= t-1 internal edges
        return []
    seen = {}
    if t == 0:
        d = strut()
        if n == 1:
            cf = d.canonical()
            seen[cf.key] = d.canonical_rep()
        return [seen[k] for k in sorted(seen)]

    # half-edges: internal vertex v -> slots 3v,3v+1,3v+2; leg j -> 3t+j
    H = 3 * t + l
    owner = [h // 3 if h < 3 * t else t + (h - 3 * t) for h in range(H)]
    pairing = [None] * H
    adj = [dict() for _ in range(t + l)]  # multiplicities between vertices

    def profile(v):
        # (touched?, sorted multiset of matched-neighbour profiles) proxy
        return tuple(sorted(adj[v].items()))

    def rec(h):
        while h < H and pairing[h] is not None:
            h += 1
        if h == H:
            finish()
            return
        a = owner[h]
        tried = set()
        for h2 in range(h + 1, H):
            if pairing[h2] is not None:
                continue
            b = owner[h2]
            if b == a:
                continue  # self-loops are antisymmetry-null
            if a >= t and b >= t and t > 0:
                continue  # leg-leg edge disconnects from the internal part
            if adj[a].get(b, 0) >= 2:
                continue  # triple edges close off a legless component
            sig = (b >= t, b, profile(b)) if adj[b] else (b >= t, -1, ())
            # untouched vertices of the same type are interchangeable
            key = sig if adj[b] else (b >= t,)
            if key in tried:
                continue
            tried.add(key)
            pairing[h], pairing[h2] = h2, h
            adj[a][b] = adj[a].get(b, 0) + 1
            adj[b][a] = adj[b].get(a, 0) + 1
            rec(h + 1)
            adj[a][b] -= 1
            adj[b][a] -= 1
            if not adj[a][b]:
                del adj[a][b], adj[b][a]
            pairing[h] = pairing[h2] = None

    def finish():
        # connectivity
        stack = [0]
        comp = {0}
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u not in comp:
                    comp.add(u)
                    stack.append(u)
        if len(comp) != t + l:
            return
        verts = [tuple(range(3 * v, 3 * v + 3)) for v in range(t)]
        verts += [(3 * t + j,) for j in range(l)]
        d = make(OPEN, verts, tuple(pairing), legs=tuple(range(t, t + l)))
        cf = d.canonical()
        if cf.sign != 0 and cf.key not in seen:
            seen[cf.key] = d.canonical_rep()

    rec(0)
    return [seen[k] for k in sorted(seen)]


# -- serialization ---------------------------------------------------------


def to_json_dict(d):
    out = {
        "kind": _JSON_KIND[d.kind],
        "degree": len(d.verts) // 2,
        "half_edges": len(d.pairing),
        "pairing": sorted([h, p] for h, p in enumerate(d.pairing) if h < p),
        "vertices": [list(hs) for hs in d.verts],
        "wilson": list(d.wilson) if d.wilson is not None else None,
        "legs": list(d.legs) if d.legs is not None else None,
        "marks": [[v, m] for v, m, _t in d.marks],
    }
    if any(t == "cross" for _v, _m, t in d.marks):
        out["mark_kinds"] = [t for _v, _m, t in d.marks]
    return out


def from_json_dict(obj):
    kind = _JSON_KIND_REV[obj["kind"]]
    H = obj["half_edges"]
    pairing = [None] * H
    for a, b in obj["pairing"]:
        pairing[a], pairing[b] = b, a
    kinds = obj.get("mark_kinds")
    marks = []
    for i, (v, m) in enumerate(obj.get("marks") or []):
        marks.append((v, m, kinds[i] if kinds else "edge"))
    return make(
        kind,
        [tuple(hs) for hs in obj["vertices"]],
        pairing,
        wilson=obj.get("wilson"),
        legs=obj.get("legs"),
        marks=marks,
    )


def to_json(d):
    return json.dumps(to_json_dict(d), sort_keys=True)


def from_json(text):
    return from_json_dict(json.loads(text))


def to_dot(d):
    """DOT text: external vertices chained on the Wilson loop, internal
    vertices as points.  The first comment line carries the JSON form."""
    lines = [f"// weightsys-json: {to_json(d)}", "graph diagram {"]
    ones = set(d.external_vertices())
    for v in range(len(d.verts)):
        if d.wilson is not None and v in ones:
            lines.append(f'  v{v} [shape=circle, label="{v}"];')
        elif d.legs is not None and v in ones:
            lines.append(f'  v{v} [shape=none, label="leg"];')
        else:
            m = d.mark_of(v)
            label = "" if m is None else str(m)
            lines.append(f'  v{v} [shape=point, label="{label}"];')
    if d.wilson:
        w = list(d.wilson)
        for i, v in enumerate(w):
            lines.append(f"  v{v} -- v{w[(i + 1) % len(w)]} [style=bold];")
    vert_of = {}
    for v, hs in enumerate(d.verts):
        for h in hs:
            vert_of[h] = v
    for h, p in enumerate(d.pairing):
        if h < p:
            lines.append(f"  v{vert_of[h]} -- v{vert_of[p]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def from_dot(text):
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("// weightsys-json: "):
            return from_json(line[len("// weightsys-json: "):])
    raise DiagramError("no weightsys-json metadata comment in DOT input")
