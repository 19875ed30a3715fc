"""Finite abstract simplicial complexes on ordinal vertices, exact homology.

Reduced integral homology is computed from Smith normal forms of boundary
matrices over arbitrary-precision integers; no floating point or probabilistic
rank shortcuts.  Good graphs (cycle-free with all tails connected) and their
n-dimensional generalization, tail-acyclic complexes with complete lower
skeleton, are checked by definition; the graphs carved out by families of
walks supply the standard examples.
"""

from __future__ import annotations

import itertools
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from higherwalks.basis import BasisSpec, members_in_window
from higherwalks.ladders import LadderSystem
from higherwalks.ordinals import Ordinal, as_ordinal
from higherwalks.walks import upper_trace

OrdTuple = Tuple[Ordinal, ...]
Edge = FrozenSet[Ordinal]


def _extended_gcd(a: int, b: int) -> Tuple[int, int, int]:
    """(g, u, v) with u*a + v*b = g = gcd(a, b)."""
    old_r, r = a, b
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_u, u = u, old_u - q * u
        old_v, v = v, old_v - q * v
    return old_r, old_u, old_v


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> List[int]:
    """Nonzero invariant factors of an integer matrix, each dividing the next.

    Elimination is by unimodular Bezout combinations, which replace the pivot
    by a gcd in one step; iterated remainder swaps are avoided because they
    inflate entries exponentially.  Boundary matrices have unit pivots, so the
    plain-subtraction path does almost all of the work there.
    """
    A = [list(row) for row in matrix]
    m = len(A)
    n = len(A[0]) if m else 0
    diag: List[int] = []
    t = 0
    while t < min(m, n):
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                v = A[i][j]
                if v and (pivot is None or abs(v) < abs(A[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        i0, j0 = pivot
        A[t], A[i0] = A[i0], A[t]
        if j0 != t:
            for row in A:
                row[t], row[j0] = row[j0], row[t]
        while True:
            for i in range(t + 1, m):
                b = A[i][t]
                if not b:
                    continue
                a = A[t][t]
                if b % a:
                    g, u, v = _extended_gcd(a, b)
                    p, q = -(b // g), a // g
                    A[t], A[i] = (
                        [u * x + v * y for x, y in zip(A[t], A[i])],
                        [p * x + q * y for x, y in zip(A[t], A[i])],
                    )
                else:
                    q = b // a
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
            for j in range(t + 1, n):
                b = A[t][j]
                if not b:
                    continue
                a = A[t][t]
                if b % a:
                    g, u, v = _extended_gcd(a, b)
                    p, q = -(b // g), a // g
                    for row in A:
                        x, y = row[t], row[j]
                        row[t], row[j] = u * x + v * y, p * x + q * y
                else:
                    q = b // a
                    for row in A:
                        row[j] -= q * row[t]
            if any(A[i][t] for i in range(t + 1, m)) or any(A[t][j] for j in range(t + 1, n)):
                continue
            fixup = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % A[t][t]:
                        fixup = i
                        break
                if fixup is not None:
                    break
            if fixup is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[fixup])]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


class Complex:
    """Downward-closed face set over a fixed ordinal vertex list."""

    def __init__(self, vertices: Iterable, faces: Iterable[Iterable] = ()):
        self.vertices: OrdTuple = tuple(sorted({as_ordinal(v) for v in vertices}))
        vertex_set = set(self.vertices)
        closed: Set[FrozenSet[Ordinal]] = {frozenset((v,)) for v in self.vertices}
        queue = [frozenset(as_ordinal(x) for x in face) for face in faces]
        for face in queue:
            if not face <= vertex_set:
                raise ValueError("face uses a vertex outside the vertex list")
        while queue:
            face = queue.pop()
            if not face or face in closed:
                continue
            closed.add(face)
            for v in face:
                sub = face - {v}
                if sub and sub not in closed:
                    queue.append(sub)
        self.faces: FrozenSet[FrozenSet[Ordinal]] = frozenset(closed)

    @property
    def dimension(self) -> int:
        if not self.faces:
            return -1
        return max(len(f) for f in self.faces) - 1

    def faces_of_dim(self, k: int) -> List[OrdTuple]:
        out = [tuple(sorted(f)) for f in self.faces if len(f) == k + 1]
        return sorted(out)

    def restrict_tail(self, alpha) -> "Complex":
        """The induced subcomplex on vertices >= alpha."""
        alpha = as_ordinal(alpha)
        keep = [v for v in self.vertices if v >= alpha]
        keep_set = set(keep)
        faces = [f for f in self.faces if f <= keep_set]
        return Complex(keep, faces)

    def boundary_matrix(self, k: int) -> List[List[int]]:
        """The degree-k boundary with the reduced convention at k = 0."""
        cols = self.faces_of_dim(k)
        if k == 0:
            return [[1] * len(cols)] if cols else []
        rows = {f: i for i, f in enumerate(self.faces_of_dim(k - 1))}
        matrix = [[0] * len(cols) for _ in rows]
        for j, face in enumerate(cols):
            for i in range(len(face)):
                sub = face[:i] + face[i + 1 :]
                matrix[rows[sub]][j] = (-1) ** i
        return matrix


def reduced_homology(cx: Complex) -> Dict[int, Tuple[int, Tuple[int, ...]]]:
    """degree -> (betti number, torsion coefficients), reduced convention."""
    dim = cx.dimension
    report: Dict[int, Tuple[int, Tuple[int, ...]]] = {}
    if dim < 0:
        return report
    diags = {}
    for k in range(dim + 2):
        diags[k] = smith_normal_form(cx.boundary_matrix(k)) if k <= dim else []
    for k in range(dim + 1):
        n_faces = len(cx.faces_of_dim(k))
        rank_k = len(diags[k])
        rank_up = len(diags[k + 1])
        betti = n_faces - rank_k - rank_up
        torsion = tuple(d for d in diags[k + 1] if d > 1)
        report[k] = (betti, torsion)
    return report


def is_acyclic_everywhere(cx: Complex) -> bool:
    return all(b == 0 and not tor for b, tor in reduced_homology(cx).values())


# ---------------------------------------------------------------------------
# graphs


def _components(vertices: Sequence[Ordinal], edges: Iterable[Edge]) -> int:
    index = {v: i for i, v in enumerate(vertices)}
    parent = list(range(len(vertices)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for edge in edges:
        a, b = tuple(edge)
        ra, rb = find(index[a]), find(index[b])
        if ra != rb:
            parent[ra] = rb
    return len({find(i) for i in range(len(vertices))})


def _has_cycle(vertices: Sequence[Ordinal], edges: Iterable[Edge]) -> bool:
    index = {v: i for i, v in enumerate(vertices)}
    parent = list(range(len(vertices)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for edge in edges:
        a, b = tuple(edge)
        ra, rb = find(index[a]), find(index[b])
        if ra == rb:
            return True
        parent[ra] = rb
    return False


def has_forbidden_configuration(edges: Iterable[Edge]) -> bool:
    """Some vertex with two distinct neighbors above it."""
    ups: Dict[Ordinal, int] = {}
    for edge in edges:
        a, b = sorted(edge)
        ups[a] = ups.get(a, 0) + 1
        if ups[a] >= 2:
            return True
    return False


def is_good_graph(vertices: Sequence, edges: Iterable[Iterable]) -> bool:
    """Cycle-free with every terminal segment of the vertex list connected."""
    vertices = sorted({as_ordinal(v) for v in vertices})
    edge_set = {frozenset((as_ordinal(a), as_ordinal(b))) for a, b in edges}
    for e in edge_set:
        if len(e) != 2 or not set(e) <= set(vertices):
            raise ValueError("edges must join two distinct listed vertices")
    if _has_cycle(vertices, edge_set):
        good = False
    else:
        good = True
        for alpha in vertices:
            tail = [v for v in vertices if v >= alpha]
            tail_edges = [e for e in edge_set if all(v >= alpha for v in e)]
            if _components(tail, tail_edges) != 1:
                good = False
                break
    if vertices and _components(vertices, edge_set) == 1:
        assert good == (not has_forbidden_configuration(edge_set))
    return good


def walk_graph(sys: LadderSystem, gamma, alphas: Optional[Sequence] = None) -> Tuple[List[Edge], bool]:
    """Steps of all walks down from gamma, as edges on gamma+1.

    With no explicit starting points the whole of a finite gamma is walked and
    the edge set is complete; otherwise the result is flagged truncated.
    """
    gamma = as_ordinal(gamma)
    truncated = False
    if alphas is None:
        if not gamma.is_natural:
            raise ValueError("supply starting points to window an infinite ordinal")
        starts = [Ordinal.from_int(i) for i in range(gamma.to_int())]
    else:
        starts = sorted({as_ordinal(a) for a in alphas})
        if any(not a < gamma for a in starts):
            raise ValueError("starting points must lie below gamma")
        truncated = not gamma.is_natural or len(starts) < gamma.to_int()
    edges: Set[Edge] = set()
    for alpha in starts:
        steps = upper_trace(sys, alpha, gamma).steps
        for a, b in zip(steps, steps[1:]):
            edges.add(frozenset((a, b)))
    return sorted(edges, key=lambda e: tuple(sorted(e))), truncated


def elementary_good_graph(sys: LadderSystem, gamma, alphas: Optional[Sequence] = None) -> Tuple[List[Edge], bool]:
    """One ladder step above each starting point: {alpha, min(C_gamma above alpha)}."""
    gamma = as_ordinal(gamma)
    truncated = False
    if alphas is None:
        if not gamma.is_natural:
            raise ValueError("supply starting points to window an infinite ordinal")
        starts = [Ordinal.from_int(i) for i in range(gamma.to_int())]
    else:
        starts = sorted({as_ordinal(a) for a in alphas})
        truncated = True
    edges: Set[Edge] = set()
    for alpha in starts:
        up = sys.step((gamma,), alpha)
        if up is not None:
            edges.add(frozenset((alpha, up)))
    return sorted(edges, key=lambda e: tuple(sorted(e))), truncated


def is_tail_acyclic(cx: Complex) -> bool:
    """Complete (n-1)-skeleton and vanishing reduced homology on every tail."""
    n = cx.dimension
    if n < 0:
        return True
    for sub in itertools.combinations(cx.vertices, n):
        if frozenset(sub) not in cx.faces:
            return False
    for alpha in cx.vertices:
        if not is_acyclic_everywhere(cx.restrict_tail(alpha)):
            return False
    return True


def basis_to_complex(spec: BasisSpec, vertices: Sequence) -> Tuple[Complex, bool]:
    """Downward closure of the windowed basis members, flagged when truncated."""
    verts = sorted({as_ordinal(v) for v in vertices})
    members = members_in_window(spec, verts)
    truncated = spec.eps is None or not spec.eps.is_natural or len(verts) < spec.eps.to_int()
    return Complex(verts, members), truncated
