"""H-polytopes with exact vertex enumeration and face dimensions.

A polytope is {x in R^d : <x, normal_i> + offset_i >= 0}.  Vertices
come from solving all d-subsets of tight constraints; dimensions of the
polytope and of its faces come from the rank of the implicit-equality
normals, detected by exact feasibility tests rather than by inspecting
vertex coordinates (which would miss unbounded or thin cases).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

from . import lp
from .errors import DimensionMismatchError
from .linalg import Matrix, Vec, dot, rank, solve_unique, vec
from .scalar import S1, Scalar


@dataclass(frozen=True)
class HPolytope:
    """Intersection of half-spaces <x, normals[i]> + offsets[i] >= 0."""

    ambient_dim: int
    normals: tuple[Vec, ...]
    offsets: tuple[Scalar, ...]

    def __post_init__(self):
        object.__setattr__(self, "normals", tuple(vec(nr) for nr in self.normals))
        object.__setattr__(self, "offsets", tuple(Scalar.coerce(o) for o in self.offsets))
        if len(self.normals) != len(self.offsets):
            raise DimensionMismatchError("normals and offsets count differ")
        if any(len(nr) != self.ambient_dim for nr in self.normals):
            raise DimensionMismatchError("normal length differs from ambient dimension")

    @classmethod
    def from_parameter(cls, calibration, b: Sequence) -> "HPolytope":
        """P_b = {x : <x, h(e_i)> >= -b_i for every generator}."""
        bb = vec(b)
        if len(bb) != calibration.n:
            raise DimensionMismatchError("parameter length differs from n")
        return cls(calibration.d, tuple(calibration.columns), bb)

    @property
    def nfacets(self) -> int:
        return len(self.normals)

    def constraints(self) -> list[lp.Constraint]:
        return [lp.ge(nr, o) for nr, o in zip(self.normals, self.offsets)]

    def contains(self, x: Sequence) -> bool:
        xx = vec(x)
        return all((dot(nr, xx) + o).sign() >= 0 for nr, o in zip(self.normals, self.offsets))

    def tight_at(self, x: Sequence) -> frozenset[int]:
        xx = vec(x)
        return frozenset(
            i for i, (nr, o) in enumerate(zip(self.normals, self.offsets))
            if (dot(nr, xx) + o).is_zero()
        )

    def interior_point(self) -> Optional[Vec]:
        return lp.find_point([lp.gt(nr, o) for nr, o in zip(self.normals, self.offsets)],
                             self.ambient_dim)

    def is_empty(self) -> bool:
        return not lp.feasible(self.constraints(), self.ambient_dim)

    def _implicit_equalities(self, extra_eq: Sequence[int] = ()) -> Optional[list[int]]:
        """Indices forced tight on the face where extra_eq are tight.

        Returns None when that face is empty.
        """
        base = []
        for i in range(self.nfacets):
            rel = lp.EQ if i in extra_eq else lp.GE
            base.append(lp.con(self.normals[i], self.offsets[i], rel))
        if not lp.feasible(base, self.ambient_dim):
            return None
        implicit = list(extra_eq)
        for i in range(self.nfacets):
            if i in extra_eq:
                continue
            probe = list(base)
            probe[i] = lp.gt(self.normals[i], self.offsets[i])
            if not lp.feasible(probe, self.ambient_dim):
                implicit.append(i)
        return implicit

    def dimension(self) -> int:
        """Affine dimension, -1 for the empty set."""
        implicit = self._implicit_equalities()
        if implicit is None:
            return -1
        if not implicit:
            return self.ambient_dim
        return self.ambient_dim - rank(Matrix([self.normals[i] for i in implicit]))

    def facet_dim(self, i: int) -> int:
        """Dimension of the face where constraint i is tight (0-based i)."""
        return self.face_dim((i,))

    def face_dim(self, tight: Sequence[int]) -> int:
        """Dimension of the face where all listed constraints are tight."""
        implicit = self._implicit_equalities(tuple(tight))
        if implicit is None:
            return -1
        if not implicit:
            return self.ambient_dim
        return self.ambient_dim - rank(Matrix([self.normals[j] for j in implicit]))

    def facet_indices(self) -> list[int]:
        d = self.ambient_dim
        return [i for i in range(self.nfacets) if self.facet_dim(i) == d - 1]

    def vertices(self) -> list[tuple[Vec, frozenset[int]]]:
        """All vertices with their full tight-constraint sets, sorted.

        A candidate comes from every d-subset of constraints whose
        normals are independent; coincident solutions merge into one
        vertex whose tight set is recomputed against all constraints.
        """
        d = self.ambient_dim
        seen: dict[Vec, frozenset[int]] = {}
        for subset in combinations(range(self.nfacets), d):
            M = Matrix([self.normals[i] for i in subset])
            x = solve_unique(M, [-self.offsets[i] for i in subset])
            if x is None or x in seen or not self.contains(x):
                continue
            seen[x] = self.tight_at(x)
        return sorted(seen.items())

    def is_bounded(self) -> bool:
        """True when the recession cone {x : <x, normal_i> >= 0} is {0}."""
        rows = [lp.ge(nr, 0) for nr in self.normals]
        d = self.ambient_dim
        unit = [0] * d
        for j in range(d):
            for s in (1, -1):
                unit[j] = s
                if lp.feasible(rows + [lp.eq(unit, -1 if s > 0 else 1)], d):
                    return False
            unit[j] = 0
        return True

    def is_simple(self) -> bool:
        """Every vertex lies on exactly d facets."""
        facets = set(self.facet_indices())
        verts = self.vertices()
        if not verts:
            return False
        return all(len(t & facets) == self.ambient_dim for _, t in verts)

    def to_json(self) -> dict:
        verts = self.vertices()
        return {
            "ambient_dim": self.ambient_dim,
            "normals": [[x.to_json() for x in nr] for nr in self.normals],
            "offsets": [o.to_json() for o in self.offsets],
            "dimension": self.dimension(),
            "bounded": self.is_bounded(),
            "vertices": [[x.to_json() for x in v] for v, _ in verts],
            "vertex_tight_sets": [sorted(i + 1 for i in t) for _, t in verts],
        }


def virtual_indices(calibration, b: Sequence) -> frozenset[int]:
    """1-based generators whose constraint does not cut a facet of P_b."""
    P = HPolytope.from_parameter(calibration, b)
    d = calibration.d
    return frozenset(i + 1 for i in range(calibration.n) if P.facet_dim(i) < d - 1)


class VertexOracle:
    """Fast repeated vertex-combinatorics queries for one calibration.

    The inverse of every invertible d-subset of constraint normals is
    precomputed once; classifying a parameter b then costs one small
    matrix-vector product per subset plus feasibility dot products.
    Intended for generic b, where the tight d-subsets are exactly the
    maximal cones of the normal fan.
    """

    def __init__(self, calibration):
        self.calibration = calibration
        d, n = calibration.d, calibration.n
        self.subsets = []
        for J in combinations(range(n), d):
            M = Matrix([calibration.columns[j] for j in J])
            cols = []
            for r in range(d):
                e = [S1 if i == r else Scalar(0) for i in range(d)]
                col = solve_unique(M, e)
                if col is None:
                    break
                cols.append(col)
            else:
                self.subsets.append((J, Matrix.from_columns(cols, nrows=d)))

    def comb_key(self, b: Sequence) -> frozenset:
        """The set of 1-based tight d-subsets that are vertices of P_b."""
        cal = self.calibration
        bb = vec(b)
        out = []
        for J, Minv in self.subsets:
            x = Minv.matvec([-bb[j] for j in J])
            ok = True
            for i, (nr, o) in enumerate(zip(cal.columns, bb)):
                if i in J:
                    continue
                if (dot(nr, x) + o).sign() < 0:
                    ok = False
                    break
            if ok:
                out.append(frozenset(j + 1 for j in J))
        return frozenset(out)


def cone_is_pointed(generators: Sequence[Vec], d: int) -> bool:
    """No nonzero nonnegative combination of the generators vanishes."""
    if not generators:
        return True
    n = len(generators)
    # lambda >= 0, sum lambda = 1, sum lambda_i g_i = 0 feasible <=> not pointed
    cons = [lp.ge([S1 if j == i else 0 for j in range(n)], 0) for i in range(n)]
    cons.append(lp.eq([1] * n, -1))
    for coord in range(d):
        cons.append(lp.eq([g[coord] for g in generators], 0))
    return not lp.feasible(cons, n)
