"""Quantum fans: indexed cone collections over a calibration.

A fan stores its maximal cones as 1-based generator index subsets; all
geometry (containment, faces, convexity) is recomputed from the
calibration columns on demand through exact feasibility tests.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cmp_to_key
from itertools import combinations
from typing import Iterator, NamedTuple, Optional, Sequence

from . import lp
from .errors import (
    DimensionMismatchError,
    NotAdmissibleError,
    UnsupportedDimensionError,
)
from .linalg import (
    Calibration,
    Matrix,
    Vec,
    dot,
    is_zero_vec,
    kernel_basis,
    normalize_direction,
    rank,
    solve,
    solve_unique,
    vec,
    vscale,
    integer_kernel_rank,
)
from .polytope import HPolytope
from .scalar import S0, S1, Scalar

IndexSet = frozenset


def _cols(cal: Calibration, indices) -> list[Vec]:
    return [cal.column(i) for i in sorted(indices)]


def cone_dim(cal: Calibration, sigma) -> int:
    if not sigma:
        return 0
    return rank(Matrix(_cols(cal, sigma)))


def cone_is_strongly_convex(cal: Calibration, sigma) -> bool:
    """Exact test: some w has <w, h(e_i)> > 0 for every generator of sigma."""
    if not sigma:
        return True
    cons = [lp.gt(cal.column(i), 0) for i in sorted(sigma)]
    return lp.feasible(cons, cal.d)


def cone_contains(cal: Calibration, sigma, x: Sequence) -> bool:
    """Membership of x in Cone(h(e_i), i in sigma)."""
    gens = _cols(cal, sigma)
    xx = vec(x)
    if not gens:
        return is_zero_vec(xx)
    k = len(gens)
    cons = [lp.ge([S1 if j == i else S0 for j in range(k)], 0) for i in range(k)]
    for coord in range(cal.d):
        cons.append(lp.eq([g[coord] for g in gens], -xx[coord]))
    return lp.feasible(cons, k)


def is_face(cal: Calibration, J, sigma) -> bool:
    """J is a face of sigma: a supporting functional vanishes exactly on J."""
    J, sigma = frozenset(J), frozenset(sigma)
    if not J <= sigma:
        return False
    cons = [lp.eq(cal.column(j), 0) for j in sorted(J)]
    cons += [lp.gt(cal.column(j), 0) for j in sorted(sigma - J)]
    return lp.feasible(cons, cal.d)


def faces_of(cal: Calibration, sigma) -> list[IndexSet]:
    sigma = frozenset(sigma)
    out = []
    for r in range(len(sigma) + 1):
        for J in combinations(sorted(sigma), r):
            if is_face(cal, J, sigma):
                out.append(frozenset(J))
    return out


def facets_of(cal: Calibration, sigma) -> list[IndexSet]:
    """Faces one dimension below sigma."""
    target = cone_dim(cal, sigma) - 1
    return [J for J in faces_of(cal, sigma) if frozenset(J) != frozenset(sigma)
            and cone_dim(cal, J) == target]


@dataclass(frozen=True)
class CombinatorialType:
    """A fan's face poset recorded as index subsets, closed under faces."""

    n: int
    poset: frozenset

    def __post_init__(self):
        object.__setattr__(self, "poset", frozenset(frozenset(s) for s in self.poset))

    @property
    def ground(self) -> frozenset:
        out: set[int] = set()
        for s in self.poset:
            out |= s
        return frozenset(out)

    def maximal_sets(self) -> list[IndexSet]:
        return [s for s in self.poset
                if not any(s < t for t in self.poset)]

    @classmethod
    def s_type(cls, d: int) -> "CombinatorialType":
        """Projective-space type: subsets of {1..d+1} of size at most d."""
        ground = range(1, d + 2)
        sets = [frozenset(J) for r in range(d + 1) for J in combinations(ground, r)]
        return cls(d + 1, frozenset(sets))

    @classmethod
    def c_type(cls, n: int) -> "CombinatorialType":
        """Cycle type: empty set, singletons, cyclically consecutive pairs."""
        sets = [frozenset()]
        sets += [frozenset((i,)) for i in range(1, n + 1)]
        sets += [frozenset((i, i % n + 1)) for i in range(1, n + 1)]
        return cls(n, frozenset(sets))

    def is_isomorphic_to(self, other: "CombinatorialType") -> bool:
        return next(_poset_bijections(self, other), None) is not None

    def to_json(self) -> list:
        return sorted(sorted(s) for s in self.poset)

    def __repr__(self):
        return f"CombinatorialType({self.to_json()})"


def _signature(poset, i: int):
    return tuple(sorted(Counter(len(s) for s in poset if i in s).items()))


def _poset_bijections(t1: CombinatorialType, t2: CombinatorialType) -> Iterator[dict]:
    """All ground bijections mapping t1's poset onto t2's, in lexicographic
    order of the image of the sorted ground set."""
    g1, g2 = sorted(t1.ground), sorted(t2.ground)
    if len(g1) != len(g2) or len(t1.poset) != len(t2.poset):
        return
    if Counter(len(s) for s in t1.poset) != Counter(len(s) for s in t2.poset):
        return
    sig2 = {i: _signature(t2.poset, i) for i in g2}
    sig1 = {i: _signature(t1.poset, i) for i in g1}
    p2 = t2.poset

    def extend(pos: int, perm: dict, used: set) -> Iterator[dict]:
        if pos == len(g1):
            if frozenset(frozenset(perm[i] for i in s) for s in t1.poset) == p2:
                yield dict(perm)
            return
        i = g1[pos]
        for j in g2:
            if j in used or sig1[i] != sig2[j]:
                continue
            perm[i] = j
            used.add(j)
            # prune on poset sets that are now fully mapped
            ok = all(frozenset(perm[x] for x in s) in p2
                     for s in t1.poset if s and s <= set(perm))
            if ok:
                yield from extend(pos + 1, perm, used)
            used.discard(j)
            del perm[i]

    yield from extend(0, {}, set())


def fan_automorphisms(t: CombinatorialType) -> list[dict]:
    """All ground permutations preserving the poset, sorted lexicographically."""
    return list(_poset_bijections(t, t))


@dataclass(frozen=True)
class QuantumFan:
    """(Delta, h, I): maximal cones as index subsets plus the virtual set."""

    calibration: Calibration
    max_cones: tuple
    virtual: frozenset = field(default_factory=frozenset)
    complete: bool = True

    def __post_init__(self):
        cones = tuple(sorted((frozenset(s) for s in self.max_cones), key=sorted))
        object.__setattr__(self, "max_cones", cones)
        object.__setattr__(self, "virtual", frozenset(self.virtual))

    @property
    def d(self) -> int:
        return self.calibration.d

    @property
    def n(self) -> int:
        return self.calibration.n

    def rays(self) -> list[int]:
        out: set[int] = set()
        for s in self.max_cones:
            out |= s
        return sorted(out)

    def is_simplicial(self) -> bool:
        return all(len(s) == cone_dim(self.calibration, s) for s in self.max_cones)

    def cone_containing(self, x: Sequence) -> Optional[IndexSet]:
        for s in self.max_cones:
            if cone_contains(self.calibration, s, x):
                return s
        return None

    def to_json(self) -> dict:
        return {
            "max_cones": [sorted(s) for s in self.max_cones],
            "virtual": sorted(self.virtual),
            "complete": self.complete,
        }

    @classmethod
    def from_json(cls, cal: Calibration, data: dict) -> "QuantumFan":
        return cls(cal, tuple(frozenset(s) for s in data["max_cones"]),
                   frozenset(data.get("virtual", [])), bool(data.get("complete", True)))


def normal_fan(cal: Calibration, b: Sequence) -> QuantumFan:
    """The normal fan of P_b with its virtual generator set.

    One maximal cone per vertex, generated by the facet-cutting tight
    constraints; generators whose face has dimension below d-1 (or is
    empty) become virtual.
    """
    P = HPolytope.from_parameter(cal, b)
    d = cal.d
    fdims = [P.facet_dim(i) for i in range(cal.n)]
    if P.dimension() != d:
        raise NotAdmissibleError("P_b is empty or lower-dimensional")
    if not P.is_bounded():
        raise NotAdmissibleError("P_b is unbounded, its normal fan is not complete")
    facet_set = {i for i in range(cal.n) if fdims[i] == d - 1}
    virtual = frozenset(i + 1 for i in range(cal.n) if fdims[i] < d - 1)
    cones = set()
    for _, tight in P.vertices():
        cones.add(frozenset(i + 1 for i in tight & facet_set))
    return QuantumFan(cal, tuple(cones), virtual, complete=True)


def is_admissible_parameter(cal: Calibration, b: Sequence) -> bool:
    P = HPolytope.from_parameter(cal, b)
    return P.dimension() == cal.d and P.is_bounded()


def combinatorial_type(f: QuantumFan) -> CombinatorialType:
    sets: set[IndexSet] = set()
    for sigma in f.max_cones:
        sets.update(faces_of(f.calibration, sigma))
        sets.add(frozenset(sigma))
    return CombinatorialType(f.n, frozenset(sets))


def _collinear_positive(u: Vec, v: Vec) -> bool:
    return normalize_direction(u) == normalize_direction(v) and dot(u, v).sign() > 0


def star_subdivision(f: QuantumFan, i: int) -> QuantumFan:
    """Insert the ray h(e_i): cones containing it are replaced by the joins
    of i with their i-free facets; i leaves the virtual set."""
    cal = f.calibration
    v = cal.column(i)
    if f.cone_containing(v) is None:
        raise NotAdmissibleError(f"h(e_{i}) lies outside the fan support")
    for j in f.rays():
        if _collinear_positive(cal.column(j), v):
            # the ray is already present: nothing to subdivide
            return QuantumFan(cal, f.max_cones, f.virtual - {i}, f.complete)
    new_cones = []
    for sigma in f.max_cones:
        if not cone_contains(cal, sigma, v):
            new_cones.append(sigma)
            continue
        for tau in facets_of(cal, sigma):
            if not cone_contains(cal, tau, v):
                new_cones.append(frozenset(tau) | {i})
    return QuantumFan(cal, tuple(new_cones), f.virtual - {i}, f.complete)


# -- planar angular order ------------------------------------------------


def _half(u: Vec) -> int:
    """0 for angles in [0, pi), 1 for [pi, 2pi)."""
    s1 = u[1].sign()
    if s1 > 0 or (s1 == 0 and u[0].sign() > 0):
        return 0
    return 1


def _cross(u: Vec, v: Vec) -> Scalar:
    return u[0] * v[1] - u[1] * v[0]


def angular_compare(u: Vec, v: Vec) -> int:
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return -1 if hu < hv else 1
    return -_cross(u, v).sign()


def sort_rays_by_angle(cal: Calibration, indices) -> list[int]:
    if cal.d != 2:
        raise UnsupportedDimensionError("angular sort needs d = 2")
    return sorted(indices, key=cmp_to_key(
        lambda a, b: angular_compare(cal.column(a), cal.column(b))))


def fan_from_rays(cal: Calibration, ray_indices, virtual=frozenset()) -> QuantumFan:
    """The complete d = 2 fan whose maximal cones are consecutive angular
    sectors between the given rays."""
    order = sort_rays_by_angle(cal, set(ray_indices))
    if len(order) < 3:
        raise NotAdmissibleError("a complete planar fan needs at least 3 rays")
    cones = [frozenset((order[k], order[(k + 1) % len(order)]))
             for k in range(len(order))]
    return QuantumFan(cal, tuple(cones), frozenset(virtual), complete=True)


def common_refinement(f1: QuantumFan, f2: QuantumFan):
    """Coarsest common refinement of two complete fans over one calibration.

    d = 2: angular merge of the ray-index union, returned as a QuantumFan.
    d = 3: pairwise full-dimensional cone intersections; the overlay can
    create rays that are no generator column (the center of a flipped
    square cone), so the result is a tuple of geometric cones, each a
    frozenset of normalized extreme-ray vectors.
    """
    if f1.calibration.columns != f2.calibration.columns:
        raise DimensionMismatchError("refinement requires one calibration")
    cal = f1.calibration
    virtual = f1.virtual & f2.virtual
    if cal.d == 2:
        return fan_from_rays(cal, set(f1.rays()) | set(f2.rays()), virtual)
    if cal.d != 3:
        raise UnsupportedDimensionError("refinement implemented for d <= 3")
    cones = set()
    for s1 in f1.max_cones:
        for s2 in f2.max_cones:
            inter = _cone_intersection_rays(cal, s1, s2)
            if inter is not None:
                cones.add(inter)
    return tuple(sorted(cones, key=sorted))


def _cone_hrep(cal: Calibration, sigma) -> list[Vec]:
    """Facet normals w (cone = {x : <w,x> >= 0 for all w}) of a
    full-dimensional cone in d = 3."""
    gens = _cols(cal, sigma)
    normals = []
    for g1, g2 in combinations(gens, 2):
        w = (g1[1] * g2[2] - g1[2] * g2[1],
             g1[2] * g2[0] - g1[0] * g2[2],
             g1[0] * g2[1] - g1[1] * g2[0])
        if is_zero_vec(w):
            continue
        signs = {dot(w, g).sign() for g in gens}
        if 1 in signs and -1 in signs:
            continue
        if -1 in signs:
            w = vscale(-1, w)
        normals.append(normalize_direction(w))
    return sorted(set(normals))


def _cone_intersection_rays(cal: Calibration, s1, s2) -> Optional[frozenset]:
    """Extreme rays of cone(s1) & cone(s2) in d = 3, or None when the
    intersection is lower-dimensional."""
    cons = [lp.ge(w, 0) for w in _cone_hrep(cal, s1) + _cone_hrep(cal, s2)]
    if lp.find_point([lp.con(c.coeffs, c.const, lp.GT) for c in cons], 3) is None:
        return None
    # extreme rays: intersections of facet-normal pairs lying in the cone
    rays = set()
    for c1, c2 in combinations(cons, 2):
        kern = kernel_basis(Matrix([c1.coeffs, c2.coeffs]))
        if len(kern) != 1:
            continue
        for r in (kern[0], vscale(-1, kern[0])):
            if all(dot(c.coeffs, r).sign() >= 0 for c in cons):
                rays.add(normalize_direction(r))
    return frozenset(rays)


def fans_isomorphic(f1: QuantumFan, f2: QuantumFan):
    """First lexicographic witness (L, sigma, tau) with L h(e_i) = h'(e_sigma(i))
    on all fan generators and sigma a poset isomorphism, or None."""
    if (f1.d, f1.n) != (f2.d, f2.n):
        return None
    if len(f1.virtual) != len(f2.virtual):
        return None
    t1, t2 = combinatorial_type(f1), combinatorial_type(f2)
    d = f1.d
    for sigma in _poset_bijections(t1, t2):
        rows = []
        rhs = []
        for i in sorted(sigma):
            hi = f1.calibration.column(i)
            target = f2.calibration.column(sigma[i])
            for r in range(d):
                # unknowns L[r][c] laid out row-major
                row = [S0] * (d * d)
                for c in range(d):
                    row[r * d + c] = hi[c]
                rows.append(row)
                rhs.append(target[r])
        res = solve(Matrix(rows), rhs)
        if res is None:
            continue
        flat = res[0]
        L = Matrix([flat[r * d:(r + 1) * d] for r in range(d)])
        from .linalg import det
        if det(L).is_zero():
            continue
        tau = dict(zip(sorted(f1.virtual), sorted(f2.virtual)))
        return L, sigma, tau
    return None


def s_variety_strata(cal: Calibration, b: Sequence) -> list[IndexSet]:
    """Index sets I with a full-dimensional cone, a point of P_b tight
    exactly on I, and facet-cutting constraints only.  Independent of the
    normal-fan code path, for cross-checking."""
    P = HPolytope.from_parameter(cal, b)
    d = cal.d
    if P.dimension() != d or not P.is_bounded():
        raise NotAdmissibleError("parameter is not admissible")
    facet_ok = {i + 1 for i in range(cal.n) if P.facet_dim(i) == d - 1}
    out = []
    for r in range(1, cal.n + 1):
        for I in combinations(range(1, cal.n + 1), r):
            I = frozenset(I)
            if not I <= facet_ok:
                continue
            if cone_dim(cal, I) != d:
                continue
            cons = []
            for i in range(1, cal.n + 1):
                rel = lp.EQ if i in I else lp.GE
                cons.append(lp.con(cal.column(i), P.offsets[i - 1], rel))
            if lp.feasible(cons, d):
                out.append(I)
    return sorted(out, key=sorted)


class StabilizerProfile(NamedTuple):
    """The group C^a x (C*)^t x Z^z as the triple (a, t, z)."""

    affine_rank: int
    torus_rank: int
    lattice_rank: int


def stabilizer_profiles(cal: Calibration, I) -> tuple[StabilizerProfile, StabilizerProfile, bool]:
    """Stabilizer of the stratum indexed by I under the two constructions.

    The old (torus-quotient) profile comes from the kernel of h restricted
    to Z^I; the new (C^{n-d}-action) profile from the Gale rows indexed by
    the complement.  They agree exactly on simplicial cones.
    """
    I = frozenset(I)
    d, n = cal.d, cal.n
    H_I = Matrix.from_columns(_cols(cal, I), nrows=d)
    if rank(H_I) != d:
        raise NotAdmissibleError("stratum cone is not full-dimensional")
    r = len(I) - integer_kernel_rank(H_I)
    profile_old = StabilizerProfile(r - d, len(I) - r, n - d)

    from .linalg import gale_rows
    comp = sorted(set(range(1, n + 1)) - I)
    rows = gale_rows(cal)
    K = Matrix([rows[j - 1] for j in comp])  # |comp| x (n-d)
    if comp:
        a_new = (n - d) - rank(K)
        # lattice points inside im(K): kill the left null space exactly
        left_null = kernel_basis(K.transpose())
        if left_null:
            z_new = integer_kernel_rank(Matrix(left_null))
        else:
            z_new = len(comp)
    else:
        a_new = n - d
        z_new = 0
    profile_new = StabilizerProfile(a_new, 0, z_new)
    return profile_old, profile_new, profile_old == profile_new


# -- support functions and fan validation --------------------------------


@dataclass(frozen=True)
class SupportFunction:
    """Piecewise linear phi with phi(x) = <form[sigma], x> on each maximal
    cone; built from the vertices of P_b."""

    fan: QuantumFan
    forms: tuple  # aligned with fan.max_cones

    @classmethod
    def from_parameter(cls, fan: QuantumFan, b: Sequence) -> "SupportFunction":
        cal = fan.calibration
        bb = vec(b)
        forms = []
        for sigma in fan.max_cones:
            A = Matrix([cal.column(i) for i in sorted(sigma)])
            x = solve(A, [-bb[i - 1] for i in sorted(sigma)])
            if x is None:
                raise NotAdmissibleError("no vertex is dual to a maximal cone")
            forms.append(x[0])
        return cls(fan, tuple(forms))

    def value(self, x: Sequence) -> Scalar:
        xx = vec(x)
        for sigma, m in zip(self.fan.max_cones, self.forms):
            if cone_contains(self.fan.calibration, sigma, xx):
                return dot(m, xx)
        raise NotAdmissibleError("point outside the fan support")

    def convexity_flags(self, b: Sequence) -> tuple[bool, bool]:
        """(convex, strictly convex) against phi(h(e_i)) >= -b_i."""
        cal = self.fan.calibration
        bb = vec(b)
        convex = True
        strict = True
        for sigma, m in zip(self.fan.max_cones, self.forms):
            for j in self.fan.rays():
                g = (dot(m, cal.column(j)) + bb[j - 1]).sign()
                if g < 0:
                    convex = strict = False
                elif g == 0 and j not in sigma:
                    strict = False
        return convex, strict


def has_strictly_convex_support(f: QuantumFan) -> bool:
    """Whether some strictly convex piecewise-linear function lives on f.

    Scale invariance lets a unit margin replace strict inequalities.
    """
    cal = f.calibration
    cones = list(f.max_cones)
    d = cal.d
    nv = len(cones) * d
    cons = []
    where = {}
    for ci, sigma in enumerate(cones):
        for j in sigma:
            where.setdefault(j, ci)
    for ci, sigma in enumerate(cones):
        for j in f.rays():
            cj = where[j]
            if ci == cj:
                continue
            row = [S0] * nv
            hj = cal.column(j)
            for c in range(d):
                row[ci * d + c] = row[ci * d + c] + hj[c]
                row[cj * d + c] = row[cj * d + c] - hj[c]
            if j in sigma:
                cons.append(lp.eq(row, 0))
            else:
                cons.append(lp.ge(row, -1))
    return lp.feasible(cons, nv)


def validate_fan(f: QuantumFan) -> dict:
    """Exact structural checks; intersection-is-face only for d <= 3."""
    cal = f.calibration
    checks = {
        "strongly_convex": all(cone_is_strongly_convex(cal, s) for s in f.max_cones),
        "index_cover": set(f.rays()) == set(range(1, f.n + 1)) - set(f.virtual),
    }
    if cal.d <= 3:
        ok = True
        for s1, s2 in combinations(f.max_cones, 2):
            J = s1 & s2
            if not (is_face(cal, J, s1) and is_face(cal, J, s2)):
                ok = False
                break
        checks["intersections_are_faces"] = ok
    return checks


def is_complete(f: QuantumFan) -> bool:
    """d = 2: angular sectors tile the circle; d = 3: every facet of every
    maximal cone is shared by exactly one other maximal cone."""
    cal = f.calibration
    if cal.d == 2:
        return _tiles_circle(cal, f)
    if cal.d == 3:
        seen: Counter = Counter()
        for sigma in f.max_cones:
            for facet in facets_of(cal, sigma):
                key = frozenset(normalize_direction(cal.column(i)) for i in facet)
                seen[key] += 1
        return bool(seen) and all(v == 2 for v in seen.values())
    raise UnsupportedDimensionError("completeness check implemented for d in {2,3}")


def _sector_bounds(cal: Calibration, sigma) -> Optional[tuple[Vec, Vec]]:
    """Extreme rays (a, b) of a planar cone, oriented so the cone sweeps
    counterclockwise from a to b; None when the cone is not a proper sector."""
    gens = [normalize_direction(cal.column(i)) for i in sorted(sigma)]
    for a in gens:
        for b in gens:
            if _cross(a, b).sign() <= 0:
                continue
            if all(_cross(a, g).sign() >= 0 and _cross(g, b).sign() >= 0 for g in gens):
                return a, b
    return None


def _tiles_circle(cal: Calibration, f: QuantumFan) -> bool:
    """Planar completeness: the sectors chain end-to-start around 0."""
    sectors = {}
    for sigma in f.max_cones:
        bounds = _sector_bounds(cal, sigma)
        if bounds is None:
            return False
        u, v = bounds
        if u in sectors:
            return False
        sectors[u] = v
    if not sectors:
        return False
    start = next(iter(sectors))
    cur, steps = start, 0
    while steps < len(sectors):
        cur = sectors.get(cur)
        if cur is None:
            return False
        steps += 1
        if cur == start:
            return steps == len(sectors)
    return False


def d_admissible(cal: Calibration, t: CombinatorialType) -> dict:
    """Two readings of type-admissibility: strong convexity of every member
    cone, and existence of a valid fan realizing the whole type."""
    weak = all(cone_is_strongly_convex(cal, s) for s in t.poset)
    full = False
    if weak:
        f = QuantumFan(cal, tuple(t.maximal_sets()),
                       frozenset(range(1, cal.n + 1)) - t.ground, complete=False)
        checks = validate_fan(f)
        full = all(checks.values()) and combinatorial_type(f).poset == t.poset
    return {"strongly_convex_only": weak, "fan_exists": full}
