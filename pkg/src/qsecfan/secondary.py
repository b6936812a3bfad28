"""The secondary fan in chi-space R^(n-d).

Chambers are carved out of the Gale cone by two kinds of linear
inequalities in b (both pushed forward to chi through the minimum-norm
preimage): convexity of the piecewise-linear support function across
each pair of adjacent maximal cones, and redundancy of each virtual
generator's constraint.  Walls between chambers either toggle a virtual
generator (divisorial, a star subdivision) or exchange triangulations
of a non-simplicial cone (flipping, described by a signed circuit).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

from . import lp
from .errors import (
    DegeneratePathError,
    InvalidCalibrationError,
    NotAdmissibleError,
    OnWallError,
    UnsupportedDimensionError,
)
from .fan import (
    CombinatorialType,
    QuantumFan,
    combinatorial_type,
    normal_fan,
    star_subdivision,
)
from .linalg import (
    Calibration,
    Matrix,
    Vec,
    dot,
    gale_rows,
    gale_transform,
    is_zero_vec,
    kernel_basis,
    normalize_direction,
    preimage_matrix,
    rank,
    solve,
    solve_unique,
    vadd,
    vec,
    vscale,
    vsub,
)
from .scalar import Rational, S0, S1, Scalar


def _in_cone(gens: Sequence[Vec], x: Vec, m: int) -> bool:
    """x in Cone(gens) inside R^m."""
    if not gens:
        return is_zero_vec(x)
    k = len(gens)
    cons = [lp.ge([S1 if j == i else S0 for j in range(k)], 0) for i in range(k)]
    for coord in range(m):
        cons.append(lp.eq([g[coord] for g in gens], -x[coord]))
    return lp.feasible(cons, k)


@dataclass(frozen=True)
class GaleCone:
    """Cone(k^T e_1, ..., k^T e_n) in R^(n-d) with facet normals for n-d <= 3."""

    calibration: Calibration
    generators: tuple
    facet_normals: tuple

    @property
    def m(self) -> int:
        return self.calibration.n - self.calibration.d

    def contains(self, chi: Sequence) -> bool:
        return _in_cone(list(self.generators), vec(chi), self.m)

    def interior_contains(self, chi: Sequence) -> bool:
        cc = vec(chi)
        if self.m == 0:
            return True
        return all(dot(w, cc).sign() > 0 for w in self.facet_normals)

    def to_json(self) -> dict:
        return {
            "generators": [[x.to_json() for x in g] for g in self.generators],
            "facet_normals": [[x.to_json() for x in w] for w in self.facet_normals],
        }


def _facet_normals(gens: Sequence[Vec], m: int) -> tuple:
    """Facet normals of a full-dimensional Cone(gens) in R^m, m <= 3.

    Every facet contains m-1 independent generators, so candidates are
    kernel directions of (m-1)-subsets, kept when all generators land on
    one side.
    """
    if m == 0:
        return ()
    if m > 3:
        raise UnsupportedDimensionError("facet enumeration implemented for n-d <= 3")
    normals = set()
    for sub in combinations(gens, m - 1):
        kern = kernel_basis(Matrix(sub)) if sub else \
            [tuple([S1])]  # m == 1: the only direction
        if len(kern) != 1:
            continue
        w = kern[0]
        signs = {dot(w, g).sign() for g in gens}
        if 1 in signs and -1 in signs:
            continue
        if -1 in signs:
            w = vscale(-1, w)
        normals.add(normalize_direction(w))
    return tuple(sorted(normals))


def gale_cone(cal: Calibration) -> GaleCone:
    gens = tuple(gale_rows(cal))
    m = cal.n - cal.d
    return GaleCone(cal, gens, _facet_normals(gens, m))


def is_admissible(cal: Calibration, chi: Sequence) -> bool:
    """chi interior to the Gale cone, equivalently dim P_chi = d."""
    return gale_cone(cal).interior_contains(vec(chi))


def degenerate_span_witnesses(cal: Calibration, chi: Sequence) -> list[Vec]:
    """Normals of deficient-span generator cones containing chi.

    By Caratheodory it suffices to scan index subsets of size below n-d;
    chi is generic exactly when this list is empty.
    """
    rows = gale_rows(cal)
    m = cal.n - cal.d
    cc = vec(chi)
    found = []
    for r in range(m):
        for I in combinations(range(cal.n), r):
            gens = [rows[i] for i in I]
            if not _in_cone(gens, cc, m):
                continue
            if gens:
                for w in kernel_basis(Matrix(gens)):
                    found.append(normalize_direction(w))
            else:
                found.append(tuple([S0] * m))
    return sorted(set(found))


def is_generic(cal: Calibration, chi: Sequence) -> bool:
    return not degenerate_span_witnesses(cal, chi)


@dataclass(frozen=True)
class ChamberInequality:
    """<normal, chi> >= 0; kind "wall" carries (sigma, sigma', j), kind
    "virtual" carries the virtual generator index."""

    normal: Vec
    kind: str
    payload: tuple


@dataclass(frozen=True)
class FacetRecord:
    normal: Vec            # inward: chamber side has <normal, chi> >= 0
    point: Optional[Vec]   # relative-interior point of the facet
    boundary: bool         # facet of the Gale cone itself, not a wall
    tags: tuple


@dataclass(frozen=True)
class Chamber:
    calibration: Calibration
    inequalities: tuple
    comb: CombinatorialType
    virtual: frozenset
    rep_point: Vec
    fan: QuantumFan

    @property
    def key(self):
        return (self.comb.poset, self.virtual)

    def contains(self, chi: Sequence, strict: bool = True) -> bool:
        cc = vec(chi)
        lo = 1 if strict else 0
        return all(dot(q.normal, cc).sign() >= lo for q in self.inequalities)

    def unique_normals(self) -> list[tuple[Vec, tuple]]:
        groups: dict[Vec, list] = {}
        for q in self.inequalities:
            groups.setdefault(normalize_direction(q.normal), []).append(q)
        return [(w, tuple(groups[w])) for w in sorted(groups)]

    def facets(self) -> list[FacetRecord]:
        """Irredundant inequalities with a relative-interior facet point."""
        cal = self.calibration
        m = cal.n - cal.d
        gc = gale_cone(cal)
        normals = self.unique_normals()
        out = []
        for w, tags in normals:
            cons = [lp.eq(w, 0)]
            for w2, _ in normals:
                if w2 != w:
                    cons.append(lp.gt(w2, 0))
            point = lp.find_point(cons, m)
            if point is None:
                continue  # redundant inequality
            # a wall must meet the open Gale cone; otherwise the facet is
            # part of the admissibility boundary
            interior_cons = cons[:1] + [lp.gt(v, 0) for v in gc.facet_normals]
            boundary = lp.find_point(interior_cons, m) is None
            if not boundary:
                # move the facet point into the open Gale cone if needed
                point = lp.find_point(cons + [lp.gt(v, 0) for v in gc.facet_normals], m) or point
            out.append(FacetRecord(w, point, boundary, tags))
        return out

    def to_json(self) -> dict:
        return {
            "inequalities": [
                {"normal": [x.to_json() for x in q.normal], "kind": q.kind,
                 "payload": [sorted(p) if isinstance(p, frozenset) else p
                             for p in q.payload]}
                for q in self.inequalities
            ],
            "rep_comb": {"poset": self.comb.to_json(), "virtual": sorted(self.virtual)},
            "rep_point": [x.to_json() for x in self.rep_point],
        }


def _support_form(cal: Calibration, sigma) -> tuple[list[int], Matrix]:
    """For sorted sigma, the matrix A with rows h(e_k); the vertex dual to
    sigma solves A x = -b_sigma, making every wall inequality linear in b."""
    idx = sorted(sigma)
    return idx, Matrix([cal.column(i) for i in idx])


def _b_space_inequality(cal: Calibration, sigma, j: int) -> Vec:
    """Coefficients c with c . b = <x_sigma(b), h(e_j)> + b_j."""
    idx, A = _support_form(cal, sigma)
    y = solve_unique(A.transpose(), cal.column(j))
    if y is None:
        raise NotAdmissibleError("maximal cone does not span R^d")
    c = [S0] * cal.n
    c[j - 1] = c[j - 1] + S1
    for k_pos, k_idx in enumerate(idx):
        c[k_idx - 1] = c[k_idx - 1] - y[k_pos]
    return tuple(c)


def _to_chi_space(cal: Calibration, c_b: Vec) -> Vec:
    """Rewrite c . b as z . chi; consistency certifies ker(k^T)-invariance."""
    k = gale_transform(cal)
    res = solve(k, c_b)
    if res is None or res[1]:
        raise NotAdmissibleError("inequality is not invariant under ker(k^T)")
    return res[0]


def chamber_of(cal: Calibration, chi: Sequence) -> Chamber:
    """The GKZ chamber containing the generic admissible point chi."""
    cc = vec(chi)
    if not is_admissible(cal, cc):
        raise NotAdmissibleError("chi is not interior to the Gale cone")
    witnesses = degenerate_span_witnesses(cal, cc)
    if witnesses:
        raise OnWallError("chi lies on a degenerate-span cone", witnesses)
    b = preimage_matrix(cal).matvec(cc)
    f = normal_fan(cal, b)
    ineqs = []
    cones = sorted(f.max_cones, key=sorted)
    for s1, s2 in combinations(cones, 2):
        shared = s1 & s2
        if len(shared) != cal.d - 1:
            continue
        for j in sorted(s2 - s1):
            c_b = _b_space_inequality(cal, s1, j)
            ineqs.append(ChamberInequality(_to_chi_space(cal, c_b), "wall",
                                           (tuple(sorted(s1)), tuple(sorted(s2)), j)))
    for i in sorted(f.virtual):
        sigma = f.cone_containing(cal.column(i))
        if sigma is None:
            raise NotAdmissibleError(f"virtual generator {i} outside the fan support")
        c_b = _b_space_inequality(cal, sigma, i)
        ineqs.append(ChamberInequality(_to_chi_space(cal, c_b), "virtual", (i,)))
    ch = Chamber(cal, tuple(ineqs), combinatorial_type(f), f.virtual, cc, f)
    if not ch.contains(cc, strict=True):
        raise OnWallError("chi sits on a chamber wall",
                          [q.normal for q in ineqs if dot(q.normal, cc).is_zero()])
    return ch


def _generic_interior_point(cal: Calibration) -> Vec:
    """A perturbed positive combination of the Gale generators, retried
    deterministically until generic."""
    rows = gale_rows(cal)
    m = cal.n - cal.d
    for attempt in range(200):
        chi = tuple([S0] * m)
        for i, g in enumerate(rows):
            w = Scalar(Rational(97 + 13 * (i + 1) + attempt * (i + 2) ** 2, 97))
            chi = vadd(chi, vscale(w, g))
        if is_admissible(cal, chi) and is_generic(cal, chi):
            return chi
    raise NotAdmissibleError("no generic interior point found")


@dataclass
class SecondaryFan:
    chambers: list
    adjacency: dict  # chamber index -> list of (facet normal, neighbor index or None)

    def to_json(self) -> dict:
        return {
            "chambers": [ch.to_json() for ch in self.chambers],
            "adjacency": {
                str(i): [{"normal": [x.to_json() for x in w], "neighbor": nb}
                         for w, nb in lst]
                for i, lst in self.adjacency.items()
            },
        }


def _step_beyond(cal: Calibration, ch: Chamber, facet: FacetRecord):
    """A chamber just across the facet, found by walking a shrinking step
    against the facet normal and verifying adjacency."""
    eps = S1
    for _ in range(120):
        cand = vsub(facet.point, vscale(eps, facet.normal))
        eps = eps / Scalar(2)
        if not is_admissible(cal, cand) or not is_generic(cal, cand):
            continue
        nch = chamber_of(cal, cand)
        if nch.key == ch.key:
            continue
        # the facet point must lie on the neighbor's closure, otherwise the
        # step overshot into a further chamber
        if nch.contains(facet.point, strict=False):
            return nch
    raise DegeneratePathError("could not step across a chamber facet")


def enumerate_chambers(cal: Calibration) -> SecondaryFan:
    """All chambers by breadth-first wall crossing from one generic point."""
    if not cal.is_geometric():
        raise InvalidCalibrationError("chamber enumeration requires a geometric calibration")
    m = cal.n - cal.d
    if m == 0:
        return SecondaryFan([], {})
    if m > 3:
        raise UnsupportedDimensionError("chamber enumeration implemented for n-d <= 3")
    start = chamber_of(cal, _generic_interior_point(cal))
    chambers = [start]
    index_of = {start.key: 0}
    adjacency: dict[int, list] = {}
    queue = [0]
    while queue:
        ci = queue.pop(0)
        ch = chambers[ci]
        links = []
        for facet in ch.facets():
            if facet.boundary:
                links.append((facet.normal, None))
                continue
            nch = _step_beyond(cal, ch, facet)
            if nch.key not in index_of:
                index_of[nch.key] = len(chambers)
                chambers.append(nch)
                queue.append(index_of[nch.key])
            links.append((facet.normal, index_of[nch.key]))
        adjacency[ci] = links
    return SecondaryFan(chambers, adjacency)


@dataclass(frozen=True)
class Wall:
    normal: Vec
    type: str  # "divisorial" | "flipping" | "boundary"
    circuit: Optional[tuple] = None       # (I_plus, I_minus) for flipping
    virtual_index: Optional[int] = None   # toggled generator for divisorial

    def to_json(self) -> dict:
        out = {"normal": [x.to_json() for x in self.normal], "type": self.type}
        if self.circuit is not None:
            out["circuit"] = [sorted(self.circuit[0]), sorted(self.circuit[1])]
        if self.virtual_index is not None:
            out["virtual_index"] = self.virtual_index
        return out


def _wall_circuit(cal: Calibration, f0: QuantumFan, f_minus: QuantumFan):
    """Signed circuit of the first non-simplicial on-wall cone, with the
    side triangulating f_minus listed first."""
    idx = None
    for tau in sorted(f0.max_cones, key=sorted):
        if len(tau) > cal.d:
            idx = sorted(tau)
            break
    if idx is None:
        return None
    # dependence among the generators of tau
    kern = kernel_basis(Matrix.from_columns([cal.column(i) for i in idx], nrows=cal.d))
    if not kern:
        return None
    lam = kern[0]
    plus = frozenset(idx[p] for p, v in enumerate(lam) if v.sign() > 0)
    minus = frozenset(idx[p] for p, v in enumerate(lam) if v.sign() < 0)
    cones_minus = set(f_minus.max_cones)
    tau_set = frozenset(idx)
    if all((tau_set - {i}) in cones_minus for i in plus):
        return plus, minus
    return minus, plus


@dataclass
class WallCrossingReport:
    t_star: Optional[Scalar]
    wall: Optional[Wall]
    fan_minus: Optional[QuantumFan]
    fan_zero: Optional[QuantumFan]
    fan_plus: Optional[QuantumFan]
    index: Optional[tuple]
    checks: dict = field(default_factory=dict)

    @property
    def crossed(self) -> bool:
        return self.wall is not None

    def to_json(self) -> dict:
        return {
            "crossed": self.crossed,
            "t_star": None if self.t_star is None else self.t_star.to_json(),
            "wall": None if self.wall is None else self.wall.to_json(),
            "fan_minus": None if self.fan_minus is None else self.fan_minus.to_json(),
            "fan_zero": None if self.fan_zero is None else self.fan_zero.to_json(),
            "fan_plus": None if self.fan_plus is None else self.fan_plus.to_json(),
            "index": self.index,
            "checks": self.checks,
        }


@dataclass(frozen=True)
class AffinePath:
    """chi(t) = k^T (beta + alpha t) for t in [-1, 1]."""

    beta: Vec
    alpha: Vec

    def __post_init__(self):
        object.__setattr__(self, "beta", vec(self.beta))
        object.__setattr__(self, "alpha", vec(self.alpha))

    def chi(self, cal: Calibration, t) -> Vec:
        t = Scalar.coerce(t)
        b = vadd(self.beta, vscale(t, self.alpha))
        return gale_transform(cal).transpose().matvec(b)

    def to_json(self) -> dict:
        return {"beta": [x.to_json() for x in self.beta],
                "alpha": [x.to_json() for x in self.alpha]}


@dataclass
class CobordismReport:
    crossings: list
    chamber_keys: list

    def to_json(self) -> dict:
        return {"crossings": [r.to_json() for r in self.crossings],
                "chambers_visited": len(self.chamber_keys)}


def _classify_crossing(cal: Calibration, normal: Vec, chi_star: Vec,
                       f_minus: QuantumFan, f_plus: QuantumFan,
                       t_star: Optional[Scalar]) -> WallCrossingReport:
    f0 = normal_fan(cal, preimage_matrix(cal).matvec(chi_star))
    rays_minus, rays_plus = set(f_minus.rays()), set(f_plus.rays())
    checks: dict = {}
    if rays_minus == rays_plus:
        wall = Wall(normal, "flipping", circuit=_wall_circuit(cal, f0, f_minus))
        checks["rays_equal"] = True
        checks["on_wall_non_simplicial"] = not f0.is_simplicial()
        checks["sides_refine_on_wall"] = _refines(cal, f_minus, f0) and _refines(cal, f_plus, f0)
        if cal.d <= 3:
            from .fan import common_refinement, cone_contains
            cr = common_refinement(f_minus, f_plus)
            if isinstance(cr, QuantumFan):
                checks["refinement_inside_on_wall"] = _refines(cal, cr, f0)
            else:
                # d = 3: geometric overlay cones, each must sit in an on-wall cone
                checks["refinement_inside_on_wall"] = all(
                    any(all(cone_contains(cal, t, r) for r in rays)
                        for t in f0.max_cones)
                    for rays in cr)
        index = None
        if wall.circuit is not None:
            index = (len(wall.circuit[0]), len(wall.circuit[1]))
    else:
        toggled = rays_minus ^ rays_plus
        i = min(toggled)
        wall = Wall(normal, "divisorial", virtual_index=i)
        checks["single_ray_toggled"] = len(toggled) == 1
        if i in rays_plus:
            index = (1, cal.d)
            sub = star_subdivision(f_minus, i)
            checks["star_subdivision"] = set(sub.max_cones) == set(f_plus.max_cones) \
                and sub.virtual == f_plus.virtual
        else:
            index = (cal.d, 1)
            sub = star_subdivision(f_plus, i)
            checks["star_subdivision"] = set(sub.max_cones) == set(f_minus.max_cones) \
                and sub.virtual == f_minus.virtual
    return WallCrossingReport(t_star, wall, f_minus, f0, f_plus, index, checks)


def _refines(cal: Calibration, fine: QuantumFan, coarse: QuantumFan) -> bool:
    """Every maximal cone of the fine fan sits inside one of the coarse fan."""
    from .fan import cone_contains
    for s in fine.max_cones:
        if not any(all(cone_contains(cal, t, cal.column(i)) for i in s)
                   for t in coarse.max_cones):
            return False
    return True


def cobordism_from_path(path: AffinePath, cal: Calibration) -> CobordismReport:
    """Walk chi(t) from t = -1 to t = 1 and report every wall crossed."""
    chi_lo, chi_hi = path.chi(cal, -1), path.chi(cal, 1)
    for endpoint in (chi_lo, chi_hi):
        if not is_admissible(cal, endpoint) or not is_generic(cal, endpoint):
            raise DegeneratePathError("path endpoint is not admissible and generic")
    t_cur = Scalar(-1)
    ch = chamber_of(cal, chi_lo)
    crossings: list[WallCrossingReport] = []
    keys = [ch.key]
    one = S1
    while True:
        # exact exit times of the current chamber along the path
        candidates = []
        for w, _tags in ch.unique_normals():
            a = dot(w, path.chi(cal, 0))
            s = dot(w, path.chi(cal, 1)) - a
            if s.is_zero():
                continue
            t_star = -a / s
            if t_cur < t_star < one:
                candidates.append((t_star, w))
        if not candidates:
            break
        candidates.sort(key=lambda c: c[0])
        t_star, w = candidates[0]
        same = [c for c in candidates if c[0] == t_star]
        if len(same) > 1:
            raise DegeneratePathError("path hits a codimension-2 locus")
        later = [c[0] for c in candidates[1:]]
        gap = min([one - t_star, t_star - t_cur] + [t2 - t_star for t2 in later])
        eps = gap / Scalar(2)
        chi_star = path.chi(cal, t_star)
        for _ in range(80):
            chi_p = path.chi(cal, t_star + eps)
            if is_admissible(cal, chi_p) and is_generic(cal, chi_p):
                nch = chamber_of(cal, chi_p)
                if nch.contains(chi_star, strict=False):
                    break
            eps = eps / Scalar(2)
        else:
            raise DegeneratePathError("could not isolate the wall crossing")
        crossings.append(_classify_crossing(cal, w, chi_star, ch.fan, nch.fan, t_star))
        ch = nch
        keys.append(ch.key)
        t_cur = t_star
    return CobordismReport(crossings, keys)


def cross_wall(path: AffinePath, cal: Calibration) -> WallCrossingReport:
    """Single-crossing report; paths crossing several walls must be split."""
    rep = cobordism_from_path(path, cal)
    if not rep.crossings:
        return WallCrossingReport(None, None, None, None, None, None,
                                  {"no_crossing": True})
    if len(rep.crossings) > 1:
        raise DegeneratePathError(
            f"path crosses {len(rep.crossings)} walls; split it at the crossing parameters")
    return rep.crossings[0]


def classify_wall(ch: Chamber, facet: FacetRecord) -> Wall:
    """Divisorial or flipping nature of a chamber facet (or the boundary
    marker when the facet lies on the Gale cone's own boundary)."""
    if facet.boundary:
        return Wall(facet.normal, "boundary")
    cal = ch.calibration
    nch = _step_beyond(cal, ch, facet)
    rep = _classify_crossing(cal, facet.normal, facet.point, ch.fan, nch.fan, None)
    return rep.wall
