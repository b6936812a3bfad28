"""Shared fixtures: reference calibrations and random-instance helpers."""

import random

import pytest

from qsecfan import Calibration, Rational, Scalar
from qsecfan.linalg import gale_rows, preimage_of_chi, vadd, vscale
from qsecfan.secondary import is_admissible, is_generic

SQ2 = Scalar.sqrt(2)
S0 = Scalar(0)
S1 = Scalar(1)


def cal_of(d, rows_as_columns, virtual=()):
    cols = tuple(tuple(Scalar.coerce(x) for x in c) for c in rows_as_columns)
    return Calibration(d, len(cols), cols, frozenset(virtual))


@pytest.fixture(scope="session")
def qex():
    """Plane configuration with two sqrt(2)-tilted columns; its parameter
    space splits into three chambers."""
    return cal_of(2, [(1, 0), (0, 1), (-SQ2, -1), (-1, -SQ2)])


@pytest.fixture(scope="session")
def qex_t1():
    """Deformation of qex where the fourth column is a scaled reflection."""
    return cal_of(2, [(1, 0), (0, 1), (-SQ2, -1),
                      (Rational(-2, 3), Rational(-2, 3) * SQ2)])


@pytest.fixture(scope="session")
def p2():
    """The projective-plane configuration: three columns summing to zero."""
    return cal_of(2, [(1, 0), (0, 1), (-1, -1)])


@pytest.fixture(scope="session")
def fig5():
    """Five columns in the plane whose secondary fan has eleven chambers."""
    return cal_of(2, [(1, 0), (0, 1), (-3, 1), (1, -3), (-2, -1)])


@pytest.fixture(scope="session")
def exc4():
    """The exceptional planar family: columns 3 and 4 are negative
    multiples of columns 1 and 2."""
    return cal_of(2, [(1, 0), (0, 1), (-2, 0), (0, -3)])


@pytest.fixture(scope="session")
def frustum():
    """d = 3 configuration over a square; its secondary fan contains a
    flipping wall (the two triangulations of the square cone)."""
    return cal_of(3, [(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1), (0, 0, -1)])


def random_calibration(rng, d, n, irrational=False, max_entry=4, geometric=False):
    """A random positively-spanning configuration: the standard basis, the
    all-minus-one column, and random nonzero extra columns."""
    cols = [[S1 if i == j else S0 for i in range(d)] for j in range(d)]
    cols.append([-S1] * d)
    while len(cols) < n:
        c = [Scalar(rng.randint(-max_entry, max_entry)) for _ in range(d)]
        if irrational and rng.random() < 0.5:
            j = rng.randrange(d)
            c[j] = c[j] + Scalar(0, rng.randint(-2, 2), 2)
        if all(x.is_zero() for x in c):
            continue
        if tuple(c) in {tuple(x) for x in cols}:
            continue
        cols.append(c)
    rng.shuffle(cols)
    try:
        cal = Calibration(d, n, tuple(tuple(c) for c in cols), frozenset())
    except Exception:
        return None
    if geometric and not cal.is_geometric():
        return None
    return cal


def random_generic_chi(rng, cal, tries=200):
    """A random generic interior point of the Gale cone, or None."""
    rows = gale_rows(cal)
    for _ in range(tries):
        chi = tuple([S0] * (cal.n - cal.d))
        for g in rows:
            w = Scalar(Rational(rng.randint(1, 9973), 997))
            chi = vadd(chi, vscale(w, g))
        if is_generic(cal, chi):
            return chi
    return None


def arrangement_normals(cal):
    """Normals of every hyperplane spanned by an (n-d-1)-subset of Gale
    rows.  All walls of the secondary fan lie inside these hyperplanes,
    so a sample with no zero sign is generic and its sign vector
    determines its chamber."""
    from itertools import combinations

    from qsecfan.linalg import Matrix, kernel_basis, vscale

    m = cal.n - cal.d
    rows = gale_rows(cal)
    normals, seen = [], set()
    for I in combinations(range(cal.n), m - 1):
        K = kernel_basis(Matrix([rows[i] for i in I]))
        if len(K) != 1:
            continue
        w = K[0]
        if tuple(w) in seen or tuple(vscale(-1, w)) in seen:
            continue
        seen.add(tuple(w))
        normals.append(w)
    return normals


def census_classes(cal, rng, samples):
    """Number of distinct vertex-combinatorics classes among random
    generic points, classified exactly via sign vectors and the vertex
    oracle.  Heavy-tailed weights reach thin chambers near the rays."""
    from qsecfan.linalg import dot, preimage_matrix
    from qsecfan.polytope import VertexOracle

    m = cal.n - cal.d
    rows = gale_rows(cal)
    normals = arrangement_normals(cal)
    oracle = VertexOracle(cal)
    pm = preimage_matrix(cal)
    cells = {}
    kept = 0
    while kept < samples:
        chi = tuple([S0] * m)
        for g in rows:
            w = rng.randint(1, 99) * 10 ** rng.randint(0, 5)
            chi = vadd(chi, vscale(Scalar(w), g))
        sig = tuple(dot(w, chi).sign() for w in normals)
        if 0 in sig:
            continue
        kept += 1
        if sig not in cells:
            cells[sig] = oracle.comb_key(pm.matvec(chi))
    return len(set(cells.values()))


def random_instance(rng, d, n, irrational=False):
    """(calibration, chi, b) with chi generic interior, or None."""
    cal = random_calibration(rng, d, n, irrational=irrational)
    if cal is None:
        return None
    chi = random_generic_chi(rng, cal)
    if chi is None:
        return None
    return cal, chi, preimage_of_chi(cal, chi)
