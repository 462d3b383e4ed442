"""Canonical-form classification of 2-dimensional evolution algebras.

Real canonical forms (structure matrices, rows = e_i * e_i):

    E0  [[0,0],[0,0]]           E4  [[0,1],[0,0]]
    E1  [[1,0],[0,0]]           E5  [[0,1],[0,-1]]
    E2  [[1,0],[1,0]]           E6(a2;a3)  [[1,a2],[a3,1]], 1-a2*a3 != 0
    E3  [[1,1],[-1,-1]]         E7(a4)     [[0,1],[1,a4]]

Complex forms are E0..E4 as above plus E5(x,y) = [[1,x],[y,1]] (1-xy != 0)
and E6(a4) = [[0,1],[1,a4]].  E0 (the zero-product algebra) is admitted as a
class although the nonzero canonical lists start at E1.

The decision procedure: exact zero test, then rank of the structure matrix
(dim E^2), then the exact E4 shape criterion, then a numeric isomorphism
search against the remaining candidate canonical forms, with continuous
parameters extracted by least-squares fit.  Witnesses are invertible basis
changes with a quantified homomorphism residual.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .core import COMPLEX, REAL, DimensionMismatchError, EvoalgError, StructureMatrix
from .numerics import complex_jacobian_to_real, halton_box, levenberg_marquardt

DEFAULT_TOL = 1e-9           # absolute tolerance of exact-zero structural tests
ISO_TOL = 1e-18              # acceptance bound on the squared homomorphism residual
DET_TOL = 1e-12              # basis changes closer than this to singular are rejected

_OMEGA = complex(-0.5, math.sqrt(3.0) / 2.0)  # primitive cube root of unity


class UnclassifiableError(EvoalgError):
    """No candidate canonical form matched within the search budget."""


@dataclass(frozen=True)
class AlgebraClass:
    """Canonical-form label: field mode, tag E0..E7, continuous parameters."""

    field: str
    tag: str
    params: tuple[complex, ...] = ()

    def __post_init__(self):
        tags = ("E0", "E1", "E2", "E3", "E4", "E5", "E6", "E7")
        limit = 8 if self.field == REAL else 7
        if self.field not in (REAL, COMPLEX) or self.tag not in tags[:limit]:
            raise ValueError(f"invalid class {self.tag!r} for field {self.field!r}")
        object.__setattr__(self, "params", tuple(complex(p) for p in self.params))
        if len(self.params) != n_params(self.field, self.tag):
            raise ValueError(
                f"{self.tag} ({self.field}) takes {n_params(self.field, self.tag)} "
                f"parameters, got {len(self.params)}"
            )

    def label(self) -> str:
        if not self.params:
            return self.tag
        return f"{self.tag}({', '.join(_fmt_scalar(p) for p in self.params)})"


def n_params(field: str, tag: str) -> int:
    if field == REAL:
        return {"E6": 2, "E7": 1}.get(tag, 0)
    return {"E5": 2, "E6": 1}.get(tag, 0)


def _fmt_scalar(z: complex) -> str:
    def f(x: float) -> str:
        return repr(int(x)) if x == int(x) and abs(x) < 1e15 else repr(x)

    if z.imag == 0:
        return f(z.real)
    sign = "+" if z.imag >= 0 else "-"
    return f"{f(z.real)}{sign}{f(abs(z.imag))}i"


def canonical_matrix(cls: AlgebraClass) -> StructureMatrix:
    """Structure matrix of a canonical class."""
    t, p = cls.tag, cls.params
    fixed = {
        "E0": ((0, 0), (0, 0)),
        "E1": ((1, 0), (0, 0)),
        "E2": ((1, 0), (1, 0)),
        "E3": ((1, 1), (-1, -1)),
        "E4": ((0, 1), (0, 0)),
    }
    if t in fixed:
        rows = fixed[t]
    elif cls.field == REAL:
        rows = ((0, 1), (0, -1)) if t == "E5" else (
            ((1, p[0]), (p[1], 1)) if t == "E6" else ((0, 1), (1, p[0]))
        )
    else:
        rows = ((1, p[0]), (p[1], 1)) if t == "E5" else ((0, 1), (1, p[0]))
    return StructureMatrix.from_rows(rows, cls.field)


def _lex_key(z: complex):
    # quantized first so representatives equal up to roundoff compare equal
    return (round(z.real, 9), round(z.imag, 9), z.real, z.imag)


def canonicalize_params(field: str, tag: str, params) -> tuple[complex, ...]:
    """Pick the lexicographically (re, im) smallest representative among
    equivalent parameter tuples."""
    params = tuple(complex(p) for p in params)
    if (field == REAL and tag == "E6") or (field == COMPLEX and tag == "E5"):
        return tuple(sorted(params, key=_lex_key))
    if field == COMPLEX and tag == "E6":
        orbit = [params[0], params[0] * _OMEGA, params[0] * _OMEGA * _OMEGA]
        return (min(orbit, key=_lex_key),)
    return params


@dataclass(frozen=True)
class BasisChange:
    """2x2 basis-change matrix; row i gives the image of e_i."""

    entries: tuple[tuple[complex, complex], tuple[complex, complex]]

    def __post_init__(self):
        rows = tuple(tuple(complex(z) for z in r) for r in self.entries)
        object.__setattr__(self, "entries", rows)
        if abs(self.det) <= DET_TOL:
            raise ValueError(f"basis change is singular within {DET_TOL}: det={self.det}")

    @property
    def det(self) -> complex:
        t = self.entries
        return t[0][0] * t[1][1] - t[0][1] * t[1][0]

    def inverse(self) -> "BasisChange":
        t = self.entries
        d = self.det
        return BasisChange(((t[1][1] / d, -t[0][1] / d), (-t[1][0] / d, t[0][0] / d)))


@dataclass(frozen=True)
class E4Shape:
    matches: bool
    variant: str | None = None  # "upper" for [[0,b],[0,0]], "lower" for [[0,0],[c,0]]
    entry: complex | None = None


def is_E4_shape(A: StructureMatrix, tol: float = DEFAULT_TOL) -> E4Shape:
    """Exact E4 criterion: the matrix is [[0,b],[0,0]] or [[0,0],[c,0]] with
    the designated off-diagonal entry larger than tol.  The pattern zeros are
    tested exactly; the all-zero matrix is E0, not E4."""
    if A.dim != 2:
        raise DimensionMismatchError(f"E4 shape test needs dim 2, got {A.dim}")
    (a, b), (c, d) = A.entries
    if a == 0 and c == 0 and d == 0 and abs(b) > tol:
        return E4Shape(True, "upper", b)
    if a == 0 and b == 0 and d == 0 and abs(c) > tol:
        return E4Shape(True, "lower", c)
    return E4Shape(False)


def rescale_permute(A: StructureMatrix, scales, perm=(0, 1)) -> StructureMatrix:
    """Structure matrix after the natural-basis change e'_i = d_i e_perm(i).

    New constants: a'_ij = d_i^2 a_{perm(i) perm(j)} / d_j.
    """
    d = tuple(complex(z) for z in scales)
    if any(z == 0 for z in d):
        raise ValueError("scales must be nonzero")
    n = A.dim
    rows = [
        tuple(d[i] ** 2 * A.entries[perm[i]][perm[j]] / d[j] for j in range(n))
        for i in range(n)
    ]
    return StructureMatrix.from_rows(rows, A.field)


# --- homomorphism residual ----------------------------------------------------


def _hom_components(A: StructureMatrix, B: StructureMatrix, T) -> list[complex]:
    """The six complex components g(e_i e_j) - g(e_i) *_B g(e_j) over pairs
    (1,1), (2,2), (1,2), where g maps A's basis by the rows of T."""
    a = A.entries
    b = B.entries
    t = T
    out = []
    for i in (0, 1):
        for k in (0, 1):
            img = a[i][0] * t[0][k] + a[i][1] * t[1][k]
            prod = t[i][0] * t[i][0] * b[0][k] + t[i][1] * t[i][1] * b[1][k]
            out.append(img - prod)
    for k in (0, 1):
        out.append(-(t[0][0] * t[1][0] * b[0][k] + t[0][1] * t[1][1] * b[1][k]))
    return out


def homomorphism_residual(A: StructureMatrix, B: StructureMatrix, T) -> float:
    """Sum over basis pairs i <= j of |g(e_i e_j) - g(e_i) g(e_j)|^2."""
    entries = T.entries if isinstance(T, BasisChange) else T
    return sum(abs(z) ** 2 for z in _hom_components(A, B, entries))


def _det2(t) -> complex:
    return t[0][0] * t[1][1] - t[0][1] * t[1][0]


def _inv2(t):
    d = _det2(t)
    if d == 0:
        return None
    return ((t[1][1] / d, -t[0][1] / d), (-t[1][0] / d, t[0][0] / d))


# --- numeric isomorphism search -----------------------------------------------

_BARRIER_DELTA = DET_TOL**2  # barrier turns on when |det T|^2 falls below this


def _pack(T, complex_mode: bool) -> np.ndarray:
    flat = [T[0][0], T[0][1], T[1][0], T[1][1]]
    if complex_mode:
        out = np.empty(8)
        out[0::2] = [z.real for z in flat]
        out[1::2] = [z.imag for z in flat]
        return out
    return np.array([z.real for z in flat])


def _unpack(x: np.ndarray, complex_mode: bool):
    if complex_mode:
        f = [complex(x[2 * i], x[2 * i + 1]) for i in range(4)]
    else:
        f = [complex(v) for v in x]
    return ((f[0], f[1]), (f[2], f[3]))


def _residual_vec(A, B, T, complex_mode: bool) -> np.ndarray:
    comps = _hom_components(A, B, T)
    if complex_mode:
        vals = np.empty(13)
        vals[0:12:2] = [z.real for z in comps]
        vals[1:12:2] = [z.imag for z in comps]
    else:
        vals = np.empty(7)
        vals[:6] = [z.real for z in comps]
    d2 = abs(_det2(T)) ** 2
    vals[-1] = max(0.0, (_BARRIER_DELTA - d2) / _BARRIER_DELTA)
    return vals


def _jac_complex(A, B, T) -> np.ndarray:
    """d(component)/d(T_pq) as a 6x4 complex matrix; components ordered as in
    _hom_components, unknowns ordered T00, T01, T10, T11."""
    a, b, t = A.entries, B.entries, T
    J = np.zeros((6, 4), dtype=complex)
    row = 0
    for i in (0, 1):
        for k in (0, 1):
            for p in (0, 1):
                for q in (0, 1):
                    col = 2 * p + q
                    val = 0j
                    if q == k:
                        val += a[i][p]
                    if p == i:
                        val -= 2.0 * t[i][q] * b[q][k]
                    J[row, col] = val
            row += 1
    for k in (0, 1):
        for q in (0, 1):
            J[row, 0 * 2 + q] = -t[1][q] * b[q][k]
            J[row, 1 * 2 + q] = -t[0][q] * b[q][k]
        row += 1
    return J


def _jacobian_vec(A, B, T, complex_mode: bool) -> np.ndarray:
    Jc = _jac_complex(A, B, T)
    if complex_mode:
        J = np.zeros((13, 8))
        J[:12, :] = complex_jacobian_to_real(Jc)
    else:
        J = np.zeros((7, 4))
        J[:6, :] = np.real(Jc)
    # barrier row
    D = _det2(T)
    if abs(D) ** 2 < _BARRIER_DELTA:
        dD = (T[1][1], -T[1][0], -T[0][1], T[0][0])  # d(det)/dT00, T01, T10, T11
        for idx, dd in enumerate(dD):
            g = np.conj(D) * dd
            if complex_mode:
                J[-1, 2 * idx] = -2.0 * g.real / _BARRIER_DELTA
                J[-1, 2 * idx + 1] = 2.0 * g.imag / _BARRIER_DELTA
            else:
                J[-1, idx] = -2.0 * g.real / _BARRIER_DELTA
    return J


def find_isomorphism(
    A: StructureMatrix,
    B: StructureMatrix,
    *,
    starts: int = 200,
    seed: int = 0,
    tol: float = ISO_TOL,
    extra_starts=(),
):
    """Search for an algebra isomorphism from A onto B.

    Returns a BasisChange T whose homomorphism residual (sum of squared
    coordinates over basis pairs) is below tol, or None once the multi-start
    budget is exhausted.  Starts run in a fixed order: caller-provided
    closed-form guesses, identity and swap, then a Halton grid in the box
    [-3, 3] per real coordinate; the first start reaching the bound wins,
    which makes the result independent of any batching.
    """
    if A.dim != 2 or B.dim != 2:
        raise DimensionMismatchError("isomorphism search supports dimension 2 only")
    if A.field != B.field:
        raise ValueError(f"field modes differ: {A.field} vs {B.field}")
    complex_mode = A.field == COMPLEX
    dof = 8 if complex_mode else 4

    def residual(x):
        return _residual_vec(A, B, _unpack(x, complex_mode), complex_mode)

    def jacobian(x):
        return _jacobian_vec(A, B, _unpack(x, complex_mode), complex_mode)

    def start_points():
        for t in extra_starts:
            yield _pack(t, complex_mode)
        yield _pack(((1, 0), (0, 1)), complex_mode)
        yield _pack(((0, 1), (1, 0)), complex_mode)
        i = 1
        while True:
            yield halton_box(i + seed * 7919, dof, -3.0, 3.0)
            i += 1

    stop = math.sqrt(tol / 12.0) * 0.5
    for n, x0 in enumerate(start_points()):
        if n >= starts:
            break
        T = _unpack(x0, complex_mode)
        if _accepts(A, B, T, tol):
            return BasisChange(T)
        x, _, _ = levenberg_marquardt(residual, jacobian, x0, stop_norm=stop)
        T = _unpack(x, complex_mode)
        if _accepts(A, B, T, tol):
            return BasisChange(T)
    return None


INV_TOL = 1e-9  # residual bound on the inverse witness


def _accepts(A, B, T, tol) -> bool:
    # A near-singular T can sit within tol of a genuine but non-invertible
    # homomorphism; demanding that the inverse map is a homomorphism as well
    # rejects those (its residual blows up as 1/det).
    if abs(_det2(T)) <= DET_TOL or homomorphism_residual(A, B, T) >= tol:
        return False
    return homomorphism_residual(B, A, _inv2(T)) < INV_TOL


# --- rank-1 invariants and closed-form starting points -------------------------


def _rank1_data(A: StructureMatrix, tol: float):
    """Write row_i = lam_i * w for a rank-1 matrix; returns (w, lam)."""
    r = A.entries
    scale = max(1.0, A.maxabs())
    norms = [max(abs(z) for z in row) for row in r]
    p = 0 if norms[0] >= norms[1] else 1
    q = 1 - p
    w = r[p]
    j = 0 if abs(w[0]) >= abs(w[1]) else 1
    lam = [0j, 0j]
    lam[p] = 1.0 + 0j
    lam[q] = r[q][j] / w[j]
    err = max(abs(r[q][k] - lam[q] * w[k]) for k in (0, 1))
    if err > tol * scale:
        raise UnclassifiableError(
            f"rows are not proportional within tolerance (defect {err:.3g}); "
            "the input sits near the rank boundary"
        )
    return w, (lam[0], lam[1])


def _basis_tuple(i):
    return (1.0 + 0j, 0j) if i == 0 else (0j, 1.0 + 0j)


def _safe_inv_start(S):
    if S is None:
        return []
    d = _det2(S)
    if abs(d) < 1e-150:
        return []
    return [_inv2(S)]


def _start_E1(w, lam, kappa, tol):
    z = 0 if abs(lam[0]) <= abs(lam[1]) else 1
    if abs(lam[z]) > tol or kappa == 0:
        return []
    u = (w[0] / kappa, w[1] / kappa)
    return _safe_inv_start((u, _basis_tuple(z)))


def _start_E2(w, lam, kappa, real_mode):
    ll = lam[0] * lam[1]
    if ll == 0 or kappa == 0:
        return []
    if real_mode and ll.real <= 0:
        return []
    mu = 1.0 / (kappa * cmath.sqrt(ll))
    u = (w[0] / kappa, w[1] / kappa)
    v = (mu * w[1] * lam[1], -mu * w[0] * lam[0])
    return _safe_inv_start((u, v))


def _start_E5_real(w, lam, kappa):
    ll = lam[0] * lam[1]
    if ll.real >= 0 or kappa == 0:
        return []
    mu = 1.0 / (kappa * math.sqrt(-ll.real))
    u = (w[0] / kappa, w[1] / kappa)
    v = (mu * w[1] * lam[1], -mu * w[0] * lam[0])
    return _safe_inv_start((u, v))


def _start_E3(w, lam):
    sizes = [abs(w[0] * lam[0]), abs(w[1] * lam[1])]
    m = 0 if sizes[0] >= sizes[1] else 1
    if sizes[m] == 0:
        return []
    pm = 1.0 / (lam[m] * w[m])
    p = (pm, 0j) if m == 0 else (0j, pm)
    cp = lam[m] * pm * pm
    q = (cp * w[0] - p[0], cp * w[1] - p[1])
    return _safe_inv_start((p, q))


def _e4_witness(A: StructureMatrix, shape: E4Shape):
    if shape.variant == "upper":
        S = ((1.0 + 0j, 0j), (0j, shape.entry))
    else:
        S = ((0j, 1.0 + 0j), (shape.entry, 0j))
    inv = _inv2(S)
    return BasisChange(inv) if inv is not None else None


# --- classification -----------------------------------------------------------


def classify(A: StructureMatrix, field: str | None = None, *, tol: float = DEFAULT_TOL,
             seed: int = 0, starts: int = 200) -> AlgebraClass:
    """Canonical class of a 2-dimensional evolution algebra."""
    return classify_with_witness(A, field, tol=tol, seed=seed, starts=starts)[0]


def classify_with_witness(
    A: StructureMatrix,
    field: str | None = None,
    *,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
    starts: int = 200,
):
    """Classify and also return the basis-change witness (None for the exact
    E0/E4 decisions, which need no search)."""
    if A.dim != 2:
        raise DimensionMismatchError(f"classification supports dimension 2 only, got {A.dim}")
    field = field or A.field
    if field == REAL and any(z.imag != 0 for row in A.entries for z in row):
        raise ValueError("cannot classify a genuinely complex matrix in real mode")
    if A.field != field:
        A = StructureMatrix(A.entries, field)

    if A.maxabs() <= tol:
        return AlgebraClass(field, "E0"), None
    shape = is_E4_shape(A, tol)
    if shape.matches:
        return AlgebraClass(field, "E4"), _e4_witness(A, shape)

    scale = max(1.0, A.maxabs())
    det = _det2(A.entries)
    if abs(det) > tol * scale * scale:
        return _classify_rank2(A, field, tol, seed, starts)
    return _classify_rank1(A, field, tol, seed, starts)


def _classify_rank1(A, field, tol, seed, starts):
    w, lam = _rank1_data(A, tol)
    scale = max(1.0, A.maxabs())
    kappa = w[0] * w[0] * lam[0] + w[1] * w[1] * lam[1]
    ll = lam[0] * lam[1]
    kappa_zero = abs(kappa) <= tol * scale * scale
    ll_zero = abs(ll) <= tol

    if field == COMPLEX:
        if not kappa_zero:
            order = ["E1", "E2", "E3"] if ll_zero else ["E2", "E1", "E3"]
        else:
            order = ["E3", "E2", "E1"]
    else:
        if not kappa_zero:
            if ll_zero:
                order = ["E1", "E2", "E5", "E3"]
            elif ll.real > 0:
                order = ["E2", "E5", "E1", "E3"]
            else:
                order = ["E5", "E2", "E1", "E3"]
        else:
            order = ["E3", "E2", "E5", "E1"] if field == REAL else ["E3", "E2", "E1"]

    builders = {
        "E1": lambda: _start_E1(w, lam, kappa, tol),
        "E2": lambda: _start_E2(w, lam, kappa, field == REAL),
        "E3": lambda: _start_E3(w, lam),
        "E5": lambda: _start_E5_real(w, lam, kappa),
    }
    for tag in order:
        B = canonical_matrix(AlgebraClass(field, tag))
        witness = find_isomorphism(A, B, starts=starts, seed=seed,
                                   extra_starts=builders[tag]())
        if witness is not None:
            return AlgebraClass(field, tag), witness
    raise UnclassifiableError(
        "no rank-1 canonical form matched within the multi-start budget; "
        "the input is numerically degenerate"
    )


def _col_swap(T):
    return ((T[0][1], T[0][0]), (T[1][1], T[1][0]))


def _refit_params(A, field, tag, T, params):
    """Given a witness T, re-fit the canonical parameters by linear least
    squares on the homomorphism residual (the residual is linear in them)."""
    base = canonical_matrix(AlgebraClass(field, tag, tuple(0 for _ in params)))
    r0 = np.array(_hom_components(A, base, T))
    cols = []
    for r in range(len(params)):
        probe = [0] * len(params)
        probe[r] = 1
        Bp = canonical_matrix(AlgebraClass(field, tag, tuple(probe)))
        cols.append(np.array(_hom_components(A, Bp, T)) - r0)
    M = -np.column_stack(cols)
    sol, *_ = np.linalg.lstsq(M, r0, rcond=None)
    if field == REAL:
        sol = sol.real
    return tuple(complex(z) for z in sol)


def _finish_rank2(A, field, tag, reps, tol, seed, starts):
    """reps: list of (params, start_T) candidates covering the parameter
    equivalences; tries the lexicographically smallest representative first."""
    key = lambda item: tuple(v for p in item[0] for v in _lex_key(p))
    for params, T0 in sorted(reps, key=key):
        B = canonical_matrix(AlgebraClass(field, tag, params))
        witness = find_isomorphism(A, B, starts=starts, seed=seed, extra_starts=[T0])
        if witness is None:
            continue
        fitted = _refit_params(A, field, tag, witness.entries, params)
        fitted = canonicalize_params(field, tag, fitted)
        Bf = canonical_matrix(AlgebraClass(field, tag, fitted))
        if homomorphism_residual(A, Bf, witness.entries) < ISO_TOL:
            return AlgebraClass(field, tag, fitted), witness
        return AlgebraClass(field, tag, params), witness
    return None


def _classify_rank2(A, field, tol, seed, starts):
    (a11, a12), (a21, a22) = A.entries
    scale = max(1.0, A.maxabs())
    eps = tol * scale
    diag_tag = "E5" if field == COMPLEX else "E6"
    off_tag = "E6" if field == COMPLEX else "E7"

    if abs(a11) > eps and abs(a22) > eps:
        x = a12 * a22 / (a11 * a11)
        y = a21 * a11 / (a22 * a22)
        T0 = ((a11, 0j), (0j, a22))
        reps = [((x, y), T0), ((y, x), _col_swap(T0))]
        got = _finish_rank2(A, field, diag_tag, reps, tol, seed, starts)
        if got:
            return got
    else:
        if abs(a11) <= eps:
            base = 1.0 / (a12 * a12 * a21)
            roots = _cube_roots(base, field)
            reps = []
            for d1 in roots:
                d2 = d1 * d1 * a12
                a4 = d2 * a22
                S = ((d1, 0j), (0j, d2))
                inv = _inv2(S)
                if inv:
                    reps.append(((a4,), inv))
        else:
            base = 1.0 / (a21 * a21 * a12)
            roots = _cube_roots(base, field)
            reps = []
            for d1 in roots:
                d2 = d1 * d1 * a21
                a4 = d2 * a11
                S = ((0j, d1), (d2, 0j))
                inv = _inv2(S)
                if inv:
                    reps.append(((a4,), inv))
        got = _finish_rank2(A, field, off_tag, reps, tol, seed, starts)
        if got:
            return got

    # fallback: joint search over basis change and parameters
    for tag in (diag_tag, off_tag):
        got = _joint_rank2(A, field, tag, seed, starts)
        if got:
            return got
    raise UnclassifiableError(
        "no rank-2 canonical form matched within the multi-start budget; "
        "the input is numerically degenerate (e.g. 1 - a2*a3 near 0)"
    )


def _cube_roots(z: complex, field: str):
    if field == REAL:
        r = z.real
        return [complex(math.copysign(abs(r) ** (1.0 / 3.0), r))]
    principal = z ** (1.0 / 3.0)
    return [principal, principal * _OMEGA, principal * _OMEGA * _OMEGA]


def _joint_rank2(A, field, tag, seed, starts):
    """Levenberg-Marquardt over the basis change and the canonical parameters
    together; robustness fallback for degenerate-looking inputs."""
    complex_mode = field == COMPLEX
    np_ = n_params(field, tag)
    t_dof = 8 if complex_mode else 4
    p_dof = (2 if complex_mode else 1) * np_
    dof = t_dof + p_dof

    base = canonical_matrix(AlgebraClass(field, tag, (0,) * np_))
    probes = []
    for r in range(np_):
        v = [0] * np_
        v[r] = 1
        probes.append(canonical_matrix(AlgebraClass(field, tag, tuple(v))))

    def split(xv):
        T = _unpack(xv[:t_dof], complex_mode)
        if complex_mode:
            params = tuple(complex(xv[t_dof + 2 * r], xv[t_dof + 2 * r + 1]) for r in range(np_))
        else:
            params = tuple(complex(xv[t_dof + r]) for r in range(np_))
        return T, params

    def build_B(params):
        return canonical_matrix(AlgebraClass(field, tag, params))

    def residual(xv):
        T, params = split(xv)
        return _residual_vec(A, build_B(params), T, complex_mode)

    def jacobian(xv):
        T, params = split(xv)
        B = build_B(params)
        J = _jacobian_vec(A, B, T, complex_mode)
        cols = []
        for probe in probes:
            # residual components are img - mult_B and mult is linear in B,
            # so d(res)/d(param) = mult_base - mult_probe = hom(probe) - hom(base)
            dc = np.array(_hom_components(A, probe, T)) - np.array(
                _hom_components(A, base, T)
            )
            cols.append(dc)
        m = J.shape[0]
        Jp = np.zeros((m, p_dof))
        for r, col in enumerate(cols):
            if complex_mode:
                block = complex_jacobian_to_real(col.reshape(-1, 1))
                Jp[: 2 * len(col), 2 * r : 2 * r + 2] = block
            else:
                Jp[: len(col), r] = np.real(col)
        return np.hstack([J, Jp])

    stop = math.sqrt(ISO_TOL / 12.0) * 0.5
    for i in range(1, starts + 1):
        x0 = halton_box(i + seed * 104729, dof, -3.0, 3.0)
        x, _, _ = levenberg_marquardt(residual, jacobian, x0, stop_norm=stop)
        T, params = split(x)
        B = build_B(params)
        if abs(_det2(T)) > DET_TOL and homomorphism_residual(A, B, T) < ISO_TOL:
            if tag in ("E5",) or (field == REAL and tag == "E6"):
                if abs(1 - params[0] * params[1]) <= DEFAULT_TOL:
                    continue
            canon = canonicalize_params(field, tag, params)
            T = _compose_param_equivalence(field, tag, params, canon, T)
            Bc = canonical_matrix(AlgebraClass(field, tag, canon))
            w = find_isomorphism(A, Bc, starts=8, seed=seed, extra_starts=[T])
            if w is not None:
                return AlgebraClass(field, tag, canon), w
    return None


def _compose_param_equivalence(field, tag, params, canon, T):
    """Adjust a witness onto the canonical parameter representative: swap the
    target coordinates for the pair equivalence, or rescale them by
    (z, z^2) with z the cube root of unity rotating a4 onto its
    representative."""
    if max(abs(p - q) for p, q in zip(params, canon)) < 1e-9:
        return T
    if (field == COMPLEX and tag == "E5") or (field == REAL and tag == "E6"):
        return _col_swap(T)
    if field == COMPLEX and tag == "E6":
        zeta = min((1.0 + 0j, _OMEGA, _OMEGA * _OMEGA),
                   key=lambda z: abs(z * params[0] - canon[0]))
        return ((T[0][0] * zeta, T[0][1] * zeta * zeta),
                (T[1][0] * zeta, T[1][1] * zeta * zeta))
    return T
