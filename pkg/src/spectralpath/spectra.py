"""Spectral classification and primitive-idempotent entry profiles.

A square real matrix is *multiplicity-free* when it has n distinct real
eigenvalues.  For such a matrix the spectral projectors come from the
product formula

    E_i = prod_{j != i} (A - theta_j I) / (theta_i - theta_j),

and the profile of an entry position (s, t) is the vector

    c_i = (E_i)_{st} * prod_{j != i} (theta_i - theta_j).

Whether that profile is a nonzero constant is the spectral side of the
structure tests in :mod:`spectralpath.equivalence`.

Eigenvalues are found without any non-symmetric eigensolver: a
positive-diagonal symmetrizer reduces to the symmetric case when one
exists, and otherwise the characteristic polynomial (Faddeev-LeVerrier)
is analyzed by bisection over sign changes of its derivative sequence.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .linalg import DEFAULT_TOL, Tolerance, as_matrix, numeric_rank, sym_eigen
from .symmetrize import NotSymmetrizable, Symmetrizer, find_symmetrizer

__all__ = [
    "SpectralKind",
    "Spectrum",
    "SpectralClass",
    "EntryProfile",
    "classify",
    "primitive_idempotents",
    "spectrum_of",
    "gap_product",
    "entry_product_profile",
    "char_poly_coefficients",
    "real_roots",
    "SpectralIdentityError",
    "DegenerateSpectrumError",
    "MultiplicityFreeRequiredError",
]


class SpectralKind(enum.Enum):
    MULTIPLICITY_FREE = "multiplicity_free"
    DIAGONALIZABLE_NOT_MF = "diagonalizable_not_mf"
    NOT_DIAGONALIZABLE = "not_diagonalizable"
    COMPLEX_SPECTRUM = "complex_spectrum"


class SpectralIdentityError(RuntimeError):
    """Spectral projector identities failed verification."""

    def __init__(self, which: str, residual: float, bound: float):
        self.which = which
        self.residual = residual
        self.bound = bound
        super().__init__(
            f"spectral identity {which!r} violated: residual {residual:.3e} > {bound:.3e}"
        )


class DegenerateSpectrumError(ValueError):
    """Eigenvalue gap product underflowed its scale threshold."""


class MultiplicityFreeRequiredError(ValueError):
    """An operation requiring n distinct real eigenvalues got something else."""

    def __init__(self, classification: "SpectralClass"):
        self.classification = classification
        super().__init__(
            f"matrix is not multiplicity-free (classified {classification.kind.value})"
        )


@dataclass(frozen=True)
class Spectrum:
    """Distinct real eigenvalues (descending) with verified projectors."""

    theta: np.ndarray
    idempotents: tuple
    residuals: dict = field(compare=False)

    @property
    def d(self) -> int:
        return len(self.theta) - 1


@dataclass(frozen=True)
class SpectralClass:
    """Classification of a matrix spectrum.

    `eigenvalues` lists (value, multiplicity) pairs for the real eigenvalues
    that were found; `rank_defects` lists (value, defect) pairs witnessing
    missing eigenvector directions; `spectrum` is populated only in the
    multiplicity-free case.  For matrices with no positive-diagonal
    symmetrizer the split between the non-diagonalizable kinds is
    best-effort diagnostics from the characteristic polynomial.
    """

    kind: SpectralKind
    eigenvalues: tuple
    rank_defects: tuple = ()
    spectrum: Spectrum | None = None


@dataclass(frozen=True)
class EntryProfile:
    """Profile values c_i at one entry position, with the constancy verdict."""

    values: np.ndarray
    is_constant: bool
    common_value: float | None
    constant_zero: bool
    spread: float
    threshold: float


def char_poly_coefficients(A) -> np.ndarray:
    """Monic characteristic polynomial coefficients, highest degree first.

    Faddeev-LeVerrier recurrence; exact in exact arithmetic, adequate in
    floating point at the small orders used here.
    """
    A = as_matrix(A)
    n = A.shape[0]
    coeffs = np.zeros(n + 1)
    coeffs[0] = 1.0
    M = np.eye(n)
    for k in range(1, n + 1):
        AM = A @ M
        coeffs[k] = -np.trace(AM) / k
        M = AM + coeffs[k] * np.eye(n)
    return coeffs


def _poly_eval(c: np.ndarray, x: float):
    """Horner evaluation returning (value, magnitude scale of the terms)."""
    v = 0.0
    s = 0.0
    ax = abs(x)
    for coef in c:
        v = v * x + coef
        s = s * ax + abs(coef)
    return v, s


def _poly_deriv(c: np.ndarray) -> np.ndarray:
    n = len(c) - 1
    return c[:-1] * np.arange(n, 0, -1)


def _bisect_root(c, a, b, fa, fb) -> float:
    for _ in range(200):
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        fm, _ = _poly_eval(c, m)
        if fm == 0.0:
            return m
        if (fa < 0.0) != (fm < 0.0):
            b, fb = m, fm
        else:
            a, fa = m, fm
    return 0.5 * (a + b)


def _merge_close(values, radius):
    if not values:
        return []
    values = sorted(values)
    merged = [[values[0]]]
    for v in values[1:]:
        if v - merged[-1][-1] <= radius:
            merged[-1].append(v)
        else:
            merged.append([v])
    return [sum(g) / len(g) for g in merged]


def _isolation_nodes(c: np.ndarray, eig_tol: float):
    """Approximate real roots of `c`, used as isolation nodes one level up."""
    n = len(c) - 1
    if n <= 0:
        return []
    c = c / c[0]
    if n == 1:
        return [-c[1]]
    bound = 1.0 + float(np.max(np.abs(c[1:])))
    inner = [x for x in _isolation_nodes(_poly_deriv(c), eig_tol) if -bound < x < bound]
    nodes = sorted(set([-bound] + inner + [bound]))
    vals = [_poly_eval(c, x) for x in nodes]
    # treat |p| at or below the vanish threshold as a zero endpoint
    zeroish = [abs(v) <= eig_tol * max(1.0, s) for v, s in vals]
    roots = [x for x, z in zip(nodes, zeroish) if z]
    for idx in range(len(nodes) - 1):
        if zeroish[idx] or zeroish[idx + 1]:
            continue
        fa, fb = vals[idx][0], vals[idx + 1][0]
        if (fa < 0.0) != (fb < 0.0):
            roots.append(_bisect_root(c, nodes[idx], nodes[idx + 1], fa, fb))
    return _merge_close(roots, eig_tol)


def _multiplicity_at(c: np.ndarray, x: float, eig_tol: float) -> int:
    n = len(c) - 1
    deriv = c
    for m in range(1, n + 1):
        deriv = _poly_deriv(deriv)
        if len(deriv) == 0:
            return m
        v, s = _poly_eval(deriv, x)
        if abs(v) > eig_tol * max(1.0, s):
            return m
    return n


def real_roots(coeffs, tol: Tolerance = DEFAULT_TOL):
    """Real roots of a polynomial with multiplicities.

    Returns a list of (root, multiplicity) pairs sorted ascending.  The sum
    of multiplicities can fall short of the degree; the deficit counts
    non-real roots.  Roots closer than eig_tol are merged.
    """
    c = np.asarray(coeffs, dtype=float)
    if c.ndim != 1 or len(c) < 2 or c[0] == 0.0:
        raise ValueError("expected coefficients of a polynomial of degree >= 1")
    c = c / c[0]
    n = len(c) - 1
    bound = 1.0 + float(np.max(np.abs(c[1:]))) if n >= 1 else 1.0

    inner = [x for x in _isolation_nodes(_poly_deriv(c), tol.eig_tol) if -bound < x < bound]
    nodes = sorted(set([-bound] + inner + [bound]))
    vals = [_poly_eval(c, x) for x in nodes]
    zeroish = [abs(v) <= tol.eig_tol * max(1.0, s) for v, s in vals]

    simple = []
    for idx in range(len(nodes) - 1):
        if zeroish[idx] or zeroish[idx + 1]:
            continue
        fa, fb = vals[idx][0], vals[idx + 1][0]
        if (fa < 0.0) != (fb < 0.0):
            simple.append(_bisect_root(c, nodes[idx], nodes[idx + 1], fa, fb))
    simple = _merge_close(simple, tol.eig_tol)

    if len(simple) == n:
        return [(r, 1) for r in simple]

    vanish = [
        x
        for x, z in zip(nodes, zeroish)
        if z and all(abs(x - r) > tol.eig_tol for r in simple)
    ]
    vanish = _merge_close(vanish, tol.eig_tol)
    # most-root-like candidates claim multiplicity budget first
    vanish.sort(key=lambda x: abs(_poly_eval(c, x)[0]))
    found = [(r, 1) for r in simple]
    budget = n - len(simple)
    for x in vanish:
        if budget <= 0:
            break
        m = min(_multiplicity_at(c, x, tol.eig_tol), budget)
        found.append((x, m))
        budget -= m
    return sorted(found)


def primitive_idempotents(A, theta, tol: Tolerance = DEFAULT_TOL):
    """Spectral projectors of a multiplicity-free matrix by the product formula.

    `theta` must hold the n distinct eigenvalues.  Factors are applied in
    descending order of |theta_i - theta_j| for accuracy.  The projector
    identities (sum to I, pairwise products, eigen-reconstruction) are
    verified before returning; violation raises SpectralIdentityError.
    """
    A = as_matrix(A)
    theta = np.asarray(theta, dtype=float)
    n = A.shape[0]
    if theta.shape != (n,):
        raise ValueError(f"expected {n} eigenvalues, got shape {theta.shape}")
    eye = np.eye(n)
    idempotents = []
    for i in range(n):
        others = [j for j in range(n) if j != i]
        others.sort(key=lambda j: -abs(theta[i] - theta[j]))
        E = eye.copy()
        for j in others:
            gap = theta[i] - theta[j]
            if gap == 0.0:
                raise DegenerateSpectrumError(f"eigenvalues {i} and {j} coincide")
            E = (A - theta[j] * eye) @ E / gap
        idempotents.append(E)
    _verify_spectrum(A, theta, idempotents, tol)
    return idempotents


def _verify_spectrum(A, theta, idempotents, tol: Tolerance) -> dict:
    n = A.shape[0]
    eye = np.eye(n)
    r_sum = float(np.max(np.abs(sum(idempotents) - eye)))
    r_idem = 0.0
    for i in range(n):
        for j in range(n):
            target = idempotents[i] if i == j else 0.0
            r = float(np.max(np.abs(idempotents[i] @ idempotents[j] - target)))
            r_idem = max(r_idem, r)
    recon = sum(t * E for t, E in zip(theta, idempotents))
    r_recon = float(np.max(np.abs(A - recon)))

    scale = max(1.0, float(np.max(np.abs(A))))
    if r_sum > tol.residual_tol:
        raise SpectralIdentityError("sum_to_identity", r_sum, tol.residual_tol)
    if r_idem > tol.residual_tol:
        raise SpectralIdentityError("idempotency", r_idem, tol.residual_tol)
    if r_recon > tol.residual_tol * scale:
        raise SpectralIdentityError("reconstruction", r_recon, tol.residual_tol * scale)
    return {
        "sum_to_identity": r_sum,
        "idempotency": r_idem,
        "reconstruction": r_recon,
    }


def spectrum_of(A, theta, tol: Tolerance = DEFAULT_TOL) -> Spectrum:
    """Bundle eigenvalues (sorted descending) with verified projectors."""
    A = as_matrix(A)
    theta = np.asarray(theta, dtype=float)
    order = np.argsort(-theta, kind="stable")
    theta = theta[order]
    idempotents = primitive_idempotents(A, theta, tol)
    residuals = _verify_spectrum(A, theta, idempotents, tol)
    return Spectrum(theta=theta, idempotents=tuple(idempotents), residuals=residuals)


def _cluster_eigenvalues(values, eig_tol):
    """Group sorted values into (mean, multiplicity) clusters within eig_tol."""
    values = sorted(values, reverse=True)
    clusters = [[values[0]]]
    for v in values[1:]:
        if clusters[-1][-1] - v <= eig_tol:
            clusters[-1].append(v)
        else:
            clusters.append([v])
    return tuple((sum(g) / len(g), len(g)) for g in clusters)


def classify(A, tol: Tolerance = DEFAULT_TOL, symmetrizer=None) -> SpectralClass:
    """Classify the spectrum of a square real matrix.

    A positive-diagonal symmetrizer, when one exists, reduces the problem
    to a symmetric eigen decomposition with guaranteed real spectrum.
    Otherwise real roots of the characteristic polynomial are isolated and
    counted; a shortfall against the degree means non-real eigenvalues,
    and repeated real roots are probed with a rank test for missing
    eigenvector directions.
    """
    A = as_matrix(A)
    n = A.shape[0]
    sym = symmetrizer if symmetrizer is not None else find_symmetrizer(A, tol)

    if isinstance(sym, Symmetrizer):
        S = sym.conjugate(A)
        S = 0.5 * (S + S.T)
        w, _ = sym_eigen(S, tol)
        gaps_ok = n == 1 or float(np.min(w[:-1] - w[1:])) > tol.eig_tol
        if gaps_ok:
            sp = spectrum_of(A, w, tol)
            return SpectralClass(
                kind=SpectralKind.MULTIPLICITY_FREE,
                eigenvalues=tuple((float(t), 1) for t in sp.theta),
                spectrum=sp,
            )
        return SpectralClass(
            kind=SpectralKind.DIAGONALIZABLE_NOT_MF,
            eigenvalues=_cluster_eigenvalues(w, tol.eig_tol),
        )

    roots = real_roots(char_poly_coefficients(A), tol)
    total = sum(m for _, m in roots)
    eigenvalues = tuple(sorted(((float(r), m) for r, m in roots), key=lambda p: -p[0]))
    if total < n:
        return SpectralClass(kind=SpectralKind.COMPLEX_SPECTRUM, eigenvalues=eigenvalues)
    if all(m == 1 for _, m in roots):
        sp = spectrum_of(A, [r for r, _ in roots], tol)
        return SpectralClass(
            kind=SpectralKind.MULTIPLICITY_FREE,
            eigenvalues=tuple((float(t), 1) for t in sp.theta),
            spectrum=sp,
        )
    defects = []
    for r, m in roots:
        if m < 2:
            continue
        shifted = A - r * np.eye(n)
        thr = tol.residual_tol * max(1.0, float(np.max(np.abs(shifted))))
        defect = numeric_rank(shifted, thr) - (n - m)
        if defect > 0:
            defects.append((float(r), defect))
    if defects:
        return SpectralClass(
            kind=SpectralKind.NOT_DIAGONALIZABLE,
            eigenvalues=eigenvalues,
            rank_defects=tuple(defects),
        )
    return SpectralClass(kind=SpectralKind.DIAGONALIZABLE_NOT_MF, eigenvalues=eigenvalues)


def gap_product(theta, i: int) -> float:
    """Product of eigenvalue gaps prod_{j != i} (theta_i - theta_j).

    Empty product (single eigenvalue) is 1.  Raises DegenerateSpectrumError
    when the magnitude underflows eig_tol to the power d, which signals
    eigenvalues too close for the product to be meaningful.
    """
    theta = np.asarray(theta, dtype=float)
    d = len(theta) - 1
    if not (0 <= i <= d):
        raise ValueError(f"index {i} outside 0..{d}")
    v = 1.0
    for j in range(d + 1):
        if j != i:
            v *= theta[i] - theta[j]
    if d >= 1 and abs(v) < max(DEFAULT_TOL.eig_tol**d, 5e-324):
        raise DegenerateSpectrumError(
            f"gap product at index {i} underflowed ({v:.3e}); eigenvalues nearly coincide"
        )
    return float(v)


def entry_product_profile(
    A, s: int, t: int, tol: Tolerance = DEFAULT_TOL, spectrum: Spectrum | None = None
) -> EntryProfile:
    """Profile c_i = (E_i)_{st} * gap_product(theta, i) at position (s, t).

    Requires a multiplicity-free matrix; raises MultiplicityFreeRequiredError
    otherwise.  The constancy threshold scales with the d-th power of the
    largest entry magnitude, matching the growth of the gap products.  A
    profile that is constant but below the threshold in magnitude is
    reported as constant_zero with no common value.
    """
    A = as_matrix(A)
    n = A.shape[0]
    if not (0 <= s < n and 0 <= t < n):
        raise ValueError(f"entry position ({s}, {t}) outside 0..{n - 1}")
    if spectrum is None:
        cls = classify(A, tol)
        if cls.kind is not SpectralKind.MULTIPLICITY_FREE:
            raise MultiplicityFreeRequiredError(cls)
        spectrum = cls.spectrum
    theta = spectrum.theta
    values = np.array(
        [spectrum.idempotents[i][s, t] * gap_product(theta, i) for i in range(n)]
    )
    d = n - 1
    scale = float(np.max(np.abs(A)))
    threshold = tol.residual_tol * scale**d
    mean = float(np.mean(values))
    spread = float(np.max(np.abs(values - mean))) if n else 0.0
    is_constant = spread <= threshold
    constant_zero = is_constant and abs(mean) <= threshold
    return EntryProfile(
        values=values,
        is_constant=is_constant,
        common_value=mean if is_constant and not constant_zero else None,
        constant_zero=constant_zero,
        spread=spread,
        threshold=threshold,
    )
