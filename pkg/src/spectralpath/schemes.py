"""Symmetric association schemes and their polynomial structures.

A scheme on a set X of size |X| is a partition of X x X into d+1 symmetric
relations R_0 (the diagonal), ..., R_d such that the number of z with
(x, z) in R_i and (z, y) in R_j depends only on the relation of (x, y).
Those counts are the intersection numbers p^h_ij.  The scheme can be given
either by explicit 0/1 relation matrices or by the intersection tensor
alone; both forms are validated on construction.

The first eigenmatrix P and second eigenmatrix Q diagonalize the Bose-
Mesner algebra: P rows are the common left eigenvectors of the
intersection matrices B_i (entries p^h_ij), normalized so column 0 is all
ones, with the valency row first; Q = |X| P^{-1}.  The Krein parameters
q^h_ij play the role of intersection numbers for the entrywise product and
define dual intersection matrices.  P- and Q-polynomial orderings are
detected from the bidirected-path shape of B_i and of the dual matrices,
and the endpoint characterization checks compare those orderings against
closed-form eigenvalue gap-product ratios.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .digraph import bidirected_path_endpoints, gamma
from .linalg import DEFAULT_TOL, Tolerance, solve, sym_eigen
from .spectra import gap_product
from .symmetrize import Symmetrizer, find_symmetrizer

__all__ = [
    "AssociationScheme",
    "SchemeEigendata",
    "PolyStructure",
    "SchemeCharacterizationReport",
    "scheme_from_relations",
    "scheme_from_p_tensor",
    "builtin_scheme",
    "BUILTIN_SIZE_CAP",
    "intersection_matrix",
    "eigendata",
    "krein_parameters",
    "krein_matrix",
    "rho_idempotent",
    "detect_p_polynomial",
    "detect_q_polynomial",
    "check_p_polynomial_characterization",
    "check_q_polynomial_characterization",
    "read_scheme",
    "write_scheme",
    "SchemeValidationError",
    "SchemeParseError",
    "EigenvalueCollisionError",
]

BUILTIN_SIZE_CAP = 4096


class SchemeValidationError(ValueError):
    """A scheme axiom failed; carries the axiom tag and a witness."""

    def __init__(self, axiom: str, witness, message: str):
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"{axiom} violated at {witness}: {message}")


class SchemeParseError(ValueError):
    """Malformed scheme text, carrying the 1-based line number."""

    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


class EigenvalueCollisionError(RuntimeError):
    """Random positive combinations kept producing colliding eigenvalues."""


@dataclass(frozen=True)
class AssociationScheme:
    """Validated symmetric association scheme.

    `relations` holds the 0/1 adjacency matrices when the scheme came from
    explicit relations, and None when only the intersection tensor is
    known.  `p[h, i, j]` is the intersection number p^h_ij; `k` the
    valencies.
    """

    size: int
    d: int
    k: np.ndarray
    p: np.ndarray
    relations: tuple | None = field(default=None, compare=False)


class PolyStructure(NamedTuple):
    """A detected polynomial ordering: generator index, full ordering, last index."""

    generator: int
    ordering: tuple
    last: int


def _relations_p_tensor(mats, size: int):
    """Intersection tensor by exact triple counting, with regularity check.

    Products are taken in float64, which is exact here because every count
    is at most |X| < 2**53.
    """
    dp1 = len(mats)
    F = [m.astype(float) for m in mats]
    supports = [m.astype(bool) for m in mats]
    p = np.zeros((dp1, dp1, dp1), dtype=np.int64)
    for i in range(dp1):
        for j in range(dp1):
            M = np.rint(F[i] @ F[j]).astype(np.int64)
            for h in range(dp1):
                vals = M[supports[h]]
                v0 = int(vals[0])
                if not np.all(vals == v0):
                    x, y = np.argwhere(supports[h])[int(np.argmax(vals != v0))]
                    raise SchemeValidationError(
                        "regularity",
                        (h, i, j),
                        f"triple count at pair ({x}, {y}) differs from {v0}",
                    )
                p[h, i, j] = v0
    return p


def _validate_p_tensor(p: np.ndarray, k: np.ndarray, size: int):
    dp1 = p.shape[0]
    if p.shape != (dp1, dp1, dp1):
        raise SchemeValidationError("tensor_shape", p.shape, "intersection tensor must be cubic")
    if np.any(p < 0):
        h, i, j = np.argwhere(p < 0)[0]
        raise SchemeValidationError("nonnegativity", (int(h), int(i), int(j)), "negative count")
    if np.any(k <= 0) or k[0] != 1:
        raise SchemeValidationError("valencies", tuple(int(x) for x in k), "need k_0 = 1, all k_i > 0")
    if int(np.sum(k)) != size:
        raise SchemeValidationError(
            "valencies", int(np.sum(k)), f"valencies sum to {int(np.sum(k))}, expected |X| = {size}"
        )
    for h in range(dp1):
        for j in range(dp1):
            if p[h, 0, j] != (1 if h == j else 0):
                raise SchemeValidationError(
                    "identity_relation", (h, 0, j), "p^h_0j must be the Kronecker delta"
                )
    for i in range(dp1):
        for j in range(dp1):
            if p[0, i, j] != (k[i] if i == j else 0):
                raise SchemeValidationError(
                    "diagonal_counts", (0, i, j), "p^0_ij must be delta_ij k_i"
                )
    if not np.array_equal(p, p.transpose(0, 2, 1)):
        h, i, j = np.argwhere(p != p.transpose(0, 2, 1))[0]
        raise SchemeValidationError(
            "commutativity", (int(h), int(i), int(j)), "p^h_ij != p^h_ji"
        )
    sums = p.sum(axis=2)  # sum_j p^h_ij must equal k_i for every h
    expected = np.broadcast_to(k, (dp1, dp1))
    if not np.array_equal(sums, expected):
        h, i = np.argwhere(sums != expected)[0]
        raise SchemeValidationError(
            "row_sums", (int(h), int(i)), f"sum_j p^h_ij = {int(sums[h, i])}, expected k_i = {int(k[i])}"
        )
    lhs = k.reshape(dp1, 1, 1) * p
    rhs = lhs.transpose(2, 1, 0)  # k_j p^j_ih indexed by (h, i, j)
    if not np.array_equal(lhs, rhs):
        h, i, j = np.argwhere(lhs != rhs)[0]
        raise SchemeValidationError(
            "valency_balance", (int(h), int(i), int(j)), "k_h p^h_ij != k_j p^j_ih"
        )


def scheme_from_relations(mats) -> AssociationScheme:
    """Build and validate a scheme from explicit 0/1 relation matrices."""
    mats = [np.asarray(m) for m in mats]
    if not mats:
        raise SchemeValidationError("partition", (), "need at least one relation")
    size = mats[0].shape[0]
    cleaned = []
    for i, m in enumerate(mats):
        if m.shape != (size, size):
            raise SchemeValidationError("shape", i, f"relation {i} has shape {m.shape}")
        mi = np.rint(np.asarray(m, dtype=float)).astype(np.int8)
        if not np.array_equal(np.asarray(m, dtype=float), mi) or np.any((mi != 0) & (mi != 1)):
            raise SchemeValidationError("binary", i, f"relation {i} has entries outside {{0, 1}}")
        cleaned.append(mi)
    if not np.array_equal(cleaned[0], np.eye(size, dtype=np.int8)):
        raise SchemeValidationError("identity_relation", 0, "relation 0 must be the identity")
    total = np.zeros((size, size), dtype=np.int64)
    for m in cleaned:
        total += m
    if not np.all(total == 1):
        x, y = np.argwhere(total != 1)[0]
        raise SchemeValidationError(
            "partition", (int(x), int(y)), f"pair covered {int(total[x, y])} times"
        )
    for i, m in enumerate(cleaned):
        if not np.array_equal(m, m.T):
            x, y = np.argwhere(m != m.T)[0]
            raise SchemeValidationError("symmetry", (i, int(x), int(y)), "relation not symmetric")
        if not np.any(m):
            raise SchemeValidationError("nonempty", i, "relation is empty")

    p = _relations_p_tensor(cleaned, size)
    k = np.array([int(p[0, i, i]) for i in range(len(cleaned))], dtype=np.int64)
    _validate_p_tensor(p, k, size)
    return AssociationScheme(
        size=size, d=len(cleaned) - 1, k=k, p=p, relations=tuple(cleaned)
    )


def scheme_from_p_tensor(p, k) -> AssociationScheme:
    """Build and validate a scheme from its intersection tensor and valencies."""
    p = np.asarray(p)
    pi = np.rint(np.asarray(p, dtype=float)).astype(np.int64)
    if p.ndim != 3 or not np.array_equal(np.asarray(p, dtype=float), pi):
        raise SchemeValidationError("tensor_shape", np.shape(p), "expected an integer cubic tensor")
    k = np.rint(np.asarray(k, dtype=float)).astype(np.int64)
    size = int(np.sum(k))
    _validate_p_tensor(pi, k, size)
    return AssociationScheme(size=size, d=pi.shape[0] - 1, k=k, p=pi, relations=None)


def builtin_scheme(name: str, n: int) -> AssociationScheme:
    """Built-in families: hypercube(n) (binary Hamming) and complete(n).

    The hypercube scheme lives on {0, 1}^n with relations by Hamming
    distance; complete(n) is the 1-class scheme on n points.  Sizes are
    capped at 4096 vertices.
    """
    if name == "hypercube":
        if n < 1 or 2**n > BUILTIN_SIZE_CAP:
            raise ValueError(f"hypercube size 2^{n} outside 2..{BUILTIN_SIZE_CAP}")
        verts = np.arange(2**n, dtype=np.uint32)
        dist = np.bitwise_count(verts[:, None] ^ verts[None, :])
        mats = [(dist == r).astype(np.int8) for r in range(n + 1)]
        return scheme_from_relations(mats)
    if name == "complete":
        if n < 2 or n > BUILTIN_SIZE_CAP:
            raise ValueError(f"complete scheme size {n} outside 2..{BUILTIN_SIZE_CAP}")
        eye = np.eye(n, dtype=np.int8)
        return scheme_from_relations([eye, np.ones((n, n), dtype=np.int8) - eye])
    raise ValueError(f"unknown builtin scheme {name!r}; expected 'hypercube' or 'complete'")


def intersection_matrix(scheme: AssociationScheme, i: int) -> np.ndarray:
    """B_i with (h, j) entry p^h_ij, as a float matrix."""
    if not (0 <= i <= scheme.d):
        raise ValueError(f"relation index {i} outside 0..{scheme.d}")
    return scheme.p[:, i, :].astype(float)


def krein_parameters(P, Q, size: int, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Krein tensor q[h, i, j] from the eigenmatrices.

    For each pair (i, j) the vector (q^h_ij)_h solves Q v = w with
    w_k = Q_ki Q_kj, which is the entrywise-product expansion of the
    projectors in the 0/1 basis.
    """
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    dp1 = P.shape[0]
    W = np.empty((dp1, dp1 * dp1))
    for i in range(dp1):
        for j in range(dp1):
            W[:, i * dp1 + j] = Q[:, i] * Q[:, j]
    V = solve(Q, W, tol)
    q = np.empty((dp1, dp1, dp1))
    for i in range(dp1):
        for j in range(dp1):
            q[:, i, j] = V[:, i * dp1 + j]
    return q


@dataclass(frozen=True)
class SchemeEigendata:
    """Eigenmatrices and Krein parameters of a scheme.

    P rows follow a fixed convention: row 0 is the valency row, the rest
    sort descending by their column-1 entry (then lexicographically).
    `residuals` records the worst violation observed for each verified
    identity.
    """

    scheme: AssociationScheme
    P: np.ndarray
    Q: np.ndarray
    m: np.ndarray
    q: np.ndarray
    seed: object
    residuals: dict = field(compare=False)

    @property
    def d(self) -> int:
        return self.scheme.d

    @property
    def size(self) -> int:
        return self.scheme.size

    @property
    def k(self) -> np.ndarray:
        return self.scheme.k


def eigendata(scheme: AssociationScheme, tol: Tolerance = DEFAULT_TOL, seed=0) -> SchemeEigendata:
    """Compute P, Q, multiplicities and Krein parameters.

    A seeded random positive combination of the intersection matrices is
    symmetrized (its symmetrizer weights are exactly the valencies) and
    diagonalized; left eigenvectors normalized at column 0 are the rows of
    P.  Colliding combination eigenvalues trigger a retry with a derived
    seed, up to five attempts.
    """
    dp1 = scheme.d + 1
    B = [intersection_matrix(scheme, i) for i in range(dp1)]
    base_seed = abs(int(seed)) if seed is not None else 0
    last_gap = None
    for attempt in range(5):
        rng = np.random.default_rng([base_seed, attempt])
        coeffs = rng.uniform(1.0, 2.0, size=dp1)
        C = sum(c * Bi for c, Bi in zip(coeffs, B))
        sym = find_symmetrizer(C, tol)
        if not isinstance(sym, Symmetrizer):
            raise SchemeValidationError(
                "symmetrizable", sym.witness, "intersection matrices are not symmetrizable"
            )
        S = sym.conjugate(C)
        w, V = sym_eigen(0.5 * (S + S.T), tol)
        if dp1 > 1:
            gap = float(np.min(w[:-1] - w[1:]))
            last_gap = gap
            if gap <= tol.eig_tol * max(1.0, float(np.max(np.abs(C)))):
                continue
        U = sym.delta[:, None] * V  # columns are left eigenvectors of C, transposed
        if float(np.min(np.abs(U[0, :]))) < 1e-12:
            continue
        rows = (U / U[0, :]).T
        # eigenvalue of the positive combination is maximal exactly on the
        # valency row, so the descending sort puts it first
        P = np.vstack(
            [rows[0]]
            + sorted(
                (rows[i] for i in range(1, dp1)),
                key=lambda r: tuple(np.round(r[1:], 9)) if dp1 > 1 else (),
                reverse=True,
            )
        )
        Q = solve(P, scheme.size * np.eye(dp1), tol)
        m = Q[0, :].copy()
        q = krein_parameters(P, Q, scheme.size, tol)
        residuals = _verify_eigendata(scheme, P, Q, m, q, tol)
        return SchemeEigendata(
            scheme=scheme, P=P, Q=Q, m=m, q=q, seed=seed, residuals=residuals
        )
    raise EigenvalueCollisionError(
        f"five random combinations produced colliding eigenvalues (last gap {last_gap:.3e})"
    )


def _verify_eigendata(scheme, P, Q, m, q, tol: Tolerance) -> dict:
    dp1 = scheme.d + 1
    size = scheme.size
    scale = max(1.0, float(size))
    checks = {}

    checks["valency_row"] = float(np.max(np.abs(P[0, :] - scheme.k)))
    checks["P_column0"] = float(np.max(np.abs(P[:, 0] - 1.0)))
    checks["Q_column0"] = float(np.max(np.abs(Q[:, 0] - 1.0)))
    checks["PQ_identity"] = float(np.max(np.abs(P @ Q - size * np.eye(dp1))))
    checks["QP_identity"] = float(np.max(np.abs(Q @ P - size * np.eye(dp1))))
    checks["multiplicity_sum"] = abs(float(np.sum(m)) - size)
    checks["krein_symmetry"] = float(np.max(np.abs(q - q.transpose(0, 2, 1))))
    # E_i o E_0 = E_i / |X| gives q^h_i0 = delta_hi; summing the entries of
    # E_i o E_j gives q^0_ij = delta_ij m_i
    checks["krein_identity_column"] = float(np.max(np.abs(q[:, :, 0] - np.eye(dp1))))
    checks["krein_top_slice"] = float(np.max(np.abs(q[0, :, :] - np.diag(m))))
    weighted = m.reshape(dp1, 1, 1) * q  # m_h q^h_ij symmetric under the (h, j) swap
    checks["krein_balance"] = float(np.max(np.abs(weighted - weighted.transpose(2, 1, 0))))
    checks["krein_min"] = -min(0.0, float(np.min(q)))

    bound = tol.residual_tol * scale
    for name in (
        "valency_row",
        "P_column0",
        "Q_column0",
        "PQ_identity",
        "QP_identity",
        "multiplicity_sum",
    ):
        if checks[name] > bound:
            raise SchemeValidationError(name, checks[name], f"residual exceeds {bound:.3e}")
    kre_scale = tol.residual_tol * max(1.0, float(np.max(np.abs(q)))) * scale
    for name in (
        "krein_symmetry",
        "krein_identity_column",
        "krein_top_slice",
        "krein_balance",
        "krein_min",
    ):
        if checks[name] > kre_scale:
            raise SchemeValidationError(name, checks[name], f"residual exceeds {kre_scale:.3e}")
    if np.any(m <= 0.0):
        raise SchemeValidationError("multiplicities", tuple(m.tolist()), "must be positive")
    return checks


def krein_matrix(ed: SchemeEigendata, i: int) -> np.ndarray:
    """Dual intersection matrix with (h, j) entry q^h_ij."""
    if not (0 <= i <= ed.d):
        raise ValueError(f"index {i} outside 0..{ed.d}")
    return ed.q[:, i, :].copy()


def rho_idempotent(ed: SchemeEigendata, i: int) -> np.ndarray:
    """Image of the i-th projector in the intersection-matrix representation.

    Rank one: |X|^{-1} times the outer product of column i of Q with row i
    of P.
    """
    if not (0 <= i <= ed.d):
        raise ValueError(f"index {i} outside 0..{ed.d}")
    return np.outer(ed.Q[:, i], ed.P[i, :]) / ed.size


def _polynomial_orderings(matrices, tol: Tolerance):
    """Shared path-shape scan behind both detection routines."""
    found = []
    d = len(matrices) - 1
    for i in range(1, d + 1):
        G = gamma(matrices[i], tol)
        order = bidirected_path_endpoints(G)
        if order is None:
            continue
        if order[0] == 0:
            path = order
        elif order[-1] == 0:
            path = tuple(reversed(order))
        else:
            continue  # index 0 must be an endpoint of a generating ordering
        if d >= 1 and path[1] != i:
            raise RuntimeError(
                f"ordering for generator {i} starts 0 -> {path[1]}; structural invariant broken"
            )
        found.append(PolyStructure(generator=i, ordering=path, last=path[-1]))
    return tuple(found)


def detect_p_polynomial(scheme: AssociationScheme, tol: Tolerance = DEFAULT_TOL):
    """All relation orderings under which the scheme is P-polynomial.

    A generator relation index i qualifies when the graph of B_i is a
    bidirected path; the ordering starts at 0 and its second entry is
    always i.
    """
    mats = [intersection_matrix(scheme, i) for i in range(scheme.d + 1)]
    return _polynomial_orderings(mats, tol)


def detect_q_polynomial(ed: SchemeEigendata, tol: Tolerance = DEFAULT_TOL):
    """All projector orderings under which the scheme is Q-polynomial."""
    mats = [krein_matrix(ed, i) for i in range(ed.d + 1)]
    return _polynomial_orderings(mats, tol)


@dataclass(frozen=True)
class SchemeCharacterizationReport:
    """Two-sided endpoint check for a polynomial structure.

    side_i: a detected structure with the requested generator ends at the
    requested last index.  side_ii: the generator's eigenvalue column is
    multiplicity-free and the last index's dual column equals the
    gap-product ratios f_0(theta_0)/f_i(theta_i).  `equivalent` is derived.
    """

    kind: str
    generator: int
    last: int
    side_i: bool
    side_ii: bool
    theta: np.ndarray
    expected: np.ndarray | None
    actual: np.ndarray
    max_deviation: float | None
    structures: tuple

    @property
    def equivalent(self) -> bool:
        return self.side_i == self.side_ii

    @property
    def both_true(self) -> bool:
        return self.side_i and self.side_ii


def _endpoint_check(kind, structures, theta, actual, b, c, d, tol: Tolerance):
    if not (1 <= b <= d and 1 <= c <= d):
        raise ValueError(f"indices ({b}, {c}) outside 1..{d}")
    side_i = any(st.generator == b and st.last == c for st in structures)

    distinct = True
    for i in range(d + 1):
        for j in range(i + 1, d + 1):
            if abs(theta[i] - theta[j]) <= tol.eig_tol:
                distinct = False
    expected = None
    max_dev = None
    side_ii = False
    if distinct:
        f0 = gap_product(theta, 0)
        expected = np.array([f0 / gap_product(theta, i) for i in range(d + 1)])
        max_dev = float(np.max(np.abs(actual - expected)))
        bound = tol.residual_tol * max(1.0, float(np.max(np.abs(expected))))
        side_ii = max_dev <= bound
    return SchemeCharacterizationReport(
        kind=kind,
        generator=b,
        last=c,
        side_i=side_i,
        side_ii=side_ii,
        theta=np.asarray(theta, dtype=float),
        expected=expected,
        actual=np.asarray(actual, dtype=float),
        max_deviation=max_dev,
        structures=structures,
    )


def check_p_polynomial_characterization(
    ed: SchemeEigendata, b: int, c: int, tol: Tolerance = DEFAULT_TOL
) -> SchemeCharacterizationReport:
    """P-polynomial with generator b ending at c vs dual-eigenvalue ratios.

    side_ii compares row c of Q against f_0(theta_0)/f_i(theta_i) built
    from the eigenvalue column theta_i = P[i, b].
    """
    if not (1 <= b <= ed.d and 1 <= c <= ed.d):
        raise ValueError(f"indices ({b}, {c}) outside 1..{ed.d}")
    structures = detect_p_polynomial(ed.scheme, tol)
    theta = ed.P[:, b].copy()
    actual = ed.Q[c, :].copy()
    return _endpoint_check("p", structures, theta, actual, b, c, ed.d, tol)


def check_q_polynomial_characterization(
    ed: SchemeEigendata, e: int, f: int, tol: Tolerance = DEFAULT_TOL
) -> SchemeCharacterizationReport:
    """Q-polynomial with generator e ending at f vs eigenvalue ratios.

    Dual statement: theta*_i = Q[i, e] and row f of P against the same
    gap-product form.
    """
    if not (1 <= e <= ed.d and 1 <= f <= ed.d):
        raise ValueError(f"indices ({e}, {f}) outside 1..{ed.d}")
    structures = detect_q_polynomial(ed, tol)
    theta = ed.Q[:, e].copy()
    actual = ed.P[f, :].copy()
    return _endpoint_check("q", structures, theta, actual, e, f, ed.d, tol)


_HEADER_RE = re.compile(r"^SCHEME\s+X=(\d+)\s+D=(\d+)\s+FORM=(RELATIONS|PTENSOR)$")


def read_scheme(source) -> AssociationScheme:
    """Parse a scheme from its text format.

    Header `SCHEME X=<size> D=<d> FORM=<RELATIONS|PTENSOR>`, then either
    d+1 `REL <i>` blocks of |X| rows of 0/1 characters, or a `K` valency
    line plus d+1 `P <h>` blocks of (d+1)x(d+1) integers.  '#' lines are
    comments.  The result is fully validated.
    """
    if hasattr(source, "read"):
        raw = source.read().splitlines()
    else:
        text = str(source)
        if "\n" in text:
            raw = text.splitlines()
        else:
            with open(text, "r", encoding="utf-8") as fh:
                raw = fh.read().splitlines()
    content = [
        (idx + 1, line.strip())
        for idx, line in enumerate(raw)
        if line.strip() and not line.strip().startswith("#")
    ]
    if not content:
        raise SchemeParseError(1, "no content lines found")

    lineno, head = content[0]
    match = _HEADER_RE.match(head)
    if not match:
        raise SchemeParseError(lineno, f"bad header {head!r}")
    size, d, form = int(match.group(1)), int(match.group(2)), match.group(3)
    body = content[1:]
    pos = 0

    def take():
        nonlocal pos
        if pos >= len(body):
            raise SchemeParseError(content[-1][0], "unexpected end of file")
        item = body[pos]
        pos += 1
        return item

    if form == "RELATIONS":
        mats = []
        for i in range(d + 1):
            lineno, line = take()
            if line != f"REL {i}":
                raise SchemeParseError(lineno, f"expected 'REL {i}', got {line!r}")
            rows = []
            for _ in range(size):
                lineno, line = take()
                if len(line) != size or set(line) - {"0", "1"}:
                    raise SchemeParseError(lineno, f"expected {size} characters of 0/1")
                rows.append([int(ch) for ch in line])
            mats.append(np.array(rows, dtype=np.int8))
        if pos != len(body):
            raise SchemeParseError(body[pos][0], "unexpected trailing content")
        scheme = scheme_from_relations(mats)
    else:
        lineno, line = take()
        parts = line.split()
        if parts[:1] != ["K"] or len(parts) != d + 2:
            raise SchemeParseError(lineno, f"expected 'K' line with {d + 1} valencies")
        try:
            k = np.array([int(x) for x in parts[1:]], dtype=np.int64)
        except ValueError:
            raise SchemeParseError(lineno, "non-integer valency") from None
        p = np.zeros((d + 1, d + 1, d + 1), dtype=np.int64)
        for h in range(d + 1):
            lineno, line = take()
            if line != f"P {h}":
                raise SchemeParseError(lineno, f"expected 'P {h}', got {line!r}")
            for i in range(d + 1):
                lineno, line = take()
                parts = line.split()
                if len(parts) != d + 1:
                    raise SchemeParseError(lineno, f"expected {d + 1} integers")
                try:
                    p[h, i, :] = [int(x) for x in parts]
                except ValueError:
                    raise SchemeParseError(lineno, "non-integer intersection number") from None
        if pos != len(body):
            raise SchemeParseError(body[pos][0], "unexpected trailing content")
        scheme = scheme_from_p_tensor(p, k)
    if scheme.size != size or scheme.d != d:
        raise SchemeParseError(
            content[0][0],
            f"header says X={size} D={d}, content gives X={scheme.size} D={scheme.d}",
        )
    return scheme


def write_scheme(scheme: AssociationScheme, target=None) -> str:
    """Serialize a scheme; relations form when relations are stored."""
    lines = []
    form = "RELATIONS" if scheme.relations is not None else "PTENSOR"
    lines.append(f"SCHEME X={scheme.size} D={scheme.d} FORM={form}")
    if scheme.relations is not None:
        for i, m in enumerate(scheme.relations):
            lines.append(f"REL {i}")
            for row in m:
                lines.append("".join(str(int(x)) for x in row))
    else:
        lines.append("K " + " ".join(str(int(x)) for x in scheme.k))
        for h in range(scheme.d + 1):
            lines.append(f"P {h}")
            for i in range(scheme.d + 1):
                lines.append(" ".join(str(int(x)) for x in scheme.p[h, i, :]))
    text = "\n".join(lines) + "\n"
    if target is not None:
        if hasattr(target, "write"):
            target.write(text)
        else:
            with open(target, "w", encoding="utf-8") as fh:
                fh.write(text)
    return text
