"""Characters, spectrum classes and the Gelfand transform.

A character maps a graded algebra onto the rank-one model, commutes with the
fundamental symmetries and preserves the grading.  Characters come in pairs
{w, gamma.w}; each pair holds exactly one representative fixed by the odd
symmetries on both sides, and the set of pairs is coordinatized by the
C*-characters of the even part.  The Gelfand transform evaluates the even
representative of every class and lands in the function algebra over the
class set; for commutative, imprimitive instances with an odd generator it
is an isometric *-isomorphism.

Even characters are found numerically: a random self-adjoint combination of
an even-part basis is diagonalized, eigenvectors are clustered into joint
eigenspaces, and every basis element is read off as a scalar per cluster.
Ambiguous clusterings are retried with fresh coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .kalgebra import KElem
from .finite_krein import (
    CheckResult,
    GradedElement,
    KreinAlgebra,
    build_function_algebra,
    check_commutative_symmetric,
    check_full,
    check_odd_symmetry,
)

__all__ = [
    "NotCommutativeError",
    "ClusteringAmbiguityError",
    "MissingOddGeneratorError",
    "SpectralHypothesisError",
    "EvenCharacter",
    "Character",
    "SpectrumClass",
    "even_characters",
    "extend_character",
    "spectrum_classes",
    "gelfand",
    "gelfand_matrix",
    "character_residuals",
    "evenness_residual",
    "character_kernel_ideal",
    "verify_spectral_theorem",
    "kernel_lemma_checks",
    "SpectralReport",
]

CHARACTER_TOL = 1e-8


class NotCommutativeError(ValueError):
    """Characters are only computed for commutative even parts."""


class ClusteringAmbiguityError(RuntimeError):
    """Joint eigenspace clustering stayed ambiguous after all retries."""


class MissingOddGeneratorError(ValueError):
    """Extending an even character needs the algebra's odd generator."""


class SpectralHypothesisError(RuntimeError):
    """A spectral-theorem hypothesis failed; ``hypothesis`` names it."""

    def __init__(self, message: str, hypothesis: str):
        super().__init__(message)
        self.hypothesis = hypothesis


@dataclass(frozen=True, eq=False)
class EvenCharacter:
    """C*-character of the even part, stored on the even coordinate basis."""

    algebra: KreinAlgebra
    values: np.ndarray  # value on column j of algebra.even_basis

    def eval_coords(self, coords) -> complex:
        """Value on an element of the even part, given full coordinates."""
        c = self.algebra.even_basis.conj().T @ np.asarray(coords, dtype=complex)
        return complex(self.values @ c)

    def sort_key(self) -> tuple:
        key = []
        for v in np.round(self.values, 9):
            key.extend((float(v.real) + 0.0, float(v.imag) + 0.0))
        return tuple(key)


class _Ambiguous(Exception):
    pass


def _cluster_indices(eigvals: np.ndarray, ctol: float) -> list[np.ndarray]:
    """Group sorted eigenvalues into runs separated by gaps larger than ctol."""
    order = np.argsort(eigvals)
    groups: list[list[int]] = [[order[0]]]
    for prev, cur in zip(order, order[1:]):
        if eigvals[cur] - eigvals[groups[-1][0]] <= ctol and eigvals[cur] - eigvals[prev] <= ctol:
            groups[-1].append(cur)
        else:
            groups.append([cur])
    return [np.array(g) for g in groups]


def even_characters(
    algebra: KreinAlgebra,
    seed: int = 7,
    tol: float = CHARACTER_TOL,
    retries: int = 5,
) -> list[EvenCharacter]:
    """All characters of the (commutative) even part, one per joint eigenspace.

    Diagonalizes a random self-adjoint combination of the even basis,
    clusters eigenvectors at tolerance ``tol`` relative to the spectrum
    spread, and reads each even basis element off as a scalar per cluster.
    Clusters on which some element is not scalar, or that produce duplicate
    value tuples, trigger a retry with fresh random coefficients; after
    ``retries`` failures a ClusteringAmbiguityError is raised.  The result is
    sorted lexicographically by value tuple and its length always equals the
    even dimension.
    """
    eb = algebra.even_basis
    m = eb.shape[1]
    emats = algebra.even_basis_matrices()

    comm = 0.0
    for i in range(m):
        for j in range(i + 1, m):
            c = emats[i] @ emats[j] - emats[j] @ emats[i]
            comm = max(comm, float(np.linalg.norm(c, 2)))
    scale = max(1.0, float(max(np.linalg.norm(M, 2) for M in emats)) ** 2)
    if comm > tol * scale:
        raise NotCommutativeError(
            f"even part is not commutative (residual {comm:.3e})"
        )

    unit_mat = algebra.materialize(algebra.unit_coords)
    herms = np.concatenate(
        [
            (emats + emats.conj().transpose(0, 2, 1)) / 2.0,
            (emats - emats.conj().transpose(0, 2, 1)) / 2.0j,
        ]
    )
    rng = np.random.default_rng(seed)
    reason = "no attempt made"
    for _ in range(max(1, retries)):
        coeffs = rng.standard_normal(herms.shape[0])
        S = np.einsum("i,iab->ab", coeffs, herms)
        S = (S + S.conj().T) / 2.0
        eigvals, eigvecs = np.linalg.eigh(S)
        spread = float(eigvals[-1] - eigvals[0])
        ctol = tol * max(1.0, spread)
        try:
            value_rows = []
            for idx in _cluster_indices(eigvals, ctol):
                V = eigvecs[:, idx]
                k = len(idx)
                unit_block = V.conj().T @ unit_mat @ V
                uval = complex(np.trace(unit_block)) / k
                if np.linalg.norm(unit_block - uval * np.eye(k), 2) > tol * max(1.0, abs(uval)):
                    raise _Ambiguous("unit is not scalar on a cluster")
                if abs(uval) < 0.5:
                    continue  # null space of the representation, not a character
                if abs(uval - 1.0) > 100 * tol:
                    raise _Ambiguous("cluster mixes the unit eigenvalues")
                vals = np.empty(m, dtype=complex)
                for j, F in enumerate(emats):
                    block = V.conj().T @ F @ V
                    val = complex(np.trace(block)) / k
                    if np.linalg.norm(block - val * np.eye(k), 2) > tol * max(
                        1.0, float(np.linalg.norm(F, 2))
                    ):
                        raise _Ambiguous("an even basis element is not scalar on a cluster")
                    vals[j] = val
                value_rows.append(vals)
            for i in range(len(value_rows)):
                for j in range(i + 1, len(value_rows)):
                    if np.max(np.abs(value_rows[i] - value_rows[j])) <= 10 * tol:
                        raise _Ambiguous("two clusters produced the same character")
            if len(value_rows) != m:
                raise _Ambiguous(
                    f"found {len(value_rows)} characters, even dimension is {m}"
                )
        except _Ambiguous as exc:
            reason = str(exc)
            continue
        chars = [EvenCharacter(algebra, v) for v in value_rows]
        chars.sort(key=EvenCharacter.sort_key)
        return chars
    raise ClusteringAmbiguityError(reason)


@dataclass(frozen=True, eq=False)
class Character:
    """Character into the rank-one algebra, stored by value on each basis element."""

    algebra: KreinAlgebra
    a_values: np.ndarray
    b_values: np.ndarray

    def on_basis(self, i: int) -> KElem:
        return KElem(self.a_values[i], self.b_values[i])

    def __call__(self, x) -> KElem:
        coords = x.coords if isinstance(x, GradedElement) else np.asarray(x, dtype=complex)
        return KElem(complex(self.a_values @ coords), complex(self.b_values @ coords))

    def gamma_composed(self) -> "Character":
        return Character(self.algebra, self.a_values, -self.b_values)

    def functional_matrix(self) -> np.ndarray:
        return np.vstack([self.a_values, self.b_values])

    def kernel_basis(self, tol: float = CHARACTER_TOL) -> np.ndarray:
        """Orthonormal columns spanning {x : w(x) = 0}."""
        W = self.functional_matrix()
        _, s, vh = np.linalg.svd(W)
        rank = int(np.sum(s > tol * s[0])) if s.size and s[0] > 0 else 0
        return vh[rank:].conj().T

    def to_json_list(self) -> list:
        return [self.on_basis(i).to_json_dict() for i in range(self.algebra.dim)]


def extend_character(algebra: KreinAlgebra, omega: EvenCharacter) -> Character:
    """Even-symmetry-invariant character extending an even-part character.

    The odd part is reached through the odd generator: the value on x is the
    even-part value on the even component plus the swapped value on e times
    the odd component.
    """
    if algebra.odd_generator_coords is None:
        raise MissingOddGeneratorError(
            "algebra has no odd generator; even characters cannot be extended"
        )
    d = algebra.dim
    e = algebra.odd_generator_coords
    eye = np.eye(d)
    a_vals = np.empty(d, dtype=complex)
    b_vals = np.empty(d, dtype=complex)
    for i in range(d):
        ev = algebra.even_projection(eye[:, i])
        od = algebra.odd_projection(eye[:, i])
        a_vals[i] = omega.eval_coords(ev)
        b_vals[i] = omega.eval_coords(algebra.mul_coords(e, od))
    return Character(algebra, a_vals, b_vals)


def character_residuals(w: Character) -> dict[str, float]:
    """Named residuals of the character axioms, all relative."""
    alg = w.algebra
    a, b = w.a_values, w.b_values
    s = alg.structure
    prod_a = np.einsum("ijk,k->ij", s, a)
    prod_b = np.einsum("ijk,k->ij", s, b)
    exp_a = np.multiply.outer(a, a) + np.multiply.outer(b, b)
    exp_b = np.multiply.outer(a, b) + np.multiply.outer(b, a)
    scale = max(1.0, float(np.max(np.abs(a)) + np.max(np.abs(b)))) ** 2
    out = {
        "multiplicative": float(
            max(np.max(np.abs(prod_a - exp_a)), np.max(np.abs(prod_b - exp_b)))
        )
        / scale,
        "unital": float(
            max(abs(a @ alg.unit_coords - 1.0), abs(b @ alg.unit_coords))
        ),
        "star": float(
            max(
                np.max(np.abs(a @ alg.star_coord - a.conj())),
                np.max(np.abs(b @ alg.star_coord + b.conj())),
            )
        ),
        "alpha_equivariance": float(
            max(
                np.max(np.abs(a @ alg.alpha_coord - a)),
                np.max(np.abs(b @ alg.alpha_coord + b)),
            )
        ),
        "grading_preserving": float(
            max(
                np.max(np.abs(b @ alg.even_basis)) if alg.even_basis.size else 0.0,
                np.max(np.abs(a @ alg.odd_basis)) if alg.odd_basis.size else 0.0,
            )
        ),
    }
    return out


def evenness_residual(w: Character) -> float:
    """Residual of invariance under the odd symmetries on both sides.

    Zero (numerically) exactly for the even representative of a class;
    composing with gamma flips the sign, so the partner always fails.
    """
    alg = w.algebra
    if alg.odd_generator_coords is None:
        raise MissingOddGeneratorError("algebra has no odd generator")
    e = alg.odd_generator_coords
    eps_mat = np.einsum("i,ijk->kj", e, alg.structure)  # column j: coords of e B_j
    a, b = w.a_values, w.b_values
    return float(
        max(np.max(np.abs(b @ eps_mat - a)), np.max(np.abs(a @ eps_mat - b)))
    )


@dataclass(frozen=True, eq=False)
class SpectrumClass:
    """Pair {w, gamma.w} of characters, keyed by its even representative."""

    even_rep: Character
    partner: Character


def spectrum_classes(
    algebra: KreinAlgebra, seed: int = 7, tol: float = CHARACTER_TOL
) -> list[SpectrumClass]:
    """All character classes, ordered by the even-part value tuples."""
    omegas = even_characters(algebra, seed=seed, tol=tol)
    classes = []
    for om in omegas:
        w = extend_character(algebra, om)
        classes.append(SpectrumClass(even_rep=w, partner=w.gamma_composed()))
    return classes


def gelfand_matrix(classes: list[SpectrumClass]) -> np.ndarray:
    """Transform as a matrix into function-algebra coordinates.

    Row 2c is the even-value functional of class c, row 2c+1 the odd-value
    functional, matching the (even, odd) per-point basis ordering of
    ``build_function_algebra``.
    """
    rows = []
    for cls in classes:
        rows.append(cls.even_rep.a_values)
        rows.append(cls.even_rep.b_values)
    return np.array(rows)


def gelfand(algebra: KreinAlgebra, x, classes: list[SpectrumClass] | None = None) -> list[KElem]:
    """Gelfand transform of x: its value at every spectrum class."""
    if classes is None:
        classes = spectrum_classes(algebra)
    el = x if isinstance(x, GradedElement) else GradedElement(algebra, x)
    return [cls.even_rep(el) for cls in classes]


def character_kernel_ideal(
    algebra: KreinAlgebra, omega: EvenCharacter, tol: float = CHARACTER_TOL
) -> list[GradedElement]:
    """Alpha-invariant ideal attached to an even character.

    Even component: the kernel of omega inside the even part.  Odd
    component: the odd part times that kernel.  Quotienting by it leaves a
    rank-one algebra.
    """
    eb = algebra.even_basis
    m = eb.shape[1]
    vals = np.asarray(omega.values, dtype=complex).reshape(1, m)
    _, s, vh = np.linalg.svd(vals)
    rank = int(np.sum(s > tol * s[0])) if s[0] > 0 else 0
    ker_cols = vh[rank:].conj().T  # (m, m - rank)
    even_kernel = eb @ ker_cols  # (d, m - rank) coordinates in the full algebra
    ob = algebra.odd_basis
    members = [even_kernel.T]
    if ob.shape[1] and even_kernel.shape[1]:
        prods = np.einsum(
            "ix,ja,ijk->xak", ob, even_kernel, algebra.structure
        ).reshape(-1, algebra.dim)
        members.append(prods)
    stacked = np.concatenate(members, axis=0)
    _, s2, vh2 = np.linalg.svd(stacked)
    keep = s2 > tol * s2[0] if s2.size and s2[0] > 0 else np.zeros(0, bool)
    return [GradedElement(algebra, row) for row in vh2[: int(np.sum(keep))]]


@dataclass
class SpectralReport:
    """Outcome of the spectral-theorem verification."""

    checks: list[CheckResult]
    spectrum_size: int
    classes: list[SpectrumClass]
    transform_rank: int
    condition_number: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "checks": [c.to_dict() for c in self.checks],
            "spectrum_size": int(self.spectrum_size),
            "transform_rank": int(self.transform_rank),
            "condition_number": float(self.condition_number),
            "passed": bool(self.passed),
            "characters": [
                {
                    "even": cls.even_rep.to_json_list(),
                    "partner": cls.partner.to_json_list(),
                }
                for cls in self.classes
            ],
        }


def verify_spectral_theorem(
    algebra: KreinAlgebra,
    samples: int = 100,
    seed: int = 42,
    tol: float = 1e-9,
) -> SpectralReport:
    """Check that the Gelfand transform is an isometric *-isomorphism.

    Raises SpectralHypothesisError (naming the hypothesis) unless the
    algebra is commutative with symmetric odd bimodule, the odd part is
    full, and a valid odd generator is present.  Then verifies, on random
    samples: the homomorphism and star properties, unitality, isometry, the
    intertwining of both symmetries with their pointwise counterparts, and
    injectivity/surjectivity through the rank and conditioning of the
    transform matrix.
    """
    cs = check_commutative_symmetric(algebra, tol=max(tol, algebra.tol))
    if not cs.commutative or not cs.symmetric_bimodule:
        raise SpectralHypothesisError(
            "algebra is not commutative with symmetric odd bimodule",
            hypothesis="commutative",
        )
    if not check_full(algebra, tol=max(tol, algebra.tol)):
        raise SpectralHypothesisError("odd part not full", hypothesis="full")
    ov = check_odd_symmetry(algebra, tol=max(tol, algebra.tol))
    if ov.exists is not True:
        raise SpectralHypothesisError(
            "no valid odd symmetry (odd generator absent or defective)",
            hypothesis="odd symmetry",
        )

    ctol = max(tol, CHARACTER_TOL)
    classes = spectrum_classes(algebra, seed=seed, tol=ctol)
    N = len(classes)
    d = algebra.dim
    target = build_function_algebra(N)
    T = gelfand_matrix(classes)

    checks: list[CheckResult] = []
    checks.append(
        CheckResult(
            "spectrum_size",
            N == algebra.even_basis.shape[1],
            float(abs(N - algebra.even_basis.shape[1])),
        )
    )

    sv = np.linalg.svd(T, compute_uv=False)
    rank = int(np.sum(sv > max(tol, 1e-12) * sv[0])) if sv.size and sv[0] > 0 else 0
    cond = float(sv[0] / sv[-1]) if sv.size and sv[-1] > 0 else float("inf")
    checks.append(CheckResult("surjectivity_rank", rank == 2 * N, float(2 * N - rank)))
    checks.append(
        CheckResult(
            "injectivity_conditioning",
            rank == d and np.isfinite(cond),
            0.0 if rank == d else float(d - rank),
            detail=f"condition number {cond:.6e}",
        )
    )

    rng = np.random.default_rng(seed)
    xs = [algebra.random_element(rng) for _ in range(samples)]
    ys = [algebra.random_element(rng) for _ in range(samples)]
    e = algebra.odd_generator_coords
    e_t = target.odd_generator_coords

    r_mul = r_star = r_alpha = r_eps = r_iso = r_round = 0.0
    Tinv = np.linalg.pinv(T) if rank == d else None
    for x, y in zip(xs, ys):
        tx, ty = T @ x.coords, T @ y.coords
        scale = max(1.0, float(np.linalg.norm(tx) * np.linalg.norm(ty)))
        r_mul = max(
            r_mul,
            float(
                np.linalg.norm(
                    T @ algebra.mul_coords(x.coords, y.coords)
                    - target.mul_coords(tx, ty)
                )
            )
            / scale,
        )
        xscale = max(1.0, float(np.linalg.norm(tx)))
        r_star = max(
            r_star,
            float(
                np.linalg.norm(
                    T @ (algebra.star_coord @ np.conj(x.coords))
                    - target.star_coord @ np.conj(tx)
                )
            )
            / xscale,
        )
        r_alpha = max(
            r_alpha,
            float(np.linalg.norm(T @ (algebra.alpha_coord @ x.coords) - target.alpha_coord @ tx))
            / xscale,
        )
        r_eps = max(
            r_eps,
            float(
                np.linalg.norm(
                    T @ algebra.mul_coords(e, x.coords) - target.mul_coords(e_t, tx)
                )
            )
            / xscale,
        )
        nx = x.norm()
        r_iso = max(r_iso, abs(nx - target.op_norm(tx)) / max(1.0, nx))
        if Tinv is not None:
            r_round = max(
                r_round,
                float(np.linalg.norm(Tinv @ tx - x.coords))
                / max(1.0, float(np.linalg.norm(x.coords))),
            )

    r_unit = float(np.linalg.norm(T @ algebra.unit_coords - target.unit_coords))
    checks.append(CheckResult("homomorphism_product", r_mul <= tol, r_mul))
    checks.append(CheckResult("homomorphism_star", r_star <= tol, r_star))
    checks.append(CheckResult("unital", r_unit <= tol, r_unit))
    checks.append(CheckResult("intertwines_alpha", r_alpha <= tol, r_alpha))
    checks.append(CheckResult("intertwines_odd_symmetry", r_eps <= tol, r_eps))
    checks.append(CheckResult("isometry", r_iso <= tol, r_iso))
    checks.append(
        CheckResult("round_trip", Tinv is not None and r_round <= tol, r_round)
    )

    passed = all(c.passed for c in checks)
    return SpectralReport(checks, N, classes, rank, cond, passed)


def kernel_lemma_checks(
    algebra: KreinAlgebra,
    w: Character,
    samples: int = 100,
    seed: int = 23,
    tol: float = CHARACTER_TOL,
) -> list[CheckResult]:
    """Kernel facts for a character w.

    * w(x) = 0 iff w(x^dag x) = 0, checked in both directions through the
      exact identity ||w(x)||^2 = ||w(x^dag x)|| on random samples and on
      random elements of the kernel;
    * characters with equal even parts (w and gamma.w) have equal kernels,
      compared through principal angles between the kernel subspaces.
    """
    rng = np.random.default_rng(seed)
    K = w.kernel_basis(tol)
    r_forward = 0.0
    for _ in range(samples):
        c = rng.standard_normal(K.shape[1]) + 1j * rng.standard_normal(K.shape[1])
        x = K @ c
        xdx = algebra.mul_coords(algebra.dagger_coord @ np.conj(x), x)
        scale = max(1.0, float(np.linalg.norm(x)) ** 2)
        r_forward = max(r_forward, w(xdx).norm() / scale)

    r_identity = 0.0
    for _ in range(samples):
        x = algebra.random_element(rng)
        xdx = algebra.mul_coords(algebra.dagger_coord @ np.conj(x.coords), x.coords)
        lhs = w(x.coords).norm() ** 2
        rhs = w(xdx).norm()
        r_identity = max(r_identity, abs(lhs - rhs) / max(1.0, lhs))

    partner = w.gamma_composed()
    Kp = partner.kernel_basis(tol)
    if K.shape[1] and Kp.shape[1]:
        angles = scipy.linalg.subspace_angles(K, Kp)
        r_angles = float(np.max(angles)) if angles.size else 0.0
        same_dim = K.shape[1] == Kp.shape[1]
    else:
        r_angles = 0.0
        same_dim = K.shape[1] == Kp.shape[1]

    return [
        CheckResult("kernel_vanishing_forward", r_forward <= tol, r_forward),
        CheckResult("kernel_norm_identity", r_identity <= tol, r_identity),
        CheckResult(
            "equal_even_parts_equal_kernels",
            same_dim and r_angles <= tol,
            r_angles,
        ),
    ]
