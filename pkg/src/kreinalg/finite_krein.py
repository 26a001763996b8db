"""Finite-dimensional Krein C*-algebras realized inside a matrix algebra.

An instance is a linearly independent family of complex n x n matrices whose
span is closed under products and adjoints, together with a unitary
involution U implementing the fundamental symmetry alpha(x) = U x U.  The
Krein involution is x* = alpha(x^dag) with x^dag the ambient adjoint, the
norm is the ambient operator norm, and the grading splits every element into
even and odd parts (x +- alpha(x))/2.

Elements are stored as coordinate vectors against the basis; matrices are
materialized on demand.  The odd part of a commutative instance carries two
Hilbert bimodule inner products over the even part, and an optional odd
generator e (e^2 = unit, e* = -e, e odd) represents the odd symmetry
x -> e x.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "AlgebraValidationError",
    "SpanError",
    "NotOddElementError",
    "NotAnIdealError",
    "NotAlphaInvariantError",
    "InstanceFormatError",
    "CheckResult",
    "KreinAlgebra",
    "GradedElement",
    "build_function_algebra",
    "conjugate_algebra",
    "random_unitary",
    "dagger",
    "decompose",
    "inner_products",
    "check_full",
    "CommutativeSymmetricVerdict",
    "check_commutative_symmetric",
    "OddSymmetryVerdict",
    "check_odd_symmetry",
    "check_cstar_identity",
    "check_krein_identity",
    "check_decomposition",
    "check_bimodule_axioms",
    "check_imprimitivity",
    "quotient_by_ideal",
    "quotient_with_map",
    "algebra_to_instance_dict",
    "algebra_from_instance_dict",
    "function_algebra_instance",
]

DEFAULT_TOL = 1e-9


class AlgebraValidationError(ValueError):
    """Construction input does not describe a valid graded matrix algebra."""


class SpanError(ValueError):
    """A matrix failed the span-membership residual test."""


class NotOddElementError(ValueError):
    """An operation restricted to the odd part received a non-odd element."""


class NotAnIdealError(ValueError):
    """The proposed subspace is not a two-sided ideal."""


class NotAlphaInvariantError(ValueError):
    """The proposed ideal is not invariant under the fundamental symmetry."""


class InstanceFormatError(ValueError):
    """A serialized instance is malformed; ``field`` names the offender."""

    def __init__(self, message: str, field_path: str = ""):
        super().__init__(message if not field_path else f"{field_path}: {message}")
        self.field = field_path


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one named invariant check."""

    name: str
    passed: bool
    max_residual: float
    detail: str | None = None
    witness: object | None = None

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "passed": bool(self.passed),
            "max_residual": float(self.max_residual),
        }
        if self.detail is not None:
            out["detail"] = self.detail
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _vec(mats: np.ndarray) -> np.ndarray:
    return mats.reshape(mats.shape[:-2] + (-1,))


@dataclass(frozen=True, eq=False)
class GradedElement:
    """Element of a :class:`KreinAlgebra`, stored as basis coordinates."""

    algebra: "KreinAlgebra"
    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=complex).reshape(-1)
        if c.shape != (self.algebra.dim,):
            raise ValueError(
                f"expected {self.algebra.dim} coordinates, got {c.shape}"
            )
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coords", c)

    def matrix(self) -> np.ndarray:
        return self.algebra.materialize(self.coords)

    def norm(self) -> float:
        return self.algebra.op_norm(self.coords)

    @property
    def even_part(self) -> "GradedElement":
        return GradedElement(self.algebra, self.algebra.even_projection(self.coords))

    @property
    def odd_part(self) -> "GradedElement":
        return GradedElement(self.algebra, self.algebra.odd_projection(self.coords))

    def alpha(self) -> "GradedElement":
        return GradedElement(self.algebra, self.algebra.alpha_coord @ self.coords)

    def star(self) -> "GradedElement":
        # antilinear: coordinates conjugate before the basis-image matrix
        return GradedElement(self.algebra, self.algebra.star_coord @ np.conj(self.coords))

    def dagger(self) -> "GradedElement":
        return GradedElement(self.algebra, self.algebra.dagger_coord @ np.conj(self.coords))

    def is_odd(self, tol: float = DEFAULT_TOL) -> bool:
        scale = max(1.0, float(np.linalg.norm(self.coords)))
        return float(np.linalg.norm(self.algebra.even_projection(self.coords))) <= tol * scale

    def is_even(self, tol: float = DEFAULT_TOL) -> bool:
        scale = max(1.0, float(np.linalg.norm(self.coords)))
        return float(np.linalg.norm(self.algebra.odd_projection(self.coords))) <= tol * scale

    def __add__(self, other):
        if isinstance(other, GradedElement) and other.algebra is self.algebra:
            return GradedElement(self.algebra, self.coords + other.coords)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, GradedElement) and other.algebra is self.algebra:
            return GradedElement(self.algebra, self.coords - other.coords)
        return NotImplemented

    def __neg__(self):
        return GradedElement(self.algebra, -self.coords)

    def __mul__(self, other):
        if isinstance(other, GradedElement) and other.algebra is self.algebra:
            return GradedElement(self.algebra, self.algebra.mul_coords(self.coords, other.coords))
        if isinstance(other, (int, float, complex)):
            return GradedElement(self.algebra, other * self.coords)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex)):
            return GradedElement(self.algebra, other * self.coords)
        return NotImplemented


class KreinAlgebra:
    """Graded matrix algebra with fundamental symmetry alpha(x) = U x U.

    Parameters
    ----------
    basis : array_like, shape (d, n, n)
        Linearly independent matrices whose span is closed under products
        and adjoints.
    symmetry_unitary : array_like, shape (n, n)
        Unitary involution (U^2 = 1) whose conjugation preserves the span.
    unit_coords : array_like, optional
        Coordinates of the multiplicative unit; solved for when omitted.
    odd_generator : array_like, optional
        Coordinates of a candidate odd generator e.  Its algebraic
        properties (e odd, e^2 = unit, e* = -e) are *not* enforced here;
        ``check_odd_symmetry`` reports on them, so defective generators can
        be represented and diagnosed.
    tol : float
        Relative residual bound for all construction validations.
    """

    def __init__(
        self,
        basis,
        symmetry_unitary,
        *,
        unit_coords=None,
        odd_generator=None,
        tol: float = DEFAULT_TOL,
    ):
        B = np.asarray(basis, dtype=complex)
        if B.ndim != 3 or B.shape[0] < 1 or B.shape[1] != B.shape[2]:
            raise AlgebraValidationError(
                f"basis must have shape (d, n, n), got {B.shape}"
            )
        U = np.asarray(symmetry_unitary, dtype=complex)
        n = B.shape[1]
        if U.shape != (n, n):
            raise AlgebraValidationError(
                f"symmetry_unitary must be {n} x {n}, got {U.shape}"
            )

        self.basis = B
        self.dim = int(B.shape[0])
        self.ambient_dim = n
        self.tol = float(tol)
        self.symmetry_unitary = U
        self.validation_residuals: dict[str, float] = {}

        d = self.dim
        flat = _vec(B)  # (d, n^2), rows are vectorized basis matrices
        sv = np.linalg.svd(flat, compute_uv=False)
        indep = float(sv[-1] / sv[0]) if sv[0] > 0 else 0.0
        self.validation_residuals["basis_independence"] = indep
        if indep <= tol:
            raise AlgebraValidationError("basis is not linearly independent")
        # coords c of a matrix M solve flat.T @ c = vec(M)
        self._solver = np.linalg.pinv(flat.T)

        r_unitary = float(np.linalg.norm(U.conj().T @ U - np.eye(n), 2))
        self.validation_residuals["symmetry_unitarity"] = r_unitary
        if r_unitary > tol:
            raise AlgebraValidationError("symmetry_unitary not unitary")
        r_invol = float(np.linalg.norm(U @ U - np.eye(n), 2))
        self.validation_residuals["symmetry_involution"] = r_invol
        if r_invol > tol:
            raise AlgebraValidationError("symmetry_unitary is not an involution")

        products = np.einsum("iab,jbc->ijac", B, B)
        self.structure, r_prod = self._batch_coords(products.reshape(d * d, n, n))
        self.structure = self.structure.reshape(d, d, d)
        self.validation_residuals["product_closure"] = r_prod
        if r_prod > tol:
            raise AlgebraValidationError("basis span is not closed under multiplication")

        adjoints = B.conj().transpose(0, 2, 1)
        self.dagger_coord, r_adj = self._batch_coords(adjoints)
        self.dagger_coord = self.dagger_coord.T  # columns: image coords of basis vectors
        self.validation_residuals["adjoint_closure"] = r_adj
        if r_adj > tol:
            raise AlgebraValidationError("basis span is not closed under adjoints")

        alpha_mats = np.einsum("ab,ibc,cd->iad", U, B, U)
        self.alpha_coord, r_alpha = self._batch_coords(alpha_mats)
        self.alpha_coord = self.alpha_coord.T
        self.validation_residuals["alpha_closure"] = r_alpha
        if r_alpha > tol:
            raise AlgebraValidationError("symmetry does not preserve the basis span")

        # Krein involution x* = alpha(x^dag); coordinate matrices compose left to right
        self.star_coord = self.alpha_coord @ self.dagger_coord

        self.unit_coords, r_unit = self._resolve_unit(unit_coords)
        self.validation_residuals["unit"] = r_unit
        if r_unit > tol:
            raise AlgebraValidationError("algebra has no multiplicative unit in the span")

        # grading projections and orthonormal coordinate bases of the two parts
        proj_even = (np.eye(d) + self.alpha_coord) / 2.0
        u_svd, s_svd, _ = np.linalg.svd(proj_even)
        self.even_basis = u_svd[:, s_svd > 0.5]
        proj_odd = (np.eye(d) - self.alpha_coord) / 2.0
        u_svd, s_svd, _ = np.linalg.svd(proj_odd)
        self.odd_basis = u_svd[:, s_svd > 0.5]
        if self.even_basis.shape[1] + self.odd_basis.shape[1] != d:
            raise AlgebraValidationError("grading projections do not split the span")

        if odd_generator is None:
            self.odd_generator_coords = None
        else:
            e = np.asarray(odd_generator, dtype=complex).reshape(-1)
            if e.shape != (d,):
                raise AlgebraValidationError(
                    f"odd_generator needs {d} coordinates, got {e.shape}"
                )
            self.odd_generator_coords = e

    # -- coordinate plumbing ------------------------------------------------

    def _batch_coords(self, mats: np.ndarray) -> tuple[np.ndarray, float]:
        """Coordinates of a stack of matrices plus the worst span residual."""
        vecs = _vec(mats)
        coords = vecs @ self._solver.T
        recon = coords @ _vec(self.basis)
        errs = np.linalg.norm(recon - vecs, axis=-1)
        scales = np.maximum(1.0, np.linalg.norm(vecs, axis=-1))
        return coords, float(np.max(errs / scales)) if len(errs) else 0.0

    def _resolve_unit(self, unit_coords) -> tuple[np.ndarray, float]:
        d = self.dim
        eye = np.eye(d)
        # mul(c, e_i)_k = sum_j c_j structure[j, i, k]
        lmat = self.structure.transpose(1, 2, 0).reshape(d * d, d)
        # mul(e_i, c)_k = sum_j c_j structure[i, j, k]
        rmat = self.structure.transpose(0, 2, 1).reshape(d * d, d)
        sys_mat = np.vstack([lmat, rmat])
        rhs = np.concatenate([eye.reshape(d * d), eye.reshape(d * d)])
        if unit_coords is None:
            sol, *_ = np.linalg.lstsq(sys_mat, rhs, rcond=None)
        else:
            sol = np.asarray(unit_coords, dtype=complex).reshape(-1)
            if sol.shape != (d,):
                raise AlgebraValidationError(
                    f"unit_coords needs {d} coordinates, got {sol.shape}"
                )
        resid = float(np.linalg.norm(sys_mat @ sol - rhs))
        return sol, resid

    def materialize(self, coords) -> np.ndarray:
        c = np.asarray(coords, dtype=complex).reshape(-1)
        return np.einsum("i,iab->ab", c, self.basis)

    def coords_of_matrix(self, mat, tol: float | None = None) -> np.ndarray:
        """Coordinates of an ambient matrix, raising SpanError off the span."""
        tol = self.tol if tol is None else tol
        M = np.asarray(mat, dtype=complex)
        coords, resid = self._batch_coords(M[None, :, :])
        if resid > tol:
            raise SpanError(f"matrix is not in the basis span (residual {resid:.3e})")
        return coords[0]

    def mul_coords(self, c1, c2) -> np.ndarray:
        return np.einsum("i,j,ijk->k", c1, c2, self.structure)

    def even_projection(self, coords) -> np.ndarray:
        return (coords + self.alpha_coord @ coords) / 2.0

    def odd_projection(self, coords) -> np.ndarray:
        return (coords - self.alpha_coord @ coords) / 2.0

    def op_norm(self, coords) -> float:
        return float(np.linalg.norm(self.materialize(coords), 2))

    # -- element factories ----------------------------------------------------

    def element(self, coords) -> GradedElement:
        return GradedElement(self, coords)

    def element_from_matrix(self, mat, tol: float | None = None) -> GradedElement:
        return GradedElement(self, self.coords_of_matrix(mat, tol))

    @property
    def unit(self) -> GradedElement:
        return GradedElement(self, self.unit_coords)

    @property
    def odd_generator(self) -> GradedElement | None:
        if self.odd_generator_coords is None:
            return None
        return GradedElement(self, self.odd_generator_coords)

    def random_element(self, rng: np.random.Generator, scale: float = 1.0) -> GradedElement:
        c = rng.standard_normal(self.dim) + 1j * rng.standard_normal(self.dim)
        return GradedElement(self, scale * c / np.sqrt(2.0))

    def random_odd_element(self, rng: np.random.Generator, scale: float = 1.0) -> GradedElement:
        k = self.odd_basis.shape[1]
        if k == 0:
            raise NotOddElementError("algebra has trivial odd part")
        c = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        return GradedElement(self, scale * (self.odd_basis @ c) / np.sqrt(2.0))

    def even_basis_matrices(self) -> np.ndarray:
        return np.einsum("ji,jab->iab", self.even_basis, self.basis)

    def odd_basis_matrices(self) -> np.ndarray:
        return np.einsum("ji,jab->iab", self.odd_basis, self.basis)


def _own(algebra: KreinAlgebra, x) -> GradedElement:
    """Coerce x into an element of ``algebra``, span-checking foreign input."""
    if isinstance(x, GradedElement):
        if x.algebra is algebra:
            return x
        return algebra.element_from_matrix(x.matrix())
    return GradedElement(algebra, x)


# -- constructors -------------------------------------------------------------


def build_function_algebra(points: int, tol: float = DEFAULT_TOL) -> KreinAlgebra:
    """Algebra of rank-one-algebra valued functions on a finite point set.

    The ambient space is block diagonal with one 2x2 block per point.  Basis
    ordering is (even, odd) per point: the even element is the identity on
    one block, the odd one is [[0, 1], [1, 0]] on the same block.  The
    fundamental symmetry acts blockwise as conjugation by diag(1, -1) and the
    odd generator is the constant function with value [[0, 1], [1, 0]].
    """
    if points < 1:
        raise ValueError(f"points must be >= 1, got {points}")
    n = 2 * points
    d = 2 * points
    basis = np.zeros((d, n, n), dtype=complex)
    for p in range(points):
        basis[2 * p, 2 * p, 2 * p] = 1.0
        basis[2 * p, 2 * p + 1, 2 * p + 1] = 1.0
        basis[2 * p + 1, 2 * p, 2 * p + 1] = 1.0
        basis[2 * p + 1, 2 * p + 1, 2 * p] = 1.0
    sym = np.diag(np.tile([1.0, -1.0], points)).astype(complex)
    unit = np.tile([1.0, 0.0], points).astype(complex)
    odd_gen = np.tile([0.0, 1.0], points).astype(complex)
    return KreinAlgebra(
        basis, sym, unit_coords=unit, odd_generator=odd_gen, tol=tol
    )


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random unitary via QR with the standard phase fix."""
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    ph = np.diag(r).copy()
    ph = ph / np.abs(ph)
    return q * ph


def conjugate_algebra(algebra: KreinAlgebra, unitary, tol: float | None = None) -> KreinAlgebra:
    """Unitarily conjugated copy; coordinates keep their meaning."""
    Q = np.asarray(unitary, dtype=complex)
    n = algebra.ambient_dim
    if Q.shape != (n, n):
        raise AlgebraValidationError(f"conjugating unitary must be {n} x {n}")
    if np.linalg.norm(Q.conj().T @ Q - np.eye(n), 2) > (tol or algebra.tol):
        raise AlgebraValidationError("conjugating matrix is not unitary")
    new_basis = np.einsum("ab,ibc,cd->iad", Q, algebra.basis, Q.conj().T)
    new_sym = Q @ algebra.symmetry_unitary @ Q.conj().T
    return KreinAlgebra(
        new_basis,
        new_sym,
        unit_coords=algebra.unit_coords,
        odd_generator=algebra.odd_generator_coords,
        tol=tol or algebra.tol,
    )


# -- graded structure ops ------------------------------------------------------


def dagger(algebra: KreinAlgebra, x) -> GradedElement:
    """Associated C*-involution alpha(x)* = ambient adjoint of x."""
    return _own(algebra, x).dagger()


def decompose(algebra: KreinAlgebra, x) -> tuple[GradedElement, GradedElement]:
    """Split x into its even and odd parts (x +- alpha(x))/2."""
    el = _own(algebra, x)
    return el.even_part, el.odd_part


def inner_products(algebra: KreinAlgebra, x, y, tol: float | None = None) -> tuple[GradedElement, GradedElement]:
    """Left and right even-valued inner products of two odd elements.

    left  = x y^dag,  right = x^dag y.  Raises NotOddElementError unless
    both arguments lie in the odd part within tolerance.
    """
    tol = algebra.tol if tol is None else tol
    ex, ey = _own(algebra, x), _own(algebra, y)
    for name, el in (("x", ex), ("y", ey)):
        if not el.is_odd(tol):
            raise NotOddElementError(f"{name} is not in the odd part")
    left = ex * ey.dagger()
    right = ex.dagger() * ey
    return left, right


def check_full(algebra: KreinAlgebra, tol: float = DEFAULT_TOL) -> bool:
    """Whether span{x^dag y : x, y odd} is all of the even part."""
    rank, dim_even = _fullness_rank(algebra, tol)
    return rank == dim_even


def _fullness_rank(algebra: KreinAlgebra, tol: float) -> tuple[int, int]:
    ob = algebra.odd_basis
    k = ob.shape[1]
    dim_even = algebra.even_basis.shape[1]
    if k == 0:
        return 0, dim_even
    # coordinates of all products dagger(x_i) y_j for the odd coordinate basis
    dag = algebra.dagger_coord @ np.conj(ob)  # (d, k); adjoint is antilinear
    prods = np.einsum("ip,jq,ijk->pqk", dag, ob, algebra.structure).reshape(k * k, -1)
    sv = np.linalg.svd(prods, compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0, dim_even
    rank = int(np.sum(sv > tol * sv[0]))
    return rank, dim_even


@dataclass(frozen=True)
class CommutativeSymmetricVerdict:
    """Joint verdict; the two flags are equivalent, so they must agree."""

    commutative: bool
    symmetric_bimodule: bool
    commutator_residual: float
    symmetry_residual: float


def check_commutative_symmetric(
    algebra: KreinAlgebra, tol: float = DEFAULT_TOL
) -> CommutativeSymmetricVerdict:
    """Test commutativity of the whole algebra against the equivalent
    condition: commutative even part plus symmetric odd bimodule."""
    s = algebra.structure
    comm = float(np.max(np.abs(s - s.transpose(1, 0, 2)))) if algebra.dim else 0.0
    scale = max(1.0, float(np.max(np.abs(s))))
    commutative = comm <= tol * scale

    eb, ob = algebra.even_basis, algebra.odd_basis
    sym_resid = 0.0
    # even part commutative
    se = np.einsum("ip,jq,ijk->pqk", eb, eb, s)
    sym_resid = max(sym_resid, float(np.max(np.abs(se - se.transpose(1, 0, 2)))) if se.size else 0.0)
    if ob.shape[1]:
        # module symmetry a x = x a for even a, odd x
        ax = np.einsum("ip,jq,ijk->pqk", eb, ob, s)
        xa = np.einsum("jq,ip,jik->pqk", ob, eb, s)
        sym_resid = max(sym_resid, float(np.max(np.abs(ax - xa))))
        # inner product symmetry: left<x|y> = right<y|x>, i.e. x y^dag = y^dag x
        dag = algebra.dagger_coord @ np.conj(ob)
        xy = np.einsum("ip,jq,ijk->pqk", ob, dag, s)
        yx = np.einsum("jq,ip,jik->pqk", dag, ob, s)
        sym_resid = max(sym_resid, float(np.max(np.abs(xy - yx))))
    symmetric = sym_resid <= tol * scale
    return CommutativeSymmetricVerdict(commutative, symmetric, comm, sym_resid)


@dataclass(frozen=True)
class OddSymmetryVerdict:
    """Verdict on the supplied odd generator.

    ``exists`` is None when no generator was supplied: whether one exists is
    then unknown, no search is attempted.
    """

    exists: bool | None
    isometric: bool | None
    max_residual: float
    failures: tuple[str, ...] = ()

    @property
    def absent(self) -> bool:
        return self.exists is None


def check_odd_symmetry(
    algebra: KreinAlgebra,
    samples: int = 50,
    seed: int = 11,
    tol: float = DEFAULT_TOL,
) -> OddSymmetryVerdict:
    """Verify the supplied odd generator and the isometry of x -> e x.

    Checks e odd, e^2 = unit, e* = -e and the anticommutation of x -> e x
    with alpha on the basis, then samples ||e x|| = ||x||.  With no generator
    supplied the verdict reports existence as unknown.
    """
    e = algebra.odd_generator_coords
    if e is None:
        return OddSymmetryVerdict(None, None, 0.0, ("odd generator absent",))
    failures: list[str] = []
    resid = 0.0

    scale = max(1.0, float(np.linalg.norm(e)))
    r = float(np.linalg.norm(algebra.even_projection(e))) / scale
    resid = max(resid, r)
    if r > tol:
        failures.append("generator is not odd")

    r = float(np.linalg.norm(algebra.mul_coords(e, e) - algebra.unit_coords))
    resid = max(resid, r)
    if r > tol * max(1.0, scale**2):
        failures.append("generator squared is not the unit")

    r = float(np.linalg.norm(algebra.star_coord @ np.conj(e) + e)) / scale
    resid = max(resid, r)
    if r > tol:
        failures.append("generator is not Krein anti-selfadjoint")

    # eps(alpha(x)) = -alpha(eps(x)) on the basis, eps(x) = e x
    eye = np.eye(algebra.dim)
    lhs = np.stack([algebra.mul_coords(e, algebra.alpha_coord @ eye[:, i]) for i in range(algebra.dim)])
    rhs = np.stack([-algebra.alpha_coord @ algebra.mul_coords(e, eye[:, i]) for i in range(algebra.dim)])
    r = float(np.max(np.linalg.norm(lhs - rhs, axis=-1))) / scale
    resid = max(resid, r)
    if r > tol:
        failures.append("odd symmetry does not anticommute with alpha")

    exists = not failures

    rng = np.random.default_rng(seed)
    iso_resid = 0.0
    for _ in range(samples):
        x = algebra.random_element(rng)
        nx = x.norm()
        ne = algebra.op_norm(algebra.mul_coords(e, x.coords))
        iso_resid = max(iso_resid, abs(ne - nx) / max(1.0, nx))
    resid = max(resid, iso_resid)
    isometric = iso_resid <= max(tol, 1e-12)

    return OddSymmetryVerdict(exists, isometric, resid, tuple(failures))


# -- sampled identity checks ---------------------------------------------------


def check_cstar_identity(
    algebra: KreinAlgebra, samples: int = 100, seed: int = 3, tol: float = DEFAULT_TOL
) -> CheckResult:
    """C*-identity ||x^dag x|| = ||x||^2 for the associated involution."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        x = algebra.random_element(rng)
        lhs = algebra.op_norm(algebra.mul_coords(x.dagger().coords, x.coords))
        nx = x.norm()
        worst = max(worst, abs(lhs - nx * nx) / max(1.0, nx * nx))
    return CheckResult("cstar_identity", worst <= tol, worst)


def check_krein_identity(
    algebra: KreinAlgebra, samples: int = 100, seed: int = 5, tol: float = DEFAULT_TOL
) -> CheckResult:
    """Krein identity ||alpha(x*) x|| = ||x||^2 for the Krein involution."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        x = algebra.random_element(rng)
        y = algebra.alpha_coord @ (algebra.star_coord @ np.conj(x.coords))
        lhs = algebra.op_norm(algebra.mul_coords(y, x.coords))
        nx = x.norm()
        worst = max(worst, abs(lhs - nx * nx) / max(1.0, nx * nx))
    return CheckResult("krein_identity", worst <= tol, worst)


def check_decomposition(
    algebra: KreinAlgebra, samples: int = 100, seed: int = 7, tol: float = DEFAULT_TOL
) -> CheckResult:
    """Grading: x = x_+ + x_- with alpha(x_+-) = +-x_+-, exactly in coordinates."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        x = algebra.random_element(rng)
        ev, od = algebra.even_projection(x.coords), algebra.odd_projection(x.coords)
        scale = max(1.0, float(np.linalg.norm(x.coords)))
        worst = max(worst, float(np.linalg.norm(ev + od - x.coords)) / scale)
        worst = max(worst, float(np.linalg.norm(algebra.alpha_coord @ ev - ev)) / scale)
        worst = max(worst, float(np.linalg.norm(algebra.alpha_coord @ od + od)) / scale)
    return CheckResult("decomposition", worst <= tol, worst)


def check_bimodule_axioms(
    algebra: KreinAlgebra, samples: int = 50, seed: int = 13, tol: float = DEFAULT_TOL
) -> list[CheckResult]:
    """Hilbert bimodule axioms of the odd part over the even part.

    Basis-triple checks: module associativity, compatibility of both inner
    products with the even action, even-valuedness; sampled checks:
    positivity of <x|x> and agreement of the two bimodule norms.
    """
    E = algebra.even_basis_matrices()
    O = algebra.odd_basis_matrices()
    U = algebra.symmetry_unitary
    results: list[CheckResult] = []
    if O.shape[0] == 0 or E.shape[0] == 0:
        zero = CheckResult("bimodule_trivial", True, 0.0, detail="odd part trivial")
        return [zero]

    def rel(diff: np.ndarray, scale: np.ndarray | float) -> float:
        s = np.maximum(1.0, scale)
        return float(np.max(np.linalg.norm(diff, axis=(-2, -1)) / s))

    # (a x) b == a (x b) on basis triples
    ax = np.einsum("aij,xjk->axik", E, O)
    xb = np.einsum("xjk,bkl->xbjl", O, E)
    lhs = np.einsum("axik,bkl->axbil", ax, E)
    rhs = np.einsum("aij,xbjl->axbil", E, xb)
    assoc = rel(lhs - rhs, np.linalg.norm(lhs, axis=(-2, -1)))
    results.append(CheckResult("bimodule_associativity", assoc <= tol, assoc))

    # right inner product: <x | a y> = <a^dag x | y>, both equal x^dag a y
    ay = np.einsum("aij,yjk->ayik", E, O)
    lhs = np.einsum("xji,ayjl->axyil", O.conj(), ay)           # x^dag (a y)
    adx = np.einsum("aji,xjk->axik", E.conj(), O)              # a^dag x
    rhs = np.einsum("axji,yjl->axyil", adx.conj(), O)          # (a^dag x)^dag y
    compat_r = rel(lhs - rhs, np.linalg.norm(lhs, axis=(-2, -1)))
    # left inner product: <x b | y> = <x | y b^dag>
    xb2 = np.einsum("xij,bjk->xbik", O, E)
    lhs2 = np.einsum("xbij,ylj->xbyil", xb2, O.conj())         # (x b) y^dag
    ybd = np.einsum("yij,bkj->ybik", O, E.conj())              # y b^dag
    rhs2 = np.einsum("xij,yblj->xbyil", O, ybd.conj())         # x (y b^dag)^dag
    compat_l = rel(lhs2 - rhs2, np.linalg.norm(lhs2, axis=(-2, -1)))
    compat = max(compat_r, compat_l)
    results.append(CheckResult("bimodule_inner_compat", compat <= tol, compat))

    # both inner products land in the even part
    left_prods = np.einsum("xij,ykj->xyik", O, O.conj())
    right_prods = np.einsum("xji,yjk->xyik", O.conj(), O)
    worst_even = 0.0
    for P in (left_prods, right_prods):
        alphaP = np.einsum("ab,xybc,cd->xyad", U, P, U)
        odd_part = (P - alphaP) / 2.0
        worst_even = max(worst_even, rel(odd_part, np.linalg.norm(P, axis=(-2, -1))))
    results.append(CheckResult("bimodule_even_valued", worst_even <= tol, worst_even))

    rng = np.random.default_rng(seed)
    min_eig = 0.0
    norm_gap = 0.0
    for _ in range(samples):
        x = algebra.random_odd_element(rng)
        M = x.matrix()
        right = M.conj().T @ M
        left = M @ M.conj().T
        herm = (right + right.conj().T) / 2.0
        ev = np.linalg.eigvalsh(herm)
        min_eig = min(min_eig, float(ev[0]) / max(1.0, float(ev[-1])))
        norm_gap = max(
            norm_gap,
            abs(np.linalg.norm(left, 2) - np.linalg.norm(right, 2))
            / max(1.0, float(np.linalg.norm(right, 2))),
        )
    results.append(CheckResult("bimodule_positivity", min_eig >= -tol, abs(min_eig)))
    results.append(CheckResult("bimodule_norms_coincide", norm_gap <= tol, norm_gap))
    return results


def check_imprimitivity(
    algebra: KreinAlgebra, samples: int = 50, seed: int = 17, tol: float = DEFAULT_TOL
) -> CheckResult:
    """Imprimitivity: left<x|y> z = x right<y|z> on odd basis triples."""
    O = algebra.odd_basis_matrices()
    if O.shape[0] == 0:
        return CheckResult("imprimitivity", True, 0.0, detail="odd part trivial")
    left_ip = np.einsum("xij,ykj->xyik", O, O.conj())
    lhs = np.einsum("xyik,zkl->xyzil", left_ip, O)
    right_ip = np.einsum("yji,zjk->yzik", O.conj(), O)
    rhs = np.einsum("xij,yzjl->xyzil", O, right_ip)
    scale = np.maximum(1.0, np.linalg.norm(lhs, axis=(-2, -1)))
    worst = float(np.max(np.linalg.norm(lhs - rhs, axis=(-2, -1)) / scale))
    return CheckResult("imprimitivity", worst <= tol, worst)


# -- quotients -----------------------------------------------------------------


def quotient_with_map(
    algebra: KreinAlgebra, ideal_basis: Sequence, tol: float | None = None
) -> tuple[KreinAlgebra, np.ndarray]:
    """Quotient by an alpha-invariant two-sided ideal, plus the coordinate map.

    The quotient is represented faithfully by compressing to the orthogonal
    complement of the ideal's joint range; for a self-adjoint ideal of a
    matrix C*-algebra the compression kernel is exactly the ideal, so the
    compression norm is the quotient C*-norm.  Returns the quotient algebra
    and the (new_dim x old_dim) matrix taking old coordinates to quotient
    coordinates.
    """
    tol = algebra.tol if tol is None else tol
    d, n = algebra.dim, algebra.ambient_dim
    rows = [np.asarray(_own(algebra, x).coords, dtype=complex) for x in ideal_basis]
    if rows:
        raw = np.array(rows)
        u, s, vh = np.linalg.svd(raw, full_matrices=False)
        keep = s > (tol * s[0] if s[0] > 0 else 0)
        ortho = vh[keep]  # (k, d) orthonormal rows spanning the ideal coords
    else:
        ortho = np.zeros((0, d), dtype=complex)
    k = ortho.shape[0]

    def outside(vectors: np.ndarray) -> float:
        # residual of coordinate vectors against the ideal coordinate span
        if k == 0:
            return float(np.max(np.linalg.norm(vectors, axis=-1))) if vectors.size else 0.0
        proj = (vectors @ ortho.conj().T) @ ortho
        errs = np.linalg.norm(vectors - proj, axis=-1)
        scales = np.maximum(1.0, np.linalg.norm(vectors, axis=-1))
        return float(np.max(errs / scales)) if vectors.size else 0.0

    if k:
        # structure[i, j, k] holds (B_i B_j)_k
        left = np.einsum("ri,ijk->rjk", ortho, algebra.structure)   # ideal * basis_j
        right = np.einsum("rj,ijk->rik", ortho, algebra.structure)  # basis_i * ideal
        r_ideal = max(outside(left.reshape(-1, d)), outside(right.reshape(-1, d)))
        if r_ideal > tol:
            raise NotAnIdealError(
                f"subspace is not a two-sided ideal (residual {r_ideal:.3e})"
            )
        r_alpha = outside((algebra.alpha_coord @ ortho.T).T)
        if r_alpha > tol:
            raise NotAlphaInvariantError(
                f"ideal is not alpha-invariant (residual {r_alpha:.3e})"
            )
        r_star = outside((algebra.dagger_coord @ np.conj(ortho).T).T)
        if r_star > tol:
            raise NotAnIdealError(
                f"ideal is not closed under the adjoint (residual {r_star:.3e})"
            )
        unit_resid = outside(algebra.unit_coords[None, :])
        if unit_resid <= tol:
            raise NotAnIdealError("ideal contains the unit; quotient would be trivial")

    if k == 0:
        W = np.eye(n, dtype=complex)
    else:
        ideal_mats = np.einsum("ri,iab->rab", ortho, algebra.basis)
        stacked = np.concatenate(list(ideal_mats), axis=1)  # (n, k*n)
        u_full, s_full, _ = np.linalg.svd(stacked, full_matrices=True)
        rank_v = int(np.sum(s_full > tol * s_full[0])) if s_full.size and s_full[0] > 0 else 0
        W = u_full[:, rank_v:]  # orthonormal basis of the complement of the ideal range
    if W.shape[1] == 0:
        raise NotAnIdealError("ideal range covers the whole space; quotient would be trivial")

    # complement of the ideal inside the coordinate space
    if k:
        _, _, vh_full = np.linalg.svd(ortho, full_matrices=True)
        comp = vh_full[k:]  # (d - k, d)
    else:
        comp = np.eye(d, dtype=complex)

    compressed = np.einsum("pa,iab,bq->ipq", W.conj().T, algebra.basis, W)  # (d, m, m)
    new_basis = np.einsum("ci,ipq->cpq", comp, compressed)
    new_sym = W.conj().T @ algebra.symmetry_unitary @ W
    new_e = None
    if algebra.odd_generator_coords is not None:
        new_e_raw = np.einsum("i,ipq->pq", algebra.odd_generator_coords, compressed)
        quot = KreinAlgebra(new_basis, new_sym, tol=tol)
        new_e = quot.coords_of_matrix(new_e_raw)
        quot = KreinAlgebra(
            new_basis, new_sym, unit_coords=quot.unit_coords, odd_generator=new_e, tol=tol
        )
    else:
        quot = KreinAlgebra(new_basis, new_sym, tol=tol)

    # coordinate map: old basis vector i -> coords of W^dag B_i W in the new basis
    cmap = np.stack([quot.coords_of_matrix(compressed[i]) for i in range(d)], axis=1)
    return quot, cmap


def quotient_by_ideal(
    algebra: KreinAlgebra, ideal_basis: Sequence, tol: float | None = None
) -> KreinAlgebra:
    """Quotient Krein algebra by an alpha-invariant two-sided ideal."""
    quot, _ = quotient_with_map(algebra, ideal_basis, tol)
    return quot


# -- serialization -------------------------------------------------------------


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _matrix_to_json(M: np.ndarray) -> list:
    return [[_pair(z) for z in row] for row in np.asarray(M, dtype=complex)]


def _coords_to_json(c: np.ndarray) -> list:
    return [_pair(z) for z in np.asarray(c, dtype=complex).reshape(-1)]


def _pair_from_json(v, field_path: str) -> complex:
    if (
        not isinstance(v, (list, tuple))
        or len(v) != 2
        or not all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in v)
    ):
        raise InstanceFormatError("expected a [re, im] pair of numbers", field_path)
    return complex(v[0], v[1])


def _matrix_from_json(rows, field_path: str) -> np.ndarray:
    if not isinstance(rows, list) or not rows:
        raise InstanceFormatError("expected a non-empty list of rows", field_path)
    n = len(rows)
    out = np.zeros((n, len(rows[0]) if isinstance(rows[0], list) else 0), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != out.shape[1]:
            raise InstanceFormatError("rows must all have equal length", f"{field_path}[{i}]")
        for j, v in enumerate(row):
            out[i, j] = _pair_from_json(v, f"{field_path}[{i}][{j}]")
    return out


def _coords_from_json(vals, field_path: str) -> np.ndarray:
    if not isinstance(vals, list) or not vals:
        raise InstanceFormatError("expected a non-empty coordinate list", field_path)
    return np.array(
        [_pair_from_json(v, f"{field_path}[{i}]") for i, v in enumerate(vals)], dtype=complex
    )


def function_algebra_instance(points: int) -> dict:
    return {"kind": "function_algebra", "points": int(points)}


def algebra_to_instance_dict(algebra: KreinAlgebra) -> dict:
    out = {
        "kind": "matrix_algebra",
        "ambient_dim": algebra.ambient_dim,
        "basis": [_matrix_to_json(B) for B in algebra.basis],
        "symmetry_unitary": _matrix_to_json(algebra.symmetry_unitary),
        "odd_generator": None
        if algebra.odd_generator_coords is None
        else _coords_to_json(algebra.odd_generator_coords),
    }
    return out


def algebra_from_instance_dict(data, tol: float = DEFAULT_TOL) -> KreinAlgebra:
    """Build an algebra from its JSON form; InstanceFormatError on bad input,
    AlgebraValidationError when the data is well-formed but not an algebra."""
    if not isinstance(data, dict):
        raise InstanceFormatError("instance must be a JSON object", "")
    kind = data.get("kind")
    if kind == "function_algebra":
        points = data.get("points")
        if not isinstance(points, int) or isinstance(points, bool) or points < 1:
            raise InstanceFormatError("points must be a positive integer", "points")
        return build_function_algebra(points, tol=tol)
    if kind == "matrix_algebra":
        for key in ("ambient_dim", "basis", "symmetry_unitary"):
            if key not in data:
                raise InstanceFormatError("required field missing", key)
        n = data["ambient_dim"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise InstanceFormatError("ambient_dim must be a positive integer", "ambient_dim")
        raw_basis = data["basis"]
        if not isinstance(raw_basis, list) or not raw_basis:
            raise InstanceFormatError("expected a non-empty list of matrices", "basis")
        mats = []
        for i, rows in enumerate(raw_basis):
            M = _matrix_from_json(rows, f"basis[{i}]")
            if M.shape != (n, n):
                raise InstanceFormatError(
                    f"matrix must be {n} x {n}, got {M.shape}", f"basis[{i}]"
                )
            mats.append(M)
        U = _matrix_from_json(data["symmetry_unitary"], "symmetry_unitary")
        if U.shape != (n, n):
            raise InstanceFormatError(
                f"matrix must be {n} x {n}, got {U.shape}", "symmetry_unitary"
            )
        e = data.get("odd_generator")
        e_coords = None if e is None else _coords_from_json(e, "odd_generator")
        if e_coords is not None and e_coords.shape != (len(mats),):
            raise InstanceFormatError(
                f"needs {len(mats)} coordinates, got {e_coords.shape[0]}", "odd_generator"
            )
        return KreinAlgebra(np.array(mats), U, odd_generator=e_coords, tol=tol)
    raise InstanceFormatError(
        "kind must be 'function_algebra' or 'matrix_algebra'", "kind"
    )
