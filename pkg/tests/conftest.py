import numpy as np
import pytest

from kreinalg import (
    KreinAlgebra,
    build_function_algebra,
    conjugate_algebra,
    random_unitary,
)


@pytest.fixture(scope="session")
def fn1():
    return build_function_algebra(1)


@pytest.fixture(scope="session")
def fn3():
    return build_function_algebra(3)


@pytest.fixture(scope="session")
def conj3(fn3):
    rng = np.random.default_rng(2024)
    return conjugate_algebra(fn3, random_unitary(fn3.ambient_dim, rng))


@pytest.fixture(scope="session")
def m2_algebra():
    """Full 2x2 matrix algebra with trivial grading: noncommutative, no odd part."""
    basis = np.zeros((4, 2, 2), dtype=complex)
    basis[0, 0, 0] = 1
    basis[1, 0, 1] = 1
    basis[2, 1, 0] = 1
    basis[3, 1, 1] = 1
    return KreinAlgebra(basis, np.eye(2))


@pytest.fixture(scope="session")
def nonfull_algebra():
    """Two-point function algebra with the odd element over one point removed."""
    base = build_function_algebra(2)
    basis = np.delete(base.basis, 3, axis=0)
    return KreinAlgebra(basis, base.symmetry_unitary)


@pytest.fixture(scope="session")
def broken_generator_algebra():
    """Function algebra whose recorded odd generator is scaled by 2."""
    base = build_function_algebra(2)
    return KreinAlgebra(
        base.basis,
        base.symmetry_unitary,
        unit_coords=base.unit_coords,
        odd_generator=2.0 * base.odd_generator_coords,
    )


@pytest.fixture(scope="session")
def no_generator_algebra():
    """Function algebra with the odd generator withheld; otherwise intact."""
    base = build_function_algebra(2)
    return KreinAlgebra(base.basis, base.symmetry_unitary, unit_coords=base.unit_coords)
