"""Exact kernels, images, and cohomology of composable pairs."""

import random
from fractions import Fraction

import pytest

from rhamcheck.errors import CompositionNonzero, NotACocycle
from rhamcheck.linalg import SparseMatrix, cohomology_pair, kernel_image, solve


def random_matrix(rng, rows, cols, density=0.6):
    entries = {}
    for i in range(rows):
        for j in range(cols):
            if rng.random() < density:
                entries[(i, j)] = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
    return SparseMatrix(rows, cols, entries)


def test_identity_has_trivial_kernel():
    kernel, image, rank = kernel_image(SparseMatrix.identity(2))
    assert kernel == []
    assert rank == 2
    assert image == [[1, 0], [0, 1]]


def test_one_by_two_row():
    m = SparseMatrix.from_rows([[1, 1]])
    kernel, _, rank = kernel_image(m)
    assert rank == 1
    assert len(kernel) == 1
    v = kernel[0]
    # forced by dimension: the kernel is spanned by (1, -1)
    assert v[0] == -v[1] != 0


@pytest.mark.parametrize("seed", range(5))
def test_kernel_vectors_multiply_back_to_zero(seed):
    rng = random.Random(seed)
    m = random_matrix(rng, 6, 6)
    kernel, image, rank = kernel_image(m)
    assert rank + len(kernel) == 6
    for v in kernel:
        assert m.mul_vec(v) == [0] * 6
    # image vectors really are columns of m, hence in the column space
    for w in image:
        assert solve(m, w) is not None


def test_sparse_path_matches_dense():
    # force the sparse fraction-free path with a wide matrix
    rng = random.Random(3)
    wide = random_matrix(rng, 5, 70, density=0.15)
    kernel, _, rank = kernel_image(wide)
    assert rank + len(kernel) == 70
    for v in kernel[:10]:
        assert wide.mul_vec(v) == [0] * 5


def test_cohomology_zero_maps():
    z = SparseMatrix.zero(3, 0)
    z2 = SparseMatrix.zero(0, 3)
    h = cohomology_pair(z, z2)
    assert h.dimension == 3


def test_cohomology_boundary_circle():
    # simplicial cochain complex of the 3-vertex circle in degree 1:
    # delta0: C^0 -> C^1 for edges (01), (02), (12)
    d0 = SparseMatrix.from_rows([[-1, 1, 0], [-1, 0, 1], [0, -1, 1]])
    d1 = SparseMatrix.zero(0, 3)
    h = cohomology_pair(d0, d1)
    assert h.dimension == 1


def test_cohomology_exact_sequence_is_trivial():
    # im(d_prev) = ker(d_next): H = 0
    d_prev = SparseMatrix.from_rows([[1], [0]])
    d_next = SparseMatrix.from_rows([[0, 1]])
    h = cohomology_pair(d_prev, d_next)
    assert h.dimension == 0


def test_composition_checked():
    d_prev = SparseMatrix.identity(2)
    d_next = SparseMatrix.identity(2)
    with pytest.raises(CompositionNonzero):
        cohomology_pair(d_prev, d_next)


def test_class_of_unit_coordinates_and_coboundary_invariance():
    rng = random.Random(17)
    # d_prev maps a 2-dim space into a 4-dim space; d_next kills everything
    d_prev = SparseMatrix.from_rows([[1, 0], [1, 1], [0, 0], [0, 0]])
    d_next = SparseMatrix.zero(0, 4)
    h = cohomology_pair(d_prev, d_next)
    assert h.dimension == 2
    for i, rep in enumerate(h.representatives):
        coords, witness = h.class_of(rep)
        expected = [Fraction(0)] * h.dimension
        expected[i] = Fraction(1)
        assert coords == expected
        assert witness == [0, 0]
        assert all(v == 0 for v in h.d_next.mul_vec(rep))
    for _ in range(10):
        c = [Fraction(rng.randint(-4, 4)) for _ in range(4)]
        w = [Fraction(rng.randint(-4, 4)) for _ in range(2)]
        shifted = [a + b for a, b in zip(c, d_prev.mul_vec(w))]
        coords1, _ = h.class_of(c)
        coords2, _ = h.class_of(shifted)
        assert coords1 == coords2


def test_class_of_rejects_non_cocycle():
    d_prev = SparseMatrix.zero(2, 0)
    d_next = SparseMatrix.from_rows([[1, 0]])
    h = cohomology_pair(d_prev, d_next)
    with pytest.raises(NotACocycle):
        h.class_of([Fraction(1), Fraction(0)])


def test_class_of_reconstructs_vector():
    rng = random.Random(23)
    d_prev = random_matrix(rng, 5, 3, density=0.8)
    # d_next = 0 so every vector is a cocycle
    d_next = SparseMatrix.zero(0, 5)
    h = cohomology_pair(d_prev, d_next)
    for _ in range(10):
        c = [Fraction(rng.randint(-5, 5)) for _ in range(5)]
        coords, witness = h.class_of(c)
        rebuilt = [Fraction(0)] * 5
        for a, rep in zip(coords, h.representatives):
            rebuilt = [r + a * x for r, x in zip(rebuilt, rep)]
        rebuilt = [r + x for r, x in zip(rebuilt, d_prev.mul_vec(witness))]
        assert rebuilt == c
