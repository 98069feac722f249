import math

import numpy as np
import pytest

from starergodic.appendix import appendix_density, appendix_fixed_dims, appendix_g_fixed_vectors, appendix_operator
from starergodic.errors import PreconditionError


def test_operator_shape():
    s = appendix_operator(1)
    assert s.U_mat.shape == (6, 5)
    assert int(s.U_mat.sum()) == 5 and set(np.unique(s.U_mat)) == {0.0, 1.0}


@pytest.mark.parametrize("m", [1, 2, 5, 10, 33])
def test_fixed_dimensions(m):
    assert appendix_fixed_dims(appendix_operator(m)) == (2, 1)


def test_fixed_vector_in_dense_subspace_is_omega():
    v = appendix_g_fixed_vectors(appendix_operator(4))
    assert v.shape[1] == 1
    v = v[:, 0] / v[0, 0]
    np.testing.assert_allclose(v, np.eye(len(v))[0], atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 4, 9, 50, 100])
def test_density_is_inverse_sqrt(n):
    assert appendix_density(n) == pytest.approx(1 / math.sqrt(n), abs=1e-12)


def test_density_range_checks():
    with pytest.raises(PreconditionError):
        appendix_density(5, appendix_operator(3))
    with pytest.raises(PreconditionError):
        appendix_density(0)
    with pytest.raises(PreconditionError):
        appendix_operator(0)
