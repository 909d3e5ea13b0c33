import pytest

from utimage.fields import FieldSpec


@pytest.fixture
def rational():
    return FieldSpec.rational()


@pytest.fixture
def gf2():
    return FieldSpec.gf(2)


@pytest.fixture
def gf3():
    return FieldSpec.gf(3)


@pytest.fixture
def gf5():
    return FieldSpec.gf(5)


def mat(n, spec, triples):
    """StrictUT from (row, col, int_value) triples."""
    from utimage.triangular import StrictUT

    return StrictUT.from_entries(
        n, spec, [(r, c, spec.scalar(v)) for r, c, v in triples]
    )
