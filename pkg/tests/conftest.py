import pytest

from kgh import PotentialSpec, QuantumNumbers


@pytest.fixture
def desk_scalar():
    """Scalar-only well: two bound levels at l = 0."""
    return PotentialSpec(mass=1.0, alpha=0.2, q=1.0, v0=0.0, s0=0.1)


@pytest.fixture
def desk_coupled():
    """Equal vector and scalar depths: energy-dependent operator."""
    return PotentialSpec(mass=1.0, alpha=0.2, q=1.0, v0=0.1, s0=0.1)


@pytest.fixture
def desk_q_half():
    """Deformed variant of the scalar well."""
    return PotentialSpec(mass=1.0, alpha=0.2, q=0.5, v0=0.0, s0=0.1)


@pytest.fixture
def deep_scalar():
    """Weakly screened scalar well: seven bound levels at l = 0."""
    return PotentialSpec(mass=1.0, alpha=0.05, q=1.0, v0=0.0, s0=0.1)


@pytest.fixture
def qn_s_wave():
    return QuantumNumbers(dim=3, ell=0, n=0)
