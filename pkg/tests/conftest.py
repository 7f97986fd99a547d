from pathlib import Path

import numpy as np
import pytest

from src.probkit import Channel, JointPmf
from src.regions import SourceSpec

SOURCES_DIR = Path(__file__).resolve().parent.parent / "config" / "sources"


@pytest.fixture
def xor_source() -> SourceSpec:
    """Omniscient helper over two independent fair bits."""
    return SourceSpec.from_receivers(JointPmf.uniform((2, 2)), name="xor-helper")


@pytest.fixture
def noiseless_source() -> SourceSpec:
    """Single receiver with X_1 = Z, a fair bit."""
    return SourceSpec(JointPmf((2, 2), np.array([[0.5, 0.0], [0.0, 0.5]])), name="noiseless")


@pytest.fixture
def independent_source() -> SourceSpec:
    """Single receiver independent of Z."""
    return SourceSpec(JointPmf.uniform((2, 2)), name="independent")


@pytest.fixture
def bsc_source() -> SourceSpec:
    """Fair Z seen through a BSC(0.11)."""
    return SourceSpec.from_channels(np.array([0.5, 0.5]), [Channel.binary_symmetric(0.11)], name="bsc")


@pytest.fixture
def copy_bsc_source() -> SourceSpec:
    """Fair Z, X_1 = Z and X_2 = BSC(0.11)(Z)."""
    return SourceSpec.from_channels(
        np.array([0.5, 0.5]), [Channel.identity(2), Channel.binary_symmetric(0.11)], name="copy-bsc"
    )


@pytest.fixture
def correlated_pair() -> JointPmf:
    """X_1 = X_2 fair bit."""
    return JointPmf((2, 2), np.array([[0.5, 0.0], [0.0, 0.5]]))


@pytest.fixture
def independent_pair() -> JointPmf:
    return JointPmf.uniform((2, 2))


@pytest.fixture
def source_file():
    def path(name: str) -> Path:
        return SOURCES_DIR / f"{name}.yaml"

    return path
