"""Pytest fixtures for the ultrashift test suite."""
from pathlib import Path

import pytest

from ultrashift.crossed import CrossedProduct
from ultrashift.paction import PartialAction
from ultrashift.ug_files import load_presentation

PRESENTATIONS = Path(__file__).resolve().parent.parent / "presentations"


@pytest.fixture(scope="session")
def presentations_dir() -> Path:
    """Directory holding the shipped ``.ug`` presentations."""
    return PRESENTATIONS


@pytest.fixture(scope="session")
def example1():
    """e_1 from v_1 onto {v_3, v_4, ...}; e_i from v_i onto every vertex."""
    return load_presentation(PRESENTATIONS / "example1.ug")


@pytest.fixture(scope="session")
def matrix_a():
    return load_presentation(PRESENTATIONS / "matrixA.ug")


@pytest.fixture(scope="session")
def matrix_b():
    return load_presentation(PRESENTATIONS / "matrixB.ug")


@pytest.fixture(scope="session")
def matrix_c():
    return load_presentation(PRESENTATIONS / "matrixC.ug")


@pytest.fixture(scope="session")
def tiny():
    """The finite two-vertex ultragraph."""
    return load_presentation(PRESENTATIONS / "tiny.ug")


@pytest.fixture(scope="session")
def action1(example1):
    return PartialAction(example1)


@pytest.fixture(scope="session")
def action_b(matrix_b):
    return PartialAction(matrix_b)


@pytest.fixture(scope="session")
def algebra1(example1):
    return CrossedProduct(example1)


@pytest.fixture(scope="session")
def algebra_b(matrix_b):
    return CrossedProduct(matrix_b)


@pytest.fixture
def write_file(tmp_path):
    """Write text to a file under ``tmp_path`` and return its path."""
    def write(name: str, text: str) -> Path:
        path = tmp_path / name
        path.write_text(text)
        return path
    return write
