from __future__ import annotations

from pathlib import Path

import pytest

from refsys.fincat import FinSet
from refsys.signature import Signature, load_signature
from refsys.subset_model import build_subset_system

DATA = Path(__file__).resolve().parent.parent / "src" / "refsys" / "data"


def data_file(name: str) -> str:
    return str(DATA / name)


@pytest.fixture(scope="session")
def squaring() -> Signature:
    return load_signature(data_file("squaring.json"))


@pytest.fixture(scope="session")
def z4() -> Signature:
    return load_signature(data_file("z4.json"))


@pytest.fixture(scope="session")
def hoare4() -> Signature:
    return load_signature(data_file("hoare4.json"))


@pytest.fixture(scope="session")
def classifier_sig() -> Signature:
    return load_signature(data_file("classifier.json"))


@pytest.fixture(scope="session")
def trivial2() -> Signature:
    return load_signature(data_file("trivial2.json"))


@pytest.fixture(scope="session")
def day_z2() -> Signature:
    return load_signature(data_file("day_z2.json"))


@pytest.fixture(scope="session")
def day_z3() -> Signature:
    return load_signature(data_file("day_z3.json"))


@pytest.fixture(scope="session")
def arrow_sig() -> Signature:
    return load_signature(data_file("presheaf_arrow.json"))


@pytest.fixture(scope="session")
def small_sys():
    a = FinSet("A", ("a1", "a2"))
    b = FinSet("B", (1, 2, 3))
    return build_subset_system((a, b), name="small")
