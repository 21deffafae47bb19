import json
from pathlib import Path

import pytest

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def pins():
    with open(DATA_DIR / "regression_pins.json", encoding="utf-8") as handle:
        return json.load(handle)


@pytest.fixture(scope="session")
def pinned_entangled_coeffs(pins):
    return [complex(re, im) for re, im in pins["pinned_entangled"]["coeffs"]]
