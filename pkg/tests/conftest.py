import json
import pathlib

import pytest

DATA_DIR = pathlib.Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def oracle():
    """Frozen oracle values (independent series/quadrature, 25 digits).

    Regenerate with scripts/gen_bessel_oracle.py.
    """
    with open(DATA_DIR / "bessel_oracle.json") as handle:
        return json.load(handle)
