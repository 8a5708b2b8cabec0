"""Suite-wide configuration: deterministic numpy error handling."""

import numpy as np
import pytest


@pytest.fixture(autouse=True)
def _strict_float_errors():
    # Silent nan/inf propagation hides real defects in linear algebra.
    old = np.seterr(all="raise", under="ignore")
    yield
    np.seterr(**old)
