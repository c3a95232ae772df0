import numpy as np
import pytest

import maxcons as mc
from maxcons.experiments import STREAM_GRAPH, STREAM_INIT, STREAM_S


@pytest.fixture(scope="session")
def reference_setup():
    """Graph, private data, and init seed of the pinned reference scenarios."""
    seed = mc.REFERENCE_SEED
    g = mc.generate_rgg(10, seed=mc.derive_seed(seed, STREAM_GRAPH))
    s = np.random.default_rng(mc.derive_seed(seed, STREAM_S)).normal(0.0, 1.0, 10)
    return g, s, mc.derive_seed(seed, STREAM_INIT)


@pytest.fixture()
def path3():
    return mc.Graph(3, ((0, 1), (1, 2)))


@pytest.fixture()
def k2():
    return mc.Graph(2, ((0, 1),))
