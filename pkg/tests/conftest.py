import numpy as np
import pytest

import svadf


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def make_bubble_series(
    n=1000, r_e=0.3, r_f=0.6, c=1.0, alpha=0.5, vol=None, seed=0, x0=0.0
):
    spec = svadf.DgpSpec(
        n=n,
        vol=vol or svadf.VolSpec(),
        bubble=svadf.BubbleSpec(r_e=r_e, r_f=r_f, c=c, alpha=alpha),
        x0=x0,
        seed=seed,
    )
    return svadf.simulate(spec)


def make_walk_series(n=500, seed=0, vol=None):
    spec = svadf.DgpSpec(n=n, vol=vol or svadf.VolSpec(), seed=seed)
    return svadf.simulate(spec)
