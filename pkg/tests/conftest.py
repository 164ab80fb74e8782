import numpy as np
import pytest

from cohdistill import PureCoherentState

#: the worked 4-level example used throughout: populations of the source
WORKED_SQUARES = (0.35, 0.3, 0.25, 0.1)
#: populations of its no-waste intermediate state
WORKED_CHI_SQUARES = (0.35, 0.35, 0.2, 0.1)


def make_state(squares) -> PureCoherentState:
    """Canonical state from exact squared amplitudes."""
    sq = np.sort(np.asarray(squares, dtype=float))[::-1]
    return PureCoherentState(np.sqrt(sq))


def random_corpus(d, count, seed):
    """Full-support canonical states with flat-Dirichlet populations."""
    rng = np.random.Generator(np.random.Philox(key=seed))
    sq = rng.dirichlet(np.ones(d), size=count)
    sq = np.sort(sq, axis=1)[:, ::-1]
    return [PureCoherentState(np.sqrt(row)) for row in sq]


@pytest.fixture
def worked_state():
    return make_state(WORKED_SQUARES)


@pytest.fixture
def worked_chi():
    return make_state(WORKED_CHI_SQUARES)
