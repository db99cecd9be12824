import pytest
from hypothesis import HealthCheck, settings

from soaguard.pipeline import train_models
from soaguard.synth import generate_corpus

settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def small_corpus():
    """Training corpus shared by pipeline/service/cli tests. 250 documents is
    the smallest size that reliably covers every minority label."""
    return generate_corpus(250, seed=3, noise=0.05)


@pytest.fixture(scope="session")
def bundle(small_corpus):
    return train_models(small_corpus, seed=0)


@pytest.fixture(scope="session")
def eval_corpus():
    return generate_corpus(60, seed=7, noise=0.05)
