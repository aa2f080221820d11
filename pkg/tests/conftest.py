from importlib import resources

import pytest
from hypothesis import HealthCheck, settings

from seqcalc.parser import parse_corpus

settings.register_profile(
    "suite",
    deadline=None,
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def corpus():
    text = resources.files("seqcalc").joinpath("data/paper.corpus").read_text(encoding="utf-8")
    return parse_corpus(text)


@pytest.fixture(scope="session")
def corpus_by_name(corpus):
    return {e.name: e for e in corpus}
