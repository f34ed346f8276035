import pytest

from properads.corpus import generate_corpus


@pytest.fixture(scope="session")
def corpus_wf_45():
    """Connected wheel-free graphs, <= 4 vertices, <= 5 internal edges."""
    return generate_corpus(4, 5, 2, wheeled=False)


@pytest.fixture(scope="session")
def corpus_w_45():
    """Connected graphs, <= 4 vertices, <= 5 internal edges."""
    return generate_corpus(4, 5, 2, wheeled=True)


@pytest.fixture(scope="session")
def corpus_wf_33():
    return generate_corpus(3, 3, 2, wheeled=False)


@pytest.fixture(scope="session")
def corpus_w_33():
    return generate_corpus(3, 3, 2, wheeled=True)


@pytest.fixture(scope="session")
def corpus_wf_32():
    return generate_corpus(3, 2, 2, wheeled=False)


@pytest.fixture(scope="session")
def corpus_w_22():
    return generate_corpus(2, 2, 2, wheeled=True)
