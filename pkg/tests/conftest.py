import pytest

from wordengage.corpus import build_profiles, load_corpus
from wordengage.lexicon import load_demo_lexicon
from wordengage.synth import SynthConfig, generate_corpus

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def lexicon():
    return load_demo_lexicon()


@pytest.fixture(scope="session")
def planted_corpus(lexicon):
    """2000 users planted with both correlation tables (seed fixed)."""
    synth = generate_corpus(SynthConfig(n_users=2000, seed=7), lexicon)
    corpus = load_corpus(synth.text())
    profiles, exclusions = build_profiles(corpus.users, lexicon)
    return {"synth": synth, "corpus": corpus, "profiles": profiles, "exclusions": exclusions}


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
