import os
import sys

import pytest

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
FIXTURE_BIN = os.path.join(REPO_ROOT, "fixtures", "bin")
SPEC_DIR = os.path.join(REPO_ROOT, "fixtures", "specs")
BROKEN_DIR = os.path.join(REPO_ROOT, "fixtures", "broken")
GOLDEN_DIR = os.path.join(REPO_ROOT, "fixtures", "golden")

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))


@pytest.fixture(scope="session", autouse=True)
def fixture_bin_on_path():
    """Fixture programs are addressed by bare name in the spec files."""
    old = os.environ.get("PATH", "")
    os.environ["PATH"] = FIXTURE_BIN + os.pathsep + old
    yield
    os.environ["PATH"] = old


@pytest.fixture
def spec_path():
    def _get(name: str) -> str:
        return os.path.join(SPEC_DIR, name)

    return _get


def fixture_spec_paths():
    return sorted(
        os.path.join(SPEC_DIR, n)
        for n in os.listdir(SPEC_DIR)
        if n.endswith(".xml")
    )


def broken_spec_paths():
    return sorted(
        os.path.join(BROKEN_DIR, n)
        for n in os.listdir(BROKEN_DIR)
        if n.endswith(".xml")
    )
