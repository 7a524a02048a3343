import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from saradon import BoxSplineGenerator, LatticeRegion, ProjectionVector, RadonProfile  # noqa: E402
from saradon.recon import build_system  # noqa: E402

PAPER_THETA = 1.2208


@pytest.fixture
def gen11():
    return BoxSplineGenerator(1, 1)


@pytest.fixture
def paper_proj():
    return ProjectionVector.from_angle(PAPER_THETA)


@pytest.fixture
def region04():
    return LatticeRegion((0, 4, 0, 4))


@pytest.fixture
def paper_profile(gen11, paper_proj):
    return RadonProfile(gen11, paper_proj)


@pytest.fixture
def paper_system(paper_profile, region04):
    return build_system(paper_profile, region04)


# one PASS/FAIL line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
