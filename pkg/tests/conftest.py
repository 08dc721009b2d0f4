import pytest
from hypothesis import strategies as st

from condnorm import kernels
from condnorm.expr import Atom, ExprUniverse, If

BACKENDS = [("python", kernels.python_backend)]
if kernels.compiled_backend is not None:
    BACKENDS.append(("cython", kernels.compiled_backend))


@pytest.fixture(params=[b for _, b in BACKENDS], ids=[n for n, _ in BACKENDS])
def backend(request):
    return request.param


@pytest.fixture(scope="session")
def universe3():
    return list(ExprUniverse(3, ("a", "b")))


@pytest.fixture(scope="session")
def universe2():
    return list(ExprUniverse(2, ("a", "b")))


def exprs(alphabet=("a", "b", "c"), max_leaves=30):
    atoms = st.sampled_from(alphabet).map(Atom)
    return st.recursive(
        atoms,
        lambda kids: st.builds(If, kids, kids, kids),
        max_leaves=max_leaves,
    )


# Filled by tests/test_acceptance.py, printed at the end of the run.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
