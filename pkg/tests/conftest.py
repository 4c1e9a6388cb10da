import sys
from pathlib import Path

import pytest

from linkfloer import complex as cx
from linkfloer.fixtures import PIPELINES, base_complex
from linkfloer.linkconfig import Coloring
from linkfloer.quasistab import Pipeline, build_pipeline

sys.path.insert(0, str(Path(__file__).parent))

# every complex and map built anywhere in the suite is checked against the grading law
cx.STRICT_GRADING = True


@pytest.fixture(autouse=True)
def _strict_grading():
    assert cx.STRICT_GRADING
    yield
    cx.STRICT_GRADING = True


def pipeline(name: str, coloring=None):
    p = Pipeline.from_json(PIPELINES[name])
    if coloring is not None:
        p.coloring = coloring
    return build_pipeline(p)


def grid(name: str, coloring: str | None = "trivial"):
    C = base_complex(name)
    if coloring == "trivial":
        return C.with_coloring(Coloring.trivial(C.cfg))
    if coloring and coloring.startswith("merge_w:"):
        return C.with_coloring(Coloring.merge_w(C.cfg, coloring.split(":", 1)[1]))
    return C


@pytest.fixture
def two_pair():
    return pipeline("two_pair_unknot")


@pytest.fixture
def two_pair_merged():
    return pipeline("two_pair_unknot_merged")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None) if mod else None
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, 9):
        if n in results:
            ok, detail = results[n]
            terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
        else:
            terminalreporter.write_line(f"criterion {n}: FAIL  (not run)")
