import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make oracles importable

from loopsmith import Engine, load_config
from loopsmith.config import with_mock_stack

_ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def record_criterion(name: str, passed: bool, detail: str = "") -> None:
    _ACCEPTANCE_RESULTS.append((name, passed, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, passed, detail in _ACCEPTANCE_RESULTS:
        status = "PASS" if passed else "FAIL"
        suffix = f"  ({detail})" if detail else ""
        terminalreporter.write_line(f"{status}  {name}{suffix}")


@pytest.fixture(scope="session")
def warmed_kernels():
    from loopsmith import dsp

    dsp.warmup()
    return True


@pytest.fixture
def engine_factory(tmp_path):
    """Engines on throwaway asset roots with the deterministic mock stack."""
    counter = {"n": 0}

    def make(seed: int = 42, **overrides) -> Engine:
        counter["n"] += 1
        root = tmp_path / f"assets{counter['n']}"
        config = load_config(asset_root=str(root), seed=seed, **overrides)
        return Engine(with_mock_stack(config))

    return make


@pytest.fixture
def engine(engine_factory):
    return engine_factory(loop_seconds=2.0)


DATA_DIR = Path(__file__).parent / "data"
