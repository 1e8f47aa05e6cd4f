import os
from pathlib import Path

import numpy as np
import pytest

from pcamlp.dataio import load_bccd
from pcamlp.synthetic import synthetic_bccd

DATA_DIR = Path(__file__).parent / "data"


def bccd_path() -> Path:
    return Path(os.environ.get("PCAMLP_BCCD", DATA_DIR / "dataR2.csv"))


@pytest.fixture(scope="session")
def bccd():
    """The real 116-row Coimbra csv. Fails (not skips) when it is absent."""
    path = bccd_path()
    if not path.is_file():
        pytest.fail(f"BCCD csv not found at {path}; copy dataR2.csv there or set PCAMLP_BCCD",
                    pytrace=False)
    return load_bccd(path)


@pytest.fixture(scope="session")
def synth():
    return synthetic_bccd(seed=0)


@pytest.fixture
def synth_csv(tmp_path, synth):
    from pcamlp.dataio import render_bccd
    p = tmp_path / "synthetic_bccd.csv"
    p.write_text(render_bccd(synth))
    return p


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {text}")
