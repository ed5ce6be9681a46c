from __future__ import annotations

import sys
from pathlib import Path

import pytest


def _add_component_src_to_sys_path() -> None:
    root = Path(__file__).resolve().parents[1]
    for group in ("packages", "apps"):
        group_dir = root / group
        if not group_dir.exists():
            continue
        for component in sorted(group_dir.iterdir()):
            src = component / "src"
            if src.is_dir() and str(src) not in sys.path:
                sys.path.insert(0, str(src))


_add_component_src_to_sys_path()


@pytest.fixture(scope="session")
def fig1a():
    from delay_harness import load_preset

    return load_preset("fig1a")


@pytest.fixture(scope="session")
def fig1b():
    from delay_harness import load_preset

    return load_preset("fig1b")
