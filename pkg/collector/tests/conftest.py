from __future__ import annotations

import os
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

COLLECTOR_CMD = [sys.executable, "-m", "rundiff_collector.cli"]

SCALE_CALC = """\
def scale(values, factor):
    total = 0
    for value in values:
        total = total + value * factor
    count = len(values)
    return total * count
"""

SCALE_FMT = """\
def describe(total):
    return "total=" + str(total)
"""

SCALE_CHECK = """\
from calc import scale
from fmt import describe

result = scale([2, 3], 10)
print(describe(result))
"""


def write_project(root: Path, files: dict[str, str]) -> Path:
    root.mkdir(parents=True, exist_ok=True)
    for name, content in files.items():
        path = root / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(content)
    return root


@pytest.fixture
def scale_project(tmp_path) -> Path:
    return write_project(
        tmp_path / "proj",
        {"calc.py": SCALE_CALC, "fmt.py": SCALE_FMT, "run_check.py": SCALE_CHECK},
    )


def run_collector(
    root: Path,
    manifest: str,
    test_command: list[str],
    depth: int = 1,
    out_name: str = "trace.json",
    extra: list[str] | None = None,
) -> tuple[subprocess.CompletedProcess, Path]:
    manifest_path = root / "manifest.txt"
    manifest_path.write_text(manifest)
    out_path = root / out_name
    command = [
        *COLLECTOR_CMD,
        "--breakpoints", str(manifest_path),
        "--depth", str(depth),
        "--out", str(out_path),
        *(extra or []),
        "--",
        *test_command,
    ]
    proc = subprocess.run(command, cwd=root, capture_output=True, text=True, timeout=60)
    return proc, out_path


def rundiff_executable() -> list[str]:
    exe = shutil.which("rundiff")
    if exe:
        return [exe]
    return [sys.executable, "-m", "rundiff.cli"]


def collector_executable() -> str:
    exe = shutil.which("rundiff-collect")
    if exe is None:
        pytest.skip("rundiff-collect is not installed on PATH")
    return exe


def run_rundiff(args: list[str], cwd: Path | None = None) -> subprocess.CompletedProcess:
    env = dict(os.environ)
    return subprocess.run(
        rundiff_executable() + args, cwd=cwd, capture_output=True, text=True, env=env, timeout=120
    )
