from __future__ import annotations

from pathlib import Path

import pytest

from rundiff.diffcore import SourceFile

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def load_fixture_source(name: str) -> SourceFile:
    return SourceFile.from_path(str(FIXTURES / name), name)


@pytest.fixture
def variance_pair() -> tuple[SourceFile, SourceFile]:
    return load_fixture_source("variance_original.java"), load_fixture_source(
        "variance_patched.java"
    )


@pytest.fixture
def bucket_pair() -> tuple[SourceFile, SourceFile]:
    return load_fixture_source("bucket_original.java"), load_fixture_source("bucket_patched.java")
