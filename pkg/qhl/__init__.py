"""Exact q-fundamental quasisymmetric and Hall-Littlewood function computations."""

import tomllib
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

_PYPROJECT = Path(__file__).resolve().parent.parent / "pyproject.toml"


def _source_version() -> str:
    try:
        with _PYPROJECT.open("rb") as fh:
            return tomllib.load(fh)["project"]["version"]
    except (OSError, KeyError, tomllib.TOMLDecodeError):
        return "0.0.0-dev"


try:
    __version__ = version("qhl")
except PackageNotFoundError:  # source checkout without installed metadata
    __version__ = _source_version()
