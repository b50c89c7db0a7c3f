"""Datasets shipped with the package."""

from importlib import resources

from ..core import Dataset, parse_dataset

NAMES = ("tiny", "data1", "data3", "symmetric20")


def path(name: str):
    return resources.files(__name__).joinpath(f"{name}.txt")


def load(name: str) -> Dataset:
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}; choose from {NAMES}")
    return parse_dataset(path(name).read_text())
