"""Shared fixtures: a seeded rng and a guard that restores the resource caps."""

from __future__ import annotations

import random

import pytest

from modules.config import Config

_CAPS = ("MAX_DEGREE", "MAX_SLOTS", "MAX_LYNDON", "MAX_PIJ_WEIGHT",
         "MAX_GENERIC_VARS", "EXACT_MAX_N", "EXACT_MAX_DEGREE")


@pytest.fixture(autouse=True)
def restore_caps(monkeypatch):
    # CLI flags and tests both mutate Config; monkeypatch puts every cap back
    for name in _CAPS:
        monkeypatch.setattr(Config, name, getattr(Config, name))
    yield


@pytest.fixture
def rng():
    return random.Random("chalg-tests")
