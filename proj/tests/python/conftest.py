# SPDX-License-Identifier: Apache-2.0
import pathlib

import pytest

import promnl

ROOT = pathlib.Path(__file__).resolve().parents[2]
NOW = 1760000000


@pytest.fixture(scope="session")
def session():
    return promnl.Session(validate=False)


@pytest.fixture(scope="session")
def live_session():
    s = promnl.Session(fixtures=ROOT / "data" / "fixtures" / "prometheus")
    s.wait_ready()
    return s
