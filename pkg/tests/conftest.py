"""Test configuration and fixtures"""

import logging

import pytest
from fastapi.testclient import TestClient

from app.config import Settings
from app.fusion import parse_word
from app.qarith import context_from_q

# Configure test logging
logging.basicConfig(level=logging.INFO)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: acceptance-scale sweeps (deselect with '-m \"not slow\"')")


@pytest.fixture
def test_settings(tmp_path):
    """Provide test settings"""
    return Settings(DEBUG=True, LOG_DIR=str(tmp_path), PRECISION_BITS=128, SEED=7)


@pytest.fixture
def test_client(tmp_path, monkeypatch):
    """Create a test client for the FastAPI app; logs go to a temp dir"""
    monkeypatch.setenv("LOG_DIR", str(tmp_path))
    from app.config import get_settings
    get_settings.cache_clear()
    from app.main import app
    with TestClient(app) as client:
        yield client
    get_settings.cache_clear()


@pytest.fixture(scope="session")
def ctx_one():
    return context_from_q(1)


@pytest.fixture(scope="session")
def ctx_half():
    return context_from_q("0.5")


@pytest.fixture(scope="session", params=["0.2", "0.5", "0.9", "1"])
def ctx(request):
    """Numeric context at each q of the standard grid"""
    return context_from_q(request.param)


@pytest.fixture
def w():
    """Shorthand word constructor: w("ub")"""
    return parse_word
