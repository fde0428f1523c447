"""
Configuración de pytest: pruebas largas solo con --runslow
"""

import pytest


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="Ejecuta también las pruebas marcadas como slow")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: prueba de extremo a extremo de larga duración")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="necesita --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
