"""Shared fixtures: the expensive end-to-end deployment run is computed
once per session and reused by the sim and acceptance tests."""

import pytest

from marsdrop import builtin_exponential
from marsdrop.sim import MissionConfig, run_scenario
from marsdrop.vehicle import preset


@pytest.fixture(scope="session")
def mad_vehicle():
    return preset("mad")


@pytest.fixture(scope="session")
def exp_atm():
    return builtin_exponential()


@pytest.fixture(scope="session")
def deployment_log(mad_vehicle, exp_atm):
    """Baseline MAD deployment: release at 6000 m, 30 m/s, alpha held 90 deg."""
    cfg = MissionConfig(vehicle=mad_vehicle, atmosphere=exp_atm)
    return run_scenario(cfg)
