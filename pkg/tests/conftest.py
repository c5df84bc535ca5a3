import os

import pytest
from hypothesis import HealthCheck, settings

from almost_rigid.exactalg import cyclotomic_context
from almost_rigid.models import DDSSpec, DVConSpec, DVGenSpec, FMSpec, GdsSpec, build_model

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
VARIETIES = os.path.join(ROOT, "varieties")
AUTOMORPHISMS = os.path.join(ROOT, "automorphisms")


@pytest.fixture(scope="session")
def ctx12():
    return cyclotomic_context(12)


@pytest.fixture(scope="session")
def ctx70():
    return cyclotomic_context(70)


@pytest.fixture(scope="session")
def gds2(ctx12):
    return build_model(GdsSpec(2, sigma=("0", "1")), ctx12)


@pytest.fixture(scope="session")
def gds3roots(ctx12):
    return build_model(GdsSpec(2, sigma=("0", "1", "3")), ctx12)


@pytest.fixture(scope="session")
def dvcon23(ctx12):
    return build_model(DVConSpec(3, (2, 3), "z^3"), ctx12)


@pytest.fixture(scope="session")
def dvcon22(ctx12):
    return build_model(DVConSpec(3, (2, 2), "z^3 + z"), ctx12)


@pytest.fixture(scope="session")
def dvgen_rigid(ctx12):
    return build_model(DVGenSpec(2, (2,), 3, ("1", "y2 + 1")), ctx12)


@pytest.fixture(scope="session")
def fm(ctx70):
    return build_model(FMSpec(3, 4, 5, 2, 2), ctx70)


@pytest.fixture(scope="session")
def fm12(ctx12):
    return build_model(FMSpec(3, 4, 5, 2, 2), ctx12)


@pytest.fixture(scope="session")
def dds(ctx12):
    return build_model(DDSSpec(2, 2, "y1^2", "y2^2"), ctx12)


@pytest.fixture(scope="session")
def request_models(gds2, dvcon23, dvcon22, dvgen_rigid, fm, dds):
    """Session models by fixture name, for hypothesis tests sampling a family."""
    return {
        "gds2": gds2, "dvcon23": dvcon23, "dvcon22": dvcon22,
        "dvgen_rigid": dvgen_rigid, "fm": fm, "dds": dds,
    }
