import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "ordcalc",
    deadline=None,
    max_examples=int(os.environ.get("ORDCALC_EXAMPLES", "40")),
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("ordcalc")
