import hypothesis

hypothesis.settings.register_profile(
    "impsolve", deadline=None, max_examples=40,
    suppress_health_check=[hypothesis.HealthCheck.too_slow],
)
hypothesis.settings.load_profile("impsolve")
