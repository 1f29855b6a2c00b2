import hypothesis

# Exact rational arithmetic has wildly varying per-example cost, so wall-clock
# deadlines only produce flaky failures here.
hypothesis.settings.register_profile(
    "exact", deadline=None, max_examples=60, derandomize=True
)
hypothesis.settings.load_profile("exact")
