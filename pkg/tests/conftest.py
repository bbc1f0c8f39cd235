import os

from hypothesis import settings

# fixed example sequences keep runs reproducible; HYPOTHESIS_PROFILE=explore draws fresh ones
settings.register_profile("repro", derandomize=True, database=None)
settings.register_profile("explore", database=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repro"))
