# Numerical core, settings, errors and artifact helpers
