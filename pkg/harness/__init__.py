# Synthetic experiments, dataset I/O and published fixtures
