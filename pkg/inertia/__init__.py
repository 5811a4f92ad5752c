# Numerical core: spatial algebra, parameter spaces, consistency checks,
# regressor construction and the identification solvers.
