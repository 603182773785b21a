"""freeprob: exact and Monte Carlo computations for classical and free probability."""
__version__ = "0.1.0"
