from .montecarlo import McConfig, McResult, binomial_stderr, simulate, wilson_stderr

__all__ = ["McConfig", "McResult", "binomial_stderr", "simulate", "wilson_stderr"]
