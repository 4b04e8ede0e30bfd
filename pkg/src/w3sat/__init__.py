"""Width-3 clause saturation for 3-SAT, with brute-force oracles and an
experiment harness that measures where saturation and ground truth agree."""

__version__ = "0.1.0"
