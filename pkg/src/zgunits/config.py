"""Runtime configuration knobs (precision ladder, enumeration bounds)."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Config:
    precision: int = 128            # initial working precision, decimal digits
    max_precision_doublings: int = 3
    enum_bound: int = 10**6         # cap for finite-ring / candidate enumeration
    seed: int = 0                   # order of auxiliary primes in saturation
    no_saturation: bool = False     # diagnostic: skip saturation entirely

    def __post_init__(self):
        if self.precision <= 0 or self.max_precision_doublings < 0 or self.enum_bound <= 0:
            raise ValueError("all configuration bounds must be positive")


DEFAULT = Config()
