"""Residual reports shared by the verifiers."""
from dataclasses import dataclass


@dataclass
class ResidualReport:
    passed: bool
    checked_through: int
    first_failure: object = None
    residual: object = None

    def __str__(self):
        if self.passed:
            return "PASS through x^%d" % self.checked_through
        return "FAIL at x^%d (residual %s)" % (self.first_failure, self.residual)


def first_nonzero(values, modulus=0):
    for i, c in enumerate(values):
        if (c % modulus if modulus else c):
            return i
    return None
