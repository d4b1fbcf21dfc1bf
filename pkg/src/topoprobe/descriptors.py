"""Power-weighted lifespan sums over barcodes.

The degree-i descriptor with exponent alpha is the sum of
(death - birth)^alpha over the finite intervals of degree i. Infinite
intervals are excluded (the sum would be undefined otherwise); at
alpha = 0 the value is simply the count of finite positive-length
intervals. For alpha = 1, degree 0, the value equals the total edge
length of the Euclidean minimum spanning tree.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegreeUnavailable, NegativeAlpha
from .persistence import Barcode


@dataclass(frozen=True)
class DescriptorValue:
    alpha: float
    degree: int
    value: float
    n_intervals: int

    def to_json_obj(self) -> dict:
        return {
            "alpha": self.alpha,
            "degree": self.degree,
            "value": self.value,
            "n_intervals": self.n_intervals,
        }


def lifespan_sum(barcode: Barcode, degree: int = 0, alpha: float = 1.0) -> DescriptorValue:
    """Sum of lifespans^alpha over finite intervals of the given degree."""
    if alpha < 0:
        raise NegativeAlpha(f"alpha must be >= 0, got {alpha}")
    if degree > barcode.max_degree:
        raise DegreeUnavailable(
            f"barcode holds degrees <= {barcode.max_degree}, asked for {degree}"
        )
    finite = barcode.finite_of_degree(degree)
    value = float(sum(iv.lifespan ** alpha for iv in finite))
    return DescriptorValue(alpha=alpha, degree=degree, value=value, n_intervals=len(finite))
