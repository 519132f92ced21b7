"""Cantor series expansions over eventually periodic basic sequences.

Digit extraction, orbit points T_{Q,n}(x), block statistics, discrepancy,
and the g / g^2 adversarial construction.
"""

from .basic_sequence import BasicSequence, bases_equivalent, period_product, q_at, rotate_period
from .block_stats import (
    Block,
    UnitInterval,
    aligned_block,
    block_interval,
    count_block,
    count_in_interval,
    indicator,
    occurrence_positions,
    occurrence_positions_via_orbit,
    qn_of_block,
)
from .constructions import (
    AdversarialResult,
    adversarial_frequency,
    build_adversarial,
    champernowne_digits,
    champernowne_stream,
    limiting_frequency,
)
from .errors import InequivalentBasesError, NotPeriodicError, StreamExhaustedError, UnresolvedBoundaryError
from .expansion import (
    DigitStream,
    OrbitApprox,
    convert_base_digits,
    extract_digits,
    group_base_digits,
    orbit_point,
    orbit_point_from_stream,
    orbit_points,
    reconstruct,
    shift_to_periodic,
    stream_orbit_points,
)
from .ud_stats import (
    VerdictReport,
    distribution_normality_report,
    empirical_frequency,
    q_normality_report,
    star_discrepancy,
)

__version__ = "0.1.0"
