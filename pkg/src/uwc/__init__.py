"""Zero-error wiretap codes over uncertain channels and secure remote estimation."""

__version__ = "0.1.0"

from .channel import (
    Alphabet,
    Code,
    ProductChannel,
    UncertainChannel,
    WiretapChannel,
    compose,
    is_zero_error_code,
    make_channel,
    product,
    wiretap_code_profile,
)
from .channel_io import channel_hash, format_channel, load_channel, parse_channel
from .confusability import (
    confusability_graph,
    eavesdropper_hypergraph,
    restrict,
    square_power,
    strong_power,
)
from .elimination import count_secure_words, eliminate, injective_secrecy_capacity
from .errors import ParseError, UWCError
from .estimation import (
    DisturbanceSource,
    Selector,
    TransmissionScheme,
    build_scheme,
    decoding_error_bound,
    eavesdropper_diameter,
    security_rate,
    simulate,
    single_phase_scheme,
    two_phase_scheme,
)
from .quantizer import Interval, PlantParams, interval_length, midpoint_closed_form
from .search import (
    SearchBudget,
    capacity_lower_bound,
    concatenate_relabel,
    concatenation_L,
    delta_n,
    max_wiretap_code,
    max_zero_error_code,
    search_wiretap_code,
)
