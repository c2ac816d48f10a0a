from .machines import (
    RESET,
    LimitMachine,
    Transducer,
    run,
    run_ep,
)
from .library import library
from .harness import WitnessPair, verify_reduction
from .adversary import adversary_barCN

__all__ = [
    "RESET",
    "LimitMachine",
    "Transducer",
    "run",
    "run_ep",
    "library",
    "WitnessPair",
    "verify_reduction",
    "adversary_barCN",
]
