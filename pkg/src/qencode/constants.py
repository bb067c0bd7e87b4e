"""Oracle-derived constants shipped with the package (``data/constants.txt``)."""

from importlib import resources

CONSTANTS_FILE = "constants.txt"


def parse_constants(text: str) -> dict:
    values = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition("=")
        values[key.strip()] = float(value)
    return values


def read_text() -> str:
    return resources.files("qencode").joinpath("data", CONSTANTS_FILE).read_text()


_VALUES = parse_constants(read_text())

ODD_N_LINEAR_ANGLE = _VALUES["ODD_N_LINEAR_ANGLE"]
SHOR_TRIPLET_FROM_ZERO = (_VALUES["SHOR_TRIPLET_FROM_ZERO_PHASE0"],
                          _VALUES["SHOR_TRIPLET_FROM_ZERO_PHASE1"])
SHOR_TRIPLET_FROM_ONE = (_VALUES["SHOR_TRIPLET_FROM_ONE_PHASE0"],
                         _VALUES["SHOR_TRIPLET_FROM_ONE_PHASE1"])
P2_N3_RELATIVE_PHASE = _VALUES["P2_N3_RELATIVE_PHASE"]


def all_values() -> dict:
    return dict(_VALUES)
