"""Regenerate src/qencode/data/constants.txt from the dense oracle.

    python scripts/derive_constants.py [--check]
"""

import argparse
import sys
from pathlib import Path

from qencode import oracle

TARGET = Path(__file__).resolve().parents[1] / "src" / "qencode" / "data" / "constants.txt"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--check", action="store_true", help="diff against the checked-in file")
    args = parser.parse_args()

    for a, support in oracle._sweep_linear_angle(3):
        print(f"linear angle {a:+.6f}: min GHZ support {support:.15f}")
    text = oracle.format_constants(oracle.derive_all())
    if args.check:
        same = TARGET.read_text() == text
        print("constants file up to date" if same else "constants file differs")
        return 0 if same else 1
    TARGET.write_text(text)
    print(text, end="")
    return 0


if __name__ == "__main__":
    sys.exit(main())
