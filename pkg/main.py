#!/usr/bin/env python3
import sys

try:
    import sympy  # noqa: F401
except ImportError:
    import logging

    logging.basicConfig(level=logging.ERROR, format="[%(levelname)s] %(message)s")
    logging.error("sympy is not installed.")
    logging.error("Install it using: pip install -r requirements.txt")
    sys.exit(1)

from tstruct_lab.cli import main

if __name__ == "__main__":
    main()
