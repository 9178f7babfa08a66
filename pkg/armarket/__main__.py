"""Allow ``python -m armarket``."""

import sys

from armarket.experiments.main import main

if __name__ == "__main__":
    sys.exit(main())
