"""Allow ``python -m wildram``."""

import sys

from .cli import main

sys.exit(main())
