"""
Entry point for running mipsbench as a module: python -m mipsbench
"""

import sys

from mipsbench.cli.main import main

if __name__ == "__main__":
    sys.exit(main())
