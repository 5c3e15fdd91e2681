#!/usr/bin/env python3
"""
Run foalkit as a command:
    python -m foalkit <command> [options]

For help:
    python -m foalkit --help
"""

import sys
from .cli import main

if __name__ == '__main__':
    sys.exit(main())
