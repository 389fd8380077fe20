#!/usr/bin/env python
"""
Command line for the certified clean decompositions.

Run `python RunClean.py --help` for the subcommands. The default verification
tolerance may be overridden with the PYCLEAN_TOLERANCE environment variable.
"""

import logging
import sys

from pyclean.Host.Commands import run_command


def main():
    logging.basicConfig(stream=sys.stderr, level=logging.WARNING,
                        format="%(levelname)s: %(name)s: %(message)s")
    return run_command(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
