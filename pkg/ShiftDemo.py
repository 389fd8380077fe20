#!/usr/bin/env python
"""
Print the smallest singular value of the truncated S - P as the size grows.

S is the unilateral shift and P = E + (I-E)(S + S*)E with E the projection onto
the even-numbered basis vectors. S - P is invertible as an operator on the
infinite sequence space; the truncations show how sigma_min settles.
"""

import argparse
import logging
import sys

from pyclean.Witness.Tables import truncated_shift_trajectory


def main():
    logging.basicConfig(stream=sys.stderr, level=logging.WARNING)
    parser = argparse.ArgumentParser(description="Truncated shift trajectory")
    parser.add_argument('--max-n', type=int, default=256,
                        help="Largest even size")
    parser.add_argument('--step', type=int, default=2,
                        help="Step between sizes (even)")
    options = parser.parse_args()

    sizes = range(2, options.max_n + 1, options.step)
    trajectory = truncated_shift_trajectory(sizes)
    print("%6s  %-22s  %-22s" % ('n', 'sigma_min', '|P|'))
    for record in trajectory.records:
        print("%6i  %-22.17g  %-22.17g" % (record.n, record.sigma_min, record.p_norm))
    print("Trend: %s" % (trajectory.trend,))
    return 0


if __name__ == "__main__":
    sys.exit(main())
