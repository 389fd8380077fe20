#!/usr/bin/env python
"""
Run a test module of the pyclean suite with branch coverage, or report on
the coverage collected so far.

    python coverage_run.py [--module AllTests] [--clear]
    python coverage_run.py --coverage-report [--fail-under 80]

Locations come from COVERAGE_DATA, COVERAGE_HTML and COVERAGE_REPORT.
"""

import argparse
import importlib
import os
import sys

import coverage


SOURCES = ['pyclean']

DATA_FILE = os.environ.get('COVERAGE_DATA', 'ci-logs/coverage/data')
HTML_DIR = os.environ.get('COVERAGE_HTML', 'artifacts/coverage/html')
REPORT_FILE = os.environ.get('COVERAGE_REPORT', 'artifacts/coverage/report.txt')


def ensure_directory(path):
    if path and not os.path.isdir(path):
        os.makedirs(path)


def write_reports(cov, fail_under=None):
    """
    Write the HTML and text reports.

    @return: exit status; 1 when the total is below fail_under
    """
    cov.load()
    ensure_directory(HTML_DIR)
    ensure_directory(os.path.dirname(REPORT_FILE))
    cov.html_report(directory=HTML_DIR)
    with open(REPORT_FILE, 'w') as fh:
        total = cov.report(file=fh)
    print("Coverage of %s: %.1f%%" % (', '.join(SOURCES), total))
    if fail_under is not None and total < fail_under:
        print("Coverage is below %.1f%%" % (fail_under,))
        return 1
    return 0


def run_module(cov, module, argv):
    """
    Import a test module and run its main() under coverage.

    @return: the module's exit status
    """
    sys.argv = [module + '.py'] + list(argv)
    cov.start()
    try:
        mod = importlib.import_module(module)
        result = mod.main()
    finally:
        cov.stop()
        cov.save()
    return result or 0


def main():
    parser = argparse.ArgumentParser(description="Run pyclean tests with coverage")
    parser.add_argument('--module', default='AllTests',
                        help="Test module to run with coverage")
    parser.add_argument('--coverage-report', action='store_true', default=False,
                        help="Report on the coverage collected")
    parser.add_argument('--fail-under', type=float, default=None,
                        help="Fail the report when total coverage is below this percentage")
    parser.add_argument('--clear', action='store_true', default=False,
                        help="Clear the collected coverage")
    (options, remaining) = parser.parse_known_args()

    ensure_directory(os.path.dirname(DATA_FILE))
    cov = coverage.Coverage(data_file=DATA_FILE, branch=True, source=SOURCES + [options.module])
    if options.coverage_report:
        return write_reports(cov, options.fail_under)
    if options.clear:
        cov.erase()
        return 0
    return run_module(cov, options.module, remaining)


if __name__ == "__main__":
    sys.exit(main())
