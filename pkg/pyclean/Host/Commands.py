"""
Command dispatch for the command line.

Each subcommand is a method registered in `commands_dispatch`, keyed by the
subcommand name, and called as:

    method(args)

with the parsed arguments. Methods return an exit code, or raise a CleanError
whose `errnum` becomes the exit code:

    0   success
    1   verification failure
    2   bad input (including usage errors)
    3   numerical failure

Documents and reports are written to stdout unless an output file is given;
diagnostics go through logging.
"""

import argparse
import logging
import sys

import numpy as np

from ..Constants import CleanConstants, default_tolerance
from ..Errors import CleanError, InputError, NumericalFailure, PreconditionError
from ..Matrix.Core import as_matrix, identity, matrix_to_document, operator_norm
from ..Matrix.Projections import OrthoProjection
from ..Spectral.Schur import schur
from ..Spectral.Riesz import choose_separating_radius, riesz_projection, uniform_resolvent_log_bound
from ..Spectral.StronglyClean import strongly_clean_decompose, strongly_clean_field
from ..Halmos.Form import halmos_form
from ..Halmos.Criteria import difference_invertibility
from ..Clean.Certificate import verify_certificate
from ..Clean.Pipelines import (almost_star_clean_decompose, clean_decompose, scalar_plus_small_decompose,
                               star_clean_closed_range)
from ..Witness.Tables import shift_inverse_lowerbound_table, truncated_shift_trajectory
from ..Witness.Counterexamples import strong_star_clean_counterexample
from .Corpus import RunConfig, corpus_members, write_corpus
from .MatrixFile import document_text, load_certificate, parse_matrix, read_matrix_directory
from .Report import emit_report, emit_witness_table


logger = logging.getLogger(__name__)


__all__ = (
        'Commands',
        'run_command',
        'DECOMPOSERS',
    )


DECOMPOSERS = {
        CleanConstants.MODE_CLEAN: clean_decompose,
        CleanConstants.MODE_STRONG: strongly_clean_decompose,
        CleanConstants.MODE_STAR: star_clean_closed_range,
        CleanConstants.MODE_ALMOST_STAR: almost_star_clean_decompose,
    }

RIESZ_METHODS = {
        'schur': CleanConstants.METHOD_SCHUR,
        'quadrature': CleanConstants.METHOD_QUADRATURE,
    }


class UsageError(Exception):
    pass


class CommandParser(argparse.ArgumentParser):
    """
    Parser which reports usage errors as exceptions rather than exiting.
    """

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("'%s' is not a number" % (text,))
    if not value > 0:
        raise argparse.ArgumentTypeError("'%s' must be positive" % (text,))
    return value


def _families(text):
    return tuple(family.strip() for family in text.split(',') if family.strip())


class Commands(object):

    def __init__(self, stdout=None):
        self.stdout = stdout or sys.stdout

        # The command dispatch table maps the subcommand name to the method
        # which handles it. The method is called as:
        #   method(args)
        self.commands_dispatch = {
                'decompose': self.cmd_decompose,
                'verify': self.cmd_verify,
                'halmos': self.cmd_halmos,
                'riesz': self.cmd_riesz,
                'witness': self.cmd_witness,
                'field-decompose': self.cmd_field_decompose,
                'corpus': self.cmd_corpus,
                'batch': self.cmd_batch,
            }
        self.witness_dispatch = {
                'shift-table': self.witness_shift_table,
                'star-counterexample': self.witness_star_counterexample,
                'truncated-shift': self.witness_truncated_shift,
            }

    def build_parser(self):
        parser = CommandParser(prog='RunClean', description="Certified clean decompositions of complex matrices")
        parser.add_argument('--seed', type=int, default=0,
                            help="Seed for generated corpora")
        parser.add_argument('--verbose', action='store_true', default=False,
                            help="Report diagnostics")
        subparsers = parser.add_subparsers(dest='command', parser_class=CommandParser)
        subparsers.required = True

        sub = subparsers.add_parser('decompose', help="Decompose a matrix and write its certificate")
        sub.add_argument('--mode', choices=CleanConstants.MODES, default=CleanConstants.MODE_CLEAN)
        sub.add_argument('--in', dest='input', required=True, help="Matrix file")
        sub.add_argument('--out', default=None, help="Certificate file (default stdout)")
        sub.add_argument('--tol', type=_positive_float, default=None)
        sub.add_argument('--shift', default='0', help="Scalar z for scalar-plus-small, e.g. 0.3 or 0.2+0.1j")
        sub.add_argument('--block', type=int, default=None,
                         help="Block size k for scalar-plus-small; the block is the leading k coordinates")

        sub = subparsers.add_parser('verify', help="Verify a certificate against its matrix")
        sub.add_argument('--in', dest='input', required=True, help="Matrix file")
        sub.add_argument('--cert', required=True, help="Certificate file")
        sub.add_argument('--tol', type=_positive_float, default=None)
        sub.add_argument('--out', default=None, help="Verification report file (default stdout)")

        sub = subparsers.add_parser('halmos', help="Canonical form of a pair of projections")
        sub.add_argument('--e', required=True, help="Matrix file holding E")
        sub.add_argument('--f', required=True, help="Matrix file holding F")
        sub.add_argument('--out', default=None)
        sub.add_argument('--tol', type=_positive_float, default=CleanConstants.DEFAULT_TOL)

        sub = subparsers.add_parser('riesz', help="Riesz projection for a separating circle")
        sub.add_argument('--in', dest='input', required=True, help="Matrix file")
        sub.add_argument('--radius', default='auto', help="'auto' or a radius in [1/4, 3/4]")
        sub.add_argument('--method', choices=sorted(RIESZ_METHODS), default='schur')
        sub.add_argument('--out', default=None)
        sub.add_argument('--tol', type=_positive_float, default=CleanConstants.DEFAULT_TOL)

        sub = subparsers.add_parser('witness', help="Counterexamples and sharpness tables")
        sub.add_argument('witness', choices=sorted(self.witness_dispatch))
        sub.add_argument('--max-n', type=int, default=64, help="Largest dimension")
        sub.add_argument('--out', default=None)
        sub.add_argument('--format', choices=('csv', 'markdown'), default='csv')

        sub = subparsers.add_parser('field-decompose', help="Strongly clean decomposition of a matrix field")
        sub.add_argument('--in-dir', required=True, help="Directory of matrix files, one per member")
        sub.add_argument('--out', default=None)
        sub.add_argument('--tol', type=_positive_float, default=None)

        for name, help_text in (('corpus', "Write a generated corpus of matrix files"),
                                ('batch', "Decompose a directory or generated corpus and report")):
            sub = subparsers.add_parser(name, help=help_text)
            sub.add_argument('--count', type=int, default=100)
            sub.add_argument('--min-n', type=int, default=1)
            sub.add_argument('--max-n', type=int, default=64)
            sub.add_argument('--families', type=_families, default=CleanConstants.FAMILIES,
                             help="Comma separated list of families")
            if name == 'corpus':
                sub.add_argument('--out-dir', required=True)
            else:
                sub.add_argument('--in-dir', default=None, help="Directory of matrix files; default generates")
                sub.add_argument('--mode', choices=sorted(DECOMPOSERS), default=CleanConstants.MODE_CLEAN)
                sub.add_argument('--format', choices=('csv', 'markdown'), default='csv')
                sub.add_argument('--out', default=None)
                sub.add_argument('--tol', type=_positive_float, default=None)
        return parser

    def run(self, argv):
        """
        Parse and run a command line.

        @param argv:    list of arguments, without the program name

        @return: exit code
        """
        parser = self.build_parser()
        try:
            args = parser.parse_args(argv)
        except UsageError as exc:
            sys.stderr.write("%s: error: %s\n" % (parser.prog, exc))
            return CleanConstants.EXIT_BAD_INPUT
        except SystemExit as exc:
            # --help exits through argparse
            return exc.code if isinstance(exc.code, int) else CleanConstants.EXIT_BAD_INPUT

        if args.verbose:
            logging.getLogger('pyclean').setLevel(logging.DEBUG)

        dispatch = self.commands_dispatch[args.command]
        try:
            return dispatch(args)
        except CleanError as exc:
            logger.error("%s", exc)
            return exc.errnum
        except (IOError, OSError) as exc:
            logger.error("%s", exc)
            return CleanConstants.EXIT_BAD_INPUT

    def write(self, text, path=None):
        """
        Write output to a file, or to stdout when path is None or '-'.
        """
        if path is None or path == '-':
            self.stdout.write(text)
        else:
            with open(path, 'w', encoding='utf-8', newline='\n') as fh:
                fh.write(text)

    def run_config(self, args, mode=CleanConstants.MODE_CLEAN):
        config = RunConfig(mode=mode, tolerance=getattr(args, 'tol', None), seed=args.seed,
                           output=getattr(args, 'out', None), count=args.count,
                           min_n=args.min_n, max_n=args.max_n, families=args.families)
        return config.validate()

    def cmd_decompose(self, args):
        T = parse_matrix(args.input)
        tol = args.tol if args.tol is not None else default_tolerance()
        if args.mode == CleanConstants.MODE_SCALAR_PLUS_SMALL:
            cert = self.decompose_scalar_plus_small(T, args.shift, args.block, tol)
        else:
            cert = DECOMPOSERS[args.mode](T, tol=tol)
        if not cert.passed:
            raise NumericalFailure("%s decomposition failed verification" % (args.mode,))
        self.write(document_text(cert.to_dict()), args.out)
        return CleanConstants.EXIT_OK

    def decompose_scalar_plus_small(self, T, shift, block, tol):
        """
        Decompose zI + T with the block taken as the leading coordinates and
        A the compression of T to it.
        """
        T = as_matrix(T)
        n = T.shape[0]
        try:
            z = complex(shift.replace(' ', ''))
        except ValueError:
            raise InputError("Shift '%s' is not a complex number" % (shift,))
        if block is None:
            block = n
        if not 0 <= block <= n:
            raise InputError("Block size %r must lie in 0..%i" % (block, n))
        blockE = OrthoProjection.from_basis(identity(n)[:, :block], n=n)
        A = blockE.matrix.dot(T).dot(blockE.matrix)
        return scalar_plus_small_decompose(z, A, blockE, T, tol=tol)

    def cmd_verify(self, args):
        T = parse_matrix(args.input)
        cert = load_certificate(args.cert)
        tol = args.tol if args.tol is not None else default_tolerance()
        report = verify_certificate(T, cert, tol=tol)
        self.write(document_text(report.to_dict()), args.out)
        if not report.passed:
            logger.warning("Certificate failed: %s", ', '.join(check.name for check in report.failures()))
            return CleanConstants.EXIT_VERIFY_FAILED
        return CleanConstants.EXIT_OK

    def _read_projection(self, path, tol):
        M = parse_matrix(path)
        residual = max(operator_norm(M.dot(M) - M), operator_norm(M - M.conj().T))
        if residual > tol:
            raise PreconditionError("'%s' is not an orthogonal projection (residual %.3g)" % (path, residual))
        return OrthoProjection(M)

    def cmd_halmos(self, args):
        E = self._read_projection(args.e, args.tol)
        F = self._read_projection(args.f, args.tol)
        form = halmos_form(E, F, check_tol=args.tol)
        difference = difference_invertibility(E, F)
        doc = {
                'dims': {'EF': form.d1, 'paired': form.d2, 'generic': form.d3,
                         'complement': form.d4, 'unpaired_E': form.extra_e, 'unpaired_F': form.extra_f},
                'H': [float(h) for h in form.H],
                'W': matrix_to_document(form.W),
                'delta': form.delta,
                'residual_E': form.residual_E,
                'residual_F': form.residual_F,
                'residual_unitary': form.residual_unitary,
                'difference': {
                        'invertible_on_join': difference.invertible_on_join,
                        'norm_of_inverse': difference.norm_of_inverse,
                        'ef_norm': difference.ef_norm,
                        'expected_norm': float(difference.expected_norm) if difference.ef_norm < 1 else None,
                        'identity_holds': difference.identity_holds,
                    },
            }
        self.write(document_text(doc), args.out)
        return CleanConstants.EXIT_OK

    def cmd_riesz(self, args):
        A = parse_matrix(args.input)
        n = A.shape[0]
        if args.radius == 'auto':
            radius = choose_separating_radius(schur(A).eigenvalues, n)
        else:
            try:
                radius = float(args.radius)
            except ValueError:
                raise InputError("Radius '%s' is not 'auto' or a number" % (args.radius,))
        result = riesz_projection(A, radius, method=RIESZ_METHODS[args.method], tol=args.tol)
        doc = {
                'radius': result.radius,
                'method': result.method,
                'inside_count': int(result.inside_count),
                'nodes': result.nodes,
                'distance': result.distance,
                'P': matrix_to_document(result.projector.matrix),
                'norm_P': result.norm,
                'residual_idempotent': result.projector.residual,
                'residual_commute': result.residual_commute,
                'log_resolvent_bound': float(np.log(result.resolvent_bound)),
                'log_uniform_bound': uniform_resolvent_log_bound(operator_norm(A), n),
            }
        self.write(document_text(doc), args.out)
        return CleanConstants.EXIT_OK

    def cmd_witness(self, args):
        return self.witness_dispatch[args.witness](args)

    def witness_shift_table(self, args):
        table = shift_inverse_lowerbound_table(args.max_n)
        self.write(emit_witness_table(table, format=args.format), args.out)
        return CleanConstants.EXIT_OK if table.passed else CleanConstants.EXIT_VERIFY_FAILED

    def witness_star_counterexample(self, args):
        report = strong_star_clean_counterexample()
        self.write(document_text(report.to_dict()), args.out)
        return CleanConstants.EXIT_OK if report.passed else CleanConstants.EXIT_VERIFY_FAILED

    def witness_truncated_shift(self, args):
        if args.max_n < 2:
            raise InputError("Truncated shift needs --max-n of at least 2")
        trajectory = truncated_shift_trajectory(range(2, args.max_n + 1, 2))
        doc = {
                'trend': trajectory.trend,
                'records': [record.to_dict() for record in trajectory.records],
            }
        self.write(document_text(doc), args.out)
        return CleanConstants.EXIT_OK

    def cmd_field_decompose(self, args):
        members = read_matrix_directory(args.in_dir)
        tol = args.tol if args.tol is not None else default_tolerance()
        field = strongly_clean_field([matrix for (_, matrix) in members], tol=tol)
        doc = field.to_dict()
        doc['members'] = [name for (name, _) in members]
        self.write(document_text(doc), args.out)
        return CleanConstants.EXIT_OK if field.passed else CleanConstants.EXIT_VERIFY_FAILED

    def cmd_corpus(self, args):
        config = self.run_config(args)
        paths = write_corpus(config, args.out_dir)
        logger.info("Wrote %i matrices to %s", len(paths), args.out_dir)
        return CleanConstants.EXIT_OK

    def cmd_batch(self, args):
        config = self.run_config(args, mode=args.mode)
        if args.in_dir:
            matrices = read_matrix_directory(args.in_dir)
        else:
            matrices = [(member.name, member.matrix) for member in corpus_members(config)]

        decompose = DECOMPOSERS[config.mode]
        certs = []
        failures = 0
        for (name, T) in matrices:
            try:
                certs.append(decompose(T, tol=config.tolerance))
            except NumericalFailure as exc:
                logger.warning("%s: %s", name, exc)
                failures += 1
        self.write(emit_report(certs, format=args.format), args.out)
        if failures:
            return CleanConstants.EXIT_NUMERICAL
        if not all(cert.passed for cert in certs):
            return CleanConstants.EXIT_VERIFY_FAILED
        return CleanConstants.EXIT_OK


def run_command(argv, stdout=None):
    """
    Run a command line.

    @param argv:    arguments, without the program name
    @param stdout:  stream for documents and reports; defaults to sys.stdout

    @return: exit code
    """
    return Commands(stdout=stdout).run(list(argv))
