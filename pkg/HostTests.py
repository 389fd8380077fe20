#!/usr/bin/env python

import io
import json
import math
import os
import tempfile
import unittest

import numpy as np

from pyclean.Constants import CleanConstants
from pyclean.Errors import InputError, MatrixFileError
from pyclean.Matrix.Core import operator_norm, singular_values
from pyclean.Clean.Pipelines import clean_decompose, star_clean_closed_range
from pyclean.Witness.Tables import shift_inverse_lowerbound_table
from pyclean.Host.MatrixFile import (MatrixFile, emit_matrix, emit_text, format_decimal, load_certificate,
                                     parse_matrix, parse_text, read_matrix_directory, save_certificate)
from pyclean.Host.Corpus import RunConfig, corpus_members, generate_corpus, write_corpus
from pyclean.Host.Report import REPORT_COLUMNS, emit_report, emit_witness_table, report_rows
from pyclean.Host.Commands import run_command
import Matrices.TestData as TestData


class MatrixFileTests(unittest.TestCase):

    def setUp(self):
        self.tempdir = tempfile.TemporaryDirectory()
        self.dir = self.tempdir.name

    def tearDown(self):
        self.tempdir.cleanup()

    def path(self, leafname):
        return os.path.join(self.dir, leafname)

    def test_parseIdentity(self):
        np.testing.assert_array_equal(parse_text(TestData.identity2_text), np.eye(2))

    def test_textRoundTrip(self):
        for text in (TestData.identity2_text, TestData.zero1_text):
            self.assertEqual(emit_text(parse_text(text)), text)

    def test_emitText(self):
        self.assertEqual(emit_text(np.array([[0.1 + 2j]])), "1 1\n0.1 2\n")
        self.assertEqual(emit_text(np.array([[1, complex(0, -2.5)]])), "1 2\n1 0\n0 -2.5\n")

    def test_formatDecimal(self):
        self.assertEqual(format_decimal(1.0), '1')
        self.assertEqual(format_decimal(0.1), '0.1')
        self.assertEqual(format_decimal(-0.0), '-0')
        self.assertEqual(format_decimal(1e-300), '1e-300')
        self.assertEqual(format_decimal(1.0 / 3), '0.3333333333333333')

    def check_error(self, text, lineno):
        with self.assertRaises(MatrixFileError) as context:
            parse_text(text, filename='bad.txt')
        self.assertEqual(context.exception.lineno, lineno)
        self.assertIn('line %i' % (lineno,), str(context.exception))
        self.assertIn('bad.txt', str(context.exception))
        self.assertEqual(context.exception.errnum, CleanConstants.EXIT_BAD_INPUT)

    def test_headerErrors(self):
        self.check_error("", 1)
        self.check_error("2\n", 1)
        self.check_error("a b\n", 1)
        self.check_error("0 1\n", 1)

    def test_countErrors(self):
        self.check_error("1 1\n", 2)
        self.check_error("2 1\n0 0\n", 3)
        self.check_error("1 1\n0 0\n0 0\n", 3)

    def test_entryErrors(self):
        self.check_error("1 1\nx 0\n", 2)
        self.check_error("1 1\nnan 0\n", 2)
        self.check_error("1 1\n1 2 3\n", 2)
        self.check_error("2 1\n0 0\ninf 0\n", 3)

    def test_fileRoundTrip(self):
        M = TestData.random_matrix(3, 5)
        emit_matrix(M, self.path('m.txt'))
        np.testing.assert_array_equal(parse_matrix(self.path('m.txt')), M)
        emit_matrix(M, self.path('m.json'))
        np.testing.assert_array_equal(parse_matrix(self.path('m.json')), M)

    def test_formatFromExtension(self):
        self.assertEqual(MatrixFile('a.json').format, MatrixFile.FORMAT_STRUCTURED)
        self.assertEqual(MatrixFile('a.txt').format, MatrixFile.FORMAT_TEXT)
        self.assertEqual(MatrixFile('a.json', format='plain-text').format, MatrixFile.FORMAT_TEXT)
        with self.assertRaises(InputError):
            MatrixFile('a.txt', format='binary')

    def test_missingFile(self):
        with self.assertRaises(InputError):
            parse_matrix(self.path('absent.txt'))

    def test_badJson(self):
        with open(self.path('bad.json'), 'w') as fh:
            fh.write('{"rows": 1')
        with self.assertRaises(MatrixFileError):
            parse_matrix(self.path('bad.json'))

    def test_certificateFile(self):
        cert = clean_decompose(TestData.e12)
        save_certificate(cert, self.path('sub/cert.json'))
        loaded = load_certificate(self.path('sub/cert.json'))
        self.assertEqual(loaded.mode, cert.mode)
        np.testing.assert_array_equal(loaded.P.matrix, cert.P.matrix)
        self.assertEqual(loaded.inverse_norm, cert.inverse_norm)

    def test_directory(self):
        emit_matrix(TestData.identity2, self.path('b.txt'))
        emit_matrix(TestData.zero2, self.path('a.json'))
        with open(self.path('notes.md'), 'w') as fh:
            fh.write('ignored\n')
        members = read_matrix_directory(self.dir)
        self.assertEqual([name for (name, _) in members], ['a.json', 'b.txt'])
        np.testing.assert_array_equal(members[1][1], TestData.identity2)

    def test_emptyDirectory(self):
        with self.assertRaises(InputError):
            read_matrix_directory(self.dir)
        with self.assertRaises(InputError):
            read_matrix_directory(self.path('absent'))

    def test_corpusRoundTrip(self):
        paths = write_corpus(RunConfig(count=100, max_n=8), self.dir)
        self.assertEqual(len(paths), 100)
        for path in paths:
            with open(path, 'r', encoding='utf-8', newline='') as fh:
                text = fh.read()
            self.assertEqual(emit_text(parse_text(text)), text)


class CorpusTests(unittest.TestCase):

    def test_deterministic(self):
        config = RunConfig(seed=5, count=30, max_n=12)
        first = generate_corpus(config)
        second = generate_corpus(config)
        self.assertEqual(len(first), 30)
        for (a, b) in zip(first, second):
            np.testing.assert_array_equal(a, b)

    def test_seedsDiffer(self):
        first = generate_corpus(RunConfig(seed=1, count=6, min_n=4, max_n=4))
        second = generate_corpus(RunConfig(seed=2, count=6, min_n=4, max_n=4))
        self.assertFalse(all(np.array_equal(a, b) for (a, b) in zip(first, second)))

    def test_prefixStable(self):
        short = generate_corpus(RunConfig(seed=9, count=5, max_n=10))
        longer = generate_corpus(RunConfig(seed=9, count=20, max_n=10))
        for (a, b) in zip(short, longer):
            np.testing.assert_array_equal(a, b)

    def test_familiesCycle(self):
        members = corpus_members(RunConfig(count=18, max_n=6))
        families = CleanConstants.FAMILIES
        self.assertEqual([member.family for member in members], [families[i % len(families)] for i in range(18)])
        for member in members:
            self.assertTrue(1 <= member.n <= 6)
            self.assertTrue(member.name.startswith('member-%05i-' % (member.index,)))

    def test_nilpotentMembers(self):
        members = corpus_members(RunConfig(count=48, max_n=16, families=('jordan', 'shift')))
        nilpotent = [member for member in members if member.nilpotent]
        self.assertGreater(len(nilpotent), 24)
        for member in nilpotent:
            power = np.linalg.matrix_power(member.matrix, member.n)
            self.assertLess(operator_norm(power), 1e-10)

    def test_jordanLargeIsOptIn(self):
        self.assertNotIn('jordan-large', RunConfig().families)
        members = corpus_members(RunConfig(count=4, min_n=8, max_n=16, families=('jordan-large',)))
        self.assertEqual([member.family for member in members], ['jordan-large'] * 4)
        for member in members:
            self.assertFalse(member.nilpotent)
            self.assertTrue(8 <= member.n <= 16)

    def test_clusterHalf(self):
        members = corpus_members(RunConfig(count=10, min_n=2, max_n=20, families=('cluster-half',)))
        for (ordinal, member) in enumerate(members):
            s = singular_values(member.matrix)
            clustered = np.count_nonzero((s >= 0.499) & (s <= 0.501))
            self.assertGreaterEqual(2 * clustered, member.n)
            if ordinal % 2 == 0:
                self.assertLess(np.min(np.abs(s - 0.5)), 1e-12)

    def test_rankDeficient(self):
        members = corpus_members(RunConfig(count=10, min_n=2, max_n=12, families=('rank-deficient',)))
        for member in members:
            self.assertLess(singular_values(member.matrix)[-1], 1e-10)

    def test_unitary(self):
        members = corpus_members(RunConfig(count=5, max_n=12, families=('unitary',)))
        for member in members:
            product = member.matrix.dot(member.matrix.conj().T)
            self.assertLess(operator_norm(product - np.eye(member.n)), 1e-12)

    def test_validation(self):
        bad = (
                {'mode': 'dirty'},
                {'tolerance': -1.0},
                {'seed': -1},
                {'count': -1},
                {'min_n': 5, 'max_n': 4},
                {'max_n': 513},
                {'families': ('gaussian', 'fractal')},
            )
        for kwargs in bad:
            with self.assertRaises(InputError):
                RunConfig(**kwargs).validate()
        self.assertIsInstance(RunConfig().validate(), RunConfig)

    def test_toleranceEnvironment(self):
        saved = os.environ.get(CleanConstants.TOLERANCE_ENVIRONMENT)
        try:
            os.environ[CleanConstants.TOLERANCE_ENVIRONMENT] = '1e-6'
            self.assertEqual(RunConfig().tolerance, 1e-6)
            os.environ[CleanConstants.TOLERANCE_ENVIRONMENT] = 'loose'
            self.assertEqual(RunConfig().tolerance, CleanConstants.DEFAULT_TOL)
            self.assertEqual(RunConfig(tolerance=1e-3).tolerance, 1e-3)
        finally:
            if saved is None:
                del os.environ[CleanConstants.TOLERANCE_ENVIRONMENT]
            else:
                os.environ[CleanConstants.TOLERANCE_ENVIRONMENT] = saved


class ReportTests(unittest.TestCase):

    def test_emptyReport(self):
        self.assertEqual(emit_report([]), ','.join(REPORT_COLUMNS) + '\n')

    def test_summaryRows(self):
        certs = [clean_decompose(TestData.e12), clean_decompose(TestData.zero2),
                 star_clean_closed_range(TestData.e12)]
        rows = report_rows(certs)
        self.assertEqual([row['kind'] for row in rows], ['certificate'] * 3 + ['summary'] * 2)
        self.assertEqual([row['mode'] for row in rows[3:]], ['clean', 'star'])
        self.assertAlmostEqual(rows[3]['inverse_norm'], (1 + math.sqrt(5)) / 2, places=9)
        self.assertTrue(rows[3]['passed'])

    def test_csv(self):
        text = emit_report([clean_decompose(TestData.zero2)])
        lines = text.splitlines()
        self.assertEqual(len(lines), 3)
        self.assertTrue(lines[1].startswith('certificate,clean,2,1,'))
        self.assertTrue(lines[1].endswith(',pass'))
        self.assertTrue(lines[2].startswith('summary,clean,,1,'))

    def test_markdown(self):
        lines = emit_report([clean_decompose(TestData.zero2)], format='markdown').splitlines()
        self.assertEqual(lines[0], '| ' + ' | '.join(REPORT_COLUMNS) + ' |')
        self.assertEqual(lines[1], '|' + '|'.join(['---'] * len(REPORT_COLUMNS)) + '|')
        self.assertEqual(len(lines), 4)

    def test_badFormat(self):
        with self.assertRaises(InputError):
            emit_report([], format='xml')

    def test_witnessTable(self):
        lines = emit_witness_table(shift_inverse_lowerbound_table(3)).splitlines()
        self.assertEqual(lines[0], 'n,measured,reference,pass')
        self.assertTrue(lines[1].startswith('1,'))
        self.assertTrue(lines[1].endswith(',pass'))
        self.assertEqual(len(lines), 4)


class CommandTests(unittest.TestCase):

    def setUp(self):
        self.tempdir = tempfile.TemporaryDirectory()
        self.dir = self.tempdir.name

    def tearDown(self):
        self.tempdir.cleanup()

    def path(self, leafname):
        return os.path.join(self.dir, leafname)

    def matrix(self, leafname, M):
        emit_matrix(M, self.path(leafname))
        return self.path(leafname)

    def run_cli(self, *argv):
        stdout = io.StringIO()
        code = run_command(list(argv), stdout=stdout)
        return (code, stdout.getvalue())

    def test_decomposeZero(self):
        (code, output) = self.run_cli('decompose', '--in', self.matrix('zero.txt', TestData.zero2))
        self.assertEqual(code, 0)
        doc = json.loads(output)
        self.assertEqual(doc['mode'], 'clean')
        self.assertEqual(doc['inverse_norm'], 1.0)
        self.assertTrue(doc['passed'])

    def test_decomposeModes(self):
        path = self.matrix('e12.txt', TestData.e12)
        for mode in ('clean', 'strong', 'star', 'almost-star'):
            (code, output) = self.run_cli('decompose', '--mode', mode, '--in', path)
            self.assertEqual(code, 0)
            self.assertEqual(json.loads(output)['mode'], mode)

    def test_decomposeScalarPlusSmall(self):
        (z, A, basis, T) = TestData.scalar_block_case()
        path = self.matrix('block.txt', T)
        (code, output) = self.run_cli('decompose', '--mode', 'scalar-plus-small', '--in', path,
                                      '--shift', '0.3', '--block', '2')
        self.assertEqual(code, 0)
        doc = json.loads(output)
        self.assertEqual(doc['shift'], [0.3, 0.0])
        self.assertLessEqual(doc['inverse_norm'], 8.0)

    def test_decomposeBadShift(self):
        path = self.matrix('zero.txt', TestData.zero2)
        (code, _) = self.run_cli('decompose', '--mode', 'scalar-plus-small', '--in', path, '--shift', 'big')
        self.assertEqual(code, 2)

    def test_verify(self):
        matrix = self.matrix('e12.txt', TestData.e12)
        cert = self.path('cert.json')
        (code, _) = self.run_cli('decompose', '--in', matrix, '--out', cert)
        self.assertEqual(code, 0)
        (code, output) = self.run_cli('verify', '--in', matrix, '--cert', cert)
        self.assertEqual(code, 0)
        self.assertTrue(json.loads(output)['passed'])

        with open(cert) as fh:
            doc = json.load(fh)
        doc['P']['data'][0] = [5.0, 0.0]
        with open(cert, 'w') as fh:
            json.dump(doc, fh)
        (code, output) = self.run_cli('verify', '--in', matrix, '--cert', cert)
        self.assertEqual(code, 1)
        self.assertFalse(json.loads(output)['passed'])

    def test_badInput(self):
        with open(self.path('bad.txt'), 'w') as fh:
            fh.write('2 2\n1 0\n')
        (code, _) = self.run_cli('decompose', '--in', self.path('bad.txt'))
        self.assertEqual(code, 2)
        (code, _) = self.run_cli('decompose', '--in', self.path('absent.txt'))
        self.assertEqual(code, 2)

    def test_usageErrors(self):
        self.assertEqual(self.run_cli()[0], 2)
        self.assertEqual(self.run_cli('transmogrify')[0], 2)
        self.assertEqual(self.run_cli('decompose')[0], 2)
        self.assertEqual(self.run_cli('decompose', '--in', 'x', '--tol', '-1')[0], 2)

    def test_witnessShiftTable(self):
        (code, output) = self.run_cli('witness', 'shift-table', '--max-n', '64')
        self.assertEqual(code, 0)
        lines = output.splitlines()
        self.assertEqual(len(lines), 65)
        self.assertTrue(all(line.endswith(',pass') for line in lines[1:]))

    def test_witnessCounterexample(self):
        (code, output) = self.run_cli('witness', 'star-counterexample')
        self.assertEqual(code, 0)
        self.assertTrue(json.loads(output)['passed'])

    def test_witnessTruncatedShift(self):
        (code, output) = self.run_cli('witness', 'truncated-shift', '--max-n', '8')
        self.assertEqual(code, 0)
        self.assertEqual([record['n'] for record in json.loads(output)['records']], [2, 4, 6, 8])
        self.assertEqual(self.run_cli('witness', 'truncated-shift', '--max-n', '1')[0], 2)

    def test_halmos(self):
        (E, F) = TestData.two_projection_pair()
        (code, output) = self.run_cli('halmos', '--e', self.matrix('e.txt', E), '--f', self.matrix('f.txt', F))
        self.assertEqual(code, 0)
        doc = json.loads(output)
        self.assertEqual(doc['dims']['generic'], 1)
        self.assertAlmostEqual(doc['difference']['norm_of_inverse'], math.sqrt(2), places=9)

    def test_halmosNotProjection(self):
        (code, _) = self.run_cli('halmos', '--e', self.matrix('e.txt', TestData.e12),
                                 '--f', self.matrix('f.txt', TestData.identity2))
        self.assertEqual(code, 2)

    def test_riesz(self):
        path = self.matrix('split.txt', TestData.split_spectrum)
        for method in ('schur', 'quadrature'):
            (code, output) = self.run_cli('riesz', '--in', path, '--method', method)
            self.assertEqual(code, 0)
            doc = json.loads(output)
            self.assertAlmostEqual(doc['radius'], 0.5)
            self.assertEqual(doc['inside_count'], 1)
            self.assertLessEqual(doc['log_resolvent_bound'], doc['log_uniform_bound'])
        self.assertEqual(self.run_cli('riesz', '--in', path, '--radius', '0.9')[0], 2)
        self.assertEqual(self.run_cli('riesz', '--in', path, '--radius', 'wide')[0], 2)

    def test_fieldDecompose(self):
        os.mkdir(self.path('field'))
        emit_matrix(TestData.split_spectrum, self.path('field/a.txt'))
        emit_matrix(TestData.split_spectrum + 1e-6 * TestData.e12, self.path('field/b.txt'))
        (code, output) = self.run_cli('field-decompose', '--in-dir', self.path('field'))
        self.assertEqual(code, 0)
        doc = json.loads(output)
        self.assertEqual(doc['members'], ['a.txt', 'b.txt'])
        self.assertEqual(doc['cells'], [[0, 1]])

    def test_corpusAndBatch(self):
        corpus = self.path('corpus')
        (code, _) = self.run_cli('--seed', '3', 'corpus', '--count', '12', '--max-n', '6', '--out-dir', corpus)
        self.assertEqual(code, 0)
        self.assertEqual(len(os.listdir(corpus)), 12)
        (code, output) = self.run_cli('batch', '--in-dir', corpus)
        self.assertEqual(code, 0)
        lines = output.splitlines()
        self.assertEqual(len(lines), 14)
        self.assertTrue(lines[-1].startswith('summary,clean,'))

    def test_batchGenerated(self):
        (code, output) = self.run_cli('batch', '--count', '12', '--max-n', '8', '--mode', 'strong',
                                      '--format', 'markdown', '--out', self.path('report.md'))
        self.assertEqual(code, 0)
        self.assertEqual(output, '')
        with open(self.path('report.md')) as fh:
            self.assertEqual(len(fh.read().splitlines()), 15)

    def test_batchBadFamily(self):
        self.assertEqual(self.run_cli('batch', '--count', '2', '--families', 'fractal')[0], 2)


def main():
    unittest.main(module=__name__)


if __name__ == "__main__":
    main()
