import unittest
import os
import sys

# Add the parent directory to the path to import quarterplane
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

try:
    from quarterplane.core.config import QuarterplaneConfig
    from quarterplane.core.dynsys import develop, validate_system
    from quarterplane.core.errors import PhaseError, TagInconsistency
    from quarterplane.core.symcode import CodeBook, TaggedAlphabet, generic_word, sigma, windows_of
    from quarterplane.core.turing import Cell, parse_machine
    from quarterplane.reductions.suw import (
        SPAN,
        SuwReduction,
        compile_suw,
        rule_windows,
        suw_window_update,
        verify_suw,
    )
    from quarterplane.templates.machine_suite import MachineSuite
except ImportError:
    # Skip tests if dependencies not available
    import pytest

    pytest.skip("quarterplane dependencies not available", allow_module_level=True)


class TestWindowUpdate(unittest.TestCase):
    def setUp(self):
        self.machine = MachineSuite().get("right")
        self.tagged = TaggedAlphabet(CodeBook(), self.machine.cells(), self.machine.blank)
        head = Cell("_", "q0")
        self.word = generic_word(self.tagged, [Cell("a"), head, Cell("_"), Cell("_")])

    def test_head_leaves(self):
        """The head cell turns blank when the head moves right"""
        window = self.word[:SPAN]
        self.assertEqual(suw_window_update(self.machine, self.tagged, window), CodeBook.ZERO)

    def test_head_arrives(self):
        """The right neighbour receives the head, tag preserved"""
        window = windows_of(self.word, SPAN)[3]
        expected = self.tagged.letter(Cell("_", "q0"), 1)
        self.assertEqual(suw_window_update(self.machine, self.tagged, window), expected)

    def test_reversal_reads_the_same(self):
        """A window and its mirror image update identically"""
        for window in windows_of(self.word, SPAN):
            self.assertEqual(
                suw_window_update(self.machine, self.tagged, window),
                suw_window_update(self.machine, self.tagged, sigma(window)),
            )

    def test_zero_window(self):
        """The zero window stays zero"""
        self.assertEqual(suw_window_update(self.machine, self.tagged, (0,) * SPAN), 0)

    def test_bad_windows(self):
        """Wrong lengths and inconsistent tags are rejected"""
        a = self.tagged.letter(Cell("a"), 0)
        with self.assertRaises(ValueError):
            suw_window_update(self.machine, self.tagged, (0,) * 8)
        with self.assertRaises(TagInconsistency):
            suw_window_update(self.machine, self.tagged, (a, a, a) + (0,) * 6)

    def test_untagged_letter(self):
        """A letter outside the tagged alphabet has no phase"""
        stray = max(self.tagged.letters()) + 1
        window = (0,) * 4 + (stray,) + (0,) * 4
        with self.assertRaises(PhaseError):
            suw_window_update(self.machine, self.tagged, window)

    def test_rule_windows_all_read(self):
        """Every enumerated window has a consistent reading"""
        for crossing in ("read", "written"):
            for window in rule_windows(self.machine, self.tagged):
                suw_window_update(self.machine, self.tagged, window, crossing)


class TestCompileSuw(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.suite = MachineSuite()
        cls.machine = cls.suite.get("negclean")
        cls.system, cls.meta = compile_suw(cls.machine, ())

    def test_symmetric_table(self):
        """The compiled table is symmetric"""
        self.assertTrue(self.system.symmetric)
        self.assertIsNone(self.system.table.first_asymmetric_pair())
        self.assertTrue(self.system.zero_closed())

    def test_geometry(self):
        """dW = 6|w| + 28 with the 000 block at the centre"""
        self.assertEqual(self.meta.d_w, 28)
        self.assertEqual(self.meta.center, 14)
        self.assertEqual(self.meta.base_index(0, 0), 16)
        self.assertEqual(self.meta.diagonal(2), 44)
        self.assertEqual(self.meta.diagonal_level(45), 1)

    def test_seeded_diagonal(self):
        """D_dW mirrors the start cell around 000"""
        meta = self.meta
        diagonal = list(develop(self.system, meta.d_w))[-1]
        triple = [meta.system_id(t) for t in meta.tagged.triple(Cell("_", "q0"))]
        cells = diagonal.tolist()
        self.assertEqual(cells[16:19], triple)
        self.assertEqual(cells[10:13], triple[::-1])
        self.assertEqual(cells[13:16], [0, 0, 0])
        self.assertEqual(cells, cells[::-1])

    def test_word_length_moves_seed(self):
        """Each input symbol adds six letters to the seeded diagonal"""
        machine = self.suite.get("right")
        _, meta = compile_suw(machine, ("a", "a"))
        self.assertEqual(meta.d_w, 40)

    def test_sidecar(self):
        """The sidecar records the crossing rule and window counts"""
        sidecar = self.meta.sidecar(self.system)
        self.assertEqual(sidecar["reduction"], "suw")
        self.assertEqual(sidecar["crossing"], "read")
        self.assertEqual(sidecar["level7"], self.meta.level7_terms)
        self.assertLessEqual(self.meta.level7_terms, self.meta.windows)

    def test_unknown_crossing_rule(self):
        """Only read and written are accepted"""
        with self.assertRaises(ValueError):
            compile_suw(self.machine, (), crossing_rule="sideways")


class TestVerifySuw(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.suite = MachineSuite()
        cls.reduction = SuwReduction(QuarterplaneConfig(os.devnull))
        cls.reports = {
            name: cls.reduction.verify(cls.suite.get(name), ()) for name in cls.suite.names()
        }

    def test_clean_certifies(self):
        """clean certifies one step after its halt"""
        report = self.reports["clean"]
        self.assertEqual(report.expected_certified, 28 + 8 * 5)
        self.assertEqual(str(report.verdict), "ZeroCertifiedFrom(68)")
        self.assertTrue(report.ok)

    def test_negclean_certifies(self):
        """negclean certifies on the diagonal of its crossing"""
        report = self.reports["negclean"]
        self.assertEqual(report.run.first_negative_move_step, 1)
        self.assertEqual(str(report.verdict), "ZeroCertifiedFrom(36)")
        self.assertTrue(report.ok)

    def test_rejected_samples(self):
        """dirty, right and negdirty never reach zero"""
        for name in ("dirty", "right", "negdirty"):
            report = self.reports[name]
            self.assertEqual(str(report.verdict), "NotZeroWithin(400)", name)
            self.assertTrue(report.agreement, name)

    def test_sample_suite(self):
        """Symmetry, exact simulation and verdict agreement on every sample"""
        for name, info in self.suite.available().items():
            report = self.reports[name]
            self.assertTrue(report.symmetric, name)
            self.assertTrue(report.bottom_free, name)
            self.assertIsNone(report.mismatch, name)
            self.assertTrue(report.margin_ok, name)
            self.assertEqual(report.suw_accept, info["suw_accept"], name)
            self.assertEqual(report.verdict.certified, info["suw_accept"], name)
            self.assertTrue(report.ok, name)

    def test_negdirty_stops_comparing_at_crossing(self):
        """Type-0 diagonals are compared up to the first negative move"""
        report = self.reports["negdirty"]
        self.assertEqual(report.run.first_negative_move_step, 3)
        self.assertEqual(report.checked, 4)

    def test_written_crossing_rule(self):
        """The written rule agrees on the samples that cross on a blank"""
        for name in ("negclean", "negdirty"):
            report = self.reduction.verify(self.suite.get(name), (), crossing_rule="written")
            self.assertEqual(report.crossing_rule, "written")
            self.assertTrue(report.ok, name)

    def test_random_machines(self):
        """Seeded random machines simulate exactly under the written rule"""
        for seed in range(20):
            machine = self.suite.random_machine(seed, max_symbols=3, max_states=3)
            word = self.suite.random_word(machine, seed, max_length=2)
            report = self.reduction.verify(machine, word, steps=8, crossing_rule="written")
            self.assertIsNone(report.mismatch, f"seed {seed}")
            self.assertTrue(report.symmetric, f"seed {seed}")
            self.assertTrue(report.ok, f"seed {seed}")

    def test_read_rule_breaks_on_rewritten_crossing(self):
        """Crossing left after writing a new symbol leaves Bottom under the read rule"""
        marker = parse_machine(
            "alphabet: _ a\nstates: q0 qs\nstart: q0\nhalt: qs\n"
            "rule: q0 _ -> qs a L\nrule: q0 a -> qs a L\n",
            name="marker",
        )
        read_system, _ = compile_suw(marker, (), crossing_rule="read")
        read_report = validate_system(read_system, 80)
        self.assertIsNotNone(read_report.bottom_at)
        self.assertFalse(read_report.ok)

        written_system, _ = compile_suw(marker, (), crossing_rule="written")
        written_report = validate_system(written_system, 80)
        self.assertIsNone(written_report.bottom_at)
        self.assertTrue(written_report.ok)

    def test_too_few_diagonals(self):
        """The window must reach the last compared step"""
        machine = self.suite.get("negclean")
        system, meta = compile_suw(machine, ())
        with self.assertRaises(ValueError):
            verify_suw(system, meta, machine, (), 10, 50)


if __name__ == "__main__":
    unittest.main()
