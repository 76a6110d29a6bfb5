import unittest
import os
import sys

# Add the parent directory to the path to import quarterplane
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

try:
    import numpy as np
    from hypothesis import given, settings
    from hypothesis import strategies as st

    from quarterplane.core.dynsys import (
        DynamicalSystem,
        Letter,
        Provenance,
        Role,
        RuleTable,
        VerdictKind,
        cell_diagonal,
        constant_system,
        develop,
        diagonal_cell,
        random_system,
        scan_ultimately_zero,
        system_from_rules,
        validate_system,
        xor_system,
    )
    from quarterplane.core.errors import StructuralError, SymmetryViolation
except ImportError:
    # Skip tests if dependencies not available
    import pytest

    pytest.skip("quarterplane dependencies not available", allow_module_level=True)


def naive_diagonals(system, n_max):
    """Quarter plane filled row by row, read back as diagonals"""
    a = {}
    for n in range(n_max + 1):
        for i in range(n + 1):
            j = n - i
            if i == 0 or j == 0:
                a[(i, j)] = system.one
            else:
                a[(i, j)] = system.f(a[(i - 1, j)], a[(i, j - 1)])
    return [[a[(n - k, k)] for k in range(n + 1)] for n in range(n_max + 1)]


class TestDevelopment(unittest.TestCase):
    def test_walls_and_lengths(self):
        """D_n has n + 1 cells with ones on both ends"""
        system = random_system(4, seed=1)
        for diagonal in develop(system, 12):
            self.assertEqual(len(diagonal), diagonal.n + 1)
            self.assertEqual(diagonal.cells[0], system.one)
            self.assertEqual(diagonal.cells[-1], system.one)

    def test_first_diagonals(self):
        """D_0 = [1], D_1 = [1, 1], D_2 = [1, f(1,1), 1]"""
        system = xor_system()
        diagonals = [d.tolist() for d in develop(system, 4)]
        self.assertEqual(diagonals[0], [1])
        self.assertEqual(diagonals[1], [1, 1])
        self.assertEqual(diagonals[2], [1, 0, 1])
        self.assertEqual(diagonals[3], [1, 1, 1, 1])
        self.assertEqual(diagonals[4], [1, 0, 0, 0, 1])

    def test_diagonals_are_read_only(self):
        """Yielded arrays cannot be modified"""
        for diagonal in develop(xor_system(), 3):
            with self.assertRaises(ValueError):
                diagonal.cells[0] = 5

    def test_negative_bound_rejected(self):
        """A negative diagonal count is an error"""
        with self.assertRaises(ValueError):
            list(develop(xor_system(), -1))

    def test_xor_is_pascal_mod_two(self):
        """Exclusive-or develops into binomial coefficients mod 2"""
        from math import comb

        for diagonal in develop(xor_system(), 20):
            n = diagonal.n
            self.assertEqual(diagonal.tolist(), [comb(n, k) % 2 for k in range(n + 1)])

    @settings(max_examples=40, deadline=None, derandomize=True)
    @given(
        size=st.integers(min_value=2, max_value=6),
        seed=st.integers(min_value=0, max_value=10_000),
        symmetric=st.booleans(),
    )
    def test_matches_naive_recurrence(self, size, seed, symmetric):
        """Streaming development equals the cell-by-cell recurrence"""
        system = random_system(size, seed, symmetric)
        expected = naive_diagonals(system, 25)
        self.assertEqual([d.tolist() for d in develop(system, 25)], expected)

    @settings(max_examples=20, deadline=None, derandomize=True)
    @given(size=st.integers(min_value=2, max_value=5), seed=st.integers(0, 10_000))
    def test_symmetric_tables_develop_symmetrically(self, size, seed):
        """Symmetric f gives palindromic diagonals"""
        system = random_system(size, seed, symmetric=True)
        for diagonal in develop(system, 30):
            self.assertEqual(diagonal.tolist(), diagonal.tolist()[::-1])

    def test_sparse_table_matches_dense(self):
        """The sorted-key table gives the same development as the dense grid"""
        dense = random_system(7, seed=3)
        sparse_table = RuleTable(
            dense.size,
            {(a, b): c for a, b, c in dense.table.defined_pairs()},
            dense_limit=1,
        )
        sparse = DynamicalSystem(dense.letters, sparse_table, one=dense.one, zero=dense.zero)
        for left, right in zip(develop(dense, 40), develop(sparse, 40)):
            self.assertEqual(left.tolist(), right.tolist())

    def test_sparse_table_uses_default(self):
        """Pairs missing from a sparse table map to the default letter"""
        table = RuleTable(3, {(1, 1): 0}, default=2, dense_limit=0)
        out = table.lookup(np.array([1, 0]), np.array([1, 1]))
        self.assertEqual(out.tolist(), [0, 2])

    def test_index_built_on_construction(self):
        """Both lookup indexes are complete before the first lookup"""
        sparse = RuleTable(3, {(1, 1): 0, (0, 2): 1}, default=2, dense_limit=0)
        self.assertIsNone(sparse._dense)
        self.assertEqual(sparse._keys.tolist(), [2, 4])
        self.assertEqual(sparse._values.tolist(), [1, 0])

        dense = RuleTable(3, {(1, 1): 0}, default=2)
        self.assertIsNone(dense._keys)
        self.assertEqual(dense._dense[1, 1], 0)
        self.assertEqual(dense._dense[0, 0], 2)

    def test_missing_pair_without_default(self):
        """A partial table without default fails on lookup"""
        table = RuleTable(2, {(1, 1): 0})
        self.assertFalse(table.is_total())
        with self.assertRaises(StructuralError):
            table.lookup(np.array([0]), np.array([0]))

    def test_index_helpers_are_inverse(self):
        """diagonal_cell and cell_diagonal undo each other"""
        for n in range(6):
            for k in range(n + 1):
                self.assertEqual(cell_diagonal(*diagonal_cell(n, k)), (n, k))
        self.assertEqual(diagonal_cell(5, 2), (3, 2))


class TestScan(unittest.TestCase):
    def test_constant_zero_certified(self):
        """f = 0 certifies at D_2"""
        verdict = scan_ultimately_zero(constant_system(False), 10)
        self.assertTrue(verdict.certified)
        self.assertEqual(verdict.n, 2)
        self.assertEqual(str(verdict), "ZeroCertifiedFrom(2)")

    def test_constant_one_never_zero(self):
        """f = 1 never produces a zero"""
        verdict = scan_ultimately_zero(constant_system(True), 30)
        self.assertEqual(verdict.kind, VerdictKind.NOT_ZERO)
        self.assertEqual(str(verdict), "NotZeroWithin(30)")
        self.assertEqual(verdict.notes, ())

    def test_xor_zero_interiors_are_not_proofs(self):
        """Zero interiors at powers of two are noted but not certified"""
        verdict = scan_ultimately_zero(xor_system(), 16)
        self.assertFalse(verdict.certified)
        self.assertEqual(str(verdict), "NotZeroWithin(16)")
        self.assertIn(4, verdict.notes)
        self.assertEqual(verdict.notes, (2, 4, 8, 16))
        log = verdict.scan_log()
        self.assertTrue(all(entry.kind is VerdictKind.UNCERTIFIED for entry in log))
        self.assertEqual(str(log[1]), "InteriorZeroButUncertified(4)")

    def test_scan_bound_too_small(self):
        """The scan starts at D_2"""
        with self.assertRaises(ValueError):
            scan_ultimately_zero(xor_system(), 1)

    @settings(max_examples=60, deadline=None, derandomize=True)
    @given(size=st.integers(min_value=2, max_value=4), seed=st.integers(0, 100_000))
    def test_certificate_is_sound(self, size, seed):
        """After a certificate every later interior stays zero"""
        system = random_system(size, seed)
        verdict = scan_ultimately_zero(system, 40)
        if not verdict.certified:
            return
        for diagonal in develop(system, 40):
            if diagonal.n >= verdict.n:
                self.assertTrue(np.all(diagonal.interior == system.zero))


class TestSystemStructure(unittest.TestCase):
    def test_letter_tags(self):
        """Pair roles carry their level in the tag"""
        letter = Letter(5, "p", Role.PAIR, 3)
        self.assertEqual(letter.tag, "pair3")
        self.assertEqual(Letter.from_tag(5, "p", "pair3"), letter)
        self.assertEqual(Letter.from_tag(2, "b", "bottom").role, Role.BOTTOM)
        with self.assertRaises(StructuralError):
            Letter.from_tag(1, "x", "pairs")
        with self.assertRaises(StructuralError):
            Letter.from_tag(1, "x", "wall")

    def test_one_and_zero_must_differ(self):
        """Constructing a system with one == zero fails"""
        letters = (Letter(0, "0", Role.ZERO), Letter(1, "1", Role.ONE))
        table = RuleTable(2, {(a, b): 0 for a in range(2) for b in range(2)})
        with self.assertRaises(StructuralError):
            DynamicalSystem(letters, table, one=0, zero=0)

    def test_duplicate_names_rejected(self):
        """Letter names are unique"""
        letters = (Letter(0, "x", Role.ZERO), Letter(1, "x", Role.ONE))
        table = RuleTable(2, {(a, b): 0 for a in range(2) for b in range(2)})
        with self.assertRaises(StructuralError):
            DynamicalSystem(letters, table, one=1, zero=0)

    def test_by_name(self):
        """Letters are found by name"""
        system = system_from_rules(
            ["0", "1", "x"], {(a, b): 0 for a in range(3) for b in range(3)}
        )
        self.assertEqual(system.by_name("x"), 2)
        with self.assertRaises(StructuralError):
            system.by_name("y")

    def test_first_asymmetric_pair(self):
        """The smallest offending pair is reported"""
        rules = {(a, b): 0 for a in range(3) for b in range(3)}
        rules[(2, 0)] = 2
        system = system_from_rules(["0", "1", "x"], rules, symmetric=True)
        self.assertEqual(system.table.first_asymmetric_pair(), (0, 2))

        report = validate_system(system, 10)
        self.assertFalse(report.ok)
        with self.assertRaises(SymmetryViolation):
            report.raise_for_status()

    def test_validate_clean_system(self):
        """f = 0 is total, symmetric and leaks nothing"""
        report = validate_system(constant_system(False), 20)
        self.assertTrue(report.ok)
        self.assertTrue(report.zero_closed)
        self.assertEqual(report.violations(), [])
        report.raise_for_status()

    def test_validate_reports_one_leak(self):
        """Exclusive-or puts ones off the walls at D_3"""
        report = validate_system(xor_system(), 10)
        self.assertEqual(report.one_off_wall_at, (2, 1))
        self.assertFalse(report.ok)
        with self.assertRaises(StructuralError):
            report.raise_for_status()

    def test_validate_traces_bottom_to_a_defaulted_rule(self):
        """The first Bottom is blamed on the pair that produced it"""
        letters = (
            Letter(0, "0", Role.ZERO),
            Letter(1, "1", Role.ONE),
            Letter(2, "x", Role.TYPE0),
            Letter(3, "B", Role.BOTTOM),
        )
        table = RuleTable(4, {(1, 1): 2}, default=3)
        self.assertEqual(table.provenance(1, 1), Provenance.DEFINED)
        self.assertEqual(table.provenance(2, 1), Provenance.DEFAULTED)

        system = DynamicalSystem(letters, table, one=1, zero=0, bottom=3, symmetric=True)
        report = validate_system(system, 10)
        self.assertEqual(report.bottom_at, (2, 1))
        self.assertEqual(report.bottom_rule, (2, 1, Provenance.DEFAULTED))
        self.assertIsNone(report.one_off_wall_at)
        self.assertFalse(report.ok)
        self.assertEqual(
            report.violations(), ["bottom appears at a(2, 1) from f(2, 1) (defaulted)"]
        )


if __name__ == "__main__":
    unittest.main()
