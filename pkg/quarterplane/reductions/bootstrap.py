"""
Quarterplane System Builder

Shared scaffolding for the reductions: letter allocation, conflict-checked
rule collection, the margin law and the bootstrap triangle that paints a
target diagonal.
"""

from typing import Dict, List, Optional, Sequence, Tuple

import structlog

from ..core.dynsys import DEFAULT_DENSE_LIMIT, DynamicalSystem, Letter, Role, RuleTable
from ..core.errors import ConflictingRule, SymmetryViolation

log = structlog.get_logger(__name__)


class RuleBuilder:
    """
    Collects f(north, west) = out.

    Assigning a second, different image to a pair raises ConflictingRule.
    A symmetric builder stores every rule in both orders.
    """

    def __init__(self, symmetric: bool = False):
        self.symmetric = symmetric
        self.rules: Dict[Tuple[int, int], int] = {}

    def __len__(self) -> int:
        return len(self.rules)

    def __contains__(self, pair: Tuple[int, int]) -> bool:
        return pair in self.rules

    def _set(self, pair: Tuple[int, int], out: int):
        existing = self.rules.get(pair)
        if existing is None:
            self.rules[pair] = out
        elif existing != out:
            log.error("rule_conflict", pair=pair, existing=existing, new=out)
            raise ConflictingRule(pair, existing, out)

    def define(self, north: int, west: int, out: int):
        self._set((north, west), out)
        if self.symmetric and north != west:
            self._set((west, north), out)


class SystemBuilder:
    """Alphabet under construction plus its rules; zero is id 0 and one is id 1"""

    def __init__(self, symmetric: bool = False):
        self.letters: List[Letter] = [Letter(0, "0", Role.ZERO), Letter(1, "1", Role.ONE)]
        self.rules = RuleBuilder(symmetric=symmetric)
        self.zero = 0
        self.one = 1
        self.bottom: Optional[int] = None

    @property
    def symmetric(self) -> bool:
        return self.rules.symmetric

    def add_letter(self, name: str, role: Role, level: int = 0) -> int:
        letter_id = len(self.letters)
        self.letters.append(Letter(letter_id, name, role, level))
        return letter_id

    def define(self, north: int, west: int, out: int):
        self.rules.define(north, west, out)

    def zero_closure(self):
        """f(0,0) = f(1,0) = f(0,1) = 0"""
        self.define(self.zero, self.zero, self.zero)
        self.define(self.one, self.zero, self.zero)
        self.define(self.zero, self.one, self.zero)

    def margin_law(self):
        """f(1, x) = f(x, 1) = 0 for every letter that is neither one, Bottom nor bootstrap"""
        for letter in self.letters:
            if letter.role in (Role.ONE, Role.BOTTOM, Role.BOOTSTRAP):
                continue
            self.define(self.one, letter.id, self.zero)
            self.define(letter.id, self.one, self.zero)

    def build(self, dense_limit: int = DEFAULT_DENSE_LIMIT) -> DynamicalSystem:
        """Append Bottom as the last letter and freeze the table"""
        self.bottom = self.add_letter("bot", Role.BOTTOM)
        table = RuleTable(
            len(self.letters), self.rules.rules, default=self.bottom, dense_limit=dense_limit
        )
        system = DynamicalSystem(
            tuple(self.letters),
            table,
            one=self.one,
            zero=self.zero,
            bottom=self.bottom,
            symmetric=self.symmetric,
        )
        if self.symmetric:
            pair = table.first_asymmetric_pair()
            if pair is not None:
                raise SymmetryViolation(pair)
        return system


def paint_bootstrap(
    builder: SystemBuilder, target: Sequence[int], palindromic: bool = False
) -> List[int]:
    """
    Fill D_2 ... D_(dW-1) with fresh letters u[d,k] so that D_dW reads
    ``1 target 1``; returns the bootstrap letter ids.

    In palindromic mode u[d,k] and u[d,d-k] are the same letter, which keeps
    the rules symmetric; the target must then be a palindrome.
    """
    target = list(target)
    d_w = len(target) + 1
    if d_w < 2:
        raise ValueError("the target diagonal needs at least one interior cell")
    if palindromic and target != target[::-1]:
        raise ValueError("a palindromic bootstrap needs a palindromic target")

    bootstrap: List[int] = []
    prev = [builder.one, builder.one]
    for d in range(2, d_w + 1):
        if d == d_w:
            cur = [builder.one] + target + [builder.one]
        else:
            cur = [builder.one]
            made: Dict[int, int] = {}
            for k in range(1, d):
                key = min(k, d - k) if palindromic else k
                if key not in made:
                    made[key] = builder.add_letter(f"u[{d},{key}]", Role.BOOTSTRAP)
                    bootstrap.append(made[key])
                cur.append(made[key])
            cur.append(builder.one)

        for k in range(1, d):
            builder.define(prev[k], prev[k - 1], cur[k])
        prev = cur

    log.debug("bootstrap_painted", diagonal=d_w, letters=len(bootstrap))
    return bootstrap
