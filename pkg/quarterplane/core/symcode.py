"""
Quarterplane Symmetric Codes

Level codes built from unordered pairs. A word w_1 ... w_n over level-i
terms folds to f(w_1, w_2) f(w_2, w_3) ... over level-(i+1) terms, where
f(a, b) = [a, b] is symmetric and f(0, 0) = 0. Eight level-0 letters fold
to one level-7 term that identifies the window up to reversal.

Terms are interned integers; only terms reachable from enumerated windows
are ever created.
"""

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Set,
    Tuple,
)

import structlog

from .errors import CollisionFound, LevelMismatch
from .turing import Cell

log = structlog.get_logger(__name__)

Word = Tuple[int, ...]

WINDOW = 8
TAGS = 3


def sigma(word: Sequence[int]) -> Word:
    """Reversal"""
    return tuple(reversed(word))


class CodeFold(NamedTuple):
    """A level-7 term with the eight intermediate words that produced it"""

    term: int
    levels: Tuple[Word, ...]


class CodeBook:
    """Intern table for level-0 letters and canonical pair terms"""

    ZERO = 0
    MAX_LEVEL = WINDOW - 1

    def __init__(self):
        self._names: List[str] = ["0"]
        self._levels: List[Optional[int]] = [None]
        self._children: List[Tuple[int, int]] = [(0, 0)]
        self._pairs: Dict[Tuple[int, int], int] = {}
        self._decoded: Dict[int, Set[Word]] = defaultdict(set)

    def __len__(self) -> int:
        return len(self._names)

    def add_letter(self, name: str) -> int:
        term = len(self._names)
        self._names.append(name)
        self._levels.append(0)
        self._children.append((0, 0))
        return term

    def level(self, term: int) -> Optional[int]:
        """Level of a term; None for zero, which lives on every level"""
        return self._levels[term]

    def children(self, term: int) -> Tuple[int, int]:
        """Sorted pair of a level >= 1 term; (0, 0) for zero"""
        if self._levels[term] == 0:
            raise LevelMismatch(f"term {term} is a level-0 letter")
        return self._children[term]

    def name(self, term: int) -> str:
        if self._levels[term] in (None, 0):
            return self._names[term]
        return f"p{self._levels[term]}.{term}"

    def describe(self, term: int) -> str:
        """Nested bracket rendering of a term"""
        if self._levels[term] in (None, 0):
            return self._names[term]
        a, b = self._children[term]
        return f"[{self.describe(a)},{self.describe(b)}]"

    def terms_at(self, level: int) -> List[int]:
        return [t for t, lv in enumerate(self._levels) if lv == level]

    def _pair_level(self, a: int, b: int) -> Optional[int]:
        la, lb = self._levels[a], self._levels[b]
        if la is None:
            return lb
        if lb is not None and la != lb:
            raise LevelMismatch(f"cannot pair level {la} with level {lb}")
        return la

    def upair(self, a: int, b: int) -> int:
        if a == self.ZERO and b == self.ZERO:
            return self.ZERO
        level = self._pair_level(a, b)
        if level >= self.MAX_LEVEL:
            raise LevelMismatch(f"level {level} terms cannot be paired")

        key = (a, b) if a <= b else (b, a)
        term = self._pairs.get(key)
        if term is None:
            term = len(self._names)
            self._pairs[key] = term
            self._names.append("")
            self._levels.append(level + 1)
            self._children.append(key)
        return term

    def lookup_pair(self, a: int, b: int) -> Optional[int]:
        """Like upair, but never interns"""
        if a == self.ZERO and b == self.ZERO:
            return self.ZERO
        return self._pairs.get((a, b) if a <= b else (b, a))

    def _check_level(self, word: Sequence[int]) -> None:
        levels = {self._levels[t] for t in word} - {None}
        if len(levels) > 1:
            raise LevelMismatch(f"word mixes levels {sorted(levels)}")

    def pi_level(self, word: Sequence[int]) -> Word:
        if len(word) < 2:
            raise ValueError("pi_level needs a word of length at least 2")
        self._check_level(word)
        return tuple(self.upair(a, b) for a, b in zip(word, word[1:]))

    def pi8(self, word: Sequence[int]) -> CodeFold:
        if len(word) != WINDOW:
            raise ValueError(f"pi8 needs a word of length {WINDOW}, got {len(word)}")
        levels = [tuple(word)]
        while len(levels[-1]) > 1:
            levels.append(self.pi_level(levels[-1]))
        return CodeFold(levels[-1][0], tuple(levels))

    def code_of(self, word: Sequence[int]) -> Optional[int]:
        """Fold without interning; None when some pair was never seen"""
        current = tuple(word)
        while len(current) > 1:
            nxt = []
            for a, b in zip(current, current[1:]):
                term = self.lookup_pair(a, b)
                if term is None:
                    return None
                nxt.append(term)
            current = tuple(nxt)
        return current[0]

    def register(self, word: Sequence[int]) -> int:
        """Fold an 8-window and remember it as a preimage of its code"""
        term = self.pi8(word).term
        self._decoded[term].add(tuple(word))
        return term

    def decode(self, term: int) -> FrozenSet[Word]:
        """Registered windows folding to ``term``"""
        return frozenset(self._decoded.get(term, ()))

    def codes(self) -> Dict[int, FrozenSet[Word]]:
        return {term: frozenset(words) for term, words in self._decoded.items()}

    def _expand(self, word: Word) -> List[Word]:
        # each child of the first term fixes the rest of the word
        out = []
        for start in set(self._children[word[0]]):
            seq = [start]
            for term in word:
                a, b = self._children[term]
                if seq[-1] == a:
                    seq.append(b)
                elif seq[-1] == b:
                    seq.append(a)
                else:
                    break
            else:
                out.append(tuple(seq))
        return out

    def unfold(self, term: int, level: Optional[int] = None) -> Set[Word]:
        """
        Every level-0 word of length level + 1 folding to ``term``.

        Zero needs an explicit level; its only preimage is the zero word.
        """
        own = self._levels[term]
        if own is None:
            if level is None:
                raise ValueError("unfolding zero needs an explicit level")
        elif level is not None and level != own:
            raise LevelMismatch(f"term {term} has level {own}, not {level}")
        else:
            level = own

        words: Set[Word] = {(term,)}
        for _ in range(level):
            words = {w for word in words for w in self._expand(word)}
        return words


class TaggedAlphabet:
    """
    Base cells in three tagged copies: tag 0 is c, tag 1 is c', tag 2 is c''.

    Every copy of the blank cell is zero.
    """

    def __init__(self, codebook: CodeBook, cells: Sequence[Cell], blank: str):
        self.codebook = codebook
        self.blank = blank
        self._ids: Dict[Tuple[Cell, int], int] = {}
        self._base: Dict[int, Tuple[Cell, int]] = {}
        self.cells: Tuple[Cell, ...] = tuple(cells)

        for cell in self.cells:
            if self.is_zero(cell):
                continue
            for tag in range(TAGS):
                letter = codebook.add_letter(cell.label() + "'" * tag)
                self._ids[(cell, tag)] = letter
                self._base[letter] = (cell, tag)

    def is_zero(self, cell: Cell) -> bool:
        return cell.state is None and cell.symbol == self.blank

    @property
    def zero_cell(self) -> Cell:
        return Cell(self.blank)

    def letters(self) -> List[int]:
        """Nonzero level-0 letters"""
        return sorted(self._base)

    def letter(self, cell: Cell, tag: int) -> int:
        if self.is_zero(cell):
            return CodeBook.ZERO
        return self._ids[(cell, tag)]

    def base(self, letter: int) -> Optional[Tuple[Cell, int]]:
        """(cell, tag) of a letter, None for zero"""
        if letter == CodeBook.ZERO:
            return None
        return self._base[letter]

    def triple(self, cell: Cell) -> Word:
        return tuple(self.letter(cell, tag) for tag in range(TAGS))

    def mirror(self, cell: Cell) -> Word:
        return sigma(self.triple(cell))

    def name(self, letter: int) -> str:
        return self.codebook.name(letter)


@dataclass
class WindowSets:
    """Generic windows E and central windows S"""

    E: FrozenSet[Word]
    S: FrozenSet[Word]
    alphabet: TaggedAlphabet

    @property
    def union(self) -> FrozenSet[Word]:
        return self.E | self.S


def generic_word(tagged: TaggedAlphabet, cells: Sequence[Cell]) -> Word:
    """aa'a''bb'b''... for consecutive right-side cells"""
    return tuple(letter for cell in cells for letter in tagged.triple(cell))


def central_word(tagged: TaggedAlphabet, cells: Sequence[Cell]) -> Word:
    """... b''b'b a''a'a 000 aa'a'' bb'b'' ... for cells 0, 1, ... of the right side"""
    right = generic_word(tagged, cells)
    return sigma(right) + (CodeBook.ZERO,) * 3 + right


def windows_of(word: Sequence[int], width: int = WINDOW) -> List[Word]:
    return [tuple(word[i : i + width]) for i in range(len(word) - width + 1)]


def enum_windows(
    alphabet: Sequence[str],
    states: Sequence[str],
    codebook: Optional[CodeBook] = None,
) -> WindowSets:
    """Exhaustive E and S over Sigma u (Sigma x Q); ``alphabet[0]`` is the blank"""
    codebook = codebook or CodeBook()
    cells = [Cell(s) for s in alphabet] + [Cell(s, q) for q in states for s in alphabet]
    tagged = TaggedAlphabet(codebook, cells, alphabet[0])
    zero = (CodeBook.ZERO,) * 3

    generic: Set[Word] = set()
    for quad in itertools.product(cells, repeat=4):
        generic.update(windows_of(generic_word(tagged, quad)))

    central: Set[Word] = set()
    for a, b in itertools.product(cells, repeat=2):
        edge = tagged.letter(b, 0)
        word = (edge,) + tagged.mirror(a) + zero + tagged.triple(a) + (edge,)
        central.update(windows_of(word))

    log.debug("windows_enumerated", cells=len(cells), E=len(generic), S=len(central))
    return WindowSets(frozenset(generic), frozenset(central), tagged)


def doubled_collision(codebook: CodeBook, a: int, b: int) -> bool:
    """Whether a b a and b a b fold to the same level-1 word"""
    return codebook.pi_level((a, b, a)) == codebook.pi_level((b, a, b))


@dataclass
class SymcodeReport:
    """Injectivity-up-to-reversal check of pi8 on E u S"""

    alphabet: Tuple[str, ...]
    states: Tuple[str, ...]
    letters: int
    e_count: int
    s_count: int
    union_count: int
    overlap: int
    classes: int
    largest_class: int
    collisions: List[Tuple[Word, Word]] = field(default_factory=list)
    adjacency_violations: int = 0
    negative_control_collides: bool = False
    wider_preimages: int = 0
    worst_case_class_size: int = 0
    exhaustive_words: Optional[int] = None
    exhaustive_collisions: List[Tuple[Word, Word]] = field(default_factory=list)
    exhaustive_skipped: Optional[str] = None

    @property
    def ok(self) -> bool:
        return (
            not self.collisions
            and not self.exhaustive_collisions
            and self.adjacency_violations == 0
            and self.worst_case_class_size <= 2
        )

    def raise_for_status(self):
        found = self.collisions or self.exhaustive_collisions
        if found:
            raise CollisionFound(*found[0])
        if not self.ok:
            raise CollisionFound((), ())


def _class_collisions(words: Iterable[Word]) -> List[Tuple[Word, Word]]:
    words = sorted(words)
    return [
        (v, w) for v, w in itertools.combinations(words, 2) if w != sigma(v)
    ]


def _adjacency_violations(codebook: CodeBook, word: Word) -> int:
    count = 0
    for level in codebook.pi8(word).levels:
        count += sum(1 for a, b in zip(level, level[1:]) if a == b and a != CodeBook.ZERO)
    return count


def check_symcod(
    alphabet: Sequence[str],
    states: Sequence[str],
    brute_force: bool = False,
    exhaustive_limit: int = 2_000_000,
) -> SymcodeReport:
    """
    Fold every window of E u S and verify that each code class is {v} or
    {v, sigma(v)}.

    With ``brute_force`` every word of Gamma_0^8 is also folded against the
    interned pairs, provided there are at most ``exhaustive_limit`` of them.
    """
    codebook = CodeBook()
    windows = enum_windows(alphabet, states, codebook)
    tagged = windows.alphabet
    union = windows.union

    for word in sorted(union):
        codebook.register(word)

    classes = codebook.codes()
    collisions: List[Tuple[Word, Word]] = []
    for words in classes.values():
        if len(words) > 1:
            collisions.extend(_class_collisions(words))

    adjacency = sum(_adjacency_violations(codebook, word) for word in windows.E)

    wider = 0
    for term, words in classes.items():
        if term == CodeBook.ZERO:
            continue
        preimage = codebook.unfold(term, CodeBook.MAX_LEVEL)
        allowed = set(words) | {sigma(w) for w in words}
        if not preimage <= allowed:
            wider += len(words)

    letters = tagged.letters()
    control = len(letters) >= 2 and doubled_collision(codebook, letters[0], letters[1])

    worst = 0
    nonzero = [cell for cell in tagged.cells if not tagged.is_zero(cell)]
    if nonzero:
        worst_word = generic_word(tagged, [nonzero[0]] * 3)[:WINDOW]
        worst = len(codebook.decode(codebook.code_of(worst_word)))

    report = SymcodeReport(
        alphabet=tuple(alphabet),
        states=tuple(states),
        letters=len(letters),
        e_count=len(windows.E),
        s_count=len(windows.S),
        union_count=len(union),
        overlap=len(windows.E & windows.S),
        classes=len(classes),
        largest_class=max((len(w) for w in classes.values()), default=0),
        collisions=collisions,
        adjacency_violations=adjacency,
        negative_control_collides=control,
        wider_preimages=wider,
        worst_case_class_size=worst,
    )

    if brute_force:
        symbols = [CodeBook.ZERO] + letters
        total = len(symbols) ** WINDOW
        if total > exhaustive_limit:
            report.exhaustive_skipped = f"{total} words exceed the limit of {exhaustive_limit}"
        else:
            report.exhaustive_words = total
            for word in itertools.product(symbols, repeat=WINDOW):
                term = codebook.code_of(word)
                if term is None or term == CodeBook.ZERO:
                    continue
                known = classes.get(term)
                if known and word not in known and sigma(word) not in known:
                    report.exhaustive_collisions.append((min(known), word))

    log.info(
        "symcode_checked",
        windows=report.union_count,
        classes=report.classes,
        collisions=len(report.collisions),
        wider_preimages=report.wider_preimages,
        exhaustive=report.exhaustive_words,
    )
    return report
