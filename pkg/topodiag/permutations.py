"""
Permutation words, signed permutation words, and their dense Lehmer ranks.

Words use the symbols 1..n. Generators act on POSITIONS: applying the position
map ``sigma`` to ``w`` gives ``w'`` with ``w'[j] = w[sigma[j]]``.
"""

from dataclasses import dataclass
from itertools import permutations as _lex_permutations
from math import factorial
from typing import Iterator, Sequence, Tuple

from topodiag.errors import SpecError

PositionMap = Tuple[int, ...]


def lehmer_rank(word: Sequence[int]) -> int:
    """Rank of ``word`` among all permutations of its symbols in lexicographic order."""
    n = len(word)
    rank = 0
    for i in range(n):
        smaller = sum(1 for j in range(i + 1, n) if word[j] < word[i])
        rank += smaller * factorial(n - 1 - i)
    return rank


def lehmer_unrank(rank: int, n: int) -> Tuple[int, ...]:
    if not 0 <= rank < factorial(n):
        raise SpecError(f"rank {rank} is outside 0..{factorial(n) - 1}")
    pool = list(range(1, n + 1))
    word = []
    for i in range(n - 1, -1, -1):
        digit, rank = divmod(rank, factorial(i))
        word.append(pool.pop(digit))
    return tuple(word)


def transposition(n: int, a: int, b: int) -> PositionMap:
    """Position map swapping positions ``a`` and ``b`` (1-based)."""
    sigma = list(range(n))
    sigma[a - 1], sigma[b - 1] = sigma[b - 1], sigma[a - 1]
    return tuple(sigma)


def three_cycle(n: int, a: int, b: int, c: int) -> PositionMap:
    """Position map cycling positions a -> b -> c -> a (1-based)."""
    sigma = list(range(n))
    sigma[a - 1], sigma[b - 1], sigma[c - 1] = b - 1, c - 1, a - 1
    return tuple(sigma)


def compose(n: int, first: PositionMap, second: PositionMap) -> PositionMap:
    """Position map equal to applying ``first`` and then ``second``."""
    return tuple(first[second[j]] for j in range(n))


@dataclass(frozen=True)
class Permutation:
    word: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.word) != list(range(1, len(self.word) + 1)):
            raise SpecError(f"{self.word} is not a permutation of 1..{len(self.word)}")

    @property
    def n(self) -> int:
        return len(self.word)

    @property
    def parity(self) -> int:
        """0 for even permutations, 1 for odd."""
        w = self.word
        inversions = sum(1 for i in range(self.n) for j in range(i + 1, self.n) if w[i] > w[j])
        return inversions & 1

    @property
    def rank(self) -> int:
        return lehmer_rank(self.word)

    @property
    def last(self) -> int:
        return self.word[-1]

    def act(self, sigma: PositionMap) -> "Permutation":
        return Permutation(tuple(self.word[s] for s in sigma))

    def __str__(self) -> str:
        return " ".join(map(str, self.word))


def all_permutations(n: int) -> Iterator[Permutation]:
    """All permutations of 1..n in lexicographic (rank) order."""
    for word in _lex_permutations(range(1, n + 1)):
        yield Permutation(word)


def even_permutations(n: int) -> Iterator[Permutation]:
    """
    Even permutations in rank order.

    Lexicographic neighbours at ranks 2j and 2j+1 differ by one swap of the
    last two positions, so each pair holds exactly one even word and
    ``rank // 2`` is a dense index into the alternating group.
    """
    return (p for p in all_permutations(n) if p.parity == 0)


def alternating_index(p: Permutation) -> int:
    return p.rank // 2 if p.n > 1 else 0


@dataclass(frozen=True)
class SignedPermutation:
    word: Tuple[int, ...]

    def __post_init__(self):
        if sorted(abs(s) for s in self.word) != list(range(1, len(self.word) + 1)):
            raise SpecError(f"{self.word} is not a signed permutation of 1..{len(self.word)}")

    @property
    def n(self) -> int:
        return len(self.word)

    @property
    def unsigned(self) -> Permutation:
        return Permutation(tuple(abs(s) for s in self.word))

    @property
    def sign_bits(self) -> int:
        return sum(1 << j for j, s in enumerate(self.word) if s < 0)

    @property
    def index(self) -> int:
        """Dense index: rank of the unsigned word times 2^n plus the sign bits."""
        return self.unsigned.rank * (1 << self.n) + self.sign_bits

    @property
    def last(self) -> int:
        return self.word[-1]

    def prefix_reversal(self, i: int) -> "SignedPermutation":
        """Reverse the first ``i`` entries and negate each of them."""
        if not 1 <= i <= self.n:
            raise SpecError(f"prefix length {i} is outside 1..{self.n}")
        head = tuple(-s for s in reversed(self.word[:i]))
        return SignedPermutation(head + self.word[i:])

    def __str__(self) -> str:
        return " ".join(map(str, self.word))


def all_signed_permutations(n: int) -> Iterator[SignedPermutation]:
    """All signed permutations of 1..n, in dense index order."""
    for p in all_permutations(n):
        for signs in range(1 << n):
            yield SignedPermutation(
                tuple(-s if signs >> j & 1 else s for j, s in enumerate(p.word))
            )

