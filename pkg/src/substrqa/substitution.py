"""Binary constant-length substitutions and their fixed points.

A substitution maps each of the letters 0 and 1 to a word of one common
length q >= 2 over {0, 1}.  Once the image of 0 starts with 0, iterating
from the letter 0 converges to an infinite fixed point; its orbit closure
is the subshift every other module works on.  This module provides parsing,
primitivity/periodicity classification, the start-with-0 normal form, and
fast fixed-point prefixes as numpy bit arrays.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParseError, ResourceLimitError

__all__ = [
    "ALPHABET",
    "FIXED_POINT_CAP",
    "BitSequence",
    "Classification",
    "Normalization",
    "SubshiftKind",
    "Substitution",
    "window_codes",
]

ALPHABET = "01"

# Longest fixed-point prefix we are willing to materialise, in letters.
FIXED_POINT_CAP = 1 << 26

_SWAP = str.maketrans("01", "10")


class BitSequence:
    """A finite 0/1 sequence backed by a read-only numpy uint8 array."""

    __slots__ = ("bits",)

    def __init__(self, bits) -> None:
        arr = np.array(bits, dtype=np.uint8, copy=True)
        if arr.ndim != 1:
            raise ParseError("bit sequence must be one-dimensional")
        if arr.size and int(arr.max()) > 1:
            raise ParseError("bit sequence entries must be 0 or 1")
        arr.setflags(write=False)
        self.bits = arr

    @classmethod
    def from_text(cls, text: str) -> "BitSequence":
        bad = set(text) - set(ALPHABET)
        if bad:
            raise ParseError(f"bit text contains {sorted(bad)!r}; only 0 and 1 are allowed")
        arr = np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0")
        return cls(arr)

    def to01(self) -> str:
        return (self.bits + ord("0")).astype(np.uint8).tobytes().decode("ascii")

    def __len__(self) -> int:
        return int(self.bits.size)

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return BitSequence(self.bits[idx])
        return int(self.bits[idx])

    def __iter__(self):
        return iter(int(b) for b in self.bits)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitSequence):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)

    __hash__ = None

    def __repr__(self) -> str:
        if len(self) <= 32:
            return f"BitSequence({self.to01()!r})"
        return f"BitSequence({self[:32].to01()!r}..., len={len(self)})"


def window_codes(bits: np.ndarray, width: int) -> np.ndarray:
    """Encode every length-`width` window of `bits` as a uint64.

    The window starting at i maps to sum(bits[i+t] << t), so two codes are
    equal exactly when the windows are equal letter by letter.  Requires
    1 <= width <= 64 and len(bits) >= width.
    """
    if not 1 <= width <= 64:
        raise DomainError(f"window width must be in [1, 64], got {width}")
    count = int(bits.size) - width + 1
    if count <= 0:
        raise DomainError(f"sequence of length {bits.size} has no windows of width {width}")
    codes = np.zeros(count, dtype=np.uint64)
    for t in range(width):
        codes |= bits[t : t + count].astype(np.uint64) << np.uint64(t)
    return codes


class Normalization(str, enum.Enum):
    """How a substitution was brought to the image0-starts-with-0 form."""

    IDENTITY = "identity"
    LETTER_SWAP = "letter_swap"
    SQUARE = "square"


class SubshiftKind(str, enum.Enum):
    """Coarse classification of the subshift a substitution generates."""

    PRIMITIVE_APERIODIC = "primitive_aperiodic"
    PRIMITIVE_PERIODIC = "primitive_periodic"
    # One letter maps to its own constant block and absorbs the dynamics.
    NONPRIMITIVE_PROXIMAL = "nonprimitive_proximal"
    # Both images are constant blocks; the subshift holds only constant points.
    NONPRIMITIVE_TRIVIAL = "nonprimitive_trivial"


@dataclass(frozen=True)
class Classification:
    kind: SubshiftKind
    normalized: "Substitution"
    normalization: Normalization
    absorbing_letter: int | None = None


@dataclass(frozen=True)
class Substitution:
    """A map sending the letters 0 and 1 to equal-length binary words."""

    image0: str
    image1: str

    def __post_init__(self) -> None:
        for letter, img in enumerate((self.image0, self.image1)):
            if not isinstance(img, str) or not img:
                raise ParseError(f"image of {letter} must be a nonempty string")
            bad = set(img) - set(ALPHABET)
            if bad:
                raise ParseError(f"image of {letter} contains {sorted(bad)!r}; only 0 and 1 are allowed")
        if len(self.image0) != len(self.image1):
            raise ParseError(
                f"images must have equal length, got {len(self.image0)} and {len(self.image1)}"
            )
        if len(self.image0) < 2:
            raise DomainError("images must have length at least 2")

    # -- construction and presentation --------------------------------------

    @classmethod
    def parse(cls, text: str) -> "Substitution":
        """Parse '0->01,1->10'; the bare form '01,10' is also accepted."""
        parts = [p.strip() for p in text.strip().split(",")]
        if len(parts) != 2:
            raise ParseError(f"expected two comma-separated images, got {len(parts)}: {text!r}")
        if any("->" in p for p in parts):
            images: list[str | None] = [None, None]
            for part in parts:
                lhs, sep, rhs = part.partition("->")
                if not sep:
                    raise ParseError(f"mixed arrow and bare image forms in {text!r}")
                lhs = lhs.strip()
                if lhs not in ("0", "1"):
                    raise ParseError(f"left side of {part!r} must be the letter 0 or 1")
                if images[int(lhs)] is not None:
                    raise ParseError(f"duplicate image for letter {lhs} in {text!r}")
                images[int(lhs)] = rhs.strip()
            return cls(images[0], images[1])
        return cls(parts[0], parts[1])

    def __str__(self) -> str:
        return f"0->{self.image0},1->{self.image1}"

    @property
    def q(self) -> int:
        return len(self.image0)

    @property
    def images(self) -> tuple[str, str]:
        return (self.image0, self.image1)

    def image(self, letter: int) -> str:
        if letter not in (0, 1):
            raise DomainError(f"letter must be 0 or 1, got {letter!r}")
        return self.images[letter]

    # -- word actions -------------------------------------------------------

    def apply(self, word: str) -> str:
        bad = set(word) - set(ALPHABET)
        if bad:
            raise ParseError(f"word contains {sorted(bad)!r}; only 0 and 1 are allowed")
        return word.translate(str.maketrans({"0": self.image0, "1": self.image1}))

    def iterate(self, k: int, seed: str = "0") -> str:
        if k < 0:
            raise DomainError("iteration count must be nonnegative")
        word = seed
        for _ in range(k):
            if len(word) * self.q > FIXED_POINT_CAP:
                raise ResourceLimitError(
                    f"iterate({k}) would exceed the {FIXED_POINT_CAP}-letter cap"
                )
            word = self.apply(word)
        return word

    def compose(self, other: "Substitution") -> "Substitution":
        """Substitution acting as self after other (lengths multiply)."""
        return Substitution(self.apply(other.image0), self.apply(other.image1))

    def square(self) -> "Substitution":
        return self.compose(self)

    # -- structure ----------------------------------------------------------

    def zero_counts(self) -> tuple[int, int]:
        """Occurrences of the letter 0 in the images of 0 and of 1."""
        return (self.image0.count("0"), self.image1.count("0"))

    def composition_matrix(self) -> np.ndarray:
        """2x2 integer matrix: entry [a, b] counts letter a in the image of b."""
        a, b = self.zero_counts()
        return np.array([[a, b], [self.q - a, self.q - b]], dtype=np.int64)

    def is_primitive(self) -> bool:
        # For 2x2 nonnegative matrices, primitivity shows up by the square.
        m = self.composition_matrix()
        return bool((m @ m > 0).all())

    def normalize(self) -> tuple["Substitution", Normalization]:
        """Equivalent substitution whose image of 0 starts with 0.

        Three cases: already in that form; images start 1/1, where
        exchanging the letter names everywhere puts it in that form; or
        images start 1/0, where the square of the substitution does.  All
        three generate the same subshift up to the letter exchange, which
        no quantity downstream distinguishes.
        """
        if self.image0[0] == "0":
            return self, Normalization.IDENTITY
        if self.image1[0] == "1":
            swapped = Substitution(self.image1.translate(_SWAP), self.image0.translate(_SWAP))
            return swapped, Normalization.LETTER_SWAP
        return self.square(), Normalization.SQUARE

    def is_aperiodic(self) -> bool:
        """Whether the (primitive) substitution's subshift has no periodic point."""
        if not self.is_primitive():
            raise DomainError("aperiodicity test requires a primitive substitution")
        normalized, _ = self.normalize()
        return _normalized_is_aperiodic(normalized)

    def classify(self) -> Classification:
        q = self.q
        zeros, ones = "0" * q, "1" * q
        if self.image0 in (zeros, ones) and self.image1 in (zeros, ones):
            return Classification(SubshiftKind.NONPRIMITIVE_TRIVIAL, self, Normalization.IDENTITY)
        if self.image0 == zeros:
            return Classification(
                SubshiftKind.NONPRIMITIVE_PROXIMAL, self, Normalization.IDENTITY, absorbing_letter=0
            )
        if self.image1 == ones:
            return Classification(
                SubshiftKind.NONPRIMITIVE_PROXIMAL, self, Normalization.IDENTITY, absorbing_letter=1
            )
        # Remaining shapes always have a strictly positive squared matrix.
        assert self.is_primitive()
        normalized, how = self.normalize()
        if _normalized_is_aperiodic(normalized):
            kind = SubshiftKind.PRIMITIVE_APERIODIC
        else:
            kind = SubshiftKind.PRIMITIVE_PERIODIC
        return Classification(kind, normalized, how)

    # -- fixed point --------------------------------------------------------

    def image_table(self) -> np.ndarray:
        """(2, q) uint8 array whose row a holds the letters of the image of a."""
        return np.array(
            [[int(c) for c in self.image0], [int(c) for c in self.image1]],
            dtype=np.uint8,
        )

    def fixed_point_prefix(self, n: int) -> BitSequence:
        """First n letters of the fixed point grown from the letter 0.

        Requires the image of 0 to start with 0 (see normalize()).  Grows by
        substituting a numpy letter array in place, truncating intermediate
        stages so memory stays near n letters.
        """
        if n < 0:
            raise DomainError("prefix length must be nonnegative")
        if self.image0[0] != "0":
            raise DomainError(
                "fixed point needs the image of 0 to start with 0; normalize() first"
            )
        if n > FIXED_POINT_CAP:
            raise ResourceLimitError(
                f"prefix of {n} letters exceeds the {FIXED_POINT_CAP}-letter cap"
            )
        table = self.image_table()
        seq = np.array([0], dtype=np.uint8)
        while seq.size < n:
            limit = -(-n // self.q)
            if seq.size > limit:
                seq = seq[:limit]
            seq = table[seq].reshape(-1)
        return BitSequence(seq[:n])


def _normalized_is_aperiodic(sub: Substitution) -> bool:
    # Assumes primitivity and image0 starting with 0.  The subshift is
    # periodic exactly when both images are equal, one image is constant,
    # or the images strictly alternate letters (odd length only).
    if sub.image0 == sub.image1:
        return False
    if "1" not in sub.image0 or "0" not in sub.image1:
        return False
    q = sub.q
    if q % 2 == 1:
        s = q // 2
        if sub.image0 == "01" * s + "0" and sub.image1 == "10" * s + "1":
            return False
    return True
