"""Canonical sentence language for separable decompositions.

Grammar (ASCII, fixed byte-exactly so description length is well defined):

    sentence = term (" + " term)*
    term     = "p[" index "]*" factor ("x" factor)*
    factor   = "r(" party ")"                 single-party block
             | "F(" party ("," party)* ")"    entangled block, >= 2 parties
    index    = 1-based position of the term in canonical RGS order
    party    = decimal in 0..n-1

Blocks appear in canonical order (by minimum party, parties ascending);
weights are symbolic indices, not numbers. The parser is a strict inverse
of the serializer: it rejects anything the serializer cannot emit, so the
pair is a bijection. An LZ78 codec provides the description-length probe.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple, Union

from .partitions import DisentangledForm, PartitionTerm, bell_number, iter_terms


class SentenceSyntaxError(ValueError):
    """Input does not match the sentence grammar; carries the byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte {offset})")
        self.offset = offset


class SentenceSemanticError(ValueError):
    """Grammatical input that is not a canonical decomposition sentence."""


@dataclass(frozen=True)
class SentenceText:
    """A serialized decomposition plus the counts metrics are built from."""

    n: int
    text: str
    term_count: int


def format_term(term: PartitionTerm, index: int) -> str:
    """Render one term with its 1-based canonical index."""
    factors = []
    for block in term.blocks:
        if len(block) == 1:
            factors.append(f"r({block[0]})")
        else:
            factors.append("F(" + ",".join(str(p) for p in block) + ")")
    return f"p[{index}]*" + "x".join(factors)


def serialize_form(form: DisentangledForm) -> SentenceText:
    """Serialize a full decomposition to its canonical sentence."""
    text = " + ".join(
        format_term(term, k) for k, term in enumerate(form.terms, 1)
    )
    return SentenceText(n=form.n, text=text, term_count=len(form.terms))


def iter_sentence_chunks(n: int) -> Iterator[str]:
    """Canonical sentence for n parties as a stream of text chunks.

    Memory stays constant, so this serves the large-n cases where the
    materialized form would not fit comfortably.
    """
    for k, term in enumerate(iter_terms(n), 1):
        if k > 1:
            yield " + "
        yield format_term(term, k)


# --- parser -----------------------------------------------------------


def _parse_number(text: str, pos: int) -> Tuple[int, int]:
    start = pos
    while pos < len(text) and text[pos].isdigit():
        pos += 1
    if pos == start:
        raise SentenceSyntaxError("expected a number", start)
    literal = text[start:pos]
    if len(literal) > 1 and literal[0] == "0":
        raise SentenceSyntaxError("number has a leading zero", start)
    return int(literal), pos


def _expect(text: str, pos: int, token: str) -> int:
    if not text.startswith(token, pos):
        raise SentenceSyntaxError(f"expected {token!r}", pos)
    return pos + len(token)


def _parse_factor(text: str, pos: int) -> Tuple[List[int], int]:
    if pos >= len(text):
        raise SentenceSyntaxError("expected a factor", pos)
    kind = text[pos]
    if kind == "r":
        pos = _expect(text, pos + 1, "(")
        party, pos = _parse_number(text, pos)
        pos = _expect(text, pos, ")")
        return [party], pos
    if kind == "F":
        pos = _expect(text, pos + 1, "(")
        parties = []
        party, pos = _parse_number(text, pos)
        parties.append(party)
        while pos < len(text) and text[pos] == ",":
            party, pos = _parse_number(text, pos + 1)
            parties.append(party)
        pos = _expect(text, pos, ")")
        if len(parties) < 2:
            raise SentenceSyntaxError("F(...) needs at least two parties", pos)
        return parties, pos
    raise SentenceSyntaxError("expected factor 'r(' or 'F('", pos)


def _parse_term(text: str, pos: int) -> Tuple[int, List[List[int]], int]:
    pos = _expect(text, pos, "p[")
    index, pos = _parse_number(text, pos)
    pos = _expect(text, pos, "]*")
    blocks = []
    parties, pos = _parse_factor(text, pos)
    blocks.append(parties)
    while pos < len(text) and text[pos] == "x":
        parties, pos = _parse_factor(text, pos + 1)
        blocks.append(parties)
    return index, blocks, pos


def parse_sentence(text: Union[str, bytes]) -> DisentangledForm:
    """Parse a canonical sentence back into its decomposition.

    Strictness is the point: weight indices must run 1,2,...; parties must
    be ascending inside factors and factors ordered by first party; terms
    must be strictly increasing in RGS order; every term must cover all
    parties; and the term list must be the complete enumeration for the
    reconstructed n. A single trailing newline is tolerated.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("ascii")
        except UnicodeDecodeError as exc:
            raise SentenceSyntaxError("non-ASCII byte", exc.start) from None
    if text.endswith("\n"):
        text = text[:-1]

    raw_terms = []
    pos = 0
    while True:
        index, blocks, pos = _parse_term(text, pos)
        raw_terms.append((index, blocks))
        if pos == len(text):
            break
        pos = _expect(text, pos, " + ")

    n = 1 + max(p for _, blocks in raw_terms for block in blocks for p in block)

    terms = []
    for position, (index, blocks) in enumerate(raw_terms, 1):
        if index != position:
            raise SentenceSemanticError(
                f"non-canonical order: weight index p[{index}] at position {position}"
            )
        seen = set()
        for block in blocks:
            if any(a >= b for a, b in zip(block, block[1:])):
                raise SentenceSemanticError(
                    f"non-canonical order: parties not ascending in term {position}"
                )
            seen.update(block)
        firsts = [block[0] for block in blocks]
        if any(a >= b for a, b in zip(firsts, firsts[1:])):
            raise SentenceSemanticError(
                f"non-canonical order: blocks out of order in term {position}"
            )
        covered = sum(len(block) for block in blocks)
        if covered != len(seen):
            raise SentenceSemanticError(f"duplicate party in term {position}")
        if len(blocks) == 1:
            raise SentenceSemanticError(
                f"full-block term: term {position} covers every party"
            )
        if seen != set(range(n)):
            raise SentenceSemanticError(
                f"term {position} does not cover parties 0..{n - 1}"
            )
        terms.append(PartitionTerm.from_blocks(blocks))

    for prev, cur in zip(terms, terms[1:]):
        if prev.rgs == cur.rgs:
            raise SentenceSemanticError("duplicate term")
        if prev.rgs > cur.rgs:
            raise SentenceSemanticError("non-canonical order: terms out of RGS order")

    expected = bell_number(n) - 1
    if len(terms) != expected:
        raise SentenceSemanticError(
            f"incomplete form: {len(terms)} terms, the full n={n} decomposition has {expected}"
        )
    return DisentangledForm(n=n, terms=tuple(terms))


# --- LZ78 codec -------------------------------------------------------


class Lz78FormatError(ValueError):
    """Token stream cannot have been produced by the encoder."""


@dataclass(frozen=True)
class Lz78Encoding:
    """LZ78 parse of a byte string.

    Tokens are (prefix_index, next_byte) with prefix 0 the empty phrase;
    a final (prefix_index, None) token marks input that ends inside an
    already-known phrase. coded_bits charges each token ceil(log2(k)) bits
    for its prefix (k the 1-based token position) plus 8 for the symbol
    slot, plus one end-marker flag bit for the whole stream.
    """

    tokens: Tuple[Tuple[int, Optional[int]], ...]
    phrase_count: int
    coded_bits: int


class Lz78Encoder:
    """Incremental LZ78 encoder; feed chunks, then finish()."""

    def __init__(self):
        self._children = {}  # (node << 8) | byte -> node
        self._node = 0
        self._next_id = 1
        self._tokens: List[Tuple[int, Optional[int]]] = []

    def update(self, chunk: bytes) -> None:
        children = self._children
        node = self._node
        next_id = self._next_id
        tokens = self._tokens
        for byte in chunk:
            key = (node << 8) | byte
            child = children.get(key)
            if child is None:
                tokens.append((node, byte))
                children[key] = next_id
                next_id += 1
                node = 0
            else:
                node = child
        self._node = node
        self._next_id = next_id

    def finish(self) -> Lz78Encoding:
        tokens = list(self._tokens)
        if self._node != 0:
            tokens.append((self._node, None))
        bits = 1  # end-marker flag for the stream
        for k in range(1, len(tokens) + 1):
            bits += (k - 1).bit_length() + 8
        return Lz78Encoding(
            tokens=tuple(tokens), phrase_count=len(tokens), coded_bits=bits
        )


def lz78_encode(data: bytes) -> Lz78Encoding:
    """Parse data into LZ78 phrases (longest known match plus one byte)."""
    encoder = Lz78Encoder()
    encoder.update(data)
    return encoder.finish()


def lz78_decode(enc: Lz78Encoding) -> bytes:
    """Reconstruct the exact source bytes from an LZ78 token stream."""
    phrases: List[bytes] = [b""]
    out = []
    total = len(enc.tokens)
    for k, (prefix, byte) in enumerate(enc.tokens, 1):
        if not 0 <= prefix < k:
            raise Lz78FormatError(f"token {k}: prefix {prefix} not yet defined")
        if byte is None:
            if k != total:
                raise Lz78FormatError(f"token {k}: end marker before final token")
            out.append(phrases[prefix])
        else:
            if not 0 <= byte <= 255:
                raise Lz78FormatError(f"token {k}: byte {byte} out of range")
            phrase = phrases[prefix] + bytes([byte])
            phrases.append(phrase)
            out.append(phrase)
    return b"".join(out)


def sentence_metrics(text: Union[str, bytes]) -> dict:
    """Description-length metrics of a canonical sentence.

    Reports sizes only; compressibility here carries no claim about
    whether the decomposition itself could have fewer terms.
    """
    form = parse_sentence(text)
    if isinstance(text, str):
        data = text.encode("ascii")
    else:
        data = bytes(text)
    if data.endswith(b"\n"):
        data = data[:-1]
    enc = lz78_encode(data)
    return {
        "raw_bytes": len(data),
        "term_count": len(form.terms),
        "phrase_count": enc.phrase_count,
        "coded_bits": enc.coded_bits,
        "ratio": enc.coded_bits / (8 * len(data)),
    }
