import warnings

import numpy as np
import pytest

from entkit.partitions import enumerate_terms, iter_terms, term_count
from entkit.sentences import (
    Lz78FormatError,
    Lz78Encoding,
    SentenceSemanticError,
    SentenceSyntaxError,
    format_term,
    iter_sentence_chunks,
    lz78_decode,
    lz78_encode,
    parse_sentence,
    sentence_metrics,
    serialize_form,
)

CANONICAL_N2 = "p[1]*r(0)xr(1)"
CANONICAL_N3 = (
    "p[1]*F(0,1)xr(2) + p[2]*F(0,2)xr(1) + p[3]*r(0)xF(1,2) + p[4]*r(0)xr(1)xr(2)"
)


# --- serialization -----------------------------------------------------


def test_serialize_two_parties():
    s = serialize_form(enumerate_terms(2))
    assert s.text == CANONICAL_N2
    assert s.term_count == 1
    assert s.n == 2


def test_serialize_three_parties():
    assert serialize_form(enumerate_terms(3)).text == CANONICAL_N3


def test_serialize_first_term_four_parties():
    first = next(iter_terms(4))
    assert format_term(first, 1) == "p[1]*F(0,1,2)xr(3)"


def test_streamed_chunks_match_serialization():
    for n in (2, 3, 5):
        assert "".join(iter_sentence_chunks(n)) == serialize_form(enumerate_terms(n)).text


# --- parsing -----------------------------------------------------------


def test_parse_two_parties():
    form = parse_sentence(CANONICAL_N2)
    assert form.n == 2
    assert [t.blocks for t in form.terms] == [((0,), (1,))]


def test_roundtrip_small_n():
    for n in range(2, 9):
        form = enumerate_terms(n)
        assert parse_sentence(serialize_form(form).text) == form


def test_parse_accepts_bytes_and_trailing_newline():
    form = enumerate_terms(3)
    assert parse_sentence(CANONICAL_N3.encode("ascii")) == form
    assert parse_sentence(CANONICAL_N3 + "\n") == form


def test_parse_full_block_term():
    with pytest.raises(SentenceSemanticError, match="full-block"):
        parse_sentence("p[1]*F(0,1,2)")


def test_parse_single_r_is_full_block():
    with pytest.raises(SentenceSemanticError, match="full-block"):
        parse_sentence("p[1]*r(0)")


def test_parse_non_canonical_term_order():
    swapped = (
        "p[1]*F(0,2)xr(1) + p[2]*F(0,1)xr(2) + p[3]*r(0)xF(1,2) + p[4]*r(0)xr(1)xr(2)"
    )
    with pytest.raises(SentenceSemanticError, match="non-canonical"):
        parse_sentence(swapped)


def test_parse_weight_index_out_of_sequence():
    with pytest.raises(SentenceSemanticError, match="non-canonical"):
        parse_sentence("p[2]*r(0)xr(1)")


def test_parse_unsorted_parties():
    with pytest.raises(SentenceSemanticError, match="non-canonical"):
        parse_sentence("p[1]*F(1,0)xr(2) + p[2]*F(0,2)xr(1) + p[3]*r(0)xF(1,2)"
                       " + p[4]*r(0)xr(1)xr(2)")


def test_parse_duplicate_party():
    with pytest.raises(SentenceSemanticError, match="duplicate party"):
        parse_sentence("p[1]*F(0,1)xr(1)")


def test_parse_incomplete_form():
    # three of the four n=3 terms
    partial = "p[1]*F(0,1)xr(2) + p[2]*F(0,2)xr(1) + p[3]*r(0)xF(1,2)"
    with pytest.raises(SentenceSemanticError, match="incomplete form"):
        parse_sentence(partial)


def test_parse_term_missing_party():
    with pytest.raises(SentenceSemanticError, match="does not cover"):
        parse_sentence("p[1]*F(0,1)xr(3) + p[2]*r(0)xr(1)xr(3)")


def test_parse_syntax_error_offsets():
    with pytest.raises(SentenceSyntaxError) as info:
        parse_sentence("q[1]*r(0)xr(1)")
    assert info.value.offset == 0
    with pytest.raises(SentenceSyntaxError) as info:
        parse_sentence("p[1]*r(0)yr(1)")
    assert info.value.offset == 9
    with pytest.raises(SentenceSyntaxError):
        parse_sentence("p[01]*r(0)xr(1)")  # leading zero
    with pytest.raises(SentenceSyntaxError):
        parse_sentence("")


def test_parse_rejects_trailing_garbage():
    with pytest.raises(SentenceSyntaxError):
        parse_sentence(CANONICAL_N2 + " ")
    with pytest.raises(SentenceSyntaxError):
        parse_sentence(CANONICAL_N2 + " + ")


# --- LZ78 --------------------------------------------------------------


def test_lz78_empty():
    enc = lz78_encode(b"")
    assert enc.phrase_count == 0
    assert lz78_decode(enc) == b""


def test_lz78_hand_run_aaaa():
    # parse: "a" -> (0,a); "aa" -> (1,a); final "a" is a known phrase -> (1, end)
    enc = lz78_encode(b"aaaa")
    assert enc.tokens == ((0, ord("a")), (1, ord("a")), (1, None))
    assert enc.phrase_count == 3
    # bits: (0+8) + (1+8) + (2+8) + 1 end flag
    assert enc.coded_bits == 28
    assert lz78_decode(enc) == b"aaaa"


def test_lz78_roundtrip_random():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        length = int(rng.integers(0, 1025))
        data = bytes(rng.integers(0, 256, size=length, dtype=np.uint8))
        assert lz78_decode(lz78_encode(data)) == data


def test_lz78_roundtrip_sentences():
    for n in range(2, 8):
        data = serialize_form(enumerate_terms(n)).text.encode("ascii")
        assert lz78_decode(lz78_encode(data)) == data


def test_lz78_coded_bits_formula():
    enc = lz78_encode(b"abcabc")
    total = 1
    for k in range(1, enc.phrase_count + 1):
        total += (k - 1).bit_length() + 8
    assert enc.coded_bits == total


def test_lz78_decode_rejects_bad_prefix():
    with pytest.raises(Lz78FormatError):
        lz78_decode(Lz78Encoding(tokens=((1, 97),), phrase_count=1, coded_bits=9))


def test_lz78_decode_rejects_inner_end_marker():
    bad = Lz78Encoding(tokens=((0, 97), (1, None), (0, 98)), phrase_count=3, coded_bits=0)
    with pytest.raises(Lz78FormatError):
        lz78_decode(bad)


# --- metrics -----------------------------------------------------------


def test_metrics_two_parties():
    m = sentence_metrics(CANONICAL_N2)
    assert m["raw_bytes"] == len(CANONICAL_N2) == 14
    assert m["term_count"] == 1
    assert m["ratio"] == m["coded_bits"] / (8 * m["raw_bytes"])


def test_metrics_term_counts():
    assert sentence_metrics(CANONICAL_N3)["term_count"] == 4
    text5 = serialize_form(enumerate_terms(5)).text
    assert sentence_metrics(text5)["term_count"] == term_count(5) == 51


def test_metrics_propagate_parse_errors():
    with pytest.raises(SentenceSemanticError):
        sentence_metrics("p[1]*F(0,1)")


def test_raw_bytes_growth_and_bounds():
    sizes = {}
    phrase_counts = {}
    for n in range(2, 9):
        m = sentence_metrics(serialize_form(enumerate_terms(n)).text)
        t = m["term_count"]
        assert m["raw_bytes"] >= 10 * t - 3
        assert m["raw_bytes"] >= t
        sizes[n] = m["raw_bytes"]
        phrase_counts[n] = m["phrase_count"]
    assert all(sizes[n] < sizes[n + 1] for n in range(2, 8))
    # recorded, not assumed: flag a phrase-count inversion without failing
    if not all(phrase_counts[n] <= phrase_counts[n + 1] for n in range(2, 8)):
        warnings.warn(f"phrase counts not monotone: {phrase_counts}")
