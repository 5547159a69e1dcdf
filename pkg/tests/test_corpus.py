import json
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_counts
from pming.errors import DuplicateDocument, EmptyCorpus, ParseError
from pming.providers import CorpusIndex, index_corpus, index_path, iter_documents, lookup_counts
from pming.measures import PairCounts

DOCS = [(1, "cat dog"), (2, "cat"), (3, "dog bird")]


@pytest.fixture
def small():
    return index_corpus(DOCS)


def test_occurrence(small):
    assert small.occurrence("cat") == 2
    assert small.occurrence("dog") == 2
    assert small.corpus_size() == 3


def test_cooccurrence(small):
    assert small.cooccurrence("cat", "dog") == 1
    assert small.cooccurrence("dog", "cat") == 1


def test_lookup_counts(small):
    assert lookup_counts(small, "cat", "dog") == PairCounts(2, 2, 1, 3)
    assert lookup_counts(small, "cat", "cat") == PairCounts(2, 2, 2, 3)
    assert lookup_counts(small, "fish", "dog") == PairCounts(0, 2, 0, 3)


def test_empty_corpus():
    with pytest.raises(EmptyCorpus):
        index_corpus([])


def test_duplicate_document():
    with pytest.raises(DuplicateDocument):
        index_corpus([(1, "a"), (1, "b")])


def test_token_free_documents_count():
    idx = index_corpus([("x", "cat"), ("y", "!!!"), ("z", "")])
    assert idx.corpus_size() == 3
    assert idx.occurrence("cat") == 1


def test_document_frequency_not_token_frequency():
    idx = index_corpus([(1, "cat cat cat"), (2, "dog")])
    assert idx.occurrence("cat") == 1


def test_multi_token_terms_use_and(small):
    assert small.occurrence("cat dog") == 1
    assert small.occurrence("dog cat") == 1
    assert small.cooccurrence("cat dog", "bird") == 0
    assert small.occurrence("dog fish") == 0


def test_postings_strictly_sorted():
    idx = index_corpus([(i, f"t{i % 3} common") for i in range(30)])
    for arr in idx.postings.values():
        assert np.all(np.diff(arr) > 0)


def test_pairwise_counts_match_single_queries(small):
    terms = ["cat", "dog", "bird", "fish", "cat dog"]
    occ, mat = small.pairwise_counts(terms)
    for i, x in enumerate(terms):
        assert occ[i] == small.occurrence(x)
        for j, y in enumerate(terms):
            assert mat[i, j] == small.cooccurrence(x, y)


def test_save_and_load_round_trip(tmp_path, small):
    path = tmp_path / "idx.json"
    small.save(path)
    loaded = CorpusIndex.load(path)
    assert loaded.corpus_size() == 3
    assert loaded.cooccurrence("cat", "dog") == 1
    assert loaded.doc_ids == [1, 2, 3]
    assert "built_at" in loaded.metadata


def test_load_rejects_garbage(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError) as err:
        CorpusIndex.load(bad)
    assert "line 1" in str(err.value)
    other = tmp_path / "other.json"
    other.write_text(json.dumps({"format": "pming-corpus-index", "doc_ids": [1], "postings": {"a": [3]}}))
    with pytest.raises(ParseError):
        CorpusIndex.load(other)


def test_directory_corpus(tmp_path):
    (tmp_path / "sub").mkdir()
    (tmp_path / "one.txt").write_text("Cat dog", encoding="utf-8")
    (tmp_path / "sub" / "two.txt").write_text("cat", encoding="utf-8")
    (tmp_path / "ignored.md").write_text("cat", encoding="utf-8")
    docs = dict(iter_documents(tmp_path))
    assert set(docs) == {"one.txt", "sub/two.txt"}
    idx = index_path(tmp_path)
    assert idx.occurrence("cat") == 2
    assert idx.metadata["sources"] == [str(tmp_path)]


def test_jsonl_corpus(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text('{"id": "a", "text": "cat dog"}\n\n{"id": "b", "text": "dog"}\n', encoding="utf-8")
    assert list(iter_documents(path)) == [("a", "cat dog"), ("b", "dog")]
    path.write_text('{"id": "a", "text": 3}\n', encoding="utf-8")
    with pytest.raises(ParseError) as err:
        list(iter_documents(path))
    assert "line 1" in str(err.value)


VOCAB = [f"w{i}" for i in range(20)]


@st.composite
def corpora(draw):
    docs = draw(st.lists(st.lists(st.sampled_from(VOCAB), max_size=8), min_size=1, max_size=50))
    terms = draw(st.lists(st.lists(st.sampled_from(VOCAB), min_size=1, max_size=2), min_size=2, max_size=6))
    return docs, terms


@settings(max_examples=100)
@given(corpora())
def test_counts_equal_brute_force(data):
    docs, terms = data
    idx = index_corpus((i, " ".join(toks)) for i, toks in enumerate(docs))
    for x in terms:
        for y in terms:
            got = lookup_counts(idx, " ".join(x), " ".join(y))
            assert (got.f_x, got.f_y, got.f_xy, got.m) == brute_counts(docs, x, y)
            assert got.f_xy <= min(got.f_x, got.f_y) <= got.m


@settings(max_examples=50)
@given(corpora(), st.randoms())
def test_document_order_irrelevant(data, rnd):
    docs, terms = data
    numbered = list(enumerate(" ".join(t) for t in docs))
    shuffled = numbered[:]
    rnd.shuffle(shuffled)
    a, b = index_corpus(numbered), index_corpus(shuffled)
    keys = [" ".join(t) for t in terms]
    assert np.array_equal(a.pairwise_counts(keys)[1], b.pairwise_counts(keys)[1])
