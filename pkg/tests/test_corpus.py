from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rlid.corpus import (
    FilterRules,
    LabeledSentence,
    RawSentence,
    filter_sentences,
    generate_dataset,
    load_corpus,
    make_labels,
    read_dataset,
    split_dataset,
    write_dataset,
)
from rlid.errors import DataError, FixtureMissError, ProviderError, UsageError
from rlid.translit import builtin_table


class FakeProvider:
    """Minimal in-memory provider for corpus tests."""

    def __init__(self, mapping):
        self.mapping = mapping
        self.calls = 0

    def translate(self, text, target):
        self.calls += 1
        try:
            return self.mapping[(text, target)]
        except KeyError:
            raise FixtureMissError(f"no fixture for {(text, target)!r}") from None


class TestLoadCorpus:
    def test_plain_lines(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_text("hi\nok see you\n", encoding="utf-8")
        got = load_corpus(path)
        assert got == [RawSentence("hi", 0), RawSentence("ok see you", 1)]

    def test_empty_file(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_text("", encoding="utf-8")
        assert load_corpus(path) == []

    def test_tab_replaced_by_space(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_text("a\tb\n", encoding="utf-8")
        assert load_corpus(path)[0].text == "a b"

    def test_tsv_column(self, tmp_path):
        path = tmp_path / "c.tsv"
        path.write_text("x\thello there\ny\tbye\n", encoding="utf-8")
        got = load_corpus(path, format="tsv-column", column=1)
        assert [s.text for s in got] == ["hello there", "bye"]

    def test_tsv_missing_column_reports_line(self, tmp_path):
        path = tmp_path / "c.tsv"
        path.write_text("only one\n", encoding="utf-8")
        with pytest.raises(DataError, match=":1"):
            load_corpus(path, format="tsv-column", column=1)

    def test_malformed_utf8_reports_byte_offset(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_bytes(b"ok\n\xff\xfe\n")
        with pytest.raises(DataError, match="byte offset 3"):
            load_corpus(path)

    def test_unknown_format(self, tmp_path):
        with pytest.raises(UsageError, match="jsonl"):
            load_corpus(tmp_path / "c.txt", format="jsonl")


class TestFilterSentences:
    def test_min_chars(self):
        raw = [RawSentence("a", 0), RawSentence("hello there", 1)]
        got = filter_sentences(raw, FilterRules(min_chars=3))
        assert [s.text for s in got] == ["hello there"]

    def test_dedup_first_wins(self):
        raw = [RawSentence("hey", 0), RawSentence("hey", 1)]
        got = filter_sentences(raw, FilterRules())
        assert len(got) == 1 and got[0].source_index == 0

    def test_noop_rules_preserve_order(self):
        raw = [RawSentence(f"sentence number {i}", i) for i in range(100)]
        rules = FilterRules(min_chars=1, max_chars=1000, charset="any", dedup=False)
        assert filter_sentences(raw, rules) == raw

    def test_charset_filter(self):
        raw = [RawSentence("fine text", 0), RawSentence("bad; semicolon", 1)]
        got = filter_sentences(raw, FilterRules())
        assert [s.text for s in got] == ["fine text"]

    def test_invalid_rules(self):
        with pytest.raises(UsageError):
            FilterRules(min_chars=10, max_chars=3)

    @given(st.lists(st.text(alphabet="ab c", max_size=12), max_size=30))
    @settings(max_examples=200)
    def test_idempotent(self, texts):
        raw = [RawSentence(t, i) for i, t in enumerate(texts)]
        rules = FilterRules(min_chars=3, max_chars=10)
        once = filter_sentences(raw, rules)
        assert filter_sentences(once, rules) == once


class TestGenerateDataset:
    def test_counts_and_order(self, labels):
        sources = [RawSentence("how are you", 0), RawSentence("good morning", 1)]
        provider = FakeProvider({
            ("how are you", "hindi"): "आप कैसे हो",
            ("how are you", "russian"): "как дела",
            ("good morning", "hindi"): "सुप्रभात",
            ("good morning", "russian"): "доброе утро",
        })
        tables = {"hindi": builtin_table("devanagari"), "russian": builtin_table("cyrillic")}
        result = generate_dataset(sources, labels, provider, tables)
        assert len(result.pairs) == 6
        assert [p.label.name for p in result.pairs] == [
            "english", "hindi", "russian", "english", "hindi", "russian",
        ]
        assert result.pairs[1].text == "ap kaise ho"
        assert result.pairs[2].text == "kak dela"

    def test_empty_sources(self, labels):
        result = generate_dataset([], labels, FakeProvider({}),
                                  {"hindi": builtin_table("devanagari"),
                                   "russian": builtin_table("cyrillic")})
        assert result.pairs == []

    def test_missing_table_is_usage_error(self, labels):
        with pytest.raises(UsageError, match="russian"):
            generate_dataset([], labels, FakeProvider({}),
                             {"hindi": builtin_table("devanagari")})

    def test_provider_failure_aborts_by_default(self, labels):
        sources = [RawSentence("how are you", 0)]
        tables = {"hindi": builtin_table("devanagari"), "russian": builtin_table("cyrillic")}
        with pytest.raises(ProviderError):
            generate_dataset(sources, labels, FakeProvider({}), tables)

    def test_provider_failure_skip_counts(self, labels):
        sources = [RawSentence("how are you", 0)]
        provider = FakeProvider({("how are you", "hindi"): "आप कैसे हो"})
        tables = {"hindi": builtin_table("devanagari"), "russian": builtin_table("cyrillic")}
        result = generate_dataset(sources, labels, provider, tables,
                                  on_provider_error="skip")
        assert result.skipped["russian"] == 1
        assert [p.label.name for p in result.pairs] == ["english", "hindi"]

    def test_empty_transliteration_dropped_and_counted(self, labels):
        sources = [RawSentence("oh", 0)]
        provider = FakeProvider({("oh", "hindi"): "्", ("oh", "russian"): "ъ"})
        tables = {"hindi": builtin_table("devanagari"), "russian": builtin_table("cyrillic")}
        result = generate_dataset(sources, labels, provider, tables)
        assert result.dropped == {"english": 0, "hindi": 1, "russian": 1}
        assert [p.label.name for p in result.pairs] == ["english"]

    def test_count_conservation(self, labels):
        # emitted + dropped + skipped covers every (source, label) cell
        sources = [RawSentence("how are you", 0), RawSentence("oh", 1)]
        provider = FakeProvider({
            ("how are you", "hindi"): "आप कैसे हो",
            ("how are you", "russian"): "как дела",
            ("oh", "hindi"): "्",
        })
        tables = {"hindi": builtin_table("devanagari"), "russian": builtin_table("cyrillic")}
        result = generate_dataset(sources, labels, provider, tables,
                                  on_provider_error="skip")
        emitted = len(result.pairs)
        dropped = sum(result.dropped.values())
        skipped = sum(result.skipped.values())
        assert emitted + dropped + skipped == len(sources) * len(labels)
        assert (emitted, dropped, skipped) == (4, 1, 1)

    def test_output_satisfies_label_invariant(self, labels, data_dir):
        from rlid.provider import ProviderConfig, Translator
        from rlid.translit import validate_latin

        sources = load_corpus(data_dir / "corpus_en.txt")[:50]
        provider = Translator(ProviderConfig(
            kind="fixture", fixture_path=str(data_dir / "translations.tsv")))
        tables = {"hindi": builtin_table("devanagari"), "russian": builtin_table("cyrillic")}
        result = generate_dataset(sources, labels, provider, tables)
        assert len(result.pairs) == 150
        assert all(validate_latin(p.text) and p.text for p in result.pairs)


class TestSplitDataset:
    def test_paper_counts(self, labels):
        pairs = [LabeledSentence(f"t{i}", labels[i % 3]) for i in range(3000)]
        split = split_dataset(pairs, ratio=0.8, seed=1)
        assert len(split.train) == 2400 and len(split.validation) == 600

    def test_deterministic(self, labels):
        pairs = [LabeledSentence(f"t{i}", labels[0]) for i in range(50)]
        a = split_dataset(pairs, 0.8, seed=7)
        b = split_dataset(pairs, 0.8, seed=7)
        assert a.train == b.train and a.validation == b.validation

    def test_multiset_preservation_small(self, labels):
        pairs = [LabeledSentence(f"t{i}", labels[0]) for i in range(10)]
        split = split_dataset(pairs, 0.5, seed=3)
        assert len(split.train) == 5
        recombined = Counter(p.text for p in split.train + split.validation)
        assert recombined == Counter(p.text for p in pairs)

    def test_ratio_out_of_range(self, labels):
        pairs = [LabeledSentence("t", labels[0])]
        for ratio in (0.0, 1.0, -0.1, 1.5):
            with pytest.raises(UsageError):
                split_dataset(pairs, ratio, seed=0)

    @given(st.integers(min_value=1, max_value=200), st.integers(), st.floats(0.05, 0.95))
    @settings(max_examples=150)
    def test_properties_random(self, n, seed, ratio):
        labels = make_labels(["english"])
        pairs = [LabeledSentence(f"t{i}", labels[0]) for i in range(n)]
        split = split_dataset(pairs, ratio, seed)
        assert len(split.train) == int(ratio * n + 0.5)
        assert Counter(p.text for p in split.train + split.validation) == Counter(
            p.text for p in pairs
        )
        again = split_dataset(pairs, ratio, seed)
        assert again.train == split.train


class TestDatasetFile:
    def test_format_by_definition(self, tmp_path, labels):
        path = tmp_path / "d.tsv"
        write_dataset([LabeledSentence("ap kaise ho", labels[1])], path)
        assert path.read_bytes() == b"ap kaise ho\thindi\n"

    def test_round_trip(self, tmp_path, labels, tiny_pairs):
        path = tmp_path / "d.tsv"
        write_dataset(tiny_pairs, path)
        assert read_dataset(path, labels) == tiny_pairs

    def test_missing_tab_names_line(self, tmp_path, labels):
        path = tmp_path / "d.tsv"
        path.write_text("abc\n", encoding="utf-8")
        with pytest.raises(DataError, match=":1"):
            read_dataset(path, labels)

    def test_unknown_label(self, tmp_path, labels):
        path = tmp_path / "d.tsv"
        path.write_text("abc\tklingon\n", encoding="utf-8")
        with pytest.raises(DataError, match="klingon"):
            read_dataset(path, labels)

    @given(texts=st.lists(st.text(alphabet="abc d", max_size=20).map(lambda s: s.strip()),
                          max_size=20))
    @settings(max_examples=100)
    def test_round_trip_random(self, tmp_path_factory, texts):
        labels = make_labels(["english", "hindi"])
        pairs = [
            LabeledSentence(t, labels[i % 2]) for i, t in enumerate(texts) if t
        ]
        path = tmp_path_factory.mktemp("ds") / "d.tsv"
        write_dataset(pairs, path)
        assert read_dataset(path, labels) == pairs


class TestMakeLabels:
    def test_ids_contiguous(self):
        labels = make_labels(["english", "hindi"])
        assert [l.id for l in labels] == [0, 1]

    def test_duplicates_rejected(self):
        with pytest.raises(UsageError):
            make_labels(["english", "english"])

    def test_case_enforced(self):
        with pytest.raises(UsageError):
            make_labels(["English"])
