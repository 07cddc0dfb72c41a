import io

import pytest

from citegraph import (
    IngestOptions,
    make_record,
    match_references,
    parse_cited_reference,
    parse_wos_file,
)
from citegraph.errors import IngestError


def test_fixture_parses_to_ten_records(wos_fixture_bytes):
    records, diagnostics = parse_wos_file(wos_fixture_bytes)
    assert len(records) == 10
    assert [r.id for r in records] == [f"r{i:02d}" for i in range(1, 11)]
    assert [d.row for d in diagnostics] == [11]
    assert "invalid year" in diagnostics[0].message


def test_two_well_formed_rows():
    content = (
        "AU\tTI\tSO\tPY\tTC\n"
        "Smith, J\tA tribology study\tWEAR\t2001\t5\n"
        "Jones, K; Lee, M\tAnother study\tTRIBOL INT\t2002\t\n"
    )
    records, diagnostics = parse_wos_file(content)
    assert diagnostics == []
    assert len(records) == 2
    first, second = records
    assert first.title == "A tribology study"
    assert first.year == 2001
    assert first.external_citation_count == 5
    assert first.first_author_lastname == "smith"
    assert second.authors == ("Jones, K", "Lee, M")
    assert second.external_citation_count == 0  # TC absent defaults to 0


def test_header_only_file():
    records, diagnostics = parse_wos_file("AU\tTI\tPY\n")
    assert records == []
    assert diagnostics == []


def test_bad_year_row_skipped_with_diagnostic():
    content = "AU\tTI\tPY\nSmith, J\tSomething\tn/a\n"
    records, diagnostics = parse_wos_file(content)
    assert records == []
    assert len(diagnostics) == 1
    assert diagnostics[0].row == 1
    assert "invalid year" in diagnostics[0].message


def test_year_out_of_range_rejected():
    content = "AU\tTI\tPY\nOld, A\tAncient\t1327\nNew, B\tFuture\t2203\n"
    records, diagnostics = parse_wos_file(content)
    assert records == []
    assert len(diagnostics) == 2


def test_missing_header_is_fatal():
    with pytest.raises(IngestError):
        parse_wos_file("")
    with pytest.raises(IngestError):
        parse_wos_file("no\ttags\there\nSmith\tX\t2001\n")


def test_bom_is_tolerated():
    content = b"\xef\xbb\xbfAU\tTI\tPY\nSmith, J\tWith BOM\t2001\n"
    records, _ = parse_wos_file(content)
    assert len(records) == 1
    assert records[0].title == "With BOM"


def test_unreadable_stream_is_fatal():
    class Broken(io.RawIOBase):
        def read(self, *args):
            raise OSError("boom")

    with pytest.raises(IngestError):
        parse_wos_file(Broken())


def test_row_with_extra_columns_skipped():
    content = "AU\tTI\tPY\nSmith, J\tOk\t2001\textra\tcells\n"
    records, diagnostics = parse_wos_file(content)
    assert records == []
    assert "column count" in diagnostics[0].message


def test_ids_deterministic_from_file_order(wos_fixture_bytes):
    a, _ = parse_wos_file(wos_fixture_bytes)
    b, _ = parse_wos_file(wos_fixture_bytes)
    assert a == b


def test_duplicate_doi_kept_with_warning():
    content = (
        "AU\tTI\tPY\tDI\n"
        "Smith, J\tOne\t2001\t10.1/x\n"
        "Jones, K\tTwo\t2002\t10.1/X\n"
    )
    records, diagnostics = parse_wos_file(content)
    assert len(records) == 2
    assert any("duplicate DOI" in d.message for d in diagnostics)


class TestParseCitedReference:
    def test_full_reference(self):
        ref = parse_cited_reference(
            "Bhushan B, 1999, DIAM RELAT MATER, V8, P1985, DOI 10.1016/s0925-9635(99)00158-2"
        )
        assert ref.author_key == "bhushan b"
        assert ref.year == 1999
        assert ref.source_key == "diam relat mater"
        assert ref.volume == "8"
        assert ref.begin_page == "1985"
        assert ref.doi == "10.1016/s0925-9635(99)00158-2"
        assert ref.match_eligible

    def test_empty_reference(self):
        ref = parse_cited_reference("")
        assert ref.author_key is None
        assert ref.year is None
        assert ref.doi is None
        assert not ref.match_eligible

    def test_author_year_only(self):
        ref = parse_cited_reference("Anon, 2001")
        assert ref.author_key == "anon"
        assert ref.year == 2001
        assert ref.source_key is None
        assert ref.match_eligible

    def test_no_year_not_eligible(self):
        ref = parse_cited_reference("HOLMBERG K, COATINGS TRIBOLOGY")
        assert ref.author_key == "holmberg k"
        assert ref.year is None
        assert not ref.match_eligible

    def test_doi_alone_is_eligible(self):
        ref = parse_cited_reference("DOI 10.1000/ABC")
        assert ref.doi == "10.1000/abc"
        assert ref.match_eligible

    def test_total_on_garbage(self):
        ref = parse_cited_reference(",,, ;;; ???")
        assert not ref.match_eligible


class TestMatchReferences:
    def test_doi_match(self):
        a = make_record("a", 2005, authors=["X, Y"], cited_references=["Z Q, 2000, J X, DOI 10.1/b"])
        b = make_record("b", 2000, authors=["B, B"], doi="10.1/B")
        edges, report = match_references([a, b])
        assert edges == [("a", "b")]
        assert report.matched == 1

    def test_unmatched_reference(self):
        a = make_record("a", 2005, cited_references=["Nobody N, 1990, NOWHERE"])
        b = make_record("b", 2000)
        edges, report = match_references([a, b])
        assert edges == []
        assert report.unmatched == 1

    def test_ambiguous_triple(self):
        twin1 = make_record("t1", 2003, authors=["Andersson, J"], source="WEAR")
        twin2 = make_record("t2", 2003, authors=["Andersson, J"], source="WEAR")
        citer = make_record("c1", 2004, cited_references=["Andersson J, 2003, WEAR"])
        edges, report = match_references([twin1, twin2, citer])
        assert edges == []
        assert report.ambiguous == 1

    def test_pair_tier_requires_uniqueness(self):
        twin1 = make_record("t1", 2003, authors=["Andersson, J"], source="WEAR")
        twin2 = make_record("t2", 2003, authors=["Andersson, J"], source="TRIBOL INT")
        citer = make_record("c1", 2004, cited_references=["Andersson J, 2003"])
        edges, report = match_references([twin1, twin2, citer])
        assert edges == []
        assert report.ambiguous == 1

    def test_self_match_suppressed(self):
        a = make_record("a", 2005, doi="10.1/self", cited_references=["X, 2005, DOI 10.1/self"])
        edges, report = match_references([a])
        assert edges == []
        assert report.self_suppressed == 1

    def test_duplicate_edges_deduplicated(self):
        a = make_record(
            "a", 2005, cited_references=["Bee B, 2000, HIVE", "Bee B, 2000, HIVE"]
        )
        b = make_record("b", 2000, authors=["Bee, B"], source="HIVE")
        edges, report = match_references([a, b])
        assert edges == [("a", "b")]
        assert report.duplicates == 1

    def test_fixture_report(self, wos_fixture_bytes):
        records, _ = parse_wos_file(wos_fixture_bytes)
        edges, report = match_references(records)
        assert report.matched == 11
        assert report.unmatched == 2
        assert report.ambiguous == 1
        assert report.unmatchable == 1
        assert report.self_suppressed == 1
        assert report.duplicates == 1
        ids = {r.id for r in records}
        assert all(c in ids and d in ids for c, d in edges)


def test_options_encoding_latin1():
    content = "AU\tTI\tPY\nM\xfcller, K\tUmlaut study\t2001\n".encode("latin-1")
    records, _ = parse_wos_file(content, IngestOptions(encoding="latin-1"))
    assert records[0].first_author_lastname == "muller"
