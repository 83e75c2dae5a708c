from fractions import Fraction

import pytest

from goldbach_lab.reporting import (
    UnsupportedFormat,
    VerificationReport,
    canonical_bytes,
    emit_report,
    parse_report,
    parse_scan_csv,
)


def sample_report(**overrides):
    fields = dict(
        claim="example claim",
        parameters={"m": 15, "tol": Fraction(1, 2)},
        verdict="pass",
        payload={"optimum": Fraction(13, 2),
                 "nested": {"values": [Fraction(1, 3), 2, "x"]},
                 "flag": True},
        seed=7,
        runtime_ms=12,
    )
    fields.update(overrides)
    return VerificationReport(**fields)


class TestJsonRoundTrip:
    def test_lossless(self):
        rep = sample_report()
        back = parse_report(emit_report(rep, "json"))
        assert back == rep
        assert isinstance(back.payload["optimum"], Fraction)
        assert back.payload["optimum"] == Fraction(13, 2)
        assert back.payload["nested"]["values"][0] == Fraction(1, 3)

    def test_schema_version_present(self):
        data = emit_report(sample_report(), "json")
        assert b'"schema_version": "1"' in data

    def test_rationals_as_num_den(self):
        data = emit_report(sample_report(), "json").decode()
        assert '"num": 13' in data and '"den": 2' in data

    def test_verdict_validated(self):
        with pytest.raises(ValueError):
            sample_report(verdict="maybe")

    def test_canonical_bytes_ignore_runtime(self):
        a = sample_report(runtime_ms=5)
        b = sample_report(runtime_ms=999)
        assert canonical_bytes(a) == canonical_bytes(b)
        assert emit_report(a) != emit_report(b)

    def test_field_order_stable(self):
        data = emit_report(sample_report(), "json").decode()
        order = [data.index(k) for k in
                 ('"schema_version"', '"claim"', '"parameters"', '"verdict"',
                  '"payload"', '"seed"', '"runtime_ms"')]
        assert order == sorted(order)


class TestCsv:
    def test_scan_round_trip(self):
        rows = [(1005, 504), (1011, 220), (1017, 0)]
        rep = sample_report(payload={"columns": ["n", "representation_count"],
                                     "rows": rows})
        data = emit_report(rep, "csv")
        assert parse_scan_csv(data) == rows

    def test_fraction_cells(self):
        rep = sample_report(payload={"columns": ["profile", "optimum"],
                                     "rows": [("(4,4,1)", Fraction(13, 2))]})
        assert b"13/2" in emit_report(rep, "csv")

    def test_csv_requires_rows(self):
        with pytest.raises(UnsupportedFormat):
            emit_report(sample_report(), "csv")

    def test_unknown_format(self):
        with pytest.raises(UnsupportedFormat):
            emit_report(sample_report(), "yaml")


def test_float_cells_round_trip_exactly():
    rep = sample_report(payload={"columns": ["r", "mag"],
                                 "rows": [(1, 0.1234567890123456789)]})
    data = emit_report(rep, "csv").decode().splitlines()
    assert float(data[1].split(",")[1]) == 0.1234567890123456789
