"""Generators and file persistence."""

import io
import json
import math

import pytest

from singtrace import (InputError, SchemaError, Spectrum, StepFunction,
                       gen_spectrum, load_spectrum, save_spectrum,
                       save_spectrum_csv)
from singtrace.corpus import parse_gen_spec, spectrum_to_payload
from singtrace.errors import NonMonotoneError, TailContinuityError

LN2 = math.log(2.0)


class TestGenerators:
    def test_counterexample_pieces(self):
        z = gen_spectrum("counterexample_z", 3).materialize()
        assert z.values == pytest.approx([1.0, 0.5, 2.0 / 16.0, 3.0 / 512.0],
                                         rel=1e-12)
        assert z.breakpoints == pytest.approx([1.0, 2.0, 16.0, 512.0],
                                              rel=1e-12)

    def test_power_head(self):
        x = gen_spectrum("power", 2)
        assert x.mu(1) == 1.0
        assert x.mu(4) == pytest.approx(0.5, rel=1e-15)
        assert x.mu(10**6) == pytest.approx(1e-3, rel=1e-12)

    def test_oscillating_at_3(self):
        x = gen_spectrum("oscillating")
        expected = (2.0 + math.sin(math.log(math.log(3.0)))) / 3.0
        assert x.mu(3) == pytest.approx(expected, rel=1e-15)
        assert x.mu(3) == pytest.approx(0.6980, abs=1e-3)
        assert x.mu(1) == x.mu(2) == x.mu(3)

    def test_finite_sorting(self):
        with pytest.raises(NonMonotoneError):
            gen_spectrum("finite", "3,1,2")
        x = gen_spectrum("finite", "3,1,2", sort=True)
        assert x.head == (3.0, 2.0, 1.0)

    def test_n_max_capped(self):
        with pytest.raises(InputError):
            gen_spectrum("counterexample_z", 701)
        with pytest.raises(InputError):
            gen_spectrum("counterexample_z", 0)

    def test_counterexample_x_power(self):
        x = gen_spectrum("counterexample_x", 2, 5).materialize()
        z = gen_spectrum("counterexample_z", 5).materialize()
        for i in range(z.n_pieces):
            assert x.log_values[i] == pytest.approx(0.5 * z.log_values[i],
                                                    abs=1e-15)

    def test_parse_gen_spec(self):
        x = parse_gen_spec("gen:counterexample_x:2:30")
        assert "counterexample_x" in x.name
        with pytest.raises(InputError):
            parse_gen_spec("nope")

    def test_unknown_kind(self):
        with pytest.raises(InputError):
            gen_spectrum("mystery")


class TestPersistence:
    def test_spectrum_roundtrip_bits(self):
        x = gen_spectrum("power", 2, head=1000)
        buf = io.StringIO()
        save_spectrum(x, buf)
        back = load_spectrum(io.StringIO(buf.getvalue()))
        assert back.head == x.head        # bit-identical
        assert back.tail == x.tail
        assert back.name == x.name

    def test_step_roundtrip_bits(self):
        z = gen_spectrum("counterexample_z", 40).materialize()
        buf = io.StringIO()
        save_spectrum(z, buf)
        back = load_spectrum(io.StringIO(buf.getvalue()))
        assert back.log_breakpoints == z.log_breakpoints
        assert back.log_values == z.log_values
        assert back.beyond_last == z.beyond_last

    def test_non_monotone_rejected_with_index(self):
        payload = {"name": "bad", "mu": [1.0, 0.9, 0.95, 0.8], "tail": None,
                   "metadata": {}}
        with pytest.raises(NonMonotoneError) as exc:
            load_spectrum(io.StringIO(json.dumps(payload)))
        assert exc.value.index == 3

    def test_tail_continuity_rejected(self):
        payload = {"name": "bad",
                   "mu": [1.0 / n for n in range(1, 11)],
                   "tail": {"coefficient": 1.0, "exponent": 0.5,
                            "start_index": 11},
                   "metadata": {}}
        with pytest.raises(TailContinuityError) as exc:
            load_spectrum(io.StringIO(json.dumps(payload)))
        assert exc.value.index == 11
        # the arithmetic: mu_10 = 0.1 < 1 * 11^-0.5 ~ 0.3015
        assert 0.1 < 11.0 ** -0.5

    def test_schema_errors(self):
        with pytest.raises(SchemaError):
            load_spectrum(io.StringIO("not json"))
        with pytest.raises(SchemaError):
            load_spectrum(io.StringIO('{"unrelated": 1}'))
        with pytest.raises(SchemaError):
            load_spectrum(io.StringIO('{"mu": ["a"]}'))

    def test_csv_roundtrip(self):
        x = gen_spectrum("finite", [2.0, 1.0, 1.0 / 3.0])
        buf = io.StringIO()
        save_spectrum_csv(x, buf)
        back = load_spectrum(io.StringIO(buf.getvalue()))
        assert back.head == x.head

    def test_csv_rejects_tail(self):
        x = gen_spectrum("harmonic")
        with pytest.raises(Exception):
            save_spectrum_csv(x, io.StringIO())

    def test_underflowing_values_keep_logs(self):
        z = gen_spectrum("counterexample_z", 60).materialize()
        payload = spectrum_to_payload(z)
        assert "log_values" in payload
        buf = io.StringIO()
        save_spectrum(z, buf)
        back = load_spectrum(io.StringIO(buf.getvalue()))
        assert back.log_values == z.log_values

    def test_rule_materializes_for_export(self):
        z = gen_spectrum("counterexample_z", 7)
        payload = spectrum_to_payload(z)
        assert len(payload["log_breakpoints"]) == 8


class TestCorpusInvariants:
    def test_counterexample_log_bound(self):
        # partial integrals stay below a multiple of log(1 + t); the best
        # constant sits near the origin and the ratios settle to 1/(2 ln 2)
        z = gen_spectrum("counterexample_z", 100)
        ratios = []
        for n in range(1, 101):
            lt = (n * n) * LN2
            den = math.log1p(math.exp(lt)) if lt < 700.0 else lt
            ratios.append(z.partial_integral_ln(lt) / den)
        assert max(ratios) < 1.5
        assert ratios[-1] == pytest.approx(1.0 / (2.0 * LN2), abs=1e-2)

    def test_small_ideal_constants(self):
        from singtrace import marcinkiewicz_norm, small_ideal_constant
        from singtrace.spaces import PSI_1
        si = gen_spectrum("small_ideal")
        assert small_ideal_constant(si).value == 1.0
        assert marcinkiewicz_norm(si, PSI_1).value == \
            pytest.approx(1.0 / LN2, rel=1e-9)
