import math
import os

import pytest
from hypothesis import given, settings, strategies as st

from geodesic_orders.census.config import CensusConfig, load_config, parse_config
from geodesic_orders.census.quadratic import (
    GOLDEN_LOG,
    L_asymptotic,
    L_quad,
    L_series,
    enumerate_quadratic,
    gauss_siegel_census,
    gauss_siegel_constant,
    quadratic_invariants,
    quadratic_key,
    sarnak_census,
    unit_bound_discriminant,
)
from geodesic_orders.census.quartic import (
    QuarticCorpus,
    certified_regulator,
    compute_invariants,
    pi_S_census,
    pi_tilde_S_census,
    quartic_corpus,
    torsion_profile,
)
from geodesic_orders.census.records import (
    CensusTable,
    HEADER,
    OrderInvariants,
    cross_check,
    emit_csv,
    format_real,
    ingest_table,
    invariants_csv,
    parse_rows,
)
from geodesic_orders.cli import run
from geodesic_orders.errors import DataConflict, InvalidArgument, InvalidS, ParseError
from geodesic_orders.fields import make_field
from geodesic_orders.forms import batch_class_data
from geodesic_orders.geodesic import geodesic_data
from geodesic_orders.orders import maximal_order
from geodesic_orders.units import fundamental_unit

# fields of the coeff_bound=3, S={2,3} corpus (keys of the maximal orders)
SMALL_CORPUS = [
    ("1:1:-1:-1:1", 117, "Cc"),
    ("1:-1:1:-1:1", 125, "Cr"),
    ("1:0:-1:0:1", 144, "Cr"),
    ("1:2:0:-1:1", 189, "Cc"),
    ("1:-2:1:0:1", 272, "Cc"),
    ("2:0:0:-2:1", 320, "Cc"),
    ("3:0:-3:0:1", 432, "Cc"),
    ("2:0:-2:0:1", 512, "Cc"),
    ("7:-1:-3:-1:1", 837, "Cc"),
    ("2:-2:0:0:1", 1616, "Cc"),
    ("1:1:3:-1:1", 1805, "Cc"),
    ("2:2:2:-2:1", 8912, "Cc"),
]


@pytest.fixture(scope="module")
def small():
    return quartic_corpus(3, (2, 3))


# ---------------------------------------------------------------- records


class TestFormat:
    @pytest.mark.parametrize(
        "x, s",
        [
            (0.48121182505960347, "0.48121182506"),
            (1e15, "1000000000000000"),
            (1e-7, "0.0000001"),
            (44.49279550693, "44.4927955069"),
            (0.1 + 0.2, "0.3"),
            (-2.5, "-2.5"),
            (0.0, "0"),
        ],
    )
    def test_values(self, x, s):
        assert format_real(x) == s

    def test_non_finite(self):
        with pytest.raises(ValueError):
            format_real(float("nan"))

    @given(st.floats(min_value=-1e12, max_value=1e12, allow_nan=False).filter(lambda v: v == 0 or abs(v) > 1e-12))
    def test_idempotent(self, x):
        s = format_real(x)
        assert format_real(float(s)) == s
        if x:
            assert abs(float(s) - x) <= 1e-11 * abs(x)


def _rows():
    return [
        quadratic_invariants(40, 2, 2.99822295029797),
        OrderInvariants("1:1:-1:-1:1", 117, 0, 2, 1, 0.5435350724978696, 6, 2, 8, 2.6972243622680057, "Cc"),
        OrderInvariants("1:0:-1:0:1", 144, 0, 2, mu=12, classification="Cr"),
    ]


class TestCSV:
    def test_round_trip(self, tmp_path):
        p = tmp_path / "t.csv"
        text = emit_csv(_rows(), str(p))
        back = ingest_table(str(p))
        assert invariants_csv(back) == text
        assert all(r.provenance == "ingested" for r in back)
        assert back[1].nu == pytest.approx(2.6972243622680057, rel=1e-11)
        assert p.read_bytes().count(b"\r") == 0

    def test_header(self):
        assert invariants_csv([]).strip() == ",".join(HEADER)

    def test_parse_error_line(self):
        text = invariants_csv(_rows()).splitlines()
        text[2] = "1:1:-1:-1:1,117,0,2,one,,,,,,Cc"
        with pytest.raises(ParseError) as e:
            parse_rows("\n".join(text))
        assert e.value.line == 3

    @pytest.mark.parametrize(
        "row, line",
        [
            ("1:1:-1:-1:1,117,0,2", 2),
            ("1:1:-1:-1:1,117,0,2,1,,,,,,Cq", 2),
            (",117,0,2,1,,,,,,", 2),
            ("1:1:-1:-1:1,117,0,2,1,inf,,,,,", 2),
            ("1:2:1:1,5,2,0,1,,,,,,", 2),  # (x+1)^2 is not a field
        ],
    )
    def test_malformed(self, row, line):
        with pytest.raises(ParseError) as e:
            parse_rows(",".join(HEADER) + "\n" + row + "\n")
        assert e.value.line == line

    def test_bad_header(self):
        with pytest.raises(ParseError) as e:
            parse_rows("# note\nfield_key,disc\n")
        assert e.value.line == 2

    def test_signature_conflict(self):
        with pytest.raises(DataConflict) as e:
            parse_rows(",".join(HEADER) + "\n1:1:-1:-1:1,117,2,1,,,,,,,\n")
        assert e.value.field_key == "1:1:-1:-1:1"

    def test_cross_check(self):
        ing = parse_rows(invariants_csv(_rows()))
        comp = _rows()
        assert cross_check(ing, comp) == 3
        assert {r.provenance for r in ing + comp} == {"cross-checked"}

    def test_cross_check_conflict(self):
        ing = parse_rows(invariants_csv(_rows()))
        comp = _rows()
        comp[0].class_h = 3
        with pytest.raises(DataConflict) as e:
            cross_check(ing, comp)
        assert (e.value.field_key, e.value.column) == ("-10:0:1", "h")

    def test_cross_check_real_tolerance(self):
        ing = parse_rows(invariants_csv(_rows()))
        comp = _rows()
        comp[1].regulator *= 1 + 1e-7
        with pytest.raises(DataConflict) as e:
            cross_check(ing, comp)
        assert e.value.column == "regulator"

    def test_disc40_ingest(self):
        row = parse_rows(",".join(HEADER) + "\n-10:0:1,40,2,0,2,,,,,,\n")
        h, R, _ = batch_class_data(40, 40)[40]
        assert cross_check(row, [quadratic_invariants(40, h, R)]) == 1

    def test_census_table_csv(self):
        t = CensusTable(["x", "partial_sum", "target", "ratio"], [(1, 2.0, 4.0, 0.5)], {"b": 2, "a": 1})
        assert t.to_csv() == "# a=1\n# b=2\nx,partial_sum,target,ratio\n1,2,4,0.5\n"


# ---------------------------------------------------------------- quadratic


class TestQuadratic:
    def test_enumeration(self):
        got = list(enumerate_quadratic(60))
        Ds = [d for d, _, _ in got]
        assert Ds == [d for d in range(5, 61) if d % 4 in (0, 1) and math.isqrt(d) ** 2 != d]
        data = {d: (h, R) for d, h, R in got}
        assert data[5][0] == 1 and data[5][1] == pytest.approx(0.481212, abs=1e-6)
        assert data[40][0] == 2
        assert 9 not in data and 36 not in data

    def test_threads_agree(self):
        a = list(enumerate_quadratic(3000))
        from geodesic_orders.census.quadratic import class_data

        b = [(D, h, R) for D, h, R, _ in class_data(3000, threads=2, block=700)]
        assert a == b

    def test_small_limit(self):
        with pytest.raises(InvalidArgument):
            list(enumerate_quadratic(4))

    def test_keys(self):
        assert quadratic_key(40) == "-10:0:1"
        assert quadratic_key(5) == "-1:-1:1"
        assert quadratic_key(21) == "-5:-1:1"

    def test_gs_constant(self):
        assert gauss_siegel_constant() == pytest.approx(math.pi**2 / (18 * 1.2020569031595942), rel=1e-15)
        assert gauss_siegel_constant() == pytest.approx(0.4561443, abs=1e-7)

    def test_gs_table(self):
        t = gauss_siegel_census(3000, checkpoints=[100, 500, 1000, 3000])
        ps = t.column("partial_sum")
        assert t.column("x") == [100, 500, 1000, 3000]
        assert ps == sorted(ps)
        for x, s, tgt, r in t.rows:
            assert r == pytest.approx(s / tgt, rel=1e-15)
        wide = gauss_siegel_census(3000, convention="wide", checkpoints=[100, 500, 1000, 3000])
        # h+ R+ = 2 h R for every order
        for a, b in zip(ps, wide.column("partial_sum")):
            assert a == pytest.approx(2 * b, rel=1e-12)
        brute = math.fsum(h * R for D, h, R in enumerate_quadratic(500))
        assert wide.rows[1][1] == pytest.approx(brute, rel=1e-12)

    def test_gs_ceiling(self):
        with pytest.raises(InvalidArgument):
            gauss_siegel_census(1000, ceiling=500)
        with pytest.raises(InvalidArgument):
            gauss_siegel_census(1000, convention="proper")

    def test_sarnak_empty(self):
        t = sarnak_census(GOLDEN_LOG - 1e-3)
        assert t.rows == []

    def test_sarnak_counts(self):
        t = sarnak_census(3.0, checkpoints=[GOLDEN_LOG + 1e-9, 1.0, 2.0, 3.0])
        assert t.column("partial_sum")[0] == 1  # only D = 5
        data = list(enumerate_quadratic(unit_bound_discriminant(3.0)))
        for x, s, *_ in t.rows:
            assert s == sum(h for _, h, R in data if R <= x)

    def test_unit_bound_is_complete(self):
        x = 2.5
        bound = unit_bound_discriminant(x)
        beyond = [D for D, _, R in enumerate_quadratic(4 * bound) if D > bound and R <= x]
        assert beyond == []

    def test_sarnak_ceiling(self):
        with pytest.raises(InvalidArgument):
            sarnak_census(6.5)

    def test_L_two_methods(self):
        for x in (1.5, 2.0, 5.0, 12.0):
            assert L_quad(x) == pytest.approx(L_series(x), rel=1e-12)
        assert L_quad(1.0) == 0.0
        from mpmath import ei

        assert L_quad(12) == pytest.approx(float(ei(12) - ei(1)), rel=1e-13)

    def test_L_asymptotic_is_divergent(self):
        # the asymptotic series at x = 12 bottoms out near 5e-5 relative error
        errs = [abs(L_asymptotic(12, n) / L_series(12) - 1) for n in range(1, 30)]
        assert 1e-5 < min(errs) < 1e-4
        assert errs.index(min(errs)) in range(8, 14)


# ---------------------------------------------------------------- quartic


class TestQuartic:
    def test_certified_regulator(self):
        assert certified_regulator(8) == pytest.approx(1.3169578969248166, rel=1e-12)
        assert certified_regulator(3) == 0.0
        # the bound is attained by Q(zeta_12): R = 2 acosh(sqrt 6 / 2)
        assert certified_regulator(8) == pytest.approx(1.3169578969248168, rel=1e-12)

    def test_small_corpus(self, small):
        assert [(r.field_key, r.disc, r.classification) for r in small.rows] == SMALL_CORPUS
        assert small.quarantine == [] and small.inconclusive == []
        assert small.metadata["fields_Cc"] == 10
        for r in small.cc_rows():
            assert r.complete()
        assert all(r.r == 0 and r.s == 2 for r in small.rows)

    def test_x4_plus_1(self):
        c = quartic_corpus(3, (2, 3), include_not_in_c=True)
        row = next(r for r in c.rows if r.field_key == "1:0:0:0:1")
        # 3 splits in Q(zeta_8), so the field lies outside C({2,3})
        assert row.classification == "NotInC" and row.disc == 256
        assert c.details["1:0:0:0:1"].torsion_minpolys == ("x^4+1",)
        assert set(c.keys()) >= {k for k, _, _ in SMALL_CORPUS}

    def test_dedupe_presentations(self):
        # i + sqrt 2 generates Q(zeta_8) as well
        c = quartic_corpus(None, (2, 5), polynomials=["1:0:0:0:1", "9:0:-2:0:1", "2:0:0:0:1"], include_not_in_c=True)
        assert len(c.rows) == 2
        assert sorted(c.details["1:0:0:0:1"].polynomials) == ["x^4+1", "x^4-2x^2+9"]

    def test_idempotent(self, small):
        again = quartic_corpus(None, (2, 3), polynomials=small.keys())
        assert again.keys() == small.keys()
        assert again.to_csv() == small.to_csv()

    def test_invalid_S(self):
        with pytest.raises(InvalidS):
            quartic_corpus(3, (2,))
        with pytest.raises(InvalidS):
            quartic_corpus(3, ())

    def test_threads(self, small):
        assert quartic_corpus(3, (2, 3), threads=2).to_csv() == small.to_csv()

    def test_torsion_profile(self):
        o = maximal_order(make_field([1, -1, 1, -1, 1]))
        mu, gen, orders, minpolys = torsion_profile(o)
        assert (mu, orders) == (10, (1, 2, 5, 10))
        assert minpolys == ("x^4+x^3+x^2+x+1", "x^4-x^3+x^2-x+1")

    def test_cache(self, tmp_path, small):
        first = quartic_corpus(3, (2, 3), cache_dir=str(tmp_path))
        files = os.listdir(tmp_path)
        assert files == ["quartic_S2-3_maximal_ceiling200.csv"]
        size = (tmp_path / files[0]).stat().st_size
        second = quartic_corpus(3, (2, 3), cache_dir=str(tmp_path))
        assert second.metadata["cache_hits"] == 12
        assert (tmp_path / files[0]).stat().st_size == size
        assert second.to_csv() == first.to_csv() == small.to_csv()

    def test_cache_disc_recheck(self, tmp_path, small):
        quartic_corpus(3, (2, 3), cache_dir=str(tmp_path))
        p = tmp_path / "quartic_S2-3_maximal_ceiling200.csv"
        p.write_text(p.read_text().replace("1:1:-1:-1:1,117,", "1:1:-1:-1:1,118,"))
        again = quartic_corpus(3, (2, 3), cache_dir=str(tmp_path))
        assert again.metadata["cache_hits"] == 11
        assert again.to_csv() == small.to_csv()

    def test_compute_invariants(self):
        inv, note = compute_invariants("1:1:-1:-1:1", (2, 3))
        assert note is None
        assert (inv.disc, inv.class_h, inv.mu, inv.kappa, inv.lambda_s, inv.classification) == (117, 1, 6, 2, 8, "Cc")
        q, _ = compute_invariants("-10:0:1")
        assert (q.disc, q.class_h, q.field_key) == (40, 2, "-10:0:1")
        assert q.regulator == pytest.approx(math.log(3 + math.sqrt(10)), rel=1e-12)


class TestPiS:
    def test_targets(self, small):
        t = pi_S_census(small, (2, 3), [1.0])
        tt = pi_tilde_S_census(small, (3, 2), [1.0])
        assert t.rows[0][2] == pytest.approx(math.exp(4) / 8, rel=1e-15)
        assert t.rows[0][2] == pytest.approx(6.82477, abs=1e-5)
        assert tt.rows[0][2] == pytest.approx(27.299, abs=1e-3)

    def test_additivity(self, small):
        cps = [0.5, 1.0, 1.5, 2.5, 5.0]
        t = pi_S_census(small, (2, 3), cps)
        for x, s, _, _, lb in t.rows:
            assert s == sum(r.lambda_s * r.class_h for r in small.cc_rows() if r.regulator <= x)
            assert lb is True
        assert t.column("partial_sum") == sorted(t.column("partial_sum"))
        # 117: lambda 8, 272: lambda 8, 189: 4  -> 20 at x = 1
        assert t.rows[1][1] == 20

    def test_nu_ratio(self, small):
        for r in small.cc_rows():
            one = QuarticCorpus(S=(2, 3), coeff_bound=3, rows=[r], metadata={})
            x = [r.regulator + 1e-9]
            a = pi_S_census(one, (2, 3), x).rows[0][1]
            b = pi_tilde_S_census(one, (2, 3), x).rows[0][1]
            assert b / a == pytest.approx(r.nu, rel=1e-14)

    def test_mismatched_S(self, small):
        with pytest.raises(InvalidS):
            pi_S_census(small, (2, 5))

    def test_weight_cross_check(self, small):
        for r in small.cc_rows()[:4]:
            o = maximal_order(make_field([int(c) for c in r.field_key.split(":")]))
            g = geodesic_data(o, fundamental_unit(o), h=r.class_h, lambda_s=r.lambda_s, kappa_value=r.kappa)
            from fractions import Fraction

            assert g.chi1 * g.weight == Fraction(4 * r.class_h * r.lambda_s, r.kappa)

    def test_lower_bound_flag(self, small):
        meta = dict(small.metadata, certified_regulator=1.2)
        c = QuarticCorpus(S=(2, 3), coeff_bound=3, rows=small.rows, metadata=meta)
        assert pi_S_census(c, (2, 3), [1.0, 1.5]).column("lower_bound") == [False, True]


# ---------------------------------------------------------------- config and CLI


class TestConfig:
    def test_defaults(self):
        c = load_config()
        assert c.set_S == (2, 3) and c.threads == 1 and c.max_regulator == 6.0

    def test_parse(self):
        c = parse_config("# run\nmax_disc = 2000\nset_S=2, 5\nthreads=3\ncache_dir=/tmp/x\n")
        assert (c.max_disc, c.set_S, c.threads, c.cache_dir) == (2000, (2, 5), 3, "/tmp/x")
        assert c.override(threads=1, set_S="3,7").set_S == (3, 7)

    @pytest.mark.parametrize("text", ["colour=blue", "threads=zero", "threads=0", "max_disc"])
    def test_bad(self, text):
        with pytest.raises(InvalidArgument):
            parse_config(text)

    def test_fields(self):
        assert set(CensusConfig.__dataclass_fields__) == {
            "max_disc",
            "max_regulator",
            "coeff_bound",
            "set_S",
            "class_bound_ceiling",
            "cache_dir",
            "threads",
        }


class TestCLI:
    def test_verify(self, capsys):
        assert run(["verify", "rep"]) == 0
        assert "FAIL" not in capsys.readouterr().out

    def test_invariants(self, capsys):
        assert run(["invariants", "--minpoly", "1:1:-1:-1:1", "--set", "2,3"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == ",".join(HEADER)
        assert out[1].startswith("1:1:-1:-1:1,117,0,2,1,0.543535072498,6,2,8,")
        assert out[1].endswith(",Cc")

    def test_invalid(self, capsys):
        assert run(["invariants", "--minpoly", "1:0:0:0:1", "--set", "2"]) == 2
        assert run(["invariants", "--minpoly", "1:2:1"]) == 2
        assert run(["invariants", "--minpoly", "x^2+1"]) == 2
        with pytest.raises(SystemExit) as e:
            run(["census", "cubic"])
        assert e.value.code == 2

    def test_ingest_codes(self, tmp_path, capsys):
        good = tmp_path / "g.csv"
        good.write_text(",".join(HEADER) + "\n-10:0:1,40,2,0,2,,,,,,\n1:1:-1:-1:1,117,0,2,1,0.543535072498,6,2,8,,Cc\n")
        assert run(["ingest", str(good), "--set", "2,3"]) == 0
        bad = tmp_path / "b.csv"
        bad.write_text(good.read_text().replace(",40,2,0,2,", ",40,2,0,4,"))
        assert run(["ingest", str(bad)]) == 3
        broken = tmp_path / "p.csv"
        broken.write_text(good.read_text() + "1:1,2\n")
        assert run(["ingest", str(broken)]) == 2
        assert "line 4" in capsys.readouterr().err

    def test_inconclusive(self, tmp_path):
        out = tmp_path / "o.csv"
        code = run(["census", "quartic", "--coeff-bound", "3", "--class-bound-ceiling", "1", "--out", str(out)])
        assert code == 4
        rows = parse_rows(out.read_text())
        assert any(r.class_h is None for r in rows)
        assert run(["invariants", "--minpoly", "2:2:2:-2:1", "--class-bound-ceiling", "1"]) == 4

    def test_config_file(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("max_disc=600\n")
        out = tmp_path / "gs.csv"
        assert run(["census", "quadratic-gs", "--config", str(cfg), "--out", str(out)]) == 0
        assert "# limit_x=600" in out.read_text()
        cfg.write_text("bogus=1\n")
        assert run(["census", "quadratic-gs", "--config", str(cfg)]) == 2

    def test_emit_and_sarnak(self, tmp_path):
        src = tmp_path / "in.csv"
        src.write_text(",".join(HEADER) + "\n-1:-1:1,5,2,0,1,0.4812118250596034,,,,,\n")
        out = tmp_path / "out.csv"
        assert run(["emit", str(src), "--out", str(out)]) == 0
        assert out.read_text().splitlines()[1] == "-1:-1:1,5,2,0,1,0.48121182506,,,,,"
        assert run(["census", "quadratic-sarnak", "--max-regulator", "2", "--out", str(out)]) == 0
        assert run(["census", "quadratic-sarnak", "--max-regulator", "7", "--out", str(out)]) == 2
