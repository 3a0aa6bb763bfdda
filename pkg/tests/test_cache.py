import os

import pytest

from mockmod.basis import r_p
from mockmod.cache import (HEADER, CacheEntry, CacheError, cache_path, cache_read, cache_write,
                           format_params, parse_params)
from mockmod.cli import expand
from mockmod.forms import delta, eichler_integral
from mockmod.qseries import QQ, PadicRing, QSeries


def test_params_round_trip():
    assert format_params({"p": 3, "l": 2}) == "l=2,p=3"
    assert parse_params("l=2,p=3") == {"l": 2, "p": 3}
    assert parse_params(format_params({})) == {}


def test_r3_round_trip_padic(tmp_path):
    ring = PadicRing(3, 24)
    s = r_p(3, 8721, ring)
    cache_write(tmp_path, CacheEntry("r-p", {"p": 3}, s))
    back = cache_read(tmp_path, "r-p", {"p": 3}, ring)
    assert back.series == s
    assert back.series.absprec == s.absprec


def test_round_trip_rational(tmp_path):
    s = eichler_integral(delta(300), -10)
    cache_write(tmp_path, CacheEntry("eichler", {"kappa": -10}, s))
    assert cache_read(tmp_path, "eichler", {"kappa": -10}, QQ).series == s


def test_round_trip_zero_padic(tmp_path):
    ring = PadicRing(5, 3)
    s = QSeries.zero(ring, -2, 6).scale(25)
    cache_write(tmp_path, CacheEntry("z", {}, s))
    back = cache_read(tmp_path, "z", {}, ring).series
    assert back == s and back.absprec == s.absprec


def test_file_layout(tmp_path):
    path = cache_write(tmp_path, CacheEntry("delta", {}, delta(5)))
    lines = path.read_text().splitlines()
    assert lines[0] == HEADER == "MOCKMODQ v1"
    assert lines[1].startswith("form=delta params=- ring=rational minexp=1 prec=5 checksum=")
    assert lines[2:] == ["1 1", "2 -24", "3 252", "4 -1472"]
    assert not [f for f in os.listdir(tmp_path) if f.startswith(".tmp")]


def test_shorter_window_served(tmp_path):
    s = delta(100)
    cache_write(tmp_path, CacheEntry("delta", {}, s))
    hit = cache_read(tmp_path, "delta", {}, QQ, 40)
    assert hit.series == s.truncate(40)
    assert cache_read(tmp_path, "delta", {}, QQ, 101) is None


def test_longer_window_recomputes_and_overwrites(tmp_path):
    expand("delta", {}, 30, QQ, tmp_path)
    stored = cache_read(tmp_path, "delta", {}, QQ).series.prec_bound
    assert stored == 2000
    out = expand("delta", {}, 2500, QQ, tmp_path)
    assert out == delta(2500)
    assert cache_read(tmp_path, "delta", {}, QQ).series.prec_bound == 2500


def _corrupt(path, fn):
    path.write_text(fn(path.read_text()))


def test_version_mismatch(tmp_path):
    path = cache_write(tmp_path, CacheEntry("delta", {}, delta(10)))
    _corrupt(path, lambda t: t.replace("MOCKMODQ v1", "MOCKMODQ v2"))
    with pytest.raises(CacheError, match="version"):
        cache_read(tmp_path, "delta", {}, QQ)


def test_truncated_file(tmp_path):
    path = cache_write(tmp_path, CacheEntry("delta", {}, delta(10)))
    _corrupt(path, lambda t: "\n".join(t.splitlines()[:-2]) + "\n")
    with pytest.raises(CacheError, match="truncated"):
        cache_read(tmp_path, "delta", {}, QQ)


def test_checksum_failure(tmp_path):
    path = cache_write(tmp_path, CacheEntry("delta", {}, delta(10)))
    _corrupt(path, lambda t: t.replace("\n3 252\n", "\n3 253\n"))
    with pytest.raises(CacheError, match="checksum"):
        cache_read(tmp_path, "delta", {}, QQ)


def test_expand_ignores_corrupt_cache(tmp_path, capsys):
    expand("j", {}, 20, QQ, tmp_path)
    path = cache_path(tmp_path, "j", {}, QQ)
    _corrupt(path, lambda t: t.replace("\n0 744\n", "\n0 745\n"))
    out = expand("j", {}, 20, QQ, tmp_path)
    assert out.coeff(0) == 744
    assert "ignoring cache entry" in capsys.readouterr().err
