import json

import numpy as np
import pytest

from conftest import LATTICES, random_symbol
from periodic_psido.catalog import HermiteGaussian
from periodic_psido.io import (
    FormatError,
    read_cell_csv,
    read_signal,
    read_signal_binary,
    read_signal_csv,
    read_symbol_json,
    symbol_from_dict,
    symbol_to_dict,
    write_cell_csv,
    write_signal,
    write_symbol_json,
)
from periodic_psido.lattice import PeriodMatrix
from periodic_psido.signal import GridSignal
from periodic_psido.symbol import PeriodCellSamples


def noisy(rng, d=1, N=32, T=7.5):
    shape = (N,) * d
    return GridSignal(rng.normal(size=shape) + 1j * rng.normal(size=shape), T)


class TestSignals:
    @pytest.mark.parametrize("suffix", [".csv", ".bin", ".gsig"])
    @pytest.mark.parametrize("d", [1, 2])
    def test_round_trip_exact(self, tmp_path, rng, suffix, d):
        f = noisy(rng, d)
        path = tmp_path / f"f{suffix}"
        write_signal(path, f)
        g = read_signal(path)
        assert g.extent == f.extent and g.d == d
        np.testing.assert_array_equal(g.values, f.values)

    def test_csv_layout(self, tmp_path):
        f = HermiteGaussian(1, 1.0).sample(4, 4)
        path = tmp_path / "f.csv"
        write_signal(path, f)
        lines = path.read_text().splitlines()
        assert lines[0] == "x0,real,imag"
        assert len(lines) == 5 and lines[1].startswith("-2,")

    def test_csv_bad_header(self, tmp_path):
        path = tmp_path / "f.csv"
        path.write_text("t,re,im\n0,1,0\n")
        with pytest.raises(FormatError):
            read_signal_csv(path)

    def test_csv_non_numeric(self, tmp_path):
        path = tmp_path / "f.csv"
        path.write_text("x0,real,imag\n-1,a,0\n0,1,0\n")
        with pytest.raises(FormatError):
            read_signal_csv(path)

    def test_csv_wrong_nodes(self, tmp_path):
        path = tmp_path / "f.csv"
        path.write_text("x0,real,imag\n-1,1,0\n0.3,1,0\n")
        with pytest.raises(FormatError):
            read_signal_csv(path)

    def test_csv_empty(self, tmp_path):
        path = tmp_path / "f.csv"
        path.write_text("")
        with pytest.raises(FormatError):
            read_signal_csv(path)

    def test_binary_bad_magic(self, tmp_path):
        path = tmp_path / "f.bin"
        path.write_bytes(b"XXXX" + bytes(40))
        with pytest.raises(FormatError):
            read_signal_binary(path)

    def test_binary_truncated(self, tmp_path, rng):
        path = tmp_path / "f.bin"
        write_signal(path, noisy(rng))
        path.write_bytes(path.read_bytes()[:-8])
        with pytest.raises(FormatError):
            read_signal_binary(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            read_signal(tmp_path / "nope.csv")


class TestSymbols:
    @pytest.mark.parametrize("name", list(LATTICES))
    def test_round_trip_exact(self, tmp_path, rng, name):
        p = random_symbol(rng, LATTICES[name], terms=6)
        path = tmp_path / "p.json"
        write_symbol_json(path, p)
        q = read_symbol_json(path)
        assert q.L == p.L and q.coeffs == p.coeffs

    def test_dict_fields(self, rng):
        d = symbol_to_dict(random_symbol(rng, LATTICES["diag"]))
        assert d["schema"] == 1 and "convention" in d and len(d["records"]) == 4

    def test_duplicate_index(self):
        obj = {"L": [[1, 0], [0, 1]], "records": [{"kappa": [0, 0], "re": 1}, {"kappa": [0, 0], "re": 2}]}
        with pytest.raises(FormatError):
            symbol_from_dict(obj)

    def test_missing_field(self):
        with pytest.raises(FormatError):
            symbol_from_dict({"records": []})

    def test_wrong_schema(self):
        with pytest.raises(FormatError):
            symbol_from_dict({"schema": 9, "L": [[1]], "records": []})

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "p.json"
        path.write_text("{not json")
        with pytest.raises(FormatError):
            read_symbol_json(path)

    def test_imag_optional(self):
        p = symbol_from_dict({"L": [[1.0]], "records": [{"kappa": [2], "re": 0.5}]})
        assert p.coefficient((2,)) == 0.5

    def test_json_is_plain(self, tmp_path, rng):
        path = tmp_path / "p.json"
        write_symbol_json(path, random_symbol(rng, LATTICES["shear"]))
        assert json.loads(path.read_text())["L"] == [[1.0, 1.0], [0.0, 1.0]]


class TestCells:
    def test_round_trip(self, tmp_path, rng):
        L = LATTICES["shear"]
        s = PeriodCellSamples(L, rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6)))
        path = tmp_path / "cell.csv"
        write_cell_csv(path, s)
        t = read_cell_csv(path, L)
        np.testing.assert_array_equal(t.values, s.values)

    def test_bad_coordinates(self, tmp_path):
        path = tmp_path / "cell.csv"
        path.write_text("y0,real,imag\n0,1,0\n0.7,1,0\n")
        with pytest.raises(FormatError):
            read_cell_csv(path, PeriodMatrix.identity(1))

    def test_dimension_mismatch(self, tmp_path):
        path = tmp_path / "cell.csv"
        path.write_text("y0,real,imag\n0,1,0\n0.5,1,0\n")
        with pytest.raises(FormatError):
            read_cell_csv(path, PeriodMatrix.identity(2))
