import numpy as np
import pytest

from ptrslink.grid import (
    QamConstellation,
    ReKind,
    ResourceGrid,
    extract_data,
    fill_data,
    grid_to_csv,
    qam_demodulate,
    qam_modulate,
)
from ptrslink.ptrs import PtrsConfig, map_ptrs, ptrs_re_positions

ORDERS = (4, 16, 64, 256)


class TestConstellation:
    @pytest.mark.parametrize("order", ORDERS)
    def test_unit_average_power(self, order):
        c = QamConstellation.square(order)
        assert np.mean(np.abs(c.points) ** 2) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("order", ORDERS)
    def test_gray_adjacency(self, order):
        # labels of I/Q-adjacent points differ in exactly one bit
        c = QamConstellation.square(order)
        h = c.bits_per_symbol // 2
        n_lvl = 1 << h

        def enc(i):
            return i ^ (i >> 1)

        for ii in range(n_lvl):
            for qq in range(n_lvl):
                label = (enc(ii) << h) | enc(qq)
                for ni, nq in ((ii + 1, qq), (ii, qq + 1)):
                    if ni < n_lvl and nq < n_lvl:
                        other = (enc(ni) << h) | enc(nq)
                        assert bin(label ^ other).count("1") == 1

    def test_qpsk_points(self):
        c = QamConstellation.square(4)
        s = 1 / np.sqrt(2)
        expected = {(0, 0): -s - 1j * s, (0, 1): -s + 1j * s,
                    (1, 1): s + 1j * s, (1, 0): s - 1j * s}
        for bits, point in expected.items():
            out = qam_modulate(np.array(bits), c)
            assert out[0] == pytest.approx(point, abs=1e-15)
        assert set(np.round(c.points, 12)) == set(np.round(list(expected.values()), 12))

    def test_unsupported_order(self):
        with pytest.raises(ValueError):
            QamConstellation.square(32)


class TestModulateDemodulate:
    @pytest.mark.parametrize("order", ORDERS)
    def test_roundtrip(self, order):
        c = QamConstellation.square(order)
        rng = np.random.default_rng(order)
        bits = rng.integers(0, 2, 10_000 * c.bits_per_symbol // 4 * 4)
        bits = bits[: bits.size - bits.size % c.bits_per_symbol]
        assert np.array_equal(qam_demodulate(qam_modulate(bits, c), c), bits)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            qam_modulate(np.array([0, 1, 1]), QamConstellation.square(4))

    @pytest.mark.parametrize("order", ORDERS)
    def test_small_rotation_keeps_label(self, order):
        c = QamConstellation.square(order)
        d_min = 2.0 / np.sqrt(2.0 * (4.0 ** (c.bits_per_symbol // 2) - 1.0) / 3.0)
        angle = 0.4 * d_min / (2.0 * np.abs(c.points).max())
        rotated = c.points * np.exp(1j * angle)
        labels = np.arange(order)
        shifts = np.arange(c.bits_per_symbol - 1, -1, -1)
        ref_bits = ((labels[:, None] >> shifts) & 1).astype(np.uint8).ravel()
        assert np.array_equal(qam_demodulate(rotated, c), ref_bits)

    @pytest.mark.parametrize("order", ORDERS)
    def test_matches_bruteforce_nearest_point(self, order):
        c = QamConstellation.square(order)
        rng = np.random.default_rng(99)
        rx = rng.uniform(-1.6, 1.6, 400) + 1j * rng.uniform(-1.6, 1.6, 400)
        got = qam_demodulate(rx, c).reshape(-1, c.bits_per_symbol)
        nearest = np.argmin(np.abs(rx[:, None] - c.points[None, :]), axis=1)
        shifts = np.arange(c.bits_per_symbol - 1, -1, -1)
        expected = ((nearest[:, None] >> shifts) & 1).astype(np.uint8)
        assert np.array_equal(got, expected)


class TestResourceGrid:
    def test_all_data_grid_fills_completely(self):
        g = ResourceGrid(2, 4)
        vals = np.arange(2 * 12 * 4, dtype=complex)
        fill_data(g, vals)
        assert np.count_nonzero(g.cells) == vals.size - 1  # value 0 stays zero
        assert np.array_equal(extract_data(g), vals)

    def test_fill_skips_ptrs(self):
        g = ResourceGrid(4, 14)
        cfg = PtrsConfig(time_density=1, freq_density_rb=1)
        pos = ptrs_re_positions(cfg, 4, 14)
        map_ptrs(g, pos, cfg.pilot_value, 0.0)
        n_data = g.count(ReKind.DATA)
        assert n_data == 4 * 12 * 14 - len(pos)
        vals = np.full(n_data, 2 + 2j)
        fill_data(g, vals)
        for sc, s in pos:
            assert g.cells[sc, s] == 1 + 0j
            assert g.labels[sc, s] == int(ReKind.PTRS)

    def test_fill_count_mismatch(self):
        g = ResourceGrid(1, 2)
        with pytest.raises(ValueError):
            fill_data(g, np.zeros(5, dtype=complex))

    def test_refill_is_idempotent(self):
        g = ResourceGrid(2, 3)
        vals = np.random.default_rng(0).standard_normal(72) + 0j
        fill_data(g, vals)
        snapshot = g.cells.copy()
        fill_data(g, vals)
        assert np.array_equal(g.cells, snapshot)

    def test_traversal_is_symbol_major(self):
        g = ResourceGrid(1, 2)
        vals = np.arange(24, dtype=complex)
        fill_data(g, vals)
        # first 12 values land in symbol 0, ascending subcarrier
        assert np.array_equal(g.cells[:, 0], vals[:12])
        assert np.array_equal(g.cells[:, 1], vals[12:])

    def test_labels_partition(self):
        g = ResourceGrid(4, 14)
        map_ptrs(g, ptrs_re_positions(PtrsConfig(freq_density_rb=2), 4, 14), 1 + 0j, 0.0)
        kinds = [g.count(k) for k in ReKind]
        assert sum(kinds) == g.n_subcarriers * g.n_symbols

    def test_dimensions_preserved(self):
        g = ResourceGrid(3, 7)
        shape = g.cells.shape
        map_ptrs(g, ptrs_re_positions(PtrsConfig(), 3, 7), 1 + 0j, 3.0)
        fill_data(g, np.zeros(g.count(ReKind.DATA), dtype=complex))
        assert g.cells.shape == shape and g.labels.shape == shape

    def test_invalid_size(self):
        with pytest.raises(ValueError):
            ResourceGrid(0, 14)

    def test_csv_dump(self, tmp_path):
        g = ResourceGrid(1, 2)
        map_ptrs(g, {(0, 0)}, 1 + 0j, 0.0)
        path = tmp_path / "grid.csv"
        grid_to_csv(g, path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "subcarrier,symbol,re_kind,real,imag"
        assert len(lines) == 1 + 24
        assert lines[1].startswith("0,0,ptrs,1.0,")
