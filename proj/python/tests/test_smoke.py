import math

import pytest

import bbmh


def test_identical_sets_match_everywhere():
    values = bbmh.minhash([3, 17, 42, 99], k=64, seed=5)
    low = bbmh.truncate_b(values, 4)
    assert bbmh.match_count(low, low, 4) == 64


def test_expansion_inner_product_counts_matches():
    x, y = [1, 0, 3], [1, 2, 3]
    ones_x, ones_y = set(bbmh.expand(x, 2)), set(bbmh.expand(y, 2))
    assert sorted(bbmh.expand(x, 2)) == [2, 7, 8]
    assert len(ones_x & ones_y) == bbmh.match_count(x, y, 2) == 2


def test_formula_close_to_exact_probability():
    formula = bbmh.bbit_constants(500, 250, 100, 50, 1)["Pb"]
    assert abs(formula - bbmh.exact_pb(500, 250, 100, 50, 1)) < 4e-4


def test_resemblance_estimate_is_near_truth():
    s1, s2 = list(range(0, 300)), list(range(100, 400))
    k, b = 500, 8
    t = bbmh.match_count(bbmh.truncate_b(bbmh.minhash(s1, k, seed=3), b),
                         bbmh.truncate_b(bbmh.minhash(s2, k, seed=3), b), b)
    r = bbmh.estimate_resemblance(t, k, 2**32, 300, 300, b)
    sd = math.sqrt(bbmh.variance_bbit(2**32, 300, 300, 200, b, k))
    assert abs(r - 0.5) < 4 * sd


def test_count_min_conserves_mass():
    coords = bbmh.sketch("cm", 1000, [1, 5, 9], [0.5, 2.0, -1.0], k=8)
    assert len(coords) == 8
    assert math.isclose(sum(coords), 1.5)


def test_variance_ratio_favors_bbit():
    assert bbmh.g_ratio(10**6, 100000, 50000, 25000) > 1


def test_train_separates_toy_data():
    records = [(1, [0, 1]), (1, [0, 2]), (-1, [3, 4]), (-1, [3, 5])]
    w = bbmh.train(records, dim=6, loss="logistic", C=10.0)
    assert all(bbmh.predict(w, idx) == y for y, idx in records)


def test_analog_generator_is_deterministic():
    a = bbmh.generate_analog(records=10, dim=2**16, nonzeros=200, seed=4)
    assert a == bbmh.generate_analog(records=10, dim=2**16, nonzeros=200, seed=4)
    assert {label for label, _ in a} <= {-1, 1}


def test_errors_map_to_python_exceptions(tmp_path):
    with pytest.raises(ValueError):
        bbmh.truncate_b([1, 2], 0)
    with pytest.raises(OSError):
        bbmh.hash_file(str(tmp_path / "missing.txt"), str(tmp_path / "out.bbmh"))
    data = tmp_path / "d.txt"
    data.write_text("+1 1:1 4:1\n-1 2:1\n")
    report = bbmh.hash_file(str(data), str(tmp_path / "d.bbmh"), k=16, b=2)
    assert report["payload_bytes"] == 2 * 4
