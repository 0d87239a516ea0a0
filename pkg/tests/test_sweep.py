from grasstensor.sweep import SweepResult, check_setup, run_sweep, valid_dims


def test_valid_dims_small():
    dims = list(valid_dims(4))
    assert (3, (2, 2, 2), (1, 1, 2)) in dims
    assert (4, (2, 2, 2), (2, 2, 1)) not in dims  # i = -1
    assert (4, (2, 2, 2), (2, 2, 1)) in list(valid_dims(4, generic_only=False))
    for k, h, a in dims:
        assert sum(a) == k + 1 and all(2 <= x < k for x in h)
        assert all(1 <= aj <= hj for aj, hj in zip(a, h))
        assert sum(h) + 1 - 2 * k >= 0


def test_check_setup_records_both_conditions():
    res = SweepResult()
    check_setup(6, (3, 3, 5), (2, 2, 3), res)
    assert res.ok and res.checked == 1
    assert (6, (3, 3, 5), (2, 2, 3), 3) in res.both_conditions


def test_check_setup_records_printed_count_discrepancy():
    res = SweepResult()
    check_setup(9, (3, 8, 8), (3, 3, 4), res, with_oracle=False)
    assert res.ok and res.entries == 0
    # (k, h, alpha, mode, view, printed count, enumeration)
    assert (9, (3, 8, 8), (3, 3, 4), 2, 3, 8, 3) in res.count_discrepancies


def test_small_sweep_is_clean():
    seen = []
    res = run_sweep(6, progress=lambda dims, r: seen.append(dims))
    assert res.ok, res.failures[:3]
    assert res.checked == len(seen) > 0 and res.entries > 0
    assert res.no_full_mode == []
