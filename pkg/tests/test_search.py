import json

import pytest

from socialist_sieve.collision import CollisionConfig
from socialist_sieve.conditions import quarter_factorial_filter, rs_filter, t_filter
from socialist_sieve.leftfact import lfc_check
from socialist_sieve.primegen import PrimeRange
from socialist_sieve.search import (
    CheckpointError,
    SearchConfig,
    SearchInterrupted,
    checkpoint_resume,
    config_digest,
    run_search,
)


def small_config(**kw):
    defaults = dict(range=PrimeRange(6, 10_001), filters=("rs",), chunk_size=500, workers=2)
    defaults.update(kw)
    return SearchConfig(**defaults)


def read_summary(path):
    lines = path.read_bytes().decode().splitlines()
    return [json.loads(line) for line in lines[:-1]], json.loads(lines[-1])


class TestConfig:
    def test_filters_are_normalized(self):
        cfg = SearchConfig(range=PrimeRange(6, 100), filters=("t", "rs"))
        assert cfg.filters == ("rs", "t")

    def test_rs_is_mandatory(self):
        with pytest.raises(ValueError, match="rs"):
            SearchConfig(range=PrimeRange(6, 100), filters=("t",))

    def test_unknown_filter(self):
        with pytest.raises(ValueError, match="unknown"):
            SearchConfig(range=PrimeRange(6, 100), filters=("rs", "zz"))

    def test_linear_screens_are_desk_bounded(self):
        with pytest.raises(ValueError, match="qf/lfc"):
            SearchConfig(range=PrimeRange(6, (1 << 24) + 2), filters=("rs", "qf"))

    def test_output_format(self):
        with pytest.raises(ValueError):
            SearchConfig(range=PrimeRange(6, 100), output_format="xml")

    def test_digest_ignores_workers(self):
        a = small_config(workers=1)
        b = small_config(workers=7)
        assert config_digest(a) == config_digest(b)
        c = small_config(chunk_size=501)
        assert config_digest(a) != config_digest(c)


class TestCounts:
    def test_rs_only_matches_condition_filter(self, tmp_path, primes_1e4):
        out = tmp_path / "r.jsonl"
        report = run_search(small_config(), out=out)
        expected = sum(1 for p in primes_1e4 if p > 5 and rs_filter(int(p)).rs_pass)
        assert report.rs_passed == expected
        assert report.eliminated == expected
        assert report.candidates == 0 and report.survivors == []

    def test_conservation(self, tmp_path):
        report = run_search(small_config(filters=("rs", "t")), out=tmp_path / "o.jsonl")
        assert report.primes_seen == sum(report.rejected.values()) + report.eliminated + report.candidates

    def test_all_screens_together(self, tmp_path):
        report = run_search(
            small_config(filters=("rs", "t", "qf", "lfc")), out=tmp_path / "o.jsonl"
        )
        assert report.candidates == 0
        assert report.rejected["qf"] > 0
        assert report.rejected["lfc"] > 0
        assert report.primes_seen == sum(report.rejected.values()) + report.eliminated

    def test_filter_order_invariance(self, tmp_path):
        plain = run_search(small_config(), out=tmp_path / "a.jsonl")
        screened = run_search(small_config(filters=("rs", "t")), out=tmp_path / "b.jsonl")
        # the cubic screen only reroutes primes away from the scan; the
        # final candidate set is unchanged
        assert plain.survivors == screened.survivors == []
        assert plain.candidates == screened.candidates == 0
        assert screened.eliminated < plain.eliminated

    def test_compiled_pipeline_matches_pure_screens(self, tmp_path, primes_1e4):
        # every stage of the numba chunk kernel against the pure-Python
        # module functions, per-stage rejection counts included
        report = run_search(
            small_config(filters=("rs", "t", "qf", "lfc")), out=tmp_path / "o.jsonl"
        )
        rej_t = rej_qf = rej_lfc = survivors = 0
        for p in primes_1e4:
            p = int(p)
            if p <= 5 or not rs_filter(p).rs_pass:
                continue
            if not t_filter(p).t_pass:
                rej_t += 1
            elif not quarter_factorial_filter(p):
                rej_qf += 1
            elif not lfc_check(p):
                rej_lfc += 1
            else:
                survivors += 1
        assert report.rejected["t"] == rej_t
        assert report.rejected["qf"] == rej_qf
        assert report.rejected["lfc"] == rej_lfc
        assert report.eliminated + report.candidates == survivors

    def test_range_including_tiny_primes(self, tmp_path, primes_1e4):
        report = run_search(
            SearchConfig(range=PrimeRange(2, 100), filters=("rs",)), out=tmp_path / "o.jsonl"
        )
        assert report.primes_seen == 25  # pi(100), with 2, 3, 5 screened out
        expected = sum(1 for p in primes_1e4 if 5 < p < 100 and rs_filter(int(p)).rs_pass)
        assert report.eliminated + report.candidates == expected
        assert report.candidates == 0

    def test_pure_python_fallback_above_kernel_limit(self, tmp_path):
        # primes beyond 2**31 take the exact interpreted path end to end
        lo = 1 << 31
        cfg = SearchConfig(
            range=PrimeRange(lo, lo + 4000),
            filters=("rs", "t"),
            collision=CollisionConfig(witness_mode=True),
            chunk_size=50,
        )
        report = run_search(cfg, out=tmp_path / "o.jsonl")
        assert report.primes_seen > 0
        assert report.primes_seen == sum(report.rejected.values()) + report.eliminated + report.candidates
        assert report.candidates == 0
        expected = 0
        for p in range(lo + 1, lo + 4000, 2):
            from socialist_sieve.modmath import is_prime

            if is_prime(p) and rs_filter(p).rs_pass and t_filter(p).t_pass:
                expected += 1
        assert report.eliminated == expected
        records, _ = read_summary(tmp_path / "o.jsonl")
        for rec in records:
            p = rec["p"]
            i, j, v = rec["witness"]
            f = 1
            for k in range(2, i + 1):
                f = f * k % p
            assert f == v
            if j == p - 2:
                assert v == 1  # Wilson: (p-2)! == 1
            elif j == p - 1:
                assert v == p - 1  # Wilson: (p-1)! == -1
            else:
                for k in range(i + 1, j + 1):
                    f = f * k % p
                assert f == v


class TestDeterminism:
    def test_byte_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        run_search(small_config(), out=a)
        run_search(small_config(), out=b)
        assert a.read_bytes() == b.read_bytes()

    def test_worker_count_invariance(self, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        run_search(small_config(workers=1), out=a)
        run_search(small_config(workers=2), out=b)
        assert a.read_bytes() == b.read_bytes()

    def test_chunk_size_invariance_of_counters(self, tmp_path):
        reports = [
            run_search(small_config(chunk_size=c), out=tmp_path / f"c{c}.jsonl")
            for c in (100, 500, 5000)
        ]
        dicts = [r.to_json_dict() for r in reports]
        assert dicts[0] == dicts[1] == dicts[2]

    def test_witness_mode_does_not_change_statuses(self, tmp_path):
        plain = run_search(small_config(), out=tmp_path / "a.jsonl")
        witnessed = run_search(
            small_config(collision=CollisionConfig(witness_mode=True)), out=tmp_path / "b.jsonl"
        )
        assert plain.eliminated == witnessed.eliminated
        assert plain.iterations_mean == witnessed.iterations_mean


class TestOutputFormats:
    def test_jsonl_schema(self, tmp_path):
        out = tmp_path / "o.jsonl"
        report = run_search(small_config(collision=CollisionConfig(witness_mode=True)), out=out)
        records, summary = read_summary(out)
        assert len(records) == report.eliminated + report.candidates
        for rec in records:
            assert rec["status"] in ("eliminated", "candidate", "iteration_cap")
            assert rec["iterations"] >= 1
            if "witness" in rec:
                i, j, v = rec["witness"]
                assert 2 <= i < j <= rec["p"] - 1
        assert summary["primes_seen"] == report.primes_seen
        assert summary["rejected"] == report.rejected
        assert summary["survivors"] == []
        assert summary["t_passed"] is None

    def test_records_sorted_by_prime(self, tmp_path):
        out = tmp_path / "o.jsonl"
        run_search(small_config(chunk_size=100, workers=2), out=out)
        records, _ = read_summary(out)
        ps = [r["p"] for r in records]
        assert ps == sorted(ps)

    def test_csv_format(self, tmp_path):
        out = tmp_path / "o.csv"
        report = run_search(small_config(output_format="csv"), out=out)
        lines = out.read_text().splitlines()
        assert lines[0] == "p,status,iterations,witness_i,witness_j,witness_value"
        assert len(lines) == 1 + report.eliminated + report.candidates
        first = lines[1].split(",")
        assert first[1] == "eliminated"


class TestEscalation:
    def test_capped_scans_are_settled_by_the_oracle(self, tmp_path):
        cfg = small_config(
            range=PrimeRange(6, 2000),
            collision=CollisionConfig(max_iterations=3),
        )
        out = tmp_path / "o.jsonl"
        report = run_search(cfg, out=out)
        records, summary = read_summary(out)
        capped = [r for r in records if r["status"] == "iteration_cap"]
        assert capped, "expected at least one capped scan"
        assert report.candidates == len(capped)
        assert report.refuted_candidates == len(capped)
        assert report.survivors == []

    def test_caps_above_desk_bound_stay_unresolved(self, tmp_path, capsys):
        lo = (1 << 24) + 2
        cfg = SearchConfig(
            range=PrimeRange(lo, lo + 60_000),
            filters=("rs",),
            collision=CollisionConfig(max_iterations=1),
            chunk_size=1000,
        )
        report = run_search(cfg, out=tmp_path / "o.jsonl")
        assert report.candidates >= 1
        assert len(report.survivors) == report.candidates
        err = capsys.readouterr().err
        assert "unresolved-candidate" in err


class TestCheckpointing:
    def test_interrupt_then_resume_is_byte_identical(self, tmp_path):
        full_out = tmp_path / "full.jsonl"
        run_search(small_config(range=PrimeRange(6, 100_000)), out=full_out)

        ck = tmp_path / "ck.json"
        part_out = tmp_path / "part.jsonl"
        cfg = small_config(range=PrimeRange(6, 100_000), checkpoint_path=str(ck))
        with pytest.raises(SearchInterrupted):
            run_search(cfg, out=part_out, stop_after_chunks=3)
        assert ck.exists()
        state = checkpoint_resume(cfg, ck)
        assert len(state.completed_chunks) == 3
        report = run_search(cfg, resume=True, out=part_out)
        assert part_out.read_bytes() == full_out.read_bytes()
        assert report.candidates == 0

    def test_resume_counters_equal_uninterrupted(self, tmp_path):
        ck = tmp_path / "ck.json"
        cfg = small_config(checkpoint_path=str(ck))
        baseline = run_search(small_config(), out=tmp_path / "a.jsonl")
        with pytest.raises(SearchInterrupted):
            run_search(cfg, out=tmp_path / "b.jsonl", stop_after_chunks=2)
        resumed = run_search(cfg, resume=True, out=tmp_path / "b.jsonl")
        assert resumed.to_json_dict() == baseline.to_json_dict()

    def test_digest_mismatch_refuses(self, tmp_path):
        ck = tmp_path / "ck.json"
        cfg = small_config(checkpoint_path=str(ck))
        with pytest.raises(SearchInterrupted):
            run_search(cfg, out=tmp_path / "o.jsonl", stop_after_chunks=1)
        altered = small_config(range=PrimeRange(6, 20_000), checkpoint_path=str(ck))
        with pytest.raises(CheckpointError, match="different configuration"):
            run_search(altered, resume=True, out=tmp_path / "o.jsonl")

    def test_corrupt_checkpoint_refuses(self, tmp_path):
        ck = tmp_path / "ck.json"
        ck.write_text("{ not json")
        cfg = small_config(checkpoint_path=str(ck))
        with pytest.raises(CheckpointError, match="corrupt"):
            run_search(cfg, resume=True, out=tmp_path / "o.jsonl")

    def test_finished_run_refuses_resume(self, tmp_path):
        ck = tmp_path / "ck.json"
        cfg = small_config(checkpoint_path=str(ck))
        run_search(cfg, out=tmp_path / "o.jsonl")
        with pytest.raises(CheckpointError, match="complete"):
            run_search(cfg, resume=True, out=tmp_path / "o.jsonl")

    def test_resume_requires_file_output(self, tmp_path):
        ck = tmp_path / "ck.json"
        cfg = small_config(checkpoint_path=str(ck))
        with pytest.raises(SearchInterrupted):
            run_search(cfg, out=tmp_path / "o.jsonl", stop_after_chunks=1)
        with pytest.raises(CheckpointError, match="file output"):
            run_search(cfg, resume=True, out=None)

    def test_truncated_output_refuses(self, tmp_path):
        ck = tmp_path / "ck.json"
        out = tmp_path / "o.jsonl"
        cfg = small_config(checkpoint_path=str(ck))
        with pytest.raises(SearchInterrupted):
            run_search(cfg, out=out, stop_after_chunks=2)
        out.write_bytes(b"x")
        with pytest.raises(CheckpointError, match="shorter"):
            run_search(cfg, resume=True, out=out)

    def test_csv_resume_byte_identical(self, tmp_path):
        full = tmp_path / "full.csv"
        run_search(small_config(output_format="csv"), out=full)
        ck = tmp_path / "ck.json"
        part = tmp_path / "part.csv"
        cfg = small_config(output_format="csv", checkpoint_path=str(ck))
        with pytest.raises(SearchInterrupted):
            run_search(cfg, out=part, stop_after_chunks=2)
        run_search(cfg, resume=True, out=part)
        assert part.read_bytes() == full.read_bytes()
